//! JSON interchange formats for functors and indexed categories.
//!
//! Indexed file: `{"base": cat, "fibers": {x: cat}, "arrows": {f: maps},
//! "compositors": {"f|g": {c: k}}, "unitors": {x: {a: k}}}`. Compositor
//! keys join `f` and `g` with `|`, where `μ_{f,g}: Mf ∘ Mg ⇒ M(g ∘ f)` has
//! one component per object `c` of the fiber over the target of `g`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cat::{validate_category, validate_functor, CatError, FinCat, Mor, Obj, RawCategory};
use crate::indexed::{IndexedCat, IndexedError, IndexedParts};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{context}: {source}")]
    Category {
        context: String,
        #[source]
        source: CatError,
    },
    #[error(transparent)]
    Indexed(#[from] IndexedError),
    #[error("missing entry: {0}")]
    Missing(String),
    #[error("unknown entry: {0}")]
    Unknown(String),
    #[error("compositor key `{0}` splits into composable base morphisms in more than one way")]
    AmbiguousKey(String),
}

/// A category given inline or by file path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatRef {
    Path(String),
    Inline(RawCategory),
}

/// Identifier tables of a functor whose source and target are implied.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctorMaps {
    pub on_objects: BTreeMap<String, String>,
    pub on_morphisms: BTreeMap<String, String>,
}

/// Functor file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctor {
    pub source: CatRef,
    pub target: CatRef,
    pub on_objects: BTreeMap<String, String>,
    pub on_morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawIndexed {
    pub base: RawCategory,
    pub fibers: BTreeMap<String, RawCategory>,
    pub arrows: BTreeMap<String, RawFunctorMaps>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub compositors: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitors: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

fn cat_err(context: String) -> impl FnOnce(CatError) -> FormatError {
    move |source| FormatError::Category { context, source }
}

/// Split `f|g` into composable base morphisms `f: x → y`, `g: y → z`,
/// trying every `|` so identifiers may themselves contain `|`.
pub fn split_pair_key(base: &FinCat, key: &str) -> Result<(Mor, Mor), FormatError> {
    let found: Vec<(Mor, Mor)> = key
        .match_indices('|')
        .filter_map(|(i, _)| {
            let (f, g) = (base.mor(&key[..i])?, base.mor(&key[i + 1..])?);
            (base.tgt(f) == base.src(g)).then_some((f, g))
        })
        .collect();
    match found.as_slice() {
        [one] => Ok(*one),
        [] => Err(FormatError::Unknown(format!("compositor key `{key}`"))),
        _ => Err(FormatError::AmbiguousKey(key.into())),
    }
}

/// Components keyed by object identifier of `over`, as morphisms of `into`;
/// absent entries are identities at `default(c)`.
fn components(
    table: &BTreeMap<String, String>,
    over: &FinCat,
    into: &FinCat,
    default: impl Fn(Obj) -> Obj,
    context: &str,
) -> Result<Vec<Mor>, FormatError> {
    for name in table.keys() {
        over.try_obj(name).map_err(cat_err(context.into()))?;
    }
    over.objects()
        .map(|c| match table.get(over.obj_name(c)) {
            Some(k) => into.try_mor(k).map_err(cat_err(context.into())),
            None => Ok(into.id(default(c))),
        })
        .collect()
}

pub fn validate_indexed(raw: &RawIndexed) -> Result<IndexedCat, FormatError> {
    let base = Arc::new(validate_category(&raw.base).map_err(cat_err("base".into()))?);
    for name in raw.fibers.keys() {
        base.try_obj(name).map_err(cat_err("fibers".into()))?;
    }
    for name in raw.arrows.keys() {
        base.try_mor(name).map_err(cat_err("arrows".into()))?;
    }
    let fibers = base
        .objects()
        .map(|x| {
            let name = base.obj_name(x);
            let rc = raw
                .fibers
                .get(name)
                .ok_or_else(|| FormatError::Missing(format!("fiber over `{name}`")))?;
            Ok(Arc::new(
                validate_category(rc).map_err(cat_err(format!("fiber over `{name}`")))?,
            ))
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let arrows = base
        .morphisms()
        .map(|f| {
            let name = base.mor_name(f);
            let maps = raw
                .arrows
                .get(name)
                .ok_or_else(|| FormatError::Missing(format!("arrow functor of `{name}`")))?;
            validate_functor(
                fibers[base.tgt(f).idx()].clone(),
                fibers[base.src(f).idx()].clone(),
                &maps.on_objects,
                &maps.on_morphisms,
            )
            .map_err(|e| {
                IndexedError::BadFiberFunctor {
                    morphism: name.into(),
                    reason: e.to_string(),
                }
                .into()
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let mut compositors = HashMap::new();
    for (key, table) in &raw.compositors {
        let (f, g) = split_pair_key(&base, key)?;
        let (x, z) = (base.src(f), base.tgt(g));
        let (mf, mg) = (&arrows[f.idx()], &arrows[g.idx()]);
        let comps = components(
            table,
            &fibers[z.idx()],
            &fibers[x.idx()],
            |c| mf.obj(mg.obj(c)),
            &format!("compositor `{key}`"),
        )?;
        compositors.insert((f, g), comps);
    }
    let mut unitors = HashMap::new();
    for (name, table) in raw.unitors.iter().flatten() {
        let x = base.try_obj(name).map_err(cat_err("unitors".into()))?;
        let mx = &fibers[x.idx()];
        let comps = components(table, mx, mx, |a| a, &format!("unitor at `{name}`"))?;
        unitors.insert(x, comps);
    }
    Ok(IndexedCat::new(IndexedParts {
        base,
        fibers,
        arrows,
        compositors,
        unitors,
    })?)
}

pub fn indexed_to_raw(m: &IndexedCat) -> RawIndexed {
    let parts = m.to_parts();
    let base = &parts.base;
    let fibers = base
        .objects()
        .map(|x| (base.obj_name(x).to_owned(), m.fiber(x).to_raw()))
        .collect();
    let arrows = base
        .morphisms()
        .map(|f| {
            let (on_objects, on_morphisms) = m.arrow(f).to_names();
            (
                base.mor_name(f).to_owned(),
                RawFunctorMaps {
                    on_objects,
                    on_morphisms,
                },
            )
        })
        .collect();
    let named = |over: &FinCat, into: &FinCat, table: &[Mor]| -> BTreeMap<String, String> {
        over.objects()
            .map(|c| (over.obj_name(c).to_owned(), into.mor_name(table[c.idx()]).to_owned()))
            .collect()
    };
    let compositors = parts
        .compositors
        .iter()
        .map(|(&(f, g), t)| {
            let key = format!("{}|{}", base.mor_name(f), base.mor_name(g));
            (key, named(m.fiber(base.tgt(g)), m.fiber(base.src(f)), t))
        })
        .collect();
    let unitors: BTreeMap<_, _> = parts
        .unitors
        .iter()
        .map(|(&x, t)| (base.obj_name(x).to_owned(), named(m.fiber(x), m.fiber(x), t)))
        .collect();
    RawIndexed {
        base: base.to_raw(),
        fibers,
        arrows,
        compositors,
        unitors: (!unitors.is_empty()).then_some(unitors),
    }
}
