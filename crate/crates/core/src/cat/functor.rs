use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::predicates::{is_iso, iso_classes};
use super::{CatError, FinCat, Mor, Obj};
use crate::par;

pub(crate) fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A functor between finite categories, checked exhaustively on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
}

impl FinFunctor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Result<FinFunctor, CatError> {
        let f = FinFunctor {
            source,
            target,
            obj_map,
            mor_map,
        };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<(), CatError> {
        let (s, t) = (&*self.source, &*self.target);
        let bad = |w: String| Err(CatError::NotAFunctor { witness: w });
        if self.obj_map.len() != s.num_objects() || self.mor_map.len() != s.num_morphisms() {
            return bad("object or morphism table has the wrong length".into());
        }
        if self.obj_map.iter().any(|o| o.idx() >= t.num_objects())
            || self.mor_map.iter().any(|m| m.idx() >= t.num_morphisms())
        {
            return bad("table entry outside the target".into());
        }
        for m in s.morphisms() {
            let fm = self.mor(m);
            if t.src(fm) != self.obj(s.src(m)) || t.tgt(fm) != self.obj(s.tgt(m)) {
                return bad(format!(
                    "`{}` maps to `{}`, which has the wrong source or target",
                    s.mor_name(m),
                    t.mor_name(fm)
                ));
            }
        }
        for x in s.objects() {
            if self.mor(s.id(x)) != t.id(self.obj(x)) {
                return bad(format!("identity of `{}` is not preserved", s.obj_name(x)));
            }
        }
        let broken = par::find_first_range(s.num_morphisms(), |f| {
            let f = Mor(f as u32);
            s.outgoing(s.tgt(f))
                .iter()
                .find(|&&g| self.mor(s.compose(g, f)) != t.compose(self.mor(g), self.mor(f)))
                .map(|&g| (f, g))
        });
        if let Some((f, g)) = broken {
            return bad(format!(
                "composite of `{}` then `{}` is not preserved",
                s.mor_name(f),
                s.mor_name(g)
            ));
        }
        Ok(())
    }

    pub fn identity(c: Arc<FinCat>) -> FinFunctor {
        FinFunctor {
            obj_map: c.objects().collect(),
            mor_map: c.morphisms().collect(),
            source: c.clone(),
            target: c,
        }
    }

    /// `other ∘ self`. Panics if the categories do not match.
    pub fn then(&self, other: &FinFunctor) -> FinFunctor {
        assert!(same_cat(&self.target, &other.source), "functors are not composable");
        FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&o| other.obj(o)).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor(m)).collect(),
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    #[inline]
    pub fn obj(&self, o: Obj) -> Obj {
        self.obj_map[o.idx()]
    }

    #[inline]
    pub fn mor(&self, m: Mor) -> Mor {
        self.mor_map[m.idx()]
    }

    pub fn obj_map(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[Mor] {
        &self.mor_map
    }

    /// Name tables for serialization.
    pub fn to_names(&self) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
        let (s, t) = (&*self.source, &*self.target);
        (
            s.objects()
                .map(|o| (s.obj_name(o).to_owned(), t.obj_name(self.obj(o)).to_owned()))
                .collect(),
            s.morphisms()
                .map(|m| (s.mor_name(m).to_owned(), t.mor_name(self.mor(m)).to_owned()))
                .collect(),
        )
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        let injective = |v: Vec<usize>, n: usize| {
            let mut seen = vec![false; n];
            v.len() == n && v.into_iter().all(|i| !std::mem::replace(&mut seen[i], true))
        };
        injective(
            self.obj_map.iter().map(|o| o.idx()).collect(),
            self.target.num_objects(),
        ) && injective(
            self.mor_map.iter().map(|m| m.idx()).collect(),
            self.target.num_morphisms(),
        )
    }
}

/// Build a functor from identifier tables, reporting unknown or missing
/// entries as [`CatError::NotAFunctor`].
pub fn validate_functor(
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    on_objects: &BTreeMap<String, String>,
    on_morphisms: &BTreeMap<String, String>,
) -> Result<FinFunctor, CatError> {
    let missing = |what: &str, name: &str| CatError::NotAFunctor {
        witness: format!("no image given for {what} `{name}`"),
    };
    let obj_map = source
        .objects()
        .map(|o| {
            let name = source.obj_name(o);
            on_objects
                .get(name)
                .ok_or_else(|| missing("object", name))
                .and_then(|img| target.try_obj(img))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mor_map = source
        .morphisms()
        .map(|m| {
            let name = source.mor_name(m);
            on_morphisms
                .get(name)
                .ok_or_else(|| missing("morphism", name))
                .and_then(|img| target.try_mor(img))
        })
        .collect::<Result<Vec<_>, _>>()?;
    for name in on_objects.keys() {
        source.try_obj(name)?;
    }
    for name in on_morphisms.keys() {
        source.try_mor(name)?;
    }
    FinFunctor::new(source, target, obj_map, mor_map)
}

/// A natural transformation `F ⇒ G`, checked exhaustively on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    source: FinFunctor,
    target: FinFunctor,
    components: Vec<Mor>,
}

impl NatTrans {
    pub fn new(source: FinFunctor, target: FinFunctor, components: Vec<Mor>) -> Result<NatTrans, CatError> {
        let bad = |w: String| Err(CatError::NotNatural { witness: w });
        if !same_cat(&source.source, &target.source) || !same_cat(&source.target, &target.target) {
            return bad("functors have different source or target".into());
        }
        let (c, d) = (&*source.source, &*source.target);
        if components.len() != c.num_objects() {
            return bad(format!(
                "{} components for {} objects",
                components.len(),
                c.num_objects()
            ));
        }
        for x in c.objects() {
            let a = components[x.idx()];
            if a.idx() >= d.num_morphisms() || d.src(a) != source.obj(x) || d.tgt(a) != target.obj(x) {
                return bad(format!("component at `{}` has the wrong shape", c.obj_name(x)));
            }
        }
        let broken = par::find_first_range(c.num_morphisms(), |m| {
            let m = Mor(m as u32);
            let (x, y) = (c.src(m), c.tgt(m));
            let lhs = d.compose(target.mor(m), components[x.idx()]);
            let rhs = d.compose(components[y.idx()], source.mor(m));
            (lhs != rhs).then_some(m)
        });
        if let Some(m) = broken {
            return bad(format!("naturality square at `{}` does not commute", c.mor_name(m)));
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: FinFunctor) -> NatTrans {
        let d = f.target.clone();
        let components = f.obj_map.iter().map(|&o| d.id(o)).collect();
        NatTrans {
            source: f.clone(),
            target: f,
            components,
        }
    }

    pub fn source(&self) -> &FinFunctor {
        &self.source
    }

    pub fn target(&self) -> &FinFunctor {
        &self.target
    }

    #[inline]
    pub fn at(&self, x: Obj) -> Mor {
        self.components[x.idx()]
    }

    pub fn components(&self) -> &[Mor] {
        &self.components
    }

    /// `other ∘ self` (vertical composite).
    pub fn then(&self, other: &NatTrans) -> NatTrans {
        assert!(self.target == other.source, "transformations are not composable");
        let d = &*self.source.target;
        NatTrans {
            source: self.source.clone(),
            target: other.target.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(&a, &b)| d.compose(b, a))
                .collect(),
        }
    }

    /// Every component is invertible.
    pub fn is_iso(&self) -> bool {
        let d = &*self.source.target;
        self.components.iter().all(|&a| is_iso(d, a).is_some())
    }
}

/// Build a natural transformation from a component table keyed by object
/// identifier.
pub fn validate_nat_trans(
    source: FinFunctor,
    target: FinFunctor,
    components: &BTreeMap<String, String>,
) -> Result<NatTrans, CatError> {
    let c = source.source.clone();
    let d = source.target.clone();
    let comps = c
        .objects()
        .map(|x| {
            let name = c.obj_name(x);
            let img = components.get(name).ok_or_else(|| CatError::NotNatural {
                witness: format!("no component given at `{name}`"),
            })?;
            d.try_mor(img)
        })
        .collect::<Result<Vec<_>, _>>()?;
    NatTrans::new(source, target, comps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub full: bool,
    pub faithful: bool,
    pub essentially_surjective: bool,
    pub equivalence: bool,
    /// Source objects `(x, y)` with `Hom(x, y) → Hom(Fx, Fy)` not onto.
    pub not_full: Option<(String, String)>,
    /// Distinct parallel morphisms with the same image.
    pub not_faithful: Option<(String, String)>,
    /// Target object not isomorphic to any image.
    pub not_essentially_surjective: Option<String>,
}

pub fn functor_properties(f: &FinFunctor) -> FunctorReport {
    let (s, t) = (&*f.source, &*f.target);
    let n = s.num_objects();
    let hom_check = |i: usize, want_full: bool| {
        let (x, y) = (Obj((i / n) as u32), Obj((i % n) as u32));
        let (fx, fy) = (f.obj(x), f.obj(y));
        let mut seen: Vec<Option<Mor>> = vec![None; t.num_morphisms()];
        for &m in s.hom(x, y) {
            let slot = &mut seen[f.mor(m).idx()];
            if let Some(prev) = *slot {
                if !want_full {
                    return Some((s.mor_name(prev).to_owned(), s.mor_name(m).to_owned()));
                }
            }
            *slot = Some(m);
        }
        if want_full && t.hom(fx, fy).iter().any(|&m| seen[m.idx()].is_none()) {
            return Some((s.obj_name(x).to_owned(), s.obj_name(y).to_owned()));
        }
        None
    };
    let not_full = par::find_first_range(n * n, |i| hom_check(i, true));
    let not_faithful = par::find_first_range(n * n, |i| hom_check(i, false));

    let classes = iso_classes(t);
    let mut class_of = vec![0; t.num_objects()];
    for (k, class) in classes.iter().enumerate() {
        for &o in class {
            class_of[o.idx()] = k;
        }
    }
    let mut hit = vec![false; classes.len()];
    for x in s.objects() {
        hit[class_of[f.obj(x).idx()]] = true;
    }
    let not_es = t
        .objects()
        .find(|o| !hit[class_of[o.idx()]])
        .map(|o| t.obj_name(o).to_owned());

    let (full, faithful, es) = (not_full.is_none(), not_faithful.is_none(), not_es.is_none());
    FunctorReport {
        full,
        faithful,
        essentially_surjective: es,
        equivalence: full && faithful && es,
        not_full,
        not_faithful,
        not_essentially_surjective: not_es,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn identity_functor_is_an_equivalence() {
        let c = Arc::new(gen::fi_truncated(2));
        let r = functor_properties(&FinFunctor::identity(c));
        assert!(r.equivalence);
    }

    #[test]
    fn collapse_to_a_point() {
        let c = Arc::new(gen::fi_truncated(2));
        let pt = Arc::new(gen::terminal());
        let f = FinFunctor::new(
            c.clone(),
            pt,
            vec![Obj(0); c.num_objects()],
            vec![Mor(0); c.num_morphisms()],
        )
        .unwrap();
        let r = functor_properties(&f);
        assert!(r.essentially_surjective && !r.faithful);
        assert!(!r.full, "Hom(2, 0) is empty but its image is not");
    }

    #[test]
    fn swapped_morphism_images_are_rejected() {
        let c = Arc::new(gen::fi_truncated(1));
        let mut mor_map: Vec<Mor> = c.morphisms().collect();
        mor_map.swap(0, 1);
        let err = FinFunctor::new(c.clone(), c.clone(), c.objects().collect(), mor_map);
        assert!(matches!(err, Err(CatError::NotAFunctor { .. })));
    }

    #[test]
    fn missing_component_is_reported() {
        let c = Arc::new(gen::fi_truncated(1));
        let id = FinFunctor::identity(c.clone());
        let mut comps = BTreeMap::new();
        comps.insert("0".to_owned(), c.mor_name(c.id(c.obj("0").unwrap())).to_owned());
        let err = validate_nat_trans(id.clone(), id, &comps).unwrap_err();
        assert!(matches!(err, CatError::NotNatural { .. }));
    }

    #[test]
    fn identity_transformation_is_natural() {
        let c = Arc::new(gen::fi_truncated(2));
        let id = FinFunctor::identity(c);
        let eta = NatTrans::identity(id.clone());
        assert!(NatTrans::new(id.clone(), id, eta.components().to_vec()).is_ok());
        assert!(eta.is_iso());
    }
}
