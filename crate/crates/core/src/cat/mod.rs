//! Finite categories as explicit composition tables.
//!
//! A [`FinCat`] is immutable once built. Objects and morphisms are addressed by
//! dense indices ([`Obj`], [`Mor`]) ordered by sorted identifier, so "least
//! index" and "lexicographically least identifier" coincide everywhere.

mod functor;
mod predicates;
mod raw;

pub(crate) use functor::same_cat;
pub use functor::{functor_properties, validate_functor, validate_nat_trans, FinFunctor, FunctorReport, NatTrans};
pub use predicates::{
    automorphism_group, automorphisms, below_set, is_ei, is_end_transitive, is_iso, is_mono, is_transitive,
    iso_classes, EiReport, TransitivityReport, TransitivityWitness,
};
pub use raw::{validate_category, RawCategory, RawComposite, RawMorphism};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::par;

/// Object of a [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(pub u32);

/// Morphism of a [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mor(pub u32);

impl Obj {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Mor {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("duplicate object identifier `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism identifier `{0}`")]
    DuplicateMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("object `{object}` has no identity morphism")]
    MissingIdentity { object: String },
    #[error("identity `{morphism}` of `{object}` is not an endomorphism of `{object}`")]
    IdentityShape { object: String, morphism: String },
    #[error("composition table lists `{first}` then `{then}`, which are not composable")]
    NonComposablePairInTable { first: String, then: String },
    #[error("composition table lists `{first}` then `{then}` twice with different results")]
    ConflictingComposite { first: String, then: String },
    #[error("composite of `{first}` then `{then}` is missing")]
    MissingComposite { first: String, then: String },
    #[error("composite of `{first}` then `{then}` is `{equals}`, which has the wrong source or target")]
    CompositeShape {
        first: String,
        then: String,
        equals: String,
    },
    #[error("identity `{identity}` is not a unit for `{morphism}`")]
    UnitViolation { identity: String, morphism: String },
    #[error("associativity fails on `{f}` then `{g}` then `{h}`")]
    AssociativityViolation { f: String, g: String, h: String },
    #[error("not a functor: {witness}")]
    NotAFunctor { witness: String },
    #[error("not a natural transformation: {witness}")]
    NotNatural { witness: String },
}

/// Unvalidated category data addressed by builder-local indices.
///
/// Generators fill one of these and hand it to [`FinCat::from_parts`], which
/// sorts, tabulates and validates it.
#[derive(Debug, Clone, Default)]
pub struct CatParts {
    pub objects: Vec<String>,
    /// `(identifier, source, target)`, endpoints indexing `objects`.
    pub morphisms: Vec<(String, usize, usize)>,
    /// Identity morphism of each object, indexing `morphisms`.
    pub identities: Vec<usize>,
}

impl CatParts {
    pub fn add_object(&mut self, name: impl Into<String>) -> usize {
        self.objects.push(name.into());
        self.objects.len() - 1
    }

    pub fn add_morphism(&mut self, name: impl Into<String>, src: usize, tgt: usize) -> usize {
        self.morphisms.push((name.into(), src, tgt));
        self.morphisms.len() - 1
    }
}

/// A finite category: identifier sets plus identity and composition tables.
#[derive(Clone)]
pub struct FinCat {
    obj_names: Vec<String>,
    obj_index: HashMap<String, Obj>,
    mor_names: Vec<String>,
    mor_index: HashMap<String, Mor>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<Mor>,
    is_identity: Vec<bool>,
    /// `table[f * n + g]` holds `g ∘ f`, or `NONE` when not composable.
    table: Vec<u32>,
    hom: Vec<Vec<Mor>>,
    outgoing: Vec<Vec<Mor>>,
    incoming: Vec<Vec<Mor>>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.obj_names.len())
            .field("morphisms", &self.mor_names.len())
            .finish()
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.obj_names == other.obj_names
            && self.mor_names == other.mor_names
            && self.src == other.src
            && self.tgt == other.tgt
            && self.identity == other.identity
            && self.table == other.table
    }
}

impl Eq for FinCat {}

impl FinCat {
    /// Build and validate a category from parts and a composition rule.
    ///
    /// `compose(g, f)` must return `g ∘ f` for every composable pair of part
    /// indices; it is never called on non-composable pairs.
    pub fn from_parts<F>(parts: CatParts, compose: F) -> Result<FinCat, CatError>
    where
        F: Fn(usize, usize) -> Option<usize>,
    {
        let n_obj = parts.objects.len();
        let n_mor = parts.morphisms.len();
        let mut outgoing = vec![Vec::new(); n_obj];
        for (i, (name, s, t)) in parts.morphisms.iter().enumerate() {
            if *s >= n_obj || *t >= n_obj {
                return Err(CatError::UnknownObject(format!("endpoint of `{name}`")));
            }
            outgoing[*s].push(i);
        }
        let mut table = vec![NONE; n_mor * n_mor];
        for f in 0..n_mor {
            let t = parts.morphisms[f].2;
            for &g in &outgoing[t] {
                if let Some(h) = compose(g, f) {
                    if h >= n_mor {
                        return Err(CatError::UnknownMorphism(format!("composite #{h}")));
                    }
                    table[f * n_mor + g] = h as u32;
                }
            }
        }
        Self::assemble(parts, table)
    }

    /// Sort by identifier, then run every structural check.
    fn assemble(parts: CatParts, table: Vec<u32>) -> Result<FinCat, CatError> {
        let n_obj = parts.objects.len();
        let n_mor = parts.morphisms.len();

        let mut obj_order: Vec<usize> = (0..n_obj).collect();
        obj_order.sort_by(|&a, &b| parts.objects[a].cmp(&parts.objects[b]));
        let mut obj_new = vec![0u32; n_obj];
        for (new, &old) in obj_order.iter().enumerate() {
            obj_new[old] = new as u32;
        }
        let mut mor_order: Vec<usize> = (0..n_mor).collect();
        mor_order.sort_by(|&a, &b| parts.morphisms[a].0.cmp(&parts.morphisms[b].0));
        let mut mor_new = vec![0u32; n_mor];
        for (new, &old) in mor_order.iter().enumerate() {
            mor_new[old] = new as u32;
        }

        let mut obj_names = Vec::with_capacity(n_obj);
        let mut obj_index = HashMap::with_capacity(n_obj);
        for &old in &obj_order {
            let name = parts.objects[old].clone();
            if obj_index.insert(name.clone(), Obj(obj_names.len() as u32)).is_some() {
                return Err(CatError::DuplicateObject(name));
            }
            obj_names.push(name);
        }
        let mut mor_names = Vec::with_capacity(n_mor);
        let mut mor_index = HashMap::with_capacity(n_mor);
        let mut src = Vec::with_capacity(n_mor);
        let mut tgt = Vec::with_capacity(n_mor);
        for &old in &mor_order {
            let (name, s, t) = &parts.morphisms[old];
            if mor_index.insert(name.clone(), Mor(mor_names.len() as u32)).is_some() {
                return Err(CatError::DuplicateMorphism(name.clone()));
            }
            mor_names.push(name.clone());
            src.push(Obj(obj_new[*s]));
            tgt.push(Obj(obj_new[*t]));
        }
        if parts.identities.len() != n_obj {
            let missing = obj_order
                .iter()
                .find(|&&o| o >= parts.identities.len())
                .map(|&o| parts.objects[o].clone())
                .unwrap_or_default();
            return Err(CatError::MissingIdentity { object: missing });
        }
        let mut identity = vec![Mor(0); n_obj];
        let mut is_identity = vec![false; n_mor];
        for (old_obj, &old_mor) in parts.identities.iter().enumerate() {
            let o = Obj(obj_new[old_obj]);
            if old_mor >= n_mor {
                return Err(CatError::MissingIdentity {
                    object: parts.objects[old_obj].clone(),
                });
            }
            let m = Mor(mor_new[old_mor]);
            if src[m.idx()] != o || tgt[m.idx()] != o {
                return Err(CatError::IdentityShape {
                    object: obj_names[o.idx()].clone(),
                    morphism: mor_names[m.idx()].clone(),
                });
            }
            identity[o.idx()] = m;
            is_identity[m.idx()] = true;
        }

        let mut new_table = vec![NONE; n_mor * n_mor];
        for f_old in 0..n_mor {
            for g_old in 0..n_mor {
                let h = table[f_old * n_mor + g_old];
                if h != NONE {
                    let f = mor_new[f_old] as usize;
                    let g = mor_new[g_old] as usize;
                    new_table[f * n_mor + g] = mor_new[h as usize];
                }
            }
        }

        let mut hom = vec![Vec::new(); n_obj * n_obj];
        let mut outgoing = vec![Vec::new(); n_obj];
        let mut incoming = vec![Vec::new(); n_obj];
        for m in 0..n_mor {
            let (s, t) = (src[m].idx(), tgt[m].idx());
            hom[s * n_obj + t].push(Mor(m as u32));
            outgoing[s].push(Mor(m as u32));
            incoming[t].push(Mor(m as u32));
        }

        let cat = FinCat {
            obj_names,
            obj_index,
            mor_names,
            mor_index,
            src,
            tgt,
            identity,
            is_identity,
            table: new_table,
            hom,
            outgoing,
            incoming,
        };
        cat.check_table()?;
        cat.check_units()?;
        cat.check_associativity()?;
        Ok(cat)
    }

    fn check_table(&self) -> Result<(), CatError> {
        let n = self.num_morphisms();
        for f in 0..n {
            for g in 0..n {
                let (f, g) = (Mor(f as u32), Mor(g as u32));
                let h = self.table[f.idx() * n + g.idx()];
                let composable = self.tgt(f) == self.src(g);
                match (composable, h) {
                    (false, NONE) => {}
                    (false, _) => {
                        return Err(CatError::NonComposablePairInTable {
                            first: self.mor_name(f).to_owned(),
                            then: self.mor_name(g).to_owned(),
                        })
                    }
                    (true, NONE) => {
                        return Err(CatError::MissingComposite {
                            first: self.mor_name(f).to_owned(),
                            then: self.mor_name(g).to_owned(),
                        })
                    }
                    (true, h) => {
                        let h = Mor(h);
                        if self.src(h) != self.src(f) || self.tgt(h) != self.tgt(g) {
                            return Err(CatError::CompositeShape {
                                first: self.mor_name(f).to_owned(),
                                then: self.mor_name(g).to_owned(),
                                equals: self.mor_name(h).to_owned(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_units(&self) -> Result<(), CatError> {
        for m in self.morphisms() {
            let (l, r) = (self.id(self.tgt(m)), self.id(self.src(m)));
            for (i, ok) in [(l, self.compose(l, m) == m), (r, self.compose(m, r) == m)] {
                if !ok {
                    return Err(CatError::UnitViolation {
                        identity: self.mor_name(i).to_owned(),
                        morphism: self.mor_name(m).to_owned(),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<(), CatError> {
        let bad = par::find_first_range(self.num_morphisms(), |f| {
            let f = Mor(f as u32);
            for &g in self.outgoing(self.tgt(f)) {
                let gf = self.compose(g, f);
                for &h in self.outgoing(self.tgt(g)) {
                    if self.compose(self.compose(h, g), f) != self.compose(h, gf) {
                        return Some((f, g, h));
                    }
                }
            }
            None
        });
        match bad {
            Some((f, g, h)) => Err(CatError::AssociativityViolation {
                f: self.mor_name(f).to_owned(),
                g: self.mor_name(g).to_owned(),
                h: self.mor_name(h).to_owned(),
            }),
            None => Ok(()),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Obj> + Clone {
        (0..self.obj_names.len() as u32).map(Obj)
    }

    pub fn morphisms(&self) -> impl ExactSizeIterator<Item = Mor> + Clone {
        (0..self.mor_names.len() as u32).map(Mor)
    }

    pub fn obj_name(&self, o: Obj) -> &str {
        &self.obj_names[o.idx()]
    }

    pub fn mor_name(&self, m: Mor) -> &str {
        &self.mor_names[m.idx()]
    }

    pub fn obj(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn mor(&self, name: &str) -> Option<Mor> {
        self.mor_index.get(name).copied()
    }

    pub fn try_obj(&self, name: &str) -> Result<Obj, CatError> {
        self.obj(name).ok_or_else(|| CatError::UnknownObject(name.to_owned()))
    }

    pub fn try_mor(&self, name: &str) -> Result<Mor, CatError> {
        self.mor(name).ok_or_else(|| CatError::UnknownMorphism(name.to_owned()))
    }

    #[inline]
    pub fn src(&self, m: Mor) -> Obj {
        self.src[m.idx()]
    }

    #[inline]
    pub fn tgt(&self, m: Mor) -> Obj {
        self.tgt[m.idx()]
    }

    #[inline]
    pub fn id(&self, o: Obj) -> Mor {
        self.identity[o.idx()]
    }

    #[inline]
    pub fn is_identity(&self, m: Mor) -> bool {
        self.is_identity[m.idx()]
    }

    /// `g ∘ f`. Panics if `tgt(f) != src(g)`.
    #[inline]
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        let h = self.table[f.idx() * self.num_morphisms() + g.idx()];
        assert!(
            h != NONE,
            "compose: `{}` then `{}` is not composable",
            self.mor_name(f),
            self.mor_name(g)
        );
        Mor(h)
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    #[inline]
    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let h = self.table[f.idx() * self.num_morphisms() + g.idx()];
        (h != NONE).then_some(Mor(h))
    }

    /// Left-to-right composite of a path `m₀, m₁, …` (first applied first).
    pub fn compose_path(&self, path: &[Mor]) -> Mor {
        let mut it = path.iter();
        let mut acc = *it.next().expect("empty path");
        for &m in it {
            acc = self.compose(m, acc);
        }
        acc
    }

    #[inline]
    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        &self.hom[x.idx() * self.num_objects() + y.idx()]
    }

    pub fn outgoing(&self, x: Obj) -> &[Mor] {
        &self.outgoing[x.idx()]
    }

    pub fn incoming(&self, y: Obj) -> &[Mor] {
        &self.incoming[y.idx()]
    }

    /// Largest hom-set size.
    pub fn max_hom_size(&self) -> usize {
        self.hom.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The full subcategory on the objects accepted by `keep`.
    pub fn full_subcategory(&self, keep: impl Fn(Obj) -> bool) -> FinCat {
        let kept: Vec<Obj> = self.objects().filter(|&o| keep(o)).collect();
        let mut obj_pos = vec![usize::MAX; self.num_objects()];
        let mut parts = CatParts::default();
        for &o in &kept {
            obj_pos[o.idx()] = parts.add_object(self.obj_name(o));
        }
        let mut mor_pos = vec![usize::MAX; self.num_morphisms()];
        let mut back = Vec::new();
        for m in self.morphisms() {
            let (s, t) = (obj_pos[self.src(m).idx()], obj_pos[self.tgt(m).idx()]);
            if s != usize::MAX && t != usize::MAX {
                mor_pos[m.idx()] = parts.add_morphism(self.mor_name(m), s, t);
                back.push(m);
            }
        }
        parts.identities = kept.iter().map(|&o| mor_pos[self.id(o).idx()]).collect();
        FinCat::from_parts(parts, |g, f| Some(mor_pos[self.compose(back[g], back[f]).idx()]))
            .expect("full subcategory of a valid category is valid")
    }

    /// The opposite-free description used by the JSON file format.
    pub fn to_raw(&self) -> RawCategory {
        let mut composition = Vec::new();
        for f in self.morphisms() {
            if self.is_identity(f) {
                continue;
            }
            for &g in self.outgoing(self.tgt(f)) {
                if self.is_identity(g) {
                    continue;
                }
                composition.push(RawComposite {
                    first: self.mor_name(f).to_owned(),
                    then: self.mor_name(g).to_owned(),
                    equals: self.mor_name(self.compose(g, f)).to_owned(),
                });
            }
        }
        RawCategory {
            objects: self.obj_names.clone(),
            morphisms: self
                .morphisms()
                .map(|m| RawMorphism {
                    id: self.mor_name(m).to_owned(),
                    src: self.obj_name(self.src(m)).to_owned(),
                    tgt: self.obj_name(self.tgt(m)).to_owned(),
                })
                .collect(),
            identities: self
                .objects()
                .map(|o| (self.obj_name(o).to_owned(), self.mor_name(self.id(o)).to_owned()))
                .collect(),
            composition,
        }
    }
}
