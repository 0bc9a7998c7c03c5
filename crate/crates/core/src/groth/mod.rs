//! The Grothendieck construction and fibrations.
//!
//! Objects of `∫M` are pairs `(x, a)` with `a ∈ M(x)`; a morphism
//! `(x, a) → (y, b)` is a pair `(f, k)` with `f: x → y` and `k: a → Mf(b)`.
//! Composition is `(g, ℓ) ∘ (f, k) = (g ∘ f, μ_{f,g} ∘ Mf(ℓ) ∘ k)`.

mod fibration;
mod lemmas;

pub use fibration::{
    canonical_cleaving, check_fibred_functor, check_fibred_nat_trans, check_split, choose_cleaving, fiber,
    is_cartesian, is_fibration, reindexing, reindexing_comparison, Cleaving, Fiber, FibrationError, FibrationReport,
    FibredReport, SplitReport,
};
pub use lemmas::{lemma_suite, LemmaCheck, LemmaReport};

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{CatError, CatParts, FinCat, FinFunctor, Mor, Obj};
use crate::indexed::IndexedCat;

/// A morphism `(f, k)` of the total category, `k: a → Mf(b)` in `M(src f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TotalMor {
    pub base_part: Mor,
    pub fiber_part: Mor,
}

/// `∫M` with its projection and the bookkeeping linking it to `M`.
#[derive(Debug, Clone)]
pub struct Total {
    indexed: Arc<IndexedCat>,
    cat: Arc<FinCat>,
    proj: FinFunctor,
    obj_parts: Vec<(Obj, Obj)>,
    mor_parts: Vec<TotalMor>,
    obj_lookup: HashMap<(Obj, Obj), Obj>,
    mor_lookup: HashMap<(Mor, Mor, Obj), Mor>,
}

/// Build `∫M` and the projection `P_M: ∫M → X`.
///
/// Morphism identifiers are `(f|k)`, extended to `(f|k|b)` whenever `Mf`
/// identifies objects, since `(f, k)` alone then does not determine the
/// target `(y, b)`.
pub fn grothendieck(m: Arc<IndexedCat>) -> Result<Total, CatError> {
    let base = m.base().clone();
    let mut parts = CatParts::default();
    let mut obj_parts = Vec::new();
    let mut obj_pos: HashMap<(Obj, Obj), usize> = HashMap::new();
    for x in base.objects() {
        let mx = m.fiber(x);
        for a in mx.objects() {
            let i = parts.add_object(format!("({},{})", base.obj_name(x), mx.obj_name(a)));
            obj_pos.insert((x, a), i);
            obj_parts.push((x, a));
        }
    }
    let mut mor_parts: Vec<(TotalMor, Obj)> = Vec::new();
    let mut mor_pos: HashMap<(Mor, Mor, Obj), usize> = HashMap::new();
    for f in base.morphisms() {
        let (x, y) = (base.src(f), base.tgt(f));
        let (mx, my) = (m.fiber(x), m.fiber(y));
        let af = m.arrow(f);
        let mut seen = vec![false; mx.num_objects()];
        let injective = my
            .objects()
            .all(|b| !std::mem::replace(&mut seen[af.obj(b).idx()], true));
        for b in my.objects() {
            for &k in mx.incoming(af.obj(b)) {
                let a = mx.src(k);
                let name = if injective {
                    format!("({}|{})", base.mor_name(f), mx.mor_name(k))
                } else {
                    format!("({}|{}|{})", base.mor_name(f), mx.mor_name(k), my.obj_name(b))
                };
                let i = parts.add_morphism(name, obj_pos[&(x, a)], obj_pos[&(y, b)]);
                let tm = TotalMor {
                    base_part: f,
                    fiber_part: k,
                };
                mor_pos.insert((f, k, b), i);
                mor_parts.push((tm, b));
            }
        }
    }
    parts.identities = obj_parts
        .iter()
        .map(|&(x, a)| mor_pos[&(base.id(x), m.eta(x, a), a)])
        .collect();
    let compose = |gi: usize, fi: usize| {
        let (
            TotalMor {
                base_part: f,
                fiber_part: k,
            },
            _,
        ) = mor_parts[fi];
        let (
            TotalMor {
                base_part: g,
                fiber_part: l,
            },
            c,
        ) = mor_parts[gi];
        let mx = m.fiber(base.src(f));
        let fiber = mx.compose(m.mu(f, g, c), mx.compose(m.arrow(f).mor(l), k));
        mor_pos.get(&(base.compose(g, f), fiber, c)).copied()
    };
    let cat = FinCat::from_parts(parts.clone(), compose)?;
    let cat = Arc::new(cat);

    let obj_lookup: HashMap<(Obj, Obj), Obj> = obj_parts
        .iter()
        .map(|&(x, a)| {
            let name = format!("({},{})", base.obj_name(x), m.fiber(x).obj_name(a));
            ((x, a), cat.obj(&name).expect("object"))
        })
        .collect();
    let mut sorted_objs = vec![(Obj(0), Obj(0)); cat.num_objects()];
    for (&xa, &o) in &obj_lookup {
        sorted_objs[o.idx()] = xa;
    }
    let mut sorted_mors = vec![
        TotalMor {
            base_part: Mor(0),
            fiber_part: Mor(0)
        };
        cat.num_morphisms()
    ];
    let mut mor_lookup = HashMap::with_capacity(mor_parts.len());
    for (i, &(tm, b)) in mor_parts.iter().enumerate() {
        let t = cat.mor(&parts.morphisms[i].0).expect("morphism");
        sorted_mors[t.idx()] = tm;
        mor_lookup.insert((tm.base_part, tm.fiber_part, b), t);
    }
    let proj = FinFunctor::new(
        cat.clone(),
        base.clone(),
        sorted_objs.iter().map(|&(x, _)| x).collect(),
        sorted_mors.iter().map(|tm| tm.base_part).collect(),
    )?;
    Ok(Total {
        indexed: m,
        cat,
        proj,
        obj_parts: sorted_objs,
        mor_parts: sorted_mors,
        obj_lookup,
        mor_lookup,
    })
}

impl Total {
    pub fn indexed(&self) -> &Arc<IndexedCat> {
        &self.indexed
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn proj(&self) -> &FinFunctor {
        &self.proj
    }

    /// `(x, a)` of a total object.
    pub fn obj_parts(&self, o: Obj) -> (Obj, Obj) {
        self.obj_parts[o.idx()]
    }

    pub fn mor_parts(&self, m: Mor) -> TotalMor {
        self.mor_parts[m.idx()]
    }

    pub fn object(&self, x: Obj, a: Obj) -> Obj {
        self.obj_lookup[&(x, a)]
    }

    /// The morphism `(f, k)` with target `(tgt f, b)`.
    pub fn morphism(&self, f: Mor, k: Mor, b: Obj) -> Option<Mor> {
        self.mor_lookup.get(&(f, k, b)).copied()
    }

    /// `M(x) → ∫M`, `a ↦ (x, a)` and `k: a → a'` to `(id_x, η_x[a'] ∘ k)`.
    pub fn fiber_inclusion(&self, x: Obj) -> FinFunctor {
        let m = &self.indexed;
        let mx = m.fiber_arc(x).clone();
        let id = m.base().id(x);
        let obj_map = mx.objects().map(|a| self.object(x, a)).collect();
        let mor_map = mx
            .morphisms()
            .map(|k| {
                let t = mx.tgt(k);
                let k2 = mx.compose(m.eta(x, t), k);
                self.morphism(id, k2, t).expect("vertical morphism")
            })
            .collect();
        FinFunctor::new(mx, self.cat.clone(), obj_map, mor_map).expect("fiber inclusion")
    }

    /// Two-sided inverse of `m`, found by search over `hom(tgt m, src m)`.
    pub fn invert(&self, m: Mor) -> Option<Mor> {
        let c = &*self.cat;
        let (s, t) = (c.src(m), c.tgt(m));
        c.hom(t, s)
            .iter()
            .copied()
            .find(|&n| c.compose(n, m) == c.id(s) && c.compose(m, n) == c.id(t))
    }

    /// `|hom((x,a),(y,b))| = Σ_{f: x→y} |M(x)(a, Mf(b))|`, checked for every
    /// pair of objects. Returns the first pair where it fails.
    pub fn hom_count_mismatch(&self) -> Option<(String, String)> {
        let m = &self.indexed;
        let base = m.base();
        let c = &*self.cat;
        for s in c.objects() {
            let (x, a) = self.obj_parts(s);
            for t in c.objects() {
                let (y, b) = self.obj_parts(t);
                let expected: usize = base
                    .hom(x, y)
                    .iter()
                    .map(|&f| m.fiber(x).hom(a, m.arrow(f).obj(b)).len())
                    .sum();
                if c.hom(s, t).len() != expected {
                    return Some((c.obj_name(s).into(), c.obj_name(t).into()));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{automorphism_group, functor_properties, iso_classes};
    use crate::gen;
    use crate::group::GroupTable;

    fn gpow(n: usize) -> Total {
        grothendieck(Arc::new(gen::indexed_gpow(&GroupTable::cyclic(2), n))).unwrap()
    }

    #[test]
    fn decorated_injection_count() {
        let t = gpow(3);
        let c = t.cat();
        let (a, b) = (c.obj("(2,*)").unwrap(), c.obj("(3,*)").unwrap());
        assert_eq!(c.hom(a, b).len(), 24);
        assert!(t.hom_count_mismatch().is_none());
    }

    #[test]
    fn wreath_automorphisms() {
        let t = gpow(2);
        let c = t.cat();
        assert_eq!(automorphism_group(c, c.obj("(2,*)").unwrap()).order(), 8);
        assert_eq!(iso_classes(c).len(), 3);
    }

    #[test]
    fn product_case() {
        let x = Arc::new(gen::fi_truncated(2));
        let y = Arc::new(gen::two_parallel_arrows());
        let t = grothendieck(Arc::new(gen::delta_const(x.clone(), y.clone()))).unwrap();
        let p = gen::product_category(&x, &y);
        assert_eq!(t.cat().num_morphisms(), p.num_morphisms());
        assert!(t.hom_count_mismatch().is_none());
    }

    #[test]
    fn fiber_inclusion_onto_vertical_part() {
        let t = gpow(2);
        let x = t.indexed().base().obj("2").unwrap();
        let inc = t.fiber_inclusion(x);
        let r = functor_properties(&inc);
        assert!(r.faithful && !r.full);
        let fb = fiber(t.proj(), x);
        let mut image = inc.mor_map().to_vec();
        image.sort();
        assert_eq!(image, fb.inclusion.mor_map());
    }

    #[test]
    fn inverse_of_decorated_swap() {
        let t = gpow(2);
        let c = t.cat();
        let m = c.mor("(2>2[1,0]|(1,0))").unwrap();
        let n = t.invert(m).unwrap();
        let tm = t.mor_parts(n);
        assert_eq!(t.indexed().base().mor_name(tm.base_part), "2>2[1,0]");
        // (f, k)⁻¹ = (f⁻¹, M(f⁻¹)(k⁻¹)) in the strict case.
        let base = t.indexed().base();
        let finv = crate::cat::is_iso(base, t.mor_parts(m).base_part).unwrap();
        let x = base.src(finv);
        let mx = t.indexed().fiber(x);
        let kinv = crate::cat::is_iso(mx, t.mor_parts(m).fiber_part).unwrap();
        assert_eq!(tm.fiber_part, t.indexed().arrow(finv).mor(kinv));
        let f = c.mor("(1>2[0]|(0))").unwrap();
        assert!(t.invert(f).is_none());
    }

    #[test]
    fn identities_are_eta() {
        let t = gpow(2);
        let c = t.cat();
        for o in c.objects() {
            let tm = t.mor_parts(c.id(o));
            assert!(t.indexed().base().is_identity(tm.base_part));
        }
    }
}
