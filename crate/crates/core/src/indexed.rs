//! Pseudofunctors `M: X^op → Cat` on finite data.
//!
//! For `f: x → y` the arrow functor `Mf` runs `M(y) → M(x)`. For composable
//! `f: x → y`, `g: y → z` the compositor `μ_{f,g}: Mf ∘ Mg ⇒ M(g ∘ f)` has one
//! component in `M(x)` per object of `M(z)`, and the unitor
//! `η_x: id ⇒ M(id_x)` one component per object of `M(x)`. Omitted
//! components are identities.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cat::{is_iso, same_cat, CatError, CatParts, FinCat, FinFunctor, Mor, Obj};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexedError {
    #[error(transparent)]
    Category(#[from] CatError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("arrow functor of `{morphism}`: {reason}")]
    BadFiberFunctor { morphism: String, reason: String },
    #[error("compositor of `{f}` then `{g}` at `{object}`: {reason}")]
    CompositorShape {
        f: String,
        g: String,
        object: String,
        reason: String,
    },
    #[error("compositor of `{f}` then `{g}` is not invertible at `{object}`")]
    CompositorNotIso { f: String, g: String, object: String },
    #[error("unitor at `{object}`, component `{component}`: {reason}")]
    UnitorViolation {
        object: String,
        component: String,
        reason: String,
    },
    #[error("{law} fails on {morphisms:?} at `{object}`")]
    CoherenceViolation {
        law: &'static str,
        morphisms: Vec<String>,
        object: String,
    },
    #[error("declared strict, but {0}")]
    NotStrict(String),
}

/// Validated pseudofunctor data.
#[derive(Debug, Clone)]
pub struct IndexedCat {
    base: Arc<FinCat>,
    fibers: Vec<Arc<FinCat>>,
    arrows: Vec<FinFunctor>,
    /// Offset of the composable pairs `(f, _)` in `mu`.
    pair_off: Vec<usize>,
    out_pos: Vec<usize>,
    mu: Vec<Option<Vec<Mor>>>,
    eta: Vec<Option<Vec<Mor>>>,
    strict: bool,
}

/// Unvalidated pseudofunctor data. Compositor and unitor tables may omit
/// entries, which then default to identities.
#[derive(Debug, Clone)]
pub struct IndexedParts {
    pub base: Arc<FinCat>,
    pub fibers: Vec<Arc<FinCat>>,
    pub arrows: Vec<FinFunctor>,
    pub compositors: HashMap<(Mor, Mor), Vec<Mor>>,
    pub unitors: HashMap<Obj, Vec<Mor>>,
}

impl IndexedCat {
    pub fn new(parts: IndexedParts) -> Result<IndexedCat, IndexedError> {
        let IndexedParts {
            base,
            fibers,
            arrows,
            mut compositors,
            mut unitors,
        } = parts;
        if fibers.len() != base.num_objects() || arrows.len() != base.num_morphisms() {
            return Err(IndexedError::Shape(format!(
                "{} fibers and {} arrow functors for {} objects and {} morphisms",
                fibers.len(),
                arrows.len(),
                base.num_objects(),
                base.num_morphisms()
            )));
        }
        for f in base.morphisms() {
            let (x, y) = (base.src(f), base.tgt(f));
            let a = &arrows[f.idx()];
            if !same_cat(a.source(), &fibers[y.idx()]) || !same_cat(a.target(), &fibers[x.idx()]) {
                return Err(IndexedError::BadFiberFunctor {
                    morphism: base.mor_name(f).into(),
                    reason: format!(
                        "must run from the fiber over `{}` to the fiber over `{}`",
                        base.obj_name(y),
                        base.obj_name(x)
                    ),
                });
            }
        }
        let mut out_pos = vec![0; base.num_morphisms()];
        for x in base.objects() {
            for (i, &m) in base.outgoing(x).iter().enumerate() {
                out_pos[m.idx()] = i;
            }
        }
        let mut pair_off = Vec::with_capacity(base.num_morphisms() + 1);
        let mut n_pairs = 0;
        for f in base.morphisms() {
            pair_off.push(n_pairs);
            n_pairs += base.outgoing(base.tgt(f)).len();
        }
        pair_off.push(n_pairs);
        let mut mu = vec![None; n_pairs];
        for f in base.morphisms() {
            for &g in base.outgoing(base.tgt(f)) {
                if let Some(c) = compositors.remove(&(f, g)) {
                    mu[pair_off[f.idx()] + out_pos[g.idx()]] = Some(c);
                }
            }
        }
        if let Some(&(f, g)) = compositors.keys().next() {
            return Err(IndexedError::Shape(format!(
                "compositor given for `{}` then `{}`, which are not composable",
                base.mor_name(f),
                base.mor_name(g)
            )));
        }
        let mut eta = vec![None; base.num_objects()];
        for x in base.objects() {
            eta[x.idx()] = unitors.remove(&x);
        }
        if !unitors.is_empty() {
            return Err(IndexedError::Shape("unitor given for an unknown object".into()));
        }
        let mut m = IndexedCat {
            base,
            fibers,
            arrows,
            pair_off,
            out_pos,
            mu,
            eta,
            strict: false,
        };
        m.check_compositors()?;
        m.check_unitors()?;
        m.check_associativity()?;
        m.check_unit_laws()?;
        m.strict = m.mu.iter().chain(&m.eta).all(|c| c.is_none()) || m.all_components_identities();
        Ok(m)
    }

    /// Validate and additionally require the data to be strict.
    pub fn new_strict(parts: IndexedParts) -> Result<IndexedCat, IndexedError> {
        let m = IndexedCat::new(parts)?;
        if !m.strict {
            return Err(IndexedError::NotStrict(
                "some compositor or unitor component is not an identity".into(),
            ));
        }
        Ok(m)
    }

    fn all_components_identities(&self) -> bool {
        let b = &*self.base;
        b.morphisms().all(|f| {
            let fib = self.fiber(b.src(f));
            b.outgoing(b.tgt(f)).iter().all(|&g| {
                self.fiber(b.tgt(g))
                    .objects()
                    .all(|c| fib.is_identity(self.mu(f, g, c)))
            })
        }) && b.objects().all(|x| {
            let fib = self.fiber(x);
            fib.objects().all(|a| fib.is_identity(self.eta(x, a)))
        })
    }

    fn names3(&self, ms: &[Mor]) -> Vec<String> {
        ms.iter().map(|&m| self.base.mor_name(m).to_owned()).collect()
    }

    fn check_compositors(&self) -> Result<(), IndexedError> {
        let b = &*self.base;
        let pairs: Vec<(Mor, Mor)> = b
            .morphisms()
            .flat_map(|f| b.outgoing(b.tgt(f)).iter().map(move |&g| (f, g)))
            .collect();
        let bad = par::find_first(&pairs, |&(f, g)| self.compositor_error(f, g).err());
        bad.map_or(Ok(()), Err)
    }

    fn compositor_error(&self, f: Mor, g: Mor) -> Result<(), IndexedError> {
        let b = &*self.base;
        let (x, z) = (b.src(f), b.tgt(g));
        let (mx, mz) = (self.fiber(x), self.fiber(z));
        let gf = b.compose(g, f);
        let (af, ag, agf) = (self.arrow(f), self.arrow(g), self.arrow(gf));
        let err = |object: &str, reason: String| IndexedError::CompositorShape {
            f: b.mor_name(f).into(),
            g: b.mor_name(g).into(),
            object: object.into(),
            reason,
        };
        if let Some(c) = self.stored_mu(f, g) {
            if c.len() != mz.num_objects() || c.iter().any(|m| m.idx() >= mx.num_morphisms()) {
                return Err(err("", "component table has the wrong shape".into()));
            }
        }
        for c in mz.objects() {
            let src = af.obj(ag.obj(c));
            let tgt = agf.obj(c);
            let comp = match self.stored_mu(f, g) {
                Some(t) => t[c.idx()],
                None if src == tgt => mx.id(src),
                None => {
                    return Err(err(
                        mz.obj_name(c),
                        "omitted, but the two composite functors differ on this object".into(),
                    ))
                }
            };
            if mx.src(comp) != src || mx.tgt(comp) != tgt {
                return Err(err(mz.obj_name(c), "component has the wrong source or target".into()));
            }
            if is_iso(mx, comp).is_none() {
                return Err(IndexedError::CompositorNotIso {
                    f: b.mor_name(f).into(),
                    g: b.mor_name(g).into(),
                    object: mz.obj_name(c).into(),
                });
            }
        }
        for k in mz.morphisms() {
            let (c, c2) = (mz.src(k), mz.tgt(k));
            let lhs = mx.compose(agf.mor(k), self.mu(f, g, c));
            let rhs = mx.compose(self.mu(f, g, c2), af.mor(ag.mor(k)));
            if lhs != rhs {
                return Err(IndexedError::CoherenceViolation {
                    law: "compositor naturality",
                    morphisms: self.names3(&[f, g]),
                    object: mz.mor_name(k).into(),
                });
            }
        }
        Ok(())
    }

    fn check_unitors(&self) -> Result<(), IndexedError> {
        let b = &*self.base;
        for x in b.objects() {
            let mx = self.fiber(x);
            let a_id = self.arrow(b.id(x));
            let err = |component: &str, reason: &str| IndexedError::UnitorViolation {
                object: b.obj_name(x).into(),
                component: component.into(),
                reason: reason.into(),
            };
            if let Some(t) = &self.eta[x.idx()] {
                if t.len() != mx.num_objects() || t.iter().any(|m| m.idx() >= mx.num_morphisms()) {
                    return Err(err("", "component table has the wrong shape"));
                }
            }
            for a in mx.objects() {
                let tgt = a_id.obj(a);
                let comp = match &self.eta[x.idx()] {
                    Some(t) => t[a.idx()],
                    None if tgt == a => mx.id(a),
                    None => return Err(err(mx.obj_name(a), "omitted, but M(id) moves this object")),
                };
                if mx.src(comp) != a || mx.tgt(comp) != tgt {
                    return Err(err(mx.obj_name(a), "wrong source or target"));
                }
                if is_iso(mx, comp).is_none() {
                    return Err(err(mx.obj_name(a), "not invertible"));
                }
            }
            for k in mx.morphisms() {
                let lhs = mx.compose(a_id.mor(k), self.eta(x, mx.src(k)));
                let rhs = mx.compose(self.eta(x, mx.tgt(k)), k);
                if lhs != rhs {
                    return Err(err(mx.mor_name(k), "naturality square does not commute"));
                }
            }
        }
        Ok(())
    }

    /// `μ_{f,hg}[d] ∘ Mf(μ_{g,h}[d]) = μ_{gf,h}[d] ∘ μ_{f,g}[Mh d]`.
    fn check_associativity(&self) -> Result<(), IndexedError> {
        let b = &*self.base;
        let bad = par::find_first_range(b.num_morphisms(), |f| {
            let f = Mor(f as u32);
            let mw = self.fiber(b.src(f));
            for &g in b.outgoing(b.tgt(f)) {
                let gf = b.compose(g, f);
                for &h in b.outgoing(b.tgt(g)) {
                    let hg = b.compose(h, g);
                    for d in self.fiber(b.tgt(h)).objects() {
                        let lhs = mw.compose(self.mu(f, hg, d), self.arrow(f).mor(self.mu(g, h, d)));
                        let dh = self.arrow(h).obj(d);
                        let rhs = mw.compose(self.mu(gf, h, d), self.mu(f, g, dh));
                        if lhs != rhs {
                            return Some(IndexedError::CoherenceViolation {
                                law: "associativity",
                                morphisms: self.names3(&[f, g, h]),
                                object: self.fiber(b.tgt(h)).obj_name(d).into(),
                            });
                        }
                    }
                }
            }
            None
        });
        bad.map_or(Ok(()), Err)
    }

    /// `μ_{id,f}[b] ∘ η[Mf b] = id` and `μ_{f,id}[b] ∘ Mf(η[b]) = id`.
    fn check_unit_laws(&self) -> Result<(), IndexedError> {
        let b = &*self.base;
        for f in b.morphisms() {
            let (x, y) = (b.src(f), b.tgt(f));
            let mx = self.fiber(x);
            let af = self.arrow(f);
            for o in self.fiber(y).objects() {
                let fo = af.obj(o);
                let left = mx.compose(self.mu(b.id(x), f, o), self.eta(x, fo));
                let right = mx.compose(self.mu(f, b.id(y), o), af.mor(self.eta(y, o)));
                for (law, v) in [("left unit law", left), ("right unit law", right)] {
                    if v != mx.id(fo) {
                        return Err(IndexedError::CoherenceViolation {
                            law,
                            morphisms: self.names3(&[f]),
                            object: self.fiber(y).obj_name(o).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn stored_mu(&self, f: Mor, g: Mor) -> Option<&Vec<Mor>> {
        self.mu[self.pair_off[f.idx()] + self.out_pos[g.idx()]].as_ref()
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn fiber(&self, x: Obj) -> &FinCat {
        &self.fibers[x.idx()]
    }

    pub fn fiber_arc(&self, x: Obj) -> &Arc<FinCat> {
        &self.fibers[x.idx()]
    }

    /// `Mf: M(tgt f) → M(src f)`.
    pub fn arrow(&self, f: Mor) -> &FinFunctor {
        &self.arrows[f.idx()]
    }

    /// `μ_{f,g}` at `c ∈ M(tgt g)`, a morphism `Mf(Mg c) → M(g∘f)(c)` in
    /// `M(src f)`.
    #[inline]
    pub fn mu(&self, f: Mor, g: Mor, c: Obj) -> Mor {
        match self.stored_mu(f, g) {
            Some(t) => t[c.idx()],
            None => self.fiber(self.base.src(f)).id(self.arrow(f).obj(self.arrow(g).obj(c))),
        }
    }

    /// `η_x` at `a ∈ M(x)`, a morphism `a → M(id_x)(a)`.
    #[inline]
    pub fn eta(&self, x: Obj, a: Obj) -> Mor {
        match &self.eta[x.idx()] {
            Some(t) => t[a.idx()],
            None => self.fiber(x).id(a),
        }
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Rebuild the unvalidated parts, omitting identity-only tables.
    pub fn to_parts(&self) -> IndexedParts {
        let b = &*self.base;
        let mut compositors = HashMap::new();
        for f in b.morphisms() {
            for &g in b.outgoing(b.tgt(f)) {
                if let Some(t) = self.stored_mu(f, g) {
                    let mx = self.fiber(b.src(f));
                    if !t.iter().all(|&m| mx.is_identity(m)) {
                        compositors.insert((f, g), t.clone());
                    }
                }
            }
        }
        let mut unitors = HashMap::new();
        for x in b.objects() {
            if let Some(t) = &self.eta[x.idx()] {
                if !t.iter().all(|&m| self.fiber(x).is_identity(m)) {
                    unitors.insert(x, t.clone());
                }
            }
        }
        IndexedParts {
            base: self.base.clone(),
            fibers: self.fibers.clone(),
            arrows: self.arrows.clone(),
            compositors,
            unitors,
        }
    }

    /// Restriction to the one-object base `Aut(x)`.
    pub fn restrict_to_aut(&self, x: Obj) -> IndexedCat {
        let b = &*self.base;
        let auts = crate::cat::automorphisms(b, x);
        let mut parts = CatParts::default();
        let o = parts.add_object(b.obj_name(x));
        for &s in &auts {
            parts.add_morphism(b.mor_name(s), o, o);
        }
        parts.identities = vec![auts.iter().position(|&s| s == b.id(x)).expect("identity")];
        let pos = |m: Mor| auts.iter().position(|&s| s == m).expect("closed");
        let sub = FinCat::from_parts(parts, |g, f| Some(pos(b.compose(auts[g], auts[f])))).expect("automorphism group");
        // `sub` indexes automorphisms by sorted name, as does `b`, so the
        // order of `auts` is preserved.
        let mut compositors = HashMap::new();
        for (i, &f) in auts.iter().enumerate() {
            for (j, &g) in auts.iter().enumerate() {
                if let Some(t) = self.stored_mu(f, g) {
                    compositors.insert((Mor(i as u32), Mor(j as u32)), t.clone());
                }
            }
        }
        let mut unitors = HashMap::new();
        if let Some(t) = &self.eta[x.idx()] {
            unitors.insert(Obj(0), t.clone());
        }
        IndexedCat::new(IndexedParts {
            base: Arc::new(sub),
            fibers: vec![self.fibers[x.idx()].clone()],
            arrows: auts.iter().map(|&s| self.arrows[s.idx()].clone()).collect(),
            compositors,
            unitors,
        })
        .expect("restriction of a valid pseudofunctor")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::group::GroupTable;

    #[test]
    fn constant_indexed_category_is_strict() {
        let m = gen::delta_const(Arc::new(gen::fi_truncated(2)), Arc::new(gen::fi_truncated(1)));
        assert!(m.is_strict());
    }

    #[test]
    fn gpow_is_strict() {
        let m = gen::indexed_gpow(&GroupTable::cyclic(2), 3);
        assert!(m.is_strict());
        assert_eq!(m.fiber(m.base().obj("3").unwrap()).num_morphisms(), 8);
    }

    #[test]
    fn covariant_looking_arrow_is_rejected() {
        let x = Arc::new(gen::fi_truncated(1));
        let m = gen::indexed_gpow(&GroupTable::cyclic(2), 1);
        let mut parts = m.to_parts();
        let f = x.mor("0>1[]").unwrap();
        let fx = parts.fibers[0].clone();
        let fy = parts.fibers[1].clone();
        // Swap the direction of the arrow functor over `0 → 1`.
        let cov = FinFunctor::new(fx.clone(), fy.clone(), vec![Obj(0)], vec![fy.id(Obj(0))]).unwrap();
        parts.arrows[f.idx()] = cov;
        assert!(matches!(
            IndexedCat::new(parts),
            Err(IndexedError::BadFiberFunctor { .. })
        ));
    }

    #[test]
    fn restrict_gpow_at_two() {
        let m = gen::indexed_gpow(&GroupTable::cyclic(2), 3);
        let r = m.restrict_to_aut(m.base().obj("2").unwrap());
        assert_eq!(r.base().num_morphisms(), 2);
        assert_eq!(r.fiber(Obj(0)).num_morphisms(), 4);
        let r0 = m.restrict_to_aut(m.base().obj("0").unwrap());
        assert_eq!((r0.base().num_objects(), r0.base().num_morphisms()), (1, 1));
    }
}
