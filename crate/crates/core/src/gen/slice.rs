//! Slices `C/x` reindexed by chosen pullbacks, and the codomain fibration.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::basic::arrow_category;
use crate::cat::{functor_properties, CatParts, FinCat, FinFunctor, Mor, Obj};
use crate::groth::{grothendieck, is_cartesian, is_fibration, Total};
use crate::indexed::{IndexedCat, IndexedParts};
use crate::limits::{Cospan, Limits, Square};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error("no pullback of `{0}` along `{1}`")]
    MissingPullback(String, String),
}

/// `C/x`: objects are morphisms `u: a → x` (named by `u`), morphisms
/// `h: u → v` with `v ∘ h = u`, named `h:u>v`.
pub fn slice(c: &FinCat, x: Obj) -> (FinCat, Vec<Mor>, Vec<(Mor, Mor, Mor)>) {
    let objs: Vec<Mor> = c.incoming(x).to_vec();
    let mut p = CatParts::default();
    let mut opos = HashMap::new();
    for &u in &objs {
        opos.insert(u, p.add_object(c.mor_name(u)));
    }
    let mut mors = Vec::new();
    let mut mpos = HashMap::new();
    for &u in &objs {
        for &v in &objs {
            for &h in c.hom(c.src(u), c.src(v)) {
                if c.compose(v, h) == u {
                    let name = format!("{}:{}>{}", c.mor_name(h), c.mor_name(u), c.mor_name(v));
                    mpos.insert((h, u, v), p.add_morphism(name, opos[&u], opos[&v]));
                    mors.push((h, u, v));
                }
            }
        }
    }
    p.identities = objs.iter().map(|&u| mpos[&(c.id(c.src(u)), u, u)]).collect();
    let cat = FinCat::from_parts(p, |g, f| {
        let ((h2, _, w), (h1, u, _)) = (mors[g], mors[f]);
        mpos.get(&(c.compose(h2, h1), u, w)).copied()
    })
    .expect("slice category");
    // Sorted positions of objects and morphisms.
    let sorted_objs = cat
        .objects()
        .map(|o| c.mor(cat.obj_name(o)).expect("morphism"))
        .collect();
    let mut sorted_mors = vec![(Mor(0), Mor(0), Mor(0)); cat.num_morphisms()];
    for &(h, u, v) in &mors {
        let name = format!("{}:{}>{}", c.mor_name(h), c.mor_name(u), c.mor_name(v));
        sorted_mors[cat.mor(&name).expect("morphism").idx()] = (h, u, v);
    }
    (cat, sorted_objs, sorted_mors)
}

/// The unique `m: s → t` with `legs_t ∘ m = legs_s`, if any.
fn mediate(c: &FinCat, s: Obj, t: Obj, check: impl Fn(Mor) -> bool) -> Option<Mor> {
    let found: Vec<Mor> = c.hom(s, t).iter().copied().filter(|&m| check(m)).collect();
    (found.len() == 1).then(|| found[0])
}

/// Slices over each object, reindexed along `j: x → y` by the least chosen
/// pullback of `v: b → y` along `j`. Compositors and unitors are the pullback
/// mediators, so the result is in general not strict.
pub fn slice_indexed(c: Arc<FinCat>) -> Result<IndexedCat, SliceError> {
    let lim = Limits::new(&c);
    let slices: Vec<_> = c.objects().map(|x| slice(&c, x)).collect();
    let fibers: Vec<Arc<FinCat>> = slices.iter().map(|s| Arc::new(s.0.clone())).collect();
    // chosen[j][v] = pullback square of the cospan (j, v).
    let mut chosen: HashMap<(Mor, Mor), Square> = HashMap::new();
    for j in c.morphisms() {
        for &v in c.incoming(c.tgt(j)) {
            let sq = lim
                .pullback(Cospan { left: j, right: v })
                .ok_or_else(|| SliceError::MissingPullback(c.mor_name(v).into(), c.mor_name(j).into()))?;
            chosen.insert((j, v), sq);
        }
    }
    let slice_obj = |x: Obj, u: Mor| fibers[x.idx()].obj(c.mor_name(u)).expect("slice object");
    let slice_mor = |x: Obj, h: Mor, u: Mor, v: Mor| {
        let name = format!("{}:{}>{}", c.mor_name(h), c.mor_name(u), c.mor_name(v));
        fibers[x.idx()].mor(&name).expect("slice morphism")
    };
    let arrows = c
        .morphisms()
        .map(|j| {
            let (x, y) = (c.src(j), c.tgt(j));
            let (sy, objs_y, mors_y) = (&fibers[y.idx()], &slices[y.idx()].1, &slices[y.idx()].2);
            let obj_map = objs_y.iter().map(|&v| slice_obj(x, chosen[&(j, v)].top)).collect();
            let mor_map = mors_y
                .iter()
                .map(|&(h, v, v2)| {
                    let (s, t) = (chosen[&(j, v)], chosen[&(j, v2)]);
                    let m = mediate(&c, s.apex(&c), t.apex(&c), |m| {
                        c.compose(t.top, m) == s.top && c.compose(t.left, m) == c.compose(h, s.left)
                    })
                    .expect("pullback mediator");
                    slice_mor(x, m, s.top, t.top)
                })
                .collect();
            FinFunctor::new(sy.clone(), fibers[x.idx()].clone(), obj_map, mor_map).expect("pullback functor")
        })
        .collect();
    let mut compositors = HashMap::new();
    for f in c.morphisms() {
        for &g in c.outgoing(c.tgt(f)) {
            let x = c.src(f);
            let gf = c.compose(g, f);
            let comps: Vec<Mor> = slices[c.tgt(g).idx()]
                .1
                .iter()
                .map(|&w| {
                    let sg = chosen[&(g, w)];
                    let sf = chosen[&(f, sg.top)];
                    let s = chosen[&(gf, w)];
                    let m = mediate(&c, sf.apex(&c), s.apex(&c), |m| {
                        c.compose(s.top, m) == sf.top && c.compose(s.left, m) == c.compose(sg.left, sf.left)
                    })
                    .expect("pasted pullback mediator");
                    slice_mor(x, m, sf.top, s.top)
                })
                .collect();
            compositors.insert((f, g), comps);
        }
    }
    let mut unitors = HashMap::new();
    for x in c.objects() {
        let id = c.id(x);
        let comps: Vec<Mor> = slices[x.idx()]
            .1
            .iter()
            .map(|&u| {
                let s = chosen[&(id, u)];
                let a = c.src(u);
                let m = mediate(&c, a, s.apex(&c), |m| {
                    c.compose(s.top, m) == u && c.compose(s.left, m) == c.id(a)
                })
                .expect("unit mediator");
                slice_mor(x, m, u, s.top)
            })
            .collect();
        unitors.insert(x, comps);
    }
    Ok(IndexedCat::new(IndexedParts {
        base: c.clone(),
        fibers,
        arrows,
        compositors,
        unitors,
    })
    .expect("slice pseudofunctor"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodomainReport {
    /// The comparison `∫(C/-) → Arr(C)` is an equivalence.
    pub equivalence: bool,
    /// `cod: Arr(C) → C` is a fibration.
    pub fibration: bool,
    /// Cartesian morphisms of `cod` are exactly the pullback squares.
    pub cartesian_are_pullbacks: bool,
    pub checked: usize,
    pub strict: bool,
}

/// `∫(C/-) → Arr(C)`: `(x, u) ↦ u` and `(f, h) ↦ [left ∘ h | f]`.
pub fn slice_comparison(t: &Total, arrows: Arc<FinCat>, c: &FinCat) -> FinFunctor {
    let m = t.indexed();
    let tc = t.cat();
    let obj_map = tc
        .objects()
        .map(|o| {
            let (x, u) = t.obj_parts(o);
            arrows.obj(m.fiber(x).obj_name(u)).expect("arrow")
        })
        .collect();
    let parse = |name: &str| -> Mor {
        let (h, _) = name.split_once(':').expect("slice morphism");
        c.mor(h).expect("morphism")
    };
    let lim = Limits::new(c);
    let mor_map = tc
        .morphisms()
        .map(|mm| {
            let parts = t.mor_parts(mm);
            let (y, v) = t.obj_parts(tc.tgt(mm));
            let f = parts.base_part;
            let vm = c.mor(m.fiber(y).obj_name(v)).expect("morphism");
            let sq = lim.pullback(Cospan { left: f, right: vm }).expect("pullback");
            let h = parse(m.fiber(c.src(f)).mor_name(parts.fiber_part));
            let top = c.compose(sq.left, h);
            let name = format!("[{}|{}]", c.mor_name(top), c.mor_name(f));
            arrows.mor(&name).expect("square")
        })
        .collect();
    FinFunctor::new(tc.clone(), arrows, obj_map, mor_map).expect("comparison functor")
}

/// `cod: Arr(C) → C`.
pub fn codomain_functor(arrows: Arc<FinCat>, c: Arc<FinCat>) -> FinFunctor {
    let obj_map = arrows
        .objects()
        .map(|o| c.tgt(c.mor(arrows.obj_name(o)).expect("morphism")))
        .collect();
    let mor_map = arrows
        .morphisms()
        .map(|m| {
            let name = arrows.mor_name(m);
            let (_, b) = name[1..name.len() - 1].rsplit_once('|').expect("square");
            c.mor(b).expect("morphism")
        })
        .collect();
    FinFunctor::new(arrows, c, obj_map, mor_map).expect("codomain functor")
}

pub fn codomain_check(c: Arc<FinCat>) -> Result<CodomainReport, SliceError> {
    let m = slice_indexed(c.clone())?;
    let strict = m.is_strict();
    let t = grothendieck(Arc::new(m)).expect("total category");
    let arrows = Arc::new(arrow_category(&c));
    let cmp = slice_comparison(&t, arrows.clone(), &c);
    let equivalence = functor_properties(&cmp).equivalence;
    let cod = codomain_functor(arrows.clone(), c.clone());
    let fibration = is_fibration(&cod).holds;
    let lim = Limits::new(&c);
    let cartesian_are_pullbacks = arrows.morphisms().all(|sq| {
        let name = arrows.mor_name(sq);
        let (top, bottom) = name[1..name.len() - 1].rsplit_once('|').expect("square");
        let (t_, b_) = (c.mor(top).expect("morphism"), c.mor(bottom).expect("morphism"));
        let u = c.mor(arrows.obj_name(arrows.src(sq))).expect("morphism");
        let v = c.mor(arrows.obj_name(arrows.tgt(sq))).expect("morphism");
        let square = Square {
            top: u,
            left: t_,
            right: b_,
            bottom: v,
        };
        is_cartesian(&cod, sq) == lim.is_pullback(&square)
    });
    Ok(CodomainReport {
        equivalence,
        fibration,
        cartesian_are_pullbacks,
        checked: arrows.num_morphisms(),
        strict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn square_poset_codomain() {
        let r = codomain_check(Arc::new(gen::square_poset())).unwrap();
        assert!(r.equivalence && r.fibration && r.cartesian_are_pullbacks, "{r:?}");
    }

    #[test]
    fn terminal_degenerates() {
        let m = slice_indexed(Arc::new(gen::terminal())).unwrap();
        assert!(m.is_strict());
        assert!(codomain_check(Arc::new(gen::terminal())).unwrap().equivalence);
    }

    #[test]
    fn iso_gives_non_identity_unitor() {
        let c = Arc::new(gen::preorder_with_iso());
        let m = slice_indexed(c.clone()).unwrap();
        assert!(!m.is_strict());
        let r = codomain_check(c).unwrap();
        assert!(r.equivalence && r.fibration && r.cartesian_are_pullbacks);
    }
}
