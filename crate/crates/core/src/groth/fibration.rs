use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::Total;
use crate::cat::{CatParts, FinCat, FinFunctor, Mor, NatTrans, Obj};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("no cartesian lift of `{morphism}` to `{object}`")]
    NotAFibration { morphism: String, object: String },
    #[error("the triangle does not commute at `{0}`")]
    TriangleDoesNotCommute(String),
    #[error("functors do not share source and target")]
    Mismatch,
}

/// Whether `phi` is cartesian for `p`: every `θ: c → tgt φ` and `g` with
/// `P(θ) = P(φ) ∘ g` factor as `θ = φ ∘ ψ` for exactly one `ψ` over `g`.
pub fn is_cartesian(p: &FinFunctor, phi: Mor) -> bool {
    let (a, x) = (p.source(), p.target());
    let (s, t) = (a.src(phi), a.tgt(phi));
    let u = p.mor(phi);
    let px = x.src(u);
    a.objects().all(|c| {
        // ψ ↦ (Pψ, φ∘ψ) must be a bijection onto the compatible pairs.
        let hom = a.hom(c, s);
        let mut seen = HashSet::with_capacity(hom.len());
        if !hom.iter().all(|&psi| seen.insert((p.mor(psi), a.compose(phi, psi)))) {
            return false;
        }
        let pc = p.obj(c);
        let pairs: usize = a
            .hom(c, t)
            .iter()
            .map(|&theta| {
                let pt = p.mor(theta);
                x.hom(pc, px).iter().filter(|&&g| x.compose(u, g) == pt).count()
            })
            .sum();
        pairs == hom.len()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibrationReport {
    pub holds: bool,
    /// Pairs `(f, b)` examined.
    pub checked: usize,
    /// A base morphism and an object over its target with no cartesian lift.
    pub counterexample: Option<(String, String)>,
}

fn lift_targets(p: &FinFunctor) -> Vec<(Mor, Obj)> {
    let (a, x) = (p.source(), p.target());
    x.morphisms()
        .flat_map(|f| a.objects().filter(move |&b| p.obj(b) == x.tgt(f)).map(move |b| (f, b)))
        .collect()
}

/// Least cartesian lift of `f` to `b`, identities for identities.
fn least_lift(p: &FinFunctor, f: Mor, b: Obj) -> Option<Mor> {
    let (a, x) = (p.source(), p.target());
    if x.is_identity(f) {
        return Some(a.id(b));
    }
    a.incoming(b)
        .iter()
        .copied()
        .find(|&phi| p.mor(phi) == f && is_cartesian(p, phi))
}

pub fn is_fibration(p: &FinFunctor) -> FibrationReport {
    let pairs = lift_targets(p);
    let bad = par::find_first(&pairs, |&(f, b)| least_lift(p, f, b).is_none().then_some((f, b)));
    FibrationReport {
        holds: bad.is_none(),
        checked: pairs.len(),
        counterexample: bad.map(|(f, b)| (p.target().mor_name(f).to_owned(), p.source().obj_name(b).to_owned())),
    }
}

/// A choice of cartesian lift `Cart(f, b): f*(b) → b` for every base
/// morphism `f` and object `b` over its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cleaving {
    p: FinFunctor,
    entries: std::collections::HashMap<(Mor, Obj), Mor>,
}

impl Cleaving {
    pub fn functor(&self) -> &FinFunctor {
        &self.p
    }

    pub fn lift(&self, f: Mor, b: Obj) -> Mor {
        self.entries[&(f, b)]
    }

    /// `f*(b)`.
    pub fn pullback_object(&self, f: Mor, b: Obj) -> Obj {
        self.p.source().src(self.lift(f, b))
    }

    /// Entries sorted by base morphism, then object.
    pub fn entries(&self) -> Vec<((Mor, Obj), Mor)> {
        let mut v: Vec<_> = self.entries.iter().map(|(&k, &v)| (k, v)).collect();
        v.sort();
        v
    }
}

/// The cleaving of least cartesian lifts, with identity lifts of identities.
pub fn choose_cleaving(p: &FinFunctor) -> Result<Cleaving, FibrationError> {
    let pairs = lift_targets(p);
    let lifts = par::map(&pairs, |&(f, b)| least_lift(p, f, b));
    let mut entries = std::collections::HashMap::with_capacity(pairs.len());
    for (&(f, b), lift) in pairs.iter().zip(lifts) {
        let phi = lift.ok_or_else(|| FibrationError::NotAFibration {
            morphism: p.target().mor_name(f).into(),
            object: p.source().obj_name(b).into(),
        })?;
        entries.insert((f, b), phi);
    }
    Ok(Cleaving { p: p.clone(), entries })
}

/// The cleaving `(f, id_{Mf b})` of a Grothendieck construction, with
/// identity lifts of identities.
pub fn canonical_cleaving(t: &Total) -> Cleaving {
    let m = t.indexed();
    let base = m.base();
    let c = t.cat();
    let mut entries = std::collections::HashMap::new();
    for f in base.morphisms() {
        let (x, y) = (base.src(f), base.tgt(f));
        for b in m.fiber(y).objects() {
            let tb = t.object(y, b);
            let phi = if base.is_identity(f) {
                c.id(tb)
            } else {
                let fb = m.arrow(f).obj(b);
                t.morphism(f, m.fiber(x).id(fb), b).expect("canonical lift")
            };
            entries.insert((f, tb), phi);
        }
    }
    Cleaving {
        p: t.proj().clone(),
        entries,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub holds: bool,
    pub checked: usize,
    /// `(f, g, c)` with `Cart(g∘f, c) ≠ Cart(g, c) ∘ Cart(f, g*c)`.
    pub counterexample: Option<(String, String, String)>,
}

/// `Cart(g ∘ f, c) = Cart(g, c) ∘ Cart(f, g*c)` for all composable `f, g`.
pub fn check_split(cl: &Cleaving) -> SplitReport {
    let p = &cl.p;
    let (a, x) = (p.source(), p.target());
    let mut checked = 0;
    for f in x.morphisms() {
        for &g in x.outgoing(x.tgt(f)) {
            for c in a.objects().filter(|&c| p.obj(c) == x.tgt(g)) {
                checked += 1;
                let gc = cl.pullback_object(g, c);
                let lhs = cl.lift(x.compose(g, f), c);
                let rhs = a.compose(cl.lift(g, c), cl.lift(f, gc));
                if lhs != rhs {
                    return SplitReport {
                        holds: false,
                        checked,
                        counterexample: Some((x.mor_name(f).into(), x.mor_name(g).into(), a.obj_name(c).into())),
                    };
                }
            }
        }
    }
    SplitReport {
        holds: true,
        checked,
        counterexample: None,
    }
}

/// The subcategory of objects over `x` and morphisms over `id_x`, with its
/// inclusion.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub cat: Arc<FinCat>,
    pub inclusion: FinFunctor,
}

impl Fiber {
    /// The fiber object corresponding to `o` in the source of the projection.
    pub fn object_of(&self, o: Obj) -> Option<Obj> {
        self.inclusion
            .obj_map()
            .iter()
            .position(|&i| i == o)
            .map(|i| Obj(i as u32))
    }

    pub fn morphism_of(&self, m: Mor) -> Option<Mor> {
        self.inclusion
            .mor_map()
            .iter()
            .position(|&i| i == m)
            .map(|i| Mor(i as u32))
    }
}

pub fn fiber(p: &FinFunctor, x: Obj) -> Fiber {
    let (a, base) = (p.source(), p.target());
    let id = base.id(x);
    let objs: Vec<Obj> = a.objects().filter(|&o| p.obj(o) == x).collect();
    let mors: Vec<Mor> = a.morphisms().filter(|&m| p.mor(m) == id).collect();
    let mut parts = CatParts::default();
    let mut obj_pos = vec![usize::MAX; a.num_objects()];
    for &o in &objs {
        obj_pos[o.idx()] = parts.add_object(a.obj_name(o));
    }
    let mut mor_pos = vec![usize::MAX; a.num_morphisms()];
    for &m in &mors {
        mor_pos[m.idx()] = parts.add_morphism(a.mor_name(m), obj_pos[a.src(m).idx()], obj_pos[a.tgt(m).idx()]);
    }
    parts.identities = objs.iter().map(|&o| mor_pos[a.id(o).idx()]).collect();
    let cat = FinCat::from_parts(parts, |g, f| Some(mor_pos[a.compose(mors[g], mors[f]).idx()]))
        .expect("fiber is a subcategory");
    let cat = Arc::new(cat);
    // Both sides are sorted by identifier, so positions line up.
    let inclusion = FinFunctor::new(cat.clone(), a.clone(), objs, mors).expect("inclusion");
    Fiber { cat, inclusion }
}

/// Unique vertical `χ: s → s'` over `id` with `φ' ∘ χ = θ`, where `φ'` is
/// cartesian with source `s'`.
fn vertical_factor(p: &FinFunctor, cart: Mor, theta: Mor) -> Mor {
    let a = p.source();
    let (s, s2) = (a.src(theta), a.src(cart));
    let id = p.target().id(p.obj(s));
    a.hom(s, s2)
        .iter()
        .copied()
        .find(|&chi| p.mor(chi) == id && a.compose(cart, chi) == theta)
        .expect("cartesian factorization")
}

/// `f*: fiber over y → fiber over x` induced by the cleaving.
pub fn reindexing(cl: &Cleaving, f: Mor) -> FinFunctor {
    let p = &cl.p;
    let x = p.target();
    let (fy, fx) = (fiber(p, x.tgt(f)), fiber(p, x.src(f)));
    let a = p.source();
    let obj_map = fy
        .inclusion
        .obj_map()
        .iter()
        .map(|&b| fx.object_of(cl.pullback_object(f, b)).expect("over the source"))
        .collect();
    let mor_map = fy
        .inclusion
        .mor_map()
        .iter()
        .map(|&psi| {
            let (b, b2) = (a.src(psi), a.tgt(psi));
            let theta = a.compose(psi, cl.lift(f, b));
            let chi = vertical_factor(p, cl.lift(f, b2), theta);
            fx.morphism_of(chi).expect("vertical")
        })
        .collect();
    FinFunctor::new(fy.cat.clone(), fx.cat.clone(), obj_map, mor_map).expect("reindexing functor")
}

/// The comparison `f* ∘ g* ⇒ (g ∘ f)*` built from the cleaving.
pub fn reindexing_comparison(cl: &Cleaving, f: Mor, g: Mor) -> NatTrans {
    let p = &cl.p;
    let (a, x) = (p.source(), p.target());
    let gf = x.compose(g, f);
    let (fs, gs, gfs) = (reindexing(cl, f), reindexing(cl, g), reindexing(cl, gf));
    let fz = fiber(p, x.tgt(g));
    let fx = fiber(p, x.src(f));
    let comps = fz
        .inclusion
        .obj_map()
        .iter()
        .map(|&c| {
            let gc = cl.pullback_object(g, c);
            let theta = a.compose(cl.lift(g, c), cl.lift(f, gc));
            fx.morphism_of(vertical_factor(p, cl.lift(gf, c), theta))
                .expect("vertical")
        })
        .collect();
    NatTrans::new(gs.then(&fs), gfs, comps).expect("comparison is natural")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibredReport {
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<String>,
}

/// `H` sends `P`-cartesian morphisms to `Q`-cartesian morphisms, given
/// `Q ∘ H = P`.
pub fn check_fibred_functor(h: &FinFunctor, p: &FinFunctor, q: &FinFunctor) -> Result<FibredReport, FibrationError> {
    let qh = h.then(q);
    if qh.obj_map() != p.obj_map() || qh.mor_map() != p.mor_map() {
        let a = p.source();
        let at = a
            .morphisms()
            .find(|&m| qh.mor(m) != p.mor(m))
            .map(|m| a.mor_name(m).to_owned())
            .or_else(|| {
                a.objects()
                    .find(|&o| qh.obj(o) != p.obj(o))
                    .map(|o| a.obj_name(o).to_owned())
            })
            .unwrap_or_default();
        return Err(FibrationError::TriangleDoesNotCommute(at));
    }
    let a = p.source();
    let carts: Vec<Mor> = par::map_range(a.num_morphisms(), |m| Mor(m as u32))
        .into_iter()
        .filter(|&m| is_cartesian(p, m))
        .collect();
    let bad = par::find_first(&carts, |&m| (!is_cartesian(q, h.mor(m))).then_some(m));
    Ok(FibredReport {
        holds: bad.is_none(),
        checked: carts.len(),
        counterexample: bad.map(|m| a.mor_name(m).to_owned()),
    })
}

/// Every component of `β: H ⇒ K` lies over an identity of the base.
pub fn check_fibred_nat_trans(
    beta: &NatTrans,
    h: &FinFunctor,
    k: &FinFunctor,
    p: &FinFunctor,
    q: &FinFunctor,
) -> Result<FibredReport, FibrationError> {
    if beta.source() != h || beta.target() != k {
        return Err(FibrationError::Mismatch);
    }
    check_fibred_functor(h, p, q)?;
    check_fibred_functor(k, p, q)?;
    let a = p.source();
    let x = q.target();
    let bad = a.objects().find(|&o| q.mor(beta.at(o)) != x.id(p.obj(o)));
    Ok(FibredReport {
        holds: bad.is_none(),
        checked: a.num_objects(),
        counterexample: bad.map(|o| a.obj_name(o).to_owned()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{functor_properties, is_iso};
    use crate::gen;
    use crate::groth::grothendieck;
    use crate::group::{GroupHom, GroupTable};

    fn gpow(n: usize) -> Total {
        grothendieck(Arc::new(gen::indexed_gpow(&GroupTable::cyclic(2), n))).unwrap()
    }

    #[test]
    fn isomorphisms_are_cartesian() {
        let t = gpow(2);
        let c = t.cat();
        for m in c.morphisms().filter(|&m| is_iso(c, m).is_some()) {
            assert!(is_cartesian(t.proj(), m));
        }
    }

    #[test]
    fn projection_is_a_split_fibration() {
        let t = gpow(2);
        assert!(is_fibration(t.proj()).holds);
        let cl = canonical_cleaving(&t);
        for (_, phi) in cl.entries() {
            assert!(is_cartesian(t.proj(), phi));
        }
        assert!(check_split(&cl).holds);
    }

    #[test]
    fn surjective_homomorphism_is_a_fibration() {
        let p = GroupHom::new(
            Arc::new(GroupTable::cyclic(4)),
            Arc::new(GroupTable::cyclic(2)),
            vec![0, 1, 0, 1],
        )
        .unwrap();
        let f = p.as_functor();
        assert!(is_fibration(&f).holds);
        let cl = choose_cleaving(&f).unwrap();
        assert_eq!(f.source().mor_name(cl.lift(f.target().mor("1").unwrap(), Obj(0))), "1");
        let fb = fiber(&f, Obj(0));
        let names: Vec<&str> = fb.cat.morphisms().map(|m| fb.cat.mor_name(m)).collect();
        assert_eq!(names, ["0", "2"]);
    }

    #[test]
    fn non_surjective_homomorphism_is_not() {
        let p = GroupHom::new(
            Arc::new(GroupTable::trivial()),
            Arc::new(GroupTable::cyclic(2)),
            vec![0],
        )
        .unwrap();
        let r = is_fibration(&p.as_functor());
        assert!(!r.holds);
        assert_eq!(r.counterexample.unwrap().0, "1");
    }

    #[test]
    fn reindexing_along_identity_is_identity() {
        let t = gpow(2);
        let cl = canonical_cleaving(&t);
        let x = t.indexed().base();
        let id = x.id(x.obj("2").unwrap());
        let r = reindexing(&cl, id);
        assert_eq!(r.obj_map(), FinFunctor::identity(r.source().clone()).obj_map());
        assert_eq!(r.mor_map(), FinFunctor::identity(r.source().clone()).mor_map());
    }

    #[test]
    fn reindexing_comparison_is_iso() {
        let t = gpow(3);
        let cl = canonical_cleaving(&t);
        let x = t.indexed().base();
        let f = x.mor("1>2[1]").unwrap();
        let g = x.mor("2>3[2,0]").unwrap();
        assert!(reindexing_comparison(&cl, f, g).is_iso());
        let r = reindexing(&cl, g);
        assert!(functor_properties(&r).full);
    }

    #[test]
    fn identity_is_fibred() {
        let t = gpow(1);
        let id = FinFunctor::identity(t.cat().clone());
        let r = check_fibred_functor(&id, t.proj(), t.proj()).unwrap();
        assert!(r.holds);
    }
}
