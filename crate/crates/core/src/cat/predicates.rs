//! Exhaustive morphism and object predicates.

use serde::Serialize;

use super::{FinCat, Mor, Obj};
use crate::group::GroupTable;
use crate::par;

/// Left-cancellable: `f ∘ g₁ = f ∘ g₂` forces `g₁ = g₂`.
pub fn is_mono(c: &FinCat, f: Mor) -> bool {
    let a = c.src(f);
    let mut seen = vec![false; c.num_morphisms()];
    c.objects().all(|x| {
        let hom = c.hom(x, a);
        let ok = hom.iter().all(|&g| {
            let fg = c.compose(f, g).idx();
            !std::mem::replace(&mut seen[fg], true)
        });
        for &g in hom {
            seen[c.compose(f, g).idx()] = false;
        }
        ok
    })
}

/// The two-sided inverse of `f`, if there is one.
pub fn is_iso(c: &FinCat, f: Mor) -> Option<Mor> {
    let (a, b) = (c.src(f), c.tgt(f));
    c.hom(b, a)
        .iter()
        .copied()
        .find(|&g| c.compose(g, f) == c.id(a) && c.compose(f, g) == c.id(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EiReport {
    pub holds: bool,
    pub counterexample: Option<String>,
}

/// Every endomorphism is an isomorphism.
pub fn is_ei(c: &FinCat) -> EiReport {
    let bad = c
        .objects()
        .flat_map(|x| c.hom(x, x).iter().copied())
        .find(|&e| is_iso(c, e).is_none());
    EiReport {
        holds: bad.is_none(),
        counterexample: bad.map(|e| c.mor_name(e).to_owned()),
    }
}

/// Invertible endomorphisms of `x`, in index order.
pub fn automorphisms(c: &FinCat, x: Obj) -> Vec<Mor> {
    c.hom(x, x)
        .iter()
        .copied()
        .filter(|&e| is_iso(c, e).is_some())
        .collect()
}

/// `Aut(x)` as a multiplication table keyed by morphism identifiers, with
/// `a · b = a ∘ b`.
pub fn automorphism_group(c: &FinCat, x: Obj) -> GroupTable {
    let auts = automorphisms(c, x);
    let pos = |m: Mor| auts.iter().position(|&a| a == m).expect("closed under composition");
    let names = auts.iter().map(|&m| c.mor_name(m).to_owned()).collect();
    let unit = pos(c.id(x));
    GroupTable::from_fn(names, unit, |a, b| pos(c.compose(auts[a], auts[b]))).expect("automorphisms form a group")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityWitness {
    pub x: String,
    pub y: String,
    pub f1: String,
    pub f2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub holds: bool,
    pub counterexample: Option<TransitivityWitness>,
}

/// `Aut(y)` acts transitively on every `Hom(x, y)`.
pub fn is_transitive(c: &FinCat) -> TransitivityReport {
    let auts: Vec<Vec<Mor>> = c.objects().map(|y| automorphisms(c, y)).collect();
    transitivity(c, |y| &auts[y.idx()], true)
}

/// `End(y)` acts transitively on every `Hom(x, y)`: for all `f₁, f₂` some
/// endomorphism `σ` has `σ ∘ f₁ = f₂`.
pub fn is_end_transitive(c: &FinCat) -> TransitivityReport {
    transitivity(c, |y| c.hom(y, y), false)
}

fn transitivity<'a>(c: &'a FinCat, acting: impl Fn(Obj) -> &'a [Mor] + Sync, group: bool) -> TransitivityReport {
    let n = c.num_objects();
    let witness = par::find_first_range(n * n, |i| {
        let (x, y) = (Obj((i / n) as u32), Obj((i % n) as u32));
        let hom = c.hom(x, y);
        let act = acting(y);
        // For a group action one orbit check suffices; a monoid needs all.
        let sources: &[Mor] = if group { &hom[..hom.len().min(1)] } else { hom };
        for &f1 in sources {
            let mut reach = vec![false; c.num_morphisms()];
            for &s in act {
                reach[c.compose(s, f1).idx()] = true;
            }
            if let Some(&f2) = hom.iter().find(|&&f2| !reach[f2.idx()]) {
                return Some(TransitivityWitness {
                    x: c.obj_name(x).to_owned(),
                    y: c.obj_name(y).to_owned(),
                    f1: c.mor_name(f1).to_owned(),
                    f2: c.mor_name(f2).to_owned(),
                });
            }
        }
        None
    });
    TransitivityReport {
        holds: witness.is_none(),
        counterexample: witness,
    }
}

/// Partition of the objects by isomorphism, each class sorted, classes
/// ordered by least member.
pub fn iso_classes(c: &FinCat) -> Vec<Vec<Obj>> {
    let mut class_of: Vec<Option<usize>> = vec![None; c.num_objects()];
    let mut classes: Vec<Vec<Obj>> = Vec::new();
    for x in c.objects() {
        if class_of[x.idx()].is_some() {
            continue;
        }
        let k = classes.len();
        let mut class = vec![x];
        class_of[x.idx()] = Some(k);
        for y in c.objects().skip(x.idx() + 1) {
            if class_of[y.idx()].is_none() && c.hom(x, y).iter().any(|&f| is_iso(c, f).is_some()) {
                class_of[y.idx()] = Some(k);
                class.push(y);
            }
        }
        classes.push(class);
    }
    classes
}

/// Representatives (least members) of the iso classes `[x]` with
/// `Hom(x, y)` nonempty.
pub fn below_set(c: &FinCat, y: Obj) -> Vec<Obj> {
    iso_classes(c)
        .into_iter()
        .map(|class| class[0])
        .filter(|&x| !c.hom(x, y).is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn identities_are_mono_and_self_inverse() {
        let c = gen::fi_truncated(2);
        for x in c.objects() {
            assert!(is_mono(&c, c.id(x)));
            assert_eq!(is_iso(&c, c.id(x)), Some(c.id(x)));
        }
    }

    #[test]
    fn injections_are_mono() {
        let c = gen::fi_truncated(3);
        assert!(c.morphisms().all(|m| is_mono(&c, m)));
    }

    #[test]
    fn idempotent_is_neither_mono_nor_iso() {
        let c = gen::idempotent_monoid();
        let e = c.mor("e").unwrap();
        assert!(!is_mono(&c, e));
        assert_eq!(is_iso(&c, e), None);
        let ei = is_ei(&c);
        assert!(!ei.holds);
        assert_eq!(ei.counterexample.as_deref(), Some("e"));
    }

    #[test]
    fn transposition_is_its_own_inverse() {
        let c = gen::fi_truncated(2);
        let t = c.mor(&gen::injection_name(2, 2, &[1, 0])).unwrap();
        assert_eq!(is_iso(&c, t), Some(t));
        let incl = c.mor(&gen::injection_name(1, 2, &[0])).unwrap();
        assert_eq!(is_iso(&c, incl), None);
    }

    #[test]
    fn ei_examples() {
        assert!(is_ei(&gen::fi_truncated(3)).holds);
        assert!(is_ei(&gen::discrete(3)).holds);
    }

    #[test]
    fn aut_of_three_in_fi_has_order_six() {
        let c = gen::fi_truncated(3);
        assert_eq!(automorphism_group(&c, c.obj("3").unwrap()).order(), 6);
    }

    #[test]
    fn poset_automorphisms_are_trivial() {
        let c = gen::square_poset();
        for x in c.objects() {
            assert_eq!(automorphism_group(&c, x).order(), 1);
        }
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&gen::fi_truncated(3)).holds);
        assert!(is_transitive(&gen::two_parallel_arrows_to_distinct_targets()).holds);
        let bad = is_transitive(&gen::two_parallel_arrows());
        assert!(!bad.holds);
        let w = bad.counterexample.unwrap();
        assert_eq!((w.x.as_str(), w.y.as_str()), ("x", "y"));
    }

    #[test]
    fn iso_classes_examples() {
        let c = gen::fi_truncated(3);
        assert_eq!(iso_classes(&c).len(), 4);
        let below: Vec<&str> = below_set(&c, c.obj("2").unwrap())
            .into_iter()
            .map(|o| c.obj_name(o))
            .collect();
        assert_eq!(below, ["0", "1", "2"]);
        assert_eq!(iso_classes(&gen::codiscrete(2)).len(), 1);
    }
}
