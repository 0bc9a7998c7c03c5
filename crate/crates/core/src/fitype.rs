//! The seven-condition FI-type audit and the fiberwise lemmas behind it.

use serde::Serialize;

use crate::cat::{
    below_set, is_ei, is_end_transitive, is_iso, is_mono, is_transitive, iso_classes, FinCat, FinFunctor, Mor, Obj,
};
use crate::groth::{fiber, Cleaving, Total};
use crate::limits::Limits;
use crate::par;

/// One condition of the audit. `counterexample` is present iff `holds` is
/// false and lists the offending identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub holds: bool,
    pub summary: String,
    pub counterexample: Option<Vec<String>>,
}

impl Condition {
    pub(crate) fn new(summary: String, counterexample: Option<Vec<String>>) -> Condition {
        Condition {
            holds: counterexample.is_none(),
            summary,
            counterexample,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiTypeReport {
    pub locally_finite: Condition,
    pub all_mono: Condition,
    pub ei: Condition,
    pub transitive: Condition,
    pub increasing: Condition,
    pub has_pullbacks: Condition,
    pub has_weak_pushouts: Condition,
}

impl FiTypeReport {
    pub fn conditions(&self) -> [(&'static str, &Condition); 7] {
        [
            ("locally_finite", &self.locally_finite),
            ("all_mono", &self.all_mono),
            ("ei", &self.ei),
            ("transitive", &self.transitive),
            ("increasing", &self.increasing),
            ("has_pullbacks", &self.has_pullbacks),
            ("has_weak_pushouts", &self.has_weak_pushouts),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.holds)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.conditions()
            .iter()
            .filter(|(_, c)| !c.holds)
            .map(|(n, _)| *n)
            .collect()
    }
}

/// `(f, g₁, g₂)` with `f ∘ g₁ = f ∘ g₂` and `g₁ ≠ g₂`.
pub fn mono_counterexample(c: &FinCat, f: Mor) -> Option<(Mor, Mor)> {
    if is_mono(c, f) {
        return None;
    }
    let a = c.src(f);
    c.objects().find_map(|x| {
        let hom = c.hom(x, a);
        hom.iter().enumerate().find_map(|(i, &g1)| {
            hom[i + 1..]
                .iter()
                .find(|&&g2| c.compose(f, g1) == c.compose(f, g2))
                .map(|&g2| (g1, g2))
        })
    })
}

pub fn check_fi_type(c: &FinCat) -> FiTypeReport {
    check_fi_type_with(&Limits::new(c))
}

pub fn check_fi_type_with(lim: &Limits) -> FiTypeReport {
    let c = lim.category();
    let name = |m: Mor| c.mor_name(m).to_owned();
    let locally_finite = Condition::new(format!("max |hom| = {}", c.max_hom_size()), None);

    let bad = par::find_first_range(c.num_morphisms(), |i| {
        let f = Mor(i as u32);
        mono_counterexample(c, f).map(|(g1, g2)| vec![name(f), name(g1), name(g2)])
    });
    let all_mono = Condition::new(format!("{} morphisms", c.num_morphisms()), bad);

    let ei = is_ei(c);
    let endos: usize = c.objects().map(|x| c.hom(x, x).len()).sum();
    let ei = Condition::new(format!("{endos} endomorphisms"), ei.counterexample.map(|e| vec![e]));

    let tr = is_transitive(c);
    let transitive = Condition::new(
        format!("{} objects", c.num_objects()),
        tr.counterexample.map(|w| vec![w.x, w.y, w.f1, w.f2]),
    );

    let classes = iso_classes(c).len();
    let max_below = c.objects().map(|y| below_set(c, y).len()).max().unwrap_or(0);
    let increasing = Condition::new(
        format!("{classes} iso classes, at most {max_below} below any object"),
        None,
    );

    let pb = lim.audit_pullbacks();
    let has_pullbacks = Condition::new(
        format!("{} cospans, {} without a pullback", pb.diagrams, pb.missing),
        pb.counterexample.map(|(a, b)| vec![a, b]),
    );

    let wp = lim.audit_weak_pushouts();
    let has_weak_pushouts = Condition::new(
        format!(
            "{} spans, {} without any pullback completion; every span has one: {}",
            wp.spans, wp.spans_without_completion, wp.strict_holds
        ),
        wp.counterexample.map(|(a, b)| vec![a, b]),
    );

    FiTypeReport {
        locally_finite,
        all_mono,
        ei,
        transitive,
        increasing,
        has_pullbacks,
        has_weak_pushouts,
    }
}

/// `|hom((x,a),(y,b))| = Σ_{f: x→y} |M(x)(a, Mf(b))|` for every pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub holds: bool,
    pub pairs: usize,
    pub max_hom: usize,
    pub counterexample: Option<(String, String)>,
}

pub fn check_locally_finite_product_law(t: &Total) -> CountReport {
    let c = t.cat();
    let bad = t.hom_count_mismatch();
    CountReport {
        holds: bad.is_none(),
        pairs: c.num_objects().pow(2),
        max_hom: c.max_hom_size(),
        counterexample: bad,
    }
}

/// A fiberwise lemma on one instance: under `premise`, the total-side
/// verdict should equal the fiber-side verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Biconditional {
    pub premise: bool,
    pub total: bool,
    pub fibers: bool,
    /// `!premise || total == fibers`.
    pub agree: bool,
}

impl Biconditional {
    fn new(premise: bool, total: bool, fibers: bool) -> Biconditional {
        Biconditional {
            premise,
            total,
            fibers,
            agree: !premise || total == fibers,
        }
    }
}

fn all_mono(c: &FinCat) -> bool {
    par::find_first_range(c.num_morphisms(), |i| (!is_mono(c, Mor(i as u32))).then_some(())).is_none()
}

/// Over an all-mono base, the total category is all-mono iff every fiber is.
pub fn mono_lemma(t: &Total) -> Biconditional {
    let m = t.indexed();
    let base = m.base();
    Biconditional::new(
        all_mono(base),
        all_mono(t.cat()),
        base.objects().all(|x| all_mono(m.fiber(x))),
    )
}

/// Every `a → Mf(a)` in `M(x)` is invertible for endomorphisms `f: x → x`.
pub fn endo_fiber_condition(t: &Total) -> Option<(String, String)> {
    let m = t.indexed();
    let base = m.base();
    for x in base.objects() {
        let mx = m.fiber(x);
        for &f in base.hom(x, x) {
            for a in mx.objects() {
                let fa = m.arrow(f).obj(a);
                if let Some(&k) = mx.hom(a, fa).iter().find(|&&k| is_iso(mx, k).is_none()) {
                    return Some((base.mor_name(f).into(), mx.mor_name(k).into()));
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EiForward {
    pub base_ei: bool,
    pub fibers_ei: bool,
    pub endo_condition: bool,
    pub total_ei: bool,
    /// Hypotheses imply the conclusion.
    pub holds: bool,
}

/// EI base, EI fibers and invertible `a → Mf(a)` give an EI total category.
pub fn ei_forward(t: &Total) -> EiForward {
    let m = t.indexed();
    let base = m.base();
    let base_ei = is_ei(base).holds;
    let fibers_ei = base.objects().all(|x| is_ei(m.fiber(x)).holds);
    let endo_condition = endo_fiber_condition(t).is_none();
    let total_ei = is_ei(t.cat()).holds;
    EiForward {
        base_ei,
        fibers_ei,
        endo_condition,
        total_ei,
        holds: !(base_ei && fibers_ei && endo_condition) || total_ei,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EiConverse {
    pub premise: bool,
    pub fibers_ei: bool,
    /// Every `a → f*a` in the fiber is invertible there, for endomorphisms `f`.
    pub reindexed_invertible: bool,
    pub holds: bool,
}

/// For a fibration between EI categories, fibers are EI and every vertical
/// `a → f*a` over an endomorphism `f` is invertible in the fiber.
pub fn ei_converse(cl: &Cleaving) -> EiConverse {
    let p = cl.functor();
    let (a, x) = (p.source(), p.target());
    let premise = is_ei(a).holds && is_ei(x).holds;
    let fibers: Vec<_> = x.objects().map(|o| fiber(p, o)).collect();
    let fibers_ei = fibers.iter().all(|fb| is_ei(&fb.cat).holds);
    let reindexed_invertible = x.objects().all(|o| {
        let fb = &fibers[o.idx()];
        x.hom(o, o).iter().all(|&f| {
            fb.inclusion.obj_map().iter().all(|&b| {
                let fb_b = fb.object_of(b).expect("over o");
                let fstar = fb.object_of(cl.pullback_object(f, b)).expect("over o");
                fb.cat.hom(fb_b, fstar).iter().all(|&k| is_iso(&fb.cat, k).is_some())
            })
        })
    });
    EiConverse {
        premise,
        fibers_ei,
        reindexed_invertible,
        holds: !premise || (fibers_ei && reindexed_invertible),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncreasingReport {
    /// Below-sets of the total category project into below-sets of the base.
    pub projects_into_base: bool,
    /// Fiber below-sets are below-sets of the total category cut to the fiber.
    pub fiber_restriction: bool,
    pub max_total_below: usize,
    pub max_fiber_below: usize,
    pub holds: bool,
}

/// Below-set computations agree across the projection: if `(x,a) ≤ (y,b)`
/// then `x ≤ y`, and `a ≤ b` in a fiber iff `a ≤ b` through a vertical map.
pub fn increasing_lemma(t: &Total) -> IncreasingReport {
    let c = t.cat();
    let p = t.proj();
    let base = t.indexed().base();
    let base_classes = iso_classes(base);
    let class_of = |o: Obj| base_classes.iter().position(|cl| cl.contains(&o)).expect("class");
    let projects_into_base = c.objects().all(|yb| {
        let below: Vec<usize> = below_set(base, p.obj(yb)).into_iter().map(class_of).collect();
        below_set(c, yb).iter().all(|&xa| below.contains(&class_of(p.obj(xa))))
    });
    let mut max_fiber_below = 0;
    let fiber_restriction = base.objects().all(|x| {
        let fb = fiber(p, x);
        fb.cat.objects().all(|b| {
            let below = below_set(&fb.cat, b);
            max_fiber_below = max_fiber_below.max(below.len());
            let tb = fb.inclusion.obj(b);
            fb.cat.objects().all(|a| {
                let vertical = c
                    .hom(fb.inclusion.obj(a), tb)
                    .iter()
                    .any(|&m| base.is_identity(p.mor(m)));
                vertical == !fb.cat.hom(a, b).is_empty()
            })
        })
    });
    let max_total_below = c.objects().map(|o| below_set(c, o).len()).max().unwrap_or(0);
    IncreasingReport {
        projects_into_base,
        fiber_restriction,
        max_total_below,
        max_fiber_below,
        holds: projects_into_base && fiber_restriction,
    }
}

/// A failure of the ℓ-condition: base maps, fiber objects and fiber maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllWitness {
    pub f1: String,
    pub f2: String,
    pub b: String,
    pub k1: String,
    pub k2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllReport {
    pub holds: bool,
    /// Whether every `g` with `f₁ = g ∘ f₂` was required to admit an `ℓ`
    /// (otherwise some `g` suffices).
    pub strict: bool,
    pub checked: usize,
    pub counterexample: Option<EllWitness>,
}

/// For `k₁: a → Mf₁(b)` and `k₂: a → Mf₂(b)`, some `g: y → y` with
/// `f₁ = g ∘ f₂` and `ℓ: b → Mg(b)` satisfy `μ_{f₂,g}[b] ∘ Mf₂(ℓ) ∘ k₂ = k₁`.
/// With `strict`, every such `g` must admit an `ℓ`.
pub fn ell_condition(t: &Total, strict: bool) -> EllReport {
    let m = t.indexed();
    let base = m.base();
    let pairs: Vec<(Mor, Mor)> = base
        .objects()
        .flat_map(|x| {
            base.objects().flat_map(move |y| {
                let hom = base.hom(x, y);
                hom.iter().flat_map(move |&f1| hom.iter().map(move |&f2| (f1, f2)))
            })
        })
        .collect();
    let results = par::map(&pairs, |&(f1, f2)| {
        let (x, y) = (base.src(f1), base.tgt(f1));
        let (mx, my) = (m.fiber(x), m.fiber(y));
        let gs: Vec<Mor> = base
            .hom(y, y)
            .iter()
            .copied()
            .filter(|&g| base.compose(g, f2) == f1)
            .collect();
        let mut checked = 0;
        for b in my.objects() {
            let (t1, t2) = (m.arrow(f1).obj(b), m.arrow(f2).obj(b));
            for a in mx.objects() {
                for &k1 in mx.hom(a, t1) {
                    for &k2 in mx.hom(a, t2) {
                        checked += 1;
                        let works = |&g: &Mor| {
                            my.hom(b, m.arrow(g).obj(b))
                                .iter()
                                .any(|&l| mx.compose(m.mu(f2, g, b), mx.compose(m.arrow(f2).mor(l), k2)) == k1)
                        };
                        let ok = if strict {
                            !gs.is_empty() && gs.iter().all(works)
                        } else {
                            gs.iter().any(works)
                        };
                        if !ok {
                            let w = EllWitness {
                                f1: base.mor_name(f1).into(),
                                f2: base.mor_name(f2).into(),
                                b: my.obj_name(b).into(),
                                k1: mx.mor_name(k1).into(),
                                k2: mx.mor_name(k2).into(),
                            };
                            return (checked, Some(w));
                        }
                    }
                }
            }
        }
        (checked, None)
    });
    let checked = results.iter().map(|r| r.0).sum();
    let counterexample = results.into_iter().find_map(|r| r.1);
    EllReport {
        holds: counterexample.is_none(),
        strict,
        checked,
        counterexample,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityLemma {
    pub base_transitive: bool,
    pub total_transitive: bool,
    pub fibers_transitive: bool,
    pub ell: EllReport,
    /// `!base_transitive || total_transitive == (fibers_transitive && ell)`.
    pub agree: bool,
}

/// Over an `End`-transitive base, the total category is `End`-transitive iff
/// the fibers are and the ℓ-condition holds.
pub fn transitivity_lemma(t: &Total, strict: bool) -> TransitivityLemma {
    let m = t.indexed();
    let base = m.base();
    let base_transitive = is_end_transitive(base).holds;
    let total_transitive = is_end_transitive(t.cat()).holds;
    let fibers_transitive = base.objects().all(|x| is_end_transitive(m.fiber(x)).holds);
    let ell = ell_condition(t, strict);
    let agree = !base_transitive || total_transitive == (fibers_transitive && ell.holds);
    TransitivityLemma {
        base_transitive,
        total_transitive,
        fibers_transitive,
        ell,
        agree,
    }
}

/// The functor's fibers all pass `check`.
pub fn fibers_satisfy(p: &FinFunctor, check: impl Fn(&FinCat) -> bool) -> bool {
    p.target().objects().all(|x| check(&fiber(p, x).cat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::groth::grothendieck;
    use crate::group::GroupTable;
    use std::sync::Arc;

    #[test]
    fn fi3_is_fi_type() {
        let r = check_fi_type(&gen::fi_truncated(3));
        assert!(r.all_hold(), "{:?}", r.failing());
        assert_eq!(r.locally_finite.summary, "max |hom| = 6");
    }

    #[test]
    fn idempotent_monoid_failures() {
        let c = gen::idempotent_monoid();
        let r = check_fi_type(&c);
        assert!(!r.all_mono.holds && !r.ei.holds);
        assert_eq!(r.ei.counterexample.as_deref(), Some(&["e".to_owned()][..]));
        assert_eq!(r.all_mono.counterexample.as_ref().unwrap()[0], "e");
    }

    #[test]
    fn groupoids_are_fi_type() {
        let c = GroupTable::symmetric(3).as_category();
        assert!(check_fi_type(&c).all_hold());
        assert!(check_fi_type(&gen::codiscrete(3)).all_hold());
    }

    #[test]
    fn lemmas_on_gpow() {
        let t = grothendieck(Arc::new(gen::indexed_gpow(&GroupTable::cyclic(2), 2))).unwrap();
        assert!(check_locally_finite_product_law(&t).holds);
        assert!(mono_lemma(&t).agree);
        assert!(ei_forward(&t).holds && ei_forward(&t).total_ei);
        assert!(increasing_lemma(&t).holds);
        let tl = transitivity_lemma(&t, false);
        assert!(tl.agree && tl.total_transitive && tl.ell.holds);
    }

    #[test]
    fn idempotent_fiber_breaks_ei() {
        let x = Arc::new(gen::terminal());
        let y = Arc::new(gen::idempotent_monoid());
        let t = grothendieck(Arc::new(gen::delta_const(x, y))).unwrap();
        let r = ei_forward(&t);
        assert!(!r.fibers_ei && !r.total_ei && r.holds);
        assert!(!mono_lemma(&t).total && mono_lemma(&t).agree);
    }
}
