//! Exhaustive checks of the elementary lemmas about `∫M` and its projection.

use serde::Serialize;

use super::{canonical_cleaving, check_split, is_cartesian, Total};
use crate::cat::{is_iso, is_mono, Mor};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl LemmaCheck {
    fn over(t: &Total, items: &[Mor], bad: impl Fn(Mor) -> bool + Sync + Send) -> LemmaCheck {
        let found = par::find_first(items, |&m| bad(m).then_some(m));
        LemmaCheck {
            holds: found.is_none(),
            checked: items.len(),
            counterexample: found.map(|m| t.cat().mor_name(m).to_owned()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    /// Isomorphisms of `∫M` are cartesian for the projection.
    pub isos_cartesian: LemmaCheck,
    /// `(f, k)` is invertible iff `f` and `k` are.
    pub invertible_iff_parts: LemmaCheck,
    /// Canonical lifts of invertible base morphisms are monomorphisms.
    pub lifts_of_isos_mono: LemmaCheck,
    /// Vertical morphisms invertible in `∫M` have vertical inverses.
    pub inverses_vertical: LemmaCheck,
    /// Canonical lifts `(f, id)` are cartesian.
    pub canonical_lifts_cartesian: LemmaCheck,
    pub strict: bool,
    /// The canonical cleaving is split.
    pub split: bool,
    /// `!strict || split`.
    pub split_if_strict: bool,
}

pub fn lemma_suite(t: &Total) -> LemmaReport {
    let m = t.indexed();
    let base = m.base();
    let c = t.cat();
    let p = t.proj();
    let all: Vec<Mor> = c.morphisms().collect();
    let isos: Vec<Mor> = all.iter().copied().filter(|&x| t.invert(x).is_some()).collect();

    let isos_cartesian = LemmaCheck::over(t, &isos, |x| !is_cartesian(p, x));
    let invertible_iff_parts = LemmaCheck::over(t, &all, |x| {
        let parts = t.mor_parts(x);
        let mx = m.fiber(base.src(parts.base_part));
        let by_parts = is_iso(base, parts.base_part).is_some() && is_iso(mx, parts.fiber_part).is_some();
        t.invert(x).is_some() != by_parts
    });

    let cl = canonical_cleaving(t);
    let lifts: Vec<Mor> = cl.entries().into_iter().map(|(_, phi)| phi).collect();
    let lifts_of_isos_mono = LemmaCheck::over(t, &lifts, |phi| is_iso(base, p.mor(phi)).is_some() && !is_mono(c, phi));
    let canonical_lifts_cartesian = LemmaCheck::over(t, &lifts, |phi| !is_cartesian(p, phi));

    let vertical: Vec<Mor> = all.iter().copied().filter(|&x| base.is_identity(p.mor(x))).collect();
    let inverses_vertical = LemmaCheck::over(t, &vertical, |x| {
        t.invert(x).is_some_and(|inv| !base.is_identity(p.mor(inv)))
    });

    let strict = m.is_strict();
    let split = check_split(&cl).holds;
    LemmaReport {
        isos_cartesian,
        invertible_iff_parts,
        lifts_of_isos_mono,
        inverses_vertical,
        canonical_lifts_cartesian,
        strict,
        split,
        split_if_strict: !strict || split,
    }
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.isos_cartesian.holds
            && self.invertible_iff_parts.holds
            && self.lifts_of_isos_mono.holds
            && self.inverses_vertical.holds
            && self.canonical_lifts_cartesian.holds
            && self.split_if_strict
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::groth::grothendieck;
    use crate::group::GroupTable;
    use std::sync::Arc;

    #[test]
    fn gpow_lemmas() {
        let t = grothendieck(Arc::new(gen::indexed_gpow(&GroupTable::cyclic(2), 2))).unwrap();
        let r = lemma_suite(&t);
        assert!(r.all_hold() && r.strict && r.split, "{r:?}");
        assert!(r.isos_cartesian.checked > 0);
    }

    #[test]
    fn nonstrict_slice_lemmas() {
        let m = gen::slice_indexed(Arc::new(gen::preorder_with_iso())).unwrap();
        let r = lemma_suite(&grothendieck(Arc::new(m)).unwrap());
        assert!(r.all_hold() && !r.strict, "{r:?}");
    }
}
