//! Indexed categories from the worked examples.

use std::collections::HashMap;
use std::sync::Arc;

use super::fi::{fi_truncated, parse_injection};
use crate::cat::{FinCat, FinFunctor, Obj};
use crate::group::{power_digits, tuple_name, GroupTable};
use crate::indexed::{IndexedCat, IndexedParts};

/// The constant indexed category `ΔY` over `X`: every fiber is `Y` and every
/// arrow functor the identity.
pub fn delta_const(x: Arc<FinCat>, y: Arc<FinCat>) -> IndexedCat {
    let id = FinFunctor::identity(y.clone());
    IndexedCat::new_strict(IndexedParts {
        fibers: vec![y; x.num_objects()],
        arrows: vec![id; x.num_morphisms()],
        base: x,
        compositors: HashMap::new(),
        unitors: HashMap::new(),
    })
    .expect("constant indexed category")
}

/// `n ↦ Gⁿ` over FI truncated at `n_max`, with `f: m → n` acting by
/// `(g₀, …, g_{n-1}) ↦ (g_{f(0)}, …, g_{f(m-1)})`.
pub fn indexed_gpow(g: &GroupTable, n_max: usize) -> IndexedCat {
    let base = Arc::new(fi_truncated(n_max));
    let fibers: Vec<Arc<FinCat>> = (0..=n_max)
        .map(|n| Arc::new(GroupTable::power(g, n).as_category()))
        .collect();
    let decorations: Vec<_> = (0..=n_max).map(|n| gpow_decorations(g, n)).collect();
    let arrows = base
        .morphisms()
        .map(|f| {
            let (m, n, img) = parse_injection(base.mor_name(f)).expect("injection identifier");
            let (src, tgt) = (&fibers[n], &fibers[m]);
            let mor_map = src
                .morphisms()
                .map(|k| {
                    let digits = &decorations[n][src.mor_name(k)];
                    let picked: Vec<usize> = img.iter().map(|&i| digits[i]).collect();
                    tgt.mor(&gpow_name(g, &picked)).expect("element")
                })
                .collect();
            FinFunctor::new(src.clone(), tgt.clone(), vec![Obj(0)], mor_map).expect("restriction functor")
        })
        .collect();
    IndexedCat::new_strict(IndexedParts {
        base,
        fibers,
        arrows,
        compositors: HashMap::new(),
        unitors: HashMap::new(),
    })
    .expect("G-power indexed category")
}

/// Identifier of the element `(g_{d₀}, …)` of `Gⁿ` as named by
/// [`GroupTable::power`].
pub fn gpow_name(g: &GroupTable, digits: &[usize]) -> String {
    tuple_name(digits.iter().map(|&d| g.name(d)))
}

/// Decoration tuples of `Gⁿ` keyed by element identifier.
pub fn gpow_decorations(g: &GroupTable, n: usize) -> HashMap<String, Vec<usize>> {
    (0..g.order().pow(n as u32))
        .map(|i| {
            let d = power_digits(i, g.order(), n);
            (gpow_name(g, &d), d)
        })
        .collect()
}
