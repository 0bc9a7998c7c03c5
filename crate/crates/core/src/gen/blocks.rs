//! Block permutations: `n ↦ FI(≤Q)ⁿ` over `FI(≤N)`.

use std::collections::HashMap;
use std::sync::Arc;

use super::fi::{fi_truncated, injection_name, parse_injection};
use crate::cat::{CatParts, FinCat, FinFunctor, Mor, Obj};
use crate::groth::Total;
use crate::group::{power_digits, tuple_name};
use crate::indexed::{IndexedCat, IndexedParts};

/// `Cⁿ` with objects `(a₁,…,aₙ)` and morphisms `(f₁|…|fₙ)`, indexed in
/// mixed radix with the first coordinate most significant.
pub fn power_category(c: &FinCat, n: usize) -> FinCat {
    let (no, nm) = (c.num_objects(), c.num_morphisms());
    let bar = |parts: Vec<String>| format!("({})", parts.join("|"));
    let mut p = CatParts::default();
    for i in 0..no.pow(n as u32) {
        let d = power_digits(i, no, n);
        p.add_object(tuple_name(d.iter().map(|&o| c.obj_name(Obj(o as u32)))));
    }
    let index = |d: &[usize], q: usize| d.iter().fold(0, |acc, &x| acc * q + x);
    for i in 0..nm.pow(n as u32) {
        let d = power_digits(i, nm, n);
        let ms: Vec<Mor> = d.iter().map(|&m| Mor(m as u32)).collect();
        let src: Vec<usize> = ms.iter().map(|&m| c.src(m).idx()).collect();
        let tgt: Vec<usize> = ms.iter().map(|&m| c.tgt(m).idx()).collect();
        p.add_morphism(
            bar(ms.iter().map(|&m| c.mor_name(m).to_owned()).collect()),
            index(&src, no),
            index(&tgt, no),
        );
    }
    p.identities = (0..no.pow(n as u32))
        .map(|i| {
            let d: Vec<usize> = power_digits(i, no, n)
                .iter()
                .map(|&o| c.id(Obj(o as u32)).idx())
                .collect();
            index(&d, nm)
        })
        .collect();
    FinCat::from_parts(p, |g, f| {
        let (dg, df) = (power_digits(g, nm, n), power_digits(f, nm, n));
        let d: Vec<usize> = dg
            .iter()
            .zip(&df)
            .map(|(&a, &b)| c.compose(Mor(a as u32), Mor(b as u32)).idx())
            .collect();
        Some(index(&d, nm))
    })
    .expect("power category")
}

/// Coordinates of an object or morphism identifier of [`power_category`].
fn coordinates(name: &str, sep: char) -> Vec<&str> {
    let body = &name[1..name.len() - 1];
    if body.is_empty() {
        Vec::new()
    } else {
        body.split(sep).collect()
    }
}

/// Fiber at `n` is `FI(≤Q)ⁿ`; `f: m → n` sends `(q₀,…,q_{n-1})` to
/// `(q_{f(0)},…,q_{f(m-1)})`.
pub fn block_perm_indexed(n_max: usize, q_max: usize) -> IndexedCat {
    let base = Arc::new(fi_truncated(n_max));
    let inner = fi_truncated(q_max);
    let fibers: Vec<Arc<FinCat>> = (0..=n_max).map(|n| Arc::new(power_category(&inner, n))).collect();
    let arrows = base
        .morphisms()
        .map(|f| {
            let (m, n, img) = parse_injection(base.mor_name(f)).expect("injection");
            let (src, tgt) = (&fibers[n], &fibers[m]);
            let obj_map = src
                .objects()
                .map(|o| {
                    let q = coordinates(src.obj_name(o), ',');
                    let picked: Vec<&str> = img.iter().map(|&i| q[i]).collect();
                    tgt.obj(&tuple_name(picked.iter())).expect("object")
                })
                .collect();
            let mor_map = src
                .morphisms()
                .map(|k| {
                    let q = coordinates(src.mor_name(k), '|');
                    let picked: Vec<&str> = img.iter().map(|&i| q[i]).collect();
                    tgt.mor(&format!("({})", picked.join("|"))).expect("morphism")
                })
                .collect();
            FinFunctor::new(src.clone(), tgt.clone(), obj_map, mor_map).expect("coordinate selection")
        })
        .collect();
    IndexedCat::new_strict(IndexedParts {
        base,
        fibers,
        arrows,
        compositors: HashMap::new(),
        unitors: HashMap::new(),
    })
    .expect("block permutations")
}

/// `c: ∫M → FI(≤N·Q)`, `(n, (m₁,…,mₙ)) ↦ Σ mᵢ`; a morphism `(f, k)` acts
/// blockwise, sending the block of `i` into the block of `f(i)` by `kᵢ`.
pub fn counting_functor(t: &Total, n_max: usize, q_max: usize) -> FinFunctor {
    let target = Arc::new(fi_truncated(n_max * q_max));
    let m = t.indexed();
    let base = m.base();
    let c = t.cat();
    let sizes = |x: Obj, a: Obj| -> Vec<usize> {
        coordinates(m.fiber(x).obj_name(a), ',')
            .iter()
            .map(|s| s.parse().expect("numeral"))
            .collect()
    };
    let obj_map = c
        .objects()
        .map(|o| {
            let (x, a) = t.obj_parts(o);
            target
                .obj(&sizes(x, a).iter().sum::<usize>().to_string())
                .expect("in range")
        })
        .collect();
    let mor_map = c
        .morphisms()
        .map(|mm| {
            let parts = t.mor_parts(mm);
            let (x, a) = t.obj_parts(c.src(mm));
            let (y, b) = t.obj_parts(c.tgt(mm));
            let (src_sizes, tgt_sizes) = (sizes(x, a), sizes(y, b));
            let (_, _, f) = parse_injection(base.mor_name(parts.base_part)).expect("injection");
            let ks = coordinates(m.fiber(x).mor_name(parts.fiber_part), '|');
            let offsets = |s: &[usize]| -> Vec<usize> {
                s.iter()
                    .scan(0, |acc, &v| {
                        let o = *acc;
                        *acc += v;
                        Some(o)
                    })
                    .collect()
            };
            let to = offsets(&tgt_sizes);
            let mut image = Vec::new();
            for (i, k) in ks.iter().enumerate() {
                let (_, _, ki) = parse_injection(k).expect("injection");
                image.extend(ki.iter().map(|&j| to[f[i]] + j));
            }
            let (s, n) = (src_sizes.iter().sum(), tgt_sizes.iter().sum());
            target.mor(&injection_name(s, n, &image)).expect("injection")
        })
        .collect();
    FinFunctor::new(c.clone(), target, obj_map, mor_map).expect("counting functor")
}

/// `Σ_{f: m → n} Π_i |FI(mᵢ, q_{f(i)})|` by direct enumeration.
pub fn block_hom_count(src: &[usize], tgt: &[usize]) -> usize {
    super::fi::injections(src.len(), tgt.len())
        .iter()
        .map(|f| {
            f.iter()
                .zip(src)
                .map(|(&j, &m)| super::fi::injections(m, tgt[j]).len())
                .product::<usize>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::functor_properties;
    use crate::gen::compose_injections;
    use crate::groth::grothendieck;

    #[test]
    fn block_counts() {
        let t = grothendieck(Arc::new(block_perm_indexed(2, 1))).unwrap();
        let c = t.cat();
        let a = c.obj("(1,(1))").unwrap();
        let b = c.obj("(2,(1,1))").unwrap();
        assert_eq!(c.hom(a, b).len(), 2);
        assert_eq!(block_hom_count(&[1], &[1, 1]), 2);
        assert!(t.hom_count_mismatch().is_none());
    }

    #[test]
    fn counting_functor_properties() {
        let t = grothendieck(Arc::new(block_perm_indexed(2, 1))).unwrap();
        let r = functor_properties(&counting_functor(&t, 2, 1));
        assert!(r.essentially_surjective && !r.faithful && !r.full);
        assert_eq!(
            r.not_full.as_ref().unwrap(),
            &("(1,(0))".to_owned(), "(0,())".to_owned())
        );
    }

    #[test]
    fn compose_selection() {
        assert_eq!(compose_injections(&[2, 0, 1], &[1]), vec![0]);
    }
}
