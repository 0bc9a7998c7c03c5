//! Truncations of the category of finite sets and injections.

use std::collections::HashMap;

use crate::cat::{CatParts, FinCat};

/// Identifier of the injection `m → n` with the given image tuple.
pub fn injection_name(m: usize, n: usize, image: &[usize]) -> String {
    let parts: Vec<String> = image.iter().map(|i| i.to_string()).collect();
    format!("{m}>{n}[{}]", parts.join(","))
}

/// Inverse of [`injection_name`].
pub fn parse_injection(name: &str) -> Option<(usize, usize, Vec<usize>)> {
    let (mn, rest) = name.split_once('[')?;
    let (m, n) = mn.split_once('>')?;
    let body = rest.strip_suffix(']')?;
    let image = if body.is_empty() {
        Vec::new()
    } else {
        body.split(',')
            .map(|s| s.parse().ok())
            .collect::<Option<Vec<usize>>>()?
    };
    Some((m.parse().ok()?, n.parse().ok()?, image))
}

/// All injections `{0..m} → {0..n}` as image tuples, in lexicographic order.
pub fn injections(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(m, n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    if m <= n {
        go(m, n, &mut Vec::with_capacity(m), &mut vec![false; n], &mut out);
    }
    out
}

/// Image tuple of `g ∘ f`.
pub fn compose_injections(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&i| g[i]).collect()
}

/// The full subcategory of FI on `0, …, N`.
#[allow(clippy::needless_range_loop)]
pub fn fi_truncated(n_max: usize) -> FinCat {
    let mut p = CatParts::default();
    for n in 0..=n_max {
        p.add_object(n.to_string());
    }
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut pos: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut ids = vec![0; n_max + 1];
    for m in 0..=n_max {
        for n in m..=n_max {
            for img in injections(m, n) {
                let k = p.add_morphism(injection_name(m, n, &img), m, n);
                if m == n && img.iter().enumerate().all(|(i, &j)| i == j) {
                    ids[m] = k;
                }
                let mut key = img.clone();
                key.push(usize::MAX - n);
                pos.insert(key, k);
                maps.push(img);
            }
        }
    }
    p.identities = ids;
    let tgts: Vec<usize> = p.morphisms.iter().map(|m| m.2).collect();
    FinCat::from_parts(p, |g, f| {
        let mut key = compose_injections(&maps[g], &maps[f]);
        key.push(usize::MAX - tgts[g]);
        pos.get(&key).copied()
    })
    .expect("truncated FI")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n0_is_terminal() {
        let c = fi_truncated(0);
        assert_eq!((c.num_objects(), c.num_morphisms()), (1, 1));
    }

    #[test]
    fn hom_sizes() {
        let c = fi_truncated(3);
        let o = |s: &str| c.obj(s).unwrap();
        assert_eq!(c.hom(o("2"), o("3")).len(), 6);
        assert_eq!(c.hom(o("1"), o("2")).len(), 2);
        assert_eq!(c.hom(o("3"), o("2")).len(), 0);
    }

    #[test]
    fn composition_is_function_composition() {
        let c = fi_truncated(3);
        let f = c.mor("1>2[1]").unwrap();
        let g = c.mor("2>3[2,0]").unwrap();
        assert_eq!(c.mor_name(c.compose(g, f)), "1>3[0]");
    }
}
