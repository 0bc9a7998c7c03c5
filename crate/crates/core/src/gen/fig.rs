//! Decorated injections built directly, and FI over a groupoid.

use std::collections::HashMap;
use std::sync::Arc;

use super::basic::product_category;
use super::fi::{compose_injections, injection_name, injections, parse_injection};
use super::indexed::{gpow_decorations, gpow_name, indexed_gpow};
use crate::cat::{functor_properties, CatParts, FinCat, FinFunctor, FunctorReport, Mor, Obj};
use crate::groth::{grothendieck, Total};
use crate::group::{power_digits, tuple_name, GroupTable};

/// Decorations of `(f', h) ∘ (f, g)`: `g_i · h_{f(i)}`.
pub fn fig_compose(g: &GroupTable, f: &[usize], dec_f: &[usize], dec_g: &[usize]) -> Vec<usize> {
    f.iter().zip(dec_f).map(|(&fi, &gi)| g.mul(gi, dec_g[fi])).collect()
}

/// Identifier `m>n[image]|(g₀,…)` of a decorated injection.
pub fn fig_name(g: &GroupTable, m: usize, n: usize, image: &[usize], dec: &[usize]) -> String {
    format!("{}|{}", injection_name(m, n, image), gpow_name(g, dec))
}

/// `FI_G` on `0, …, N`: injections with one element of `G` per source point.
#[allow(clippy::needless_range_loop)]
pub fn fi_g_direct(g: &GroupTable, n_max: usize) -> FinCat {
    let q = g.order();
    let mut p = CatParts::default();
    for n in 0..=n_max {
        p.add_object(n.to_string());
    }
    let mut data: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    let mut pos: HashMap<(usize, Vec<usize>, Vec<usize>), usize> = HashMap::new();
    let mut ids = vec![0; n_max + 1];
    for m in 0..=n_max {
        for n in m..=n_max {
            for img in injections(m, n) {
                for i in 0..q.pow(m as u32) {
                    let dec = power_digits(i, q, m);
                    let k = p.add_morphism(fig_name(g, m, n, &img, &dec), m, n);
                    let identity =
                        m == n && img.iter().enumerate().all(|(i, &j)| i == j) && dec.iter().all(|&d| d == g.unit());
                    if identity {
                        ids[m] = k;
                    }
                    pos.insert((n, img.clone(), dec.clone()), k);
                    data.push((n, img.clone(), dec));
                }
            }
        }
    }
    p.identities = ids;
    FinCat::from_parts(p, |b, a| {
        let (n2, img2, dec2) = &data[b];
        let (_, img1, dec1) = &data[a];
        let img = compose_injections(img2, img1);
        let dec = fig_compose(g, img1, dec1, dec2);
        pos.get(&(*n2, img, dec)).copied()
    })
    .expect("decorated injections")
}

/// `FI_G → ∫G^•`, `(f, g) ↦ (f, g⁻¹)` coordinatewise, with both sides built.
pub fn fig_comparison(g: &GroupTable, n_max: usize) -> (Arc<FinCat>, Total, FinFunctor) {
    let direct = Arc::new(fi_g_direct(g, n_max));
    let total = grothendieck(Arc::new(indexed_gpow(g, n_max))).expect("∫G^•");
    let m = total.indexed().clone();
    let base = m.base();
    let obj_map = direct
        .objects()
        .map(|o| total.object(base.obj(direct.obj_name(o)).expect("object"), Obj(0)))
        .collect();
    let mor_map = direct
        .morphisms()
        .map(|x| {
            let (inj, dec) = direct.mor_name(x).split_once('|').expect("decorated name");
            let f = base.mor(inj).expect("injection");
            let src = base.src(f);
            let digits = gpow_decorations(g, base.obj_name(src).parse().expect("numeral"));
            let d = &digits[dec];
            let inv: Vec<usize> = d.iter().map(|&e| g.inv(e)).collect();
            let k = m.fiber(src).mor(&gpow_name(g, &inv)).expect("element");
            total.morphism(f, k, Obj(0)).expect("total morphism")
        })
        .collect();
    let functor = FinFunctor::new(direct.clone(), total.cat().clone(), obj_map, mor_map).expect("comparison functor");
    (direct, total, functor)
}

/// `G ⊔ H` as a two-object groupoid: objects `G`, `H`, morphisms `G.g`, `H.h`.
pub fn disjoint_union_groupoid(g: &GroupTable, h: &GroupTable) -> FinCat {
    let mut p = CatParts::default();
    let og = p.add_object("G");
    let oh = p.add_object("H");
    for a in g.elements() {
        p.add_morphism(format!("G.{}", g.name(a)), og, og);
    }
    for b in h.elements() {
        p.add_morphism(format!("H.{}", h.name(b)), oh, oh);
    }
    let ng = g.order();
    p.identities = vec![g.unit(), ng + h.unit()];
    FinCat::from_parts(p, |b, a| {
        Some(if a < ng {
            g.mul(b, a)
        } else {
            ng + h.mul(b - ng, a - ng)
        })
    })
    .expect("disjoint union of groups")
}

fn words(colors: usize, n: usize) -> Vec<Vec<usize>> {
    (0..colors.pow(n as u32)).map(|i| power_digits(i, colors, n)).collect()
}

/// `FI` over a groupoid `Γ` on words of length at most `N`: a morphism from
/// `c` to `c'` is an injection `f` with `γ_i: c'(f(i)) → c(i)` in `Γ`, and
/// `(f', δ) ∘ (f, γ) = (f' ∘ f, γ_i ∘ δ_{f(i)})`.
pub fn fi_over_groupoid(gamma: &FinCat, n_max: usize) -> FinCat {
    let k = gamma.num_objects();
    let word_name = |w: &[usize]| tuple_name(w.iter().map(|&c| gamma.obj_name(Obj(c as u32))));
    let mut p = CatParts::default();
    let mut obj_pos = HashMap::new();
    let mut all_words = Vec::new();
    for n in 0..=n_max {
        for w in words(k, n) {
            obj_pos.insert(w.clone(), p.add_object(word_name(&w)));
            all_words.push(w);
        }
    }
    type Key = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<Mor>);
    let mut data: Vec<Key> = Vec::new();
    let mut pos: HashMap<Key, usize> = HashMap::new();
    let mut ids = vec![0; all_words.len()];
    for c in &all_words {
        for d in all_words.iter().filter(|d| d.len() >= c.len()) {
            for img in injections(c.len(), d.len()) {
                let choices: Vec<&[Mor]> = img
                    .iter()
                    .zip(c)
                    .map(|(&j, &ci)| gamma.hom(Obj(d[j] as u32), Obj(ci as u32)))
                    .collect();
                let total: usize = choices.iter().map(|h| h.len()).product();
                for i in 0..total {
                    let mut rest = i;
                    let mut dec = vec![Mor(0); c.len()];
                    for (slot, h) in dec.iter_mut().zip(&choices).rev() {
                        *slot = h[rest % h.len()];
                        rest /= h.len();
                    }
                    let name = format!(
                        "{}>{}{}|{}",
                        word_name(c),
                        word_name(d),
                        image_list(&img),
                        tuple_name(dec.iter().map(|&m| gamma.mor_name(m)))
                    );
                    let idx = p.add_morphism(name, obj_pos[c], obj_pos[d]);
                    let identity = c == d
                        && img.iter().enumerate().all(|(i, &j)| i == j)
                        && dec.iter().all(|&m| gamma.is_identity(m));
                    if identity {
                        ids[obj_pos[c]] = idx;
                    }
                    let key = (c.clone(), d.clone(), img.clone(), dec);
                    pos.insert(key.clone(), idx);
                    data.push(key);
                }
            }
        }
    }
    p.identities = ids;
    FinCat::from_parts(p, |b, a| {
        let (_, d2, img2, dec2) = &data[b];
        let (c1, _, img1, dec1) = &data[a];
        let img = compose_injections(img2, img1);
        let dec = img1
            .iter()
            .zip(dec1)
            .map(|(&j, &g)| gamma.compose(g, dec2[j]))
            .collect();
        pos.get(&(c1.clone(), d2.clone(), img, dec)).copied()
    })
    .expect("FI over a groupoid")
}

/// `FI_G × FI_H → FI_{G⊔H}` on pairs with `m + n ≤ N`, sending `(m, n)` to
/// the word `G…GH…H` and `((f, g), (j, h))` to `(f + j, g, h)`.
pub fn fi_gh_comparison(g: &GroupTable, h: &GroupTable, n_max: usize) -> (FinFunctor, FunctorReport) {
    let fg = fi_g_direct(g, n_max);
    let fh = fi_g_direct(h, n_max);
    let prod = product_category(&fg, &fh);
    let size = |o: Obj| -> usize {
        let name = prod.obj_name(o);
        let (a, b) = name[1..name.len() - 1].split_once(',').expect("pair");
        a.parse::<usize>().expect("numeral") + b.parse::<usize>().expect("numeral")
    };
    let src = Arc::new(prod.full_subcategory(|o| size(o) <= n_max));
    let gamma = disjoint_union_groupoid(g, h);
    let tgt = Arc::new(fi_over_groupoid(&gamma, n_max));
    let word = |m: usize, n: usize| tuple_name(std::iter::repeat_n("G", m).chain(std::iter::repeat_n("H", n)));
    let obj_map = src
        .objects()
        .map(|o| {
            let name = src.obj_name(o);
            let (a, b) = name[1..name.len() - 1].split_once(',').expect("pair");
            tgt.obj(&word(a.parse().expect("numeral"), b.parse().expect("numeral")))
                .expect("word")
        })
        .collect();
    // (m, m', image, decoration identifiers) of a decorated injection.
    let parts = |c: &FinCat, x: Mor, grp: &GroupTable, label: &str| {
        let (inj, dec) = c.mor_name(x).split_once('|').expect("decorated name");
        let (m, m2, img) = parse_injection(inj).expect("injection");
        let digits = &gpow_decorations(grp, m)[dec];
        let names: Vec<String> = digits.iter().map(|&d| format!("{label}.{}", grp.name(d))).collect();
        (m, m2, img, names)
    };
    let mut image_of = HashMap::new();
    for a in fg.morphisms() {
        let (m, m2, img_f, dec_f) = parts(&fg, a, g, "G");
        for b in fh.morphisms() {
            let key = format!("({}|{})", fg.mor_name(a), fh.mor_name(b));
            let Some(x) = src.mor(&key) else { continue };
            let (n, n2, img_j, dec_j) = parts(&fh, b, h, "H");
            let mut img = img_f.clone();
            img.extend(img_j.iter().map(|&i| m2 + i));
            let name = format!(
                "{}>{}{}|{}",
                word(m, n),
                word(m2, n2),
                image_list(&img),
                tuple_name(dec_f.iter().chain(&dec_j))
            );
            image_of.insert(x, tgt.mor(&name).expect("decorated injection"));
        }
    }
    let mor_map = src.morphisms().map(|x| image_of[&x]).collect();
    let functor = FinFunctor::new(src, tgt, obj_map, mor_map).expect("comparison functor");
    let report = functor_properties(&functor);
    (functor, report)
}

fn image_list(img: &[usize]) -> String {
    let parts: Vec<String> = img.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::automorphism_group;

    #[test]
    fn counts() {
        let c = fi_g_direct(&GroupTable::cyclic(2), 3);
        let o = |s: &str| c.obj(s).unwrap();
        assert_eq!(c.hom(o("2"), o("3")).len(), 24);
        assert_eq!(automorphism_group(&c, o("3")).order(), 48);
    }

    #[test]
    fn comparison_is_an_equivalence() {
        let (_, _, f) = fig_comparison(&GroupTable::symmetric(3), 2);
        let r = functor_properties(&f);
        assert!(r.equivalence);
    }

    #[test]
    fn figure_composite() {
        let g = GroupTable::cyclic(5);
        let f = [1, 0, 3];
        let dec_g = [1, 2, 3];
        let dec_h = [0, 4, 2, 1];
        // (g₀h₁, g₁h₀, g₂h₃)
        assert_eq!(fig_compose(&g, &f, &dec_g, &dec_h), vec![0, 2, 4]);
    }

    #[test]
    fn groupoid_version_agrees_for_one_color() {
        let g = GroupTable::cyclic(3);
        let a = fi_g_direct(&g, 2);
        let b = fi_over_groupoid(&g.as_category(), 2);
        assert_eq!(a.num_morphisms(), b.num_morphisms());
    }

    #[test]
    fn disjoint_union_equivalence() {
        let z2 = GroupTable::cyclic(2);
        let (f, r) = fi_gh_comparison(&z2, &z2, 2);
        assert!(r.equivalence, "{r:?}");
        let src = f.source();
        let o = src.obj("(1,1)").unwrap();
        assert_eq!(f.target().obj_name(f.obj(o)), "(G,H)");
    }
}
