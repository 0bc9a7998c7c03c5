//! Small hand-shaped categories used as examples and counterexamples.

use std::collections::HashMap;

use crate::cat::{CatParts, FinCat};

/// One object `*`, one morphism `1`.
pub fn terminal() -> FinCat {
    let mut p = CatParts::default();
    let o = p.add_object("*");
    p.identities = vec![p.add_morphism("1", o, o)];
    FinCat::from_parts(p, |_, f| Some(f)).expect("terminal category")
}

/// Objects `0`, …, `n-1` with identities only.
pub fn discrete(n: usize) -> FinCat {
    let mut p = CatParts::default();
    for i in 0..n {
        let o = p.add_object(i.to_string());
        let m = p.add_morphism(format!("1_{i}"), o, o);
        p.identities.push(m);
    }
    FinCat::from_parts(p, |_, f| Some(f)).expect("discrete category")
}

/// Objects `0`, …, `n-1` with exactly one morphism `i>j` between any two.
pub fn codiscrete(n: usize) -> FinCat {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    preorder(&names, &pairs)
}

/// The monoid `{1, e}` with `e ∘ e = e`, as a one-object category.
pub fn idempotent_monoid() -> FinCat {
    let mut p = CatParts::default();
    let o = p.add_object("*");
    let one = p.add_morphism("1", o, o);
    let e = p.add_morphism("e", o, o);
    p.identities = vec![one];
    FinCat::from_parts(p, |g, f| {
        Some(if g == one {
            f
        } else if f == one {
            g
        } else {
            e
        })
    })
    .expect("idempotent monoid")
}

/// The preorder generated by `relations` (reflexive-transitive closure),
/// with one morphism `a>b` for each related pair.
pub fn preorder(names: &[String], relations: &[(usize, usize)]) -> FinCat {
    let n = names.len();
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in relations {
        le[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let mut p = CatParts::default();
    for name in names {
        p.add_object(name.clone());
    }
    let mut pos = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                let m = p.add_morphism(format!("{}>{}", names[i], names[j]), i, j);
                pos.insert((i, j), m);
            }
        }
    }
    p.identities = (0..n).map(|i| pos[&(i, i)]).collect();
    let ends: Vec<(usize, usize)> = p.morphisms.iter().map(|&(_, s, t)| (s, t)).collect();
    FinCat::from_parts(p, |g, f| pos.get(&(ends[f].0, ends[g].1)).copied()).expect("preorder")
}

/// The commutative square poset `0 ≤ a, b ≤ 1`.
pub fn square_poset() -> FinCat {
    let names: Vec<String> = ["0", "a", "b", "1"].map(String::from).into();
    preorder(&names, &[(0, 1), (0, 2), (1, 3), (2, 3)])
}

/// A preorder with a pair of isomorphic objects `a ≅ b` above a bottom `0`
/// and below a top `1`.
pub fn preorder_with_iso() -> FinCat {
    let names: Vec<String> = ["0", "a", "b", "1"].map(String::from).into();
    preorder(&names, &[(0, 1), (1, 2), (2, 1), (2, 3)])
}

/// Objects `x`, `y` with two parallel morphisms `p, q: x → y`.
pub fn two_parallel_arrows() -> FinCat {
    let mut p = CatParts::default();
    let x = p.add_object("x");
    let y = p.add_object("y");
    let ix = p.add_morphism("1x", x, x);
    let iy = p.add_morphism("1y", y, y);
    p.add_morphism("p", x, y);
    p.add_morphism("q", x, y);
    p.identities = vec![ix, iy];
    FinCat::from_parts(p, |g, f| Some(if g == ix || g == iy { f } else { g })).expect("parallel arrows")
}

/// Arrows `u: a → b` and `v: a → c` with no other non-identities.
pub fn two_parallel_arrows_to_distinct_targets() -> FinCat {
    let mut p = CatParts::default();
    let a = p.add_object("a");
    let b = p.add_object("b");
    let c = p.add_object("c");
    let ids = vec![
        p.add_morphism("1a", a, a),
        p.add_morphism("1b", b, b),
        p.add_morphism("1c", c, c),
    ];
    p.add_morphism("u", a, b);
    p.add_morphism("v", a, c);
    p.identities = ids.clone();
    FinCat::from_parts(p, |g, f| Some(if ids.contains(&g) { f } else { g })).expect("two arrows")
}

/// Product category with objects `(x,y)` and morphisms `(f,g)`.
pub fn product_category(x: &FinCat, y: &FinCat) -> FinCat {
    let ny = y.num_objects();
    let my = y.num_morphisms();
    let mut p = CatParts::default();
    for a in x.objects() {
        for b in y.objects() {
            p.add_object(format!("({},{})", x.obj_name(a), y.obj_name(b)));
        }
    }
    for f in x.morphisms() {
        for g in y.morphisms() {
            p.add_morphism(
                format!("({}|{})", x.mor_name(f), y.mor_name(g)),
                x.src(f).idx() * ny + y.src(g).idx(),
                x.tgt(f).idx() * ny + y.tgt(g).idx(),
            );
        }
    }
    p.identities = x
        .objects()
        .flat_map(|a| y.objects().map(move |b| (a, b)))
        .map(|(a, b)| x.id(a).idx() * my + y.id(b).idx())
        .collect();
    let split = |m: usize| (crate::cat::Mor((m / my) as u32), crate::cat::Mor((m % my) as u32));
    FinCat::from_parts(p, |g, f| {
        let ((g1, g2), (f1, f2)) = (split(g), split(f));
        Some(x.compose(g1, f1).idx() * my + y.compose(g2, f2).idx())
    })
    .expect("product category")
}

/// Objects are morphisms of `c`, morphisms are commuting squares `(t, b)`
/// from `u` to `v` with `v ∘ t = b ∘ u`.
pub fn arrow_category(c: &FinCat) -> FinCat {
    let mut p = CatParts::default();
    for u in c.morphisms() {
        p.add_object(c.mor_name(u));
    }
    let mut squares = Vec::new();
    let mut pos = HashMap::new();
    for u in c.morphisms() {
        for v in c.morphisms() {
            for &t in c.hom(c.src(u), c.src(v)) {
                for &b in c.hom(c.tgt(u), c.tgt(v)) {
                    if c.compose(v, t) == c.compose(b, u) {
                        let m = p.add_morphism(format!("[{}|{}]", c.mor_name(t), c.mor_name(b)), u.idx(), v.idx());
                        pos.insert((t, b), m);
                        squares.push((t, b));
                    }
                }
            }
        }
    }
    p.identities = c.morphisms().map(|u| pos[&(c.id(c.src(u)), c.id(c.tgt(u)))]).collect();
    FinCat::from_parts(p, |g, f| {
        let ((t2, b2), (t1, b1)) = (squares[g], squares[f]);
        pos.get(&(c.compose(t2, t1), c.compose(b2, b1))).copied()
    })
    .expect("arrow category")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(terminal().num_morphisms(), 1);
        assert_eq!(discrete(3).num_morphisms(), 3);
        assert_eq!(codiscrete(2).num_morphisms(), 4);
        assert_eq!(square_poset().num_morphisms(), 9);
        assert_eq!(two_parallel_arrows().num_morphisms(), 4);
    }

    #[test]
    fn product_hom_factorizes() {
        let x = square_poset();
        let y = two_parallel_arrows();
        let p = product_category(&x, &y);
        assert_eq!(p.num_morphisms(), 9 * 4);
        let a = p.obj("(0,x)").unwrap();
        let b = p.obj("(1,y)").unwrap();
        assert_eq!(p.hom(a, b).len(), 2);
    }

    #[test]
    fn arrow_category_of_terminal_is_terminal() {
        let a = arrow_category(&terminal());
        assert_eq!((a.num_objects(), a.num_morphisms()), (1, 1));
    }
}
