use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::cat::{CatParts, FinCat, FinFunctor, Mor, Obj};

/// Group file contents: `mult[i][j]` is `elements[i] · elements[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGroup {
    pub elements: Vec<String>,
    pub mult: Vec<Vec<String>>,
    pub unit: String,
}

/// A finite group as a validated multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
    mult: Vec<u32>,
    unit: usize,
    inverse: Vec<u32>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable{:?}", self.names)
    }
}

impl GroupTable {
    /// Tabulate `mul` over `names` and check the group axioms.
    pub fn from_fn(
        names: Vec<String>,
        unit: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<GroupTable, GroupError> {
        let n = names.len();
        if n == 0 || unit >= n {
            return Err(GroupError::NotAGroup("no unit element".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GroupError::NotAGroup(format!("duplicate element `{name}`")));
            }
        }
        let mut mult = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                if c >= n {
                    return Err(GroupError::NotAGroup(format!(
                        "`{}·{}` is not an element",
                        names[a], names[b]
                    )));
                }
                mult.push(c as u32);
            }
        }
        let mut g = GroupTable {
            names,
            index,
            mult,
            unit,
            inverse: Vec::new(),
        };
        g.check()?;
        Ok(g)
    }

    fn check(&mut self) -> Result<(), GroupError> {
        let n = self.order();
        for a in 0..n {
            if self.mul(self.unit, a) != a || self.mul(a, self.unit) != a {
                return Err(GroupError::NotAGroup(format!(
                    "`{}` is not a unit for `{}`",
                    self.names[self.unit], self.names[a]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails on `{}`, `{}`, `{}`",
                            self.names[a], self.names[b], self.names[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| self.mul(a, b) == self.unit && self.mul(b, a) == self.unit)
                .ok_or_else(|| GroupError::NotAGroup(format!("`{}` has no inverse", self.names[a])))?;
            inverse.push(inv as u32);
        }
        self.inverse = inverse;
        Ok(())
    }

    pub fn from_raw(raw: &RawGroup) -> Result<GroupTable, GroupError> {
        let pos: HashMap<&str, usize> = raw.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let look = |s: &str| pos.get(s).copied().ok_or_else(|| GroupError::UnknownElement(s.into()));
        let n = raw.elements.len();
        if raw.mult.len() != n || raw.mult.iter().any(|row| row.len() != n) {
            return Err(GroupError::NotAGroup(format!("multiplication table is not {n}×{n}")));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &raw.mult {
            for c in row {
                flat.push(look(c)?);
            }
        }
        GroupTable::from_fn(raw.elements.clone(), look(&raw.unit)?, |a, b| flat[a * n + b])
    }

    pub fn to_raw(&self) -> RawGroup {
        RawGroup {
            elements: self.names.clone(),
            mult: self
                .elements()
                .map(|a| self.elements().map(|b| self.names[self.mul(a, b)].clone()).collect())
                .collect(),
            unit: self.names[self.unit].clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn try_element(&self, name: &str) -> Result<usize, GroupError> {
        self.element(name)
            .ok_or_else(|| GroupError::UnknownElement(name.into()))
    }

    /// Product of a sequence, left to right.
    pub fn product(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.unit, |acc, &x| self.mul(acc, x))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.unit {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, z: usize) -> bool {
        self.elements().all(|g| self.mul(z, g) == self.mul(g, z))
    }

    /// Greedy generating set in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = vec![false; self.order()];
        reached[self.unit] = true;
        for a in self.elements() {
            if reached[a] {
                continue;
            }
            gens.push(a);
            let mut frontier: Vec<usize> = self.elements().filter(|&x| reached[x]).collect();
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !reached[y] {
                        reached[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }

    /// `Z/n` on elements `"0"`, …, `"n-1"`.
    pub fn cyclic(n: usize) -> GroupTable {
        let names = (0..n).map(|i| i.to_string()).collect();
        GroupTable::from_fn(names, 0, |a, b| (a + b) % n).expect("cyclic group")
    }

    pub fn trivial() -> GroupTable {
        GroupTable::cyclic(1)
    }

    pub fn klein() -> GroupTable {
        GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(2))
    }

    /// `S_n` on image tuples in lexicographic order, with `(a·b)(i) = a(b(i))`.
    pub fn symmetric(n: usize) -> GroupTable {
        let perms = permutations(n);
        let pos: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let names = perms.iter().map(|p| tuple_name(p.iter())).collect();
        GroupTable::from_fn(names, 0, |a, b| {
            let c: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            pos[&c]
        })
        .expect("symmetric group")
    }

    /// `G × H` on pairs `(g,h)`, indexed `g·|H| + h`.
    pub fn direct_product(g: &GroupTable, h: &GroupTable) -> GroupTable {
        let m = h.order();
        let names = g
            .elements()
            .flat_map(|a| h.elements().map(move |b| (a, b)))
            .map(|(a, b)| format!("({},{})", g.name(a), h.name(b)))
            .collect();
        GroupTable::from_fn(names, g.unit() * m + h.unit(), |x, y| {
            g.mul(x / m, y / m) * m + h.mul(x % m, y % m)
        })
        .expect("direct product")
    }

    /// `Gⁿ` on tuples, mixed-radix indexed with the first coordinate most
    /// significant. `G⁰` is the trivial group on `()`.
    pub fn power(g: &GroupTable, n: usize) -> GroupTable {
        let q = g.order();
        let size = q.pow(n as u32);
        let names = (0..size)
            .map(|i| tuple_name(power_digits(i, q, n).iter().map(|&d| g.name(d))))
            .collect();
        let unit = power_index(&vec![g.unit(); n], q);
        GroupTable::from_fn(names, unit, |a, b| {
            let (da, db) = (power_digits(a, q, n), power_digits(b, q, n));
            let dc: Vec<usize> = da.iter().zip(&db).map(|(&x, &y)| g.mul(x, y)).collect();
            power_index(&dc, q)
        })
        .expect("power group")
    }

    /// The one-object category on `"*"` with `g ∘ f = g · f`.
    pub fn as_category(&self) -> FinCat {
        let mut parts = CatParts::default();
        let o = parts.add_object("*");
        for a in self.elements() {
            parts.add_morphism(self.name(a), o, o);
        }
        parts.identities = vec![self.unit];
        FinCat::from_parts(parts, |g, f| Some(self.mul(g, f))).expect("group category")
    }

    /// The group of a one-object groupoid, elements in morphism order.
    pub fn from_category(c: &FinCat) -> Result<GroupTable, GroupError> {
        if c.num_objects() != 1 {
            return Err(GroupError::NotAGroup(format!(
                "category has {} objects, expected 1",
                c.num_objects()
            )));
        }
        let names = c.morphisms().map(|m| c.mor_name(m).to_owned()).collect();
        GroupTable::from_fn(names, c.id(Obj(0)).idx(), |a, b| {
            c.compose(Mor(a as u32), Mor(b as u32)).idx()
        })
    }
}

pub(crate) fn tuple_name<S: std::fmt::Display>(items: impl Iterator<Item = S>) -> String {
    let parts: Vec<String> = items.map(|s| s.to_string()).collect();
    format!("({})", parts.join(","))
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    go(n, &mut cur, &mut used, &mut out);
    out
}

pub(crate) fn power_digits(mut i: usize, q: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for k in (0..n).rev() {
        d[k] = i % q;
        i /= q;
    }
    d
}

pub(crate) fn power_index(digits: &[usize], q: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * q + d)
}

/// A verified group homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: Arc<GroupTable>,
    pub target: Arc<GroupTable>,
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<GroupTable>, target: Arc<GroupTable>, map: Vec<usize>) -> Result<GroupHom, GroupError> {
        if map.len() != source.order() || map.iter().any(|&y| y >= target.order()) {
            return Err(GroupError::NotAHomomorphism("map has the wrong shape".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotAHomomorphism(format!(
                        "image of `{}·{}` is not the product of images",
                        source.name(a),
                        source.name(b)
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(g: Arc<GroupTable>) -> GroupHom {
        let map = g.elements().collect();
        GroupHom {
            source: g.clone(),
            target: g,
            map,
        }
    }

    /// Validate a name-to-name map.
    pub fn from_names(
        source: Arc<GroupTable>,
        target: Arc<GroupTable>,
        names: &std::collections::BTreeMap<String, String>,
    ) -> Result<GroupHom, GroupError> {
        let map = source
            .elements()
            .map(|a| {
                let img = names
                    .get(source.name(a))
                    .ok_or_else(|| GroupError::UnknownElement(source.name(a).into()))?;
                target.try_element(img)
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupHom::new(source, target, map)
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_elements().len() == 1
    }

    /// Kernel elements of the source, in index order.
    pub fn kernel_elements(&self) -> Vec<usize> {
        self.source
            .elements()
            .filter(|&a| self.map[a] == self.target.unit())
            .collect()
    }

    /// The kernel as a group with its inclusion into the source.
    pub fn kernel(&self) -> GroupHom {
        let elems = self.kernel_elements();
        let pos = |a: usize| elems.iter().position(|&x| x == a).expect("kernel is a subgroup");
        let names = elems.iter().map(|&a| self.source.name(a).to_owned()).collect();
        let k = GroupTable::from_fn(names, pos(self.source.unit()), |a, b| {
            pos(self.source.mul(elems[a], elems[b]))
        })
        .expect("kernel is a group");
        GroupHom {
            source: Arc::new(k),
            target: self.source.clone(),
            map: elems,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        }
    }

    /// The same map between one-object categories.
    pub fn as_functor(&self) -> FinFunctor {
        let (s, t) = (self.source.as_category(), self.target.as_category());
        let mor_map = s
            .morphisms()
            .map(|m| {
                let a = self.source.element(s.mor_name(m)).expect("element");
                t.mor(self.target.name(self.map[a])).expect("element")
            })
            .collect();
        FinFunctor::new(Arc::new(s), Arc::new(t), vec![Obj(0)], mor_map).expect("homomorphisms are functors")
    }
}

/// Extend generator images to a homomorphism `G → H`, if consistent.
pub fn extend_from_generators(g: &GroupTable, h: &GroupTable, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    map[g.unit()] = h.unit();
    let mut frontier = vec![g.unit()];
    while let Some(x) = frontier.pop() {
        for (&s, &t) in gens.iter().zip(images) {
            let (y, img) = (g.mul(x, s), h.mul(map[x], t));
            if map[y] == usize::MAX {
                map[y] = img;
                frontier.push(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    if map.contains(&usize::MAX) {
        return None;
    }
    let hom = g
        .elements()
        .all(|a| g.elements().all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])));
    hom.then_some(map)
}

/// All homomorphisms `G → H` whose generator images pass `allow`, in
/// lexicographic order of generator images. Stops after `limit` results.
pub fn homomorphisms(
    g: &GroupTable,
    h: &GroupTable,
    allow: impl Fn(usize, usize) -> bool,
    limit: usize,
) -> Vec<Vec<usize>> {
    let gens = g.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let ord = g.element_order(s);
            h.elements()
                .filter(|&t| ord.is_multiple_of(h.element_order(t)) && allow(s, t))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    fn go(
        g: &GroupTable,
        h: &GroupTable,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if images.len() == gens.len() {
            if let Some(m) = extend_from_generators(g, h, gens, images) {
                out.push(m);
            }
            return;
        }
        for &t in &candidates[images.len()] {
            images.push(t);
            go(g, h, gens, candidates, images, out, limit);
            images.pop();
        }
    }
    go(g, h, &gens, &candidates, &mut images, &mut out, limit);
    out
}

/// An isomorphism `G → H`, found by generator search pruned by element
/// orders.
pub fn find_isomorphism(g: &GroupTable, h: &GroupTable) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    let gens = g.generators();
    let mut images = Vec::new();
    fn go(g: &GroupTable, h: &GroupTable, gens: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
        if images.len() == gens.len() {
            let m = extend_from_generators(g, h, gens, images)?;
            let mut hit = vec![false; h.order()];
            for &y in &m {
                if std::mem::replace(&mut hit[y], true) {
                    return None;
                }
            }
            return Some(m);
        }
        let ord = g.element_order(gens[images.len()]);
        for t in h.elements().filter(|&t| h.element_order(t) == ord) {
            images.push(t);
            if let Some(m) = go(g, h, gens, images) {
                return Some(m);
            }
            images.pop();
        }
        None
    }
    go(g, h, &gens, &mut images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_symmetric_orders() {
        assert_eq!(GroupTable::cyclic(4).order(), 4);
        let s3 = GroupTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.name(0), "(0,1,2)");
    }

    #[test]
    fn klein_is_not_cyclic() {
        let k = GroupTable::klein();
        assert!(k.elements().all(|a| k.element_order(a) <= 2));
        assert!(find_isomorphism(&k, &GroupTable::cyclic(4)).is_none());
    }

    #[test]
    fn z6_is_z2_times_z3() {
        let p = GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(3));
        let iso = find_isomorphism(&p, &GroupTable::cyclic(6)).unwrap();
        let h = GroupHom::new(Arc::new(p), Arc::new(GroupTable::cyclic(6)), iso).unwrap();
        assert!(h.is_injective() && h.is_surjective());
    }

    #[test]
    fn power_group_names_and_unit() {
        let g = GroupTable::power(&GroupTable::cyclic(2), 3);
        assert_eq!(g.order(), 8);
        assert_eq!(g.name(g.unit()), "(0,0,0)");
        assert_eq!(GroupTable::power(&GroupTable::cyclic(2), 0).name(0), "()");
    }

    #[test]
    fn category_round_trip() {
        let s3 = GroupTable::symmetric(3);
        let back = GroupTable::from_category(&s3.as_category()).unwrap();
        assert!(find_isomorphism(&s3, &back).is_some());
    }

    #[test]
    fn bad_table_rejected() {
        let err = GroupTable::from_fn(vec!["e".into(), "a".into()], 0, |_, _| 0);
        assert!(matches!(err, Err(GroupError::NotAGroup(_))));
    }

    #[test]
    fn kernel_of_reduction() {
        let z4 = Arc::new(GroupTable::cyclic(4));
        let z2 = Arc::new(GroupTable::cyclic(2));
        let p = GroupHom::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
        assert!(p.is_surjective());
        assert_eq!(p.kernel().map, vec![0, 2]);
    }

    #[test]
    fn homomorphism_count_z2_to_s3() {
        let hs = homomorphisms(&GroupTable::cyclic(2), &GroupTable::symmetric(3), |_, _| true, 100);
        assert_eq!(hs.len(), 4);
    }
}
