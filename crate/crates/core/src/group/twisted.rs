//! Twisted actions: pseudofunctors from a one-object groupoid `G` to groups.
//!
//! `A_g` is written `act[g]`, so `h.g = act[g][h]`. The cocycle
//! `φ_{σ,τ}: A_σ ∘ A_τ ⇒ A_{τσ}` satisfies
//! `φ_{σ,τ} · A_σ(A_τ(h)) = A_{τσ}(h) · φ_{σ,τ}` and
//! `φ_{g₁,g₃g₂} · A_{g₁}(φ_{g₂,g₃}) = φ_{g₂g₁,g₃} · φ_{g₁,g₂}`, with
//! `A_e = id` and `φ_{e,g} = φ_{g,e} = e`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GroupError, GroupTable, RawGroup};
use crate::cat::{FinCat, FinFunctor, Mor, Obj};
use crate::indexed::{IndexedCat, IndexedError, IndexedParts};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedAction {
    pub acting: Arc<GroupTable>,
    pub acted: Arc<GroupTable>,
    /// `act[g][h] = h.g`.
    pub act: Vec<Vec<usize>>,
    /// `phi[σ][τ] = φ_{σ,τ}`.
    pub phi: Vec<Vec<usize>>,
}

/// File form: `act` maps each acting element to an element map, `phi` maps
/// `σ` to `τ` to `φ_{σ,τ}`; omitted `phi` entries are the unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTwisted {
    pub acting: RawGroup,
    pub acted: RawGroup,
    pub act: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub phi: BTreeMap<String, BTreeMap<String, String>>,
}

impl TwistedAction {
    /// A strict action, `φ ≡ e`.
    pub fn strict(acting: Arc<GroupTable>, acted: Arc<GroupTable>, act: Vec<Vec<usize>>) -> TwistedAction {
        let phi = vec![vec![acted.unit(); acting.order()]; acting.order()];
        TwistedAction {
            acting,
            acted,
            act,
            phi,
        }
    }

    /// The trivial action of `G` on `H`.
    pub fn trivial(acting: Arc<GroupTable>, acted: Arc<GroupTable>) -> TwistedAction {
        let act = vec![acted.elements().collect(); acting.order()];
        TwistedAction::strict(acting, acted, act)
    }

    pub fn from_raw(raw: &RawTwisted) -> Result<TwistedAction, GroupError> {
        let g = Arc::new(GroupTable::from_raw(&raw.acting)?);
        let h = Arc::new(GroupTable::from_raw(&raw.acted)?);
        let act = g
            .elements()
            .map(|a| {
                let m = raw
                    .act
                    .get(g.name(a))
                    .ok_or_else(|| GroupError::UnknownElement(g.name(a).into()))?;
                h.elements()
                    .map(|b| {
                        let img = m.get(h.name(b)).ok_or_else(|| {
                            GroupError::NotAnAction(format!("action of `{}` misses `{}`", g.name(a), h.name(b)))
                        })?;
                        h.try_element(img)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut phi = vec![vec![h.unit(); g.order()]; g.order()];
        for (s, row) in &raw.phi {
            let s = g.try_element(s)?;
            for (t, v) in row {
                phi[s][g.try_element(t)?] = h.try_element(v)?;
            }
        }
        Ok(TwistedAction {
            acting: g,
            acted: h,
            act,
            phi,
        })
    }

    pub fn to_raw(&self) -> RawTwisted {
        let (g, h) = (&self.acting, &self.acted);
        let act = g
            .elements()
            .map(|a| {
                let m = h
                    .elements()
                    .map(|b| (h.name(b).to_owned(), h.name(self.act[a][b]).to_owned()))
                    .collect();
                (g.name(a).to_owned(), m)
            })
            .collect();
        let mut phi: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for s in g.elements() {
            for t in g.elements() {
                if self.phi[s][t] != h.unit() {
                    phi.entry(g.name(s).into())
                        .or_default()
                        .insert(g.name(t).into(), h.name(self.phi[s][t]).into());
                }
            }
        }
        RawTwisted {
            acting: g.to_raw(),
            acted: h.to_raw(),
            act,
            phi,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.phi.iter().flatten().all(|&p| p == self.acted.unit())
    }

    /// The one-object pseudofunctor `G^op → Cat` with fiber `H`.
    pub fn to_indexed(&self) -> Result<IndexedCat, IndexedError> {
        let (g, h) = (&self.acting, &self.acted);
        let base = Arc::new(g.as_category());
        let fiber = Arc::new(h.as_category());
        let elem = |c: &FinCat, m: Mor, grp: &GroupTable| grp.element(c.mor_name(m)).expect("element");
        let to_mor = |x: usize| fiber.mor(h.name(x)).expect("element");
        let arrows = base
            .morphisms()
            .map(|m| {
                let a = elem(&base, m, g);
                let mor_map = fiber
                    .morphisms()
                    .map(|k| to_mor(self.act[a][elem(&fiber, k, h)]))
                    .collect();
                FinFunctor::new(fiber.clone(), fiber.clone(), vec![Obj(0)], mor_map).map_err(|e| {
                    IndexedError::BadFiberFunctor {
                        morphism: g.name(a).into(),
                        reason: e.to_string(),
                    }
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut compositors = HashMap::new();
        for f in base.morphisms() {
            for t in base.morphisms() {
                let p = self.phi[elem(&base, f, g)][elem(&base, t, g)];
                if p != h.unit() {
                    compositors.insert((f, t), vec![to_mor(p)]);
                }
            }
        }
        IndexedCat::new(IndexedParts {
            base,
            fibers: vec![fiber],
            arrows,
            compositors,
            unitors: HashMap::new(),
        })
    }
}

/// Verify that every `A_g` is an automorphism, the unit normalization, and
/// both cocycle laws.
pub fn validate_twisted_action(t: &TwistedAction) -> Result<(), GroupError> {
    let (g, h) = (&*t.acting, &*t.acted);
    if t.act.len() != g.order()
        || t.phi.len() != g.order()
        || t.act
            .iter()
            .any(|r| r.len() != h.order() || r.iter().any(|&x| x >= h.order()))
        || t.phi
            .iter()
            .any(|r| r.len() != g.order() || r.iter().any(|&x| x >= h.order()))
    {
        return Err(GroupError::NotAnAction("tables have the wrong shape".into()));
    }
    for a in g.elements() {
        let m = &t.act[a];
        let mut hit = vec![false; h.order()];
        for &y in m {
            hit[y] = true;
        }
        if hit.contains(&false) {
            return Err(GroupError::NotAnAction(format!("`{}` is not a bijection", g.name(a))));
        }
        for x in h.elements() {
            for y in h.elements() {
                if m[h.mul(x, y)] != h.mul(m[x], m[y]) {
                    return Err(GroupError::NotAnAction(format!(
                        "`{}` does not respect `{}·{}`",
                        g.name(a),
                        h.name(x),
                        h.name(y)
                    )));
                }
            }
        }
    }
    let e = g.unit();
    if let Some(x) = h.elements().find(|&x| t.act[e][x] != x) {
        return Err(GroupError::UnitLawViolation(format!("the unit moves `{}`", h.name(x))));
    }
    if let Some(a) = g
        .elements()
        .find(|&a| t.phi[e][a] != h.unit() || t.phi[a][e] != h.unit())
    {
        return Err(GroupError::UnitLawViolation(format!(
            "φ is not the unit against `{}`",
            g.name(a)
        )));
    }
    for s in g.elements() {
        for u in g.elements() {
            let p = t.phi[s][u];
            let us = g.mul(u, s);
            if let Some(x) = h
                .elements()
                .find(|&x| h.mul(p, t.act[s][t.act[u][x]]) != h.mul(t.act[us][x], p))
            {
                return Err(GroupError::Law1Violation {
                    g1: g.name(s).into(),
                    g2: g.name(u).into(),
                    h: h.name(x).into(),
                });
            }
        }
    }
    for a in g.elements() {
        for b in g.elements() {
            for c in g.elements() {
                let lhs = h.mul(t.phi[a][g.mul(c, b)], t.act[a][t.phi[b][c]]);
                let rhs = h.mul(t.phi[g.mul(b, a)][c], t.phi[a][b]);
                if lhs != rhs {
                    return Err(GroupError::Law2Violation {
                        g1: g.name(a).into(),
                        g2: g.name(b).into(),
                        g3: g.name(c).into(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Product on pairs `(g, k)` indexed `g·|H| + k`:
/// `(g, ℓ) · (f, k) = (g·f, φ_{f,g} · A_f(ℓ) · k)`.
pub fn twisted_product(t: &TwistedAction) -> Result<GroupTable, GroupError> {
    validate_twisted_action(t)?;
    let (g, h) = (&*t.acting, &*t.acted);
    let n = h.order();
    let names = g
        .elements()
        .flat_map(|a| h.elements().map(move |k| format!("({},{})", g.name(a), h.name(k))))
        .collect();
    GroupTable::from_fn(names, g.unit() * n + h.unit(), |x, y| {
        let (gg, l) = (x / n, x % n);
        let (f, k) = (y / n, y % n);
        let fiber = h.product(&[t.phi[f][gg], t.act[f][l], k]);
        g.mul(gg, f) * n + fiber
    })
}

/// `H ⋊ G` for a strict action: `(g₁,h₁)(g₂,h₂) = (g₁g₂, (h₁.g₂)h₂)`.
pub fn semidirect(
    acting: Arc<GroupTable>,
    acted: Arc<GroupTable>,
    act: Vec<Vec<usize>>,
) -> Result<GroupTable, GroupError> {
    let t = TwistedAction::strict(acting, acted, act);
    validate_twisted_action(&t)?;
    let g = &t.acting;
    for a in g.elements() {
        for b in g.elements() {
            let ab = g.mul(a, b);
            if let Some(x) = t.acted.elements().find(|&x| t.act[ab][x] != t.act[b][t.act[a][x]]) {
                return Err(GroupError::NotAnAction(format!(
                    "`{}` then `{}` differs from `{}` on `{}`",
                    g.name(a),
                    g.name(b),
                    g.name(ab),
                    t.acted.name(x)
                )));
            }
        }
    }
    twisted_product(&t)
}

/// Inversion on an abelian group, as the action of `Z/2`.
pub fn inversion_action(h: &GroupTable) -> Vec<Vec<usize>> {
    vec![h.elements().collect(), h.elements().map(|x| h.inv(x)).collect()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::find_isomorphism;

    fn z4_data(phi11: usize) -> TwistedAction {
        let g = Arc::new(GroupTable::cyclic(2));
        let h = Arc::new(GroupTable::cyclic(2));
        let mut t = TwistedAction::trivial(g, h);
        t.phi[1][1] = phi11;
        t
    }

    #[test]
    fn trivial_action_gives_cyclic_six() {
        let g = Arc::new(GroupTable::cyclic(2));
        let h = Arc::new(GroupTable::cyclic(3));
        let act = vec![h.elements().collect(); 2];
        let e = semidirect(g, h, act).unwrap();
        assert!(find_isomorphism(&e, &GroupTable::cyclic(6)).is_some());
    }

    #[test]
    fn inversion_gives_s3() {
        let g = Arc::new(GroupTable::cyclic(2));
        let h = Arc::new(GroupTable::cyclic(3));
        let act = inversion_action(&h);
        let e = semidirect(g, h, act).unwrap();
        assert_eq!(e.order(), 6);
        assert!(!e.is_abelian());
        assert!(find_isomorphism(&e, &GroupTable::symmetric(3)).is_some());
    }

    #[test]
    fn cocycle_changes_the_group() {
        let z4 = twisted_product(&z4_data(1)).unwrap();
        assert!(z4.elements().any(|x| z4.element_order(x) == 4));
        let v = twisted_product(&z4_data(0)).unwrap();
        assert!(find_isomorphism(&v, &GroupTable::klein()).is_some());
    }

    #[test]
    fn law2_violation_is_caught() {
        let g = Arc::new(GroupTable::cyclic(3));
        let h = Arc::new(GroupTable::cyclic(2));
        let mut t = TwistedAction::trivial(g, h);
        t.phi[1][1] = 1;
        assert!(matches!(
            validate_twisted_action(&t),
            Err(GroupError::Law2Violation { .. })
        ));
        assert!(matches!(t.to_indexed(), Err(IndexedError::CoherenceViolation { .. })));
    }

    #[test]
    fn non_action_is_rejected() {
        let g = Arc::new(GroupTable::cyclic(2));
        let h = Arc::new(GroupTable::cyclic(3));
        let act = vec![vec![0, 1, 2], vec![0, 1, 1]];
        assert!(matches!(semidirect(g, h, act), Err(GroupError::NotAnAction(_))));
    }

    #[test]
    fn raw_round_trip() {
        let t = z4_data(1);
        assert_eq!(TwistedAction::from_raw(&t.to_raw()).unwrap(), t);
    }
}
