//! Group extensions `K → E → G`, sections, and intertwining elements.

use std::sync::Arc;

use serde::Serialize;

use super::twisted::{validate_twisted_action, TwistedAction};
use super::{find_isomorphism, homomorphisms, GroupError, GroupHom, GroupTable};
use crate::groth::grothendieck;

/// An exact sequence `K → E → G` with `proj` surjective, `incl` injective
/// and image equal to kernel.
#[derive(Debug, Clone)]
pub struct Extension {
    pub total: Arc<GroupTable>,
    pub proj: GroupHom,
    pub incl: GroupHom,
}

impl Extension {
    pub fn new(proj: GroupHom, incl: GroupHom) -> Result<Extension, GroupError> {
        if !Arc::ptr_eq(&proj.source, &incl.target) && proj.source != incl.target {
            return Err(GroupError::NotExact(
                "inclusion does not land in the total group".into(),
            ));
        }
        if !proj.is_surjective() {
            return Err(GroupError::NotSurjective);
        }
        if !incl.is_injective() {
            return Err(GroupError::NotExact("inclusion is not injective".into()));
        }
        let mut image = incl.map.clone();
        image.sort_unstable();
        if image != proj.kernel_elements() {
            return Err(GroupError::NotExact("image of the inclusion is not the kernel".into()));
        }
        Ok(Extension {
            total: proj.source.clone(),
            proj,
            incl,
        })
    }
}

/// The group `∫A` of the one-object pseudofunctor, with its projection to
/// `G` and the inclusion `k ↦ (e, k)`.
pub fn extension_from_twisted(t: &TwistedAction) -> Result<Extension, GroupError> {
    validate_twisted_action(t)?;
    let m = t.to_indexed().map_err(|e| GroupError::NotAnAction(e.to_string()))?;
    let total = grothendieck(Arc::new(m)).expect("total category of a valid pseudofunctor");
    let e = Arc::new(GroupTable::from_category(total.cat()).expect("∫A is a group"));
    let m = total.indexed();
    let (base, fiber) = (m.base(), m.fiber(crate::cat::Obj(0)));
    let (g, h) = (&t.acting, &t.acted);
    let proj = total
        .cat()
        .morphisms()
        .map(|x| g.element(base.mor_name(total.mor_parts(x).base_part)).expect("element"))
        .collect();
    let proj = GroupHom::new(e.clone(), g.clone(), proj)?;
    let inc = total.fiber_inclusion(crate::cat::Obj(0));
    let incl = h
        .elements()
        .map(|k| inc.mor(fiber.mor(h.name(k)).expect("element")).idx())
        .collect();
    let incl = GroupHom::new(h.clone(), e, incl)?;
    Extension::new(proj, incl)
}

/// Check `p ∘ s = id` and `s(e) = e`.
fn check_section(p: &GroupHom, s: &[usize]) -> Result<(), GroupError> {
    if s.len() != p.target.order() {
        return Err(GroupError::NotASection("wrong length".into()));
    }
    if s[p.target.unit()] != p.source.unit() {
        return Err(GroupError::NotASection("the unit is not sent to the unit".into()));
    }
    if let Some(g) = p.target.elements().find(|&g| p.apply(s[g]) != g) {
        return Err(GroupError::NotASection(format!("`{}` is not lifted", p.target.name(g))));
    }
    Ok(())
}

/// `A_g(k) = s(g)⁻¹ k s(g)` and `φ_{σ,τ} = s(τσ)⁻¹ s(τ) s(σ)` on `K = ker p`.
pub fn twisted_from_surjection(p: &GroupHom, s: &[usize]) -> Result<TwistedAction, GroupError> {
    if !p.is_surjective() {
        return Err(GroupError::NotSurjective);
    }
    check_section(p, s)?;
    let k = p.kernel();
    let e = &*p.source;
    let g = &p.target;
    let pos = |x: usize| k.map.iter().position(|&y| y == x).expect("lands in the kernel");
    let act = g
        .elements()
        .map(|a| k.map.iter().map(|&x| pos(e.product(&[e.inv(s[a]), x, s[a]]))).collect())
        .collect();
    let phi = g
        .elements()
        .map(|sg| {
            g.elements()
                .map(|tg| pos(e.product(&[e.inv(s[g.mul(tg, sg)]), s[tg], s[sg]])))
                .collect()
        })
        .collect();
    Ok(TwistedAction {
        acting: g.clone(),
        acted: k.source.clone(),
        act,
        phi,
    })
}

/// The map `(g, k) ↦ s(g)·k` from the reconstructed extension back to `E`.
pub fn reconstruction_map(ext: &Extension, t: &TwistedAction, p: &GroupHom, s: &[usize]) -> Vec<usize> {
    let kernel = p.kernel();
    let e = &*p.source;
    ext.total
        .elements()
        .map(|x| {
            let g = ext.proj.apply(x);
            // x = incl(k) · (g, e), and (g, k) = (g, e)·(e, k) in `∫A`.
            let lift = ext.incl.map.iter().position(|&y| {
                let cand = ext.total.mul(section_in(ext, t, g), y);
                cand == x
            });
            let k = lift.expect("every element is (g, e)·(e, k)");
            e.mul(s[g], kernel.map[k])
        })
        .collect()
}

/// The element `(g, e)` of the reconstructed extension.
fn section_in(ext: &Extension, t: &TwistedAction, g: usize) -> usize {
    let name = format!("({}|{})", t.acting.name(g), t.acted.name(t.acted.unit()));
    ext.total.element(&name).expect("pair element")
}

/// Set-sections with `s(e) = e`, in lexicographic order, up to `limit`.
pub fn sections(p: &GroupHom, limit: usize) -> Result<Vec<Vec<usize>>, GroupError> {
    if !p.is_surjective() {
        return Err(GroupError::NotSurjective);
    }
    let (e, g) = (&p.source, &p.target);
    let fibers: Vec<Vec<usize>> = g
        .elements()
        .map(|a| {
            if a == g.unit() {
                vec![e.unit()]
            } else {
                e.elements().filter(|&x| p.apply(x) == a).collect()
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; g.order()];
    'outer: loop {
        if out.len() >= limit {
            break;
        }
        out.push(cur.iter().enumerate().map(|(a, &i)| fibers[a][i]).collect());
        for a in (0..g.order()).rev() {
            cur[a] += 1;
            if cur[a] < fibers[a].len() {
                continue 'outer;
            }
            cur[a] = 0;
        }
        break;
    }
    Ok(out)
}

/// The least homomorphic section of `p`, searched over generator images.
pub fn find_homomorphic_section(p: &GroupHom) -> Result<Option<GroupHom>, GroupError> {
    if !p.is_surjective() {
        return Err(GroupError::NotSurjective);
    }
    let (e, g) = (&p.source, &p.target);
    let found = homomorphisms(g, e, |s, t| p.apply(t) == s, 1);
    Ok(found.into_iter().next().map(|map| GroupHom {
        source: g.clone(),
        target: e.clone(),
        map,
    }))
}

pub fn is_split(p: &GroupHom) -> Result<bool, GroupError> {
    Ok(find_homomorphic_section(p)?.is_some())
}

/// `α · f(g) = k(g) · α` for every `g`.
pub fn intertwiner_check(alpha: usize, f: &GroupHom, k: &GroupHom) -> bool {
    let h = &f.target;
    f.source
        .elements()
        .all(|g| h.mul(alpha, f.apply(g)) == h.mul(k.apply(g), alpha))
}

/// `α₂ ∗ α₁ = k₂(α₁) · α₂` for `α₁: f₁ ⇒ k₁` and `α₂: f₂ ⇒ k₂` with
/// `f₂, k₂` leaving the target of `f₁, k₁`.
pub fn intertwiner_hcompose(alpha1: usize, alpha2: usize, k2: &GroupHom) -> usize {
    k2.target.mul(k2.apply(alpha1), alpha2)
}

/// `β ∘ α = β · α`.
pub fn intertwiner_vcompose(alpha: usize, beta: usize, h: &GroupTable) -> usize {
    h.mul(beta, alpha)
}

/// Summary of the surjection-to-twisted-action round trip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub kernel_order: usize,
    pub strict: bool,
    pub split: bool,
    pub reconstructed_order: usize,
    /// `(g, k) ↦ s(g)·k` is an isomorphism onto the original group.
    pub isomorphic: bool,
}

pub fn round_trip(p: &GroupHom, s: &[usize]) -> Result<RoundTrip, GroupError> {
    let t = twisted_from_surjection(p, s)?;
    validate_twisted_action(&t)?;
    let ext = extension_from_twisted(&t)?;
    let map = reconstruction_map(&ext, &t, p, s);
    let iso = GroupHom::new(ext.total.clone(), p.source.clone(), map)
        .map(|h| h.is_injective() && h.is_surjective())
        .unwrap_or(false);
    Ok(RoundTrip {
        kernel_order: t.acted.order(),
        strict: t.is_strict(),
        split: is_split(p)?,
        reconstructed_order: ext.total.order(),
        isomorphic: iso && find_isomorphism(&ext.total, &p.source).is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::twisted::{inversion_action, semidirect};

    fn z4_to_z2() -> GroupHom {
        GroupHom::new(
            Arc::new(GroupTable::cyclic(4)),
            Arc::new(GroupTable::cyclic(2)),
            vec![0, 1, 0, 1],
        )
        .unwrap()
    }

    #[test]
    fn z4_cocycle() {
        let p = z4_to_z2();
        let t = twisted_from_surjection(&p, &[0, 1]).unwrap();
        assert_eq!(t.acted.name(t.phi[1][1]), "2");
        let r = round_trip(&p, &[0, 1]).unwrap();
        assert!(r.isomorphic && !r.split && !r.strict);
        assert_eq!(r.reconstructed_order, 4);
    }

    #[test]
    fn s3_splits() {
        let g = Arc::new(GroupTable::cyclic(2));
        let h = Arc::new(GroupTable::cyclic(3));
        let s3 = Arc::new(semidirect(g.clone(), h.clone(), inversion_action(&h)).unwrap());
        let proj = s3.elements().map(|x| x / 3).collect();
        let p = GroupHom::new(s3, g, proj).unwrap();
        let s = find_homomorphic_section(&p).unwrap().unwrap();
        let t = twisted_from_surjection(&p, &s.map).unwrap();
        assert!(t.is_strict());
        assert!(round_trip(&p, &s.map).unwrap().isomorphic);
    }

    #[test]
    fn identity_surjection() {
        let g = Arc::new(GroupTable::symmetric(3));
        let p = GroupHom::identity(g);
        let t = twisted_from_surjection(&p, &p.map.clone()).unwrap();
        assert_eq!(t.acted.order(), 1);
        assert!(is_split(&p).unwrap());
    }

    #[test]
    fn section_enumeration() {
        let p = z4_to_z2();
        assert_eq!(sections(&p, usize::MAX).unwrap(), vec![vec![0, 1], vec![0, 3]]);
        assert!(matches!(
            twisted_from_surjection(&p, &[0, 2]),
            Err(GroupError::NotASection(_))
        ));
    }

    #[test]
    fn intertwiners() {
        let s3 = Arc::new(GroupTable::symmetric(3));
        let id = GroupHom::identity(s3.clone());
        assert!(intertwiner_check(s3.unit(), &id, &id));
        let swap = s3.element("(1,0,2)").unwrap();
        assert!(!intertwiner_check(swap, &id, &id));
        let z = Arc::new(GroupTable::cyclic(4));
        let idz = GroupHom::identity(z.clone());
        let h = intertwiner_hcompose(1, 2, &idz);
        assert!(intertwiner_check(h, &idz, &idz));
        assert!(intertwiner_check(intertwiner_vcompose(1, 3, &z), &idz, &idz));
    }
}
