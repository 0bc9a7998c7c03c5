use std::sync::Arc;

use fitype_core::cat::{FinCat, FinFunctor};
use fitype_core::gen;
use fitype_core::groth::{check_fibred_functor, grothendieck, is_cartesian, Total};
use fitype_core::group::{GroupHom, GroupTable};

fn gpow_total(g: &GroupTable, n: usize) -> Total {
    grothendieck(Arc::new(gen::indexed_gpow(g, n))).unwrap()
}

/// `∫G^• → ∫K^•` applying `φ` to every decoration.
fn gpow_map(phi: &GroupHom, src: &Total, tgt: &Total, n: usize) -> FinFunctor {
    let (a, b) = (src.cat(), tgt.cat());
    let decs: Vec<_> = (0..=n).map(|m| gen::gpow_decorations(&phi.source, m)).collect();
    let obj_map = a.objects().map(|o| b.obj(a.obj_name(o)).unwrap()).collect();
    let mor_map = a
        .morphisms()
        .map(|x| {
            let name = a.mor_name(x);
            let (f, k) = name[1..name.len() - 1].split_once('|').unwrap();
            let m = a.obj_name(a.src(x))[1..]
                .split_once(',')
                .unwrap()
                .0
                .parse::<usize>()
                .unwrap();
            let image: Vec<usize> = decs[m][k].iter().map(|&d| phi.apply(d)).collect();
            b.mor(&format!("({f}|{})", gen::gpow_name(&phi.target, &image)))
                .unwrap()
        })
        .collect();
    FinFunctor::new(a.clone(), b.clone(), obj_map, mor_map).unwrap()
}

#[test]
fn group_homomorphism_induces_fibred_functor() {
    let z4 = Arc::new(GroupTable::cyclic(4));
    let z2 = Arc::new(GroupTable::cyclic(2));
    let phi = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
    let (s, t) = (gpow_total(&z4, 2), gpow_total(&z2, 2));
    let h = gpow_map(&phi, &s, &t, 2);
    let r = check_fibred_functor(&h, s.proj(), t.proj()).unwrap();
    assert!(r.holds, "{r:?}");
    assert_eq!(r.checked, s.cat().num_morphisms());
}

#[test]
fn trivial_homomorphism_is_fibred_too() {
    let z3 = Arc::new(GroupTable::cyclic(3));
    let one = Arc::new(GroupTable::trivial());
    let phi = GroupHom::new(z3.clone(), one.clone(), vec![0; 3]).unwrap();
    let (s, t) = (gpow_total(&z3, 2), gpow_total(&one, 2));
    let h = gpow_map(&phi, &s, &t, 2);
    assert!(check_fibred_functor(&h, s.proj(), t.proj()).unwrap().holds);
}

/// Over `B = {0 → 1}`, `∫Δ{u → v}` is `B × {u → v}`; `(f, u→v)` is not
/// cartesian for the projection since its fiber part is not invertible.
fn arrow_over_arrow() -> (Arc<FinCat>, Total) {
    let names = ["0".to_string(), "1".to_string()];
    let base = Arc::new(gen::preorder(&names, &[(0, 1)]));
    let y = Arc::new(gen::preorder(&["u".to_string(), "v".to_string()], &[(0, 1)]));
    (base.clone(), grothendieck(Arc::new(gen::delta_const(base, y))).unwrap())
}

#[test]
fn non_invertible_vertical_part_is_not_cartesian() {
    let (base, t) = arrow_over_arrow();
    let c = t.cat();
    let k = t.indexed().fiber(base.obj("0").unwrap()).mor("u>v").unwrap();
    for f in base.morphisms() {
        let x = t
            .morphism(f, k, t.indexed().fiber(base.tgt(f)).obj("v").unwrap())
            .unwrap();
        assert!(!is_cartesian(t.proj(), x), "{}", c.mor_name(x));
        let id_part = t
            .indexed()
            .fiber(base.src(f))
            .id(t.indexed().fiber(base.src(f)).obj("u").unwrap());
        let y = t
            .morphism(f, id_part, t.indexed().fiber(base.tgt(f)).obj("u").unwrap())
            .unwrap();
        assert!(is_cartesian(t.proj(), y));
    }
}

#[test]
fn collapsing_a_lift_breaks_fibredness() {
    let (base, t) = arrow_over_arrow();
    let c = t.cat();
    // Section of the projection through the diagonal u ↦ v.
    let at = |x: &str, a: &str| c.obj(&format!("({x},{a})")).unwrap();
    let obj_map = vec![at("0", "u"), at("1", "v")];
    let (x0, x1) = (base.obj("0").unwrap(), base.obj("1").unwrap());
    let f = base.hom(x0, x1)[0];
    let uv = t.indexed().fiber(x0).mor("u>v").unwrap();
    let v = t.indexed().fiber(x1).obj("v").unwrap();
    let lift = t.morphism(f, uv, v).unwrap();
    let mor_map = base
        .morphisms()
        .map(|m| if m == f { lift } else { c.id(obj_map[base.src(m).idx()]) })
        .collect();
    let h = FinFunctor::new(base.clone(), c.clone(), obj_map, mor_map).unwrap();
    let id = FinFunctor::identity(base.clone());
    let r = check_fibred_functor(&h, &id, t.proj()).unwrap();
    assert!(!r.holds);
    assert_eq!(r.counterexample.as_deref(), Some(base.mor_name(f)));
}
