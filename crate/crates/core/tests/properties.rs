use std::sync::Arc;

use proptest::prelude::*;

use fitype_core::cat::{automorphisms, is_iso, is_mono, FinCat};
use fitype_core::fitype::{check_fi_type, mono_lemma, transitivity_lemma};
use fitype_core::gen;
use fitype_core::groth::{canonical_cleaving, check_split, grothendieck, is_fibration, lemma_suite};
use fitype_core::group::{
    extension_from_twisted, homomorphisms, is_split, sections, twisted_from_surjection, validate_twisted_action,
    GroupHom, GroupTable,
};
use fitype_core::limits::{is_pullback_square, Limits};

fn group(i: usize) -> GroupTable {
    match i {
        0 => GroupTable::trivial(),
        1 => GroupTable::cyclic(2),
        2 => GroupTable::cyclic(3),
        3 => GroupTable::cyclic(4),
        4 => GroupTable::klein(),
        _ => GroupTable::symmetric(3),
    }
}

fn preorder() -> impl Strategy<Value = FinCat> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..=5)))
        .prop_map(|(n, rel)| {
            let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            gen::preorder(&names, &rel)
        })
}

fn category() -> impl Strategy<Value = FinCat> {
    prop_oneof![
        preorder(),
        (0usize..6).prop_map(|i| group(i).as_category()),
        (1usize..=2).prop_map(gen::fi_truncated),
        Just(gen::idempotent_monoid()),
        Just(gen::two_parallel_arrows()),
    ]
}

fn groupoid() -> impl Strategy<Value = FinCat> {
    prop_oneof![
        (0usize..6).prop_map(|i| group(i).as_category()),
        (1usize..=3).prop_map(gen::codiscrete),
        (0usize..3, 1usize..=2).prop_map(|(i, n)| gen::product_category(&group(i).as_category(), &gen::codiscrete(n))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn isomorphisms_are_monic(c in category()) {
        for f in c.morphisms() {
            if is_iso(&c, f).is_some() {
                prop_assert!(is_mono(&c, f));
            }
        }
    }

    #[test]
    fn automorphisms_form_a_group(c in category()) {
        for x in c.objects() {
            let auts = automorphisms(&c, x);
            prop_assert!(auts.contains(&c.id(x)));
            for &a in &auts {
                for &b in &auts {
                    prop_assert!(auts.contains(&c.compose(a, b)));
                }
            }
        }
    }

    #[test]
    fn groupoids_are_fi_type(c in groupoid()) {
        let r = check_fi_type(&c);
        prop_assert!(r.all_hold(), "{:?}", r.failing());
    }

    #[test]
    fn pullbacks_and_weak_pushouts_are_pullback_squares(c in preorder()) {
        let lim = Limits::new(&c);
        for cs in lim.cospans() {
            if let Some(sq) = lim.pullback(cs) {
                prop_assert!(is_pullback_square(&c, &sq).unwrap().holds());
            }
        }
        for sp in lim.spans() {
            if let Some(sq) = lim.weak_pushout(sp) {
                prop_assert!(is_pullback_square(&c, &sq).unwrap().holds());
            }
        }
    }

    /// `|∫ΔY((x,a),(y,b))| = |X(x,y)|·|Y(a,b)|`, counted from the factors.
    #[test]
    fn constant_total_hom_counts(x in category(), y in category()) {
        let (x, y) = (Arc::new(x), Arc::new(y));
        let t = grothendieck(Arc::new(gen::delta_const(x.clone(), y.clone()))).unwrap();
        let c = t.cat();
        for s in c.objects() {
            for u in c.objects() {
                let ((x0, a), (x1, b)) = (t.obj_parts(s), t.obj_parts(u));
                prop_assert_eq!(c.hom(s, u).len(), x.hom(x0, x1).len() * y.hom(a, b).len());
            }
        }
        prop_assert!(t.hom_count_mismatch().is_none());
    }

    #[test]
    fn strict_inputs_split_and_lemmas_hold(x in category(), y in category()) {
        let t = grothendieck(Arc::new(gen::delta_const(Arc::new(x), Arc::new(y)))).unwrap();
        prop_assert!(is_fibration(t.proj()).holds);
        prop_assert!(check_split(&canonical_cleaving(&t)).holds);
        let r = lemma_suite(&t);
        prop_assert!(r.all_hold(), "{:?}", r);
    }

    #[test]
    fn gpow_is_split(i in 0usize..6, n in 0usize..=2) {
        let t = grothendieck(Arc::new(gen::indexed_gpow(&group(i), n))).unwrap();
        prop_assert!(t.indexed().is_strict());
        prop_assert!(check_split(&canonical_cleaving(&t)).holds);
    }

    /// Over an all-mono base, the total is all-mono iff `Y` is, read off the
    /// morphisms directly.
    #[test]
    fn mono_lemma_on_constant(x in preorder(), y in category()) {
        let y = Arc::new(y);
        let t = grothendieck(Arc::new(gen::delta_const(Arc::new(x), y.clone()))).unwrap();
        let total = t.cat().morphisms().all(|f| is_mono(t.cat(), f));
        let fiber = y.morphisms().all(|f| is_mono(&y, f));
        let r = mono_lemma(&t);
        prop_assert!(r.premise && r.agree);
        prop_assert_eq!((r.total, r.fibers), (total, fiber));
    }

    #[test]
    fn transitivity_lemma_agrees(x in preorder(), y in category(), strict in any::<bool>()) {
        let t = grothendieck(Arc::new(gen::delta_const(Arc::new(x), Arc::new(y)))).unwrap();
        prop_assert!(transitivity_lemma(&t, strict).agree);
    }

    #[test]
    fn surjections_are_fibrations(src in 0usize..6, tgt in 0usize..6) {
        let (g, h) = (Arc::new(group(src)), Arc::new(group(tgt)));
        for map in homomorphisms(&g, &h, |_, _| true, 64) {
            let phi = GroupHom::new(g.clone(), h.clone(), map).unwrap();
            prop_assert_eq!(is_fibration(&phi.as_functor()).holds, phi.is_surjective());
        }
    }

    /// Extensions from every section of a surjection: the twisted action is
    /// valid, `|E| = |G|·|K|`, and some section is strict iff `p` splits.
    #[test]
    fn extensions_from_sections(src in 0usize..6, tgt in 0usize..6) {
        let (e, g) = (Arc::new(group(src)), Arc::new(group(tgt)));
        for map in homomorphisms(&e, &g, |_, _| true, 64) {
            let p = GroupHom::new(e.clone(), g.clone(), map).unwrap();
            if !p.is_surjective() {
                continue;
            }
            let mut strict_found = false;
            for s in sections(&p, 64).unwrap() {
                let t = twisted_from_surjection(&p, &s).unwrap();
                prop_assert!(validate_twisted_action(&t).is_ok());
                prop_assert!(t.to_indexed().is_ok());
                let ext = extension_from_twisted(&t).unwrap();
                prop_assert_eq!(ext.total.order(), g.order() * p.kernel_elements().len());
                strict_found |= t.is_strict();
            }
            prop_assert_eq!(strict_found, is_split(&p).unwrap());
        }
    }

    #[test]
    fn generators_are_deterministic(i in 0usize..6, n in 0usize..=2) {
        let g = group(i);
        prop_assert_eq!(gen::fi_g_direct(&g, n).to_raw(), gen::fi_g_direct(&g, n).to_raw());
        let a = fitype_core::format::indexed_to_raw(&gen::indexed_gpow(&g, n));
        let b = fitype_core::format::indexed_to_raw(&gen::indexed_gpow(&g, n));
        prop_assert_eq!(a, b);
    }
}
