//! Named instances exercising every construction, with a combined report.

use std::sync::Arc;

use serde::Serialize;

use crate::fitype::{
    check_fi_type, check_locally_finite_product_law, ei_converse, ei_forward, increasing_lemma, mono_lemma,
    transitivity_lemma, Biconditional, CountReport, EiConverse, EiForward, FiTypeReport, IncreasingReport,
    TransitivityLemma,
};
use crate::gen;
use crate::groth::{canonical_cleaving, grothendieck, is_fibration, lemma_suite, FibrationReport, LemmaReport, Total};
use crate::group::{
    inversion_action, semidirect, twisted_from_surjection, validate_twisted_action, GroupHom, GroupTable, TwistedAction,
};
use crate::indexed::IndexedCat;
use crate::theorem::{
    check_gray_pullbacks, gpow_witness, inverse_witness, verify_main_theorem, GrayReport, TheoremVerdict,
    WeakReversibilityWitness, WitnessSource,
};

/// Candidate budget for witness searches on corpus instances.
pub const SEARCH_BUDGET: usize = 2_000_000;

/// How an instance's reversibility witness is obtained.
pub enum WitnessPlan {
    Given(WeakReversibilityWitness),
    Search(usize),
    Absent,
}

pub struct Instance {
    pub name: &'static str,
    pub indexed: Arc<IndexedCat>,
    pub witness: WitnessPlan,
    /// The twisted action the instance was built from, if any.
    pub twisted: Option<TwistedAction>,
}

impl Instance {
    fn new(name: &'static str, m: IndexedCat, plan: impl FnOnce(&IndexedCat) -> WitnessPlan) -> Instance {
        let witness = plan(&m);
        Instance {
            name,
            indexed: Arc::new(m),
            witness,
            twisted: None,
        }
    }

    pub fn total(&self) -> Total {
        grothendieck(self.indexed.clone()).expect("corpus instances are valid")
    }

    pub fn witness_source(&self) -> WitnessSource<'_> {
        match &self.witness {
            WitnessPlan::Given(w) => WitnessSource::Given(w),
            WitnessPlan::Search(budget) => WitnessSource::Search { budget: *budget },
            WitnessPlan::Absent => WitnessSource::Absent,
        }
    }
}

fn inverse(m: &IndexedCat) -> WitnessPlan {
    inverse_witness(m).map_or(WitnessPlan::Absent, WitnessPlan::Given)
}

fn gpow(name: &'static str, g: GroupTable, n: usize) -> Instance {
    Instance::new(name, gen::indexed_gpow(&g, n), |m| {
        WitnessPlan::Given(gpow_witness(m, &g))
    })
}

fn twisted(name: &'static str, t: TwistedAction) -> Instance {
    let mut inst = Instance::new(name, t.to_indexed().expect("valid twisted action"), inverse);
    inst.twisted = Some(t);
    inst
}

fn z4_to_z2() -> GroupHom {
    GroupHom::new(
        Arc::new(GroupTable::cyclic(4)),
        Arc::new(GroupTable::cyclic(2)),
        vec![0, 1, 0, 1],
    )
    .expect("homomorphism")
}

/// The Z/4 → Z/2 twisted action from the section `s(1) = 1`.
pub fn z4_twisted() -> TwistedAction {
    twisted_from_surjection(&z4_to_z2(), &[0, 1]).expect("section")
}

/// The strict inversion action of Z/2 on Z/3.
pub fn inversion_twisted() -> TwistedAction {
    let h = Arc::new(GroupTable::cyclic(3));
    TwistedAction::strict(Arc::new(GroupTable::cyclic(2)), h.clone(), inversion_action(&h))
}

/// The split extension `S₃ → Z/2` from the inversion action.
pub fn s3_to_z2() -> GroupHom {
    let g = Arc::new(GroupTable::cyclic(2));
    let h = Arc::new(GroupTable::cyclic(3));
    let s3 = Arc::new(semidirect(g.clone(), h.clone(), inversion_action(&h)).expect("action"));
    let proj = s3.elements().map(|x| x / h.order()).collect();
    GroupHom::new(s3, g, proj).expect("projection")
}

pub fn corpus() -> Vec<Instance> {
    let fi = |n| Arc::new(gen::fi_truncated(n));
    vec![
        Instance::new("delta-fi2-over-fi2", gen::delta_const(fi(2), fi(2)), inverse),
        Instance::new(
            "delta-point-over-fi3",
            gen::delta_const(fi(3), Arc::new(gen::terminal())),
            inverse,
        ),
        Instance::new(
            "delta-fi1-over-square",
            gen::delta_const(Arc::new(gen::square_poset()), fi(1)),
            inverse,
        ),
        gpow("gpow-trivial-3", GroupTable::trivial(), 3),
        gpow("gpow-z2-3", GroupTable::cyclic(2), 3),
        gpow("gpow-z3-2", GroupTable::cyclic(3), 2),
        Instance::new("blocks-2-1", gen::block_perm_indexed(2, 1), |_| {
            WitnessPlan::Search(SEARCH_BUDGET)
        }),
        Instance::new(
            "slice-square",
            gen::slice_indexed(Arc::new(gen::square_poset())).expect("pullbacks"),
            |_| WitnessPlan::Search(SEARCH_BUDGET),
        ),
        Instance::new(
            "slice-iso",
            gen::slice_indexed(Arc::new(gen::preorder_with_iso())).expect("pullbacks"),
            |_| WitnessPlan::Search(SEARCH_BUDGET),
        ),
        twisted("twisted-z4", z4_twisted()),
        twisted("twisted-s3", inversion_twisted()),
        Instance::new(
            "idempotent-fiber",
            gen::delta_const(Arc::new(gen::terminal()), Arc::new(gen::idempotent_monoid())),
            inverse,
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedCross {
    pub validator: bool,
    pub indexed: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub name: String,
    pub strict: bool,
    pub objects: usize,
    pub morphisms: usize,
    pub fibration: FibrationReport,
    pub lemmas: LemmaReport,
    pub hom_counts: CountReport,
    pub total_fi_type: FiTypeReport,
    pub mono: Biconditional,
    pub ei_forward: EiForward,
    pub ei_converse: EiConverse,
    pub increasing: IncreasingReport,
    pub transitivity: TransitivityLemma,
    pub gray: GrayReport,
    pub theorem: Result<TheoremVerdict, String>,
    pub twisted: Option<TwistedCross>,
}

pub fn full_report(inst: &Instance) -> InstanceReport {
    let t = inst.total();
    let c = t.cat();
    let twisted = inst.twisted.as_ref().map(|tw| {
        let validator = validate_twisted_action(tw).is_ok();
        let indexed = tw.to_indexed().is_ok();
        TwistedCross {
            validator,
            indexed,
            agree: validator == indexed,
        }
    });
    InstanceReport {
        name: inst.name.into(),
        strict: inst.indexed.is_strict(),
        objects: c.num_objects(),
        morphisms: c.num_morphisms(),
        fibration: is_fibration(t.proj()),
        lemmas: lemma_suite(&t),
        hom_counts: check_locally_finite_product_law(&t),
        total_fi_type: check_fi_type(c),
        mono: mono_lemma(&t),
        ei_forward: ei_forward(&t),
        ei_converse: ei_converse(&canonical_cleaving(&t)),
        increasing: increasing_lemma(&t),
        transitivity: transitivity_lemma(&t, false),
        gray: check_gray_pullbacks(t.proj()),
        theorem: verify_main_theorem(&t, inst.witness_source()).map_err(|e| e.to_string()),
        twisted,
    }
}
