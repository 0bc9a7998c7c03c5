//! The four sufficient conditions for `∫M` to be FI-type, the weak-pushout
//! construction in the total category, and the instance-wise pullback
//! biconditional for fibrations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cat::{is_iso, same_cat, validate_functor, FinCat, FinFunctor, Mor, NatTrans, Obj};
use crate::fitype::{check_fi_type_with, Condition, FiTypeReport};
use crate::format::RawFunctorMaps;
use crate::gen::{gpow_decorations, gpow_name, parse_injection};
use crate::groth::{fiber, is_fibration, Total};
use crate::group::GroupTable;
use crate::indexed::{IndexedCat, IndexedError, IndexedParts};
use crate::limits::{preserves_pullbacks_with, preserves_weak_pushouts_with, Limits, PreservationReport, Span, Square};
use crate::par;

/// Printed with every verdict: the construction is stated for "locally
/// reversible" data and is checked here against the weakly reversible notion.
pub const BANNER: &str = "locally reversible is read as weakly reversible (f_! with f_!f* identity on \
objects, weak pushouts preserved, and a natural η^f: id ⇒ f*f_!); the conditions are sufficient, not necessary";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("base category is not FI-type: fails {0:?}")]
    BaseNotFiType(Vec<String>),
    #[error("witness invalid: {law} fails for `{morphism}`")]
    WitnessInvalid { law: String, morphism: String },
    #[error("witness search exceeded its budget of {0} candidates")]
    SearchBudgetExceeded(usize),
    #[error("hypotheses not verified: {0}")]
    HypothesesNotVerified(String),
    #[error("no weak pushout of `{left}` and `{right}` in {place}")]
    MissingWeakPushout { place: String, left: String, right: String },
    #[error("construction step failed: {0}")]
    ConstructionFailed(String),
}

/// Per base morphism `f: x → y`, a functor `f_!: M(x) → M(y)` and a natural
/// transformation `η^f: id ⇒ Mf ∘ f_!`.
#[derive(Debug, Clone)]
pub struct WeakReversibilityWitness {
    pushforwards: Vec<FinFunctor>,
    units: Vec<NatTrans>,
}

/// Witness file: `{"pushforwards": {f: functor}, "units": {f: {a: k}}}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawWitness {
    pub pushforwards: BTreeMap<String, RawFunctorMaps>,
    pub units: BTreeMap<String, BTreeMap<String, String>>,
}

fn invalid(law: &str, morphism: &str) -> TheoremError {
    TheoremError::WitnessInvalid {
        law: law.into(),
        morphism: morphism.into(),
    }
}

impl WeakReversibilityWitness {
    /// Assemble a witness; shapes are checked, the laws by [`validate_witness`].
    pub fn new(
        m: &IndexedCat,
        pushforwards: Vec<FinFunctor>,
        units: Vec<NatTrans>,
    ) -> Result<WeakReversibilityWitness, TheoremError> {
        let base = m.base();
        if pushforwards.len() != base.num_morphisms() || units.len() != base.num_morphisms() {
            return Err(invalid("one pushforward and one unit per base morphism", "*"));
        }
        for f in base.morphisms() {
            let name = base.mor_name(f);
            let (x, y) = (base.src(f), base.tgt(f));
            let pf = &pushforwards[f.idx()];
            if !same_cat(pf.source(), m.fiber_arc(x)) || !same_cat(pf.target(), m.fiber_arc(y)) {
                return Err(invalid("pushforward runs M(src f) → M(tgt f)", name));
            }
            let u = &units[f.idx()];
            if *u.source() != FinFunctor::identity(m.fiber_arc(x).clone()) || *u.target() != pf.then(m.arrow(f)) {
                return Err(invalid("unit runs id ⇒ f*f_!", name));
            }
        }
        Ok(WeakReversibilityWitness { pushforwards, units })
    }

    pub fn pushforward(&self, f: Mor) -> &FinFunctor {
        &self.pushforwards[f.idx()]
    }

    pub fn unit(&self, f: Mor) -> &NatTrans {
        &self.units[f.idx()]
    }

    pub fn from_raw(m: &IndexedCat, raw: &RawWitness) -> Result<WeakReversibilityWitness, TheoremError> {
        let base = m.base();
        for name in raw.pushforwards.keys().chain(raw.units.keys()) {
            if base.mor(name).is_none() {
                return Err(invalid("known base morphism", name));
            }
        }
        let mut pushforwards = Vec::new();
        let mut units = Vec::new();
        for f in base.morphisms() {
            let name = base.mor_name(f);
            let (x, y) = (base.src(f), base.tgt(f));
            let maps = raw
                .pushforwards
                .get(name)
                .ok_or_else(|| invalid("pushforward present", name))?;
            let pf = validate_functor(
                m.fiber_arc(x).clone(),
                m.fiber_arc(y).clone(),
                &maps.on_objects,
                &maps.on_morphisms,
            )
            .map_err(|e| invalid(&format!("pushforward is a functor ({e})"), name))?;
            let comps = raw.units.get(name).ok_or_else(|| invalid("unit present", name))?;
            let mx = m.fiber(x);
            let components = mx
                .objects()
                .map(|a| {
                    comps
                        .get(mx.obj_name(a))
                        .and_then(|k| mx.mor(k))
                        .ok_or_else(|| invalid("unit component present", name))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let unit = NatTrans::new(
                FinFunctor::identity(m.fiber_arc(x).clone()),
                pf.then(m.arrow(f)),
                components,
            )
            .map_err(|e| invalid(&format!("naturality of the unit ({e})"), name))?;
            pushforwards.push(pf);
            units.push(unit);
        }
        WeakReversibilityWitness::new(m, pushforwards, units)
    }

    pub fn to_raw(&self, m: &IndexedCat) -> RawWitness {
        let base = m.base();
        let mut raw = RawWitness::default();
        for f in base.morphisms() {
            let name = base.mor_name(f).to_owned();
            let (on_objects, on_morphisms) = self.pushforwards[f.idx()].to_names();
            raw.pushforwards.insert(
                name.clone(),
                RawFunctorMaps {
                    on_objects,
                    on_morphisms,
                },
            );
            let mx = m.fiber(base.src(f));
            let comps = mx
                .objects()
                .map(|a| {
                    (
                        mx.obj_name(a).to_owned(),
                        mx.mor_name(self.units[f.idx()].at(a)).to_owned(),
                    )
                })
                .collect();
            raw.units.insert(name, comps);
        }
        raw
    }
}

/// Check `f_! f*` is the identity on objects and `f_!` preserves weak
/// pushouts, for every base morphism.
pub fn validate_witness(m: &IndexedCat, w: &WeakReversibilityWitness) -> Result<(), TheoremError> {
    let base = m.base();
    let limits: Vec<Limits> = base.objects().map(|x| Limits::new(m.fiber(x))).collect();
    for f in base.morphisms() {
        let name = base.mor_name(f);
        let pf = w.pushforward(f);
        let my = m.fiber(base.tgt(f));
        if my.objects().any(|b| pf.obj(m.arrow(f).obj(b)) != b) {
            return Err(invalid("f_!f* is identity on objects", name));
        }
        let r = preserves_weak_pushouts_with(pf, &limits[base.src(f).idx()], &limits[base.tgt(f).idx()]);
        if !r.holds {
            return Err(invalid("f_! preserves weak pushouts", name));
        }
    }
    Ok(())
}

/// `f_!` extends a tuple by the unit element off the image of `f`, and
/// `η^f` is the identity. For [`crate::gen::indexed_gpow`].
pub fn gpow_witness(m: &IndexedCat, g: &GroupTable) -> WeakReversibilityWitness {
    let base = m.base();
    let mut pushforwards = Vec::new();
    let mut units = Vec::new();
    for f in base.morphisms() {
        let (k, n, img) = parse_injection(base.mor_name(f)).expect("injection identifier");
        let (mx, my) = (m.fiber_arc(base.src(f)), m.fiber_arc(base.tgt(f)));
        let digits = gpow_decorations(g, k);
        let mor_map = mx
            .morphisms()
            .map(|h| {
                let mut t = vec![g.unit(); n];
                for (i, &d) in digits[mx.mor_name(h)].iter().enumerate() {
                    t[img[i]] = d;
                }
                my.mor(&gpow_name(g, &t)).expect("element")
            })
            .collect();
        let pf = FinFunctor::new(mx.clone(), my.clone(), vec![Obj(0)], mor_map).expect("extension by the unit");
        let unit = NatTrans::new(
            FinFunctor::identity(mx.clone()),
            pf.then(m.arrow(f)),
            vec![mx.id(Obj(0))],
        )
        .expect("identity unit");
        pushforwards.push(pf);
        units.push(unit);
    }
    WeakReversibilityWitness { pushforwards, units }
}

/// `f_! = (Mf)⁻¹` with identity units, when every arrow functor is an
/// isomorphism of categories (the constant case and one-object group data).
pub fn inverse_witness(m: &IndexedCat) -> Option<WeakReversibilityWitness> {
    let base = m.base();
    let mut pushforwards = Vec::new();
    let mut units = Vec::new();
    for f in base.morphisms() {
        let mf = m.arrow(f);
        if !mf.is_isomorphism() {
            return None;
        }
        let (mx, my) = (m.fiber_arc(base.src(f)), m.fiber_arc(base.tgt(f)));
        let mut obj_map = vec![Obj(0); mx.num_objects()];
        for b in my.objects() {
            obj_map[mf.obj(b).idx()] = b;
        }
        let mut mor_map = vec![Mor(0); mx.num_morphisms()];
        for k in my.morphisms() {
            mor_map[mf.mor(k).idx()] = k;
        }
        let pf = FinFunctor::new(mx.clone(), my.clone(), obj_map, mor_map).expect("inverse functor");
        units.push(NatTrans::identity(pf.then(mf)));
        pushforwards.push(pf);
    }
    Some(WeakReversibilityWitness { pushforwards, units })
}

/// Backtracking enumeration of functors and transformations under a shared
/// candidate budget.
struct Search {
    budget: usize,
    left: usize,
}

impl Search {
    fn spend(&mut self) -> Result<(), TheoremError> {
        if self.left == 0 {
            return Err(TheoremError::SearchBudgetExceeded(self.budget));
        }
        self.left -= 1;
        Ok(())
    }

    /// First functor `src → tgt` honoring `fixed` on objects and accepted by
    /// `accept`.
    fn functor(
        &mut self,
        src: &Arc<FinCat>,
        tgt: &Arc<FinCat>,
        fixed: &[Option<Obj>],
        accept: &mut dyn FnMut(&mut Search, FinFunctor) -> Result<bool, TheoremError>,
    ) -> Result<Option<FinFunctor>, TheoremError> {
        let free: Vec<usize> = (0..fixed.len()).filter(|&i| fixed[i].is_none()).collect();
        // Composition constraints `(a, b, a∘b)` bucketed by their largest index.
        let mut checks: Vec<Vec<(Mor, Mor, Mor)>> = vec![Vec::new(); src.num_morphisms()];
        for a in src.morphisms() {
            for &b in src.incoming(src.src(a)) {
                let ab = src.compose(a, b);
                checks[a.idx().max(b.idx()).max(ab.idx())].push((a, b, ab));
            }
        }
        let mut digits = vec![0usize; free.len()];
        let nt = tgt.num_objects();
        if nt == 0 {
            return Ok(None);
        }
        loop {
            self.spend()?;
            let mut obj_map: Vec<Obj> = fixed.iter().map(|o| o.unwrap_or(Obj(0))).collect();
            for (&i, &d) in free.iter().zip(&digits) {
                obj_map[i] = Obj(d as u32);
            }
            let mut mor_map = vec![Mor(0); src.num_morphisms()];
            if let Some(f) = self.morphisms(src, tgt, &obj_map, &checks, &mut mor_map, 0, accept)? {
                return Ok(Some(f));
            }
            let mut i = free.len();
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < nt {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn morphisms(
        &mut self,
        src: &Arc<FinCat>,
        tgt: &Arc<FinCat>,
        obj_map: &[Obj],
        checks: &[Vec<(Mor, Mor, Mor)>],
        mor_map: &mut Vec<Mor>,
        i: usize,
        accept: &mut dyn FnMut(&mut Search, FinFunctor) -> Result<bool, TheoremError>,
    ) -> Result<Option<FinFunctor>, TheoremError> {
        if i == mor_map.len() {
            let f = FinFunctor::new(src.clone(), tgt.clone(), obj_map.to_vec(), mor_map.clone())
                .expect("constraints enforce functoriality");
            return Ok(accept(self, f.clone())?.then_some(f));
        }
        let m = Mor(i as u32);
        let (s, t) = (obj_map[src.src(m).idx()], obj_map[src.tgt(m).idx()]);
        let candidates: Vec<Mor> = if src.is_identity(m) {
            vec![tgt.id(s)]
        } else {
            tgt.hom(s, t).to_vec()
        };
        for c in candidates {
            self.spend()?;
            mor_map[i] = c;
            let ok = checks[i]
                .iter()
                .all(|&(a, b, ab)| tgt.compose(mor_map[a.idx()], mor_map[b.idx()]) == mor_map[ab.idx()]);
            if ok {
                if let Some(f) = self.morphisms(src, tgt, obj_map, checks, mor_map, i + 1, accept)? {
                    return Ok(Some(f));
                }
            }
        }
        Ok(None)
    }

    /// First natural transformation `s ⇒ t`.
    fn nat_trans(&mut self, s: &FinFunctor, t: &FinFunctor) -> Result<Option<NatTrans>, TheoremError> {
        let (c, d) = (s.source().clone(), s.target().clone());
        let mut checks: Vec<Vec<Mor>> = vec![Vec::new(); c.num_objects()];
        for u in c.morphisms() {
            checks[c.src(u).idx().max(c.tgt(u).idx())].push(u);
        }
        let mut comps = vec![Mor(0); c.num_objects()];
        if self.components(&c, &d, s, t, &checks, &mut comps, 0)? {
            Ok(Some(
                NatTrans::new(s.clone(), t.clone(), comps).expect("constraints enforce naturality"),
            ))
        } else {
            Ok(None)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn components(
        &mut self,
        c: &FinCat,
        d: &FinCat,
        s: &FinFunctor,
        t: &FinFunctor,
        checks: &[Vec<Mor>],
        comps: &mut Vec<Mor>,
        i: usize,
    ) -> Result<bool, TheoremError> {
        if i == comps.len() {
            return Ok(true);
        }
        let a = Obj(i as u32);
        for &k in d.hom(s.obj(a), t.obj(a)) {
            self.spend()?;
            comps[i] = k;
            let ok = checks[i].iter().all(|&u| {
                let (x, y) = (c.src(u), c.tgt(u));
                d.compose(t.mor(u), comps[x.idx()]) == d.compose(comps[y.idx()], s.mor(u))
            });
            if ok && self.components(c, d, s, t, checks, comps, i + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Outcome of a bounded witness search: the witness, or the first base
/// morphism admitting no `(f_!, η^f)`.
pub enum SearchOutcome {
    Found(WeakReversibilityWitness),
    NoneFor(String),
}

/// Exhaustive search for `(f_!, η^f)` per base morphism, spending at most
/// `budget` candidate assignments in total.
pub fn search_witness(m: &IndexedCat, budget: usize) -> Result<SearchOutcome, TheoremError> {
    let base = m.base();
    let limits: Vec<Limits> = base.objects().map(|x| Limits::new(m.fiber(x))).collect();
    let mut search = Search { budget, left: budget };
    let mut pushforwards = Vec::new();
    let mut units = Vec::new();
    for f in base.morphisms() {
        let (x, y) = (base.src(f), base.tgt(f));
        let (mx, my) = (m.fiber_arc(x), m.fiber_arc(y));
        let mf = m.arrow(f);
        let mut fixed = vec![None; mx.num_objects()];
        let mut clash = false;
        for b in my.objects() {
            let slot = &mut fixed[mf.obj(b).idx()];
            clash |= slot.is_some_and(|o| o != b);
            *slot = Some(b);
        }
        if clash {
            return Ok(SearchOutcome::NoneFor(base.mor_name(f).into()));
        }
        let mut unit = None;
        let found = search.functor(mx, my, &fixed, &mut |s, pf| {
            if !preserves_weak_pushouts_with(&pf, &limits[x.idx()], &limits[y.idx()]).holds {
                return Ok(false);
            }
            unit = s.nat_trans(&FinFunctor::identity(mx.clone()), &pf.then(mf))?;
            Ok(unit.is_some())
        })?;
        match (found, unit) {
            (Some(pf), Some(u)) => {
                pushforwards.push(pf);
                units.push(u);
            }
            _ => return Ok(SearchOutcome::NoneFor(base.mor_name(f).into())),
        }
    }
    Ok(SearchOutcome::Found(WeakReversibilityWitness { pushforwards, units }))
}

/// How the reversibility condition is to be established.
pub enum WitnessSource<'a> {
    Absent,
    Given(&'a WeakReversibilityWitness),
    Search { budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesesReport {
    pub fibers_fi_type: Condition,
    pub endomorphisms_invertible: Condition,
    /// Pairs `(f, a)` with `hom(a, Mf(a))` empty, passing vacuously.
    pub vacuous_pairs: usize,
    pub inclusions_preserve_pullbacks: Condition,
    pub weakly_reversible: Condition,
}

impl HypothesesReport {
    pub fn conditions(&self) -> [(&'static str, &Condition); 4] {
        [
            ("fibers_fi_type", &self.fibers_fi_type),
            ("endomorphisms_invertible", &self.endomorphisms_invertible),
            ("inclusions_preserve_pullbacks", &self.inclusions_preserve_pullbacks),
            ("weakly_reversible", &self.weakly_reversible),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.holds)
    }
}

fn check_base(lim: &Limits) -> Result<(), TheoremError> {
    let r = check_fi_type_with(lim);
    if r.all_hold() {
        Ok(())
    } else {
        Err(TheoremError::BaseNotFiType(
            r.failing().into_iter().map(String::from).collect(),
        ))
    }
}

fn hypotheses_with(
    t: &Total,
    total_lim: &Limits,
    source: WitnessSource,
) -> Result<(HypothesesReport, Option<WeakReversibilityWitness>), TheoremError> {
    let m = t.indexed();
    let base = m.base();
    let xs: Vec<Obj> = base.objects().collect();
    let fiber_limits: Vec<Limits> = xs.iter().map(|&x| Limits::new(m.fiber(x))).collect();

    let fiber_reports: Vec<FiTypeReport> = par::map(&fiber_limits, check_fi_type_with);
    let bad = xs
        .iter()
        .zip(&fiber_reports)
        .find(|(_, r)| !r.all_hold())
        .map(|(&x, r)| {
            let mut w = vec![base.obj_name(x).to_owned()];
            w.extend(r.failing().into_iter().map(String::from));
            w
        });
    let fibers_fi_type = Condition::new(format!("{} fibers audited", xs.len()), bad);

    let mut vacuous_pairs = 0;
    let mut endos = 0;
    let mut bad = None;
    for &x in &xs {
        let mx = m.fiber(x);
        for &f in base.hom(x, x) {
            for a in mx.objects() {
                let hom = mx.hom(a, m.arrow(f).obj(a));
                endos += hom.len();
                vacuous_pairs += usize::from(hom.is_empty());
                if bad.is_none() {
                    if let Some(&k) = hom.iter().find(|&&k| is_iso(mx, k).is_none()) {
                        bad = Some(vec![base.mor_name(f).to_owned(), mx.mor_name(k).to_owned()]);
                    }
                }
            }
        }
    }
    let endomorphisms_invertible = Condition::new(
        format!("{endos} maps a → Mf(a) over endomorphisms, {vacuous_pairs} empty hom-sets"),
        bad,
    );

    let reports: Vec<PreservationReport> = par::map(&xs, |&x| {
        preserves_pullbacks_with(&t.fiber_inclusion(x), &fiber_limits[x.idx()], total_lim)
    });
    let checked: usize = reports.iter().map(|r| r.checked).sum();
    let bad = xs.iter().zip(&reports).find(|(_, r)| !r.holds).map(|(&x, r)| {
        let sq = r.counterexample.clone().expect("counterexample");
        vec![base.obj_name(x).to_owned(), sq.top, sq.left, sq.right, sq.bottom]
    });
    let inclusions_preserve_pullbacks = Condition::new(format!("{checked} fiber pullback squares"), bad);

    let (weakly_reversible, witness) = match source {
        WitnessSource::Absent => (
            Condition::new("no witness supplied".into(), Some(vec!["witness".into()])),
            None,
        ),
        WitnessSource::Given(w) => {
            validate_witness(m, w)?;
            (
                Condition::new(
                    format!("witness validated on {} base morphisms", base.num_morphisms()),
                    None,
                ),
                Some(w.clone()),
            )
        }
        WitnessSource::Search { budget } => match search_witness(m, budget)? {
            SearchOutcome::Found(w) => (
                Condition::new(
                    format!("witness found by search on {} base morphisms", base.num_morphisms()),
                    None,
                ),
                Some(w),
            ),
            SearchOutcome::NoneFor(f) => (
                Condition::new("exhaustive search found no witness".into(), Some(vec![f])),
                None,
            ),
        },
    };
    Ok((
        HypothesesReport {
            fibers_fi_type,
            endomorphisms_invertible,
            vacuous_pairs,
            inclusions_preserve_pullbacks,
            weakly_reversible,
        },
        witness,
    ))
}

/// Audit the four conditions on `M`. The base must be FI-type.
pub fn check_hypotheses(
    t: &Total,
    source: WitnessSource,
) -> Result<(HypothesesReport, Option<WeakReversibilityWitness>), TheoremError> {
    check_base(&Limits::new(t.indexed().base()))?;
    hypotheses_with(t, &Limits::new(t.cat()), source)
}

/// Weak pushouts of spans in `∫M` assembled from base and fiber weak
/// pushouts through a witness.
pub struct PushoutBuilder<'a> {
    t: &'a Total,
    w: &'a WeakReversibilityWitness,
    base: Limits<'a>,
    fibers: Vec<Limits<'a>>,
}

impl<'a> PushoutBuilder<'a> {
    /// Validates the witness first.
    pub fn new(t: &'a Total, w: &'a WeakReversibilityWitness) -> Result<PushoutBuilder<'a>, TheoremError> {
        validate_witness(t.indexed(), w).map_err(|e| TheoremError::HypothesesNotVerified(e.to_string()))?;
        Ok(Self::unchecked(t, w))
    }

    fn unchecked(t: &'a Total, w: &'a WeakReversibilityWitness) -> PushoutBuilder<'a> {
        let m = t.indexed();
        PushoutBuilder {
            t,
            w,
            base: Limits::new(m.base()),
            fibers: m.base().objects().map(|x| Limits::new(m.fiber(x))).collect(),
        }
    }

    /// The square `((f,k), (g,ℓ), (h,m), (j,n))` on the span
    /// `(z,c) ←(g,ℓ)− (x,a) −(f,k)→ (y,b)`, given as `left = (f,k)`,
    /// `right = (g,ℓ)`.
    pub fn build(&self, span: Span) -> Result<Square, TheoremError> {
        let (t, m) = (self.t, self.t.indexed());
        let (c, base) = (t.cat(), m.base());
        let (fk, gl) = (t.mor_parts(span.left), t.mor_parts(span.right));
        let (f, k, g, l) = (fk.base_part, fk.fiber_part, gl.base_part, gl.fiber_part);
        let (_, b) = t.obj_parts(c.tgt(span.left));
        let (_, cc) = t.obj_parts(c.tgt(span.right));

        let bsq =
            self.base
                .weak_pushout(Span { left: f, right: g })
                .ok_or_else(|| TheoremError::MissingWeakPushout {
                    place: "the base".into(),
                    left: base.mor_name(f).into(),
                    right: base.mor_name(g).into(),
                })?;
        let (h, j) = (bsq.right, bsq.bottom);
        let wb = base.tgt(h);

        // k̄ = f_!(k): f_!(a) → f_!f*(b) = b, and ℓ̄ likewise.
        let kbar = self.w.pushforward(f).mor(k);
        let lbar = self.w.pushforward(g).mor(l);
        let u = self.w.pushforward(h).mor(kbar);
        let v = self.w.pushforward(j).mor(lbar);
        let mw = m.fiber(wb);
        if mw.src(u) != mw.src(v) {
            return Err(TheoremError::ConstructionFailed(format!(
                "h_!f_!(a) = `{}` and j_!g_!(a) = `{}` differ",
                mw.obj_name(mw.src(u)),
                mw.obj_name(mw.src(v))
            )));
        }
        let fsq = self.fibers[wb.idx()]
            .weak_pushout(Span { left: u, right: v })
            .ok_or_else(|| TheoremError::MissingWeakPushout {
                place: format!("the fiber over `{}`", base.obj_name(wb)),
                left: mw.mor_name(u).into(),
                right: mw.mor_name(v).into(),
            })?;
        let (mbar, nbar) = (fsq.right, fsq.bottom);
        let d = mw.tgt(mbar);

        // m = h*(m̄) ∘ η^h_b and n = j*(n̄) ∘ η^j_c.
        let (my, mz) = (m.fiber(base.tgt(f)), m.fiber(base.tgt(g)));
        let mm = my.compose(m.arrow(h).mor(mbar), self.w.unit(h).at(b));
        let nn = mz.compose(m.arrow(j).mor(nbar), self.w.unit(j).at(cc));
        let right = t.morphism(h, mm, d).expect("total morphism");
        let bottom = t.morphism(j, nn, d).expect("total morphism");
        Ok(Square {
            top: span.left,
            left: span.right,
            right,
            bottom,
        })
    }
}

/// One-shot form of [`PushoutBuilder::build`].
pub fn construct_weak_pushout_total(
    t: &Total,
    w: &WeakReversibilityWitness,
    span: Span,
) -> Result<Square, TheoremError> {
    PushoutBuilder::new(t, w)?.build(span)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    /// Spans on which the construction ran to the end.
    pub built: usize,
    /// Spans lacking a base or fiber weak pushout inside the truncation.
    pub skipped: usize,
    /// Built squares passing the weak-pushout check in `∫M`.
    pub passed: usize,
    pub first_failure: Option<Vec<String>>,
}

/// Run the construction on every span of `∫M` and check each output.
fn audit_construction(b: &PushoutBuilder, total_lim: &Limits) -> ConstructionReport {
    let c = total_lim.category();
    let spans = total_lim.spans();
    let outcomes = par::map(&spans, |&sp| match b.build(sp) {
        Ok(sq) => Some(Ok(sq.commutes(c) && total_lim.is_weak_pushout(&sq))),
        Err(TheoremError::MissingWeakPushout { .. }) => None,
        Err(e) => Some(Err(e.to_string())),
    });
    let mut report = ConstructionReport {
        built: 0,
        skipped: 0,
        passed: 0,
        first_failure: None,
    };
    for (sp, o) in spans.iter().zip(outcomes) {
        match o {
            None => report.skipped += 1,
            Some(r) => {
                report.built += 1;
                let ok = r == Ok(true);
                report.passed += usize::from(ok);
                if !ok && report.first_failure.is_none() {
                    let mut w = vec![c.mor_name(sp.left).to_owned(), c.mor_name(sp.right).to_owned()];
                    if let Err(e) = r {
                        w.push(e);
                    }
                    report.first_failure = Some(w);
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub total_fi_type: FiTypeReport,
    pub proj_preserves_pullbacks: PreservationReport,
    pub proj_preserves_weak_pushouts: PreservationReport,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub banner: &'static str,
    pub hypotheses: HypothesesReport,
    pub hypotheses_hold: bool,
    /// Direct audit of the conclusion, run whatever the hypotheses say.
    pub conclusion: Conclusion,
    pub construction: Option<ConstructionReport>,
    /// Set when the hypotheses hold but the audited conclusion does not, or
    /// the construction fails on a strict input: an implementation fault.
    pub alarm: Option<String>,
    /// Construction failure on a non-strict input. The construction never
    /// inserts compositors, so its squares need not commute there.
    pub construction_gap: Option<String>,
}

/// Audit the hypotheses, then the conclusion directly, then the weak-pushout
/// construction on every span when a witness is available.
pub fn verify_main_theorem(t: &Total, source: WitnessSource) -> Result<TheoremVerdict, TheoremError> {
    let m = t.indexed();
    let base_lim = Limits::new(m.base());
    check_base(&base_lim)?;
    let total_lim = Limits::new(t.cat());
    let (hypotheses, witness) = hypotheses_with(t, &total_lim, source)?;
    let hypotheses_hold = hypotheses.all_hold();

    let total_fi_type = check_fi_type_with(&total_lim);
    let proj_preserves_pullbacks = preserves_pullbacks_with(t.proj(), &total_lim, &base_lim);
    let proj_preserves_weak_pushouts = preserves_weak_pushouts_with(t.proj(), &total_lim, &base_lim);
    let holds = total_fi_type.all_hold() && proj_preserves_pullbacks.holds && proj_preserves_weak_pushouts.holds;
    let conclusion = Conclusion {
        total_fi_type,
        proj_preserves_pullbacks,
        proj_preserves_weak_pushouts,
        holds,
    };

    let construction = match (&witness, hypotheses_hold) {
        (Some(w), true) => Some(audit_construction(&PushoutBuilder::unchecked(t, w), &total_lim)),
        _ => None,
    };
    let alarm = if !hypotheses_hold {
        None
    } else if !conclusion.holds {
        let mut failing: Vec<&str> = conclusion.total_fi_type.failing();
        if !conclusion.proj_preserves_pullbacks.holds {
            failing.push("proj_preserves_pullbacks");
        }
        if !conclusion.proj_preserves_weak_pushouts.holds {
            failing.push("proj_preserves_weak_pushouts");
        }
        Some(format!("hypotheses hold but the conclusion fails: {failing:?}"))
    } else {
        None
    };
    let failure = construction
        .as_ref()
        .and_then(|r| r.first_failure.as_ref())
        .map(|w| format!("constructed square is not a weak pushout on {w:?}"));
    let (alarm, construction_gap) = match (alarm, failure) {
        (Some(a), _) => (Some(a), None),
        (None, Some(f)) if m.is_strict() => (Some(f), None),
        (None, f) => (None, f),
    };
    Ok(TheoremVerdict {
        banner: BANNER,
        hypotheses,
        hypotheses_hold,
        conclusion,
        construction,
        alarm,
        construction_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrayReport {
    /// `P` is a fibration and its base has all pullbacks.
    pub premise: bool,
    pub fibers_have_pullbacks: bool,
    pub inclusions_preserve: bool,
    pub total_has_pullbacks: bool,
    pub projection_preserves: bool,
    pub fibers_side: bool,
    pub total_side: bool,
    /// `!premise || fibers_side == total_side`.
    pub agree: bool,
    pub failing_clause: Option<String>,
}

/// Fibers have pullbacks preserved by their inclusions iff the total category
/// has pullbacks preserved by `P`.
pub fn check_gray_pullbacks(p: &FinFunctor) -> GrayReport {
    let (a, x) = (p.source(), p.target());
    let base_lim = Limits::new(x);
    let premise = is_fibration(p).holds && base_lim.audit_pullbacks().strict_holds;
    let total_lim = Limits::new(a);
    let fibers: Vec<_> = x.objects().map(|o| fiber(p, o)).collect();
    let mut fibers_have_pullbacks = true;
    let mut inclusions_preserve = true;
    for fb in &fibers {
        let lim = Limits::new(&fb.cat);
        fibers_have_pullbacks &= lim.audit_pullbacks().strict_holds;
        inclusions_preserve &= preserves_pullbacks_with(&fb.inclusion, &lim, &total_lim).holds;
    }
    let total_has_pullbacks = total_lim.audit_pullbacks().strict_holds;
    let projection_preserves = preserves_pullbacks_with(p, &total_lim, &base_lim).holds;
    let fibers_side = fibers_have_pullbacks && inclusions_preserve;
    let total_side = total_has_pullbacks && projection_preserves;
    let clauses = [
        ("fibers_have_pullbacks", fibers_have_pullbacks),
        ("inclusions_preserve", inclusions_preserve),
        ("total_has_pullbacks", total_has_pullbacks),
        ("projection_preserves", projection_preserves),
    ];
    GrayReport {
        premise,
        fibers_have_pullbacks,
        inclusions_preserve,
        total_has_pullbacks,
        projection_preserves,
        fibers_side,
        total_side,
        agree: !premise || fibers_side == total_side,
        failing_clause: clauses.iter().find(|c| !c.1).map(|c| c.0.to_owned()),
    }
}

/// Identifier of the apex of the first fiber pullback whose apex differs
/// from both feet, with the fiber's base object.
pub fn fiber_pullback_apex(m: &IndexedCat) -> Option<(String, String)> {
    let base = m.base();
    base.objects().find_map(|x| {
        let mx = m.fiber(x);
        let lim = Limits::new(mx);
        lim.cospans().into_iter().find_map(|cs| {
            let sq = lim.pullback(cs)?;
            let p = sq.apex(mx);
            (p != mx.src(cs.left) && p != mx.src(cs.right))
                .then(|| (base.obj_name(x).to_owned(), mx.obj_name(p).to_owned()))
        })
    })
}

/// Delete the object `name` from every fiber that has it. Fails when an
/// arrow functor sends a kept object onto a deleted one.
pub fn delete_fiber_object(m: &IndexedCat, name: &str) -> Result<IndexedCat, IndexedError> {
    let parts = m.to_parts();
    let base = parts.base.clone();
    let fibers: Vec<Arc<FinCat>> = parts
        .fibers
        .iter()
        .map(|c| Arc::new(c.full_subcategory(|o| c.obj_name(o) != name)))
        .collect();
    let obj_in = |x: Obj, o: Obj| fibers[x.idx()].obj(parts.fibers[x.idx()].obj_name(o));
    let mor_in = |x: Obj, k: Mor| fibers[x.idx()].mor(parts.fibers[x.idx()].mor_name(k));
    let lost = |what: &str| IndexedError::Shape(format!("deleting `{name}` breaks {what}"));
    let mut arrows = Vec::new();
    for f in base.morphisms() {
        let (x, y) = (base.src(f), base.tgt(f));
        let old = &parts.arrows[f.idx()];
        let (src, tgt) = (&fibers[y.idx()], &parts.fibers[y.idx()]);
        let obj_map = src
            .objects()
            .map(|b| obj_in(x, old.obj(tgt.obj(src.obj_name(b)).expect("kept"))))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| lost(&format!("the arrow functor of `{}`", base.mor_name(f))))?;
        let mor_map = src
            .morphisms()
            .map(|k| mor_in(x, old.mor(tgt.mor(src.mor_name(k)).expect("kept"))))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| lost(&format!("the arrow functor of `{}`", base.mor_name(f))))?;
        arrows.push(FinFunctor::new(src.clone(), fibers[x.idx()].clone(), obj_map, mor_map)?);
    }
    let remap = |x: Obj, over: Obj, table: &[Mor]| -> Option<Vec<Mor>> {
        let (new, old) = (&fibers[over.idx()], &parts.fibers[over.idx()]);
        new.objects()
            .map(|c| mor_in(x, table[old.obj(new.obj_name(c)).expect("kept").idx()]))
            .collect()
    };
    let mut compositors = HashMap::new();
    for (&(f, g), table) in &parts.compositors {
        let t = remap(base.src(f), base.tgt(g), table).ok_or_else(|| lost("a compositor"))?;
        compositors.insert((f, g), t);
    }
    let mut unitors = HashMap::new();
    for (&x, table) in &parts.unitors {
        unitors.insert(x, remap(x, x, table).ok_or_else(|| lost("a unitor"))?);
    }
    IndexedCat::new(IndexedParts {
        base,
        fibers,
        arrows,
        compositors,
        unitors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::groth::grothendieck;
    use crate::limits::is_weak_pushout_square;

    fn gpow_total(n: usize) -> (Total, WeakReversibilityWitness) {
        let g = GroupTable::cyclic(2);
        let m = Arc::new(gen::indexed_gpow(&g, n));
        let w = gpow_witness(&m, &g);
        (grothendieck(m).unwrap(), w)
    }

    #[test]
    fn gpow_witness_validates() {
        let (t, w) = gpow_total(2);
        validate_witness(t.indexed(), &w).unwrap();
        let raw = w.to_raw(t.indexed());
        let back = WeakReversibilityWitness::from_raw(t.indexed(), &raw).unwrap();
        assert_eq!(back.to_raw(t.indexed()), raw);
    }

    #[test]
    fn gpow_hypotheses_and_conclusion() {
        let (t, w) = gpow_total(3);
        let v = verify_main_theorem(&t, WitnessSource::Given(&w)).unwrap();
        assert!(v.hypotheses_hold, "{:?}", v.hypotheses);
        assert!(v.conclusion.holds);
        assert_eq!(v.alarm, None);
        let c = v.construction.unwrap();
        assert!(c.passed >= 20 && c.passed == c.built, "{c:?}");
    }

    #[test]
    fn documented_span_gives_apex_two() {
        let (t, w) = gpow_total(3);
        let c = t.cat();
        let up = |s: &str| c.mor(s).unwrap();
        let f = up("(0>1[]|())");
        let sq = construct_weak_pushout_total(&t, &w, Span { left: f, right: f }).unwrap();
        assert_eq!(c.obj_name(sq.corner(c)), "(2,*)");
        assert!(is_weak_pushout_square(c, &sq).unwrap().holds());
    }

    #[test]
    fn identity_span_gives_identity_square() {
        let (t, w) = gpow_total(2);
        let c = t.cat();
        let i = c.id(c.obj("(1,*)").unwrap());
        let sq = construct_weak_pushout_total(&t, &w, Span { left: i, right: i }).unwrap();
        assert!(c.is_identity(sq.right) && c.is_identity(sq.bottom));
    }

    #[test]
    fn search_finds_witness_for_small_gpow() {
        let g = GroupTable::cyclic(2);
        let m = gen::indexed_gpow(&g, 2);
        match search_witness(&m, 1_000_000).unwrap() {
            SearchOutcome::Found(w) => validate_witness(&m, &w).unwrap(),
            SearchOutcome::NoneFor(f) => panic!("no witness for {f}"),
        }
        assert!(matches!(
            search_witness(&m, 3),
            Err(TheoremError::SearchBudgetExceeded(3))
        ));
    }

    #[test]
    fn constant_case() {
        let x = Arc::new(gen::fi_truncated(2));
        let y = Arc::new(gen::fi_truncated(2));
        let m = Arc::new(gen::delta_const(x, y));
        let w = inverse_witness(&m).unwrap();
        let t = grothendieck(m).unwrap();
        let v = verify_main_theorem(&t, WitnessSource::Given(&w)).unwrap();
        assert!(v.hypotheses_hold && v.conclusion.holds && v.alarm.is_none());
    }

    #[test]
    fn idempotent_fiber_fails_without_alarm() {
        let m = Arc::new(gen::delta_const(
            Arc::new(gen::terminal()),
            Arc::new(gen::idempotent_monoid()),
        ));
        let w = inverse_witness(&m).unwrap();
        let t = grothendieck(m).unwrap();
        let v = verify_main_theorem(&t, WitnessSource::Given(&w)).unwrap();
        assert!(!v.hypotheses.fibers_fi_type.holds);
        assert!(!v.conclusion.total_fi_type.ei.holds);
        assert!(v.alarm.is_none());
    }

    #[test]
    fn empty_endo_homs_pass_vacuously() {
        // Two objects swapped by the generator of Z/2 with no maps between them.
        let x = Arc::new(GroupTable::cyclic(2).as_category());
        let y = Arc::new(gen::discrete(2));
        let swap = FinFunctor::new(y.clone(), y.clone(), vec![Obj(1), Obj(0)], vec![Mor(1), Mor(0)]).unwrap();
        let m = IndexedCat::new_strict(IndexedParts {
            arrows: vec![FinFunctor::identity(y.clone()), swap],
            fibers: vec![y],
            base: x,
            compositors: HashMap::new(),
            unitors: HashMap::new(),
        })
        .unwrap();
        let t = grothendieck(Arc::new(m)).unwrap();
        let (r, _) = check_hypotheses(&t, WitnessSource::Absent).unwrap();
        assert!(r.endomorphisms_invertible.holds);
        assert_eq!(r.vacuous_pairs, 2);
        assert!(!r.weakly_reversible.holds);
    }

    #[test]
    fn gray_on_gpow_and_mutation() {
        let (t, _) = gpow_total(2);
        let r = check_gray_pullbacks(t.proj());
        assert!(r.premise && r.fibers_side && r.total_side);

        let m = gen::delta_const(Arc::new(gen::fi_truncated(1)), Arc::new(gen::fi_truncated(2)));
        let t = grothendieck(Arc::new(m.clone())).unwrap();
        let r = check_gray_pullbacks(t.proj());
        assert!(r.premise && r.fibers_side && r.total_side);
        let (_, apex) = fiber_pullback_apex(&m).unwrap();
        assert_eq!(apex, "0");
        let cut = delete_fiber_object(&m, &apex).unwrap();
        let t = grothendieck(Arc::new(cut)).unwrap();
        let r = check_gray_pullbacks(t.proj());
        assert!(r.premise && !r.fibers_side && !r.total_side && r.agree);
    }

    #[test]
    fn bad_witness_is_rejected() {
        let (t, w) = gpow_total(1);
        let mut raw = w.to_raw(t.indexed());
        let f = raw.pushforwards.keys().find(|k| k.starts_with("0>1")).unwrap().clone();
        raw.units.get_mut(&f).unwrap().clear();
        assert!(matches!(
            WeakReversibilityWitness::from_raw(t.indexed(), &raw),
            Err(TheoremError::WitnessInvalid { .. })
        ));
    }
}
