//! One function per subcommand, each returning an [`Outcome`].

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use fitype_core::cat::{functor_properties, validate_category, FinFunctor, RawCategory};
use fitype_core::corpus::{self, WitnessPlan};
use fitype_core::fitype::check_fi_type;
use fitype_core::format::{indexed_to_raw, validate_indexed, CatRef, RawFunctor, RawIndexed};
use fitype_core::gen;
use fitype_core::groth::{check_split, choose_cleaving, grothendieck, is_fibration};
use fitype_core::group::{
    extension_from_twisted, find_homomorphic_section, round_trip, sections, twisted_from_surjection,
    validate_twisted_action, RawTwisted, TwistedAction,
};
use fitype_core::indexed::IndexedCat;
use fitype_core::theorem::{gpow_witness, verify_main_theorem, RawWitness, WeakReversibilityWitness, WitnessSource};

use crate::input::{builtin_category, builtin_group, parse_elements, Inputs, BUILTIN_CATEGORIES};
use crate::{GenCommand, Outcome};

const TRUNCATION_CAVEAT: &str =
    "note: pullbacks and weak pushouts are audited inside the finite category; apexes beyond a truncation bound are absent";

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn write_json(path: &Path, x: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&to_value(x))?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn mark(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn load_indexed(inputs: &mut Inputs, file: &Path) -> Result<IndexedCat> {
    let raw: RawIndexed = inputs.json(file)?;
    Ok(validate_indexed(&raw)?)
}

pub fn validate(inputs: &mut Inputs, file: &Path) -> Result<Outcome> {
    let v = inputs.value(file)?;
    let kind = if v.get("base").is_some() {
        "indexed category"
    } else if v.get("on_objects").is_some() {
        "functor"
    } else {
        "category"
    };
    let verdict: Result<Value, String> = match kind {
        "indexed category" => serde_json::from_value::<RawIndexed>(v)
            .map_err(|e| e.to_string())
            .and_then(|raw| validate_indexed(&raw).map_err(|e| e.to_string()))
            .map(|m| json!({"base_objects": m.base().num_objects(), "strict": m.is_strict()})),
        "functor" => {
            let f = inputs.functor(file).map_err(|e| format!("{e:#}"));
            f.map(|f| json!({"source_objects": f.source().num_objects(), "target_objects": f.target().num_objects()}))
        }
        _ => serde_json::from_value::<RawCategory>(v)
            .map_err(|e| e.to_string())
            .and_then(|raw| validate_category(&raw).map_err(|e| e.to_string()))
            .map(|c| json!({"objects": c.num_objects(), "morphisms": c.num_morphisms()})),
    };
    Ok(match verdict {
        Ok(summary) => Outcome {
            holds: Some(true),
            lines: vec![format!("valid {kind}: {summary}")],
            report: json!({"kind": kind, "valid": true, "summary": summary}),
        },
        Err(e) => Outcome {
            holds: Some(false),
            lines: vec![format!("invalid {kind}: {e}")],
            report: json!({"kind": kind, "valid": false, "error": e}),
        },
    })
}

pub fn functor(inputs: &mut Inputs, file: &Path) -> Result<Outcome> {
    let f = inputs.functor(file)?;
    let r = functor_properties(&f);
    let lines = vec![
        format!("full: {}", r.full),
        format!("faithful: {}", r.faithful),
        format!("essentially surjective: {}", r.essentially_surjective),
        format!("equivalence: {}", r.equivalence),
    ];
    Ok(Outcome {
        holds: Some(true),
        lines,
        report: to_value(&r),
    })
}

pub fn fitype(inputs: &mut Inputs, arg: &str) -> Result<Outcome> {
    let c = inputs.category(arg)?;
    let r = check_fi_type(&c);
    let mut lines: Vec<String> = r
        .conditions()
        .iter()
        .map(|(name, cond)| match &cond.counterexample {
            None => format!("{name}: holds ({})", cond.summary),
            Some(w) => format!("{name}: fails ({}) witness {w:?}", cond.summary),
        })
        .collect();
    lines.push(TRUNCATION_CAVEAT.into());
    Ok(Outcome {
        holds: Some(r.all_hold()),
        lines,
        report: to_value(&r),
    })
}

/// A functor file with inline source and target.
fn functor_file(f: &FinFunctor) -> RawFunctor {
    let (on_objects, on_morphisms) = f.to_names();
    RawFunctor {
        source: CatRef::Inline(f.source().to_raw()),
        target: CatRef::Inline(f.target().to_raw()),
        on_objects,
        on_morphisms,
    }
}

pub fn groth(inputs: &mut Inputs, file: &Path, output: &Path, projection: Option<&Path>) -> Result<Outcome> {
    let m = load_indexed(inputs, file)?;
    let t = grothendieck(Arc::new(m))?;
    write_json(output, &t.cat().to_raw())?;
    if let Some(p) = projection {
        write_json(p, &functor_file(t.proj()))?;
    }
    let c = t.cat();
    let report = json!({
        "objects": c.num_objects(),
        "morphisms": c.num_morphisms(),
        "strict": t.indexed().is_strict(),
    });
    Ok(Outcome {
        holds: None,
        lines: vec![format!(
            "total category: {} objects, {} morphisms, written to {}",
            c.num_objects(),
            c.num_morphisms(),
            output.display()
        )],
        report,
    })
}

pub fn fibration(inputs: &mut Inputs, file: &Path) -> Result<Outcome> {
    let p = inputs.functor(file)?;
    let r = is_fibration(&p);
    let mut lines = vec![format!("fibration: {} ({} pairs checked)", mark(r.holds), r.checked)];
    if let Some((f, b)) = &r.counterexample {
        lines.push(format!("no cartesian lift of `{f}` at `{b}`"));
    }
    Ok(Outcome {
        holds: Some(r.holds),
        lines,
        report: to_value(&r),
    })
}

pub fn cleaving(inputs: &mut Inputs, file: &Path) -> Result<Outcome> {
    let p = inputs.functor(file)?;
    let cl = match choose_cleaving(&p) {
        Ok(cl) => cl,
        Err(e) => {
            return Ok(Outcome {
                holds: Some(false),
                lines: vec![format!("no cleaving: {e}")],
                report: json!({"error": e.to_string()}),
            })
        }
    };
    let (a, x) = (p.source(), p.target());
    let mut entries: Vec<Value> = cl
        .entries()
        .into_iter()
        .map(|((f, b), phi)| json!({"base": x.mor_name(f), "object": a.obj_name(b), "lift": a.mor_name(phi)}))
        .collect();
    entries.sort_by_key(|e| e.to_string());
    let split = check_split(&cl);
    let lines = vec![
        format!("cleaving with {} lifts", entries.len()),
        format!("split: {}", split.holds),
    ];
    Ok(Outcome {
        holds: Some(true),
        lines,
        report: json!({"lifts": entries, "split": to_value(&split)}),
    })
}

pub fn theorem(inputs: &mut Inputs, file: &Path, witness: Option<&Path>, search: Option<usize>) -> Result<Outcome> {
    let m = load_indexed(inputs, file)?;
    let given = match witness {
        Some(w) => {
            let raw: RawWitness = inputs.json(w)?;
            match WeakReversibilityWitness::from_raw(&m, &raw) {
                Ok(w) => Some(w),
                Err(e) => return Ok(theorem_error(e)),
            }
        }
        None => None,
    };
    let source = match (&given, search) {
        (Some(w), _) => WitnessSource::Given(w),
        (None, Some(budget)) => WitnessSource::Search { budget },
        (None, None) => WitnessSource::Absent,
    };
    let t = grothendieck(Arc::new(m))?;
    let v = match verify_main_theorem(&t, source) {
        Ok(v) => v,
        Err(e) => return Ok(theorem_error(e)),
    };
    let mut lines = vec![v.banner.to_string()];
    for (name, c) in v.hypotheses.conditions() {
        lines.push(format!("hypothesis {name}: {} ({})", mark(c.holds), c.summary));
    }
    lines.push(format!("conclusion: {}", mark(v.conclusion.holds)));
    for (name, c) in v.conclusion.total_fi_type.conditions() {
        lines.push(format!("  total {name}: {}", mark(c.holds)));
    }
    lines.push(format!(
        "  projection preserves pullbacks: {}",
        mark(v.conclusion.proj_preserves_pullbacks.holds)
    ));
    lines.push(format!(
        "  projection preserves weak pushouts: {}",
        mark(v.conclusion.proj_preserves_weak_pushouts.holds)
    ));
    if let Some(c) = &v.construction {
        lines.push(format!(
            "construction: {} of {} built squares are weak pushouts ({} spans skipped)",
            c.passed, c.built, c.skipped
        ));
    }
    if let Some(g) = &v.construction_gap {
        lines.push(format!("construction gap: {g}"));
    }
    if let Some(a) = &v.alarm {
        lines.push(format!("ALARM: {a}"));
    }
    lines.push(TRUNCATION_CAVEAT.into());
    Ok(Outcome {
        holds: Some(v.hypotheses_hold && v.conclusion.holds && v.alarm.is_none()),
        lines,
        report: to_value(&v),
    })
}

fn theorem_error(e: impl std::fmt::Display) -> Outcome {
    Outcome {
        holds: Some(false),
        lines: vec![format!("theorem check stopped: {e}")],
        report: json!({"error": e.to_string()}),
    }
}

fn load_twisted(inputs: &mut Inputs, file: &Path) -> Result<TwistedAction> {
    let raw: RawTwisted = inputs.json(file)?;
    Ok(TwistedAction::from_raw(&raw)?)
}

pub fn group_ext(inputs: &mut Inputs, file: &Path, output: Option<&Path>) -> Result<Outcome> {
    let t = load_twisted(inputs, file)?;
    if let Err(e) = validate_twisted_action(&t) {
        return Ok(Outcome {
            holds: Some(false),
            lines: vec![format!("invalid twisted action: {e}")],
            report: json!({"valid": false, "error": e.to_string()}),
        });
    }
    let ext = extension_from_twisted(&t)?;
    let g = &ext.total;
    if let Some(p) = output {
        write_json(p, &g.to_raw())?;
    }
    let max_order = g.elements().map(|x| g.element_order(x)).max().unwrap_or(1);
    let report = json!({
        "valid": true,
        "strict": t.is_strict(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "max_element_order": max_order,
    });
    Ok(Outcome {
        holds: Some(true),
        lines: vec![format!(
            "extension of order {} ({}abelian, largest element order {max_order}, {}strict action)",
            g.order(),
            if g.is_abelian() { "" } else { "non" },
            if t.is_strict() { "" } else { "non-" }
        )],
        report,
    })
}

pub fn group_twist(inputs: &mut Inputs, file: &Path, section: Option<&str>, output: Option<&Path>) -> Result<Outcome> {
    let p = inputs.group_hom(file)?;
    let s = match section {
        Some(list) => parse_elements(&p.source, list, p.target.order())?,
        None => sections(&p, 1)?
            .into_iter()
            .next()
            .ok_or_else(|| anyhow!("no section"))?,
    };
    let t = twisted_from_surjection(&p, &s)?;
    if let Some(out) = output {
        write_json(out, &t.to_raw())?;
    }
    let rt = round_trip(&p, &s)?;
    let lines = vec![
        format!("section: {:?}", s.iter().map(|&x| p.source.name(x)).collect::<Vec<_>>()),
        format!(
            "kernel order {}, strict {}, split {}",
            rt.kernel_order, rt.strict, rt.split
        ),
        format!(
            "reconstructed order {}, isomorphic to the source: {}",
            rt.reconstructed_order, rt.isomorphic
        ),
    ];
    Ok(Outcome {
        holds: Some(rt.isomorphic),
        lines,
        report: json!({"twisted": to_value(&t.to_raw()), "round_trip": to_value(&rt)}),
    })
}

pub fn group_split(inputs: &mut Inputs, file: &Path) -> Result<Outcome> {
    let p = inputs.group_hom(file)?;
    let section = find_homomorphic_section(&p)?;
    let names = section.as_ref().map(|s| {
        p.target
            .elements()
            .map(|g| p.source.name(s.apply(g)).to_owned())
            .collect::<Vec<_>>()
    });
    let line = match &names {
        Some(n) => format!("split by the homomorphic section {n:?}"),
        None => "no homomorphic section".into(),
    };
    Ok(Outcome {
        holds: Some(section.is_some()),
        lines: vec![line],
        report: json!({"split": section.is_some(), "section": names}),
    })
}

fn group_arg(inputs: &mut Inputs, arg: &str) -> Result<fitype_core::group::GroupTable> {
    match builtin_group(arg) {
        Some(g) => Ok(g),
        None => inputs.group(&crate::input::GroupRef::Named(arg.into()), Path::new("")),
    }
}

fn category_arg(inputs: &mut Inputs, arg: &str) -> Result<fitype_core::cat::FinCat> {
    inputs
        .category(arg)
        .with_context(|| format!("`{arg}` is neither a file nor a built-in ({BUILTIN_CATEGORIES})"))
}

/// Write a generated artifact, or return it as the report when no path is
/// given.
fn artifact(value: Value, output: Option<&Path>, summary: String) -> Result<Outcome> {
    match output {
        Some(p) => {
            write_json(p, &value)?;
            Ok(Outcome {
                holds: None,
                lines: vec![format!("{summary}, written to {}", p.display())],
                report: json!({"summary": summary, "output": p.display().to_string()}),
            })
        }
        None => Ok(Outcome {
            holds: None,
            lines: vec![serde_json::to_string_pretty(&value)?],
            report: value,
        }),
    }
}

fn indexed_summary(m: &IndexedCat) -> String {
    format!(
        "indexed category over {} objects ({})",
        m.base().num_objects(),
        if m.is_strict() { "strict" } else { "non-strict" }
    )
}

pub fn generate(inputs: &mut Inputs, g: &GenCommand) -> Result<Outcome> {
    match g {
        GenCommand::Fi { max, output } => {
            let c = gen::fi_truncated(*max);
            let s = format!(
                "FI(<={max}): {} objects, {} morphisms",
                c.num_objects(),
                c.num_morphisms()
            );
            artifact(to_value(&c.to_raw()), output.as_deref(), s)
        }
        GenCommand::Fig { group, max, output } => {
            let grp = group_arg(inputs, group)?;
            let c = gen::fi_g_direct(&grp, *max);
            let s = format!(
                "FI_{group}(<={max}): {} objects, {} morphisms",
                c.num_objects(),
                c.num_morphisms()
            );
            artifact(to_value(&c.to_raw()), output.as_deref(), s)
        }
        GenCommand::Gpow {
            group,
            max,
            output,
            witness_output,
        } => {
            let grp = group_arg(inputs, group)?;
            let m = gen::indexed_gpow(&grp, *max);
            if let Some(p) = witness_output {
                write_json(p, &gpow_witness(&m, &grp).to_raw(&m))?;
            }
            artifact(to_value(&indexed_to_raw(&m)), output.as_deref(), indexed_summary(&m))
        }
        GenCommand::Delta { base, fiber, output } => {
            let x = Arc::new(category_arg(inputs, base)?);
            let y = Arc::new(category_arg(inputs, fiber)?);
            let m = gen::delta_const(x, y);
            artifact(to_value(&indexed_to_raw(&m)), output.as_deref(), indexed_summary(&m))
        }
        GenCommand::Blocks { max, inner, output } => {
            let m = gen::block_perm_indexed(*max, *inner);
            artifact(to_value(&indexed_to_raw(&m)), output.as_deref(), indexed_summary(&m))
        }
        GenCommand::Slice { category, output } => {
            let c = Arc::new(category_arg(inputs, category)?);
            let m = gen::slice_indexed(c)?;
            artifact(to_value(&indexed_to_raw(&m)), output.as_deref(), indexed_summary(&m))
        }
    }
}

pub fn corpus() -> Result<Outcome> {
    let reports: Vec<_> = corpus::corpus().iter().map(corpus::full_report).collect();
    let mut lines = Vec::new();
    let mut alarms = 0;
    for r in &reports {
        let theorem = match &r.theorem {
            Ok(v) => {
                alarms += usize::from(v.alarm.is_some());
                format!(
                    "hypotheses {}, conclusion {}{}",
                    mark(v.hypotheses_hold),
                    mark(v.conclusion.holds),
                    if v.alarm.is_some() { ", ALARM" } else { "" }
                )
            }
            Err(e) => format!("not run: {e}"),
        };
        lines.push(format!(
            "{}: {} morphisms, fibration {}, lemmas {}, FI-type {}, theorem: {theorem}",
            r.name,
            r.morphisms,
            mark(r.fibration.holds),
            mark(r.lemmas.all_hold()),
            mark(r.total_fi_type.all_hold()),
        ));
    }
    Ok(Outcome {
        holds: Some(alarms == 0),
        lines,
        report: to_value(&reports),
    })
}

/// Write each corpus instance as `<name>.json`, with `<name>.witness.json`
/// and `<name>.twisted.json` where available. Returns the file count.
pub fn seed_corpus(dir: &Path) -> Result<usize> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut n = 0;
    for inst in corpus::corpus() {
        write_json(&dir.join(format!("{}.json", inst.name)), &indexed_to_raw(&inst.indexed))?;
        n += 1;
        if let WitnessPlan::Given(w) = &inst.witness {
            write_json(
                &dir.join(format!("{}.witness.json", inst.name)),
                &w.to_raw(&inst.indexed),
            )?;
            n += 1;
        }
        if let Some(t) = &inst.twisted {
            write_json(&dir.join(format!("{}.twisted.json", inst.name)), &t.to_raw())?;
            n += 1;
        }
    }
    let fi4 = builtin_category("fi:4")?.expect("built-in");
    write_json(&dir.join("fi4.json"), &fi4.to_raw())?;
    Ok(n + 1)
}
