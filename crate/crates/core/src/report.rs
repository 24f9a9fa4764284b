//! Analysis reports as JSON values with sorted keys, and their markdown
//! rendering.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::catalog::{Theory, TheorySpec};
use crate::error::Result;
use crate::gpt::validate_theory;
use crate::idempotent::{exact, quantum as qidem, LawResiduals, NewSectorReport, NondisturbanceReport};
use crate::linalg::scalar::format_scalar;
use crate::linalg::Scalar;
use crate::orbits::{particle_type_report, symmetric_extremal_states, PureStateOption};
use crate::quantum::{random_density_matrix, sector_projectors, CMatrix};

pub const TOOL_NAME: &str = "gptp";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Settings shared by every analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub tolerance: f64,
    pub max_group_size: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            tolerance: crate::quantum::DEFAULT_TOLERANCE,
            max_group_size: crate::gpt::DEFAULT_MAX_GROUP_SIZE,
        }
    }
}

/// Residuals are printed in a fixed scientific format so that reports
/// compare byte for byte.
pub fn fmt_residual(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.3e}")
    }
}

fn rationals(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_scalar(x))).collect())
}

fn header(command: &str, opts: &RunOptions) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("tool".into(), json!({ "name": TOOL_NAME, "version": TOOL_VERSION }));
    m.insert("seed".into(), json!(opts.seed));
    m.insert("tolerance".into(), json!(fmt_residual(opts.tolerance)));
    m
}

fn theory_meta(t: &TheorySpec) -> Value {
    let c = &t.composite;
    json!({
        "name": t.name,
        "backend": "exact",
        "single_dim": t.system.dim,
        "single_vertices": t.system.vertices.len(),
        "parties": c.parties,
        "composition": c.rule.tag(),
        "composite_dim": c.dim,
        "composite_vertices": c.vertices.len(),
        "provenance": t.provenance,
    })
}

fn laws_json(l: &LawResiduals) -> Value {
    json!({
        "split_round_trip": fmt_residual(l.split_round_trip),
        "split_identity": fmt_residual(l.split_identity),
        "orthogonality": fmt_residual(l.orthogonality),
        "completeness": fmt_residual(l.completeness),
        "biproduct_delta": fmt_residual(l.biproduct_delta),
        "biproduct_sum": fmt_residual(l.biproduct_sum),
        "sector_splittings": fmt_residual(l.sector_splittings),
    })
}

fn nondisturbance_json(r: &NondisturbanceReport) -> Value {
    json!({
        "sum_equals_sym": fmt_residual(r.sum_equals_sym),
        "disturbance": fmt_residual(r.disturbance),
        "total_mass_defect": fmt_residual(r.total_mass_defect),
        "states_checked": r.states_checked,
        "part_mass": r.part_mass.iter().map(|m| json!({ "min": fmt_residual(m.min), "max": fmt_residual(m.max) })).collect::<Vec<_>>(),
    })
}

fn comparison_json(r: &NewSectorReport) -> Value {
    serde_json::to_value(r).expect("comparison serialises")
}

/// Particle types by orbits of symmetric pure states.
pub fn orbits_report(theory: &Theory, option: PureStateOption, opts: &RunOptions) -> Result<Value> {
    let mut m = header("orbits", opts);
    m.insert("option".into(), json!(option.label()));
    match theory {
        Theory::Polytopal(t) => {
            let c = &t.composite;
            let validation = validate_theory(c);
            if !validation.is_valid() {
                let first = &validation.violations[0];
                return Err(crate::Error::Validation(format!("{}: {}", first.check, first.detail)));
            }
            let r = particle_type_report(c, option, opts.max_group_size)?;
            let counts = json!({
                "I": symmetric_extremal_states(c, PureStateOption::ExtremalSymmetric).states.len(),
                "II": symmetric_extremal_states(c, PureStateOption::SymmetricExtremal).states.len(),
            });
            let orbits: Vec<Value> = r
                .symmetric_orbits
                .orbits
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    json!({
                        "index": i,
                        "representative": rationals(&o.representative),
                        "size": o.members.len(),
                        "base_orbit": r.f_map[i],
                        "f_map_via": r.f_map_via[i],
                        "hull_generators": r.hull_generators[i].len(),
                    })
                })
                .collect();
            let base: Vec<Value> = r
                .full_orbits
                .orbits
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    json!({
                        "index": i,
                        "representative": rationals(&o.representative),
                        "size": o.members.len(),
                        "particle_types": r.types_per_base_orbit[i],
                        "particle_type_count": r.types_per_base_orbit[i].len(),
                    })
                })
                .collect();
            m.insert("theory".into(), theory_meta(t));
            m.insert("symmetric_state_counts".into(), counts);
            m.insert("full_group_order".into(), json!(r.full_group_order));
            m.insert("symmetric_group_order".into(), json!(r.symmetric_group_order));
            m.insert("symmetric_orbits".into(), Value::Array(orbits));
            m.insert("base_orbits".into(), Value::Array(base));
            m.insert("particle_types".into(), json!(r.particle_type_count()));
            m.insert("new_particle_types".into(), json!(r.new_type_count()));
            m.insert("unassigned_orbits".into(), json!(r.f_map.iter().filter(|x| x.is_none()).count()));
        }
        Theory::Quantum(qc) => {
            // The symmetric subgroup is continuous; orbits are the isotypic
            // components that carry states, and both options coincide.
            let sp = sector_projectors(qc.d, qc.n)?;
            let comps: Vec<Value> = sp
                .isotypic
                .iter()
                .filter(|i| i.rank > 0)
                .enumerate()
                .map(|(k, i)| json!({ "index": k, "partition": i.label, "subspace_dim": i.rank }))
                .collect();
            m.insert(
                "theory".into(),
                json!({ "name": theory.name(), "backend": "quantum", "local_dim": qc.d, "parties": qc.n, "hilbert_dim": qc.hilbert_dim }),
            );
            m.insert("particle_types".into(), json!(comps.len()));
            m.insert("new_particle_types".into(), json!(comps.len().saturating_sub(1)));
            m.insert("symmetric_orbits".into(), Value::Array(comps));
            m.insert("orbit_method".into(), json!("structural"));
        }
    }
    Ok(Value::Object(m))
}

/// Symmetrisation idempotent, its splitting and refinement into sectors.
pub fn split_report(theory: &Theory, opts: &RunOptions) -> Result<Value> {
    let mut m = header("split", opts);
    match theory {
        Theory::Polytopal(t) => {
            let c = &t.composite;
            let e = exact::symmetrisation_idempotent(c);
            let dec = exact::refine_parts(&e)?;
            let before = exact::refine_idempotent(&exact::identity_idempotent(c))?;
            let sectors: Vec<Value> = dec
                .sectors
                .iter()
                .enumerate()
                .map(|(i, s)| json!({ "index": i, "dim": s.dim(), "rays": s.rays.len() }))
                .collect();
            m.insert("theory".into(), theory_meta(t));
            m.insert("sym_rank".into(), json!(dec.splitting.sector_dim()));
            m.insert("sector_dims".into(), json!(dec.sector_dims()));
            m.insert("sectors".into(), Value::Array(sectors));
            m.insert("certificate".into(), serde_json::to_value(&dec.certificate).expect("serialises"));
            m.insert("laws".into(), laws_json(&dec.law_residuals()));
            m.insert("nondisturbance".into(), nondisturbance_json(&exact::parts_as_measurement(&dec, &e.states, &e.unit_effect)));
            m.insert("comparison".into(), comparison_json(&exact::compare_decompositions(&before, &dec)));
        }
        Theory::Quantum(qc) => {
            let qc = qc.clone().with_tolerance(opts.tolerance);
            let e = qidem::symmetrisation_idempotent(&qc);
            let dec = qidem::refine_parts(&e, opts.seed)?;
            let before = qidem::refine_idempotent(&qidem::identity_idempotent(&qc), opts.seed)?;
            let sectors: Vec<Value> = dec
                .sectors
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    json!({
                        "index": i,
                        "hilbert_dim": s.hilbert_dim,
                        "operator_rank": s.operator_rank,
                        "partition": s.label,
                        "center_dim": s.center_dim,
                    })
                })
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let states: Vec<CMatrix> = (0..8).map(|_| random_density_matrix(&mut rng, qc.hilbert_dim, qc.hilbert_dim)).collect();
            m.insert(
                "theory".into(),
                json!({ "name": theory.name(), "backend": "quantum", "local_dim": qc.d, "parties": qc.n, "hilbert_dim": qc.hilbert_dim }),
            );
            m.insert("sym_rank".into(), json!(dec.splitting.sector_dim()));
            m.insert("sector_dims".into(), json!(dec.hilbert_dims()));
            m.insert("sectors".into(), Value::Array(sectors));
            m.insert("center_attempts".into(), json!(dec.attempts));
            m.insert("laws".into(), laws_json(&dec.law_residuals()));
            m.insert("nondisturbance".into(), nondisturbance_json(&qidem::parts_as_measurement(&dec, &states)));
            m.insert("comparison".into(), comparison_json(&qidem::compare_decompositions(&before, &dec)));
        }
    }
    Ok(Value::Object(m))
}

pub fn verify_report(suite: &crate::verify::SuiteReport, opts: &RunOptions) -> Value {
    let mut m = header("verify", opts);
    m.insert("suite".into(), json!(suite.suite));
    m.insert("passed".into(), json!(suite.ok()));
    let props: Vec<Value> = suite
        .properties
        .iter()
        .map(|p| {
            json!({
                "name": p.name,
                "passed": p.passed,
                "total": p.total,
                "worst_residual": p.worst.map(fmt_residual),
            })
        })
        .collect();
    m.insert("properties".into(), Value::Array(props));
    Value::Object(m)
}

/// Pretty JSON with a trailing newline. `serde_json` maps keep keys sorted.
pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            format!("({})", xs.iter().map(scalar_text).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn is_table(xs: &[Value]) -> bool {
    !xs.is_empty() && xs.iter().all(Value::is_object)
}

fn render_section(out: &mut String, title: &str, level: usize, m: &Map<String, Value>) {
    out.push_str(&format!("{} {}\n\n", "#".repeat(level), title));
    let mut nested = Vec::new();
    for (k, v) in m {
        match v {
            Value::Object(o) => nested.push((k, Some(o), None)),
            Value::Array(xs) if is_table(xs) => nested.push((k, None, Some(xs))),
            _ => out.push_str(&format!("- **{k}**: {}\n", scalar_text(v))),
        }
    }
    out.push('\n');
    for (k, obj, table) in nested {
        if let Some(o) = obj {
            render_section(out, k, level + 1, o);
        }
        if let Some(xs) = table {
            out.push_str(&format!("{} {}\n\n", "#".repeat(level + 1), k));
            let cols: Vec<&String> = xs[0].as_object().expect("table rows are objects").keys().collect();
            out.push_str(&format!("| {} |\n", cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(cols.len())));
            for row in xs {
                let row = row.as_object().expect("table rows are objects");
                let cells: Vec<String> = cols.iter().map(|c| scalar_text(row.get(*c).unwrap_or(&Value::Null))).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out.push('\n');
        }
    }
}

/// Markdown with the same content as the JSON report.
pub fn to_markdown(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            let title = format!("{} {}", TOOL_NAME, m.get("command").and_then(Value::as_str).unwrap_or("report"));
            render_section(&mut out, &title, 1, m);
        }
        other => out.push_str(&format!("{}\n", scalar_text(other))),
    }
    out
}
