//! JSON interchange format for polytopal theories. Rationals are written as
//! `"p/q"` strings; output has sorted keys and is byte-stable.

use serde::{Deserialize, Serialize};

use crate::catalog::TheorySpec;
use crate::error::{Error, Result};
use crate::gpt::{compose, validate_theory, CompositionRule, GptSystem};
use crate::linalg::scalar::{format_scalar, parse_scalar};
use crate::linalg::{Matrix, Vector};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Composition {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_vertices: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryFileV1 {
    pub schema_version: String,
    pub name: String,
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub unit_effect: Vec<String>,
    pub composition: Composition,
    pub composite_generators: Vec<Vec<Vec<String>>>,
    pub parties: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

fn vec_to_strings(v: &[crate::linalg::Scalar]) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

fn strings_to_vec(v: &[String]) -> Result<Vector> {
    v.iter().map(|s| parse_scalar(s)).collect()
}

fn matrix_from_strings(rows: &[Vec<String>], dim: usize, which: usize) -> Result<Matrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Schema(format!("composite generator {which} must be {dim}x{dim}")));
    }
    let rows: Vec<Vector> = rows.iter().map(|r| strings_to_vec(r)).collect::<Result<_>>()?;
    Ok(Matrix::from_rows(&rows))
}

pub fn export(t: &TheorySpec) -> TheoryFileV1 {
    let c = &t.composite;
    let explicit_vertices = match &c.rule {
        CompositionRule::Explicit(vs) => Some(vs.iter().map(|v| vec_to_strings(v)).collect()),
        _ => None,
    };
    TheoryFileV1 {
        schema_version: SCHEMA_VERSION.into(),
        name: t.name.clone(),
        dim: t.system.dim,
        vertices: t.system.vertices.vertices().iter().map(|v| vec_to_strings(v)).collect(),
        unit_effect: vec_to_strings(&t.system.unit_effect),
        composition: Composition { rule: c.rule.tag().into(), explicit_vertices },
        composite_generators: c
            .group
            .generators
            .iter()
            .map(|g| g.row_vectors().iter().map(|r| vec_to_strings(r)).collect())
            .collect(),
        parties: c.parties,
        provenance: t.provenance.clone(),
    }
}

/// Builds and validates the theory described by a file.
pub fn load(f: &TheoryFileV1) -> Result<TheorySpec> {
    if f.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!("unsupported schema_version '{}'", f.schema_version)));
    }
    if f.vertices.iter().any(|v| v.len() != f.dim) || f.unit_effect.len() != f.dim {
        return Err(Error::Schema(format!("vertices and unit_effect must have length dim = {}", f.dim)));
    }
    if f.parties < 2 {
        return Err(Error::Schema("parties must be at least 2".into()));
    }
    let vertices: Vec<Vector> = f.vertices.iter().map(|v| strings_to_vec(v)).collect::<Result<_>>()?;
    let system = GptSystem::new(f.name.clone(), vertices, strings_to_vec(&f.unit_effect)?)?;
    let rule = match (f.composition.rule.as_str(), &f.composition.explicit_vertices) {
        ("min_tensor", None) => CompositionRule::MinTensor,
        ("max_tensor", None) => CompositionRule::MaxTensor,
        ("explicit", Some(vs)) => CompositionRule::Explicit(vs.iter().map(|v| strings_to_vec(v)).collect::<Result<_>>()?),
        ("explicit", None) => return Err(Error::Schema("explicit composition needs explicit_vertices".into())),
        (r @ ("min_tensor" | "max_tensor"), Some(_)) => {
            return Err(Error::Schema(format!("explicit_vertices given for rule '{r}'")))
        }
        (other, _) => return Err(Error::Schema(format!("unknown composition rule '{other}'"))),
    };
    let dim = f.dim.pow(f.parties as u32);
    let gens: Vec<Matrix> = f
        .composite_generators
        .iter()
        .enumerate()
        .map(|(i, g)| matrix_from_strings(g, dim, i))
        .collect::<Result<_>>()?;
    let composite = compose(&vec![system.clone(); f.parties], rule, gens)?;
    let report = validate_theory(&composite);
    if !report.is_valid() {
        let first = &report.violations[0];
        return Err(Error::Validation(format!("{} violation(s); first: {}: {}", report.violations.len(), first.check, first.detail)));
    }
    Ok(TheorySpec { name: f.name.clone(), system, composite, provenance: f.provenance.clone() })
}

/// Canonical text: pretty-printed, keys sorted, trailing newline.
pub fn to_canonical_json(f: &TheoryFileV1) -> String {
    let v = serde_json::to_value(f).expect("theory files serialise");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialise");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<TheoryFileV1> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{boxworld, classical, spekkens};

    #[test]
    fn round_trip_is_byte_identical() {
        for t in [classical(2, 2).unwrap(), classical(3, 3).unwrap(), boxworld(2).unwrap(), spekkens(2).unwrap()] {
            let text = to_canonical_json(&export(&t));
            let again = to_canonical_json(&export(&load(&from_json(&text).unwrap()).unwrap()));
            assert_eq!(text, again);
        }
    }

    #[test]
    fn bad_rational_is_a_schema_error() {
        let mut f = export(&classical(2, 2).unwrap());
        f.vertices[0][0] = "1/0".into();
        assert!(matches!(load(&f), Err(Error::Schema(_))));
    }

    #[test]
    fn generator_leaving_the_polytope_is_rejected() {
        let mut f = export(&classical(2, 2).unwrap());
        f.composite_generators[0][0][0] = "2/1".into();
        assert_eq!(load(&f).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = to_canonical_json(&export(&classical(2, 2).unwrap())).replacen('{', "{\"extra\": 1,", 1);
        assert!(matches!(from_json(&text), Err(Error::Schema(_))));
    }
}
