//! Systems of a general probabilistic theory, their transformation groups,
//! and homogeneous multipartite composites.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::group::{all_permutations, closure, induced_permutation, Perm};
use crate::linalg::scalar::dot;
use crate::linalg::{cone_extreme_rays, Matrix, Polytope, Scalar, Vector};
use crate::orbits::permutation_operator;

/// Default bound on the number of elements a group closure may produce.
pub const DEFAULT_MAX_GROUP_SIZE: usize = 1_000_000;

/// Closure bound from `GPTP_MAX_GROUP_SIZE`, falling back to the default.
pub fn max_group_size_from_env() -> usize {
    std::env::var("GPTP_MAX_GROUP_SIZE")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_SIZE)
}

/// A single system: state polytope in `Q^dim` plus its unit effect.
#[derive(Clone, Debug, PartialEq)]
pub struct GptSystem {
    pub name: String,
    pub dim: usize,
    pub vertices: Polytope,
    pub unit_effect: Vector,
}

impl GptSystem {
    pub fn new(name: impl Into<String>, vertices: Vec<Vector>, unit_effect: Vector) -> Result<Self> {
        let dim = unit_effect.len();
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("vertex length differs from unit effect length".into()));
        }
        let sys = GptSystem { name: name.into(), dim, vertices: Polytope::from_vertices_unchecked(dim, vertices), unit_effect };
        if let Some(i) = sys.vertices.vertices().iter().position(|v| dot(&sys.unit_effect, v) != Scalar::one()) {
            return Err(Error::InvalidVertexList(format!("vertex {i} is not normalised by the unit effect")));
        }
        if !sys.vertices.non_extremal_vertices().is_empty() {
            return Err(Error::InvalidVertexList("single-system vertex list contains non-extremal points".into()));
        }
        Ok(sys)
    }

    /// Extreme rays of the effect cone under the no-restriction hypothesis:
    /// all `e` with `<e, w> >= 0` on every state.
    pub fn extremal_effects(&self) -> Vec<Vector> {
        cone_extreme_rays(&Matrix::from_rows(self.vertices.vertices()))
    }
}

/// Finite matrix group acting on `Q^dim`, given by generators.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformationGroup {
    pub dim: usize,
    pub generators: Vec<Matrix>,
}

impl TransformationGroup {
    pub fn new(dim: usize, generators: Vec<Matrix>) -> Self {
        TransformationGroup { dim, generators }
    }

    /// Breadth-first closure; see [`group_closure`].
    pub fn elements(&self, max_size: usize) -> Result<Vec<Matrix>> {
        group_closure(self, max_size)
    }

    /// Generators as permutations of a point set they preserve.
    pub fn permutation_action(&self, points: &[Vector]) -> Result<Vec<Perm>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                induced_permutation(g, points).ok_or_else(|| Error::InvalidTransformation {
                    generator: i,
                    detail: "does not permute the vertex set".into(),
                })
            })
            .collect()
    }
}

/// All group elements, identity first, in breadth-first order over the
/// generator list. Matrices are compared exactly.
pub fn group_closure(g: &TransformationGroup, max_size: usize) -> Result<Vec<Matrix>> {
    for (i, m) in g.generators.iter().enumerate() {
        if m.rows() != g.dim || m.cols() != g.dim || m.inverse().is_none() {
            return Err(Error::InvalidTransformation { generator: i, detail: "generator is not an invertible dim x dim matrix".into() });
        }
    }
    closure(Matrix::identity(g.dim), &g.generators, max_size)
}

/// How the composite state space is formed from its parts.
#[derive(Clone, Debug, PartialEq)]
pub enum CompositionRule {
    /// Convex hull of product states.
    MinTensor,
    /// Everything non-negative on product effects.
    MaxTensor,
    /// A supplied list of extremal states.
    Explicit(Vec<Vector>),
}

impl CompositionRule {
    pub fn tag(&self) -> &'static str {
        match self {
            CompositionRule::MinTensor => "min_tensor",
            CompositionRule::MaxTensor => "max_tensor",
            CompositionRule::Explicit(_) => "explicit",
        }
    }
}

/// `n` identical parts composed under a rule, with the composite's
/// transformation group and party permutation operators.
#[derive(Clone, Debug)]
pub struct CompositeSystem {
    pub part: GptSystem,
    pub parties: usize,
    pub rule: CompositionRule,
    pub dim: usize,
    pub vertices: Polytope,
    pub unit_effect: Vector,
    pub group: TransformationGroup,
    /// Keyed by the permutation `sigma` of `0..parties` (factor `k` moves to
    /// position `sigma[k]`).
    pub perm_ops: BTreeMap<Vec<usize>, Matrix>,
}

impl CompositeSystem {
    /// The operator exchanging the first two parties.
    pub fn swap(&self) -> &Matrix {
        let mut sigma: Vec<usize> = (0..self.parties).collect();
        sigma.swap(0, 1);
        &self.perm_ops[&sigma]
    }
}

fn tensor_power_vec(parts: &[&Vector]) -> Vector {
    let mut acc: Vector = vec![Scalar::one()];
    for p in parts {
        let mut next = Vec::with_capacity(acc.len() * p.len());
        for a in &acc {
            for b in p.iter() {
                next.push(a * b);
            }
        }
        acc = next;
    }
    acc
}

fn index_tuples(base: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for t in &out {
            for i in 0..base {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Composite of identical parts.
///
/// `min_tensor` takes all product vertices; `max_tensor` enumerates the
/// vertices of `{x : <e_1⊗…⊗e_n, x> >= 0, <u⊗…⊗u, x> = 1}` by double
/// description; `explicit` uses the given list after checking extremality.
/// Every generator must permute the composite vertices.
pub fn compose(parts: &[GptSystem], rule: CompositionRule, group_gens: Vec<Matrix>) -> Result<CompositeSystem> {
    let n = parts.len();
    if n < 2 {
        return Err(Error::BadParams("a composite needs at least two parts".into()));
    }
    let part = parts[0].clone();
    if parts.iter().any(|p| p.dim != part.dim || p.vertices != part.vertices || p.unit_effect != part.unit_effect) {
        return Err(Error::BadParams("only composites of identical systems are supported".into()));
    }
    let dim = part.dim.pow(n as u32);
    let unit = tensor_power_vec(&vec![&part.unit_effect; n]);

    let vertices = match &rule {
        CompositionRule::MinTensor => {
            let vs = part.vertices.vertices();
            index_tuples(vs.len(), n)
                .into_iter()
                .map(|t| tensor_power_vec(&t.iter().map(|&i| &vs[i]).collect::<Vec<_>>()))
                .collect()
        }
        CompositionRule::MaxTensor => {
            let effects = part.extremal_effects();
            let rows: Vec<Vector> = index_tuples(effects.len(), n)
                .into_iter()
                .map(|t| tensor_power_vec(&t.iter().map(|&i| &effects[i]).collect::<Vec<_>>()))
                .collect();
            let rays = cone_extreme_rays(&Matrix::from_rows(&rows));
            let mut vs: Vec<Vector> = rays
                .into_iter()
                .map(|r| {
                    let norm = dot(&unit, &r);
                    r.iter().map(|x| x / &norm).collect()
                })
                .collect();
            vs.sort();
            vs
        }
        CompositionRule::Explicit(vs) => {
            if vs.iter().any(|v| v.len() != dim) {
                return Err(Error::InvalidVertexList(format!("explicit vertices must have length {dim}")));
            }
            let poly = Polytope::from_vertices_unchecked(dim, vs.clone());
            let mut seen = std::collections::HashSet::new();
            if !vs.iter().all(|v| seen.insert(v)) {
                return Err(Error::InvalidVertexList("duplicate explicit vertices".into()));
            }
            let bad = poly.non_extremal_vertices();
            if !bad.is_empty() {
                return Err(Error::InvalidVertexList(format!("explicit vertices {bad:?} are not extremal")));
            }
            vs.clone()
        }
    };
    if let Some(i) = vertices.iter().position(|v| dot(&unit, v) != Scalar::one()) {
        return Err(Error::InvalidVertexList(format!("composite vertex {i} is not normalised")));
    }

    let mut perm_ops = BTreeMap::new();
    for sigma in all_permutations(n) {
        let m = permutation_operator(part.dim, n, &sigma);
        perm_ops.insert(sigma, m);
    }

    let group = TransformationGroup::new(dim, group_gens);
    for (i, g) in group.generators.iter().enumerate() {
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::InvalidTransformation { generator: i, detail: format!("expected a {dim}x{dim} matrix") });
        }
    }
    group.permutation_action(&vertices)?;

    Ok(CompositeSystem {
        part,
        parties: n,
        rule,
        dim,
        vertices: Polytope::from_vertices_unchecked(dim, vertices),
        unit_effect: unit,
        group,
        perm_ops,
    })
}

/// One failed consistency check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, check: &str, detail: impl Into<String>) {
        self.violations.push(Violation { check: check.into(), detail: detail.into() });
    }
}

/// Checks extremality, normalisation, group preservation and permutation
/// operator consistency. Violations are returned as data.
pub fn validate_theory(c: &CompositeSystem) -> ValidationReport {
    let mut report = ValidationReport::default();
    let verts = c.vertices.vertices();

    for i in c.vertices.non_extremal_vertices() {
        report.push("extremality", format!("vertex {i} is not extremal"));
    }
    for (i, v) in verts.iter().enumerate() {
        if dot(&c.unit_effect, v) != Scalar::one() {
            report.push("normalisation", format!("vertex {i} has unit-effect value {}", dot(&c.unit_effect, v)));
        }
    }
    for (i, g) in c.group.generators.iter().enumerate() {
        if g.inverse().is_none() {
            report.push("group", format!("generator {i} is not invertible"));
        } else if induced_permutation(g, verts).is_none() {
            report.push("group", format!("generator {i} maps a vertex outside the state space"));
        }
    }

    let id = Matrix::identity(c.dim);
    let mut swap_key: Vec<usize> = (0..c.parties).collect();
    swap_key.swap(0, 1);
    match c.perm_ops.get(&swap_key) {
        Some(p) => {
            if p * p != id {
                report.push("perm_ops", "swap not self-inverse");
            }
        }
        None => report.push("perm_ops", "missing swap operator"),
    }
    for (sigma, ps) in &c.perm_ops {
        if induced_permutation(ps, verts).is_none() {
            report.push("perm_ops", format!("permutation {sigma:?} does not map vertices to vertices"));
        }
        for (tau, pt) in &c.perm_ops {
            let st: Vec<usize> = tau.iter().map(|&k| sigma[k]).collect();
            match c.perm_ops.get(&st) {
                Some(pst) if *pst == ps * pt => {}
                _ => report.push("perm_ops", format!("group law fails for {sigma:?} * {tau:?}")),
            }
        }
    }
    report
}
