//! Built-in theories: classical simplices, Boxworld, the Spekkens toy model
//! and qubits.

use crate::error::{Error, Result};
use crate::gpt::{compose, CompositeSystem, CompositionRule, GptSystem};
use crate::linalg::scalar::{frac, int, unit_vec, vec_from_i64};
use crate::linalg::{Matrix, Scalar, Vector};
use crate::quantum::QuantumComposite;

pub const BUILTIN_NAMES: [&str; 4] = ["classical", "boxworld", "spekkens", "qubit"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuiltinParams {
    pub d: Option<usize>,
    pub parties: Option<usize>,
}

/// A polytopal theory: single system, composite and provenance notes.
#[derive(Clone, Debug)]
pub struct TheorySpec {
    pub name: String,
    pub system: GptSystem,
    pub composite: CompositeSystem,
    pub provenance: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Theory {
    Polytopal(Box<TheorySpec>),
    Quantum(QuantumComposite),
}

impl Theory {
    pub fn name(&self) -> String {
        match self {
            Theory::Polytopal(t) => t.name.clone(),
            Theory::Quantum(q) => if q.d == 2 { "qubit".into() } else { format!("qudit{}", q.d) },
        }
    }
}

pub fn load_builtin(name: &str, params: &BuiltinParams) -> Result<Theory> {
    match name {
        "classical" => Ok(Theory::Polytopal(Box::new(classical(params.d.unwrap_or(2), params.parties.unwrap_or(2))?))),
        "boxworld" => {
            no_d(name, params)?;
            Ok(Theory::Polytopal(Box::new(boxworld(bipartite(name, params)?)?)))
        }
        "spekkens" => {
            no_d(name, params)?;
            Ok(Theory::Polytopal(Box::new(spekkens(bipartite(name, params)?)?)))
        }
        "qubit" => {
            if params.d.is_some_and(|d| d != 2) {
                return Err(Error::BadParams("qubit has local dimension 2".into()));
            }
            let n = params.parties.unwrap_or(2);
            if !(2..=4).contains(&n) {
                return Err(Error::BadParams(format!("qubit supports 2 to 4 parties, got {n}")));
            }
            Ok(Theory::Quantum(QuantumComposite::new(2, n)?))
        }
        other => Err(Error::UnknownTheory(other.into())),
    }
}

/// Loads a polytopal built-in, rejecting the quantum one.
pub fn load_polytopal(name: &str, params: &BuiltinParams) -> Result<TheorySpec> {
    match load_builtin(name, params)? {
        Theory::Polytopal(t) => Ok(*t),
        Theory::Quantum(_) => Err(Error::BadParams(format!("'{name}' is not a polytopal theory"))),
    }
}

fn no_d(name: &str, params: &BuiltinParams) -> Result<()> {
    match params.d {
        Some(_) => Err(Error::BadParams(format!("'{name}' has a fixed local dimension"))),
        None => Ok(()),
    }
}

fn bipartite(name: &str, params: &BuiltinParams) -> Result<usize> {
    match params.parties.unwrap_or(2) {
        2 => Ok(2),
        n => Err(Error::BadParams(format!("'{name}' is only available for two parties, got {n}"))),
    }
}

/// `I ⊗ … ⊗ g ⊗ … ⊗ I` with `g` in slot `k` of `n`.
fn local(g: &Matrix, k: usize, n: usize) -> Matrix {
    let id = Matrix::identity(g.rows());
    (0..n).fold(Matrix::identity(1), |acc, j| acc.kron(if j == k { g } else { &id }))
}

fn adjacent_transpositions(d: usize, n: usize) -> Vec<Matrix> {
    (0..n - 1)
        .map(|k| {
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(k, k + 1);
            crate::orbits::permutation_operator(d, n, &sigma)
        })
        .collect()
}

fn permutation_matrix(images: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(images.len(), images.len());
    for (i, &j) in images.iter().enumerate() {
        m[(j, i)] = int(1);
    }
    m
}

fn composite_generators(local_gens: &[Matrix], d: usize, n: usize) -> Vec<Matrix> {
    let mut gens: Vec<Matrix> = Vec::new();
    for k in 0..n {
        for g in local_gens {
            gens.push(local(g, k, n));
        }
    }
    gens.extend(adjacent_transpositions(d, n));
    gens
}

/// Simplex of dimension `d`; composites take all product vertices and are
/// acted on by independent relabellings of each party plus the party swaps.
pub fn classical(d: usize, parties: usize) -> Result<TheorySpec> {
    if d < 2 {
        return Err(Error::BadParams(format!("classical needs d >= 2, got {d}")));
    }
    if !(2..=4).contains(&parties) {
        return Err(Error::BadParams(format!("classical supports 2 to 4 parties, got {parties}")));
    }
    let system = GptSystem::new(format!("classical{d}"), (0..d).map(|i| unit_vec(d, i)).collect(), vec![int(1); d])?;
    let mut local_gens = vec![permutation_matrix(&[vec![1, 0], (2..d).collect()].concat())];
    if d > 2 {
        local_gens.push(permutation_matrix(&(0..d).map(|i| (i + 1) % d).collect::<Vec<_>>()));
    }
    let gens = composite_generators(&local_gens, d, parties);
    let composite = compose(&vec![system.clone(); parties], CompositionRule::MinTensor, gens)?;
    Ok(TheorySpec {
        name: "classical".into(),
        system,
        composite,
        provenance: vec![format!("simplex with {d} vertices; local relabellings generated by a transposition and a {d}-cycle")],
    })
}

/// Square with vertices `(±1, ±1, 1)` and unit effect `(0, 0, 1)`; the
/// composite is the max tensor product.
pub fn boxworld(parties: usize) -> Result<TheorySpec> {
    let verts = vec![
        vec_from_i64(&[1, 1, 1]),
        vec_from_i64(&[-1, 1, 1]),
        vec_from_i64(&[-1, -1, 1]),
        vec_from_i64(&[1, -1, 1]),
    ];
    let system = GptSystem::new("square", verts, vec_from_i64(&[0, 0, 1]))?;
    let rotation = Matrix::from_i64(3, 3, &[0, -1, 0, 1, 0, 0, 0, 0, 1]);
    let reflection = Matrix::from_i64(3, 3, &[1, 0, 0, 0, -1, 0, 0, 0, 1]);
    let gens = composite_generators(&[rotation, reflection], 3, parties);
    let composite = compose(&vec![system.clone(); parties], CompositionRule::MaxTensor, gens)?;
    Ok(TheorySpec {
        name: "boxworld".into(),
        system,
        composite,
        provenance: vec!["square state space; local group is the dihedral group of order 8".into()],
    })
}

/// Ontic states `0..4` identified with `Z_2^2` via `a = 2 a1 + a0`.
fn z2_linear(m: [[usize; 2]; 2], a: usize) -> usize {
    let (a1, a0) = (a >> 1, a & 1);
    let r1 = (m[0][0] * a1 + m[0][1] * a0) % 2;
    let r0 = (m[1][0] * a1 + m[1][1] * a0) % 2;
    2 * r1 + r0
}

/// The entangling gate `(a, b) -> (M a + N b, N a + M b)` over `Z_2^2` as a
/// permutation of the 16 ontic pairs `a * 4 + b`.
pub fn spekkens_gate() -> Vec<usize> {
    let m = [[0, 0], [0, 1]];
    let n = [[0, 1], [1, 0]];
    (0..16)
        .map(|i| {
            let (a, b) = (i / 4, i % 4);
            let x = z2_linear(m, a) ^ z2_linear(n, b);
            let y = z2_linear(n, a) ^ z2_linear(m, b);
            x * 4 + y
        })
        .collect()
}

fn uniform_over(support: &[usize], dim: usize) -> Vector {
    let w: Scalar = frac(1, support.len() as i64);
    let mut v = vec![int(0); dim];
    for &i in support {
        v[i] = w.clone();
    }
    v
}

/// Epistemic states as uniform distributions over ontic states. Single
/// systems know one of the six pairs of ontic states; pure bipartite states
/// are the local relabellings of a product and of a perfectly correlated
/// state (60 in total).
pub fn spekkens(parties: usize) -> Result<TheorySpec> {
    debug_assert_eq!(parties, 2);
    let mut single = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            single.push(uniform_over(&[a, b], 4));
        }
    }
    let system = GptSystem::new("spekkens", single, vec![int(1); 4])?;

    let s4 = crate::group::all_permutations(4);
    let mut states = std::collections::BTreeSet::new();
    let product: Vec<(usize, usize)> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
    let correlated: Vec<(usize, usize)> = (0..4).map(|a| (a, a)).collect();
    for s in &s4 {
        for t in &s4 {
            for seed in [&product, &correlated] {
                let support: Vec<usize> = seed.iter().map(|&(a, b)| s[a] * 4 + t[b]).collect();
                states.insert(uniform_over(&support, 16));
            }
        }
    }
    let vertices: Vec<Vector> = states.into_iter().collect();

    let transposition = permutation_matrix(&[1, 0, 2, 3]);
    let cycle = permutation_matrix(&[1, 2, 3, 0]);
    let mut gens = composite_generators(&[transposition, cycle], 4, 2);
    gens.push(permutation_matrix(&spekkens_gate()));
    let composite = compose(&[system.clone(), system.clone()], CompositionRule::Explicit(vertices), gens)?;
    Ok(TheorySpec {
        name: "spekkens".into(),
        system,
        composite,
        provenance: vec![
            "ontic representation in R^4 per system; epistemic states are uniform over their ontic support".into(),
            "bipartite pure states: local relabellings of {00,01,10,11} and {00,11,22,33}".into(),
            "entangling gate (a,b) -> (Ma+Nb, Na+Mb) over Z2^2 with M=[[0,0],[0,1]], N=[[0,1],[1,0]], a=2*a1+a0; order 3, commutes with the swap".into(),
            "composite generators: local relabellings of each side, the swap and the entangling gate".into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::validate_theory;

    #[test]
    fn unknown_theory() {
        assert!(matches!(load_builtin("polygon", &BuiltinParams::default()), Err(Error::UnknownTheory(_))));
    }

    #[test]
    fn bad_params() {
        let p = BuiltinParams { d: Some(1), parties: None };
        assert!(matches!(load_builtin("classical", &p), Err(Error::BadParams(_))));
        let p = BuiltinParams { d: None, parties: Some(5) };
        assert!(matches!(load_builtin("qubit", &p), Err(Error::BadParams(_))));
        let p = BuiltinParams { d: None, parties: Some(3) };
        assert!(matches!(load_builtin("boxworld", &p), Err(Error::BadParams(_))));
    }

    #[test]
    fn classical_three_has_nine_vertices() {
        let t = classical(3, 2).unwrap();
        assert_eq!(t.system.vertices.len(), 3);
        assert_eq!(t.composite.vertices.len(), 9);
        assert!(validate_theory(&t.composite).is_valid());
    }

    #[test]
    fn boxworld_has_24_vertices() {
        let t = boxworld(2).unwrap();
        assert_eq!(t.system.vertices.len(), 4);
        assert_eq!(t.composite.vertices.len(), 24);
        assert!(validate_theory(&t.composite).is_valid());
    }

    #[test]
    fn spekkens_counts() {
        let t = spekkens(2).unwrap();
        assert_eq!(t.system.vertices.len(), 6);
        assert_eq!(t.composite.vertices.len(), 60);
        assert!(validate_theory(&t.composite).is_valid());
    }

    #[test]
    fn gate_has_order_three_and_commutes_with_swap() {
        let g = spekkens_gate();
        let g3: Vec<usize> = (0..16).map(|i| g[g[g[i]]]).collect();
        assert_eq!(g3, (0..16).collect::<Vec<_>>());
        let swap = |i: usize| (i % 4) * 4 + i / 4;
        assert!((0..16).all(|i| g[swap(i)] == swap(g[i])));
    }
}
