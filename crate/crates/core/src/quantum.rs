//! Finite-dimensional quantum systems: permutation unitaries, isotypic
//! projectors from character tables, exchange-eigenstate labels and the
//! symmetric/antisymmetric split of swap-invariant density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::all_permutations;
use crate::linalg::scalar::to_f64;
use crate::orbits::permutation_operator;

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// `n` copies of `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumComposite {
    pub d: usize,
    pub n: usize,
    pub hilbert_dim: usize,
    pub tolerance: f64,
}

impl QuantumComposite {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadParams(format!("local dimension must be at least 2, got {d}")));
        }
        if n < 2 {
            return Err(Error::BadParams(format!("need at least two parties, got {n}")));
        }
        Ok(QuantumComposite { d, n, hilbert_dim: d.pow(n as u32), tolerance: DEFAULT_TOLERANCE })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// `U_sigma` for every permutation of the parties, in lexicographic order.
    pub fn permutation_unitaries(&self) -> Vec<(Vec<usize>, CMatrix)> {
        all_permutations(self.n).into_iter().map(|s| {
            let u = permutation_unitary(self.d, self.n, &s);
            (s, u)
        }).collect()
    }

    pub fn swap(&self) -> CMatrix {
        let mut sigma: Vec<usize> = (0..self.n).collect();
        sigma.swap(0, 1);
        permutation_unitary(self.d, self.n, &sigma)
    }
}

/// The tensor-factor permutation as a complex matrix.
pub fn permutation_unitary(d: usize, n: usize, sigma: &[usize]) -> CMatrix {
    let m = permutation_operator(d, n, sigma);
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| Complex64::new(to_f64(&m[(i, j)]), 0.0))
}

fn cycle_type(sigma: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; sigma.len()];
    let mut out = Vec::new();
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Character table of `S_n`: classes by cycle type, and rows
/// `(partition, characters)` in the same class order.
pub struct CharacterTable {
    pub classes: Vec<Vec<usize>>,
    pub rows: Vec<(Vec<usize>, Vec<i64>)>,
}

pub fn character_table(n: usize) -> Result<CharacterTable> {
    let t = match n {
        2 => CharacterTable {
            classes: vec![vec![1, 1], vec![2]],
            rows: vec![(vec![2], vec![1, 1]), (vec![1, 1], vec![1, -1])],
        },
        3 => CharacterTable {
            classes: vec![vec![1, 1, 1], vec![2, 1], vec![3]],
            rows: vec![
                (vec![3], vec![1, 1, 1]),
                (vec![2, 1], vec![2, 0, -1]),
                (vec![1, 1, 1], vec![1, -1, 1]),
            ],
        },
        4 => CharacterTable {
            classes: vec![vec![1, 1, 1, 1], vec![2, 1, 1], vec![2, 2], vec![3, 1], vec![4]],
            rows: vec![
                (vec![4], vec![1, 1, 1, 1, 1]),
                (vec![3, 1], vec![3, 1, -1, 0, -1]),
                (vec![2, 2], vec![2, 0, 2, -1, 0]),
                (vec![2, 1, 1], vec![3, -1, -1, 0, 1]),
                (vec![1, 1, 1, 1], vec![1, -1, 1, 1, -1]),
            ],
        },
        _ => return Err(Error::UnsupportedArity(n)),
    };
    t.check(n)?;
    Ok(t)
}

impl CharacterTable {
    /// Column orthogonality: `sum_l chi_l(c) chi_l(c') = delta n!/|c|`.
    fn check(&self, n: usize) -> Result<()> {
        let perms = all_permutations(n);
        let order = perms.len() as i64;
        let sizes: Vec<i64> = self
            .classes
            .iter()
            .map(|c| perms.iter().filter(|p| &cycle_type(p) == c).count() as i64)
            .collect();
        for a in 0..self.classes.len() {
            for b in 0..self.classes.len() {
                let s: i64 = self.rows.iter().map(|(_, chi)| chi[a] * chi[b]).sum();
                let want = if a == b { order / sizes[a] } else { 0 };
                if s != want {
                    return Err(Error::Validation(format!("character table of S_{n} fails column orthogonality")));
                }
            }
        }
        Ok(())
    }

    fn character(&self, row: usize, sigma: &[usize]) -> i64 {
        let ct = cycle_type(sigma);
        let c = self.classes.iter().position(|c| *c == ct).expect("every cycle type is a class");
        self.rows[row].1[c]
    }
}

#[derive(Clone, Debug)]
pub struct IsotypicProjector {
    pub label: Vec<usize>,
    pub projector: CMatrix,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct SectorProjectors {
    /// Projector onto the totally symmetric component.
    pub symmetric: CMatrix,
    /// Projector onto the totally antisymmetric component.
    pub antisymmetric: CMatrix,
    pub isotypic: Vec<IsotypicProjector>,
}

/// `Pi_l = (dim l / n!) sum_pi chi_l(pi) U_pi` for every partition `l` of `n`.
pub fn sector_projectors(d: usize, n: usize) -> Result<SectorProjectors> {
    let table = character_table(n)?;
    let qc = QuantumComposite::new(d, n)?;
    let us = qc.permutation_unitaries();
    let order = us.len() as f64;
    let mut isotypic = Vec::new();
    for (row, (label, chi)) in table.rows.iter().enumerate() {
        let dim_irrep = chi[0] as f64;
        let mut p = CMatrix::zeros(qc.hilbert_dim, qc.hilbert_dim);
        for (sigma, u) in &us {
            let c = table.character(row, sigma) as f64;
            if c != 0.0 {
                p += u * Complex64::new(c * dim_irrep / order, 0.0);
            }
        }
        let rank = p.trace().re.round() as usize;
        isotypic.push(IsotypicProjector { label: label.clone(), projector: p, rank });
    }
    let symmetric = isotypic[0].projector.clone();
    let antisymmetric = isotypic.last().expect("table is non-empty").projector.clone();
    Ok(SectorProjectors { symmetric, antisymmetric, isotypic })
}

/// Structural label of an exchange-eigenstate.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "label", content = "partition", rename_all = "snake_case")]
pub enum SectorLabel {
    SymmetricSector,
    AntisymmetricSector,
    MixedSector(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PureStateLabel {
    pub label: SectorLabel,
    pub weight: f64,
}

/// Labels a unit vector by the isotypic component containing it.
pub fn classify_symmetric_pure(qc: &QuantumComposite, psi: &nalgebra::DVector<Complex64>) -> Result<PureStateLabel> {
    if psi.len() != qc.hilbert_dim {
        return Err(Error::DimensionMismatch(format!("state has length {}, expected {}", psi.len(), qc.hilbert_dim)));
    }
    if (psi.norm() - 1.0).abs() >= qc.tolerance {
        return Err(Error::BadParams("state vector is not normalised".into()));
    }
    let sp = sector_projectors(qc.d, qc.n)?;
    let weight = |p: &CMatrix| (p * psi).norm_squared();
    let (ws, wa) = (weight(&sp.symmetric), weight(&sp.antisymmetric));
    if ws > 1.0 - qc.tolerance {
        return Ok(PureStateLabel { label: SectorLabel::SymmetricSector, weight: ws });
    }
    if wa > 1.0 - qc.tolerance {
        return Ok(PureStateLabel { label: SectorLabel::AntisymmetricSector, weight: wa });
    }
    let last = sp.isotypic.len() - 1;
    for iso in &sp.isotypic[1..last] {
        let w = weight(&iso.projector);
        if w > 1.0 - qc.tolerance {
            return Ok(PureStateLabel { label: SectorLabel::MixedSector(iso.label.clone()), weight: w });
        }
    }
    Err(Error::NotExchangeEigenstate { sym_weight: ws, anti_weight: wa })
}

#[derive(Clone, Debug)]
pub struct Lemma1Decomposition {
    pub p_s: f64,
    pub rho_s: Option<CMatrix>,
    pub p_a: f64,
    pub rho_a: Option<CMatrix>,
    /// `||rho - (S rho S + A rho A)||`, Frobenius norm.
    pub residual: f64,
}

/// `rho = tr(rho S) rho_s + tr(rho A) rho_a` for a swap-invariant density
/// matrix of two parties.
pub fn lemma1_decompose(qc: &QuantumComposite, rho: &CMatrix) -> Result<Lemma1Decomposition> {
    if qc.n != 2 {
        return Err(Error::UnsupportedArity(qc.n));
    }
    let dim = qc.hilbert_dim;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::DimensionMismatch(format!("expected a {dim}x{dim} matrix")));
    }
    let tol = qc.tolerance;
    if (rho - rho.adjoint()).norm() >= tol {
        return Err(Error::NotSymmetricState("matrix is not Hermitian".into()));
    }
    if (rho.trace().re - 1.0).abs() >= tol {
        return Err(Error::NotSymmetricState("trace is not one".into()));
    }
    if hermitian_eigenvalues(rho).iter().any(|&e| e < -tol) {
        return Err(Error::NotSymmetricState("matrix is not positive semidefinite".into()));
    }
    let p = qc.swap();
    if (&p * rho * &p - rho).norm() >= tol {
        return Err(Error::NotSymmetricState("P rho P differs from rho".into()));
    }
    let sp = sector_projectors(qc.d, 2)?;
    let (s, a) = (&sp.symmetric, &sp.antisymmetric);
    let srs = s * rho * s;
    let ara = a * rho * a;
    let residual = (rho - (&srs + &ara)).norm();
    let p_s = (rho * s).trace().re;
    let p_a = (rho * a).trace().re;
    let rho_s = (p_s >= tol).then(|| srs.unscale(p_s));
    let rho_a = (p_a >= tol).then(|| ara.unscale(p_a));
    Ok(Lemma1Decomposition { p_s, rho_s, p_a, rho_a, residual })
}

fn to_faer(m: &CMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin singular value decomposition `M = U diag(s) V†`, singular values
/// in nonincreasing order.
pub fn thin_svd(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let svd = to_faer(m).thin_svd().expect("singular value decomposition converges");
    let s: Vec<f64> = svd.S().column_vector().iter().map(|x| x.re).collect();
    (from_faer(svd.U()), s, from_faer(svd.V()))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    to_faer(h).self_adjoint_eigenvalues(faer::Side::Lower).expect("eigenvalue iteration converges")
}

/// Orthonormal basis of the range of a projector, as columns.
pub fn range_basis(p: &CMatrix, tol: f64) -> CMatrix {
    let (u, s, _) = thin_svd(p);
    let keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] > tol.max(1e-6)).collect();
    CMatrix::from_fn(p.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

fn ginibre(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Haar-distributed `k x k` unitary: QR of a Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(rng: &mut ChaCha8Rng, k: usize) -> CMatrix {
    if k == 0 {
        return CMatrix::zeros(0, 0);
    }
    let qr = ginibre(rng, k, k).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..k {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `U_s ⊕ U_a` with independent Haar blocks on the symmetric and
/// antisymmetric subspaces of `C^d ⊗ C^d`.
pub fn sample_symmetric_unitary(d: usize, seed: u64) -> Result<CMatrix> {
    let sp = sector_projectors(d, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs = range_basis(&sp.symmetric, DEFAULT_TOLERANCE);
    let va = range_basis(&sp.antisymmetric, DEFAULT_TOLERANCE);
    let us = haar_unitary(&mut rng, vs.ncols());
    let ua = haar_unitary(&mut rng, va.ncols());
    Ok(&vs * us * vs.adjoint() + &va * ua * va.adjoint())
}

/// Density matrix `G G† / tr(G G†)` from a Ginibre matrix.
pub fn random_density_matrix(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> CMatrix {
    let g = ginibre(rng, dim, rank.max(1));
    let rho = &g * g.adjoint();
    let t = rho.trace().re;
    rho.unscale(t)
}

/// A random swap-invariant state: `S rho S + A rho A` of a random `rho`.
pub fn random_symmetric_density_matrix(rng: &mut ChaCha8Rng, d: usize, rank: usize) -> CMatrix {
    let sp = sector_projectors(d, 2).expect("two parties are supported");
    let rho = random_density_matrix(rng, d * d, rank);
    &sp.symmetric * &rho * &sp.symmetric + &sp.antisymmetric * &rho * &sp.antisymmetric
}

/// A random unit vector inside the range of a projector.
pub fn random_state_in(rng: &mut ChaCha8Rng, p: &CMatrix) -> nalgebra::DVector<Complex64> {
    let v = range_basis(p, DEFAULT_TOLERANCE);
    let c = ginibre(rng, v.ncols(), 1);
    let psi = &v * c;
    let psi = nalgebra::DVector::from_column_slice(psi.as_slice());
    let n = psi.norm();
    psi.unscale(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ket(d: usize, amps: &[(usize, f64)]) -> DVector<Complex64> {
        let mut v = DVector::zeros(d);
        for &(i, a) in amps {
            v[i] = c(a);
        }
        v
    }

    #[test]
    fn two_party_ranks() {
        let sp = sector_projectors(2, 2).unwrap();
        assert_eq!((sp.isotypic[0].rank, sp.isotypic[1].rank), (3, 1));
        let sp = sector_projectors(3, 2).unwrap();
        assert_eq!((sp.isotypic[0].rank, sp.isotypic[1].rank), (6, 3));
    }

    #[test]
    fn three_qubit_ranks() {
        let sp = sector_projectors(2, 3).unwrap();
        let ranks: Vec<usize> = sp.isotypic.iter().map(|i| i.rank).collect();
        assert_eq!(ranks, vec![4, 4, 0]);
    }

    #[test]
    fn s_and_a_are_complementary() {
        let sp = sector_projectors(2, 2).unwrap();
        let (s, a) = (&sp.symmetric, &sp.antisymmetric);
        let id = CMatrix::identity(4, 4);
        assert!((s + a - &id).norm() < 1e-12);
        assert!((s * a).norm() < 1e-12);
        assert!((s * s - s).norm() < 1e-12);
        let p = QuantumComposite::new(2, 2).unwrap().swap();
        assert!((s - (&id + &p) * c(0.5)).norm() < 1e-12);
    }

    #[test]
    fn arity_five_is_unsupported() {
        assert_eq!(sector_projectors(2, 5).unwrap_err(), Error::UnsupportedArity(5));
    }

    #[test]
    fn bell_and_singlet_labels() {
        let qc = QuantumComposite::new(2, 2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ket(4, &[(1, r), (2, r)]);
        assert_eq!(classify_symmetric_pure(&qc, &bell).unwrap().label, SectorLabel::SymmetricSector);
        let singlet = ket(4, &[(1, r), (2, -r)]);
        assert_eq!(classify_symmetric_pure(&qc, &singlet).unwrap().label, SectorLabel::AntisymmetricSector);
        let e01 = ket(4, &[(1, 1.0)]);
        assert!(matches!(classify_symmetric_pure(&qc, &e01), Err(Error::NotExchangeEigenstate { .. })));
    }

    #[test]
    fn maximally_mixed_weights() {
        let qc = QuantumComposite::new(2, 2).unwrap();
        let rho = CMatrix::identity(4, 4) * c(0.25);
        let dec = lemma1_decompose(&qc, &rho).unwrap();
        assert!((dec.p_s - 0.75).abs() < 1e-12 && (dec.p_a - 0.25).abs() < 1e-12);
    }

    #[test]
    fn singlet_weights() {
        let qc = QuantumComposite::new(2, 2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = ket(4, &[(1, r), (2, -r)]);
        let rho = &s * s.adjoint();
        let dec = lemma1_decompose(&qc, &rho).unwrap();
        assert!(dec.p_s.abs() < 1e-12 && (dec.p_a - 1.0).abs() < 1e-12);
        assert!(dec.rho_s.is_none());
    }

    #[test]
    fn asymmetric_state_is_rejected() {
        let qc = QuantumComposite::new(2, 2).unwrap();
        let e01 = ket(4, &[(1, 1.0)]);
        let rho = &e01 * e01.adjoint();
        assert!(matches!(lemma1_decompose(&qc, &rho), Err(Error::NotSymmetricState(_))));
    }

    #[test]
    fn symmetric_unitary_commutes_with_swap() {
        let p = QuantumComposite::new(2, 2).unwrap().swap();
        for seed in 0..5 {
            let u = sample_symmetric_unitary(2, seed).unwrap();
            assert!((&u * &p - &p * &u).norm() < 1e-10);
            assert!((&u * u.adjoint() - CMatrix::identity(4, 4)).norm() < 1e-10);
        }
    }

    #[test]
    fn antisymmetric_block_is_a_phase() {
        let u = sample_symmetric_unitary(2, 3).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = ket(4, &[(1, r), (2, -r)]);
        let us = &u * &s;
        let overlap = (s.adjoint() * &us)[(0, 0)];
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(sample_symmetric_unitary(3, 11).unwrap(), sample_symmetric_unitary(3, 11).unwrap());
    }
}
