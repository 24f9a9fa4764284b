//! Symmetrisation as a superoperator on `n`-party operators, split through
//! its image and refined by the center of its fixed-point algebra.
//!
//! Operators are vectorised row-major, so `vec(A X B) = (A ⊗ Bᵀ) vec(X)`
//! and the channel `X -> U X U†` is `U ⊗ conj(U)`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{classify_sector, ExtensionReport, LawResiduals, NewSectorReport, NondisturbanceReport, PartMass, SectorComparison};
use crate::error::{Error, Result};
use crate::quantum::{hermitian_eigenvalues, sector_projectors, thin_svd, CMatrix, QuantumComposite};

/// Resamples of the random central element before giving up.
pub const CENTER_ATTEMPTS: usize = 5;

/// `X -> U X U†` on row-major vectorised operators.
pub fn superoperator(u: &CMatrix) -> CMatrix {
    u.kronecker(&u.map(|z| z.conj()))
}

/// Row-major vectorisation.
pub fn vec_op(x: &CMatrix) -> DVector<Complex64> {
    DVector::from_iterator(x.len(), (0..x.nrows()).flat_map(|i| (0..x.ncols()).map(move |j| x[(i, j)])))
}

pub fn unvec_op(v: &[Complex64], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| v[i * dim + j])
}

#[derive(Clone, Debug)]
pub struct QuantumIdempotent {
    pub matrix: CMatrix,
    pub d: usize,
    pub parties: usize,
    pub hilbert_dim: usize,
    pub perm_superops: Vec<CMatrix>,
    pub tolerance: f64,
}

/// `(1/n!) sum_sigma U_sigma ⊗ conj(U_sigma)`.
pub fn symmetrisation_idempotent(qc: &QuantumComposite) -> QuantumIdempotent {
    let perm_superops: Vec<CMatrix> = qc.permutation_unitaries().iter().map(|(_, u)| superoperator(u)).collect();
    let dim = perm_superops[0].nrows();
    let sum = perm_superops.iter().fold(CMatrix::zeros(dim, dim), |acc, m| acc + m);
    let matrix = sum.unscale(perm_superops.len() as f64);
    QuantumIdempotent { matrix, d: qc.d, parties: qc.n, hilbert_dim: qc.hilbert_dim, perm_superops, tolerance: qc.tolerance }
}

pub fn identity_idempotent(qc: &QuantumComposite) -> QuantumIdempotent {
    let dim = qc.hilbert_dim * qc.hilbert_dim;
    QuantumIdempotent { matrix: CMatrix::identity(dim, dim), d: qc.d, parties: qc.n, hilbert_dim: qc.hilbert_dim, perm_superops: Vec::new(), tolerance: qc.tolerance }
}

impl QuantumIdempotent {
    pub fn idempotence_residual(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).norm()
    }

    pub fn invariance_residual(&self) -> f64 {
        self.perm_superops
            .iter()
            .map(|r| (r * &self.matrix - &self.matrix).norm().max((&self.matrix * r - &self.matrix).norm()))
            .fold(0.0, f64::max)
    }
}

/// `E = kappa iota`, `kappa` with orthonormal columns spanning the image.
#[derive(Clone, Debug)]
pub struct QuantumSplitting {
    pub iota: CMatrix,
    pub kappa: CMatrix,
}

impl QuantumSplitting {
    pub fn sector_dim(&self) -> usize {
        self.kappa.ncols()
    }
}

fn image_basis(m: &CMatrix, tol: f64) -> CMatrix {
    let (u, s, _) = thin_svd(m);
    let keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] > tol).collect();
    CMatrix::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Splits through the image: singular values at or below `tol` count as
/// zero.
pub fn split(e: &CMatrix, tol: f64) -> Result<QuantumSplitting> {
    let r = (e * e - e).norm();
    if r >= tol {
        return Err(Error::NotIdempotent { residual: format!("{r:e}") });
    }
    let kappa = image_basis(e, tol);
    let iota = kappa.adjoint() * e;
    Ok(QuantumSplitting { iota, kappa })
}

#[derive(Clone, Debug)]
pub struct QuantumSector {
    pub part: CMatrix,
    pub splitting: QuantumSplitting,
    pub central_projector: CMatrix,
    pub operator_rank: usize,
    pub hilbert_dim: usize,
    /// Partition labelling the isotypic component this sector lives on.
    pub label: Option<Vec<usize>>,
    /// Dimension of the center of the sector's algebra; one for a full
    /// matrix algebra.
    pub center_dim: usize,
}

#[derive(Clone, Debug)]
pub struct QuantumDecomposition {
    pub sym: CMatrix,
    pub splitting: QuantumSplitting,
    pub sectors: Vec<QuantumSector>,
    /// Samples of the random central element that were needed.
    pub attempts: usize,
    pub tolerance: f64,
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

fn random_hermitian_in(rng: &mut ChaCha8Rng, basis: &[CMatrix]) -> CMatrix {
    let dim = basis[0].nrows();
    let mut h = CMatrix::zeros(dim, dim);
    for x in basis {
        let a: f64 = StandardNormal.sample(rng);
        let b: f64 = StandardNormal.sample(rng);
        h += (x + x.adjoint()) * Complex64::new(a / 2.0, 0.0);
        h += (x - x.adjoint()) * Complex64::new(0.0, -b / 2.0);
    }
    h
}

/// Null space (relative to the largest singular value) of the map sending
/// each candidate to its stacked commutators with `against`, returned as
/// combinations of the candidates.
fn commuting_combinations(candidates: &[CMatrix], against: &[CMatrix], tol: f64) -> Vec<CMatrix> {
    let dim = candidates[0].nrows();
    let block = dim * dim;
    let mut m = CMatrix::zeros(against.len() * block, candidates.len());
    for (j, x) in candidates.iter().enumerate() {
        for (p, y) in against.iter().enumerate() {
            let c = commutator(x, y);
            for a in 0..dim {
                for b in 0..dim {
                    m[(p * block + a * dim + b, j)] = c[(a, b)];
                }
            }
        }
    }
    let (_, s, v) = thin_svd(&m);
    let scale = s.iter().cloned().fold(1.0, f64::max);
    (0..s.len())
        .filter(|&i| s[i] <= tol * scale)
        .map(|i| {
            let mut acc = CMatrix::zeros(dim, dim);
            for (j, x) in candidates.iter().enumerate() {
                acc += x * v[(j, i)];
            }
            acc
        })
        .collect()
}

/// Center of the *-algebra spanned by `basis`. Two random Hermitian probes
/// cut the span down to a few candidates, which are then required to
/// commute with every basis element.
fn center(basis: &[CMatrix], tol: f64, rng: &mut ChaCha8Rng) -> Vec<CMatrix> {
    let probes = [random_hermitian_in(rng, basis), random_hermitian_in(rng, basis)];
    let candidates = commuting_combinations(basis, &probes, tol.sqrt());
    if candidates.is_empty() {
        return candidates;
    }
    commuting_combinations(&candidates, basis, tol)
}

fn operators_of(kappa: &CMatrix, dim: usize) -> Vec<CMatrix> {
    (0..kappa.ncols()).map(|j| unvec_op(kappa.column(j).as_slice(), dim)).collect()
}

/// Minimal projections of the center of a generic Hermitian central element
/// `h`, as Lagrange polynomials in `h` over its distinct eigenvalues.
/// `None` when the eigenvalue count does not match the center or a
/// resulting projector is inaccurate.
fn minimal_central_projectors(center: &[CMatrix], tol: f64, rng: &mut ChaCha8Rng) -> Option<Vec<CMatrix>> {
    let h = random_hermitian_in(rng, center);
    let dim = h.nrows();
    let ev = hermitian_eigenvalues(&h);
    let spread = ev.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let gap = 1e-6 * spread;
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for &x in &ev {
        match clusters.last_mut() {
            Some(c) if x - c[c.len() - 1] <= gap => c.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    if clusters.len() != center.len() {
        return None;
    }
    let values: Vec<f64> = clusters.iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
    let id = CMatrix::identity(dim, dim);
    let mut out = Vec::with_capacity(values.len());
    for (k, &lk) in values.iter().enumerate() {
        let mut p = id.clone();
        for (j, &lj) in values.iter().enumerate() {
            if j != k {
                p = (&h - &id * Complex64::new(lj, 0.0)) * p * Complex64::new(1.0 / (lk - lj), 0.0);
            }
        }
        let p = (&p + p.adjoint()) * Complex64::new(0.5, 0.0);
        if (&p * &p - &p).norm() >= tol {
            return None;
        }
        out.push(p);
    }
    Some(out)
}

/// Refines a permutation-invariant idempotent; see [`refine_idempotent`].
pub fn refine_parts(e: &QuantumIdempotent, seed: u64) -> Result<QuantumDecomposition> {
    if e.perm_superops.is_empty() || e.invariance_residual() >= e.tolerance {
        return Err(Error::NotSymmetrisation);
    }
    refine_idempotent(e, seed)
}

/// Splits `E`, finds the center of the algebra spanned by its image and
/// cuts `E` with each minimal central projection `z`: `Part(X) = z E(X) z`.
pub fn refine_idempotent(e: &QuantumIdempotent, seed: u64) -> Result<QuantumDecomposition> {
    let tol = e.tolerance;
    let dim = e.hilbert_dim;
    let splitting = split(&e.matrix, tol)?;
    let basis = operators_of(&splitting.kappa, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let z = center(&basis, tol, &mut rng);
    let mut found = None;
    let mut attempts = 0;
    while attempts < CENTER_ATTEMPTS {
        attempts += 1;
        if let Some(p) = minimal_central_projectors(&z, tol, &mut rng) {
            found = Some(p);
            break;
        }
    }
    let projectors = found.ok_or(Error::DegenerateCenter { attempts })?;

    let isotypic = sector_projectors(e.d, e.parties).map(|s| s.isotypic).unwrap_or_default();

    let mut sectors = Vec::new();
    for z in projectors {
        let part = superoperator(&z) * &e.matrix;
        let sp = split(&part, tol)?;
        let operator_rank = sp.sector_dim();
        let hilbert_dim = (operator_rank as f64).sqrt().round() as usize;
        let label_index = isotypic.iter().position(|iso| (&iso.projector - &z).norm() < tol.sqrt());
        let part_center = center(&operators_of(&sp.kappa, dim), tol, &mut rng).len();
        sectors.push((
            label_index.unwrap_or(usize::MAX),
            QuantumSector {
                part,
                splitting: sp,
                central_projector: z,
                operator_rank,
                hilbert_dim,
                label: label_index.map(|i| isotypic[i].label.clone()),
                center_dim: part_center,
            },
        ));
    }
    sectors.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.operator_rank.cmp(&a.1.operator_rank)));
    Ok(QuantumDecomposition {
        sym: e.matrix.clone(),
        splitting,
        sectors: sectors.into_iter().map(|(_, s)| s).collect(),
        attempts,
        tolerance: tol,
    })
}

#[derive(Clone, Debug)]
pub struct QuantumBiproduct {
    pub inclusions: Vec<CMatrix>,
    pub projections: Vec<CMatrix>,
}

impl QuantumDecomposition {
    pub fn hilbert_dims(&self) -> Vec<usize> {
        self.sectors.iter().map(|s| s.hilbert_dim).collect()
    }

    pub fn operator_ranks(&self) -> Vec<usize> {
        self.sectors.iter().map(|s| s.operator_rank).collect()
    }

    pub fn biproduct(&self) -> QuantumBiproduct {
        let s = &self.splitting;
        QuantumBiproduct {
            inclusions: self.sectors.iter().map(|sec| &s.iota * &sec.splitting.kappa).collect(),
            projections: self.sectors.iter().map(|sec| &sec.splitting.iota * &s.kappa).collect(),
        }
    }

    /// Frobenius norms of each law's defect.
    pub fn law_residuals(&self) -> LawResiduals {
        let s = &self.splitting;
        let r = s.sector_dim();
        let dim = self.sym.nrows();
        let mut orth: f64 = 0.0;
        let mut sum = CMatrix::zeros(dim, dim);
        for (i, a) in self.sectors.iter().enumerate() {
            sum += &a.part;
            for (j, b) in self.sectors.iter().enumerate() {
                let prod = &a.part * &b.part;
                let d = if i == j { (prod - &a.part).norm() } else { prod.norm() };
                orth = orth.max(d);
            }
        }
        let bp = self.biproduct();
        let mut delta: f64 = 0.0;
        let mut bsum = CMatrix::zeros(r, r);
        for (i, p) in bp.projections.iter().enumerate() {
            bsum += &bp.inclusions[i] * p;
            for (j, inc) in bp.inclusions.iter().enumerate() {
                let prod = p * inc;
                let d = if i == j { (&prod - CMatrix::identity(prod.nrows(), prod.ncols())).norm() } else { prod.norm() };
                delta = delta.max(d);
            }
        }
        let mut sector_split: f64 = 0.0;
        for sec in &self.sectors {
            let sp = &sec.splitting;
            sector_split = sector_split.max((&sp.kappa * &sp.iota - &sec.part).norm());
            let k = sp.sector_dim();
            sector_split = sector_split.max((&sp.iota * &sp.kappa - CMatrix::identity(k, k)).norm());
        }
        LawResiduals {
            split_round_trip: (&s.kappa * &s.iota - &self.sym).norm(),
            split_identity: (&s.iota * &s.kappa - CMatrix::identity(r, r)).norm(),
            orthogonality: orth,
            completeness: (sum - &self.sym).norm(),
            biproduct_delta: delta,
            biproduct_sum: (bsum - CMatrix::identity(r, r)).norm(),
            sector_splittings: sector_split,
        }
    }
}

/// Checks the parts on the given density matrices: together they leave
/// `Sym(rho)` unchanged and keep its trace.
pub fn parts_as_measurement(dec: &QuantumDecomposition, states: &[CMatrix]) -> NondisturbanceReport {
    let dim = dec.sym.nrows();
    let total = dec.sectors.iter().fold(CMatrix::zeros(dim, dim), |acc, s| acc + &s.part);
    let hdim = states.first().map_or(0, |s| s.nrows());
    let mut disturbance: f64 = 0.0;
    let mut defect: f64 = 0.0;
    let mut masses = vec![(f64::INFINITY, f64::NEG_INFINITY); dec.sectors.len()];
    for rho in states {
        let s = &dec.sym * vec_op(rho);
        disturbance = disturbance.max((&total * &s - &s).norm());
        let mut acc = 0.0;
        for (k, sec) in dec.sectors.iter().enumerate() {
            let t = unvec_op((&sec.part * &s).as_slice(), hdim).trace().re;
            masses[k].0 = masses[k].0.min(t);
            masses[k].1 = masses[k].1.max(t);
            acc += t;
        }
        defect = defect.max((acc - rho.trace().re).abs());
    }
    NondisturbanceReport {
        sum_equals_sym: (total - &dec.sym).norm(),
        disturbance,
        total_mass_defect: defect,
        part_mass: masses.into_iter().map(|(min, max)| PartMass { min, max }).collect(),
        states_checked: states.len(),
    }
}

/// Position of `vec(X1) ⊗ vec(X2)` entries inside `vec(X1 ⊗ X2)`.
fn operator_kron_positions(d1: usize, d2: usize) -> Vec<usize> {
    let d = d1 * d2;
    let mut to = vec![0usize; d * d];
    for i1 in 0..d1 {
        for j1 in 0..d1 {
            for i2 in 0..d2 {
                for j2 in 0..d2 {
                    to[(i1 * d1 + j1) * d2 * d2 + i2 * d2 + j2] = (i1 * d2 + i2) * d + j1 * d2 + j2;
                }
            }
        }
    }
    to
}

/// `m1 ⊗ m2` with rows and/or columns that index operators on the two
/// systems moved to the composite's operator ordering. Sector-coordinate
/// sides keep the plain Kronecker order.
fn reshuffled_kron(m1: &CMatrix, m2: &CMatrix, d1: usize, d2: usize, rows: bool, cols: bool) -> CMatrix {
    let k = m1.kronecker(m2);
    let to = operator_kron_positions(d1, d2);
    let row_of = |a: usize| if rows { to[a] } else { a };
    let col_of = |b: usize| if cols { to[b] } else { b };
    let mut out = CMatrix::zeros(k.nrows(), k.ncols());
    for a in 0..k.nrows() {
        for b in 0..k.ncols() {
            out[(row_of(a), col_of(b))] = k[(a, b)];
        }
    }
    out
}

/// Tensor product of superoperators on `d1`- and `d2`-dimensional systems,
/// as a superoperator on the `d1 d2`-dimensional composite.
pub fn superop_kron(s1: &CMatrix, d1: usize, s2: &CMatrix, d2: usize) -> CMatrix {
    reshuffled_kron(s1, s2, d1, d2, true, true)
}

/// Maps between `n1 + n2` parties of dimension `d` and the product of the
/// `n1`- and `n2`-party symmetrised systems; residuals are Frobenius norms.
pub fn extend_symmetrisation(d: usize, n1: usize, n2: usize, tol: f64) -> Result<ExtensionReport> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::BadParams("both groups need at least one party".into()));
    }
    let sym_of = |n: usize| -> Result<CMatrix> {
        if n == 1 {
            Ok(CMatrix::identity(d * d, d * d))
        } else {
            Ok(symmetrisation_idempotent(&QuantumComposite::new(d, n)?).matrix)
        }
    };
    let (e1, e2, en) = (sym_of(n1)?, sym_of(n2)?, sym_of(n1 + n2)?);
    let (h1, h2) = (d.pow(n1 as u32), d.pow(n2 as u32));
    let (s1, s2, sn) = (split(&e1, tol)?, split(&e2, tol)?, split(&en, tol)?);
    let e12 = superop_kron(&e1, h1, &e2, h2);
    let kk = reshuffled_kron(&s1.kappa, &s2.kappa, h1, h2, true, false);
    let ii = reshuffled_kron(&s1.iota, &s2.iota, h1, h2, false, true);
    let j = &sn.iota * &kk;
    let j_rev = &ii * &sn.kappa;
    let lifted = &kk * &j_rev * &j * &ii;
    let rn = sn.sector_dim();
    Ok(ExtensionReport {
        n1,
        n2,
        absorption: (&en * &e12 - &en).norm(),
        absorption_left: (&e12 * &en - &en).norm(),
        sector_identity: (&j * &j_rev - CMatrix::identity(rn, rn)).norm(),
        lifted_round_trip: (lifted - &en).norm(),
        sector_dims: [s1.sector_dim(), s2.sector_dim(), rn],
    })
}

/// Compares sectors after symmetrising with those before, pushed through
/// `Sym`. Experimental.
pub fn compare_decompositions(before: &QuantumDecomposition, after: &QuantumDecomposition) -> NewSectorReport {
    let tol = after.tolerance;
    let pushed: Vec<CMatrix> = before.sectors.iter().map(|s| image_basis(&(&after.sym * &s.splitting.kappa), tol.sqrt())).collect();
    let sectors = after
        .sectors
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let w = &s.splitting.kappa;
            let proj = w * w.adjoint();
            let contained: Vec<usize> = (0..pushed.len())
                .filter(|&j| pushed[j].ncols() > 0 && (&pushed[j] - &proj * &pushed[j]).norm() < tol.sqrt())
                .collect();
            let covers = !contained.is_empty() && {
                let cols: usize = contained.iter().map(|&j| pushed[j].ncols()).sum();
                let mut joined = CMatrix::zeros(w.nrows(), cols);
                let mut at = 0;
                for &j in &contained {
                    joined.columns_mut(at, pushed[j].ncols()).copy_from(&pushed[j]);
                    at += pushed[j].ncols();
                }
                image_basis(&joined, tol.sqrt()).ncols() == w.ncols()
            };
            SectorComparison { after: k, before: contained.clone(), status: classify_sector(contained.len(), covers) }
        })
        .collect();
    NewSectorReport::new(before.sectors.len(), sectors)
}
