//! Symmetrisation idempotents on polytopal composites, in exact arithmetic.

use num_traits::{One, Zero};

use super::{
    classify_sector, ExtensionReport, LawResiduals, NewSectorReport, NondisturbanceReport, PartMass, SectorComparison,
};
use crate::error::{Error, Result};
use crate::gpt::CompositeSystem;
use crate::group::all_permutations;
use crate::linalg::scalar::{dot, frac, to_f64};
use crate::linalg::{matroid_components, Matrix, Polytope, Scalar, Subspace, Vector};
use crate::orbits::permutation_operator;

/// An idempotent on a composite's vector space, together with the states
/// whose image it is refined against.
#[derive(Clone, Debug)]
pub struct ExactIdempotent {
    pub matrix: Matrix,
    pub perm_ops: Vec<Matrix>,
    pub states: Vec<Vector>,
    pub unit_effect: Vector,
}

fn average(ops: &[Matrix]) -> Matrix {
    let dim = ops[0].rows();
    let sum = ops.iter().fold(Matrix::zeros(dim, dim), |acc, m| &acc + m);
    sum.scaled(&frac(1, ops.len() as i64))
}

/// `(1/n!) sum_sigma R(sigma)` for `n` parties of local dimension `d`.
pub fn symmetriser(d: usize, n: usize) -> Matrix {
    let ops: Vec<Matrix> = all_permutations(n).iter().map(|s| permutation_operator(d, n, s)).collect();
    average(&ops)
}

pub fn symmetrisation_idempotent(c: &CompositeSystem) -> ExactIdempotent {
    let perm_ops: Vec<Matrix> = c.perm_ops.values().cloned().collect();
    ExactIdempotent {
        matrix: average(&perm_ops),
        perm_ops,
        states: c.vertices.vertices().to_vec(),
        unit_effect: c.unit_effect.clone(),
    }
}

/// The identity on the composite: its refinement is the decomposition the
/// composite already has before symmetrising.
pub fn identity_idempotent(c: &CompositeSystem) -> ExactIdempotent {
    ExactIdempotent {
        matrix: Matrix::identity(c.dim),
        perm_ops: Vec::new(),
        states: c.vertices.vertices().to_vec(),
        unit_effect: c.unit_effect.clone(),
    }
}

impl ExactIdempotent {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_idempotent(&self) -> bool {
        &self.matrix * &self.matrix == self.matrix
    }

    /// `R(sigma) E = E = E R(sigma)` for every stored permutation operator.
    pub fn is_permutation_invariant(&self) -> bool {
        !self.perm_ops.is_empty()
            && self.perm_ops.iter().all(|r| r * &self.matrix == self.matrix && &self.matrix * r == self.matrix)
    }
}

/// `E = kappa iota` with `iota kappa = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSplitting {
    pub iota: Matrix,
    pub kappa: Matrix,
}

impl ExactSplitting {
    pub fn sector_dim(&self) -> usize {
        self.iota.rows()
    }
}

/// Rank factorisation: `kappa` is the pivot columns of `E`, `iota` the
/// non-zero rows of its reduced echelon form.
pub fn split(e: &Matrix) -> Result<ExactSplitting> {
    if &(e * e) != e {
        let r = to_f64(&(&(e * e) - e).abs_max());
        return Err(Error::NotIdempotent { residual: format!("{r:e}") });
    }
    let (kappa, iota) = e.rank_factorization();
    Ok(ExactSplitting { iota, kappa })
}

#[derive(Clone, Debug)]
pub struct ExactSector {
    pub part: Matrix,
    pub splitting: ExactSplitting,
    /// Extreme rays of the image cone lying in this block, in the
    /// coordinates of the full splitting.
    pub rays: Vec<Vector>,
}

impl ExactSector {
    pub fn dim(&self) -> usize {
        self.splitting.sector_dim()
    }
}

/// Evidence that no sector splits further.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ExactCertificate {
    /// Every block is a single matroid component.
    pub blocks_connected: bool,
    /// The unit effect is non-zero on every block and normalises its rays.
    pub unit_consistent: bool,
    pub ray_count: usize,
}

#[derive(Clone, Debug)]
pub struct ExactDecomposition {
    pub sym: Matrix,
    pub splitting: ExactSplitting,
    pub sectors: Vec<ExactSector>,
    pub certificate: ExactCertificate,
    /// Block sizes and bases as found, for the biproduct maps.
    basis: Matrix,
    basis_inv: Matrix,
    offsets: Vec<usize>,
}

/// Refines a permutation-invariant idempotent; see [`refine_idempotent`].
pub fn refine_parts(e: &ExactIdempotent) -> Result<ExactDecomposition> {
    if !e.is_permutation_invariant() {
        return Err(Error::NotSymmetrisation);
    }
    refine_idempotent(e)
}

/// Splits `E`, takes the extreme rays of the image cone in sector
/// coordinates, and projects onto the spans of its matroid components along
/// the others: `Part_k = kappa D_k iota`.
pub fn refine_idempotent(e: &ExactIdempotent) -> Result<ExactDecomposition> {
    let splitting = split(&e.matrix)?;
    let r = splitting.sector_dim();
    let images: Vec<Vector> = e.states.iter().map(|v| splitting.iota.apply(v)).collect();
    let rays = Polytope::hull_of(r, &images).sorted().vertices().to_vec();
    let blocks = matroid_components(&rays);

    let mut columns: Vec<Vector> = Vec::new();
    let mut offsets = vec![0];
    for b in &blocks {
        let vs: Vec<Vector> = b.iter().map(|&i| rays[i].clone()).collect();
        let basis = Subspace::span(r, &vs);
        columns.extend(basis.basis().iter().cloned());
        offsets.push(columns.len());
    }
    let basis = Matrix::from_columns(r, &columns);
    let basis_inv = basis
        .inverse()
        .ok_or_else(|| Error::Validation("matroid blocks do not span the sector space".into()))?;

    let unit_sector = splitting.kappa.transpose().apply(&e.unit_effect);
    let mut sectors = Vec::new();
    let mut connected = true;
    let mut unit_ok = true;
    for (k, b) in blocks.iter().enumerate() {
        let cols: Vec<usize> = (offsets[k]..offsets[k + 1]).collect();
        let bk = basis.select_columns(&cols);
        let bk_dual = basis_inv.select_rows(&cols);
        let kappa_k = &splitting.kappa * &bk;
        let iota_k = &bk_dual * &splitting.iota;
        let part = &kappa_k * &iota_k;
        let block_rays: Vec<Vector> = b.iter().map(|&i| rays[i].clone()).collect();
        connected &= matroid_components(&block_rays).len() == 1;
        unit_ok &= block_rays.iter().all(|y| dot(&unit_sector, y).is_one());
        unit_ok &= !bk.transpose().apply(&unit_sector).iter().all(Zero::is_zero);
        sectors.push(ExactSector { part, splitting: ExactSplitting { iota: iota_k, kappa: kappa_k }, rays: block_rays });
    }
    Ok(ExactDecomposition {
        sym: e.matrix.clone(),
        splitting,
        sectors,
        certificate: ExactCertificate { blocks_connected: connected, unit_consistent: unit_ok, ray_count: rays.len() },
        basis,
        basis_inv,
        offsets,
    })
}

/// Inclusions `iota_i` and projections `p_i` between each sector and the
/// symmetrised system.
#[derive(Clone, Debug)]
pub struct ExactBiproduct {
    pub inclusions: Vec<Matrix>,
    pub projections: Vec<Matrix>,
}

fn residual(a: &Matrix, b: &Matrix) -> f64 {
    to_f64(&(a - b).abs_max())
}

impl ExactDecomposition {
    pub fn sector_dims(&self) -> Vec<usize> {
        self.sectors.iter().map(ExactSector::dim).collect()
    }

    pub fn biproduct(&self) -> ExactBiproduct {
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        for k in 0..self.sectors.len() {
            let cols: Vec<usize> = (self.offsets[k]..self.offsets[k + 1]).collect();
            inclusions.push(self.basis.select_columns(&cols));
            projections.push(self.basis_inv.select_rows(&cols));
        }
        ExactBiproduct { inclusions, projections }
    }

    /// Maximum absolute entry of each law's defect; zero means it holds
    /// exactly.
    pub fn law_residuals(&self) -> LawResiduals {
        let s = &self.splitting;
        let r = s.sector_dim();
        let dim = self.sym.rows();
        let mut orth: f64 = 0.0;
        let mut sum = Matrix::zeros(dim, dim);
        for (i, a) in self.sectors.iter().enumerate() {
            sum = &sum + &a.part;
            for (j, b) in self.sectors.iter().enumerate() {
                let want = if i == j { a.part.clone() } else { Matrix::zeros(dim, dim) };
                orth = orth.max(residual(&(&a.part * &b.part), &want));
            }
        }
        let bp = self.biproduct();
        let mut delta: f64 = 0.0;
        let mut bsum = Matrix::zeros(r, r);
        for (i, p) in bp.projections.iter().enumerate() {
            bsum = &bsum + &(&bp.inclusions[i] * p);
            for (j, inc) in bp.inclusions.iter().enumerate() {
                let prod = p * inc;
                let want = if i == j { Matrix::identity(prod.rows()) } else { Matrix::zeros(prod.rows(), prod.cols()) };
                delta = delta.max(residual(&prod, &want));
            }
        }
        let mut sector_split: f64 = 0.0;
        for sec in &self.sectors {
            let sp = &sec.splitting;
            sector_split = sector_split.max(residual(&(&sp.kappa * &sp.iota), &sec.part));
            sector_split = sector_split.max(residual(&(&sp.iota * &sp.kappa), &Matrix::identity(sec.dim())));
        }
        LawResiduals {
            split_round_trip: residual(&(&s.kappa * &s.iota), &self.sym),
            split_identity: residual(&(&s.iota * &s.kappa), &Matrix::identity(r)),
            orthogonality: orth,
            completeness: residual(&sum, &self.sym),
            biproduct_delta: delta,
            biproduct_sum: residual(&bsum, &Matrix::identity(r)),
            sector_splittings: sector_split,
        }
    }
}

/// Checks that the parts together leave every symmetrised state unchanged,
/// and records how much unit-effect weight each part keeps.
pub fn parts_as_measurement(dec: &ExactDecomposition, states: &[Vector], unit_effect: &[Scalar]) -> NondisturbanceReport {
    let dim = dec.sym.rows();
    let total = dec.sectors.iter().fold(Matrix::zeros(dim, dim), |acc, s| &acc + &s.part);
    let mut disturbance: f64 = 0.0;
    let mut masses: Vec<(f64, f64)> = vec![(f64::INFINITY, f64::NEG_INFINITY); dec.sectors.len()];
    let mut mass_sum: f64 = 0.0;
    for v in states {
        let s = dec.sym.apply(v);
        let back = total.apply(&s);
        disturbance = disturbance.max(to_f64(&crate::linalg::scalar::abs_max(&crate::linalg::scalar::sub(&back, &s))));
        let mut acc = Scalar::zero();
        for (k, sec) in dec.sectors.iter().enumerate() {
            let m = dot(unit_effect, &sec.part.apply(&s));
            let f = to_f64(&m);
            masses[k].0 = masses[k].0.min(f);
            masses[k].1 = masses[k].1.max(f);
            acc += m;
        }
        mass_sum = mass_sum.max((to_f64(&acc) - 1.0).abs());
    }
    NondisturbanceReport {
        sum_equals_sym: residual(&total, &dec.sym),
        disturbance,
        total_mass_defect: mass_sum,
        part_mass: masses.into_iter().map(|(min, max)| PartMass { min, max }).collect(),
        states_checked: states.len(),
    }
}

pub fn extend_symmetrisation(d: usize, n1: usize, n2: usize) -> Result<ExtensionReport> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::BadParams("both groups need at least one party".into()));
    }
    let sym_of = |n: usize| if n == 1 { Matrix::identity(d) } else { symmetriser(d, n) };
    let (e1, e2, en) = (sym_of(n1), sym_of(n2), symmetriser(d, n1 + n2));
    let (s1, s2, sn) = (split(&e1)?, split(&e2)?, split(&en)?);
    let e12 = e1.kron(&e2);
    let j = &sn.iota * &s1.kappa.kron(&s2.kappa);
    let j_rev = &s1.iota.kron(&s2.iota) * &sn.kappa;
    let lifted = &(&(&s1.kappa.kron(&s2.kappa) * &j_rev) * &j) * &s1.iota.kron(&s2.iota);
    Ok(ExtensionReport {
        n1,
        n2,
        absorption: residual(&(&en * &e12), &en),
        absorption_left: residual(&(&e12 * &en), &en),
        sector_identity: residual(&(&j * &j_rev), &Matrix::identity(sn.sector_dim())),
        lifted_round_trip: residual(&lifted, &en),
        sector_dims: [s1.sector_dim(), s2.sector_dim(), sn.sector_dim()],
    })
}

/// Compares the sectors after symmetrising with those before, pushed
/// through `Sym`. Experimental.
pub fn compare_decompositions(before: &ExactDecomposition, after: &ExactDecomposition) -> NewSectorReport {
    let dim = after.sym.rows();
    let pushed: Vec<Subspace> = before
        .sectors
        .iter()
        .map(|s| Subspace::span(dim, &(&after.sym * &s.splitting.kappa).column_vectors()))
        .collect();
    let sectors = after
        .sectors
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let w = Subspace::span(dim, &s.splitting.kappa.column_vectors());
            let contained: Vec<usize> =
                (0..pushed.len()).filter(|&j| pushed[j].dim() > 0 && w.contains_subspace(&pushed[j])).collect();
            let joined: Vec<Vector> = contained.iter().flat_map(|&j| pushed[j].basis().to_vec()).collect();
            let covers = Subspace::span(dim, &joined).same_as(&w);
            SectorComparison { after: k, before: contained.clone(), status: classify_sector(contained.len(), covers) }
        })
        .collect();
    NewSectorReport::new(before.sectors.len(), sectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::classical;
    use crate::linalg::scalar::vec_from_i64;

    #[test]
    fn two_bit_symmetriser() {
        let e = symmetriser(2, 2);
        let p = permutation_operator(2, 2, &[1, 0]);
        assert_eq!(e, (&Matrix::identity(4) + &p).scaled(&frac(1, 2)));
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn split_of_identity() {
        let s = split(&Matrix::identity(3)).unwrap();
        assert_eq!(s.sector_dim(), 3);
        assert!(s.iota.is_identity() && s.kappa.is_identity());
    }

    #[test]
    fn split_rejects_non_idempotent() {
        let m = Matrix::from_i64(2, 2, &[1, 1, 0, 1]);
        assert!(matches!(split(&m), Err(Error::NotIdempotent { .. })));
    }

    #[test]
    fn split_round_trip_on_two_bits() {
        let e = symmetriser(2, 2);
        let s = split(&e).unwrap();
        assert_eq!(s.sector_dim(), 3);
        assert_eq!(&s.kappa * &s.iota, e);
        assert!((&s.iota * &s.kappa).is_identity());
    }

    #[test]
    fn two_bits_refine_into_three_rays() {
        let t = classical(2, 2).unwrap();
        let e = symmetrisation_idempotent(&t.composite);
        let dec = refine_parts(&e).unwrap();
        assert_eq!(dec.sector_dims(), vec![1, 1, 1]);
        let images: Vec<Vector> = dec.sectors.iter().map(|s| {
            let col = s.splitting.kappa.column(0);
            let norm = dot(&t.composite.unit_effect, &col);
            col.iter().map(|x| x / &norm).collect()
        }).collect();
        let half = frac(1, 2);
        let mut want = vec![vec_from_i64(&[1, 0, 0, 0]), vec![Scalar::zero(), half.clone(), half, Scalar::zero()], vec_from_i64(&[0, 0, 0, 1])];
        want.sort();
        let mut got = images;
        got.sort();
        assert_eq!(got, want);
        assert!(dec.law_residuals().all_zero());
    }

    #[test]
    fn refine_requires_permutation_invariance() {
        let t = classical(2, 2).unwrap();
        let e = identity_idempotent(&t.composite);
        assert!(matches!(refine_parts(&e), Err(Error::NotSymmetrisation)));
    }

    #[test]
    fn two_bits_comparison() {
        let t = classical(2, 2).unwrap();
        let before = refine_idempotent(&identity_idempotent(&t.composite)).unwrap();
        let after = refine_parts(&symmetrisation_idempotent(&t.composite)).unwrap();
        let rep = compare_decompositions(&before, &after);
        assert_eq!((rep.preserved, rep.merged, rep.new), (2, 1, 0));
    }

    #[test]
    fn identity_comparison_has_no_new_sectors() {
        let t = classical(2, 2).unwrap();
        let before = refine_idempotent(&identity_idempotent(&t.composite)).unwrap();
        let rep = compare_decompositions(&before, &before);
        assert_eq!((rep.preserved, rep.merged, rep.new), (4, 0, 0));
    }

    #[test]
    fn two_plus_one_bits() {
        let r = extend_symmetrisation(2, 2, 1).unwrap();
        assert_eq!(r.absorption, 0.0);
        assert_eq!(r.sector_identity, 0.0);
        assert_eq!(r.lifted_round_trip, 0.0);
        assert_eq!(r.sector_dims, [3, 2, 4]);
    }
}
