//! Symmetrisation idempotents, their splittings and their refinement into
//! orthogonal parts, for polytopal (exact) and quantum (floating) systems.

use serde::Serialize;

pub mod exact;
pub mod quantum;

/// Defects of the splitting, orthogonality and biproduct laws. Exact
/// backends report the largest absolute entry, quantum ones a Frobenius
/// norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawResiduals {
    /// `kappa iota - Sym`
    pub split_round_trip: f64,
    /// `iota kappa - I`
    pub split_identity: f64,
    /// `Part_i Part_j - delta_ij Part_i`, worst pair
    pub orthogonality: f64,
    /// `sum_i Part_i - Sym`
    pub completeness: f64,
    /// `p_i iota_j - delta_ij I`, worst pair
    pub biproduct_delta: f64,
    /// `sum_i iota_i p_i - I`
    pub biproduct_sum: f64,
    /// Round trips of each sector's own splitting.
    pub sector_splittings: f64,
}

impl LawResiduals {
    pub fn max(&self) -> f64 {
        [
            self.split_round_trip,
            self.split_identity,
            self.orthogonality,
            self.completeness,
            self.biproduct_delta,
            self.biproduct_sum,
            self.sector_splittings,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn all_zero(&self) -> bool {
        self.max() == 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartMass {
    pub min: f64,
    pub max: f64,
}

/// The parts read as a measurement of particle type.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NondisturbanceReport {
    /// `sum_i Part_i - Sym`
    pub sum_equals_sym: f64,
    /// Largest change of a symmetrised state under `sum_i Part_i`.
    pub disturbance: f64,
    /// Largest deviation of `sum_i u(Part_i s)` from one.
    pub total_mass_defect: f64,
    /// Range of `u(Part_i s)` over the states checked, per part. Single
    /// parts need not preserve normalisation.
    pub part_mass: Vec<PartMass>,
    pub states_checked: usize,
}

/// Results of composing `Sym_{n1} ⊗ Sym_{n2}` into `Sym_{n1+n2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub n1: usize,
    pub n2: usize,
    /// `Sym_n (Sym_{n1} ⊗ Sym_{n2}) = Sym_n`.
    pub absorption: f64,
    /// `Sym_n` also absorbs from the other side.
    pub absorption_left: f64,
    /// `J J' = I` on the `n`-party sector, with `J = iota_n (kappa_1 ⊗ kappa_2)`
    /// and `J' = (iota_1 ⊗ iota_2) kappa_n`.
    pub sector_identity: f64,
    /// `(kappa_1 ⊗ kappa_2) J' J (iota_1 ⊗ iota_2) = Sym_n`.
    pub lifted_round_trip: f64,
    pub sector_dims: [usize; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorStatus {
    /// The image of exactly one earlier sector.
    Preserved,
    /// The joint image of several earlier sectors.
    Merged,
    /// Not a union of images of earlier sectors.
    New,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorComparison {
    pub after: usize,
    pub before: Vec<usize>,
    pub status: SectorStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewSectorReport {
    pub experimental: bool,
    pub before_count: usize,
    pub after_count: usize,
    pub preserved: usize,
    pub merged: usize,
    pub new: usize,
    pub sectors: Vec<SectorComparison>,
}

impl NewSectorReport {
    fn new(before_count: usize, sectors: Vec<SectorComparison>) -> Self {
        let count = |s: SectorStatus| sectors.iter().filter(|c| c.status == s).count();
        NewSectorReport {
            experimental: true,
            before_count,
            after_count: sectors.len(),
            preserved: count(SectorStatus::Preserved),
            merged: count(SectorStatus::Merged),
            new: count(SectorStatus::New),
            sectors,
        }
    }
}

fn classify_sector(contained: usize, covers: bool) -> SectorStatus {
    match (contained, covers) {
        (1, true) => SectorStatus::Preserved,
        (n, true) if n > 1 => SectorStatus::Merged,
        _ => SectorStatus::New,
    }
}
