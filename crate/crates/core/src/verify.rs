//! Randomised and structural property suites behind `gptp verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{load_builtin, BuiltinParams, Theory};
use crate::error::Result;
use crate::gpt::validate_theory;
use crate::idempotent::{exact, quantum as qidem};
use crate::quantum::{
    classify_symmetric_pure, lemma1_decompose, random_state_in, random_symmetric_density_matrix,
    sample_symmetric_unitary, sector_projectors, CMatrix, QuantumComposite, SectorLabel,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// Largest residual seen, when the property has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<f64>,
}

impl PropertyResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(PropertyResult::ok)
    }
}

struct Tally {
    name: String,
    passed: usize,
    total: usize,
    worst: Option<f64>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally { name: name.into(), passed: 0, total: 0, worst: None }
    }

    fn record(&mut self, ok: bool) {
        self.total += 1;
        self.passed += usize::from(ok);
    }

    fn residual(&mut self, r: f64, bound: f64) {
        self.worst = Some(self.worst.map_or(r, |w| w.max(r)));
        self.record(r < bound);
    }

    fn finish(self) -> PropertyResult {
        PropertyResult { name: self.name, passed: self.passed, total: self.total, worst: self.worst }
    }
}

/// Swap-invariant states split into their sector components, and rank-one
/// ones are exchange eigenstates whose label survives symmetric unitaries.
/// Trials alternate between `d = 2` and `d = 3`.
pub fn lemma1_suite(seed: u64, trials: usize, tol: f64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut recon = Tally::new("reconstruction");
    let mut weights = Tally::new("sector_weights_sum_to_one");
    let mut rank_one = Tally::new("rank_one_is_exchange_eigenstate");
    let mut preserved = Tally::new("label_preserved_by_symmetric_unitary");
    for t in 0..trials {
        let d = 2 + t % 2;
        let qc = QuantumComposite::new(d, 2).expect("valid dimensions").with_tolerance(tol);
        let rank = rng.random_range(1..=d * d);
        let rho = random_symmetric_density_matrix(&mut rng, d, rank);
        match lemma1_decompose(&qc, &rho) {
            Ok(dec) => {
                recon.residual(dec.residual, tol);
                weights.residual((dec.p_s + dec.p_a - 1.0).abs(), tol);
            }
            Err(_) => {
                recon.record(false);
                weights.record(false);
            }
        }

        let sp = sector_projectors(d, 2).expect("two parties are supported");
        let (proj, want) = if rng.random_bool(0.5) {
            (&sp.symmetric, SectorLabel::SymmetricSector)
        } else {
            (&sp.antisymmetric, SectorLabel::AntisymmetricSector)
        };
        let psi = random_state_in(&mut rng, proj);
        let pure: CMatrix = &psi * psi.adjoint();
        let as_state = lemma1_decompose(&qc, &pure).is_ok();
        let label = classify_symmetric_pure(&qc, &psi).map(|l| l.label);
        rank_one.record(as_state && label.as_ref().is_ok_and(|l| *l == want));

        let u = sample_symmetric_unitary(d, rng.random()).expect("two parties are supported");
        let moved = &u * &psi;
        preserved.record(classify_symmetric_pure(&qc, &moved).is_ok_and(|l| l.label == want));
    }
    SuiteReport {
        suite: "lemma1".into(),
        properties: vec![recon.finish(), weights.finish(), rank_one.finish(), preserved.finish()],
    }
}

/// Theories whose symmetrisation is split and refined by the biproduct
/// suite.
pub fn biproduct_theories() -> Vec<(&'static str, BuiltinParams)> {
    let p = |d: Option<usize>, parties: Option<usize>| BuiltinParams { d, parties };
    vec![
        ("classical", p(Some(2), Some(2))),
        ("classical", p(Some(3), Some(2))),
        ("classical", p(Some(2), Some(3))),
        ("boxworld", p(None, None)),
        ("spekkens", p(None, None)),
        ("qubit", p(None, Some(2))),
        ("qubit", p(None, Some(3))),
    ]
}

/// Splitting, orthogonality, completeness and biproduct laws for every
/// constructed symmetrisation, plus the 2+1 composition identities.
pub fn biproduct_suite(seed: u64, tol: f64) -> Result<SuiteReport> {
    let mut exact_laws = Tally::new("exact_laws_hold_exactly");
    let mut quantum_laws = Tally::new("quantum_laws_within_tolerance");
    let mut certificates = Tally::new("refinement_certificates");
    let mut measurement = Tally::new("parts_form_nondisturbing_measurement");
    for (name, params) in biproduct_theories() {
        match load_builtin(name, &params)? {
            Theory::Polytopal(t) => {
                let e = exact::symmetrisation_idempotent(&t.composite);
                let dec = exact::refine_parts(&e)?;
                exact_laws.record(dec.law_residuals().all_zero());
                certificates.record(dec.certificate.blocks_connected && dec.certificate.unit_consistent);
                let rep = exact::parts_as_measurement(&dec, &e.states, &e.unit_effect);
                measurement.record(rep.sum_equals_sym == 0.0 && rep.disturbance == 0.0 && rep.total_mass_defect == 0.0);
            }
            Theory::Quantum(qc) => {
                let qc = qc.with_tolerance(tol);
                let e = qidem::symmetrisation_idempotent(&qc);
                let dec = qidem::refine_parts(&e, seed)?;
                quantum_laws.residual(dec.law_residuals().max(), tol);
                certificates.record(dec.sectors.iter().all(|s| s.center_dim == 1));
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let states: Vec<CMatrix> =
                    (0..8).map(|_| crate::quantum::random_density_matrix(&mut rng, qc.hilbert_dim, qc.hilbert_dim)).collect();
                let rep = qidem::parts_as_measurement(&dec, &states);
                measurement.record(rep.sum_equals_sym < tol && rep.disturbance < tol && rep.total_mass_defect < tol);
            }
        }
    }
    let mut ext = Tally::new("two_plus_one_composition");
    let q = qidem::extend_symmetrisation(2, 2, 1, tol)?;
    ext.residual(q.absorption.max(q.absorption_left).max(q.sector_identity).max(q.lifted_round_trip), tol);
    let c = exact::extend_symmetrisation(2, 2, 1)?;
    ext.residual(c.absorption.max(c.absorption_left).max(c.sector_identity).max(c.lifted_round_trip), f64::MIN_POSITIVE);
    Ok(SuiteReport {
        suite: "biproduct".into(),
        properties: vec![exact_laws.finish(), quantum_laws.finish(), certificates.finish(), measurement.finish(), ext.finish()],
    })
}

/// Every built-in loads and validates; quantum isotypic projectors are
/// orthogonal and complete; polytopal theories survive an export round trip.
pub fn catalog_suite(tol: f64) -> Result<SuiteReport> {
    let mut valid = Tally::new("polytopal_builtins_validate");
    let mut round_trip = Tally::new("export_round_trip");
    let mut projectors = Tally::new("isotypic_projectors_orthogonal_and_complete");
    let p = |d: Option<usize>, parties: Option<usize>| BuiltinParams { d, parties };
    let entries = [
        ("classical", p(Some(2), None)),
        ("classical", p(Some(3), None)),
        ("classical", p(Some(4), None)),
        ("boxworld", p(None, None)),
        ("spekkens", p(None, None)),
        ("qubit", p(None, Some(2))),
        ("qubit", p(None, Some(3))),
        ("qubit", p(None, Some(4))),
    ];
    for (name, params) in entries {
        match load_builtin(name, &params)? {
            Theory::Polytopal(t) => {
                valid.record(validate_theory(&t.composite).is_valid());
                let text = crate::theory_file::to_canonical_json(&crate::theory_file::export(&t));
                let again = crate::theory_file::from_json(&text)
                    .and_then(|f| crate::theory_file::load(&f))
                    .map(|t| crate::theory_file::to_canonical_json(&crate::theory_file::export(&t)));
                round_trip.record(again.is_ok_and(|s| s == text));
            }
            Theory::Quantum(qc) => {
                let sp = sector_projectors(qc.d, qc.n)?;
                let dim = qc.hilbert_dim;
                let mut worst: f64 = 0.0;
                let mut sum = CMatrix::zeros(dim, dim);
                for (i, a) in sp.isotypic.iter().enumerate() {
                    sum += &a.projector;
                    for (j, b) in sp.isotypic.iter().enumerate() {
                        let prod = &a.projector * &b.projector;
                        worst = worst.max(if i == j { (prod - &a.projector).norm() } else { prod.norm() });
                    }
                    for (_, u) in qc.permutation_unitaries() {
                        worst = worst.max((&u * &a.projector - &a.projector * &u).norm());
                    }
                }
                worst = worst.max((sum - CMatrix::identity(dim, dim)).norm());
                projectors.residual(worst, tol);
            }
        }
    }
    Ok(SuiteReport { suite: "catalog".into(), properties: vec![valid.finish(), round_trip.finish(), projectors.finish()] })
}
