use gpt_particles::error::Error;
use gpt_particles::quantum::{
    classify_symmetric_pure, lemma1_decompose, sample_symmetric_unitary, sector_projectors, CMatrix, QuantumComposite,
    SectorLabel,
};
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn basis_state(dim: usize, i: usize) -> DVector<Complex64> {
    DVector::from_fn(dim, |k, _| if k == i { c(1.0) } else { c(0.0) })
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

fn random_swap_invariant(seed: u64, d: usize, rank: usize) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = sector_projectors(d, 2).unwrap();
    let dim = d * d;
    let mut g = CMatrix::zeros(dim, dim);
    for _ in 0..rank {
        let v = gaussian(&mut rng, dim);
        g += &v * v.adjoint();
    }
    let g = &g / c(g.trace().re);
    &sp.symmetric * &g * &sp.symmetric + &sp.antisymmetric * &g * &sp.antisymmetric
}

#[test]
fn two_party_projectors() {
    for d in [2, 3, 4] {
        let sp = sector_projectors(d, 2).unwrap();
        let (s, a) = (&sp.symmetric, &sp.antisymmetric);
        let id = CMatrix::identity(d * d, d * d);
        assert!((s + a - &id).norm() < 1e-12);
        assert!((s * a).norm() < 1e-12);
        assert!((s * s - s).norm() < 1e-12 && (a * a - a).norm() < 1e-12);
        assert_eq!(s.trace().re.round() as usize, d * (d + 1) / 2);
        assert_eq!(a.trace().re.round() as usize, d * (d - 1) / 2);
    }
}

#[test]
fn isotypic_projectors_resolve_the_identity() {
    for (d, n) in [(2, 2), (3, 2), (2, 3), (3, 3), (2, 4), (3, 4)] {
        let qc = QuantumComposite::new(d, n).unwrap();
        let sp = sector_projectors(d, n).unwrap();
        let dim = qc.hilbert_dim;
        let total: usize = sp.isotypic.iter().map(|p| p.rank).sum();
        assert_eq!(total, dim);
        let mut sum = CMatrix::zeros(dim, dim);
        let us = qc.permutation_unitaries();
        for (i, a) in sp.isotypic.iter().enumerate() {
            sum += &a.projector;
            for b in &sp.isotypic[i + 1..] {
                assert!((&a.projector * &b.projector).norm() < 1e-10);
            }
            for (_, u) in &us {
                assert!((u * &a.projector - &a.projector * u).norm() < 1e-10);
            }
        }
        assert!((sum - CMatrix::identity(dim, dim)).norm() < 1e-10);
    }
}

#[test]
fn three_qubit_isotypic_ranks() {
    let ranks: Vec<usize> = sector_projectors(2, 3).unwrap().isotypic.iter().map(|p| p.rank).collect();
    assert_eq!(ranks, vec![4, 4, 0]);
}

#[test]
fn five_parties_are_unsupported() {
    assert!(matches!(sector_projectors(2, 5), Err(Error::UnsupportedArity(5))));
}

#[test]
fn exchange_eigenstates_are_labelled() {
    let qc = QuantumComposite::new(2, 2).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let bell = (basis_state(4, 1) + basis_state(4, 2)) * c(h);
    let singlet = (basis_state(4, 1) - basis_state(4, 2)) * c(h);
    assert_eq!(classify_symmetric_pure(&qc, &bell).unwrap().label, SectorLabel::SymmetricSector);
    assert_eq!(classify_symmetric_pure(&qc, &singlet).unwrap().label, SectorLabel::AntisymmetricSector);
    assert!(matches!(classify_symmetric_pure(&qc, &basis_state(4, 1)), Err(Error::NotExchangeEigenstate { .. })));
}

#[test]
fn lemma1_weights_of_simple_states() {
    let qc = QuantumComposite::new(2, 2).unwrap();
    let mixed = CMatrix::identity(4, 4) / c(4.0);
    let dec = lemma1_decompose(&qc, &mixed).unwrap();
    assert!((dec.p_s - 0.75).abs() < 1e-12 && (dec.p_a - 0.25).abs() < 1e-12);
    let h = 1.0 / 2f64.sqrt();
    let singlet = (basis_state(4, 1) - basis_state(4, 2)) * c(h);
    let dec = lemma1_decompose(&qc, &(&singlet * singlet.adjoint())).unwrap();
    assert!(dec.p_s.abs() < 1e-12 && (dec.p_a - 1.0).abs() < 1e-12);
    assert!(dec.rho_s.is_none());
}

#[test]
fn lemma1_rejects_non_invariant_states() {
    let qc = QuantumComposite::new(2, 2).unwrap();
    let v = basis_state(4, 1);
    assert!(matches!(lemma1_decompose(&qc, &(&v * v.adjoint())), Err(Error::NotSymmetricState(_))));
}

#[test]
fn qubit_antisymmetric_block_is_a_phase() {
    let sp = sector_projectors(2, 2).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let singlet = (basis_state(4, 1) - basis_state(4, 2)) * c(h);
    for seed in 0..20 {
        let u = sample_symmetric_unitary(2, seed).unwrap();
        let image = &u * &singlet;
        let overlap = singlet.dotc(&image);
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
        assert!((&u * &sp.symmetric - &sp.symmetric * &u).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lemma1_reconstructs_invariant_states(seed in any::<u64>(), d in 2usize..=3, rank in 1usize..=9) {
        let qc = QuantumComposite::new(d, 2).unwrap();
        let rho = random_swap_invariant(seed, d, rank.min(d * d));
        let dec = lemma1_decompose(&qc, &rho).unwrap();
        prop_assert!(dec.residual < 1e-10);
        prop_assert!((dec.p_s + dec.p_a - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symmetric_unitaries_preserve_labels(seed in any::<u64>(), d in 2usize..=3, symmetric in any::<bool>()) {
        let qc = QuantumComposite::new(d, 2).unwrap();
        let sp = sector_projectors(d, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let proj = if symmetric { &sp.symmetric } else { &sp.antisymmetric };
        let v = proj * gaussian(&mut rng, d * d);
        let psi = &v / c(v.norm());
        let before = classify_symmetric_pure(&qc, &psi).unwrap().label;
        let u = sample_symmetric_unitary(d, seed ^ 0x5eed).unwrap();
        prop_assert!((&u * &sp.symmetric - &sp.symmetric * &u).norm() < 1e-10);
        let after = classify_symmetric_pure(&qc, &(&u * &psi)).unwrap().label;
        prop_assert_eq!(before, after);
    }
}
