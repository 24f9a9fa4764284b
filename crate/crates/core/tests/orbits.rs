mod common;

use common::in_hull_brute_force;
use gpt_particles::catalog::{boxworld, classical, spekkens};
use gpt_particles::error::Error;
use gpt_particles::gpt::{compose, group_closure, CompositionRule, TransformationGroup, DEFAULT_MAX_GROUP_SIZE};
use gpt_particles::linalg::{fixed_subspace, hull_membership, Matrix, Polytope, Vector};
use gpt_particles::orbits::{
    orbits_of, particle_type_report, symmetric_extremal_states, symmetry_preserving_subgroup,
    symmetry_preserving_subgroup_of, GroupTag, PureStateOption,
};
use proptest::prelude::*;

const OPTIONS: [PureStateOption; 2] = [PureStateOption::ExtremalSymmetric, PureStateOption::SymmetricExtremal];

#[test]
fn composites_have_involutive_swap_and_permuted_vertices() {
    for t in [classical(2, 2).unwrap(), classical(3, 2).unwrap(), boxworld(2).unwrap(), spekkens(2).unwrap()] {
        let c = &t.composite;
        let p = c.swap();
        assert!((p * p).is_identity());
        let mut verts = c.vertices.vertices().to_vec();
        verts.sort();
        let gens = &c.group.generators;
        let pairs = gens.iter().flat_map(|a| gens.iter().map(move |b| a * b));
        for g in gens.iter().cloned().chain(pairs) {
            let mut image: Vec<Vector> = verts.iter().map(|v| g.apply(v)).collect();
            image.sort();
            assert_eq!(image, verts, "{} group element does not permute vertices", t.name);
        }
    }
}

#[test]
fn min_tensor_vertex_count_is_a_power() {
    for (d, n) in [(2, 2), (3, 2), (2, 3), (4, 2)] {
        assert_eq!(classical(d, n).unwrap().composite.vertices.len(), d.pow(n as u32));
    }
}

#[test]
fn classical_max_tensor_equals_min_tensor() {
    for d in [2, 3] {
        let t = classical(d, 2).unwrap();
        let parts = [t.system.clone(), t.system.clone()];
        let max = compose(&parts, CompositionRule::MaxTensor, t.composite.group.generators.clone()).unwrap();
        let sorted = |p: &gpt_particles::linalg::Polytope| {
            let mut v = p.vertices().to_vec();
            v.sort();
            v
        };
        assert_eq!(sorted(&max.vertices), sorted(&t.composite.vertices));
    }
}

#[test]
fn symmetric_states_are_swap_fixed_and_extremal() {
    for t in [classical(2, 2).unwrap(), classical(3, 2).unwrap(), boxworld(2).unwrap()] {
        let c = &t.composite;
        let p = c.swap();
        let sym = fixed_subspace(p);
        for option in OPTIONS {
            let set = symmetric_extremal_states(c, option);
            for (i, s) in set.states.iter().enumerate() {
                assert_eq!(&p.apply(s), s);
                match option {
                    PureStateOption::SymmetricExtremal => assert!(c.vertices.index_of(s).is_some()),
                    PureStateOption::ExtremalSymmetric => {
                        assert!(sym.contains(s));
                        let others: Vec<Vector> =
                            set.states.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
                        let inside = if others.len() <= 8 {
                            in_hull_brute_force(s, &others)
                        } else {
                            hull_membership(s, &Polytope::from_vertices_unchecked(s.len(), others))
                        };
                        assert!(!inside, "{} option I state {i} is not extremal", t.name);
                    }
                }
            }
        }
    }
}

#[test]
fn classical_symmetric_state_counts() {
    for (d, one, two) in [(2, 3, 2), (3, 6, 3)] {
        let c = classical(d, 2).unwrap().composite;
        assert_eq!(symmetric_extremal_states(&c, PureStateOption::ExtremalSymmetric).states.len(), one);
        assert_eq!(symmetric_extremal_states(&c, PureStateOption::SymmetricExtremal).states.len(), two);
    }
}

#[test]
fn symmetric_subgroup_is_closed_and_preserves_symmetric_states() {
    for t in [classical(2, 2).unwrap(), classical(3, 2).unwrap(), boxworld(2).unwrap()] {
        let c = &t.composite;
        let p = c.swap();
        let sym = fixed_subspace(p);
        let sub = symmetry_preserving_subgroup(&c.group, p, &sym, DEFAULT_MAX_GROUP_SIZE).unwrap();
        let elements = group_closure(&sub.group, DEFAULT_MAX_GROUP_SIZE).unwrap();
        assert_eq!(elements.len(), sub.order, "{}: generators do not regenerate the subgroup", t.name);
        for a in &elements {
            assert!(elements.contains(&a.inverse().unwrap()));
            for b in elements.iter().take(16) {
                assert!(elements.contains(&(a * b)));
            }
        }
        assert!(elements.contains(p), "swap is not retained");
        for option in OPTIONS {
            for s in &symmetric_extremal_states(c, option).states {
                for g in &elements {
                    let img = g.apply(s);
                    assert_eq!(p.apply(&img), img);
                }
            }
        }
        let by_action = symmetry_preserving_subgroup_of(c, DEFAULT_MAX_GROUP_SIZE).unwrap();
        assert_eq!((by_action.order, by_action.parent_order), (sub.order, sub.parent_order));
    }
}

#[test]
fn boxworld_group_has_order_128() {
    let c = boxworld(2).unwrap().composite;
    let sub = symmetry_preserving_subgroup_of(&c, DEFAULT_MAX_GROUP_SIZE).unwrap();
    assert_eq!(sub.parent_order, 128);
    assert_eq!(sub.order, 16);
}

#[test]
fn classical_keeps_every_diagonal_relabelling() {
    let t = classical(3, 2).unwrap();
    let c = &t.composite;
    let sub = symmetry_preserving_subgroup(&c.group, c.swap(), &fixed_subspace(c.swap()), DEFAULT_MAX_GROUP_SIZE).unwrap();
    let kept = group_closure(&sub.group, DEFAULT_MAX_GROUP_SIZE).unwrap();
    let local = TransformationGroup::new(3, vec![
        Matrix::from_i64(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]),
        Matrix::from_i64(3, 3, &[0, 0, 1, 1, 0, 0, 0, 1, 0]),
    ]);
    for t in group_closure(&local, 100).unwrap() {
        assert!(kept.contains(&t.kron(&t)));
    }
}

#[test]
fn f_map_sends_whole_orbits_into_one_base_orbit() {
    for t in [classical(2, 2).unwrap(), classical(3, 2).unwrap(), boxworld(2).unwrap(), spekkens(2).unwrap()] {
        for option in OPTIONS {
            let r = particle_type_report(&t.composite, option, DEFAULT_MAX_GROUP_SIZE).unwrap();
            for (x, o) in r.symmetric_orbits.orbits.iter().enumerate() {
                let bases: Vec<Option<usize>> = o.members.iter().map(|m| r.full_orbits.orbit_of(m)).collect();
                if let Some(y) = r.f_map[x] {
                    assert!(bases.iter().all(|b| b.is_none() || *b == Some(y)));
                    assert!(r.types_per_base_orbit[y].contains(&x));
                }
            }
        }
    }
}

#[test]
fn reported_type_counts() {
    let count = |t: &gpt_particles::catalog::TheorySpec, o| {
        particle_type_report(&t.composite, o, DEFAULT_MAX_GROUP_SIZE).unwrap().particle_type_count()
    };
    assert_eq!(count(&classical(2, 2).unwrap(), PureStateOption::ExtremalSymmetric), 2);
    assert_eq!(count(&classical(2, 2).unwrap(), PureStateOption::SymmetricExtremal), 1);
    assert_eq!(count(&spekkens(2).unwrap(), PureStateOption::SymmetricExtremal), 3);
    let r = particle_type_report(&boxworld(2).unwrap().composite, PureStateOption::SymmetricExtremal, DEFAULT_MAX_GROUP_SIZE).unwrap();
    assert_eq!((r.full_orbits.orbits.len(), r.new_type_count()), (2, 0));
}

#[test]
fn escaping_generator_is_reported() {
    let c = classical(2, 2).unwrap().composite;
    let states = symmetric_extremal_states(&c, PureStateOption::ExtremalSymmetric).states;
    let bad = Matrix::identity(4).scaled(&common::q(2));
    assert!(matches!(orbits_of(&states, &[bad], GroupTag::Symmetric), Err(Error::OrbitEscape(_))));
}

fn spekkens_case() -> &'static (Vec<Vector>, Vec<Matrix>) {
    static CASE: std::sync::OnceLock<(Vec<Vector>, Vec<Matrix>)> = std::sync::OnceLock::new();
    CASE.get_or_init(|| {
        let c = spekkens(2).unwrap().composite;
        let states = symmetric_extremal_states(&c, PureStateOption::SymmetricExtremal).states;
        let gens = symmetry_preserving_subgroup_of(&c, DEFAULT_MAX_GROUP_SIZE).unwrap().group.generators;
        (states, gens)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_partition_ignores_generator_and_state_order(
        gen_order in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let (states, gens) = spekkens_case();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(gen_order);
        let (mut s2, mut g2) = (states.clone(), gens.clone());
        s2.shuffle(&mut rng);
        g2.shuffle(&mut rng);
        let a = orbits_of(states, gens, GroupTag::Symmetric).unwrap();
        let b = orbits_of(&s2, &g2, GroupTag::Symmetric).unwrap();
        prop_assert_eq!(a, b);
    }
}
