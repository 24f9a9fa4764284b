//! Particle types as orbits of symmetric pure states under the
//! swap-commuting subgroup of a theory's transformations.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt::{CompositeSystem, TransformationGroup};
use crate::group::{closure, matrix_of_permutation, GroupElement, Perm};
use crate::linalg::{fixed_subspace, vertices_of_slice, HalfspaceRep, Matrix, Polytope, Subspace, Vector};

/// The `d^n x d^n` operator moving tensor factor `k` to position
/// `sigma[k]`. With this convention `R(sigma) R(tau) = R(sigma ∘ tau)`.
pub fn permutation_operator(d: usize, n: usize, sigma: &[usize]) -> Matrix {
    assert_eq!(sigma.len(), n, "permutation must act on n parties");
    let size = d.pow(n as u32);
    let mut m = Matrix::zeros(size, size);
    let mut digits = vec![0usize; n];
    let mut out = vec![0usize; n];
    for col in 0..size {
        let mut rest = col;
        for k in (0..n).rev() {
            digits[k] = rest % d;
            rest /= d;
        }
        for k in 0..n {
            out[sigma[k]] = digits[k];
        }
        let row = out.iter().fold(0, |acc, &x| acc * d + x);
        m[(row, col)] = crate::linalg::Scalar::one();
    }
    m
}

/// Which pure states stand in for particle states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PureStateOption {
    /// Extremal points of the set of symmetric states.
    #[serde(rename = "I")]
    ExtremalSymmetric,
    /// Extremal states of the composite that are symmetric.
    #[serde(rename = "II")]
    SymmetricExtremal,
}

impl PureStateOption {
    pub fn label(&self) -> &'static str {
        match self {
            PureStateOption::ExtremalSymmetric => "I",
            PureStateOption::SymmetricExtremal => "II",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "I" | "i" | "1" => Some(PureStateOption::ExtremalSymmetric),
            "II" | "ii" | "2" => Some(PureStateOption::SymmetricExtremal),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricStateSet {
    pub option: PureStateOption,
    pub states: Vec<Vector>,
}

/// Option I slices the composite polytope with the swap-fixed subspace;
/// option II keeps the composite vertices fixed by the swap. Both lists are
/// sorted lexicographically.
pub fn symmetric_extremal_states(c: &CompositeSystem, option: PureStateOption) -> SymmetricStateSet {
    let p = c.swap();
    let states = match option {
        PureStateOption::ExtremalSymmetric => {
            vertices_of_slice(&c.vertices, &fixed_subspace(p)).sorted().vertices().to_vec()
        }
        PureStateOption::SymmetricExtremal => {
            let mut s: Vec<Vector> = c.vertices.vertices().iter().filter(|v| &p.apply(v) == *v).cloned().collect();
            s.sort();
            s
        }
    };
    SymmetricStateSet { option, states }
}

/// A subgroup obtained by filtering a finite group, with its order.
#[derive(Clone, Debug)]
pub struct FilteredSubgroup {
    pub group: TransformationGroup,
    pub order: usize,
    pub parent_order: usize,
}

fn maps_into(t: &Matrix, sym: &Subspace) -> bool {
    sym.basis().iter().all(|v| sym.contains(&t.apply(v)))
}

fn commutes_on(t: &Matrix, p: &Matrix, sym: &Subspace) -> bool {
    let c = &(t * p) - &(p * t);
    sym.basis().iter().all(|v| c.apply(v).iter().all(num_traits::Zero::is_zero))
}

/// `{T in g : [T, P] v = 0 for every v in sym}`, computed by closing `g`
/// and filtering. The test used is "T maps `sym` into itself", which is the
/// same condition because `P` fixes `sym` pointwise; the commutator form is
/// evaluated as well and must agree.
pub fn symmetry_preserving_subgroup(
    g: &TransformationGroup,
    p: &Matrix,
    sym: &Subspace,
    max_size: usize,
) -> Result<FilteredSubgroup> {
    let elements = crate::gpt::group_closure(g, max_size)?;
    let mut kept = Vec::new();
    for t in &elements {
        let a = maps_into(t, sym);
        debug_assert_eq!(a, commutes_on(t, p, sym));
        if a {
            kept.push(t.clone());
        }
    }
    let gens = greedy_generators(Matrix::identity(g.dim), &kept, max_size)?;
    Ok(FilteredSubgroup { group: TransformationGroup::new(g.dim, gens), order: kept.len(), parent_order: elements.len() })
}

/// Same subgroup as [`symmetry_preserving_subgroup`], computed on the
/// permutation action of the composite group on its vertices. Suited to
/// groups whose matrix closure would be large.
pub fn symmetry_preserving_subgroup_of(c: &CompositeSystem, max_size: usize) -> Result<FilteredSubgroup> {
    let verts = c.vertices.vertices();
    let gens = c.group.permutation_action(verts)?;
    let elements = closure(Perm::identity(verts.len()), &gens, max_size)?;
    let swap = crate::group::induced_permutation(c.swap(), verts).ok_or_else(|| Error::Validation("swap does not permute the composite vertices".into()))?;

    // sym is spanned by v_i + v_swap(i); T keeps it iff each image sum is
    // swap-fixed. Sums are compared by value through an interned table.
    let mut sum_ids: HashMap<Vector, usize> = HashMap::new();
    let pair_id = |a: usize, b: usize, ids: &mut HashMap<Vector, usize>| -> usize {
        let s = crate::linalg::scalar::add(&verts[a], &verts[b]);
        let next = ids.len();
        *ids.entry(s).or_insert(next)
    };
    let n = verts.len();
    let mut table = vec![usize::MAX; n * n];
    for a in 0..n {
        for b in a..n {
            let id = pair_id(a, b, &mut sum_ids);
            table[a * n + b] = id;
            table[b * n + a] = id;
        }
    }
    let keeps = |t: &Perm| {
        (0..n).all(|i| {
            let (x, y) = (t.apply(i), t.apply(swap.apply(i)));
            table[x * n + y] == table[swap.apply(x) * n + swap.apply(y)]
        })
    };
    let kept: Vec<Perm> = elements.iter().filter(|t| keeps(t)).cloned().collect();
    let perm_gens = greedy_generators(Perm::identity(n), &kept, max_size)?;
    let mats: Vec<Matrix> = perm_gens.iter().map(|t| matrix_of_permutation(t, verts, c.dim)).collect();
    Ok(FilteredSubgroup { group: TransformationGroup::new(c.dim, mats), order: kept.len(), parent_order: elements.len() })
}

/// A small generating set for the group whose elements are `elements`,
/// chosen greedily in list order.
fn greedy_generators<E: GroupElement>(identity: E, elements: &[E], max_size: usize) -> Result<Vec<E>> {
    let mut gens: Vec<E> = Vec::new();
    let mut span: HashSet<E> = HashSet::from([identity.clone()]);
    for e in elements {
        if !span.contains(e) {
            gens.push(e.clone());
            span = closure(identity.clone(), &gens, max_size)?.into_iter().collect();
        }
        if span.len() == elements.len() {
            break;
        }
    }
    Ok(gens)
}

/// Which group an orbit partition was computed under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTag {
    Full,
    Symmetric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    /// Lexicographically least member.
    pub representative: Vector,
    /// Members, sorted.
    pub members: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPartition {
    pub orbits: Vec<Orbit>,
    pub group_tag: GroupTag,
}

impl OrbitPartition {
    pub fn orbit_of(&self, v: &[crate::linalg::Scalar]) -> Option<usize> {
        self.orbits.iter().position(|o| o.members.iter().any(|m| m.as_slice() == v))
    }
}

/// Orbits of a finite point set under the group generated by `gens`, by
/// breadth-first search. Any image outside the set is an `OrbitEscape`.
/// Orbits are sorted by representative.
pub fn orbits_of(states: &[Vector], gens: &[Matrix], group_tag: GroupTag) -> Result<OrbitPartition> {
    let index: HashMap<&Vector, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut label = vec![usize::MAX; states.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..states.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        label[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let img = g.apply(&states[i]);
                let Some(&j) = index.get(&img) else {
                    return Err(Error::OrbitEscape(format!("generator {gi} maps state {i} outside the state set")));
                };
                if label[j] == usize::MAX {
                    label[j] = id;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        groups.push(members);
    }
    let mut orbits: Vec<Orbit> = groups
        .into_iter()
        .map(|idx| {
            let mut members: Vec<Vector> = idx.into_iter().map(|i| states[i].clone()).collect();
            members.sort();
            Orbit { representative: members[0].clone(), members }
        })
        .collect();
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(OrbitPartition { orbits, group_tag })
}

/// Orbits of the symmetric pure states under a (symmetry-preserving) group.
pub fn orbit_partition(states: &SymmetricStateSet, g: &TransformationGroup) -> Result<OrbitPartition> {
    orbits_of(&states.states, &g.generators, GroupTag::Symmetric)
}

/// How a symmetric orbit was attached to a base orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FMapVia {
    /// The representative is itself a composite vertex.
    Vertex,
    /// The representative is a mixed state; the vertices of its smallest
    /// face all lie in one base orbit.
    Face,
    /// The smallest face meets several base orbits.
    Ambiguous,
}

#[derive(Clone, Debug)]
pub struct ParticleTypeReport {
    pub theory: String,
    pub option: PureStateOption,
    pub symmetric_states: SymmetricStateSet,
    pub symmetric_orbits: OrbitPartition,
    /// Orbits of all composite vertices under the full group.
    pub full_orbits: OrbitPartition,
    /// Symmetric orbit index to base orbit index.
    pub f_map: Vec<Option<usize>>,
    pub f_map_via: Vec<FMapVia>,
    /// For each base orbit, the symmetric orbits in its preimage.
    pub types_per_base_orbit: Vec<Vec<usize>>,
    /// Convex-hull generators of each particle type's state space.
    pub hull_generators: Vec<Vec<Vector>>,
    pub full_group_order: usize,
    pub symmetric_group_order: usize,
}

impl ParticleTypeReport {
    /// Number of particle types: symmetric orbits attached to a base orbit.
    pub fn particle_type_count(&self) -> usize {
        self.types_per_base_orbit.iter().map(Vec::len).sum()
    }

    /// Types beyond one per base orbit, i.e. splits created by symmetry.
    pub fn new_type_count(&self) -> usize {
        self.types_per_base_orbit.iter().map(|t| t.len().saturating_sub(1)).sum()
    }
}

/// Runs the orbit pipeline on a composite: symmetric states, symmetric
/// subgroup, both orbit partitions, and the map from symmetric orbits to the
/// base orbits containing them.
pub fn particle_type_report(c: &CompositeSystem, option: PureStateOption, max_size: usize) -> Result<ParticleTypeReport> {
    let states = symmetric_extremal_states(c, option);
    let sub = symmetry_preserving_subgroup_of(c, max_size)?;
    let symmetric_orbits = orbit_partition(&states, &sub.group)?;
    let full_orbits = orbits_of(c.vertices.vertices(), &c.group.generators, GroupTag::Full)?;

    let needs_faces = symmetric_orbits.orbits.iter().any(|o| c.vertices.index_of(&o.representative).is_none());
    let h = needs_faces.then(|| c.vertices.halfspaces());
    let mut f_map = Vec::new();
    let mut f_map_via = Vec::new();
    for o in &symmetric_orbits.orbits {
        let (base, via) = base_orbit_of(&o.representative, &c.vertices, &full_orbits, h.as_ref());
        f_map.push(base);
        f_map_via.push(via);
    }
    let mut types_per_base_orbit = vec![Vec::new(); full_orbits.orbits.len()];
    for (x, y) in f_map.iter().enumerate() {
        if let Some(y) = y {
            types_per_base_orbit[*y].push(x);
        }
    }
    let hull_generators = symmetric_orbits
        .orbits
        .iter()
        .map(|o| Polytope::hull_of(c.dim, &o.members).sorted().vertices().to_vec())
        .collect();
    Ok(ParticleTypeReport {
        theory: c.part.name.clone(),
        option,
        symmetric_states: states,
        symmetric_orbits,
        full_orbits,
        f_map,
        f_map_via,
        types_per_base_orbit,
        hull_generators,
        full_group_order: sub.parent_order,
        symmetric_group_order: sub.order,
    })
}

/// Base orbit containing a symmetric state: directly for vertices, through
/// the smallest face otherwise.
pub fn base_orbit_of(
    s: &[crate::linalg::Scalar],
    poly: &Polytope,
    full: &OrbitPartition,
    halfspaces: Option<&HalfspaceRep>,
) -> (Option<usize>, FMapVia) {
    if poly.index_of(s).is_some() {
        return (full.orbit_of(s), FMapVia::Vertex);
    }
    let owned;
    let h = match halfspaces {
        Some(h) => h,
        None => {
            owned = poly.halfspaces();
            &owned
        }
    };
    let active = h.active_set(s);
    let face: Vec<usize> = (0..poly.len())
        .filter(|&i| {
            active.iter().all(|&k| {
                let (a, b) = &h.inequalities[k];
                crate::linalg::scalar::dot(a, &poly.vertices()[i]) == *b
            })
        })
        .collect();
    let bases: HashSet<Option<usize>> = face.iter().map(|&i| full.orbit_of(&poly.vertices()[i])).collect();
    if bases.len() == 1 {
        (bases.into_iter().next().flatten(), FMapVia::Face)
    } else {
        (None, FMapVia::Ambiguous)
    }
}
