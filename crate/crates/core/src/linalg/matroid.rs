use num_traits::Zero;

use super::matrix::Matrix;
use super::scalar::Vector;

fn rank_of(vectors: &[Vector], idx: &[usize]) -> usize {
    if idx.is_empty() {
        return 0;
    }
    let n = vectors[idx[0]].len();
    let cols: Vec<Vector> = idx.iter().map(|&i| vectors[i].clone()).collect();
    Matrix::from_columns(n, &cols).rank()
}

/// Finest partition of the indices such that the spans of the blocks form a
/// direct sum equal to the span of all vectors (the connected components of
/// the linear matroid).
///
/// Components are the classes of the union of fundamental circuits with
/// respect to the leftmost basis; a final pass merges any two blocks with
/// `rank(B1) + rank(B2) > rank(B1 ∪ B2)` and is a no-op on a correct
/// partition. Blocks are sorted by their smallest member, members ascending.
pub fn matroid_components(vectors: &[Vector]) -> Vec<Vec<usize>> {
    let n = vectors.len();
    if n == 0 {
        return Vec::new();
    }
    let dim = vectors[0].len();
    let all = Matrix::from_columns(dim, vectors);
    let (rref, pivots) = all.rref();
    let mut parent: Vec<usize> = (0..n).collect();
    for j in 0..n {
        if pivots.contains(&j) {
            continue;
        }
        // Column j of the echelon form gives its coordinates in the pivot basis.
        for (row, &p) in pivots.iter().enumerate() {
            if !rref[(row, j)].is_zero() {
                union(&mut parent, j, p);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_block: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_block[r] {
            Some(b) => blocks[b].push(i),
            None => {
                root_block[r] = Some(blocks.len());
                blocks.push(vec![i]);
            }
        }
    }
    merge_dependent_blocks(vectors, blocks)
}

fn merge_dependent_blocks(vectors: &[Vector], mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut ranks: Vec<usize> = blocks.iter().map(|b| rank_of(vectors, b)).collect();
    loop {
        let mut merged = false;
        'scan: for a in 0..blocks.len() {
            for b in a + 1..blocks.len() {
                let mut union = blocks[a].clone();
                union.extend(&blocks[b]);
                let r = rank_of(vectors, &union);
                if r < ranks[a] + ranks[b] {
                    union.sort_unstable();
                    blocks[a] = union;
                    ranks[a] = r;
                    blocks.remove(b);
                    ranks.remove(b);
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            break;
        }
    }
    blocks.sort();
    blocks
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = i;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}
