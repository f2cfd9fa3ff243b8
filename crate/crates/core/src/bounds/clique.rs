//! Exact maximum cliques of the row and column distinguishability graphs.

use alloc::vec::Vec;

use super::{BoundsError, FunctionTable};

/// Largest graph accepted by [`exact_smp_clique_sizes`].
pub const MAX_CLIQUE_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSizes {
    pub rows: usize,
    pub cols: usize,
    pub row_clique: Vec<usize>,
    pub col_clique: Vec<usize>,
}

/// Maximum clique of a graph given as adjacency bitmasks (at most 32
/// vertices, no self loops). Returns vertex indices in increasing order.
pub fn max_clique(adjacency: &[u32]) -> Vec<usize> {
    assert!(adjacency.len() <= 32, "bitset graphs hold at most 32 vertices");
    // visit high-degree vertices first so good cliques are found early
    let mut order: Vec<usize> = (0..adjacency.len()).collect();
    order.sort_by_key(|&v| core::cmp::Reverse(adjacency[v].count_ones()));
    let mut best = Vec::new();
    let mut current = Vec::new();
    let all = if adjacency.len() == 32 { u32::MAX } else { (1u32 << adjacency.len()) - 1 };
    expand(adjacency, &order, all, &mut current, &mut best);
    best.sort_unstable();
    best
}

fn expand(adjacency: &[u32], order: &[usize], mut candidates: u32, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    if current.len() > best.len() {
        best.clone_from(current);
    }
    for &v in order {
        if current.len() + candidates.count_ones() as usize <= best.len() {
            return;
        }
        if candidates & (1 << v) == 0 {
            continue;
        }
        current.push(v);
        expand(adjacency, order, candidates & adjacency[v], current, best);
        current.pop();
        candidates &= !(1 << v);
    }
}

fn distinguishable(a: &[Option<u32>], b: &[Option<u32>]) -> bool {
    a.iter().zip(b).any(|pair| matches!(pair, (Some(x), Some(y)) if x != y))
}

fn graph(vectors: &[Vec<Option<u32>>]) -> Vec<u32> {
    (0..vectors.len())
        .map(|i| {
            (0..vectors.len())
                .filter(|&j| j != i && distinguishable(&vectors[i], &vectors[j]))
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect()
}

/// Clique numbers of `G1` (rows adjacent when some column separates them with
/// two defined, different entries) and the analogous column graph `G2`.
pub fn exact_smp_clique_sizes(table: &FunctionTable) -> Result<CliqueSizes, BoundsError> {
    for (what, size) in [("row graph", table.n_rows()), ("column graph", table.n_cols())] {
        if size > MAX_CLIQUE_VERTICES {
            return Err(BoundsError::TooLarge { what, size, limit: MAX_CLIQUE_VERTICES });
        }
    }
    let rows: Vec<Vec<Option<u32>>> = (0..table.n_rows()).map(|r| table.row(r).to_vec()).collect();
    let cols: Vec<Vec<Option<u32>>> = (0..table.n_cols()).map(|c| table.col(c)).collect();
    let row_clique = max_clique(&graph(&rows));
    let col_clique = max_clique(&graph(&cols));
    Ok(CliqueSizes { rows: row_clique.len(), cols: col_clique.len(), row_clique, col_clique })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::dj_table;
    use alloc::vec;

    /// Oracle: largest vertex subset that is pairwise adjacent, by subset
    /// enumeration.
    fn brute_clique(adjacency: &[u32]) -> usize {
        let n = adjacency.len();
        (0u32..1 << n)
            .filter(|&s| (0..n).all(|v| s & (1 << v) == 0 || (s & !(1 << v)) & !adjacency[v] == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_examples() {
        let sizes = exact_smp_clique_sizes(&dj_table(2).unwrap()).unwrap();
        assert_eq!((sizes.rows, sizes.cols), (2, 2));
        let eq = exact_smp_clique_sizes(&FunctionTable::equality(1)).unwrap();
        assert_eq!((eq.rows, eq.cols), (2, 2));
        let c = exact_smp_clique_sizes(&FunctionTable::from_fn(3, 4, |_, _| Some(0))).unwrap();
        assert_eq!((c.rows, c.cols), (1, 1));
        assert_eq!(max_clique(&[]), vec![]);
    }

    #[test]
    fn matches_subset_oracle() {
        let mut state = 0x9e37_79b9u32;
        for _ in 0..200 {
            let n = 9;
            let mut adj = vec![0u32; n];
            for i in 0..n {
                for j in i + 1..n {
                    state = state.wrapping_mul(1_664_525).wrapping_add(1_013_904_223);
                    if state >> 31 == 1 {
                        adj[i] |= 1 << j;
                        adj[j] |= 1 << i;
                    }
                }
            }
            let clique = max_clique(&adj);
            assert_eq!(clique.len(), brute_clique(&adj));
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    assert!(adj[a] & (1 << b) != 0);
                }
            }
        }
    }

    #[test]
    fn dj4_guard() {
        assert!(exact_smp_clique_sizes(&dj_table(4).unwrap()).is_ok());
        assert!(matches!(exact_smp_clique_sizes(&dj_table(8).unwrap()), Err(BoundsError::TooLarge { .. })));
    }
}
