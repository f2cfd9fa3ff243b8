//! Exhaustive search for the heaviest pair of similar disjoint rectangles.
//!
//! A rectangle is an ordered pair of tuples of distinct rows and distinct
//! columns. Applying one permutation to the positions of both rectangles in a
//! pair preserves similarity, disjointness and weight, so the search only
//! visits row pairings `(u_i, u'_i)` with `u_i` increasing, and likewise for
//! columns.

use alloc::vec::Vec;

use super::{BoundsError, FunctionTable, InputDistribution};

/// Largest row or column count accepted by [`alpha`].
pub const MAX_RECTANGLE_SIDE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Rectangle {
    /// Number of cells, `k * l`.
    pub fn size(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn weight(&self, mu: &InputDistribution) -> f64 {
        self.rows.iter().flat_map(|&r| self.cols.iter().map(move |&c| mu.get(r, c))).sum()
    }

    /// The induced submatrix `F[R]`.
    pub fn submatrix(&self, table: &FunctionTable) -> Vec<Vec<Option<u32>>> {
        self.rows.iter().map(|&r| self.cols.iter().map(|&c| table.get(r, c)).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alpha {
    /// `max min(mu(R), mu(R'))`, 0 when no disjoint pair exists.
    pub value: f64,
    pub witness: Option<(Rectangle, Rectangle)>,
}

/// Maximizes `min(mu(R), mu(R'))` over similar pairs that are row-disjoint or
/// column-disjoint, with both sides of each rectangle at most `size_cap`.
/// Undefined entries compare equal to each other when testing similarity.
pub fn alpha(table: &FunctionTable, mu: &InputDistribution, size_cap: usize) -> Result<Alpha, BoundsError> {
    mu.matches(table)?;
    for (what, size) in [("row count", table.n_rows()), ("column count", table.n_cols())] {
        if size > MAX_RECTANGLE_SIDE {
            return Err(BoundsError::TooLarge { what, size, limit: MAX_RECTANGLE_SIDE });
        }
    }
    let mut search =
        Search { table, mu, cap: size_cap, row_weight: mu.row_marginal(), rows: Vec::new(), best: -1.0, witness: None };
    if size_cap > 0 {
        search.extend_rows(0, 0, 0.0, 0.0);
    }
    Ok(match search.witness {
        Some(w) => Alpha { value: search.best.max(0.0), witness: Some(w) },
        None => Alpha { value: 0.0, witness: None },
    })
}

struct Search<'a> {
    table: &'a FunctionTable,
    mu: &'a InputDistribution,
    cap: usize,
    row_weight: Vec<f64>,
    rows: Vec<(usize, usize)>,
    best: f64,
    witness: Option<(Rectangle, Rectangle)>,
}

struct ColumnView {
    weight: Vec<f64>,
    weight_prime: Vec<f64>,
    compatible: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn extend_rows(&mut self, start: usize, used_prime: u32, sum: f64, sum_prime: f64) {
        if !self.rows.is_empty() {
            self.search_columns();
        }
        let n = self.table.n_rows();
        if self.rows.len() == self.cap || start == n {
            return;
        }
        let rest: f64 = self.row_weight[start..].iter().sum();
        let rest_prime: f64 = (0..n).filter(|&u| used_prime & (1 << u) == 0).map(|u| self.row_weight[u]).sum();
        if (sum + rest).min(sum_prime + rest_prime) <= self.best {
            return;
        }
        for u in start..n {
            for up in (0..n).filter(|&up| used_prime & (1 << up) == 0) {
                self.rows.push((u, up));
                let (w, wp) = (self.row_weight[u], self.row_weight[up]);
                self.extend_rows(u + 1, used_prime | (1 << up), sum + w, sum_prime + wp);
                self.rows.pop();
            }
        }
    }

    fn column_view(&self) -> ColumnView {
        let (t, mu) = (self.table, self.mu);
        let n = t.n_cols();
        let weight = (0..n).map(|v| self.rows.iter().map(|&(u, _)| mu.get(u, v)).sum()).collect();
        let weight_prime = (0..n).map(|v| self.rows.iter().map(|&(_, u)| mu.get(u, v)).sum()).collect();
        let compatible = (0..n)
            .map(|v| (0..n).filter(|&vp| self.rows.iter().all(|&(u, up)| t.get(u, v) == t.get(up, vp))).collect())
            .collect();
        ColumnView { weight, weight_prime, compatible }
    }

    fn search_columns(&mut self) {
        let view = self.column_view();
        let row_disjoint = self.rows.iter().all(|&(u, up)| u != up);
        let mut cols = Vec::new();
        self.extend_columns(&view, row_disjoint, &mut cols, 0, 0, 0.0, 0.0);
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_columns(
        &mut self,
        view: &ColumnView,
        row_disjoint: bool,
        cols: &mut Vec<(usize, usize)>,
        start: usize,
        used_prime: u32,
        sum: f64,
        sum_prime: f64,
    ) {
        if !cols.is_empty() {
            let value = sum.min(sum_prime);
            if value > self.best {
                self.best = value;
                self.witness = Some(self.rectangles(cols));
            }
        }
        let n = self.table.n_cols();
        if cols.len() == self.cap || start == n {
            return;
        }
        let rest: f64 = view.weight[start..].iter().sum();
        let rest_prime: f64 = (0..n).filter(|&v| used_prime & (1 << v) == 0).map(|v| view.weight_prime[v]).sum();
        if (sum + rest).min(sum_prime + rest_prime) <= self.best {
            return;
        }
        for v in start..n {
            for &vp in &view.compatible[v] {
                if used_prime & (1 << vp) != 0 || (!row_disjoint && v == vp) {
                    continue;
                }
                cols.push((v, vp));
                let (w, wp) = (view.weight[v], view.weight_prime[vp]);
                self.extend_columns(view, row_disjoint, cols, v + 1, used_prime | (1 << vp), sum + w, sum_prime + wp);
                cols.pop();
            }
        }
    }

    fn rectangles(&self, cols: &[(usize, usize)]) -> (Rectangle, Rectangle) {
        (
            Rectangle { rows: self.rows.iter().map(|p| p.0).collect(), cols: cols.iter().map(|p| p.0).collect() },
            Rectangle { rows: self.rows.iter().map(|p| p.1).collect(), cols: cols.iter().map(|p| p.1).collect() },
        )
    }
}
