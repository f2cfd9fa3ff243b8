//! Brute-force lower-bound quantities on small function tables.
//!
//! Everything here enumerates: non-degeneracy, the similar-disjoint rectangle
//! weight `alpha`, the per-class non-collision probability `beta`, min-entropy
//! and the resulting bound
//! `log2(1/alpha) + H_inf(mu) - log2(1/beta) - 1`, plus the clique sizes that
//! give the exact simultaneous-message cost of a partial function.

mod clique;
mod rectangles;
mod stats;

pub use clique::{exact_smp_clique_sizes, max_clique, CliqueSizes, MAX_CLIQUE_VERTICES};
pub use rectangles::{alpha, Alpha, Rectangle, MAX_RECTANGLE_SIDE};
pub use stats::{random_function_stats, FunctionStats, Summary, MAX_STATS_BITS};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bits::Bits;

/// Tolerance on distribution normalization.
pub const DISTRIBUTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("table has {rows}x{cols} labels but entries are {got_rows}x{got_cols}")]
    DimensionMismatch { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("distribution is not normalized or has a negative entry (sum {0})")]
    BadDistribution(f64),
    #[error("entry ({row}, {col}) is undefined but has positive probability")]
    UndefinedInSupport { row: usize, col: usize },
    #[error("no output class has positive probability")]
    EmptyClasses,
    #[error("function is degenerate under the distribution")]
    Degenerate,
    #[error("beta is zero, the bound is undefined")]
    BetaZero,
    #[error("{what} of size {size} exceeds the enumeration limit {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
}

/// A finite, possibly partial, function `X1 x X2 -> labels`; `None` marks an
/// input pair outside the promise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    rows: Vec<String>,
    cols: Vec<String>,
    entries: Vec<Option<u32>>,
}

impl FunctionTable {
    pub fn new(rows: Vec<String>, cols: Vec<String>, entries: Vec<Vec<Option<u32>>>) -> Result<Self, BoundsError> {
        let mismatch = || BoundsError::DimensionMismatch {
            rows: rows.len(),
            cols: cols.len(),
            got_rows: entries.len(),
            got_cols: entries.iter().map(|r| r.len()).max().unwrap_or(0),
        };
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(mismatch());
        }
        let entries = entries.into_iter().flatten().collect();
        Ok(FunctionTable { rows, cols, entries })
    }

    /// Table with numeric labels `0..rows` and `0..cols`.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Option<u32>) -> Self {
        let label = |i: usize| alloc::format!("{i}");
        FunctionTable {
            rows: (0..rows).map(label).collect(),
            cols: (0..cols).map(label).collect(),
            entries: (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| f(r, c)).collect(),
        }
    }

    /// Equality on `bits`-bit strings.
    pub fn equality(bits: usize) -> Self {
        let labels = bit_labels(bits);
        let n = labels.len();
        let entries = (0..n).map(|r| (0..n).map(|c| Some((r == c) as u32)).collect()).collect();
        FunctionTable::new(labels.clone(), labels, entries).expect("square")
    }

    pub fn row_labels(&self) -> &[String] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[String] {
        &self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<u32> {
        self.entries[row * self.cols.len() + col]
    }

    pub fn is_total(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    pub fn row(&self, row: usize) -> &[Option<u32>] {
        let c = self.cols.len();
        &self.entries[row * c..(row + 1) * c]
    }

    pub fn col(&self, col: usize) -> Vec<Option<u32>> {
        (0..self.n_rows()).map(|r| self.get(r, col)).collect()
    }

    pub fn distinct_row_count(&self) -> usize {
        let mut rows: Vec<&[Option<u32>]> = (0..self.n_rows()).map(|r| self.row(r)).collect();
        rows.sort();
        rows.dedup();
        rows.len()
    }

    pub fn distinct_col_count(&self) -> usize {
        let mut cols: Vec<Vec<Option<u32>>> = (0..self.n_cols()).map(|c| self.col(c)).collect();
        cols.sort();
        cols.dedup();
        cols.len()
    }
}

/// Lexicographically ordered labels of all `bits`-bit strings.
fn bit_labels(bits: usize) -> Vec<String> {
    (0..1u64 << bits).map(|i| alloc::format!("{}", Bits::from_big_endian(bits, i))).collect()
}

/// Partial table of the distributed Deutsch-Jozsa problem: 1 on `x = y`,
/// 0 at Hamming distance `n/2`, undefined elsewhere.
pub fn dj_table(n: usize) -> Result<FunctionTable, BoundsError> {
    if !matches!(n, 2 | 4 | 8) {
        return Err(BoundsError::TooLarge { what: "dj table parameter n (allowed 2, 4, 8)", size: n, limit: 8 });
    }
    let size = 1usize << n;
    let labels = bit_labels(n);
    let entries = (0..size as u64)
        .map(|x| {
            (0..size as u64)
                .map(|y| match (x ^ y).count_ones() as usize {
                    0 => Some(1),
                    d if d == n / 2 => Some(0),
                    _ => None,
                })
                .collect()
        })
        .collect();
    FunctionTable::new(labels.clone(), labels, entries)
}

/// Probability mass over `X1 x X2`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl InputDistribution {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self, BoundsError> {
        if probs.len() != rows * cols {
            return Err(BoundsError::DimensionMismatch { rows, cols, got_rows: probs.len(), got_cols: 1 });
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p < 0.0 || p.is_nan()) || (sum - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(BoundsError::BadDistribution(sum));
        }
        Ok(InputDistribution { rows, cols, probs })
    }

    pub fn uniform(rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        InputDistribution { rows, cols, probs: alloc::vec![1.0 / n as f64; n] }
    }

    /// Uniform over the defined entries of `table`.
    pub fn uniform_on_domain(table: &FunctionTable) -> Result<Self, BoundsError> {
        let defined = table.entries.iter().filter(|e| e.is_some()).count();
        if defined == 0 {
            return Err(BoundsError::EmptyClasses);
        }
        let w = 1.0 / defined as f64;
        let probs = table.entries.iter().map(|e| if e.is_some() { w } else { 0.0 }).collect();
        Ok(InputDistribution { rows: table.n_rows(), cols: table.n_cols(), probs })
    }

    pub fn point(rows: usize, cols: usize, row: usize, col: usize) -> Self {
        let mut probs = alloc::vec![0.0; rows * cols];
        probs[row * cols + col] = 1.0;
        InputDistribution { rows, cols, probs }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.probs[row * self.cols + col]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).sum()).collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols).map(|c| (0..self.rows).map(|r| self.get(r, c)).sum()).collect()
    }

    fn matches(&self, table: &FunctionTable) -> Result<(), BoundsError> {
        if self.rows != table.n_rows() || self.cols != table.n_cols() {
            return Err(BoundsError::DimensionMismatch {
                rows: table.n_rows(),
                cols: table.n_cols(),
                got_rows: self.rows,
                got_cols: self.cols,
            });
        }
        Ok(())
    }
}

fn check_defined_on_support(table: &FunctionTable, mu: &InputDistribution) -> Result<(), BoundsError> {
    mu.matches(table)?;
    for row in 0..table.n_rows() {
        for col in 0..table.n_cols() {
            if mu.get(row, col) > 0.0 && table.get(row, col).is_none() {
                return Err(BoundsError::UndefinedInSupport { row, col });
            }
        }
    }
    Ok(())
}

/// Every pair of distinct support rows is separated by some support column
/// (both entries defined and different), and symmetrically for columns.
pub fn is_non_degenerate(table: &FunctionTable, mu: &InputDistribution) -> Result<bool, BoundsError> {
    check_defined_on_support(table, mu)?;
    let rows: Vec<usize> = positive_indices(&mu.row_marginal());
    let cols: Vec<usize> = positive_indices(&mu.col_marginal());
    let separated = |a: Option<u32>, b: Option<u32>| matches!((a, b), (Some(x), Some(y)) if x != y);
    for (i, &r1) in rows.iter().enumerate() {
        for &r2 in &rows[i + 1..] {
            if !cols.iter().any(|&c| separated(table.get(r1, c), table.get(r2, c))) {
                return Ok(false);
            }
        }
    }
    for (i, &c1) in cols.iter().enumerate() {
        for &c2 in &cols[i + 1..] {
            if !rows.iter().any(|&r| separated(table.get(r, c1), table.get(r, c2))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn positive_indices(p: &[f64]) -> Vec<usize> {
    p.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(i, _)| i).collect()
}

/// `min_y Pr[X != X' | F(X) = F(X') = y]` for independent `X, X'` drawn from
/// the weighted points, grouped by label. Classes of zero mass are skipped.
pub fn beta_of_classes(points: impl IntoIterator<Item = (u32, f64)>) -> Result<f64, BoundsError> {
    let mut classes: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    for (label, w) in points {
        if w > 0.0 {
            let e = classes.entry(label).or_insert((0.0, 0.0));
            e.0 += w;
            e.1 += w * w;
        }
    }
    classes
        .values()
        .map(|&(mass, sq)| 1.0 - sq / (mass * mass))
        .fold(None, |acc: Option<f64>, b| Some(acc.map_or(b, |a| a.min(b))))
        .map(|b| b.max(0.0))
        .ok_or(BoundsError::EmptyClasses)
}

pub fn beta(table: &FunctionTable, mu: &InputDistribution) -> Result<f64, BoundsError> {
    check_defined_on_support(table, mu)?;
    let points = (0..table.n_rows())
        .flat_map(|r| (0..table.n_cols()).map(move |c| (r, c)))
        .filter_map(|(r, c)| table.get(r, c).map(|y| (y, mu.get(r, c))));
    beta_of_classes(points)
}

/// `-log2 max mu`.
pub fn min_entropy(mu: &InputDistribution) -> f64 {
    let max = mu.probs.iter().copied().fold(0.0f64, f64::max);
    let h = -libm::log2(max);
    if h == 0.0 {
        0.0
    } else {
        h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub alpha: Alpha,
    pub beta: f64,
    pub min_entropy: f64,
    /// `+inf` when no similar disjoint pair has positive weight.
    pub value: f64,
}

/// Evaluates `log2(1/alpha) + H_inf(mu) - log2(1/beta) - 1` at the given
/// distribution, with rectangles enumerated up to the full table size.
pub fn psqm_lower_bound(table: &FunctionTable, mu: &InputDistribution) -> Result<LowerBound, BoundsError> {
    if !is_non_degenerate(table, mu)? {
        return Err(BoundsError::Degenerate);
    }
    let alpha = alpha(table, mu, table.n_rows().max(table.n_cols()))?;
    let beta = beta(table, mu)?;
    if beta <= 0.0 {
        return Err(BoundsError::BetaZero);
    }
    let min_entropy = min_entropy(mu);
    let value =
        if alpha.value > 0.0 { -libm::log2(alpha.value) + min_entropy + libm::log2(beta) - 1.0 } else { f64::INFINITY };
    Ok(LowerBound { alpha, beta, min_entropy, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor1() -> FunctionTable {
        FunctionTable::from_fn(2, 2, |r, c| Some((r ^ c) as u32))
    }

    fn constant(v: u32) -> FunctionTable {
        FunctionTable::from_fn(2, 2, |_, _| Some(v))
    }

    #[test]
    fn equality_labels() {
        let eq = FunctionTable::equality(1);
        assert_eq!(eq.row_labels(), ["0", "1"]);
        assert_eq!(eq.get(0, 0), Some(1));
        assert_eq!(eq.get(0, 1), Some(0));
        assert!(eq.is_total());
    }

    #[test]
    fn non_degeneracy_examples() {
        let u = InputDistribution::uniform(2, 2);
        assert!(is_non_degenerate(&FunctionTable::equality(1), &u).unwrap());
        assert!(is_non_degenerate(&xor1(), &u).unwrap());
        assert!(!is_non_degenerate(&constant(0), &u).unwrap());
        // a single support point is trivially non-degenerate
        assert!(is_non_degenerate(&constant(0), &InputDistribution::point(2, 2, 0, 1)).unwrap());
    }

    #[test]
    fn undefined_support_is_an_error() {
        let t = FunctionTable::from_fn(2, 2, |r, c| (r == c).then_some(1));
        assert_eq!(
            is_non_degenerate(&t, &InputDistribution::uniform(2, 2)),
            Err(BoundsError::UndefinedInSupport { row: 0, col: 1 })
        );
        assert!(is_non_degenerate(&t, &InputDistribution::uniform_on_domain(&t).unwrap()).is_ok());
    }

    #[test]
    fn beta_examples() {
        let u = InputDistribution::uniform(2, 2);
        assert!((beta(&FunctionTable::equality(1), &u).unwrap() - 0.5).abs() < 1e-15);
        assert!((beta(&xor1(), &u).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(beta(&xor1(), &InputDistribution::point(2, 2, 1, 1)).unwrap(), 0.0);
        assert_eq!(beta_of_classes([]), Err(BoundsError::EmptyClasses));
    }

    #[test]
    fn beta_uniform_classes_of_equal_size() {
        // every class of size s under uniform mu gives (s-1)/s
        let t = FunctionTable::from_fn(3, 4, |r, c| Some(((r * 4 + c) % 3) as u32));
        let b = beta(&t, &InputDistribution::uniform(3, 4)).unwrap();
        assert!((b - 3.0 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn min_entropy_examples() {
        assert!((min_entropy(&InputDistribution::uniform(4, 4)) - 4.0).abs() < 1e-15);
        assert_eq!(min_entropy(&InputDistribution::point(2, 2, 0, 0)), 0.0);
        let mu = InputDistribution::new(1, 3, alloc::vec![0.5, 0.25, 0.25]).unwrap();
        assert!((min_entropy(&mu) - 1.0).abs() < 1e-15);
        assert!(InputDistribution::new(1, 2, alloc::vec![0.5, 0.6]).is_err());
        assert!(InputDistribution::new(1, 2, alloc::vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn equality_bound_is_zero() {
        let lb = psqm_lower_bound(&FunctionTable::equality(1), &InputDistribution::uniform(2, 2)).unwrap();
        assert!((lb.alpha.value - 1.0).abs() < 1e-15);
        assert!((lb.beta - 0.5).abs() < 1e-15);
        assert!((lb.min_entropy - 2.0).abs() < 1e-15);
        assert!(lb.value.abs() < 1e-12);
    }

    #[test]
    fn bound_refused_when_degenerate() {
        let eq = FunctionTable::equality(1);
        // point mass: supports a single row and column, so the function is
        // trivially non-degenerate there, but beta vanishes
        assert_eq!(psqm_lower_bound(&eq, &InputDistribution::point(2, 2, 0, 0)), Err(BoundsError::BetaZero));
        assert_eq!(psqm_lower_bound(&constant(1), &InputDistribution::uniform(2, 2)), Err(BoundsError::Degenerate));
    }

    #[test]
    fn dj_table_entries() {
        let t = dj_table(2).unwrap();
        assert_eq!(t.row_labels(), ["00", "01", "10", "11"]);
        assert_eq!(t.get(1, 1), Some(1));
        assert_eq!(t.get(0, 3), None);
        assert_eq!(t.get(0, 1), Some(0));
        let t4 = dj_table(4).unwrap();
        let idx = |s: &str| t4.row_labels().iter().position(|l| l == s).unwrap();
        assert_eq!(t4.get(idx("0011"), idx("0101")), Some(0));
        assert!(dj_table(16).is_err());
        assert!(dj_table(3).is_err());
    }

    #[test]
    fn distinct_vectors() {
        let t = FunctionTable::from_fn(3, 2, |r, c| Some(((r / 2) ^ c) as u32));
        assert_eq!(t.distinct_row_count(), 2);
        assert_eq!(t.distinct_col_count(), 2);
        assert!(FunctionTable::new(alloc::vec!["a".into()], alloc::vec![], alloc::vec![alloc::vec![Some(1)]]).is_err());
    }
}
