//! Statistics of the bound quantities over random Boolean functions.

use alloc::vec::Vec;
use rand::Rng;

use super::{alpha, is_non_degenerate, psqm_lower_bound, BoundsError, FunctionTable, InputDistribution};
use crate::SeededRng;

/// Largest bits-per-side accepted by [`random_function_stats`].
pub const MAX_STATS_BITS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Summary {
    /// `None` for an empty sample. The median of an even sample is the mean
    /// of the two middle values.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 { sorted[mid] } else { (sorted[mid - 1] + sorted[mid]) / 2.0 };
        Some(Summary { min: sorted[0], median, max: sorted[sorted.len() - 1] })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionStats {
    pub n: usize,
    pub exhaustive: bool,
    pub tables: usize,
    pub non_degenerate: usize,
    pub non_degenerate_fraction: Option<f64>,
    /// Largest cell count `|R|` of a similar disjoint pair over all tables.
    pub max_rectangle_size: Option<usize>,
    /// Per-table maximum `|R|`.
    pub rectangle_size: Option<Summary>,
    /// Per-table bound under uniform inputs, non-degenerate tables only.
    pub bound: Option<Summary>,
    /// Non-degenerate tables with a singleton output class, where beta is
    /// zero and the bound is undefined.
    pub beta_zero: usize,
    /// The asymptotic size threshold `2^n * n^2`, reported for comparison.
    pub size_threshold: f64,
}

/// Sweeps random tables `{0,1}^n x {0,1}^n -> {0,1}` (or all of them when
/// `exhaustive`) under the uniform input distribution.
pub fn random_function_stats(
    n: usize,
    trials: usize,
    seed: u64,
    exhaustive: bool,
) -> Result<FunctionStats, BoundsError> {
    if n == 0 || n > MAX_STATS_BITS {
        return Err(BoundsError::TooLarge { what: "bits per side", size: n, limit: MAX_STATS_BITS });
    }
    let side = 1usize << n;
    let cells = side * side;
    let tables: Vec<u64> = if exhaustive {
        (0..1u64 << cells).collect()
    } else {
        let mut rng = crate::seeded_rng(seed);
        (0..trials).map(|_| random_table(&mut rng, cells)).collect()
    };
    let mu = InputDistribution::uniform(side, side);
    let mut non_degenerate = 0;
    let mut sizes = Vec::with_capacity(tables.len());
    let mut bounds = Vec::new();
    let mut beta_zero = 0;
    for &bits in &tables {
        let table = FunctionTable::from_fn(side, side, |r, c| Some(((bits >> (r * side + c)) & 1) as u32));
        let a = if is_non_degenerate(&table, &mu)? {
            non_degenerate += 1;
            match psqm_lower_bound(&table, &mu) {
                Ok(lb) => {
                    bounds.push(lb.value);
                    lb.alpha
                }
                Err(BoundsError::BetaZero) => {
                    beta_zero += 1;
                    alpha(&table, &mu, side)?
                }
                Err(e) => return Err(e),
            }
        } else {
            alpha(&table, &mu, side)?
        };
        sizes.push(libm::round(a.value * cells as f64));
    }
    Ok(FunctionStats {
        n,
        exhaustive,
        tables: tables.len(),
        non_degenerate,
        non_degenerate_fraction: (!tables.is_empty()).then(|| non_degenerate as f64 / tables.len() as f64),
        max_rectangle_size: sizes
            .iter()
            .copied()
            .fold(None, |m: Option<f64>, s| Some(m.map_or(s, |m| m.max(s))))
            .map(|s| s as usize),
        rectangle_size: Summary::of(&sizes),
        bound: Summary::of(&bounds),
        beta_zero,
        size_threshold: (side * n * n) as f64,
    })
}

fn random_table(rng: &mut SeededRng, cells: usize) -> u64 {
    (0..cells).fold(0u64, |acc, i| acc | (rng.gen::<bool>() as u64) << i)
}
