//! Naive re-derivations of the bound quantities, written without sharing any
//! code with the library: ordered tuples are enumerated outright and the
//! distribution is a plain matrix.

#![allow(dead_code)]

pub type Table = Vec<Vec<Option<u32>>>;
pub type Dist = Vec<Vec<f64>>;

/// All tuples of distinct indices below `n` with length `1..=n`.
pub fn tuples(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(t) = stack.pop() {
        for i in 0..n {
            if !t.contains(&i) {
                let mut next = t.clone();
                next.push(i);
                stack.push(next);
            }
        }
        out.push(t);
    }
    out
}

fn sub(f: &Table, rows: &[usize], cols: &[usize]) -> Table {
    rows.iter().map(|&r| cols.iter().map(|&c| f[r][c]).collect()).collect()
}

fn weight(mu: &Dist, rows: &[usize], cols: &[usize]) -> f64 {
    let mut w = 0.0;
    for &r in rows {
        for &c in cols {
            w += mu[r][c];
        }
    }
    w
}

fn positionwise_distinct(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x != y)
}

/// Max over every ordered similar disjoint pair of `min(mu(R), mu(R'))`.
pub fn alpha(f: &Table, mu: &Dist) -> f64 {
    let rt = tuples(f.len());
    let ct = tuples(f[0].len());
    let mut best = 0.0f64;
    for r in &rt {
        for rp in rt.iter().filter(|t| t.len() == r.len()) {
            let rows_disjoint = positionwise_distinct(r, rp);
            for c in &ct {
                for cp in ct.iter().filter(|t| t.len() == c.len()) {
                    if !rows_disjoint && !positionwise_distinct(c, cp) {
                        continue;
                    }
                    if sub(f, r, c) == sub(f, rp, cp) {
                        best = best.max(weight(mu, r, c).min(weight(mu, rp, cp)));
                    }
                }
            }
        }
    }
    best
}

/// Min over labels of `Pr[p != p' | both labelled y]`, from all ordered pairs
/// of points.
pub fn beta(f: &Table, mu: &Dist) -> f64 {
    let mut points = Vec::new();
    for (r, row) in f.iter().enumerate() {
        for (c, &y) in row.iter().enumerate() {
            if mu[r][c] > 0.0 {
                points.push(((r, c), y.expect("defined on the support"), mu[r][c]));
            }
        }
    }
    let mut labels: Vec<u32> = points.iter().map(|p| p.1).collect();
    labels.sort();
    labels.dedup();
    labels
        .iter()
        .map(|&y| {
            let (mut both, mut differ) = (0.0, 0.0);
            for a in points.iter().filter(|p| p.1 == y) {
                for b in points.iter().filter(|p| p.1 == y) {
                    both += a.2 * b.2;
                    if a.0 != b.0 {
                        differ += a.2 * b.2;
                    }
                }
            }
            differ / both
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn min_entropy(mu: &Dist) -> f64 {
    let max = mu.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    -max.log2()
}

pub fn non_degenerate(f: &Table, mu: &Dist) -> bool {
    let rows: Vec<usize> = (0..f.len()).filter(|&r| mu[r].iter().sum::<f64>() > 0.0).collect();
    let cols: Vec<usize> = (0..f[0].len()).filter(|&c| mu.iter().map(|row| row[c]).sum::<f64>() > 0.0).collect();
    let differ = |a: Option<u32>, b: Option<u32>| a.is_some() && b.is_some() && a != b;
    let rows_ok = rows.iter().all(|&a| rows.iter().all(|&b| a == b || cols.iter().any(|&c| differ(f[a][c], f[b][c]))));
    let cols_ok = cols.iter().all(|&a| cols.iter().all(|&b| a == b || rows.iter().any(|&r| differ(f[r][a], f[r][b]))));
    rows_ok && cols_ok
}

pub fn lower_bound(f: &Table, mu: &Dist) -> f64 {
    let a = alpha(f, mu);
    (1.0 / a).log2() + min_entropy(mu) - (1.0 / beta(f, mu)).log2() - 1.0
}

pub fn uniform(rows: usize, cols: usize) -> Dist {
    vec![vec![1.0 / (rows * cols) as f64; cols]; rows]
}

/// A random similar disjoint pair found by picking random tuples and keeping
/// the similar, disjoint ones; returns the best weight seen.
pub fn random_witness_value(f: &Table, mu: &Dist, attempts: usize, seed: &mut u64) -> f64 {
    let mut next = |bound: usize| {
        *seed ^= *seed << 13;
        *seed ^= *seed >> 7;
        *seed ^= *seed << 17;
        (*seed % bound as u64) as usize
    };
    let rt = tuples(f.len());
    let ct = tuples(f[0].len());
    let mut best = 0.0f64;
    for _ in 0..attempts {
        let r = &rt[next(rt.len())];
        let c = &ct[next(ct.len())];
        let same_r: Vec<&Vec<usize>> = rt.iter().filter(|t| t.len() == r.len()).collect();
        let same_c: Vec<&Vec<usize>> = ct.iter().filter(|t| t.len() == c.len()).collect();
        let rp = same_r[next(same_r.len())];
        let cp = same_c[next(same_c.len())];
        let disjoint = positionwise_distinct(r, rp) || positionwise_distinct(c, cp);
        if disjoint && sub(f, r, c) == sub(f, rp, cp) {
            best = best.max(weight(mu, r, c).min(weight(mu, rp, cp)));
        }
    }
    best
}
