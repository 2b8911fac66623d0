//! Brute-force reference implementations, written directly from the textbook
//! definitions and sharing no code with the `hypernym` library.

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Dense SVD by one-sided Jacobi rotations: returns `(sigma, u_cols, v_cols)`
/// with singular values in descending order. `u_cols[k]` has `rows` entries,
/// `v_cols[k]` has `cols` entries.
pub fn jacobi_svd(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    // columns of A as working vectors
    let mut w: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..cols).map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = w[p].iter().map(|x| x * x).sum();
                let beta: f64 = w[q].iter().map(|x| x * x).sum();
                let gamma: f64 = w[p].iter().zip(&w[q]).map(|(x, y)| x * y).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (w[p][i], w[q][i]);
                    w[p][i] = c * x - s * y;
                    w[q][i] = s * x + c * y;
                }
                for i in 0..cols {
                    let (x, y) = (v[p][i], v[q][i]);
                    v[p][i] = c * x - s * y;
                    v[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut triplets: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..cols)
        .map(|j| {
            let sigma = w[j].iter().map(|x| x * x).sum::<f64>().sqrt();
            let u = if sigma > 0.0 { w[j].iter().map(|x| x / sigma).collect() } else { vec![0.0; rows] };
            (sigma, u, v[j].clone())
        })
        .collect();
    triplets.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let sigma = triplets.iter().map(|t| t.0).collect();
    let u = triplets.iter().map(|t| t.1.clone()).collect();
    let vv = triplets.into_iter().map(|t| t.2).collect();
    (sigma, u, vv)
}

/// Singular values only (descending), of length `min(rows, cols)`.
pub fn singular_values(a: &[Vec<f64>]) -> Vec<f64> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut s = if cols <= rows {
        jacobi_svd(a).0
    } else {
        let t: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect();
        jacobi_svd(&t).0
    };
    s.truncate(rows.min(cols));
    s
}

/// Best rank-`r` approximation entry `(i, j)` from the dense decomposition.
pub fn truncated_entry(a: &[Vec<f64>], r: usize, i: usize, j: usize) -> f64 {
    let (s, u, v) = jacobi_svd(a);
    (0..r.min(s.len())).map(|k| u[k][i] * s[k] * v[k][j]).sum()
}

/// PPMI of `(x, y)` from a raw list of `(hypo, hyper, count)` rows.
pub fn ppmi(pairs: &[(String, String, u64)], x: &str, y: &str) -> f64 {
    let total: u64 = pairs.iter().map(|p| p.2).sum();
    let joint: u64 = pairs.iter().filter(|p| p.0 == x && p.1 == y).map(|p| p.2).sum();
    let hypo: u64 = pairs.iter().filter(|p| p.0 == x).map(|p| p.2).sum();
    let hyper: u64 = pairs.iter().filter(|p| p.1 == y).map(|p| p.2).sum();
    if joint == 0 || hypo == 0 || hyper == 0 {
        return 0.0;
    }
    let w = total as f64;
    let pmi = ((joint as f64 / w) / ((hypo as f64 / w) * (hyper as f64 / w))).ln();
    if pmi > 0.0 {
        pmi
    } else {
        0.0
    }
}

pub fn prob(pairs: &[(String, String, u64)], x: &str, y: &str) -> f64 {
    let total: u64 = pairs.iter().map(|p| p.2).sum();
    let joint: u64 = pairs.iter().filter(|p| p.0 == x && p.1 == y).map(|p| p.2).sum();
    joint as f64 / total as f64
}

/// AP over a list given as `(score, positive)`, ranking by descending score
/// with earlier items first among equal scores (insertion-sorted).
pub fn average_precision(items: &[(f64, bool)]) -> Option<f64> {
    let mut ranked: Vec<(f64, bool)> = Vec::new();
    for &it in items {
        let pos = ranked.iter().position(|r| r.0 < it.0).unwrap_or(ranked.len());
        ranked.insert(pos, it);
    }
    let positives = ranked.iter().filter(|r| r.1).count();
    if positives == 0 {
        return None;
    }
    let mut total = 0.0;
    for k in 0..ranked.len() {
        if ranked[k].1 {
            let hits = ranked[..=k].iter().filter(|r| r.1).count();
            total += hits as f64 / (k + 1) as f64;
        }
    }
    Some(total / positives as f64)
}

/// Average rank of each value: `1 + #smaller + (#equal − 1) / 2`.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|v| {
            let smaller = values.iter().filter(|w| *w < v).count() as f64;
            let equal = values.iter().filter(|w| *w == v).count() as f64;
            1.0 + smaller + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let sa: f64 = a.iter().map(|x| (x - ma).powi(2)).sum::<f64>().sqrt();
    let sb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum::<f64>().sqrt();
    cov / (sa * sb)
}

pub fn spearman(pred: &[f64], gold: &[f64]) -> f64 {
    pearson(&average_ranks(pred), &average_ranks(gold))
}

pub fn cosine(x: &[f64], y: &[f64]) -> f64 {
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let nx: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let ny: f64 = y.iter().map(|a| a * a).sum::<f64>().sqrt();
    dot / (nx * ny)
}

pub fn weeds_prec(x: &[f64], y: &[f64]) -> f64 {
    let num: f64 = x.iter().zip(y).filter(|(_, b)| **b > 0.0).map(|(a, _)| a).sum();
    num / x.iter().sum::<f64>()
}

pub fn cl(x: &[f64], y: &[f64]) -> f64 {
    let num: f64 = x.iter().zip(y).map(|(a, b)| a.min(*b)).sum();
    num / x.iter().sum::<f64>()
}

pub fn inv_cl(x: &[f64], y: &[f64]) -> f64 {
    (cl(x, y) * (1.0 - cl(y, x))).sqrt()
}

/// Base-2 Shannon entropy of column `c` of a dense count matrix.
pub fn column_entropy(counts: &[Vec<f64>], c: usize) -> f64 {
    let total: f64 = counts.iter().map(|row| row[c]).sum();
    let mut h = 0.0;
    for row in counts {
        if row[c] > 0.0 {
            let p = row[c] / total;
            h -= p * p.log2();
        }
    }
    h
}

/// Median entropy of the `n` highest-weighted contexts of `term` (ties by
/// lower context index), from dense weight and count matrices.
pub fn slqs_entropy(weights: &[Vec<f64>], counts: &[Vec<f64>], term: usize, n: usize) -> f64 {
    let row = &weights[term];
    let mut chosen: Vec<usize> = Vec::new();
    let mut available: Vec<usize> = (0..row.len()).filter(|&c| row[c] > 0.0).collect();
    while chosen.len() < n && !available.is_empty() {
        let mut best = 0;
        for k in 1..available.len() {
            if row[available[k]] > row[available[best]] {
                best = k;
            }
        }
        chosen.push(available.remove(best));
    }
    let mut e: Vec<f64> = chosen.iter().map(|&c| column_entropy(counts, c)).collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = e.len();
    if m % 2 == 1 {
        e[m / 2]
    } else {
        (e[m / 2 - 1] + e[m / 2]) / 2.0
    }
}

pub fn slqs(weights: &[Vec<f64>], counts: &[Vec<f64>], x: usize, y: usize, n: usize) -> f64 {
    1.0 - slqs_entropy(weights, counts, x, n) / slqs_entropy(weights, counts, y, n)
}

pub fn slqs_cos(weights: &[Vec<f64>], counts: &[Vec<f64>], x: usize, y: usize, n: usize) -> f64 {
    slqs(weights, counts, x, y, n) * cosine(&weights[x], &weights[y])
}

/// Random draws following the protocol contract: generator for iteration `i`
/// is xoshiro256++ seeded with `seed XOR (i + 1) * 0x9E3779B97F4A7C15`; an
/// integer below `b` is `next_u64 mod b`; the validation subset is the prefix of
/// a partial Fisher-Yates shuffle of `0..n`.
pub struct ProtocolDraws {
    rng: Xoshiro256PlusPlus,
}

impl ProtocolDraws {
    pub fn for_iteration(seed: u64, i: u64) -> Self {
        let mixed = seed ^ (i + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        ProtocolDraws { rng: Xoshiro256PlusPlus::seed_from_u64(mixed) }
    }

    pub fn for_seed(seed: u64) -> Self {
        ProtocolDraws { rng: Xoshiro256PlusPlus::seed_from_u64(seed) }
    }

    /// Returns the full permutation after shuffling its first `k` positions.
    pub fn partial_permutation(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + (self.rng.next_u64() % (n - i) as u64) as usize;
            p.swap(i, j);
        }
        p
    }
}

/// One pair for the threshold protocols: scores with OOV as `None`, gold label.
#[derive(Debug, Clone)]
pub struct ProtocolPair {
    pub forward: Option<f64>,
    pub backward: Option<f64>,
    pub gold: String,
}

fn lowered(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NEG_INFINITY)
}

/// Thresholds considered for a validation set: below everything, between each
/// pair of adjacent distinct values, above everything.
fn cut_points(values: &[f64]) -> Vec<f64> {
    let mut distinct: Vec<f64> = Vec::new();
    for &v in values {
        if !distinct.contains(&v) {
            distinct.push(v);
        }
    }
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut cuts = vec![f64::NEG_INFINITY];
    for k in 1..distinct.len() {
        let (lo, hi) = (distinct[k - 1], distinct[k]);
        if lo == f64::NEG_INFINITY {
            cuts.push(hi);
        } else {
            let mid = (lo + hi) / 2.0;
            cuts.push(if mid > lo && mid.is_finite() { mid } else { hi });
        }
    }
    cuts.push(f64::INFINITY);
    cuts
}

fn run_protocol(
    pairs: &[ProtocolPair],
    seed: u64,
    iterations: usize,
    value: impl Fn(&ProtocolPair) -> f64,
    predict: impl Fn(&ProtocolPair, f64) -> String,
) -> f64 {
    let n = pairs.len();
    let k = ((n as f64 * 0.02).round() as usize).max(2);
    let mut total = 0.0;
    for i in 0..iterations {
        let mut draws = ProtocolDraws::for_iteration(seed, i as u64);
        let perm = loop {
            let p = draws.partial_permutation(n, k);
            let labels: Vec<&str> = p[..k].iter().map(|&j| pairs[j].gold.as_str()).collect();
            if labels.iter().any(|l| *l != labels[0]) {
                break p;
            }
        };
        let (val, test) = perm.split_at(k);
        let acc = |set: &[usize], t: f64| {
            set.iter().filter(|&&j| predict(&pairs[j], t) == pairs[j].gold).count() as f64 / set.len() as f64
        };
        let values: Vec<f64> = val.iter().map(|&j| value(&pairs[j])).collect();
        let mut best_t = f64::NEG_INFINITY;
        let mut best_acc = -1.0;
        for t in cut_points(&values) {
            let a = acc(val, t);
            if a > best_acc {
                best_acc = a;
                best_t = t;
            }
        }
        total += acc(test, best_t);
    }
    total / iterations as f64
}

/// WBLESS-style protocol: gold labels `hyper` vs anything else.
pub fn wbless(pairs: &[ProtocolPair], seed: u64, iterations: usize) -> f64 {
    let pairs: Vec<ProtocolPair> = pairs
        .iter()
        .map(|p| ProtocolPair { gold: if p.gold == "hyper" { "hyper".into() } else { "other".into() }, ..p.clone() })
        .collect();
    run_protocol(
        &pairs,
        seed,
        iterations,
        |p| lowered(p.forward),
        |p, t| {
            let f = lowered(p.forward);
            if f >= t && f > lowered(p.backward) {
                "hyper".into()
            } else {
                "other".into()
            }
        },
    )
}

/// BIBLESS-style protocol: gold labels `hyper`, `hypo`, `other`.
pub fn bibless(pairs: &[ProtocolPair], seed: u64, iterations: usize) -> f64 {
    run_protocol(
        pairs,
        seed,
        iterations,
        |p| lowered(p.forward).max(lowered(p.backward)),
        |p, t| {
            let (f, b) = (lowered(p.forward), lowered(p.backward));
            if f.max(b) < t {
                "other".into()
            } else if f > b {
                "hyper".into()
            } else {
                "hypo".into()
            }
        },
    )
}

/// Window co-occurrence counts and PPMI weights, keyed by `(term, context)`,
/// for lemmas occurring at least `min_count` times.
pub fn window_ppmi(
    sentences: &[Vec<&str>],
    window: usize,
    min_count: u64,
) -> std::collections::BTreeMap<(String, String), (u64, f64)> {
    use std::collections::BTreeMap;
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for s in sentences {
        for w in s {
            *freq.entry(w).or_default() += 1;
        }
    }
    let frequent = |w: &str| freq[w] >= min_count;
    let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    for s in sentences {
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i != j && i.abs_diff(j) <= window && frequent(s[i]) && frequent(s[j]) {
                    *counts.entry((s[i].to_string(), s[j].to_string())).or_default() += 1;
                }
            }
        }
    }
    let total: u64 = counts.values().sum();
    let mut out = BTreeMap::new();
    for ((t, c), &n) in &counts {
        let row: u64 = counts.iter().filter(|((a, _), _)| a == t).map(|(_, v)| v).sum();
        let col: u64 = counts.iter().filter(|((_, b), _)| b == c).map(|(_, v)| v).sum();
        let w = total as f64;
        let pmi = ((n as f64 / w) / ((row as f64 / w) * (col as f64 / w))).ln();
        out.insert((t.clone(), c.clone()), (n, if pmi > 0.0 { pmi } else { 0.0 }));
    }
    out
}

/// Median by sorting, mean of the middle pair for even lengths.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
