//! Deterministic truncated SVD of sparse matrices.
//!
//! The solver grows an orthonormal block Krylov basis `Q` of the range of `A`
//! (`A Ω`, `A Aᵀ A Ω`, ...) and after every block solves the projected problem
//! `Qᵀ A = X Σ Wᵀ` densely, giving Ritz triplets `U = Q X`, `V = W`. It stops when
//! the top-`r` residuals `‖A vᵢ − σᵢ uᵢ‖` and the change in singular values both
//! fall below the tolerance, or when `Q` spans the whole row space, at which
//! point the decomposition is exact.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, symmetric_unit, PortableRng};
use crate::sparse::CsrMatrix;

/// Truncated factorization `M_r = U Σ_r Vᵀ`, factors stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdModel {
    rank: usize,
    rows: usize,
    cols: usize,
    singular_values: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl SvdModel {
    pub fn from_parts(
        rank: usize,
        rows: usize,
        cols: usize,
        singular_values: Vec<f64>,
        u: Vec<f64>,
        v: Vec<f64>,
    ) -> Result<Self> {
        if rank == 0 || rank > rows.min(cols) {
            return Err(Error::InvalidRank { rank, rows, cols });
        }
        let u_len = rows.checked_mul(rank);
        let v_len = cols.checked_mul(rank);
        if singular_values.len() != rank || u_len != Some(u.len()) || v_len != Some(v.len()) {
            return Err(Error::Model("SVD factor dimensions do not match the rank".into()));
        }
        if singular_values.iter().any(|s| !s.is_finite() || *s < 0.0) || singular_values.windows(2).any(|w| w[0] < w[1])
        {
            return Err(Error::Model("singular values must be finite, non-negative and non-increasing".into()));
        }
        if u.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::Model("non-finite factor entry".into()));
        }
        Ok(SvdModel { rank, rows, cols, singular_values, u, v })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn u_row(&self, i: usize) -> &[f64] {
        &self.u[i * self.rank..(i + 1) * self.rank]
    }

    pub fn v_row(&self, j: usize) -> &[f64] {
        &self.v[j * self.rank..(j + 1) * self.rank]
    }

    pub fn u_factor(&self) -> &[f64] {
        &self.u
    }

    pub fn v_factor(&self) -> &[f64] {
        &self.v
    }

    /// `u_rowᵀ Σ_r v_col`.
    pub fn reconstruct_entry(&self, row: usize, col: usize) -> Result<f64> {
        if row >= self.rows {
            return Err(Error::IndexOutOfRange { index: row, len: self.rows });
        }
        if col >= self.cols {
            return Err(Error::IndexOutOfRange { index: col, len: self.cols });
        }
        let (u, v) = (self.u_row(row), self.v_row(col));
        Ok((0..self.rank).map(|k| u[k] * self.singular_values[k] * v[k]).sum())
    }
}

#[derive(Debug, Clone)]
pub struct SvdOptions {
    /// Extra basis vectors per block beyond the requested rank.
    pub oversample: usize,
    /// Relative tolerance for residuals and singular-value change.
    pub tolerance: f64,
    pub max_rounds: usize,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions { oversample: 10, tolerance: 1e-10, max_rounds: 1000 }
    }
}

pub fn truncated_svd(matrix: &CsrMatrix, rank: usize, seed: u64) -> Result<SvdModel> {
    truncated_svd_with(matrix, rank, seed, &SvdOptions::default())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Basis {
    q: Vec<Vec<f64>>,
    /// `Aᵀ q` for every basis vector.
    z: Vec<Vec<f64>>,
}

impl Basis {
    fn orthogonalize(&self, y: &mut [f64]) {
        for _ in 0..2 {
            for q in &self.q {
                let c = dot(q, y);
                y.iter_mut().zip(q).for_each(|(yi, qi)| *yi -= c * qi);
            }
        }
    }

    /// Appends the orthonormalized candidates; directions already spanned are
    /// replaced by random vectors. Returns the indices of the new columns.
    fn extend(&mut self, candidates: Vec<Vec<f64>>, rng: &mut PortableRng) -> Vec<usize> {
        let dim = candidates.first().map_or(0, Vec::len);
        let mut added = Vec::new();
        for mut y in candidates {
            if self.q.len() >= dim {
                break;
            }
            let mut attempts = 0;
            loop {
                let before = norm(&y);
                self.orthogonalize(&mut y);
                let after = norm(&y);
                if after > 1e-8 * before && after > 0.0 {
                    y.iter_mut().for_each(|v| *v /= after);
                    break;
                }
                attempts += 1;
                debug_assert!(attempts < 100, "cannot extend basis");
                y = (0..dim).map(|_| symmetric_unit(rng)).collect();
            }
            added.push(self.q.len());
            self.q.push(y);
        }
        added
    }
}

fn mul_block(matrix: &CsrMatrix, vectors: &[&Vec<f64>]) -> Vec<Vec<f64>> {
    vectors
        .par_iter()
        .map(|x| {
            let mut y = vec![0.0; matrix.rows()];
            matrix.mul_vec(x, &mut y);
            y
        })
        .collect()
}

struct Ritz {
    values: Vec<f64>,
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

fn ritz(basis: &Basis, rank: usize) -> Ritz {
    let n = basis.z[0].len();
    let c = basis.z.len();
    let bt = DMatrix::from_fn(n, c, |i, j| basis.z[j][i]);
    let svd = bt.svd(true, true);
    let w = svd.u.expect("left vectors requested");
    let x_t = svd.v_t.expect("right vectors requested");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));
    let m = basis.q[0].len();
    let mut values = Vec::with_capacity(rank);
    let mut us = Vec::with_capacity(rank);
    let mut vs = Vec::with_capacity(rank);
    for &idx in order.iter().take(rank) {
        values.push(svd.singular_values[idx].max(0.0));
        let mut u = vec![0.0; m];
        for (j, q) in basis.q.iter().enumerate() {
            let coef = x_t[(idx, j)];
            u.iter_mut().zip(q).for_each(|(ui, qi)| *ui += coef * qi);
        }
        us.push(u);
        vs.push((0..n).map(|i| w[(i, idx)]).collect());
    }
    Ritz { values, u: us, v: vs }
}

pub fn truncated_svd_with(matrix: &CsrMatrix, rank: usize, seed: u64, options: &SvdOptions) -> Result<SvdModel> {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    if rank == 0 || rank > rows.min(cols) {
        return Err(Error::InvalidRank { rank, rows, cols });
    }
    let transposed = matrix.transpose();
    let block = (rank + options.oversample).min(rows).min(cols);
    let mut rng = rng_from_seed(seed);
    let omega: Vec<Vec<f64>> = (0..block).map(|_| (0..cols).map(|_| symmetric_unit(&mut rng)).collect()).collect();
    let mut basis = Basis { q: Vec::new(), z: Vec::new() };
    let mut candidates = mul_block(matrix, &omega.iter().collect::<Vec<_>>());
    let mut previous: Option<Vec<f64>> = None;
    let mut last_residual = f64::INFINITY;

    for _round in 0..options.max_rounds {
        let added = basis.extend(candidates, &mut rng);
        let new_q: Vec<&Vec<f64>> = added.iter().map(|&i| &basis.q[i]).collect();
        let new_z = mul_block(&transposed, &new_q);
        basis.z.extend(new_z);

        let result = ritz(&basis, rank);
        let complete = basis.q.len() >= rows;
        let scale = result.values[0];
        let converged = if complete || scale == 0.0 {
            true
        } else {
            let refs: Vec<&Vec<f64>> = result.v.iter().collect();
            let av = mul_block(matrix, &refs);
            last_residual = av
                .iter()
                .zip(&result.u)
                .zip(&result.values)
                .map(|((a, u), s)| a.iter().zip(u).map(|(x, y)| (x - s * y).powi(2)).sum::<f64>().sqrt())
                .fold(0.0, f64::max)
                / scale;
            let stable = previous.as_ref().is_some_and(|prev| {
                prev.iter().zip(&result.values).all(|(p, s)| (p - s).abs() <= options.tolerance * scale)
            });
            stable && last_residual <= options.tolerance
        };
        if converged {
            return Ok(finish(result, rank, rows, cols));
        }
        previous = Some(result.values);
        let tail: Vec<&Vec<f64>> = added.iter().map(|&i| &basis.z[i]).collect();
        candidates = mul_block(matrix, &tail);
        if candidates.is_empty() {
            candidates = vec![(0..rows).map(|_| symmetric_unit(&mut rng)).collect()];
        }
    }
    Err(Error::NoConvergence { iterations: options.max_rounds, residual: last_residual })
}

/// Applies the sign convention (largest-magnitude entry of each left vector is
/// positive) and packs the factors row-major.
fn finish(mut ritz: Ritz, rank: usize, rows: usize, cols: usize) -> SvdModel {
    for k in 0..rank {
        let u = &ritz.u[k];
        let mut best = 0;
        for i in 1..u.len() {
            if u[i].abs() > u[best].abs() {
                best = i;
            }
        }
        if u[best] < 0.0 {
            ritz.u[k].iter_mut().for_each(|x| *x = -*x);
            ritz.v[k].iter_mut().for_each(|x| *x = -*x);
        }
    }
    let mut u = vec![0.0; rows * rank];
    let mut v = vec![0.0; cols * rank];
    for k in 0..rank {
        for i in 0..rows {
            u[i * rank + k] = ritz.u[k][i];
        }
        for j in 0..cols {
            v[j * rank + k] = ritz.v[k][j];
        }
    }
    SvdModel { rank, rows, cols, singular_values: ritz.values, u, v }
}
