use crate::error::{Error, Result};

/// Default grid for the SVD rank and the SLQS top-N.
pub const DEFAULT_GRID: [usize; 13] = [5, 10, 15, 20, 25, 50, 100, 150, 200, 250, 300, 500, 1000];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub best: T,
    pub best_metric: f64,
    /// `(value, metric)` in grid order.
    pub metrics: Vec<(T, f64)>,
}

/// Evaluates every grid value and returns the maximizer; ties go to the
/// smallest value. NaN metrics never win.
pub fn sweep<T, F>(grid: &[T], mut evaluate: F) -> Result<SweepResult<T>>
where
    T: Copy + PartialOrd,
    F: FnMut(T) -> Result<f64>,
{
    if grid.is_empty() {
        return Err(Error::Degenerate("sweep grid is empty".into()));
    }
    let mut metrics = Vec::with_capacity(grid.len());
    let mut best: Option<(T, f64)> = None;
    for &value in grid {
        let metric = evaluate(value)?;
        metrics.push((value, metric));
        let m = if metric.is_nan() { f64::NEG_INFINITY } else { metric };
        best = match best {
            None => Some((value, m)),
            Some((bv, bm)) if m > bm || (m == bm && value < bv) => Some((value, m)),
            keep => keep,
        };
    }
    let (best, best_metric) = best.expect("grid is non-empty");
    Ok(SweepResult { best, best_metric, metrics })
}
