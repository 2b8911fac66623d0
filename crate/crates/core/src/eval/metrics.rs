use crate::error::{Error, Result};

/// Total-order key treating `-0.0` as `0.0` and NaN as the lowest score.
pub(crate) fn order_key(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Average precision of a scored list. Items are ranked by descending score;
/// equal scores keep their input order.
pub fn average_precision(ranked: &[(f64, bool)]) -> Result<f64> {
    let mut order: Vec<usize> = (0..ranked.len()).collect();
    order.sort_by(|&a, &b| order_key(ranked[b].0).total_cmp(&order_key(ranked[a].0)));
    ap_of_labels(order.into_iter().map(|i| ranked[i].1))
}

/// AP of labels already in rank order.
pub(crate) fn ap_of_labels(labels: impl IntoIterator<Item = bool>) -> Result<f64> {
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (rank, positive) in labels.into_iter().enumerate() {
        if positive {
            hits += 1;
            sum += hits as f64 / (rank + 1) as f64;
        }
    }
    if hits == 0 {
        return Err(Error::Degenerate("average precision needs at least one positive".into()));
    }
    Ok(sum / hits as f64)
}

/// 1-based ranks with ties sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| order_key(values[a]).total_cmp(&order_key(values[b])));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && order_key(values[order[j + 1]]) == order_key(values[order[i]]) {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 || vb == 0.0 {
        return None;
    }
    Some((cov / (va.sqrt() * vb.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman's rho: Pearson correlation of average ranks. A constant prediction
/// has no rank information and yields 0.
pub fn spearman(pred: &[f64], gold: &[f64]) -> Result<f64> {
    if pred.len() != gold.len() {
        return Err(Error::Degenerate(format!("length mismatch: {} predictions, {} gold", pred.len(), gold.len())));
    }
    if pred.len() < 2 {
        return Err(Error::Degenerate("spearman needs at least two items".into()));
    }
    if gold.iter().all(|g| *g == gold[0]) {
        return Err(Error::Degenerate("gold scores are constant".into()));
    }
    Ok(pearson(&average_ranks(pred), &average_ranks(gold)).unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ap_examples() {
        let r = [(5.0, true), (4.0, false), (3.0, true), (2.0, false), (1.0, false)];
        assert!((average_precision(&r).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(average_precision(&[(2.0, true), (1.0, false)]).unwrap(), 1.0);
        assert_eq!(average_precision(&[(2.0, false), (1.0, false), (0.0, true)]).unwrap(), 1.0 / 3.0);
        assert!(average_precision(&[(1.0, false)]).is_err());
    }

    #[test]
    fn ap_ties_keep_input_order() {
        let r = [(1.0, false), (1.0, true)];
        assert_eq!(average_precision(&r).unwrap(), 0.5);
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn spearman_examples() {
        let g = [1.0, 2.0, 3.0, 4.0];
        assert!((spearman(&g, &g).unwrap() - 1.0).abs() < 1e-15);
        let rev = [4.0, 3.0, 2.0, 1.0];
        assert!((spearman(&rev, &g).unwrap() + 1.0).abs() < 1e-15);
        assert!(spearman(&g, &[1.0; 4]).is_err());
        assert!(spearman(&g[..2], &g).is_err());
        assert!(spearman(&[1.0], &[1.0]).is_err());
        assert_eq!(spearman(&[3.0; 4], &g).unwrap(), 0.0);
    }
}
