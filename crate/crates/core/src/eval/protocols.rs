use rayon::prelude::*;

use super::dataset::{Benchmark, DatasetRecord, Task};
use super::metrics::{ap_of_labels, order_key, spearman};
use super::{EvalResult, Scorer};
use crate::dist::median;
use crate::error::{Error, Result};
use crate::rng::{iteration_rng, partial_shuffle, rng_from_seed};

/// Settings of the repeated random-split protocols.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolOptions {
    pub iterations: usize,
    pub validation_fraction: f64,
    /// Draws per iteration before a single-class validation split is an error.
    pub max_resamples: usize,
    pub jobs: usize,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        ProtocolOptions { iterations: 1000, validation_fraction: 0.02, max_resamples: 100, jobs: 1 }
    }
}

impl ProtocolOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        ProtocolOptions { jobs, ..ProtocolOptions::default() }
    }
}

/// Score with OOV (and NaN) mapped to `None`.
fn score<S: Scorer + ?Sized>(scorer: &S, x: &str, y: &str) -> Option<f64> {
    scorer.score(x, y).filter(|v| !v.is_nan())
}

fn result(scorer_name: String, benchmark: &str, metric: &str, value: f64, n_pairs: usize, n_oov: usize) -> EvalResult {
    EvalResult {
        scorer: scorer_name,
        benchmark: benchmark.to_string(),
        metric: metric.to_string(),
        value,
        validation_value: None,
        n_pairs,
        n_oov,
        hyperparameters: String::new(),
        seed: None,
    }
}

/// Global-ranking AP with `hyper` as the positive class. OOV pairs rank after
/// every scored pair, in input order.
pub fn detection_eval<S: Scorer + ?Sized>(scorer: &S, records: &[DatasetRecord]) -> Result<EvalResult> {
    let scores: Vec<Option<f64>> = records.iter().map(|r| score(scorer, &r.x, &r.y)).collect();
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| match (scores[a], scores[b]) {
        (Some(sa), Some(sb)) => order_key(sb).total_cmp(&order_key(sa)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    let ap = ap_of_labels(order.iter().map(|&i| records[i].is_hyper()))?;
    let n_oov = scores.iter().filter(|s| s.is_none()).count();
    Ok(result(scorer.name(), "detection", "ap", ap, records.len(), n_oov))
}

/// Seeded shuffle of the `hyper` records into (validation, test) with a
/// 10% / 90% split.
pub fn bless_split(records: &[DatasetRecord], seed: u64) -> (Vec<&DatasetRecord>, Vec<&DatasetRecord>) {
    let mut positives: Vec<&DatasetRecord> = records.iter().filter(|r| r.is_hyper()).collect();
    let n = positives.len();
    partial_shuffle(&mut rng_from_seed(seed), &mut positives, n);
    let n_val = (n as f64 * 0.1).round() as usize;
    let test = positives.split_off(n_val);
    (positives, test)
}

fn direction_correct<S: Scorer + ?Sized>(scorer: &S, r: &DatasetRecord) -> (bool, bool) {
    match (score(scorer, &r.x, &r.y), score(scorer, &r.y, &r.x)) {
        (Some(f), Some(b)) => (f > b, false),
        _ => (false, true),
    }
}

fn direction_accuracy<S: Scorer + ?Sized>(scorer: &S, records: &[&DatasetRecord]) -> (f64, usize) {
    let mut correct = 0usize;
    let mut oov = 0usize;
    for r in records {
        let (ok, missing) = direction_correct(scorer, r);
        correct += ok as usize;
        oov += missing as usize;
    }
    (correct as f64 / records.len() as f64, oov)
}

/// Fraction of held-out `hyper` pairs with `s(x, y) > s(y, x)`; ties and OOV
/// count as incorrect.
pub fn direction_bless<S: Scorer + ?Sized>(scorer: &S, records: &[DatasetRecord], seed: u64) -> Result<EvalResult> {
    let (val, test) = bless_split(records, seed);
    if test.is_empty() {
        return Err(Error::Degenerate("direction test split is empty".into()));
    }
    let (accuracy, n_oov) = direction_accuracy(scorer, &test);
    let mut out = result(scorer.name(), "dir-bless", "accuracy", accuracy, test.len(), n_oov);
    out.validation_value = (!val.is_empty()).then(|| direction_accuracy(scorer, &val).0);
    out.seed = Some(seed);
    Ok(out)
}

/// Candidate thresholds for `value ≥ t` rules over the given scores: `-∞`,
/// the midpoint of each pair of consecutive distinct values (the upper value
/// when the lower one is `-∞`), and `+∞`, in ascending order.
pub fn threshold_candidates(values: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.iter().map(|&v| order_key(v)).collect();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut out = Vec::with_capacity(sorted.len() + 2);
    out.push(f64::NEG_INFINITY);
    for w in sorted.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = (a + b) / 2.0;
        out.push(if a == f64::NEG_INFINITY || !mid.is_finite() || mid <= a { b } else { mid });
    }
    out.push(f64::INFINITY);
    out.dedup();
    out
}

/// Candidate maximizing `accuracy`; ties go to the smaller threshold.
pub fn fit_threshold(candidates: &[f64], mut accuracy: impl FnMut(f64) -> f64) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &t in candidates {
        let acc = accuracy(t);
        if acc > best.1 {
            best = (t, acc);
        }
    }
    best
}

/// One pair prepared for threshold protocols.
#[derive(Debug, Clone, Copy)]
struct Item {
    /// Thresholded value.
    value: f64,
    /// Prediction when `value ≥ t`.
    above: u8,
    /// Prediction when `value < t`.
    below: u8,
    gold: u8,
}

impl Item {
    fn predict(&self, t: f64) -> u8 {
        if self.value >= t {
            self.above
        } else {
            self.below
        }
    }
}

fn accuracy_on(items: &[Item], idx: &[usize], t: f64) -> f64 {
    let correct = idx.iter().filter(|&&i| items[i].predict(t) == items[i].gold).count();
    correct as f64 / idx.len() as f64
}

fn one_iteration(items: &[Item], seed: u64, iteration: usize, n_val: usize, opts: &ProtocolOptions) -> Result<f64> {
    let n = items.len();
    let mut rng = iteration_rng(seed, iteration as u64);
    for _ in 0..opts.max_resamples.max(1) {
        let mut idx: Vec<usize> = (0..n).collect();
        partial_shuffle(&mut rng, &mut idx, n_val);
        let (val, test) = idx.split_at(n_val);
        let first = items[val[0]].gold;
        if val.iter().all(|&i| items[i].gold == first) {
            continue;
        }
        let values: Vec<f64> = val.iter().map(|&i| items[i].value).collect();
        let (t, _) = fit_threshold(&threshold_candidates(&values), |t| accuracy_on(items, val, t));
        return Ok(accuracy_on(items, test, t));
    }
    Err(Error::Degenerate(format!(
        "iteration {iteration}: validation split had a single class after {} draws",
        opts.max_resamples
    )))
}

fn repeated_threshold_protocol(items: &[Item], seed: u64, opts: &ProtocolOptions) -> Result<f64> {
    let n = items.len();
    if opts.iterations == 0 {
        return Err(Error::Degenerate("protocol needs at least one iteration".into()));
    }
    let n_val = ((n as f64 * opts.validation_fraction).round() as usize).max(2);
    if n_val >= n {
        return Err(Error::Degenerate(format!("{n} pairs leave no test split")));
    }
    if items.iter().all(|it| it.gold == items[0].gold) {
        return Err(Error::Degenerate("dataset has a single class".into()));
    }
    let run = |i: usize| one_iteration(items, seed, i, n_val, opts);
    let accuracies: Vec<Result<f64>> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Degenerate(format!("thread pool: {e}")))?;
        pool.install(|| (0..opts.iterations).into_par_iter().map(run).collect())
    } else {
        (0..opts.iterations).map(run).collect()
    };
    let mut sum = 0.0;
    for a in accuracies {
        sum += a?;
    }
    Ok(sum / opts.iterations as f64)
}

const HYPER: u8 = 0;
const HYPO: u8 = 1;
const OTHER: u8 = 2;

fn pair_scores<S: Scorer + ?Sized>(scorer: &S, r: &DatasetRecord) -> (f64, f64, bool) {
    let f = score(scorer, &r.x, &r.y);
    let b = score(scorer, &r.y, &r.x);
    let oov = f.is_none() || b.is_none();
    (f.unwrap_or(f64::NEG_INFINITY), b.unwrap_or(f64::NEG_INFINITY), oov)
}

/// Mean accuracy over repeated 2% validation / 98% test splits. A pair is
/// predicted `hyper` iff `s(x, y) ≥ t` and `s(x, y) > s(y, x)`, with `t` fitted
/// on validation accuracy.
pub fn direction_wbless<S: Scorer + ?Sized>(
    scorer: &S,
    records: &[DatasetRecord],
    seed: u64,
    jobs: usize,
) -> Result<EvalResult> {
    direction_wbless_with(scorer, records, seed, &ProtocolOptions::with_jobs(jobs))
}

pub fn direction_wbless_with<S: Scorer + ?Sized>(
    scorer: &S,
    records: &[DatasetRecord],
    seed: u64,
    opts: &ProtocolOptions,
) -> Result<EvalResult> {
    let mut n_oov = 0;
    let items: Vec<Item> = records
        .iter()
        .map(|r| {
            let (f, b, oov) = pair_scores(scorer, r);
            n_oov += oov as usize;
            Item {
                value: f,
                above: if f > b { HYPER } else { OTHER },
                below: OTHER,
                gold: if r.is_hyper() { HYPER } else { OTHER },
            }
        })
        .collect();
    let mean = repeated_threshold_protocol(&items, seed, opts)?;
    let mut out = result(scorer.name(), "dir-wbless", "accuracy", mean, records.len(), n_oov);
    out.seed = Some(seed);
    Ok(out)
}

/// Two-stage variant: `max(s(x, y), s(y, x)) ≥ t` detects a hypernymy relation
/// in either direction, then the larger direction decides `hyper` vs `hypo`.
pub fn direction_bibless<S: Scorer + ?Sized>(
    scorer: &S,
    records: &[DatasetRecord],
    seed: u64,
    jobs: usize,
) -> Result<EvalResult> {
    direction_bibless_with(scorer, records, seed, &ProtocolOptions::with_jobs(jobs))
}

pub fn direction_bibless_with<S: Scorer + ?Sized>(
    scorer: &S,
    records: &[DatasetRecord],
    seed: u64,
    opts: &ProtocolOptions,
) -> Result<EvalResult> {
    let mut n_oov = 0;
    let mut items = Vec::with_capacity(records.len());
    for r in records {
        let gold = match r.relation.as_str() {
            "hyper" => HYPER,
            "hypo" => HYPO,
            "other" => OTHER,
            other => {
                return Err(Error::Degenerate(format!("unexpected label {other:?} (expected hyper, hypo, other)")))
            }
        };
        let (f, b, oov) = pair_scores(scorer, r);
        n_oov += oov as usize;
        items.push(Item { value: f.max(b), above: if f > b { HYPER } else { HYPO }, below: OTHER, gold });
    }
    let mean = repeated_threshold_protocol(&items, seed, opts)?;
    let mut out = result(scorer.name(), "dir-bibless", "accuracy", mean, records.len(), n_oov);
    out.seed = Some(seed);
    Ok(out)
}

fn is_test_fold(r: &DatasetRecord) -> bool {
    r.fold.as_deref() == Some("test")
}

/// Spearman's rho against gold scores. OOV pairs take the median score of the
/// in-vocabulary training pairs. With fold tags, the training pairs are those
/// not tagged `test` and only `test` pairs are evaluated; otherwise all pairs
/// serve both roles.
pub fn graded_eval<S: Scorer + ?Sized>(scorer: &S, records: &[DatasetRecord]) -> Result<EvalResult> {
    let has_test = records.iter().any(is_test_fold);
    let scores: Vec<Option<f64>> = records.iter().map(|r| score(scorer, &r.x, &r.y)).collect();
    let train: Vec<f64> =
        records.iter().zip(&scores).filter(|(r, _)| !(has_test && is_test_fold(r))).filter_map(|(_, s)| *s).collect();
    let in_vocab: Vec<f64> = scores.iter().flatten().copied().collect();
    let fill = median(&train)
        .or_else(|| median(&in_vocab))
        .ok_or_else(|| Error::Degenerate("every graded pair is out of vocabulary".into()))?;
    let mut pred = Vec::new();
    let mut gold = Vec::new();
    let mut n_oov = 0;
    for (r, s) in records.iter().zip(&scores) {
        if has_test && !is_test_fold(r) {
            continue;
        }
        let g = r.gold_score.ok_or_else(|| Error::Degenerate(format!("pair ({}, {}) has no gold score", r.x, r.y)))?;
        n_oov += s.is_none() as usize;
        pred.push(s.unwrap_or(fill));
        gold.push(g);
    }
    let rho = spearman(&pred, &gold)?;
    Ok(result(scorer.name(), "hyperlex", "spearman", rho, pred.len(), n_oov))
}

fn is_validation_fold(r: &DatasetRecord) -> bool {
    matches!(r.fold.as_deref(), Some("val" | "validation" | "dev"))
}

/// Metric used to select hyperparameters. Detection uses records tagged
/// `val`/`validation`/`dev` when present (all records otherwise); BLESS
/// direction uses its 10% validation split; graded uses the non-test pairs;
/// the repeated-split protocols use their mean accuracy.
pub fn validation_metric<S: Scorer + ?Sized>(
    benchmark: Benchmark,
    scorer: &S,
    records: &[DatasetRecord],
    seed: u64,
    opts: &ProtocolOptions,
) -> Result<f64> {
    match benchmark.task() {
        Task::Detection => {
            let val: Vec<DatasetRecord> = records.iter().filter(|r| is_validation_fold(r)).cloned().collect();
            let subset = if val.is_empty() { records } else { &val };
            Ok(detection_eval(scorer, subset)?.value)
        }
        Task::DirectionBless => {
            let (val, _) = bless_split(records, seed);
            if val.is_empty() {
                return Err(Error::Degenerate("direction validation split is empty".into()));
            }
            Ok(direction_accuracy(scorer, &val).0)
        }
        Task::DirectionWbless => Ok(direction_wbless_with(scorer, records, seed, opts)?.value),
        Task::DirectionBibless => Ok(direction_bibless_with(scorer, records, seed, opts)?.value),
        Task::Graded => {
            let train: Vec<DatasetRecord> = records.iter().filter(|r| !is_test_fold(r)).cloned().collect();
            let subset = if train.is_empty() { records } else { &train };
            Ok(graded_eval(scorer, subset)?.value)
        }
    }
}

/// Runs the protocol of `benchmark` and labels the result.
pub fn run_benchmark<S: Scorer + ?Sized>(
    benchmark: Benchmark,
    scorer: &S,
    records: &[DatasetRecord],
    seed: u64,
    opts: &ProtocolOptions,
) -> Result<EvalResult> {
    let mut out = match benchmark.task() {
        Task::Detection => detection_eval(scorer, records)?,
        Task::DirectionBless => direction_bless(scorer, records, seed)?,
        Task::DirectionWbless => direction_wbless_with(scorer, records, seed, opts)?,
        Task::DirectionBibless => direction_bibless_with(scorer, records, seed, opts)?,
        Task::Graded => graded_eval(scorer, records)?,
    };
    out.benchmark = benchmark.name().to_string();
    out.hyperparameters = scorer.hyperparameters();
    out.seed = Some(seed);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::FnScorer;

    fn rec(x: &str, y: &str, rel: &str) -> DatasetRecord {
        DatasetRecord::new(x, y, rel)
    }

    fn numbered(n: usize, rel: impl Fn(usize) -> &'static str) -> Vec<DatasetRecord> {
        (0..n).map(|i| rec(&format!("x{i}"), &format!("y{i}"), rel(i))).collect()
    }

    fn index_of(term: &str) -> f64 {
        term[1..].parse().unwrap()
    }

    #[test]
    fn detection_constant_scorer_is_prevalence_under_input_order() {
        let recs =
            vec![rec("a", "b", "hyper"), rec("c", "d", "random"), rec("e", "f", "hyper"), rec("g", "h", "random")];
        let s = FnScorer::new("const", |_: &str, _: &str| Some(1.0));
        // hyper at ranks 1 and 3: (1 + 2/3) / 2
        assert!((detection_eval(&s, &recs).unwrap().value - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn detection_oov_ranks_last() {
        let recs = vec![rec("a", "b", "hyper"), rec("c", "d", "random")];
        let s = FnScorer::new("s", |x: &str, _: &str| if x == "a" { None } else { Some(-1e300) });
        let r = detection_eval(&s, &recs).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.n_oov, 1);
    }

    #[test]
    fn bless_direction_rules() {
        let recs = numbered(20, |_| "hyper");
        let ideal = FnScorer::new("ideal", |x: &str, _: &str| Some(if x.starts_with('x') { 1.0 } else { 0.0 }));
        assert_eq!(direction_bless(&ideal, &recs, 42).unwrap().value, 1.0);
        let tie = FnScorer::new("tie", |_: &str, _: &str| Some(0.5));
        assert_eq!(direction_bless(&tie, &recs, 42).unwrap().value, 0.0);
        let (val, test) = bless_split(&recs, 42);
        assert_eq!((val.len(), test.len()), (2, 18));
        assert!(direction_bless(&ideal, &[], 42).is_err());
    }

    #[test]
    fn candidates_and_fit() {
        assert_eq!(threshold_candidates(&[3.0, 1.0, 1.0]), vec![f64::NEG_INFINITY, 2.0, f64::INFINITY]);
        assert_eq!(threshold_candidates(&[f64::NEG_INFINITY, 4.0]), vec![f64::NEG_INFINITY, 4.0, f64::INFINITY]);
        let (t, acc) = fit_threshold(&[1.0, 2.0, 3.0], |_| 0.5);
        assert_eq!((t, acc), (1.0, 0.5));
    }

    #[test]
    fn wbless_separable_is_perfect_and_deterministic() {
        let recs = numbered(200, |i| if i % 2 == 0 { "hyper" } else { "random" });
        let s = FnScorer::new("sep", |x: &str, y: &str| {
            let (i, forward) = if x.starts_with('x') { (index_of(x), true) } else { (index_of(y), false) };
            let hyper = (i as usize).is_multiple_of(2);
            Some(match (hyper, forward) {
                (true, true) => 2.0,
                (true, false) => 1.0,
                _ => 0.0,
            })
        });
        let a = direction_wbless(&s, &recs, 42, 1).unwrap().value;
        assert_eq!(a, 1.0);
        let opts = ProtocolOptions { iterations: 50, ..ProtocolOptions::default() };
        let b = direction_wbless_with(&s, &recs, 7, &opts).unwrap().value;
        let c = direction_wbless_with(&s, &recs, 7, &ProtocolOptions { jobs: 4, ..opts }).unwrap().value;
        assert_eq!(b.to_bits(), c.to_bits());
    }

    #[test]
    fn bibless_threshold_above_everything_predicts_other() {
        let recs = numbered(1000, |i| ["hyper", "hypo", "other", "other"][i % 4]);
        // identical scores: the fitted threshold may still be -inf; check the forced
        // prediction directly
        let item = Item { value: 5.0, above: HYPER, below: OTHER, gold: OTHER };
        assert_eq!(item.predict(f64::INFINITY), OTHER);
        let ideal = FnScorer::new("ideal", |x: &str, y: &str| {
            let i = if x.starts_with('x') { index_of(x) } else { index_of(y) } as usize;
            let forward = x.starts_with('x');
            Some(match (i % 4, forward) {
                (0, true) | (1, false) => 2.0,
                (0, false) | (1, true) => 1.0,
                _ => 0.0,
            })
        });
        assert_eq!(direction_bibless(&ideal, &recs, 42, 2).unwrap().value, 1.0);
        assert!(direction_bibless(&ideal, &numbered(2, |_| "hyper"), 42, 1).is_err());
    }

    #[test]
    fn graded_median_imputation() {
        let mut recs = Vec::new();
        for (x, g) in [("a", 1.0), ("b", 2.0), ("c", 3.0), ("d", 4.0)] {
            let mut r = rec(x, "z", "hyper");
            r.gold_score = Some(g);
            recs.push(r);
        }
        let s = FnScorer::new("s", |x: &str, _: &str| match x {
            "a" => Some(1.0),
            "d" => Some(9.0),
            _ => None,
        });
        // b and c take median(1, 9) = 5: pred ranks 1, 2.5, 2.5, 4
        let r = graded_eval(&s, &recs).unwrap();
        assert_eq!(r.n_oov, 2);
        assert!((r.value - 0.9486832980505138).abs() < 1e-12);
        let none = FnScorer::new("none", |_: &str, _: &str| None);
        assert!(graded_eval(&none, &recs).is_err());
    }
}
