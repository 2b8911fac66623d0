//! Benchmark protocols over any [`Scorer`]: detection average precision, three
//! direction-classification protocols, graded Spearman correlation, and
//! hyperparameter sweeps.

mod dataset;
mod metrics;
mod protocols;
mod report;
mod sweep;

pub use dataset::{load_dataset, parse_dataset_str, Benchmark, DatasetRecord, Task};
pub use metrics::{average_precision, average_ranks, pearson, spearman};
pub use protocols::{
    bless_split, detection_eval, direction_bibless, direction_bibless_with, direction_bless, direction_wbless,
    direction_wbless_with, fit_threshold, graded_eval, run_benchmark, threshold_candidates, validation_metric,
    ProtocolOptions,
};
pub use report::{markdown_table, results_tsv, skew_histogram, skew_tsv, SkewRow};
pub use sweep::{sweep, SweepResult, DEFAULT_GRID};

use crate::dist::{DistributionalSpace, Measure};
use crate::model_io::Model;
use crate::scorer::{PairMatrix, SmoothedModel};

/// Scoring interface for the protocols. `None` marks an out-of-vocabulary pair.
pub trait Scorer: Sync {
    fn name(&self) -> String;

    /// Short hyperparameter descriptor such as `rank=50`; empty when none.
    fn hyperparameters(&self) -> String {
        String::new()
    }

    fn score(&self, x: &str, y: &str) -> Option<f64>;
}

impl<S: Scorer + ?Sized> Scorer for &S {
    fn name(&self) -> String {
        (**self).name()
    }

    fn hyperparameters(&self) -> String {
        (**self).hyperparameters()
    }

    fn score(&self, x: &str, y: &str) -> Option<f64> {
        (**self).score(x, y)
    }
}

impl Scorer for PairMatrix {
    fn name(&self) -> String {
        self.weighting.sparse_name().to_string()
    }

    fn score(&self, x: &str, y: &str) -> Option<f64> {
        PairMatrix::score(self, x, y)
    }
}

impl Scorer for SmoothedModel {
    fn name(&self) -> String {
        self.weighting.smoothed_name().to_string()
    }

    fn hyperparameters(&self) -> String {
        format!("rank={}", self.rank())
    }

    fn score(&self, x: &str, y: &str) -> Option<f64> {
        SmoothedModel::score(self, x, y)
    }
}

impl Scorer for Model {
    fn name(&self) -> String {
        match self {
            Model::Sparse(m) => m.name(),
            Model::Smoothed(m) => m.name(),
        }
    }

    fn hyperparameters(&self) -> String {
        match self {
            Model::Sparse(m) => m.hyperparameters(),
            Model::Smoothed(m) => m.hyperparameters(),
        }
    }

    fn score(&self, x: &str, y: &str) -> Option<f64> {
        Model::score(self, x, y)
    }
}

/// A distributional measure over a space. Pairs the measure cannot score
/// (unknown terms, zero median entropy) are reported as OOV.
#[derive(Debug, Clone, Copy)]
pub struct DistScorer<'a> {
    pub space: &'a DistributionalSpace,
    pub measure: Measure,
    pub top_n: usize,
}

impl Scorer for DistScorer<'_> {
    fn name(&self) -> String {
        self.measure.name().to_string()
    }

    fn hyperparameters(&self) -> String {
        if self.measure.uses_top_n() {
            format!("N={}", self.top_n)
        } else {
            String::new()
        }
    }

    fn score(&self, x: &str, y: &str) -> Option<f64> {
        self.space.measure(self.measure, x, y, self.top_n).ok()
    }
}

/// Wraps a closure as a named scorer.
pub struct FnScorer<F> {
    pub name: String,
    pub f: F,
}

impl<F: Fn(&str, &str) -> Option<f64> + Sync> FnScorer<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnScorer { name: name.into(), f }
    }
}

impl<F: Fn(&str, &str) -> Option<f64> + Sync> Scorer for FnScorer<F> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn score(&self, x: &str, y: &str) -> Option<f64> {
        (self.f)(x, y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub scorer: String,
    pub benchmark: String,
    /// `ap`, `accuracy` or `spearman`.
    pub metric: String,
    pub value: f64,
    /// Metric on the validation portion, where the protocol has one.
    pub validation_value: Option<f64>,
    pub n_pairs: usize,
    pub n_oov: usize,
    pub hyperparameters: String,
    pub seed: Option<u64>,
}
