use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::dataset::Benchmark;
use super::EvalResult;
use crate::extract::PairCounts;

/// One row per result, preceded by `# `-prefixed header lines.
pub fn results_tsv(results: &[EvalResult], header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("scorer\tbenchmark\tmetric\tvalue\tvalidation\tn_pairs\tn_oov\thyperparameters\tseed\n");
    for r in results {
        let validation = r.validation_value.map(|v| v.to_string()).unwrap_or_default();
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.scorer, r.benchmark, r.metric, r.value, validation, r.n_pairs, r.n_oov, r.hyperparameters, seed
        );
    }
    out
}

/// Scorers as rows, benchmarks as columns in the canonical order; values to two
/// decimals, `-` where a scorer was not run.
pub fn markdown_table(results: &[EvalResult], header: &[String]) -> String {
    let mut scorers: Vec<&str> = Vec::new();
    let mut cells: HashMap<(&str, &str), f64> = HashMap::new();
    for r in results {
        if !scorers.contains(&r.scorer.as_str()) {
            scorers.push(&r.scorer);
        }
        cells.insert((&r.scorer, &r.benchmark), r.value);
    }
    let present: Vec<&str> = Benchmark::ALL
        .iter()
        .map(|b| b.name())
        .filter(|b| results.iter().any(|r| r.benchmark == *b))
        .chain(results.iter().map(|r| r.benchmark.as_str()).filter(|b| b.parse::<Benchmark>().is_err()))
        .fold(Vec::new(), |mut acc, b| {
            if !acc.contains(&b) {
                acc.push(b);
            }
            acc
        });
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "<!-- {line} -->");
    }
    let _ = writeln!(out, "| scorer | {} |", present.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(present.len()));
    for s in scorers {
        let row: Vec<String> = present
            .iter()
            .map(|b| cells.get(&(s, *b)).map_or_else(|| "-".to_string(), |v| format!("{v:.2}")))
            .collect();
        let _ = writeln!(out, "| {s} | {} |", row.join(" | "));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewRow {
    pub rank: usize,
    pub term: String,
    /// Total count of extracted pairs the term occurs in, either slot.
    pub frequency: u64,
}

/// Terms ranked by their frequency in extracted pairs (descending, ties by term).
pub fn skew_histogram(counts: &PairCounts) -> Vec<SkewRow> {
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for (x, y, s) in counts.iter() {
        *freq.entry(x).or_default() += s.count;
        *freq.entry(y).or_default() += s.count;
    }
    let mut rows: Vec<(&str, u64)> = freq.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    rows.into_iter()
        .enumerate()
        .map(|(i, (term, frequency))| SkewRow { rank: i + 1, term: term.to_string(), frequency })
        .collect()
}

pub fn skew_tsv(rows: &[SkewRow], header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("rank\tterm\tfrequency\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}", r.rank, r.term, r.frequency);
    }
    out
}
