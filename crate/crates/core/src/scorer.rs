//! Pair scores from extraction counts: extraction probability, PPMI, and their
//! truncated-SVD smoothings.
//!
//! Matrix rows index the hyponym slot and columns the hypernym slot; one
//! vocabulary (sorted, shared) covers both.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::extract::PairCounts;
use crate::sparse::CsrMatrix;
use crate::svd::{truncated_svd, SvdModel};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Terms keep the given order; duplicates are rejected.
    pub fn from_terms(terms: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::Degenerate(format!("duplicate vocabulary term {t:?}")));
            }
        }
        Ok(Vocabulary { terms, index })
    }

    /// Sorted vocabulary of every term occurring in `counts`.
    pub fn from_counts(counts: &PairCounts) -> Self {
        let terms: Vec<String> = counts.terms().into_iter().map(str::to_string).collect();
        Vocabulary::from_terms(terms).expect("terms are unique")
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weighting {
    /// Extraction probability `w(x,y) / W`.
    Prob,
    Ppmi,
}

impl Weighting {
    /// Display name of the sparse scorer using this weighting.
    pub fn sparse_name(self) -> &'static str {
        match self {
            Weighting::Prob => "p(x,y)",
            Weighting::Ppmi => "ppmi(x,y)",
        }
    }

    /// Display name of the SVD-smoothed scorer using this weighting.
    pub fn smoothed_name(self) -> &'static str {
        match self {
            Weighting::Prob => "sp(x,y)",
            Weighting::Ppmi => "spmi(x,y)",
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weighting::Prob => "prob",
            Weighting::Ppmi => "ppmi",
        })
    }
}

impl FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prob" | "p" => Ok(Weighting::Prob),
            "ppmi" => Ok(Weighting::Ppmi),
            other => Err(Error::UnknownName { kind: "weighting", name: other.to_string(), valid: "prob, ppmi".into() }),
        }
    }
}

fn require_mass(counts: &PairCounts) -> Result<f64> {
    if counts.total() == 0 {
        return Err(Error::EmptyModel("no extractions (W = 0)".into()));
    }
    Ok(counts.total() as f64)
}

/// Extraction probability `w(x,y) / W`; zero for unobserved pairs.
pub fn prob(counts: &PairCounts, x: &str, y: &str) -> Result<f64> {
    let total = require_mass(counts)?;
    Ok(counts.count(x, y) as f64 / total)
}

/// Hyponym- and hypernym-slot marginals `p⁻`, `p⁺`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Marginals {
    pub hypo: HashMap<String, f64>,
    pub hyper: HashMap<String, f64>,
}

impl Marginals {
    pub fn hypo(&self, term: &str) -> f64 {
        self.hypo.get(term).copied().unwrap_or(0.0)
    }

    pub fn hyper(&self, term: &str) -> f64 {
        self.hyper.get(term).copied().unwrap_or(0.0)
    }
}

fn marginal_counts(counts: &PairCounts) -> (HashMap<&str, u64>, HashMap<&str, u64>) {
    let mut hypo: HashMap<&str, u64> = HashMap::new();
    let mut hyper: HashMap<&str, u64> = HashMap::new();
    for (x, y, s) in counts.iter() {
        *hypo.entry(x).or_default() += s.count;
        *hyper.entry(y).or_default() += s.count;
    }
    (hypo, hyper)
}

pub fn marginals(counts: &PairCounts) -> Result<Marginals> {
    let total = require_mass(counts)?;
    let (hypo, hyper) = marginal_counts(counts);
    let norm = |m: HashMap<&str, u64>| m.into_iter().map(|(k, v)| (k.to_string(), v as f64 / total)).collect();
    Ok(Marginals { hypo: norm(hypo), hyper: norm(hyper) })
}

/// `max(0, ln(p / (p⁻ p⁺)))` from integer counts; zero when any factor is zero.
fn ppmi_value(pair: u64, hypo_count: u64, hyper_count: u64, total: f64) -> f64 {
    if pair == 0 || hypo_count == 0 || hyper_count == 0 {
        return 0.0;
    }
    let p = pair as f64 / total;
    let p_hypo = hypo_count as f64 / total;
    let p_hyper = hyper_count as f64 / total;
    (p / (p_hypo * p_hyper)).ln().max(0.0)
}

pub fn ppmi(counts: &PairCounts, x: &str, y: &str) -> Result<f64> {
    let total = require_mass(counts)?;
    let pair = counts.count(x, y);
    if pair == 0 {
        return Ok(0.0);
    }
    let (hypo, hyper) = marginal_counts(counts);
    Ok(ppmi_value(pair, hypo[x], hyper[y], total))
}

/// Sparse weighted pair matrix over a shared vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMatrix {
    pub vocab: Vocabulary,
    pub weighting: Weighting,
    pub matrix: CsrMatrix,
    /// `p⁻` per vocabulary index.
    pub hypo_marginal: Vec<f64>,
    /// `p⁺` per vocabulary index.
    pub hyper_marginal: Vec<f64>,
}

impl PairMatrix {
    /// Stored weight, or `None` when either term is out of vocabulary.
    pub fn score(&self, x: &str, y: &str) -> Option<f64> {
        let (i, j) = (self.vocab.index_of(x)?, self.vocab.index_of(y)?);
        Some(self.matrix.get(i, j))
    }

    pub fn factorize(&self, rank: usize, seed: u64) -> Result<SmoothedModel> {
        let svd = truncated_svd(&self.matrix, rank, seed)?;
        Ok(SmoothedModel { vocab: self.vocab.clone(), weighting: self.weighting, svd })
    }
}

pub fn build_matrix(counts: &PairCounts, weighting: Weighting) -> Result<PairMatrix> {
    let total = require_mass(counts)?;
    let vocab = Vocabulary::from_counts(counts);
    let (hypo, hyper) = marginal_counts(counts);
    let m = vocab.len();
    let mut triplets = Vec::with_capacity(counts.len());
    for (x, y, s) in counts.iter() {
        let value = match weighting {
            Weighting::Prob => s.count as f64 / total,
            Weighting::Ppmi => ppmi_value(s.count, hypo[x], hyper[y], total),
        };
        let (i, j) = (vocab.index_of(x).expect("in vocab"), vocab.index_of(y).expect("in vocab"));
        triplets.push((i, j, value));
    }
    let matrix = CsrMatrix::from_triplets(m, m, triplets)?;
    let marginal = |table: &HashMap<&str, u64>| -> Vec<f64> {
        vocab.terms().iter().map(|t| table.get(t.as_str()).map_or(0.0, |&c| c as f64 / total)).collect()
    };
    Ok(PairMatrix { hypo_marginal: marginal(&hypo), hyper_marginal: marginal(&hyper), vocab, weighting, matrix })
}

/// Truncated-SVD smoothing of a [`PairMatrix`]; scores every in-vocabulary pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedModel {
    pub vocab: Vocabulary,
    pub weighting: Weighting,
    pub svd: SvdModel,
}

impl SmoothedModel {
    /// `u_xᵀ Σ_r v_y`, or `None` when either term is out of vocabulary.
    pub fn score(&self, x: &str, y: &str) -> Option<f64> {
        let (i, j) = (self.vocab.index_of(x)?, self.vocab.index_of(y)?);
        self.svd.reconstruct_entry(i, j).ok()
    }

    pub fn rank(&self) -> usize {
        self.svd.rank()
    }
}

/// spmi / sp score; errors with [`Error::Oov`] naming the missing term.
pub fn spmi(model: &SmoothedModel, x: &str, y: &str) -> Result<f64> {
    let i = model.vocab.index_of(x).ok_or_else(|| Error::Oov(x.to_string()))?;
    let j = model.vocab.index_of(y).ok_or_else(|| Error::Oov(y.to_string()))?;
    model.svd.reconstruct_entry(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(rows: &[(&str, &str, u64)]) -> PairCounts {
        let mut c = PairCounts::new();
        for (x, y, n) in rows {
            c.insert(x, y, *n, ["p".to_string(), "q".to_string()]);
        }
        c
    }

    #[test]
    fn prob_examples() {
        let c = counts(&[("a", "b", 3), ("c", "b", 1)]);
        assert_eq!(prob(&c, "a", "b").unwrap(), 0.75);
        assert_eq!(prob(&c, "c", "a").unwrap(), 0.0);
        assert_eq!(prob(&counts(&[("a", "b", 1)]), "a", "b").unwrap(), 1.0);
        assert!(matches!(prob(&PairCounts::new(), "a", "b"), Err(Error::EmptyModel(_))));
    }

    #[test]
    fn marginal_examples() {
        let m = marginals(&counts(&[("a", "b", 3), ("c", "b", 1)])).unwrap();
        assert_eq!(m.hypo("a"), 0.75);
        assert_eq!(m.hyper("b"), 1.0);
        assert_eq!(m.hypo("b"), 0.0);
        let sym = marginals(&counts(&[("a", "b", 1), ("b", "a", 1)])).unwrap();
        assert_eq!(sym.hypo("a"), 0.5);
        assert_eq!(sym.hyper("a"), 0.5);
    }

    #[test]
    fn ppmi_examples() {
        assert_eq!(ppmi(&counts(&[("a", "b", 1)]), "a", "b").unwrap(), 0.0);
        let two = counts(&[("a", "b", 1), ("c", "d", 1)]);
        assert!((ppmi(&two, "a", "b").unwrap() - 2f64.ln()).abs() < 1e-15);
        // p(a,d)=1/4 < p⁻(a) p⁺(d) = (2/4)(2/4)... clamp
        let mixed = counts(&[("a", "b", 1), ("a", "d", 1), ("c", "d", 2)]);
        let v = ppmi(&mixed, "a", "d").unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(ppmi(&two, "a", "d").unwrap(), 0.0);
    }

    #[test]
    fn build_two_pairs() {
        let two = counts(&[("a", "b", 1), ("c", "d", 1)]);
        let pm = build_matrix(&two, Weighting::Ppmi).unwrap();
        assert_eq!(pm.vocab.len(), 4);
        assert_eq!(pm.matrix.nnz(), 2);
        assert_eq!(pm.score("a", "b").unwrap(), ppmi(&two, "a", "b").unwrap());
        assert_eq!(pm.score("a", "c"), Some(0.0));
        assert_eq!(pm.score("a", "zzz"), None);
        let pp = build_matrix(&two, Weighting::Prob).unwrap();
        assert_eq!(pp.score("c", "d"), Some(0.5));
        assert_eq!(pm.hypo_marginal, vec![0.5, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn all_zero_ppmi_still_factorizes() {
        let one = counts(&[("a", "b", 1)]);
        let pm = build_matrix(&one, Weighting::Ppmi).unwrap();
        assert_eq!(pm.matrix.nnz(), 0);
        let model = pm.factorize(2, 42).unwrap();
        assert_eq!(spmi(&model, "a", "b").unwrap(), 0.0);
        assert!(matches!(spmi(&model, "a", "x"), Err(Error::Oov(_))));
        assert!(build_matrix(&PairCounts::new(), Weighting::Ppmi).is_err());
    }

    #[test]
    fn rank_one_recovers_log_two() {
        // one observed pair with ppmi ln 2 among otherwise-zero entries
        let c = counts(&[("a", "b", 1), ("c", "d", 1)]);
        let pm = build_matrix(&c, Weighting::Ppmi).unwrap();
        let model = pm.factorize(1, 42).unwrap();
        assert!((model.svd.singular_values()[0] - 2f64.ln()).abs() < 1e-12);
        let got = spmi(&model, "a", "b").unwrap() + spmi(&model, "c", "d").unwrap();
        assert!((got - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn weighting_parse() {
        assert_eq!("ppmi".parse::<Weighting>().unwrap(), Weighting::Ppmi);
        assert_eq!("prob".parse::<Weighting>().unwrap(), Weighting::Prob);
        assert!("lmi".parse::<Weighting>().is_err());
    }
}
