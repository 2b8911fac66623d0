//! Distributional-inclusion and informativeness baselines over a sparse,
//! non-negative term-by-context space.
//!
//! A [`DistributionalSpace`] holds PPMI weights for the inclusion measures and
//! the raw co-occurrence counts used for context entropies. It is either built
//! from a corpus with a symmetric lemma window ([`build_window_space`]) or loaded
//! from the HKDS1 text format:
//!
//! ```text
//! weights:  HKDS1 <num_terms> <num_contexts>
//!           term<TAB>ctx:value ctx:value ...
//! contexts: index<TAB>context<TAB>raw_count_marginal
//! counts:   same layout as weights, raw co-occurrence counts
//! ```
//!
//! Lines starting with `#` are allowed before the `HKDS1` header and anywhere in
//! the contexts file.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::corpus::AnnotatedSentence;
use crate::error::{Error, Result};
use crate::scorer::Vocabulary;
use crate::sparse::CsrMatrix;

pub const DEFAULT_WINDOW: usize = 2;
pub const DEFAULT_MIN_COUNT: u64 = 100;

const SPACE_MAGIC: &str = "HKDS1";

/// Borrowed sparse vector with strictly increasing indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparseVec<'a> {
    pub indices: &'a [usize],
    pub values: &'a [f64],
}

impl<'a> SparseVec<'a> {
    pub fn new(indices: &'a [usize], values: &'a [f64]) -> Self {
        debug_assert_eq!(indices.len(), values.len());
        SparseVec { indices, values }
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Calls `f(x_i, y_i)` for every index in the union of both supports.
    fn zip_union(self, other: SparseVec<'_>, mut f: impl FnMut(f64, f64)) {
        let (mut i, mut j) = (0, 0);
        while i < self.indices.len() || j < other.indices.len() {
            let a = self.indices.get(i).copied().unwrap_or(usize::MAX);
            let b = other.indices.get(j).copied().unwrap_or(usize::MAX);
            if a == b {
                f(self.values[i], other.values[j]);
                i += 1;
                j += 1;
            } else if a < b {
                f(self.values[i], 0.0);
                i += 1;
            } else {
                f(0.0, other.values[j]);
                j += 1;
            }
        }
    }
}

fn positive_mass(v: SparseVec<'_>, what: &str) -> Result<f64> {
    let s = v.sum();
    if s > 0.0 {
        Ok(s)
    } else {
        Err(Error::Degenerate(format!("{what} vector has zero mass")))
    }
}

pub fn cosine(x: SparseVec<'_>, y: SparseVec<'_>) -> Result<f64> {
    let (nx, ny) = (x.norm(), y.norm());
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::Degenerate("cosine of a zero vector".into()));
    }
    let mut dot = 0.0;
    x.zip_union(y, |a, b| dot += a * b);
    Ok(dot / (nx * ny))
}

/// Share of `x`'s mass on features that are also active for `y`.
pub fn weeds_prec(x: SparseVec<'_>, y: SparseVec<'_>) -> Result<f64> {
    let total = positive_mass(x, "x")?;
    let mut shared = 0.0;
    x.zip_union(y, |a, b| {
        if b > 0.0 {
            shared += a;
        }
    });
    Ok(shared / total)
}

/// Degree of inclusion of `x` in `y`: `Σ min(xᵢ, yᵢ) / Σ xᵢ`.
pub fn cl(x: SparseVec<'_>, y: SparseVec<'_>) -> Result<f64> {
    let total = positive_mass(x, "x")?;
    let mut overlap = 0.0;
    x.zip_union(y, |a, b| overlap += a.min(b));
    Ok(overlap / total)
}

/// `sqrt(cl(x, y) · (1 − cl(y, x)))`.
pub fn inv_cl(x: SparseVec<'_>, y: SparseVec<'_>) -> Result<f64> {
    let forward = cl(x, y)?;
    let backward = cl(y, x)?;
    Ok((forward * (1.0 - backward)).max(0.0).sqrt())
}

/// Shannon entropy in bits of the distribution proportional to `counts`.
pub fn entropy_bits(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

/// Median with the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionalSpace {
    terms: Vocabulary,
    contexts: Vec<String>,
    /// Raw count marginal per context, as recorded in the contexts file.
    context_marginals: Vec<f64>,
    weights: CsrMatrix,
    counts: CsrMatrix,
    /// Entropy in bits of `p(t | c)` over the raw counts, per context.
    context_entropy: Vec<f64>,
}

impl DistributionalSpace {
    /// Assembles a space, validating shapes, non-negativity and non-empty rows.
    pub fn new(
        terms: Vocabulary,
        contexts: Vec<String>,
        context_marginals: Vec<f64>,
        weights: CsrMatrix,
        counts: CsrMatrix,
    ) -> Result<Self> {
        let (m, k) = (terms.len(), contexts.len());
        if m == 0 {
            return Err(Error::EmptyModel("distributional space has no terms".into()));
        }
        if weights.rows() != m || counts.rows() != m || weights.cols() != k || counts.cols() != k {
            return Err(Error::Model("space matrix shapes disagree with vocabularies".into()));
        }
        if context_marginals.len() != k {
            return Err(Error::Model("context marginal count disagrees with context vocabulary".into()));
        }
        let nonneg = |vals: &[f64]| vals.iter().all(|v| v.is_finite() && *v >= 0.0);
        if !nonneg(weights.values()) || !nonneg(counts.values()) || !nonneg(&context_marginals) {
            return Err(Error::Model("space entries must be finite and non-negative".into()));
        }
        for r in 0..m {
            if weights.row(r).1.iter().all(|&v| v == 0.0) {
                return Err(Error::Model(format!("term {:?} has an empty weight vector", terms.terms()[r])));
            }
        }
        let transposed = counts.transpose();
        let context_entropy = (0..k).map(|c| entropy_bits(transposed.row(c).1)).collect();
        Ok(DistributionalSpace { terms, contexts, context_marginals, weights, counts, context_entropy })
    }

    pub fn terms(&self) -> &Vocabulary {
        &self.terms
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn context_marginals(&self) -> &[f64] {
        &self.context_marginals
    }

    pub fn weights(&self) -> &CsrMatrix {
        &self.weights
    }

    pub fn counts(&self) -> &CsrMatrix {
        &self.counts
    }

    pub fn context_entropy(&self, context: usize) -> Option<f64> {
        self.context_entropy.get(context).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.index_of(term).is_some()
    }

    /// PPMI-weighted vector of `term`.
    pub fn vector(&self, term: &str) -> Result<SparseVec<'_>> {
        let i = self.terms.index_of(term).ok_or_else(|| Error::Oov(term.to_string()))?;
        let (idx, vals) = self.weights.row(i);
        Ok(SparseVec::new(idx, vals))
    }

    pub fn cosine(&self, x: &str, y: &str) -> Result<f64> {
        cosine(self.vector(x)?, self.vector(y)?)
    }

    pub fn weeds_prec(&self, x: &str, y: &str) -> Result<f64> {
        weeds_prec(self.vector(x)?, self.vector(y)?)
    }

    pub fn cl(&self, x: &str, y: &str) -> Result<f64> {
        cl(self.vector(x)?, self.vector(y)?)
    }

    pub fn inv_cl(&self, x: &str, y: &str) -> Result<f64> {
        inv_cl(self.vector(x)?, self.vector(y)?)
    }

    /// Indices of the `n` highest-weighted contexts of `term`, ties by index.
    pub fn top_contexts(&self, term: &str, n: usize) -> Result<Vec<usize>> {
        let v = self.vector(term)?;
        let mut order: Vec<(usize, f64)> =
            v.indices.iter().copied().zip(v.values.iter().copied()).filter(|(_, w)| *w > 0.0).collect();
        order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        order.truncate(n);
        Ok(order.into_iter().map(|(c, _)| c).collect())
    }

    /// Median entropy of the term's top-`n` contexts.
    pub fn slqs_entropy(&self, term: &str, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Degenerate("SLQS needs N >= 1".into()));
        }
        let top = self.top_contexts(term, n)?;
        let entropies: Vec<f64> = top.iter().map(|&c| self.context_entropy[c]).collect();
        median(&entropies).ok_or_else(|| Error::Degenerate(format!("term {term:?} has no contexts")))
    }

    /// `1 − E_x / E_y`.
    pub fn slqs(&self, x: &str, y: &str, n: usize) -> Result<f64> {
        let ex = self.slqs_entropy(x, n)?;
        let ey = self.slqs_entropy(y, n)?;
        if ey == 0.0 {
            return Err(Error::Degenerate(format!("median context entropy of {y:?} is zero")));
        }
        Ok(1.0 - ex / ey)
    }

    pub fn slqs_cos(&self, x: &str, y: &str, n: usize) -> Result<f64> {
        Ok(self.slqs(x, y, n)? * self.cosine(x, y)?)
    }

    pub fn measure(&self, measure: Measure, x: &str, y: &str, n: usize) -> Result<f64> {
        match measure {
            Measure::Cosine => self.cosine(x, y),
            Measure::WeedsPrec => self.weeds_prec(x, y),
            Measure::Cl => self.cl(x, y),
            Measure::InvCl => self.inv_cl(x, y),
            Measure::Slqs => self.slqs(x, y, n),
            Measure::SlqsCos => self.slqs_cos(x, y, n),
        }
    }

    /// Writes the weights, contexts and counts files.
    pub fn save<W1: Write, W2: Write, W3: Write>(
        &self,
        weights: W1,
        contexts: W2,
        counts: W3,
        header: &[String],
    ) -> Result<()> {
        write_matrix(weights, &self.terms, &self.weights, self.contexts.len(), header)?;
        write_matrix(counts, &self.terms, &self.counts, self.contexts.len(), header)?;
        let mut w = contexts;
        for line in header {
            writeln!(w, "# {line}")?;
        }
        for (i, (c, m)) in self.contexts.iter().zip(&self.context_marginals).enumerate() {
            writeln!(w, "{i}\t{c}\t{m}")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load<R1: BufRead, R2: BufRead, R3: BufRead>(weights: R1, contexts: R2, counts: R3) -> Result<Self> {
        let (contexts, marginals) = read_contexts(contexts)?;
        let k = contexts.len();
        let (terms, weights) = read_matrix(weights, "weights", k)?;
        let (count_terms, counts) = read_matrix(counts, "counts", k)?;
        if count_terms != terms {
            return Err(Error::Model("weights and counts files list different terms".into()));
        }
        let vocab = Vocabulary::from_terms(terms).map_err(|e| Error::Model(e.to_string()))?;
        DistributionalSpace::new(vocab, contexts, marginals, weights, counts)
    }

    pub fn load_str(weights: &str, contexts: &str, counts: &str) -> Result<Self> {
        Self::load(weights.as_bytes(), contexts.as_bytes(), counts.as_bytes())
    }
}

fn write_matrix<W: Write>(
    mut w: W,
    terms: &Vocabulary,
    matrix: &CsrMatrix,
    num_contexts: usize,
    header: &[String],
) -> Result<()> {
    for line in header {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "{SPACE_MAGIC} {} {num_contexts}", terms.len())?;
    let mut line = String::new();
    for (r, term) in terms.terms().iter().enumerate() {
        line.clear();
        line.push_str(term);
        line.push('\t');
        let (idx, vals) = matrix.row(r);
        for (n, (c, v)) in idx.iter().zip(vals).enumerate() {
            if n > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{c}:{v}");
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

fn parse_num<T: FromStr>(text: &str, source: &str, line: usize, what: &str) -> Result<T> {
    text.parse().map_err(|_| Error::parse(source, line, format!("invalid {what} {text:?}")))
}

fn read_matrix<R: BufRead>(reader: R, source: &str, num_contexts: usize) -> Result<(Vec<String>, CsrMatrix)> {
    let mut header: Option<(usize, usize)> = None;
    let mut terms = Vec::new();
    let mut triplets = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        let Some((expected_terms, _)) = header else {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != SPACE_MAGIC {
                return Err(Error::parse(source, line_no, "expected header `HKDS1 <num_terms> <num_contexts>`"));
            }
            let t: usize = parse_num(parts[1], source, line_no, "term count")?;
            let c: usize = parse_num(parts[2], source, line_no, "context count")?;
            if c != num_contexts {
                return Err(Error::parse(
                    source,
                    line_no,
                    format!("header declares {c} contexts but the context file has {num_contexts}"),
                ));
            }
            header = Some((t, c));
            continue;
        };
        if line.is_empty() {
            continue;
        }
        let (term, rest) =
            line.split_once('\t').ok_or_else(|| Error::parse(source, line_no, "expected `term<TAB>features`"))?;
        if term.is_empty() {
            return Err(Error::parse(source, line_no, "empty term"));
        }
        if terms.len() == expected_terms {
            return Err(Error::parse(source, line_no, format!("more than the declared {expected_terms} terms")));
        }
        let row = terms.len();
        terms.push(term.to_string());
        for item in rest.split_whitespace() {
            let (c, v) = item
                .split_once(':')
                .ok_or_else(|| Error::parse(source, line_no, format!("expected `index:value`, found {item:?}")))?;
            let c: usize = parse_num(c, source, line_no, "context index")?;
            let v: f64 = parse_num(v, source, line_no, "value")?;
            if c >= num_contexts {
                return Err(Error::parse(source, line_no, format!("context index {c} out of range")));
            }
            if !v.is_finite() || v < 0.0 {
                return Err(Error::parse(source, line_no, format!("value {v} must be finite and non-negative")));
            }
            triplets.push((row, c, v));
        }
    }
    let Some((expected_terms, _)) = header else {
        return Err(Error::parse(source, 0, "missing HKDS1 header"));
    };
    if terms.len() != expected_terms {
        return Err(Error::parse(
            source,
            0,
            format!("header declares {expected_terms} terms but {} were listed", terms.len()),
        ));
    }
    let matrix = CsrMatrix::from_triplets(terms.len(), num_contexts, triplets)
        .map_err(|e| Error::parse(source, 0, e.to_string()))?;
    Ok((terms, matrix))
}

fn read_contexts<R: BufRead>(reader: R) -> Result<(Vec<String>, Vec<f64>)> {
    let source = "contexts";
    let mut contexts = Vec::new();
    let mut marginals = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::parse(source, line_no, format!("expected 3 columns, found {}", cols.len())));
        }
        let index: usize = parse_num(cols[0], source, line_no, "context index")?;
        if index != contexts.len() {
            return Err(Error::parse(source, line_no, format!("expected context index {}", contexts.len())));
        }
        let marginal: f64 = parse_num(cols[2], source, line_no, "marginal")?;
        if !marginal.is_finite() || marginal < 0.0 {
            return Err(Error::parse(source, line_no, "marginal must be finite and non-negative"));
        }
        contexts.push(cols[1].to_string());
        marginals.push(marginal);
    }
    Ok((contexts, marginals))
}

/// Symmetric-window lemma co-occurrence counts within sentences.
pub fn cooccurrence_counts(sentences: &[AnnotatedSentence], window: usize) -> BTreeMap<String, BTreeMap<String, u64>> {
    let mut out: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    for s in sentences {
        for i in 0..s.len() {
            let lo = i.saturating_sub(window);
            let hi = (i + window + 1).min(s.len());
            for j in (lo..hi).filter(|&j| j != i) {
                *out.entry(s.lemma(i).to_string()).or_default().entry(s.lemma(j).to_string()).or_default() += 1;
            }
        }
    }
    out
}

/// PPMI-weighted window space over lemmas occurring at least `min_count` times.
/// Both terms and contexts are restricted to frequent lemmas; terms whose PPMI
/// row is entirely zero are dropped.
pub fn build_window_space(
    sentences: &[AnnotatedSentence],
    window: usize,
    min_count: u64,
) -> Result<DistributionalSpace> {
    if window == 0 {
        return Err(Error::Degenerate("window must be at least 1".into()));
    }
    if sentences.iter().all(|s| s.is_empty()) {
        return Err(Error::EmptyModel("empty corpus".into()));
    }
    let mut freq: HashMap<&str, u64> = HashMap::new();
    for s in sentences {
        for t in &s.tokens {
            *freq.entry(t.lemma.as_str()).or_default() += 1;
        }
    }
    let keep = |l: &str| freq.get(l).is_some_and(|&f| f >= min_count);
    let co = cooccurrence_counts(sentences, window);
    let mut context_set: BTreeMap<&str, u64> = BTreeMap::new();
    let mut rows: Vec<(&str, Vec<(&str, u64)>)> = Vec::new();
    for (t, ctxs) in &co {
        if !keep(t) {
            continue;
        }
        let row: Vec<(&str, u64)> = ctxs.iter().filter(|(c, _)| keep(c)).map(|(c, &n)| (c.as_str(), n)).collect();
        if row.is_empty() {
            continue;
        }
        for &(c, n) in &row {
            *context_set.entry(c).or_default() += n;
        }
        rows.push((t.as_str(), row));
    }
    if rows.is_empty() {
        return Err(Error::EmptyModel(format!("no lemma occurs at least {min_count} times with a context")));
    }
    let context_index: HashMap<&str, usize> = context_set.keys().enumerate().map(|(i, c)| (*c, i)).collect();
    let total: u64 = context_set.values().sum();
    let total_f = total as f64;

    let mut terms = Vec::new();
    let mut weight_triplets = Vec::new();
    let mut count_triplets = Vec::new();
    for (t, row) in &rows {
        let row_sum: u64 = row.iter().map(|(_, n)| n).sum();
        let weighted: Vec<(usize, f64, u64)> = row
            .iter()
            .map(|&(c, n)| {
                let pmi =
                    ((n as f64 / total_f) / ((row_sum as f64 / total_f) * (context_set[c] as f64 / total_f))).ln();
                (context_index[c], pmi.max(0.0), n)
            })
            .collect();
        if weighted.iter().all(|w| w.1 == 0.0) {
            continue;
        }
        let r = terms.len();
        terms.push(t.to_string());
        for (c, w, n) in weighted {
            weight_triplets.push((r, c, w));
            count_triplets.push((r, c, n as f64));
        }
    }
    if terms.is_empty() {
        return Err(Error::EmptyModel("every term has an all-zero PPMI vector".into()));
    }
    let k = context_set.len();
    let weights = CsrMatrix::from_triplets(terms.len(), k, weight_triplets)?;
    let counts = CsrMatrix::from_triplets(terms.len(), k, count_triplets)?;
    let mut marginals = vec![0.0; k];
    for (_, c, v) in counts.iter() {
        marginals[c] += v;
    }
    let contexts = context_set.keys().map(|c| c.to_string()).collect();
    DistributionalSpace::new(Vocabulary::from_terms(terms)?, contexts, marginals, weights, counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Cosine,
    WeedsPrec,
    Cl,
    InvCl,
    Slqs,
    SlqsCos,
}

impl Measure {
    pub const ALL: [Measure; 6] =
        [Measure::Cosine, Measure::WeedsPrec, Measure::Cl, Measure::InvCl, Measure::Slqs, Measure::SlqsCos];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Cosine => "cosine",
            Measure::WeedsPrec => "weedsprec",
            Measure::Cl => "cl",
            Measure::InvCl => "invcl",
            Measure::Slqs => "slqs",
            Measure::SlqsCos => "slqs-cos",
        }
    }

    /// Whether the measure takes the top-N context hyperparameter.
    pub fn uses_top_n(self) -> bool {
        matches!(self, Measure::Slqs | Measure::SlqsCos)
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Measure::ALL.iter().map(|m| m.name()).collect();
            Error::UnknownName { kind: "measure", name: s.to_string(), valid: names.join(", ") }
        })
    }
}
