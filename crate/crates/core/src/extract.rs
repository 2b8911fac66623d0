//! Pattern matching over chunked sentences and pair-count aggregation.
//!
//! NP slots bind chunks. A slot may start inside a chunk when the preceding
//! pattern elements consumed the chunk's leading tokens (`a`, `other`, `most`, ...);
//! the bound region then runs from that position to the chunk end and always
//! includes the chunk head.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Write};
use std::ops::Range;

use rayon::prelude::*;

use crate::corpus::{chunk_noun_phrases, AnnotatedSentence, NounPhrase};
use crate::error::{Error, Result};
use crate::pattern::{Element, PatternSet, PatternSpec, SlotRole};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtractOptions {
    /// Also emit the full lemmatized NP (leading determiner dropped) for multiword chunks.
    pub multiword: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionRecord {
    pub hypo: String,
    pub hyper: String,
    pub pattern_id: String,
    pub source_id: String,
    /// Token span of the whole match within the sentence.
    pub span: Range<usize>,
}

#[derive(Debug, Clone, Copy)]
struct Binding {
    role: SlotRole,
    start: usize,
    chunk: usize,
}

struct Matcher<'a> {
    sentence: &'a AnnotatedSentence,
    nps: &'a [NounPhrase],
    chunk_at: Vec<Option<usize>>,
}

impl<'a> Matcher<'a> {
    fn new(sentence: &'a AnnotatedSentence, nps: &'a [NounPhrase]) -> Self {
        let mut chunk_at = vec![None; sentence.len()];
        for (ci, np) in nps.iter().enumerate() {
            for slot in chunk_at.iter_mut().take(np.end.min(sentence.len())).skip(np.start) {
                *slot = Some(ci);
            }
        }
        Matcher { sentence, nps, chunk_at }
    }

    fn lemma(&self, pos: usize) -> Option<&str> {
        self.sentence.tokens.get(pos).map(|t| t.lemma.as_str())
    }

    fn token_matches(&self, elem: &Element, pos: usize) -> bool {
        let Some(tok) = self.sentence.tokens.get(pos) else {
            return false;
        };
        match elem {
            Element::Literal(l) => tok.lemma == *l,
            Element::Alternation(alts) => alts.contains(&tok.lemma),
            Element::Pos(tag) => tok.pos == *tag,
            _ => false,
        }
    }

    /// Chunk whose tail starting at `pos` contains the head.
    fn slot_chunk(&self, pos: usize) -> Option<usize> {
        let ci = (*self.chunk_at.get(pos)?)?;
        (pos <= self.nps[ci].head).then_some(ci)
    }

    /// Chunk starting exactly at `pos`.
    fn chunk_starting_at(&self, pos: usize) -> Option<usize> {
        let ci = (*self.chunk_at.get(pos)?)?;
        (self.nps[ci].start == pos).then_some(ci)
    }

    /// Position after a list separator (`,` `and` `or` `, and` `, or`) followed by a chunk.
    fn list_continuation(&self, pos: usize) -> Option<(usize, usize)> {
        const SEPARATORS: [&[&str]; 5] = [&[",", "and"], &[",", "or"], &[","], &["and"], &["or"]];
        for sep in SEPARATORS {
            let fits = sep.iter().enumerate().all(|(k, s)| self.lemma(pos + k) == Some(s));
            if fits {
                let next = pos + sep.len();
                if let Some(ci) = self.chunk_starting_at(next) {
                    return Some((next, ci));
                }
            }
        }
        None
    }

    fn run(&self, elements: &[Element], ei: usize, pos: usize, binds: &mut Vec<Binding>) -> Option<usize> {
        let Some(elem) = elements.get(ei) else {
            return Some(pos);
        };
        match elem {
            Element::Literal(_) | Element::Alternation(_) | Element::Pos(_) => {
                if self.token_matches(elem, pos) {
                    self.run(elements, ei + 1, pos + 1, binds)
                } else {
                    None
                }
            }
            Element::Optional(inner) => {
                if self.token_matches(inner, pos) {
                    if let Some(end) = self.run(elements, ei + 1, pos + 1, binds) {
                        return Some(end);
                    }
                }
                self.run(elements, ei + 1, pos, binds)
            }
            Element::Negated(set) => {
                let excluded = |lemma: Option<&str>| lemma.is_some_and(|l| set.iter().any(|s| s == l));
                if excluded(self.lemma(pos)) {
                    return None;
                }
                if let Some(Element::Slot { .. }) = elements.get(ei + 1) {
                    if let Some(ci) = self.slot_chunk(pos) {
                        if excluded(self.lemma(self.nps[ci].head)) {
                            return None;
                        }
                    }
                }
                self.run(elements, ei + 1, pos, binds)
            }
            Element::Slot { role, list } => {
                let ci = self.slot_chunk(pos)?;
                let mut conjuncts = vec![Binding { role: *role, start: pos, chunk: ci }];
                if *list {
                    let mut end = self.nps[ci].end;
                    while let Some((start, next)) = self.list_continuation(end) {
                        conjuncts.push(Binding { role: *role, start, chunk: next });
                        end = self.nps[next].end;
                    }
                }
                // longest list first
                for k in (1..=conjuncts.len()).rev() {
                    let mark = binds.len();
                    binds.extend_from_slice(&conjuncts[..k]);
                    let end = self.nps[conjuncts[k - 1].chunk].end;
                    if let Some(done) = self.run(elements, ei + 1, end, binds) {
                        return Some(done);
                    }
                    binds.truncate(mark);
                }
                None
            }
        }
    }

    fn forms(&self, b: &Binding, multiword: bool) -> Vec<String> {
        let np = &self.nps[b.chunk];
        let head = self.sentence.lemma(np.head).to_string();
        let mut out = vec![head];
        if multiword {
            let mut start = b.start;
            if self.sentence.tokens[start].pos == "DT" {
                start += 1;
            }
            if np.end - start > 1 {
                let words: Vec<&str> = (start..np.end).map(|i| self.sentence.lemma(i)).collect();
                out.push(words.join(" "));
            }
        }
        out
    }
}

fn sentence_lemmas(sentence: &AnnotatedSentence) -> HashSet<&str> {
    sentence.tokens.iter().map(|t| t.lemma.as_str()).collect()
}

fn match_pattern(
    matcher: &Matcher<'_>,
    pattern: &PatternSpec,
    options: &ExtractOptions,
    out: &mut Vec<ExtractionRecord>,
) {
    let n = matcher.sentence.len();
    let mut binds = Vec::new();
    let mut pos = 0;
    while pos < n {
        binds.clear();
        let Some(end) = matcher.run(&pattern.elements, 0, pos, &mut binds) else {
            pos += 1;
            continue;
        };
        let hyper_forms = binds
            .iter()
            .find(|b| b.role == SlotRole::Hyper)
            .map(|b| matcher.forms(b, options.multiword))
            .unwrap_or_default();
        for hypo in binds.iter().filter(|b| b.role == SlotRole::Hypo) {
            for x in matcher.forms(hypo, options.multiword) {
                for y in &hyper_forms {
                    if x != *y {
                        out.push(ExtractionRecord {
                            hypo: x.clone(),
                            hyper: y.clone(),
                            pattern_id: pattern.id.clone(),
                            source_id: matcher.sentence.source_id.clone(),
                            span: pos..end,
                        });
                    }
                }
            }
        }
        pos = end.max(pos + 1);
    }
}

/// Matches every pattern against one sentence. `nps` must come from
/// [`chunk_noun_phrases`] on the same sentence.
pub fn match_sentence(
    sentence: &AnnotatedSentence,
    patterns: &[PatternSpec],
    nps: &[NounPhrase],
    options: &ExtractOptions,
) -> Vec<ExtractionRecord> {
    let mut out = Vec::new();
    if nps.is_empty() {
        return out;
    }
    let lemmas = sentence_lemmas(sentence);
    let matcher = Matcher::new(sentence, nps);
    for pattern in patterns {
        if pattern.required_lemmas().iter().all(|l| lemmas.contains(l.as_str())) {
            match_pattern(&matcher, pattern, options, &mut out);
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairStats {
    pub count: u64,
    pub patterns: BTreeSet<String>,
}

/// Multiset of (hyponym, hypernym) extractions with per-pattern provenance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCounts {
    pairs: HashMap<(String, String), PairStats>,
    total: u64,
}

impl PairCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, hypo: &str, hyper: &str, pattern_id: &str) {
        self.insert(hypo, hyper, 1, std::iter::once(pattern_id.to_string()));
    }

    pub fn add_record(&mut self, record: &ExtractionRecord) {
        self.add(&record.hypo, &record.hyper, &record.pattern_id);
    }

    /// Adds `count` extractions of (hypo, hyper) attributed to `patterns`.
    pub fn insert(&mut self, hypo: &str, hyper: &str, count: u64, patterns: impl IntoIterator<Item = String>) {
        let entry = self.pairs.entry((hypo.to_string(), hyper.to_string())).or_default();
        entry.count += count;
        entry.patterns.extend(patterns);
        self.total += count;
    }

    /// Commutative, associative merge.
    pub fn merge(&mut self, other: PairCounts) {
        for ((x, y), stats) in other.pairs {
            let entry = self.pairs.entry((x, y)).or_default();
            entry.count += stats.count;
            entry.patterns.extend(stats.patterns);
        }
        self.total += other.total;
    }

    pub fn get(&self, hypo: &str, hyper: &str) -> Option<&PairStats> {
        self.pairs.get(&(hypo.to_string(), hyper.to_string()))
    }

    /// w(x, y); zero when unobserved.
    pub fn count(&self, hypo: &str, hyper: &str) -> u64 {
        self.get(hypo, hyper).map_or(0, |s| s.count)
    }

    /// W, the total number of extractions.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &PairStats)> {
        self.pairs.iter().map(|((x, y), s)| (x.as_str(), y.as_str(), s))
    }

    /// Pairs by descending count, then lexicographically by (hypo, hyper).
    pub fn sorted(&self) -> Vec<(&str, &str, &PairStats)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| b.2.count.cmp(&a.2.count).then_with(|| (a.0, a.1).cmp(&(b.0, b.1))));
        v
    }

    /// Unique terms in either slot, sorted.
    pub fn terms(&self) -> BTreeSet<&str> {
        self.pairs.keys().flat_map(|(x, y)| [x.as_str(), y.as_str()]).collect()
    }

    /// Multiplies every count by `factor`.
    pub fn scaled(&self, factor: u64) -> PairCounts {
        let pairs: HashMap<_, _> = self
            .pairs
            .iter()
            .map(|(k, s)| (k.clone(), PairStats { count: s.count * factor, patterns: s.patterns.clone() }))
            .collect();
        PairCounts { pairs, total: self.total * factor }
    }

    /// Drops pairs seen by fewer than two distinct patterns, then, for every pair
    /// present in both directions, the direction with the strictly smaller count.
    pub fn postprocess(&self) -> PairCounts {
        let multi: HashMap<&(String, String), &PairStats> =
            self.pairs.iter().filter(|(_, s)| s.patterns.len() >= 2).collect();
        let mut out = PairCounts::new();
        for ((x, y), stats) in &multi {
            let reverse = multi.get(&(y.clone(), x.clone())).map_or(0, |r| r.count);
            if stats.count >= reverse {
                out.insert(x, y, stats.count, stats.patterns.iter().cloned());
            }
        }
        out
    }

    /// Writes `hypo<TAB>hyper<TAB>count<TAB>pattern,ids` rows after `#`-prefixed header lines.
    pub fn write_tsv<W: Write>(&self, mut w: W, header: &[String]) -> Result<()> {
        for line in header {
            writeln!(w, "# {line}")?;
        }
        for (x, y, s) in self.sorted() {
            let ids: Vec<&str> = s.patterns.iter().map(String::as_str).collect();
            writeln!(w, "{x}\t{y}\t{}\t{}", s.count, ids.join(","))?;
        }
        Ok(())
    }

    pub fn to_tsv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_tsv(&mut buf, &[]).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    /// Reads the TSV written by [`PairCounts::write_tsv`]; `#` lines are skipped.
    pub fn read_tsv<R: BufRead>(reader: R, source_name: &str) -> Result<PairCounts> {
        let mut counts = PairCounts::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::parse(source_name, line_no, format!("expected 4 columns, found {}", cols.len())));
            }
            let (x, y) = (cols[0], cols[1]);
            if x.is_empty() || y.is_empty() {
                return Err(Error::parse(source_name, line_no, "empty term"));
            }
            if x == y {
                return Err(Error::parse(source_name, line_no, "self-pair"));
            }
            let count: u64 = cols[2]
                .parse()
                .map_err(|_| Error::parse(source_name, line_no, format!("invalid count {:?}", cols[2])))?;
            if count == 0 {
                return Err(Error::parse(source_name, line_no, "zero count"));
            }
            let patterns: Vec<String> = cols[3].split(',').map(str::to_string).collect();
            if patterns.iter().any(String::is_empty) {
                return Err(Error::parse(source_name, line_no, "empty pattern id"));
            }
            if counts.get(x, y).is_some() {
                return Err(Error::parse(source_name, line_no, format!("duplicate pair ({x}, {y})")));
            }
            counts.total = counts
                .total
                .checked_add(count)
                .ok_or_else(|| Error::parse(source_name, line_no, "total count overflows"))?;
            counts
                .pairs
                .insert((x.to_string(), y.to_string()), PairStats { count, patterns: patterns.into_iter().collect() });
        }
        Ok(counts)
    }
}

fn extract_sentence(sentence: &AnnotatedSentence, patterns: &PatternSet, options: &ExtractOptions) -> PairCounts {
    let nps = chunk_noun_phrases(sentence);
    let mut counts = PairCounts::new();
    for r in match_sentence(sentence, patterns.patterns(), &nps, options) {
        counts.add_record(&r);
    }
    counts
}

const BATCH: usize = 4096;

/// Raw (not postprocessed) counts over a sentence stream. With `jobs > 1` batches
/// are matched in parallel; the result does not depend on `jobs`.
pub fn extract_corpus<I>(
    sentences: I,
    patterns: &PatternSet,
    options: &ExtractOptions,
    jobs: usize,
) -> Result<PairCounts>
where
    I: IntoIterator<Item = Result<AnnotatedSentence>>,
{
    let mut total = PairCounts::new();
    let pool = if jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::Degenerate(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let mut batch = Vec::with_capacity(BATCH);
    let mut iter = sentences.into_iter();
    loop {
        batch.clear();
        for s in iter.by_ref().take(BATCH) {
            batch.push(s?);
        }
        if batch.is_empty() {
            break;
        }
        let part = match &pool {
            Some(pool) => pool.install(|| {
                batch.par_iter().map(|s| extract_sentence(s, patterns, options)).reduce(PairCounts::new, |mut a, b| {
                    a.merge(b);
                    a
                })
            }),
            None => batch.iter().fold(PairCounts::new(), |mut acc, s| {
                acc.merge(extract_sentence(s, patterns, options));
                acc
            }),
        };
        total.merge(part);
    }
    Ok(total)
}
