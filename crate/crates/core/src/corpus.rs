//! Pre-annotated corpus reading and noun-phrase chunking.
//!
//! The corpus format is one token per line, `surface<TAB>lemma<TAB>pos`, with
//! sentences separated by a blank line. Lemmas are lowercased on read so that
//! pattern matching and pair counting are case-insensitive.

use std::fmt::Write as _;
use std::io::BufRead;
use std::ops::Range;

use crate::error::{Error, Result};

/// Penn Treebank tags as emitted by common taggers, punctuation included.
pub const PENN_TAGS: &[&str] = &[
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS", "PDT", "POS",
    "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",
    "WP$", "WRB", "#", "$", ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP", "ADD", "AFX", "GW", "XX",
];

pub fn is_penn_tag(tag: &str) -> bool {
    PENN_TAGS.contains(&tag)
}

pub fn is_noun_tag(tag: &str) -> bool {
    matches!(tag, "NN" | "NNS" | "NNP" | "NNPS")
}

fn is_modifier_tag(tag: &str) -> bool {
    matches!(tag, "JJ" | "JJR" | "JJS" | "VBN") || is_noun_tag(tag)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedToken {
    pub surface: String,
    pub lemma: String,
    pub pos: String,
}

impl AnnotatedToken {
    /// Builds a token, lowercasing the lemma.
    pub fn new(surface: impl Into<String>, lemma: &str, pos: impl Into<String>) -> Self {
        AnnotatedToken { surface: surface.into(), lemma: lemma.to_lowercase(), pos: pos.into() }
    }

    pub fn is_noun(&self) -> bool {
        is_noun_tag(&self.pos)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub tokens: Vec<AnnotatedToken>,
    pub source_id: String,
}

impl AnnotatedSentence {
    pub fn new(tokens: Vec<AnnotatedToken>, source_id: impl Into<String>) -> Self {
        AnnotatedSentence { tokens, source_id: source_id.into() }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn lemma(&self, i: usize) -> &str {
        &self.tokens[i].lemma
    }

    /// Serializes the sentence in corpus format, including the trailing blank line.
    pub fn write_conll(&self, out: &mut String) {
        for t in &self.tokens {
            let _ = writeln!(out, "{}\t{}\t{}", t.surface, t.lemma, t.pos);
        }
        out.push('\n');
    }
}

/// A chunked noun phrase: half-open token span plus the index of its head noun.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NounPhrase {
    pub start: usize,
    pub end: usize,
    pub head: usize,
}

impl NounPhrase {
    pub fn span(&self) -> Range<usize> {
        self.start..self.end
    }
}

/// Streaming corpus parser. Holds at most one sentence in memory.
pub struct CorpusReader<R> {
    reader: R,
    source_name: String,
    line_no: usize,
    buf: String,
    done: bool,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R, source_name: impl Into<String>) -> Self {
        CorpusReader { reader, source_name: source_name.into(), line_no: 0, buf: String::new(), done: false }
    }

    fn next_sentence(&mut self) -> Result<Option<AnnotatedSentence>> {
        let mut tokens = Vec::new();
        let mut first_line = 0;
        loop {
            self.buf.clear();
            let n = self.reader.read_line(&mut self.buf)?;
            if n == 0 {
                self.done = true;
                break;
            }
            self.line_no += 1;
            let line = self.buf.trim_end_matches(['\n', '\r']);
            if line.is_empty() {
                if tokens.is_empty() {
                    continue;
                }
                break;
            }
            let mut cols = line.split('\t');
            let (surface, lemma, pos) = match (cols.next(), cols.next(), cols.next(), cols.next()) {
                (Some(s), Some(l), Some(p), None) => (s, l, p),
                _ => {
                    let found = line.split('\t').count();
                    return Err(Error::parse(
                        &self.source_name,
                        self.line_no,
                        format!("expected 3 tab-separated columns, found {found}"),
                    ));
                }
            };
            if surface.is_empty() || lemma.is_empty() || pos.is_empty() {
                return Err(Error::parse(&self.source_name, self.line_no, "empty column"));
            }
            if tokens.is_empty() {
                first_line = self.line_no;
            }
            tokens.push(AnnotatedToken::new(surface, lemma, pos));
        }
        if tokens.is_empty() {
            return Ok(None);
        }
        let id = format!("{}:{}", self.source_name, first_line);
        Ok(Some(AnnotatedSentence::new(tokens, id)))
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<AnnotatedSentence>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_sentence() {
            Ok(Some(s)) => Some(Ok(s)),
            Ok(None) => None,
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Parses a whole in-memory corpus.
pub fn parse_corpus_str(text: &str) -> Result<Vec<AnnotatedSentence>> {
    CorpusReader::new(text.as_bytes(), "<memory>").collect()
}

pub fn serialize_corpus(sentences: &[AnnotatedSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        s.write_conll(&mut out);
    }
    out
}

/// Chunks maximal noun phrases with the flat grammar
/// `DT? (JJ|JJR|JJS|NN|NNS|NNP|NNPS|VBN)* (NN|NNS|NNP|NNPS)`, scanning left to right.
/// The head is the rightmost noun of the chunk.
pub fn chunk_noun_phrases(sentence: &AnnotatedSentence) -> Vec<NounPhrase> {
    let tokens = &sentence.tokens;
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut j = i;
        if tokens[j].pos == "DT" {
            j += 1;
        }
        let mut last_noun = None;
        while j < tokens.len() && is_modifier_tag(&tokens[j].pos) {
            if tokens[j].is_noun() {
                last_noun = Some(j);
            }
            j += 1;
        }
        match last_noun {
            Some(head) => {
                chunks.push(NounPhrase { start: i, end: head + 1, head });
                i = head + 1;
            }
            None => i += 1,
        }
    }
    chunks
}
