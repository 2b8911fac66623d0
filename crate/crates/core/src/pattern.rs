//! Hearst-pattern DSL.
//!
//! A pattern is a whitespace-separated sequence of elements:
//!
//! | syntax        | element                                             |
//! |---------------|-----------------------------------------------------|
//! | `X`, `Y`      | hyponym / hypernym noun-phrase slot                 |
//! | `X...`        | hyponym list slot (`X1, X2 and X3`)                 |
//! | `such`        | literal lemma                                       |
//! | `and\|or`     | lemma alternation                                   |
//! | `!(a\|b)`     | negated alternation (zero-width, see [`Element`])   |
//! | `(elem)?`     | optional element                                    |
//! | `JJS`         | Penn POS class                                      |
//!
//! A pattern file holds one pattern per line, optionally prefixed by an id and a
//! tab. Lines starting with `#` are comments.

use std::collections::HashSet;
use std::fmt;

use crate::corpus::is_penn_tag;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotRole {
    Hypo,
    Hyper,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    Slot {
        role: SlotRole,
        list: bool,
    },
    Literal(String),
    Alternation(Vec<String>),
    /// Zero-width assertion: the lemma at the current position is outside the set,
    /// and if the next element is a slot, the head of the chunk it binds is too.
    Negated(Vec<String>),
    Pos(String),
    Optional(Box<Element>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Slot { role: SlotRole::Hypo, list } => write!(f, "X{}", if *list { "..." } else { "" }),
            Element::Slot { role: SlotRole::Hyper, .. } => f.write_str("Y"),
            Element::Literal(l) => f.write_str(l),
            Element::Alternation(alts) => f.write_str(&alts.join("|")),
            Element::Negated(alts) => write!(f, "!({})", alts.join("|")),
            Element::Pos(tag) => f.write_str(tag),
            Element::Optional(inner) => write!(f, "({inner})?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSpec {
    pub id: String,
    pub elements: Vec<Element>,
    /// Lemmas that every match must contain; used to skip sentences cheaply.
    required: Vec<String>,
}

impl PatternSpec {
    pub fn compile(id: &str, source: &str) -> Result<Self> {
        if !is_valid_id(id) {
            return Err(Error::InvalidPattern(format!("invalid pattern id {id:?}")));
        }
        let elements = parse_elements(source)?;
        let hyper = elements.iter().filter(|e| matches!(e, Element::Slot { role: SlotRole::Hyper, .. })).count();
        let hypo = elements.iter().filter(|e| matches!(e, Element::Slot { role: SlotRole::Hypo, .. })).count();
        if hyper + hypo == 0 {
            return Err(Error::InvalidPattern(format!("{id}: pattern has no noun-phrase slots")));
        }
        if hyper != 1 {
            return Err(Error::InvalidPattern(format!("{id}: expected exactly one Y slot, found {hyper}")));
        }
        if hypo == 0 {
            return Err(Error::InvalidPattern(format!("{id}: expected at least one X slot")));
        }
        let mut required: Vec<String> = elements
            .iter()
            .filter_map(|e| match e {
                Element::Literal(l) => Some(l.clone()),
                _ => None,
            })
            .collect();
        required.sort();
        required.dedup();
        Ok(PatternSpec { id: id.to_string(), elements, required })
    }

    pub fn required_lemmas(&self) -> &[String] {
        &self.required
    }

    /// Canonical DSL text; compiling it yields an equal spec.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Compiles a single pattern; its id is the canonical text with spaces replaced.
pub fn compile_pattern(source: &str) -> Result<PatternSpec> {
    let elements = parse_elements(source)?;
    let id: String = elements
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("_")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-' { c } else { '-' })
        .collect();
    PatternSpec::compile(&id, source)
}

fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::PatternSyntax { offset, message: message.into() }
}

fn parse_elements(source: &str) -> Result<Vec<Element>> {
    let mut elements = Vec::new();
    let mut offset = 0;
    for piece in source.split_inclusive(char::is_whitespace) {
        let word = piece.trim_end();
        if !word.is_empty() {
            elements.push(parse_element(word, offset, true)?);
        }
        offset += piece.len();
    }
    if elements.is_empty() {
        return Err(syntax(0, "empty pattern"));
    }
    Ok(elements)
}

fn parse_element(word: &str, offset: usize, top_level: bool) -> Result<Element> {
    match word {
        "X" => return Ok(Element::Slot { role: SlotRole::Hypo, list: false }),
        "X..." => return Ok(Element::Slot { role: SlotRole::Hypo, list: true }),
        "Y" => return Ok(Element::Slot { role: SlotRole::Hyper, list: false }),
        "Y..." => return Err(syntax(offset, "list slots are only allowed for the hyponym X")),
        _ => {}
    }
    if let Some(rest) = word.strip_prefix("!(") {
        let inner =
            rest.strip_suffix(')').ok_or_else(|| syntax(offset + word.len(), "unterminated negated alternation"))?;
        return Ok(Element::Negated(parse_alternatives(inner, offset + 2)?));
    }
    if let Some(rest) = word.strip_prefix('(') {
        if !top_level {
            return Err(syntax(offset, "nested optional"));
        }
        let inner = rest
            .strip_suffix(")?")
            .ok_or_else(|| syntax(offset + word.len(), "expected `)?` closing an optional element"))?;
        if inner.is_empty() {
            return Err(syntax(offset + 1, "empty optional element"));
        }
        let elem = parse_element(inner, offset + 1, false)?;
        if matches!(elem, Element::Slot { .. } | Element::Negated(_)) {
            return Err(syntax(offset + 1, "slots and negations cannot be optional"));
        }
        return Ok(Element::Optional(Box::new(elem)));
    }
    if word.contains('|') {
        let mut alts = parse_alternatives(word, offset)?;
        if alts.len() == 1 {
            return Ok(Element::Literal(alts.remove(0)));
        }
        return Ok(Element::Alternation(alts));
    }
    if word.len() >= 2 && word.chars().all(|c| c.is_ascii_uppercase() || c == '$') {
        if !is_penn_tag(word) {
            return Err(syntax(offset, format!("unknown POS class {word}")));
        }
        return Ok(Element::Pos(word.to_string()));
    }
    check_lemma(word, offset)?;
    Ok(Element::Literal(word.to_string()))
}

fn parse_alternatives(text: &str, offset: usize) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    let mut at = offset;
    for alt in text.split('|') {
        if alt.is_empty() {
            return Err(syntax(at, "empty alternative"));
        }
        check_lemma(alt, at)?;
        if !out.iter().any(|a| a == alt) {
            out.push(alt.to_string());
        }
        at += alt.len() + 1;
    }
    Ok(out)
}

fn check_lemma(word: &str, offset: usize) -> Result<()> {
    for (i, c) in word.char_indices() {
        if matches!(c, '(' | ')' | '!' | '?' | '|') || c.is_whitespace() {
            return Err(syntax(offset + i, format!("unexpected character {c:?}")));
        }
        if c.is_uppercase() {
            return Err(syntax(offset + i, "literal lemmas must be lowercase"));
        }
    }
    Ok(())
}

/// An ordered collection of compiled patterns with unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<PatternSpec>,
}

/// The built-in pattern inventory.
pub const DEFAULT_PATTERNS: &str = include_str!("../data/hearst.patterns");

impl PatternSet {
    /// Parses a pattern file. Lines without an explicit `id<TAB>` prefix get `p<n>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut patterns = Vec::new();
        let mut seen = HashSet::new();
        for (line_idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (id, source) = match line.split_once('\t') {
                Some((id, src)) => (id.trim().to_string(), src),
                None => (format!("p{}", patterns.len() + 1), line),
            };
            let spec = PatternSpec::compile(&id, source).map_err(|e| match e {
                Error::PatternSyntax { offset, message } => {
                    Error::parse("patterns", line_idx + 1, format!("offset {offset}: {message}"))
                }
                other => Error::parse("patterns", line_idx + 1, other.to_string()),
            })?;
            if !seen.insert(spec.id.clone()) {
                return Err(Error::parse("patterns", line_idx + 1, format!("duplicate pattern id {id}")));
            }
            patterns.push(spec);
        }
        if patterns.is_empty() {
            return Err(Error::InvalidPattern("pattern file contains no patterns".into()));
        }
        Ok(PatternSet { patterns })
    }

    pub fn builtin() -> Self {
        PatternSet::parse(DEFAULT_PATTERNS).expect("built-in patterns compile")
    }

    pub fn from_specs(patterns: Vec<PatternSpec>) -> Self {
        PatternSet { patterns }
    }

    pub fn patterns(&self) -> &[PatternSpec] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Serializes back to pattern-file syntax.
    pub fn to_file_string(&self) -> String {
        self.patterns.iter().map(|p| format!("{}\t{}\n", p.id, p)).collect()
    }
}
