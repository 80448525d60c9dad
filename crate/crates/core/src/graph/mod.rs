//! In-memory RDF triple store.
//!
//! Triples are interned into a dense vector and indexed by subject, predicate
//! and object. Lookups pick the smallest index list among the bound positions
//! and filter the remainder, so a fully wildcard `match` is a plain scan.

mod assert;

pub use assert::{assert_io, granule_label, io_iri, AssertError};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::vocab::{rdf, xsd};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TermError {
    #[error("IRI `{0}` is empty or contains whitespace or angle brackets")]
    Iri(String),
    #[error("blank node label `{0}` is not a valid label")]
    BlankLabel(String),
    #[error("language tag `{0}` is malformed")]
    Language(String),
}

/// An absolute IRI. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self, TermError> {
        let value = value.as_ref();
        if value.is_empty()
            || value
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
        {
            return Err(TermError::Iri(value.to_owned()));
        }
        Ok(Iri(Arc::from(value)))
    }

    /// For compile-time vocabulary constants known to be valid.
    pub(crate) fn from_static(value: &'static str) -> Self {
        Iri(Arc::from(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: xsd::string(),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        }
    }

    /// Language-tagged string; the datatype is forced to `rdf:langString`.
    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Self, TermError> {
        let valid = !tag.is_empty()
            && tag.split('-').enumerate().all(|(i, part)| {
                !part.is_empty()
                    && part.len() <= 8
                    && if i == 0 {
                        part.chars().all(|c| c.is_ascii_alphabetic())
                    } else {
                        part.chars().all(|c| c.is_ascii_alphanumeric())
                    }
            });
        if !valid {
            return Err(TermError::Language(tag.to_owned()));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: rdf::lang_string(),
            language: Some(tag.to_ascii_lowercase()),
        })
    }

    pub fn decimal(value: f64) -> Self {
        Literal::typed(format_decimal(value), xsd::decimal())
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// `xsd:decimal` lexical form of a finite float. Never uses exponent notation.
pub fn format_decimal(value: f64) -> String {
    let s = format!("{value}");
    if s == "-0" {
        "0".to_owned()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn blank(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        if !is_blank_label(&label) {
            return Err(TermError::BlankLabel(label));
        }
        Ok(Term::Blank(label))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_resource(&self) -> bool {
        !matches!(self, Term::Literal(_))
    }
}

pub(crate) fn is_blank_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    !label.ends_with('.')
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

/// Writes the N-Triples form of the term (UTF-8, minimal escaping).
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::serialize::ntriples::term_to_string(self, false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("a literal cannot be the subject of a triple")]
pub struct LiteralSubject;

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, LiteralSubject> {
        if matches!(subject, Term::Literal(_)) {
            return Err(LiteralSubject);
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} .",
            self.subject,
            Term::Iri(self.predicate.clone()),
            self.object
        )
    }
}

/// Set of triples with subject, predicate and object indexes.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: Vec<Triple>,
    positions: HashMap<Triple, usize>,
    by_subject: HashMap<Term, Vec<usize>>,
    by_predicate: HashMap<Iri, Vec<usize>>,
    by_object: HashMap<Term, Vec<usize>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` when the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.positions.contains_key(&triple) {
            return false;
        }
        let idx = self.triples.len();
        self.by_subject.entry(triple.subject.clone()).or_default().push(idx);
        self.by_predicate.entry(triple.predicate.clone()).or_default().push(idx);
        self.by_object.entry(triple.object.clone()).or_default().push(idx);
        self.positions.insert(triple.clone(), idx);
        self.triples.push(triple);
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.positions.contains_key(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Triples sorted by the N-Triples forms of subject, predicate, object.
    pub fn sorted(&self) -> Vec<&Triple> {
        let mut keyed: Vec<_> = self
            .triples
            .iter()
            .map(|t| {
                (
                    t.subject.to_string(),
                    Term::Iri(t.predicate.clone()).to_string(),
                    t.object.to_string(),
                    t,
                )
            })
            .collect();
        keyed.sort_by(|a, b| (&a.0, &a.1, &a.2).cmp(&(&b.0, &b.1, &b.2)));
        keyed.into_iter().map(|k| k.3).collect()
    }

    /// Triples agreeing with every bound position; `None` is a wildcard.
    pub fn matches<'a>(
        &'a self,
        subject: Option<&Term>,
        predicate: Option<&Iri>,
        object: Option<&Term>,
    ) -> Box<dyn Iterator<Item = &'a Triple> + 'a> {
        const EMPTY: &[usize] = &[];
        let mut candidates: Option<&[usize]> = None;
        let mut narrow = |list: Option<&'a Vec<usize>>| {
            let list = list.map(Vec::as_slice).unwrap_or(EMPTY);
            if candidates.is_none_or(|c| list.len() < c.len()) {
                candidates = Some(list);
            }
        };
        if let Some(s) = subject {
            narrow(self.by_subject.get(s));
        }
        if let Some(p) = predicate {
            narrow(self.by_predicate.get(p));
        }
        if let Some(o) = object {
            narrow(self.by_object.get(o));
        }
        let subject = subject.cloned();
        let predicate = predicate.cloned();
        let object = object.cloned();
        let accept = move |t: &&Triple| {
            subject.as_ref().is_none_or(|s| &t.subject == s)
                && predicate.as_ref().is_none_or(|p| &t.predicate == p)
                && object.as_ref().is_none_or(|o| &t.object == o)
        };
        match candidates {
            Some(list) => Box::new(list.iter().map(|&i| &self.triples[i]).filter(accept)),
            None => Box::new(self.triples.iter().filter(accept)),
        }
    }

    /// Objects of `rdf:type` triples about `subject`.
    pub fn types_of<'a>(&'a self, subject: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.matches(Some(subject), Some(&rdf::type_()), None)
            .map(Triple::object)
    }

    pub fn subjects(&self) -> impl Iterator<Item = &Term> {
        self.by_subject.keys()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.triples.iter().all(|t| other.contains(t))
    }
}

impl Eq for Graph {}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}
