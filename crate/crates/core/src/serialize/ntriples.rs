//! N-Triples reading and canonical writing.

use std::fmt::Write as _;

use crate::graph::{is_blank_label, Graph, Iri, Literal, Term, Triple};
use crate::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct NTriplesError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WriteOptions {
    /// Escape every non-ASCII character as `\uXXXX` / `\UXXXXXXXX`.
    pub ascii: bool,
}

/// Canonical N-Triples: one triple per line, sorted, `\n` terminated.
pub fn to_ntriples(graph: &Graph) -> String {
    to_ntriples_with(graph, WriteOptions::default())
}

pub fn to_ntriples_with(graph: &Graph, options: WriteOptions) -> String {
    let mut lines: Vec<String> = graph
        .iter()
        .map(|t| {
            format!(
                "{} {} {} .\n",
                term_to_string(t.subject(), options.ascii),
                iri_to_string(t.predicate(), options.ascii),
                term_to_string(t.object(), options.ascii)
            )
        })
        .collect();
    lines.sort();
    lines.concat()
}

pub(crate) fn iri_to_string(iri: &Iri, ascii: bool) -> String {
    let mut out = String::with_capacity(iri.as_str().len() + 2);
    out.push('<');
    for c in iri.as_str().chars() {
        push_char(&mut out, c, ascii);
    }
    out.push('>');
    out
}

pub(crate) fn term_to_string(term: &Term, ascii: bool) -> String {
    match term {
        Term::Iri(i) => iri_to_string(i, ascii),
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => literal_to_string(lit, ascii),
    }
}

pub(crate) fn quoted(lexical: &str, ascii: bool) -> String {
    let mut out = String::with_capacity(lexical.len() + 2);
    out.push('"');
    for c in lexical.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => push_char(&mut out, c, ascii),
        }
    }
    out.push('"');
    out
}

fn literal_to_string(lit: &Literal, ascii: bool) -> String {
    let mut out = quoted(lit.lexical(), ascii);
    if let Some(lang) = lit.language() {
        out.push('@');
        out.push_str(lang);
    } else if lit.datatype() != &xsd::string() {
        out.push_str("^^");
        out.push_str(&iri_to_string(lit.datatype(), ascii));
    }
    out
}

fn push_char(out: &mut String, c: char, ascii: bool) {
    if ascii && !c.is_ascii() {
        let cp = c as u32;
        if cp <= 0xFFFF {
            let _ = write!(out, "\\u{cp:04X}");
        } else {
            let _ = write!(out, "\\U{cp:08X}");
        }
    } else {
        out.push(c);
    }
}

/// Parses N-Triples text. Duplicate lines collapse into one triple.
pub fn from_ntriples(text: &str) -> Result<Graph, NTriplesError> {
    let mut graph = Graph::new();
    for (idx, line) in text.lines().enumerate() {
        let mut cursor = Cursor {
            chars: line.char_indices().collect(),
            pos: 0,
            line: idx + 1,
        };
        cursor.skip_ws();
        if cursor.at_end() || cursor.peek() == Some('#') {
            continue;
        }
        let subject = match cursor.peek() {
            Some('<') => Term::Iri(cursor.iri()?),
            Some('_') => cursor.blank()?,
            _ => return Err(cursor.error("expected IRI or blank node as subject")),
        };
        cursor.skip_ws();
        if cursor.peek() != Some('<') {
            return Err(cursor.error("expected IRI as predicate"));
        }
        let predicate = cursor.iri()?;
        cursor.skip_ws();
        let object = match cursor.peek() {
            Some('<') => Term::Iri(cursor.iri()?),
            Some('_') => cursor.blank()?,
            Some('"') => Term::Literal(cursor.literal()?),
            _ => return Err(cursor.error("expected IRI, blank node or literal as object")),
        };
        cursor.skip_ws();
        if cursor.peek() != Some('.') {
            return Err(cursor.error("expected ` .` at end of triple"));
        }
        cursor.pos += 1;
        cursor.skip_ws();
        if !cursor.at_end() && cursor.peek() != Some('#') {
            return Err(cursor.error("unexpected content after ` .`"));
        }
        graph.insert(Triple::new(subject, predicate, object).expect("subject is never a literal"));
    }
    Ok(graph)
}

struct Cursor {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn error(&self, message: impl Into<String>) -> NTriplesError {
        NTriplesError {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn next(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<(), NTriplesError> {
        match self.next() {
            Some(c) if c == want => Ok(()),
            _ => {
                self.pos -= 1;
                Err(self.error(format!("expected `{want}`")))
            }
        }
    }

    fn iri(&mut self) -> Result<Iri, NTriplesError> {
        self.expect('<')?;
        let start = self.pos;
        let mut value = String::new();
        loop {
            match self.next() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some('\\') => value.push(self.unicode_escape()?),
                Some(c) => value.push(c),
            }
        }
        Iri::new(&value).map_err(|e| NTriplesError {
            line: self.line,
            column: start + 1,
            message: e.to_string(),
        })
    }

    fn unicode_escape(&mut self) -> Result<char, NTriplesError> {
        let width = match self.next() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error("invalid escape in IRI")),
        };
        self.hex(width)
    }

    fn hex(&mut self, width: usize) -> Result<char, NTriplesError> {
        let mut digits = String::with_capacity(width);
        for _ in 0..width {
            match self.next() {
                Some(c) if c.is_ascii_hexdigit() => digits.push(c),
                _ => return Err(self.error("invalid hexadecimal escape")),
            }
        }
        u32::from_str_radix(&digits, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error("escape is not a Unicode scalar value"))
    }

    fn blank(&mut self) -> Result<Term, NTriplesError> {
        self.expect('_')?;
        self.expect(':')?;
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')) {
            self.pos += 1;
        }
        // a trailing `.` terminates the statement rather than the label
        while self.pos > start && self.chars[self.pos - 1].1 == '.' {
            self.pos -= 1;
        }
        let label: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        if !is_blank_label(&label) {
            return Err(self.error("invalid blank node label"));
        }
        Ok(Term::Blank(label))
    }

    fn literal(&mut self) -> Result<Literal, NTriplesError> {
        self.expect('"')?;
        let mut lexical = String::new();
        loop {
            match self.next() {
                None => return Err(self.error("unterminated string literal")),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.next() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex(4)?,
                        Some('U') => self.hex(8)?,
                        _ => return Err(self.error("invalid escape in string literal")),
                    };
                    lexical.push(c);
                }
                Some(c) => lexical.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                    self.pos += 1;
                }
                let tag: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                Literal::lang(lexical, &tag).map_err(|e| self.error(e.to_string()))
            }
            Some('^') => {
                self.pos += 1;
                self.expect('^')?;
                let datatype = self.iri()?;
                if datatype == rdf::lang_string() {
                    return Err(self.error("rdf:langString literal without a language tag"));
                }
                Ok(Literal::typed(lexical, datatype))
            }
            _ => Ok(Literal::string(lexical)),
        }
    }
}
