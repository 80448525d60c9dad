use std::collections::{BTreeSet, HashMap};

use super::ast::*;
use crate::graph::{Iri, Literal, Term};
use crate::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown prefix `{prefix}:` at line {line}, column {column}")]
    UnknownPrefix { prefix: String, line: usize, column: usize },
    #[error("variable {0} is not bound by any triple pattern")]
    Unbound(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(String),
    IriRef(String),
    PName(String, String),
    Word(String),
    Str(String),
    LangTag(String),
    Number(String),
    Punct(&'static str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn is_pn_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn error(&self, at: usize, message: impl Into<String>) -> QueryError {
        let (line, column) = line_col(self.src, at);
        QueryError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, QueryError> {
        let mut out = vec![];
        loop {
            self.skip_ws();
            let start = self.pos;
            let Some(c) = self.peek() else { break };
            let rest = self.rest();
            let tok = match c {
                '?' | '$' => {
                    self.pos += 1;
                    let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                    if name.is_empty() {
                        return Err(self.error(start, "empty variable name"));
                    }
                    Tok::Var(name.to_owned())
                }
                '<' => {
                    let body = &rest[1..];
                    let end = body.find(|c: char| {
                        c == '>' || c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
                    });
                    match end {
                        Some(i) if body[i..].starts_with('>') && i > 0 => {
                            self.pos += i + 2;
                            Tok::IriRef(body[..i].to_owned())
                        }
                        _ if rest.starts_with("<=") => {
                            self.pos += 2;
                            Tok::Punct("<=")
                        }
                        _ => {
                            self.pos += 1;
                            Tok::Punct("<")
                        }
                    }
                }
                '"' | '\'' => Tok::Str(self.string(c)?),
                '@' => {
                    self.pos += 1;
                    let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                    if tag.is_empty() {
                        return Err(self.error(start, "empty language tag"));
                    }
                    Tok::LangTag(tag.to_owned())
                }
                c if c.is_ascii_digit()
                    || ((c == '-' || c == '+' || c == '.') && rest[1..].starts_with(|d: char| d.is_ascii_digit())) =>
                {
                    self.pos += c.len_utf8();
                    self.take_while(|c| c.is_ascii_digit());
                    if self.rest().starts_with('.') && self.rest()[1..].starts_with(|d: char| d.is_ascii_digit()) {
                        self.pos += 1;
                        self.take_while(|c| c.is_ascii_digit());
                    }
                    Tok::Number(self.src[start..self.pos].to_owned())
                }
                c if c.is_alphabetic() || c == '_' || c == ':' => {
                    let word = self.take_while(is_pn_char);
                    if self.rest().starts_with(':') {
                        self.pos += 1;
                        let local_start = self.pos;
                        self.take_while(|c| is_pn_char(c) || c == '.');
                        // a trailing dot ends the statement
                        while self.pos > local_start && self.src[..self.pos].ends_with('.') {
                            self.pos -= 1;
                        }
                        Tok::PName(word.to_owned(), self.src[local_start..self.pos].to_owned())
                    } else {
                        Tok::Word(word.to_owned())
                    }
                }
                _ => {
                    const PUNCT: &[&str] = &[
                        "^^", "&&", "||", "!=", ">=", "{", "}", "(", ")", ".", ",", "*", "=", ">", "!",
                    ];
                    match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                        Some(p) => {
                            self.pos += p.len();
                            Tok::Punct(p)
                        }
                        None => return Err(self.error(start, format!("unexpected character `{c}`"))),
                    }
                }
            };
            out.push((start, tok));
        }
        Ok(out)
    }

    fn string(&mut self, quote: char) -> Result<String, QueryError> {
        let start = self.pos;
        self.pos += 1;
        let mut value = String::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(self.error(start, "unterminated string"));
            };
            self.pos += c.len_utf8();
            match c {
                c if c == quote => return Ok(value),
                '\\' => {
                    let Some(e) = self.peek() else {
                        return Err(self.error(start, "unterminated string"));
                    };
                    self.pos += 1;
                    value.push(match e {
                        't' => '\t',
                        'n' => '\n',
                        'r' => '\r',
                        'b' => '\u{8}',
                        'f' => '\u{c}',
                        '"' => '"',
                        '\'' => '\'',
                        '\\' => '\\',
                        _ => return Err(self.error(self.pos - 2, "invalid escape")),
                    });
                }
                '\n' | '\r' => return Err(self.error(start, "newline in string")),
                c => value.push(c),
            }
        }
    }
}

fn line_col(src: &str, at: usize) -> (usize, usize) {
    let before = &src[..at.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    prefixes: HashMap<String, String>,
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |(o, _)| *o)
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = line_col(self.src, self.offset());
        QueryError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(word))
    }

    fn at_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn expect_word(&mut self, word: &str) -> Result<(), QueryError> {
        if self.at_word(word) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{word}`")))
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.at_punct(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`")))
        }
    }

    fn expand(&self, prefix: &str, local: &str) -> Result<Iri, QueryError> {
        let ns = self.prefixes.get(prefix).ok_or_else(|| {
            let (line, column) = line_col(self.src, self.offset());
            QueryError::UnknownPrefix {
                prefix: prefix.to_owned(),
                line,
                column,
            }
        })?;
        Iri::new(format!("{ns}{local}")).map_err(|e| self.error(e.to_string()))
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        while self.at_word("PREFIX") {
            self.pos += 1;
            let prefix = match self.bump() {
                Some(Tok::PName(p, l)) if l.is_empty() => p,
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected `prefix:` after PREFIX"));
                }
            };
            match self.bump() {
                Some(Tok::IriRef(ns)) => {
                    self.prefixes.insert(prefix, ns);
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected `<namespace>`"));
                }
            }
        }
        self.expect_word("SELECT")?;
        let distinct = self.at_word("DISTINCT");
        if distinct {
            self.pos += 1;
        }
        let mut projection = vec![];
        let mut star = false;
        if self.at_punct("*") {
            self.pos += 1;
            star = true;
        } else {
            while let Some(Tok::Var(v)) = self.peek() {
                projection.push(Variable::new(v.clone()));
                self.pos += 1;
            }
            if projection.is_empty() {
                return Err(self.error("expected `*` or at least one variable after SELECT"));
            }
        }
        self.expect_word("WHERE")?;
        self.expect_punct("{")?;
        let mut patterns = vec![];
        let mut filters = vec![];
        loop {
            if self.at_punct("}") {
                self.pos += 1;
                break;
            }
            if self.at_punct(".") {
                self.pos += 1;
                continue;
            }
            if self.at_word("FILTER") {
                self.pos += 1;
                self.expect_punct("(")?;
                filters.push(self.or_expr()?);
                self.expect_punct(")")?;
                continue;
            }
            if self.peek().is_none() {
                return Err(self.error("unterminated `{`"));
            }
            let subject = self.pattern_term(false)?;
            let predicate = self.pattern_term(true)?;
            let object = self.pattern_term(false)?;
            patterns.push(TriplePattern {
                subject,
                predicate,
                object,
            });
        }
        let mut group_count = None;
        if self.at_word("GROUP-COUNT") {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Var(v)) => group_count = Some(Variable::new(v)),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected a variable after GROUP-COUNT"));
                }
            }
        }
        let mut order_by = None;
        if self.at_word("ORDER") {
            self.pos += 1;
            self.expect_word("BY")?;
            order_by = Some(self.order_key()?);
        }
        let mut limit = None;
        if self.at_word("LIMIT") {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Number(n)) if n.chars().all(|c| c.is_ascii_digit()) => {
                    limit = Some(n.parse().map_err(|_| self.error("LIMIT out of range"))?);
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected a non-negative integer after LIMIT"));
                }
            }
        }
        if self.peek().is_some() {
            return Err(self.error("unexpected trailing input"));
        }

        let mut query = Query {
            distinct,
            projection,
            patterns,
            filters,
            group_count,
            order_by,
            limit,
        };
        if star {
            query.projection = query.pattern_variables();
        }
        check_bindings(&query)?;
        Ok(query)
    }

    fn order_key(&mut self) -> Result<OrderBy, QueryError> {
        let ascending = if self.at_word("DESC") {
            false
        } else if self.at_word("ASC") {
            true
        } else {
            return match self.bump() {
                Some(Tok::Var(v)) => Ok(OrderBy {
                    key: Variable::new(v),
                    ascending: true,
                }),
                _ => {
                    self.pos -= 1;
                    Err(self.error("expected ASC(?v), DESC(?v) or ?v after ORDER BY"))
                }
            };
        };
        self.pos += 1;
        self.expect_punct("(")?;
        let key = match self.bump() {
            Some(Tok::Var(v)) => Variable::new(v),
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a variable"));
            }
        };
        self.expect_punct(")")?;
        Ok(OrderBy { key, ascending })
    }

    fn pattern_term(&mut self, predicate: bool) -> Result<PatternTerm, QueryError> {
        if let Some(Tok::Var(v)) = self.peek() {
            let v = Variable::new(v.clone());
            self.pos += 1;
            return Ok(PatternTerm::Var(v));
        }
        if predicate && self.at_word("a") {
            self.pos += 1;
            return Ok(PatternTerm::Term(Term::Iri(rdf::type_())));
        }
        let term = self.term()?;
        if predicate && term.as_iri().is_none() {
            return Err(self.error("predicate must be an IRI or a variable"));
        }
        Ok(PatternTerm::Term(term))
    }

    fn term(&mut self) -> Result<Term, QueryError> {
        let tok = self.bump().ok_or_else(|| self.error("unexpected end of query"))?;
        let term = match tok {
            Tok::IriRef(i) => Term::Iri(Iri::new(&i).map_err(|e| self.error(e.to_string()))?),
            Tok::PName(p, l) => {
                self.pos -= 1;
                let iri = self.expand(&p, &l)?;
                self.pos += 1;
                Term::Iri(iri)
            }
            Tok::Str(s) => match self.peek() {
                Some(Tok::LangTag(tag)) => {
                    let tag = tag.clone();
                    self.pos += 1;
                    Term::Literal(Literal::lang(s, &tag).map_err(|e| self.error(e.to_string()))?)
                }
                Some(Tok::Punct("^^")) => {
                    self.pos += 1;
                    match self.term()? {
                        Term::Iri(dt) => Term::Literal(Literal::typed(s, dt)),
                        _ => return Err(self.error("datatype must be an IRI")),
                    }
                }
                _ => Term::Literal(Literal::string(s)),
            },
            Tok::Number(n) => {
                let dt = if n.contains('.') {
                    xsd::decimal()
                } else {
                    xsd::integer()
                };
                Term::Literal(Literal::typed(n, dt))
            }
            Tok::Word(w) if w == "true" || w == "false" => Term::Literal(Literal::typed(w, xsd::boolean())),
            _ => {
                self.pos -= 1;
                return Err(self.error("expected an IRI, prefixed name or literal"));
            }
        };
        Ok(term)
    }

    fn or_expr(&mut self) -> Result<FilterExpr, QueryError> {
        let mut left = self.and_expr()?;
        while self.at_punct("||") {
            self.pos += 1;
            let right = self.and_expr()?;
            left = FilterExpr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<FilterExpr, QueryError> {
        let mut left = self.unary()?;
        while self.at_punct("&&") {
            self.pos += 1;
            let right = self.unary()?;
            left = FilterExpr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<FilterExpr, QueryError> {
        if self.at_punct("!") {
            self.pos += 1;
            return Ok(FilterExpr::Not(Box::new(self.unary()?)));
        }
        if self.at_punct("(") {
            self.pos += 1;
            let inner = self.or_expr()?;
            self.expect_punct(")")?;
            return Ok(inner);
        }
        if self.at_function("distance") {
            self.pos += 1;
            self.expect_punct("(")?;
            let a = self.point()?;
            self.expect_punct(",")?;
            let b = self.point()?;
            self.expect_punct(")")?;
            if !self.at_punct("<") {
                return Err(self.error("geo:distance(...) only supports the strict `<` comparison"));
            }
            self.pos += 1;
            let threshold_m = match self.bump() {
                Some(Tok::Number(n)) => n.parse::<f64>().ok(),
                _ => None,
            }
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| {
                self.pos -= 1;
                self.error("distance threshold must be a positive number of meters")
            })?;
            return Ok(FilterExpr::DistanceWithin { a, b, threshold_m });
        }
        let left = self.operand()?;
        let op = match self.bump() {
            Some(Tok::Punct("<")) => CompareOp::Lt,
            Some(Tok::Punct("<=")) => CompareOp::Le,
            Some(Tok::Punct("=")) => CompareOp::Eq,
            Some(Tok::Punct("!=")) => CompareOp::Ne,
            Some(Tok::Punct(">=")) => CompareOp::Ge,
            Some(Tok::Punct(">")) => CompareOp::Gt,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a comparison operator"));
            }
        };
        let right = self.operand()?;
        Ok(FilterExpr::Compare(left, op, right))
    }

    /// `geo:` functions are recognized by local name whatever the prefix maps to.
    fn at_function(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::PName(p, l)) if p == "geo" && l == name)
    }

    fn point(&mut self) -> Result<PointExpr, QueryError> {
        if let Some(Tok::Var(v)) = self.peek() {
            let v = Variable::new(v.clone());
            self.pos += 1;
            return Ok(PointExpr::Node(v));
        }
        if self.at_function("point") {
            self.pos += 1;
            self.expect_punct("(")?;
            let lat = self.operand()?;
            self.expect_punct(",")?;
            let lon = self.operand()?;
            self.expect_punct(")")?;
            return Ok(PointExpr::Coordinates(lat, lon));
        }
        Err(self.error("expected a variable or geo:point(lat, lon)"))
    }

    fn operand(&mut self) -> Result<Expr, QueryError> {
        if let Some(Tok::Var(v)) = self.peek() {
            let v = Variable::new(v.clone());
            self.pos += 1;
            return Ok(Expr::Var(v));
        }
        self.term().map(Expr::Term)
    }
}

fn check_bindings(query: &Query) -> Result<(), QueryError> {
    let bound: BTreeSet<Variable> = query.pattern_variables().into_iter().collect();
    let unbound = |v: &Variable| QueryError::Unbound(v.to_string());
    for v in &query.projection {
        if !bound.contains(v) {
            return Err(unbound(v));
        }
    }
    for f in &query.filters {
        if let Some(v) = f.variables().into_iter().find(|v| !bound.contains(*v)) {
            return Err(unbound(v));
        }
    }
    if let Some(count) = &query.group_count {
        if bound.contains(count) || query.projection.contains(count) {
            return Err(QueryError::Syntax {
                line: 1,
                column: 1,
                message: format!("GROUP-COUNT variable {count} is already used by the query"),
            });
        }
    }
    if let Some(order) = &query.order_by {
        let ok = if query.group_count.is_some() || query.distinct {
            query.columns().contains(&order.key)
        } else {
            bound.contains(&order.key)
        };
        if !ok {
            return Err(unbound(&order.key));
        }
    }
    Ok(())
}

/// Parses the query text.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let toks = Lexer { src: text, pos: 0 }.tokens()?;
    Parser {
        src: text,
        toks,
        pos: 0,
        prefixes: HashMap::new(),
    }
    .query()
}
