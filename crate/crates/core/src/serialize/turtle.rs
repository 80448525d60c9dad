//! Turtle output with prefix compression. Write-only.

use std::collections::BTreeMap;

use super::ntriples::{iri_to_string, quoted, term_to_string};
use crate::graph::{Graph, Iri, Term};
use crate::vocab::{rdf, xsd};

/// Serializes `graph` as Turtle using the given `(prefix, namespace)` pairs.
///
/// Subjects are emitted in canonical order with predicates grouped by `;` and
/// objects by `,`. An IRI is written as a prefixed name only when its local
/// part is a plain name; otherwise it stays absolute.
pub fn to_turtle(graph: &Graph, prefixes: &[(&str, &str)]) -> String {
    let mut out = String::new();
    for (prefix, ns) in prefixes {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }
    let mut grouped: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    let mut subject_keys: BTreeMap<String, String> = BTreeMap::new();
    for t in graph.sorted() {
        let s_key = term_to_string(t.subject(), false);
        subject_keys
            .entry(s_key.clone())
            .or_insert_with(|| render_term(t.subject(), prefixes));
        let predicate = if t.predicate() == &rdf::type_() {
            "a".to_owned()
        } else {
            render_iri(t.predicate(), prefixes)
        };
        grouped
            .entry(s_key)
            .or_default()
            .entry(predicate)
            .or_default()
            .push(render_term(t.object(), prefixes));
    }
    if !grouped.is_empty() && !prefixes.is_empty() {
        out.push('\n');
    }
    for (s_key, predicates) in grouped {
        out.push_str(&subject_keys[&s_key]);
        let mut first = true;
        // `a` first, the rest in order
        let mut ordered: Vec<_> = predicates.into_iter().collect();
        ordered.sort_by_key(|(p, _)| (p != "a", p.clone()));
        for (predicate, objects) in ordered {
            out.push_str(if first { " " } else { " ;\n    " });
            first = false;
            out.push_str(&predicate);
            out.push(' ');
            out.push_str(&objects.join(", "));
        }
        out.push_str(" .\n");
    }
    out
}

fn is_plain_local(local: &str) -> bool {
    let mut chars = local.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn render_iri(iri: &Iri, prefixes: &[(&str, &str)]) -> String {
    prefixes
        .iter()
        .filter(|(_, ns)| iri.as_str().starts_with(ns))
        .filter(|(_, ns)| is_plain_local(&iri.as_str()[ns.len()..]))
        .max_by_key(|(_, ns)| ns.len())
        .map(|(p, ns)| format!("{p}:{}", &iri.as_str()[ns.len()..]))
        .unwrap_or_else(|| iri_to_string(iri, false))
}

fn render_term(term: &Term, prefixes: &[(&str, &str)]) -> String {
    match term {
        Term::Iri(i) => render_iri(i, prefixes),
        Term::Blank(_) => term_to_string(term, false),
        Term::Literal(lit) => {
            let mut out = quoted(lit.lexical(), false);
            if let Some(lang) = lit.language() {
                out.push('@');
                out.push_str(lang);
            } else if lit.datatype() != &xsd::string() {
                out.push_str("^^");
                out.push_str(&render_iri(lit.datatype(), prefixes));
            }
            out
        }
    }
}
