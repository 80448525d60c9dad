//! JSON-LD export of one resource and the blank nodes hanging off it.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde_json::{json, Map, Value as Json};

use crate::graph::{Graph, Iri, Term};
use crate::vocab::{self, rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonLdError {
    #[error("`{0}` is not a subject in the graph")]
    RootAbsent(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JsonLdDocument {
    /// Prefix → namespace. Always holds `schema`.
    pub context: BTreeMap<String, String>,
    /// The root node object, without `@context`.
    pub body: Map<String, Json>,
}

impl JsonLdDocument {
    pub fn to_json(&self) -> Json {
        let mut obj = Map::new();
        obj.insert("@context".into(), json!(self.context));
        for (k, v) in &self.body {
            obj.insert(k.clone(), v.clone());
        }
        Json::Object(obj)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON values always serialize")
    }
}

/// Embeds `root` and every blank node reachable from it through blank nodes.
///
/// Blank nodes referenced once are nested anonymously. A blank node referenced
/// more than once gets an `@id` of the form `_:bN`, is embedded at its first
/// occurrence, and is referenced by `@id` afterwards.
pub fn to_jsonld(graph: &Graph, root: &Iri) -> Result<JsonLdDocument, JsonLdError> {
    let root_term = Term::Iri(root.clone());
    if graph.matches(Some(&root_term), None, None).next().is_none() {
        return Err(JsonLdError::RootAbsent(root.to_string()));
    }

    let mut incoming: HashMap<&Term, usize> = HashMap::new();
    for t in graph.iter() {
        if let Term::Blank(_) = t.object() {
            *incoming.entry(t.object()).or_default() += 1;
        }
    }

    let mut writer = Writer {
        graph,
        incoming,
        labels: HashMap::new(),
        emitted: HashSet::new(),
    };
    let body = writer.node(&root_term);
    let context = vocab::PREFIXES
        .iter()
        .filter(|(p, _)| *p != "rdfs")
        .map(|(p, ns)| ((*p).to_owned(), (*ns).to_owned()))
        .collect();
    Ok(JsonLdDocument { context, body })
}

struct Writer<'g> {
    graph: &'g Graph,
    incoming: HashMap<&'g Term, usize>,
    labels: HashMap<Term, String>,
    emitted: HashSet<Term>,
}

impl Writer<'_> {
    fn label(&mut self, node: &Term) -> String {
        let next = self.labels.len();
        self.labels
            .entry(node.clone())
            .or_insert_with(|| format!("_:b{next}"))
            .clone()
    }

    fn node(&mut self, node: &Term) -> Map<String, Json> {
        let mut obj = Map::new();
        self.emitted.insert(node.clone());
        match node {
            Term::Iri(i) => {
                obj.insert("@id".into(), json!(i.as_str()));
            }
            Term::Blank(_) => {
                if self.incoming.get(node).copied().unwrap_or(0) > 1 {
                    obj.insert("@id".into(), json!(self.label(node)));
                }
            }
            Term::Literal(_) => unreachable!("literals are never subjects"),
        }

        let mut triples: Vec<_> = self.graph.matches(Some(node), None, None).collect();
        triples.sort_by_key(|t| (t.predicate().clone(), t.object().to_string()));

        let types: Vec<Json> = triples
            .iter()
            .filter(|t| t.predicate() == &rdf::type_())
            .filter_map(|t| t.object().as_iri())
            .map(|i| json!(compact(i)))
            .collect();
        if !types.is_empty() {
            obj.insert("@type".into(), Json::Array(types));
        }

        let mut properties: BTreeMap<String, Vec<Json>> = BTreeMap::new();
        for t in triples {
            // blank nodes used as a type object cannot sit in @type
            if t.predicate() == &rdf::type_() && t.object().as_iri().is_some() {
                continue;
            }
            let value = match t.object() {
                Term::Iri(i) => json!({ "@id": i.as_str() }),
                Term::Literal(lit) => {
                    if let Some(lang) = lit.language() {
                        json!({ "@value": lit.lexical(), "@language": lang })
                    } else if lit.datatype() == &xsd::string() {
                        json!(lit.lexical())
                    } else {
                        json!({ "@value": lit.lexical(), "@type": compact(lit.datatype()) })
                    }
                }
                blank @ Term::Blank(_) => {
                    if self.emitted.contains(blank) {
                        json!({ "@id": self.label(blank) })
                    } else {
                        Json::Object(self.node(blank))
                    }
                }
            };
            properties.entry(compact(t.predicate())).or_default().push(value);
        }
        for (key, values) in properties {
            obj.insert(key, Json::Array(values));
        }
        obj
    }
}

fn compact(iri: &Iri) -> String {
    vocab::compact(iri.as_str())
        .filter(|c| !c.starts_with("rdfs:"))
        .unwrap_or_else(|| iri.as_str().to_owned())
}
