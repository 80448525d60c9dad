//! Namespace IRIs and well-known terms.

use crate::graph::Iri;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const SCHEMA: &str = "https://schema.org/";
pub const TIFSEM: &str = "http://example.org/tifsem/ontology#";
/// Default namespace for preserved dialect-specific tags.
pub const TIFSEM_EXT: &str = "http://example.org/tifsem/ext#";
/// Default base for minted InformationObject IRIs.
pub const DEFAULT_BASE: &str = "http://example.org/tifsem";

/// Prefix table used for compact output and for parsing prefixed names.
pub const PREFIXES: &[(&str, &str)] = &[
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("schema", SCHEMA),
    ("tifsem", TIFSEM),
    ("xsd", XSD),
];

/// Expands `prefix:local` against [`PREFIXES`]; absolute IRIs pass through.
pub fn expand(name: &str) -> Option<String> {
    if let Some((prefix, local)) = name.split_once(':') {
        if let Some((_, ns)) = PREFIXES.iter().find(|(p, _)| *p == prefix) {
            return Some(format!("{ns}{local}"));
        }
        if local.starts_with("//") {
            return Some(name.to_owned());
        }
    }
    None
}

/// Shortest `prefix:local` form of an IRI, if a prefix matches.
pub fn compact(iri: &str) -> Option<String> {
    PREFIXES
        .iter()
        .filter(|(_, ns)| iri.starts_with(ns) && iri.len() > ns.len())
        .max_by_key(|(_, ns)| ns.len())
        .map(|(p, ns)| format!("{p}:{}", &iri[ns.len()..]))
}

pub fn tifsem(local: &str) -> Iri {
    Iri::new(format!("{TIFSEM}{local}")).expect("vocabulary IRI")
}

pub fn schema(local: &str) -> Iri {
    Iri::new(format!("{SCHEMA}{local}")).expect("vocabulary IRI")
}

pub mod rdf {
    use crate::graph::Iri;

    pub fn type_() -> Iri {
        Iri::from_static("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
    }

    pub fn lang_string() -> Iri {
        Iri::from_static("http://www.w3.org/1999/02/22-rdf-syntax-ns#langString")
    }
}

pub mod xsd {
    use crate::graph::Iri;

    pub fn string() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#string")
    }

    pub fn decimal() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#decimal")
    }

    pub fn integer() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#integer")
    }

    pub fn double() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#double")
    }

    pub fn date() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#date")
    }

    pub fn boolean() -> Iri {
        Iri::from_static("http://www.w3.org/2001/XMLSchema#boolean")
    }
}
