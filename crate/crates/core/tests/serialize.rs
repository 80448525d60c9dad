mod common;

use rio_api::model as rio;
use rio_api::parser::TriplesParser;
use rio_turtle::{TurtleError, TurtleParser};

use common::*;
use tifsem::cli::ingest_documents;
use tifsem::fixtures;
use tifsem::graph::{io_iri, Graph, Literal, Term};
use tifsem::ingest::{DialectProfile, RawDocument};
use tifsem::mapping::{builtin_rules, materialize};
use tifsem::serialize::{from_ntriples, to_jsonld, to_ntriples, to_turtle};
use tifsem::vocab::{self, DEFAULT_BASE, PREFIXES};

fn parse_turtle(text: &str) -> Graph {
    let mut g = Graph::new();
    TurtleParser::new(text.as_bytes(), None)
        .parse_all(&mut |t: rio::Triple<'_>| -> Result<(), TurtleError> {
            let subject = match t.subject {
                rio::Subject::NamedNode(n) => Term::Iri(iri(n.iri)),
                rio::Subject::BlankNode(b) => Term::blank(b.id).unwrap(),
                other => panic!("unexpected subject {other}"),
            };
            let object = match t.object {
                rio::Term::NamedNode(n) => Term::Iri(iri(n.iri)),
                rio::Term::BlankNode(b) => Term::blank(b.id).unwrap(),
                rio::Term::Literal(rio::Literal::Simple { value }) => Literal::string(value).into(),
                rio::Term::Literal(rio::Literal::LanguageTaggedString { value, language }) => {
                    Literal::lang(value, language).unwrap().into()
                }
                rio::Term::Literal(rio::Literal::Typed { value, datatype }) => {
                    Literal::typed(value, iri(datatype.iri)).into()
                }
                other => panic!("unexpected object {other}"),
            };
            g.insert(triple(subject, iri(t.predicate.iri), object));
            Ok(())
        })
        .unwrap_or_else(|e| panic!("{e}\n{text}"));
    g
}

fn hotel_graph() -> Graph {
    ingest_documents(
        &[RawDocument::new("v3", fixtures::HOTEL_V3)],
        &DialectProfile::identity(),
        DEFAULT_BASE,
    )
    .unwrap()
    .0
}

#[test]
fn ntriples_small_cases() {
    assert_eq!(to_ntriples(&Graph::new()), "");
    assert!(from_ntriples("").unwrap().is_empty());

    let mut g = Graph::new();
    g.insert(triple(
        iri("http://a.org/s").into(),
        iri("http://a.org/p"),
        Literal::string("o").into(),
    ));
    let text = to_ntriples(&g);
    assert_eq!(text.lines().count(), 1);
    assert!(text.ends_with(" .\n"));

    let doubled = format!("{text}{text}");
    assert_eq!(from_ntriples(&doubled).unwrap().len(), 1);

    let broken = format!("{text}<http://a.org/s> <http://a.org/p> \"x\"\n");
    let err = from_ntriples(&broken).unwrap_err();
    assert_eq!(err.line, 2);
}

#[test]
fn ntriples_round_trip_random_graphs() {
    let mut rng = rng(31);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 200);
        assert_eq!(from_ntriples(&to_ntriples(&g)).unwrap(), g);
    }
}

#[test]
fn turtle_reparses_to_the_same_graph() {
    let mut rng = rng(32);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 100);
        let text = to_turtle(&g, PREFIXES);
        assert_eq!(parse_turtle(&text), g, "\n{text}");
    }
    let mut hotel = hotel_graph();
    materialize(&mut hotel, &builtin_rules());
    assert_eq!(parse_turtle(&to_turtle(&hotel, PREFIXES)), hotel);
}

#[test]
fn turtle_empty_graph_has_prefixes_only() {
    let text = to_turtle(&Graph::new(), PREFIXES);
    assert!(!text.trim().is_empty());
    assert!(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .all(|l| l.starts_with("@prefix")));
}

#[test]
fn turtle_compresses_prefixed_iris() {
    let mut g = Graph::new();
    for (i, local) in ["Hotel", "Place", "Event"].iter().enumerate() {
        g.insert(triple(
            vocab::tifsem(&format!("n{i}")).into(),
            vocab::rdf::type_(),
            vocab::schema(local).into(),
        ));
        g.insert(triple(
            vocab::tifsem(&format!("n{i}")).into(),
            vocab::tifsem("near"),
            vocab::tifsem("n0").into(),
        ));
    }
    let text = to_turtle(&g, PREFIXES);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with("@prefix")).collect();
    assert!(body.iter().all(|l| !l.contains('<')), "{text}");
    assert_eq!(parse_turtle(&text), g);
}

#[test]
fn jsonld_of_materialized_hotel() {
    let mut g = hotel_graph();
    materialize(&mut g, &builtin_rules());
    let root = io_iri(DEFAULT_BASE, "HOT-017-0042").unwrap();
    let doc = to_jsonld(&g, &root).unwrap();
    let json = doc.to_json();
    let types: Vec<&str> = json["@type"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_str().unwrap())
        .collect();
    assert!(types.contains(&"tifsem:InformationObject") && types.contains(&"schema:Hotel"));

    let granule_types: Vec<Vec<String>> = json["tifsem:hasGranule"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| {
            g["@type"]
                .as_array()
                .unwrap()
                .iter()
                .map(|t| t.as_str().unwrap().to_owned())
                .collect()
        })
        .collect();
    let multimedia = granule_types
        .iter()
        .find(|t| t.contains(&"tifsem:Multimedia".to_owned()))
        .unwrap();
    assert!(multimedia.contains(&"schema:MediaObject".to_owned()));
    let prices = granule_types
        .iter()
        .find(|t| t.contains(&"tifsem:Prices".to_owned()))
        .unwrap();
    assert!(prices.contains(&"schema:Offer".to_owned()) && prices.contains(&"schema:PriceSpecification".to_owned()));

    let expanded = expand_jsonld(&json);
    assert_eq!(
        canonical_form(&expanded),
        canonical_form(&blank_closure(&g, &Term::Iri(root)))
    );
}

#[test]
fn jsonld_expansion_on_random_graphs() {
    let mut rng = rng(33);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 60);
        let roots: Vec<Term> = g.subjects().filter(|s| s.as_iri().is_some()).take(3).cloned().collect();
        for root in roots {
            let doc = to_jsonld(&g, root.as_iri().unwrap()).unwrap();
            let text = doc.to_string_pretty();
            let reparsed: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(
                canonical_form(&expand_jsonld(&reparsed)),
                canonical_form(&blank_closure(&g, &root)),
                "\n{text}"
            );
        }
    }
}
