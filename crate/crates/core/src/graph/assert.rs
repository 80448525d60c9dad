use std::fmt::Write as _;

use super::{Graph, Iri, Literal, Term, Triple};
use crate::ingest::{validate_io, Severity, ValidationIssue};
use crate::ontology::{GranuleKind, InformationObject, Value};
use crate::vocab::{self, rdf, xsd};

#[derive(Debug, thiserror::Error)]
pub enum AssertError {
    #[error("InformationObject `{id}` failed validation with {} error(s)", .issues.len())]
    Invalid { id: String, issues: Vec<ValidationIssue> },
    #[error("base IRI `{0}` is not a valid IRI")]
    Base(String),
}

/// IRI minted for an InformationObject: `<base>/io/<percent-encoded id>`.
pub fn io_iri(base: &str, id: &str) -> Result<Iri, AssertError> {
    let mut iri = base.trim_end_matches('/').to_owned();
    iri.push_str("/io/");
    for b in id.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            iri.push(b as char);
        } else {
            let _ = write!(iri, "%{b:02X}");
        }
    }
    Iri::new(&iri).map_err(|_| AssertError::Base(base.to_owned()))
}

/// Blank-node label of the `ordinal`-th granule of `kind` in IO `id`.
///
/// The id is escaped so that labels of distinct IOs never collide.
pub fn granule_label(id: &str, kind: GranuleKind, ordinal: usize) -> String {
    let mut label = String::from("g-");
    for b in id.bytes() {
        if b.is_ascii_alphanumeric() {
            label.push(b as char);
        } else {
            let _ = write!(label, "_{b:02X}");
        }
    }
    let _ = write!(label, "-{}-{ordinal}", kind.name());
    label
}

/// Writes one InformationObject into the graph and returns the number of new triples.
///
/// The IO gets `rdf:type tifsem:InformationObject` (plus its Schema.org category
/// when present); each granule becomes a blank node typed with its granule class
/// and linked by `tifsem:hasGranule`; each field value becomes one triple, except
/// coordinate points, which expand to latitude and longitude.
pub fn assert_io(graph: &mut Graph, io: &InformationObject, base: &str) -> Result<usize, AssertError> {
    let errors: Vec<_> = validate_io(io)
        .into_iter()
        .filter(|i| i.severity == Severity::Error)
        .collect();
    if !errors.is_empty() {
        return Err(AssertError::Invalid {
            id: io.id.clone(),
            issues: errors,
        });
    }
    let subject: Term = io_iri(base, &io.id)?.into();
    let before = graph.len();
    let mut add = |s: &Term, p: Iri, o: Term| {
        graph.insert(Triple::new(s.clone(), p, o).expect("subjects are IRIs or blank nodes"));
    };

    add(&subject, rdf::type_(), vocab::tifsem("InformationObject").into());
    if let Some(category) = &io.category {
        add(&subject, rdf::type_(), vocab::schema(category).into());
    }
    for (kind, granules) in &io.granules {
        for (ordinal, granule) in granules.iter().enumerate() {
            let node = Term::Blank(granule_label(&io.id, *kind, ordinal));
            add(&subject, vocab::tifsem("hasGranule"), node.clone());
            add(&node, rdf::type_(), kind.class_iri().into());
            for (field, values) in &granule.fields {
                let predicate = match kind.field(field) {
                    Some(spec) => vocab::tifsem(&spec.property_local_name()),
                    // extension fields are keyed by their full IRI
                    None => Iri::new(field).expect("validated extension IRI"),
                };
                for value in values {
                    match value {
                        Value::Text(s) => add(&node, predicate.clone(), Literal::string(s).into()),
                        Value::Decimal(d) => add(&node, predicate.clone(), Literal::decimal(*d).into()),
                        Value::Date(d) => add(
                            &node,
                            predicate.clone(),
                            Literal::typed(d.format("%Y-%m-%d").to_string(), xsd::date()).into(),
                        ),
                        Value::Reference(id) => add(&node, predicate.clone(), io_iri(base, id)?.into()),
                        Value::Point(p) => {
                            add(&node, vocab::tifsem("latitude"), Literal::decimal(p.latitude()).into());
                            add(
                                &node,
                                vocab::tifsem("longitude"),
                                Literal::decimal(p.longitude()).into(),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(graph.len() - before)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::Granule;
    use crate::vocab::DEFAULT_BASE;

    fn hotel() -> InformationObject {
        InformationObject::new("H1").with_granule(
            Granule::new(GranuleKind::Geolocations)
                .with("Latitude", Value::Decimal(46.1591))
                .with("Longitude", Value::Decimal(-1.152))
                .with("City", Value::Text("La Rochelle".into())),
        )
    }

    #[test]
    fn zero_granules_is_one_triple() {
        let mut g = Graph::new();
        assert_eq!(
            assert_io(&mut g, &InformationObject::new("x"), DEFAULT_BASE).unwrap(),
            1
        );
    }

    #[test]
    fn hotel_with_three_fields_is_six_triples() {
        let io = hotel();
        // 1 type triple, then per granule: link + type + one per field value
        let oracle = 1 + io
            .granules()
            .map(|g| 2 + g.fields.values().map(Vec::len).sum::<usize>())
            .sum::<usize>();
        let mut g = Graph::new();
        let added = assert_io(&mut g, &io, DEFAULT_BASE).unwrap();
        assert_eq!(added, 6);
        assert_eq!(added, oracle);
        assert_eq!(assert_io(&mut g, &io, DEFAULT_BASE).unwrap(), 0);
    }

    #[test]
    fn invalid_io_is_rejected() {
        let io = InformationObject::new("bad")
            .with_granule(Granule::new(GranuleKind::Geolocations).with("Latitude", Value::Decimal(91.0)));
        assert!(matches!(
            assert_io(&mut Graph::new(), &io, DEFAULT_BASE),
            Err(AssertError::Invalid { .. })
        ));
    }

    #[test]
    fn minted_iris_and_labels_are_injective() {
        assert_eq!(
            io_iri(DEFAULT_BASE, "H 1").unwrap().as_str(),
            "http://example.org/tifsem/io/H%201"
        );
        assert_ne!(
            io_iri(DEFAULT_BASE, "a b").unwrap(),
            io_iri(DEFAULT_BASE, "a_b").unwrap()
        );
        assert_ne!(
            granule_label("a b", GranuleKind::Prices, 0),
            granule_label("a_b", GranuleKind::Prices, 0)
        );
        assert_ne!(
            granule_label("a-Prices-0", GranuleKind::Prices, 0),
            granule_label("a", GranuleKind::Prices, 0)
        );
        assert!(crate::graph::is_blank_label(&granule_label(
            "é/x",
            GranuleKind::Prices,
            3
        )));
    }

    #[test]
    fn point_expands_to_two_literals() {
        let io = InformationObject::new("p").with_granule(
            Granule::new(GranuleKind::Geolocations)
                .with("Point", Value::Point(crate::GeoPoint::new(1.5, 2.0).unwrap())),
        );
        let mut g = Graph::new();
        assert_eq!(assert_io(&mut g, &io, DEFAULT_BASE).unwrap(), 5);
        assert_eq!(g.matches(None, Some(&vocab::tifsem("longitude")), None).count(), 1);
    }
}
