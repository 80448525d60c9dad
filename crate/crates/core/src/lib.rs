//! Ingests TourInFrance (TIF) XML tourism data, normalizes it into the TIFSem
//! granule model, aligns it to Schema.org, and exposes the result as a small
//! queryable knowledge graph with N-Triples, Turtle and JSON-LD output.

pub mod cli;
pub mod fixtures;
pub mod geo;
pub mod graph;
pub mod ingest;
pub mod mapping;
pub mod ontology;
pub mod query;
pub mod serialize;
pub mod vocab;

/// Coordinates in `f64` degrees.
pub type GeoPoint = geo::Point<f64>;
/// Coordinates in `f32` degrees.
pub type GeoPointF32 = geo::Point<f32>;

/// Haversine distance in meters between two `f64` points.
pub fn geo_distance(a: &GeoPoint, b: &GeoPoint) -> f64 {
    geo::haversine(a, b)
}

pub use geo::filter_within;
pub use graph::{Graph, Iri, Literal, Term, Triple};
pub use ontology::{load_core_ontology, GranuleKind, InformationObject};
