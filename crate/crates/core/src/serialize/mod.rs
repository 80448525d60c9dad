//! Graph serializations: canonical N-Triples (read/write), Turtle (write),
//! and Schema.org-flavoured JSON-LD (write).

pub mod jsonld;
pub mod ntriples;
pub mod turtle;

pub use jsonld::{to_jsonld, JsonLdDocument, JsonLdError};
pub use ntriples::{from_ntriples, to_ntriples, to_ntriples_with, NTriplesError, WriteOptions};
pub use turtle::to_turtle;
