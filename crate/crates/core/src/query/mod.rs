//! A SPARQL-flavoured query subset: basic graph patterns, comparison and
//! geodistance filters, DISTINCT, a `GROUP-COUNT` aggregation, ORDER BY and LIMIT.
//!
//! ```text
//! PREFIX schema: <https://schema.org/>
//! SELECT ?hotel WHERE {
//!   ?hotel a schema:Hotel . ?hotel tifsem:hasGranule ?g .
//!   ?place tifsem:hasGranule ?pg .
//!   FILTER(geo:distance(?g, ?pg) < 1000)
//! } GROUP-COUNT ?nearby ORDER BY DESC(?nearby)
//! ```

mod ast;
mod eval;
mod parser;

pub use ast::*;
pub use eval::{compare_terms, evaluate, node_point, numeric, order_terms, EvalError, SolutionTable};
pub use parser::{parse_query, QueryError};

pub use crate::filter_within;
pub use crate::geo_distance;
