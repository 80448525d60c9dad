//! TIF XML ingestion: dialect profiles, parsing into InformationObjects,
//! and validation.

mod parse;
mod profile;
mod validate;

pub use parse::{content_id, decode, parse_tif, ParseError, ParseOutput, ParseStats, RawDocument};
pub use profile::{normalize_tag, DialectProfile, ProfileError, TagResolution};
pub use validate::{format_issues, validate_io, Severity, ValidationIssue};
