use std::collections::BTreeMap;

use chrono::NaiveDate;
use sha2::{Digest, Sha256};

use super::profile::{DialectProfile, ProfileError, TagResolution};
use super::validate::{validate_io, ValidationIssue};
use crate::ontology::{CanonicalPath, FieldType, Granule, GranuleKind, InformationObject, Value};
use crate::GeoPoint;

#[derive(Debug, Clone)]
pub struct RawDocument {
    pub source_uri: String,
    pub bytes: Vec<u8>,
    /// Overrides the encoding named in the XML declaration.
    pub declared_encoding: Option<String>,
}

impl RawDocument {
    pub fn new(source_uri: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        RawDocument {
            source_uri: source_uri.into(),
            bytes: bytes.into(),
            declared_encoding: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{source_uri}:{line}:{column}: malformed XML: {message}")]
    Xml {
        source_uri: String,
        line: u32,
        column: u32,
        message: String,
    },
    #[error("{source_uri}: {message}")]
    Encoding { source_uri: String, message: String },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Per-leaf accounting. `leaves == mapped + extension + dropped + reported` always.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseStats {
    pub leaves: usize,
    pub mapped: usize,
    pub extension: usize,
    pub dropped: usize,
    pub reported: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOutput {
    pub ios: Vec<InformationObject>,
    pub issues: Vec<ValidationIssue>,
    pub stats: ParseStats,
}

/// Decodes the document bytes as UTF-8 or Latin-1.
///
/// The encoding comes from `declared_encoding`, else from the XML declaration,
/// else defaults to UTF-8. A UTF-8 byte order mark is skipped.
pub fn decode(doc: &RawDocument) -> Result<String, ParseError> {
    let bytes = doc.bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(&doc.bytes);
    let encoding = doc
        .declared_encoding
        .clone()
        .or_else(|| declared_encoding(bytes))
        .unwrap_or_else(|| "utf-8".into())
        .to_ascii_lowercase();
    match encoding.as_str() {
        "utf-8" | "utf8" => String::from_utf8(bytes.to_vec()).map_err(|e| ParseError::Encoding {
            source_uri: doc.source_uri.clone(),
            message: format!("invalid UTF-8 at byte {}", e.utf8_error().valid_up_to()),
        }),
        "iso-8859-1" | "iso8859-1" | "iso_8859-1" | "latin1" | "latin-1" | "l1" => {
            Ok(bytes.iter().map(|&b| b as char).collect())
        }
        other => Err(ParseError::Encoding {
            source_uri: doc.source_uri.clone(),
            message: format!("unsupported encoding `{other}`"),
        }),
    }
}

fn declared_encoding(bytes: &[u8]) -> Option<String> {
    let head = bytes.strip_prefix(b"<?xml")?;
    let end = head.windows(2).position(|w| w == b"?>")?;
    let decl = std::str::from_utf8(&head[..end]).ok()?;
    let rest = &decl[decl.find("encoding")? + "encoding".len()..];
    let rest = rest.trim_start().strip_prefix('=')?.trim_start();
    let quote = rest.chars().next().filter(|c| *c == '"' || *c == '\'')?;
    let value = &rest[1..];
    Some(value[..value.find(quote)?].to_owned())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum GroupKey {
    /// Fields written directly under the resource element.
    Implicit(GranuleKind),
    /// Fields under the `n`-th child element of the resource.
    Child(usize, GranuleKind),
}

impl GroupKey {
    fn kind(self) -> GranuleKind {
        match self {
            GroupKey::Implicit(k) | GroupKey::Child(_, k) => k,
        }
    }
}

struct Leaf<'a> {
    path: String,
    value: &'a str,
    /// Index of the resource child element the leaf belongs to.
    child: Option<usize>,
    /// Whether the leaf sits below that child rather than being the child itself.
    nested: bool,
    /// Name of the resource child element.
    child_name: Option<&'a str>,
}

/// Parses TIF XML into InformationObjects.
///
/// Every child of the document root is one resource. Each leaf element and
/// attribute under a resource is resolved through the profile into a
/// canonical field, an extension field, a drop, or a reported issue. The
/// validation issues of each parsed IO are appended to the parse issues.
pub fn parse_tif(doc: &RawDocument, profile: &DialectProfile) -> Result<ParseOutput, ParseError> {
    profile.validate()?;
    let text = decode(doc)?;
    let xml = roxmltree::Document::parse(&text).map_err(|e| {
        let pos = e.pos();
        ParseError::Xml {
            source_uri: doc.source_uri.clone(),
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })?;

    let mut out = ParseOutput::default();
    let mut seen_ids: BTreeMap<String, usize> = BTreeMap::new();
    for resource in xml.root_element().children().filter(|n| n.is_element()) {
        let (io, issues) = parse_resource(resource, profile, &mut out.stats);
        let count = seen_ids.entry(io.id.clone()).or_default();
        *count += 1;
        out.issues.extend(issues);
        if *count > 1 {
            out.issues.push(ValidationIssue::error(
                Some(&io.id),
                "Identifier",
                "identifier already used by another resource in this batch",
            ));
        }
        out.issues.extend(validate_io(&io));
        out.ios.push(io);
    }
    Ok(out)
}

struct Collector<'a> {
    leaves: Vec<Leaf<'a>>,
    mixed: Vec<String>,
}

impl<'a> Collector<'a> {
    fn walk(&mut self, node: roxmltree::Node<'a, 'a>, prefix: &str, child: usize, child_name: &'a str) {
        let name = node.tag_name().name();
        let path = if prefix.is_empty() {
            name.to_owned()
        } else {
            format!("{prefix}/{name}")
        };
        let nested = !prefix.is_empty();
        for attr in node.attributes() {
            self.leaves.push(Leaf {
                path: format!("{path}/@{}", attr.name()),
                value: attr.value(),
                child: Some(child),
                nested: true,
                child_name: Some(child_name),
            });
        }
        let elements: Vec<_> = node.children().filter(|n| n.is_element()).collect();
        if elements.is_empty() {
            self.leaves.push(Leaf {
                path,
                value: node.text().unwrap_or(""),
                child: Some(child),
                nested,
                child_name: Some(child_name),
            });
            return;
        }
        if node
            .children()
            .any(|n| n.is_text() && n.text().is_some_and(|t| !t.trim().is_empty()))
        {
            self.mixed.push(path.clone());
        }
        for element in elements {
            self.walk(element, &path, child, child_name);
        }
    }
}

/// Granule instances keyed by where their fields came from, remembering first appearance.
#[derive(Default)]
struct Groups {
    by_key: BTreeMap<GroupKey, (usize, Granule)>,
}

impl Groups {
    fn get(&mut self, key: GroupKey) -> &mut Granule {
        let next = self.by_key.len();
        &mut self
            .by_key
            .entry(key)
            .or_insert_with(|| (next, Granule::new(key.kind())))
            .1
    }

    fn into_ordered(self) -> Vec<Granule> {
        let mut ordered: Vec<_> = self.by_key.into_values().collect();
        ordered.sort_by_key(|(o, _)| *o);
        ordered.into_iter().map(|(_, g)| g).collect()
    }
}

fn parse_resource(
    resource: roxmltree::Node<'_, '_>,
    profile: &DialectProfile,
    stats: &mut ParseStats,
) -> (InformationObject, Vec<ValidationIssue>) {
    let mut collector = Collector {
        leaves: vec![],
        mixed: vec![],
    };
    for attr in resource.attributes() {
        collector.leaves.push(Leaf {
            path: format!("@{}", attr.name()),
            value: attr.value(),
            child: None,
            nested: false,
            child_name: None,
        });
    }
    for (i, child) in resource.children().filter(|n| n.is_element()).enumerate() {
        collector.walk(child, "", i, child.tag_name().name());
    }

    // io_id is filled in once the identifier is known
    let mut issues: Vec<ValidationIssue> = vec![];
    let mut identifier: Option<String> = None;
    let mut category: Option<String> = None;
    let mut groups = Groups::default();

    for path in &collector.mixed {
        stats.leaves += 1;
        stats.reported += 1;
        issues.push(ValidationIssue::warning(
            None,
            path.clone(),
            "text mixed with child elements is ignored",
        ));
    }

    for leaf in &collector.leaves {
        stats.leaves += 1;
        let value = leaf.value.trim();
        let key_for = |kind| match (leaf.child, leaf.nested) {
            (Some(i), true) => GroupKey::Child(i, kind),
            _ => GroupKey::Implicit(kind),
        };
        match profile.normalize_tag(&leaf.path) {
            TagResolution::Dropped => stats.dropped += 1,
            TagResolution::Unrecognized => {
                stats.reported += 1;
                issues.push(ValidationIssue::warning(None, leaf.path.clone(), "unrecognized tag"));
            }
            TagResolution::Extension(iri) => {
                let kind = owner_kind(leaf, profile);
                groups.get(key_for(kind)).push(&iri, Value::Text(value.to_owned()));
                stats.extension += 1;
            }
            TagResolution::Canonical(path) => {
                match CanonicalPath::resolve(&path).expect("normalize_tag only returns canonical paths") {
                    CanonicalPath::Identifier | CanonicalPath::Category => {
                        let slot = if path == crate::ontology::IDENTIFIER_PATH {
                            &mut identifier
                        } else {
                            &mut category
                        };
                        if value.is_empty() || slot.is_some() {
                            stats.reported += 1;
                            issues.push(ValidationIssue::error(None, path, "empty or repeated value"));
                        } else {
                            *slot = Some(value.to_owned());
                            stats.mapped += 1;
                        }
                    }
                    CanonicalPath::Granule(kind) => {
                        // an element standing for a whole granule, such as `<Price/>`
                        let key = match leaf.child {
                            Some(i) => GroupKey::Child(i, kind),
                            None => GroupKey::Implicit(kind),
                        };
                        groups.get(key);
                        if value.is_empty() {
                            stats.mapped += 1;
                        } else {
                            stats.reported += 1;
                            issues.push(ValidationIssue::warning(
                                None,
                                path,
                                "text on a granule element is ignored",
                            ));
                        }
                    }
                    CanonicalPath::Field(kind, spec) => match typed_value(spec.ty, value) {
                        Ok(v) => {
                            groups.get(key_for(kind)).push(spec.name, v);
                            stats.mapped += 1;
                        }
                        Err(message) => {
                            stats.reported += 1;
                            issues.push(ValidationIssue::error(None, path, message));
                        }
                    },
                }
            }
        }
    }

    let mut io = InformationObject::new(String::new());
    io.category = category;
    for granule in groups.into_ordered() {
        io.add_granule(granule);
    }
    io.id = identifier.unwrap_or_else(|| content_id(&io));
    for issue in &mut issues {
        issue.io_id = Some(io.id.clone());
    }
    (io, issues)
}

/// Granule that receives an extension field: the one its enclosing child element
/// maps to, else additional description.
fn owner_kind(leaf: &Leaf<'_>, profile: &DialectProfile) -> GranuleKind {
    leaf.child_name
        .and_then(|name| match profile.normalize_tag(name) {
            TagResolution::Canonical(p) => CanonicalPath::resolve(&p).and_then(|c| c.kind()),
            _ => None,
        })
        .unwrap_or(GranuleKind::AdditionalDescription)
}

fn typed_value(ty: FieldType, raw: &str) -> Result<Value, String> {
    match ty {
        FieldType::Text => {
            if raw.is_empty() {
                Err("empty value".into())
            } else {
                Ok(Value::Text(raw.to_owned()))
            }
        }
        FieldType::Reference => {
            if raw.is_empty() {
                Err("empty reference".into())
            } else {
                Ok(Value::Reference(raw.to_owned()))
            }
        }
        FieldType::Decimal => parse_decimal(raw).map(Value::Decimal),
        FieldType::Date => NaiveDate::parse_from_str(raw, "%Y-%m-%d")
            .or_else(|_| NaiveDate::parse_from_str(raw, "%d/%m/%Y"))
            .map(Value::Date)
            .map_err(|_| format!("`{raw}` is not a date (YYYY-MM-DD or DD/MM/YYYY)")),
        FieldType::Point => {
            let parts: Vec<&str> = if raw.contains(';') {
                raw.split(';').collect()
            } else if raw.matches(',').count() == 1 {
                raw.split(',').collect()
            } else {
                raw.split_whitespace().collect()
            };
            let [lat, lon] = parts.as_slice() else {
                return Err(format!("`{raw}` is not a `latitude,longitude` pair"));
            };
            let point =
                GeoPoint::new(parse_decimal(lat.trim())?, parse_decimal(lon.trim())?).map_err(|e| e.to_string())?;
            Ok(Value::Point(point))
        }
    }
}

/// Accepts `.` or `,` as the decimal separator.
fn parse_decimal(raw: &str) -> Result<f64, String> {
    let normalized = raw.replace(',', ".");
    let valid_shape = !normalized.is_empty()
        && normalized
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+'));
    normalized
        .parse::<f64>()
        .ok()
        .filter(|d| valid_shape && d.is_finite())
        .ok_or_else(|| format!("`{raw}` is not a decimal number"))
}

/// Hex digest of the IO's canonical field multiset, for resources without an identifier.
pub fn content_id(io: &InformationObject) -> String {
    let mut hasher = Sha256::new();
    for line in io.canonical_field_multiset() {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(&hasher.finalize()[..16])
}
