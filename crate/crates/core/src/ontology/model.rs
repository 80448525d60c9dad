//! InformationObjects and their granules.

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;

use super::granule::GranuleKind;
use crate::graph::format_decimal;
use crate::GeoPoint;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Decimal(f64),
    Point(GeoPoint),
    Date(NaiveDate),
    /// Identifier of another InformationObject.
    Reference(String),
}

impl Value {
    /// Canonical textual form, used for content hashing and display.
    pub fn canonical(&self) -> String {
        match self {
            Value::Text(s) | Value::Reference(s) => s.clone(),
            Value::Decimal(d) => format_decimal(*d),
            Value::Point(p) => format!("{},{}", format_decimal(p.latitude()), format_decimal(p.longitude())),
            Value::Date(d) => d.format("%Y-%m-%d").to_string(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// One granule instance. Field keys are canonical field names (`Latitude`)
/// or, for preserved extension data, full IRIs under the extension namespace.
#[derive(Debug, Clone, PartialEq)]
pub struct Granule {
    pub kind: GranuleKind,
    pub fields: BTreeMap<String, Vec<Value>>,
}

impl Granule {
    pub fn new(kind: GranuleKind) -> Self {
        Granule {
            kind,
            fields: BTreeMap::new(),
        }
    }

    pub fn with(mut self, field: &str, value: Value) -> Self {
        self.push(field, value);
        self
    }

    pub fn push(&mut self, field: &str, value: Value) {
        self.fields.entry(field.to_owned()).or_default().push(value);
    }

    pub fn first(&self, field: &str) -> Option<&Value> {
        self.fields.get(field).and_then(|v| v.first())
    }

    pub fn is_empty(&self) -> bool {
        self.fields.values().all(Vec::is_empty)
    }

    pub fn value_count(&self) -> usize {
        self.fields.values().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InformationObject {
    pub id: String,
    /// Local name of a Schema.org class (`Hotel`, `Event`), when the source states one.
    pub category: Option<String>,
    pub granules: BTreeMap<GranuleKind, Vec<Granule>>,
}

impl InformationObject {
    pub fn new(id: impl Into<String>) -> Self {
        InformationObject {
            id: id.into(),
            category: None,
            granules: BTreeMap::new(),
        }
    }

    pub fn with_category(mut self, category: impl Into<String>) -> Self {
        self.category = Some(category.into());
        self
    }

    pub fn with_granule(mut self, granule: Granule) -> Self {
        self.add_granule(granule);
        self
    }

    pub fn add_granule(&mut self, granule: Granule) {
        self.granules.entry(granule.kind).or_default().push(granule);
    }

    pub fn granules(&self) -> impl Iterator<Item = &Granule> {
        self.granules.values().flatten()
    }

    pub fn granules_of(&self, kind: GranuleKind) -> &[Granule] {
        self.granules.get(&kind).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Sorted `path=value` lines over every schema field of every granule plus the
    /// category. Extension fields are left out.
    /// Used to derive identifiers when the source carries none.
    pub fn canonical_field_multiset(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .granules()
            .flat_map(|g| {
                g.fields
                    .iter()
                    .filter(move |(name, _)| g.kind.field(name).is_some())
                    .flat_map(move |(name, values)| {
                        values
                            .iter()
                            .map(move |v| format!("{}/{}={}", g.kind.element(), name, v.canonical()))
                    })
            })
            .collect();
        if let Some(c) = &self.category {
            lines.push(format!("Category={c}"));
        }
        lines.sort();
        lines
    }
}
