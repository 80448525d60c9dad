use std::fmt;

use crate::graph::Iri;
use crate::ontology::{load_core_ontology, FieldType, InformationObject, Value};
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub io_id: Option<String>,
    pub field_path: String,
    pub message: String,
}

impl ValidationIssue {
    pub fn error(io_id: Option<&str>, field_path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, io_id, field_path, message)
    }

    pub fn warning(io_id: Option<&str>, field_path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, io_id, field_path, message)
    }

    fn new(severity: Severity, io_id: Option<&str>, field_path: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationIssue {
            severity,
            io_id: io_id.map(str::to_owned),
            field_path: field_path.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `SEVERITY<TAB>io_id<TAB>field_path<TAB>message`; tabs and newlines inside
/// fields are flattened to spaces.
impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clean = |s: &str| s.replace(['\t', '\n', '\r'], " ");
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.severity,
            clean(self.io_id.as_deref().unwrap_or("")),
            clean(&self.field_path),
            clean(&self.message)
        )
    }
}

/// Renders issues one per line.
pub fn format_issues(issues: &[ValidationIssue]) -> String {
    issues.iter().map(|i| format!("{i}\n")).collect()
}

/// Checks an IO against the granule schemas without touching it.
pub fn validate_io(io: &InformationObject) -> Vec<ValidationIssue> {
    let mut issues = vec![];
    let id = Some(io.id.as_str());
    if io.id.trim().is_empty() {
        issues.push(ValidationIssue::error(None, "Identifier", "empty identifier"));
    }
    if let Some(category) = &io.category {
        let known = Iri::new(format!("{}{category}", vocab::SCHEMA))
            .ok()
            .is_some_and(|iri| load_core_ontology().is_class(&iri));
        if !known {
            issues.push(ValidationIssue::error(
                id,
                "Category",
                format!("`{category}` is not a known Schema.org class"),
            ));
        }
    }
    for (kind, granules) in &io.granules {
        if granules.is_empty() {
            issues.push(ValidationIssue::error(
                id,
                kind.element(),
                format!("{kind} key present with no granule"),
            ));
        }
        for granule in granules {
            if granule.kind != *kind {
                issues.push(ValidationIssue::error(
                    id,
                    granule.kind.element(),
                    format!("unknown granule kind {} filed under {kind}", granule.kind),
                ));
                continue;
            }
            if granule.is_empty() {
                issues.push(ValidationIssue::warning(
                    id,
                    kind.element(),
                    format!("empty {kind} granule"),
                ));
            }
            for (field, values) in &granule.fields {
                let path = format!("{}/{field}", kind.element());
                let Some(spec) = kind.field(field) else {
                    if !(field.contains(':') && Iri::new(field).is_ok()) {
                        issues.push(ValidationIssue::error(
                            id,
                            path,
                            format!("field not registered for {kind}"),
                        ));
                    }
                    continue;
                };
                for value in values {
                    let type_ok = matches!(
                        (spec.ty, value),
                        (FieldType::Text, Value::Text(_))
                            | (FieldType::Decimal, Value::Decimal(_))
                            | (FieldType::Date, Value::Date(_))
                            | (FieldType::Reference, Value::Reference(_))
                            | (FieldType::Point, Value::Point(_))
                    );
                    if !type_ok {
                        issues.push(ValidationIssue::error(
                            id,
                            path.clone(),
                            format!("value `{value}` does not have type {:?}", spec.ty),
                        ));
                        continue;
                    }
                    if let Value::Decimal(d) = value {
                        let limit = match field.as_str() {
                            "Latitude" => Some(90.0),
                            "Longitude" => Some(180.0),
                            _ => None,
                        };
                        if !d.is_finite() {
                            issues.push(ValidationIssue::error(id, path.clone(), "non-finite number"));
                        } else if let Some(limit) = limit.filter(|l| d.abs() > *l) {
                            issues.push(ValidationIssue::error(
                                id,
                                path.clone(),
                                format!("{d} outside [-{limit}, {limit}]"),
                            ));
                        }
                    }
                    if let Value::Reference(r) = value {
                        if r.trim().is_empty() {
                            issues.push(ValidationIssue::error(id, path.clone(), "empty reference"));
                        }
                    }
                }
            }
        }
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Granule, GranuleKind};

    #[test]
    fn latitude_out_of_range() {
        let io = InformationObject::new("x")
            .with_granule(Granule::new(GranuleKind::Geolocations).with("Latitude", Value::Decimal(91.0)));
        let issues = validate_io(&io);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].severity, Severity::Error);
        assert_eq!(issues[0].field_path, "Geolocation/Latitude");
    }

    #[test]
    fn empty_prices_granule_warns() {
        let io = InformationObject::new("x").with_granule(Granule::new(GranuleKind::Prices));
        let issues = validate_io(&io);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].severity, Severity::Warning);
    }

    #[test]
    fn misfiled_and_unregistered() {
        let mut io = InformationObject::new("x");
        io.granules.insert(
            GranuleKind::Prices,
            vec![Granule::new(GranuleKind::Capacity).with("Unit", Value::Text("beds".into()))],
        );
        io.add_granule(Granule::new(GranuleKind::Geolocations).with("Bogus", Value::Text("1".into())));
        io.add_granule(Granule::new(GranuleKind::Geolocations).with("City", Value::Decimal(1.0)));
        io.add_granule(
            Granule::new(GranuleKind::Geolocations).with("http://example.org/ext#Parking", Value::Text("yes".into())),
        );
        let errors: Vec<_> = validate_io(&io).into_iter().filter(|i| i.is_error()).collect();
        assert_eq!(errors.len(), 3, "{errors:?}");
    }

    #[test]
    fn unknown_category() {
        let io = InformationObject::new("x").with_category("Spaceship");
        assert_eq!(validate_io(&io)[0].field_path, "Category");
        assert!(validate_io(&InformationObject::new("x").with_category("Hotel")).is_empty());
    }

    #[test]
    fn tsv_line() {
        let issue = ValidationIssue::warning(Some("H1"), "Price", "empty\tPrices granule");
        assert_eq!(issue.to_string(), "WARNING\tH1\tPrice\tempty Prices granule");
        let issue = ValidationIssue::error(None, "Identifier", "x");
        assert_eq!(issue.to_string(), "ERROR\t\tIdentifier\tx");
    }
}
