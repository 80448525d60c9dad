//! The eighteen granule kinds and the fields each one admits.

use std::fmt;
use std::str::FromStr;

use crate::graph::Iri;
use crate::vocab;

macro_rules! granule_kinds {
    ($( $variant:ident => $element:literal, $description:literal; )*) => {
        /// The semantic units an InformationObject is assembled from.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
        pub enum GranuleKind {
            $( $variant, )*
        }

        impl GranuleKind {
            pub const ALL: [GranuleKind; 18] = [$( GranuleKind::$variant, )*];

            /// Kind name, also the local name of its ontology class.
            pub fn name(self) -> &'static str {
                match self {
                    $( GranuleKind::$variant => stringify!($variant), )*
                }
            }

            /// XML element (and first canonical path segment) of one granule instance.
            pub fn element(self) -> &'static str {
                match self {
                    $( GranuleKind::$variant => $element, )*
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $( GranuleKind::$variant => $description, )*
                }
            }
        }
    };
}

granule_kinds! {
    DublinCore => "DublinCore", "Dublin Core terms describing the resource as a Web resource.";
    Update => "Update", "Updates of the resource and aspects of its evolution.";
    Multimedia => "Multimedia", "Multimedia material associated with the resource.";
    Contacts => "Contact", "Ways to get in touch with the resource or the person responsible for it.";
    LegalInformation => "LegalInformation", "Formal identification of an entity and its activities.";
    Classifications => "Classification", "Qualification of the resource and the quality of its services.";
    RelatedServices => "RelatedService", "References to other resources.";
    Geolocations => "Geolocation", "Location of the resource and description of its environment.";
    Periods => "Period", "Opening, closing and reservation periods.";
    Customers => "Customer", "Customer and audience information.";
    Languages => "Language", "Languages spoken at the resource.";
    ReservationModes => "ReservationMode", "How to reserve, whom to contact, and whether reservation is required.";
    Prices => "Price", "Prices of services and accepted means of payment.";
    Capacity => "Capacity", "Capacity of the resource.";
    OffersServices => "OfferedService", "Services available at the resource or nearby.";
    AdditionalDescription => "AdditionalDescription", "Additional information about the resource.";
    Itineraries => "Itinerary", "Associated activities such as hiking routes.";
    Schedules => "Schedule", "Availability of services over defined periods.";
}

impl GranuleKind {
    pub fn class_iri(self) -> Iri {
        vocab::tifsem(self.name())
    }

    pub fn from_element(element: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.element() == element)
    }

    pub fn fields(self) -> &'static [FieldSpec] {
        use FieldType::*;
        macro_rules! f {
            ($($name:literal : $ty:ident),* $(,)?) => {
                &[$(FieldSpec { name: $name, ty: $ty }),*]
            };
        }
        match self {
            GranuleKind::DublinCore => {
                f!["Title": Text, "Description": Text, "Creator": Text, "Subject": Text, "Date": Date]
            }
            GranuleKind::Update => f!["Created": Date, "Modified": Date, "UpdatedBy": Text],
            GranuleKind::Multimedia => f!["Url": Text, "Title": Text, "MediaType": Text, "Credit": Text],
            GranuleKind::Contacts => f!["Name": Text, "Role": Text, "Telephone": Text, "Email": Text, "Website": Text],
            GranuleKind::LegalInformation => f!["LegalName": Text, "Siret": Text, "LegalForm": Text],
            GranuleKind::Classifications => f!["Scheme": Text, "Label": Text, "Stars": Decimal],
            GranuleKind::RelatedServices => f!["Relation": Text, "Target": Reference],
            GranuleKind::Geolocations => f![
                "AddressLine1": Text, "AddressLine2": Text, "AddressLine3": Text,
                "PostalCode": Text, "City": Text, "Country": Text,
                "Latitude": Decimal, "Longitude": Decimal, "Point": Point,
                "Environment": Text,
            ],
            GranuleKind::Periods => f!["PeriodType": Text, "Start": Date, "End": Date],
            GranuleKind::Customers => f!["Audience": Text, "Public": Text, "GroupSizeMax": Decimal],
            GranuleKind::Languages => f!["Code": Text, "Label": Text],
            GranuleKind::ReservationModes => f!["Channel": Text, "Contact": Text, "Required": Text, "Url": Text],
            GranuleKind::Prices => f!["Amount": Decimal, "Currency": Text, "Description": Text, "PaymentMeans": Text],
            GranuleKind::Capacity => f!["Unit": Text, "Quantity": Decimal],
            GranuleKind::OffersServices => f!["Name": Text, "Category": Text],
            GranuleKind::AdditionalDescription => f!["Text": Text, "Lang": Text],
            GranuleKind::Itineraries => f!["Name": Text, "LengthKm": Decimal, "Difficulty": Text],
            GranuleKind::Schedules => f!["Day": Text, "Opens": Text, "Closes": Text, "Status": Text],
        }
    }

    pub fn field(self, name: &str) -> Option<&'static FieldSpec> {
        self.fields().iter().find(|f| f.name == name)
    }
}

impl fmt::Display for GranuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown granule kind `{0}`")]
pub struct UnknownGranuleKind(pub String);

/// Accepts the kind name (`Geolocations`) or the element name (`Geolocation`).
impl FromStr for GranuleKind {
    type Err = UnknownGranuleKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s || k.element() == s)
            .ok_or_else(|| UnknownGranuleKind(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldType {
    Text,
    Decimal,
    Date,
    /// Identifier of another InformationObject.
    Reference,
    /// A coordinate pair written as `lat,lon`; asserted as latitude and longitude.
    Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub name: &'static str,
    pub ty: FieldType,
}

impl FieldSpec {
    /// Local name of the predicate this field is asserted with: `AddressLine1` → `addressLine1`.
    pub fn property_local_name(&self) -> String {
        property_local_name(self.name)
    }
}

pub(crate) fn property_local_name(field: &str) -> String {
    let mut chars = field.chars();
    match chars.next() {
        Some(first) => first.to_ascii_lowercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

/// IO-level canonical path holding the resource identifier.
pub const IDENTIFIER_PATH: &str = "Identifier";
/// IO-level canonical path holding the Schema.org class local name of the resource.
pub const CATEGORY_PATH: &str = "Category";

/// A resolved canonical path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalPath {
    Identifier,
    Category,
    /// A granule element with no field, e.g. an empty `<Price/>`.
    Granule(GranuleKind),
    Field(GranuleKind, &'static FieldSpec),
}

impl CanonicalPath {
    pub fn resolve(path: &str) -> Option<Self> {
        match path {
            IDENTIFIER_PATH => return Some(CanonicalPath::Identifier),
            CATEGORY_PATH => return Some(CanonicalPath::Category),
            _ => {}
        }
        match path.split_once('/') {
            None => GranuleKind::from_element(path).map(CanonicalPath::Granule),
            Some((element, field)) => {
                let kind = GranuleKind::from_element(element)?;
                kind.field(field).map(|spec| CanonicalPath::Field(kind, spec))
            }
        }
    }

    pub fn kind(&self) -> Option<GranuleKind> {
        match self {
            CanonicalPath::Granule(k) | CanonicalPath::Field(k, _) => Some(*k),
            _ => None,
        }
    }
}

/// Every canonical field path, in schema order.
pub fn canonical_field_paths() -> impl Iterator<Item = String> {
    GranuleKind::ALL
        .into_iter()
        .flat_map(|k| k.fields().iter().map(move |f| format!("{}/{}", k.element(), f.name)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn eighteen_distinct_kinds() {
        let names: HashSet<_> = GranuleKind::ALL.iter().map(|k| k.name()).collect();
        let elements: HashSet<_> = GranuleKind::ALL.iter().map(|k| k.element()).collect();
        assert_eq!(names.len(), 18);
        assert_eq!(elements.len(), 18);
    }

    #[test]
    fn class_iri_naming() {
        assert_eq!(
            GranuleKind::Multimedia.class_iri().as_str(),
            format!("{}Multimedia", vocab::TIFSEM)
        );
        assert_eq!(GranuleKind::Prices.class_iri(), vocab::tifsem("Prices"));
        let iris: HashSet<_> = GranuleKind::ALL.iter().map(|k| k.class_iri()).collect();
        assert_eq!(iris.len(), 18);
    }

    #[test]
    fn resolve_paths() {
        assert_eq!(
            CanonicalPath::resolve("Geolocation/Latitude").map(|p| p.kind()),
            Some(Some(GranuleKind::Geolocations))
        );
        assert_eq!(CanonicalPath::resolve("Identifier"), Some(CanonicalPath::Identifier));
        assert_eq!(
            CanonicalPath::resolve("Price"),
            Some(CanonicalPath::Granule(GranuleKind::Prices))
        );
        assert_eq!(CanonicalPath::resolve("Geolocation/Nope"), None);
        assert_eq!(CanonicalPath::resolve("Geolocations/City"), None);
    }

    #[test]
    fn kind_from_str_accepts_both_names() {
        assert_eq!("Geolocations".parse(), Ok(GranuleKind::Geolocations));
        assert_eq!("Geolocation".parse(), Ok(GranuleKind::Geolocations));
        assert!("Nope".parse::<GranuleKind>().is_err());
    }

    #[test]
    fn property_names() {
        assert_eq!(property_local_name("AddressLine1"), "addressLine1");
        assert_eq!(property_local_name("Latitude"), "latitude");
    }
}
