//! The TIFSem model: an InformationObject root, its eighteen granule
//! concepts, and the slice of Schema.org that TIFSem aligns to.

mod granule;
mod model;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

pub use granule::{
    canonical_field_paths, CanonicalPath, FieldSpec, FieldType, GranuleKind, UnknownGranuleKind, CATEGORY_PATH,
    IDENTIFIER_PATH,
};
pub use model::{Granule, InformationObject, Value};

use crate::graph::Iri;
use crate::vocab::{self, SCHEMA, TIFSEM};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptDescriptor {
    pub iri: Iri,
    pub label: String,
    pub parent: Option<Iri>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDescriptor {
    pub iri: Iri,
    pub label: String,
    /// Granules declaring a field asserted with this property. Empty for Schema.org properties
    /// and for structural properties such as `tifsem:hasGranule`.
    pub granules: BTreeSet<GranuleKind>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("`{0}` is not a concept of the ontology")]
pub struct UnknownConcept(pub String);

/// Immutable class hierarchy plus the property vocabulary.
#[derive(Debug, Clone)]
pub struct OntologySnapshot {
    concepts: BTreeMap<Iri, ConceptDescriptor>,
    properties: BTreeMap<Iri, PropertyDescriptor>,
}

const SCHEMA_TREE: &[(&str, Option<&str>, &str)] = &[
    ("Thing", None, "The most generic type of item."),
    (
        "Place",
        Some("Thing"),
        "Entities with a somewhat fixed physical extension.",
    ),
    (
        "LocalBusiness",
        Some("Place"),
        "A particular physical business or branch of an organization.",
    ),
    (
        "LodgingBusiness",
        Some("LocalBusiness"),
        "A lodging business, such as a motel, hotel, or inn.",
    ),
    ("Hostel", Some("LodgingBusiness"), "A hostel."),
    ("Hotel", Some("LodgingBusiness"), "A hotel."),
    ("Motel", Some("LodgingBusiness"), "A motel."),
    ("FoodEstablishment", Some("LocalBusiness"), "A food-related business."),
    ("Restaurant", Some("FoodEstablishment"), "A restaurant."),
    ("BarOrPub", Some("FoodEstablishment"), "A bar or pub."),
    (
        "Event",
        Some("Thing"),
        "An event happening at a certain time and location.",
    ),
    ("MusicEvent", Some("Event"), "Event type: Music event."),
    ("SocialEvent", Some("Event"), "Event type: Social event."),
    ("SportsEvent", Some("Event"), "Event type: Sports event."),
    ("Action", Some("Thing"), "An action performed by a direct agent."),
    (
        "AssessAction",
        Some("Action"),
        "The act of forming one's opinion or review of an object.",
    ),
    (
        "ReviewAction",
        Some("AssessAction"),
        "The act of producing a balanced opinion about an object.",
    ),
    ("Intangible", Some("Thing"), "A utility class for intangible things."),
    ("Reservation", Some("Intangible"), "Describes a reservation."),
    ("EventReservation", Some("Reservation"), "A reservation for an event."),
    (
        "FoodEstablishmentReservation",
        Some("Reservation"),
        "A reservation to dine at a food-related business.",
    ),
    ("LodgingReservation", Some("Reservation"), "A reservation for lodging."),
    (
        "Rating",
        Some("Intangible"),
        "A rating is an evaluation on a numeric scale.",
    ),
    (
        "Language",
        Some("Intangible"),
        "Natural languages such as Spanish, Tamil, Hindi.",
    ),
    (
        "Offer",
        Some("Intangible"),
        "An offer to transfer some rights to an item or to provide a service.",
    ),
    (
        "StructuredValue",
        Some("Intangible"),
        "Structured values used when a value has several components.",
    ),
    ("ContactPoint", Some("StructuredValue"), "A contact point."),
    (
        "PriceSpecification",
        Some("StructuredValue"),
        "A structured value representing a price or price range.",
    ),
    ("CreativeWork", Some("Thing"), "The most generic kind of creative work."),
    (
        "MediaObject",
        Some("CreativeWork"),
        "A media object, such as an image, video, or audio object.",
    ),
    (
        "Organization",
        Some("Thing"),
        "An organization such as a school, NGO, corporation, club.",
    ),
];

const SCHEMA_PROPERTIES: &[&str] = &["address", "latitude", "longitude", "name", "description"];

impl OntologySnapshot {
    fn build() -> Self {
        let mut concepts = BTreeMap::new();
        let root = vocab::tifsem("InformationObject");
        concepts.insert(
            root.clone(),
            ConceptDescriptor {
                iri: root.clone(),
                label: "InformationObject".into(),
                parent: None,
                description: "A modular tourism resource composed of granules.".into(),
            },
        );
        for kind in GranuleKind::ALL {
            concepts.insert(
                kind.class_iri(),
                ConceptDescriptor {
                    iri: kind.class_iri(),
                    label: kind.name().into(),
                    parent: Some(root.clone()),
                    description: kind.description().into(),
                },
            );
        }
        for (local, parent, description) in SCHEMA_TREE {
            let iri = vocab::schema(local);
            concepts.insert(
                iri.clone(),
                ConceptDescriptor {
                    iri,
                    label: (*local).into(),
                    parent: parent.map(vocab::schema),
                    description: (*description).into(),
                },
            );
        }

        let mut properties: BTreeMap<Iri, PropertyDescriptor> = BTreeMap::new();
        let has_granule = vocab::tifsem("hasGranule");
        properties.insert(
            has_granule.clone(),
            PropertyDescriptor {
                iri: has_granule,
                label: "hasGranule".into(),
                granules: BTreeSet::new(),
            },
        );
        for kind in GranuleKind::ALL {
            for field in kind.fields() {
                let local = field.property_local_name();
                let iri = vocab::tifsem(&local);
                properties
                    .entry(iri.clone())
                    .or_insert_with(|| PropertyDescriptor {
                        iri,
                        label: local.clone(),
                        granules: BTreeSet::new(),
                    })
                    .granules
                    .insert(kind);
            }
        }
        for local in SCHEMA_PROPERTIES {
            let iri = vocab::schema(local);
            properties.insert(
                iri.clone(),
                PropertyDescriptor {
                    iri,
                    label: (*local).into(),
                    granules: BTreeSet::new(),
                },
            );
        }
        OntologySnapshot { concepts, properties }
    }

    pub fn root(&self) -> Iri {
        vocab::tifsem("InformationObject")
    }

    pub fn concept(&self, iri: &Iri) -> Option<&ConceptDescriptor> {
        self.concepts.get(iri)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &ConceptDescriptor> {
        self.concepts.values()
    }

    pub fn tifsem_concepts(&self) -> impl Iterator<Item = &ConceptDescriptor> {
        self.concepts.values().filter(|c| c.iri.as_str().starts_with(TIFSEM))
    }

    pub fn schema_concepts(&self) -> impl Iterator<Item = &ConceptDescriptor> {
        self.concepts.values().filter(|c| c.iri.as_str().starts_with(SCHEMA))
    }

    pub fn property(&self, iri: &Iri) -> Option<&PropertyDescriptor> {
        self.properties.get(iri)
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyDescriptor> {
        self.properties.values()
    }

    pub fn is_class(&self, iri: &Iri) -> bool {
        self.concepts.contains_key(iri)
    }

    pub fn is_property(&self, iri: &Iri) -> bool {
        self.properties.contains_key(iri)
    }

    /// The granule kind whose class is `iri`, if any.
    pub fn granule_of_class(&self, iri: &Iri) -> Option<GranuleKind> {
        GranuleKind::ALL.into_iter().find(|k| &k.class_iri() == iri)
    }

    /// `iri` followed by its ancestors up to the forest root.
    pub fn ancestors(&self, iri: &Iri) -> Result<Vec<Iri>, UnknownConcept> {
        let mut chain = vec![];
        let mut current = Some(self.concepts.get(iri).ok_or_else(|| UnknownConcept(iri.to_string()))?);
        while let Some(c) = current {
            chain.push(c.iri.clone());
            current = c.parent.as_ref().and_then(|p| self.concepts.get(p));
        }
        Ok(chain)
    }

    /// Reflexive-transitive closure of the parent links.
    pub fn is_subclass(&self, sub: &Iri, sup: &Iri) -> Result<bool, UnknownConcept> {
        if !self.concepts.contains_key(sup) {
            return Err(UnknownConcept(sup.to_string()));
        }
        Ok(self.ancestors(sub)?.contains(sup))
    }

    /// Looks up a concept by `prefix:local` or absolute IRI.
    pub fn resolve(&self, name: &str) -> Option<&ConceptDescriptor> {
        let expanded = vocab::expand(name)?;
        Iri::new(expanded).ok().and_then(|i| self.concepts.get(&i))
    }
}

/// The embedded ontology. Built once, immutable afterwards.
pub fn load_core_ontology() -> &'static OntologySnapshot {
    static SNAPSHOT: OnceLock<OntologySnapshot> = OnceLock::new();
    SNAPSHOT.get_or_init(OntologySnapshot::build)
}

/// Class IRI of a granule kind.
pub fn class_of(kind: GranuleKind) -> Iri {
    kind.class_iri()
}
