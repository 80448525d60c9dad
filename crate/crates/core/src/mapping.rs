//! Two-level TIFSem → Schema.org alignment.
//!
//! Class rules (`EquivalentClass`, `SubClassOf`) act on `rdf:type` triples;
//! property rules (`EquivalentProperty`, `SubPropertyOf`) copy statements onto
//! the target predicate. Equivalences apply in both directions. Materialization
//! writes every entailed triple into the graph and runs to a fixed point.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Iri, Term, Triple};
use crate::ontology::{load_core_ontology, GranuleKind};
use crate::vocab::{self, rdf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    EquivalentClass,
    SubClassOf,
    EquivalentProperty,
    SubPropertyOf,
}

impl Relation {
    pub const ALL: [Relation; 4] = [
        Relation::EquivalentClass,
        Relation::SubClassOf,
        Relation::EquivalentProperty,
        Relation::SubPropertyOf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::EquivalentClass => "EquivalentClass",
            Relation::SubClassOf => "SubClassOf",
            Relation::EquivalentProperty => "EquivalentProperty",
            Relation::SubPropertyOf => "SubPropertyOf",
        }
    }

    pub fn is_class_level(self) -> bool {
        matches!(self, Relation::EquivalentClass | Relation::SubClassOf)
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, Relation::EquivalentClass | Relation::EquivalentProperty)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = RuleError;

    /// Exact, case-sensitive names only.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| RuleError::UnknownRelation(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MappingRule {
    pub source: Iri,
    pub target: Iri,
    pub relation: Relation,
}

impl MappingRule {
    pub fn new(source: Iri, target: Iri, relation: Relation) -> Self {
        MappingRule {
            source,
            target,
            relation,
        }
    }
}

impl fmt::Display for MappingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |i: &Iri| vocab::compact(i.as_str()).unwrap_or_else(|| i.to_string());
        write!(f, "{} {} {}", show(&self.source), self.relation, show(&self.target))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("invalid rule document: {0}")]
    Json(String),
    #[error("unknown relation `{0}` (expected EquivalentClass, SubClassOf, EquivalentProperty or SubPropertyOf)")]
    UnknownRelation(String),
    #[error("`{0}` is not a term of the ontology")]
    UnknownTerm(String),
    #[error("duplicate rule `{0}`")]
    Duplicate(String),
    #[error("rule `{0}` connects terms of the wrong kind for its relation")]
    KindMismatch(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleRecord {
    source: String,
    target: String,
    relation: String,
}

/// The alignments shipped with the crate.
///
/// Single-target granules use `EquivalentClass`. Granules with two targets are
/// equivalent to the first and a subclass of the second. Property rules cover
/// the geolocation fields.
pub fn builtin_rules() -> Vec<MappingRule> {
    use Relation::*;
    let class =
        |kind: GranuleKind, target: &str, relation| MappingRule::new(kind.class_iri(), vocab::schema(target), relation);
    let property =
        |source: &str, target: &str, relation| MappingRule::new(vocab::tifsem(source), vocab::schema(target), relation);
    vec![
        class(GranuleKind::Multimedia, "MediaObject", EquivalentClass),
        class(GranuleKind::Classifications, "Rating", EquivalentClass),
        class(GranuleKind::Contacts, "ContactPoint", EquivalentClass),
        class(GranuleKind::LegalInformation, "Organization", EquivalentClass),
        class(GranuleKind::Languages, "Language", EquivalentClass),
        class(GranuleKind::Geolocations, "Place", EquivalentClass),
        class(GranuleKind::ReservationModes, "Reservation", EquivalentClass),
        class(GranuleKind::ReservationModes, "LodgingReservation", SubClassOf),
        class(GranuleKind::Prices, "Offer", EquivalentClass),
        class(GranuleKind::Prices, "PriceSpecification", SubClassOf),
        property("addressLine1", "address", SubPropertyOf),
        property("latitude", "latitude", EquivalentProperty),
        property("longitude", "longitude", EquivalentProperty),
    ]
}

/// Direct class-level targets of `source`.
pub fn target_classes(rules: &[MappingRule], source: &Iri) -> BTreeSet<Iri> {
    rules
        .iter()
        .filter(|r| r.relation.is_class_level() && &r.source == source)
        .map(|r| r.target.clone())
        .collect()
}

fn resolve_term(name: &str) -> Result<Iri, RuleError> {
    let expanded = vocab::expand(name).unwrap_or_else(|| name.to_owned());
    let iri = Iri::new(&expanded).map_err(|_| RuleError::UnknownTerm(name.to_owned()))?;
    let onto = load_core_ontology();
    if onto.is_class(&iri) || onto.is_property(&iri) {
        Ok(iri)
    } else {
        Err(RuleError::UnknownTerm(name.to_owned()))
    }
}

/// Parses a JSON array of `{source, target, relation}` objects.
///
/// Terms may be absolute IRIs or `tifsem:`/`schema:` prefixed names and must
/// exist in the ontology snapshot with the kind their relation requires.
pub fn load_rules(document: &str) -> Result<Vec<MappingRule>, RuleError> {
    let records: Vec<RuleRecord> = serde_json::from_str(document).map_err(|e| RuleError::Json(e.to_string()))?;
    let onto = load_core_ontology();
    let mut seen = HashSet::new();
    let mut rules = Vec::with_capacity(records.len());
    for record in records {
        let relation: Relation = record.relation.parse()?;
        let rule = MappingRule::new(resolve_term(&record.source)?, resolve_term(&record.target)?, relation);
        let kinds_ok = if relation.is_class_level() {
            onto.is_class(&rule.source) && onto.is_class(&rule.target)
        } else {
            onto.is_property(&rule.source) && onto.is_property(&rule.target)
        };
        if !kinds_ok {
            return Err(RuleError::KindMismatch(rule.to_string()));
        }
        if !seen.insert(rule.clone()) {
            return Err(RuleError::Duplicate(rule.to_string()));
        }
        rules.push(rule);
    }
    Ok(rules)
}

/// Writes rules in the format [`load_rules`] reads, with prefixed names where possible.
pub fn save_rules(rules: &[MappingRule]) -> String {
    let show = |i: &Iri| vocab::compact(i.as_str()).unwrap_or_else(|| i.to_string());
    let records: Vec<RuleRecord> = rules
        .iter()
        .map(|r| RuleRecord {
            source: show(&r.source),
            target: show(&r.target),
            relation: r.relation.name().to_owned(),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("rule records always serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Inconsistency {
    /// A class relation over non-classes, or a property relation over non-properties.
    KindMismatch(MappingRule),
    /// The rule's source is not a granule class or a granule field property.
    SourceWithoutGranule(MappingRule),
    /// A granule with no class-level alignment.
    Lacking(GranuleKind),
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inconsistency::KindMismatch(r) => write!(f, "kind mismatch: {r}"),
            Inconsistency::SourceWithoutGranule(r) => {
                write!(f, "source has no granule: {r}")
            }
            Inconsistency::Lacking(kind) => write!(f, "lacking: {kind} has no Schema.org alignment"),
        }
    }
}

/// Kind mismatches, rules whose source belongs to no granule, and granules no rule covers.
pub fn check_consistency(rules: &[MappingRule]) -> Vec<Inconsistency> {
    let onto = load_core_ontology();
    let mut out = vec![];
    for rule in rules {
        let kinds_ok = if rule.relation.is_class_level() {
            onto.is_class(&rule.source) && onto.is_class(&rule.target)
        } else {
            onto.is_property(&rule.source) && onto.is_property(&rule.target)
        };
        if !kinds_ok {
            out.push(Inconsistency::KindMismatch(rule.clone()));
            continue;
        }
        let has_granule = if rule.relation.is_class_level() {
            onto.granule_of_class(&rule.source).is_some()
        } else {
            onto.property(&rule.source).is_some_and(|p| !p.granules.is_empty())
        };
        if !has_granule {
            out.push(Inconsistency::SourceWithoutGranule(rule.clone()));
        }
    }
    for kind in GranuleKind::ALL {
        let class = kind.class_iri();
        if !rules.iter().any(|r| r.relation.is_class_level() && r.source == class) {
            out.push(Inconsistency::Lacking(kind));
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingReport {
    pub inferred_triples: usize,
    /// Granule classes no class rule aligns.
    pub unmapped_sources: BTreeSet<Iri>,
    pub inconsistencies: Vec<String>,
}

impl fmt::Display for MappingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inferred triples: {}", self.inferred_triples)?;
        writeln!(f, "unmapped granules: {}", self.unmapped_sources.len())?;
        for iri in &self.unmapped_sources {
            let name = load_core_ontology()
                .granule_of_class(iri)
                .map(|k| k.name().to_owned())
                .unwrap_or_else(|| iri.to_string());
            writeln!(f, "  {name}")?;
        }
        for text in &self.inconsistencies {
            writeln!(f, "inconsistency: {text}")?;
        }
        Ok(())
    }
}

/// Adds every triple the rules entail, to a fixed point, and reports what it did.
pub fn materialize(graph: &mut Graph, rules: &[MappingRule]) -> MappingReport {
    let mut classes: HashMap<Iri, Vec<Iri>> = HashMap::new();
    let mut properties: HashMap<Iri, Vec<Iri>> = HashMap::new();
    for rule in rules {
        let table = if rule.relation.is_class_level() {
            &mut classes
        } else {
            &mut properties
        };
        table.entry(rule.source.clone()).or_default().push(rule.target.clone());
        if rule.relation.is_symmetric() {
            table.entry(rule.target.clone()).or_default().push(rule.source.clone());
        }
    }

    let type_ = rdf::type_();
    let before = graph.len();
    let mut pending: Vec<Triple> = graph.iter().cloned().collect();
    while let Some(t) = pending.pop() {
        let mut derived = vec![];
        if t.predicate() == &type_ {
            if let Some(targets) = t.object().as_iri().and_then(|o| classes.get(o)) {
                for target in targets {
                    derived.push(Triple::new(
                        t.subject().clone(),
                        type_.clone(),
                        Term::Iri(target.clone()),
                    ));
                }
            }
        }
        if let Some(targets) = properties.get(t.predicate()) {
            for target in targets {
                derived.push(Triple::new(t.subject().clone(), target.clone(), t.object().clone()));
            }
        }
        for triple in derived.into_iter().flatten() {
            if graph.insert(triple.clone()) {
                pending.push(triple);
            }
        }
    }

    let mut report = MappingReport {
        inferred_triples: graph.len() - before,
        ..Default::default()
    };
    for issue in check_consistency(rules) {
        match issue {
            Inconsistency::Lacking(kind) => {
                report.unmapped_sources.insert(kind.class_iri());
            }
            other => report.inconsistencies.push(other.to_string()),
        }
    }
    report
}
