//! Dialect profiles: declarative tag renames that map a producer's XML
//! vocabulary onto the canonical one.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::Iri;
use crate::ontology::CanonicalPath;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("profile `{profile}` maps `{tag}` to `{target}`, which is not a canonical path")]
    UnknownTarget {
        profile: String,
        tag: String,
        target: String,
    },
    #[error("profile `{profile}` both renames and drops `{tag}`")]
    RenamedAndDropped { profile: String, tag: String },
    #[error("profile `{profile}` has an invalid extension namespace `{namespace}`")]
    Namespace { profile: String, namespace: String },
    #[error("profile `{profile}` has an empty tag path")]
    EmptyTag { profile: String },
    #[error("invalid profile document: {0}")]
    Json(String),
}

/// How one producer's tags map onto canonical paths.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DialectProfile {
    pub name: String,
    #[serde(default)]
    pub tag_renames: BTreeMap<String, String>,
    #[serde(default)]
    pub dropped_tags: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension_namespace: Option<String>,
}

/// Outcome of resolving one raw tag path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagResolution {
    Canonical(String),
    Dropped,
    /// Preserved under the extension namespace; holds the full property IRI.
    Extension(String),
    /// No mapping and no extension namespace to keep it under.
    Unrecognized,
}

impl DialectProfile {
    /// The canonical vocabulary itself: no renames, nothing dropped.
    pub fn identity() -> Self {
        DialectProfile {
            name: "identity".into(),
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let profile: DialectProfile = serde_json::from_str(text).map_err(|e| ProfileError::Json(e.to_string()))?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profiles always serialize")
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        for (tag, target) in &self.tag_renames {
            if tag.is_empty() {
                return Err(ProfileError::EmptyTag {
                    profile: self.name.clone(),
                });
            }
            if CanonicalPath::resolve(target).is_none() {
                return Err(ProfileError::UnknownTarget {
                    profile: self.name.clone(),
                    tag: tag.clone(),
                    target: target.clone(),
                });
            }
            if self.dropped_tags.contains(tag) {
                return Err(ProfileError::RenamedAndDropped {
                    profile: self.name.clone(),
                    tag: tag.clone(),
                });
            }
        }
        if self.dropped_tags.iter().any(String::is_empty) {
            return Err(ProfileError::EmptyTag {
                profile: self.name.clone(),
            });
        }
        if let Some(ns) = &self.extension_namespace {
            if Iri::new(ns).is_err() || !ns.contains(':') {
                return Err(ProfileError::Namespace {
                    profile: self.name.clone(),
                    namespace: ns.clone(),
                });
            }
        }
        Ok(())
    }

    /// Resolves a `/`-separated tag path relative to the resource element.
    ///
    /// An exact rename or drop wins. Otherwise the longest proper prefix (in
    /// whole segments) that is renamed or dropped applies, a renamed prefix
    /// being substituted in front of the remaining segments. Whatever path
    /// results is accepted if canonical; anything else becomes an extension
    /// field or stays unrecognized.
    pub fn normalize_tag(&self, raw_path: &str) -> TagResolution {
        let rewritten = if let Some(target) = self.tag_renames.get(raw_path) {
            target.clone()
        } else if self.dropped_tags.contains(raw_path) {
            return TagResolution::Dropped;
        } else {
            let segments: Vec<&str> = raw_path.split('/').collect();
            let mut rewritten = raw_path.to_owned();
            for cut in (1..segments.len()).rev() {
                let prefix = segments[..cut].join("/");
                if self.dropped_tags.contains(&prefix) {
                    return TagResolution::Dropped;
                }
                if let Some(target) = self.tag_renames.get(&prefix) {
                    rewritten = format!("{target}/{}", segments[cut..].join("/"));
                    break;
                }
            }
            rewritten
        };
        if CanonicalPath::resolve(&rewritten).is_some() {
            return TagResolution::Canonical(rewritten);
        }
        match &self.extension_namespace {
            Some(ns) => TagResolution::Extension(format!("{ns}{raw_path}")),
            None => TagResolution::Unrecognized,
        }
    }
}

/// Free-function form of [`DialectProfile::normalize_tag`].
pub fn normalize_tag(raw_path: &str, profile: &DialectProfile) -> TagResolution {
    profile.normalize_tag(raw_path)
}
