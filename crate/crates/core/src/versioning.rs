//! Granularity comparison and classification of successive versions of a
//! description level.

use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::AnnotationItem;
use crate::registry::Registry;
use crate::standoff::Fingerprint;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Granularity {
    pub categories: BTreeSet<String>,
    /// Keys or values the registry did not know; each also appears in
    /// `categories` as an `x-` provisional category.
    pub provisional: BTreeSet<String>,
}

/// Data categories employed by `items`, as mapped through the registry.
pub fn granularity_of(items: &[AnnotationItem], registry: &Registry) -> Granularity {
    let mut g = Granularity::default();
    let mut record = |key: &str, value: &str| {
        if value.trim().is_empty() {
            return;
        }
        let mapped = registry.lookup(key, value);
        if !mapped.is_empty() {
            g.categories.extend(mapped.into_iter().map(str::to_string));
            return;
        }
        let provisional = if registry.knows_key(key) {
            format!("x-{key}={value}")
        } else {
            format!("x-{key}")
        };
        g.categories.insert(provisional.clone());
        g.provisional.insert(provisional);
    };
    for item in items {
        for (key, value) in &item.categories {
            record(key, value);
        }
        for link in &item.links {
            record("link", &link.link_type);
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GranularityRelation {
    Equal,
    Finer,
    Coarser,
    Different,
}

/// Every category of `b` is present in `a` or refined by a descendant in `a`.
fn refines(a: &BTreeSet<String>, b: &BTreeSet<String>, registry: &Registry) -> bool {
    b.iter()
        .all(|c| a.contains(c) || a.iter().any(|x| registry.is_descendant(x, c)))
}

fn finer(a: &BTreeSet<String>, b: &BTreeSet<String>, registry: &Registry) -> bool {
    a != b && (a.is_superset(b) || refines(a, b, registry) && !refines(b, a, registry))
}

/// Compares `a` against `b`. `Finer` means `a` is a strict superset of `b`,
/// or covers every category of `b` with itself or a registry descendant
/// while `b` does not do the same for `a`.
pub fn compare_granularity(
    a: &BTreeSet<String>,
    b: &BTreeSet<String>,
    registry: &Registry,
) -> GranularityRelation {
    if a == b {
        GranularityRelation::Equal
    } else if finer(a, b, registry) {
        GranularityRelation::Finer
    } else if finer(b, a, registry) {
        GranularityRelation::Coarser
    } else {
        GranularityRelation::Different
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Initial,
    ParallelVersion,
    ParallelEnriched,
    Supplementary,
    ExhaustiveCorrection,
    TransverseCorrection,
}

impl Classification {
    pub const ALL: [Classification; 6] = [
        Classification::Initial,
        Classification::ParallelVersion,
        Classification::ParallelEnriched,
        Classification::Supplementary,
        Classification::ExhaustiveCorrection,
        Classification::TransverseCorrection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Classification::Initial => "Initial",
            Classification::ParallelVersion => "ParallelVersion",
            Classification::ParallelEnriched => "ParallelEnriched",
            Classification::Supplementary => "Supplementary",
            Classification::ExhaustiveCorrection => "ExhaustiveCorrection",
            Classification::TransverseCorrection => "TransverseCorrection",
        }
    }

    pub fn is_correction(self) -> bool {
        matches!(
            self,
            Classification::ExhaustiveCorrection | Classification::TransverseCorrection
        )
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionRecord {
    pub id: String,
    pub corpus_id: String,
    pub level_id: String,
    pub level_kind: String,
    pub submitted: DateTime<Utc>,
    pub granularity: BTreeSet<String>,
    pub validated: bool,
    pub validator: Option<String>,
    /// Set for corrections only; parallel versions are siblings.
    pub supersedes: Option<String>,
    pub classification: Classification,
    /// Number of interpretation-variant groups held inside this version.
    pub variant_groups: usize,
    /// Fingerprint of the sorted reference-unit ids the level covers.
    pub coverage: Option<Fingerprint>,
    /// For corrections: whether the corrected version covers any unit in
    /// common with the one it supersedes.
    pub coverage_overlap: Option<bool>,
}

/// Corrections of a prior version of the same level kind.
pub fn classify_validated(
    new: &BTreeSet<String>,
    existing: Option<&VersionRecord>,
    registry: &Registry,
) -> Result<Classification> {
    let existing = existing.ok_or(Error::NoPriorVersion)?;
    Ok(
        match compare_granularity(new, &existing.granularity, registry) {
            GranularityRelation::Equal | GranularityRelation::Finer => {
                Classification::ExhaustiveCorrection
            }
            GranularityRelation::Coarser | GranularityRelation::Different => {
                Classification::TransverseCorrection
            }
        },
    )
}

/// Classifies a submission against the latest version of the same corpus and
/// level kind.
pub fn classify_submission(
    new: &BTreeSet<String>,
    validated: bool,
    existing: Option<&VersionRecord>,
    registry: &Registry,
) -> Classification {
    let Some(prior) = existing else {
        return Classification::Initial;
    };
    if validated {
        return classify_validated(new, Some(prior), registry).expect("prior version is present");
    }
    match compare_granularity(new, &prior.granularity, registry) {
        GranularityRelation::Equal => Classification::ParallelVersion,
        GranularityRelation::Finer => Classification::ParallelEnriched,
        GranularityRelation::Coarser | GranularityRelation::Different => {
            Classification::Supplementary
        }
    }
}

/// Distinct interpretation-variant groups among the links of `items`.
pub fn variant_groups(items: &[AnnotationItem]) -> BTreeSet<&str> {
    items
        .iter()
        .flat_map(|i| &i.links)
        .filter_map(|l| l.variant_group.as_deref())
        .collect()
}

/// Notes on `record` the variants carried by the version's items. Variants
/// never open a new version.
pub fn record_variant(record: &mut VersionRecord, items: &[AnnotationItem]) -> usize {
    record.variant_groups = variant_groups(items).len();
    record.variant_groups
}

/// Coverage fingerprint over a set of unit ids, independent of order.
pub fn unit_set_fingerprint<'a>(ids: impl IntoIterator<Item = &'a str>) -> Fingerprint {
    let sorted: BTreeSet<&str> = ids.into_iter().collect();
    let ids: Vec<&str> = sorted.into_iter().collect();
    crate::standoff::coverage_fingerprint(&ids)
}
