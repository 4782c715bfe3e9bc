use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::Archive;
use crate::error::{Error, Result};
use crate::graph::find_cycle_from;
use crate::model::{CoverageContribution, LevelClass};
use crate::standoff::{coverage_fingerprint, reconstruct_coverage};
use crate::versioning::granularity_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    NoLevel,
    UnknownLevel,
    MissingPayload,
    PayloadParse,
    DependencyCycle,
    DanglingDependency,
    PointerOnlyWithoutDependency,
    NoPrimaryAnchor,
    CoverageDeclaration,
    EmptyGranularity,
    DanglingPointer,
    DanglingLink,
    CoverageMismatch,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::NoLevel => "no-level",
            ViolationKind::UnknownLevel => "unknown-level",
            ViolationKind::MissingPayload => "missing-payload",
            ViolationKind::PayloadParse => "payload-parse",
            ViolationKind::DependencyCycle => "dependency-cycle",
            ViolationKind::DanglingDependency => "dangling-dependency",
            ViolationKind::PointerOnlyWithoutDependency => "pointer-only-without-dependency",
            ViolationKind::NoPrimaryAnchor => "no-primary-anchor",
            ViolationKind::CoverageDeclaration => "coverage-declaration",
            ViolationKind::EmptyGranularity => "empty-granularity",
            ViolationKind::DanglingPointer => "dangling-pointer",
            ViolationKind::DanglingLink => "dangling-link",
            ViolationKind::CoverageMismatch => "coverage-mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Level or resource id the violation is about.
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub corpus_id: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

struct Collector(BTreeSet<Violation>);

impl Collector {
    fn push(&mut self, kind: ViolationKind, subject: &str, message: impl Into<String>) {
        self.0.insert(Violation {
            kind,
            subject: subject.to_string(),
            message: message.into(),
        });
    }
}

pub(super) fn validate(archive: &Archive, corpus_id: &str) -> Result<ValidationReport> {
    let manifest = archive.manifest(corpus_id)?;
    let mut out = Collector(BTreeSet::new());

    // Levels whose payloads all load.
    let mut loadable: HashSet<&str> = manifest.levels.keys().map(String::as_str).collect();
    for resource in manifest.resources.values() {
        if resource.level_ids.is_empty() {
            out.push(
                ViolationKind::NoLevel,
                &resource.id,
                "resource carries no level",
            );
        }
        for level in &resource.level_ids {
            if !manifest.levels.contains_key(level) {
                out.push(
                    ViolationKind::UnknownLevel,
                    &resource.id,
                    format!("resource names unknown level `{level}`"),
                );
            }
        }
        let broken = if !archive.payload_exists(resource) {
            out.push(
                ViolationKind::MissingPayload,
                &resource.id,
                format!("payload `{}` is missing", resource.payload_path),
            );
            true
        } else {
            match archive.storage.read(&resource.payload_path).and_then(|b| {
                crate::formats::parse_payload(resource.format_tag, &b, archive.split_table())
            }) {
                Ok(_) => false,
                Err(e) => {
                    out.push(ViolationKind::PayloadParse, &resource.id, e.to_string());
                    true
                }
            }
        };
        if broken {
            for level in &resource.level_ids {
                loadable.remove(level.as_str());
            }
        }
    }

    let deps = |id: &str| manifest.levels.get(id).map(|l| l.dependency_ids());
    let mut acyclic: HashSet<&str> = HashSet::new();
    for level in manifest.levels.values() {
        let id = level.id.as_str();
        let mut sound = true;
        for dep in &level.depends_on {
            if !manifest.levels.contains_key(&dep.level_id) {
                sound = false;
                out.push(
                    ViolationKind::DanglingDependency,
                    id,
                    format!("depends on missing level `{}`", dep.level_id),
                );
            }
        }
        if let Some(cycle) = find_cycle_from(id, deps) {
            sound = false;
            let mut members = cycle.clone();
            members.pop();
            members.sort();
            out.push(
                ViolationKind::DependencyCycle,
                &members[0],
                format!("dependency cycle through {}", members.join(", ")),
            );
        }
        if level.coverage_contribution == CoverageContribution::None && level.depends_on.is_empty()
        {
            out.push(
                ViolationKind::PointerOnlyWithoutDependency,
                id,
                "pointer-only level declares no dependency",
            );
        }
        if sound {
            acyclic.insert(id);
        }
    }

    for level in manifest.levels.values() {
        let id = level.id.as_str();
        if !acyclic.contains(id) {
            continue;
        }
        let Ok(closure) = archive.dependency_closure(id) else {
            continue;
        };
        for sink in closure.iter().filter(|l| {
            manifest
                .levels
                .get(l.as_str())
                .is_some_and(|l| l.depends_on.is_empty())
        }) {
            if manifest.levels[sink].class() != LevelClass::Primary {
                out.push(
                    ViolationKind::NoPrimaryAnchor,
                    id,
                    format!("dependency chain ends at secondary level `{sink}`"),
                );
            }
        }
    }

    for level in manifest.levels.values() {
        let id = level.id.as_str();
        if !loadable.contains(id) || archive.level_resources(id)?.is_empty() {
            continue;
        }
        let content = archive.level_content(id)?;
        if content.carries_forms() && level.coverage_contribution == CoverageContribution::None {
            out.push(
                ViolationKind::CoverageDeclaration,
                id,
                "payload carries surface forms but the level declares no coverage",
            );
        }
        if !content.items.is_empty()
            && granularity_of(&content.items, archive.registry())
                .categories
                .is_empty()
        {
            out.push(
                ViolationKind::EmptyGranularity,
                id,
                "annotated level uses no data category",
            );
        }

        let own_ids: HashSet<&str> = content
            .items
            .iter()
            .filter_map(|i| i.id.as_deref())
            .collect();
        for item in &content.items {
            for link in &item.links {
                for target in &link.targets {
                    if !own_ids.contains(target.as_str()) {
                        out.push(
                            ViolationKind::DanglingLink,
                            id,
                            format!("{} link targets unknown item `{target}`", link.link_type),
                        );
                    }
                }
            }
        }

        if !acyclic.contains(id) || level.depends_on.is_empty() {
            continue;
        }
        let mut anchor_ids: HashSet<String> = HashSet::new();
        let mut anchors_loaded = true;
        for dep in &level.depends_on {
            if !loadable.contains(dep.level_id.as_str()) {
                anchors_loaded = false;
                continue;
            }
            let dep_content = archive.level_content(&dep.level_id)?;
            anchor_ids.extend(dep_content.items.iter().filter_map(|i| i.id.clone()));
        }
        if anchors_loaded {
            for item in &content.items {
                let Some(span) = &item.span else { continue };
                for unit in span.named_ids() {
                    if !anchor_ids.contains(unit) {
                        out.push(
                            ViolationKind::DanglingPointer,
                            id,
                            format!("span `{span}` cites unknown unit `{unit}`"),
                        );
                    }
                }
            }
        }
    }

    if let Some(expected) = &manifest.corpus.coverage_fingerprint {
        for level in manifest.levels.values() {
            let id = level.id.as_str();
            if level.coverage_contribution != CoverageContribution::Full
                || !acyclic.contains(id)
                || !loadable.contains(id)
                || archive.level_resources(id)?.is_empty()
            {
                continue;
            }
            match reconstruct_coverage(id, archive) {
                Ok(tokens) => {
                    let found = coverage_fingerprint(&tokens);
                    if &found != expected {
                        out.push(
                            ViolationKind::CoverageMismatch,
                            id,
                            format!("coverage fingerprint {found} differs from corpus fingerprint {expected}"),
                        );
                    }
                }
                Err(Error::DanglingPointer { .. }) => {}
                Err(Error::NoPrimaryAnchor(_)) => out.push(
                    ViolationKind::NoPrimaryAnchor,
                    id,
                    "coverage cannot be reconstructed: no form-carrying level in the closure",
                ),
                Err(e) => out.push(ViolationKind::CoverageMismatch, id, e.to_string()),
            }
        }
    }

    Ok(ValidationReport {
        corpus_id: corpus_id.to_string(),
        violations: out.0.into_iter().collect(),
    })
}
