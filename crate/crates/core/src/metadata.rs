//! Metadata headers for corpora, levels and resources, computed statistics,
//! and the catalog export.

use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::archive::Archive;
use crate::error::{Error, Result};
use crate::markup::escape;
use crate::model::{CoverageContribution, LevelKind};
use crate::versioning::granularity_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Corpus,
    Level,
    Resource,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Corpus => "corpus",
            Tier::Level => "level",
            Tier::Resource => "resource",
        }
    }

    /// Declared fields a depositor may set on this tier.
    pub fn schema(self) -> &'static [&'static str] {
        match self {
            Tier::Corpus => &[
                "title",
                "languages",
                "source_description",
                "genre",
                "description",
                "contributors",
                "levels_available",
                "word_count",
                "turn_count",
                "date",
                "license",
            ],
            Tier::Level => &[
                "kind",
                "coverage_contribution",
                "representation",
                "anchor",
                "depends_on",
                "producer",
                "validated_by",
                "schema_note",
                "annotation_scheme",
                "transcription_choices",
                "granularity",
            ],
            Tier::Resource => &[
                "depositor",
                "license_note",
                "format",
                "levels",
                "description",
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub field: String,
    pub declared: String,
    pub computed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetadataHeader {
    pub tier: Tier,
    pub subject_id: String,
    pub declared: BTreeMap<String, String>,
    pub computed: BTreeMap<String, String>,
    /// Fields present on both sides with different values. Neither side wins.
    pub conflicts: Vec<Conflict>,
    pub warnings: Vec<String>,
    pub generated_at: DateTime<Utc>,
}

impl MetadataHeader {
    /// Header as a small TEI-header-like XML document.
    pub fn to_document(&self) -> String {
        let mut out = format!(
            "<teiHeader type=\"{}\" n=\"{}\" generated=\"{}\">\n",
            self.tier.name(),
            escape(&self.subject_id),
            timestamp(&self.generated_at)
        );
        for (section, fields) in [("declared", &self.declared), ("computed", &self.computed)] {
            out.push_str(&format!("  <{section}>\n"));
            for (name, value) in fields {
                out.push_str(&format!(
                    "    <field name=\"{}\">{}</field>\n",
                    escape(name),
                    escape(value)
                ));
            }
            out.push_str(&format!("  </{section}>\n"));
        }
        if !self.conflicts.is_empty() {
            out.push_str("  <conflicts>\n");
            for c in &self.conflicts {
                out.push_str(&format!(
                    "    <conflict field=\"{}\" declared=\"{}\" computed=\"{}\"/>\n",
                    escape(&c.field),
                    escape(&c.declared),
                    escape(&c.computed)
                ));
            }
            out.push_str("  </conflicts>\n");
        }
        out.push_str("</teiHeader>\n");
        out
    }
}

fn timestamp(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Builds a header from the subject's stored fields plus `extra` declared
/// fields. Fields outside the tier schema are kept under an `x-` prefix.
pub fn build_header(
    archive: &Archive,
    tier: Tier,
    subject_id: &str,
    extra: &BTreeMap<String, String>,
) -> Result<MetadataHeader> {
    let (mut declared, computed, generated_at) = match tier {
        Tier::Corpus => corpus_fields(archive, subject_id)?,
        Tier::Level => level_fields(archive, subject_id)?,
        Tier::Resource => resource_fields(archive, subject_id)?,
    };
    declared.extend(extra.iter().map(|(k, v)| (k.clone(), v.clone())));

    let schema = tier.schema();
    let mut warnings = Vec::new();
    let mut checked = BTreeMap::new();
    for (field, value) in declared {
        if schema.contains(&field.as_str()) || field.starts_with("x-") {
            checked.insert(field, value);
        } else {
            warnings.push(format!(
                "field `{field}` is not part of the {} header; stored as `x-{field}`",
                tier.name()
            ));
            checked.insert(format!("x-{field}"), value);
        }
    }
    let conflicts = checked
        .iter()
        .filter_map(|(field, declared)| {
            let computed = computed.get(field)?;
            (computed != declared).then(|| Conflict {
                field: field.clone(),
                declared: declared.clone(),
                computed: computed.clone(),
            })
        })
        .collect();
    Ok(MetadataHeader {
        tier,
        subject_id: subject_id.to_string(),
        declared: checked,
        computed,
        conflicts,
        warnings,
        generated_at,
    })
}

type Fields = (
    BTreeMap<String, String>,
    BTreeMap<String, String>,
    DateTime<Utc>,
);

fn set(map: &mut BTreeMap<String, String>, key: &str, value: impl ToString) {
    let value = value.to_string();
    if !value.is_empty() {
        map.insert(key.to_string(), value);
    }
}

fn corpus_fields(archive: &Archive, corpus_id: &str) -> Result<Fields> {
    let manifest = archive.manifest(corpus_id)?;
    let corpus = &manifest.corpus;
    let mut declared = corpus.declared.clone();
    set(&mut declared, "title", &corpus.title);
    set(&mut declared, "languages", corpus.languages.join(","));
    set(
        &mut declared,
        "source_description",
        &corpus.source_description,
    );
    let mut computed = compute_auto_stats(archive, corpus_id)?;
    if let Some(fp) = &corpus.coverage_fingerprint {
        set(&mut computed, "coverage_fingerprint", fp);
    }
    Ok((declared, computed, manifest.updated))
}

fn level_fields(archive: &Archive, level_id: &str) -> Result<Fields> {
    let level = archive.level(level_id)?;
    let manifest = archive.manifest(&level.corpus_id)?;
    let mut declared = level.declared.clone();
    set(&mut declared, "kind", &level.kind);
    set(
        &mut declared,
        "coverage_contribution",
        level.coverage_contribution.name(),
    );
    set(
        &mut declared,
        "representation",
        match level.representation {
            crate::model::Representation::InlineComposite => "inline_composite",
            crate::model::Representation::Standoff => "standoff",
        },
    );
    let deps = level.dependency_ids();
    set(&mut declared, "depends_on", deps.join(","));
    if let Some(anchor) = deps.first() {
        set(&mut declared, "anchor", anchor);
    }
    set(&mut declared, "producer", &level.producer);
    if let Some(v) = &level.validated_by {
        set(&mut declared, "validated_by", v);
    }
    set(&mut declared, "schema_note", &level.schema_note);
    let declared_granularity: Vec<&str> = level.granularity.iter().map(String::as_str).collect();
    set(&mut declared, "granularity", declared_granularity.join(","));

    let mut computed = BTreeMap::new();
    let materialized = archive.is_materialized(level_id)?;
    set(&mut computed, "class", level.class());
    set(&mut computed, "materialized", materialized);
    set(
        &mut computed,
        "resource_count",
        archive.level_resources(level_id)?.len(),
    );
    if materialized {
        let content = archive.level_content(level_id)?;
        set(&mut computed, "item_count", content.items.len());
        let g = granularity_of(&content.items, archive.registry());
        let cats: Vec<&str> = g.categories.iter().map(String::as_str).collect();
        set(&mut computed, "granularity", cats.join(","));
    }
    if let Some(v) = manifest.versions.iter().find(|v| v.level_id == level_id) {
        set(&mut computed, "version", &v.id);
        set(&mut computed, "classification", v.classification);
        set(&mut computed, "variant_groups", v.variant_groups);
    }
    Ok((declared, computed, manifest.updated))
}

fn resource_fields(archive: &Archive, resource_id: &str) -> Result<Fields> {
    let resource = archive.resource(resource_id)?;
    let manifest = archive.manifest(&resource.corpus_id)?;
    let mut declared = resource.declared.clone();
    set(&mut declared, "depositor", &resource.depositor);
    set(&mut declared, "license_note", &resource.license_note);
    set(&mut declared, "format", resource.format_tag);
    set(&mut declared, "levels", resource.level_ids.join(","));
    let mut computed = BTreeMap::new();
    set(
        &mut computed,
        "deposit_date",
        timestamp(&resource.deposit_date),
    );
    set(&mut computed, "payload_path", &resource.payload_path);
    let present = archive.payload_exists(resource);
    set(&mut computed, "materialized", present);
    if present {
        set(
            &mut computed,
            "payload_bytes",
            archive.payload(resource_id)?.len(),
        );
    }
    Ok((declared, computed, manifest.updated))
}

/// Resource header text as stored beside the payload.
pub(crate) fn resource_header_document(archive: &Archive, resource_id: &str) -> Result<String> {
    Ok(build_header(archive, Tier::Resource, resource_id, &BTreeMap::new())?.to_document())
}

/// Items whose element marks a speech turn.
const TURN_ELEMENTS: &[&str] = &["u", "turn"];

/// Word count from the primary segmentation (0 without one), item count per
/// materialized level, resource and level counts, and a turn count when a
/// structure level holds turn items.
pub fn compute_auto_stats(archive: &Archive, corpus_id: &str) -> Result<BTreeMap<String, String>> {
    let manifest = archive.manifest(corpus_id)?;
    let mut stats = BTreeMap::new();
    let mut word_count = 0;
    let mut turn_count: Option<usize> = None;
    for level in manifest.levels.values() {
        if !archive.is_materialized(&level.id)? {
            continue;
        }
        let content = archive.level_content(&level.id)?;
        stats.insert(
            format!("items.{}", level.id),
            content.items.len().to_string(),
        );
        if level.kind == LevelKind::Segmentation
            && level.coverage_contribution != CoverageContribution::None
            && word_count == 0
        {
            word_count = content.tokens.as_ref().map_or(0, Vec::len);
        }
        if level.kind == LevelKind::Structure {
            let turns = content
                .items
                .iter()
                .filter(|i| i.get("element").is_some_and(|e| TURN_ELEMENTS.contains(&e)))
                .count();
            if turns > 0 {
                *turn_count.get_or_insert(0) += turns;
            }
        }
    }
    stats.insert("word_count".into(), word_count.to_string());
    stats.insert("level_count".into(), manifest.levels.len().to_string());
    stats.insert(
        "resource_count".into(),
        manifest.resources.len().to_string(),
    );
    if let Some(turns) = turn_count {
        stats.insert("turn_count".into(), turns.to_string());
    }
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub id: String,
    pub kind: String,
    pub materialized: bool,
    pub header: MetadataHeader,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceEntry {
    pub id: String,
    pub format: String,
    pub deposit_date: DateTime<Utc>,
    pub header: MetadataHeader,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub id: String,
    pub title: String,
    pub header: MetadataHeader,
    pub levels: Vec<LevelEntry>,
    pub resources: Vec<ResourceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub catalog_format: u32,
    pub generated_at: DateTime<Utc>,
    pub records: Vec<CatalogRecord>,
}

impl Catalog {
    pub fn to_document(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("catalog serializes");
        text.push('\n');
        text
    }

    pub fn record(&self, corpus_id: &str) -> Option<&CatalogRecord> {
        self.records.iter().find(|r| r.id == corpus_id)
    }
}

pub fn catalog_record(archive: &Archive, corpus_id: &str) -> Result<CatalogRecord> {
    let manifest = archive.manifest(corpus_id)?;
    let none = BTreeMap::new();
    let mut levels = Vec::new();
    for level in manifest.levels.values() {
        levels.push(LevelEntry {
            id: level.id.clone(),
            kind: level.kind.name().to_string(),
            materialized: archive.is_materialized(&level.id)?,
            header: build_header(archive, Tier::Level, &level.id, &none)?,
        });
    }
    let mut resources: Vec<_> = manifest.resources.values().collect();
    resources.sort_by(|a, b| (a.deposit_date, &a.id).cmp(&(b.deposit_date, &b.id)));
    let resources = resources
        .into_iter()
        .map(|r| {
            Ok(ResourceEntry {
                id: r.id.clone(),
                format: r.format_tag.name().to_string(),
                deposit_date: r.deposit_date,
                header: build_header(archive, Tier::Resource, &r.id, &none)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CatalogRecord {
        id: manifest.corpus.id.clone(),
        title: manifest.corpus.title.clone(),
        header: build_header(archive, Tier::Corpus, corpus_id, &none)?,
        levels,
        resources,
    })
}

/// One record per corpus, by id. A pure function of archive state.
pub fn export_catalog(archive: &Archive) -> Result<Catalog> {
    let records = archive
        .corpora()
        .map(|c| catalog_record(archive, &c.id))
        .collect::<Result<Vec<_>>>()?;
    Ok(Catalog {
        catalog_format: 1,
        generated_at: archive.last_modified(),
        records,
    })
}

/// Resolves which tier an id names in `archive`.
pub fn tier_of(archive: &Archive, subject_id: &str) -> Result<Tier> {
    if archive.corpus(subject_id).is_ok() {
        Ok(Tier::Corpus)
    } else if archive.level(subject_id).is_ok() {
        Ok(Tier::Level)
    } else if archive.resource(subject_id).is_ok() {
        Ok(Tier::Resource)
    } else {
        Err(Error::UnknownSubject(subject_id.to_string()))
    }
}
