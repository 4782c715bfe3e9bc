//! Corpus, description level and resource records.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::formats::FormatTag;
use crate::standoff::Fingerprint;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub id: String,
    pub title: String,
    pub languages: Vec<String>,
    pub coverage_fingerprint: Option<Fingerprint>,
    pub source_description: String,
    /// Depositor-declared metadata beyond the fixed fields.
    #[serde(default)]
    pub declared: BTreeMap<String, String>,
}

/// Corpus fields supplied at registration.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusDescriptor {
    pub title: String,
    pub languages: Vec<String>,
    pub source_description: String,
    #[serde(default)]
    pub declared: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LevelKind {
    Segmentation,
    Structure,
    Morphosyntax,
    Syntax,
    Reference,
    Transcription,
    Audio,
    Other(String),
}

impl LevelKind {
    pub fn name(&self) -> &str {
        match self {
            LevelKind::Segmentation => "segmentation",
            LevelKind::Structure => "structure",
            LevelKind::Morphosyntax => "morphosyntax",
            LevelKind::Syntax => "syntax",
            LevelKind::Reference => "reference",
            LevelKind::Transcription => "transcription",
            LevelKind::Audio => "audio",
            LevelKind::Other(name) => name,
        }
    }
}

impl fmt::Display for LevelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LevelKind {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "segmentation" => LevelKind::Segmentation,
            "structure" => LevelKind::Structure,
            "morphosyntax" => LevelKind::Morphosyntax,
            "syntax" => LevelKind::Syntax,
            "reference" => LevelKind::Reference,
            "transcription" => LevelKind::Transcription,
            "audio" => LevelKind::Audio,
            other => LevelKind::Other(other.to_string()),
        })
    }
}

impl Serialize for LevelKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for LevelKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(s.parse().unwrap_or_else(|never| match never {}))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverageContribution {
    Full,
    Partial,
    None,
}

impl CoverageContribution {
    pub fn name(self) -> &'static str {
        match self {
            CoverageContribution::Full => "full",
            CoverageContribution::Partial => "partial",
            CoverageContribution::None => "none",
        }
    }
}

impl FromStr for CoverageContribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(CoverageContribution::Full),
            "partial" => Ok(CoverageContribution::Partial),
            "none" => Ok(CoverageContribution::None),
            other => Err(format!("unknown coverage contribution `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    InlineComposite,
    #[default]
    Standoff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dependency {
    pub level_id: String,
    /// Free text, e.g. "anchoring" or "enrichment".
    pub purpose: String,
}

impl Dependency {
    pub fn new(level_id: impl Into<String>, purpose: impl Into<String>) -> Self {
        Dependency {
            level_id: level_id.into(),
            purpose: purpose.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptionLevel {
    pub id: String,
    pub corpus_id: String,
    pub kind: LevelKind,
    pub coverage_contribution: CoverageContribution,
    pub depends_on: Vec<Dependency>,
    pub representation: Representation,
    /// Categories declared by the depositor; the computed inventory lives on
    /// the level's version record.
    pub granularity: BTreeSet<String>,
    pub validated_by: Option<String>,
    pub producer: String,
    pub schema_note: String,
    #[serde(default)]
    pub declared: BTreeMap<String, String>,
}

impl DescriptionLevel {
    pub fn dependency_ids(&self) -> Vec<String> {
        self.depends_on.iter().map(|d| d.level_id.clone()).collect()
    }

    pub fn class(&self) -> LevelClass {
        match self.coverage_contribution {
            CoverageContribution::None => LevelClass::Secondary,
            CoverageContribution::Full | CoverageContribution::Partial => LevelClass::Primary,
        }
    }
}

/// Level fields supplied by the depositor. When `id` is unset the archive
/// assigns one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDescriptor {
    pub id: Option<String>,
    pub kind: LevelKind,
    pub coverage_contribution: CoverageContribution,
    pub depends_on: Vec<Dependency>,
    pub representation: Representation,
    pub granularity: BTreeSet<String>,
    pub validated_by: Option<String>,
    pub producer: String,
    pub schema_note: String,
    pub declared: BTreeMap<String, String>,
}

impl LevelDescriptor {
    pub fn new(kind: LevelKind, coverage_contribution: CoverageContribution) -> Self {
        LevelDescriptor {
            id: None,
            kind,
            coverage_contribution,
            depends_on: Vec::new(),
            representation: Representation::Standoff,
            granularity: BTreeSet::new(),
            validated_by: None,
            producer: String::new(),
            schema_note: String::new(),
            declared: BTreeMap::new(),
        }
    }

    /// Defaults suggested by a payload format: its usual level kind, no
    /// coverage for pointer-only formats and partial coverage otherwise.
    pub fn for_format(format: FormatTag) -> Self {
        let kind = match format {
            FormatTag::Segmentation => LevelKind::Segmentation,
            FormatTag::TabularMorpho | FormatTag::StandoffMorpho | FormatTag::InlineMorpho => {
                LevelKind::Morphosyntax
            }
            FormatTag::SyntaxTree => LevelKind::Syntax,
            FormatTag::InlineCoref | FormatTag::Referential => LevelKind::Reference,
            FormatTag::TeiStructure => LevelKind::Structure,
            FormatTag::Audio => LevelKind::Audio,
            FormatTag::PlainText => LevelKind::Transcription,
            FormatTag::StandoffGraph => LevelKind::Other("annotation".into()),
        };
        let coverage = if format.is_pointer_only() {
            CoverageContribution::None
        } else {
            CoverageContribution::Partial
        };
        let representation = if format.is_inline() {
            Representation::InlineComposite
        } else {
            Representation::Standoff
        };
        LevelDescriptor::new(kind, coverage).representation(representation)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn depends_on(mut self, level_id: impl Into<String>, purpose: impl Into<String>) -> Self {
        self.depends_on.push(Dependency::new(level_id, purpose));
        self
    }

    pub fn producer(mut self, producer: impl Into<String>) -> Self {
        self.producer = producer.into();
        self
    }

    pub fn validated_by(mut self, agent: impl Into<String>) -> Self {
        self.validated_by = Some(agent.into());
        self
    }

    pub fn representation(mut self, representation: Representation) -> Self {
        self.representation = representation;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LevelClass {
    Primary,
    Secondary,
}

impl fmt::Display for LevelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelClass::Primary => "Primary",
            LevelClass::Secondary => "Secondary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resource {
    pub id: String,
    pub corpus_id: String,
    pub level_ids: Vec<String>,
    pub depositor: String,
    pub deposit_date: DateTime<Utc>,
    pub license_note: String,
    /// Relative to the archive root.
    pub payload_path: String,
    pub format_tag: FormatTag,
    #[serde(default)]
    pub declared: BTreeMap<String, String>,
}

/// Deposit fields beyond payload, format and levels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DepositInfo {
    pub depositor: String,
    pub license_note: String,
    pub declared: BTreeMap<String, String>,
}

impl DepositInfo {
    pub fn by(depositor: impl Into<String>) -> Self {
        DepositInfo {
            depositor: depositor.into(),
            ..Default::default()
        }
    }
}
