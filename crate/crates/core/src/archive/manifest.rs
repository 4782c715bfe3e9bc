//! Per-corpus manifest: a version line followed by a JSON document.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Corpus, DescriptionLevel, Resource};
use crate::versioning::VersionRecord;

pub const MANIFEST_HEADER: &str = "archive-format: 1";

pub(crate) fn manifest_path(corpus_id: &str) -> String {
    format!("corpora/{corpus_id}/manifest")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub corpus: Corpus,
    pub levels: BTreeMap<String, DescriptionLevel>,
    pub resources: BTreeMap<String, Resource>,
    pub versions: Vec<VersionRecord>,
    /// Time of the last mutation of this corpus.
    pub updated: DateTime<Utc>,
}

impl Manifest {
    pub(crate) fn new(corpus: Corpus, now: DateTime<Utc>) -> Self {
        Manifest {
            corpus,
            levels: BTreeMap::new(),
            resources: BTreeMap::new(),
            versions: Vec::new(),
            updated: now,
        }
    }

    pub fn encode(&self) -> String {
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        format!("{MANIFEST_HEADER}\n{body}\n")
    }

    pub fn decode(bytes: &[u8], path: &Path) -> Result<Self> {
        let text = String::from_utf8_lossy(bytes);
        let (first, body) = text.split_once('\n').unwrap_or((&text, ""));
        if first.trim() != MANIFEST_HEADER {
            return Err(Error::ManifestVersion(first.trim().to_string()));
        }
        serde_json::from_str(body).map_err(|source| Error::Manifest {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_version_check() {
        let corpus = Corpus {
            id: "c0001".into(),
            title: "Père Goriot".into(),
            languages: vec!["fr".into()],
            coverage_fingerprint: None,
            source_description: String::new(),
            declared: BTreeMap::new(),
        };
        let m = Manifest::new(corpus, DateTime::<Utc>::UNIX_EPOCH);
        let text = m.encode();
        assert!(text.starts_with("archive-format: 1\n"));
        assert_eq!(
            Manifest::decode(text.as_bytes(), Path::new("m")).unwrap(),
            m
        );
        let bumped = text.replacen("archive-format: 1", "archive-format: 2", 1);
        assert!(matches!(
            Manifest::decode(bumped.as_bytes(), Path::new("m")),
            Err(Error::ManifestVersion(v)) if v == "archive-format: 2"
        ));
    }
}
