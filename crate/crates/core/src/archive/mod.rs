//! The archive: corpora, their levels and resources, version records, and
//! payload storage.
//!
//! Mutations take `&mut self`, so one `Archive` value is the single writer.
//! Everything else reads through `&self` and can be shared across threads.

mod manifest;
mod store;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};
use crate::formats::{parse_payload, FormatTag};
use crate::graph::{dependency_closure, find_cycle_from};
use crate::model::{
    Corpus, CorpusDescriptor, CoverageContribution, Dependency, DepositInfo, DescriptionLevel,
    LevelClass, LevelDescriptor, Resource,
};
use crate::registry::{Registry, DEFAULT_REGISTRY};
use crate::standoff::{
    coverage_fingerprint, covered_units, reconstruct_coverage, LevelContent, LevelGraph,
    Segmentation, SplitTable,
};
use crate::versioning::{
    classify_submission, granularity_of, record_variant, unit_set_fingerprint, VersionRecord,
};

pub use manifest::{Manifest, MANIFEST_HEADER};
pub use validate::{ValidationReport, Violation, ViolationKind};

use store::Storage;

/// Marker file written at the archive root by `init`.
pub const ROOT_MARKER: &str = "ARCHIVE";
pub const REGISTRY_FILE: &str = "registry.tsv";
pub const CATALOG_FILE: &str = "catalog.export";
const WRITE_LOCK: &str = "write.lock";

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// Always returns the same instant; for reproducible archives.
#[derive(Debug, Clone, Copy)]
pub struct FixedClock(pub DateTime<Utc>);

impl Clock for FixedClock {
    fn now(&self) -> DateTime<Utc> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registration {
    pub corpus: Corpus,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionOutcome {
    pub record: VersionRecord,
    /// False when the deposit extended a version already opened for the level.
    pub created: bool,
    pub provisional: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deposit {
    pub resource: Resource,
    pub versions: Vec<VersionOutcome>,
}

pub struct Archive {
    storage: Storage,
    registry: Registry,
    split_table: SplitTable,
    clock: Arc<dyn Clock>,
    corpora: BTreeMap<String, Manifest>,
    level_owner: HashMap<String, String>,
    resource_owner: HashMap<String, String>,
    contents: Mutex<HashMap<String, Arc<LevelContent>>>,
    /// Held for the lifetime of a writer opened on disk.
    _write_lock: Option<std::fs::File>,
}

impl std::fmt::Debug for Archive {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Archive")
            .field("root", &self.storage.root())
            .field("corpora", &self.corpora.len())
            .finish()
    }
}

fn next_id(prefix: char, existing: impl Iterator<Item = impl AsRef<str>>) -> String {
    let max = existing
        .filter_map(|id| {
            let id = id.as_ref();
            id.strip_prefix(prefix)?.parse::<u64>().ok()
        })
        .max()
        .unwrap_or(0);
    format!("{prefix}{:04}", max + 1)
}

impl Archive {
    fn with_storage(storage: Storage, registry: Registry) -> Self {
        Archive {
            storage,
            registry,
            split_table: SplitTable::default(),
            clock: Arc::new(SystemClock),
            corpora: BTreeMap::new(),
            level_owner: HashMap::new(),
            resource_owner: HashMap::new(),
            contents: Mutex::new(HashMap::new()),
            _write_lock: None,
        }
    }

    /// An archive kept entirely in memory, with the bundled registry.
    pub fn in_memory() -> Self {
        Self::with_storage(
            Storage::Memory(Mutex::new(BTreeMap::new())),
            Registry::default(),
        )
    }

    /// Creates the root layout. Re-initializing an existing root is an error
    /// only if the marker is unreadable; existing contents are kept.
    pub fn init(root: impl AsRef<Path>) -> Result<Self> {
        let root = root.as_ref().to_path_buf();
        let storage = Storage::Disk(root.clone());
        if !storage.exists(ROOT_MARKER) {
            storage.write(ROOT_MARKER, format!("{MANIFEST_HEADER}\n").as_bytes())?;
        }
        if !storage.exists(REGISTRY_FILE) {
            storage.write(REGISTRY_FILE, DEFAULT_REGISTRY.as_bytes())?;
        }
        let corpora = root.join("corpora");
        std::fs::create_dir_all(&corpora).map_err(|e| Error::io(&corpora, e))?;
        Self::open_for_write(root)
    }

    /// Opens `root` as its single writer: blocks until any other writer
    /// process has closed the archive, then loads it.
    pub fn open_for_write(root: impl AsRef<Path>) -> Result<Self> {
        let root = root.as_ref();
        if !root.join(ROOT_MARKER).is_file() {
            return Err(Error::NotInitialized(root.to_path_buf()));
        }
        let path = root.join(WRITE_LOCK);
        let file = std::fs::OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        file.lock().map_err(|e| Error::io(&path, e))?;
        let mut archive = Self::open(root)?;
        archive._write_lock = Some(file);
        Ok(archive)
    }

    /// Loads every corpus manifest under `root`.
    pub fn open(root: impl AsRef<Path>) -> Result<Self> {
        let root = root.as_ref().to_path_buf();
        let storage = Storage::Disk(root.clone());
        if !storage.exists(ROOT_MARKER) {
            return Err(Error::NotInitialized(root));
        }
        let marker = String::from_utf8_lossy(&storage.read(ROOT_MARKER)?).into_owned();
        let marker = marker.lines().next().unwrap_or("").trim().to_string();
        if marker != MANIFEST_HEADER {
            return Err(Error::ManifestVersion(marker));
        }
        let registry = if storage.exists(REGISTRY_FILE) {
            Registry::load(&root.join(REGISTRY_FILE))?
        } else {
            Registry::default()
        };
        let mut archive = Self::with_storage(storage, registry);
        for id in archive.storage.list("corpora")? {
            let rel = manifest::manifest_path(&id);
            if !archive.storage.exists(&rel) {
                continue;
            }
            let bytes = archive.storage.read(&rel)?;
            let manifest = Manifest::decode(&bytes, &root.join(&rel))?;
            archive.index(&manifest);
            archive.corpora.insert(manifest.corpus.id.clone(), manifest);
        }
        Ok(archive)
    }

    pub fn with_clock(mut self, clock: impl Clock + 'static) -> Self {
        self.clock = Arc::new(clock);
        self
    }

    pub fn with_split_table(mut self, table: SplitTable) -> Self {
        self.split_table = table;
        self.contents.lock().expect("content cache").clear();
        self
    }

    pub fn root(&self) -> Option<&Path> {
        self.storage.root()
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn split_table(&self) -> &SplitTable {
        &self.split_table
    }

    pub fn now(&self) -> DateTime<Utc> {
        self.clock.now()
    }

    fn index(&mut self, manifest: &Manifest) {
        let corpus = &manifest.corpus.id;
        for id in manifest.levels.keys() {
            self.level_owner.insert(id.clone(), corpus.clone());
        }
        for id in manifest.resources.keys() {
            self.resource_owner.insert(id.clone(), corpus.clone());
        }
    }

    fn persist(&self, corpus_id: &str) -> Result<()> {
        let manifest = &self.corpora[corpus_id];
        self.storage.write(
            &manifest::manifest_path(corpus_id),
            manifest.encode().as_bytes(),
        )
    }

    // ----- reads -----

    pub fn corpora(&self) -> impl Iterator<Item = &Corpus> {
        self.corpora.values().map(|m| &m.corpus)
    }

    pub fn manifest(&self, corpus_id: &str) -> Result<&Manifest> {
        self.corpora
            .get(corpus_id)
            .ok_or_else(|| Error::UnknownCorpus(corpus_id.to_string()))
    }

    pub fn corpus(&self, corpus_id: &str) -> Result<&Corpus> {
        Ok(&self.manifest(corpus_id)?.corpus)
    }

    pub fn levels(&self, corpus_id: &str) -> Result<impl Iterator<Item = &DescriptionLevel>> {
        Ok(self.manifest(corpus_id)?.levels.values())
    }

    pub fn resources(&self, corpus_id: &str) -> Result<impl Iterator<Item = &Resource>> {
        Ok(self.manifest(corpus_id)?.resources.values())
    }

    pub fn versions(&self, corpus_id: &str) -> Result<&[VersionRecord]> {
        Ok(&self.manifest(corpus_id)?.versions)
    }

    pub fn level(&self, level_id: &str) -> Result<&DescriptionLevel> {
        self.level_owner
            .get(level_id)
            .and_then(|c| self.corpora[c].levels.get(level_id))
            .ok_or_else(|| Error::UnknownLevel(level_id.to_string()))
    }

    pub fn resource(&self, resource_id: &str) -> Result<&Resource> {
        self.resource_owner
            .get(resource_id)
            .and_then(|c| self.corpora[c].resources.get(resource_id))
            .ok_or_else(|| Error::UnknownResource(resource_id.to_string()))
    }

    /// Resources carrying `level_id`, by id.
    pub fn level_resources(&self, level_id: &str) -> Result<Vec<&Resource>> {
        let level = self.level(level_id)?;
        Ok(self.corpora[&level.corpus_id]
            .resources
            .values()
            .filter(|r| r.level_ids.iter().any(|l| l == level_id))
            .collect())
    }

    /// A level is materialized when it has at least one resource and every
    /// payload carrying it is present.
    pub fn is_materialized(&self, level_id: &str) -> Result<bool> {
        let resources = self.level_resources(level_id)?;
        Ok(!resources.is_empty() && resources.iter().all(|r| self.payload_exists(r)))
    }

    pub fn payload_exists(&self, resource: &Resource) -> bool {
        self.storage.exists(&resource.payload_path)
    }

    pub fn payload(&self, resource_id: &str) -> Result<Vec<u8>> {
        let resource = self.resource(resource_id)?;
        self.storage.read(&resource.payload_path)
    }

    /// The stored header of a resource, if one was written at deposit.
    pub fn stored_header(&self, resource_id: &str) -> Result<Option<Vec<u8>>> {
        let resource = self.resource(resource_id)?;
        let rel = header_path(&resource.corpus_id, &resource.id);
        if self.storage.exists(&rel) {
            self.storage.read(&rel).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Time of the latest mutation, or the Unix epoch for an empty archive.
    pub fn last_modified(&self) -> DateTime<Utc> {
        self.corpora
            .values()
            .map(|m| m.updated)
            .max()
            .unwrap_or(DateTime::<Utc>::UNIX_EPOCH)
    }

    // ----- level graph -----

    pub fn classify_level(&self, corpus_id: &str, level_id: &str) -> Result<LevelClass> {
        let level = self.level(level_id)?;
        if level.corpus_id != corpus_id {
            return Err(Error::ForeignLevel {
                level: level_id.to_string(),
                corpus: corpus_id.to_string(),
            });
        }
        Ok(level.class())
    }

    pub fn dependency_closure(&self, level_id: &str) -> Result<Vec<String>> {
        self.level(level_id)?;
        dependency_closure(level_id, |id| self.dependencies(id))
    }

    /// Parsed items and tokens of a level, merged over its resources in id
    /// order.
    pub fn level_content(&self, level_id: &str) -> Result<Arc<LevelContent>> {
        if let Some(c) = self.contents.lock().expect("content cache").get(level_id) {
            return Ok(c.clone());
        }
        let mut merged = LevelContent::default();
        for resource in self.level_resources(level_id)? {
            let bytes = self.storage.read(&resource.payload_path)?;
            let content = parse_payload(resource.format_tag, &bytes, &self.split_table)?;
            merged.items.extend(content.items);
            if let Some(tokens) = content.tokens {
                merged.tokens.get_or_insert_with(Vec::new).extend(tokens);
            }
        }
        let merged = Arc::new(merged);
        self.contents
            .lock()
            .expect("content cache")
            .insert(level_id.to_string(), merged.clone());
        Ok(merged)
    }

    pub fn reconstruct_coverage(&self, level_id: &str) -> Result<Vec<String>> {
        self.level(level_id)?;
        reconstruct_coverage(level_id, self)
    }

    /// Reference units of a segmentation-format level.
    pub fn segmentation(&self, level_id: &str) -> Result<Segmentation> {
        let content = self.level_content(level_id)?;
        let units = content
            .items
            .iter()
            .enumerate()
            .filter_map(|(index, item)| {
                Some(crate::standoff::ReferenceUnit {
                    id: item.id.clone()?,
                    form: item.surface.clone()?,
                    index,
                })
            })
            .collect();
        Ok(Segmentation::new(level_id, units))
    }

    pub fn validate_archive(&self, corpus_id: &str) -> Result<ValidationReport> {
        validate::validate(self, corpus_id)
    }

    // ----- mutations -----

    pub fn register_corpus(&mut self, descriptor: CorpusDescriptor) -> Result<Registration> {
        if descriptor.title.trim().is_empty() {
            return Err(Error::EmptyTitle);
        }
        let mut warnings = Vec::new();
        if let Some(dup) = self.corpora().find(|c| {
            c.title == descriptor.title && c.source_description == descriptor.source_description
        }) {
            warnings.push(format!(
                "corpus `{}` already has title `{}` and the same source description",
                dup.id, dup.title
            ));
        }
        let id = next_id('c', self.corpora.keys());
        let corpus = Corpus {
            id: id.clone(),
            title: descriptor.title,
            languages: descriptor.languages,
            coverage_fingerprint: None,
            source_description: descriptor.source_description,
            declared: descriptor.declared,
        };
        let manifest = Manifest::new(corpus.clone(), self.clock.now());
        self.corpora.insert(id.clone(), manifest);
        if let Err(e) = self.persist(&id) {
            self.corpora.remove(&id);
            return Err(e);
        }
        Ok(Registration { corpus, warnings })
    }

    pub fn add_level(
        &mut self,
        corpus_id: &str,
        descriptor: LevelDescriptor,
    ) -> Result<DescriptionLevel> {
        self.manifest(corpus_id)?;
        let id = match descriptor.id {
            Some(id) if self.level_owner.contains_key(&id) => {
                return Err(Error::DuplicateLevel(id))
            }
            Some(id) => id,
            None => next_id('l', self.level_owner.keys()),
        };
        for dep in &descriptor.depends_on {
            if dep.level_id == id {
                return Err(Error::DependencyCycle(vec![id.clone(), id.clone()]));
            }
            match self.level_owner.get(&dep.level_id) {
                Some(owner) if owner == corpus_id => {}
                Some(_) => {
                    return Err(Error::ForeignLevel {
                        level: dep.level_id.clone(),
                        corpus: corpus_id.to_string(),
                    })
                }
                None => {
                    return Err(Error::UnknownDependency {
                        level: id.clone(),
                        target: dep.level_id.clone(),
                    })
                }
            }
        }
        let level = DescriptionLevel {
            id: id.clone(),
            corpus_id: corpus_id.to_string(),
            kind: descriptor.kind,
            coverage_contribution: descriptor.coverage_contribution,
            depends_on: descriptor.depends_on,
            representation: descriptor.representation,
            granularity: descriptor.granularity,
            validated_by: descriptor.validated_by,
            producer: descriptor.producer,
            schema_note: descriptor.schema_note,
            declared: descriptor.declared,
        };
        // Dependencies only point at existing levels, so a cycle can only
        // pass through the new one.
        let deps_with_new = |lid: &str| {
            if lid == id {
                Some(level.dependency_ids())
            } else {
                self.dependencies(lid)
            }
        };
        if let Some(cycle) = find_cycle_from(&id, deps_with_new) {
            return Err(Error::DependencyCycle(cycle));
        }

        let now = self.clock.now();
        let manifest = self.corpora.get_mut(corpus_id).expect("checked above");
        manifest.levels.insert(id.clone(), level.clone());
        manifest.updated = now;
        self.level_owner.insert(id.clone(), corpus_id.to_string());
        if let Err(e) = self.persist(corpus_id) {
            self.corpora
                .get_mut(corpus_id)
                .expect("present")
                .levels
                .remove(&id);
            self.level_owner.remove(&id);
            return Err(e);
        }
        Ok(level)
    }

    /// Adds a dependency edge to an existing level. Refused when the target
    /// is unknown, belongs to another corpus, or would close a cycle.
    pub fn add_dependency(&mut self, level_id: &str, dependency: Dependency) -> Result<()> {
        let corpus_id = self.level(level_id)?.corpus_id.clone();
        match self.level_owner.get(&dependency.level_id) {
            Some(owner) if *owner == corpus_id => {}
            Some(_) => {
                return Err(Error::ForeignLevel {
                    level: dependency.level_id,
                    corpus: corpus_id,
                })
            }
            None => {
                return Err(Error::UnknownDependency {
                    level: level_id.to_string(),
                    target: dependency.level_id,
                })
            }
        }
        let mut extended = self.level(level_id)?.dependency_ids();
        extended.push(dependency.level_id.clone());
        let deps = |lid: &str| {
            if lid == level_id {
                Some(extended.clone())
            } else {
                self.dependencies(lid)
            }
        };
        if let Some(cycle) = find_cycle_from(level_id, deps) {
            return Err(Error::DependencyCycle(cycle));
        }
        let now = self.clock.now();
        let manifest = self.corpora.get_mut(&corpus_id).expect("owner indexed");
        let snapshot = manifest.clone();
        manifest
            .levels
            .get_mut(level_id)
            .expect("level indexed")
            .depends_on
            .push(dependency);
        manifest.updated = now;
        if let Err(e) = self.persist(&corpus_id) {
            self.corpora.insert(corpus_id, snapshot);
            return Err(e);
        }
        self.invalidate();
        Ok(())
    }

    /// Stores a payload carrying one or more levels of `corpus_id` and opens
    /// or extends a version record for each level.
    pub fn attach_resource(
        &mut self,
        corpus_id: &str,
        payload: &[u8],
        format: FormatTag,
        level_ids: &[String],
        info: DepositInfo,
    ) -> Result<Deposit> {
        self.manifest(corpus_id)?;
        if level_ids.is_empty() {
            return Err(Error::NoLevel);
        }
        for level_id in level_ids {
            let level = self.level(level_id)?;
            if level.corpus_id != corpus_id {
                return Err(Error::ForeignLevel {
                    level: level_id.clone(),
                    corpus: corpus_id.to_string(),
                });
            }
        }
        parse_payload(format, payload, &self.split_table)?;

        let now = self.clock.now();
        let id = next_id('r', self.resource_owner.keys());
        let payload_path = format!("corpora/{corpus_id}/resources/{id}.{}", format.extension());
        let mut unique_levels = Vec::new();
        for l in level_ids {
            if !unique_levels.contains(l) {
                unique_levels.push(l.clone());
            }
        }
        let resource = Resource {
            id: id.clone(),
            corpus_id: corpus_id.to_string(),
            level_ids: unique_levels,
            depositor: info.depositor,
            deposit_date: now,
            license_note: info.license_note,
            payload_path: payload_path.clone(),
            format_tag: format,
            declared: info.declared,
        };

        let snapshot = self.corpora[corpus_id].clone();
        self.storage.write(&payload_path, payload)?;
        let result = self.commit_resource(corpus_id, resource, now);
        if result.is_err() {
            self.corpora.insert(corpus_id.to_string(), snapshot);
            self.resource_owner.remove(&id);
            let _ = self.storage.remove(&payload_path);
            let _ = self.storage.remove(&header_path(corpus_id, &id));
        }
        self.invalidate();
        result
    }

    fn commit_resource(
        &mut self,
        corpus_id: &str,
        resource: Resource,
        now: DateTime<Utc>,
    ) -> Result<Deposit> {
        let id = resource.id.clone();
        {
            let manifest = self.corpora.get_mut(corpus_id).expect("checked");
            manifest.resources.insert(id.clone(), resource.clone());
            manifest.updated = now;
        }
        self.resource_owner
            .insert(id.clone(), corpus_id.to_string());
        self.invalidate();

        let mut versions = Vec::new();
        for level_id in &resource.level_ids {
            versions.push(self.open_version(corpus_id, level_id, now)?);
        }
        for level_id in &resource.level_ids {
            self.settle_fingerprint(corpus_id, level_id);
        }

        let header = crate::metadata::resource_header_document(self, &id)?;
        self.storage
            .write(&header_path(corpus_id, &id), header.as_bytes())?;
        self.persist(corpus_id)?;
        Ok(Deposit { resource, versions })
    }

    fn open_version(
        &mut self,
        corpus_id: &str,
        level_id: &str,
        now: DateTime<Utc>,
    ) -> Result<VersionOutcome> {
        let level = self.level(level_id)?.clone();
        let content = self.level_content(level_id)?;
        let granularity = granularity_of(&content.items, &self.registry);
        let covered = covered_units(level_id, self).ok();
        let coverage = covered
            .as_ref()
            .map(|ids| unit_set_fingerprint(ids.iter().map(String::as_str)));

        let manifest = &self.corpora[corpus_id];
        if let Some(pos) = manifest
            .versions
            .iter()
            .position(|v| v.level_id == level_id)
        {
            let mut record = manifest.versions[pos].clone();
            record.granularity = granularity.categories.clone();
            record.coverage = coverage;
            record_variant(&mut record, &content.items);
            self.corpora.get_mut(corpus_id).expect("checked").versions[pos] = record.clone();
            return Ok(VersionOutcome {
                record,
                created: false,
                provisional: granularity.provisional,
            });
        }

        let existing = manifest
            .versions
            .iter()
            .rev()
            .find(|v| v.level_kind == level.kind.name() && v.level_id != level_id)
            .cloned();
        let validated = level.validated_by.is_some();
        let classification = classify_submission(
            &granularity.categories,
            validated,
            existing.as_ref(),
            &self.registry,
        );
        let (supersedes, coverage_overlap) = match (&existing, classification.is_correction()) {
            (Some(prior), true) => {
                let overlap = match (&covered, covered_units(&prior.level_id, self).ok()) {
                    (Some(new), Some(old)) => {
                        let old: BTreeSet<&String> = old.iter().collect();
                        Some(new.iter().any(|u| old.contains(u)))
                    }
                    _ => None,
                };
                (Some(prior.id.clone()), overlap)
            }
            _ => (None, None),
        };
        let all_versions = self.corpora.values().flat_map(|m| m.versions.iter());
        let mut record = VersionRecord {
            id: next_id('v', all_versions.map(|v| v.id.as_str())),
            corpus_id: corpus_id.to_string(),
            level_id: level_id.to_string(),
            level_kind: level.kind.name().to_string(),
            submitted: now,
            granularity: granularity.categories,
            validated,
            validator: level.validated_by.clone(),
            supersedes,
            classification,
            variant_groups: 0,
            coverage,
            coverage_overlap,
        };
        record_variant(&mut record, &content.items);
        self.corpora
            .get_mut(corpus_id)
            .expect("checked")
            .versions
            .push(record.clone());
        Ok(VersionOutcome {
            record,
            created: true,
            provisional: granularity.provisional,
        })
    }

    /// Fixes the corpus fingerprint from the first full-coverage level that
    /// reconstructs.
    fn settle_fingerprint(&mut self, corpus_id: &str, level_id: &str) {
        if self.corpora[corpus_id]
            .corpus
            .coverage_fingerprint
            .is_some()
        {
            return;
        }
        let Ok(level) = self.level(level_id) else {
            return;
        };
        if level.coverage_contribution != CoverageContribution::Full {
            return;
        }
        if let Ok(tokens) = reconstruct_coverage(level_id, self) {
            if !tokens.is_empty() {
                self.corpora
                    .get_mut(corpus_id)
                    .expect("checked")
                    .corpus
                    .coverage_fingerprint = Some(coverage_fingerprint(&tokens));
            }
        }
    }

    fn invalidate(&self) {
        self.contents.lock().expect("content cache").clear();
    }

    /// Removes a payload file while keeping its resource record and header;
    /// the levels it carried become unmaterialized.
    pub fn drop_payload(&mut self, resource_id: &str) -> Result<()> {
        let path = self.resource(resource_id)?.payload_path.clone();
        self.storage.remove(&path)?;
        self.invalidate();
        Ok(())
    }

    /// Writes `catalog.export` at the root and returns its text.
    pub fn write_catalog(&self) -> Result<String> {
        let text = crate::metadata::export_catalog(self)?.to_document();
        self.storage.write(CATALOG_FILE, text.as_bytes())?;
        Ok(text)
    }

    pub fn root_path(&self, rel: &str) -> Option<PathBuf> {
        self.root().map(|r| r.join(rel))
    }
}

pub fn header_path(corpus_id: &str, resource_id: &str) -> String {
    format!("corpora/{corpus_id}/resources/{resource_id}.header")
}

impl LevelGraph for Archive {
    fn dependencies(&self, level_id: &str) -> Option<Vec<String>> {
        self.level(level_id)
            .ok()
            .map(DescriptionLevel::dependency_ids)
    }

    fn content(&self, level_id: &str) -> Result<Arc<LevelContent>> {
        self.level_content(level_id)
    }

    fn is_primary(&self, level_id: &str) -> bool {
        self.level(level_id)
            .is_ok_and(|l| l.class() == LevelClass::Primary)
    }
}
