//! Operator commands over a local archive root.
//!
//! Each command maps onto one archive or metadata operation and formats its
//! result, either as `key: value` lines or, with `--machine`, as one JSON
//! document.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use corpus_forge::metadata::{build_header, export_catalog, tier_of, Tier};
use corpus_forge::standoff::coverage_fingerprint;
use corpus_forge::{
    Archive, CorpusDescriptor, CoverageContribution, Dependency, DepositInfo, Error, FormatTag,
    LevelDescriptor, LevelKind, ValidationReport,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "corpus-forge",
    version,
    about = "Deposit, inspect and validate a corpus archive"
)]
pub struct Cli {
    /// Archive root directory.
    #[arg(long, env = "CORPUS_FORGE_ROOT")]
    pub root: PathBuf,
    /// Print one JSON document instead of `key: value` lines.
    #[arg(long, global = true)]
    pub machine: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create the archive layout, optionally registering corpora from a TSV manifest.
    Init {
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Store a payload file on one or more levels of a corpus.
    Deposit(DepositArgs),
    /// List corpora.
    List,
    /// Print the metadata header of a corpus, level or resource.
    Show { id: String },
    /// Check archive constraints.
    Validate {
        #[arg(long)]
        corpus: Option<String>,
    },
    /// Print the surface tokens a level covers.
    Coverage {
        #[arg(long)]
        level: String,
    },
    /// Print whether a level is primary or secondary.
    Classify {
        #[arg(long)]
        level: String,
    },
    /// Write the catalog export file at the archive root.
    Export,
    /// Print the catalog export.
    Catalog,
}

#[derive(Debug, clap::Args)]
pub struct DepositArgs {
    #[arg(long)]
    pub corpus: String,
    #[arg(long)]
    pub format: FormatTag,
    /// Target level ids; missing ones are created. A new level when omitted.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<String>,
    pub file: PathBuf,
    /// Kind of levels created by this deposit.
    #[arg(long)]
    pub kind: Option<LevelKind>,
    /// Coverage contribution of levels created by this deposit.
    #[arg(long)]
    pub coverage: Option<CoverageContribution>,
    /// `LEVEL[:purpose]`, repeatable.
    #[arg(long = "depends-on")]
    pub depends_on: Vec<String>,
    #[arg(long)]
    pub producer: Option<String>,
    #[arg(long)]
    pub validated_by: Option<String>,
    #[arg(long, env = "USER", default_value = "anonymous")]
    pub depositor: String,
    #[arg(long, default_value = "")]
    pub license: String,
}

/// Formatted result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub document: Value,
    /// Process exit code: 0 on success, 1 when the operation reports a
    /// domain failure.
    pub code: u8,
}

impl Output {
    fn ok(text: String, document: Value) -> Self {
        Output {
            text,
            document,
            code: 0,
        }
    }

    pub fn render(&self, machine: bool) -> String {
        if machine {
            let mut s = serde_json::to_string_pretty(&self.document).expect("json");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}: {value}");
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("json")
}

/// Runs one command against the archive at `cli.root`.
pub fn run(cli: &Cli) -> Result<Output, Error> {
    let root = cli.root.as_path();
    match &cli.command {
        Command::Init { manifest } => init(root, manifest.as_deref()),
        Command::Deposit(args) => deposit(root, args),
        Command::List => list(&Archive::open(root)?),
        Command::Show { id } => show(&Archive::open(root)?, id),
        Command::Validate { corpus } => validate(&Archive::open(root)?, corpus.as_deref()),
        Command::Coverage { level } => coverage(&Archive::open(root)?, level),
        Command::Classify { level } => classify(&Archive::open(root)?, level),
        Command::Export => export(&Archive::open_for_write(root)?),
        Command::Catalog => catalog(&Archive::open(root)?),
    }
}

/// One row of a corpus manifest: title, languages, then declared fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRow {
    pub title: String,
    pub languages: Vec<String>,
    pub declared: BTreeMap<String, String>,
}

/// Manifest columns after title and languages, stored as declared fields.
const DECLARED_COLUMNS: [&str; 5] = [
    "word_count",
    "genre",
    "description",
    "contributors",
    "levels_available",
];

/// Parses a tab-separated corpus manifest. Lines starting with `#` and blank
/// lines are skipped.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>, Error> {
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
        if cols.len() < 2 || cols[0].is_empty() {
            return Err(Error::parse(
                "corpus-manifest",
                n + 1,
                "expected at least title and languages columns",
            ));
        }
        let languages = cols[1]
            .split(',')
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
        let declared = DECLARED_COLUMNS
            .iter()
            .zip(cols.iter().skip(2))
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        rows.push(ManifestRow {
            title: cols[0].to_string(),
            languages,
            declared,
        });
    }
    Ok(rows)
}

fn init(root: &Path, manifest: Option<&Path>) -> Result<Output, Error> {
    let mut archive = Archive::init(root)?;
    let mut text = String::new();
    line(&mut text, "root", root.display());
    let mut entries = Vec::new();
    if let Some(path) = manifest {
        let source = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for row in parse_manifest(&source)? {
            if let Some(existing) = archive.corpora().find(|c| c.title == row.title) {
                line(
                    &mut text,
                    "corpus",
                    format!("{} {} (existing)", existing.id, existing.title),
                );
                entries
                    .push(json!({"id": existing.id, "title": existing.title, "registered": false}));
                continue;
            }
            let source_description = row.declared.get("description").cloned().unwrap_or_default();
            let registration = archive.register_corpus(CorpusDescriptor {
                title: row.title,
                languages: row.languages,
                source_description,
                declared: row.declared,
            })?;
            let c = &registration.corpus;
            line(&mut text, "corpus", format!("{} {}", c.id, c.title));
            for w in &registration.warnings {
                line(&mut text, "warning", w);
            }
            entries.push(json!({
                "id": c.id,
                "title": c.title,
                "registered": true,
                "warnings": registration.warnings,
            }));
        }
    }
    Ok(Output::ok(text, json!({"root": root, "corpora": entries})))
}

fn parse_dependency(arg: &str) -> Dependency {
    match arg.split_once(':') {
        Some((level, purpose)) => Dependency::new(level, purpose),
        None => Dependency::new(arg, "anchoring"),
    }
}

fn new_level(args: &DepositArgs) -> LevelDescriptor {
    let mut d = LevelDescriptor::for_format(args.format);
    if let Some(kind) = &args.kind {
        d.kind = kind.clone();
    }
    if let Some(cov) = args.coverage {
        d.coverage_contribution = cov;
    }
    d.depends_on = args
        .depends_on
        .iter()
        .map(|s| parse_dependency(s))
        .collect();
    if let Some(p) = &args.producer {
        d.producer = p.clone();
    }
    d.validated_by = args.validated_by.clone();
    d
}

fn deposit(root: &Path, args: &DepositArgs) -> Result<Output, Error> {
    let payload = std::fs::read(&args.file).map_err(|e| Error::io(&args.file, e))?;
    let mut archive = Archive::open_for_write(root)?;
    archive.corpus(&args.corpus)?;
    let mut level_ids = Vec::new();
    if args.levels.is_empty() {
        level_ids.push(archive.add_level(&args.corpus, new_level(args))?.id);
    }
    for id in &args.levels {
        if archive.level(id).is_err() {
            archive.add_level(&args.corpus, new_level(args).with_id(id))?;
        }
        level_ids.push(id.clone());
    }
    let info = DepositInfo {
        depositor: args.depositor.clone(),
        license_note: args.license.clone(),
        declared: BTreeMap::new(),
    };
    let deposit = archive.attach_resource(&args.corpus, &payload, args.format, &level_ids, info)?;

    let mut text = String::new();
    line(&mut text, "resource", &deposit.resource.id);
    let mut versions = Vec::new();
    for v in &deposit.versions {
        let r = &v.record;
        let class = archive.classify_level(&args.corpus, &r.level_id)?;
        line(&mut text, "level-id", &r.level_id);
        line(&mut text, "level", class);
        line(&mut text, "classification", r.classification.name());
        line(&mut text, "version", &r.id);
        if let Some(s) = &r.supersedes {
            line(&mut text, "supersedes", s);
        }
        for p in &v.provisional {
            line(&mut text, "provisional-category", p);
        }
        versions.push(json!({
            "level_id": r.level_id,
            "level": class.to_string(),
            "created": v.created,
            "record": to_value(r),
        }));
    }
    Ok(Output::ok(
        text,
        json!({"resource": to_value(&deposit.resource), "versions": versions}),
    ))
}

fn list(archive: &Archive) -> Result<Output, Error> {
    let mut text = String::new();
    let mut entries = Vec::new();
    for c in archive.corpora() {
        let levels = archive.levels(&c.id)?.count();
        let resources = archive.resources(&c.id)?.count();
        line(
            &mut text,
            "corpus",
            format!(
                "{} {} (levels {levels}, resources {resources})",
                c.id, c.title
            ),
        );
        entries.push(json!({
            "id": c.id,
            "title": c.title,
            "levels": levels,
            "resources": resources,
        }));
    }
    Ok(Output::ok(text, json!({ "corpora": entries })))
}

fn show(archive: &Archive, id: &str) -> Result<Output, Error> {
    let tier = tier_of(archive, id)?;
    let header = build_header(archive, tier, id, &BTreeMap::new())?;
    let text = match tier {
        Tier::Resource => match archive.stored_header(id)? {
            Some(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            None => header.to_document(),
        },
        _ => header.to_document(),
    };
    Ok(Output::ok(text, to_value(&header)))
}

fn format_report(text: &mut String, report: &ValidationReport) {
    if report.is_valid() {
        line(text, "corpus", format!("{} valid", report.corpus_id));
        return;
    }
    line(
        text,
        "corpus",
        format!(
            "{} invalid ({} violations)",
            report.corpus_id,
            report.violations.len()
        ),
    );
    for v in &report.violations {
        line(
            text,
            "violation",
            format!("{} {}: {}", v.kind.name(), v.subject, v.message),
        );
    }
}

fn validate(archive: &Archive, corpus: Option<&str>) -> Result<Output, Error> {
    let ids: Vec<String> = match corpus {
        Some(c) => vec![archive.corpus(c)?.id.clone()],
        None => archive.corpora().map(|c| c.id.clone()).collect(),
    };
    let mut text = String::new();
    let mut reports = Vec::new();
    for id in &ids {
        let report = archive.validate_archive(id)?;
        format_report(&mut text, &report);
        reports.push(report);
    }
    let valid = reports.iter().all(ValidationReport::is_valid);
    Ok(Output {
        text,
        document: json!({"valid": valid, "reports": to_value(&reports)}),
        code: if valid { 0 } else { 1 },
    })
}

fn coverage(archive: &Archive, level: &str) -> Result<Output, Error> {
    let tokens = archive.reconstruct_coverage(level)?;
    let fingerprint = coverage_fingerprint(&tokens);
    let mut text = String::new();
    line(&mut text, "level-id", level);
    line(&mut text, "tokens", tokens.len());
    line(&mut text, "fingerprint", &fingerprint);
    line(&mut text, "text", tokens.join(" "));
    Ok(Output::ok(
        text,
        json!({"level_id": level, "fingerprint": fingerprint, "tokens": tokens}),
    ))
}

fn classify(archive: &Archive, level: &str) -> Result<Output, Error> {
    let corpus = archive.level(level)?.corpus_id.clone();
    let class = archive.classify_level(&corpus, level)?;
    let mut text = String::new();
    line(&mut text, "level-id", level);
    line(&mut text, "level", class);
    Ok(Output::ok(
        text,
        json!({"level_id": level, "corpus_id": corpus, "level": class.to_string()}),
    ))
}

fn export(archive: &Archive) -> Result<Output, Error> {
    archive.write_catalog()?;
    let records = export_catalog(archive)?.records.len();
    let path = archive
        .root_path(corpus_forge::archive::CATALOG_FILE)
        .expect("disk archive");
    let mut text = String::new();
    line(&mut text, "catalog", path.display());
    line(&mut text, "records", records);
    Ok(Output::ok(text, json!({"path": path, "records": records})))
}

fn catalog(archive: &Archive) -> Result<Output, Error> {
    let catalog = export_catalog(archive)?;
    Ok(Output::ok(catalog.to_document(), to_value(&catalog)))
}
