#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

pub fn fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Runs the `corpus-forge` binary against `root`.
pub fn forge(root: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corpus-forge"))
        .arg("--root")
        .arg(root)
        .args(args)
        .env_remove("CORPUS_FORGE_ROOT")
        .output()
        .expect("spawn corpus-forge")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Value of the first `key: value` line.
pub fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

/// Every `key: value` value in order.
pub fn fields<'a>(text: &'a str, key: &'a str) -> Vec<&'a str> {
    text.lines()
        .filter_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
        .collect()
}

/// One deposit of the sample plan: corpus id, level, format, extra flags, file.
pub struct Step {
    pub corpus: &'static str,
    pub level: &'static str,
    pub format: &'static str,
    pub flags: &'static [&'static str],
    pub file: &'static str,
}

/// Every sample fixture placed in the corpora registered from
/// `fixtures/corpora.tsv` (c0001 Père Goriot, c0002 Vittoria, c0006 Le Monde
/// Diplo). The Goriot excerpt segmentation anchors the stand-off levels.
pub const SAMPLE_PLAN: &[Step] = &[
    Step {
        corpus: "c0001",
        level: "seg",
        format: "segmentation",
        flags: &["--coverage", "full"],
        file: "goriot/segmentation.xml",
    },
    Step {
        corpus: "c0001",
        level: "seg-excerpt",
        format: "segmentation",
        flags: &[],
        file: "samples/segmentation_short.xml",
    },
    Step {
        corpus: "c0001",
        level: "cordial",
        format: "tabular-morpho",
        flags: &["--producer", "Cordial"],
        file: "samples/cordial_tabular.tsv",
    },
    Step {
        corpus: "c0001",
        level: "winbrill",
        format: "standoff-morpho",
        flags: &["--depends-on", "seg:anchoring", "--producer", "WinBrill"],
        file: "samples/winbrill_standoff.xml",
    },
    Step {
        corpus: "c0001",
        level: "visl",
        format: "syntax-tree",
        flags: &["--producer", "VISL"],
        file: "samples/visl_constituents.txt",
    },
    Step {
        corpus: "c0001",
        level: "cordial-semantics",
        format: "plain-text",
        flags: &["--kind", "semantics", "--producer", "Cordial"],
        file: "samples/cordial_semantics.txt",
    },
    Step {
        corpus: "c0001",
        level: "coref",
        format: "inline-coref",
        flags: &["--coverage", "full"],
        file: "samples/coref_inline.xml",
    },
    Step {
        corpus: "c0001",
        level: "structure",
        format: "tei-structure",
        flags: &[],
        file: "samples/structure_inline.xml",
    },
    Step {
        corpus: "c0002",
        level: "tagging",
        format: "inline-morpho",
        flags: &[],
        file: "samples/tagging_faulty.xml",
    },
    Step {
        corpus: "c0002",
        level: "tagging-fixed",
        format: "inline-morpho",
        flags: &["--validated-by", "reviewer"],
        file: "samples/tagging_corrected.xml",
    },
    Step {
        corpus: "c0006",
        level: "referential",
        format: "referential",
        flags: &[],
        file: "samples/referential_variants.xml",
    },
];

/// `init --manifest corpora.tsv` then every step of [`SAMPLE_PLAN`]. Panics
/// with the command output on the first failure.
pub fn build_sample_archive(root: &Path) -> Vec<String> {
    let manifest = fixture_path("corpora.tsv");
    let out = forge(root, &["init", "--manifest", manifest.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "init: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut outputs = vec![stdout(&out)];
    for step in SAMPLE_PLAN {
        let file = fixture_path(step.file);
        let mut args = vec![
            "deposit",
            "--corpus",
            step.corpus,
            "--format",
            step.format,
            "--levels",
            step.level,
        ];
        args.extend_from_slice(step.flags);
        args.push(file.to_str().unwrap());
        let out = forge(root, &args);
        assert!(
            out.status.success(),
            "deposit {}: {}",
            step.file,
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push(stdout(&out));
    }
    outputs
}
