#![allow(dead_code)]

use std::path::PathBuf;

use corpus_forge::formats::FormatTag;
use corpus_forge::{
    Archive, CorpusDescriptor, CoverageContribution, DepositInfo, LevelDescriptor, LevelKind,
};

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

pub fn fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn goriot_corpus(archive: &mut Archive) -> String {
    archive
        .register_corpus(CorpusDescriptor {
            title: "Père Goriot".into(),
            languages: vec!["fr".into()],
            source_description: "extraits, H. Balzac".into(),
            ..Default::default()
        })
        .unwrap()
        .corpus
        .id
}

/// Goriot corpus with the full segmentation (`seg`) and the WinBrill
/// morpho level (`morpho`) over it.
pub fn goriot_archive() -> (Archive, String) {
    let mut archive = Archive::in_memory();
    let corpus = goriot_corpus(&mut archive);
    deposit(
        &mut archive,
        &corpus,
        LevelDescriptor::new(LevelKind::Segmentation, CoverageContribution::Full).with_id("seg"),
        FormatTag::Segmentation,
        &fixture("goriot/segmentation.xml"),
    );
    deposit(
        &mut archive,
        &corpus,
        LevelDescriptor::new(LevelKind::Morphosyntax, CoverageContribution::None)
            .with_id("morpho")
            .depends_on("seg", "anchoring")
            .producer("WinBrill"),
        FormatTag::StandoffMorpho,
        &fixture("goriot/morpho_winbrill.xml"),
    );
    (archive, corpus)
}

pub fn deposit(
    archive: &mut Archive,
    corpus: &str,
    level: LevelDescriptor,
    format: FormatTag,
    payload: &str,
) -> corpus_forge::Deposit {
    let level = archive.add_level(corpus, level).unwrap();
    archive
        .attach_resource(
            corpus,
            payload.as_bytes(),
            format,
            &[level.id],
            DepositInfo::by("test"),
        )
        .unwrap()
}
