//! Corpus, level and resource operations, validation and persistence.

mod common;

use std::collections::BTreeMap;

use common::{deposit, fixture, goriot_archive, goriot_corpus};
use corpus_forge::formats::FormatTag;
use corpus_forge::{
    Archive, CorpusDescriptor, CoverageContribution, Dependency, DepositInfo, Error, LevelClass,
    LevelDescriptor, LevelKind, ViolationKind,
};

fn level(kind: LevelKind, coverage: CoverageContribution, id: &str) -> LevelDescriptor {
    LevelDescriptor::new(kind, coverage).with_id(id)
}

#[test]
fn register_corpus() {
    let mut archive = Archive::in_memory();
    let descriptor = CorpusDescriptor {
        title: "Père Goriot".into(),
        languages: vec!["fr".into()],
        ..Default::default()
    };
    let first = archive.register_corpus(descriptor.clone()).unwrap();
    assert!(first.warnings.is_empty());
    assert_eq!(first.corpus.languages, ["fr"]);
    assert!(first.corpus.coverage_fingerprint.is_none());
    let second = archive.register_corpus(descriptor).unwrap();
    assert_ne!(first.corpus.id, second.corpus.id);
    assert_eq!(second.warnings.len(), 1);
    assert!(matches!(
        archive.register_corpus(CorpusDescriptor::default()),
        Err(Error::EmptyTitle)
    ));
}

#[test]
fn add_level_rejects_cycles_and_unknowns() {
    let mut archive = Archive::in_memory();
    let c = goriot_corpus(&mut archive);
    assert!(matches!(
        archive.add_level(
            "c9999",
            level(LevelKind::Segmentation, CoverageContribution::Full, "x")
        ),
        Err(Error::UnknownCorpus(_))
    ));
    assert!(matches!(
        archive.add_level(
            &c,
            level(LevelKind::Syntax, CoverageContribution::None, "self").depends_on("self", "loop")
        ),
        Err(Error::DependencyCycle(_))
    ));
    assert!(matches!(
        archive.add_level(
            &c,
            level(LevelKind::Syntax, CoverageContribution::None, "s").depends_on("nowhere", "")
        ),
        Err(Error::UnknownDependency { .. })
    ));
    archive
        .add_level(
            &c,
            level(LevelKind::Segmentation, CoverageContribution::Full, "seg"),
        )
        .unwrap();
    let morpho = archive
        .add_level(
            &c,
            level(
                LevelKind::Morphosyntax,
                CoverageContribution::None,
                "morpho",
            )
            .depends_on("seg", "anchoring"),
        )
        .unwrap();
    assert_eq!(
        archive.classify_level(&c, &morpho.id).unwrap(),
        LevelClass::Secondary
    );
    assert!(matches!(
        archive.add_level(
            &c,
            level(LevelKind::Segmentation, CoverageContribution::Full, "seg")
        ),
        Err(Error::DuplicateLevel(_))
    ));
}

#[test]
fn mutual_dependency_rejected_on_second_add() {
    let mut archive = Archive::in_memory();
    let c = goriot_corpus(&mut archive);
    archive
        .add_level(
            &c,
            level(LevelKind::Syntax, CoverageContribution::None, "a"),
        )
        .unwrap();
    archive
        .add_level(
            &c,
            level(LevelKind::Reference, CoverageContribution::None, "b").depends_on("a", ""),
        )
        .unwrap();
    let err = archive
        .add_dependency("a", Dependency::new("b", "enrichment"))
        .unwrap_err();
    assert!(
        matches!(&err, Error::DependencyCycle(path) if path == &["a", "b", "a"]),
        "{err}"
    );
    assert!(archive.level("a").unwrap().depends_on.is_empty());
    assert!(matches!(
        archive.add_dependency("a", Dependency::new("a", "")),
        Err(Error::DependencyCycle(_))
    ));
}

#[test]
fn attach_resource_constraints() {
    let mut archive = Archive::in_memory();
    let c = goriot_corpus(&mut archive);
    let other = goriot_corpus(&mut archive);
    archive
        .add_level(
            &c,
            level(LevelKind::Segmentation, CoverageContribution::Full, "seg"),
        )
        .unwrap();
    archive
        .add_level(
            &other,
            level(LevelKind::Segmentation, CoverageContribution::Full, "seg2"),
        )
        .unwrap();
    let payload = fixture("goriot/segmentation.xml");
    let attach = |a: &mut Archive, levels: &[&str], format| {
        let levels: Vec<String> = levels.iter().map(|s| s.to_string()).collect();
        a.attach_resource(
            &c,
            payload.as_bytes(),
            format,
            &levels,
            DepositInfo::by("x"),
        )
    };
    assert!(matches!(
        attach(&mut archive, &[], FormatTag::Segmentation),
        Err(Error::NoLevel)
    ));
    assert!(matches!(
        attach(&mut archive, &["ghost"], FormatTag::Segmentation),
        Err(Error::UnknownLevel(_))
    ));
    assert!(matches!(
        attach(&mut archive, &["seg2"], FormatTag::Segmentation),
        Err(Error::ForeignLevel { .. })
    ));
    assert!(matches!(
        attach(&mut archive, &["seg"], FormatTag::TabularMorpho),
        Err(Error::Parse { .. })
    ));
    let ok = attach(&mut archive, &["seg"], FormatTag::Segmentation).unwrap();
    assert_eq!(ok.resource.level_ids, ["seg"]);
    assert_eq!(
        ok.resource.deposit_date,
        archive.now().min(ok.resource.deposit_date)
    );
    for resource in archive.resources(&c).unwrap() {
        assert!(!resource.level_ids.is_empty());
    }
}

#[test]
fn one_resource_many_levels_and_one_level_many_resources() {
    let (mut archive, c) = goriot_archive();
    archive
        .add_level(
            &c,
            level(LevelKind::Morphosyntax, CoverageContribution::Partial, "m2"),
        )
        .unwrap();
    archive
        .add_level(
            &c,
            level(LevelKind::Syntax, CoverageContribution::Partial, "s2"),
        )
        .unwrap();
    let composite = archive
        .attach_resource(
            &c,
            fixture("samples/visl_constituents.txt").as_bytes(),
            FormatTag::SyntaxTree,
            &["m2".into(), "s2".into()],
            DepositInfo::by("VISL"),
        )
        .unwrap();
    assert_eq!(composite.resource.level_ids.len(), 2);

    archive
        .add_level(
            &c,
            level(LevelKind::Reference, CoverageContribution::None, "ref").depends_on("seg", ""),
        )
        .unwrap();
    let markables = "<item id=\"m1\" span=\"word_47..word_49\"><cat name=\"element\" value=\"markable\"/></item>\n";
    let antecedents = "<item id=\"m2\" span=\"word_63..word_64\"><cat name=\"element\" value=\"markable\"/></item>\n";
    let links = "<item id=\"l1\"><link type=\"ident\" targets=\"m1\"/></item>\n";
    for part in [markables, antecedents, links] {
        archive
            .attach_resource(
                &c,
                part.as_bytes(),
                FormatTag::StandoffGraph,
                &["ref".into()],
                DepositInfo::by("x"),
            )
            .unwrap();
    }
    assert_eq!(archive.level_resources("ref").unwrap().len(), 3);
    assert_eq!(archive.level_content("ref").unwrap().items.len(), 3);
    let versions: Vec<_> = archive
        .versions(&c)
        .unwrap()
        .iter()
        .filter(|v| v.level_id == "ref")
        .collect();
    assert_eq!(
        versions.len(),
        1,
        "one level spread over files is one version"
    );
}

#[test]
fn classification_scenarios() {
    let mut archive = Archive::in_memory();
    let c = goriot_corpus(&mut archive);
    let seg = archive
        .add_level(
            &c,
            level(LevelKind::Segmentation, CoverageContribution::Full, "seg"),
        )
        .unwrap();
    let morpho = archive
        .add_level(
            &c,
            level(
                LevelKind::Morphosyntax,
                CoverageContribution::None,
                "morpho",
            )
            .depends_on("seg", ""),
        )
        .unwrap();
    let audio = archive
        .add_level(
            &c,
            level(LevelKind::Audio, CoverageContribution::Partial, "audio"),
        )
        .unwrap();
    let transcription = archive
        .add_level(
            &c,
            level(
                LevelKind::Transcription,
                CoverageContribution::Partial,
                "trs",
            )
            .depends_on("audio", "time anchors"),
        )
        .unwrap();
    let class = |l: &str| archive.classify_level(&c, l).unwrap();
    assert_eq!(class(&seg.id), LevelClass::Primary);
    assert_eq!(class(&morpho.id), LevelClass::Secondary);
    assert_eq!(class(&audio.id), LevelClass::Primary);
    assert_eq!(class(&transcription.id), LevelClass::Primary);
    assert!(matches!(
        archive.classify_level(&c, "ghost"),
        Err(Error::UnknownLevel(_))
    ));
}

#[test]
fn classification_ignores_resources() {
    let (mut archive, c) = goriot_archive();
    let before = archive.classify_level(&c, "morpho").unwrap();
    archive
        .attach_resource(
            &c,
            fixture("samples/winbrill_standoff.xml").as_bytes(),
            FormatTag::StandoffMorpho,
            &["morpho".into()],
            DepositInfo::by("x"),
        )
        .unwrap();
    assert_eq!(archive.classify_level(&c, "morpho").unwrap(), before);
}

#[test]
fn closures() {
    let mut archive = Archive::in_memory();
    let c = goriot_corpus(&mut archive);
    for (id, kind, cov, deps) in [
        (
            "seg",
            LevelKind::Segmentation,
            CoverageContribution::Full,
            vec![],
        ),
        (
            "morpho",
            LevelKind::Morphosyntax,
            CoverageContribution::None,
            vec!["seg"],
        ),
        (
            "syntax",
            LevelKind::Syntax,
            CoverageContribution::None,
            vec!["morpho"],
        ),
        (
            "ref",
            LevelKind::Reference,
            CoverageContribution::None,
            vec!["syntax"],
        ),
        (
            "lex",
            LevelKind::Other("lexicon".into()),
            CoverageContribution::None,
            vec!["seg"],
        ),
        (
            "top",
            LevelKind::Other("merge".into()),
            CoverageContribution::None,
            vec!["morpho", "lex"],
        ),
    ] {
        let mut d = level(kind, cov, id);
        for dep in deps {
            d = d.depends_on(dep, "");
        }
        archive.add_level(&c, d).unwrap();
    }
    assert_eq!(
        archive.dependency_closure("ref").unwrap(),
        ["ref", "syntax", "morpho", "seg"]
    );
    assert_eq!(archive.dependency_closure("seg").unwrap(), ["seg"]);
    assert_eq!(
        archive.dependency_closure("top").unwrap(),
        ["top", "lex", "morpho", "seg"]
    );
    for id in ["seg", "morpho", "syntax", "ref", "lex", "top"] {
        let closure = archive.dependency_closure(id).unwrap();
        let last = closure.last().unwrap();
        assert_eq!(
            archive.classify_level(&c, last).unwrap(),
            LevelClass::Primary
        );
    }
}

#[test]
fn empty_corpus_is_valid() {
    let mut archive = Archive::in_memory();
    let c = goriot_corpus(&mut archive);
    let report = archive.validate_archive(&c).unwrap();
    assert!(report.is_valid());
    assert!(matches!(
        archive.validate_archive("c9999"),
        Err(Error::UnknownCorpus(_))
    ));
}

#[test]
fn full_levels_share_the_corpus_fingerprint() {
    let (mut archive, c) = goriot_archive();
    deposit(
        &mut archive,
        &c,
        level(
            LevelKind::Morphosyntax,
            CoverageContribution::Full,
            "cordial",
        ),
        FormatTag::TabularMorpho,
        &fixture("goriot/morpho_cordial.tsv"),
    );
    deposit(
        &mut archive,
        &c,
        level(LevelKind::Reference, CoverageContribution::Full, "coref"),
        FormatTag::InlineCoref,
        &fixture("samples/coref_inline.xml"),
    );
    let report = archive.validate_archive(&c).unwrap();
    assert!(report.is_valid(), "{report:?}");
    assert!(archive.corpus(&c).unwrap().coverage_fingerprint.is_some());

    deposit(
        &mut archive,
        &c,
        level(LevelKind::Morphosyntax, CoverageContribution::Full, "short"),
        FormatTag::TabularMorpho,
        &fixture("samples/cordial_tabular.tsv"),
    );
    let report = archive.validate_archive(&c).unwrap();
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].kind, ViolationKind::CoverageMismatch);
    assert_eq!(report.violations[0].subject, "short");
}

#[test]
fn declared_coverage_is_checked_against_payload() {
    let mut archive = Archive::in_memory();
    let c = goriot_corpus(&mut archive);
    deposit(
        &mut archive,
        &c,
        level(LevelKind::Segmentation, CoverageContribution::None, "seg"),
        FormatTag::Segmentation,
        &fixture("samples/segmentation_short.xml"),
    );
    let report = archive.validate_archive(&c).unwrap();
    assert!(report.has(ViolationKind::CoverageDeclaration));
    assert!(report.has(ViolationKind::PointerOnlyWithoutDependency));
}

#[test]
fn validation_is_idempotent() {
    let (archive, c) = goriot_archive();
    let a = archive.validate_archive(&c).unwrap();
    let b = archive.validate_archive(&c).unwrap();
    assert_eq!(a, b);
    assert!(a.is_valid(), "{a:?}");
}

#[test]
fn out_of_band_damage_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let c;
    {
        let mut archive = Archive::init(dir.path()).unwrap();
        c = goriot_corpus(&mut archive);
        deposit(
            &mut archive,
            &c,
            level(LevelKind::Segmentation, CoverageContribution::Full, "seg"),
            FormatTag::Segmentation,
            &fixture("goriot/segmentation.xml"),
        );
        deposit(
            &mut archive,
            &c,
            level(
                LevelKind::Morphosyntax,
                CoverageContribution::None,
                "morpho",
            )
            .depends_on("seg", "anchoring"),
            FormatTag::StandoffMorpho,
            &fixture("goriot/morpho_winbrill.xml"),
        );
    }
    let manifest_path = dir.path().join("corpora").join(&c).join("manifest");
    let manifest = std::fs::read_to_string(&manifest_path).unwrap();
    assert!(manifest.starts_with("archive-format: 1\n"));

    // Delete the segmentation level behind the archive's back.
    let (head, body) = manifest.split_once('\n').unwrap();
    let mut json: serde_json::Value = serde_json::from_str(body).unwrap();
    json["levels"].as_object_mut().unwrap().remove("seg");
    for r in json["resources"].as_object_mut().unwrap().values_mut() {
        if r["level_ids"] == serde_json::json!(["seg"]) {
            r["level_ids"] = serde_json::json!([]);
        }
    }
    std::fs::write(&manifest_path, format!("{head}\n{json}")).unwrap();

    let archive = Archive::open(dir.path()).unwrap();
    let report = archive.validate_archive(&c).unwrap();
    assert!(report.has(ViolationKind::DanglingDependency), "{report:?}");
    assert!(report.has(ViolationKind::NoLevel), "{report:?}");
    assert!(matches!(
        archive.dependency_closure("morpho"),
        Err(Error::UnknownDependency { .. })
    ));
}

#[test]
fn reopen_preserves_state() {
    let dir = tempfile::tempdir().unwrap();
    let c = {
        let mut archive = Archive::init(dir.path()).unwrap();
        let c = goriot_corpus(&mut archive);
        deposit(
            &mut archive,
            &c,
            level(LevelKind::Segmentation, CoverageContribution::Full, "seg"),
            FormatTag::Segmentation,
            &fixture("goriot/segmentation.xml"),
        );
        c
    };
    let archive = Archive::open(dir.path()).unwrap();
    assert_eq!(archive.corpus(&c).unwrap().title, "Père Goriot");
    assert_eq!(archive.reconstruct_coverage("seg").unwrap().len(), 76);
    let resource = archive.level_resources("seg").unwrap()[0].clone();
    assert!(dir.path().join(&resource.payload_path).is_file());
    assert!(dir
        .path()
        .join(format!("corpora/{c}/resources/{}.header", resource.id))
        .is_file());
    assert!(matches!(
        Archive::open(dir.path().join("missing")),
        Err(Error::NotInitialized(_))
    ));
}

#[test]
fn undeclared_dependency_cycle_in_manifest_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let c = {
        let mut archive = Archive::init(dir.path()).unwrap();
        let c = goriot_corpus(&mut archive);
        archive
            .add_level(
                &c,
                level(LevelKind::Syntax, CoverageContribution::None, "a"),
            )
            .unwrap();
        archive
            .add_level(
                &c,
                level(LevelKind::Reference, CoverageContribution::None, "b").depends_on("a", ""),
            )
            .unwrap();
        c
    };
    let path = dir.path().join("corpora").join(&c).join("manifest");
    let text = std::fs::read_to_string(&path).unwrap();
    let (head, body) = text.split_once('\n').unwrap();
    let mut json: serde_json::Value = serde_json::from_str(body).unwrap();
    json["levels"]["a"]["depends_on"] = serde_json::json!([{"level_id": "b", "purpose": ""}]);
    std::fs::write(&path, format!("{head}\n{json}")).unwrap();
    let archive = Archive::open(dir.path()).unwrap();
    let report = archive.validate_archive(&c).unwrap();
    let cycles: Vec<_> = report
        .violations
        .iter()
        .filter(|v| v.kind == ViolationKind::DependencyCycle)
        .collect();
    assert_eq!(cycles.len(), 1, "{report:?}");
    assert!(matches!(
        archive.dependency_closure("a"),
        Err(Error::DependencyCycle(_))
    ));
}

#[test]
fn declared_metadata_survives_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut archive = Archive::init(dir.path()).unwrap();
    let mut declared = BTreeMap::new();
    declared.insert("genre".to_string(), "littéraire".to_string());
    let c = archive
        .register_corpus(CorpusDescriptor {
            title: "Père Goriot".into(),
            languages: vec!["fr".into()],
            source_description: String::new(),
            declared: declared.clone(),
        })
        .unwrap()
        .corpus
        .id;
    drop(archive);
    let archive = Archive::open(dir.path()).unwrap();
    assert_eq!(archive.corpus(&c).unwrap().declared, declared);
}
