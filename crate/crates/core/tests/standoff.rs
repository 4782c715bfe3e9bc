//! Segmentation, span resolution, coverage reconstruction and alignment over
//! the Goriot fixtures.

mod common;

use common::{deposit, fixture, goriot_archive, goriot_corpus};
use corpus_forge::formats::*;
use corpus_forge::markup::parse_markup;
use corpus_forge::standoff::*;
use corpus_forge::{
    Archive, CoverageContribution, Error, LevelDescriptor, LevelKind, ViolationKind,
};

/// SHA-256 over the newline-joined forms of `goriot/segmentation.xml`,
/// computed outside this crate.
const GORIOT_FINGERPRINT: &str = "2d05e44c8d77ffc6be399a1f8b922f9c07cadfb044551192f766dd7647319713";
/// Same, with the first form lowercased.
const GORIOT_FLIPPED_FINGERPRINT: &str =
    "13cdd6f66726914fe00525642a034b97d3d2fb28614229ebd19a657b4967e013";

fn goriot_segmentation() -> Segmentation {
    let units = parse_segmentation(&fixture("goriot/segmentation.xml")).unwrap();
    Segmentation::new("seg", units)
}

#[test]
fn segmentation_examples() {
    let table = SplitTable::default();
    let forms = |t: &str| -> Vec<String> {
        segment_text(t, &table)
            .into_iter()
            .map(|u| u.form)
            .collect()
    };
    assert_eq!(forms("au château"), ["à", "le", "château"]);
    assert_eq!(forms("Madame Vauquer,"), ["Madame", "Vauquer", ","]);
    assert!(forms("").is_empty());
    let ids: Vec<_> = segment_text("au château", &table)
        .into_iter()
        .map(|u| u.id)
        .collect();
    assert_eq!(ids, ["word_1", "word_2", "word_3"]);
}

#[test]
fn excerpt_segments_like_the_fixture() {
    let units = segment_text(&fixture("goriot/excerpt.txt"), &SplitTable::default());
    let expected = goriot_segmentation();
    let got: Vec<_> = units.iter().map(|u| u.form.as_str()).collect();
    assert_eq!(got, expected.forms());
    assert_eq!(units.len(), 76);
}

#[test]
fn excerpt_fingerprint_matches_oracle() {
    let tokens = tokenize(&fixture("goriot/excerpt.txt"), &SplitTable::default());
    assert_eq!(coverage_fingerprint(&tokens).as_str(), GORIOT_FINGERPRINT);
    let mut flipped = tokens.clone();
    flipped[0] = "madame".into();
    assert_eq!(
        coverage_fingerprint(&flipped).as_str(),
        GORIOT_FLIPPED_FINGERPRINT
    );
}

#[test]
fn resolve_span_examples() {
    let seg = goriot_segmentation();
    let forms = |e: &str| -> Vec<String> {
        resolve_span(&e.parse().unwrap(), &seg)
            .unwrap()
            .into_iter()
            .map(|u| u.form.clone())
            .collect()
    };
    assert_eq!(forms("word_27"), ["Madame"]);
    assert_eq!(forms("word_27..word_29"), ["Madame", "Vauquer", ","]);
    assert_eq!(
        forms("word_29, word_27..word_28"),
        ["Madame", "Vauquer", ","]
    );
    assert!(matches!(
        resolve_span(&"word_9999".parse().unwrap(), &seg),
        Err(Error::DanglingPointer { id, .. }) if id == "word_9999"
    ));
    assert!(matches!(
        "word_29..word_27".parse::<SpanExpr>(),
        Err(Error::ReversedRange { .. })
    ));
}

#[test]
fn morpho_coverage_equals_segmented_excerpt() {
    let (archive, _) = goriot_archive();
    let tokens = archive.reconstruct_coverage("morpho").unwrap();
    assert_eq!(&tokens[..5], ["Madame", "Vauquer", ",", "née", "De"]);
    let direct = tokenize(&fixture("goriot/excerpt.txt"), &SplitTable::default());
    assert_eq!(coverage_fingerprint(&tokens), coverage_fingerprint(&direct));
    assert_eq!(
        archive.reconstruct_coverage("seg").unwrap(),
        goriot_segmentation().forms()
    );
}

#[test]
fn partial_morpho_covers_referenced_units_only() {
    let (mut archive, corpus) = goriot_archive();
    deposit(
        &mut archive,
        &corpus,
        LevelDescriptor::new(LevelKind::Morphosyntax, CoverageContribution::None)
            .with_id("winbrill")
            .depends_on("seg", "anchoring"),
        FormatTag::StandoffMorpho,
        &fixture("samples/winbrill_standoff.xml"),
    );
    let tokens = archive.reconstruct_coverage("winbrill").unwrap();
    let seg = goriot_segmentation();
    assert_eq!(tokens, seg.forms()[..9]);
}

#[test]
fn corrupted_span_is_reported() {
    let text = fixture("goriot/morpho_winbrill.xml").replacen("word_40", "word_4000", 1);
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
            .depends_on("seg", "anchoring"),
        FormatTag::StandoffMorpho,
        &text,
    );
    let report = archive.validate_archive(&corpus).unwrap();
    let dangling: Vec<_> = report
        .violations
        .iter()
        .filter(|v| v.kind == ViolationKind::DanglingPointer)
        .collect();
    assert_eq!(dangling.len(), 1, "{report:?}");
    assert_eq!(dangling[0].subject, "morpho");
    assert!(dangling[0].message.contains("word_4000"));
    assert!(matches!(
        archive.reconstruct_coverage("morpho"),
        Err(Error::DanglingPointer { id, .. }) if id == "word_4000"
    ));
}

#[test]
fn pointer_chain_without_forms_has_no_anchor() {
    let mut archive = Archive::in_memory();
    let corpus = goriot_corpus(&mut archive);
    deposit(
        &mut archive,
        &corpus,
        LevelDescriptor::new(LevelKind::Morphosyntax, CoverageContribution::None).with_id("a"),
        FormatTag::StandoffMorpho,
        "<w span=\"word_1\" msd=\"X\" lemma=\"x\"/>\n",
    );
    deposit(
        &mut archive,
        &corpus,
        LevelDescriptor::new(LevelKind::Other("chunk".into()), CoverageContribution::None)
            .with_id("b")
            .depends_on("a", "anchoring"),
        FormatTag::StandoffGraph,
        "<item span=\"word_1\"><cat name=\"chunk\" value=\"np\"/></item>\n",
    );
    assert!(matches!(
        archive.reconstruct_coverage("b"),
        Err(Error::NoPrimaryAnchor(_))
    ));
    let report = archive.validate_archive(&corpus).unwrap();
    assert!(report.has(ViolationKind::NoPrimaryAnchor), "{report:?}");
    assert!(report.has(ViolationKind::PointerOnlyWithoutDependency));
}

#[test]
fn coref_markables_align() {
    let seg = goriot_segmentation();
    let table = SplitTable::default();
    let payload = fixture("samples/coref_inline.xml");
    let items = coref_to_standoff(&payload, &seg, &table).unwrap();
    assert_eq!(items.len(), 2);
    let spans: Vec<_> = items
        .iter()
        .map(|i| i.span.as_ref().unwrap().to_string())
        .collect();
    assert_eq!(spans, ["word_47..word_49", "word_63..word_64"]);
    let forms: Vec<_> = resolve_span(items[0].span.as_ref().unwrap(), &seg)
        .unwrap()
        .into_iter()
        .map(|u| u.form.as_str())
        .collect();
    assert_eq!(forms, ["une", "pension", "bourgeoise"]);
    assert_eq!(items[1].links[0].link_type, "ident");
    assert_eq!(items[1].links[0].targets, ["1"]);
}

#[test]
fn mid_token_element_rejected_with_offset() {
    let seg = goriot_segmentation();
    let text = fixture("goriot/excerpt.txt");
    let bad = text.replacen(
        "Madame Vauquer",
        "Madame Vau<coref id=\"9\">quer</coref>",
        1,
    );
    let doc = parse_markup(&bad, "inline-coref").unwrap();
    match align_inline(&doc, &seg, &SplitTable::default()) {
        Err(Error::Misalignment {
            element,
            offset,
            unit,
        }) => {
            assert_eq!(element, "<coref id=\"9\">");
            assert_eq!(offset, 10);
            assert_eq!(unit, "word_28");
        }
        other => panic!("expected misalignment, got {other:?}"),
    }
}

#[test]
fn alignment_round_trip_through_archive() {
    let table = SplitTable::default();
    let seg = goriot_segmentation();
    let payload = fixture("samples/coref_inline.xml");
    let stripped = parse_inline_coref(&payload).unwrap().doc.text;
    let wrapped = format!("<coref id=\"doc\">{payload}</coref>");
    let items = coref_to_standoff(&wrapped, &seg, &table).unwrap();
    assert_eq!(
        items[0].span.as_ref().unwrap().to_string(),
        "word_27..word_102"
    );
    let serialized = serialize_standoff_graph(&items);

    let (mut archive, corpus) = goriot_archive();
    deposit(
        &mut archive,
        &corpus,
        LevelDescriptor::new(LevelKind::Reference, CoverageContribution::None)
            .with_id("coref")
            .depends_on("seg", "anchoring"),
        FormatTag::StandoffGraph,
        &serialized,
    );
    let rebuilt = archive.reconstruct_coverage("coref").unwrap();
    assert_eq!(rebuilt, tokenize(&stripped, &table));
    assert_eq!(rebuilt.join(" "), tokenize(&stripped, &table).join(" "));
    assert!(archive.validate_archive(&corpus).unwrap().is_valid());
}

#[test]
fn tabular_alignment_positions() {
    let seg = goriot_segmentation();
    let table = SplitTable::default();
    let items = parse_tabular_morpho(&fixture("goriot/morpho_cordial.tsv")).unwrap();
    let standoff = convert_tabular_to_standoff(&items, &seg, &table).unwrap();
    assert_eq!(standoff[0].span.as_ref().unwrap().to_string(), "word_27");
    assert!(standoff
        .iter()
        .all(|i| i.surface.is_none() && i.get("form").is_none()));

    let mut units = seg.units().to_vec();
    units.remove(3);
    let broken = Segmentation::new("seg", units);
    assert!(matches!(
        convert_tabular_to_standoff(&items, &broken, &table),
        Err(Error::Unalignable {
            token_index: 3,
            unit_index: 3,
            ..
        })
    ));
}
