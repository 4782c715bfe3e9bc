//! Codecs for the concrete annotation representations an archive accepts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::standoff::{tokenize, LevelContent, SplitTable};

mod coref;
mod graph;
mod morpho;
mod referential;
mod segmentation;
mod structure;
mod syntax;
mod tabular;

pub use coref::{coref_to_standoff, parse_inline_coref, CorefAnnotation};
pub use graph::{parse_standoff_graph, serialize_standoff_graph};
pub use morpho::{parse_inline_morpho, parse_standoff_morpho, serialize_standoff_morpho};
pub use referential::{parse_referential_standoff, ReferentialAnnotation};
pub use segmentation::{parse_segmentation, segmentation_items, serialize_segmentation};
pub use structure::{flatten_structure, parse_structural_inline, StructureItem};
pub use syntax::{flatten_constituents, parse_syntax_constituency, Constituent};
pub use tabular::{convert_tabular_to_standoff, parse_tabular_morpho};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatTag {
    /// `<word id="word_N">FORM</word>` per unit.
    Segmentation,
    /// Five tab-separated columns: index, form, lemma, coarse tag, fine tag.
    TabularMorpho,
    /// `<w span=".." msd=".." lemma=".."/>` pointing at reference units.
    StandoffMorpho,
    /// `<w lemma="..">form</w>` carrying its own forms.
    InlineMorpho,
    /// `=`-nested constituent lines, `function:form(flags)<TAB>surface`.
    SyntaxTree,
    /// Running text with `<coref id ref type>` markables.
    InlineCoref,
    /// `referentialMarkable` elements plus `referentialLink`s, optionally in `<alt>`.
    Referential,
    /// Running text with TEI-style `p`, `seg`, `div`, `head`, `rs`, `name`.
    TeiStructure,
    /// Generic stand-off annotation graph (`<item>`, `<cat>`, `<link>`).
    StandoffGraph,
    /// Raw UTF-8 text.
    PlainText,
    /// Opaque binary signal; never parsed.
    Audio,
}

impl FormatTag {
    pub const ALL: [FormatTag; 11] = [
        FormatTag::Segmentation,
        FormatTag::TabularMorpho,
        FormatTag::StandoffMorpho,
        FormatTag::InlineMorpho,
        FormatTag::SyntaxTree,
        FormatTag::InlineCoref,
        FormatTag::Referential,
        FormatTag::TeiStructure,
        FormatTag::StandoffGraph,
        FormatTag::PlainText,
        FormatTag::Audio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormatTag::Segmentation => "segmentation",
            FormatTag::TabularMorpho => "tabular-morpho",
            FormatTag::StandoffMorpho => "standoff-morpho",
            FormatTag::InlineMorpho => "inline-morpho",
            FormatTag::SyntaxTree => "syntax-tree",
            FormatTag::InlineCoref => "inline-coref",
            FormatTag::Referential => "referential",
            FormatTag::TeiStructure => "tei-structure",
            FormatTag::StandoffGraph => "standoff-graph",
            FormatTag::PlainText => "plain-text",
            FormatTag::Audio => "audio",
        }
    }

    /// Payloads of this format only point at other levels.
    pub fn is_pointer_only(self) -> bool {
        matches!(self, FormatTag::StandoffMorpho | FormatTag::StandoffGraph)
    }

    /// Payloads of this format interleave annotation with the text.
    pub fn is_inline(self) -> bool {
        matches!(
            self,
            FormatTag::InlineMorpho
                | FormatTag::InlineCoref
                | FormatTag::TeiStructure
                | FormatTag::SyntaxTree
        )
    }

    pub fn extension(self) -> &'static str {
        match self {
            FormatTag::TabularMorpho => "tsv",
            FormatTag::SyntaxTree | FormatTag::PlainText => "txt",
            FormatTag::Audio => "bin",
            _ => "xml",
        }
    }
}

impl fmt::Display for FormatTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormatTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormatTag::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFormat(s.to_string()))
    }
}

fn utf8(payload: &[u8], format: FormatTag) -> Result<&str> {
    std::str::from_utf8(payload).map_err(|e| {
        let line = payload[..e.valid_up_to()]
            .iter()
            .filter(|b| **b == b'\n')
            .count()
            + 1;
        Error::parse(format.name(), line, "payload is not valid UTF-8")
    })
}

/// Parses a payload into level content: annotation items plus, for
/// form-carrying formats, the surface token stream.
pub fn parse_payload(
    format: FormatTag,
    payload: &[u8],
    table: &SplitTable,
) -> Result<LevelContent> {
    if format == FormatTag::Audio {
        return Ok(LevelContent::default());
    }
    let text = utf8(payload, format)?;
    let content = match format {
        FormatTag::Segmentation => {
            let units = parse_segmentation(text)?;
            let tokens = units.iter().map(|u| u.form.clone()).collect();
            LevelContent {
                items: segmentation_items(&units),
                tokens: Some(tokens),
            }
        }
        FormatTag::TabularMorpho => {
            let items = parse_tabular_morpho(text)?;
            let tokens = items.iter().filter_map(|i| i.surface.clone()).collect();
            LevelContent {
                items,
                tokens: Some(tokens),
            }
        }
        FormatTag::StandoffMorpho => LevelContent {
            items: parse_standoff_morpho(text)?,
            tokens: None,
        },
        FormatTag::InlineMorpho => {
            let items = parse_inline_morpho(text)?;
            let surfaces: Vec<&str> = items.iter().filter_map(|i| i.surface.as_deref()).collect();
            let tokens = tokenize(&surfaces.join(" "), table);
            LevelContent {
                items,
                tokens: Some(tokens),
            }
        }
        FormatTag::SyntaxTree => {
            let roots = parse_syntax_constituency(text)?;
            let items = flatten_constituents(&roots);
            let tokens = items
                .iter()
                .filter_map(|i| i.surface.as_deref())
                .flat_map(|s| s.split('_'))
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            LevelContent {
                items,
                tokens: Some(tokens),
            }
        }
        FormatTag::InlineCoref => {
            let coref = parse_inline_coref(text)?;
            LevelContent {
                tokens: Some(tokenize(&coref.doc.text, table)),
                items: coref.markables,
            }
        }
        FormatTag::Referential => {
            let referential = parse_referential_standoff(text)?;
            LevelContent {
                tokens: Some(tokenize(&referential.doc.text, table)),
                items: referential.markables,
            }
        }
        FormatTag::TeiStructure => {
            let (doc, roots) = structure::parse_structural_document(text)?;
            LevelContent {
                items: flatten_structure(&roots, &doc),
                tokens: Some(tokenize(&doc.text, table)),
            }
        }
        FormatTag::StandoffGraph => LevelContent {
            items: parse_standoff_graph(text)?,
            tokens: None,
        },
        FormatTag::PlainText => LevelContent {
            items: Vec::new(),
            tokens: Some(tokenize(text, table)),
        },
        FormatTag::Audio => unreachable!(),
    };
    Ok(content)
}
