//! Re-synchronizes inline markup with an existing segmentation: each element
//! whose boundaries fall on reference-unit boundaries becomes a span.

use super::segment::SplitTable;
use super::span::{Segmentation, SpanExpr};
use crate::error::{Error, Result};
use crate::markup::{Element, MarkupDoc};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedElement {
    pub element: Element,
    pub span: SpanExpr,
    /// Positions into the segmentation's units.
    pub positions: Vec<usize>,
}

/// Character extent of every unit of `seg` inside `text`. Units expanded
/// from one contraction share the contraction's extent.
pub fn unit_extents(
    text: &str,
    seg: &Segmentation,
    table: &SplitTable,
) -> Result<Vec<(usize, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let units = seg.units();
    let mut keys: Vec<&str> = table.entries().map(|(k, _)| k).collect();
    keys.sort_by_key(|k| std::cmp::Reverse(k.chars().count()));

    let mut extents = Vec::with_capacity(units.len());
    let mut pos = 0;
    let mut j = 0;
    let skip_ws = |mut p: usize| {
        while p < chars.len() && chars[p].is_whitespace() {
            p += 1;
        }
        p
    };
    let word_at = |p: usize| -> String {
        chars[p..]
            .iter()
            .take_while(|c| !c.is_whitespace())
            .collect()
    };

    while j < units.len() {
        pos = skip_ws(pos);
        let form: Vec<char> = units[j].form.chars().collect();
        if chars[pos..].starts_with(&form) {
            extents.push((pos, pos + form.len()));
            pos += form.len();
            j += 1;
            continue;
        }
        let mut matched = false;
        for key in &keys {
            let len = key.chars().count();
            if pos + len > chars.len() {
                continue;
            }
            let found: String = chars[pos..pos + len].iter().collect();
            if found.to_lowercase() != *key {
                continue;
            }
            let Some(expansion) = table.expand(&found) else {
                continue;
            };
            let n = expansion.len();
            let fits = j + n <= units.len()
                && expansion
                    .iter()
                    .zip(&units[j..j + n])
                    .all(|(e, u)| e.to_lowercase() == u.form.to_lowercase());
            if fits {
                extents.extend(std::iter::repeat_n((pos, pos + len), n));
                pos += len;
                j += n;
                matched = true;
                break;
            }
        }
        if !matched {
            return Err(Error::TextMismatch {
                offset: pos,
                expected: units[j].form.clone(),
                found: word_at(pos),
            });
        }
    }
    pos = skip_ws(pos);
    if pos < chars.len() {
        return Err(Error::TextMismatch {
            offset: pos,
            expected: "end of segmentation".into(),
            found: word_at(pos),
        });
    }
    Ok(extents)
}

/// Aligns every element of `doc` onto `seg`. Elements that cover no unit
/// (empty or whitespace-only) are skipped.
pub fn align_inline(
    doc: &MarkupDoc,
    seg: &Segmentation,
    table: &SplitTable,
) -> Result<Vec<AlignedElement>> {
    let extents = unit_extents(&doc.text, seg, table)?;
    let ids: Vec<&str> = seg.units().iter().map(|u| u.id.as_str()).collect();
    let mut aligned = Vec::new();
    for element in &doc.elements {
        for boundary in [element.start, element.end] {
            if let Some(i) = extents
                .iter()
                .position(|&(s, e)| s < boundary && boundary < e)
            {
                return Err(Error::Misalignment {
                    element: element.label(),
                    offset: boundary,
                    unit: ids[i].to_string(),
                });
            }
        }
        let positions: Vec<usize> = extents
            .iter()
            .enumerate()
            .filter(|(_, &(s, e))| s >= element.start && e <= element.end)
            .map(|(i, _)| i)
            .collect();
        if let Some(span) = SpanExpr::from_positions(&ids, &positions) {
            aligned.push(AlignedElement {
                element: element.clone(),
                span,
                positions,
            });
        }
    }
    Ok(aligned)
}
