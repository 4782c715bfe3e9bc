use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::item::{AnnotationItem, Link};
use crate::markup::{parse_markup, MarkupDoc};
use crate::standoff::{align_inline, Segmentation, SplitTable};

const FORMAT: &str = "inline-coref";
pub const DEFAULT_LINK_TYPE: &str = "coref";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorefAnnotation {
    pub doc: MarkupDoc,
    /// One item per `<coref>`; a `ref` attribute becomes a link on it.
    pub markables: Vec<AnnotationItem>,
}

impl CorefAnnotation {
    pub fn links(&self) -> impl Iterator<Item = (&str, &Link)> {
        self.markables.iter().flat_map(|m| {
            let source = m.id.as_deref().unwrap_or_default();
            m.links.iter().map(move |l| (source, l))
        })
    }
}

pub fn parse_inline_coref(payload: &str) -> Result<CorefAnnotation> {
    let doc = parse_markup(payload, FORMAT)?;
    let mut markables = Vec::new();
    let mut ids = HashSet::new();
    for element in doc.elements.iter().filter(|e| e.name == "coref") {
        let id = element
            .attr("id")
            .ok_or_else(|| Error::parse(FORMAT, element.line, "<coref> without id"))?;
        if !ids.insert(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        let mut item = AnnotationItem {
            surface: Some(doc.inner_text(element).trim().to_string()),
            ..AnnotationItem::with_id(id).category("element", "coref")
        };
        for (key, value) in &element.attrs {
            if !matches!(key.as_str(), "id" | "ref" | "type") {
                item.categories.insert(key.clone(), value.clone());
            }
        }
        if let Some(target) = element.attr("ref") {
            let link_type = element.attr("type").unwrap_or(DEFAULT_LINK_TYPE);
            item.links
                .push(Link::new(link_type, vec![target.to_string()]));
        }
        markables.push(item);
    }
    for (_, link) in markables
        .iter()
        .flat_map(|m| m.links.iter().map(move |l| (m, l)))
    {
        for target in &link.targets {
            if !ids.contains(target.as_str()) {
                return Err(Error::UnknownTarget(target.clone()));
            }
        }
    }
    Ok(CorefAnnotation { doc, markables })
}

/// Re-anchors inline coreference markables onto `seg`: each markable keeps its
/// id, categories and links, gains a span and loses its surface.
pub fn coref_to_standoff(
    payload: &str,
    seg: &Segmentation,
    table: &SplitTable,
) -> Result<Vec<AnnotationItem>> {
    let coref = parse_inline_coref(payload)?;
    let aligned = align_inline(&coref.doc, seg, table)?;
    let mut out = Vec::with_capacity(coref.markables.len());
    for markable in &coref.markables {
        let id = markable.id.as_deref();
        let span = aligned
            .iter()
            .find(|a| a.element.name == "coref" && a.element.attr("id") == id)
            .map(|a| a.span.clone());
        let mut item = markable.clone();
        item.surface = None;
        item.span = span;
        out.push(item);
    }
    Ok(out)
}
