use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::item::{AnnotationItem, Link};
use crate::markup::{parse_markup, MarkupDoc};

const FORMAT: &str = "tei-structure";

/// Elements kept as structure items; any other element is transparent.
pub const STRUCTURE_ELEMENTS: &[&str] = &["p", "seg", "div", "head", "rs", "name", "u"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureItem {
    pub element: String,
    pub attrs: BTreeMap<String, String>,
    /// Character extent in the markup-stripped text, end exclusive.
    pub start: usize,
    pub end: usize,
    pub children: Vec<StructureItem>,
}

impl StructureItem {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.get(key).map(String::as_str)
    }
}

pub(super) fn parse_structural_document(payload: &str) -> Result<(MarkupDoc, Vec<StructureItem>)> {
    let doc = parse_markup(payload, FORMAT)?;
    // Nearest kept ancestor for every element.
    let mut kept_parent: Vec<Option<usize>> = Vec::with_capacity(doc.elements.len());
    for element in &doc.elements {
        let mut parent = element.parent;
        while let Some(p) = parent {
            if STRUCTURE_ELEMENTS.contains(&doc.elements[p].name.as_str()) {
                break;
            }
            parent = doc.elements[p].parent;
        }
        kept_parent.push(parent);
    }
    let mut children: HashMap<Option<usize>, Vec<usize>> = HashMap::new();
    for (i, element) in doc.elements.iter().enumerate() {
        if STRUCTURE_ELEMENTS.contains(&element.name.as_str()) {
            children.entry(kept_parent[i]).or_default().push(i);
        }
    }
    fn build(
        i: usize,
        doc: &MarkupDoc,
        children: &HashMap<Option<usize>, Vec<usize>>,
    ) -> StructureItem {
        let element = &doc.elements[i];
        StructureItem {
            element: element.name.clone(),
            attrs: element.attrs.clone(),
            start: element.start,
            end: element.end,
            children: children
                .get(&Some(i))
                .map(|c| c.iter().map(|&c| build(c, doc, children)).collect())
                .unwrap_or_default(),
        }
    }
    let roots = children
        .get(&None)
        .map(|r| r.iter().map(|&i| build(i, &doc, &children)).collect())
        .unwrap_or_default();
    Ok((doc, roots))
}

/// Structure tree of a TEI-style inline document.
pub fn parse_structural_inline(payload: &str) -> Result<Vec<StructureItem>> {
    parse_structural_document(payload).map(|(_, roots)| roots)
}

/// Pre-order flattening. Items without an `id` attribute get `s_<n>`; each
/// child carries a `parent` link.
pub fn flatten_structure(roots: &[StructureItem], doc: &MarkupDoc) -> Vec<AnnotationItem> {
    fn walk(
        node: &StructureItem,
        parent: Option<&str>,
        doc: &MarkupDoc,
        out: &mut Vec<AnnotationItem>,
    ) {
        let id = node
            .attr("id")
            .map(str::to_string)
            .unwrap_or_else(|| format!("s_{}", out.len() + 1));
        let mut item = AnnotationItem {
            surface: Some(doc.slice(node.start, node.end).trim().to_string()),
            ..AnnotationItem::with_id(&id).category("element", &node.element)
        };
        for (key, value) in &node.attrs {
            item.categories.insert(key.clone(), value.clone());
        }
        if let Some(parent) = parent {
            item.links
                .push(Link::new("parent", vec![parent.to_string()]));
        }
        out.push(item);
        for child in &node.children {
            walk(child, Some(&id), doc, out);
        }
    }
    let mut out = Vec::new();
    for root in roots {
        walk(root, None, doc, &mut out);
    }
    out
}
