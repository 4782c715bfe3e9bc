use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::item::{AnnotationItem, Link};
use crate::markup::{parse_markup, Element, MarkupDoc};

const FORMAT: &str = "referential";
const MARKABLE: &str = "referentialMarkable";
const LINK: &str = "referentialLink";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferentialAnnotation {
    pub doc: MarkupDoc,
    /// Links are attached to their source markable.
    pub markables: Vec<AnnotationItem>,
    /// One group id per `<alt>`, in document order.
    pub variant_groups: Vec<String>,
}

impl ReferentialAnnotation {
    pub fn links(&self) -> impl Iterator<Item = (&str, &Link)> {
        self.markables.iter().flat_map(|m| {
            let source = m.id.as_deref().unwrap_or_default();
            m.links.iter().map(move |l| (source, l))
        })
    }
}

/// `id(m_1),id(m_2)` → `["m_1", "m_2"]`.
fn parse_id_list(expr: &str, line: usize) -> Result<Vec<String>> {
    let mut ids = Vec::new();
    for part in expr.split(',') {
        let part = part.trim();
        let id = part
            .strip_prefix("id(")
            .and_then(|rest| rest.strip_suffix(')'))
            .map(str::trim)
            .filter(|id| !id.is_empty() && !id.contains(['(', ')']))
            .ok_or_else(|| {
                Error::parse(FORMAT, line, format!("malformed id expression `{part}`"))
            })?;
        ids.push(id.to_string());
    }
    Ok(ids)
}

fn enclosing_alt(doc: &MarkupDoc, element: &Element) -> Option<usize> {
    let mut parent = element.parent;
    while let Some(p) = parent {
        if doc.elements[p].name == "alt" {
            return Some(p);
        }
        parent = doc.elements[p].parent;
    }
    None
}

/// Reads markables and links. Markables may be closed by their own tag or by
/// `</struct>`; links inside one `<alt>` share a variant group.
pub fn parse_referential_standoff(payload: &str) -> Result<ReferentialAnnotation> {
    let doc = parse_markup(payload, FORMAT)?;
    let mut markables = Vec::new();
    let mut ids = HashSet::new();
    for element in doc.elements.iter().filter(|e| e.name == MARKABLE) {
        let id = element
            .attr("id")
            .ok_or_else(|| Error::parse(FORMAT, element.line, "markable without id"))?;
        if !ids.insert(id.to_string()) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        let mut item = AnnotationItem {
            surface: Some(doc.inner_text(element).trim().to_string()),
            ..AnnotationItem::with_id(id).category("element", MARKABLE)
        };
        for (key, value) in &element.attrs {
            if key != "id" {
                item.categories.insert(key.clone(), value.clone());
            }
        }
        markables.push(item);
    }

    let mut groups: Vec<(usize, String)> = Vec::new();
    for (i, element) in doc
        .elements
        .iter()
        .enumerate()
        .filter(|(_, e)| e.name == "alt")
    {
        let has_link = doc
            .elements
            .iter()
            .any(|e| e.name == LINK && enclosing_alt(&doc, e) == Some(i));
        if !has_link {
            return Err(Error::parse(FORMAT, element.line, "empty <alt>"));
        }
        groups.push((i, format!("alt_{}", groups.len() + 1)));
    }

    for element in doc.elements.iter().filter(|e| e.name == LINK) {
        let source_expr = element
            .attr("referentialSource")
            .ok_or_else(|| Error::parse(FORMAT, element.line, "link without referentialSource"))?;
        let target_expr = element
            .attr("referentialTarget")
            .ok_or_else(|| Error::parse(FORMAT, element.line, "link without referentialTarget"))?;
        let sources = parse_id_list(source_expr, element.line)?;
        let [source] = sources.as_slice() else {
            return Err(Error::parse(
                FORMAT,
                element.line,
                "link must have exactly one source",
            ));
        };
        let targets = parse_id_list(target_expr, element.line)?;
        for id in std::iter::once(source).chain(&targets) {
            if !ids.contains(id) {
                return Err(Error::UnknownTarget(id.clone()));
            }
        }
        let variant_group = enclosing_alt(&doc, element).and_then(|alt| {
            groups
                .iter()
                .find(|(i, _)| *i == alt)
                .map(|(_, g)| g.clone())
        });
        let owner = markables
            .iter_mut()
            .find(|m| m.id.as_deref() == Some(source.as_str()))
            .expect("source checked above");
        owner.links.push(Link {
            link_type: LINK.to_string(),
            targets,
            variant_group,
        });
    }

    Ok(ReferentialAnnotation {
        doc,
        markables,
        variant_groups: groups.into_iter().map(|(_, g)| g).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MARKABLES: &str = "<referentialMarkable id=\"m_1\">des technologies</struct> et <referentialMarkable id=\"m_2\">une infosphère</referentialMarkable> qu'<referentialMarkable id=\"m_3\">elles</struct>\n";

    #[test]
    fn both_closers_accepted() {
        let r = parse_referential_standoff(MARKABLES).unwrap();
        let surfaces: Vec<_> = r
            .markables
            .iter()
            .map(|m| m.surface.as_deref().unwrap())
            .collect();
        assert_eq!(surfaces, ["des technologies", "une infosphère", "elles"]);
    }

    #[test]
    fn multi_target_link() {
        let payload = format!(
            "{MARKABLES}<referentialLink referentialSource=\"id(m_3)\" referentialTarget=\"id(m_1),id(m_2)\"/>"
        );
        let r = parse_referential_standoff(&payload).unwrap();
        let links: Vec<_> = r.links().collect();
        assert_eq!(links.len(), 1);
        assert_eq!(links[0].0, "m_3");
        assert_eq!(links[0].1.targets, ["m_1", "m_2"]);
        assert_eq!(links[0].1.variant_group, None);
        assert!(r.variant_groups.is_empty());
    }

    #[test]
    fn two_alts_two_groups() {
        let alt = "<alt><referentialLink referentialSource=\"id(m_3)\" referentialTarget=\"id(m_1)\"/></alt>";
        let r = parse_referential_standoff(&format!("{MARKABLES}{alt}{alt}")).unwrap();
        assert_eq!(r.variant_groups, ["alt_1", "alt_2"]);
        let groups: Vec<_> = r
            .links()
            .map(|(_, l)| l.variant_group.clone().unwrap())
            .collect();
        assert_eq!(groups, ["alt_1", "alt_2"]);
    }

    #[test]
    fn malformed_id_expression() {
        for bad in ["m_1", "id(m_1", "id()", "id(m_1),", "id(id(m_1))"] {
            let payload = format!(
                "{MARKABLES}<referentialLink referentialSource=\"id(m_3)\" referentialTarget=\"{bad}\"/>"
            );
            assert!(
                matches!(
                    parse_referential_standoff(&payload),
                    Err(Error::Parse { .. })
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn empty_alt() {
        assert!(matches!(
            parse_referential_standoff(&format!("{MARKABLES}<alt>\n</alt>")),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn unknown_markable() {
        let payload = format!(
            "{MARKABLES}<referentialLink referentialSource=\"id(m_3)\" referentialTarget=\"id(m_9)\"/>"
        );
        assert!(matches!(
            parse_referential_standoff(&payload),
            Err(Error::UnknownTarget(t)) if t == "m_9"
        ));
    }
}
