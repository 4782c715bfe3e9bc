//! Generic stand-off serialization of an annotation graph:
//!
//! ```text
//! <item id="2" span="word_64..word_65">
//!   <cat name="element" value="coref"/>
//!   <link type="ident" targets="1"/>
//! </item>
//! ```

use crate::error::{Error, Result};
use crate::item::{AnnotationItem, Link};
use crate::markup::{escape, parse_markup};

const FORMAT: &str = "standoff-graph";

pub fn serialize_standoff_graph(items: &[AnnotationItem]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str("<item");
        if let Some(id) = &item.id {
            out.push_str(&format!(" id=\"{}\"", escape(id)));
        }
        if let Some(span) = &item.span {
            out.push_str(&format!(" span=\"{}\"", escape(&span.to_string())));
        }
        if let Some(surface) = &item.surface {
            out.push_str(&format!(" surface=\"{}\"", escape(surface)));
        }
        if item.categories.is_empty() && item.links.is_empty() {
            out.push_str("/>\n");
            continue;
        }
        out.push_str(">\n");
        for (name, value) in &item.categories {
            out.push_str(&format!(
                "  <cat name=\"{}\" value=\"{}\"/>\n",
                escape(name),
                escape(value)
            ));
        }
        for link in &item.links {
            out.push_str(&format!(
                "  <link type=\"{}\" targets=\"{}\"",
                escape(&link.link_type),
                escape(&link.targets.join(","))
            ));
            if let Some(group) = &link.variant_group {
                out.push_str(&format!(" group=\"{}\"", escape(group)));
            }
            out.push_str("/>\n");
        }
        out.push_str("</item>\n");
    }
    out
}

pub fn parse_standoff_graph(payload: &str) -> Result<Vec<AnnotationItem>> {
    let doc = parse_markup(payload, FORMAT)?;
    let mut items: Vec<AnnotationItem> = Vec::new();
    let mut owners: Vec<Option<usize>> = Vec::with_capacity(doc.elements.len());
    for element in &doc.elements {
        let owner = element.parent.and_then(|p| owners[p]);
        match element.name.as_str() {
            "item" => {
                let mut item = AnnotationItem {
                    id: element.attr("id").map(str::to_string),
                    surface: element.attr("surface").map(str::to_string),
                    ..Default::default()
                };
                if let Some(span) = element.attr("span") {
                    item.span = Some(span.parse()?);
                }
                items.push(item);
                owners.push(Some(items.len() - 1));
                continue;
            }
            "cat" => {
                let owner = owner
                    .ok_or_else(|| Error::parse(FORMAT, element.line, "<cat> outside <item>"))?;
                let name = element
                    .attr("name")
                    .ok_or_else(|| Error::parse(FORMAT, element.line, "<cat> without name"))?;
                let value = element.attr("value").unwrap_or_default();
                items[owner]
                    .categories
                    .insert(name.to_string(), value.to_string());
            }
            "link" => {
                let owner = owner
                    .ok_or_else(|| Error::parse(FORMAT, element.line, "<link> outside <item>"))?;
                let link_type = element
                    .attr("type")
                    .ok_or_else(|| Error::parse(FORMAT, element.line, "<link> without type"))?;
                let targets = element
                    .attr("targets")
                    .unwrap_or_default()
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(str::to_string)
                    .collect();
                items[owner].links.push(Link {
                    link_type: link_type.to_string(),
                    targets,
                    variant_group: element.attr("group").map(str::to_string),
                });
            }
            other => {
                return Err(Error::parse(
                    FORMAT,
                    element.line,
                    format!("unexpected element <{other}>"),
                ))
            }
        }
        owners.push(owner);
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let items = vec![
            AnnotationItem {
                span: Some("word_40..word_42".parse().unwrap()),
                ..AnnotationItem::with_id("1").category("element", "coref")
            },
            AnnotationItem {
                span: Some("word_64..word_65".parse().unwrap()),
                links: vec![Link {
                    link_type: "ident".into(),
                    targets: vec!["1".into()],
                    variant_group: Some("alt_1".into()),
                }],
                ..AnnotationItem::with_id("2").category("note", "a \"quoted\" <value>")
            },
            AnnotationItem {
                surface: Some("l'homme & co".into()),
                ..Default::default()
            },
        ];
        let text = serialize_standoff_graph(&items);
        assert_eq!(parse_standoff_graph(&text).unwrap(), items);
    }

    #[test]
    fn rejects_stray_elements() {
        assert!(parse_standoff_graph("<cat name=\"a\" value=\"b\"/>").is_err());
        assert!(parse_standoff_graph("<item><w/></item>").is_err());
    }
}
