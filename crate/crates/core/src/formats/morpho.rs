use crate::error::{Error, Result};
use crate::item::AnnotationItem;
use crate::markup::{escape, parse_markup};

const STANDOFF: &str = "standoff-morpho";
const INLINE: &str = "inline-morpho";

/// Reads `<w span=".." msd=".." lemma=".."/>` elements. A whitespace-only
/// `msd` is kept as an empty value.
pub fn parse_standoff_morpho(payload: &str) -> Result<Vec<AnnotationItem>> {
    let doc = parse_markup(payload, STANDOFF)?;
    let mut items = Vec::new();
    for element in doc.elements.iter().filter(|e| e.name == "w") {
        let span = element.attr("span").ok_or(Error::MissingSpan {
            format: STANDOFF,
            line: element.line,
        })?;
        let mut item = AnnotationItem {
            span: Some(span.parse()?),
            ..Default::default()
        };
        for (key, value) in &element.attrs {
            match key.as_str() {
                "span" => {}
                "id" => item.id = Some(value.clone()),
                _ if value.trim().is_empty() => {
                    item.categories.insert(key.clone(), String::new());
                }
                _ => {
                    item.categories.insert(key.clone(), value.clone());
                }
            }
        }
        items.push(item);
    }
    Ok(items)
}

/// Emits one `<w>` per line with `span`, `msd`, `lemma` first and any other
/// categories after them in key order. Empty values are written as `" "`.
pub fn serialize_standoff_morpho(items: &[AnnotationItem]) -> Result<String> {
    let mut out = String::new();
    for (n, item) in items.iter().enumerate() {
        let span = item.span.as_ref().ok_or(Error::MissingSpan {
            format: STANDOFF,
            line: n + 1,
        })?;
        if item.get("lemma").is_none() {
            return Err(Error::parse(STANDOFF, n + 1, "item without lemma"));
        }
        let attr = |key: &str, value: &str| {
            let value = if value.is_empty() { " " } else { value };
            format!(" {key}=\"{}\"", escape(value))
        };
        out.push_str("<w");
        if let Some(id) = &item.id {
            out.push_str(&attr("id", id));
        }
        out.push_str(&attr("span", &span.to_string()));
        for key in ["msd", "lemma"] {
            if let Some(value) = item.get(key) {
                out.push_str(&attr(key, value));
            }
        }
        for (key, value) in &item.categories {
            if key != "msd" && key != "lemma" {
                out.push_str(&attr(key, value));
            }
        }
        out.push_str("/>\n");
    }
    Ok(out)
}

/// Reads `<w lemma="..">form</w>` elements that carry their own surface.
pub fn parse_inline_morpho(payload: &str) -> Result<Vec<AnnotationItem>> {
    let doc = parse_markup(payload, INLINE)?;
    let mut items = Vec::new();
    for element in doc.elements.iter().filter(|e| e.name == "w") {
        let surface = doc.inner_text(element).trim().to_string();
        if surface.is_empty() {
            return Err(Error::parse(
                INLINE,
                element.line,
                "<w> without surface form",
            ));
        }
        let mut item = AnnotationItem {
            surface: Some(surface),
            ..Default::default()
        };
        for (key, value) in &element.attrs {
            if key == "id" {
                item.id = Some(value.clone());
            } else {
                item.categories
                    .insert(key.clone(), value.trim().to_string());
            }
        }
        items.push(item);
    }
    Ok(items)
}
