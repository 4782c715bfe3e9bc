//! Minimal markup reader shared by the inline codecs: strips tags into a
//! character stream and records element extents as character offsets.

use std::collections::BTreeMap;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub attrs: BTreeMap<String, String>,
    /// Character offsets into [`MarkupDoc::text`], end exclusive.
    pub start: usize,
    pub end: usize,
    pub parent: Option<usize>,
    pub line: usize,
}

impl Element {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.get(key).map(String::as_str)
    }

    /// Human-readable handle used in diagnostics: `<coref id="2">`.
    pub fn label(&self) -> String {
        match self.attr("id") {
            Some(id) => format!("<{} id=\"{id}\">", self.name),
            None => format!("<{}> (line {})", self.name, self.line),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MarkupDoc {
    pub text: String,
    /// In start-tag order.
    pub elements: Vec<Element>,
}

impl MarkupDoc {
    /// Character slice of the stripped text.
    pub fn slice(&self, start: usize, end: usize) -> String {
        self.text.chars().skip(start).take(end - start).collect()
    }

    pub fn inner_text(&self, element: &Element) -> String {
        self.slice(element.start, element.end)
    }
}

fn line_of(payload: &str, byte: usize) -> usize {
    payload.as_bytes()[..byte.min(payload.len())]
        .iter()
        .filter(|b| **b == b'\n')
        .count()
        + 1
}

fn decode_attrs(
    start: &BytesStart<'_>,
    format: &'static str,
    line: usize,
) -> Result<BTreeMap<String, String>> {
    let mut attrs = BTreeMap::new();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| Error::parse(format, line, e.to_string()))?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        let value = attr
            .unescape_value()
            .map_err(|e| Error::parse(format, line, e.to_string()))?
            .into_owned();
        attrs.insert(key, value);
    }
    Ok(attrs)
}

fn resolve_entity(name: &str) -> Option<char> {
    match name {
        "amp" => Some('&'),
        "lt" => Some('<'),
        "gt" => Some('>'),
        "quot" => Some('"'),
        "apos" => Some('\''),
        _ => {
            let code = name.strip_prefix('#')?;
            let value = match code.strip_prefix('x') {
                Some(hex) => u32::from_str_radix(hex, 16).ok()?,
                None => code.parse().ok()?,
            };
            char::from_u32(value)
        }
    }
}

/// Parses a markup fragment. Several top-level nodes are allowed, and an end
/// tag closes the innermost open element whatever its name.
pub fn parse_markup(payload: &str, format: &'static str) -> Result<MarkupDoc> {
    let mut reader = Reader::from_str(payload);
    reader.config_mut().check_end_names = false;
    let mut doc = MarkupDoc::default();
    let mut chars = 0usize;
    let mut stack: Vec<usize> = Vec::new();
    loop {
        let pos = reader.buffer_position() as usize;
        let event = reader
            .read_event()
            .map_err(|e| Error::parse(format, line_of(payload, pos), e.to_string()))?;
        match event {
            Event::Start(ref start) | Event::Empty(ref start) => {
                let line = line_of(payload, pos);
                let name = String::from_utf8_lossy(start.name().as_ref()).into_owned();
                let attrs = decode_attrs(start, format, line)?;
                doc.elements.push(Element {
                    name,
                    attrs,
                    start: chars,
                    end: chars,
                    parent: stack.last().copied(),
                    line,
                });
                if matches!(event, Event::Start(_)) {
                    stack.push(doc.elements.len() - 1);
                }
            }
            Event::End(_) => {
                let open = stack.pop().ok_or_else(|| {
                    Error::parse(
                        format,
                        line_of(payload, pos),
                        "end tag without open element",
                    )
                })?;
                doc.elements[open].end = chars;
            }
            Event::Text(text) => {
                let text = text
                    .decode()
                    .map_err(|e| Error::parse(format, line_of(payload, pos), e.to_string()))?;
                chars += text.chars().count();
                doc.text.push_str(&text);
            }
            Event::CData(data) => {
                let text = String::from_utf8_lossy(&data).into_owned();
                chars += text.chars().count();
                doc.text.push_str(&text);
            }
            Event::GeneralRef(entity) => {
                let name = String::from_utf8_lossy(&entity).into_owned();
                let c = resolve_entity(&name).ok_or_else(|| {
                    Error::parse(
                        format,
                        line_of(payload, pos),
                        format!("unknown entity `&{name};`"),
                    )
                })?;
                chars += 1;
                doc.text.push(c);
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if let Some(open) = stack.pop() {
        let element = &doc.elements[open];
        return Err(Error::parse(
            format,
            element.line,
            format!("unclosed element <{}>", element.name),
        ));
    }
    Ok(doc)
}

/// Escapes text for an attribute value or element content.
pub fn escape(s: &str) -> String {
    quick_xml::escape::escape(s).into_owned()
}
