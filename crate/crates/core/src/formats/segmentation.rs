use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::item::AnnotationItem;
use crate::markup::{escape, parse_markup};
use crate::standoff::{unit_number, ReferenceUnit};

const FORMAT: &str = "segmentation";

/// Reads one `<word id="word_N">FORM</word>` element per reference unit.
pub fn parse_segmentation(payload: &str) -> Result<Vec<ReferenceUnit>> {
    let doc = parse_markup(payload, FORMAT)?;
    let mut covered = 0;
    let mut seen = HashSet::new();
    let mut units = Vec::with_capacity(doc.elements.len());
    for element in &doc.elements {
        if element.name != "word" {
            return Err(Error::parse(
                FORMAT,
                element.line,
                format!("unexpected element <{}>", element.name),
            ));
        }
        let stray = doc.slice(covered, element.start);
        if !stray.trim().is_empty() {
            return Err(Error::parse(
                FORMAT,
                element.line,
                format!("text outside <word>: `{}`", stray.trim()),
            ));
        }
        covered = element.end;
        let id = element
            .attr("id")
            .ok_or_else(|| Error::parse(FORMAT, element.line, "<word> without id"))?;
        if unit_number(id).is_none() {
            return Err(Error::parse(
                FORMAT,
                element.line,
                format!("id `{id}` is not of the form word_<n>"),
            ));
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::parse(
                FORMAT,
                element.line,
                format!("duplicate id `{id}`"),
            ));
        }
        let form = doc.inner_text(element);
        if form.is_empty() || form.trim() != form {
            return Err(Error::parse(
                FORMAT,
                element.line,
                format!("form `{form}` is empty or padded with whitespace"),
            ));
        }
        units.push(ReferenceUnit {
            id: id.to_string(),
            form,
            index: units.len(),
        });
    }
    if !doc
        .slice(covered, doc.text.chars().count())
        .trim()
        .is_empty()
    {
        return Err(Error::parse(
            FORMAT,
            payload.lines().count(),
            "trailing text outside <word>",
        ));
    }
    Ok(units)
}

pub fn serialize_segmentation(units: &[ReferenceUnit]) -> String {
    let mut out = String::new();
    for unit in units {
        out.push_str(&format!(
            "<word id=\"{}\">{}</word>\n",
            escape(&unit.id),
            escape(&unit.form)
        ));
    }
    out
}

pub fn segmentation_items(units: &[ReferenceUnit]) -> Vec<AnnotationItem> {
    units
        .iter()
        .map(|u| AnnotationItem {
            surface: Some(u.form.clone()),
            ..AnnotationItem::with_id(&u.id).category("element", "word")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHORT_SEGMENTATION: &str = "<word id=\"word_27\">Madame</word>\n<word id=\"word_28\">Vauquer</word>\n<word id=\"word_29\">,</word>\n<word id=\"word_30\">née</word>\n<word id=\"word_31\">De</word>\n";

    #[test]
    fn short_segmentation() {
        let units = parse_segmentation(SHORT_SEGMENTATION).unwrap();
        assert_eq!(units.len(), 5);
        assert_eq!(units[0].id, "word_27");
        assert_eq!(units[2].form, ",");
        assert_eq!(units[4].index, 4);
    }

    #[test]
    fn emit_is_bit_exact() {
        let units = parse_segmentation(SHORT_SEGMENTATION).unwrap();
        assert_eq!(serialize_segmentation(&units), SHORT_SEGMENTATION);
    }

    #[test]
    fn escaping() {
        let units = vec![ReferenceUnit::new(1, "a&b"), ReferenceUnit::new(2, "<")];
        let text = serialize_segmentation(&units);
        assert_eq!(parse_segmentation(&text).unwrap(), units);
    }

    #[test]
    fn rejects_bad_units() {
        assert!(parse_segmentation("<word>x</word>").is_err());
        assert!(parse_segmentation("<word id=\"w1\">x</word>").is_err());
        assert!(parse_segmentation("<word id=\"word_1\"> x</word>").is_err());
        assert!(
            parse_segmentation("<word id=\"word_1\">x</word><word id=\"word_1\">y</word>").is_err()
        );
        assert!(parse_segmentation("<word id=\"word_1\">x</word> stray").is_err());
        assert!(parse_segmentation("<w id=\"word_1\">x</w>").is_err());
    }
}
