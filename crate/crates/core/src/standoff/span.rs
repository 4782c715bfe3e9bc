use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::segment::{unit_number, ReferenceUnit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpanPart {
    Single(String),
    /// Inclusive range between two ids of the same anchor level.
    Range(String, String),
}

/// A pointer into an anchor level: a list of single ids and inclusive ranges,
/// written `word_27`, `word_27..word_29` or `word_1,word_4..word_6`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanExpr {
    parts: Vec<SpanPart>,
}

impl SpanExpr {
    pub fn new(parts: Vec<SpanPart>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpan {
                expr: String::new(),
                reason: "empty span".into(),
            });
        }
        for part in &parts {
            if let SpanPart::Range(from, to) = part {
                if let (Some(a), Some(b)) = (unit_number(from), unit_number(to)) {
                    if a > b {
                        return Err(Error::ReversedRange {
                            from: from.clone(),
                            to: to.clone(),
                        });
                    }
                }
            }
        }
        Ok(SpanExpr { parts })
    }

    pub fn single(id: impl Into<String>) -> Self {
        SpanExpr {
            parts: vec![SpanPart::Single(id.into())],
        }
    }

    pub fn parts(&self) -> &[SpanPart] {
        &self.parts
    }

    /// Compacts a sorted, duplicate-free index list over `ids` into runs.
    pub fn from_positions<S: AsRef<str>>(ids: &[S], positions: &[usize]) -> Option<Self> {
        let mut parts = Vec::new();
        let mut iter = positions.iter().copied().peekable();
        while let Some(start) = iter.next() {
            let mut end = start;
            while iter.peek() == Some(&(end + 1)) {
                end = iter.next()?;
            }
            let first = ids.get(start)?.as_ref().to_string();
            if start == end {
                parts.push(SpanPart::Single(first));
            } else {
                parts.push(SpanPart::Range(first, ids.get(end)?.as_ref().to_string()));
            }
        }
        (!parts.is_empty()).then_some(SpanExpr { parts })
    }

    /// Every id named explicitly (range endpoints included).
    pub fn named_ids(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().flat_map(|p| match p {
            SpanPart::Single(id) => vec![id.as_str()],
            SpanPart::Range(a, b) => vec![a.as_str(), b.as_str()],
        })
    }
}

impl FromStr for SpanExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidSpan {
            expr: s.to_string(),
            reason: reason.to_string(),
        };
        let mut parts = Vec::new();
        for raw in s.split(|c: char| c == ',' || c.is_whitespace()) {
            if raw.is_empty() {
                continue;
            }
            match raw.split_once("..") {
                Some((from, to)) => {
                    if from.is_empty() || to.is_empty() || to.contains("..") {
                        return Err(invalid("malformed range"));
                    }
                    parts.push(SpanPart::Range(from.to_string(), to.to_string()));
                }
                None => parts.push(SpanPart::Single(raw.to_string())),
            }
        }
        if parts.is_empty() {
            return Err(invalid("empty span"));
        }
        SpanExpr::new(parts)
    }
}

impl fmt::Display for SpanExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match part {
                SpanPart::Single(id) => f.write_str(id)?,
                SpanPart::Range(a, b) => write!(f, "{a}..{b}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for SpanExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SpanExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reference units of one segmentation level, indexed by id.
#[derive(Debug, Clone)]
pub struct Segmentation {
    level_id: String,
    units: Vec<ReferenceUnit>,
    by_id: HashMap<String, usize>,
}

impl Segmentation {
    pub fn new(level_id: impl Into<String>, units: Vec<ReferenceUnit>) -> Self {
        let by_id = units
            .iter()
            .enumerate()
            .map(|(i, u)| (u.id.clone(), i))
            .collect();
        Segmentation {
            level_id: level_id.into(),
            units,
            by_id,
        }
    }

    pub fn level_id(&self) -> &str {
        &self.level_id
    }

    pub fn units(&self) -> &[ReferenceUnit] {
        &self.units
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn forms(&self) -> Vec<&str> {
        self.units.iter().map(|u| u.form.as_str()).collect()
    }

    /// Positions (into `units()`) covered by `expr`, ascending and unique.
    pub fn resolve_positions(&self, expr: &SpanExpr) -> Result<Vec<usize>> {
        resolve_positions(expr, &self.level_id, |id| self.position(id))
    }
}

/// Resolves a span against any id→position lookup of a single anchor level.
pub fn resolve_positions(
    expr: &SpanExpr,
    level_id: &str,
    lookup: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<usize>> {
    let find = |id: &str| {
        lookup(id).ok_or_else(|| Error::DanglingPointer {
            level: level_id.to_string(),
            id: id.to_string(),
        })
    };
    let mut positions = Vec::new();
    for part in expr.parts() {
        match part {
            SpanPart::Single(id) => positions.push(find(id)?),
            SpanPart::Range(from, to) => {
                let (a, b) = (find(from)?, find(to)?);
                if a > b {
                    return Err(Error::ReversedRange {
                        from: from.clone(),
                        to: to.clone(),
                    });
                }
                positions.extend(a..=b);
            }
        }
    }
    positions.sort_unstable();
    positions.dedup();
    Ok(positions)
}

/// Units referenced by `expr`, in document order.
pub fn resolve_span<'a>(expr: &SpanExpr, seg: &'a Segmentation) -> Result<Vec<&'a ReferenceUnit>> {
    Ok(seg
        .resolve_positions(expr)?
        .into_iter()
        .map(|i| &seg.units[i])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn goriot() -> Segmentation {
        let forms = ["Madame", "Vauquer", ",", "née", "De"];
        let units = forms
            .iter()
            .enumerate()
            .map(|(i, f)| ReferenceUnit {
                id: format!("word_{}", 27 + i),
                form: f.to_string(),
                index: i,
            })
            .collect();
        Segmentation::new("seg", units)
    }

    fn forms(expr: &str) -> Result<Vec<String>> {
        let seg = goriot();
        let expr: SpanExpr = expr.parse()?;
        Ok(resolve_span(&expr, &seg)?
            .into_iter()
            .map(|u| u.form.clone())
            .collect())
    }

    #[test]
    fn single_id() {
        assert_eq!(forms("word_27").unwrap(), ["Madame"]);
    }

    #[test]
    fn inclusive_range() {
        assert_eq!(
            forms("word_27..word_29").unwrap(),
            ["Madame", "Vauquer", ","]
        );
    }

    #[test]
    fn list_is_ordered_and_deduplicated() {
        assert_eq!(
            forms("word_30,word_27..word_28,word_27").unwrap(),
            ["Madame", "Vauquer", "née"]
        );
    }

    #[test]
    fn dangling_pointer() {
        assert!(matches!(
            forms("word_9999"),
            Err(Error::DanglingPointer { id, .. }) if id == "word_9999"
        ));
    }

    #[test]
    fn reversed_range_rejected_at_parse() {
        assert!(matches!(
            "word_29..word_27".parse::<SpanExpr>(),
            Err(Error::ReversedRange { .. })
        ));
    }

    #[test]
    fn malformed_spans() {
        assert!("".parse::<SpanExpr>().is_err());
        assert!("word_1..".parse::<SpanExpr>().is_err());
        assert!("a..b..c".parse::<SpanExpr>().is_err());
    }

    #[test]
    fn compaction() {
        let ids = ["word_1", "word_2", "word_3", "word_4", "word_5"];
        let expr = SpanExpr::from_positions(&ids, &[0, 1, 2, 4]).unwrap();
        assert_eq!(expr.to_string(), "word_1..word_3,word_5");
        assert_eq!(expr.to_string().parse::<SpanExpr>().unwrap(), expr);
    }
}
