use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_normalization::UnicodeNormalization;

use super::span::{resolve_positions, SpanExpr, SpanPart};
use crate::error::{Error, Result};
use crate::graph::dependency_closure;
use crate::item::AnnotationItem;

/// Materialized content of one level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelContent {
    pub items: Vec<AnnotationItem>,
    /// Surface tokens carried by the payload itself, in document order.
    /// `None` for pointer-only payloads.
    pub tokens: Option<Vec<String>>,
}

impl LevelContent {
    pub fn carries_forms(&self) -> bool {
        self.tokens.as_ref().is_some_and(|t| !t.is_empty())
    }

    fn id_index(&self) -> HashMap<&str, usize> {
        self.items
            .iter()
            .enumerate()
            .filter_map(|(i, item)| item.id.as_deref().map(|id| (id, i)))
            .collect()
    }
}

/// Read access to the levels of one archive snapshot.
pub trait LevelGraph {
    /// Direct dependencies in declaration order; `None` if the level is unknown.
    fn dependencies(&self, level_id: &str) -> Option<Vec<String>>;
    fn content(&self, level_id: &str) -> Result<Arc<LevelContent>>;
    fn is_primary(&self, level_id: &str) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fingerprint(String);

impl Fingerprint {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// SHA-256 of the NFC-normalized tokens joined by newlines. Whitespace around
/// tokens is ignored; case and diacritics are not.
pub fn coverage_fingerprint<S: AsRef<str>>(tokens: &[S]) -> Fingerprint {
    let mut hasher = Sha256::new();
    let mut first = true;
    for token in tokens {
        let token = token.as_ref().trim();
        if token.is_empty() {
            continue;
        }
        if !first {
            hasher.update(b"\n");
        }
        first = false;
        let normalized: String = token.nfc().collect();
        hasher.update(normalized.as_bytes());
    }
    Fingerprint(hex::encode(hasher.finalize()))
}

struct Resolver<'g, G: LevelGraph + ?Sized> {
    graph: &'g G,
    contents: HashMap<String, Arc<LevelContent>>,
}

impl<G: LevelGraph + ?Sized> Resolver<'_, G> {
    fn content(&mut self, level: &str) -> Result<Arc<LevelContent>> {
        if let Some(c) = self.contents.get(level) {
            return Ok(c.clone());
        }
        let c = self.graph.content(level)?;
        self.contents.insert(level.to_string(), c.clone());
        Ok(c)
    }

    /// Which direct dependency of `level` holds `id`.
    fn anchor_of(&mut self, level: &str, deps: &[String], id: &str) -> Result<String> {
        for dep in deps {
            if self
                .content(dep)?
                .items
                .iter()
                .any(|i| i.id.as_deref() == Some(id))
            {
                return Ok(dep.clone());
            }
        }
        Err(Error::DanglingPointer {
            level: level.to_string(),
            id: id.to_string(),
        })
    }

    /// Dereferences `span` (written in `level`) down to form-carrying items.
    fn resolve(
        &mut self,
        level: &str,
        span: &SpanExpr,
        hits: &mut BTreeSet<(String, usize)>,
    ) -> Result<()> {
        let deps = self.graph.dependencies(level).unwrap_or_default();
        if deps.is_empty() {
            return Err(Error::NoPrimaryAnchor(level.to_string()));
        }
        for part in span.parts() {
            let anchor = match part {
                SpanPart::Single(id) => self.anchor_of(level, &deps, id)?,
                SpanPart::Range(from, to) => {
                    let a = self.anchor_of(level, &deps, from)?;
                    let b = self.anchor_of(level, &deps, to)?;
                    if a != b {
                        return Err(Error::CrossLevelRange {
                            from: from.clone(),
                            to: to.clone(),
                            from_level: a,
                            to_level: b,
                        });
                    }
                    a
                }
            };
            let content = self.content(&anchor)?;
            let index = content.id_index();
            let single = SpanExpr::new(vec![part.clone()])?;
            let positions = resolve_positions(&single, &anchor, |id| index.get(id).copied())?;
            for pos in positions {
                let item = &content.items[pos];
                if content.tokens.is_some() || item.span.is_none() && item.surface.is_some() {
                    hits.insert((anchor.clone(), pos));
                } else if let Some(inner) = &item.span {
                    self.resolve(&anchor, inner, hits)?;
                } else {
                    return Err(Error::NoPrimaryAnchor(anchor.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Items reached by dereferencing the spans of a pointer-only level, as
/// (level id, item position) in closure rank then document order. `None` when
/// the level carries its own forms or is primary.
fn coverage_hits<G: LevelGraph + ?Sized>(
    level_id: &str,
    graph: &G,
    resolver: &mut Resolver<'_, G>,
) -> Result<Option<Vec<(String, usize)>>> {
    let closure = dependency_closure(level_id, |id| graph.dependencies(id))?;
    let content = resolver.content(level_id)?;
    if content.tokens.is_some() || graph.is_primary(level_id) {
        return Ok(None);
    }
    let mut anchored = false;
    for level in &closure[1..] {
        if resolver.content(level)?.tokens.is_some() {
            anchored = true;
            break;
        }
    }
    if !anchored {
        return Err(Error::NoPrimaryAnchor(level_id.to_string()));
    }

    let mut hits = BTreeSet::new();
    for item in &content.items {
        if let Some(span) = &item.span {
            resolver.resolve(level_id, span, &mut hits)?;
        }
    }
    let rank: HashMap<&str, usize> = closure
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut ordered: Vec<_> = hits.into_iter().collect();
    ordered.sort_by_key(|(level, pos)| (rank[level.as_str()], *pos));
    Ok(Some(ordered))
}

/// Surface tokens covered by `level_id`: its own forms when it carries them,
/// otherwise the forms reached by dereferencing its spans transitively, each
/// referenced unit once, in document order.
pub fn reconstruct_coverage<G: LevelGraph + ?Sized>(
    level_id: &str,
    graph: &G,
) -> Result<Vec<String>> {
    let mut resolver = Resolver {
        graph,
        contents: HashMap::new(),
    };
    let Some(hits) = coverage_hits(level_id, graph, &mut resolver)? else {
        let content = resolver.content(level_id)?;
        return Ok(content.tokens.clone().unwrap_or_default());
    };
    let mut tokens = Vec::with_capacity(hits.len());
    for (level, pos) in hits {
        let content = resolver.content(&level)?;
        if let Some(surface) = &content.items[pos].surface {
            tokens.extend(surface.split_whitespace().map(str::to_string));
        }
    }
    Ok(tokens)
}

/// What a level covers, as comparable unit keys. A pointer-only level
/// covers the items it reaches (`level/id`, or `level/#pos` without id); a
/// form-carrying level covers its own token positions (`#pos:form`), so two
/// such versions of the same text overlap.
pub fn covered_units<G: LevelGraph + ?Sized>(level_id: &str, graph: &G) -> Result<Vec<String>> {
    let mut resolver = Resolver {
        graph,
        contents: HashMap::new(),
    };
    let Some(hits) = coverage_hits(level_id, graph, &mut resolver)? else {
        let content = resolver.content(level_id)?;
        let tokens = content.tokens.as_deref().unwrap_or_default();
        return Ok(tokens
            .iter()
            .enumerate()
            .map(|(pos, form)| format!("#{pos}:{form}"))
            .collect());
    };
    let mut ids = Vec::with_capacity(hits.len());
    for (level, pos) in hits {
        let content = resolver.content(&level)?;
        ids.push(match &content.items[pos].id {
            Some(id) => format!("{level}/{id}"),
            None => format!("{level}/#{pos}"),
        });
    }
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sequence_is_fixed() {
        let empty: [&str; 0] = [];
        assert_eq!(
            coverage_fingerprint(&empty).as_str(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn case_and_diacritics_matter_whitespace_does_not() {
        let base = coverage_fingerprint(&["Madame", "Vauquer"]);
        assert_eq!(base, coverage_fingerprint(&[" Madame ", "Vauquer\n"]));
        assert_ne!(base, coverage_fingerprint(&["madame", "Vauquer"]));
        assert_ne!(
            coverage_fingerprint(&["née"]),
            coverage_fingerprint(&["nee"])
        );
    }

    #[test]
    fn nfc_normalized() {
        // e + combining acute vs precomposed é
        assert_eq!(
            coverage_fingerprint(&["ne\u{301}e"]),
            coverage_fingerprint(&["n\u{e9}e"])
        );
    }

    #[test]
    fn token_boundaries_matter() {
        assert_ne!(
            coverage_fingerprint(&["ab", "c"]),
            coverage_fingerprint(&["a", "bc"])
        );
    }
}
