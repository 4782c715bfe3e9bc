//! Local data-category registry.
//!
//! One category per line: `id<TAB>name<TAB>broader-id-or-'-'<TAB>aliases[<TAB>description]`.
//! Aliases tie annotation keys to categories:
//!
//! * `key` matches any non-empty value of `key`;
//! * `key=value` matches that exact value;
//! * `key#N` matches when the N-th `:`-separated field of the value is set;
//! * `key#N+` matches when any field from the N-th on is set.
//!
//! A field is unset when empty or `_`. Links are looked up as `link=<type>`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FORMAT: &str = "registry";

/// Registry shipped with the crate; covers the tags of the bundled fixtures.
pub const DEFAULT_REGISTRY: &str = include_str!("../data/registry.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataCategory {
    pub id: String,
    pub name: String,
    pub description: String,
    pub broader: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Alias {
    Key(String),
    Value(String, String),
    Field(String, usize),
    FieldsFrom(String, usize),
}

impl Alias {
    fn parse(raw: &str, line: usize) -> Result<Self> {
        if let Some((key, value)) = raw.split_once('=') {
            return Ok(Alias::Value(key.to_string(), value.to_string()));
        }
        if let Some((key, field)) = raw.split_once('#') {
            let bad = || Error::parse(FORMAT, line, format!("bad field alias `{raw}`"));
            return match field.strip_suffix('+') {
                Some(n) => Ok(Alias::FieldsFrom(
                    key.to_string(),
                    n.parse().map_err(|_| bad())?,
                )),
                None => Ok(Alias::Field(
                    key.to_string(),
                    field.parse().map_err(|_| bad())?,
                )),
            };
        }
        Ok(Alias::Key(raw.to_string()))
    }

    fn key(&self) -> &str {
        match self {
            Alias::Key(k) | Alias::Value(k, _) | Alias::Field(k, _) | Alias::FieldsFrom(k, _) => k,
        }
    }

    fn matches(&self, key: &str, value: &str) -> bool {
        if self.key() != key || value.trim().is_empty() {
            return false;
        }
        let set = |f: &&str| !f.is_empty() && *f != "_";
        match self {
            Alias::Key(_) => true,
            Alias::Value(_, v) => v == value,
            Alias::Field(_, n) => value.split(':').nth(*n).as_ref().is_some_and(set),
            Alias::FieldsFrom(_, n) => value.split(':').skip(*n).any(|f| set(&f)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    categories: BTreeMap<String, DataCategory>,
    aliases: Vec<(Alias, String)>,
}

impl Registry {
    pub fn parse(text: &str) -> Result<Self> {
        let mut categories = BTreeMap::new();
        let mut aliases = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if !(4..=5).contains(&cols.len()) {
                return Err(Error::parse(
                    FORMAT,
                    line_no,
                    format!(
                        "expected 4 or 5 tab-separated columns, found {}",
                        cols.len()
                    ),
                ));
            }
            let id = cols[0].trim();
            if id.is_empty() {
                return Err(Error::parse(FORMAT, line_no, "empty category id"));
            }
            let broader = match cols[2].trim() {
                "-" | "" => None,
                b => Some(b.to_string()),
            };
            let category = DataCategory {
                id: id.to_string(),
                name: cols[1].trim().to_string(),
                description: cols
                    .get(4)
                    .map(|d| d.trim().to_string())
                    .unwrap_or_default(),
                broader,
            };
            if categories.insert(id.to_string(), category).is_some() {
                return Err(Error::parse(
                    FORMAT,
                    line_no,
                    format!("duplicate category `{id}`"),
                ));
            }
            for raw in cols[3].split(',').map(str::trim).filter(|a| !a.is_empty()) {
                aliases.push((Alias::parse(raw, line_no)?, id.to_string()));
            }
        }
        let registry = Registry {
            categories,
            aliases,
        };
        registry.check_hierarchy()?;
        Ok(registry)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Registry::parse(&text)
    }

    fn check_hierarchy(&self) -> Result<()> {
        for category in self.categories.values() {
            let mut seen = HashSet::from([category.id.as_str()]);
            let mut current = category;
            while let Some(parent) = &current.broader {
                current = self.categories.get(parent).ok_or_else(|| {
                    Error::parse(
                        FORMAT,
                        0,
                        format!(
                            "`{}` names unknown broader category `{parent}`",
                            category.id
                        ),
                    )
                })?;
                if !seen.insert(current.id.as_str()) {
                    return Err(Error::parse(
                        FORMAT,
                        0,
                        format!("broader chain of `{}` is cyclic", category.id),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&DataCategory> {
        self.categories.get(id)
    }

    pub fn categories(&self) -> impl Iterator<Item = &DataCategory> {
        self.categories.values()
    }

    /// Whether `id` lies strictly below `ancestor` in the broader hierarchy.
    pub fn is_descendant(&self, id: &str, ancestor: &str) -> bool {
        let mut current = self.categories.get(id);
        while let Some(parent) = current.and_then(|c| c.broader.as_deref()) {
            if parent == ancestor {
                return true;
            }
            current = self.categories.get(parent);
        }
        false
    }

    /// Whether some alias is declared for `key`.
    pub fn knows_key(&self, key: &str) -> bool {
        self.aliases.iter().any(|(a, _)| a.key() == key)
    }

    /// Categories a `key`/`value` pair maps onto.
    pub fn lookup(&self, key: &str, value: &str) -> BTreeSet<&str> {
        self.aliases
            .iter()
            .filter(|(alias, _)| alias.matches(key, value))
            .map(|(_, id)| id.as_str())
            .collect()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::parse(DEFAULT_REGISTRY).expect("bundled registry is well formed")
    }
}
