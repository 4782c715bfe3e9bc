//! Reference-unit segmentation.
//!
//! Units are produced in three passes over each whitespace-delimited chunk:
//! punctuation is detached from both ends, elided clitics are split after
//! their apostrophe, and contracted determiners are expanded through a
//! [`SplitTable`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Characters that detach from a chunk edge as single-character units.
pub const DETACHABLE_PUNCTUATION: &[char] =
    &['.', ',', ';', ':', '!', '?', '(', ')', '"', '\'', '«', '»'];

const APOSTROPHES: &[char] = &['\'', '’'];

/// Elided forms that keep their apostrophe and split from the following word.
const CLITICS: &[&str] = &[
    "c", "d", "j", "l", "m", "n", "s", "t", "qu", "jusqu", "lorsqu", "puisqu", "quoiqu",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceUnit {
    pub id: String,
    pub form: String,
    pub index: usize,
}

impl ReferenceUnit {
    pub fn new(n: usize, form: impl Into<String>) -> Self {
        ReferenceUnit {
            id: unit_id(n),
            form: form.into(),
            index: n - 1,
        }
    }
}

/// `word_<n>` for a 1-based position.
pub fn unit_id(n: usize) -> String {
    format!("word_{n}")
}

/// Parses the numeric suffix of a `word_<n>` id.
pub fn unit_number(id: &str) -> Option<usize> {
    id.strip_prefix("word_")?
        .parse()
        .ok()
        .filter(|n: &usize| *n > 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTable {
    entries: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitTableError {
    #[error("split table key `{0}` must be lowercase")]
    KeyNotLowercase(String),
    #[error("split table entry `{0}` must expand to at least two forms")]
    TooFewReplacements(String),
}

impl SplitTable {
    pub fn new<K, V, I>(entries: I) -> Result<Self, SplitTableError>
    where
        K: Into<String>,
        V: IntoIterator,
        V::Item: Into<String>,
        I: IntoIterator<Item = (K, V)>,
    {
        let mut map = BTreeMap::new();
        for (key, replacements) in entries {
            let key = key.into();
            if key != key.to_lowercase() {
                return Err(SplitTableError::KeyNotLowercase(key));
            }
            let replacements: Vec<String> = replacements.into_iter().map(Into::into).collect();
            if replacements.len() < 2 {
                return Err(SplitTableError::TooFewReplacements(key));
            }
            map.insert(key, replacements);
        }
        Ok(SplitTable { entries: map })
    }

    pub fn empty() -> Self {
        SplitTable {
            entries: BTreeMap::new(),
        }
    }

    /// Case-insensitive lookup of a contracted form.
    pub fn expansion(&self, token: &str) -> Option<&[String]> {
        self.entries.get(&token.to_lowercase()).map(Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Expands `token`, carrying an initial capital over to the first replacement.
    pub fn expand(&self, token: &str) -> Option<Vec<String>> {
        let replacements = self.expansion(token)?;
        let mut out = replacements.to_vec();
        if token.chars().next().is_some_and(char::is_uppercase) {
            out[0] = capitalize(&out[0]);
        }
        Some(out)
    }
}

impl Default for SplitTable {
    /// `au`, `aux` and `du`. `des` is left alone: it is also the plural
    /// indefinite article.
    fn default() -> Self {
        SplitTable::new([
            ("au", ["à", "le"]),
            ("aux", ["à", "les"]),
            ("du", ["de", "le"]),
        ])
        .expect("default split table is well formed")
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn is_clitic(chunk: &str) -> bool {
    let Some(stem) = chunk.strip_suffix(APOSTROPHES) else {
        return false;
    };
    let stem = stem.to_lowercase();
    CLITICS.contains(&stem.as_str())
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    let mut rest = chunk;
    while let Some(c) = rest
        .chars()
        .next()
        .filter(|c| DETACHABLE_PUNCTUATION.contains(c))
    {
        out.push(c.to_string());
        rest = &rest[c.len_utf8()..];
    }
    let mut trailing = Vec::new();
    while let Some(c) = rest.chars().next_back() {
        if !DETACHABLE_PUNCTUATION.contains(&c) || is_clitic(rest) {
            break;
        }
        trailing.push(c.to_string());
        rest = &rest[..rest.len() - c.len_utf8()];
    }
    if !rest.is_empty() {
        match clitic_prefix(rest) {
            Some(end) if end < rest.len() => {
                out.push(rest[..end].to_string());
                split_chunk(&rest[end..], out);
            }
            _ => out.push(rest.to_string()),
        }
    }
    out.extend(trailing.into_iter().rev());
}

/// Byte length of a leading clitic (apostrophe included), if any.
fn clitic_prefix(chunk: &str) -> Option<usize> {
    let (pos, apostrophe) = chunk
        .char_indices()
        .find(|(_, c)| APOSTROPHES.contains(c))?;
    let end = pos + apostrophe.len_utf8();
    is_clitic(&chunk[..end]).then_some(end)
}

/// Splits `raw` into surface forms without assigning ids.
pub fn tokenize(raw: &str, table: &SplitTable) -> Vec<String> {
    let mut pieces = Vec::new();
    for chunk in raw.split_whitespace() {
        split_chunk(chunk, &mut pieces);
    }
    let mut forms = Vec::with_capacity(pieces.len());
    for piece in pieces {
        match table.expand(&piece) {
            Some(expanded) => forms.extend(expanded),
            None => forms.push(piece),
        }
    }
    forms
}

/// Segments `raw` into reference units numbered `word_1..word_k`.
pub fn segment_text(raw: &str, table: &SplitTable) -> Vec<ReferenceUnit> {
    tokenize(raw, table)
        .into_iter()
        .enumerate()
        .map(|(i, form)| ReferenceUnit::new(i + 1, form))
        .collect()
}
