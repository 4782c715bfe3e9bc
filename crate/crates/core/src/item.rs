use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::standoff::SpanExpr;

/// Typed edge from the owning item to one or more items of the same level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub link_type: String,
    pub targets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant_group: Option<String>,
}

impl Link {
    pub fn new(link_type: impl Into<String>, targets: Vec<String>) -> Self {
        Link {
            link_type: link_type.into(),
            targets,
            variant_group: None,
        }
    }
}

/// Node of a level's annotation graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationItem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<SpanExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub categories: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<Link>,
}

impl AnnotationItem {
    pub fn with_id(id: impl Into<String>) -> Self {
        AnnotationItem {
            id: Some(id.into()),
            ..Default::default()
        }
    }

    pub fn category(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.categories.insert(key.into(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.categories.get(key).map(String::as_str)
    }
}
