use crate::error::{Error, Result};
use crate::item::{AnnotationItem, Link};

const FORMAT: &str = "syntax-tree";

/// Constituent of an `=`-nested analyzer tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Constituent {
    /// Label before the colon (`S`, `DN`, `H`); empty for bare punctuation.
    pub function: String,
    /// Label after the colon, up to the feature list (`prop`, `pp`, `v-fin`).
    pub form: String,
    /// Parenthesized features, verbatim.
    pub flags: Option<String>,
    pub surface: Option<String>,
    pub line: usize,
    pub children: Vec<Constituent>,
}

impl Constituent {
    pub fn is_terminal(&self) -> bool {
        self.surface.is_some()
    }
}

fn parse_line(label: &str, surface: &str, line: usize) -> Constituent {
    let surface = (!surface.is_empty()).then(|| surface.to_string());
    match label.split_once(':') {
        Some((function, rest)) => {
            let (form, flags) = match rest.find('(') {
                Some(open) => {
                    let inner = rest[open + 1..]
                        .strip_suffix(')')
                        .unwrap_or(&rest[open + 1..]);
                    (&rest[..open], Some(inner.to_string()))
                }
                None => (rest, None),
            };
            Constituent {
                function: function.to_string(),
                form: form.to_string(),
                flags,
                surface,
                line,
                children: Vec::new(),
            }
        }
        // Bare punctuation line: the label is the token itself.
        None => Constituent {
            surface: Some(surface.unwrap_or_else(|| label.to_string())),
            line,
            ..Default::default()
        },
    }
}

/// Parses `function:form(flags)<TAB>surface` lines, nesting by the number of
/// leading `=`. Lines reading `...` (elision marks) are skipped.
pub fn parse_syntax_constituency(payload: &str) -> Result<Vec<Constituent>> {
    let mut roots: Vec<Constituent> = Vec::new();
    // Path of child indices from the roots down to the last item.
    let mut path: Vec<usize> = Vec::new();
    for (n, raw) in payload.lines().enumerate() {
        let line_no = n + 1;
        let raw = raw.trim_end_matches(['\r', '\n']);
        let (label, surface) = raw.split_once('\t').unwrap_or((raw, ""));
        let depth = label.chars().take_while(|c| *c == '=').count();
        let label = label[depth..].trim();
        let surface = surface.trim();
        if label.is_empty() || label == "..." {
            continue;
        }
        if depth > path.len() {
            return Err(Error::parse(
                FORMAT,
                line_no,
                format!(
                    "depth {depth} under a parent at depth {}",
                    path.len() as isize - 1
                ),
            ));
        }
        let node = parse_line(label, surface, line_no);
        path.truncate(depth);
        let siblings = {
            let mut level = &mut roots;
            for &i in &path {
                level = &mut level[i].children;
            }
            level
        };
        siblings.push(node);
        path.push(siblings.len() - 1);
    }
    Ok(roots)
}

/// Pre-order flattening with generated ids `n_<k>` and `parent` links.
pub fn flatten_constituents(roots: &[Constituent]) -> Vec<AnnotationItem> {
    fn walk(node: &Constituent, parent: Option<&str>, out: &mut Vec<AnnotationItem>) {
        let id = format!("n_{}", out.len() + 1);
        let mut item = AnnotationItem::with_id(&id);
        if !node.function.is_empty() {
            item.categories
                .insert("function".into(), node.function.clone());
        }
        if !node.form.is_empty() {
            item.categories.insert("form".into(), node.form.clone());
        }
        if let Some(flags) = &node.flags {
            item.categories.insert("flags".into(), flags.clone());
        }
        item.surface = node.surface.clone();
        if let Some(parent) = parent {
            item.links
                .push(Link::new("parent", vec![parent.to_string()]));
        }
        out.push(item);
        for child in &node.children {
            walk(child, Some(&id), out);
        }
    }
    let mut out = Vec::new();
    for root in roots {
        walk(root, None, &mut out);
    }
    out
}
