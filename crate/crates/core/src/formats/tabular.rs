use crate::error::{Error, Result};
use crate::item::AnnotationItem;
use crate::standoff::{Segmentation, SpanExpr, SplitTable};

const FORMAT: &str = "tabular-morpho";
const COLUMNS: [&str; 5] = ["index", "form", "lemma", "tag_coarse", "tag_fine"];

/// One item per non-empty line of five tab-separated columns. The fine tag is
/// kept verbatim.
pub fn parse_tabular_morpho(payload: &str) -> Result<Vec<AnnotationItem>> {
    let mut items = Vec::new();
    for (n, line) in payload.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != COLUMNS.len() {
            return Err(Error::parse(
                FORMAT,
                n + 1,
                format!("expected 5 tab-separated columns, found {}", cols.len()),
            ));
        }
        let mut item = AnnotationItem {
            surface: Some(cols[1].to_string()),
            ..Default::default()
        };
        for (key, value) in COLUMNS.iter().zip(&cols) {
            item.categories.insert(key.to_string(), value.to_string());
        }
        items.push(item);
    }
    Ok(items)
}

/// Case-folded, whitespace-free comparison key.
fn fold(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Number of units starting at `j` that `token` covers, if it aligns there.
fn match_at(token: &str, units: &[String], j: usize, table: &SplitTable) -> Option<usize> {
    let target = fold(token);
    if j >= units.len() || target.is_empty() {
        return None;
    }
    if units[j] == target {
        return Some(1);
    }
    if let Some(expansion) = table.expansion(token) {
        let n = expansion.len();
        if j + n <= units.len()
            && expansion
                .iter()
                .zip(&units[j..j + n])
                .all(|(e, u)| fold(e) == *u)
        {
            return Some(n);
        }
    }
    let mut acc = String::new();
    for (m, unit) in units[j..].iter().enumerate() {
        acc.push_str(unit);
        if acc == target {
            return (m > 0).then_some(m + 1);
        }
        if acc.len() >= target.len() || !target.starts_with(&acc) {
            return None;
        }
    }
    None
}

/// Attaches a span over `seg` to every tabular item and drops the forms.
///
/// Alignment starts at the first unit where the first token matches and then
/// proceeds token by token. A token may cover several consecutive units when
/// it equals their concatenation or expands to them through `table`.
pub fn convert_tabular_to_standoff(
    items: &[AnnotationItem],
    seg: &Segmentation,
    table: &SplitTable,
) -> Result<Vec<AnnotationItem>> {
    let folded: Vec<String> = seg.units().iter().map(|u| fold(&u.form)).collect();
    let ids: Vec<&str> = seg.units().iter().map(|u| u.id.as_str()).collect();
    let token_of = |item: &AnnotationItem| {
        item.surface
            .clone()
            .or_else(|| item.get("form").map(str::to_string))
            .unwrap_or_default()
    };
    let Some(first) = items.first() else {
        return Ok(Vec::new());
    };
    let first_token = token_of(first);
    let mut j = (0..folded.len())
        .find(|&j| match_at(&first_token, &folded, j, table).is_some())
        .ok_or_else(|| Error::Unalignable {
            token_index: 0,
            token: first_token.clone(),
            unit_index: 0,
        })?;

    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let token = token_of(item);
        let n = match_at(&token, &folded, j, table).ok_or_else(|| Error::Unalignable {
            token_index: i,
            token: token.clone(),
            unit_index: j,
        })?;
        let positions: Vec<usize> = (j..j + n).collect();
        let mut converted = item.clone();
        converted.surface = None;
        converted.categories.remove("form");
        converted.span = SpanExpr::from_positions(&ids, &positions);
        out.push(converted);
        j += n;
    }
    Ok(out)
}
