//! Deterministic plain-text tables for extents, intents, and reports.

use crate::algebra::TruthAlgebra;
use crate::mvset::{AValuedSet, IndexSet};

/// Renders rows under a header, right-aligning every column and joining
/// columns with two spaces. Ends with a newline.
pub fn aligned_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let columns = rows
        .iter()
        .map(Vec::len)
        .chain([headers.len()])
        .max()
        .unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in std::iter::once(headers).chain(rows.iter().map(Vec::as_slice)) {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(headers).chain(rows.iter().map(Vec::as_slice)) {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            for _ in cell.chars().count()..widths[i] {
                line.push(' ');
            }
            line.push_str(cell);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Extent table: one row per carrier element (ascending), one column per
/// node, headed by the node labels.
pub fn extent_table(alg: &TruthAlgebra, nodes: &IndexSet, extent: &AValuedSet) -> String {
    let n = nodes.len();
    let mut headers = vec!["β".to_string()];
    headers.extend(nodes.labels().iter().cloned());
    let rows: Vec<Vec<String>> = (0..alg.len())
        .map(|r| {
            let mut row = vec![alg.names()[r].clone()];
            row.extend((0..n).map(|c| alg.name(extent.get(r * n + c)).to_string()));
            row
        })
        .collect();
    aligned_table(&headers, &rows)
}

/// Intent table: a single row of values under the node labels.
pub fn intent_table(alg: &TruthAlgebra, nodes: &IndexSet, intent: &AValuedSet) -> String {
    let headers: Vec<String> = nodes.labels().to_vec();
    let row: Vec<String> = (0..nodes.len())
        .map(|z| alg.name(intent.get(z)).to_string())
        .collect();
    aligned_table(&headers, &[row])
}
