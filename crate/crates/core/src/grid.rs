//! Plain-text rendering of operation tables.

use std::fmt::Write;

/// Renders a table with a header row and labelled rows, columns padded to
/// the widest cell.
pub(crate) fn render(corner: &str, columns: &[String], rows: &[(String, Vec<String>)]) -> String {
    let label_w = rows
        .iter()
        .map(|(l, _)| l.chars().count())
        .chain(std::iter::once(corner.chars().count()))
        .max()
        .unwrap_or(0);
    let cell_w = rows
        .iter()
        .flat_map(|(_, cells)| cells.iter())
        .chain(columns.iter())
        .map(|c| c.chars().count())
        .max()
        .unwrap_or(0);
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
    let mut out = String::new();
    let header: Vec<String> = columns.iter().map(|c| pad(c, cell_w)).collect();
    let _ = writeln!(out, "{} | {}", pad(corner, label_w), header.join(" ").trim_end());
    let _ = writeln!(out, "{}-+-{}", "-".repeat(label_w), "-".repeat(header.join(" ").trim_end().chars().count()));
    for (label, cells) in rows {
        let body: Vec<String> = cells.iter().map(|c| pad(c, cell_w)).collect();
        let _ = writeln!(out, "{} | {}", pad(label, label_w), body.join(" ").trim_end());
    }
    out
}
