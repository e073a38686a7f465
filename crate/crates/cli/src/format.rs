//! Deterministic text output.

/// Shortest decimal that parses back to the same `f64`; negative zero prints as `0.0`.
pub fn fmt_f64(x: f64) -> String {
    format!("{:?}", x + 0.0)
}

/// CSV with a header line; fields are written as given.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
