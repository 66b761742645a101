//! Text rendering: 4-significant-digit scientific cells and aligned tables.

/// Four significant digits in scientific notation, mirroring the reference
/// table style.
pub fn sci4(x: f64) -> String {
    if x.is_nan() {
        return "--".to_string();
    }
    format!("{x:.3e}")
}

/// Fixed-point with four decimals for coefficient-scale values.
pub fn fixed4(x: f64) -> String {
    format!("{x:.4}")
}

/// Aligned table: a header row followed by label + cells rows.
pub fn aligned(header: &[String], rows: &[(String, Vec<String>)]) -> String {
    let ncols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    let label_width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    for (_, cells) in rows {
        for (j, cell) in cells.iter().enumerate() {
            if j < ncols {
                widths[j] = widths[j].max(cell.len());
            }
        }
    }
    let mut out = String::new();
    out.push_str(&format!("{:label_width$}", ""));
    for (j, h) in header.iter().enumerate() {
        out.push_str(&format!("  {:>width$}", h, width = widths[j]));
    }
    out.push('\n');
    for (label, cells) in rows {
        out.push_str(&format!("{label:label_width$}"));
        for (j, cell) in cells.iter().enumerate() {
            out.push_str(&format!("  {:>width$}", cell, width = widths[j]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci4_matches_reference_style() {
        assert_eq!(sci4(4.444e-4), "4.444e-4");
        assert_eq!(sci4(0.0004221804), "4.222e-4");
        assert_eq!(sci4(1.017e-5), "1.017e-5");
    }

    #[test]
    fn aligned_pads_columns() {
        let s = aligned(
            &["t = 0.1".into(), "t = 0.99".into()],
            &[
                ("S2_tau".into(), vec!["1.0e0".into(), "2.00e0".into()]),
                ("longer label".into(), vec!["3e0".into(), "4e0".into()]),
            ],
        );
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.len() == lines[0].len()));
    }
}
