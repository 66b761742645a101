//! CSV ingestion: comma-separated, decimal point only, optional header
//! (detected when the first row does not parse as numbers).

use std::path::Path;

use rankcorr::PairedSample;

use crate::{CliError, CliResult};

pub fn read_pairs(path: &Path, cols: Option<&str>) -> CliResult<PairedSample> {
    let (ci, cj) = parse_cols(cols)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record =
            record.map_err(|e| CliError::parse(format!("row {row}: malformed CSV: {e}")))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let cell = |col: usize| -> CliResult<&str> {
            record.get(col).ok_or_else(|| {
                CliError::parse(format!(
                    "row {row}: needs column {} but has only {} fields",
                    col + 1,
                    record.len()
                ))
            })
        };
        let parse = |col: usize| -> CliResult<f64> {
            let field = cell(col)?;
            field.parse::<f64>().map_err(|_| {
                CliError::parse(format!(
                    "row {row}, column {}: '{field}' is not a number (decimal-point format required)",
                    col + 1
                ))
            })
        };
        match (parse(ci), parse(cj)) {
            (Ok(x), Ok(y)) => {
                xs.push(x);
                ys.push(y);
            }
            (Err(e), _) | (_, Err(e)) => {
                // a non-numeric first row is a header; anywhere else it is an error
                if row == 1 && xs.is_empty() {
                    continue;
                }
                return Err(e);
            }
        }
    }
    if xs.len() < 2 {
        return Err(CliError::parse(format!(
            "need at least 2 data rows, found {}",
            xs.len()
        )));
    }
    Ok(PairedSample::new(xs, ys)?)
}

/// `--cols i,j` with 1-based indices; defaults to the first two columns.
fn parse_cols(cols: Option<&str>) -> CliResult<(usize, usize)> {
    match cols {
        None => Ok((0, 1)),
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::parameter(format!(
                    "--cols expects 'i,j', got '{spec}'"
                )));
            }
            let parse = |s: &str| -> CliResult<usize> {
                let v: usize = s
                    .trim()
                    .parse()
                    .map_err(|_| CliError::parameter(format!("--cols: '{s}' is not a column index")))?;
                if v == 0 {
                    return Err(CliError::parameter("--cols indices are 1-based".to_string()));
                }
                Ok(v - 1)
            };
            Ok((parse(parts[0])?, parse(parts[1])?))
        }
    }
}
