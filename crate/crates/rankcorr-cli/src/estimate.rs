//! `rankcorr estimate`: all five coefficients from a CSV file.

use std::path::Path;

use serde::Serialize;

use rankcorr::rankstats::{estimate_all_with_policy, CorrelationEstimates, TiePolicy};

use crate::manifest::OutputContext;
use crate::render::fixed4;
use crate::{csvio, CliResult};

#[derive(Serialize)]
struct EstimateResults {
    n: usize,
    tie_policy: &'static str,
    estimates: CorrelationEstimates,
}

pub fn run(ctx: &OutputContext, csv: &Path, cols: Option<&str>, jitter: bool) -> CliResult<()> {
    let sample = csvio::read_pairs(csv, cols)?;
    let policy = if jitter {
        TiePolicy::JitterInputOrder
    } else {
        TiePolicy::Reject
    };
    let estimates = estimate_all_with_policy(&sample, policy)?;
    let results = EstimateResults {
        n: sample.len(),
        tie_policy: if jitter { "jitter-input-order" } else { "reject" },
        estimates,
    };

    let mut text = String::new();
    text.push_str(&format!("n        : {}\n", results.n));
    text.push_str(&format!("pearson  : {}\n", fixed4(estimates.pearson)));
    text.push_str(&format!("spearman : {}\n", fixed4(estimates.spearman)));
    text.push_str(&format!("kendall  : {}\n", fixed4(estimates.kendall)));
    text.push_str(&format!("r_new    : {}\n", fixed4(estimates.r_new)));
    text.push_str(&format!("r_tilde  : {}\n", fixed4(estimates.r_tilde)));
    ctx.emit("estimate", &results, &text)
}
