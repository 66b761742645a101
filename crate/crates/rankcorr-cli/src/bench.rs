//! `rankcorr bench`: wall-clock timing of the naive and fast estimator
//! paths on random permutations, with an equality assertion first.
//! (Statistical microbenchmarks live in the criterion harness.)

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rankcorr::rankstats::{
    kendall_fast, kendall_naive, weighted_t_fast, weighted_t_naive, ConcomitantRanks,
};

use crate::manifest::OutputContext;
use crate::render::aligned;
use crate::{CliError, CliResult};

/// Above this size the O(n^2) paths are timed only when asked for
/// explicitly.
const NAIVE_DEFAULT_CAP: usize = 32_768;

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    kendall_fast_ms: f64,
    kendall_naive_ms: Option<f64>,
    weighted_t_fast_ms: f64,
    weighted_t_naive_ms: Option<f64>,
    outputs_equal: Option<bool>,
}

#[derive(Serialize)]
struct BenchResults {
    seed: u64,
    rows: Vec<BenchRow>,
}

pub fn run(ctx: &OutputContext, sizes: &[usize], algo: &str) -> CliResult<()> {
    let (want_naive, want_fast) = match algo {
        "both" => (true, true),
        "naive" => (true, false),
        "fast" => (false, true),
        other => {
            return Err(CliError::parameter(format!(
                "--algo must be naive, fast or both, got '{other}'"
            )))
        }
    };
    let naive_forced = algo == "naive";

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut rows = Vec::new();
    for &n in sizes {
        if n < 2 {
            return Err(CliError::parameter(format!("bench size {n} < 2")));
        }
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rng);
        let ranks = ConcomitantRanks::new(perm).expect("permutation");

        let run_naive = want_naive && (n <= NAIVE_DEFAULT_CAP || naive_forced);
        let mut outputs_equal = None;
        if run_naive && want_fast {
            // equality gate before any timing
            let same = kendall_naive(&ranks) == kendall_fast(&ranks)
                && weighted_t_naive(&ranks) == weighted_t_fast(&ranks);
            outputs_equal = Some(same);
            if !same {
                return Err(CliError {
                    code: 4,
                    message: format!("fast and naive paths disagree at n = {n}"),
                });
            }
        }

        let time_ms = |f: &dyn Fn()| {
            let t0 = Instant::now();
            f();
            t0.elapsed().as_secs_f64() * 1e3
        };
        let kendall_fast_ms = if want_fast {
            time_ms(&|| {
                std::hint::black_box(kendall_fast(&ranks));
            })
        } else {
            0.0
        };
        let weighted_t_fast_ms = if want_fast {
            time_ms(&|| {
                std::hint::black_box(weighted_t_fast(&ranks));
            })
        } else {
            0.0
        };
        let kendall_naive_ms = run_naive.then(|| {
            time_ms(&|| {
                std::hint::black_box(kendall_naive(&ranks));
            })
        });
        let weighted_t_naive_ms = run_naive.then(|| {
            time_ms(&|| {
                std::hint::black_box(weighted_t_naive(&ranks));
            })
        });
        rows.push(BenchRow {
            n,
            kendall_fast_ms,
            kendall_naive_ms,
            weighted_t_fast_ms,
            weighted_t_naive_ms,
            outputs_equal,
        });
    }

    let results = BenchResults {
        seed: ctx.seed,
        rows,
    };
    let header: Vec<String> = results.rows.iter().map(|r| format!("n = {}", r.n)).collect();
    let fmt_opt = |v: Option<f64>| match v {
        Some(ms) => format!("{ms:.2} ms"),
        None => "skipped".to_string(),
    };
    let table_rows = vec![
        (
            "kendall fast".to_string(),
            results
                .rows
                .iter()
                .map(|r| format!("{:.2} ms", r.kendall_fast_ms))
                .collect(),
        ),
        (
            "kendall naive".to_string(),
            results.rows.iter().map(|r| fmt_opt(r.kendall_naive_ms)).collect(),
        ),
        (
            "weighted T fast".to_string(),
            results
                .rows
                .iter()
                .map(|r| format!("{:.2} ms", r.weighted_t_fast_ms))
                .collect(),
        ),
        (
            "weighted T naive".to_string(),
            results
                .rows
                .iter()
                .map(|r| fmt_opt(r.weighted_t_naive_ms))
                .collect(),
        ),
        (
            "outputs equal".to_string(),
            results
                .rows
                .iter()
                .map(|r| match r.outputs_equal {
                    Some(true) => "yes".to_string(),
                    Some(false) => "NO".to_string(),
                    None => "--".to_string(),
                })
                .collect(),
        ),
    ];
    let mut text = String::from("estimator timing on one random permutation per size\n");
    text.push_str(&aligned(&header, &table_rows));
    ctx.emit("bench", &results, &text)
}
