//! Run manifests and output emission.
//!
//! Every command produces a `results` JSON value. The manifest records the
//! command, full argument set, seed, library version and the SHA-256 of the
//! canonical results serialization. Files written with --out contain only
//! reproducible fields, so rerunning the same invocation yields a
//! byte-identical file; the timestamp and wall time appear on the terminal
//! but never in the file.

use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliResult;

pub struct OutputContext {
    pub argv: Vec<String>,
    pub seed: u64,
    pub json: bool,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct FileManifest<'a> {
    command: &'a str,
    args: &'a [String],
    seed: u64,
    version: &'a str,
    output_sha256: &'a str,
}

#[derive(Serialize)]
struct FileRecord<'a, T: Serialize> {
    manifest: FileManifest<'a>,
    results: &'a T,
}

impl OutputContext {
    /// Renders text to stdout (or the JSON record with --json) and writes
    /// the JSON record to --out when given.
    pub fn emit<T: Serialize>(&self, command: &str, results: &T, text: &str) -> CliResult<()> {
        // canonical form: sorted-key JSON, so any reader recomputing the
        // digest from the parsed record gets the same bytes
        let value = serde_json::to_value(results)
            .map_err(|e| crate::CliError::parse(format!("serialization failed: {e}")))?;
        let canonical = serde_json::to_string(&value)
            .map_err(|e| crate::CliError::parse(format!("serialization failed: {e}")))?;
        let sha = hex_digest(&canonical);
        // neither the output path nor the worker count affects results,
        // so they stay out of the reproducible record
        let args = strip_volatile_flags(&self.argv);
        let record = FileRecord {
            manifest: FileManifest {
                command,
                args: &args,
                seed: self.seed,
                version: env!("CARGO_PKG_VERSION"),
                output_sha256: &sha,
            },
            results: &value,
        };
        let record_json = serde_json::to_string_pretty(&record)
            .map_err(|e| crate::CliError::parse(format!("serialization failed: {e}")))?;

        if self.json {
            println!("{record_json}");
        } else {
            print!("{text}");
            println!("manifest: command={command} seed={} version={} sha256={sha}", self.seed, env!("CARGO_PKG_VERSION"));
            println!("timestamp: {}", chrono::Utc::now().to_rfc3339());
        }
        if let Some(path) = &self.out {
            std::fs::write(path, record_json.as_bytes())?;
        }
        Ok(())
    }
}

fn hex_digest(s: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(s.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn strip_volatile_flags(argv: &[String]) -> Vec<String> {
    const VOLATILE: [&str; 2] = ["--out", "--threads"];
    let mut out = Vec::with_capacity(argv.len());
    let mut skip_next = false;
    for arg in argv {
        if skip_next {
            skip_next = false;
            continue;
        }
        if VOLATILE.contains(&arg.as_str()) {
            skip_next = true;
            continue;
        }
        if VOLATILE.iter().any(|f| arg.starts_with(&format!("{f}="))) {
            continue;
        }
        out.push(arg.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volatile_flags_removed_from_recorded_args() {
        let argv: Vec<String> = [
            "table", "--out", "x.json", "--seed", "7", "--threads", "8", "--out=y.json",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(strip_volatile_flags(&argv), vec!["table", "--seed", "7"]);
    }
}
