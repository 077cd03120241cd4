use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::record::{RunRecord, StepRecord, SummaryRow};
use crate::decode::OPERATOR_VERSION;
use crate::error::{LoreError, Result};
use crate::rng::PRNG_ID;

pub const TRACE_FILE: &str = "trace.jsonl";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const METADATA_FILE: &str = "metadata.json";

/// Output locations, checked for writability before any run starts.
#[derive(Debug, Clone)]
pub struct OutputPaths {
    pub dir: PathBuf,
    pub trace: PathBuf,
    pub summary: PathBuf,
    pub metadata: PathBuf,
}

impl OutputPaths {
    pub fn prepare(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| LoreError::io(dir, e))?;
        let paths = OutputPaths {
            dir: dir.to_path_buf(),
            trace: dir.join(TRACE_FILE),
            summary: dir.join(SUMMARY_FILE),
            metadata: dir.join(METADATA_FILE),
        };
        for p in [&paths.trace, &paths.summary, &paths.metadata] {
            File::create(p).map_err(|e| LoreError::io(p, e))?;
        }
        Ok(paths)
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    config_hash: String,
    prng_id: &'a str,
    operator_version: &'a str,
    refresh_convention: &'a str,
    recall_blend: &'a str,
    trace_row_convention: &'a str,
    run_count: usize,
    failed_runs: usize,
    spec: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<&'a Value>,
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> LoreError + '_ {
    move |e| LoreError::io(path, e)
}

/// Writes the JSONL trace, the CSV summary and the metadata document.
pub fn emit_outputs(
    records: &[RunRecord],
    paths: &OutputPaths,
    spec_echo: &Value,
    summary: Option<&Value>,
) -> Result<()> {
    if records.is_empty() {
        return Err(LoreError::Usage("no records to emit".into()));
    }

    let f = File::create(&paths.trace).map_err(write_err(&paths.trace))?;
    let mut w = BufWriter::new(f);
    for step in records.iter().flat_map(|r| &r.steps) {
        serde_json::to_writer(&mut w, step).map_err(|e| LoreError::Serialize(e.to_string()))?;
        w.write_all(b"\n").map_err(write_err(&paths.trace))?;
    }
    w.flush().map_err(write_err(&paths.trace))?;

    let mut csv = csv::Writer::from_path(&paths.summary)
        .map_err(|e| LoreError::Serialize(format!("{}: {e}", paths.summary.display())))?;
    for r in records {
        csv.serialize(SummaryRow::from(r))
            .map_err(|e| LoreError::Serialize(e.to_string()))?;
    }
    csv.flush().map_err(write_err(&paths.summary))?;

    let spec_bytes = serde_json::to_vec(spec_echo).map_err(|e| LoreError::Serialize(e.to_string()))?;
    let meta = Metadata {
        config_hash: hex::encode(Sha256::digest(&spec_bytes)),
        prng_id: PRNG_ID,
        operator_version: OPERATOR_VERSION,
        refresh_convention: "refresh at elapsed steps t = 0, R, 2R, ...; static strategies at t = 0 only",
        recall_blend: "alpha_i * cluster_update_i + (1 - alpha_i) * bath_signal_i",
        trace_row_convention: "state metrics describe x^t; m_size/overlap/msg_evals describe the step starting at t",
        run_count: records.len(),
        failed_runs: records.iter().filter(|r| !r.is_ok()).count(),
        spec: spec_echo,
        summary,
    };
    let mut text =
        serde_json::to_string_pretty(&meta).map_err(|e| LoreError::Serialize(e.to_string()))?;
    text.push('\n');
    fs::write(&paths.metadata, text).map_err(write_err(&paths.metadata))?;
    Ok(())
}

pub fn read_trace(path: &Path) -> Result<Vec<StepRecord>> {
    let f = File::open(path).map_err(write_err(path))?;
    BufReader::new(f)
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.map_err(write_err(path))?;
            serde_json::from_str(&line).map_err(|e| LoreError::Parse {
                line: i + 1,
                msg: e.to_string(),
            })
        })
        .collect()
}
