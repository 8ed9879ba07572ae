//! Sharded, resumable dataset computation. One shard is one height
//! value; records are written in (b, a) order and a shard is marked
//! complete in the manifest only after its lines are flushed, so a
//! restart never leaves partial records behind.

use crate::record::{compute_record, ComputeConfig, CurveRecord, SelmerMode};
use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use torsion28::family::Parameter;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShardMark {
    pub count: u64,
    /// File length in bytes after this shard was appended.
    pub byte_end: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunManifest {
    pub version: String,
    pub from_height: u64,
    pub to_height: u64,
    pub selmer: String,
    pub point_search_bound: u64,
    pub include_infinite_place: bool,
    pub seed: u64,
    pub shards: BTreeMap<u64, ShardMark>,
    pub complete: bool,
}

impl RunManifest {
    fn new(from: u64, to: u64, cfg: &ComputeConfig, include_inf: bool, seed: u64) -> Self {
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            from_height: from,
            to_height: to,
            selmer: match cfg.selmer {
                SelmerMode::Off => "off",
                SelmerMode::Isogeny => "isogeny",
                SelmerMode::Full => "full",
            }
            .to_string(),
            point_search_bound: cfg.point_search_bound,
            include_infinite_place: include_inf,
            seed,
            shards: BTreeMap::new(),
            complete: false,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let data = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        Ok(serde_json::from_str(&data)?)
    }

    fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

pub fn manifest_path(dataset: &Path) -> PathBuf {
    let mut os = dataset.as_os_str().to_owned();
    os.push(".manifest.json");
    PathBuf::from(os)
}

/// Compute (or resume) the dataset for heights in [from, to].
pub fn run_compute(
    dataset: &Path,
    from: u64,
    to: u64,
    cfg: &ComputeConfig,
    include_inf: bool,
    seed: u64,
    threads: usize,
) -> Result<(u64, RunManifest)> {
    if from < 2 || to < from {
        bail!("invalid height range {from}..={to}");
    }
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let man_path = manifest_path(dataset);
    let mut manifest = if man_path.exists() {
        let m = RunManifest::load(&man_path)?;
        let fresh = RunManifest::new(from, to, cfg, include_inf, seed);
        if (m.from_height, m.to_height, &m.selmer, m.point_search_bound)
            != (
                fresh.from_height,
                fresh.to_height,
                &fresh.selmer,
                fresh.point_search_bound,
            )
        {
            bail!(
                "manifest {} belongs to a different run configuration; remove it to start over",
                man_path.display()
            );
        }
        m
    } else {
        RunManifest::new(from, to, cfg, include_inf, seed)
    };

    // drop any partial tail from an interrupted shard
    let resume_at = manifest.shards.values().map(|s| s.byte_end).max().unwrap_or(0);
    let mut file: File = OpenOptions::new()
        .create(true)
        .write(true)
        .read(true)
        .open(dataset)
        .with_context(|| format!("opening {}", dataset.display()))?;
    let len = file.metadata()?.len();
    if len < resume_at {
        bail!(
            "dataset {} is shorter than the manifest records; remove both to start over",
            dataset.display()
        );
    }
    if len > resume_at {
        file.set_len(resume_at)?;
    }
    file.seek(SeekFrom::End(0))?;

    let mut written = 0u64;
    for b in from..=to {
        if manifest.shards.contains_key(&b) {
            continue;
        }
        let params: Vec<Parameter> = (1 + b % 2..b)
            .step_by(2)
            .filter(|a| num_integer::gcd(*a, b) == 1)
            .map(|a| Parameter::new(a, b).expect("canonical"))
            .collect();
        let mut rows: Vec<(u64, CurveRecord)> = params
            .par_iter()
            .map(|p| (p.a(), compute_record(p, cfg)))
            .collect();
        rows.sort_by_key(|(a, _)| *a);
        let mut buf = String::new();
        for (_, rec) in &rows {
            buf.push_str(&serde_json::to_string(rec)?);
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        file.flush()?;
        let byte_end = file.stream_position()?;
        manifest.shards.insert(
            b,
            ShardMark {
                count: rows.len() as u64,
                byte_end,
            },
        );
        manifest.store(&man_path)?;
        written += rows.len() as u64;
    }

    let expected: u64 = torsion28::family::count_exact(to)
        - if from > 2 {
            torsion28::family::count_exact(from - 1)
        } else {
            0
        };
    let total: u64 = manifest.shards.values().map(|s| s.count).sum();
    if total != expected {
        bail!("record count {total} does not match the exact count {expected}");
    }
    manifest.complete = true;
    manifest.store(&man_path)?;
    Ok((written, manifest))
}

/// Read every record of a JSONL dataset.
pub fn read_dataset(path: &Path) -> Result<Vec<CurveRecord>> {
    let data = std::fs::read_to_string(path)
        .with_context(|| format!("reading dataset {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in data.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: CurveRecord = serde_json::from_str(line)
            .with_context(|| format!("line {} of {}", i + 1, path.display()))?;
        out.push(rec);
    }
    Ok(out)
}
