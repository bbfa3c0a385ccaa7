//! Output plumbing: atomic file writes, content digests, CSV/JSON
//! rendering, and the run manifest.
//!
//! Output files never contain timestamps or other run-volatile data, so a
//! rerun with the same spec and seed reproduces them byte for byte; the
//! manifest records their digests (and is the only place timestamps live).

use crate::CliError;
use dynadeg_core::univar::UPoly;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Write via a temp file in the same directory plus a rename, so readers
/// never observe a half-written file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Computation(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)
        .map_err(|e| CliError::Computation(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| CliError::Computation(format!("cannot finalize {}: {e}", path.display())))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskEntry {
    pub name: String,
    pub status: String,
    pub note: String,
    pub outputs: Vec<OutputEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub spec_digest: String,
    pub tool_version: String,
    pub seed: u64,
    pub created_unix: u64,
    pub updated_unix: u64,
    pub tasks: Vec<TaskEntry>,
}

/// Files written for one task, digested as they go.
pub struct Sink {
    dir: PathBuf,
    outputs: Vec<OutputEntry>,
}

impl Sink {
    pub fn new(dir: PathBuf) -> Sink {
        Sink { dir, outputs: vec![] }
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        write_atomic(&self.dir.join(name), bytes)?;
        self.outputs.push(OutputEntry { file: name.to_string(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    pub fn finish(self, task: &str, status: &str, note: &str) -> TaskEntry {
        TaskEntry {
            name: task.to_string(),
            status: status.to_string(),
            note: note.to_string(),
            outputs: self.outputs,
        }
    }
}

/// Insert or replace one task entry. A manifest left by a different spec
/// or seed is discarded: its inventory describes a different run.
pub fn update_manifest(
    dir: &Path,
    spec_digest: &str,
    seed: u64,
    task: TaskEntry,
) -> Result<(), CliError> {
    let path = dir.join("manifest.json");
    let now = now_unix();
    let mut m = fs::read(&path)
        .ok()
        .and_then(|b| serde_json::from_slice::<Manifest>(&b).ok())
        .filter(|m| m.spec_digest == spec_digest && m.seed == seed)
        .unwrap_or_else(|| Manifest {
            spec_digest: spec_digest.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            created_unix: now,
            updated_unix: now,
            tasks: vec![],
        });
    m.updated_unix = now;
    m.tasks.retain(|t| t.name != task.name);
    m.tasks.push(task);
    m.tasks.sort_by(|a, b| a.name.cmp(&b.name));
    write_atomic(&path, &json_bytes(&m))
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, CliError> {
    let path = dir.join("manifest.json");
    let bytes = fs::read(&path)
        .map_err(|e| CliError::Validation(format!("no completed run in {}: {e}", dir.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Validation(format!("corrupt manifest {}: {e}", path.display())))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(value).expect("serializable value");
    b.push(b'\n');
    b
}

pub fn csv_from_rows(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("csv record");
    for r in rows {
        w.write_record(r).expect("csv record");
    }
    w.into_inner().expect("csv buffer")
}

/// Human form of an integer polynomial in one variable, highest power
/// first.
pub fn upoly_string(p: &UPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let deg = p.degree().expect("nonzero polynomial");
    let mut out = String::new();
    for i in (0..=deg).rev() {
        let c = p.coeff(i);
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mag = c.abs();
        let show_coeff = i == 0 || !mag.is_one();
        if show_coeff {
            out.push_str(&mag.to_string());
        }
        if i > 0 {
            if show_coeff {
                out.push('*');
            }
            out.push_str(var);
            if i > 1 {
                out.push('^');
                out.push_str(&i.to_string());
            }
        }
    }
    out
}
