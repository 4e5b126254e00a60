//! On-disk formats: the run manifest, CSV tables and binary snapshots.
//!
//! Snapshot layout (all little-endian): magic `HOBO`, format version `u32`,
//! `N` as `u64`, `L` as `f64`, then `N` samples as `f64`.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use hobo_core::{Grid, RealField};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};

pub const MANIFEST_NAME: &str = "manifest.json";
pub const SNAPSHOT_MAGIC: &[u8; 4] = b"HOBO";
pub const SNAPSHOT_VERSION: u32 = 1;

pub fn snapshot_name(step: usize) -> String {
    format!("snapshot_{step:08}.bin")
}

pub fn write_snapshot(path: &Path, field: &RealField) -> Result<()> {
    let grid = field.grid();
    let mut buf = Vec::with_capacity(24 + 8 * grid.points());
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    buf.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.points() as u64).to_le_bytes());
    buf.extend_from_slice(&grid.length().to_le_bytes());
    for x in field.samples() {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    fs::write(path, buf).map_err(|e| LabError::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<RealField> {
    let bad = |reason: &str| LabError::Snapshot { path: path.to_path_buf(), reason: reason.to_string() };
    let mut bytes = Vec::new();
    File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(|e| LabError::io(path, e))?;
    if bytes.len() < 24 || &bytes[..4] != SNAPSHOT_MAGIC {
        return Err(bad("not a snapshot file"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != SNAPSHOT_VERSION {
        return Err(bad(&format!("unsupported format version {version}")));
    }
    let n = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let length = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
    if bytes.len() != 24 + 8 * n {
        return Err(bad("length does not match header"));
    }
    let samples = bytes[24..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(RealField::new(&Grid::new(length, n)?, samples)?)
}

/// Snapshots of a directory in step order, with their step indices.
pub fn read_snapshot_dir(dir: &Path) -> Result<Vec<(usize, RealField)>> {
    let mut found = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| LabError::io(dir, e))? {
        let path = entry.map_err(|e| LabError::io(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if let Some(step) = name.strip_prefix("snapshot_").and_then(|s| s.strip_suffix(".bin")) {
            if let Ok(step) = step.parse::<usize>() {
                found.push((step, path));
            }
        }
    }
    found.sort();
    found.into_iter().map(|(step, path)| Ok((step, read_snapshot(&path)?))).collect()
}

/// The run manifest: the full config plus provenance of the outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub code_version: String,
    pub started_unix: u64,
    pub wall_seconds: f64,
    pub threads: usize,
    pub status: String,
    pub warnings: Vec<String>,
    /// Files written next to the manifest, relative to the directory.
    pub outputs: Vec<String>,
    pub results: serde_json::Value,
}

/// An output directory that has been checked for writability.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    /// Create `root` if needed and prove it is writable. Files listed by a
    /// previous manifest in the same directory are removed, so the
    /// directory never mixes outputs of two runs.
    pub fn prepare(root: &Path) -> Result<Self> {
        let unwritable = |source| LabError::Unwritable { path: root.to_path_buf(), source };
        fs::create_dir_all(root).map_err(unwritable)?;
        let probe = root.join(".hobo-write-probe");
        File::create(&probe).and_then(|mut f| f.write_all(b"ok")).map_err(unwritable)?;
        fs::remove_file(&probe).map_err(unwritable)?;

        let manifest = root.join(MANIFEST_NAME);
        if manifest.exists() {
            let text = fs::read_to_string(&manifest).map_err(|e| LabError::io(&manifest, e))?;
            let previous: Manifest = serde_json::from_str(&text)?;
            for name in previous.outputs {
                let path = root.join(&name);
                if Path::new(&name).components().count() == 1 && path.exists() {
                    fs::remove_file(&path).map_err(|e| LabError::io(&path, e))?;
                }
            }
            fs::remove_file(&manifest).map_err(|e| LabError::io(&manifest, e))?;
        }
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    fn track(&mut self, name: &str) -> PathBuf {
        self.written.push(name.to_string());
        self.root.join(name)
    }

    pub fn snapshot(&mut self, step: usize, field: &RealField) -> Result<()> {
        let path = self.track(&snapshot_name(step));
        write_snapshot(&path, field)
    }

    /// Write a CSV with the given header; each row must match its width.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let path = self.track(name);
        let file = File::create(&path).map_err(|e| LabError::io(&path, e))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| LabError::io(&path, e))?;
        Ok(())
    }

    pub fn manifest(self, mut manifest: Manifest) -> Result<PathBuf> {
        manifest.outputs = self.written;
        let path = self.root.join(MANIFEST_NAME);
        let text = serde_json::to_string_pretty(&manifest)?;
        fs::write(&path, text + "\n").map_err(|e| LabError::io(&path, e))?;
        Ok(path)
    }
}

/// Shortest round-trip decimal form, so CSVs are exact and reproducible.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
