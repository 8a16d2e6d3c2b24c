//! Binary field files and trajectory directories.
//!
//! A field file is `QSF1`, then `N` as little-endian `u32`, `L` as
//! little-endian `f64`, then the `N^2` samples as little-endian `f64` in
//! row-major order (`x2` outer). A trajectory directory holds one field file
//! per node, `manifest.json`, and optionally `picard.csv`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::grid::GridSpec;
use crate::params::SpaceParams;
use crate::solver::PicardReport;
use crate::time::Trajectory;

const MAGIC: &[u8; 4] = b"QSF1";
const HEADER: usize = 4 + 4 + 8;

pub fn encode_field(f: &RealField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 8 * f.values().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(f.grid().n() as u32).to_le_bytes());
    out.extend_from_slice(&f.grid().length().to_le_bytes());
    for v in f.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8], path: &Path) -> Result<RealField> {
    let bad = |reason: String| Error::Format {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < HEADER || &bytes[..4] != MAGIC {
        return Err(bad("missing QSF1 header".into()));
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
    let length = f64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
    let expected = HEADER + 8 * n * n;
    if bytes.len() != expected {
        return Err(bad(format!(
            "expected {expected} bytes for N={n}, found {}",
            bytes.len()
        )));
    }
    let grid = GridSpec::new(n, length).map_err(|e| bad(e.to_string()))?;
    let values = bytes[HEADER..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    RealField::new(grid, values).map_err(|e| bad(e.to_string()))
}

pub fn write_field(path: &Path, f: &RealField) -> Result<()> {
    fs::write(path, encode_field(f)).map_err(|e| Error::io(path, e))
}

pub fn read_field(path: &Path) -> Result<RealField> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_field(&bytes, path)
}

/// Contents of `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryManifest {
    pub times: Vec<f64>,
    pub files: Vec<String>,
    pub params: SpaceParams,
    pub config_hash: String,
}

pub const MANIFEST: &str = "manifest.json";
pub const PICARD_CSV: &str = "picard.csv";

pub fn write_trajectory(
    dir: &Path,
    traj: &Trajectory,
    params: &SpaceParams,
    config_hash: &str,
    picard: Option<&PicardReport>,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::with_capacity(traj.len());
    for (m, (_, snap)) in traj.iter().enumerate() {
        let name = format!("node_{m:05}.qsf");
        write_field(&dir.join(&name), snap)?;
        files.push(name);
    }
    let manifest = TrajectoryManifest {
        times: traj.times().to_vec(),
        files,
        params: *params,
        config_hash: config_hash.to_string(),
    };
    let path = dir.join(MANIFEST);
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    if let Some(report) = picard {
        let path = dir.join(PICARD_CSV);
        fs::write(&path, report.to_csv()).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

pub fn read_trajectory(dir: &Path) -> Result<(Trajectory, TrajectoryManifest)> {
    let path: PathBuf = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let manifest: TrajectoryManifest = serde_json::from_str(&text)?;
    if manifest.times.len() != manifest.files.len() {
        return Err(Error::Format {
            path,
            reason: "times and files differ in length".into(),
        });
    }
    let snapshots = manifest
        .files
        .iter()
        .map(|f| read_field(&dir.join(f)))
        .collect::<Result<Vec<_>>>()?;
    let traj = Trajectory::new(manifest.times.clone(), snapshots)?;
    Ok((traj, manifest))
}
