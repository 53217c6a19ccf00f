//! Append-only L-value cache: 16-byte records (p: u64 LE, value: f64 LE)
//! plus a JSON sidecar (`<path>.meta`) pinning the weight-table version.
//! A version mismatch invalidates the cache with a warning; a file length
//! that is not a multiple of 16 is corruption and aborts the run.

use crate::CliError;
use lchi_core::arith::PrimeTable;
use lchi_core::lcentral::afe_value;
use lchi_core::special::omega::OmegaTable;
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Identifies the ψ-table discretization; bump on any change that moves
/// computed values.
pub const WEIGHTS_VERSION: &str = "omega-lagrange3-l2.5e-3-t4e-2-v1";

const RECORD: usize = 16;

pub struct LCache {
    path: Option<PathBuf>,
    map: HashMap<u64, f64>,
    fresh: Vec<(u64, f64)>,
    /// true when the on-disk content is not reusable (missing, stale version)
    rewrite: bool,
}

fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

#[derive(serde::Serialize, serde::Deserialize)]
struct Meta {
    weights_version: String,
}

impl LCache {
    /// In-memory only; nothing persists.
    pub fn ephemeral() -> Self {
        LCache {
            path: None,
            map: HashMap::new(),
            fresh: Vec::new(),
            rewrite: false,
        }
    }

    pub fn open(path: &Path) -> Result<Self, CliError> {
        let mut cache = LCache {
            path: Some(path.to_path_buf()),
            map: HashMap::new(),
            fresh: Vec::new(),
            rewrite: true,
        };
        let bytes = match std::fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => {
                return Err(CliError::Resource(format!(
                    "cannot read cache {}: {e}",
                    path.display()
                )))
            }
        };
        if bytes.len() % RECORD != 0 {
            return Err(CliError::Resource(format!(
                "cache {} is corrupt: {} bytes is not a whole number of 16-byte records",
                path.display(),
                bytes.len()
            )));
        }
        let meta_ok = std::fs::read_to_string(meta_path(path))
            .ok()
            .and_then(|t| serde_json::from_str::<Meta>(&t).ok())
            .is_some_and(|m| m.weights_version == WEIGHTS_VERSION);
        if !meta_ok {
            eprintln!(
                "warning: cache {} has a different weights version; recomputing",
                path.display()
            );
            return Ok(cache);
        }
        for rec in bytes.chunks_exact(RECORD) {
            let p = u64::from_le_bytes(rec[..8].try_into().unwrap());
            let v = f64::from_le_bytes(rec[8..].try_into().unwrap());
            cache.map.insert(p, v);
        }
        cache.rewrite = false;
        Ok(cache)
    }

    /// L(1/2, χ_p) through the cache, single value.
    pub fn get_or_compute(
        &mut self,
        p: u64,
        omega1: &OmegaTable<f64>,
        table: &PrimeTable,
    ) -> Result<f64, CliError> {
        if let Some(v) = self.map.get(&p) {
            return Ok(*v);
        }
        let v = afe_value(p, omega1, table)?;
        self.map.insert(p, v);
        self.fresh.push((p, v));
        Ok(v)
    }

    /// Fills the cache for every listed conductor, computing misses in
    /// parallel; results come back in input order.
    pub fn fill(
        &mut self,
        ps: &[u64],
        omega1: &OmegaTable<f64>,
        table: &PrimeTable,
        workers: usize,
    ) -> Result<Vec<f64>, CliError> {
        let missing: Vec<u64> = ps.iter().copied().filter(|p| !self.map.contains_key(p)).collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| CliError::Resource(format!("thread pool: {e}")))?;
        let computed: Vec<(u64, f64)> = pool.install(|| {
            missing
                .par_iter()
                .map(|&p| Ok((p, afe_value(p, omega1, table)?)))
                .collect::<Result<_, lchi_core::Error>>()
        })?;
        for &(p, v) in &computed {
            self.map.insert(p, v);
            self.fresh.push((p, v));
        }
        Ok(ps.iter().map(|p| self.map[p]).collect())
    }

    /// Persists new records (sorted by p for reproducible files) through a
    /// single appending writer; existing records are never rewritten.
    pub fn flush(&mut self) -> Result<(), CliError> {
        let Some(path) = self.path.clone() else {
            self.fresh.clear();
            return Ok(());
        };
        if self.fresh.is_empty() && !self.rewrite {
            return Ok(());
        }
        let io = |e: std::io::Error| {
            CliError::Resource(format!("cannot write cache {}: {e}", path.display()))
        };
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(!self.rewrite)
            .write(true)
            .truncate(self.rewrite)
            .open(&path)
            .map_err(io)?;
        let mut records: Vec<(u64, f64)> = if self.rewrite {
            self.map.iter().map(|(&p, &v)| (p, v)).collect()
        } else {
            std::mem::take(&mut self.fresh)
        };
        records.sort_unstable_by_key(|&(p, _)| p);
        let mut buf = Vec::with_capacity(records.len() * RECORD);
        for (p, v) in &records {
            buf.extend_from_slice(&p.to_le_bytes());
            buf.extend_from_slice(&v.to_le_bytes());
        }
        file.write_all(&buf).map_err(io)?;
        file.flush().map_err(io)?;
        let meta = serde_json::to_string(&Meta {
            weights_version: WEIGHTS_VERSION.to_string(),
        })
        .expect("meta serializes");
        std::fs::write(meta_path(&path), meta).map_err(io)?;
        self.fresh.clear();
        self.rewrite = false;
        Ok(())
    }
}
