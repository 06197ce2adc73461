//! On-disk tensor cache.
//!
//! File layout: a header `landau-coupling v1 N=<N>`, one row
//! `channel,tn,tl,tm,sn,sl,sm,m2,coef` per entry, and a trailer
//! `# sha256=<hex>` over every byte preceding the trailer line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};

use super::{build_tensor, Channel, CouplingTensor, TensorEntry};
use crate::basis::{ModeIndex, ModeLayout};
use crate::{Error, Result};

/// Environment variable overriding the configured cache directory.
pub const TENSOR_DIR_ENV: &str = "LANDAU_TENSOR_DIR";

/// How [`load_or_build`] obtained its tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Built,
    Rebuilt(String),
}

impl CacheStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CacheStatus::Hit => "cache hit",
            CacheStatus::Built => "built",
            CacheStatus::Rebuilt(_) => "rebuilt",
        }
    }
}

/// The environment override if set and nonempty, else `configured`.
pub fn resolve_cache_dir(configured: Option<&Path>) -> Option<PathBuf> {
    match std::env::var_os(TENSOR_DIR_ENV) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => configured.map(Path::to_path_buf),
    }
}

pub fn cache_file_path(dir: &Path, truncation: u32) -> PathBuf {
    dir.join(format!("coupling-N{truncation}.csv"))
}

fn header(truncation: u32) -> String {
    format!("landau-coupling v1 N={truncation}")
}

fn render(tensor: &CouplingTensor) -> String {
    use std::fmt::Write as _;
    let mut body = String::new();
    writeln!(body, "{}", header(tensor.truncation())).unwrap();
    for (t, e) in tensor.iter() {
        writeln!(
            body,
            "{},{},{},{},{},{},{},{},{:.16e}",
            e.channel, t.n, t.l, t.m, e.source.n, e.source.l, e.source.m, e.m_driver, e.coef
        )
        .unwrap();
    }
    body
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `tensor` to `path` through a temporary file and rename.
pub fn write_tensor(tensor: &CouplingTensor, path: &Path) -> Result<()> {
    let body = render(tensor);
    let sum = digest(body.as_bytes());
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        writeln!(f, "# sha256={sum}")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads and validates a cache file for truncation `N`.
pub fn read_tensor(path: &Path, truncation: u32) -> Result<CouplingTensor> {
    let bad = |message: String| Error::Cache { path: path.to_path_buf(), message };
    let text = fs::read_to_string(path)?;
    let body_end = text.trim_end_matches('\n').rfind('\n').map(|i| i + 1).ok_or_else(|| bad("truncated file".into()))?;
    let (body, trailer) = text.split_at(body_end);
    let stored = trailer
        .trim()
        .strip_prefix("# sha256=")
        .ok_or_else(|| bad("missing checksum trailer".into()))?;
    if digest(body.as_bytes()) != stored {
        return Err(bad("checksum mismatch".into()));
    }
    let mut lines = body.lines();
    let head = lines.next().unwrap_or_default();
    if head != header(truncation) {
        return Err(bad(format!("header `{head}` does not match `{}`", header(truncation))));
    }
    let layout = ModeLayout::new(truncation);
    let mut entries = vec![Vec::new(); layout.len()];
    for (i, line) in lines.enumerate() {
        let row = i + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(bad(format!("row {row}: expected 9 fields")));
        }
        let channel: Channel = f[0].parse().map_err(|_| bad(format!("row {row}: unknown channel")))?;
        let int = |s: &str| s.parse::<i64>().map_err(|_| bad(format!("row {row}: invalid integer `{s}`")));
        let (tn, tl, tm, sn, sl, sm, md) = (int(f[1])?, int(f[2])?, int(f[3])?, int(f[4])?, int(f[5])?, int(f[6])?, int(f[7])?);
        let coef: f64 = f[8].parse().map_err(|_| bad(format!("row {row}: invalid coefficient")))?;
        let mode = |n: i64, l: i64, m: i64| -> Result<ModeIndex> {
            if n < 0 || l < 0 {
                return Err(bad(format!("row {row}: negative index")));
            }
            ModeIndex::new(n as u32, l as u32, m as i32).map_err(|e| bad(format!("row {row}: {e}")))
        };
        let target = mode(tn, tl, tm)?;
        let source = mode(sn, sl, sm)?;
        let idx = layout.index(target).ok_or_else(|| bad(format!("row {row}: target beyond truncation")))?;
        entries[idx].push(TensorEntry { channel, source, m_driver: md as i32, coef });
    }
    Ok(CouplingTensor::from_entries(truncation, entries))
}

/// Loads the cached tensor for `N` from `dir`, rebuilding (and rewriting the
/// file) when it is missing or fails validation. Prints one timing line to
/// stderr.
pub fn load_or_build(dir: &Path, truncation: u32) -> Result<(CouplingTensor, CacheStatus)> {
    let start = Instant::now();
    let path = cache_file_path(dir, truncation);
    let (tensor, status) = if path.exists() {
        match read_tensor(&path, truncation) {
            Ok(t) => (t, CacheStatus::Hit),
            Err(Error::Cache { message, .. }) => {
                let t = build_tensor(truncation)?;
                write_tensor(&t, &path)?;
                (t, CacheStatus::Rebuilt(message))
            }
            Err(e) => return Err(e),
        }
    } else {
        let t = build_tensor(truncation)?;
        write_tensor(&t, &path)?;
        (t, CacheStatus::Built)
    };
    eprintln!(
        "coupling tensor N={truncation}: {} in {:.1} ms ({})",
        status.label(),
        start.elapsed().as_secs_f64() * 1e3,
        path.display()
    );
    Ok((tensor, status))
}
