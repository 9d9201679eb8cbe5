//! Per-block CSV cache of field records.

use super::{compute_block, FieldRecord};
use crate::error::{Error, Result};
use log::warn;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

/// Discriminants per cache file.
pub const BLOCK: u64 = 100_000;

const MAGIC: &str = "# torsionlab field cache v1";

/// `TORSIONLAB_CACHE`, else the user cache directory, else `.torsionlab-cache`.
pub fn default_cache_dir() -> PathBuf {
    if let Some(p) = std::env::var_os("TORSIONLAB_CACHE") {
        return PathBuf::from(p);
    }
    if let Some(p) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(p).join("torsionlab");
    }
    if let Some(p) = std::env::var_os("HOME") {
        return PathBuf::from(p).join(".cache").join("torsionlab");
    }
    PathBuf::from(".torsionlab-cache")
}

fn block_path(dir: &Path, imaginary: bool, k: u64) -> PathBuf {
    dir.join(format!("{}-{k:05}.csv", if imaginary { "imag" } else { "real" }))
}

fn header(imaginary: bool, k: u64) -> String {
    format!("sign={} lo={} hi={}", if imaginary { "imag" } else { "real" }, k * BLOCK, (k + 1) * BLOCK - 1)
}

pub(crate) fn render(records: &[FieldRecord], imaginary: bool, k: u64) -> String {
    let mut s = format!("{MAGIC}\n# {}\nD,h,divisors,unit_norm\n", header(imaginary, k));
    for r in records {
        let divs: Vec<String> = r.divisors.iter().map(|d| d.to_string()).collect();
        let unit = r.unit_norm.map(|u| u.to_string()).unwrap_or_default();
        writeln!(s, "{},{},{},{}", r.d, r.h, divs.join(";"), unit).unwrap();
    }
    writeln!(s, "# complete {}", records.len()).unwrap();
    s
}

pub(crate) fn parse(text: &str, imaginary: bool, k: u64) -> Result<Vec<FieldRecord>> {
    let bad = |m: &str| Error::Cache(m.to_string());
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad("missing cache header"));
    }
    if lines.next() != Some(format!("# {}", header(imaginary, k)).as_str()) {
        return Err(bad("block header mismatch"));
    }
    if lines.next() != Some("D,h,divisors,unit_norm") {
        return Err(bad("missing column header"));
    }
    let mut out = Vec::new();
    for line in lines {
        if let Some(n) = line.strip_prefix("# complete ") {
            let n: usize = n.parse().map_err(|_| bad("bad footer"))?;
            if n != out.len() {
                return Err(bad("row count mismatch"));
            }
            return Ok(out);
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(bad("wrong number of fields"));
        }
        let d: i64 = f[0].parse().map_err(|_| bad("bad D"))?;
        let h: u64 = f[1].parse().map_err(|_| bad("bad h"))?;
        let divisors = if f[2].is_empty() {
            Vec::new()
        } else {
            f[2].split(';').map(|x| x.parse().map_err(|_| bad("bad divisor"))).collect::<Result<Vec<u64>>>()?
        };
        let unit_norm = if f[3].is_empty() { None } else { Some(f[3].parse().map_err(|_| bad("bad unit norm"))?) };
        if divisors.iter().product::<u64>() != h {
            return Err(bad("divisors do not multiply to h"));
        }
        out.push(FieldRecord { d, h, divisors, unit_norm });
    }
    Err(bad("missing completion footer"))
}

/// Read a block file, or compute and persist it when missing or damaged.
pub(crate) fn load_or_build(dir: &Path, imaginary: bool, k: u64) -> Result<Vec<FieldRecord>> {
    let path = block_path(dir, imaginary, k);
    if let Ok(text) = fs::read_to_string(&path) {
        match parse(&text, imaginary, k) {
            Ok(records) => return Ok(records),
            Err(e) => warn!("rebuilding {}: {e}", path.display()),
        }
    }
    let records = compute_block(imaginary, k * BLOCK, (k + 1) * BLOCK - 1)?;
    fs::create_dir_all(dir)?;
    static SEQ: AtomicU64 = AtomicU64::new(0);
    let tmp = path.with_extension(format!("tmp{}-{}", std::process::id(), SEQ.fetch_add(1, Ordering::Relaxed)));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(render(&records, imaginary, k).as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(records)
}
