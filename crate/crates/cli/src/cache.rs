//! Per-prime class-table cache files.
//!
//! One CSV file per prime, human-inspectable and diffable:
//!
//! ```text
//! # ellstat-cache v1 p=5 g=2 crc=9a75d977
//! class_id,r,s,orbit_size,trace,n1,n2
//! 0,0,1,2,0,1,6
//! ...
//! ```
//!
//! The crc field is the CRC-32 (IEEE) of everything after the header
//! line. Loading re-runs the orbit scan and cross-checks every row, so a
//! reloaded table equals a freshly built one field-by-field.

use std::fs;
use std::path::{Path, PathBuf};

use ellstat::{reassemble_class_table, ClassSeed, ClassTable, PrimeContext};
use thiserror::Error;

const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("no cache entry for p = {0}")]
    Miss(u64),
    #[error("cache format {found} is not {FORMAT_VERSION}")]
    VersionMismatch { found: String },
    #[error("corrupt cache: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] ellstat::Error),
}

pub fn cache_path(dir: &Path, p: u64) -> PathBuf {
    dir.join(format!("p{p}.csv"))
}

fn body_of(table: &ClassTable) -> String {
    let mut body = String::from("class_id,r,s,orbit_size,trace,n1,n2\n");
    for c in table.classes() {
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.id, c.representative.0, c.representative.1, c.orbit_size, c.stats.trace,
            c.stats.n1, c.stats.n2
        ));
    }
    body
}

/// Writes the class table; returns the file path.
pub fn cache_store(dir: &Path, g: u64, table: &ClassTable) -> Result<PathBuf, CacheError> {
    fs::create_dir_all(dir)?;
    let body = body_of(table);
    let header = format!(
        "# ellstat-cache {FORMAT_VERSION} p={} g={} crc={:08x}\n",
        table.p(),
        g,
        crc32(body.as_bytes())
    );
    let path = cache_path(dir, table.p());
    fs::write(&path, header + &body)?;
    Ok(path)
}

/// Loads and fully validates the cached table for p.
pub fn cache_load(dir: &Path, p: u64) -> Result<ClassTable, CacheError> {
    let path = cache_path(dir, p);
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(CacheError::Miss(p)),
        Err(e) => return Err(e.into()),
    };

    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| CacheError::Corrupt("missing header line".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    match fields.as_slice() {
        ["#", "ellstat-cache", version, rest @ ..] => {
            if *version != FORMAT_VERSION {
                return Err(CacheError::VersionMismatch { found: version.to_string() });
            }
            let mut p_header = None;
            let mut g_header = None;
            let mut crc_header = None;
            for kv in rest {
                match kv.split_once('=') {
                    Some(("p", v)) => p_header = v.parse::<u64>().ok(),
                    Some(("g", v)) => g_header = v.parse::<u64>().ok(),
                    Some(("crc", v)) => crc_header = u32::from_str_radix(v, 16).ok(),
                    _ => {}
                }
            }
            let (Some(ph), Some(gh), Some(crc)) = (p_header, g_header, crc_header) else {
                return Err(CacheError::Corrupt("incomplete header".into()));
            };
            if ph != p {
                return Err(CacheError::Corrupt(format!("file is for p = {ph}, not {p}")));
            }
            if crc != crc32(body.as_bytes()) {
                return Err(CacheError::Corrupt("checksum mismatch".into()));
            }
            let ctx = PrimeContext::new(p)?;
            if ctx.generator() != gh {
                return Err(CacheError::Corrupt(format!(
                    "generator {gh} differs from {}",
                    ctx.generator()
                )));
            }
            let seeds = parse_rows(body)?;
            reassemble_class_table(&ctx, &seeds).map_err(|e| match e {
                ellstat::Error::SeedMismatch(msg) => CacheError::Corrupt(msg),
                other => CacheError::Core(other),
            })
        }
        _ => Err(CacheError::Corrupt("not an ellstat cache file".into())),
    }
}

fn parse_rows(body: &str) -> Result<Vec<ClassSeed>, CacheError> {
    let mut lines = body.lines();
    if lines.next() != Some("class_id,r,s,orbit_size,trace,n1,n2") {
        return Err(CacheError::Corrupt("bad column header".into()));
    }
    let mut seeds = Vec::new();
    for (i, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        let parsed = (|| -> Option<ClassSeed> {
            let [id, r, s, orbit, trace, n1, n2] = cols.as_slice() else { return None };
            if id.parse::<usize>().ok()? != i {
                return None;
            }
            Some(ClassSeed {
                representative: (r.parse().ok()?, s.parse().ok()?),
                orbit_size: orbit.parse().ok()?,
                trace: trace.parse().ok()?,
                n1: n1.parse().ok()?,
                n2: n2.parse().ok()?,
            })
        })();
        match parsed {
            Some(seed) => seeds.push(seed),
            None => return Err(CacheError::Corrupt(format!("bad row {}", i + 1))),
        }
    }
    Ok(seeds)
}

/// Loads from the cache when possible, otherwise builds and stores.
pub fn load_or_build(dir: Option<&Path>, p: u64) -> Result<ClassTable, CacheError> {
    let Some(dir) = dir else {
        let ctx = PrimeContext::new(p)?;
        return Ok(ellstat::build_class_table(&ctx));
    };
    match cache_load(dir, p) {
        Ok(table) => Ok(table),
        Err(CacheError::Miss(_)) => {
            let ctx = PrimeContext::new(p)?;
            let table = ellstat::build_class_table(&ctx);
            cache_store(dir, ctx.generator(), &table)?;
            Ok(table)
        }
        Err(other) => Err(other),
    }
}

/// CRC-32 (IEEE 802.3, reflected).
pub fn crc32(data: &[u8]) -> u32 {
    let mut crc = 0xFFFF_FFFFu32;
    for &byte in data {
        crc ^= byte as u32;
        for _ in 0..8 {
            let mask = (crc & 1).wrapping_neg();
            crc = (crc >> 1) ^ (0xEDB8_8320 & mask);
        }
    }
    !crc
}

#[cfg(test)]
mod tests {
    use super::*;
    use ellstat::build_class_table;

    #[test]
    fn crc32_check_value() {
        assert_eq!(crc32(b"123456789"), 0xCBF4_3926);
        assert_eq!(crc32(b""), 0);
    }

    #[test]
    fn store_then_load_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        for p in [5u64, 7, 29] {
            let ctx = PrimeContext::new(p).unwrap();
            let table = build_class_table(&ctx);
            cache_store(dir.path(), ctx.generator(), &table).unwrap();
            let loaded = cache_load(dir.path(), p).unwrap();
            assert_eq!(table, loaded);
        }
        assert_eq!(cache_load(dir.path(), 5).unwrap().class_count(), 12);
    }

    #[test]
    fn miss_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(cache_load(dir.path(), 11), Err(CacheError::Miss(11))));

        let ctx = PrimeContext::new(11).unwrap();
        let table = build_class_table(&ctx);
        let path = cache_store(dir.path(), ctx.generator(), &table).unwrap();

        // Flip one digit in a data row: checksum must catch it.
        let text = fs::read_to_string(&path).unwrap();
        let tampered = text.replacen("0,0,1,", "0,0,2,", 1);
        assert_ne!(text, tampered);
        fs::write(&path, tampered).unwrap();
        assert!(matches!(cache_load(dir.path(), 11), Err(CacheError::Corrupt(_))));

        // Wrong version token.
        let bumped = text.replacen("ellstat-cache v1", "ellstat-cache v2", 1);
        fs::write(&path, bumped).unwrap();
        assert!(matches!(
            cache_load(dir.path(), 11),
            Err(CacheError::VersionMismatch { .. })
        ));

        // A consistent body with a recomputed crc but mismatching stats
        // is still rejected by the rebuild cross-check.
        let (header, body) = text.split_once('\n').unwrap();
        let forged_body = body.replacen(",1,6\n", ",1,7\n", 1);
        assert_ne!(body, forged_body);
        let crc = crc32(forged_body.as_bytes());
        let mut forged_header: Vec<&str> = header.split(' ').collect();
        let crc_field = format!("crc={crc:08x}");
        *forged_header.last_mut().unwrap() = &crc_field;
        fs::write(&path, forged_header.join(" ") + "\n" + &forged_body).unwrap();
        assert!(matches!(cache_load(dir.path(), 11), Err(CacheError::Corrupt(_))));
    }

    #[test]
    fn load_or_build_populates() {
        let dir = tempfile::tempdir().unwrap();
        let t1 = load_or_build(Some(dir.path()), 13).unwrap();
        assert!(cache_path(dir.path(), 13).exists());
        let t2 = load_or_build(Some(dir.path()), 13).unwrap();
        assert_eq!(t1, t2);
        let t3 = load_or_build(None, 13).unwrap();
        assert_eq!(t1, t3);
    }
}
