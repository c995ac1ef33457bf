//! Binary cache for solved density fields.
//!
//! Format ("MKDF1"): magic, then window `R`, grid spacing `h` and the node
//! counts as 64-bit little-endian, then `u` row-major as IEEE-754 float64,
//! then one mask byte per node. A trailer holds the puncture patches and the
//! final residual so a loaded field evaluates identically to a fresh solve.
//!
//! Files are keyed by a content hash of the domain config plus the solver
//! parameters that shape the grid, so `--cache` can point at a directory
//! shared across runs.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::domain::{Domain, DomainConfig};
use crate::metric::{DensityField, NodeKind, PuncturePatch, SolveParams};

pub const MAGIC: &[u8; 5] = b"MKDF1";

/// Environment variable consulted when no cache path is given.
pub const CACHE_DIR_ENV: &str = "MERIDIAN_KIT_CACHE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("not a density cache file (bad magic)")]
    BadMagic,
    #[error("truncated or corrupt density cache file")]
    Corrupt,
}

/// Content hash of the domain plus the grid-shaping solver parameters.
pub fn cache_key(domain: &Domain, params: &SolveParams) -> String {
    let config = DomainConfig::from_domain(domain);
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(&config).expect("domain config serializes"));
    hasher.update(format!(
        "|grid_h={:?}|tol={}|max_newton={}|max_side={}",
        params.grid_h, params.tol, params.max_newton, params.max_nodes_per_side
    ));
    let digest = hasher.finalize();
    digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
}

/// File path for a keyed entry under `dir`.
pub fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.mkdf"))
}

fn mask_byte(kind: NodeKind) -> u8 {
    match kind {
        NodeKind::Outside => 0,
        NodeKind::Dirichlet => 1,
        NodeKind::Interior => 2,
        NodeKind::Patch(k) => 3 + (k as u8),
    }
}

fn mask_kind(b: u8) -> Result<NodeKind, CacheError> {
    Ok(match b {
        0 => NodeKind::Outside,
        1 => NodeKind::Dirichlet,
        2 => NodeKind::Interior,
        k => NodeKind::Patch((k - 3) as usize),
    })
}

pub fn write_field(path: &Path, field: &DensityField) -> Result<(), CacheError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut buf = Vec::with_capacity(field.u.len() * 9 + 64);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&field.window.to_le_bytes());
    buf.extend_from_slice(&field.h.to_le_bytes());
    buf.extend_from_slice(&(field.nx as u64).to_le_bytes());
    buf.extend_from_slice(&(field.ny as u64).to_le_bytes());
    for &v in &field.u {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for &m in &field.mask {
        buf.push(mask_byte(m));
    }
    buf.extend_from_slice(&(field.patches.len() as u64).to_le_bytes());
    for p in &field.patches {
        buf.extend_from_slice(&(p.component as u64).to_le_bytes());
        buf.extend_from_slice(&p.center.x.to_le_bytes());
        buf.extend_from_slice(&p.center.y.to_le_bytes());
        buf.extend_from_slice(&p.radius.to_le_bytes());
        buf.extend_from_slice(&p.shift.to_le_bytes());
    }
    buf.extend_from_slice(&field.residual.to_le_bytes());
    let tmp = path.with_extension("mkdf.tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<DensityField, CacheError> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let mut cur = bytes.as_slice();

    let mut take = |n: usize| -> Result<&[u8], CacheError> {
        if cur.len() < n {
            return Err(CacheError::Corrupt);
        }
        let (head, rest) = cur.split_at(n);
        cur = rest;
        Ok(head)
    };
    let magic = take(5)?;
    if magic != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let read_f64 = |s: &[u8]| f64::from_le_bytes(s.try_into().unwrap());
    let read_u64 = |s: &[u8]| u64::from_le_bytes(s.try_into().unwrap());

    let window = read_f64(take(8)?);
    let h = read_f64(take(8)?);
    let nx = read_u64(take(8)?) as usize;
    let ny = read_u64(take(8)?) as usize;
    let n = nx.checked_mul(ny).ok_or(CacheError::Corrupt)?;
    if n == 0 || n > (1usize << 32) {
        return Err(CacheError::Corrupt);
    }

    let raw_u = take(n * 8)?;
    let mut u = Vec::with_capacity(n);
    for chunk in raw_u.chunks_exact(8) {
        u.push(read_f64(chunk));
    }
    let raw_mask = take(n)?;
    let mut mask = Vec::with_capacity(n);
    for &b in raw_mask {
        mask.push(mask_kind(b)?);
    }

    let np = read_u64(take(8)?) as usize;
    if np > 4096 {
        return Err(CacheError::Corrupt);
    }
    let mut patches = Vec::with_capacity(np);
    for _ in 0..np {
        let component = read_u64(take(8)?) as usize;
        let x = read_f64(take(8)?);
        let y = read_f64(take(8)?);
        let radius = read_f64(take(8)?);
        let shift = read_f64(take(8)?);
        patches.push(PuncturePatch {
            component,
            center: crate::geom::pt(x, y),
            radius,
            shift,
        });
    }
    let residual = read_f64(take(8)?);

    Ok(DensityField {
        window,
        h,
        nx,
        ny,
        u,
        mask,
        patches,
        residual,
    })
}

/// Load the cached field for this domain if present; otherwise `None`.
pub fn load(dir: &Path, domain: &Domain, params: &SolveParams) -> Option<DensityField> {
    let path = entry_path(dir, &cache_key(domain, params));
    read_field(&path).ok()
}

/// Store the field under the domain's key. Errors are reported, not fatal.
pub fn store(
    dir: &Path,
    domain: &Domain,
    params: &SolveParams,
    field: &DensityField,
) -> Result<PathBuf, CacheError> {
    let path = entry_path(dir, &cache_key(domain, params));
    write_field(&path, field)?;
    Ok(path)
}

/// Solve the density, consulting and populating the cache when a directory
/// is given. Cache write failures are ignored: the field is still returned.
pub fn solve_or_load(
    domain: &Domain,
    params: &SolveParams,
    dir: Option<&Path>,
) -> Result<DensityField, crate::metric::MetricError> {
    if let Some(d) = dir {
        if let Some(field) = load(d, domain, params) {
            return Ok(field);
        }
    }
    let field = crate::metric::solve_density(domain, params)?;
    if let Some(d) = dir {
        let _ = store(d, domain, params, &field);
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_domain, Comp};
    use crate::geom::Pt;
    use crate::metric::solve_density;

    #[test]
    fn round_trip_preserves_field() {
        let domain =
            make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap();
        let params = SolveParams {
            grid_h: Some(0.02),
            ..SolveParams::default()
        };
        let field = solve_density(&domain, &params).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = store(dir.path(), &domain, &params, &field).unwrap();
        let loaded = read_field(&path).unwrap();
        assert_eq!(loaded.nx, field.nx);
        assert_eq!(loaded.ny, field.ny);
        // u holds NaN at outside nodes, so compare bit patterns
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&loaded.u), bits(&field.u));
        assert_eq!(loaded.mask, field.mask);
        assert_eq!(loaded.patches.len(), field.patches.len());
        assert_eq!(loaded.residual, field.residual);
        assert!(load(dir.path(), &domain, &params).is_some());
    }

    #[test]
    fn bad_magic_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.mkdf");
        std::fs::write(&path, b"NOPE!rest").unwrap();
        assert!(matches!(read_field(&path), Err(CacheError::BadMagic)));
    }
}
