//! File formats: raw float64 arrays with JSON manifests, hologram bundles,
//! zero-table and error-curve CSV, and 16-bit PGM quicklooks.
//!
//! Raw arrays are little-endian f64, row-major; the manifest lives next to
//! the raw file with the extension swapped to `.json`. Floats in CSV use
//! Rust's shortest-roundtrip formatting, so re-parsing reproduces the exact
//! bits.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::fields::{ComplexField2D, FresnelGeometry, Grid2D, RealField2D};
use crate::forward::{Hologram, Model};
use crate::genfn::ZeroTable;
use crate::pw::WksPoint;

/// Manifest accompanying every raw array file.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayManifest {
    pub n: usize,
    pub extent: f64,
    /// "real" or "complex-interleaved"
    pub kind: String,
}

fn manifest_path(raw: &Path) -> PathBuf {
    raw.with_extension("json")
}

fn write_manifest<T: serde::Serialize>(raw: &Path, manifest: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| Error::Manifest(e.to_string()))?;
    fs::write(manifest_path(raw), text + "\n")?;
    Ok(())
}

fn read_manifest<T: serde::de::DeserializeOwned>(raw: &Path) -> Result<T> {
    let p = manifest_path(raw);
    let text = fs::read_to_string(&p).map_err(|e| {
        Error::Manifest(format!("missing or unreadable manifest {}: {e}", p.display()))
    })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Manifest(format!("bad manifest {}: {e}", p.display())))
}

fn write_f64s(path: &Path, values: impl Iterator<Item = f64>) -> Result<()> {
    let mut buf = Vec::new();
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, buf)?;
    Ok(())
}

fn read_f64s(path: &Path, expected: usize) -> Result<Vec<f64>> {
    let bytes = fs::read(path)?;
    if bytes.len() != expected * 8 {
        return Err(Error::Manifest(format!(
            "{}: expected {} bytes ({expected} float64), found {}",
            path.display(),
            expected * 8,
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

pub fn write_real_field(raw: &Path, field: &RealField2D) -> Result<()> {
    write_f64s(raw, field.values.iter().copied())?;
    write_manifest(
        raw,
        &ArrayManifest { n: field.grid.n, extent: field.grid.extent, kind: "real".into() },
    )
}

pub fn read_real_field(raw: &Path) -> Result<RealField2D> {
    let m: ArrayManifest = read_manifest(raw)?;
    if m.kind != "real" {
        return Err(Error::Manifest(format!("expected kind \"real\", found \"{}\"", m.kind)));
    }
    let grid = Grid2D::new(m.n, m.extent)?;
    Ok(RealField2D { grid, values: read_f64s(raw, m.n * m.n)? })
}

pub fn write_complex_field(raw: &Path, field: &ComplexField2D) -> Result<()> {
    write_f64s(raw, field.values.iter().flat_map(|v| [v.re, v.im]))?;
    write_manifest(
        raw,
        &ArrayManifest {
            n: field.grid.n,
            extent: field.grid.extent,
            kind: "complex-interleaved".into(),
        },
    )
}

pub fn read_complex_field(raw: &Path) -> Result<ComplexField2D> {
    let m: ArrayManifest = read_manifest(raw)?;
    if m.kind != "complex-interleaved" {
        return Err(Error::Manifest(format!(
            "expected kind \"complex-interleaved\", found \"{}\"",
            m.kind
        )));
    }
    let grid = Grid2D::new(m.n, m.extent)?;
    let flat = read_f64s(raw, 2 * m.n * m.n)?;
    Ok(ComplexField2D {
        grid,
        values: flat.chunks_exact(2).map(|c| num_complex::Complex64::new(c[0], c[1])).collect(),
    })
}

/// Manifest of a hologram bundle: the raw intensity plus the geometry that
/// produced it.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HologramManifest {
    pub k: f64,
    pub b: f64,
    pub d: f64,
    /// Fresnel number, recomputable from (k, b, d); stored for convenience.
    pub f: f64,
    pub extent: f64,
    pub n: usize,
    pub model: Model,
}

pub fn write_hologram(raw: &Path, hologram: &Hologram) -> Result<()> {
    write_f64s(raw, hologram.intensity.values.iter().copied())?;
    let g = hologram.geometry;
    write_manifest(
        raw,
        &HologramManifest {
            k: g.k,
            b: g.b,
            d: g.d,
            f: g.fresnel_number(),
            extent: hologram.intensity.grid.extent,
            n: hologram.intensity.grid.n,
            model: hologram.model,
        },
    )
}

pub fn read_hologram(raw: &Path) -> Result<Hologram> {
    let m: HologramManifest = read_manifest(raw)?;
    let geometry = FresnelGeometry::new(m.k, m.b, m.d)?;
    if (geometry.fresnel_number() - m.f).abs() > 1e-9 * m.f.abs().max(1.0) {
        return Err(Error::Manifest(format!(
            "manifest f = {} disagrees with k·b²/(2π·d) = {}",
            m.f,
            geometry.fresnel_number()
        )));
    }
    let grid = Grid2D::new(m.n, m.extent)?;
    Ok(Hologram {
        intensity: RealField2D { grid, values: read_f64s(raw, m.n * m.n)? },
        geometry,
        model: m.model,
    })
}

/// CSV export of a zero table: lambda, lambda_sq, l, dZ, family.
///
/// lambda_sq comes from the defining identity (f·(l+½) for phase, f·l for
/// attenuation), which is exact in f64; squaring lambda would round.
pub fn write_zero_table_csv(path: &Path, table: &ZeroTable) -> Result<()> {
    let mut out = String::from("lambda,lambda_sq,l,dZ,family\n");
    for e in &table.entries {
        let lambda_sq = match table.kind {
            crate::genfn::GenFnKind::Phase => table.f as f64 * (e.l as f64 + 0.5),
            crate::genfn::GenFnKind::Attenuation => table.f as f64 * e.l as f64,
        };
        out.push_str(&format!("{},{},{},{},{}\n", e.lambda, lambda_sq, e.l, e.d_z, e.family));
    }
    fs::write(path, out)?;
    Ok(())
}

/// CSV export of an error curve: t, truth, approx, error.
pub fn write_error_curve_csv(path: &Path, curve: &[WksPoint]) -> Result<()> {
    let mut out = String::from("t,truth,approx,error\n");
    for p in curve {
        out.push_str(&format!("{},{},{},{}\n", p.t, p.truth, p.approx, p.error));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Min-max scaling applied by [`write_pgm16`]; record it in the run manifest
/// so pixel values can be mapped back.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PgmScale {
    pub min: f64,
    pub max: f64,
}

/// 16-bit binary PGM (P5) quicklook, min-max scaled. Pixel = round(65535 ·
/// (v − min)/(max − min)); a constant field maps to all zeros.
pub fn write_pgm16(path: &Path, field: &RealField2D) -> Result<PgmScale> {
    let min = field.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let n = field.grid.n;
    let mut file = fs::File::create(path)?;
    write!(file, "P5\n{n} {n}\n65535\n")?;
    let mut buf = Vec::with_capacity(2 * n * n);
    for &v in &field.values {
        let p = if span > 0.0 {
            ((v - min) / span * 65535.0).round() as u16
        } else {
            0
        };
        buf.extend_from_slice(&p.to_be_bytes()); // PGM 16-bit is big-endian
    }
    file.write_all(&buf)?;
    Ok(PgmScale { min, max })
}
