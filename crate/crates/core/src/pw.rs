//! Lagrange-type interpolation in Paley-Wiener space from samples at
//! generating-function zeros (Eq. 10 / Eq. 34), plus the classical WKS
//! truncation benchmark of §8.
//!
//! For a sine-type Z with simple zeros ±λ_j and a bandlimited g,
//!
//! ```text
//! g(t) = Z(t) · Σ_j [ g(λ_j)/((t−λ_j)·Z′(λ_j)) − g(−λ_j)/((t+λ_j)·Z′(λ_j)) ]
//! ```
//!
//! (the second term carries Z′(−λ) = −Z′(λ) for even Z). Truncation keeps
//! the first `n_terms` zeros; a table entry at λ = 0 (synthetic tables only)
//! contributes a single unpaired term.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::genfn::{GenFn, ZeroEntry, ZeroTable};

/// Data g(±λ) aligned to a zero table.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub values_pos: Vec<Complex64>,
    pub values_neg: Vec<Complex64>,
}

impl SampleSet {
    pub fn zeros(n: usize) -> Self {
        Self {
            values_pos: vec![Complex64::new(0.0, 0.0); n],
            values_neg: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    fn check_aligned(&self, table_len: usize) -> Result<()> {
        if self.values_pos.len() != table_len || self.values_neg.len() != table_len {
            return Err(Error::Contract(format!(
                "sample set ({}+/{}−) not aligned to zero table of length {table_len}",
                self.values_pos.len(),
                self.values_neg.len()
            )));
        }
        if self
            .values_pos
            .iter()
            .chain(&self.values_neg)
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::Contract("sample set contains non-finite values".into()));
        }
        Ok(())
    }
}

/// Truncation and near-zero policy for the interpolation series.
#[derive(Debug, Clone, Copy)]
pub struct InterpConfig {
    /// Number of leading table zeros used.
    pub n_terms: usize,
    /// Relative threshold for the t ≈ ±λ cardinal branch.
    pub near_zero_eps: f64,
}

impl InterpConfig {
    pub fn new(n_terms: usize) -> Result<Self> {
        Self::with_eps(n_terms, 1e-8)
    }

    pub fn with_eps(n_terms: usize, near_zero_eps: f64) -> Result<Self> {
        if n_terms < 1 {
            return Err(Error::Contract("n_terms must be ≥ 1".into()));
        }
        if !(near_zero_eps > 0.0 && near_zero_eps < 1e-3) {
            return Err(Error::Contract(format!(
                "near_zero_eps must lie in (0, 1e-3) (got {near_zero_eps})"
            )));
        }
        Ok(Self { n_terms, near_zero_eps })
    }
}

/// Eq. 10 with an externally supplied Z(t); lets synthetic tables (e.g.
/// Z = sin πt) reuse the same series.
fn interpolate_raw(
    z_at_t: f64,
    entries: &[ZeroEntry],
    samples: &SampleSet,
    t: f64,
    cfg: &InterpConfig,
) -> Result<Complex64> {
    samples.check_aligned(entries.len())?;
    if cfg.n_terms > entries.len() {
        return Err(Error::Contract(format!(
            "n_terms = {} exceeds table length {}",
            cfg.n_terms,
            entries.len()
        )));
    }
    let eps = cfg.near_zero_eps * t.abs().max(1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut exact = Complex64::new(0.0, 0.0);
    for (j, e) in entries.iter().take(cfg.n_terms).enumerate() {
        if e.lambda == 0.0 {
            // unpaired central zero (synthetic tables only)
            if t.abs() < eps {
                exact += samples.values_pos[j];
            } else {
                sum += samples.values_pos[j] / (t * e.d_z);
            }
            continue;
        }
        if (t - e.lambda).abs() < eps {
            exact += samples.values_pos[j];
        } else {
            sum += samples.values_pos[j] / ((t - e.lambda) * e.d_z);
        }
        // mirror zero at −λ with Z′(−λ) = −Z′(λ)
        if (t + e.lambda).abs() < eps {
            exact += samples.values_neg[j];
        } else {
            sum -= samples.values_neg[j] / ((t + e.lambda) * e.d_z);
        }
    }
    Ok(exact + z_at_t * sum)
}

/// Truncated Eq. 10 over the first `cfg.n_terms` zeros of `table` and their
/// mirror images.
pub fn interpolate(
    genfn: &GenFn,
    table: &ZeroTable,
    samples: &SampleSet,
    t: f64,
    cfg: &InterpConfig,
) -> Result<Complex64> {
    interpolate_raw(genfn.eval(t), &table.entries, samples, t, cfg)
}

/// Eq. 34: the same series summed in ±λ pairs. Requires Z(0) ≠ 0.
pub fn interpolate_even(
    genfn: &GenFn,
    table: &ZeroTable,
    samples: &SampleSet,
    t: f64,
    cfg: &InterpConfig,
) -> Result<Complex64> {
    samples.check_aligned(table.entries.len())?;
    if cfg.n_terms > table.entries.len() {
        return Err(Error::Contract(format!(
            "n_terms = {} exceeds table length {}",
            cfg.n_terms,
            table.entries.len()
        )));
    }
    if genfn.eval(0.0) == 0.0 {
        return Err(Error::Contract("interpolate_even requires Z(0) ≠ 0".into()));
    }
    let eps = cfg.near_zero_eps * t.abs().max(1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut exact = Complex64::new(0.0, 0.0);
    for (j, e) in table.entries.iter().take(cfg.n_terms).enumerate() {
        if (t - e.lambda).abs() < eps {
            exact += samples.values_pos[j];
            sum -= samples.values_neg[j] / ((t + e.lambda) * e.d_z);
        } else if (t + e.lambda).abs() < eps {
            exact += samples.values_neg[j];
            sum += samples.values_pos[j] / ((t - e.lambda) * e.d_z);
        } else {
            // paired form: [g(λ)(t+λ) − g(−λ)(t−λ)] / ((t²−λ²) Z′(λ))
            let num = samples.values_pos[j] * (t + e.lambda) - samples.values_neg[j] * (t - e.lambda);
            sum += num / ((t * t - e.lambda * e.lambda) * e.d_z);
        }
    }
    Ok(exact + genfn.eval(t) * sum)
}

/// One row of the WKS error curve.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct WksPoint {
    pub t: f64,
    pub truth: f64,
    pub approx: f64,
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct WksDemo {
    pub max_abs_error: f64,
    pub curve: Vec<WksPoint>,
}

/// §8 model function: transform of the indicator of [−1,−2/3] ∪ [2/3,1]
/// under the convention that makes the band exactly Nyquist for integer
/// sampling, g(t) = 2(sin πt − sin(2πt/3))/(πt), g(0) = 2/3.
pub fn wks_model(t: f64) -> f64 {
    if t.abs() < 1e-9 {
        // limit 2(π − 2π/3)/π = 2/3, with a vanishing quadratic correction
        2.0 / 3.0
    } else {
        2.0 * ((std::f64::consts::PI * t).sin() - (2.0 * std::f64::consts::PI * t / 3.0).sin())
            / (std::f64::consts::PI * t)
    }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-9 {
        1.0
    } else {
        (std::f64::consts::PI * u).sin() / (std::f64::consts::PI * u)
    }
}

/// The default §8 grid: |t| ≤ 6, step 0.001.
pub fn wks_default_grid() -> Vec<f64> {
    (-6000..=6000).map(|i| i as f64 * 0.001).collect()
}

/// Truncated WKS series g_N(t) = Σ_{k=−N}^{N} g(k)·sinc(t−k) against the
/// model function, over the supplied grid.
pub fn wks_truncation_demo(n: u32, t_grid: &[f64]) -> WksDemo {
    let coeffs: Vec<(f64, f64)> =
        (-(n as i64)..=n as i64).map(|k| (k as f64, wks_model(k as f64))).collect();
    let mut curve = Vec::with_capacity(t_grid.len());
    let mut max_abs_error: f64 = 0.0;
    for &t in t_grid {
        let truth = wks_model(t);
        let approx: f64 = coeffs.iter().map(|&(k, gk)| gk * sinc(t - k)).sum();
        let error = (truth - approx).abs();
        max_abs_error = max_abs_error.max(error);
        curve.push(WksPoint { t, truth, approx, error });
    }
    WksDemo { max_abs_error, curve }
}
