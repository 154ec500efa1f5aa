//! Analytic phantoms, the CTF transfer relation (Eq. 1), the normalized
//! Fresnel propagator, and hologram simulation.
//!
//! The propagator multiplier is exp(+iπ|η|²/f): with ψ = μ − iφ this is the
//! sign for which the spectrum of T(ψ) = Re D(ψ) equals
//! cos(π|η|²/f)·μ̂ + sin(π|η|²/f)·φ̂ exactly (Eq. 1), which the linear-model
//! spectrum test pins to 1e−8.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bessel::bessel_j1;
use crate::error::{Error, Result};
use crate::fields::{fft2_forward, fft2_inverse, nudft_at, ComplexField2D, FresnelGeometry, Grid2D, RealField2D};

/// One phantom component. `size` holds half-sizes (the rect spans
/// center ± size per axis); amplitudes feed the cos channel (mu) and the sin
/// channel (phi).
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum Component {
    Rect {
        center: [f64; 2],
        size: [f64; 2],
        #[serde(default)]
        mu: f64,
        #[serde(default)]
        phi: f64,
    },
    Disk {
        center: [f64; 2],
        radius: f64,
        #[serde(default)]
        mu: f64,
        #[serde(default)]
        phi: f64,
    },
}

impl Component {
    fn amplitudes(&self) -> (f64, f64) {
        match *self {
            Component::Rect { mu, phi, .. } | Component::Disk { mu, phi, .. } => (mu, phi),
        }
    }

    /// Largest distance from the origin to a point of the component.
    fn outer_radius(&self) -> f64 {
        match *self {
            Component::Rect { center, size, .. } => {
                ((center[0].abs() + size[0]).powi(2) + (center[1].abs() + size[1]).powi(2)).sqrt()
            }
            Component::Disk { center, radius, .. } => {
                (center[0] * center[0] + center[1] * center[1]).sqrt() + radius
            }
        }
    }

    fn indicator(&self, y1: f64, y2: f64) -> f64 {
        match *self {
            Component::Rect { center, size, .. } => {
                if (y1 - center[0]).abs() <= size[0] && (y2 - center[1]).abs() <= size[1] {
                    1.0
                } else {
                    0.0
                }
            }
            Component::Disk { center, radius, .. } => {
                let d1 = y1 - center[0];
                let d2 = y2 - center[1];
                if d1 * d1 + d2 * d2 <= radius * radius {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Closed-form Fourier transform of the unit-amplitude indicator.
    fn spectrum(&self, eta: [f64; 2]) -> Complex64 {
        let (center, shape_ft) = match *self {
            Component::Rect { center, size, .. } => {
                let v = 4.0 * size[0] * size[1] * sinc(2.0 * size[0] * eta[0]) * sinc(2.0 * size[1] * eta[1]);
                (center, v)
            }
            Component::Disk { center, radius, .. } => {
                let r = (eta[0] * eta[0] + eta[1] * eta[1]).sqrt();
                let v = if r < 1e-12 {
                    PI * radius * radius
                } else {
                    radius * bessel_j1(2.0 * PI * radius * r) / r
                };
                (center, v)
            }
        };
        shape_ft * Complex64::from_polar(1.0, -2.0 * PI * (center[0] * eta[0] + center[1] * eta[1]))
    }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-9 {
        1.0
    } else {
        (PI * u).sin() / (PI * u)
    }
}

/// Piecewise-constant object model, supported in the disc |y| ≤ 1/2.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Phantom {
    pub components: Vec<Component>,
}

impl Phantom {
    pub fn from_json(text: &str) -> Result<Self> {
        let p: Phantom = serde_json::from_str(text)
            .map_err(|e| Error::Manifest(format!("invalid phantom JSON: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    /// Every component must lie inside the support disc |y| ≤ 1/2.
    pub fn validate(&self) -> Result<()> {
        let bad: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.outer_radius() > 0.5)
            .map(|(i, c)| {
                format!("component {i} extends to radius {:.4} > 0.5", c.outer_radius())
            })
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(bad))
        }
    }

    /// Uniformly scale all amplitudes (weak-object studies).
    pub fn scaled(&self, alpha: f64) -> Phantom {
        let components = self
            .components
            .iter()
            .map(|c| match *c {
                Component::Rect { center, size, mu, phi } => {
                    Component::Rect { center, size, mu: alpha * mu, phi: alpha * phi }
                }
                Component::Disk { center, radius, mu, phi } => {
                    Component::Disk { center, radius, mu: alpha * mu, phi: alpha * phi }
                }
            })
            .collect();
        Phantom { components }
    }
}

/// The two real fields of Eq. 1: cos-channel μ and sin-channel φ.
#[derive(Debug, Clone)]
pub struct ProjectionPair {
    pub mu: RealField2D,
    pub phi: RealField2D,
}

/// Pointwise rasterization of the phantom onto a grid.
pub fn phantom_fields(phantom: &Phantom, grid: Grid2D) -> Result<ProjectionPair> {
    if grid.extent < 1.0 {
        return Err(Error::Domain(format!(
            "grid extent {} cannot contain the unit support disc",
            grid.extent
        )));
    }
    phantom.validate()?;
    let mut mu = RealField2D::zeros(grid);
    let mut phi = RealField2D::zeros(grid);
    for c in &phantom.components {
        let (am, ap) = c.amplitudes();
        for i in 0..grid.n {
            let y1 = grid.coord(i);
            for j in 0..grid.n {
                let ind = c.indicator(y1, grid.coord(j));
                if ind != 0.0 {
                    mu.values[i * grid.n + j] += am;
                    phi.values[i * grid.n + j] += ap;
                }
            }
        }
    }
    Ok(ProjectionPair { mu, phi })
}

/// Closed-form spectra (μ̂, φ̂) at arbitrary frequency points.
pub fn phantom_spectrum(phantom: &Phantom, points: &[[f64; 2]]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut mu_hat = Vec::with_capacity(points.len());
    let mut phi_hat = Vec::with_capacity(points.len());
    for &eta in points {
        let mut m = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(0.0, 0.0);
        for c in &phantom.components {
            let s = c.spectrum(eta);
            let (am, ap) = c.amplitudes();
            m += am * s;
            p += ap * s;
        }
        mu_hat.push(m);
        phi_hat.push(p);
    }
    (mu_hat, phi_hat)
}

/// Eq. 1: Ψ̂(η) = cos(π|η|²/f)·μ̂ + sin(π|η|²/f)·φ̂.
pub fn ctf_transfer(f: f64, eta: [f64; 2], mu_hat: Complex64, phi_hat: Complex64) -> Complex64 {
    let c = PI * (eta[0] * eta[0] + eta[1] * eta[1]) / f;
    c.cos() * mu_hat + c.sin() * phi_hat
}

/// Normalized Fresnel propagator D: multiply the spectrum by
/// exp(+iπ|η|²/f) and transform back. Unitary; f and −f are inverses.
pub fn fresnel_propagate(field: &ComplexField2D, f: f64) -> Result<ComplexField2D> {
    if f == 0.0 || !f.is_finite() {
        return Err(Error::Domain(format!("fresnel_propagate requires finite f ≠ 0 (got {f})")));
    }
    let mut spec = fft2_forward(field);
    let g = spec.grid;
    for m1 in 0..g.n {
        let e1 = g.freq(m1);
        for m2 in 0..g.n {
            let e2 = g.freq(m2);
            let phase = PI * (e1 * e1 + e2 * e2) / f;
            spec.values[m1 * g.n + m2] *= Complex64::from_polar(1.0, phase);
        }
    }
    Ok(fft2_inverse(&spec))
}

/// Which intensity model a hologram was generated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Linear,
    Full,
}

impl std::fmt::Display for Model {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        w.write_str(match self {
            Model::Linear => "linear",
            Model::Full => "full",
        })
    }
}

/// Simulated detector intensity on a padded grid.
#[derive(Debug, Clone)]
pub struct Hologram {
    pub intensity: RealField2D,
    pub geometry: FresnelGeometry,
    pub model: Model,
}

impl Hologram {
    /// CTF data Ψ = (I − 1)/2.
    pub fn ctf_data(&self) -> RealField2D {
        RealField2D {
            grid: self.intensity.grid,
            values: self.intensity.values.iter().map(|&v| (v - 1.0) / 2.0).collect(),
        }
    }
}

/// Simulate the hologram for a projection pair at Fresnel number f
/// (canonical geometry k = 2πf, b = d = 1).
///
/// linear: I = 1 + 2·Re D(μ − iφ); full: I = |D(exp(μ − iφ))|².
pub fn simulate_hologram(pair: &ProjectionPair, f: f64, model: Model) -> Result<Hologram> {
    let grid = pair.mu.grid;
    if pair.phi.grid != grid {
        return Err(Error::Contract("projection pair fields live on different grids".into()));
    }
    if grid.extent < 2.0 {
        return Err(Error::Domain(format!(
            "hologram grid extent {} < 2: Fresnel fringes need padding around the unit support",
            grid.extent
        )));
    }
    let geometry = FresnelGeometry::from_fresnel_number(f)?;
    let n = grid.n;
    let intensity = match model {
        Model::Linear => {
            let psi = ComplexField2D {
                grid,
                values: (0..n * n)
                    .map(|i| Complex64::new(pair.mu.values[i], -pair.phi.values[i]))
                    .collect(),
            };
            let d = fresnel_propagate(&psi, f)?;
            RealField2D { grid, values: d.values.iter().map(|v| 1.0 + 2.0 * v.re).collect() }
        }
        Model::Full => {
            let max_psi = (0..n * n)
                .map(|i| pair.mu.values[i].hypot(pair.phi.values[i]))
                .fold(0.0, f64::max);
            if max_psi > 5.0 {
                return Err(Error::Domain(format!(
                    "full model overflow guard: max|ψ| = {max_psi:.3} > 5"
                )));
            }
            let trans = ComplexField2D {
                grid,
                values: (0..n * n)
                    .map(|i| Complex64::new(pair.mu.values[i], -pair.phi.values[i]).exp())
                    .collect(),
            };
            let d = fresnel_propagate(&trans, f)?;
            RealField2D { grid, values: d.values.iter().map(|v| v.norm_sqr()).collect() }
        }
    };
    Ok(Hologram { intensity, geometry, model })
}

/// Source of CTF data Ψ̂(η): either the exact analytic chain
/// (closed-form spectra through Eq. 1) or the windowed NUDFT of a simulated
/// hologram.
#[derive(Debug, Clone)]
pub enum CtfSampler {
    Analytic { phantom: Phantom, f: f64 },
    Hologram { psi: RealField2D },
}

impl CtfSampler {
    pub fn analytic(phantom: Phantom, f: f64) -> Self {
        CtfSampler::Analytic { phantom, f }
    }

    pub fn from_hologram(hologram: &Hologram) -> Self {
        CtfSampler::Hologram { psi: hologram.ctf_data() }
    }

    /// Ψ̂ at arbitrary frequency points (parallel over points, deterministic
    /// per point).
    pub fn sample_many(&self, points: &[[f64; 2]]) -> Vec<Complex64> {
        match self {
            CtfSampler::Analytic { phantom, f } => {
                let (mu_hat, phi_hat) = phantom_spectrum(phantom, points);
                points
                    .iter()
                    .zip(mu_hat.into_iter().zip(phi_hat))
                    .map(|(&eta, (m, p))| ctf_transfer(*f, eta, m, p))
                    .collect()
            }
            CtfSampler::Hologram { psi } => nudft_at(psi, points),
        }
    }
}
