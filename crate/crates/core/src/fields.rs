//! Grids, 2D fields, the paper's Fourier convention, and geometry helpers.
//!
//! Everything uses centered coordinates: an even-n grid has samples
//! y_j = (j − n/2)·Δy with Δy = L/n, and dual frequencies
//! η_m = (m − n/2)·Δη with Δη = 1/L. The continuous transform approximated
//! throughout is â(η) = ∫ exp(−2πi y·η) a(y) dy, so the discrete forward
//! transform carries the Δy² area weight and the centered-phase checkerboard
//! factors; [`nudft_at`] and [`fft2_forward`] agree bit-for-bit at grid
//! frequencies (no hidden phase ramps).

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Physical geometry (k, b, d) with the derived dimensionless Fresnel number.
///
/// The number is recomputed from the stored parameters on every call, never
/// cached, so the Eq. 7 identity f = k·b²/(2π·d) holds exactly as stored.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FresnelGeometry {
    /// Wavenumber (radians per unit length).
    pub k: f64,
    /// Support diameter b (length): the object fits in a disc of diameter b.
    pub b: f64,
    /// Propagation distance d (length).
    pub d: f64,
}

impl FresnelGeometry {
    pub fn new(k: f64, b: f64, d: f64) -> Result<Self> {
        fresnel_number(k, b, d)?;
        Ok(Self { k, b, d })
    }

    /// Geometry with unit support and distance realizing a given f.
    pub fn from_fresnel_number(f: f64) -> Result<Self> {
        Self::new(2.0 * std::f64::consts::PI * f, 1.0, 1.0)
    }

    /// Dimensionless Fresnel number f = k·b²/(2π·d)  (Eq. 7).
    pub fn fresnel_number(&self) -> f64 {
        self.k * self.b * self.b / (2.0 * std::f64::consts::PI * self.d)
    }
}

/// Fresnel number from raw geometry (Eq. 7).
pub fn fresnel_number(k: f64, b: f64, d: f64) -> Result<f64> {
    if !(k > 0.0 && b > 0.0 && d > 0.0) {
        return Err(Error::Domain(format!(
            "fresnel_number requires k, b, d > 0 (got k={k}, b={b}, d={d})"
        )));
    }
    Ok(k * b * b / (2.0 * std::f64::consts::PI * d))
}

/// Smallest odd integer ≥ `f_raw`, with the factor by which the support
/// diameter b must be enlarged to realize it (f scales as b², Eq. 7).
///
/// An exactly-odd-integer input maps to itself with scale 1.
pub fn choose_odd_fresnel(f_raw: f64) -> Result<(u64, f64)> {
    if !(f_raw > 0.0) || !f_raw.is_finite() {
        return Err(Error::Domain(format!(
            "choose_odd_fresnel requires f_raw > 0 (got {f_raw})"
        )));
    }
    let mut f_odd = f_raw.ceil() as u64;
    if f_odd % 2 == 0 {
        f_odd += 1;
    }
    Ok((f_odd, (f_odd as f64 / f_raw).sqrt()))
}

/// Square centered grid with an even number of samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid2D {
    /// Samples per axis (even, positive).
    pub n: usize,
    /// Field width L in normalized y-units, centered at 0.
    pub extent: f64,
}

impl Grid2D {
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::Domain(format!("grid n must be even and positive (got {n})")));
        }
        if !(extent > 0.0) {
            return Err(Error::Domain(format!("grid extent must be positive (got {extent})")));
        }
        Ok(Self { n, extent })
    }

    /// Sample spacing Δy = L/n.
    pub fn spacing(&self) -> f64 {
        self.extent / self.n as f64
    }

    /// Dual frequency spacing Δη = 1/L.
    pub fn freq_spacing(&self) -> f64 {
        1.0 / self.extent
    }

    /// Sample coordinate y_j = (j − n/2)·Δy.
    pub fn coord(&self, j: usize) -> f64 {
        (j as f64 - self.n as f64 / 2.0) * self.spacing()
    }

    /// Dual coordinate η_m = (m − n/2)·Δη.
    pub fn freq(&self, m: usize) -> f64 {
        (m as f64 - self.n as f64 / 2.0) * self.freq_spacing()
    }

    /// Radius of the largest frequency on the grid (the corner), √2·(n/2)·Δη.
    pub fn nyquist_radius(&self) -> f64 {
        std::f64::consts::SQRT_2 * (self.n as f64 / 2.0) * self.freq_spacing()
    }
}

/// Real scalar field sampled on a [`Grid2D`], row-major (y₁ major).
#[derive(Debug, Clone, PartialEq)]
pub struct RealField2D {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

/// Complex scalar field sampled on a [`Grid2D`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField2D {
    pub grid: Grid2D,
    pub values: Vec<Complex64>,
}

impl RealField2D {
    pub fn zeros(grid: Grid2D) -> Self {
        Self { grid, values: vec![0.0; grid.n * grid.n] }
    }

    /// Pointwise construction from (y₁, y₂).
    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let n = grid.n;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            let y1 = grid.coord(i);
            for j in 0..n {
                values.push(f(y1, grid.coord(j)));
            }
        }
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n + j]
    }

    pub fn to_complex(&self) -> ComplexField2D {
        ComplexField2D {
            grid: self.grid,
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    /// L² norm under the grid measure: (Σ v² Δy²)^{1/2}.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>()).sqrt() * self.grid.spacing()
    }

    pub fn assert_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Contract("field contains non-finite values".into()))
        }
    }
}

impl ComplexField2D {
    pub fn zeros(grid: Grid2D) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.n * grid.n] }
    }

    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let n = grid.n;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            let y1 = grid.coord(i);
            for j in 0..n {
                values.push(f(y1, grid.coord(j)));
            }
        }
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.n + j]
    }

    pub fn re(&self) -> RealField2D {
        RealField2D { grid: self.grid, values: self.values.iter().map(|v| v.re).collect() }
    }

    /// L² norm under the grid measure.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt() * self.grid.spacing()
    }
}

/// Unit direction in the frequency plane, θ_ang ∈ [0, π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub angle: f64,
}

impl Direction {
    pub fn new(angle: f64) -> Result<Self> {
        if !(0.0..std::f64::consts::PI).contains(&angle) {
            return Err(Error::Domain(format!("direction angle must lie in [0, π) (got {angle})")));
        }
        Ok(Self { angle })
    }

    pub fn unit(&self) -> [f64; 2] {
        [self.angle.cos(), self.angle.sin()]
    }
}

/// In-place unnormalized 2D FFT (rows then columns via transpose).
fn fft2_inplace(values: &mut [Complex64], n: usize, forward: bool) {
    let mut planner = FftPlanner::new();
    let fft = if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    for row in values.chunks_exact_mut(n) {
        fft.process(row);
    }
    transpose(values, n);
    for row in values.chunks_exact_mut(n) {
        fft.process(row);
    }
    transpose(values, n);
}

fn transpose(values: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            values.swap(i * n + j, j * n + i);
        }
    }
}

/// Multiply by the checkerboard (−1)^{i+j} (the centered-phase factor).
fn checkerboard(values: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            if (i + j) % 2 == 1 {
                values[i * n + j] = -values[i * n + j];
            }
        }
    }
}

/// Discrete approximation of â(η) = ∫ exp(−2πi y·η) a(y) dy on the centered
/// grid: â(η_m) = Δy²·(−1)^{m₁+m₂}·FFT₂[(−1)^{j₁+j₂} a]. For even n the two
/// per-axis half-sample phases (−1)^{n/2} square to +1.
pub fn fft2_forward(field: &ComplexField2D) -> ComplexField2D {
    let n = field.grid.n;
    let w = field.grid.spacing().powi(2);
    let mut values = field.values.clone();
    checkerboard(&mut values, n);
    fft2_inplace(&mut values, n, true);
    checkerboard(&mut values, n);
    for v in &mut values {
        *v *= w;
    }
    ComplexField2D { grid: field.grid, values }
}

/// Inverse of [`fft2_forward`]: a(y_j) = Δη²·(−1)^{j₁+j₂}·IFFT₂[(−1)^{m₁+m₂} â]
/// with the unnormalized inverse kernel exp(+2πi jm/n).
pub fn fft2_inverse(spectrum: &ComplexField2D) -> ComplexField2D {
    let n = spectrum.grid.n;
    let w = spectrum.grid.freq_spacing().powi(2);
    let mut values = spectrum.values.clone();
    checkerboard(&mut values, n);
    fft2_inplace(&mut values, n, false);
    checkerboard(&mut values, n);
    for v in &mut values {
        *v *= w;
    }
    ComplexField2D { grid: spectrum.grid, values }
}

/// Direct-sum nonuniform spectral evaluation of a real field:
/// Σ_j field(y_j)·exp(−2πi y_j·η)·Δy² for each requested η.
///
/// O(n²) per point by design (desk-scale correctness over speed); points are
/// evaluated in parallel, each with a fixed serial summation order, so the
/// result is bit-identical regardless of thread count.
pub fn nudft_at(field: &RealField2D, points: &[[f64; 2]]) -> Vec<Complex64> {
    let n = field.grid.n;
    let w = field.grid.spacing().powi(2);
    let coords: Vec<f64> = (0..n).map(|j| field.grid.coord(j)).collect();
    points
        .par_iter()
        .map(|&[e1, e2]| {
            // separable kernel: exp(−2πi(y₁e₁+y₂e₂)) = a_{j1}·b_{j2}
            let a: Vec<Complex64> = coords
                .iter()
                .map(|&y| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * y * e1))
                .collect();
            let b: Vec<Complex64> = coords
                .iter()
                .map(|&y| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * y * e2))
                .collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &ai) in a.iter().enumerate() {
                let row = &field.values[i * n..(i + 1) * n];
                let mut re = 0.0;
                let mut im = 0.0;
                for (j, &v) in row.iter().enumerate() {
                    re += v * b[j].re;
                    im += v * b[j].im;
                }
                acc += ai * Complex64::new(re, im);
            }
            acc * w
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fresnel_number_examples() {
        assert_eq!(fresnel_number(2.0 * PI, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(fresnel_number(6.0 * PI, 1.0, 1.0).unwrap(), 3.0);
        assert_eq!(fresnel_number(2.0 * PI, 2.0, 1.0).unwrap(), 4.0);
        assert!(fresnel_number(0.0, 1.0, 1.0).is_err());
        assert!(fresnel_number(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn geometry_recomputes_f() {
        let g = FresnelGeometry::from_fresnel_number(3.0).unwrap();
        assert_eq!(g.fresnel_number(), 3.0);
    }

    #[test]
    fn choose_odd_fresnel_examples() {
        let (f, s) = choose_odd_fresnel(2.3).unwrap();
        assert_eq!(f, 3);
        assert!((s - (3.0f64 / 2.3).sqrt()).abs() < 1e-15);
        assert!((s - 1.1421).abs() < 1e-4);

        assert_eq!(choose_odd_fresnel(3.0).unwrap(), (3, 1.0));

        let (f, s) = choose_odd_fresnel(3.0001).unwrap();
        assert_eq!(f, 5);
        assert!((s - (5.0f64 / 3.0001).sqrt()).abs() < 1e-15);

        assert!(choose_odd_fresnel(-1.0).is_err());
    }

    #[test]
    fn grid_coordinates_centered() {
        let g = Grid2D::new(8, 4.0).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.freq_spacing(), 0.25);
        assert_eq!(g.coord(4), 0.0);
        assert_eq!(g.coord(0), -2.0);
        assert_eq!(g.freq(4), 0.0);
        assert!(Grid2D::new(7, 1.0).is_err());
    }

    #[test]
    fn dc_value_of_constant_field() {
        let g = Grid2D::new(16, 2.0).unwrap();
        let c = 0.7;
        let f = RealField2D::from_fn(g, |_, _| c);
        let spec = fft2_forward(&f.to_complex());
        let dc = spec.at(8, 8);
        assert!((dc.re - c * g.extent * g.extent).abs() < 1e-12);
        assert!(dc.im.abs() < 1e-12);
        // away from DC the transform of a constant vanishes
        assert!(spec.at(3, 11).norm() < 1e-12);

        let v = nudft_at(&f, &[[0.0, 0.0]]);
        assert!((v[0].re - c * g.extent * g.extent).abs() < 1e-12);
    }

    #[test]
    fn forward_inverse_roundtrip() {
        let g = Grid2D::new(32, 3.0).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let f = ComplexField2D::from_fn(g, |_, _| Complex64::new(rnd(), rnd()));
        let back = fft2_inverse(&fft2_forward(&f));
        let err: f64 = f
            .values
            .iter()
            .zip(&back.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "roundtrip error {err}");
    }

    #[test]
    fn gaussian_closed_form_pair() {
        // exp(−π y²/s²) → s²·exp(−π s² η²) under this convention
        let g = Grid2D::new(128, 8.0).unwrap();
        let s = 0.5;
        let f = ComplexField2D::from_fn(g, |y1, y2| {
            Complex64::new((-PI * (y1 * y1 + y2 * y2) / (s * s)).exp(), 0.0)
        });
        let spec = fft2_forward(&f);
        for (m1, m2) in [(64usize, 64usize), (70, 64), (64, 80), (50, 90)] {
            let e1 = g.freq(m1);
            let e2 = g.freq(m2);
            let truth = s * s * (-PI * s * s * (e1 * e1 + e2 * e2)).exp();
            let got = spec.at(m1, m2);
            assert!((got.re - truth).abs() < 1e-10, "at ({e1},{e2}): {} vs {truth}", got.re);
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn nudft_single_sample() {
        let g = Grid2D::new(8, 2.0).unwrap();
        let mut f = RealField2D::zeros(g);
        let (i0, j0) = (2usize, 5usize);
        f.values[i0 * 8 + j0] = 1.3;
        let eta = [0.37, -1.21];
        let v = nudft_at(&f, &[eta])[0];
        let y = [g.coord(i0), g.coord(j0)];
        let truth = 1.3
            * g.spacing().powi(2)
            * Complex64::from_polar(1.0, -2.0 * PI * (y[0] * eta[0] + y[1] * eta[1]));
        assert!((v - truth).norm() < 1e-14);
    }

    #[test]
    fn nudft_matches_fft_at_grid_frequencies() {
        let g = Grid2D::new(16, 2.0).unwrap();
        let mut state = 42u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let f = RealField2D::from_fn(g, |_, _| rnd());
        let spec = fft2_forward(&f.to_complex());
        let pts: Vec<[f64; 2]> = vec![[g.freq(3), g.freq(9)], [g.freq(8), g.freq(8)], [g.freq(0), g.freq(15)]];
        let vals = nudft_at(&f, &pts);
        let refs = [spec.at(3, 9), spec.at(8, 8), spec.at(0, 15)];
        for (v, r) in vals.iter().zip(refs) {
            assert!((v - r).norm() <= 1e-10 * r.norm().max(1e-3), "{v} vs {r}");
        }
    }

    #[test]
    fn nudft_conjugate_symmetry_for_real_fields() {
        let g = Grid2D::new(12, 3.0).unwrap();
        let f = RealField2D::from_fn(g, |y1, y2| (y1 * 2.0).sin() + y2 * y2);
        let p = [0.73, -1.9];
        let v = nudft_at(&f, &[p, [-p[0], -p[1]]]);
        assert!((v[0] - v[1].conj()).norm() < 1e-14);
    }

    #[test]
    fn parseval_identity() {
        let g = Grid2D::new(24, 2.5).unwrap();
        let f = ComplexField2D::from_fn(g, |y1, y2| Complex64::new((3.0 * y1).cos(), y2));
        let spec = fft2_forward(&f);
        let a = f.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.spacing().powi(2);
        let b = spec.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.freq_spacing().powi(2);
        assert!((a - b).abs() <= 1e-10 * a);
    }
}
