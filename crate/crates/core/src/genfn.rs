//! Generating functions Z_f (phase) and W_f (attenuation) with their zero
//! tables.
//!
//! A generating function is an even entire function whose real zeros λ sit
//! exactly where one chirp channel of the CTF relation vanishes:
//!
//! * phase:       λ² = f(l + 1/2) — cos(πλ²/f) = 0, sin(πλ²/f) = (−1)^l
//! * attenuation: λ² = f·l        — sin(πλ²/f) = 0, cos(πλ²/f) = (−1)^l
//!
//! For odd f = 2p+1 the construction is a product of p+1 cosine factors in
//! the discriminants ρ_q (phase) or σ_q (attenuation) times a rational
//! correction R that removes multiple zeros and inserts simple odd-l ones.
//! Each paired cosine factor cos((π/f)(s_q+q))·cos((π/f)(s_q+f−q)) is stored
//! in its product-to-sum form ½[cos(π(f−2q)/f) − cos((2π/f)·s_q)], which is
//! manifestly even in the root s_q = √ρ_q and therefore single-valued and
//! entire as a function of λ². The phase kind additionally supports the
//! literal f=2 and f=4 forms.
//!
//! Zero enumeration uses closed forms only; l-parities make main-series and
//! correction zeros provably disjoint, and a runtime duplicate check guards
//! the merge regardless.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Which chirp channel the zero set isolates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenFnKind {
    Phase,
    Attenuation,
}

impl std::fmt::Display for GenFnKind {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        w.write_str(match self {
            GenFnKind::Phase => "phase",
            GenFnKind::Attenuation => "attenuation",
        })
    }
}

/// cos(√x) continued to x < 0 as cosh(√−x); entire in x.
fn coss(x: f64) -> f64 {
    if x >= 0.0 {
        x.sqrt().cos()
    } else {
        (-x).sqrt().cosh()
    }
}

/// d/dx cos(√x) = −sin(√x)/(2√x); series near 0 avoids 0/0.
fn dcoss(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        -0.5 + x / 12.0 - x * x / 240.0 + x * x * x / 10080.0
    } else if x > 0.0 {
        let s = x.sqrt();
        -s.sin() / (2.0 * s)
    } else {
        let s = (-x).sqrt();
        -s.sinh() / (2.0 * s)
    }
}

/// √x·sin(√x), entire (even in √x); x < 0 → −√−x·sinh(√−x).
fn sqrt_sin(x: f64) -> f64 {
    if x >= 0.0 {
        let s = x.sqrt();
        s * s.sin()
    } else {
        let s = (-x).sqrt();
        -s * s.sinh()
    }
}

/// d/dx √x·sin(√x) = sin(√x)/(2√x) + cos(√x)/2.
fn dsqrt_sin(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        1.0 - x / 3.0 + x * x / 40.0 - x * x * x / 1260.0
    } else if x > 0.0 {
        let s = x.sqrt();
        s.sin() / (2.0 * s) + s.cos() / 2.0
    } else {
        let s = (-x).sqrt();
        s.sinh() / (2.0 * s) + s.cosh() / 2.0
    }
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    /// cos(√x)
    Coss,
    /// ½(c0 − cos(√x)) — paired cosine factor in product-to-sum form
    Pair { c0: f64 },
    /// √x·sin(√x) — the f=4 sine factor, made entire
    SqrtSin,
}

/// One factor of the product: kernel(a·t² + c), optionally divided by
/// (t² − den_root) with the singularity removable (the kernel vanishes there).
#[derive(Debug, Clone, Copy)]
struct Factor {
    kernel: Kernel,
    a: f64,
    c: f64,
    den_root: Option<f64>,
}

/// Inside this distance (in t² units, scaled) of a denominator root the
/// direct quotient is 0/0-degraded and the divided difference is used instead.
const VALUE_GUARD: f64 = 1e-6;
/// The quotient-rule derivative loses accuracy much earlier than the value.
const DERIV_GUARD: f64 = 1e-2;

impl Factor {
    fn kernel_val(&self, x: f64) -> f64 {
        match self.kernel {
            Kernel::Coss => coss(x),
            Kernel::Pair { c0 } => 0.5 * (c0 - coss(x)),
            Kernel::SqrtSin => sqrt_sin(x),
        }
    }

    /// Derivative of the kernel with respect to its argument x.
    fn kernel_dx_val(&self, x: f64) -> f64 {
        match self.kernel {
            Kernel::Coss => dcoss(x),
            Kernel::Pair { .. } => -0.5 * dcoss(x),
            Kernel::SqrtSin => dsqrt_sin(x),
        }
    }

    fn kernel_at(&self, t: f64) -> f64 {
        self.kernel_val(self.a * (t * t) + self.c)
    }

    /// Derivative of the kernel with respect to x, at argument x(t).
    fn kernel_dx(&self, t: f64) -> f64 {
        self.kernel_dx_val(self.a * (t * t) + self.c)
    }

    fn value(&self, t: f64) -> f64 {
        match self.den_root {
            None => self.kernel_at(t),
            Some(s) => {
                let d = t * t - s;
                if d.abs() <= VALUE_GUARD * s.abs().max(1.0) {
                    // removable point: K(x)/(t²−s) = a·K(x)/(x−x₀) with
                    // K(x₀) = 0, and the divided difference equals K′ at the
                    // interval midpoint up to O(Δx²) — negligible inside the
                    // guard. No stencil, so nothing can land on the 0/0 point.
                    let x0 = self.a * s + self.c;
                    let x = self.a * (t * t) + self.c;
                    self.a * self.kernel_dx_val(0.5 * (x + x0))
                } else {
                    self.kernel_at(t) / d
                }
            }
        }
    }

    fn deriv(&self, t: f64) -> f64 {
        match self.den_root {
            None => self.kernel_dx(t) * 2.0 * self.a * t,
            Some(s) => {
                let d = t * t - s;
                if d.abs() <= DERIV_GUARD * s.abs().max(1.0) {
                    // near the removable point the quotient rule cancels
                    // catastrophically; differentiate the (smooth) grouped
                    // factor by a 5-point stencil instead
                    let h = 1e-3 * t.abs().max(1.0);
                    let g = |u: f64| self.value(u);
                    (8.0 * (g(t + h) - g(t - h)) - (g(t + 2.0 * h) - g(t - 2.0 * h))) / (12.0 * h)
                } else {
                    (self.kernel_dx(t) * 2.0 * self.a * t * d - self.kernel_at(t) * 2.0 * t)
                        / (d * d)
                }
            }
        }
    }

    fn value_complex(&self, z2: Complex64) -> Complex64 {
        let x = self.a * z2 + self.c;
        let s = x.sqrt();
        let k = match self.kernel {
            Kernel::Coss => s.cos(),
            Kernel::Pair { c0 } => 0.5 * (c0 - s.cos()),
            Kernel::SqrtSin => s * s.sin(),
        };
        match self.den_root {
            None => k,
            Some(r) => k / (z2 - r),
        }
    }
}

/// Family of a tabulated zero: where in the closed-form enumeration it
/// comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Phase-only simple zero at λ² = f/2 (l = 0), counted once.
    Special,
    /// Main series l = fk² ± (f−2q)k (branch A: +, branch B: −).
    Main { k: u32, q: u32, branch: Branch },
    /// Correction-factor numerator root (l = 2q−1 phase, 2q+1 attenuation).
    Correction { q: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    A,
    B,
}

impl std::fmt::Display for Family {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Special => w.write_str("special"),
            Family::Main { k, q, branch } => {
                write!(w, "main(k={k},q={q},{})", if *branch == Branch::A { "A" } else { "B" })
            }
            Family::Correction { q } => write!(w, "corr(q={q})"),
        }
    }
}

/// One tabulated simple zero.
#[derive(Debug, Clone, Copy)]
pub struct ZeroEntry {
    /// Positive zero radius.
    pub lambda: f64,
    /// Parity index: λ² = f(l+1/2) (phase) or λ² = f·l (attenuation).
    pub l: u64,
    /// Derivative of the generating function at +lambda.
    pub d_z: f64,
    pub family: Family,
}

impl ZeroEntry {
    /// (−1)^l — the sign relating Ψ̂ to the isolated channel at this zero.
    pub fn sign(&self) -> f64 {
        if self.l % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Sorted table of the first zeros of a generating function.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    pub kind: GenFnKind,
    pub f: u32,
    /// Entries sorted by strictly ascending lambda.
    pub entries: Vec<ZeroEntry>,
    /// Separation estimate: min gap over consecutive entries and the mirror
    /// gap 2λ₀ to the reflected table.
    pub c_est: f64,
}

impl ZeroTable {
    pub fn max_radius(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.lambda)
    }
}

/// Numeric footprint of the sine-type bounds (Eq. 4, Eq. 19).
#[derive(Debug, Clone, serde::Serialize)]
pub struct SineTypeReport {
    /// Strip half-width H.
    pub h: f64,
    /// max / min of |Z(t ± iH)|·e^{−πH} over the sampled lines.
    pub a_est: f64,
    pub b_est: f64,
    /// Off-zero floor: min |Z(t + ih)|·e^{−π|h|} over the strip, excluding
    /// discs of radius c_est/4 around the real zeros.
    pub delta_est: f64,
    pub c_est: f64,
    pub passed: bool,
}

/// An evaluable generating function.
#[derive(Debug, Clone)]
pub struct GenFn {
    pub kind: GenFnKind,
    pub f: u32,
    factors: Vec<Factor>,
    /// Correction-numerator roots r: multiply by (t² − r).
    num_roots: Vec<f64>,
}

/// Construct the generating function for the given channel and Fresnel
/// number. Both kinds accept any odd f; phase additionally accepts the
/// literal f = 2 and f = 4 forms.
pub fn build_genfn(kind: GenFnKind, f: u32) -> Result<GenFn> {
    if f == 0 {
        return Err(Error::Domain("fresnel number must be positive".into()));
    }
    if f % 2 == 0 {
        return match (kind, f) {
            (GenFnKind::Phase, 2) => {
                // Z₂ = cos(π√(λ²−3/4))
                Ok(GenFn {
                    kind,
                    f,
                    factors: vec![Factor {
                        kernel: Kernel::Coss,
                        a: PI * PI,
                        c: -0.75 * PI * PI,
                        den_root: None,
                    }],
                    num_roots: vec![],
                })
            }
            (GenFnKind::Phase, 4) => {
                // Z₄ = [√x·sin√x]_{x=(π/2)²(λ²−2)} · cos((π/2)√(λ²−1))
                //      · (λ²−14)/(λ²−2)
                let a = (PI / 2.0) * (PI / 2.0);
                Ok(GenFn {
                    kind,
                    f,
                    factors: vec![
                        Factor { kernel: Kernel::SqrtSin, a, c: -2.0 * a, den_root: Some(2.0) },
                        Factor { kernel: Kernel::Coss, a, c: -a, den_root: None },
                    ],
                    num_roots: vec![14.0],
                })
            }
            _ => Err(Error::Unsupported(format!(
                "no {kind} generating function for even f={f}; \
                 use choose_odd_fresnel, or f ∈ {{2,4}} for the phase kind"
            ))),
        };
    }

    let ff = f as f64;
    let p = (f - 1) / 2;
    let mut factors = Vec::with_capacity(p as usize + 1);
    let mut num_roots = Vec::with_capacity(p as usize + 1);
    match kind {
        GenFnKind::Phase => {
            // first factor cos((π/f)√ρ₀), ρ₀ = λ² − f/2 + f²/4
            let a0 = (PI / ff) * (PI / ff);
            factors.push(Factor {
                kernel: Kernel::Coss,
                a: a0,
                c: a0 * (ff * ff / 4.0 - ff / 2.0),
                den_root: None,
            });
            let a1 = (2.0 * PI / ff) * (2.0 * PI / ff);
            for q in 1..=p {
                let half = ff / 2.0 - q as f64;
                factors.push(Factor {
                    kernel: Kernel::Pair { c0: (PI * (ff - 2.0 * q as f64) / ff).cos() },
                    a: a1,
                    c: a1 * (half * half - ff / 2.0),
                    den_root: Some(ff / 2.0),
                });
                num_roots.push(ff * (2.0 * q as f64 - 0.5));
            }
        }
        GenFnKind::Attenuation => {
            // σ_q = λ² + (f/2 − q)²; every factor vanishes at λ = 0 to
            // second order, removed by one λ² denominator each
            let a0 = (PI / ff) * (PI / ff);
            factors.push(Factor {
                kernel: Kernel::Coss,
                a: a0,
                c: a0 * ff * ff / 4.0,
                den_root: Some(0.0),
            });
            let a1 = (2.0 * PI / ff) * (2.0 * PI / ff);
            for q in 1..=p {
                let half = ff / 2.0 - q as f64;
                factors.push(Factor {
                    kernel: Kernel::Pair { c0: (PI * (ff - 2.0 * q as f64) / ff).cos() },
                    a: a1,
                    c: a1 * half * half,
                    den_root: Some(0.0),
                });
            }
            for q in 0..=p {
                num_roots.push((2.0 * q as f64 + 1.0) * ff);
            }
        }
    }
    Ok(GenFn { kind, f, factors, num_roots })
}

impl GenFn {
    /// Value at real t; removable singularities of the correction factor are
    /// filled by local extrapolation. Even in t by construction (a function
    /// of t² only).
    pub fn eval(&self, t: f64) -> f64 {
        let mut v = 1.0;
        for fac in &self.factors {
            v *= fac.value(t);
        }
        for &r in &self.num_roots {
            v *= t * t - r;
        }
        v
    }

    /// Value at complex z, for strip verification. No removable-singularity
    /// handling: z is assumed off the denominator roots (all real).
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let z2 = z * z;
        let mut v = Complex64::new(1.0, 0.0);
        for fac in &self.factors {
            v *= fac.value_complex(z2);
        }
        for &r in &self.num_roots {
            v *= z2 - r;
        }
        v
    }

    /// Analytic product-rule derivative at a tabulated simple zero.
    pub fn derivative_at(&self, lambda: f64) -> Result<f64> {
        let d = self.derivative_raw(lambda);
        if d.abs() <= 1e-8 {
            return Err(Error::Construction(format!(
                "degenerate zero: |d{}'({lambda})| = {} ≤ 1e-8",
                if self.kind == GenFnKind::Phase { "Z" } else { "W" },
                d.abs()
            )));
        }
        Ok(d)
    }

    fn derivative_raw(&self, t: f64) -> f64 {
        // product rule over factors and numerator roots
        let nf = self.factors.len();
        let nr = self.num_roots.len();
        let mut vals = Vec::with_capacity(nf + nr);
        let mut ders = Vec::with_capacity(nf + nr);
        for fac in &self.factors {
            vals.push(fac.value(t));
            ders.push(fac.deriv(t));
        }
        for &r in &self.num_roots {
            vals.push(t * t - r);
            ders.push(2.0 * t);
        }
        let mut sum = 0.0;
        for m in 0..vals.len() {
            let mut term = ders[m];
            for (j, &v) in vals.iter().enumerate() {
                if j != m {
                    term *= v;
                }
            }
            sum += term;
        }
        sum
    }

    /// All zeros with λ ≤ radius_max plus `extra` further ones, merged from
    /// the closed-form families and sorted.
    pub fn zeros_up_to(&self, radius_max: f64, extra: usize) -> Result<ZeroTable> {
        if !(radius_max > 0.0) {
            return Err(Error::Domain(format!("radius_max must be positive (got {radius_max})")));
        }
        let ff = self.f as f64;
        let lambda_of = |l: u64| -> f64 {
            match self.kind {
                GenFnKind::Phase => (ff * (l as f64 + 0.5)).sqrt(),
                GenFnKind::Attenuation => (ff * l as f64).sqrt(),
            }
        };
        let mut lmax = (radius_max * radius_max / ff).ceil() as u64 + 16;
        loop {
            let map = self.enumerate_l(lmax)?;
            let n_within = map.keys().filter(|&&l| lambda_of(l) <= radius_max).count();
            let need = n_within + extra;
            if map.len() >= need && lambda_of(lmax) >= radius_max {
                let mut entries = Vec::with_capacity(need);
                for (&l, &family) in map.iter().take(need) {
                    let lambda = lambda_of(l);
                    let d_z = self.derivative_at(lambda)?;
                    entries.push(ZeroEntry { lambda, l, d_z, family });
                }
                let mut c_est = 2.0 * entries[0].lambda;
                for w in entries.windows(2) {
                    c_est = c_est.min(w[1].lambda - w[0].lambda);
                }
                if c_est < 1e-9 {
                    return Err(Error::Construction(format!(
                        "zero separation collapsed: min gap {c_est}"
                    )));
                }
                return Ok(ZeroTable { kind: self.kind, f: self.f, entries, c_est });
            }
            lmax = lmax.saturating_mul(2);
        }
    }

    /// Closed-form parity indices l ≤ lmax with their families.
    fn enumerate_l(&self, lmax: u64) -> Result<BTreeMap<u64, Family>> {
        let mut map = BTreeMap::new();
        let mut insert = |l: u64, family: Family| -> Result<()> {
            if let Some(prev) = map.insert(l, family) {
                return Err(Error::Construction(format!(
                    "duplicate zero l={l}: {prev} vs {family} (kind={}, f={})",
                    self.kind, self.f
                )));
            }
            Ok(())
        };
        if self.f % 2 == 1 {
            let f = self.f as u64;
            let p = (self.f - 1) / 2;
            match self.kind {
                GenFnKind::Phase => {
                    insert(0, Family::Special)?;
                    for q in 1..=p {
                        insert(2 * q as u64 - 1, Family::Correction { q })?;
                    }
                }
                GenFnKind::Attenuation => {
                    for q in 0..=p {
                        insert(2 * q as u64 + 1, Family::Correction { q })?;
                    }
                }
            }
            let mut k = 1u64;
            // smallest main-series l at index k is fk² − (f−2)k
            let sub = f.saturating_sub(2);
            while f * k * k <= lmax + sub * k {
                for q in 0..=p as u64 {
                    let la = f * k * k + (f - 2 * q) * k;
                    if la <= lmax {
                        insert(la, Family::Main { k: k as u32, q: q as u32, branch: Branch::A })?;
                    }
                    if q >= 1 {
                        let lb = f * k * k - (f - 2 * q) * k;
                        if lb <= lmax {
                            insert(
                                lb,
                                Family::Main { k: k as u32, q: q as u32, branch: Branch::B },
                            )?;
                        }
                    }
                }
                k += 1;
            }
        } else if self.f == 2 {
            // l = k(k+1)/2, k ≥ 0
            let mut k = 0u64;
            while k * (k + 1) / 2 <= lmax {
                insert(k * (k + 1) / 2, Family::Main { k: k as u32, q: 0, branch: Branch::A })?;
                k += 1;
            }
        } else {
            debug_assert_eq!(self.f, 4);
            // l = k² (k ≥ 1) from the sine factor, l = k(k+1) (k ≥ 0) from
            // the cosine factor, correction root l = 3 (λ² = 14)
            insert(3, Family::Correction { q: 2 })?;
            let mut k = 1u64;
            while k * k <= lmax {
                insert(k * k, Family::Main { k: k as u32, q: 1, branch: Branch::A })?;
                k += 1;
            }
            let mut k = 0u64;
            while k * (k + 1) <= lmax {
                insert(k * (k + 1), Family::Main { k: k as u32, q: 0, branch: Branch::A })?;
                k += 1;
            }
        }
        Ok(map)
    }

    /// Sample the sine-type bounds of Eq. 4 / Eq. 19 on the strip |Im z| ≤ H.
    ///
    /// The phase f=4 form carries an extra √x factor (growth beyond
    /// e^{π|Im z|}) and is excluded from strip verification.
    pub fn verify_sine_type(&self, h: f64, n_samples: usize) -> Result<SineTypeReport> {
        if !(h > 0.0) {
            return Err(Error::Domain(format!("strip half-width must be positive (got {h})")));
        }
        if self.kind == GenFnKind::Phase && self.f == 4 {
            return Err(Error::Unsupported(
                "phase f=4 is not sine-type (extra algebraic growth); \
                 strip verification is defined only for the odd-f and f=2 forms"
                    .into(),
            ));
        }
        let n = n_samples.max(16);
        let t_max = 30.0;
        let table = self.zeros_up_to(t_max + 2.0, 2)?;
        let excl = table.c_est / 4.0;
        let too_close = |z: Complex64| {
            table
                .entries
                .iter()
                .any(|e| (z - e.lambda).norm() < excl || (z + e.lambda).norm() < excl)
        };

        // boundary lines Im = ±H (coefficients are real, so |Z(t−iH)| =
        // |Z(t+iH)|; sample the upper line)
        let mut a_est = f64::NEG_INFINITY;
        let mut b_est = f64::INFINITY;
        let scale = (-PI * h).exp();
        for i in 0..n {
            let t = t_max * i as f64 / (n - 1) as f64;
            let z = Complex64::new(t, h);
            if too_close(z) {
                continue;
            }
            let v = self.eval_complex(z).norm() * scale;
            a_est = a_est.max(v);
            b_est = b_est.min(v);
        }

        // interior off-zero floor (Eq. 19)
        let n_h = 9;
        let mut delta_est = f64::INFINITY;
        for j in 0..n_h {
            let hh = h * j as f64 / (n_h - 1) as f64;
            let scale = (-PI * hh).exp();
            for i in 0..n {
                let t = t_max * i as f64 / (n - 1) as f64;
                let z = Complex64::new(t, hh);
                if too_close(z) {
                    continue;
                }
                delta_est = delta_est.min(self.eval_complex(z).norm() * scale);
            }
        }

        Ok(SineTypeReport {
            h,
            a_est,
            b_est,
            delta_est,
            c_est: table.c_est,
            passed: b_est > 0.0 && delta_est > 0.0,
        })
    }
}

/// Summary statistics from [`check_zero_identities`].
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityReport {
    pub n_checked: usize,
    /// Worst |vanishing-chirp| residual (should be ≤ 1e−10).
    pub max_chirp_residual: f64,
    /// Worst |sign-chirp − (−1)^l| residual (should be ≤ 1e−10).
    pub max_sign_residual: f64,
    /// Worst |λ² − target| (should be ≤ 1e−9).
    pub max_lambda_sq_residual: f64,
    /// Worst |eval(λ)| relative to the local function scale.
    pub max_eval_residual: f64,
    pub min_abs_dz: f64,
}

/// Verify Eq. 3 / Eq. 30 and simplicity for every table entry.
///
/// The chirp identities are checked with an exact argument reduction:
/// λ² − f(l+½) is formed with an FMA-recovered rounding residual, so the
/// check measures the table, not the rounding of cos(πλ²/f) at λ ~ 10².
pub fn check_zero_identities(genfn: &GenFn, table: &ZeroTable) -> Result<IdentityReport> {
    if table.kind != genfn.kind || table.f != genfn.f {
        return Err(Error::Contract("zero table does not belong to this generating function".into()));
    }
    let ff = genfn.f as f64;
    let mut failures = Vec::new();
    let mut report = IdentityReport {
        n_checked: table.entries.len(),
        max_chirp_residual: 0.0,
        max_sign_residual: 0.0,
        max_lambda_sq_residual: 0.0,
        max_eval_residual: 0.0,
        min_abs_dz: f64::INFINITY,
    };
    for entry in &table.entries {
        let lam = entry.lambda;
        let s = lam * lam;
        let e = lam.mul_add(lam, -s); // exact residual of the squaring
        // target is exact in f64 for the supported (f, l) ranges
        let target = match genfn.kind {
            GenFnKind::Phase => ff * entry.l as f64 + 0.5 * ff,
            GenFnKind::Attenuation => ff * entry.l as f64,
        };
        let d = ((s - target) + e) / ff; // λ²/f − (l+½) resp. λ²/f − l
        // phase:       cos(πλ²/f) = −(−1)^l sin(πd), sin(πλ²/f) = (−1)^l cos(πd)
        // attenuation: sin(πλ²/f) = (−1)^l sin(πd),  cos(πλ²/f) = (−1)^l cos(πd)
        let chirp = (PI * d).sin().abs();
        let sign = ((PI * d).cos() - 1.0).abs();
        let lam_sq = ((s - target) + e).abs();
        report.max_chirp_residual = report.max_chirp_residual.max(chirp);
        report.max_sign_residual = report.max_sign_residual.max(sign);
        report.max_lambda_sq_residual = report.max_lambda_sq_residual.max(lam_sq);
        if chirp > 1e-10 || sign > 1e-10 {
            failures.push(format!(
                "{} f={} λ={lam}: chirp identity residual {chirp:.3e}/{sign:.3e} > 1e-10",
                table.kind, table.f
            ));
        }
        if lam_sq > 1e-9 {
            failures.push(format!(
                "{} f={} λ={lam}: λ² off target by {lam_sq:.3e} > 1e-9",
                table.kind, table.f
            ));
        }
        let local = genfn.eval(lam + 0.2).abs().max(genfn.eval(lam - 0.2).abs()).max(1.0);
        let ev = genfn.eval(lam).abs() / local;
        report.max_eval_residual = report.max_eval_residual.max(ev);
        if ev > 1e-8 {
            failures.push(format!(
                "{} f={} λ={lam}: |eval| = {ev:.3e} of local scale > 1e-8",
                table.kind, table.f
            ));
        }
        report.min_abs_dz = report.min_abs_dz.min(entry.d_z.abs());
        if entry.d_z.abs() <= 1e-8 {
            failures.push(format!(
                "{} f={} λ={lam}: |dZ| = {:.3e} ≤ 1e-8 (non-simple)",
                table.kind, table.f, entry.d_z.abs()
            ));
        }
    }
    if failures.is_empty() {
        Ok(report)
    } else {
        Err(Error::Validation(failures))
    }
}
