//! `holoctf`: simulate near-field holograms, tabulate generating-function
//! zeros, and reconstruct phase/attenuation projections by one-step CTF
//! inversion.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/config error.
//! Every command writes a `run_manifest.json` with resolved parameters and
//! SHA-256 checksums of all artifacts; re-running with the same parameters
//! reproduces the numeric outputs bit for bit (there is no randomness, and
//! all reductions have a fixed order).

use clap::{Parser, Subcommand, ValueEnum};
use sha2::Digest;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use holoctf::fields::{choose_odd_fresnel, Grid2D, RealField2D};
use holoctf::forward::{phantom_fields, simulate_hologram, CtfSampler, Model, Phantom};
use holoctf::genfn::{build_genfn, check_zero_identities, GenFnKind};
use holoctf::io;
use holoctf::pw::{wks_default_grid, wks_truncation_demo};
use holoctf::retrieval::{band_matched_truth, reconstruct_field, ReconConfig};

#[derive(Parser)]
#[command(name = "holoctf", version, about = "One-step CTF phase retrieval toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Phase,
    Attenuation,
}

impl From<KindArg> for GenFnKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Phase => GenFnKind::Phase,
            KindArg::Attenuation => GenFnKind::Attenuation,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindsArg {
    Both,
    Phase,
    Attenuation,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelArg {
    /// sin channel: phase projection φ, sampled at the phase zeros Z_f
    Sin,
    /// cos channel: attenuation projection μ, sampled at the zeros of W_f
    Cos,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Linear,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate zeros of a generating function and validate them.
    Zeros {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Fresnel number (odd integer; phase also supports 2 and 4).
        #[arg(long)]
        fresnel: u32,
        /// Tabulate all zeros with λ ≤ this radius.
        #[arg(long, default_value_t = 20.0)]
        max_radius: f64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate a near-field hologram of a phantom.
    Simulate {
        /// Phantom description (JSON).
        #[arg(long)]
        phantom: PathBuf,
        #[arg(long)]
        fresnel: f64,
        /// Samples per axis (even).
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Field of view in support-diameter units (≥ 2 for fringe padding).
        #[arg(long, default_value_t = 4.0)]
        extent: f64,
        #[arg(long, value_enum, default_value_t = ModelArg::Linear)]
        model: ModelArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct one channel from a hologram or directly from a phantom.
    Reconstruct {
        /// Hologram raw file (with its JSON manifest next to it).
        #[arg(long, conflicts_with = "analytic")]
        hologram: Option<PathBuf>,
        /// Phantom JSON: sample the exact CTF data instead of a hologram.
        #[arg(long, requires = "fresnel")]
        analytic: Option<PathBuf>,
        /// Fresnel number (analytic source only; hologram manifests carry it).
        #[arg(long)]
        fresnel: Option<f64>,
        #[arg(long, value_enum)]
        channel: ChannelArg,
        #[arg(long, default_value_t = 64)]
        directions: usize,
        /// Truncation: interpolation terms per ray (default: all tabulated).
        #[arg(long)]
        zeros: Option<usize>,
        /// Output samples per axis (even).
        #[arg(long, default_value_t = 128)]
        grid: usize,
        /// Output field of view.
        #[arg(long, default_value_t = 2.0)]
        extent: f64,
        /// Zero-table radius as a multiple of the output Nyquist radius.
        #[arg(long, default_value_t = 2.0)]
        margin: f64,
        /// Round a non-odd Fresnel number up to the next odd integer
        /// (analytic source only; a recorded hologram must be re-simulated).
        #[arg(long)]
        refresnel: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the generating-function validation suite.
    Verify {
        /// Comma-separated Fresnel numbers, e.g. 1,3,5.
        #[arg(long, value_delimiter = ',')]
        fresnel: Vec<u32>,
        #[arg(long, value_enum, default_value_t = KindsArg::Both)]
        kinds: KindsArg,
        /// Tabulate zeros up to this radius for the checks.
        #[arg(long, default_value_t = 30.0)]
        max_radius: f64,
        /// Write the per-combination reports to this JSON file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Test hook: corrupt one tabulated zero before checking.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Reproduce the truncated-cardinal-series error figure.
    WksDemo {
        /// Truncation order N.
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

struct CliError {
    code: i32,
    message: String,
}

impl From<holoctf::Error> for CliError {
    fn from(e: holoctf::Error) -> Self {
        let code = match e {
            holoctf::Error::Validation(_) | holoctf::Error::Construction(_) => 1,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: 2, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: 2, message: message.into() }
}

/// One artifact in the run manifest: path plus SHA-256 of its bytes.
#[derive(serde::Serialize)]
struct Artifact {
    path: String,
    sha256: String,
}

fn artifact(path: &Path) -> Result<Artifact, CliError> {
    let bytes = std::fs::read(path)?;
    let digest = sha2::Sha256::digest(&bytes);
    Ok(Artifact {
        path: path.display().to_string(),
        sha256: format!("{digest:x}"),
    })
}

#[derive(serde::Serialize)]
struct RunManifest {
    command: String,
    parameters: serde_json::Value,
    inputs: Vec<Artifact>,
    outputs: Vec<Artifact>,
    versions: BTreeMap<String, String>,
}

fn write_run_manifest(
    out_dir: &Path,
    command: &str,
    parameters: serde_json::Value,
    inputs: &[&Path],
    outputs: &[&Path],
) -> Result<(), CliError> {
    let manifest = RunManifest {
        command: command.to_string(),
        parameters,
        inputs: inputs.iter().map(|p| artifact(p)).collect::<Result<_, _>>()?,
        outputs: outputs.iter().map(|p| artifact(p)).collect::<Result<_, _>>()?,
        versions: BTreeMap::from([(
            "holoctf".to_string(),
            env!("CARGO_PKG_VERSION").to_string(),
        )]),
    };
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| usage(format!("manifest serialization: {e}")))?;
    std::fs::write(out_dir.join("run_manifest.json"), text + "\n")?;
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| usage(format!("serialization: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Zeros { kind, fresnel, max_radius, out } => {
            cmd_zeros(kind.into(), fresnel, max_radius, &out)
        }
        Command::Simulate { phantom, fresnel, grid, extent, model, out } => {
            let model = match model {
                ModelArg::Linear => Model::Linear,
                ModelArg::Full => Model::Full,
            };
            cmd_simulate(&phantom, fresnel, grid, extent, model, &out)
        }
        Command::Reconstruct {
            hologram,
            analytic,
            fresnel,
            channel,
            directions,
            zeros,
            grid,
            extent,
            margin,
            refresnel,
            out,
        } => cmd_reconstruct(ReconArgs {
            hologram,
            analytic,
            fresnel,
            channel,
            directions,
            zeros,
            grid,
            extent,
            margin,
            refresnel,
            out,
        }),
        Command::Verify { fresnel, kinds, max_radius, report, corrupt } => {
            cmd_verify(&fresnel, kinds, max_radius, report.as_deref(), corrupt)
        }
        Command::WksDemo { n, out } => cmd_wks_demo(n, &out),
    }
}

fn cmd_zeros(kind: GenFnKind, f: u32, max_radius: f64, out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out)?;
    let genfn = build_genfn(kind, f)?;
    let table = genfn.zeros_up_to(max_radius, 0)?;
    let csv_path = out.join("zeros.csv");
    io::write_zero_table_csv(&csv_path, &table)?;

    let identities = check_zero_identities(&genfn, &table)?;
    let sine_type = match genfn.verify_sine_type(3.0, 200) {
        Ok(r) => Some(r),
        Err(holoctf::Error::Unsupported(msg)) => {
            println!("sine-type check skipped: {msg}");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let report_path = out.join("validation.json");
    write_json(
        &report_path,
        &serde_json::json!({ "identities": {
            "n_checked": identities.n_checked,
            "max_chirp_residual": identities.max_chirp_residual,
            "max_sign_residual": identities.max_sign_residual,
            "max_lambda_sq_residual": identities.max_lambda_sq_residual,
            "max_eval_residual": identities.max_eval_residual,
            "min_abs_dz": identities.min_abs_dz,
        }, "sine_type": sine_type }),
    )?;
    println!(
        "{} zeros of {kind} f={f} up to λ = {max_radius} -> {}",
        table.entries.len(),
        csv_path.display()
    );
    println!(
        "identities: n={} max chirp {:.2e}, max λ² residual {:.2e}, min |Z'| {:.3e}",
        identities.n_checked,
        identities.max_chirp_residual,
        identities.max_lambda_sq_residual,
        identities.min_abs_dz
    );
    if let Some(st) = &sine_type {
        println!(
            "sine-type: A = {:.4e}, B = {:.4e}, δ = {:.4e} ({})",
            st.a_est,
            st.b_est,
            st.delta_est,
            if st.passed { "ok" } else { "FAILED" }
        );
    }

    write_run_manifest(
        out,
        "zeros",
        serde_json::json!({ "kind": kind, "fresnel": f, "max_radius": max_radius }),
        &[],
        &[&csv_path, &report_path],
    )
}

fn cmd_simulate(
    phantom_path: &Path,
    f: f64,
    n: usize,
    extent: f64,
    model: Model,
    out: &Path,
) -> Result<(), CliError> {
    std::fs::create_dir_all(out)?;
    let text = std::fs::read_to_string(phantom_path)?;
    // a malformed or out-of-support phantom is a usage error, not a data failure
    let phantom = Phantom::from_json(&text).map_err(|e| usage(e.to_string()))?;
    let grid = Grid2D::new(n, extent)?;
    let pair = phantom_fields(&phantom, grid)?;
    let hologram = simulate_hologram(&pair, f, model)?;

    let holo_path = out.join("hologram.raw");
    io::write_hologram(&holo_path, &hologram)?;
    let pgm_path = out.join("hologram.pgm");
    let pgm_scale = io::write_pgm16(&pgm_path, &hologram.intensity)?;
    let mu_path = out.join("mu.raw");
    let phi_path = out.join("phi.raw");
    io::write_real_field(&mu_path, &pair.mu)?;
    io::write_real_field(&phi_path, &pair.phi)?;

    println!(
        "hologram f={f} model={model} {n}x{n} extent={extent} -> {}",
        holo_path.display()
    );
    write_run_manifest(
        out,
        "simulate",
        serde_json::json!({
            "phantom": phantom_path.display().to_string(),
            "fresnel": f,
            "grid": n,
            "extent": extent,
            "model": model,
            "pgm_scale": pgm_scale,
        }),
        &[phantom_path],
        &[&holo_path, &pgm_path, &mu_path, &phi_path],
    )
}

struct ReconArgs {
    hologram: Option<PathBuf>,
    analytic: Option<PathBuf>,
    fresnel: Option<f64>,
    channel: ChannelArg,
    directions: usize,
    zeros: Option<usize>,
    grid: usize,
    extent: f64,
    margin: f64,
    refresnel: bool,
    out: PathBuf,
}

/// Map the recorded (possibly non-integer) Fresnel number onto a supported
/// integer one, or explain how to get there.
fn resolve_fresnel(
    f_raw: f64,
    kind: GenFnKind,
    refresnel: bool,
    analytic: bool,
) -> Result<u32, CliError> {
    let nearest = f_raw.round();
    let integral = nearest >= 1.0 && (f_raw - nearest).abs() <= 1e-9 * f_raw.max(1.0);
    if integral {
        let f = nearest as u32;
        if f % 2 == 1 || (kind == GenFnKind::Phase && (f == 2 || f == 4)) {
            return Ok(f);
        }
    }
    let (f_odd, scale) = choose_odd_fresnel(f_raw)?;
    if refresnel && analytic {
        println!(
            "refresnel: f = {f_raw} -> {f_odd} (support diameter scale {scale:.6})"
        );
        return Ok(f_odd as u32);
    }
    Err(usage(format!(
        "Fresnel number {f_raw} is not supported for this channel (odd integers only{}); \
         {}",
        if kind == GenFnKind::Phase { ", plus 2 and 4 for the sin channel" } else { "" },
        if analytic {
            format!("pass --refresnel to use f = {f_odd} (scale {scale:.6})")
        } else {
            format!(
                "re-simulate the hologram at f = {f_odd} (enlarge the support by {scale:.6}) \
                 — --refresnel cannot rescale recorded data"
            )
        }
    )))
}

fn cmd_reconstruct(args: ReconArgs) -> Result<(), CliError> {
    std::fs::create_dir_all(&args.out)?;
    let kind: GenFnKind = match args.channel {
        ChannelArg::Sin => GenFnKind::Phase,
        ChannelArg::Cos => GenFnKind::Attenuation,
    };

    let mut inputs: Vec<&Path> = Vec::new();
    let (sampler, f_raw, truth, sampler_name) = match (&args.hologram, &args.analytic) {
        (Some(holo_path), None) => {
            inputs.push(holo_path);
            let hologram = io::read_hologram(holo_path)?;
            let f_raw = hologram.geometry.fresnel_number();
            (CtfSampler::from_hologram(&hologram), f_raw, None, "hologram")
        }
        (None, Some(phantom_path)) => {
            inputs.push(phantom_path);
            let text = std::fs::read_to_string(phantom_path)?;
            let phantom = Phantom::from_json(&text).map_err(|e| usage(e.to_string()))?;
            let f_raw = args.fresnel.expect("clap enforces --fresnel with --analytic");
            (CtfSampler::analytic(phantom.clone(), 0.0), f_raw, Some(phantom), "analytic")
        }
        _ => return Err(usage("exactly one of --hologram or --analytic is required")),
    };
    let f = resolve_fresnel(f_raw, kind, args.refresnel, args.analytic.is_some())?;
    // the analytic sampler must use the resolved f
    let sampler = match (sampler, &truth) {
        (CtfSampler::Analytic { phantom, .. }, _) => CtfSampler::analytic(phantom, f as f64),
        (s, _) => s,
    };

    let grid = Grid2D::new(args.grid, args.extent)?;
    let truth_field = truth.as_ref().map(|p| band_matched_truth(p, kind, grid));
    let cfg = ReconConfig {
        n_directions: args.directions,
        zero_margin: args.margin,
        n_terms: args.zeros,
        grid,
        near_zero_eps: 1e-8,
    };
    let (field, report) = reconstruct_field(&sampler, kind, f, &cfg, truth_field.as_ref())?;

    let field_path = args.out.join("field.raw");
    io::write_real_field(&field_path, &field)?;
    let pgm_path = args.out.join("field.pgm");
    let pgm_scale = io::write_pgm16(&pgm_path, &field)?;
    let profile_path = args.out.join("profile.csv");
    write_radial_profile(&profile_path, &field, truth_field.as_ref())?;

    let recon_manifest_path = args.out.join("recon_manifest.json");
    write_json(
        &recon_manifest_path,
        &serde_json::json!({
            "kind": kind,
            "f": f,
            "n_directions": report.n_directions,
            "n_terms": report.n_terms,
            "sampler": sampler_name,
            "grid": { "n": grid.n, "extent": grid.extent },
            "metrics": report,
        }),
    )?;
    let mut outputs: Vec<&Path> =
        vec![&field_path, &pgm_path, &profile_path, &recon_manifest_path];

    let metrics_path = args.out.join("metrics.json");
    if truth_field.is_some() {
        write_json(
            &metrics_path,
            &serde_json::json!({
                "rel_l2_error": report.rel_l2_error,
                "max_abs_error": report.max_abs_error,
            }),
        )?;
        outputs.push(&metrics_path);
        println!(
            "rel L2 error {:.4e}, max abs error {:.4e}",
            report.rel_l2_error.unwrap_or(f64::NAN),
            report.max_abs_error.unwrap_or(f64::NAN)
        );
    }
    println!(
        "reconstructed {kind} channel, f={f}, {} directions x {} terms -> {}",
        report.n_directions,
        report.n_terms,
        field_path.display()
    );

    write_run_manifest(
        &args.out,
        "reconstruct",
        serde_json::json!({
            "sampler": sampler_name,
            "channel": kind,
            "f": f,
            "directions": args.directions,
            "zeros": args.zeros,
            "grid": args.grid,
            "extent": args.extent,
            "margin": args.margin,
            "pgm_scale": pgm_scale,
        }),
        &inputs,
        &outputs,
    )
}

/// Azimuthally averaged profile: bin by round(|y|/Δy).
fn write_radial_profile(
    path: &Path,
    field: &RealField2D,
    truth: Option<&RealField2D>,
) -> Result<(), CliError> {
    let g = field.grid;
    let n_bins = g.n / 2 + 1;
    let mut sums = vec![0.0f64; n_bins];
    let mut sums_truth = vec![0.0f64; n_bins];
    let mut counts = vec![0u64; n_bins];
    for i in 0..g.n {
        for j in 0..g.n {
            let r = g.coord(i).hypot(g.coord(j));
            let bin = (r / g.spacing()).round() as usize;
            if bin < n_bins {
                sums[bin] += field.at(i, j);
                if let Some(t) = truth {
                    sums_truth[bin] += t.at(i, j);
                }
                counts[bin] += 1;
            }
        }
    }
    let mut out = String::from(if truth.is_some() {
        "radius,mean,truth_mean\n"
    } else {
        "radius,mean\n"
    });
    for b in 0..n_bins {
        if counts[b] == 0 {
            continue;
        }
        let r = b as f64 * g.spacing();
        let m = sums[b] / counts[b] as f64;
        if truth.is_some() {
            out.push_str(&format!("{r},{m},{}\n", sums_truth[b] / counts[b] as f64));
        } else {
            out.push_str(&format!("{r},{m}\n"));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn cmd_verify(
    fresnel: &[u32],
    kinds: KindsArg,
    max_radius: f64,
    report_path: Option<&Path>,
    corrupt: bool,
) -> Result<(), CliError> {
    if fresnel.is_empty() {
        return Err(usage("--fresnel requires at least one value"));
    }
    let kinds: &[GenFnKind] = match kinds {
        KindsArg::Both => &[GenFnKind::Phase, GenFnKind::Attenuation],
        KindsArg::Phase => &[GenFnKind::Phase],
        KindsArg::Attenuation => &[GenFnKind::Attenuation],
    };
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for &f in fresnel {
        for &kind in kinds {
            let genfn = build_genfn(kind, f)?;
            let mut table = genfn.zeros_up_to(max_radius, 0)?;
            if corrupt {
                let i = 3.min(table.entries.len() - 1);
                table.entries[i].lambda += 1e-3;
            }
            let identities = match check_zero_identities(&genfn, &table) {
                Ok(r) => {
                    println!(
                        "{kind} f={f}: {} zeros ok (max chirp {:.2e}, min |Z'| {:.3e})",
                        r.n_checked, r.max_chirp_residual, r.min_abs_dz
                    );
                    Some(r)
                }
                Err(holoctf::Error::Validation(items)) => {
                    println!("{kind} f={f}: {} identity failure(s):", items.len());
                    for item in &items {
                        println!("  {item}");
                    }
                    failures.push(format!("{kind} f={f}: {} identity failure(s)", items.len()));
                    None
                }
                Err(e) => return Err(e.into()),
            };
            let sine_type = match genfn.verify_sine_type(3.0, 200) {
                Ok(r) => {
                    if !r.passed {
                        failures.push(format!("{kind} f={f}: sine-type bounds failed"));
                    }
                    println!(
                        "{kind} f={f}: sine-type A={:.3e} B={:.3e} δ={:.3e} ({})",
                        r.a_est,
                        r.b_est,
                        r.delta_est,
                        if r.passed { "ok" } else { "FAILED" }
                    );
                    Some(r)
                }
                Err(holoctf::Error::Unsupported(msg)) => {
                    println!("{kind} f={f}: sine-type check skipped: {msg}");
                    None
                }
                Err(e) => return Err(e.into()),
            };
            reports.push(serde_json::json!({
                "kind": kind,
                "f": f,
                "identities": identities.map(|r| serde_json::json!({
                    "n_checked": r.n_checked,
                    "max_chirp_residual": r.max_chirp_residual,
                    "max_sign_residual": r.max_sign_residual,
                    "max_lambda_sq_residual": r.max_lambda_sq_residual,
                    "max_eval_residual": r.max_eval_residual,
                    "min_abs_dz": r.min_abs_dz,
                })),
                "sine_type": sine_type,
            }));
        }
    }
    if let Some(p) = report_path {
        write_json(p, &serde_json::json!({ "combinations": reports, "failures": failures }))?;
    }
    if !failures.is_empty() {
        return Err(CliError { code: 1, message: failures.join("; ") });
    }
    println!("all checks passed");
    Ok(())
}

fn cmd_wks_demo(n: u32, out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out)?;
    let demo = wks_truncation_demo(n, &wks_default_grid());
    let csv_path = out.join("wks_error.csv");
    io::write_error_curve_csv(&csv_path, &demo.curve)?;
    println!("N = {n}: max |g - g_N| = {:.9}", demo.max_abs_error);
    write_run_manifest(
        out,
        "wks-demo",
        serde_json::json!({ "n": n, "max_abs_error": demo.max_abs_error }),
        &[],
        &[&csv_path],
    )
}
