use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use string_resonance::oracle::{
    fd_bound_states, levinson_ratio, parseval_audit, resonance_from_phase, PhaseShiftCurve, RadialMesh,
    MIN_MESH_POINTS, MIN_MESH_RADII, MIN_POINTS_PER_EV,
};
use string_resonance::scattering::{amplitude_f, sigma_total, Basis, BasisConfig};
use string_resonance::scenario::{
    emit_csv, preset_si111, preset_si111_energy, run_angle_scan, run_energy_scan, write_csv_file, ScanKind, ScanResult,
    Scenario,
};
use string_resonance::spectrum::{
    bound_states_exact, level_exact_infinite_well, n_max, quasi_bound_level_model, single_state_threshold, LevelVariant,
};
use string_resonance::units::{effective_scales, regime_check, to_si_length};
use string_resonance::{Error, Result};

const THREADS_ENV: &str = "STRING_RESONANCE_THREADS";

#[derive(Parser)]
#[command(
    name = "string-resonance",
    version,
    about = "Transverse levels, resonances and cross sections for a fast particle crossing an atomic string"
)]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Shared {
    /// Scenario config (`section.key = value` lines); defaults to the Si preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Resonance energy from `2 (V0 + sqrt(V0^2 + theta^2 s / R^2)) / theta^2`.
    #[arg(long, global = true)]
    paper_literal: bool,
    /// Use p = E instead of exact kinematics.
    #[arg(long, global = true)]
    ultrarelativistic: bool,
    /// model, exact-zero or exact-matching.
    #[arg(long, global = true)]
    level_variant: Option<LevelVariant>,
    /// Add a sigma_total / sigma0 column to CSV output.
    #[arg(long, global = true)]
    normalized: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bound and quasi-bound transverse levels.
    Spectrum,
    /// Single-state threshold energy and regime numbers.
    Threshold,
    /// Position and width of one resonance.
    Resonance {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
    /// Cross section against entry angle (CSV).
    AngleScan,
    /// Cross section against beam energy at fixed angle (CSV).
    EnergyScan,
    /// Angle scan of the Si preset.
    Fig2,
    /// Cross-check the analytic results against the numerical oracles.
    Validate {
        /// Radial mesh points of the finite-difference solver.
        #[arg(long, default_value_t = MIN_MESH_POINTS)]
        mesh_points: usize,
        /// Radial mesh extent in well radii.
        #[arg(long, default_value_t = MIN_MESH_RADII)]
        mesh_extent: f64,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 1,
        Error::Accuracy(_) => 3,
        _ => 2,
    }
}

fn workers() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn scenario(shared: &Shared, fallback: fn() -> Scenario) -> Result<Scenario> {
    let mut s = match &shared.config {
        Some(path) => Scenario::from_config_file(path)?,
        None => fallback(),
    };
    s.flags.paper_literal |= shared.paper_literal;
    s.flags.ultrarelativistic |= shared.ultrarelativistic;
    if let Some(v) = shared.level_variant {
        s.flags.level_variant = v;
    }
    Ok(s)
}

fn write_text(shared: &Shared, text: &str) -> Result<()> {
    match &shared.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_scan(shared: &Shared, result: &ScanResult) -> Result<()> {
    match &shared.out {
        Some(path) => write_csv_file(result, path, shared.normalized),
        None => emit_csv(result, &mut std::io::stdout().lock(), shared.normalized),
    }
}

fn spectrum(s: &Scenario) -> Result<String> {
    let (e, w) = (s.energy, &s.well);
    let mut out = String::new();
    let (nm, count) = n_max(w, e)?;
    let _ = writeln!(out, "scenario {}: E = {e:e} eV, V0 = {} eV, R = {:e} m", s.name, w.depth, to_si_length(w.radius));
    let _ = writeln!(
        out,
        "x0 = sqrt(2 E V0) R = {:.6}, n_max = {nm:.4} (floor {count})",
        (2.0 * e * w.depth).sqrt() * w.radius
    );
    let _ = writeln!(out, "\nbound states (exact matching)\n   m   n        energy_eV   matching_residual");
    for m in 0.. {
        let states = bound_states_exact(w, e, m)?;
        if states.is_empty() {
            break;
        }
        for st in states {
            let _ = writeln!(out, "{:4}{:4}  {:15.9e}  {:.2e}", st.m, st.n, st.energy, st.matching_residual);
        }
    }
    let _ = writeln!(out, "\nwell levels (n = 1..2, m = 0..3)\n   m   n   model_eV          exact_zero_eV");
    for n in 1..=2 {
        for m in 0..=3 {
            let a = quasi_bound_level_model(w, e, n, m)?;
            let b = level_exact_infinite_well(w, e, n, m)?;
            let _ = writeln!(out, "{m:4}{n:4}  {:15.9e}  {:15.9e}", a.energy, b.energy);
        }
    }
    Ok(out)
}

fn threshold(s: &Scenario) -> Result<String> {
    let mut out = String::new();
    let t = single_state_threshold(&s.well)?;
    let beam = s.beam(s.energy, s.theta0)?;
    let sc = effective_scales(&beam, &s.well)?;
    let r = regime_check(&beam, &s.well);
    let _ = writeln!(out, "single-state threshold E_c = {:.6e} eV ({:.4} MeV)", t, t / 1e6);
    let _ = writeln!(
        out,
        "beam E = {:e} eV: {}",
        s.energy,
        if s.energy < t { "below threshold" } else { "above threshold" }
    );
    let _ =
        writeln!(out, "rho_eff = {:.6e} eV^-1, theta_eff = {:.6e} rad, m_max = {}", sc.rho_eff, sc.theta_eff, sc.m_max);
    let flag = |p: bool| if p { "ok" } else { "VIOLATED" };
    let _ =
        writeln!(out, "L/R = {:.4} (> {}) {}", r.long_string.value, r.long_string.threshold, flag(r.long_string.pass));
    let _ = writeln!(
        out,
        "pR = {:.4} (> {}) {}",
        r.fast_particle.value,
        r.fast_particle.threshold,
        flag(r.fast_particle.pass)
    );
    let _ = writeln!(
        out,
        "theta0 pR = {:.4} (< {}) {}",
        r.slow_transverse.value,
        r.slow_transverse.threshold,
        flag(r.slow_transverse.pass)
    );
    Ok(out)
}

fn resonance(s: &Scenario, n: u32, m: u32) -> Result<String> {
    let beam = s.beam(s.energy, s.theta0)?;
    let p = s.flags.resonance_model().predict(&beam, &s.well, n, m)?;
    let mut out = String::new();
    let _ = writeln!(out, "resonance n = {n}, m = {m} ({})", s.flags.describe());
    let _ = writeln!(out, "theta_res = {:.6e} rad ({:.6} deg)", p.theta_res, p.theta_res.to_degrees());
    let _ = writeln!(out, "gamma = {:.6e} rad, gamma/theta_res = {:.4}", p.gamma, p.gamma / p.theta_res);
    if p.at_threshold {
        let _ = writeln!(out, "beam sits at the level threshold");
    }
    match (p.e_res, p.gamma_bar) {
        (Some(e), Some(g)) => {
            let _ = writeln!(
                out,
                "E_res = {:.6e} eV at theta0 = {:.6} deg, gamma_bar = {:.6e} eV",
                e,
                s.theta0.to_degrees(),
                g
            );
        }
        _ => {
            let _ = writeln!(out, "E_res: n/a (entry angle is zero)");
        }
    }
    let _ = writeln!(out, "peak excess = {:.6e} eV^-2", p.sigma_peak_excess);
    Ok(out)
}

fn validate(s: &Scenario, mesh_points: usize, mesh_extent: f64) -> Result<String> {
    let (e, w) = (s.energy, &s.well);
    let mut out = String::new();
    let mut failures = Vec::new();
    let mesh = RadialMesh::for_well(w, mesh_extent, mesh_points)?;
    let _ = writeln!(out, "finite-difference bound states ({mesh_points} points, {mesh_extent} R)");
    for m in 0..=2 {
        let exact = bound_states_exact(w, e, m)?;
        let fd = fd_bound_states(w, e, m, &mesh)?;
        if fd.len() != exact.len() {
            failures.push(format!("m = {m}: {} exact vs {} finite-difference states", exact.len(), fd.len()));
        }
        for (x, (_, y)) in exact.iter().zip(&fd) {
            let rel = ((y - x.energy) / x.energy).abs();
            let _ = writeln!(out, "  m = {m} n = {}: exact {:.9e}  fd {:.9e}  rel {:.2e}", x.n, x.energy, y, rel);
            if rel > 1e-3 {
                failures.push(format!("m = {m} n = {}: relative difference {rel:.2e}", x.n));
            }
        }
        if exact.is_empty() {
            let _ = writeln!(out, "  m = {m}: no bound state (both)");
        }
    }

    let _ = writeln!(out, "phase-shift resonances (0 to 40 eV, {MIN_POINTS_PER_EV} points/eV)");
    for m in 1..=2 {
        let curve = PhaseShiftCurve::scan_uniform(w, e, m, 40.0, MIN_POINTS_PER_EV as usize)?;
        match resonance_from_phase(&curve)? {
            Some((pos, width)) => {
                let _ = writeln!(out, "  m = {m}: eps_res = {pos:.6} eV, width = {width:.4e} eV");
            }
            None => {
                let _ = writeln!(out, "  m = {m}: no resonance in window");
            }
        }
    }

    let _ = writeln!(out, "Levinson counts (1e-12 to 1e6 eV)");
    for m in 0..=2 {
        let ratio = levinson_ratio(w, e, m, 1e-12, 1e6, 6000)?;
        let bound = bound_states_exact(w, e, m)?.len() as f64;
        let _ = writeln!(out, "  m = {m}: phase drop / pi = {ratio:.4}, bound states = {bound}");
        let tol = 0.15 * bound.max(1.0);
        if (ratio - bound).abs() > tol {
            failures.push(format!("Levinson m = {m}: {ratio:.4} vs {bound}"));
        }
    }

    let beam = s.beam(e, 0.0)?;
    let basis = Basis::build(&beam, w, &BasisConfig::default())?;
    let deficit = parseval_audit(&basis, 0.0);
    let _ = writeln!(out, "completeness deficit at p_perp = 0: {deficit:.3e}");
    if deficit.abs() > 1e-2 {
        failures.push(format!("completeness deficit {deficit:.3e}"));
    }
    let sigma = sigma_total(&beam, w, &basis)?;
    let f = amplitude_f(&beam, w, &basis, 0.0, 0.0)?;
    let optical = 4.0 * std::f64::consts::PI / beam.momentum * f.im;
    let rel = ((optical - sigma.total) / sigma.total).abs();
    let _ = writeln!(out, "optical theorem: sigma = {:.6e}, 4 pi Im f / p = {optical:.6e}, rel {rel:.2e}", sigma.total);
    if rel > 1e-8 {
        failures.push(format!("optical theorem mismatch {rel:.2e}"));
    }

    if failures.is_empty() {
        let _ = writeln!(out, "all checks passed");
        Ok(out)
    } else {
        eprint!("{out}");
        Err(Error::Accuracy(failures.join("; ")))
    }
}

fn run(cli: Cli) -> Result<()> {
    let shared = &cli.shared;
    match cli.command {
        Command::Spectrum => write_text(shared, &spectrum(&scenario(shared, preset_si111)?)?),
        Command::Threshold => write_text(shared, &threshold(&scenario(shared, preset_si111)?)?),
        Command::Resonance { n, m } => write_text(shared, &resonance(&scenario(shared, preset_si111)?, n, m)?),
        Command::AngleScan => {
            let s = scenario(shared, preset_si111)?;
            if s.scan.kind != ScanKind::Angle {
                return Err(Error::InvalidArgument("config describes an energy scan; use energy-scan".into()));
            }
            write_scan(shared, &run_angle_scan(&s, workers()?)?)
        }
        Command::EnergyScan => {
            let s = scenario(shared, preset_si111_energy)?;
            if s.scan.kind != ScanKind::Energy {
                return Err(Error::InvalidArgument("config describes an angle scan; use angle-scan".into()));
            }
            write_scan(shared, &run_energy_scan(&s, workers()?)?)
        }
        Command::Fig2 => {
            if shared.config.is_some() {
                return Err(Error::InvalidArgument(
                    "fig2 always uses the built-in Si preset; use angle-scan with --config".into(),
                ));
            }
            write_scan(shared, &run_angle_scan(&scenario(shared, preset_si111)?, workers()?)?)
        }
        Command::Validate { mesh_points, mesh_extent } => {
            write_text(shared, &validate(&scenario(shared, preset_si111)?, mesh_points, mesh_extent)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
