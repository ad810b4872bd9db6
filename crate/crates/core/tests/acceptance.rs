//! Acceptance suite: ten criteria, one PASS/FAIL line each. Exits nonzero if
//! any criterion fails.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use string_resonance::oracle::{fd_bound_states, RadialMesh};
use string_resonance::resonance::{lorentzian, sigma_zero, ResonanceModel};
use string_resonance::scattering::{amplitude_f, sigma_small_angle_m0_with, sigma_total, Basis, BasisConfig};
use string_resonance::scenario::{emit_csv, preset_si111, run_angle_scan};
use string_resonance::special::bessel_j_zero;
use string_resonance::spectrum::{bound_states_exact, single_state_threshold};
use string_resonance::units::{effective_scales, BeamState, StringPotential};

const E: f64 = 15e6;
const MASS: f64 = 5.10999e5;

fn si() -> StringPotential<f64> {
    preset_si111().well
}

fn beam(theta: f64) -> BeamState<f64> {
    BeamState::new(E, MASS, theta).unwrap()
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within_budget(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn threshold() -> Outcome {
    let w = si();
    let reps = 1000;
    let t = Instant::now();
    let mut ec = 0.0;
    for _ in 0..reps {
        ec = single_state_threshold(&w).unwrap();
    }
    let per_call = t.elapsed() / reps;
    let ns = per_call.as_secs_f64() * 1e9;
    let derived = ((ec - 20.19e6) / 20.19e6).abs() < 5e-4;
    let quoted = ((ec - 20e6) / 20e6).abs() <= 0.05;
    let fast = within_budget(per_call, Duration::from_millis(1));
    outcome(
        derived && quoted && fast,
        format!("E_c = {:.4} MeV (derived 20.19, quoted 20 within 5%), {ns:.1} ns per call", ec / 1e6),
    )
}

fn resonance_angle() -> Outcome {
    let t = ResonanceModel::default().theta_res(&si(), E, 1, 1).unwrap();
    let rel = (t / 1.2161e-3 - 1.0).abs();
    let quoted = 0.1f64.to_radians();
    let ratio = quoted.max(t) / quoted.min(t);
    outcome(
        rel <= 1e-4 && ratio <= 1.5,
        format!(
            "theta_res = {t:.6e} rad = {:.4} deg (rel {rel:.1e}); quoted 0.1 deg, ratio {ratio:.3}",
            t.to_degrees()
        ),
    )
}

fn width_ratio() -> Outcome {
    let m = ResonanceModel::default();
    let r = m.gamma_angle(&si(), E, 1, 1).unwrap() / m.theta_res(&si(), E, 1, 1).unwrap();
    let rel = (r / 0.2034 - 1.0).abs();
    let factor = 0.5 / r;
    outcome(
        rel <= 1e-4 && (1.0 / 3.0..=3.0).contains(&factor),
        format!("Gamma/theta_res = {r:.6} (rel {rel:.1e} vs 0.2034); quoted 0.5 is x{factor:.2}"),
    )
}

fn round_trip() -> Outcome {
    let t = Instant::now();
    let m = ResonanceModel::default();
    let w = si();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for e in [5e6, 10e6, 15e6, 19e6] {
        for (n, mm) in [(1, 1), (1, 2)] {
            if let Ok(theta) = m.theta_res(&w, e, n, mm) {
                let back = m.e_res(&w, theta, n, mm).unwrap();
                worst = worst.max(((back - e) / e).abs());
                checked += 1;
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(
        worst <= 1e-9 && checked > 0 && within_budget(elapsed, Duration::from_millis(10)),
        format!("{checked} pairs, worst rel {worst:.1e}, {elapsed:?}"),
    )
}

/// Full width at half maximum of the bound-state excess of the small-angle
/// cross section, continued symmetrically through zero angle.
fn central_fwhm(scale: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = 20_000;
    let theta: Vec<f64> = (0..=n).map(|i| 8.0 * scale * i as f64 / n as f64).collect();
    let y: Vec<f64> = theta.iter().map(|&t| f(t)).collect();
    let (ipk, &ymax) = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let half = 0.5 * ymax;
    let cross = |i: usize, j: usize| theta[i] + (half - y[i]) * (theta[j] - theta[i]) / (y[j] - y[i]);
    let hi = (ipk..n).find(|&i| y[i + 1] < half).map(|i| cross(i, i + 1)).unwrap_or(f64::NAN);
    let lo = (1..=ipk).rev().find(|&i| y[i - 1] < half).map(|i| cross(i - 1, i)).unwrap_or(-hi);
    (hi - lo, theta[ipk])
}

fn central_peak() -> Outcome {
    let t = Instant::now();
    let w = si();
    let p = beam(0.0).momentum;
    let scale = 1.0 / (p * w.length).sqrt();
    let levels: Vec<(u32, f64)> = bound_states_exact(&w, E, 0).unwrap().iter().map(|s| (s.n, s.energy)).collect();
    let (fwhm, at) = central_fwhm(scale, |th| sigma_small_angle_m0_with(&beam(th), &w, &levels).unwrap().bound);
    let elapsed = t.elapsed();
    let ratio = fwhm / scale;
    outcome(
        (0.5..=2.0).contains(&ratio) && within_budget(elapsed, Duration::from_secs(5)),
        format!(
            "FWHM = {fwhm:.4e} rad = {:.4} deg = {ratio:.3} / sqrt(pL) (1/sqrt(pL) = {scale:.3e}); lobe maximum at {at:.2e} rad; quoted 0.02 deg; {elapsed:?}",
            fwhm.to_degrees()
        ),
    )
}

fn two_peaks() -> Outcome {
    let t = Instant::now();
    let s = preset_si111();
    let scan = run_angle_scan(&s, 4).unwrap();
    let elapsed = t.elapsed();
    let y: Vec<f64> = scan.rows.iter().map(|r| r.total).collect();
    let mut maxima = Vec::new();
    if y[0] > y[1] {
        maxima.push(0);
    }
    for i in 1..y.len() - 1 {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] {
            maxima.push(i);
        }
    }
    let deg: Vec<f64> = maxima.iter().map(|&i| scan.grid[i].to_degrees()).collect();
    let theta_eff = effective_scales(&beam(0.0), &s.well).unwrap().theta_eff;
    let central = maxima.first().is_some_and(|&i| scan.grid[i] < theta_eff);
    let side = deg.len() == 2 && deg[1] > 0.02 && deg[1] < 0.15;
    outcome(
        central && side && within_budget(elapsed, Duration::from_secs(5)),
        format!(
            "maxima at {deg:.4?} deg (central peak counted at 0 when inside theta_eff = {:.4} deg); {elapsed:?}",
            theta_eff.to_degrees()
        ),
    )
}

fn spectrum_cross_validation() -> Outcome {
    let t = Instant::now();
    let w = si();
    let exact = bound_states_exact(&w, E, 0).unwrap()[0].energy;
    let mesh = RadialMesh::for_well(&w, 20.0, 10_000).unwrap();
    let fd = fd_bound_states(&w, E, 0, &mesh).unwrap()[0].1;
    let rel = ((fd - exact) / exact).abs();

    let j01: f64 = bessel_j_zero(0, 1).unwrap();
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 5, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let seen = RefCell::new(Vec::new());
    let r = w.radius;
    let verdict = runner.run(&(1.0f64..4.0), |x0| {
        let well = StringPotential::new(x0 * x0 / (2.0 * E * r * r), r, w.length).unwrap();
        let states = bound_states_exact(&well, E, 1).unwrap();
        let expected = usize::from(x0 > j01);
        let mut ok = states.len() == expected;
        if (x0 - j01).abs() > 0.05 {
            let radii = states.first().map_or(20.0, |s| (12.0 / (s.kappa_out * r)).max(20.0));
            let mesh = RadialMesh::for_well(&well, radii, (500.0 * radii) as usize).unwrap();
            ok &= fd_bound_states(&well, E, 1, &mesh).unwrap().len() == expected;
        }
        seen.borrow_mut().push((x0, states.len()));
        if ok {
            Ok(())
        } else {
            Err(proptest::test_runner::TestCaseError::fail(format!("x0 = {x0}")))
        }
    });
    let elapsed = t.elapsed();
    let wells: Vec<String> = seen.borrow().iter().map(|(x, n)| format!("{x:.3}:{n}")).collect();
    outcome(
        rel <= 1e-3 && verdict.is_ok() && within_budget(elapsed, Duration::from_secs(30)),
        format!(
            "m=0 exact {exact:.6} eV vs fd {fd:.6} eV (rel {rel:.1e}); m=1 thresholds on wells x0:count [{}] vs j01 = {j01:.4}; {elapsed:?}",
            wells.join(", ")
        ),
    )
}

fn optical_theorem() -> Outcome {
    let t = Instant::now();
    let w = si();
    let b = beam(0.0);
    let basis = Basis::build(&b, &w, &BasisConfig::default()).unwrap();
    let sigma = sigma_total(&b, &w, &basis).unwrap();
    let f = amplitude_f(&b, &w, &basis, 0.0, 0.0).unwrap();
    let optical = 4.0 * PI / b.momentum * f.im;
    let rel = ((optical - sigma.total) / sigma.total).abs();
    let deficit = basis.parseval_deficit(0.0);
    let elapsed = t.elapsed();
    outcome(
        rel <= 1e-8 && deficit.abs() < 0.01 && within_budget(elapsed, Duration::from_secs(30)),
        format!("sigma = {:.6e}, optical rel {rel:.1e}, Parseval deficit {deficit:.2e}; {elapsed:?}", sigma.total),
    )
}

fn breit_wigner() -> Outcome {
    let t = Instant::now();
    let w = si();
    let m = ResonanceModel::default();
    let (tr, g) = (m.theta_res(&w, E, 1, 1).unwrap(), m.gamma_angle(&w, E, 1, 1).unwrap());
    let at = beam(tr);
    let peak = m.bw_angle_excess(&at, &w, 1, 1).unwrap();
    let s0 = sigma_zero(&at, &w).unwrap();
    let closed = 2.0 / PI * w.length / at.momentum;
    let exact_peak = peak == s0 && ((s0 - closed) / closed).abs() <= 2.0 * f64::EPSILON;
    let half = |d: f64| m.bw_angle_excess(&beam(tr + d), &w, 1, 1).unwrap() / s0;
    let half_err = (half(g / 2.0) - 0.5).abs().max((half(-g / 2.0) - 0.5).abs());
    let symmetric = (1..200).all(|k| {
        let d = g * k as f64 / 50.0;
        lorentzian(d, g).to_bits() == lorentzian(-d, g).to_bits()
    });
    let elapsed = t.elapsed();
    outcome(
        exact_peak && half_err <= 1e-9 && symmetric && within_budget(elapsed, Duration::from_millis(10)),
        format!("peak {peak:.6e} vs (2/pi)L/p {closed:.6e}; half-maximum error {half_err:.1e}; symmetric {symmetric}; {elapsed:?}"),
    )
}

fn determinism() -> Outcome {
    let s = preset_si111();
    let mut lib = Vec::new();
    for workers in [1, 2, 8] {
        let mut buf = Vec::new();
        emit_csv(&run_angle_scan(&s, workers).unwrap(), &mut buf, false).unwrap();
        lib.push(buf);
    }
    let mut cli = Vec::new();
    for workers in ["1", "2", "8"] {
        let o = Command::new(env!("CARGO_BIN_EXE_string-resonance"))
            .arg("fig2")
            .env("STRING_RESONANCE_THREADS", workers)
            .output()
            .unwrap();
        cli.push(if o.status.success() { o.stdout } else { Vec::new() });
    }
    let same = lib.windows(2).all(|p| p[0] == p[1]) && cli.windows(2).all(|p| p[0] == p[1]) && lib[0] == cli[0];
    outcome(
        same && !lib[0].is_empty(),
        format!("library and CLI fig2 CSV ({} bytes) identical under 1, 2, 8 workers: {same}", lib[0].len()),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("single-state threshold", threshold),
        ("resonance angle", resonance_angle),
        ("width ratio", width_ratio),
        ("angle/energy round trip", round_trip),
        ("central peak width", central_peak),
        ("two-peak structure", two_peaks),
        ("spectrum cross-validation", spectrum_cross_validation),
        ("optical theorem and completeness", optical_theorem),
        ("Breit-Wigner identities", breit_wigner),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed, {:?}", criteria.len() - failed, start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
