//! Property tests across the physics modules.

use proptest::prelude::*;
use string_resonance::oracle::{fd_bound_states, levinson_ratio, resonance_from_phase, PhaseShiftCurve, RadialMesh};
use string_resonance::quadrature::integrate;
use string_resonance::resonance::{lorentzian, sigma_zero, ResonanceModel};
use string_resonance::scattering::{overlap_q, sigma_small_angle_m0, sigma_total, Basis};
use string_resonance::scenario::{preset_si111, run_angle_scan};
use string_resonance::special::{bessel_j, bessel_j_zero};
use string_resonance::spectrum::{bound_states_exact, quasi_bound_level_model, LevelVariant};
use string_resonance::units::{effective_scales, to_natural_length, to_si_length, BeamState, StringPotential};

const E: f64 = 15e6;
const MASS: f64 = 5.10999e5;
const R_SI: f64 = 1.0 / 9.7e3;
const L_SI: f64 = 7.094823;

/// Well with strength `x0 = sqrt(2 E V0) R` at the Si radius.
fn well_with_x0(x0: f64) -> StringPotential<f64> {
    StringPotential::new(x0 * x0 / (2.0 * E * R_SI * R_SI), R_SI, L_SI).unwrap()
}

fn zeros_below(m: u32, x0: f64) -> usize {
    (1..=50).take_while(|&k| bessel_j_zero::<f64>(m, k).unwrap() < x0).count()
}

/// Expected bound-state count from the zero-energy matching limit.
fn expected_count(m: u32, x0: f64) -> usize {
    match m {
        0 => 1 + zeros_below(1, x0),
        _ => zeros_below(m - 1, x0),
    }
}

/// Distance from x0 to the nearest binding threshold of the given m.
fn threshold_gap(m: u32, x0: f64) -> f64 {
    let order = if m == 0 { 1 } else { m - 1 };
    (1..=10).map(|k| (bessel_j_zero::<f64>(order, k).unwrap() - x0).abs()).fold(f64::INFINITY, f64::min)
}

proptest! {
    #[test]
    fn length_round_trip(x in 1e-12f64..1.0) {
        let back = to_si_length(to_natural_length(x).unwrap());
        prop_assert!(((back - x) / x).abs() <= 1e-12);
    }

    #[test]
    fn mass_shell(e in 1e6f64..1e10, theta in 0.0f64..0.01) {
        let b = BeamState::new(e, MASS, theta).unwrap();
        prop_assert!(((b.momentum * b.momentum + MASS * MASS) / (e * e) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn m_max_monotone(t1 in 0.0f64..1e-3, t2 in 0.0f64..1e-3, l1 in 0.1f64..100.0, l2 in 0.1f64..100.0) {
        let (tl, th) = (t1.min(t2), t1.max(t2));
        let (ll, lh) = (l1.min(l2), l1.max(l2));
        let w = |l: f64| StringPotential::new(23.0, R_SI, l).unwrap();
        let m = |t: f64, l: f64| effective_scales(&BeamState::new(E, MASS, t).unwrap(), &w(l)).unwrap().m_max;
        prop_assert!(m(tl, ll) <= m(th, ll));
        prop_assert!(m(tl, ll) <= m(tl, lh));
    }

    #[test]
    fn effective_scale_identity(e in 1e6f64..1e9, l in 0.01f64..1e3) {
        let b = BeamState::new(e, MASS, 0.0).unwrap();
        let s = effective_scales(&b, &StringPotential::new(23.0, R_SI, l).unwrap()).unwrap();
        prop_assert!((s.theta_eff * s.rho_eff * b.momentum - 1.0).abs() <= 4.0 * f64::EPSILON);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_states_are_bound_and_matched(x0 in 0.5f64..8.0, m in 0u32..4) {
        let w = well_with_x0(x0);
        for s in bound_states_exact(&w, E, m).unwrap() {
            prop_assert!(-w.depth < s.energy && s.energy < 0.0);
            prop_assert!(s.matching_residual.abs() < 1e-8, "residual {:e}", s.matching_residual);
        }
    }

    #[test]
    fn bound_count_follows_bessel_zeros(x0 in 0.3f64..12.0, m in 0u32..4) {
        prop_assume!(threshold_gap(m, x0) > 1e-6);
        let n = bound_states_exact(&well_with_x0(x0), E, m).unwrap().len();
        prop_assert_eq!(n, expected_count(m, x0));
    }

    #[test]
    fn model_level_is_linear_in_depth_and_quadratic_in_inverse_radius(
        v1 in 1.0f64..100.0, v2 in 1.0f64..100.0, r in 1e-5f64..1e-3, n in 1u32..4, m in 0u32..5,
    ) {
        let lvl = |v: f64, r: f64| quasi_bound_level_model(&StringPotential::new(v, r, L_SI).unwrap(), E, n, m).unwrap().energy;
        let d = lvl(v1, r) - lvl(v2, r);
        prop_assert!((d - (v2 - v1)).abs() <= 1e-9 * v1.max(v2) + 1e-9 * lvl(v1, r).abs());
        let kin = |r: f64| (lvl(v1, r) + v1) * r * r;
        prop_assert!((kin(r) / kin(2.0 * r) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn overlap_modulus_is_azimuth_independent(x0 in 1.0f64..8.0, pr in 0.0f64..5.0, phi in -7.0f64..7.0) {
        let w = well_with_x0(x0);
        let s = bound_states_exact(&w, E, 0).unwrap()[0];
        let p = pr / R_SI;
        let a = overlap_q(&s, p, 0.0).unwrap().norm();
        let b = overlap_q(&s, p, phi).unwrap().norm();
        prop_assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn bound_only_cross_section_matches_zero_range_form(x0 in 0.35f64..0.5, theta in 0.0f64..1e-7) {
        let w = well_with_x0(x0);
        let beam = BeamState::ultrarelativistic(E, MASS, theta).unwrap();
        let basis = Basis::bound_only(&beam, &w, 0).unwrap();
        let full = sigma_total(&beam, &w, &basis).unwrap().bound;
        let small = sigma_small_angle_m0(&beam, &w).unwrap().bound;
        prop_assert!(((full - small) / small).abs() <= 1e-6, "{full:e} vs {small:e}");
    }

    #[test]
    fn resonance_round_trip(e in 2e6f64..1e8, n in 1u32..4, m in 1u32..6) {
        let model = ResonanceModel::default();
        let w = well_with_x0(2.708);
        if let Ok(theta) = model.theta_res(&w, e, n, m) {
            prop_assume!(theta > 0.0);
            let back = model.e_res(&w, theta, n, m).unwrap();
            prop_assert!(((back - e) / e).abs() <= 1e-9, "{back} vs {e}");
        }
    }

    #[test]
    fn lorentzian_is_even(d in -1.0f64..1.0, w in 1e-6f64..1.0) {
        prop_assert_eq!(lorentzian(d, w).to_bits(), lorentzian(-d, w).to_bits());
    }

    #[test]
    fn peak_excess_is_sigma_zero(n in 1u32..3, m in 1u32..4, theta0 in 1e-4f64..1e-2) {
        let model = ResonanceModel::default();
        let w = well_with_x0(2.708);
        if let Ok(t) = model.theta_res(&w, E, n, m) {
            let beam = BeamState::new(E, MASS, t).unwrap();
            prop_assert_eq!(model.bw_angle_excess(&beam, &w, n, m).unwrap(), sigma_zero(&beam, &w).unwrap());
        }
        let er = model.e_res(&w, theta0, n, m).unwrap();
        if er > MASS {
            let beam = BeamState::new(er, MASS, theta0).unwrap();
            prop_assert_eq!(model.bw_energy_excess(&beam, &w, n, m).unwrap(), sigma_zero(&beam, &w).unwrap());
        }
    }

    #[test]
    fn theta_res_ordering(v1 in 5.0f64..40.0, v2 in 5.0f64..40.0, n in 1u32..3, m in 1u32..5) {
        let model = ResonanceModel::new(LevelVariant::Model, false);
        let w = |v: f64| StringPotential::new(v, R_SI, L_SI).unwrap();
        if let (Ok(a), Ok(b)) = (model.theta_res(&w(v1), E, n, m), model.theta_res(&w(v1), E, n, m + 1)) {
            prop_assert!(a < b);
        }
        let (lo, hi) = (v1.min(v2), v1.max(v2));
        prop_assume!(hi - lo > 1e-6);
        if let (Ok(a), Ok(b)) = (model.theta_res(&w(lo), E, n, m), model.theta_res(&w(hi), E, n, m)) {
            prop_assert!(b < a);
        }
    }

    #[test]
    fn synthetic_phase_resonance_recovered(e0 in 2.0f64..8.0, g in 0.1f64..1.0) {
        let grid: Vec<f64> = (1..=2000).map(|i| i as f64 * 0.005).collect();
        let raw = grid.iter().map(|&e| ((g / 2.0) / (e0 - e)).atan()).collect();
        let curve = PhaseShiftCurve::from_phases(1, grid, raw).unwrap();
        let (er, w) = resonance_from_phase(&curve).unwrap().unwrap();
        prop_assert!((er / e0 - 1.0).abs() < 0.01);
        prop_assert!((w / g - 1.0).abs() < 0.01);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn finite_difference_agrees_with_matching(x0 in 1.0f64..8.0) {
        for m in 0..=2 {
            prop_assume!(threshold_gap(m, x0) > 0.05);
        }
        let w = well_with_x0(x0);
        for m in 0..=2u32 {
            let exact = bound_states_exact(&w, E, m).unwrap();
            // the shallowest state sets how far the mesh must reach
            let kappa_r = exact.iter().map(|s| (2.0 * E * -s.energy).sqrt() * R_SI).fold(f64::INFINITY, f64::min);
            let radii = (20.0f64).max(if kappa_r.is_finite() { 12.0 / kappa_r } else { 0.0 });
            let mesh = RadialMesh::for_well(&w, radii, (2000.0 * radii) as usize).unwrap();
            let fd = fd_bound_states(&w, E, m, &mesh).unwrap();
            prop_assert_eq!(fd.len(), exact.len(), "x0 = {}, m = {}", x0, m);
            for (a, (_, b)) in exact.iter().zip(&fd) {
                prop_assert!(((b - a.energy) / a.energy).abs() <= 1e-3, "x0 = {x0}, m = {m}: {} vs {b}", a.energy);
            }
        }
    }

    #[test]
    fn sigma_zero_grows_with_length(factor in 1.01f64..4.0) {
        let base = preset_si111();
        let mut longer = base.clone();
        longer.well = base.well.with_length(base.well.length * factor);
        let mut small = base.clone();
        small.scan.points = 21;
        longer.scan.points = 21;
        let a = run_angle_scan(&small, 2).unwrap();
        let b = run_angle_scan(&longer, 2).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            prop_assert!(y.continuum > x.continuum);
        }
    }
}

#[test]
fn counts_match_finite_difference_at_documented_strengths() {
    for x0 in [1.0, 2.708, 5.0, 8.0] {
        let w = well_with_x0(x0);
        let mesh = RadialMesh::for_well(&w, 20.0, 10_000).unwrap();
        for m in 0..=2 {
            let fd = fd_bound_states(&w, E, m, &mesh).unwrap();
            assert_eq!(fd.len(), expected_count(m, x0), "x0 = {x0}, m = {m}");
            assert_eq!(bound_states_exact(&w, E, m).unwrap().len(), fd.len());
        }
    }
}

#[test]
fn bound_states_are_unit_normalised_by_quadrature() {
    for x0 in [1.0, 2.708, 5.0] {
        let w = well_with_x0(x0);
        for m in 0..=2 {
            for s in bound_states_exact(&w, E, m).unwrap() {
                let f = |rho: f64| 2.0 * std::f64::consts::PI * (s.norm * s.radial(rho)).powi(2) * rho;
                let inner = integrate(f, 0.0, R_SI, 1e-14, 1e-12, 200).unwrap();
                let tail = 60.0 / s.kappa_out;
                let outer = integrate(f, R_SI, R_SI + tail, 1e-14, 1e-12, 400).unwrap();
                assert!((inner + outer - 1.0).abs() < 1e-8, "x0 = {x0}, m = {m}: {}", inner + outer);
                assert!((s.radial(R_SI * (1.0 - 1e-12)) - s.radial(R_SI * (1.0 + 1e-12))).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn binding_threshold_for_m1() {
    let j01: f64 = bessel_j_zero(0, 1).unwrap();
    assert!(bessel_j(0, j01).unwrap().abs() < 1e-12);
    assert!(bound_states_exact(&well_with_x0(j01 * 0.999), E, 1).unwrap().is_empty());
    assert_eq!(bound_states_exact(&well_with_x0(j01 * 1.001), E, 1).unwrap().len(), 1);
}

#[test]
fn si_cross_section_terms_are_nonnegative() {
    let w = well_with_x0(2.708);
    for theta in [0.0, 3e-5] {
        let beam = BeamState::new(E, MASS, theta).unwrap();
        let basis = Basis::build(&beam, &w, &Default::default()).unwrap();
        let s = sigma_total(&beam, &w, &basis).unwrap();
        assert!(s.total > 0.0 && s.bound >= 0.0);
        assert!(s.per_state.iter().all(|c| c.contribution >= 0.0));
    }
}

#[test]
fn levinson_counts_for_test_wells() {
    for x0 in [2.708, 5.0, 8.0] {
        let w = well_with_x0(x0);
        for m in 0..=2 {
            let bound = bound_states_exact(&w, E, m).unwrap().len() as f64;
            let ratio = levinson_ratio(&w, E, m, 1e-12, 1e6, 6000).unwrap();
            assert!((ratio - bound).abs() <= 0.15 * bound.max(1.0), "x0 = {x0}, m = {m}: {ratio} vs {bound}");
        }
    }
}

#[test]
fn fig2_annotations_match_resonance_module() {
    let s = preset_si111();
    let scan = run_angle_scan(&s, 1).unwrap();
    let model = ResonanceModel::default();
    assert_eq!(scan.annotations.len(), 1);
    let a = scan.annotations[0];
    assert_eq!((a.n, a.m), (1, 1));
    assert_eq!(a.position, model.theta_res(&s.well, s.energy, 1, 1).unwrap());
    assert_eq!(a.width, model.gamma_angle(&s.well, s.energy, 1, 1).unwrap());
}
