//! Transverse spectrum of the circular square well.
//!
//! The transverse radial problem uses the total energy `E` as effective mass:
//! `-(1/2E)[R'' + R'/rho - m^2 R/rho^2] - V0 1{rho <= R} R = eps R`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{int, lit, Real};
use crate::special::{brent, j_triple, j_zero, jn, k_n, k_triple, scan_brackets, zeros_of_j_below, RootBracket};
use crate::units::{BeamState, StringPotential};

/// How a transverse level was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Exact bound state from J/K matching at the well edge.
    BoundExact,
    /// Square-well model level `(pi^2 n^2 + m^2)/(2 E R^2) - V0`.
    QuasiBoundModel,
    /// Infinite circular well level `j_{m,n}^2/(2 E R^2) - V0`.
    LevelExactInfiniteWell,
}

/// A transverse eigenstate `Z = norm * R(rho) e^{i m phi}`.
///
/// For bound states `R(rho) = J_m(k_in rho)` inside the well and
/// `exterior * K_m(kappa_out rho)` outside. Level-only kinds carry
/// `norm = 0` and no wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseState<T> {
    pub m: u32,
    pub n: u32,
    /// Transverse energy in eV.
    pub energy: T,
    pub kind: StateKind,
    /// Well radius the state was computed for.
    pub radius: T,
    pub k_in: T,
    pub kappa_out: T,
    /// Exterior amplitude `J_m(k_in R) / K_m(kappa_out R)`.
    pub exterior: T,
    pub norm: T,
    /// Logarithmic-derivative mismatch at the edge, relative to `k_in`.
    pub matching_residual: T,
}

impl<T: Real> TransverseState<T> {
    /// alpha = 2 p eps.
    pub fn alpha(&self, momentum: T) -> T {
        lit::<T>(2.0) * momentum * self.energy
    }

    pub fn is_normalized(&self) -> bool {
        self.kind == StateKind::BoundExact && self.norm > T::zero() && self.norm.is_finite()
    }

    /// Unnormalised radial function at `rho`.
    pub fn radial(&self, rho: T) -> T {
        if rho <= self.radius {
            jn(self.m, self.k_in * rho)
        } else {
            self.exterior * k_n(self.m, self.kappa_out * rho)
        }
    }
}

/// Settings for spectrum searches and the oracle mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConfig<T> {
    pub max_m: u32,
    pub energy_tolerance: T,
    pub grid_points: usize,
}

impl<T: Real> SpectrumConfig<T> {
    pub fn new(max_m: u32, energy_tolerance: T, grid_points: usize) -> Result<Self> {
        if !(energy_tolerance > T::zero()) {
            return Err(Error::invalid("energy tolerance must be positive"));
        }
        if grid_points < 1000 {
            return Err(Error::invalid(format!("grid_points must be >= 1000, got {grid_points}")));
        }
        Ok(Self { max_m, energy_tolerance, grid_points })
    }

    /// `max_m = 2`, tolerance `1e-9 V0`, 10^4 oracle points.
    pub fn for_well(well: &StringPotential<T>) -> Self {
        let tol = (lit::<T>(1e-9) * well.depth).max(T::min_positive_value());
        Self { max_m: 2, energy_tolerance: tol, grid_points: 10_000 }
    }
}

/// Which level formula feeds the negative m = 0 energies of the small-angle
/// cross section and the positive resonance levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LevelVariant {
    /// `pi^2 n^2 + m^2` square-well levels.
    Model,
    /// `j_{m,n}^2` infinite circular well levels.
    ExactZero,
    /// Exact finite-well matching for bound states; resonances use the model.
    #[default]
    ExactMatching,
}

impl LevelVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            LevelVariant::Model => "model",
            LevelVariant::ExactZero => "exact-zero",
            LevelVariant::ExactMatching => "exact-matching",
        }
    }
}

impl fmt::Display for LevelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LevelVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "model" => Ok(LevelVariant::Model),
            "exact-zero" => Ok(LevelVariant::ExactZero),
            "exact-matching" => Ok(LevelVariant::ExactMatching),
            other => Err(Error::invalid(format!(
                "unknown level variant '{other}' (expected model, exact-zero or exact-matching)"
            ))),
        }
    }
}

const SCAN_INTERVALS: usize = 512;

fn check_energy<T: Real>(energy: T) -> Result<()> {
    if !(energy > T::zero()) || !energy.is_finite() {
        return Err(Error::invalid(format!("effective mass E must be > 0, got {energy}")));
    }
    Ok(())
}

/// Matching function in `a = k_in R` with `b = sqrt(x0^2 - a^2)`; zero at a bound state.
fn matching<T: Real>(m: u32, x0: T, a: T) -> T {
    let b2 = (x0 - a) * (x0 + a);
    let (jm1, jm, _) = j_triple(m, a);
    if b2 <= T::zero() {
        return a * jm1;
    }
    let b = b2.sqrt();
    a * jm1 + b * k_ratio(m, b) * jm
}

/// K_{m-1}(b) / K_m(b), with K_{-1} = K_1, by forward recurrence on ratios
/// so that large orders at small b cannot overflow.
fn k_ratio<T: Real>(m: u32, b: T) -> T {
    let k0 = k_n(0, b);
    let k1 = k_n(1, b);
    if m == 0 {
        return k1 / k0;
    }
    // up = K_j / K_{j-1}
    let mut up = k1 / k0;
    let two_over_b = lit::<T>(2.0) / b;
    for j in 1..m {
        up = T::one() / up + int::<T>(j as i64) * two_over_b;
    }
    T::one() / up
}

/// Exact bound states of azimuthal number `m`, sorted by energy.
pub fn bound_states_exact<T: Real>(well: &StringPotential<T>, energy: T, m: u32) -> Result<Vec<TransverseState<T>>> {
    check_energy(energy)?;
    let x0 = well.strength(energy);
    if !(x0 > T::zero()) {
        return Ok(Vec::new());
    }
    // an m >= 1 state appears only once x0 passes the first zero of J_{m-1}
    if m >= 1 && x0 <= j_zero(m - 1, 1) {
        return Ok(Vec::new());
    }
    let lo = x0 * lit(1e-9);
    let brackets = scan_brackets(|a| matching(m, x0, a), lo, x0, SCAN_INTERVALS);
    let mut out = Vec::with_capacity(brackets.len());
    for br in brackets {
        let mid = lit::<T>(0.5) * (br.lo + br.hi);
        // shallow roots are resolved in b, deep ones in a
        let (a, b) = if mid * mid > lit::<T>(0.5) * x0 * x0 {
            let b_of = |a: T| ((x0 - a) * (x0 + a)).max(T::zero()).sqrt();
            let (b_lo, b_hi) = (b_of(br.hi), b_of(br.lo));
            let h = |b: T| {
                let a = ((x0 - b) * (x0 + b)).sqrt();
                matching(m, x0, a)
            };
            let bracket = RootBracket { lo: b_lo, hi: b_hi, f_lo: br.f_hi, f_hi: br.f_lo };
            let b = brent(h, bracket, T::epsilon() * b_lo.max(T::min_positive_value()), T::zero());
            (((x0 - b) * (x0 + b)).sqrt(), b)
        } else {
            let a = brent(|a| matching(m, x0, a), br, T::epsilon() * br.hi * lit(2.0), T::zero());
            (a, ((x0 - a) * (x0 + a)).sqrt())
        };
        if !(b > T::zero()) {
            continue;
        }
        out.push(bound_state_from_roots(well, energy, m, a, b));
    }
    out.sort_by(|s, t| s.energy.partial_cmp(&t.energy).unwrap());
    Ok(out)
}

fn bound_state_from_roots<T: Real>(well: &StringPotential<T>, energy: T, m: u32, a: T, b: T) -> TransverseState<T> {
    let r = well.radius;
    let two = lit::<T>(2.0);
    let (jm1, jm, jp1) = j_triple(m, a);
    let (km1, km, kp1) = k_triple(m, b);
    let exterior = jm / km;
    let half_r2 = r * r / two;
    let inner = half_r2 * (jm * jm - jm1 * jp1);
    let outer = exterior * exterior * half_r2 * (km1 * kp1 - km * km);
    let norm = T::one() / (two * T::PI() * (inner + outer)).sqrt();
    let n = zeros_of_j_below(m, a, None).len() as u32 + 1;
    let energy_eps =
        if b * b < a * a { -(b * b) / (two * energy * r * r) } else { a * a / (two * energy * r * r) - well.depth };
    let residual = ((a * jm1 / jm) + b * km1 / km).abs() / a;
    TransverseState {
        m,
        n,
        energy: energy_eps,
        kind: StateKind::BoundExact,
        radius: r,
        k_in: a / r,
        kappa_out: b / r,
        exterior,
        norm,
        matching_residual: residual,
    }
}

/// Exact bound states for `m = 0..=config.max_m`, ordered by (m, energy).
pub fn bound_spectrum<T: Real>(
    well: &StringPotential<T>,
    energy: T,
    config: &SpectrumConfig<T>,
) -> Result<Vec<TransverseState<T>>> {
    let mut all = Vec::new();
    for m in 0..=config.max_m {
        all.extend(bound_states_exact(well, energy, m)?);
    }
    Ok(all)
}

fn level_state<T: Real>(
    well: &StringPotential<T>,
    energy: T,
    n: u32,
    m: u32,
    root: T,
    kind: StateKind,
) -> TransverseState<T> {
    let r = well.radius;
    TransverseState {
        m,
        n,
        energy: root * root / (lit::<T>(2.0) * energy * r * r) - well.depth,
        kind,
        radius: r,
        k_in: root / r,
        kappa_out: T::zero(),
        exterior: T::zero(),
        norm: T::zero(),
        matching_residual: T::zero(),
    }
}

/// Square-well quasi-bound level `(pi^2 n^2 + m^2)/(2 E R^2) - V0`.
pub fn quasi_bound_level_model<T: Real>(
    well: &StringPotential<T>,
    energy: T,
    n: u32,
    m: u32,
) -> Result<TransverseState<T>> {
    check_energy(energy)?;
    check_n(n)?;
    Ok(level_state(well, energy, n, m, model_level_sum::<T>(n, m).sqrt(), StateKind::QuasiBoundModel))
}

/// Infinite circular well level `j_{m,n}^2/(2 E R^2) - V0`.
pub fn level_exact_infinite_well<T: Real>(
    well: &StringPotential<T>,
    energy: T,
    n: u32,
    m: u32,
) -> Result<TransverseState<T>> {
    check_energy(energy)?;
    check_n(n)?;
    Ok(level_state(well, energy, n, m, j_zero(m, n), StateKind::LevelExactInfiniteWell))
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("radial index n starts at 1"));
    }
    Ok(())
}

/// `pi^2 n^2 + m^2`.
pub fn model_level_sum<T: Real>(n: u32, m: u32) -> T {
    let n = int::<T>(n as i64);
    let m = int::<T>(m as i64);
    T::PI() * T::PI() * n * n + m * m
}

/// The squared dimensionless wavenumber of level (n, m) under `variant`.
///
/// Exact matching has no positive levels of its own and uses the model.
pub fn level_sum<T: Real>(variant: LevelVariant, n: u32, m: u32) -> T {
    match variant {
        LevelVariant::ExactZero => {
            let j: T = j_zero(m, n);
            j * j
        }
        LevelVariant::Model | LevelVariant::ExactMatching => model_level_sum(n, m),
    }
}

/// Negative m = 0 energies entering the small-angle cross section.
pub fn m0_bound_energies<T: Real>(
    well: &StringPotential<T>,
    energy: T,
    variant: LevelVariant,
) -> Result<Vec<(u32, T)>> {
    check_energy(energy)?;
    if variant == LevelVariant::ExactMatching {
        return Ok(bound_states_exact(well, energy, 0)?.into_iter().map(|s| (s.n, s.energy)).collect());
    }
    let mut out = Vec::new();
    for n in 1.. {
        let s = level_sum::<T>(variant, n, 0);
        let eps = s / (lit::<T>(2.0) * energy * well.radius * well.radius) - well.depth;
        if !(eps < T::zero()) {
            break;
        }
        out.push((n, eps));
    }
    Ok(out)
}

/// Number of quasi-bound states `sqrt(2 E V0 R^2)/pi` and its floor.
pub fn n_max<T: Real>(well: &StringPotential<T>, energy: T) -> Result<(T, u64)> {
    check_energy(energy)?;
    let v = well.strength(energy) / T::PI();
    Ok((v, v.floor().to_u64().unwrap_or(0)))
}

/// Energy below which only one quasi-bound state exists, `pi^2/(2 V0 R^2)`.
pub fn single_state_threshold<T: Real>(well: &StringPotential<T>) -> Result<T> {
    if !(well.depth > T::zero()) {
        return Err(Error::invalid("single-state threshold needs a positive well depth"));
    }
    Ok(T::PI() * T::PI() / (lit::<T>(2.0) * well.depth * well.radius * well.radius))
}

/// `p_perp^2/(2E) - eps_model(n, m)`; zero on resonance.
pub fn resonance_condition_residual<T: Real>(
    beam: &BeamState<T>,
    well: &StringPotential<T>,
    n: u32,
    m: u32,
) -> Result<T> {
    let level = quasi_bound_level_model(well, beam.total_energy, n, m)?;
    Ok(beam.transverse_energy() - level.energy)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HBARC: f64 = 1.973_269_804e-7;
    const E: f64 = 15e6;

    fn si() -> StringPotential<f64> {
        StringPotential::new(23.0, 1.0 / 9.7e3, 1.4e-6 / HBARC).unwrap()
    }

    #[test]
    fn si_bound_states() {
        let s0 = bound_states_exact(&si(), E, 0).unwrap();
        assert_eq!(s0.len(), 1);
        assert!((s0[0].energy + 13.767_688_343_632_94).abs() < 1e-9, "{}", s0[0].energy);
        assert_eq!(s0[0].n, 1);
        let s1 = bound_states_exact(&si(), E, 1).unwrap();
        assert_eq!(s1.len(), 1);
        assert!((s1[0].energy + 1.924_430_420_147_64).abs() < 1e-9, "{}", s1[0].energy);
        assert!(bound_states_exact(&si(), E, 2).unwrap().is_empty());
        for s in s0.iter().chain(&s1) {
            assert!(s.matching_residual < 1e-8);
            let lhs = s.k_in * s.k_in + s.kappa_out * s.kappa_out;
            assert!((lhs / (2.0 * E * 23.0) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn no_well_no_states() {
        let w = si().with_depth(0.0);
        for m in 0..3 {
            assert!(bound_states_exact(&w, E, m).unwrap().is_empty());
        }
    }

    #[test]
    fn model_levels() {
        let l = quasi_bound_level_model(&si(), E, 1, 1).unwrap();
        assert!((l.energy - 11.09).abs() < 0.01, "{}", l.energy);
        let w = si();
        let e0 = std::f64::consts::PI.powi(2) / (2.0 * w.depth * w.radius * w.radius);
        assert!(quasi_bound_level_model(&w, e0, 1, 0).unwrap().energy.abs() < 1e-12);
        let z = level_exact_infinite_well(&w, E, 1, 0).unwrap();
        assert!((z.energy + 4.86).abs() < 0.01, "{}", z.energy);
        let z = level_exact_infinite_well(&w, E, 1, 1).unwrap();
        assert!((z.energy - 23.05).abs() < 0.01, "{}", z.energy);
    }

    #[test]
    fn counts_and_thresholds() {
        let (v, f) = n_max(&si(), E).unwrap();
        assert!((v - 0.8620).abs() < 1e-4);
        assert_eq!(f, 0);
        let t = single_state_threshold(&si()).unwrap();
        assert!((t / 2.019e7 - 1.0).abs() < 1e-3);
        let (v, _) = n_max(&si(), t).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn residual_at_zero_angle() {
        let beam = BeamState::new(E, 5.10999e5, 0.0).unwrap();
        let r = resonance_condition_residual(&beam, &si(), 1, 1).unwrap();
        assert!((r + 11.09).abs() < 0.01);
    }

    #[test]
    fn variant_parsing() {
        for v in [LevelVariant::Model, LevelVariant::ExactZero, LevelVariant::ExactMatching] {
            assert_eq!(v.as_str().parse::<LevelVariant>().unwrap(), v);
        }
        assert!("bogus".parse::<LevelVariant>().is_err());
    }
}
