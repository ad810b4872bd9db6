//! Transition amplitudes, the forward scattering amplitude and the
//! optical-theorem cross section over a discretised transverse basis.
//!
//! Conventions: `Q(p) = (1/2pi) Int d^2rho Z(rho) exp(i p.rho)`, so a
//! unit-normalised bound state has `Sum |Q|^2` over a plane wave equal to the
//! plane-wave norm `D^2/(4 pi)` on a disk of radius `D`. The continuum is
//! represented by Dirichlet modes on that disk; the same construction with
//! `V0 = 0` is subtracted as a free reference so that the box size drops out.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::{int, lit, Real};
use crate::special::{brent, j_triple, jn, k_triple, y_triple, zeros_of_j_below, RootBracket};
use crate::spectrum::{bound_states_exact, TransverseState};
use crate::sum::{pairwise_sum, pairwise_sum_complex};
use crate::units::{effective_scales, BeamState, StringPotential};

pub use crate::resonance::sigma_zero;

/// One entry of a state sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateContribution<T> {
    pub n: u32,
    pub m: u32,
    pub energy: T,
    pub contribution: T,
}

/// Cross section split into its physical pieces, all in eV^-2.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionBreakdown<T> {
    pub total: T,
    pub continuum: T,
    pub bound: T,
    pub resonance: T,
    pub per_state: Vec<StateContribution<T>>,
    /// Completeness deficit of the basis at the beam's transverse momentum.
    pub parseval_deficit: Option<T>,
}

impl<T: Real> CrossSectionBreakdown<T> {
    pub fn new(continuum: T, bound: T, resonance: T, per_state: Vec<StateContribution<T>>) -> Self {
        Self { total: continuum + bound + resonance, continuum, bound, resonance, per_state, parseval_deficit: None }
    }

    /// The state with the largest contribution.
    pub fn dominant_state(&self) -> Option<&StateContribution<T>> {
        self.per_state.iter().fold(None, |best: Option<&StateContribution<T>>, s| match best {
            Some(b) if b.contribution >= s.contribution => Some(b),
            _ => Some(s),
        })
    }
}

/// Antiderivative of `rho C_m(k rho) J_m(q rho)` where `c` and `j` hold
/// `(X_{m-1}, X_m, X_{m+1})` at `k rho` and `q rho`.
fn lommel<T: Real>(k: T, q: T, rho: T, c: (T, T, T), j: (T, T, T), coincident: bool) -> T {
    if coincident {
        rho * rho / lit(4.0) * (lit::<T>(2.0) * c.1 * j.1 - c.0 * j.2 - c.2 * j.0)
    } else {
        rho * (k * c.2 * j.1 - q * c.1 * j.2) / ((k - q) * (k + q))
    }
}

fn coincident<T: Real>(k: T, q: T, rho: T) -> bool {
    ((k - q) * rho).abs() < lit(1e-7)
}

/// `Int_0^R J_m(k rho) J_m(q rho) rho drho`.
fn interior_overlap<T: Real>(m: u32, k: T, q: T, r: T) -> T {
    let same = coincident(k, q, r);
    lommel(k, q, r, j_triple(m, k * r), j_triple(m, q * r), same)
}

/// Radial part of `Q` for a normalised bound state: `N Int R(rho) J_m(q rho) rho drho`.
fn bound_radial_overlap<T: Real>(state: &TransverseState<T>, q: T) -> T {
    let (m, r) = (state.m, state.radius);
    let inner = interior_overlap(m, state.k_in, q, r);
    let kappa = state.kappa_out;
    let (_, km, kp1) = k_triple(m, kappa * r);
    let (_, jm, jp1) = j_triple(m, q * r);
    let outer = r * (kappa * jm * kp1 - q * km * jp1) / (q * q + kappa * kappa);
    state.norm * (inner + state.exterior * outer)
}

/// `Q(p_perp, phi_p) = i^m e^{i m phi_p} N Int R(rho) J_m(p_perp rho) rho drho`.
pub fn overlap_q<T: Real>(state: &TransverseState<T>, p_perp: T, phi_p: T) -> Result<Complex<T>> {
    if !state.is_normalized() {
        return Err(Error::invalid("overlap needs a normalised bound state"));
    }
    if !(p_perp >= T::zero()) {
        return Err(Error::invalid("transverse momentum must be >= 0"));
    }
    Ok(azimuthal_phase(state.m, phi_p) * bound_radial_overlap(state, p_perp))
}

fn azimuthal_phase<T: Real>(m: u32, phi: T) -> Complex<T> {
    let i_m = match m % 4 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    };
    let (s, c) = (int::<T>(m as i64) * phi).sin_cos();
    i_m * Complex::new(c, s)
}

/// [`overlap_q`] by adaptive quadrature of the radial integral.
pub fn overlap_q_quadrature<T: Real>(state: &TransverseState<T>, p_perp: T, phi_p: T, tol: T) -> Result<Complex<T>> {
    if !state.is_normalized() {
        return Err(Error::invalid("overlap needs a normalised bound state"));
    }
    let (m, r) = (state.m, state.radius);
    let f = |rho: T| state.radial(rho) * jn(m, p_perp * rho) * rho;
    let inner = integrate(f, T::zero(), r, tol * lit(1e-3), tol, 4000)?;
    // exterior: the envelope has dropped by e^-60 after 60/kappa
    let span = lit::<T>(60.0) / state.kappa_out;
    let piece = if p_perp > T::zero() {
        (T::PI() / p_perp).min(T::one() / state.kappa_out)
    } else {
        T::one() / state.kappa_out
    };
    let pieces = (span / piece).ceil().to_usize().unwrap_or(1).clamp(1, 100_000);
    let width = span / int(pieces as i64);
    let mut parts = Vec::with_capacity(pieces);
    for i in 0..pieces {
        let a = r + width * int(i as i64);
        parts.push(integrate(f, a, a + width, tol * lit(1e-6), tol, 4000)?);
    }
    let outer = pairwise_sum(&parts);
    Ok(azimuthal_phase(m, phi_p) * (state.norm * (inner + outer)))
}

/// A Dirichlet mode on the basis disk: `J_m(k_in rho)` inside the well and
/// `a J_m(k rho) + b Y_m(k rho)` outside, vanishing at the disk edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumMode<T> {
    pub m: u32,
    pub index: u32,
    pub k: T,
    pub energy: T,
    pub k_in: T,
    pub a: T,
    pub b: T,
    pub norm: T,
}

/// Continuum discretisation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisConfig<T> {
    /// Disk radius in units of the effective impact parameter.
    pub disk_factor: T,
    /// Lower bound on the disk radius in well radii.
    pub min_disk_radii: T,
    /// Momentum cutoff times the well radius.
    pub cutoff_k_r: T,
    pub max_modes_per_m: usize,
    /// Highest azimuthal number; `None` sizes it from the beam.
    pub max_m: Option<u32>,
    /// Sign-change scan steps per free mode spacing.
    pub scan_subdivisions: usize,
    /// Include the continuum; `false` keeps only bound states.
    pub continuum: bool,
}

impl<T: Real> Default for BasisConfig<T> {
    fn default() -> Self {
        Self {
            disk_factor: lit(50.0),
            min_disk_radii: lit(20.0),
            cutoff_k_r: lit(10.0),
            max_modes_per_m: 2000,
            max_m: None,
            scan_subdivisions: 8,
            continuum: true,
        }
    }
}

/// Bound states plus interacting and free continuum modes.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis<T> {
    /// Effective mass E of the transverse problem.
    pub energy: T,
    pub radius: T,
    pub disk_radius: T,
    pub k_max: T,
    pub max_m: u32,
    pub continuum: bool,
    pub bound: Vec<TransverseState<T>>,
    pub interacting: Vec<ContinuumMode<T>>,
    pub free: Vec<ContinuumMode<T>>,
}

/// Matching coefficients of the exterior solution; `None` when they overflow.
fn mode_coefficients<T: Real>(m: u32, k: T, k_in: T, r: T) -> Option<(T, T)> {
    let (jm1, jm, jp1) = j_triple(m, k * r);
    let (ym1, ym, yp1) = y_triple(m, k * r);
    let (im1, im, ip1) = j_triple(m, k_in * r);
    let half = lit::<T>(0.5);
    let dj = half * (jm1 - jp1);
    let dy = half * (ym1 - yp1);
    let di = half * (im1 - ip1);
    let det = lit::<T>(2.0) / (T::PI() * r);
    let a = (im * k * dy - k_in * di * ym) / det;
    let b = ((k_in * di) * jm - (k * dj) * im) / det;
    (a.is_finite() && b.is_finite()).then_some((a, b))
}

fn cylinder<T: Real>(m: u32, a: T, b: T, x: T) -> (T, T, T) {
    let j = j_triple(m, x);
    if b == T::zero() {
        return (a * j.0, a * j.1, a * j.2);
    }
    let y = y_triple(m, x);
    (a * j.0 + b * y.0, a * j.1 + b * y.1, a * j.2 + b * y.2)
}

#[allow(clippy::too_many_arguments)]
fn build_mode<T: Real>(m: u32, index: u32, k: T, k_in: T, a: T, b: T, r: T, d: T, mass: T) -> ContinuumMode<T> {
    let half = lit::<T>(0.5);
    let (im1, im, ip1) = j_triple(m, k_in * r);
    let inner = half * r * r * (im * im - im1 * ip1);
    let norm_sq = |rho: T| {
        let c = cylinder(m, a, b, k * rho);
        half * rho * rho * (c.1 * c.1 - c.0 * c.2)
    };
    let outer = norm_sq(d) - norm_sq(r);
    ContinuumMode {
        m,
        index,
        k,
        energy: k * k / (lit::<T>(2.0) * mass),
        k_in,
        a,
        b,
        norm: T::one() / (lit::<T>(2.0) * T::PI() * (inner + outer)).sqrt(),
    }
}

fn free_modes<T: Real>(m: u32, r: T, d: T, k_max: T, cap: usize, mass: T) -> Vec<ContinuumMode<T>> {
    zeros_of_j_below(m, k_max * d, Some(cap as u32))
        .into_iter()
        .enumerate()
        .map(|(i, z)| {
            let k = z / d;
            build_mode(m, i as u32 + 1, k, k, T::one(), T::zero(), r, d, mass)
        })
        .collect()
}

fn interacting_modes<T: Real>(
    m: u32,
    well: &StringPotential<T>,
    mass: T,
    d: T,
    k_max: T,
    cfg: &BasisConfig<T>,
) -> Vec<ContinuumMode<T>> {
    let r = well.radius;
    let two_e_v = lit::<T>(2.0) * mass * well.depth;
    if two_e_v == T::zero() {
        return free_modes(m, r, d, k_max, cfg.max_modes_per_m, mass);
    }
    let k_in_of = |k: T| (k * k + two_e_v).sqrt();
    let edge = |k: T| match mode_coefficients(m, k, k_in_of(k), r) {
        Some((a, b)) => {
            let c = cylinder(m, a, b, k * d);
            c.1
        }
        None => jn(m, k * d),
    };
    let step = T::PI() / (int::<T>(cfg.scan_subdivisions as i64) * d);
    let start = if m == 0 { lit::<T>(1e-3) / d } else { step };
    let steps = ((k_max - start) / step).ceil().to_usize().unwrap_or(0);
    let mut out = Vec::new();
    let mut k0 = start;
    let mut g0 = edge(k0);
    for i in 1..=steps {
        if out.len() >= cfg.max_modes_per_m {
            break;
        }
        let k1 = (start + step * int(i as i64)).min(k_max);
        let g1 = edge(k1);
        if g0.is_finite() && g1.is_finite() && (g0 > T::zero()) != (g1 > T::zero()) {
            let bracket = RootBracket { lo: k0, hi: k1, f_lo: g0, f_hi: g1 };
            let k = brent(edge, bracket, T::epsilon() * k1 * lit(4.0), T::zero());
            let index = out.len() as u32 + 1;
            let mode = match mode_coefficients(m, k, k_in_of(k), r) {
                Some((a, b)) => build_mode(m, index, k, k_in_of(k), a, b, r, d, mass),
                None => build_mode(m, index, k, k, T::one(), T::zero(), r, d, mass),
            };
            let mode = if mode.norm.is_finite() && mode.norm > T::zero() {
                mode
            } else {
                // far below the barrier the well is invisible; keep the free mode
                build_mode(m, index, k, k, T::one(), T::zero(), r, d, mass)
            };
            out.push(mode);
        }
        k0 = k1;
        g0 = g1;
    }
    out
}

impl<T: Real> Basis<T> {
    /// Builds the production basis for `beam` and `well`.
    pub fn build(beam: &BeamState<T>, well: &StringPotential<T>, cfg: &BasisConfig<T>) -> Result<Self> {
        let mass = beam.total_energy;
        if !(mass > T::zero()) {
            return Err(Error::invalid("basis needs a positive beam energy"));
        }
        let r = well.radius;
        let floor = cfg.min_disk_radii * r;
        let d = if well.length > T::zero() && beam.momentum > T::zero() {
            (cfg.disk_factor * effective_scales(beam, well)?.rho_eff).max(floor)
        } else {
            floor
        };
        let k_max = cfg.cutoff_k_r / r;
        let max_m = cfg.max_m.unwrap_or_else(|| auto_max_m(beam.transverse_momentum * d));
        let mut bound = Vec::new();
        for m in 0..=max_m {
            bound.extend(bound_states_exact(well, mass, m)?);
        }
        let (interacting, free) = if cfg.continuum {
            #[allow(clippy::type_complexity)]
            let per_m: Vec<(Vec<ContinuumMode<T>>, Vec<ContinuumMode<T>>)> = (0..=max_m)
                .into_par_iter()
                .map(|m| {
                    (
                        interacting_modes(m, well, mass, d, k_max, cfg),
                        free_modes(m, r, d, k_max, cfg.max_modes_per_m, mass),
                    )
                })
                .collect();
            let mut inter = Vec::new();
            let mut free = Vec::new();
            for (a, b) in per_m {
                inter.extend(a);
                free.extend(b);
            }
            (inter, free)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Self {
            energy: mass,
            radius: r,
            disk_radius: d,
            k_max,
            max_m,
            continuum: cfg.continuum,
            bound,
            interacting,
            free,
        })
    }

    /// Only the exact bound states with `m <= max_m`.
    pub fn bound_only(beam: &BeamState<T>, well: &StringPotential<T>, max_m: u32) -> Result<Self> {
        let cfg = BasisConfig { max_m: Some(max_m), continuum: false, ..BasisConfig::default() };
        Self::build(beam, well, &cfg)
    }

    pub fn is_empty(&self) -> bool {
        self.bound.is_empty() && self.interacting.is_empty()
    }

    /// Plane-wave norm on the disk in the `Q` convention, `D^2/(4 pi)`.
    pub fn plane_wave_norm(&self) -> T {
        self.disk_radius * self.disk_radius / (lit::<T>(4.0) * T::PI())
    }

    /// Copy with continuum modes above `k_max` dropped.
    pub fn truncated(&self, k_max: T) -> Self {
        let keep = |v: &Vec<ContinuumMode<T>>| v.iter().copied().filter(|s| s.k <= k_max).collect();
        Self { k_max, interacting: keep(&self.interacting), free: keep(&self.free), ..self.clone() }
    }

    /// `1 - Sum |Q|^2 / plane_wave_norm` over bound plus interacting states.
    pub fn parseval_deficit(&self, p_perp: T) -> T {
        let w: Vec<T> =
            self.bound_terms(p_perp).chain(self.mode_terms(&self.interacting, p_perp)).map(|t| t.1).collect();
        T::one() - pairwise_sum(&w) / self.plane_wave_norm()
    }

    /// Same audit over the free reference modes.
    pub fn free_parseval_deficit(&self, p_perp: T) -> T {
        let w: Vec<T> = self.mode_terms(&self.free, p_perp).map(|t| t.1).collect();
        T::one() - pairwise_sum(&w) / self.plane_wave_norm()
    }

    /// (state, |Q|^2 summed over +-m) for bound states.
    fn bound_terms(&self, p_perp: T) -> impl Iterator<Item = (StateContribution<T>, T)> + '_ {
        self.bound.iter().map(move |s| {
            let g = bound_radial_overlap(s, p_perp);
            let c = StateContribution { n: s.n, m: s.m, energy: s.energy, contribution: T::zero() };
            (c, multiplicity::<T>(s.m) * g * g)
        })
    }

    fn mode_terms<'a>(
        &'a self,
        modes: &'a [ContinuumMode<T>],
        p_perp: T,
    ) -> impl Iterator<Item = (StateContribution<T>, T)> + 'a {
        modes.iter().map(move |s| {
            let g = self.mode_radial_overlap(s, p_perp);
            let c = StateContribution { n: s.index, m: s.m, energy: s.energy, contribution: T::zero() };
            (c, multiplicity::<T>(s.m) * g * g)
        })
    }

    fn mode_radial_overlap(&self, s: &ContinuumMode<T>, q: T) -> T {
        let (m, r, d) = (s.m, self.radius, self.disk_radius);
        let inner = interior_overlap(m, s.k_in, q, r);
        let same = coincident(s.k, q, d);
        let at = |rho: T| lommel(s.k, q, rho, cylinder(m, s.a, s.b, s.k * rho), j_triple(m, q * rho), same);
        s.norm * (inner + at(d) - at(r))
    }

    fn radial_overlaps(&self, p_perp: T) -> (Vec<T>, Vec<T>, Vec<T>) {
        let b = self.bound.iter().map(|s| bound_radial_overlap(s, p_perp)).collect();
        let i = self.interacting.par_iter().map(|s| self.mode_radial_overlap(s, p_perp)).collect();
        let f = self.free.par_iter().map(|s| self.mode_radial_overlap(s, p_perp)).collect();
        (b, i, f)
    }
}

fn auto_max_m<T: Real>(qd: T) -> u32 {
    let qd = qd.to_f64().unwrap_or(0.0);
    if qd == 0.0 {
        return 0;
    }
    (qd + 4.0 * qd.cbrt()).ceil() as u32 + 6
}

/// Number of degenerate partners (+m and -m).
fn multiplicity<T: Real>(m: u32) -> T {
    if m == 0 {
        T::one()
    } else {
        lit(2.0)
    }
}

/// Half the eikonal phase, `(alpha - p_perp^2) L / (4p)` with `alpha = 2 p eps`.
fn half_phase<T: Real>(beam: &BeamState<T>, well: &StringPotential<T>, energy: T) -> T {
    let p = beam.momentum;
    let pt = beam.transverse_momentum;
    (lit::<T>(2.0) * p * energy - pt * pt) * well.length / (lit::<T>(4.0) * p)
}

/// Scattering amplitude `f(theta, phi)` for outgoing angle `theta` and
/// azimuth `phi` relative to the incoming transverse momentum.
pub fn amplitude_f<T: Real>(
    beam: &BeamState<T>,
    well: &StringPotential<T>,
    basis: &Basis<T>,
    theta: T,
    phi: T,
) -> Result<Complex<T>> {
    if basis.is_empty() {
        return Err(Error::invalid("amplitude needs a nonempty state basis"));
    }
    if !(beam.momentum > T::zero()) {
        return Err(Error::invalid("amplitude needs a nonzero momentum"));
    }
    let p = beam.momentum;
    let (bi, ii, fi) = basis.radial_overlaps(beam.transverse_momentum);
    let (bf, if_, ff) = basis.radial_overlaps(p * theta);
    let term = |m: u32, energy: T, gi: T, gf: T| {
        let ang = if m == 0 { T::one() } else { lit::<T>(2.0) * (int::<T>(m as i64) * phi).cos() };
        let (s, c) = (lit::<T>(2.0) * half_phase(beam, well, energy)).sin_cos();
        Complex::new(c - T::one(), s) * (gi * gf * ang)
    };
    let mut with: Vec<Complex<T>> = Vec::with_capacity(bi.len() + ii.len());
    for (k, s) in basis.bound.iter().enumerate() {
        with.push(term(s.m, s.energy, bi[k], bf[k]));
    }
    for (k, s) in basis.interacting.iter().enumerate() {
        with.push(term(s.m, s.energy, ii[k], if_[k]));
    }
    let without: Vec<Complex<T>> =
        basis.free.iter().enumerate().map(|(k, s)| term(s.m, s.energy, fi[k], ff[k])).collect();
    let sum = pairwise_sum_complex(&with) - pairwise_sum_complex(&without);
    // p / (2 pi i) * sum
    let scale = p / (lit::<T>(2.0) * T::PI());
    Ok(Complex::new(sum.im, -sum.re) * scale)
}

/// Fractional Parseval deficit above which [`sigma_total`] refuses the basis.
pub const MAX_PARSEVAL_DEFICIT: f64 = 0.05;

/// Optical-theorem cross section `4 Sum |Q|^2 sin^2((alpha - p_perp^2) L/(4p))`,
/// with the free reference subtracted from the continuum sum.
pub fn sigma_total<T: Real>(
    beam: &BeamState<T>,
    well: &StringPotential<T>,
    basis: &Basis<T>,
) -> Result<CrossSectionBreakdown<T>> {
    if basis.is_empty() {
        return Err(Error::invalid("cross section needs a nonempty state basis"));
    }
    if !(beam.momentum > T::zero()) {
        return Err(Error::invalid("cross section needs a nonzero momentum"));
    }
    let pt = beam.transverse_momentum;
    let four = lit::<T>(4.0);
    let term = |e: T, q2: T| {
        let s = half_phase(beam, well, e).sin();
        four * q2 * s * s
    };
    let (bi, ii, fi) = basis.radial_overlaps(pt);
    let mut per_state = Vec::with_capacity(bi.len() + ii.len());
    let mut bound_terms = Vec::with_capacity(bi.len());
    for (s, g) in basis.bound.iter().zip(&bi) {
        let c = term(s.energy, multiplicity::<T>(s.m) * *g * *g);
        bound_terms.push(c);
        per_state.push(StateContribution { n: s.n, m: s.m, energy: s.energy, contribution: c });
    }
    let mut inter_terms = Vec::with_capacity(ii.len());
    for (s, g) in basis.interacting.iter().zip(&ii) {
        let c = term(s.energy, multiplicity::<T>(s.m) * *g * *g);
        inter_terms.push(c);
        per_state.push(StateContribution { n: s.index, m: s.m, energy: s.energy, contribution: c });
    }
    let free_terms: Vec<T> =
        basis.free.iter().zip(&fi).map(|(s, g)| term(s.energy, multiplicity::<T>(s.m) * *g * *g)).collect();
    let bound = pairwise_sum(&bound_terms);
    let continuum = pairwise_sum(&inter_terms) - pairwise_sum(&free_terms);
    let mut out = CrossSectionBreakdown::new(continuum, bound, T::zero(), per_state);
    if basis.continuum {
        let w: Vec<T> = bi
            .iter()
            .zip(&basis.bound)
            .map(|(g, s)| multiplicity::<T>(s.m) * *g * *g)
            .chain(ii.iter().zip(&basis.interacting).map(|(g, s)| multiplicity::<T>(s.m) * *g * *g))
            .collect();
        let deficit = T::one() - pairwise_sum(&w) / basis.plane_wave_norm();
        out.parseval_deficit = Some(deficit);
        if deficit.abs() > lit(MAX_PARSEVAL_DEFICIT) {
            return Err(Error::Accuracy(format!(
                "continuum discretisation too coarse: Parseval deficit {deficit:e} at p_perp = {pt:e} eV"
            )));
        }
    }
    Ok(out)
}

/// Small-angle m = 0 cross section from the given negative energies:
/// `sigma0 + (2/pi) Sum (|eps|/p) sin^2[(|eps| + p_perp^2/2p) L/2] / (|eps| + p_perp^2/2p)^2`.
pub fn sigma_small_angle_m0_with<T: Real>(
    beam: &BeamState<T>,
    well: &StringPotential<T>,
    levels: &[(u32, T)],
) -> Result<CrossSectionBreakdown<T>> {
    let sigma0 = sigma_zero(beam, well)?;
    let p = beam.momentum;
    let pt = beam.transverse_momentum;
    let shift = pt * pt / (lit::<T>(2.0) * p);
    let half = lit::<T>(0.5);
    let mut per_state = Vec::with_capacity(levels.len());
    for &(n, eps) in levels {
        let depth = eps.abs();
        let x = depth + shift;
        let s = (x * well.length * half).sin();
        let c = T::FRAC_2_PI() * (depth / p) * s * s / (x * x);
        per_state.push(StateContribution { n, m: 0, energy: eps, contribution: c });
    }
    let terms: Vec<T> = per_state.iter().map(|s| s.contribution).collect();
    Ok(CrossSectionBreakdown::new(sigma0, pairwise_sum(&terms), T::zero(), per_state))
}

/// [`sigma_small_angle_m0_with`] using the exact bound energies.
pub fn sigma_small_angle_m0<T: Real>(
    beam: &BeamState<T>,
    well: &StringPotential<T>,
) -> Result<CrossSectionBreakdown<T>> {
    let levels: Vec<(u32, T)> =
        bound_states_exact(well, beam.total_energy, 0)?.into_iter().map(|s| (s.n, s.energy)).collect();
    sigma_small_angle_m0_with(beam, well, &levels)
}

/// Whether the beam is inside the small-angle regime `theta0 < 1/sqrt(pL)`.
pub fn small_angle_regime<T: Real>(beam: &BeamState<T>, well: &StringPotential<T>) -> Result<bool> {
    Ok(beam.entry_angle < effective_scales(beam, well)?.theta_eff)
}
