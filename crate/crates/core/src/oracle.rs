//! Independent numerical checks: a finite-volume radial eigensolver,
//! exact partial-wave phase shifts with resonance extraction, and
//! completeness audits of the scattering basis.

use crate::error::{Error, Result};
use crate::scalar::{int, lit, Real};
use crate::scattering::Basis;
use crate::special::{j_triple, y_triple};
use crate::units::StringPotential;

/// Uniform radial mesh on `[0, rho_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMesh<T> {
    pub rho_max: T,
    pub points: usize,
    pub spacing: T,
}

/// Smallest accepted mesh.
pub const MIN_MESH_POINTS: usize = 10_000;
/// Smallest accepted extent in well radii.
pub const MIN_MESH_RADII: f64 = 20.0;
/// Largest relative eigenvalue change tolerated under mesh doubling.
pub const DRIFT_TOLERANCE: f64 = 1e-3;

impl<T: Real> RadialMesh<T> {
    pub fn new(rho_max: T, points: usize) -> Result<Self> {
        if points < MIN_MESH_POINTS {
            return Err(Error::invalid(format!("mesh needs at least {MIN_MESH_POINTS} points, got {points}")));
        }
        if !(rho_max > T::zero()) || !rho_max.is_finite() {
            return Err(Error::invalid(format!("mesh extent must be positive, got {rho_max}")));
        }
        Ok(Self { rho_max, points, spacing: rho_max / int(points as i64) })
    }

    /// Mesh reaching `radii` well radii.
    pub fn for_well(well: &StringPotential<T>, radii: T, points: usize) -> Result<Self> {
        Self::new(radii * well.radius, points)
    }

    fn check(&self, well: &StringPotential<T>) -> Result<()> {
        if self.rho_max < lit::<T>(MIN_MESH_RADII) * well.radius * (T::one() - lit(1e-12)) {
            return Err(Error::invalid(format!("mesh extent {} is below {MIN_MESH_RADII} well radii", self.rho_max)));
        }
        Ok(())
    }
}

/// Symmetric tridiagonal matrix of the cell-centred finite-volume radial operator.
///
/// Cell `i` is centred at `(i - 1/2) h`; the well enters through the area
/// fraction of each annular cell inside `R`; the edge is Dirichlet.
fn radial_operator<T: Real>(well: &StringPotential<T>, energy: T, m: u32, n: usize, h: T) -> (Vec<T>, Vec<T>) {
    let half = lit::<T>(0.5);
    let two_e = lit::<T>(2.0) * energy;
    let mm = int::<T>(m as i64 * m as i64);
    let r = well.radius;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        let rho = (int::<T>(i as i64) + half) * h;
        let lo = rho - half * h;
        let hi = rho + half * h;
        let inside = if hi <= r {
            T::one()
        } else if lo >= r {
            T::zero()
        } else {
            (r * r - lo * lo) / (hi * hi - lo * lo)
        };
        diag.push((lo + hi) / (two_e * h * h * rho) + mm / (two_e * rho * rho) - well.depth * inside);
        if i + 1 < n {
            let next = rho + h;
            off.push(-hi / (two_e * h * h * (rho * next).sqrt()));
        }
    }
    (diag, off)
}

/// Number of eigenvalues below `x` (Sturm sequence).
fn count_below<T: Real>(diag: &[T], off: &[T], x: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut d = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            d = diag[i] - x - off[i - 1] * off[i - 1] / d;
        }
        if d == T::zero() {
            d = -tiny;
        }
        if d < T::zero() {
            count += 1;
        }
    }
    count
}

/// Eigenvalues below `ceiling`, ascending, by Sturm bisection.
fn eigenvalues_below<T: Real>(diag: &[T], off: &[T], ceiling: T) -> Vec<T> {
    let total = count_below(diag, off, ceiling);
    let mut lower = T::infinity();
    for i in 0..diag.len() {
        let left = if i > 0 { off[i - 1].abs() } else { T::zero() };
        let right = if i < off.len() { off[i].abs() } else { T::zero() };
        lower = lower.min(diag[i] - left - right);
    }
    let mut out = Vec::with_capacity(total);
    for k in 0..total {
        let (mut lo, mut hi) = (lower, ceiling);
        for _ in 0..200 {
            let mid = lit::<T>(0.5) * (lo + hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if count_below(diag, off, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(lit::<T>(0.5) * (lo + hi));
    }
    out
}

fn fd_levels<T: Real>(well: &StringPotential<T>, energy: T, m: u32, n: usize, rho_max: T) -> Vec<T> {
    let h = rho_max / int(n as i64);
    let (diag, off) = radial_operator(well, energy, m, n, h);
    let ceiling = -lit::<T>(1e-6) * well.depth;
    eigenvalues_below(&diag, &off, ceiling)
}

/// Negative eigenvalues `(n, eps)` of the discretised radial operator, with a
/// doubled-mesh drift check at [`DRIFT_TOLERANCE`].
pub fn fd_bound_states<T: Real>(
    well: &StringPotential<T>,
    energy: T,
    m: u32,
    mesh: &RadialMesh<T>,
) -> Result<Vec<(u32, T)>> {
    fd_bound_states_with(well, energy, m, mesh, lit(DRIFT_TOLERANCE))
}

pub fn fd_bound_states_with<T: Real>(
    well: &StringPotential<T>,
    energy: T,
    m: u32,
    mesh: &RadialMesh<T>,
    drift_tolerance: T,
) -> Result<Vec<(u32, T)>> {
    if !(energy > T::zero()) {
        return Err(Error::invalid("effective mass E must be > 0"));
    }
    mesh.check(well)?;
    let coarse = fd_levels(well, energy, m, mesh.points, mesh.rho_max);
    let fine = fd_levels(well, energy, m, 2 * mesh.points, mesh.rho_max);
    if coarse.len() != fine.len() {
        return Err(Error::Accuracy(format!(
            "m = {m}: {} bound levels on {} points but {} on {}",
            coarse.len(),
            mesh.points,
            fine.len(),
            2 * mesh.points
        )));
    }
    for (a, b) in coarse.iter().zip(&fine) {
        let drift = ((*a - *b) / *b).abs();
        if drift > drift_tolerance {
            return Err(Error::Accuracy(format!(
                "m = {m}: level {a} eV drifts by {drift:e} under mesh doubling (tolerance {drift_tolerance:e})"
            )));
        }
    }
    Ok(coarse.into_iter().enumerate().map(|(i, e)| (i as u32 + 1, e)).collect())
}

/// Partial-wave phase shift `delta_m(eps)` in `[0, pi)`.
///
/// Interior `J_m(k_in rho)` is matched at `R` to `cos(delta) J_m(k rho) - sin(delta) Y_m(k rho)`.
pub fn phase_shift<T: Real>(well: &StringPotential<T>, energy: T, m: u32, eps: T) -> Result<T> {
    if !(eps > T::zero()) {
        return Err(Error::invalid(format!("phase shift needs a positive transverse energy, got {eps}")));
    }
    if !(energy > T::zero()) {
        return Err(Error::invalid("effective mass E must be > 0"));
    }
    let two_e = lit::<T>(2.0) * energy;
    let k = (two_e * eps).sqrt();
    let k_in = (two_e * (eps + well.depth)).sqrt();
    let r = well.radius;
    let half = lit::<T>(0.5);
    let (jm1, jm, jp1) = j_triple(m, k * r);
    let (ym1, ym, yp1) = y_triple(m, k * r);
    let (im1, im, ip1) = j_triple(m, k_in * r);
    let (dj, dy, di) = (half * (jm1 - jp1), half * (ym1 - yp1), half * (im1 - ip1));
    let a = im * k * dy - k_in * di * ym;
    let b = (k_in * di) * jm - (k * dj) * im;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Accuracy(format!("phase shift overflow at m = {m}, eps = {eps}")));
    }
    let mut delta = (-b).atan2(a);
    if delta < T::zero() {
        delta += T::PI();
    }
    if delta >= T::PI() {
        delta -= T::PI();
    }
    Ok(delta + T::zero())
}

/// Phase shift of one partial wave sampled on an increasing energy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftCurve<T> {
    pub m: u32,
    pub energies: Vec<T>,
    /// Unwrapped phase shift.
    pub phases: Vec<T>,
    /// d(delta)/d(eps) in rad/eV.
    pub slopes: Vec<T>,
}

impl<T: Real> PhaseShiftCurve<T> {
    /// Builds the curve from raw phases (any branch), unwrapping jumps larger than pi/2.
    pub fn from_phases(m: u32, energies: Vec<T>, raw: Vec<T>) -> Result<Self> {
        if energies.len() != raw.len() || energies.len() < 3 {
            return Err(Error::invalid("phase curve needs at least three (energy, phase) pairs"));
        }
        if energies.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("phase curve energies must be strictly increasing"));
        }
        let pi = T::PI();
        let half_pi = lit::<T>(0.5) * pi;
        let mut phases = Vec::with_capacity(raw.len());
        let mut shift = T::zero();
        phases.push(raw[0]);
        for i in 1..raw.len() {
            let mut v = raw[i] + shift;
            while v - phases[i - 1] > half_pi {
                shift -= pi;
                v -= pi;
            }
            while phases[i - 1] - v > half_pi {
                shift += pi;
                v += pi;
            }
            phases.push(v);
        }
        let slopes = derivative(&energies, &phases);
        Ok(Self { m, energies, phases, slopes })
    }

    /// Exact phase shifts of `well` on `energies`.
    pub fn scan(well: &StringPotential<T>, energy: T, m: u32, energies: Vec<T>) -> Result<Self> {
        let raw = energies.iter().map(|&e| phase_shift(well, energy, m, e)).collect::<Result<Vec<T>>>()?;
        Self::from_phases(m, energies, raw)
    }

    /// Uniform grid on `(0, eps_max]` with `per_ev` points per eV.
    pub fn scan_uniform(well: &StringPotential<T>, energy: T, m: u32, eps_max: T, per_ev: usize) -> Result<Self> {
        let n = (eps_max * int(per_ev as i64)).ceil().to_usize().unwrap_or(0).max(3);
        let step = eps_max / int(n as i64);
        let grid = (1..=n).map(|i| step * int(i as i64)).collect();
        Self::scan(well, energy, m, grid)
    }
}

/// Second-order finite differences on a nonuniform grid, one-sided at the ends.
fn derivative<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let mut d = Vec::with_capacity(n);
    d.push((y[1] - y[0]) / (x[1] - x[0]));
    for i in 1..n - 1 {
        let hm = x[i] - x[i - 1];
        let hp = x[i + 1] - x[i];
        d.push((hm * hm * y[i + 1] - hp * hp * y[i - 1] + (hp * hp - hm * hm) * y[i]) / (hm * hp * (hm + hp)));
    }
    d.push((y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]));
    d
}

/// Required sampling density near a candidate peak, points per eV.
pub const MIN_POINTS_PER_EV: f64 = 200.0;

/// Resonance energy and width `2 / max(d delta/d eps)` from the steepest
/// interior rise of the phase; `None` when no interior maximum exceeds twice
/// the background slope taken at the two grid ends.
pub fn resonance_from_phase<T: Real>(curve: &PhaseShiftCurve<T>) -> Result<Option<(T, T)>> {
    let s = &curve.slopes;
    let e = &curve.energies;
    let n = s.len();
    let background = lit::<T>(0.5) * (s[0].abs() + s[n - 1].abs());
    let mut best: Option<usize> = None;
    for i in 1..n - 1 {
        if s[i] > s[i - 1] && s[i] >= s[i + 1] && best.is_none_or(|b| s[i] > s[b]) {
            best = Some(i);
        }
    }
    let Some(i) = best else { return Ok(None) };
    if !(s[i] > lit::<T>(2.0) * background) {
        return Ok(None);
    }
    let spacing = lit::<T>(0.5) * (e[i + 1] - e[i - 1]);
    let width_estimate = lit::<T>(2.0) / s[i];
    if spacing > lit::<T>(1.0 + 1e-9) / lit(MIN_POINTS_PER_EV) || width_estimate < lit::<T>(10.0) * spacing {
        return Err(Error::Accuracy(format!(
            "phase curve unresolved near {} eV: spacing {spacing:e} eV, width {width_estimate:e} eV",
            e[i]
        )));
    }
    // parabola through the three samples around the maximum
    let (x0, x1, x2) = (e[i - 1], e[i], e[i + 1]);
    let (y0, y1, y2) = (s[i - 1], s[i], s[i + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    let (peak_x, peak_y) = if curv < T::zero() {
        let xv = lit::<T>(0.5) * (x0 + x1) - d01 / (lit::<T>(2.0) * curv);
        let yv = y1 + (xv - x1) * (d01 + curv * (xv - x0));
        (xv, yv.max(y1))
    } else {
        (x1, y1)
    };
    Ok(Some((peak_x, lit::<T>(2.0) / peak_y)))
}

/// `(delta(eps_lo) - delta(eps_hi)) / pi` on a logarithmic grid; in 2D this
/// approximates the number of bound states of the partial wave.
pub fn levinson_ratio<T: Real>(
    well: &StringPotential<T>,
    energy: T,
    m: u32,
    eps_lo: T,
    eps_hi: T,
    points: usize,
) -> Result<T> {
    if !(eps_lo > T::zero() && eps_hi > eps_lo) || points < 3 {
        return Err(Error::invalid("levinson scan needs 0 < eps_lo < eps_hi and at least 3 points"));
    }
    let (a, b) = (eps_lo.ln(), eps_hi.ln());
    let step = (b - a) / int(points as i64 - 1);
    let grid: Vec<T> = (0..points).map(|i| (a + step * int(i as i64)).exp()).collect();
    let curve = PhaseShiftCurve::scan(well, energy, m, grid)?;
    Ok((curve.phases[0] - curve.phases[points - 1]) / T::PI())
}

/// Completeness deficit of the bound + interacting basis at `p_perp`.
pub fn parseval_audit<T: Real>(basis: &Basis<T>, p_perp: T) -> T {
    basis.parseval_deficit(p_perp)
}
