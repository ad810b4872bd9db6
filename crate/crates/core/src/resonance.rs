//! Breit–Wigner resonance predictions in entry angle and in beam energy.

use crate::error::{Error, Result};
use crate::scalar::{int, lit, Real};
use crate::spectrum::{level_sum, LevelVariant};
use crate::units::{BeamState, StringPotential};

/// Off-resonance continuum cross section `(2/pi) L/p`.
pub fn sigma_zero<T: Real>(beam: &BeamState<T>, well: &StringPotential<T>) -> Result<T> {
    if !(beam.momentum > T::zero()) {
        return Err(Error::invalid("cross section needs a nonzero momentum"));
    }
    Ok(T::FRAC_2_PI() * well.length / beam.momentum)
}

/// Lorentzian line shape of unit height, `(w^2/4)/(offset^2 + w^2/4)`. Even in `offset`.
pub fn lorentzian<T: Real>(offset: T, width: T) -> T {
    let q = width * width / lit(4.0);
    if q == T::zero() {
        return if offset == T::zero() { T::one() } else { T::zero() };
    }
    q / (offset * offset + q)
}

/// Options shared by every resonance formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ResonanceModel {
    pub variant: LevelVariant,
    /// Resonance energy from `2 (V0 + sqrt(V0^2 + theta^2 s / R^2)) / theta^2`
    /// instead of inverting the resonance angle.
    pub paper_literal: bool,
}

/// Resonance position and width for one (n, m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonancePrediction<T> {
    pub n: u32,
    pub m: u32,
    pub theta_res: T,
    pub gamma: T,
    /// Resonance energy at the beam's entry angle; `None` at zero angle.
    pub e_res: Option<T>,
    pub gamma_bar: Option<T>,
    pub sigma_peak_excess: T,
    /// The beam sits exactly at the (n, m) threshold, `theta_res = 0`.
    pub at_threshold: bool,
}

fn no_resonance(n: u32, m: u32, reason: impl Into<String>) -> Error {
    Error::NoResonance { n, m, reason: reason.into() }
}

/// `exp(-sqrt|2 E V0 R^2 - pi^2 n^2|)`.
fn width_factor<T: Real>(well: &StringPotential<T>, energy: T, n: u32) -> T {
    let nn = int::<T>(n as i64);
    let gap = lit::<T>(2.0) * energy * well.depth * well.radius * well.radius - T::PI() * T::PI() * nn * nn;
    (-gap.abs().sqrt()).exp()
}

impl ResonanceModel {
    pub fn new(variant: LevelVariant, paper_literal: bool) -> Self {
        Self { variant, paper_literal }
    }

    fn check(energy_or_angle: f64, what: &str) -> Result<()> {
        if !(energy_or_angle > 0.0) || !energy_or_angle.is_finite() {
            return Err(Error::invalid(format!("{what} must be > 0, got {energy_or_angle}")));
        }
        Ok(())
    }

    /// Resonance angle and whether it sits exactly on the threshold.
    pub fn theta_res_checked<T: Real>(
        &self,
        well: &StringPotential<T>,
        energy: T,
        n: u32,
        m: u32,
    ) -> Result<(T, bool)> {
        Self::check(energy.to_f64().unwrap_or(f64::NAN), "energy")?;
        if n == 0 {
            return Err(Error::invalid("radial index n starts at 1"));
        }
        let s: T = level_sum(self.variant, n, m);
        let r = well.radius;
        let level = s / (energy * energy * r * r);
        let mut arg = level - lit::<T>(2.0) * well.depth / energy;
        // rounding at the threshold itself
        if arg < T::zero() && -arg <= lit::<T>(8.0) * T::epsilon() * level {
            arg = T::zero();
        }
        if arg < T::zero() {
            return Err(no_resonance(n, m, format!("energy {energy} eV is above the level threshold")));
        }
        Ok((arg.sqrt(), arg == T::zero()))
    }

    pub fn theta_res<T: Real>(&self, well: &StringPotential<T>, energy: T, n: u32, m: u32) -> Result<T> {
        self.theta_res_checked(well, energy, n, m).map(|t| t.0)
    }

    pub fn gamma_angle<T: Real>(&self, well: &StringPotential<T>, energy: T, n: u32, m: u32) -> Result<T> {
        Ok(self.theta_res(well, energy, n, m)? * width_factor(well, energy, n))
    }

    /// Breit–Wigner cross section at the beam's entry angle.
    pub fn sigma_bw_angle<T: Real>(&self, beam: &BeamState<T>, well: &StringPotential<T>, n: u32, m: u32) -> Result<T> {
        let base = sigma_zero(beam, well)?;
        Ok(base + self.bw_angle_excess(beam, well, n, m)?)
    }

    /// Resonant part of [`Self::sigma_bw_angle`].
    pub fn bw_angle_excess<T: Real>(
        &self,
        beam: &BeamState<T>,
        well: &StringPotential<T>,
        n: u32,
        m: u32,
    ) -> Result<T> {
        let peak = sigma_zero(beam, well)?;
        let theta = self.theta_res(well, beam.total_energy, n, m)?;
        let gamma = theta * width_factor(well, beam.total_energy, n);
        Ok(peak * lorentzian(beam.entry_angle - theta, gamma))
    }

    /// Beam energy at which (n, m) resonates for entry angle `theta0`.
    pub fn e_res<T: Real>(&self, well: &StringPotential<T>, theta0: T, n: u32, m: u32) -> Result<T> {
        Self::check(theta0.to_f64().unwrap_or(f64::NAN), "entry angle")?;
        if n == 0 {
            return Err(Error::invalid("radial index n starts at 1"));
        }
        let s: T = level_sum(self.variant, n, m);
        let v = well.depth;
        let c = theta0 * theta0 * s / (well.radius * well.radius);
        let root = (v * v + c).sqrt();
        if self.paper_literal {
            let two = lit::<T>(2.0);
            return Ok((two * v + two * root) / (theta0 * theta0));
        }
        // positive root of theta0^2 E^2 + 2 V0 E - s/R^2 = 0, written without cancellation
        Ok(s / (well.radius * well.radius) / (v + root))
    }

    pub fn gamma_energy<T: Real>(&self, well: &StringPotential<T>, e_res: T, n: u32) -> Result<T> {
        Self::check(e_res.to_f64().unwrap_or(f64::NAN), "resonance energy")?;
        Ok(e_res * width_factor(well, e_res, n))
    }

    /// Resonant part of the energy-scan cross section at the beam energy.
    pub fn bw_energy_excess<T: Real>(
        &self,
        beam: &BeamState<T>,
        well: &StringPotential<T>,
        n: u32,
        m: u32,
    ) -> Result<T> {
        if !(beam.entry_angle > T::zero()) {
            return Err(Error::invalid("energy scans need a nonzero entry angle"));
        }
        let peak = sigma_zero(beam, well)?;
        let e_res = self.e_res(well, beam.entry_angle, n, m)?;
        let width = self.gamma_energy(well, e_res, n)?;
        Ok(peak * lorentzian(beam.total_energy - e_res, width))
    }

    pub fn sigma_bw_energy<T: Real>(
        &self,
        beam: &BeamState<T>,
        well: &StringPotential<T>,
        n: u32,
        m: u32,
    ) -> Result<T> {
        Ok(sigma_zero(beam, well)? + self.bw_energy_excess(beam, well, n, m)?)
    }

    pub fn predict<T: Real>(
        &self,
        beam: &BeamState<T>,
        well: &StringPotential<T>,
        n: u32,
        m: u32,
    ) -> Result<ResonancePrediction<T>> {
        let (theta_res, at_threshold) = self.theta_res_checked(well, beam.total_energy, n, m)?;
        let gamma = theta_res * width_factor(well, beam.total_energy, n);
        let (e_res, gamma_bar) = if beam.entry_angle > T::zero() {
            let e = self.e_res(well, beam.entry_angle, n, m)?;
            (Some(e), Some(self.gamma_energy(well, e, n)?))
        } else {
            (None, None)
        };
        Ok(ResonancePrediction {
            n,
            m,
            theta_res,
            gamma,
            e_res,
            gamma_bar,
            sigma_peak_excess: sigma_zero(beam, well)?,
            at_threshold,
        })
    }
}

/// Resonance angle `sqrt((pi^2 n^2 + m^2)/(E^2 R^2) - 2 V0/E)`.
pub fn theta_res<T: Real>(well: &StringPotential<T>, energy: T, n: u32, m: u32) -> Result<T> {
    ResonanceModel::default().theta_res(well, energy, n, m)
}

/// Angular width `theta_res exp(-sqrt|2 E V0 R^2 - pi^2 n^2|)`.
pub fn gamma_angle<T: Real>(well: &StringPotential<T>, energy: T, n: u32, m: u32) -> Result<T> {
    ResonanceModel::default().gamma_angle(well, energy, n, m)
}

pub fn sigma_bw_angle<T: Real>(beam: &BeamState<T>, well: &StringPotential<T>, n: u32, m: u32) -> Result<T> {
    ResonanceModel::default().sigma_bw_angle(beam, well, n, m)
}

/// Resonance energy for entry angle `theta0`; inverse of [`theta_res`].
pub fn e_res<T: Real>(well: &StringPotential<T>, theta0: T, n: u32, m: u32) -> Result<T> {
    ResonanceModel::default().e_res(well, theta0, n, m)
}

/// Energy width `E_res exp(-sqrt|2 E_res V0 R^2 - pi^2 n^2|)`.
pub fn gamma_energy<T: Real>(well: &StringPotential<T>, e_res: T, n: u32) -> Result<T> {
    ResonanceModel::default().gamma_energy(well, e_res, n)
}

pub fn sigma_bw_energy<T: Real>(beam: &BeamState<T>, well: &StringPotential<T>, n: u32, m: u32) -> Result<T> {
    ResonanceModel::default().sigma_bw_energy(beam, well, n, m)
}
