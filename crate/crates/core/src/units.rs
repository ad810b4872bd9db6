//! Natural units, beam kinematics and the effective scales of a long string.
//!
//! Internally everything is in natural units (hbar = c = 1): energies and
//! momenta in eV, lengths in 1/eV. SI values appear only at the I/O boundary.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Conversion constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    /// hbar * c in eV m.
    pub hbar_c: T,
    /// Electron rest energy in eV.
    pub electron_mass: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn standard() -> Self {
        Self { hbar_c: lit(1.973_269_804e-7), electron_mass: lit(5.109_99e5) }
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::standard()
    }
}

/// Length in meters to natural units (1/eV).
pub fn to_natural_length<T: Real>(length_si: T) -> Result<T> {
    if !(length_si >= T::zero()) {
        return Err(Error::invalid(format!("length must be >= 0, got {length_si}")));
    }
    Ok(length_si / PhysicalConstants::<T>::standard().hbar_c)
}

/// Length in natural units back to meters.
pub fn to_si_length<T: Real>(length_natural: T) -> T {
    length_natural * PhysicalConstants::<T>::standard().hbar_c
}

/// A fast particle entering the string at a small angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamState<T> {
    pub total_energy: T,
    pub mass: T,
    pub momentum: T,
    pub entry_angle: T,
    pub transverse_momentum: T,
}

impl<T: Real> BeamState<T> {
    /// Builds a beam with exact kinematics, p = sqrt(E^2 - m^2).
    pub fn new(total_energy: T, mass: T, entry_angle: T) -> Result<Self> {
        if !(mass >= T::zero()) || !total_energy.is_finite() {
            return Err(Error::invalid(format!("mass must be >= 0, got {mass}")));
        }
        if !(total_energy >= mass) {
            return Err(Error::invalid(format!("total energy {total_energy} eV is below the rest mass {mass} eV")));
        }
        if !(entry_angle >= T::zero()) || !entry_angle.is_finite() {
            return Err(Error::invalid(format!("entry angle must be >= 0, got {entry_angle}")));
        }
        // (E - m)(E + m) keeps the low-velocity end accurate.
        let momentum = ((total_energy - mass) * (total_energy + mass)).sqrt();
        Ok(Self { total_energy, mass, momentum, entry_angle, transverse_momentum: momentum * entry_angle })
    }

    /// Ultrarelativistic beam: p := E, the mass only carried along for reporting.
    pub fn ultrarelativistic(total_energy: T, mass: T, entry_angle: T) -> Result<Self> {
        let mut beam = Self::new(total_energy, mass, entry_angle)?;
        beam.momentum = total_energy;
        beam.transverse_momentum = total_energy * entry_angle;
        Ok(beam)
    }

    /// Same particle and energy, different entry angle.
    pub fn with_entry_angle(&self, entry_angle: T) -> Self {
        Self { entry_angle, transverse_momentum: self.momentum * entry_angle, ..*self }
    }

    /// Transverse kinetic energy p_perp^2 / 2E.
    pub fn transverse_energy(&self) -> T {
        self.transverse_momentum * self.transverse_momentum / (lit::<T>(2.0) * self.total_energy)
    }
}

/// `beam_from` in operation form.
pub fn beam_from<T: Real>(total_energy: T, mass: T, entry_angle: T) -> Result<BeamState<T>> {
    BeamState::new(total_energy, mass, entry_angle)
}

/// Cylindrical square well of depth `depth`, radius `radius` and length `length`.
///
/// The depth is stored as a positive number; the potential inside is `-depth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StringPotential<T> {
    pub depth: T,
    pub radius: T,
    pub length: T,
}

impl<T: Real> StringPotential<T> {
    /// Validates `depth >= 0`, `radius > 0`, `length >= 0`.
    ///
    /// The long-string condition `length > 2 radius` is a regime statement and
    /// is reported by [`regime_check`] rather than rejected here, so that the
    /// zero-depth and zero-length limits stay representable.
    pub fn new(depth: T, radius: T, length: T) -> Result<Self> {
        if !(depth >= T::zero()) || !depth.is_finite() {
            return Err(Error::invalid(format!("well depth must be >= 0, got {depth}")));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::invalid(format!("well radius must be > 0, got {radius}")));
        }
        if !(length >= T::zero()) || !length.is_finite() {
            return Err(Error::invalid(format!("string length must be >= 0, got {length}")));
        }
        Ok(Self { depth, radius, length })
    }

    /// Dimensionless well strength x0 = sqrt(2 E V0) R for effective mass `energy`.
    pub fn strength(&self, energy: T) -> T {
        (lit::<T>(2.0) * energy * self.depth).sqrt() * self.radius
    }

    pub fn with_depth(&self, depth: T) -> Self {
        Self { depth, ..*self }
    }

    pub fn with_length(&self, length: T) -> Self {
        Self { length, ..*self }
    }
}

/// Effective impact parameter, angle and partial-wave count of a long string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveScales<T> {
    pub rho_eff: T,
    pub theta_eff: T,
    /// Largest azimuthal number with m / p_perp <= rho_eff.
    pub m_max: u64,
    pub q_parallel: T,
}

pub fn effective_scales<T: Real>(beam: &BeamState<T>, well: &StringPotential<T>) -> Result<EffectiveScales<T>> {
    let p = beam.momentum;
    if !(p > T::zero()) {
        return Err(Error::invalid("effective scales need a nonzero momentum"));
    }
    if !(well.length > T::zero()) {
        return Err(Error::invalid("effective scales need a nonzero string length"));
    }
    let rho_eff = (well.length / p).sqrt();
    let count = (beam.transverse_momentum * rho_eff).floor();
    Ok(EffectiveScales {
        rho_eff,
        theta_eff: T::one() / (p * rho_eff),
        m_max: count.to_u64().unwrap_or(0),
        q_parallel: T::one() / (p * well.radius * well.radius),
    })
}

/// One regime condition with its measured value and threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeFlag<T> {
    pub value: T,
    pub threshold: T,
    pub pass: bool,
}

/// Dimensionless numbers of the fast-particle / long-string regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport<T> {
    pub p_l: T,
    pub p_r: T,
    pub theta_p_r: T,
    /// pL / pR > 10.
    pub long_string: RegimeFlag<T>,
    /// pR > 10.
    pub fast_particle: RegimeFlag<T>,
    /// theta0 pR < 1 (slow transverse motion).
    pub slow_transverse: RegimeFlag<T>,
}

impl<T: Real> RegimeReport<T> {
    pub fn all_pass(&self) -> bool {
        self.long_string.pass && self.fast_particle.pass && self.slow_transverse.pass
    }
}

pub fn regime_check<T: Real>(beam: &BeamState<T>, well: &StringPotential<T>) -> RegimeReport<T> {
    let p = beam.momentum;
    let p_l = p * well.length;
    let p_r = p * well.radius;
    let theta_p_r = beam.entry_angle * p_r;
    let ten = lit::<T>(10.0);
    let ratio = well.length / well.radius;
    RegimeReport {
        p_l,
        p_r,
        theta_p_r,
        long_string: RegimeFlag { value: ratio, threshold: ten, pass: ratio > ten },
        fast_particle: RegimeFlag { value: p_r, threshold: ten, pass: p_r > ten },
        slow_transverse: RegimeFlag { value: theta_p_r, threshold: T::one(), pass: theta_p_r < T::one() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HBARC: f64 = 1.973_269_804e-7;

    fn si_well() -> StringPotential<f64> {
        StringPotential::new(23.0, 1.0 / 9.7e3, 1.4e-6 / HBARC).unwrap()
    }

    #[test]
    fn natural_length_examples() {
        let l = to_natural_length(1.4e-6_f64).unwrap();
        assert!((l - 7.0948).abs() < 5e-5, "{l}");
        assert_eq!(to_natural_length(0.0_f64).unwrap(), 0.0);
        assert!((to_natural_length(HBARC).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(to_natural_length(-1.0_f64), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn beam_examples() {
        let b = beam_from(15e6_f64, 5.10999e5, 0.0).unwrap();
        // sqrt(15e6^2 - 510999^2) by hand: 1.4991293e7
        assert!((b.momentum / 1.499129e7 - 1.0).abs() < 1e-6);
        let b = beam_from(3e6, 0.0, 0.01).unwrap();
        assert_eq!(b.momentum, 3e6);
        assert_eq!(b.transverse_momentum, 3e4);
        let b = beam_from(5.10999e5, 5.10999e5, 0.0).unwrap();
        assert_eq!(b.momentum, 0.0);
        assert!(beam_from(1.0, 2.0, 0.0).is_err());
        assert!(beam_from(3.0, 2.0, -0.1).is_err());
    }

    #[test]
    fn effective_scales_si() {
        let well = si_well();
        let beam = BeamState::ultrarelativistic(15e6, 5.10999e5, 0.0).unwrap();
        let s = effective_scales(&beam, &well).unwrap();
        assert!((s.theta_eff - 9.70e-5).abs() < 0.01e-5, "{}", s.theta_eff);
        assert_eq!(s.m_max, 0);
        let s = effective_scales(&beam.with_entry_angle(1.745e-3), &well).unwrap();
        assert_eq!(s.m_max, 18);
        let rest = BeamState::new(1.0, 1.0, 0.0).unwrap();
        assert!(effective_scales(&rest, &well).is_err());
    }

    #[test]
    fn regime_examples() {
        let well = si_well();
        let beam = BeamState::ultrarelativistic(15e6, 5.10999e5, 0.0).unwrap();
        let r = regime_check(&beam, &well);
        assert!((r.p_l / 1.064e8 - 1.0).abs() < 1e-3);
        assert!((r.p_r - 1546.4).abs() < 0.1);
        assert!(r.all_pass());
        assert_eq!(r.theta_p_r, 0.0);
        let slow = BeamState::new(5.0 * 9.7e3, 0.0, 0.0).unwrap();
        let r = regime_check(&slow, &well);
        assert!((r.p_r - 5.0).abs() < 1e-12);
        assert!(!r.fast_particle.pass);
    }
}
