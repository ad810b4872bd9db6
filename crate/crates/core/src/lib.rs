//! Transverse levels, resonances and cross sections of a fast particle
//! crossing a long cylindrical string potential.
//!
//! A particle entering a cylindrical square well (depth `V0`, radius `R`,
//! length `L`) at a small angle sees a slow two-dimensional transverse
//! problem. This crate computes its bound and quasi-bound spectrum, the
//! optical-theorem cross section built from the transverse eigenstates, the
//! Breit–Wigner resonance predictions in angle and energy, and independent
//! numerical oracles (finite differences, partial-wave phase shifts,
//! completeness audits) that check them.
//!
//! The numerics are generic over [`Real`] (`f32`/`f64`); the aliases below
//! fix the common `f64` instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod resonance;
pub mod scalar;
pub mod scattering;
pub mod scenario;
pub mod special;
pub mod spectrum;
pub mod sum;
pub mod units;

pub use error::{Error, Result};
pub use scalar::Real;

pub type BeamState = units::BeamState<f64>;
pub type StringPotential = units::StringPotential<f64>;
pub type EffectiveScales = units::EffectiveScales<f64>;
pub type RegimeReport = units::RegimeReport<f64>;
pub type TransverseState = spectrum::TransverseState<f64>;
pub type SpectrumConfig = spectrum::SpectrumConfig<f64>;
pub type ResonancePrediction = resonance::ResonancePrediction<f64>;
pub type CrossSectionBreakdown = scattering::CrossSectionBreakdown<f64>;
pub type ScatteringBasis = scattering::Basis<f64>;
pub type BasisConfig = scattering::BasisConfig<f64>;
pub type RadialMesh = oracle::RadialMesh<f64>;
pub type PhaseShiftCurve = oracle::PhaseShiftCurve<f64>;

pub type BeamStateF32 = units::BeamState<f32>;
pub type StringPotentialF32 = units::StringPotential<f32>;

/// Crate version, written into CSV provenance headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
