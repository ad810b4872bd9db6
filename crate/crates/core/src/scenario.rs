//! Scenario presets, the line-based config format, scan drivers and CSV output.
//!
//! Config files are `section.key = value` lines; `#` starts a comment. Units
//! at this boundary are SI-flavoured: energies in eV, lengths in meters,
//! angles in degrees. Unset keys keep the Si preset values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::resonance::{sigma_zero, ResonanceModel};
use crate::scattering::{sigma_small_angle_m0_with, CrossSectionBreakdown};
use crate::spectrum::{m0_bound_energies, LevelVariant};
use crate::units::{effective_scales, to_natural_length, to_si_length, BeamState, StringPotential};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    Angle,
    Energy,
}

impl ScanKind {
    fn as_str(self) -> &'static str {
        match self {
            ScanKind::Angle => "angle",
            ScanKind::Energy => "energy",
        }
    }
}

/// Which (n, m) Breit–Wigner terms a scan includes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResonanceSelection {
    /// Every m >= 1 resonance whose position falls inside the scan window.
    Auto,
    List(Vec<(u32, u32)>),
}

/// Scan grid. Angles in radians, energies in eV.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub kind: ScanKind,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub resonances: ResonanceSelection,
}

impl ScanSpec {
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.max } else { self.min + (self.max - self.min) * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelFlags {
    /// Use p := E instead of exact kinematics.
    pub ultrarelativistic: bool,
    /// Resonance energy from the closed form `2 (V0 + sqrt(V0^2 + theta^2 s / R^2)) / theta^2`.
    pub paper_literal: bool,
    pub level_variant: LevelVariant,
}

impl ModelFlags {
    pub fn resonance_model(&self) -> ResonanceModel {
        ResonanceModel::new(self.level_variant, self.paper_literal)
    }

    pub fn describe(&self) -> String {
        format!(
            "ultrarelativistic={} paper_literal={} level_variant={}",
            self.ultrarelativistic, self.paper_literal, self.level_variant
        )
    }
}

/// A complete, validated calculation setup.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Total beam energy in eV.
    pub energy: f64,
    pub mass: f64,
    /// Entry angle in radians (fixed angle of energy scans).
    pub theta0: f64,
    pub well: StringPotential<f64>,
    pub scan: ScanSpec,
    pub flags: ModelFlags,
}

const ELECTRON_MASS: f64 = 5.109_99e5;

/// Si <111>, 15 MeV electrons, 1.4 um crystal; angle scan 0 to 0.2 degrees.
pub fn preset_si111() -> Scenario {
    Scenario {
        name: "si111-fig2".into(),
        energy: 15.0e6,
        mass: ELECTRON_MASS,
        theta0: 0.0,
        well: si_well(),
        scan: ScanSpec {
            kind: ScanKind::Angle,
            min: 0.0,
            max: 0.2_f64.to_radians(),
            points: 2001,
            resonances: ResonanceSelection::List(vec![(1, 1)]),
        },
        flags: ModelFlags::default(),
    }
}

/// Same crystal, entry angle 0.1 degrees, energy scan 5 to 30 MeV.
pub fn preset_si111_energy() -> Scenario {
    Scenario {
        name: "si111-energy".into(),
        theta0: 0.1_f64.to_radians(),
        scan: ScanSpec {
            kind: ScanKind::Energy,
            min: 5.0e6,
            max: 30.0e6,
            points: 2001,
            resonances: ResonanceSelection::Auto,
        },
        ..preset_si111()
    }
}

fn si_well() -> StringPotential<f64> {
    let length = to_natural_length(1.4e-6).expect("positive length");
    StringPotential::new(23.0, 1.0 / 9.7e3, length).expect("valid Si well")
}

const KEYS: [&str; 15] = [
    "beam.energy",
    "beam.mass",
    "beam.theta0",
    "model.level_variant",
    "model.paper_literal",
    "model.ultrarelativistic",
    "scan.kind",
    "scan.max",
    "scan.min",
    "scan.points",
    "scan.resonances",
    "scenario.name",
    "well.depth",
    "well.length",
    "well.radius",
];

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| config_err(line, format!("{key}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(config_err(line, format!("{key}: value must be finite")));
    }
    Ok(x)
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(config_err(line, format!("{key}: expected true or false, got '{v}'"))),
    }
}

fn parse_resonances(line: usize, v: &str) -> Result<ResonanceSelection> {
    if v == "auto" {
        return Ok(ResonanceSelection::Auto);
    }
    let mut list = Vec::new();
    for item in v.split(',') {
        let item = item.trim();
        let (n, m) = item
            .split_once(':')
            .ok_or_else(|| config_err(line, format!("scan.resonances: expected n:m, got '{item}'")))?;
        let n: u32 = n.trim().parse().map_err(|_| config_err(line, format!("scan.resonances: bad n in '{item}'")))?;
        let m: u32 = m.trim().parse().map_err(|_| config_err(line, format!("scan.resonances: bad m in '{item}'")))?;
        if n == 0 {
            return Err(config_err(line, "scan.resonances: n starts at 1"));
        }
        list.push((n, m));
    }
    Ok(ResonanceSelection::List(list))
}

fn format_resonances(sel: &ResonanceSelection) -> String {
    match sel {
        ResonanceSelection::Auto => "auto".into(),
        ResonanceSelection::List(v) => v.iter().map(|(n, m)| format!("{n}:{m}")).collect::<Vec<_>>().join(","),
    }
}

impl Scenario {
    /// Parses a config text on top of the Si preset.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("expected 'section.key = value', got '{body}'")))?;
            let key = key.trim();
            let Some(known) = KEYS.iter().find(|k| **k == key) else {
                return Err(config_err(line, format!("unknown key '{key}'")));
            };
            let value = value.trim().trim_matches('"').to_string();
            if entries.insert(known, (line, value)).is_some() {
                return Err(config_err(line, format!("duplicate key '{key}'")));
            }
        }
        let base = match entries.get("scan.kind").map(|(_, v)| v.as_str()) {
            Some("energy") => preset_si111_energy(),
            _ => preset_si111(),
        };
        let mut s = base;
        let mut depth = s.well.depth;
        let mut radius = s.well.radius;
        let mut length = s.well.length;
        let mut min = None;
        let mut max = None;
        for (key, (line, v)) in &entries {
            let line = *line;
            match *key {
                "scenario.name" => {
                    if v.is_empty() {
                        return Err(config_err(line, "scenario.name must not be empty"));
                    }
                    s.name = v.clone();
                }
                "beam.energy" => s.energy = parse_f64(line, key, v)?,
                "beam.mass" => s.mass = parse_f64(line, key, v)?,
                "beam.theta0" => s.theta0 = parse_f64(line, key, v)?.to_radians(),
                "well.depth" => depth = parse_f64(line, key, v)?,
                "well.radius" => {
                    radius = to_natural_length(parse_f64(line, key, v)?).map_err(|e| config_err(line, e.to_string()))?
                }
                "well.length" => {
                    length = to_natural_length(parse_f64(line, key, v)?).map_err(|e| config_err(line, e.to_string()))?
                }
                "scan.kind" => {
                    s.scan.kind = match v.as_str() {
                        "angle" => ScanKind::Angle,
                        "energy" => ScanKind::Energy,
                        _ => return Err(config_err(line, format!("scan.kind: expected angle or energy, got '{v}'"))),
                    }
                }
                "scan.min" => min = Some((line, parse_f64(line, key, v)?)),
                "scan.max" => max = Some((line, parse_f64(line, key, v)?)),
                "scan.points" => {
                    s.scan.points =
                        v.parse().map_err(|_| config_err(line, format!("scan.points: '{v}' is not a count")))?
                }
                "scan.resonances" => s.scan.resonances = parse_resonances(line, v)?,
                "model.ultrarelativistic" => s.flags.ultrarelativistic = parse_bool(line, key, v)?,
                "model.paper_literal" => s.flags.paper_literal = parse_bool(line, key, v)?,
                "model.level_variant" => {
                    s.flags.level_variant = v.parse().map_err(|e: Error| config_err(line, e.to_string()))?
                }
                _ => unreachable!("key list and match agree"),
            }
        }
        let to_internal = |x: f64| match s.scan.kind {
            ScanKind::Angle => x.to_radians(),
            ScanKind::Energy => x,
        };
        if let Some((_, v)) = min {
            s.scan.min = to_internal(v);
        }
        if let Some((_, v)) = max {
            s.scan.max = to_internal(v);
        }
        s.well = StringPotential::new(depth, radius, length)?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        Self::from_config_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let sc = &self.scan;
        if sc.points < 2 {
            return Err(Error::invalid(format!("scan needs at least 2 points, got {}", sc.points)));
        }
        if !(sc.min < sc.max) {
            return Err(Error::invalid(format!("scan minimum {} must be below maximum {}", sc.min, sc.max)));
        }
        if !(self.theta0 >= 0.0) {
            return Err(Error::invalid("entry angle must be >= 0"));
        }
        match sc.kind {
            ScanKind::Angle => {
                if sc.min < 0.0 {
                    return Err(Error::invalid("angle scans start at >= 0"));
                }
                BeamState::new(self.energy, self.mass, 0.0)?;
            }
            ScanKind::Energy => {
                if sc.min < self.mass {
                    return Err(Error::invalid(format!("energy scan starts below the rest mass {} eV", self.mass)));
                }
            }
        }
        if !(self.well.length > 0.0) {
            return Err(Error::invalid("scans need a positive string length"));
        }
        Ok(())
    }

    /// Canonical config text: every key once, sorted, no comments.
    pub fn to_config_text(&self) -> String {
        let angle = |x: f64| x.to_degrees();
        let scan_value = |x: f64| match self.scan.kind {
            ScanKind::Angle => angle(x),
            ScanKind::Energy => x,
        };
        let values: BTreeMap<&str, String> = BTreeMap::from([
            ("beam.energy", format!("{}", self.energy)),
            ("beam.mass", format!("{}", self.mass)),
            ("beam.theta0", format!("{}", angle(self.theta0))),
            ("model.level_variant", self.flags.level_variant.to_string()),
            ("model.paper_literal", self.flags.paper_literal.to_string()),
            ("model.ultrarelativistic", self.flags.ultrarelativistic.to_string()),
            ("scan.kind", self.scan.kind.as_str().into()),
            ("scan.max", format!("{}", scan_value(self.scan.max))),
            ("scan.min", format!("{}", scan_value(self.scan.min))),
            ("scan.points", self.scan.points.to_string()),
            ("scan.resonances", format_resonances(&self.scan.resonances)),
            ("scenario.name", self.name.clone()),
            ("well.depth", format!("{}", self.well.depth)),
            ("well.length", format!("{}", to_si_length(self.well.length))),
            ("well.radius", format!("{}", to_si_length(self.well.radius))),
        ]);
        let mut out = String::new();
        for (k, v) in values {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    /// SHA-256 of [`Self::to_config_text`].
    pub fn config_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_config_text().as_bytes()))
    }

    /// Beam at `energy` and `theta`, honouring the kinematics flag.
    pub fn beam(&self, energy: f64, theta: f64) -> Result<BeamState<f64>> {
        if self.flags.ultrarelativistic {
            BeamState::ultrarelativistic(energy, self.mass, theta)
        } else {
            BeamState::new(energy, self.mass, theta)
        }
    }
}

/// A resonance inside the scan window. Angles in radians, energies in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceAnnotation {
    pub n: u32,
    pub m: u32,
    pub position: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub scenario: String,
    pub flags: ModelFlags,
    pub version: String,
    pub config_hash: String,
}

/// Scan output: one breakdown per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub kind: ScanKind,
    /// Radians (angle scans) or eV (energy scans).
    pub grid: Vec<f64>,
    pub rows: Vec<CrossSectionBreakdown<f64>>,
    pub annotations: Vec<ResonanceAnnotation>,
    pub provenance: Provenance,
}

const MAX_AUTO_N: u32 = 50;
const MAX_AUTO_M: u32 = 400;

/// Resonances to include in an angle scan at the scenario energy.
fn angle_resonances(s: &Scenario) -> Result<Vec<(u32, u32, f64, f64)>> {
    let model = s.flags.resonance_model();
    let mut out = Vec::new();
    let mut push = |n: u32, m: u32| -> Result<Option<f64>> {
        match model.theta_res(&s.well, s.energy, n, m) {
            Ok(t) => {
                let g = model.gamma_angle(&s.well, s.energy, n, m)?;
                out.push((n, m, t, g));
                Ok(Some(t))
            }
            Err(Error::NoResonance { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    match &s.scan.resonances {
        ResonanceSelection::List(list) => {
            for &(n, m) in list {
                push(n, m)?;
            }
        }
        ResonanceSelection::Auto => {
            for n in 1..=MAX_AUTO_N {
                let mut first = None;
                for m in 1..=MAX_AUTO_M {
                    if let Some(t) = push(n, m)? {
                        first.get_or_insert(t);
                        if t > s.scan.max {
                            break;
                        }
                    }
                }
                if first.is_some_and(|t| t > s.scan.max) {
                    break;
                }
            }
            out.retain(|r| r.2 >= s.scan.min && r.2 <= s.scan.max);
        }
    }
    Ok(out)
}

/// Resonances to include in an energy scan at the scenario angle.
fn energy_resonances(s: &Scenario) -> Result<Vec<(u32, u32, f64, f64)>> {
    let model = s.flags.resonance_model();
    let at = |n: u32, m: u32| -> Result<(u32, u32, f64, f64)> {
        let e = model.e_res(&s.well, s.theta0, n, m)?;
        Ok((n, m, e, model.gamma_energy(&s.well, e, n)?))
    };
    let mut out = Vec::new();
    match &s.scan.resonances {
        ResonanceSelection::List(list) => {
            for &(n, m) in list {
                out.push(at(n, m)?);
            }
        }
        ResonanceSelection::Auto => {
            for n in 1..=MAX_AUTO_N {
                let first = at(n, 1)?;
                if first.2 > s.scan.max {
                    break;
                }
                for m in 1..=MAX_AUTO_M {
                    let r = at(n, m)?;
                    if r.2 > s.scan.max {
                        break;
                    }
                    out.push(r);
                }
            }
            out.retain(|r| r.2 >= s.scan.min && r.2 <= s.scan.max);
        }
    }
    Ok(out)
}

fn provenance(s: &Scenario) -> Provenance {
    Provenance {
        scenario: s.name.clone(),
        flags: s.flags,
        version: crate::VERSION.to_string(),
        config_hash: s.config_hash(),
    }
}

fn in_pool<R: Send>(workers: usize, job: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Angle scan: small-angle m = 0 bound term (inside `theta0 < 1/sqrt(pL)`)
/// plus the Breit–Wigner terms of the selected resonances on one baseline.
pub fn run_angle_scan(s: &Scenario, workers: usize) -> Result<ScanResult> {
    s.validate()?;
    if s.scan.kind != ScanKind::Angle {
        return Err(Error::invalid("scenario describes an energy scan, not an angle scan"));
    }
    let levels = m0_bound_energies(&s.well, s.energy, s.flags.level_variant)?;
    let resonances = angle_resonances(s)?;
    let model = s.flags.resonance_model();
    let grid = s.scan.grid();
    let rows = in_pool(workers, || {
        grid.par_iter()
            .map(|&theta| {
                let beam = s.beam(s.energy, theta)?;
                let central = if effective_scales(&beam, &s.well)?.m_max == 0 {
                    sigma_small_angle_m0_with(&beam, &s.well, &levels)?
                } else {
                    CrossSectionBreakdown::new(sigma_zero(&beam, &s.well)?, 0.0, 0.0, Vec::new())
                };
                let mut res = 0.0;
                for &(n, m, _, _) in &resonances {
                    res += model.bw_angle_excess(&beam, &s.well, n, m)?;
                }
                Ok(CrossSectionBreakdown::new(central.continuum, central.bound, res, central.per_state))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let annotations = resonances
        .iter()
        .filter(|r| r.2 >= s.scan.min && r.2 <= s.scan.max)
        .map(|&(n, m, position, width)| ResonanceAnnotation { n, m, position, width })
        .collect();
    Ok(ScanResult { kind: ScanKind::Angle, grid, rows, annotations, provenance: provenance(s) })
}

/// Energy scan at fixed entry angle: `sigma0(E)` plus Breit–Wigner terms in E.
pub fn run_energy_scan(s: &Scenario, workers: usize) -> Result<ScanResult> {
    s.validate()?;
    if s.scan.kind != ScanKind::Energy {
        return Err(Error::invalid("scenario describes an angle scan, not an energy scan"));
    }
    if !(s.theta0 > 0.0) {
        return Err(Error::invalid("energy scans need a nonzero entry angle"));
    }
    let resonances = energy_resonances(s)?;
    let model = s.flags.resonance_model();
    let grid = s.scan.grid();
    let rows = in_pool(workers, || {
        grid.par_iter()
            .map(|&energy| {
                let beam = s.beam(energy, s.theta0)?;
                let base = sigma_zero(&beam, &s.well)?;
                let mut res = 0.0;
                for &(n, m, _, _) in &resonances {
                    res += model.bw_energy_excess(&beam, &s.well, n, m)?;
                }
                Ok(CrossSectionBreakdown::new(base, 0.0, res, Vec::new()))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let annotations = resonances
        .iter()
        .filter(|r| r.2 >= s.scan.min && r.2 <= s.scan.max)
        .map(|&(n, m, position, width)| ResonanceAnnotation { n, m, position, width })
        .collect();
    Ok(ScanResult { kind: ScanKind::Energy, grid, rows, annotations, provenance: provenance(s) })
}

/// Writes the scan as CSV. `x` is in degrees or MeV, cross sections in eV^-2.
pub fn emit_csv<W: Write>(result: &ScanResult, out: &mut W, normalized: bool) -> Result<()> {
    let p = &result.provenance;
    let mut text = String::new();
    let _ = writeln!(text, "# scenario: {}", p.scenario);
    let _ = writeln!(text, "# flags: {}", p.flags.describe());
    let _ = writeln!(text, "# version: string-resonance {}", p.version);
    let _ = writeln!(text, "# config-sha256: {}", p.config_hash);
    let _ = writeln!(
        text,
        "# x: {}",
        match result.kind {
            ScanKind::Angle => "entry angle in degrees",
            ScanKind::Energy => "beam energy in MeV",
        }
    );
    for a in &result.annotations {
        match result.kind {
            ScanKind::Angle => {
                let _ = writeln!(
                    text,
                    "# resonance n={} m={} theta_res_rad={:.11e} gamma_rad={:.11e}",
                    a.n, a.m, a.position, a.width
                );
            }
            ScanKind::Energy => {
                let _ = writeln!(
                    text,
                    "# resonance n={} m={} e_res_ev={:.11e} gamma_bar_ev={:.11e}",
                    a.n, a.m, a.position, a.width
                );
            }
        }
    }
    text.push_str("x,sigma_total,sigma_continuum,sigma_bound,sigma_resonance");
    text.push_str(if normalized { ",sigma_normalized\n" } else { "\n" });
    for (x, row) in result.grid.iter().zip(&result.rows) {
        let x = match result.kind {
            ScanKind::Angle => x.to_degrees(),
            ScanKind::Energy => x / 1e6,
        };
        let _ = write!(
            text,
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            x, row.total, row.continuum, row.bound, row.resonance
        );
        if normalized {
            let _ = write!(text, ",{:.11e}", row.total / row.continuum);
        }
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

pub fn write_csv_file(result: &ScanResult, path: &Path, normalized: bool) -> Result<()> {
    let mut buf = Vec::new();
    emit_csv(result, &mut buf, normalized)?;
    std::fs::write(path, buf)?;
    Ok(())
}
