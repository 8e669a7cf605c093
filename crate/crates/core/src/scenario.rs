//! Scenario configs, presets and the deterministic run pipeline.
//!
//! Configs are flat `key = value` text: one pair per line, `#` starts a
//! comment, lists are comma-separated. Outputs are plain-text tables with
//! shortest-roundtrip decimals, so identical configs rerun to byte-identical
//! files on the same platform.
//!
//! The `omega_t` / `eta_omega_t` time conventions count drive cycles:
//! a config time v maps to raw interaction-picture time 2π·v/|Ω| and
//! 2π·v/(η|Ω|) respectively.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::couplings::{zone_boundaries, ZoneBoundaries};
use crate::error::{Error, Result};
use crate::evolution::{evolve, TimeUnit};
use crate::fock::{coherent_state, recommended_cutoff, StateVector};
use crate::hamiltonian::{h_one_mode, h_resonant, ResonanceSpec};
use crate::phasespace::{find_q_maxima, number_stats, q_function, NumberStats, QWindow};
use crate::C64;

/// Which artifacts a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Outputs {
    pub observables: bool,
    pub qgrid: bool,
    pub zones: bool,
}

impl Outputs {
    fn parse(value: &str) -> Result<Self> {
        let mut out = Outputs::default();
        for item in value.split(',') {
            match item.trim() {
                "observables" => out.observables = true,
                "qgrid" => out.qgrid = true,
                "zones" => out.zones = true,
                other => {
                    return Err(Error::InvalidValue {
                        key: "outputs".into(),
                        reason: format!("unknown output `{other}`"),
                    })
                }
            }
        }
        Ok(out)
    }

    fn serialize(&self) -> String {
        let mut items = Vec::new();
        if self.observables {
            items.push("observables");
        }
        if self.qgrid {
            items.push("qgrid");
        }
        if self.zones {
            items.push("zones");
        }
        items.join(",")
    }
}

/// Scenario-specific drive and initial-state parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    OneMode {
        k: usize,
        eta: f64,
        alpha: C64,
        cutoff: usize,
    },
    ResonantMultimode {
        s1: i64,
        s2: i64,
        etas: [f64; 3],
        alphas: [C64; 3],
        cutoffs: [usize; 3],
    },
}

impl Scenario {
    fn name(&self) -> &'static str {
        match self {
            Scenario::OneMode { .. } => "one_mode",
            Scenario::ResonantMultimode { .. } => "resonant_multimode",
        }
    }

    /// Lamb–Dicke parameter used by the eta_omega_t convention.
    fn reference_eta(&self) -> f64 {
        match self {
            Scenario::OneMode { eta, .. } => *eta,
            Scenario::ResonantMultimode { etas, .. } => {
                etas.iter().copied().find(|&e| e > 0.0).unwrap_or(0.0)
            }
        }
    }
}

/// A fully resolved simulation request.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub scenario: Scenario,
    pub omega_abs: f64,
    pub omega_phase: f64,
    pub times: Vec<f64>,
    pub time_unit: TimeUnit,
    pub outputs: Outputs,
    /// Explicit Q window (re_min, re_max, im_min, im_max); auto-sized if absent.
    pub qgrid_window: Option<(f64, f64, f64, f64)>,
    pub qgrid_step: f64,
    pub peak_floor: f64,
    pub override_cutoff: bool,
}

impl SimulationConfig {
    pub fn omega(&self) -> C64 {
        C64::from_polar(self.omega_abs, self.omega_phase)
    }

    /// Raw interaction-picture time of one configured time value.
    pub fn raw_time(&self, value: f64) -> f64 {
        match self.time_unit {
            TimeUnit::Raw => value,
            TimeUnit::OmegaT => TAU * value / self.omega_abs,
            TimeUnit::EtaOmegaT => TAU * value / (self.scenario.reference_eta() * self.omega_abs),
        }
    }

    /// Stable 64-bit hash of the canonical serialization.
    pub fn hash(&self) -> String {
        format!("{:016x}", fnv1a64(serialize_config(self).as_bytes()))
    }
}

const ONE_MODE_KEYS: &[&str] = &["k", "eta", "alpha_re", "alpha_im", "cutoff"];
const MULTI_KEYS: &[&str] = &[
    "s1",
    "s2",
    "eta1",
    "eta2",
    "eta3",
    "alpha1_re",
    "alpha1_im",
    "alpha2_re",
    "alpha2_im",
    "alpha3_re",
    "alpha3_im",
    "cutoff1",
    "cutoff2",
    "cutoff3",
];
const SHARED_KEYS: &[&str] = &[
    "scenario",
    "omega_abs",
    "omega_phase",
    "times",
    "time_unit",
    "outputs",
    "qgrid_re_min",
    "qgrid_re_max",
    "qgrid_im_min",
    "qgrid_im_max",
    "qgrid_step",
    "peak_floor",
    "override_cutoff",
];

struct KeyValues(Vec<(String, String)>);

impl KeyValues {
    fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::MissingKey(key.into()))
    }

    fn parse_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| Error::InvalidValue {
                    key: key.into(),
                    reason: format!("`{v}` is not a number"),
                })
            })
            .transpose()
    }

    fn parse_usize(&self, key: &str) -> Result<Option<usize>> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| Error::InvalidValue {
                    key: key.into(),
                    reason: format!("`{v}` is not a non-negative integer"),
                })
            })
            .transpose()
    }

    fn parse_i64(&self, key: &str) -> Result<Option<i64>> {
        self.get(key)
            .map(|v| {
                v.parse::<i64>().map_err(|_| Error::InvalidValue {
                    key: key.into(),
                    reason: format!("`{v}` is not an integer"),
                })
            })
            .transpose()
    }

    fn parse_bool(&self, key: &str) -> Result<Option<bool>> {
        self.get(key)
            .map(|v| match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(Error::InvalidValue {
                    key: key.into(),
                    reason: format!("`{v}` is not true/false"),
                }),
            })
            .transpose()
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !seen.insert(key.clone()) {
            return Err(Error::Config(format!("duplicate key `{key}`")));
        }
        pairs.push((key, value));
    }
    let kv = KeyValues(pairs);

    let scenario_name = kv.required("scenario")?;
    let allowed: Vec<&str> = match scenario_name {
        "one_mode" => SHARED_KEYS.iter().chain(ONE_MODE_KEYS).copied().collect(),
        "resonant_multimode" => SHARED_KEYS.iter().chain(MULTI_KEYS).copied().collect(),
        other => {
            return Err(Error::InvalidValue {
                key: "scenario".into(),
                reason: format!("unknown scenario `{other}`"),
            })
        }
    };
    for (key, _) in &kv.0 {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::UnknownKey(key.clone()));
        }
    }

    let scenario = match scenario_name {
        "one_mode" => {
            let k = kv
                .parse_usize("k")?
                .ok_or_else(|| Error::MissingKey("k".into()))?;
            let eta = kv
                .parse_f64("eta")?
                .ok_or_else(|| Error::MissingKey("eta".into()))?;
            let alpha = C64::new(
                kv.parse_f64("alpha_re")?
                    .ok_or_else(|| Error::MissingKey("alpha_re".into()))?,
                kv.parse_f64("alpha_im")?.unwrap_or(0.0),
            );
            if !eta.is_finite() || eta < 0.0 {
                return Err(Error::InvalidValue {
                    key: "eta".into(),
                    reason: "must be finite and >= 0".into(),
                });
            }
            let cutoff = match kv.parse_usize("cutoff")? {
                Some(c) if c >= 1 => c,
                Some(_) => {
                    return Err(Error::InvalidValue {
                        key: "cutoff".into(),
                        reason: "must be at least 1".into(),
                    })
                }
                None => recommended_cutoff(alpha),
            };
            Scenario::OneMode {
                k,
                eta,
                alpha,
                cutoff,
            }
        }
        _ => {
            let s1 = kv
                .parse_i64("s1")?
                .ok_or_else(|| Error::MissingKey("s1".into()))?;
            let s2 = kv
                .parse_i64("s2")?
                .ok_or_else(|| Error::MissingKey("s2".into()))?;
            let mut etas = [0.0f64; 3];
            let mut alphas = [C64::new(0.0, 0.0); 3];
            let mut cutoffs = [1usize; 3];
            for m in 0..3 {
                etas[m] = kv.parse_f64(&format!("eta{}", m + 1))?.unwrap_or(0.0);
                if !etas[m].is_finite() || etas[m] < 0.0 {
                    return Err(Error::InvalidValue {
                        key: format!("eta{}", m + 1),
                        reason: "must be finite and >= 0".into(),
                    });
                }
                alphas[m] = C64::new(
                    kv.parse_f64(&format!("alpha{}_re", m + 1))?.unwrap_or(0.0),
                    kv.parse_f64(&format!("alpha{}_im", m + 1))?.unwrap_or(0.0),
                );
                cutoffs[m] = match kv.parse_usize(&format!("cutoff{}", m + 1))? {
                    Some(c) if c >= 1 => c,
                    Some(_) => {
                        return Err(Error::InvalidValue {
                            key: format!("cutoff{}", m + 1),
                            reason: "must be at least 1".into(),
                        })
                    }
                    None if etas[m] > 0.0 => recommended_cutoff(alphas[m]),
                    None => 1,
                };
            }
            if etas.iter().all(|&e| e == 0.0) {
                return Err(Error::Config(
                    "at least one of eta1/eta2/eta3 must be positive".into(),
                ));
            }
            Scenario::ResonantMultimode {
                s1,
                s2,
                etas,
                alphas,
                cutoffs,
            }
        }
    };

    let omega_abs = kv.parse_f64("omega_abs")?.unwrap_or(1.0);
    let omega_phase = kv.parse_f64("omega_phase")?.unwrap_or(0.0);
    if !omega_abs.is_finite() || omega_abs < 0.0 {
        return Err(Error::InvalidValue {
            key: "omega_abs".into(),
            reason: "must be finite and >= 0".into(),
        });
    }

    let times_raw = kv.required("times")?;
    let mut times = Vec::new();
    for item in times_raw.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        times.push(item.parse::<f64>().map_err(|_| Error::InvalidValue {
            key: "times".into(),
            reason: format!("`{item}` is not a number"),
        })?);
    }
    if times.is_empty() {
        return Err(Error::InvalidValue {
            key: "times".into(),
            reason: "time list must not be empty".into(),
        });
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidValue {
            key: "times".into(),
            reason: "times must be finite and strictly ascending".into(),
        });
    }

    let time_unit = match kv.get("time_unit") {
        Some("t") => TimeUnit::Raw,
        Some("omega_t") => TimeUnit::OmegaT,
        Some("eta_omega_t") => TimeUnit::EtaOmegaT,
        Some(other) => {
            return Err(Error::InvalidValue {
                key: "time_unit".into(),
                reason: format!("unknown unit `{other}` (expected t, omega_t or eta_omega_t)"),
            })
        }
        // scenario conventions: carrier runs use omega_t, sidebands eta_omega_t
        None => match &scenario {
            Scenario::OneMode { k: 0, .. } => TimeUnit::OmegaT,
            Scenario::OneMode { .. } => TimeUnit::EtaOmegaT,
            Scenario::ResonantMultimode { .. } => TimeUnit::Raw,
        },
    };
    // unit consistency with the drive parameters
    match time_unit {
        TimeUnit::OmegaT if omega_abs == 0.0 => {
            return Err(Error::Config(
                "time_unit omega_t requires omega_abs > 0".into(),
            ))
        }
        TimeUnit::EtaOmegaT => {
            if omega_abs == 0.0 {
                return Err(Error::Config(
                    "time_unit eta_omega_t requires omega_abs > 0".into(),
                ));
            }
            if scenario.reference_eta() == 0.0 {
                return Err(Error::Config(
                    "time_unit eta_omega_t requires a positive Lamb-Dicke parameter".into(),
                ));
            }
        }
        _ => {}
    }

    let outputs = match kv.get("outputs") {
        Some(v) => Outputs::parse(v)?,
        None => Outputs {
            observables: true,
            ..Outputs::default()
        },
    };

    let window_keys = [
        kv.parse_f64("qgrid_re_min")?,
        kv.parse_f64("qgrid_re_max")?,
        kv.parse_f64("qgrid_im_min")?,
        kv.parse_f64("qgrid_im_max")?,
    ];
    let qgrid_window = match window_keys {
        [None, None, None, None] => None,
        [Some(a), Some(b), Some(c), Some(d)] => Some((a, b, c, d)),
        _ => {
            return Err(Error::Config(
                "qgrid window overrides need all four of qgrid_re_min/re_max/im_min/im_max".into(),
            ))
        }
    };

    let qgrid_step = kv.parse_f64("qgrid_step")?.unwrap_or(0.1);
    if !qgrid_step.is_finite() || qgrid_step <= 0.0 {
        return Err(Error::InvalidValue {
            key: "qgrid_step".into(),
            reason: "must be positive".into(),
        });
    }
    let peak_floor = kv.parse_f64("peak_floor")?.unwrap_or(0.02);
    if !peak_floor.is_finite() || peak_floor < 0.0 {
        return Err(Error::InvalidValue {
            key: "peak_floor".into(),
            reason: "must be >= 0".into(),
        });
    }
    let override_cutoff = kv.parse_bool("override_cutoff")?.unwrap_or(false);

    Ok(SimulationConfig {
        scenario,
        omega_abs,
        omega_phase,
        times,
        time_unit,
        outputs,
        qgrid_window,
        qgrid_step,
        peak_floor,
        override_cutoff,
    })
}

/// Canonical text form; `parse_config` restores it exactly.
pub fn serialize_config(cfg: &SimulationConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario = {}", cfg.scenario.name());
    match &cfg.scenario {
        Scenario::OneMode {
            k,
            eta,
            alpha,
            cutoff,
        } => {
            let _ = writeln!(s, "k = {k}");
            let _ = writeln!(s, "eta = {eta}");
            let _ = writeln!(s, "alpha_re = {}", alpha.re);
            let _ = writeln!(s, "alpha_im = {}", alpha.im);
            let _ = writeln!(s, "cutoff = {cutoff}");
        }
        Scenario::ResonantMultimode {
            s1,
            s2,
            etas,
            alphas,
            cutoffs,
        } => {
            let _ = writeln!(s, "s1 = {s1}");
            let _ = writeln!(s, "s2 = {s2}");
            for m in 0..3 {
                let _ = writeln!(s, "eta{} = {}", m + 1, etas[m]);
                let _ = writeln!(s, "alpha{}_re = {}", m + 1, alphas[m].re);
                let _ = writeln!(s, "alpha{}_im = {}", m + 1, alphas[m].im);
                let _ = writeln!(s, "cutoff{} = {}", m + 1, cutoffs[m]);
            }
        }
    }
    let _ = writeln!(s, "omega_abs = {}", cfg.omega_abs);
    let _ = writeln!(s, "omega_phase = {}", cfg.omega_phase);
    let times: Vec<String> = cfg.times.iter().map(|t| format!("{t}")).collect();
    let _ = writeln!(s, "times = {}", times.join(","));
    let _ = writeln!(s, "time_unit = {}", cfg.time_unit);
    let _ = writeln!(s, "outputs = {}", cfg.outputs.serialize());
    if let Some((a, b, c, d)) = cfg.qgrid_window {
        let _ = writeln!(s, "qgrid_re_min = {a}");
        let _ = writeln!(s, "qgrid_re_max = {b}");
        let _ = writeln!(s, "qgrid_im_min = {c}");
        let _ = writeln!(s, "qgrid_im_max = {d}");
    }
    let _ = writeln!(s, "qgrid_step = {}", cfg.qgrid_step);
    let _ = writeln!(s, "peak_floor = {}", cfg.peak_floor);
    let _ = writeln!(s, "override_cutoff = {}", cfg.override_cutoff);
    s
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Built-in scenario presets, named for the effect they reproduce.
pub const PRESET_NAMES: &[&str] = &["splitting", "squeezing", "kerr"];

/// Configuration text of a built-in preset.
pub fn preset_text(name: &str) -> Result<String> {
    match name {
        "splitting" => {
            let z = zone_boundaries(1, 0.25, 300)?;
            let r1 = z.radii[0];
            Ok(format!(
                "# Splitting of a coherent state placed on a zone boundary.\n\
                 # The initial amplitude sits on the first sign-change circle of the\n\
                 # k = 1 coupling (radius {r1:.6}, bracket 57..58), perpendicular to the\n\
                 # real displacement axis, so the inner and outer halves of the packet\n\
                 # are driven in opposite directions and shear apart.\n\
                 # Times are eta*|Omega|*t in drive cycles; the cutoff covers transport\n\
                 # out to the second circle (radius 14.0).\n\
                 scenario = one_mode\n\
                 k = 1\n\
                 eta = 0.25\n\
                 alpha_re = 0\n\
                 alpha_im = {r1}\n\
                 cutoff = 350\n\
                 omega_abs = 1\n\
                 omega_phase = 0\n\
                 times = 0,2.5,5,15\n\
                 time_unit = eta_omega_t\n\
                 outputs = observables,qgrid,zones\n\
                 qgrid_step = 0.1\n\
                 peak_floor = 0.02\n"
            ))
        }
        "squeezing" => {
            let times: Vec<String> = std::iter::once("0".to_string())
                .chain((0..=16).map(|i| format!("{}", 8.0 + 0.25 * i as f64)))
                .collect();
            Ok(format!(
                "# Amplitude squeezing of a coherent state driven on the first sideband.\n\
                 # Starting from alpha = -9 (between the first two zone circles) the state\n\
                 # is displaced onto the circle at radius 7.598 and squeezed against it;\n\
                 # the variance-to-mean ratio of the occupation bottoms out near\n\
                 # eta*|Omega|*t ~ 10.7 cycles. Times sample the surrounding window.\n\
                 scenario = one_mode\n\
                 k = 1\n\
                 eta = 0.25\n\
                 alpha_re = -9\n\
                 alpha_im = 0\n\
                 cutoff = 200\n\
                 omega_abs = 1\n\
                 omega_phase = 0\n\
                 times = {}\n\
                 time_unit = eta_omega_t\n\
                 outputs = observables,zones\n",
                times.join(",")
            ))
        }
        "kerr" => {
            let z = zone_boundaries(0, 0.25, 100)?;
            let r0 = z.radii[0];
            Ok(format!(
                "# Kerr-type deformation on the carrier (k = 0).\n\
                 # The drive is diagonal in the number basis: occupations are frozen\n\
                 # while number-dependent phases rotate and shear the state. The initial\n\
                 # amplitude sits on the circle where the carrier coupling vanishes\n\
                 # (radius {r0:.6}). Times are |Omega|*t in drive cycles.\n\
                 scenario = one_mode\n\
                 k = 0\n\
                 eta = 0.25\n\
                 alpha_re = {r0}\n\
                 alpha_im = 0\n\
                 cutoff = 100\n\
                 omega_abs = 1\n\
                 omega_phase = 0\n\
                 times = 0,173.5,346.6,500\n\
                 time_unit = omega_t\n\
                 outputs = observables,qgrid\n"
            ))
        }
        other => Err(Error::InvalidInput(format!(
            "unknown preset `{other}`; available: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

/// One sampled time in a run summary.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub time: f64,
    pub stats: NumberStats,
    pub peak_count: Option<usize>,
}

/// Outcome of a scenario run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub version: String,
    pub config_hash: String,
    pub scenario: String,
    pub time_unit: TimeUnit,
    pub rows: Vec<SummaryRow>,
    pub max_norm_defect: f64,
    pub zone_radii: Option<Vec<f64>>,
    pub files: Vec<String>,
}

fn check_cutoff_guidance(cfg: &SimulationConfig) -> Result<()> {
    if cfg.override_cutoff {
        return Ok(());
    }
    match &cfg.scenario {
        Scenario::OneMode { alpha, cutoff, .. } => {
            let rec = recommended_cutoff(*alpha);
            if *cutoff < rec {
                return Err(Error::CutoffTooSmall {
                    cutoff: *cutoff,
                    recommended: rec,
                });
            }
        }
        Scenario::ResonantMultimode {
            etas,
            alphas,
            cutoffs,
            ..
        } => {
            for m in 0..3 {
                if etas[m] > 0.0 {
                    let rec = recommended_cutoff(alphas[m]);
                    if cutoffs[m] < rec {
                        return Err(Error::CutoffTooSmall {
                            cutoff: cutoffs[m],
                            recommended: rec,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

// Auto-sized square window: covers the initial amplitude plus five standard
// contours, united with the zone circle the dynamics is drawn to (the next
// boundary outward for sideband drives, the nearest one for the carrier).
fn auto_window(k: usize, eta: f64, alpha: C64, step: f64) -> Result<QWindow> {
    let a = alpha.norm();
    let r_ref = if eta > 0.0 {
        let n_scan = ((4.0 * a * a) as usize).max(400);
        let zones = zone_boundaries(k, eta, n_scan)?;
        let candidate = if k == 0 {
            zones.nearest_radius(a)
        } else {
            zones
                .next_radius_above(a)
                .or_else(|| zones.nearest_radius(a))
        };
        candidate.unwrap_or(a)
    } else {
        a
    };
    let half = a.max(r_ref) + 5.0;
    let half = (half / step).ceil() * step;
    Ok(QWindow::square(half))
}

fn write_text(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content)?;
    Ok(())
}

fn fmt_ratio(r: Option<f64>) -> String {
    match r {
        Some(v) => format!("{v}"),
        None => "nan".into(),
    }
}

/// Run a validated scenario and write the requested artifacts into `out_dir`.
///
/// Reruns of the same config on the same platform produce byte-identical
/// files; the returned summary mirrors `summary.txt`.
pub fn run_scenario(cfg: &SimulationConfig, out_dir: &Path) -> Result<RunSummary> {
    check_cutoff_guidance(cfg)?;
    if cfg.outputs.qgrid && !matches!(cfg.scenario, Scenario::OneMode { .. }) {
        return Err(Error::Config(
            "qgrid output requires the one_mode scenario".into(),
        ));
    }
    if cfg.outputs.zones && !matches!(cfg.scenario, Scenario::OneMode { .. }) {
        return Err(Error::Config(
            "zones output requires the one_mode scenario".into(),
        ));
    }
    fs::create_dir_all(out_dir)?;

    let omega = cfg.omega();
    let (hamiltonian, psi0) = match &cfg.scenario {
        Scenario::OneMode {
            k,
            eta,
            alpha,
            cutoff,
        } => (
            h_one_mode(*k, *eta, omega, *cutoff)?,
            coherent_state(*alpha, *cutoff)?,
        ),
        Scenario::ResonantMultimode {
            s1,
            s2,
            etas,
            alphas,
            cutoffs,
        } => {
            let spec = ResonanceSpec {
                s1: *s1,
                s2: *s2,
                etas: *etas,
                omega,
                cutoffs: *cutoffs,
            };
            let h = h_resonant(&spec)?;
            let mut psi: Option<StateVector> = None;
            for &m in &spec.enabled_modes() {
                let part = coherent_state(alphas[m], cutoffs[m])?;
                psi = Some(match psi {
                    None => part,
                    Some(p) => p.tensor(&part),
                });
            }
            (h, psi.expect("validated: at least one enabled mode"))
        }
    };

    let raw_times: Vec<f64> = cfg.times.iter().map(|&v| cfg.raw_time(v)).collect();
    let trajectory = evolve(&psi0, &hamiltonian, &raw_times)?;

    let mut files = Vec::new();
    let mut rows: Vec<SummaryRow> = trajectory
        .states
        .iter()
        .zip(&cfg.times)
        .zip(&trajectory.norm_defects)
        .map(|((state, &time), &defect)| {
            let mut stats = number_stats(state);
            stats.norm_defect = defect;
            SummaryRow {
                time,
                stats,
                peak_count: None,
            }
        })
        .collect();

    if cfg.outputs.observables {
        let mut text = String::from("time,time_unit,mean_n,var_n,ratio,norm_defect\n");
        for row in &rows {
            let _ = writeln!(
                text,
                "{},{},{},{},{},{}",
                row.time,
                cfg.time_unit,
                row.stats.mean_n,
                row.stats.var_n,
                fmt_ratio(row.stats.ratio),
                row.stats.norm_defect
            );
        }
        write_text(&out_dir.join("observables.csv"), &text)?;
        files.push("observables.csv".to_string());
    }

    if cfg.outputs.qgrid {
        let Scenario::OneMode { k, eta, alpha, .. } = &cfg.scenario else {
            unreachable!("validated above");
        };
        let window = match cfg.qgrid_window {
            Some((a, b, c, d)) => QWindow::new(a, b, c, d),
            None => auto_window(*k, *eta, *alpha, cfg.qgrid_step)?,
        };
        for (i, state) in trajectory.states.iter().enumerate() {
            let grid = q_function(state, window, cfg.qgrid_step)?;
            let mut text = String::from("re_alpha,im_alpha,q\n");
            for i_re in 0..grid.n_re {
                for i_im in 0..grid.n_im {
                    let alpha = grid.alpha_at(i_re, i_im);
                    let _ = writeln!(text, "{},{},{}", alpha.re, alpha.im, grid.value(i_re, i_im));
                }
            }
            let name = format!("qgrid_{i:03}.csv");
            write_text(&out_dir.join(&name), &text)?;
            files.push(name);
            rows[i].peak_count = Some(find_q_maxima(&grid, cfg.peak_floor).len());
        }
    }

    let mut zone_radii = None;
    if cfg.outputs.zones {
        let Scenario::OneMode { k, eta, cutoff, .. } = &cfg.scenario else {
            unreachable!("validated above");
        };
        let zones: ZoneBoundaries = zone_boundaries(*k, *eta, (2 * cutoff).max(400))?;
        let mut text = String::from("k,eta,n_lo,n_hi,n_star,radius\n");
        for (bracket, radius) in zones.brackets.iter().zip(&zones.radii) {
            let _ = writeln!(
                text,
                "{},{},{},{},{},{}",
                zones.k,
                zones.eta,
                bracket.0,
                bracket.1,
                radius * radius,
                radius
            );
        }
        write_text(&out_dir.join("zones.csv"), &text)?;
        files.push("zones.csv".to_string());
        zone_radii = Some(zones.radii);
    }

    let summary = RunSummary {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: cfg.hash(),
        scenario: cfg.scenario.name().to_string(),
        time_unit: cfg.time_unit,
        rows,
        max_norm_defect: trajectory.max_norm_defect(),
        zone_radii,
        files,
    };

    let mut text = String::new();
    let _ = writeln!(text, "version = {}", summary.version);
    let _ = writeln!(text, "config_hash = {}", summary.config_hash);
    let _ = writeln!(text, "scenario = {}", summary.scenario);
    let _ = writeln!(text, "time_unit = {}", summary.time_unit);
    let _ = writeln!(text, "max_norm_defect = {}", summary.max_norm_defect);
    if let Some(radii) = &summary.zone_radii {
        let radii: Vec<String> = radii.iter().map(|r| format!("{r}")).collect();
        let _ = writeln!(text, "zone_radii = {}", radii.join(","));
    }
    let _ = writeln!(text, "files = {}", summary.files.join(","));
    let _ = writeln!(text, "time,mean_n,var_n,ratio,norm_defect,peak_count");
    for row in &summary.rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            row.time,
            row.stats.mean_n,
            row.stats.var_n,
            fmt_ratio(row.stats.ratio),
            row.stats.norm_defect,
            row.peak_count.map_or("-".into(), |c| c.to_string())
        );
    }
    write_text(&out_dir.join("summary.txt"), &text)?;

    Ok(summary)
}
