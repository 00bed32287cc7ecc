use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{dbm_to_mw, FadingModel, LinkBudget};
use crate::error::{Error, Result};
use crate::game::GameConfig;
use crate::learning::LearningConfig;

fn spec_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Spec {
        location: Some(location.into()),
        message: message.into(),
    }
}

/// User-facing game parameters. Powers are in dBm and times in milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameSpec {
    pub devices: usize,
    pub required_connections: usize,
    /// J′. Sets the budget to `max_attacks × P_K` unless `power_budget_mw` is given.
    pub max_attacks: usize,
    pub power_budget_mw: Option<f64>,
    pub soldier_tx_power_dbm: f64,
    pub jammer_tx_power_dbm: f64,
    /// P_K; defaults to the jammer transmit power.
    pub jam_power_per_attack_dbm: Option<f64>,
    pub noise_power_dbm: f64,
    pub bandwidth_mhz: f64,
    pub delay_tolerance_ms: f64,
    pub delay_weight: f64,
    /// Defaults to `1 − delay_weight`.
    pub power_weight: Option<f64>,
    pub soldier_frustration_weight: f64,
    pub attacker_frustration_weight: f64,
    pub pathloss_exponent: f64,
    pub sinr_threshold_db: f64,
    pub success_target: f64,
    pub max_retransmissions: u32,
    pub block_size_bits: f64,
    pub fading_mean: f64,
    pub geometry: GeometrySpec,
}

impl Default for GameSpec {
    fn default() -> Self {
        GameSpec {
            devices: 5,
            required_connections: 1,
            max_attacks: 1,
            power_budget_mw: None,
            soldier_tx_power_dbm: 20.0,
            jammer_tx_power_dbm: 20.0,
            jam_power_per_attack_dbm: None,
            noise_power_dbm: -95.0,
            bandwidth_mhz: 20.0,
            delay_tolerance_ms: 80.0,
            delay_weight: 0.5,
            power_weight: None,
            soldier_frustration_weight: 0.5,
            attacker_frustration_weight: 0.5,
            pathloss_exponent: 3.0,
            sinr_threshold_db: 10.0,
            success_target: 0.99,
            max_retransmissions: 10,
            block_size_bits: 1.0e6,
            fading_mean: 1.0,
            geometry: GeometrySpec::default(),
        }
    }
}

/// Device placement. Explicit distance lists win over seeded sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySpec {
    pub seed: u64,
    pub min_distance_m: f64,
    pub max_distance_m: f64,
    /// Extra distance from the jammer to each device, on top of the soldier's distance.
    pub jammer_offset_m: f64,
    pub soldier_distances_m: Option<Vec<f64>>,
    pub jammer_distances_m: Option<Vec<f64>>,
}

impl Default for GeometrySpec {
    fn default() -> Self {
        GeometrySpec {
            seed: 1,
            min_distance_m: 50.0,
            max_distance_m: 200.0,
            jammer_offset_m: 75.0,
            soldier_distances_m: None,
            jammer_distances_m: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub soldier_distances_m: Vec<f64>,
    pub jammer_distances_m: Vec<f64>,
}

impl GeometrySpec {
    pub fn resolve(&self, devices: usize) -> Result<Geometry> {
        let soldier = match &self.soldier_distances_m {
            Some(d) => d.clone(),
            None => {
                if !(self.min_distance_m > 0.0 && self.max_distance_m >= self.min_distance_m) {
                    return Err(spec_err(
                        "game.geometry",
                        "need 0 < min_distance_m <= max_distance_m",
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..devices)
                    .map(|_| {
                        let u: f64 = rng.gen();
                        self.min_distance_m + u * (self.max_distance_m - self.min_distance_m)
                    })
                    .collect()
            }
        };
        let jammer = match &self.jammer_distances_m {
            Some(d) => d.clone(),
            None => soldier.iter().map(|d| d + self.jammer_offset_m).collect(),
        };
        if soldier.len() != devices || jammer.len() != devices {
            return Err(spec_err(
                "game.geometry",
                format!("distance lists must have one entry per device ({devices})"),
            ));
        }
        Ok(Geometry {
            soldier_distances_m: soldier,
            jammer_distances_m: jammer,
        })
    }
}

impl GameSpec {
    pub fn resolve(&self) -> Result<(GameConfig, Geometry)> {
        if self.devices == 0 {
            return Err(Error::invalid("devices", "at least one device is required"));
        }
        let geometry = self.geometry.resolve(self.devices)?;
        let sinr_threshold = 10f64.powf(self.sinr_threshold_db / 10.0);
        let links = geometry
            .soldier_distances_m
            .iter()
            .zip(&geometry.jammer_distances_m)
            .map(|(&ds, &da)| LinkBudget {
                soldier_tx_power_mw: dbm_to_mw(self.soldier_tx_power_dbm),
                jammer_tx_power_mw: dbm_to_mw(self.jammer_tx_power_dbm),
                soldier_distance_m: ds,
                jammer_distance_m: da,
                pathloss_exponent: self.pathloss_exponent,
                noise_power_mw: dbm_to_mw(self.noise_power_dbm),
                sinr_threshold,
                success_target: self.success_target,
                max_retransmissions: self.max_retransmissions,
                block_size_bits: self.block_size_bits,
                bandwidth_hz: self.bandwidth_mhz * 1e6,
            })
            .collect();
        let p_k = dbm_to_mw(
            self.jam_power_per_attack_dbm
                .unwrap_or(self.jammer_tx_power_dbm),
        );
        let config = GameConfig {
            links,
            fading: FadingModel::ExponentialPowerGain {
                mean: self.fading_mean,
            },
            required_connections: self.required_connections,
            jam_power_per_attack_mw: p_k,
            power_budget_mw: self
                .power_budget_mw
                .unwrap_or(self.max_attacks as f64 * p_k),
            delay_tolerance_s: self.delay_tolerance_ms * 1e-3,
            delay_weight: self.delay_weight,
            power_weight: self.power_weight.unwrap_or(1.0 - self.delay_weight),
            soldier_frustration_weight: self.soldier_frustration_weight,
            attacker_frustration_weight: self.attacker_frustration_weight,
        };
        config.validate()?;
        Ok((config, geometry))
    }

    /// Applies one sweep coordinate.
    pub fn set(&mut self, field: &str, value: f64) -> Result<()> {
        let as_count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(spec_err(
                    format!("sweep.{field}"),
                    format!("expected a whole number, got {v}"),
                ))
            }
        };
        match field {
            "soldier_frustration_weight" => self.soldier_frustration_weight = value,
            "attacker_frustration_weight" => self.attacker_frustration_weight = value,
            "frustration_weight" => {
                self.soldier_frustration_weight = value;
                self.attacker_frustration_weight = value;
            }
            "delay_weight" => {
                self.delay_weight = value;
                self.power_weight = None;
            }
            "power_weight" => {
                self.power_weight = Some(value);
                self.delay_weight = 1.0 - value;
            }
            "delay_tolerance_ms" => self.delay_tolerance_ms = value,
            "required_connections" => self.required_connections = as_count(value)?,
            "max_attacks" => self.max_attacks = as_count(value)?,
            "devices" => self.devices = as_count(value)?,
            "power_budget_mw" => self.power_budget_mw = Some(value),
            "soldier_tx_power_dbm" => self.soldier_tx_power_dbm = value,
            "jammer_tx_power_dbm" => self.jammer_tx_power_dbm = value,
            "jam_power_per_attack_dbm" => self.jam_power_per_attack_dbm = Some(value),
            "noise_power_dbm" => self.noise_power_dbm = value,
            "bandwidth_mhz" => self.bandwidth_mhz = value,
            "pathloss_exponent" => self.pathloss_exponent = value,
            "sinr_threshold_db" => self.sinr_threshold_db = value,
            "success_target" => self.success_target = value,
            "max_retransmissions" => {
                self.max_retransmissions = u32::try_from(as_count(value)?)
                    .map_err(|_| spec_err(format!("sweep.{field}"), "value too large"))?
            }
            "block_size_bits" => self.block_size_bits = value,
            "fading_mean" => self.fading_mean = value,
            "geometry_seed" => self.geometry.seed = as_count(value)? as u64,
            "jammer_offset_m" => self.geometry.jammer_offset_m = value,
            other => return Err(spec_err(format!("sweep.{other}"), "unknown sweep field")),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Ne,
    Pe,
    Bu,
}

impl std::fmt::Display for RunMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RunMode::Ne => "NE",
            RunMode::Pe => "PE",
            RunMode::Bu => "BU",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::domain(format!(
                "unknown format `{other}`, expected csv or json"
            ))),
        }
    }
}

/// A sweep axis: an explicit list or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl AxisSpec {
    pub fn values(&self, field: &str) -> Result<Vec<f64>> {
        let v = match self {
            AxisSpec::Values(v) => v.clone(),
            AxisSpec::Range { start, stop, step } => {
                if !(*step > 0.0) || stop < start {
                    return Err(spec_err(
                        format!("sweep.{field}"),
                        "range needs step > 0 and stop >= start",
                    ));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
        };
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(spec_err(
                format!("sweep.{field}"),
                "sweep values must be finite and nonempty",
            ));
        }
        Ok(v)
    }
}

fn default_modes() -> Vec<RunMode> {
    vec![RunMode::Ne, RunMode::Pe]
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearningSpec {
    pub max_iterations: usize,
    pub epsilon: f64,
    pub convergence_window: usize,
    pub smoothing: f64,
    pub exploration: f64,
    pub exploration_decay: f64,
    pub material_only: bool,
    pub stop_early: bool,
    pub opponent: crate::learning::Opponent,
    /// Write a JSON trace per BU run.
    pub write_traces: bool,
}

impl Default for LearningSpec {
    fn default() -> Self {
        let d = LearningConfig::default();
        LearningSpec {
            max_iterations: d.max_iterations,
            epsilon: d.epsilon,
            convergence_window: d.convergence_window,
            smoothing: d.smoothing,
            exploration: d.exploration,
            exploration_decay: d.exploration_decay,
            material_only: d.material_only,
            stop_early: d.stop_early,
            opponent: d.opponent,
            write_traces: true,
        }
    }
}

impl LearningSpec {
    pub fn config(&self, seed: u64) -> LearningConfig {
        LearningConfig {
            max_iterations: self.max_iterations,
            epsilon: self.epsilon,
            rng_seed: seed,
            convergence_window: self.convergence_window,
            smoothing: self.smoothing,
            exploration: self.exploration,
            exploration_decay: self.exploration_decay,
            material_only: self.material_only,
            opponent: self.opponent,
            stop_early: self.stop_early,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawSpec {
    #[serde(default = "default_modes")]
    modes: Vec<RunMode>,
    #[serde(default = "default_seeds")]
    seeds: Vec<u64>,
    output_path: Option<String>,
    format: Option<OutputFormat>,
    game: GameSpec,
    learning: Option<LearningSpec>,
    sweep: BTreeMap<String, AxisSpec>,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub game_spec: GameSpec,
    /// The base game, resolved to linear units.
    pub game: GameConfig,
    pub geometry: Geometry,
    pub learning: Option<LearningSpec>,
    /// Sweep axes in name order.
    pub sweep: Vec<(String, Vec<f64>)>,
    pub seeds: Vec<u64>,
    pub modes: Vec<RunMode>,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| Error::Spec {
            location: e.span().map(|s| {
                let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
                format!("line {line}")
            }),
            message: e.message().to_string(),
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(mut raw: RawSpec) -> Result<Self> {
        if raw.modes.is_empty() {
            return Err(spec_err("modes", "at least one mode is required"));
        }
        if raw.seeds.is_empty() {
            return Err(spec_err("seeds", "at least one seed is required"));
        }
        raw.modes.sort();
        raw.modes.dedup();
        let (game, geometry) = raw.game.resolve()?;
        let mut sweep = Vec::new();
        for (field, axis) in &raw.sweep {
            let values = axis.values(field)?;
            // Validate every coordinate against the base spec.
            for &v in &values {
                let mut probe = raw.game.clone();
                probe.set(field, v)?;
            }
            sweep.push((field.clone(), values));
        }
        let learning = match (&raw.learning, raw.modes.contains(&RunMode::Bu)) {
            (Some(l), _) => Some(l.clone()),
            (None, true) => Some(LearningSpec::default()),
            (None, false) => None,
        };
        if let Some(l) = &learning {
            l.config(0).validate()?;
        }
        Ok(ExperimentSpec {
            game_spec: raw.game,
            game,
            geometry,
            learning,
            sweep,
            seeds: raw.seeds,
            modes: raw.modes,
            output_path: raw.output_path.map(PathBuf::from),
            format: raw.format.unwrap_or_default(),
        })
    }

    /// Every sweep point as `(coordinates, resolved game spec)`, in lexicographic order.
    pub fn points(&self) -> Result<Vec<(Vec<(String, f64)>, GameSpec)>> {
        let mut points = vec![(Vec::new(), self.game_spec.clone())];
        for (field, values) in &self.sweep {
            let mut next = Vec::with_capacity(points.len() * values.len());
            for (coords, spec) in &points {
                for &v in values {
                    let mut s = spec.clone();
                    s.set(field, v)?;
                    let mut c = coords.clone();
                    c.push((field.clone(), v));
                    next.push((c, s));
                }
            }
            points = next;
        }
        Ok(points)
    }
}

/// Reads and validates a spec file. An empty file yields the default experiment.
pub fn load_spec(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    ExperimentSpec::parse(&text).map_err(|e| match e {
        Error::Spec { location, message } => Error::Spec {
            location: Some(match location {
                Some(l) => format!("{}:{l}", path.display()),
                None => path.display().to_string(),
            }),
            message,
        },
        other => other,
    })
}
