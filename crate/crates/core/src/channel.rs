//! Downlink SINR model under Rayleigh fading with an optional jammer.
//!
//! Fading gains `g_s` (soldier link) and `g_a` (jammer link) are modelled as
//! exponentially distributed power gains, the power-domain view of a Rayleigh
//! amplitude. The success probability `q_x = P(SINR ≥ γ̂)` reduces to two
//! constants of the link budget:
//!
//! ```text
//! V = γ̂ σ² / (d_s^-λ P_S)            W = d_a^-λ P_A γ̂ / (d_s^-λ P_S)
//! unjammed:  q = P(g_s > V)
//! jammed:    q = P(g_s > V + W g_a)
//! ```
//!
//! For unit-mean exponential gains these are `e^-V` and `e^-V / (1 + W)`.
//! Both are also available through direct adaptive quadrature of the density,
//! which is what the closed forms are tested against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadOptions};

/// Converts a power in dBm to linear milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FadingModel {
    /// Exponential power gain with the given mean.
    ExponentialPowerGain { mean: f64 },
}

impl Default for FadingModel {
    fn default() -> Self {
        FadingModel::ExponentialPowerGain { mean: 1.0 }
    }
}

impl FadingModel {
    pub fn exponential(mean: f64) -> Result<Self> {
        let model = FadingModel::ExponentialPowerGain { mean };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingModel::ExponentialPowerGain { mean } => {
                if !(mean.is_finite() && mean > 0.0) {
                    return Err(Error::invalid(
                        "fading.mean",
                        format!("must be positive, got {mean}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn density(&self, g: f64) -> f64 {
        match *self {
            FadingModel::ExponentialPowerGain { mean } => {
                if g < 0.0 {
                    0.0
                } else {
                    (-g / mean).exp() / mean
                }
            }
        }
    }
}

/// Per-device radio parameters. All powers are linear milliwatts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub soldier_tx_power_mw: f64,
    pub jammer_tx_power_mw: f64,
    pub soldier_distance_m: f64,
    pub jammer_distance_m: f64,
    pub pathloss_exponent: f64,
    pub noise_power_mw: f64,
    /// SINR decoding threshold γ̂ (linear).
    pub sinr_threshold: f64,
    /// Target cumulative success probability q̂.
    pub success_target: f64,
    pub max_retransmissions: u32,
    pub block_size_bits: f64,
    pub bandwidth_hz: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("soldier_tx_power_mw", self.soldier_tx_power_mw),
            ("jammer_tx_power_mw", self.jammer_tx_power_mw),
            ("soldier_distance_m", self.soldier_distance_m),
            ("jammer_distance_m", self.jammer_distance_m),
            ("noise_power_mw", self.noise_power_mw),
            ("sinr_threshold", self.sinr_threshold),
            ("block_size_bits", self.block_size_bits),
            ("bandwidth_hz", self.bandwidth_hz),
        ];
        for (field, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    field,
                    format!("must be positive, got {value}"),
                ));
            }
        }
        if !(self.pathloss_exponent >= 2.0 && self.pathloss_exponent.is_finite()) {
            return Err(Error::invalid(
                "pathloss_exponent",
                format!("must be at least 2, got {}", self.pathloss_exponent),
            ));
        }
        if !(self.success_target > 0.0 && self.success_target < 1.0) {
            return Err(Error::invalid(
                "success_target",
                format!("must lie in (0, 1), got {}", self.success_target),
            ));
        }
        if self.max_retransmissions == 0 {
            return Err(Error::invalid("max_retransmissions", "must be at least 1"));
        }
        Ok(())
    }

    /// Returns `(V, W)`.
    pub fn derived_constants(&self) -> (f64, f64) {
        let received =
            self.soldier_distance_m.powf(-self.pathloss_exponent) * self.soldier_tx_power_mw;
        let v = self.sinr_threshold * self.noise_power_mw / received;
        let w = self.jammer_distance_m.powf(-self.pathloss_exponent)
            * self.jammer_tx_power_mw
            * self.sinr_threshold
            / received;
        (v, w)
    }

    /// Average duration of one successful block transmission, with the rate
    /// evaluated at the decoding threshold γ̂.
    pub fn unit_delay(&self) -> Result<f64> {
        let spectral = (1.0 + self.sinr_threshold).log2();
        if !(spectral > 0.0) || !(self.bandwidth_hz > 0.0) {
            return Err(Error::invalid("sinr_threshold", "zero decoding rate"));
        }
        Ok(self.block_size_bits / (self.bandwidth_hz * spectral))
    }
}

/// Closed form of the success probability in terms of the reduced constants.
pub fn success_probability_vw(v: f64, w: f64, fading: &FadingModel, jammed: bool) -> f64 {
    match *fading {
        FadingModel::ExponentialPowerGain { mean } => {
            let unjammed = (-v / mean).exp();
            if jammed {
                unjammed / (1.0 + w)
            } else {
                unjammed
            }
        }
    }
}

/// Success probability by adaptive quadrature of the fading densities.
///
/// The jammed case evaluates the double integral
/// `∫_V^∞ f(g_s) ∫_0^{(g_s − V)/W} f(g_a) dg_a dg_s` with both levels
/// integrated numerically.
pub fn success_probability_quadrature_vw(
    v: f64,
    w: f64,
    fading: &FadingModel,
    jammed: bool,
) -> Result<f64> {
    let outer_opts = QuadOptions::default();
    let inner_opts = QuadOptions {
        abs_tol: 1e-13,
        ..QuadOptions::default()
    };
    if !jammed {
        return Ok(quadrature::integrate_to_infinity(|g| fading.density(g), v, &outer_opts)?.value);
    }
    if w == 0.0 {
        let mass =
            quadrature::integrate_to_infinity(|g| fading.density(g), 0.0, &inner_opts)?.value;
        let tail = quadrature::integrate_to_infinity(|g| fading.density(g), v, &outer_opts)?.value;
        return Ok(mass * tail);
    }
    let mut inner_failure = None;
    let outer = quadrature::integrate_to_infinity(
        |gs| {
            let upper = (gs - v) / w;
            if upper <= 0.0 {
                return 0.0;
            }
            let inner = if upper.is_finite() {
                quadrature::integrate(|ga| fading.density(ga), 0.0, upper, &inner_opts)
            } else {
                quadrature::integrate_to_infinity(|ga| fading.density(ga), 0.0, &inner_opts)
            };
            match inner {
                Ok(r) => fading.density(gs) * r.value,
                Err(e) => {
                    inner_failure.get_or_insert(e);
                    0.0
                }
            }
        },
        v,
        &outer_opts,
    )?;
    if let Some(e) = inner_failure {
        return Err(e);
    }
    Ok(outer.value)
}

pub fn success_probability(link: &LinkBudget, fading: &FadingModel, jammed: bool) -> f64 {
    let (v, w) = link.derived_constants();
    success_probability_vw(v, w, fading, jammed)
}

pub fn success_probability_quadrature(
    link: &LinkBudget,
    fading: &FadingModel,
    jammed: bool,
) -> Result<f64> {
    let (v, w) = link.derived_constants();
    success_probability_quadrature_vw(v, w, fading, jammed)
}

/// Number of transmission attempts needed so that `(1 − q)^k ≤ 1 − q̂`, capped at `k̂`.
///
/// `q ≥ 1` needs a single attempt; `q ≤ 0` never meets the target and returns `k̂`.
pub fn retransmission_count(q: f64, success_target: f64, max_retransmissions: u32) -> u32 {
    if q >= 1.0 {
        return 1;
    }
    if q <= 0.0 || q.is_nan() {
        return max_retransmissions;
    }
    let needed = ((1.0 - success_target).ln() / (1.0 - q).ln()).ceil();
    if needed >= max_retransmissions as f64 {
        max_retransmissions
    } else {
        (needed as u32).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageChannelOutcome {
    pub success_prob: f64,
    pub retransmissions: u32,
    pub unit_delay_s: f64,
    pub stage_delay_s: f64,
}

pub fn stage_outcome(
    link: &LinkBudget,
    fading: &FadingModel,
    soldier_connects: bool,
    attacker_jams: bool,
) -> Result<StageChannelOutcome> {
    let success_prob = success_probability(link, fading, attacker_jams);
    let retransmissions =
        retransmission_count(success_prob, link.success_target, link.max_retransmissions);
    let unit_delay_s = link.unit_delay()?;
    let stage_delay_s = if soldier_connects {
        retransmissions as f64 * unit_delay_s
    } else {
        0.0
    };
    Ok(StageChannelOutcome {
        success_prob,
        retransmissions,
        unit_delay_s,
        stage_delay_s,
    })
}

/// Delay incurred at one step. Skipping the device costs nothing.
pub fn stage_delay(
    link: &LinkBudget,
    fading: &FadingModel,
    soldier_connects: bool,
    attacker_jams: bool,
) -> Result<f64> {
    Ok(stage_outcome(link, fading, soldier_connects, attacker_jams)?.stage_delay_s)
}

/// Connection delays of one device with and without jamming.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceDelays {
    pub unjammed_s: f64,
    pub jammed_s: f64,
}

impl DeviceDelays {
    pub fn for_link(link: &LinkBudget, fading: &FadingModel) -> Result<Self> {
        Ok(DeviceDelays {
            unjammed_s: stage_delay(link, fading, true, false)?,
            jammed_s: stage_delay(link, fading, true, true)?,
        })
    }
}
