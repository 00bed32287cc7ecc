//! Two-by-two stage games with continuation values folded in.
//!
//! Indexing follows `[soldier action][attacker action]` with index 0 for
//! connect/jam and 1 for skip/idle, so `soldier[0][1]` is π₁₂.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{FeasibleActions, MixedAction};

const BISECTION_TOL: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;
const BR_TOL: f64 = 1e-12;

type Matrix = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StagePayoffs {
    pub soldier: Matrix,
    pub attacker: Matrix,
}

/// Which actions each player may use at a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub soldier: [bool; 2],
    pub attacker: [bool; 2],
}

impl Support {
    pub const FULL: Support = Support {
        soldier: [true, true],
        attacker: [true, true],
    };

    pub fn from_feasible(f: &FeasibleActions) -> Self {
        Support {
            soldier: [f.can_connect(), f.can_skip()],
            attacker: [f.can_jam(), f.can_idle()],
        }
    }

    pub fn soldier_actions(&self) -> Vec<usize> {
        (0..2).filter(|&i| self.soldier[i]).collect()
    }

    pub fn attacker_actions(&self) -> Vec<usize> {
        (0..2).filter(|&i| self.attacker[i]).collect()
    }

    pub fn is_full(&self) -> bool {
        *self == Support::FULL
    }
}

impl StagePayoffs {
    pub fn new(soldier: Matrix, attacker: Matrix) -> Self {
        StagePayoffs { soldier, attacker }
    }

    pub fn is_finite(&self) -> bool {
        self.soldier
            .iter()
            .chain(&self.attacker)
            .flatten()
            .all(|v| v.is_finite())
    }

    /// π₁₂ > π₂₂ ≥ π₁₁, π₂₁ > π₂₂, π′₁₁ ≥ π′₂₂ > π′₁₂, π′₂₂ > π′₂₁.
    pub fn is_regular(&self) -> bool {
        let p = &self.soldier;
        let q = &self.attacker;
        p[0][1] > p[1][1]
            && p[1][1] >= p[0][0]
            && p[1][0] > p[1][1]
            && q[0][0] >= q[1][1]
            && q[1][1] > q[0][1]
            && q[1][1] > q[1][0]
    }

    /// `D = π₁₂ + π₂₁ − π₁₁ − π₂₂`.
    pub fn d(&self) -> f64 {
        let p = &self.soldier;
        p[0][1] + p[1][0] - p[0][0] - p[1][1]
    }

    /// `D′ = π′₁₁ + π′₂₂ − π′₁₂ − π′₂₁`.
    pub fn d_prime(&self) -> f64 {
        let q = &self.attacker;
        q[0][0] + q[1][1] - q[0][1] - q[1][0]
    }

    /// Coefficients `[F₁, F₂, F₃, F₄]` of the attacker-indifference curve.
    pub fn attacker_curve_coefficients(&self, omega_a: f64) -> [f64; 4] {
        let p = &self.soldier;
        let q = &self.attacker;
        [
            omega_a * (p[1][0] + p[0][0] - p[0][1] - p[1][1]),
            self.d_prime() + omega_a * (p[0][1] - p[0][0]),
            omega_a * (p[1][0] - p[1][1]),
            q[1][1] - q[1][0],
        ]
    }

    /// Coefficients `[F′₁, F′₂, F′₃, F′₄]` of the soldier-indifference curve.
    pub fn soldier_curve_coefficients(&self, omega_s: f64) -> [f64; 4] {
        let p = &self.soldier;
        let q = &self.attacker;
        [
            omega_s * (q[0][1] + q[0][0] - q[1][0] - q[1][1]),
            omega_s * (q[1][1] - q[0][1]),
            -self.d() - omega_s * (q[1][1] - q[0][1]),
            p[0][1] - p[1][1] + omega_s * (q[1][1] - q[0][1]),
        ]
    }

    /// Soldier stage payoffs when the attacker believes the soldier connects with `alpha`.
    pub fn soldier_psych(&self, alpha: f64, omega_s: f64) -> Matrix {
        let p = &self.soldier;
        let q = &self.attacker;
        [
            [
                p[0][0],
                p[0][1] + omega_s * (1.0 - alpha) * (q[1][1] - q[0][1]),
            ],
            [p[1][0] + omega_s * alpha * (q[0][0] - q[1][0]), p[1][1]],
        ]
    }

    /// Attacker stage payoffs when the soldier believes the attacker jams with `beta`.
    pub fn attacker_psych(&self, beta: f64, omega_a: f64) -> Matrix {
        let p = &self.soldier;
        let q = &self.attacker;
        [
            [
                q[0][0] + omega_a * (1.0 - beta) * (p[0][1] - p[0][0]),
                q[0][1],
            ],
            [q[1][0], q[1][1] + omega_a * beta * (p[1][0] - p[1][1])],
        ]
    }

    /// Connect minus skip, for the soldier, at mixes `(alpha, beta)`.
    pub fn soldier_gap(&self, alpha: f64, beta: f64, omega_s: f64) -> f64 {
        let s = self.soldier_psych(alpha, omega_s);
        beta * (s[0][0] - s[1][0]) + (1.0 - beta) * (s[0][1] - s[1][1])
    }

    /// Jam minus idle, for the attacker, at mixes `(alpha, beta)`.
    pub fn attacker_gap(&self, alpha: f64, beta: f64, omega_a: f64) -> f64 {
        let a = self.attacker_psych(beta, omega_a);
        alpha * (a[0][0] - a[0][1]) + (1.0 - alpha) * (a[1][0] - a[1][1])
    }

    /// Expected stage values `(soldier, attacker)` at mixes `(alpha, beta)`.
    pub fn values(&self, alpha: f64, beta: f64, omega_s: f64, omega_a: f64) -> (f64, f64) {
        let s = self.soldier_psych(alpha, omega_s);
        let a = self.attacker_psych(beta, omega_a);
        let pa = [alpha, 1.0 - alpha];
        let pb = [beta, 1.0 - beta];
        let mut vs = 0.0;
        let mut va = 0.0;
        for n in 0..2 {
            for m in 0..2 {
                let w = pa[n] * pb[m];
                if w != 0.0 {
                    vs += w * s[n][m];
                    va += w * a[n][m];
                }
            }
        }
        (vs, va)
    }
}

/// `α′ = (F₃β′ + F₄)/(F₁β′ + F₂)`: the soldier mix that leaves the attacker indifferent.
pub fn curve_alpha_of_beta(payoffs: &StagePayoffs, omega_a: f64, beta: f64) -> Result<f64> {
    let [f1, f2, f3, f4] = payoffs.attacker_curve_coefficients(omega_a);
    let den = f1 * beta + f2;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Singular { beta });
    }
    Ok((f3 * beta + f4) / den)
}

/// `α′ = (F′₃β′ + F′₄)/(F′₁β′ + F′₂)`: the soldier mix at which the soldier is indifferent.
pub fn curve_alpha_of_beta_soldier(payoffs: &StagePayoffs, omega_s: f64, beta: f64) -> Result<f64> {
    let [f1, f2, f3, f4] = payoffs.soldier_curve_coefficients(omega_s);
    let den = f1 * beta + f2;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Singular { beta });
    }
    Ok((f3 * beta + f4) / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    InteriorMixed,
    /// One player mixes while the other plays a pure action.
    PartiallyMixed,
    Pure,
    /// At least one player has a single feasible action.
    Forced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageDiagnostics {
    /// For a mixing player the absolute payoff gap between its two actions;
    /// for a pure player the gain from switching, floored at zero.
    pub soldier_residual: f64,
    pub attacker_residual: f64,
    pub regular: bool,
    pub bisection_iterations: usize,
    pub used_fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageEquilibrium {
    pub soldier_mix: MixedAction,
    pub attacker_mix: MixedAction,
    pub soldier_value: f64,
    pub attacker_value: f64,
    pub kind: StageKind,
    pub diagnostics: StageDiagnostics,
}

pub(crate) fn residual_pair(
    payoffs: &StagePayoffs,
    support: Support,
    alpha: f64,
    beta: f64,
    omega_s: f64,
    omega_a: f64,
) -> (f64, f64) {
    let gs = payoffs.soldier_gap(alpha, beta, omega_s);
    let ga = payoffs.attacker_gap(alpha, beta, omega_a);
    let rs = if !(support.soldier[0] && support.soldier[1]) {
        0.0
    } else if alpha > 0.0 && alpha < 1.0 {
        gs.abs()
    } else if alpha == 1.0 {
        (-gs).max(0.0)
    } else {
        gs.max(0.0)
    };
    let ra = if !(support.attacker[0] && support.attacker[1]) {
        0.0
    } else if beta > 0.0 && beta < 1.0 {
        ga.abs()
    } else if beta == 1.0 {
        (-ga).max(0.0)
    } else {
        ga.max(0.0)
    };
    (rs, ra)
}

fn finish(
    payoffs: &StagePayoffs,
    support: Support,
    alpha: f64,
    beta: f64,
    omega_s: f64,
    omega_a: f64,
    iterations: usize,
    used_fallback: bool,
) -> StageEquilibrium {
    let (soldier_value, attacker_value) = payoffs.values(alpha, beta, omega_s, omega_a);
    let (soldier_residual, attacker_residual) =
        residual_pair(payoffs, support, alpha, beta, omega_s, omega_a);
    let interior = |p: f64| p > 0.0 && p < 1.0;
    let kind = if !support.is_full() {
        StageKind::Forced
    } else if interior(alpha) && interior(beta) {
        StageKind::InteriorMixed
    } else if interior(alpha) || interior(beta) {
        StageKind::PartiallyMixed
    } else {
        StageKind::Pure
    };
    StageEquilibrium {
        soldier_mix: MixedAction::clamped(alpha),
        attacker_mix: MixedAction::clamped(beta),
        soldier_value,
        attacker_value,
        kind,
        diagnostics: StageDiagnostics {
            soldier_residual,
            attacker_residual,
            regular: payoffs.is_regular(),
            bisection_iterations: iterations,
            used_fallback,
        },
    }
}

/// Nash equilibrium of a stage with both actions available to both players.
pub fn solve_stage_ne(payoffs: &StagePayoffs) -> Result<StageEquilibrium> {
    solve_stage_ne_with(payoffs, Support::FULL)
}

pub fn solve_stage_ne_with(payoffs: &StagePayoffs, support: Support) -> Result<StageEquilibrium> {
    check_input(payoffs, support)?;
    if support.is_full() && payoffs.is_regular() {
        let p = &payoffs.soldier;
        let q = &payoffs.attacker;
        let alpha = (q[1][1] - q[1][0]) / payoffs.d_prime();
        let beta = (p[1][1] - p[0][1]) / (p[0][0] + p[1][1] - p[0][1] - p[1][0]);
        return Ok(finish(payoffs, support, alpha, beta, 0.0, 0.0, 0, false));
    }
    fallback(payoffs, support, 0.0, 0.0)
}

/// Psychological equilibrium of a stage with both actions available to both players.
pub fn solve_stage_pe(
    payoffs: &StagePayoffs,
    omega_s: f64,
    omega_a: f64,
) -> Result<StageEquilibrium> {
    solve_stage_pe_with(payoffs, omega_s, omega_a, Support::FULL)
}

pub fn solve_stage_pe_with(
    payoffs: &StagePayoffs,
    omega_s: f64,
    omega_a: f64,
    support: Support,
) -> Result<StageEquilibrium> {
    check_input(payoffs, support)?;
    for (name, w) in [("omega_s", omega_s), ("omega_a", omega_a)] {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::invalid(
                if name == "omega_s" {
                    "soldier_frustration_weight"
                } else {
                    "attacker_frustration_weight"
                },
                format!("must lie in [0, 1], got {w}"),
            ));
        }
    }
    if omega_s == 0.0 && omega_a == 0.0 {
        return solve_stage_ne_with(payoffs, support);
    }
    if !(support.is_full() && payoffs.is_regular()) {
        return fallback(payoffs, support, omega_s, omega_a);
    }
    if omega_s == 0.0 {
        // The soldier's indifference no longer involves α′, so β′ is the NE mix.
        let p = &payoffs.soldier;
        let beta = (p[1][1] - p[0][1]) / (p[0][0] + p[1][1] - p[0][1] - p[1][0]);
        let alpha = curve_alpha_of_beta(payoffs, omega_a, beta)?;
        return Ok(finish(
            payoffs, support, alpha, beta, omega_s, omega_a, 0, false,
        ));
    }
    let h = |beta: f64| -> Result<f64> {
        let alpha = curve_alpha_of_beta(payoffs, omega_a, beta)?;
        Ok(payoffs.soldier_gap(alpha, beta, omega_s))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let h_lo = h(lo)?;
    let h_hi = h(hi)?;
    if !(h_lo > 0.0 && h_hi < 0.0) {
        return fallback(payoffs, support, omega_s, omega_a);
    }
    let mut iterations = 0;
    while hi - lo > BISECTION_TOL {
        if iterations >= BISECTION_MAX_ITER {
            return Err(Error::SolverFailure {
                state: None,
                reason: format!("bisection stalled on [{lo}, {hi}]"),
            });
        }
        let mid = 0.5 * (lo + hi);
        let v = h(mid)?;
        if v == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let beta = 0.5 * (lo + hi);
    let alpha = curve_alpha_of_beta(payoffs, omega_a, beta)?;
    Ok(finish(
        payoffs, support, alpha, beta, omega_s, omega_a, iterations, false,
    ))
}

fn check_input(payoffs: &StagePayoffs, support: Support) -> Result<()> {
    if !payoffs.is_finite() {
        return Err(Error::domain("stage payoffs must be finite"));
    }
    if !(support.soldier.iter().any(|&b| b) && support.attacker.iter().any(|&b| b)) {
        return Err(Error::domain(
            "each player needs at least one feasible action",
        ));
    }
    Ok(())
}

/// Root in (0, 1) of a function that is affine on [0, 1], given its endpoint values.
fn affine_root(g0: f64, g1: f64) -> Option<f64> {
    if (g0 > 0.0 && g1 < 0.0) || (g0 < 0.0 && g1 > 0.0) {
        let r = g0 / (g0 - g1);
        (r > 0.0 && r < 1.0).then_some(r)
    } else {
        None
    }
}

/// Exhaustive equilibrium search: pure cells, then one-sided mixing, then full mixing.
fn fallback(
    payoffs: &StagePayoffs,
    support: Support,
    omega_s: f64,
    omega_a: f64,
) -> Result<StageEquilibrium> {
    let sa = support.soldier_actions();
    let ba = support.attacker_actions();
    let pure = |i: usize| if i == 0 { 1.0 } else { 0.0 };
    let soldier_ok = |alpha: f64, beta: f64| -> bool {
        if sa.len() < 2 {
            return true;
        }
        let g = payoffs.soldier_gap(alpha, beta, omega_s);
        if alpha == 1.0 {
            g >= -BR_TOL
        } else if alpha == 0.0 {
            g <= BR_TOL
        } else {
            g.abs() <= 1e-9
        }
    };
    let attacker_ok = |alpha: f64, beta: f64| -> bool {
        if ba.len() < 2 {
            return true;
        }
        let g = payoffs.attacker_gap(alpha, beta, omega_a);
        if beta == 1.0 {
            g >= -BR_TOL
        } else if beta == 0.0 {
            g <= BR_TOL
        } else {
            g.abs() <= 1e-9
        }
    };

    for &n in &sa {
        for &m in &ba {
            let (alpha, beta) = (pure(n), pure(m));
            if soldier_ok(alpha, beta) && attacker_ok(alpha, beta) {
                return Ok(finish(
                    payoffs, support, alpha, beta, omega_s, omega_a, 0, true,
                ));
            }
        }
    }

    if ba.len() == 2 {
        for &n in &sa {
            let alpha = pure(n);
            let g0 = payoffs.attacker_gap(alpha, 0.0, omega_a);
            let g1 = payoffs.attacker_gap(alpha, 1.0, omega_a);
            if let Some(beta) = affine_root(g0, g1) {
                if soldier_ok(alpha, beta) {
                    return Ok(finish(
                        payoffs, support, alpha, beta, omega_s, omega_a, 0, true,
                    ));
                }
            }
        }
    }
    if sa.len() == 2 {
        for &m in &ba {
            let beta = pure(m);
            let g0 = payoffs.soldier_gap(0.0, beta, omega_s);
            let g1 = payoffs.soldier_gap(1.0, beta, omega_s);
            if let Some(alpha) = affine_root(g0, g1) {
                if attacker_ok(alpha, beta) {
                    return Ok(finish(
                        payoffs, support, alpha, beta, omega_s, omega_a, 0, true,
                    ));
                }
            }
        }
    }

    if sa.len() == 2 && ba.len() == 2 {
        if let Some((alpha, beta)) = full_mix(payoffs, omega_s, omega_a) {
            return Ok(finish(
                payoffs, support, alpha, beta, omega_s, omega_a, 0, true,
            ));
        }
    }

    Err(Error::SolverFailure {
        state: None,
        reason: "no stage equilibrium found".into(),
    })
}

/// Bilinear coefficients `[c₀, c_α, c_β, c_αβ]` from corner values.
fn bilinear(f: impl Fn(f64, f64) -> f64) -> [f64; 4] {
    let c0 = f(0.0, 0.0);
    let ca = f(1.0, 0.0) - c0;
    let cb = f(0.0, 1.0) - c0;
    let cab = f(1.0, 1.0) - c0 - ca - cb;
    [c0, ca, cb, cab]
}

/// Both players indifferent: solves the pair of bilinear equations exactly.
fn full_mix(payoffs: &StagePayoffs, omega_s: f64, omega_a: f64) -> Option<(f64, f64)> {
    let [s0, s1, s2, s3] = bilinear(|a, b| payoffs.soldier_gap(a, b, omega_s));
    let [a0, a1, a2, a3] = bilinear(|a, b| payoffs.attacker_gap(a, b, omega_a));
    // Attacker indifference: α(a₁ + a₃β) = −(a₀ + a₂β).
    let alpha_of = |beta: f64| -> Option<f64> {
        let den = a1 + a3 * beta;
        if den == 0.0 {
            return None;
        }
        let alpha = -(a0 + a2 * beta) / den;
        (alpha > 0.0 && alpha < 1.0).then_some(alpha)
    };
    let c2 = s2 * a3 - s3 * a2;
    let c1 = s0 * a3 + s2 * a1 - s1 * a2 - s3 * a0;
    let c0 = s0 * a1 - s1 * a0;
    let scale = c0.abs().max(c1.abs()).max(c2.abs());
    let mut roots = Vec::new();
    if scale == 0.0 {
        roots.push(0.5);
    } else if c2.abs() <= 1e-14 * scale {
        if c1 != 0.0 {
            roots.push(-c0 / c1);
        }
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Numerically stable pair of roots.
            let qv = -0.5 * (c1 + c1.signum() * sq);
            if qv != 0.0 {
                roots.push(qv / c2);
                roots.push(c0 / qv);
            } else {
                roots.push(-c1 / (2.0 * c2));
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    for beta in roots {
        if beta > 0.0 && beta < 1.0 {
            if let Some(alpha) = alpha_of(beta) {
                let gs = payoffs.soldier_gap(alpha, beta, omega_s);
                let ga = payoffs.attacker_gap(alpha, beta, omega_a);
                if gs.abs() <= 1e-9 && ga.abs() <= 1e-9 {
                    return Some((alpha, beta));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A regular stage: π₁₂ > π₂₂ ≥ π₁₁, π₂₁ > π₂₂, π′₁₁ ≥ π′₂₂ > π′₁₂, π′₂₂ > π′₂₁.
    pub(crate) fn regular() -> StagePayoffs {
        StagePayoffs::new([[0.2, 0.9], [0.8, 0.5]], [[0.7, 0.1], [0.3, 0.6]])
    }

    #[test]
    fn matching_pennies_shape() {
        // Soldier [[0,1],[1,0]] is regular once π₂₂ ≥ π₁₁ holds with equality.
        let p = StagePayoffs::new([[0.0, 1.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]);
        assert!(p.is_regular());
        let e = solve_stage_ne(&p).unwrap();
        assert_eq!(e.soldier_mix.p_first, 0.5);
        assert_eq!(e.attacker_mix.p_first, 0.5);
        assert_eq!(e.kind, StageKind::InteriorMixed);
    }

    #[test]
    fn symmetric_soldier_gaps_give_half() {
        // π₂₂ − π₁₂ = π₁₁ − π₂₁.
        let p = StagePayoffs::new([[0.2, 0.9], [0.9, 0.2]], [[0.7, 0.1], [0.3, 0.6]]);
        assert!(p.is_regular());
        let e = solve_stage_ne(&p).unwrap();
        assert!((e.attacker_mix.p_first - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ne_indifference() {
        let p = regular();
        let e = solve_stage_ne(&p).unwrap();
        let (a, b) = (e.soldier_mix.p_first, e.attacker_mix.p_first);
        assert!(p.soldier_gap(a, b, 0.0).abs() < 1e-12);
        assert!(p.attacker_gap(a, b, 0.0).abs() < 1e-12);
        assert!(e.diagnostics.soldier_residual < 1e-10);
    }

    #[test]
    fn pe_collapses_to_ne() {
        let p = regular();
        assert_eq!(
            solve_stage_pe(&p, 0.0, 0.0).unwrap(),
            solve_stage_ne(&p).unwrap()
        );
        let ne = solve_stage_ne(&p).unwrap();
        let pe = solve_stage_pe(&p, 0.0, 0.7).unwrap();
        assert_eq!(pe.attacker_mix, ne.attacker_mix);
    }

    #[test]
    fn pe_indifference() {
        let p = regular();
        let e = solve_stage_pe(&p, 0.5, 0.5).unwrap();
        let (a, b) = (e.soldier_mix.p_first, e.attacker_mix.p_first);
        assert_eq!(e.kind, StageKind::InteriorMixed);
        assert!(p.soldier_gap(a, b, 0.5).abs() < 1e-9);
        assert!(p.attacker_gap(a, b, 0.5).abs() < 1e-12);
        assert!(e.diagnostics.bisection_iterations > 10);
    }

    #[test]
    fn attacker_curve_at_zero_weight_is_ne_alpha() {
        let p = regular();
        let ne = solve_stage_ne(&p).unwrap();
        for b in [0.0, 0.3, 1.0] {
            let a = curve_alpha_of_beta(&p, 0.0, b).unwrap();
            assert!((a - ne.soldier_mix.p_first).abs() < 1e-15);
        }
        let [_, f2, _, f4] = p.attacker_curve_coefficients(0.4);
        assert_eq!(curve_alpha_of_beta(&p, 0.4, 0.0).unwrap(), f4 / f2);
    }

    #[test]
    fn soldier_curve_endpoints() {
        let p = regular();
        let w = 0.6;
        let (s, q) = (&p.soldier, &p.attacker);
        let at0 = 1.0 + (s[0][1] - s[1][1]) / (w * (q[1][1] - q[0][1]));
        let at1 = (s[0][0] - s[1][0]) / (w * (q[0][0] - q[1][0]));
        assert!((curve_alpha_of_beta_soldier(&p, w, 0.0).unwrap() - at0).abs() < 1e-12);
        assert!((curve_alpha_of_beta_soldier(&p, w, 1.0).unwrap() - at1).abs() < 1e-12);
    }

    #[test]
    fn soldier_curve_is_singular_without_weight() {
        assert!(matches!(
            curve_alpha_of_beta_soldier(&regular(), 0.0, 0.5),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn curves_solve_the_indifference_conditions() {
        let p = regular();
        for b in [0.1, 0.5, 0.9] {
            let a = curve_alpha_of_beta(&p, 0.3, b).unwrap();
            assert!(p.attacker_gap(a, b, 0.3).abs() < 1e-12);
            let a = curve_alpha_of_beta_soldier(&p, 0.3, b).unwrap();
            assert!(p.soldier_gap(a, b, 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn dominant_strategy_gives_pure_cell() {
        // Connect strictly dominates; attacker prefers idle against connect.
        let p = StagePayoffs::new([[0.9, 1.0], [0.1, 0.2]], [[0.1, 0.3], [0.5, 0.4]]);
        let e = solve_stage_ne(&p).unwrap();
        assert_eq!((e.soldier_mix.p_first, e.attacker_mix.p_first), (1.0, 0.0));
        assert_eq!(e.kind, StageKind::Pure);
        assert!(e.diagnostics.used_fallback);
    }

    #[test]
    fn ties_break_toward_connect_and_jam() {
        let p = StagePayoffs::new([[0.5; 2]; 2], [[0.5; 2]; 2]);
        let e = solve_stage_ne(&p).unwrap();
        assert_eq!((e.soldier_mix.p_first, e.attacker_mix.p_first), (1.0, 1.0));
    }

    #[test]
    fn forced_soldier_attacker_optimizes() {
        let p = regular();
        let support = Support {
            soldier: [true, false],
            attacker: [true, true],
        };
        let e = solve_stage_ne_with(&p, support).unwrap();
        assert_eq!(e.kind, StageKind::Forced);
        assert_eq!(e.soldier_mix.p_first, 1.0);
        // π′₁₁ = 0.7 > π′₁₂ = 0.1.
        assert_eq!(e.attacker_mix.p_first, 1.0);
        assert_eq!(e.attacker_value, 0.7);
    }

    #[test]
    fn one_sided_mixing_under_own_belief_dependence() {
        // Soldier forced to connect; attacker payoffs depend on its own mix.
        // Jam minus idle at α = 1 is π′₁₁ + ω(1−β)(π₁₂ − π₁₁) − π′₁₂.
        let p = StagePayoffs::new([[0.0, 1.0], [0.0, 0.0]], [[-0.2, 0.0], [0.0, 0.0]]);
        let support = Support {
            soldier: [true, false],
            attacker: [true, true],
        };
        let e = solve_stage_pe_with(&p, 0.5, 0.5, support).unwrap();
        // Pure jam: gap at β = 1 is −0.2 < 0, pure idle: gap at β = 0 is 0.3 > 0, so mixing at β = 0.6.
        assert!((e.attacker_mix.p_first - 0.6).abs() < 1e-12);
        assert!(e.diagnostics.attacker_residual < 1e-12);
    }

    #[test]
    fn full_mix_fallback_on_irregular_stage() {
        // Matching-pennies payoffs whose signs break regularity (π₂₂ < π₁₁).
        let p = StagePayoffs::new([[0.1, 1.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]);
        assert!(!p.is_regular());
        let e = solve_stage_pe(&p, 0.4, 0.3).unwrap();
        assert_eq!(e.kind, StageKind::InteriorMixed);
        assert!(e.diagnostics.used_fallback);
        let (a, b) = (e.soldier_mix.p_first, e.attacker_mix.p_first);
        assert!(p.soldier_gap(a, b, 0.4).abs() < 1e-9);
        assert!(p.attacker_gap(a, b, 0.3).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_finite() {
        let p = StagePayoffs::new([[f64::NAN, 0.0], [0.0, 0.0]], [[0.0; 2]; 2]);
        assert!(solve_stage_ne(&p).is_err());
    }
}
