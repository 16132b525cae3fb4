//! Extremal temperatures to which a resource can cool or heat a system that
//! starts in equilibrium, and the maximal achievable ground-state overlap.
//!
//! Cooling to `β̃ ≥ β` is possible iff for every `k < n` the mass of the `k`
//! lowest levels at `β̃` stays below `α_k`, the resource boundary evaluated at the
//! same mass at `β`. Each condition is monotone in `β̃`, so its extremal value is
//! found by bisection; the overall bound is the tightest condition. Heating is
//! the mirror image with the mass of the `k` highest levels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::majorization::{compute_elbows, TestingBoundary};
use crate::roots::solve_from;
use crate::thermo::{gibbs_vector, logistic};
use crate::types::{AthermalityState, ExtendedBeta, GibbsContext};

/// Distance to the `β̃ → ±∞` limit below which a condition is declared unbounded.
pub const INFINITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingCondition {
    pub k: usize,
    pub beta_k: ExtendedBeta,
    pub alpha_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingReport {
    pub beta_max: ExtendedBeta,
    pub per_condition: Vec<CoolingCondition>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatingCondition {
    pub k: usize,
    pub beta_k: ExtendedBeta,
    pub alpha_tilde_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatingReport {
    pub beta_min: ExtendedBeta,
    pub per_condition: Vec<HeatingCondition>,
}

/// Mass of the first `k` levels of the sorted Gibbs vector at `beta`.
pub fn lower_mass(energies: &[f64], beta: f64, k: usize) -> f64 {
    let g = gibbs_vector(energies, beta).expect("finite beta");
    g.as_slice()[..k].iter().sum()
}

/// Mass of the last `k` levels of the sorted Gibbs vector at `beta`.
pub fn upper_mass(energies: &[f64], beta: f64, k: usize) -> f64 {
    let g = gibbs_vector(energies, beta).expect("finite beta");
    g.as_slice()[g.len() - k..].iter().sum()
}

fn check_target(target: &GibbsContext) -> Result<()> {
    if target.is_degenerate() {
        Err(Error::DegenerateTarget)
    } else {
        Ok(())
    }
}

/// Solves `lower_mass(β̃, k) = alpha` for `β̃ ≥ β`, or returns `+∞` when the
/// required mass is only reached in the zero-temperature limit. `rest` is `1 − alpha`.
fn cooling_root(energies: &[f64], beta: f64, k: usize, alpha: f64, rest: f64, limit: f64) -> Result<ExtendedBeta> {
    let n = energies.len();
    let holds = if alpha < 0.5 {
        lower_mass(energies, beta, k) >= alpha
    } else {
        upper_mass(energies, beta, n - k) <= rest
    };
    if holds {
        return Ok(ExtendedBeta::Finite(beta));
    }
    if unreachable(alpha, rest, limit) {
        return Ok(ExtendedBeta::PosInf);
    }
    // work on whichever side of the split carries the smaller mass
    let root = if alpha < 0.5 {
        solve_from(|b| lower_mass(energies, b, k) - alpha, beta, 1.0)?
    } else {
        solve_from(|b| rest - upper_mass(energies, b, n - k), beta, 1.0)?
    };
    Ok(ExtendedBeta::Finite(root))
}

/// Solves `upper_mass(β̃, k) = alpha` for `β̃ ≤ β`, or returns `-∞`.
fn heating_root(energies: &[f64], beta: f64, k: usize, alpha: f64, rest: f64, limit: f64) -> Result<ExtendedBeta> {
    let n = energies.len();
    let holds = if alpha < 0.5 {
        upper_mass(energies, beta, k) >= alpha
    } else {
        lower_mass(energies, beta, n - k) <= rest
    };
    if holds {
        return Ok(ExtendedBeta::Finite(beta));
    }
    if unreachable(alpha, rest, limit) {
        return Ok(ExtendedBeta::NegInf);
    }
    let root = if alpha < 0.5 {
        solve_from(|b| upper_mass(energies, b, k) - alpha, beta, -1.0)?
    } else {
        solve_from(|b| rest - lower_mass(energies, b, n - k), beta, -1.0)?
    };
    Ok(ExtendedBeta::Finite(root))
}

fn unreachable(alpha: f64, rest: f64, limit: f64) -> bool {
    if limit == 1.0 {
        rest <= INFINITY_SLACK
    } else {
        alpha >= limit - INFINITY_SLACK
    }
}

/// Largest inverse temperature to which `target` can be cooled using `resource`.
pub fn beta_max(resource: &AthermalityState, target: &GibbsContext) -> Result<CoolingReport> {
    check_target(target)?;
    let boundary = compute_elbows(resource);
    let energies = target.energies();
    let beta = target.beta();
    let n = target.dim();
    let d = target.ground_degeneracy();
    let g = target.gibbs();
    let prefix = g.prefix_sums();

    let mut per_condition = Vec::with_capacity(n - 1);
    let mut best = ExtendedBeta::PosInf;
    for k in 1..n {
        let rest: f64 = g.as_slice()[k..].iter().sum();
        let (alpha_k, alpha_rest) = boundary.alpha_split(prefix[k - 1], rest)?;
        let limit = if k < d { k as f64 / d as f64 } else { 1.0 };
        let beta_k = cooling_root(energies, beta, k, alpha_k, alpha_rest, limit)?;
        best = best.min(beta_k);
        per_condition.push(CoolingCondition { k, beta_k, alpha_k });
    }
    Ok(CoolingReport {
        beta_max: best,
        per_condition,
    })
}

/// Smallest (possibly negative) inverse temperature to which `target` can be heated.
pub fn beta_min(resource: &AthermalityState, target: &GibbsContext) -> Result<HeatingReport> {
    check_target(target)?;
    let boundary = compute_elbows(resource);
    let energies = target.energies();
    let beta = target.beta();
    let n = target.dim();
    let u = target.top_degeneracy();
    let g = target.gibbs();

    let mut per_condition = Vec::with_capacity(n - 1);
    let mut best = ExtendedBeta::NegInf;
    for k in 1..n {
        // 1 - ||g||_(n-k), summed from the top for accuracy
        let y: f64 = g.as_slice()[n - k..].iter().sum();
        let rest: f64 = g.as_slice()[..n - k].iter().sum();
        let (alpha_tilde_k, alpha_rest) = boundary.alpha_split(y, rest)?;
        let limit = if k < u { k as f64 / u as f64 } else { 1.0 };
        let beta_k = heating_root(energies, beta, k, alpha_tilde_k, alpha_rest, limit)?;
        best = best.max(beta_k);
        per_condition.push(HeatingCondition {
            k,
            beta_k,
            alpha_tilde_k,
        });
    }
    Ok(HeatingReport {
        beta_min: best,
        per_condition,
    })
}

/// Where the qubit condition with log-odds `log_odds` at `β` ends up.
pub(crate) enum QubitReach {
    /// Already satisfied at `β`.
    AtStart,
    /// Reached only in the zero-temperature (or full-inversion) limit.
    Unbounded,
    /// `logit(α)` of the boundary at the qubit's population.
    LogOdds(f64),
}

fn check_qubit(gap: f64, beta: f64) -> Result<()> {
    if !(gap > 0.0) || !gap.is_finite() {
        return Err(Error::NonPositiveGap(gap));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::NonPositiveBeta(beta));
    }
    Ok(())
}

pub(crate) fn qubit_reach(boundary: &TestingBoundary, log_odds: f64) -> Result<QubitReach> {
    let (y, rest_y) = (logistic(log_odds), logistic(-log_odds));
    let (alpha, rest) = boundary.alpha_split(y, rest_y)?;
    let at_start = if y < 0.5 { alpha <= y } else { rest >= rest_y };
    Ok(if at_start {
        QubitReach::AtStart
    } else if rest <= INFINITY_SLACK {
        QubitReach::Unbounded
    } else {
        QubitReach::LogOdds(alpha.ln() - rest.ln())
    })
}

/// Shifts `(β̃_max − β, β − β̃_min)` for a qubit of gap `gap`, from the closed form.
pub(crate) fn qubit_shifts(
    boundary: &TestingBoundary,
    gap: f64,
    beta: f64,
) -> Result<(ExtendedBeta, ExtendedBeta)> {
    check_qubit(gap, beta)?;
    // logit of the ground (excited) population at β is +β·gap (−β·gap)
    let shift = |log_odds: f64| -> Result<ExtendedBeta> {
        Ok(match qubit_reach(boundary, log_odds)? {
            QubitReach::AtStart => ExtendedBeta::Finite(0.0),
            QubitReach::Unbounded => ExtendedBeta::PosInf,
            QubitReach::LogOdds(l) => ExtendedBeta::Finite(((l - log_odds) / gap).max(0.0)),
        })
    };
    Ok((shift(beta * gap)?, shift(-beta * gap)?))
}

/// Closed-form `(β̃_max, β̃_min)` for a qubit target with levels `(0, gap)`.
pub fn qubit_beta_bounds(
    resource: &AthermalityState,
    gap: f64,
    beta: f64,
) -> Result<(ExtendedBeta, ExtendedBeta)> {
    check_qubit(gap, beta)?;
    let boundary = compute_elbows(resource);
    let cool = match qubit_reach(&boundary, beta * gap)? {
        QubitReach::AtStart => ExtendedBeta::Finite(beta),
        QubitReach::Unbounded => ExtendedBeta::PosInf,
        QubitReach::LogOdds(l) => ExtendedBeta::Finite((l / gap).max(beta)),
    };
    let heat = match qubit_reach(&boundary, -beta * gap)? {
        QubitReach::AtStart => ExtendedBeta::Finite(beta),
        QubitReach::Unbounded => ExtendedBeta::NegInf,
        QubitReach::LogOdds(l) => ExtendedBeta::Finite((-l / gap).min(beta)),
    };
    Ok((cool, heat))
}

/// Maximal population of the (possibly degenerate) ground space of `target`
/// reachable from `resource`.
pub fn max_ground_overlap(
    resource: &AthermalityState,
    target: &GibbsContext,
    ground_degeneracy: usize,
) -> Result<f64> {
    let actual = target.ground_degeneracy();
    if ground_degeneracy != actual {
        return Err(Error::WrongDegeneracy {
            given: ground_degeneracy,
            actual,
        });
    }
    let g = target.gibbs();
    compute_elbows(resource).alpha_at(ground_degeneracy as f64 * g[0])
}

/// Change of the mean energy of a qubit of gap `gap` driven from `beta` to `beta_tilde`.
pub fn qubit_energy_change(gap: f64, beta: f64, beta_tilde: f64) -> f64 {
    (logistic(-beta_tilde * gap) - logistic(-beta * gap)) * gap
}
