//! Qubit cooling and heating monotones and the convertibility test built on
//! them.
//!
//! `C(E)` is how far above `β` a qubit of gap `E` can be cooled, `H(E)` how
//! far below `β` it can be heated. Comparing both families over all gaps
//! decides convertibility to a quasi-classical target; the gaps that matter
//! for a given target are the finite set at which a Gibbs qubit's elbow
//! ordinate coincides with one of the target's elbows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::majorization::{compute_elbows, TestingBoundary, MAJORIZATION_SLACK};
use crate::tempbounds::qubit_shifts;
use crate::thermo::logistic;
use crate::types::{AthermalityState, ExtendedReal};

/// Offset applied to an elbow ordinate of exactly one half.
pub const DEGENERATE_PERTURBATION: f64 = 1e-9;
/// Elbow ordinates within this distance of one half are treated as degenerate.
const HALF_TOL: f64 = 1e-12;
/// Relative slack in monotone comparisons.
const COMPARISON_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyKind {
    Cooling,
    Heating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalEnergy {
    pub k: usize,
    pub energy: f64,
    pub kind: EnergyKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalEnergySet {
    pub entries: Vec<CriticalEnergy>,
    /// Elbow indices whose ordinate is one half.
    pub degenerate: Vec<usize>,
}

/// A failed monotone comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub energy: f64,
    pub kind: EnergyKind,
    /// Monotone of the source state.
    pub lhs: ExtendedReal,
    /// Monotone of the target state.
    pub rhs: ExtendedReal,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveBeta(beta))
    }
}

/// `C_β^E = β̃_max − β`.
pub fn cooling_monotone(state: &AthermalityState, beta: f64, gap: f64) -> Result<ExtendedReal> {
    Ok(qubit_shifts(&compute_elbows(state), gap, beta)?.0)
}

/// `H_β^E = β − β̃_min`.
pub fn heating_monotone(state: &AthermalityState, beta: f64, gap: f64) -> Result<ExtendedReal> {
    Ok(qubit_shifts(&compute_elbows(state), gap, beta)?.1)
}

/// Gap of a Gibbs qubit at `beta` whose ground population is `y` (`y > 1/2`).
fn gap_for_ground_population(y: f64, beta: f64) -> f64 {
    (y / (1.0 - y)).ln() / beta
}

/// The finite set of gaps sufficient to test convertibility into `target`.
pub fn critical_energies(target: &AthermalityState, beta: f64) -> Result<CriticalEnergySet> {
    check_beta(beta)?;
    Ok(critical_energies_of(&compute_elbows(target), beta))
}

fn critical_energies_of(boundary: &TestingBoundary, beta: f64) -> CriticalEnergySet {
    let mut entries = Vec::new();
    let mut degenerate = Vec::new();
    for (i, e) in boundary.interior().iter().enumerate() {
        let k = i + 1;
        if (e.y - 0.5).abs() < HALF_TOL {
            degenerate.push(k);
        } else if e.y > 0.5 {
            entries.push(CriticalEnergy {
                k,
                energy: gap_for_ground_population(e.y, beta),
                kind: EnergyKind::Cooling,
            });
        } else {
            entries.push(CriticalEnergy {
                k,
                energy: gap_for_ground_population(1.0 - e.y, beta),
                kind: EnergyKind::Heating,
            });
        }
    }
    CriticalEnergySet {
        entries,
        degenerate,
    }
}

/// `lhs ≥ rhs` up to `slack`, or up to a relative `COMPARISON_SLACK`, whichever is larger.
fn at_least(lhs: ExtendedReal, rhs: ExtendedReal, slack: f64) -> bool {
    match (lhs, rhs) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a >= b - slack.max(COMPARISON_SLACK * b.abs().max(1.0)),
        _ => lhs >= rhs,
    }
}

/// The majorization slack on `α` carried over to the monotone scale: the
/// monotone moves by `dα / (E·α(1 − α))` when the boundary moves by `dα`.
fn monotone_slack(target: &TestingBoundary, log_odds: f64, energy: f64) -> f64 {
    match target.alpha_split(logistic(log_odds), logistic(-log_odds)) {
        Ok((alpha, rest)) if alpha > 0.0 && rest > 0.0 => MAJORIZATION_SLACK / (energy * alpha * rest),
        _ => 0.0,
    }
}

fn compare_at(
    source: &TestingBoundary,
    target: &TestingBoundary,
    beta: f64,
    energy: f64,
    kind: EnergyKind,
) -> Result<Option<Violation>> {
    let (src_cool, src_heat) = qubit_shifts(source, energy, beta)?;
    let (tgt_cool, tgt_heat) = qubit_shifts(target, energy, beta)?;
    let (lhs, rhs, log_odds) = match kind {
        EnergyKind::Cooling => (src_cool, tgt_cool, beta * energy),
        EnergyKind::Heating => (src_heat, tgt_heat, -beta * energy),
    };
    let slack = monotone_slack(target, log_odds, energy);
    Ok((!at_least(lhs, rhs, slack)).then_some(Violation {
        energy,
        kind,
        lhs,
        rhs,
    }))
}

/// First critical energy at which a monotone of `from` falls below that of `to`.
pub fn first_violation(from: &AthermalityState, to: &AthermalityState, beta: f64) -> Result<Option<Violation>> {
    check_beta(beta)?;
    let source = compute_elbows(from);
    let target = compute_elbows(to);
    let critical = critical_energies_of(&target, beta);
    for c in &critical.entries {
        if let Some(v) = compare_at(&source, &target, beta, c.energy, c.kind)? {
            return Ok(Some(v));
        }
    }
    if !critical.degenerate.is_empty() {
        // both neighbours of an elbow at one half map to the same gap
        let energy = gap_for_ground_population(0.5 + DEGENERATE_PERTURBATION, beta);
        for kind in [EnergyKind::Cooling, EnergyKind::Heating] {
            if let Some(v) = compare_at(&source, &target, beta, energy, kind)? {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

/// Decides convertibility of `from` into the quasi-classical `to` from the
/// monotones at the critical energies of `to`.
pub fn convertible_via_monotones(from: &AthermalityState, to: &AthermalityState, beta: f64) -> Result<bool> {
    Ok(first_violation(from, to, beta)?.is_none())
}
