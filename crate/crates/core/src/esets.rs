//! Sets of qubit energy gaps that a resource can drive from `β` to a fixed `β̃`.
//!
//! For a qubit of gap `E`, write `w = e^{-βE}` and `a = β̃/β`. The single
//! non-trivial elbow of the target pair `(g̃, g)` traces the curve `F_a(w)`; a
//! gap is feasible iff that elbow lies inside the resource's testing region.
//! Because the resource boundary can cut the curve several times, the feasible
//! set need not be an interval.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::majorization::{compute_elbows, TestingBoundary, MAJORIZATION_SLACK};
use crate::roots::bisect;
use crate::thermo::logistic;
use crate::types::{validate_state, AthermalityState};

/// Width in `E` to which each membership boundary is refined.
pub const ROOT_WIDTH: f64 = 1e-10;
pub const DEFAULT_GRID: usize = 10_000;
/// Smallest `w` scanned by default.
pub const DEFAULT_W_MIN: f64 = 1e-10;
const TANGENT_EPS: f64 = 1e-9;

/// Default scan limit `e_max` with `e^{-β e_max} = DEFAULT_W_MIN`.
pub fn default_e_max(beta: f64) -> f64 {
    -DEFAULT_W_MIN.ln() / beta
}

/// Point of the elbow curve for temperature ratio `a` at `w = e^{-βE}`.
pub fn fa_point(a: f64, w: f64) -> Result<(f64, f64)> {
    if a == 1.0 {
        return Err(Error::TrivialRatio);
    }
    if !a.is_finite() {
        return Err(Error::InvalidArgument(format!("ratio must be finite, got {a}")));
    }
    if !(w > 0.0 && w <= 1.0) {
        return Err(Error::WOutOfRange(w));
    }
    let wa = w.powf(a);
    Ok(if a > 1.0 {
        (1.0 / (1.0 + wa), 1.0 / (1.0 + w))
    } else {
        (wa / (1.0 + wa), w / (1.0 + w))
    })
}

fn check_args(beta: f64, beta_tilde: f64, gap: f64) -> Result<()> {
    if !(gap > 0.0) || !gap.is_finite() {
        return Err(Error::NonPositiveGap(gap));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::NonPositiveBeta(beta));
    }
    if !beta_tilde.is_finite() {
        return Err(Error::NonFiniteBeta(beta_tilde));
    }
    Ok(())
}

/// Margin of the target elbow inside the resource's testing region, in
/// log-odds: `logit(α_y) − logit(x)` for the target elbow `(x, y)`.
fn phi(boundary: &TestingBoundary, beta: f64, beta_tilde: f64, gap: f64) -> f64 {
    // the elbow sits on the ground level when cooling, on the excited one when heating
    let sign = if beta_tilde > beta { 1.0 } else { -1.0 };
    let (t_target, t) = (sign * beta_tilde * gap, sign * beta * gap);
    let (alpha, rest) = boundary
        .alpha_split(logistic(t), logistic(-t))
        .expect("qubit populations lie in [0, 1]");
    (alpha.ln() - rest.ln()) - t_target
}

fn is_member(phi: f64, beta_tilde: f64, gap: f64) -> bool {
    phi >= -MAJORIZATION_SLACK * (beta_tilde * gap).abs().max(1.0)
}

/// Whether the resource can take a qubit of gap `gap` from `beta` to `beta_tilde`.
pub fn gap_membership(resource: &AthermalityState, beta: f64, beta_tilde: f64, gap: f64) -> Result<bool> {
    check_args(beta, beta_tilde, gap)?;
    if beta_tilde == beta {
        return Ok(true);
    }
    Ok(is_member(phi(&compute_elbows(resource), beta, beta_tilde, gap), beta_tilde, gap))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl GapInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyGapSet {
    pub intervals: Vec<GapInterval>,
    /// Grid step in `w`.
    pub resolution: f64,
}

impl EnergyGapSet {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_interval(&self) -> bool {
        self.intervals.len() <= 1
    }

    /// Gaps `E_1 < E_2 < E_3` with `E_1, E_3` feasible and `E_2` not, taken as the
    /// midpoints of the first two intervals and of the hole between them.
    pub fn witnesses(&self) -> Option<[f64; 3]> {
        let (a, b) = (self.intervals.first()?, self.intervals.get(1)?);
        Some([a.midpoint(), 0.5 * (a.hi + b.lo), b.midpoint()])
    }

    pub fn contains(&self, gap: f64) -> bool {
        self.intervals.iter().any(|iv| {
            (gap > iv.lo || (iv.lo_closed && gap == iv.lo)) && (gap < iv.hi || (iv.hi_closed && gap == iv.hi))
        })
    }
}

/// One grid sample of a gap scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapSample {
    pub energy: f64,
    pub phi: f64,
    pub member: bool,
}

fn check_scan(beta: f64, beta_tilde: f64, e_max: f64, n_grid: usize) -> Result<()> {
    check_args(beta, beta_tilde, e_max)?;
    if n_grid < 100 {
        return Err(Error::InvalidArgument(format!("grid needs at least 100 points, got {n_grid}")));
    }
    Ok(())
}

/// Uniform grid in `w` over `[e^{-β e_max}, 1)`, returned as gaps in increasing order.
fn scan_energies(beta: f64, e_max: f64, n_grid: usize) -> (Vec<f64>, f64) {
    let w_min = (-beta * e_max).exp();
    let step = (1.0 - w_min) / n_grid as f64;
    let mut energies: Vec<f64> = (0..n_grid)
        .map(|i| if i == 0 { e_max } else { -(w_min + i as f64 * step).ln() / beta })
        .collect();
    energies.reverse();
    (energies, step)
}

/// Samples `φ` on the scan grid, for plotting.
pub fn gap_samples(
    resource: &AthermalityState,
    beta: f64,
    beta_tilde: f64,
    e_max: f64,
    n_grid: usize,
) -> Result<Vec<GapSample>> {
    check_scan(beta, beta_tilde, e_max, n_grid)?;
    let boundary = compute_elbows(resource);
    let (energies, _) = scan_energies(beta, e_max, n_grid);
    Ok(energies
        .into_iter()
        .map(|energy| {
            let phi = if beta_tilde == beta { 0.0 } else { phi(&boundary, beta, beta_tilde, energy) };
            GapSample {
                energy,
                phi,
                member: is_member(phi, beta_tilde, energy),
            }
        })
        .collect())
}

/// Scans `(0, e_max]` for the feasible gaps and returns them as intervals.
pub fn gap_set(
    resource: &AthermalityState,
    beta: f64,
    beta_tilde: f64,
    e_max: f64,
    n_grid: usize,
) -> Result<EnergyGapSet> {
    check_scan(beta, beta_tilde, e_max, n_grid)?;
    let (energies, resolution) = scan_energies(beta, e_max, n_grid);
    if beta_tilde == beta {
        return Ok(EnergyGapSet {
            intervals: vec![GapInterval {
                lo: 0.0,
                hi: e_max,
                lo_closed: false,
                hi_closed: true,
            }],
            resolution,
        });
    }
    let boundary = compute_elbows(resource);
    let member_at = |e: f64| is_member(phi(&boundary, beta, beta_tilde, e), beta_tilde, e);
    let flags: Vec<bool> = energies.iter().map(|&e| member_at(e)).collect();

    // refine a status change between two neighbouring grid gaps
    let refine = |mut lo: f64, mut hi: f64| -> (f64, bool) {
        let lo_status = member_at(lo);
        for _ in 0..200 {
            if hi - lo < ROOT_WIDTH {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if member_at(mid) == lo_status {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        (root, member_at(root))
    };

    let mut intervals = Vec::new();
    let mut open: Option<(f64, bool)> = flags[0].then_some((0.0, false));
    for i in 1..energies.len() {
        if flags[i] == flags[i - 1] {
            continue;
        }
        let (root, closed) = refine(energies[i - 1], energies[i]);
        if flags[i] {
            open = Some((root, closed));
        } else if let Some((lo, lo_closed)) = open.take() {
            intervals.push(GapInterval {
                lo,
                hi: root,
                lo_closed,
                hi_closed: closed,
            });
        }
    }
    if let Some((lo, lo_closed)) = open {
        intervals.push(GapInterval {
            lo,
            hi: e_max,
            lo_closed,
            hi_closed: true,
        });
    }
    Ok(EnergyGapSet {
        intervals,
        resolution,
    })
}

/// Elbow curve of the heating branch written as `y = F̃(x)` for `x ∈ (0, 1/2]`,
/// with exponent `p = 1/a`.
fn curve_y(x: f64, p: f64) -> f64 {
    let (u, v) = (x.powf(p), (1.0 - x).powf(p));
    u / (u + v)
}

fn curve_slope(x: f64, p: f64) -> f64 {
    let d = (1.0 - x).powf(p) + x.powf(p);
    let inner = x.powf(p - 1.0) - (1.0 - x).powf(p - 1.0);
    p / d * (x.powf(p - 1.0) - x.powf(p) * inner / d)
}

/// Qubit elbow `(x₁, y₁)` for the heating ratio `a ∈ (0, 1)` whose boundary
/// crosses the heating curve three times.
fn heating_gap_elbow(a: f64) -> (f64, f64) {
    let p = 1.0 / a;
    // tangent from (1, 1): slope equals the secant slope to (1, 1)
    let tangency = |x: f64| curve_slope(x, p) - (1.0 - curve_y(x, p)) / (1.0 - x);
    let x0 = bisect(tangency, TANGENT_EPS, 0.5 - TANGENT_EPS);
    let slope = curve_slope(x0, p);
    // shallower line through (1, 1) and (0, f(0)/2)
    let intercept = (1.0 - slope) / 2.0;
    let shallow = 1.0 - intercept;
    let line = |x: f64| 1.0 + shallow * (x - 1.0);
    let x2 = bisect(|x| line(x) - curve_y(x, p), TANGENT_EPS, x0);
    let x4 = 1.0 - 1.0 / shallow;
    let x1 = 0.5 * (x2 + x4);
    (x1, line(x1))
}

/// A qubit resource whose gap set at ratio `a = β̃/β` is not an interval.
pub fn construct_gap_example(a: f64) -> Result<AthermalityState> {
    if a == 1.0 {
        return Err(Error::TrivialRatio);
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("ratio must be positive and finite, got {a}")));
    }
    let (r, g) = if a < 1.0 {
        let (x, y) = heating_gap_elbow(a);
        ([x, 1.0 - x], [y, 1.0 - y])
    } else {
        // (x, y) -> (1 - y, 1 - x) maps the heating curve of 1/a onto the cooling curve of a
        let (x, y) = heating_gap_elbow(1.0 / a);
        ([1.0 - y, y], [1.0 - x, x])
    };
    validate_state(&r, &g)
}

/// Sampled check that every grid point feasible for `to` is feasible for `from`.
pub fn eset_superset_check(
    from: &AthermalityState,
    to: &AthermalityState,
    beta: f64,
    beta_tilde_grid: &[f64],
    e_grid: &[f64],
) -> Result<bool> {
    if beta_tilde_grid.is_empty() || e_grid.is_empty() {
        return Err(Error::InvalidArgument("empty sampling grid".into()));
    }
    let source = compute_elbows(from);
    let target = compute_elbows(to);
    for &bt in beta_tilde_grid {
        for &e in e_grid {
            check_args(beta, bt, e)?;
            if bt == beta {
                continue;
            }
            if is_member(phi(&target, beta, bt, e), bt, e) && !is_member(phi(&source, beta, bt, e), bt, e) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
