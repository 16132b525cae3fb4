//! Testing-region geometry: elbows, the lower-boundary function and the
//! relative-majorization decision.
//!
//! For a pair `(p, r)` the lower boundary of the testing region is the
//! polyline through the partial sums `(Σ p, Σ r)` taken in order of
//! non-increasing likelihood ratio `p_i / r_i`. It is stored as a list of
//! points from `(0, 0)` to `(1, 1)` and read as a function of `y`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::AthermalityState;

/// Collinearity threshold on the cross product of adjacent segment directions.
pub const COLLINEAR_TOL: f64 = 1e-14;
/// Additive slack used when comparing boundary abscissae.
pub const MAJORIZATION_SLACK: f64 = 1e-12;
/// Inputs to [`TestingBoundary::alpha_at`] this close outside `[0, 1]` are clamped.
const Y_CLAMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Elbow {
    pub x: f64,
    pub y: f64,
}

/// Piecewise-linear lower boundary in canonical (collinear-merged) form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestingBoundary {
    elbows: Vec<Elbow>,
}

impl TestingBoundary {
    pub fn elbows(&self) -> &[Elbow] {
        &self.elbows
    }

    /// Elbows other than the fixed endpoints `(0,0)` and `(1,1)`.
    pub fn interior(&self) -> &[Elbow] {
        &self.elbows[1..self.elbows.len() - 1]
    }

    /// The boundary abscissa `α_y`.
    pub fn alpha_at(&self, y: f64) -> Result<f64> {
        if !(y >= -Y_CLAMP_TOL && y <= 1.0 + Y_CLAMP_TOL) {
            return Err(Error::YOutOfRange(y));
        }
        let y = y.clamp(0.0, 1.0);
        // first elbow with ordinate >= y
        let hi = self.elbows.partition_point(|e| e.y < y);
        if hi == 0 {
            return Ok(self.elbows[0].x);
        }
        if hi == self.elbows.len() {
            return Ok(1.0);
        }
        let (a, b) = (self.elbows[hi - 1], self.elbows[hi]);
        if b.y == y {
            return Ok(b.x);
        }
        let slope = (b.x - a.x) / (b.y - a.y);
        Ok((a.x + slope * (y - a.y)).clamp(a.x, b.x))
    }

    /// `(α_y, 1 − α_y)` from `y` and its complement `1 − y`. The complement
    /// stays accurate on the final segment into `(1, 1)`, where `α_y` itself
    /// rounds to one.
    pub fn alpha_split(&self, y: f64, y_complement: f64) -> Result<(f64, f64)> {
        let alpha = self.alpha_at(y)?;
        let a = self.elbows[self.elbows.len() - 2];
        if y_complement < 1.0 - a.y {
            let rest = (y_complement.max(0.0) * (1.0 - a.x) / (1.0 - a.y)).min(1.0);
            return Ok((if rest < 0.5 { 1.0 - rest } else { alpha }, rest));
        }
        Ok((alpha, 1.0 - alpha))
    }

    /// CSV rows `x,y`, one elbow per line, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for e in &self.elbows {
            out.push_str(&format_sig17(e.x));
            out.push(',');
            out.push_str(&format_sig17(e.y));
            out.push('\n');
        }
        out
    }
}

/// Formats a float with 17 significant digits, which round-trips every `f64`.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exponent = v.abs().log10().floor() as i32;
    if (-5..=16).contains(&exponent) {
        let decimals = (16 - exponent).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.16e}")
    }
}

/// Computes the canonical lower boundary of the testing region of `(r, g)`.
pub fn compute_elbows(state: &AthermalityState) -> TestingBoundary {
    let r = state.r().as_slice();
    let g = state.g().as_slice();
    let mut idx: Vec<usize> = (0..r.len()).collect();
    // ratio r_i/g_i descending, compared by cross-multiplication; ties by index
    idx.sort_by(|&i, &j| {
        let lhs = r[i] * g[j];
        let rhs = r[j] * g[i];
        rhs.partial_cmp(&lhs).unwrap_or(Ordering::Equal).then(i.cmp(&j))
    });

    let mut points = Vec::with_capacity(r.len() + 1);
    points.push(Elbow { x: 0.0, y: 0.0 });
    let (mut x, mut y) = (0.0, 0.0);
    for &i in &idx {
        x += r[i];
        y += g[i];
        points.push(Elbow {
            x: x.min(1.0),
            y: y.min(1.0),
        });
    }
    *points.last_mut().unwrap() = Elbow { x: 1.0, y: 1.0 };

    let mut elbows: Vec<Elbow> = Vec::with_capacity(points.len());
    for p in points {
        if let Some(&last) = elbows.last() {
            if p.x == last.x && p.y == last.y {
                continue;
            }
        }
        if elbows.len() >= 2 {
            let a = elbows[elbows.len() - 2];
            let b = elbows[elbows.len() - 1];
            let cross = (b.x - a.x) * (p.y - b.y) - (b.y - a.y) * (p.x - b.x);
            if cross.abs() < COLLINEAR_TOL {
                elbows.pop();
            }
        }
        elbows.push(p);
    }
    TestingBoundary { elbows }
}

/// Convenience wrapper around [`TestingBoundary::alpha_at`].
pub fn alpha_at(boundary: &TestingBoundary, y: f64) -> Result<f64> {
    boundary.alpha_at(y)
}

/// Decides `(from.r, from.g) ≻ (to.r, to.g)` by checking the boundary of
/// `from` against every interior elbow of `to`.
pub fn relatively_majorizes(from: &AthermalityState, to: &AthermalityState) -> bool {
    let source = compute_elbows(from);
    let target = compute_elbows(to);
    dominates_at_elbows(&source, &target)
}

/// Pointwise domination of `target` by `source` checked at the elbows of `target`.
pub fn dominates_at_elbows(source: &TestingBoundary, target: &TestingBoundary) -> bool {
    target.interior().iter().all(|e| {
        let alpha = source.alpha_at(e.y).expect("elbow ordinates lie in [0, 1]");
        alpha >= e.x - MAJORIZATION_SLACK
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::validate_state;

    fn pts(b: &TestingBoundary) -> Vec<(f64, f64)> {
        b.elbows().iter().map(|e| (e.x, e.y)).collect()
    }

    fn close(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
        a.len() == b.len()
            && a.iter().zip(b).all(|(p, q)| (p.0 - q.0).abs() < 1e-15 && (p.1 - q.1).abs() < 1e-15)
    }

    #[test]
    fn free_state_gives_the_diagonal() {
        for n in 1..6 {
            let g: Vec<f64> = (1..=n).map(|i| i as f64).collect();
            let s: f64 = g.iter().sum();
            let g: Vec<f64> = g.iter().map(|x| x / s).collect();
            let b = compute_elbows(&validate_state(&g, &g).unwrap());
            assert_eq!(pts(&b), vec![(0.0, 0.0), (1.0, 1.0)]);
        }
    }

    #[test]
    fn three_level_elbows() {
        let b = compute_elbows(&validate_state(&[0.7, 0.2, 0.1], &[0.2, 0.3, 0.5]).unwrap());
        assert!(close(&pts(&b), &[(0.0, 0.0), (0.7, 0.2), (0.9, 0.5), (1.0, 1.0)]));
    }

    #[test]
    fn two_interval_elbow() {
        let b = compute_elbows(&validate_state(&[0.2, 0.8], &[0.045, 0.955]).unwrap());
        assert!(close(&pts(&b), &[(0.0, 0.0), (0.2, 0.045), (1.0, 1.0)]));
    }

    #[test]
    fn ties_are_merged() {
        // ratios 2, 2, 2/3, 2/3: two collinear pairs collapse into one elbow
        let b = compute_elbows(&validate_state(&[0.2, 0.3, 0.2, 0.3], &[0.1, 0.15, 0.3, 0.45]).unwrap());
        assert_eq!(b.elbows().len(), 3);
        assert!((b.elbows()[1].x - 0.5).abs() < 1e-15);
        assert!((b.elbows()[1].y - 0.25).abs() < 1e-15);
    }

    #[test]
    fn alpha_values() {
        let b = compute_elbows(&validate_state(&[0.7, 0.2, 0.1], &[0.2, 0.3, 0.5]).unwrap());
        assert_eq!(b.alpha_at(0.0).unwrap(), 0.0);
        assert_eq!(b.alpha_at(1.0).unwrap(), 1.0);
        assert!((b.alpha_at(0.35).unwrap() - 0.8).abs() < 1e-15);

        let b = compute_elbows(&validate_state(&[0.9, 0.1], &[0.8, 0.2]).unwrap());
        assert_eq!(b.alpha_at(0.8).unwrap(), 0.9);
        assert!(matches!(b.alpha_at(1.5), Err(Error::YOutOfRange(_))));
        assert!(matches!(b.alpha_at(-0.1), Err(Error::YOutOfRange(_))));
    }

    #[test]
    fn zero_population_gives_flat_tail() {
        let b = compute_elbows(&validate_state(&[1.0, 0.0], &[0.8, 0.2]).unwrap());
        assert_eq!(pts(&b), vec![(0.0, 0.0), (1.0, 0.8), (1.0, 1.0)]);
        assert_eq!(b.alpha_at(0.9).unwrap(), 1.0);
    }

    #[test]
    fn majorization_examples() {
        let a = validate_state(&[0.7, 0.2, 0.1], &[0.2, 0.3, 0.5]).unwrap();
        let free = validate_state(&[0.1, 0.9], &[0.1, 0.9]).unwrap();
        assert!(relatively_majorizes(&a, &free));
        assert!(relatively_majorizes(&a, &a));

        let from = validate_state(&[0.9, 0.1], &[0.8, 0.2]).unwrap();
        let to = validate_state(&[0.5, 0.5], &[0.045, 0.955]).unwrap();
        assert!(!relatively_majorizes(&from, &to));
    }

    #[test]
    fn csv_has_seventeen_digits() {
        let b = compute_elbows(&validate_state(&[0.2, 0.8], &[0.045, 0.955]).unwrap());
        let csv = b.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "0,0");
        for line in &lines {
            for field in line.split(',') {
                let v: f64 = field.parse().unwrap();
                assert_eq!(format_sig17(v).parse::<f64>().unwrap(), v);
            }
        }
        assert_eq!(format_sig17(0.2), "0.20000000000000001");
    }
}
