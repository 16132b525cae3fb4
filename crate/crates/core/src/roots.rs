//! Bracketing and bisection for monotone scalar functions.

use crate::error::{Error, Result};

/// Relative bracket width at which bisection stops.
pub const REL_WIDTH: f64 = 1e-13;
const MIN_WIDTH: f64 = 1e-300;
pub const MAX_ITERATIONS: usize = 2200;
const MAX_EXPANSIONS: usize = 2100;

/// Bisects `f` on `[lo, hi]` where `f(lo) < 0 <= f(hi)`.
///
/// Stops once the bracket is narrower than `REL_WIDTH * |mid|`, once it can no
/// longer be halved, or after `MAX_ITERATIONS` halvings, and returns the midpoint.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() < (REL_WIDTH * mid.abs()).max(MIN_WIDTH) || mid == lo || mid == hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Finds the root of `f` starting from `start`, where `f(start) < 0` and `f`
/// is non-decreasing when moving away from `start` in `direction` (`+1` or `-1`).
///
/// The bracket starts at `start + direction` and doubles its offset until the
/// sign flips.
pub fn solve_from<F: Fn(f64) -> f64>(f: F, start: f64, direction: f64) -> Result<f64> {
    debug_assert!(direction == 1.0 || direction == -1.0);
    let mut inner = start;
    let mut offset = 1.0;
    for _ in 0..MAX_EXPANSIONS {
        let outer = start + direction * offset;
        if !outer.is_finite() {
            break;
        }
        if f(outer) >= 0.0 {
            let root = if direction > 0.0 {
                bisect(&f, inner, outer)
            } else {
                -bisect(|t| f(-t), -inner, -outer)
            };
            return Ok(root);
        }
        inner = outer;
        offset *= 2.0;
    }
    Err(Error::BisectionFailure(format!(
        "no sign change found moving from {start} in direction {direction}"
    )))
}
