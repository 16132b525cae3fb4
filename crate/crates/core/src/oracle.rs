//! Linear-programming feasibility check for relative majorization.
//!
//! Looks for a column-stochastic `m × n` matrix `E` with `Ep = q` and `Er = s`
//! using a dense phase-1 simplex with Bland's rule.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::{AthermalityState, ProbabilityVector};

pub const DEFAULT_TOL: f64 = 1e-7;
const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub max_violation: f64,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= p;
        }
        self.rhs[row] /= p;
        self.rows[row][col] = 1.0;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row];
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let f = self.rows[r][col];
            if f == 0.0 {
                continue;
            }
            for (v, pv) in self.rows[r].iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.rows[r][col] = 0.0;
            self.rhs[r] -= f * pivot_rhs;
        }
        self.basis[row] = col;
    }
}

/// Phase-1 simplex on `rows x = rhs, x ≥ 0` where the first `n_exact` rows
/// already have a feasible basis given by `basis`. Returns the primal point and
/// the final sum of artificial variables.
fn phase_one(
    mut rows: Vec<Vec<f64>>,
    mut rhs: Vec<f64>,
    exact_basis: Vec<usize>,
    n_vars: usize,
) -> (Vec<f64>, f64) {
    let n_exact = exact_basis.len();
    let n_soft = rows.len() - n_exact;
    let width = n_vars + n_soft;
    let mut basis = exact_basis;
    for r in n_exact..rows.len() {
        // clear the exact basic variables out of this row
        for e in 0..n_exact {
            let col = basis[e];
            let f = rows[r][col];
            if f != 0.0 {
                let (head, tail) = rows.split_at_mut(r);
                for (v, pv) in tail[0].iter_mut().zip(&head[e]) {
                    *v -= f * pv;
                }
                tail[0][col] = 0.0;
                rhs[r] -= f * rhs[e];
            }
        }
        if rhs[r] < 0.0 {
            rhs[r] = -rhs[r];
            for v in rows[r].iter_mut() {
                *v = -*v;
            }
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(width, 0.0);
        if i >= n_exact {
            row[n_vars + i - n_exact] = 1.0;
            basis.push(n_vars + i - n_exact);
        }
    }
    let mut t = Tableau { rows, rhs, basis };

    for _ in 0..MAX_PIVOTS {
        // reduced cost of column j: c_j − Σ_{artificial rows} a_rj
        let entering = (0..width).find(|&j| {
            let c = if j >= n_vars { 1.0 } else { 0.0 };
            let z: f64 = (0..t.rows.len())
                .filter(|&r| t.basis[r] >= n_vars)
                .map(|r| t.rows[r][j])
                .sum();
            c - z < -PIVOT_EPS && !t.basis.contains(&j)
        });
        let Some(col) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..t.rows.len() {
            let a = t.rows[r][col];
            if a > PIVOT_EPS {
                let ratio = t.rhs[r] / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio - PIVOT_EPS || (ratio <= bratio + PIVOT_EPS && t.basis[r] < t.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else { break };
        t.pivot(row, col);
    }

    let mut x = vec![0.0; n_vars];
    let mut artificial = 0.0;
    for (r, &b) in t.basis.iter().enumerate() {
        let v = t.rhs[r].max(0.0);
        if b < n_vars {
            x[b] = v;
        } else {
            artificial += v;
        }
    }
    (x, artificial)
}

/// Decides whether some column-stochastic `E` maps `p → q` and `r → s`.
pub fn lp_feasible(
    p: &ProbabilityVector,
    r: &ProbabilityVector,
    q: &ProbabilityVector,
    s: &ProbabilityVector,
    tol: f64,
) -> Result<FeasibilityResult> {
    let n = p.len();
    let m = q.len();
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r.len(),
        });
    }
    if s.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: s.len(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (p, r, q, s) = (p.as_slice(), r.as_slice(), q.as_slice(), s.as_slice());
    let n_vars = m * n;
    let var = |i: usize, j: usize| i * n + j;

    let mut rows = Vec::with_capacity(n + 2 * m);
    let mut rhs = Vec::with_capacity(n + 2 * m);
    for j in 0..n {
        let mut row = vec![0.0; n_vars];
        for i in 0..m {
            row[var(i, j)] = 1.0;
        }
        rows.push(row);
        rhs.push(1.0);
    }
    for (input, output) in [(p, q), (r, s)] {
        for i in 0..m {
            let mut row = vec![0.0; n_vars];
            for j in 0..n {
                row[var(i, j)] = input[j];
            }
            rows.push(row);
            rhs.push(output[i]);
        }
    }
    let exact_basis: Vec<usize> = (0..n).map(|j| var(0, j)).collect();
    let (x, artificial) = phase_one(rows, rhs, exact_basis, n_vars);

    let mut residual: f64 = 0.0;
    for j in 0..n {
        let col: f64 = (0..m).map(|i| x[var(i, j)]).sum();
        residual = residual.max((col - 1.0).abs());
    }
    for (input, output) in [(p, q), (r, s)] {
        for i in 0..m {
            let image: f64 = (0..n).map(|j| x[var(i, j)] * input[j]).sum();
            residual = residual.max((image - output[i]).abs());
        }
    }
    let feasible = artificial <= tol && residual <= tol;
    Ok(FeasibilityResult {
        feasible,
        max_violation: if feasible { residual } else { residual.max(artificial) },
    })
}

/// LP verdict on whether `from` relatively majorizes `to`.
pub fn lp_relatively_majorizes(from: &AthermalityState, to: &AthermalityState, tol: f64) -> Result<FeasibilityResult> {
    lp_feasible(from.r(), from.g(), to.r(), to.g(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::relatively_majorizes;
    use crate::types::validate_state;

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identical_pairs_are_feasible() {
        let p = pv(&[0.6, 0.3, 0.1]);
        let r = p.clone();
        let res = lp_feasible(&p, &r, &pv(&[0.25, 0.75]), &pv(&[0.25, 0.75]), DEFAULT_TOL).unwrap();
        assert!(res.feasible && res.max_violation <= DEFAULT_TOL);
    }

    #[test]
    fn free_target_is_always_reachable() {
        let res = lp_feasible(
            &pv(&[0.1, 0.2, 0.7]),
            &pv(&[0.5, 0.3, 0.2]),
            &pv(&[0.4, 0.4, 0.2]),
            &pv(&[0.4, 0.4, 0.2]),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(res.feasible);
    }

    #[test]
    fn agrees_with_geometry_on_examples() {
        let a = validate_state(&[0.5, 0.5], &[0.045, 0.955]).unwrap();
        let b = validate_state(&[0.2, 0.8], &[0.045, 0.955]).unwrap();
        assert_eq!(
            lp_relatively_majorizes(&a, &b, DEFAULT_TOL).unwrap().feasible,
            relatively_majorizes(&a, &b)
        );
        assert_eq!(
            lp_relatively_majorizes(&b, &a, DEFAULT_TOL).unwrap().feasible,
            relatively_majorizes(&b, &a)
        );
        let c = validate_state(&[0.9, 0.1], &[0.8, 0.2]).unwrap();
        let d = validate_state(&[0.5, 0.5], &[0.045, 0.955]).unwrap();
        let res = lp_relatively_majorizes(&c, &d, DEFAULT_TOL).unwrap();
        assert!(!res.feasible && res.max_violation > DEFAULT_TOL);
    }

    #[test]
    fn cannot_create_athermality() {
        let free = validate_state(&[0.3, 0.7], &[0.3, 0.7]).unwrap();
        let target = validate_state(&[0.9, 0.1], &[0.3, 0.7]).unwrap();
        assert!(!lp_relatively_majorizes(&free, &target, DEFAULT_TOL).unwrap().feasible);
    }

    #[test]
    fn dimension_mismatch() {
        let err = lp_feasible(&pv(&[1.0]), &pv(&[0.5, 0.5]), &pv(&[1.0]), &pv(&[1.0]), DEFAULT_TOL);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn joint_permutation_invariance() {
        let p = [0.5, 0.3, 0.2];
        let r = [0.2, 0.3, 0.5];
        let q = [0.7, 0.3];
        let s = [0.4, 0.6];
        let base = lp_feasible(&pv(&p), &pv(&r), &pv(&q), &pv(&s), DEFAULT_TOL).unwrap();
        let perm = lp_feasible(
            &pv(&[p[2], p[0], p[1]]),
            &pv(&[r[2], r[0], r[1]]),
            &pv(&[q[1], q[0]]),
            &pv(&[s[1], s[0]]),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(base.feasible, perm.feasible);
    }
}
