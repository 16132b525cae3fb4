//! Gibbs vectors, partition functions and the pinching reduction of density
//! matrices to quasi-classical states.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::types::{AthermalityState, GibbsContext, ProbabilityVector};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-10;
/// Relative tolerance under which two Gibbs weights share a pinching block.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-12;

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteBeta(beta))
    }
}

/// `exp(-beta * h_i) / Z(beta)`, evaluated with the largest exponent shifted to zero.
///
/// Negative `beta` is allowed and describes a population inversion.
pub fn gibbs_vector(energies: &[f64], beta: f64) -> Result<ProbabilityVector> {
    check_beta(beta)?;
    if energies.is_empty() {
        return Err(Error::EmptyVector);
    }
    let exponents: Vec<f64> = energies.iter().map(|&h| -beta * h).collect();
    let shift = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights = exponents.iter().map(|&e| (e - shift).exp()).collect();
    Ok(ProbabilityVector::from_weights(weights))
}

/// `ln Z(beta)` via the shifted log-sum-exp.
pub fn log_partition(energies: &[f64], beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if energies.is_empty() {
        return Err(Error::EmptyVector);
    }
    let exponents: Vec<f64> = energies.iter().map(|&h| -beta * h).collect();
    let shift = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = exponents.iter().map(|&e| (e - shift).exp()).sum();
    Ok(shift + sum.ln())
}

/// Logistic function `1 / (1 + e^{-t})`, accurate in both tails.
pub fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex<f64>>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex<f64>>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected a non-empty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let d = entries[(i, j)] - entries[(j, i)].conj();
                if d.norm() > HERMITIAN_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let trace: Complex<f64> = (0..n).map(|i| entries[(i, i)]).sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {trace}")));
        }
        let hermitian = (&entries + entries.adjoint()).map(|z| z * 0.5);
        let min_eig = hermitian
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "minimal eigenvalue {min_eig} is negative"
            )));
        }
        Ok(Self { entries })
    }

    /// Builds a matrix from row-major `[re, im]` pairs.
    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidDensityMatrix("rows have unequal lengths".into()));
        }
        let m = DMatrix::from_fn(n, n, |i, j| Complex::new(rows[i][j][0], rows[i][j][1]));
        Self::new(m)
    }

    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let n = populations.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(populations[i], 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<f64>> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<f64> {
        self.entries[(i, j)]
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }
}

/// Block labels: indices whose Gibbs weights agree within the relative tolerance
/// share a label. Weights are chained in sorted order.
fn degeneracy_blocks(g: &[f64], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..g.len()).collect();
    idx.sort_by(|&a, &b| g[a].total_cmp(&g[b]));
    let mut labels = vec![0; g.len()];
    let mut label = 0;
    for w in 0..idx.len() {
        if w > 0 {
            let (a, b) = (g[idx[w - 1]], g[idx[w]]);
            if (b - a).abs() > tol * a.abs().max(b.abs()) {
                label += 1;
            }
        }
        labels[idx[w]] = label;
    }
    labels
}

/// Dephases `rho` onto the eigenspaces of the diagonal Gibbs state with weights `g`.
pub fn pinch(rho: &DensityMatrix, g: &ProbabilityVector, degeneracy_tol: f64) -> Result<DensityMatrix> {
    if rho.dim() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            found: rho.dim(),
        });
    }
    let labels = degeneracy_blocks(g.as_slice(), degeneracy_tol);
    let n = rho.dim();
    let entries = DMatrix::from_fn(n, n, |i, j| {
        if labels[i] == labels[j] {
            rho.entries[(i, j)]
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    Ok(DensityMatrix { entries })
}

/// Reduces a density matrix to the quasi-classical state of its pinched form.
///
/// `rho` is expressed in the caller's original level order; the result is in the
/// sorted order of `gibbs`.
pub fn to_quasiclassical(rho: &DensityMatrix, gibbs: &GibbsContext) -> Result<AthermalityState> {
    if rho.dim() != gibbs.dim() {
        return Err(Error::DimensionMismatch {
            expected: gibbs.dim(),
            found: rho.dim(),
        });
    }
    let g_sorted = gibbs.gibbs();
    let mut g_original = vec![0.0; gibbs.dim()];
    for (pos, &orig) in gibbs.order().iter().enumerate() {
        g_original[orig] = g_sorted[pos];
    }
    let g_original = ProbabilityVector::from_weights(g_original);
    let pinched = pinch(rho, &g_original, DEFAULT_DEGENERACY_TOL)?;
    let diag: Vec<f64> = pinched.diagonal_real().into_iter().map(|d| d.max(0.0)).collect();
    let r = gibbs.sort_paired(&diag)?;
    AthermalityState::new(ProbabilityVector::new(r)?, g_sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn gibbs_examples() {
        assert_eq!(gibbs_vector(&[0.0, 3.0], 0.0).unwrap().as_slice(), &[0.5, 0.5]);
        let g = gibbs_vector(&[0.0, 4f64.ln()], 1.0).unwrap();
        assert!((g[0] - 0.8).abs() < 1e-15 && (g[1] - 0.2).abs() < 1e-15);
        let pos = gibbs_vector(&[0.0, 1.7], 0.9).unwrap();
        let neg = gibbs_vector(&[0.0, 1.7], -0.9).unwrap();
        assert!((pos[0] - neg[1]).abs() < 1e-15 && (pos[1] - neg[0]).abs() < 1e-15);
        assert!(matches!(gibbs_vector(&[0.0], f64::NAN), Err(Error::NonFiniteBeta(_))));
        assert!(matches!(gibbs_vector(&[0.0], f64::INFINITY), Err(Error::NonFiniteBeta(_))));
    }

    #[test]
    fn gibbs_survives_large_exponents() {
        let g = gibbs_vector(&[0.0, 1.0, 2.0], 300.0).unwrap();
        assert!(g.as_slice().iter().all(|p| p.is_finite()));
        assert!((g[0] - 1.0).abs() < 1e-15);
        let g = gibbs_vector(&[0.0, 1.0, 2.0], -300.0).unwrap();
        assert!((g[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_partition_examples() {
        assert!((log_partition(&[0.0, 0.0], 3.3).unwrap() - LN_2).abs() < 1e-15);
        assert!((log_partition(&[0.0, 4f64.ln()], 1.0).unwrap() - 1.25f64.ln()).abs() < 1e-15);
        assert_eq!(log_partition(&[0.7], 2.0).unwrap(), -1.4);
        assert!((log_partition(&[1000.0, 1001.0], 1.0).unwrap() - (-1000.0 + (1.0 + (-1f64).exp()).ln())).abs() < 1e-9);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.5]).is_ok());
        assert!(DensityMatrix::diagonal(&[0.6, 0.5]).is_err());
        assert!(DensityMatrix::diagonal(&[1.5, -0.5]).is_err());
        let non_hermitian = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(non_hermitian).is_err());
        let plus = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(plus).is_ok());
    }

    fn three_level() -> DensityMatrix {
        DensityMatrix::new(DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.4, 0.0), c(0.1, 0.05), c(0.1, 0.0),
                c(0.1, -0.05), c(0.3, 0.0), c(0.05, 0.0),
                c(0.1, 0.0), c(0.05, 0.0), c(0.3, 0.0),
            ],
        ))
        .unwrap()
    }

    #[test]
    fn pinch_examples() {
        let d = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        let g = ProbabilityVector::new(vec![0.25, 0.25, 0.5]).unwrap();
        assert_eq!(pinch(&d, &g, DEFAULT_DEGENERACY_TOL).unwrap(), d);

        let rho = three_level();
        let distinct = ProbabilityVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let p = pinch(&rho, &distinct, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(p, DensityMatrix::diagonal(&[0.4, 0.3, 0.3]).unwrap());

        let p = pinch(&rho, &g, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(p.get(0, 1), rho.get(0, 1));
        assert_eq!(p.get(1, 0), rho.get(1, 0));
        assert_eq!(p.get(0, 2), c(0.0, 0.0));
        assert_eq!(p.get(1, 2), c(0.0, 0.0));
        assert_eq!(p.get(2, 1), c(0.0, 0.0));

        assert!(matches!(pinch(&rho, &ProbabilityVector::uniform(2), 1e-12), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn quasiclassical_examples() {
        let ctx = GibbsContext::new(vec![0.0, 1.0, 2.5], 0.8).unwrap();
        let gibbs = DensityMatrix::diagonal(ctx.gibbs().as_slice()).unwrap();
        assert!(to_quasiclassical(&gibbs, &ctx).unwrap().is_free());

        let qubit = GibbsContext::new(vec![0.0, 1.0], 1.0).unwrap();
        let excited = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        assert_eq!(to_quasiclassical(&excited, &qubit).unwrap().r().as_slice(), &[0.0, 1.0]);

        let plus = DensityMatrix::from_rows(&[vec![[0.5, 0.0], [0.5, 0.0]], vec![[0.5, 0.0], [0.5, 0.0]]]).unwrap();
        assert_eq!(to_quasiclassical(&plus, &qubit).unwrap().r().as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn quasiclassical_follows_energy_sorting() {
        // level 0 is the excited one in the caller's order
        let ctx = GibbsContext::new(vec![2.0, 0.0], 1.0).unwrap();
        let rho = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let s = to_quasiclassical(&rho, &ctx).unwrap();
        assert_eq!(s.r().as_slice(), &[0.1, 0.9]);
        assert!(s.g()[0] > s.g()[1]);
    }

    #[test]
    fn pinch_is_idempotent_and_preserves_trace() {
        let rho = three_level();
        let g = ProbabilityVector::new(vec![0.25, 0.25, 0.5]).unwrap();
        let once = pinch(&rho, &g, DEFAULT_DEGENERACY_TOL).unwrap();
        let twice = pinch(&once, &g, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(once, twice);
        assert_eq!(once.diagonal_real(), rho.diagonal_real());
        assert!(DensityMatrix::new(once.entries().clone()).is_ok());
    }

    proptest! {
        #[test]
        fn gibbs_is_strictly_positive(
            energies in prop::collection::vec(-20.0f64..20.0, 1..8),
            beta in -15.0f64..15.0,
        ) {
            let g = gibbs_vector(&energies, beta).unwrap();
            prop_assert!(g.as_slice().iter().all(|&p| p > 0.0));
            let lz = log_partition(&energies, beta).unwrap();
            for (h, p) in energies.iter().zip(g.as_slice()) {
                prop_assert!(((-beta * h - lz).exp() - p).abs() < 1e-12);
            }
        }
    }
}
