//! Validated domain types shared by every other module.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Allowed distance of a raw vector's sum from 1 before it is rejected.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A probability vector stored in exactly renormalized form.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, &value) in entries.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteEntry { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NormalizationOutOfTolerance { sum });
        }
        Ok(Self(renormalize(entries)))
    }

    /// Builds a vector from non-negative weights of arbitrary positive total.
    pub(crate) fn from_weights(weights: Vec<f64>) -> Self {
        let sum: f64 = weights.iter().sum();
        debug_assert!(sum > 0.0 && sum.is_finite());
        Self(renormalize(weights.into_iter().map(|w| w / sum).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        Self::from_weights(vec![1.0; n])
    }

    /// Ky-Fan style prefix sums in stored order: entry k is the mass of the first k + 1 entries.
    pub fn prefix_sums(&self) -> Vec<f64> {
        self.0
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }
}

impl std::ops::Index<usize> for ProbabilityVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

// Vectors within a few ulps of unit sum are left untouched; anything else is
// divided by its sum with the rounding residue pushed into the largest entry.
fn renormalize(mut v: Vec<f64>) -> Vec<f64> {
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() <= 8.0 * v.len() as f64 * f64::EPSILON {
        return v;
    }
    for x in v.iter_mut() {
        *x /= sum;
    }
    // push the rounding residue into the largest entry until the sum is exact
    let largest = (0..v.len()).fold(0, |best, i| if v[i] > v[best] { i } else { best });
    for _ in 0..8 {
        let sum: f64 = v.iter().sum();
        if sum == 1.0 {
            break;
        }
        v[largest] += 1.0 - sum;
    }
    v
}

/// Inverse temperature (or any extended real) with explicit infinite tags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
    NegInf,
}

pub type ExtendedBeta = ExtendedReal;

impl ExtendedReal {
    /// Maps IEEE infinities to the tagged variants. Panics on NaN.
    pub fn from_f64(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN cannot be an extended real");
        if x == f64::INFINITY {
            ExtendedReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::Finite(x)
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// Lossy view for plotting and printing.
    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInf => f64::INFINITY,
            ExtendedReal::NegInf => f64::NEG_INFINITY,
        }
    }

    /// `self - c` for a finite shift `c`.
    pub fn minus(&self, c: f64) -> Self {
        match *self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x - c),
            other => other,
        }
    }

    /// `c - self` for a finite `c`.
    pub fn subtracted_from(&self, c: f64) -> Self {
        match *self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(c - x),
            ExtendedReal::PosInf => ExtendedReal::NegInf,
            ExtendedReal::NegInf => ExtendedReal::PosInf,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (PosInf, PosInf) | (NegInf, NegInf) => Some(Ordering::Equal),
            (PosInf, _) | (_, NegInf) => Some(Ordering::Greater),
            (NegInf, _) | (_, PosInf) => Some(Ordering::Less),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInf => f.write_str("+inf"),
            ExtendedReal::NegInf => f.write_str("-inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            ExtendedReal::Finite(x) => serializer.serialize_f64(x),
            ExtendedReal::PosInf => serializer.serialize_str("+inf"),
            ExtendedReal::NegInf => serializer.serialize_str("-inf"),
        }
    }
}

/// Energy levels of a system together with the background inverse temperature.
///
/// Levels are stored in non-decreasing order. `order[i]` is the position in the
/// caller's original list of the i-th stored level, so paired data (populations,
/// density-matrix rows) can be permuted consistently.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsContext {
    energies: Vec<f64>,
    beta: f64,
    order: Vec<usize>,
}

impl GibbsContext {
    pub fn new(energies: Vec<f64>, beta: f64) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, &value) in energies.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteEntry { index, value });
            }
        }
        if !beta.is_finite() {
            return Err(Error::NonFiniteBeta(beta));
        }
        if beta <= 0.0 {
            return Err(Error::NonPositiveBeta(beta));
        }
        let mut order: Vec<usize> = (0..energies.len()).collect();
        // sort_by is stable, so equal energies keep their input order
        order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
        let energies = order.iter().map(|&i| energies[i]).collect();
        Ok(Self { energies, beta, order })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Reorders a list given in the caller's original level order into stored order.
    pub fn sort_paired(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: values.len(),
            });
        }
        Ok(self.order.iter().map(|&i| values[i]).collect())
    }

    /// Gibbs vector at the background temperature, in stored order.
    pub fn gibbs(&self) -> ProbabilityVector {
        crate::thermo::gibbs_vector(&self.energies, self.beta)
            .expect("beta is validated finite")
    }

    pub fn is_degenerate(&self) -> bool {
        self.energies.first() == self.energies.last()
    }

    /// Multiplicity of the lowest level under exact equality.
    pub fn ground_degeneracy(&self) -> usize {
        let h0 = self.energies[0];
        self.energies.iter().take_while(|&&h| h == h0).count()
    }

    /// Multiplicity of the highest level under exact equality.
    pub fn top_degeneracy(&self) -> usize {
        let top = self.energies[self.dim() - 1];
        self.energies.iter().rev().take_while(|&&h| h == top).count()
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        let mut ctx = Self::new(self.energies.clone(), beta)?;
        ctx.order = self.order.clone();
        Ok(ctx)
    }
}

/// A quasi-classical athermality state: populations `r` relative to a full-rank Gibbs vector `g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AthermalityState {
    r: ProbabilityVector,
    g: ProbabilityVector,
}

impl AthermalityState {
    pub fn new(r: ProbabilityVector, g: ProbabilityVector) -> Result<Self> {
        if r.len() != g.len() {
            return Err(Error::DimensionMismatch {
                expected: g.len(),
                found: r.len(),
            });
        }
        if let Some((index, &value)) = g.as_slice().iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::RankDeficientGibbs { index, value });
        }
        Ok(Self { r, g })
    }

    /// The free state `(g, g)`.
    pub fn free(g: ProbabilityVector) -> Result<Self> {
        Self::new(g.clone(), g)
    }

    pub fn r(&self) -> &ProbabilityVector {
        &self.r
    }

    pub fn g(&self) -> &ProbabilityVector {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    pub fn is_free(&self) -> bool {
        self.r == self.g
    }
}

/// Validates raw population and Gibbs lists into an [`AthermalityState`].
pub fn validate_state(r: &[f64], g: &[f64]) -> Result<AthermalityState> {
    if r.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            found: r.len(),
        });
    }
    if let Some((index, &value)) = g.iter().enumerate().find(|(_, &v)| v <= 0.0) {
        return Err(Error::RankDeficientGibbs { index, value });
    }
    AthermalityState::new(
        ProbabilityVector::new(r.to_vec())?,
        ProbabilityVector::new(g.to_vec())?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_free_state_is_valid() {
        let s = validate_state(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert!(s.is_free());
    }

    #[test]
    fn generic_state_is_valid() {
        let s = validate_state(&[0.7, 0.2, 0.1], &[0.2, 0.3, 0.5]).unwrap();
        assert_eq!(s.dim(), 3);
        assert!(!s.is_free());
    }

    #[test]
    fn zero_gibbs_entry_is_rejected() {
        let err = validate_state(&[0.5, 0.5], &[1.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::RankDeficientGibbs { index: 1, .. }));
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            validate_state(&[1.2, -0.2], &[0.5, 0.5]),
            Err(Error::NegativeEntry { index: 1, .. })
        ));
        assert!(matches!(
            validate_state(&[0.5, 0.6], &[0.5, 0.5]),
            Err(Error::NormalizationOutOfTolerance { .. })
        ));
        assert!(matches!(
            validate_state(&[1.0], &[0.5, 0.5]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(validate_state(&[], &[]), Err(Error::EmptyVector)));
    }

    #[test]
    fn sum_within_tolerance_is_renormalized() {
        let p = ProbabilityVector::new(vec![0.5 + 4e-10, 0.5]).unwrap();
        let sum: f64 = p.as_slice().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extended_order() {
        use ExtendedReal::*;
        assert!(NegInf < Finite(-1e300));
        assert!(Finite(1e300) < PosInf);
        assert_eq!(PosInf, PosInf);
        assert_eq!(Finite(2.0).min(PosInf), Finite(2.0));
        assert_eq!(Finite(2.0).max(NegInf), Finite(2.0));
        assert_eq!(PosInf.subtracted_from(1.0), NegInf);
        assert_eq!(ExtendedReal::from_f64(f64::NEG_INFINITY), NegInf);
    }

    #[test]
    fn gibbs_context_sorts_with_stable_permutation() {
        let ctx = GibbsContext::new(vec![2.0, 0.0, 1.0, 0.0], 1.0).unwrap();
        assert_eq!(ctx.energies(), &[0.0, 0.0, 1.0, 2.0]);
        assert_eq!(ctx.order(), &[1, 3, 2, 0]);
        assert_eq!(ctx.sort_paired(&[10.0, 11.0, 12.0, 13.0]).unwrap(), vec![11.0, 13.0, 12.0, 10.0]);
        assert_eq!(ctx.ground_degeneracy(), 2);
        assert_eq!(ctx.top_degeneracy(), 1);
        assert!(GibbsContext::new(vec![1.0, 1.0], 1.0).unwrap().is_degenerate());
        assert!(GibbsContext::new(vec![0.0, 1.0], 0.0).is_err());
    }

    fn raw_simplex(max_dim: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, 1..=max_dim).prop_filter_map("zero mass", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6).then(|| w.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn validation_is_idempotent(r in raw_simplex(8), seed in 0u64..1000) {
            let g: Vec<f64> = (0..r.len()).map(|i| 1.0 + ((seed + i as u64) % 7) as f64).collect();
            let gs: f64 = g.iter().sum();
            let g: Vec<f64> = g.iter().map(|x| x / gs).collect();
            let s1 = validate_state(&r, &g).unwrap();
            let s2 = validate_state(s1.r().as_slice(), s1.g().as_slice()).unwrap();
            prop_assert_eq!(&s1, &s2);
            for (a, b) in r.iter().zip(s1.r().as_slice()) {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(f64::MIN_POSITIVE) + 1e-300);
            }
        }
    }
}
