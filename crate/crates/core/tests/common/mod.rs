#![allow(dead_code)]

use athermal::{validate_state, AthermalityState};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded generator; `ATHERMAL_SEED` shifts every seed for reruns on fresh draws.
pub fn rng(seed: u64) -> ChaCha8Rng {
    let offset: u64 = std::env::var("ATHERMAL_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(offset.wrapping_mul(1_000_003)))
}

/// Random point of the simplex; with `allow_zeros` some entries are dropped to 0.
pub fn simplex<R: Rng>(rng: &mut R, n: usize, allow_zeros: bool) -> Vec<f64> {
    loop {
        let mut w: Vec<f64> = (0..n).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect();
        if allow_zeros {
            for x in w.iter_mut() {
                if rng.gen_bool(0.15) {
                    *x = 0.0;
                }
            }
        }
        let s: f64 = w.iter().sum();
        if s > 0.0 {
            return w.iter().map(|x| x / s).collect();
        }
    }
}

/// Strictly positive Gibbs-like vector with entries at least `floor` before normalization.
pub fn positive<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02f64..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

pub fn state<R: Rng>(rng: &mut R, n: usize) -> AthermalityState {
    let r = simplex(rng, n, true);
    let g = positive(rng, n);
    validate_state(&r, &g).unwrap()
}

/// Random column-stochastic `m × n` matrix, stored by rows.
pub fn stochastic<R: Rng>(rng: &mut R, m: usize, n: usize) -> Vec<Vec<f64>> {
    let mut e = vec![vec![0.0; n]; m];
    for j in 0..n {
        let col = simplex(rng, m, true);
        for i in 0..m {
            e[i][j] = col[i];
        }
    }
    e
}

pub fn apply(e: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    e.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Image of `state` under a random stochastic map into dimension `m`.
pub fn image<R: Rng>(rng: &mut R, s: &AthermalityState, m: usize) -> Option<AthermalityState> {
    let e = stochastic(rng, m, s.dim());
    let g = apply(&e, s.g().as_slice());
    if g.iter().any(|&x| x <= 1e-9) {
        return None;
    }
    validate_state(&apply(&e, s.r().as_slice()), &g).ok()
}

/// State of random dimension in `2..=max_dim`.
pub fn state_upto<R: Rng>(rng: &mut R, max_dim: usize) -> AthermalityState {
    let n = rng.gen_range(2..=max_dim);
    state(rng, n)
}

/// Image under a random stochastic map into a random dimension in `2..=max_dim`.
pub fn image_upto<R: Rng>(rng: &mut R, s: &AthermalityState, max_dim: usize) -> Option<AthermalityState> {
    let m = rng.gen_range(2..=max_dim);
    image(rng, s, m)
}
