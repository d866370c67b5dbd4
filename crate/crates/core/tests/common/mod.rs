#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polynomial extrapolation of samples (x_i, y_i) to x = 0 (Neville).
pub fn extrapolate<T>(xs: &[f64], ys: &[T]) -> T
where
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let mut p: Vec<T> = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            // p_i = (x_j p_i − x_i p_{i+1}) / (x_j − x_i), evaluated at 0
            p[i] = p[i] * (xj / (xj - xi)) + p[i + 1] * (-xi / (xj - xi));
        }
    }
    p[0]
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
