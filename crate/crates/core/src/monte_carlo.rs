//! Floating-point estimates of `I(a)` by sampling Haar orthogonal matrices.
//!
//! Seed contract: samples are split into batches of [`BATCH_SIZE`]. Batch
//! `b` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream `b`,
//! so each batch is reproducible on its own. Batch statistics are merged in
//! batch order.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExponentMatrix;

pub const BATCH_SIZE: u64 = 8192;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// A Haar-distributed element of `O_n`.
///
/// QR of a Gaussian matrix, with column `j` of `Q` multiplied by the sign of
/// `R_jj`. Without that correction the result is not Haar distributed.
pub fn haar_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    assert!(n >= 1, "n must be positive");
    loop {
        let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        let qr = g.qr();
        let r = qr.r();
        if (0..n).any(|j| r[(j, j)].abs() < 1e-10) {
            continue;
        }
        let mut q = qr.q();
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        return q;
    }
}

/// Streaming mean and variance (Welford), mergeable (Chan et al.).
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * (self.count as f64) * (other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }
}

fn integrand(a: &ExponentMatrix, u: &DMatrix<f64>) -> f64 {
    let mut v = 1.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let e = a.get(i, j);
            if e > 0 {
                v *= u[(i, j)].powi(e as i32);
            }
        }
    }
    v
}

/// Monte Carlo estimate of `I(a)` over `O_n`.
pub fn mc_integral(a: &ExponentMatrix, n: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    let need = a.rows().max(a.cols()).max(1);
    if (n as usize) < need {
        return Err(Error::domain(format!(
            "n={n} is smaller than the {}x{} exponent matrix",
            a.rows(),
            a.cols()
        )));
    }
    if samples == 0 {
        return Err(Error::contract("at least one sample is required"));
    }
    let batches = samples.div_ceil(BATCH_SIZE);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let len = BATCH_SIZE.min(samples - b * BATCH_SIZE);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(integrand(a, &haar_sample(n as usize, &mut rng)));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let standard_error = if total.count > 1 {
        (total.m2 / (total.count - 1) as f64 / total.count as f64).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate { mean: total.mean, standard_error, samples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u32]]) -> ExponentMatrix {
        ExponentMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn samples_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..8 {
            for _ in 0..50 {
                let q = haar_sample(n, &mut rng);
                let err = (q.transpose() * &q - DMatrix::<f64>::identity(n, n)).abs().max();
                assert!(err <= 1e-12, "n={n} err={err}");
                let row: f64 = q.row(0).iter().map(|x| x * x).sum();
                assert!((row - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn reproducible() {
        let a = m(&[&[2, 1], &[1, 0]]);
        let x = mc_integral(&a, 3, 20_000, 11).unwrap();
        let y = mc_integral(&a, 3, 20_000, 11).unwrap();
        assert_eq!(x, y);
        assert_ne!(x, mc_integral(&a, 3, 20_000, 12).unwrap());
    }

    #[test]
    fn first_moments() {
        let e = mc_integral(&m(&[&[2]]), 3, 200_000, 1).unwrap();
        assert!((e.mean - 1.0 / 3.0).abs() <= 5.0 * e.standard_error);
        let e = mc_integral(&m(&[&[1]]), 3, 200_000, 2).unwrap();
        assert!(e.mean.abs() <= 5.0 * e.standard_error);
        let e = mc_integral(&m(&[&[1, 1], &[1, 1]]), 3, 200_000, 3).unwrap();
        assert!((e.mean + 1.0 / 30.0).abs() <= 5.0 * e.standard_error);
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut left = Moments::default();
        let mut right = Moments::default();
        xs[..313].iter().for_each(|&x| left.push(x));
        xs[313..].iter().for_each(|&x| right.push(x));
        let merged = left.merge(right);
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-8);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(mc_integral(&m(&[&[2, 0, 0]]), 2, 10, 0), Err(Error::Domain(_))));
        assert!(mc_integral(&m(&[&[2]]), 3, 0, 0).is_err());
        let e = mc_integral(&m(&[&[2]]), 3, 1, 0).unwrap();
        assert_eq!(e.standard_error, 0.0);
    }
}
