//! Fractional Gaussian noise synthesis.
//!
//! The increments of a fractional Brownian motion form a stationary Gaussian
//! sequence with autocovariance
//! `rho(i) = (|i+1|^{2h} - 2|i|^{2h} + |i-1|^{2h}) / 2`.
//! Two exact samplers are provided:
//!
//! * a Cholesky factorization of the n x n Toeplitz covariance matrix,
//!   used for series up to [`CHOLESKY_MAX`] increments (the factor is cached
//!   per `(n, h)` and shared across threads);
//! * circulant embedding (Davies-Harte), used above that size. The covariance
//!   circulant of fractional Gaussian noise is nonnegative definite for
//!   0 < h < 1, so the method is exact as well; the eigenvalue check is kept
//!   as a guard.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Largest series length synthesized by direct Cholesky factorization.
pub const CHOLESKY_MAX: usize = 2048;

/// Autocovariance of standard fractional Gaussian noise at integer lag.
///
/// Requires `0 < hurst < 1`. At `hurst = 1/2` this is 1 at lag 0 and 0
/// elsewhere (independent increments).
pub fn fgn_autocovariance(hurst: f64, lag: usize) -> f64 {
    assert!(
        hurst > 0.0 && hurst < 1.0,
        "hurst must lie in (0,1), got {hurst}"
    );
    let i = lag as f64;
    let p = 2.0 * hurst;
    0.5 * ((i + 1.0).powf(p) - 2.0 * i.powf(p) + (i - 1.0).abs().powf(p))
}

/// Sampler selection for [`sample_fgn`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgnMethod {
    /// Cholesky for `n <= CHOLESKY_MAX`, circulant embedding beyond.
    Auto,
    Cholesky,
    Circulant,
}

enum Factor {
    /// Packed lower-triangular Cholesky factor of the covariance matrix.
    Cholesky(Vec<f64>),
    Circulant(CirculantWeights),
}

struct CirculantWeights {
    /// `sqrt(lambda_k / (2M))` at k = 0 and k = M/2, `sqrt(lambda_k / (4M))`
    /// elsewhere, with M = 2n the embedding size.
    w: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

/// Key: (series length, hurst bits, circulant?).
type FactorKey = (usize, u64, bool);

static CACHE: RwLock<Option<HashMap<FactorKey, Arc<Factor>>>> = RwLock::new(None);

fn cached_factor(n: usize, hurst: f64, circulant: bool) -> Result<Arc<Factor>> {
    let key = (n, hurst.to_bits(), circulant);
    if let Some(map) = CACHE.read().expect("fgn cache poisoned").as_ref() {
        if let Some(f) = map.get(&key) {
            return Ok(Arc::clone(f));
        }
    }
    let factor = Arc::new(if circulant {
        Factor::Circulant(circulant_weights(n, hurst)?)
    } else {
        Factor::Cholesky(cholesky_factor(n, hurst)?)
    });
    let mut guard = CACHE.write().expect("fgn cache poisoned");
    let map = guard.get_or_insert_with(HashMap::new);
    Ok(Arc::clone(map.entry(key).or_insert(factor)))
}

/// Draw one standard fGn series of length `n` (unit variance increments).
///
/// The draw order is fixed: Cholesky consumes `n` normals, circulant
/// embedding consumes `2 * n`, so a given `(seed, method)` always yields the
/// same series.
pub fn sample_fgn<R: Rng + ?Sized>(
    n: usize,
    hurst: f64,
    method: FgnMethod,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("fgn length must be >= 1".into()));
    }
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "hurst must lie in (0,1), got {hurst}"
        )));
    }
    let circulant = match method {
        FgnMethod::Auto => n > CHOLESKY_MAX,
        FgnMethod::Cholesky => false,
        FgnMethod::Circulant => true,
    };
    let factor = cached_factor(n, hurst, circulant)?;
    let mut out = vec![0.0; n];
    match &*factor {
        Factor::Cholesky(l) => {
            let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            // out = L z, packed row-major lower triangle
            for i in 0..n {
                let row = &l[i * (i + 1) / 2..(i + 1) * (i + 2) / 2];
                out[i] = row.iter().zip(&z).map(|(a, b)| a * b).sum();
            }
        }
        Factor::Circulant(cw) => {
            let m = 2 * n;
            let gn: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let gn2: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let mut w: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); m];
            w[0] = Complex::new(cw.w[0] * gn[0], 0.0);
            w[n] = Complex::new(cw.w[n] * gn2[0], 0.0);
            for i in 1..n {
                w[i] = Complex::new(cw.w[i] * gn[i], cw.w[i] * gn2[i]);
                w[m - i] = Complex::new(cw.w[m - i] * gn[i], -cw.w[m - i] * gn2[i]);
            }
            cw.fft.process(&mut w);
            for i in 0..n {
                out[i] = w[i].re;
            }
        }
    }
    Ok(out)
}

fn cholesky_factor(n: usize, hurst: f64) -> Result<Vec<f64>> {
    let cov: Vec<f64> = (0..n).map(|i| fgn_autocovariance(hurst, i)).collect();
    let mut l = vec![0.0; n * (n + 1) / 2];
    for i in 0..n {
        for j in 0..=i {
            let mut s = cov[i - j];
            for k in 0..j {
                s -= l[i * (i + 1) / 2 + k] * l[j * (j + 1) / 2 + k];
            }
            if j == i {
                if s <= 0.0 {
                    return Err(Error::Internal(format!(
                        "fgn covariance lost positive definiteness at row {i} (h={hurst})"
                    )));
                }
                l[i * (i + 1) / 2 + i] = s.sqrt();
            } else {
                l[i * (i + 1) / 2 + j] = s / l[j * (j + 1) / 2 + j];
            }
        }
    }
    Ok(l)
}

fn circulant_weights(n: usize, hurst: f64) -> Result<CirculantWeights> {
    let m = 2 * n;
    // First row of the covariance circulant: rho(0..n-1), 0, rho(n-1..1).
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    for i in 0..n {
        row.push(Complex::new(fgn_autocovariance(hurst, i), 0.0));
    }
    row.push(Complex::new(0.0, 0.0));
    for i in (1..n).rev() {
        row.push(Complex::new(fgn_autocovariance(hurst, i), 0.0));
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);

    let max_eig = row.iter().map(|c| c.re).fold(0.0, f64::max);
    let mut w = Vec::with_capacity(m);
    for (k, c) in row.iter().enumerate() {
        let mut eig = c.re;
        if eig < 0.0 {
            if eig < -1e-8 * max_eig {
                return Err(Error::Internal(format!(
                    "circulant embedding has negative eigenvalue {eig} (n={n}, h={hurst})"
                )));
            }
            eig = 0.0;
        }
        let denom = if k == 0 || k == n { m as f64 } else { 2.0 * m as f64 };
        w.push((eig / denom).sqrt());
    }
    Ok(CirculantWeights { w, fft })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;
    use approx::assert_abs_diff_eq;

    #[test]
    fn autocovariance_closed_form() {
        // variance of standard noise
        assert_abs_diff_eq!(fgn_autocovariance(0.5, 0), 1.0, epsilon = 1e-15);
        // h = 1/2 has independent increments
        assert_abs_diff_eq!(fgn_autocovariance(0.5, 3), 0.0, epsilon = 1e-15);
        // direct evaluation at h = 0.85, lag 1: (2^1.7 - 2)/2
        assert_abs_diff_eq!(
            fgn_autocovariance(0.85, 1),
            0.5 * (2f64.powf(1.7) - 2.0),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(fgn_autocovariance(0.85, 1), 0.6245, epsilon = 5e-5);
    }

    /// Sample autocovariance of both samplers against the closed form, using
    /// batch means for the standard error.
    fn check_sample_cov(method: FgnMethod, n: usize, hurst: f64, seed: u64) {
        let mut rng = RngSeed::new(seed).rng();
        let series = sample_fgn(n, hurst, method, &mut rng).unwrap();
        let blocks = 50;
        let blen = n / blocks;
        for lag in 0..=5 {
            let mut means = Vec::with_capacity(blocks);
            for b in 0..blocks {
                let s = &series[b * blen..(b + 1) * blen];
                let c: f64 = s
                    .iter()
                    .zip(&s[lag..])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / (s.len() - lag) as f64;
                means.push(c);
            }
            let mean = means.iter().sum::<f64>() / blocks as f64;
            let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (blocks - 1) as f64;
            let se = (var / blocks as f64).sqrt();
            let truth = fgn_autocovariance(hurst, lag);
            assert!(
                (mean - truth).abs() <= 3.0 * se.max(1e-4),
                "{method:?} h={hurst} lag={lag}: {mean} vs {truth} (se {se})"
            );
        }
    }

    #[test]
    fn circulant_matches_autocovariance() {
        for (i, &h) in [0.13, 0.5, 0.85].iter().enumerate() {
            check_sample_cov(FgnMethod::Circulant, 100_000, h, 10 + i as u64);
        }
    }

    #[test]
    fn cholesky_matches_autocovariance() {
        for (i, &h) in [0.13, 0.5, 0.85].iter().enumerate() {
            check_sample_cov(FgnMethod::Cholesky, 2000, h, 20 + i as u64);
        }
    }

    #[test]
    fn zero_length_and_bad_hurst_rejected() {
        let mut rng = RngSeed::new(0).rng();
        assert!(sample_fgn(0, 0.5, FgnMethod::Auto, &mut rng).is_err());
        assert!(sample_fgn(8, 0.0, FgnMethod::Auto, &mut rng).is_err());
        assert!(sample_fgn(8, 1.0, FgnMethod::Auto, &mut rng).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let a = sample_fgn(64, 0.3, FgnMethod::Cholesky, &mut RngSeed::new(5).rng()).unwrap();
        let b = sample_fgn(64, 0.3, FgnMethod::Cholesky, &mut RngSeed::new(5).rng()).unwrap();
        assert_eq!(a, b);
        let c = sample_fgn(64, 0.3, FgnMethod::Circulant, &mut RngSeed::new(5).rng()).unwrap();
        let d = sample_fgn(64, 0.3, FgnMethod::Circulant, &mut RngSeed::new(5).rng()).unwrap();
        assert_eq!(c, d);
    }
}
