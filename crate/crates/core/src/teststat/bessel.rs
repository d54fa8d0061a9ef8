//! Bessel functions J0, J1, the positive zeros of J0, and the series
//! expansion of the distribution of `S0 = sup_{0<=s<=1} ||W_s||` for a
//! standard planar Wiener process `W`:
//!
//! `P(S0 <= x) = sum_{k>=1} 2 exp(-j_{0,k}^2 / (2 x^2)) / (j_{0,k} J1(j_{0,k}))`
//!
//! J0 and J1 are evaluated by their power series for |x| <= 12 and by the
//! Hankel asymptotic expansion beyond; both are accurate to well below 1e-10
//! over the range the zero finder visits.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::RwLock;

use crate::error::{Error, Result};

/// Memoized `(j_{0,k}, j_{0,k} * J1(j_{0,k}))` pairs, grown on demand; the
/// series CDF is evaluated many times per calibration run.
static SERIES_TERMS: RwLock<Vec<(f64, f64)>> = RwLock::new(Vec::new());

fn series_term(k: usize) -> (f64, f64) {
    debug_assert!(k >= 1);
    if let Some(&pair) = SERIES_TERMS.read().expect("series cache poisoned").get(k - 1) {
        return pair;
    }
    let mut cache = SERIES_TERMS.write().expect("series cache poisoned");
    while cache.len() < k {
        let z = j0_zero(cache.len() + 1);
        cache.push((z, z * bessel_j1(z)));
    }
    cache[k - 1]
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 12.0 {
        // sum (-1)^k (x^2/4)^k / (k!)^2
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..80 {
            term *= -q / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        sum
    } else {
        let (p, q) = hankel_pq(0, ax);
        let chi = ax - FRAC_PI_4;
        (2.0 / (PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

/// Bessel function of the first kind, order one.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let val = if ax <= 12.0 {
        // (x/2) sum (-1)^k (x^2/4)^k / (k! (k+1)!)
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..80 {
            term *= -q / ((k * (k + 1)) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        0.5 * ax * sum
    } else {
        let (p, q) = hankel_pq(1, ax);
        let chi = ax - 3.0 * FRAC_PI_4;
        (2.0 / (PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
    };
    if x < 0.0 {
        -val
    } else {
        val
    }
}

/// Modulating series P_nu, Q_nu of the Hankel expansion. Term k carries
/// `a_k = prod_{j<=k} (mu - (2j-1)^2) / (k! (8x)^k)` with mu = 4 nu^2; even k
/// feed P with alternating sign, odd k feed Q.
fn hankel_pq(nu: u32, x: f64) -> (f64, f64) {
    let mu = (4 * nu * nu) as f64;
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut ak = 1.0;
    for k in 1..=20u32 {
        ak *= (mu - ((2 * k - 1) as f64).powi(2)) * inv8x / k as f64;
        match k % 4 {
            1 => q += ak,
            2 => p -= ak,
            3 => q -= ak,
            _ => p += ak,
        }
        if ak.abs() < 1e-18 {
            break;
        }
    }
    (p, q)
}

/// `k`-th positive zero of J0 (1-based), by Newton iteration from McMahon's
/// expansion. `J0'(x) = -J1(x)`.
pub fn j0_zero(k: usize) -> f64 {
    assert!(k >= 1, "zeros are indexed from 1");
    let beta = (k as f64 - 0.25) * PI;
    let b8 = 8.0 * beta;
    // McMahon: beta + 1/(8 beta) - 124/(3 (8 beta)^3) + ...
    let mut x = beta + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3)) + 120928.0 / (15.0 * b8.powi(5));
    for _ in 0..8 {
        let f = bessel_j0(x);
        let df = -bessel_j1(x);
        let dx = f / df;
        x -= dx;
        if dx.abs() < 1e-14 * x {
            break;
        }
    }
    x
}

/// Partial series sum for the law of `S0` plus a bound on the truncated tail.
#[derive(Clone, Copy, Debug)]
pub struct SeriesCdf {
    pub value: f64,
    /// Upper bound on the magnitude of the dropped tail.
    pub tail_bound: f64,
}

/// CDF of `S0` at `x > 0`, truncated after `k_max >= 1` terms.
///
/// Terms decay like `exp(-j_{0,k}^2 / (2 x^2))`, so a handful suffice for
/// moderate `x`; the returned bound certifies the truncation.
pub fn asymptotic_cdf_s0(x: f64, k_max: usize) -> Result<SeriesCdf> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "series argument must be positive, got {x}"
        )));
    }
    if k_max < 1 {
        return Err(Error::InvalidParameter("k_max must be >= 1".into()));
    }
    let inv2x2 = 1.0 / (2.0 * x * x);
    let mut sum = 0.0;
    for k in 1..=k_max {
        let (z, zj1) = series_term(k);
        let term = 2.0 * (-z * z * inv2x2).exp() / zj1;
        sum += term;
        // A term below machine noise ends the useful part of the series.
        if term.abs() < 1e-17 {
            return Ok(SeriesCdf {
                value: clamp_unit(sum),
                tail_bound: term.abs(),
            });
        }
    }
    // Crude geometric bound on the dropped tail: successive zeros are at
    // least pi apart, so the exponents fall by more than
    // (j_{k+2}^2 - j_{k+1}^2) / (2 x^2) per term.
    let (z1, z1j1) = series_term(k_max + 1);
    let (z2, _) = series_term(k_max + 2);
    let t1 = 2.0 * (-z1 * z1 * inv2x2).exp() / z1j1.abs();
    let ratio = (-(z2 * z2 - z1 * z1) * inv2x2).exp();
    let tail = t1 / (1.0 - ratio.min(0.999_999));
    Ok(SeriesCdf {
        value: clamp_unit(sum),
        tail_bound: tail,
    })
}

fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn j0_j1_reference_values() {
        // reference values from standard tables
        assert_abs_diff_eq!(bessel_j0(0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bessel_j0(1.0), 0.7651976865579666, epsilon = 1e-12);
        assert_abs_diff_eq!(bessel_j0(5.0), -0.1775967713143383, epsilon = 1e-12);
        assert_abs_diff_eq!(bessel_j0(15.0), -0.014224472826780773, epsilon = 1e-11);
        assert_abs_diff_eq!(bessel_j0(30.0), -0.08636798358104556, epsilon = 1e-11);
        assert_abs_diff_eq!(bessel_j1(1.0), 0.4400505857449335, epsilon = 1e-12);
        assert_abs_diff_eq!(bessel_j1(5.0), -0.32757913759146523, epsilon = 1e-12);
        assert_abs_diff_eq!(bessel_j1(20.0), 0.06683312417584991, epsilon = 1e-11);
        assert_abs_diff_eq!(bessel_j1(-1.0), -0.4400505857449335, epsilon = 1e-12);
    }

    #[test]
    fn zeros_annihilate_j0() {
        // first zeros to 12 digits
        assert_abs_diff_eq!(j0_zero(1), 2.404825557695773, epsilon = 1e-10);
        assert_abs_diff_eq!(j0_zero(2), 5.520078110286311, epsilon = 1e-10);
        assert_abs_diff_eq!(j0_zero(5), 14.930917708487786, epsilon = 1e-10);
        for k in 1..=20 {
            let z = j0_zero(k);
            assert!(
                bessel_j0(z).abs() < 1e-10,
                "J0(j0_{k}) = {} at {z}",
                bessel_j0(z)
            );
        }
        // zeros are increasing and roughly pi apart
        for k in 1..20 {
            let gap = j0_zero(k + 1) - j0_zero(k);
            assert!(gap > 3.0 && gap < 3.3, "gap {gap}");
        }
    }

    #[test]
    fn cdf_reference_points() {
        // 2.5% and 97.5% quantiles of S0
        let lo = asymptotic_cdf_s0(0.834, 60).unwrap();
        assert_abs_diff_eq!(lo.value, 0.025, epsilon = 0.002);
        let hi = asymptotic_cdf_s0(2.940, 60).unwrap();
        assert_abs_diff_eq!(hi.value, 0.975, epsilon = 0.002);
        // total mass at large argument
        let top = asymptotic_cdf_s0(8.0, 200).unwrap();
        assert!(top.value >= 0.999999, "cdf(8) = {}", top.value);
        assert!(lo.tail_bound < 1e-12);
    }

    #[test]
    fn cdf_monotone_and_bounded() {
        let mut prev = 0.0;
        for i in 1..=60 {
            let x = 0.1 * i as f64;
            let c = asymptotic_cdf_s0(x, 80).unwrap().value;
            assert!((0.0..=1.0).contains(&c));
            assert!(c + 1e-12 >= prev, "not monotone at {x}");
            prev = c;
        }
    }

    #[test]
    fn cdf_rejects_bad_arguments() {
        assert!(asymptotic_cdf_s0(0.0, 10).is_err());
        assert!(asymptotic_cdf_s0(-1.0, 10).is_err());
        assert!(asymptotic_cdf_s0(1.0, 0).is_err());
    }
}
