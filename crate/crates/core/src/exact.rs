//! Exact integer/rational helpers shared by the distribution and influence
//! modules: binomial coefficients, factorials, and Gauss-Legendre nodes.
//!
//! The exact paths use `Ratio<i128>`. Factorials fit an `i128` up to 33!,
//! which comfortably covers the documented exact range (dimension 25 needs
//! 26!).

use crate::{Error, Result};
use num_rational::Ratio;

/// Exact rational on 128-bit integers.
pub type Rat = Ratio<i128>;

/// n! as an `i128`. Errors above 33 (34! overflows).
pub fn factorial(n: usize) -> Result<i128> {
    if n > 33 {
        return Err(Error::SizeLimit(format!("factorial({n}) overflows i128")));
    }
    Ok((1..=n as i128).product())
}

/// Binomial coefficient C(n, k) as an `i128`.
///
/// Uses the multiplicative formula; every prefix product is itself a
/// binomial coefficient, so the stepwise division is exact.
pub fn binom(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut res: i128 = 1;
    for i in 1..=k {
        res = res * (n - k + i) as i128 / i as i128;
    }
    res
}

pub fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut res = 1.0;
    for i in 1..=k {
        res = res * (n - k + i) as f64 / i as f64;
    }
    res
}

/// Converts a `Ratio<i128>` to `f64`.
pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [0, 1].
///
/// Roots of the Legendre polynomial are located by Newton iteration from the
/// Chebyshev-based initial guess; the rule integrates polynomials of degree
/// up to 2n-1 exactly.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // initial guess for the i-th root of P_n on [-1, 1]
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // map from [-1, 1] to [0, 1]
        nodes[n - 1 - i] = 0.5 * (1.0 - x);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}
