//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use jsacc::quadrature::{chebyshev_gauss, gauss_laguerre, QuadratureRule};
use jsacc::specfun::SeriesControl;

pub fn ctrl() -> SeriesControl {
    SeriesControl::default()
}

pub fn gl100() -> QuadratureRule {
    gauss_laguerre(100).unwrap()
}

pub fn cg100() -> QuadratureRule {
    chebyshev_gauss(100).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫₀^upper f(x) dx` for an integrand with an `x^{−1/2}` singularity, via `x = u²`.
pub fn integrate_sqrt_singular<F: Fn(f64) -> f64>(f: F, upper: f64, tol: f64) -> f64 {
    let g = |u: f64| if u == 0.0 { limit_at_zero(&f) } else { 2.0 * u * f(u * u) };
    // fixed panels, then adaptive refinement inside each
    let panels = 256;
    let h = upper.sqrt() / panels as f64;
    (0..panels).map(|i| simpson(&g, i as f64 * h, (i + 1) as f64 * h, tol / panels as f64)).sum()
}

fn limit_at_zero<F: Fn(f64) -> f64>(f: &F) -> f64 {
    let u = 1e-9;
    2.0 * u * f(u * u)
}

/// Standard normal CDF.
pub fn phi(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Noncentral χ² CDF with one degree of freedom: `P(|Z + √λ|² ≤ x)`.
pub fn ncx2_cdf_closed(x: f64, lambda: f64) -> f64 {
    let (r, s) = (x.sqrt(), lambda.sqrt());
    phi(r - s) - phi(-r - s)
}

/// Noncentral χ² density with one degree of freedom, written through the two normal lobes.
pub fn ncx2_pdf_closed(x: f64, lambda: f64) -> f64 {
    let (r, s) = (x.sqrt(), lambda.sqrt());
    ((-(r - s).powi(2) / 2.0).exp() + (-(r + s).powi(2) / 2.0).exp()) / (2.0 * (2.0 * std::f64::consts::PI * x).sqrt())
}

/// `(n−1)! (1 − e^{−x} Σ_{k<n} x^k/k!)`, summed as the Poisson tail
/// `(n−1)! e^{−x} Σ_{k≥n} x^k/k!` so small values keep full precision.
pub fn lower_gamma_integer(n: u32, x: f64) -> f64 {
    let mut term = (-x).exp() * x.powi(n as i32) / factorial(n);
    let mut tail = 0.0;
    let mut k = n;
    while term > tail * 1e-18 {
        tail += term;
        k += 1;
        term *= x / f64::from(k);
    }
    factorial(n - 1) * tail
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Least-squares slope of `y` on `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn is_nonincreasing(v: &[f64], slack: f64) -> bool {
    v.windows(2).all(|w| w[1] <= w[0] + slack)
}

pub fn is_nondecreasing(v: &[f64], slack: f64) -> bool {
    v.windows(2).all(|w| w[1] >= w[0] - slack)
}

/// Brute-force minimum of `f` over `points` evenly spaced values in `[a, b]`.
pub fn grid_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize) -> f64 {
    (0..points)
        .map(|i| f(a + (b - a) * i as f64 / (points - 1) as f64))
        .fold(f64::INFINITY, f64::min)
}
