//! Gauss-Laguerre and Chebyshev-Gauss rules.
//!
//! Laguerre nodes come from the symmetric tridiagonal Jacobi matrix
//! (Golub-Welsch), diagonalized with implicit-shift QL and then polished by
//! one Newton step on the three-term recurrence. Weights are evaluated from
//! `w = 1 / (x L'_K(x)^2)` in log space: for large orders the trailing
//! weights fall below the smallest normal `f64`, so [`QuadratureRule::ln_weights`]
//! is the authoritative copy and callers that multiply by `e^x` should use it.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_LAGUERRE_ORDER: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    GaussLaguerre,
    ChebyshevGauss,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    ln_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn ln_weights(&self) -> &[f64] {
        &self.ln_weights
    }

    /// `(node, ln weight)` pairs.
    pub fn iter_ln(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.ln_weights.iter().copied())
    }

    pub(crate) fn expect_kind(&self, kind: RuleKind, op: &'static str) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::domain(op, format!("expected a {kind:?} rule, got {:?}", self.kind)))
        }
    }
}

/// Order-`order` Gauss-Laguerre rule for `∫₀^∞ e^{−t} f(t) dt`.
pub fn gauss_laguerre(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_LAGUERRE_ORDER {
        return Err(Error::domain(
            "gauss_laguerre",
            format!("order must be in 1..={MAX_LAGUERRE_ORDER}, got {order}"),
        ));
    }
    let (mut nodes, _) = laguerre_jacobi_eigen(order, false)?;
    nodes.sort_by(|a, b| a.total_cmp(b));

    let mut ln_weights = Vec::with_capacity(order);
    for x in nodes.iter_mut() {
        let (p, dp) = laguerre_scaled(order, *x);
        *x -= p / dp;
        let (_, dp) = laguerre_scaled(order, *x);
        ln_weights.push(-x.ln() - 2.0 * dp.ln_abs());
    }
    for pair in nodes.windows(2) {
        if !(pair[1] > pair[0]) || !(pair[0] > 0.0) {
            return Err(Error::Convergence { op: "gauss_laguerre", max_terms: order });
        }
    }
    let weights = ln_weights.iter().map(|lw| lw.exp()).collect();
    Ok(QuadratureRule { kind: RuleKind::GaussLaguerre, nodes, weights, ln_weights })
}

/// Golub-Welsch weights read off the eigenvector first components.
///
/// Only accurate to absolute `f64` precision, so it is kept as a cross-check
/// for small orders rather than used to build rules.
pub fn golub_welsch_weights(order: usize) -> Result<Vec<(f64, f64)>> {
    if order == 0 || order > MAX_LAGUERRE_ORDER {
        return Err(Error::domain("golub_welsch_weights", format!("bad order {order}")));
    }
    let (nodes, first) = laguerre_jacobi_eigen(order, true)?;
    let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(first.into_iter().map(|v| v * v)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

/// Chebyshev-Gauss nodes `t_i = cos((2i−1)π/(2M))`, `i = 1..M`, weights `π/M`.
pub fn chebyshev_gauss(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::domain("chebyshev_gauss", "order must be at least 1"));
    }
    let m = order as f64;
    let nodes: Vec<f64> = (1..=order)
        .map(|i| {
            let t = ((2 * i - 1) as f64 * PI / (2.0 * m)).cos();
            // cos(π/2) is 6e-17 in floating point; the rule is exactly symmetric
            if 2 * i - 1 == order { 0.0 } else { t }
        })
        .collect();
    let w = PI / m;
    Ok(QuadratureRule {
        kind: RuleKind::ChebyshevGauss,
        weights: vec![w; order],
        ln_weights: vec![w.ln(); order],
        nodes,
    })
}

/// Value of the `K`-th Laguerre polynomial and its derivative, carried with a
/// common log scale so the recurrence cannot overflow for large `x`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: f64,
    ln_scale: f64,
}

impl Scaled {
    fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }
}

impl std::ops::Div for Scaled {
    type Output = f64;
    fn div(self, rhs: Scaled) -> f64 {
        self.mantissa / rhs.mantissa * (self.ln_scale - rhs.ln_scale).exp()
    }
}

fn laguerre_scaled(order: usize, x: f64) -> (Scaled, Scaled) {
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    let mut ln_scale = 0.0;
    for k in 1..order {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e150 {
            prev /= mag;
            cur /= mag;
            ln_scale += mag.ln();
        }
    }
    // x L_K'(x) = K (L_K(x) − L_{K−1}(x))
    let deriv = order as f64 * (cur - prev) / x;
    (
        Scaled { mantissa: cur, ln_scale },
        Scaled { mantissa: deriv, ln_scale },
    )
}

/// Eigenvalues (and optionally eigenvector first components) of the Laguerre
/// Jacobi matrix: diagonal `2i+1`, off-diagonal `i`.
fn laguerre_jacobi_eigen(order: usize, want_vectors: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = order;
    let mut d: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + 1.0).collect();
    let mut e: Vec<f64> = (0..n).map(|i| if i + 1 < n { (i + 1) as f64 } else { 0.0 }).collect();
    // First row of the accumulated rotation matrix.
    let mut z: Vec<f64> = (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Convergence { op: "gauss_laguerre", max_terms: 60 });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if want_vectors {
                    let zf = z[i + 1];
                    z[i + 1] = s * z[i] + c * zf;
                    z[i] = c * z[i] - s * zf;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one() {
        let r = gauss_laguerre(1).unwrap();
        assert!((r.nodes()[0] - 1.0).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_two_closed_form() {
        let r = gauss_laguerre(2).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.nodes()[0] - (2.0 - s2)).abs() < 1e-14);
        assert!((r.nodes()[1] - (2.0 + s2)).abs() < 1e-14);
        assert!((r.weights()[0] - (2.0 + s2) / 4.0).abs() < 1e-14);
        assert!((r.weights()[1] - (2.0 - s2) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn order_100_weights_sum_to_one() {
        let r = gauss_laguerre(100).unwrap();
        let sum: f64 = r.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12, "{sum}");
        assert!(r.weights().iter().all(|&w| w > 0.0));
        assert!(r.nodes().windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn max_order_has_finite_log_weights() {
        let r = gauss_laguerre(MAX_LAGUERRE_ORDER).unwrap();
        assert!(r.ln_weights().iter().all(|w| w.is_finite()));
        let total: f64 = r.ln_weights().iter().map(|w| w.exp()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_out_of_range() {
        assert!(gauss_laguerre(0).is_err());
        assert!(gauss_laguerre(MAX_LAGUERRE_ORDER + 1).is_err());
        assert!(chebyshev_gauss(0).is_err());
    }

    #[test]
    fn golub_welsch_vectors_agree_with_formula_weights() {
        for k in [3, 7, 12] {
            let rule = gauss_laguerre(k).unwrap();
            let gw = golub_welsch_weights(k).unwrap();
            for ((x, w), (gx, gwt)) in rule.nodes().iter().zip(rule.weights()).zip(gw) {
                assert!((x - gx).abs() < 1e-11 * x.max(1.0));
                assert!((w - gwt).abs() < 1e-13, "k={k}: {w} vs {gwt}");
            }
        }
    }

    #[test]
    fn chebyshev_small_orders() {
        let r = chebyshev_gauss(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - PI).abs() < 1e-15);
        let r = chebyshev_gauss(2).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert!((r.nodes()[0] - h).abs() < 1e-15 && (r.nodes()[1] + h).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_weighted_sum_integrates_constant() {
        let r = chebyshev_gauss(100).unwrap();
        let s: f64 = r.nodes().iter().zip(r.weights()).map(|(t, w)| w * (1.0 - t * t).sqrt()).sum();
        assert!((s - 2.0).abs() < 1e-3);
    }

    #[test]
    fn chebyshev_nodes_symmetric() {
        for m in [5, 6, 99, 100] {
            let r = chebyshev_gauss(m).unwrap();
            let t = r.nodes();
            for i in 0..m {
                assert!((t[i] + t[m - 1 - i]).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn kind_mismatch_reported() {
        let r = chebyshev_gauss(4).unwrap();
        assert!(r.expect_kind(RuleKind::GaussLaguerre, "t").is_err());
    }
}
