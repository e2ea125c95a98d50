//! Gauss–Legendre quadrature with adaptive bisection, for line integrals of
//! pulled-back 1-forms and for the triangular double integrals of length-2
//! iterated integrals.
//!
//! Order 16 per panel; a panel is accepted when the whole-panel estimate and
//! the two-half estimate agree to the requested tolerance. For the simplex
//! rule the two-half estimate recomposes through the Chen identity
//! ∫_{αβ} fg = ∫_α fg + ∫_β fg + (∫_α f)(∫_β g).

use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::error::AnalyticError;

pub const DEFAULT_TOL: f64 = 1e-11;
const MAX_DEPTH: u32 = 44;
const ORDER: usize = 16;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

/// Nodes and weights on [-1, 1] by Newton iteration on P₁₆.
static RULE: Lazy<Rule> = Lazy::new(|| {
    let n = ORDER;
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    for i in 0..n {
        // Chebyshev-based initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Rule { nodes, weights }
});

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// One GL panel of ∫ₐᵇ f(t) dt.
pub fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let rule = &*RULE;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..ORDER {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    acc * half
}

/// Adaptive ∫ₐᵇ f(t) dt with bisection until whole and halves agree.
pub fn adaptive_line<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64, AnalyticError> {
    fn recurse<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<Complex64, AnalyticError> {
        let m = 0.5 * (a + b);
        let left = panel(f, a, m);
        let right = panel(f, m, b);
        let err = (left + right - whole).norm();
        if err < tol {
            return Ok(left + right);
        }
        if depth >= MAX_DEPTH {
            return Err(AnalyticError::NonConvergence { max_depth: MAX_DEPTH, last_err: err });
        }
        let half_tol = 0.5 * tol;
        Ok(recurse(f, a, m, left, half_tol, depth + 1)?
            + recurse(f, m, b, right, half_tol, depth + 1)?)
    }
    let whole = panel(f, a, b);
    recurse(f, a, b, whole, tol, 0)
}

/// Tensor estimate of ∫_{a≤t₁≤t₂≤b} f(t₁) g(t₂) dt₁ dt₂ on one panel:
/// outer GL in t₂, inner GL of f over [a, t₂].
pub fn simplex_panel<F, G>(f: &F, g: &G, a: f64, b: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
    G: Fn(f64) -> Complex64,
{
    let rule = &*RULE;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..ORDER {
        let t2 = mid + half * rule.nodes[j];
        let inner = panel(f, a, t2);
        acc += rule.weights[j] * g(t2) * inner;
    }
    acc * half
}

/// Adaptive simplex integral with Chen-split error control.
pub fn adaptive_simplex<F, G>(
    f: &F,
    g: &G,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64, AnalyticError>
where
    F: Fn(f64) -> Complex64,
    G: Fn(f64) -> Complex64,
{
    fn recurse<F, G>(
        f: &F,
        g: &G,
        a: f64,
        b: f64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<Complex64, AnalyticError>
    where
        F: Fn(f64) -> Complex64,
        G: Fn(f64) -> Complex64,
    {
        let m = 0.5 * (a + b);
        let left = simplex_panel(f, g, a, m);
        let right = simplex_panel(f, g, m, b);
        let cross_f = adaptive_line(f, a, m, 0.25 * tol)?;
        let cross_g = adaptive_line(g, m, b, 0.25 * tol)?;
        let split = left + right + cross_f * cross_g;
        let err = (split - whole).norm();
        if err < tol {
            return Ok(split);
        }
        if depth >= MAX_DEPTH {
            return Err(AnalyticError::NonConvergence { max_depth: MAX_DEPTH, last_err: err });
        }
        let half_tol = 0.5 * tol;
        let l = recurse(f, g, a, m, left, half_tol, depth + 1)?;
        let r = recurse(f, g, m, b, right, half_tol, depth + 1)?;
        Ok(l + r + cross_f * cross_g)
    }
    let whole = simplex_panel(f, g, a, b);
    recurse(f, g, a, b, whole, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_is_exact() {
        let v = panel(&|t| Complex64::new(t.powi(7) - 3.0 * t * t + 1.0, 0.0), 0.0, 2.0);
        // ∫₀² t⁷ − 3t² + 1 dt = 32 − 8 + 2
        assert_abs_diff_eq!(v.re, 26.0, epsilon = 1e-10);
    }

    #[test]
    fn adaptive_handles_moderate_oscillation() {
        let f = |t: f64| Complex64::new((40.0 * t).sin(), 0.0);
        let v = adaptive_line(&f, 0.0, 1.0, 1e-12).unwrap();
        let exact = (1.0 - (40.0f64).cos()) / 40.0;
        assert_abs_diff_eq!(v.re, exact, epsilon = 1e-11);
    }

    #[test]
    fn simplex_of_constants_is_half_square() {
        let one = |_: f64| Complex64::new(1.0, 0.0);
        let v = adaptive_simplex(&one, &one, 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn simplex_matches_closed_form() {
        // ∫_{0≤s≤t≤1} s·t² ds dt = ∫₀¹ t²·t²/2 dt = 1/10
        let f = |t: f64| Complex64::new(t, 0.0);
        let g = |t: f64| Complex64::new(t * t, 0.0);
        let v = adaptive_simplex(&f, &g, 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v.re, 0.1, epsilon = 1e-11);
    }

    #[test]
    fn nonconvergence_is_reported() {
        // 1/t is singular at the endpoint; the rule must give up.
        let f = |t: f64| Complex64::new(1.0 / t, 0.0);
        let r = adaptive_line(&f, 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(AnalyticError::NonConvergence { .. })));
    }
}
