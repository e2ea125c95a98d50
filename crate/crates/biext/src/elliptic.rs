//! Elliptic special functions for the lattice ℤ + τℤ: the Jacobi theta
//! function θ₁, the Weierstrass ζ function through the theta quotient, and
//! log|σ| with its quasi-period corrections.
//!
//! All q-series are truncated once the tail drops below 1e-16 of the
//! accumulated magnitude; for Im τ ≥ 0.3 that happens within a dozen terms.
//! A second, independent evaluation route (Laurent series seeded by the
//! Eisenstein q-expansions of g₂, g₃) lives in `series_oracle` and is used
//! by the tests to cross-validate this module.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::AnalyticError;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const MAX_THETA_TERMS: usize = 64;

/// Cached analytic data for the lattice ℤ + τℤ, Im τ > 0.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub tau: Complex64,
    eta1: Complex64,
    eta2: Complex64,
    theta1_prime0: Complex64,
}

impl Lattice {
    pub fn new(tau: Complex64) -> Result<Self, AnalyticError> {
        if !(tau.im > 0.0) || !tau.is_finite() {
            return Err(AnalyticError::InvalidSurface(format!(
                "tau = {tau} must have positive imaginary part"
            )));
        }
        // θ₁'(0) and θ₁'''(0) from the sine series term by term.
        let mut d1 = Complex64::new(0.0, 0.0);
        let mut d3 = Complex64::new(0.0, 0.0);
        for n in 0..MAX_THETA_TERMS {
            let k = 2 * n + 1;
            let expo = (I * PI * tau * ((n as f64 + 0.5) * (n as f64 + 0.5))).exp();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let t1 = 2.0 * sign * expo * (k as f64);
            let t3 = -2.0 * sign * expo * (k as f64).powi(3);
            d1 += t1;
            d3 += t3;
            if expo.norm() < 1e-18 && n > 2 {
                break;
            }
        }
        // η₁ = −(π²/6)·θ₁'''(0)/θ₁'(0) for the normalised period pair (1, τ);
        // η₂ follows from the Legendre relation η₁τ − η₂ = πi.
        let eta1 = -(PI * PI / 6.0) * d3 / d1;
        let eta2 = eta1 * tau - I * PI;
        Ok(Lattice { tau, eta1, eta2, theta1_prime0: d1 })
    }

    pub fn eta1(&self) -> Complex64 {
        self.eta1
    }

    pub fn eta2(&self) -> Complex64 {
        self.eta2
    }

    pub fn theta1_prime0(&self) -> Complex64 {
        self.theta1_prime0
    }

    /// Write z = z₀ + m + nτ with the affine coordinates of z₀ in [−1/2, 1/2).
    pub fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let (a, b) = self.affine(z);
        let m = a.round();
        let n = b.round();
        let z0 = z - Complex64::new(m, 0.0) - self.tau * n;
        (z0, m as i64, n as i64)
    }

    /// Real coordinates (a, b) with z = a + bτ.
    pub fn affine(&self, z: Complex64) -> (f64, f64) {
        let b = z.im / self.tau.im;
        let a = z.re - b * self.tau.re;
        (a, b)
    }

    /// Distance from z to the nearest lattice translate of w.
    pub fn dist(&self, z: Complex64, w: Complex64) -> f64 {
        let (z0, _, _) = self.reduce(z - w);
        // The rounded representative may not be the closest for very skew
        // lattices; check the neighbouring translates.
        let mut best = f64::INFINITY;
        for dm in -1..=1 {
            for dn in -1..=1 {
                let cand =
                    (z0 - Complex64::new(dm as f64, 0.0) - self.tau * dn as f64).norm();
                best = best.min(cand);
            }
        }
        best
    }

    /// θ₁(v | τ) = 2 Σ (−1)ⁿ q^{(n+1/2)²} sin((2n+1)v), q = e^{iπτ}.
    /// The caller is responsible for keeping Im v within one period strip;
    /// `zeta` and `log_abs_sigma` reduce before calling.
    pub fn theta1(&self, v: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for n in 0..MAX_THETA_TERMS {
            let k = (2 * n + 1) as f64;
            let expo = (I * PI * self.tau * ((n as f64 + 0.5) * (n as f64 + 0.5))).exp();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let term = 2.0 * sign * expo * (k * v).sin();
            sum += term;
            scale = scale.max(term.norm());
            if term.norm() < 1e-18 * scale.max(1e-300) && n > 2 {
                break;
            }
        }
        sum
    }

    /// θ₁′(v | τ) (derivative in v).
    pub fn theta1_prime(&self, v: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for n in 0..MAX_THETA_TERMS {
            let k = (2 * n + 1) as f64;
            let expo = (I * PI * self.tau * ((n as f64 + 0.5) * (n as f64 + 0.5))).exp();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let term = 2.0 * sign * expo * k * (k * v).cos();
            sum += term;
            scale = scale.max(term.norm());
            if term.norm() < 1e-18 * scale.max(1e-300) && n > 2 {
                break;
            }
        }
        sum
    }

    /// Weierstrass ζ(z) for ℤ + τℤ via ζ(z₀) = 2η₁z₀ + π θ₁′(πz₀)/θ₁(πz₀)
    /// and the quasi-periodicity ζ(z₀ + m + nτ) = ζ(z₀) + 2mη₁ + 2nη₂.
    pub fn zeta(&self, z: Complex64) -> Complex64 {
        let (z0, m, n) = self.reduce(z);
        let v = PI * z0;
        let val = 2.0 * self.eta1 * z0 + PI * self.theta1_prime(v) / self.theta1(v);
        val + 2.0 * self.eta1 * m as f64 + 2.0 * self.eta2 * n as f64
    }

    /// log |σ(w)|, with σ(w₀) = e^{η₁w₀²} θ₁(πw₀)/(π θ₁′(0)) on the reduced
    /// cell and |σ(w₀+λ)| = e^{Re[η_λ(w₀+λ/2)]} |σ(w₀)| for λ = m + nτ.
    pub fn log_abs_sigma(&self, w: Complex64) -> f64 {
        let (w0, m, n) = self.reduce(w);
        let lambda = Complex64::new(m as f64, 0.0) + self.tau * n as f64;
        let eta_lambda = 2.0 * self.eta1 * m as f64 + 2.0 * self.eta2 * n as f64;
        let base = (self.eta1 * w0 * w0).re + self.theta1(PI * w0).norm().ln()
            - (PI * self.theta1_prime0).norm().ln();
        base + (eta_lambda * (w0 + lambda * 0.5)).re
    }

    /// The doubly periodic Green kernel G₀(w) = log|θ₁(πw)| − π(Im w)²/Im τ,
    /// evaluated on the reduced representative.
    pub fn green_g0(&self, w: Complex64) -> f64 {
        let (w0, _, _) = self.reduce(w);
        self.theta1(PI * w0).norm().ln() - PI * w0.im * w0.im / self.tau.im
    }

    /// ∂G₀/∂z at w (z-derivative of the kernel above).
    pub fn green_g0_dz(&self, w: Complex64) -> Complex64 {
        let (w0, _, _) = self.reduce(w);
        let v = PI * w0;
        0.5 * PI * self.theta1_prime(v) / self.theta1(v)
            + I * PI * w0.im / self.tau.im
    }
}


#[cfg(test)]
mod tests {
    use super::series_oracle::LaurentZeta;
    use super::*;
    use approx::assert_abs_diff_eq;

    fn taus() -> Vec<Complex64> {
        vec![
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.3, 1.1),
        ]
    }

    #[test]
    fn oracle_eta1_matches_its_own_series_at_the_half_period() {
        // ζ(1/2) = η₁, and 1/2 is well inside the Laurent disk for these τ.
        for tau in taus() {
            let oracle = LaurentZeta::new(tau);
            let direct = oracle.zeta_raw(Complex64::new(0.5, 0.0));
            assert!(
                (direct - oracle.eta1).norm() < 1e-10,
                "eta1 mismatch for tau = {tau}: series {direct} vs E2 {}",
                oracle.eta1
            );
        }
    }

    #[test]
    fn quasi_periods_agree_between_routes() {
        for tau in taus() {
            let lat = Lattice::new(tau).unwrap();
            let oracle = LaurentZeta::new(tau);
            assert_abs_diff_eq!(lat.eta1().re, oracle.eta1.re, epsilon = 1e-11);
            assert_abs_diff_eq!(lat.eta1().im, oracle.eta1.im, epsilon = 1e-11);
            assert_abs_diff_eq!(lat.eta2().re, oracle.eta2.re, epsilon = 1e-10);
            assert_abs_diff_eq!(lat.eta2().im, oracle.eta2.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn zeta_routes_agree_at_generic_points() {
        let samples = [
            Complex64::new(0.23, 0.17),
            Complex64::new(-0.31, 0.42),
            Complex64::new(1.7, -0.6),
            Complex64::new(0.05, 0.33),
            Complex64::new(2.2, 1.9),
        ];
        for tau in taus() {
            let lat = Lattice::new(tau).unwrap();
            let oracle = LaurentZeta::new(tau);
            for &z in &samples {
                let a = lat.zeta(z);
                let b = oracle.zeta(z);
                assert!(
                    (a - b).norm() < 1e-10,
                    "zeta mismatch at z = {z}, tau = {tau}: theta {a} vs laurent {b}"
                );
            }
        }
    }

    #[test]
    fn zeta_is_odd() {
        let lat = Lattice::new(Complex64::new(0.0, 1.0)).unwrap();
        let z = Complex64::new(0.21, 0.13);
        let s = lat.zeta(z) + lat.zeta(-z);
        assert!(s.norm() < 1e-12, "zeta must be odd, got sum {s}");
    }

    #[test]
    fn zeta_quasi_periodicity() {
        for tau in taus() {
            let lat = Lattice::new(tau).unwrap();
            let z = Complex64::new(0.11, 0.29);
            let d1 = lat.zeta(z + 1.0) - lat.zeta(z) - 2.0 * lat.eta1();
            let d2 = lat.zeta(z + tau) - lat.zeta(z) - 2.0 * lat.eta2();
            assert!(d1.norm() < 1e-11, "period 1 defect {d1}");
            assert!(d2.norm() < 1e-11, "period tau defect {d2}");
        }
    }

    #[test]
    fn green_kernel_is_doubly_periodic() {
        for tau in taus() {
            let lat = Lattice::new(tau).unwrap();
            let w = Complex64::new(0.27, 0.35);
            let g = lat.green_g0(w);
            assert_abs_diff_eq!(lat.green_g0(w + 1.0), g, epsilon = 1e-12);
            assert_abs_diff_eq!(lat.green_g0(w + tau), g, epsilon = 1e-12);
            assert_abs_diff_eq!(lat.green_g0(w - 3.0 + 2.0 * tau), g, epsilon = 1e-11);
        }
    }

    #[test]
    fn green_kernel_dz_matches_finite_differences() {
        let lat = Lattice::new(Complex64::new(0.3, 1.1)).unwrap();
        let w = Complex64::new(0.21, 0.37);
        let h = 1e-6;
        let gx = (lat.green_g0(w + h) - lat.green_g0(w - h)) / (2.0 * h);
        let gy = (lat.green_g0(w + I * h) - lat.green_g0(w - I * h)) / (2.0 * h);
        // ∂/∂z = (∂x − i∂y)/2 on a real-valued function
        let fd = Complex64::new(gx, -gy) * 0.5;
        let an = lat.green_g0_dz(w);
        assert!((fd - an).norm() < 1e-7, "dz mismatch: fd {fd} vs analytic {an}");
    }

    #[test]
    fn log_abs_sigma_quasi_periodicity() {
        let tau = Complex64::new(0.3, 1.1);
        let lat = Lattice::new(tau).unwrap();
        let w = Complex64::new(0.19, 0.23);
        // |σ(w+1)| = e^{Re[2η₁(w + 1/2)]} |σ(w)|
        let lhs = lat.log_abs_sigma(w + 1.0) - lat.log_abs_sigma(w);
        let rhs = (2.0 * lat.eta1() * (w + 0.5)).re;
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        let lhs2 = lat.log_abs_sigma(w + tau) - lat.log_abs_sigma(w);
        let rhs2 = (2.0 * lat.eta2() * (w + tau * 0.5)).re;
        assert_abs_diff_eq!(lhs2, rhs2, epsilon = 1e-10);
    }

    #[test]
    fn zeta_residue_is_one() {
        // small circle around the origin: (2πi)⁻¹ ∮ ζ dz = 1
        let lat = Lattice::new(Complex64::new(0.0, 1.0)).unwrap();
        let n = 2000;
        let r = 0.05;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let th = 2.0 * PI * k as f64 / n as f64;
            let z = r * Complex64::new(th.cos(), th.sin());
            let dz = I * z * (2.0 * PI / n as f64);
            acc += lat.zeta(z) * dz;
        }
        let res = acc / (2.0 * PI * I);
        assert!((res - 1.0).norm() < 1e-6, "residue {res}");
    }
}
