//! The 0-current of logarithmic type on the torus: the real function f with
//!
//! ```text
//! i∂∂̄f = Ω − (∫_X̄ Ω)·δ_{x₀},   Ω = i·s·dz∧dz̄,
//! ```
//!
//! normalised by f(p) = 0. The closed form is built from the doubly periodic
//! kernel G₀(w) = log|θ₁(πw)| − π(Im w)²/Im τ, which satisfies
//! ΔG₀ = 2πδ_Λ − 2π/Im τ; the solution is f = −(mass/π)·G₀(z − x₀) + const
//! with mass = ∫Ω = 2s·Im τ. An independent Fourier-grid oracle solves the
//! same current equation spectrally and is used to pin the closed form.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::elliptic::Lattice;
use crate::error::AnalyticError;
use crate::surface::{KBasisElement, OneForm, Surface, SurfaceKind};

/// Minimum clearance from the singular point for evaluation.
pub const SINGULAR_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct GreenFunction {
    pub surface: Surface,
    /// Ω = i·s·dz∧dz̄.
    pub s_coef: f64,
    /// ∫_X̄ Ω = 2s·Im τ.
    pub omega_mass: f64,
    pub singular_point: Complex64,
    pub normalization_point: Complex64,
    /// Coefficient of log|z−x₀|² near the singularity: −(2π)⁻¹·omega_mass.
    pub log_coefficient: f64,
    lattice: Lattice,
    base_at_p: f64,
}

impl GreenFunction {
    /// f_Ω(z), with f_Ω(p) = 0.
    pub fn eval(&self, z: Complex64) -> Result<f64, AnalyticError> {
        let d = self.lattice.dist(z, self.singular_point);
        if d <= SINGULAR_MARGIN {
            return Err(AnalyticError::PoleProximity {
                at: format!("{z}"),
                pole: format!("{}", self.singular_point),
                dist: d,
            });
        }
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: Complex64) -> f64 {
        let mass = self.omega_mass;
        -(mass / PI) * (self.lattice.green_g0(z - self.singular_point) - self.base_at_p)
    }

    /// ∂f/∂z in the closed form.
    pub fn fz(&self, z: Complex64) -> Complex64 {
        -(self.omega_mass / PI) * self.lattice.green_g0_dz(z - self.singular_point)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }
}

/// Solve the current equation on the torus for a K-basis element.
pub fn solve_green(
    s: &Surface,
    omega: &KBasisElement,
    x0: Complex64,
    p: Complex64,
) -> Result<GreenFunction, AnalyticError> {
    if s.kind != SurfaceKind::Torus {
        return Err(AnalyticError::Unsupported(
            "the sphere backend has no Λ² classes; Green functions live on the torus".into(),
        ));
    }
    let lattice = s.lattice().unwrap().clone();
    let h = omega.omega_coefficient();
    if h.norm() == 0.0 {
        return Err(AnalyticError::InvalidInput("Ω must be nonzero".into()));
    }
    if h.re.abs() > 1e-14 * h.norm() {
        return Err(AnalyticError::InvalidInput(
            "skew-hermitian coefficient must be purely imaginary".into(),
        ));
    }
    let s_coef = h.im;
    if lattice.dist(p, x0) <= SINGULAR_MARGIN {
        return Err(AnalyticError::AtPuncture(format!(
            "normalization point {p} coincides with x₀"
        )));
    }
    let omega_mass = 2.0 * s_coef * lattice.tau.im;
    let base_at_p = lattice.green_g0(p - x0);
    Ok(GreenFunction {
        surface: s.clone(),
        s_coef,
        omega_mass,
        singular_point: x0,
        normalization_point: p,
        log_coefficient: -omega_mass / (2.0 * PI),
        lattice,
        base_at_p,
    })
}

/// ξ = i∂f and φ = i(∂f − ∂̄f) as backend forms.
pub fn xi_phi_from_f(g: &GreenFunction) -> (OneForm, OneForm) {
    let xi = OneForm::TorusXi {
        lattice: g.lattice.clone(),
        x0: g.singular_point,
        s: g.s_coef,
    };
    let phi = OneForm::TorusPhi {
        lattice: g.lattice.clone(),
        x0: g.singular_point,
        s: g.s_coef,
    };
    (xi, phi)
}

/// Result of the spectral grid solve.
#[derive(Clone, Debug)]
pub struct GreenOracle {
    pub grid_n: usize,
    /// Row-major values: index j·n + i holds f at z = (i + j·τ)/n.
    pub values: Vec<f64>,
    /// Normalisation offset that was subtracted at the cell nearest p.
    pub offset: f64,
    /// Grid indices x₀ was snapped to.
    pub snapped: (usize, usize),
    /// Physical snap displacement.
    pub snap_distance: f64,
    /// Set when x₀ had to be moved noticeably onto the grid.
    pub warning: Option<String>,
    /// Width of the Gaussian spectral mollifier applied to the point mass.
    pub sigma: f64,
}

impl GreenOracle {
    pub fn value_at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid_n + i]
    }

    pub fn node(&self, tau: Complex64, i: usize, j: usize) -> Complex64 {
        Complex64::new(i as f64 / self.grid_n as f64, 0.0)
            + tau * (j as f64 / self.grid_n as f64)
    }
}

/// Discrete Fourier inversion of i∂∂̄f = Ω − (∫Ω)δ on the period lattice,
/// zero-mean convention, point mass as a normalised grid impulse whose
/// spectrum is shaped by an isotropic Gaussian of width a few cells (so the
/// band-limited solution matches the point solution away from x₀).
pub fn green_oracle(
    s: &Surface,
    omega: &KBasisElement,
    x0: Complex64,
    p: Complex64,
    grid_n: usize,
) -> Result<GreenOracle, AnalyticError> {
    if s.kind != SurfaceKind::Torus {
        return Err(AnalyticError::Unsupported("grid oracle needs the torus".into()));
    }
    if grid_n < 64 || !grid_n.is_power_of_two() {
        return Err(AnalyticError::InvalidInput(format!(
            "grid_n must be a power of two ≥ 64, got {grid_n}"
        )));
    }
    let lattice = s.lattice().unwrap();
    let tau = lattice.tau;
    let n = grid_n;
    let h = omega.omega_coefficient();
    let s_coef = h.im;

    // Snap x₀ to the nearest node.
    let (a0, b0) = lattice.affine(x0);
    let i0 = (a0 * n as f64).round().rem_euclid(n as f64) as usize % n;
    let j0 = (b0 * n as f64).round().rem_euclid(n as f64) as usize % n;
    let node = Complex64::new(i0 as f64 / n as f64, 0.0) + tau * (j0 as f64 / n as f64);
    let snap = lattice.dist(x0, node);
    let warning = if snap > 1e-12 {
        Some(format!("x₀ = {x0} snapped to grid node ({i0},{j0}) at distance {snap:.3e}"))
    } else {
        None
    };

    let sigma = 3.0 * tau.norm().max(1.0) / n as f64;
    // Build the solution spectrum directly: for (m,ν) ≠ (0,0),
    //   f̂ = −rhs̄/|k|², rhs̄ = −4s·e^{−2πi(m·i₀+ν·j₀)/n}·exp(−σ²|k|²/2),
    // where k = 2π(m, (ν − m·Reτ)/Imτ) is the physical wavevector.
    let mut spec = vec![Complex64::new(0.0, 0.0); n * n];
    for mi in 0..n {
        let m = if mi <= n / 2 { mi as f64 } else { mi as f64 - n as f64 };
        for ni in 0..n {
            if mi == 0 && ni == 0 {
                continue;
            }
            let nu = if ni <= n / 2 { ni as f64 } else { ni as f64 - n as f64 };
            let kx = 2.0 * PI * m;
            let ky = 2.0 * PI * (nu - m * tau.re) / tau.im;
            let k2 = kx * kx + ky * ky;
            let phase = -2.0 * PI * (m * i0 as f64 + nu * j0 as f64) / n as f64;
            let gauss = (-0.5 * sigma * sigma * k2).exp();
            let rhs = -4.0 * s_coef * Complex64::new(0.0, phase).exp() * gauss;
            spec[ni * n + mi] = -rhs / k2;
        }
    }

    // Inverse FFT in both directions (unnormalised synthesis matches the
    // analytic convention f = Σ f̂ e^{+2πi(...)}).
    let mut planner = FftPlanner::<f64>::new();
    let ifft = planner.plan_fft_inverse(n);
    // rows: transform over the m index for each fixed ν
    for j in 0..n {
        ifft.process(&mut spec[j * n..(j + 1) * n]);
    }
    // columns
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n {
            col[j] = spec[j * n + i];
        }
        ifft.process(&mut col);
        for j in 0..n {
            spec[j * n + i] = col[j];
        }
    }

    let mut values: Vec<f64> = spec.iter().map(|c| c.re).collect();
    let max_imag = spec.iter().map(|c| c.im.abs()).fold(0.0f64, f64::max);
    debug_assert!(max_imag < 1e-9, "spectrum synthesis lost reality: {max_imag}");

    // Renormalise to vanish at the cell nearest p.
    let (ap, bp) = lattice.affine(p);
    let ip = (ap * n as f64).round().rem_euclid(n as f64) as usize % n;
    let jp = (bp * n as f64).round().rem_euclid(n as f64) as usize % n;
    let offset = values[jp * n + ip];
    for v in &mut values {
        *v -= offset;
    }

    Ok(GreenOracle {
        grid_n: n,
        values,
        offset,
        snapped: (i0, j0),
        snap_distance: snap,
        warning,
        sigma,
    })
}
