//! Punctured-surface backends: X = ℙ¹ − D in the finite chart and
//! X = E_τ − D on lattice lifts.
//!
//! Each backend provides its holomorphic 1-forms, the differentials of the
//! third kind with real periods attached to the puncture pairs (x₀, x_k),
//! and the K-space of (1,1)-classes that feeds the Green-function side of
//! the period mapping. Differentials of the third kind carry numerically
//! computed residue and loop-period certificates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::elliptic::Lattice;
use crate::error::AnalyticError;
use crate::quad;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Default clearance required between an evaluation point and a pole.
pub const DEFAULT_POLE_MARGIN: f64 = 1e-9;
/// Tolerance for the residue and real-period certificates.
pub const CERTIFICATE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Puncture {
    Finite(Complex64),
    Infinity,
}

impl Puncture {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Puncture::Finite(z) => Some(z),
            Puncture::Infinity => None,
        }
    }
}

impl std::fmt::Display for Puncture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Puncture::Finite(z) => write!(f, "{z}"),
            Puncture::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Sphere,
    Torus,
}

/// A punctured sphere or punctured torus. The first puncture is x₀ and fixes
/// the basis {ζ_k}; downstream period coordinates depend on that choice.
#[derive(Clone, Debug)]
pub struct Surface {
    pub kind: SurfaceKind,
    pub tau: Option<Complex64>,
    pub punctures: Vec<Puncture>,
    lattice: Option<Lattice>,
}

impl Surface {
    pub fn sphere(punctures: Vec<Puncture>) -> Result<Self, AnalyticError> {
        let s = Surface { kind: SurfaceKind::Sphere, tau: None, punctures, lattice: None };
        s.validate()?;
        Ok(s)
    }

    pub fn torus(tau: Complex64, punctures: Vec<Complex64>) -> Result<Self, AnalyticError> {
        let lattice = Lattice::new(tau)?;
        let s = Surface {
            kind: SurfaceKind::Torus,
            tau: Some(tau),
            punctures: punctures.into_iter().map(Puncture::Finite).collect(),
            lattice: Some(lattice),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), AnalyticError> {
        for (i, a) in self.punctures.iter().enumerate() {
            for b in self.punctures.iter().skip(i + 1) {
                let coincide = match (a, b) {
                    (Puncture::Infinity, Puncture::Infinity) => true,
                    (Puncture::Finite(x), Puncture::Finite(y)) => match &self.lattice {
                        Some(lat) => lat.dist(*x, *y) < 1e-12,
                        None => (x - y).norm() < 1e-12,
                    },
                    _ => false,
                };
                if coincide {
                    return Err(AnalyticError::InvalidSurface(format!(
                        "punctures {a} and {b} coincide"
                    )));
                }
            }
        }
        if self.kind == SurfaceKind::Torus
            && self.punctures.iter().any(|p| matches!(p, Puncture::Infinity))
        {
            return Err(AnalyticError::InvalidSurface(
                "torus punctures must be finite lattice lifts".into(),
            ));
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        match self.kind {
            SurfaceKind::Sphere => 0,
            SurfaceKind::Torus => 1,
        }
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    /// x₀ = first listed puncture.
    pub fn base_puncture(&self) -> Option<Puncture> {
        self.punctures.first().copied()
    }

    /// The punctures x₁, …, x_m.
    pub fn other_punctures(&self) -> &[Puncture] {
        if self.punctures.is_empty() {
            &[]
        } else {
            &self.punctures[1..]
        }
    }

    /// Distance from z to the puncture set, lattice-aware on the torus.
    pub fn puncture_distance(&self, z: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.punctures {
            if let Puncture::Finite(c) = p {
                let d = match &self.lattice {
                    Some(lat) => lat.dist(z, *c),
                    None => (z - c).norm(),
                };
                best = best.min(d);
            }
        }
        best
    }

    pub fn point_distance(&self, a: Complex64, b: Complex64) -> f64 {
        match &self.lattice {
            Some(lat) => lat.dist(a, b),
            None => (a - b).norm(),
        }
    }
}

/// Wire format for surface.json.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SurfaceSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<[f64; 2]>,
    pub punctures: Vec<serde_json::Value>,
}

impl SurfaceSpec {
    pub fn to_surface(&self) -> Result<Surface, AnalyticError> {
        let parse = |v: &serde_json::Value| -> Result<Puncture, AnalyticError> {
            if let Some(s) = v.as_str() {
                if s == "inf" {
                    return Ok(Puncture::Infinity);
                }
                return Err(AnalyticError::InvalidSurface(format!(
                    "unknown puncture token {s:?}"
                )));
            }
            let arr = v.as_array().ok_or_else(|| {
                AnalyticError::InvalidSurface("puncture must be [re,im] or \"inf\"".into())
            })?;
            if arr.len() != 2 {
                return Err(AnalyticError::InvalidSurface("puncture must be [re,im]".into()));
            }
            let re = arr[0].as_f64().ok_or_else(|| {
                AnalyticError::InvalidSurface("puncture coordinate must be a number".into())
            })?;
            let im = arr[1].as_f64().ok_or_else(|| {
                AnalyticError::InvalidSurface("puncture coordinate must be a number".into())
            })?;
            Ok(Puncture::Finite(Complex64::new(re, im)))
        };
        let punctures =
            self.punctures.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        match self.kind.as_str() {
            "sphere" => Surface::sphere(punctures),
            "torus" => {
                let tau = self.tau.ok_or_else(|| {
                    AnalyticError::InvalidSurface("torus surface needs tau".into())
                })?;
                let finite = punctures
                    .iter()
                    .map(|p| {
                        p.finite().ok_or_else(|| {
                            AnalyticError::InvalidSurface(
                                "torus punctures must be finite".into(),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Surface::torus(Complex64::new(tau[0], tau[1]), finite)
            }
            other => Err(AnalyticError::InvalidSurface(format!("unknown kind {other:?}"))),
        }
    }

    pub fn from_surface(s: &Surface) -> SurfaceSpec {
        SurfaceSpec {
            kind: match s.kind {
                SurfaceKind::Sphere => "sphere".into(),
                SurfaceKind::Torus => "torus".into(),
            },
            tau: s.tau.map(|t| [t.re, t.im]),
            punctures: s
                .punctures
                .iter()
                .map(|p| match p {
                    Puncture::Finite(z) => serde_json::json!([z.re, z.im]),
                    Puncture::Infinity => serde_json::json!("inf"),
                })
                .collect(),
        }
    }
}

/// A symbolic 1-form on one of the backends, evaluated as a pair of
/// (dz, dz̄) coefficients.
#[derive(Clone, Debug)]
pub enum OneForm {
    /// (Σ poly[k]·zᵏ + Σ c/(z−a)) dz + dzbar·dz̄ on the sphere chart.
    SphereRational {
        poly: Vec<Complex64>,
        poles: Vec<(Complex64, Complex64)>,
        dzbar: Complex64,
    },
    /// c₁ dz + c₂ dz̄ + Σ w·(ζ_W(z−a) − ζ_W(z−b)) dz on the torus.
    Torus {
        lattice: Lattice,
        dz: Complex64,
        dzbar: Complex64,
        zeta_pairs: Vec<(Complex64, Complex64, Complex64)>,
    },
    /// ξ = i∂f for the Green function of Ω = i·s dz∧dz̄ with point mass x₀.
    TorusXi { lattice: Lattice, x0: Complex64, s: f64 },
    /// φ = ξ + ξ̄ for the same Green function.
    TorusPhi { lattice: Lattice, x0: Complex64, s: f64 },
}

/// A constant-coefficient 2-form c·dz∧dz̄ (the only exterior derivatives the
/// shipped form classes produce).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TwoForm {
    Zero,
    DzDzbar(Complex64),
}

impl TwoForm {
    pub fn coefficient(self) -> Complex64 {
        match self {
            TwoForm::Zero => Complex64::new(0.0, 0.0),
            TwoForm::DzDzbar(c) => c,
        }
    }
}

/// f_z of the torus Green function for Ω = i·s dz∧dz̄, point mass at x₀.
fn green_fz(lattice: &Lattice, x0: Complex64, s: f64, z: Complex64) -> Complex64 {
    let mass = 2.0 * s * lattice.tau.im;
    -(mass / PI) * lattice.green_g0_dz(z - x0)
}

impl OneForm {
    pub fn constant_dz(surface: &Surface, c: Complex64) -> OneForm {
        match surface.kind {
            SurfaceKind::Sphere => OneForm::SphereRational {
                poly: vec![c],
                poles: vec![],
                dzbar: Complex64::new(0.0, 0.0),
            },
            SurfaceKind::Torus => OneForm::Torus {
                lattice: surface.lattice().unwrap().clone(),
                dz: c,
                dzbar: Complex64::new(0.0, 0.0),
                zeta_pairs: vec![],
            },
        }
    }

    pub fn constant_dzbar(surface: &Surface, c: Complex64) -> OneForm {
        match surface.kind {
            SurfaceKind::Sphere => OneForm::SphereRational {
                poly: vec![],
                poles: vec![],
                dzbar: c,
            },
            SurfaceKind::Torus => OneForm::Torus {
                lattice: surface.lattice().unwrap().clone(),
                dz: Complex64::new(0.0, 0.0),
                dzbar: c,
                zeta_pairs: vec![],
            },
        }
    }

    /// Finite-chart pole locations (torus poles are understood mod lattice).
    pub fn poles(&self) -> Vec<Complex64> {
        match self {
            OneForm::SphereRational { poles, .. } => poles.iter().map(|(a, _)| *a).collect(),
            OneForm::Torus { zeta_pairs, .. } => zeta_pairs
                .iter()
                .flat_map(|(_, a, b)| [*a, *b])
                .collect(),
            OneForm::TorusXi { x0, .. } | OneForm::TorusPhi { x0, .. } => vec![*x0],
        }
    }

    fn lattice_ref(&self) -> Option<&Lattice> {
        match self {
            OneForm::SphereRational { .. } => None,
            OneForm::Torus { lattice, .. }
            | OneForm::TorusXi { lattice, .. }
            | OneForm::TorusPhi { lattice, .. } => Some(lattice),
        }
    }

    /// Distance from z to the nearest pole of this form.
    pub fn pole_distance(&self, z: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for p in self.poles() {
            let d = match self.lattice_ref() {
                Some(lat) => lat.dist(z, p),
                None => (z - p).norm(),
            };
            best = best.min(d);
        }
        best
    }

    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64), AnalyticError> {
        self.eval_with_margin(z, DEFAULT_POLE_MARGIN)
    }

    /// (dz, dz̄) coefficients at z, rejecting points within `margin` of a pole.
    pub fn eval_with_margin(
        &self,
        z: Complex64,
        margin: f64,
    ) -> Result<(Complex64, Complex64), AnalyticError> {
        for p in self.poles() {
            let d = match self.lattice_ref() {
                Some(lat) => lat.dist(z, p),
                None => (z - p).norm(),
            };
            if d <= margin {
                return Err(AnalyticError::PoleProximity {
                    at: format!("{z}"),
                    pole: format!("{p}"),
                    dist: d,
                });
            }
        }
        Ok(match self {
            OneForm::SphereRational { poly, poles, dzbar } => {
                let mut a = Complex64::new(0.0, 0.0);
                let mut zp = Complex64::new(1.0, 0.0);
                for c in poly {
                    a += c * zp;
                    zp *= z;
                }
                for (loc, c) in poles {
                    a += c / (z - loc);
                }
                (a, *dzbar)
            }
            OneForm::Torus { lattice, dz, dzbar, zeta_pairs } => {
                let mut a = *dz;
                for (w, p, q) in zeta_pairs {
                    a += w * (lattice.zeta(z - p) - lattice.zeta(z - q));
                }
                (a, *dzbar)
            }
            OneForm::TorusXi { lattice, x0, s } => {
                (I * green_fz(lattice, *x0, *s, z), Complex64::new(0.0, 0.0))
            }
            OneForm::TorusPhi { lattice, x0, s } => {
                let fz = green_fz(lattice, *x0, *s, z);
                ((I * fz), (I * fz).conj())
            }
        })
    }

    /// Exterior derivative. The meromorphic and constant classes are closed;
    /// the Green forms satisfy dξ = −Ω and dφ = −2Ω.
    pub fn exterior_derivative(&self) -> TwoForm {
        match self {
            OneForm::SphereRational { .. } | OneForm::Torus { .. } => TwoForm::Zero,
            OneForm::TorusXi { s, .. } => TwoForm::DzDzbar(-I * *s),
            OneForm::TorusPhi { s, .. } => TwoForm::DzDzbar(-2.0 * I * *s),
        }
    }

    /// Whether the form is closed as a symbolic fact.
    pub fn is_closed(&self) -> bool {
        self.exterior_derivative() == TwoForm::Zero
    }
}

/// Free-function alias matching the operation name.
pub fn evaluate_form(
    f: &OneForm,
    z: Complex64,
) -> Result<(Complex64, Complex64), AnalyticError> {
    f.eval(z)
}

/// Basis of H⁰(Ω¹) of the completed surface: empty in genus 0, {dz} in genus 1.
pub fn holomorphic_basis(s: &Surface) -> Vec<OneForm> {
    match s.kind {
        SurfaceKind::Sphere => vec![],
        SurfaceKind::Torus => vec![OneForm::constant_dz(s, Complex64::new(1.0, 0.0))],
    }
}

/// A differential of the third kind with its residue and real-period
/// certificates.
#[derive(Clone, Debug)]
pub struct ThirdKindDifferential {
    pub form: OneForm,
    pub pole_pair: (Puncture, Puncture),
    /// (finite pole, contour residue) pairs computed at construction.
    pub residues: Vec<(Complex64, Complex64)>,
    /// Loop periods: small loops around finite poles, plus the two lattice
    /// periods on the torus.
    pub loop_periods: Vec<Complex64>,
}

impl ThirdKindDifferential {
    /// Both certificates at tolerance `tol`: residues ∓(2πi)⁻¹ at the pole
    /// pair and all loop periods real.
    pub fn certify(&self, tol: f64) -> Result<(), AnalyticError> {
        let target = 1.0 / (2.0 * PI * I);
        for (pole, res) in &self.residues {
            let expected = if Some(*pole)
                == self.pole_pair.0.finite()
            {
                -target
            } else {
                target
            };
            if (res - expected).norm() > tol {
                return Err(AnalyticError::InvalidInput(format!(
                    "residue certificate failed at {pole}: got {res}, expected {expected}"
                )));
            }
        }
        for p in &self.loop_periods {
            if p.im.abs() > tol {
                return Err(AnalyticError::InvalidInput(format!(
                    "loop period {p} is not real"
                )));
            }
        }
        Ok(())
    }
}

/// Contour residue by the trapezoid rule on a small circle (spectrally
/// accurate for an analytic integrand).
fn contour_residue(form: &OneForm, center: Complex64, radius: f64) -> Complex64 {
    let n = 512;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        let z = center + radius * Complex64::new(th.cos(), th.sin());
        let dz = I * (z - center);
        let (a, b) = form
            .eval_with_margin(z, 0.0)
            .expect("contour stays off the poles");
        // pull back B dz̄ along the circle as well
        acc += a * dz + b * dz.conj();
    }
    acc / (n as f64) / (2.0 * PI * I) * (2.0 * PI)
}

/// Straight-segment line integral used for period certificates.
fn segment_integral(
    form: &OneForm,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> Result<Complex64, AnalyticError> {
    let dir = b - a;
    quad::adaptive_line(
        &|t| {
            let z = a + t * dir;
            let (u, v) = form.eval_with_margin(z, 0.0).unwrap_or_else(|_| {
                (Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0))
            });
            u * dir + v * dir.conj()
        },
        0.0,
        1.0,
        tol,
    )
}

/// Differentials of the third kind ζ₁,…,ζ_m for the puncture pairs
/// (x₀, x_k), normalised to have real periods.
pub fn third_kind_basis(s: &Surface) -> Result<Vec<ThirdKindDifferential>, AnalyticError> {
    let x0 = s
        .base_puncture()
        .ok_or_else(|| AnalyticError::InvalidSurface("no punctures".into()))?;
    if s.other_punctures().is_empty() {
        return Err(AnalyticError::InvalidSurface(
            "need at least one puncture besides x₀".into(),
        ));
    }
    let coef = 1.0 / (2.0 * PI * I);
    let mut out = Vec::new();
    for (k, xk) in s.other_punctures().iter().enumerate() {
        if s.kind == SurfaceKind::Sphere {
            let mut poles = Vec::new();
            if let Puncture::Finite(z) = xk {
                poles.push((*z, coef));
            }
            if let Puncture::Finite(z) = x0 {
                poles.push((z, -coef));
            }
            if poles.is_empty() {
                return Err(AnalyticError::CoincidentPoles { k: k + 1 });
            }
            let form = OneForm::SphereRational {
                poly: vec![],
                poles,
                dzbar: Complex64::new(0.0, 0.0),
            };
            let mut residues = Vec::new();
            let mut loop_periods = Vec::new();
            let finite: Vec<Complex64> =
                s.punctures.iter().filter_map(|p| p.finite()).collect();
            for (pole, _) in match &form {
                OneForm::SphereRational { poles, .. } => poles.clone(),
                _ => unreachable!(),
            } {
                let radius = circle_radius(&finite, pole);
                let res = contour_residue(&form, pole, radius);
                residues.push((pole, res));
                loop_periods.push(2.0 * PI * I * res);
            }
            let tk = ThirdKindDifferential {
                form,
                pole_pair: (x0, *xk),
                residues,
                loop_periods,
            };
            tk.certify(CERTIFICATE_TOL)?;
            out.push(tk);
        } else {
            let lattice = s.lattice().unwrap().clone();
            let a = xk.finite().unwrap();
            let b = x0.finite().unwrap();
            if lattice.dist(a, b) < 1e-12 {
                return Err(AnalyticError::CoincidentPoles { k: k + 1 });
            }
            // Correction constant making both lattice periods real. Only the
            // real parts of the quasi-period increments matter: the 2πi
            // winding ambiguity is purely imaginary and drops out in the
            // normalisation Im[(2πi)⁻¹(p + c·λ)] = −Re(p + c·λ)/2π.
            let inc1 = 2.0 * lattice.eta1() * (b - a);
            let inc_tau = 2.0 * lattice.eta2() * (b - a);
            let tau = lattice.tau;
            assert!(tau.im != 0.0, "normalisation system is singular only if Im τ = 0");
            let c_re = -inc1.re;
            let c_im = (inc_tau.re + c_re * tau.re) / tau.im;
            let c = Complex64::new(c_re, c_im);
            let form = OneForm::Torus {
                lattice: lattice.clone(),
                dz: coef * c,
                dzbar: Complex64::new(0.0, 0.0),
                zeta_pairs: vec![(coef, a, b)],
            };
            // Certificates: residues from contours, lattice periods from
            // quadrature along translates of a clear base point.
            let finite: Vec<Complex64> = vec![a, b];
            let mut residues = Vec::new();
            let mut loop_periods = Vec::new();
            for pole in [a, b] {
                let radius = torus_circle_radius(&lattice, &finite, pole);
                let res = contour_residue(&form, pole, radius);
                residues.push((pole, res));
                loop_periods.push(2.0 * PI * I * res);
            }
            let z0 = clear_base_point(s)?;
            for period in [Complex64::new(1.0, 0.0), tau] {
                let p = segment_integral(&form, z0, z0 + period, 1e-12)?;
                loop_periods.push(p);
            }
            let tk = ThirdKindDifferential {
                form,
                pole_pair: (x0, *xk),
                residues,
                loop_periods,
            };
            tk.certify(CERTIFICATE_TOL)?;
            out.push(tk);
        }
    }
    Ok(out)
}

fn circle_radius(all_poles: &[Complex64], center: Complex64) -> f64 {
    let mut r: f64 = 0.01;
    for p in all_poles {
        let d = (p - center).norm();
        if d > 1e-12 {
            r = r.min(d / 3.0);
        }
    }
    r
}

fn torus_circle_radius(lattice: &Lattice, all_poles: &[Complex64], center: Complex64) -> f64 {
    let mut r: f64 = 0.01;
    for p in all_poles {
        let d = lattice.dist(*p, center);
        if d > 1e-12 {
            r = r.min(d / 3.0);
        }
    }
    // stay well inside one cell
    r.min(0.1 * lattice.tau.im.min(1.0))
}

/// A deterministic base point whose lattice-translate segments stay clear of
/// the punctures.
pub fn clear_base_point(s: &Surface) -> Result<Complex64, AnalyticError> {
    let lattice = s
        .lattice()
        .ok_or_else(|| AnalyticError::Unsupported("base point search needs a torus".into()))?;
    let tau = lattice.tau;
    let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
    for i in 0..13 {
        for j in 0..13 {
            let a = (i as f64 + 0.51) / 13.0;
            let b = (j as f64 + 0.47) / 13.0;
            let z0 = Complex64::new(a, 0.0) + tau * b;
            // minimum distance of the two closed segments to the punctures
            let mut min_d = f64::INFINITY;
            for t in 0..=32 {
                let tf = t as f64 / 32.0;
                min_d = min_d.min(s.puncture_distance(z0 + tf));
                min_d = min_d.min(s.puncture_distance(z0 + tf * tau));
            }
            if min_d > best.0 {
                best = (min_d, z0);
            }
        }
    }
    if best.0 < 1e-3 {
        return Err(AnalyticError::InvalidSurface(
            "could not find a lattice loop clear of the punctures".into(),
        ));
    }
    Ok(best.1)
}

/// One element of the K-space basis: a skew-hermitian coefficient matrix
/// over the holomorphic basis, with Ω = Σ h_jk ω_j ∧ ω̄_k.
#[derive(Clone, Debug)]
pub struct KBasisElement {
    pub h: Vec<Vec<Complex64>>,
}

impl KBasisElement {
    pub fn is_skew_hermitian(&self) -> bool {
        let n = self.h.len();
        self.h.iter().all(|row| row.len() == n)
            && (0..n).all(|j| (0..n).all(|k| self.h[j][k] == -self.h[k][j].conj()))
    }

    /// For the genus-1 backend Ω = h₁₁ dz∧dz̄; this is h₁₁.
    pub fn omega_coefficient(&self) -> Complex64 {
        if self.h.is_empty() {
            Complex64::new(0.0, 0.0)
        } else {
            self.h[0][0]
        }
    }
}

#[derive(Clone, Debug)]
pub struct KBasis {
    pub elements: Vec<KBasisElement>,
}

/// Basis of K^{1,1}_ℝ ∩ Λ²H¹ of the completion, relative to the cup product
/// into H²(X). Genus 0 has no Λ²; the compact torus has injective cup
/// product so the kernel dies; the punctured torus has H²(X) = 0 and keeps
/// the single Λ² class, represented by h = (i).
pub fn k_space_basis(s: &Surface) -> KBasis {
    match s.kind {
        SurfaceKind::Sphere => KBasis { elements: vec![] },
        SurfaceKind::Torus => {
            if s.punctures.is_empty() {
                KBasis { elements: vec![] }
            } else {
                KBasis { elements: vec![KBasisElement { h: vec![vec![I]] }] }
            }
        }
    }
}
