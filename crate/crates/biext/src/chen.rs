//! Length-≤2 iterated integrals along polyline paths: evaluation, the
//! relative-closedness test dξ + Σ c_jk φ_j∧φ_k = 0, and homotopy defects.
//!
//! Evaluation is pure path-wise quadrature; no logarithms or other
//! multivalued primitives appear here, so homotopy functionals are computed
//! the way they are defined. Composite paths are handled through the Chen
//! identity ∫_{αβ} φψ = ∫_α φψ + ∫_β φψ + (∫_α φ)(∫_β ψ).

use num_complex::Complex64;

use crate::error::AnalyticError;
use crate::quad;
use crate::surface::{OneForm, Surface, TwoForm};

/// Required clearance between path segments and punctures or form poles.
pub const DEFAULT_PATH_MARGIN: f64 = 1e-6;

/// A piecewise straight path in the chart; torus paths are lifts to ℂ.
#[derive(Clone, Debug)]
pub struct Path {
    pub surface: Surface,
    pub vertices: Vec<Complex64>,
    pub margin: f64,
}

impl Path {
    pub fn new(surface: Surface, vertices: Vec<Complex64>) -> Result<Self, AnalyticError> {
        Path::with_margin(surface, vertices, DEFAULT_PATH_MARGIN)
    }

    pub fn with_margin(
        surface: Surface,
        vertices: Vec<Complex64>,
        margin: f64,
    ) -> Result<Self, AnalyticError> {
        if vertices.is_empty() {
            return Err(AnalyticError::InvalidInput("path needs at least one vertex".into()));
        }
        let path = Path { surface, vertices, margin };
        for (a, b) in path.segments() {
            for p in &path.surface.punctures {
                if let Some(c) = p.finite() {
                    let d = segment_point_distance(&path.surface, a, b, c);
                    if d <= margin {
                        return Err(AnalyticError::PoleProximity {
                            at: format!("segment {a} -> {b}"),
                            pole: format!("{c}"),
                            dist: d,
                        });
                    }
                }
            }
        }
        Ok(path)
    }

    pub fn endpoints(&self) -> (Complex64, Complex64) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.vertices.clone();
        v.reverse();
        Path { surface: self.surface.clone(), vertices: v, margin: self.margin }
    }
}

/// Distance from the segment [a,b] to the point c, minimised over lattice
/// translates of c on the torus.
pub fn segment_point_distance(
    surface: &Surface,
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> f64 {
    match surface.lattice() {
        None => segment_point_chart(a, b, c),
        Some(lat) => {
            let tau = lat.tau;
            let (aa, ab) = lat.affine(a);
            let (ba, bb) = lat.affine(b);
            let (ca, cb) = lat.affine(c);
            let m_lo = (aa.min(ba) - ca).floor() as i64 - 1;
            let m_hi = (aa.max(ba) - ca).ceil() as i64 + 1;
            let n_lo = (ab.min(bb) - cb).floor() as i64 - 1;
            let n_hi = (ab.max(bb) - cb).ceil() as i64 + 1;
            let mut best = f64::INFINITY;
            for m in m_lo..=m_hi {
                for n in n_lo..=n_hi {
                    let shifted = c + Complex64::new(m as f64, 0.0) + tau * n as f64;
                    best = best.min(segment_point_chart(a, b, shifted));
                }
            }
            best
        }
    }
}

/// Plain chart distance from the segment [a,b] to a point.
pub fn segment_point_chart(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (c - a).norm();
    }
    let t = ((c - a).re * ab.re + (c - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (c - (a + t * ab)).norm()
}

fn check_form_clearance(f: &OneForm, path: &Path) -> Result<(), AnalyticError> {
    for (a, b) in path.segments() {
        for pole in f.poles() {
            let d = segment_point_distance(&path.surface, a, b, pole);
            if d <= path.margin {
                return Err(AnalyticError::PoleProximity {
                    at: format!("segment {a} -> {b}"),
                    pole: format!("{pole}"),
                    dist: d,
                });
            }
        }
    }
    Ok(())
}

/// Pullback of a form along one straight segment as a function of t ∈ [0,1].
fn pullback<'a>(
    f: &'a OneForm,
    a: Complex64,
    b: Complex64,
) -> impl Fn(f64) -> Complex64 + 'a {
    let dir = b - a;
    move |t| {
        let z = a + t * dir;
        let (u, v) = f
            .eval_with_margin(z, 0.0)
            .expect("segment clearance was checked before integrating");
        u * dir + v * dir.conj()
    }
}

/// ∫_path f by per-segment adaptive Gauss–Legendre.
pub fn line_integral(f: &OneForm, path: &Path) -> Result<Complex64, AnalyticError> {
    line_integral_tol(f, path, quad::DEFAULT_TOL)
}

pub fn line_integral_tol(
    f: &OneForm,
    path: &Path,
    tol: f64,
) -> Result<Complex64, AnalyticError> {
    check_form_clearance(f, path)?;
    let nseg = path.vertices.len().saturating_sub(1).max(1);
    let seg_tol = tol / nseg as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in path.segments() {
        acc += quad::adaptive_line(&pullback(f, a, b), 0.0, 1.0, seg_tol)?;
    }
    Ok(acc)
}

/// An iterated-integral expression c·ε + Σ a_i ∫ξ_i + Σ c_jk ∫φ_j φ_k.
#[derive(Clone, Debug)]
pub struct IteratedIntegralExpr {
    pub constant: Complex64,
    pub length1: Vec<(Complex64, OneForm)>,
    pub length2: Vec<(Complex64, OneForm, OneForm)>,
}

impl IteratedIntegralExpr {
    pub fn new() -> Self {
        IteratedIntegralExpr {
            constant: Complex64::new(0.0, 0.0),
            length1: vec![],
            length2: vec![],
        }
    }
}

impl Default for IteratedIntegralExpr {
    fn default() -> Self {
        Self::new()
    }
}

/// ∫_path φψ for a single ordered pair, via the Chen segment decomposition.
pub fn double_integral(
    phi: &OneForm,
    psi: &OneForm,
    path: &Path,
    tol: f64,
) -> Result<Complex64, AnalyticError> {
    check_form_clearance(phi, path)?;
    check_form_clearance(psi, path)?;
    let segs: Vec<(Complex64, Complex64)> = path.segments().collect();
    if segs.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = segs.len();
    let part_tol = tol / (n * n) as f64;
    let mut diag = Complex64::new(0.0, 0.0);
    let mut phi_lines = Vec::with_capacity(n);
    let mut psi_lines = Vec::with_capacity(n);
    for &(a, b) in &segs {
        diag += quad::adaptive_simplex(&pullback(phi, a, b), &pullback(psi, a, b), 0.0, 1.0, part_tol)?;
        phi_lines.push(quad::adaptive_line(&pullback(phi, a, b), 0.0, 1.0, part_tol)?);
        psi_lines.push(quad::adaptive_line(&pullback(psi, a, b), 0.0, 1.0, part_tol)?);
    }
    let mut cross = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            cross += phi_lines[i] * psi_lines[j];
        }
    }
    Ok(diag + cross)
}

/// Evaluate the full expression on a path.
pub fn iterated_integral(
    expr: &IteratedIntegralExpr,
    path: &Path,
) -> Result<Complex64, AnalyticError> {
    iterated_integral_tol(expr, path, quad::DEFAULT_TOL)
}

pub fn iterated_integral_tol(
    expr: &IteratedIntegralExpr,
    path: &Path,
    tol: f64,
) -> Result<Complex64, AnalyticError> {
    let mut acc = expr.constant;
    for (coef, f) in &expr.length1 {
        acc += coef * line_integral_tol(f, path, tol)?;
    }
    for (coef, phi, psi) in &expr.length2 {
        acc += coef * double_integral(phi, psi, path, tol)?;
    }
    Ok(acc)
}

/// Outcome of the relative-closedness test.
#[derive(Clone, Debug)]
pub struct ClosednessReport {
    pub closed: bool,
    /// Largest |dξ + Σ c_jk φ_j∧φ_k| seen (0 when decided symbolically).
    pub max_residual: f64,
    /// True when every term vanished without sampling.
    pub symbolic: bool,
    pub samples_used: usize,
}

/// Integrability test: the expression is a homotopy functional exactly
/// when dξ + Σ c_jk φ_j∧φ_k = 0.
/// Length-2 entries must be closed forms; the length-1 part may carry the
/// non-closed Green forms whose exterior derivative cancels the wedges.
pub fn is_relatively_closed(
    expr: &IteratedIntegralExpr,
    surface: &Surface,
    tol: f64,
) -> Result<ClosednessReport, AnalyticError> {
    for (idx, (_, phi, psi)) in expr.length2.iter().enumerate() {
        if !phi.is_closed() {
            return Err(AnalyticError::NotClosed(format!(
                "left form of length-2 term {idx} is not closed"
            )));
        }
        if !psi.is_closed() {
            return Err(AnalyticError::NotClosed(format!(
                "right form of length-2 term {idx} is not closed"
            )));
        }
    }
    // constant part of the residual from the exterior derivatives
    let mut d_const = Complex64::new(0.0, 0.0);
    for (coef, f) in &expr.length1 {
        match f.exterior_derivative() {
            TwoForm::Zero => {}
            TwoForm::DzDzbar(c) => d_const += coef * c,
        }
    }
    // wedge terms: (1,0)∧(1,0) pairs vanish symbolically
    let sampled_pairs: Vec<&(Complex64, OneForm, OneForm)> = expr
        .length2
        .iter()
        .filter(|(_, phi, psi)| {
            let no_bar = |f: &OneForm| match f {
                OneForm::SphereRational { dzbar, .. } => dzbar.norm() == 0.0,
                OneForm::Torus { dzbar, .. } => dzbar.norm() == 0.0,
                OneForm::TorusXi { .. } => true,
                OneForm::TorusPhi { .. } => false,
            };
            !(no_bar(phi) && no_bar(psi))
        })
        .collect();
    if sampled_pairs.is_empty() {
        let res = d_const.norm();
        return Ok(ClosednessReport {
            closed: res < tol,
            max_residual: res,
            symbolic: true,
            samples_used: 0,
        });
    }
    let samples = sample_points(surface, expr);
    if samples.is_empty() {
        return Err(AnalyticError::InvalidInput(
            "no sample points clear of the poles".into(),
        ));
    }
    let mut max_res = 0.0f64;
    for z in &samples {
        let mut r = d_const;
        for (coef, phi, psi) in &sampled_pairs {
            let (a1, b1) = phi.eval(*z)?;
            let (a2, b2) = psi.eval(*z)?;
            r += coef * (a1 * b2 - b1 * a2);
        }
        max_res = max_res.max(r.norm());
    }
    Ok(ClosednessReport {
        closed: max_res < tol,
        max_residual: max_res,
        symbolic: false,
        samples_used: samples.len(),
    })
}

fn sample_points(surface: &Surface, expr: &IteratedIntegralExpr) -> Vec<Complex64> {
    let mut poles: Vec<Complex64> = surface
        .punctures
        .iter()
        .filter_map(|p| p.finite())
        .collect();
    for (_, f) in &expr.length1 {
        poles.extend(f.poles());
    }
    for (_, f, g) in &expr.length2 {
        poles.extend(f.poles());
        poles.extend(g.poles());
    }
    let candidates: Vec<Complex64> = match surface.lattice() {
        Some(lat) => {
            let tau = lat.tau;
            let mut v = Vec::new();
            for i in 0..7 {
                for j in 0..7 {
                    let a = (i as f64 + 0.37) / 7.0;
                    let b = (j as f64 + 0.61) / 7.0;
                    v.push(Complex64::new(a, 0.0) + tau * b);
                }
            }
            v
        }
        None => {
            // ring + grid around the pole cloud
            let center = if poles.is_empty() {
                Complex64::new(0.0, 0.0)
            } else {
                poles.iter().sum::<Complex64>() / poles.len() as f64
            };
            let scale = poles
                .iter()
                .map(|p| (p - center).norm())
                .fold(1.0f64, f64::max);
            let mut v = Vec::new();
            for k in 0..24 {
                let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.31) / 24.0;
                v.push(center + 1.7 * scale * Complex64::new(th.cos(), th.sin()));
                v.push(center + 0.83 * scale * Complex64::new(th.cos(), th.sin()));
            }
            v
        }
    };
    candidates
        .into_iter()
        .filter(|z| {
            poles.iter().all(|p| match surface.lattice() {
                Some(lat) => lat.dist(*z, *p) > 1e-3,
                None => (z - p).norm() > 1e-3,
            })
        })
        .take(25)
        .collect()
}

/// Difference of the evaluations on two paths with the same endpoints.
pub fn homotopy_defect(
    expr: &IteratedIntegralExpr,
    path1: &Path,
    path2: &Path,
) -> Result<Complex64, AnalyticError> {
    let (a1, b1) = path1.endpoints();
    let (a2, b2) = path2.endpoints();
    if (a1 - a2).norm() > 1e-12 || (b1 - b2).norm() > 1e-12 {
        return Err(AnalyticError::EndpointMismatch(format!(
            "({a1} -> {b1}) vs ({a2} -> {b2})"
        )));
    }
    Ok(iterated_integral(expr, path1)? - iterated_integral(expr, path2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Puncture;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    fn plane() -> Surface {
        // the sphere with only the point at infinity removed: a plain chart
        Surface::sphere(vec![Puncture::Infinity]).unwrap()
    }

    fn punctured_plane() -> Surface {
        Surface::sphere(vec![
            Puncture::Infinity,
            Puncture::Finite(Complex64::new(0.0, 0.0)),
        ])
        .unwrap()
    }

    fn seg(s: &Surface, a: Complex64, b: Complex64) -> Path {
        Path::new(s.clone(), vec![a, b]).unwrap()
    }

    #[test]
    fn line_integral_of_dz_is_displacement() {
        let s = plane();
        let dz = OneForm::constant_dz(&s, Complex64::new(1.0, 0.0));
        let p = seg(&s, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let v = line_integral(&dz, &p).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn log_integral_matches_quadrature() {
        // ∫₁² (2πi)⁻¹ dz/z = (2πi)⁻¹ log 2
        let s = punctured_plane();
        let f = OneForm::SphereRational {
            poly: vec![],
            poles: vec![(Complex64::new(0.0, 0.0), 1.0 / (2.0 * PI * I))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let p = seg(&s, Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0));
        let v = line_integral(&f, &p).unwrap();
        let expect = (2.0f64).ln() / (2.0 * PI * I);
        assert!((v - expect).norm() < 1e-11, "got {v}, expected {expect}");
        assert_abs_diff_eq!(v.im, -0.1103178000763258, epsilon = 1e-11);
    }

    #[test]
    fn square_loop_recovers_the_residue() {
        let s = punctured_plane();
        let f = OneForm::SphereRational {
            poly: vec![],
            poles: vec![(Complex64::new(0.0, 0.0), 1.0 / (2.0 * PI * I))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let square = Path::new(
            s.clone(),
            vec![
                Complex64::new(1.0, -1.0),
                Complex64::new(1.0, 1.0),
                Complex64::new(-1.0, 1.0),
                Complex64::new(-1.0, -1.0),
                Complex64::new(1.0, -1.0),
            ],
        )
        .unwrap();
        let v = line_integral(&f, &square).unwrap();
        assert!((v - 1.0).norm() < 1e-10, "loop period {v}");
    }

    #[test]
    fn reversal_negates() {
        let s = punctured_plane();
        let f = OneForm::SphereRational {
            poly: vec![Complex64::new(0.3, 0.1)],
            poles: vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 2.0))],
            dzbar: Complex64::new(0.5, 0.0),
        };
        let p = Path::new(
            s.clone(),
            vec![
                Complex64::new(1.0, 0.2),
                Complex64::new(2.0, 1.0),
                Complex64::new(0.5, 2.0),
            ],
        )
        .unwrap();
        let v = line_integral(&f, &p).unwrap();
        let w = line_integral(&f, &p.reversed()).unwrap();
        assert!((v + w).norm() < 1e-11);
    }

    #[test]
    fn dz_dz_over_unit_segment_is_half() {
        let s = plane();
        let dz = OneForm::constant_dz(&s, Complex64::new(1.0, 0.0));
        let p = seg(&s, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let v = double_integral(&dz, &dz, &p, 1e-12).unwrap();
        assert!((v - 0.5).norm() < 1e-11);
    }

    #[test]
    fn shuffle_identity_on_random_polylines() {
        let s = punctured_plane();
        let phi = OneForm::SphereRational {
            poly: vec![Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.4)],
            poles: vec![(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let psi = OneForm::SphereRational {
            poly: vec![Complex64::new(0.0, 1.0)],
            poles: vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, -0.5))],
            dzbar: Complex64::new(0.1, 0.0),
        };
        let p = Path::new(
            s.clone(),
            vec![
                Complex64::new(1.0, 0.3),
                Complex64::new(2.1, 0.8),
                Complex64::new(1.4, 1.9),
                Complex64::new(0.6, 1.1),
            ],
        )
        .unwrap();
        let a = double_integral(&phi, &psi, &p, 1e-12).unwrap();
        let b = double_integral(&psi, &phi, &p, 1e-12).unwrap();
        let lp = line_integral(&phi, &p).unwrap();
        let lq = line_integral(&psi, &p).unwrap();
        assert!(
            (a + b - lp * lq).norm() < 1e-9,
            "shuffle defect {}",
            (a + b - lp * lq).norm()
        );
    }

    #[test]
    fn chen_composition_matches_single_shot() {
        // whole-path evaluation vs splitting the path at an interior vertex
        let s = punctured_plane();
        let phi = OneForm::SphereRational {
            poly: vec![],
            poles: vec![(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let psi = OneForm::SphereRational {
            poly: vec![Complex64::new(1.0, 0.0)],
            poles: vec![],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let whole = Path::new(
            s.clone(),
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.5, 1.2), Complex64::new(0.4, 2.0)],
        )
        .unwrap();
        let alpha = seg(&s, Complex64::new(1.0, 0.0), Complex64::new(1.5, 1.2));
        let beta = seg(&s, Complex64::new(1.5, 1.2), Complex64::new(0.4, 2.0));
        let d_whole = double_integral(&phi, &psi, &whole, 1e-12).unwrap();
        let composed = double_integral(&phi, &psi, &alpha, 1e-12).unwrap()
            + double_integral(&phi, &psi, &beta, 1e-12).unwrap()
            + line_integral(&phi, &alpha).unwrap() * line_integral(&psi, &beta).unwrap();
        assert!((d_whole - composed).norm() < 1e-9);
    }

    #[test]
    fn exact_form_integrates_to_boundary_difference() {
        // ∫ df = f(q) − f(p) for f = z²: df = 2z dz
        let s = plane();
        let df = OneForm::SphereRational {
            poly: vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
            poles: vec![],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let p = Path::new(
            s.clone(),
            vec![Complex64::new(0.3, 0.1), Complex64::new(1.2, 0.7), Complex64::new(-0.4, 1.3)],
        )
        .unwrap();
        let (start, end) = p.endpoints();
        let v = line_integral(&df, &p).unwrap();
        let expect = end * end - start * start;
        assert!((v - expect).norm() < 1e-10);
    }

    #[test]
    fn footnote_identity_dh_phi() {
        // ∫ dh·φ = ∫ (hφ) − h(p)·∫φ with h = z², φ = dz/(z−3)
        let s = Surface::sphere(vec![
            Puncture::Infinity,
            Puncture::Finite(Complex64::new(3.0, 0.0)),
        ])
        .unwrap();
        let pole = Complex64::new(3.0, 0.0);
        let dh = OneForm::SphereRational {
            poly: vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
            poles: vec![],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let phi = OneForm::SphereRational {
            poly: vec![],
            poles: vec![(pole, Complex64::new(1.0, 0.0))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        // hφ = z²/(z−3) dz = (z + 3 + 9/(z−3)) dz by partial fractions
        let h_phi = OneForm::SphereRational {
            poly: vec![Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)],
            poles: vec![(pole, Complex64::new(9.0, 0.0))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let path = Path::new(
            s.clone(),
            vec![Complex64::new(0.2, 0.4), Complex64::new(1.1, 1.0), Complex64::new(0.4, 2.2)],
        )
        .unwrap();
        let (start, _) = path.endpoints();
        let lhs = double_integral(&dh, &phi, &path, 1e-12).unwrap();
        let rhs = line_integral(&h_phi, &path).unwrap()
            - start * start * line_integral(&phi, &path).unwrap();
        assert!((lhs - rhs).norm() < 1e-8, "footnote identity defect {}", (lhs - rhs).norm());
    }

    #[test]
    fn relative_closedness_dichotomy() {
        // all-(1,0) wedges vanish symbolically
        let s = Surface::sphere(vec![
            Puncture::Infinity,
            Puncture::Finite(Complex64::new(0.0, 0.0)),
            Puncture::Finite(Complex64::new(1.0, 0.0)),
        ])
        .unwrap();
        let f1 = OneForm::SphereRational {
            poly: vec![],
            poles: vec![(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let f2 = OneForm::SphereRational {
            poly: vec![],
            poles: vec![(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let mut expr = IteratedIntegralExpr::new();
        expr.length2.push((Complex64::new(1.0, 0.0), f1, f2));
        let rep = is_relatively_closed(&expr, &s, 1e-9).unwrap();
        assert!(rep.closed && rep.symbolic);

        // ∫ dz dz̄ is not relatively closed: residual dz∧dz̄
        let plane = plane();
        let dz = OneForm::constant_dz(&plane, Complex64::new(1.0, 0.0));
        let dzbar = OneForm::constant_dzbar(&plane, Complex64::new(1.0, 0.0));
        let mut bad = IteratedIntegralExpr::new();
        bad.length2.push((Complex64::new(1.0, 0.0), dz, dzbar));
        let rep = is_relatively_closed(&bad, &plane, 1e-9).unwrap();
        assert!(!rep.closed);
        assert!(rep.max_residual > 0.5);
    }

    #[test]
    fn torus_green_expression_is_relatively_closed() {
        use crate::greens::{solve_green, xi_phi_from_f};
        use crate::surface::k_space_basis;
        let s = Surface::torus(
            Complex64::new(0.0, 1.0),
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        )
        .unwrap();
        let kb = k_space_basis(&s);
        let g = solve_green(&s, &kb.elements[0], Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.5))
            .unwrap();
        let (xi, _) = xi_phi_from_f(&g);
        let dz = OneForm::constant_dz(&s, Complex64::new(1.0, 0.0));
        let dzbar = OneForm::constant_dzbar(&s, Complex64::new(1.0, 0.0));
        // 2∫ξ + h·[∫ω ω̄ − ∫ω̄ ω] with h = i: dξ = −Ω cancels the wedge
        let mut expr = IteratedIntegralExpr::new();
        expr.length1.push((Complex64::new(2.0, 0.0), xi));
        expr.length2.push((I, dz.clone(), dzbar.clone()));
        expr.length2.push((-I, dzbar, dz));
        let rep = is_relatively_closed(&expr, &s, 1e-9).unwrap();
        assert!(rep.closed, "residual {}", rep.max_residual);
        assert!(!rep.symbolic);
    }

    #[test]
    fn rejects_nonclosed_wedge_input() {
        use crate::greens::{solve_green, xi_phi_from_f};
        use crate::surface::k_space_basis;
        let s = Surface::torus(
            Complex64::new(0.0, 1.0),
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        )
        .unwrap();
        let kb = k_space_basis(&s);
        let g = solve_green(&s, &kb.elements[0], Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.5))
            .unwrap();
        let (xi, _) = xi_phi_from_f(&g);
        let dz = OneForm::constant_dz(&s, Complex64::new(1.0, 0.0));
        let mut expr = IteratedIntegralExpr::new();
        expr.length2.push((Complex64::new(1.0, 0.0), xi, dz));
        assert!(matches!(
            is_relatively_closed(&expr, &s, 1e-9),
            Err(AnalyticError::NotClosed(_))
        ));
    }

    #[test]
    fn homotopy_defect_dichotomy() {
        // closed expression: homotopic detours agree
        let s = punctured_plane();
        let f = OneForm::SphereRational {
            poly: vec![],
            poles: vec![(Complex64::new(0.0, 0.0), 1.0 / (2.0 * PI * I))],
            dzbar: Complex64::new(0.0, 0.0),
        };
        let mut expr = IteratedIntegralExpr::new();
        expr.length1.push((Complex64::new(1.0, 0.0), f.clone()));
        let p1 = seg(&s, Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0));
        let p2 = Path::new(
            s.clone(),
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.4, 0.9), Complex64::new(2.0, 0.0)],
        )
        .unwrap();
        let d = homotopy_defect(&expr, &p1, &p2).unwrap();
        assert!(d.norm() < 1e-8, "defect {d}");

        // paths differing by a loop around 0 give the winding number
        let p3 = Path::new(
            s.clone(),
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 1.2),
                Complex64::new(-1.0, 1.2),
                Complex64::new(-1.0, -1.2),
                Complex64::new(1.2, -1.2),
                Complex64::new(1.2, 0.4),
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let d = homotopy_defect(&expr, &p3, &p1).unwrap();
        assert!((d - 1.0).norm() < 1e-8, "winding defect {d}");

        // non-closed ∫dz dz̄ shows a defect on the standard detour pair
        let plane = plane();
        let dz = OneForm::constant_dz(&plane, Complex64::new(1.0, 0.0));
        let dzbar = OneForm::constant_dzbar(&plane, Complex64::new(1.0, 0.0));
        let mut bad = IteratedIntegralExpr::new();
        bad.length2.push((Complex64::new(1.0, 0.0), dz, dzbar));
        let straight = seg(&plane, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let detour = Path::new(
            plane.clone(),
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let d = homotopy_defect(&bad, &straight, &detour).unwrap();
        assert!(d.norm() > 1e-3, "positive control defect {d}");
        // the defect for this pair is computable by hand: 1/2 + i − 1/2 = i
        assert!((d + I).norm() < 1e-9 || (d - I).norm() < 1e-9, "defect {d}");
    }

    #[test]
    fn endpoint_mismatch_is_reported() {
        let s = plane();
        let dz = OneForm::constant_dz(&s, Complex64::new(1.0, 0.0));
        let mut expr = IteratedIntegralExpr::new();
        expr.length1.push((Complex64::new(1.0, 0.0), dz));
        let p1 = seg(&s, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let p2 = seg(&s, Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0));
        assert!(matches!(
            homotopy_defect(&expr, &p1, &p2),
            Err(AnalyticError::EndpointMismatch(_))
        ));
    }

    #[test]
    fn path_margin_enforced() {
        let s = punctured_plane();
        // segment passes straight through the puncture at 0
        let r = Path::new(s.clone(), vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(r, Err(AnalyticError::PoleProximity { .. })));
    }

    #[test]
    fn torus_iterated_integral_composes() {
        let s = Surface::torus(
            Complex64::new(0.0, 1.0),
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        )
        .unwrap();
        let basis = crate::surface::third_kind_basis(&s).unwrap();
        let zeta = basis[0].form.clone();
        let dz = OneForm::constant_dz(&s, Complex64::new(1.0, 0.0));
        let whole = Path::new(
            s.clone(),
            vec![Complex64::new(0.2, 0.2), Complex64::new(0.7, 0.45), Complex64::new(0.3, 0.8)],
        )
        .unwrap();
        let alpha = seg(&s, Complex64::new(0.2, 0.2), Complex64::new(0.7, 0.45));
        let beta = seg(&s, Complex64::new(0.7, 0.45), Complex64::new(0.3, 0.8));
        let d_whole = double_integral(&zeta, &dz, &whole, 1e-12).unwrap();
        let composed = double_integral(&zeta, &dz, &alpha, 1e-12).unwrap()
            + double_integral(&zeta, &dz, &beta, 1e-12).unwrap()
            + line_integral(&zeta, &alpha).unwrap() * line_integral(&dz, &beta).unwrap();
        assert!((d_whole - composed).norm() < 1e-9);
    }
}
