//! The period mapping Ψ_p of the truncated path torsor: coordinates
//! (h_1(q), …, h_m(q), f_{Ω_1}(q), …) in the dual basis {e_k, κ_a} of
//! i[Gr^W_{−2}𝔭]^{−1,−1}_ℝ, with h_k(q) = Im ∫_p^q ζ_k and f_Ω the Green
//! function normalised at p. The i-factor is implicit in the coordinates.
//!
//! Two evaluation routes: honest path quadrature (the definition) and the
//! closed forms (log-moduli of σ-quotients, the Green closed form) used by
//! the grid scans. The quadrature route stays the oracle in the tests.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::chen::{self, Path};
use crate::error::AnalyticError;
use crate::greens::{solve_green, GreenFunction};
use crate::surface::{
    k_space_basis, third_kind_basis, OneForm, Puncture, Surface, ThirdKindDifferential,
};

/// Labels of the graded fiber basis {e_k, κ_a}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFiber {
    pub e_labels: Vec<String>,
    pub kappa_labels: Vec<String>,
}

impl GradedFiber {
    pub fn dimension(&self) -> usize {
        self.e_labels.len() + self.kappa_labels.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.e_labels.iter().chain(&self.kappa_labels).cloned().collect()
    }
}

/// The fiber for a surface: one e-label per ζ_k, one κ-label per K-basis
/// element.
pub fn graded_fiber(s: &Surface) -> GradedFiber {
    let m = s.other_punctures().len();
    let kdim = k_space_basis(s).elements.len();
    GradedFiber {
        e_labels: (1..=m).map(|k| format!("e{k}")).collect(),
        kappa_labels: (1..=kdim).map(|a| format!("kappa{a}")).collect(),
    }
}

/// Ψ_p evaluator with the third-kind and Green data built once.
pub struct PeriodEvaluator {
    pub surface: Surface,
    pub base: Complex64,
    pub fiber: GradedFiber,
    thirds: Vec<ThirdKindDifferential>,
    greens: Vec<GreenFunction>,
}

/// Clearance demanded of p and q around the punctures.
pub const POINT_MARGIN: f64 = 1e-6;

impl PeriodEvaluator {
    pub fn new(surface: &Surface, base: Complex64) -> Result<Self, AnalyticError> {
        if surface.punctures.is_empty() {
            return Err(AnalyticError::InvalidSurface(
                "the period mapping needs at least one puncture (x₀)".into(),
            ));
        }
        if surface.puncture_distance(base) <= POINT_MARGIN {
            return Err(AnalyticError::AtPuncture(format!("{base}")));
        }
        let thirds = if surface.other_punctures().is_empty() {
            vec![]
        } else {
            third_kind_basis(surface)?
        };
        let kb = k_space_basis(surface);
        let x0 = surface.base_puncture().and_then(|p| p.finite());
        let mut greens = Vec::new();
        for el in &kb.elements {
            let x0 = x0.ok_or_else(|| {
                AnalyticError::InvalidSurface("Green functions need a finite x₀".into())
            })?;
            greens.push(solve_green(surface, el, x0, base)?);
        }
        Ok(PeriodEvaluator {
            surface: surface.clone(),
            base,
            fiber: graded_fiber(surface),
            thirds,
            greens,
        })
    }

    /// Ψ_p(q) by path quadrature along the default (detoured) path.
    pub fn psi(&self, q: Complex64) -> Result<Vec<f64>, AnalyticError> {
        if self.surface.puncture_distance(q) <= POINT_MARGIN {
            return Err(AnalyticError::AtPuncture(format!("{q}")));
        }
        if (q - self.base).norm() == 0.0 {
            return Ok(vec![0.0; self.fiber.dimension()]);
        }
        let path = default_path(&self.surface, self.base, q)?;
        self.psi_along(&path)
    }

    /// Ψ_p along an explicit path from p (used by the path-independence
    /// tests; the h_k only see the path through its homotopy class).
    pub fn psi_along(&self, path: &Path) -> Result<Vec<f64>, AnalyticError> {
        let (start, end) = path.endpoints();
        if (start - self.base).norm() > 1e-12 {
            return Err(AnalyticError::EndpointMismatch(format!(
                "path starts at {start}, base is {}",
                self.base
            )));
        }
        let mut out = Vec::with_capacity(self.fiber.dimension());
        for tk in &self.thirds {
            let v = chen::line_integral(&tk.form, path)?;
            out.push(v.im);
        }
        for g in &self.greens {
            out.push(g.eval(end)?);
        }
        Ok(out)
    }

    /// Ψ_p(q) through the closed forms (scan-grade evaluator).
    pub fn psi_closed(&self, q: Complex64) -> Result<Vec<f64>, AnalyticError> {
        if self.surface.puncture_distance(q) <= POINT_MARGIN {
            return Err(AnalyticError::AtPuncture(format!("{q}")));
        }
        let mut out = Vec::with_capacity(self.fiber.dimension());
        for tk in &self.thirds {
            out.push(self.h_closed(tk, q) - self.h_closed(tk, self.base));
        }
        for g in &self.greens {
            out.push(g.eval(q)?);
        }
        Ok(out)
    }

    /// The single-valued potential whose difference is h_k: on the sphere
    /// −(2π)⁻¹'log-moduli, on the torus the log|σ| combination with the real
    /// correction term.
    fn h_closed(&self, tk: &ThirdKindDifferential, z: Complex64) -> f64 {
        match &tk.form {
            OneForm::SphereRational { .. } => {
                let mut t = 0.0;
                if let Puncture::Finite(xk) = tk.pole_pair.1 {
                    t += (z - xk).norm().ln();
                }
                if let Puncture::Finite(x0) = tk.pole_pair.0 {
                    t -= (z - x0).norm().ln();
                }
                -t / (2.0 * PI)
            }
            OneForm::Torus { lattice, dz, zeta_pairs, .. } => {
                let (_, a, b) = zeta_pairs[0];
                // dz coefficient is (2πi)⁻¹·c_k
                let c = dz * (2.0 * PI * Complex64::new(0.0, 1.0));
                let l = lattice.log_abs_sigma(z - a) - lattice.log_abs_sigma(z - b)
                    + (c * z).re;
                -l / (2.0 * PI)
            }
            _ => unreachable!("third-kind forms are rational or zeta-backed"),
        }
    }
}

/// Ψ_p(q).
pub fn psi_p(s: &Surface, p: Complex64, q: Complex64) -> Result<Vec<f64>, AnalyticError> {
    PeriodEvaluator::new(s, p)?.psi(q)
}

/// Ψ(p,q) = Ψ_p(q).
pub fn psi(s: &Surface, p: Complex64, q: Complex64) -> Result<Vec<f64>, AnalyticError> {
    psi_p(s, p, q)
}

/// Straight path from p to q with automatic detours around punctures.
pub fn default_path(s: &Surface, p: Complex64, q: Complex64) -> Result<Path, AnalyticError> {
    let mut vertices = vec![p, q];
    let clearance = detour_radius(s);
    for _ in 0..6 {
        let mut adjusted = false;
        let mut i = 0;
        while i + 1 < vertices.len() {
            let (a, b) = (vertices[i], vertices[i + 1]);
            if let Some(c) = nearest_obstruction(s, a, b, clearance) {
                // skip if an endpoint itself sits inside the clearance disk
                if (a - c).norm() > clearance && (b - c).norm() > clearance {
                    let w = waypoint_around(a, b, c, 2.0 * clearance);
                    vertices.insert(i + 1, w);
                    adjusted = true;
                }
            }
            i += 1;
        }
        if !adjusted {
            break;
        }
    }
    Path::new(s.clone(), vertices)
}

fn detour_radius(s: &Surface) -> f64 {
    let finite: Vec<Complex64> =
        s.punctures.iter().filter_map(|p| p.finite()).collect();
    let mut sep = f64::INFINITY;
    for (i, a) in finite.iter().enumerate() {
        for b in finite.iter().skip(i + 1) {
            sep = sep.min(s.point_distance(*a, *b));
        }
    }
    if let Some(lat) = s.lattice() {
        // translates of a single puncture are one cell apart
        let cell = lat.tau.norm().min(1.0);
        sep = sep.min(cell);
    }
    if !sep.is_finite() {
        sep = 1.0;
    }
    (0.2 * sep).min(0.1)
}

/// The puncture (or lattice translate) whose distance to the segment is
/// smallest and below the clearance, if any.
fn nearest_obstruction(
    s: &Surface,
    a: Complex64,
    b: Complex64,
    clearance: f64,
) -> Option<Complex64> {
    let mut best: Option<(f64, Complex64)> = None;
    for p in &s.punctures {
        let Some(c) = p.finite() else { continue };
        match s.lattice() {
            None => {
                let d = chen::segment_point_distance(s, a, b, c);
                if d < clearance && best.map_or(true, |(bd, _)| d < bd) {
                    best = Some((d, c));
                }
            }
            Some(lat) => {
                // examine the concrete translates near the segment
                let tau = lat.tau;
                let (aa, ab) = lat.affine(a);
                let (ba, bb) = lat.affine(b);
                let (ca, cb) = lat.affine(c);
                for m in ((aa.min(ba) - ca).floor() as i64 - 1)
                    ..=((aa.max(ba) - ca).ceil() as i64 + 1)
                {
                    for n in ((ab.min(bb) - cb).floor() as i64 - 1)
                        ..=((ab.max(bb) - cb).ceil() as i64 + 1)
                    {
                        let shifted = c + Complex64::new(m as f64, 0.0) + tau * n as f64;
                        let d = chen::segment_point_chart(a, b, shifted);
                        if d < clearance && best.map_or(true, |(bd, _)| d < bd) {
                            best = Some((d, shifted));
                        }
                    }
                }
            }
        }
    }
    best.map(|(_, c)| c)
}

fn waypoint_around(a: Complex64, b: Complex64, c: Complex64, radius: f64) -> Complex64 {
    let dir = b - a;
    let u = dir / dir.norm();
    let n = Complex64::new(0.0, 1.0) * u;
    // side of c relative to the segment
    let side = ((c - a) * u.conj()).im;
    let away = if side >= 0.0 { -n } else { n };
    // step off from the projection of c
    let t = (((c - a) * u.conj()).re / dir.norm()).clamp(0.0, 1.0);
    let proj = a + t * dir;
    let out = proj - c;
    let out = if out.norm() > 1e-12 { out / out.norm() } else { away };
    c + out * radius
}

/// One flagged cell of a zero-locus scan.
#[derive(Clone, Debug)]
pub struct FlaggedCell {
    pub i: usize,
    pub j: usize,
    pub center: Complex64,
    pub norm: f64,
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub grid_n: usize,
    pub region: (f64, f64, f64, f64),
    pub flagged: Vec<FlaggedCell>,
    pub excluded: usize,
    /// No flagged cell has all eight neighbours flagged.
    pub nowhere_dense: bool,
}

/// Scan |Ψ_p| < tol over an n×n grid of cell centers in the region
/// (x0, x1, y0, y1), excluding cells too close to the punctures.
pub fn zero_locus_scan(
    s: &Surface,
    p: Complex64,
    region: (f64, f64, f64, f64),
    n: usize,
    tol: f64,
) -> Result<ScanResult, AnalyticError> {
    let eval = PeriodEvaluator::new(s, p)?;
    scan_with(&eval, region, n, tol, |v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// Shared scan driver: евaluates the closed form at cell centers in
/// parallel rows and applies `measure` to the coordinate vector.
pub fn scan_with<F>(
    eval: &PeriodEvaluator,
    region: (f64, f64, f64, f64),
    n: usize,
    tol: f64,
    measure: F,
) -> Result<ScanResult, AnalyticError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let (x0, x1, y0, y1) = region;
    if !(x1 > x0 && y1 > y0) {
        return Err(AnalyticError::InvalidInput("empty scan region".into()));
    }
    if n < 8 {
        return Err(AnalyticError::InvalidInput("grid size must be ≥ 8".into()));
    }
    if tol <= 0.0 {
        return Err(AnalyticError::InvalidInput("tolerance must be positive".into()));
    }
    let dx = (x1 - x0) / n as f64;
    let dy = (y1 - y0) / n as f64;
    let exclusion = (dx * dx + dy * dy).sqrt().max(POINT_MARGIN);
    let rows: Vec<Vec<Option<f64>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = y0 + (j as f64 + 0.5) * dy;
            (0..n)
                .map(|i| {
                    let z = Complex64::new(x0 + (i as f64 + 0.5) * dx, y);
                    if eval.surface.puncture_distance(z) <= exclusion {
                        None
                    } else {
                        eval.psi_closed(z).ok().map(|v| measure(&v))
                    }
                })
                .collect()
        })
        .collect();
    let mut flagged_mask = vec![false; n * n];
    let mut flagged = Vec::new();
    let mut excluded = 0usize;
    for j in 0..n {
        for i in 0..n {
            match rows[j][i] {
                None => excluded += 1,
                Some(v) => {
                    if v < tol {
                        flagged_mask[j * n + i] = true;
                        flagged.push(FlaggedCell {
                            i,
                            j,
                            center: Complex64::new(
                                x0 + (i as f64 + 0.5) * dx,
                                y0 + (j as f64 + 0.5) * dy,
                            ),
                            norm: v,
                        });
                    }
                }
            }
        }
    }
    let mut nowhere_dense = true;
    'outer: for cell in &flagged {
        let (i, j) = (cell.i, cell.j);
        if i == 0 || j == 0 || i + 1 >= n || j + 1 >= n {
            continue;
        }
        let mut all = true;
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let ii = (i as i64 + di) as usize;
                let jj = (j as i64 + dj) as usize;
                if !flagged_mask[jj * n + ii] {
                    all = false;
                }
            }
        }
        if all {
            nowhere_dense = false;
            break 'outer;
        }
    }
    Ok(ScanResult { grid_n: n, region, flagged, excluded, nowhere_dense })
}

/// Rank of the sampled period matrix; full rank certifies non-degeneracy.
pub fn nondegeneracy_rank(
    s: &Surface,
    p: Complex64,
    samples: &[Complex64],
) -> Result<usize, AnalyticError> {
    let eval = PeriodEvaluator::new(s, p)?;
    let dim = eval.fiber.dimension();
    if dim == 0 {
        return Err(AnalyticError::GradedFiberEmpty);
    }
    if samples.len() < dim {
        return Err(AnalyticError::NotEnoughSamples { needed: dim, got: samples.len() });
    }
    let mut rows = Vec::with_capacity(samples.len());
    for q in samples {
        rows.push(eval.psi_closed(*q)?);
    }
    let mat = nalgebra::DMatrix::from_fn(rows.len(), dim, |r, c| rows[r][c]);
    let svd = mat.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(svd
        .singular_values
        .iter()
        .filter(|&&sv| sv > 1e-8 * smax)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sphere_inf_zero() -> Surface {
        Surface::sphere(vec![
            Puncture::Infinity,
            Puncture::Finite(Complex64::new(0.0, 0.0)),
        ])
        .unwrap()
    }

    fn torus_i() -> Surface {
        Surface::torus(
            Complex64::new(0.0, 1.0),
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn diagonal_vanishes_exactly() {
        let s = sphere_inf_zero();
        let p = Complex64::new(1.0, 0.5);
        assert_eq!(psi_p(&s, p, p).unwrap(), vec![0.0]);
        let t = torus_i();
        let p = Complex64::new(0.25, 0.6);
        let v = psi_p(&t, p, p).unwrap();
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn sphere_log_value() {
        // X = ℂ − {0}, p = 1, q = 2: h₁ = −log 2 / 2π
        let s = sphere_inf_zero();
        let v = psi_p(&s, Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(v.len(), 1);
        assert_abs_diff_eq!(v[0], -(2.0f64).ln() / (2.0 * PI), epsilon = 1e-9);
    }

    #[test]
    fn quadrature_and_closed_form_agree() {
        let s = torus_i();
        let p = Complex64::new(0.21, 0.33);
        let eval = PeriodEvaluator::new(&s, p).unwrap();
        for q in [
            Complex64::new(0.71, 0.64),
            Complex64::new(0.35, 0.81),
            Complex64::new(0.82, 0.22),
        ] {
            let a = eval.psi(q).unwrap();
            let b = eval.psi_closed(q).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-9);
            }
        }
        let sp = sphere_inf_zero();
        let eval = PeriodEvaluator::new(&sp, Complex64::new(1.0, 0.2)).unwrap();
        for q in [Complex64::new(2.0, 1.0), Complex64::new(-1.4, 0.7)] {
            let a = eval.psi(q).unwrap();
            let b = eval.psi_closed(q).unwrap();
            assert_abs_diff_eq!(a[0], b[0], epsilon = 1e-9);
        }
    }

    #[test]
    fn path_independence_of_the_imaginary_part() {
        // two non-homotopic paths differ by a real period: Im is unchanged
        let s = torus_i();
        let p = Complex64::new(0.25, 0.4);
        let q = Complex64::new(0.75, 0.7);
        let eval = PeriodEvaluator::new(&s, p).unwrap();
        let direct = Path::new(s.clone(), vec![p, q]).unwrap();
        // detour an extra lattice cell: same endpoints as lifts differ by
        // homotopy winding the (1,0) loop
        let around = Path::new(
            s.clone(),
            vec![
                p,
                p + Complex64::new(0.22, 0.21),
                p + Complex64::new(0.73, 0.2) + Complex64::new(0.0, 0.0),
                q,
            ],
        )
        .unwrap();
        let a = eval.psi_along(&direct).unwrap();
        let b = eval.psi_along(&around).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-8);
        }
    }

    #[test]
    fn antisymmetry_of_psi() {
        let s = torus_i();
        let p = Complex64::new(0.2, 0.3);
        let q = Complex64::new(0.6, 0.75);
        let a = psi(&s, p, q).unwrap();
        let b = psi(&s, q, p).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x + y, 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn default_path_detours_around_punctures() {
        let s = sphere_inf_zero();
        // straight p→q would pass through the puncture at 0
        let p = Complex64::new(-1.0, 0.0);
        let q = Complex64::new(1.0, 0.0);
        let path = default_path(&s, p, q).unwrap();
        assert!(path.vertices.len() > 2, "expected a detour, got {:?}", path.vertices);
        let v = psi_p(&s, p, q).unwrap();
        // |q| = |p| = 1 so h₁ must vanish regardless of the detour
        assert_abs_diff_eq!(v[0], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn zero_locus_is_the_unit_circle() {
        let s = sphere_inf_zero();
        let p = Complex64::new(1.0, 0.0);
        let n = 64;
        let region = (-2.0, 2.0, -2.0, 2.0);
        let cell_diag = (2.0f64 * (4.0 / n as f64) * (4.0 / n as f64)).sqrt();
        // |Ψ| ≈ dist-to-circle/2π near the locus, so this keeps the flagged
        // band under a cell wide
        let tol = 0.3 * cell_diag / (2.0 * PI);
        let scan = zero_locus_scan(&s, p, region, n, tol).unwrap();
        assert!(!scan.flagged.is_empty());
        for cell in &scan.flagged {
            assert!(
                (cell.center.norm() - 1.0).abs() < cell_diag,
                "flagged cell at {} is off the circle",
                cell.center
            );
        }
        assert!(scan.nowhere_dense);
    }

    #[test]
    fn saturated_scan_is_not_nowhere_dense() {
        let s = sphere_inf_zero();
        let p = Complex64::new(1.0, 0.0);
        let scan = zero_locus_scan(&s, p, (-2.0, 2.0, -2.0, 2.0), 32, 1e9).unwrap();
        assert!(!scan.nowhere_dense, "a saturated detector must fail the verdict");
    }

    #[test]
    fn rank_counts() {
        // ℂ − {0,1}: two independent log-moduli, rank 2
        let s = Surface::sphere(vec![
            Puncture::Infinity,
            Puncture::Finite(Complex64::new(0.0, 0.0)),
            Puncture::Finite(Complex64::new(1.0, 0.0)),
        ])
        .unwrap();
        let p = Complex64::new(2.0, 0.0);
        let samples: Vec<Complex64> = (0..40)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / 40.0;
                Complex64::new(0.4, 0.3) + 2.3 * Complex64::new(th.cos(), th.sin())
            })
            .filter(|z| s.puncture_distance(*z) > 0.2)
            .collect();
        assert_eq!(nondegeneracy_rank(&s, p, &samples).unwrap(), 2);

        // punctured torus: one e-label + one κ-label
        let t = torus_i();
        let p = Complex64::new(0.21, 0.43);
        let samples: Vec<Complex64> = (0..40)
            .map(|k| {
                let a = (k as f64 * 0.37).fract();
                let b = (k as f64 * 0.61 + 0.17).fract();
                Complex64::new(a, b)
            })
            .filter(|z| t.puncture_distance(*z) > 0.1)
            .collect();
        assert_eq!(nondegeneracy_rank(&t, p, &samples).unwrap(), 2);
    }

    #[test]
    fn degenerate_surfaces_are_rejected() {
        // compact torus: Gr^W_{-2}𝔭 = 0, fiber empty
        let compact = Surface::torus(Complex64::new(0.0, 1.0), vec![]).unwrap();
        assert!(matches!(
            PeriodEvaluator::new(&compact, Complex64::new(0.3, 0.3)),
            Err(AnalyticError::InvalidSurface(_))
        ));
        // ℂ = sphere − {∞}: fiber is empty, rank must refuse
        let c = Surface::sphere(vec![Puncture::Infinity]).unwrap();
        let r = nondegeneracy_rank(&c, Complex64::new(0.0, 0.0), &[Complex64::new(1.0, 0.0)]);
        assert!(matches!(r, Err(AnalyticError::GradedFiberEmpty)));
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let s = sphere_inf_zero();
        let r = nondegeneracy_rank(&s, Complex64::new(1.0, 0.0), &[]);
        assert!(matches!(r, Err(AnalyticError::NotEnoughSamples { .. })));
    }

    #[test]
    fn lipschitz_proxy_on_a_compact_set() {
        let s = torus_i();
        let eval = PeriodEvaluator::new(&s, Complex64::new(0.21, 0.33)).unwrap();
        let h = 1e-4;
        for q in [Complex64::new(0.7, 0.6), Complex64::new(0.4, 0.8)] {
            let a = eval.psi_closed(q).unwrap();
            let b = eval.psi_closed(q + Complex64::new(h, 0.0)).unwrap();
            let diff: f64 = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            assert!(diff / h < 50.0, "local Lipschitz constant too large: {}", diff / h);
        }
    }
}
