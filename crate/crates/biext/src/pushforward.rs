//! Pushing the universal period through a monodromy Hodge map:
//! Ψ_V(q) = Ψ_V(p) + Φ∘Ψ_p(q), and the splitting-locus scan of a unipotent
//! real biextension presented by (Φ, base period).
//!
//! Φ is pure input data — a real matrix from the graded fiber of the path
//! torsor to a labelled copy of iC^{-1,-1}_ℝ. Only dimensions and
//! finiteness are checked here; that it really is a morphism of Hodge
//! structures coming from monodromy is the caller's contract.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::AnalyticError;
use crate::hodge::PeriodValue;
use crate::period::{graded_fiber, scan_with, GradedFiber, PeriodEvaluator, ScanResult};
use crate::surface::{Surface, SurfaceKind};

#[derive(Clone, Debug)]
pub struct MonodromyHodgeMap {
    pub source: GradedFiber,
    pub target_labels: Vec<String>,
    /// target_dim × source_dim, row major.
    pub rows: Vec<Vec<f64>>,
}

impl MonodromyHodgeMap {
    pub fn new(
        source: GradedFiber,
        target_labels: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self, AnalyticError> {
        if rows.len() != target_labels.len() {
            return Err(AnalyticError::DimensionMismatch {
                expected: target_labels.len(),
                got: rows.len(),
            });
        }
        let src = source.dimension();
        for row in &rows {
            if row.len() != src {
                return Err(AnalyticError::DimensionMismatch { expected: src, got: row.len() });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(AnalyticError::InvalidInput("Φ has non-finite entries".into()));
            }
        }
        Ok(MonodromyHodgeMap { source, target_labels, rows })
    }

    pub fn identity(fiber: &GradedFiber) -> Self {
        let n = fiber.dimension();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        MonodromyHodgeMap {
            source: fiber.clone(),
            target_labels: fiber.labels(),
            rows,
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>, AnalyticError> {
        if v.len() != self.source.dimension() {
            return Err(AnalyticError::DimensionMismatch {
                expected: self.source.dimension(),
                got: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn rank(&self) -> usize {
        if self.rows.is_empty() || self.source.dimension() == 0 {
            return 0;
        }
        let mat = nalgebra::DMatrix::from_fn(
            self.rows.len(),
            self.source.dimension(),
            |r, c| self.rows[r][c],
        );
        let svd = mat.svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        if smax == 0.0 {
            return 0;
        }
        svd.singular_values.iter().filter(|&&sv| sv > 1e-12 * smax).count()
    }
}

/// Wire format for phi.json.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PhiSpec {
    pub rows: Vec<Vec<f64>>,
    pub e_dim: usize,
    pub kappa_dim: usize,
    pub base_period: Vec<f64>,
}

impl PhiSpec {
    pub fn to_map(&self, s: &Surface) -> Result<(MonodromyHodgeMap, PeriodValue), AnalyticError> {
        let fiber = graded_fiber(s);
        if fiber.e_labels.len() != self.e_dim || fiber.kappa_labels.len() != self.kappa_dim {
            return Err(AnalyticError::DimensionMismatch {
                expected: fiber.dimension(),
                got: self.e_dim + self.kappa_dim,
            });
        }
        let labels: Vec<String> =
            (0..self.rows.len()).map(|i| format!("c{i}")).collect();
        let map = MonodromyHodgeMap::new(fiber, labels.clone(), self.rows.clone())?;
        if self.base_period.len() != map.target_labels.len() {
            return Err(AnalyticError::DimensionMismatch {
                expected: map.target_labels.len(),
                got: self.base_period.len(),
            });
        }
        let base = PeriodValue::from_f64(labels, &self.base_period)
            .ok_or_else(|| AnalyticError::InvalidInput("base period not finite".into()))?;
        Ok((map, base))
    }
}

/// Ψ_V(q) = Ψ_V(p) + Φ·Ψ_p(q). The Φ·Ψ_p term is computed in binary64 and
/// embedded exactly, so base-period additivity is exact.
pub fn pushforward_period(
    phi: &MonodromyHodgeMap,
    base_period: &PeriodValue,
    s: &Surface,
    p: Complex64,
    q: Complex64,
) -> Result<PeriodValue, AnalyticError> {
    if base_period.coords.len() != phi.target_labels.len() {
        return Err(AnalyticError::DimensionMismatch {
            expected: phi.target_labels.len(),
            got: base_period.coords.len(),
        });
    }
    let fiber = graded_fiber(s);
    if fiber.dimension() != phi.source.dimension() {
        return Err(AnalyticError::DimensionMismatch {
            expected: fiber.dimension(),
            got: phi.source.dimension(),
        });
    }
    let psi = crate::period::psi_p(s, p, q)?;
    let pushed = phi.apply(&psi)?;
    let shift = PeriodValue::from_f64(phi.target_labels.clone(), &pushed)
        .ok_or_else(|| AnalyticError::InvalidInput("pushforward not finite".into()))?;
    Ok(base_period.add(&shift))
}

#[derive(Clone, Debug)]
pub struct SplittingScan {
    pub scan: ScanResult,
    /// Set when Φ has rank 0 and the base period vanishes: the biextension
    /// splits everywhere and the locus is all of X.
    pub degenerate: bool,
}

/// Scan |Ψ_V| = |base + Φ·Ψ_p| < tol over the region.
pub fn splitting_locus_scan(
    phi: &MonodromyHodgeMap,
    base_period: &PeriodValue,
    s: &Surface,
    p: Complex64,
    region: (f64, f64, f64, f64),
    n: usize,
    tol: f64,
) -> Result<SplittingScan, AnalyticError> {
    let eval = PeriodEvaluator::new(s, p)?;
    if eval.fiber.dimension() != phi.source.dimension() {
        return Err(AnalyticError::DimensionMismatch {
            expected: eval.fiber.dimension(),
            got: phi.source.dimension(),
        });
    }
    let base: Vec<f64> = base_period.to_f64();
    let degenerate = phi.rank() == 0 && base.iter().all(|x| *x == 0.0);
    let scan = scan_with(&eval, region, n, tol, |v| {
        let pushed = phi.apply(v).expect("dimensions checked above");
        pushed
            .iter()
            .zip(&base)
            .map(|(a, b)| (a + b) * (a + b))
            .sum::<f64>()
            .sqrt()
    })?;
    Ok(SplittingScan { scan, degenerate })
}

/// Gr^W_{-2}𝔭(X,x) = 0 exactly for ℙ¹, ℂ and compact elliptic curves.
pub fn gr2_vanishing_check(s: &Surface) -> bool {
    match s.kind {
        SurfaceKind::Sphere => s.punctures.len() <= 1,
        SurfaceKind::Torus => s.punctures.is_empty(),
    }
}
