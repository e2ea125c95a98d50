//! Dependence extraction and restriction-vanishing tests for holomorphic data.
//!
//! Dependence extraction: if Σ|f_j|² = Σ|h_k|² as a truncated identity in
//! t, t̄, the coefficient relations force {f_j, h_k} to be linearly
//! dependent, and a kernel vector of the per-order coefficient matrix is a
//! dependence. Restriction vanishing: Ω = Σ h_jk ω_j ∧ ω̄_k vanishes on X
//! only when the skew-hermitian h itself vanishes; the eigen-diagonal form
//! of i·h produces a witness sample otherwise.
//!
//! Verdicts are truncation-level statements: a dependence certified at
//! order R annihilates all coefficients up to R, nothing more.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::AnalyticError;
use crate::surface::{holomorphic_basis, Surface};

/// Coefficients a_0..a_R of a power series truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    pub coeffs: Vec<Complex64>,
}

/// series.json: two lists of coefficient arrays, entries as [re, im].
#[derive(serde::Serialize, serde::Deserialize, Debug, Clone)]
pub struct SeriesSpec {
    pub fs: Vec<Vec<[f64; 2]>>,
    pub hs: Vec<Vec<[f64; 2]>>,
}

impl SeriesSpec {
    pub fn to_series(&self) -> (Vec<TruncatedSeries>, Vec<TruncatedSeries>) {
        let conv = |list: &[Vec<[f64; 2]>]| {
            list.iter()
                .map(|coeffs| {
                    TruncatedSeries::new(
                        coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
                    )
                })
                .collect()
        };
        (conv(&self.fs), conv(&self.hs))
    }
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }
}

/// Threshold for the truncated-identity coefficient check.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Singular values below this fraction of the largest count as kernel.
pub const KERNEL_REL_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub enum DependenceOutcome {
    /// The identity Σ|f|² = Σ|h|² fails at the (r,s) coefficient.
    IdentityFails { r: usize, s: usize, residual: f64 },
    /// A nontrivial vector v with Σ v_i·series_i = 0 through order R,
    /// indexed as [f_1,…,f_n,h_1,…,h_m].
    Dependence(Vec<Complex64>),
}

/// Verify the truncated identity Σ|f|² = Σ|h|², then return a kernel
/// vector of the per-order relation matrix as the dependence.
pub fn extract_dependence(
    fs: &[TruncatedSeries],
    hs: &[TruncatedSeries],
) -> Result<DependenceOutcome, AnalyticError> {
    let n = fs.len();
    let m = hs.len();
    let total = n + m;
    if total == 0 {
        return Err(AnalyticError::InvalidInput("no series given".into()));
    }
    let order = fs
        .iter()
        .chain(hs.iter())
        .map(TruncatedSeries::order)
        .next()
        .unwrap();
    for s in fs.iter().chain(hs.iter()) {
        if s.order() != order {
            return Err(AnalyticError::TruncationMismatch(order, s.order()));
        }
    }
    if order < total {
        return Err(AnalyticError::InvalidInput(format!(
            "truncation order {order} is below n + m = {total}"
        )));
    }

    // identity check on every mixed coefficient of t^r t̄^s
    for r in 0..=order {
        for s in 0..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for f in fs {
                acc += f.coeffs[r] * f.coeffs[s].conj();
            }
            for h in hs {
                acc -= h.coeffs[r] * h.coeffs[s].conj();
            }
            if acc.norm() > IDENTITY_TOL {
                return Ok(DependenceOutcome::IdentityFails { r, s, residual: acc.norm() });
            }
        }
    }

    // all-zero degenerate branch: any unit vector is a dependence
    let all_zero = fs
        .iter()
        .chain(hs.iter())
        .all(|s| s.coeffs.iter().all(|c| c.norm() == 0.0));
    if all_zero {
        let mut v = vec![Complex64::new(0.0, 0.0); total];
        v[0] = Complex64::new(1.0, 0.0);
        return Ok(DependenceOutcome::Dependence(v));
    }

    // columns = series, rows = coefficient orders
    let a = DMatrix::from_fn(order + 1, total, |r, c| {
        if c < n {
            fs[c].coeffs[r]
        } else {
            hs[c - n].coeffs[r]
        }
    });
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.as_ref().expect("requested v_t");
    let (mut min_idx, mut min_sv) = (0usize, f64::INFINITY);
    let mut max_sv = 0.0f64;
    for (i, sv) in svd.singular_values.iter().enumerate() {
        if *sv < min_sv {
            min_sv = *sv;
            min_idx = i;
        }
        max_sv = max_sv.max(*sv);
    }
    if min_sv > KERNEL_REL_TOL * max_sv {
        // The identity held but no kernel direction emerged; at truncation
        // level this can only be a tolerance artifact.
        return Err(AnalyticError::InvalidInput(format!(
            "identity holds but the relation matrix looks full rank (σ_min/σ_max = {:e})",
            min_sv / max_sv
        )));
    }
    // nalgebra's complex SVD stores Vᵀ: kernel vector is the conjugated row.
    let v: Vec<Complex64> = vt.row(min_idx).iter().map(|c| c.conj()).collect();
    Ok(DependenceOutcome::Dependence(v))
}

/// Apply a dependence vector to the series; the result should be the zero
/// truncation for a valid dependence.
pub fn combine(
    v: &[Complex64],
    fs: &[TruncatedSeries],
    hs: &[TruncatedSeries],
) -> TruncatedSeries {
    let order = fs.iter().chain(hs.iter()).map(TruncatedSeries::order).next().unwrap_or(0);
    let mut out = TruncatedSeries::zero(order);
    for (i, s) in fs.iter().chain(hs.iter()).enumerate() {
        for (r, c) in s.coeffs.iter().enumerate() {
            out.coeffs[r] += v[i] * c;
        }
    }
    out
}

/// Verdict of the restriction-vanishing test.
#[derive(Clone, Debug)]
pub struct RestrictionVerdict {
    pub vanishes: bool,
    /// Sample point realising the largest |Ω| (in dx∧dy units) when the
    /// form does not vanish.
    pub witness: Option<(Complex64, f64)>,
}

/// Vanishing threshold for sampled |Ω| values.
pub const RESTRICTION_TOL: f64 = 1e-10;

/// Does Ω = Σ h_jk ω_j ∧ ω̄_k vanish at the samples? Over a linearly
/// independent basis this happens iff h = 0 (the |g_j|² of independent
/// holomorphic functions are themselves independent); the eigenvalues of
/// i·h give the signature behind the witness search.
pub fn restriction_vanishing(
    h: &[Vec<Complex64>],
    samples: &[Complex64],
    s: &Surface,
) -> Result<RestrictionVerdict, AnalyticError> {
    let basis = holomorphic_basis(s);
    let evals: Vec<Box<dyn Fn(Complex64) -> Complex64>> = basis
        .into_iter()
        .map(|form| {
            Box::new(move |z: Complex64| {
                form.eval(z).map(|(a, _)| a).unwrap_or(Complex64::new(f64::NAN, 0.0))
            }) as Box<dyn Fn(Complex64) -> Complex64>
        })
        .collect();
    restriction_vanishing_with(h, &evals, samples)
}

/// Generic core over an arbitrary linearly independent function system
/// (ω_j = g_j(z)·dz).
pub fn restriction_vanishing_with(
    h: &[Vec<Complex64>],
    basis_fns: &[Box<dyn Fn(Complex64) -> Complex64>],
    samples: &[Complex64],
) -> Result<RestrictionVerdict, AnalyticError> {
    let g = h.len();
    if basis_fns.len() != g {
        return Err(AnalyticError::DimensionMismatch { expected: g, got: basis_fns.len() });
    }
    for row in h {
        if row.len() != g {
            return Err(AnalyticError::DimensionMismatch { expected: g, got: row.len() });
        }
    }
    // skew-hermitian check: h_jk = −conj(h_kj)
    for j in 0..g {
        for k in 0..g {
            if (h[j][k] + h[k][j].conj()).norm() > 1e-13 {
                return Err(AnalyticError::InvalidInput(
                    "coefficient matrix is not skew-hermitian".into(),
                ));
            }
        }
    }
    if g == 0 {
        return Ok(RestrictionVerdict { vanishes: true, witness: None });
    }
    if samples.is_empty() {
        return Err(AnalyticError::NotEnoughSamples { needed: 1, got: 0 });
    }
    // i·h is hermitian; its eigenvalues measure the signature of Ω (the
    // proof's diagonal form). Used below to scale the witness search.
    let ih = DMatrix::from_fn(g, g, |r, c| Complex64::new(0.0, 1.0) * h[r][c]);
    let eig = nalgebra::SymmetricEigen::new(ih);
    let spectral_radius = eig
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0f64, f64::max);

    let mut worst: Option<(Complex64, f64)> = None;
    for &z in samples {
        // Ω(z) = Σ h_jk g_j(z) conj(g_k(z)) · dz∧dz̄; in dx∧dy units the
        // magnitude doubles (dz∧dz̄ = −2i dx∧dy).
        let vals: Vec<Complex64> = basis_fns.iter().map(|f| f(z)).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..g {
            for k in 0..g {
                acc += h[j][k] * vals[j] * vals[k].conj();
            }
        }
        let mag = 2.0 * acc.norm();
        if worst.map_or(true, |(_, w)| mag > w) {
            worst = Some((z, mag));
        }
    }
    let Some((zmax, mag)) = worst else {
        return Err(AnalyticError::NotEnoughSamples { needed: 1, got: 0 });
    };
    if mag < RESTRICTION_TOL {
        Ok(RestrictionVerdict { vanishes: true, witness: None })
    } else {
        debug_assert!(spectral_radius > 0.0);
        Ok(RestrictionVerdict { vanishes: false, witness: Some((zmax, mag)) })
    }
}
