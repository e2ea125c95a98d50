//! Named access to the backend forms and the wire formats for paths and
//! iterated-integral expressions.
//!
//! Registry keys: `dz`, `dzbar`, `zeta:k` for the k-th third-kind
//! differential (1-based), `xi:a<i>` and `phi:a<i>` for the Green forms of
//! the i-th K-basis element (0-based), with x₀ the first listed puncture.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chen::{IteratedIntegralExpr, Path};
use crate::error::AnalyticError;
use crate::greens::{solve_green, xi_phi_from_f};
use crate::surface::{k_space_basis, third_kind_basis, OneForm, Surface};

/// Resolve a registry key to a concrete form on the surface.
pub fn lookup_form(s: &Surface, key: &str) -> Result<OneForm, AnalyticError> {
    if key == "dz" {
        return Ok(OneForm::constant_dz(s, Complex64::new(1.0, 0.0)));
    }
    if key == "dzbar" {
        return Ok(OneForm::constant_dzbar(s, Complex64::new(1.0, 0.0)));
    }
    if let Some(idx) = key.strip_prefix("zeta:") {
        let k: usize = idx
            .parse()
            .map_err(|_| AnalyticError::InvalidInput(format!("bad zeta index in {key:?}")))?;
        if k == 0 {
            return Err(AnalyticError::InvalidInput(
                "zeta indices are 1-based (x₀ has no differential)".into(),
            ));
        }
        let basis = third_kind_basis(s)?;
        return basis
            .get(k - 1)
            .map(|tk| tk.form.clone())
            .ok_or_else(|| {
                AnalyticError::InvalidInput(format!(
                    "zeta:{k} out of range; the surface has {} pole pairs",
                    basis.len()
                ))
            });
    }
    let green_key = key
        .strip_prefix("xi:a")
        .map(|i| (true, i))
        .or_else(|| key.strip_prefix("phi:a").map(|i| (false, i)));
    if let Some((want_xi, idx)) = green_key {
        let a: usize = idx
            .parse()
            .map_err(|_| AnalyticError::InvalidInput(format!("bad K index in {key:?}")))?;
        let kb = k_space_basis(s);
        let el = kb.elements.get(a).ok_or_else(|| {
            AnalyticError::InvalidInput(format!(
                "K index {a} out of range; the surface has {} classes",
                kb.elements.len()
            ))
        })?;
        let x0 = s
            .base_puncture()
            .and_then(|p| p.finite())
            .ok_or_else(|| AnalyticError::InvalidSurface("Green forms need a finite x₀".into()))?;
        // any normalisation point works: ξ and φ only see derivatives of f
        let p = crate::surface::clear_base_point(s)?;
        let g = solve_green(s, el, x0, p)?;
        let (xi, phi) = xi_phi_from_f(&g);
        return Ok(if want_xi { xi } else { phi });
    }
    Err(AnalyticError::InvalidInput(format!("unknown form key {key:?}")))
}

/// path.json: straight-line vertices in the chart (torus: lifts).
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PathSpec {
    pub vertices: Vec<[f64; 2]>,
}

impl PathSpec {
    pub fn to_path(&self, s: &Surface) -> Result<Path, AnalyticError> {
        let vertices = self
            .vertices
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Path::new(s.clone(), vertices)
    }
}

/// One length-1 term of expr.json.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Length1Spec {
    pub coef: [f64; 2],
    pub form: String,
}

/// One length-2 term of expr.json.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Length2Spec {
    pub coef: [f64; 2],
    pub left: String,
    pub right: String,
}

/// expr.json: constant + Σ coef·∫form + Σ coef·∫left right.
#[derive(Serialize, Deserialize, Debug, Clone, Default)]
pub struct ExprSpec {
    #[serde(default)]
    pub constant: Option<[f64; 2]>,
    #[serde(default)]
    pub length1: Vec<Length1Spec>,
    #[serde(default)]
    pub length2: Vec<Length2Spec>,
}

impl ExprSpec {
    pub fn to_expr(&self, s: &Surface) -> Result<IteratedIntegralExpr, AnalyticError> {
        let mut expr = IteratedIntegralExpr::new();
        if let Some([re, im]) = self.constant {
            expr.constant = Complex64::new(re, im);
        }
        for term in &self.length1 {
            expr.length1.push((
                Complex64::new(term.coef[0], term.coef[1]),
                lookup_form(s, &term.form)?,
            ));
        }
        for term in &self.length2 {
            expr.length2.push((
                Complex64::new(term.coef[0], term.coef[1]),
                lookup_form(s, &term.left)?,
                lookup_form(s, &term.right)?,
            ));
        }
        Ok(expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chen::iterated_integral;
    use crate::surface::Puncture;

    fn torus() -> Surface {
        Surface::torus(
            Complex64::new(0.0, 1.0),
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn lookup_named_forms() {
        let s = torus();
        assert!(lookup_form(&s, "dz").is_ok());
        assert!(lookup_form(&s, "dzbar").is_ok());
        assert!(lookup_form(&s, "zeta:1").is_ok());
        assert!(lookup_form(&s, "xi:a0").is_ok());
        assert!(lookup_form(&s, "phi:a0").is_ok());
        assert!(lookup_form(&s, "zeta:2").is_err());
        assert!(lookup_form(&s, "zeta:0").is_err());
        assert!(lookup_form(&s, "nope").is_err());
        let sphere = Surface::sphere(vec![
            Puncture::Infinity,
            Puncture::Finite(Complex64::new(0.0, 0.0)),
        ])
        .unwrap();
        assert!(lookup_form(&sphere, "zeta:1").is_ok());
        assert!(lookup_form(&sphere, "xi:a0").is_err(), "sphere has no K classes");
    }

    #[test]
    fn expr_roundtrip_and_evaluation() {
        let s = torus();
        let text = r#"{
            "constant": [0.25, 0.0],
            "length1": [{"coef": [1.0, 0.0], "form": "dz"}],
            "length2": [{"coef": [1.0, 0.0], "left": "dz", "right": "dz"}]
        }"#;
        let spec: ExprSpec = serde_json::from_str(text).unwrap();
        let expr = spec.to_expr(&s).unwrap();
        let path = PathSpec { vertices: vec![[0.1, 0.1], [0.35, 0.22]] }.to_path(&s).unwrap();
        let v = iterated_integral(&expr, &path).unwrap();
        // c + Δz + Δz²/2 for straight paths
        let dz = Complex64::new(0.25, 0.12);
        let expect = Complex64::new(0.25, 0.0) + dz + dz * dz * 0.5;
        assert!((v - expect).norm() < 1e-10);
    }
}
