//! Real Hodge structures, real mixed Hodge structures, framed biextensions,
//! and the period of a real biextension.
//!
//! Everything here is exact over ℚ(i). A structure lives on a coordinate
//! space ℂⁿ; the real structure is the antilinear involution v ↦ S·conj(v).
//! The period recipe passes to the dual, splits the resulting weight-(1,2)
//! real MHS through its canonical bigrading F^p ∩ σ(F^q), and reads off the
//! difference of the real and Hodge lifts in iC^{-1,-1}_ℝ.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::HodgeError;
use crate::linalg::{Filtration, Mat, Quotient, Subspace, WeightFiltration};
use crate::qi::Qi;

/// A pure real Hodge structure presented by its Hodge filtration and
/// conjugation matrix.
#[derive(Clone, Debug)]
pub struct HodgeStructure {
    pub weight: i64,
    pub dim: usize,
    /// Antilinear involution v ↦ S·conj(v); must satisfy S·conj(S) = 1.
    pub conjugation: Mat,
    pub hodge: Filtration,
}

pub type Pieces = BTreeMap<(i64, i64), Subspace>;

impl HodgeStructure {
    pub fn new(
        weight: i64,
        conjugation: Mat,
        hodge: Filtration,
    ) -> Result<Self, HodgeError> {
        let dim = hodge.ambient_dim();
        if conjugation.rows != dim || conjugation.cols != dim {
            return Err(HodgeError::BadFiltration(
                "conjugation matrix does not match ambient dimension".into(),
            ));
        }
        if conjugation.mul(&conjugation.conj()) != Mat::identity(dim) {
            return Err(HodgeError::NotConjugationStable);
        }
        Ok(HodgeStructure { weight, dim, conjugation, hodge })
    }

    /// Bigrading E^{p,q} = F^p ∩ σ(F^q) over p+q = weight, with the
    /// direct-sum and conjugation-pairing checks of a pure structure.
    pub fn decompose(&self) -> Result<Pieces, HodgeError> {
        hodge_decompose(self)
    }

    pub fn piece(&self, p: i64, q: i64) -> Result<Subspace, HodgeError> {
        Ok(self
            .decompose()?
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.dim)))
    }
}

/// The Hodge decomposition of a pure structure given only by F and the
/// conjugation. Errors when the candidate pieces fail to sum to the ambient
/// space, i.e. the input is not pure of the stated weight.
pub fn hodge_decompose(hs: &HodgeStructure) -> Result<Pieces, HodgeError> {
    let n = hs.dim;
    let m = hs.weight;
    // Candidate p-range: outside the stored breakpoints F is full or stays
    // at its last step, so pieces can only live between the extremes.
    let lo = hs.hodge.min_index().unwrap_or(0) - 1;
    let hi = hs.hodge.max_index().unwrap_or(0) + 1;
    let lo = lo.min(m - hi);
    let hi = hi.max(m - lo);
    let mut pieces = Pieces::new();
    let mut total = 0usize;
    let mut sum = Subspace::zero(n);
    for p in lo..=hi {
        let q = m - p;
        let fp = hs.hodge.at(p);
        let fq_conj = hs.hodge.at(q).apply_antilinear(&hs.conjugation);
        let piece = fp.intersect(&fq_conj);
        if piece.dim() > 0 {
            total += piece.dim();
            sum = sum.sum(&piece);
            pieces.insert((p, q), piece);
        }
    }
    if total != n || sum.dim() != n {
        return Err(HodgeError::NotPure { found: total, ambient: n });
    }
    // σ(E^{p,q}) = E^{q,p}
    for ((p, q), s) in &pieces {
        let conj = s.apply_antilinear(&hs.conjugation);
        let paired = pieces
            .get(&(*q, *p))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(n));
        if conj != paired {
            return Err(HodgeError::NotPure { found: total, ambient: n });
        }
    }
    Ok(pieces)
}

/// dim Ext¹(E, K) in the two cases where the category of real mixed Hodge
/// structures gives an answer: 0 for k ≥ e−1, and dim iHom(E,K)^{-1,-1}_ℝ
/// for k = e−2. The remaining range is rejected.
pub fn ext1_dim(e: &HodgeStructure, k: &HodgeStructure) -> Result<usize, HodgeError> {
    let we = e.weight;
    let wk = k.weight;
    if wk >= we - 1 {
        return Ok(0);
    }
    if wk == we - 2 {
        let pe = e.decompose()?;
        let pk = k.decompose()?;
        // Hom(E,K)^{-1,-1} = ⊕ Hom(E^{p,q}, K^{p-1,q-1})
        let mut dim = 0;
        for ((p, q), s) in &pe {
            if let Some(t) = pk.get(&(p - 1, q - 1)) {
                dim += s.dim() * t.dim();
            }
        }
        return Ok(dim);
    }
    Err(HodgeError::ExtOutsideRange { e: we, k: wk })
}

/// A real mixed Hodge structure on a coordinate space.
#[derive(Clone, Debug)]
pub struct RealMhs {
    pub dim: usize,
    pub conjugation: Mat,
    pub weights: WeightFiltration,
    pub hodge: Filtration,
}

impl RealMhs {
    /// Check conjugation-stability of W and purity of the induced structure
    /// on every weight graded quotient.
    pub fn validate(&self) -> Result<(), HodgeError> {
        for (_, w) in self.weights.steps() {
            if w.apply_antilinear(&self.conjugation) != *w {
                return Err(HodgeError::NotConjugationStable);
            }
        }
        for (w, _) in self.weights.steps().to_vec() {
            self.graded(w)?;
        }
        Ok(())
    }

    /// The pure structure induced on Gr^W_w, together with the projection.
    pub fn graded(&self, w: i64) -> Result<(HodgeStructure, Quotient), HodgeError> {
        let ww = self.weights.at(w);
        let below = self.weights.at(w - 1);
        let q = Quotient::by(&below);
        let conj = q.induced_conjugation(&self.conjugation)?;
        // Induced filtration: image of F^p ∩ W_w in the quotient, restricted
        // to the image of W_w.
        let mut steps = Vec::new();
        let mut idxs: Vec<i64> = self.hodge.steps().iter().map(|(p, _)| *p).collect();
        if let Some(min) = idxs.iter().min().copied() {
            idxs.push(min - 1);
        }
        idxs.sort_unstable();
        idxs.dedup();
        for p in idxs {
            let fp = self.hodge.at(p).intersect(&ww);
            steps.push((p, q.project_subspace(&fp)));
        }
        let filt = Filtration::new(q.dim, steps)?;
        // Ambient of the graded structure is the image of W_w, which must be
        // everything in the quotient only when w is the top weight; purity is
        // checked inside the image. We re-quotient to make the image the
        // ambient space.
        let image = q.project_subspace(&ww);
        if image.dim() != q.dim {
            // Cut down to the image: express everything in image coordinates.
            let embed = Mat::from_rows(image.basis_rows()); // dim(image) × q.dim
            // Solve for coordinates of generators in the image basis.
            let embed_t = embed.transpose();
            let to_image = |s: &Subspace| -> Result<Subspace, HodgeError> {
                let gens = s
                    .basis_rows()
                    .iter()
                    .map(|v| {
                        embed_t.solve(v).ok_or_else(|| {
                            HodgeError::BadFiltration(
                                "filtration leaves the weight subspace".into(),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Subspace::span(image.dim(), &gens))
            };
            let steps2 = filt
                .steps()
                .iter()
                .map(|(p, s)| Ok((*p, to_image(&s.intersect(&image))?)))
                .collect::<Result<Vec<_>, HodgeError>>()?;
            let filt2 = Filtration::new(image.dim(), steps2)?;
            // conjugation restricted to the image, in image coordinates
            let mut cm = Mat::zero(image.dim(), image.dim());
            for (j, b) in image.basis_rows().iter().enumerate() {
                let img = conj.apply_antilinear(b);
                let coords = embed_t.solve(&img).ok_or(HodgeError::NotConjugationStable)?;
                for r in 0..image.dim() {
                    cm[(r, j)] = coords[r].clone();
                }
            }
            let hs = HodgeStructure::new(w, cm, filt2)?;
            hs.decompose()?;
            return Ok((hs, q));
        }
        let hs = HodgeStructure::new(w, conj, filt)?;
        hs.decompose()?;
        Ok((hs, q))
    }

    /// Rank of Gr^W_w.
    pub fn graded_rank(&self, w: i64) -> usize {
        self.weights.at(w).dim() - self.weights.at(w - 1).dim()
    }
}

/// A framed real biextension: a real MHS with W_{-3} = 0, W_0 = everything,
/// weight graded quotients ℝ, B, C, and explicit framing vectors.
///
/// `frame_unit` projects to the generator of Gr^W_0 ≅ ℝ; `frame_b` are lifts
/// of the images of the basis of B in Gr^W_{-1}; `frame_c` are the images of
/// the basis of C inside W_{-2} (no lift ambiguity since W_{-3} = 0).
#[derive(Clone, Debug)]
pub struct Biextension {
    pub mhs: RealMhs,
    pub graded_b: HodgeStructure,
    pub graded_c: HodgeStructure,
    pub frame_unit: Vec<Qi>,
    pub frame_b: Vec<Vec<Qi>>,
    pub frame_c: Vec<Vec<Qi>>,
}

/// Coordinates of a period in a labelled real basis of iC^{-1,-1}_ℝ.
///
/// The stored numbers are the real coefficients t_β of Σ t_β·(i·u_β); the
/// i-factor is implicit in the coordinate convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodValue {
    pub labels: Vec<String>,
    pub coords: Vec<BigRational>,
}

impl PeriodValue {
    pub fn zero(labels: Vec<String>) -> Self {
        let coords = vec![BigRational::zero(); labels.len()];
        PeriodValue { labels, coords }
    }

    /// Exact embedding of binary64 coordinates; fails on NaN/±∞.
    pub fn from_f64(labels: Vec<String>, coords: &[f64]) -> Option<Self> {
        assert_eq!(labels.len(), coords.len());
        let coords = coords
            .iter()
            .map(|&c| BigRational::from_float(c))
            .collect::<Option<Vec<_>>>()?;
        Some(PeriodValue { labels, coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &PeriodValue) -> PeriodValue {
        assert_eq!(self.labels, other.labels, "period bases differ");
        PeriodValue {
            labels: self.labels.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> PeriodValue {
        PeriodValue {
            labels: self.labels.clone(),
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(crate::qi::rat_to_f64).collect()
    }
}

impl Biextension {
    pub fn validate(&self) -> Result<(), HodgeError> {
        let n = self.mhs.dim;
        let w0 = self.mhs.weights.at(0);
        let wm1 = self.mhs.weights.at(-1);
        let wm2 = self.mhs.weights.at(-2);
        let wm3 = self.mhs.weights.at(-3);
        if w0.dim() != n || wm3.dim() != 0 {
            return Err(HodgeError::BadBiextension(
                "weights must satisfy W_0 = V and W_{-3} = 0".into(),
            ));
        }
        if n - wm1.dim() != 1 {
            return Err(HodgeError::BadBiextension("Gr^W_0 must have rank 1".into()));
        }
        if wm1.dim() - wm2.dim() != self.graded_b.dim {
            return Err(HodgeError::FramingMismatch(format!(
                "Gr^W_{{-1}} has rank {}, B has rank {}",
                wm1.dim() - wm2.dim(),
                self.graded_b.dim
            )));
        }
        if wm2.dim() != self.graded_c.dim {
            return Err(HodgeError::FramingMismatch(format!(
                "Gr^W_{{-2}} has rank {}, C has rank {}",
                wm2.dim(),
                self.graded_c.dim
            )));
        }
        self.mhs.validate()?;

        // frame_unit: real class generating Gr^W_0.
        if wm1.contains(&self.frame_unit) {
            return Err(HodgeError::FramingMismatch(
                "frame_unit lies in W_{-1}".into(),
            ));
        }
        let sig = self.mhs.conjugation.apply_antilinear(&self.frame_unit);
        let diff: Vec<Qi> = sig
            .iter()
            .zip(&self.frame_unit)
            .map(|(a, b)| a.clone() - b)
            .collect();
        if !wm1.contains(&diff) {
            return Err(HodgeError::FramingMismatch(
                "frame_unit class is not real".into(),
            ));
        }

        // frame_c: basis of W_{-2}, compatible with σ and F of C.
        if self.frame_c.len() != self.graded_c.dim {
            return Err(HodgeError::FramingMismatch("frame_c has wrong length".into()));
        }
        let span_c = Subspace::span(n, &self.frame_c);
        if span_c != wm2 {
            return Err(HodgeError::FramingMismatch(
                "frame_c does not span W_{-2}".into(),
            ));
        }
        for (alpha, c) in self.frame_c.iter().enumerate() {
            // σ_V(c_α) must equal Σ_β (S_C)_{β,α} c_β.
            let lhs = self.mhs.conjugation.apply_antilinear(c);
            let mut rhs = vec![Qi::zero(); n];
            for beta in 0..self.graded_c.dim {
                let coeff = self.graded_c.conjugation[(beta, alpha)].clone();
                for i in 0..n {
                    let term = &coeff * &self.frame_c[beta][i];
                    let cur = rhs[i].clone();
                    rhs[i] = cur + term;
                }
            }
            if lhs != rhs {
                return Err(HodgeError::FramingMismatch(format!(
                    "frame_c[{alpha}] is not compatible with the conjugations"
                )));
            }
        }
        // F-compatibility of the C framing: g_C(F^p C) = F^p V ∩ W_{-2},
        // checked at every breakpoint of either filtration.
        let mut indices: Vec<i64> = self
            .graded_c
            .hodge
            .steps()
            .iter()
            .chain(self.mhs.hodge.steps())
            .map(|(p, _)| *p)
            .collect();
        indices.sort_unstable();
        indices.dedup();
        for p in indices {
            let fpc = self.graded_c.hodge.at(p);
            let image_gens: Vec<Vec<Qi>> = fpc
                .basis_rows()
                .iter()
                .map(|coords| {
                    let mut v = vec![Qi::zero(); n];
                    for (beta, coef) in coords.iter().enumerate() {
                        for i in 0..n {
                            let term = coef * &self.frame_c[beta][i];
                            let cur = v[i].clone();
                            v[i] = cur + term;
                        }
                    }
                    v
                })
                .collect();
            let image = Subspace::span(n, &image_gens);
            let induced = self.mhs.hodge.at(p).intersect(&wm2);
            if image != induced {
                return Err(HodgeError::FramingMismatch(format!(
                    "C framing does not match the induced Hodge filtration at p = {p}"
                )));
            }
        }

        // frame_b: classes span Gr^W_{-1} and respect the conjugations
        // modulo W_{-2}.
        if self.frame_b.len() != self.graded_b.dim {
            return Err(HodgeError::FramingMismatch("frame_b has wrong length".into()));
        }
        let mut rows = wm2.basis_rows();
        rows.extend(self.frame_b.iter().cloned());
        if Subspace::span(n, &rows) != wm1 {
            return Err(HodgeError::FramingMismatch(
                "frame_b classes do not span Gr^W_{-1}".into(),
            ));
        }
        for (j, bv) in self.frame_b.iter().enumerate() {
            let lhs = self.mhs.conjugation.apply_antilinear(bv);
            let mut rhs = vec![Qi::zero(); n];
            for beta in 0..self.graded_b.dim {
                let coeff = self.graded_b.conjugation[(beta, j)].clone();
                for i in 0..n {
                    let term = &coeff * &self.frame_b[beta][i];
                    let cur = rhs[i].clone();
                    rhs[i] = cur + term;
                }
            }
            let diff: Vec<Qi> =
                lhs.iter().zip(&rhs).map(|(a, b)| a.clone() - b).collect();
            if !wm2.contains(&diff) {
                return Err(HodgeError::FramingMismatch(format!(
                    "frame_b[{j}] class is not compatible with the conjugations"
                )));
            }
        }
        Ok(())
    }

    /// Deterministic labels for the period coordinates of this biextension.
    pub fn period_labels(&self) -> Result<Vec<String>, HodgeError> {
        let basis = minus11_real_basis(&self.graded_c)?;
        Ok((0..basis.len()).map(|i| format!("ic11_{i}")).collect())
    }
}

/// A real basis {u_β} of C^{-1,-1}_ℝ, i.e. conjugation-fixed vectors whose
/// ℂ-span is the (-1,-1) piece. Deterministic in the input.
pub fn minus11_real_basis(c: &HodgeStructure) -> Result<Vec<Vec<Qi>>, HodgeError> {
    let piece = c.piece(-1, -1)?;
    let target = piece.dim();
    let mut chosen: Vec<Vec<Qi>> = Vec::new();
    let half = Qi::from_ratio(1, 2);
    let half_over_i = Qi::from_ratio(1, 2) * &Qi::i().inv();
    for v in piece.basis_rows() {
        if chosen.len() == target {
            break;
        }
        let sv = c.conjugation.apply_antilinear(&v);
        let real: Vec<Qi> = v
            .iter()
            .zip(&sv)
            .map(|(a, b)| (a.clone() + b) * &half)
            .collect();
        let imag: Vec<Qi> = v
            .iter()
            .zip(&sv)
            .map(|(a, b)| (a.clone() - b) * &half_over_i)
            .collect();
        for cand in [real, imag] {
            if chosen.len() == target {
                break;
            }
            if cand.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut rows = chosen.clone();
            rows.push(cand.clone());
            if Subspace::span(c.dim, &rows).dim() == chosen.len() + 1 {
                chosen.push(cand);
            }
        }
    }
    if chosen.len() != target {
        return Err(HodgeError::Recipe(
            "could not extract a real basis of the (-1,-1) piece".into(),
        ));
    }
    Ok(chosen)
}

/// Class of x ∈ C_ℂ in C_ℂ/(C_ℝ + F⁰C) ≅ iC^{-1,-1}_ℝ, as real coordinates
/// over the basis {i·u_β} from `minus11_real_basis`.
pub fn class_in_ic11(c: &HodgeStructure, x: &[Qi]) -> Result<Vec<BigRational>, HodgeError> {
    let n = c.dim;
    assert_eq!(x.len(), n);
    let pieces = c.decompose()?;
    // Anti-invariant part: y = (x − σx)/2 ∈ iC_ℝ.
    let sx = c.conjugation.apply_antilinear(x);
    let half = Qi::from_ratio(1, 2);
    let y: Vec<Qi> = x
        .iter()
        .zip(&sx)
        .map(|(a, b)| (a.clone() - b) * &half)
        .collect();
    // Decompose y over the bigrading and keep the (-1,-1) component.
    let mut cols: Vec<Vec<Qi>> = Vec::new();
    let mut block: Vec<(i64, i64, usize)> = Vec::new();
    for ((p, q), s) in &pieces {
        for b in s.basis_rows() {
            cols.push(b);
            block.push((*p, *q, cols.len() - 1));
        }
    }
    let mat = Mat::from_rows(cols.clone()).transpose(); // n × n, columns are piece vectors
    let coords = mat
        .solve(&y)
        .ok_or_else(|| HodgeError::Recipe("bigrading decomposition failed".into()))?;
    let mut y11 = vec![Qi::zero(); n];
    for (p, q, j) in &block {
        if *p == -1 && *q == -1 {
            for i in 0..n {
                let term = &coords[*j] * &cols[*j][i];
                let cur = y11[i].clone();
                y11[i] = cur + term;
            }
        }
    }
    // Express y11 = Σ t_β (i u_β) with t real.
    let basis = minus11_real_basis(c)?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let ibasis: Vec<Vec<Qi>> = basis
        .iter()
        .map(|u| u.iter().map(|e| Qi::i() * e).collect())
        .collect();
    let bm = Mat::from_rows(ibasis).transpose(); // n × h11
    let t = bm
        .solve(&y11)
        .ok_or_else(|| HodgeError::Recipe("projection to iC^{-1,-1} failed".into()))?;
    t.iter()
        .map(|c| {
            if c.is_real() {
                Ok(c.re.clone())
            } else {
                Err(HodgeError::Recipe("period coordinates came out non-real".into()))
            }
        })
        .collect()
}

/// The period of a real biextension, by the recipe: dualize, split the
/// weight-(1,2) real MHS via its canonical bigrading, lift the splitting to
/// a real section and an F-preserving section, and read the difference off
/// in iC^{-1,-1}_ℝ.
pub fn biextension_period(v: &Biextension) -> Result<PeriodValue, HodgeError> {
    let h = v.graded_c.dim;
    biextension_period_perturbed(v, &vec![Qi::zero(); h], &vec![Qi::zero(); h])
}

/// Same as `biextension_period`, with the real lift shifted by ρ ∈ C_ℝ and
/// the Hodge lift shifted by φ ∈ F⁰C. The output must not depend on these;
/// the quotient is well defined.
pub fn biextension_period_perturbed(
    v: &Biextension,
    rho: &[Qi],
    phi: &[Qi],
) -> Result<PeriodValue, HodgeError> {
    v.validate()?;
    let n = v.mhs.dim;
    let h = v.graded_c.dim;
    if rho.len() != h || phi.len() != h {
        return Err(HodgeError::Recipe("perturbation has wrong dimension".into()));
    }
    // Validate the perturbations: ρ real, φ ∈ F⁰C.
    let sr = v.graded_c.conjugation.apply_antilinear(rho);
    if sr != rho.to_vec() {
        return Err(HodgeError::Recipe("ρ perturbation is not real".into()));
    }
    if !phi.iter().all(Qi::is_zero) && !v.graded_c.hodge.at(0).contains(phi) {
        return Err(HodgeError::Recipe("φ perturbation is not in F⁰C".into()));
    }

    let labels = v.period_labels()?;
    if h == 0 {
        return Ok(PeriodValue::zero(labels));
    }

    let s_dual = v.mhs.conjugation.adjoint(); // σ_U(λ) = Sᴴ·conj(λ)
    let wm1 = v.mhs.weights.at(-1);

    let w0_u = wm1.annihilator(); // 1-dimensional
    debug_assert_eq!(w0_u.dim(), 1);

    // w₀: the functional killing W_{-1} with w₀(frame_unit) = 1.
    let g = w0_u.basis_rows().remove(0);
    let val: Qi = g
        .iter()
        .zip(&v.frame_unit)
        .fold(Qi::zero(), |acc, (a, b)| acc + a * b);
    if val.is_zero() {
        return Err(HodgeError::FramingMismatch(
            "frame_unit pairs to zero with the Gr^W_0 functional".into(),
        ));
    }
    let inv = val.inv();
    let w0: Vec<Qi> = g.iter().map(|x| x * &inv).collect();
    debug_assert_eq!(s_dual.apply_antilinear(&w0), w0, "w₀ must be real");

    // F^a U = ann(F^{1-a} V), evaluated directly.
    let f_u = |a: i64| -> Subspace { v.mhs.hodge.at(1 - a).annihilator() };

    // M = U / W₀U with its conjugation and Hodge filtration images.
    let q = Quotient::by(&w0_u);
    let sigma_m = q.induced_conjugation(&s_dual)?;
    let f_m = |a: i64| -> Subspace { q.project_subspace(&f_u(a)) };

    // Canonical splitting of Gr^W_2 M: Σ₂ = ⊕_{p+q=2} F^p M ∩ σ_M(F^q M).
    let mut sigma2 = Subspace::zero(q.dim);
    for (p, qq) in [(2i64, 0i64), (1, 1), (0, 2)] {
        let piece = f_m(p).intersect(&f_m(qq).apply_antilinear(&sigma_m));
        sigma2 = sigma2.sum(&piece);
    }
    if sigma2.dim() != h {
        return Err(HodgeError::GradedNotSplit(format!(
            "canonical splitting has dimension {}, expected {}",
            sigma2.dim(),
            h
        )));
    }
    if sigma2.apply_antilinear(&sigma_m) != sigma2 {
        return Err(HodgeError::GradedNotSplit(
            "canonical splitting is not conjugation stable".into(),
        ));
    }

    // Preimage of Σ₂ in U: lifts of its basis plus W₀U.
    let mut pre_gens: Vec<Vec<Qi>> =
        sigma2.basis_rows().iter().map(|b| q.lift_vec(b)).collect();
    pre_gens.push(w0.clone());
    let preimage = Subspace::span(n, &pre_gens);
    debug_assert_eq!(preimage.dim(), h + 1);

    // π₂(λ) = (λ(c_α))_α: evaluation against the framed basis of W_{-2}.
    let p2 = Mat::from_rows(v.frame_c.clone()); // h × n

    // Solve for a section with prescribed π₂-image inside a constraint space.
    let section_into = |constraint: &Subspace, target: &[Qi]| -> Option<Vec<Qi>> {
        let basis = constraint.basis_rows();
        if basis.is_empty() {
            return None;
        }
        let lt = Mat::from_rows(basis.clone()).transpose(); // n × k
        let sys = p2.mul(&lt); // h × k
        let y = sys.solve(target)?;
        Some(lt.mul_vec(&y))
    };

    // Hodge-filtration-preserving lift: piece by piece over (C^∨)^{a,b}.
    let c_pieces = v.graded_c.decompose()?;
    let mut x_cols: Vec<Vec<Qi>> = Vec::new();
    let mut uf_cols: Vec<Vec<Qi>> = Vec::new();
    for ((p, qq), _) in &c_pieces {
        // dual piece (a,b) = (−p, −q): functionals vanishing on all other pieces
        let (a, b) = (-p, -qq);
        let mut others = Subspace::zero(h);
        for ((p2_, q2_), s) in &c_pieces {
            if (p2_, q2_) != (p, qq) {
                others = others.sum(s);
            }
        }
        let dual_piece = others.annihilator();
        let constraint = f_u(a).intersect(&preimage);
        for x in dual_piece.basis_rows() {
            let u = section_into(&constraint, &x).ok_or_else(|| {
                HodgeError::GradedNotSplit(format!(
                    "no F-preserving lift over the dual ({a},{b}) piece"
                ))
            })?;
            x_cols.push(x);
            uf_cols.push(u);
        }
    }
    if x_cols.len() != h {
        return Err(HodgeError::GradedNotSplit(
            "dual bigrading does not span C^∨".into(),
        ));
    }
    // Change basis so s̃_F acts on the standard dual basis e_α.
    let xm = Mat::from_rows(x_cols).transpose(); // h × h
    let xm_inv = xm
        .inverse()
        .ok_or_else(|| HodgeError::Recipe("dual piece basis is singular".into()))?;
    let uf = Mat::from_rows(uf_cols).transpose(); // n × h
    let mut s_f = uf.mul(&xm_inv); // n × h, column α = s̃_F(e_α)

    // Real lift: any section, then average with its conjugate transport.
    let mut any_cols: Vec<Vec<Qi>> = Vec::new();
    for alpha in 0..h {
        let mut e = vec![Qi::zero(); h];
        e[alpha] = Qi::one();
        let u = section_into(&preimage, &e).ok_or_else(|| {
            HodgeError::GradedNotSplit("no section over C^∨".into())
        })?;
        any_cols.push(u);
    }
    let u_any = Mat::from_rows(any_cols).transpose(); // n × h
    let s_cv = v.graded_c.conjugation.adjoint(); // σ_{C^∨} matrix
    // T' = σ_U ∘ T ∘ σ_{C^∨} has matrix S_U·conj(T)·conj(S_{C^∨}).
    let transported = s_dual.mul(&u_any.conj()).mul(&s_cv.conj());
    let mut s_r = Mat::zero(n, h);
    let half = Qi::from_ratio(1, 2);
    for r in 0..n {
        for c in 0..h {
            s_r[(r, c)] = (u_any[(r, c)].clone() + &transported[(r, c)]) * &half;
        }
    }

    // Apply the perturbations: both lifts may move by multiples of w₀.
    for alpha in 0..h {
        for i in 0..n {
            let cur_r = s_r[(i, alpha)].clone();
            s_r[(i, alpha)] = cur_r + &(&rho[alpha] * &w0[i]);
            let cur_f = s_f[(i, alpha)].clone();
            s_f[(i, alpha)] = cur_f + &(&phi[alpha] * &w0[i]);
        }
    }

    // δ = s̃_F − s̃_ℝ lands in ℂ·w₀; extract the coefficients d_α.
    let pivot = w0
        .iter()
        .position(|x| !x.is_zero())
        .expect("w₀ is nonzero");
    let w0_pivot_inv = w0[pivot].inv();
    let mut d = Vec::with_capacity(h);
    for alpha in 0..h {
        let delta: Vec<Qi> = (0..n)
            .map(|i| s_f[(i, alpha)].clone() - &s_r[(i, alpha)])
            .collect();
        let coeff = &delta[pivot] * &w0_pivot_inv;
        // sanity: δ must be proportional to w₀
        for i in 0..n {
            if delta[i] != &coeff * &w0[i] {
                return Err(HodgeError::Recipe(
                    "lift difference escaped W₀ of the dual".into(),
                ));
            }
        }
        // Dualizing flips the lift difference relative to the extension
        // class W₀M_ℂ/(W₀M_ℝ + F⁰W₀M) computed upstairs. Read δ with the
        // orientation that matches the primal class, so that twisting by a
        // representative of x shifts the period by +[x].
        d.push(-coeff);
    }

    let coords = class_in_ic11(&v.graded_c, &d)?;
    Ok(PeriodValue { labels, coords })
}

/// The split biextension ℝ ⊕ B ⊕ C with block-diagonal data.
pub fn split_biextension(
    b: &HodgeStructure,
    c: &HodgeStructure,
) -> Result<Biextension, HodgeError> {
    if b.weight != -1 || c.weight != -2 {
        return Err(HodgeError::BadBiextension(
            "graded pieces must have weights -1 and -2".into(),
        ));
    }
    let nb = b.dim;
    let nc = c.dim;
    let n = 1 + nb + nc;
    // Coordinates: [unit | B block | C block].
    let mut conj = Mat::zero(n, n);
    conj[(0, 0)] = Qi::one();
    for r in 0..nb {
        for cc in 0..nb {
            conj[(1 + r, 1 + cc)] = b.conjugation[(r, cc)].clone();
        }
    }
    for r in 0..nc {
        for cc in 0..nc {
            conj[(1 + nb + r, 1 + nb + cc)] = c.conjugation[(r, cc)].clone();
        }
    }
    let embed_b = |v: &[Qi]| -> Vec<Qi> {
        let mut out = vec![Qi::zero(); n];
        out[1..1 + nb].clone_from_slice(v);
        out
    };
    let embed_c = |v: &[Qi]| -> Vec<Qi> {
        let mut out = vec![Qi::zero(); n];
        out[1 + nb..].clone_from_slice(v);
        out
    };
    let mut unit = vec![Qi::zero(); n];
    unit[0] = Qi::one();

    let wm2 = Subspace::span(
        n,
        &(0..nc)
            .map(|j| {
                let mut e = vec![Qi::zero(); nc];
                e[j] = Qi::one();
                embed_c(&e)
            })
            .collect::<Vec<_>>(),
    );
    let mut wm1_gens = wm2.basis_rows();
    for j in 0..nb {
        let mut e = vec![Qi::zero(); nb];
        e[j] = Qi::one();
        wm1_gens.push(embed_b(&e));
    }
    let wm1 = Subspace::span(n, &wm1_gens);
    let weights = WeightFiltration::new(
        n,
        vec![
            (-3, Subspace::zero(n)),
            (-2, wm2),
            (-1, wm1),
            (0, Subspace::full(n)),
        ],
    )?;

    // F^p(ℝ ⊕ B ⊕ C) = F^p ℝ(0) ⊕ F^p B ⊕ F^p C.
    let mut idxs: Vec<i64> = vec![0, 1];
    for (p, _) in b.hodge.steps() {
        idxs.push(*p);
    }
    for (p, _) in c.hodge.steps() {
        idxs.push(*p);
    }
    idxs.sort_unstable();
    idxs.dedup();
    if let Some(&min) = idxs.first() {
        idxs.insert(0, min - 1);
    }
    let mut steps = Vec::new();
    for p in idxs {
        let mut gens: Vec<Vec<Qi>> = Vec::new();
        if p <= 0 {
            gens.push(unit.clone());
        }
        for v in b.hodge.at(p).basis_rows() {
            gens.push(embed_b(&v));
        }
        for v in c.hodge.at(p).basis_rows() {
            gens.push(embed_c(&v));
        }
        steps.push((p, Subspace::span(n, &gens)));
    }
    let hodge = Filtration::new(n, steps)?;

    let frame_b: Vec<Vec<Qi>> = (0..nb)
        .map(|j| {
            let mut e = vec![Qi::zero(); nb];
            e[j] = Qi::one();
            embed_b(&e)
        })
        .collect();
    let frame_c: Vec<Vec<Qi>> = (0..nc)
        .map(|j| {
            let mut e = vec![Qi::zero(); nc];
            e[j] = Qi::one();
            embed_c(&e)
        })
        .collect();

    let biext = Biextension {
        mhs: RealMhs { dim: n, conjugation: conj, weights, hodge },
        graded_b: b.clone(),
        graded_c: c.clone(),
        frame_unit: unit,
        frame_b,
        frame_c,
    };
    biext.validate()?;
    Ok(biext)
}

/// Torsor action: twist a biextension by an extension class e ∈ iC^{-1,-1}_ℝ.
/// The graded data and framings are untouched; only the Hodge filtration
/// moves, by the unipotent map 1 + (frame of e)·w₀.
pub fn twist(v: &Biextension, e: &PeriodValue) -> Result<Biextension, HodgeError> {
    v.validate()?;
    let n = v.mhs.dim;
    let h = v.graded_c.dim;
    let basis = minus11_real_basis(&v.graded_c)?;
    if e.coords.len() != basis.len() {
        return Err(HodgeError::Recipe("period has wrong dimension for C".into()));
    }
    // Representative x = Σ t_β (i u_β) ∈ C_ℂ, then its image in W_{-2} ⊂ V.
    let mut x = vec![Qi::zero(); h];
    for (t, u) in e.coords.iter().zip(&basis) {
        let tq = Qi::from_real(t.clone()) * &Qi::i();
        for j in 0..h {
            let term = &tq * &u[j];
            let cur = x[j].clone();
            x[j] = cur + term;
        }
    }
    let mut xv = vec![Qi::zero(); n];
    for (beta, coef) in x.iter().enumerate() {
        for i in 0..n {
            let term = coef * &v.frame_c[beta][i];
            let cur = xv[i].clone();
            xv[i] = cur + term;
        }
    }
    // w₀ functional as in the period computation.
    let wm1 = v.mhs.weights.at(-1);
    let w0_u = wm1.annihilator();
    let g = w0_u.basis_rows().remove(0);
    let val: Qi = g
        .iter()
        .zip(&v.frame_unit)
        .fold(Qi::zero(), |acc, (a, b)| acc + a * b);
    let inv = val.inv();
    let w0: Vec<Qi> = g.iter().map(|y| y * &inv).collect();
    // T = 1 + xv·w₀ᵀ.
    let mut t = Mat::identity(n);
    for r in 0..n {
        for c in 0..n {
            let term = &xv[r] * &w0[c];
            let cur = t[(r, c)].clone();
            t[(r, c)] = cur + term;
        }
    }
    let new_hodge = v.mhs.hodge.map(&t);
    let out = Biextension {
        mhs: RealMhs {
            dim: n,
            conjugation: v.mhs.conjugation.clone(),
            weights: v.mhs.weights.clone(),
            hodge: new_hodge,
        },
        graded_b: v.graded_b.clone(),
        graded_c: v.graded_c.clone(),
        frame_unit: v.frame_unit.clone(),
        frame_b: v.frame_b.clone(),
        frame_c: v.frame_c.clone(),
    };
    out.validate()?;
    Ok(out)
}

/// Canonical model of a pure real Hodge structure with prescribed piece
/// dimensions: `dims` maps p ↦ dim E^{p,q} (q = weight − p) and must be
/// symmetric under p ↔ q. Off-diagonal pairs get swapped coordinate blocks
/// under conjugation; diagonal blocks are fixed pointwise.
pub fn standard_hodge_structure(
    weight: i64,
    dims: &BTreeMap<i64, usize>,
) -> Result<HodgeStructure, HodgeError> {
    for (&p, &d) in dims {
        let q = weight - p;
        if dims.get(&q).copied().unwrap_or(0) != d {
            return Err(HodgeError::BadFiltration(
                "piece dimensions are not conjugation symmetric".into(),
            ));
        }
    }
    let n: usize = dims.values().sum();
    // Coordinate layout: blocks in decreasing p.
    let mut order: Vec<(i64, usize)> = dims.iter().map(|(&p, &d)| (p, d)).collect();
    order.sort_by_key(|(p, _)| -p);
    let mut offset = BTreeMap::new();
    let mut acc = 0usize;
    for (p, d) in &order {
        offset.insert(*p, acc);
        acc += d;
    }
    let mut conj = Mat::zero(n, n);
    for (p, d) in &order {
        let q = weight - p;
        let op = offset[p];
        let oq = offset[&q];
        for j in 0..*d {
            // σ maps block p basis vector j to block q basis vector j
            conj[(oq + j, op + j)] = Qi::one();
        }
    }
    let mut steps = Vec::new();
    let ps: Vec<i64> = order.iter().map(|(p, _)| *p).collect();
    let lo = *ps.iter().min().unwrap_or(&0);
    let hi = *ps.iter().max().unwrap_or(&0);
    for p in lo..=hi + 1 {
        let mut gens = Vec::new();
        for (pp, d) in &order {
            if *pp >= p {
                let o = offset[pp];
                for j in 0..*d {
                    let mut e = vec![Qi::zero(); n];
                    e[o + j] = Qi::one();
                    gens.push(e);
                }
            }
        }
        steps.push((p, Subspace::span(n, &gens)));
    }
    let hodge = Filtration::new(n, steps)?;
    HodgeStructure::new(weight, conj, hodge)
}

/// Transport a Hodge structure through an invertible coordinate change T:
/// new basis data with σ' = T·σ·T⁻¹ (antilinearly) and F' = T(F).
pub fn conjugate_structure(
    hs: &HodgeStructure,
    t: &Mat,
) -> Result<HodgeStructure, HodgeError> {
    let ti = t
        .inverse()
        .ok_or_else(|| HodgeError::BadFiltration("singular change of basis".into()))?;
    // σ'(v) = T σ(T⁻¹ v) = T·S·conj(T⁻¹)·conj(v)
    let s2 = t.mul(&hs.conjugation).mul(&ti.conj());
    let hodge = hs.hodge.map(t);
    HodgeStructure::new(hs.weight, s2, hodge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tate(weight_half: i64) -> HodgeStructure {
        // ℝ(k) has weight −2k and type (−k,−k); here parametrised by −k.
        let p = weight_half;
        let mut dims = BTreeMap::new();
        dims.insert(p, 1usize);
        standard_hodge_structure(2 * p, &dims).unwrap()
    }

    fn elliptic_h1() -> HodgeStructure {
        // weight −1, pieces (0,−1) and (−1,0), each a line
        let mut dims = BTreeMap::new();
        dims.insert(0i64, 1usize);
        dims.insert(-1i64, 1usize);
        standard_hodge_structure(-1, &dims).unwrap()
    }

    #[test]
    fn decompose_tate_line() {
        // weight −2 with F⁻¹ = line, F⁰ = 0, conjugation-stable line
        let hs = tate(-1);
        let pieces = hs.decompose().unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[&(-1, -1)].dim(), 1);
    }

    #[test]
    fn decompose_elliptic_shape() {
        let hs = elliptic_h1();
        let pieces = hs.decompose().unwrap();
        assert_eq!(pieces[&(0, -1)].dim(), 1);
        assert_eq!(pieces[&(-1, 0)].dim(), 1);
    }

    #[test]
    fn decompose_roundtrip_after_basis_change() {
        // rank-4 weight 0 structure from a chosen bigrading, scrambled
        let mut dims = BTreeMap::new();
        dims.insert(1i64, 1usize);
        dims.insert(0i64, 2usize);
        dims.insert(-1i64, 1usize);
        let hs = standard_hodge_structure(0, &dims).unwrap();
        let t = Mat::from_rows(vec![
            vec![Qi::from_int(1), Qi::from_int(2), Qi::i(), Qi::zero()],
            vec![Qi::zero(), Qi::from_int(1), Qi::from_int(3), Qi::from_int(1)],
            vec![Qi::from_int(1), Qi::zero(), Qi::from_int(1), Qi::i()],
            vec![Qi::zero(), Qi::zero(), Qi::zero(), Qi::from_int(2)],
        ]);
        let moved = conjugate_structure(&hs, &t).unwrap();
        let pieces = moved.decompose().unwrap();
        let orig = hs.decompose().unwrap();
        assert_eq!(pieces.len(), orig.len());
        for ((p, q), s) in &orig {
            let expect = s.apply(&t);
            assert_eq!(pieces[&(*p, *q)], expect, "piece ({p},{q}) mismatch");
        }
    }

    #[test]
    fn pieces_reassemble_the_hodge_filtration() {
        // F^p = ⊕_{p' ≥ p} E^{p',q'} as subspaces, rank for rank
        let mut dims = BTreeMap::new();
        dims.insert(1i64, 1usize);
        dims.insert(0i64, 2usize);
        dims.insert(-1i64, 1usize);
        let hs = standard_hodge_structure(0, &dims).unwrap();
        let t = Mat::from_rows(vec![
            vec![Qi::from_int(2), Qi::i(), Qi::zero(), Qi::from_int(1)],
            vec![Qi::zero(), Qi::from_int(1), Qi::i(), Qi::zero()],
            vec![Qi::from_int(1), Qi::zero(), Qi::from_int(1), Qi::zero()],
            vec![Qi::zero(), Qi::from_int(1), Qi::zero(), Qi::from_int(3)],
        ]);
        let moved = conjugate_structure(&hs, &t).unwrap();
        let pieces = moved.decompose().unwrap();
        for p in -2..=2 {
            let mut rebuilt = Subspace::zero(moved.dim);
            for ((pp, _), s) in &pieces {
                if *pp >= p {
                    rebuilt = rebuilt.sum(s);
                }
            }
            assert_eq!(rebuilt, moved.hodge.at(p), "F^{p} reassembly mismatch");
        }
    }

    #[test]
    fn decompose_rejects_impure() {
        // F of the wrong shape for the stated weight: weight 0 but F jumps at -1 only
        let line = Subspace::span(2, &[vec![Qi::one(), Qi::i()]]);
        let filt = Filtration::new(
            2,
            vec![(1, line), (2, Subspace::zero(2))],
        )
        .unwrap();
        let hs = HodgeStructure::new(0, Mat::identity(2), filt).unwrap();
        assert!(matches!(hs.decompose(), Err(HodgeError::NotPure { .. })));
    }

    #[test]
    fn ext1_dims_match_the_three_cases() {
        let r0 = tate(0); // ℝ(0), weight 0
        let b = elliptic_h1(); // weight −1 rank 2
        assert_eq!(ext1_dim(&r0, &b).unwrap(), 0);
        let r1 = tate(-1); // ℝ(1), weight −2, type (−1,−1)
        assert_eq!(ext1_dim(&r0, &r1).unwrap(), 1);
        // E rank 2 weight −1, K rank 2 weight −3 of types (−1,−2), (−2,−1)
        let mut dims = BTreeMap::new();
        dims.insert(-1i64, 1usize);
        dims.insert(-2i64, 1usize);
        let k = standard_hodge_structure(-3, &dims).unwrap();
        // Hom(E,K)^{-1,-1} = Hom(E^{0,-1},K^{-1,-2}) ⊕ Hom(E^{-1,0},K^{-2,-1}): dim 2
        assert_eq!(ext1_dim(&b, &k).unwrap(), 2);
        // outside the proposition's range
        let mut dims = BTreeMap::new();
        dims.insert(-2i64, 1usize);
        let deep = standard_hodge_structure(-4, &dims).unwrap();
        assert!(matches!(
            ext1_dim(&r0, &deep),
            Err(HodgeError::ExtOutsideRange { .. })
        ));
    }

    #[test]
    fn split_biextension_has_zero_period() {
        let b = elliptic_h1();
        let c = tate(-1);
        let v0 = split_biextension(&b, &c).unwrap();
        let p = biextension_period(&v0).unwrap();
        assert!(p.is_zero(), "split biextension must have period 0, got {:?}", p);
    }

    #[test]
    fn twist_shifts_period_exactly() {
        let b = elliptic_h1();
        let c = tate(-1);
        let v0 = split_biextension(&b, &c).unwrap();
        let labels = v0.period_labels().unwrap();
        let t = PeriodValue { labels: labels.clone(), coords: vec![rational(7, 3)] };
        let v1 = twist(&v0, &t).unwrap();
        let p1 = biextension_period(&v1).unwrap();
        assert_eq!(p1, t);
        // group inverse
        let v2 = twist(&v1, &t.neg()).unwrap();
        assert!(biextension_period(&v2).unwrap().is_zero());
        // additivity
        let a = PeriodValue { labels: labels.clone(), coords: vec![rational(1, 5)] };
        let bb = PeriodValue { labels, coords: vec![rational(-4, 9)] };
        let w = twist(&twist(&v0, &a).unwrap(), &bb).unwrap();
        assert_eq!(biextension_period(&w).unwrap(), a.add(&bb));
    }

    #[test]
    fn period_is_independent_of_lift_choices() {
        let b = elliptic_h1();
        let c = tate(-1);
        let v0 = split_biextension(&b, &c).unwrap();
        let labels = v0.period_labels().unwrap();
        let t = PeriodValue { labels, coords: vec![rational(5, 2)] };
        let v = twist(&v0, &t).unwrap();
        let base = biextension_period(&v).unwrap();
        // ρ ∈ C_ℝ: the Tate line is spanned by a conjugation-fixed vector.
        let rho = vec![Qi::from_ratio(3, 4)];
        // F⁰C = 0 for ℝ(1), so φ must be zero there.
        let phi = vec![Qi::zero()];
        let perturbed = biextension_period_perturbed(&v, &rho, &phi).unwrap();
        assert_eq!(base, perturbed);
    }

    #[test]
    fn unit_to_b_twists_do_not_move_the_period() {
        // Extensions of ℝ by a weight −1 structure split over the reals, so
        // shifting the Hodge lift of the unit in the B direction (by any
        // complex vector) must leave the period untouched, also after a
        // further C-twist. This drives the dual splitting across blocks.
        let b = elliptic_h1();
        let c = tate(-1);
        let v0 = split_biextension(&b, &c).unwrap();
        let n = v0.mhs.dim;
        let twist_b = |v: &Biextension, x: [Qi; 2]| -> Biextension {
            // T = 1 + (x embedded in the B block)·w₀ᵀ in block coordinates
            let mut t = Mat::identity(n);
            for (j, coef) in x.iter().enumerate() {
                t[(1 + j, 0)] = coef.clone();
            }
            let out = Biextension {
                mhs: RealMhs {
                    dim: n,
                    conjugation: v.mhs.conjugation.clone(),
                    weights: v.mhs.weights.clone(),
                    hodge: v.mhs.hodge.map(&t),
                },
                graded_b: v.graded_b.clone(),
                graded_c: v.graded_c.clone(),
                frame_unit: v.frame_unit.clone(),
                frame_b: v.frame_b.clone(),
                frame_c: v.frame_c.clone(),
            };
            out.validate().expect("B-twist keeps a valid biextension");
            out
        };
        // real B-shift
        let vb = twist_b(&v0, [Qi::from_ratio(2, 3), Qi::from_int(-1)]);
        assert!(biextension_period(&vb).unwrap().is_zero());
        // complex B-shift
        let vb = twist_b(&v0, [Qi::i() * &Qi::from_ratio(5, 7), Qi::from_int(2) + &Qi::i()]);
        assert!(biextension_period(&vb).unwrap().is_zero());
        // B-shift then C-twist: period is exactly the C class
        let labels = v0.period_labels().unwrap();
        let t = PeriodValue { labels, coords: vec![rational(9, 4)] };
        let vc = twist(&vb, &t).unwrap();
        assert_eq!(biextension_period(&vc).unwrap(), t);
    }

    #[test]
    fn period_with_larger_graded_pieces() {
        // C of rank 3: pieces (0,−2), (−1,−1), (−2,0) each of dimension 1.
        let mut dims = BTreeMap::new();
        dims.insert(0i64, 1usize);
        dims.insert(-1i64, 1usize);
        dims.insert(-2i64, 1usize);
        let c = standard_hodge_structure(-2, &dims).unwrap();
        let b = elliptic_h1();
        let v0 = split_biextension(&b, &c).unwrap();
        assert!(biextension_period(&v0).unwrap().is_zero());
        let labels = v0.period_labels().unwrap();
        assert_eq!(labels.len(), 1); // only the (−1,−1) line contributes
        let t = PeriodValue { labels, coords: vec![rational(-11, 6)] };
        let v = twist(&v0, &t).unwrap();
        assert_eq!(biextension_period(&v).unwrap(), t);
        // perturbation by an F⁰C element (the (0,−2) block) must not matter
        let pieces = c.decompose().unwrap();
        let f0c = pieces[&(0, -2)].basis_rows().remove(0);
        let rho_real: Vec<Qi> = {
            // a real vector: u + σu for u the (0,−2) generator
            let su = c.conjugation.apply_antilinear(&f0c);
            f0c.iter().zip(&su).map(|(a, b)| a.clone() + b).collect()
        };
        let p = biextension_period_perturbed(&v, &rho_real, &f0c).unwrap();
        assert_eq!(p, biextension_period(&v).unwrap());
    }
}
