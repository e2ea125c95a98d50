//! Exact dense linear algebra over ℚ(i): row reduction, kernels, subspace
//! lattice operations, and filtrations of a coordinate space.
//!
//! Dimensions in this crate are tiny (a biextension fiber rarely exceeds
//! ten dimensions), so everything is a plain dense `Vec<Vec<Qi>>` reduced by
//! fraction-free-naive Gauss elimination. Canonical forms are RREF so that
//! subspace equality is row-by-row equality.

use crate::error::HodgeError;
use crate::qi::Qi;

/// Dense matrix over ℚ(i), row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Qi>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Qi::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for k in 0..n {
            m[(k, k)] = Qi::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Qi>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, r: usize) -> &[Qi] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Qi> {
        self.row(r).to_vec()
    }

    pub fn all_rows(&self) -> Vec<Vec<Qi>> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> Mat {
        let mut m = self.clone();
        for x in &mut m.data {
            *x = x.conj();
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        self.conj().transpose()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a * &other[(k, c)];
                    let cur = out[(r, c)].clone();
                    out[(r, c)] = cur + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Qi]) -> Vec<Qi> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Qi::zero();
                for c in 0..self.cols {
                    acc += &self[(r, c)] * &v[c];
                }
                acc
            })
            .collect()
    }

    /// Apply as an antilinear map `v ↦ M·conj(v)`.
    pub fn apply_antilinear(&self, v: &[Qi]) -> Vec<Qi> {
        let vc: Vec<Qi> = v.iter().map(Qi::conj).collect();
        self.mul_vec(&vc)
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead_row = 0;
        for col in 0..self.cols {
            if lead_row >= self.rows {
                break;
            }
            let pivot = (lead_row..self.rows).find(|&r| !self[(r, col)].is_zero());
            let Some(pr) = pivot else { continue };
            self.swap_rows(lead_row, pr);
            let inv = self[(lead_row, col)].inv();
            for c in col..self.cols {
                let x = self[(lead_row, c)].clone();
                self[(lead_row, c)] = x * &inv;
            }
            for r in 0..self.rows {
                if r != lead_row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for c in col..self.cols {
                        let sub = &factor * &self[(lead_row, c)];
                        let cur = self[(r, c)].clone();
                        self[(r, c)] = cur - &sub;
                    }
                }
            }
            pivots.push(col);
            lead_row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Qi>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Qi::zero(); self.cols];
            v[f] = Qi::one();
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -m[(i, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Particular solution of `M x = b`, if one exists.
    pub fn solve(&self, b: &[Qi]) -> Option<Vec<Qi>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Qi::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Qi::one();
        }
        let pivots = aug.rref();
        if pivots.len() != n {
            return None;
        }
        let mut inv = Mat::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = aug[(r, n + c)].clone();
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Qi;
    fn index(&self, (r, c): (usize, usize)) -> &Qi {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Qi {
        &mut self.data[r * self.cols + c]
    }
}

/// A linear subspace of ℂⁿ in canonical (RREF basis) form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Mat, // RREF, rows are basis vectors
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::zero(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::identity(ambient) }
    }

    pub fn span(ambient: usize, generators: &[Vec<Qi>]) -> Self {
        for g in generators {
            assert_eq!(g.len(), ambient, "generator has wrong length");
        }
        let mut m = Mat::from_rows(generators.to_vec());
        if m.rows == 0 {
            return Subspace::zero(ambient);
        }
        let pivots = m.rref();
        let rank = pivots.len();
        let rows = (0..rank).map(|r| m.row_vec(r)).collect();
        Subspace { ambient, basis: Mat::from_rows(rows) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis_rows(&self) -> Vec<Vec<Qi>> {
        self.basis.all_rows()
    }

    pub fn contains(&self, v: &[Qi]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Stack and compare rank.
        let mut rows = self.basis.all_rows();
        rows.push(v.to_vec());
        Subspace::span(self.ambient, &rows).dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis.all_rows();
        rows.extend(other.basis_rows());
        Subspace::span(self.ambient, &rows)
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let n = self.ambient;
        let d1 = self.dim();
        let d2 = other.dim();
        if d1 == 0 || d2 == 0 {
            return Subspace::zero(n);
        }
        let mut block = Mat::zero(d1 + d2, 2 * n);
        for r in 0..d1 {
            for c in 0..n {
                block[(r, c)] = self.basis[(r, c)].clone();
                block[(r, n + c)] = self.basis[(r, c)].clone();
            }
        }
        for r in 0..d2 {
            for c in 0..n {
                block[(d1 + r, c)] = other.basis[(r, c)].clone();
            }
        }
        block.rref();
        // Rows whose left half is zero carry an intersection basis on the right.
        let mut gens = Vec::new();
        for r in 0..block.rows {
            let left_zero = (0..n).all(|c| block[(r, c)].is_zero());
            let right = (n..2 * n).map(|c| block[(r, c)].clone()).collect::<Vec<_>>();
            if left_zero && right.iter().any(|x| !x.is_zero()) {
                gens.push(right);
            }
        }
        Subspace::span(n, &gens)
    }

    /// Image under the linear map with matrix `m` (columns act on coordinates).
    pub fn apply(&self, m: &Mat) -> Subspace {
        assert_eq!(m.cols, self.ambient);
        let gens: Vec<Vec<Qi>> = self.basis.all_rows().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.rows, &gens)
    }

    /// Image under the antilinear map `v ↦ S·conj(v)`.
    pub fn apply_antilinear(&self, s: &Mat) -> Subspace {
        assert_eq!(s.cols, self.ambient);
        let gens: Vec<Vec<Qi>> =
            self.basis.all_rows().iter().map(|v| s.apply_antilinear(v)).collect();
        Subspace::span(s.rows, &gens)
    }

    /// Annihilator in the dual coordinate space: all λ with λ·v = 0 on the subspace.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        let gens = self.basis.kernel();
        Subspace::span(self.ambient, &gens)
    }
}

/// The canonical projection ℂⁿ → ℂⁿ⁻ᵈ with kernel a given subspace.
///
/// Coordinates on the quotient are the non-pivot coordinates of the RREF
/// basis of the kernel, which makes the construction deterministic.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ambient: usize,
    pub dim: usize,
    kernel: Subspace,
    proj: Mat, // dim × ambient
    lift: Mat, // ambient × dim, a right inverse of proj
}

impl Quotient {
    pub fn by(kernel: &Subspace) -> Self {
        let n = kernel.ambient_dim();
        let d = kernel.dim();
        let q = n - d;
        // Pivot columns of the kernel basis get eliminated; free columns survive.
        let mut kb = kernel.basis.clone();
        let pivots = kb.rref();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        // proj(v) = free coordinates of (v reduced modulo kernel rows).
        let mut proj = Mat::zero(q, n);
        for (i, &f) in free.iter().enumerate() {
            proj[(i, f)] = Qi::one();
            // Subtract the kernel row contribution entering through pivot coords.
            for (krow, &p) in pivots.iter().enumerate() {
                // reducing v by kernel: v - v_p * row_k zeroes coordinate p and
                // adjusts free coords by -v_p * kb[krow][f]
                let coeff = -kb[(krow, f)].clone();
                proj[(i, p)] = coeff;
            }
        }
        let mut lift = Mat::zero(n, q);
        for (i, &f) in free.iter().enumerate() {
            lift[(f, i)] = Qi::one();
        }
        Quotient { ambient: n, dim: q, kernel: kernel.clone(), proj, lift }
    }

    pub fn project_vec(&self, v: &[Qi]) -> Vec<Qi> {
        self.proj.mul_vec(v)
    }

    pub fn project_subspace(&self, s: &Subspace) -> Subspace {
        s.apply(&self.proj)
    }

    /// Any preimage of a quotient vector.
    pub fn lift_vec(&self, w: &[Qi]) -> Vec<Qi> {
        self.lift.mul_vec(w)
    }

    /// The conjugation induced on the quotient by `v ↦ S conj(v)` upstairs.
    /// Requires the kernel to be conjugation stable.
    pub fn induced_conjugation(&self, s: &Mat) -> Result<Mat, HodgeError> {
        if self.kernel.apply_antilinear(s) != self.kernel {
            return Err(HodgeError::NotConjugationStable);
        }
        // Column j = proj(S · conj(lift(e_j))); lift(e_j) has real entries 0/1.
        let mut out = Mat::zero(self.dim, self.dim);
        for j in 0..self.dim {
            let mut e = vec![Qi::zero(); self.dim];
            e[j] = Qi::one();
            let up = self.lift_vec(&e);
            let img = self.project_vec(&s.apply_antilinear(&up));
            for r in 0..self.dim {
                out[(r, j)] = img[r].clone();
            }
        }
        Ok(out)
    }

    pub fn kernel_subspace(&self) -> &Subspace {
        &self.kernel
    }
}

/// A decreasing filtration of ℂⁿ by subspaces, stored at its breakpoints.
///
/// `at(p)` is the subspace attached to the largest stored index ≤ p, the
/// full space below every stored index, and the last stored value above.
/// A filtration that terminates must therefore store its zero step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    ambient: usize,
    steps: Vec<(i64, Subspace)>, // ascending indices, decreasing subspaces
}

impl Filtration {
    pub fn new(ambient: usize, mut steps: Vec<(i64, Subspace)>) -> Result<Self, HodgeError> {
        steps.sort_by_key(|(p, _)| *p);
        for w in steps.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(HodgeError::BadFiltration("duplicate filtration index".into()));
            }
            if !w[0].1.contains_subspace(&w[1].1) {
                return Err(HodgeError::BadFiltration(format!(
                    "filtration not decreasing between indices {} and {}",
                    w[0].0, w[1].0
                )));
            }
        }
        for (_, s) in &steps {
            if s.ambient_dim() != ambient {
                return Err(HodgeError::BadFiltration("ambient dimension mismatch".into()));
            }
        }
        Ok(Filtration { ambient, steps })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn at(&self, p: i64) -> Subspace {
        let mut cur = Subspace::full(self.ambient);
        for (idx, s) in &self.steps {
            if *idx <= p {
                cur = s.clone();
            } else {
                break;
            }
        }
        cur
    }

    pub fn min_index(&self) -> Option<i64> {
        self.steps.first().map(|(p, _)| *p)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.steps.last().map(|(p, _)| *p)
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    /// Push the whole filtration through a linear map.
    pub fn map(&self, m: &Mat) -> Filtration {
        let steps =
            self.steps.iter().map(|(p, s)| (*p, s.apply(m))).collect::<Vec<_>>();
        Filtration { ambient: m.rows, steps }
    }
}

/// An increasing filtration, stored at breakpoints; `at(k)` is the subspace
/// attached to the largest stored index ≤ k, zero below all stored indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    ambient: usize,
    steps: Vec<(i64, Subspace)>, // ascending indices, increasing subspaces
}

impl WeightFiltration {
    pub fn new(ambient: usize, mut steps: Vec<(i64, Subspace)>) -> Result<Self, HodgeError> {
        steps.sort_by_key(|(p, _)| *p);
        for w in steps.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(HodgeError::BadFiltration("duplicate weight index".into()));
            }
            if !w[1].1.contains_subspace(&w[0].1) {
                return Err(HodgeError::BadFiltration(format!(
                    "weight filtration not increasing between {} and {}",
                    w[0].0, w[1].0
                )));
            }
        }
        for (_, s) in &steps {
            if s.ambient_dim() != ambient {
                return Err(HodgeError::BadFiltration("ambient dimension mismatch".into()));
            }
        }
        Ok(WeightFiltration { ambient, steps })
    }

    pub fn at(&self, k: i64) -> Subspace {
        let mut cur = Subspace::zero(self.ambient);
        for (idx, s) in &self.steps {
            if *idx <= k {
                cur = s.clone();
            } else {
                break;
            }
        }
        cur
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    pub fn min_index(&self) -> Option<i64> {
        self.steps.first().map(|(p, _)| *p)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.steps.last().map(|(p, _)| *p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[i64]) -> Vec<Qi> {
        entries.iter().map(|&e| Qi::from_int(e)).collect()
    }

    #[test]
    fn rref_rank_kernel() {
        let m = Mat::from_rows(vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        for row in m.all_rows() {
            let dot: Qi = row
                .iter()
                .zip(&ker[0])
                .fold(Qi::zero(), |acc, (a, b)| acc + a * b);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_rows(vec![v(&[2, 1]), v(&[1, 1])]);
        let x = m.solve(&v(&[3, 2])).unwrap();
        assert_eq!(m.mul_vec(&x), v(&[3, 2]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
    }

    #[test]
    fn subspace_lattice() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let cap = a.intersect(&b);
        assert_eq!(cap.dim(), 1);
        assert!(cap.contains(&v(&[0, 5, 0])));
        let sum = a.sum(&b);
        assert_eq!(sum.dim(), 3);
        // dim(a) + dim(b) = dim(a+b) + dim(a∩b)
        assert_eq!(a.dim() + b.dim(), sum.dim() + cap.dim());
    }

    #[test]
    fn annihilator_dims() {
        let a = Subspace::span(4, &[v(&[1, 1, 0, 0]), v(&[0, 0, 1, -1])]);
        let ann = a.annihilator();
        assert_eq!(ann.dim(), 2);
        for f in ann.basis_rows() {
            for g in a.basis_rows() {
                let dot: Qi =
                    f.iter().zip(&g).fold(Qi::zero(), |acc, (x, y)| acc + x * y);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn quotient_projection_roundtrip() {
        let k = Subspace::span(3, &[v(&[1, 2, 0])]);
        let q = Quotient::by(&k);
        assert_eq!(q.dim, 2);
        // kernel maps to zero
        assert!(q.project_vec(&v(&[2, 4, 0])).iter().all(|x| x.is_zero()));
        // lift is a section
        for j in 0..2 {
            let mut e = vec![Qi::zero(); 2];
            e[j] = Qi::one();
            assert_eq!(q.project_vec(&q.lift_vec(&e)), e);
        }
    }

    #[test]
    fn filtration_lookup() {
        let full = Subspace::full(2);
        let line = Subspace::span(2, &[v(&[1, 0])]);
        let zero = Subspace::zero(2);
        let f = Filtration::new(2, vec![(-1, full), (0, line), (1, zero)]).unwrap();
        assert_eq!(f.at(-5).dim(), 2);
        assert_eq!(f.at(-1).dim(), 2);
        assert_eq!(f.at(0).dim(), 1);
        assert_eq!(f.at(3).dim(), 0);
    }
}
