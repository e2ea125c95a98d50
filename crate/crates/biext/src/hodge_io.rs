//! JSON wire format for framed biextensions: ambient dimension, basis
//! labels, conjugation matrices with complex entries as [re, im] pairs,
//! filtrations as lists of basis-coordinate generator vectors, and the
//! framing vectors.
//!
//! Binary64 entries embed exactly into ℚ(i) on input; output rounds to the
//! nearest binary64.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::HodgeError;
use crate::hodge::{Biextension, HodgeStructure, RealMhs};
use crate::linalg::{Filtration, Mat, Subspace, WeightFiltration};
use crate::qi::Qi;

type CEntry = [f64; 2];
type CVector = Vec<CEntry>;
type CMatrix = Vec<CVector>;

fn to_qi(e: &CEntry) -> Result<Qi, HodgeError> {
    Qi::from_f64(e[0], e[1])
        .ok_or_else(|| HodgeError::BadFiltration("non-finite entry".into()))
}

fn to_qi_vec(v: &CVector) -> Result<Vec<Qi>, HodgeError> {
    v.iter().map(to_qi).collect()
}

fn to_mat(m: &CMatrix, dim: usize) -> Result<Mat, HodgeError> {
    if m.len() != dim || m.iter().any(|row| row.len() != dim) {
        return Err(HodgeError::BadFiltration("matrix shape mismatch".into()));
    }
    let rows = m.iter().map(to_qi_vec).collect::<Result<Vec<_>, _>>()?;
    Ok(Mat::from_rows(rows))
}

fn from_qi(q: &Qi) -> CEntry {
    let (re, im) = q.to_f64();
    [re, im]
}

fn from_mat(m: &Mat) -> CMatrix {
    m.all_rows()
        .iter()
        .map(|row| row.iter().map(from_qi).collect())
        .collect()
}

fn subspace_from_gens(gens: &[CVector], dim: usize) -> Result<Subspace, HodgeError> {
    let rows = gens
        .iter()
        .map(|g| {
            if g.len() != dim {
                return Err(HodgeError::BadFiltration("generator length mismatch".into()));
            }
            to_qi_vec(g)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subspace::span(dim, &rows))
}

fn parse_steps(
    steps: &BTreeMap<String, Vec<CVector>>,
    dim: usize,
) -> Result<Vec<(i64, Subspace)>, HodgeError> {
    steps
        .iter()
        .map(|(key, gens)| {
            let idx: i64 = key
                .parse()
                .map_err(|_| HodgeError::BadFiltration(format!("bad filtration index {key:?}")))?;
            Ok((idx, subspace_from_gens(gens, dim)?))
        })
        .collect()
}

fn dump_steps(steps: &[(i64, Subspace)]) -> BTreeMap<String, Vec<CVector>> {
    steps
        .iter()
        .map(|(idx, s)| {
            (
                idx.to_string(),
                s.basis_rows()
                    .iter()
                    .map(|row| row.iter().map(from_qi).collect())
                    .collect(),
            )
        })
        .collect()
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct HodgeStructureSpec {
    pub weight: i64,
    pub dim: usize,
    pub conjugation: CMatrix,
    /// Decreasing Hodge filtration: index → generator vectors.
    pub hodge: BTreeMap<String, Vec<CVector>>,
}

impl HodgeStructureSpec {
    pub fn to_structure(&self) -> Result<HodgeStructure, HodgeError> {
        let conj = to_mat(&self.conjugation, self.dim)?;
        let filt = Filtration::new(self.dim, parse_steps(&self.hodge, self.dim)?)?;
        HodgeStructure::new(self.weight, conj, filt)
    }

    pub fn from_structure(hs: &HodgeStructure) -> Self {
        HodgeStructureSpec {
            weight: hs.weight,
            dim: hs.dim,
            conjugation: from_mat(&hs.conjugation),
            hodge: dump_steps(hs.hodge.steps()),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct BiextensionSpec {
    pub ambient_dim: usize,
    pub basis_labels: Vec<String>,
    pub conjugation: CMatrix,
    /// Increasing weight filtration: index → generator vectors.
    pub weight_filtration: BTreeMap<String, Vec<CVector>>,
    /// Decreasing Hodge filtration: index → generator vectors.
    pub hodge_filtration: BTreeMap<String, Vec<CVector>>,
    pub graded_b: HodgeStructureSpec,
    pub graded_c: HodgeStructureSpec,
    pub frame_unit: CVector,
    pub frame_b: Vec<CVector>,
    pub frame_c: Vec<CVector>,
}

impl BiextensionSpec {
    pub fn to_biextension(&self) -> Result<Biextension, HodgeError> {
        let n = self.ambient_dim;
        if self.basis_labels.len() != n {
            return Err(HodgeError::BadFiltration("basis label count mismatch".into()));
        }
        let conjugation = to_mat(&self.conjugation, n)?;
        let weights = WeightFiltration::new(n, parse_steps(&self.weight_filtration, n)?)?;
        let hodge = Filtration::new(n, parse_steps(&self.hodge_filtration, n)?)?;
        let biext = Biextension {
            mhs: RealMhs { dim: n, conjugation, weights, hodge },
            graded_b: self.graded_b.to_structure()?,
            graded_c: self.graded_c.to_structure()?,
            frame_unit: to_qi_vec(&self.frame_unit)?,
            frame_b: self.frame_b.iter().map(to_qi_vec).collect::<Result<_, _>>()?,
            frame_c: self.frame_c.iter().map(to_qi_vec).collect::<Result<_, _>>()?,
        };
        biext.validate()?;
        Ok(biext)
    }

    pub fn from_biextension(v: &Biextension) -> Self {
        let n = v.mhs.dim;
        let dump_vec = |vec: &[Qi]| vec.iter().map(from_qi).collect::<CVector>();
        BiextensionSpec {
            ambient_dim: n,
            basis_labels: (0..n).map(|i| format!("v{i}")).collect(),
            conjugation: from_mat(&v.mhs.conjugation),
            weight_filtration: dump_steps(v.mhs.weights.steps()),
            hodge_filtration: dump_steps(v.mhs.hodge.steps()),
            graded_b: HodgeStructureSpec::from_structure(&v.graded_b),
            graded_c: HodgeStructureSpec::from_structure(&v.graded_c),
            frame_unit: dump_vec(&v.frame_unit),
            frame_b: v.frame_b.iter().map(|b| dump_vec(b)).collect(),
            frame_c: v.frame_c.iter().map(|c| dump_vec(c)).collect(),
        }
    }
}
