//! Dense vectors, sparse rows and the row-sparse design matrix.
//!
//! Every algorithm in the crate needs only row access and vector
//! arithmetic, so there is no general dense-matrix type. All scalars are
//! `f64`; the convergence-order experiments need the full 16 digits to
//! observe superquadratic decay before hitting machine epsilon.

use crate::Error;

/// A dense parameter vector in R^d. Dimension is fixed at construction and
/// all binary operations require equal dimensions (violations panic).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamVector {
    entries: Vec<f64>,
}

impl ParamVector {
    pub fn new(entries: Vec<f64>) -> Self {
        ParamVector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        ParamVector {
            entries: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// Fills with zeros in place.
    pub fn fill_zero(&mut self) {
        self.entries.iter_mut().for_each(|v| *v = 0.0);
    }

    pub fn scale_in_place(&mut self, alpha: f64) {
        self.entries.iter_mut().for_each(|v| *v *= alpha);
    }

    /// self += alpha * u
    pub fn axpy_in_place(&mut self, alpha: f64, u: &ParamVector) {
        assert_eq!(self.dim(), u.dim(), "axpy: dimension mismatch");
        for (s, &x) in self.entries.iter_mut().zip(&u.entries) {
            *s += alpha * x;
        }
    }
}

impl std::ops::Index<usize> for ParamVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

impl std::ops::IndexMut<usize> for ParamVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.entries[i]
    }
}

/// Inner product u'v.
pub fn dot(u: &ParamVector, v: &ParamVector) -> f64 {
    assert_eq!(u.dim(), v.dim(), "dot: dimension mismatch");
    u.entries
        .iter()
        .zip(&v.entries)
        .map(|(&a, &b)| a * b)
        .sum()
}

/// Returns alpha * u + v.
pub fn axpy(alpha: f64, u: &ParamVector, v: &ParamVector) -> ParamVector {
    assert_eq!(u.dim(), v.dim(), "axpy: dimension mismatch");
    let entries = u
        .entries
        .iter()
        .zip(&v.entries)
        .map(|(&a, &b)| alpha * a + b)
        .collect();
    ParamVector { entries }
}

/// Returns u - v.
pub fn sub(u: &ParamVector, v: &ParamVector) -> ParamVector {
    axpy(-1.0, v, u)
}

pub fn norm_sq(u: &ParamVector) -> f64 {
    dot(u, u)
}

pub fn norm(u: &ParamVector) -> f64 {
    norm_sq(u).sqrt()
}

/// One sample row: strictly increasing column indices with their values,
/// in ambient dimension `dim`. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    indices: Vec<usize>,
    values: Vec<f64>,
    dim: usize,
}

impl SparseRow {
    /// Builds a row, validating index order and dropping explicit zeros.
    /// Duplicate indices are an error, not merged.
    pub fn new(indices: Vec<usize>, values: Vec<f64>, dim: usize) -> Result<Self, Error> {
        if indices.len() != values.len() {
            return Err(Error::InvalidConfig(
                "sparse row: index/value length mismatch".into(),
            ));
        }
        let mut prev: Option<usize> = None;
        for &i in &indices {
            if i >= dim {
                return Err(Error::InvalidConfig(format!(
                    "sparse row: index {i} out of dimension {dim}"
                )));
            }
            if let Some(p) = prev {
                if i == p {
                    return Err(Error::InvalidConfig(format!(
                        "sparse row: duplicate index {i}"
                    )));
                }
                if i < p {
                    return Err(Error::InvalidConfig(format!(
                        "sparse row: indices not increasing at {i}"
                    )));
                }
            }
            prev = Some(i);
        }
        let (indices, values) = indices
            .into_iter()
            .zip(values)
            .filter(|&(_, v)| v != 0.0)
            .unzip();
        Ok(SparseRow {
            indices,
            values,
            dim,
        })
    }

    pub fn from_dense(row: &[f64]) -> Self {
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for (i, &v) in row.iter().enumerate() {
            if v != 0.0 {
                indices.push(i);
                values.push(v);
            }
        }
        SparseRow {
            indices,
            values,
            dim: row.len(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn densify(&self) -> ParamVector {
        let mut out = ParamVector::zeros(self.dim);
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// a'v for a sparse row against a dense vector.
pub fn sparse_dot(r: &SparseRow, v: &ParamVector) -> f64 {
    assert_eq!(r.dim(), v.dim(), "sparse_dot: dimension mismatch");
    r.iter().map(|(i, a)| a * v[i]).sum()
}

/// v += alpha * r (scatter).
pub fn sparse_axpy_in_place(alpha: f64, r: &SparseRow, v: &mut ParamVector) {
    assert_eq!(r.dim(), v.dim(), "sparse_axpy: dimension mismatch");
    for (i, a) in r.iter() {
        v[i] += alpha * a;
    }
}

/// The training set: n sparse rows in R^d with one real label per row.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    rows: Vec<SparseRow>,
    labels: Vec<f64>,
    d: usize,
}

impl DesignMatrix {
    pub fn new(rows: Vec<SparseRow>, labels: Vec<f64>, d: usize) -> Result<Self, Error> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidConfig(format!(
                "design matrix: {} rows vs {} labels",
                rows.len(),
                labels.len()
            )));
        }
        for r in &rows {
            if r.dim() != d {
                return Err(Error::InvalidConfig(format!(
                    "design matrix: row dim {} != {}",
                    r.dim(),
                    d
                )));
            }
        }
        Ok(DesignMatrix { rows, labels, d })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn row_norms_sq(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.norm_sq()).collect()
    }
}
