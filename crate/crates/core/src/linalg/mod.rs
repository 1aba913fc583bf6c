//! Dense exact matrices, sparse change sets, and rank.

mod modp;
mod rank;
mod sparse;

pub use rank::RankMethod;
pub use sparse::{SparseChanges, SparsityReport};

use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid change set: {0}")]
    Changes(String),
    #[error("inconsistent linear system")]
    Inconsistent,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Value>,
}

impl ExactMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Value>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().position(|v| !field.contains(v)) {
            return Err(LinalgError::Shape(format!("entry {bad} does not belong to {field}")));
        }
        Ok(Self { field: field.clone(), rows, cols, data })
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Value) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { field: field.clone(), rows, cols, data }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn diagonal(field: &Field, diag: &[Value]) -> Self {
        let n = diag.len();
        Self::from_fn(field, n, n, |i, j| if i == j { diag[i].clone() } else { field.zero() })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.data[i * self.cols + j]
    }

    pub fn element(&self, i: usize, j: usize) -> FieldElement {
        self.field.element(self.get(i, j).clone())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Value] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[Value] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Value> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|v| !self.field.is_zero(v)).count()
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(self.field.descriptor().clone(), other.field.descriptor().clone()).into());
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape(format!("{:?} + {:?}", self.shape(), other.shape())));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(Self { data, ..self.clone_empty() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape(format!("{:?} - {:?}", self.shape(), other.shape())));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Ok(Self { data, ..self.clone_empty() })
    }

    fn clone_empty(&self) -> Self {
        Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data: Vec::new() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!("{:?} * {:?}", self.shape(), other.shape())));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Value) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Self { data, ..self.clone_empty() }
    }

    pub fn map(&self, f: impl Fn(&Value) -> Value) -> Self {
        Self { data: self.data.iter().map(f).collect(), ..self.clone_empty() }
    }

    pub fn try_map(&self, f: impl Fn(&Value) -> std::result::Result<Value, FieldError>) -> Result<Self> {
        let data = self.data.iter().map(f).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { data, ..self.clone_empty() })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise complex conjugate of the transpose (cyclotomic fields).
    pub fn conjugate_transpose(&self) -> Result<Self> {
        let t = self.transpose();
        t.try_map(|v| self.field.conjugate(v))
    }

    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = &self.field;
        let (r2, c2) = other.shape();
        Ok(Self::from_fn(f, self.rows * r2, self.cols * c2, |i, j| {
            f.mul(self.get(i / r2, j / c2), other.get(i % r2, j % c2))
        }))
    }

    /// `result(i, j) = rs[i] * cs[j] * M[rp[i], cp[j]]`; absent scales are 1
    /// and absent permutations are the identity.
    pub fn scale_and_permute(
        &self,
        row_scales: Option<&[Value]>,
        col_scales: Option<&[Value]>,
        row_perm: Option<&[usize]>,
        col_perm: Option<&[usize]>,
    ) -> Result<Self> {
        let check = |len: Option<usize>, want: usize, what: &str| match len {
            Some(l) if l != want => Err(LinalgError::Shape(format!("{what} has length {l}, expected {want}"))),
            _ => Ok(()),
        };
        check(row_scales.map(<[_]>::len), self.rows, "row scales")?;
        check(col_scales.map(<[_]>::len), self.cols, "column scales")?;
        check(row_perm.map(<[_]>::len), self.rows, "row permutation")?;
        check(col_perm.map(<[_]>::len), self.cols, "column permutation")?;
        for (perm, n) in [(row_perm, self.rows), (col_perm, self.cols)] {
            if let Some(p) = perm {
                if !is_permutation(p, n) {
                    return Err(LinalgError::Shape("not a permutation".into()));
                }
            }
        }
        let f = &self.field;
        Ok(Self::from_fn(f, self.rows, self.cols, |i, j| {
            let si = row_perm.map_or(i, |p| p[i]);
            let sj = col_perm.map_or(j, |p| p[j]);
            let mut v = self.get(si, sj).clone();
            if let Some(rs) = row_scales {
                v = f.mul(&rs[i], &v);
            }
            if let Some(cs) = col_scales {
                v = f.mul(&v, &cs[j]);
            }
            v
        }))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// The same matrix over a field this one embeds into.
    pub fn embed_into(&self, target: &Field) -> Result<Self> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let data = self
            .data
            .iter()
            .map(|v| self.field.embed(v, target))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { field: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// The same matrix over a subfield containing all its entries.
    pub fn restrict_to(&self, base: &Field) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|v| self.field.restrict(v, base))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { field: base.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// `M - E` (or `M + E`).
    pub fn apply_changes(&self, changes: &SparseChanges, subtract: bool) -> Result<Self> {
        if changes.field() != &self.field {
            return Err(FieldError::Mismatch(self.field.descriptor().clone(), changes.field().descriptor().clone()).into());
        }
        if changes.shape() != self.shape() {
            return Err(LinalgError::Shape(format!(
                "changes {:?} for matrix {:?}",
                changes.shape(),
                self.shape()
            )));
        }
        let mut out = self.clone();
        for ((i, j), v) in changes.iter() {
            let idx = i * self.cols + j;
            out.data[idx] = if subtract {
                self.field.sub(&out.data[idx], v)
            } else {
                self.field.add(&out.data[idx], v)
            };
        }
        Ok(out)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        rank::rref_generic(self)
    }

    /// Some `x` with `self * x = b`, free variables set from `free_values`
    /// (indexed by column) or zero.
    pub fn solve(&self, b: &[Value], free_values: Option<&[Value]>) -> Result<Vec<Value>> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape(format!("right-hand side of length {}", b.len())));
        }
        let f = &self.field;
        // Pinned free variables move to the right-hand side.
        let (_, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut x = vec![f.zero(); self.cols];
        if let Some(vals) = free_values {
            for &c in &free {
                x[c] = vals[c].clone();
            }
        }
        let mut rhs: Vec<Value> = b.to_vec();
        for i in 0..self.rows {
            for &c in &free {
                if !f.is_zero(&x[c]) {
                    rhs[i] = f.sub(&rhs[i], &f.mul(self.get(i, c), &x[c]));
                }
            }
        }
        let sub = self.submatrix(&(0..self.rows).collect::<Vec<_>>(), &pivots);
        let mut aug = Self::zeros(f, self.rows, pivots.len() + 1);
        for i in 0..self.rows {
            for j in 0..pivots.len() {
                aug.set(i, j, sub.get(i, j).clone());
            }
            aug.set(i, pivots.len(), rhs[i].clone());
        }
        let (red, piv2) = aug.rref();
        if piv2.contains(&pivots.len()) {
            return Err(LinalgError::Inconsistent);
        }
        for (r, &c) in piv2.iter().enumerate() {
            x[pivots[c]] = red.get(r, pivots.len()).clone();
        }
        Ok(x)
    }

    pub fn mul_vec(&self, v: &[Value]) -> Vec<Value> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Columns forming a basis of the column space, as a matrix.
    pub fn column_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.submatrix(&(0..self.rows).collect::<Vec<_>>(), &pivots)
    }

    /// Horizontal concatenation.
    pub fn hstack(parts: &[&Self]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| LinalgError::Shape("empty stack".into()))?;
        let rows = first.rows;
        if parts.iter().any(|p| p.rows != rows || p.field != first.field) {
            return Err(LinalgError::Shape("hstack of mismatched parts".into()));
        }
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for p in parts {
                data.extend_from_slice(p.row(i));
            }
        }
        Ok(Self { field: first.field.clone(), rows, cols, data })
    }

    pub fn rank(&self) -> usize {
        rank::rank(self, RankMethod::Auto)
    }

    pub fn rank_with(&self, method: RankMethod) -> usize {
        rank::rank(self, method)
    }
}

pub fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Whether `(A ⊗ B)(C ⊗ D) = (AC) ⊗ (BD)`.
pub fn mixed_product_check(a: &ExactMatrix, b: &ExactMatrix, c: &ExactMatrix, d: &ExactMatrix) -> Result<bool> {
    let lhs = a.kronecker(b)?.mul(&c.kronecker(d)?)?;
    let rhs = a.mul(c)?.kronecker(&b.mul(d)?)?;
    Ok(lhs == rhs)
}
