//! Change matrices stored as coordinate maps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ExactMatrix, LinalgError, Result};
use crate::field::{Field, Value};

/// Nonzero counts of a change set. Regular sparsity is the larger of the two
/// maxima.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub total_nonzeros: usize,
    pub max_per_row: usize,
    pub max_per_col: usize,
}

impl SparsityReport {
    pub fn regular(&self) -> usize {
        self.max_per_row.max(self.max_per_col)
    }
}

/// Sparse matrix `E` over a field; absent positions are zero and stored
/// values are never zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseChanges {
    field: Field,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Value>,
}

impl SparseChanges {
    pub fn empty(field: &Field, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, entries: BTreeMap::new() }
    }

    /// Rejects out-of-range indices, repeated positions and zero values.
    pub fn from_triplets(
        field: &Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Value)>,
    ) -> Result<Self> {
        let mut out = Self::empty(field, rows, cols);
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(LinalgError::Changes(format!("position ({i}, {j}) outside {rows}x{cols}")));
            }
            if !field.contains(&v) {
                return Err(LinalgError::Changes(format!("value at ({i}, {j}) is not a field element")));
            }
            if field.is_zero(&v) {
                return Err(LinalgError::Changes(format!("zero value at ({i}, {j})")));
            }
            if out.entries.insert((i, j), v).is_some() {
                return Err(LinalgError::Changes(format!("position ({i}, {j}) repeated")));
            }
        }
        Ok(out)
    }

    pub fn from_dense(m: &ExactMatrix) -> Self {
        let f = m.field();
        let mut out = Self::empty(f, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if !f.is_zero(v) {
                    out.entries.insert((i, j), v.clone());
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(&self.field, self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, v.clone());
        }
        m
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

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Value)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Value> {
        self.entries.get(&(i, j))
    }

    /// Sets position `(i, j)`; a zero value removes it.
    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        assert!(i < self.rows && j < self.cols, "position out of range");
        if self.field.is_zero(&v) {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    /// Adds `v` to position `(i, j)`.
    pub fn accumulate(&mut self, i: usize, j: usize, v: &Value) {
        let cur = self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero());
        let next = self.field.add(&cur, v);
        self.set(i, j, next);
    }

    pub fn sparsity(&self) -> SparsityReport {
        let mut per_row = vec![0usize; self.rows];
        let mut per_col = vec![0usize; self.cols];
        for &(i, j) in self.entries.keys() {
            per_row[i] += 1;
            per_col[j] += 1;
        }
        SparsityReport {
            total_nonzeros: self.entries.len(),
            max_per_row: per_row.into_iter().max().unwrap_or(0),
            max_per_col: per_col.into_iter().max().unwrap_or(0),
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.keys().copied()
    }

    pub fn transpose(&self) -> Self {
        let entries = self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect();
        Self { field: self.field.clone(), rows: self.cols, cols: self.rows, entries }
    }

    /// Transpose with every entry replaced by its complex conjugate
    /// (`zeta -> zeta^-1`); over finite fields this is the plain transpose.
    pub fn conjugate_transpose(&self) -> Result<Self> {
        let mut out = Self::empty(&self.field, self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            let c = if self.field.is_finite() { v.clone() } else { self.field.conjugate(v)? };
            out.entries.insert((j, i), c);
        }
        Ok(out)
    }

    pub fn try_map(&self, mut f: impl FnMut(&Value) -> Result<Value>) -> Result<Self> {
        let mut out = Self::empty(&self.field, self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, f(v)?);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Value) -> Self {
        let mut out = Self::empty(&self.field, self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, self.field.mul(v, c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            out.accumulate(i, j, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            out.accumulate(i, j, &self.field.neg(v));
        }
        Ok(out)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field != other.field || self.shape() != other.shape() {
            return Err(LinalgError::Shape(format!(
                "change sets {:?} over {} and {:?} over {}",
                self.shape(),
                self.field.descriptor(),
                other.shape(),
                other.field.descriptor()
            )));
        }
        Ok(())
    }

    /// Same transform as [`ExactMatrix::scale_and_permute`]: the result has
    /// `row_scales[i] * col_scales[j] * E[row_perm[i], col_perm[j]]` at
    /// `(i, j)`.
    pub fn scale_and_permute(
        &self,
        row_scales: Option<&[Value]>,
        col_scales: Option<&[Value]>,
        row_perm: Option<&[usize]>,
        col_perm: Option<&[usize]>,
    ) -> Result<Self> {
        let inverse = |p: Option<&[usize]>, n: usize| -> Result<Vec<usize>> {
            match p {
                None => Ok((0..n).collect()),
                Some(p) => {
                    if !super::is_permutation(p, n) {
                        return Err(LinalgError::Shape(format!("not a permutation of {n} indices")));
                    }
                    let mut inv = vec![0; n];
                    for (i, &x) in p.iter().enumerate() {
                        inv[x] = i;
                    }
                    Ok(inv)
                }
            }
        };
        let rinv = inverse(row_perm, self.rows)?;
        let cinv = inverse(col_perm, self.cols)?;
        let mut out = Self::empty(&self.field, self.rows, self.cols);
        for (&(a, b), v) in &self.entries {
            let (i, j) = (rinv[a], cinv[b]);
            let mut x = v.clone();
            if let Some(rs) = row_scales {
                x = self.field.mul(&rs[i], &x);
            }
            if let Some(cs) = col_scales {
                x = self.field.mul(&x, &cs[j]);
            }
            out.set(i, j, x);
        }
        Ok(out)
    }

    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(LinalgError::Shape("Kronecker product across fields".into()));
        }
        let mut out = Self::empty(&self.field, self.rows * other.rows, self.cols * other.cols);
        for (&(i, j), a) in &self.entries {
            for (&(k, l), b) in &other.entries {
                out.entries.insert((i * other.rows + k, j * other.cols + l), self.field.mul(a, b));
            }
        }
        Ok(out)
    }

    /// `L * diag(d) * R` for sparse `L`, `R`.
    pub fn sandwich(left: &Self, diag: &[Value], right: &Self) -> Result<Self> {
        if left.cols != diag.len() || right.rows != diag.len() || left.field != right.field {
            return Err(LinalgError::Shape(format!(
                "{:?} * diag({}) * {:?}",
                left.shape(),
                diag.len(),
                right.shape()
            )));
        }
        let f = &left.field;
        let mut by_row: Vec<Vec<(usize, &Value)>> = vec![Vec::new(); right.rows];
        for (&(k, j), v) in &right.entries {
            by_row[k].push((j, v));
        }
        let mut out = Self::empty(f, left.rows, right.cols);
        for (&(i, k), a) in &left.entries {
            if f.is_zero(&diag[k]) {
                continue;
            }
            let ad = f.mul(a, &diag[k]);
            for &(j, b) in &by_row[k] {
                out.accumulate(i, j, &f.mul(&ad, b));
            }
        }
        Ok(out)
    }

    /// Entries inside the `row_idx x col_idx` submatrix, reindexed.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut rpos = vec![usize::MAX; self.rows];
        for (a, &i) in row_idx.iter().enumerate() {
            rpos[i] = a;
        }
        let mut cpos = vec![usize::MAX; self.cols];
        for (b, &j) in col_idx.iter().enumerate() {
            cpos[j] = b;
        }
        let mut out = Self::empty(&self.field, row_idx.len(), col_idx.len());
        for (&(i, j), v) in &self.entries {
            if rpos[i] != usize::MAX && cpos[j] != usize::MAX {
                out.entries.insert((rpos[i], cpos[j]), v.clone());
            }
        }
        out
    }

    /// Adds `block` with its `(0, 0)` at `(row_map[0], col_map[0])`, placing
    /// block entry `(a, b)` at `(row_map[a], col_map[b])`.
    pub fn scatter_add(&mut self, block: &Self, row_map: &[usize], col_map: &[usize]) -> Result<()> {
        if block.field != self.field || block.rows != row_map.len() || block.cols != col_map.len() {
            return Err(LinalgError::Shape("block does not match its index maps".into()));
        }
        for (&(a, b), v) in &block.entries {
            self.accumulate(row_map[a], col_map[b], v);
        }
        Ok(())
    }

    pub fn embed_into(&self, target: &Field) -> Result<Self> {
        let mut out = Self::empty(target, self.rows, self.cols);
        for (&k, v) in &self.entries {
            out.entries.insert(k, self.field.embed(v, target)?);
        }
        Ok(out)
    }

    pub fn restrict_to(&self, base: &Field) -> Result<Self> {
        let mut out = Self::empty(base, self.rows, self.cols);
        for (&k, v) in &self.entries {
            out.entries.insert(k, self.field.restrict(v, base)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_sparsity_multiplies() {
        let f = Field::prime(7).unwrap();
        let one = f.one();
        let a = SparseChanges::from_triplets(&f, 3, 3, [(0, 0, one.clone()), (0, 2, one.clone()), (1, 1, one.clone())]).unwrap();
        let b = SparseChanges::from_triplets(&f, 2, 2, [(0, 0, one.clone()), (0, 1, one.clone()), (1, 0, one.clone())]).unwrap();
        let k = a.kronecker(&b).unwrap();
        let (ra, rb) = (a.sparsity(), b.sparsity());
        assert_eq!(k.sparsity().max_per_row, ra.max_per_row * rb.max_per_row);
        assert_eq!(k.sparsity().max_per_col, ra.max_per_col * rb.max_per_col);
        assert_eq!(k.to_dense(), a.to_dense().kronecker(&b.to_dense()).unwrap());
    }

    #[test]
    fn rejects_duplicates_and_zero() {
        let f = Field::prime(5).unwrap();
        assert!(SparseChanges::from_triplets(&f, 2, 2, [(0, 0, f.one()), (0, 0, f.one())]).is_err());
        assert!(SparseChanges::from_triplets(&f, 2, 2, [(0, 0, f.zero())]).is_err());
        assert!(SparseChanges::from_triplets(&f, 2, 2, [(2, 0, f.one())]).is_err());
    }

    #[test]
    fn full_row_report() {
        let f = Field::rationals();
        let e = SparseChanges::from_triplets(&f, 4, 4, (0..4).map(|j| (1, j, f.one()))).unwrap();
        assert_eq!(e.sparsity(), SparsityReport { total_nonzeros: 4, max_per_row: 4, max_per_col: 1 });
    }
}
