//! Moving certificates through diagonal sandwiches and Kronecker products.

use super::{embed_descriptor, same_field, verify, Certificate, CertifyError, Provenance, Result};
use crate::field::{Field, Value};
use crate::linalg::{ExactMatrix, SparseChanges};
use crate::structured::{MatrixDescriptor, MatrixKind};

/// Which sandwich `B = A' D A` is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `A D A`.
    Same,
    /// `A* D A`: conjugate transpose over cyclotomic fields, transpose over
    /// finite fields.
    Adjoint,
}

/// Changes, rank claim and sparsity claim without a descriptor.
#[derive(Clone, Debug)]
pub(crate) struct Parts {
    pub changes: SparseChanges,
    pub rank: usize,
    pub sparsity: usize,
    pub provenance: Provenance,
}

impl Parts {
    pub fn from_cert(c: &Certificate) -> Self {
        Self {
            changes: c.changes.clone(),
            rank: c.claimed_rank,
            sparsity: c.claimed_regular_sparsity,
            provenance: c.provenance.clone(),
        }
    }

    pub fn into_cert(self, matrix: MatrixDescriptor, field: &Field) -> Result<Certificate> {
        Certificate::new(matrix, field, self.changes, self.rank, self.sparsity, self.provenance)
    }
}

pub(crate) fn adjoint_changes(e: &SparseChanges) -> Result<SparseChanges> {
    if e.field().is_finite() {
        Ok(e.transpose())
    } else {
        Ok(e.conjugate_transpose()?)
    }
}

fn adjoint_matrix(m: &ExactMatrix) -> Result<ExactMatrix> {
    if m.field().is_finite() {
        Ok(m.transpose())
    } else {
        Ok(m.conjugate_transpose()?)
    }
}

/// `X D Y - E_X D E_Y = (X - E_X) D Y + E_X D (Y - E_Y)`, so the rank is at
/// most `r_X + r_Y` and each row of `E_X D E_Y` has at most `s_X s_Y`
/// nonzeros.
pub(crate) fn sandwich_parts(x: &Parts, diagonal: &[Value], y: &Parts) -> Result<Parts> {
    let changes = SparseChanges::sandwich(&x.changes, diagonal, &y.changes)?;
    let provenance = Provenance::new("diagonal sandwich E_X D E_Y").merge(&x.provenance);
    Ok(Parts { changes, rank: x.rank + y.rank, sparsity: x.sparsity * y.sparsity, provenance })
}

fn require_verified(c: &Certificate, what: &str) -> Result<()> {
    let report = verify(c);
    if report.passed() {
        Ok(())
    } else {
        Err(CertifyError::Unverified(format!("{what}: {}", report.summary())))
    }
}

/// Certificate for `A D A` or `A* D A` with changes `E D E` or `E* D E`,
/// rank `2 r_A` and sparsity `s_A^2`.
///
/// `target` describes `B`; when absent the product is formed densely and
/// stored explicitly.
pub fn diagonalization_transfer(
    a: &Certificate,
    diagonal: &[Value],
    side: Side,
    target: Option<MatrixDescriptor>,
) -> Result<Certificate> {
    let (rows, cols) = a.shape();
    if rows != cols || diagonal.len() != rows {
        return Err(CertifyError::Precondition(format!(
            "diagonal of length {} for a {rows}x{cols} matrix",
            diagonal.len()
        )));
    }
    require_verified(a, "input certificate")?;
    let field = &a.field;
    let parts = Parts::from_cert(a);
    let left = match side {
        Side::Same => parts.clone(),
        Side::Adjoint => Parts { changes: adjoint_changes(&parts.changes)?, ..parts.clone() },
    };
    let mut out = sandwich_parts(&left, diagonal, &parts)?;
    out.provenance = out.provenance.then(match side {
        Side::Same => "transfer through A D A",
        Side::Adjoint => "transfer through A* D A",
    });
    let target = match target {
        Some(t) => t,
        None => {
            let m = a.realize()?;
            let l = match side {
                Side::Same => m.clone(),
                Side::Adjoint => adjoint_matrix(&m)?,
            };
            let b = l.mul(&ExactMatrix::diagonal(field, diagonal))?.mul(&m)?;
            MatrixDescriptor::new(MatrixKind::Explicit { rows, cols, data: b.into_data() }, field)
        }
    };
    out.into_cert(target, field)
}

/// Certificate for `X D Y` from certificates for `X` and `Y`.
pub fn sandwich_transfer(
    x: &Certificate,
    diagonal: &[Value],
    y: &Certificate,
    target: Option<MatrixDescriptor>,
) -> Result<Certificate> {
    same_field(&x.field, &y.field)?;
    if x.shape().1 != diagonal.len() || y.shape().0 != diagonal.len() {
        return Err(CertifyError::Precondition("sandwich dimensions do not match".into()));
    }
    require_verified(x, "left certificate")?;
    require_verified(y, "right certificate")?;
    let field = &x.field;
    let out = sandwich_parts(&Parts::from_cert(x), diagonal, &Parts::from_cert(y))?;
    let target = match target {
        Some(t) => t,
        None => {
            let b = x.realize()?.mul(&ExactMatrix::diagonal(field, diagonal))?.mul(&y.realize()?)?;
            let (rows, cols) = b.shape();
            MatrixDescriptor::new(MatrixKind::Explicit { rows, cols, data: b.into_data() }, field)
        }
    };
    out.into_cert(target, field)
}

/// `A (x) B - E_A (x) E_B = (A - E_A) (x) B + E_A (x) (B - E_B)`.
pub(crate) fn kronecker_parts(a: &Parts, dims_a: usize, b: &Parts, dims_b: usize) -> Result<Parts> {
    Ok(Parts {
        changes: a.changes.kronecker(&b.changes)?,
        rank: a.rank * dims_b + b.rank * dims_a,
        sparsity: a.sparsity * b.sparsity,
        provenance: Provenance::new("Kronecker product E_A (x) E_B").merge(&a.provenance).merge(&b.provenance),
    })
}

fn flatten(kind: &MatrixKind, out: &mut Vec<MatrixKind>) {
    match kind {
        MatrixKind::Kronecker { factors } => factors.iter().for_each(|k| flatten(k, out)),
        other => out.push(other.clone()),
    }
}

/// Descriptor of `A (x) B`, over a shared field.
pub(crate) fn kronecker_descriptor(a: &MatrixDescriptor, b: &MatrixDescriptor, field: &Field) -> Result<MatrixDescriptor> {
    let (a, b) = if a.field == b.field {
        (a.clone(), b.clone())
    } else {
        (embed_descriptor(a, field)?, embed_descriptor(b, field)?)
    };
    let mut factors = Vec::new();
    flatten(&a.kind, &mut factors);
    flatten(&b.kind, &mut factors);
    Ok(MatrixDescriptor::new(MatrixKind::Kronecker { factors }, &a.field))
}

/// Certificate for `A (x) B`: `E = E_A (x) E_B`, `r = r_A dim(B) + r_B dim(A)`,
/// `s = s_A s_B`.
pub fn kronecker_transfer(a: &Certificate, b: &Certificate) -> Result<Certificate> {
    same_field(&a.field, &b.field)?;
    let dim = |c: &Certificate| {
        let (r, k) = c.shape();
        r.min(k)
    };
    let parts = kronecker_parts(&Parts::from_cert(a), dim(a), &Parts::from_cert(b), dim(b))?;
    let target = kronecker_descriptor(&a.matrix, &b.matrix, &a.field)?;
    parts.into_cert(target, &a.field)
}

/// One factor `M_i = L_i + E_i` of a Kronecker product, with `rank(L_i) <=
/// rank`.
#[derive(Clone, Debug)]
pub struct SplitPart {
    pub low: ExactMatrix,
    pub sparse: SparseChanges,
    pub rank: usize,
}

/// Expansion of `(x)_i (L_i + E_i)` over the subsets `S` of factors taking
/// `L_i`: the terms with `|S| < l` form the sparse sum, the rest the low-rank
/// sum.
#[derive(Clone, Debug)]
pub struct BinomialSplit {
    pub l: usize,
    /// Sum of the terms with `|S| < l`.
    pub sparse: SparseChanges,
    /// Rank bound `sum_{|S| = l} prod_{S} r_i prod_{not S} n_i` of the low-rank sum.
    pub rank_bound: usize,
    /// `sum_{|S| < l} prod_{S} n_i prod_{not S} s_i`.
    pub sparsity_bound: usize,
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn all_subsets_below(n: usize, l: usize) -> Vec<Vec<usize>> {
    (0..l.min(n + 1)).flat_map(|k| subsets_of_size(n, k)).collect()
}

fn dims(parts: &[SplitPart]) -> Vec<usize> {
    parts.iter().map(|p| p.low.rows().min(p.low.cols())).collect()
}

pub fn binomial_split(parts: &[SplitPart], l: usize) -> Result<BinomialSplit> {
    let b = parts.len();
    if b == 0 || l > b {
        return Err(CertifyError::Precondition(format!("threshold {l} for {b} factors")));
    }
    let field = parts[0].low.field().clone();
    for p in parts {
        same_field(p.low.field(), &field)?;
        same_field(p.sparse.field(), &field)?;
        if p.low.shape() != p.sparse.shape() {
            return Err(CertifyError::Precondition("low-rank and sparse parts differ in shape".into()));
        }
    }
    let n = dims(parts);
    let s: Vec<usize> = parts.iter().map(|p| p.sparse.sparsity().regular()).collect();
    let low_sparse: Vec<SparseChanges> = parts.iter().map(|p| SparseChanges::from_dense(&p.low)).collect();
    let (rows, cols) = parts.iter().fold((1, 1), |(r, c), p| (r * p.low.rows(), c * p.low.cols()));
    let mut sparse = SparseChanges::empty(&field, rows, cols);
    let mut sparsity_bound = 0;
    for set in all_subsets_below(b, l) {
        let mut term = SparseChanges::from_triplets(&field, 1, 1, [(0, 0, field.one())])?;
        let mut bound = 1;
        for i in 0..b {
            if set.contains(&i) {
                term = term.kronecker(&low_sparse[i])?;
                bound *= n[i];
            } else {
                term = term.kronecker(&parts[i].sparse)?;
                bound *= s[i];
            }
        }
        sparsity_bound += bound;
        sparse = sparse.add(&term)?;
    }
    let rank_bound = subsets_of_size(b, l)
        .iter()
        .map(|set| (0..b).map(|i| if set.contains(&i) { parts[i].rank } else { n[i] }).product::<usize>())
        .sum();
    Ok(BinomialSplit { l, sparse, rank_bound, sparsity_bound })
}

impl BinomialSplit {
    /// The low-rank sum in grouped form: for each `l`-subset `S` with largest
    /// element `k`, factors in `S` take `L_i`, factors outside `S` below `k`
    /// take `E_i`, and factors above `k` take `M_i`.
    pub fn low_rank_sum(&self, parts: &[SplitPart]) -> Result<ExactMatrix> {
        let field = parts[0].low.field().clone();
        let b = parts.len();
        let (rows, cols) = parts.iter().fold((1, 1), |(r, c), p| (r * p.low.rows(), c * p.low.cols()));
        let mut acc = ExactMatrix::zeros(&field, rows, cols);
        for set in subsets_of_size(b, self.l) {
            let top = set.last().copied();
            let mut term = ExactMatrix::identity(&field, 1);
            for (i, p) in parts.iter().enumerate() {
                let factor = if set.contains(&i) {
                    p.low.clone()
                } else if top.is_some_and(|t| i < t) {
                    p.sparse.to_dense()
                } else {
                    p.low.apply_changes(&p.sparse, false)?
                };
                term = term.kronecker(&factor)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// Parts of a certificate as a split factor: `L = M - E`.
pub(crate) fn split_part(matrix: &ExactMatrix, p: &Parts) -> Result<SplitPart> {
    Ok(SplitPart { low: matrix.apply_changes(&p.changes, true)?, sparse: p.changes.clone(), rank: p.rank })
}

/// Changes for `X Pi` from changes for `X`, where `Pi` permutes columns by
/// `perm`: entry `(x, perm[y])` of `E_X` moves to `(x, y)`.
pub(crate) fn permute_columns(e: &SparseChanges, perm: &[usize]) -> Result<SparseChanges> {
    Ok(e.scale_and_permute(None, None, None, Some(perm))?)
}

/// Changes for `X` from changes for `X'` with `X[x, y] = X'[rows[x], cols[y]]`.
pub(crate) fn pull_back(e: &SparseChanges, rows: &[usize], cols: &[usize]) -> Result<SparseChanges> {
    Ok(e.scale_and_permute(None, None, Some(rows), Some(cols))?)
}
