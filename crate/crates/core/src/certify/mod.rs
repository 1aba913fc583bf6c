//! Certificates `(M, E, r, s)` asserting `rank(M - E) <= r` with at most `s`
//! nonzeros of `E` in every row and column, the constructions that produce
//! them, and the exact verifier.

mod abelian;
mod descent;
mod dft;
mod gwh;
mod product;
mod reduction;
mod transfer;

pub use abelian::{abelian_decompose, AbelianPlan};
pub use descent::{conjugate_descent, trace_descend, DescentWeight};
pub use dft::{
    ambient_by_search, circulant_decompose, dft_any_decompose, dft_blocks, dft_decompose, toeplitz_decompose, Block, CirculantPlan,
    BlockParams, DftBlockPlan, DftBlocks, SubsetBlocks,
};
pub use gwh::{general_group_fn_decompose, gwh_decompose, gwh_finite_field, gwh_symmetric_decompose, solve_symmetric_changes};
pub use product::{productbound_decompose, ProductPlan};
pub use reduction::{
    product_formulas, reduction_for_cyclic, reduction_for_small_power, reduction_product, reduction_to_certificate, ReductionData,
};
pub use transfer::{binomial_split, diagonalization_transfer, kronecker_transfer, sandwich_transfer, BinomialSplit, Side, SplitPart};

use thiserror::Error;

use crate::field::{Field, FieldDescriptor, FieldError, RootOfUnity, Value};
use crate::linalg::{ExactMatrix, LinalgError, SparseChanges, SparsityReport};
use crate::numtheory::{gcd, lcm, ord_mod, NumberTheoryError};
use crate::structured::{AbelianGroupSpec, MatrixDescriptor, MatrixKind, StructureError};
use crate::tuples::TupleError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction infeasible: {0}")]
    Infeasible(String),
    #[error("input certificate does not verify: {0}")]
    Unverified(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, CertifyError>;

/// How a certificate was produced. Ignored by [`verify`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub steps: Vec<String>,
    /// No changes, or a rank claim equal to the full dimension.
    pub degenerate: bool,
}

impl Provenance {
    pub fn new(step: impl Into<String>) -> Self {
        Self { steps: vec![step.into()], degenerate: false }
    }

    pub fn then(mut self, step: impl Into<String>) -> Self {
        self.steps.push(step.into());
        self
    }

    pub fn merge(mut self, other: &Provenance) -> Self {
        self.steps.extend(other.steps.iter().map(|s| format!("  {s}")));
        self.degenerate |= other.degenerate;
        self
    }
}

/// `matrix` is realized in its own field, which must embed into `field`; the
/// changes live in `field`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub matrix: MatrixDescriptor,
    pub field: Field,
    pub changes: SparseChanges,
    pub claimed_rank: usize,
    pub claimed_regular_sparsity: usize,
    pub provenance: Provenance,
}

impl Certificate {
    /// Builds a certificate, capping the claims at the trivial bounds and
    /// marking degenerate outcomes.
    pub fn new(
        matrix: MatrixDescriptor,
        field: &Field,
        changes: SparseChanges,
        claimed_rank: usize,
        claimed_regular_sparsity: usize,
        provenance: Provenance,
    ) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if changes.shape() != (rows, cols) {
            return Err(CertifyError::Precondition(format!(
                "changes {:?} for a {rows}x{cols} matrix",
                changes.shape()
            )));
        }
        if changes.field() != field {
            return Err(CertifyError::Precondition(format!(
                "changes over {} for a certificate over {field}",
                changes.field()
            )));
        }
        if !matrix.field.embeds_into(field) {
            return Err(FieldError::NoEmbedding(matrix.field.descriptor().clone(), field.descriptor().clone()).into());
        }
        let claimed_rank = claimed_rank.min(rows.min(cols));
        let claimed_regular_sparsity = claimed_regular_sparsity.min(rows.max(cols));
        let mut provenance = provenance;
        provenance.degenerate |= changes.is_empty() || claimed_rank == rows.min(cols);
        Ok(Self { matrix, field: field.clone(), changes, claimed_rank, claimed_regular_sparsity, provenance })
    }

    /// `E = 0`, `r = min(rows, cols)`.
    pub fn trivial(matrix: MatrixDescriptor, field: &Field, step: &str) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        let changes = SparseChanges::empty(field, rows, cols);
        Self::new(matrix, field, changes, rows.min(cols), 0, Provenance::new(step))
    }

    /// `E = M`, `r = 0`: every entry changed.
    pub fn full_change(matrix: MatrixDescriptor, field: &Field, step: &str) -> Result<Self> {
        let m = realize_in(&matrix, field)?;
        let changes = SparseChanges::from_dense(&m);
        let s = changes.sparsity().regular();
        let mut p = Provenance::new(step);
        p.degenerate = true;
        Self::new(matrix, field, changes, 0, s, p)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.matrix.shape()
    }

    /// The matrix over the certificate field.
    pub fn realize(&self) -> Result<ExactMatrix> {
        realize_in(&self.matrix, &self.field)
    }

    /// `M - E`.
    pub fn residual(&self) -> Result<ExactMatrix> {
        Ok(self.realize()?.apply_changes(&self.changes, true)?)
    }

    /// Replaces both claims by the verified values.
    pub fn tighten(mut self) -> Result<Self> {
        let report = verify(&self);
        if let Some(err) = report.error {
            return Err(CertifyError::Unverified(err));
        }
        self.claimed_rank = report.achieved_rank;
        self.claimed_regular_sparsity = report.achieved_sparsity.regular();
        Ok(self)
    }

    /// Verifies, failing with the report's summary.
    pub fn verified(self) -> Result<Self> {
        let report = verify(&self);
        if report.passed() {
            Ok(self)
        } else {
            Err(CertifyError::Unverified(report.summary()))
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.provenance.degenerate
    }
}

pub(crate) fn realize_in(desc: &MatrixDescriptor, field: &Field) -> Result<ExactMatrix> {
    let m = desc.realize()?;
    if &desc.field == field {
        Ok(m)
    } else {
        Ok(m.embed_into(field)?)
    }
}

/// Outcome of [`verify`]. Achieved values are computed from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub claimed_rank: usize,
    pub claimed_regular_sparsity: usize,
    pub achieved_rank: usize,
    pub achieved_sparsity: SparsityReport,
    pub rank_ok: bool,
    pub sparsity_ok: bool,
    /// Set when the matrix could not be rebuilt or the changes do not fit it.
    pub error: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.rank_ok && self.sparsity_ok
    }

    pub fn summary(&self) -> String {
        if let Some(e) = &self.error {
            return format!("error: {e}");
        }
        let mut parts = Vec::new();
        parts.push(format!(
            "rank: claimed {} achieved {} [{}]",
            self.claimed_rank,
            self.achieved_rank,
            if self.rank_ok { "ok" } else { "FAIL" }
        ));
        parts.push(format!(
            "sparsity: claimed {} achieved row {} col {} [{}]",
            self.claimed_regular_sparsity,
            self.achieved_sparsity.max_per_row,
            self.achieved_sparsity.max_per_col,
            if self.sparsity_ok { "ok" } else { "FAIL" }
        ));
        parts.join("; ")
    }
}

/// Rebuilds `M` from the descriptor and checks both claims by exact
/// computation. Provenance is not consulted.
pub fn verify(cert: &Certificate) -> VerificationReport {
    verify_against(cert, None)
}

/// As [`verify`], with `M` supplied instead of rebuilt.
pub fn verify_against(cert: &Certificate, matrix: Option<&ExactMatrix>) -> VerificationReport {
    let achieved_sparsity = cert.changes.sparsity();
    let mut report = VerificationReport {
        claimed_rank: cert.claimed_rank,
        claimed_regular_sparsity: cert.claimed_regular_sparsity,
        achieved_rank: 0,
        achieved_sparsity,
        rank_ok: false,
        sparsity_ok: achieved_sparsity.max_per_row <= cert.claimed_regular_sparsity
            && achieved_sparsity.max_per_col <= cert.claimed_regular_sparsity,
        error: None,
    };
    let m = match matrix {
        Some(m) if m.field() == &cert.field => Ok(m.clone()),
        Some(m) => m.embed_into(&cert.field).map_err(CertifyError::from),
        None => cert.realize(),
    };
    let residual = m.and_then(|m| m.apply_changes(&cert.changes, true).map_err(CertifyError::from));
    match residual {
        Ok(res) => {
            report.achieved_rank = res.rank();
            report.rank_ok = report.achieved_rank <= cert.claimed_rank;
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Ensures `field` is one of the fields a certificate is stated over.
pub(crate) fn same_field(a: &Field, b: &Field) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(FieldError::Mismatch(a.descriptor().clone(), b.descriptor().clone()).into())
    }
}

/// Smallest field of the same kind containing `base` and a primitive root of
/// unity of every order in `orders`. Finite extensions are built over prime
/// fields only.
pub fn field_with_roots(base: &Field, orders: &[u64]) -> Result<Field> {
    if orders.iter().all(|&n| base.has_root_of_unity(n)) {
        return Ok(base.clone());
    }
    let need = orders.iter().fold(1u64, |acc, &n| lcm(acc, n));
    match base.descriptor() {
        FieldDescriptor::Cyclotomic { order } => Ok(Field::cyclotomic(lcm(*order, need))?),
        FieldDescriptor::Prime { p } => {
            let g = gcd(need, *p);
            if g != 1 {
                return Err(CertifyError::Precondition(format!(
                    "roots of order {need} do not exist in characteristic {p}"
                )));
            }
            Ok(Field::finite_of_degree(*p, ord_mod(*p, need)? as usize)?)
        }
        other => Err(CertifyError::Precondition(format!(
            "{other} lacks roots of order {need}; extensions are built over prime fields only"
        ))),
    }
}

/// Order of the square root `zeta` of a primitive `d`-th root used when
/// rescaling Fourier matrices.
pub(crate) fn half_order(d: u64) -> u64 {
    if d % 2 == 1 {
        d
    } else {
        2 * d
    }
}

/// `zeta` with `zeta^2 = omega` for the given primitive `d`-th root.
pub(crate) fn sqrt_root(omega: &Value, d: u64, field: &Field) -> Result<RootOfUnity> {
    if d % 2 == 1 {
        return Ok(RootOfUnity { value: field.pow(omega, d.div_ceil(2) as u128), order: d });
    }
    let eta = field.primitive_root_of_unity(2 * d)?;
    let mut cur = field.one();
    for _ in 0..2 * d {
        if &field.mul(&cur, &cur) == omega {
            return Ok(RootOfUnity { value: cur, order: 2 * d });
        }
        cur = field.mul(&cur, &eta.value);
    }
    Err(CertifyError::Invariant(format!("no square root of the given {d}-th root in {field}")))
}

/// `p[y] = -y`; column order of `X Pi` for a group character table `X`.
pub(crate) fn negation(group: &AbelianGroupSpec) -> Vec<usize> {
    (0..group.order()).map(|y| group.neg(y)).collect()
}

/// The same matrix described over `target`. Value-free finite-field kinds
/// become explicit, because the canonical roots of two finite fields need
/// not correspond under the embedding.
pub(crate) fn embed_descriptor(desc: &MatrixDescriptor, target: &Field) -> Result<MatrixDescriptor> {
    if &desc.field == target {
        return Ok(desc.clone());
    }
    if desc.field.is_finite() {
        let m = realize_in(desc, target)?;
        let (rows, cols) = m.shape();
        return Ok(MatrixDescriptor::new(MatrixKind::Explicit { rows, cols, data: m.into_data() }, target));
    }
    Ok(MatrixDescriptor::new(embed_kind(&desc.kind, &desc.field, target)?, target))
}

fn embed_kind(kind: &MatrixKind, from: &Field, to: &Field) -> Result<MatrixKind> {
    let e = |v: &[Value]| -> Result<Vec<Value>> {
        v.iter().map(|x| from.embed(x, to).map_err(CertifyError::from)).collect()
    };
    Ok(match kind {
        MatrixKind::Circulant { top_row } => MatrixKind::Circulant { top_row: e(top_row)? },
        MatrixKind::AdjustedCirculant { f } => MatrixKind::AdjustedCirculant { f: e(f)? },
        MatrixKind::Toeplitz { diagonals } => MatrixKind::Toeplitz { diagonals: e(diagonals)? },
        MatrixKind::Hankel { antidiagonals } => MatrixKind::Hankel { antidiagonals: e(antidiagonals)? },
        MatrixKind::GCirculant { group, f } => MatrixKind::GCirculant { group: group.clone(), f: e(f)? },
        MatrixKind::AdjustedGCirculant { group, f } => {
            MatrixKind::AdjustedGCirculant { group: group.clone(), f: e(f)? }
        }
        MatrixKind::VandermondeGeometric { a, b, n } => {
            MatrixKind::VandermondeGeometric { a: from.embed(a, to)?, b: from.embed(b, to)?, n: *n }
        }
        MatrixKind::Explicit { rows, cols, data } => MatrixKind::Explicit { rows: *rows, cols: *cols, data: e(data)? },
        MatrixKind::Kronecker { factors } => MatrixKind::Kronecker {
            factors: factors.iter().map(|k| embed_kind(k, from, to)).collect::<Result<_>>()?,
        },
        MatrixKind::Gwh { .. } | MatrixKind::Dft { .. } | MatrixKind::DftG { .. } => kind.clone(),
    })
}

/// The same matrix described over a subfield containing its entries.
pub(crate) fn restrict_descriptor(desc: &MatrixDescriptor, base: &Field) -> Result<MatrixDescriptor> {
    if &desc.field == base {
        return Ok(desc.clone());
    }
    let m = desc.realize()?.restrict_to(base)?;
    let (rows, cols) = m.shape();
    Ok(MatrixDescriptor::new(MatrixKind::Explicit { rows, cols, data: m.into_data() }, base))
}

/// Solves `A X = B` for `A` of full column rank.
pub(crate) fn solve_left(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    let f = a.field();
    let k = a.cols();
    if a.rows() != b.rows() {
        return Err(CertifyError::Invariant("solve_left: row mismatch".into()));
    }
    let (red, pivots) = ExactMatrix::hstack(&[a, b])?.rref();
    if pivots.len() != k || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(CertifyError::Invariant("right-hand side outside the column space".into()));
    }
    Ok(ExactMatrix::from_fn(f, k, b.cols(), |i, j| red.get(i, k + j).clone()))
}

/// Solves `X B = C` for `B` of full row rank.
pub(crate) fn solve_right(b: &ExactMatrix, c: &ExactMatrix) -> Result<ExactMatrix> {
    Ok(solve_left(&b.transpose(), &c.transpose())?.transpose())
}

/// Vertical concatenation.
pub(crate) fn vstack(parts: &[&ExactMatrix]) -> Result<ExactMatrix> {
    let t: Vec<ExactMatrix> = parts.iter().map(|p| p.transpose()).collect();
    Ok(ExactMatrix::hstack(&t.iter().collect::<Vec<_>>())?.transpose())
}

/// `L = U V` with `U` the pivot columns of `L` and `V` the nonzero rows of its
/// reduced echelon form.
pub(crate) fn rank_factor(l: &ExactMatrix) -> (ExactMatrix, ExactMatrix) {
    let (red, pivots) = l.rref();
    let u = l.submatrix(&(0..l.rows()).collect::<Vec<_>>(), &pivots);
    let v = red.submatrix(&(0..pivots.len()).collect::<Vec<_>>(), &(0..l.cols()).collect::<Vec<_>>());
    (u, v)
}
