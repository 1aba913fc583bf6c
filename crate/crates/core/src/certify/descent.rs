//! Descent of certificates from `F_q[gamma]` to `F_q` by weighted sums of
//! Frobenius conjugates.

use super::{restrict_descriptor, Certificate, CertifyError, Provenance, Result};
use crate::field::{power_sum_weight, Field, Value};
use crate::linalg::{ExactMatrix, SparseChanges};

/// `c = gamma^k` with `Tr(c) = sum_i sigma_i(c)` nonzero, for the generator
/// `gamma` of the extension.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentWeight {
    pub k: u64,
    pub weight: Value,
    /// `Tr(c)`, an element of the base field embedded in the extension.
    pub trace: Value,
    /// Extension degree `g`.
    pub degree: usize,
}

impl DescentWeight {
    pub fn new(ext: &Field) -> Result<Self> {
        if !ext.is_finite() {
            return Err(CertifyError::Precondition(format!("{ext} is not finite")));
        }
        if ext.degree() == 1 {
            return Ok(Self { k: 0, weight: ext.one(), trace: ext.one(), degree: 1 });
        }
        let gamma = ext.element(ext.ext_generator()?);
        let conj = crate::field::frobenius_conjugates(&gamma)?;
        if conj.len() != ext.degree() {
            return Err(CertifyError::Invariant("generator has fewer conjugates than the degree".into()));
        }
        let (k, trace) = power_sum_weight(&conj)?;
        Ok(Self { k, weight: ext.pow(&gamma.value, k as u128), trace: trace.value, degree: conj.len() })
    }

    /// `Tr(c x) / Tr(c)`, which lies in the base field.
    pub fn descend(&self, ext: &Field, x: &Value) -> Result<Value> {
        // All g conjugates, with repetition when cx lies in a subfield.
        let mut cur = ext.mul(&self.weight, x);
        let mut sum = ext.zero();
        for _ in 0..self.degree {
            sum = ext.add(&sum, &cur);
            cur = ext.frobenius(&cur)?;
        }
        Ok(ext.div(&sum, &self.trace)?)
    }
}

/// Entrywise [`DescentWeight::descend`], restricted to `base`.
pub fn trace_descend(m: &ExactMatrix, w: &DescentWeight, base: &Field) -> Result<ExactMatrix> {
    let ext = m.field().clone();
    let data = m.data().iter().map(|v| w.descend(&ext, v)).collect::<Result<Vec<_>>>()?;
    Ok(ExactMatrix::new(&ext, m.rows(), m.cols(), data)?.restrict_to(base)?)
}

fn descend_changes(e: &SparseChanges, w: &DescentWeight, base: &Field) -> Result<SparseChanges> {
    let ext = e.field().clone();
    let mut out = SparseChanges::empty(base, e.rows(), e.cols());
    for ((i, j), v) in e.iter() {
        let d = w.descend(&ext, v)?;
        let r = ext.restrict(&d, base).map_err(|_| {
            CertifyError::Invariant(format!("descended entry at ({i}, {j}) is not Frobenius-fixed"))
        })?;
        out.set(i, j, r);
    }
    Ok(out)
}

/// Certificate over `base` from one over a degree-`g` extension whose matrix
/// has base-field entries: `M - E' = Tr(c (M - E)) / Tr(c)` is a sum of `g`
/// conjugates of `M - E`, so the rank claim becomes `g r` and the support
/// does not grow.
pub fn conjugate_descent(cert: &Certificate, base: &Field) -> Result<Certificate> {
    let ext = &cert.field;
    if ext == base {
        return Ok(cert.clone());
    }
    if !base.embeds_into(ext) || !base.is_finite() {
        return Err(CertifyError::Precondition(format!("{base} is not a finite subfield of {ext}")));
    }
    let matrix = restrict_descriptor(&cert.matrix, base).map_err(|_| {
        CertifyError::Precondition(format!("matrix entries do not all lie in {base}"))
    })?;
    let w = DescentWeight::new(ext)?;
    let changes = descend_changes(&cert.changes, &w, base)?;
    let provenance = Provenance::new(format!("descent from {ext} to {base} with weight gamma^{}", w.k))
        .merge(&cert.provenance);
    Certificate::new(
        matrix,
        base,
        changes,
        cert.claimed_rank * w.degree,
        cert.claimed_regular_sparsity,
        provenance,
    )
}
