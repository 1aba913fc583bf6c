//! Certificates for adjusted circulants of arbitrary finite abelian groups.

use super::dft::{dft_any_decompose, dft_decompose, BlockParams, CirculantPlan, DftBlockPlan};
use super::gwh::{gwh_decompose, plan_feasible, scaled_fourier_diagonal};
use super::reduction::{reduction_for_cyclic, reduction_for_small_power, reduction_product, reduction_to_certificate};
use super::transfer::{kronecker_parts, permute_columns, sandwich_parts, Parts};
use super::{field_with_roots, negation, Certificate, CertifyError, Provenance, Result};
use crate::field::{Field, FieldDescriptor, Value};
use crate::numtheory::{gcd, is_squarefree, lcm, FactorableWitness};
use crate::structured::{AbelianGroupSpec, MatrixDescriptor, MatrixKind};

/// Parameters of [`abelian_decompose`].
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianPlan {
    /// Symmetric-plan parameter for runs of equal factors `Z_d^k`.
    pub m: usize,
    /// Thresholds for the squarefree and arbitrary-size Fourier certificates.
    pub params: BlockParams,
    /// Ambient size for cyclic factors that are not squarefree.
    pub ambient: Option<u64>,
    /// Threshold `l` when composing reductions over a finite field.
    pub split_threshold: usize,
}

impl Default for AbelianPlan {
    fn default() -> Self {
        Self { m: 1, params: BlockParams::default(), ambient: None, split_threshold: 1 }
    }
}

/// Runs of equal consecutive invariant factors, as `(d, k)`.
fn runs(group: &AbelianGroupSpec) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &n in &group.invariant_factors {
        match out.last_mut() {
            Some((d, k)) if *d == n => *k += 1,
            _ => out.push((n, 1)),
        }
    }
    out
}

fn cyclo_order(f: &Field) -> u64 {
    match f.descriptor() {
        FieldDescriptor::Cyclotomic { order } => *order,
        _ => 1,
    }
}

/// Certificate for `M_G(f)`.
///
/// Over characteristic zero, `M_G(f) = (X Pi) D (X Pi)` with `X` the
/// Kronecker product of certificates for the Fourier matrices of the runs
/// `Z_d^k`. Over a finite field with `gcd(|G|, q) = 1`, reductions for the
/// runs are composed and evaluated at `f`.
pub fn abelian_decompose(group: &AbelianGroupSpec, f: &[Value], field: &Field, plan: &AbelianPlan) -> Result<Certificate> {
    if f.len() != group.order() {
        return Err(CertifyError::Precondition(format!("f has {} values, expected {}", f.len(), group.order())));
    }
    if field.is_finite() {
        finite(group, f, field, plan)
    } else {
        char_zero(group, f, field, plan)
    }
}

fn finite(group: &AbelianGroupSpec, f: &[Value], field: &Field, plan: &AbelianPlan) -> Result<Certificate> {
    let p = field.characteristic();
    if gcd(group.order() as u64, p) != 1 {
        return Err(CertifyError::Precondition(format!("gcd(|G| = {}, {p}) != 1", group.order())));
    }
    let mut parts = Vec::new();
    for (d, k) in runs(group) {
        if k > 1 && plan_feasible(d, k, plan.m) {
            parts.push(reduction_for_small_power(d, k, plan.m, field)?);
        } else {
            for _ in 0..k {
                parts.push(reduction_for_cyclic(d, field, plan.ambient, &plan.params)?);
            }
        }
    }
    let l = plan.split_threshold.min(parts.len());
    let data = reduction_product(&parts, l)?;
    reduction_to_certificate(&data, f, field)?.verified()
}

fn char_zero(group: &AbelianGroupSpec, f: &[Value], field: &Field, plan: &AbelianPlan) -> Result<Certificate> {
    let k0 = field_with_roots(field, &[group.exponent()])?;
    let mut certs = Vec::new();
    for (d, k) in runs(group) {
        if plan_feasible(d, k, plan.m) {
            certs.push((d.pow(k as u32) as usize, gwh_decompose(d, k, plan.m, &k0)?));
            continue;
        }
        for _ in 0..k {
            let cert = if is_squarefree(d) {
                dft_decompose(&DftBlockPlan { witness: FactorableWitness::from_squarefree(d)?, params: plan.params.clone() }, &k0)?
            } else {
                dft_any_decompose(d, &k0, &CirculantPlan { ambient: plan.ambient, params: plan.params.clone() })?
            };
            certs.push((d as usize, cert));
        }
    }
    let order = certs.iter().fold(cyclo_order(&k0), |acc, (_, c)| lcm(acc, cyclo_order(&c.field)));
    let ext = Field::cyclotomic(order)?;
    let mut acc: Option<(Parts, usize)> = None;
    for (dim, cert) in &certs {
        let mut p = Parts::from_cert(cert);
        p.changes = p.changes.embed_into(&ext)?;
        acc = Some(match acc {
            None => (p, *dim),
            Some((prev, pd)) => (kronecker_parts(&prev, pd, &p, *dim)?, pd * dim),
        });
    }
    let (x, _) = acc.expect("group has a factor");
    let a = Parts { changes: permute_columns(&x.changes, &negation(group))?, ..x };
    let fk: Vec<Value> = f.iter().map(|v| field.embed(v, &ext)).collect::<std::result::Result<_, _>>()?;
    let diag = scaled_fourier_diagonal(group, &fk, &ext)?;
    let mut out = sandwich_parts(&a, &diag, &a)?;
    out.provenance = Provenance::new(format!("transfer through (X Pi) D (X Pi) for {:?}", group.invariant_factors))
        .merge(&out.provenance);
    out.into_cert(
        MatrixDescriptor::new(MatrixKind::AdjustedGCirculant { group: group.clone(), f: f.to_vec() }, field),
        &ext,
    )?
    .verified()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_group_equal_factors() {
        let g = AbelianGroupSpec::new(vec![2, 2, 3, 5, 5]).unwrap();
        assert_eq!(runs(&g), vec![(2, 2), (3, 1), (5, 2)]);
    }

    #[test]
    fn mixed_group_over_rationals() {
        let q = Field::rationals();
        let g = AbelianGroupSpec::new(vec![2, 3]).unwrap();
        let f: Vec<Value> = (0..6).map(|i| q.from_i64(i * i - 2)).collect();
        let cert = abelian_decompose(&g, &f, &q, &AbelianPlan::default()).unwrap();
        assert_eq!(cert.shape(), (6, 6));
    }

    #[test]
    fn cyclic_over_finite_field() {
        let f5 = Field::prime(5).unwrap();
        let g = AbelianGroupSpec::cyclic(3).unwrap();
        let f: Vec<Value> = [1, 2, 4].iter().map(|&v| f5.from_i64(v)).collect();
        let cert = abelian_decompose(&g, &f, &f5, &AbelianPlan::default()).unwrap();
        assert_eq!(cert.field, f5);
    }
}
