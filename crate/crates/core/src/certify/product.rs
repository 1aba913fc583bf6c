//! Certificates for Kronecker products `H_{t_1,a_1} (x) ... (x) H_{t_k,a_k}`.

use super::gwh::{gwh_parts, plan_feasible};
use super::transfer::{binomial_split, kronecker_parts, split_part, Parts};
use super::{field_with_roots, half_order, Certificate, CertifyError, Provenance, Result};
use crate::field::Field;
use crate::linalg::SparseChanges;
use crate::numtheory::gcd;
use crate::structured::{gwh, MatrixDescriptor, MatrixKind};
use crate::tuples::m_from_epsilon;

/// Factors `(t_i, a_i)` of `P = prod t_i^(a_i)` with the thresholds of the
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductPlan {
    /// `(t_i, a_i)` with `t_i` non-decreasing.
    pub factors: Vec<(u64, usize)>,
    /// Per-factor symmetric-plan parameter; derived from `epsilon` when absent.
    pub m: Option<Vec<usize>>,
    /// Factors without a feasible plan are carried unchanged while their
    /// product stays at most `P^epsilon`.
    pub epsilon: f64,
    /// Bucket base `k`: factor `t` lies in bucket `j` when
    /// `k^(2^(j-1)) <= t < k^(2^j)`, with bucket 0 below `k`.
    pub bucket_base: u64,
    /// Threshold `l` of the binomial split inside a bucket.
    pub split_threshold: usize,
}

impl ProductPlan {
    pub fn new(factors: Vec<(u64, usize)>, epsilon: f64) -> Result<Self> {
        let plan = Self { factors, m: None, epsilon, bucket_base: 2, split_threshold: 1 };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(CertifyError::Precondition("no factors".into()));
        }
        if self.factors.iter().any(|&(t, a)| t < 2 || a == 0) {
            return Err(CertifyError::Precondition("factors need t >= 2 and a >= 1".into()));
        }
        if self.factors.windows(2).any(|w| w[0].0 > w[1].0) {
            return Err(CertifyError::Precondition("factor bases must be non-decreasing".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(CertifyError::Precondition(format!("epsilon {} outside (0, 1]", self.epsilon)));
        }
        if self.bucket_base < 2 || self.split_threshold == 0 {
            return Err(CertifyError::Precondition("bucket base >= 2 and split threshold >= 1 required".into()));
        }
        if let Some(m) = &self.m {
            if m.len() != self.factors.len() {
                return Err(CertifyError::Precondition("one m per factor required".into()));
            }
        }
        Ok(())
    }

    /// `ln P`.
    pub fn log_p(&self) -> f64 {
        self.factors.iter().map(|&(t, a)| a as f64 * (t as f64).ln()).sum()
    }

    /// `L = ceil(2 log log P)`, the number of buckets that can be occupied.
    pub fn levels(&self) -> usize {
        let lp = self.log_p();
        if lp <= 1.0 {
            1
        } else {
            (2.0 * lp.ln()).ceil().max(1.0) as usize
        }
    }

    /// Dimension of the product matrix.
    pub fn order(&self) -> usize {
        self.factors.iter().map(|&(t, a)| (t as usize).pow(a as u32)).product()
    }

    pub fn m_for(&self, i: usize) -> usize {
        let (t, a) = self.factors[i];
        match &self.m {
            Some(m) => m[i],
            None => m_from_epsilon(t as u32, a, self.epsilon),
        }
    }

    pub fn feasible(&self, i: usize) -> bool {
        let (t, a) = self.factors[i];
        plan_feasible(t, a, self.m_for(i))
    }

    pub fn bucket_of(&self, t: u64) -> usize {
        let k = self.bucket_base as f64;
        let mut j = 0;
        while (t as f64) >= k.powf(2f64.powi(j as i32)) {
            j += 1;
        }
        j
    }

    /// Consecutive factor indices sharing a bucket.
    pub fn buckets(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for (i, &(t, _)) in self.factors.iter().enumerate() {
            let b = self.bucket_of(t);
            if last == Some(b) {
                out.last_mut().unwrap().push(i);
            } else {
                out.push(vec![i]);
                last = Some(b);
            }
        }
        out
    }

    /// Root orders the certificate field must host.
    pub fn root_orders(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (i, &(t, _)) in self.factors.iter().enumerate() {
            out.push(t);
            if self.feasible(i) {
                out.push(half_order(t));
            }
        }
        out
    }

    pub fn descriptor(&self, field: &Field) -> MatrixDescriptor {
        let factors = self.factors.iter().map(|&(d, n)| MatrixKind::Gwh { d, n }).collect();
        MatrixDescriptor::new(MatrixKind::Kronecker { factors }, field)
    }
}

/// Parts of the product certificate with changes over `cert_field`, where the
/// matrix is realized over `desc_field`.
pub(crate) fn product_parts(plan: &ProductPlan, desc_field: &Field, cert_field: &Field) -> Result<Parts> {
    plan.validate()?;
    if desc_field.is_finite() {
        let p = desc_field.characteristic();
        if let Some(&(t, _)) = plan.factors.iter().find(|&&(t, _)| gcd(t, p) != 1) {
            return Err(CertifyError::Precondition(format!("gcd({t}, {p}) != 1")));
        }
    }
    let n = plan.order();
    if !(0..plan.factors.len()).any(|i| plan.feasible(i)) {
        let mut p = Provenance::new("no factor admits a symmetric plan: trivial certificate");
        p.degenerate = true;
        return Ok(Parts { changes: SparseChanges::empty(cert_field, n, n), rank: n, sparsity: 0, provenance: p });
    }
    let mut carried_log = 0.0;
    for (i, &(t, a)) in plan.factors.iter().enumerate() {
        if !plan.feasible(i) {
            carried_log += a as f64 * (t as f64).ln();
            if carried_log > plan.epsilon * plan.log_p() + 1e-9 {
                return Err(CertifyError::Infeasible(format!(
                    "factor t = {t} (a = {a}, m = {}) has no symmetric plan and the carried product exceeds P^{}",
                    plan.m_for(i),
                    plan.epsilon
                )));
            }
        }
    }
    let mut acc: Option<(Parts, usize)> = None;
    for bucket in plan.buckets() {
        let mut split = Vec::new();
        for &i in &bucket {
            let (t, a) = plan.factors[i];
            let m = gwh(t, a, desc_field)?.embed_into(cert_field)?;
            let parts = if plan.feasible(i) {
                let omega = desc_field.embed(&desc_field.primitive_root_of_unity(t)?.value, cert_field)?;
                gwh_parts(t, a, plan.m_for(i), &omega, cert_field)?
            } else {
                Parts {
                    changes: SparseChanges::from_dense(&m),
                    rank: 0,
                    sparsity: m.rows(),
                    provenance: Provenance::new(format!("carried H_{{{t},{a}}} unchanged")),
                }
            };
            split.push((split_part(&m, &parts)?, parts.provenance));
        }
        let dim: usize = split.iter().map(|(s, _)| s.low.rows()).product();
        let l = plan.split_threshold.min(split.len());
        let pieces: Vec<_> = split.iter().map(|(s, _)| s.clone()).collect();
        let b = binomial_split(&pieces, l)?;
        let mut prov = Provenance::new(format!("binomial split of {} factors with l = {l}", pieces.len()));
        for (_, p) in &split {
            prov = prov.merge(p);
        }
        let bucket_parts = Parts { changes: b.sparse, rank: b.rank_bound, sparsity: b.sparsity_bound, provenance: prov };
        acc = Some(match acc {
            None => (bucket_parts, dim),
            Some((prev, prev_dim)) => (kronecker_parts(&prev, prev_dim, &bucket_parts, dim)?, prev_dim * dim),
        });
    }
    let (mut parts, _) = acc.expect("at least one bucket");
    parts.rank = parts.rank.min(n);
    Ok(parts)
}

/// Certificate for the Kronecker product of the plan's Fourier matrices over
/// `field`, verified exactly.
pub fn productbound_decompose(plan: &ProductPlan, field: &Field) -> Result<Certificate> {
    for &(t, _) in &plan.factors {
        if !field.has_root_of_unity(t) {
            return Err(CertifyError::Precondition(format!("{field} has no primitive {t}-th root")));
        }
    }
    let cert_field = field_with_roots(field, &plan.root_orders())?;
    let parts = product_parts(plan, field, &cert_field)?;
    parts.into_cert(plan.descriptor(field), &cert_field)?.verified()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify;

    #[test]
    fn single_factor_matches_hadamard() {
        let q = Field::rationals();
        let mut plan = ProductPlan::new(vec![(2, 6)], 0.5).unwrap();
        plan.m = Some(vec![2]);
        let cert = productbound_decompose(&plan, &q).unwrap();
        let direct = crate::certify::gwh_decompose(2, 6, 2, &q).unwrap();
        assert_eq!(verify(&cert).achieved_rank, verify(&direct).achieved_rank);
    }

    #[test]
    fn carried_factor_within_budget() {
        let f = Field::cyclotomic(6).unwrap();
        let mut plan = ProductPlan::new(vec![(2, 4), (3, 2)], 0.5).unwrap();
        plan.m = Some(vec![1, 1]);
        let cert = productbound_decompose(&plan, &f).unwrap();
        assert_eq!(cert.shape(), (144, 144));
        assert!(!cert.is_degenerate());
    }

    #[test]
    fn infeasible_carry_is_reported() {
        let q = Field::cyclotomic(3).unwrap();
        let mut plan = ProductPlan::new(vec![(2, 2), (3, 2)], 0.2).unwrap();
        plan.m = Some(vec![1, 1]);
        let err = productbound_decompose(&plan, &q).unwrap_err();
        assert!(err.to_string().contains("t = 3"));
    }
}
