//! Certificates for `H_{d,n}` and for adjusted `Z_d^n`-circulants, built by
//! changing a symmetric function on few permutation classes so that its
//! Fourier transform vanishes on many points.

use std::collections::BTreeMap;

use super::transfer::{permute_columns, sandwich_parts, Parts};
use super::{field_with_roots, half_order, negation, sqrt_root, Certificate, CertifyError, Provenance, Result};
use crate::field::{Field, RootOfUnity, Value};
use crate::linalg::{ExactMatrix, SparseChanges};
use crate::numtheory::gcd;
use crate::structured::{fourier_diagonal, AbelianGroupSpec, MatrixDescriptor, MatrixKind};
use crate::tuples::{build_s_plan, count_perm_s, in_perm_s, PfEvaluator, SPlan, Tuple, TupleClass};

/// Class of every tuple index of `Z_d^n`, as a position in `classes`.
fn class_index(plan: &SPlan) -> (Vec<TupleClass>, Vec<usize>) {
    let size = plan.order();
    let mut pos: BTreeMap<TupleClass, usize> = BTreeMap::new();
    let mut classes = Vec::new();
    let of = (0..size)
        .map(|k| {
            let c = Tuple::from_index(plan.d, plan.n, k).class();
            *pos.entry(c.clone()).or_insert_with(|| {
                classes.push(c);
                classes.len() - 1
            })
        })
        .collect();
    (classes, of)
}

fn check_symmetric(plan: &SPlan, f: &[Value], of: &[usize], classes: usize) -> Result<()> {
    if f.len() != plan.order() {
        return Err(CertifyError::Precondition(format!("f has {} values, expected {}", f.len(), plan.order())));
    }
    let mut seen: Vec<Option<&Value>> = vec![None; classes];
    for (k, v) in f.iter().enumerate() {
        match seen[of[k]] {
            None => seen[of[k]] = Some(v),
            Some(w) if w == v => {}
            Some(_) => {
                return Err(CertifyError::Precondition(format!(
                    "f is not symmetric: differs inside the class of {:?}",
                    Tuple::from_index(plan.d, plan.n, k).entries
                )))
            }
        }
    }
    Ok(())
}

/// `f'` equal to `f` off `T_{dm}` and constant on each class of `T_{dm}`, with
/// `P_{f'}(omega^[R]) = 0` for every representative `R` of `S`.
///
/// One unknown per class of `T_{dm}`, one equation per class met by `S`.
/// Free unknowns keep their value from `f`.
pub fn solve_symmetric_changes(plan: &SPlan, f: &[Value], field: &Field, omega: &RootOfUnity) -> Result<Vec<Value>> {
    if omega.order != plan.d as u64 {
        return Err(CertifyError::Precondition(format!("root of order {} for d = {}", omega.order, plan.d)));
    }
    let (classes, of) = class_index(plan);
    check_symmetric(plan, f, &of, classes.len())?;
    let d = plan.d as usize;
    let powers: Vec<Value> = (0..d).map(|k| field.pow(&omega.value, k as u128)).collect();
    let t_pos: BTreeMap<&TupleClass, usize> = plan.t_support.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let col_of: Vec<Option<usize>> = classes.iter().map(|c| t_pos.get(c).copied()).collect();
    let reps: Vec<Tuple> = plan.s_classes().iter().map(TupleClass::representative).collect();
    let unknowns = plan.t_support.len();
    let mut a = ExactMatrix::zeros(field, reps.len(), unknowns);
    let mut rhs = Vec::with_capacity(reps.len());
    for (row, r) in reps.iter().enumerate() {
        // Exponent histograms per unknown and for the fixed part.
        let mut hist = vec![vec![0i64; d]; unknowns];
        let mut fixed = vec![field.zero(); d];
        for k in 0..plan.order() {
            let e = Tuple::from_index(plan.d, plan.n, k).dot(r) as usize;
            match col_of[of[k]] {
                Some(c) => hist[c][e] += 1,
                None => {
                    if !field.is_zero(&f[k]) {
                        fixed[e] = field.add(&fixed[e], &f[k]);
                    }
                }
            }
        }
        for (c, h) in hist.iter().enumerate() {
            let v = h.iter().zip(&powers).fold(field.zero(), |acc, (&cnt, w)| {
                if cnt == 0 {
                    acc
                } else {
                    field.add(&acc, &field.mul_int(w, cnt))
                }
            });
            a.set(row, c, v);
        }
        let s = fixed.iter().zip(&powers).fold(field.zero(), |acc, (c, w)| field.add(&acc, &field.mul(c, w)));
        rhs.push(field.neg(&s));
    }
    let original: Vec<Value> = plan
        .t_support
        .iter()
        .map(|c| f[c.representative().index()].clone())
        .collect();
    let x = a.solve(&rhs, Some(&original)).map_err(|e| match e {
        crate::linalg::LinalgError::Inconsistent => {
            CertifyError::Invariant("change system over T classes is inconsistent".into())
        }
        other => other.into(),
    })?;
    Ok((0..plan.order()).map(|k| col_of[of[k]].map_or_else(|| f[k].clone(), |c| x[c].clone())).collect())
}

/// Changes `M(f) - M(f')` of an adjusted `Z_d^n`-circulant.
fn circulant_difference(group: &AbelianGroupSpec, f: &[Value], g: &[Value], field: &Field) -> SparseChanges {
    let n = group.order();
    let mut e = SparseChanges::empty(field, n, n);
    for z in 0..n {
        let delta = field.sub(&f[z], &g[z]);
        if field.is_zero(&delta) {
            continue;
        }
        for x in 0..n {
            e.set(x, group.sub(z, x), delta.clone());
        }
    }
    e
}

/// Symmetric construction over `Z_d^n` with the given primitive root.
/// Returns `f'` and the parts of the certificate for `M(f)`.
fn symmetric_parts(plan: &SPlan, f: &[Value], field: &Field, omega: &RootOfUnity) -> Result<(Vec<Value>, Parts)> {
    let g = solve_symmetric_changes(plan, f, field, omega)?;
    let values = PfEvaluator::new(field, omega, plan.n)?.eval_all(&g)?;
    let mut vanishing = 0u128;
    for (k, v) in values.iter().enumerate() {
        let t = Tuple::from_index(plan.d, plan.n, k);
        if in_perm_s(plan, &t) {
            if !field.is_zero(v) {
                return Err(CertifyError::Invariant(format!("P_f' does not vanish at {:?}", t.entries)));
            }
            vanishing += 1;
        }
    }
    let expected = count_perm_s(plan);
    if vanishing != expected {
        return Err(CertifyError::Invariant(format!("{vanishing} vanishing points, expected {expected}")));
    }
    let rank = values.iter().filter(|v| !field.is_zero(v)).count();
    if rank as u128 > plan.order() as u128 - expected {
        return Err(CertifyError::Invariant("rank exceeds d^n - |perm(S)|".into()));
    }
    let group = AbelianGroupSpec::power(plan.d as u64, plan.n)?;
    let changes = circulant_difference(&group, f, &g, field);
    let provenance = Provenance::new(format!(
        "symmetric changes on T_{} classes (d={}, n={}, m={}): {} vanishing points",
        plan.d as usize * plan.m,
        plan.d,
        plan.n,
        plan.m,
        vanishing
    ));
    let sparsity = plan.t_size().min(usize::MAX as u128) as usize;
    Ok((g, Parts { changes, rank, sparsity, provenance }))
}

/// Certificate for the adjusted `Z_d^n`-circulant of a symmetric `f`, using
/// the canonical primitive `d`-th root of `field`.
pub fn gwh_symmetric_decompose(d: u32, n: usize, m: usize, f: &[Value], field: &Field) -> Result<Certificate> {
    let plan = build_s_plan(d, n, m)?;
    let omega = field.primitive_root_of_unity(d as u64)?;
    let (_, parts) = symmetric_parts(&plan, f, field, &omega)?;
    let group = AbelianGroupSpec::power(d as u64, n)?;
    parts.into_cert(MatrixDescriptor::new(MatrixKind::AdjustedGCirculant { group, f: f.to_vec() }, field), field)
}

/// Parts of a certificate for `H_{d,n}` built from `omega` inside `field`:
/// rescale to the adjusted circulant of `f(x) = zeta^(x.x)`, apply the
/// symmetric construction, and scale the changes back.
pub(crate) fn gwh_parts(d: u64, n: usize, m: usize, omega: &Value, field: &Field) -> Result<Parts> {
    let plan = build_s_plan(d as u32, n, m)?;
    let zeta = sqrt_root(omega, d, field)?;
    let group = AbelianGroupSpec::power(d, n)?;
    let size = group.order();
    let zpow: Vec<Value> = (0..zeta.order).map(|k| field.pow(&zeta.value, k as u128)).collect();
    let exps: Vec<usize> =
        (0..size).map(|i| (group.coords(i).iter().map(|c| c * c).sum::<u64>() % zeta.order) as usize).collect();
    let f_sym: Vec<Value> = exps.iter().map(|&e| zpow[e].clone()).collect();
    let inv: Vec<Value> = exps.iter().map(|&e| zpow[(zeta.order as usize - e) % zeta.order as usize].clone()).collect();
    let root = RootOfUnity { value: omega.clone(), order: d };
    let (_, parts) = symmetric_parts(&plan, &f_sym, field, &root)?;
    let changes = parts.changes.scale_and_permute(Some(&inv), Some(&inv), None, None)?;
    Ok(Parts { changes, provenance: parts.provenance.then("rescaled by zeta^(-I.I) on both sides"), ..parts })
}

/// Whether `Z_d^n` admits the symmetric plan with parameter `m`.
pub(crate) fn plan_feasible(d: u64, n: usize, m: usize) -> bool {
    m >= 1 && d as usize * m <= n
}

/// Certificate for `H_{d,n}` over `field`, with changes over the smallest
/// extension hosting the rescaling root.
pub fn gwh_decompose(d: u64, n: usize, m: usize, field: &Field) -> Result<Certificate> {
    if !field.has_root_of_unity(d) {
        return Err(CertifyError::Precondition(format!("{field} has no primitive {d}-th root")));
    }
    let cert_field = field_with_roots(field, &[d, half_order(d)])?;
    let omega = field.embed(&field.primitive_root_of_unity(d)?.value, &cert_field)?;
    let parts = gwh_parts(d, n, m, &omega, &cert_field)?;
    parts.into_cert(MatrixDescriptor::new(MatrixKind::Gwh { d, n }, field), &cert_field)
}

/// [`gwh_decompose`] over a finite field with `gcd(d, q) = 1`, extending the
/// base by degree `ord_{2d}(q)` or `ord_d(q)` when the roots are missing. The
/// matrix is described over the base when it hosts `omega`.
pub fn gwh_finite_field(d: u64, n: usize, m: usize, base: &Field) -> Result<Certificate> {
    if !base.is_finite() {
        return Err(CertifyError::Precondition(format!("{base} is not finite")));
    }
    let p = base.characteristic();
    if gcd(d, p) != 1 {
        return Err(CertifyError::Precondition(format!("gcd({d}, {p}) != 1")));
    }
    let cert_field = field_with_roots(base, &[d, half_order(d)])?;
    let desc_field = if base.has_root_of_unity(d) { base.clone() } else { cert_field.clone() };
    let omega = desc_field.embed(&desc_field.primitive_root_of_unity(d)?.value, &cert_field)?;
    let parts = gwh_parts(d, n, m, &omega, &cert_field)?;
    parts.into_cert(MatrixDescriptor::new(MatrixKind::Gwh { d, n }, &desc_field), &cert_field)
}

/// Certificate for the adjusted `Z_d^n`-circulant of any `f`:
/// `M(f) = (H Pi) D (H Pi) / d^(2n)` with `D` the Fourier diagonal, so the
/// `H_{d,n}` certificate transfers with rank doubled and sparsity squared.
pub fn general_group_fn_decompose(d: u64, n: usize, m: usize, f: &[Value], field: &Field) -> Result<Certificate> {
    let group = AbelianGroupSpec::power(d, n)?;
    if f.len() != group.order() {
        return Err(CertifyError::Precondition(format!("f has {} values, expected {}", f.len(), group.order())));
    }
    let cert_field = field_with_roots(field, &[d, half_order(d)])?;
    let omega = cert_field.primitive_root_of_unity(d)?.value;
    let h = gwh_parts(d, n, m, &omega, &cert_field)?;
    let a = Parts { changes: permute_columns(&h.changes, &negation(&group))?, ..h };
    let fk: Vec<Value> = f.iter().map(|v| field.embed(v, &cert_field)).collect::<std::result::Result<_, _>>()?;
    let diag = scaled_fourier_diagonal(&group, &fk, &cert_field)?;
    let mut out = sandwich_parts(&a, &diag, &a)?;
    out.provenance = out.provenance.then("transfer through (H Pi) D (H Pi)");
    out.into_cert(
        MatrixDescriptor::new(MatrixKind::AdjustedGCirculant { group, f: f.to_vec() }, field),
        &cert_field,
    )
}

/// Fourier diagonal divided by `|G|^2`, so that `M(f) = (X Pi) D (X Pi)`.
pub(crate) fn scaled_fourier_diagonal(group: &AbelianGroupSpec, f: &[Value], field: &Field) -> Result<Vec<Value>> {
    let n2 = field.from_i64((group.order() * group.order()) as i64);
    let inv = field.inv(&n2)?;
    Ok(fourier_diagonal(group, f, field)?.iter().map(|v| field.mul(v, &inv)).collect())
}
