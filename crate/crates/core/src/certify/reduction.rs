//! Reductions `M_G(f) = A Y_f + Z_f B + E_f`, linear in `f`, over a finite
//! base field, and their composition over products of groups.

use num_bigint::BigUint;

use super::descent::{trace_descend, DescentWeight};
use super::dft::{BlockParams, DftBlockPlan};
use super::gwh::{gwh_parts, plan_feasible, scaled_fourier_diagonal};
use super::transfer::{all_subsets_below, Parts};
use super::{
    field_with_roots, half_order, negation, rank_factor, solve_left, solve_right, vstack, Certificate, CertifyError,
    Provenance, Result,
};
use crate::field::{Field, Value};
use crate::linalg::{ExactMatrix, SparseChanges};
use crate::numtheory::{gcd, is_squarefree, FactorableWitness};
use crate::structured::{adjusted_g_circulant, embed_hankel, AbelianGroupSpec, MatrixDescriptor, MatrixKind};

/// Reduction data for the adjusted circulants of `group` over a base field.
/// Index `g` of `y`, `z`, `e` is the indicator function of group element `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionData {
    pub group: AbelianGroupSpec,
    pub field: Field,
    /// `|G| x ra`, full column rank.
    pub a: ExactMatrix,
    /// `rb x |G|`, full row rank.
    pub b: ExactMatrix,
    pub y: Vec<ExactMatrix>,
    pub z: Vec<ExactMatrix>,
    pub e: Vec<SparseChanges>,
    /// `max(rank A, rank B)`.
    pub r: usize,
    /// Regular sparsity of the union of the supports of the `E_g`.
    pub s: usize,
    /// `(r, s)` from the product formulas, when composed.
    pub formula: Option<(usize, usize)>,
    pub provenance: Provenance,
}

impl ReductionData {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Union of the supports of the `E_g`.
    pub fn support(&self) -> SparseChanges {
        let n = self.order();
        let mut out = SparseChanges::empty(&self.field, n, n);
        for e in &self.e {
            for (i, j) in e.positions() {
                out.set(i, j, self.field.one());
            }
        }
        out
    }

    /// `A Y_f + Z_f B + E_f` for a function `f` on the group.
    pub fn assemble(&self, f: &[Value]) -> Result<ExactMatrix> {
        let (y, z, e) = self.combine(f)?;
        Ok(self.a.mul(&y)?.add(&z.mul(&self.b)?)?.apply_changes(&e, false)?)
    }

    /// `Y_f`, `Z_f`, `E_f`.
    pub fn combine(&self, f: &[Value]) -> Result<(ExactMatrix, ExactMatrix, SparseChanges)> {
        let n = self.order();
        if f.len() != n {
            return Err(CertifyError::Precondition(format!("function has {} values, expected {n}", f.len())));
        }
        let fld = &self.field;
        let mut y = ExactMatrix::zeros(fld, self.a.cols(), n);
        let mut z = ExactMatrix::zeros(fld, n, self.b.rows());
        let mut e = SparseChanges::empty(fld, n, n);
        for (g, c) in f.iter().enumerate() {
            if fld.is_zero(c) {
                continue;
            }
            y = y.add(&self.y[g].scale(c))?;
            z = z.add(&self.z[g].scale(c))?;
            e = e.add(&self.e[g].scale(c))?;
        }
        Ok((y, z, e))
    }

    /// Whether the identity holds for every indicator function, hence for
    /// every function by linearity.
    pub fn check_identity(&self) -> Result<bool> {
        let fld = &self.field;
        let n = self.order();
        for g in 0..n {
            let mut ind = vec![fld.zero(); n];
            ind[g] = fld.one();
            let lhs = adjusted_g_circulant(&self.group, &ind, fld)?;
            let rhs = self.a.mul(&self.y[g])?.add(&self.z[g].mul(&self.b)?)?.apply_changes(&self.e[g], false)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Descends the three terms `T1_g = U (V D_g E)`, `T2_g = (A D_g U) V`,
/// `T3_g = E D_g E` of `A D_g A` for `A = L + E = U V + E`, restricts them to
/// the upper-left `n x n` block, and packages them as reduction data.
fn three_term(
    group: &AbelianGroupSpec,
    base: &Field,
    a: &ExactMatrix,
    e_a: &SparseChanges,
    big: &AbelianGroupSpec,
    lift: impl Fn(usize) -> Result<Vec<Value>>,
    provenance: Provenance,
) -> Result<ReductionData> {
    let ext = a.field().clone();
    let n = group.order();
    let w = DescentWeight::new(&ext)?;
    let l = a.apply_changes(e_a, true)?;
    let (u, v) = rank_factor(&l);
    let e_dense = e_a.to_dense();
    let idx: Vec<usize> = (0..n).collect();
    let cut = |m: &ExactMatrix| m.submatrix(&idx, &idx);
    let (mut t1, mut t2, mut t3) = (Vec::new(), Vec::new(), Vec::new());
    for g in 0..n {
        let d = ExactMatrix::diagonal(&ext, &scaled_fourier_diagonal(big, &lift(g)?, &ext)?);
        let p1 = u.mul(&v.mul(&d)?.mul(&e_dense)?)?;
        let p2 = a.mul(&d)?.mul(&u)?.mul(&v)?;
        let p3 = e_dense.mul(&d)?.mul(&e_dense)?;
        t1.push(trace_descend(&cut(&p1), &w, base)?);
        t2.push(trace_descend(&cut(&p2), &w, base)?);
        t3.push(SparseChanges::from_dense(&trace_descend(&cut(&p3), &w, base)?));
    }
    let provenance = provenance.then(format!("three-term split descended with weight gamma^{}", w.k));
    package(group, base, &t1, &t2, t3, None, provenance)
}

/// Column basis `A` of the `T1_g`, row basis `B` of the `T2_g`, and the
/// coefficient matrices; checks the identity.
fn package(
    group: &AbelianGroupSpec,
    base: &Field,
    t1: &[ExactMatrix],
    t2: &[ExactMatrix],
    e: Vec<SparseChanges>,
    formula: Option<(usize, usize)>,
    provenance: Provenance,
) -> Result<ReductionData> {
    let n = group.order();
    let h1 = ExactMatrix::hstack(&t1.iter().collect::<Vec<_>>())?;
    let a = h1.column_basis();
    let v2 = vstack(&t2.iter().collect::<Vec<_>>())?;
    let b = v2.transpose().column_basis().transpose();
    let blocks = |k: usize| -> Vec<usize> { (k * n..(k + 1) * n).collect() };
    let y = if a.cols() == 0 {
        vec![ExactMatrix::zeros(base, 0, n); n]
    } else {
        let ys = solve_left(&a, &h1)?;
        let ra: Vec<usize> = (0..a.cols()).collect();
        (0..n).map(|g| ys.submatrix(&ra, &blocks(g))).collect()
    };
    let z = if b.rows() == 0 {
        vec![ExactMatrix::zeros(base, n, 0); n]
    } else {
        let zs = solve_right(&b, &v2)?;
        let rb: Vec<usize> = (0..b.rows()).collect();
        (0..n).map(|g| zs.submatrix(&blocks(g), &rb)).collect()
    };
    let mut data = ReductionData {
        group: group.clone(),
        field: base.clone(),
        r: a.cols().max(b.rows()),
        a,
        b,
        y,
        z,
        e,
        s: 0,
        formula,
        provenance,
    };
    data.s = data.support().sparsity().regular();
    if !data.check_identity()? {
        return Err(CertifyError::Invariant("reduction identity fails on an indicator function".into()));
    }
    Ok(data)
}

fn check_base(base: &Field, order: u64) -> Result<()> {
    if !base.is_finite() {
        return Err(CertifyError::Precondition(format!("{base} is not finite")));
    }
    let p = base.characteristic();
    if gcd(order, p) != 1 {
        return Err(CertifyError::Precondition(format!("gcd({order}, {p}) != 1")));
    }
    Ok(())
}

/// Ambient size for `Z_N`: `N` itself when squarefree, else the smallest
/// squarefree size `>= 2N - 1` coprime to the characteristic.
fn cyclic_ambient(n: u64, p: u64, explicit: Option<u64>) -> Result<u64> {
    if let Some(n0) = explicit {
        if !(n0 == n && is_squarefree(n) || n0 >= 2 * n - 1) || !is_squarefree(n0) || gcd(n0, p) != 1 {
            return Err(CertifyError::Precondition(format!("ambient {n0} unusable for Z_{n} in characteristic {p}")));
        }
        return Ok(n0);
    }
    if is_squarefree(n) {
        return Ok(n);
    }
    (2 * n - 1..)
        .take(10_000)
        .find(|&m| is_squarefree(m) && gcd(m, p) == 1)
        .ok_or_else(|| CertifyError::Infeasible(format!("no ambient size for Z_{n}")))
}

/// Reduction for `Z_N` over `F_q` from a certificate for `DFT_{N0}` over the
/// extension hosting its roots. With `N0 > N` the group functions enter as
/// Hankel blocks of adjusted circulants over `Z_{N0}`.
pub fn reduction_for_cyclic(n: u64, base: &Field, ambient: Option<u64>, params: &BlockParams) -> Result<ReductionData> {
    check_base(base, n)?;
    let n0 = cyclic_ambient(n, base.characteristic(), ambient)?;
    let plan = DftBlockPlan { witness: FactorableWitness::from_squarefree(n0)?, params: params.clone() };
    let mut orders = plan.root_orders()?;
    orders.push(n0);
    let ext = field_with_roots(base, &orders)?;
    let big = AbelianGroupSpec::cyclic(n0)?;
    let group = AbelianGroupSpec::cyclic(n)?;
    let omega = ext.primitive_root_of_unity(n0)?.value;
    let f = super::dft::dft_parts(&plan, &omega, &ext)?;
    let dft = crate::structured::dft(n0, &ext)?;
    let neg = negation(&big);
    let a = dft.scale_and_permute(None, None, None, Some(&neg))?;
    let e_a = super::transfer::permute_columns(&f.changes, &neg)?;
    let lift = |g: usize| -> Result<Vec<Value>> {
        let mut ind = vec![ext.zero(); n as usize];
        ind[g] = ext.one();
        if n0 == n {
            return Ok(ind);
        }
        let h: Vec<Value> = (0..2 * n as usize - 1).map(|k| ind[k % n as usize].clone()).collect();
        Ok(embed_hankel(&h, n0 as usize, &ext)?)
    };
    let prov = Provenance::new(format!("reduction for Z_{n} over {base} via DFT_{n0} over {ext}")).merge(&f.provenance);
    three_term(&group, base, &a, &e_a, &big, lift, prov)
}

/// Reduction for `Z_d^n` over `F_q` from the `H_{d,n}` certificate over the
/// extension hosting the rescaling root. An infeasible plan uses `E = 0`.
pub fn reduction_for_small_power(d: u64, n: usize, m: usize, base: &Field) -> Result<ReductionData> {
    check_base(base, d)?;
    let ext = field_with_roots(base, &[d, half_order(d)])?;
    let group = AbelianGroupSpec::power(d, n)?;
    let omega = ext.primitive_root_of_unity(d)?.value;
    let size = group.order();
    let h = if plan_feasible(d, n, m) {
        gwh_parts(d, n, m, &omega, &ext)?
    } else {
        let mut p = Provenance::new("no symmetric plan: E = 0");
        p.degenerate = true;
        Parts { changes: SparseChanges::empty(&ext, size, size), rank: size, sparsity: 0, provenance: p }
    };
    let neg = negation(&group);
    let a = crate::structured::gwh(d, n, &ext)?.scale_and_permute(None, None, None, Some(&neg))?;
    let e_a = super::transfer::permute_columns(&h.changes, &neg)?;
    let lift = |g: usize| -> Result<Vec<Value>> {
        let mut ind = vec![ext.zero(); size];
        ind[g] = ext.one();
        Ok(ind)
    };
    let prov = Provenance::new(format!("reduction for Z_{d}^{n} over {base} via H_{{{d},{n}}} over {ext}"))
        .merge(&h.provenance);
    three_term(&group, base, &a, &e_a, &group, lift, prov)
}

/// `ceil(c sqrt(x))` exactly.
fn ceil_scaled_sqrt(c: &BigUint, x: &BigUint) -> BigUint {
    let v = c * c * x;
    let r = v.sqrt();
    if &r * &r == v {
        r
    } else {
        r + 1u32
    }
}

fn to_usize(x: &BigUint) -> usize {
    x.try_into().unwrap_or(usize::MAX)
}

/// Product formulas: `r = sum_{|S| = l} 2^l prod_S sqrt(r_i n_i) prod_{not S} n_i`
/// with each term rounded up, and `s = sum_{|S| < l} 2^|S| prod_S n_i prod_{not S} s_i`.
pub fn product_formulas(parts: &[(usize, usize, usize)], l: usize) -> (usize, usize) {
    let a = parts.len();
    let mut r = BigUint::from(0u32);
    for set in all_subsets_below(a, l + 1).into_iter().filter(|s| s.len() == l) {
        let mut c = BigUint::from(1u32) << l;
        let mut x = BigUint::from(1u32);
        for (i, &(n, ri, _)) in parts.iter().enumerate() {
            if set.contains(&i) {
                x *= BigUint::from(ri) * BigUint::from(n);
            } else {
                c *= BigUint::from(n);
            }
        }
        r += ceil_scaled_sqrt(&c, &x);
    }
    let mut s = BigUint::from(0u32);
    for set in all_subsets_below(a, l) {
        let mut t = BigUint::from(1u32) << set.len();
        for (i, &(n, _, si)) in parts.iter().enumerate() {
            t *= BigUint::from(if set.contains(&i) { n } else { si });
        }
        s += t;
    }
    (to_usize(&r), to_usize(&s))
}

/// Reduction for `G_1 x ... x G_a` from reductions of the factors.
///
/// `M_G(e_g)` is the Kronecker product of the factor terms
/// `A_i Y_i + Z_i B_i + E_i`; expanding gives one term per choice in
/// `{1, 2, 3}^a`. Terms with fewer than `l` choices outside `3` are sparse;
/// each remaining term goes to the column side when
/// `prod_{S1} r_i / n_i <= prod_{S2} r_i / n_i`, else to the row side.
pub fn reduction_product(parts: &[ReductionData], l: usize) -> Result<ReductionData> {
    let a = parts.len();
    if a == 0 || l == 0 || l > a {
        return Err(CertifyError::Precondition(format!("threshold {l} for {a} parts")));
    }
    let base = parts[0].field.clone();
    for p in parts {
        super::same_field(&p.field, &base)?;
    }
    if a == 1 {
        return Ok(parts[0].clone());
    }
    let mut factors = Vec::new();
    for p in parts {
        factors.extend(p.group.invariant_factors.iter().copied());
    }
    let group = AbelianGroupSpec::new(factors)?;
    let sizes: Vec<usize> = parts.iter().map(ReductionData::order).collect();
    let total: usize = sizes.iter().product();
    let ranks: Vec<usize> = parts.iter().map(|p| p.r).collect();
    // Choices: 0 = A Y, 1 = Z B, 2 = E.
    let choices: Vec<Vec<u8>> = (0..3usize.pow(a as u32))
        .map(|mut k| {
            (0..a)
                .map(|_| {
                    let c = (k % 3) as u8;
                    k /= 3;
                    c
                })
                .collect()
        })
        .collect();
    let side = |choice: &[u8]| -> u8 {
        let non_sparse = choice.iter().filter(|&&c| c != 2).count();
        if non_sparse < l {
            return 2;
        }
        // prod_{S1} r_i/n_i <= prod_{S2} r_i/n_i, cross-multiplied.
        let (mut lhs, mut rhs) = (BigUint::from(1u32), BigUint::from(1u32));
        for (i, &c) in choice.iter().enumerate() {
            match c {
                0 => {
                    lhs *= BigUint::from(ranks[i]);
                    rhs *= BigUint::from(sizes[i]);
                }
                1 => {
                    rhs *= BigUint::from(ranks[i]);
                    lhs *= BigUint::from(sizes[i]);
                }
                _ => {}
            }
        }
        if lhs <= rhs {
            0
        } else {
            1
        }
    };
    let (mut t1, mut t2, mut t3) = (Vec::new(), Vec::new(), Vec::new());
    for g in 0..total {
        // Factor coordinates of g in the product order.
        let mut rem = g;
        let mut coords = vec![0usize; a];
        for i in (0..a).rev() {
            coords[i] = rem % sizes[i];
            rem /= sizes[i];
        }
        let terms: Vec<[ExactMatrix; 3]> = parts
            .iter()
            .zip(&coords)
            .map(|(p, &gi)| -> Result<[ExactMatrix; 3]> {
                Ok([p.a.mul(&p.y[gi])?, p.z[gi].mul(&p.b)?, p.e[gi].to_dense()])
            })
            .collect::<Result<_>>()?;
        let mut acc = [
            ExactMatrix::zeros(&base, total, total),
            ExactMatrix::zeros(&base, total, total),
            ExactMatrix::zeros(&base, total, total),
        ];
        for choice in &choices {
            let mut m = ExactMatrix::identity(&base, 1);
            for (i, &c) in choice.iter().enumerate() {
                m = m.kronecker(&terms[i][c as usize])?;
            }
            let k = side(choice) as usize;
            acc[k] = acc[k].add(&m)?;
        }
        let [p1, p2, p3] = acc;
        t1.push(p1);
        t2.push(p2);
        t3.push(SparseChanges::from_dense(&p3));
    }
    let formula = product_formulas(
        &parts.iter().map(|p| (p.order(), p.r, p.s)).collect::<Vec<_>>(),
        l,
    );
    let mut prov = Provenance::new(format!("product of {a} reductions with l = {l}"));
    for p in parts {
        prov = prov.merge(&p.provenance);
    }
    package(&group, &base, &t1, &t2, t3, Some(formula), prov)
}

/// Certificate for `M_G(f)` from a reduction: `E = E_f`, rank at most
/// `rank A + rank B`.
pub fn reduction_to_certificate(data: &ReductionData, f: &[Value], field: &Field) -> Result<Certificate> {
    let fb: Vec<Value> = f.iter().map(|v| field.restrict(v, &data.field)).collect::<std::result::Result<_, _>>()?;
    let (_, _, e) = data.combine(&fb)?;
    let provenance = data.provenance.clone().then("evaluated at f");
    Certificate::new(
        MatrixDescriptor::new(MatrixKind::AdjustedGCirculant { group: data.group.clone(), f: fb }, &data.field),
        &data.field,
        e,
        data.a.cols() + data.b.rows(),
        data.s,
        provenance,
    )
}
