//! Constructors for the structured matrix families and the transforms that
//! relate them: Fourier diagonalization, rescaling of Fourier matrices into
//! adjusted circulants, circulant embedding and CRT reindexing.
//!
//! Conventions. For a group `G` with elements ordered lexicographically
//! (first coordinate most significant):
//! * adjusted G-circulant: `M_{xy} = f(x + y)`;
//! * G-circulant: `M_{xy} = f(x - y)`;
//! * circulant with top row `f`: `C_{xy} = f(y - x)` over `Z_N`;
//! * Toeplitz: `T_{ij} = t[j - i + N - 1]`; Hankel: `K_{ij} = h[i + j]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError, RootOfUnity, Value};
use crate::linalg::{ExactMatrix, LinalgError};
use crate::numtheory::{gcd, inv_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("invalid group: {0}")]
    Group(String),
    #[error("parameter mismatch: {0}")]
    Params(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, StructureError>;

/// `Z_{n_1} x ... x Z_{n_a}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    pub invariant_factors: Vec<u64>,
}

/// Largest group order accepted by the dense constructors.
pub const MAX_ORDER: u64 = 1 << 16;

impl AbelianGroupSpec {
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        if invariant_factors.is_empty() {
            return Err(StructureError::Group("no factors".into()));
        }
        if let Some(&n) = invariant_factors.iter().find(|&&n| n < 2) {
            return Err(StructureError::Group(format!("factor {n} < 2")));
        }
        let mut order = 1u64;
        for &n in &invariant_factors {
            order = order
                .checked_mul(n)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| StructureError::Group(format!("order exceeds {MAX_ORDER}")))?;
        }
        Ok(Self { invariant_factors })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `Z_d^n`.
    pub fn power(d: u64, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn order(&self) -> usize {
        self.invariant_factors.iter().product::<u64>() as usize
    }

    /// Exponent of the group (lcm of the factors).
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.iter().fold(1, |acc, &n| acc / gcd(acc, n) * n)
    }

    pub fn coords(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.invariant_factors.len()];
        for (c, &n) in out.iter_mut().zip(&self.invariant_factors).rev() {
            *c = index as u64 % n;
            index /= n as usize;
        }
        out
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.invariant_factors)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + (c % n) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.coords(a), self.coords(b));
        let s: Vec<u64> = x.iter().zip(&y).zip(&self.invariant_factors).map(|((p, q), n)| (p + q) % n).collect();
        self.index(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let x = self.coords(a);
        let s: Vec<u64> = x.iter().zip(&self.invariant_factors).map(|(p, n)| (n - p) % n).collect();
        self.index(&s)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }
}

/// The matrix families. Value vectors live in the descriptor's field.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixKind {
    /// `H_{d,n}`, entries `omega^(I.J)`.
    Gwh { d: u64, n: usize },
    /// `DFT_N`, entries `omega^(xy)`.
    Dft { n: u64 },
    Circulant { top_row: Vec<Value> },
    AdjustedCirculant { f: Vec<Value> },
    Toeplitz { diagonals: Vec<Value> },
    Hankel { antidiagonals: Vec<Value> },
    GCirculant { group: AbelianGroupSpec, f: Vec<Value> },
    AdjustedGCirculant { group: AbelianGroupSpec, f: Vec<Value> },
    /// Character table of the group, the Kronecker product of the cyclic
    /// DFTs of its factors.
    DftG { group: AbelianGroupSpec },
    /// Rows `(x_i^0, .., x_i^{N-1})` with `x_i = a b^i`.
    VandermondeGeometric { a: Value, b: Value, n: usize },
    /// Row-major entries.
    Explicit { rows: usize, cols: usize, data: Vec<Value> },
    Kronecker { factors: Vec<MatrixKind> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixDescriptor {
    pub kind: MatrixKind,
    pub field: Field,
}

impl MatrixDescriptor {
    pub fn new(kind: MatrixKind, field: &Field) -> Self {
        Self { kind, field: field.clone() }
    }

    pub fn shape(&self) -> (usize, usize) {
        shape_of(&self.kind)
    }

    pub fn realize(&self) -> Result<ExactMatrix> {
        realize_kind(&self.kind, &self.field)
    }

    /// Short tag used in reports.
    pub fn family(&self) -> &'static str {
        family_of(&self.kind)
    }
}

fn family_of(kind: &MatrixKind) -> &'static str {
    match kind {
        MatrixKind::Gwh { .. } => "gwh",
        MatrixKind::Dft { .. } => "dft",
        MatrixKind::Circulant { .. } => "circulant",
        MatrixKind::AdjustedCirculant { .. } => "adjusted_circulant",
        MatrixKind::Toeplitz { .. } => "toeplitz",
        MatrixKind::Hankel { .. } => "hankel",
        MatrixKind::GCirculant { .. } => "g_circulant",
        MatrixKind::AdjustedGCirculant { .. } => "adjusted_g_circulant",
        MatrixKind::DftG { .. } => "dft_g",
        MatrixKind::VandermondeGeometric { .. } => "vandermonde_geometric",
        MatrixKind::Explicit { .. } => "explicit",
        MatrixKind::Kronecker { .. } => "kronecker",
    }
}

fn shape_of(kind: &MatrixKind) -> (usize, usize) {
    let sq = |n: usize| (n, n);
    match kind {
        MatrixKind::Gwh { d, n } => sq((*d as usize).pow(*n as u32)),
        MatrixKind::Dft { n } => sq(*n as usize),
        MatrixKind::Circulant { top_row } => sq(top_row.len()),
        MatrixKind::AdjustedCirculant { f } => sq(f.len()),
        MatrixKind::Toeplitz { diagonals } => sq(diagonals.len().div_ceil(2)),
        MatrixKind::Hankel { antidiagonals } => sq(antidiagonals.len().div_ceil(2)),
        MatrixKind::GCirculant { group, .. } | MatrixKind::AdjustedGCirculant { group, .. } | MatrixKind::DftG { group } => {
            sq(group.order())
        }
        MatrixKind::VandermondeGeometric { n, .. } => sq(*n),
        MatrixKind::Explicit { rows, cols, .. } => (*rows, *cols),
        MatrixKind::Kronecker { factors } => factors.iter().map(shape_of).fold((1, 1), |(r, c), (a, b)| (r * a, c * b)),
    }
}

fn check_len(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(StructureError::Params(format!("{what} has {got} values, expected {expected}")));
    }
    Ok(())
}

fn check_values(field: &Field, values: &[Value]) -> Result<()> {
    if values.iter().all(|v| field.contains(v)) {
        Ok(())
    } else {
        Err(StructureError::Params(format!("values outside {field}")))
    }
}

fn realize_kind(kind: &MatrixKind, field: &Field) -> Result<ExactMatrix> {
    match kind {
        MatrixKind::Gwh { d, n } => gwh(*d, *n, field),
        MatrixKind::Dft { n } => dft(*n, field),
        MatrixKind::Circulant { top_row } => {
            check_values(field, top_row)?;
            let n = top_row.len();
            if n == 0 {
                return Err(StructureError::Params("empty top row".into()));
            }
            Ok(ExactMatrix::from_fn(field, n, n, |x, y| top_row[(y + n - x) % n].clone()))
        }
        MatrixKind::AdjustedCirculant { f } => {
            let group = AbelianGroupSpec::cyclic(f.len() as u64)?;
            adjusted_g_circulant(&group, f, field)
        }
        MatrixKind::Toeplitz { diagonals } => {
            check_values(field, diagonals)?;
            if diagonals.len() % 2 == 0 {
                return Err(StructureError::Params("Toeplitz needs 2N - 1 diagonals".into()));
            }
            let n = diagonals.len().div_ceil(2);
            Ok(ExactMatrix::from_fn(field, n, n, |i, j| diagonals[j + n - 1 - i].clone()))
        }
        MatrixKind::Hankel { antidiagonals } => {
            check_values(field, antidiagonals)?;
            if antidiagonals.len() % 2 == 0 {
                return Err(StructureError::Params("Hankel needs 2N - 1 antidiagonals".into()));
            }
            let n = antidiagonals.len().div_ceil(2);
            Ok(ExactMatrix::from_fn(field, n, n, |i, j| antidiagonals[i + j].clone()))
        }
        MatrixKind::GCirculant { group, f } => {
            check_len("group function", f.len(), group.order())?;
            check_values(field, f)?;
            let n = group.order();
            Ok(ExactMatrix::from_fn(field, n, n, |x, y| f[group.sub(x, y)].clone()))
        }
        MatrixKind::AdjustedGCirculant { group, f } => adjusted_g_circulant(group, f, field),
        MatrixKind::DftG { group } => dft_g(group, field),
        MatrixKind::VandermondeGeometric { a, b, n } => {
            check_values(field, &[a.clone(), b.clone()])?;
            let nodes: Vec<Value> = (0..*n).map(|i| field.mul(a, &field.pow(b, i as u128))).collect();
            Ok(ExactMatrix::from_fn(field, *n, *n, |i, j| field.pow(&nodes[i], j as u128)))
        }
        MatrixKind::Explicit { rows, cols, data } => {
            check_values(field, data)?;
            Ok(ExactMatrix::new(field, *rows, *cols, data.clone())?)
        }
        MatrixKind::Kronecker { factors } => {
            let mut acc = ExactMatrix::identity(field, 1);
            for k in factors {
                acc = acc.kronecker(&realize_kind(k, field)?)?;
            }
            Ok(acc)
        }
    }
}

/// Powers `omega^0 .. omega^(order-1)`.
fn root_powers(field: &Field, root: &RootOfUnity) -> Vec<Value> {
    let mut out = Vec::with_capacity(root.order as usize);
    let mut cur = field.one();
    for _ in 0..root.order {
        out.push(cur.clone());
        cur = field.mul(&cur, &root.value);
    }
    out
}

pub fn gwh(d: u64, n: usize, field: &Field) -> Result<ExactMatrix> {
    dft_g(&AbelianGroupSpec::power(d, n)?, field)
}

pub fn dft(n: u64, field: &Field) -> Result<ExactMatrix> {
    if n == 1 {
        return Ok(ExactMatrix::identity(field, 1));
    }
    dft_g(&AbelianGroupSpec::cyclic(n)?, field)
}

/// Character table `prod_i omega_i^(x_i y_i)` with `omega_i` the canonical
/// primitive `n_i`-th root.
pub fn dft_g(group: &AbelianGroupSpec, field: &Field) -> Result<ExactMatrix> {
    let e = group.exponent();
    let root = field.primitive_root_of_unity(e)?;
    let powers = root_powers(field, &root);
    let n = group.order();
    let coords: Vec<Vec<u64>> = (0..n).map(|i| group.coords(i)).collect();
    Ok(ExactMatrix::from_fn(field, n, n, |x, y| powers[character_exponent(group, e, &coords[x], &coords[y])].clone()))
}

/// Exponent `k` with `prod_i omega_i^(x_i y_i) = omega_e^k`.
fn character_exponent(group: &AbelianGroupSpec, e: u64, x: &[u64], y: &[u64]) -> usize {
    let mut k = 0u64;
    for ((a, b), n) in x.iter().zip(y).zip(&group.invariant_factors) {
        k = (k + (a * b % n) * (e / n)) % e;
    }
    k as usize
}

pub fn adjusted_g_circulant(group: &AbelianGroupSpec, f: &[Value], field: &Field) -> Result<ExactMatrix> {
    check_len("group function", f.len(), group.order())?;
    check_values(field, f)?;
    let n = group.order();
    Ok(ExactMatrix::from_fn(field, n, n, |x, y| f[group.add(x, y)].clone()))
}

/// Diagonal of `DFT_G M(f) DFT_G` for the adjusted G-circulant `M(f)`:
/// entry `J` is `|G| sum_x f(x) prod_i omega_i^(x_i J_i)`.
pub fn fourier_diagonal(group: &AbelianGroupSpec, f: &[Value], field: &Field) -> Result<Vec<Value>> {
    check_len("group function", f.len(), group.order())?;
    let e = group.exponent();
    let root = field.primitive_root_of_unity(e)?;
    let powers = root_powers(field, &root);
    let n = group.order();
    let coords: Vec<Vec<u64>> = (0..n).map(|i| group.coords(i)).collect();
    let order = field.from_i64(n as i64);
    Ok((0..n)
        .map(|j| {
            let mut by_exp = vec![field.zero(); e as usize];
            for (x, v) in f.iter().enumerate() {
                if !field.is_zero(v) {
                    let k = character_exponent(group, e, &coords[x], &coords[j]);
                    by_exp[k] = field.add(&by_exp[k], v);
                }
            }
            let s = by_exp
                .iter()
                .zip(&powers)
                .filter(|(c, _)| !field.is_zero(c))
                .fold(field.zero(), |acc, (c, w)| field.add(&acc, &field.mul(c, w)));
            field.mul(&order, &s)
        })
        .collect())
}

/// Diagonal of `H_{d,n} M(f) H_{d,n}`: `d^n P_f(omega^[J])` in index order
/// of `J`.
pub fn diagonalize_adjusted(d: u64, n: usize, f: &[Value], field: &Field) -> Result<Vec<Value>> {
    fourier_diagonal(&AbelianGroupSpec::power(d, n)?, f, field)
}

/// Whether `F M F` is diagonal with the given diagonal, by an exact triple
/// product.
pub fn check_diagonalization(fourier: &ExactMatrix, m: &ExactMatrix, diagonal: &[Value]) -> Result<bool> {
    let prod = fourier.mul(m)?.mul(fourier)?;
    let f = m.field();
    for i in 0..prod.rows() {
        for j in 0..prod.cols() {
            let v = prod.get(i, j);
            let ok = if i == j { f.is_zero(&f.sub(v, &diagonal[i])) } else { f.is_zero(v) };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `d^n - #{J : P_f(omega^[J]) = 0}`.
pub fn rank_via_roots(d: u64, n: usize, f: &[Value], field: &Field) -> Result<usize> {
    let diag = diagonalize_adjusted(d, n, f, field)?;
    Ok(diag.iter().filter(|v| !field.is_zero(v)).count())
}

/// Scales that turn a Fourier matrix into an adjusted circulant.
#[derive(Clone, Debug, PartialEq)]
pub struct Rescaling {
    /// `zeta` with `zeta^2 = omega`.
    pub zeta: RootOfUnity,
    pub row_scales: Vec<Value>,
    pub col_scales: Vec<Value>,
    /// `f(x) = zeta^(sum x_i^2)`, symmetric under permuting coordinates.
    pub f_sym: Vec<Value>,
}

/// Square root of the canonical primitive `d`-th root: `omega^((d+1)/2)` for
/// odd `d`, the canonical primitive `2d`-th root otherwise.
pub fn half_root(d: u64, field: &Field) -> Result<RootOfUnity> {
    let omega = field.primitive_root_of_unity(d)?;
    let zeta = if d % 2 == 1 {
        RootOfUnity { value: field.pow(&omega.value, d.div_ceil(2) as u128), order: d }
    } else {
        field.primitive_root_of_unity(2 * d)?
    };
    if field.mul(&zeta.value, &zeta.value) != omega.value {
        return Err(StructureError::Params(format!("no square root of the {d}-th root in {field}")));
    }
    Ok(zeta)
}

/// Scales with `diag(row) H_{d,n} diag(col) = M(f_sym)`. The scales are
/// `zeta^(I.I)` and `zeta^(J.J)`.
pub fn rescale_gwh(d: u64, n: usize, field: &Field) -> Result<Rescaling> {
    let group = AbelianGroupSpec::power(d, n)?;
    let zeta = half_root(d, field)?;
    let powers = root_powers(field, &zeta);
    let ord = zeta.order;
    let sq: Vec<Value> = (0..group.order())
        .map(|i| {
            let e: u64 = group.coords(i).iter().map(|c| c * c).sum();
            powers[(e % ord) as usize].clone()
        })
        .collect();
    Ok(Rescaling { zeta, row_scales: sq.clone(), col_scales: sq.clone(), f_sym: sq })
}

/// `DFT_N` rescaled the same way, as the case `n = 1`.
pub fn rescale_dft(n: u64, field: &Field) -> Result<Rescaling> {
    rescale_gwh(n, 1, field)
}

/// Top row `g` of length `n` whose circulant has the circulant of `f` as its
/// upper-left block. Unconstrained positions are zero.
pub fn embed_circulant(f: &[Value], n: usize, field: &Field) -> Result<Vec<Value>> {
    let k = f.len();
    if k == 0 || n < 2 * k {
        return Err(StructureError::Params(format!("cannot embed length {k} into {n}, need n >= 2k")));
    }
    let mut g = vec![field.zero(); n];
    g[..k].clone_from_slice(f);
    for j in 1..k {
        g[n - j] = f[k - j].clone();
    }
    Ok(g)
}

/// Row reversal maps the circulant with top row `f` to the Hankel matrix with
/// antidiagonals `h[k] = f[(k + 1) mod N]` for `k < 2N - 1`.
pub fn circulant_to_hankel(f: &[Value]) -> Vec<Value> {
    let n = f.len();
    (0..2 * n - 1).map(|k| f[(k + 1) % n].clone()).collect()
}

/// Column reversal maps a Toeplitz matrix to the Hankel matrix with the
/// diagonals read backwards.
pub fn toeplitz_to_hankel(diagonals: &[Value]) -> Vec<Value> {
    diagonals.iter().rev().cloned().collect()
}

/// Reversal permutation `i -> n - 1 - i`.
pub fn reversal(n: usize) -> Vec<usize> {
    (0..n).rev().collect()
}

/// Function on `Z_n` whose adjusted circulant contains the Hankel matrix as
/// its upper-left block; requires `n >= 2N - 1`.
pub fn embed_hankel(h: &[Value], n: usize, field: &Field) -> Result<Vec<Value>> {
    if n < h.len() {
        return Err(StructureError::Params(format!("cannot embed {} antidiagonals into Z_{n}", h.len())));
    }
    let mut g = vec![field.zero(); n];
    g[..h.len()].clone_from_slice(h);
    Ok(g)
}

/// Scales with `diag(row) V diag(col)` Hankel for the geometric Vandermonde
/// matrix: `b^(ij) = b^(C(i+j,2) - C(i,2) - C(j,2))`, so the result has entry
/// `b^C(i+j,2)` and no square roots are needed.
pub fn vandermonde_to_hankel(a: &Value, b: &Value, n: usize, field: &Field) -> Result<(Vec<Value>, Vec<Value>)> {
    if field.is_zero(a) || field.is_zero(b) {
        return Err(StructureError::Params("generators must be nonzero".into()));
    }
    let binom2 = |k: usize| (k * k.saturating_sub(1) / 2) as i64;
    let rows = (0..n).map(|i| field.pow_signed(b, binom2(i))).collect::<std::result::Result<Vec<_>, _>>()?;
    let cols = (0..n)
        .map(|j| Ok(field.mul(&field.pow_signed(a, -(j as i64))?, &field.pow_signed(b, binom2(j))?)))
        .collect::<std::result::Result<Vec<_>, FieldError>>()?;
    Ok((rows, cols))
}

/// Row and column orders under which `DFT_N` equals `DFT_{x_1} (x) ... (x)
/// DFT_{x_k}` for pairwise coprime `x_i` with product `N`.
///
/// Columns use the plain CRT map `j -> (j mod x_i)`. Rows need the twist
/// `i -> (c_i i mod x_i)` with `c_i = (N/x_i)^-1 mod x_i`, because
/// `omega_N^(N/x_i) = omega_{x_i}` carries the extra factor `N/x_i`. Returned
/// as `(row_perm, col_perm)` for [`ExactMatrix::scale_and_permute`]: position
/// `k` of the product order holds DFT index `perm[k]`.
pub fn crt_permutations(factors: &[u64]) -> Result<(Vec<usize>, Vec<usize>)> {
    for (i, &a) in factors.iter().enumerate() {
        if a < 2 || factors[i + 1..].iter().any(|&b| gcd(a, b) != 1) {
            return Err(StructureError::Params(format!("factors {factors:?} are not pairwise coprime")));
        }
    }
    let group = AbelianGroupSpec::new(factors.to_vec())?;
    let n = group.order() as u64;
    let twists: Vec<u64> = factors.iter().map(|&x| inv_mod((n / x) % x, x).unwrap()).collect();
    let mut row_perm = vec![0usize; n as usize];
    let mut col_perm = vec![0usize; n as usize];
    for a in 0..n {
        let plain: Vec<u64> = factors.iter().map(|&x| a % x).collect();
        let twisted: Vec<u64> = factors.iter().zip(&twists).map(|(&x, &c)| c * a % x).collect();
        row_perm[group.index(&twisted)] = a as usize;
        col_perm[group.index(&plain)] = a as usize;
    }
    Ok((row_perm, col_perm))
}

/// Group isomorphism `Z_N -> Z_{x_1} x ... x Z_{x_k}`, `a -> (a mod x_i)`,
/// as the list of product-order positions of `0..N`.
pub fn crt_relabel(factors: &[u64]) -> Result<Vec<usize>> {
    let (_, col_perm) = crt_permutations(factors)?;
    let mut pos = vec![0usize; col_perm.len()];
    for (k, &a) in col_perm.iter().enumerate() {
        pos[a] = k;
    }
    Ok(pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dft2_over_q() {
        let q = Field::rationals();
        let m = dft(2, &q).unwrap();
        let expect = ExactMatrix::from_fn(&q, 2, 2, |i, j| q.from_i64(if i * j == 1 { -1 } else { 1 }));
        assert_eq!(m, expect);
    }

    #[test]
    fn adjusted_circulant_pattern() {
        let q = Field::rationals();
        let f: Vec<Value> = [1, 2, 3].iter().map(|&x| q.from_i64(x)).collect();
        let m = MatrixDescriptor::new(MatrixKind::AdjustedCirculant { f: f.clone() }, &q).realize().unwrap();
        assert_eq!(m.row(1), &[f[1].clone(), f[2].clone(), f[0].clone()]);
        assert_eq!(m.row(2), &[f[2].clone(), f[0].clone(), f[1].clone()]);
    }

    #[test]
    fn rescaled_gwh_is_adjusted_circulant() {
        let f = Field::cyclotomic(4).unwrap();
        let r = rescale_gwh(2, 3, &f).unwrap();
        let h = gwh(2, 3, &f).unwrap();
        let scaled = h.scale_and_permute(Some(&r.row_scales), Some(&r.col_scales), None, None).unwrap();
        let group = AbelianGroupSpec::power(2, 3).unwrap();
        assert_eq!(scaled, adjusted_g_circulant(&group, &r.f_sym, &f).unwrap());
        assert!(rescale_gwh(2, 1, &Field::rationals()).is_err());
    }

    #[test]
    fn crt_reorders_dft15() {
        let f = Field::cyclotomic(15).unwrap();
        let (rp, cp) = crt_permutations(&[3, 5]).unwrap();
        let big = dft(15, &f).unwrap().scale_and_permute(None, None, Some(&rp), Some(&cp)).unwrap();
        assert_eq!(big, dft(3, &f).unwrap().kronecker(&dft(5, &f).unwrap()).unwrap());
    }

    #[test]
    fn embedded_circulant_block() {
        let q = Field::rationals();
        let f: Vec<Value> = [4, -1, 7].iter().map(|&x| q.from_i64(x)).collect();
        for n in [6, 7] {
            let g = embed_circulant(&f, n, &q).unwrap();
            let big = MatrixDescriptor::new(MatrixKind::Circulant { top_row: g }, &q).realize().unwrap();
            let small = MatrixDescriptor::new(MatrixKind::Circulant { top_row: f.clone() }, &q).realize().unwrap();
            assert_eq!(big.submatrix(&[0, 1, 2], &[0, 1, 2]), small);
        }
        assert!(embed_circulant(&f, 5, &q).is_err());
    }
}
