//! Exact fields: the cyclotomic fields `Q(zeta_m)` (with `Q = Q(zeta_1)`),
//! prime fields `F_p`, and extensions `F_p[alpha]`.
//!
//! A [`Field`] is a cheap handle to a shared context; bare [`Value`]s are
//! combined through it. [`FieldElement`] pairs a value with its field for
//! callers that want checked mixed-field arithmetic.

mod cyclotomic;
mod finite;

pub use cyclotomic::{cyclotomic_polynomial, widen_order, CycloValue};
pub use num_rational::BigRational as Rational;

pub(crate) use cyclotomic::{residue, CycloCtx};
pub(crate) use finite::poly as fp_poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::numtheory::{gcd, inv_mod, is_prime, pow_mod, prime_factors};
use finite::ExtCtx;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldDescriptor, FieldDescriptor),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{field} has no primitive root of unity of order {order}")]
    NoRoot { order: u64, field: FieldDescriptor },
    #[error("invalid field: {0}")]
    Invalid(String),
    #[error("operation needs a finite field, got {0}")]
    NotFinite(FieldDescriptor),
    #[error("operation needs a cyclotomic field, got {0}")]
    NotCyclotomic(FieldDescriptor),
    #[error("{0} does not embed into {1}")]
    NoEmbedding(FieldDescriptor, FieldDescriptor),
    #[error("value does not lie in {0}")]
    NotInSubfield(FieldDescriptor),
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FieldError>;

/// Identifies a field. Extension minimal polynomials are monic, constant
/// term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Cyclotomic { order: u64 },
    Prime { p: u64 },
    Extension { p: u64, minpoly: Vec<u64> },
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cyclotomic { order: 1 } => write!(f, "Q"),
            Self::Cyclotomic { order } => write!(f, "Q(zeta_{order})"),
            Self::Prime { p } => write!(f, "F_{p}"),
            Self::Extension { p, minpoly } => write!(f, "F_{p}[x]/{minpoly:?}"),
        }
    }
}

/// A field element without its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Cyclo(CycloValue),
    Fp(u64),
    Ext(Vec<u64>),
}

#[derive(Debug)]
enum Kind {
    Cyclo(CycloCtx),
    Prime(u64),
    Ext(ExtCtx),
}

struct Inner {
    descriptor: FieldDescriptor,
    kind: Kind,
    generator: OnceLock<std::result::Result<Value, FieldError>>,
}

/// Shared handle to a field context. Equality is equality of descriptors.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.descriptor)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.descriptor.fmt(f)
    }
}

/// A root of unity together with its exact multiplicative order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOfUnity {
    pub value: Value,
    pub order: u64,
}

impl Field {
    pub fn new(descriptor: FieldDescriptor) -> Result<Self> {
        let kind = match &descriptor {
            FieldDescriptor::Cyclotomic { order } => {
                if *order == 0 {
                    return Err(FieldError::Invalid("cyclotomic order must be >= 1".into()));
                }
                Kind::Cyclo(CycloCtx::new(*order))
            }
            FieldDescriptor::Prime { p } => {
                if !is_prime(*p) || *p >= 1 << 32 {
                    return Err(FieldError::Invalid(format!("{p} is not a prime below 2^32")));
                }
                Kind::Prime(*p)
            }
            FieldDescriptor::Extension { p, minpoly } => {
                Kind::Ext(ExtCtx::new(*p, minpoly.clone()).map_err(FieldError::Invalid)?)
            }
        };
        Ok(Self(Arc::new(Inner { descriptor, kind, generator: OnceLock::new() })))
    }

    pub fn rationals() -> Self {
        Self::cyclotomic(1).expect("Q is valid")
    }

    pub fn cyclotomic(m: u64) -> Result<Self> {
        Self::new(FieldDescriptor::Cyclotomic { order: m })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(FieldDescriptor::Prime { p })
    }

    pub fn extension(p: u64, minpoly: Vec<u64>) -> Result<Self> {
        Self::new(FieldDescriptor::Extension { p, minpoly })
    }

    /// `F_{p^k}` presented with the first irreducible polynomial of degree `k`
    /// in ascending order; `k = 1` gives the prime field.
    pub fn finite_of_degree(p: u64, k: usize) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(FieldError::Invalid(format!("{p} is not a prime below 2^32")));
        }
        match k {
            0 => Err(FieldError::Invalid("extension degree must be >= 1".into())),
            1 => Self::prime(p),
            _ => Self::extension(p, fp_poly::first_irreducible(k, p)),
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0.descriptor
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.0.kind, Kind::Cyclo(_))
    }

    /// `m` for `Q(zeta_m)`.
    pub fn cyclotomic_order(&self) -> Option<u64> {
        match &self.0.kind {
            Kind::Cyclo(c) => Some(c.m),
            _ => None,
        }
    }

    /// Characteristic; zero for cyclotomic fields.
    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            Kind::Cyclo(_) => 0,
            Kind::Prime(p) => *p,
            Kind::Ext(e) => e.p,
        }
    }

    /// Number of elements of a finite field.
    pub fn order(&self) -> Option<u128> {
        match &self.0.kind {
            Kind::Cyclo(_) => None,
            Kind::Prime(p) => Some(*p as u128),
            Kind::Ext(e) => Some(e.order()),
        }
    }

    /// Dimension over the prime field (over `Q` for cyclotomic fields).
    pub fn degree(&self) -> usize {
        match &self.0.kind {
            Kind::Cyclo(c) => c.phi,
            Kind::Prime(_) => 1,
            Kind::Ext(e) => e.k,
        }
    }

    pub(crate) fn cyclo_ctx(&self) -> Option<&CycloCtx> {
        match &self.0.kind {
            Kind::Cyclo(c) => Some(c),
            _ => None,
        }
    }

    pub fn element(&self, value: Value) -> FieldElement {
        FieldElement { field: self.clone(), value }
    }

    pub fn zero(&self) -> Value {
        match &self.0.kind {
            Kind::Cyclo(c) => Value::Cyclo(c.zero()),
            Kind::Prime(_) => Value::Fp(0),
            Kind::Ext(e) => Value::Ext(vec![0; e.k]),
        }
    }

    pub fn one(&self) -> Value {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Value {
        match &self.0.kind {
            Kind::Cyclo(c) => Value::Cyclo(c.from_integer(BigInt::from(n))),
            Kind::Prime(p) => Value::Fp(n.rem_euclid(*p as i64) as u64),
            Kind::Ext(e) => {
                let mut v = vec![0; e.k];
                v[0] = n.rem_euclid(e.p as i64) as u64;
                Value::Ext(v)
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Value {
        match &self.0.kind {
            Kind::Cyclo(c) => Value::Cyclo(c.from_integer(n.clone())),
            Kind::Prime(p) => Value::Fp(residue(n, &BigInt::from(*p), *p)),
            Kind::Ext(e) => {
                let mut v = vec![0; e.k];
                v[0] = residue(n, &BigInt::from(e.p), e.p);
                Value::Ext(v)
            }
        }
    }

    /// Image of a rational number; fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn from_rational(&self, r: &Rational) -> Result<Value> {
        match &self.0.kind {
            Kind::Cyclo(c) => Ok(Value::Cyclo(c.from_rational(r))),
            _ => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                self.div(&n, &d)
            }
        }
    }

    pub fn is_zero(&self, a: &Value) -> bool {
        match a {
            Value::Cyclo(v) => v.num.iter().all(Zero::is_zero),
            Value::Fp(x) => *x == 0,
            Value::Ext(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, a: &Value) -> bool {
        match (a, &self.0.kind) {
            (Value::Cyclo(v), Kind::Cyclo(c)) => c.is_one(v),
            (Value::Fp(x), _) => *x == 1,
            (Value::Ext(v), _) => v[0] == 1 && v[1..].iter().all(|&c| c == 0),
            _ => false,
        }
    }

    /// Whether `a` is a well-formed value of this field.
    pub fn contains(&self, a: &Value) -> bool {
        match (a, &self.0.kind) {
            (Value::Cyclo(v), Kind::Cyclo(c)) => v.num.len() == c.phi && v.den.is_positive(),
            (Value::Fp(x), Kind::Prime(p)) => x < p,
            (Value::Ext(v), Kind::Ext(e)) => v.len() == e.k && v.iter().all(|&c| c < e.p),
            _ => false,
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (a, b, &self.0.kind) {
            (Value::Cyclo(x), Value::Cyclo(y), Kind::Cyclo(c)) => Value::Cyclo(c.add(x, y)),
            (Value::Fp(x), Value::Fp(y), Kind::Prime(p)) => Value::Fp((x + y) % p),
            (Value::Ext(x), Value::Ext(y), Kind::Ext(e)) => Value::Ext(e.add(x, y)),
            _ => panic!("value does not belong to {}", self),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        match (a, b, &self.0.kind) {
            (Value::Cyclo(x), Value::Cyclo(y), Kind::Cyclo(c)) => Value::Cyclo(c.sub(x, y)),
            (Value::Fp(x), Value::Fp(y), Kind::Prime(p)) => Value::Fp((x + p - y) % p),
            (Value::Ext(x), Value::Ext(y), Kind::Ext(e)) => Value::Ext(e.sub(x, y)),
            _ => panic!("value does not belong to {}", self),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (a, &self.0.kind) {
            (Value::Cyclo(x), Kind::Cyclo(c)) => Value::Cyclo(c.neg(x)),
            (Value::Fp(x), Kind::Prime(p)) => Value::Fp((p - x) % p),
            (Value::Ext(x), Kind::Ext(e)) => Value::Ext(e.neg(x)),
            _ => panic!("value does not belong to {}", self),
        }
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (a, b, &self.0.kind) {
            (Value::Cyclo(x), Value::Cyclo(y), Kind::Cyclo(c)) => Value::Cyclo(c.mul(x, y)),
            (Value::Fp(x), Value::Fp(y), Kind::Prime(p)) => Value::Fp(x * y % p),
            (Value::Ext(x), Value::Ext(y), Kind::Ext(e)) => Value::Ext(e.mul(x, y)),
            _ => panic!("value does not belong to {}", self),
        }
    }

    /// `a * n` for an integer `n`.
    pub fn mul_int(&self, a: &Value, n: i64) -> Value {
        match (a, &self.0.kind) {
            (Value::Cyclo(x), Kind::Cyclo(c)) => Value::Cyclo(c.scale_int(x, &BigInt::from(n))),
            _ => self.mul(a, &self.from_i64(n)),
        }
    }

    pub fn inv(&self, a: &Value) -> Result<Value> {
        match (a, &self.0.kind) {
            (Value::Cyclo(x), Kind::Cyclo(c)) => c.inv(x).map(Value::Cyclo).ok_or(FieldError::DivisionByZero),
            (Value::Fp(x), Kind::Prime(p)) => inv_mod(*x, *p).map(Value::Fp).ok_or(FieldError::DivisionByZero),
            (Value::Ext(x), Kind::Ext(e)) => e.inv(x).map(Value::Ext).ok_or(FieldError::DivisionByZero),
            _ => panic!("value does not belong to {}", self),
        }
    }

    pub fn div(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Value, mut e: u128) -> Value {
        match (a, &self.0.kind) {
            (Value::Fp(x), Kind::Prime(p)) => {
                let e = if e >= *p as u128 && *x != 0 { e % (*p as u128 - 1) } else { e };
                Value::Fp(pow_mod(*x, e.min(u64::MAX as u128) as u64, *p))
            }
            (Value::Ext(x), Kind::Ext(ext)) => Value::Ext(ext.pow(x, e)),
            _ => {
                let mut base = a.clone();
                let mut acc = self.one();
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul(&acc, &base);
                    }
                    e >>= 1;
                    if e > 0 {
                        base = self.mul(&base, &base);
                    }
                }
                acc
            }
        }
    }

    /// `a^e` for a signed exponent.
    pub fn pow_signed(&self, a: &Value, e: i64) -> Result<Value> {
        if e >= 0 {
            Ok(self.pow(a, e as u128))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs() as u128))
        }
    }

    /// `zeta_m^k` in `Q(zeta_m)`.
    pub fn zeta_pow(&self, k: i64) -> Result<Value> {
        match &self.0.kind {
            Kind::Cyclo(c) => Ok(Value::Cyclo(c.zeta_pow(k))),
            _ => Err(FieldError::NotCyclotomic(self.descriptor().clone())),
        }
    }

    /// The class of `x` in `F_p[x]/(f)`.
    pub fn ext_generator(&self) -> Result<Value> {
        match &self.0.kind {
            Kind::Ext(e) => {
                let mut v = vec![0; e.k];
                if e.k == 1 {
                    v[0] = (e.p - e.minpoly[0]) % e.p;
                } else {
                    v[1] = 1;
                }
                Ok(Value::Ext(v))
            }
            _ => Err(FieldError::Invalid(format!("{} is not an extension field", self))),
        }
    }

    /// Smallest generator of the multiplicative group of a finite field in
    /// ascending representation order.
    pub fn multiplicative_generator(&self) -> Result<Value> {
        self.0
            .generator
            .get_or_init(|| self.search_generator())
            .clone()
    }

    fn search_generator(&self) -> Result<Value> {
        let q = self.order().ok_or_else(|| FieldError::NotFinite(self.descriptor().clone()))?;
        let order = q - 1;
        let factors = prime_factors(u64::try_from(order).map_err(|_| FieldError::Invalid("field too large".into()))?);
        let candidate = |n: u128| match &self.0.kind {
            Kind::Prime(_) => Value::Fp(n as u64),
            Kind::Ext(e) => Value::Ext(e.from_index(n)),
            Kind::Cyclo(_) => unreachable!(),
        };
        for n in 1..q {
            let g = candidate(n);
            if factors.iter().all(|&l| !self.is_one(&self.pow(&g, order / l as u128))) {
                return Ok(g);
            }
        }
        Err(FieldError::Invalid("no generator found".into()))
    }

    /// Canonical primitive `n`-th root of unity: `zeta_m^(m/n)` in `Q(zeta_m)`,
    /// `g^((q-1)/n)` for the smallest generator `g` of a finite field.
    pub fn primitive_root_of_unity(&self, n: u64) -> Result<RootOfUnity> {
        if n == 0 {
            return Err(FieldError::Invalid("root order must be >= 1".into()));
        }
        let none = || FieldError::NoRoot { order: n, field: self.descriptor().clone() };
        let value = match &self.0.kind {
            Kind::Cyclo(c) => {
                // Q(zeta_m) contains zeta_{2m} when m is odd.
                let m = if c.m % 2 == 1 { 2 * c.m } else { c.m };
                if m % n != 0 {
                    return Err(none());
                }
                let exp = (m / n) as i64;
                if c.m % 2 == 1 {
                    // zeta_{2m} = -zeta_m^((m+1)/2).
                    let half = (c.m as i64 + 1) / 2;
                    let z = self.neg(&Value::Cyclo(c.zeta_pow(half)));
                    self.pow_signed(&z, exp)?
                } else {
                    Value::Cyclo(c.zeta_pow(exp))
                }
            }
            _ => {
                let q = self.order().unwrap();
                if (q - 1) % n as u128 != 0 {
                    return Err(none());
                }
                let g = self.multiplicative_generator()?;
                self.pow(&g, (q - 1) / n as u128)
            }
        };
        Ok(RootOfUnity { value, order: n })
    }

    /// Whether `n` divides the order of the group of roots of unity.
    pub fn has_root_of_unity(&self, n: u64) -> bool {
        match &self.0.kind {
            Kind::Cyclo(c) => {
                let m = if c.m % 2 == 1 { 2 * c.m } else { c.m };
                n >= 1 && m % n == 0
            }
            _ => n >= 1 && (self.order().unwrap() - 1) % n as u128 == 0,
        }
    }

    /// Frobenius `a -> a^p` of a finite field.
    pub fn frobenius(&self, a: &Value) -> Result<Value> {
        match &self.0.kind {
            Kind::Prime(_) => Ok(a.clone()),
            Kind::Ext(e) => Ok(self.pow(a, e.p as u128)),
            Kind::Cyclo(_) => Err(FieldError::NotFinite(self.descriptor().clone())),
        }
    }

    /// `[a, a^p, a^(p^2), ...]` up to the first repetition.
    pub fn frobenius_conjugates(&self, a: &Value) -> Result<Vec<Value>> {
        let mut out = vec![a.clone()];
        loop {
            let next = self.frobenius(out.last().unwrap())?;
            if next == out[0] {
                return Ok(out);
            }
            out.push(next);
        }
    }

    /// Complex conjugation `zeta -> zeta^-1` of a cyclotomic field.
    pub fn conjugate(&self, a: &Value) -> Result<Value> {
        match (a, &self.0.kind) {
            (Value::Cyclo(x), Kind::Cyclo(c)) => Ok(Value::Cyclo(c.galois(x, -1))),
            _ => Err(FieldError::NotCyclotomic(self.descriptor().clone())),
        }
    }

    /// Automorphism `zeta -> zeta^k` for `k` coprime to `m`.
    pub fn galois(&self, a: &Value, k: i64) -> Result<Value> {
        match (a, &self.0.kind) {
            (Value::Cyclo(x), Kind::Cyclo(c)) => {
                if gcd(k.rem_euclid(c.m as i64) as u64, c.m) != 1 {
                    return Err(FieldError::Invalid(format!("{k} is not coprime to {}", c.m)));
                }
                Ok(Value::Cyclo(c.galois(x, k)))
            }
            _ => Err(FieldError::NotCyclotomic(self.descriptor().clone())),
        }
    }

    /// Whether this field is a subfield of `target` under the standard
    /// embedding.
    pub fn embeds_into(&self, target: &Field) -> bool {
        match (&self.0.kind, &target.0.kind) {
            (Kind::Cyclo(a), Kind::Cyclo(b)) => b.m % a.m == 0,
            (Kind::Prime(p), Kind::Prime(q)) => p == q,
            (Kind::Prime(p), Kind::Ext(e)) => *p == e.p,
            (Kind::Ext(_), Kind::Ext(_)) => self == target,
            _ => false,
        }
    }

    /// Image of `a` under the standard embedding into `target`:
    /// `zeta_m -> zeta_{m'}^(m'/m)`, and constants into extensions.
    pub fn embed(&self, a: &Value, target: &Field) -> Result<Value> {
        if self == target {
            return Ok(a.clone());
        }
        let fail = || FieldError::NoEmbedding(self.descriptor().clone(), target.descriptor().clone());
        match (a, &self.0.kind, &target.0.kind) {
            (Value::Cyclo(x), Kind::Cyclo(src), Kind::Cyclo(dst)) if dst.m % src.m == 0 => {
                Ok(Value::Cyclo(src.embed(x, dst)))
            }
            (Value::Fp(x), Kind::Prime(p), Kind::Ext(e)) if *p == e.p => {
                let mut v = vec![0; e.k];
                v[0] = *x;
                Ok(Value::Ext(v))
            }
            _ => Err(fail()),
        }
    }

    /// Preimage of `a` under the standard embedding of `base` into this
    /// field.
    pub fn restrict(&self, a: &Value, base: &Field) -> Result<Value> {
        if self == base {
            return Ok(a.clone());
        }
        match (a, &base.0.kind, &self.0.kind) {
            (Value::Ext(v), Kind::Prime(p), Kind::Ext(e)) if *p == e.p => {
                if v[1..].iter().any(|&c| c != 0) {
                    return Err(FieldError::NotInSubfield(base.descriptor().clone()));
                }
                Ok(Value::Fp(v[0]))
            }
            (Value::Cyclo(x), Kind::Cyclo(src), Kind::Cyclo(dst)) if dst.m % src.m == 0 => {
                // The image of Q(zeta_m) is spanned by powers of zeta_{m'}^(m'/m);
                // solve by matching against the embedded power basis.
                let step = (dst.m / src.m) as i64;
                let candidate = self.restrict_cyclo(x, src, dst, step);
                match candidate {
                    Some(v) if src.embed(&v, dst) == *x => Ok(Value::Cyclo(v)),
                    _ => Err(FieldError::NotInSubfield(base.descriptor().clone())),
                }
            }
            _ => Err(FieldError::NoEmbedding(base.descriptor().clone(), self.descriptor().clone())),
        }
    }

    fn restrict_cyclo(&self, x: &CycloValue, src: &CycloCtx, dst: &CycloCtx, step: i64) -> Option<CycloValue> {
        // Columns: images of zeta_m^i, i < phi(m); solve over Q by elimination.
        let cols: Vec<CycloValue> = (0..src.phi).map(|i| dst.zeta_pow(step * i as i64)).collect();
        let n = dst.phi;
        let k = src.phi;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                let mut row: Vec<Rational> = cols
                    .iter()
                    .map(|c| Rational::new(c.num[r].clone(), c.den.clone()))
                    .collect();
                row.push(Rational::new(x.num[r].clone(), x.den.clone()));
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..k {
            let Some(pr) = (pivot_row..n).find(|&r| !rows[r][col].is_zero()) else { continue };
            rows.swap(pivot_row, pr);
            let inv = rows[pivot_row][col].recip();
            for c in col..=k {
                rows[pivot_row][c] = &rows[pivot_row][c] * &inv;
            }
            for r in 0..n {
                if r != pivot_row && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for c in col..=k {
                        let t = &f * &rows[pivot_row][c];
                        rows[r][c] -= t;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        let mut coeffs = vec![Rational::zero(); k];
        for (i, &col) in pivots.iter().enumerate() {
            coeffs[col] = rows[i][k].clone();
        }
        Some(cyclotomic::from_rationals(&coeffs))
    }

    /// Coefficient strings: `"num/den"` per power-basis coefficient for
    /// cyclotomic fields, decimal residues for finite fields.
    pub fn encode(&self, a: &Value) -> Vec<String> {
        match a {
            Value::Cyclo(v) => v.num.iter().map(|c| {
                let r = Rational::new(c.clone(), v.den.clone());
                format!("{}/{}", r.numer(), r.denom())
            }).collect(),
            Value::Fp(x) => vec![x.to_string()],
            Value::Ext(v) => v.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn decode<S: AsRef<str>>(&self, coeffs: &[S]) -> Result<Value> {
        match &self.0.kind {
            Kind::Cyclo(c) => {
                if coeffs.len() != c.phi {
                    return Err(FieldError::Parse(format!(
                        "expected {} coefficients for {}, got {}",
                        c.phi,
                        self,
                        coeffs.len()
                    )));
                }
                let rats = coeffs.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>()?;
                Ok(Value::Cyclo(cyclotomic::from_rationals(&rats)))
            }
            Kind::Prime(p) => {
                if coeffs.len() != 1 {
                    return Err(FieldError::Parse(format!("expected 1 coefficient, got {}", coeffs.len())));
                }
                Ok(Value::Fp(parse_residue(coeffs[0].as_ref(), *p)?))
            }
            Kind::Ext(e) => {
                if coeffs.len() != e.k {
                    return Err(FieldError::Parse(format!("expected {} coefficients, got {}", e.k, coeffs.len())));
                }
                let v = coeffs.iter().map(|s| parse_residue(s.as_ref(), e.p)).collect::<Result<Vec<_>>>()?;
                Ok(Value::Ext(v))
            }
        }
    }

    /// A base-field scalar written as `a` or `a/b`.
    pub fn parse_scalar(&self, s: &str) -> Result<Value> {
        let r = parse_rational(s)?;
        self.from_rational(&r)
    }

    pub fn display(&self, a: &Value) -> String {
        match a {
            Value::Cyclo(v) => {
                let mut terms = Vec::new();
                for (i, c) in v.num.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let coeff = Rational::new(c.clone(), v.den.clone());
                    terms.push(match i {
                        0 => format!("{coeff}"),
                        1 => format!("({coeff})z"),
                        _ => format!("({coeff})z^{i}"),
                    });
                }
                if terms.is_empty() { "0".into() } else { terms.join(" + ") }
            }
            Value::Fp(x) => x.to_string(),
            Value::Ext(v) => format!("{v:?}"),
        }
    }

    /// Sum of `values`.
    pub fn sum<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> Value {
        values.into_iter().fold(self.zero(), |acc, v| self.add(&acc, v))
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || FieldError::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

fn parse_residue(s: &str, p: u64) -> Result<u64> {
    let v: u64 = s.trim().parse().map_err(|_| FieldError::Parse(format!("bad residue {s:?}")))?;
    if v >= p {
        return Err(FieldError::Parse(format!("residue {v} not below {p}")));
    }
    Ok(v)
}

/// A value tagged with its field; arithmetic checks that fields agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Value,
}

impl FieldElement {
    fn same(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(
                self.field.descriptor().clone(),
                other.field.descriptor().clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.field.element(self.field.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.field.element(self.field.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.field.element(self.field.mul(&self.value, &other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.field.element(self.field.div(&self.value, &other.value)?))
    }

    pub fn neg(&self) -> Self {
        self.field.element(self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.field.element(self.field.inv(&self.value)?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(self.field.element(self.field.pow_signed(&self.value, e)?))
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.display(&self.value))
    }
}

/// Frobenius conjugates `[a, a^p, ...]` of an element of a finite field.
pub fn frobenius_conjugates(a: &FieldElement) -> Result<Vec<FieldElement>> {
    Ok(a.field
        .frobenius_conjugates(&a.value)?
        .into_iter()
        .map(|v| a.field.element(v))
        .collect())
}

/// Smallest `k >= 0` with `sum_i c_i^k != 0`, and that sum.
pub fn power_sum_weight(conjugates: &[FieldElement]) -> Result<(u64, FieldElement)> {
    let field = &conjugates
        .first()
        .ok_or_else(|| FieldError::Invalid("empty conjugate list".into()))?
        .field;
    for c in conjugates {
        if &c.field != field {
            return Err(FieldError::Mismatch(field.descriptor().clone(), c.field.descriptor().clone()));
        }
    }
    let g = conjugates.len() as u64;
    for k in 0..g.max(1) {
        let s = field.sum(conjugates.iter().map(|c| field.pow(&c.value, k as u128)).collect::<Vec<_>>().iter());
        if !field.is_zero(&s) {
            return Ok((k, field.element(s)));
        }
    }
    Err(FieldError::Invalid("all power sums vanish".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta4_squared_is_minus_one() {
        let f = Field::cyclotomic(4).unwrap();
        let i = f.zeta_pow(1).unwrap();
        assert_eq!(f.mul(&i, &i), f.from_i64(-1));
    }

    #[test]
    fn division_in_f5() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.div(&f.from_i64(3), &f.from_i64(2)).unwrap(), Value::Fp(4));
        assert_eq!(f.div(&f.one(), &f.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn cyclotomic_inverse() {
        let f = Field::cyclotomic(12).unwrap();
        let z = f.zeta_pow(1).unwrap();
        let a = f.add(&f.add(&z, &f.from_i64(3)), &f.mul_int(&f.pow(&z, 3), -2));
        let inv = f.inv(&a).unwrap();
        assert!(f.is_one(&f.mul(&a, &inv)));
    }

    #[test]
    fn rational_inverse() {
        let f = Field::rationals();
        let a = f.from_rational(&Rational::new(BigInt::from(-3), BigInt::from(7))).unwrap();
        assert_eq!(f.encode(&f.inv(&a).unwrap()), vec!["-7/3".to_string()]);
    }

    #[test]
    fn odd_cyclotomic_contains_twice_order_roots() {
        let f = Field::cyclotomic(3).unwrap();
        let r = f.primitive_root_of_unity(6).unwrap();
        let z3 = f.mul(&r.value, &r.value);
        assert_eq!(z3, f.zeta_pow(1).unwrap());
        assert_eq!(f.pow(&r.value, 3), f.from_i64(-1));
    }

    #[test]
    fn f25_generator_and_frobenius() {
        let f = Field::finite_of_degree(5, 2).unwrap();
        assert_eq!(f.descriptor(), &FieldDescriptor::Extension { p: 5, minpoly: vec![2, 0, 1] });
        let w = f.primitive_root_of_unity(3).unwrap().value;
        let conj = f.frobenius_conjugates(&w).unwrap();
        assert_eq!(conj, vec![w.clone(), f.mul(&w, &w)]);
        assert_eq!(f.frobenius_conjugates(&f.zero()).unwrap(), vec![f.zero()]);
    }

    #[test]
    fn embedding_and_restriction() {
        let q3 = Field::cyclotomic(3).unwrap();
        let q12 = Field::cyclotomic(12).unwrap();
        let z3 = q3.zeta_pow(1).unwrap();
        let img = q3.embed(&z3, &q12).unwrap();
        assert_eq!(img, q12.zeta_pow(4).unwrap());
        assert_eq!(q12.restrict(&img, &q3).unwrap(), z3);
        assert!(q12.restrict(&q12.zeta_pow(1).unwrap(), &q3).is_err());
    }
}
