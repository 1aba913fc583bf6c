//! Index tuples in `Z_d^n`, permutation classes, and the vanishing and
//! change-support sets used by the GWH construction.
//!
//! Tuples are ordered lexicographically with the first entry most
//! significant, which is also the row order of `H_{d,n} = DFT_d^{(x) n}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError, RootOfUnity, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TupleError {
    #[error("entry {entry} out of range for d = {d}")]
    OutOfRange { entry: u32, d: u32 },
    #[error("need d >= 2, got {0}")]
    BadModulus(u32),
    #[error("plan needs 1 <= d*m <= n, got d = {d}, n = {n}, m = {m}")]
    BadPlan { d: u32, n: usize, m: usize },
    #[error("root of unity has order {got}, expected {expected}")]
    RootOrder { got: u64, expected: u64 },
    #[error("function table has {got} values, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type Result<T> = std::result::Result<T, TupleError>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tuple {
    pub d: u32,
    pub entries: Vec<u32>,
}

impl Tuple {
    pub fn new(d: u32, entries: Vec<u32>) -> Result<Self> {
        if d < 2 {
            return Err(TupleError::BadModulus(d));
        }
        if let Some(&entry) = entries.iter().find(|&&e| e >= d) {
            return Err(TupleError::OutOfRange { entry, d });
        }
        Ok(Self { d, entries })
    }

    pub fn from_index(d: u32, n: usize, mut index: usize) -> Self {
        let mut entries = vec![0u32; n];
        for e in entries.iter_mut().rev() {
            *e = (index % d as usize) as u32;
            index /= d as usize;
        }
        Self { d, entries }
    }

    pub fn index(&self) -> usize {
        self.entries.iter().fold(0usize, |acc, &e| acc * self.d as usize + e as usize)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `I . J mod d`.
    pub fn dot(&self, other: &Self) -> u32 {
        let s: u64 = self.entries.iter().zip(&other.entries).map(|(&a, &b)| a as u64 * b as u64).sum();
        (s % self.d as u64) as u32
    }

    /// Occurrences of each value `0..d`.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0usize; self.d as usize];
        for &e in &self.entries {
            c[e as usize] += 1;
        }
        c
    }

    pub fn class(&self) -> TupleClass {
        let mut sorted = self.entries.clone();
        sorted.sort_unstable();
        TupleClass { d: self.d, sorted_entries: sorted }
    }
}

/// A permutation class, represented by its sorted member.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TupleClass {
    pub d: u32,
    pub sorted_entries: Vec<u32>,
}

impl TupleClass {
    pub fn representative(&self) -> Tuple {
        Tuple { d: self.d, entries: self.sorted_entries.clone() }
    }

    pub fn size(&self) -> u128 {
        multinomial(&self.representative().counts())
    }

    /// Every distinct permutation, in increasing index order.
    pub fn members(&self) -> Vec<Tuple> {
        let mut cur = self.sorted_entries.clone();
        let mut out = vec![Tuple { d: self.d, entries: cur.clone() }];
        while next_permutation(&mut cur) {
            out.push(Tuple { d: self.d, entries: cur.clone() });
        }
        out
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else { return false };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// `(sum c)! / prod c!`.
pub fn multinomial(counts: &[usize]) -> u128 {
    let mut acc = 1u128;
    let mut total = 0u128;
    for &c in counts {
        for k in 1..=c as u128 {
            total += 1;
            acc = acc * total / k;
        }
    }
    acc
}

/// The class of `t` and its size.
pub fn perm_class(t: &Tuple) -> (TupleClass, u128) {
    let class = t.class();
    let size = class.size();
    (class, size)
}

/// All classes of `Z_d^n`, in increasing order of representative.
pub fn all_classes(d: u32, n: usize) -> Vec<TupleClass> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        out.push(TupleClass { d, sorted_entries: cur.clone() });
        // next non-decreasing sequence
        let Some(i) = (0..n).rev().find(|&i| cur[i] + 1 < d) else { break };
        let v = cur[i] + 1;
        for x in cur[i..].iter_mut() {
            *x = v;
        }
    }
    out
}

/// Vanishing target and change support for the symmetric-function
/// construction on `Z_d^n`.
///
/// `S` fixes the first `d*m` coordinates to `m` copies of each value
/// `0, 1, .., d-1` and leaves the rest free, so its permutation closure is the
/// set of tuples in which every value occurs at least `m` times. The change
/// support is `T_{dm}`, the tuples with at least `d*m` zero entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SPlan {
    pub d: u32,
    pub n: usize,
    pub m: usize,
    pub s: Vec<Tuple>,
    pub t_support: Vec<TupleClass>,
}

impl SPlan {
    /// Distinct classes met by `S`.
    pub fn s_classes(&self) -> Vec<TupleClass> {
        self.s.iter().map(Tuple::class).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// `|T_{dm}|`.
    pub fn t_size(&self) -> u128 {
        self.t_support.iter().map(TupleClass::size).sum()
    }

    pub fn order(&self) -> usize {
        (self.d as usize).pow(self.n as u32)
    }
}

pub fn build_s_plan(d: u32, n: usize, m: usize) -> Result<SPlan> {
    if d < 2 {
        return Err(TupleError::BadModulus(d));
    }
    let dm = d as usize * m;
    if m == 0 || dm > n {
        return Err(TupleError::BadPlan { d, n, m });
    }
    let prefix: Vec<u32> = (0..d).flat_map(|v| std::iter::repeat(v).take(m)).collect();
    let free = n - dm;
    let s = (0..(d as usize).pow(free as u32))
        .map(|k| {
            let tail = Tuple::from_index(d, free, k);
            let mut entries = prefix.clone();
            entries.extend(tail.entries);
            Tuple { d, entries }
        })
        .collect();
    let t_support = all_classes(d, n)
        .into_iter()
        .filter(|c| c.sorted_entries.iter().take_while(|&&e| e == 0).count() >= dm)
        .collect();
    Ok(SPlan { d, n, m, s, t_support })
}

/// `|perm(S)|`: tuples in which every value occurs at least `m` times.
pub fn count_perm_s(plan: &SPlan) -> u128 {
    fn go(d: usize, left: usize, m: usize, counts: &mut Vec<usize>, acc: &mut u128) {
        if counts.len() == d - 1 {
            if left >= m {
                counts.push(left);
                *acc += multinomial(counts);
                counts.pop();
            }
            return;
        }
        for c in m..=left {
            counts.push(c);
            go(d, left - c, m, counts, acc);
            counts.pop();
        }
    }
    let mut acc = 0;
    go(plan.d as usize, plan.n, plan.m, &mut Vec::new(), &mut acc);
    acc
}

/// Whether `t` lies in the permutation closure of the plan's `S`.
pub fn in_perm_s(plan: &SPlan, t: &Tuple) -> bool {
    t.counts().iter().all(|&c| c >= plan.m)
}

/// `m = ceil(n (1 - delta) / d)` with `delta = eps / (10 ln(1/eps))`, clamped to
/// `[1, n/d]`.
pub fn m_from_epsilon(d: u32, n: usize, eps: f64) -> usize {
    let delta = eps / (10.0 * (1.0 / eps).ln());
    let m = (n as f64 * (1.0 - delta) / d as f64).ceil() as usize;
    m.clamp(1, (n / d as usize).max(1))
}

/// Evaluates `P_f` at the points `omega^[J]` for a table `f` indexed by tuple
/// index.
pub struct PfEvaluator<'a> {
    field: &'a Field,
    d: u32,
    n: usize,
    powers: Vec<Value>,
}

impl<'a> PfEvaluator<'a> {
    pub fn new(field: &'a Field, omega: &RootOfUnity, n: usize) -> Result<Self> {
        let d = omega.order;
        if d < 2 {
            return Err(TupleError::BadModulus(d as u32));
        }
        let powers = (0..d).map(|k| field.pow(&omega.value, k as u128)).collect();
        Ok(Self { field, d: d as u32, n, powers })
    }

    /// `sum_I f(I) omega^(I.J)`.
    pub fn eval(&self, f: &[Value], j: &Tuple) -> Result<Value> {
        let size = (self.d as usize).pow(self.n as u32);
        if f.len() != size {
            return Err(TupleError::TableSize { got: f.len(), expected: size });
        }
        if j.d != self.d || j.len() != self.n {
            return Err(TupleError::RootOrder { got: self.d as u64, expected: j.d as u64 });
        }
        let fld = self.field;
        let mut by_exponent = vec![fld.zero(); self.d as usize];
        for (idx, v) in f.iter().enumerate() {
            if fld.is_zero(v) {
                continue;
            }
            let e = Tuple::from_index(self.d, self.n, idx).dot(j) as usize;
            by_exponent[e] = fld.add(&by_exponent[e], v);
        }
        Ok(by_exponent
            .iter()
            .zip(&self.powers)
            .filter(|(s, _)| !fld.is_zero(s))
            .fold(fld.zero(), |acc, (s, w)| fld.add(&acc, &fld.mul(s, w))))
    }

    /// Values at every `J` in index order.
    pub fn eval_all(&self, f: &[Value]) -> Result<Vec<Value>> {
        (0..(self.d as usize).pow(self.n as u32))
            .map(|k| self.eval(f, &Tuple::from_index(self.d, self.n, k)))
            .collect()
    }
}

/// `P_f(omega^[J])` for a single point.
pub fn eval_pf(field: &Field, f: &[Value], omega: &RootOfUnity, j: &Tuple) -> Result<Value> {
    if omega.order != j.d as u64 {
        return Err(TupleError::RootOrder { got: omega.order, expected: j.d as u64 });
    }
    PfEvaluator::new(field, omega, j.len())?.eval(f, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate_counts(d: u32, n: usize, m: usize) -> usize {
        (0..(d as usize).pow(n as u32))
            .filter(|&k| Tuple::from_index(d, n, k).counts().iter().all(|&c| c >= m))
            .count()
    }

    #[test]
    fn multinomial_sizes() {
        assert_eq!(perm_class(&Tuple::new(2, vec![0, 0, 1]).unwrap()).1, 3);
        assert_eq!(perm_class(&Tuple::new(3, vec![0, 1, 2]).unwrap()).1, 6);
        assert_eq!(perm_class(&Tuple::new(2, vec![1, 1, 1]).unwrap()).1, 1);
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for (d, n) in [(2u32, 8usize), (3, 4), (4, 3), (5, 2)] {
            let total: u128 = all_classes(d, n).iter().map(TupleClass::size).sum();
            assert_eq!(total, (d as u128).pow(n as u32));
        }
    }

    #[test]
    fn members_enumerate_class() {
        let c = Tuple::new(3, vec![2, 0, 0, 1]).unwrap().class();
        let members = c.members();
        assert_eq!(members.len() as u128, c.size());
        assert!(members.windows(2).all(|w| w[0].index() < w[1].index()));
    }

    #[test]
    fn plan_counts_match_enumeration() {
        let p = build_s_plan(2, 8, 3).unwrap();
        assert_eq!(p.s.len(), 4);
        assert_eq!(p.t_size(), 37);
        assert_eq!(p.t_support.len(), 3);
        assert_eq!(count_perm_s(&p), 182);
        assert_eq!(count_perm_s(&p) as usize, enumerate_counts(2, 8, 3));

        let p = build_s_plan(3, 4, 1).unwrap();
        assert_eq!(p.s.len(), 3);
        assert_eq!(count_perm_s(&p), 36);
        assert_eq!(p.t_size(), 9);
        assert_eq!(count_perm_s(&p) as usize, enumerate_counts(3, 4, 1));

        let p = build_s_plan(2, 2, 1).unwrap();
        assert_eq!(p.s, vec![Tuple::new(2, vec![0, 1]).unwrap()]);
        assert_eq!(count_perm_s(&p), 2);
    }

    #[test]
    fn plan_rejects_oversized_m() {
        assert!(build_s_plan(3, 2, 1).is_err());
        assert!(build_s_plan(2, 4, 0).is_err());
    }

    #[test]
    fn pf_small_cases() {
        let q = Field::rationals();
        let omega = q.primitive_root_of_unity(2).unwrap();
        let ones = vec![q.one(); 2];
        let j = Tuple::new(2, vec![1]).unwrap();
        assert!(q.is_zero(&eval_pf(&q, &ones, &omega, &j).unwrap()));
        let mut delta = vec![q.zero(); 8];
        delta[0] = q.one();
        let ev = PfEvaluator::new(&q, &omega, 3).unwrap();
        assert!(ev.eval_all(&delta).unwrap().iter().all(|v| q.is_one(v)));
    }
}
