//! Certificates for `DFT_N` with `N` a product of distinct primes, built block
//! by block, and for circulant, Toeplitz and arbitrary-size Fourier matrices
//! through an ambient size of that form.

use super::gwh::scaled_fourier_diagonal;
use super::product::{product_parts, ProductPlan};
use super::transfer::{permute_columns, pull_back, sandwich_parts, Parts};
use super::{field_with_roots, half_order, negation, sqrt_root, Certificate, CertifyError, Provenance, Result};
use crate::field::{Field, Value};
use crate::linalg::{ExactMatrix, SparseChanges};
use crate::numtheory::{
    crt, factorize, inv_mod, is_squarefree, primitive_root, scales_search, FactorableWitness, ScalesFamily,
};
use crate::structured::{
    embed_circulant, embed_hankel, reversal, toeplitz_to_hankel, AbelianGroupSpec, MatrixDescriptor, MatrixKind,
};

/// Thresholds of the block construction. Absent values take the defaults
/// documented on each accessor of [`DftBlockPlan`].
#[derive(Clone, Debug, PartialEq)]
pub struct BlockParams {
    /// Subsets `S` with `|S| >= k0` receive changes.
    pub k0: Option<usize>,
    /// Rows and columns divisible by at least this many primes are counted
    /// into the rank budget.
    pub removal: Option<usize>,
    pub epsilon: f64,
    pub bucket_base: u64,
    pub split_threshold: usize,
    /// Symmetric-plan parameter for every prime-power factor.
    pub m: Option<usize>,
}

impl Default for BlockParams {
    fn default() -> Self {
        Self { k0: None, removal: None, epsilon: 1.0, bucket_base: 2, split_threshold: 1, m: Some(1) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DftBlockPlan {
    pub witness: FactorableWitness,
    pub params: BlockParams,
}

impl DftBlockPlan {
    pub fn new(witness: FactorableWitness) -> Self {
        Self { witness, params: BlockParams::default() }
    }

    pub fn n(&self) -> u64 {
        self.witness.n
    }

    /// Defaults to the number of primes: only the full subset is changed.
    pub fn k0(&self) -> usize {
        self.params.k0.unwrap_or(self.witness.len())
    }

    /// Defaults to one more than the number of primes: nothing is removed.
    pub fn removal(&self) -> usize {
        self.params.removal.unwrap_or(self.witness.len() + 1)
    }

    /// `mult_N(S)`.
    pub fn mult(&self, subset: &[usize]) -> u64 {
        subset.iter().map(|&s| self.witness.primes[s]).product()
    }

    /// `fact_N(S)`.
    pub fn fact(&self, subset: &[usize]) -> u64 {
        subset.iter().map(|&s| self.witness.primes[s] - 1).product()
    }

    fn product_plan(&self, factors: Vec<(u64, usize)>) -> Result<ProductPlan> {
        let k = factors.len();
        let plan = ProductPlan {
            factors,
            m: self.params.m.map(|m| vec![m; k]),
            epsilon: self.params.epsilon,
            bucket_base: self.params.bucket_base,
            split_threshold: self.params.split_threshold,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Root orders a certificate field must host.
    pub fn root_orders(&self) -> Result<Vec<u64>> {
        let mut out = vec![self.n()];
        for subset in subsets(self.witness.len()) {
            if subset.len() < self.k0() {
                continue;
            }
            let split = PrimePowerSplit::new(&group_factors(&self.witness.primes, &subset))?;
            if !split.factors.is_empty() {
                out.extend(self.product_plan(split.factors)?.root_orders());
            }
        }
        Ok(out)
    }
}

fn subsets(l: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..1usize << l).map(|mask| (0..l).filter(|i| mask >> i & 1 == 1).collect()).collect();
    out.sort_by_key(|s| s.len());
    out
}

/// `q_s - 1` for `s` in `S`, dropping trivial factors.
fn group_factors(primes: &[u64], subset: &[usize]) -> Vec<u64> {
    subset.iter().map(|&s| primes[s] - 1).filter(|&x| x > 1).collect()
}

fn group_of(factors: &[u64]) -> AbelianGroupSpec {
    // The trivial group is allowed here; it indexes 1x1 blocks.
    AbelianGroupSpec { invariant_factors: factors.to_vec() }
}

/// One block of `T_S`: rows `i = c1 (mod Q)`, columns `j = c2 (mod Q)` with
/// `Q = prod_{s not in S} q_s`, listed in discrete-log order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub c1: u64,
    pub c2: u64,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// The blocks of one subset and the function `f_S` on `prod_{s in S} Z_{q_s - 1}`
/// whose adjusted circulant every block equals.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetBlocks {
    pub subset: Vec<usize>,
    pub group: AbelianGroupSpec,
    pub f: Vec<Value>,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DftBlocks {
    pub n: u64,
    pub primes: Vec<u64>,
    pub subsets: Vec<SubsetBlocks>,
}

impl DftBlocks {
    /// Number of blocks of `S`, `prod_{s not in S} (2 q_s - 1)`.
    pub fn expected_block_count(&self, subset: &[usize]) -> usize {
        (0..self.primes.len())
            .filter(|s| !subset.contains(s))
            .map(|s| 2 * self.primes[s] as usize - 1)
            .product()
    }
}

/// Residue pairs `(c1, c2)` modulo `prod q` with `c1 c2 = 0` modulo each `q`.
fn zero_product_pairs(moduli: &[u64]) -> Vec<(u64, u64)> {
    let mut per: Vec<Vec<(u64, u64)>> = Vec::new();
    for &q in moduli {
        let mut v = Vec::new();
        for a in 0..q {
            for b in 0..q {
                if a * b % q == 0 {
                    v.push((a, b));
                }
            }
        }
        per.push(v);
    }
    let mut out = vec![(Vec::new(), Vec::new())];
    for v in &per {
        let mut next = Vec::new();
        for (xs, ys) in &out {
            for &(a, b) in v {
                let mut x2: Vec<u64> = xs.clone();
                let mut y2: Vec<u64> = ys.clone();
                x2.push(a);
                y2.push(b);
                next.push((x2, y2));
            }
        }
        out = next;
    }
    out.into_iter().map(|(xs, ys)| (crt(&xs, moduli), crt(&ys, moduli))).collect()
}

/// Block partition of `DFT_N` built with the primitive `N`-th root `omega`.
///
/// Checks that the blocks partition `[N] x [N]` and that every block equals
/// the adjusted circulant of `f_S`, with rows and columns in lexicographic
/// discrete-log order for the smallest primitive root of each `q_s`.
pub(crate) fn blocks_with_root(plan: &DftBlockPlan, omega: &Value, field: &Field) -> Result<DftBlocks> {
    let primes = plan.witness.primes.clone();
    let n = plan.n();
    if !is_squarefree(n) || primes.iter().product::<u64>() != n {
        return Err(CertifyError::Precondition(format!("{n} is not a product of the distinct primes {primes:?}")));
    }
    let l = primes.len();
    let nn = n as usize;
    let powers: Vec<Value> = (0..nn).map(|k| field.pow(omega, k as u128)).collect();
    if nn > 1 && field.is_one(&powers[1]) {
        return Err(CertifyError::Precondition("root is not primitive".into()));
    }
    let gens: Vec<u64> = primes.iter().map(|&q| primitive_root(q)).collect::<std::result::Result<_, _>>()?;
    // CRT idempotents: e_s = 1 mod q_s, 0 mod the others.
    let idem: Vec<u64> = (0..l)
        .map(|s| {
            let residues: Vec<u64> = (0..l).map(|t| u64::from(t == s)).collect();
            crt(&residues, &primes)
        })
        .collect();
    let mut covered = vec![0u8; nn * nn];
    let mut out = Vec::new();
    for subset in subsets(l) {
        let outside: Vec<usize> = (0..l).filter(|s| !subset.contains(s)).collect();
        let moduli: Vec<u64> = outside.iter().map(|&s| primes[s]).collect();
        let gfac = group_factors(&primes, &subset);
        let group = group_of(&gfac);
        let order = group.order();
        // Discrete-log coordinates only for the nontrivial factors.
        let active: Vec<usize> = subset.iter().copied().filter(|&s| primes[s] > 2).collect();
        let unit = |coords: &[u64], s: usize| -> u64 {
            match active.iter().position(|&a| a == s) {
                Some(k) => crate::numtheory::pow_mod(gens[s], coords[k], primes[s]),
                None => 1,
            }
        };
        let index_of = |c: u64, coords: &[u64]| -> usize {
            let mut residues = Vec::with_capacity(l);
            for s in 0..l {
                residues.push(if subset.contains(&s) { unit(coords, s) } else { c % primes[s] });
            }
            crt(&residues, &primes) as usize
        };
        let f: Vec<Value> = (0..order)
            .map(|x| {
                let coords = group.coords(x);
                let e = subset.iter().fold(0u64, |acc, &s| (acc + idem[s] * unit(&coords, s)) % n);
                powers[e as usize].clone()
            })
            .collect();
        let coords: Vec<Vec<u64>> = (0..order).map(|x| group.coords(x)).collect();
        let mut blocks = Vec::new();
        for (c1, c2) in zero_product_pairs(&moduli) {
            let rows: Vec<usize> = coords.iter().map(|a| index_of(c1, a)).collect();
            let cols: Vec<usize> = coords.iter().map(|b| index_of(c2, b)).collect();
            for (a, &i) in rows.iter().enumerate() {
                for (b, &j) in cols.iter().enumerate() {
                    covered[i * nn + j] += 1;
                    if powers[i * j % nn] != f[group.add(a, b)] {
                        return Err(CertifyError::Invariant(format!(
                            "block of S = {subset:?} differs from its circulant at ({i}, {j})"
                        )));
                    }
                }
            }
            blocks.push(Block { c1, c2, rows, cols });
        }
        out.push(SubsetBlocks { subset, group, f, blocks });
    }
    if covered.iter().any(|&c| c != 1) {
        return Err(CertifyError::Invariant("blocks do not partition [N] x [N]".into()));
    }
    Ok(DftBlocks { n, primes, subsets: out })
}

/// [`blocks_with_root`] with the canonical primitive `N`-th root of `field`.
pub fn dft_blocks(plan: &DftBlockPlan, field: &Field) -> Result<DftBlocks> {
    let omega = field.primitive_root_of_unity(plan.n())?;
    blocks_with_root(plan, &omega.value, field)
}

/// `G = prod Z_{n_i}` split into prime-power cyclic factors, regrouped by
/// prime power: `DFT_G[x, y] = (x)_t H_{t, c(t)} [rows[x], cols[y]]`.
struct PrimePowerSplit {
    factors: Vec<(u64, usize)>,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl PrimePowerSplit {
    fn new(invariant: &[u64]) -> Result<Self> {
        // (t, source factor, twist) per prime-power coordinate.
        let mut coords: Vec<(u64, usize, u64)> = Vec::new();
        for (i, &n) in invariant.iter().enumerate() {
            for pp in factorize(n)? {
                let t = pp.value();
                let twist = inv_mod((n / t) % t, t).expect("coprime cofactor");
                coords.push((t, i, twist));
            }
        }
        coords.sort_by_key(|c| c.0);
        let mut factors: Vec<(u64, usize)> = Vec::new();
        for &(t, _, _) in &coords {
            match factors.last_mut() {
                Some((u, c)) if *u == t => *c += 1,
                _ => factors.push((t, 1)),
            }
        }
        let group = group_of(invariant);
        let order = group.order();
        let index = |vals: &[u64]| vals.iter().zip(&coords).fold(0usize, |acc, (&v, c)| acc * c.0 as usize + v as usize);
        let mut rows = vec![0; order];
        let mut cols = vec![0; order];
        for x in 0..order {
            let xc = group.coords(x);
            let twisted: Vec<u64> = coords.iter().map(|&(t, i, c)| c * xc[i] % t).collect();
            let plain: Vec<u64> = coords.iter().map(|&(t, i, _)| xc[i] % t).collect();
            rows[x] = index(&twisted);
            cols[x] = index(&plain);
        }
        Ok(Self { factors, rows, cols })
    }
}

/// Parts of a certificate for the adjusted circulant of one subset:
/// `M(S) = (X Pi) D (X Pi)` with `X = DFT_G` certified through the
/// prime-power product.
fn subset_parts(plan: &DftBlockPlan, sb: &SubsetBlocks, field: &Field) -> Result<Parts> {
    let order = sb.group.order();
    let split = PrimePowerSplit::new(&sb.group.invariant_factors)?;
    if split.factors.is_empty() {
        let mut p = Provenance::new(format!("S = {:?}: trivial group", sb.subset));
        p.degenerate = true;
        return Ok(Parts { changes: SparseChanges::empty(field, 1, 1), rank: 1, sparsity: 0, provenance: p });
    }
    let pplan = plan.product_plan(split.factors.clone())?;
    let k = product_parts(&pplan, field, field)?;
    let x = pull_back(&k.changes, &split.rows, &split.cols)?;
    let a = Parts { changes: permute_columns(&x, &negation(&sb.group))?, ..k };
    let diag = scaled_fourier_diagonal(&sb.group, &sb.f, field)?;
    let mut out = sandwich_parts(&a, &diag, &a)?;
    out.rank = out.rank.min(order);
    out.provenance = out.provenance.then(format!(
        "S = {:?}: adjusted circulant over {:?} via prime-power factors {:?}",
        sb.subset, sb.group.invariant_factors, split.factors
    ));
    Ok(out)
}

/// Rank of the entries in blocks below `k0` on lines that are not removed.
/// The entries are powers of a primitive `N`-th root, so over a cyclotomic
/// field the rank is computed in `Q(zeta_N)`, which is isomorphic to the
/// subfield they generate.
fn uncovered_rank(plan: &DftBlockPlan, blocks: &DftBlocks, field: &Field) -> Result<usize> {
    let n = plan.n();
    let rebuilt = match field.cyclotomic_order() {
        Some(m) if m != n => {
            let small = Field::cyclotomic(n)?;
            let b = blocks_with_root(plan, &small.primitive_root_of_unity(n)?.value, &small)?;
            Some((small, b))
        }
        _ => None,
    };
    let (f, blocks) = match &rebuilt {
        Some((small, b)) => (small, b),
        None => (field, blocks),
    };
    let primes = &plan.witness.primes;
    let removed = |i: usize| primes.iter().filter(|&&q| i as u64 % q == 0).count() >= plan.removal();
    let mut uncovered = ExactMatrix::zeros(f, n as usize, n as usize);
    for sb in blocks.subsets.iter().filter(|sb| sb.subset.len() < plan.k0()) {
        for b in &sb.blocks {
            for (x, &i) in b.rows.iter().enumerate() {
                for (y, &j) in b.cols.iter().enumerate() {
                    if !removed(i) && !removed(j) {
                        uncovered.set(i, j, sb.f[sb.group.add(x, y)].clone());
                    }
                }
            }
        }
    }
    Ok(uncovered.rank())
}

/// Parts of a certificate for `DFT_N` built from `omega` inside `field`.
pub(crate) fn dft_parts(plan: &DftBlockPlan, omega: &Value, field: &Field) -> Result<Parts> {
    let blocks = blocks_with_root(plan, omega, field)?;
    let n = plan.n() as usize;
    let primes = &plan.witness.primes;
    let removed = |i: usize| primes.iter().filter(|&&q| i as u64 % q == 0).count() >= plan.removal();
    let removed_lines = (0..n).filter(|&i| removed(i)).count();
    let mut changes = SparseChanges::empty(field, n, n);
    let mut rank = 2 * removed_lines;
    let mut sparsity = 0;
    let mut provenance = Provenance::new(format!(
        "DFT_{n} blocks over primes {primes:?}, k0 = {}, removal = {}",
        plan.k0(),
        plan.removal()
    ));
    let mut any_changes = false;
    for sb in &blocks.subsets {
        if sb.subset.len() >= plan.k0() {
            let parts = subset_parts(plan, sb, field)?;
            for b in &sb.blocks {
                changes.scatter_add(&parts.changes, &b.rows, &b.cols)?;
            }
            any_changes |= !parts.changes.is_empty();
            rank += sb.blocks.len() * parts.rank;
            let outside: u64 = (0..primes.len()).filter(|s| !sb.subset.contains(s)).map(|s| primes[s]).product();
            sparsity += outside as usize * parts.sparsity;
            provenance = provenance.merge(&parts.provenance);
        }
    }
    let rest = uncovered_rank(plan, &blocks, field)?;
    rank = (rank + rest).min(n);
    provenance = provenance.then(format!("{removed_lines} removed lines, unchanged entries of rank {rest}"));
    provenance.degenerate |= !any_changes;
    Ok(Parts { changes, rank, sparsity, provenance })
}

/// Certificate for `DFT_N` over `field`, verified exactly.
pub fn dft_decompose(plan: &DftBlockPlan, field: &Field) -> Result<Certificate> {
    let n = plan.n();
    if !field.has_root_of_unity(n) {
        return Err(CertifyError::Precondition(format!("{field} has no primitive {n}-th root")));
    }
    let cert_field = cert_field_for(field, &plan.root_orders()?)?;
    let omega = field.embed(&field.primitive_root_of_unity(n)?.value, &cert_field)?;
    let parts = dft_parts(plan, &omega, &cert_field)?;
    parts.into_cert(MatrixDescriptor::new(MatrixKind::Dft { n }, field), &cert_field)?.verified()
}

/// Over finite fields the matrix and its changes must share the field, so
/// every root has to be present already.
fn cert_field_for(field: &Field, orders: &[u64]) -> Result<Field> {
    if field.is_finite() {
        if let Some(&o) = orders.iter().find(|&&o| !field.has_root_of_unity(o)) {
            return Err(CertifyError::Precondition(format!("{field} has no primitive {o}-th root")));
        }
        return Ok(field.clone());
    }
    field_with_roots(field, orders)
}

/// Ambient size and thresholds for circulant, Toeplitz and arbitrary-size
/// Fourier certificates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CirculantPlan {
    /// Squarefree ambient size; searched for when absent.
    pub ambient: Option<u64>,
    pub params: BlockParams,
}

/// Squarefree ambient size `>= bound`: the explicit one if given, else the
/// smallest squarefree size whose roots the field hosts (any size for
/// characteristic zero). [`ambient_by_search`] gives a factorable one.
fn choose_ambient(bound: u64, field: &Field, explicit: Option<u64>) -> Result<FactorableWitness> {
    if let Some(n0) = explicit {
        if n0 < bound {
            return Err(CertifyError::Precondition(format!("ambient {n0} is below {bound}")));
        }
        return Ok(FactorableWitness::from_squarefree(n0)?);
    }
    let limit = (bound.max(2) * 64).max(256);
    (bound.max(2)..=limit)
        .find(|&n| is_squarefree(n) && (!field.is_finite() || field.has_root_of_unity(n)))
        .map(FactorableWitness::from_squarefree)
        .transpose()?
        .ok_or_else(|| CertifyError::Infeasible(format!("no squarefree ambient size in [{bound}, {limit}] for {field}")))
}

/// Factorable ambient size in `(bound - 1, (bound - 1) ln(bound - 1)^2)`
/// from the interval search under the relaxed family.
pub fn ambient_by_search(bound: u64) -> Result<u64> {
    scales_search(bound.max(4) - 1, &ScalesFamily::relaxed())
        .map(|w| w.n)
        .map_err(|e| CertifyError::Infeasible(format!("no factorable ambient size: {e}")))
}

/// Parts for the adjusted circulant of `g` over `Z_{N0}`: `(F Pi) D (F Pi)`.
fn ambient_parts(plan: &DftBlockPlan, g: &[Value], field: &Field) -> Result<(Parts, Parts)> {
    let n0 = plan.n();
    let group = AbelianGroupSpec::cyclic(n0)?;
    let omega = field.primitive_root_of_unity(n0)?.value;
    let f = dft_parts(plan, &omega, field)?;
    let diag = scaled_fourier_diagonal(&group, g, field)?;
    let a = Parts { changes: permute_columns(&f.changes, &negation(&group))?, ..f.clone() };
    let mut out = sandwich_parts(&a, &diag, &a)?;
    out.provenance = out.provenance.then(format!("transfer through (F Pi) D (F Pi) over Z_{n0}"));
    Ok((out, f))
}

fn restrict(p: Parts, n: usize, label: &str) -> Parts {
    let idx: Vec<usize> = (0..n).collect();
    let changes = p.changes.submatrix(&idx, &idx);
    let provenance = p.provenance.then(format!("restricted to the upper-left {n}x{n} block ({label})"));
    Parts { changes, rank: p.rank.min(n), sparsity: p.sparsity.min(n), provenance }
}

fn ambient_field(field: &Field, witness: &FactorableWitness, params: &BlockParams) -> Result<(DftBlockPlan, Field)> {
    let plan = DftBlockPlan { witness: witness.clone(), params: params.clone() };
    let cert_field = cert_field_for(field, &plan.root_orders()?)?;
    Ok((plan, cert_field))
}

fn embed_all(values: &[Value], from: &Field, to: &Field) -> Result<Vec<Value>> {
    values.iter().map(|v| from.embed(v, to).map_err(CertifyError::from)).collect()
}

/// Certificate for the circulant with top row `f`: embed into `C(g)` over an
/// ambient `Z_{N0}` with `N0 >= 2N`, use `C(g) = F D (F Pi)`, and restrict.
pub fn circulant_decompose(f: &[Value], field: &Field, cplan: &CirculantPlan) -> Result<Certificate> {
    let n = f.len();
    if n == 0 {
        return Err(CertifyError::Precondition("empty top row".into()));
    }
    let witness = choose_ambient(2 * n as u64, field, cplan.ambient)?;
    let (plan, cert_field) = ambient_field(field, &witness, &cplan.params)?;
    let n0 = plan.n();
    let fk = embed_all(f, field, &cert_field)?;
    let g = embed_circulant(&fk, n0 as usize, &cert_field)?;
    let group = AbelianGroupSpec::cyclic(n0)?;
    let omega = cert_field.primitive_root_of_unity(n0)?.value;
    let fp = dft_parts(&plan, &omega, &cert_field)?;
    let right = Parts { changes: permute_columns(&fp.changes, &negation(&group))?, ..fp.clone() };
    let diag = scaled_fourier_diagonal(&group, &g, &cert_field)?;
    let mut full = sandwich_parts(&fp, &diag, &right)?;
    full.provenance = full.provenance.then(format!("transfer through F D (F Pi) over Z_{n0}"));
    let parts = restrict(full, n, "circulant");
    parts.into_cert(MatrixDescriptor::new(MatrixKind::Circulant { top_row: f.to_vec() }, field), &cert_field)?.verified()
}

/// Parts for the Hankel matrix with antidiagonals `h`, embedded into an
/// adjusted circulant over the plan's ambient size.
fn hankel_parts(plan: &DftBlockPlan, h: &[Value], field: &Field) -> Result<Parts> {
    let n = h.len().div_ceil(2);
    let g = embed_hankel(h, plan.n() as usize, field)?;
    let (full, _) = ambient_parts(plan, &g, field)?;
    Ok(restrict(full, n, "Hankel"))
}

/// Certificate for a Toeplitz matrix: reversing its columns gives a Hankel
/// matrix, which sits in an adjusted circulant over `Z_{N0}`, `N0 >= 2N - 1`.
pub fn toeplitz_decompose(diagonals: &[Value], field: &Field, cplan: &CirculantPlan) -> Result<Certificate> {
    if diagonals.len() % 2 == 0 {
        return Err(CertifyError::Precondition("Toeplitz needs 2N - 1 diagonals".into()));
    }
    let n = diagonals.len().div_ceil(2);
    let witness = choose_ambient(diagonals.len() as u64, field, cplan.ambient)?;
    let (plan, cert_field) = ambient_field(field, &witness, &cplan.params)?;
    let h = toeplitz_to_hankel(&embed_all(diagonals, field, &cert_field)?);
    let parts = hankel_parts(&plan, &h, &cert_field)?;
    let changes = permute_columns(&parts.changes, &reversal(n))?;
    let parts = Parts { changes, provenance: parts.provenance.then("columns reversed"), ..parts };
    parts
        .into_cert(MatrixDescriptor::new(MatrixKind::Toeplitz { diagonals: diagonals.to_vec() }, field), &cert_field)?
        .verified()
}

/// Certificate for `DFT_{N'}` of any size: `diag(zeta^(x^2)) DFT diag(zeta^(y^2))`
/// is the adjusted circulant of `h(z) = zeta^(z^2)`, a Hankel matrix that
/// embeds into an ambient adjusted circulant.
pub fn dft_any_decompose(n: u64, field: &Field, cplan: &CirculantPlan) -> Result<Certificate> {
    if n < 2 {
        return Err(CertifyError::Precondition("size must be at least 2".into()));
    }
    let witness = choose_ambient(2 * n - 1, field, cplan.ambient)?;
    let plan = DftBlockPlan { witness, params: cplan.params.clone() };
    let mut orders = plan.root_orders()?;
    orders.push(n);
    orders.push(half_order(n));
    let cert_field = cert_field_for(field, &orders)?;
    let desc_field = if field.has_root_of_unity(n) { field.clone() } else { cert_field.clone() };
    let omega = desc_field.embed(&desc_field.primitive_root_of_unity(n)?.value, &cert_field)?;
    let zeta = sqrt_root(&omega, n, &cert_field)?;
    let ord = zeta.order;
    let zpow: Vec<Value> = (0..ord).map(|k| cert_field.pow(&zeta.value, k as u128)).collect();
    let sq = |x: u64| ((x * x) % ord) as usize;
    let h: Vec<Value> = (0..2 * n - 1).map(|k| zpow[sq(k % n)].clone()).collect();
    let inv: Vec<Value> = (0..n).map(|x| zpow[(ord as usize - sq(x)) % ord as usize].clone()).collect();
    let parts = hankel_parts(&plan, &h, &cert_field)?;
    let changes = parts.changes.scale_and_permute(Some(&inv), Some(&inv), None, None)?;
    let parts = Parts { changes, provenance: parts.provenance.then("rescaled by zeta^(-x^2) on both sides"), ..parts };
    parts.into_cert(MatrixDescriptor::new(MatrixKind::Dft { n }, &desc_field), &cert_field)?.verified()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify;

    fn plan15() -> DftBlockPlan {
        DftBlockPlan::new(FactorableWitness::from_squarefree(15).unwrap())
    }

    #[test]
    fn fifteen_blocks() {
        let f = Field::cyclotomic(15).unwrap();
        let b = dft_blocks(&plan15(), &f).unwrap();
        for sb in &b.subsets {
            assert_eq!(sb.blocks.len(), b.expected_block_count(&sb.subset));
            assert_eq!(sb.group.order() as u64, plan15().fact(&sb.subset));
        }
        let full = b.subsets.iter().find(|s| s.subset.len() == 2).unwrap();
        assert_eq!(full.blocks.len(), 1);
        assert_eq!(full.group.invariant_factors, vec![2, 4]);
    }

    #[test]
    fn fifteen_certificate_verifies() {
        let f = Field::cyclotomic(15).unwrap();
        let cert = dft_decompose(&plan15(), &f).unwrap();
        assert!(verify(&cert).passed());
    }

    #[test]
    fn small_circulant_over_finite_field() {
        let f = Field::prime(31).unwrap();
        let row: Vec<Value> = [1, 2, 3].iter().map(|&v| f.from_i64(v)).collect();
        let plan = CirculantPlan { ambient: Some(6), ..Default::default() };
        let cert = circulant_decompose(&row, &f, &plan).unwrap();
        assert!(verify(&cert).passed());
    }

    #[test]
    fn any_size_fourier() {
        let q = Field::rationals();
        let plan = CirculantPlan { ambient: Some(5), ..Default::default() };
        let cert = dft_any_decompose(3, &q, &plan).unwrap();
        assert!(verify(&cert).passed());
    }
}
