//! Good primes, factorable integers and the search for a factorable integer
//! in a short interval above a given bound.

use super::{factorize, is_prime, lcm, primes_up_to, NumberTheoryError, Result};

/// Explicit bounds defining which primes are good: `lower <= q <= upper` and
/// every prime power exactly dividing `q - 1` is at most `max_prime_power`.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodPrimeConfig {
    pub lower: u64,
    pub upper: u64,
    pub max_prime_power: u64,
    pub alpha: f64,
}

impl GoodPrimeConfig {
    pub fn new(lower: u64, upper: u64, max_prime_power: u64) -> Result<Self> {
        let cfg = Self { lower, upper, max_prime_power, alpha: 0.3 };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Bounds `x / (ln x)^c0 <= q <= x`, prime powers up to `x^alpha`.
    pub fn from_x(x: f64, alpha: f64, c0: f64) -> Self {
        let lower = if x > std::f64::consts::E { x / x.ln().powf(c0) } else { 2.0 };
        Self {
            lower: lower.ceil().max(2.0) as u64,
            upper: x.floor().max(2.0) as u64,
            max_prime_power: x.powf(alpha).floor().max(2.0) as u64,
            alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower > self.upper {
            return Err(NumberTheoryError::OutOfRange(format!(
                "empty interval [{}, {}]",
                self.lower, self.upper
            )));
        }
        if self.max_prime_power < 2 {
            return Err(NumberTheoryError::OutOfRange("max_prime_power must be >= 2".into()));
        }
        Ok(())
    }
}

pub fn is_good_prime(q: u64, config: &GoodPrimeConfig) -> bool {
    q >= config.lower
        && q <= config.upper
        && is_prime(q)
        && factorize(q - 1)
            .map(|f| f.iter().all(|pp| pp.value() <= config.max_prime_power))
            .unwrap_or(true)
}

/// All good primes under `config`, ascending.
pub fn good_primes(config: &GoodPrimeConfig) -> Vec<u64> {
    if config.lower > config.upper {
        return Vec::new();
    }
    primes_up_to(config.upper)
        .into_iter()
        .filter(|&q| is_good_prime(q, config))
        .collect()
}

/// `n` written as a product of distinct good primes.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorableWitness {
    pub n: u64,
    pub primes: Vec<u64>,
    pub config: GoodPrimeConfig,
}

impl FactorableWitness {
    pub fn new(primes: Vec<u64>, config: GoodPrimeConfig) -> Result<Self> {
        let mut primes = primes;
        primes.sort_unstable();
        if primes.windows(2).any(|w| w[0] == w[1]) {
            return Err(NumberTheoryError::OutOfRange("primes must be distinct".into()));
        }
        if let Some(&bad) = primes.iter().find(|&&q| !is_good_prime(q, &config)) {
            return Err(NumberTheoryError::OutOfRange(format!("{bad} is not good under config")));
        }
        let n = primes
            .iter()
            .try_fold(1u64, |acc, &q| acc.checked_mul(q))
            .ok_or_else(|| NumberTheoryError::OutOfRange("product overflows".into()))?;
        Ok(Self { n, primes, config })
    }

    /// A witness for a squarefree `n` whose primes are all accepted by a
    /// permissive config (interval `[2, n]`, prime powers up to `n`).
    pub fn from_squarefree(n: u64) -> Result<Self> {
        let f = factorize(n)?;
        if f.is_empty() || f.iter().any(|pp| pp.exponent > 1) {
            return Err(NumberTheoryError::OutOfRange(format!("{n} is not squarefree and > 1")));
        }
        let config = GoodPrimeConfig::new(2, n.max(2), n.max(2))?;
        Self::new(f.iter().map(|pp| pp.prime).collect(), config)
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Product of the `l` largest good primes.
pub fn find_factorable(l: usize, config: &GoodPrimeConfig) -> Result<FactorableWitness> {
    if l == 0 {
        return Err(NumberTheoryError::OutOfRange("l must be >= 1".into()));
    }
    let good = good_primes(config);
    if good.len() < l {
        return Err(NumberTheoryError::Infeasible(format!(
            "only {} good primes in [{}, {}], need {l}",
            good.len(),
            config.lower,
            config.upper
        )));
    }
    FactorableWitness::new(good[good.len() - l..].to_vec(), config.clone())
}

/// A one-parameter family of good-prime configurations together with the
/// admissible number of prime factors at each `x`.
///
/// With `g_k(x) = x / (ln x)^(c0 + k)`, the admissible counts are
/// `g_{lmin_exp}(x) <= l <= g_{lmax_exp}(x)`, clamped to at least one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalesFamily {
    pub alpha: f64,
    pub c0: f64,
    pub lmin_exp: f64,
    pub lmax_exp: f64,
    pub x_start: u64,
    pub x_max: u64,
}

impl ScalesFamily {
    /// A family loose enough to be nonempty for small bounds.
    pub fn relaxed() -> Self {
        Self { alpha: 0.5, c0: 1.0, lmin_exp: 3.0, lmax_exp: 1.0, x_start: 8, x_max: 1 << 20 }
    }

    pub fn config_at(&self, x: u64) -> GoodPrimeConfig {
        GoodPrimeConfig::from_x(x as f64, self.alpha, self.c0)
    }

    fn g(&self, x: u64, k: f64) -> f64 {
        let xf = x as f64;
        if xf <= std::f64::consts::E {
            return xf;
        }
        xf / xf.ln().powf(self.c0 + k)
    }

    /// Inclusive range of admissible prime counts at `x`.
    pub fn prime_count_range(&self, x: u64) -> (usize, usize) {
        let lo = self.g(x, self.lmin_exp).ceil().max(1.0) as usize;
        let hi = self.g(x, self.lmax_exp).floor().max(1.0) as usize;
        (lo, hi.max(lo))
    }

    /// Whether `primes` (distinct) form an admissible product at `x`.
    pub fn admits(&self, x: u64, primes: &[u64]) -> bool {
        let (lo, hi) = self.prime_count_range(x);
        let cfg = self.config_at(x);
        (lo..=hi).contains(&primes.len()) && primes.iter().all(|&q| is_good_prime(q, &cfg))
    }

    fn schedule(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::successors(Some(self.x_start.max(2)), |&x| x.checked_mul(2))
            .take_while(move |&x| x <= self.x_max)
    }
}

/// Diagnostics when the interval search finds nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalesFailure {
    pub k: u64,
    pub window: (u64, f64),
    pub base: Option<(u64, Vec<u64>)>,
    pub last_x: u64,
}

impl std::fmt::Display for ScalesFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "no factorable integer in ({}, {:.1}) up to x = {}; base product {:?}",
            self.k, self.window.1, self.last_x, self.base
        )
    }
}

fn window_upper(k: u64) -> f64 {
    let kf = k as f64;
    kf * kf.ln().powi(2)
}

fn in_window(n: u64, k: u64) -> bool {
    n > k && (n as f64) < window_upper(k)
}

/// Largest product of `l` distinct primes from `pool` (ascending) with
/// `l` in `[lo, hi]` and product at most `bound`.
fn best_product_below(pool: &[u64], lo: usize, hi: usize, bound: u64) -> Option<Vec<u64>> {
    fn dfs(
        pool: &[u64],
        start: usize,
        chosen: &mut Vec<u64>,
        prod: u64,
        lo: usize,
        hi: usize,
        bound: u64,
        best: &mut Option<(u64, Vec<u64>)>,
    ) {
        if chosen.len() >= lo && best.as_ref().map_or(true, |(b, _)| prod > *b) {
            *best = Some((prod, chosen.clone()));
        }
        if chosen.len() == hi {
            return;
        }
        for i in start..pool.len() {
            let Some(next) = prod.checked_mul(pool[i]) else { break };
            if next > bound {
                break;
            }
            chosen.push(pool[i]);
            dfs(pool, i + 1, chosen, next, lo, hi, bound, best);
            chosen.pop();
        }
    }
    let mut best = None;
    dfs(pool, 0, &mut Vec::new(), 1, lo, hi, bound, &mut best);
    best.map(|(_, primes)| primes)
}

/// Smallest admissible product from `pool` strictly above `bound`.
fn smallest_product_above(pool: &[u64], lo: usize, hi: usize, bound: u64) -> Option<Vec<u64>> {
    let limit = window_upper(bound).ceil() as u64;
    fn dfs(
        pool: &[u64],
        start: usize,
        chosen: &mut Vec<u64>,
        prod: u64,
        lo: usize,
        hi: usize,
        bound: u64,
        limit: u64,
        best: &mut Option<(u64, Vec<u64>)>,
    ) {
        if chosen.len() >= lo && prod > bound && best.as_ref().map_or(true, |(b, _)| prod < *b) {
            *best = Some((prod, chosen.clone()));
        }
        if chosen.len() == hi {
            return;
        }
        for i in start..pool.len() {
            let Some(next) = prod.checked_mul(pool[i]) else { break };
            if next > limit {
                break;
            }
            chosen.push(pool[i]);
            dfs(pool, i + 1, chosen, next, lo, hi, bound, limit, best);
            chosen.pop();
        }
    }
    let mut best = None;
    dfs(pool, 0, &mut Vec::new(), 1, lo, hi, bound, limit, &mut best);
    best.map(|(_, primes)| primes)
}

fn witness_at(family: &ScalesFamily, x: u64, primes: Vec<u64>) -> Result<FactorableWitness> {
    FactorableWitness::new(primes, family.config_at(x))
}

/// A factorable `N` with `K < N < K (ln K)^2`.
///
/// Start from the largest admissible product `N0 <= K` over the doubling
/// schedule of `x`. Then try, in order: multiplying in one more good prime,
/// swapping one prime of `N0` for a larger good prime, and doubling `x` so
/// that a larger prime count becomes admissible.
pub fn scales_search(
    k: u64,
    family: &ScalesFamily,
) -> std::result::Result<FactorableWitness, ScalesFailure> {
    let failure = |base: Option<(u64, Vec<u64>)>, last_x: u64| ScalesFailure {
        k,
        window: (k, window_upper(k)),
        base,
        last_x,
    };
    if k < 3 {
        return Err(failure(None, family.x_start));
    }

    let mut base: Option<(u64, u64, Vec<u64>)> = None;
    for x in family.schedule() {
        let (lo, hi) = family.prime_count_range(x);
        let pool = good_primes(&family.config_at(x));
        if let Some(primes) = best_product_below(&pool, lo, hi, k) {
            let n: u64 = primes.iter().product();
            if base.as_ref().map_or(true, |(b, _, _)| n > *b) {
                base = Some((n, x, primes));
            }
        }
    }

    let Some((n0, x0, primes0)) = base else {
        for x in family.schedule() {
            let (lo, hi) = family.prime_count_range(x);
            let pool = good_primes(&family.config_at(x));
            if let Some(primes) = smallest_product_above(&pool, lo, hi, k) {
                let n: u64 = primes.iter().product();
                if in_window(n, k) {
                    return witness_at(family, x, primes)
                        .map_err(|_| failure(None, x));
                }
            }
        }
        return Err(failure(None, family.x_max));
    };

    let mut x = x0;
    let mut last_x = x0;
    while x <= family.x_max {
        last_x = x;
        if family.admits(x, &primes0) {
            let (_, hi) = family.prime_count_range(x);
            let pool = good_primes(&family.config_at(x));
            if primes0.len() < hi {
                for &q in pool.iter().filter(|q| !primes0.contains(q)) {
                    if let Some(n) = n0.checked_mul(q) {
                        if in_window(n, k) {
                            let mut ps = primes0.clone();
                            ps.push(q);
                            return witness_at(family, x, ps).map_err(|_| failure(None, x));
                        }
                    }
                }
            }
            for (i, &qi) in primes0.iter().enumerate() {
                for &q in pool.iter().filter(|&&q| q > qi && !primes0.contains(&q)) {
                    let n = n0 / qi * q;
                    if in_window(n, k) {
                        let mut ps = primes0.clone();
                        ps[i] = q;
                        return witness_at(family, x, ps).map_err(|_| failure(None, x));
                    }
                }
            }
        }
        match x.checked_mul(2) {
            Some(next) => x = next,
            None => break,
        }
    }
    Err(failure(Some((n0, primes0)), last_x))
}

/// Cyclotomic order used when certifying `DFT_{target}` through the ambient
/// factorable size `witness.n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionAccount {
    pub order: u64,
    /// Root orders contributing to `order`, with a label for each.
    pub contributions: Vec<(String, u64)>,
    /// `order / target^3`.
    pub ratio_to_cube: f64,
}

/// `m = lcm(r(target), N, roots)` where `r(n)` is `2n` for even `n` and `n`
/// otherwise (the root needed to rescale `DFT_n` into a circulant), and
/// `roots` are the extra root orders introduced by nondegenerate
/// power-of-prime transforms inside the ambient construction.
pub fn extension_degree_account(
    witness: &FactorableWitness,
    target: u64,
    roots: &[u64],
) -> Result<ExtensionAccount> {
    if target == 0 || target > witness.n / 2 {
        return Err(NumberTheoryError::OutOfRange(format!(
            "target {target} must be in [1, {}]",
            witness.n / 2
        )));
    }
    let rescale = if target % 2 == 0 { 2 * target } else { target };
    let mut contributions = vec![("rescale".to_string(), rescale), ("ambient".to_string(), witness.n)];
    let mut order = lcm(rescale, witness.n);
    for &r in roots {
        contributions.push(("prime-power transform".to_string(), r));
        order = lcm(order, r);
    }
    let ratio_to_cube = order as f64 / (target as f64).powi(3);
    Ok(ExtensionAccount { order, contributions, ratio_to_cube })
}
