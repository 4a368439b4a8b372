//! Exhaustive searches for perfect and unitary perfect polynomials.
//!
//! [`search_structured`] enumerates `x^a (x+1)^b prod P_i^(h_i)` over Mersenne
//! primes `P_i`, matching prime exponents of `A` and of its divisor sum as
//! sparse vectors. [`search_bruteforce`] tests every polynomial up to a small
//! degree with its own `u64` arithmetic and shares no code with the
//! structured route beyond the final report.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::divisors::{self, Mode, PerfectionReport};
use crate::error::{Error, Result};
use crate::factor;
use crate::mersenne::{self, catalog};
use crate::poly::Poly;

/// Largest degree the brute-force oracle accepts.
pub const BRUTE_MAX_DEGREE: usize = 18;

/// Largest degree the structured search accepts.
pub const STRUCTURED_MAX_DEGREE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Odd primes restricted to Mersenne primes.
    MersenneRestricted,
    /// Every polynomial.
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_degree: usize,
    pub mode: Mode,
    pub family: Family,
    pub seed: u64,
    /// Keep unitary hits that are squares of other hits.
    pub all_powers: bool,
}

impl SearchConfig {
    pub fn new(max_degree: usize, mode: Mode, family: Family) -> SearchConfig {
        SearchConfig {
            max_degree,
            mode,
            family,
            seed: factor::DEFAULT_SEED,
            all_powers: false,
        }
    }
}

/// A divisor-sum contribution: (prime index, exponent) pairs.
type Sparse = Vec<(usize, u32)>;

/// `P^h` together with the factored divisor sum of `P^h`.
#[derive(Debug, Clone)]
struct Part {
    prime: usize,
    exp: u32,
    degree: usize,
    sum: Sparse,
}

/// Index 0 is `x`, index 1 is `x + 1`, the rest are Mersenne primes.
struct PrimeIndex {
    primes: Vec<Poly>,
    lookup: HashMap<Poly, usize>,
}

impl PrimeIndex {
    fn new(max_degree: usize) -> PrimeIndex {
        let mut primes = vec![Poly::x(), Poly::x_plus_one()];
        primes.extend(
            mersenne::enumerate_mersenne_primes(max_degree as u32)
                .into_iter()
                .map(|m| m.poly),
        );
        let lookup = primes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PrimeIndex { primes, lookup }
    }

    /// Factors `sum` over the index; `None` if some prime is outside it.
    fn sparse(&self, sum: &Poly, seed: u64) -> Result<Option<Sparse>> {
        let f = factor::factorize_seeded(sum, seed)?;
        Ok(f.factors()
            .iter()
            .map(|(p, m)| self.lookup.get(p).map(|&i| (i, *m)))
            .collect())
    }
}

struct Tables {
    index: PrimeIndex,
    /// Parts per odd prime index, ascending exponent.
    odd_parts: Vec<Vec<Part>>,
    /// `x^a` and `(x+1)^b` parts by exponent; `None` when not allowed.
    x_parts: Vec<Option<Part>>,
    y_parts: Vec<Option<Part>>,
}

fn build_part(index: &PrimeIndex, prime: usize, exp: u32, mode: Mode, seed: u64) -> Result<Option<Part>> {
    let p = &index.primes[prime];
    let sum = mode.prime_power_sum(p, exp)?;
    Ok(index.sparse(&sum, seed)?.map(|sum| Part {
        prime,
        exp,
        degree: p.deg() * exp as usize,
        sum,
    }))
}

fn build_tables(cfg: &SearchConfig) -> Result<Tables> {
    let d = cfg.max_degree;
    let index = PrimeIndex::new(d);
    let n = index.primes.len();
    let mut odd_parts = vec![Vec::new(); n];
    let jobs: Vec<(usize, u32)> = (2..n)
        .flat_map(|i| {
            let deg = index.primes[i].deg();
            (1..=(d / deg) as u32).map(move |h| (i, h))
        })
        .collect();
    let built: Vec<Option<Part>> = jobs
        .par_iter()
        .map(|&(i, h)| build_part(&index, i, h, cfg.mode, cfg.seed))
        .collect::<Result<_>>()?;
    for part in built.into_iter().flatten() {
        odd_parts[part.prime].push(part);
    }
    let linear = |prime: usize| -> Result<Vec<Option<Part>>> {
        (0..=d as u32)
            .map(|e| {
                if e == 0 {
                    Ok(Some(Part { prime, exp: 0, degree: 0, sum: Vec::new() }))
                } else {
                    build_part(&index, prime, e, cfg.mode, cfg.seed)
                }
            })
            .collect()
    };
    let x_parts = linear(0)?;
    let y_parts = linear(1)?;
    Ok(Tables { index, odd_parts, x_parts, y_parts })
}

/// Odd primes that can occur in a hit: each must appear in the divisor sum of
/// some usable part of a different prime, where a part is usable when every
/// prime of its divisor sum can itself occur. Iterated to a fixed point.
fn producible(t: &Tables) -> Vec<bool> {
    let n = t.index.primes.len();
    let mut alive = vec![true; n];
    loop {
        let usable = |p: &Part, alive: &[bool]| alive[p.prime] && p.sum.iter().all(|&(q, _)| alive[q]);
        let mut produced = vec![false; n];
        produced[0] = true;
        produced[1] = true;
        let all_parts = t
            .odd_parts
            .iter()
            .flatten()
            .chain(t.x_parts.iter().flatten())
            .chain(t.y_parts.iter().flatten());
        for part in all_parts {
            if usable(part, &alive) {
                for &(q, _) in &part.sum {
                    if q != part.prime {
                        produced[q] = true;
                    }
                }
            }
        }
        let next: Vec<bool> = alive.iter().zip(&produced).map(|(a, p)| *a && *p).collect();
        if next == alive {
            return alive;
        }
        alive = next;
    }
}

struct Dfs<'a> {
    t: &'a Tables,
    alive: &'a [bool],
    order: &'a [usize],
    max_degree: usize,
    /// Exponent of each prime in the candidate (odd primes once decided).
    exps: Vec<u32>,
    /// Accumulated divisor-sum exponent of each prime.
    contrib: Vec<u32>,
    decided: Vec<bool>,
    hits: Vec<Vec<u32>>,
}

impl Dfs<'_> {
    fn add(&mut self, part: &Part, sign: i64) {
        for &(q, m) in &part.sum {
            self.contrib[q] = (self.contrib[q] as i64 + sign * m as i64) as u32;
        }
    }

    fn over_budget(&self) -> bool {
        (2..self.exps.len()).any(|q| self.decided[q] && self.contrib[q] > self.exps[q])
    }

    fn usable(&self, part: &Part) -> bool {
        part.sum.iter().all(|&(q, _)| self.alive[q])
    }

    fn descend(&mut self, depth: usize, used: usize) {
        if depth == self.order.len() {
            self.close(used);
            return;
        }
        let i = self.order[depth];
        self.decided[i] = true;
        self.exps[i] = 0;
        if !self.over_budget() {
            self.descend(depth + 1, used);
        }
        let t = self.t;
        for part in &t.odd_parts[i] {
            if used + part.degree > self.max_degree {
                break;
            }
            if !self.usable(part) {
                continue;
            }
            self.exps[i] = part.exp;
            self.add(part, 1);
            if !self.over_budget() {
                self.descend(depth + 1, used + part.degree);
            }
            self.add(part, -1);
        }
        self.exps[i] = 0;
        self.decided[i] = false;
    }

    /// Chooses the exponents of `x` and `x + 1` and records exact matches.
    fn close(&mut self, used: usize) {
        let room = self.max_degree - used;
        let t = self.t;
        for b in 0..=room {
            let Some(yp) = &t.y_parts[b] else { continue };
            if !self.usable(yp) {
                continue;
            }
            let from_y = |q: usize| yp.sum.iter().find(|&&(r, _)| r == q).map_or(0, |&(_, m)| m);
            let a = (self.contrib[0] + from_y(0)) as usize;
            if a + b > room {
                continue;
            }
            let Some(xp) = &t.x_parts[a] else { continue };
            if !self.usable(xp) {
                continue;
            }
            let mut total = self.contrib.clone();
            for &(q, m) in xp.sum.iter().chain(&yp.sum) {
                total[q] += m;
            }
            let mut exps = self.exps.clone();
            exps[0] = a as u32;
            exps[1] = b as u32;
            if total == exps && exps.iter().any(|&e| e > 0) {
                self.hits.push(exps);
            }
        }
    }
}

/// Structured search over `x^a (x+1)^b prod P_i^(h_i)` with Mersenne `P_i`.
/// Every returned polynomial has been re-checked with [`divisors::check`].
pub fn search_structured(cfg: &SearchConfig) -> Result<Vec<(Poly, PerfectionReport)>> {
    if cfg.family != Family::MersenneRestricted {
        return Err(Error::InvalidArgument(
            "structured search covers the Mersenne family only".into(),
        ));
    }
    if cfg.max_degree > STRUCTURED_MAX_DEGREE {
        return Err(Error::Budget(format!(
            "structured search limited to degree {STRUCTURED_MAX_DEGREE}"
        )));
    }
    if cfg.max_degree < 1 {
        return Ok(Vec::new());
    }
    let t = build_tables(cfg)?;
    let alive = producible(&t);
    let n = t.index.primes.len();
    let mut order: Vec<usize> = (2..n).filter(|&i| alive[i]).collect();
    order.sort_by(|&i, &j| t.index.primes[j].cmp(&t.index.primes[i]));

    // split on the exponent of the first prime
    let first_choices: Vec<Option<&Part>> = match order.first() {
        None => vec![None],
        Some(&i) => std::iter::once(None)
            .chain(t.odd_parts[i].iter().map(Some))
            .collect(),
    };
    let exps_list: Vec<Vec<u32>> = first_choices
        .par_iter()
        .flat_map_iter(|choice| {
            let mut dfs = Dfs {
                t: &t,
                alive: &alive,
                order: &order,
                max_degree: cfg.max_degree,
                exps: vec![0; n],
                contrib: vec![0; n],
                decided: vec![false; n],
                hits: Vec::new(),
            };
            let mut used = 0;
            if let Some(&i) = order.first() {
                dfs.decided[i] = true;
                if let Some(part) = choice {
                    if part.degree > cfg.max_degree || !dfs.usable(part) {
                        return Vec::new();
                    }
                    dfs.exps[i] = part.exp;
                    dfs.add(part, 1);
                    used = part.degree;
                }
                if !dfs.over_budget() {
                    dfs.descend(1, used);
                }
            } else {
                dfs.descend(0, 0);
            }
            dfs.hits
        })
        .collect();

    let mut polys: Vec<Poly> = exps_list
        .iter()
        .map(|exps| {
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| t.index.primes[i].pow(e as u64))
                .product()
        })
        .collect();
    polys.sort();
    polys.dedup();
    if cfg.mode == Mode::Unitary && !cfg.all_powers {
        polys.retain(|p| !p.is_square());
    }
    polys
        .into_par_iter()
        .map(|p| {
            let report = divisors::check(&p, cfg.mode)?;
            if !report.verdict {
                return Err(Error::NotPerfect(p.to_string()));
            }
            Ok((p, report))
        })
        .collect()
}

mod brute {
    //! Self-contained `u64` arithmetic for polynomials of degree < 32.

    pub fn deg(a: u64) -> u32 {
        63 - a.leading_zeros()
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        let mut r = 0;
        let mut b = b;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a << shift;
            }
            b >>= 1;
            shift += 1;
        }
        r
    }

    pub fn divmod(mut a: u64, d: u64) -> (u64, u64) {
        let dd = deg(d);
        let mut q = 0;
        while a != 0 && deg(a) >= dd {
            let s = deg(a) - dd;
            q |= 1 << s;
            a ^= d << s;
        }
        (q, a)
    }

    /// Smallest irreducible factor of every polynomial below `2^(max_degree+1)`.
    pub fn smallest_factor_table(max_degree: u32) -> Vec<u32> {
        let limit = 1usize << (max_degree + 1);
        let mut spf = vec![0u32; limit];
        for p in 2..limit {
            if spf[p] != 0 {
                continue;
            }
            spf[p] = p as u32;
            let dp = deg(p as u64);
            if 2 * dp > max_degree {
                continue;
            }
            let cofactor_limit = 1u64 << (max_degree - dp + 1);
            for q in 2..cofactor_limit {
                let m = mul(p as u64, q) as usize;
                if spf[m] == 0 {
                    spf[m] = p as u32;
                }
            }
        }
        spf
    }

    /// Prime factorization as (prime, exponent) pairs.
    pub fn factor(mut a: u64, spf: &[u32]) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while a > 1 {
            let p = spf[a as usize] as u64;
            a = divmod(a, p).0;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `1 + p + ... + p^e`.
    pub fn sigma_power(p: u64, e: u32) -> u64 {
        let mut acc = 1;
        let mut term = 1;
        for _ in 0..e {
            term = mul(term, p);
            acc ^= term;
        }
        acc
    }

    pub fn pow(p: u64, e: u32) -> u64 {
        (0..e).fold(1, |acc, _| mul(acc, p))
    }
}

/// Tests every nonconstant polynomial of degree `<= max_degree`. Returns all
/// hits, squares included, in ascending order.
pub fn search_bruteforce(cfg: &SearchConfig) -> Result<Vec<Poly>> {
    if cfg.family != Family::All {
        return Err(Error::InvalidArgument("brute-force search covers the full family".into()));
    }
    if cfg.max_degree > BRUTE_MAX_DEGREE {
        return Err(Error::Budget(format!(
            "brute-force search limited to degree {BRUTE_MAX_DEGREE}"
        )));
    }
    if cfg.max_degree < 1 {
        return Ok(Vec::new());
    }
    let max_degree = cfg.max_degree as u32;
    let spf = brute::smallest_factor_table(max_degree);
    let limit = 1u64 << (max_degree + 1);
    let mode = cfg.mode;
    let mut hits: Vec<u64> = (2..limit)
        .into_par_iter()
        .filter(|&a| {
            let sum = brute::factor(a, &spf)
                .into_iter()
                .fold(1u64, |acc, (p, e)| {
                    let s = match mode {
                        Mode::Perfect => brute::sigma_power(p, e),
                        Mode::Unitary => brute::pow(p, e) ^ 1,
                    };
                    brute::mul(acc, s)
                });
            sum == a
        })
        .collect();
    hits.sort_unstable();
    Ok(hits.into_iter().map(Poly::from_u64).collect())
}

/// One group of hits sharing a class.
#[derive(Debug, Clone, Serialize)]
pub struct HitClass {
    /// Non-square root shared by the members.
    pub representative: Poly,
    pub members: Vec<Poly>,
    /// `T1`, `bar(B3)`, `trivial`, or absent.
    pub label: Option<String>,
    pub in_catalog: bool,
    /// Every odd prime factor is a Mersenne prime.
    pub mersenne_only: bool,
    pub decomposable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub mode: Mode,
    pub classes: Vec<HitClass>,
    /// Representatives with Mersenne-only odd part missing from the catalog.
    pub outside_catalog: Vec<Poly>,
    /// Representatives with a non-Mersenne odd prime.
    pub outside_scope: Vec<Poly>,
    /// Members that split into two coprime perfect factors.
    pub decomposable: Vec<Poly>,
}

/// True iff `p = (x^2 + x)^(2^n - 1)` for some `n >= 1`.
pub fn is_trivial_perfect(p: &Poly) -> bool {
    let base = Poly::from_u64(0b110);
    let mut e = 1u64;
    while 2 * e as usize <= p.bit_len() {
        if base.pow(e) == *p {
            return true;
        }
        e = 2 * e + 1;
    }
    false
}

fn catalog_label(rep: &Poly, mode: Mode) -> Option<String> {
    let cat = catalog();
    match mode {
        Mode::Perfect => {
            if is_trivial_perfect(rep) {
                return Some("trivial".into());
            }
            cat.perfect()
                .into_iter()
                .find(|(_, t)| *t == rep)
                .map(|(n, _)| n.to_owned())
        }
        Mode::Unitary => {
            if *rep == Poly::from_u64(0b110) {
                return Some("trivial".into());
            }
            cat.unitary().into_iter().find_map(|(n, b)| {
                if b == rep {
                    Some(n.to_owned())
                } else if b.bar() == *rep {
                    Some(format!("bar({n})"))
                } else {
                    None
                }
            })
        }
    }
}

fn odd_part_mersenne(p: &Poly) -> Result<bool> {
    for q in factor::factorize(p)?.primes() {
        if q.deg() > 1 && mersenne::is_mersenne_prime(q)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Groups hits into classes. In unitary mode members of a class are the
/// `2^l`-th powers of one non-square root; in perfect mode every hit is its
/// own class.
pub fn classify_hits(hits: &[Poly], mode: Mode) -> Result<ClassReport> {
    let mut groups: BTreeMap<Poly, Vec<Poly>> = BTreeMap::new();
    for h in hits {
        if h.is_constant() {
            continue;
        }
        let key = match mode {
            Mode::Unitary => divisors::non_square_root(h),
            Mode::Perfect => h.clone(),
        };
        groups.entry(key).or_default().push(h.clone());
    }
    let mut report = ClassReport {
        mode,
        classes: Vec::new(),
        outside_catalog: Vec::new(),
        outside_scope: Vec::new(),
        decomposable: Vec::new(),
    };
    for (rep, mut members) in groups {
        members.sort();
        members.dedup();
        let label = catalog_label(&rep, mode);
        let mersenne_only = odd_part_mersenne(&rep)?;
        let mut decomposable = false;
        for m in &members {
            if divisors::check(m, mode)?.verdict && !divisors::is_indecomposable(m, mode)? {
                decomposable = true;
                report.decomposable.push(m.clone());
            }
        }
        let in_catalog = label.is_some();
        if !mersenne_only {
            report.outside_scope.push(rep.clone());
        } else if !in_catalog {
            report.outside_catalog.push(rep.clone());
        }
        report.classes.push(HitClass {
            representative: rep,
            members,
            label,
            in_catalog,
            mersenne_only,
            decomposable,
        });
    }
    Ok(report)
}
