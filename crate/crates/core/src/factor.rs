//! Irreducibility, complete factorization and irreducible counts over GF(2).
//!
//! Factorization runs in three stages: square-free decomposition (with
//! square-root extraction for the characteristic-2 part), distinct-degree
//! splitting, then equal-degree splitting with the absolute trace map
//! `a + a^2 + ... + a^(2^(d-1))`. The equal-degree stage draws random
//! polynomials from a seeded ChaCha stream, so a given seed always yields the
//! same run; the factors themselves do not depend on the seed.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numtheory;
use crate::poly::Poly;

/// Seed used by [`factorize`].
pub const DEFAULT_SEED: u64 = 0x5EED_2F2B;

/// A complete factorization: distinct irreducible factors with multiplicities,
/// sorted by (degree, coefficient mask).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    original: Poly,
    factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Assembles a factorization from (prime, multiplicity) pairs, merging
    /// repeated primes and sorting canonically.
    pub(crate) fn from_parts(original: Poly, mut parts: Vec<(Poly, u32)>) -> Factorization {
        parts.sort();
        let mut factors: Vec<(Poly, u32)> = Vec::with_capacity(parts.len());
        for (p, m) in parts {
            match factors.last_mut() {
                Some((last, lm)) if *last == p => *lm += m,
                _ => factors.push((p, m)),
            }
        }
        Factorization { original, factors }
    }

    pub fn original(&self) -> &Poly {
        &self.original
    }

    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Multiplicity of `prime`, zero when absent.
    pub fn multiplicity(&self, prime: &Poly) -> u32 {
        self.factors
            .binary_search_by(|(p, _)| p.cmp(prime))
            .map_or(0, |i| self.factors[i].1)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    /// Multiplies the factors back together.
    pub fn product(&self) -> Poly {
        self.factors.iter().map(|(p, m)| p.pow(*m as u64)).product()
    }
}

/// Factored form such as `x^2*(x+1)*(x^2+x+1)^3`; `1` for the unit.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, m)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            let bare = p.weight() == 1 || (self.factors.len() == 1 && *m == 1);
            if bare {
                write!(f, "{p}")?;
            } else {
                write!(f, "({p})")?;
            }
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct FactorEntry<'a> {
    prime: &'a Poly,
    mult: u32,
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.factors.len()))?;
        for (prime, mult) in &self.factors {
            seq.serialize_element(&FactorEntry { prime, mult: *mult })?;
        }
        seq.end()
    }
}

fn prime_divisors(n: usize) -> Vec<usize> {
    numtheory::factorize(n as u64)
        .into_keys()
        .map(|q| q as usize)
        .collect()
}

/// Rabin's test: `x^(2^n) = x (mod p)` and `gcd(x^(2^(n/q)) - x, p) = 1` for
/// every prime `q | n`, where `n = deg p`.
pub fn is_irreducible(p: &Poly) -> Result<bool> {
    if p.is_constant() {
        return Err(Error::ConstantInput);
    }
    let n = p.deg();
    if n == 1 {
        return Ok(true);
    }
    if !p.coeff(0) {
        return Ok(false);
    }
    let checkpoints: Vec<usize> = prime_divisors(n).into_iter().map(|q| n / q).collect();
    let x = Poly::x();
    let mut h = x.clone();
    for k in 1..=n {
        h = h.square_mod(p)?;
        if checkpoints.contains(&k) && !p.gcd(&(&h + &x))?.is_one() {
            return Ok(false);
        }
    }
    Ok(h == x.rem(p)?)
}

/// Square-free decomposition: pairs `(s, m)` with `s` square-free and the
/// input equal to the product of `s^m`.
fn squarefree_parts(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.exact_div(&y)?;
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = c.exact_div(&y)?;
        w = y;
        i += 1;
    }
    if !c.is_one() {
        for (s, m) in squarefree_parts(&c.sqrt()?)? {
            out.push((s, 2 * m));
        }
    }
    Ok(out)
}

/// Splits a square-free polynomial into products of equal-degree primes.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = Poly::x();
    let mut h = x.rem(&f)?;
    let mut i = 1;
    while f.bit_len() > 2 * i {
        h = h.square_mod(&f)?;
        let g = f.gcd(&(&h + &x))?;
        if !g.is_one() {
            f = f.exact_div(&g)?;
            h = h.rem(&f)?;
            out.push((g, i));
        }
        i += 1;
    }
    if !f.is_constant() {
        let d = f.deg();
        out.push((f, d));
    }
    Ok(out)
}

fn random_below(rng: &mut ChaCha8Rng, bits: usize) -> Poly {
    let words = bits.div_ceil(64);
    let mut limbs: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
    let spare = words * 64 - bits;
    if let Some(top) = limbs.last_mut() {
        *top &= u64::MAX >> spare;
    }
    Poly::from_limbs(limbs)
}

/// Splits `g`, a product of distinct primes of degree `d`, into those primes.
fn equal_degree(g: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<()> {
    let n = g.deg();
    if n == d {
        out.push(g.clone());
        return Ok(());
    }
    loop {
        let a = random_below(rng, n);
        if a.is_constant() {
            continue;
        }
        let mut term = a.clone();
        let mut trace = a;
        for _ in 1..d {
            term = term.square_mod(g)?;
            trace += &term;
        }
        if trace.is_zero() {
            continue;
        }
        let w = g.gcd(&trace)?;
        if !w.is_one() && w.deg() < n {
            let rest = g.exact_div(&w)?;
            equal_degree(&w, d, rng, out)?;
            equal_degree(&rest, d, rng, out)?;
            return Ok(());
        }
    }
}

/// Complete factorization with the default splitting seed.
pub fn factorize(p: &Poly) -> Result<Factorization> {
    factorize_seeded(p, DEFAULT_SEED)
}

/// Complete factorization; `seed` drives equal-degree splitting.
pub fn factorize_seeded(p: &Poly, seed: u64) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    for (s, m) in squarefree_parts(p)? {
        for (g, d) in distinct_degree(&s)? {
            let mut primes = Vec::new();
            equal_degree(&g, d, &mut rng, &mut primes)?;
            parts.extend(primes.into_iter().map(|q| (q, m)));
        }
    }
    Ok(Factorization::from_parts(p.clone(), parts))
}

/// Number of distinct irreducible factors.
pub fn omega(p: &Poly) -> Result<usize> {
    Ok(factorize(p)?.omega())
}

/// True iff no irreducible factor is repeated: `gcd(p, p') = 1`.
pub fn is_squarefree(p: &Poly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_one() {
        return Ok(true);
    }
    Ok(p.gcd(&p.derivative())?.is_one())
}

/// Exact count of irreducible polynomials of degree `m` over GF(2), by
/// `N(m) = (1/m) * sum_{d | m} mu(d) 2^(m/d)`.
pub fn count_irreducibles(m: u32) -> Result<u128> {
    if m < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if m > 126 {
        return Err(Error::Unsupported(format!("irreducible count for degree {m}")));
    }
    let total: i128 = numtheory::divisors(m as u64)
        .into_iter()
        .map(|d| numtheory::mobius(d) as i128 * (1i128 << (m as u64 / d)))
        .sum();
    Ok((total / m as i128) as u128)
}

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    numtheory::euler_phi(m)
}

/// All irreducible polynomials of degree `m`, ascending. Exhaustive, so meant
/// for small `m`.
pub fn irreducibles_of_degree(m: usize) -> Result<Vec<Poly>> {
    if m == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if m > 30 {
        return Err(Error::Budget(format!("enumerating degree {m} irreducibles")));
    }
    let lead = 1u64 << m;
    let mut out = Vec::new();
    for low in 0..lead {
        let p = Poly::from_u64(lead | low);
        if is_irreducible(&p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// True iff `x` has multiplicative order `2^r - 1` modulo the irreducible `p`
/// of degree `r`. Supported for `r <= 64`.
pub fn is_primitive(p: &Poly) -> Result<bool> {
    if !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    let r = p.deg();
    if r > 64 {
        return Err(Error::Unsupported(format!(
            "primitivity needs the factorization of 2^{r}-1, beyond 64 bits"
        )));
    }
    if *p == Poly::x() {
        return Ok(false);
    }
    let order = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
    let x = Poly::x();
    if !x.pow_mod(order as u128, p)?.is_one() {
        return Ok(false);
    }
    for q in numtheory::factorize(order).into_keys() {
        if x.pow_mod((order / q) as u128, p)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}
