//! Divisor sums `sigma` and `sigma_star`, perfection tests with exact-power
//! witnesses, and the square-power equivalence on polynomials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{self, Factorization};
use crate::poly::{Linear, Poly};

/// Which divisor sum a perfection question refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Sum of all divisors.
    #[serde(rename = "sigma")]
    Perfect,
    /// Sum of unitary divisors.
    #[serde(rename = "sigma_star")]
    Unitary,
}

impl Mode {
    pub fn divisor_sum(self, a: &Poly) -> Result<Poly> {
        match self {
            Mode::Perfect => sigma(a),
            Mode::Unitary => sigma_star(a),
        }
    }

    /// Divisor sum of the prime power `p^n`.
    pub fn prime_power_sum(self, p: &Poly, n: u32) -> Result<Poly> {
        match self {
            Mode::Perfect => sigma_prime_power(p, n),
            Mode::Unitary if n == 0 => Ok(Poly::one()),
            Mode::Unitary => Ok(&p.pow(n as u64) + &Poly::one()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Perfect => "sigma",
            Mode::Unitary => "sigma_star",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `1 + p + ... + p^n` as `(p^(n+1) + 1) / (p + 1)`.
pub fn sigma_prime_power(p: &Poly, n: u32) -> Result<Poly> {
    if p.is_constant() {
        return Err(Error::ConstantInput);
    }
    let numerator = &p.pow(n as u64 + 1) + &Poly::one();
    numerator.exact_div(&(p + &Poly::one()))
}

/// `1 + p + ... + p^n` by accumulating the terms one at a time.
pub fn sigma_prime_power_series(p: &Poly, n: u32) -> Poly {
    let mut acc = Poly::one();
    let mut term = Poly::one();
    for _ in 0..n {
        term = &term * p;
        acc += &term;
    }
    acc
}

/// Sum of all divisors of `a`.
pub fn sigma(a: &Poly) -> Result<Poly> {
    sigma_of(&factor::factorize(a)?)
}

/// Sum of all divisors, from a known factorization.
pub fn sigma_of(f: &Factorization) -> Result<Poly> {
    let mut acc = Poly::one();
    for (p, n) in f.factors() {
        acc *= &sigma_prime_power(p, *n)?;
    }
    Ok(acc)
}

/// Sum of the unitary divisors of `a`: the product of `1 + P^n` over `P^n || a`.
pub fn sigma_star(a: &Poly) -> Result<Poly> {
    sigma_star_of(&factor::factorize(a)?)
}

pub fn sigma_star_of(f: &Factorization) -> Result<Poly> {
    let mut acc = Poly::one();
    for (p, n) in f.factors() {
        acc *= &Mode::Unitary.prime_power_sum(p, *n)?;
    }
    Ok(acc)
}

/// Degree guard for the divisor-enumeration oracles.
pub const ORACLE_MAX_DEGREE: usize = 24;

fn oracle_factorization(a: &Poly) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a.deg() > ORACLE_MAX_DEGREE {
        return Err(Error::Budget(format!(
            "divisor enumeration limited to degree {ORACLE_MAX_DEGREE}"
        )));
    }
    factor::factorize(a)
}

/// Every divisor of `a`, built as products of prime powers.
pub fn all_divisors(a: &Poly) -> Result<Vec<Poly>> {
    let f = oracle_factorization(a)?;
    let mut divs = vec![Poly::one()];
    for (p, n) in f.factors() {
        let mut next = Vec::with_capacity(divs.len() * (*n as usize + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*n {
                cur = &cur * p;
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    Ok(divs)
}

/// Literal sum over every divisor of `a`.
pub fn sigma_oracle(a: &Poly) -> Result<Poly> {
    Ok(all_divisors(a)?.into_iter().sum())
}

/// Literal sum over the divisors `d` of `a` with `gcd(d, a/d) = 1`.
pub fn sigma_star_oracle(a: &Poly) -> Result<Poly> {
    let mut acc = Poly::zero();
    for d in all_divisors(a)? {
        let co = a.exact_div(&d)?;
        if d.gcd(&co)?.is_one() {
            acc += &d;
        }
    }
    Ok(acc)
}

/// The `m` with `prime^m || s`.
pub fn exact_power(prime: &Poly, s: &Poly) -> Result<u32> {
    if s.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !factor::is_irreducible(prime)? {
        return Err(Error::NotIrreducible(prime.to_string()));
    }
    Ok(multiplicity_of(prime, s))
}

fn multiplicity_of(prime: &Poly, s: &Poly) -> u32 {
    let mut m = 0;
    let mut rest = s.clone();
    loop {
        match rest.div_rem(prime) {
            Ok((q, r)) if r.is_zero() => {
                rest = q;
                m += 1;
            }
            _ => return m,
        }
    }
}

/// A prime whose exact powers in a polynomial and in its divisor sum differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub prime: Poly,
    pub m1: u32,
    pub m2: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectionReport {
    pub subject: Poly,
    pub mode: Mode,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

/// Tests `sum(a) = a` in the given mode. On failure the witness is the
/// smallest prime of `a * sum(a)` whose exact powers disagree.
pub fn check(a: &Poly, mode: Mode) -> Result<PerfectionReport> {
    let fa = factor::factorize(a)?;
    let sum = match mode {
        Mode::Perfect => sigma_of(&fa)?,
        Mode::Unitary => sigma_star_of(&fa)?,
    };
    if sum == *a {
        return Ok(PerfectionReport {
            subject: a.clone(),
            mode,
            verdict: true,
            witness: None,
        });
    }
    let fs = factor::factorize(&sum)?;
    let mut primes: Vec<&Poly> = fa.primes().chain(fs.primes()).collect();
    primes.sort();
    primes.dedup();
    let witness = primes
        .into_iter()
        .map(|p| Witness {
            prime: p.clone(),
            m1: fa.multiplicity(p),
            m2: fs.multiplicity(p),
        })
        .find(|w| w.m1 != w.m2)
        .expect("distinct monic polynomials differ in some exact power");
    Ok(PerfectionReport {
        subject: a.clone(),
        mode,
        verdict: false,
        witness: Some(witness),
    })
}

pub fn is_perfect(a: &Poly) -> Result<PerfectionReport> {
    check(a, Mode::Perfect)
}

pub fn is_unitary_perfect(a: &Poly) -> Result<PerfectionReport> {
    check(a, Mode::Unitary)
}

/// True iff `a` divides its divisor sum.
pub fn is_multiperfect(a: &Poly) -> Result<bool> {
    a.divides(&sigma(a)?)
}

/// True iff `x` or `x + 1` divides `a`.
pub fn is_even_poly(a: &Poly) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(a.has_linear_factor())
}

/// Largest number of distinct primes [`is_indecomposable`] will split over.
pub const MAX_SPLIT_PRIMES: usize = 20;

/// False iff `a` is a product of two coprime nonconstant polynomials that are
/// both perfect in `mode`. `a` itself must be perfect in `mode`.
pub fn is_indecomposable(a: &Poly, mode: Mode) -> Result<bool> {
    let f = factor::factorize(a)?;
    let sums: Vec<Poly> = f
        .factors()
        .iter()
        .map(|(p, n)| mode.prime_power_sum(p, *n))
        .collect::<Result<_>>()?;
    let parts: Vec<Poly> = f.factors().iter().map(|(p, n)| p.pow(*n as u64)).collect();
    if parts.iter().product::<Poly>() != sums.iter().product::<Poly>() {
        return Err(Error::NotPerfect(a.to_string()));
    }
    let w = parts.len();
    if w > MAX_SPLIT_PRIMES {
        return Err(Error::Budget(format!(
            "{w} distinct primes exceed the split limit {MAX_SPLIT_PRIMES}"
        )));
    }
    if w < 2 {
        return Ok(true);
    }
    // subsets containing prime 0 enumerate each unordered split once; the
    // complement of a perfect part of a perfect polynomial is perfect
    let full = (1u32 << w) - 1;
    for mask in (1..full).filter(|m| m & 1 == 1) {
        let pick = |v: &[Poly]| -> Poly {
            (0..w)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &v[i])
                .product()
        };
        if pick(&parts) == pick(&sums) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_nonconstant(s: &Poly) -> Result<()> {
    if s.is_constant() {
        Err(Error::ConstantInput)
    } else {
        Ok(())
    }
}

/// The unique non-square `r` with `s = r^(2^l)`.
pub fn non_square_root(s: &Poly) -> Poly {
    let mut s = s.clone();
    while s.is_square() {
        s = s.sqrt().expect("is_square checked");
    }
    s
}

/// Representative of the class of `s` under `S ~ S^(2^l)` and the `bar`
/// symmetry: the non-square root of `s`, moved by `bar` if needed so that
/// `val_x <= val_(x+1)`, with ties broken towards the smaller of the pair.
pub fn canonical_class_rep(s: &Poly) -> Result<Poly> {
    require_nonconstant(s)?;
    let r = non_square_root(s);
    let vx = r.valuation(Linear::X)?;
    let vy = r.valuation(Linear::XPlusOne)?;
    let b = r.bar();
    Ok(match vx.cmp(&vy) {
        std::cmp::Ordering::Less => r,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => r.min(b),
    })
}

/// True iff one of `s`, `t` is a `2^l`-th power of the other.
pub fn same_class(s: &Poly, t: &Poly) -> Result<bool> {
    require_nonconstant(s)?;
    require_nonconstant(t)?;
    let (mut big, small) = if s.deg() >= t.deg() { (s.clone(), t) } else { (t.clone(), s) };
    while big.deg() > small.deg() {
        if !big.is_square() {
            return Ok(false);
        }
        big = big.sqrt()?;
    }
    Ok(big == *small)
}
