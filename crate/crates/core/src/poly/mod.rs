//! Dense polynomials over GF(2), packed 64 coefficients per limb.
//!
//! Bit `i` of the limb sequence is the coefficient of `x^i`. The limb vector
//! never carries zero limbs at the top, so the zero polynomial is the empty
//! vector and equality is plain slice equality.

mod clmul;
mod text;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use text::{parse_with, ParseAliases};

const BITS: usize = 64;

/// Degree of a polynomial. The zero polynomial has degree `NegInfinity`,
/// which orders below every finite degree and absorbs under addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// One of the two linear polynomials, used as the point of a valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Linear {
    X,
    XPlusOne,
}

/// A polynomial over GF(2).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    limbs: Vec<u64>,
}

fn trim(limbs: &mut Vec<u64>) {
    while limbs.last() == Some(&0) {
        limbs.pop();
    }
}

/// `dst ^= src << shift`, with `dst` long enough to hold the result.
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (word, bit) = (shift / BITS, shift % BITS);
    if bit == 0 {
        for (i, &s) in src.iter().enumerate() {
            dst[word + i] ^= s;
        }
        return;
    }
    for (i, &s) in src.iter().enumerate() {
        dst[word + i] ^= s << bit;
        let carry = s >> (BITS - bit);
        if carry != 0 {
            dst[word + i + 1] ^= carry;
        }
    }
}

/// Bit length of a possibly untrimmed limb slice.
fn bit_len_of(limbs: &[u64]) -> usize {
    limbs
        .iter()
        .rposition(|&w| w != 0)
        .map_or(0, |i| (i + 1) * BITS - limbs[i].leading_zeros() as usize)
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { limbs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { limbs: vec![1] }
    }

    pub fn x() -> Poly {
        Poly { limbs: vec![0b10] }
    }

    pub fn x_plus_one() -> Poly {
        Poly { limbs: vec![0b11] }
    }

    /// The polynomial `x^k`.
    pub fn monomial(k: usize) -> Poly {
        let mut limbs = vec![0u64; k / BITS + 1];
        limbs[k / BITS] = 1 << (k % BITS);
        Poly { limbs }
    }

    /// Builds a polynomial from a coefficient mask (bit `i` = coefficient of `x^i`).
    pub fn from_u64(mask: u64) -> Poly {
        Poly::from_limbs(vec![mask])
    }

    pub fn from_u128(mask: u128) -> Poly {
        Poly::from_limbs(vec![mask as u64, (mask >> 64) as u64])
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Poly {
        trim(&mut limbs);
        Poly { limbs }
    }

    /// Sum of `x^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents(exponents: &[usize]) -> Poly {
        let mut p = Poly::zero();
        for &e in exponents {
            p.flip(e);
        }
        p
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// The coefficient mask when the polynomial fits in one word.
    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    /// True for the constants 0 and 1.
    pub fn is_constant(&self) -> bool {
        self.limbs.len() <= 1 && self.limbs.first().is_none_or(|&w| w <= 1)
    }

    pub fn degree(&self) -> Degree {
        match self.bit_len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Number of coefficient positions up to and including the leading one.
    pub fn bit_len(&self) -> usize {
        bit_len_of(&self.limbs)
    }

    /// Degree of a polynomial known to be nonzero.
    pub(crate) fn deg(&self) -> usize {
        debug_assert!(!self.is_zero());
        self.bit_len() - 1
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.limbs
            .get(i / BITS)
            .is_some_and(|w| (w >> (i % BITS)) & 1 == 1)
    }

    fn flip(&mut self, i: usize) {
        if self.limbs.len() <= i / BITS {
            self.limbs.resize(i / BITS + 1, 0);
        }
        self.limbs[i / BITS] ^= 1 << (i % BITS);
        trim(&mut self.limbs);
    }

    /// Exponents carrying a nonzero coefficient, highest first.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.bit_len()).rev().filter(move |&i| self.coeff(i))
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Multiplication by `x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut limbs = vec![0u64; (self.bit_len() + k).div_ceil(BITS)];
        xor_shifted(&mut limbs, &self.limbs, k);
        Poly::from_limbs(limbs)
    }

    /// Bit-by-bit shift-XOR product. Slow; kept as the reference the word
    /// kernels are checked against.
    pub fn mul_schoolbook(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut limbs = vec![0u64; self.limbs.len() + other.limbs.len()];
        for i in 0..other.bit_len() {
            if other.coeff(i) {
                xor_shifted(&mut limbs, &self.limbs, i);
            }
        }
        Poly::from_limbs(limbs)
    }

    /// Product through the portable word kernel only (no CPU intrinsics).
    pub fn mul_portable(&self, other: &Poly) -> Poly {
        Poly::from_limbs(clmul::mul_limbs_portable(&self.limbs, &other.limbs))
    }

    pub fn square(&self) -> Poly {
        let mut limbs = Vec::with_capacity(2 * self.limbs.len());
        for &w in &self.limbs {
            limbs.push(clmul::spread32(w as u32));
            limbs.push(clmul::spread32((w >> 32) as u32));
        }
        Poly::from_limbs(limbs)
    }

    /// Exponentiation by repeated squaring; `p^0 = 1` for every `p`.
    pub fn pow(&self, mut n: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dlen = d.bit_len();
        let mut rem = self.limbs.clone();
        let mut rlen = bit_len_of(&rem);
        if rlen < dlen {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![0u64; (rlen - dlen) / BITS + 1];
        while rlen >= dlen {
            let shift = rlen - dlen;
            quot[shift / BITS] |= 1 << (shift % BITS);
            xor_shifted(&mut rem, &d.limbs, shift);
            rlen = bit_len_of(&rem[..rlen.div_ceil(BITS)]);
        }
        Ok((Poly::from_limbs(quot), Poly::from_limbs(rem)))
    }

    /// Remainder modulo a nonzero `m`.
    pub fn rem(&self, m: &Poly) -> Result<Poly> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mlen = m.bit_len();
        let mut rem = self.limbs.clone();
        let mut rlen = bit_len_of(&rem);
        while rlen >= mlen {
            xor_shifted(&mut rem, &m.limbs, rlen - mlen);
            rlen = bit_len_of(&rem[..rlen.div_ceil(BITS)]);
        }
        Ok(Poly::from_limbs(rem))
    }

    /// Quotient of an exact division; errors when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidArgument(format!("{d} does not divide {self}")))
        }
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic greatest common divisor. Every nonzero polynomial over GF(2) is monic.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Result<Poly> {
        (self * other).rem(m)
    }

    pub fn square_mod(&self, m: &Poly) -> Result<Poly> {
        self.square().rem(m)
    }

    /// `self^e mod m` with a 128-bit exponent.
    pub fn pow_mod(&self, e: u128, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one().rem(m)?;
        let base = self.rem(m)?;
        for i in (0..(128 - e.leading_zeros())).rev() {
            acc = acc.square_mod(m)?;
            if (e >> i) & 1 == 1 {
                acc = acc.mul_mod(&base, m)?;
            }
        }
        Ok(acc)
    }

    /// Formal derivative. Over GF(2) only odd exponents survive.
    pub fn derivative(&self) -> Poly {
        const ODD: u64 = 0xAAAA_AAAA_AAAA_AAAA;
        Poly::from_limbs(self.limbs.iter().map(|w| (w & ODD) >> 1).collect())
    }

    /// `S(x+1)`, computed by Horner's rule.
    pub fn bar(&self) -> Poly {
        let mut acc = Poly::zero();
        for i in (0..self.bit_len()).rev() {
            acc = &acc.shl(1) + &acc;
            if self.coeff(i) {
                acc.flip(0);
            }
        }
        acc
    }

    /// Largest `e` such that `x^e` (resp. `(x+1)^e`) divides `self`.
    pub fn valuation(&self, at: Linear) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(match at {
            Linear::X => {
                let zero_words = self.limbs.iter().take_while(|&&w| w == 0).count();
                zero_words * BITS + self.limbs[zero_words].trailing_zeros() as usize
            }
            Linear::XPlusOne => {
                let mut p = self.clone();
                let mut e = 0;
                let xp1 = Poly::x_plus_one();
                loop {
                    let (q, r) = p.div_rem(&xp1)?;
                    if !r.is_zero() {
                        break e;
                    }
                    p = q;
                    e += 1;
                }
            }
        })
    }

    /// Coefficient of `x^(deg - l)`: the `l`-th coefficient counted from the top.
    pub fn alpha(&self, l: usize) -> Result<bool> {
        AlphaView::new(self)?.get(l)
    }

    /// A polynomial is a square iff every odd-index coefficient vanishes.
    pub fn is_square(&self) -> bool {
        self.limbs.iter().all(|w| w & 0xAAAA_AAAA_AAAA_AAAA == 0)
    }

    pub fn sqrt(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.to_string()));
        }
        let mut limbs = vec![0u64; self.limbs.len().div_ceil(2)];
        for (i, &w) in self.limbs.iter().enumerate() {
            limbs[i / 2] |= (clmul::compress_even(w) as u64) << (32 * (i % 2));
        }
        Ok(Poly::from_limbs(limbs))
    }

    /// True iff `x` or `x+1` divides `self`.
    pub fn has_linear_factor(&self) -> bool {
        !self.is_zero() && (!self.coeff(0) || self.weight().is_multiple_of(2))
    }

    /// Lowercase hexadecimal coefficient mask, e.g. `0x13` for `x^4+x+1`.
    pub fn to_hex(&self) -> String {
        format!("{self:#x}")
    }
}

/// Top-down coefficient reader: `get(l)` is the coefficient of `x^(s - l)`
/// where `s` is the degree of the source.
#[derive(Debug, Clone, Copy)]
pub struct AlphaView<'a> {
    source: &'a Poly,
    s: usize,
}

impl<'a> AlphaView<'a> {
    pub fn new(source: &'a Poly) -> Result<Self> {
        match source.degree() {
            Degree::NegInfinity => Err(Error::ZeroPolynomial),
            Degree::Finite(s) => Ok(AlphaView { source, s }),
        }
    }

    pub fn degree(&self) -> usize {
        self.s
    }

    pub fn get(&self, l: usize) -> Result<bool> {
        if l > self.s {
            return Err(Error::OutOfRange { index: l, max: self.s });
        }
        Ok(self.source.coeff(self.s - l))
    }
}

// Ordering by (degree, coefficient mask as an integer) is the same as
// comparing the masks as big integers.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.limbs.len() >= rhs.limbs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut limbs = long.limbs.clone();
        for (d, s) in limbs.iter_mut().zip(&short.limbs) {
            *d ^= s;
        }
        Poly::from_limbs(limbs)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.limbs.len() < rhs.limbs.len() {
            self.limbs.resize(rhs.limbs.len(), 0);
        }
        for (d, s) in self.limbs.iter_mut().zip(&rhs.limbs) {
            *d ^= s;
        }
        trim(&mut self.limbs);
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::from_limbs(clmul::mul_limbs(&self.limbs, &rhs.limbs))
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl MulAssign<&Poly> for Poly {
    fn mul_assign(&mut self, rhs: &Poly) {
        *self = &*self * rhs;
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |acc, p| &acc * &p)
    }
}

impl<'a> std::iter::Product<&'a Poly> for Poly {
    fn product<I: Iterator<Item = &'a Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |acc, p| &acc * p)
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format(self))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::LowerHex for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            f.write_str("0x")?;
        }
        match self.limbs.split_last() {
            None => f.write_str("0"),
            Some((top, rest)) => {
                write!(f, "{top:x}")?;
                for w in rest.iter().rev() {
                    write!(f, "{w:016x}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;

    /// Parses an expression or hex mask, resolving catalog names such as
    /// `M1`, `T5` or `B9`.
    fn from_str(s: &str) -> Result<Poly> {
        text::parse_with(s, crate::mersenne::catalog())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Poly, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
