//! Mersenne primes `1 + x^a (x+1)^b`, the prime set Δ, and the catalog of
//! named polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factor;
use crate::numtheory;
use crate::poly::{parse_with, ParseAliases};
use crate::poly::{Linear, Poly};

/// An irreducible polynomial `1 + x^a (x+1)^b` with `a, b >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MersennePrime {
    pub a: u32,
    pub b: u32,
    pub poly: Poly,
}

impl MersennePrime {
    /// Builds `1 + x^a (x+1)^b`, failing unless it is irreducible.
    pub fn new(a: u32, b: u32) -> Result<MersennePrime> {
        let poly = mersenne_poly(a, b)?;
        if !factor::is_irreducible(&poly)? {
            return Err(Error::NotIrreducible(poly.to_string()));
        }
        Ok(MersennePrime { a, b, poly })
    }

    /// Recovers the exponents of an irreducible Mersenne-form polynomial.
    pub fn from_poly(p: &Poly) -> Result<MersennePrime> {
        match is_mersenne_prime(p)? {
            Some((a, b)) => Ok(MersennePrime { a, b, poly: p.clone() }),
            None => Err(Error::InvalidArgument(format!("{p} is not a Mersenne prime"))),
        }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b
    }

    /// The image under `x -> x + 1`, which swaps the exponents.
    pub fn bar(&self) -> MersennePrime {
        MersennePrime {
            a: self.b,
            b: self.a,
            poly: self.poly.bar(),
        }
    }

    /// Catalog name (`M1`, `M2bar`, ...) if this is one of the five smallest.
    pub fn name(&self) -> Option<&'static str> {
        catalog().name_of(&self.poly)
    }

    /// True iff this is one of `M1, M2, bar(M2), M3, bar(M3)`.
    pub fn is_small(&self) -> bool {
        self.degree() <= 4
    }

    /// Display label: the catalog name or `M(a,b)`.
    pub fn label(&self) -> String {
        self.name()
            .map(str::to_owned)
            .unwrap_or_else(|| format!("M({},{})", self.a, self.b))
    }
}

impl PartialOrd for MersennePrime {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by degree, then `a`.
impl Ord for MersennePrime {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.a).cmp(&(other.degree(), other.a))
    }
}

impl fmt::Display for MersennePrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl Serialize for MersennePrime {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("MersennePrime", 4)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("poly", &self.poly)?;
        st.end()
    }
}

/// The polynomial `1 + x^a (x+1)^b`, irreducible or not.
pub fn mersenne_poly(a: u32, b: u32) -> Result<Poly> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("exponents must be positive".into()));
    }
    Ok(&Poly::x().pow(a as u64) * &Poly::x_plus_one().pow(b as u64) + Poly::one())
}

/// `Some((a, b))` iff `p` is irreducible and `1 + p = x^a (x+1)^b` with
/// `a, b >= 1`.
pub fn is_mersenne_prime(p: &Poly) -> Result<Option<(u32, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(None);
    }
    let q = p + &Poly::one();
    let a = q.valuation(Linear::X)?;
    let b = q.valuation(Linear::XPlusOne)?;
    if a == 0 || b == 0 || a + b != q.deg() {
        return Ok(None);
    }
    if !factor::is_irreducible(p)? {
        return Ok(None);
    }
    Ok(Some((a as u32, b as u32)))
}

/// All Mersenne primes of degree `<= max_degree`, sorted by (degree, a).
pub fn enumerate_mersenne_primes(max_degree: u32) -> Vec<MersennePrime> {
    let pairs: Vec<(u32, u32)> = (2..=max_degree)
        .flat_map(|m| (1..m).map(move |a| (a, m - a)))
        .filter(|&(a, b)| gcd(a, b) == 1)
        .collect();
    let mut out: Vec<MersennePrime> = pairs
        .into_par_iter()
        .filter_map(|(a, b)| MersennePrime::new(a, b).ok())
        .collect();
    out.sort();
    out
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Multiplicative order of 2 modulo the odd prime `p`.
pub fn ord2(p: u64) -> Result<u64> {
    numtheory::ord2(p)
}

/// True iff `p = 2^k - 1` for some `k`.
pub fn is_mersenne_number(p: u64) -> bool {
    p != 0 && p.checked_add(1).is_none_or(u64::is_power_of_two)
}

/// Membership in Δ: `p` is a Mersenne number or `8 | ord_p(2)`.
pub fn in_delta(p: u64) -> Result<bool> {
    let order = ord2(p)?;
    Ok(is_mersenne_number(p) || order % 8 == 0)
}

/// Named polynomials, each defined by a factored formula over earlier names.
const DEFINITIONS: &[(&str, &str, usize)] = &[
    ("M1", "1+x(x+1)", 2),
    ("M2", "1+x(x+1)^2", 3),
    ("M2bar", "bar(M2)", 3),
    ("M3", "1+x(x+1)^3", 4),
    ("M3bar", "bar(M3)", 4),
    ("T1", "x^2(x+1)M1", 5),
    ("T2", "bar(T1)", 5),
    ("T3", "x^4(x+1)^3M3", 11),
    ("T4", "bar(T3)", 11),
    ("T5", "x^4(x+1)^4M3 M3bar", 16),
    ("T6", "x^6(x+1)^3M2 M2bar", 15),
    ("T7", "bar(T6)", 15),
    ("T8", "x^4(x+1)^6M2 M2bar M3", 20),
    ("T9", "bar(T8)", 20),
    ("B1", "x^3(x+1)^3M1^2", 10),
    ("B2", "x^3(x+1)^2M1", 7),
    ("B3", "x^5(x+1)^4M3", 13),
    ("B4", "x^7(x+1)^4M2 M2bar", 17),
    ("B5", "x^5(x+1)^6M1^2M3", 19),
    ("B6", "x^5(x+1)^5M3 M3bar", 18),
    ("B7", "x^7(x+1)^7M2^2 M2bar^2", 26),
    ("B8", "x^7(x+1)^6M1^2 M2 M2bar", 23),
    ("B9", "x^7(x+1)^5M2 M2bar M3bar", 22),
    ("S1", "x^13(x+1)^2M1^3 M2^2 M2bar^2 M3 M3bar", 41),
    ("S2", "x^14(x+1)^7M1^2 M2^3 M2bar^3 M3 M3bar", 51),
];

/// Expanded forms of the five smallest Mersenne primes.
const SMALL_MERSENNE: &[(&str, u64)] = &[
    ("M1", 0b111),
    ("M2", 0b1011),
    ("M2bar", 0b1101),
    ("M3", 0b11111),
    ("M3bar", 0b11001),
];

/// The immutable table of named polynomials.
#[derive(Debug)]
pub struct Catalog {
    entries: Vec<(&'static str, Poly)>,
    index: BTreeMap<&'static str, usize>,
}

fn normalize(name: &str) -> String {
    name.chars().filter(|&c| c != '_').collect()
}

impl Catalog {
    fn build() -> Catalog {
        let mut entries: Vec<(&'static str, Poly)> = Vec::new();
        for &(name, formula, degree) in DEFINITIONS {
            let env = |n: &str| entries.iter().find(|(k, _)| *k == n).map(|(_, v)| v.clone());
            let poly = parse_with(formula, &env)
                .unwrap_or_else(|e| panic!("catalog formula for {name}: {e}"));
            assert_eq!(poly.deg(), degree, "catalog degree of {name}");
            entries.push((name, poly));
        }
        let index = entries.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
        let cat = Catalog { entries, index };
        for &(name, mask) in SMALL_MERSENNE {
            assert_eq!(cat[name], Poly::from_u64(mask), "expansion of {name}");
        }
        assert_eq!(cat["T5"], cat["T5"].bar(), "T5 is bar-symmetric");
        cat
    }

    /// Looks up a name; underscores are ignored, so `T_5` finds `T5`.
    pub fn get(&self, name: &str) -> Option<&Poly> {
        self.index
            .get(normalize(name).as_str())
            .map(|&i| &self.entries[i].1)
    }

    /// The name of an entry equal to `p`, if any.
    pub fn name_of(&self, p: &Poly) -> Option<&'static str> {
        self.entries.iter().find(|(_, v)| v == p).map(|(k, _)| *k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Poly)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    fn prefixed(&self, prefix: char) -> Vec<(&'static str, &Poly)> {
        self.iter().filter(|(k, _)| k.starts_with(prefix)).collect()
    }

    /// The nine nontrivial perfect polynomials `T1..T9`.
    pub fn perfect(&self) -> Vec<(&'static str, &Poly)> {
        self.prefixed('T')
    }

    /// The nine unitary perfect class representatives `B1..B9`.
    pub fn unitary(&self) -> Vec<(&'static str, &Poly)> {
        self.prefixed('B')
    }

    /// The five Mersenne primes of degree at most 4.
    pub fn small_mersenne(&self) -> Vec<(&'static str, &Poly)> {
        self.prefixed('M')
    }
}

impl std::ops::Index<&str> for Catalog {
    type Output = Poly;

    fn index(&self, name: &str) -> &Poly {
        self.get(name)
            .unwrap_or_else(|| panic!("no catalog entry named {name:?}"))
    }
}

impl ParseAliases for Catalog {
    fn resolve(&self, name: &str) -> Option<Poly> {
        self.get(name).cloned()
    }
}

/// The shared catalog, built and checked on first use.
pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(Catalog::build)
}
