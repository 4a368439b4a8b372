//! Mechanical checks of computational claims about divisor sums of Mersenne
//! prime powers, the catalog polynomials, and the supporting counting facts.
//!
//! Each checker returns a [`TheoremReport`]. Instances outside a claim's
//! hypotheses are reported as [`Verdict::OutOfScope`] rather than skipped, and
//! [`run_all`] sweeps every checker over a budget and sorts the stream by
//! `(claim_id, params)` so repeated runs are byte-identical.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::divisors::{self, sigma_prime_power, Mode, Witness};
use crate::error::{Error, Result};
use crate::factor::{self, Factorization};
use crate::mersenne::{self, catalog, MersennePrime};
use crate::numtheory;
use crate::poly::{Linear, Poly};

/// Claim identifiers, in the order they are documented.
pub mod claims {
    /// `sigma(M^(2h))` is square-free and, under the hypotheses, has a
    /// non-Mersenne prime factor.
    pub const NONMERSENNE_DIVISOR: &str = "nonmersenne-divisor";
    /// If `sigma(M^(2h))` is a product of Mersenne primes then
    /// `U = sigma(sigma(M^(2h)))` splits into even powers of `x` and `x+1`.
    pub const U_SPLIT_SQUARE: &str = "u-split-square";
    /// `sigma(M^(k-1))` divides `sigma(M^(2h))` whenever `k | 2h+1`.
    pub const P_REDUCTION: &str = "p-reduction";
    /// The top `2 deg M` coefficients of `sigma(M^(2h))` come from
    /// `M^(2h)` and `M^(2h) + M^(2h-1)`.
    pub const ALPHA_TOP: &str = "alpha-top-coefficients";
    /// For `M = M2` and prime `2h+1` outside {3, 5, 7}, `alpha_3(U) = 1`.
    pub const ALPHA3_U_M2: &str = "alpha3-u-m2";
    /// For `M` of degree >= 5 with at least three primes in `sigma(M^2)`,
    /// `alpha_3(sigma(sigma(M^2))) = 1`.
    pub const ALPHA3_U2: &str = "alpha3-u2";
    /// Divisors of `sigma(M^(p-1))` for a Mersenne number `p = 2^m - 1`.
    pub const DEGREE_M_DIVISORS: &str = "degree-m-divisors";
    /// `ord_p(2)` divides the degree of every prime factor of `sigma(M^(p-1))`.
    pub const ORDER_DIVIDES_DEGREE: &str = "order-divides-degree";
    /// Irreducible counts against totients, the lower bound and Mersenne counts.
    pub const IRREDUCIBLE_COUNT: &str = "irreducible-count";
    /// No Mersenne prime has degree divisible by 8.
    pub const MERSENNE_DEGREE_8: &str = "mersenne-degree-multiple-of-8";
    /// Fermat primes above 5 lie in Δ.
    pub const DELTA_FERMAT: &str = "delta-fermat";
    /// `T1..T9` are indecomposable perfect polynomials over Mersenne primes.
    pub const PERFECT_CATALOG: &str = "perfect-catalog";
    /// `B1..B9` are non-square indecomposable unitary perfect polynomials.
    pub const UNITARY_CATALOG: &str = "unitary-catalog";
    /// `S1` is not perfect, witnessed by `x^13 || S1`, `x^7 || sigma(S1)`.
    pub const COUNTEREXAMPLE_S1: &str = "counterexample-s1";
    /// `S2` is not unitary perfect, witnessed by `x^14 || S2`, `x^10 || sigma*(S2)`.
    pub const COUNTEREXAMPLE_S2: &str = "counterexample-s2";
    /// Closed forms of `sigma` on `x^a`, `(x+1)^b`, `M2^h`, `bar(M2)^h`.
    pub const SIGMA_TABLES: &str = "sigma-tables";
    /// Closed forms of `sigma*` on the same families.
    pub const SIGMA_STAR_TABLES: &str = "sigma-star-tables";

    pub const ALL: &[&str] = &[
        NONMERSENNE_DIVISOR,
        U_SPLIT_SQUARE,
        P_REDUCTION,
        ALPHA_TOP,
        ALPHA3_U_M2,
        ALPHA3_U2,
        DEGREE_M_DIVISORS,
        ORDER_DIVIDES_DEGREE,
        IRREDUCIBLE_COUNT,
        MERSENNE_DEGREE_8,
        DELTA_FERMAT,
        PERFECT_CATALOG,
        UNITARY_CATALOG,
        COUNTEREXAMPLE_S1,
        COUNTEREXAMPLE_S2,
        SIGMA_TABLES,
        SIGMA_STAR_TABLES,
    ];
}

/// Largest `deg(M^(2h))` a checker will expand.
pub const DEFAULT_DEGREE_BUDGET: usize = 2048;

/// Degrees swept by the counting checks.
pub const COUNTING_MAX_DEGREE: u32 = 24;

/// Exponents `r` with `2^r - 1` prime, up to the degree budget.
const MERSENNE_EXPONENTS: &[usize] = &[
    2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127, 521, 607, 1279, 2203, 2281,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    OutOfScope,
}

impl Verdict {
    fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::OutOfScope => "out_of_scope",
        })
    }
}

/// A named checker input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(u64),
    Text(String),
}

impl From<u64> for Param {
    fn from(v: u64) -> Param {
        Param::Int(v)
    }
}

impl From<u32> for Param {
    fn from(v: u32) -> Param {
        Param::Int(v as u64)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Param {
        Param::Text(v.to_owned())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Param {
        Param::Text(v)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::Text(s) => f.write_str(s),
        }
    }
}

/// Outcome of one checker on one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub claim_id: String,
    pub params: BTreeMap<String, Param>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl TheoremReport {
    fn new(claim: &str, params: Vec<(&str, Param)>, verdict: Verdict, witness: Value) -> Self {
        TheoremReport {
            claim_id: claim.to_owned(),
            params: params.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
            verdict,
            witness: (!witness.is_null()).then_some(witness),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    fn sort_key(&self) -> (&str, &BTreeMap<String, Param>) {
        (&self.claim_id, &self.params)
    }
}

/// `verdict claim k=v ...`, followed by the witness as compact JSON.
impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<12} {}", self.verdict.to_string(), self.claim_id)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, "  {w}")?;
        }
        Ok(())
    }
}

fn m_param(m: &MersennePrime) -> (&'static str, Param) {
    ("M", Param::Text(m.label()))
}

fn check_budget(m: &MersennePrime, exponent: u64) -> Result<()> {
    let deg = m.degree() as u64 * exponent;
    if deg > DEFAULT_DEGREE_BUDGET as u64 {
        return Err(Error::Budget(format!(
            "degree {deg} of {}^{exponent} exceeds {DEFAULT_DEGREE_BUDGET}",
            m.label()
        )));
    }
    Ok(())
}

/// `sigma(M^(2h))`.
pub fn sigma_even_power(m: &MersennePrime, h: u32) -> Result<Poly> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be at least 1".into()));
    }
    check_budget(m, 2 * h as u64)?;
    sigma_prime_power(&m.poly, 2 * h)
}

/// `U_(2h) = sigma(sigma(M^(2h)))`.
pub fn u_poly(m: &MersennePrime, h: u32) -> Result<Poly> {
    divisors::sigma(&sigma_even_power(m, h)?)
}

/// Which hypothesis of the non-Mersenne-divisor claim covers `(M, h)`, if any:
/// `"small-prime"` for the five small Mersenne primes (`h >= 2` for `M2` and its bar),
/// `"delta-factor"` for larger `M` when `2h+1` has a prime factor in Δ other than 7.
pub fn theorem_hypothesis(m: &MersennePrime, h: u32) -> Option<&'static str> {
    if h == 0 {
        return None;
    }
    if m.is_small() {
        return (m.degree() != 3 || h >= 2).then_some("small-prime");
    }
    let n = 2 * h as u64 + 1;
    numtheory::factorize(n)
        .into_keys()
        .any(|q| q != 7 && mersenne::in_delta(q).unwrap_or(false))
        .then_some("delta-factor")
}

/// Each prime with its Mersenne exponents, if any.
type Classified = Vec<(Poly, Option<(u32, u32)>)>;

fn classify(f: &Factorization) -> Result<Classified> {
    f.primes()
        .map(|p| Ok((p.clone(), mersenne::is_mersenne_prime(p)?)))
        .collect()
}

fn classification_json(c: &[(Poly, Option<(u32, u32)>)]) -> Value {
    c.iter()
        .map(|(p, ab)| json!({ "prime": p, "mersenne": ab.map(|(a, b)| [a, b]) }))
        .collect()
}

/// Square-freeness of `sigma(M^(2h))` and the existence of a non-Mersenne
/// prime factor when the hypotheses hold.
pub fn check_sigma_even_power(m: &MersennePrime, h: u32) -> Result<TheoremReport> {
    let s = sigma_even_power(m, h)?;
    let f = factor::factorize(&s)?;
    let classes = classify(&f)?;
    let non_mersenne = classes.iter().find(|(_, ab)| ab.is_none()).map(|(p, _)| p);
    let hypothesis = theorem_hypothesis(m, h);
    let squarefree = f.is_squarefree();
    let verdict = match (squarefree, hypothesis) {
        (false, _) => Verdict::Fail,
        (true, Some(_)) => Verdict::from_bool(non_mersenne.is_some()),
        (true, None) => Verdict::OutOfScope,
    };
    let witness = json!({
        "hypothesis": hypothesis,
        "squarefree": squarefree,
        "non_mersenne": non_mersenne,
        "factors": classification_json(&classes),
    });
    Ok(TheoremReport::new(
        claims::NONMERSENNE_DIVISOR,
        vec![m_param(m), ("h", h.into())],
        verdict,
        witness,
    ))
}

/// When every prime `P_j = 1 + x^(a_j) (x+1)^(b_j)` of `sigma(M^(2h))` is
/// Mersenne, checks `U = x^u (x+1)^v` with `u = sum a_j`, `v = sum b_j` both
/// even, and that `sigma(M^(2h))` is reducible. Otherwise reports which of
/// those conclusions fail.
pub fn check_u_split_square(m: &MersennePrime, h: u32) -> Result<TheoremReport> {
    let s = sigma_even_power(m, h)?;
    let f = factor::factorize(&s)?;
    let classes = classify(&f)?;
    let u = divisors::sigma_of(&f)?;
    let vx = u.valuation(Linear::X)?;
    let vy = u.valuation(Linear::XPlusOne)?;
    let splits = vx + vy == u.deg();
    let is_square = u.is_square();
    let reducible = f.omega() > 1 || !f.is_squarefree();
    let assumption = f.is_squarefree() && classes.iter().all(|(_, ab)| ab.is_some());
    let verdict = if assumption {
        let (sa, sb) = classes
            .iter()
            .filter_map(|(_, ab)| *ab)
            .fold((0usize, 0usize), |(x, y), (a, b)| (x + a as usize, y + b as usize));
        Verdict::from_bool(
            splits && is_square && vx == sa && vy == sb && vx % 2 == 0 && vy % 2 == 0 && reducible,
        )
    } else {
        Verdict::OutOfScope
    };
    let witness = json!({
        "all_mersenne": assumption,
        "splits": splits,
        "is_square": is_square,
        "reducible": reducible,
        "u": vx,
        "v": vy,
        "U": factor::factorize(&u)?.to_string(),
    });
    Ok(TheoremReport::new(
        claims::U_SPLIT_SQUARE,
        vec![m_param(m), ("h", h.into())],
        verdict,
        witness,
    ))
}

/// `sigma(M^(k-1))` divides `sigma(M^(2h))` for a divisor `k` of `2h+1`.
pub fn check_p_reduction(m: &MersennePrime, h: u32, k: u32) -> Result<TheoremReport> {
    let n = 2 * h + 1;
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!("{k} does not divide {n}")));
    }
    let big = sigma_even_power(m, h)?;
    let small = sigma_prime_power(&m.poly, k - 1)?;
    let divides = small.divides(&big)?;
    Ok(TheoremReport::new(
        claims::P_REDUCTION,
        vec![m_param(m), ("h", h.into()), ("k", k.into())],
        Verdict::from_bool(divides),
        Value::Null,
    ))
}

/// `alpha_l(sigma(M^(2h))) = alpha_l(M^(2h))` for `l < deg M`, and
/// `= alpha_l(M^(2h) + M^(2h-1))` for `deg M <= l < 2 deg M`.
pub fn check_alpha_top(m: &MersennePrime, h: u32) -> Result<TheoremReport> {
    let s = sigma_even_power(m, h)?;
    let top = m.poly.pow(2 * h as u64);
    let next = &top + &m.poly.pow(2 * h as u64 - 1);
    let d = m.degree() as usize;
    let mut mismatches = Vec::new();
    for l in 0..2 * d {
        let reference = if l < d { &top } else { &next };
        if s.alpha(l)? != reference.alpha(l)? {
            mismatches.push(l);
        }
    }
    Ok(TheoremReport::new(
        claims::ALPHA_TOP,
        vec![m_param(m), ("h", h.into())],
        Verdict::from_bool(mismatches.is_empty()),
        json!({ "checked": 2 * d, "mismatches": mismatches }),
    ))
}

/// For `M = M2` and prime `2h+1` outside {3, 5, 7}: `alpha_3(U_(2h)) = 1`,
/// with `alpha_3(M^(2h-1)) = 1` and `alpha_1(M^(2h-1)) = 0`.
pub fn check_alpha3_u_m2(m: &MersennePrime, h: u32) -> Result<TheoremReport> {
    let params = vec![m_param(m), ("h", h.into())];
    let p = 2 * h as u64 + 1;
    let in_scope = m.poly == catalog()["M2"] && numtheory::is_prime(p) && p > 7;
    if !in_scope {
        return Ok(TheoremReport::new(
            claims::ALPHA3_U_M2,
            params,
            Verdict::OutOfScope,
            json!({ "reason": "requires M = M2 and 2h+1 a prime above 7" }),
        ));
    }
    let u = u_poly(m, h)?;
    let prev = m.poly.pow(2 * h as u64 - 1);
    let a3u = u.alpha(3)?;
    let a3p = prev.alpha(3)?;
    let a1p = prev.alpha(1)?;
    Ok(TheoremReport::new(
        claims::ALPHA3_U_M2,
        params,
        Verdict::from_bool(a3u && a3p && !a1p),
        json!({ "alpha3_U": a3u as u8, "alpha3_prev": a3p as u8, "alpha1_prev": a1p as u8 }),
    ))
}

/// For `M` of degree at least 5 with `omega(sigma(M^2)) >= 3`:
/// `alpha_3(sigma(sigma(M^2))) = 1`.
pub fn check_alpha3_u2(m: &MersennePrime) -> Result<TheoremReport> {
    let s = sigma_even_power(m, 1)?;
    let f = factor::factorize(&s)?;
    let omega = f.omega();
    if m.is_small() || omega < 3 {
        return Ok(TheoremReport::new(
            claims::ALPHA3_U2,
            vec![m_param(m)],
            Verdict::OutOfScope,
            json!({ "omega": omega }),
        ));
    }
    let u = divisors::sigma_of(&f)?;
    let a3 = u.alpha(3)?;
    Ok(TheoremReport::new(
        claims::ALPHA3_U2,
        vec![m_param(m)],
        Verdict::from_bool(a3),
        json!({ "omega": omega, "alpha3_U": a3 as u8 }),
    ))
}

/// For `p = 2^m - 1` with `m` in {2, 3, 5}, checks on `S = sigma(M^(p-1))`:
/// every irreducible `P != M` of degree `m` divides `S`; no prime of degree
/// `r` with `2^r - 1` a prime other than `p` divides `S`; `M1` (resp. `M2`,
/// `bar(M2)`) divides `S` iff it differs from `M` and `p = 3` (resp. 7); and
/// for `p = 31`, `deg M >= 5`, some prime factor is not Mersenne.
pub fn check_degree_m_divisors(m: &MersennePrime, p: u64) -> Result<TheoremReport> {
    let deg_m = match p {
        3 => 2,
        7 => 3,
        31 => 5,
        _ => {
            return Err(Error::Unsupported(format!(
                "degree-m divisor check needs p in {{3, 7, 31}}, got {p}"
            )))
        }
    };
    check_budget(m, p - 1)?;
    let s = sigma_prime_power(&m.poly, p as u32 - 1)?;
    let f = factor::factorize(&s)?;

    let mut missing = Vec::new();
    for q in factor::irreducibles_of_degree(deg_m)? {
        if q != m.poly && !q.divides(&s)? {
            missing.push(q);
        }
    }
    let forbidden: Vec<&Poly> = f
        .primes()
        .filter(|q| {
            let r = q.deg();
            MERSENNE_EXPONENTS.contains(&r) && (r >= 64 || (1u64 << r) - 1 != p)
        })
        .collect();
    let cat = catalog();
    let mut pattern_mismatch = Vec::new();
    for (name, trigger) in [("M1", 3), ("M2", 7), ("M2bar", 7)] {
        let q = &cat[name];
        let expected = *q != m.poly && p == trigger;
        if q.divides(&s)? != expected {
            pattern_mismatch.push(name);
        }
    }
    let classes = classify(&f)?;
    let non_mersenne = classes.iter().find(|(_, ab)| ab.is_none()).map(|(q, _)| q);
    let needs_non_mersenne = p == 31 && m.degree() >= 5;
    let ok = missing.is_empty()
        && forbidden.is_empty()
        && pattern_mismatch.is_empty()
        && (!needs_non_mersenne || non_mersenne.is_some());
    let degrees: Vec<usize> = f.primes().map(Poly::deg).collect();
    Ok(TheoremReport::new(
        claims::DEGREE_M_DIVISORS,
        vec![m_param(m), ("p", p.into())],
        Verdict::from_bool(ok),
        json!({
            "factor_degrees": degrees,
            "missing": missing,
            "forbidden": forbidden,
            "pattern_mismatch": pattern_mismatch,
            "non_mersenne": non_mersenne,
        }),
    ))
}

/// For an odd prime `p`, `ord_p(2)` divides the degree of every prime factor
/// of `sigma(M^(p-1))`.
pub fn check_order_divides_degree(m: &MersennePrime, p: u64) -> Result<TheoremReport> {
    let order = numtheory::ord2(p)?;
    check_budget(m, p - 1)?;
    let s = sigma_prime_power(&m.poly, p as u32 - 1)?;
    let f = factor::factorize(&s)?;
    let degrees: Vec<usize> = f.primes().map(Poly::deg).collect();
    let ok = degrees.iter().all(|&d| (d as u64).is_multiple_of(order));
    Ok(TheoremReport::new(
        claims::ORDER_DIVIDES_DEGREE,
        vec![m_param(m), ("p", p.into())],
        Verdict::from_bool(ok),
        json!({ "order": order, "degrees": degrees }),
    ))
}

/// `m * N` is at least `2^m - 2(2^(m/2) - 1)`, decided in integers.
fn satisfies_count_bound(m: u32, n: u128) -> bool {
    // 2^m + 2 - m N <= 2^(m/2 + 1), squaring when the left side is positive
    let lhs = (1i128 << m) + 2 - m as i128 * n as i128;
    lhs <= 0 || (lhs as u128) * (lhs as u128) <= 1u128 << (m + 2)
}

fn mersenne_count(list: &[MersennePrime], m: u32) -> usize {
    list.iter().filter(|q| q.degree() == m).count()
}

/// `N_2(m)` against exhaustive enumeration (for `m <= 12`), and for `m >= 4`:
/// `phi(m) < N_2(m)`, the lower bound, `#Mersenne_m <= phi(m)`, and the
/// existence of a non-Mersenne irreducible of degree `m`.
pub fn check_irreducible_count(m: u32, mersenne: &[MersennePrime]) -> Result<TheoremReport> {
    let n = factor::count_irreducibles(m)?;
    let phi = factor::euler_phi(m as u64);
    let count = mersenne_count(mersenne, m);
    let brute = if m <= 12 {
        Some(factor::irreducibles_of_degree(m as usize)?.len() as u128)
    } else {
        None
    };
    let mut ok = brute.is_none_or(|b| b == n);
    if m >= 4 {
        ok &= (phi as u128) < n
            && satisfies_count_bound(m, n)
            && count as u64 <= phi
            && n > count as u128;
    }
    Ok(TheoremReport::new(
        claims::IRREDUCIBLE_COUNT,
        vec![("m", m.into())],
        Verdict::from_bool(ok),
        json!({ "N2": n.to_string(), "phi": phi, "mersenne": count, "enumerated": brute.map(|b| b.to_string()) }),
    ))
}

/// No Mersenne prime of degree `m` (a multiple of 8).
pub fn check_mersenne_degree_multiple_of_8(m: u32, mersenne: &[MersennePrime]) -> Result<TheoremReport> {
    if !m.is_multiple_of(8) {
        return Err(Error::InvalidArgument(format!("{m} is not a multiple of 8")));
    }
    let found: Vec<&Poly> = mersenne.iter().filter(|q| q.degree() == m).map(|q| &q.poly).collect();
    Ok(TheoremReport::new(
        claims::MERSENNE_DEGREE_8,
        vec![("m", m.into())],
        Verdict::from_bool(found.is_empty()),
        json!({ "found": found }),
    ))
}

/// A Fermat prime above 5 lies in Δ.
pub fn check_delta_fermat(p: u64) -> Result<TheoremReport> {
    let order = numtheory::ord2(p)?;
    let ok = mersenne::in_delta(p)?;
    Ok(TheoremReport::new(
        claims::DELTA_FERMAT,
        vec![("p", p.into())],
        Verdict::from_bool(ok),
        json!({ "order": order }),
    ))
}

fn odd_primes_mersenne(f: &Factorization) -> Result<bool> {
    for p in f.primes() {
        if p.deg() > 1 && mersenne::is_mersenne_prime(p)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn named(name: &str) -> Result<&'static Poly> {
    catalog()
        .get(name)
        .ok_or_else(|| Error::InvalidArgument(format!("no catalog entry {name:?}")))
}

/// `T_i` is perfect, indecomposable, and its odd primes are Mersenne.
pub fn check_perfect_catalog(name: &str) -> Result<TheoremReport> {
    let t = named(name)?;
    let f = factor::factorize(t)?;
    let perfect = divisors::is_perfect(t)?.verdict;
    let indecomposable = perfect && divisors::is_indecomposable(t, Mode::Perfect)?;
    let mersenne_only = odd_primes_mersenne(&f)?;
    Ok(TheoremReport::new(
        claims::PERFECT_CATALOG,
        vec![("name", name.into())],
        Verdict::from_bool(perfect && indecomposable && mersenne_only),
        json!({
            "factored": f.to_string(),
            "perfect": perfect,
            "indecomposable": indecomposable,
            "mersenne_only": mersenne_only,
        }),
    ))
}

/// `B_i` is a non-square, even, indecomposable unitary perfect polynomial
/// whose bar and `2^r`-th powers (`r <= 3`) are unitary perfect as well.
pub fn check_unitary_catalog(name: &str) -> Result<TheoremReport> {
    let b = named(name)?;
    let f = factor::factorize(b)?;
    let unitary = divisors::is_unitary_perfect(b)?.verdict;
    let indecomposable = unitary && divisors::is_indecomposable(b, Mode::Unitary)?;
    let mut closure = divisors::is_unitary_perfect(&b.bar())?.verdict;
    for r in 1..=3 {
        closure &= divisors::is_unitary_perfect(&b.pow(1 << r))?.verdict;
    }
    let even = divisors::is_even_poly(b)?;
    let non_square = !b.is_square();
    let mersenne_only = odd_primes_mersenne(&f)?;
    Ok(TheoremReport::new(
        claims::UNITARY_CATALOG,
        vec![("name", name.into())],
        Verdict::from_bool(unitary && indecomposable && closure && even && non_square && mersenne_only),
        json!({
            "factored": f.to_string(),
            "unitary_perfect": unitary,
            "indecomposable": indecomposable,
            "bar_and_powers": closure,
            "even": even,
            "non_square": non_square,
            "mersenne_only": mersenne_only,
        }),
    ))
}

fn check_counterexample(claim: &str, name: &str, mode: Mode, expected: (u32, u32)) -> Result<TheoremReport> {
    let report = divisors::check(named(name)?, mode)?;
    let want = Witness {
        prime: Poly::x(),
        m1: expected.0,
        m2: expected.1,
    };
    let ok = !report.verdict && report.witness.as_ref() == Some(&want);
    Ok(TheoremReport::new(
        claim,
        vec![("name", name.into())],
        Verdict::from_bool(ok),
        serde_json::to_value(&report.witness).expect("witness serializes"),
    ))
}

/// `S1` fails `sigma(A) = A` with witness `(x, 13, 7)`.
pub fn check_counterexample_s1() -> Result<TheoremReport> {
    check_counterexample(claims::COUNTEREXAMPLE_S1, "S1", Mode::Perfect, (13, 7))
}

/// `S2` fails `sigma*(A) = A` with witness `(x, 14, 10)`.
pub fn check_counterexample_s2() -> Result<TheoremReport> {
    check_counterexample(claims::COUNTEREXAMPLE_S2, "S2", Mode::Unitary, (14, 10))
}

/// Table rows as (base, multiplier): `base^(c 2^n - 1)` for sigma and
/// `base^(c 2^n)` for sigma*.
pub const TABLE_ROWS: &[(&str, u32)] = &[
    ("x", 3),
    ("x", 5),
    ("x", 7),
    ("x+1", 3),
    ("x+1", 5),
    ("x+1", 7),
    ("M2", 3),
    ("M2bar", 3),
];

fn table_base(base: &str) -> Result<Poly> {
    match base {
        "x" => Ok(Poly::x()),
        "x+1" => Ok(Poly::x_plus_one()),
        other => named(other).cloned(),
    }
}

/// The tabulated value: `cofactor^e * odd^(2^n)` where `e = 2^n - 1` for
/// sigma and `2^n` for sigma*.
fn table_expected(base: &str, c: u32, n: u32, mode: Mode) -> Result<Poly> {
    let cat = catalog();
    let k = 1u64 << n;
    let (cofactor, odd): (Poly, Poly) = match (base, c) {
        ("x", 3) => (Poly::x_plus_one(), cat["M1"].clone()),
        ("x", 5) => (Poly::x_plus_one(), cat["M3"].clone()),
        ("x", 7) => (Poly::x_plus_one(), &cat["M2"] * &cat["M2bar"]),
        ("x+1", 3) => (Poly::x(), cat["M1"].clone()),
        ("x+1", 5) => (Poly::x(), cat["M3bar"].clone()),
        ("x+1", 7) => (Poly::x(), &cat["M2"] * &cat["M2bar"]),
        ("M2", 3) => (&cat["M2"] + &Poly::one(), &cat["M1"] * &cat["M3bar"]),
        ("M2bar", 3) => (&cat["M2bar"] + &Poly::one(), &cat["M1"] * &cat["M3"]),
        _ => return Err(Error::InvalidArgument(format!("no table row {base}^({c}*2^n)"))),
    };
    let e = match mode {
        Mode::Perfect => k - 1,
        Mode::Unitary => k,
    };
    Ok(&cofactor.pow(e) * &odd.pow(k))
}

/// One table entry, bit-exact.
pub fn check_table_row(base: &str, c: u32, n: u32, mode: Mode) -> Result<TheoremReport> {
    let k = 1u32 << n;
    let exponent = match mode {
        Mode::Perfect => c * k - 1,
        Mode::Unitary => c * k,
    };
    let p = table_base(base)?;
    let got = mode.prime_power_sum(&p, exponent)?;
    let want = table_expected(base, c, n, mode)?;
    let claim = match mode {
        Mode::Perfect => claims::SIGMA_TABLES,
        Mode::Unitary => claims::SIGMA_STAR_TABLES,
    };
    Ok(TheoremReport::new(
        claim,
        vec![("base", base.into()), ("c", c.into()), ("n", n.into())],
        Verdict::from_bool(got == want),
        json!({ "exponent": exponent }),
    ))
}

/// `sigma(M^6)`'s double sum and its coefficients, for exploring the case
/// `2h + 1 = 7`. Nothing is asserted.
#[derive(Debug, Clone, Serialize)]
pub struct P7Exploration {
    pub mersenne: String,
    pub u6: Poly,
    pub factored: String,
    /// `alpha_l(U_6)` for `l = 0..=deg U_6`.
    pub alphas: Vec<u8>,
    /// Odd `l` with `alpha_l(U_6) = 0`.
    pub odd_zeros: Vec<usize>,
}

pub fn explore_p7(m: &MersennePrime) -> Result<P7Exploration> {
    let u6 = u_poly(m, 3)?;
    let alphas: Vec<u8> = (0..=u6.deg())
        .map(|l| u6.alpha(l).map(u8::from))
        .collect::<Result<_>>()?;
    let odd_zeros = (1..alphas.len()).step_by(2).filter(|&l| alphas[l] == 0).collect();
    Ok(P7Exploration {
        mersenne: m.label(),
        factored: factor::factorize(&u6)?.to_string(),
        u6,
        alphas,
        odd_zeros,
    })
}

/// Sweep configuration for [`run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_mersenne_degree: u32,
    pub max_h: u32,
    /// Restrict to one claim id.
    pub claim: Option<String>,
}

impl VerifyConfig {
    pub fn new(max_mersenne_degree: u32, max_h: u32) -> VerifyConfig {
        VerifyConfig {
            max_mersenne_degree,
            max_h,
            claim: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Task {
    NonMersenne(MersennePrime, u32),
    USplit(MersennePrime, u32),
    PReduction(MersennePrime, u32, u32),
    Alpha(MersennePrime, u32),
    Alpha3M2(MersennePrime, u32),
    Alpha3U2(MersennePrime),
    DegreeM(MersennePrime, u64),
    Order(MersennePrime, u64),
    Count(u32),
    Degree8(u32),
    Fermat(u64),
    Perfect(&'static str),
    Unitary(&'static str),
    S1,
    S2,
    Table(&'static str, u32, u32, Mode),
}

impl Task {
    fn claim(&self) -> &'static str {
        match self {
            Task::NonMersenne(..) => claims::NONMERSENNE_DIVISOR,
            Task::USplit(..) => claims::U_SPLIT_SQUARE,
            Task::PReduction(..) => claims::P_REDUCTION,
            Task::Alpha(..) => claims::ALPHA_TOP,
            Task::Alpha3M2(..) => claims::ALPHA3_U_M2,
            Task::Alpha3U2(..) => claims::ALPHA3_U2,
            Task::DegreeM(..) => claims::DEGREE_M_DIVISORS,
            Task::Order(..) => claims::ORDER_DIVIDES_DEGREE,
            Task::Count(_) => claims::IRREDUCIBLE_COUNT,
            Task::Degree8(_) => claims::MERSENNE_DEGREE_8,
            Task::Fermat(_) => claims::DELTA_FERMAT,
            Task::Perfect(_) => claims::PERFECT_CATALOG,
            Task::Unitary(_) => claims::UNITARY_CATALOG,
            Task::S1 => claims::COUNTEREXAMPLE_S1,
            Task::S2 => claims::COUNTEREXAMPLE_S2,
            Task::Table(.., Mode::Perfect) => claims::SIGMA_TABLES,
            Task::Table(.., Mode::Unitary) => claims::SIGMA_STAR_TABLES,
        }
    }

    fn params(&self) -> Vec<(&'static str, Param)> {
        match self {
            Task::NonMersenne(m, h) | Task::USplit(m, h) | Task::Alpha(m, h) | Task::Alpha3M2(m, h) => {
                vec![m_param(m), ("h", (*h).into())]
            }
            Task::PReduction(m, h, k) => vec![m_param(m), ("h", (*h).into()), ("k", (*k).into())],
            Task::Alpha3U2(m) => vec![m_param(m)],
            Task::DegreeM(m, p) | Task::Order(m, p) => vec![m_param(m), ("p", (*p).into())],
            Task::Count(m) | Task::Degree8(m) => vec![("m", (*m).into())],
            Task::Fermat(p) => vec![("p", (*p).into())],
            Task::Perfect(n) | Task::Unitary(n) => vec![("name", (*n).into())],
            Task::S1 => vec![("name", "S1".into())],
            Task::S2 => vec![("name", "S2".into())],
            Task::Table(base, c, n, _) => {
                vec![("base", (*base).into()), ("c", (*c).into()), ("n", (*n).into())]
            }
        }
    }

    fn run(&self, counting: &[MersennePrime]) -> Result<TheoremReport> {
        match self {
            Task::NonMersenne(m, h) => check_sigma_even_power(m, *h),
            Task::USplit(m, h) => check_u_split_square(m, *h),
            Task::PReduction(m, h, k) => check_p_reduction(m, *h, *k),
            Task::Alpha(m, h) => check_alpha_top(m, *h),
            Task::Alpha3M2(m, h) => check_alpha3_u_m2(m, *h),
            Task::Alpha3U2(m) => check_alpha3_u2(m),
            Task::DegreeM(m, p) => check_degree_m_divisors(m, *p),
            Task::Order(m, p) => check_order_divides_degree(m, *p),
            Task::Count(m) => check_irreducible_count(*m, counting),
            Task::Degree8(m) => check_mersenne_degree_multiple_of_8(*m, counting),
            Task::Fermat(p) => check_delta_fermat(*p),
            Task::Perfect(n) => check_perfect_catalog(n),
            Task::Unitary(n) => check_unitary_catalog(n),
            Task::S1 => check_counterexample_s1(),
            Task::S2 => check_counterexample_s2(),
            Task::Table(base, c, n, mode) => check_table_row(base, *c, *n, *mode),
        }
    }

    /// Runs the task; a budget overflow becomes an out-of-scope report.
    fn report(&self, counting: &[MersennePrime]) -> Result<TheoremReport> {
        match self.run(counting) {
            Err(Error::Budget(msg)) => Ok(TheoremReport::new(
                self.claim(),
                self.params(),
                Verdict::OutOfScope,
                json!({ "reason": msg }),
            )),
            other => other,
        }
    }
}

fn tasks(cfg: &VerifyConfig) -> Vec<Task> {
    let mut out = Vec::new();
    let primes = mersenne::enumerate_mersenne_primes(cfg.max_mersenne_degree);
    let max_p = 2 * cfg.max_h as u64 + 1;
    for m in &primes {
        for h in 1..=cfg.max_h {
            out.push(Task::NonMersenne(m.clone(), h));
            out.push(Task::USplit(m.clone(), h));
            out.push(Task::Alpha(m.clone(), h));
            if m.poly == catalog()["M2"] {
                out.push(Task::Alpha3M2(m.clone(), h));
            }
            for k in numtheory::divisors(2 * h as u64 + 1) {
                out.push(Task::PReduction(m.clone(), h, k as u32));
            }
        }
        out.push(Task::Alpha3U2(m.clone()));
        for p in [3u64, 7, 31].into_iter().filter(|&p| p <= max_p) {
            out.push(Task::DegreeM(m.clone(), p));
        }
        for p in (3..=max_p).step_by(2).filter(|&p| numtheory::is_prime(p)) {
            out.push(Task::Order(m.clone(), p));
        }
    }
    out.extend((1..=COUNTING_MAX_DEGREE).map(Task::Count));
    out.extend([8, 16, 24].map(Task::Degree8));
    out.extend([17, 257, 65537].map(Task::Fermat));
    let cat = catalog();
    out.extend(cat.perfect().into_iter().map(|(n, _)| Task::Perfect(n)));
    out.extend(cat.unitary().into_iter().map(|(n, _)| Task::Unitary(n)));
    out.push(Task::S1);
    out.push(Task::S2);
    for mode in [Mode::Perfect, Mode::Unitary] {
        for &(base, c) in TABLE_ROWS {
            out.extend((0..=4).map(|n| Task::Table(base, c, n, mode)));
        }
    }
    out
}

/// Runs every checker within the budget and returns the reports sorted by
/// `(claim_id, params)`. Zero budgets yield no reports.
pub fn run(cfg: &VerifyConfig) -> Result<Vec<TheoremReport>> {
    if let Some(c) = &cfg.claim {
        if !claims::ALL.contains(&c.as_str()) {
            return Err(Error::InvalidArgument(format!("unknown claim id {c:?}")));
        }
    }
    if cfg.max_mersenne_degree < 2 || cfg.max_h == 0 {
        return Ok(Vec::new());
    }
    let selected: Vec<Task> = tasks(cfg)
        .into_iter()
        .filter(|t| cfg.claim.as_deref().is_none_or(|c| t.claim() == c))
        .collect();
    let counting = if selected
        .iter()
        .any(|t| matches!(t, Task::Count(_) | Task::Degree8(_)))
    {
        mersenne::enumerate_mersenne_primes(COUNTING_MAX_DEGREE)
    } else {
        Vec::new()
    };
    let mut reports: Vec<TheoremReport> = selected
        .par_iter()
        .map(|t| t.report(&counting))
        .collect::<Result<_>>()?;
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(reports)
}

/// [`run`] over all claims.
pub fn run_all(max_mersenne_degree: u32, max_h: u32) -> Result<Vec<TheoremReport>> {
    run(&VerifyConfig::new(max_mersenne_degree, max_h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(name: &str) -> MersennePrime {
        MersennePrime::from_poly(&catalog()[name]).unwrap()
    }

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn m2_h2_has_a_non_mersenne_factor() {
        let r = check_sigma_even_power(&m("M2"), 2).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(u_poly(&m("M2"), 2).unwrap(), p("x^3(x+1)^6(x^3+x+1)"));
    }

    #[test]
    fn m2_h4_contains_x6_x_1() {
        let r = check_sigma_even_power(&m("M2"), 4).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.witness.unwrap()["non_mersenne"], "x^6+x+1");
    }

    #[test]
    fn m2_h1_is_out_of_scope() {
        let r = check_sigma_even_power(&m("M2"), 1).unwrap();
        assert_eq!(r.verdict, Verdict::OutOfScope);
        assert_eq!(sigma_even_power(&m("M2"), 1).unwrap(), p("M1 M3bar"));
    }

    #[test]
    fn hypotheses() {
        assert_eq!(theorem_hypothesis(&m("M1"), 1), Some("small-prime"));
        assert_eq!(theorem_hypothesis(&m("M2bar"), 1), None);
        assert_eq!(theorem_hypothesis(&m("M2bar"), 2), Some("small-prime"));
        let big = MersennePrime::new(2, 3).unwrap();
        assert_eq!(theorem_hypothesis(&big, 1), Some("delta-factor")); // 3
        assert_eq!(theorem_hypothesis(&big, 2), None); // 5
        assert_eq!(theorem_hypothesis(&big, 3), None); // 7
        assert_eq!(theorem_hypothesis(&big, 8), Some("delta-factor")); // 17
        assert_eq!(theorem_hypothesis(&big, 15), Some("delta-factor")); // 31
        assert_eq!(theorem_hypothesis(&big, 5), None); // 11
    }

    #[test]
    fn u_split_square_examples() {
        // sigma(M2^2) = M1 bar(M3), U_2 = (x^2+x)(x^4+x^3) = x^4 (x+1)^2
        let r = check_u_split_square(&m("M2"), 1).unwrap();
        assert_eq!(u_poly(&m("M2"), 1).unwrap(), p("x^4(x+1)^2"));
        assert_eq!(r.verdict, Verdict::Pass);
        let r = check_u_split_square(&m("M2"), 3).unwrap();
        assert_eq!(r.verdict, Verdict::OutOfScope);
        let w = r.witness.unwrap();
        assert_eq!(w["is_square"], true);
        assert_eq!(w["splits"], false);
        assert_eq!(u_poly(&m("M2"), 3).unwrap(), p("x^8(x+1)^4(x^3+x+1)^2"));
    }

    #[test]
    fn irreducible_sigma_gives_non_square_u() {
        // sigma(M1^2) = x^4+x+1 is irreducible, so U = 1 + that is not a square
        let s = sigma_even_power(&m("M1"), 1).unwrap();
        assert_eq!(factor::is_irreducible(&s), Ok(true));
        let r = check_u_split_square(&m("M1"), 1).unwrap();
        assert_eq!(r.witness.unwrap()["is_square"], false);
    }

    #[test]
    fn p_reduction_examples() {
        assert_eq!(check_p_reduction(&m("M2"), 4, 3).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_p_reduction(&m("M2"), 4, 1).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_p_reduction(&m("M2"), 4, 9).unwrap().verdict, Verdict::Pass);
        assert!(check_p_reduction(&m("M2"), 4, 5).is_err());
    }

    #[test]
    fn alpha_examples() {
        for h in 1..8 {
            assert_eq!(check_alpha_top(&m("M3"), h).unwrap().verdict, Verdict::Pass);
        }
        assert_eq!(check_alpha3_u_m2(&m("M2"), 5).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_alpha3_u_m2(&m("M2"), 3).unwrap().verdict, Verdict::OutOfScope);
        for h in 1..10u64 {
            let prev = catalog()["M2"].pow(2 * h - 1);
            assert_eq!(prev.alpha(3), Ok(true));
            assert_eq!(prev.alpha(1), Ok(false));
        }
    }

    #[test]
    fn degree_m_examples() {
        // x^2+x+1 | sigma(M3^2)
        let s = sigma_prime_power(&catalog()["M3"], 2).unwrap();
        assert!(p("x^2+x+1").divides(&s).unwrap());
        assert_eq!(check_degree_m_divisors(&m("M3"), 3).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_degree_m_divisors(&m("M3"), 7).unwrap().verdict, Verdict::Pass);
        let five = MersennePrime::new(2, 3).unwrap();
        let r = check_degree_m_divisors(&five, 31).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.witness.unwrap()["non_mersenne"].is_string());
        assert!(matches!(check_degree_m_divisors(&m("M3"), 5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn mersenne_exponent_table_matches_primality() {
        for r in 2..64usize {
            assert_eq!(
                MERSENNE_EXPONENTS.contains(&r),
                numtheory::is_prime((1u64 << r) - 1),
                "r = {r}"
            );
        }
    }

    #[test]
    fn count_bound_is_exact_at_the_edges() {
        // m = 4: 16 - 2*3 = 10, so N >= 10/4 means N >= 3 (4N >= 10)
        assert!(satisfies_count_bound(4, 3));
        assert!(!satisfies_count_bound(4, 2));
        // m = 5: 32 - 2(sqrt(32) - 1) = 22.68..., so 5N >= 22.68 means N >= 5
        assert!(satisfies_count_bound(5, 5));
        assert!(!satisfies_count_bound(5, 4));
    }

    #[test]
    fn empty_budget_is_empty() {
        assert!(run_all(1, 5).unwrap().is_empty());
        assert!(run_all(6, 0).unwrap().is_empty());
        assert!(run(&VerifyConfig {
            claim: Some("no-such-claim".into()),
            ..VerifyConfig::new(4, 1)
        })
        .is_err());
    }

    #[test]
    fn small_sweep_contains_out_of_scope_m2() {
        let reports = run_all(4, 1).unwrap();
        assert!(reports.iter().all(|r| r.verdict != Verdict::Fail), "{:#?}",
            reports.iter().filter(|r| r.verdict == Verdict::Fail).collect::<Vec<_>>());
        assert!(reports.iter().any(|r| r.claim_id == claims::NONMERSENNE_DIVISOR
            && r.params["M"] == Param::from("M2")
            && r.params["h"] == Param::from(1u32)
            && r.verdict == Verdict::OutOfScope));
    }

    #[test]
    fn p7_exploration_runs() {
        let e = explore_p7(&m("M2")).unwrap();
        assert_eq!(e.u6, p("x^8(x+1)^4(x^3+x+1)^2"));
        assert_eq!(e.alphas.len(), e.u6.deg() + 1);
        assert_eq!(e.alphas[0], 1);
    }
}
