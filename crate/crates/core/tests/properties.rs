//! Property suites, all run under a fixed proptest seed.

use gf2perfect::divisors::{self, sigma, sigma_oracle, sigma_prime_power_series, sigma_star, sigma_star_oracle, Mode};
use gf2perfect::factor::{self, factorize, factorize_seeded, is_irreducible};
use gf2perfect::search::{search_bruteforce, search_structured, Family, SearchConfig};
use gf2perfect::{Linear, Poly};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

const SEED: u64 = 0x00DD_BA11;

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Nonzero polynomial with up to `limbs` 64-bit words.
fn poly(limbs: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(any::<u64>(), 1..=limbs)
        .prop_map(Poly::from_limbs)
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn small_poly(max_degree: u32) -> impl Strategy<Value = Poly> {
    (1u64..(1 << (max_degree + 1))).prop_map(Poly::from_u64)
}

fn irreducible_up_to(max_degree: usize) -> impl Strategy<Value = Poly> {
    let all: Vec<Poly> = (1..=max_degree)
        .flat_map(|m| factor::irreducibles_of_degree(m).unwrap())
        .collect();
    prop::sample::select(all)
}

/// `p(x + 1)` by Horner's rule.
fn substitute_x_plus_one(p: &Poly) -> Poly {
    let y = Poly::x_plus_one();
    let mut acc = Poly::zero();
    for i in (0..p.bit_len()).rev() {
        acc = &acc * &y;
        if p.coeff(i) {
            acc = &acc + &Poly::one();
        }
    }
    acc
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn addition_is_an_abelian_group(a in poly(4), b in poly(4), c in poly(4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &Poly::zero(), a.clone());
        prop_assert!((&a + &a).is_zero());
    }

    #[test]
    fn multiplication_axioms(a in poly(6), b in poly(6), c in poly(6)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Poly::one(), a.clone());
        prop_assert_eq!((&a * &b).degree().finite(), Some(a.deg_usize() + b.deg_usize()));
    }

    #[test]
    fn fast_product_matches_schoolbook(a in poly(40), b in poly(40)) {
        prop_assert_eq!(&a * &b, a.mul_schoolbook(&b));
        prop_assert_eq!(a.mul_portable(&b), a.mul_schoolbook(&b));
        prop_assert_eq!(a.square(), a.mul_schoolbook(&a));
    }

    #[test]
    fn division_reconstructs(a in poly(5), d in poly(3)) {
        let (q, r) = a.div_rem(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, a.clone());
        prop_assert!(r.is_zero() || r.deg_usize() < d.deg_usize());
        prop_assert_eq!(a.rem(&d).unwrap(), r);
    }

    #[test]
    fn gcd_divides_both_and_is_maximal(a in poly(2), b in poly(2), c in poly(1)) {
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
        let ac = &a * &c;
        let bc = &b * &c;
        prop_assert_eq!(ac.gcd(&bc).unwrap(), &g * &c);
    }

    #[test]
    fn pow_and_pow_mod(a in poly(1), m in poly(2), e in 0u64..40) {
        let direct = (0..e).fold(Poly::one(), |acc, _| &acc * &a);
        prop_assert_eq!(a.pow(e), direct.clone());
        if m.deg_usize() > 0 {
            prop_assert_eq!(a.pow_mod(e as u128, &m).unwrap(), direct.rem(&m).unwrap());
        }
    }

    #[test]
    fn bar_is_the_substitution_automorphism(a in poly(2), b in poly(2)) {
        prop_assert_eq!(a.bar(), substitute_x_plus_one(&a));
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!(a.valuation(Linear::X).unwrap(), a.bar().valuation(Linear::XPlusOne).unwrap());
    }

    #[test]
    fn square_root_inverts_squaring(a in poly(8)) {
        let s = a.square();
        prop_assert!(s.is_square());
        prop_assert_eq!(s.sqrt().unwrap(), a.clone());
        prop_assert_eq!(a.derivative().is_zero(), a.is_square());
    }

    #[test]
    fn text_round_trip(a in poly(3)) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Poly>().unwrap(), a.clone());
        prop_assert_eq!(a.to_hex().parse::<Poly>().unwrap(), a);
    }

    #[test]
    fn sigma_commutes_with_bar(a in small_poly(40)) {
        prop_assert_eq!(sigma(&a.bar()).unwrap(), sigma(&a).unwrap().bar());
        prop_assert_eq!(sigma_star(&a.bar()).unwrap(), sigma_star(&a).unwrap().bar());
    }

    #[test]
    fn sigma_is_multiplicative(a in small_poly(30), b in small_poly(30)) {
        prop_assume!(a.gcd(&b).unwrap().is_one());
        let ab = &a * &b;
        prop_assert_eq!(sigma(&ab).unwrap(), &sigma(&a).unwrap() * &sigma(&b).unwrap());
        prop_assert_eq!(sigma_star(&ab).unwrap(), &sigma_star(&a).unwrap() * &sigma_star(&b).unwrap());
    }

    #[test]
    fn closed_form_matches_series(p in small_poly(12), n in 0u32..40) {
        prop_assume!(!p.is_one());
        prop_assert_eq!(divisors::sigma_prime_power(&p, n).unwrap(), sigma_prime_power_series(&p, n));
    }

    #[test]
    fn failed_checks_carry_a_valid_witness(a in small_poly(40)) {
        for mode in [Mode::Perfect, Mode::Unitary] {
            let r = divisors::check(&a, mode).unwrap();
            let sum = mode.divisor_sum(&a).unwrap();
            match r.witness {
                None => prop_assert!(r.verdict && sum == a),
                Some(w) => {
                    prop_assert!(!r.verdict && w.m1 != w.m2);
                    prop_assert!(is_irreducible(&w.prime).unwrap());
                    prop_assert_eq!(divisors::exact_power(&w.prime, &a).unwrap(), w.m1);
                    prop_assert_eq!(divisors::exact_power(&w.prime, &sum).unwrap(), w.m2);
                }
            }
        }
    }

    #[test]
    fn unitary_prime_power_form(s in irreducible_up_to(8), n in 0u32..=4, half in 0u32..=4) {
        let u = 2 * half + 1;
        let k = 1u64 << n;
        let lhs = sigma_star(&s.pow(k * u as u64)).unwrap();
        let rhs = &(&s + &Poly::one()).pow(k) * &sigma_prime_power_series(&s, u - 1).pow(k);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(config(10_000))]

    #[test]
    fn factorization_reconstructs(a in poly(3), seed in any::<u64>()) {
        prop_assume!(!a.is_constant());
        let f = factorize_seeded(&a, seed).unwrap();
        prop_assert_eq!(f.product(), a.clone());
        let primes: Vec<&Poly> = f.primes().collect();
        prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
        for p in primes {
            prop_assert!(is_irreducible(p).unwrap());
        }
        prop_assert!(f.factors().iter().all(|(_, m)| *m >= 1));
    }
}

trait DegUsize {
    fn deg_usize(&self) -> usize;
}

impl DegUsize for Poly {
    fn deg_usize(&self) -> usize {
        self.degree().finite().unwrap_or(0)
    }
}

#[test]
fn sigma_agrees_with_divisor_enumeration_to_degree_12() {
    for mask in 1u64..(1 << 13) {
        let a = Poly::from_u64(mask);
        assert_eq!(sigma(&a).unwrap(), sigma_oracle(&a).unwrap(), "sigma({a})");
        assert_eq!(sigma_star(&a).unwrap(), sigma_star_oracle(&a).unwrap(), "sigma*({a})");
    }
}

#[test]
fn factorization_is_seed_independent() {
    let a: Poly = "(x^5+x^2+1)^3*(x^7+x+1)*(x^13+x^4+x^3+x+1)^2*(x^2+x+1)".parse().unwrap();
    let reference = factorize(&a).unwrap();
    for seed in 0..32 {
        assert_eq!(factorize_seeded(&a, seed).unwrap().factors(), reference.factors());
    }
}

#[test]
fn unitary_hits_are_closed_under_bar_and_squaring() {
    let cfg = SearchConfig {
        all_powers: true,
        ..SearchConfig::new(30, Mode::Unitary, Family::MersenneRestricted)
    };
    let hits: Vec<Poly> = search_structured(&cfg).unwrap().into_iter().map(|(p, _)| p).collect();
    assert!(!hits.is_empty());
    for h in &hits {
        assert!(divisors::is_even_poly(h).unwrap());
        assert!(hits.contains(&h.bar()), "bar({h}) missing");
        for r in 1..=3 {
            assert!(divisors::check(&h.pow(1 << r), Mode::Unitary).unwrap().verdict);
        }
        let sq = h.square();
        if sq.deg_usize() <= 30 {
            assert!(hits.contains(&sq), "{h} squared missing");
        }
    }
}

#[test]
fn search_results_are_monotone_in_the_budget() {
    for mode in [Mode::Perfect, Mode::Unitary] {
        let mut previous: Vec<Poly> = Vec::new();
        for d in [4, 8, 12, 16, 20, 24] {
            let cfg = SearchConfig { all_powers: true, ..SearchConfig::new(d, mode, Family::MersenneRestricted) };
            let hits: Vec<Poly> = search_structured(&cfg).unwrap().into_iter().map(|(p, _)| p).collect();
            assert!(previous.iter().all(|p| hits.contains(p)), "{mode} at {d}");
            previous = hits;
        }
    }
}

fn odd_part_is_mersenne(p: &Poly) -> bool {
    factorize(p).unwrap().primes().all(|q| {
        q.deg_usize() == 1 || gf2perfect::mersenne::is_mersenne_prime(q).unwrap().is_some()
    })
}

#[test]
fn brute_force_and_structured_search_agree_to_degree_16() {
    for mode in [Mode::Perfect, Mode::Unitary] {
        let brute = search_bruteforce(&SearchConfig::new(16, mode, Family::All)).unwrap();
        let restricted: Vec<Poly> = brute.into_iter().filter(odd_part_is_mersenne).collect();
        let cfg = SearchConfig { all_powers: true, ..SearchConfig::new(16, mode, Family::MersenneRestricted) };
        let structured: Vec<Poly> = search_structured(&cfg).unwrap().into_iter().map(|(p, _)| p).collect();
        assert_eq!(restricted, structured, "{mode}");
    }
}

#[test]
fn every_squarefree_claim_matches_the_derivative_test() {
    for mask in 2u64..(1 << 12) {
        let a = Poly::from_u64(mask);
        let by_derivative = a.gcd(&a.derivative()).unwrap().is_one();
        assert_eq!(factor::is_squarefree(&a).unwrap(), by_derivative, "{a}");
    }
}
