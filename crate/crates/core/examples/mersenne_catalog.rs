//! Mersenne primes and the named catalog.

use gf2perfect::mersenne::{catalog, enumerate_mersenne_primes, in_delta, is_mersenne_prime, ord2};
use gf2perfect::Poly;

fn main() -> gf2perfect::Result<()> {
    let primes = enumerate_mersenne_primes(24);
    let mut by_degree = std::collections::BTreeMap::<u32, usize>::new();
    for m in &primes {
        *by_degree.entry(m.degree()).or_default() += 1;
    }
    println!("Mersenne primes of degree <= 24 by degree: {by_degree:?}");
    for m in primes.iter().take(7) {
        println!("  {:<8} 1 + x^{}(x+1)^{} = {}", m.label(), m.a, m.b, m.poly);
    }

    let p: Poly = "x^6+x+1".parse()?;
    println!("x^6+x+1 is Mersenne: {:?}", is_mersenne_prime(&p)?);

    for q in [3u64, 5, 7, 17, 31, 257] {
        println!("p = {q:>3}: ord_p(2) = {:>2}, in Delta: {}", ord2(q)?, in_delta(q)?);
    }

    for (name, poly) in catalog().iter() {
        println!("{name:<6} degree {:>2}  {poly}", poly.degree());
    }
    Ok(())
}
