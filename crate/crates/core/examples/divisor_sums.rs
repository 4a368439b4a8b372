//! Divisor sums, perfection checks and witnesses.

use gf2perfect::divisors::{self, sigma, sigma_oracle, sigma_star, Mode};
use gf2perfect::factor::factorize;
use gf2perfect::Poly;

fn main() -> gf2perfect::Result<()> {
    for s in ["x^2", "x^4", "x^6", "(x^3+x+1)^8"] {
        let p: Poly = s.parse()?;
        println!("sigma({s}) = {}", factorize(&sigma(&p)?)?);
    }
    let m2_cubed: Poly = "(x^3+x+1)^3".parse()?;
    println!("sigma*(M2^3) = {}", factorize(&sigma_star(&m2_cubed)?)?);

    let t3: Poly = "T3".parse()?;
    println!("sigma(T3) by divisor enumeration equals T3: {}", sigma_oracle(&t3)? == t3);

    for (name, mode) in [("T8", Mode::Perfect), ("S1", Mode::Perfect), ("B7^2", Mode::Unitary), ("S2", Mode::Unitary)] {
        let r = divisors::check(&name.parse()?, mode)?;
        match r.witness {
            None => println!("{name} under {mode}: {}", r.verdict),
            Some(w) => println!("{name} under {mode}: false, {}^{} exactly divides it, ^{} its sum", w.prime, w.m1, w.m2),
        }
    }

    let b3: Poly = "B3".parse()?;
    println!("class rep of bar(B3)^4: {}", divisors::canonical_class_rep(&b3.bar().pow(4))?);
    println!("T1 indecomposable: {}", divisors::is_indecomposable(&"T1".parse()?, Mode::Perfect)?);
    Ok(())
}
