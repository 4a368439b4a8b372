//! Basic ring operations on packed polynomials.

use gf2perfect::{Linear, Poly};

fn main() -> gf2perfect::Result<()> {
    let m2: Poly = "x^3+x+1".parse()?;
    let m2bar = m2.bar();
    println!("M2 = {m2}, bar(M2) = {m2bar}");
    println!("M2 * bar(M2) = {}", &m2 * &m2bar);
    println!("gcd(M2, bar(M2)) = {}", m2.gcd(&m2bar)?);

    let (q, r) = "x^4+x^3+x^2+x+1".parse::<Poly>()?.div_rem(&"x^2+x+1".parse()?)?;
    println!("(x^4+x^3+x^2+x+1) = (x^2+x+1)*({q}) + ({r})");

    let t1: Poly = "T1".parse()?;
    println!("T1 = {t1}, val_x = {}, hex {}", t1.valuation(Linear::X)?, t1.to_hex());

    let sq = Poly::x_plus_one().pow(2);
    println!("(x+1)^2 = {sq}, square: {}, sqrt = {}", sq.is_square(), sq.sqrt()?);

    let big = &Poly::monomial(4000) + &Poly::one();
    let prod = big.square();
    println!("deg((x^4000+1)^2) = {}, weight {}", prod.degree(), prod.weight());
    Ok(())
}
