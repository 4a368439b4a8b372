//! Coefficients of sigma(sigma(M^6)) for the small Mersenne primes.

use gf2perfect::mersenne::{catalog, MersennePrime};
use gf2perfect::verify::explore_p7;

fn main() -> gf2perfect::Result<()> {
    for (_, poly) in catalog().small_mersenne() {
        let e = explore_p7(&MersennePrime::from_poly(poly)?)?;
        println!("{:<6} U_6 = {}", e.mersenne, e.factored);
        println!("       odd l with alpha_l(U_6) = 0: {:?}", e.odd_zeros);
    }
    Ok(())
}
