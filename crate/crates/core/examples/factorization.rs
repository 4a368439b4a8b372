//! Factoring, irreducibility, counting and primitivity.

use gf2perfect::factor::{self, count_irreducibles, euler_phi, is_irreducible, is_primitive};
use gf2perfect::Poly;

fn main() -> gf2perfect::Result<()> {
    for s in ["x^6+x^5+x^4+x^3+x^2+x+1", "T5", "B9", "x^64+x^4+x^3+x+1"] {
        let p: Poly = s.parse()?;
        let f = factor::factorize(&p)?;
        println!("{s:<24} = {f}   (omega {}, square-free {})", f.omega(), f.is_squarefree());
    }

    // the same factorization comes back under any seed
    let p: Poly = "(x^7+x+1)^3*(x^9+x^4+1)*(x^11+x^2+1)".parse()?;
    let a = factor::factorize_seeded(&p, 1)?;
    let b = factor::factorize_seeded(&p, 2)?;
    println!("seed-independent: {}", a.factors() == b.factors());

    for m in 1..=8u32 {
        println!("N_2({m}) = {:>3}, phi({m}) = {}", count_irreducibles(m)?, euler_phi(m as u64));
    }

    for s in ["x^2+x+1", "x^3+x+1", "x^4+x^3+x^2+x+1", "x^4+x+1"] {
        let p: Poly = s.parse()?;
        println!("{s}: irreducible {}, primitive {}", is_irreducible(&p)?, is_primitive(&p)?);
    }
    Ok(())
}
