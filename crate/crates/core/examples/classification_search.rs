//! Structured search in both modes, then the brute-force oracle on a small range.

use std::time::Instant;

use gf2perfect::factor::factorize;
use gf2perfect::search::{classify_hits, search_bruteforce, search_structured, Family, SearchConfig};
use gf2perfect::Mode;

fn main() -> gf2perfect::Result<()> {
    for (mode, degree) in [(Mode::Perfect, 36), (Mode::Unitary, 30)] {
        let start = Instant::now();
        let cfg = SearchConfig::new(degree, mode, Family::MersenneRestricted);
        let hits: Vec<_> = search_structured(&cfg)?.into_iter().map(|(p, _)| p).collect();
        println!("{mode}, degree <= {degree}: {} hits in {:.2?}", hits.len(), start.elapsed());
        for class in classify_hits(&hits, mode)?.classes {
            let label = class.label.as_deref().unwrap_or("?");
            println!("  {label:<8} {}", factorize(&class.representative)?);
        }
    }

    // every polynomial of degree <= 12, including those with non-Mersenne factors
    let cfg = SearchConfig::new(12, Mode::Perfect, Family::All);
    let brute = search_bruteforce(&cfg)?;
    let report = classify_hits(&brute, Mode::Perfect)?;
    println!("all perfect polynomials of degree <= 12: {}", brute.len());
    for p in &report.outside_scope {
        println!("  non-Mersenne odd part: {}", factorize(p)?);
    }
    Ok(())
}
