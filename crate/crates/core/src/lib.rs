//! Exact arithmetic over GF(2)[x], divisor sums and the classification of
//! perfect and unitary perfect polynomials built from Mersenne primes.
//!
//! ```
//! use gf2perfect::{divisors, Poly};
//!
//! let t1: Poly = "x^2(x+1)(x^2+x+1)".parse().unwrap();
//! assert_eq!(divisors::sigma(&t1).unwrap(), t1);
//! ```

pub mod cli;
pub mod divisors;
pub mod error;
pub mod factor;
pub mod mersenne;
pub mod numtheory;
pub mod poly;
pub mod search;
pub mod verify;

pub use divisors::{Mode, PerfectionReport, Witness};
pub use error::{Error, Result};
pub use factor::Factorization;
pub use mersenne::{catalog, MersennePrime};
pub use poly::{Degree, Linear, Poly};
