//! Generalized lattice-point visibility.
//!
//! A point `(r, s)` of the positive quadrant is *b-visible* when the first
//! lattice point on the curve `y = a·x^b` through it is the point itself.
//! That happens exactly when the generalized gcd
//! `ggcd_b(r, s) = max{k : k | r and k^b | s}` equals one.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! * [`arith`]: primes, factorization, valuations, Möbius and the ggcd itself,
//! * [`visibility`]: per-point classification plus three independent counters
//!   for rectangular grids,
//! * [`zeta`]: integer zeta values and the predicted density `1/ζ(b+1)`,
//! * [`forest`]: CRT construction of arbitrarily large invisible forests and
//!   an exhaustive nearest-forest search.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
mod error;
pub mod forest;
pub mod visibility;
pub mod zeta;

pub use arith::{factorize, ggcd, moebius, primes_up_to, valuation, Exponent, Factorization};
pub use error::Error;
pub use forest::{
    construct_forest, crt_solve, find_nearest_forest, verify_forest, CongruenceSystem, Forest,
    NearestForests, PrimeMatrix, WitnessGrid,
};
pub use visibility::{
    count_invisible_brute, count_visible_moebius, density_report, is_b_visible, sieve_grid,
    sight_coefficient, DensityReport, Method, Point, SieveConfig, VisibilityGrid,
};
pub use zeta::{predicted_proportions, table_rows, zeta_int, ZetaValue};

pub use num_bigint::BigUint;

pub type Result<T, E = Error> = core::result::Result<T, E>;
