use alloc::string::String;

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("exponent b must be at least 1")]
    ZeroExponent,
    #[error("lattice coordinates must be positive integers")]
    NonPositiveCoordinate,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("grid of {cells} cells exceeds the configured cap of {cap} cells")]
    BudgetExceeded { cells: u128, cap: u64 },
    #[error("prime matrix needs {expected} primes, got {got}")]
    WrongPrimeCount { expected: usize, got: usize },
    #[error("prime matrix entry {0} is not prime")]
    NotPrime(BigUint),
    #[error("prime matrix entry {0} appears more than once")]
    DuplicatePrime(BigUint),
    #[error("moduli {first} and {second} are not coprime")]
    NonCoprimeModuli { first: BigUint, second: BigUint },
    #[error("residue {residue} is not below its modulus {modulus}")]
    ResidueOutOfRange { residue: BigUint, modulus: BigUint },
    #[error("not a forest: point (r+{i}, s+{j}) = ({r}, {s}) is visible")]
    NotAForest {
        i: usize,
        j: usize,
        r: BigUint,
        s: BigUint,
    },
    #[error("no forest found within the scanned bounds")]
    NoForestFound,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zeta({0}) diverges; s must be at least 2")]
    Divergent(u32),
    #[error("tolerance {0:e} is below what 64-bit floats can certify")]
    ToleranceUnattainable(f64),
}
