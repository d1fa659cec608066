//! Invariants checked through the public API only.

use lattice_sight_core::arith::{factorize, ggcd, Exponent};
use lattice_sight_core::forest::{construct_forest, verify_forest, PrimeMatrix};
use lattice_sight_core::visibility::{
    count_invisible_brute, count_visible_moebius, sieve_grid, SieveConfig,
};
use lattice_sight_core::{find_nearest_forest, BigUint, Error};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn exp(b: u32) -> Exponent {
    Exponent::new(b).unwrap()
}

proptest! {
    #[test]
    fn scaling_identity(b in 1u32..6, k in 1u64..1000, r in 1u64..100_000, s in 1u64..1_000_000_000) {
        let (k, r, s) = (BigUint::from(k), BigUint::from(r), BigUint::from(s));
        let scaled = ggcd(exp(b), &(&k * &r), &(k.pow(b) * &s)).unwrap();
        prop_assert_eq!(scaled, k * ggcd(exp(b), &r, &s).unwrap());
    }

    #[test]
    fn factorization_reassembles(n in 1u64..u64::MAX / 1024, small in 0u32..10) {
        // keep inputs with a large cofactor cheap by multiplying in small primes
        let n = BigUint::from(n % 1_000_000_000 + 1) << small;
        let f = factorize(&n).unwrap();
        prop_assert_eq!(f.product(), n);
        prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn counters_agree(b in 1u32..6, n in 1u64..300) {
        let brute = count_invisible_brute(exp(b), n);
        let sieve = sieve_grid(exp(b), n, n, &SieveConfig::default()).unwrap().count_invisible();
        prop_assert_eq!(brute, sieve);
        prop_assert_eq!(brute, n * n - count_visible_moebius(exp(b), n));
    }

    #[test]
    fn explicit_prime_matrices_build_forests(b in 1u32..4, pick in proptest::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23], 4)) {
        let matrix = PrimeMatrix::from_bottom_fill(2, 2, &pick).unwrap();
        let forest = construct_forest(&matrix, exp(b)).unwrap();
        let witnesses = verify_forest(&forest).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((&witnesses.get(i, j).value % matrix.get(i, j)).is_zero());
            }
        }
    }
}

#[test]
fn nearest_horizontal_pair() {
    // (2,6) and (3,6) share 2 and 3 with 6; frozen from a gcd scan over [1,50]²
    let found = find_nearest_forest(exp(1), 2, 1, 50, 50).unwrap();
    assert_eq!(found.anchors, [(2, 6)]);
    assert_eq!(found.distance_squared, 40);
    for (r, s) in &found.anchors {
        for i in 0..2 {
            assert!(!ggcd(exp(1), &BigUint::from(r + i), &BigUint::from(*s))
                .unwrap()
                .is_one());
        }
    }
    assert_eq!(
        find_nearest_forest(exp(1), 2, 1, 1, 50),
        Err(Error::InvalidArgument(
            "bounds 1×50 are smaller than the 2×1 forest".into()
        ))
    );
}
