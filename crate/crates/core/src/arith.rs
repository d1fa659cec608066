//! Exact integer primitives: primes, factorization, valuations, Möbius and
//! the generalized gcd.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// The exponent `b` of the family of sight curves `y = a·x^b`. Always ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(NonZeroU32);

impl Exponent {
    pub const ONE: Exponent = Exponent(NonZeroU32::MIN);

    pub fn new(b: u32) -> Result<Self> {
        NonZeroU32::new(b).map(Exponent).ok_or(Error::ZeroExponent)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0.get()
    }

    /// The exponent one higher, used for `ζ(b+1)`.
    pub fn succ(self) -> u32 {
        self.get().saturating_add(1)
    }
}

impl TryFrom<u32> for Exponent {
    type Error = Error;

    fn try_from(b: u32) -> Result<Self> {
        Exponent::new(b)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All primes `p ≤ limit`, ascending. Odd-only sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // bit k stands for the odd number 2k + 1
    let odd_count = (limit as usize).div_ceil(2);
    let mut composite = vec![0u64; odd_count.div_ceil(64)];
    let mut k = 1usize;
    while (2 * k + 1) * (2 * k + 1) <= limit as usize {
        if composite[k / 64] >> (k % 64) & 1 == 0 {
            let p = 2 * k + 1;
            let mut m = p * p / 2;
            while m < odd_count {
                composite[m / 64] |= 1 << (m % 64);
                m += p;
            }
        }
        k += 1;
    }
    let mut primes = vec![2];
    for k in 1..odd_count {
        if composite[k / 64] >> (k % 64) & 1 == 0 {
            primes.push(2 * k as u64 + 1);
        }
    }
    primes
}

/// Deterministic primality by trial division.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d <= n / d {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Trial-division primality for unbounded naturals. Only intended for the
/// small entries of prime matrices.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(n) = n.to_u64() {
        return is_prime_u64(n);
    }
    factorize(n).map(|f| f.is_prime()).unwrap_or(false)
}

/// Prime factorization `n = Π p^e` with primes strictly ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    fn is_prime(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|idx| self.factors[idx].1)
            .unwrap_or(0)
    }
}

impl From<Vec<(u64, u32)>> for Factorization {
    fn from(factors: Vec<(u64, u32)>) -> Self {
        Factorization {
            factors: factors
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect(),
        }
    }
}

/// Renders as `2^3 · 3^5 · 12391`; the empty factorization renders as `1`.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (idx, (p, e)) in self.factors.iter().enumerate() {
            if idx > 0 {
                f.write_str(" · ")?;
            }
            match e {
                1 => write!(f, "{p}")?,
                _ => write!(f, "{p}^{e}")?,
            }
        }
        Ok(())
    }
}

/// Factorization of a machine word by trial division. `n` must be nonzero.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let e = strip(&mut n, p);
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut d = 5u64;
    while d <= n / d {
        for p in [d, d + 2] {
            let e = strip(&mut n, p);
            if e > 0 {
                out.push((p, e));
            }
        }
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn strip(n: &mut u64, p: u64) -> u32 {
    let mut e = 0;
    while (*n).is_multiple_of(p) {
        *n /= p;
        e += 1;
    }
    e
}

/// Factorizes `n ≥ 1` by trial division up to `√n`.
///
/// Large inputs are fine as long as everything but one prime factor is
/// small; the remainder drops to the machine-word path as soon as it fits.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    if let Some(small) = n.to_u64() {
        return Ok(factorize_u64(small).into());
    }
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let mut d = BigUint::from(2u32);
    loop {
        if let Some(small) = rest.to_u64() {
            // every prime below `d` has already been divided out
            factors.extend(
                factorize_u64(small)
                    .into_iter()
                    .map(|(p, e)| (BigUint::from(p), e)),
            );
            break;
        }
        if &d * &d > rest {
            factors.push((rest, 1));
            break;
        }
        let mut e = 0;
        loop {
            let (q, rem) = rest.div_rem(&d);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += if d == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    Ok(Factorization { factors })
}

/// Largest `e` with `p^e | n`.
pub fn valuation(n: &BigUint, p: &BigUint) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::InvalidArgument(
            "valuation of zero is unbounded".into(),
        ));
    }
    if p <= &BigUint::one() {
        return Err(Error::InvalidArgument(
            "valuation base must be at least 2".into(),
        ));
    }
    if let (Some(n), Some(p)) = (n.to_u64(), p.to_u64()) {
        return Ok(valuation_u64(n, p));
    }
    Ok(valuation_capped(n, p, u32::MAX))
}

/// `valuation` for machine words; `n ≥ 1`, `p ≥ 2`.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0 && p > 1);
    strip(&mut n, p)
}

// Stops dividing once `cap` is reached, so huge `s` never costs more than
// the exponent that can actually matter.
fn valuation_capped(n: &BigUint, p: &BigUint, cap: u32) -> u32 {
    let mut rest = n.clone();
    let mut e = 0;
    while e < cap {
        let (q, rem) = rest.div_rem(p);
        if !rem.is_zero() {
            break;
        }
        rest = q;
        e += 1;
    }
    e
}

fn valuation_capped_u64(mut n: u64, p: u64, cap: u32) -> u32 {
    let mut e = 0;
    while e < cap && n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Möbius function: 0 unless `k` is squarefree, else `(-1)^ω(k)`.
pub fn moebius(k: u64) -> i8 {
    assert!(k > 0, "moebius is defined on positive integers");
    let mut sign = 1i8;
    for (_, e) in factorize_u64(k) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// `μ(k)` for every `0 ≤ k ≤ n` (entry 0 is unused and set to 0), by a
/// linear sieve.
pub fn moebius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![0i8; n + 1];
    if n == 0 {
        return mu;
    }
    mu[1] = 1;
    let mut is_composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=n {
        if !is_composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let Some(ip) = i.checked_mul(p).filter(|&ip| ip <= n) else {
                break;
            };
            is_composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// Generalized gcd: `max{k ≥ 1 : k | r and k^b | s}`.
///
/// Only `r` is factored. For each prime `p | r` the answer carries
/// `p^min(v_p(r), ⌊v_p(s)/b⌋)`, and `v_p(s)` is read off by repeated
/// division, so `s` may be arbitrarily large.
pub fn ggcd(b: Exponent, r: &BigUint, s: &BigUint) -> Result<BigUint> {
    if r.is_zero() || s.is_zero() {
        return Err(Error::NonPositiveCoordinate);
    }
    if let (Some(r), Some(s)) = (r.to_u64(), s.to_u64()) {
        return Ok(BigUint::from(ggcd_u64(b, r, s)));
    }
    let b = b.get();
    let mut k = BigUint::one();
    for (p, e_r) in factorize(r)?.factors {
        // need only ⌊v_p(s)/b⌋ up to e_r
        let cap = e_r.saturating_mul(b);
        let e_s = valuation_capped(s, &p, cap);
        let e = e_r.min(e_s / b);
        if e > 0 {
            k *= p.pow(e);
        }
    }
    Ok(k)
}

/// [`ggcd`] on machine words. Panics if `r` or `s` is zero.
pub fn ggcd_u64(b: Exponent, r: u64, s: u64) -> u64 {
    assert!(r > 0 && s > 0, "ggcd is defined on positive integers");
    let b = b.get();
    let mut k = 1u64;
    for (p, e_r) in factorize_u64(r) {
        let e_s = valuation_capped_u64(s, p, e_r.saturating_mul(b));
        let e = e_r.min(e_s / b);
        // p^e divides r, so this cannot overflow
        k *= p.pow(e);
    }
    k
}

/// [`ggcd_u64`] given the factorization of `r` up front. Used by grid
/// counters that factor each abscissa once per column.
pub fn ggcd_with_factors(b: Exponent, r_factors: &[(u64, u32)], s: u64) -> u64 {
    let b = b.get();
    let mut k = 1u64;
    for &(p, e_r) in r_factors {
        let e_s = valuation_capped_u64(s, p, e_r.saturating_mul(b));
        k *= p.pow(e_r.min(e_s / b));
    }
    k
}
