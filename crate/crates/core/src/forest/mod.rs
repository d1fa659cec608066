//! Rectangular forests of b-invisible points.
//!
//! A prime matrix with `n` columns and `m` rows assigns a distinct prime
//! `p[i][j]` to every cell of the forest. Solving
//! `r + i ≡ 0 (mod Π_j p[i][j])` and `s + j ≡ 0 (mod (Π_i p[i][j])^b)` puts
//! `p[i][j]` into `ggcd_b(r+i, s+j)` for every cell at once.

mod search;

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{factorize, ggcd, is_prime_u64, primes_up_to, Exponent, Factorization};
use crate::visibility::Point;
use crate::{Error, Result};

pub use search::{find_nearest_forest, BandResult, ForestScan, NearestForests};

/// `n` columns by `m` rows of distinct primes. Row `j = 0` is the bottom
/// row, so `get(i, j)` lines up with the forest cell `(r+i, s+j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeMatrix {
    n: usize,
    m: usize,
    // bottom row first, each row left to right
    entries: Vec<u64>,
}

impl PrimeMatrix {
    /// The first `n·m` primes, filling the bottom row left to right, then the
    /// row above it, and so on.
    pub fn smallest(n: usize, m: usize) -> Result<Self> {
        let count = cell_count(n, m)?;
        let mut limit = 16u64;
        let primes = loop {
            let primes = primes_up_to(limit);
            if primes.len() >= count {
                break primes;
            }
            limit *= 2;
        };
        Self::from_bottom_fill(n, m, &primes[..count])
    }

    /// Explicit primes in fill order: bottom row first, left to right.
    pub fn from_bottom_fill(n: usize, m: usize, primes: &[u64]) -> Result<Self> {
        let count = cell_count(n, m)?;
        if primes.len() != count {
            return Err(Error::WrongPrimeCount {
                expected: count,
                got: primes.len(),
            });
        }
        let mut seen: Vec<u64> = Vec::with_capacity(count);
        for &p in primes {
            if !is_prime_u64(p) {
                return Err(Error::NotPrime(p.into()));
            }
            if seen.contains(&p) {
                return Err(Error::DuplicatePrime(p.into()));
            }
            seen.push(p);
        }
        Ok(PrimeMatrix {
            n,
            m,
            entries: primes.to_vec(),
        })
    }

    /// Rows as displayed, top row first. All rows must have the same length.
    pub fn from_top_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "prime matrix rows have {} and {} entries",
                n,
                bad.len()
            )));
        }
        let fill: Vec<u64> = rows.iter().rev().flatten().copied().collect();
        Self::from_bottom_fill(n, m, &fill)
    }

    pub fn build(n: usize, m: usize, explicit: Option<&[u64]>) -> Result<Self> {
        match explicit {
            Some(primes) => Self::from_bottom_fill(n, m, primes),
            None => Self::smallest(n, m),
        }
    }

    /// Columns (x-extent).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Rows (y-extent).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.n && j < self.m);
        self.entries[j * self.n + i]
    }

    /// Rows top first, the way the matrix is written down.
    pub fn top_rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.n)
            .rev()
            .map(<[u64]>::to_vec)
            .collect()
    }

    /// Column products `C_i = Π_j p[i][j]` and row products raised to the
    /// exponent, `R_j^b = (Π_i p[i][j])^b`.
    pub fn moduli(&self, b: Exponent) -> (Vec<BigUint>, Vec<BigUint>) {
        let columns = (0..self.n)
            .map(|i| (0..self.m).map(|j| BigUint::from(self.get(i, j))).product())
            .collect();
        let rows = (0..self.m)
            .map(|j| {
                let r: BigUint = (0..self.n).map(|i| BigUint::from(self.get(i, j))).product();
                r.pow(b.get())
            })
            .collect();
        (columns, rows)
    }
}

fn cell_count(n: usize, m: usize) -> Result<usize> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(
            "forest dimensions must be at least 1".into(),
        ));
    }
    n.checked_mul(m)
        .ok_or_else(|| Error::InvalidArgument(format!("{n}×{m} forest is too large")))
}

/// Simultaneous congruences `x ≡ residue (mod modulus)` with pairwise
/// coprime moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSystem {
    congruences: Vec<(BigUint, BigUint)>,
}

impl CongruenceSystem {
    pub fn new(congruences: Vec<(BigUint, BigUint)>) -> Result<Self> {
        for (idx, (residue, modulus)) in congruences.iter().enumerate() {
            if modulus.is_zero() {
                return Err(Error::InvalidArgument("modulus must be positive".into()));
            }
            if residue >= modulus {
                return Err(Error::ResidueOutOfRange {
                    residue: residue.clone(),
                    modulus: modulus.clone(),
                });
            }
            for (_, other) in &congruences[..idx] {
                if !modulus.gcd(other).is_one() {
                    return Err(Error::NonCoprimeModuli {
                        first: other.clone(),
                        second: modulus.clone(),
                    });
                }
            }
        }
        Ok(CongruenceSystem { congruences })
    }

    pub fn congruences(&self) -> &[(BigUint, BigUint)] {
        &self.congruences
    }
}

/// The unique `0 ≤ x < M` solving the system, together with `M`, the product
/// of the moduli.
pub fn crt_solve(system: &CongruenceSystem) -> (BigUint, BigUint) {
    let mut x = BigUint::zero();
    let mut modulus = BigUint::one();
    for (residue, m) in &system.congruences {
        if m.is_one() {
            continue;
        }
        // x + modulus·t ≡ residue (mod m)
        let inverse = (&modulus % m)
            .modinv(m)
            .expect("moduli are pairwise coprime");
        let gap = (residue + m - (&x % m)) % m;
        let t = gap * inverse % m;
        x += &modulus * t;
        modulus *= m;
    }
    (x, modulus)
}

/// A claimed `n×m` block of b-invisible points anchored at its
/// minimum-coordinate corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    pub b: Exponent,
    pub anchor: Point,
    pub n: usize,
    pub m: usize,
    /// Period of the anchor's abscissa, for CRT-built forests.
    pub r_modulus: Option<BigUint>,
    /// Period of the anchor's ordinate, for CRT-built forests.
    pub s_modulus: Option<BigUint>,
}

impl Forest {
    /// A forest found or claimed without a CRT construction behind it.
    pub fn at(b: Exponent, anchor: Point, n: usize, m: usize) -> Result<Self> {
        cell_count(n, m)?;
        Ok(Forest {
            b,
            anchor,
            n,
            m,
            r_modulus: None,
            s_modulus: None,
        })
    }
}

/// Solves the column and row congruences of `matrix`. Residue 0 maps to the
/// modulus itself so that the anchor stays in the positive quadrant.
pub fn construct_forest(matrix: &PrimeMatrix, b: Exponent) -> Result<Forest> {
    let (columns, rows) = matrix.moduli(b);
    let shifted = |moduli: Vec<BigUint>| -> Result<CongruenceSystem> {
        let congruences = moduli
            .into_iter()
            .enumerate()
            .map(|(offset, modulus)| {
                // x + offset ≡ 0
                let residue = (&modulus - (BigUint::from(offset) % &modulus)) % &modulus;
                (residue, modulus)
            })
            .collect();
        CongruenceSystem::new(congruences)
    };
    let (r, r_modulus) = crt_solve(&shifted(columns)?);
    let (s, s_modulus) = crt_solve(&shifted(rows)?);
    let positive = |x: BigUint, modulus: &BigUint| if x.is_zero() { modulus.clone() } else { x };
    Ok(Forest {
        b,
        anchor: Point::new(positive(r, &r_modulus), positive(s, &s_modulus))?,
        n: matrix.n(),
        m: matrix.m(),
        r_modulus: Some(r_modulus),
        s_modulus: Some(s_modulus),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub value: BigUint,
    pub factors: Factorization,
}

/// `ggcd_b(r+i, s+j)` for every cell of a verified forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessGrid {
    n: usize,
    m: usize,
    // bottom row first
    cells: Vec<Witness>,
}

impl WitnessGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Witness {
        assert!(i < self.n && j < self.m);
        &self.cells[j * self.n + i]
    }

    /// Rows bottom first (`j = 0, 1, …`).
    pub fn rows(&self) -> impl Iterator<Item = &[Witness]> {
        self.cells.chunks(self.n)
    }

    pub fn values(&self) -> Vec<Vec<BigUint>> {
        self.rows()
            .map(|row| row.iter().map(|w| w.value.clone()).collect())
            .collect()
    }
}

/// Computes the witness of every cell, bottom row first, failing on the
/// first visible one.
pub fn verify_forest(forest: &Forest) -> Result<WitnessGrid> {
    let mut cells = Vec::with_capacity(cell_count(forest.n, forest.m)?);
    for j in 0..forest.m {
        for i in 0..forest.n {
            let p = forest.anchor.offset(i as u64, j as u64);
            let value = ggcd(forest.b, p.r(), p.s())?;
            if value.is_one() {
                return Err(Error::NotAForest {
                    i,
                    j,
                    r: p.r().clone(),
                    s: p.s().clone(),
                });
            }
            let factors = factorize(&value)?;
            cells.push(Witness { value, factors });
        }
    }
    Ok(WitnessGrid {
        n: forest.n,
        m: forest.m,
        cells,
    })
}
