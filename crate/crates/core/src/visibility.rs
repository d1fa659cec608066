//! Classification of lattice points and three independent ways of counting
//! the invisible ones in a square grid.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{ggcd, ggcd_u64, moebius_table, primes_up_to, Exponent};
use crate::zeta::predicted_proportions;
use crate::{Error, Result};

/// A lattice point `(r, s)` with both coordinates positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    r: BigUint,
    s: BigUint,
}

impl Point {
    pub fn new(r: impl Into<BigUint>, s: impl Into<BigUint>) -> Result<Self> {
        let (r, s) = (r.into(), s.into());
        if r.is_zero() || s.is_zero() {
            return Err(Error::NonPositiveCoordinate);
        }
        Ok(Point { r, s })
    }

    pub fn r(&self) -> &BigUint {
        &self.r
    }

    pub fn s(&self) -> &BigUint {
        &self.s
    }

    /// The point shifted by `(i, j)`.
    pub fn offset(&self, i: u64, j: u64) -> Point {
        Point {
            r: &self.r + i,
            s: &self.s + j,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.s)
    }
}

pub fn is_b_visible(b: Exponent, p: &Point) -> bool {
    ggcd(b, &p.r, &p.s).expect("points are positive").is_one()
}

/// The coefficient `a = s / r^b` of the unique curve `y = a·x^b` through
/// the origin and `p`, as a reduced fraction `(numerator, denominator)`.
pub fn sight_coefficient(b: Exponent, p: &Point) -> (BigUint, BigUint) {
    let den = p.r.pow(b.get());
    let g = p.s.gcd(&den);
    (&p.s / &g, den / g)
}

/// Number of points in `[1,n]²` with `ggcd_b(r, s) > 1`, evaluated point by
/// point.
pub fn count_invisible_brute(b: Exponent, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    count_invisible_brute_band(b, n, 1..=n)
}

/// Brute-force count restricted to the rows `s ∈ rows` of the width-`n`
/// grid. Bands partition the full count exactly.
pub fn count_invisible_brute_band(b: Exponent, n: u64, rows: RangeInclusive<u64>) -> u64 {
    let mut count = 0;
    for s in rows {
        for r in 1..=n {
            if ggcd_u64(b, r, s) > 1 {
                count += 1;
            }
        }
    }
    count
}

/// Number of b-visible points in `[1,n]²` by inclusion–exclusion:
/// `Σ_k μ(k)·⌊n/k⌋·⌊n/k^b⌋`.
pub fn count_visible_moebius(b: Exponent, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    // terms vanish once k^b > n
    let k_max = integer_root(n, b.get());
    let mu = moebius_table(k_max as usize);
    let mut total: i128 = 0;
    for k in 1..=k_max {
        let m = mu[k as usize];
        if m == 0 {
            continue;
        }
        let kb = k.pow(b.get());
        total += m as i128 * (n / k) as i128 * (n / kb) as i128;
    }
    u64::try_from(total).expect("visible count is between 0 and n²")
}

/// `⌊n^(1/b)⌋`.
fn integer_root(n: u64, b: u32) -> u64 {
    if b == 1 {
        return n;
    }
    let mut lo = 1u64;
    let mut hi = 1u64 << (64 / b + 1).min(63);
    // invariant: lo^b ≤ n < hi^b
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(b) {
            Some(v) if v <= n => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Largest grid, in cells, the sieve will allocate.
    pub max_cells: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { max_cells: 1 << 31 }
    }
}

/// A bitmap over `[1,width]×[1,height]`, one bit per cell, set for
/// invisible points. Rows run `s = 1, 2, …` and each row is padded to a
/// whole number of 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityGrid {
    b: Exponent,
    width: u64,
    height: u64,
    stride: usize,
    words: Vec<u64>,
}

impl VisibilityGrid {
    /// An all-visible grid, subject to the memory cap.
    pub fn blank(b: Exponent, width: u64, height: u64, config: &SieveConfig) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(
                "grid dimensions must be at least 1".to_string(),
            ));
        }
        let cells = width as u128 * height as u128;
        if cells > config.max_cells as u128 {
            return Err(Error::BudgetExceeded {
                cells,
                cap: config.max_cells,
            });
        }
        let stride = width.div_ceil(64) as usize;
        Ok(VisibilityGrid {
            b,
            width,
            height,
            stride,
            words: vec![0; stride * height as usize],
        })
    }

    /// Builds a grid from explicit cells in row-major order, `s = 1` first.
    /// The cells are taken as given; see [`VisibilityGrid::check`].
    pub fn from_cells(b: Exponent, width: u64, height: u64, cells: &[bool]) -> Result<Self> {
        let mut grid = Self::blank(
            b,
            width,
            height,
            &SieveConfig {
                max_cells: u64::MAX,
            },
        )?;
        if cells.len() as u128 != width as u128 * height as u128 {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{} cells for a {width}×{height} grid",
                cells.len()
            )));
        }
        for (idx, &invisible) in cells.iter().enumerate() {
            if invisible {
                let idx = idx as u64;
                grid.set(idx % width + 1, idx / width + 1);
            }
        }
        Ok(grid)
    }

    pub fn b(&self) -> Exponent {
        self.b
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    /// Words per row.
    pub fn row_stride(&self) -> usize {
        self.stride
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Raw row storage, for callers that fill disjoint row bands with
    /// [`sieve_rows`].
    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn is_invisible(&self, r: u64, s: u64) -> bool {
        assert!((1..=self.width).contains(&r) && (1..=self.height).contains(&s));
        let row = (s - 1) as usize * self.stride;
        self.words[row + ((r - 1) / 64) as usize] >> ((r - 1) % 64) & 1 == 1
    }

    fn set(&mut self, r: u64, s: u64) {
        let row = (s - 1) as usize * self.stride;
        self.words[row + ((r - 1) / 64) as usize] |= 1 << ((r - 1) % 64);
    }

    pub fn count_invisible(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Cell-by-cell comparison against [`ggcd_u64`]. Returns the first
    /// disagreeing `(r, s)`.
    pub fn check(&self) -> core::result::Result<(), (u64, u64)> {
        for s in 1..=self.height {
            for r in 1..=self.width {
                if self.is_invisible(r, s) != (ggcd_u64(self.b, r, s) > 1) {
                    return Err((r, s));
                }
            }
        }
        Ok(())
    }
}

/// Sieves the rows `s_first, s_first + 1, …` of a width-`width` grid into
/// `rows`, whose length must be a multiple of the row stride. Marks `(r, s)`
/// whenever some prime `p ≤ width` has `p | r` and `p^b | s`.
pub fn sieve_rows(b: Exponent, width: u64, s_first: u64, rows: &mut [u64]) {
    let stride = width.div_ceil(64) as usize;
    assert!(s_first >= 1 && stride > 0 && rows.len().is_multiple_of(stride));
    let count = (rows.len() / stride) as u64;
    if count == 0 {
        return;
    }
    let s_last = s_first + count - 1;
    for p in primes_up_to(width) {
        let Some(pb) = p.checked_pow(b.get()).filter(|&pb| pb <= s_last) else {
            // p^b only grows with p
            break;
        };
        let mut s = s_first.div_ceil(pb) * pb;
        while s <= s_last {
            let row = &mut rows[(s - s_first) as usize * stride..][..stride];
            let mut r = p;
            while r <= width {
                row[((r - 1) / 64) as usize] |= 1 << ((r - 1) % 64);
                r += p;
            }
            s += pb;
        }
    }
}

/// Sieved visibility grid over `[1,width]×[1,height]`.
pub fn sieve_grid(
    b: Exponent,
    width: u64,
    height: u64,
    config: &SieveConfig,
) -> Result<VisibilityGrid> {
    let mut grid = VisibilityGrid::blank(b, width, height, config)?;
    sieve_rows(b, width, 1, &mut grid.words);
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Sieve,
    Moebius,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Brute, Method::Sieve, Method::Moebius];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Sieve => "sieve",
            Method::Moebius => "moebius",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown counting method `{s}`")))
    }
}

/// Observed and predicted proportions for the `n×n` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub b: Exponent,
    pub n: u64,
    pub invisible_count: u64,
    pub visible_count: u64,
    pub total: u64,
    pub observed_invisible_proportion: f64,
    pub predicted_visible_proportion: f64,
    pub predicted_invisible_proportion: f64,
    pub method: Method,
}

impl DensityReport {
    /// Assembles a report from an invisible count obtained elsewhere, e.g.
    /// by a threaded driver.
    pub fn from_invisible_count(
        b: Exponent,
        n: u64,
        method: Method,
        invisible_count: u64,
    ) -> Result<Self> {
        let total = grid_total(n)?;
        if invisible_count > total {
            return Err(Error::InvalidArgument(alloc::format!(
                "invisible count {invisible_count} exceeds {total} points"
            )));
        }
        let (visible, invisible) = predicted_proportions(b);
        Ok(DensityReport {
            b,
            n,
            invisible_count,
            visible_count: total - invisible_count,
            total,
            observed_invisible_proportion: invisible_count as f64 / total as f64,
            predicted_visible_proportion: visible,
            predicted_invisible_proportion: invisible,
            method,
        })
    }

    pub fn observed_visible_proportion(&self) -> f64 {
        self.visible_count as f64 / self.total as f64
    }
}

fn grid_total(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "grid size must be at least 1".to_string(),
        ));
    }
    n.checked_mul(n)
        .ok_or_else(|| Error::InvalidArgument(alloc::format!("grid size {n} is too large")))
}

pub fn density_report(
    b: Exponent,
    n: u64,
    method: Method,
    config: &SieveConfig,
) -> Result<DensityReport> {
    let total = grid_total(n)?;
    let invisible = match method {
        Method::Brute => count_invisible_brute(b, n),
        Method::Sieve => sieve_grid(b, n, n, config)?.count_invisible(),
        Method::Moebius => total - count_visible_moebius(b, n),
    };
    DensityReport::from_invisible_count(b, n, method, invisible)
}
