//! Exhaustive search for the forest nearest the origin.
//!
//! Rows are sieved into bitmaps (bit `r-1` of row `s` is set when `(r, s)`
//! is invisible). An `n`-wide AND along each row and an `m`-tall AND across
//! rows leave exactly the anchors whose whole block is invisible. Anchors are
//! ranked by `r² + s²`, then `s`, then `r`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use super::Forest;
use crate::arith::Exponent;
use crate::visibility::{sieve_rows, Point};
use crate::{Error, Result};

/// Target size of one band's row buffer, in words.
const BAND_WORDS: usize = 1 << 20;

/// Largest coordinate the search accepts; keeps `r² + s²` inside `u128`
/// with room to spare.
const MAX_COORDINATE: u64 = 1 << 62;

/// A configured search over anchors `[1, r_max] × [1, s_max]`.
#[derive(Debug, Clone)]
pub struct ForestScan {
    b: Exponent,
    n: usize,
    m: usize,
    r_max: u64,
    s_max: u64,
    // bits per sieved row: the anchor range plus the forest's overhang
    width: u64,
    stride: usize,
}

/// Best anchors found in some range of rows.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BandResult {
    /// `r² + s²` of the anchors, if any were found.
    pub distance_squared: Option<u128>,
    /// All anchors at that distance, sorted by `(s, r)`.
    pub anchors: Vec<(u64, u64)>,
}

impl BandResult {
    fn offer(&mut self, r: u64, s: u64) {
        let d = dist2(r, s);
        match self.distance_squared {
            Some(best) if d > best => {}
            Some(best) if d == best => self.anchors.push((r, s)),
            _ => {
                self.distance_squared = Some(d);
                self.anchors.clear();
                self.anchors.push((r, s));
            }
        }
    }

    /// Combines results from disjoint row ranges. The outcome does not depend
    /// on how the rows were split.
    pub fn merge(mut self, other: BandResult) -> BandResult {
        match (self.distance_squared, other.distance_squared) {
            (_, None) => {}
            (None, Some(_)) => return other,
            (Some(a), Some(b)) if b < a => return other,
            (Some(a), Some(b)) if b == a => self.anchors.extend(other.anchors),
            _ => {}
        }
        self.anchors.sort_unstable_by_key(|&(r, s)| (s, r));
        self.anchors.dedup();
        self
    }
}

fn dist2(r: u64, s: u64) -> u128 {
    r as u128 * r as u128 + s as u128 * s as u128
}

impl ForestScan {
    pub fn new(b: Exponent, n: usize, m: usize, r_max: u64, s_max: u64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "forest dimensions must be at least 1".into(),
            ));
        }
        if r_max < n as u64 || s_max < m as u64 {
            return Err(Error::InvalidArgument(alloc::format!(
                "bounds {r_max}×{s_max} are smaller than the {n}×{m} forest"
            )));
        }
        if r_max > MAX_COORDINATE || s_max > MAX_COORDINATE {
            return Err(Error::InvalidArgument("search bounds are too large".into()));
        }
        let width = r_max + n as u64 - 1;
        Ok(ForestScan {
            b,
            n,
            m,
            r_max,
            s_max,
            width,
            stride: width.div_ceil(64) as usize,
        })
    }

    pub fn s_max(&self) -> u64 {
        self.s_max
    }

    /// Rows per band so one band's buffer stays near [`BAND_WORDS`].
    pub fn band_height(&self) -> u64 {
        (BAND_WORDS / self.stride).max(1) as u64
    }

    /// Whether rows from `s` upward can still hold an anchor at distance
    /// `≤ cutoff`.
    pub fn rows_can_matter(s: u64, cutoff: Option<u128>) -> bool {
        cutoff.is_none_or(|c| (s as u128) * (s as u128) <= c)
    }

    /// Scans anchors with `s ∈ rows` (clamped to `s_max`), keeping only those
    /// at distance `≤ cutoff` when a cutoff is given.
    pub fn scan(&self, rows: RangeInclusive<u64>, cutoff: Option<u128>) -> BandResult {
        let lo = (*rows.start()).max(1);
        let hi = (*rows.end()).min(self.s_max);
        let mut result = BandResult::default();
        if lo > hi || !Self::rows_can_matter(lo, cutoff) {
            return result;
        }
        let m = self.m as u64;
        let stride = self.stride;
        let sieved = (hi - lo + m) as usize;
        let mut buffer = vec![0u64; sieved * stride];
        sieve_rows(self.b, self.width, lo, &mut buffer);

        // horizontal runs: bit k survives iff bits k..k+n-1 were all set
        let mut scratch = vec![0u64; stride];
        for row in buffer.chunks_mut(stride) {
            scratch.copy_from_slice(row);
            for shift in 1..self.n {
                and_shifted(row, &scratch, shift);
            }
        }

        let mut anchors = vec![0u64; stride];
        let mut best = cutoff;
        for s in lo..=hi {
            if !Self::rows_can_matter(s, best) {
                break;
            }
            let k = (s - lo) as usize;
            anchors.copy_from_slice(&buffer[k * stride..][..stride]);
            for j in 1..self.m {
                let above = &buffer[(k + j) * stride..][..stride];
                anchors.iter_mut().zip(above).for_each(|(a, b)| *a &= b);
            }
            for (w, &word) in anchors.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let r = (w * 64) as u64 + bits.trailing_zeros() as u64 + 1;
                    bits &= bits - 1;
                    if r > self.r_max {
                        break;
                    }
                    let d = dist2(r, s);
                    if best.is_some_and(|c| d > c) {
                        // larger r in this row is only farther
                        break;
                    }
                    result.offer(r, s);
                    best = result.distance_squared;
                }
            }
        }
        result.anchors.sort_unstable_by_key(|&(r, s)| (s, r));
        result
    }

    pub fn finish(&self, result: BandResult) -> Result<NearestForests> {
        let distance_squared = result.distance_squared.ok_or(Error::NoForestFound)?;
        Ok(NearestForests {
            b: self.b,
            n: self.n,
            m: self.m,
            distance_squared,
            anchors: result.anchors,
        })
    }
}

// dst[k] &= src[k + shift] across word boundaries
fn and_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let words = shift / 64;
    let bits = shift % 64;
    for (k, out) in dst.iter_mut().enumerate() {
        let lo = src.get(k + words).copied().unwrap_or(0);
        let hi = src.get(k + words + 1).copied().unwrap_or(0);
        let shifted = if bits == 0 {
            lo
        } else {
            (lo >> bits) | (hi << (64 - bits))
        };
        *out &= shifted;
    }
}

/// Every anchor at the minimal distance, sorted by `(s, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestForests {
    pub b: Exponent,
    pub n: usize,
    pub m: usize,
    pub distance_squared: u128,
    pub anchors: Vec<(u64, u64)>,
}

impl NearestForests {
    /// The preferred anchor: smallest `s` among the ties, then smallest `r`.
    pub fn best(&self) -> Forest {
        self.forests().swap_remove(0)
    }

    pub fn forests(&self) -> Vec<Forest> {
        self.anchors
            .iter()
            .map(|&(r, s)| {
                Forest::at(
                    self.b,
                    Point::new(r, s).expect("anchors are positive"),
                    self.n,
                    self.m,
                )
                .expect("valid dimensions")
            })
            .collect()
    }

    pub fn contains(&self, r: u64, s: u64) -> bool {
        self.anchors.contains(&(r, s))
    }
}

/// Nearest `n`-wide, `m`-tall b-invisible forest with anchor in
/// `[1, r_max] × [1, s_max]`, with all ties.
pub fn find_nearest_forest(
    b: Exponent,
    n: usize,
    m: usize,
    r_max: u64,
    s_max: u64,
) -> Result<NearestForests> {
    let scan = ForestScan::new(b, n, m, r_max, s_max)?;
    let band = scan.band_height();
    let mut result = BandResult::default();
    let mut lo = 1u64;
    while lo <= s_max && ForestScan::rows_can_matter(lo, result.distance_squared) {
        let hi = lo.saturating_add(band - 1).min(s_max);
        let found = scan.scan(lo..=hi, result.distance_squared);
        result = result.merge(found);
        lo = hi + 1;
    }
    scan.finish(result)
}
