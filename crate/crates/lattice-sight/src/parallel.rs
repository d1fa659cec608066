//! Threaded drivers over the core's band-level primitives. Every function
//! returns exactly what its sequential counterpart returns.

use lattice_sight_core::forest::{BandResult, ForestScan};
use lattice_sight_core::visibility::{count_invisible_brute_band, sieve_rows};
use lattice_sight_core::{
    count_visible_moebius, DensityReport, Exponent, Method, NearestForests, SieveConfig,
    VisibilityGrid,
};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::AppError;

/// A pool with `threads` workers; `None` or 0 lets rayon pick.
pub fn pool(threads: Option<usize>) -> Result<ThreadPool, AppError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| AppError::Format(format!("cannot start worker threads: {e}")))
}

fn bands(first: u64, last: u64, height: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = first;
    while lo <= last {
        let hi = lo.saturating_add(height - 1).min(last);
        out.push((lo, hi));
        lo = hi + 1;
    }
    out
}

pub fn count_invisible_brute(pool: &ThreadPool, b: Exponent, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let height = n.div_ceil(4 * pool.current_num_threads() as u64).max(1);
    pool.install(|| {
        bands(1, n, height)
            .into_par_iter()
            .map(|(lo, hi)| count_invisible_brute_band(b, n, lo..=hi))
            .sum()
    })
}

pub fn sieve_grid(
    pool: &ThreadPool,
    b: Exponent,
    width: u64,
    height: u64,
    config: &SieveConfig,
) -> Result<VisibilityGrid, AppError> {
    let mut grid = VisibilityGrid::blank(b, width, height, config)?;
    let stride = grid.row_stride();
    let rows_per_band = height
        .div_ceil(4 * pool.current_num_threads() as u64)
        .max(1) as usize;
    pool.install(|| {
        grid.words_mut()
            .par_chunks_mut(stride * rows_per_band)
            .enumerate()
            .for_each(|(idx, band)| sieve_rows(b, width, 1 + (idx * rows_per_band) as u64, band));
    });
    Ok(grid)
}

pub fn density_report(
    pool: &ThreadPool,
    b: Exponent,
    n: u64,
    method: Method,
    config: &SieveConfig,
) -> Result<DensityReport, AppError> {
    if n == 0 {
        return Err(lattice_sight_core::Error::InvalidArgument(
            "grid size must be at least 1".into(),
        )
        .into());
    }
    let invisible = match method {
        Method::Brute => count_invisible_brute(pool, b, n),
        Method::Sieve => sieve_grid(pool, b, n, n, config)?.count_invisible(),
        // already O(n) and sequential
        Method::Moebius => n
            .checked_mul(n)
            .map(|total| total - count_visible_moebius(b, n))
            .ok_or_else(|| {
                lattice_sight_core::Error::InvalidArgument(format!("grid size {n} is too large"))
            })?,
    };
    Ok(DensityReport::from_invisible_count(
        b, n, method, invisible,
    )?)
}

/// Threaded [`lattice_sight_core::find_nearest_forest`]. Rows are scanned in
/// waves of one band per worker; a wave starts only while its first row can
/// still beat the best distance found so far.
pub fn find_nearest_forest(
    pool: &ThreadPool,
    b: Exponent,
    n: usize,
    m: usize,
    r_max: u64,
    s_max: u64,
) -> Result<NearestForests, AppError> {
    let scan = ForestScan::new(b, n, m, r_max, s_max)?;
    let workers = pool.current_num_threads() as u64;
    // small bands keep every worker busy near the cutoff
    let height = scan.band_height().min(s_max.div_ceil(workers * 16)).max(64);
    let all = bands(1, s_max, height);
    let mut result = BandResult::default();
    for wave in all.chunks(workers as usize) {
        let cutoff = result.distance_squared;
        if !ForestScan::rows_can_matter(wave[0].0, cutoff) {
            break;
        }
        let found = pool.install(|| {
            wave.par_iter()
                .map(|&(lo, hi)| scan.scan(lo..=hi, cutoff))
                .reduce(BandResult::default, BandResult::merge)
        });
        result = result.merge(found);
    }
    Ok(scan.finish(result)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(b: u32) -> Exponent {
        Exponent::new(b).unwrap()
    }

    #[test]
    fn bands_cover_range() {
        assert_eq!(bands(1, 10, 4), [(1, 4), (5, 8), (9, 10)]);
        assert_eq!(bands(1, 1, 64), [(1, 1)]);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = SieveConfig::default();
        for threads in [1, 2, 3, 8] {
            let pool = pool(Some(threads)).unwrap();
            for b in 1..=3 {
                assert_eq!(
                    count_invisible_brute(&pool, exp(b), 97),
                    lattice_sight_core::count_invisible_brute(exp(b), 97)
                );
                assert_eq!(
                    sieve_grid(&pool, exp(b), 130, 71, &cfg).unwrap(),
                    lattice_sight_core::sieve_grid(exp(b), 130, 71, &cfg).unwrap()
                );
            }
            let found = find_nearest_forest(&pool, exp(1), 2, 2, 100, 100).unwrap();
            assert_eq!(
                found,
                lattice_sight_core::find_nearest_forest(exp(1), 2, 2, 100, 100).unwrap()
            );
            let found = find_nearest_forest(&pool, exp(2), 2, 1, 300, 3000).unwrap();
            assert_eq!(
                found,
                lattice_sight_core::find_nearest_forest(exp(2), 2, 1, 300, 3000).unwrap()
            );
        }
    }

    #[test]
    fn threaded_reports_match() {
        let cfg = SieveConfig::default();
        let pool = pool(Some(4)).unwrap();
        for method in Method::ALL {
            assert_eq!(
                density_report(&pool, exp(2), 50, method, &cfg).unwrap(),
                lattice_sight_core::density_report(exp(2), 50, method, &cfg).unwrap()
            );
        }
        assert!(density_report(
            &pool,
            exp(2),
            50,
            Method::Sieve,
            &SieveConfig { max_cells: 10 }
        )
        .is_err());
    }
}
