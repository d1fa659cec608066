//! Text encodings: JSON and CSV records, and the prime-matrix file.
//!
//! Unbounded integers (coordinates, moduli, witnesses) are written as
//! decimal strings so that no consumer rounds them through a double.

use std::fs;
use std::path::Path;

use lattice_sight_core::forest::Witness;
use lattice_sight_core::{
    DensityReport, Factorization, Forest, NearestForests, PrimeMatrix, WitnessGrid, ZetaValue,
};
use serde::Serialize;

use crate::AppError;

/// Field names and order are part of the output contract.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRecord {
    pub b: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub invisible_count: u64,
    pub visible_count: u64,
    pub total: u64,
    pub observed_invisible_proportion: f64,
    pub predicted_visible_proportion: f64,
    pub predicted_invisible_proportion: f64,
    pub method: &'static str,
}

impl From<&DensityReport> for DensityRecord {
    fn from(r: &DensityReport) -> Self {
        DensityRecord {
            b: r.b.get(),
            n: r.n,
            invisible_count: r.invisible_count,
            visible_count: r.visible_count,
            total: r.total,
            observed_invisible_proportion: r.observed_invisible_proportion,
            predicted_visible_proportion: r.predicted_visible_proportion,
            predicted_invisible_proportion: r.predicted_invisible_proportion,
            method: r.method.as_str(),
        }
    }
}

pub fn density_csv(reports: &[DensityReport]) -> Result<String, AppError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for report in reports {
        writer.serialize(DensityRecord::from(report))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| AppError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaRecord {
    pub s: u32,
    pub value: f64,
    pub abs_error_bound: f64,
}

impl From<&ZetaValue> for ZetaRecord {
    fn from(z: &ZetaValue) -> Self {
        ZetaRecord {
            s: z.s,
            value: z.value,
            abs_error_bound: z.abs_error_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    pub r: String,
    pub s: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestRecord {
    pub b: u32,
    pub anchor: PointRecord,
    pub n: usize,
    pub m: usize,
    pub r_modulus: Option<String>,
    pub s_modulus: Option<String>,
}

impl From<&Forest> for ForestRecord {
    fn from(f: &Forest) -> Self {
        ForestRecord {
            b: f.b.get(),
            anchor: PointRecord {
                r: f.anchor.r().to_string(),
                s: f.anchor.s().to_string(),
            },
            n: f.n,
            m: f.m,
            r_modulus: f.r_modulus.as_ref().map(ToString::to_string),
            s_modulus: f.s_modulus.as_ref().map(ToString::to_string),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimePowerRecord {
    pub prime: String,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub i: usize,
    pub j: usize,
    pub value: String,
    pub factorization: Vec<PrimePowerRecord>,
}

fn factorization_record(f: &Factorization) -> Vec<PrimePowerRecord> {
    f.factors()
        .iter()
        .map(|(p, e)| PrimePowerRecord {
            prime: p.to_string(),
            exponent: *e,
        })
        .collect()
}

/// `cells[j][i]`, bottom row (`j = 0`) first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessGridRecord {
    pub n: usize,
    pub m: usize,
    pub cells: Vec<Vec<WitnessRecord>>,
}

impl From<&WitnessGrid> for WitnessGridRecord {
    fn from(w: &WitnessGrid) -> Self {
        let cells = w
            .rows()
            .enumerate()
            .map(|(j, row)| {
                row.iter()
                    .enumerate()
                    .map(|(i, Witness { value, factors })| WitnessRecord {
                        i,
                        j,
                        value: value.to_string(),
                        factorization: factorization_record(factors),
                    })
                    .collect()
            })
            .collect();
        WitnessGridRecord {
            n: w.n(),
            m: w.m(),
            cells,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionRecord {
    /// Top row first, as the matrix is written down.
    pub prime_matrix: Vec<Vec<u64>>,
    pub forest: ForestRecord,
    pub witnesses: WitnessGridRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub forest: ForestRecord,
    pub witnesses: WitnessGridRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchRecord {
    pub b: u32,
    pub n: usize,
    pub m: usize,
    pub r_max: u64,
    pub s_max: u64,
    pub distance_squared: String,
    pub best: ForestRecord,
    /// Every tied anchor, sorted by `s` then `r`.
    pub anchors: Vec<PointRecord>,
}

impl SearchRecord {
    pub fn new(found: &NearestForests, r_max: u64, s_max: u64) -> Self {
        SearchRecord {
            b: found.b.get(),
            n: found.n,
            m: found.m,
            r_max,
            s_max,
            distance_squared: found.distance_squared.to_string(),
            best: ForestRecord::from(&found.best()),
            anchors: found
                .anchors
                .iter()
                .map(|(r, s)| PointRecord {
                    r: r.to_string(),
                    s: s.to_string(),
                })
                .collect(),
        }
    }
}

pub fn anchors_csv(found: &NearestForests) -> Result<String, AppError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["r", "s", "distance_squared"])?;
    for (r, s) in &found.anchors {
        writer.write_record([
            r.to_string(),
            s.to_string(),
            found.distance_squared.to_string(),
        ])?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| AppError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Parses a prime matrix: one line per row, top row first, entries separated
/// by whitespace. Blank lines and `#` comments are skipped.
pub fn parse_prime_matrix(text: &str) -> Result<PrimeMatrix, AppError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u64>().map_err(|_| {
                    AppError::Format(format!(
                        "line {}: `{tok}` is not a positive integer",
                        lineno + 1
                    ))
                })
            })
            .collect::<Result<Vec<u64>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(AppError::Format("prime matrix file has no rows".into()));
    }
    Ok(PrimeMatrix::from_top_rows(&rows)?)
}

pub fn read_prime_matrix(path: &Path) -> Result<PrimeMatrix, AppError> {
    parse_prime_matrix(&fs::read_to_string(path)?)
}

/// Inverse of [`parse_prime_matrix`].
pub fn format_prime_matrix(matrix: &PrimeMatrix) -> String {
    matrix
        .top_rows()
        .iter()
        .map(|row| row.iter().map(u64::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}
