//! Plain PBM and SVG renderings of a visibility grid.
//!
//! Both formats put `s = N` at the top so the picture reads like the first
//! quadrant.

use std::fmt::Write as _;
use std::str::FromStr;

use lattice_sight_core::{Exponent, VisibilityGrid};

use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Pbm,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, AppError> {
        match s {
            "pbm" => Ok(RenderFormat::Pbm),
            "svg" => Ok(RenderFormat::Svg),
            other => Err(AppError::Format(format!("unknown render format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: RenderFormat,
    pub n: u64,
    pub b: Exponent,
    /// Draw visible points instead of invisible ones.
    pub invert: bool,
}

pub fn render_grid(grid: &VisibilityGrid, spec: &RenderSpec) -> Result<Vec<u8>, AppError> {
    if spec.n == 0 {
        return Err(lattice_sight_core::Error::InvalidArgument(
            "render size must be at least 1".into(),
        )
        .into());
    }
    if grid.width() != spec.n || grid.height() != spec.n || grid.b() != spec.b {
        return Err(lattice_sight_core::Error::DimensionMismatch(format!(
            "grid is {}×{} for b = {}, render asks for {}×{} for b = {}",
            grid.width(),
            grid.height(),
            grid.b(),
            spec.n,
            spec.n,
            spec.b
        ))
        .into());
    }
    let text = match spec.format {
        RenderFormat::Pbm => pbm(grid, spec.invert),
        RenderFormat::Svg => svg(grid, spec.invert),
    };
    Ok(text.into_bytes())
}

fn pbm(grid: &VisibilityGrid, invert: bool) -> String {
    let (w, h) = (grid.width(), grid.height());
    let mut out = String::with_capacity((2 * w * h + 32) as usize);
    let _ = writeln!(out, "P1\n{w} {h}");
    for s in (1..=h).rev() {
        for r in 1..=w {
            if r > 1 {
                out.push(' ');
            }
            out.push(if grid.is_invisible(r, s) != invert {
                '1'
            } else {
                '0'
            });
        }
        out.push('\n');
    }
    out
}

fn svg(grid: &VisibilityGrid, invert: bool) -> String {
    let (w, h) = (grid.width(), grid.height());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w * 8,
        h * 8
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    out.push_str("<g fill=\"black\">\n");
    for s in (1..=h).rev() {
        for r in 1..=w {
            if grid.is_invisible(r, s) != invert {
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="1" height="1"/>"#,
                    r - 1,
                    h - s
                );
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Reads a plain PBM back into a grid for exponent `b`. Comments (`#` to end
/// of line) and arbitrary whitespace are accepted.
pub fn parse_pbm(text: &str, b: Exponent, invert: bool) -> Result<VisibilityGrid, AppError> {
    let mut tokens = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("P1") {
        return Err(AppError::Format(
            "not a plain PBM (missing P1 magic)".into(),
        ));
    }
    let mut dim = || -> Result<u64, AppError> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| AppError::Format("bad PBM dimensions".into()))
    };
    let (w, h) = (dim()?, dim()?);
    let bits: Vec<bool> = tokens
        .flat_map(str::chars)
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(AppError::Format(format!("unexpected PBM pixel `{other}`"))),
        })
        .collect::<Result<_, _>>()?;
    if bits.len() as u128 != w as u128 * h as u128 {
        return Err(AppError::Format(format!(
            "expected {} PBM pixels, found {}",
            w * h,
            bits.len()
        )));
    }
    // file rows run top (s = h) to bottom; grid cells run s = 1 upward
    let mut cells = Vec::with_capacity(bits.len());
    for s in 1..=h {
        let row = &bits[((h - s) * w) as usize..][..w as usize];
        cells.extend(row.iter().map(|&bit| bit != invert));
    }
    Ok(VisibilityGrid::from_cells(b, w, h, &cells)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lattice_sight_core::{sieve_grid, SieveConfig};

    fn grid(b: u32, n: u64) -> VisibilityGrid {
        sieve_grid(Exponent::new(b).unwrap(), n, n, &SieveConfig::default()).unwrap()
    }

    fn spec(format: RenderFormat, b: u32, n: u64) -> RenderSpec {
        RenderSpec {
            format,
            n,
            b: Exponent::new(b).unwrap(),
            invert: false,
        }
    }

    #[test]
    fn two_by_two_pbm() {
        let out = render_grid(&grid(1, 2), &spec(RenderFormat::Pbm, 1, 2)).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "P1\n2 2\n0 1\n0 0\n");
    }

    #[test]
    fn one_by_one_pbm() {
        let out = render_grid(&grid(1, 1), &spec(RenderFormat::Pbm, 1, 1)).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "P1\n1 1\n0\n");
    }

    #[test]
    fn inverted_pbm() {
        let mut s = spec(RenderFormat::Pbm, 1, 2);
        s.invert = true;
        let out = render_grid(&grid(1, 2), &s).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "P1\n2 2\n1 0\n1 1\n");
        let back = parse_pbm("P1\n2 2\n1 0\n1 1\n", s.b, true).unwrap();
        assert_eq!(back, grid(1, 2));
    }

    #[test]
    fn svg_squares() {
        let out =
            String::from_utf8(render_grid(&grid(1, 2), &spec(RenderFormat::Svg, 1, 2)).unwrap())
                .unwrap();
        assert_eq!(out.matches(r#"width="1" height="1""#).count(), 1);
        assert!(out.contains(r#"<rect x="1" y="0" width="1" height="1"/>"#));
        let out =
            String::from_utf8(render_grid(&grid(2, 50), &spec(RenderFormat::Svg, 2, 50)).unwrap())
                .unwrap();
        assert_eq!(out.matches(r#"width="1" height="1""#).count(), 399);
    }

    #[test]
    fn mismatched_spec() {
        assert!(render_grid(&grid(1, 3), &spec(RenderFormat::Pbm, 1, 4)).is_err());
        assert!(render_grid(&grid(1, 3), &spec(RenderFormat::Pbm, 2, 3)).is_err());
    }

    #[test]
    fn pbm_parse_errors() {
        let b = Exponent::ONE;
        assert!(parse_pbm("P4\n1 1\n0\n", b, false).is_err());
        assert!(parse_pbm("P1\n2 2\n0 1 0\n", b, false).is_err());
        assert!(parse_pbm("P1\n1 1\n2\n", b, false).is_err());
        let g = parse_pbm("P1\n# comment\n2 2\n01\n00\n", b, false).unwrap();
        assert_eq!(g, grid(1, 2));
    }
}
