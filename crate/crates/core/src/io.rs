//! Text field files.
//!
//! ```text
//! NLSF1 d=<d> n=<n> L=<L>
//! <re> <im>        # n^d lines, row-major, 17 significant digits
//! ```

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::Grid;

pub const FIELD_MAGIC: &str = "NLSF1";

pub fn write_field<W: Write>(u: &ComplexField, mut out: W) -> Result<()> {
    let g = u.grid();
    writeln!(out, "{FIELD_MAGIC} d={} n={} L={:?}", g.dim(), g.n(), g.length())?;
    for z in u.values() {
        writeln!(out, "{:.16e} {:.16e}", z.re, z.im)?;
    }
    Ok(())
}

pub fn read_field<R: BufRead>(input: R) -> Result<ComplexField> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty file".into()))??;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(FIELD_MAGIC) {
        return Err(Error::Format(format!("missing {FIELD_MAGIC} header")));
    }
    let (mut d, mut n, mut l) = (None, None, None);
    for part in parts {
        let (key, value) = part.split_once('=').ok_or_else(|| Error::Format(format!("bad header token {part:?}")))?;
        match key {
            "d" => d = Some(parse_num::<usize>(value)?),
            "n" => n = Some(parse_num::<usize>(value)?),
            "L" => l = Some(parse_num::<f64>(value)?),
            other => return Err(Error::Format(format!("unknown header key {other:?}"))),
        }
    }
    let (d, n, l) = match (d, n, l) {
        (Some(d), Some(n), Some(l)) => (d, n, l),
        _ => return Err(Error::Format("header needs d, n and L".into())),
    };
    let grid = Grid::new(d, n, l)?;

    let mut values = Vec::with_capacity(grid.len());
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (re, im) = match (it.next(), it.next(), it.next()) {
            (Some(re), Some(im), None) => (parse_num::<f64>(re)?, parse_num::<f64>(im)?),
            _ => return Err(Error::Format(format!("line {}: expected `re im`", lineno + 2))),
        };
        values.push(Complex64::new(re, im));
    }
    ComplexField::new(grid, values).map_err(|e| Error::Format(e.to_string()))
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Format(format!("cannot parse {s:?}")))
}
