//! Truth-table text format: line 1 is `n p`, then `2^n` values in index
//! order (bit 0 of the index is coordinate 1). Blank lines and lines
//! starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::cube::{BiasedCube, CubeFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn parse_truth_table<T: Scalar>(text: &str, cap: usize) -> Result<CubeFunction<T>> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty truth table".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
    let p: f64 = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
    let cube = BiasedCube::with_cap(n, T::lit(p), cap)?;
    let values = lines
        .enumerate()
        .map(|(k, l)| {
            l.parse::<f64>()
                .map(T::lit)
                .map_err(|_| Error::Parse(format!("value {k}: `{l}` is not a number")))
        })
        .collect::<Result<Vec<T>>>()?;
    CubeFunction::new(cube, values)
}

pub fn format_truth_table<T: Scalar>(f: &CubeFunction<T>) -> String {
    let mut s = format!("{} {}\n", f.n(), f.cube().p());
    for v in f.values() {
        let _ = writeln!(s, "{v}");
    }
    s
}

pub fn read_truth_table<T: Scalar>(path: &Path, cap: usize) -> Result<CubeFunction<T>> {
    parse_truth_table(&std::fs::read_to_string(path)?, cap)
}

pub fn write_truth_table<T: Scalar>(path: &Path, f: &CubeFunction<T>) -> Result<()> {
    std::fs::write(path, format_truth_table(f))?;
    Ok(())
}
