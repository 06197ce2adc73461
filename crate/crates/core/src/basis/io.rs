//! Coefficient CSV files: header `n,l,m,re,im`, one row per stored mode.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{ModeIndex, SpectralState};
use crate::{Error, Result};

const HEADER: &str = "n,l,m,re,im";

/// Writes the nonzero amplitudes of `state`. Values use 17 significant
/// digits, so reading the file back reproduces every bit.
pub fn write_state_csv<W: Write>(state: &SpectralState, mut out: W) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    for (mode, z) in state.iter() {
        writeln!(out, "{},{},{},{:.16e},{:.16e}", mode.n, mode.l, mode.m, z.re, z.im)?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a coefficient file into a state of the given truncation.
///
/// Malformed lines produce [`Error::Parse`] with a 1-based line number. Rows
/// that parse but violate `|m| <= l`, lie beyond the truncation, or repeat a
/// mode are collected and reported together as [`Error::InvariantViolation`].
pub fn read_state_csv<R: BufRead>(input: R, truncation: u32) -> Result<SpectralState> {
    let mut state = SpectralState::new(truncation)?;
    let mut bad_rows = Vec::new();
    let mut reasons = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut saw_header = false;
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line.replace(' ', "") != HEADER {
                return Err(Error::Parse { line: lineno, message: format!("expected header `{HEADER}`") });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::Parse { line: lineno, message: format!("expected 5 fields, found {}", fields.len()) });
        }
        let parse_err = |what: &str, s: &str| Error::Parse { line: lineno, message: format!("invalid {what} `{s}`") };
        let n: u32 = fields[0].parse().map_err(|_| parse_err("n", fields[0]))?;
        let l: u32 = fields[1].parse().map_err(|_| parse_err("l", fields[1]))?;
        let m: i32 = fields[2].parse().map_err(|_| parse_err("m", fields[2]))?;
        let re: f64 = fields[3].parse().map_err(|_| parse_err("re", fields[3]))?;
        let im: f64 = fields[4].parse().map_err(|_| parse_err("im", fields[4]))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse { line: lineno, message: "non-finite amplitude".into() });
        }
        if m.unsigned_abs() > l {
            bad_rows.push(lineno);
            reasons.push(format!("line {lineno}: |m| > l in ({n},{l},{m})"));
            continue;
        }
        let mode = ModeIndex { n, l, m };
        if mode.shell() > truncation {
            bad_rows.push(lineno);
            reasons.push(format!("line {lineno}: shell {} exceeds truncation {truncation}", mode.shell()));
            continue;
        }
        if !seen.insert(mode) {
            bad_rows.push(lineno);
            reasons.push(format!("line {lineno}: duplicate mode {mode}"));
            continue;
        }
        state.set(mode, Complex64::new(re, im))?;
    }
    if !saw_header {
        return Err(Error::Parse { line: 1, message: format!("missing header `{HEADER}`") });
    }
    if !bad_rows.is_empty() {
        return Err(Error::InvariantViolation { rows: bad_rows, message: reasons.join("; ") });
    }
    Ok(state)
}
