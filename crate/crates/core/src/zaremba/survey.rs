use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;

use super::{find_witness, OracleQuery, Outcome, QuotientBound, TailConvention};
use crate::error::{Error, Result};
use crate::experiments::{fit_exponent, FitError};
use crate::pool;

/// Side condition `b ≡ residue (mod modulus)` on the sought numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub modulus: u64,
    pub residue: i64,
}

impl Congruence {
    pub fn new(modulus: u64, residue: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Config("congruence modulus must be positive".into()));
        }
        if modulus > 1 && residue.unsigned_abs().gcd(&modulus) != 1 {
            return Err(Error::Config(format!(
                "congruence residue {residue} is not coprime to {modulus}"
            )));
        }
        Ok(Congruence { modulus, residue })
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.modulus, self.residue)
    }
}

impl FromStr for Congruence {
    type Err = Error;

    /// Parses `d:beta`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let (d, beta) = s.split_once(':').ok_or_else(bad)?;
        let d = d.trim().parse().map_err(|_| bad())?;
        let beta = beta.trim().parse().map_err(|_| bad())?;
        Congruence::new(d, beta)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub tail: TailConvention,
    pub workers: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tail: TailConvention::Strict,
            workers: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub q: u64,
    pub is_exceptional: bool,
    pub candidates_scanned: u64,
}

/// Exceptional denominators in `[2, n]` for one bound and optional congruence.
#[derive(Clone, Debug)]
pub struct ExceptionalSetReport {
    pub n: u64,
    pub bound: QuotientBound,
    pub congruence: Option<Congruence>,
    /// One row per `q` in `2..=n`, ascending.
    pub rows: Vec<ScanRow>,
    /// Ascending.
    pub members: Vec<u64>,
    /// Slope of `log |E ∩ [1, m]|` against `log m`; reporting only.
    pub density_exponent: std::result::Result<f64, FitError>,
}

impl ExceptionalSetReport {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// Scans every `q` in `2..=n` with an uncapped witness search.
///
/// A `q` is exceptional only when its whole search space was covered.
pub fn scan_exceptional(
    n: u64,
    bound: QuotientBound,
    congruence: Option<Congruence>,
    opts: &ScanOptions,
) -> Result<ExceptionalSetReport> {
    if n < 2 {
        return Err(Error::Config(format!("scan range bound must be at least 2, got {n}")));
    }
    let (modulus, residue) = congruence.map_or((1, 0), |c| (c.modulus, c.residue));
    let rows = pool::install(opts.workers, || {
        (2..=n)
            .into_par_iter()
            .map(|q| {
                let query = OracleQuery::new(q.into(), bound, modulus.into(), residue.into())?
                    .with_tail(opts.tail);
                let result = find_witness(&query, u64::MAX);
                Ok(ScanRow {
                    q,
                    is_exceptional: result.outcome == Outcome::Exhausted,
                    candidates_scanned: result.candidates_scanned,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let members: Vec<u64> = rows.iter().filter(|r| r.is_exceptional).map(|r| r.q).collect();
    let density_exponent = fit_exponent(&density_points(&members, n));
    Ok(ExceptionalSetReport {
        n,
        bound,
        congruence,
        rows,
        members,
        density_exponent,
    })
}

/// `(m, |E ∩ [1, m]|)` on a log-spaced grid of 16 points in `[2, n]`.
fn density_points(members: &[u64], n: u64) -> Vec<(u64, u64)> {
    const GRID: i32 = 16;
    let ratio = n as f64 / 2.0;
    let mut grid: Vec<u64> = (0..GRID)
        .map(|i| (2.0 * ratio.powf(f64::from(i) / f64::from(GRID - 1))).round() as u64)
        .map(|m| m.clamp(2, n))
        .collect();
    grid.dedup();
    grid.into_iter()
        .map(|m| (m, members.partition_point(|&e| e <= m) as u64))
        .collect()
}
