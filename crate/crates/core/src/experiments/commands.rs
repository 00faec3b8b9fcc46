use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::json;

use super::cost_survey::{cost_survey, CostSurvey, Sampling};
use super::report::{decomposition_json, write_density_csv, write_scan_csv};
use crate::cf::{continuant_product, expand, Fraction};
use crate::decompose::{decompose, verify, DecomposeConfig};
use crate::error::{Error, Result};
use crate::zaremba::{scan_exceptional, Congruence, ExceptionalSetReport, QuotientBound, ScanOptions};

/// Largest `N` accepted by the exceptional-set scan.
pub const ZAREMBA_CAP: u64 = 1_000_000;
/// Largest denominator accepted by the cost survey.
pub const SURVEY_CAP: u64 = 100_000;

/// Prints the canonical expansion, its cost, `log2(q)` and the continuant matrix.
pub fn cmd_expand<W: Write>(input: &str, out: &mut W) -> Result<()> {
    let x: Fraction = input.parse()?;
    let e = expand(&x)?;
    let q = x.denom_unsigned();
    writeln!(out, "{e} cost={}", e.sum())?;
    writeln!(out, "log2(q)={:.6}", crate::decompose::ln_big(&q) / std::f64::consts::LN_2)?;
    match continuant_product(&e) {
        Ok(m) => writeln!(out, "continuant={m}")?,
        Err(_) => writeln!(out, "continuant=none")?,
    }
    Ok(())
}

/// Where the scan CSVs go.
#[derive(Clone, Debug, Default)]
pub struct ZarembaOutput {
    /// Per-q CSV path; the summary goes next to it with a `.density.csv` suffix.
    /// Both go to the writer when absent.
    pub path: Option<PathBuf>,
}

fn density_path(path: &Path) -> PathBuf {
    let stem = path.with_extension("");
    PathBuf::from(format!("{}.density.csv", stem.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn cmd_zaremba<W: Write>(
    n: u64,
    bound: QuotientBound,
    congruence: Option<Congruence>,
    opts: &ScanOptions,
    output: &ZarembaOutput,
    out: &mut W,
) -> Result<ExceptionalSetReport> {
    if n > ZAREMBA_CAP {
        return Err(Error::Config(format!("N = {n} exceeds the scan cap {ZAREMBA_CAP}")));
    }
    let report = scan_exceptional(n, bound, congruence, opts)?;
    let reports = std::slice::from_ref(&report);
    match &output.path {
        Some(path) => {
            let mut rows = create(path)?;
            write_scan_csv(&report, opts.tail, &mut rows)?;
            rows.flush()?;
            let summary_path = density_path(path);
            let mut summary = create(&summary_path)?;
            write_density_csv(reports, &mut summary)?;
            summary.flush()?;
            writeln!(
                out,
                "{} exceptional of {} scanned; wrote {} and {}",
                report.count(),
                report.rows.len(),
                path.display(),
                summary_path.display()
            )?;
        }
        None => {
            write_scan_csv(&report, opts.tail, out)?;
            writeln!(out)?;
            write_density_csv(reports, out)?;
        }
    }
    Ok(report)
}

/// Decomposes, verifies and prints JSON. On failure the traces are printed
/// before the error is returned.
pub fn cmd_decompose<W: Write>(input: &str, cfg: &DecomposeConfig, with_trace: bool, out: &mut W) -> Result<()> {
    let x: Fraction = input.parse()?;
    match decompose(&x, cfg) {
        Ok(d) => {
            let v = verify(&d.representation)?;
            let body = decomposition_json(&d, &v, with_trace);
            writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("json"))?;
            Ok(())
        }
        Err(Error::Decomposition(failure)) => {
            let body = json!({
                "target": x.to_string(),
                "error": failure.reason,
                "trace": failure.traces,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("json"))?;
            Err(Error::Decomposition(failure))
        }
        Err(e) => Err(e),
    }
}

pub fn cmd_cost_survey<W: Write>(
    q_min: u64,
    q_max: u64,
    cfg: &DecomposeConfig,
    sampling: Sampling,
    workers: usize,
    path: Option<&Path>,
    out: &mut W,
) -> Result<CostSurvey> {
    if q_max > SURVEY_CAP {
        return Err(Error::Config(format!("q_max = {q_max} exceeds the survey cap {SURVEY_CAP}")));
    }
    let survey = cost_survey(q_min, q_max, cfg, sampling, workers)?;
    match path {
        Some(path) => {
            let mut file = create(path)?;
            survey.write_csv(cfg, &mut file)?;
            file.flush()?;
            writeln!(
                out,
                "{} rows, {} failures, C_cap={:.6}; wrote {}",
                survey.rows.len(),
                survey.failures(),
                survey.c_cap(),
                path.display()
            )?;
        }
        None => survey.write_csv(cfg, out)?,
    }
    Ok(survey)
}
