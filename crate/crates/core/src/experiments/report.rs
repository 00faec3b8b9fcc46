use std::io::{self, Write};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::cf::expand;
use crate::decompose::{Decomposition, Verification};
use crate::zaremba::{ExceptionalSetReport, TailConvention};

fn int_json(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

fn uint_json(n: &BigUint) -> Value {
    n.to_u64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

/// Per-`q` rows: `q,A,d,beta,is_exceptional,candidates_scanned`.
pub fn write_scan_csv<W: Write>(report: &ExceptionalSetReport, tail: TailConvention, out: &mut W) -> io::Result<()> {
    let (d, beta) = report.congruence.map_or((1, 0), |c| (c.modulus, c.residue));
    writeln!(
        out,
        "# N={} A={} congruence={d}:{beta} tail={}",
        report.n,
        report.bound,
        match tail {
            TailConvention::Strict => "strict",
            TailConvention::Lenient => "lenient",
        }
    )?;
    writeln!(out, "q,A,d,beta,is_exceptional,candidates_scanned")?;
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{d},{beta},{},{}",
            row.q, report.bound, row.is_exceptional, row.candidates_scanned
        )?;
    }
    Ok(())
}

/// Summary rows: `N,A,count,density_exponent` (empty exponent when undefined).
pub fn write_density_csv<W: Write>(reports: &[ExceptionalSetReport], out: &mut W) -> io::Result<()> {
    writeln!(out, "N,A,count,density_exponent")?;
    for r in reports {
        let exponent = r.density_exponent.map_or(String::new(), |e| format!("{e:.6}"));
        writeln!(out, "{},{},{},{exponent}", r.n, r.bound, r.count())?;
    }
    Ok(())
}

/// JSON form of a verified decomposition, with traces on request.
pub fn decomposition_json(d: &Decomposition, v: &Verification, with_trace: bool) -> Value {
    let rep = &d.representation;
    let terms: Vec<Value> = rep
        .terms
        .iter()
        .map(|t| {
            let e = expand(&t.value).expect("terms lie in (0, 1)");
            json!({
                "sign": t.sign.as_i8(),
                "num": int_json(t.value.numer()),
                "den": int_json(t.value.denom()),
                "expansion": e.to_string(),
                "cost": uint_json(&e.sum()),
            })
        })
        .collect();
    let mut out = json!({
        "target": rep.target.to_string(),
        "terms": terms,
        "total_cost": uint_json(&v.total_cost),
        "cost_over_log_q": v.cost_over_ln_q,
        "depth": d.depth(),
        "max_A_used": d.max_bound_used(),
    });
    if with_trace {
        out["trace"] = serde_json::to_value(&d.traces).expect("traces serialize");
    }
    out
}
