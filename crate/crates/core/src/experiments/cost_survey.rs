use std::io::{self, Write};

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cf::Fraction;
use crate::decompose::{decompose, verify, DecomposeConfig, Decomposition, Verification};
use crate::error::{Error, Result};
use crate::pool;

/// Which numerators a cost survey visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    /// Below this denominator every reduced numerator is used.
    pub full_below: u64,
    /// Numerators drawn per denominator at or above `full_below`.
    pub per_q: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            full_below: 2000,
            per_q: 20,
            seed: 0,
        }
    }
}

impl Sampling {
    /// Ascending numerators for denominator `q`.
    pub fn numerators(&self, q: u64) -> Vec<u64> {
        let reduced: Vec<u64> = (1..q).filter(|b| b.gcd(&q) == 1).collect();
        if q < self.full_below || reduced.len() <= self.per_q {
            return reduced;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(q);
        let mut picked: Vec<u64> = index::sample(&mut rng, reduced.len(), self.per_q)
            .into_iter()
            .map(|i| reduced[i])
            .collect();
        picked.sort_unstable();
        picked
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RowOutcome {
    Ok {
        terms: usize,
        negative_terms: usize,
        total_cost: u64,
        cost_over_ln_q: f64,
        /// 0 when no split was needed.
        max_a_used: u64,
        depth: usize,
        /// Every split left a remainder whose denominator is below the square root of its input's.
        collapse_ok: bool,
    },
    Failed {
        last_a_tried: u64,
        depth: usize,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostRow {
    pub b: u64,
    pub q: u64,
    pub outcome: RowOutcome,
}

#[derive(Clone, Debug)]
pub struct CostSurvey {
    pub q_min: u64,
    pub q_max: u64,
    pub sampling: Sampling,
    pub rows: Vec<CostRow>,
}

impl CostSurvey {
    /// Largest `total_cost / ln q` over successful rows.
    pub fn c_cap(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| match r.outcome {
                RowOutcome::Ok { cost_over_ln_q, .. } => Some(cost_over_ln_q),
                RowOutcome::Failed { .. } => None,
            })
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.outcome, RowOutcome::Failed { .. })).count()
    }

    pub fn rows_with_negative_terms(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.outcome, RowOutcome::Ok { negative_terms, .. } if negative_terms > 0))
            .count()
    }

    fn max_of(&self, pick: impl Fn(&RowOutcome) -> Option<u64>) -> u64 {
        self.rows.iter().filter_map(|r| pick(&r.outcome)).max().unwrap_or(0)
    }

    pub fn write_csv<W: Write>(&self, cfg: &DecomposeConfig, out: &mut W) -> io::Result<()> {
        writeln!(
            out,
            "# seed={} q_min={} q_max={} A={} delta={} r={} q0={} budget={} full_below={} samples={}",
            self.sampling.seed,
            self.q_min,
            self.q_max,
            cfg.bound,
            cfg.delta,
            cfg.r,
            cfg.base_threshold,
            cfg.oracle_budget,
            self.sampling.full_below,
            self.sampling.per_q
        )?;
        writeln!(out, "b,q,terms,total_cost,cost_over_ln_q,max_A_used,depth")?;
        for row in &self.rows {
            match &row.outcome {
                RowOutcome::Ok {
                    terms,
                    total_cost,
                    cost_over_ln_q,
                    max_a_used,
                    depth,
                    ..
                } => writeln!(
                    out,
                    "{},{},{terms},{total_cost},{cost_over_ln_q:.6},{max_a_used},{depth}",
                    row.b, row.q
                )?,
                RowOutcome::Failed { last_a_tried, depth, .. } => {
                    writeln!(out, "{},{},0,fail,fail,{last_a_tried},{depth}", row.b, row.q)?
                }
            }
        }
        writeln!(
            out,
            "# summary rows={} failures={} C_cap={:.6} max_depth={} max_A_used={} rows_with_negative_terms={}",
            self.rows.len(),
            self.failures(),
            self.c_cap(),
            self.max_of(|o| match o {
                RowOutcome::Ok { depth, .. } => Some(*depth as u64),
                RowOutcome::Failed { .. } => None,
            }),
            self.max_of(|o| match o {
                RowOutcome::Ok { max_a_used, .. } => Some(*max_a_used),
                RowOutcome::Failed { .. } => None,
            }),
            self.rows_with_negative_terms()
        )
    }
}

/// Decomposes and verifies one fraction.
pub fn survey_one(b: u64, q: u64, cfg: &DecomposeConfig) -> CostRow {
    let outcome = match run_checked(b, q, cfg) {
        Ok((d, v)) => {
            let input_dens = d.traces.iter().map(|t| t.input.denom_unsigned());
            let remainders = d.traces.iter().map(|t| {
                t.last_attempt()
                    .and_then(|a| a.remainder.as_ref())
                    .map(Fraction::denom_unsigned)
                    .expect("successful split records its remainder")
            });
            let collapse_ok = input_dens.zip(remainders).all(|(q, r)| &r * &r < q);
            RowOutcome::Ok {
                terms: v.terms,
                negative_terms: d.representation.negative_terms(),
                total_cost: v.total_cost.to_u64().unwrap_or(u64::MAX),
                cost_over_ln_q: v.cost_over_ln_q.unwrap_or(0.0),
                max_a_used: d.max_bound_used().unwrap_or(0),
                depth: d.depth(),
                collapse_ok,
            }
        }
        Err(e) => {
            let (last_a_tried, depth) = match &e {
                Error::Decomposition(f) => (
                    f.traces.last().and_then(|t| t.bound()).unwrap_or(cfg.bound.get()),
                    f.traces.len(),
                ),
                _ => (cfg.bound.get(), 0),
            };
            RowOutcome::Failed {
                last_a_tried,
                depth,
                reason: e.to_string(),
            }
        }
    };
    CostRow { b, q, outcome }
}

fn run_checked(b: u64, q: u64, cfg: &DecomposeConfig) -> Result<(Decomposition, Verification)> {
    let x = Fraction::new(b, q)?;
    let d = decompose(&x, cfg)?;
    let v = verify(&d.representation)?;
    Ok((d, v))
}

/// Runs `decompose` + `verify` over the sampled `b/q` with `q_min <= q <= q_max`.
///
/// Rows come out sorted by `(q, b)` whatever the worker count.
pub fn cost_survey(
    q_min: u64,
    q_max: u64,
    cfg: &DecomposeConfig,
    sampling: Sampling,
    workers: usize,
) -> Result<CostSurvey> {
    cfg.validate()?;
    if q_min < 2 || q_max < q_min {
        return Err(Error::Config(format!("invalid survey range [{q_min}, {q_max}]")));
    }
    let rows = pool::install(workers, || {
        (q_min..=q_max)
            .into_par_iter()
            .flat_map_iter(|q| {
                sampling
                    .numerators(q)
                    .into_iter()
                    .map(move |b| survey_one(b, q, cfg))
            })
            .collect::<Vec<_>>()
    })?;
    Ok(CostSurvey {
        q_min,
        q_max,
        sampling,
        rows,
    })
}
