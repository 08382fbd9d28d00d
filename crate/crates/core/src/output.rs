//! Run orchestration and file outputs.
//!
//! A run writes six files into its output directory:
//!
//! | file | columns |
//! |------|---------|
//! | `inventories.csv` | `t, inv_<id>...` (inventory in effect at step t) |
//! | `prices.csv` | `t, last_price, best_bid, best_ask` (ticks) |
//! | `nlp.csv` | `t, nlp` |
//! | `trades.csv` | `t, buyer, seller, size, price` |
//! | `flow.txt` | flow table |
//! | `cycle.txt` | cycle report |
//!
//! The per-step CSVs hold one row per step `t = 0..N`; the final row is the
//! state after the last step. A zero-step run writes headers only.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::analysis::{self, CycleReport};
use crate::config::ConfigError;
use crate::config::ScenarioConfig;
use crate::harness::{self, InvariantViolation, RunError, Trace};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{violation}\n{row}")]
    Invariant { violation: InvariantViolation, row: String },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl ScenarioError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(_) => 1,
            ScenarioError::Invariant { .. } => 2,
            ScenarioError::Io(_) => 3,
        }
    }
}

impl From<csv::Error> for ScenarioError {
    fn from(e: csv::Error) -> Self {
        ScenarioError::Io(e.into())
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub steps: u64,
    pub trades: usize,
    pub final_inventories: Vec<i64>,
    pub cycle: CycleReport,
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let inv: Vec<String> = self.final_inventories.iter().map(i64::to_string).collect();
        write!(f, "steps={} trades={} final_inventories=[{}] ", self.steps, self.trades, inv.join(","))?;
        if self.cycle.found {
            write!(f, "cycle=period {} from t={}", self.cycle.period, self.cycle.first_index)
        } else {
            write!(f, "cycle=none")
        }
    }
}

/// Runs a scenario and writes its output files. `flow_window` limits the
/// flow table to an inclusive step range; by default it covers the whole run.
pub fn run_scenario(
    config: &ScenarioConfig,
    out_dir: &Path,
    flow_window: Option<(u64, u64)>,
) -> Result<RunSummary, ScenarioError> {
    let scenario = config.to_scenario()?;
    let trace = match harness::run(&scenario) {
        Ok(trace) => trace,
        Err(RunError::Invariant { violation, trace }) => {
            let t = violation.t.0;
            let table = analysis::flow_table(&trace, t, t);
            return Err(ScenarioError::Invariant { violation, row: table });
        }
    };
    fs::create_dir_all(out_dir)?;
    write_outputs(&trace, out_dir, flow_window)
}

pub fn write_outputs(
    trace: &Trace,
    out_dir: &Path,
    flow_window: Option<(u64, u64)>,
) -> Result<RunSummary, ScenarioError> {
    let scale = trace.header.scale;
    let ids: Vec<String> = trace.header.traders.iter().map(|t| format!("inv_{}", t.id)).collect();
    let last = trace.records.last();
    let terminal_t = last.map(|r| r.t.0 + 1);

    let mut inv = csv::Writer::from_path(out_dir.join("inventories.csv"))?;
    inv.write_record(std::iter::once("t".to_string()).chain(ids.iter().cloned()))?;
    for r in &trace.records {
        inv.write_record(std::iter::once(r.t.0.to_string()).chain(r.inv_before.iter().map(i64::to_string)))?;
    }
    if let (Some(r), Some(t)) = (last, terminal_t) {
        inv.write_record(std::iter::once(t.to_string()).chain(r.inv_after.iter().map(i64::to_string)))?;
    }
    inv.flush()?;

    let series = analysis::price_series(trace);
    let mut prices = csv::Writer::from_path(out_dir.join("prices.csv"))?;
    prices.write_record(["t", "last_price", "best_bid", "best_ask"])?;
    for (r, (_, p)) in trace.records.iter().zip(&series) {
        prices.write_record([
            r.t.0.to_string(),
            p.to_ticks_string(scale),
            r.best_bid.to_ticks_string(scale),
            r.best_ask.to_ticks_string(scale),
        ])?;
    }
    if let (Some(r), Some(t), Some((_, p))) = (last, terminal_t, series.last()) {
        prices.write_record([
            t.to_string(),
            p.to_ticks_string(scale),
            r.best_bid.to_ticks_string(scale),
            r.best_ask.to_ticks_string(scale),
        ])?;
    }
    prices.flush()?;

    let mut nlp = csv::Writer::from_path(out_dir.join("nlp.csv"))?;
    nlp.write_record(["t", "nlp"])?;
    for (t, value) in analysis::pressure_series(trace) {
        nlp.write_record([t.0.to_string(), format!("{:.6}", analysis::ratio_to_f64(value))])?;
    }
    if let Some(t) = terminal_t {
        nlp.write_record([t.to_string(), format!("{:.6}", 0.0)])?;
    }
    nlp.flush()?;

    let mut trades = csv::Writer::from_path(out_dir.join("trades.csv"))?;
    trades.write_record(["t", "buyer", "seller", "size", "price"])?;
    let mut count = 0;
    for r in &trace.records {
        for tr in &r.trades {
            count += 1;
            trades.write_record([
                r.t.0.to_string(),
                tr.buyer().to_string(),
                tr.seller().to_string(),
                tr.size().to_string(),
                tr.price().to_ticks_string(scale),
            ])?;
        }
    }
    trades.flush()?;

    let (from, to) = flow_window.unwrap_or((0, u64::MAX));
    fs::write(out_dir.join("flow.txt"), analysis::flow_table(trace, from, to))?;

    let cycle = analysis::detect_cycle(trace);
    let cycle_text = if cycle.found {
        format!("found=true\nfirst_index={}\nperiod={}\n", cycle.first_index, cycle.period)
    } else {
        "found=false\n".to_string()
    };
    fs::write(out_dir.join("cycle.txt"), cycle_text)?;

    Ok(RunSummary {
        steps: trace.records.len() as u64,
        trades: count,
        final_inventories: last.map(|r| r.inv_after.clone()).unwrap_or_default(),
        cycle,
    })
}
