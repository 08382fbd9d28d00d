//! Post-run analysis over traces.

mod flow;

use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use flow::{flow_rows, flow_table, parse_flow_table, FlowLabel, FlowParseError, FlowRow};

use crate::harness::{ConfirmationLink, LiquiditySums, Trace};
use crate::types::{total_size, Order, OrderKind, Price, SimTime, TraderId};

/// `Σbuys/(1+Σasks) − Σsells/(1+Σbids)` for one step's grouped orders.
pub fn net_liquidity_pressure(buys: &[Order], asks: &[Order], sells: &[Order], bids: &[Order]) -> Ratio<i64> {
    pressure_from_sums(&LiquiditySums {
        bids: total_size(bids),
        asks: total_size(asks),
        buys: total_size(buys),
        sells: total_size(sells),
    })
}

pub fn pressure_from_sums(sums: &LiquiditySums) -> Ratio<i64> {
    Ratio::new(sums.buys as i64, 1 + sums.asks as i64) - Ratio::new(sums.sells as i64, 1 + sums.bids as i64)
}

/// Net liquidity pressure at every step (zero on steps where the exchange is idle).
pub fn pressure_series(trace: &Trace) -> Vec<(SimTime, Ratio<i64>)> {
    trace.records.iter().map(|r| (r.t, pressure_from_sums(&r.liquidity))).collect()
}

/// Mean pressure over the exchange steps of a run, as a float.
pub fn mean_pressure(trace: &Trace) -> f64 {
    let values: Vec<f64> = trace
        .records
        .iter()
        .filter(|r| r.t.is_exchange_step())
        .map(|r| ratio_to_f64(pressure_from_sums(&r.liquidity)))
        .collect();
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

pub fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Means with magnitude below this are not read as a direction.
pub const PRESSURE_INDETERMINATE_BELOW: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Rising,
    Falling,
    Indeterminate,
}

/// Price direction predicted from the run's mean liquidity pressure.
pub fn predicted_direction(trace: &Trace) -> Direction {
    let m = mean_pressure(trace);
    if m.abs() < PRESSURE_INDETERMINATE_BELOW {
        Direction::Indeterminate
    } else if m > 0.0 {
        Direction::Rising
    } else {
        Direction::Falling
    }
}

/// Direction the market price actually moved over the run.
pub fn realized_direction(trace: &Trace) -> Direction {
    let series = price_series(trace);
    let start = trace.header.initial_mid();
    match series.last().map(|&(_, p)| p.cmp(&start)) {
        Some(std::cmp::Ordering::Greater) => Direction::Rising,
        Some(std::cmp::Ordering::Less) => Direction::Falling,
        _ => Direction::Indeterminate,
    }
}

/// Last traded price at every step, carried forward; starts at the initial mid.
pub fn price_series(trace: &Trace) -> Vec<(SimTime, Price)> {
    let mut price = trace.header.initial_mid();
    trace
        .records
        .iter()
        .map(|r| {
            if let Some(p) = r.last_price {
                price = p;
            }
            (r.t, price)
        })
        .collect()
}

/// A confirmation as it bears on inventory. The fill price is left out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PendingFill {
    pub kind: OrderKind,
    pub trader: TraderId,
    pub size: u64,
}

/// Part of the market state that determines future inventories: every
/// inventory, every confirmation still in flight, the orders on their way to
/// the exchange, and the step parity.
///
/// `in_flight[i]` lists trader `i`'s delay-line slots, bid line first, each
/// slot holding the fills due together. Orders in transit are recorded the
/// same way, without their prices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComparableState {
    pub inventories: Vec<i64>,
    pub in_flight: Vec<Vec<Vec<PendingFill>>>,
    pub in_transit: Vec<PendingFill>,
    pub parity: u8,
}

fn without_price(o: &Order) -> PendingFill {
    PendingFill { kind: o.kind, trader: o.trader, size: o.size }
}

fn pending_fills(link: &ConfirmationLink) -> Vec<Vec<PendingFill>> {
    link.lines()
        .iter()
        .flat_map(|line| line.in_flight())
        .map(|batch| batch.iter().map(without_price).collect())
        .collect()
}

pub fn comparable_state(trace: &Trace, index: usize) -> ComparableState {
    let r = &trace.records[index];
    ComparableState {
        inventories: r.inv_before.clone(),
        in_flight: r.in_flight.iter().map(pending_fills).collect(),
        in_transit: match index.checked_sub(1) {
            Some(prev) => trace.records[prev].orders.iter().map(without_price).collect(),
            None => Vec::new(),
        },
        parity: (r.t.0 % 2) as u8,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub found: bool,
    pub first_index: u64,
    pub period: u64,
}

impl CycleReport {
    pub const NOT_FOUND: CycleReport = CycleReport { found: false, first_index: 0, period: 0 };
}

/// Earliest exact repetition of the comparable state.
///
/// Best prices are not compared: quotes may keep drifting while inventories
/// and fills repeat. Repetition is exact for deterministic runs. When arrivals are shuffled or
/// sizes are random the generator state is not part of the comparison, so a
/// hit means the inventory and confirmation pipeline repeated.
pub fn detect_cycle(trace: &Trace) -> CycleReport {
    let mut seen: HashMap<ComparableState, u64> = HashMap::new();
    for (i, r) in trace.records.iter().enumerate() {
        let state = comparable_state(trace, i);
        if let Some(&first) = seen.get(&state) {
            return CycleReport { found: true, first_index: first, period: r.t.0 - first };
        }
        seen.insert(state, r.t.0);
    }
    CycleReport::NOT_FOUND
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    AlwaysStable,
    PanickedAt(SimTime),
}

/// First step at which the trader's inventory is outside `(LL, UL)`.
/// Traders without limits are always stable.
pub fn stability_verdict(trace: &Trace, trader: TraderId) -> Verdict {
    let Some(idx) = trace.header.index_of(trader) else { return Verdict::AlwaysStable };
    let info = &trace.header.traders[idx];
    let (Some(ul), Some(ll)) = (info.upper_limit, info.lower_limit) else { return Verdict::AlwaysStable };
    trace
        .records
        .iter()
        .find(|r| {
            let inv = r.inv_before[idx];
            inv >= ul || inv <= ll
        })
        .map_or(Verdict::AlwaysStable, |r| Verdict::PanickedAt(r.t))
}
