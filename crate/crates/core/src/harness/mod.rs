//! Synchronous scheduler.
//!
//! Every step is one message hop. Traders send orders on even steps, the
//! exchange matches them on the following odd step, and confirmations travel
//! back through per-trader delay lines. A confirmation delivered during step
//! `t` is reflected in the inventory the trader uses at step `t + 1`.

mod delay;
mod rng;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use delay::{delay_shift, ConfirmationLink, DelayLine, Delays};
pub use rng::{shuffle_arrivals, Rng};

use crate::agents::{
    fundamental_step, market_maker_step, update_inventory, FundamentalTraderState, MarketMakerState, Phase,
};
use crate::orderbook::{best_prices, match_orders, rebuild_books};
use crate::types::{total_size, ExecutionBatch, Order, OrderKind, Price, PriceScale, SimTime, TraderId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Agent {
    MarketMaker(MarketMakerState),
    Fundamental {
        state: FundamentalTraderState,
        /// Leave as soon as at least one market maker panics while another is stable.
        exit_on_panic: bool,
    },
}

impl Agent {
    pub fn id(&self) -> TraderId {
        match self {
            Agent::MarketMaker(s) => s.id,
            Agent::Fundamental { state, .. } => state.id,
        }
    }

    pub fn inventory(&self) -> i64 {
        match self {
            Agent::MarketMaker(s) => s.inv,
            Agent::Fundamental { state, .. } => state.inv,
        }
    }

    pub fn as_market_maker(&self) -> Option<&MarketMakerState> {
        match self {
            Agent::MarketMaker(s) => Some(s),
            Agent::Fundamental { .. } => None,
        }
    }
}

/// One participant plus its scheduling cadence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraderSetup {
    pub agent: Agent,
    /// Sends orders on every `every`-th even step; sends nothing otherwise.
    pub every: u32,
}

/// A validated, ready-to-run scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub steps: u64,
    pub seed: u64,
    pub shuffle: bool,
    pub scale: PriceScale,
    pub initial_best_bid: Price,
    pub initial_best_ask: Price,
    pub delays: Delays,
    /// Sorted by trader id; this is also the grouping order at the exchange.
    pub traders: Vec<TraderSetup>,
    pub assertions: bool,
}

impl Scenario {
    pub fn initial_mid(&self) -> Price {
        Price((self.initial_best_bid.0 + self.initial_best_ask.0) / 2)
    }
}

/// Static description of a trader, carried in the trace for analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraderInfo {
    pub id: TraderId,
    pub market_maker: bool,
    pub upper_limit: Option<i64>,
    pub lower_limit: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub scale: PriceScale,
    pub initial_best_bid: Price,
    pub initial_best_ask: Price,
    pub delays: Delays,
    pub traders: Vec<TraderInfo>,
}

impl TraceHeader {
    pub fn initial_mid(&self) -> Price {
        Price((self.initial_best_bid.0 + self.initial_best_ask.0) / 2)
    }

    pub fn index_of(&self, id: TraderId) -> Option<usize> {
        self.traders.iter().position(|t| t.id == id)
    }
}

/// A single fill: the resting order's fill and the executable order's fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trade {
    pub resting: Order,
    pub aggressive: Order,
}

impl Trade {
    pub fn size(&self) -> u64 {
        self.resting.size
    }

    pub fn price(&self) -> Price {
        self.resting.price
    }

    pub fn buyer(&self) -> TraderId {
        if self.resting.kind == OrderKind::Bid {
            self.resting.trader
        } else {
            self.aggressive.trader
        }
    }

    pub fn seller(&self) -> TraderId {
        if self.resting.kind == OrderKind::Bid {
            self.aggressive.trader
        } else {
            self.resting.trader
        }
    }
}

/// Total sizes of the four order groups that reached the exchange in one step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiquiditySums {
    pub bids: u64,
    pub asks: u64,
    pub buys: u64,
    pub sells: u64,
}

/// Everything observable about one step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: SimTime,
    /// Inventories in effect during this step, indexed like the trace header.
    pub inv_before: Vec<i64>,
    /// Inventories after this step's confirmations were applied.
    pub inv_after: Vec<i64>,
    /// Orders sent by traders at this step, in grouping order.
    pub orders: Vec<Order>,
    /// Order totals processed by the exchange at this step.
    pub liquidity: LiquiditySums,
    /// Fills produced at this step.
    pub trades: Vec<Trade>,
    /// Per-trader confirmation buffers at the start of this step.
    pub in_flight: Vec<ConfirmationLink>,
    /// Confirmations delivered to traders at this step, all traders merged.
    pub delivered: ExecutionBatch,
    pub best_bid: Price,
    pub best_ask: Price,
    /// Price of the last fill at this step, if any.
    pub last_price: Option<Price>,
}

impl StepRecord {
    /// The trade confirmations produced at this step.
    pub fn executions(&self) -> ExecutionBatch {
        executions_of(&self.trades)
    }
}

fn executions_of(trades: &[Trade]) -> ExecutionBatch {
    let mut batch = ExecutionBatch::default();
    for tr in trades {
        batch.of_kind_mut(tr.resting.kind).push(tr.resting);
        batch.of_kind_mut(tr.aggressive.kind).push(tr.aggressive);
    }
    batch
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub header: TraceHeader,
    pub records: Vec<StepRecord>,
}

impl Trace {
    /// Deterministic serialization, used for byte-level comparisons.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invariant violated at step {t}: {message}")]
pub struct InvariantViolation {
    pub t: SimTime,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum RunError {
    /// The run stopped at the offending step; `trace` ends with that step's record.
    #[error("{violation}")]
    Invariant { violation: InvariantViolation, trace: Box<Trace> },
}

/// Full simulation state between steps.
#[derive(Debug, Clone)]
pub struct World {
    t: SimTime,
    scale: PriceScale,
    shuffle: bool,
    assertions: bool,
    traders: Vec<TraderSetup>,
    sizing_rngs: Vec<Rng>,
    links: Vec<ConfirmationLink>,
    /// Orders sent last step, on their way to the exchange.
    inbox: Vec<Order>,
    best: (Price, Price),
    arrival_rng: Rng,
    /// Sum of all inventories plus all confirmations still in flight.
    conserved_total: i64,
}

impl World {
    pub fn new(scenario: &Scenario) -> Self {
        let traders = scenario.traders.clone();
        let sizing_rngs = traders.iter().map(|t| Rng::stream(scenario.seed, 1 + t.agent.id().0 as u64)).collect();
        let links = traders.iter().map(|_| ConfirmationLink::new(scenario.delays)).collect();
        let conserved_total = traders.iter().map(|t| t.agent.inventory()).sum();
        World {
            t: SimTime(0),
            scale: scenario.scale,
            shuffle: scenario.shuffle,
            assertions: scenario.assertions,
            traders,
            sizing_rngs,
            links,
            inbox: Vec::new(),
            best: (scenario.initial_best_bid, scenario.initial_best_ask),
            arrival_rng: Rng::stream(scenario.seed, 0),
            conserved_total,
        }
    }

    pub fn time(&self) -> SimTime {
        self.t
    }

    pub fn traders(&self) -> &[TraderSetup] {
        &self.traders
    }

    pub fn links(&self) -> &[ConfirmationLink] {
        &self.links
    }

    pub fn best_prices(&self) -> (Price, Price) {
        self.best
    }

    pub fn inventories(&self) -> Vec<i64> {
        self.traders.iter().map(|t| t.agent.inventory()).collect()
    }

    fn market_makers(&self) -> impl Iterator<Item = &MarketMakerState> {
        self.traders.iter().filter_map(|t| t.agent.as_market_maker())
    }

    /// Fundamental traders configured to leave on a panic/stable split leave now.
    fn apply_exit_triggers(&mut self) {
        let phases: Vec<Phase> = self.market_makers().map(MarketMakerState::phase).collect();
        let split = phases.contains(&Phase::Panic) && phases.contains(&Phase::Stable);
        if !split {
            return;
        }
        let t = self.t;
        for trader in &mut self.traders {
            if let Agent::Fundamental { state, exit_on_panic: true } = &mut trader.agent {
                if state.is_active(t) {
                    state.timelimit = t;
                }
            }
        }
    }

    fn emit_orders(&mut self) -> Vec<Order> {
        let t = self.t;
        let (bb, ba) = self.best;
        let mut out = Vec::new();
        for (trader, rng) in self.traders.iter().zip(&mut self.sizing_rngs) {
            if !(t.0 / 2).is_multiple_of(trader.every.max(1) as u64) {
                continue;
            }
            match &trader.agent {
                Agent::MarketMaker(s) => out.extend(market_maker_step(s, t, bb, ba, rng, self.scale)),
                Agent::Fundamental { state, .. } => out.extend(fundamental_step(state, t)),
            }
        }
        out
    }

    /// Exchange step: returns the fills and the order totals it saw.
    fn run_exchange(&mut self, arrivals: Vec<Order>) -> Result<(Vec<Trade>, LiquiditySums), String> {
        let group = |kind: OrderKind| -> Vec<Order> { arrivals.iter().filter(|o| o.kind == kind).copied().collect() };
        let mut bids = group(OrderKind::Bid);
        let mut asks = group(OrderKind::Ask);
        let mut buys = group(OrderKind::Buy);
        let mut sells = group(OrderKind::Sell);
        if self.shuffle {
            for g in [&mut bids, &mut asks, &mut buys, &mut sells] {
                shuffle_arrivals(g, &mut self.arrival_rng);
            }
        }
        let sums = LiquiditySums {
            bids: total_size(&bids),
            asks: total_size(&asks),
            buys: total_size(&buys),
            sells: total_size(&sells),
        };

        let (bidbook, askbook) = rebuild_books(&bids, &asks).map_err(|e| e.to_string())?;
        if self.assertions {
            bidbook.check_invariants()?;
            askbook.check_invariants()?;
        }
        let on_bids = match_orders(&bidbook, &sells);
        let on_asks = match_orders(&askbook, &buys);
        if self.assertions {
            for (m, book) in [(&on_bids, &bidbook), (&on_asks, &askbook)] {
                let resting = total_size(&m.executed_resting);
                if resting != total_size(&m.executed_aggressive) {
                    return Err("matched sizes differ between resting and executable sides".into());
                }
                if resting + m.remaining_book.total_size() != book.total_size() {
                    return Err("matching did not conserve resting size".into());
                }
            }
        }
        self.best = best_prices(&on_bids.remaining_book, &on_asks.remaining_book, self.best);

        let trades = [on_bids, on_asks]
            .into_iter()
            .flat_map(|m| {
                m.executed_resting
                    .into_iter()
                    .zip(m.executed_aggressive)
                    .map(|(resting, aggressive)| Trade { resting, aggressive })
            })
            .collect();
        Ok((trades, sums))
    }

    /// Advances one step.
    pub fn step(&mut self) -> Result<StepRecord, Box<(StepRecord, InvariantViolation)>> {
        let t = self.t;
        let inv_before = self.inventories();
        let in_flight = self.links.clone();
        let mut problems = Vec::new();

        let orders = if t.is_trader_step() {
            self.apply_exit_triggers();
            self.emit_orders()
        } else {
            Vec::new()
        };

        let arrivals = std::mem::take(&mut self.inbox);
        let (trades, liquidity) = if t.is_exchange_step() {
            match self.run_exchange(arrivals) {
                Ok(r) => r,
                Err(e) => {
                    problems.push(e);
                    (Vec::new(), LiquiditySums::default())
                }
            }
        } else {
            (Vec::new(), LiquiditySums::default())
        };
        let executions = executions_of(&trades);

        let mut delivered = ExecutionBatch::default();
        for (trader, link) in self.traders.iter_mut().zip(&mut self.links) {
            let id = trader.agent.id();
            let due = link.shift(&executions.for_trader(id));
            match &mut trader.agent {
                Agent::MarketMaker(s) => *s = update_inventory(s, &due),
                Agent::Fundamental { state, .. } => state.inv += due.inventory_delta(id),
            }
            delivered.extend(&due);
        }

        self.inbox = orders.clone();
        let inv_after = self.inventories();
        let record = StepRecord {
            t,
            inv_before,
            inv_after,
            orders,
            liquidity,
            last_price: trades.last().map(Trade::price),
            trades,
            in_flight,
            delivered,
            best_bid: self.best.0,
            best_ask: self.best.1,
        };
        self.t = SimTime(t.0 + 1);

        if self.assertions {
            problems.extend(self.check_step(&record));
        }
        match problems.into_iter().next() {
            None => Ok(record),
            Some(message) => Err(Box::new((record, InvariantViolation { t, message }))),
        }
    }

    fn check_step(&self, record: &StepRecord) -> Vec<String> {
        let mut problems = Vec::new();
        if record.t.is_exchange_step() && !record.orders.is_empty() {
            problems.push("orders issued on an exchange step".to_string());
        }
        if record.t.is_trader_step() && !record.trades.is_empty() {
            problems.push("executions on a trader step".to_string());
        }
        if let Some(o) = record.orders.iter().find(|o| o.size == 0) {
            problems.push(format!("zero-size order emitted: {o:?}"));
        }
        if let Some(tr) = record.trades.iter().find(|tr| tr.resting.size == 0 || tr.resting.size != tr.aggressive.size)
        {
            problems.push(format!("malformed fill: {tr:?}"));
        }
        let pending: i64 =
            self.traders.iter().zip(&self.links).map(|(t, l)| l.pending().inventory_delta(t.agent.id())).sum();
        let held: i64 = record.inv_after.iter().sum();
        if held + pending != self.conserved_total {
            problems.push(format!(
                "inventory not conserved: held {held} + in flight {pending} != {}",
                self.conserved_total
            ));
        }
        problems
    }
}

pub fn header_for(scenario: &Scenario) -> TraceHeader {
    TraceHeader {
        scale: scenario.scale,
        initial_best_bid: scenario.initial_best_bid,
        initial_best_ask: scenario.initial_best_ask,
        delays: scenario.delays,
        traders: scenario
            .traders
            .iter()
            .map(|t| match &t.agent {
                Agent::MarketMaker(s) => TraderInfo {
                    id: s.id,
                    market_maker: true,
                    upper_limit: Some(s.upper_limit),
                    lower_limit: Some(s.lower_limit),
                },
                Agent::Fundamental { state, .. } => {
                    TraderInfo { id: state.id, market_maker: false, upper_limit: None, lower_limit: None }
                }
            })
            .collect(),
    }
}

/// Runs steps `0..scenario.steps` and returns the full trace.
pub fn run(scenario: &Scenario) -> Result<Trace, RunError> {
    let mut world = World::new(scenario);
    let mut trace = Trace { header: header_for(scenario), records: Vec::with_capacity(scenario.steps as usize) };
    for _ in 0..scenario.steps {
        match world.step() {
            Ok(record) => trace.records.push(record),
            Err(failed) => {
                let (record, violation) = *failed;
                trace.records.push(record);
                return Err(RunError::Invariant { violation, trace: Box::new(trace) });
            }
        }
    }
    Ok(trace)
}

/// Continues an existing world for `steps` more steps.
pub fn run_world(world: &mut World, steps: u64) -> Result<Vec<StepRecord>, InvariantViolation> {
    (0..steps).map(|_| world.step().map_err(|failed| failed.1)).collect()
}
