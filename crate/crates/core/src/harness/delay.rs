use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::types::{ExecutionBatch, OrderKind};

/// Fixed-length FIFO: what goes in at step `t` comes out at step `t + delta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DelayLine<T = ExecutionBatch> {
    delta: u64,
    buffer: VecDeque<T>,
}

impl<T: Default> DelayLine<T> {
    pub fn new(delta: u64) -> Self {
        DelayLine { delta, buffer: (0..delta).map(|_| T::default()).collect() }
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Must be called exactly once per step. With `delta == 0` the incoming
    /// item is handed straight back.
    pub fn shift(&mut self, incoming: T) -> T {
        self.buffer.push_back(incoming);
        self.buffer.pop_front().expect("buffer holds at least the incoming item")
    }

    /// Items in flight, oldest (next to be delivered) first.
    pub fn in_flight(&self) -> impl Iterator<Item = &T> {
        self.buffer.iter()
    }
}

/// Pure form of [`DelayLine::shift`].
pub fn delay_shift<T: Default + Clone>(line: &DelayLine<T>, incoming: T) -> (DelayLine<T>, T) {
    let mut next = line.clone();
    let delivered = next.shift(incoming);
    (next, delivered)
}

/// Per-kind confirmation delays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Delays {
    pub bids: u64,
    pub asks: u64,
    pub buys: u64,
    pub sells: u64,
}

impl Delays {
    pub fn uniform(delta: u64) -> Self {
        Delays { bids: delta, asks: delta, buys: delta, sells: delta }
    }

    pub fn of(&self, kind: OrderKind) -> u64 {
        match kind {
            OrderKind::Bid => self.bids,
            OrderKind::Ask => self.asks,
            OrderKind::Buy => self.buys,
            OrderKind::Sell => self.sells,
        }
    }

    pub fn as_uniform(&self) -> Option<u64> {
        (self.bids == self.asks && self.asks == self.buys && self.buys == self.sells).then_some(self.bids)
    }

    pub fn max(&self) -> u64 {
        self.bids.max(self.asks).max(self.buys).max(self.sells)
    }
}

const KINDS: [OrderKind; 4] = [OrderKind::Bid, OrderKind::Ask, OrderKind::Buy, OrderKind::Sell];

/// The confirmation path from the exchange to one trader: one delay line per
/// confirmation kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfirmationLink {
    lines: [DelayLine; 4],
}

impl ConfirmationLink {
    pub fn new(delays: Delays) -> Self {
        ConfirmationLink { lines: KINDS.map(|k| DelayLine::new(delays.of(k))) }
    }

    /// Pushes this step's confirmations and returns the ones due now.
    pub fn shift(&mut self, incoming: &ExecutionBatch) -> ExecutionBatch {
        let mut delivered = ExecutionBatch::default();
        for (line, kind) in self.lines.iter_mut().zip(KINDS) {
            let out = line.shift(incoming.only(kind));
            delivered.extend(&out);
        }
        delivered
    }

    /// All confirmations currently buffered, merged.
    pub fn pending(&self) -> ExecutionBatch {
        let mut all = ExecutionBatch::default();
        for line in &self.lines {
            for batch in line.in_flight() {
                all.extend(batch);
            }
        }
        all
    }

    /// The bid, ask, buy and sell lines, in that order.
    pub fn lines(&self) -> &[DelayLine; 4] {
        &self.lines
    }

    pub fn is_idle(&self) -> bool {
        self.lines.iter().all(|l| l.in_flight().all(ExecutionBatch::is_empty))
    }
}
