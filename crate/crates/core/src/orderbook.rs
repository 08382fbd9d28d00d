//! Fill-and-kill exchange core.
//!
//! Books are rebuilt from scratch on every exchange step: newly arrived limit
//! orders are inserted in price-time order, incoming executable orders walk
//! the book, and whatever is left over is discarded at the end of the step.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{Order, OrderKind, Price};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BookSide {
    BidSide,
    AskSide,
}

impl BookSide {
    pub fn resting_kind(self) -> OrderKind {
        match self {
            BookSide::BidSide => OrderKind::Bid,
            BookSide::AskSide => OrderKind::Ask,
        }
    }

    /// Executable kind that trades against this side.
    pub fn aggressor_kind(self) -> OrderKind {
        match self {
            BookSide::BidSide => OrderKind::Sell,
            BookSide::AskSide => OrderKind::Buy,
        }
    }

    /// True when a resting order at `resting` has strictly worse priority than a
    /// new order at `incoming`, i.e. the new order goes in front of it.
    fn yields_to(self, incoming: Price, resting: Price) -> bool {
        match self {
            BookSide::BidSide => incoming > resting,
            BookSide::AskSide => incoming < resting,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BookError {
    #[error("cannot insert {kind:?} order into the {side:?} book")]
    WrongKind { side: BookSide, kind: OrderKind },
}

/// One side of the book as a price-time sorted sequence of resting orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderBook {
    side: BookSide,
    entries: Vec<Order>,
}

impl OrderBook {
    pub fn new(side: BookSide) -> Self {
        OrderBook { side, entries: Vec::new() }
    }

    pub fn side(&self) -> BookSide {
        self.side
    }

    pub fn entries(&self) -> &[Order] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn best(&self) -> Option<&Order> {
        self.entries.first()
    }

    pub fn total_size(&self) -> u64 {
        self.entries.iter().map(|o| o.size).sum()
    }

    /// Inserts one order behind every resting order of equal or better price.
    fn insert_one(&mut self, order: Order) -> Result<(), BookError> {
        if order.kind != self.side.resting_kind() {
            return Err(BookError::WrongKind { side: self.side, kind: order.kind });
        }
        if order.size == 0 {
            return Ok(());
        }
        let side = self.side;
        let pos = self
            .entries
            .iter()
            .position(|resting| side.yields_to(order.price, resting.price))
            .unwrap_or(self.entries.len());
        self.entries.insert(pos, order);
        Ok(())
    }

    /// Checks the ordering and no-empty-entry invariants.
    pub fn check_invariants(&self) -> Result<(), String> {
        if let Some(o) = self.entries.iter().find(|o| o.size == 0) {
            return Err(format!("zero-size entry {o:?} in {:?} book", self.side));
        }
        if let Some(o) = self.entries.iter().find(|o| o.kind != self.side.resting_kind()) {
            return Err(format!("{:?} order resting in {:?} book", o.kind, self.side));
        }
        for pair in self.entries.windows(2) {
            if self.side.yields_to(pair[1].price, pair[0].price) {
                return Err(format!("{:?} book out of order: {:?} ahead of {:?}", self.side, pair[0], pair[1]));
            }
        }
        Ok(())
    }
}

fn insert_all(mut book: OrderBook, new: &[Order]) -> Result<OrderBook, BookError> {
    for order in new {
        book.insert_one(*order)?;
    }
    Ok(book)
}

/// Adds asks to an ask book, one at a time in sequence order.
///
/// A new ask lands after every resting ask at the same or a lower price.
/// Zero-size orders are skipped.
pub fn insert_ask(book: OrderBook, new: &[Order]) -> Result<OrderBook, BookError> {
    if book.side != BookSide::AskSide {
        return Err(BookError::WrongKind { side: book.side, kind: OrderKind::Ask });
    }
    insert_all(book, new)
}

/// Mirror of [`insert_ask`] for the bid side (highest price first).
pub fn insert_bid(book: OrderBook, new: &[Order]) -> Result<OrderBook, BookError> {
    if book.side != BookSide::BidSide {
        return Err(BookError::WrongKind { side: book.side, kind: OrderKind::Bid });
    }
    insert_all(book, new)
}

/// Builds fresh books from this step's limit orders. Nothing rests across steps.
pub fn rebuild_books(bids: &[Order], asks: &[Order]) -> Result<(OrderBook, OrderBook), BookError> {
    Ok((insert_bid(OrderBook::new(BookSide::BidSide), bids)?, insert_ask(OrderBook::new(BookSide::AskSide), asks)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub remaining_book: OrderBook,
    /// Fills of resting orders, at their own price.
    pub executed_resting: Vec<Order>,
    /// Fills of executable orders; entry `k` is the counterpart of
    /// `executed_resting[k]` and carries the same size and price.
    pub executed_aggressive: Vec<Order>,
}

/// Matches executable orders, in sequence order, against a book.
///
/// Each executable order walks the book from the best price. A partial fill
/// shrinks the resting order, an oversized executable consumes the resting
/// order and carries on with what is left, and an exact match consumes both.
/// Once the book is empty the remaining executables are dropped unfilled.
///
/// # Panics
///
/// Panics if an executable has the wrong kind for the book side.
pub fn match_orders(book: &OrderBook, executables: &[Order]) -> MatchResult {
    let want = book.side.aggressor_kind();
    let mut resting = book.entries.clone().into_iter();
    let mut current = resting.next();
    let mut executed_resting = Vec::new();
    let mut executed_aggressive = Vec::new();

    'orders: for exec in executables {
        assert_eq!(exec.kind, want, "{:?} order cannot trade against the {:?} book", exec.kind, book.side);
        let mut left = exec.size;
        while left > 0 {
            let Some(mut r) = current else { break 'orders };
            let fill = left.min(r.size);
            executed_resting.push(Order { size: fill, ..r });
            executed_aggressive.push(Order { size: fill, price: r.price, ..*exec });
            left -= fill;
            r.size -= fill;
            current = if r.size == 0 { resting.next() } else { Some(r) };
        }
    }

    let mut remaining = OrderBook::new(book.side);
    remaining.entries.extend(current);
    remaining.entries.extend(resting);
    MatchResult { remaining_book: remaining, executed_resting, executed_aggressive }
}

/// Execution prices obtained by walking `resting` with `executables`, written
/// as the direct three-way size recursion. Kept separate from
/// [`match_orders`] so the two can be checked against each other.
pub fn execution_prices(resting: &[Order], executables: &[Order]) -> Vec<Price> {
    fn walk(r: Option<(Order, &[Order])>, e: Option<(Order, &[Order])>, out: &mut Vec<Price>) {
        let (Some((r, rr)), Some((e, ee))) = (r, e) else { return };
        // Zero-size executables never reach the exchange; skip them if present.
        if e.size == 0 {
            return walk(Some((r, rr)), split(ee), out);
        }
        out.push(r.price);
        if e.size < r.size {
            let reduced = Order { size: r.size - e.size, ..r };
            walk(Some((reduced, rr)), split(ee), out)
        } else if e.size > r.size {
            let reduced = Order { size: e.size - r.size, ..e };
            walk(split(rr), Some((reduced, ee)), out)
        } else {
            walk(split(rr), split(ee), out)
        }
    }
    fn split(s: &[Order]) -> Option<(Order, &[Order])> {
        s.split_first().map(|(h, t)| (*h, t))
    }

    let mut out = Vec::new();
    walk(split(resting), split(executables), &mut out);
    out
}

/// Head-of-book prices, carrying the previous value forward for an empty side.
pub fn best_prices(bidbook: &OrderBook, askbook: &OrderBook, previous: (Price, Price)) -> (Price, Price) {
    (bidbook.best().map_or(previous.0, |o| o.price), askbook.best().map_or(previous.1, |o| o.price))
}
