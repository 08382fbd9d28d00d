//! Inventory-constrained market makers and fundamental traders.
//!
//! A market maker is in one of two phases, derived from its inventory:
//! stable (`LL < inv < UL`), where it quotes one bid and one ask sized so that
//! full execution cannot push it to a limit, or panic, where it sends a
//! single executable order of size `UL` (or `-LL`) and nothing else.

use serde::{Deserialize, Serialize};

use crate::harness::Rng;
use crate::types::{ExecutionBatch, Order, Price, PriceScale, SimTime, TraderId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SizingMode {
    /// Resting sizes are exactly the largest sizes that keep inventory inside the limits.
    #[default]
    Deterministic,
    /// Resting sizes are drawn uniformly between zero and the deterministic size.
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Stable,
    Panic,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarketMakerState {
    pub id: TraderId,
    pub inv: i64,
    pub upper_limit: i64,
    pub lower_limit: i64,
    /// Maximum inventory-driven price skew, in sub-ticks.
    pub zeta: Price,
    pub sizing: SizingMode,
}

impl MarketMakerState {
    pub fn new(id: TraderId, inv: i64, upper_limit: i64, lower_limit: i64, zeta: Price) -> Self {
        MarketMakerState { id, inv, upper_limit, lower_limit, zeta, sizing: SizingMode::Deterministic }
    }

    pub fn with_sizing(mut self, sizing: SizingMode) -> Self {
        self.sizing = sizing;
        self
    }

    pub fn phase(&self) -> Phase {
        phase_of(self.inv, self.upper_limit, self.lower_limit)
    }

    /// `UL - LL - 2`, the denominator of the pricing skew.
    fn span(&self) -> i64 {
        self.upper_limit - self.lower_limit - 2
    }

    pub fn check_limits(&self) -> Result<(), String> {
        if self.lower_limit >= 0 || self.upper_limit <= 0 {
            return Err(format!(
                "limits must satisfy LL < 0 < UL (got LL={}, UL={})",
                self.lower_limit, self.upper_limit
            ));
        }
        if self.span() <= 0 {
            return Err(format!("degenerate pricing denominator UL-LL-2 = {}", self.span()));
        }
        Ok(())
    }
}

pub fn phase_of(inv: i64, upper_limit: i64, lower_limit: i64) -> Phase {
    if inv >= upper_limit || inv <= lower_limit {
        Phase::Panic
    } else {
        Phase::Stable
    }
}

/// Rounds `num / den` to the nearest integer, ties away from zero.
fn div_round_half_away(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = num / den;
    let r = num % den;
    if 2 * r.abs() >= den {
        q + num.signum()
    } else {
        q
    }
}

/// Limit prices for the next bid and ask.
///
/// With `mid = (bestbid + bestask) / 2` and `r = (UL-1-inv) / (UL-LL-2)`:
/// the bid is `mid - 1 - zeta*(1-r)` and the ask is `mid + 1 + zeta*r`, both
/// floored at zero. At `inv = LL+1` the bid sits one tick under the mid; at
/// `inv = UL-1` the ask sits one tick over it.
pub fn bid_ask_prices(best_bid: Price, best_ask: Price, state: &MarketMakerState, scale: PriceScale) -> (Price, Price) {
    let span = state.span() as i128;
    let headroom = (state.upper_limit - 1 - state.inv) as i128;
    let sum = best_bid.0 as i128 + best_ask.0 as i128;
    let tick = scale.0 as i128;
    let zeta = state.zeta.0 as i128;
    // Everything over the common denominator 2*span.
    let den = 2 * span;
    let bid_num = sum * span - 2 * tick * span - 2 * zeta * (span - headroom);
    let ask_num = sum * span + 2 * tick * span + 2 * zeta * headroom;
    let bid = div_round_half_away(bid_num, den).max(0);
    let ask = div_round_half_away(ask_num, den).max(0);
    (Price(bid as i64), Price(ask as i64))
}

/// Largest bid size that cannot lift inventory above `UL - 1`.
pub fn max_bid_size(inv: i64, upper_limit: i64) -> u64 {
    (upper_limit - 1 - inv).max(0) as u64
}

/// Largest ask size that cannot push inventory below `LL + 1`.
pub fn max_ask_size(inv: i64, lower_limit: i64) -> u64 {
    (inv - (lower_limit + 1)).max(0) as u64
}

/// Resting (bid, ask) sizes; both are zero on the side that is in panic.
pub fn resting_sizes(state: &MarketMakerState, rng: &mut Rng) -> (u64, u64) {
    let mut bid_bound = if state.inv >= state.upper_limit { 0 } else { max_bid_size(state.inv, state.upper_limit) };
    let mut ask_bound = if state.inv <= state.lower_limit { 0 } else { max_ask_size(state.inv, state.lower_limit) };
    if state.sizing == SizingMode::UniformRandom {
        bid_bound = rng.uniform_inclusive(bid_bound);
        ask_bound = rng.uniform_inclusive(ask_bound);
    }
    (bid_bound, ask_bound)
}

/// Executable (buy, sell) sizes: `-LL` in a negative panic, `UL` in a positive one.
pub fn executable_sizes(state: &MarketMakerState) -> (u64, u64) {
    let sell = if state.inv >= state.upper_limit { state.upper_limit as u64 } else { 0 };
    let buy = if state.inv <= state.lower_limit { (-state.lower_limit) as u64 } else { 0 };
    (buy, sell)
}

/// Applies delivered confirmations to the inventory.
pub fn update_inventory(state: &MarketMakerState, delivered: &ExecutionBatch) -> MarketMakerState {
    MarketMakerState { inv: state.inv + delivered.inventory_delta(state.id), ..state.clone() }
}

/// Orders a market maker sends at step `t`: bid, ask, buy, sell in that
/// order, with empty orders removed. Odd steps produce nothing.
pub fn market_maker_step(
    state: &MarketMakerState,
    t: SimTime,
    best_bid: Price,
    best_ask: Price,
    rng: &mut Rng,
    scale: PriceScale,
) -> Vec<Order> {
    if !t.is_trader_step() {
        return Vec::new();
    }
    let (buy, sell) = executable_sizes(state);
    let (bid_size, ask_size) = match state.phase() {
        Phase::Stable => resting_sizes(state, rng),
        Phase::Panic => (0, 0),
    };
    let (bid_price, ask_price) = bid_ask_prices(best_bid, best_ask, state, scale);
    [
        Order::bid(bid_size, bid_price, state.id),
        Order::ask(ask_size, ask_price, state.id),
        Order::buy(buy, state.id),
        Order::sell(sell, state.id),
    ]
    .into_iter()
    .filter(|o| !o.is_empty())
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FundamentalSide {
    SellSide,
    BuySide,
}

/// A trader that sends one fixed-size executable order every even step until
/// `timelimit`, then leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FundamentalTraderState {
    pub id: TraderId,
    pub side: FundamentalSide,
    pub omega: u64,
    pub timelimit: SimTime,
    /// Position accumulated from fills. Bookkeeping only; it never feeds back
    /// into behaviour.
    pub inv: i64,
}

impl FundamentalTraderState {
    pub fn new(side: FundamentalSide, omega: u64, timelimit: SimTime) -> Self {
        FundamentalTraderState { id: TraderId(0), side, omega, timelimit, inv: 0 }
    }

    pub fn is_active(&self, t: SimTime) -> bool {
        t < self.timelimit
    }
}

pub fn fundamental_step(state: &FundamentalTraderState, t: SimTime) -> Vec<Order> {
    if !t.is_trader_step() || !state.is_active(t) || state.omega == 0 {
        return Vec::new();
    }
    vec![match state.side {
        FundamentalSide::SellSide => Order::sell(state.omega, state.id),
        FundamentalSide::BuySide => Order::buy(state.omega, state.id),
    }]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::OrderKind;

    const S: PriceScale = PriceScale::DEFAULT;

    fn ticks(v: i64) -> Price {
        Price::from_ticks(v, S)
    }

    fn mm(inv: i64) -> MarketMakerState {
        MarketMakerState::new(TraderId(1), inv, 10, -10, ticks(4))
    }

    #[test]
    fn pricing_at_the_anchor_inventories() {
        let (bid, _) = bid_ask_prices(ticks(98), ticks(102), &mm(-9), S);
        assert_eq!(bid, ticks(99));
        let (_, ask) = bid_ask_prices(ticks(98), ticks(102), &mm(9), S);
        assert_eq!(ask, ticks(101));
        // The other extreme of each side is offset by the full zeta.
        let (bid, ask) = bid_ask_prices(ticks(98), ticks(102), &mm(9), S);
        assert_eq!(bid, ticks(95));
        assert_eq!(ask, ticks(101));
        let (_, ask) = bid_ask_prices(ticks(98), ticks(102), &mm(-9), S);
        assert_eq!(ask, ticks(105));
    }

    #[test]
    fn pricing_at_zero_inventory() {
        let (bid, ask) = bid_ask_prices(ticks(98), ticks(102), &mm(0), S);
        assert_eq!((bid, ask), (ticks(97), ticks(103)));
    }

    #[test]
    fn pricing_rounds_half_away_from_zero() {
        // mid = 0.5 sub-tick, r = 1/2, zeta = 0, tick = 1 sub-tick:
        // bid = -0.5 -> floored to 0; ask = 1.5 -> 2
        let s = PriceScale(1);
        let state = MarketMakerState::new(TraderId(1), 0, 10, -10, Price(0));
        assert_eq!(bid_ask_prices(Price(0), Price(1), &state, s), (Price(0), Price(2)));
        // mid = 2.5, bid = 1.5 -> 2, ask = 3.5 -> 4
        assert_eq!(bid_ask_prices(Price(2), Price(3), &state, s), (Price(2), Price(4)));
        assert_eq!(div_round_half_away(-3, 2), -2);
        assert_eq!(div_round_half_away(-1, 3), 0);
    }

    #[test]
    fn pricing_floors_at_zero() {
        let (bid, ask) = bid_ask_prices(Price(0), Price(0), &mm(0), S);
        assert_eq!(bid, Price(0));
        assert_eq!(ask, ticks(3));
    }

    #[test]
    fn resting_size_examples() {
        let mut rng = Rng::new(0);
        assert_eq!(resting_sizes(&mm(2), &mut rng), (7, 11));
        assert_eq!(resting_sizes(&mm(9), &mut rng).0, 0);
        assert_eq!(resting_sizes(&mm(10), &mut rng), (0, max_ask_size(10, -10)));
        assert_eq!(resting_sizes(&mm(-9), &mut rng), (18, 0));
        assert_eq!(resting_sizes(&mm(-10), &mut rng), (19, 0));
    }

    #[test]
    fn uniform_sizes_stay_under_the_deterministic_bound() {
        let mut rng = Rng::new(7);
        let state = mm(3).with_sizing(SizingMode::UniformRandom);
        let mut seen_bid = [false; 7];
        for _ in 0..500 {
            let (b, a) = resting_sizes(&state, &mut rng);
            assert!(b <= 6 && a <= 12);
            seen_bid[b as usize] = true;
        }
        assert!(seen_bid.iter().all(|&s| s));
    }

    #[test]
    fn executable_size_examples() {
        assert_eq!(executable_sizes(&mm(12)), (0, 10));
        assert_eq!(executable_sizes(&mm(-10)), (10, 0));
        assert_eq!(executable_sizes(&mm(0)), (0, 0));
        let asym = MarketMakerState::new(TraderId(1), -7, 5, -7, Price(0));
        assert_eq!(executable_sizes(&asym), (7, 0));
    }

    #[test]
    fn inventory_updates() {
        let me = TraderId(1);
        let bids = ExecutionBatch { xbids: vec![Order::bid(10, ticks(1), me)], ..Default::default() };
        assert_eq!(update_inventory(&mm(-8), &bids).inv, 2);
        assert_eq!(update_inventory(&mm(5), &ExecutionBatch::default()).inv, 5);
        let sells = ExecutionBatch { xsells: vec![Order::sell(10, me)], ..Default::default() };
        assert_eq!(update_inventory(&mm(12), &sells).inv, 2);
        let other = ExecutionBatch { xsells: vec![Order::sell(10, TraderId(2))], ..Default::default() };
        assert_eq!(update_inventory(&mm(12), &other).inv, 12);
    }

    #[test]
    fn market_maker_orders() {
        let mut rng = Rng::new(1);
        let (bb, ba) = (ticks(98), ticks(102));
        let panic = market_maker_step(&mm(18), SimTime(0), bb, ba, &mut rng, S);
        assert_eq!(panic, vec![Order::sell(10, TraderId(1))]);

        let stable = market_maker_step(&mm(-8), SimTime(4), bb, ba, &mut rng, S);
        assert_eq!(stable.len(), 2);
        assert_eq!((stable[0].kind, stable[0].size), (OrderKind::Bid, 17));
        assert_eq!((stable[1].kind, stable[1].size), (OrderKind::Ask, 1));

        assert!(market_maker_step(&mm(0), SimTime(3), bb, ba, &mut rng, S).is_empty());
        let top = market_maker_step(&mm(9), SimTime(2), bb, ba, &mut rng, S);
        assert!(top.iter().all(|o| o.kind == OrderKind::Ask));
    }

    #[test]
    fn fundamental_orders() {
        let seller = FundamentalTraderState::new(FundamentalSide::SellSide, 100, SimTime(10));
        assert_eq!(fundamental_step(&seller, SimTime(4)), vec![Order::sell(100, TraderId(0))]);
        assert!(fundamental_step(&seller, SimTime(10)).is_empty());
        assert!(fundamental_step(&seller, SimTime(12)).is_empty());
        assert!(fundamental_step(&seller, SimTime(5)).is_empty());
        let buyer = FundamentalTraderState::new(FundamentalSide::BuySide, 3, SimTime(10));
        assert_eq!(fundamental_step(&buyer, SimTime(0)), vec![Order::buy(3, TraderId(0))]);
    }

    #[test]
    fn limit_validation() {
        assert!(mm(0).check_limits().is_ok());
        let flat = MarketMakerState::new(TraderId(1), 0, 1, -1, Price(0));
        assert!(flat.check_limits().unwrap_err().contains("degenerate"));
        let wrong = MarketMakerState::new(TraderId(1), 0, 5, 2, Price(0));
        assert!(wrong.check_limits().is_err());
    }
}
