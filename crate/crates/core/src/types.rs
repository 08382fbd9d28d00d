//! Domain types shared by the exchange, the agents and the scheduler.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a trader. Fundamental traders use id 0 by convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TraderId(pub u32);

impl fmt::Display for TraderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Discrete simulation step. Traders speak on even steps, the exchange on odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimTime(pub u64);

impl SimTime {
    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn is_trader_step(self) -> bool {
        self.is_even()
    }

    pub fn is_exchange_step(self) -> bool {
        !self.is_even()
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of sub-ticks in one price tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PriceScale(pub i64);

impl PriceScale {
    pub const DEFAULT: PriceScale = PriceScale(10_000);

    pub fn tick(self) -> Price {
        Price(self.0)
    }
}

impl Default for PriceScale {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Fixed-point price counted in sub-ticks.
///
/// The scale is a run-wide setting and is not carried by the value; all
/// arithmetic stays in integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Price(pub i64);

impl Price {
    pub const ZERO: Price = Price(0);

    pub fn from_ticks(ticks: i64, scale: PriceScale) -> Price {
        Price(ticks * scale.0)
    }

    pub fn sub_ticks(self) -> i64 {
        self.0
    }

    /// Parses a decimal tick quantity such as `"99"` or `"99.25"`.
    ///
    /// Fails if the value has more fractional precision than the scale can
    /// represent exactly.
    pub fn parse_ticks(text: &str, scale: PriceScale) -> Result<Price, String> {
        let text = text.trim();
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if int_part.is_empty() || !all_digits(int_part) || !all_digits(frac_part) {
            return Err(format!("`{text}` is not a decimal number"));
        }
        let int: i64 = int_part.parse().map_err(|_| format!("`{text}` is out of range"))?;
        let mut value = int.checked_mul(scale.0).ok_or_else(|| format!("`{text}` is out of range"))?;
        if !frac_part.is_empty() {
            let digits = frac_part.trim_end_matches('0');
            let denom = 10i64
                .checked_pow(digits.len() as u32)
                .ok_or_else(|| format!("`{text}` has too many decimal places"))?;
            let frac: i64 =
                if digits.is_empty() { 0 } else { digits.parse().map_err(|_| format!("`{text}` is out of range"))? };
            let scaled = frac as i128 * scale.0 as i128;
            if scaled % denom as i128 != 0 {
                return Err(format!("`{text}` is not representable with {} sub-ticks per tick", scale.0));
            }
            value += (scaled / denom as i128) as i64;
        }
        Ok(Price(if negative { -value } else { value }))
    }

    /// Renders the price in ticks, using as many decimals as the scale needs.
    pub fn to_ticks_string(self, scale: PriceScale) -> String {
        let s = scale.0;
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let int = abs / s as u64;
        let frac = abs % s as u64;
        if frac == 0 {
            return format!("{sign}{int}");
        }
        let width = decimal_width(s);
        let mut digits = format!("{frac:0width$}");
        while digits.ends_with('0') {
            digits.pop();
        }
        format!("{sign}{int}.{digits}")
    }

    pub fn to_ticks_f64(self, scale: PriceScale) -> f64 {
        self.0 as f64 / scale.0 as f64
    }
}

fn decimal_width(scale: i64) -> usize {
    let mut width = 0;
    let mut v = scale;
    while v > 1 {
        v /= 10;
        width += 1;
    }
    width.max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    /// Resting buy limit order.
    Bid,
    /// Resting sell limit order.
    Ask,
    /// Executable buy.
    Buy,
    /// Executable sell.
    Sell,
}

impl OrderKind {
    pub fn is_resting(self) -> bool {
        matches!(self, OrderKind::Bid | OrderKind::Ask)
    }

    /// Single-letter label used in flow tables.
    pub fn label(self) -> char {
        match self {
            OrderKind::Bid => 'b',
            OrderKind::Ask => 'a',
            OrderKind::Buy => 'B',
            OrderKind::Sell => 'S',
        }
    }

    pub fn from_label(c: char) -> Option<OrderKind> {
        match c {
            'b' => Some(OrderKind::Bid),
            'a' => Some(OrderKind::Ask),
            'B' => Some(OrderKind::Buy),
            'S' => Some(OrderKind::Sell),
            _ => None,
        }
    }

    /// Sign of the inventory change for the order's owner when it executes.
    pub fn inventory_sign(self) -> i64 {
        match self {
            OrderKind::Bid | OrderKind::Buy => 1,
            OrderKind::Ask | OrderKind::Sell => -1,
        }
    }
}

/// An order or an executed fill: (kind, size, price, trader).
///
/// Executable orders carry price zero until they execute; in an
/// [`ExecutionBatch`] the price is the execution price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Order {
    pub kind: OrderKind,
    pub size: u64,
    pub price: Price,
    pub trader: TraderId,
}

impl Order {
    pub fn new(kind: OrderKind, size: u64, price: Price, trader: TraderId) -> Order {
        Order { kind, size, price, trader }
    }

    pub fn bid(size: u64, price: Price, trader: TraderId) -> Order {
        Order::new(OrderKind::Bid, size, price, trader)
    }

    pub fn ask(size: u64, price: Price, trader: TraderId) -> Order {
        Order::new(OrderKind::Ask, size, price, trader)
    }

    pub fn buy(size: u64, trader: TraderId) -> Order {
        Order::new(OrderKind::Buy, size, Price::ZERO, trader)
    }

    pub fn sell(size: u64, trader: TraderId) -> Order {
        Order::new(OrderKind::Sell, size, Price::ZERO, trader)
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }
}

/// Trade confirmations produced by one matching step, split by order kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExecutionBatch {
    pub xbids: Vec<Order>,
    pub xasks: Vec<Order>,
    pub xbuys: Vec<Order>,
    pub xsells: Vec<Order>,
}

impl ExecutionBatch {
    pub fn is_empty(&self) -> bool {
        self.xbids.is_empty() && self.xasks.is_empty() && self.xbuys.is_empty() && self.xsells.is_empty()
    }

    pub fn of_kind(&self, kind: OrderKind) -> &[Order] {
        match kind {
            OrderKind::Bid => &self.xbids,
            OrderKind::Ask => &self.xasks,
            OrderKind::Buy => &self.xbuys,
            OrderKind::Sell => &self.xsells,
        }
    }

    pub fn of_kind_mut(&mut self, kind: OrderKind) -> &mut Vec<Order> {
        match kind {
            OrderKind::Bid => &mut self.xbids,
            OrderKind::Ask => &mut self.xasks,
            OrderKind::Buy => &mut self.xbuys,
            OrderKind::Sell => &mut self.xsells,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Order> {
        self.xbids.iter().chain(&self.xasks).chain(&self.xbuys).chain(&self.xsells)
    }

    /// The confirmations addressed to one trader.
    pub fn for_trader(&self, trader: TraderId) -> ExecutionBatch {
        let pick = |v: &Vec<Order>| v.iter().filter(|o| o.trader == trader).copied().collect();
        ExecutionBatch {
            xbids: pick(&self.xbids),
            xasks: pick(&self.xasks),
            xbuys: pick(&self.xbuys),
            xsells: pick(&self.xsells),
        }
    }

    /// Only the confirmations of a single kind.
    pub fn only(&self, kind: OrderKind) -> ExecutionBatch {
        let mut out = ExecutionBatch::default();
        out.of_kind_mut(kind).extend_from_slice(self.of_kind(kind));
        out
    }

    pub fn extend(&mut self, other: &ExecutionBatch) {
        self.xbids.extend_from_slice(&other.xbids);
        self.xasks.extend_from_slice(&other.xasks);
        self.xbuys.extend_from_slice(&other.xbuys);
        self.xsells.extend_from_slice(&other.xsells);
    }

    /// Net inventory change these confirmations imply for `trader`.
    pub fn inventory_delta(&self, trader: TraderId) -> i64 {
        sum_sizes_for_trader(trader, &self.xbids) as i64 + sum_sizes_for_trader(trader, &self.xbuys) as i64
            - sum_sizes_for_trader(trader, &self.xasks) as i64
            - sum_sizes_for_trader(trader, &self.xsells) as i64
    }
}

/// Sum of the sizes of the orders in `orders` that belong to `trader`.
pub fn sum_sizes_for_trader(trader: TraderId, orders: &[Order]) -> u64 {
    orders.iter().filter(|o| o.trader == trader).map(|o| o.size).sum()
}

/// Total size of a sequence of orders, regardless of owner.
pub fn total_size(orders: &[Order]) -> u64 {
    orders.iter().map(|o| o.size).sum()
}
