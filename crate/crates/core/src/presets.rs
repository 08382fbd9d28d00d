//! Ready-made scenarios.
//!
//! The starting inventories and maker parameters of `paired5`, `hetero5-up`
//! and `hetero5-down` are choices made for this crate, picked so that the
//! behaviour each preset is named for shows up on most seeds.

use crate::agents::{FundamentalSide, SizingMode};
use crate::config::{DelayConfig, ScenarioConfig, TickValue, TraderConfig};

pub const PRESET_NAMES: [&str; 5] = ["table1", "single-mm-delay", "paired5", "hetero5-up", "hetero5-down"];

fn base(name: &str, steps: u64, delay: u64, shuffle: bool) -> ScenarioConfig {
    ScenarioConfig {
        preset: Some(name.to_string()),
        steps,
        seed: 0,
        shuffle,
        price_scale: 10_000,
        initial_best_bid: TickValue::Int(99),
        initial_best_ask: TickValue::Int(101),
        price_band: TickValue::Int(8),
        delay: DelayConfig::Uniform(delay),
        assertions: true,
        traders: Vec::new(),
    }
}

/// Two market makers, one in positive panic and one stable, with a two-step
/// confirmation delay: the twelve-step self-sustaining oscillation.
pub fn table1() -> ScenarioConfig {
    let mut c = base("table1", 24, 2, false);
    c.traders = vec![TraderConfig::market_maker(10, -10, -8), TraderConfig::market_maker(10, -10, 18)];
    c
}

/// One market maker at inventory -8 hit by a seller large enough to take
/// every bid, with confirmations delayed by two steps.
pub fn single_mm_delay() -> ScenarioConfig {
    let mut c = base("single-mm-delay", 20, 2, false);
    c.traders =
        vec![TraderConfig::fundamental(FundamentalSide::SellSide, 1_000), TraderConfig::market_maker(10, -10, -8)];
    c
}

/// Five identical market makers with a one-step delay and shuffled arrivals:
/// two start in positive panic, two in negative panic, one flat.
///
/// The long side outweighs the short side. Inventory is conserved, so with a
/// net-long book the makers that drift up to `UL - 1` stop bidding and stay
/// there, while the rest keep trading among themselves.
pub fn paired5() -> ScenarioConfig {
    let mut c = base("paired5", 100, 1, true);
    c.traders = [18, 24, -10, -12, 0].into_iter().map(|inv| TraderConfig::market_maker(10, -10, inv)).collect();
    c
}

struct Hetero {
    limit: i64,
    zeta: i64,
    sizing: SizingMode,
}

const HETERO: [Hetero; 5] = [
    Hetero { limit: 10, zeta: 4, sizing: SizingMode::Deterministic },
    Hetero { limit: 15, zeta: 6, sizing: SizingMode::UniformRandom },
    Hetero { limit: 8, zeta: 3, sizing: SizingMode::Deterministic },
    Hetero { limit: 12, zeta: 5, sizing: SizingMode::UniformRandom },
    Hetero { limit: 20, zeta: 2, sizing: SizingMode::UniformRandom },
];

fn hetero(name: &str, sign: i64) -> ScenarioConfig {
    let mut c = base(name, 500, 1, true);
    c.traders = HETERO
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let inv = if i < 2 { sign * (h.limit + 2) } else { 0 };
            let mut t = TraderConfig::market_maker(h.limit, -h.limit, inv);
            t.zeta = Some(TickValue::Int(h.zeta));
            t.sizing = Some(h.sizing);
            t
        })
        .collect();
    c
}

/// Five heterogeneous market makers, two starting in negative panic.
pub fn hetero5_up() -> ScenarioConfig {
    hetero("hetero5-up", -1)
}

/// Mirror of [`hetero5_up`]: two start in positive panic.
pub fn hetero5_down() -> ScenarioConfig {
    hetero("hetero5-down", 1)
}

pub fn preset(name: &str) -> Option<ScenarioConfig> {
    match name {
        "table1" => Some(table1()),
        "single-mm-delay" => Some(single_mm_delay()),
        "paired5" => Some(paired5()),
        "hetero5-up" => Some(hetero5_up()),
        "hetero5-down" => Some(hetero5_down()),
        _ => None,
    }
}
