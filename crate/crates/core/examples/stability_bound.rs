//! Sweeps limits and starting inventories for one market maker with instant
//! confirmations and a seller hitting every bid. The inventory never leaves
//! `[LL + 1, UL - 1]`.

use mm_coupling::agents::FundamentalSide;
use mm_coupling::config::{DelayConfig, TraderConfig};
use mm_coupling::{harness, presets};

fn main() {
    for ul in [3, 5, 10, 25] {
        let mut lowest = i64::MAX;
        let mut highest = i64::MIN;
        for start in -ul + 1..ul {
            let mut config = presets::single_mm_delay();
            config.steps = 2_000;
            config.delay = DelayConfig::Uniform(0);
            config.traders = vec![
                TraderConfig::fundamental(FundamentalSide::SellSide, 1_000),
                TraderConfig::market_maker(ul, -ul, start),
            ];
            let trace = harness::run(&config.to_scenario().unwrap()).unwrap();
            for r in &trace.records {
                lowest = lowest.min(r.inv_before[1]);
                highest = highest.max(r.inv_before[1]);
            }
        }
        println!("UL={ul:>2}: inventory stayed within [{lowest}, {highest}], limits ({}, {ul})", -ul);
    }
}
