//! A single market maker facing a seller that takes every bid. Without delay
//! it never reaches its limits; with a two-step confirmation delay it keeps
//! bidding on stale inventory and overshoots into panic.

use mm_coupling::analysis::{self, Verdict};
use mm_coupling::config::DelayConfig;
use mm_coupling::{harness, presets, TraderId};

fn main() {
    for delay in [0, 1, 2] {
        let mut config = presets::single_mm_delay();
        config.delay = DelayConfig::Uniform(delay);
        config.steps = 12;
        let trace = harness::run(&config.to_scenario().unwrap()).unwrap();

        let path: Vec<String> = trace.records.iter().step_by(2).map(|r| r.inv_before[1].to_string()).collect();
        let verdict = match analysis::stability_verdict(&trace, TraderId(1)) {
            Verdict::AlwaysStable => "stable".to_string(),
            Verdict::PanickedAt(t) => format!("panicked at t={t}"),
        };
        println!("delay {delay}: inventory at even steps [{}] -> {verdict}", path.join(", "));
    }

    // Only bid confirmations are late here, which is enough to cause the overshoot.
    let mut config = presets::single_mm_delay();
    config.delay = DelayConfig::PerKind { bids: 2, asks: 0, buys: 0, sells: 0 };
    let trace = harness::run(&config.to_scenario().unwrap()).unwrap();
    println!("bid-only delay of 2: {:?}", analysis::stability_verdict(&trace, TraderId(1)));
}
