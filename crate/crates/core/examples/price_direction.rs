//! Heterogeneous market makers pushed out of balance in either direction.
//! The mean net liquidity pressure of each run is compared with where the
//! price ended up.

use mm_coupling::{analysis, harness, presets};

fn main() {
    for (name, config) in [("hetero5-up", presets::hetero5_up()), ("hetero5-down", presets::hetero5_down())] {
        println!("{name}");
        for seed in 0..5 {
            let mut config = config.clone();
            config.seed = seed;
            let trace = harness::run(&config.to_scenario().unwrap()).unwrap();
            let scale = trace.header.scale;
            let start = trace.header.initial_mid();
            let end = analysis::price_series(&trace).last().map_or(start, |&(_, p)| p);
            println!(
                "  seed {seed}: mean pressure {:+.4} ({:?}), price {} -> {}",
                analysis::mean_pressure(&trace),
                analysis::predicted_direction(&trace),
                start.to_ticks_string(scale),
                end.to_ticks_string(scale),
            );
        }
    }
}
