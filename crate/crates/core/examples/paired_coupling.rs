//! Five identical market makers, two long, two short, one flat, with shuffled
//! arrivals. Most seeds leave someone parked one below the upper limit while
//! the others either go quiet or keep oscillating.

use mm_coupling::{analysis, harness, presets};

fn main() {
    for seed in 0..8 {
        let mut config = presets::paired5();
        config.seed = seed;
        let trace = harness::run(&config.to_scenario().unwrap()).unwrap();
        let last = trace.records.last().unwrap();
        let trades_late: usize = trace.records.iter().rev().take(12).map(|r| r.trades.len()).sum();

        let mut longer = config.clone();
        longer.steps = 400;
        let cycle = analysis::detect_cycle(&harness::run(&longer.to_scenario().unwrap()).unwrap());
        println!(
            "seed {seed}: final {:?}, {trades_late} fills in the last 12 steps, repeats every {} steps",
            last.inv_after, cycle.period
        );
    }
}
