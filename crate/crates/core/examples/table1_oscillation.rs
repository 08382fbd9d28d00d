//! Two market makers with a two-step confirmation delay trade the same
//! inventory back and forth forever. Prints the flow table for one period
//! and the detected cycle.

use mm_coupling::{analysis, harness, presets};

fn main() {
    let scenario = presets::table1().to_scenario().expect("preset is valid");
    let trace = harness::run(&scenario).expect("no invariant violations");

    print!("{}", analysis::flow_table(&trace, 0, 12));

    let cycle = analysis::detect_cycle(&trace);
    println!();
    println!("state first repeats after {} steps (from t={})", cycle.period, cycle.first_index);
}
