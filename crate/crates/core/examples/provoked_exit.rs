//! Four heterogeneous market makers and a large seller who leaves as soon as
//! one maker panics while another is still stable. By then the delayed fills
//! have pushed most makers past their upper limits, and once the last stable
//! maker stops bidding nobody is left to sell to.

use mm_coupling::agents::{FundamentalSide, SizingMode};
use mm_coupling::config::{DelayConfig, TickValue, TraderConfig};
use mm_coupling::{analysis, harness, presets};

fn main() {
    let mut config = presets::hetero5_down();
    config.steps = 200;
    config.delay = DelayConfig::Uniform(2);
    config.traders = [(10, 4), (14, 6), (8, 3), (12, 5)]
        .into_iter()
        .map(|(limit, zeta)| {
            let mut t = TraderConfig::market_maker(limit, -limit, 0);
            t.zeta = Some(TickValue::Int(zeta));
            t.sizing = Some(SizingMode::Deterministic);
            t
        })
        .collect();
    let mut seller = TraderConfig::fundamental(FundamentalSide::SellSide, 30);
    seller.exit_on_panic = Some(true);
    config.traders.push(seller);

    let trace = harness::run(&config.to_scenario().unwrap()).unwrap();
    let last_sell = trace.records.iter().rev().find(|r| r.orders.iter().any(|o| o.trader.0 == 0));
    if let Some(r) = last_sell {
        println!("seller's last order at t={}", r.t);
    }
    for info in trace.header.traders.iter().filter(|t| t.market_maker) {
        println!("trader {}: {:?}", info.id, analysis::stability_verdict(&trace, info.id));
    }
    println!("final inventories {:?}", trace.records.last().unwrap().inv_after);
    let cycle = analysis::detect_cycle(&trace);
    if cycle.found {
        println!("state repeats every {} steps from t={}", cycle.period, cycle.first_index);
    }
}
