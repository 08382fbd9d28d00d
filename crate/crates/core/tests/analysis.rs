use proptest::prelude::*;

use mm_coupling::analysis::{self, comparable_state, Verdict};
use mm_coupling::config::{DelayConfig, ScenarioConfig, TraderConfig};
use mm_coupling::harness::{self, Trace};
use mm_coupling::{presets, Order, OrderKind, Price, PriceScale, SimTime, TraderId};

fn run(c: &ScenarioConfig) -> Trace {
    harness::run(&c.to_scenario().unwrap()).unwrap()
}

fn two_makers(a: i64, b: i64, delay: u64, steps: u64) -> ScenarioConfig {
    let mut c = presets::table1();
    c.traders = vec![TraderConfig::market_maker(10, -10, a), TraderConfig::market_maker(10, -10, b)];
    c.delay = DelayConfig::Uniform(delay);
    c.steps = steps;
    c
}

/// Order flow without prices. Quotes drift with the best prices, which are
/// not part of the comparable state.
fn flows(orders: &[Order]) -> Vec<(OrderKind, TraderId, u64)> {
    orders.iter().map(|o| (o.kind, o.trader, o.size)).collect()
}

/// A reported cycle must hold exactly, and the segment must keep repeating
/// for three more periods when the run is extended.
fn assert_cycle_is_sound(c: &ScenarioConfig) {
    let trace = run(c);
    let cycle = analysis::detect_cycle(&trace);
    if !cycle.found {
        return;
    }
    let (f, p) = (cycle.first_index as usize, cycle.period as usize);
    assert_eq!(comparable_state(&trace, f), comparable_state(&trace, f + p));

    let mut longer = c.clone();
    longer.steps = (f + 4 * p) as u64 + 1;
    let long = run(&longer);
    for k in 0..3 * p {
        let (a, b) = (&long.records[f + k], &long.records[f + k + p]);
        assert_eq!(a.inv_before, b.inv_before, "step {}", f + k);
        assert_eq!(comparable_state(&long, f + k), comparable_state(&long, f + k + p), "step {}", f + k);
        assert_eq!(flows(&a.orders), flows(&b.orders), "step {}", f + k);
        let fills =
            |r: &harness::StepRecord| r.trades.iter().map(|t| (t.buyer(), t.seller(), t.size())).collect::<Vec<_>>();
        assert_eq!(fills(a), fills(b), "step {}", f + k);
    }
}

#[test]
fn table1_cycle_is_sound() {
    assert_cycle_is_sound(&presets::table1());
}

#[test]
fn quiescent_market_has_period_two() {
    let trace = run(&two_makers(0, 0, 2, 10));
    let cycle = analysis::detect_cycle(&trace);
    assert!(cycle.found);
    assert_eq!(cycle.period, 2);
}

#[test]
fn delay_panic_does_not_repeat_early() {
    let mut c = presets::single_mm_delay();
    c.steps = 6;
    assert!(!analysis::detect_cycle(&run(&c)).found);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reported_cycles_replay(a in -20i64..=20, b in -20i64..=20, delay in 0u64..=3) {
        assert_cycle_is_sound(&two_makers(a, b, delay, 120));
    }

    #[test]
    fn flow_table_round_trips(a in -20i64..=20, b in -20i64..=20, delay in 0u64..=3, from in 0u64..10, len in 0u64..20) {
        let trace = run(&two_makers(a, b, delay, 30));
        let text = analysis::flow_table(&trace, from, from + len);
        let parsed = analysis::parse_flow_table(&text).unwrap();
        prop_assert_eq!(parsed, analysis::flow_rows(&trace, from, from + len));
    }
}

#[test]
fn empty_flow_window_is_header_only() {
    let trace = run(&two_makers(0, 0, 2, 0));
    let text = analysis::flow_table(&trace, 0, 10);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("time"));
    assert!(analysis::parse_flow_table(&text).unwrap().is_empty());
}

#[test]
fn table1_flow_rows_match_the_oscillation() {
    let trace = run(&presets::table1());
    let rows = analysis::flow_rows(&trace, 0, 12);
    let inv: Vec<(u64, Vec<i64>)> = rows.iter().map(|r| (r.t.0, r.inv_before.clone())).collect();
    assert_eq!(inv[0].1, vec![-8, 18]);
    assert_eq!(inv[4].1, vec![2, 8]);
    assert_eq!(inv[6].1, vec![12, -2]);
    assert_eq!(inv[12].1, vec![-8, 18]);
}

#[test]
fn verdicts() {
    let mut calm = presets::single_mm_delay();
    calm.delay = DelayConfig::Uniform(0);
    calm.steps = 200;
    assert_eq!(analysis::stability_verdict(&run(&calm), TraderId(1)), Verdict::AlwaysStable);

    let delayed = run(&presets::single_mm_delay());
    assert_eq!(analysis::stability_verdict(&delayed, TraderId(1)), Verdict::PanickedAt(SimTime(6)));

    let idle = run(&two_makers(0, 0, 2, 20));
    assert_eq!(analysis::stability_verdict(&idle, TraderId(2)), Verdict::AlwaysStable);
    assert_eq!(analysis::stability_verdict(&idle, TraderId(9)), Verdict::AlwaysStable);
}

#[test]
fn price_series_starts_at_mid_and_carries_forward() {
    let idle = run(&two_makers(0, 0, 2, 20));
    let mid = Price::from_ticks(100, PriceScale::DEFAULT);
    assert!(analysis::price_series(&idle).iter().all(|&(_, p)| p == mid));

    let trace = run(&presets::single_mm_delay());
    let series = analysis::price_series(&trace);
    let first = trace.records.iter().position(|r| r.last_price.is_some()).unwrap();
    assert!(series[..first].iter().all(|&(_, p)| p == mid));
    for (r, &(t, p)) in trace.records.iter().zip(&series).skip(first) {
        assert_eq!(r.t, t);
        match r.last_price {
            Some(lp) => assert_eq!(p, lp),
            None => assert_eq!(p, series[t.0 as usize - 1].1),
        }
    }
}

#[test]
fn pressure_is_zero_without_executables() {
    let idle = run(&two_makers(0, 0, 2, 20));
    assert_eq!(analysis::mean_pressure(&idle), 0.0);
    assert_eq!(analysis::predicted_direction(&idle), analysis::Direction::Indeterminate);
    assert_eq!(analysis::realized_direction(&idle), analysis::Direction::Indeterminate);
}
