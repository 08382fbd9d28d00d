//! Parses a scenario written in TOML, runs it, and writes the output files to
//! a directory under the system temp dir.

use mm_coupling::config::parse_config;
use mm_coupling::output::run_scenario;

const SCENARIO: &str = r#"
steps = 40
seed = 11
shuffle = true
initial_best_bid = "99.5"
initial_best_ask = "100.5"
delay = { bids = 1, asks = 1, buys = 2, sells = 2 }

[[traders]]
role = "market_maker"
upper_limit = 10
lower_limit = -10
initial_inventory = 14

[[traders]]
role = "market_maker"
upper_limit = 8
lower_limit = -8
initial_inventory = -3
zeta = "2.5"
sizing = "uniform_random"
"#;

fn main() {
    let config = parse_config(SCENARIO).unwrap_or_else(|e| panic!("{e}"));
    let out = std::env::temp_dir().join("mm-coupling-scenario-file");
    let summary = run_scenario(&config, &out, Some((0, 8))).unwrap_or_else(|e| panic!("{e}"));
    println!("{summary}");
    println!("wrote {}", out.display());
    print!("{}", std::fs::read_to_string(out.join("flow.txt")).unwrap());
}
