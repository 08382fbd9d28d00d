//! Deterministic discrete-time simulation of inventory-constrained market
//! makers trading through a fill-and-kill limit order book, with delayed
//! trade confirmations.
//!
//! The pieces, bottom up:
//!
//! - [`types`]: orders, fixed-point prices, execution batches.
//! - [`orderbook`]: price-time insertion, matching, and an independent
//!   execution-price recursion used to check the matcher.
//! - [`agents`]: market-maker pricing, sizing and panic logic; fundamental traders.
//! - [`harness`]: the step scheduler, delay lines and seeded arrival shuffling.
//! - [`analysis`]: flow tables, cycle detection, liquidity pressure, price series.
//! - [`config`], [`presets`], [`output`]: scenario files and run outputs.
//!
//! ```
//! use mm_coupling::{analysis, harness, presets};
//!
//! let scenario = presets::table1().to_scenario().unwrap();
//! let trace = harness::run(&scenario).unwrap();
//! assert_eq!(analysis::detect_cycle(&trace).period, 12);
//! ```

pub mod agents;
pub mod analysis;
pub mod config;
pub mod harness;
pub mod orderbook;
pub mod output;
pub mod presets;
pub mod types;

pub use types::{ExecutionBatch, Order, OrderKind, Price, PriceScale, SimTime, TraderId};
