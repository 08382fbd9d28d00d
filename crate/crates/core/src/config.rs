//! Scenario files.
//!
//! Scenarios are TOML documents. Prices are given in ticks, either as an
//! integer (`99`) or as a decimal string (`"99.25"`), and converted to
//! sub-ticks with `price_scale`. See the README for the full schema.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::agents::{FundamentalSide, FundamentalTraderState, MarketMakerState, SizingMode};
use crate::harness::{Agent, Delays, Scenario, TraderSetup};
use crate::types::{Price, PriceScale, SimTime, TraderId};

/// A tick quantity as written in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TickValue {
    Int(i64),
    Text(String),
}

impl TickValue {
    pub fn to_price(&self, scale: PriceScale) -> Result<Price, String> {
        match self {
            TickValue::Int(v) => {
                v.checked_mul(scale.0).map(Price).ok_or_else(|| format!("{v} ticks overflows the price range"))
            }
            TickValue::Text(s) => Price::parse_ticks(s, scale),
        }
    }
}

impl From<i64> for TickValue {
    fn from(v: i64) -> Self {
        TickValue::Int(v)
    }
}

impl Serialize for TickValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TickValue::Int(v) => s.serialize_i64(*v),
            TickValue::Text(t) => s.serialize_str(t),
        }
    }
}

impl<'de> Deserialize<'de> for TickValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct TickVisitor;
        impl Visitor<'_> for TickVisitor {
            type Value = TickValue;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer number of ticks or a decimal string such as \"99.5\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<TickValue, E> {
                Ok(TickValue::Int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<TickValue, E> {
                i64::try_from(v).map(TickValue::Int).map_err(|_| E::custom("tick value out of range"))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<TickValue, E> {
                Err(E::custom(format!("fractional prices must be quoted strings (write \"{v}\")")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<TickValue, E> {
                Ok(TickValue::Text(v.to_string()))
            }
        }
        d.deserialize_any(TickVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DelayConfig {
    Uniform(u64),
    PerKind { bids: u64, asks: u64, buys: u64, sells: u64 },
}

impl Default for DelayConfig {
    fn default() -> Self {
        DelayConfig::Uniform(0)
    }
}

impl DelayConfig {
    pub fn delays(&self) -> Delays {
        match *self {
            DelayConfig::Uniform(d) => Delays::uniform(d),
            DelayConfig::PerKind { bids, asks, buys, sells } => Delays { bids, asks, buys, sells },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    MarketMaker,
    Fundamental,
}

/// One `[[traders]]` entry. Which fields apply depends on `role`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraderConfig {
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_limit: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_limit: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_inventory: Option<i64>,
    /// Price skew in ticks; defaults to half the price band.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<TickValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizing: Option<SizingMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<FundamentalSide>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timelimit: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_on_panic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub every: Option<u32>,
}

impl TraderConfig {
    pub fn market_maker(upper_limit: i64, lower_limit: i64, initial_inventory: i64) -> Self {
        TraderConfig {
            role: Role::MarketMaker,
            upper_limit: Some(upper_limit),
            lower_limit: Some(lower_limit),
            initial_inventory: Some(initial_inventory),
            zeta: None,
            sizing: None,
            side: None,
            omega: None,
            timelimit: None,
            exit_on_panic: None,
            every: None,
        }
    }

    pub fn fundamental(side: FundamentalSide, omega: u64) -> Self {
        TraderConfig {
            role: Role::Fundamental,
            upper_limit: None,
            lower_limit: None,
            initial_inventory: None,
            zeta: None,
            sizing: None,
            side: Some(side),
            omega: Some(omega),
            timelimit: None,
            exit_on_panic: None,
            every: None,
        }
    }
}

fn default_scale() -> i64 {
    PriceScale::DEFAULT.0
}

fn default_band() -> TickValue {
    TickValue::Int(8)
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Name of the preset this scenario was derived from, if any. Informational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub steps: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub shuffle: bool,
    #[serde(default = "default_scale")]
    pub price_scale: i64,
    pub initial_best_bid: TickValue,
    pub initial_best_ask: TickValue,
    /// Default zeta is half of this band.
    #[serde(default = "default_band")]
    pub price_band: TickValue,
    #[serde(default)]
    pub delay: DelayConfig,
    #[serde(default = "yes")]
    pub assertions: bool,
    #[serde(default)]
    pub traders: Vec<TraderConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub reason: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("invalid scenario:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<FieldError>),
    #[error("unknown preset `{0}` (available: {list})", list = crate::presets::PRESET_NAMES.join(", "))]
    UnknownPreset(String),
}

/// Parses and validates a scenario file.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let config: ScenarioConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    config.to_scenario()?;
    Ok(config)
}

/// Renders a scenario in the file format accepted by [`parse_config`].
pub fn render_config(config: &ScenarioConfig) -> String {
    toml::to_string(config).expect("scenario config serializes to TOML")
}

impl ScenarioConfig {
    /// Validates the configuration and builds a runnable [`Scenario`]. All
    /// problems are reported together.
    pub fn to_scenario(&self) -> Result<Scenario, ConfigError> {
        let mut errors = Vec::new();
        let mut err = |field: String, reason: String| errors.push(FieldError { field, reason });

        let scale = PriceScale(self.price_scale);
        if self.price_scale <= 0 {
            err("price_scale".into(), "must be a positive number of sub-ticks per tick".into());
        }
        let scale_ok = self.price_scale > 0;
        let price = |field: &str, v: &TickValue, err: &mut dyn FnMut(String, String)| -> Price {
            if !scale_ok {
                return Price::ZERO;
            }
            v.to_price(scale).unwrap_or_else(|reason| {
                err(field.to_string(), reason);
                Price::ZERO
            })
        };
        let bb = price("initial_best_bid", &self.initial_best_bid, &mut err);
        let ba = price("initial_best_ask", &self.initial_best_ask, &mut err);
        let band = price("price_band", &self.price_band, &mut err);
        if bb.0 < 0 {
            err("initial_best_bid".into(), "must not be negative".into());
        }
        if scale_ok && bb >= ba {
            err("initial_best_ask".into(), "initial_best_bid must be below initial_best_ask".into());
        }
        if band.0 < 0 {
            err("price_band".into(), "must not be negative".into());
        }

        let mut setups = Vec::new();
        let mut next_mm_id = 1u32;
        let mut fundamentals = 0;
        for (i, tc) in self.traders.iter().enumerate() {
            let at = |f: &str| format!("traders[{i}].{f}");
            let every = tc.every.unwrap_or(1);
            if every == 0 {
                err(at("every"), "must be at least 1".into());
            }
            let forbid = |present: bool, name: &str, err: &mut dyn FnMut(String, String)| {
                if present {
                    err(at(name), format!("not allowed for role {:?}", tc.role));
                }
            };
            match tc.role {
                Role::MarketMaker => {
                    forbid(tc.side.is_some(), "side", &mut err);
                    forbid(tc.omega.is_some(), "omega", &mut err);
                    forbid(tc.timelimit.is_some(), "timelimit", &mut err);
                    forbid(tc.exit_on_panic.is_some(), "exit_on_panic", &mut err);
                    let (Some(ul), Some(ll)) = (tc.upper_limit, tc.lower_limit) else {
                        if tc.upper_limit.is_none() {
                            err(at("upper_limit"), "required for a market maker".into());
                        }
                        if tc.lower_limit.is_none() {
                            err(at("lower_limit"), "required for a market maker".into());
                        }
                        continue;
                    };
                    if ul <= 0 {
                        err(at("upper_limit"), "must be positive".into());
                    }
                    if ll >= 0 {
                        err(at("lower_limit"), "must be negative".into());
                    }
                    if ul - ll - 2 <= 0 {
                        err(at("lower_limit"), format!("degenerate pricing denominator: UL-LL-2 = {}", ul - ll - 2));
                    }
                    let zeta = match &tc.zeta {
                        Some(z) => price(&at("zeta"), z, &mut err),
                        None => Price(band.0 / 2),
                    };
                    if zeta.0 < 0 {
                        err(at("zeta"), "must not be negative".into());
                    }
                    let id = TraderId(next_mm_id);
                    next_mm_id += 1;
                    let state = MarketMakerState::new(id, tc.initial_inventory.unwrap_or(0), ul, ll, zeta)
                        .with_sizing(tc.sizing.unwrap_or_default());
                    setups.push(TraderSetup { agent: Agent::MarketMaker(state), every });
                }
                Role::Fundamental => {
                    forbid(tc.upper_limit.is_some(), "upper_limit", &mut err);
                    forbid(tc.lower_limit.is_some(), "lower_limit", &mut err);
                    forbid(tc.initial_inventory.is_some(), "initial_inventory", &mut err);
                    forbid(tc.zeta.is_some(), "zeta", &mut err);
                    forbid(tc.sizing.is_some(), "sizing", &mut err);
                    fundamentals += 1;
                    if fundamentals > 1 {
                        err(at("role"), "at most one fundamental trader is supported".into());
                    }
                    let Some(side) = tc.side else {
                        err(at("side"), "required for a fundamental trader".into());
                        continue;
                    };
                    let Some(omega) = tc.omega else {
                        err(at("omega"), "required for a fundamental trader".into());
                        continue;
                    };
                    if omega == 0 {
                        err(at("omega"), "must be positive".into());
                    }
                    let timelimit = SimTime(tc.timelimit.unwrap_or(u64::MAX));
                    let state = FundamentalTraderState::new(side, omega, timelimit);
                    setups.push(TraderSetup {
                        agent: Agent::Fundamental { state, exit_on_panic: tc.exit_on_panic.unwrap_or(false) },
                        every,
                    });
                }
            }
        }

        if !errors.is_empty() {
            return Err(ConfigError::Invalid(errors));
        }
        setups.sort_by_key(|s| s.agent.id());
        Ok(Scenario {
            steps: self.steps,
            seed: self.seed,
            shuffle: self.shuffle,
            scale,
            initial_best_bid: bb,
            initial_best_ask: ba,
            delays: self.delay.delays(),
            traders: setups,
            assertions: self.assertions,
        })
    }
}
