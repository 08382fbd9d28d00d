//! Inventory and flow tables.
//!
//! One row per step with the inventories in effect, the orders sent, the
//! fills produced, the fills whose confirmations are still travelling, the
//! confirmations delivered, and the inventories afterwards. Orders are
//! labelled `θ[kind,trader,time](size)` with kind in `b a B S`; a fill is
//! `(θ[..],θ[..])size`, resting side first. Cells are separated by `|`, items
//! inside a cell by a space, so the table parses back.

use std::fmt::Write as _;

use thiserror::Error;

use crate::harness::{Trace, Trade};
use crate::types::{OrderKind, SimTime, TraderId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlowLabel {
    pub kind: OrderKind,
    pub trader: TraderId,
    pub time: SimTime,
}

impl FlowLabel {
    fn render(&self) -> String {
        format!("θ[{},{},{}]", self.kind.label(), self.trader.0, self.time.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowRow {
    pub t: SimTime,
    pub inv_before: Vec<i64>,
    pub orders: Vec<(FlowLabel, u64)>,
    pub xorders: Vec<(FlowLabel, FlowLabel, u64)>,
    pub pending: Vec<(FlowLabel, FlowLabel, u64)>,
    pub dxorders: Vec<(FlowLabel, FlowLabel, u64)>,
    pub inv_after: Vec<i64>,
}

fn trade_labels(tr: &Trade, filled_at: u64) -> (FlowLabel, FlowLabel, u64) {
    let sent = SimTime(filled_at.saturating_sub(1));
    (
        FlowLabel { kind: tr.resting.kind, trader: tr.resting.trader, time: sent },
        FlowLabel { kind: tr.aggressive.kind, trader: tr.aggressive.trader, time: sent },
        tr.size(),
    )
}

fn render_trades(items: &[(FlowLabel, FlowLabel, u64)]) -> String {
    items.iter().map(|(r, a, size)| format!("({},{}){size}", r.render(), a.render())).collect::<Vec<_>>().join(" ")
}

/// Builds the rows for steps `from..=to` (clamped to the trace).
pub fn flow_rows(trace: &Trace, from: u64, to: u64) -> Vec<FlowRow> {
    let delays = trace.header.delays;
    let horizon = delays.max();
    let mut rows = Vec::new();
    for r in trace.records.iter().filter(|r| r.t.0 >= from && r.t.0 <= to) {
        let t = r.t.0;
        let mut pending = Vec::new();
        let mut dx = Vec::new();
        for past in trace.records.iter().filter(|p| p.t.0 + horizon >= t && p.t.0 <= t) {
            let s = past.t.0;
            for tr in &past.trades {
                let due_resting = s + delays.of(tr.resting.kind);
                let due_aggressive = s + delays.of(tr.aggressive.kind);
                if due_resting == t || due_aggressive == t {
                    dx.push(trade_labels(tr, s));
                } else if s < t && (due_resting > t || due_aggressive > t) {
                    pending.push(trade_labels(tr, s));
                }
            }
        }
        rows.push(FlowRow {
            t: r.t,
            inv_before: r.inv_before.clone(),
            orders: r
                .orders
                .iter()
                .map(|o| (FlowLabel { kind: o.kind, trader: o.trader, time: r.t }, o.size))
                .collect(),
            xorders: r.trades.iter().map(|tr| trade_labels(tr, t)).collect(),
            pending,
            dxorders: dx,
            inv_after: r.inv_after.clone(),
        });
    }
    rows
}

/// Renders the flow table for steps `from..=to`. An empty window yields the header only.
pub fn flow_table(trace: &Trace, from: u64, to: u64) -> String {
    let ids: Vec<u32> = trace.header.traders.iter().map(|t| t.id.0).collect();
    let mut header = vec!["time".to_string()];
    header.extend(ids.iter().map(|id| format!("inv{id}(t)")));
    header.extend(["orders", "xorders", "pending xorders", "dxorders"].map(String::from));
    header.extend(ids.iter().map(|id| format!("inv{id}(t+1)")));
    let mut out = header.join(" | ");
    out.push('\n');

    for row in flow_rows(trace, from, to) {
        let mut cells = vec![row.t.0.to_string()];
        cells.extend(row.inv_before.iter().map(i64::to_string));
        cells.push(row.orders.iter().map(|(l, size)| format!("{}({size})", l.render())).collect::<Vec<_>>().join(" "));
        cells.push(render_trades(&row.xorders));
        cells.push(render_trades(&row.pending));
        cells.push(render_trades(&row.dxorders));
        cells.extend(row.inv_after.iter().map(i64::to_string));
        let _ = writeln!(out, "{}", cells.join(" | "));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("flow table line {line}: {message}")]
pub struct FlowParseError {
    pub line: usize,
    pub message: String,
}

fn parse_label(text: &str) -> Option<FlowLabel> {
    let inner = text.strip_prefix("θ[")?.strip_suffix(']')?;
    let mut parts = inner.split(',');
    let kind = OrderKind::from_label(parts.next()?.chars().next()?)?;
    let trader = TraderId(parts.next()?.parse().ok()?);
    let time = SimTime(parts.next()?.parse().ok()?);
    parts.next().is_none().then_some(FlowLabel { kind, trader, time })
}

fn parse_order(token: &str) -> Option<(FlowLabel, u64)> {
    let (label, size) = token.strip_suffix(')')?.rsplit_once('(')?;
    Some((parse_label(label)?, size.parse().ok()?))
}

fn parse_trade(token: &str) -> Option<(FlowLabel, FlowLabel, u64)> {
    let body = token.strip_prefix('(')?;
    let (pair, size) = body.rsplit_once(')')?;
    let (a, b) = pair.split_once("],")?;
    Some((parse_label(&format!("{a}]"))?, parse_label(b)?, size.parse().ok()?))
}

fn parse_items<T>(cell: &str, f: fn(&str) -> Option<T>, line: usize) -> Result<Vec<T>, FlowParseError> {
    cell.split_whitespace()
        .map(|tok| f(tok).ok_or_else(|| FlowParseError { line, message: format!("cannot parse `{tok}`") }))
        .collect()
}

/// Parses a rendered flow table back into rows.
pub fn parse_flow_table(text: &str) -> Result<Vec<FlowRow>, FlowParseError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FlowParseError { line: 1, message: "missing header".into() })?;
    let traders = header.split('|').filter(|c| c.trim().ends_with("(t)")).count();
    let width = 2 * traders + 5;

    let mut rows = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('|').map(str::trim).collect();
        if cells.len() != width {
            return Err(FlowParseError { line: n, message: format!("expected {width} cells, found {}", cells.len()) });
        }
        let int =
            |s: &str| s.parse::<i64>().map_err(|_| FlowParseError { line: n, message: format!("bad integer `{s}`") });
        let t = int(cells[0])?;
        let inv_before = cells[1..=traders].iter().map(|c| int(c)).collect::<Result<_, _>>()?;
        let base = traders + 1;
        rows.push(FlowRow {
            t: SimTime(t as u64),
            inv_before,
            orders: parse_items(cells[base], parse_order, n)?,
            xorders: parse_items(cells[base + 1], parse_trade, n)?,
            pending: parse_items(cells[base + 2], parse_trade, n)?,
            dxorders: parse_items(cells[base + 3], parse_trade, n)?,
            inv_after: cells[base + 4..].iter().map(|c| int(c)).collect::<Result<_, _>>()?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_round_trip() {
        let l = FlowLabel { kind: OrderKind::Sell, trader: TraderId(2), time: SimTime(6) };
        assert_eq!(parse_label(&l.render()), Some(l));
        assert_eq!(parse_order("θ[b,1,0](17)").unwrap().1, 17);
        let (r, a, size) = parse_trade("(θ[b,1,0],θ[S,2,0])10").unwrap();
        assert_eq!((r.kind, a.kind, size), (OrderKind::Bid, OrderKind::Sell, 10));
        assert!(parse_order("θ[x,1,0](1)").is_none());
    }
}
