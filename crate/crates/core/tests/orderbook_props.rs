use proptest::prelude::*;

use mm_coupling::orderbook::{
    best_prices, execution_prices, insert_ask, insert_bid, match_orders, rebuild_books, BookSide, OrderBook,
};
use mm_coupling::{Order, OrderKind, Price, PriceScale, TraderId};

fn resting(kind: OrderKind) -> impl Strategy<Value = Vec<Order>> {
    prop::collection::vec((1u64..=10, 95i64..=105, 1u32..=6), 0..8).prop_map(move |v| {
        v.into_iter()
            .map(|(size, ticks, id)| {
                Order::new(kind, size, Price::from_ticks(ticks, PriceScale::DEFAULT), TraderId(id))
            })
            .collect()
    })
}

fn executables(kind: OrderKind) -> impl Strategy<Value = Vec<Order>> {
    prop::collection::vec((1u64..=15, 7u32..=9), 0..4)
        .prop_map(move |v| v.into_iter().map(|(size, id)| Order::new(kind, size, Price::ZERO, TraderId(id))).collect())
}

fn side() -> impl Strategy<Value = BookSide> {
    prop_oneof![Just(BookSide::BidSide), Just(BookSide::AskSide)]
}

fn build(side: BookSide, orders: &[Order]) -> OrderBook {
    match side {
        BookSide::BidSide => insert_bid(OrderBook::new(side), orders),
        BookSide::AskSide => insert_ask(OrderBook::new(side), orders),
    }
    .unwrap()
}

fn case() -> impl Strategy<Value = (BookSide, Vec<Order>, Vec<Order>)> {
    side().prop_flat_map(|s| (Just(s), resting(s.resting_kind()), executables(s.aggressor_kind())))
}

proptest! {
    #[test]
    fn insertion_keeps_price_time_order((s, orders, _) in case()) {
        let book = build(s, &orders);
        prop_assert!(book.check_invariants().is_ok());
        prop_assert_eq!(book.entries().len(), orders.len());
        // Among equal prices, arrival order is preserved.
        for w in book.entries().windows(2) {
            if w[0].price == w[1].price {
                let i = orders.iter().position(|o| o == &w[0]).unwrap();
                let j = orders.iter().rposition(|o| o == &w[1]).unwrap();
                prop_assert!(i <= j);
            }
        }
    }

    #[test]
    fn matching_conserves_size((s, orders, execs) in case()) {
        let book = build(s, &orders);
        let m = match_orders(&book, &execs);
        let filled: u64 = m.executed_resting.iter().map(|o| o.size).sum();
        prop_assert_eq!(filled, m.executed_aggressive.iter().map(|o| o.size).sum::<u64>());
        prop_assert_eq!(filled + m.remaining_book.total_size(), book.total_size());
        let offered: u64 = execs.iter().map(|o| o.size).sum();
        prop_assert_eq!(filled, offered.min(book.total_size()));
        prop_assert!(m.remaining_book.check_invariants().is_ok());
    }

    #[test]
    fn remaining_plus_executed_rebuilds_the_book((s, orders, execs) in case()) {
        let book = build(s, &orders);
        let m = match_orders(&book, &execs);
        // Fills consume the book front to back, so the fills followed by the
        // remaining book split each original entry into consecutive pieces.
        let mut pieces = m.executed_resting.iter().chain(m.remaining_book.entries());
        for entry in book.entries() {
            let mut got = 0;
            while got < entry.size {
                let p = pieces.next();
                prop_assert!(p.is_some(), "ran out of pieces for {:?}", entry);
                let p = p.unwrap();
                prop_assert_eq!((p.trader, p.price, p.kind), (entry.trader, entry.price, entry.kind));
                got += p.size;
            }
            prop_assert_eq!(got, entry.size);
        }
        prop_assert!(pieces.next().is_none());
    }

    #[test]
    fn matcher_agrees_with_oracle((s, orders, execs) in case()) {
        let book = build(s, &orders);
        let m = match_orders(&book, &execs);
        let prices: Vec<Price> = m.executed_aggressive.iter().map(|o| o.price).collect();
        prop_assert_eq!(prices, execution_prices(book.entries(), &execs));
    }

    #[test]
    fn best_prices_come_from_the_head(bids in resting(OrderKind::Bid), asks in resting(OrderKind::Ask)) {
        let (bb, ab) = rebuild_books(&bids, &asks).unwrap();
        let prev = (Price(1), Price(2));
        let (b, a) = best_prices(&bb, &ab, prev);
        prop_assert_eq!(b, bids.iter().map(|o| o.price).max().unwrap_or(prev.0));
        prop_assert_eq!(a, asks.iter().map(|o| o.price).min().unwrap_or(prev.1));
    }
}
