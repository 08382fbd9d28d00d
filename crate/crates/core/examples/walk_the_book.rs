//! Builds an ask book from a few quotes and sends two buy orders through it.
//! The second buy walks up the book; the matcher and the execution-price
//! recursion agree on every fill price.

use mm_coupling::orderbook::{execution_prices, insert_ask, match_orders, BookSide, OrderBook};
use mm_coupling::{Order, Price, PriceScale, TraderId};

fn main() {
    let scale = PriceScale::DEFAULT;
    let px = |ticks: &str| Price::parse_ticks(ticks, scale).unwrap();
    let asks = [
        Order::ask(5, px("101"), TraderId(1)),
        Order::ask(3, px("100.5"), TraderId(2)),
        Order::ask(4, px("101"), TraderId(3)),
        Order::ask(6, px("102.25"), TraderId(4)),
    ];
    let book = insert_ask(OrderBook::new(BookSide::AskSide), &asks).unwrap();
    println!("ask book, best first:");
    for o in book.entries() {
        println!("  trader {} {} @ {}", o.trader, o.size, o.price.to_ticks_string(scale));
    }

    let buys = [Order::buy(2, TraderId(8)), Order::buy(9, TraderId(9))];
    let result = match_orders(&book, &buys);
    println!("fills:");
    for (resting, aggressor) in result.executed_resting.iter().zip(&result.executed_aggressive) {
        println!(
            "  trader {} buys {} from trader {} @ {}",
            aggressor.trader,
            aggressor.size,
            resting.trader,
            resting.price.to_ticks_string(scale)
        );
    }
    println!("left in book: {}", result.remaining_book.total_size());

    let oracle = execution_prices(book.entries(), &buys);
    let matched: Vec<Price> = result.executed_aggressive.iter().map(|o| o.price).collect();
    assert_eq!(matched, oracle);
}
