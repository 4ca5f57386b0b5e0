//! Acceptance criteria 1–11, one line each. Exits nonzero when a blocking criterion fails.

use modvals::acceptance::run;
use std::time::Instant;

fn main() {
    let filter: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut blocking_failures = Vec::new();
    let start = Instant::now();
    for id in 1..=11u8 {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let c = run(id);
        println!("{}  ({:.1}s)", c.report(), t.elapsed().as_secs_f64());
        if c.blocking && !c.pass() {
            blocking_failures.push(id);
        }
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if blocking_failures.is_empty() {
        println!("acceptance: all blocking criteria pass");
    } else {
        println!("acceptance: blocking criteria failing: {blocking_failures:?}");
        std::process::exit(1);
    }
}
