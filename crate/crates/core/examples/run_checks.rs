//! Runs the full battery of checks with a small case count and prints a
//! pass/fail line per check.

use nowicki::checks::{all, verdict, Config};

fn main() -> nowicki::Result<()> {
    let cfg = Config { seed: 7, cases: 100 };
    for r in all(cfg)? {
        println!("[{}] {} {}", verdict(r.passed), r.id, r.name);
        for l in r.details.iter().take(3) {
            println!("    {l}");
        }
    }
    Ok(())
}
