//! Randomized oracle-equivalence checks, as run by `gausslink selftest`.

use gausslink::sweep::run_selftest;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let report = run_selftest(seed);
    for c in &report.checks {
        println!("{:<48} {} (worst {:.2e})", c.name, if c.passed { "ok" } else { "FAILED" }, c.worst);
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
