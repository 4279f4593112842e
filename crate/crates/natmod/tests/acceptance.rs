//! The ten acceptance criteria, one pass/fail line each; exits non-zero
//! unless every criterion passes.

use natmod::acceptance::{run_criterion, AcceptanceConfig};
use natmod::report::Outcome;

fn main() {
    let cfg = AcceptanceConfig::default();
    let mut passed = 0;
    for n in 1..=10 {
        let r = run_criterion(n, &cfg);
        println!("{}", r.line());
        passed += usize::from(r.outcome == Outcome::Pass);
    }
    println!("acceptance: {passed}/10 criteria passed");
    if passed != 10 {
        std::process::exit(1);
    }
}
