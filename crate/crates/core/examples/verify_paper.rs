//! Runs the claim suite and prints a one-line summary per claim.
//!
//! ```bash
//! cargo run --example verify_paper
//! ```

use hypervar::freealg::Analyzer;
use hypervar::report::verify_paper;

fn main() -> hypervar::Result<()> {
    let report = verify_paper(&Analyzer::default())?;
    for c in &report.claims {
        println!("{:<20}{:<14}{}", c.id, c.status.as_str(), c.statement);
    }
    let s = &report.summary;
    println!(
        "\npass {}, fail {}, discrepancy {}, inconclusive {}",
        s.pass, s.fail, s.discrepancy, s.inconclusive
    );
    std::process::exit(report.exit_code());
}
