//! Hypersubstitutions, their action on terms, and their classes modulo a
//! variety.
//!
//! ```bash
//! cargo run --example hypersubstitutions
//! ```

use hypervar::catalog::lookup;
use hypervar::freealg::Analyzer;
use hypervar::hyper::Hypersubstitution;
use hypervar::term::{parse_term, print_term, Signature};

fn main() -> hypervar::Result<()> {
    let sig = Signature::band();
    let rev = Hypersubstitution::parse("* := yx", &sig)?;
    let sandwich = Hypersubstitution::parse("* := xyx", &sig)?;
    let t = parse_term("x(yz)", &sig)?;
    for s in [&rev, &sandwich] {
        println!("[{s}] sends {} to {}", print_term(&t, &sig, true), print_term(&s.apply(&t), &sig, true));
    }
    let both = rev.compose(&sandwich)?;
    println!("[{rev}] after [{sandwich}] is [{both}]");

    let an = Analyzer::default();
    for name in ["B", "W1", "SL", "DL"] {
        let v = lookup(name)?;
        let classes = an.enumerate_hyp_classes(&v)?;
        println!("\n{} classes modulo {name}:", classes.len());
        for c in classes.iter().take(6) {
            println!("  {}{}", c.sigma, if c.trivial { "  (trivial)" } else { "" });
        }
        if classes.len() > 6 {
            println!("  ...");
        }
    }
    Ok(())
}
