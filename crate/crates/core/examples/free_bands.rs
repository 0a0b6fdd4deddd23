//! Free bands and their quotients.
//!
//! ```bash
//! cargo run --example free_bands
//! ```

use hypervar::catalog::{lookup, BAND_NAMES};
use hypervar::freealg::greenrees::same_in_free_band;
use hypervar::freealg::Analyzer;
use hypervar::term::print_term;

fn main() -> hypervar::Result<()> {
    let an = Analyzer::default();
    let f2 = an.free_band(2)?;
    let sig = hypervar::term::Signature::band();
    let words: Vec<String> = f2.repr_terms.iter().map(|t| print_term(t, &sig, true)).collect();
    println!("F_B(2) = {{{}}}", words.join(", "));
    println!("xyxy = xy in every band: {}", same_in_free_band(&[1, 2, 1, 2], &[1, 2])?);
    println!("xyx = xy in every band: {}", same_in_free_band(&[1, 2, 1], &[1, 2])?);

    println!("\n{:<5}{:>6}{:>6}{:>6}", "", "n=1", "n=2", "n=3");
    for name in BAND_NAMES {
        let v = lookup(name)?;
        let sizes: Vec<String> = (1..=3)
            .map(|n| an.free_algebra(&v, n).map(|f| format!("{:>6}", f.size())))
            .collect::<hypervar::Result<_>>()?;
        println!("{name:<5}{}", sizes.concat());
    }
    Ok(())
}
