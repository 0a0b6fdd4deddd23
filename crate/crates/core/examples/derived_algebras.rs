//! Derived algebras of finite algebras, and derived free algebras.
//!
//! ```bash
//! cargo run --example derived_algebras
//! ```

use hypervar::catalog::lookup;
use hypervar::finalg::{is_proper_derived_algebra, FiniteAlgebra};
use hypervar::freealg::{describe_model, Analyzer};
use hypervar::hyper::Hypersubstitution;
use hypervar::term::Signature;

fn main() -> hypervar::Result<()> {
    let sig = Signature::band();
    let text = include_str!("data/chain3.model");
    let chain = FiniteAlgebra::parse_model(text, Some(&sig))?;
    for h in ["* := x", "* := yx", "* := xyx"] {
        let s = Hypersubstitution::parse(h, &sig)?;
        let d = chain.derived(&s)?;
        println!(
            "[{s}] on the 3-chain: {} ({}), proper: {}",
            d.table(0).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "),
            describe_model(&d),
            is_proper_derived_algebra(&chain, &s)?
        );
    }

    let an = Analyzer::default();
    let b = lookup("B")?;
    for h in ["* := x", "* := yx", "* := xyx"] {
        let s = Hypersubstitution::parse(h, &sig)?;
        let sizes: Vec<usize> = (1..=3)
            .map(|n| an.derived_free_algebra(&b, &s, n).map(|f| f.size()))
            .collect::<hypervar::Result<_>>()?;
        println!("free algebras of B under [{s}]: {sizes:?}");
    }
    Ok(())
}
