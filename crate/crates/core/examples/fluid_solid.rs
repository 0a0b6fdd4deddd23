//! Fluidity and solidity across the catalog, and for a variety file.
//!
//! ```bash
//! cargo run --example fluid_solid
//! ```

use hypervar::catalog::{catalog, parse_variety};
use hypervar::freealg::Analyzer;

fn main() -> hypervar::Result<()> {
    let an = Analyzer::default();
    println!("{:<6}{:<8}{:<8}classes", "", "fluid", "solid");
    for v in catalog() {
        let fluid = an.is_fluid(&v)?;
        let solid = an.is_solid(&v)?;
        println!("{:<6}{:<8}{:<8}{}", v.name, fluid.value, solid.value, fluid.classes_checked);
    }

    let rect = parse_variety(include_str!("data/rectangular.var"))?;
    let solid = an.is_solid(&rect)?;
    println!("\n{} solid: {} ({})", rect.name, solid.value, solid.certainty);
    let fluid = an.is_fluid(&rect)?;
    for w in &fluid.witnesses {
        println!("  {}", w.describe(&rect.sig));
    }
    Ok(())
}
