//! Finite models of a set of identities, up to isomorphism.
//!
//! ```bash
//! cargo run --example model_search
//! ```

use hypervar::catalog::lookup;
use hypervar::finalg::models_of_size;
use hypervar::freealg::{describe_model, Analyzer};
use hypervar::report::non_associative_derived_band;

fn main() -> hypervar::Result<()> {
    let b = lookup("B")?;
    for n in 1..=4 {
        let models = models_of_size(&b.basis(), &b.sig, n)?;
        println!("bands of size {n}: {}", models.len());
        if n == 2 {
            for m in &models {
                println!("  {:<10} {:?}", describe_model(m), m.table(0));
            }
        }
    }
    for name in ["W1", "V3", "W2"] {
        let v = lookup(name)?;
        let count = models_of_size(&v.basis(), &v.sig, 3)?.len();
        println!("{name}: {count} models of size 3");
    }

    let an = Analyzer::default();
    if let Some((band, s, at)) = non_associative_derived_band(&an, 5)? {
        println!("\n[{s}] breaks associativity on this band, at {at}:");
        print!("{}", band.to_model_text());
    }
    Ok(())
}
