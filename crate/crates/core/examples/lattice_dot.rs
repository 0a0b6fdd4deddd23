//! The bottom of the lattice of band varieties, with derivations, as DOT.
//!
//! ```bash
//! cargo run --example lattice_dot > bands.dot
//! dot -Tsvg bands.dot > bands.svg
//! ```

use hypervar::catalog::{lookup, BAND_NAMES};
use hypervar::freealg::{Analyzer, VarietyPresentation};
use hypervar::lattice::{default_band_hyps, export_lattice_dot};

fn main() -> hypervar::Result<()> {
    let mut vs: Vec<VarietyPresentation> = vec![lookup("TRIV")?];
    for name in BAND_NAMES {
        vs.push(lookup(name)?);
    }
    let dot = export_lattice_dot(&Analyzer::default(), &vs, &default_band_hyps())?;
    print!("{dot}");
    Ok(())
}
