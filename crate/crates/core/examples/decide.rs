//! Deciding identities in band varieties.
//!
//! ```bash
//! cargo run --example decide
//! ```

use hypervar::catalog::lookup;
use hypervar::freealg::{describe_model, Analyzer, Decision, Refutation};
use hypervar::term::Identity;

fn main() -> hypervar::Result<()> {
    let an = Analyzer::default();
    let cases = [
        ("B", "x(yz) = (xy)z"),
        ("B", "xy = yx"),
        ("B", "xyzx = xzyx"),
        ("V1", "zxy = zyx"),
        ("W1", "xyx = x"),
        ("V5", "xy = yx"),
        ("LZ", "xyzab = xbazy"),
    ];
    for (name, text) in cases {
        let v = lookup(name)?;
        let id = Identity::parse(text, &v.sig)?;
        let verdict = match an.decide(&v, &id)? {
            Decision::Valid => "valid".to_string(),
            Decision::Invalid(Refutation::Countermodel { model, .. }) => {
                format!("fails in a {}-element {}", model.size(), describe_model(&model))
            }
            Decision::Invalid(r) => r.describe(&v.sig),
            Decision::Unknown { reason, .. } => format!("unknown: {reason}"),
        };
        println!("{name:>3}  {text:<16} {verdict}");
    }
    Ok(())
}
