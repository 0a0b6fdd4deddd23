//! DOT export of inclusions and derivations among a set of varieties.

use std::fmt::Write;

use crate::error::Result;
use crate::freealg::{Analyzer, VarietyPresentation};
use crate::hyper::Hypersubstitution;
use crate::term::Signature;

/// Projections and reversal, labelled for the band signature.
pub fn default_band_hyps() -> Vec<(String, Hypersubstitution)> {
    let sig = Signature::band();
    [("proj1", "* := x"), ("proj2", "* := y"), ("rev", "* := yx")]
        .iter()
        .map(|(label, text)| {
            let h = Hypersubstitution::parse(text, &sig).expect("static hypersubstitution");
            (label.to_string(), h)
        })
        .collect()
}

/// Draws the varieties bottom-up. Solid edges are covering inclusions
/// between classes of equal varieties; equal varieties are joined by a
/// dotted `=` edge; a dashed arrow `V -> W` labelled `s` means `V_s = W`
/// exactly, for `s` nontrivial modulo `V` and `V` distinct from `W`.
///
/// Varieties over another signature than the first one are skipped, as
/// are hypersubstitutions over another signature.
pub fn export_lattice_dot(
    an: &Analyzer,
    varieties: &[VarietyPresentation],
    hyps: &[(String, Hypersubstitution)],
) -> Result<String> {
    let Some(first) = varieties.first() else {
        return Ok("digraph varieties {\n}\n".into());
    };
    let vs: Vec<&VarietyPresentation> = varieties.iter().filter(|v| v.sig == first.sig).collect();
    let n = vs.len();
    let mut below = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            below[i][j] = i == j || an.subvariety_of(vs[i], vs[j])?.value;
        }
    }
    let class_of: Vec<usize> = (0..n)
        .map(|i| (0..=i).find(|&j| below[i][j] && below[j][i]).unwrap_or(i))
        .collect();
    let reps: Vec<usize> = (0..n).filter(|&i| class_of[i] == i).collect();
    let strictly = |a: usize, b: usize| below[a][b] && !below[b][a];

    let mut out = String::new();
    writeln!(out, "digraph varieties {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for v in &vs {
        writeln!(out, "  \"{}\";", v.name).unwrap();
    }
    for &a in &reps {
        for &b in &reps {
            let covers = strictly(a, b) && !reps.iter().any(|&c| strictly(a, c) && strictly(c, b));
            if covers {
                writeln!(out, "  \"{}\" -> \"{}\";", vs[a].name, vs[b].name).unwrap();
            }
        }
    }
    for i in 0..n {
        if class_of[i] != i {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [style=dotted, dir=none, label=\"=\"];",
                vs[class_of[i]].name, vs[i].name
            )
            .unwrap();
        }
    }
    for (i, v) in vs.iter().enumerate() {
        for (label, sigma) in hyps.iter().filter(|(_, s)| *s.sig() == first.sig) {
            if an.is_trivial_mod(v, sigma).unwrap_or(false) {
                continue;
            }
            for (j, w) in vs.iter().enumerate() {
                if class_of[i] == class_of[j] {
                    continue;
                }
                let eq = an.equals_derived(v, sigma, w)?;
                if eq.value && eq.certainty.is_exact() {
                    writeln!(
                        out,
                        "  \"{}\" -> \"{}\" [style=dashed, label=\"{label}\"];",
                        v.name, w.name
                    )
                    .unwrap();
                }
            }
        }
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
