//! Named varieties and the variety file format.
//!
//! ```text
//! name RectangularBands
//! signature * 2
//! base band
//! identity y = yxy
//! size 2
//! *: 0 0 1 1
//! ```
//!
//! Each `size` line opens a generating algebra in the model text format;
//! the table lines after it belong to that algebra. The identities must
//! axiomatize the variety the algebras generate: inclusions are read off
//! the listed identities, while validity is decided in the free algebras
//! built from the generators.

use crate::error::{Error, Result};
use crate::finalg::{parse_signature_fields, FiniteAlgebra};
use crate::freealg::{Base, VarietyPresentation};
use crate::term::{Identity, Signature};

/// Catalog names in their fixed order.
pub const CATALOG_NAMES: [&str; 15] = [
    "B", "SL", "LZ", "RZ", "W1", "V1", "V2", "V3", "V4", "V5", "V6", "W2", "DL", "BA", "TRIV",
];

/// The band varieties of the catalog, bottom part of the band lattice.
pub const BAND_NAMES: [&str; 12] = [
    "B", "SL", "LZ", "RZ", "W1", "V1", "V2", "V3", "V4", "V5", "V6", "W2",
];

fn band_table(table: [usize; 4]) -> FiniteAlgebra {
    FiniteAlgebra::new(Signature::band(), 2, vec![table.to_vec()]).expect("static table")
}

fn band(name: &str, extra: &[&str]) -> VarietyPresentation {
    VarietyPresentation::band(name, extra).expect("static presentation")
}

fn lattice_axioms(sig: &Signature) -> Vec<Identity> {
    [
        "meet(x, y) = meet(y, x)",
        "join(x, y) = join(y, x)",
        "meet(x, meet(y, z)) = meet(meet(x, y), z)",
        "join(x, join(y, z)) = join(join(x, y), z)",
        "meet(x, join(x, y)) = x",
        "join(x, meet(x, y)) = x",
        "meet(x, join(y, z)) = join(meet(x, y), meet(x, z))",
    ]
    .iter()
    .map(|t| Identity::parse(t, sig).expect("static identity"))
    .collect()
}

fn distributive_lattices() -> VarietyPresentation {
    let sig = Signature::new([("meet", 2), ("join", 2)]).expect("static signature");
    let two = FiniteAlgebra::new(sig.clone(), 2, vec![vec![0, 0, 0, 1], vec![0, 1, 1, 1]])
        .expect("static table");
    let axioms = lattice_axioms(&sig);
    VarietyPresentation::new("DL", sig, Base::None, axioms, vec![two]).expect("static presentation")
}

fn boolean_algebras() -> VarietyPresentation {
    let sig = Signature::new([("meet", 2), ("join", 2), ("neg", 1), ("zero", 0), ("one", 0)])
        .expect("static signature");
    let two = FiniteAlgebra::new(
        sig.clone(),
        2,
        vec![vec![0, 0, 0, 1], vec![0, 1, 1, 1], vec![1, 0], vec![0], vec![1]],
    )
    .expect("static table");
    let mut axioms = lattice_axioms(&sig);
    for t in [
        "meet(x, neg(x)) = zero",
        "join(x, neg(x)) = one",
        "join(x, zero) = x",
        "meet(x, one) = x",
    ] {
        axioms.push(Identity::parse(t, &sig).expect("static identity"));
    }
    VarietyPresentation::new("BA", sig, Base::None, axioms, vec![two]).expect("static presentation")
}

/// Looks up a catalog variety by its case-sensitive name.
pub fn lookup(name: &str) -> Result<VarietyPresentation> {
    let with = |v: VarietyPresentation, gens: Vec<FiniteAlgebra>| {
        v.with_generators(gens).expect("static generators")
    };
    Ok(match name {
        "B" => band("B", &[]),
        "SL" => with(band("SL", &["xy = yx"]), vec![band_table([0, 0, 0, 1])]),
        "LZ" => with(band("LZ", &["xy = x"]), vec![band_table([0, 0, 1, 1])]),
        "RZ" => with(band("RZ", &["xy = y"]), vec![band_table([0, 1, 0, 1])]),
        "W1" => band("W1", &["y = yxy"]),
        "V1" => band("V1", &["zxy = zyx"]),
        "V2" => band("V2", &["yxz = xyz"]),
        "V3" => band("V3", &["yx = yxy"]),
        "V4" => band("V4", &["xy = yxy"]),
        "V5" => band("V5", &["xzy = zxyz"]),
        "V6" => band("V6", &["yxz = yzxz"]),
        "W2" => band("W2", &["zxyz = zyxz"]),
        "DL" => distributive_lattices(),
        "BA" => boolean_algebras(),
        "TRIV" => band("TRIV", &["x = y"]),
        _ => return Err(Error::UnknownVariety(name.to_string())),
    })
}

/// The whole catalog in `CATALOG_NAMES` order.
pub fn catalog() -> Vec<VarietyPresentation> {
    CATALOG_NAMES
        .iter()
        .map(|n| lookup(n).expect("catalog name"))
        .collect()
}

/// Parses the variety file format.
pub fn parse_variety(text: &str) -> Result<VarietyPresentation> {
    let mut name = None;
    let mut fields: Vec<(String, usize)> = Vec::new();
    let mut base = Base::None;
    let mut identities: Vec<(usize, String)> = Vec::new();
    let mut blocks: Vec<(usize, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::Parse {
            column: lineno + 1,
            message: m,
        };
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" if !rest.is_empty() => name = Some(rest.to_string()),
            "signature" => fields.extend(parse_signature_fields(rest).map_err(err)?),
            "base" => {
                base = match rest {
                    "band" => Base::Band,
                    "none" => Base::None,
                    _ => return Err(err(format!("unknown base `{rest}`"))),
                }
            }
            "identity" => identities.push((lineno + 1, rest.to_string())),
            "size" => blocks.push((lineno + 1, format!("{line}\n"))),
            _ if line.contains(':') => match blocks.last_mut() {
                Some((_, block)) => {
                    block.push_str(line);
                    block.push('\n');
                }
                None => return Err(err("table line before any `size` line".into())),
            },
            _ => return Err(err(format!("unrecognized line `{line}`"))),
        }
    }
    let name = name.ok_or_else(|| Error::Parse {
        column: 0,
        message: "missing `name` line".into(),
    })?;
    let sig = if fields.is_empty() {
        if base != Base::Band {
            return Err(Error::Parse {
                column: 0,
                message: "missing `signature` line".into(),
            });
        }
        Signature::band()
    } else {
        Signature::new(fields)?
    };
    let extra = identities
        .into_iter()
        .map(|(line, t)| {
            Identity::parse(&t, &sig).map_err(|e| Error::Parse {
                column: line,
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gens = blocks
        .into_iter()
        .map(|(line, b)| {
            FiniteAlgebra::parse_model(&b, Some(&sig)).map_err(|e| Error::Parse {
                column: line,
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    VarietyPresentation::new(name, sig, base, extra, gens)
}
