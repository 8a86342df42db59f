//! Structure-constant tables and their version-1 export format.
//!
//! A table lists, for every basis pair `i < j` with nonzero bracket, the
//! coefficients of `[b_i, b_j]` in the basis. In characteristic 2 the bracket
//! is symmetric with zero diagonal, so the upper triangle determines it.
//!
//! JSON document layout:
//!
//! ```text
//! {
//!   "version": 1,
//!   "field": "GF(2^k)",
//!   "algebra": { "name": "G2", "dimension": 14 },
//!   "metadata": { "line": 0, "d": [ ...27 point images... ] },   // optional
//!   "basis": [ "H:16", "R:3", "S:1-9-4", ... ],
//!   "brackets": [ { "i": 0, "j": 2, "coeffs": "0004" }, ... ]
//! }
//! ```
//!
//! `coeffs` packs coefficient `c_k` (a k-bit field element) at bit offset
//! `k·deg` of a little-endian bit string, printed as lowercase hex, most
//! significant nibble first, zero-padded to `ceil(dim·deg / 4)` digits.
//! The CSV form has the header `i,j,k,coeff` and one row per nonzero
//! coefficient, `coeff` being the field element's bit pattern in decimal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Gf2k, KScalar};
use crate::liealg::{cartan_op, BasisTag, Endo, LieBasisElem, RootOps, Subalgebra};
use crate::quadrangle::VVector;
use crate::Geometry;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<KScalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
    pub field: Gf2k,
    pub name: String,
    pub labels: Vec<String>,
    pub entries: Vec<BracketEntry>,
    pub metadata: Option<Metadata>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<u8>>,
}

fn mask_to_coeffs(mask: u128, dim: usize) -> Vec<KScalar> {
    (0..dim).map(|k| if mask & (1u128 << k) != 0 { KScalar::ONE } else { KScalar::ZERO }).collect()
}

/// Structure constants over GF(2). Fails if some bracket leaves the span.
pub fn structure_table(s: &Subalgebra) -> Result<StructureTable> {
    let n = s.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let br = s.basis()[i].op.bracket(&s.basis()[j].op);
            if br.is_zero() {
                continue;
            }
            let mask = s.coordinates(&br).ok_or_else(|| {
                Error::Invariant(format!("[{}, {}] escapes {}", s.basis()[i].tag, s.basis()[j].tag, s.name))
            })?;
            entries.push(BracketEntry { i, j, coeffs: mask_to_coeffs(mask, n) });
        }
    }
    Ok(StructureTable { field: Gf2k::prime(), name: s.name.clone(), labels: s.labels(), entries, metadata: None })
}

impl StructureTable {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Coefficient vector of [b_i, b_j] for any i, j (zero on the diagonal).
    pub fn bracket_coeffs(&self, i: usize, j: usize) -> Vec<KScalar> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.entries
            .iter()
            .find(|e| e.i == a && e.j == b)
            .map(|e| e.coeffs.clone())
            .unwrap_or_else(|| vec![KScalar::ZERO; self.dim()])
    }

    /// Checks Σ c_k b_k = [b_i, b_j] for every pair, including the absent
    /// (zero) ones. Only 0/1 coefficients can be evaluated on GF(2) operators.
    pub fn verify_against(&self, s: &Subalgebra) -> Result<()> {
        if self.labels != s.labels() {
            return Err(Error::Format("basis labels differ from the algebra".into()));
        }
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let coeffs = self.bracket_coeffs(i, j);
                let mut sum = Endo::ZERO;
                for (k, c) in coeffs.iter().enumerate() {
                    match c.bits() {
                        0 => {}
                        1 => sum = sum.add(&s.basis()[k].op),
                        _ => return Err(Error::Format("coefficient outside GF(2)".into())),
                    }
                }
                if sum != s.basis()[i].op.bracket(&s.basis()[j].op) {
                    return Err(Error::Invariant(format!(
                        "table entry ({}, {}) does not reconstruct the bracket",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = Document {
            version: FORMAT_VERSION,
            field: self.field.to_string(),
            algebra: AlgebraInfo { name: self.name.clone(), dimension: self.dim() },
            metadata: self.metadata.clone(),
            basis: self.labels.clone(),
            brackets: self
                .entries
                .iter()
                .map(|e| JsonEntry { i: e.i, j: e.j, coeffs: pack_hex(&e.coeffs, self.field.degree()) })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text)?;
        if doc.version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", doc.version)));
        }
        let field = parse_field_name(&doc.field)?;
        let n = doc.basis.len();
        if doc.algebra.dimension != n {
            return Err(Error::Format("dimension does not match basis length".into()));
        }
        let entries = doc
            .brackets
            .iter()
            .map(|e| {
                if e.i >= e.j || e.j >= n {
                    return Err(Error::Format(format!("bad index pair ({}, {})", e.i, e.j)));
                }
                Ok(BracketEntry { i: e.i, j: e.j, coeffs: unpack_hex(&e.coeffs, n, &field)? })
            })
            .collect::<Result<_>>()?;
        Ok(StructureTable { field, name: doc.algebra.name, labels: doc.basis, entries, metadata: doc.metadata })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,k,coeff\n");
        for e in &self.entries {
            for (k, c) in e.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out.push_str(&format!("{},{},{},{}\n", e.i, e.j, k, c.bits()));
                }
            }
        }
        out
    }

    /// Rebuilds the operators named by the basis labels.
    pub fn materialize(&self, geo: &Geometry, roots: &RootOps) -> Result<Subalgebra> {
        let basis = self
            .labels
            .iter()
            .map(|l| parse_label(l).and_then(|tag| op_for_tag(geo, roots, tag).map(|op| LieBasisElem { tag, op })))
            .collect::<Result<_>>()?;
        Subalgebra::from_basis(self.name.clone(), basis)
    }
}

#[derive(Serialize, Deserialize)]
struct Document {
    version: u32,
    field: String,
    algebra: AlgebraInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
    basis: Vec<String>,
    brackets: Vec<JsonEntry>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraInfo {
    name: String,
    dimension: usize,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    i: usize,
    j: usize,
    coeffs: String,
}

pub fn parse_field_name(s: &str) -> Result<Gf2k> {
    let k = s
        .strip_prefix("GF(2^")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|k| k.parse::<u8>().ok())
        .ok_or_else(|| Error::Format(format!("bad field name `{s}`")))?;
    Gf2k::new(k)
}

pub fn pack_hex(coeffs: &[KScalar], degree: u8) -> String {
    let deg = degree as usize;
    let bits = coeffs.len() * deg;
    let digits = bits.div_ceil(4).max(1);
    let bit = |b: usize| -> u8 {
        let (k, off) = (b / deg, b % deg);
        if k < coeffs.len() {
            (coeffs[k].bits() >> off) & 1
        } else {
            0
        }
    };
    (0..digits)
        .rev()
        .map(|d| {
            let nib = (0..4).fold(0u8, |acc, t| acc | (bit(4 * d + t) << t));
            char::from_digit(nib as u32, 16).unwrap()
        })
        .collect()
}

pub fn unpack_hex(hex: &str, dim: usize, field: &Gf2k) -> Result<Vec<KScalar>> {
    let deg = field.degree() as usize;
    let nibbles: Vec<u8> = hex
        .chars()
        .rev()
        .map(|c| c.to_digit(16).map(|d| d as u8).ok_or_else(|| Error::Format(format!("bad hex digit `{c}`"))))
        .collect::<Result<_>>()?;
    let bit = |b: usize| nibbles.get(b / 4).map_or(0, |n| (n >> (b % 4)) & 1);
    if (dim * deg..nibbles.len() * 4).any(|b| bit(b) != 0) {
        return Err(Error::Format("coefficient string longer than the basis".into()));
    }
    (0..dim).map(|k| field.elem((0..deg).fold(0u8, |acc, t| acc | (bit(k * deg + t) << t)))).collect()
}

pub fn parse_label(label: &str) -> Result<BasisTag> {
    let bad = || Error::Format(format!("bad basis label `{label}`"));
    let (kind, rest) = label.split_once(':').ok_or_else(bad)?;
    match kind {
        "H" => Ok(BasisTag::Cartan(VVector::from_code(rest.parse().map_err(|_| bad())?)?)),
        "R" => Ok(BasisTag::Root(crate::rootbases::RootBaseId(rest.parse().map_err(|_| bad())?))),
        "S" => {
            let ids: Vec<u8> = rest.split('-').map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?;
            let ids: [u8; 3] = ids.try_into().map_err(|_| bad())?;
            Ok(BasisTag::Folded(ids.map(crate::rootbases::RootBaseId)))
        }
        "C" => Ok(BasisTag::Combination(u128::from_str_radix(rest, 16).map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn op_for_tag(geo: &Geometry, roots: &RootOps, tag: BasisTag) -> Result<Endo> {
    let check = |id: crate::rootbases::RootBaseId| geo.phi.by_id(id.index()).map(|_| ());
    match tag {
        BasisTag::Cartan(v) => Ok(cartan_op(&geo.quad, v)),
        BasisTag::Root(id) => {
            check(id)?;
            Ok(*roots.get(id))
        }
        BasisTag::Folded(o) => {
            for id in o {
                check(id)?;
            }
            Ok(roots.folded(&o))
        }
        BasisTag::Combination(_) => Err(Error::Format("combination labels cannot be rebuilt without a parent".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_layout() {
        let c = |b: &[u8]| b.iter().map(|&x| Gf2k::prime().elem(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(pack_hex(&c(&[1, 0, 0, 0, 1]), 1), "11");
        assert_eq!(pack_hex(&c(&[0, 0, 1]), 1), "4");
        let f = Gf2k::new(2).unwrap();
        let v = vec![f.elem(3).unwrap(), f.elem(1).unwrap()];
        assert_eq!(pack_hex(&v, 2), "7");
        assert_eq!(unpack_hex("7", 2, &f).unwrap(), v);
        assert!(unpack_hex("17", 2, &f).is_err());
        assert!(unpack_hex("x", 2, &f).is_err());
    }

    proptest! {
        #[test]
        fn hex_roundtrip(k in 1u8..=8, raw in proptest::collection::vec(any::<u8>(), 1..80)) {
            let f = Gf2k::new(k).unwrap();
            let coeffs: Vec<KScalar> = raw.iter().map(|&b| f.elem(((b as u16) % f.order() as u16) as u8).unwrap()).collect();
            let hex = pack_hex(&coeffs, k);
            prop_assert_eq!(hex.len(), (coeffs.len() * k as usize).div_ceil(4));
            prop_assert_eq!(unpack_hex(&hex, coeffs.len(), &f).unwrap(), coeffs);
        }
    }

    #[test]
    fn labels_roundtrip() {
        for l in ["H:48", "R:71", "S:3-40-12", "C:ff"] {
            assert_eq!(parse_label(l).unwrap().to_string(), l);
        }
        for l in ["Q:1", "H:64", "S:1-2", "R", "R:x"] {
            assert!(parse_label(l).is_err(), "{l}");
        }
    }

    #[test]
    fn field_names() {
        assert_eq!(parse_field_name("GF(2^3)").unwrap().degree(), 3);
        assert!(parse_field_name("GF(3)").is_err());
        assert!(parse_field_name("GF(2^9)").is_err());
    }
}
