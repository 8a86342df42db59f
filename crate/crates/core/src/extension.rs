//! Scalar extension to GF(2^k).
//!
//! All defining operators have 0/1 entries, so the GF(2) structure constants
//! carry over unchanged. This module recomputes brackets and spans with
//! GF(2^k) matrices as an independent route, and additionally checks that
//! brackets of random K-linear combinations stay in the K-span.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{Gf2k, KScalar};
use crate::gf2::{Endo, FLAT_BITS};
use crate::liealg::Subalgebra;
use crate::quadrangle::NUM_POINTS;
use crate::table::{BracketEntry, StructureTable};

const N: usize = NUM_POINTS;

/// A 27×27 matrix over GF(2^k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMatrix {
    field: Gf2k,
    entries: Vec<KScalar>,
}

impl KMatrix {
    pub fn zero(field: Gf2k) -> Self {
        KMatrix { field, entries: vec![KScalar::ZERO; N * N] }
    }

    pub fn lift(field: Gf2k, m: &Endo) -> Self {
        let mut out = Self::zero(field);
        for i in 0..N {
            for j in 0..N {
                if m.get(i, j) {
                    out.entries[i * N + j] = KScalar::ONE;
                }
            }
        }
        out
    }

    pub fn field(&self) -> Gf2k {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> KScalar {
        self.entries[i * N + j]
    }

    fn same_field(&self, other: &KMatrix) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::Domain(format!("mixed-field input: {} and {}", self.field, other.field)))
        }
    }

    pub fn add(&self, other: &KMatrix) -> Result<KMatrix> {
        self.same_field(other)?;
        Ok(KMatrix {
            field: self.field,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| self.field.add(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: KScalar) -> KMatrix {
        KMatrix { field: self.field, entries: self.entries.iter().map(|&a| self.field.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &KMatrix) -> Result<KMatrix> {
        self.same_field(other)?;
        let f = &self.field;
        let mut out = Self::zero(*f);
        for i in 0..N {
            for k in 0..N {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..N {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let e = &mut out.entries[i * N + j];
                        *e = f.add(*e, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &KMatrix) -> Result<KMatrix> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

/// Echelon form over GF(2^k) with monic pivots and coefficient tracking.
#[derive(Clone, Debug)]
pub struct KEchelon {
    field: Gf2k,
    basis_len: usize,
    rows: Vec<(Vec<KScalar>, usize, Vec<KScalar>)>,
}

impl KEchelon {
    pub fn new(field: Gf2k, basis_len: usize) -> Self {
        KEchelon { field, basis_len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[KScalar]) -> (Vec<KScalar>, Vec<KScalar>) {
        let f = &self.field;
        let mut r = v.to_vec();
        let mut combo = vec![KScalar::ZERO; self.basis_len];
        for (row, pivot, rc) in &self.rows {
            let c = r[*pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
            for (x, &y) in combo.iter_mut().zip(rc) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        (r, combo)
    }

    /// Inserts the matrix as basis element `index`; returns whether it was independent.
    pub fn insert(&mut self, m: &KMatrix, index: usize) -> Result<bool> {
        if m.field != self.field {
            return Err(Error::Domain("mixed-field input".into()));
        }
        let f = self.field;
        let (mut r, mut combo) = self.reduce(&m.entries);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        // combo records what was subtracted, so the row equals m + combo
        combo[index] = f.add(combo[index], KScalar::ONE);
        let inv = f.inv(r[pivot])?;
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for x in combo.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push((r, pivot, combo));
        Ok(true)
    }

    /// Coefficients of `m` over the inserted basis, if it lies in the span.
    pub fn coordinates(&self, m: &KMatrix) -> Option<Vec<KScalar>> {
        let (r, combo) = self.reduce(&m.entries);
        r.iter().all(|x| x.is_zero()).then_some(combo)
    }
}

/// Rank over GF(2^k) of the flattened matrices.
pub fn k_span_rank(ops: &[KMatrix]) -> Result<usize> {
    let Some(first) = ops.first() else {
        return Ok(0);
    };
    let mut e = KEchelon::new(first.field, ops.len());
    for (i, m) in ops.iter().enumerate() {
        e.insert(m, i)?;
    }
    Ok(e.rank())
}

fn lifted_echelon(field: Gf2k, s: &Subalgebra) -> Result<(Vec<KMatrix>, KEchelon)> {
    let lifted: Vec<KMatrix> = s.ops().map(|m| KMatrix::lift(field, m)).collect();
    let mut e = KEchelon::new(field, lifted.len());
    for (i, m) in lifted.iter().enumerate() {
        if !e.insert(m, i)? {
            return Err(Error::Invariant(format!("{}: basis element {i} is dependent over {field}", s.name)));
        }
    }
    Ok((lifted, e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub field: Gf2k,
    pub rank: usize,
    pub pairs_checked: usize,
    pub random_checked: usize,
}

/// Closure of the K-span: all basis pairs, then `samples` brackets of random
/// K-combinations drawn from a seeded generator.
pub fn verify_closure_over(field: Gf2k, s: &Subalgebra, samples: usize, seed: u64) -> Result<ExtensionReport> {
    let (lifted, e) = lifted_echelon(field, s)?;
    let n = lifted.len();
    let mut pairs = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let br = lifted[i].bracket(&lifted[j])?;
            if e.coordinates(&br).is_none() {
                return Err(Error::Invariant(format!(
                    "{}: [{}, {}] escapes the span over {field}",
                    s.name,
                    s.basis()[i].tag,
                    s.basis()[j].tag
                )));
            }
            pairs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_combo = |rng: &mut ChaCha8Rng| -> Result<KMatrix> {
        let mut acc = KMatrix::zero(field);
        for m in &lifted {
            let c = field.elem(rng.gen_range(0..field.order()) as u8)?;
            if !c.is_zero() {
                acc = acc.add(&m.scale(c))?;
            }
        }
        Ok(acc)
    };
    for t in 0..samples {
        let x = random_combo(&mut rng)?;
        let y = random_combo(&mut rng)?;
        if e.coordinates(&x.bracket(&y)?).is_none() {
            return Err(Error::Invariant(format!("{}: random bracket #{t} escapes the span over {field}", s.name)));
        }
    }
    Ok(ExtensionReport { field, rank: e.rank(), pairs_checked: pairs, random_checked: samples })
}

/// Structure constants computed entirely over GF(2^k).
pub fn structure_table_over(field: Gf2k, s: &Subalgebra) -> Result<StructureTable> {
    let (lifted, e) = lifted_echelon(field, s)?;
    let n = lifted.len();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let br = lifted[i].bracket(&lifted[j])?;
            if br.is_zero() {
                continue;
            }
            let coeffs = e
                .coordinates(&br)
                .ok_or_else(|| Error::Invariant(format!("{}: bracket ({i}, {j}) escapes the span", s.name)))?;
            entries.push(BracketEntry { i, j, coeffs });
        }
    }
    Ok(StructureTable { field, name: s.name.clone(), labels: s.labels(), entries, metadata: None })
}

const _: () = assert!(FLAT_BITS == N * N);

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> Endo {
        let mut m = Endo::ZERO;
        m.set(i, j, true);
        m
    }

    #[test]
    fn lifted_bracket_matches_gf2() {
        let a = e(0, 1).add(&e(2, 3)).add(&e(1, 2));
        let b = e(1, 0).add(&e(3, 5)).add(&e(2, 2));
        for k in [1u8, 2, 5] {
            let f = Gf2k::new(k).unwrap();
            let (ka, kb) = (KMatrix::lift(f, &a), KMatrix::lift(f, &b));
            assert_eq!(ka.bracket(&kb).unwrap(), KMatrix::lift(f, &a.bracket(&b)));
        }
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = KMatrix::lift(Gf2k::new(2).unwrap(), &e(0, 0));
        let b = KMatrix::lift(Gf2k::new(3).unwrap(), &e(0, 0));
        assert!(matches!(a.add(&b), Err(Error::Domain(_))));
        assert!(k_span_rank(&[a, b]).is_err());
    }

    #[test]
    fn k_rank_examples() {
        let f = Gf2k::new(2).unwrap();
        let w = f.elem(2).unwrap();
        let a = KMatrix::lift(f, &e(0, 1));
        let b = KMatrix::lift(f, &e(1, 0));
        let c = a.scale(w).add(&b).unwrap();
        assert_eq!(k_span_rank(&[a.clone(), b.clone(), c.clone()]).unwrap(), 2);
        assert_eq!(k_span_rank(&[a.clone(), a.scale(w)]).unwrap(), 1);
        let mut ech = KEchelon::new(f, 2);
        ech.insert(&a, 0).unwrap();
        ech.insert(&b, 1).unwrap();
        assert_eq!(ech.coordinates(&c).unwrap(), vec![w, KScalar::ONE]);
    }
}
