//! Operators on the 27-dimensional module A = ⟨e_x | x ∈ ℙ⟩ and the Lie
//! algebras they span.
//!
//! * `H_v` is diagonal with entry (x|v) at x.
//! * `R_Δ` sends e_x to e_{x+s_Δ} for x ∈ Δ and kills the other basis vectors.
//!
//! E6 is spanned by 6 Cartan operators and the 72 root operators. For a line
//! L, D_L uses the 24 roots with s_Δ ∈ L^⊥ and the Cartan operators H_v,
//! v ∈ L^⊥. An order-3 element d stabilizing L folds those roots into fixed
//! roots and orbit sums S_X, which with the d-fixed Cartan span G2.

pub mod verify;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{left_kernel, Echelon};
use crate::quadrangle::{bilinear_form, line_perp, span_dim, Line, QuadrangleCatalog, VVector};
use crate::rootbases::{RootBase, RootBaseId};
use crate::weyl::{element_order, order3_in_normalizer, GroupCatalog, WeylElem};
use crate::Geometry;

pub use crate::gf2::Endo;

/// H_v.
pub fn cartan_op(cat: &QuadrangleCatalog, v: VVector) -> Endo {
    let bits = cat.point_ids().filter(|&x| bilinear_form(cat.vector(x), v) == 1).fold(0u32, |m, x| m | 1 << x.0);
    Endo::diagonal(bits)
}

/// R_Δ.
pub fn root_op(cat: &QuadrangleCatalog, delta: &RootBase) -> Endo {
    let mut m = Endo::ZERO;
    for &x in &delta.points {
        let y = cat.point_of(cat.vector(x) + delta.s).expect("x + s_Δ is singular for x ∈ Δ");
        m.set(x.index(), y.index(), true);
    }
    m
}

#[inline]
pub fn bracket(x: &Endo, y: &Endo) -> Endo {
    x.bracket(y)
}

/// P_w⁻¹ X P_w.
#[inline]
pub fn conjugate_by(w: &WeylElem, x: &Endo) -> Endo {
    x.permute(w.perm())
}

/// The table of the 72 root operators that every construction reads from.
///
/// Kept as data so that a corrupted entry propagates into every check.
#[derive(Clone, Debug)]
pub struct RootOps {
    ops: Vec<Endo>,
}

impl RootOps {
    pub fn build(geo: &Geometry) -> Self {
        RootOps { ops: geo.phi.bases().iter().map(|b| root_op(&geo.quad, b)).collect() }
    }

    #[inline]
    pub fn get(&self, id: RootBaseId) -> &Endo {
        &self.ops[id.index()]
    }

    pub fn flip_entry(&mut self, id: RootBaseId, row: usize, col: usize) {
        self.ops[id.index()].flip(row, col);
    }

    /// R_X + R_X^d + R_X^{d²} for a stored orbit.
    pub fn folded(&self, orbit: &[RootBaseId; 3]) -> Endo {
        Endo::sum(orbit.iter().map(|&id| self.get(id)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisTag {
    Cartan(VVector),
    Root(RootBaseId),
    /// A d-orbit of three root bases, least id first then successive d-images.
    Folded([RootBaseId; 3]),
    /// A combination of the parent algebra's basis, by bit mask.
    Combination(u128),
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisTag::Cartan(v) => write!(f, "H:{}", v.code()),
            BasisTag::Root(id) => write!(f, "R:{}", id.0),
            BasisTag::Folded([a, b, c]) => write!(f, "S:{}-{}-{}", a.0, b.0, c.0),
            BasisTag::Combination(mask) => write!(f, "C:{mask:x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBasisElem {
    pub tag: BasisTag,
    pub op: Endo,
}

impl LieBasisElem {
    pub fn label(&self) -> String {
        self.tag.to_string()
    }
}

/// A list of independent operators, its echelon form, and whether the span
/// has been certified closed under the bracket.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub name: String,
    basis: Vec<LieBasisElem>,
    echelon: Echelon,
    closed: bool,
}

impl Subalgebra {
    /// Fails if the basis is linearly dependent.
    pub fn from_basis(name: impl Into<String>, basis: Vec<LieBasisElem>) -> Result<Self> {
        let name = name.into();
        let mut echelon = Echelon::new();
        for b in &basis {
            if !echelon.insert(&b.op.flatten()) {
                return Err(Error::Invariant(format!("{name}: basis element {} is dependent", b.tag)));
            }
        }
        Ok(Subalgebra { name, basis, echelon, closed: false })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LieBasisElem] {
        &self.basis
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(LieBasisElem::label).collect()
    }

    pub fn ops(&self) -> impl Iterator<Item = &Endo> {
        self.basis.iter().map(|b| &b.op)
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn contains(&self, x: &Endo) -> bool {
        self.echelon.contains(&x.flatten())
    }

    /// Coefficients of `x` in the basis.
    pub fn coordinates(&self, x: &Endo) -> Option<u128> {
        self.echelon.coordinates(&x.flatten())
    }

    pub fn combine(&self, mask: u128) -> Endo {
        Endo::sum(self.basis.iter().enumerate().filter(|(i, _)| mask & (1u128 << i) != 0).map(|(_, b)| &b.op))
    }

    /// First basis pair (i < j) whose bracket escapes the span.
    pub fn closure_failure(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                if !self.contains(&self.basis[i].op.bracket(&self.basis[j].op)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn certify_closure(&mut self) -> Result<()> {
        if let Some((i, j)) = self.closure_failure() {
            return Err(Error::Invariant(format!(
                "{}: [{}, {}] is not in the span",
                self.name, self.basis[i].tag, self.basis[j].tag
            )));
        }
        self.closed = true;
        Ok(())
    }

    pub fn same_span(&self, other: &Subalgebra) -> bool {
        self.echelon.same_span(&other.echelon)
    }
}

/// Greedy GF(2)-basis of the nonzero vectors in code order.
pub fn vector_basis(vectors: &[VVector]) -> Vec<VVector> {
    let mut out: Vec<VVector> = Vec::new();
    for &v in vectors {
        if span_dim(out.iter().copied().chain([v])) > out.len() {
            out.push(v);
        }
    }
    out
}

fn cartan_elems(cat: &QuadrangleCatalog, vs: &[VVector]) -> Vec<LieBasisElem> {
    vs.iter().map(|&v| LieBasisElem { tag: BasisTag::Cartan(v), op: cartan_op(cat, v) }).collect()
}

/// The unit vectors (codes 1, 2, 4, ..., 32), used as the Cartan basis of E6.
pub fn unit_vectors() -> Vec<VVector> {
    (0..6).map(|i| VVector::from_code(1 << i).unwrap()).collect()
}

pub fn build_e6(geo: &Geometry, roots: &RootOps) -> Result<Subalgebra> {
    let mut basis = cartan_elems(&geo.quad, &unit_vectors());
    basis.extend(geo.phi.ids().map(|id| LieBasisElem { tag: BasisTag::Root(id), op: *roots.get(id) }));
    let mut e6 = Subalgebra::from_basis("E6", basis)?;
    if e6.dim() != 78 {
        return Err(Error::Invariant(format!("E6 has dimension {}", e6.dim())));
    }
    e6.certify_closure()?;
    Ok(e6)
}

/// Φ_L = {Δ : s_Δ ∈ L^⊥}.
pub fn phi_l(geo: &Geometry, line: &Line) -> Vec<RootBaseId> {
    let lp = line_perp(&geo.quad, line);
    geo.phi.ids().filter(|&id| lp.contains(&geo.phi.get(id).s)).collect()
}

/// Basis vectors of L^⊥ for H_L.
pub fn h_l_vectors(geo: &Geometry, line: &Line) -> Vec<VVector> {
    vector_basis(&line_perp(&geo.quad, line))
}

pub fn build_dl(geo: &Geometry, roots: &RootOps, line: &Line) -> Result<Subalgebra> {
    let rl = phi_l(geo, line);
    if rl.len() != 24 {
        return Err(Error::Invariant(format!("|R_L| = {} for line {}", rl.len(), line.id.0)));
    }
    let hl = h_l_vectors(geo, line);
    if hl.len() != 4 {
        return Err(Error::Invariant(format!("dim H_L = {} for line {}", hl.len(), line.id.0)));
    }
    let mut basis = cartan_elems(&geo.quad, &hl);
    basis.extend(rl.iter().map(|&id| LieBasisElem { tag: BasisTag::Root(id), op: *roots.get(id) }));
    let mut dl = Subalgebra::from_basis(format!("D4(L={})", line.id.0), basis)?;
    if dl.dim() != 28 {
        return Err(Error::Invariant(format!("dim D_L = {}", dl.dim())));
    }
    dl.certify_closure()?;
    Ok(dl)
}

/// The d-orbits on Φ_L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Folding {
    pub fixed: Vec<RootBaseId>,
    pub orbits: Vec<[RootBaseId; 3]>,
}

impl Folding {
    pub fn counts(&self) -> (usize, usize) {
        (self.fixed.len(), self.orbits.len())
    }

    pub fn is_g2_pattern(&self) -> bool {
        self.counts() == (6, 6)
    }
}

fn check_order3_normalizer(geo: &Geometry, line: &Line, d: &WeylElem) -> Result<()> {
    if d.act_line(&geo.quad, line.id) != line.id {
        return Err(Error::Precondition(format!("d does not stabilize line {}", line.id.0)));
    }
    if element_order(d) != 3 {
        return Err(Error::Precondition(format!("d has order {}, not 3", element_order(d))));
    }
    Ok(())
}

pub fn fold_roots(geo: &Geometry, line: &Line, d: &WeylElem) -> Result<Folding> {
    check_order3_normalizer(geo, line, d)?;
    let mut fixed = Vec::new();
    let mut orbits = Vec::new();
    let mut done = 0u128;
    for id in phi_l(geo, line) {
        if done & (1u128 << id.0) != 0 {
            continue;
        }
        let a = d.act_root_base(geo, id);
        if a == id {
            fixed.push(id);
            done |= 1u128 << id.0;
            continue;
        }
        let b = d.act_root_base(geo, a);
        debug_assert_eq!(d.act_root_base(geo, b), id);
        // ids come in ascending order, so `id` is the least of its orbit
        orbits.push([id, a, b]);
        done |= (1u128 << id.0) | (1u128 << a.0) | (1u128 << b.0);
    }
    Ok(Folding { fixed, orbits })
}

/// Vectors of L^⊥ fixed by d.
pub fn fixed_perp_vectors(geo: &Geometry, line: &Line, d: &WeylElem) -> Vec<VVector> {
    line_perp(&geo.quad, line).into_iter().filter(|&v| d.apply_vec(&geo.quad, v) == v).collect()
}

/// C_{H_L}(d) ⊕ ⟨R_Δ fixed⟩ ⊕ ⟨S_X⟩.
pub fn build_g2(geo: &Geometry, roots: &RootOps, line: &Line, d: &WeylElem) -> Result<Subalgebra> {
    let folding = fold_roots(geo, line, d)?;
    if !folding.is_g2_pattern() {
        return Err(Error::Precondition(format!(
            "d folds R_L into {} fixed roots and {} orbits, need 6 and 6",
            folding.fixed.len(),
            folding.orbits.len()
        )));
    }
    let cartan = vector_basis(&fixed_perp_vectors(geo, line, d));
    if cartan.len() != 2 {
        return Err(Error::Invariant(format!("dim C_(H_L)(d) = {}", cartan.len())));
    }
    let mut basis = cartan_elems(&geo.quad, &cartan);
    basis.extend(folding.fixed.iter().map(|&id| LieBasisElem { tag: BasisTag::Root(id), op: *roots.get(id) }));
    basis.extend(folding.orbits.iter().map(|o| LieBasisElem { tag: BasisTag::Folded(*o), op: roots.folded(o) }));
    let mut g2 = Subalgebra::from_basis(format!("G2(L={})", line.id.0), basis)?;
    if g2.dim() != 14 {
        return Err(Error::Invariant(format!("dim G = {}", g2.dim())));
    }
    for b in g2.basis() {
        if conjugate_by(d, &b.op) != b.op {
            return Err(Error::Invariant(format!("basis element {} is not d-fixed", b.tag)));
        }
    }
    g2.certify_closure()?;
    Ok(g2)
}

/// Fixed space of conjugation by d on a d-stable subalgebra.
pub fn centralizer(s: &Subalgebra, d: &WeylElem) -> Result<Subalgebra> {
    let rows: Vec<u128> = s
        .basis()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            s.coordinates(&conjugate_by(d, &b.op))
                .map(|c| c ^ (1u128 << i))
                .ok_or_else(|| Error::Precondition(format!("{} is not d-stable at {}", s.name, b.tag)))
        })
        .collect::<Result<_>>()?;
    let basis = left_kernel(&rows)
        .into_iter()
        .map(|mask| LieBasisElem { tag: BasisTag::Combination(mask), op: s.combine(mask) })
        .collect();
    let mut c = Subalgebra::from_basis(format!("C_{}(d)", s.name), basis)?;
    c.certify_closure()?;
    Ok(c)
}

/// How to pick the order-3 element of N_W(L).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DPolicy {
    /// The least order-3 element whose folding is (6, 6).
    Auto,
    /// Position in the canonically sorted list of order-3 elements.
    Index(usize),
}

pub fn select_d(group: &GroupCatalog, geo: &Geometry, line: &Line, policy: DPolicy) -> Result<WeylElem> {
    let candidates = order3_in_normalizer(group, geo, line.id)?;
    match policy {
        DPolicy::Auto => {
            for d in candidates {
                if fold_roots(geo, line, &d)?.is_g2_pattern() {
                    return Ok(d);
                }
            }
            Err(Error::Invariant(format!("no order-3 element of N_W(L{}) folds as (6,6)", line.id.0)))
        }
        DPolicy::Index(n) => candidates.get(n).copied().ok_or_else(|| {
            Error::Precondition(format!("d index {n} out of range (N_W(L) has {} order-3 elements)", candidates.len()))
        }),
    }
}

/// Weights of the non-Cartan basis elements of a G2 built by [`build_g2`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    pub cartan: Vec<VVector>,
    /// (label, λ(H_{v₁}), λ(H_{v₂})) per non-Cartan basis element.
    pub weights: Vec<(String, [u8; 2])>,
    pub multiplicities: BTreeMap<[u8; 2], usize>,
}

pub fn weight_decomposition(geo: &Geometry, g: &Subalgebra) -> Result<WeightReport> {
    let cartan: Vec<VVector> = g
        .basis()
        .iter()
        .filter_map(|b| match b.tag {
            BasisTag::Cartan(v) => Some(v),
            _ => None,
        })
        .collect();
    if cartan.len() != 2 {
        return Err(Error::Precondition(format!("{} has {} Cartan elements", g.name, cartan.len())));
    }
    let hs: Vec<Endo> = cartan.iter().map(|&v| cartan_op(&geo.quad, v)).collect();
    let mut weights = Vec::new();
    let mut multiplicities = BTreeMap::new();
    for b in g.basis() {
        let s = match b.tag {
            BasisTag::Cartan(_) => continue,
            BasisTag::Root(id) => geo.phi.get(id).s,
            BasisTag::Folded(o) => geo.phi.get(o[0]).s,
            BasisTag::Combination(_) => {
                return Err(Error::Precondition("weights need tagged root elements".into()));
            }
        };
        let mut w = [0u8; 2];
        for (k, h) in hs.iter().enumerate() {
            let br = h.bracket(&b.op);
            let lambda = if br.is_zero() {
                0
            } else if br == b.op {
                1
            } else {
                return Err(Error::Invariant(format!("[H_{}, {}] is not a multiple of it", cartan[k].code(), b.tag)));
            };
            let predicted = bilinear_form(s, cartan[k]);
            if lambda != predicted {
                return Err(Error::Invariant(format!(
                    "weight of {} on H_{} is {lambda}, expected (s|v) = {predicted}",
                    b.tag,
                    cartan[k].code()
                )));
            }
            w[k] = lambda;
        }
        weights.push((b.label(), w));
        *multiplicities.entry(w).or_insert(0) += 1;
    }
    Ok(WeightReport { cartan, weights, multiplicities })
}

/// Dimension of the ideal generated by each basis element.
pub fn ideal_scan(s: &Subalgebra) -> Vec<usize> {
    s.ops().map(|x| ideal_dim(s, x)).collect()
}

pub fn ideal_dim(s: &Subalgebra, x: &Endo) -> usize {
    let mut ideal = Echelon::new();
    if !ideal.insert(&x.flatten()) {
        return 0;
    }
    let mut frontier = vec![*x];
    while let Some(y) = frontier.pop() {
        for b in s.ops() {
            let z = y.bracket(b);
            if ideal.insert(&z.flatten()) {
                frontier.push(z);
            }
        }
    }
    ideal.rank()
}

/// Index triples (i, j, k) whose Jacobi sum is nonzero.
pub fn jacobi_violations(
    s: &Subalgebra,
    triples: impl IntoIterator<Item = (usize, usize, usize)>,
) -> Vec<(usize, usize, usize)> {
    let ops: Vec<&Endo> = s.ops().collect();
    triples
        .into_iter()
        .filter(|&(i, j, k)| {
            let (x, y, z) = (ops[i], ops[j], ops[k]);
            !x.bracket(y).bracket(z).add(&y.bracket(z).bracket(x)).add(&z.bracket(x).bracket(y)).is_zero()
        })
        .collect()
}

pub fn all_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
}

#[cfg(test)]
mod tests;
