//! The quadratic space V = GF(4)³ over GF(2), its 27 singular points, 36
//! exterior points and 45 totally singular lines.
//!
//! A vector is stored as its 6-bit code `16·a + 4·b + c` where `a, b, c` are
//! the GF(4) codes of the coordinates, so vector addition is XOR of codes.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{f4_mul, f4_trace, F4Elem};

pub const NUM_POINTS: usize = 27;
pub const NUM_EXTERIOR: usize = 36;
pub const NUM_LINES: usize = 45;
pub const LINES_PER_POINT: usize = 5;

/// A vector of V, identified with its code in `0..64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VVector(u8);

impl VVector {
    pub const ZERO: VVector = VVector(0);

    pub fn from_code(code: u8) -> Result<Self> {
        if code < 64 {
            Ok(VVector(code))
        } else {
            Err(Error::Domain(format!("vector code {code} out of range")))
        }
    }

    pub fn from_coords(c: [F4Elem; 3]) -> Self {
        VVector(16 * c[0].code() + 4 * c[1].code() + c[2].code())
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    pub fn coords(self) -> [F4Elem; 3] {
        // codes are masked to 0..4, so from_code cannot fail
        let c = |s: u8| F4Elem::from_code((self.0 >> s) & 3).unwrap();
        [c(4), c(2), c(0)]
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// All 64 vectors in code order.
    pub fn all() -> impl Iterator<Item = VVector> {
        (0..64u8).map(VVector)
    }
}

impl std::ops::Add for VVector {
    type Output = VVector;
    // coordinates are GF(4) elements packed two bits each, added by XOR
    #[allow(clippy::suspicious_arithmetic_impl)]
    #[inline]
    fn add(self, rhs: VVector) -> VVector {
        VVector(self.0 ^ rhs.0)
    }
}

impl fmt::Display for VVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coords();
        write!(f, "({a},{b},{c})")
    }
}

/// Q(x) = Σ xᵢ·x̄ᵢ. Since x·x̄ = 1 for nonzero x this is the parity of the
/// number of nonzero coordinates.
#[inline]
pub fn quadratic_form(v: VVector) -> u8 {
    let c = v.0;
    let nz = ((c >> 4) & 3 != 0) as u8 + ((c >> 2) & 3 != 0) as u8 + (c & 3 != 0) as u8;
    nz & 1
}

/// Polar form (u|v) = Q(u+v) + Q(u) + Q(v).
#[inline]
pub fn bilinear_form(u: VVector, v: VVector) -> u8 {
    quadratic_form(u + v) ^ quadratic_form(u) ^ quadratic_form(v)
}

/// The same form computed as Σ Tr(uᵢ·v̄ᵢ).
pub fn bilinear_form_trace(u: VVector, v: VVector) -> u8 {
    u.coords().iter().zip(v.coords().iter()).map(|(&a, &b)| f4_trace(f4_mul(a, b.conj()))).fold(0, |acc, t| acc ^ t)
}

/// x ↦ x + (x|s)·s.
#[inline]
pub fn reflect(x: VVector, s: VVector) -> VVector {
    if bilinear_form(x, s) == 1 {
        x + s
    } else {
        x
    }
}

/// Dimension over GF(2) of the span of the given vectors.
pub fn span_dim(vectors: impl IntoIterator<Item = VVector>) -> usize {
    let mut basis: Vec<u8> = Vec::new();
    for v in vectors {
        let mut x = v.0;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Index into the code-ascending list of the 27 singular points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub u8);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineId(pub u8);

impl LineId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A totally singular 2-space, stored by its three nonzero vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub id: LineId,
    pub points: [PointId; 3],
    pub basis: [VVector; 2],
}

impl Line {
    pub fn contains(&self, x: PointId) -> bool {
        self.points.contains(&x)
    }
}

#[derive(Clone, Debug)]
pub struct QuadrangleCatalog {
    points: Vec<VVector>,
    point_of_code: [Option<PointId>; 64],
    exterior: Vec<VVector>,
    lines: Vec<Line>,
    line_of_triple: HashMap<[PointId; 3], LineId>,
    /// Row x holds bit y iff (x|y) = 1.
    gram: [u32; NUM_POINTS],
    incidence: Vec<[LineId; LINES_PER_POINT]>,
    /// Six points forming a basis of V, and the coordinates of every vector in it.
    point_basis: [PointId; 6],
    coords_in_point_basis: [u8; 64],
}

impl QuadrangleCatalog {
    /// Enumerates points, exterior points and lines in canonical order.
    pub fn build() -> Self {
        let points: Vec<VVector> = VVector::all().filter(|v| !v.is_zero() && quadratic_form(*v) == 0).collect();
        let exterior: Vec<VVector> = VVector::all().filter(|v| quadratic_form(*v) == 1).collect();

        let mut point_of_code = [None; 64];
        for (i, p) in points.iter().enumerate() {
            point_of_code[p.code() as usize] = Some(PointId(i as u8));
        }

        let mut gram = [0u32; NUM_POINTS];
        for (i, &x) in points.iter().enumerate() {
            for (j, &y) in points.iter().enumerate() {
                if bilinear_form(x, y) == 1 {
                    gram[i] |= 1 << j;
                }
            }
        }

        // x, y distinct and orthogonal => x + y is singular and {x, y, x+y} is a line
        let mut triples = Vec::new();
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if gram[i] & (1 << j) != 0 {
                    continue;
                }
                let k = point_of_code[(points[i] + points[j]).code() as usize]
                    .expect("sum of orthogonal points is singular")
                    .index();
                if k > j {
                    triples.push([PointId(i as u8), PointId(j as u8), PointId(k as u8)]);
                }
            }
        }
        triples.sort();
        let lines: Vec<Line> = triples
            .iter()
            .enumerate()
            .map(|(id, t)| Line {
                id: LineId(id as u8),
                points: *t,
                basis: [points[t[0].index()], points[t[1].index()]],
            })
            .collect();
        let line_of_triple = lines.iter().map(|l| (l.points, l.id)).collect();

        let mut inc: Vec<Vec<LineId>> = vec![Vec::new(); points.len()];
        for l in &lines {
            for p in l.points {
                inc[p.index()].push(l.id);
            }
        }
        let incidence = inc
            .into_iter()
            .map(|v| <[LineId; LINES_PER_POINT]>::try_from(v).expect("five lines through each point"))
            .collect();

        let mut basis_codes: Vec<u8> = Vec::new();
        let mut point_basis = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if span_dim(basis_codes.iter().map(|&c| VVector(c)).chain([*p])) > basis_codes.len() {
                basis_codes.push(p.code());
                point_basis.push(PointId(i as u8));
            }
        }
        let point_basis: [PointId; 6] = point_basis.try_into().expect("points span V");
        let mut coords_in_point_basis = [0u8; 64];
        for mask in 0..64u8 {
            let v = (0..6).filter(|b| mask & (1 << b) != 0).fold(0u8, |acc, b| acc ^ basis_codes[b]);
            coords_in_point_basis[v as usize] = mask;
        }

        QuadrangleCatalog {
            points,
            point_of_code,
            exterior,
            lines,
            line_of_triple,
            gram,
            incidence,
            point_basis,
            coords_in_point_basis,
        }
    }

    pub fn points(&self) -> &[VVector] {
        &self.points
    }

    pub fn point_ids(&self) -> impl Iterator<Item = PointId> {
        (0..NUM_POINTS as u8).map(PointId)
    }

    #[inline]
    pub fn vector(&self, p: PointId) -> VVector {
        self.points[p.index()]
    }

    #[inline]
    pub fn point_of(&self, v: VVector) -> Option<PointId> {
        self.point_of_code[v.code() as usize]
    }

    pub fn exterior(&self) -> &[VVector] {
        &self.exterior
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line(&self, id: LineId) -> &Line {
        &self.lines[id.index()]
    }

    pub fn line_by_id(&self, id: usize) -> Result<&Line> {
        self.lines.get(id).ok_or_else(|| Error::Precondition(format!("line id {id} out of range 0..{NUM_LINES}")))
    }

    /// Looks up the line with the given (unsorted) point triple.
    pub fn line_of_points(&self, mut pts: [PointId; 3]) -> Option<LineId> {
        pts.sort();
        self.line_of_triple.get(&pts).copied()
    }

    /// Bit row of the Gram matrix: bit y is (x|y).
    #[inline]
    pub fn gram_row(&self, x: PointId) -> u32 {
        self.gram[x.index()]
    }

    #[inline]
    pub fn form(&self, x: PointId, y: PointId) -> u8 {
        ((self.gram[x.index()] >> y.0) & 1) as u8
    }

    pub fn lines_through(&self, x: PointId) -> Vec<&Line> {
        self.incidence[x.index()].iter().map(|&l| self.line(l)).collect()
    }

    /// Distinct points x, y are collinear iff (x|y) = 0.
    pub fn collinear(&self, x: PointId, y: PointId) -> bool {
        x != y && self.form(x, y) == 0
    }

    /// The unique point of `line` collinear with `x`, for `x` off the line.
    pub fn collinear_point(&self, x: PointId, line: &Line) -> Result<PointId> {
        if line.contains(x) {
            return Err(Error::Precondition(format!("point {} lies on line {}", x.0, line.id.0)));
        }
        let mut hits = line.points.iter().copied().filter(|&y| self.collinear(x, y));
        match (hits.next(), hits.next()) {
            (Some(y), None) => Ok(y),
            _ => Err(Error::Invariant(format!("quadrangle axiom fails for point {} and line {}", x.0, line.id.0))),
        }
    }

    /// Basis of six points used to extend point permutations linearly.
    pub fn point_basis(&self) -> [PointId; 6] {
        self.point_basis
    }

    /// Bit mask of the point-basis members summing to `v`.
    #[inline]
    pub fn coords_in_point_basis(&self, v: VVector) -> u8 {
        self.coords_in_point_basis[v.code() as usize]
    }
}

/// {v ∈ V : (v|s) = 0 for all s ∈ S}, in code order.
pub fn perp(set: &[VVector]) -> Vec<VVector> {
    VVector::all().filter(|&v| set.iter().all(|&s| bilinear_form(v, s) == 0)).collect()
}

/// The perp of the three points of a line.
pub fn line_perp(cat: &QuadrangleCatalog, line: &Line) -> Vec<VVector> {
    let vs: Vec<VVector> = line.points.iter().map(|&p| cat.vector(p)).collect();
    perp(&vs)
}
