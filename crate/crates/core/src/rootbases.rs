//! Root bases: six singular points forming a GF(2)-basis of V with pairwise
//! form value 1.
//!
//! Every root base Δ has an exterior sum s_Δ and a dual Δ* = Δ + s_Δ; each of
//! the 36 exterior vectors is the sum of exactly two root bases, giving 72.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::quadrangle::{quadratic_form, reflect, span_dim, Line, PointId, QuadrangleCatalog, VVector};

pub const NUM_ROOT_BASES: usize = 72;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootBaseId(pub u8);

impl RootBaseId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A root base as a sorted 6-tuple of points together with its sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootBase {
    pub points: [PointId; 6],
    pub s: VVector,
}

impl RootBase {
    /// Validates the root-base conditions on an arbitrary point set.
    pub fn from_points(cat: &QuadrangleCatalog, pts: &[PointId]) -> Result<Self> {
        let set: BTreeSet<PointId> = pts.iter().copied().collect();
        if set.len() != 6 || pts.len() != 6 {
            return Err(Error::Invariant(format!("root base needs 6 distinct points, got {}", set.len())));
        }
        let points: [PointId; 6] = set.into_iter().collect::<Vec<_>>().try_into().unwrap();
        for (i, &x) in points.iter().enumerate() {
            for &y in &points[i + 1..] {
                if cat.form(x, y) != 1 {
                    return Err(Error::Invariant(format!("points {} and {} are orthogonal", x.0, y.0)));
                }
            }
        }
        if span_dim(points.iter().map(|&p| cat.vector(p))) != 6 {
            return Err(Error::Invariant("points do not span V".into()));
        }
        let s = points.iter().fold(VVector::ZERO, |acc, &p| acc + cat.vector(p));
        Ok(RootBase { points, s })
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        self.points.iter().fold(0, |m, p| m | (1 << p.0))
    }

    pub fn contains(&self, x: PointId) -> bool {
        self.points.contains(&x)
    }
}

/// Δ_{x,y} = {x} ∪ {v ≠ y : (x|v) = 1, (y|v) = 0} for (x|y) = 1.
///
/// `y` itself satisfies both conditions and is excluded; the resulting root
/// base is the one containing x whose sum is x + y.
pub fn root_base_from_pair(cat: &QuadrangleCatalog, x: PointId, y: PointId) -> Result<RootBase> {
    if cat.form(x, y) != 1 {
        return Err(Error::Precondition(format!("(x|y) must be 1 for points {} and {}", x.0, y.0)));
    }
    let mut pts = vec![x];
    pts.extend(cat.point_ids().filter(|&v| v != y && cat.form(x, v) == 1 && cat.form(y, v) == 0));
    RootBase::from_points(cat, &pts)
}

/// Translates every point of Δ by s_Δ.
pub fn dual(cat: &QuadrangleCatalog, delta: &RootBase) -> Result<RootBase> {
    let pts: Vec<PointId> = delta
        .points
        .iter()
        .map(|&p| {
            cat.point_of(cat.vector(p) + delta.s)
                .ok_or_else(|| Error::Invariant("translate of a root-base point is not singular".into()))
        })
        .collect::<Result<_>>()?;
    RootBase::from_points(cat, &pts)
}

/// Δ₀ = {v ∈ ℙ : (v|s_Δ) = 0}.
pub fn delta_zero(cat: &QuadrangleCatalog, delta: &RootBase) -> Vec<PointId> {
    cat.point_ids().filter(|&p| crate::quadrangle::bilinear_form(cat.vector(p), delta.s) == 0).collect()
}

/// Image of a point set under the reflection σ_s.
pub fn reflect_points(cat: &QuadrangleCatalog, pts: &[PointId], s: VVector) -> Vec<PointId> {
    let mut out: Vec<PointId> =
        pts.iter().map(|&p| cat.point_of(reflect(cat.vector(p), s)).expect("reflections permute points")).collect();
    out.sort();
    out
}

#[derive(Clone, Debug)]
pub struct PhiCatalog {
    bases: Vec<RootBase>,
    dual: Vec<RootBaseId>,
    by_s: HashMap<VVector, [RootBaseId; 2]>,
    index: HashMap<[PointId; 6], RootBaseId>,
}

impl PhiCatalog {
    /// All root bases, enumerated through Δ_{x,y} over every pair with (x|y) = 1.
    pub fn enumerate(cat: &QuadrangleCatalog) -> Result<Self> {
        let mut found = BTreeSet::new();
        for x in cat.point_ids() {
            for y in cat.point_ids() {
                if cat.form(x, y) == 1 {
                    found.insert(root_base_from_pair(cat, x, y)?.points);
                }
            }
        }
        let bases: Vec<RootBase> = found.iter().map(|pts| RootBase::from_points(cat, pts)).collect::<Result<_>>()?;
        if bases.len() != NUM_ROOT_BASES {
            return Err(Error::Invariant(format!("expected 72 root bases, found {}", bases.len())));
        }
        let index: HashMap<[PointId; 6], RootBaseId> =
            bases.iter().enumerate().map(|(i, b)| (b.points, RootBaseId(i as u8))).collect();

        let mut dual_ids = Vec::with_capacity(bases.len());
        let mut by_s: HashMap<VVector, Vec<RootBaseId>> = HashMap::new();
        for (i, b) in bases.iter().enumerate() {
            if quadratic_form(b.s) != 1 {
                return Err(Error::Invariant(format!("s of root base {i} is singular")));
            }
            let d = dual(cat, b)?;
            dual_ids.push(
                *index.get(&d.points).ok_or_else(|| Error::Invariant(format!("dual of root base {i} is missing")))?,
            );
            by_s.entry(b.s).or_default().push(RootBaseId(i as u8));
        }
        let by_s = by_s
            .into_iter()
            .map(|(s, ids)| {
                <[RootBaseId; 2]>::try_from(ids)
                    .map(|pair| (s, pair))
                    .map_err(|v| Error::Invariant(format!("{} root bases share s = {}", v.len(), s.code())))
            })
            .collect::<Result<_>>()?;
        Ok(PhiCatalog { bases, dual: dual_ids, by_s, index })
    }

    pub fn bases(&self) -> &[RootBase] {
        &self.bases
    }

    pub fn ids(&self) -> impl Iterator<Item = RootBaseId> {
        (0..self.bases.len() as u8).map(RootBaseId)
    }

    #[inline]
    pub fn get(&self, id: RootBaseId) -> &RootBase {
        &self.bases[id.index()]
    }

    pub fn by_id(&self, id: usize) -> Result<RootBaseId> {
        if id < self.bases.len() {
            Ok(RootBaseId(id as u8))
        } else {
            Err(Error::Precondition(format!("root base id {id} out of range")))
        }
    }

    #[inline]
    pub fn dual(&self, id: RootBaseId) -> RootBaseId {
        self.dual[id.index()]
    }

    /// The two root bases whose sum is `s`, if `s` is exterior.
    pub fn by_s(&self, s: VVector) -> Option<[RootBaseId; 2]> {
        self.by_s.get(&s).copied()
    }

    pub fn distinct_sums(&self) -> usize {
        self.by_s.len()
    }

    /// Id of the root base with the given point set, in any order.
    pub fn lookup(&self, pts: &[PointId]) -> Option<RootBaseId> {
        let mut key: [PointId; 6] = pts.try_into().ok()?;
        key.sort();
        self.index.get(&key).copied()
    }

    /// Δ^{σ_s} as an id, when the image is a root base.
    pub fn reflect(&self, cat: &QuadrangleCatalog, id: RootBaseId, s: VVector) -> Option<RootBaseId> {
        self.lookup(&reflect_points(cat, &self.get(id).points, s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCase {
    /// (s_Δ|s_Γ) = 0.
    Orthogonal,
    /// (s_Δ|s_Γ) = 1 and Δ ∩ Γ ≠ ∅.
    Meeting,
    /// (s_Δ|s_Γ) = 1 and Δ ∩ Γ = ∅.
    Disjoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub form: u8,
    /// |Δ∩Γ|, |Δ∩Γ*|, |Δ*∩Γ|, |Δ*∩Γ*|.
    pub meets: [u32; 4],
    pub case: PairCase,
    /// Δ^{σ_Γ}, when it is a root base.
    pub delta_reflected: Option<RootBaseId>,
    /// Γ^{σ_Δ}, when it is a root base.
    pub gamma_reflected: Option<RootBaseId>,
}

pub fn classify_pair(
    cat: &QuadrangleCatalog,
    phi: &PhiCatalog,
    delta: RootBaseId,
    gamma: RootBaseId,
) -> Result<PairClass> {
    let (d, g) = (phi.get(delta), phi.get(gamma));
    if d.s == g.s {
        return Err(Error::Precondition(format!("root bases {} and {} have the same sum", delta.0, gamma.0)));
    }
    let (ds, gs) = (phi.get(phi.dual(delta)), phi.get(phi.dual(gamma)));
    let meet = |a: &RootBase, b: &RootBase| (a.mask() & b.mask()).count_ones();
    let meets = [meet(d, g), meet(d, gs), meet(ds, g), meet(ds, gs)];
    let form = crate::quadrangle::bilinear_form(d.s, g.s);
    let case = match (form, meets[0]) {
        (0, _) => PairCase::Orthogonal,
        (_, 0) => PairCase::Disjoint,
        _ => PairCase::Meeting,
    };
    Ok(PairClass {
        form,
        meets,
        case,
        delta_reflected: phi.reflect(cat, delta, g.s),
        gamma_reflected: phi.reflect(cat, gamma, d.s),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineClass {
    ContainedInDeltaZero,
    Transversal,
}

pub fn classify_line(phi: &PhiCatalog, line: &Line, delta: RootBaseId) -> Result<LineClass> {
    let d = phi.get(delta);
    let ds = phi.get(phi.dual(delta));
    let mut counts = [0u32; 3];
    for &p in &line.points {
        if d.contains(p) {
            counts[0] += 1;
        } else if ds.contains(p) {
            counts[1] += 1;
        } else {
            counts[2] += 1;
        }
    }
    match counts {
        [0, 0, 3] => Ok(LineClass::ContainedInDeltaZero),
        [1, 1, 1] => Ok(LineClass::Transversal),
        other => Err(Error::Invariant(format!(
            "line {} meets Δ, Δ*, Δ₀ of root base {} in {:?} points",
            line.id.0, delta.0, other
        ))),
    }
}
