//! The Weyl group W(E6) ≅ O₆⁻(2), realized as permutations of the 27 points.
//!
//! Elements act on the right: `x^(gh) = (x^g)^h`, and `perm[i]` is the image
//! of point `i`. The whole group (51840 elements) is enumerated by
//! breadth-first closure over the 36 reflections.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrangle::{quadratic_form, reflect, LineId, PointId, QuadrangleCatalog, VVector, NUM_POINTS};
use crate::rootbases::RootBaseId;
use crate::Geometry;

pub const WEYL_ORDER: usize = 51840;
pub const DEFAULT_CLOSURE_BOUND: usize = 100_000;

pub type Perm = [u8; NUM_POINTS];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylElem {
    perm: Perm,
}

impl fmt::Debug for WeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElem({:?})", &self.perm[..])
    }
}

impl WeylElem {
    pub fn identity() -> Self {
        let mut perm = [0u8; NUM_POINTS];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i as u8;
        }
        WeylElem { perm }
    }

    /// Accepts a point permutation only if it extends to a Q-preserving
    /// linear map of V.
    pub fn from_perm(cat: &QuadrangleCatalog, perm: Perm) -> Result<Self> {
        let mut seen = 0u32;
        for &p in &perm {
            if p as usize >= NUM_POINTS || seen & (1 << p) != 0 {
                return Err(Error::Precondition("not a permutation of the 27 points".into()));
            }
            seen |= 1 << p;
        }
        let g = WeylElem { perm };
        for x in cat.point_ids() {
            if g.apply_vec(cat, cat.vector(x)) != cat.vector(g.apply(x)) {
                return Err(Error::Precondition(format!(
                    "permutation is not linear (point {} inconsistent with the basis images)",
                    x.0
                )));
            }
        }
        if VVector::all().any(|v| quadratic_form(g.apply_vec(cat, v)) != quadratic_form(v)) {
            return Err(Error::Precondition("linear extension does not preserve Q".into()));
        }
        Ok(g)
    }

    #[inline]
    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    #[inline]
    pub fn apply(&self, x: PointId) -> PointId {
        PointId(self.perm[x.index()])
    }

    /// Image of an arbitrary vector under the linear extension.
    pub fn apply_vec(&self, cat: &QuadrangleCatalog, v: VVector) -> VVector {
        let mask = cat.coords_in_point_basis(v);
        cat.point_basis()
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .fold(VVector::ZERO, |acc, (_, &p)| acc + cat.vector(self.apply(p)))
    }

    /// Images of the six unit vectors, i.e. the rows of the 6×6 matrix over GF(2).
    pub fn matrix(&self, cat: &QuadrangleCatalog) -> [VVector; 6] {
        std::array::from_fn(|i| self.apply_vec(cat, VVector::from_code(1 << i).unwrap()))
    }

    /// `self` followed by `other`.
    #[inline]
    pub fn then(&self, other: &WeylElem) -> WeylElem {
        WeylElem { perm: std::array::from_fn(|i| other.perm[self.perm[i] as usize]) }
    }

    pub fn inverse(&self) -> WeylElem {
        let mut perm = [0u8; NUM_POINTS];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = i as u8;
        }
        WeylElem { perm }
    }

    pub fn pow(&self, n: u32) -> WeylElem {
        (0..n).fold(WeylElem::identity(), |acc, _| acc.then(self))
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    pub fn order(&self) -> u32 {
        element_order(self)
    }

    pub fn act_line(&self, cat: &QuadrangleCatalog, l: LineId) -> LineId {
        let pts = cat.line(l).points.map(|p| self.apply(p));
        cat.line_of_points(pts).expect("Weyl elements permute lines")
    }

    pub fn act_root_base(&self, geo: &Geometry, id: RootBaseId) -> RootBaseId {
        let pts: Vec<PointId> = geo.phi.get(id).points.iter().map(|&p| self.apply(p)).collect();
        geo.phi.lookup(&pts).expect("Weyl elements permute root bases")
    }
}

/// σ_v : x ↦ x + (x|v)v for anisotropic v.
pub fn reflection(cat: &QuadrangleCatalog, v: VVector) -> Result<WeylElem> {
    if v.is_zero() || quadratic_form(v) != 1 {
        return Err(Error::Precondition(format!("reflection vector {} is not anisotropic", v.code())));
    }
    let perm = std::array::from_fn(|i| {
        let x = cat.vector(PointId(i as u8));
        cat.point_of(reflect(x, v)).expect("reflection preserves Q").0
    });
    WeylElem::from_perm(cat, perm)
}

/// The 36 reflections, in exterior-vector code order.
pub fn all_reflections(cat: &QuadrangleCatalog) -> Vec<WeylElem> {
    cat.exterior().iter().map(|&v| reflection(cat, v).expect("exterior vectors are anisotropic")).collect()
}

pub fn element_order(g: &WeylElem) -> u32 {
    let mut h = *g;
    let mut n = 1;
    while !h.is_identity() {
        h = h.then(g);
        n += 1;
    }
    n
}

/// Every element of a finite permutation group, sorted by permutation.
#[derive(Clone, Debug)]
pub struct GroupCatalog {
    elements: Vec<WeylElem>,
    index: HashMap<Perm, u32>,
}

impl GroupCatalog {
    pub fn elements(&self) -> &[WeylElem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, g: &WeylElem) -> Option<usize> {
        self.index.get(&g.perm).map(|&i| i as usize)
    }

    pub fn contains(&self, g: &WeylElem) -> bool {
        self.index.contains_key(&g.perm)
    }
}

/// Breadth-first closure of `gens` under composition. Fails once more than
/// `bound` elements have been produced.
pub fn generate_group(gens: &[WeylElem], bound: usize) -> Result<GroupCatalog> {
    let id = WeylElem::identity();
    let mut seen: HashSet<Perm> = HashSet::from([id.perm]);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.then(s);
            if !seen.contains(&h.perm) {
                if elements.len() >= bound {
                    return Err(Error::ClosureBound { bound });
                }
                seen.insert(h.perm);
                elements.push(h);
                queue.push_back(h);
            }
        }
    }
    elements.sort();
    let index = elements.iter().enumerate().map(|(i, g)| (g.perm, i as u32)).collect();
    Ok(GroupCatalog { elements, index })
}

/// W generated by all 36 reflections.
pub fn weyl_group(cat: &QuadrangleCatalog) -> Result<GroupCatalog> {
    generate_group(&all_reflections(cat), DEFAULT_CLOSURE_BOUND)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    OnPoints,
    OnLines,
    OnRootBases,
}

impl FromStr for Action {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "on-points" => Ok(Action::OnPoints),
            "on-lines" => Ok(Action::OnLines),
            "on-rootbases" => Ok(Action::OnRootBases),
            _ => Err(Error::Unknown { kind: "action", name: s.to_string() }),
        }
    }
}

impl Action {
    fn domain_size(self) -> usize {
        match self {
            Action::OnPoints => crate::quadrangle::NUM_POINTS,
            Action::OnLines => crate::quadrangle::NUM_LINES,
            Action::OnRootBases => crate::rootbases::NUM_ROOT_BASES,
        }
    }

    /// Image of the object with index `seed` under `g`.
    pub fn apply(self, geo: &Geometry, g: &WeylElem, seed: usize) -> usize {
        match self {
            Action::OnPoints => g.apply(PointId(seed as u8)).index(),
            Action::OnLines => g.act_line(&geo.quad, LineId(seed as u8)).index(),
            Action::OnRootBases => g.act_root_base(geo, RootBaseId(seed as u8)).index(),
        }
    }

    fn check_seed(self, seed: usize) -> Result<()> {
        if seed < self.domain_size() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("seed {seed} out of range for {self:?}")))
        }
    }
}

pub fn orbit(group: &GroupCatalog, geo: &Geometry, action: Action, seed: usize) -> Result<BTreeSet<usize>> {
    action.check_seed(seed)?;
    Ok(group.elements().iter().map(|g| action.apply(geo, g, seed)).collect())
}

pub fn stabilizer(group: &GroupCatalog, geo: &Geometry, action: Action, seed: usize) -> Result<Vec<WeylElem>> {
    action.check_seed(seed)?;
    Ok(group.elements().iter().filter(|g| action.apply(geo, g, seed) == seed).copied().collect())
}

/// N_W(L), read as the setwise stabilizer of the line.
pub fn line_normalizer(group: &GroupCatalog, geo: &Geometry, line: LineId) -> Result<Vec<WeylElem>> {
    stabilizer(group, geo, Action::OnLines, line.index())
}

/// Elements of order exactly 3 in N_W(L), in canonical (permutation) order.
pub fn order3_in_normalizer(group: &GroupCatalog, geo: &Geometry, line: LineId) -> Result<Vec<WeylElem>> {
    Ok(line_normalizer(group, geo, line)?.into_iter().filter(|g| element_order(g) == 3).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrangle::bilinear_form;

    #[test]
    fn reflection_examples() {
        let cat = QuadrangleCatalog::build();
        for &v in cat.exterior() {
            let s = reflection(&cat, v).unwrap();
            assert_eq!(s.apply_vec(&cat, v), v);
            assert!(s.then(&s).is_identity());
            assert_eq!(element_order(&s), 2);
        }
        let v = VVector::from_code(16).unwrap(); // (1,0,0)
        let x = VVector::from_code(5).unwrap(); // (0,1,1)
        let s = reflection(&cat, v).unwrap();
        assert_eq!(s.apply_vec(&cat, x), x);
        assert!(reflection(&cat, VVector::ZERO).is_err());
        assert!(reflection(&cat, x).is_err());
    }

    #[test]
    fn small_closures() {
        let cat = QuadrangleCatalog::build();
        assert_eq!(generate_group(&[], 10).unwrap().order(), 1);
        let s = reflection(&cat, cat.exterior()[0]).unwrap();
        assert_eq!(generate_group(&[s], 10).unwrap().order(), 2);
        let all = all_reflections(&cat);
        assert!(matches!(generate_group(&all, 1000), Err(Error::ClosureBound { bound: 1000 })));
    }

    #[test]
    fn from_perm_rejects_nonlinear() {
        let cat = QuadrangleCatalog::build();
        let mut p = *WeylElem::identity().perm();
        p.swap(0, 1);
        assert!(WeylElem::from_perm(&cat, p).is_err());
        p = *WeylElem::identity().perm();
        p[0] = 1;
        assert!(WeylElem::from_perm(&cat, p).is_err());
    }

    #[test]
    fn three_transpositions() {
        let cat = QuadrangleCatalog::build();
        let refl = all_reflections(&cat);
        let mut by_order = [0usize; 4];
        for (i, a) in refl.iter().enumerate() {
            for (j, b) in refl.iter().enumerate() {
                let o = element_order(&a.then(b));
                assert!((1..=3).contains(&o));
                by_order[o as usize] += 1;
                let u = cat.exterior()[i];
                let v = cat.exterior()[j];
                // orthogonal distinct reflections commute, the others generate S3
                let expected = if i == j {
                    1
                } else if bilinear_form(u, v) == 0 {
                    2
                } else {
                    3
                };
                assert_eq!(o, expected);
            }
        }
        assert_eq!(by_order[1], 36);
        assert!(by_order[3] > 0);
    }

    #[test]
    fn action_names() {
        assert_eq!("on-lines".parse::<Action>().unwrap(), Action::OnLines);
        assert!(matches!("on-planes".parse::<Action>(), Err(Error::Unknown { .. })));
    }

    #[test]
    fn matrix_matches_apply_vec() {
        let cat = QuadrangleCatalog::build();
        let s = reflection(&cat, cat.exterior()[5]).unwrap();
        let m = s.matrix(&cat);
        for v in VVector::all() {
            let img = (0..6).filter(|i| v.code() & (1 << i) != 0).fold(VVector::ZERO, |acc, i| acc + m[i]);
            assert_eq!(img, s.apply_vec(&cat, v));
        }
    }
}
