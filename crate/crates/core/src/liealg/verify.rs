//! Exhaustive checks of the bracket laws against the geometry.
//!
//! Expected brackets are always derived from [`classify_pair`] on the root
//! bases, never from inspecting the matrices, so a corrupted operator shows
//! up as a disagreement between geometry and algebra.

use std::fmt;

use serde::Serialize;

use super::{cartan_op, conjugate_by, BasisTag, Endo, RootOps, Subalgebra};
use crate::error::Result;
use crate::quadrangle::{bilinear_form, line_perp, Line, VVector};
use crate::rootbases::{classify_pair, reflect_points, PairCase, RootBaseId};
use crate::weyl::WeylElem;
use crate::Geometry;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

fn violation(check: impl Into<String>, detail: impl Into<String>) -> Violation {
    Violation { check: check.into(), detail: detail.into() }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BracketLawReport {
    /// Instances checked per item; index 0 counts the shape checks on each R_Δ.
    pub instances: [usize; 7],
    pub violations: Vec<Violation>,
}

impl BracketLawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every root base and ordered pair of root bases:
///
/// 0. rank R_Δ = 6, R_Δ² = 0, R_Δᵀ = R_{Δ*};
/// 1. [H_v, H_w] = 0 and [H_v, R_Δ] = (s_Δ|v)R_Δ over a basis of V;
/// 2. [R_Δ, R_{Δ*}] = H_{s_Δ};
/// 3. [R_Δ, R_Γ] = 0 when s_Δ ≠ s_Γ are orthogonal;
/// 4. [R_Δ, R_Γ] = 0 when (s_Δ|s_Γ) = 1 and Δ ∩ Γ ≠ ∅;
/// 5. [R_Δ, R_Γ] = R_{Γ^σΔ} = R_{Δ^σΓ} when (s_Δ|s_Γ) = 1 and Δ ∩ Γ = ∅;
/// 6. R_Δ R_Γ R_Δ = R_Δ [R_Γ, R_Δ] = 0 for Γ ∉ {Δ, Δ*}.
pub fn verify_bracket_laws(geo: &Geometry, roots: &RootOps) -> Result<BracketLawReport> {
    let mut rep = BracketLawReport::default();
    let cat = &geo.quad;
    let phi = &geo.phi;
    let units = super::unit_vectors();

    for id in phi.ids() {
        let r = roots.get(id);
        let rs = roots.get(phi.dual(id));
        rep.instances[0] += 1;
        if r.rank() != 6 {
            rep.violations.push(violation("R_Δ shape", format!("rank R_{} = {}", id.0, r.rank())));
        }
        if !r.mul(r).is_zero() {
            rep.violations.push(violation("R_Δ shape", format!("R_{}² ≠ 0", id.0)));
        }
        if r.transpose() != *rs {
            rep.violations.push(violation("R_Δ shape", format!("R_{}ᵀ ≠ R_{} (its dual)", id.0, phi.dual(id).0)));
        }
    }

    for &v in &units {
        let hv = cartan_op(cat, v);
        for &w in &units {
            rep.instances[1] += 1;
            if !hv.bracket(&cartan_op(cat, w)).is_zero() {
                rep.violations.push(violation("cartan", format!("[H_{}, H_{}] ≠ 0", v.code(), w.code())));
            }
        }
        for id in phi.ids() {
            rep.instances[1] += 1;
            let r = roots.get(id);
            let expected = if bilinear_form(phi.get(id).s, v) == 1 { *r } else { Endo::ZERO };
            if hv.bracket(r) != expected {
                rep.violations.push(violation("cartan", format!("[H_{}, R_{}] ≠ (s|v)·R_{}", v.code(), id.0, id.0)));
            }
        }
    }

    for id in phi.ids() {
        rep.instances[2] += 1;
        let got = roots.get(id).bracket(roots.get(phi.dual(id)));
        if got != cartan_op(cat, phi.get(id).s) {
            rep.violations.push(violation(
                "dual pair",
                format!("[R_{}, R_{}] ≠ H_s (s = {})", id.0, phi.dual(id).0, phi.get(id).s.code()),
            ));
        }
    }

    for a in phi.ids() {
        for b in phi.ids() {
            let (ra, rb) = (roots.get(a), roots.get(b));
            // Γ = Δ* is excluded: R_Δ R_Δ* R_Δ = R_Δ.
            if a != b && b != phi.dual(a) {
                rep.instances[6] += 1;
                if !ra.mul(rb).mul(ra).is_zero() || !ra.mul(&rb.bracket(ra)).is_zero() {
                    rep.violations.push(violation("triple product", format!("R_{0} R_{1} R_{0} ≠ 0", a.0, b.0)));
                }
            }
            if phi.get(a).s == phi.get(b).s {
                continue;
            }
            let class = classify_pair(cat, phi, a, b)?;
            let got = ra.bracket(rb);
            match class.case {
                PairCase::Orthogonal => {
                    rep.instances[3] += 1;
                    if !got.is_zero() {
                        rep.violations
                            .push(violation("orthogonal", format!("[R_{}, R_{}] ≠ 0 (orthogonal)", a.0, b.0)));
                    }
                }
                PairCase::Meeting => {
                    rep.instances[4] += 1;
                    if !got.is_zero() {
                        rep.violations.push(violation("meeting", format!("[R_{}, R_{}] ≠ 0 (meeting)", a.0, b.0)));
                    }
                }
                PairCase::Disjoint => {
                    rep.instances[5] += 1;
                    match (class.gamma_reflected, class.delta_reflected) {
                        (Some(g), Some(d)) if g == d => {
                            if got != *roots.get(g) {
                                rep.violations
                                    .push(violation("disjoint", format!("[R_{}, R_{}] ≠ R_{}", a.0, b.0, g.0)));
                            }
                        }
                        other => rep.violations.push(violation(
                            "disjoint",
                            format!("reflected bases for ({}, {}) disagree: {:?}", a.0, b.0, other),
                        )),
                    }
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SummandKind {
    Zero,
    Root(u8),
    Cartan(u8),
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FoldingCaseReport {
    pub root_with_folded: usize,
    pub dual_pairs: usize,
    pub folded_pairs: usize,
    /// Root bases Δ for which (Δ*)^{σ_Δ} = Δ was confirmed.
    pub dual_reflection_checked: usize,
    /// Kinds of the summands [R_Δ, R_Γ^{d^t}] met in brackets of two folded sums.
    pub folded_summands: Vec<SummandKind>,
    pub violations: Vec<Violation>,
}

impl FoldingCaseReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn orbit_sum(d: &WeylElem, x: &Endo) -> Endo {
    let x1 = conjugate_by(d, x);
    let x2 = conjugate_by(d, &x1);
    x.add(&x1).add(&x2)
}

/// Predicted [R_a, R_b] from the pair classification.
fn predicted_bracket(geo: &Geometry, roots: &RootOps, a: RootBaseId, b: RootBaseId) -> Result<(SummandKind, Endo)> {
    let phi = &geo.phi;
    if a == b {
        return Ok((SummandKind::Zero, Endo::ZERO));
    }
    if phi.dual(a) == b {
        let s = phi.get(a).s;
        return Ok((SummandKind::Cartan(s.code()), cartan_op(&geo.quad, s)));
    }
    let class = classify_pair(&geo.quad, phi, a, b)?;
    Ok(match (class.case, class.gamma_reflected) {
        (PairCase::Disjoint, Some(g)) => (SummandKind::Root(g.0), *roots.get(g)),
        _ => (SummandKind::Zero, Endo::ZERO),
    })
}

/// Re-derives the closure of G = C_{H_L}(d) ⊕ ⟨S_X⟩ through the three
/// bracket cases of the folding argument.
pub fn verify_folding_cases(
    geo: &Geometry,
    roots: &RootOps,
    line: &Line,
    d: &WeylElem,
    g2: &Subalgebra,
) -> Result<FoldingCaseReport> {
    let mut rep = FoldingCaseReport::default();
    let phi = &geo.phi;
    let cat = &geo.quad;

    let fixed: Vec<RootBaseId> = g2
        .basis()
        .iter()
        .filter_map(|b| match b.tag {
            BasisTag::Root(id) => Some(id),
            _ => None,
        })
        .collect();
    let folded: Vec<[RootBaseId; 3]> = g2
        .basis()
        .iter()
        .filter_map(|b| match b.tag {
            BasisTag::Folded(o) => Some(o),
            _ => None,
        })
        .collect();
    let cartan: Vec<VVector> = g2
        .basis()
        .iter()
        .filter_map(|b| match b.tag {
            BasisTag::Cartan(v) => Some(v),
            _ => None,
        })
        .collect();
    let cartan_span = Subalgebra::from_basis(
        "C_(H_L)(d)",
        cartan.iter().map(|&v| super::LieBasisElem { tag: BasisTag::Cartan(v), op: cartan_op(cat, v) }).collect(),
    )?;
    let is_basis_op = |x: &Endo| g2.ops().any(|b| b == x);

    // fixed root against folded sum: [R_Δ, S_Γ]
    for &a in &fixed {
        for o in &folded {
            rep.root_with_folded += 1;
            let actual = roots.get(a).bracket(&roots.folded(o));
            let expansion = orbit_sum(d, &roots.get(a).bracket(roots.get(o[0])));
            if expansion != actual {
                rep.violations.push(violation(
                    "root with folded",
                    format!("[R_{}, S_{}] differs from Σ [R_Δ, R_Γ]^(d^t)", a.0, o[0].0),
                ));
            }
            let (kind, summand) = predicted_bracket(geo, roots, a, o[0])?;
            let predicted = match kind {
                SummandKind::Root(_) => orbit_sum(d, &summand),
                SummandKind::Zero => Endo::ZERO,
                SummandKind::Cartan(_) => {
                    rep.violations
                        .push(violation("root with folded", format!("Γ = {} is dual to fixed Δ = {}", o[0].0, a.0)));
                    continue;
                }
            };
            if predicted != actual {
                rep.violations.push(violation(
                    "root with folded",
                    format!("[R_{}, S_{}] disagrees with the geometric prediction {:?}", a.0, o[0].0, kind),
                ));
            }
            if conjugate_by(d, &actual) != actual {
                rep.violations.push(violation("root with folded", format!("[R_{}, S_{}] is not d-fixed", a.0, o[0].0)));
            }
            if !actual.is_zero() && !is_basis_op(&actual) {
                rep.violations.push(violation(
                    "root with folded",
                    format!("[R_{}, S_{}] is neither 0 nor a basis element", a.0, o[0].0),
                ));
            }
        }
    }

    // dual pair: [R_Δ, R_Δ*] = H_{s_Δ}, first the identity Δ ∩ (Δ*)^{σ_Δ} = Δ for all Δ
    for id in phi.ids() {
        rep.dual_reflection_checked += 1;
        let back = reflect_points(cat, &phi.get(phi.dual(id)).points, phi.get(id).s);
        if back != phi.get(id).points.to_vec() {
            rep.violations.push(violation("dual pair", format!("(Δ*)^σΔ ≠ Δ for Δ = {}", id.0)));
        }
    }
    let lperp = line_perp(cat, line);
    let on_line: Vec<VVector> = line.points.iter().map(|&p| cat.vector(p)).collect();
    for &a in &fixed {
        rep.dual_pairs += 1;
        let b = phi.dual(a);
        if !fixed.contains(&b) {
            rep.violations.push(violation("dual pair", format!("dual {} of fixed root {} is not fixed", b.0, a.0)));
            continue;
        }
        let s = phi.get(a).s;
        let h = cartan_op(cat, s);
        if roots.get(a).bracket(roots.get(b)) != h {
            rep.violations.push(violation("dual pair", format!("[R_{}, R_{}] ≠ H_{}", a.0, b.0, s.code())));
        }
        if !lperp.contains(&s) || on_line.contains(&s) || s.is_zero() {
            rep.violations.push(violation("dual pair", format!("s = {} is not in L^⊥ \\ L", s.code())));
        }
        if d.apply_vec(cat, s) != s {
            rep.violations.push(violation("dual pair", format!("s = {} is not d-fixed", s.code())));
        }
        if !cartan_span.contains(&h) {
            rep.violations.push(violation("dual pair", format!("H_{} is not in C_(H_L)(d)", s.code())));
        }
    }

    // two folded sums: [S_Δ, S_Γ] = Σ_t Σ_u [R_Δ, R_Γ^{d^t}]^{d^u}
    for (i, o1) in folded.iter().enumerate() {
        for o2 in &folded[i + 1..] {
            rep.folded_pairs += 1;
            let actual = roots.folded(o1).bracket(&roots.folded(o2));
            let mut rebuilt = Endo::ZERO;
            for &g in o2 {
                let direct = roots.get(o1[0]).bracket(roots.get(g));
                let (kind, predicted) = predicted_bracket(geo, roots, o1[0], g)?;
                rep.folded_summands.push(kind);
                if direct != predicted {
                    rep.violations.push(violation(
                        "folded pair",
                        format!("[R_{}, R_{}] disagrees with the geometric prediction {:?}", o1[0].0, g.0, kind),
                    ));
                }
                let folded_summand = orbit_sum(d, &predicted);
                if !g2.contains(&folded_summand) {
                    rep.violations
                        .push(violation("folded pair", format!("orbit sum of [R_{}, R_{}] escapes G", o1[0].0, g.0)));
                }
                rebuilt = rebuilt.add(&folded_summand);
            }
            if rebuilt != actual {
                rep.violations.push(violation(
                    "folded pair",
                    format!("three-summand expansion of [S_{}, S_{}] does not reconstruct it", o1[0].0, o2[0].0),
                ));
            }
        }
    }
    Ok(rep)
}

/// conjugate_by(d, [X, Y]) = [conjugate_by(d, X), conjugate_by(d, Y)] over all basis pairs.
pub fn bracket_equivariance(s: &Subalgebra, d: &WeylElem) -> Vec<Violation> {
    let ops: Vec<&Endo> = s.ops().collect();
    let mut out = Vec::new();
    for (i, x) in ops.iter().enumerate() {
        for (j, y) in ops.iter().enumerate() {
            let lhs = conjugate_by(d, &x.bracket(y));
            let rhs = conjugate_by(d, x).bracket(&conjugate_by(d, y));
            if lhs != rhs {
                out.push(violation("d-equivariance", format!("{} {}", s.basis()[i].tag, s.basis()[j].tag)));
            }
        }
    }
    out
}

/// R_Δ^w = R_{Δ^w} and H_v^w = H_{v^w} for every given w, Δ and v.
pub fn weyl_equivariance(geo: &Geometry, roots: &RootOps, elems: &[WeylElem]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (k, w) in elems.iter().enumerate() {
        for id in geo.phi.ids() {
            let img = w.act_root_base(geo, id);
            if conjugate_by(w, roots.get(id)) != *roots.get(img) {
                out.push(violation("W-equivariance", format!("element {k}: R_{}^w ≠ R_{}", id.0, img.0)));
            }
        }
        for v in VVector::all() {
            let hv = cartan_op(&geo.quad, v);
            if conjugate_by(w, &hv) != cartan_op(&geo.quad, w.apply_vec(&geo.quad, v)) {
                out.push(violation("W-equivariance", format!("element {k}: H_{}^w ≠ H_(v^w)", v.code())));
            }
        }
    }
    out
}
