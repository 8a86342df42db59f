use std::sync::OnceLock;

use super::verify::*;
use super::*;
use crate::quadrangle::{quadratic_form, LineId};
use crate::weyl::{reflection, weyl_group};

struct Fixture {
    geo: Geometry,
    group: GroupCatalog,
    roots: RootOps,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let geo = Geometry::build().unwrap();
        let group = weyl_group(&geo.quad).unwrap();
        let roots = RootOps::build(&geo);
        Fixture { geo, group, roots }
    })
}

fn line0() -> &'static Line {
    fixture().geo.quad.line(LineId(0))
}

fn auto_d() -> WeylElem {
    let f = fixture();
    select_d(&f.group, &f.geo, line0(), DPolicy::Auto).unwrap()
}

#[test]
fn cartan_op_examples() {
    let cat = &fixture().geo.quad;
    assert!(cartan_op(cat, VVector::ZERO).is_zero());
    for u in VVector::all() {
        for v in VVector::all() {
            assert_eq!(cartan_op(cat, u + v), cartan_op(cat, u).add(&cartan_op(cat, v)));
        }
    }
    // number of points with (x|v) = 1: 12 for anisotropic v; isotropic v counted by brute force
    for v in VVector::all().filter(|v| !v.is_zero()) {
        let ones = cartan_op(cat, v).nonzero_entries();
        let brute = cat.point_ids().filter(|&x| bilinear_form(cat.vector(x), v) == 1).count() as u32;
        assert_eq!(ones, brute);
        if quadratic_form(v) == 1 {
            assert_eq!(ones, 12);
        } else {
            assert_eq!(ones, 16);
        }
    }
}

#[test]
fn root_op_shape() {
    let f = fixture();
    for id in f.geo.phi.ids() {
        let r = root_op(&f.geo.quad, f.geo.phi.get(id));
        assert_eq!(r.nonzero_entries(), 6);
        assert_eq!(r.rank(), 6);
        assert!(r.mul(&r).is_zero());
        assert_eq!(r.transpose(), root_op(&f.geo.quad, f.geo.phi.get(f.geo.phi.dual(id))));
        assert_eq!(&r, f.roots.get(id));
    }
}

#[test]
fn bracket_examples() {
    let f = fixture();
    let cat = &f.geo.quad;
    let x = *f.roots.get(RootBaseId(3));
    assert!(bracket(&x, &x).is_zero());
    for u in VVector::all() {
        for v in VVector::all() {
            assert!(bracket(&cartan_op(cat, u), &cartan_op(cat, v)).is_zero());
        }
    }
    for id in f.geo.phi.ids() {
        let b = bracket(f.roots.get(id), f.roots.get(f.geo.phi.dual(id)));
        assert_eq!(b, cartan_op(cat, f.geo.phi.get(id).s));
    }
}

#[test]
fn conjugation_examples() {
    let f = fixture();
    let cat = &f.geo.quad;
    let id = WeylElem::identity();
    let x = *f.roots.get(RootBaseId(10));
    assert_eq!(conjugate_by(&id, &x), x);
    let samples: Vec<&WeylElem> = f.group.elements().iter().step_by(997).collect();
    for w in samples {
        for rb in f.geo.phi.ids() {
            assert_eq!(conjugate_by(w, f.roots.get(rb)), *f.roots.get(w.act_root_base(&f.geo, rb)));
        }
        for v in VVector::all() {
            assert_eq!(conjugate_by(w, &cartan_op(cat, v)), cartan_op(cat, w.apply_vec(cat, v)));
        }
    }
}

#[test]
fn span_rank_examples() {
    let f = fixture();
    let cat = &f.geo.quad;
    let mut ops: Vec<Endo> = f.geo.phi.ids().map(|id| *f.roots.get(id)).collect();
    ops.extend(unit_vectors().iter().map(|&v| cartan_op(cat, v)));
    assert_eq!(crate::gf2::span_rank(&ops).0, 78);
    let all_h: Vec<Endo> = VVector::all().map(|v| cartan_op(cat, v)).collect();
    assert_eq!(crate::gf2::span_rank(&all_h).0, 6);
}

#[test]
fn e6_dimension_and_eigenrelation() {
    let f = fixture();
    let e6 = build_e6(&f.geo, &f.roots).unwrap();
    assert_eq!(e6.dim(), 78);
    assert!(e6.is_closed());
    for &v in &unit_vectors() {
        let h = cartan_op(&f.geo.quad, v);
        for id in f.geo.phi.ids() {
            let expected = if bilinear_form(f.geo.phi.get(id).s, v) == 1 { *f.roots.get(id) } else { Endo::ZERO };
            assert_eq!(h.bracket(f.roots.get(id)), expected);
        }
    }
}

#[test]
fn bracket_law_report_is_clean() {
    let f = fixture();
    let rep = verify_bracket_laws(&f.geo, &f.roots).unwrap();
    assert!(rep.passed(), "{:?}", &rep.violations[..rep.violations.len().min(5)]);
    for (i, n) in rep.instances.iter().enumerate() {
        assert!(*n > 0, "no instances of item {i}");
    }
    assert_eq!(rep.instances[6], 72 * 70);
    assert_eq!(rep.instances[3] + rep.instances[4] + rep.instances[5], 72 * 70);
}

#[test]
fn bracket_laws_detect_every_flip_in_one_root() {
    let f = fixture();
    let target = RootBaseId(17);
    for i in 0..27 {
        for j in 0..27 {
            let mut roots = f.roots.clone();
            roots.flip_entry(target, i, j);
            let rep = verify_bracket_laws(&f.geo, &roots).unwrap();
            assert!(!rep.passed(), "flip ({i},{j}) went unnoticed");
        }
    }
}

#[test]
fn dl_for_every_line() {
    let f = fixture();
    for line in f.geo.quad.lines() {
        assert_eq!(phi_l(&f.geo, line).len(), 24);
        assert_eq!(h_l_vectors(&f.geo, line).len(), 4);
        let dl = build_dl(&f.geo, &f.roots, line).unwrap();
        assert_eq!(dl.dim(), 28);
        assert!(dl.is_closed());
    }
}

#[test]
fn order3_census_on_line0() {
    let f = fixture();
    let ds = order3_in_normalizer(&f.group, &f.geo, LineId(0)).unwrap();
    assert_eq!(ds.len(), 80);
    assert!(ds.windows(2).all(|w| w[0] < w[1]));
    let mut census = BTreeMap::new();
    for d in &ds {
        let folding = fold_roots(&f.geo, line0(), d).unwrap();
        assert_eq!(folding.fixed.len() + 3 * folding.orbits.len(), 24);
        for o in &folding.orbits {
            assert!(o[0] < o[1] && o[0] < o[2]);
            assert_eq!(d.act_root_base(&f.geo, o[0]), o[1]);
            assert_eq!(d.act_root_base(&f.geo, o[2]), o[0]);
        }
        *census.entry(folding.counts()).or_insert(0) += 1;
    }
    assert_eq!(census, BTreeMap::from([((0, 8), 48), ((6, 6), 32)]));
}

#[test]
fn fold_roots_rejects_bad_d() {
    let f = fixture();
    assert!(matches!(fold_roots(&f.geo, line0(), &WeylElem::identity()), Err(Error::Precondition(_))));
    let s = reflection(&f.geo.quad, f.geo.quad.exterior()[0]).unwrap();
    assert!(fold_roots(&f.geo, line0(), &s).is_err());
    // an order-3 element that moves line 0
    let mover = f
        .group
        .elements()
        .iter()
        .find(|g| element_order(g) == 3 && g.act_line(&f.geo.quad, LineId(0)) != LineId(0))
        .unwrap();
    assert!(matches!(fold_roots(&f.geo, line0(), mover), Err(Error::Precondition(_))));
}

#[test]
fn g2_dimensions_and_centralizer() {
    let f = fixture();
    let d = auto_d();
    let folding = fold_roots(&f.geo, line0(), &d).unwrap();
    assert_eq!(folding.counts(), (6, 6));
    assert_eq!(vector_basis(&fixed_perp_vectors(&f.geo, line0(), &d)).len(), 2);
    let folded: Vec<Endo> = folding.orbits.iter().map(|o| f.roots.folded(o)).collect();
    assert_eq!(crate::gf2::span_rank(&folded).0, 6);

    let g2 = build_g2(&f.geo, &f.roots, line0(), &d).unwrap();
    assert_eq!(g2.dim(), 14);
    let dl = build_dl(&f.geo, &f.roots, line0()).unwrap();
    let c = centralizer(&dl, &d).unwrap();
    assert_eq!(c.dim(), 14);
    assert!(c.same_span(&g2));
    assert!(jacobi_violations(&g2, all_triples(14)).is_empty());

    let c_id = centralizer(&dl, &WeylElem::identity()).unwrap();
    assert!(c_id.same_span(&dl));
}

#[test]
fn build_g2_rejects_non_g2_folding() {
    let f = fixture();
    let ds = order3_in_normalizer(&f.group, &f.geo, LineId(0)).unwrap();
    let bad = ds.iter().find(|d| !fold_roots(&f.geo, line0(), d).unwrap().is_g2_pattern()).unwrap();
    assert!(matches!(build_g2(&f.geo, &f.roots, line0(), bad), Err(Error::Precondition(_))));
    assert!(matches!(select_d(&f.group, &f.geo, line0(), DPolicy::Index(80)), Err(Error::Precondition(_))));
}

#[test]
fn centralizer_needs_stable_subalgebra() {
    let f = fixture();
    let dl = build_dl(&f.geo, &f.roots, line0()).unwrap();
    let mover = f.group.elements().iter().find(|g| g.act_line(&f.geo.quad, LineId(0)) != LineId(0)).unwrap();
    assert!(matches!(centralizer(&dl, mover), Err(Error::Precondition(_))));
}

#[test]
fn g2_weights() {
    let f = fixture();
    let g2 = build_g2(&f.geo, &f.roots, line0(), &auto_d()).unwrap();
    let rep = weight_decomposition(&f.geo, &g2).unwrap();
    assert_eq!(rep.weights.len(), 12);
    assert_eq!(rep.multiplicities, BTreeMap::from([([0, 1], 4), ([1, 0], 4), ([1, 1], 4)]));
}

#[test]
fn folding_cases_clean() {
    let f = fixture();
    let d = auto_d();
    let g2 = build_g2(&f.geo, &f.roots, line0(), &d).unwrap();
    let rep = verify_folding_cases(&f.geo, &f.roots, line0(), &d, &g2).unwrap();
    assert!(rep.passed(), "{:?}", rep.violations);
    assert_eq!(rep.root_with_folded, 36);
    assert_eq!(rep.dual_pairs, 6);
    assert_eq!(rep.folded_pairs, 15);
    assert_eq!(rep.dual_reflection_checked, 72);
    assert!(rep.folded_summands.iter().any(|k| matches!(k, SummandKind::Cartan(_))));
    assert!(rep.folded_summands.iter().any(|k| matches!(k, SummandKind::Root(_))));
}

#[test]
fn ideal_scans() {
    let f = fixture();
    let d = auto_d();
    let g2 = build_g2(&f.geo, &f.roots, line0(), &d).unwrap();
    assert_eq!(ideal_scan(&g2), vec![14; 14]);
    let dl = build_dl(&f.geo, &f.roots, line0()).unwrap();
    let mut expected = vec![1, 1];
    expected.extend([28; 26]);
    assert_eq!(ideal_scan(&dl), expected);
    let e6 = build_e6(&f.geo, &f.roots).unwrap();
    let h = cartan_op(&f.geo.quad, f.geo.phi.get(RootBaseId(0)).s);
    assert_eq!(ideal_dim(&e6, &h), 78);
}

#[test]
fn equivariance_checks() {
    let f = fixture();
    let d = auto_d();
    let dl = build_dl(&f.geo, &f.roots, line0()).unwrap();
    assert!(bracket_equivariance(&dl, &d).is_empty());
    let gens = crate::weyl::all_reflections(&f.geo.quad);
    assert!(weyl_equivariance(&f.geo, &f.roots, &gens).is_empty());
}

#[test]
fn labels() {
    assert_eq!(BasisTag::Cartan(VVector::from_code(16).unwrap()).to_string(), "H:16");
    assert_eq!(BasisTag::Root(RootBaseId(7)).to_string(), "R:7");
    assert_eq!(BasisTag::Folded([RootBaseId(1), RootBaseId(9), RootBaseId(4)]).to_string(), "S:1-9-4");
    assert_eq!(BasisTag::Combination(0x1f).to_string(), "C:1f");
}

#[test]
fn dependent_basis_rejected() {
    let f = fixture();
    let r = *f.roots.get(RootBaseId(0));
    let basis = vec![
        LieBasisElem { tag: BasisTag::Root(RootBaseId(0)), op: r },
        LieBasisElem { tag: BasisTag::Root(RootBaseId(0)), op: r },
    ];
    assert!(matches!(Subalgebra::from_basis("bad", basis), Err(Error::Invariant(_))));
}

#[test]
fn closure_failure_reported() {
    let f = fixture();
    // R_Δ and R_Δ* alone do not close: their bracket is H_s
    let a = RootBaseId(0);
    let b = f.geo.phi.dual(a);
    let basis = vec![
        LieBasisElem { tag: BasisTag::Root(a), op: *f.roots.get(a) },
        LieBasisElem { tag: BasisTag::Root(b), op: *f.roots.get(b) },
    ];
    let mut s = Subalgebra::from_basis("pair", basis).unwrap();
    assert_eq!(s.closure_failure(), Some((0, 1)));
    assert!(s.certify_closure().is_err());
}
