use std::sync::OnceLock;

use proptest::prelude::*;

use quadlie::fields::Gf2k;
use quadlie::liealg::{build_dl, build_e6, cartan_op, conjugate_by, jacobi_violations, Endo, RootOps, Subalgebra};
use quadlie::quadrangle::{bilinear_form, VVector};
use quadlie::rootbases::{classify_pair, PairCase, RootBaseId};
use quadlie::weyl::{weyl_group, GroupCatalog};
use quadlie::Geometry;

struct Fixture {
    geo: Geometry,
    group: GroupCatalog,
    roots: RootOps,
    e6: Subalgebra,
}

fn fx() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let geo = Geometry::build().unwrap();
        let group = weyl_group(&geo.quad).unwrap();
        let roots = RootOps::build(&geo);
        let e6 = build_e6(&geo, &roots).unwrap();
        Fixture { geo, group, roots, e6 }
    })
}

fn any_vector() -> impl Strategy<Value = VVector> {
    (0u8..64).prop_map(|c| VVector::from_code(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn conjugation_is_an_automorphism(w in 0usize..51840, a in 0usize..78, b in 0usize..78) {
        let f = fx();
        let w = &f.group.elements()[w];
        let (x, y) = (&f.e6.basis()[a].op, &f.e6.basis()[b].op);
        prop_assert_eq!(conjugate_by(w, &x.bracket(y)), conjugate_by(w, x).bracket(&conjugate_by(w, y)));
    }

    #[test]
    fn weyl_action_on_operators(w in 0usize..51840, id in 0u8..72, v in any_vector()) {
        let f = fx();
        let w = &f.group.elements()[w];
        let id = RootBaseId(id);
        prop_assert_eq!(conjugate_by(w, f.roots.get(id)), *f.roots.get(w.act_root_base(&f.geo, id)));
        prop_assert_eq!(conjugate_by(w, &cartan_op(&f.geo.quad, v)), cartan_op(&f.geo.quad, w.apply_vec(&f.geo.quad, v)));
    }

    #[test]
    fn cartan_map_is_linear(u in any_vector(), v in any_vector()) {
        let cat = &fx().geo.quad;
        prop_assert_eq!(cartan_op(cat, u + v), cartan_op(cat, u).add(&cartan_op(cat, v)));
    }

    #[test]
    fn eigenrelation(id in 0u8..72, v in any_vector()) {
        let f = fx();
        let id = RootBaseId(id);
        let r = f.roots.get(id);
        let h = cartan_op(&f.geo.quad, v);
        let expected = if bilinear_form(f.geo.phi.get(id).s, v) == 1 { *r } else { Endo::ZERO };
        prop_assert_eq!(h.bracket(r), expected);
    }

    /// Brackets of root operators follow the pair classification.
    #[test]
    fn root_brackets_follow_geometry(a in 0u8..72, b in 0u8..72) {
        let f = fx();
        let (a, b) = (RootBaseId(a), RootBaseId(b));
        let phi = &f.geo.phi;
        let br = f.roots.get(a).bracket(f.roots.get(b));
        if a == b {
            prop_assert!(br.is_zero());
        } else if phi.dual(a) == b {
            prop_assert_eq!(br, cartan_op(&f.geo.quad, phi.get(a).s));
        } else {
            let c = classify_pair(&f.geo.quad, phi, a, b).unwrap();
            match c.case {
                PairCase::Orthogonal | PairCase::Meeting => prop_assert!(br.is_zero()),
                PairCase::Disjoint => prop_assert_eq!(br, *f.roots.get(c.gamma_reflected.unwrap())),
            }
        }
    }

    #[test]
    fn e6_closed_and_jacobi(a in 0usize..78, b in 0usize..78, c in 0usize..78) {
        let f = fx();
        let (x, y) = (&f.e6.basis()[a].op, &f.e6.basis()[b].op);
        prop_assert!(f.e6.contains(&x.bracket(y)));
        prop_assert!(jacobi_violations(&f.e6, [(a, b, c)]).is_empty());
    }

    #[test]
    fn weyl_maps_dl_to_dl_of_image_line(line in 0usize..45, w in 0usize..51840) {
        let f = fx();
        let l = f.geo.quad.line_by_id(line).unwrap();
        let w = &f.group.elements()[w];
        let dl = build_dl(&f.geo, &f.roots, l).unwrap();
        let image = f.geo.quad.line(w.act_line(&f.geo.quad, l.id));
        let target = build_dl(&f.geo, &f.roots, image).unwrap();
        prop_assert!(dl.ops().all(|x| target.contains(&conjugate_by(w, x))));
    }

    #[test]
    fn gf2k_inverse(k in 1u8..=8, a in 1u16..256) {
        let field = Gf2k::new(k).unwrap();
        let a = field.elem((a % (1 << k)).max(1) as u8).unwrap();
        prop_assert_eq!(field.mul(a, field.inv(a).unwrap()), field.elem(1).unwrap());
    }
}
