//! Named verification suites and the machine-readable report they produce.
//!
//! Each suite records `(name, expected, actual)` checks plus free-form
//! counterexamples. A construction error inside a suite fails that suite; only
//! bad options (unknown suite, line or d out of range) make [`run`] return
//! `Err`.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{structure_table_over, verify_closure_over};
use crate::fields::{f4_add, f4_conj, f4_mul, f4_trace, k_arith, F4Elem, Gf2k, KOp, KScalar};
use crate::gf2::span_rank;
use crate::liealg::verify::{bracket_equivariance, verify_bracket_laws, verify_folding_cases, weyl_equivariance};
use crate::liealg::{
    all_triples, build_dl, build_e6, build_g2, cartan_op, centralizer, conjugate_by, fixed_perp_vectors, fold_roots,
    h_l_vectors, ideal_dim, ideal_scan, jacobi_violations, phi_l, select_d, vector_basis, BasisTag, DPolicy, RootOps,
    Subalgebra,
};
use crate::quadrangle::{quadratic_form, Line, VVector, LINES_PER_POINT, NUM_EXTERIOR, NUM_LINES, NUM_POINTS};
use crate::rootbases::{classify_line, classify_pair, root_base_from_pair, PairCase, RootBaseId, NUM_ROOT_BASES};
use crate::table::{structure_table, StructureTable};
use crate::weyl::{
    all_reflections, element_order, line_normalizer, orbit, order3_in_normalizer, weyl_group, Action, GroupCatalog,
    WeylElem, WEYL_ORDER,
};
use crate::Geometry;

pub const SUITE_NAMES: [&str; 16] = [
    "catalog",
    "fields",
    "weyl",
    "transpositions",
    "rootbases",
    "prop26",
    "prop31",
    "e6",
    "dl",
    "prop44",
    "g2",
    "prop45",
    "weights",
    "equivariance",
    "ideals",
    "extension",
];

const MAX_COUNTEREXAMPLES: usize = 20;

/// Order-3 elements in N_W(L) for any line (W is transitive on lines).
pub const ORDER3_IN_NORMALIZER: usize = 80;
pub const NORMALIZER_ORDER: usize = 1152;

/// A single corrupted entry of one R_Δ, applied before any suite runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Fault {
    pub root_base: usize,
    pub row: usize,
    pub col: usize,
}

impl FromStr for Fault {
    type Err = Error;

    /// `rootbase:row:col`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("fault `{s}` is not rootbase:row:col"));
        let parts: Vec<usize> = s.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        let [root_base, row, col] = parts[..] else {
            return Err(bad());
        };
        if root_base >= NUM_ROOT_BASES || row >= NUM_POINTS || col >= NUM_POINTS {
            return Err(Error::Precondition(format!("fault `{s}` out of range")));
        }
        Ok(Fault { root_base, row, col })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub line: usize,
    pub d: DPolicy,
    pub field_degree: u8,
    /// `None` runs every suite.
    pub suites: Option<Vec<String>>,
    pub fault: Option<Fault>,
    pub seed: u64,
    pub e6_jacobi_samples: usize,
    pub extension_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            line: 0,
            d: DPolicy::Auto,
            field_degree: 1,
            suites: None,
            fault: None,
            seed: 0x5eed,
            e6_jacobi_samples: 10_000,
            extension_samples: 16,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub counterexamples: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.to_string(), passed: true, checks: Vec::new(), counterexamples: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, expected: impl Display, actual: impl Display) -> bool {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let passed = expected == actual;
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), expected, actual, passed });
        passed
    }

    /// A value that is recorded but not asserted.
    fn report(&mut self, name: impl Into<String>, actual: impl Display) {
        self.checks.push(Check {
            name: name.into(),
            expected: "reported".into(),
            actual: actual.to_string(),
            passed: true,
        });
    }

    fn fail(&mut self, detail: impl Into<String>) {
        self.passed = false;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(detail.into());
        }
    }

    /// Records each item as a counterexample and checks the count is zero.
    fn expect_none<T: Display>(&mut self, name: &str, items: &[T]) {
        self.check(format!("{name} violations"), 0, items.len());
        for it in items.iter().take(MAX_COUNTEREXAMPLES) {
            self.fail(it.to_string());
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

struct Ctx<'a> {
    opts: &'a VerifyOptions,
    geo: Geometry,
    roots: RootOps,
    line: Line,
    group: OnceCell<std::result::Result<GroupCatalog, String>>,
    d: OnceCell<std::result::Result<WeylElem, String>>,
}

impl Ctx<'_> {
    fn group(&self) -> Result<&GroupCatalog> {
        self.group
            .get_or_init(|| weyl_group(&self.geo.quad).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Invariant(e.clone()))
    }

    fn d(&self) -> Result<&WeylElem> {
        self.d
            .get_or_init(|| {
                let group = self.group().map_err(|e| e.to_string())?;
                select_d(group, &self.geo, &self.line, self.opts.d).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| Error::Precondition(e.clone()))
    }

    /// The order-3 elements of N_W(L) checked by the d-dependent suites.
    fn qualifying_ds(&self) -> Result<Vec<WeylElem>> {
        match self.opts.d {
            DPolicy::Auto => {
                let mut out = Vec::new();
                for d in order3_in_normalizer(self.group()?, &self.geo, self.line.id)? {
                    if fold_roots(&self.geo, &self.line, &d)?.is_g2_pattern() {
                        out.push(d);
                    }
                }
                Ok(out)
            }
            DPolicy::Index(_) => Ok(vec![*self.d()?]),
        }
    }

    fn g2(&self) -> Result<Subalgebra> {
        build_g2(&self.geo, &self.roots, &self.line, self.d()?)
    }
}

/// Runs the selected suites in the fixed order of [`SUITE_NAMES`].
pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    let selected: Vec<&str> = match &opts.suites {
        None => SUITE_NAMES.to_vec(),
        Some(names) => {
            for n in names {
                if !SUITE_NAMES.contains(&n.as_str()) {
                    return Err(Error::Unknown { kind: "suite", name: n.clone() });
                }
            }
            SUITE_NAMES.iter().copied().filter(|s| names.iter().any(|n| n == s)).collect()
        }
    };
    let field = Gf2k::new(opts.field_degree)?;
    let geo = Geometry::build()?;
    let line = geo.quad.line_by_id(opts.line)?.clone();
    let mut roots = RootOps::build(&geo);
    if let Some(f) = opts.fault {
        roots.flip_entry(RootBaseId(f.root_base as u8), f.row, f.col);
    }
    let ctx = Ctx { opts, geo, roots, line, group: OnceCell::new(), d: OnceCell::new() };

    let needs_d =
        selected.iter().any(|s| matches!(*s, "g2" | "prop45" | "weights" | "equivariance" | "ideals" | "extension"));
    if needs_d {
        let d = ctx.d()?;
        if let DPolicy::Index(n) = opts.d {
            let folding = fold_roots(&ctx.geo, &ctx.line, d)?;
            if !folding.is_g2_pattern() {
                return Err(Error::Precondition(format!(
                    "order-3 element {n} of N_W(L{}) folds as {:?}, not (6, 6)",
                    ctx.line.id.0,
                    folding.counts()
                )));
            }
        }
    }

    let mut suites = Vec::new();
    for name in selected {
        let mut r = SuiteResult::new(name);
        let outcome = match name {
            "catalog" => suite_catalog(&ctx, &mut r),
            "fields" => suite_fields(field, &mut r),
            "weyl" => suite_weyl(&ctx, &mut r),
            "transpositions" => suite_transpositions(&ctx, &mut r),
            "rootbases" => suite_rootbases(&ctx, &mut r),
            "prop26" => suite_pairs(&ctx, &mut r),
            "prop31" => suite_brackets(&ctx, &mut r),
            "e6" => suite_e6(&ctx, &mut r),
            "dl" => suite_dl(&ctx, &mut r),
            "prop44" => suite_folding(&ctx, &mut r),
            "g2" => suite_g2(&ctx, &mut r),
            "prop45" => suite_folding_cases(&ctx, &mut r),
            "weights" => suite_weights(&ctx, &mut r),
            "equivariance" => suite_equivariance(&ctx, &mut r),
            "ideals" => suite_ideals(&ctx, &mut r),
            "extension" => suite_extension(&ctx, field, &mut r),
            _ => unreachable!("suite names are validated"),
        };
        if let Err(e) = outcome {
            r.fail(format!("error: {e}"));
        }
        suites.push(r);
    }
    let passed = suites.iter().all(|s| s.passed);
    Ok(VerifyReport { suites, passed })
}

fn suite_catalog(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let cat = &ctx.geo.quad;
    r.check("points", NUM_POINTS, cat.points().len());
    r.check("exterior", NUM_EXTERIOR, cat.exterior().len());
    r.check("lines", NUM_LINES, cat.lines().len());
    r.check("root bases", NUM_ROOT_BASES, ctx.geo.phi.bases().len());
    r.check("isotropic points", true, cat.points().iter().all(|&v| quadratic_form(v) == 0 && !v.is_zero()));
    r.check("anisotropic exterior", true, cat.exterior().iter().all(|&v| quadratic_form(v) == 1));
    let mut bad_degree = Vec::new();
    for x in cat.point_ids() {
        let n = cat.lines_through(x).len();
        if n != LINES_PER_POINT {
            bad_degree.push(format!("point {} lies on {n} lines", x.0));
        }
    }
    r.expect_none("lines per point", &bad_degree);
    let mut bad_lines = Vec::new();
    for l in cat.lines() {
        let [a, b, c] = l.points.map(|p| cat.vector(p));
        if a + b != c || cat.form(l.points[0], l.points[1]) != 0 {
            bad_lines.push(format!("line {} is not a totally singular 2-space", l.id.0));
        }
    }
    r.expect_none("line shape", &bad_lines);
    // For every x off L, exactly one point of L is collinear with x.
    let mut pairs = 0;
    let mut bad_axiom = Vec::new();
    for x in cat.point_ids() {
        for l in cat.lines().iter().filter(|l| !l.contains(x)) {
            pairs += 1;
            let n = l.points.iter().filter(|&&p| cat.collinear(x, p)).count();
            let via_op = cat.collinear_point(x, l)?;
            if n != 1 || !cat.collinear(x, via_op) || !l.contains(via_op) {
                bad_axiom.push(format!("point {} and line {}: {n} collinear points", x.0, l.id.0));
            }
        }
    }
    r.check("quadrangle axiom pairs", NUM_POINTS * (NUM_LINES - LINES_PER_POINT), pairs);
    r.expect_none("quadrangle axiom", &bad_axiom);
    Ok(())
}

fn suite_fields(field: Gf2k, r: &mut SuiteResult) -> Result<()> {
    let (o, w, w2) = (F4Elem::ONE, F4Elem::OMEGA, F4Elem::OMEGA2);
    r.check("1+1", F4Elem::ZERO, f4_add(o, o));
    r.check("ω+1", w2, f4_add(w, o));
    r.check("ω+ω²", o, f4_add(w, w2));
    r.check("ω·ω", w2, f4_mul(w, w));
    r.check("ω·ω²", o, f4_mul(w, w2));
    r.check("conj ω", w2, f4_conj(w));
    let traces: Vec<u8> = F4Elem::ALL.iter().map(|&a| f4_trace(a)).collect();
    r.check("traces", "[0, 0, 1, 1]", format!("{traces:?}"));
    let mut bad = Vec::new();
    for a in F4Elem::ALL {
        if f4_conj(f4_conj(a)) != a || f4_conj(a) != f4_mul(a, a) {
            bad.push(format!("conjugation at {a}"));
        }
        if !a.is_zero() && f4_mul(a, f4_mul(a, a)) != o {
            bad.push(format!("{a}³ ≠ 1"));
        }
    }
    r.expect_none("GF(4) laws", &bad);

    // GF(2^k): every element against a spread of others (exhaustive for k ≤ 4).
    let elems: Vec<KScalar> = field.elements().collect();
    let step = (elems.len() / 16).max(1);
    let probe: Vec<KScalar> = elems.iter().copied().step_by(step).collect();
    let mut bad = Vec::new();
    for &a in &elems {
        if field.add(a, a) != KScalar::ZERO {
            bad.push(format!("{a:?} + itself ≠ 0"));
        }
        if !a.is_zero() {
            let inv = k_arith(&field, a, KScalar::ZERO, KOp::Inv)?;
            if field.mul(a, inv) != KScalar::ONE {
                bad.push(format!("{a:?}·{a:?}⁻¹ ≠ 1"));
            }
        }
        for &b in &probe {
            if field.mul(a, b) != field.mul(b, a) {
                bad.push(format!("{a:?}·{b:?} not commutative"));
            }
            for &c in &probe {
                if field.mul(field.mul(a, b), c) != field.mul(a, field.mul(b, c)) {
                    bad.push(format!("({a:?}{b:?}){c:?} not associative"));
                }
                if field.mul(a, field.add(b, c)) != field.add(field.mul(a, b), field.mul(a, c)) {
                    bad.push(format!("{a:?}({b:?}+{c:?}) not distributive"));
                }
            }
        }
    }
    r.check("field", format!("GF(2^{})", field.degree()), field);
    r.check("order", 1usize << field.degree(), elems.len());
    r.expect_none("field axioms", &bad);
    r.check("inverse of zero rejected", true, k_arith(&field, KScalar::ZERO, KScalar::ZERO, KOp::Inv).is_err());
    Ok(())
}

fn suite_weyl(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let group = ctx.group()?;
    let geo = &ctx.geo;
    r.check("order", WEYL_ORDER, group.order());
    r.check("point orbit", NUM_POINTS, orbit(group, geo, Action::OnPoints, 0)?.len());
    r.check("line orbit", NUM_LINES, orbit(group, geo, Action::OnLines, 0)?.len());
    r.check("root base orbit", NUM_ROOT_BASES, orbit(group, geo, Action::OnRootBases, 0)?.len());
    let normalizer = line_normalizer(group, geo, ctx.line.id)?;
    r.check(format!("|N_W(L{})|", ctx.line.id.0), NORMALIZER_ORDER, normalizer.len());
    r.check(
        format!("order-3 elements of N_W(L{})", ctx.line.id.0),
        ORDER3_IN_NORMALIZER,
        order3_in_normalizer(group, geo, ctx.line.id)?.len(),
    );
    let mut bad = Vec::new();
    for (i, s) in all_reflections(&geo.quad).iter().enumerate() {
        if element_order(s) != 2 || !group.contains(s) {
            bad.push(format!("reflection {i}"));
        }
    }
    r.expect_none("reflections are involutions in W", &bad);
    Ok(())
}

fn suite_transpositions(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let refl = all_reflections(&ctx.geo.quad);
    let mut hist = BTreeMap::new();
    let mut bad = Vec::new();
    for (i, a) in refl.iter().enumerate() {
        for (j, b) in refl.iter().enumerate() {
            let n = element_order(&a.then(b));
            *hist.entry(n).or_insert(0usize) += 1;
            if n > 3 {
                bad.push(format!("σ_{i}σ_{j} has order {n}"));
            }
        }
    }
    r.check("pairs", NUM_EXTERIOR * NUM_EXTERIOR, refl.len() * refl.len());
    r.report("order histogram", format!("{hist:?}"));
    r.expect_none("3-transposition", &bad);
    Ok(())
}

fn suite_rootbases(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let (cat, phi) = (&ctx.geo.quad, &ctx.geo.phi);
    r.check("root bases", NUM_ROOT_BASES, phi.bases().len());
    r.check("distinct sums", NUM_EXTERIOR, phi.distinct_sums());
    let mut bad = Vec::new();
    for id in phi.ids() {
        let b = phi.get(id);
        let dual = phi.dual(id);
        let db = phi.get(dual);
        if quadratic_form(b.s) != 1 {
            bad.push(format!("s of {} is isotropic", id.0));
        }
        if phi.dual(dual) != id || db.s != b.s || b.mask() & db.mask() != 0 {
            bad.push(format!("dual of {} is not an involution with disjoint support", id.0));
        }
        let zero = (b.mask() | db.mask()).count_ones() as usize;
        if zero != 12 || crate::rootbases::delta_zero(cat, b).len() != 15 {
            bad.push(format!("Δ ∪ Δ* of {} has {zero} points", id.0));
        }
        for l in cat.lines() {
            if let Err(e) = classify_line(phi, l, id) {
                bad.push(e.to_string());
            }
        }
    }
    r.expect_none("root base structure", &bad);
    let mut hit = [false; NUM_ROOT_BASES];
    let mut pairs = 0;
    let mut bad = Vec::new();
    for x in cat.point_ids() {
        for y in cat.point_ids() {
            if cat.form(x, y) != 1 {
                continue;
            }
            pairs += 1;
            match root_base_from_pair(cat, x, y).map(|b| phi.lookup(&b.points)) {
                Ok(Some(id)) => hit[id.index()] = true,
                Ok(None) => bad.push(format!("Δ_({},{}) is not catalogued", x.0, y.0)),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    r.check("pairs with (x|y) = 1", 432, pairs);
    r.check("bases reached from pairs", NUM_ROOT_BASES, hit.iter().filter(|&&h| h).count());
    r.expect_none("Δ_(x,y)", &bad);
    Ok(())
}

fn suite_pairs(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let (cat, phi) = (&ctx.geo.quad, &ctx.geo.phi);
    let mut cases = BTreeMap::new();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for a in phi.ids() {
        for b in phi.ids() {
            let (sa, sb) = (phi.get(a).s, phi.get(b).s);
            if sa == sb {
                continue;
            }
            pairs += 1;
            let c = classify_pair(cat, phi, a, b)?;
            *cases.entry(format!("{:?}", c.case)).or_insert(0usize) += 1;
            let mut sorted = c.meets;
            sorted.sort_unstable();
            let pattern_ok = match c.case {
                PairCase::Orthogonal => sorted == [1, 1, 1, 1],
                _ => sorted == [0, 0, 3, 3],
            };
            if !pattern_ok {
                bad.push(format!("({}, {}) {:?}: meets {:?}", a.0, b.0, c.case, c.meets));
            }
            if c.case == PairCase::Disjoint {
                let ok = |img: Option<RootBaseId>| img.is_some_and(|g| phi.get(g).s == sa + sb);
                if !ok(c.delta_reflected) || !ok(c.gamma_reflected) {
                    bad.push(format!("({}, {}): composed base law fails", a.0, b.0));
                }
            }
        }
    }
    r.check("ordered pairs with s_Δ ≠ s_Γ", NUM_ROOT_BASES * (NUM_ROOT_BASES - 2), pairs);
    r.report("cases", format!("{cases:?}"));
    r.expect_none("classification", &bad);
    Ok(())
}

fn suite_brackets(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let rep = verify_bracket_laws(&ctx.geo, &ctx.roots)?;
    r.report("instances per item", format!("{:?}", rep.instances));
    r.expect_none("bracket identities", &rep.violations);
    Ok(())
}

fn suite_e6(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let cat = &ctx.geo.quad;
    let diag: Vec<_> = VVector::all().map(|v| cartan_op(cat, v)).collect();
    r.check("rank of all H_v", 6, span_rank(&diag).0);
    let commuting = diag.iter().all(|x| diag.iter().all(|y| x.bracket(y).is_zero()));
    r.check("Cartan subalgebra abelian", true, commuting);
    let e6 = build_e6(&ctx.geo, &ctx.roots)?;
    r.check("dim E6", 78, e6.dim());
    r.check("closure", true, e6.closure_failure().is_none());
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed);
    let n = e6.dim();
    let triples: Vec<_> = (0..ctx.opts.e6_jacobi_samples)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    let bad = jacobi_violations(&e6, triples);
    r.report("sampled Jacobi triples", ctx.opts.e6_jacobi_samples);
    r.expect_none("Jacobi", &bad.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>());
    let table = structure_table(&e6)?;
    let back = StructureTable::from_json(&table.to_json()?)?;
    r.check("table round trip", true, back == table);
    back.verify_against(&e6)?;
    Ok(())
}

fn suite_dl(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let geo = &ctx.geo;
    let mut bad = Vec::new();
    for l in geo.quad.lines() {
        let phi = phi_l(geo, l).len();
        let hl = vector_basis(&h_l_vectors(geo, l)).len();
        match build_dl(geo, &ctx.roots, l) {
            Ok(dl) if phi == 24 && hl == 4 && dl.dim() == 28 && dl.is_closed() => {}
            Ok(dl) => bad.push(format!("line {}: |Φ_L| = {phi}, dim H_L = {hl}, dim D_L = {}", l.id.0, dl.dim())),
            Err(e) => bad.push(format!("line {}: {e}", l.id.0)),
        }
    }
    r.check("lines", NUM_LINES, geo.quad.lines().len());
    r.expect_none("D_L shape", &bad);
    let dl = build_dl(geo, &ctx.roots, &ctx.line)?;
    let hl = h_l_vectors(geo, &ctx.line);
    let hs: Vec<_> = hl.iter().map(|&v| cartan_op(&geo.quad, v)).collect();
    r.check("H_L abelian", true, hs.iter().all(|x| hs.iter().all(|y| x.bracket(y).is_zero())));
    let bad = jacobi_violations(&dl, all_triples(dl.dim()));
    r.expect_none(
        &format!("Jacobi on D_L{}", ctx.line.id.0),
        &bad.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>(),
    );
    Ok(())
}

fn suite_folding(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let ds = order3_in_normalizer(ctx.group()?, &ctx.geo, ctx.line.id)?;
    r.check("order-3 elements", ORDER3_IN_NORMALIZER, ds.len());
    let mut census = BTreeMap::new();
    let mut bad = Vec::new();
    for (i, d) in ds.iter().enumerate() {
        let f = fold_roots(&ctx.geo, &ctx.line, d)?;
        let (fixed, orbits) = f.counts();
        *census.entry(format!("({fixed},{orbits})")).or_insert(0usize) += 1;
        if fixed + 3 * orbits != 24 {
            bad.push(format!("d #{i}: {fixed} fixed + {orbits} orbits do not cover Φ_L"));
        }
        for o in &f.orbits {
            let img = |id| d.act_root_base(&ctx.geo, id);
            if img(o[0]) != o[1] || img(o[1]) != o[2] || img(o[2]) != o[0] || o[0] > o[1].min(o[2]) {
                bad.push(format!("d #{i}: orbit {o:?} is not a canonical 3-cycle"));
            }
        }
    }
    r.report("fold census", format!("{census:?}"));
    r.check("some d folds as (6,6)", true, census.contains_key("(6,6)"));
    r.expect_none("folding", &bad);
    Ok(())
}

fn suite_g2(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let geo = &ctx.geo;
    let dl = build_dl(geo, &ctx.roots, &ctx.line)?;
    let ds = ctx.qualifying_ds()?;
    r.report("qualifying d", ds.len());
    let mut bad = Vec::new();
    for (i, d) in ds.iter().enumerate() {
        let tag = format!("d #{i}");
        let cartan = vector_basis(&fixed_perp_vectors(geo, &ctx.line, d)).len();
        let g2 = match build_g2(geo, &ctx.roots, &ctx.line, d) {
            Ok(g) => g,
            Err(e) => {
                bad.push(format!("{tag}: {e}"));
                continue;
            }
        };
        let roots: Vec<_> = g2.basis().iter().filter(|b| !matches!(b.tag, BasisTag::Cartan(_))).map(|b| b.op).collect();
        let c = match centralizer(&dl, d) {
            Ok(c) => c,
            Err(e) => {
                bad.push(format!("{tag}: {e}"));
                continue;
            }
        };
        let shape = (c.dim(), cartan, span_rank(&roots).0, g2.dim());
        if shape != (14, 2, 12, 14) {
            bad.push(format!("{tag}: (dim C_(D_L)(d), dim C_(H_L)(d), dim ⟨S_X⟩, dim G) = {shape:?}"));
        }
        if !c.same_span(&g2) {
            bad.push(format!("{tag}: centralizer differs from the folded construction"));
        }
        if let Some((a, b)) = g2.closure_failure() {
            bad.push(format!("{tag}: [{}, {}] escapes G", g2.basis()[a].tag, g2.basis()[b].tag));
        }
        if let Some(t) = jacobi_violations(&g2, all_triples(g2.dim())).first() {
            bad.push(format!("{tag}: Jacobi fails at {t:?}"));
        }
    }
    r.check("some qualifying d", true, !ds.is_empty());
    r.expect_none("G2 construction", &bad);
    let g2 = ctx.g2()?;
    r.check("dim G2 (selected d)", 14, g2.dim());
    Ok(())
}

fn suite_folding_cases(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let g2 = ctx.g2()?;
    let rep = verify_folding_cases(&ctx.geo, &ctx.roots, &ctx.line, ctx.d()?, &g2)?;
    r.report(
        "root-with-folded / dual / folded-pair instances",
        format!("{} / {} / {}", rep.root_with_folded, rep.dual_pairs, rep.folded_pairs),
    );
    r.check("dual reflection identity", NUM_ROOT_BASES, rep.dual_reflection_checked);
    r.expect_none("bracket cases", &rep.violations);
    Ok(())
}

fn suite_weights(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let g2 = ctx.g2()?;
    let rep = crate::liealg::weight_decomposition(&ctx.geo, &g2)?;
    r.check("eigenvectors", 12, rep.weights.len());
    let mult: Vec<String> = rep.multiplicities.iter().map(|(w, n)| format!("({},{}):{n}", w[0], w[1])).collect();
    r.check("weight multiplicities", "(0,1):4 (1,0):4 (1,1):4", mult.join(" "));
    Ok(())
}

fn suite_equivariance(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let geo = &ctx.geo;
    let d = ctx.d()?;
    let g2 = ctx.g2()?;
    let dl = build_dl(geo, &ctx.roots, &ctx.line)?;
    r.expect_none("d-equivariance on G2", &bracket_equivariance(&g2, d));
    r.expect_none("d-equivariance on D_L", &bracket_equivariance(&dl, d));
    let refl = all_reflections(&geo.quad);
    r.expect_none("W-equivariance on generators", &weyl_equivariance(geo, &ctx.roots, &refl));
    let group = ctx.group()?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed ^ 0x9e37);
    let sample: Vec<WeylElem> = (0..32).map(|_| group.elements()[rng.gen_range(0..group.order())]).collect();
    r.expect_none("W-equivariance on sampled elements", &weyl_equivariance(geo, &ctx.roots, &sample));
    let e6 = build_e6(geo, &ctx.roots)?;
    let ops: Vec<_> = e6.ops().copied().collect();
    let mut bad = Vec::new();
    for (k, w) in sample.iter().enumerate() {
        let images: Vec<_> = ops.iter().map(|x| conjugate_by(w, x)).collect();
        // Root operators must land on root operators; the whole span is preserved.
        let roots_permuted = ctx.geo.phi.ids().all(|id| images.contains(&conjugate_by(w, ctx.roots.get(id))))
            && ctx.geo.phi.ids().all(|id| ops.contains(&conjugate_by(w, ctx.roots.get(id))));
        if !roots_permuted || span_rank(&images).0 != 78 || !images.iter().all(|x| e6.contains(x)) {
            bad.push(format!("sampled element {k} does not preserve E6"));
        }
    }
    r.expect_none("W acts on E6", &bad);
    Ok(())
}

fn suite_ideals(ctx: &Ctx, r: &mut SuiteResult) -> Result<()> {
    let geo = &ctx.geo;
    let e6 = build_e6(geo, &ctx.roots)?;
    let s0 = geo.phi.get(RootBaseId(0)).s;
    r.check("ideal of H_(s_Δ0) in E6", 78, ideal_dim(&e6, &cartan_op(&geo.quad, s0)));
    let g2 = ctx.g2()?;
    let scan = ideal_scan(&g2);
    r.check("G2 ideal scan", "14 ×14", summarize(&scan));
    let dl = build_dl(geo, &ctx.roots, &ctx.line)?;
    r.report("D_L ideal scan", summarize(&ideal_scan(&dl)));
    Ok(())
}

/// Run-length form, e.g. `1 ×2, 28 ×26`.
fn summarize(v: &[usize]) -> String {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &x in v {
        match runs.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => runs.push((x, 1)),
        }
    }
    runs.iter().map(|(x, n)| format!("{x} ×{n}")).collect::<Vec<_>>().join(", ")
}

fn suite_extension(ctx: &Ctx, field: Gf2k, r: &mut SuiteResult) -> Result<()> {
    let fields = if field.degree() == 1 { vec![field, Gf2k::new(2)?] } else { vec![field] };
    let g2 = ctx.g2()?;
    let dl = build_dl(&ctx.geo, &ctx.roots, &ctx.line)?;
    let base = structure_table(&g2)?;
    for k in fields {
        for s in [&g2, &dl] {
            let rep = verify_closure_over(k, s, ctx.opts.extension_samples, ctx.opts.seed)?;
            r.check(format!("rank of {} over {k}", s.name), s.dim(), rep.rank);
        }
        let t = structure_table_over(k, &g2)?;
        let same = t.labels == base.labels
            && t.entries.len() == base.entries.len()
            && t.entries.iter().zip(&base.entries).all(|(a, b)| a.i == b.i && a.j == b.j && a.coeffs == b.coeffs);
        r.check(format!("G2 constants over {k} equal those over GF(2)"), true, same);
    }
    Ok(())
}
