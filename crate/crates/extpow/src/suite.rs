//! Registry of named verification checks: each one states a commutator or
//! wedge identity as an exact matrix equation over a polynomial ring with
//! independent variables, so passing here certifies the identity over every
//! commutative ring by specialization.

use std::time::Instant;

use serde::Serialize;

use crate::index::{WeightIndex, WeightPair};
use crate::matrix::ExactMatrix;
use crate::ring::{Ring, RingElement};
use crate::transvect::{
    commutator_eval, z_generator, TransvectionProduct, TransvectionTerm,
};
use crate::wedge::{wedge_transvection, wedge_transvection_formula, WedgeSpec};
use crate::Error;

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub anchor: String,
    pub pass: bool,
    pub ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<String>,
}

/// Aggregate over a filtered run, ordered by registry id.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
    pub passed: usize,
    pub total: usize,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.total
    }
}

struct Case {
    id: &'static str,
    anchor: &'static str,
    run: fn() -> Result<(), String>,
}

pub fn check_ids() -> Vec<&'static str> {
    CASES.iter().map(|c| c.id).collect()
}

/// Run one registered check by id.
pub fn run_check(id: &str) -> Result<CheckReport, Error> {
    let case = CASES
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))?;
    Ok(execute(case))
}

/// Run every check whose id starts with the filter (all checks when absent).
pub fn run_all(filter: Option<&str>) -> SuiteReport {
    let checks: Vec<CheckReport> = CASES
        .iter()
        .filter(|c| filter.map_or(true, |f| c.id.starts_with(f)))
        .map(execute)
        .collect();
    let passed = checks.iter().filter(|c| c.pass).count();
    let total = checks.len();
    SuiteReport { checks, passed, total }
}

fn execute(case: &Case) -> CheckReport {
    let start = Instant::now();
    let outcome = (case.run)();
    CheckReport {
        id: case.id.to_string(),
        anchor: case.anchor.to_string(),
        pass: outcome.is_ok(),
        ms: start.elapsed().as_millis(),
        diff: outcome.err(),
    }
}

// ---- shared helpers ----

fn term(n: u32, row: &[u32], col: &[u32], arg: &RingElement) -> TransvectionTerm {
    TransvectionTerm::from_elems(n, row, col, arg).expect("valid term")
}

fn single(n: u32, row: &[u32], col: &[u32], arg: &RingElement) -> TransvectionProduct {
    TransvectionProduct::single(term(n, row, col, arg))
}

/// Formal commutator [p, q] as a factor list.
fn comm(p: &TransvectionProduct, q: &TransvectionProduct) -> TransvectionProduct {
    p.clone().then(q.clone()).then(p.inverse()).then(q.inverse())
}

fn expect_eq(tag: &str, lhs: &ExactMatrix, rhs: &ExactMatrix) -> Result<(), String> {
    match lhs.first_diff(rhs) {
        None => Ok(()),
        Some((r, c, a, b)) => Err(format!("{tag}: entry ({r},{c}) differs: {a} vs {b}")),
    }
}

fn expect_products_eq(
    tag: &str,
    spec: &WedgeSpec,
    ring: &Ring,
    lhs: &TransvectionProduct,
    rhs: &TransvectionProduct,
) -> Result<(), String> {
    expect_eq(tag, &lhs.realize(spec, ring), &rhs.realize(spec, ring))
}

fn ring2() -> (Ring, RingElement, RingElement) {
    let r = Ring::poly(&["xi", "zeta"]).unwrap();
    let (xi, zeta) = (r.var(0), r.var(1));
    (r, xi, zeta)
}

fn ring3() -> (Ring, RingElement, RingElement, RingElement) {
    let r = Ring::poly(&["xi", "zeta", "zeta1"]).unwrap();
    let (xi, zeta, zeta1) = (r.var(0), r.var(1), r.var(2));
    (r, xi, zeta, zeta1)
}

// ---- the registry ----

static CASES: &[Case] = &[
    Case {
        id: "L4.1",
        anchor: "[t_{12,34}(x),^2t_{4,2}(z)] = t_{14,23}(-xz^2) t_{14,34}(-zx) t_{12,23}(-xz)",
        run: l4_1,
    },
    Case {
        id: "L4.2",
        anchor: "[t_{12,34}(x),^2t_{4,5}(z)] = t_{12,35}(xz)",
        run: l4_2,
    },
    Case {
        id: "L4.3",
        anchor: "[t_{12,13}(x),^2t_{1,4}(z)] = t_{12,34}(-xz); paired +/-z1 commutators give t_{24,13}(-2xzz1^2)",
        run: l4_3,
    },
    Case {
        id: "L4.4",
        anchor: "[t_{12,23}(x),^2t_{4,2}(z)] = t_{14,23}(-zx)",
        run: l4_4,
    },
    Case {
        id: "L4.5",
        anchor: "[t_{14,34}(-zx)t_{12,23}(-xz), t_{45,14}(xz1)t_{56,16}(z1x)] = t_{45,34}(x^2 z z1)",
        run: l4_5,
    },
    Case {
        id: "L5.a",
        anchor: "[b,c] = [t_{34,23}(zx), t_{23,12}(-z)] = t_{34,12}(-z^2 x)",
        run: l5_a,
    },
    Case {
        id: "L5.b",
        anchor: "^c[b,d] = t_{23,14}(xz^2) t_{34,14}(xz^2(1+xz)) ^(^2t_{3,1}(z))[t_{34,23}(xz), ^2t_{2,4}(-1)]",
        run: l5_b,
    },
    Case {
        id: "L5.c",
        anchor: "[a,c] = [t_{12,23}(x), t_{23,12}(-z)] = [t_{12,23}(x), ^2t_{3,1}(z)]",
        run: l5_c,
    },
    Case {
        id: "L5.d",
        anchor: "^c[a,d] = t_{12,14}(xz) t_{23,14}(-xz^2) ^(^2t_{3,1}(z))[t_{12,23}(x), ^2t_{2,4}(-1)]",
        run: l5_d,
    },
    Case {
        id: "L5.z",
        anchor: "z_{12,13}(x,z) = ^(^2t_{3,2}(z))t_{12,13}(x); z_{12,34}(x,z) = ^(t_{34,12}(z))[t_{12,23}(x),t_{23,34}(1)] = [ab,cd]",
        run: l5_z,
    },
    Case {
        id: "P-IE.1",
        anchor: "disjoint-pair double commutator (n=12, m=4) yields t_{{4,9,10,11},{4,5,6,7}}(x^2 z z1)",
        run: pie_1,
    },
    Case {
        id: "P-IE.2",
        anchor: "height-1 double commutator (n=12, m=4) yields t_{1489,1456}(-x^2 z z1)",
        run: pie_2,
    },
    Case {
        id: "P-IE.3",
        anchor: "height-2 double commutator (n=12, m=4) yields t_{1248,1245}(x^2 z z1)",
        run: pie_3,
    },
    Case {
        id: "P-REL.1",
        anchor: "^3t_{1,2}(xz) * z1 * z2 = t_{145,245}(3xz), coefficient 3 = C(3,2)",
        run: prel_1,
    },
    Case {
        id: "L-ARF.a",
        anchor: "[a,c] = [t_{145,125}(zx), t_{125,123}(-z)] = t_{145,123}(-z^2 x)",
        run: arf_a,
    },
    Case {
        id: "L-ARF.b",
        anchor: "[t_{125,123}(z), t_{123,125}(x)] = [^3t_{5,3}(z), t_{123,125}(x)]; z_{123,145}(x,z) = ^(t_{145,123}(z))[b,d] = [ab,cd]",
        run: arf_b,
    },
    Case {
        id: "L-ARF.c",
        anchor: "^c[b,d] = t_{123,134}(xz) t_{125,134}(-xz^2) ^(^3t_{5,3}(-z))t_{123,145}(x)",
        run: arf_c,
    },
    Case {
        id: "L-ARF.d",
        anchor: "^c[a,d] = t_{125,134}(xz^2) t_{145,134}(xz^2(1+xz)) ^(^3t_{5,3}(-z))(t_{145,125}(xz) z_{145,125}(-zx,1))",
        run: arf_d,
    },
    Case {
        id: "PF.1",
        anchor: "^2t_{1,2}(z) = [^2t_{1,3}(z), ^2t_{3,2}(1)]",
        run: pf_1,
    },
    Case {
        id: "PF.2",
        anchor: "t_{123,145}(x) = [t_{123,134}(x), t_{134,145}(1)] = [t_{123,134}(x), ^3t_{3,5}(-1)]",
        run: pf_2,
    },
    Case {
        id: "LR.1",
        anchor: "[xy,hg] = ^x[y,h] [x,h] ^h[xy,g] on 100 seeded random instances over Z/9",
        run: lr_1,
    },
    Case {
        id: "LEQ0.1",
        anchor: "paired +/-z commutators of t_{123,456}(x) with ^3t_{4,1} give t_{234,156}(2z^2 x)",
        run: leq0_1,
    },
    Case {
        id: "LEQ0.2",
        anchor: "[t_{123,456}(x), ^3t_{6,7}(z)] = t_{123,457}(xz)",
        run: leq0_2,
    },
    Case {
        id: "PLG.1",
        anchor: "[t_{123,124}(x), ^3t_{2,5}(z)] = t_{123,145}(-xz); then against ^3t_{5,2}(z1) a triple with double-shift arg -z1^2 xz",
        run: plg_1,
    },
    Case {
        id: "PLG.2",
        anchor: "t_{12,34}(xz) = [t_{12,34}(x), ^2t_{4,5}(z), ^2t_{5,4}(1)]",
        run: plg_2,
    },
];

// ---- n=4..6, m=2 commutator steps ----

fn l4_1() -> Result<(), String> {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(4, 2).unwrap();
    let got = commutator_eval(&term(4, &[1, 2], &[3, 4], &xi), 4, 2, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let xz = xi.mul(&zeta);
    let display = TransvectionProduct::of_terms(vec![
        term(4, &[1, 4], &[2, 3], &xz.mul(&zeta).neg()),
        term(4, &[1, 4], &[3, 4], &xz.neg()),
        term(4, &[1, 2], &[2, 3], &xz.neg()),
    ]);
    expect_products_eq("triple product", &spec, &r, &got, &display)
}

fn l4_2() -> Result<(), String> {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(5, 2).unwrap();
    let got = commutator_eval(&term(5, &[1, 2], &[3, 4], &xi), 4, 5, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let display = single(5, &[1, 2], &[3, 5], &xi.mul(&zeta));
    expect_products_eq("single shift", &spec, &r, &got, &display)
}

fn l4_3() -> Result<(), String> {
    let (r, xi, zeta, zeta1) = ring3();
    let spec = WedgeSpec::new(4, 2).unwrap();
    let c0 = commutator_eval(&term(4, &[1, 2], &[1, 3], &xi), 1, 4, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let a = xi.mul(&zeta).neg();
    expect_products_eq("first shift", &spec, &r, &c0, &single(4, &[1, 2], &[3, 4], &a))?;

    let up = commutator_eval(&term(4, &[1, 2], &[3, 4], &a), 4, 1, &zeta1, &spec)
        .map_err(|e| e.to_string())?;
    let um = commutator_eval(&term(4, &[1, 2], &[3, 4], &a), 4, 1, &zeta1.neg(), &spec)
        .map_err(|e| e.to_string())?;
    let xzw = xi.mul(&zeta).mul(&zeta1);
    let display = TransvectionProduct::of_terms(vec![
        term(4, &[2, 4], &[3, 4], &xzw.neg()),
        term(4, &[1, 2], &[1, 3], &xzw),
        term(4, &[2, 4], &[1, 3], &xzw.mul(&zeta1).neg()),
    ]);
    expect_products_eq("triple", &spec, &r, &up, &display)?;
    let paired = single(4, &[2, 4], &[1, 3], &xzw.mul(&zeta1).scale(-2));
    expect_products_eq("paired product", &spec, &r, &up.then(um), &paired)
}

fn l4_4() -> Result<(), String> {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(4, 2).unwrap();
    let got = commutator_eval(&term(4, &[1, 2], &[2, 3], &xi), 4, 2, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let display = single(4, &[1, 4], &[2, 3], &zeta.mul(&xi).neg());
    expect_products_eq("single shift", &spec, &r, &got, &display)
}

fn l4_5() -> Result<(), String> {
    let (r, xi, zeta, zeta1) = ring3();
    let spec = WedgeSpec::new(6, 2).unwrap();
    // Leading two factors of each triple; the quadratic factors drop out.
    let u = commutator_eval(&term(6, &[1, 2], &[3, 4], &xi), 4, 2, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let xz = xi.mul(&zeta);
    let p1 = TransvectionProduct::of_terms(vec![
        term(6, &[1, 4], &[3, 4], &xz.neg()),
        term(6, &[1, 2], &[2, 3], &xz.neg()),
    ]);
    let quad1 = single(6, &[1, 4], &[2, 3], &xz.mul(&zeta).neg());
    expect_products_eq("first triple", &spec, &r, &u, &p1.clone().then(quad1))?;

    let v = commutator_eval(&term(6, &[4, 5], &[1, 6], &xi), 6, 4, &zeta1, &spec)
        .map_err(|e| e.to_string())?;
    let xw = xi.mul(&zeta1);
    let p2 = TransvectionProduct::of_terms(vec![
        term(6, &[5, 6], &[1, 6], &xw),
        term(6, &[4, 5], &[1, 4], &xw),
    ]);
    let quad2 = single(6, &[5, 6], &[1, 4], &xw.mul(&zeta1).neg());
    expect_products_eq("second triple", &spec, &r, &v, &p2.clone().then(quad2))?;

    let got = p1.commutator_with(&p2, &spec, &r);
    let want = single(6, &[4, 5], &[3, 4], &xi.mul(&xi).mul(&zeta).mul(&zeta1));
    expect_eq("final commutator", &got, &want.realize(&spec, &r))
}

// ---- the four bracket factors of [ab, cd] at an equal-height pair ----

fn l5_abcd() -> (
    Ring,
    WedgeSpec,
    TransvectionProduct,
    TransvectionProduct,
    TransvectionProduct,
    TransvectionProduct,
) {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(6, 2).unwrap();
    let a = single(6, &[1, 2], &[2, 3], &xi);
    let b = single(6, &[3, 4], &[2, 3], &zeta.mul(&xi));
    let c = single(6, &[2, 3], &[1, 2], &zeta.neg());
    let d = single(6, &[2, 3], &[3, 4], &r.one());
    (r, spec, a, b, c, d)
}

fn l5_a() -> Result<(), String> {
    let (r, spec, _, b, c, _) = l5_abcd();
    let (xi, zeta) = (r.var(0), r.var(1));
    let got = b.commutator_with(&c, &spec, &r);
    let want = single(6, &[3, 4], &[1, 2], &zeta.mul(&zeta).mul(&xi).neg());
    expect_eq("[b,c]", &got, &want.realize(&spec, &r))
}

fn l5_b() -> Result<(), String> {
    let (r, spec, _, b, c, d) = l5_abcd();
    let (xi, zeta) = (r.var(0), r.var(1));
    let lhs = comm(&b, &d).conjugated_by(c);
    let xz2 = xi.mul(&zeta).mul(&zeta);
    let tail = comm(
        &single(6, &[3, 4], &[2, 3], &xi.mul(&zeta)),
        &TransvectionProduct::wedge(2, 4, RingElement::from_i64(&r, -1)),
    )
    .conjugated_by(TransvectionProduct::wedge(3, 1, zeta.clone()));
    let rhs = TransvectionProduct::of_terms(vec![
        term(6, &[2, 3], &[1, 4], &xz2),
        term(6, &[3, 4], &[1, 4], &xz2.add(&xz2.mul(&xi).mul(&zeta))),
    ])
    .then(tail);
    expect_products_eq("^c[b,d]", &spec, &r, &lhs, &rhs)
}

fn l5_c() -> Result<(), String> {
    let (r, spec, a, _, c, _) = l5_abcd();
    let zeta = r.var(1);
    // c is the first factor of the wedge image; the remaining factors commute
    // with a, so the brackets agree.
    let lhs = a.commutator_with(&c, &spec, &r);
    let rhs = a.commutator_with(&TransvectionProduct::wedge(3, 1, zeta), &spec, &r);
    expect_eq("[a,c] vs wedge bracket", &lhs, &rhs)
}

fn l5_d() -> Result<(), String> {
    let (r, spec, a, _, c, d) = l5_abcd();
    let (xi, zeta) = (r.var(0), r.var(1));
    let lhs = comm(&a, &d).conjugated_by(c);
    let xz = xi.mul(&zeta);
    let tail = comm(&a, &TransvectionProduct::wedge(2, 4, RingElement::from_i64(&r, -1)))
        .conjugated_by(TransvectionProduct::wedge(3, 1, zeta.clone()));
    let rhs = TransvectionProduct::of_terms(vec![
        term(6, &[1, 2], &[1, 4], &xz),
        term(6, &[2, 3], &[1, 4], &xz.mul(&zeta).neg()),
    ])
    .then(tail);
    expect_products_eq("^c[a,d]", &spec, &r, &lhs, &rhs)
}

fn l5_z() -> Result<(), String> {
    let (r, spec, a, b, c, d) = l5_abcd();
    let (xi, zeta) = (r.var(0), r.var(1));

    let pr = WeightPair::new(
        WeightIndex::new(6, &[1, 2]).unwrap(),
        WeightIndex::new(6, &[1, 3]).unwrap(),
    )
    .unwrap();
    let zg = z_generator(&pr, &xi, &zeta).map_err(|e| e.to_string())?;
    let conj = single(6, &[1, 2], &[1, 3], &xi)
        .conjugated_by(TransvectionProduct::wedge(3, 2, zeta.clone()));
    expect_products_eq("height-1 conjugation form", &spec, &r, &zg, &conj)?;

    let pr2 = WeightPair::new(
        WeightIndex::new(6, &[1, 2]).unwrap(),
        WeightIndex::new(6, &[3, 4]).unwrap(),
    )
    .unwrap();
    let zg2 = z_generator(&pr2, &xi, &zeta).map_err(|e| e.to_string())?;
    let setup = comm(
        &single(6, &[1, 2], &[2, 3], &xi),
        &single(6, &[2, 3], &[3, 4], &r.one()),
    )
    .conjugated_by(single(6, &[3, 4], &[1, 2], &zeta));
    expect_products_eq("generator as conjugated bracket", &spec, &r, &zg2, &setup)?;

    let abcd = comm(&a.then(b), &c.then(d));
    expect_products_eq("generator as [ab,cd]", &spec, &r, &zg2, &abcd)
}

// ---- m=4, n=12 double commutators (one per height) ----

fn pie_case(
    i1: &[u32],
    j1: &[u32],
    root1: u32,
    i2: &[u32],
    j2: &[u32],
    root2: u32,
    out_row: &[u32],
    out_col: &[u32],
    out_sign: i64,
) -> Result<(), String> {
    let (r, xi, zeta, zeta1) = ring3();
    let spec = WedgeSpec::new(12, 4).unwrap();
    let inner1 = commutator_eval(&term(12, i1, j1, &xi), root1, 4, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let inner2 = commutator_eval(&term(12, i2, j2, &xi), root2, 4, &zeta1, &spec)
        .map_err(|e| e.to_string())?;
    // Linear parts of the triples; the quadratic double-shift factors are
    // dropped before the outer bracket (they land at higher height).
    let strip = |p: &TransvectionProduct| TransvectionProduct { factors: p.factors[..2].to_vec() };
    let got = strip(&inner1).commutator_with(&strip(&inner2), &spec, &r);
    let arg = xi.mul(&xi).mul(&zeta).mul(&zeta1).scale(out_sign);
    let want = single(12, out_row, out_col, &arg);
    expect_eq("double commutator", &got, &want.realize(&spec, &r))
}

fn pie_1() -> Result<(), String> {
    pie_case(
        &[1, 2, 3, 4],
        &[5, 6, 7, 8],
        8,
        &[4, 9, 10, 11],
        &[1, 2, 3, 12],
        12,
        &[4, 9, 10, 11],
        &[4, 5, 6, 7],
        1,
    )
}

fn pie_2() -> Result<(), String> {
    pie_case(
        &[1, 2, 3, 4],
        &[1, 5, 6, 7],
        7,
        &[1, 4, 8, 9],
        &[1, 2, 3, 10],
        10,
        &[1, 4, 8, 9],
        &[1, 4, 5, 6],
        -1,
    )
}

fn pie_3() -> Result<(), String> {
    pie_case(
        &[1, 2, 3, 4],
        &[1, 2, 5, 6],
        6,
        &[1, 2, 4, 8],
        &[1, 2, 3, 7],
        7,
        &[1, 2, 4, 8],
        &[1, 2, 4, 5],
        1,
    )
}

// ---- extracting a bare transvection from a wedge image, n=5, m=3 ----

fn prel_1() -> Result<(), String> {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(5, 3).unwrap();
    let xz = xi.mul(&zeta);

    // The wedge image has residue C(3,2) = 3 factors with equal arguments.
    let w = TransvectionProduct::wedge(1, 2, xz.clone());
    let factors = TransvectionProduct::of_terms(vec![
        term(5, &[1, 3, 4], &[2, 3, 4], &xz),
        term(5, &[1, 3, 5], &[2, 3, 5], &xz),
        term(5, &[1, 4, 5], &[2, 4, 5], &xz),
    ]);
    expect_products_eq("wedge factorization", &spec, &r, &w, &factors)?;

    let c1 = commutator_eval(&term(5, &[1, 3, 4], &[2, 4, 5], &xi), 5, 3, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let z1 = TransvectionProduct::of_terms(vec![
        term(5, &[1, 4, 5], &[2, 4, 5], &xz),
        term(5, &[1, 3, 4], &[2, 3, 4], &xz.neg()),
    ]);
    let quad1 = single(5, &[1, 4, 5], &[2, 3, 4], &xz.mul(&zeta));
    expect_products_eq("first correction triple", &spec, &r, &c1, &z1.clone().then(quad1))?;

    let c2 = commutator_eval(&term(5, &[1, 3, 5], &[2, 4, 5], &xi), 4, 3, &zeta.neg(), &spec)
        .map_err(|e| e.to_string())?;
    let z2 = TransvectionProduct::of_terms(vec![
        term(5, &[1, 4, 5], &[2, 4, 5], &xz),
        term(5, &[1, 3, 5], &[2, 3, 5], &xz.neg()),
    ]);
    let quad2 = single(5, &[1, 4, 5], &[2, 3, 5], &xz.mul(&zeta));
    expect_products_eq("second correction triple", &spec, &r, &c2, &z2.clone().then(quad2))?;

    // Corrections cancel all but one factor, whose argument picks up the
    // residue count as coefficient.
    let total = w.then(z1).then(z2);
    let want = single(5, &[1, 4, 5], &[2, 4, 5], &xz.scale(3));
    let coeff = RingElement::from_i64(&r, spec.residue() as i64);
    if coeff != RingElement::from_i64(&r, 3) {
        return Err("residue count is not 3".into());
    }
    expect_products_eq("accumulated transvection", &spec, &r, &total, &want)
}

// ---- the four bracket factors at an (m-1)-height pair, n=6, m=3 ----

fn arf_abcd() -> (
    Ring,
    WedgeSpec,
    TransvectionProduct,
    TransvectionProduct,
    TransvectionProduct,
    TransvectionProduct,
) {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(6, 3).unwrap();
    // I=123, J=145, V=125, W=134.
    let a = single(6, &[1, 4, 5], &[1, 2, 5], &zeta.mul(&xi));
    let b = single(6, &[1, 2, 3], &[1, 2, 5], &xi);
    let c = single(6, &[1, 2, 5], &[1, 2, 3], &zeta.neg());
    let d = single(6, &[1, 2, 5], &[1, 4, 5], &r.one());
    (r, spec, a, b, c, d)
}

fn arf_a() -> Result<(), String> {
    let (r, spec, a, _, c, _) = arf_abcd();
    let (xi, zeta) = (r.var(0), r.var(1));
    let got = a.commutator_with(&c, &spec, &r);
    let want = single(6, &[1, 4, 5], &[1, 2, 3], &zeta.mul(&zeta).mul(&xi).neg());
    expect_eq("[a,c]", &got, &want.realize(&spec, &r))
}

fn arf_b() -> Result<(), String> {
    let (r, spec, a, b, c, d) = arf_abcd();
    let (xi, zeta) = (r.var(0), r.var(1));

    // The height-(m-1) bracket against a bare transvection equals the bracket
    // against the whole wedge image.
    let lhs = single(6, &[1, 2, 5], &[1, 2, 3], &zeta).commutator_with(&b, &spec, &r);
    let rhs = TransvectionProduct::wedge(5, 3, zeta.clone()).commutator_with(&b, &spec, &r);
    expect_eq("bare vs wedge bracket", &lhs, &rhs)?;

    let pr = WeightPair::new(
        WeightIndex::new(6, &[1, 2, 3]).unwrap(),
        WeightIndex::new(6, &[1, 4, 5]).unwrap(),
    )
    .unwrap();
    let zg = z_generator(&pr, &xi, &zeta).map_err(|e| e.to_string())?;
    let setup = comm(&b, &d).conjugated_by(single(6, &[1, 4, 5], &[1, 2, 3], &zeta));
    expect_products_eq("generator as conjugated bracket", &spec, &r, &zg, &setup)?;

    let abcd = comm(&a.then(b), &c.then(d));
    expect_products_eq("generator as [ab,cd]", &spec, &r, &zg, &abcd)
}

fn arf_c() -> Result<(), String> {
    let (r, spec, _, b, c, d) = arf_abcd();
    let (xi, zeta) = (r.var(0), r.var(1));
    let lhs = comm(&b, &d).conjugated_by(c);
    let tail = single(6, &[1, 2, 3], &[1, 4, 5], &xi)
        .conjugated_by(TransvectionProduct::wedge(5, 3, zeta.neg()));
    let xz = xi.mul(&zeta);
    let rhs = TransvectionProduct::of_terms(vec![
        term(6, &[1, 2, 3], &[1, 3, 4], &xz),
        term(6, &[1, 2, 5], &[1, 3, 4], &xz.mul(&zeta).neg()),
    ])
    .then(tail);
    expect_products_eq("^c[b,d]", &spec, &r, &lhs, &rhs)
}

fn arf_d() -> Result<(), String> {
    let (r, spec, a, _, c, d) = arf_abcd();
    let (xi, zeta) = (r.var(0), r.var(1));
    let lhs = comm(&a, &d).conjugated_by(c);
    let pr = WeightPair::new(
        WeightIndex::new(6, &[1, 4, 5]).unwrap(),
        WeightIndex::new(6, &[1, 2, 5]).unwrap(),
    )
    .unwrap();
    let zx = zeta.mul(&xi);
    let tail = single(6, &[1, 4, 5], &[1, 2, 5], &zx)
        .then(z_generator(&pr, &zx.neg(), &r.one()).map_err(|e| e.to_string())?)
        .conjugated_by(TransvectionProduct::wedge(5, 3, zeta.neg()));
    let xz2 = xi.mul(&zeta).mul(&zeta);
    let rhs = TransvectionProduct::of_terms(vec![
        term(6, &[1, 2, 5], &[1, 3, 4], &xz2),
        term(6, &[1, 4, 5], &[1, 3, 4], &xz2.add(&xz2.mul(&xi).mul(&zeta))),
    ])
    .then(tail);
    expect_products_eq("^c[a,d]", &spec, &r, &lhs, &rhs)
}

// ---- generator identities ----

fn pf_1() -> Result<(), String> {
    let r = Ring::poly(&["zeta"]).unwrap();
    let zeta = r.var(0);
    let spec = WedgeSpec::new(4, 2).unwrap();
    let lhs = TransvectionProduct::wedge(1, 2, zeta.clone());
    let rhs = comm(
        &TransvectionProduct::wedge(1, 3, zeta),
        &TransvectionProduct::wedge(3, 2, r.one()),
    );
    expect_products_eq("wedge bracket", &spec, &r, &lhs, &rhs)
}

fn pf_2() -> Result<(), String> {
    let (r, xi, _) = ring2();
    let spec = WedgeSpec::new(6, 3).unwrap();
    let want = single(6, &[1, 2, 3], &[1, 4, 5], &xi);

    let bare = comm(
        &single(6, &[1, 2, 3], &[1, 3, 4], &xi),
        &single(6, &[1, 3, 4], &[1, 4, 5], &r.one()),
    );
    expect_products_eq("bare bracket", &spec, &r, &bare, &want)?;

    // The unit factor is realized inside the wedge image of t_{3,5}(-1).
    let minus_one = RingElement::from_i64(&r, -1);
    let has_unit_factor = wedge_transvection_formula(&spec, 3, 5, &minus_one)
        .map_err(|e| e.to_string())?
        .iter()
        .any(|f| f.row.elems() == [1, 3, 4] && f.col.elems() == [1, 4, 5] && f.arg.is_one());
    if !has_unit_factor {
        return Err("t_{134,145}(1) is not a factor of the wedge image".into());
    }
    let wedge_bracket = comm(
        &single(6, &[1, 2, 3], &[1, 3, 4], &xi),
        &TransvectionProduct::wedge(3, 5, minus_one),
    );
    expect_products_eq("wedge bracket", &spec, &r, &wedge_bracket, &want)
}

// ---- the universal four-term bracket expansion on random instances ----

fn lr_1() -> Result<(), String> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let r = Ring::modular(9).unwrap();
    let spec = WedgeSpec::new(4, 2).unwrap();
    let nn = spec.big_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(41);

    let rand_small = |rng: &mut ChaCha8Rng| -> (ExactMatrix, ExactMatrix) {
        // A random product of elementary transvections and its inverse.
        let mut fwd = Vec::new();
        for _ in 0..4 {
            let i = rng.gen_range(1..=4u32);
            let mut j = rng.gen_range(1..=4u32);
            if i == j {
                j = if j == 4 { 1 } else { j + 1 };
            }
            let arg = RingElement::from_i64(&r, rng.gen_range(0..9));
            fwd.push((i, j, arg));
        }
        let mut g = ExactMatrix::identity(&r, 4);
        let mut ginv = ExactMatrix::identity(&r, 4);
        for (i, j, arg) in &fwd {
            g = g.mul(&ExactMatrix::transvection(&r, 4, *i, *j, arg));
        }
        for (i, j, arg) in fwd.iter().rev() {
            ginv = ginv.mul(&ExactMatrix::transvection(&r, 4, *i, *j, &arg.neg()));
        }
        (g, ginv)
    };
    let rand_pair = |rng: &mut ChaCha8Rng| -> (WeightPair, WeightPair) {
        let idx = WeightIndex::enumerate(4, 2);
        let a = rng.gen_range(0..idx.len());
        let mut b = rng.gen_range(0..idx.len());
        if a == b {
            b = (b + 1) % idx.len();
        }
        (
            WeightPair::new(idx[a].clone(), idx[b].clone()).unwrap(),
            WeightPair::new(idx[b].clone(), idx[a].clone()).unwrap(),
        )
    };

    for round in 0..100 {
        // x: wedge image of an invertible small-group element.
        let (gs, gs_inv) = rand_small(&mut rng);
        let x = crate::wedge::wedge_matrix(&spec, &gs).map_err(|e| e.to_string())?;
        let x_inv = crate::wedge::wedge_matrix(&spec, &gs_inv).map_err(|e| e.to_string())?;

        // y: principal congruence element e + 3M, inverted exactly.
        let y = ExactMatrix::from_fn(&r, nn, |rr, cc| {
            let off = RingElement::from_i64(&r, 3 * rng.gen_range(0..3));
            if rr == cc {
                r.one().add(&off)
            } else {
                off
            }
        });
        let y_inv = y.inverse().map_err(|e| e.to_string())?;

        // h: a wedge transvection; g: a big transvection with argument in (3).
        let hz = RingElement::from_i64(&r, rng.gen_range(1..9));
        let (hi, hj) = (1u32, rng.gen_range(2..=4u32));
        let h = wedge_transvection(&spec, &r, hi, hj, &hz).map_err(|e| e.to_string())?;
        let h_inv = wedge_transvection(&spec, &r, hi, hj, &hz.neg()).map_err(|e| e.to_string())?;
        let (pr, _) = rand_pair(&mut rng);
        let garg = RingElement::from_i64(&r, 3 * rng.gen_range(0..3));
        let gt = TransvectionTerm::new(pr, garg).map_err(|e| e.to_string())?;
        let g = gt.realize(&spec, &r);
        let g_inv = gt.inverse().realize(&spec, &r);

        let xy = x.mul(&y);
        let xy_inv = y_inv.mul(&x_inv);
        let hg = h.mul(&g);
        let hg_inv = g_inv.mul(&h_inv);
        let lhs = crate::matrix::group_commutator_with_inv(&xy, &xy_inv, &hg, &hg_inv);

        let yh = crate::matrix::group_commutator_with_inv(&y, &y_inv, &h, &h_inv);
        let f1 = x.mul(&yh).mul(&x_inv);
        let f2 = crate::matrix::group_commutator_with_inv(&x, &x_inv, &h, &h_inv);
        let xyg = crate::matrix::group_commutator_with_inv(&xy, &xy_inv, &g, &g_inv);
        let f3 = h.mul(&xyg).mul(&h_inv);
        let rhs = f1.mul(&f2).mul(&f3);
        expect_eq(&format!("round {round}"), &lhs, &rhs)?;
    }
    Ok(())
}

// ---- height-0 pair computations, m=3 ----

fn leq0_1() -> Result<(), String> {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(6, 3).unwrap();
    let t = term(6, &[1, 2, 3], &[4, 5, 6], &xi);
    let up = commutator_eval(&t, 4, 1, &zeta, &spec).map_err(|e| e.to_string())?;
    let um = commutator_eval(&t, 4, 1, &zeta.neg(), &spec).map_err(|e| e.to_string())?;
    let xz = xi.mul(&zeta);
    let display = TransvectionProduct::of_terms(vec![
        term(6, &[2, 3, 4], &[4, 5, 6], &xz.neg()),
        term(6, &[1, 2, 3], &[1, 5, 6], &xz),
        term(6, &[2, 3, 4], &[1, 5, 6], &xz.mul(&zeta)),
    ]);
    expect_products_eq("triple", &spec, &r, &up, &display)?;
    let paired = single(6, &[2, 3, 4], &[1, 5, 6], &xz.mul(&zeta).scale(2));
    expect_products_eq("paired product", &spec, &r, &up.then(um), &paired)
}

fn leq0_2() -> Result<(), String> {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(7, 3).unwrap();
    let got = commutator_eval(&term(7, &[1, 2, 3], &[4, 5, 6], &xi), 6, 7, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let display = single(7, &[1, 2, 3], &[4, 5, 7], &xi.mul(&zeta));
    expect_products_eq("single shift", &spec, &r, &got, &display)
}

// ---- level-raising chains ----

fn plg_1() -> Result<(), String> {
    let (r, xi, zeta, zeta1) = ring3();
    let spec = WedgeSpec::new(5, 3).unwrap();
    let c0 = commutator_eval(&term(5, &[1, 2, 3], &[1, 2, 4], &xi), 2, 5, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let a = xi.mul(&zeta).neg();
    expect_products_eq("first shift", &spec, &r, &c0, &single(5, &[1, 2, 3], &[1, 4, 5], &a))?;

    let c1 = commutator_eval(&term(5, &[1, 2, 3], &[1, 4, 5], &a), 5, 2, &zeta1, &spec)
        .map_err(|e| e.to_string())?;
    let xzw = xi.mul(&zeta).mul(&zeta1);
    let display = TransvectionProduct::of_terms(vec![
        term(5, &[1, 3, 5], &[1, 4, 5], &xzw.neg()),
        term(5, &[1, 2, 3], &[1, 2, 4], &xzw),
        term(5, &[1, 3, 5], &[1, 2, 4], &xzw.mul(&zeta1).neg()),
    ]);
    expect_products_eq("triple", &spec, &r, &c1, &display)
}

fn plg_2() -> Result<(), String> {
    let (r, xi, zeta) = ring2();
    let spec = WedgeSpec::new(6, 2).unwrap();
    let inner = commutator_eval(&term(6, &[1, 2], &[3, 4], &xi), 4, 5, &zeta, &spec)
        .map_err(|e| e.to_string())?;
    let xz = xi.mul(&zeta);
    expect_products_eq("outward shift", &spec, &r, &inner, &single(6, &[1, 2], &[3, 5], &xz))?;

    let back = commutator_eval(&term(6, &[1, 2], &[3, 5], &xz), 5, 4, &r.one(), &spec)
        .map_err(|e| e.to_string())?;
    expect_products_eq("return shift", &spec, &r, &back, &single(6, &[1, 2], &[3, 4], &xz))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let report = run_all(None);
        for c in &report.checks {
            assert!(c.pass, "check {} failed: {:?}", c.id, c.diff);
        }
        assert!(report.total >= 18, "registry too small: {}", report.total);
    }

    #[test]
    fn filters_and_unknown_ids() {
        assert_eq!(run_all(Some("L4")).total, 5);
        assert_eq!(run_all(Some("nonexistent")).total, 0);
        assert!(run_all(Some("nonexistent")).all_pass());
        assert!(run_check("L4.1").unwrap().pass);
        assert!(matches!(run_check("bogus"), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn reports_serialize_with_stable_fields() {
        let rep = run_check("PF.1").unwrap();
        let js = serde_json::to_value(&rep).unwrap();
        assert_eq!(js["id"], "PF.1");
        assert_eq!(js["pass"], true);
        assert!(js.get("diff").is_none());
        assert!(js["ms"].is_number());
    }
}
