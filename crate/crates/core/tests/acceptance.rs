//! Acceptance suite: one line per criterion, exact equality throughout.
//!
//! Two sub-checks are known to disagree with the printed statements; they
//! are evaluated literally, reported as FAIL with the computed value, and
//! listed in `KNOWN`. The process exits nonzero on any other failure, or if
//! a known failure starts passing.

mod support;

use std::time::{Duration, Instant};

use pva_core::catalog::{first_slot_identity, h5_gen, h7, h9, h_n0, h_nc, h_sq, k_c, second_slot_identity, t_n};
use pva_core::cftcheck::{
    check_lemma22, check_w_algebra, cubic_coefficients, sl3_coefficients, sp4_coefficients, with_one_primary,
};
use pva_core::diffop::{check_compatible, check_hamiltonian};
use pva_core::hierarchy::{in_v0, lenard_step_dk, proportionality, run_hierarchy, Scheme};
use pva_core::independence::{rank_s, verify_lemma12};
use pva_core::lambda::{check_jacobi, check_skew, from_canonical};
use pva_core::transform::{transform_operator, ContactMap};
use pva_core::{BracketTable, DiffOp, DiffPoly, LambdaPoly, Symbol, Q};

/// Criteria with a sub-check that fails as printed.
const KNOWN: &[u32] = &[8, 11];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, ok: &str) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: ok.to_string() }
    } else {
        Outcome { pass: false, detail: failures.join("; ") }
    }
}

fn u(n: usize) -> DiffPoly {
    DiffPoly::u(n)
}

fn up(k: i32) -> DiffPoly {
    u(0).pow(k).unwrap()
}

fn n(k: i64) -> DiffPoly {
    DiffPoly::int(k)
}

fn x2() -> DiffPoly {
    DiffPoly::x() * DiffPoly::x()
}

fn constant(name: &str) -> DiffPoly {
    DiffPoly::symbol(Symbol::constant(name))
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn virasoro() -> Outcome {
    let c = constant("c");
    let t0 = Instant::now();
    let vir = from_canonical(&[(1, u(0))]).add(&LambdaPoly::monomial(3, 0, c));
    let table = BracketTable::scalar(vir);
    let ok = check_skew(&table).passes() && check_jacobi(&table).passes();
    let dt = t0.elapsed();
    let mut failures = Vec::new();
    if !ok {
        failures.push("skew or Jacobi residual is nonzero".into());
    }
    if dt >= Duration::from_secs(1) {
        failures.push(format!("took {}", secs(dt)));
    }
    outcome(failures, &format!("skew and Jacobi hold with symbolic c ({})", secs(dt)))
}

fn h_n0_family() -> Outcome {
    let t0 = Instant::now();
    let orders = [3u32, 5, 7, 9];
    let ops: Vec<DiffOp> = orders.iter().map(|&k| h_n0(k).unwrap()).collect();
    let mut failures = Vec::new();
    for (k, h) in orders.iter().zip(&ops) {
        if !check_hamiltonian(h).passes() {
            failures.push(format!("H^({k},0) is not Hamiltonian"));
        }
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !check_compatible(&ops[i], &ops[j]).passes() {
                failures.push(format!("H^({},0), H^({},0) not compatible", orders[i], orders[j]));
            }
        }
    }
    outcome(failures, &format!("4 Hamiltonian, 6 compatible pairs ({})", secs(t0.elapsed())))
}

fn slot_identities() -> Outcome {
    let mut failures = Vec::new();
    for m in 0..=3 {
        for k in 0..=3 {
            let (l, r) = first_slot_identity(m, k);
            if l != r {
                failures.push(format!("first-slot identity at m={m}, n={k}"));
            }
            let (l, r) = second_slot_identity(m, k);
            if l != r {
                failures.push(format!("second-slot identity at m={m}, n={k}"));
            }
        }
    }
    outcome(failures, "both identities for 0 <= m, n <= 3")
}

fn lenard_ladder() -> Outcome {
    let h5 = h_n0(5).unwrap();
    let mut failures = Vec::new();
    if h5.apply(&x2()) != DiffOp::d_pow(3).apply(&up(-2)) {
        failures.push("H^(5,0)(x^2) != D^3(1/u^2)".into());
    }
    if lenard_step_dk(3, &h5, &x2()).ok() != Some(up(-2)) {
        failures.push("first step is not 1/u^2".into());
    }
    match run_hierarchy(&Scheme::PowerOfD(3), &h5, &[x2()], 3) {
        Ok(st) => {
            for (j, xi) in st.xis.iter().enumerate().skip(1) {
                if !in_v0(xi) {
                    failures.push(format!("xi_{j} depends on x"));
                }
                if DiffOp::d_pow(3).apply(xi) != h5.apply(&st.xis[j - 1]) {
                    failures.push(format!("D^3 xi_{j} != H^(5,0) xi_{}", j - 1));
                }
            }
        }
        Err(e) => failures.push(format!("ladder stopped: {e}")),
    }
    outcome(failures, "x^2 -> 1/u^2 -> xi_2 -> xi_3, relations re-applied")
}

fn shifted_ladder() -> Outcome {
    let st = run_hierarchy(&Scheme::PowerOfD(3), &h_n0(5).unwrap(), &[x2()], 3).unwrap();
    let mut failures = Vec::new();
    let mut count = 0;
    for step in 0..=3usize {
        let h = h_n0(2 * step as u32 + 3).unwrap();
        for j in 0..=(3 - step) {
            count += 1;
            if DiffOp::d_pow(3).apply(&st.xis[j + step]) != h.apply(&st.xis[j]) {
                failures.push(format!("n={step}, j={j}"));
            }
        }
    }
    outcome(failures, &format!("D^3 xi_(j+n) = H^(2n+3,0) xi_j for all {count} pairs with j + n <= 3"))
}

/// `u''/u^3 - 3 u'^2/u^4`.
fn core_density() -> DiffPoly {
    u(2) * up(-3) - n(3) * u(1) * u(1) * up(-4)
}

fn first_flows() -> Outcome {
    let mut failures = Vec::new();
    let c = constant("c");
    let flow = k_c(&c).unwrap().apply(&up(-2));
    let half_c2 = (&c * &c).scale(&Q::new(1, 2));
    let computed = (core_density() + &half_c2 * up(-2)).d();
    let printed = (core_density() - &half_c2 * up(-2)).d();
    if proportionality(&flow, &computed) != Some(n(-2)) {
        failures.push("K_c(1/u^2) is not -2 (u''/u^3 - 3u'^2/u^4 + c^2/(2u^2))'".into());
    }
    let printed_matches = proportionality(&flow, &printed).is_some();

    let ch = Symbol::chain("c", 2);
    let (c7, c7_2) = (DiffPoly::symbol(ch[0]), DiffPoly::symbol(ch[2]));
    let flow = h7(&c7).unwrap().apply(&DiffPoly::one());
    let quasi = (&c7 * &c7).d_n(2) * c7_2.inverse().unwrap().scale(&Q::new(1, 4));
    if proportionality(&flow, &(core_density() - quasi).d()).is_none() {
        failures.push("order-7 first flow (c'' != 0) differs from the printed formula".into());
    }

    let ch = Symbol::chain("c", 1);
    let (c9, c9_1) = (DiffPoly::symbol(ch[0]), DiffPoly::symbol(ch[1]));
    let flow = h_sq(9, &c9).unwrap().apply(&DiffPoly::one());
    let printed9 = u(4) * up(-5) - n(15) * u(1) * u(3) * up(-6) - n(10) * u(2) * u(2) * up(-6)
        + n(105) * u(2) * u(1) * u(1) * up(-7)
        - n(105) * u(1).pow(4).unwrap() * up(-8)
        + n(20) * &c9_1 * u(1) * u(1) * up(-5)
        - n(5) * &c9_1 * u(2) * up(-4)
        + n(5) * &c9_1 * &c9_1 * up(-2)
        - n(20) * &c9 * &c9_1 * u(1) * up(-3)
        + n(15) * &c9 * &c9 * u(1) * u(1) * up(-4)
        - n(5) * &c9 * &c9 * u(2) * up(-3)
        - n(5) * c9.pow(4).unwrap();
    if proportionality(&flow, &printed9.d()).is_none() {
        failures.push("order-9 H^[9,c] first flow differs from the printed formula".into());
    }
    let note = if printed_matches {
        "printed c^2 sign also matches".to_string()
    } else {
        "c^2 sign discrepancy: the computed flow has +c^2/(2u^2), the printed one -c^2/(2u^2)".to_string()
    };
    outcome(failures, &format!("K_c xi_1 = -2 (...)'; order-7 and order-9 flows match; {note}"))
}

fn catalog_identities() -> Outcome {
    let c = constant("c");
    let mut failures = Vec::new();
    let h = |k| h_n0(k).unwrap();
    let lin = |ops: &[(DiffPoly, u32)]| ops.iter().fold(DiffOp::zero(), |acc, (f, k)| acc.add(&h(*k).left_mul(f)));
    let c2 = &c * &c;
    let c3 = &c2 * &c;
    let want7 = lin(&[(n(1), 7), (c.scale(&Q::from_int(2)), 5), (c2.clone(), 3)]);
    if h7(&c).unwrap() != want7 {
        failures.push("H_(7,c) expansion".into());
    }
    let want9 = lin(&[(n(1), 9), (c.scale(&Q::from_int(3)), 7), (c2.scale(&Q::from_int(3)), 5), (c3, 3)]);
    if h9(&c).unwrap() != want9 {
        failures.push("H_(9,c) expansion".into());
    }
    for k in [3u32, 5, 7, 9] {
        if h_nc(k, &DiffPoly::zero()).unwrap() != h(k) {
            failures.push(format!("H^({k},c) at c = 0"));
        }
    }
    let ch = Symbol::chain("k", 1);
    let cx = DiffPoly::symbol(ch[0]);
    if h_sq(7, &cx).unwrap() != h7(&(&cx * &cx).neg()).unwrap() {
        failures.push("H^[7,c(x)] != H_(7,-c(x)^2)".into());
    }
    outcome(failures, "H_(7,c), H_(9,c) expansions; H^(N,c)|c=0 for N <= 9; H^[7,c] = H_(7,-c^2)")
}

fn transforms() -> Outcome {
    let mut failures = Vec::new();
    for k in [1u32, 3] {
        let t = transform_operator(&DiffOp::d_pow(k), &ContactMap::legendre()).unwrap();
        if t.to_diffop() != Some(t_n(k).unwrap()) {
            failures.push(format!("Legendre image of D^{k} is not T_{k}"));
        }
    }
    let v = u;
    let y = DiffPoly::x;
    let swap = ContactMap::new(v(0).into(), (-y()).into()).unwrap();
    let b = DiffOp::mul_by(v(1).inverse().unwrap()).compose(&DiffOp::d_pow(1));
    let h = DiffOp::d_pow(1).compose(&b.pow(2));
    let image = transform_operator(&h, &swap).unwrap().to_diffop();
    let printed = DiffOp::from_coeffs([(3, DiffPoly::one()), (1, y().scale(&Q::from_int(2))), (0, DiffPoly::one())]);
    if image.as_ref() != Some(&printed) {
        let got = image.map_or("a non-polynomial operator".to_string(), |op| op.to_string());
        failures.push(format!("phi = v, psi = -y takes D o ((1/u')D)^2 to {got}, not D^3 + 2xD + 1"));
    }
    let c = constant("c");
    let catalog = [
        h_n0(3).unwrap(),
        h_n0(5).unwrap(),
        h_n0(7).unwrap(),
        h_n0(9).unwrap(),
        h_nc(5, &c).unwrap(),
        h_nc(7, &c).unwrap(),
        k_c(&c).unwrap(),
        h7(&c).unwrap(),
        h9(&c).unwrap(),
        h5_gen(&c, &DiffPoly::zero()).unwrap(),
        t_n(1).unwrap(),
        t_n(3).unwrap(),
    ];
    let square = ContactMap::new(y().into(), (v(0) * v(0)).scale(&Q::new(1, 2)).into()).unwrap();
    for op in &catalog {
        let t = transform_operator(op, &square).unwrap();
        if t.degree() != op.degree() {
            failures.push(format!("order changed for an operator of order {:?}", op.degree()));
        }
    }
    outcome(failures, &format!("Legendre D^1, D^3; hodograph image; order kept on {} operators", catalog.len()))
}

fn independence() -> Outcome {
    let mut failures = Vec::new();
    for k in [1u32, 3, 5, 7] {
        for m in [2 * k, 2 * k + 2, 2 * k + 3, 2 * k + 4] {
            let r = rank_s(k, m, false).unwrap();
            if r.rank != (k as usize).div_ceil(2) {
                failures.push(format!("rank S({k},{m}) = {}", r.rank));
            }
        }
        for m in [2 * k - 1, 2 * k + 1] {
            let r = rank_s(k, m, false).unwrap();
            if r.independent() {
                failures.push(format!("S({k},{m}) is independent"));
            }
        }
    }
    for k in 1..=10 {
        for j in (1..=k).step_by(2) {
            if !verify_lemma12(k, j) {
                failures.push(format!("F identities at n={k}, j={j}"));
            }
        }
    }
    outcome(failures, "ranks (N+1)/2, deficiency at 2N-1 and 2N+1, F identities for odd j <= n <= 10")
}

fn w_algebras() -> Outcome {
    let mut failures = Vec::new();
    let mut times = Vec::new();
    let c = constant("c");
    let sq = DiffPoly::symbol(Symbol::square_root("s", Q::from_int(2)));
    let cases =
        [("weight 3", Q::from_int(3), sl3_coefficients(&c)), ("weight 4", Q::from_int(4), sp4_coefficients(&c, &sq))];
    for (name, delta, pj) in cases {
        let t0 = Instant::now();
        let st = with_one_primary(&c, delta, &pj).unwrap();
        if !check_w_algebra(&st).passes() {
            failures.push(format!("{name} table fails skew or Jacobi"));
        }
        if !check_lemma22(&st, 1, &pj).unwrap().passes() {
            failures.push(format!("{name} data violate the weight relations"));
        }
        let dt = t0.elapsed();
        if dt > Duration::from_secs(120) {
            failures.push(format!("{name} took {}", secs(dt)));
        }
        times.push(secs(dt));
    }
    let (alpha, beta) = (constant("alpha"), constant("beta"));
    let pj = cubic_coefficients(&alpha, &beta);
    let st = with_one_primary(&DiffPoly::zero(), Q::from_int(4), &pj).unwrap();
    if !check_w_algebra(&st).passes() || !check_lemma22(&st, 1, &pj).unwrap().passes() {
        failures.push("cubic bracket fails at c = 0".into());
    }
    outcome(failures, &format!("weight 3 ({}), weight 4 ({}), cubic bracket at c = 0", times[0], times[1]))
}

fn linear_coefficient_triple() -> Outcome {
    let a = constant("a");
    let ax = &a * &DiffPoly::x();
    let h9a = h9(&ax).unwrap();
    let d3 = DiffOp::d_pow(3);
    let triple = |h5a: &DiffOp| -> Vec<String> {
        let mut f = Vec::new();
        for (name, p, q) in [("H_9, H_5", &h9a, h5a), ("H_9, D^3", &h9a, &d3), ("H_5, D^3", h5a, &d3)] {
            if !check_compatible(p, q).passes() {
                f.push(format!("{name} not compatible"));
            }
        }
        match run_hierarchy(&Scheme::PowerOfD(3), h5a, &[x2()], 2) {
            Ok(st) if h9a.apply(&x2()) == h5a.apply(&st.xis[2]) => {}
            Ok(_) => f.push("H_(9,ax) x^2 != H_(5,ax) xi_2".into()),
            Err(e) => f.push(format!("ladder stopped: {e}")),
        }
        f
    };
    let mut failures = triple(&h5_gen(&DiffPoly::zero(), &ax).unwrap());
    if !failures.is_empty() {
        let doubled = triple(&h5_gen(&DiffPoly::zero(), &ax.scale(&Q::from_int(2))).unwrap());
        let note = if doubled.is_empty() { "all claims hold with c2 = 2ax" } else { "c2 = 2ax fails too" };
        failures.push(note.into());
    }
    outcome(failures, "pairwise compatible, H_(9,ax) x^2 = H_(5,ax) xi_2")
}

fn property_suites() -> Outcome {
    let mut failures = Vec::new();
    let suites = support::props::all();
    for (name, run) in &suites {
        if let Err(e) = run() {
            failures.push(format!("{name}: {e}"));
        }
    }
    outcome(failures, &format!("{} suites, {} seed-pinned cases each", suites.len(), support::props::CASES))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Virasoro bracket", virasoro),
        (2, "H^(N,0) family", h_n0_family),
        (3, "first- and second-slot identities", slot_identities),
        (4, "Lenard ladder", lenard_ladder),
        (5, "shifted ladder", shifted_ladder),
        (6, "first flows", first_flows),
        (7, "catalog identities", catalog_identities),
        (8, "contact transformations", transforms),
        (9, "independence tables", independence),
        (10, "W-algebras", w_algebras),
        (11, "linear-coefficient triple", linear_coefficient_triple),
        (12, "property suites", property_suites),
    ];
    let mut unexpected = 0;
    let mut failed = 0;
    for (k, name, run) in criteria {
        let o = run();
        let known = KNOWN.contains(&k);
        let tag = match (o.pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if !o.pass {
            failed += 1;
        }
        if o.pass == known {
            unexpected += 1;
        }
        println!("criterion {k:>2}: {tag} {name}: {}", o.detail);
    }
    println!("acceptance: {} passed, {failed} failed, {unexpected} unexpected", 12 - failed);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
