use pva_core::catalog::{h5_gen, h7, h9, h_n0, h_nc, h_sq, k_c};
use pva_core::diffop::{check_compatible, DiffOp};
use pva_core::hierarchy::{
    conservation_failures, in_v0, lenard_step_dk, polynomial_in, proportionality, run_hierarchy, Scheme,
};
use pva_core::{DiffPoly, Symbol, Q};

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

/// `u''/u^3 - 3 u'^2/u^4`.
fn core_density() -> DiffPoly {
    u(2) * up(-3) - n(3) * u(1) * u(1) * up(-4)
}

#[test]
fn d3_ladder_from_x_squared() {
    let h5 = h_n0(5).unwrap();
    assert_eq!(h5.apply(&x2()), DiffOp::d_pow(3).apply(&up(-2)));
    assert_eq!(lenard_step_dk(3, &h5, &x2()).unwrap(), up(-2));
    let st = run_hierarchy(&Scheme::PowerOfD(3), &h5, &[x2()], 3).unwrap();
    assert_eq!(st.xis.len(), 4);
    assert_eq!(st.xis[2], n(5) * u(1) * u(1) * up(-6) - n(2) * u(2) * up(-5));
    assert!(st.xis[1..].iter().all(in_v0));
    assert!(st.relation_failures().is_empty());
    assert!(st.independent);
    assert!(conservation_failures(&st.k, &st.xis[1..]).is_empty());
}

#[test]
fn higher_operators_shift_the_ladder() {
    let st = run_hierarchy(&Scheme::PowerOfD(3), &h_n0(5).unwrap(), &[x2()], 3).unwrap();
    for step in 1..=3u32 {
        let h = h_n0(2 * step + 3).unwrap();
        for j in 0..=(3 - step as usize) {
            let lhs = DiffOp::d_pow(3).apply(&st.xis[j + step as usize]);
            assert_eq!(lhs, h.apply(&st.xis[j]), "n = {step}, j = {j}");
        }
    }
}

#[test]
fn order_five_scheme_with_constant_c() {
    let c = DiffPoly::symbol(Symbol::constant("c"));
    let seed = (&c * &c).inverse().unwrap().scale(&Q::from_int(-2));
    let h = h_nc(5, &c).unwrap();
    let st = run_hierarchy(&Scheme::Reduced5 { c: c.clone() }, &h, &[seed, up(-2)], 3).unwrap();
    assert_eq!(st.xis.len(), 5);
    assert!(st.relation_failures().is_empty());
    assert!(st.independent);
    let cs = c.symbols()[0];
    for xi in &st.xis[1..] {
        assert!(in_v0(xi));
        assert!(polynomial_in(xi, cs));
    }
    assert!(conservation_failures(&st.k, &st.xis[1..]).is_empty());
}

#[test]
fn first_flow_of_the_order_five_scheme() {
    let c = DiffPoly::symbol(Symbol::constant("c"));
    let flow = k_c(&c).unwrap().apply(&up(-2));
    let half_c2 = (&c * &c).scale(&Q::new(1, 2));
    let computed_sign = (core_density() + &half_c2 * up(-2)).d();
    let printed_sign = (core_density() - &half_c2 * up(-2)).d();
    assert_eq!(proportionality(&flow, &computed_sign), Some(n(-2)));
    assert_eq!(proportionality(&flow, &printed_sign), None);
}

#[test]
fn first_flow_of_the_order_seven_scheme() {
    let ch = Symbol::chain("c", 2);
    let (c, c2) = (DiffPoly::symbol(ch[0]), DiffPoly::symbol(ch[2]));
    let flow = h7(&c).unwrap().apply(&DiffPoly::one());
    let quasi = (&c * &c).d_n(2) * c2.inverse().unwrap().scale(&Q::new(1, 4));
    let printed = (core_density() - quasi).d();
    assert_eq!(proportionality(&flow, &printed), Some(c2.scale(&Q::new(1, 2))));

    let ch = Symbol::chain("b", 1);
    let (b, b1) = (DiffPoly::symbol(ch[0]), DiffPoly::symbol(ch[1]));
    let flow = h7(&b).unwrap().apply(&b);
    let printed = (core_density() - b.scale(&Q::new(3, 2))).d();
    assert_eq!(proportionality(&flow, &printed), Some((&b1 * &b1).scale(&Q::new(-1, 2))));
}

#[test]
fn first_flow_of_the_order_nine_scheme() {
    let ch = Symbol::chain("c", 1);
    let (c, c1) = (DiffPoly::symbol(ch[0]), DiffPoly::symbol(ch[1]));
    let flow = h_sq(9, &c).unwrap().apply(&DiffPoly::one());
    let printed = u(4) * up(-5) - n(15) * u(1) * u(3) * up(-6) - n(10) * u(2) * u(2) * up(-6)
        + n(105) * u(2) * u(1) * u(1) * up(-7)
        - n(105) * u(1).pow(4).unwrap() * up(-8)
        + n(20) * &c1 * u(1) * u(1) * up(-5)
        - n(5) * &c1 * u(2) * up(-4)
        + n(5) * &c1 * &c1 * up(-2)
        - n(20) * &c * &c1 * u(1) * up(-3)
        + n(15) * &c * &c * u(1) * u(1) * up(-4)
        - n(5) * &c * &c * u(2) * up(-3)
        - n(5) * c.pow(4).unwrap();
    assert_eq!(proportionality(&flow, &printed.d()), Some(-(&c1 * &c1).scale(&Q::from_int(2))));
}

#[test]
fn linear_coefficient_triple() {
    let a = DiffPoly::symbol(Symbol::constant("a"));
    let ax = &a * &DiffPoly::x();
    let h9a = h9(&ax).unwrap();
    // H_(5,0,c2) is normalized by H_(5,0,c) = H^(5,0) + c/2 D^3 + 3/4 c' D^2;
    // the closing identity holds for c2 = 2ax.
    let h5a = h5_gen(&DiffPoly::zero(), &ax.scale(&Q::from_int(2))).unwrap();
    let d3 = DiffOp::d_pow(3);
    assert!(check_compatible(&h9a, &h5a).passes());
    assert!(check_compatible(&h9a, &d3).passes());
    assert!(check_compatible(&h5a, &d3).passes());
    let st = run_hierarchy(&Scheme::PowerOfD(3), &h5a, &[x2()], 2).unwrap();
    assert_eq!(h9a.apply(&x2()), h5a.apply(&st.xis[2]));

    let literal = h5_gen(&DiffPoly::zero(), &ax).unwrap();
    assert!(!check_compatible(&h9a, &literal).passes());
    let st = run_hierarchy(&Scheme::PowerOfD(3), &literal, &[x2()], 2).unwrap();
    assert_ne!(h9a.apply(&x2()), literal.apply(&st.xis[2]));
}
