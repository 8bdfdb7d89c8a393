use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use pva_core::cftcheck::{conformal_weight, sl3_coefficients, weight_defects, with_one_primary, CftStructure};
use pva_core::lambda::{bracket, canonical_form, from_canonical, BracketTable, Formal};
use pva_core::{DiffOp, DiffPoly, LambdaPoly, Symbol, Q};

const SEED: [u8; 32] = *b"pva-property-suite-seed-00000001";
pub const CASES: u32 = 256;

fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn check<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner().run(&strategy, test).map_err(|e| e.to_string())
}

/// One term `c x^a u^e0 u'^e1 u''^e2`.
fn term(c: i64, a: u32, e: [i32; 3]) -> DiffPoly {
    let mut t = DiffPoly::int(c);
    for _ in 0..a {
        t = t * DiffPoly::x();
    }
    for (n, &k) in e.iter().enumerate() {
        t = t * DiffPoly::u(n).pow(k).expect("jets are units");
    }
    t
}

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![-5i64..=-1, 1i64..=5]
}

/// Sums of up to three terms; negative powers of `u` when `laurent` is set.
fn poly(laurent: bool) -> impl Strategy<Value = DiffPoly> {
    let lo = if laurent { -2 } else { 0 };
    let t = (coeff(), 0u32..=1, lo..=2i32, 0i32..=2, 0i32..=1).prop_map(|(c, a, e0, e1, e2)| term(c, a, [e0, e1, e2]));
    prop::collection::vec(t, 0..=3).prop_map(|ts| ts.into_iter().fold(DiffPoly::zero(), |acc, t| acc + t))
}

fn small_poly() -> impl Strategy<Value = DiffPoly> {
    let t = (coeff(), 0u32..=1, 0i32..=1, 0i32..=1).prop_map(|(c, a, e0, e1)| term(c, a, [e0, e1, 0]));
    prop::collection::vec(t, 0..=2).prop_map(|ts| ts.into_iter().fold(DiffPoly::zero(), |acc, t| acc + t))
}

/// A scalar bracket `{u_l u} = sum_{k <= 3} l^k h_k`; no axioms are assumed.
fn table() -> impl Strategy<Value = BracketTable> {
    prop::collection::vec(small_poly(), 4).prop_map(|hs| {
        BracketTable::scalar(LambdaPoly::from_lambda_coeffs(hs.into_iter().enumerate().map(|(k, h)| (k as u32, h))))
    })
}

fn op() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(poly(true), 0..=3)
        .prop_map(|cs| DiffOp::from_coeffs(cs.into_iter().enumerate().map(|(k, c)| (k as u32, c))))
}

fn lam(f: &DiffPoly, g: &DiffPoly, t: &BracketTable) -> LambdaPoly {
    bracket(f, g, t, Formal::Lambda)
}

/// `(l + D) X`.
fn shift(x: &LambdaPoly) -> LambdaPoly {
    x.mul_var(Formal::Lambda, 1).add(&x.d())
}

/// `{f_{l+D} h}-> g = sum_k p_k (l + D)^k g` for `{f_l h} = sum_k l^k p_k`.
fn arrow(p: &LambdaPoly, g: &DiffPoly) -> LambdaPoly {
    let top = p.degree(Formal::Lambda).unwrap_or(0) as usize;
    let pows = LambdaPoly::from_poly(g.clone()).shift_powers(Formal::Lambda, top);
    p.iter().fold(LambdaPoly::zero(), |acc, (&(k, _), pk)| acc.add(&pows[k as usize].mul_poly(pk)))
}

pub fn total_derivative_is_a_derivation() -> Result<(), String> {
    check((poly(true), poly(true)), |(f, g)| {
        prop_assert_eq!((&f * &g).d(), f.d() * &g + &f * g.d());
        prop_assert_eq!((&f + &g).d(), f.d() + g.d());
        for n in 0..3 {
            let lhs = (&f * &g).partial_jet(0, n);
            prop_assert_eq!(lhs, f.partial_jet(0, n) * &g + &f * g.partial_jet(0, n));
        }
        Ok(())
    })
}

pub fn total_derivative_commutes_with_partials_up_to_a_shift() -> Result<(), String> {
    // d/du^(n) D = D d/du^(n) + d/du^(n-1)
    check(poly(true), |f| {
        for n in 0..4usize {
            let mut rhs = f.partial_jet(0, n).d();
            if n > 0 {
                rhs = rhs + f.partial_jet(0, n - 1);
            }
            prop_assert_eq!(f.d().partial_jet(0, n), rhs);
        }
        Ok(())
    })
}

pub fn bracket_is_a_derivation_in_the_second_slot() -> Result<(), String> {
    check((table(), poly(true), poly(false), poly(false)), |(t, f, g, h)| {
        let lhs = lam(&f, &(&g * &h), &t);
        let rhs = lam(&f, &g, &t).mul_poly(&h).add(&lam(&f, &h, &t).mul_poly(&g));
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn sesquilinearity() -> Result<(), String> {
    check((table(), poly(true), poly(true)), |(t, f, g)| {
        let b = lam(&f, &g, &t);
        prop_assert_eq!(lam(&f.d(), &g, &t), b.mul_var(Formal::Lambda, 1).neg());
        prop_assert_eq!(lam(&f, &g.d(), &t), shift(&b));
        Ok(())
    })
}

pub fn right_leibniz_rule() -> Result<(), String> {
    check((table(), poly(false), poly(false), poly(true)), |(t, f, g, h)| {
        let lhs = lam(&(&f * &g), &h, &t);
        let rhs = arrow(&lam(&f, &h, &t), &g).add(&arrow(&lam(&g, &h, &t), &f));
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn adjoint_reverses_products() -> Result<(), String> {
    check((op(), op()), |(a, b)| {
        prop_assert_eq!(a.compose(&b).adjoint(), b.adjoint().compose(&a.adjoint()));
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!(a.add(&b).adjoint(), a.adjoint().add(&b.adjoint()));
        Ok(())
    })
}

pub fn canonical_form_round_trip() -> Result<(), String> {
    let parts = (poly(true), poly(true), poly(true)).prop_map(|(f1, f3, f5)| {
        [(1u32, f1), (3, f3), (5, f5)].into_iter().filter(|(_, f)| !f.is_zero()).collect::<Vec<_>>()
    });
    check(parts, |parts| {
        let p = from_canonical(&parts);
        prop_assert_eq!(canonical_form(&p).unwrap(), parts);
        Ok(())
    })?;
    // P - reflect(P) is skew, so its canonical form exists and rebuilds it
    let lambda_only = prop::collection::vec(poly(true), 0..=4)
        .prop_map(|cs| LambdaPoly::from_lambda_coeffs(cs.into_iter().enumerate().map(|(k, c)| (k as u32, c))));
    check(lambda_only, |a| {
        let p = a.sub(&a.reflect());
        let parts = canonical_form(&p).unwrap();
        prop_assert!(parts.iter().all(|(j, _)| j % 2 == 1));
        prop_assert_eq!(from_canonical(&parts), p);
        Ok(())
    })
}

pub fn variational_derivative_kills_total_derivatives() -> Result<(), String> {
    check(poly(true), |f| {
        prop_assert!(f.d().variational(0).is_zero());
        prop_assert!(f.d_n(2).variational(0).is_zero());
        Ok(())
    })
}

pub fn integration_inverts_the_total_derivative() -> Result<(), String> {
    check(poly(true), |f| {
        let df = f.d();
        let g = df.integrate().unwrap();
        prop_assert_eq!(g.d(), df);
        prop_assert!(g.sub(&f).is_constant());
        Ok(())
    })
}

fn central_charge() -> DiffPoly {
    static C: OnceLock<Symbol> = OnceLock::new();
    DiffPoly::symbol(*C.get_or_init(|| Symbol::constant("c")))
}

/// Monomials `L^(n)^a W^(m)^b ...` with positive exponents, hence
/// homogeneous of weight `sum (2 + n) a + (3 + m) b`.
fn cft_monomial() -> impl Strategy<Value = (DiffPoly, i64)> {
    prop::collection::vec((0usize..=1, 0usize..=2, 1u32..=2), 1..=2).prop_map(|fs| {
        let mut p = DiffPoly::one();
        let mut w = 0;
        for (gen, order, e) in fs {
            for _ in 0..e {
                p = p * DiffPoly::jet(gen, order);
            }
            w += (2 + gen as i64 + order as i64) * e as i64;
        }
        (p, w)
    })
}

fn weight_three(c: &DiffPoly) -> CftStructure {
    with_one_primary(c, Q::from_int(3), &sl3_coefficients(c)).unwrap()
}

pub fn conformal_weights_add_and_shift() -> Result<(), String> {
    let c = central_charge();
    let s = weight_three(&c);
    check((cft_monomial(), cft_monomial()), |((f, wf), (g, wg))| {
        prop_assert_eq!(conformal_weight(&f, &s).unwrap(), Q::from_int(wf));
        prop_assert_eq!(conformal_weight(&(&f * &g), &s).unwrap(), Q::from_int(wf + wg));
        prop_assert_eq!(conformal_weight(&f.d(), &s).unwrap(), Q::from_int(wf + 1));
        Ok(())
    })
}

pub fn bracket_coefficients_have_the_predicted_weight() -> Result<(), String> {
    // the l^j coefficient of {f_l g} has weight wf + wg - j - 1
    let c = central_charge();
    let s = weight_three(&c);
    check((cft_monomial(), cft_monomial()), |((f, _), (g, _))| {
        prop_assert_eq!(weight_defects(&f, &g, &s).unwrap(), vec![]);
        Ok(())
    })
}

pub type Suite = fn() -> Result<(), String>;

/// Every suite, by name.
pub fn all() -> Vec<(&'static str, Suite)> {
    vec![
        ("total_derivative_is_a_derivation", total_derivative_is_a_derivation),
        (
            "total_derivative_commutes_with_partials_up_to_a_shift",
            total_derivative_commutes_with_partials_up_to_a_shift,
        ),
        ("bracket_is_a_derivation_in_the_second_slot", bracket_is_a_derivation_in_the_second_slot),
        ("sesquilinearity", sesquilinearity),
        ("right_leibniz_rule", right_leibniz_rule),
        ("adjoint_reverses_products", adjoint_reverses_products),
        ("canonical_form_round_trip", canonical_form_round_trip),
        ("variational_derivative_kills_total_derivatives", variational_derivative_kills_total_derivatives),
        ("integration_inverts_the_total_derivative", integration_inverts_the_total_derivative),
        ("conformal_weights_add_and_shift", conformal_weights_add_and_shift),
        ("bracket_coefficients_have_the_predicted_weight", bracket_coefficients_have_the_predicted_weight),
    ]
}
