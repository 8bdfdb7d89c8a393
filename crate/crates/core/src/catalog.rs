//! Named operator families and the building blocks of their compatibility
//! proof.
//!
//! Parameters `c`, `c1`, `c2` are quasiconstant [`DiffPoly`] values: rationals,
//! constant symbols, or symbols with a finite derivative chain that encodes
//! conditions such as `c'' = 0`.

use crate::diffalg::{DiffPoly, Q};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::lambda::{bracket_lp, bracket_poly_first_slot, from_canonical, BracketTable, Formal, LambdaPoly};

fn inv_u() -> DiffPoly {
    DiffPoly::u(0).inverse().expect("u is a unit")
}

fn d() -> DiffOp {
    DiffOp::d_pow(1)
}

fn mul(f: DiffPoly) -> DiffOp {
    DiffOp::mul_by(f)
}

fn half() -> Q {
    Q::new(1, 2)
}

fn require_odd(n: u32, min: u32) -> Result<()> {
    if n.is_multiple_of(2) || n < min {
        return Err(Error::BadArgument(format!("order must be odd and at least {min}, got {n}")));
    }
    Ok(())
}

fn require_quasiconstant(c: &DiffPoly, name: &str) -> Result<()> {
    if !c.is_quasiconstant() {
        return Err(Error::BadArgument(format!("{name} must be a quasiconstant, got {c}")));
    }
    Ok(())
}

/// Checks `D^k c = 0`.
fn require_vanishing_derivative(c: &DiffPoly, k: usize, what: &str) -> Result<()> {
    let dk = c.d_n(k);
    if !dk.is_zero() {
        return Err(Error::ConstraintViolated(format!("{what} must vanish, got {dk}")));
    }
    Ok(())
}

/// `B^(m) = ((1/u) D)^m`.
pub fn b_power(m: u32) -> DiffOp {
    mul(inv_u()).compose(&d()).pow(m)
}

/// `D^2 o B^(N-3) o D` for any `N >= 3`; for odd `N` this is `H^(N,0)`.
pub fn d2_b_d(n: u32) -> DiffOp {
    assert!(n >= 3, "N >= 3");
    DiffOp::product(&[DiffOp::d_pow(2), b_power(n - 3), d()])
}

/// `H^(N,0) = D^2 o ((1/u) D)^(N-3) o D`, `N` odd, `N >= 3`.
pub fn h_n0(n: u32) -> Result<DiffOp> {
    require_odd(n, 3)?;
    Ok(d2_b_d(n))
}

/// `B^(n,c) = (1/u)(D - c) o (1/u)(D - 2c) o ... o (1/u)(D - nc)`.
pub fn b_nc(n: u32, c: &DiffPoly) -> DiffOp {
    (1..=n).fold(DiffOp::identity(), |acc, k| {
        let factor = DiffOp::from_coeffs([(1, inv_u()), (0, -(inv_u() * c.scale(&Q::from_int(k as i64))))]);
        acc.compose(&factor)
    })
}

/// `H^(N,c) = (-1)^n (D - c) o (B^(n,c))* o D o B^(n,c) o (D + c)`, `N = 2n + 3`.
pub fn h_nc(n_order: u32, c: &DiffPoly) -> Result<DiffOp> {
    require_odd(n_order, 3)?;
    require_quasiconstant(c, "c")?;
    let n = (n_order - 3) / 2;
    let b = b_nc(n, c);
    let minus = DiffOp::from_coeffs([(1, DiffPoly::one()), (0, -c.clone())]);
    let plus = DiffOp::from_coeffs([(1, DiffPoly::one()), (0, c.clone())]);
    let h = DiffOp::product(&[minus, b.adjoint(), d(), b, plus]);
    Ok(if n % 2 == 1 { h.neg() } else { h })
}

/// `T_N = (1/u'') (D o 1/u'')^N`.
pub fn t_n(n: u32) -> Result<DiffOp> {
    require_odd(n, 1)?;
    let w = DiffPoly::u(2).inverse().expect("u'' is a unit");
    let step = d().compose(&mul(w.clone()));
    Ok(mul(w).compose(&step.pow(n)))
}

/// `K_c = D (D^2 - c^2) = D^3 - c^2 D`.
pub fn k_c(c: &DiffPoly) -> Result<DiffOp> {
    require_quasiconstant(c, "c")?;
    require_vanishing_derivative(c, 1, "c'")?;
    Ok(DiffOp::from_coeffs([(3, DiffPoly::one()), (1, -(c * c))]))
}

/// `2 c1 c2' + c2 c1' + 4 c2'''`, which must vanish for [`h5_gen`].
pub fn h5_constraint(c1: &DiffPoly, c2: &DiffPoly) -> DiffPoly {
    (DiffPoly::int(2) * c1 * c2.d()) + (c2 * c1.d()) + c2.d_n(3).scale(&Q::from_int(4))
}

/// Canonical coefficients `(g_1, g_3, g_5)` of the order-5 bracket
/// `{u_l u}_(5,c1,c2) = sum (D + 2l)^j g_j`.
pub fn h5_gen_coeffs(c1: &DiffPoly, c2: &DiffPoly) -> [DiffPoly; 3] {
    let u = DiffPoly::u;
    let p = |k: i32| u(0).pow(k).expect("u is a unit");
    let n = |k: i64| DiffPoly::int(k);
    let q = |a: i64, b: i64| DiffPoly::rational(a, b);
    let g1 = q(1, 4) * c1 * c1 * p(4) + c1 * c2 * p(6) - n(2) * c1 * p(3) * u(2)
        + n(6) * c1 * p(2) * u(1) * u(1)
        + n(3) * c1.d_n(2) * p(4)
        - n(6) * c2.d_n(2) * p(6)
        - n(8) * c1.d() * p(3) * u(1)
        - n(2) * p(3) * u(4)
        + n(24) * p(2) * u(1) * u(3)
        + n(18) * p(2) * u(2) * u(2)
        - n(144) * u(0) * u(1) * u(1) * u(2)
        + n(120) * u(1).pow(4).expect("positive power");
    let g1 = g1 * p(-6);
    let g3 = (c1 * p(2) + n(2) * c2 * p(4) + n(4) * u(0) * u(2) - n(12) * u(1) * u(1)) * p(-4);
    let g5 = p(-2);
    [g1, g3, g5]
}

/// `H_(5,c1,c2)`, the operator of the bracket `sum (D + 2l)^j g_j` divided
/// by `2^5`, so that the leading coefficient is `1/u^2` and
/// `H_(5,0,0) = H^(5,0)`. Requires `2 c1 c2' + c2 c1' + 4 c2''' = 0`.
pub fn h5_gen(c1: &DiffPoly, c2: &DiffPoly) -> Result<DiffOp> {
    require_quasiconstant(c1, "c1")?;
    require_quasiconstant(c2, "c2")?;
    let r = h5_constraint(c1, c2);
    if !r.is_zero() {
        return Err(Error::ConstraintViolated(format!("2 c1 c2' + c2 c1' + 4 c2''' = {r}")));
    }
    let [g1, g3, g5] = h5_gen_coeffs(c1, c2);
    Ok(DiffOp::from_bracket(&from_canonical(&[(1, g1), (3, g3), (5, g5)])).scale(&Q::new(1, 32)))
}

/// `H_(5,0,c) = H^(5,0) + (1/2) c D^3 + (3/4) c' D^2`, with `c''' = 0`.
pub fn h5_0c(c: &DiffPoly) -> Result<DiffOp> {
    require_quasiconstant(c, "c")?;
    require_vanishing_derivative(c, 3, "c'''")?;
    let extra = DiffOp::from_coeffs([(3, c.scale(&half())), (2, c.d().scale(&Q::new(3, 4)))]);
    Ok(h_n0(5)?.add(&extra))
}

/// `(1/u) D o (1/u) D^2 + c D - (1/2) c'`.
fn b3(c: &DiffPoly) -> DiffOp {
    let head = DiffOp::product(&[mul(inv_u()), d(), mul(inv_u()), DiffOp::d_pow(2)]);
    head.add(&DiffOp::from_coeffs([(1, c.clone()), (0, -c.d().scale(&half()))]))
}

/// `H_(7,c) = -B* o D o B` with `B = (1/u) D o (1/u) D^2 + c D - (1/2) c'`
/// and `c''' = 0`.
pub fn h7(c: &DiffPoly) -> Result<DiffOp> {
    require_quasiconstant(c, "c")?;
    require_vanishing_derivative(c, 3, "c'''")?;
    let b = b3(c);
    Ok(DiffOp::product(&[b.adjoint(), d(), b]).neg())
}

/// `H_(9,c) = -B* o (D o (1/u) o D o (1/u) D + c D + (1/2) c') o B`, `c'' = 0`,
/// with `B` as in [`h7`].
///
/// The overall sign is chosen so that constant `c` gives
/// `H^(9,0) + 3c H^(7,0) + 3c^2 H^(5,0) + c^3 H^(3,0)`, the same convention
/// as [`h7`].
pub fn h9(c: &DiffPoly) -> Result<DiffOp> {
    require_quasiconstant(c, "c")?;
    require_vanishing_derivative(c, 2, "c''")?;
    let b = b3(c);
    let middle = DiffOp::product(&[d(), mul(inv_u()), d(), mul(inv_u()), d()])
        .add(&DiffOp::from_coeffs([(1, c.clone()), (0, c.d().scale(&half()))]));
    Ok(DiffOp::product(&[b.adjoint(), middle, b]).neg())
}

/// `B^[n+2,c] = ((1/u) D - c) ... ((1/u) D - n c) ((1/u) D^2 + c D - c')`.
pub fn b_sq(n: u32, c: &DiffPoly) -> DiffOp {
    let head = (1..=n).fold(DiffOp::identity(), |acc, k| {
        acc.compose(&DiffOp::from_coeffs([(1, inv_u()), (0, -c.scale(&Q::from_int(k as i64)))]))
    });
    head.compose(&DiffOp::from_coeffs([(2, inv_u()), (1, c.clone()), (0, -c.d())]))
}

/// `H^[N,c] = (-1)^n (B^[n+2,c])* o D o B^[n+2,c]`, `N = 2n + 5`, `c'' = 0`.
pub fn h_sq(n_order: u32, c: &DiffPoly) -> Result<DiffOp> {
    require_odd(n_order, 5)?;
    require_quasiconstant(c, "c")?;
    require_vanishing_derivative(c, 2, "c''")?;
    let n = (n_order - 5) / 2;
    let b = b_sq(n, c);
    let h = DiffOp::product(&[b.adjoint(), d(), b]);
    Ok(if n % 2 == 1 { h.neg() } else { h })
}

/// `{u_l u}_N = (l + D)^2 B^(N-3)(l + D) l`, for any `N >= 3`.
pub fn bracket_n(n: u32) -> LambdaPoly {
    d2_b_d(n).to_bracket()
}

/// `B^(m)(l + D) 1`.
pub fn b_shift_one(m: u32) -> LambdaPoly {
    b_power(m).apply_shifted(&[Formal::Lambda], &LambdaPoly::from_poly(DiffPoly::one()))
}

/// Both sides of
/// `{B^(m)(l+D)1 _(l+m) u}_(n+3) =
///   -l (l+m+D)^2 B^(n)(l+m+D) (B^(m)(l+D)(1/u) - (-1)^m B^(m)(m+D)(1/u))`.
pub fn first_slot_identity(m: u32, n: u32) -> (LambdaPoly, LambdaPoly) {
    let table = BracketTable::scalar(bracket_n(n + 3));
    let lhs = bracket_poly_first_slot(&b_shift_one(m), &LambdaPoly::from_poly(DiffPoly::u(0)), &table);
    let w = LambdaPoly::from_poly(inv_u());
    let bm = b_power(m);
    let at_l = bm.apply_shifted(&[Formal::Lambda], &w);
    let at_m = bm.apply_shifted(&[Formal::Mu], &w);
    let inner = if m.is_multiple_of(2) { at_l.sub(&at_m) } else { at_l.add(&at_m) };
    let both = [Formal::Lambda, Formal::Mu];
    let outer = DiffOp::d_pow(2).compose(&b_power(n));
    let rhs = outer.apply_shifted(&both, &inner).mul_var(Formal::Lambda, 1).neg();
    (lhs, rhs)
}

/// Both sides of
/// `-(1/u) ((l+D) B^(m)(l+D) l) ((m+D) B^(n)(m+D) m) + {u_l B^(n)(m+D) m}_(m+3)
///   = -l^2 m^2 B^(n)(l+m+D) B^(m)(l+D)(1/u)`.
pub fn second_slot_identity(m: u32, n: u32) -> (LambdaPoly, LambdaPoly) {
    let table = BracketTable::scalar(bracket_n(m + 3));
    let lam = LambdaPoly::lambda_pow(1);
    let mu = LambdaPoly::mu_pow(1);
    let left = d().compose(&b_power(m)).apply_shifted(&[Formal::Lambda], &lam);
    let right = d().compose(&b_power(n)).apply_shifted(&[Formal::Mu], &mu);
    let product = left.mul(&right).mul_poly(&inv_u()).neg();
    let g = b_power(n).apply_shifted(&[Formal::Mu], &mu);
    let br = bracket_lp(&LambdaPoly::from_poly(DiffPoly::u(0)), &g, &table, Formal::Lambda);
    let lhs = product.add(&br);
    let w = LambdaPoly::from_poly(inv_u());
    let inner = b_power(m).apply_shifted(&[Formal::Lambda], &w);
    let rhs = b_power(n)
        .apply_shifted(&[Formal::Lambda, Formal::Mu], &inner)
        .mul_var(Formal::Lambda, 2)
        .mul_var(Formal::Mu, 2)
        .neg();
    (lhs, rhs)
}
