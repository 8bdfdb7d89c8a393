//! Constructive inversion of the total derivative.

use super::monomial::{Jet, Monomial};
use super::poly::DiffPoly;
use super::rational::Q;
use crate::error::{Error, Result};

/// Returns `g` with `D g = f`, integration constants set to zero.
///
/// Peels the top jet variable: an exact `f` of order `m >= 1` is affine in
/// `u^(m)`, `f = u^(m) A + B`, and `h = \int A du^(m-1)` removes that layer.
/// Quasiconstant leftovers are integrated in `x`.
pub fn integrate_total_derivative(f: &DiffPoly) -> Result<DiffPoly> {
    let mut rest = f.clone();
    let mut g = DiffPoly::zero();
    while !rest.is_zero() {
        let Some(m) = rest.diff_order() else {
            let h = integrate_quasiconstant(&rest)?;
            return Ok(g.add(&h));
        };
        if m == 0 {
            return Err(Error::NotExact(format!("remainder of order 0 is not a total derivative: {rest}")));
        }
        let m = m as u16;
        let gen = rest
            .terms()
            .iter()
            .flat_map(|(mono, _)| mono.jets().iter().filter(|(j, _)| j.order == m).map(|(j, _)| j.gen))
            .min()
            .expect("order attained");
        let top = Jet { gen, order: m };
        let below = Jet { gen, order: m - 1 };
        let mut anti: Vec<(Monomial, Q)> = Vec::new();
        for (mono, c) in rest.terms() {
            match mono.jet_exp(top) {
                0 => {}
                1 => {
                    let mut a = mono.clone();
                    a.set_jet_exp(top, 0);
                    if a.jets().iter().any(|(j, _)| j.order >= m) {
                        return Err(Error::NotExact(format!("product of top-order variables in {rest}")));
                    }
                    let e = a.jet_exp(below);
                    if e == -1 {
                        return Err(Error::NotExact("logarithmic term in the antiderivative".into()));
                    }
                    a.set_jet_exp(below, e + 1);
                    anti.push((a, c / &Q::from_int((e + 1) as i64)));
                }
                e => {
                    return Err(Error::NotExact(format!("exponent {e} of the top-order variable")));
                }
            }
        }
        let h = DiffPoly::from_terms(anti);
        rest = rest.sub(&h.d());
        g = g.add(&h);
    }
    Ok(g)
}

/// Integrates a quasiconstant in `x`. Non-constant symbols are handled when
/// they are the declared derivative of another symbol.
fn integrate_quasiconstant(f: &DiffPoly) -> Result<DiffPoly> {
    let mut rest = f.clone();
    let mut g = DiffPoly::zero();
    let mut guard = 0usize;
    while !rest.is_zero() {
        guard += 1;
        if guard > 10_000 {
            return Err(Error::NotExact("quasiconstant integration does not terminate".into()));
        }
        let (mono, c) = rest
            .terms()
            .iter()
            .max_by(|a, b| a.0.x_exp().cmp(&b.0.x_exp()).then_with(|| b.0.cmp(&a.0)))
            .cloned()
            .expect("nonzero");
        let k = mono.x_exp();
        let nonconst: Vec<_> = mono.params().iter().filter(|(s, _)| !s.is_constant()).cloned().collect();
        let h = match nonconst.as_slice() {
            [] => {
                let mut n = mono.clone();
                n.x += 1;
                DiffPoly::term(n, &c / &Q::from_int((k + 1) as i64))
            }
            [(t, 1)] => {
                let s = t
                    .antiderivative()
                    .ok_or_else(|| Error::NotExact(format!("no antiderivative declared for symbol {t}")))?;
                let mut n = mono.clone();
                n.set_param_exp(*t, 0);
                let (sm, f) = Monomial::symbol(s, 1);
                let (p, g2) = n.mul(&sm);
                DiffPoly::term(p, &(&c * &f) * &g2)
            }
            _ => {
                return Err(Error::NotExact(format!("cannot integrate quasiconstant term {}", DiffPoly::term(mono, c))))
            }
        };
        rest = rest.sub(&h.d());
        g = g.add(&h);
    }
    Ok(g)
}
