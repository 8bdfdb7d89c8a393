//! Lenard–Magri recursion `K xi_{j+1} = H xi_j` for the pairs `(D^k, H)` and
//! `(K_c, H^(5,c))`, with the checks that go with it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::catalog;
use crate::diffalg::{DiffPoly, Monomial, Symbol, Q};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::independence::bareiss_rank;

/// How `xi_{j+1}` is recovered from `xi_j`.
#[derive(Clone, Debug, PartialEq)]
pub enum Scheme {
    /// `K = D^k`, `k` in `{1, 3}`: integrate `H xi` `k` times.
    PowerOfD(u32),
    /// `K = K_c = D^3 - c^2 D` with `H = H^(5,c)` and constant `c`, through
    /// `xi_next = H_c xi - (1/2) \int xi (K_c (1/u^2))`.
    Reduced5 { c: DiffPoly },
}

impl Scheme {
    pub fn k_op(&self) -> Result<DiffOp> {
        match self {
            Scheme::PowerOfD(k) => {
                require_k(*k)?;
                Ok(DiffOp::d_pow(*k))
            }
            Scheme::Reduced5 { c } => catalog::k_c(c),
        }
    }

    pub fn step(&self, h: &DiffOp, xi: &DiffPoly) -> Result<DiffPoly> {
        match self {
            Scheme::PowerOfD(k) => lenard_step_dk(*k, h, xi),
            Scheme::Reduced5 { c } => lenard_step_reduced5(xi, c),
        }
    }
}

fn require_k(k: u32) -> Result<()> {
    if k != 1 && k != 3 {
        return Err(Error::BadArgument(format!("K must be D or D^3, got D^{k}")));
    }
    Ok(())
}

fn obstruction(e: Error) -> Error {
    match e {
        Error::NotExact(m) => Error::Obstruction(m),
        e => e,
    }
}

/// Solves `D^k xi_next = H xi` by `k` integrations with zero constants.
pub fn lenard_step_dk(k: u32, h: &DiffOp, xi: &DiffPoly) -> Result<DiffPoly> {
    require_k(k)?;
    let mut f = h.apply(xi);
    for _ in 0..k {
        f = f.integrate().map_err(obstruction)?;
    }
    Ok(f)
}

/// `H_c = (1/u^2) o (D^2 - c^2) + (u'/u^3)(2D + c) - (D + c) o (u'/u^3)`,
/// the operator with `(1/u) D (1/u) (D^2 - c^2) = D o H_c - (1/2) K_c(1/u^2)`.
///
/// The commonly printed form has `(u'/u^3)(D + c)` in the middle term; that
/// misses `D o (u'/u^3) o D` in the identity above.
pub fn h_c(c: &DiffPoly) -> DiffOp {
    let u = DiffPoly::u;
    let inv2 = u(0).pow(-2).expect("u is a unit");
    let w = u(1) * u(0).pow(-3).expect("u is a unit");
    let d_plus_c = DiffOp::from_coeffs([(1, DiffPoly::one()), (0, c.clone())]);
    DiffOp::mul_by(inv2)
        .compose(&DiffOp::from_coeffs([(2, DiffPoly::one()), (0, -(c * c))]))
        .add(&DiffOp::mul_by(w.clone()).compose(&DiffOp::from_coeffs([(1, DiffPoly::int(2)), (0, c.clone())])))
        .sub(&d_plus_c.compose(&DiffOp::mul_by(w)))
}

/// One step of the order-5 scheme with constant `c`:
/// `xi_next = H_c xi - (1/2) \int xi (K_c (1/u^2))`.
pub fn lenard_step_reduced5(xi: &DiffPoly, c: &DiffPoly) -> Result<DiffPoly> {
    let k = catalog::k_c(c)?;
    let xi1 = DiffPoly::u(0).pow(-2).expect("u is a unit");
    let integrand = xi * &k.apply(&xi1);
    let tail = integrand.integrate().map_err(obstruction)?;
    Ok(h_c(c).apply(xi) - tail.scale(&Q::new(1, 2)))
}

/// A computed hierarchy. `equations[j] = K xi_{j+1}` is the right-hand side
/// of `du/dt_j`.
#[derive(Clone, Debug)]
pub struct HierarchyState {
    pub k: DiffOp,
    pub h: DiffOp,
    pub xis: Vec<DiffPoly>,
    pub equations: Vec<DiffPoly>,
    pub independent: bool,
}

impl HierarchyState {
    /// Pairs `j` where `K xi_{j+1} != H xi_j`.
    pub fn relation_failures(&self) -> Vec<usize> {
        (0..self.xis.len().saturating_sub(1))
            .into_par_iter()
            .filter(|&j| self.k.apply(&self.xis[j + 1]) != self.h.apply(&self.xis[j]))
            .collect()
    }
}

/// Extends `seeds` by `steps` applications of the scheme. The seeds must
/// already satisfy the recursion among themselves.
pub fn run_hierarchy(scheme: &Scheme, h: &DiffOp, seeds: &[DiffPoly], steps: usize) -> Result<HierarchyState> {
    if seeds.is_empty() {
        return Err(Error::BadArgument("at least one seed is required".into()));
    }
    let k = scheme.k_op()?;
    let mut xis = seeds.to_vec();
    for _ in 0..steps {
        let next = scheme.step(h, xis.last().expect("nonempty"))?;
        xis.push(next);
    }
    let equations = xis[1..].iter().map(|xi| k.apply(xi)).collect();
    let mut state = HierarchyState { k, h: h.clone(), xis, equations, independent: false };
    if let Some(&j) = state.relation_failures().first() {
        return Err(Error::ConstraintViolated(format!("K xi_{} != H xi_{j}", j + 1)));
    }
    state.independent = linearly_independent(&state.xis);
    Ok(state)
}

/// `xi_i (K xi_j)` is a total derivative for all produced pairs: the pairs
/// `(i, j)` where it is not.
pub fn conservation_failures(k: &DiffOp, xis: &[DiffPoly]) -> Vec<(usize, usize)> {
    let kx: Vec<DiffPoly> = xis.par_iter().map(|xi| k.apply(xi)).collect();
    let pairs: Vec<(usize, usize)> = (0..xis.len()).flat_map(|i| (0..xis.len()).map(move |j| (i, j))).collect();
    pairs.into_par_iter().filter(|&(i, j)| !(&xis[i] * &kx[j]).variational(0).is_zero()).collect()
}

/// `delta \int h dx / delta u = xi`.
pub fn verify_density(h: &DiffPoly, xi: &DiffPoly) -> bool {
    h.variational(0) == *xi
}

/// Membership in `C[u, 1/u, u', u'', ...]` with constant coefficients.
pub fn in_v0(f: &DiffPoly) -> bool {
    f.terms().iter().all(|(m, _)| {
        m.x_exp() == 0
            && m.params().iter().all(|(s, _)| s.is_constant())
            && m.jets().iter().all(|(j, e)| j.gen == 0 && (*e > 0 || j.order == 0))
    })
}

/// No negative powers of `s`.
pub fn polynomial_in(f: &DiffPoly, s: Symbol) -> bool {
    f.min_param_exp(s) >= 0
}

/// Constant `q` with `a = q b`, if `b != 0` and one exists. `q` may involve
/// constant symbols such as `c''` when `c''' = 0`.
pub fn proportionality(a: &DiffPoly, b: &DiffPoly) -> Option<DiffPoly> {
    let (lead, _) = b.terms().first()?;
    let key = lead.without_params();
    let part = |p: &DiffPoly| {
        DiffPoly::from_terms(
            p.terms().iter().filter(|(m, _)| m.without_params() == key).map(|(m, c)| (m.params_only(), c.clone())),
        )
    };
    let q = part(a).div(&part(b)).ok()?;
    (q.is_constant() && &q * b == *a).then_some(q)
}

/// Linear independence over the constants, certified on a finite monomial
/// window. Constant symbols are specialized to fixed rationals, so a
/// full-rank specialization proves independence; other symbols stay in the
/// window.
pub fn linearly_independent(polys: &[DiffPoly]) -> bool {
    if polys.iter().any(DiffPoly::is_zero) {
        return false;
    }
    (0..2).any(|shift| {
        let mut syms: Vec<Symbol> = polys.iter().flat_map(DiffPoly::symbols).collect();
        syms.sort();
        syms.dedup();
        let values: Vec<(Symbol, DiffPoly)> = syms
            .into_iter()
            .filter(|s| s.is_constant() && s.square().is_none())
            .enumerate()
            .map(|(i, s)| (s, DiffPoly::rational(3 + 2 * (i + shift) as i64, 7 + i as i64)))
            .collect();
        let specialized: Option<Vec<DiffPoly>> = polys.iter().map(|p| p.substitute_symbols(&values).ok()).collect();
        specialized.is_some_and(|ps| rank_over_q(&ps) == ps.len())
    })
}

fn rank_over_q(polys: &[DiffPoly]) -> usize {
    let mut window: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let n = window.len();
            window.entry(m.clone()).or_insert(n);
        }
    }
    let rows = polys
        .iter()
        .map(|p| {
            let lcm = p.terms().iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(&c.denom()));
            let mut row = vec![BigInt::from(0); window.len()];
            for (m, c) in p.terms() {
                row[window[m]] = c.numer() * (&lcm / c.denom());
            }
            row
        })
        .collect();
    bareiss_rank(rows)
}
