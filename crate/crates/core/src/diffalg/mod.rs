//! The ground ring: Laurent differential polynomials in `x`, jet variables
//! `u_i^(n)` and parameter symbols, with exact rational coefficients.

mod integrate;
mod monomial;
mod poly;
mod rational;
mod symbol;

pub use integrate::integrate_total_derivative;
pub use monomial::{Jet, Monomial};
pub(crate) use poly::fmt_term;
pub use poly::{set_term_limit, term_limit, DiffPoly, Names, Substitution, TermLimitExceeded, Var};
pub use rational::Q;
pub use symbol::Symbol;

/// `u^(n)` in the scalar theory.
pub fn u(n: usize) -> DiffPoly {
    DiffPoly::u(n)
}

/// `u^(n)^e` for any integer `e`.
pub fn u_pow(n: usize, e: i32) -> DiffPoly {
    DiffPoly::term(Monomial::jet(Jet::new(0, n), e), Q::one())
}
