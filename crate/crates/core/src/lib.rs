//! Exact lambda-bracket calculus on algebras of differential functions.
//!
//! The crate is layered bottom-up:
//!
//! - [`diffalg`]: Laurent differential polynomials over the rationals, the
//!   total derivative, variational derivatives and integration of total
//!   derivatives;
//! - [`lambda`]: lambda-polynomials, the master-formula bracket, the
//!   skewcommutativity and Jacobi verifiers, canonical `(D + 2 lambda)` forms;
//! - [`diffop`]: scalar differential operators, their conversion to brackets
//!   and the Hamiltonian/compatibility tests;
//! - [`catalog`]: the named operator families;
//! - [`independence`]: the polynomials `F_{n,j}` and exact rank tables;
//! - [`hierarchy`]: Lenard-Magri recursions;
//! - [`transform`]: contact transformations;
//! - [`cftcheck`]: conformal weights, primary elements and W-algebra brackets.

pub mod catalog;
pub mod cftcheck;
pub mod diffalg;
pub mod diffop;
pub mod error;
pub mod hierarchy;
pub mod independence;
pub mod lambda;
pub mod transform;

pub use diffalg::{DiffPoly, Jet, Monomial, Names, Substitution, Symbol, Var, Q};
pub use diffop::DiffOp;
pub use error::{Error, Result};
pub use lambda::{BracketTable, LambdaPoly};
