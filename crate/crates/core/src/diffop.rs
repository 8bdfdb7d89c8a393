//! Scalar differential operators `sum_k f_k D^k` in left-normal form.

use std::collections::BTreeMap;
use std::fmt;

use crate::diffalg::{fmt_term, DiffPoly, Names, Q};
use crate::lambda::{check_jacobi, BracketTable, Formal, JacobiReport, LambdaPoly};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiffOp {
    coeffs: BTreeMap<u32, DiffPoly>,
}

impl DiffOp {
    pub fn zero() -> DiffOp {
        DiffOp::default()
    }

    pub fn identity() -> DiffOp {
        DiffOp::mul_by(DiffPoly::one())
    }

    /// `D^k`.
    pub fn d_pow(k: u32) -> DiffOp {
        DiffOp::term(k, DiffPoly::one())
    }

    /// Multiplication operator `f`.
    pub fn mul_by(f: DiffPoly) -> DiffOp {
        DiffOp::term(0, f)
    }

    /// `f D^k`.
    pub fn term(k: u32, f: DiffPoly) -> DiffOp {
        let mut out = DiffOp::zero();
        out.add_term(k, f);
        out
    }

    pub fn from_coeffs(cs: impl IntoIterator<Item = (u32, DiffPoly)>) -> DiffOp {
        let mut out = DiffOp::zero();
        for (k, f) in cs {
            out.add_term(k, f);
        }
        out
    }

    fn add_term(&mut self, k: u32, f: DiffPoly) {
        if f.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&f);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f);
            }
        }
    }

    pub fn coeff(&self, k: u32) -> DiffPoly {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&u32, &DiffPoly)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power of `D`; `None` for the zero operator.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> DiffPoly {
        self.coeffs.values().next_back().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&k, f) in &other.coeffs {
            out.add_term(k, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&k, f) in &other.coeffs {
            out.add_term(k, f.neg());
        }
        out
    }

    pub fn neg(&self) -> DiffOp {
        self.map_coeffs(DiffPoly::neg)
    }

    pub fn scale(&self, c: &Q) -> DiffOp {
        self.map_coeffs(|f| f.scale(c))
    }

    /// `g * self` (left multiplication by a function).
    pub fn left_mul(&self, g: &DiffPoly) -> DiffOp {
        self.map_coeffs(|f| g.mul(f))
    }

    pub fn map_coeffs(&self, m: impl Fn(&DiffPoly) -> DiffPoly) -> DiffOp {
        DiffOp::from_coeffs(self.coeffs.iter().map(|(&k, f)| (k, m(f))))
    }

    /// `self o other`, using `D^i o b = sum_k C(i,k) D^k(b) D^(i-k)`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let Some(top) = self.degree() else { return DiffOp::zero() };
        let mut out = DiffOp::zero();
        for (&j, b) in &other.coeffs {
            let mut derivs = Vec::with_capacity(top as usize + 1);
            derivs.push(b.clone());
            for k in 0..top as usize {
                let next = derivs[k].d();
                derivs.push(next);
            }
            for (&i, a) in &self.coeffs {
                for (k, dkb) in derivs.iter().enumerate().take(i as usize + 1) {
                    if dkb.is_zero() {
                        continue;
                    }
                    let c = Q::binomial(i, k as u32);
                    out.add_term(i - k as u32 + j, a.mul(dkb).scale(&c));
                }
            }
        }
        out
    }

    /// Composite of a list of operators, left to right.
    pub fn product(ops: &[DiffOp]) -> DiffOp {
        ops.iter().fold(DiffOp::identity(), |acc, op| acc.compose(op))
    }

    /// `self^n`.
    pub fn pow(&self, n: u32) -> DiffOp {
        (0..n).fold(DiffOp::identity(), |acc, _| acc.compose(self))
    }

    /// Formal adjoint `sum (-D)^k o f_k`.
    pub fn adjoint(&self) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&k, f) in &self.coeffs {
            let mut d = f.clone();
            for i in 0..=k {
                let mut c = Q::binomial(k, i);
                if k % 2 == 1 {
                    c = -c;
                }
                out.add_term(k - i, d.scale(&c));
                if i < k {
                    d = d.d();
                }
            }
        }
        out
    }

    /// `sum f_k D^k g`.
    pub fn apply(&self, g: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        let mut dg = g.clone();
        let mut at = 0;
        for (&k, f) in &self.coeffs {
            while at < k {
                dg = dg.d();
                at += 1;
            }
            out = out.add(&f.mul(&dg));
        }
        out
    }

    /// `sum f_k (v_1 + ... + v_r + D)^k y`, the operator with `D` shifted by
    /// formal variables.
    pub fn apply_shifted(&self, vars: &[Formal], y: &LambdaPoly) -> LambdaPoly {
        let Some(top) = self.degree() else { return LambdaPoly::zero() };
        let pows = y.shift_powers_sum(vars, top as usize);
        let mut out = LambdaPoly::zero();
        for (&k, f) in &self.coeffs {
            out = out.add(&pows[k as usize].mul_poly(f));
        }
        out
    }

    /// `{u_l u} = H(D + l) 1 = sum f_k l^k`.
    pub fn to_bracket(&self) -> LambdaPoly {
        LambdaPoly::from_lambda_coeffs(self.coeffs.iter().map(|(&k, f)| (k, f.clone())))
    }

    /// Inverse of [`DiffOp::to_bracket`]; `m` powers are ignored.
    pub fn from_bracket(p: &LambdaPoly) -> DiffOp {
        DiffOp::from_coeffs(p.iter().filter(|((_, b), _)| *b == 0).map(|(&(a, _), f)| (a, f.clone())))
    }

    /// The scalar bracket table of this operator.
    pub fn to_table(&self) -> BracketTable {
        BracketTable::scalar(self.to_bracket())
    }

    /// `self + self*`, which vanishes exactly for skew-adjoint operators.
    pub fn skew_residual(&self) -> DiffOp {
        self.add(&self.adjoint())
    }

    pub fn is_skew_adjoint(&self) -> bool {
        self.skew_residual().is_zero()
    }

    pub fn display_with<'a>(&'a self, names: &'a Names) -> OpDisplay<'a> {
        OpDisplay { op: self, names }
    }
}

pub struct OpDisplay<'a> {
    op: &'a DiffOp,
    names: &'a Names,
}

impl fmt::Display for OpDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_zero() {
            return f.write_str("0");
        }
        for (i, (&k, p)) in self.op.coeffs.iter().rev().enumerate() {
            let d = match k {
                0 => String::new(),
                1 => "D".to_string(),
                k => format!("D^{k}"),
            };
            let (neg, term) = match p.as_single_term() {
                Some((m, c)) => {
                    let body = fmt_term(m, c, self.names);
                    let term = if d.is_empty() {
                        body
                    } else if m.is_one() && c.abs().is_one() {
                        d
                    } else {
                        format!("{body}*{d}")
                    };
                    (c.is_negative(), term)
                }
                None if d.is_empty() => (false, p.display_with(self.names).to_string()),
                None => (false, format!("({})*{d}", p.display_with(self.names))),
            };
            match (i, neg) {
                (0, false) => f.write_str(&term)?,
                (0, true) => write!(f, "-{term}")?,
                (_, false) => write!(f, " + {term}")?,
                (_, true) => write!(f, " - {term}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&Names::default()))
    }
}

/// Outcome of [`check_hamiltonian`].
#[derive(Clone, Debug)]
pub struct HamiltonianReport {
    pub skew_residual: DiffOp,
    pub jacobi: JacobiReport,
}

impl HamiltonianReport {
    pub fn is_skew(&self) -> bool {
        self.skew_residual.is_zero()
    }

    pub fn passes(&self) -> bool {
        self.is_skew() && self.jacobi.passes()
    }
}

/// Skew-adjointness plus the Jacobi identity of `{u_l u} = H(D + l) 1`.
pub fn check_hamiltonian(h: &DiffOp) -> HamiltonianReport {
    HamiltonianReport { skew_residual: h.skew_residual(), jacobi: check_jacobi(&h.to_table()) }
}

/// Outcome of [`check_compatible`] for `A`, `B` and `A + B`.
#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub a: HamiltonianReport,
    pub b: HamiltonianReport,
    pub sum: HamiltonianReport,
}

impl CompatibilityReport {
    pub fn passes(&self) -> bool {
        self.a.passes() && self.b.passes() && self.sum.passes()
    }
}

/// The Jacobi expression is quadratic in the bracket, so `A`, `B` and
/// `A + B` Hamiltonian implies the whole pencil is.
pub fn check_compatible(a: &DiffOp, b: &DiffOp) -> CompatibilityReport {
    let (ra, (rb, rs)) =
        rayon::join(|| check_hamiltonian(a), || rayon::join(|| check_hamiltonian(b), || check_hamiltonian(&a.add(b))));
    CompatibilityReport { a: ra, b: rb, sum: rs }
}
