//! Lambda-polynomials and the master-formula bracket.
//!
//! A [`LambdaPoly`] is a polynomial in two formal even variables `l` (lambda)
//! and `m` (mu) with [`DiffPoly`] coefficients. The total derivative acts on
//! coefficients only; the formal variables commute with everything.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::diffalg::{fmt_term, DiffPoly, Names, Q};
use crate::error::{Error, Result};

/// Which formal variable an operation acts in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Formal {
    Lambda,
    Mu,
}

impl Formal {
    fn exps(self, k: u32) -> (u32, u32) {
        match self {
            Formal::Lambda => (k, 0),
            Formal::Mu => (0, k),
        }
    }
}

/// `sum c_{a,b} l^a m^b`, keyed by `(a, b)`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LambdaPoly {
    coeffs: BTreeMap<(u32, u32), DiffPoly>,
}

impl LambdaPoly {
    pub fn zero() -> LambdaPoly {
        LambdaPoly::default()
    }

    /// The lambda-free value `p`.
    pub fn from_poly(p: DiffPoly) -> LambdaPoly {
        LambdaPoly::monomial(0, 0, p)
    }

    /// `p l^a m^b`.
    pub fn monomial(a: u32, b: u32, p: DiffPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        out.add_term(a, b, p);
        out
    }

    /// `l^k`.
    pub fn lambda_pow(k: u32) -> LambdaPoly {
        LambdaPoly::monomial(k, 0, DiffPoly::one())
    }

    pub fn mu_pow(k: u32) -> LambdaPoly {
        LambdaPoly::monomial(0, k, DiffPoly::one())
    }

    /// `sum_k c_k l^k`.
    pub fn from_lambda_coeffs(cs: impl IntoIterator<Item = (u32, DiffPoly)>) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (k, p) in cs {
            out.add_term(k, 0, p);
        }
        out
    }

    pub fn add_term(&mut self, a: u32, b: u32, p: DiffPoly) {
        if p.is_zero() {
            return;
        }
        match self.coeffs.entry((a, b)) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&p);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
        }
    }

    pub fn coeff(&self, a: u32, b: u32) -> DiffPoly {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// Coefficient of `l^k` in a lambda-only value.
    pub fn coeff_lambda(&self, k: u32) -> DiffPoly {
        self.coeff(k, 0)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32), &DiffPoly)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in the given variable; `None` for the zero value.
    pub fn degree(&self, var: Formal) -> Option<u32> {
        self.coeffs
            .keys()
            .map(|&(a, b)| match var {
                Formal::Lambda => a,
                Formal::Mu => b,
            })
            .max()
    }

    /// True when no power of `m` occurs.
    pub fn is_lambda_only(&self) -> bool {
        self.coeffs.keys().all(|&(_, b)| b == 0)
    }

    /// Total number of `DiffPoly` terms, a size measure.
    pub fn term_count(&self) -> usize {
        self.coeffs.values().map(DiffPoly::len).sum()
    }

    pub fn add(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        for (&(a, b), p) in &other.coeffs {
            out.add_term(a, b, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        for (&(a, b), p) in &other.coeffs {
            out.add_term(a, b, p.neg());
        }
        out
    }

    pub fn neg(&self) -> LambdaPoly {
        self.map_coeffs(DiffPoly::neg)
    }

    pub fn scale(&self, c: &Q) -> LambdaPoly {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Multiplies every coefficient by `p`.
    pub fn mul_poly(&self, p: &DiffPoly) -> LambdaPoly {
        self.map_coeffs(|q| q.mul(p))
    }

    pub fn mul(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (&(a, b), p) in &self.coeffs {
            for (&(c, d), q) in &other.coeffs {
                out.add_term(a + c, b + d, p.mul(q));
            }
        }
        out
    }

    /// Multiplies by `var^k`.
    pub fn mul_var(&self, var: Formal, k: u32) -> LambdaPoly {
        if k == 0 {
            return self.clone();
        }
        let (da, db) = var.exps(k);
        LambdaPoly { coeffs: self.coeffs.iter().map(|(&(a, b), p)| ((a + da, b + db), p.clone())).collect() }
    }

    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (&(a, b), p) in &self.coeffs {
            out.add_term(a, b, f(p));
        }
        out
    }

    /// Total derivative applied to every coefficient.
    pub fn d(&self) -> LambdaPoly {
        self.map_coeffs(DiffPoly::d)
    }

    /// Exchanges `l` and `m`.
    pub fn swap(&self) -> LambdaPoly {
        LambdaPoly { coeffs: self.coeffs.iter().map(|(&(a, b), p)| ((b, a), p.clone())).collect() }
    }

    /// `(var + D)^n self` for `n = 0..=nmax`.
    pub fn shift_powers(&self, var: Formal, nmax: usize) -> Vec<LambdaPoly> {
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(self.clone());
        for n in 0..nmax {
            let prev = &out[n];
            let next = prev.mul_var(var, 1).add(&prev.d());
            out.push(next);
        }
        out
    }

    /// `(v_1 + ... + v_r + D)^n self` for `n = 0..=nmax`.
    pub fn shift_powers_sum(&self, vars: &[Formal], nmax: usize) -> Vec<LambdaPoly> {
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(self.clone());
        for n in 0..nmax {
            let prev = &out[n];
            let mut next = prev.d();
            for &v in vars {
                next = next.add(&prev.mul_var(v, 1));
            }
            out.push(next);
        }
        out
    }

    /// `(var + D)^n self`.
    pub fn shift_pow(&self, var: Formal, n: usize) -> LambdaPoly {
        self.shift_powers(var, n).pop().expect("nonempty")
    }

    /// Replaces `l` by `l + m`.
    pub fn lambda_to_sum(&self) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (&(a, b), p) in &self.coeffs {
            for q in 0..=a {
                let c = Q::binomial(a, q);
                out.add_term(q, b + a - q, p.scale(&c));
            }
        }
        out
    }

    /// The skew reflection of a lambda-only value:
    /// `sum_k h_k l^k  |->  sum_k (-l - D)^k h_k`, with `D` acting on `h_k`.
    pub fn reflect(&self) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (&(k, b), h) in &self.coeffs {
            let mut dh = h.clone();
            for t in 0..=k {
                let c = Q::binomial(k, t);
                let c = if k % 2 == 1 { -c } else { c };
                out.add_term(k - t, b, dh.scale(&c));
                if t < k {
                    dh = dh.d();
                }
            }
        }
        out
    }

    pub fn partial_jet(&self, gen: usize, order: usize) -> LambdaPoly {
        self.map_coeffs(|p| p.partial_jet(gen, order))
    }

    /// Largest jet order of generator `gen` in any coefficient.
    pub fn diff_order_in(&self, gen: usize) -> Option<u32> {
        self.coeffs.values().filter_map(|p| p.diff_order_in(gen)).max()
    }

    pub fn display_with<'a>(&'a self, names: &'a Names) -> LambdaDisplay<'a> {
        LambdaDisplay { poly: self, names }
    }
}

pub struct LambdaDisplay<'a> {
    poly: &'a LambdaPoly,
    names: &'a Names,
}

impl fmt::Display for LambdaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let var = |name: &str, k: u32| match k {
            0 => None,
            1 => Some(name.to_string()),
            k => Some(format!("{name}^{k}")),
        };
        for (i, (&(a, b), p)) in self.poly.coeffs.iter().rev().enumerate() {
            let vars = [var("l", a), var("m", b)].into_iter().flatten().collect::<Vec<_>>().join("*");
            let (neg, term) = match p.as_single_term() {
                Some((m, c)) => {
                    let body = fmt_term(m, c, self.names);
                    let term = if vars.is_empty() {
                        body
                    } else if m.is_one() && c.abs().is_one() {
                        vars
                    } else {
                        format!("{body}*{vars}")
                    };
                    (c.is_negative(), term)
                }
                None if vars.is_empty() => (false, p.display_with(self.names).to_string()),
                None => (false, format!("({})*{vars}", p.display_with(self.names))),
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

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&Names::default()))
    }
}

/// The brackets `{u_i l u_j}` of a set of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    gens: Vec<String>,
    entries: Vec<Vec<LambdaPoly>>,
    weights: Option<Vec<Q>>,
}

impl BracketTable {
    /// `entries[i][j] = {u_i l u_j}`, lambda-only values.
    pub fn new(gens: Vec<String>, entries: Vec<Vec<LambdaPoly>>) -> Result<BracketTable> {
        let n = gens.len();
        if n == 0 {
            return Err(Error::BadArgument("a bracket table needs at least one generator".into()));
        }
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::BadArgument(format!("bracket table must be {n}x{n}")));
        }
        if entries.iter().flatten().any(|e| !e.is_lambda_only()) {
            return Err(Error::BadArgument("table entries must not contain m".into()));
        }
        Ok(BracketTable { gens, entries, weights: None })
    }

    /// Single generator `u` with `{u_l u} = p`.
    pub fn scalar(p: LambdaPoly) -> BracketTable {
        BracketTable::new(vec!["u".into()], vec![vec![p]]).expect("1x1 table")
    }

    pub fn with_weights(mut self, w: Vec<Q>) -> Result<BracketTable> {
        if w.len() != self.gens.len() {
            return Err(Error::BadArgument("one weight per generator".into()));
        }
        self.weights = Some(w);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn weights(&self) -> Option<&[Q]> {
        self.weights.as_deref()
    }

    pub fn entry(&self, i: usize, j: usize) -> &LambdaPoly {
        &self.entries[i][j]
    }

    pub fn names(&self) -> Names {
        Names { x: "x".into(), gens: self.gens.clone() }
    }
}

/// `{f_var g}` by the master formula
/// `sum dg/du_j^(n) (var+D)^n {u_i_{var+D} u_j}-> (-var-D)^m df/du_i^(m)`.
///
/// Formal variables already present in `f` or `g` are inert scalars.
pub fn bracket_lp(f: &LambdaPoly, g: &LambdaPoly, t: &BracketTable, var: Formal) -> LambdaPoly {
    let ell = t.len();
    // Z_j = sum_i {u_i_{var+D} u_j}-> F_i
    let mut z: Vec<LambdaPoly> = vec![LambdaPoly::zero(); ell];
    for i in 0..ell {
        let Some(top) = f.diff_order_in(i) else { continue };
        // F_i = sum_m (-var-D)^m df/du_i^(m), Horner from the top order
        let mut fi = LambdaPoly::zero();
        for m in (0..=top as usize).rev() {
            fi = f.partial_jet(i, m).sub(&fi.shift_pow(var, 1));
        }
        if fi.is_zero() {
            continue;
        }
        let kmax = (0..ell).filter_map(|j| t.entry(i, j).degree(Formal::Lambda)).max().unwrap_or(0);
        let pows = fi.shift_powers(var, kmax as usize);
        for (j, zj) in z.iter_mut().enumerate() {
            for (&(k, _), h) in t.entry(i, j).iter() {
                *zj = zj.add(&pows[k as usize].mul_poly(h));
            }
        }
    }
    let mut out = LambdaPoly::zero();
    for (j, zj) in z.iter().enumerate() {
        if zj.is_zero() {
            continue;
        }
        let Some(top) = g.diff_order_in(j) else { continue };
        let pows = zj.shift_powers(var, top as usize);
        let parts: Vec<LambdaPoly> = (0..=top as usize)
            .into_par_iter()
            .map(|n| {
                let dg = g.partial_jet(j, n);
                if dg.is_zero() {
                    LambdaPoly::zero()
                } else {
                    dg.mul(&pows[n])
                }
            })
            .collect();
        for p in parts {
            out = out.add(&p);
        }
    }
    out
}

/// `{f_var g}` for plain differential functions.
pub fn bracket(f: &DiffPoly, g: &DiffPoly, t: &BracketTable, var: Formal) -> LambdaPoly {
    bracket_lp(&LambdaPoly::from_poly(f.clone()), &LambdaPoly::from_poly(g.clone()), t, var)
}

/// `{P_{l+m} g}` for a lambda-only `P = sum_k l^k f_k`: the brackets
/// `{f_k_nu g}` are computed in a fresh variable and `nu` is then replaced by
/// `l + m`.
pub fn bracket_poly_first_slot(p: &LambdaPoly, g: &LambdaPoly, t: &BracketTable) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for (&(k, _), fk) in p.iter() {
        let inner = bracket_lp(&LambdaPoly::from_poly(fk.clone()), g, t, Formal::Lambda);
        out = out.add(&inner.lambda_to_sum().mul_var(Formal::Lambda, k));
    }
    out
}

fn gen_lp(i: usize) -> LambdaPoly {
    LambdaPoly::from_poly(DiffPoly::jet(i, 0))
}

/// Residuals of skewcommutativity, `entry(j,i) + reflect(entry(i,j))`.
#[derive(Clone, Debug)]
pub struct SkewReport {
    pub residuals: Vec<Vec<LambdaPoly>>,
}

impl SkewReport {
    pub fn passes(&self) -> bool {
        self.residuals.iter().flatten().all(LambdaPoly::is_zero)
    }
}

pub fn check_skew(t: &BracketTable) -> SkewReport {
    let ell = t.len();
    let residuals = (0..ell).map(|j| (0..ell).map(|i| t.entry(j, i).add(&t.entry(i, j).reflect())).collect()).collect();
    SkewReport { residuals }
}

/// Residuals of the Jacobi identity for every ordered triple `(i, j, k)`:
/// `{u_i l {u_j m u_k}} - {u_j m {u_i l u_k}} - {{u_i l u_j}_{l+m} u_k}`.
#[derive(Clone, Debug)]
pub struct JacobiReport {
    pub residuals: Vec<((usize, usize, usize), LambdaPoly)>,
}

impl JacobiReport {
    pub fn passes(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn failing(&self) -> impl Iterator<Item = &((usize, usize, usize), LambdaPoly)> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero())
    }
}

/// `{u_i l {u_j m u_k}}`.
fn nested(t: &BracketTable, i: usize, j: usize, k: usize) -> LambdaPoly {
    let inner = t.entry(j, k).swap();
    bracket_lp(&gen_lp(i), &inner, t, Formal::Lambda)
}

pub fn check_jacobi(t: &BracketTable) -> JacobiReport {
    let ell = t.len();
    let triples: Vec<(usize, usize, usize)> =
        (0..ell).flat_map(|i| (0..ell).flat_map(move |j| (0..ell).map(move |k| (i, j, k)))).collect();
    let a: Vec<LambdaPoly> = triples.par_iter().map(|&(i, j, k)| nested(t, i, j, k)).collect();
    let idx = |i: usize, j: usize, k: usize| (i * ell + j) * ell + k;
    let residuals = triples
        .par_iter()
        .map(|&(i, j, k)| {
            let c = bracket_poly_first_slot(t.entry(i, j), &gen_lp(k), t);
            let r = a[idx(i, j, k)].sub(&a[idx(j, i, k)].swap()).sub(&c);
            ((i, j, k), r)
        })
        .collect();
    JacobiReport { residuals }
}

/// The canonical expansion `P = sum_{j odd} (D + 2l)^j f_j` of a skew
/// lambda-only value, returned in increasing `j`.
pub fn canonical_form(p: &LambdaPoly) -> Result<Vec<(u32, DiffPoly)>> {
    if !p.is_lambda_only() {
        return Err(Error::BadArgument("canonical form needs a lambda-only value".into()));
    }
    let mut rest = p.clone();
    let mut out = Vec::new();
    while let Some(k) = rest.degree(Formal::Lambda) {
        if k % 2 == 0 {
            return Err(Error::NotSkewForm { degree: k });
        }
        let fk = rest.coeff_lambda(k).scale(&Q::from_int(2).pow(-(k as i32)));
        rest = rest.sub(&two_lambda_shift(&fk, k));
        out.push((k, fk));
    }
    out.reverse();
    Ok(out)
}

/// `(D + 2l)^k f = sum_i C(k,i) 2^(k-i) l^(k-i) D^i f`.
pub fn two_lambda_shift(f: &DiffPoly, k: u32) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    let mut df = f.clone();
    for i in 0..=k {
        let c = &Q::binomial(k, i) * &Q::from_int(2).pow((k - i) as i32);
        out.add_term(k - i, 0, df.scale(&c));
        if i < k {
            df = df.d();
        }
    }
    out
}

/// Inverse of [`canonical_form`].
pub fn from_canonical(parts: &[(u32, DiffPoly)]) -> LambdaPoly {
    parts.iter().fold(LambdaPoly::zero(), |acc, (k, f)| acc.add(&two_lambda_shift(f, *k)))
}

/// Order `N` and level `m = max_j (j + ord f_j)`; `None` as level stands
/// for minus infinity (quasiconstant coefficients).
pub fn order_and_level(p: &LambdaPoly) -> Result<(u32, Option<i64>)> {
    let parts = canonical_form(p)?;
    let n = parts.last().map(|(j, _)| *j).ok_or_else(|| Error::BadArgument("the zero bracket has no order".into()))?;
    let m = parts.iter().filter_map(|(j, f)| f.diff_order().map(|o| *j as i64 + o as i64)).max();
    Ok((n, m))
}

/// Whether `(N, m)` is an admissible (order, level) pair for a Poisson
/// bracket with non-quasiconstant coefficients. A level of minus infinity
/// is not constrained.
pub fn check_level_bounds(n: u32, m: Option<i64>) -> bool {
    let Some(m) = m else { return true };
    if n.is_multiple_of(2) {
        return false;
    }
    let n = n as i64;
    if 2 * m < n - 1 || m > 2 * n + 1 || m == 2 * n {
        return false;
    }
    match n % 4 {
        3 => m != (n + 1) / 2,
        1 => m != (n - 1) / 2 && m != (n + 3) / 2,
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::Symbol;

    fn u(n: usize) -> DiffPoly {
        DiffPoly::u(n)
    }

    fn virasoro(c: &DiffPoly) -> LambdaPoly {
        // (D + 2l)u + c l^3
        LambdaPoly::from_lambda_coeffs([(0, u(1)), (1, u(0).scale(&Q::from_int(2))), (3, c.clone())])
    }

    #[test]
    fn master_formula_examples() {
        let t = BracketTable::scalar(LambdaPoly::lambda_pow(1));
        let u2 = &u(0) * &u(0);
        // {u_l u^2} = 2u l
        assert_eq!(bracket(&u(0), &u2, &t, Formal::Lambda), LambdaPoly::monomial(1, 0, u(0).scale(&Q::from_int(2))));
        // {u^2_l u^2} = 4uu' + 4 l u^2
        let expect = LambdaPoly::from_lambda_coeffs([
            (0, (&u(0) * &u(1)).scale(&Q::from_int(4))),
            (1, u2.scale(&Q::from_int(4))),
        ]);
        assert_eq!(bracket(&u2, &u2, &t, Formal::Lambda), expect);
        let c = DiffPoly::symbol(Symbol::constant("c"));
        let vir = BracketTable::scalar(virasoro(&c));
        let expect = virasoro(&c).mul_poly(&u(0).scale(&Q::from_int(2)));
        assert_eq!(bracket(&u(0), &u2, &vir, Formal::Lambda), expect);
        // right Leibniz: {u^2_l u} = -{u_{-l-D} u^2}
        let right = bracket(&u2, &u(0), &t, Formal::Lambda);
        assert_eq!(right, bracket(&u(0), &u2, &t, Formal::Lambda).reflect().neg());
    }

    #[test]
    fn first_slot_examples() {
        let t = BracketTable::scalar(LambdaPoly::lambda_pow(1));
        let r = bracket_poly_first_slot(&LambdaPoly::lambda_pow(1), &LambdaPoly::from_poly(u(0)), &t);
        assert!(r.is_zero());
        let r = bracket_poly_first_slot(&LambdaPoly::from_poly(u(0)), &LambdaPoly::from_poly(u(0)), &t);
        assert_eq!(r, LambdaPoly::lambda_pow(1).add(&LambdaPoly::mu_pow(1)));
        let c = DiffPoly::symbol(Symbol::constant("c"));
        let vir = BracketTable::scalar(virasoro(&c));
        let lhs = bracket_poly_first_slot(&virasoro(&c), &LambdaPoly::from_poly(u(0)), &vir);
        let a = nested(&vir, 0, 0, 0);
        assert_eq!(lhs, a.sub(&a.swap()));
    }

    #[test]
    fn skew_and_jacobi() {
        let c = DiffPoly::symbol(Symbol::constant("c"));
        let vir = BracketTable::scalar(virasoro(&c));
        assert!(check_skew(&vir).passes());
        assert!(check_jacobi(&vir).passes());
        let bad = BracketTable::scalar(LambdaPoly::lambda_pow(2));
        assert!(!check_skew(&bad).passes());
        // l^3 + 2a u l + a u'
        let a = DiffPoly::symbol(Symbol::constant("a"));
        let p = LambdaPoly::from_lambda_coeffs([
            (3, DiffPoly::one()),
            (1, (&a * &u(0)).scale(&Q::from_int(2))),
            (0, &a * &u(1)),
        ]);
        let t = BracketTable::scalar(p);
        assert!(check_skew(&t).passes());
        assert!(check_jacobi(&t).passes());
        // l^3 + 2u^2 l + 2uu' is skew but not Jacobi
        let p = LambdaPoly::from_lambda_coeffs([
            (3, DiffPoly::one()),
            (1, (&u(0) * &u(0)).scale(&Q::from_int(2))),
            (0, (&u(0) * &u(1)).scale(&Q::from_int(2))),
        ]);
        let t = BracketTable::scalar(p);
        assert!(check_skew(&t).passes());
        assert!(!check_jacobi(&t).passes());
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(canonical_form(&LambdaPoly::lambda_pow(1)).unwrap(), vec![(1, DiffPoly::rational(1, 2))]);
        let c = DiffPoly::symbol(Symbol::constant("c"));
        let parts = canonical_form(&virasoro(&c)).unwrap();
        assert_eq!(parts, vec![(1, u(0)), (3, c.scale(&Q::new(1, 8)))]);
        assert_eq!(from_canonical(&parts), virasoro(&c));
        assert_eq!(canonical_form(&LambdaPoly::lambda_pow(2)), Err(Error::NotSkewForm { degree: 2 }));
        assert_eq!(order_and_level(&virasoro(&c)).unwrap(), (3, Some(1)));
        let p = LambdaPoly::from_lambda_coeffs([
            (3, DiffPoly::one()),
            (1, DiffPoly::x().scale(&Q::from_int(2))),
            (0, DiffPoly::one()),
        ]);
        assert_eq!(order_and_level(&p).unwrap(), (3, None));
    }

    #[test]
    fn level_bounds() {
        assert!(check_level_bounds(3, Some(1)));
        assert!(!check_level_bounds(3, Some(2)));
        assert!(!check_level_bounds(3, Some(6)));
        assert!(!check_level_bounds(5, Some(10)));
        assert!(check_level_bounds(5, Some(11)));
        assert!(!check_level_bounds(5, Some(2)));
        assert!(!check_level_bounds(5, Some(4)));
        assert!(check_level_bounds(5, Some(5)));
        assert!(!check_level_bounds(5, Some(1)));
    }

    #[test]
    fn display() {
        let c = DiffPoly::symbol(Symbol::constant("c"));
        assert_eq!(virasoro(&c).to_string(), "c*l^3 + 2*u*l + u'");
        let p = LambdaPoly::from_lambda_coeffs([(1, u(0) + u(1)), (0, -u(2))]);
        assert_eq!(p.to_string(), "(u' + u)*l - u''");
    }
}
