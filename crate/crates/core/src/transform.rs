//! Contact transformations `x = phi(y, v, v')`, `u = psi(y, v, v')`,
//! `D_x = (1/phi') D_y`, acting on functions, operators and brackets.
//!
//! Functions of the new variables reuse the ground ring with `x` read as `y`
//! and the generator read as `v`. Quotients are kept as unreduced fractions;
//! equality is decided by cross-multiplication.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::diffalg::{DiffPoly, Jet, Monomial, Names, Var, Q};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};

/// A quotient `num / den` of differential polynomials.
#[derive(Clone, Debug)]
pub struct RatDiffFn {
    num: DiffPoly,
    den: DiffPoly,
}

impl RatDiffFn {
    pub fn new(num: DiffPoly, den: DiffPoly) -> Result<RatDiffFn> {
        if den.is_zero() {
            return Err(Error::NotAUnit);
        }
        Ok(RatDiffFn { num, den }.normalized())
    }

    pub fn from_poly(p: DiffPoly) -> RatDiffFn {
        RatDiffFn { num: p, den: DiffPoly::one() }.normalized()
    }

    pub fn zero() -> RatDiffFn {
        RatDiffFn::from_poly(DiffPoly::zero())
    }

    pub fn one() -> RatDiffFn {
        RatDiffFn::from_poly(DiffPoly::one())
    }

    pub fn int(n: i64) -> RatDiffFn {
        RatDiffFn::from_poly(DiffPoly::int(n))
    }

    pub fn num(&self) -> &DiffPoly {
        &self.num
    }

    pub fn den(&self) -> &DiffPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Strips the monomial content of the denominator and its leading
    /// rational coefficient. A monomial denominator disappears entirely
    /// unless it carries `x`.
    fn normalized(mut self) -> RatDiffFn {
        if self.num.is_zero() {
            return RatDiffFn { num: DiffPoly::zero(), den: DiffPoly::one() };
        }
        let den_terms = self.den.terms();
        let min_x = den_terms.iter().chain(self.num.terms()).map(|(m, _)| m.x_exp()).min().unwrap_or(0);
        let mut content = Monomial::one();
        content.jets = common_exponents(den_terms.iter().map(|(m, _)| m.jets()));
        content.params = common_exponents(den_terms.iter().map(|(m, _)| m.params())).into_iter().collect();
        let lead = den_terms[0].1.clone();
        let (inv, f) = content.inverse().expect("no x in the content");
        let scale = &f / &lead;
        self.num = lower_x(&self.num.mul_monomial(&inv, &scale), min_x);
        self.den = lower_x(&self.den.mul_monomial(&inv, &scale), min_x);
        self
    }

    /// The polynomial value, when the denominator is a constant.
    pub fn as_poly(&self) -> Option<DiffPoly> {
        let c = self.den.as_rational()?;
        Some(self.num.scale(&c.recip()))
    }

    pub fn add(&self, o: &RatDiffFn) -> RatDiffFn {
        if self.den == o.den {
            return RatDiffFn { num: &self.num + &o.num, den: self.den.clone() }.normalized();
        }
        RatDiffFn { num: &self.num * &o.den + &o.num * &self.den, den: &self.den * &o.den }.normalized()
    }

    pub fn sub(&self, o: &RatDiffFn) -> RatDiffFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatDiffFn {
        RatDiffFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Q) -> RatDiffFn {
        RatDiffFn { num: self.num.scale(c), den: self.den.clone() }.normalized()
    }

    pub fn mul(&self, o: &RatDiffFn) -> RatDiffFn {
        RatDiffFn { num: &self.num * &o.num, den: &self.den * &o.den }.normalized()
    }

    pub fn mul_poly(&self, p: &DiffPoly) -> RatDiffFn {
        RatDiffFn { num: &self.num * p, den: self.den.clone() }.normalized()
    }

    pub fn inverse(&self) -> Result<RatDiffFn> {
        RatDiffFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatDiffFn) -> Result<RatDiffFn> {
        Ok(self.mul(&o.inverse()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatDiffFn> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = RatDiffFn::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Total derivative in the independent variable.
    pub fn d(&self) -> RatDiffFn {
        if self.den.as_rational().is_some() {
            return RatDiffFn { num: self.num.d(), den: self.den.clone() }.normalized();
        }
        let num = &self.num.d() * &self.den - &self.num * &self.den.d();
        RatDiffFn { num, den: &self.den * &self.den }.normalized()
    }

    pub fn partial(&self, v: Var) -> RatDiffFn {
        let num = &self.num.partial(v) * &self.den - &self.num * &self.den.partial(v);
        RatDiffFn { num, den: &self.den * &self.den }.normalized()
    }

    pub fn partial_jet(&self, order: usize) -> RatDiffFn {
        self.partial(Var::Jet(Jet::new(0, order)))
    }

    /// Largest derivative order in numerator or denominator.
    pub fn diff_order(&self) -> Option<u32> {
        self.num.diff_order().max(self.den.diff_order())
    }

    pub fn is_quasiconstant(&self) -> bool {
        self.diff_order().is_none()
    }

    pub fn display_with<'a>(&'a self, names: &'a Names) -> RatDisplay<'a> {
        RatDisplay { f: self, names }
    }
}

fn lower_x(p: &DiffPoly, k: u32) -> DiffPoly {
    if k == 0 {
        return p.clone();
    }
    DiffPoly::from_terms(p.terms().iter().map(|(m, c)| {
        let mut m = m.clone();
        m.x -= k;
        (m, c.clone())
    }))
}

/// Exponentwise minimum over all monomials, absent keys counting as 0.
fn common_exponents<'a, K: Ord + Copy + 'a>(
    mut lists: impl Iterator<Item = &'a [(K, i32)]>,
) -> SmallVec<[(K, i32); 4]> {
    let Some(first) = lists.next() else { return SmallVec::new() };
    let mut acc: BTreeMap<K, i32> = first.iter().copied().collect();
    for l in lists {
        let here: BTreeMap<K, i32> = l.iter().copied().collect();
        for k in here.keys() {
            acc.entry(*k).or_insert(0);
        }
        for (k, e) in acc.iter_mut() {
            *e = (*e).min(here.get(k).copied().unwrap_or(0));
        }
    }
    acc.into_iter().filter(|(_, e)| *e != 0).collect()
}

impl PartialEq for RatDiffFn {
    fn eq(&self, o: &RatDiffFn) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl From<DiffPoly> for RatDiffFn {
    fn from(p: DiffPoly) -> RatDiffFn {
        RatDiffFn::from_poly(p)
    }
}

pub struct RatDisplay<'a> {
    f: &'a RatDiffFn,
    names: &'a Names,
}

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.f.num.display_with(self.names).to_string();
        if self.f.den.as_rational().is_some_and(|c| c.is_one()) {
            return f.write_str(&num);
        }
        let den = self.f.den.display_with(self.names).to_string();
        if let Some(q) = self.f.num.as_rational().filter(|q| !q.is_integer()) {
            return write!(f, "{}/({}*{den})", q.numer(), q.denom());
        }
        let num = if self.f.num.len() > 1 { format!("({num})") } else { num };
        let den = if den.contains(['*', '/', ' ']) { format!("({den})") } else { den };
        write!(f, "{num}/{den}")
    }
}

impl fmt::Display for RatDiffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(&Names::new("y", &["v"])).fmt(f)
    }
}

fn require_constant_symbols(p: &DiffPoly, what: &str) -> Result<()> {
    if let Some(s) = p.symbols().into_iter().find(|s| !s.is_constant()) {
        return Err(Error::BadArgument(format!("{what}: symbol {s} is not constant")));
    }
    Ok(())
}

/// `x = phi(y, v, v')`, `u = psi(y, v, v')`.
#[derive(Clone, Debug)]
pub struct ContactMap {
    pub phi: RatDiffFn,
    pub psi: RatDiffFn,
}

impl ContactMap {
    pub fn new(phi: RatDiffFn, psi: RatDiffFn) -> Result<ContactMap> {
        for (f, name) in [(&phi, "phi"), (&psi, "psi")] {
            if f.diff_order().is_some_and(|o| o > 1) {
                return Err(Error::NotContact(format!("{name} depends on derivatives beyond v'")));
            }
            if f.num.jets().iter().chain(f.den.jets().iter()).any(|j| j.gen != 0) {
                return Err(Error::NotContact(format!("{name} involves more than one generator")));
            }
            require_constant_symbols(&f.num, name)?;
            require_constant_symbols(&f.den, name)?;
        }
        Ok(ContactMap { phi, psi })
    }

    /// The Legendre transformation `phi = v'`, `psi = y v' - v`.
    pub fn legendre() -> ContactMap {
        let v = DiffPoly::u;
        ContactMap { phi: v(1).into(), psi: (DiffPoly::x() * v(1) - v(0)).into() }
    }

    pub fn phi_prime(&self) -> RatDiffFn {
        self.phi.d()
    }

    /// The composite map: pull back along `self`, then along `then`.
    pub fn then(&self, then: &ContactMap) -> Result<ContactMap> {
        ContactMap::new(pullback_rational(&self.phi, then)?, pullback_rational(&self.psi, then)?)
    }
}

/// Checks the contact conditions and returns `rho`.
pub fn is_contact(m: &ContactMap) -> Result<RatDiffFn> {
    let dphi = m.phi_prime();
    let dpsi = m.psi.d();
    if dphi.is_zero() {
        return Err(Error::NotContact("phi' vanishes".into()));
    }
    let tangency = m.phi.partial_jet(1).mul(&dpsi).sub(&m.psi.partial_jet(1).mul(&dphi));
    if !tangency.is_zero() {
        return Err(Error::NotContact(format!("tangency condition fails: {tangency}")));
    }
    let rho_phi = m.psi.partial_jet(0).mul(&dphi).sub(&m.phi.partial_jet(0).mul(&dpsi));
    if rho_phi.is_zero() {
        return Err(Error::NotContact("rho phi' vanishes".into()));
    }
    rho_phi.div(&dphi)
}

/// Images of `u^(n)`, `n <= max`: `((1/phi') D_y)^n psi`.
fn jet_images(m: &ContactMap, max: usize) -> Result<Vec<RatDiffFn>> {
    let inv_dphi = m.phi_prime().inverse()?;
    let mut out = vec![m.psi.clone()];
    for n in 0..max {
        let next = inv_dphi.mul(&out[n].d());
        out.push(next);
    }
    Ok(out)
}

/// Substitutes `x -> phi`, `u^(n) -> ((1/phi') D_y)^n psi`.
pub fn pullback_function(f: &DiffPoly, m: &ContactMap) -> Result<RatDiffFn> {
    require_constant_symbols(f, "pulled-back function")?;
    if f.jets().iter().any(|j| j.gen != 0) {
        return Err(Error::BadArgument("contact maps act on a single generator".into()));
    }
    let max = f.diff_order().unwrap_or(0) as usize;
    let images = jet_images(m, max)?;
    let mut cache: BTreeMap<(usize, i32), RatDiffFn> = BTreeMap::new();
    let mut out = RatDiffFn::zero();
    for (mono, c) in f.terms() {
        let mut t = RatDiffFn::from_poly(DiffPoly::term(mono.params_only(), c.clone()));
        if mono.x_exp() > 0 {
            t = t.mul(&m.phi.pow(mono.x_exp() as i32)?);
        }
        for (j, e) in mono.jets() {
            let key = (j.order as usize, *e);
            if let Entry::Vacant(slot) = cache.entry(key) {
                slot.insert(images[key.0].pow(*e)?);
            }
            t = t.mul(&cache[&key]);
        }
        out = out.add(&t);
    }
    Ok(out)
}

pub fn pullback_rational(f: &RatDiffFn, m: &ContactMap) -> Result<RatDiffFn> {
    pullback_function(&f.num, m)?.div(&pullback_function(&f.den, m)?)
}

/// `S(phi) = phi'''/phi' - (3/2) phi''^2/phi'^2` for `phi` a function of `y`.
pub fn schwarzian(phi: &RatDiffFn) -> Result<RatDiffFn> {
    if !phi.is_quasiconstant() {
        return Err(Error::BadArgument("the Schwarzian takes a function of y only".into()));
    }
    let d1 = phi.d();
    let d2 = d1.d();
    let d3 = d2.d();
    let inv = d1.inverse()?;
    Ok(d3.mul(&inv).sub(&d2.mul(&d2).mul(&inv).mul(&inv).scale(&Q::new(3, 2))))
}

/// A differential operator `sum f_k D^k` with rational coefficients.
#[derive(Clone, Debug, Default)]
pub struct RatDiffOp {
    coeffs: BTreeMap<u32, RatDiffFn>,
}

impl RatDiffOp {
    pub fn zero() -> RatDiffOp {
        RatDiffOp::default()
    }

    pub fn term(k: u32, f: RatDiffFn) -> RatDiffOp {
        let mut op = RatDiffOp::zero();
        op.add_term(k, f);
        op
    }

    pub fn mul_by(f: RatDiffFn) -> RatDiffOp {
        RatDiffOp::term(0, f)
    }

    pub fn from_diffop(op: &DiffOp) -> RatDiffOp {
        let mut out = RatDiffOp::zero();
        for (&k, f) in op.iter() {
            out.add_term(k, f.clone().into());
        }
        out
    }

    fn add_term(&mut self, k: u32, f: RatDiffFn) {
        if f.is_zero() {
            return;
        }
        match self.coeffs.remove(&k) {
            Some(g) => {
                let s = g.add(&f);
                if !s.is_zero() {
                    self.coeffs.insert(k, s);
                }
            }
            None => {
                self.coeffs.insert(k, f);
            }
        }
    }

    pub fn coeff(&self, k: u32) -> RatDiffFn {
        self.coeffs.get(&k).cloned().unwrap_or_else(RatDiffFn::zero)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&u32, &RatDiffFn)> {
        self.coeffs.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &RatDiffOp) -> RatDiffOp {
        let mut out = self.clone();
        for (&k, f) in &o.coeffs {
            out.add_term(k, f.clone());
        }
        out
    }

    pub fn neg(&self) -> RatDiffOp {
        RatDiffOp { coeffs: self.coeffs.iter().map(|(&k, f)| (k, f.neg())).collect() }
    }

    pub fn scale(&self, c: &Q) -> RatDiffOp {
        let mut out = RatDiffOp::zero();
        for (&k, f) in &self.coeffs {
            out.add_term(k, f.scale(c));
        }
        out
    }

    pub fn left_mul(&self, g: &RatDiffFn) -> RatDiffOp {
        let mut out = RatDiffOp::zero();
        for (&k, f) in &self.coeffs {
            out.add_term(k, g.mul(f));
        }
        out
    }

    /// `(sum a_i D^i) o (sum b_j D^j)` via `D^i b = sum C(i,k) D^k(b) D^(i-k)`.
    pub fn compose(&self, o: &RatDiffOp) -> RatDiffOp {
        let top = self.degree().unwrap_or(0) as usize;
        let mut out = RatDiffOp::zero();
        for (&j, b) in &o.coeffs {
            let mut ders = vec![b.clone()];
            for k in 0..top {
                let next = ders[k].d();
                ders.push(next);
            }
            for (&i, a) in &self.coeffs {
                for (k, dk) in ders.iter().enumerate().take(i as usize + 1) {
                    let c = Q::binomial(i, k as u32);
                    out.add_term(i - k as u32 + j, a.mul(dk).scale(&c));
                }
            }
        }
        out
    }

    /// `sum_k (-D)^k o a_k`.
    pub fn adjoint(&self) -> RatDiffOp {
        let mut out = RatDiffOp::zero();
        for (&k, a) in &self.coeffs {
            let mut der = a.clone();
            for i in 0..=k {
                let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
                out.add_term(k - i, der.scale(&(&sign * &Q::binomial(k, i))));
                der = der.d();
            }
        }
        out
    }

    pub fn is_skew_adjoint(&self) -> bool {
        self.add(&self.adjoint()).is_zero()
    }

    /// Coefficientwise equality of rational functions.
    pub fn equals(&self, o: &RatDiffOp) -> bool {
        self.add(&o.neg()).is_zero()
    }

    /// The operator with polynomial coefficients, if every denominator is a
    /// constant.
    pub fn to_diffop(&self) -> Option<DiffOp> {
        let cs: Option<Vec<(u32, DiffPoly)>> = self.coeffs.iter().map(|(&k, f)| f.as_poly().map(|p| (k, p))).collect();
        cs.map(DiffOp::from_coeffs)
    }

    pub fn display_with<'a>(&'a self, names: &'a Names) -> RatOpDisplay<'a> {
        RatOpDisplay { op: self, names }
    }
}

pub struct RatOpDisplay<'a> {
    op: &'a RatDiffOp,
    names: &'a Names,
}

impl fmt::Display for RatOpDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_zero() {
            return f.write_str("0");
        }
        for (i, (&k, c)) in self.op.coeffs.iter().rev().enumerate() {
            let d = match k {
                0 => String::new(),
                1 => "D".to_string(),
                k => format!("D^{k}"),
            };
            let plain = c.num.len() == 1;
            let neg = plain && c.num.terms()[0].1.is_negative();
            let shown = if neg { c.neg() } else { c.clone() }.display_with(self.names).to_string();
            let term = match (shown == "1", d.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => d,
                (false, true) if plain => shown,
                (false, true) => format!("({shown})"),
                (false, false) if plain => format!("{shown}*{d}"),
                (false, false) => format!("({shown})*{d}"),
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

impl fmt::Display for RatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(&Names::new("y", &["v"])).fmt(f)
    }
}

/// `H_new = (1/rho) H~ o 1/(rho phi')`, where `H~` has its coefficients
/// pulled back and `D_x` replaced by `(1/phi') D_y`.
pub fn transform_operator(h: &DiffOp, m: &ContactMap) -> Result<RatDiffOp> {
    let rho = is_contact(m)?;
    let dphi = m.phi_prime();
    let step = RatDiffOp::term(1, dphi.inverse()?);
    let mut power = RatDiffOp::mul_by(RatDiffFn::one());
    let mut tilde = RatDiffOp::zero();
    let top = h.degree().unwrap_or(0);
    for k in 0..=top {
        let c = h.coeff(k);
        if !c.is_zero() {
            tilde = tilde.add(&power.left_mul(&pullback_function(&c, m)?));
        }
        if k < top {
            power = step.compose(&power);
        }
    }
    let left = RatDiffOp::mul_by(rho.inverse()?);
    let right = RatDiffOp::mul_by(rho.mul(&dphi).inverse()?);
    Ok(left.compose(&tilde).compose(&right))
}

/// Canonical form `sum (D + 2l)^j f_j` of the bracket `sum f_k l^k` of an
/// operator with rational coefficients, ascending in `j`.
pub fn rat_canonical_form(op: &RatDiffOp) -> Result<Vec<(u32, RatDiffFn)>> {
    let mut rest = op.clone();
    let mut parts = Vec::new();
    while let Some(k) = rest.degree() {
        if k % 2 == 0 {
            return Err(Error::NotSkewForm { degree: k });
        }
        let f = rest.coeff(k).scale(&Q::from_int(2).pow(-(k as i32)));
        let mut der = f.clone();
        let mut shift = RatDiffOp::zero();
        for i in 0..=k {
            let c = &Q::binomial(k, i) * &Q::from_int(2).pow((k - i) as i32);
            shift.add_term(k - i, der.scale(&c));
            der = der.d();
        }
        rest = rest.add(&shift.neg());
        parts.push((k, f));
    }
    parts.reverse();
    Ok(parts)
}

/// `N (N^2 - 1) / 3`, the Schwarzian coefficient in the law for `g_(N-2)`.
pub fn schwarzian_coefficient(n: u32) -> Q {
    let n = n as i64;
    Q::new(n * (n * n - 1), 3)
}

/// Checks the shape `phi = phi(y)`, `psi = phi'^(-(N+1)/2) v + f(y)`.
pub fn check_leading_preserving_shape(n: u32, m: &ContactMap) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::BadArgument(format!("order must be odd, got {n}")));
    }
    if !m.phi.is_quasiconstant() {
        return Err(Error::ShapeViolation("phi must depend on y only".into()));
    }
    let slope = m.phi_prime().pow(-(n as i32 + 1) / 2)?;
    let dv = m.psi.partial_jet(0);
    if dv != slope || !m.psi.partial_jet(1).is_zero() {
        return Err(Error::ShapeViolation(format!("psi must be phi'^(-{}) v + f(y)", n.div_ceil(2))));
    }
    Ok(())
}

/// `g_N = f~_N / (rho^2 phi'^(N+1))` and
/// `g_(N-2) = phi'^2 f~_(N-2) + N (N^2 - 1)/3 S(phi)` for maps of the
/// leading-preserving shape.
pub fn transform_bracket_coeffs(
    n: u32,
    f_n: &DiffPoly,
    f_n2: &DiffPoly,
    m: &ContactMap,
) -> Result<(RatDiffFn, RatDiffFn)> {
    check_leading_preserving_shape(n, m)?;
    let rho = is_contact(m)?;
    let dphi = m.phi_prime();
    let g_n = pullback_function(f_n, m)?.div(&rho.mul(&rho).mul(&dphi.pow(n as i32 + 1)?))?;
    let s = schwarzian(&m.phi)?;
    let g_n2 = dphi.mul(&dphi).mul(&pullback_function(f_n2, m)?).add(&s.scale(&schwarzian_coefficient(n)));
    Ok((g_n, g_n2))
}

/// The two top canonical coefficients `(g_N, g_(N-2))` of the transformed
/// operator, computed directly.
pub fn transformed_top_coeffs(h: &DiffOp, m: &ContactMap) -> Result<(RatDiffFn, RatDiffFn)> {
    let t = transform_operator(h, m)?;
    let parts = rat_canonical_form(&t)?;
    let n = t.degree().ok_or_else(|| Error::BadArgument("zero operator".into()))?;
    let get = |j: u32| parts.iter().find(|(k, _)| *k == j).map(|(_, f)| f.clone()).unwrap_or_else(RatDiffFn::zero);
    Ok((get(n), if n >= 2 { get(n - 2) } else { RatDiffFn::zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize) -> DiffPoly {
        DiffPoly::u(n)
    }

    fn y() -> DiffPoly {
        DiffPoly::x()
    }

    fn rat(p: DiffPoly) -> RatDiffFn {
        p.into()
    }

    #[test]
    fn fractions_compare_by_cross_multiplication() {
        let a = RatDiffFn::new(y() * v(0), y() * y()).unwrap();
        let b = RatDiffFn::new(v(0).scale(&Q::from_int(3)), y().scale(&Q::from_int(3))).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.den(), &y());
        let c = RatDiffFn::new(v(0), v(1) * v(1)).unwrap();
        assert_eq!(c.as_poly(), Some(v(0) * v(1).pow(-2).unwrap()));
        assert!(RatDiffFn::new(v(0), DiffPoly::zero()).is_err());
        let s = RatDiffFn::new(DiffPoly::one(), y() + DiffPoly::one()).unwrap();
        assert_eq!(s.d(), RatDiffFn::new(DiffPoly::int(-1), (y() + DiffPoly::one()).pow(2).unwrap()).unwrap());
    }

    #[test]
    fn contact_conditions() {
        assert_eq!(is_contact(&ContactMap::legendre()).unwrap(), RatDiffFn::int(-1));
        let swap = ContactMap::new(rat(v(0)), rat(-y())).unwrap();
        assert!(is_contact(&swap).is_ok());
        let square = ContactMap::new(rat(y()), rat((v(0) * v(0)).scale(&Q::new(1, 2)))).unwrap();
        assert_eq!(is_contact(&square).unwrap(), rat(v(0)));
        let bad = ContactMap::new(rat(v(1)), rat(v(0))).unwrap();
        assert!(matches!(is_contact(&bad), Err(Error::NotContact(_))));
        assert!(matches!(ContactMap::new(rat(v(2)), rat(v(0))), Err(Error::NotContact(_))));
    }

    #[test]
    fn pullback_examples() {
        assert_eq!(pullback_function(&v(1), &ContactMap::legendre()).unwrap(), rat(y()));
        let square = ContactMap::new(rat(y()), rat((v(0) * v(0)).scale(&Q::new(1, 2)))).unwrap();
        assert_eq!(pullback_function(&v(0), &square).unwrap(), rat((v(0) * v(0)).scale(&Q::new(1, 2))));
        assert_eq!(pullback_function(&DiffPoly::x(), &ContactMap::legendre()).unwrap(), rat(v(1)));
    }

    #[test]
    fn schwarzian_examples() {
        assert!(schwarzian(&rat(y())).unwrap().is_zero());
        let inv = RatDiffFn::new(DiffPoly::one(), y()).unwrap();
        assert!(schwarzian(&inv).unwrap().is_zero());
        let expected = RatDiffFn::new(DiffPoly::int(-3), (y() * y()).scale(&Q::from_int(2))).unwrap();
        assert_eq!(schwarzian(&rat(y() * y())).unwrap(), expected);
    }

    #[test]
    fn first_order_legendre() {
        let t = transform_operator(&DiffOp::d_pow(1), &ContactMap::legendre()).unwrap();
        let w = v(2).inverse().unwrap();
        let expected = DiffOp::product(&[DiffOp::mul_by(w.clone()), DiffOp::d_pow(1), DiffOp::mul_by(w)]);
        assert_eq!(t.to_diffop().unwrap(), expected);
    }

    #[test]
    fn rational_operator_algebra() {
        let w = RatDiffFn::new(DiffPoly::one(), y() + DiffPoly::one()).unwrap();
        let op = RatDiffOp::term(1, w.clone()).compose(&RatDiffOp::mul_by(w.clone()));
        // w D o w = w^2 D + w w'
        let expected = RatDiffOp::term(1, w.mul(&w)).add(&RatDiffOp::mul_by(w.mul(&w.d())));
        assert!(op.equals(&expected));
        let skew = op.add(&op.adjoint().neg());
        assert!(skew.is_skew_adjoint());
        let parts = rat_canonical_form(&RatDiffOp::from_diffop(&DiffOp::d_pow(3).scale(&Q::from_int(8)))).unwrap();
        assert_eq!(parts, vec![(3, RatDiffFn::one())]);
    }
}
