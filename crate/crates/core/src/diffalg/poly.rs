use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rustc_hash::FxHashMap;

use super::monomial::{Jet, Monomial};
use super::rational::Q;
use super::symbol::Symbol;
use crate::error::{Error, Result};

static TERM_LIMIT: AtomicUsize = AtomicUsize::new(usize::MAX);

/// Panic payload raised when a product exceeds the configured term bound.
#[derive(Debug, Clone, Copy)]
pub struct TermLimitExceeded {
    pub terms: usize,
    pub limit: usize,
}

/// Bound on the number of terms of any single product. Exceeding it panics
/// with a [`TermLimitExceeded`] payload, which drivers catch with
/// `catch_unwind`. The default is unbounded.
pub fn set_term_limit(limit: usize) {
    TERM_LIMIT.store(limit, AtomicOrdering::Relaxed);
}

pub fn term_limit() -> usize {
    TERM_LIMIT.load(AtomicOrdering::Relaxed)
}

/// Exact Laurent differential polynomial: a sorted list of monomials with
/// nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DiffPoly {
    terms: Vec<(Monomial, Q)>,
}

/// Which variable a partial derivative is taken in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Jet(Jet),
    Symbol(Symbol),
}

/// Variable names used when printing.
#[derive(Clone, Debug)]
pub struct Names {
    pub x: String,
    pub gens: Vec<String>,
}

impl Default for Names {
    fn default() -> Names {
        Names { x: "x".into(), gens: vec!["u".into()] }
    }
}

impl Names {
    pub fn new(x: &str, gens: &[&str]) -> Names {
        Names { x: x.into(), gens: gens.iter().map(|s| s.to_string()).collect() }
    }

    pub fn gen(&self, i: u16) -> String {
        self.gens.get(i as usize).cloned().unwrap_or_else(|| format!("u{i}"))
    }

    pub fn jet(&self, j: Jet) -> String {
        let g = self.gen(j.gen);
        match j.order {
            0 => g,
            1..=3 => format!("{g}{}", "'".repeat(j.order as usize)),
            n => format!("{g}^({n})"),
        }
    }
}

/// Accumulator keyed by monomial.
#[derive(Default)]
pub(crate) struct Acc {
    map: FxHashMap<Monomial, Q>,
}

impl Acc {
    pub(crate) fn with_capacity(n: usize) -> Acc {
        let mut map = FxHashMap::default();
        map.reserve(n);
        Acc { map }
    }

    pub(crate) fn add(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.map.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub(crate) fn finish(self) -> DiffPoly {
        let mut terms: Vec<(Monomial, Q)> = self.map.into_iter().collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        DiffPoly { terms }
    }
}

impl DiffPoly {
    pub fn zero() -> DiffPoly {
        DiffPoly { terms: Vec::new() }
    }

    pub fn one() -> DiffPoly {
        DiffPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> DiffPoly {
        DiffPoly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> DiffPoly {
        DiffPoly::constant(Q::from_int(n))
    }

    pub fn rational(n: i64, d: i64) -> DiffPoly {
        DiffPoly::constant(Q::new(n, d))
    }

    pub fn term(m: Monomial, c: Q) -> DiffPoly {
        if c.is_zero() {
            DiffPoly::zero()
        } else {
            DiffPoly { terms: vec![(m, c)] }
        }
    }

    pub fn x() -> DiffPoly {
        DiffPoly::term(Monomial::x_pow(1), Q::one())
    }

    /// `u_gen^(order)`.
    pub fn jet(gen: usize, order: usize) -> DiffPoly {
        DiffPoly::term(Monomial::jet(Jet::new(gen, order), 1), Q::one())
    }

    /// `u^(order)` for the single generator of a scalar theory.
    pub fn u(order: usize) -> DiffPoly {
        DiffPoly::jet(0, order)
    }

    pub fn symbol(s: Symbol) -> DiffPoly {
        let (m, f) = Monomial::symbol(s, 1);
        DiffPoly::term(m, f)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> DiffPoly {
        let mut acc = Acc::default();
        for (m, c) in terms {
            acc.add(m, c);
        }
        acc.finish()
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when the polynomial is a plain number.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_single_term(&self) -> Option<(&Monomial, &Q)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> DiffPoly {
        DiffPoly::from_terms(self.terms.iter().map(|(n, k)| {
            let (p, f) = n.mul(m);
            (p, &(k * c) * &f)
        }))
    }

    fn merge_with(&self, other: &DiffPoly, negate: bool) -> DiffPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sgn = |c: &Q| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0.clone(), sgn(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sgn(c))));
        DiffPoly { terms: out }
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        self.merge_with(other, false)
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        self.merge_with(other, true)
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        if self.is_zero() || other.is_zero() {
            return DiffPoly::zero();
        }
        if let Some(c) = self.as_rational() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_rational() {
            return self.scale(&c);
        }
        let mut acc = Acc::with_capacity(self.len().max(other.len()) * 2);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                let (p, f) = m.mul(n);
                let c = a * b;
                acc.add(p, if f.is_one() { c } else { &c * &f });
            }
        }
        let out = acc.finish();
        let limit = term_limit();
        if out.len() > limit {
            std::panic::panic_any(TermLimitExceeded { terms: out.len(), limit });
        }
        out
    }

    /// Integer power. Negative powers are defined for single-term values only.
    pub fn pow(&self, e: i32) -> Result<DiffPoly> {
        if e < 0 {
            let (m, c) = self.as_single_term().ok_or(Error::NotAUnit)?;
            let (p, f) = m.pow(e).ok_or(Error::NotAUnit)?;
            return Ok(DiffPoly::term(p, &c.pow(e) * &f));
        }
        let mut acc = DiffPoly::one();
        let mut base = self.clone();
        let mut k = e as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = DiffPoly::mul(&base, &base);
            }
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<DiffPoly> {
        if self.is_zero() {
            return Err(Error::NotAUnit);
        }
        self.pow(-1)
    }

    /// Division by a single-term divisor.
    pub fn div(&self, other: &DiffPoly) -> Result<DiffPoly> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Total derivative `D = d/dx + sum u^(n+1) d/du^(n)`, with symbols
    /// mapped along their declared derivative chains.
    pub fn d(&self) -> DiffPoly {
        let mut acc = Acc::with_capacity(self.len() * 3);
        for (m, c) in &self.terms {
            d_monomial(m, c, &mut acc);
        }
        acc.finish()
    }

    /// `D^k`.
    pub fn d_n(&self, k: usize) -> DiffPoly {
        let mut out = self.clone();
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = out.d();
        }
        out
    }

    pub fn partial(&self, v: Var) -> DiffPoly {
        match v {
            Var::X => DiffPoly::from_terms(self.terms.iter().filter(|(m, _)| m.x > 0).map(|(m, c)| {
                let mut n = m.clone();
                n.x -= 1;
                (n, c * &Q::from_int(m.x as i64))
            })),
            Var::Jet(j) => {
                let mut terms: Vec<(Monomial, Q)> = self
                    .terms
                    .iter()
                    .filter_map(|(m, c)| {
                        let e = m.jet_exp(j);
                        (e != 0).then(|| {
                            let mut n = m.clone();
                            n.set_jet_exp(j, e - 1);
                            (n, c * &Q::from_int(e as i64))
                        })
                    })
                    .collect();
                terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                DiffPoly { terms }
            }
            Var::Symbol(s) => DiffPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
                let e = m.param_exp(s);
                (e != 0).then(|| {
                    let mut n = m.clone();
                    n.set_param_exp(s, e - 1);
                    (n, c * &Q::from_int(e as i64))
                })
            })),
        }
    }

    pub fn partial_jet(&self, gen: usize, order: usize) -> DiffPoly {
        self.partial(Var::Jet(Jet::new(gen, order)))
    }

    /// Jets that occur in some monomial, sorted.
    pub fn jets(&self) -> Vec<Jet> {
        let mut v: Vec<Jet> = self.terms.iter().flat_map(|(m, _)| m.jets.iter().map(|(j, _)| *j)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.terms.iter().flat_map(|(m, _)| m.params.iter().map(|(s, _)| *s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Differential order; `None` stands for minus infinity (quasiconstants).
    pub fn diff_order(&self) -> Option<u32> {
        self.terms.iter().filter_map(|(m, _)| m.max_order(None)).max().map(u32::from)
    }

    pub fn diff_order_in(&self, gen: usize) -> Option<u32> {
        self.terms.iter().filter_map(|(m, _)| m.max_order(Some(gen as u16))).max().map(u32::from)
    }

    pub fn is_quasiconstant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_quasiconstant())
    }

    /// Quasiconstant with vanishing total derivative.
    pub fn is_constant(&self) -> bool {
        self.is_quasiconstant() && self.d().is_zero()
    }

    pub fn max_x_exp(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.x).max().unwrap_or(0)
    }

    pub fn min_param_exp(&self, s: Symbol) -> i32 {
        self.terms.iter().map(|(m, _)| m.param_exp(s)).min().unwrap_or(0)
    }

    /// Euler operator `sum_n (-D)^n d/du_gen^(n)`.
    pub fn variational(&self, gen: usize) -> DiffPoly {
        let Some(top) = self.diff_order_in(gen) else {
            return DiffPoly::zero();
        };
        // Horner: P_top, then P_{n} - D(acc)
        let mut acc = DiffPoly::zero();
        for n in (0..=top as usize).rev() {
            acc = self.partial_jet(gen, n).sub(&acc.d());
        }
        acc
    }

    /// Solves `D g = self`, with zero integration constants.
    pub fn integrate(&self) -> Result<DiffPoly> {
        super::integrate::integrate_total_derivative(self)
    }

    /// Homomorphic substitution of `x` and jet variables; symbols are kept.
    pub fn substitute(&self, sub: &Substitution) -> Result<DiffPoly> {
        let mut out = Acc::default();
        let mut cache: FxHashMap<(Option<Jet>, i32), DiffPoly> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut prod =
                DiffPoly::term(Monomial { x: 0, jets: Default::default(), params: m.params.clone() }, c.clone());
            if m.x > 0 {
                let img = sub.x.as_ref().ok_or_else(|| Error::BadArgument("substitution misses x".into()))?;
                let p = match cache.get(&(None, m.x as i32)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = img.pow(m.x as i32)?;
                        cache.insert((None, m.x as i32), p.clone());
                        p
                    }
                };
                prod = prod.mul(&p);
            }
            for &(j, e) in &m.jets {
                let img = sub
                    .jets
                    .iter()
                    .find(|(k, _)| *k == j)
                    .map(|(_, p)| p)
                    .ok_or_else(|| Error::BadArgument(format!("substitution misses jet {j:?}")))?;
                let p = match cache.get(&(Some(j), e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = img.pow(e)?;
                        cache.insert((Some(j), e), p.clone());
                        p
                    }
                };
                prod = prod.mul(&p);
            }
            for (n, k) in prod.terms {
                out.add(n, k);
            }
        }
        Ok(out.finish())
    }

    /// Replaces symbols by values (used for specialization at rational points).
    pub fn substitute_symbols(&self, values: &[(Symbol, DiffPoly)]) -> Result<DiffPoly> {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut prod = DiffPoly::one();
            for (s, v) in values {
                let e = m.param_exp(*s);
                if e != 0 {
                    rest.set_param_exp(*s, 0);
                    prod = prod.mul(&v.pow(e)?);
                }
            }
            out = out.add(&prod.mul_monomial(&rest, c));
        }
        Ok(out)
    }

    /// Map every coefficient and keep the monomials.
    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> DiffPoly {
        DiffPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn display_with<'a>(&'a self, names: &'a Names) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    /// Coefficient of the given monomial.
    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.binary_search_by(|(n, _)| n.cmp(m)).map_or(Q::zero(), |i| self.terms[i].1.clone())
    }

    /// Splits `self = sum_e v^e * coeff_e` by the exponent of a jet variable.
    pub fn collect_jet(&self, j: Jet) -> Vec<(i32, DiffPoly)> {
        let mut groups: std::collections::BTreeMap<i32, Vec<(Monomial, Q)>> = Default::default();
        for (m, c) in &self.terms {
            let e = m.jet_exp(j);
            let mut n = m.clone();
            n.set_jet_exp(j, 0);
            groups.entry(e).or_default().push((n, c.clone()));
        }
        groups.into_iter().map(|(e, t)| (e, DiffPoly::from_terms(t))).collect()
    }
}

fn d_monomial(m: &Monomial, c: &Q, acc: &mut Acc) {
    if m.x > 0 {
        let mut n = m.clone();
        n.x -= 1;
        acc.add(n, c * &Q::from_int(m.x as i64));
    }
    for &(j, e) in &m.jets {
        let mut n = m.clone();
        n.set_jet_exp(j, e - 1);
        let nj = j.next();
        let k = n.jet_exp(nj);
        n.set_jet_exp(nj, k + 1);
        acc.add(n, c * &Q::from_int(e as i64));
    }
    for &(s, e) in &m.params {
        if let Some(t) = s.d_image() {
            let mut n = m.clone();
            n.set_param_exp(s, e - 1);
            let (tm, f) = Monomial::symbol(t, 1);
            let (p, g) = n.mul(&tm);
            acc.add(p, &(c * &Q::from_int(e as i64)) * &(&f * &g));
        }
    }
}

/// Images of `x` and of jet variables for [`DiffPoly::substitute`].
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    pub x: Option<DiffPoly>,
    pub jets: Vec<(Jet, DiffPoly)>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn x(mut self, img: DiffPoly) -> Substitution {
        self.x = Some(img);
        self
    }

    pub fn jet(mut self, gen: usize, order: usize, img: DiffPoly) -> Substitution {
        self.jets.push((Jet::new(gen, order), img));
        self
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a DiffPoly,
    names: &'a Names,
}

fn pow_str(base: &str, e: i32) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

/// Formats one monomial with coefficient, without a leading sign.
pub(crate) fn fmt_term(m: &Monomial, c: &Q, names: &Names) -> String {
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    if m.x > 0 {
        num.push(pow_str(&names.x, m.x as i32));
    }
    for &(j, e) in &m.jets {
        let b = names.jet(j);
        if e > 0 {
            num.push(pow_str(&b, e));
        } else {
            den.push(pow_str(&b, -e));
        }
    }
    for &(s, e) in &m.params {
        let b = s.name();
        if e > 0 {
            num.push(pow_str(&b, e));
        } else {
            den.push(pow_str(&b, -e));
        }
    }
    let c = c.abs();
    let mut out = String::new();
    if num.is_empty() {
        out.push_str(&c.to_string());
    } else {
        if !c.is_one() {
            out.push_str(&c.to_string());
            out.push('*');
        }
        out.push_str(&num.join("*"));
    }
    for d in den {
        out.push('/');
        out.push_str(&d);
    }
    out
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let body = fmt_term(m, c, self.names);
            match (i, c.is_negative()) {
                (0, false) => f.write_str(&body)?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&Names::default()))
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a DiffPoly> for &'a DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: &DiffPoly) -> DiffPoly {
                DiffPoly::$m(self, rhs)
            }
        }
        impl $tr<DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                DiffPoly::$m(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: &DiffPoly) -> DiffPoly {
                DiffPoly::$m(&self, rhs)
            }
        }
        impl<'a> $tr<DiffPoly> for &'a DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                DiffPoly::$m(self, &rhs)
            }
        }
    };
}
poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly::neg(self)
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly::neg(&self)
    }
}

impl From<Q> for DiffPoly {
    fn from(c: Q) -> DiffPoly {
        DiffPoly::constant(c)
    }
}

impl From<i64> for DiffPoly {
    fn from(n: i64) -> DiffPoly {
        DiffPoly::int(n)
    }
}

impl From<Symbol> for DiffPoly {
    fn from(s: Symbol) -> DiffPoly {
        DiffPoly::symbol(s)
    }
}
