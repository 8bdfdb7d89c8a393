use std::cmp::Ordering;

use smallvec::SmallVec;

use super::rational::Q;
use super::symbol::Symbol;

/// The jet variable `u_gen^(order)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Jet {
    pub gen: u16,
    pub order: u16,
}

impl Jet {
    pub fn new(gen: usize, order: usize) -> Jet {
        Jet { gen: gen as u16, order: order as u16 }
    }

    pub fn next(self) -> Jet {
        Jet { gen: self.gen, order: self.order + 1 }
    }
}

/// `x^a * prod u_i^(n)^e * prod s^f` with nonzero exponents only.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    pub(crate) x: u32,
    pub(crate) jets: SmallVec<[(Jet, i32); 4]>,
    pub(crate) params: SmallVec<[(Symbol, i32); 2]>,
}

fn merge<K: Ord + Copy>(a: &[(K, i32)], b: &[(K, i32)]) -> SmallVec<[(K, i32); 4]> {
    let mut out = SmallVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn x_pow(a: u32) -> Monomial {
        Monomial { x: a, ..Monomial::default() }
    }

    pub fn jet(j: Jet, e: i32) -> Monomial {
        let mut m = Monomial::default();
        if e != 0 {
            m.jets.push((j, e));
        }
        m
    }

    /// `s^e`, with the square reduction applied when `s` has one.
    pub fn symbol(s: Symbol, e: i32) -> (Monomial, Q) {
        let mut m = Monomial::default();
        if e != 0 {
            m.params.push((s, e));
        }
        let f = m.reduce_squares();
        (m, f)
    }

    pub fn x_exp(&self) -> u32 {
        self.x
    }

    pub fn jets(&self) -> &[(Jet, i32)] {
        &self.jets
    }

    pub fn params(&self) -> &[(Symbol, i32)] {
        &self.params
    }

    pub fn is_one(&self) -> bool {
        self.x == 0 && self.jets.is_empty() && self.params.is_empty()
    }

    pub fn jet_exp(&self, j: Jet) -> i32 {
        self.jets.iter().find(|(k, _)| *k == j).map_or(0, |(_, e)| *e)
    }

    pub fn param_exp(&self, s: Symbol) -> i32 {
        self.params.iter().find(|(k, _)| *k == s).map_or(0, |(_, e)| *e)
    }

    /// Sum of jet exponents (Laurent, may be negative).
    pub fn jet_degree(&self) -> i64 {
        self.jets.iter().map(|(_, e)| *e as i64).sum()
    }

    /// Maximal derivative order among jets of generator `gen`.
    pub fn max_order(&self, gen: Option<u16>) -> Option<u16> {
        self.jets.iter().filter(|(j, _)| gen.is_none_or(|g| j.gen == g)).map(|(j, _)| j.order).max()
    }

    pub fn is_quasiconstant(&self) -> bool {
        self.jets.is_empty()
    }

    /// Product, returning the rational factor produced by square reductions.
    pub fn mul(&self, other: &Monomial) -> (Monomial, Q) {
        let jets = if other.jets.is_empty() {
            self.jets.clone()
        } else if self.jets.is_empty() {
            other.jets.clone()
        } else {
            merge(&self.jets, &other.jets)
        };
        let params: SmallVec<[(Symbol, i32); 2]> = if other.params.is_empty() {
            self.params.clone()
        } else if self.params.is_empty() {
            other.params.clone()
        } else {
            merge(&self.params, &other.params).into_iter().collect()
        };
        let mut m = Monomial { x: self.x + other.x, jets, params };
        let f = if self.params.is_empty() || other.params.is_empty() { Q::one() } else { m.reduce_squares() };
        (m, f)
    }

    /// Reciprocal. Fails when `x` occurs, since `x` carries no negative powers.
    pub fn inverse(&self) -> Option<(Monomial, Q)> {
        if self.x != 0 {
            return None;
        }
        let mut m = Monomial {
            x: 0,
            jets: self.jets.iter().map(|&(j, e)| (j, -e)).collect(),
            params: self.params.iter().map(|&(s, e)| (s, -e)).collect(),
        };
        let f = m.reduce_squares();
        Some((m, f))
    }

    /// Integer power; negative powers require `x` to be absent.
    pub fn pow(&self, e: i32) -> Option<(Monomial, Q)> {
        if e < 0 && self.x != 0 {
            return None;
        }
        if e == 0 {
            return Some((Monomial::one(), Q::one()));
        }
        let mut m = Monomial {
            x: if e > 0 { self.x * e as u32 } else { 0 },
            jets: self.jets.iter().map(|&(j, k)| (j, k * e)).collect(),
            params: self.params.iter().map(|&(s, k)| (s, k * e)).collect(),
        };
        let f = m.reduce_squares();
        Some((m, f))
    }

    pub(crate) fn set_jet_exp(&mut self, j: Jet, e: i32) {
        match self.jets.binary_search_by(|(k, _)| k.cmp(&j)) {
            Ok(i) => {
                if e == 0 {
                    self.jets.remove(i);
                } else {
                    self.jets[i].1 = e;
                }
            }
            Err(i) => {
                if e != 0 {
                    self.jets.insert(i, (j, e));
                }
            }
        }
    }

    pub(crate) fn set_param_exp(&mut self, s: Symbol, e: i32) {
        match self.params.binary_search_by(|(k, _)| k.cmp(&s)) {
            Ok(i) => {
                if e == 0 {
                    self.params.remove(i);
                } else {
                    self.params[i].1 = e;
                }
            }
            Err(i) => {
                if e != 0 {
                    self.params.insert(i, (s, e));
                }
            }
        }
    }

    /// Rewrites `s^e` to `r^(e div 2) s^(e mod 2)` for square-root symbols.
    fn reduce_squares(&mut self) -> Q {
        let mut factor = Q::one();
        let mut i = 0;
        while i < self.params.len() {
            let (s, e) = self.params[i];
            if e != 1 {
                if let Some(r) = s.square() {
                    let half = e.div_euclid(2);
                    factor = &factor * &r.pow(half);
                    if e.rem_euclid(2) == 0 {
                        self.params.remove(i);
                        continue;
                    }
                    self.params[i].1 = 1;
                }
            }
            i += 1;
        }
        factor
    }

    /// Part of the monomial free of jet variables.
    pub fn quasiconstant_part(&self) -> Monomial {
        Monomial { x: self.x, jets: SmallVec::new(), params: self.params.clone() }
    }

    /// Part of the monomial free of parameter symbols.
    pub fn without_params(&self) -> Monomial {
        Monomial { x: self.x, jets: self.jets.clone(), params: SmallVec::new() }
    }

    pub fn params_only(&self) -> Monomial {
        Monomial { x: 0, jets: SmallVec::new(), params: self.params.clone() }
    }

    pub fn without_x(&self) -> Monomial {
        Monomial { x: 0, jets: self.jets.clone(), params: self.params.clone() }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic: total jet degree, then `x`, then jets, then symbols.
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.jet_degree()
            .cmp(&other.jet_degree())
            .then(self.x.cmp(&other.x))
            .then_with(|| self.jets.as_slice().cmp(other.jets.as_slice()))
            .then_with(|| self.params.as_slice().cmp(other.params.as_slice()))
    }
}
