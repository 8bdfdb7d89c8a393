//! The bivariate polynomials `F_{n,j}` governing the top-degree part of the
//! Jacobi identity, and exact rank computations for the sets `S_{N,m}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::diffalg::Q;
use crate::error::{Error, Result};

/// Polynomial in `u, v` with rational coefficients, keyed by `(deg_u, deg_v)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BivarPoly {
    coeffs: BTreeMap<(u32, u32), Q>,
}

impl BivarPoly {
    pub fn zero() -> BivarPoly {
        BivarPoly::default()
    }

    pub fn term(a: u32, b: u32, c: Q) -> BivarPoly {
        let mut p = BivarPoly::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn constant(c: Q) -> BivarPoly {
        BivarPoly::term(0, 0, c)
    }

    pub fn u() -> BivarPoly {
        BivarPoly::term(1, 0, Q::one())
    }

    pub fn v() -> BivarPoly {
        BivarPoly::term(0, 1, Q::one())
    }

    /// `a u + b v`.
    pub fn linear(a: i64, b: i64) -> BivarPoly {
        BivarPoly::u().scale(&Q::from_int(a)).add(&BivarPoly::v().scale(&Q::from_int(b)))
    }

    fn add_term(&mut self, a: u32, b: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((a, b)).or_insert_with(Q::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.coeffs.remove(&(a, b));
        }
    }

    pub fn coeff(&self, a: u32, b: u32) -> Q {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &o.coeffs {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &BivarPoly) -> BivarPoly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a, b), k) in &self.coeffs {
            out.add_term(a, b, k * c);
        }
        out
    }

    pub fn mul(&self, o: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a, b), c) in &self.coeffs {
            for (&(x, y), d) in &o.coeffs {
                out.add_term(a + x, b + y, c * d);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> BivarPoly {
        (0..n).fold(BivarPoly::constant(Q::one()), |acc, _| acc.mul(self))
    }

    pub fn d_u(&self) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a, b), c) in &self.coeffs {
            if a > 0 {
                out.add_term(a - 1, b, c * &Q::from_int(a as i64));
            }
        }
        out
    }

    pub fn d_v(&self) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a, b), c) in &self.coeffs {
            if b > 0 {
                out.add_term(a, b - 1, c * &Q::from_int(b as i64));
            }
        }
        out
    }

    /// `p(v, u)`.
    pub fn swap(&self) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a, b), c) in &self.coeffs {
            out.add_term(b, a, c.clone());
        }
        out
    }

    pub fn eval(&self, u: &Q, v: &Q) -> Q {
        self.coeffs.iter().fold(Q::zero(), |acc, (&(a, b), c)| &acc + &(&(c * &u.pow(a as i32)) * &v.pow(b as i32)))
    }

    /// Homogeneous degree, assuming the polynomial is homogeneous.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(a, b)| a + b).max()
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&(a, b), c)) in self.coeffs.iter().rev().enumerate() {
            let mut vars = Vec::new();
            for (name, e) in [("u", a), ("v", b)] {
                match e {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    e => vars.push(format!("{name}^{e}")),
                }
            }
            let mag = c.abs();
            let body = if vars.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                vars.join("*")
            } else {
                format!("{mag}*{}", vars.join("*"))
            };
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

/// `F_{n,j}(u,v) = u^(n-j) (v-w)^j + v^(n-j) (w-u)^j + w^(n-j) (u-v)^j`,
/// `w = -(u+v)`, for `1 <= j <= n`.
pub fn f_poly(n: u32, j: u32) -> Result<BivarPoly> {
    if j < 1 || j > n {
        return Err(Error::BadArgument(format!("F_(n,j) needs 1 <= j <= n, got n={n}, j={j}")));
    }
    let u = BivarPoly::u();
    let v = BivarPoly::v();
    let w = BivarPoly::linear(-1, -1);
    let v_w = BivarPoly::linear(1, 2);
    let w_u = BivarPoly::linear(-2, -1);
    let u_v = BivarPoly::linear(1, -1);
    let k = n - j;
    Ok(u.pow(k).mul(&v_w.pow(j)).add(&v.pow(k).mul(&w_u.pow(j))).add(&w.pow(k).mul(&u_v.pow(j))))
}

/// `F_{n,j}`, or zero outside `1 <= j <= n`.
fn f_or_zero(n: i64, j: i64) -> BivarPoly {
    if j < 1 || j > n {
        BivarPoly::zero()
    } else {
        f_poly(n as u32, j as u32).expect("in range")
    }
}

/// Rank over the rationals of a family of polynomials, by fraction-free
/// elimination on their coefficient vectors.
pub fn rank(polys: &[BivarPoly]) -> usize {
    let mut keys: Vec<(u32, u32)> = polys.iter().flat_map(|p| p.coeffs.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let rows: Vec<Vec<BigInt>> = polys
        .iter()
        .map(|p| {
            let den = p.coeffs.values().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom()));
            keys.iter()
                .map(|k| {
                    let c = p.coeff(k.0, k.1);
                    c.numer() * (&den / c.denom())
                })
                .collect()
        })
        .collect();
    bareiss_rank(rows)
}

/// Rank of an integer matrix by Bareiss elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            for k in c + 1..cols {
                let v = (&m[r][c] * &m[i][k] - &m[i][c] * &m[r][k]) / &prev;
                m[i][k] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Rank and size of a polynomial family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub size: usize,
}

impl RankResult {
    pub fn independent(&self) -> bool {
        self.rank == self.size
    }
}

/// `S_{N,m} = {F_{N+m,j} : 1 <= j <= N, j odd}`; with `truncate` the index
/// runs over `j <= min(N, m)` only.
pub fn s_set(n: u32, m: u32, truncate: bool) -> Vec<BivarPoly> {
    let top = if truncate { n.min(m) } else { n };
    (1..=top).step_by(2).map(|j| f_poly(n + m, j).expect("j <= N + m")).collect()
}

pub fn rank_s(n: u32, m: u32, truncate: bool) -> Result<RankResult> {
    if n.is_multiple_of(2) || m < 1 {
        return Err(Error::BadArgument(format!("need odd N >= 1 and m >= 1, got N={n}, m={m}")));
    }
    let set = s_set(n, m, truncate);
    Ok(RankResult { rank: rank(&set), size: set.len() })
}

/// `(d_u^2 + d_v^2 - d_u d_v) F_{n,j} = (n-j)(n-j-1) F_{n-2,j} + 3j(j-1) F_{n-2,j-2}`.
pub fn lemma_laplacian(n: u32, j: u32) -> bool {
    let f = f_or_zero(n as i64, j as i64);
    let lhs = f.d_u().d_u().add(&f.d_v().d_v()).sub(&f.d_u().d_v());
    let (n, j) = (n as i64, j as i64);
    let rhs = f_or_zero(n - 2, j)
        .scale(&Q::from_int((n - j) * (n - j - 1)))
        .add(&f_or_zero(n - 2, j - 2).scale(&Q::from_int(3 * j * (j - 1))));
    lhs == rhs
}

/// `4 (u^2 + uv + v^2) F_{n,j} = 3 F_{n+2,j} + F_{n+2,j+2}`.
pub fn lemma_quadratic(n: u32, j: u32) -> bool {
    let f = f_or_zero(n as i64, j as i64);
    let lhs = quadratic_form().scale(&Q::from_int(4)).mul(&f);
    let (n, j) = (n as i64, j as i64);
    let rhs = f_or_zero(n + 2, j).scale(&Q::from_int(3)).add(&f_or_zero(n + 2, j + 2));
    lhs == rhs
}

/// Both identities for `F_{n,j}`.
pub fn verify_lemma12(n: u32, j: u32) -> bool {
    lemma_laplacian(n, j) && lemma_quadratic(n, j)
}

/// `u^2 + uv + v^2`.
pub fn quadratic_form() -> BivarPoly {
    BivarPoly::term(2, 0, Q::one()).add(&BivarPoly::term(1, 1, Q::one())).add(&BivarPoly::term(0, 2, Q::one()))
}

/// Remainder of `p` modulo `u^2 + uv + v^2`, as a polynomial of degree
/// at most one in `u`.
pub fn remainder_mod_quadratic(p: &BivarPoly) -> BivarPoly {
    let mut rest = p.clone();
    loop {
        let Some((&(a, b), c)) = rest.coeffs.iter().rev().find(|((a, _), _)| *a >= 2) else {
            return rest;
        };
        let c = c.clone();
        // u^a v^b = u^(a-2) v^b (u^2 + uv + v^2) - u^(a-1) v^(b+1) - u^(a-2) v^(b+2)
        rest.add_term(a, b, -c.clone());
        rest.add_term(a - 1, b + 1, -c.clone());
        rest.add_term(a - 2, b + 2, -c);
    }
}

/// Number of ways to write `d` as a sum of 2s and 3s.
pub fn partitions_2_3(d: u32) -> usize {
    (0..=d / 3).filter(|k| (d - 3 * k).is_multiple_of(2)).count()
}
