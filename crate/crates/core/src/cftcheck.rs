//! Lambda-brackets of CFT type: a Virasoro generator `L` with
//! `{L_l L} = (D + 2l) L + c l^3` and primary generators `W_j` with
//! `{L_l W_j} = (D + Delta_j l) W_j`.

use rayon::prelude::*;

use crate::diffalg::{DiffPoly, Monomial, Q};
use crate::error::{Error, Result};
use crate::lambda::{
    bracket, check_jacobi, check_skew, from_canonical, BracketTable, Formal, JacobiReport, LambdaPoly, SkewReport,
};

/// Generator 0 is `L`; generators `1..` are the primaries.
#[derive(Clone, Debug)]
pub struct CftStructure {
    table: BracketTable,
    c: DiffPoly,
    weights: Vec<Q>,
}

/// `{L_l L}` with central charge `c`.
pub fn virasoro_entry(c: &DiffPoly) -> LambdaPoly {
    from_canonical(&[(1, DiffPoly::jet(0, 0))]).add(&LambdaPoly::monomial(3, 0, c.clone()))
}

/// `(D + delta l) f`.
pub fn weight_entry(f: &DiffPoly, delta: &Q) -> LambdaPoly {
    LambdaPoly::from_lambda_coeffs([(0, f.d()), (1, f.scale(delta))])
}

impl CftStructure {
    /// The structure generated by `L` and primaries `(name, Delta)`.
    ///
    /// `brackets` lists `{W_i l W_j}` for `i <= j`, indexed among the
    /// primaries; the transposed entries follow by skewcommutativity and
    /// unlisted entries are zero.
    pub fn new(
        c: DiffPoly,
        primaries: &[(&str, Q)],
        brackets: &[((usize, usize), LambdaPoly)],
    ) -> Result<CftStructure> {
        if !c.is_constant() {
            return Err(Error::BadArgument("the central charge must be constant".into()));
        }
        let n = primaries.len() + 1;
        let mut weights = vec![Q::from_int(2)];
        weights.extend(primaries.iter().map(|(_, w)| w.clone()));
        let mut entries = vec![vec![LambdaPoly::zero(); n]; n];
        entries[0][0] = virasoro_entry(&c);
        for j in 1..n {
            let e = weight_entry(&DiffPoly::jet(j, 0), &weights[j]);
            entries[j][0] = e.reflect().neg();
            entries[0][j] = e;
        }
        for ((i, j), p) in brackets {
            let (i, j) = (i + 1, j + 1);
            if i > j || j >= n {
                return Err(Error::BadArgument(format!("bracket index ({}, {}) out of range", i - 1, j - 1)));
            }
            if !p.is_lambda_only() {
                return Err(Error::BadArgument("bracket entries must be polynomials in l".into()));
            }
            entries[i][j] = p.clone();
            if i != j {
                entries[j][i] = p.reflect().neg();
            }
        }
        let mut gens = vec!["L".to_string()];
        gens.extend(primaries.iter().map(|(s, _)| s.to_string()));
        let table = BracketTable::new(gens, entries)?.with_weights(weights.clone())?;
        Ok(CftStructure { table, c, weights })
    }

    /// Wraps an arbitrary table, checking the two CFT axioms.
    pub fn from_table(table: BracketTable, c: DiffPoly, weights: Vec<Q>) -> Result<CftStructure> {
        if weights.len() != table.len() || weights[0] != Q::from_int(2) {
            return Err(Error::BadArgument("one weight per generator, 2 for L".into()));
        }
        if table.entry(0, 0) != &virasoro_entry(&c) {
            return Err(Error::ConstraintViolated("{L_l L} is not the Virasoro bracket".into()));
        }
        for j in 1..table.len() {
            if table.entry(0, j) != &weight_entry(&DiffPoly::jet(j, 0), &weights[j]) {
                return Err(Error::ConstraintViolated(format!(
                    "{} is not primary of weight {}",
                    table.gens()[j],
                    weights[j]
                )));
            }
        }
        let table = table.with_weights(weights.clone())?;
        Ok(CftStructure { table, c, weights })
    }

    pub fn table(&self) -> &BracketTable {
        &self.table
    }

    pub fn central_charge(&self) -> &DiffPoly {
        &self.c
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    /// `{L_l P}`.
    pub fn l_bracket(&self, p: &DiffPoly) -> LambdaPoly {
        bracket(&DiffPoly::jet(0, 0), p, &self.table, Formal::Lambda)
    }

    /// `L_(1) P`, the coefficient of `l` in `{L_l P}`.
    pub fn l1(&self, p: &DiffPoly) -> DiffPoly {
        self.l_bracket(p).coeff_lambda(1)
    }

    /// Weight of a monomial: `Delta_i + n` per factor `u_i^(n)`, `-1` per
    /// factor `x`, `0` for parameter symbols.
    pub fn monomial_weight(&self, m: &Monomial) -> Q {
        let mut w = Q::from_int(-(m.x_exp() as i64));
        for (j, e) in m.jets() {
            let jw = &self.weights[j.gen as usize] + &Q::from_int(j.order as i64);
            w = &w + &(&jw * &Q::from_int(*e as i64));
        }
        w
    }

    /// The common weight of the terms of `p`, if there is one.
    pub fn homogeneous_weight(&self, p: &DiffPoly) -> Option<Q> {
        let mut ws = p.terms().iter().map(|(m, _)| self.monomial_weight(m));
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }
}

/// `Delta` with `L_(1) P = Delta P`.
pub fn conformal_weight(p: &DiffPoly, s: &CftStructure) -> Result<Q> {
    let Some((m, c)) = p.terms().first() else {
        return Err(Error::NotEigen("the zero element has every weight".into()));
    };
    let image = s.l1(p);
    let delta = &image.coeff(m) / c;
    let defect = image.sub(&p.scale(&delta));
    if defect.is_zero() {
        Ok(delta)
    } else {
        Err(Error::NotEigen(format!("L_(1) P - {delta} P = {}", defect.display_with(&s.table.names()))))
    }
}

/// `{L_l P} = (D + Delta l) P`; elements without a weight are not primary.
pub fn is_primary(p: &DiffPoly, s: &CftStructure) -> bool {
    match conformal_weight(p, s) {
        Ok(delta) => s.l_bracket(p) == weight_entry(p, &delta),
        Err(_) => false,
    }
}

/// Terms of `{f_l g}` whose weight differs from `Delta_f + Delta_g - k - 1`
/// at `l^k`, as `(k, offending part)`.
pub fn weight_defects(f: &DiffPoly, g: &DiffPoly, s: &CftStructure) -> Result<Vec<(u32, DiffPoly)>> {
    let wf = conformal_weight(f, s)?;
    let wg = conformal_weight(g, s)?;
    let b = bracket(f, g, &s.table, Formal::Lambda);
    let mut out = Vec::new();
    for (&(k, _), h) in b.iter() {
        let want = &(&wf + &wg) - &Q::from_int(k as i64 + 1);
        let bad = DiffPoly::from_terms(
            h.terms().iter().filter(|(m, _)| s.monomial_weight(m) != want).map(|(m, c)| (m.clone(), c.clone())),
        );
        if !bad.is_zero() {
            out.push((k, bad));
        }
    }
    Ok(out)
}

/// Residuals `Q_{j,k} - expected` of the relations between `{L_l P_j}` and
/// the coefficients `P_j` of `{W_l W} = sum (D + 2l)^j P_j`.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub residuals: Vec<(u32, u32, DiffPoly)>,
}

impl LemmaReport {
    pub fn passes(&self) -> bool {
        self.residuals.iter().all(|(_, _, r)| r.is_zero())
    }
}

/// With `{L_l P_j} = (D + (2 Delta - j - 1) l) P_j + sum_{k>=2} l^k Q_{j,k}`,
/// checks `Q_{j,2k} = C(j+2k, j) P_{j+2k}'` and
/// `Q_{j,2k+1} = (2 Delta C(j+2k, j) - C(j+2k+1, j)) P_{j+2k}`, and that
/// `l^0`, `l^1` carry no remainder. `Delta` is the weight of generator `w`.
pub fn check_lemma22(s: &CftStructure, w: usize, pj: &[(u32, DiffPoly)]) -> Result<LemmaReport> {
    if w == 0 || w >= s.weights.len() {
        return Err(Error::BadArgument(format!("generator {w} is not a primary")));
    }
    if pj.iter().any(|(j, _)| j % 2 == 0) {
        return Err(Error::BadArgument("only odd j occur".into()));
    }
    let delta = &s.weights[w];
    let top = pj.iter().map(|(j, _)| *j).max().unwrap_or(0);
    let p = |i: u32| pj.iter().filter(|(j, _)| *j == i).fold(DiffPoly::zero(), |a, (_, f)| a + f.clone());
    let two_delta = delta * &Q::from_int(2);
    let residuals: Vec<Vec<(u32, u32, DiffPoly)>> = (1..=top)
        .step_by(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&j| {
            let pjj = p(j);
            let rest = s.l_bracket(&pjj).sub(&weight_entry(&pjj, &(&two_delta - &Q::from_int(j as i64 + 1))));
            let kmax = rest.degree(Formal::Lambda).unwrap_or(0).max(top + 2);
            (0..=kmax)
                .map(|k| {
                    let expected = match k {
                        0 | 1 => DiffPoly::zero(),
                        _ if k % 2 == 0 => p(j + k).d().scale(&Q::binomial(j + k, j)),
                        _ => {
                            let a = &(&two_delta * &Q::binomial(j + k - 1, j)) - &Q::binomial(j + k, j);
                            p(j + k - 1).scale(&a)
                        }
                    };
                    (j, k, rest.coeff_lambda(k).sub(&expected))
                })
                .collect()
        })
        .collect();
    Ok(LemmaReport { residuals: residuals.into_iter().flatten().collect() })
}

#[derive(Clone, Debug)]
pub struct WAlgebraReport {
    pub skew: SkewReport,
    pub jacobi: JacobiReport,
}

impl WAlgebraReport {
    pub fn passes(&self) -> bool {
        self.skew.passes() && self.jacobi.passes()
    }
}

/// Skewcommutativity and Jacobi on every generator triple.
pub fn check_w_algebra(s: &CftStructure) -> WAlgebraReport {
    WAlgebraReport { skew: check_skew(&s.table), jacobi: check_jacobi(&s.table) }
}

/// The structure `L, W` with `{W_l W} = sum (D + 2l)^j P_j`.
pub fn with_one_primary(c: &DiffPoly, delta: Q, pj: &[(u32, DiffPoly)]) -> Result<CftStructure> {
    CftStructure::new(c.clone(), &[("W", delta)], &[((0, 0), from_canonical(pj))])
}

fn l(n: usize) -> DiffPoly {
    DiffPoly::jet(0, n)
}

fn w(n: usize) -> DiffPoly {
    DiffPoly::jet(1, n)
}

fn k(n: i64) -> DiffPoly {
    DiffPoly::int(n)
}

/// `P_j` of the weight-3 algebra (`W(sl_3)`):
/// `P_1 = 2^8 L^2 + 24 c L''`, `P_3 = 40 c L`, `P_5 = c^2`.
pub fn sl3_coefficients(c: &DiffPoly) -> Vec<(u32, DiffPoly)> {
    vec![(1, k(256) * l(0) * l(0) + k(24) * c * &l(2)), (3, k(40) * c * &l(0)), (5, c * c)]
}

/// `P_j` of the weight-4 algebra (`W(sp_4)`); `s` is a symbol with `s^2 = 2`.
pub fn sp4_coefficients(c: &DiffPoly, s: &DiffPoly) -> Vec<(u32, DiffPoly)> {
    let l0 = l(0);
    vec![
        (
            1,
            k(2048 * 9) * l0.pow(3).unwrap()
                + k(64) * c * &l(1) * &l(1)
                + k(128 * 29) * c * &l0 * &l(2)
                + k(48) * c * c * &l(4)
                + k(112) * s * &l0 * &w(0)
                + k(2) * s * c * &w(2),
        ),
        (3, k(3136) * c * &l0 * &l0 + k(224) * c * c * &l(2) + k(6) * s * c * &w(0)),
        (5, k(112) * c * c * &l0),
        (7, c.pow(3).unwrap()),
    ]
}

/// `{W_l W} = (D + 2l)(alpha L^3 + beta L W)` at central charge zero.
pub fn cubic_coefficients(alpha: &DiffPoly, beta: &DiffPoly) -> Vec<(u32, DiffPoly)> {
    vec![(1, alpha * &l(0).pow(3).unwrap() + beta * &l(0) * &w(0))]
}
