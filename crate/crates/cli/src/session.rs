//! Declared names and evaluation of parsed expressions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use pva_core::lambda::LambdaPoly;
use pva_core::transform::RatDiffFn;
use pva_core::{DiffOp, DiffPoly, Names, Symbol, Q};

use crate::expr::{parse, Ast, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SessionError {
    Syntax(SyntaxError),
    Eval { pos: usize, msg: String },
    Declaration(String),
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SessionError::Syntax(e) => write!(f, "syntax error {e}"),
            SessionError::Eval { pos, msg } => write!(f, "at column {}: {msg}", pos + 1),
            SessionError::Declaration(m) => write!(f, "bad declaration: {m}"),
        }
    }
}

impl std::error::Error for SessionError {}

impl From<SyntaxError> for SessionError {
    fn from(e: SyntaxError) -> SessionError {
        SessionError::Syntax(e)
    }
}

fn eval_err<T>(pos: usize, msg: impl Into<String>) -> Result<T, SessionError> {
    Err(SessionError::Eval { pos, msg: msg.into() })
}

/// What an expression is read as.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Context {
    /// A differential function; `D` and `l` are not allowed.
    Function,
    /// A differential operator; `*` composes and `D` is the derivation.
    Operator,
    /// A lambda-bracket value; `D` acts to the right and `l` is the formal
    /// variable. The value is the operator applied to `1`.
    Bracket,
}

/// One `--symbol` declaration: `name[:d=name2][:sq=rational]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: String,
    pub d: Option<String>,
    pub sq: Option<Q>,
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl std::str::FromStr for SymbolDecl {
    type Err = SessionError;

    fn from_str(s: &str) -> Result<SymbolDecl, SessionError> {
        let bad = |m: &str| SessionError::Declaration(format!("{s}: {m}"));
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default().trim().to_string();
        if !is_ident(&name) {
            return Err(bad("symbol names are identifiers"));
        }
        let mut decl = SymbolDecl { name, d: None, sq: None };
        for part in parts {
            match part.trim().split_once('=') {
                Some(("d", v)) if v.trim() == "0" => {}
                Some(("d", v)) if is_ident(v.trim()) => decl.d = Some(v.trim().to_string()),
                Some(("sq", v)) => {
                    let q: Q = v.trim().parse().map_err(|_| bad("sq takes a rational"))?;
                    if q.is_zero() {
                        return Err(bad("sq must be nonzero"));
                    }
                    decl.sq = Some(q);
                }
                _ => return Err(bad("expected d=name or sq=rational")),
            }
        }
        if decl.d.is_some() && decl.sq.is_some() {
            return Err(bad("a square-root symbol is constant"));
        }
        Ok(decl)
    }
}

/// Declared generators, parameter symbols and named objects.
#[derive(Clone, Debug)]
pub struct Session {
    names: Names,
    symbols: HashMap<String, Symbol>,
    objects: HashMap<String, DiffPoly>,
}

impl Default for Session {
    fn default() -> Session {
        Session::new("x", &["u"])
    }
}

/// Intermediate value: a function, or `sum_k l^k A_k` with operators `A_k`.
#[derive(Clone, Debug)]
enum Val {
    Fun(DiffPoly),
    Op(BTreeMap<u32, DiffOp>),
}

impl Val {
    fn into_op(self) -> BTreeMap<u32, DiffOp> {
        match self {
            Val::Fun(f) => BTreeMap::from([(0, DiffOp::mul_by(f))]),
            Val::Op(m) => m,
        }
    }
}

fn op_add(mut a: BTreeMap<u32, DiffOp>, b: BTreeMap<u32, DiffOp>) -> BTreeMap<u32, DiffOp> {
    for (k, op) in b {
        let e = a.entry(k).or_insert_with(DiffOp::zero);
        *e = e.add(&op);
    }
    a.retain(|_, op| !op.is_zero());
    a
}

fn op_mul(a: &BTreeMap<u32, DiffOp>, b: &BTreeMap<u32, DiffOp>) -> BTreeMap<u32, DiffOp> {
    let mut out = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            out = op_add(out, BTreeMap::from([(i + j, x.compose(y))]));
        }
    }
    out
}

impl Session {
    pub fn new(x: &str, gens: &[&str]) -> Session {
        Session { names: Names::new(x, gens), symbols: HashMap::new(), objects: HashMap::new() }
    }

    pub fn names(&self) -> &Names {
        &self.names
    }

    /// The same declarations printed and read with other variable names.
    pub fn renamed(&self, x: &str, gens: &[&str]) -> Session {
        Session { names: Names::new(x, gens), ..self.clone() }
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.symbols.get(name).copied()
    }

    fn taken(&self, name: &str) -> bool {
        name == self.names.x
            || name == "D"
            || name == "l"
            || self.names.gens.iter().any(|g| g == name)
            || self.symbols.contains_key(name)
            || self.objects.contains_key(name)
    }

    /// Registers symbols; chains may be listed in any order.
    pub fn declare_symbols(&mut self, decls: &[SymbolDecl]) -> Result<(), SessionError> {
        let mut pending: Vec<&SymbolDecl> = decls.iter().collect();
        for (i, d) in decls.iter().enumerate() {
            if self.taken(&d.name) || decls[..i].iter().any(|e| e.name == d.name) {
                return Err(SessionError::Declaration(format!("{} is already declared", d.name)));
            }
        }
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for d in pending {
                let sym = match (&d.d, &d.sq) {
                    (None, None) => Symbol::constant(&d.name),
                    (None, Some(q)) => Symbol::square_root(&d.name, q.clone()),
                    (Some(t), _) => match self.symbols.get(t) {
                        Some(&img) => Symbol::with_derivative(&d.name, img),
                        None if decls.iter().any(|e| &e.name == t) => {
                            rest.push(d);
                            continue;
                        }
                        None => return Err(SessionError::Declaration(format!("{}: d={t} is not declared", d.name))),
                    },
                };
                self.symbols.insert(d.name.clone(), sym);
            }
            if rest.len() == before {
                return Err(SessionError::Declaration("derivative chains must end at a constant".into()));
            }
            pending = rest;
        }
        Ok(())
    }

    /// Binds `name` to a differential function.
    pub fn define(&mut self, name: &str, value: DiffPoly) -> Result<(), SessionError> {
        if !is_ident(name) || self.taken(name) {
            return Err(SessionError::Declaration(format!("cannot define {name}")));
        }
        self.objects.insert(name.to_string(), value);
        Ok(())
    }

    fn ident(&self, name: &str, pos: usize, ctx: Context) -> Result<Val, SessionError> {
        if name == self.names.x {
            return Ok(Val::Fun(DiffPoly::x()));
        }
        if let Some(i) = self.names.gens.iter().position(|g| g == name) {
            return Ok(Val::Fun(DiffPoly::jet(i, 0)));
        }
        if let Some(&s) = self.symbols.get(name) {
            return Ok(Val::Fun(DiffPoly::symbol(s)));
        }
        if let Some(f) = self.objects.get(name) {
            return Ok(Val::Fun(f.clone()));
        }
        match (name, ctx) {
            ("D", Context::Operator | Context::Bracket) => Ok(Val::Op(BTreeMap::from([(0, DiffOp::d_pow(1))]))),
            ("D", Context::Function) => eval_err(pos, "D is only allowed in operator and bracket expressions"),
            ("l", Context::Bracket) => Ok(Val::Op(BTreeMap::from([(1, DiffOp::identity())]))),
            ("l", _) => eval_err(pos, "l is only allowed in bracket expressions"),
            _ => eval_err(pos, format!("undeclared identifier '{name}'")),
        }
    }

    fn eval(&self, ast: &Ast, ctx: Context) -> Result<Val, SessionError> {
        Ok(match ast {
            Ast::Int(n) => Val::Fun(DiffPoly::constant(Q::from(num_rational::BigRational::from_integer(n.clone())))),
            Ast::Ident { name, pos } => self.ident(name, *pos, ctx)?,
            Ast::Deriv { name, order, pos } => match self.ident(name, *pos, ctx)? {
                Val::Fun(f) => Val::Fun(f.d_n(*order)),
                Val::Op(_) => return eval_err(*pos, format!("cannot differentiate '{name}'")),
            },
            Ast::Neg(a) => self.negate(self.eval(a, ctx)?),
            Ast::Add(a, b) | Ast::Sub(a, b) => {
                let (x, y) = (self.eval(a, ctx)?, self.eval(b, ctx)?);
                let y = if matches!(ast, Ast::Sub(..)) { self.negate(y) } else { y };
                match (x, y) {
                    (Val::Fun(f), Val::Fun(g)) => Val::Fun(f + g),
                    (x, y) => Val::Op(op_add(x.into_op(), y.into_op())),
                }
            }
            Ast::Mul(a, b) => match (self.eval(a, ctx)?, self.eval(b, ctx)?) {
                (Val::Fun(f), Val::Fun(g)) => Val::Fun(f * g),
                (x, y) => Val::Op(op_mul(&x.into_op(), &y.into_op())),
            },
            Ast::Div(a, b, pos) => {
                let Val::Fun(g) = self.eval(b, ctx)? else {
                    return eval_err(*pos, "can only divide by a function");
                };
                let inv = match g.inverse() {
                    Ok(inv) => inv,
                    Err(_) => return eval_err(*pos, "division needs a single-monomial denominator"),
                };
                match self.eval(a, ctx)? {
                    Val::Fun(f) => Val::Fun(f * inv),
                    Val::Op(m) => Val::Op(op_mul(&m, &Val::Fun(inv).into_op())),
                }
            }
            Ast::Pow(a, e, pos) => match self.eval(a, ctx)? {
                Val::Fun(f) => match f.pow(*e) {
                    Ok(p) => Val::Fun(p),
                    Err(_) => return eval_err(*pos, "negative powers need a single-monomial base"),
                },
                Val::Op(_) if *e < 0 => return eval_err(*pos, "negative power of an operator"),
                Val::Op(m) => {
                    let mut acc = BTreeMap::from([(0, DiffOp::identity())]);
                    for _ in 0..*e {
                        acc = op_mul(&acc, &m);
                    }
                    Val::Op(acc)
                }
            },
        })
    }

    fn negate(&self, v: Val) -> Val {
        match v {
            Val::Fun(f) => Val::Fun(-f),
            Val::Op(m) => Val::Op(m.into_iter().map(|(k, op)| (k, op.neg())).collect()),
        }
    }

    pub fn function(&self, text: &str) -> Result<DiffPoly, SessionError> {
        match self.eval(&parse(text)?, Context::Function)? {
            Val::Fun(f) => Ok(f),
            Val::Op(_) => eval_err(0, "expected a function"),
        }
    }

    pub fn operator(&self, text: &str) -> Result<DiffOp, SessionError> {
        let m = self.eval(&parse(text)?, Context::Operator)?.into_op();
        Ok(m.get(&0).cloned().unwrap_or_else(DiffOp::zero))
    }

    /// A lambda-only bracket value.
    pub fn bracket(&self, text: &str) -> Result<LambdaPoly, SessionError> {
        let m = self.eval(&parse(text)?, Context::Bracket)?.into_op();
        Ok(LambdaPoly::from_lambda_coeffs(m.iter().map(|(k, op)| (*k, op.apply(&DiffPoly::one())))))
    }

    /// A rational differential function; any nonzero denominator is allowed.
    pub fn rational(&self, text: &str) -> Result<RatDiffFn, SessionError> {
        self.eval_rat(&parse(text)?)
    }

    fn eval_rat(&self, ast: &Ast) -> Result<RatDiffFn, SessionError> {
        let fun = |v: Val, pos: usize| match v {
            Val::Fun(f) => Ok(RatDiffFn::from(f)),
            Val::Op(_) => eval_err(pos, "operators are not allowed here"),
        };
        Ok(match ast {
            Ast::Int(_) => fun(self.eval(ast, Context::Function)?, 0)?,
            Ast::Ident { name, pos } => fun(self.ident(name, *pos, Context::Function)?, *pos)?,
            Ast::Deriv { name, order, pos } => {
                let mut f = fun(self.ident(name, *pos, Context::Function)?, *pos)?;
                for _ in 0..*order {
                    f = f.d();
                }
                f
            }
            Ast::Neg(a) => self.eval_rat(a)?.neg(),
            Ast::Add(a, b) => self.eval_rat(a)?.add(&self.eval_rat(b)?),
            Ast::Sub(a, b) => self.eval_rat(a)?.sub(&self.eval_rat(b)?),
            Ast::Mul(a, b) => self.eval_rat(a)?.mul(&self.eval_rat(b)?),
            Ast::Div(a, b, pos) => match self.eval_rat(a)?.div(&self.eval_rat(b)?) {
                Ok(f) => f,
                Err(_) => return eval_err(*pos, "division by zero"),
            },
            Ast::Pow(a, e, pos) => match self.eval_rat(a)?.pow(*e) {
                Ok(f) => f,
                Err(_) => return eval_err(*pos, "zero to a negative power"),
            },
        })
    }

    pub fn show_poly(&self, p: &DiffPoly) -> String {
        p.display_with(&self.names).to_string()
    }

    pub fn show_op(&self, op: &DiffOp) -> String {
        op.display_with(&self.names).to_string()
    }

    pub fn show_lambda(&self, p: &LambdaPoly) -> String {
        p.display_with(&self.names).to_string()
    }
}
