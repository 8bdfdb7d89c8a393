//! CFT declaration files.
//!
//! A flat `key: value` text format, one entry per line; `#` starts a comment.
//!
//! ```text
//! format: 1
//! symbol: s:sq=2              # same syntax as --symbol
//! central: c                  # central charge: a new constant symbol, a declared one, or a rational
//! primary: W 3                # primary generator and its conformal weight
//! define: P1 = 256*L^2 + 24*c*L''
//! bracket: W W = (D + 2*l)*P1 + (D + 2*l)^3*(40*c*L) + (D + 2*l)^5*c^2
//! ```
//!
//! The Virasoro generator is always `L`. Its brackets with itself and with
//! the primaries follow from the axioms; `bracket:` lines give the brackets
//! between primaries, and the transposed entries follow by skewcommutativity.
//! Brackets are read in the bracket context, `define:` right-hand sides in
//! the function context; both may use every name declared above them.

use pva_core::cftcheck::CftStructure;
use pva_core::{DiffPoly, Q};

use crate::session::{Session, SessionError, SymbolDecl};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for FileError {}

/// A loaded declaration file.
#[derive(Debug)]
pub struct CftFile {
    pub session: Session,
    pub structure: CftStructure,
}

pub fn load(text: &str) -> Result<CftFile, FileError> {
    let mut symbols: Vec<SymbolDecl> = Vec::new();
    let mut central: Option<(usize, String)> = None;
    let mut primaries: Vec<(String, Q)> = Vec::new();
    let mut rest: Vec<(usize, &str, &str)> = Vec::new();
    let mut format_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let fail = |msg: String| FileError { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(fail("expected 'key: value'".into()));
        };
        let (key, value) = (key.trim(), value.trim());
        if !format_seen {
            if key != "format" {
                return Err(fail("the first entry must be 'format: 1'".into()));
            }
            if value != "1" {
                return Err(fail(format!("unsupported format {value}")));
            }
            format_seen = true;
            continue;
        }
        match key {
            "symbol" => symbols.push(value.parse().map_err(|e: SessionError| fail(e.to_string()))?),
            "central" if central.is_none() => central = Some((line_no, value.to_string())),
            "central" => return Err(fail("central charge given twice".into())),
            "primary" => {
                let mut it = value.split_whitespace();
                let (Some(name), Some(w), None) = (it.next(), it.next(), it.next()) else {
                    return Err(fail("expected 'primary: NAME WEIGHT'".into()));
                };
                let w: Q = w.parse().map_err(|_| fail(format!("bad weight {w}")))?;
                if name == "L" || primaries.iter().any(|(n, _)| n == name) {
                    return Err(fail(format!("{name} is already a generator")));
                }
                primaries.push((name.to_string(), w));
            }
            "define" | "bracket" => rest.push((line_no, key, value)),
            _ => return Err(fail(format!("unknown key '{key}'"))),
        }
    }
    if !format_seen {
        return Err(FileError { line: 0, msg: "missing 'format: 1' header".into() });
    }
    let mut gens = vec!["L"];
    gens.extend(primaries.iter().map(|(n, _)| n.as_str()));
    let mut session = Session::new("x", &gens);
    let (central_line, central_text) = central.ok_or(FileError { line: 0, msg: "missing 'central:' entry".into() })?;
    if let Ok(q) = central_text.parse::<Q>() {
        session.declare_symbols(&symbols).map_err(|e| FileError { line: 0, msg: e.to_string() })?;
        return finish(session, DiffPoly::constant(q), &primaries, &rest);
    }
    if !symbols.iter().any(|d| d.name == central_text) {
        let decl: SymbolDecl =
            central_text.parse().map_err(|e: SessionError| FileError { line: central_line, msg: e.to_string() })?;
        symbols.push(decl);
    }
    session.declare_symbols(&symbols).map_err(|e| FileError { line: 0, msg: e.to_string() })?;
    let c = session.function(&central_text).map_err(|e| FileError { line: central_line, msg: e.to_string() })?;
    finish(session, c, &primaries, &rest)
}

fn finish(
    mut session: Session,
    c: DiffPoly,
    primaries: &[(String, Q)],
    rest: &[(usize, &str, &str)],
) -> Result<CftFile, FileError> {
    let mut brackets = Vec::new();
    for &(line, key, value) in rest {
        let fail = |msg: String| FileError { line, msg };
        let Some((lhs, rhs)) = value.split_once('=') else {
            return Err(fail("expected '='".into()));
        };
        if key == "define" {
            let f = session.function(rhs).map_err(|e| fail(e.to_string()))?;
            session.define(lhs.trim(), f).map_err(|e| fail(e.to_string()))?;
            continue;
        }
        let idx = |name: &str| primaries.iter().position(|(n, _)| n == name);
        let mut it = lhs.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(fail("expected 'bracket: A B = expr'".into()));
        };
        let (Some(i), Some(j)) = (idx(a), idx(b)) else {
            return Err(fail("brackets are given between primaries only".into()));
        };
        let p = session.bracket(rhs).map_err(|e| fail(e.to_string()))?;
        let (i, j, p) = if i <= j { (i, j, p) } else { (j, i, p.reflect().neg()) };
        if brackets.iter().any(|((a, b), _)| (*a, *b) == (i, j)) {
            return Err(fail(format!("bracket {a} {b} given twice")));
        }
        brackets.push(((i, j), p));
    }
    let prim: Vec<(&str, Q)> = primaries.iter().map(|(n, w)| (n.as_str(), w.clone())).collect();
    let structure = CftStructure::new(c, &prim, &brackets).map_err(|e| FileError { line: 0, msg: e.to_string() })?;
    Ok(CftFile { session, structure })
}
