//! Subcommands and their result documents.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Once;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use pva_core::cftcheck::{check_lemma22, check_w_algebra};
use pva_core::diffalg::{set_term_limit, TermLimitExceeded};
use pva_core::diffop::{check_compatible, check_hamiltonian, HamiltonianReport};
use pva_core::hierarchy::{run_hierarchy, Scheme};
use pva_core::independence::rank_s;
use pva_core::lambda::{canonical_form, check_jacobi, check_level_bounds, check_skew, order_and_level};
use pva_core::transform::{is_contact, transform_operator, ContactMap};
use pva_core::{catalog, BracketTable, DiffOp, DiffPoly, Error, LambdaPoly};

use crate::cftfile;
use crate::session::{Session, SessionError, SymbolDecl};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;
pub const EXIT_TOO_LARGE: i32 = 4;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "pva", version, about = "Exact checks for lambda-brackets and Hamiltonian operators")]
pub struct Cli {
    /// Output format of the result document.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub output: Format,
    /// Parameter symbol, `name[:d=name2][:sq=rational]`; repeatable.
    #[arg(long = "symbol", global = true)]
    pub symbols: Vec<String>,
    /// Abort (exit 4) when an intermediate product exceeds this many terms.
    #[arg(long = "max-degree", default_value_t = 2_000_000, global = true)]
    pub max_terms: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Skewcommutativity of `{u_l u}`.
    CheckSkew {
        /// Bracket `{u_l u}` in the variable `l`.
        #[arg(long, allow_hyphen_values = true)]
        bracket: String,
    },
    /// Skewcommutativity and the Jacobi identity of `{u_l u}`.
    CheckJacobi {
        /// Bracket `{u_l u}` in the variable `l`.
        #[arg(long, allow_hyphen_values = true)]
        bracket: String,
    },
    /// Skew-adjointness and Jacobi for a differential operator.
    CheckHamiltonian {
        /// Operator, e.g. `D^2*(1/u*D)^2*D`.
        #[arg(long, allow_hyphen_values = true)]
        operator: String,
    },
    /// Whether two Hamiltonian operators are compatible.
    CheckCompatible {
        /// Operator; give the flag twice.
        #[arg(long, num_args = 1, allow_hyphen_values = true)]
        operator: Vec<String>,
    },
    /// The expansion `sum (D + 2l)^j f_j`.
    CanonicalForm {
        /// Skew bracket `{u_l u}`.
        #[arg(long, allow_hyphen_values = true)]
        bracket: String,
    },
    /// Order and level of a bracket (or of an operator's bracket).
    OrderLevel {
        /// Bracket `{u_l u}`.
        #[arg(long, conflicts_with = "operator", allow_hyphen_values = true)]
        bracket: Option<String>,
        /// Operator, converted to its bracket.
        #[arg(long, allow_hyphen_values = true)]
        operator: Option<String>,
    },
    /// A named operator: H, Hc, T, K, H5, H5c, H7, H9, Hsq.
    Catalog {
        /// Family name.
        name: String,
        /// Order for the families indexed by N (H, Hc, T, Hsq).
        #[arg(long = "N")]
        n: Option<u32>,
        /// Coefficient function `c` (or `c1` for H5).
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Second coefficient for H5.
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<String>,
    },
    /// Rank of the family `S_{N,m}`.
    FnjRank {
        /// Odd order N.
        #[arg(long = "N")]
        n: u32,
        /// Shift m.
        #[arg(long)]
        m: u32,
        /// Restrict to `j <= min(N, m)`.
        #[arg(long)]
        truncate: bool,
    },
    /// Lenard-Magri recursion `K xi_{j+1} = H xi_j`.
    Lenard {
        /// `D`, `D^3`, or `D^3 - c^2*D` together with `--c`.
        #[arg(long = "K", allow_hyphen_values = true)]
        k: String,
        /// Hamiltonian operator H.
        #[arg(long = "H", allow_hyphen_values = true)]
        h: String,
        /// Seeds xi_0, xi_1, ...; they must already satisfy the recursion.
        #[arg(long = "seed", required = true, allow_hyphen_values = true)]
        seeds: Vec<String>,
        /// Number of new terms.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Constant `c` of the reduced order-5 scheme.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Contact transformation of an operator; `phi` and `psi` use `y`, `v`.
    Transform {
        /// New x as a function of y, v, v'.
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        /// New u as a function of y, v, v'.
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        /// Operator to transform.
        #[arg(long, allow_hyphen_values = true)]
        operator: String,
    },
    /// Axioms, Jacobi and weight relations of a CFT declaration file.
    CftCheck {
        /// Declaration file.
        #[arg(long)]
        file: std::path::PathBuf,
    },
}

/// Exit code plus the result document.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub doc: Value,
}

impl Outcome {
    fn verdict(pass: bool, doc: Value) -> Outcome {
        Outcome { code: if pass { EXIT_PASS } else { EXIT_FAIL }, doc }
    }

    fn error(code: i32, msg: impl Into<String>) -> Outcome {
        Outcome { code, doc: json!({ "error": msg.into() }) }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.doc.to_string(),
            Format::Text => render_text(&self.doc),
        }
    }
}

fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    let map = match doc {
        Value::Object(map) => map,
        Value::String(s) => return s.clone(),
        other => return other.to_string(),
    };
    for (k, v) in map {
        match v {
            Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
            Value::Array(items) => {
                out.push_str(&format!("{k}:\n"));
                for it in items {
                    let s = match it {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("  {s}\n"));
                }
            }
            other => out.push_str(&format!("{k}: {other}\n")),
        }
    }
    out
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl From<Failure> for Outcome {
    fn from(f: Failure) -> Outcome {
        match f {
            Failure::Usage(m) => Outcome::error(EXIT_USAGE, m),
            Failure::Core(e) => {
                let code = match e {
                    Error::NotExact(_)
                    | Error::Obstruction(_)
                    | Error::NotContact(_)
                    | Error::ConstraintViolated(_)
                    | Error::ShapeViolation(_) => EXIT_OBSTRUCTION,
                    Error::NotSkewForm { .. } | Error::NotEigen(_) => EXIT_FAIL,
                    Error::NotAUnit | Error::BadArgument(_) => EXIT_USAGE,
                };
                Outcome::error(code, e.to_string())
            }
        }
    }
}

type Res = Result<Outcome, Failure>;

fn session(symbols: &[String]) -> Result<Session, Failure> {
    let decls = symbols.iter().map(|s| s.parse()).collect::<Result<Vec<SymbolDecl>, _>>()?;
    let mut s = Session::default();
    s.declare_symbols(&decls)?;
    Ok(s)
}

fn skew_residual(s: &Session, p: &LambdaPoly) -> String {
    let t = BracketTable::scalar(p.clone());
    s.show_lambda(&check_skew(&t).residuals[0][0])
}

fn hamiltonian_doc(s: &Session, r: &HamiltonianReport) -> Value {
    let mut doc = Map::new();
    doc.insert("skew".into(), json!(r.is_skew()));
    doc.insert("jacobi".into(), json!(r.jacobi.passes()));
    if !r.is_skew() {
        doc.insert("skew_residual".into(), json!(s.show_op(&r.skew_residual)));
    }
    if let Some((_, res)) = r.jacobi.failing().next() {
        doc.insert("jacobi_residual".into(), json!(s.show_lambda(res)));
    }
    Value::Object(doc)
}

fn catalog_op(s: &Session, name: &str, n: Option<u32>, c: Option<&str>, c2: Option<&str>) -> Result<DiffOp, Failure> {
    let need_n = || n.ok_or_else(|| Failure::Usage(format!("{name} needs --N")));
    let fun = |t: Option<&str>, flag: &str| -> Result<DiffPoly, Failure> {
        let t = t.ok_or_else(|| Failure::Usage(format!("{name} needs --{flag}")))?;
        Ok(s.function(t)?)
    };
    Ok(match name {
        "H" => catalog::h_n0(need_n()?)?,
        "Hc" => catalog::h_nc(need_n()?, &fun(c, "c")?)?,
        "T" => catalog::t_n(need_n()?)?,
        "K" => catalog::k_c(&fun(c, "c")?)?,
        "H5" => catalog::h5_gen(&fun(c, "c")?, &fun(c2, "c2")?)?,
        "H5c" => catalog::h5_0c(&fun(c, "c")?)?,
        "H7" => catalog::h7(&fun(c, "c")?)?,
        "H9" => catalog::h9(&fun(c, "c")?)?,
        "Hsq" => catalog::h_sq(need_n()?, &fun(c, "c")?)?,
        _ => return Err(Failure::Usage(format!("unknown catalog entry '{name}'"))),
    })
}

fn execute(cli: &Cli) -> Res {
    let s = session(&cli.symbols)?;
    match &cli.command {
        Command::CheckSkew { bracket } => {
            let p = s.bracket(bracket)?;
            let pass = check_skew(&BracketTable::scalar(p.clone())).passes();
            let mut doc = Map::new();
            doc.insert("skew".into(), json!(pass));
            if !pass {
                doc.insert("residual".into(), json!(skew_residual(&s, &p)));
            }
            Ok(Outcome::verdict(pass, Value::Object(doc)))
        }
        Command::CheckJacobi { bracket } => {
            let p = s.bracket(bracket)?;
            let t = BracketTable::scalar(p.clone());
            let skew = check_skew(&t).passes();
            let jac = check_jacobi(&t);
            let mut doc = Map::new();
            doc.insert("skew".into(), json!(skew));
            doc.insert("jacobi".into(), json!(jac.passes()));
            if !skew {
                doc.insert("skew_residual".into(), json!(skew_residual(&s, &p)));
            }
            if let Some((_, r)) = jac.failing().next() {
                doc.insert("jacobi_residual".into(), json!(s.show_lambda(r)));
            }
            Ok(Outcome::verdict(skew && jac.passes(), Value::Object(doc)))
        }
        Command::CheckHamiltonian { operator } => {
            let h = s.operator(operator)?;
            let r = check_hamiltonian(&h);
            Ok(Outcome::verdict(r.passes(), hamiltonian_doc(&s, &r)))
        }
        Command::CheckCompatible { operator } => {
            let [a, b] = operator.as_slice() else {
                return Err(Failure::Usage("give exactly two --operator flags".into()));
            };
            let (a, b) = (s.operator(a)?, s.operator(b)?);
            let r = check_compatible(&a, &b);
            let doc = json!({
                "compatible": r.passes(),
                "a": hamiltonian_doc(&s, &r.a),
                "b": hamiltonian_doc(&s, &r.b),
                "sum": hamiltonian_doc(&s, &r.sum),
            });
            Ok(Outcome::verdict(r.passes(), doc))
        }
        Command::CanonicalForm { bracket } => {
            let p = s.bracket(bracket)?;
            let parts = canonical_form(&p)?;
            let terms: Vec<Value> = parts.iter().map(|(j, f)| json!({ "j": j, "f": s.show_poly(f) })).collect();
            Ok(Outcome::verdict(true, json!({ "terms": terms })))
        }
        Command::OrderLevel { bracket, operator } => {
            let p = match (bracket, operator) {
                (Some(b), None) => s.bracket(b)?,
                (None, Some(o)) => s.operator(o)?.to_bracket(),
                _ => return Err(Failure::Usage("give --bracket or --operator".into())),
            };
            let (n, m) = order_and_level(&p)?;
            let bound = check_level_bounds(n, m);
            let doc = json!({ "order": n, "level": m, "level_bound": bound });
            Ok(Outcome::verdict(bound, doc))
        }
        Command::Catalog { name, n, c, c2 } => {
            let op = catalog_op(&s, name, *n, c.as_deref(), c2.as_deref())?;
            let doc = json!({
                "name": name,
                "order": op.degree(),
                "operator": s.show_op(&op),
                "bracket": s.show_lambda(&op.to_bracket()),
            });
            Ok(Outcome::verdict(true, doc))
        }
        Command::FnjRank { n, m, truncate } => {
            let r = rank_s(*n, *m, *truncate)?;
            Ok(Outcome::verdict(true, json!({ "rank": r.rank, "size": r.size, "independent": r.independent() })))
        }
        Command::Lenard { k, h, seeds, steps, c } => {
            let kop = s.operator(k)?;
            let h = s.operator(h)?;
            let scheme = if kop == DiffOp::d_pow(1) {
                Scheme::PowerOfD(1)
            } else if kop == DiffOp::d_pow(3) {
                Scheme::PowerOfD(3)
            } else {
                let c = c.as_deref().ok_or_else(|| Failure::Usage("K is not D or D^3; give --c for K_c".into()))?;
                let c = s.function(c)?;
                if catalog::k_c(&c)? != kop {
                    return Err(Failure::Usage("K must be D, D^3 or D^3 - c^2*D".into()));
                }
                Scheme::Reduced5 { c }
            };
            let seeds = seeds.iter().map(|t| s.function(t)).collect::<Result<Vec<_>, _>>()?;
            let st = run_hierarchy(&scheme, &h, &seeds, *steps)?;
            let xis: Vec<String> = st.xis.iter().map(|x| s.show_poly(x)).collect();
            let flows: Vec<String> = st.equations.iter().map(|x| s.show_poly(x)).collect();
            let doc = json!({ "xi": xis, "flows": flows, "relations": true, "independent": st.independent });
            Ok(Outcome::verdict(true, doc))
        }
        Command::Transform { phi, psi, operator } => {
            let new = s.renamed("y", &["v"]);
            let m = ContactMap::new(new.rational(phi)?, new.rational(psi)?)?;
            let rho = is_contact(&m)?;
            let h = s.operator(operator)?;
            let t = transform_operator(&h, &m)?;
            let names = new.names();
            let mut doc = Map::new();
            doc.insert("rho".into(), json!(rho.display_with(names).to_string()));
            doc.insert("operator".into(), json!(t.display_with(names).to_string()));
            doc.insert("order".into(), json!(t.degree()));
            doc.insert("order_preserved".into(), json!(t.degree() == h.degree()));
            doc.insert("skew".into(), json!(t.is_skew_adjoint()));
            doc.insert("polynomial".into(), json!(t.to_diffop().is_some()));
            Ok(Outcome::verdict(t.degree() == h.degree(), Value::Object(doc)))
        }
        Command::CftCheck { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let f = cftfile::load(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            cft_doc(&f)
        }
    }
}

fn cft_doc(f: &cftfile::CftFile) -> Res {
    let st = &f.structure;
    let t = st.table();
    let gens = t.gens();
    let r = check_w_algebra(st);
    let triples: Vec<Value> = r
        .jacobi
        .residuals
        .iter()
        .map(|((i, j, k), res)| {
            json!({ "triple": format!("{} {} {}", gens[*i], gens[*j], gens[*k]), "residual": f.session.show_lambda(res) })
        })
        .collect();
    let mut lemma = Vec::new();
    for w in 1..t.len() {
        let entry = t.entry(w, w);
        if entry.is_zero() {
            continue;
        }
        let pass = match canonical_form(entry) {
            Ok(pj) => check_lemma22(st, w, &pj)?.passes(),
            Err(_) => false,
        };
        lemma.push(json!({ "generator": gens[w], "pass": pass }));
    }
    let lemma_ok = lemma.iter().all(|v| v["pass"] == json!(true));
    let pass = r.passes() && lemma_ok;
    let doc = json!({
        "generators": gens,
        "skew": r.skew.passes(),
        "jacobi": r.jacobi.passes(),
        "weight_relations": lemma,
        "triples": triples,
        "pass": pass,
    });
    Ok(Outcome::verdict(pass, doc))
}

/// Keeps the default panic message for everything but the term bound.
fn quiet_term_limit_panics() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| {
        let prev = panic::take_hook();
        panic::set_hook(Box::new(move |info| {
            if info.payload().downcast_ref::<TermLimitExceeded>().is_none() {
                prev(info);
            }
        }));
    });
}

/// Runs a parsed command line with the term bound in force. The bound is
/// process-wide.
pub fn run(cli: &Cli) -> Outcome {
    quiet_term_limit_panics();
    set_term_limit(cli.max_terms);
    let result = panic::catch_unwind(AssertUnwindSafe(|| execute(cli)));
    match result {
        Ok(Ok(o)) => o,
        Ok(Err(f)) => f.into(),
        Err(payload) => match payload.downcast_ref::<TermLimitExceeded>() {
            Some(e) => Outcome::error(EXIT_TOO_LARGE, format!("term bound exceeded: {} > {}", e.terms, e.limit)),
            None => panic::resume_unwind(payload),
        },
    }
}

/// Parses `args` (including the program name) and runs them; usage errors
/// become exit code 2.
pub fn run_args<I, T>(args: I) -> (Outcome, Format)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => (run(&cli), cli.output),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            (Outcome { code, doc: Value::String(e.to_string()) }, Format::Text)
        }
    }
}
