//! `weil`: JSON front end for weil-core.
//!
//! Every run prints one report `{command, inputs_digest, results, version}`
//! to standard output. Exit codes: 0 success, 1 domain error (the report
//! carries `error` instead of `results`), 2 usage error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use weil_core::chern_weil::{curvature, cw_form, gauge_transform, GaugeKind, GaugeTransform, LieValuedForm, PolyMatrix, Representation};
use weil_core::equivariant::WeilModel;
use weil_core::expr::Expr;
use weil_core::functor::FunctorSpec;
use weil_core::invariants::{invariant_basis, is_invariant, SymElement};
use weil_core::liealg::{algebra_from_json, parse_algebra};
use weil_core::linalg::Matrix;
use weil_core::polyfunctor::{check_decomposition, homogeneous_decompose, is_polynomial, random_probes, restriction_injectivity, ExprMap};
use weil_core::rational::parse_q;
use weil_core::sampling::rng;
use weil_core::schur::{equivariant_hom_dim, verify_bidegree, EquivHomProblem, FunctorExpr};
use weil_core::verify::{report_json, run_all, run_criterion, DEFAULT_SEED};
use weil_core::weil::{basic_subspace, graded_dims, koszul_cohomology_dims};
use weil_core::{Error, LieAlgebra, WeilElement};

#[derive(Parser)]
#[command(name = "weil", version, about = "Exact Weil algebra, Chern-Weil and equivariant computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basis of the basic elements of one total degree.
    Basic {
        /// Built-in name, inline JSON, or a JSON file.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        degree: usize,
    },
    /// Koszul cohomology of the Weil algebra of an abelian algebra.
    Cohomology {
        #[arg(long)]
        dim: usize,
        #[arg(long = "max-degree")]
        max_degree: usize,
    },
    /// Invariant polynomials `(Sym g*)^g`.
    Invariants {
        #[arg(long)]
        algebra: String,
        #[arg(long = "max-degree")]
        max_degree: usize,
    },
    /// Chern-Weil form `P(F)` of a polynomial connection.
    Cw {
        /// Overrides or supplies the connection's algebra.
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        connection: PathBuf,
        /// `casimir`, `basis:K:J` (J-th basis element of degree K), or a JSON file.
        #[arg(long, default_value = "casimir")]
        invariant: String,
    },
    /// Gauge transformation of a connection, with covariance checks.
    Gauge {
        #[arg(long)]
        connection: PathBuf,
        /// `{"kind": "constant" | "unipotent", "matrix": [[expr, ...], ...]}`.
        #[arg(long)]
        gauge: PathBuf,
    },
    /// Truncated basic subspace of the Weil model of a linear action.
    Equivariant {
        #[arg(long)]
        algebra: String,
        /// `rot2`, `rot3`, `trivial`.
        #[arg(long, conflicts_with = "action_json")]
        action: Option<String>,
        /// A JSON list of m×m rational matrices.
        #[arg(long = "action-json")]
        action_json: Option<PathBuf>,
        #[arg(long)]
        degree: usize,
        #[arg(long = "poly-cap", default_value_t = 2)]
        poly_cap: u32,
        /// Chart dimension for the trivial action.
        #[arg(long = "chart-dim")]
        chart_dim: Option<usize>,
    },
    /// Polynomial-functor procedures on expression black boxes.
    Polyfunc {
        #[command(subcommand)]
        command: PolyfuncCommand,
    },
    /// Dimension of equivariant maps `A^{p,q}(W)` against `dim Λ^p V* ⊗ Sym^q V*`.
    Oracle {
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long = "dimV")]
        dim_v: usize,
        /// With `--domain` and `--codomain`: an arbitrary problem.
        #[arg(long = "dimW")]
        dim_w: Option<usize>,
        #[arg(long, requires_all = ["codomain", "dim_w"])]
        domain: Option<String>,
        #[arg(long, requires_all = ["domain", "dim_w"])]
        codomain: Option<String>,
    },
    /// Runs acceptance criteria 1–9.
    VerifyAll {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Only this criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

#[derive(Subcommand)]
enum PolyfuncCommand {
    /// Homogeneous components at seeded random probes.
    Decompose {
        /// `;`-separated component expressions.
        #[arg(long)]
        expr: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        probes: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Samples for a polynomial of total degree at most `degree`.
    Check {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Injectivity of the restriction to `degree`-element subsets of copies.
    Restrict {
        /// `Sym^2`, `Ext^2`, `Tensor^3`, ...
        #[arg(long)]
        functor: String,
        #[arg(long)]
        copies: usize,
        #[arg(long = "dim-v", default_value_t = 1)]
        dim_v: usize,
    },
}

/// Everything the results depend on besides the arguments.
#[derive(Default)]
struct Inputs {
    files: BTreeMap<String, String>,
}

#[derive(Debug)]
enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

impl Inputs {
    fn read(&mut self, path: &Path) -> Outcome<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        self.files.insert(path.display().to_string(), text.clone());
        Ok(text)
    }

    fn json(&mut self, path: &Path) -> Outcome<Value> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", path.display()))))
    }

    fn algebra(&mut self, spec: &str) -> Outcome<LieAlgebra> {
        let path = Path::new(spec);
        if !spec.trim_start().starts_with('{') && path.is_file() {
            let v = self.json(path)?;
            return Ok(algebra_from_json(&v)?);
        }
        Ok(parse_algebra(spec)?)
    }
}

fn algebra_json(l: &LieAlgebra) -> Value {
    serde_json::to_value(l).expect("algebra serializes")
}

fn weil_json(e: &WeilElement) -> Value {
    serde_json::to_value(e).expect("element serializes")
}

fn basic(inputs: &mut Inputs, algebra: &str, degree: usize) -> Outcome<Value> {
    let l = inputs.algebra(algebra)?;
    let basis = basic_subspace(&l, degree)?;
    Ok(json!({
        "algebra": algebra_json(&l),
        "degree": degree,
        "dim": basis.len(),
        "basis": basis.iter().map(weil_json).collect::<Vec<_>>(),
    }))
}

fn cohomology(dim: usize, max_degree: usize) -> Value {
    json!({
        "dim": dim,
        "max_degree": max_degree,
        "graded_dims": graded_dims(dim, max_degree),
        "cohomology": koszul_cohomology_dims(dim, max_degree),
    })
}

fn invariants(inputs: &mut Inputs, algebra: &str, max_degree: usize) -> Outcome<Value> {
    let l = inputs.algebra(algebra)?;
    let mut dims = Vec::new();
    let mut bases = Vec::new();
    for k in 0..=max_degree {
        let b = invariant_basis(&l, k)?;
        dims.push(b.len());
        bases.push(json!({"degree": k, "basis": b.iter().map(|p| weil_json(p.as_weil())).collect::<Vec<_>>()}));
    }
    Ok(json!({"algebra": algebra_json(&l), "label": "(Sym g*)^g", "dims": dims, "bases": bases}))
}

fn load_connection(inputs: &mut Inputs, algebra: Option<&str>, path: &Path) -> Outcome<LieValuedForm> {
    let v = inputs.json(path)?;
    match algebra {
        Some(spec) => {
            let l = inputs.algebra(spec)?;
            if let Some(own) = v.get("algebra") {
                let own = algebra_from_json(own)?;
                if !own.same_structure(&l) {
                    return Err(Error::InvalidAlgebra("connection algebra differs from --algebra".into()).into());
                }
            }
            Ok(LieValuedForm::from_json_with(l, &v)?)
        }
        None => Ok(LieValuedForm::from_json(&v)?),
    }
}

fn choose_invariant(inputs: &mut Inputs, l: &LieAlgebra, spec: &str) -> Outcome<SymElement> {
    if spec == "casimir" {
        let p = SymElement::sum_of_squares(l.dim());
        if !is_invariant(l, &p)? {
            return Err(Error::Precondition("Σ(λ̃^i)² is not invariant for this algebra; use basis:K:J".into()).into());
        }
        return Ok(p);
    }
    if let Some(rest) = spec.strip_prefix("basis:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let parse = |s: &str| s.parse::<usize>().map_err(|_| Failure::Domain(Error::Parse(format!("bad invariant selector {spec:?}"))));
        if parts.len() != 2 {
            return Err(Error::Parse(format!("bad invariant selector {spec:?}")).into());
        }
        let (k, j) = (parse(parts[0])?, parse(parts[1])?);
        let basis = invariant_basis(l, k)?;
        if j == 0 || j > basis.len() {
            return Err(Error::IndexOutOfRange { index: j, dim: basis.len() }.into());
        }
        return Ok(basis[j - 1].clone());
    }
    let v = inputs.json(Path::new(spec))?;
    let p = SymElement::new(WeilElement::from_json(&v, l.dim())?)?;
    if !is_invariant(l, &p)? {
        return Err(Error::Precondition("polynomial is not invariant".into()).into());
    }
    Ok(p)
}

fn cw(inputs: &mut Inputs, algebra: Option<&str>, connection: &Path, invariant: &str) -> Outcome<Value> {
    let a = load_connection(inputs, algebra, connection)?;
    let p = choose_invariant(inputs, a.algebra(), invariant)?;
    let f = curvature(&a)?;
    let form = cw_form(&p, &a)?;
    Ok(json!({
        "algebra": algebra_json(a.algebra()),
        "invariant": weil_json(p.as_weil()),
        "curvature": f.to_json(),
        "form": form.to_json(),
        "closed": form.d().is_zero(),
    }))
}

fn parse_poly_matrix(v: &Value, m: usize) -> Outcome<PolyMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be a list".into()))?
                .iter()
                .map(|e| {
                    let s = match e {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(Error::Parse("matrix entries are expression strings".into())),
                    };
                    Expr::parse(&s)?.to_poly(m)
                })
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()
        .map_err(Failure::from)
}

fn gauge(inputs: &mut Inputs, connection: &Path, gauge: &Path) -> Outcome<Value> {
    let a = load_connection(inputs, None, connection)?;
    let m = a.chart_dim();
    let g = inputs.json(gauge)?;
    let kind: GaugeKind = serde_json::from_value(g.get("kind").cloned().unwrap_or(Value::Null))
        .map_err(|_| Error::Parse("gauge \"kind\" must be \"constant\" or \"unipotent\"".into()))?;
    let matrix = parse_poly_matrix(g.get("matrix").ok_or_else(|| Error::Parse("missing \"matrix\"".into()))?, m)?;
    let rep = Representation::builtin(a.algebra())?;
    let g = match kind {
        GaugeKind::Constant => {
            let constant: Matrix = matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| if p.is_constant() { Ok(p.constant_term()) } else { Err(Error::InvalidGauge("constant gauge has a non-constant entry".into())) })
                        .collect::<Result<Vec<_>, Error>>()
                })
                .collect::<Result<_, Error>>()?;
            GaugeTransform::constant(rep, constant, m)?
        }
        GaugeKind::Unipotent => GaugeTransform::unipotent(rep, matrix)?,
    };
    let b = gauge_transform(&a, &g)?;
    let covariant = curvature(&b)? == g.adjoint_inverse(&curvature(&a)?)?;
    let mut checks = Vec::new();
    for k in 1..=2 {
        for p in invariant_basis(a.algebra(), k)? {
            let invariant = cw_form(&p, &b)? == cw_form(&p, &a)?;
            checks.push(json!({"invariant": weil_json(p.as_weil()), "unchanged": invariant}));
        }
    }
    Ok(json!({
        "gauge": g.to_json(),
        "transformed": b.to_json(),
        "curvature_covariant": covariant,
        "invariant_forms": checks,
    }))
}

fn parse_action(v: &Value) -> Outcome<Vec<Matrix>> {
    let bad = || Failure::Domain(Error::Parse("action must be a list of square matrices of rationals".into()));
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|mat| {
            mat.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(bad)?
                        .iter()
                        .map(|x| match x {
                            Value::String(s) => Ok(parse_q(s)?),
                            Value::Number(n) => Ok(parse_q(&n.to_string())?),
                            _ => Err(bad()),
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn equivariant(
    inputs: &mut Inputs,
    algebra: &str,
    action: Option<&str>,
    action_json: Option<&Path>,
    degree: usize,
    poly_cap: u32,
    chart_dim: Option<usize>,
) -> Outcome<Value> {
    let l = inputs.algebra(algebra)?;
    let model = match (action, action_json) {
        (_, Some(path)) => {
            let mats = parse_action(&inputs.json(path)?)?;
            let m = mats.first().map_or(chart_dim.unwrap_or(0), Vec::len);
            WeilModel::new(l, m, mats)?
        }
        (Some(name), None) => WeilModel::builtin(l, name, chart_dim)?,
        (None, None) => WeilModel::trivial(l, chart_dim.unwrap_or(0)),
    };
    let basis = model.basic_basis(degree, poly_cap)?;
    Ok(json!({
        "algebra": algebra_json(model.algebra()),
        "chart_dim": model.chart_dim(),
        "action": model.action().iter().map(|m| m.iter().map(|r| r.iter().map(weil_core::rational::fmt_q).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "degree": degree,
        "poly_cap": poly_cap,
        "dim": basis.len(),
        "basis": basis.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
    }))
}

fn polyfunc(command: &PolyfuncCommand) -> Outcome<Value> {
    match command {
        PolyfuncCommand::Decompose { expr, degree, dim, probes, seed } => {
            let f = ExprMap::parse(*dim, expr)?;
            let probes = random_probes(&mut rng(*seed), *dim, *probes);
            let dec = homogeneous_decompose(&f, *degree, &probes)?;
            let check = check_decomposition(&f, &dec)?;
            Ok(json!({
                "decomposition": dec.to_json(),
                "reconstructs": check.reconstructs,
                "homogeneous": check.homogeneous,
            }))
        }
        PolyfuncCommand::Check { expr, degree, dim, trials, seed } => {
            let f = ExprMap::parse(*dim, expr)?;
            let mut r = rng(*seed);
            // each trial set pairs random vectors with their negatives
            let sets: Vec<_> = (1..=*trials)
                .map(|k| {
                    let vs = random_probes(&mut r, *dim, k.min(3));
                    let mut set = vs.clone();
                    set.push(vs[0].iter().map(|x| -x).collect());
                    set
                })
                .collect();
            Ok(is_polynomial(&f, *degree, &sets)?.to_json())
        }
        PolyfuncCommand::Restrict { functor, copies, dim_v } => {
            let f: FunctorSpec = functor.parse()?;
            Ok(restriction_injectivity(f, *copies, *dim_v)?.to_json())
        }
    }
}

fn oracle(p: usize, q: usize, dim_v: usize, dim_w: Option<usize>, domain: Option<&str>, codomain: Option<&str>) -> Outcome<Value> {
    match (domain, codomain, dim_w) {
        (Some(d), Some(c), Some(w)) => {
            let problem = EquivHomProblem { dim_w: w, dim_v, domain: d.parse::<FunctorExpr>()?, codomain: c.parse::<FunctorExpr>()? };
            let dim = equivariant_hom_dim(&problem)?;
            Ok(json!({
                "domain": problem.domain.to_string(),
                "codomain": problem.codomain.to_string(),
                "dimW": w,
                "dimV": dim_v,
                "weights_match": problem.weights_match(),
                "dim": dim,
            }))
        }
        _ => Ok(verify_bidegree(p, q, dim_v)?.to_json()),
    }
}

fn verify(seed: u64, criterion: Option<u32>) -> Outcome<(Value, bool)> {
    let results = match criterion {
        Some(id) => vec![run_criterion(id, seed).ok_or_else(|| Error::Precondition(format!("no criterion {id} (1–9)")))?],
        None => run_all(seed),
    };
    let passed = results.iter().all(|r| r.passed());
    Ok((report_json(seed, &results), passed))
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. } => "dimension-mismatch",
        Error::IndexOutOfRange { .. } => "index-out-of-range",
        Error::UnknownAlgebra(_) => "unknown-algebra",
        Error::InvalidAlgebra(_) => "invalid-algebra",
        Error::NotHomogeneous(_) => "not-homogeneous",
        Error::DegreeMismatch(_) => "degree-mismatch",
        Error::Singular => "singular",
        Error::InvalidGauge(_) => "invalid-gauge",
        Error::NotInRepresentation => "not-in-representation",
        Error::InvalidAction(_) => "invalid-action",
        Error::Precondition(_) => "precondition",
        Error::ResourceCap { .. } => "resource-cap",
        Error::Parse(_) => "parse",
    }
}

fn run(command: &Command, inputs: &mut Inputs) -> Outcome<(Value, bool)> {
    let ok = |v: Value| Ok((v, true));
    match command {
        Command::Basic { algebra, degree } => ok(basic(inputs, algebra, *degree)?),
        Command::Cohomology { dim, max_degree } => ok(cohomology(*dim, *max_degree)),
        Command::Invariants { algebra, max_degree } => ok(invariants(inputs, algebra, *max_degree)?),
        Command::Cw { algebra, connection, invariant } => ok(cw(inputs, algebra.as_deref(), connection, invariant)?),
        Command::Gauge { connection, gauge: g } => ok(gauge(inputs, connection, g)?),
        Command::Equivariant { algebra, action, action_json, degree, poly_cap, chart_dim } => {
            ok(equivariant(inputs, algebra, action.as_deref(), action_json.as_deref(), *degree, *poly_cap, *chart_dim)?)
        }
        Command::Polyfunc { command } => ok(polyfunc(command)?),
        Command::Oracle { p, q, dim_v, dim_w, domain, codomain } => ok(oracle(*p, *q, *dim_v, *dim_w, domain.as_deref(), codomain.as_deref())?),
        Command::VerifyAll { seed, criterion } => verify(*seed, *criterion),
    }
}

fn digest(args: &[String], inputs: &Inputs) -> String {
    let canonical = json!({"args": args, "files": inputs.files});
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let mut inputs = Inputs::default();
    let outcome = run(&cli.command, &mut inputs);
    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!(args));
    report.insert("inputs_digest".into(), json!(digest(&args, &inputs)));
    report.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    let code = match outcome {
        Ok((results, passed)) => {
            report.insert("results".into(), results);
            if passed {
                0
            } else {
                1
            }
        }
        Err(Failure::Domain(e)) => {
            report.insert("error".into(), json!({"kind": error_kind(&e), "message": e.to_string()}));
            1
        }
        Err(Failure::Io(msg)) => {
            report.insert("error".into(), json!({"kind": "io", "message": msg}));
            1
        }
    };
    println!("{}", serde_json::to_string_pretty(&Value::Object(report)).expect("report serializes"));
    ExitCode::from(code)
}
