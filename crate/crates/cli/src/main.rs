//! `skewmat`: command-line access to skew polynomial arithmetic, conjugacy
//! classes, minimal polynomials, the induced matroid and the network
//! coding simulator.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use skewmat::conjugacy::{self, ClassId, ConjugacyError};
use skewmat::field::{Fe, FieldCtx, FieldError, Matrix};
use skewmat::matroid::{Flat, Matroid, MatroidError, Scope};
use skewmat::minimal::{self, MinimalError, PointSet};
use skewmat::netsim::{Network, NetsimError, Oracle};
use skewmat::skewpoly::{SkewError, SkewPoly};
use skewmat::golden;
use std::process::ExitCode;
use std::sync::Arc;

const GRAMMAR: &str = "\
field spec:  p,n,k,s[,modpoly]   (F_{p^n} over F_{p^k}, sigma = q^s-Frobenius, modpoly as a base-p integer)
element:     0 | 1 | g<i>         (g<i> is the i-th power of the primitive element)
element set: comma-separated elements, e.g. \"1,g3,g6\"
polynomial:  term (+ term)*, term := coeff | [coeff*]x[^n], e.g. \"g2*x^2 + x + 1\"";

#[derive(Parser)]
#[command(name = "skewmat", version, about = "Skew polynomials over finite fields and the matroid they induce")]
struct Cli {
    /// Field as "p,n,k,s[,modpoly]".
    #[arg(long, global = true)]
    field: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized verbs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Rlnc,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parameters of the field and its subfield.
    Fieldinfo,
    /// Product f·g.
    Mul { f: String, g: String },
    /// Right division f = q·g + r.
    Divmod { f: String, g: String },
    /// Greatest common right divisor.
    Grcd { f: String, g: String },
    /// Least left common multiple.
    Llcm { f: String, g: String },
    /// Value f(a) (remainder of right division by x - a).
    Eval { f: String, a: String },
    /// All zeros of f.
    Zeros { f: String },
    /// Conjugacy class of an element.
    Classof { a: String },
    /// Elements of C(g^l), or of C(0) for "zero".
    Classelems { class: String },
    /// Solves g^l·warp(a) = alpha for a.
    Unwarp {
        alpha: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        method: u8,
    },
    /// Minimal polynomial of a point set.
    Minpoly { set: String },
    /// P-closure of a point set.
    Closure { set: String },
    /// Whether a point set is P-independent.
    Pindep { set: String },
    /// Greedy P-basis of a point set.
    Pbasis { set: String },
    /// Matroid rank of a point set.
    Rank { set: String },
    /// Matroid closure as a flat with its rank.
    Flatclose { set: String },
    /// Enumerate flats of one class or of the whole matroid.
    Flats {
        #[arg(long, conflicts_with = "whole", required_unless_present = "whole")]
        class: Option<u32>,
        #[arg(long)]
        whole: bool,
        #[arg(long)]
        max_rank: Option<usize>,
    },
    /// Representation matrices A and script A.
    Repmatrix,
    /// Flat distance between two flats.
    Dist { x: String, y: String },
    /// Compares subspace and flat distances under the extended warp.
    IsometryCheck,
    /// Runs the network coding simulator on a JSON network description.
    Simulate {
        #[arg(long)]
        spec: std::path::PathBuf,
        #[arg(long, value_enum)]
        oracle: Option<OracleArg>,
        /// Overrides the trial count of the description.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Checks the built-in worked examples.
    Selftest,
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<SkewError> for CliError {
    fn from(e: SkewError) -> Self {
        match e {
            SkewError::Parse(_) | SkewError::Field(FieldError::Parse(_)) => CliError::Usage(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

macro_rules! domain_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_errors!(ConjugacyError, MinimalError, MatroidError, NetsimError);

/// Text and JSON renderings of one result.
struct Output {
    text: String,
    json: Value,
    /// Printed normally but exits with status 1.
    failed: bool,
}

fn out(text: impl Into<String>, json: Value) -> Result<Output, CliError> {
    Ok(Output { text: text.into(), json, failed: false })
}

fn failed(text: impl Into<String>, json: Value) -> Result<Output, CliError> {
    Ok(Output { text: text.into(), json, failed: true })
}

fn list(elems: &[Fe]) -> String {
    elems.iter().map(Fe::to_string).collect::<Vec<_>>().join(", ")
}

fn tokens(elems: &[Fe]) -> Value {
    Value::from(elems.iter().map(Fe::to_string).collect::<Vec<_>>())
}

fn matrix_rows(m: &Matrix) -> Value {
    Value::from((0..m.rows()).map(|i| m.row(i).iter().map(Fe::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn class_name(c: ClassId) -> String {
    c.to_string()
}

struct Env {
    ctx: Arc<FieldCtx>,
}

impl Env {
    fn poly(&self, text: &str) -> Result<SkewPoly, CliError> {
        Ok(SkewPoly::parse(self.ctx.clone(), text)?)
    }

    fn elem(&self, text: &str) -> Result<Fe, CliError> {
        Ok(self.ctx.parse_elem(text)?)
    }

    fn set(&self, text: &str) -> Result<PointSet, CliError> {
        Ok(PointSet::new(self.ctx.clone(), self.ctx.parse_elems(text)?))
    }

    fn matroid(&self) -> Result<Matroid, CliError> {
        Ok(Matroid::new(self.ctx.clone())?)
    }
}

fn field_env(cli: &Cli) -> Result<Env, CliError> {
    let spec = cli.field.as_deref().ok_or_else(|| CliError::Usage("this verb needs --field p,n,k,s[,modpoly]".into()))?;
    Ok(Env { ctx: Arc::new(FieldCtx::from_spec(spec)?) })
}

fn flat_json(f: &Flat) -> Value {
    json!({ "points": tokens(f.points().elems()), "rank": f.rank(), "minpoly": f.minpoly().to_string() })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.cmd {
        Cmd::Selftest => return selftest(cli),
        Cmd::Simulate { spec, oracle, trials } => return simulate(cli, spec, *oracle, *trials),
        _ => {}
    }
    let env = field_env(cli)?;
    let ctx = &env.ctx;
    match &cli.cmd {
        Cmd::Fieldinfo => {
            let t = conjugacy::method2_exponent(ctx).ok();
            let text = format!(
                "F_{}^{} over F_{} (q = {}, m = {}), sigma = Frobenius^{}\nmodpoly: {} ({})\nbasis: {}\nF_q: {}\nclass size: {}\nunwarp exponent: {}",
                ctx.p(),
                ctx.n(),
                ctx.q(),
                ctx.q(),
                ctx.m(),
                ctx.s(),
                modpoly_text(ctx),
                ctx.modpoly_int(),
                list(ctx.basis()),
                list(ctx.subfield()),
                ctx.class_size(),
                t.map_or("none".to_string(), |t| t.to_string()),
            );
            out(
                text,
                json!({
                    "p": ctx.p(), "n": ctx.n(), "k": ctx.k(), "m": ctx.m(), "s": ctx.s(), "q": ctx.q(),
                    "order": ctx.order(), "modpoly": ctx.modpoly_int(), "basis": tokens(ctx.basis()),
                    "subfield": tokens(ctx.subfield()), "class_size": ctx.class_size(), "unwarp_exponent": t,
                }),
            )
        }
        Cmd::Mul { f, g } => {
            let r = env.poly(f)?.try_mul(&env.poly(g)?)?;
            out(r.to_string(), json!({ "product": r.to_string() }))
        }
        Cmd::Divmod { f, g } => {
            let (q, r) = env.poly(f)?.right_divmod(&env.poly(g)?)?;
            out(format!("quotient: {q}\nremainder: {r}"), json!({ "quotient": q.to_string(), "remainder": r.to_string() }))
        }
        Cmd::Grcd { f, g } => {
            let r = env.poly(f)?.grcd(&env.poly(g)?)?;
            out(r.to_string(), json!({ "grcd": r.to_string() }))
        }
        Cmd::Llcm { f, g } => {
            let r = env.poly(f)?.llcm(&env.poly(g)?)?;
            out(r.to_string(), json!({ "llcm": r.to_string() }))
        }
        Cmd::Eval { f, a } => {
            let v = env.poly(f)?.eval(env.elem(a)?);
            out(v.to_string(), json!({ "value": v.to_string() }))
        }
        Cmd::Zeros { f } => {
            let z = env.poly(f)?.zeros()?;
            out(list(&z), json!({ "zeros": tokens(&z) }))
        }
        Cmd::Classof { a } => {
            let c = conjugacy::class_of(ctx, env.elem(a)?);
            let l = match c {
                ClassId::Zero => Value::Null,
                ClassId::Nonzero(l) => l.into(),
            };
            out(class_name(c), json!({ "class": class_name(c), "index": l }))
        }
        Cmd::Classelems { class } => {
            let id = if class == "zero" {
                ClassId::Zero
            } else {
                let l: u64 = class.parse().map_err(|_| CliError::Usage(format!("class must be an index or \"zero\", got {class:?}")))?;
                conjugacy::class_elements(ctx, l)?;
                ClassId::Nonzero(l as u32)
            };
            let e = conjugacy::class_members(ctx, id);
            out(list(&e), json!({ "class": class_name(id), "elements": tokens(&e) }))
        }
        Cmd::Unwarp { alpha, method } => {
            let a = env.elem(alpha)?;
            let l = match conjugacy::class_of(ctx, a) {
                ClassId::Zero => return Err(ConjugacyError::ZeroArgument.into()),
                ClassId::Nonzero(l) => l as u64,
            };
            let root = if *method == 1 { conjugacy::unwarp_method1(ctx, a, l)? } else { conjugacy::unwarp_method2(ctx, a, l)? };
            out(root.to_string(), json!({ "root": root.to_string(), "class": l, "method": method }))
        }
        Cmd::Minpoly { set } => {
            let f = minimal::minimal_poly(&env.set(set)?);
            out(f.poly.to_string(), json!({ "minpoly": f.poly.to_string(), "degree": f.degree() }))
        }
        Cmd::Closure { set } => {
            let c = minimal::closure(&env.set(set)?);
            out(c.to_string(), json!({ "closure": tokens(c.elems()) }))
        }
        Cmd::Pindep { set } => {
            let b = minimal::is_p_independent(&env.set(set)?);
            out(b.to_string(), json!({ "independent": b }))
        }
        Cmd::Pbasis { set } => {
            let b = minimal::p_basis(&env.set(set)?);
            out(b.to_string(), json!({ "basis": tokens(b.elems()) }))
        }
        Cmd::Rank { set } => {
            let r = env.matroid()?.rank(&env.set(set)?);
            out(r.to_string(), json!({ "rank": r }))
        }
        Cmd::Flatclose { set } => {
            let f = env.matroid()?.closure(&env.set(set)?);
            out(format!("{} (rank {})", f.points(), f.rank()), flat_json(&f))
        }
        Cmd::Flats { class, whole, max_rank } => {
            let scope = if *whole { Scope::Whole } else { Scope::Class(class.expect("clap enforces one of --class/--whole")) };
            let flats = env.matroid()?.flats(scope, *max_rank)?;
            let text = flats.iter().map(|f| format!("rank {}: {}", f.rank(), f)).collect::<Vec<_>>().join("\n");
            out(text, json!({ "count": flats.len(), "flats": flats.iter().map(flat_json).collect::<Vec<_>>() }))
        }
        Cmd::Repmatrix => {
            let rep = env.matroid()?.representation();
            let header = format!("modpoly {} ({}), basis {}", modpoly_text(ctx), ctx.modpoly_int(), list(ctx.basis()));
            let text = format!(
                "{header}\nA ({}x{}), columns: {}\n{}script A ({}x{}), columns: {}\n{}",
                rep.a.rows(),
                rep.a.cols(),
                list(&rep.a_labels),
                rep.a,
                rep.script_a.rows(),
                rep.script_a.cols(),
                list(&rep.column_labels),
                rep.script_a,
            );
            out(
                text.trim_end(),
                json!({
                    "modpoly": ctx.modpoly_int(), "basis": tokens(ctx.basis()),
                    "a": matrix_rows(&rep.a), "a_columns": tokens(&rep.a_labels),
                    "script_a": matrix_rows(&rep.script_a), "script_a_columns": tokens(&rep.column_labels),
                }),
            )
        }
        Cmd::Dist { x, y } => {
            let mt = env.matroid()?;
            let (fx, fy) = (mt.flat(env.set(x)?)?, mt.flat(env.set(y)?)?);
            let d = mt.dist(&fx, &fy)?;
            out(d.to_string(), json!({ "distance": d }))
        }
        Cmd::IsometryCheck => {
            let r = env.matroid()?.isometry_check()?;
            let text = format!(
                "subspaces: {}\nC(1) flats: {}\npairs checked: {}\ninjective: {}\nonto: {}\ninverse: {}\nmismatches: {}\n{}",
                r.subspaces,
                r.c1_flats,
                r.pairs,
                r.injective,
                r.onto,
                r.inverse_ok,
                r.mismatches,
                if r.passed() { "isometry: ok" } else { "isometry: FAILED" }
            );
            let j = json!({
                "subspaces": r.subspaces, "c1_flats": r.c1_flats, "pairs": r.pairs, "injective": r.injective,
                "onto": r.onto, "inverse": r.inverse_ok, "mismatches": r.mismatches, "passed": r.passed(),
            });
            if r.passed() {
                out(text, j)
            } else {
                failed(text, j)
            }
        }
        Cmd::Selftest | Cmd::Simulate { .. } => unreachable!("handled above"),
    }
}

fn modpoly_text(ctx: &FieldCtx) -> String {
    let terms: Vec<String> = ctx
        .modpoly()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            }
        })
        .collect();
    terms.join(" + ")
}

fn simulate(cli: &Cli, path: &std::path::Path, oracle: Option<OracleArg>, trials: Option<u64>) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut spec = skewmat::netsim::NetSpec::from_json(&text)?;
    if let Some(seed) = cli.seed {
        spec.seed = seed;
    }
    if let Some(t) = trials {
        spec.trials = t;
    }
    let net = Network::from_spec(&spec)?;
    let report = net.simulate(if oracle.is_some() { Oracle::Rlnc } else { Oracle::Matroidal })?;
    let fmt = |x: Option<f64>| x.map_or("null".to_string(), |v| format!("{v:.6}"));
    let mut lines = vec![
        format!("trials: {}", report.trials),
        format!("success_rate: {}", fmt(report.success_rate)),
        format!("mean_distance: {}", fmt(report.mean_distance)),
        format!("forwarded: {}", report.forwarded),
        format!("containment_violations: {}", report.containment_violations),
    ];
    for s in &report.per_sink {
        lines.push(format!("sink {}: successes {}, rate {}, mean distance {}", s.id, s.successes, fmt(s.success_rate), fmt(s.mean_distance)));
    }
    out(lines.join("\n"), serde_json::to_value(&report).expect("reports serialize"))
}

fn selftest(cli: &Cli) -> Result<Output, CliError> {
    let results = golden::run(cli.field.as_deref());
    let failed = results.iter().filter(|r| !r.passed).count();
    let text = results
        .iter()
        .map(|r| if r.passed { format!("PASS {}", r.name) } else { format!("FAIL {}: {}", r.name, r.detail) })
        .chain([format!("{} passed, {failed} failed", results.len() - failed)])
        .collect::<Vec<_>>()
        .join("\n");
    let j = json!({
        "passed": results.iter().filter(|r| r.passed).map(|r| r.name).collect::<Vec<_>>(),
        "failed": results.iter().filter(|r| !r.passed).map(|r| json!({ "name": r.name, "detail": r.detail })).collect::<Vec<_>>(),
    });
    if failed == 0 {
        out(text, j)
    } else {
        self::failed(text, j)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(o) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&o.json).expect("json")
            } else {
                o.text
            };
            // a closed pipe (e.g. `| head`) is not an error worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if o.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{GRAMMAR}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
