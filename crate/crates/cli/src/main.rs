use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sketchy::doc::{Document, FieldSpec};
use sketchy::gen::KernelDoc;
use sketchy::suites::{run_suite, tensor_law, Options, Route};
use sketchy_core::dayconv::{day_hom, day_tensor, model_tensor, CommutativeTheory, TensorRoute};
use sketchy_core::kernels::{cartesian_lift, compose, tensor_kernels};

/// Finite checks for sketches, Day convolution, fibrations and kernels.
#[derive(Parser)]
#[command(name = "sketchy", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, env = "SKETCHY_SEED", default_value_t = 0)]
    seed: u64,
    /// Reflection iterations.
    #[arg(long, global = true, env = "SKETCHY_BOUND", default_value_t = 8)]
    bound: usize,
    /// A prime `q` or `rat`; overrides the field line of the input.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Seeded random trials on top of the declared instances.
    #[arg(long, global = true, default_value_t = 0)]
    trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Day,
    Congruence,
    Both,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Day => Route::Day,
            RouteArg::Congruence => Route::Congruence,
            RouteArg::Both => Route::Both,
        }
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    FieldSpec::parse(s).ok_or_else(|| format!("`{s}` is neither a prime nor `rat`"))
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a file and print its canonical form.
    Check { file: String },
    /// Run a named law suite on a file.
    Suite { name: String, file: String },
    #[command(subcommand)]
    Kern(KernCmd),
    #[command(subcommand)]
    Day(DayCmd),
    #[command(subcommand)]
    Theory(TheoryCmd),
    #[command(subcommand)]
    Fib(FibCmd),
}

#[derive(Subcommand)]
enum KernCmd {
    /// Append `a ; b`.
    Compose { file: String, a: String, b: String, #[arg(long = "as")] name: Option<String> },
    /// Append the cartesian lift of `k` and the projection it factors through.
    Lift { file: String, k: String },
    /// Append `a ⊗ b`.
    Tensor { file: String, a: String, b: String, #[arg(long = "as")] name: Option<String> },
    /// Kernel laws on the declared kernels.
    Laws { file: String },
}

#[derive(Subcommand)]
enum DayCmd {
    /// Append the Day tensor of two presheaves.
    Tensor { file: String, monoidal: String, p: String, q: String, #[arg(long = "as")] name: Option<String> },
    /// Append the internal hom of two presheaves.
    Hom { file: String, monoidal: String, p: String, q: String, #[arg(long = "as")] name: Option<String> },
    /// Unit, symmetry, associativity and representable laws.
    Laws { file: String },
}

#[derive(Subcommand)]
enum TheoryCmd {
    /// Certificates, models and the free-forget adjunction.
    Models { file: String },
    /// Tensor every pair of declared models.
    TensorModels { file: String, #[arg(long, value_enum, default_value_t = RouteArg::Both)] route: RouteArg },
    /// Tensor two models and append a summary.
    Tensor { file: String, a: String, b: String, #[arg(long, value_enum, default_value_t = RouteArg::Both)] route: RouteArg },
    /// Internal homs from declared presheaves into declared models.
    ExpIdeal { file: String },
}

#[derive(Subcommand)]
enum FibCmd {
    BeckChevalley { file: String },
    Projection { file: String },
    AlphaBeta { file: String, #[arg(long, default_value_t = 2)] base: usize },
}

/// Input errors exit with 3.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn load(file: &str) -> Result<Document, InputError> {
    let src = std::fs::read_to_string(file).map_err(|e| InputError(format!("{file}: {e}")))?;
    Document::parse(&src).map_err(|e| InputError(format!("{file}:{e}")))
}

fn fresh(doc: &Document, want: Option<String>, default: String) -> Result<String, InputError> {
    let n = want.unwrap_or(default);
    if doc.has(&n) {
        return Err(InputError(format!("{n} is already declared")));
    }
    Ok(n)
}

fn suite(name: &str, file: &str, g: &Global, base: usize, route: Route) -> Result<u8, InputError> {
    let doc = load(file)?;
    let opts = Options { seed: g.seed, bound: g.bound, trials: g.trials, field: g.field, base, route };
    let r = run_suite(name, &doc, &opts)?;
    match g.format {
        Format::Text => print!("{}", r.text()),
        Format::Jsonl => print!("{}", r.jsonl()),
    }
    Ok(r.exit_code() as u8)
}

fn day_op(file: &str, monoidal: &str, p: &str, q: &str, name: Option<String>, hom: bool) -> Result<u8, InputError> {
    let mut doc = load(file)?;
    let m = doc.monoidal(monoidal)?.clone();
    let (pp, qq) = (doc.presheaf(p)?.clone(), doc.presheaf(q)?.clone());
    let (n, result) = if hom {
        (fresh(&doc, name, format!("{p}_hom_{q}"))?, day_hom(&pp, &qq, &m)?.presheaf)
    } else {
        (fresh(&doc, name, format!("{p}_x_{q}"))?, day_tensor(&pp, &qq, &m)?.presheaf)
    };
    doc.add_presheaf(&n, monoidal, result);
    print!("{}", doc.print());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, InputError> {
    let g = &cli.global;
    let laws = |name: &str, file: &str| suite(name, file, g, 2, Route::Both);
    match cli.cmd {
        Cmd::Check { file } => {
            print!("{}", load(&file)?.print());
            Ok(0)
        }
        Cmd::Suite { name, file } => laws(&name, &file),
        Cmd::Kern(KernCmd::Laws { file }) => laws("kern-laws", &file),
        Cmd::Day(DayCmd::Laws { file }) => laws("day-laws", &file),
        Cmd::Theory(TheoryCmd::Models { file }) => laws("theory-models", &file),
        Cmd::Theory(TheoryCmd::ExpIdeal { file }) => laws("exp-ideal", &file),
        Cmd::Theory(TheoryCmd::TensorModels { file, route }) => suite("theory-tensor", &file, g, 2, route.into()),
        Cmd::Fib(FibCmd::BeckChevalley { file }) => laws("fib-beck-chevalley", &file),
        Cmd::Fib(FibCmd::Projection { file }) => laws("fib-projection", &file),
        Cmd::Fib(FibCmd::AlphaBeta { file, base }) => suite("fib-alpha-beta", &file, g, base, Route::Both),
        Cmd::Kern(cmd) => {
            let doc = load(match &cmd {
                KernCmd::Compose { file, .. } | KernCmd::Lift { file, .. } | KernCmd::Tensor { file, .. } => file,
                KernCmd::Laws { .. } => unreachable!(),
            })?;
            let mut out = KernelDoc::from_document(doc.clone());
            match cmd {
                KernCmd::Compose { a, b, name, .. } => {
                    let n = fresh(&doc, name, format!("{a}_then_{b}"))?;
                    out.kernel(&n, &compose(&doc.kernel(&a)?, &doc.kernel(&b)?)?);
                }
                KernCmd::Tensor { a, b, name, .. } => {
                    let n = fresh(&doc, name, format!("{a}_x_{b}"))?;
                    out.kernel(&n, &tensor_kernels(&doc.kernel(&a)?, &doc.kernel(&b)?));
                }
                KernCmd::Lift { k, .. } => {
                    let cl = cartesian_lift(&doc.kernel(&k)?)?;
                    out.kernel(&fresh(&doc, None, format!("{k}_lift"))?, &cl.lift);
                    out.kernel(&fresh(&doc, None, format!("{k}_proj"))?, &cl.projection);
                }
                KernCmd::Laws { .. } => unreachable!(),
            }
            print!("{}", out.finish().print());
            Ok(0)
        }
        Cmd::Day(DayCmd::Tensor { file, monoidal, p, q, name }) => day_op(&file, &monoidal, &p, &q, name, false),
        Cmd::Day(DayCmd::Hom { file, monoidal, p, q, name }) => day_op(&file, &monoidal, &p, &q, name, true),
        Cmd::Theory(TheoryCmd::Tensor { file, a, b, route }) => {
            let doc = load(&file)?;
            let (ma, t) = doc.model(&a, g.bound)?;
            let (mb, tb) = doc.model(&b, g.bound)?;
            if !std::sync::Arc::ptr_eq(&t, &tb) {
                return Err(InputError(format!("{a} and {b} are models of different theories")));
            }
            let ct = CommutativeTheory::new((*t).clone())?;
            let mut text = doc.print();
            let route: Route = route.into();
            for (r, label) in [(TensorRoute::Day, "day"), (TensorRoute::Congruence, "congruence")] {
                let skip = matches!((route, r), (Route::Day, TensorRoute::Congruence) | (Route::Congruence, TensorRoute::Day));
                if skip {
                    continue;
                }
                match model_tensor(&ma, &mb, &ct, r, g.bound) {
                    Ok(x) => writeln!(text, "# {a} (x) {b} by {label}: {} elements, {} rounds", x.algebra.size(), x.rounds)?,
                    Err(e) => writeln!(text, "# {a} (x) {b} by {label}: {e}")?,
                }
            }
            let o = tensor_law(&ma, &mb, &ct, route, g.bound);
            if route == Route::Both {
                writeln!(text, "# routes agree: {}", o.status().as_str())?;
            }
            print!("{text}");
            Ok(match o.status() {
                sketchy::report::Status::Pass => 0,
                sketchy::report::Status::Fail => 1,
                sketchy::report::Status::NotConverged => 2,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
