//! Command-line front end. [`run`] takes the argument vector and two output
//! streams and returns the process exit status, so the whole surface can be
//! driven from tests.
//!
//! Exit statuses: 0 on success, 1 for typing errors and audit
//! counterexamples, 2 for usage, parse, environment and unbound-variable
//! errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use witnesskit::backend::disjoint::{as_number, def1_union, def2_union, show_set, Elem, FinSet};
use witnesskit::backend::{compile, denote, BackendConfig, CompileError, ConcreteMorphism};
use witnesskit::coherence::{audit_laws, builtin_laws, find_law, non_laws, AuditError};
use witnesskit::strictify::{alt_normalize, normalize};
use witnesskit::{Atom, Env, GenKind, Shape, Witness};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_MAX_DIM: usize = 3;
pub const DEFAULT_PHASE_ORDER: u32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "witnesskit",
    version,
    about = "Typecheck, compile and audit structural witnesses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Finset,
    Graded,
}

#[derive(Debug, clap::Args)]
pub struct BackendArgs {
    #[arg(long, value_enum, default_value_t = Backend::Graded)]
    pub backend: Backend,
    /// Order of the braiding phase root of unity (graded backend only).
    #[arg(long)]
    pub phase_order: Option<u32>,
}

impl BackendArgs {
    fn config(&self) -> Result<BackendConfig, String> {
        match (self.backend, self.phase_order) {
            (Backend::Finset, None | Some(1)) => Ok(BackendConfig::finset()),
            (Backend::Finset, Some(n)) => Err(format!("--phase-order {n} is not available with --backend finset")),
            (Backend::Graded, n) => BackendConfig::graded(n.unwrap_or(DEFAULT_PHASE_ORDER)).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    DisjointUnion,
    Braiding,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the type of a witness term.
    Check { term: String },
    /// Compile a witness term to its monomial matrix (JSON).
    Compile {
        term: String,
        #[arg(long)]
        env: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Print the enumerated basis of a shape (JSON list of paths).
    Basis {
        shape: String,
        #[arg(long)]
        env: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Audit one coherence law, or `all`, over random environments (JSON lines).
    Audit {
        law: String,
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: usize,
    },
    /// List the builtin coherence laws with their types.
    Laws,
    /// Distributive normal form of a shape, its witness and compiled permutation.
    Normalize {
        shape: String,
        /// Environment for the compiled permutation; by default every
        /// variable gets one atom of degree 0.
        #[arg(long)]
        env: Option<PathBuf>,
        /// Use the right-factor-major expansion.
        #[arg(long)]
        alt: bool,
    },
    /// Worked demonstrations.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
}

/// Failure with its exit status; the message goes to stderr.
struct Failure(i32, String);

impl Failure {
    fn usage(msg: impl ToString) -> Failure {
        Failure(2, msg.to_string())
    }
}

const BROKEN_PIPE: &str = "broken pipe";

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure(0, BROKEN_PIPE.to_string());
        }
        Failure(2, format!("i/o error: {e}"))
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Failure {
        match e {
            CompileError::Type(t) => Failure(1, format!("type error: {t}")),
            CompileError::Unbound(u) => Failure(2, u.to_string()),
        }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return e.exit_code();
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure(_, msg)) if msg.starts_with(BROKEN_PIPE) => 0,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Check { term } => {
            let w = parse_term(&term)?;
            let ty = w.typecheck().map_err(|e| Failure(1, format!("type error: {e}")))?;
            writeln!(out, "{ty}")?;
            Ok(0)
        }
        Command::Compile { term, env, backend } => {
            let cfg = backend.config().map_err(Failure::usage)?;
            let w = parse_term(&term)?;
            let env = load_env(&env)?;
            let m = compile(&w, &env, &cfg)?;
            writeln!(out, "{}", morphism_json(&m))?;
            Ok(0)
        }
        Command::Basis { shape, env, backend } => {
            let cfg = backend.config().map_err(Failure::usage)?;
            let shape = parse_shape(&shape)?;
            let env = load_env(&env)?;
            let basis = denote(&shape, &env, &cfg).map_err(Failure::usage)?;
            let paths: Vec<String> = basis.iter().map(|b| b.path.to_string()).collect();
            writeln!(out, "{}", serde_json::to_string(&paths).expect("strings serialize"))?;
            Ok(0)
        }
        Command::Audit {
            law,
            backend,
            trials,
            seed,
            max_dim,
        } => {
            let cfg = backend.config().map_err(Failure::usage)?;
            if trials == 0 {
                return Err(Failure::usage("--trials must be at least 1"));
            }
            let registry = builtin_laws();
            let selected = if law == "all" {
                registry
            } else {
                let probes = non_laws();
                let found = find_law(&registry, &law)
                    .or_else(|| find_law(&probes, &law))
                    .ok_or_else(|| Failure::usage(format!("unknown law '{law}' (try `witnesskit laws`)")))?;
                vec![found.clone()]
            };
            let reports = audit_laws(&selected, &cfg, trials, seed, max_dim).map_err(|e| match e {
                AuditError::NoTrials => Failure::usage(e),
                other => Failure(1, other.to_string()),
            })?;
            for r in &reports {
                writeln!(out, "{}", r.to_json())?;
            }
            Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 1 })
        }
        Command::Laws => {
            for law in builtin_laws() {
                let ty = law.typecheck().map_err(|e| Failure(1, e.to_string()))?;
                writeln!(out, "{}: {}", law.name, ty)?;
            }
            Ok(0)
        }
        Command::Normalize { shape, env, alt } => {
            let shape = parse_shape(&shape)?;
            let env = match env {
                Some(path) => load_env(&path)?,
                None => singleton_env(&shape),
            };
            let result = if alt { alt_normalize(&shape) } else { normalize(&shape) };
            let m = compile(&result.witness, &env, &BackendConfig::finset())?;
            writeln!(out, "nf: {}", result.nf)?;
            writeln!(out, "witness: {}", result.witness)?;
            writeln!(out, "permutation: {}", morphism_json(&m))?;
            Ok(0)
        }
        Command::Demo { name } => {
            match name {
                Demo::DisjointUnion => demo_disjoint_union(out)?,
                Demo::Braiding => demo_braiding(out)?,
            }
            Ok(0)
        }
    }
}

fn parse_term(src: &str) -> Result<Witness, Failure> {
    src.parse()
        .map_err(|e| Failure::usage(format!("cannot parse term: {e}")))
}

fn parse_shape(src: &str) -> Result<Shape, Failure> {
    src.parse()
        .map_err(|e| Failure::usage(format!("cannot parse shape: {e}")))
}

fn load_env(path: &Path) -> Result<Env, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Env::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn singleton_env(shape: &Shape) -> Env {
    let mut env = Env::new();
    for var in shape.free_vars() {
        let label = var.to_lowercase();
        env.bind(var, vec![Atom::new(label, 0)]).expect("one atom per variable");
    }
    env
}

fn morphism_json(m: &ConcreteMorphism) -> String {
    serde_json::to_string(&m.to_json()).expect("plain data")
}

fn set_of(items: &[&str]) -> FinSet {
    items
        .iter()
        .map(|s| match s.parse::<usize>() {
            Ok(n) => Elem::Nat(n),
            Err(_) => Elem::label(s),
        })
        .collect()
}

fn demo_disjoint_union(out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "tagged union:   A+B = {{(a,0) : a in A}} u {{(b,1) : b in B}}")?;
    writeln!(out, "counting union: A+B = {{n : n < |A| + |B|}}")?;
    writeln!(out)?;
    writeln!(out, "{:<8} {:<8} {:<24} {:<12} verdict", "A", "B", "tagged", "counting")?;
    let rows: [(&[&str], &[&str]); 5] = [
        (&["x", "y"], &["z"]),
        (&["z"], &["x"]),
        (&[], &[]),
        (&["5", "7"], &[]),
        (&["0", "1"], &[]),
    ];
    for (a, b) in rows {
        let (a, b) = (set_of(a), set_of(b));
        let counting = def2_union(&a, &b);
        let verdict = if b.is_empty() {
            if counting == a {
                "identical to A (A is a number)".to_string()
            } else {
                "not identical to A".to_string()
            }
        } else {
            format!(
                "counting union is the number {}",
                as_number(&counting).expect("always a number")
            )
        };
        writeln!(
            out,
            "{:<8} {:<8} {:<24} {:<12} {}",
            show_set(&a),
            show_set(&b),
            show_set(&def1_union(&a, &b)),
            show_set(&counting),
            verdict
        )?;
    }
    writeln!(out)?;

    let (a, b, c) = (set_of(&["x"]), set_of(&["z"]), set_of(&["w"]));
    let yes_no = |p: bool| if p { "yes" } else { "no" };
    writeln!(
        out,
        "with A = {}, B = {}, C = {}:",
        show_set(&a),
        show_set(&b),
        show_set(&c)
    )?;
    writeln!(
        out,
        "  tagged   commutative: {}   ({} vs {})",
        yes_no(def1_union(&a, &b) == def1_union(&b, &a)),
        show_set(&def1_union(&a, &b)),
        show_set(&def1_union(&b, &a))
    )?;
    let left = def1_union(&def1_union(&a, &b), &c);
    let right = def1_union(&a, &def1_union(&b, &c));
    writeln!(
        out,
        "  tagged   associative: {}   ({} vs {})",
        yes_no(left == right),
        show_set(&left),
        show_set(&right)
    )?;
    writeln!(
        out,
        "  counting commutative: {}",
        yes_no(def2_union(&a, &b) == def2_union(&b, &a))
    )?;
    writeln!(
        out,
        "  counting associative: {}",
        yes_no(def2_union(&def2_union(&a, &b), &c) == def2_union(&a, &def2_union(&b, &c)))
    )?;
    Ok(())
}

fn demo_braiding(out: &mut dyn Write) -> Result<(), Failure> {
    let env = Env::new()
        .with("A", &[("a", 1)])
        .and_then(|e| e.with("B", &[("b", 1)]))
        .expect("fixed demo environment");
    let cfg = BackendConfig::graded(4).expect("order 4");
    let (a, b) = (Shape::var("A"), Shape::var("B"));
    let over_ab = Witness::gen(GenKind::BTimesOver, [a.clone(), b.clone()]);
    let under_ab = Witness::gen(GenKind::BTimesUnder, [a.clone(), b.clone()]);
    let over_ba = Witness::gen(GenKind::BTimesOver, [b.clone(), a.clone()]);
    let under_ba = Witness::gen(GenKind::BTimesUnder, [b, a]);

    let m_over = compile(&over_ab, &env, &cfg)?;
    let m_under = compile(&under_ab, &env, &cfg)?;
    let twice = compile(&over_ab.clone().then(over_ba), &env, &cfg)?;
    let round = compile(&over_ab.then(under_ba), &env, &cfg)?;

    writeln!(
        out,
        "A = [a: degree 1], B = [b: degree 1], phase q = primitive 4th root of unity"
    )?;
    writeln!(out, "bT_over[A,B]  = {}", morphism_json(&m_over))?;
    writeln!(out, "bT_under[A,B] = {}", morphism_json(&m_under))?;
    writeln!(out, "over == under: {}", m_over == m_under)?;
    writeln!(out, "bT_over[A,B] ; bT_over[B,A]  = {}", morphism_json(&twice))?;
    writeln!(out, "  identity: {}", twice.is_identity())?;
    writeln!(out, "bT_over[A,B] ; bT_under[B,A] = {}", morphism_json(&round))?;
    writeln!(out, "  identity: {}", round.is_identity())?;
    Ok(())
}
