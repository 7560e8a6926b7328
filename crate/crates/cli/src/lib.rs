//! The `hgl` command line: instance files in, sorted reports out.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 when the
//! input cannot be read or parsed.

pub mod catalog;
pub mod corpus;
pub mod instance;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hgl_core::bundle::{
    check_comodule_algebra, check_module_coalgebra, check_right_module, faithful_flatness, Bundle,
};
use hgl_core::descent::{descent_report, descent_sweep, SweepConfig};
use hgl_core::dsl::{parse_assertions, run_assertions, Environment};
use hgl_core::hopf::{check_algebra, check_antipode_anti_morphism, check_coalgebra, check_hopf};
use hgl_core::qcat::quantum_category_report;
use hgl_core::{Field, Report};

use crate::instance::{parse_instance, AnyInstance, Instance};

#[derive(Parser, Debug, Clone)]
#[command(name = "hgl", version, about = "Exact checks for Hopf-Galois data")]
pub struct Cli {
    /// One tab-separated record per check.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Append wall-clock time (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Hopf,
    Comodule,
    ModuleCoalgebra,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Algebra,
    Comonoid,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Axiom suites for the declared structures.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        what: What,
    },
    /// Decide whether the bundle block is principal.
    Principal {
        file: PathBuf,
        #[arg(long, value_enum)]
        side: Option<Side>,
        /// Run the opposite pipeline on the transposed data.
        #[arg(long)]
        dualize: bool,
        #[arg(long)]
        sweep_dim: Option<usize>,
    },
    /// Descent along the base inclusion, for one module or a sweep.
    Descent {
        file: PathBuf,
        #[arg(long, conflicts_with = "sweep_dim")]
        module: Option<String>,
        #[arg(long)]
        sweep_dim: Option<usize>,
    },
    /// Build and verify the quantum category of the bundle.
    Qcat { file: PathBuf },
    /// Run `EXPECT lhs == rhs` lines against the instance.
    Eval { file: PathBuf, exprfile: PathBuf },
    /// Print a built-in instance.
    Export {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(catalog::NAMES))]
        name: String,
    },
    /// Run every `expected.txt` under a corpus directory.
    Corpus { dir: PathBuf },
}

/// Failure to read or understand the input (exit code 2).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

/// What a command produced.
pub enum Output {
    Report { title: String, report: Report },
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let start = Instant::now();
    match execute(&cli.command) {
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
        Ok(Output::Text(t)) => Outcome { stdout: t, stderr: String::new(), code: 0 },
        Ok(Output::Report { title, report }) => {
            let report = report.sorted();
            let failed = report.failures().count();
            let verdict = if failed == 0 { "pass" } else { "fail" };
            let mut out = if cli.machine {
                let mut s = format!("command={title}\n");
                s.push_str(&report.render_machine());
                s.push_str(&format!("summary\tverdict={verdict}\tchecks={}\tfailed={failed}\n", report.checks.len()));
                s
            } else {
                let mut s = format!("# {title}\n");
                s.push_str(&report.render_text());
                s.push_str(&format!("result: {} ({} checks, {failed} failed)\n", verdict.to_uppercase(), report.checks.len()));
                s
            };
            if cli.timings {
                out.push_str(&format!("elapsed_ms: {}\n", start.elapsed().as_millis()));
            }
            Outcome { stdout: out, stderr: String::new(), code: if failed == 0 { 0 } else { 1 } }
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AnyInstance, InputError> {
    parse_instance(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Runs one command; the report is unsorted.
pub fn execute(cmd: &Command) -> Result<Output, InputError> {
    macro_rules! on_instance {
        ($path:expr, $f:expr) => {
            match load($path)? {
                AnyInstance::Rational(i) => $f(&i),
                AnyInstance::Prime(i) => $f(&i),
            }
        };
    }
    match cmd {
        Command::Check { file, what } => on_instance!(file, |i| cmd_check(i, *what)),
        Command::Principal { file, side, dualize, sweep_dim } => {
            on_instance!(file, |i| cmd_principal(i, *side, *dualize, *sweep_dim))
        }
        Command::Descent { file, module, sweep_dim } => {
            on_instance!(file, |i| cmd_descent(i, module.as_deref(), *sweep_dim))
        }
        Command::Qcat { file } => on_instance!(file, cmd_qcat),
        Command::Eval { file, exprfile } => {
            let text = read(exprfile)?;
            let assertions = parse_assertions(&text).map_err(|e| InputError(format!("{}: {e}", exprfile.display())))?;
            on_instance!(file, |i| cmd_eval(i, &assertions))
        }
        Command::Export { name } => {
            catalog::export(name).map(Output::Text).ok_or_else(|| InputError(format!("unknown instance `{name}`")))
        }
        Command::Corpus { dir } => {
            let report = corpus::run_corpus(dir)?;
            Ok(Output::Report { title: format!("corpus {}", dir.display()), report })
        }
    }
}

fn report(title: impl Into<String>, report: Report) -> Result<Output, InputError> {
    Ok(Output::Report { title: title.into(), report })
}

fn bundle_of<F: Field>(inst: &Instance<F>) -> Result<&Bundle<F>, InputError> {
    inst.bundle.as_ref().ok_or_else(|| InputError("the instance has no `bundle` line".into()))
}

pub fn cmd_check<F: Field>(inst: &Instance<F>, what: What) -> Result<Output, InputError> {
    let mut r = Report::new();
    let wants = |w: What| what == What::All || what == w;
    if wants(What::Hopf) {
        for (name, h) in &inst.hopfs {
            r.absorb(&format!("hopf.{name}"), check_hopf(h));
            r.absorb(&format!("hopf.{name}"), check_antipode_anti_morphism(h));
        }
    }
    if wants(What::Comodule) {
        for (name, x) in &inst.comodule_algebras {
            r.absorb(&format!("comodule_algebra.{name}"), check_comodule_algebra(x));
        }
    }
    if wants(What::ModuleCoalgebra) {
        for (name, x) in &inst.module_coalgebras {
            r.absorb(&format!("module_coalgebra.{name}"), check_module_coalgebra(x));
        }
    }
    if what == What::All {
        for (name, a) in &inst.algebras {
            r.absorb(&format!("algebra.{name}"), check_algebra(a));
        }
        for (name, c) in &inst.coalgebras {
            r.absorb(&format!("coalgebra.{name}"), check_coalgebra(c));
        }
        if let Some(Bundle::Algebra(b)) = &inst.bundle {
            for (name, (_, m)) in &inst.modules {
                r.absorb(&format!("module.{name}"), check_right_module(m, &b.base));
            }
        }
    }
    if r.checks.is_empty() {
        return Err(InputError(format!("nothing to check for --what {}", what.to_possible_value().expect("named").get_name())));
    }
    report(format!("check --what {}", what.to_possible_value().expect("named").get_name()), r)
}

pub fn cmd_principal<F: Field>(
    inst: &Instance<F>,
    side: Option<Side>,
    dualize: bool,
    sweep_dim: Option<usize>,
) -> Result<Output, InputError> {
    let declared = bundle_of(inst)?;
    let mut b = match (side, declared) {
        (Some(Side::Algebra), Bundle::Comonoid(_)) | (Some(Side::Comonoid), Bundle::Algebra(_)) => declared.dualize(),
        _ => declared.clone(),
    };
    if dualize {
        b = b.dualize();
    }
    let mut r = b.check_principal();
    if let Some(d) = sweep_dim {
        let cfg = SweepConfig { max_dim: d, ..SweepConfig::default() };
        r.absorb("", descent_sweep(&b.as_algebra(), &cfg).1);
    }
    report(format!("principal --side {}{}", b.side(), if dualize { " (dualized)" } else { "" }), r)
}

pub fn cmd_descent<F: Field>(inst: &Instance<F>, module: Option<&str>, sweep_dim: Option<usize>) -> Result<Output, InputError> {
    let alg = bundle_of(inst)?.as_algebra();
    let mut r = faithful_flatness(&alg);
    let title = match module {
        Some(name) => {
            let (_, v) = inst.modules.get(name).ok_or_else(|| InputError(format!("no module named `{name}`")))?;
            let axioms = check_right_module(v, &alg.base);
            let ok = axioms.passed();
            r.absorb(&format!("module.{name}"), axioms);
            if ok {
                r.absorb("", descent_report(&alg, v));
            }
            format!("descent --module {name}")
        }
        None => {
            let cfg = SweepConfig { max_dim: sweep_dim.unwrap_or(3), ..SweepConfig::default() };
            r.absorb("", descent_sweep(&alg, &cfg).1);
            format!("descent --sweep-dim {}", cfg.max_dim)
        }
    };
    report(title, r)
}

pub fn cmd_qcat<F: Field>(inst: &Instance<F>) -> Result<Output, InputError> {
    let co = bundle_of(inst)?.as_comonoid();
    report("qcat", quantum_category_report(&co))
}

/// Every named space and structure of the instance, plus `can_pre`, the
/// composite that `can` is factored from, when a bundle is present.
pub fn environment<F: Field>(inst: &Instance<F>) -> Result<Environment<F>, InputError> {
    let e = |x: hgl_core::dsl::DslError| InputError(x.to_string());
    let mut env = Environment::new(inst.grading.clone());
    for (n, v) in &inst.spaces {
        env.add_space(n, v.clone()).map_err(e)?;
    }
    for (n, h) in &inst.hopfs {
        env.add_hopf(n, h).map_err(e)?;
    }
    for (n, a) in &inst.algebras {
        env.add_algebra(n, a.clone()).map_err(e)?;
    }
    for (n, c) in &inst.coalgebras {
        env.add_coalgebra(n, c.clone()).map_err(e)?;
    }
    for (n, x) in &inst.comodule_algebras {
        env.add_coaction(n, x.coaction.clone()).map_err(e)?;
    }
    for (n, x) in &inst.module_coalgebras {
        env.add_action(n, x.action.clone()).map_err(e)?;
    }
    for (n, (_, m)) in &inst.modules {
        env.add_action(n, m.action.clone()).map_err(e)?;
    }
    for (n, f) in &inst.morphisms {
        env.add_morphism(n, f.clone()).map_err(e)?;
    }
    if let Some(b) = &inst.bundle {
        let pre = match b {
            Bundle::Algebra(x) => x.can_precomposite(),
            Bundle::Comonoid(x) => x.can_precomposite(),
        };
        if let Ok(f) = pre {
            env.add_morphism("can_pre", f).map_err(e)?;
        }
    }
    Ok(env)
}

pub fn cmd_eval<F: Field>(inst: &Instance<F>, assertions: &[hgl_core::dsl::Assertion]) -> Result<Output, InputError> {
    let env = environment(inst)?;
    report("eval", run_assertions(assertions, &env))
}
