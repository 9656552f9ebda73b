//! Command-line driver.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 Lagrangian and stored
//! system disagree, 3 no critical dilation, 4 verification failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, AnalysisError};
use crate::catalog::{self, CatalogEntry};
use crate::dsl::{self, parse_expr, render_model, Scope};
use crate::expr::{ExprError, RatFunc};
use crate::model::ModelSpec;
use crate::noether::NoetherError;
use crate::report::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_NOT_CRITICAL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "critsym", version, about = "Scaling criticality and Pokhozhaev identities for variational models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Source {
    /// Model file.
    file: Option<PathBuf>,
    /// Built-in catalog model.
    #[arg(long, conflicts_with = "file")]
    model: Option<String>,
    /// Parameter values, e.g. `n=3,p=5`.
    #[arg(long, value_delimiter = ',')]
    dim: Vec<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Latex,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Latex => Format::Latex,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the critical dilation and report the conditions.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Check the Noether identity on random exact jets.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Assemble the Pokhozhaev identity of the critical dilation.
    Pokhozhaev {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// List the built-in models or run the full regression.
    Catalog {
        #[arg(long, conflicts_with = "all")]
        list: bool,
        #[arg(long)]
        all: bool,
    },
    /// Interpolate a critical value from runs at several dimensions.
    Reconstruct {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "n")]
        param: String,
        /// Inclusive range such as `3..8`, or a list `3,4,5`.
        #[arg(long, default_value = "3..8")]
        dims: String,
    },
    /// Print a catalog model as a model file, or write all of them to a directory.
    Export {
        #[arg(long, conflicts_with = "dir")]
        model: Option<String>,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Failure {
        Failure { code, message: message.to_string() }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Failure {
        let code = match &e {
            AnalysisError::SystemMismatch(_) => EXIT_MISMATCH,
            AnalysisError::Expr(ExprError::DomainViolation { .. } | ExprError::AssumptionViolated(_)) => EXIT_PARSE,
            AnalysisError::NoCriticalDilation | AnalysisError::Noether(NoetherError::NotVariational(_)) => {
                EXIT_NOT_CRITICAL
            }
            _ => EXIT_VERIFY,
        };
        Failure::new(code, e)
    }
}

impl From<catalog::CatalogError> for Failure {
    fn from(e: catalog::CatalogError) -> Failure {
        Failure::new(EXIT_PARSE, e)
    }
}

struct Loaded {
    spec: ModelSpec,
    entry: Option<CatalogEntry>,
    values: BTreeMap<String, RatFunc>,
}

fn load(src: &Source) -> Result<Loaded, Failure> {
    let (spec, entry) = match (&src.file, &src.model) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            let spec =
                dsl::parse_model(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}:{e}", path.display())))?;
            (spec, None)
        }
        (None, Some(name)) => {
            let e = catalog::model(name)?;
            (e.spec.clone(), Some(e))
        }
        (None, None) => return Err(Failure::new(EXIT_PARSE, "give a model file or --model NAME")),
    };
    let scope = Scope::from_model(&spec);
    let mut values = BTreeMap::new();
    for item in src.dim.iter().filter(|s| !s.is_empty()) {
        let (k, v) =
            item.split_once('=').ok_or_else(|| Failure::new(EXIT_PARSE, format!("expected NAME=VALUE, got {item}")))?;
        let v = parse_expr(v.trim(), &scope)
            .ok()
            .and_then(|e| e.as_constant())
            .filter(|r| r.is_constant())
            .ok_or_else(|| Failure::new(EXIT_PARSE, format!("{k}: value must be a number")))?;
        values.insert(k.trim().to_string(), v);
    }
    Ok(Loaded { spec, entry, values })
}

/// Catalog instance values overridden by explicit ones.
fn with_instance(l: &Loaded) -> BTreeMap<String, RatFunc> {
    let mut v = l.entry.as_ref().map(|e| e.instance.clone()).unwrap_or_default();
    v.extend(l.values.clone());
    v
}

fn parse_dims(s: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::new(EXIT_PARSE, format!("bad dimension list {s}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn analyze_cmd(src: &Source, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(src)?;
    let a = analysis::analyze(&l.spec, &l.values, false)?;
    let mut code = if a.checks.any_failed() { EXIT_VERIFY } else { EXIT_OK };
    let _ = write!(out, "{}", Report::new(&a).render(format));
    if !l.values.is_empty() && format == Format::Text {
        // Concrete run against the symbolic solution at the same values.
        let sym = analysis::analyze(&l.spec, &BTreeMap::new(), false)?;
        let agree = sym.condition.constraints.iter().filter_map(|c| c.solved.as_ref()).all(|(t, v)| {
            match (v.subst(&l.values), l.values.get(&t.param)) {
                (Some(sv), Some(given)) => &(given + &RatFunc::int(t.offset)) == &sv,
                _ => true,
            }
        });
        let _ = writeln!(out, "cross-check with symbolic solution: {}", if agree { "pass" } else { "fail" });
        if !agree {
            code = EXIT_VERIFY;
        }
    }
    Ok(code)
}

fn verify_cmd(src: &Source, seed: u64, trials: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(src)?;
    let values = with_instance(&l);
    let r = analysis::verify(&l.spec, &values, trials, seed)?;
    let verdict = if r.passed() { "pass" } else { "fail" };
    let _ = writeln!(
        out,
        "{}: noether identity {verdict}, {} trials, {} failures, max error {}{}",
        l.spec.name,
        r.trials,
        r.failures,
        r.max_relative_error,
        if r.exact { " (exact)" } else { "" }
    );
    Ok(if r.passed() { EXIT_OK } else { EXIT_VERIFY })
}

fn pokhozhaev_cmd(src: &Source, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(src)?;
    let a = analysis::analyze(&l.spec, &l.values, true)?;
    let _ = write!(out, "{}", Report::new(&a).render(format));
    Ok(if a.checks.any_failed() { EXIT_VERIFY } else { EXIT_OK })
}

fn catalog_cmd(list: bool, all: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    if list || !all {
        for n in catalog::list_models() {
            let _ = writeln!(out, "{n}");
        }
        return Ok(EXIT_OK);
    }
    let start = Instant::now();
    let entries = catalog::all()?;
    let checks = catalog::check_all(&entries);
    let mut ok = true;
    let _ = writeln!(out, "{:<32} {:<6} condition", "model", "result");
    let row = |c: &catalog::EntryCheck, out: &mut dyn Write| {
        let verdict = if c.passed() { "pass" } else { "FAIL" };
        let cond = c.error.clone().unwrap_or_else(|| c.condition.clone());
        let _ = writeln!(out, "{:<32} {verdict:<6} {cond}", c.name);
    };
    for c in &checks {
        ok &= c.passed();
        row(c, out);
        if let Some(p) = &c.power {
            row(p, out);
        }
    }
    let _ = writeln!(out, "{} models in {:.1} s", checks.len(), start.elapsed().as_secs_f64());
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn reconstruct_cmd(src: &Source, param: &str, dims: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(src)?;
    let dims = parse_dims(dims)?;
    let (f, samples) = analysis::reconstruct(&l.spec, param, &dims)?;
    for (d, v) in &samples {
        let _ = writeln!(out, "{param} = {d}: {}", RatFunc::constant(v.clone()));
    }
    let _ = writeln!(out, "reconstructed: {f}");
    let sym = analysis::analyze(&l.spec, &BTreeMap::new(), false)?;
    let expected = l
        .spec
        .targets
        .iter()
        .find_map(|t| sym.condition.solved_exponent(&t.param).cloned())
        .or_else(|| sym.condition.functional_conditions.first().map(|c| c.degree.clone()));
    let agree = expected.as_ref().map_or(true, |e| e == &f);
    let _ = writeln!(out, "symbolic: {}", expected.map_or("none".to_string(), |e| e.to_string()));
    Ok(if agree { EXIT_OK } else { EXIT_VERIFY })
}

fn export_cmd(model: &Option<String>, dir: &Option<PathBuf>, out: &mut dyn Write) -> Result<i32, Failure> {
    match (model, dir) {
        (Some(name), _) => {
            let _ = write!(out, "{}", render_model(&catalog::model(name)?.spec));
        }
        (None, Some(dir)) => {
            std::fs::create_dir_all(dir).map_err(|e| Failure::new(EXIT_PARSE, e))?;
            for e in catalog::all()? {
                let mut specs = vec![e.spec.clone()];
                specs.extend(e.power.map(|p| p.spec));
                for s in specs {
                    let path = dir.join(format!("{}.model", s.name));
                    std::fs::write(&path, render_model(&s)).map_err(|e| Failure::new(EXIT_PARSE, e))?;
                    let _ = writeln!(out, "{}", path.display());
                }
            }
        }
        (None, None) => return Err(Failure::new(EXIT_PARSE, "give --model NAME or --dir DIR")),
    }
    Ok(EXIT_OK)
}

/// Run the command line `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Analyze { source, format } => analyze_cmd(source, (*format).into(), out),
        Command::Verify { source, seed, trials } => verify_cmd(source, *seed, *trials, out),
        Command::Pokhozhaev { source, format } => pokhozhaev_cmd(source, (*format).into(), out),
        Command::Catalog { list, all } => catalog_cmd(*list, *all, out),
        Command::Reconstruct { source, param, dims } => reconstruct_cmd(source, param, dims, out),
        Command::Export { model, dir } => export_cmd(model, dir, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
