//! The `qlap` command line.

pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cyclo::{Ambient, RootSpec};
use crate::error::Error;
use crate::invariants::{self, Basis, HabiroElem, SurgeryPresentation};

#[derive(Parser, Debug)]
#[command(
    name = "qlap",
    version,
    about = "Universal sl2 invariants of 3-manifolds at roots of unity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the truncated universal series.
    Compute {
        #[command(flatten)]
        manifold: ManifoldArgs,
        /// Expected basis; rejected if the manifold needs the other one.
        #[arg(long, value_enum)]
        basis: Option<BasisArg>,
        /// Number of series terms.
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Evaluate τ' exactly at v = ζ_N^j.
    Eval {
        #[command(flatten)]
        manifold: ManifoldArgs,
        /// Order N of v.
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 1)]
        primitive: i64,
        /// Parity ε of the refinement.
        #[arg(long)]
        refined: Option<u8>,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Compare universal values with brute-force state sums.
    Compare {
        #[command(flatten)]
        manifold: ManifoldArgs,
        /// Orders of v, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
        /// Compare both refinements instead of the plain invariant.
        #[arg(long)]
        refined: bool,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        out: Output,
    },
    /// Run an identity suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 25)]
        kmax: u32,
        #[arg(long, default_value_t = 32)]
        rmax: u32,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        out: Output,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ManifoldArgs {
    /// Built-in manifold name.
    #[arg(long, conflicts_with = "manifold")]
    pub builtin: Option<String>,
    /// Framing for lens-b-1.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<i64>,
    /// Path to a manifold JSON description.
    #[arg(long)]
    pub manifold: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisArg {
    Zhs,
    M2,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    LaplaceTables,
    Taylor,
    Integrality,
}

impl ManifoldArgs {
    fn load(&self) -> Result<(String, SurgeryPresentation), Error> {
        match (&self.builtin, &self.manifold) {
            (Some(name), None) => Ok((name.clone(), invariants::builtin(name, self.b)?)),
            (None, Some(path)) => {
                let s = std::fs::read_to_string(path)?;
                Ok((
                    path.display().to_string(),
                    invariants::manifold_from_json(&s)?,
                ))
            }
            _ => Err(Error::Usage(
                "give exactly one of --builtin or --manifold".into(),
            )),
        }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let mut stdout = std::io::stdout().lock();
    match execute(&cli.command, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("QLAP_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn write_json(w: &mut dyn Write, v: &serde_json::Value) -> Result<(), Error> {
    writeln!(w, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

/// Executes a parsed command, writing to `w`.
pub fn execute(cmd: &Command, w: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Compute {
            manifold,
            basis,
            terms,
            out,
        } => {
            let (name, l) = manifold.load()?;
            let series = invariants::universal_series(&l, *terms)?;
            let wanted = basis.map(|b| match b {
                BasisArg::Zhs => Basis::Zhs,
                BasisArg::M2 => Basis::M2,
            });
            if wanted.is_some_and(|b| b != series.basis) {
                return Err(Error::Usage(format!(
                    "{name} has a universal series in the {:?} basis",
                    format!("{:?}", series.basis).to_uppercase()
                )));
            }
            match out {
                Output::Json => write_json(
                    w,
                    &json!({"schema": "1", "manifold": name, "series": series}),
                )?,
                Output::Text => write_series_text(w, &name, &series)?,
            }
            Ok(0)
        }
        Command::Eval {
            manifold,
            order,
            primitive,
            refined,
            out,
        } => {
            let (name, l) = manifold.load()?;
            if refined.is_some_and(|e| e > 1) {
                return Err(Error::Usage("--refined takes 0 or 1".into()));
            }
            let root = RootSpec::new(*order, *primitive)?;
            let value = invariants::evaluate(&l, root, *refined)?;
            let (re, im) = value.to_complex();
            match out {
                Output::Json => write_json(
                    w,
                    &json!({
                        "schema": "1",
                        "manifold": name,
                        "order": order,
                        "primitive": root.primitive(),
                        "refined": refined,
                        "value": value,
                        "algebraic_integer": value.is_algebraic_integer(),
                        "approx": [re, im],
                    }),
                )?,
                Output::Text => {
                    writeln!(w, "{name} at v = ζ_{order}^{}: {value}", root.primitive())?;
                    writeln!(w, "algebraic integer: {}", value.is_algebraic_integer())?;
                    writeln!(w, "approx: {re:.12} {im:+.12}i")?;
                }
            }
            Ok(0)
        }
        Command::Compare {
            manifold,
            orders,
            refined,
            out,
        } => {
            let (name, l) = manifold.load()?;
            let mut rows = Vec::new();
            let mut all = true;
            for &n in orders {
                let epsilons: Vec<Option<u8>> = if *refined {
                    vec![Some(0), Some(1)]
                } else {
                    vec![None]
                };
                for eps in epsilons {
                    let (u, b) = invariants::compare_at(&l, n, 1, eps)?;
                    let pass = u == b;
                    all &= pass;
                    rows.push((n, eps, pass, u, b));
                }
            }
            match out {
                Output::Json => {
                    let items: Vec<_> = rows
                        .iter()
                        .map(|(n, eps, pass, u, b)| {
                            json!({"order": n, "refined": eps, "pass": pass, "universal": u, "brute_force": b})
                        })
                        .collect();
                    write_json(
                        w,
                        &json!({"schema": "1", "manifold": name, "results": items, "pass": all}),
                    )?;
                }
                Output::Text => {
                    for (n, eps, pass, u, b) in &rows {
                        let tag = if *pass { "PASS" } else { "FAIL" };
                        let eps = eps.map_or(String::new(), |e| format!(" ε={e}"));
                        writeln!(w, "{tag} {name} N={n}{eps}")?;
                        if !pass {
                            writeln!(w, "  universal:   {u}")?;
                            writeln!(w, "  brute force: {b}")?;
                        }
                    }
                }
            }
            Ok(if all { 0 } else { 1 })
        }
        Command::Verify {
            suite,
            kmax,
            rmax,
            out,
        } => {
            let report = match suite {
                Suite::Lemmas => verify::lemmas(*kmax),
                Suite::LaplaceTables => verify::laplace_tables(*rmax, 16, 20),
                Suite::Taylor => verify::taylor(12, 6),
                Suite::Integrality => verify::integrality(*rmax),
            };
            let all = report.iter().all(|c| c.pass);
            match out {
                Output::Json => {
                    let items: Vec<_> = report
                        .iter()
                        .map(|c| json!({"check": c.name, "pass": c.pass, "detail": c.detail}))
                        .collect();
                    write_json(
                        w,
                        &json!({"schema": "1", "suite": format!("{suite:?}"), "checks": items, "pass": all}),
                    )?;
                }
                Output::Text => {
                    for c in &report {
                        let tag = if c.pass { "PASS" } else { "FAIL" };
                        if c.detail.is_empty() {
                            writeln!(w, "{tag} {}", c.name)?;
                        } else {
                            writeln!(w, "{tag} {} ({})", c.name, c.detail)?;
                        }
                    }
                }
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn write_series_text(w: &mut dyn Write, name: &str, e: &HabiroElem) -> Result<(), Error> {
    writeln!(w, "{name}: basis {:?}, {} terms", e.basis, e.coeffs.len())?;
    for (n, a) in e.coeffs.iter().enumerate() {
        writeln!(w, "a_{n} = {a}")?;
    }
    Ok(())
}

/// Orders of v (odd, or divisible by 4) up to `nmax`.
pub fn admissible_orders(nmin: u32, nmax: u32) -> Vec<u32> {
    (nmin..=nmax)
        .filter(|n| n % 4 != 2 && Ambient::from_v(RootSpec::new(*n, 1).unwrap()).is_ok())
        .collect()
}
