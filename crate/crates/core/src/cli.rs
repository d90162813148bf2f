//! Command-line front end.
//!
//! Exit status is 0 whenever a command ran to completion, including searches
//! that found nothing; 2 for usage errors and rejected input (unreadable
//! files, parse errors, bad parameters); 1 for internal invariant
//! violations.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use crate::compiler::{
    compile_quadratic, compile_terms, degree_reduce, nonneg_encode, restrict, system_to_terms, AllocationMode,
    Compilation, SignMode,
};
use crate::constexpr::ConstExpr;
use crate::error::Error;
use crate::format::{
    format_assignment, format_witness, parse_instance, parse_system, parse_witness, print_instance, print_system,
};
use crate::group::{evaluate_kp, KpInstance};
use crate::matrix::rho_normal_form;
use crate::poly::DiophantineSystem;
use crate::solvers::{
    bounded_solve_kp, bounded_solve_system, heisenberg_reduce, heisenberg_search, HeisenbergOutcome, SearchBox,
};
use crate::symbolic::kp_to_system;
use crate::universal::{jones_system, resource_report, UniversalParams};

#[derive(Debug, Parser)]
#[command(name = "nilkp", version, about = "Knapsack problems in free class-2 nilpotent groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a Diophantine system into a knapsack instance.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Use the computation-tree encoding instead of the quadratic one.
        #[arg(long)]
        term_mode: bool,
        /// Restrict every variable to positive values.
        #[arg(long, conflicts_with = "nonnegative")]
        positive: bool,
        /// Restrict every variable to nonnegative values.
        #[arg(long)]
        nonnegative: bool,
        /// Share letters and commutators between gadgets (experimental).
        #[arg(long)]
        packed: bool,
    },
    /// Write the Diophantine system equivalent to a knapsack instance.
    Derive {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search a system or an instance for its least solution in a box.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check an exponent vector against an instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness: String,
    },
    /// Write the unitriangular matrices of all inputs and the target.
    Embed {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate the universal system for the given parameters.
    Jones {
        #[arg(long)]
        x: BigInt,
        #[arg(long)]
        z: BigInt,
        #[arg(long)]
        y: BigInt,
        #[arg(long)]
        u: BigInt,
        /// Replace the exponent 5^59 by a small value.
        #[arg(long)]
        toy_exponent: Option<BigInt>,
        #[arg(long)]
        out: PathBuf,
        /// Compile the system and print resource counts.
        #[arg(long)]
        report: bool,
    },
    /// Reduce a rank-2 instance to one quadratic equation and search it.
    Heis {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bound: i64,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn is_instance(text: &str) -> bool {
    text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("rank:"))
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Reduce { input, out: path, term_mode, positive, nonnegative, packed } => {
            let sign = match (positive, nonnegative) {
                (true, _) => Some(SignMode::Positive),
                (_, true) => Some(SignMode::Nonnegative),
                _ => None,
            };
            let mode = if packed { AllocationMode::Packed } else { AllocationMode::FreshPairs };
            let system = parse_system(&read(&input)?)?.materialize()?;
            let compiled = reduce(&system, term_mode, sign, mode)?;
            write(&path, &print_instance(&compiled.instance))?;
            writeln!(
                out,
                "wrote {} inputs over {} generators to {}",
                compiled.instance.len(),
                compiled.instance.rank,
                path.display()
            )?;
        }
        Command::Derive { input, out: path } => {
            let instance = parse_instance(&read(&input)?)?;
            let system = kp_to_system(&instance);
            write(&path, &print_system(&system))?;
            writeln!(out, "wrote {} equations to {}", system.equations.len(), path.display())?;
        }
        Command::Solve { input, bound, jobs } => {
            let text = read(&input)?;
            let line = if is_instance(&text) {
                solve_instance(&parse_instance(&text)?, bound, jobs)?
            } else {
                solve_system(&parse_system(&text)?.materialize()?, bound, jobs)?
            };
            writeln!(out, "{line}")?;
        }
        Command::Verify { input, witness } => {
            let instance = parse_instance(&read(&input)?)?;
            let eps = parse_witness(witness.trim(), instance.len())?;
            let (product, ok) = evaluate_kp(&instance, &eps)?;
            let residual = instance.target.inverse().multiply(&product)?;
            writeln!(out, "{ok}")?;
            writeln!(out, "residual: {residual}")?;
            writeln!(out, "product: {product}")?;
        }
        Command::Embed { input, out: path } => {
            let instance = parse_instance(&read(&input)?)?;
            let mut text = String::new();
            for (i, g) in instance.inputs.iter().enumerate() {
                text.push_str(&format!("# g{}\n{}", i + 1, rho_normal_form(g)));
            }
            text.push_str(&format!("# g\n{}", rho_normal_form(&instance.target)));
            write(&path, &text)?;
            writeln!(
                out,
                "wrote {} matrices of size {} to {}",
                instance.len() + 1,
                2 * instance.rank + 1,
                path.display()
            )?;
        }
        Command::Jones { x, z, y, u, toy_exponent, out: path, report } => {
            let params = UniversalParams {
                x: ConstExpr::Lit(x),
                z: ConstExpr::Lit(z),
                y: ConstExpr::Lit(y),
                u: ConstExpr::Lit(u),
                toy_exponent,
            };
            let system = jones_system(&params)?;
            write(&path, &print_system(&system))?;
            writeln!(
                out,
                "wrote {} equations in {} variables to {}",
                system.equations.len(),
                system.variables.len(),
                path.display()
            )?;
            if report {
                let compiled = compile_quadratic(&system, AllocationMode::FreshPairs)?;
                write!(out, "{}", resource_report(&system, &compiled))?;
            }
        }
        Command::Heis { input, bound } => {
            let instance = parse_instance(&read(&input)?)?;
            let reduction = heisenberg_reduce(&instance)?;
            let params =
                if reduction.parameters.is_empty() { "none".to_string() } else { reduction.parameters.join(" ") };
            writeln!(out, "parameters: {params}")?;
            writeln!(out, "equation: {}", reduction.equation.to_text(&reduction.parameters))?;
            match heisenberg_search(&instance, bound)? {
                HeisenbergOutcome::Sat(eps) => writeln!(out, "SAT {}", format_witness(&eps))?,
                HeisenbergOutcome::Unsat => writeln!(out, "UNSAT")?,
                HeisenbergOutcome::Unknown => {
                    writeln!(out, "UNKNOWN: no solution with exponents in [-{0}, {0}]", bound.abs())?
                }
            }
        }
    }
    Ok(())
}

fn reduce(
    system: &DiophantineSystem<BigInt>,
    term_mode: bool,
    sign: Option<SignMode>,
    mode: AllocationMode,
) -> std::result::Result<Compilation<BigInt>, Error> {
    let system = match sign {
        Some(s) => nonneg_encode(system, s),
        None => system.clone(),
    };
    let system = degree_reduce(&system);
    if term_mode {
        compile_terms(&system.variables, &system_to_terms(&system), mode)
    } else {
        compile_quadratic(&system, mode)
    }
}

fn solve_system(system: &DiophantineSystem<BigInt>, bound: i64, jobs: usize) -> std::result::Result<String, Failure> {
    let bx = SearchBox::symmetric(system.variables.len(), bound);
    match bounded_solve_system(system, &bx, jobs) {
        Ok(Some(w)) => Ok(format!("SAT {w}")),
        Ok(None) => Ok("UNSAT-in-box".into()),
        Err(e @ Error::Unenumerable(_)) => Ok(format!("UNKNOWN: {e}")),
        Err(e) => Err(e.into()),
    }
}

/// Slots named by the variable map are searched in `[-bound, bound]`; the
/// others are left to be determined. Without a map every slot is bounded.
fn solve_instance(instance: &KpInstance<BigInt>, bound: i64, jobs: usize) -> std::result::Result<String, Failure> {
    let bx = if instance.variable_map.is_empty() {
        SearchBox::symmetric(instance.len(), bound)
    } else {
        SearchBox::induced(instance, bound)
    };
    match bounded_solve_kp(instance, &bx, jobs) {
        Ok(Some(eps)) => {
            let mut line = format!("SAT {}", format_witness(&eps));
            if !instance.variable_map.is_empty() {
                let values: HashMap<String, BigInt> = restrict(instance, &eps)?;
                let order: Vec<String> = instance.variable_map.iter().map(|b| b.name.clone()).collect();
                line.push_str(&format!("\nvars: {}", format_assignment(&order, &values)));
            }
            Ok(line)
        }
        Ok(None) => Ok("UNSAT-in-box".into()),
        Err(e @ Error::Unenumerable(_)) => Ok(format!("UNKNOWN: {e}")),
        Err(e) => Err(e.into()),
    }
}
