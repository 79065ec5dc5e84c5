//! The `fockgate` command line.
//!
//! Data goes to standard output, errors and parse diagnostics to standard
//! error. Exit codes: 0 when every performed check passes, 1 when a check
//! fails at the configured tolerance, 2 for usage or parse errors.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::dsl;
use crate::elements::TransferMatrix;
use crate::error::{Error, Result};
use crate::fock::{FockBasis, OccupationVector};
use crate::gates::{self, Builtin, VerifyOptions};
use crate::lift::{lift, lift_permanent};
use crate::postselect::EffectiveOperator;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "fockgate",
    version,
    about = "Post-selected linear-optics operators on few-photon Fock states"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a circuit's effective operator with basis labels
    Effop(CommonArgs),
    /// Check every builtin construction against its reference matrix
    Verify(CommonArgs),
    /// Cross-check the two independent basis-lifting algorithms
    Oracle(CommonArgs),
    /// Success probability and post-selected output for an input state
    Prob(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Builtin circuit: s00, s11, core-filter, pol-filter or phase-gate
    #[arg(long, value_name = "NAME", conflicts_with = "circuit")]
    builtin: Option<String>,

    /// Circuit file in the .lop format
    #[arg(long, value_name = "FILE")]
    circuit: Option<PathBuf>,

    /// Reflectivity for builtins that take one (decimal, fraction or pi form)
    #[arg(long = "R", value_name = "NUM")]
    reflectivity: Option<String>,

    /// Photon-number cutoff of the lifted basis
    #[arg(long, value_name = "N", default_value_t = gates::DEFAULT_CUTOFF)]
    cutoff: u32,

    /// Pass/fail tolerance for checks
    #[arg(long, value_name = "X", default_value_t = 1e-10)]
    tol: f64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Input state: polarization letters per qubit ("R,L") or occupations ("0,1")
    #[arg(long, value_name = "STR")]
    input: Option<String>,

    /// Seed for the oracle's random unitaries
    #[arg(long, value_name = "N", default_value_t = 7)]
    seed: u64,
}

/// Parse the process arguments and run. Returns the exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Entry point shared with tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; keep its exit code mapping
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(Error::Parse(diagnostics)) => {
            for d in &diagnostics {
                eprintln!("{d}");
            }
            eprintln!(
                "error: {} parse error(s)",
                diagnostics.iter().filter(|d| d.is_error()).count()
            );
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Effop(args) => cmd_effop(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Oracle(args) => cmd_oracle(&args),
        Command::Prob(args) => cmd_prob(&args),
    }
}

enum Target {
    Builtin(Builtin),
    File(Circuit),
}

impl CommonArgs {
    fn tolerance(&self) -> Result<f64> {
        if self.tol > 0.0 {
            Ok(self.tol)
        } else {
            Err(Error::Usage("tolerance must be positive".into()))
        }
    }

    fn reflectivity_value(&self) -> Result<Option<f64>> {
        match &self.reflectivity {
            None => Ok(None),
            Some(text) => dsl::parse_number(text)
                .map(Some)
                .map_err(Error::Usage),
        }
    }

    fn target(&self) -> Result<Option<Target>> {
        if let Some(name) = &self.builtin {
            let builtin = Builtin::parse(name).ok_or_else(|| {
                Error::Usage(format!(
                    "unknown builtin `{name}` (expected s00, s11, core-filter, pol-filter or phase-gate)"
                ))
            })?;
            if self.reflectivity.is_some() && !builtin.takes_reflectivity() {
                return Err(Error::Usage(format!(
                    "builtin `{name}` does not take --R"
                )));
            }
            return Ok(Some(Target::Builtin(builtin)));
        }
        if let Some(path) = &self.circuit {
            if self.reflectivity.is_some() {
                return Err(Error::Usage(
                    "--R applies to builtin circuits only".into(),
                ));
            }
            let source = std::fs::read_to_string(path)?;
            let circuit = dsl::parse(&source).map_err(Error::Parse)?;
            return Ok(Some(Target::File(circuit)));
        }
        Ok(None)
    }

    fn required_target(&self) -> Result<Target> {
        self.target()?
            .ok_or_else(|| Error::Usage("expected --builtin NAME or --circuit FILE".into()))
    }
}

fn format_real(value: f64) -> String {
    format!("{value:.12}")
}

fn format_complex(value: Complex64) -> String {
    format!("{:.12}{:+.12}i", value.re, value.im)
}

fn print_operator_text(op: &EffectiveOperator, labels: &[String]) {
    let width = labels.iter().map(String::len).max().unwrap_or(0);
    println!("# columns: {}", labels.join(", "));
    for (row, label) in labels.iter().enumerate() {
        let entries: Vec<String> = (0..op.dim())
            .map(|col| format_complex(op.entry(row, col)))
            .collect();
        println!("{label:>width$}  {}", entries.join("  "));
    }
}

fn print_operator_csv(op: &EffectiveOperator, labels: &[String]) {
    println!("row,col,re,im");
    for row in 0..op.dim() {
        for col in 0..op.dim() {
            let z = op.entry(row, col);
            println!("{},{},{:.12e},{:.12e}", labels[row], labels[col], z.re, z.im);
        }
    }
}

/// The operator a target reports, with its row/column labels.
fn target_operator(
    args: &CommonArgs,
    target: &Target,
) -> Result<(EffectiveOperator, Vec<String>)> {
    match target {
        Target::Builtin(builtin) => {
            gates::builtin_operator(*builtin, args.reflectivity_value()?, args.cutoff)
        }
        Target::File(circuit) => {
            let op = circuit.effective_operator(args.cutoff)?;
            let labels = op.states().iter().map(|s| s.to_string()).collect();
            Ok((op, labels))
        }
    }
}

fn cmd_effop(args: &CommonArgs) -> Result<i32> {
    let target = args.required_target()?;
    let (op, labels) = target_operator(args, &target)?;
    match args.format {
        Format::Text => print_operator_text(&op, &labels),
        Format::Csv => print_operator_csv(&op, &labels),
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &CommonArgs) -> Result<i32> {
    let tolerance = args.tolerance()?;
    let phase_gate_reflectivity = args
        .reflectivity_value()?
        .unwrap_or(gates::DEFAULT_PHASE_GATE_REFLECTIVITY);
    let reports = gates::verify_all(&VerifyOptions {
        cutoff: args.cutoff,
        phase_gate_reflectivity,
    })?;

    let mut all_pass = true;
    match args.format {
        Format::Text => {
            println!("{:<22}{:>15}  result", "check", "max_abs_error");
            for report in &reports {
                let pass = report.passes(tolerance);
                all_pass &= pass;
                println!(
                    "{:<22}{:>15.3e}  {}",
                    report.name,
                    report.max_abs_error,
                    if pass { "pass" } else { "FAIL" }
                );
            }
            let passed = reports.iter().filter(|r| r.passes(tolerance)).count();
            println!(
                "{} of {} checks passed at tolerance {:e}",
                passed,
                reports.len(),
                tolerance
            );
        }
        Format::Csv => {
            println!("name,max_abs_error,pass");
            for report in &reports {
                let pass = report.passes(tolerance);
                all_pass &= pass;
                println!("{},{:.3e},{}", report.name, report.max_abs_error, pass);
            }
        }
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_oracle(args: &CommonArgs) -> Result<i32> {
    let tolerance = args.tolerance()?;
    let mut rows: Vec<(String, f64)> = Vec::new();

    let circuits: Vec<(String, Circuit)> = match args.target()? {
        Some(Target::Builtin(builtin)) => vec![(
            format!("builtin {}", builtin.name()),
            builtin.circuit(args.reflectivity_value()?)?,
        )],
        Some(Target::File(circuit)) => vec![("circuit file".to_string(), circuit)],
        None => Builtin::ALL
            .iter()
            .map(|b| Ok((format!("builtin {}", b.name()), b.circuit(None)?)))
            .collect::<Result<_>>()?,
    };

    for (name, circuit) in &circuits {
        let transfer = circuit.transfer_matrix()?;
        let basis = Arc::new(FockBasis::new(circuit.modes(), args.cutoff)?);
        let a = lift(&transfer, &basis)?;
        let b = lift_permanent(&transfer, &basis)?;
        rows.push((name.clone(), a.max_entry_difference(&b)?));
    }

    // Seeded random unitaries on small bases.
    let samples = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut random_worst: f64 = 0.0;
    for k in 0..samples {
        let modes = 1 + (k % 3);
        let cutoff = args.cutoff.min(1 + (k as u32 % 3));
        let transfer = TransferMatrix::random_unitary(modes, &mut rng);
        let basis = Arc::new(FockBasis::new(modes, cutoff)?);
        let a = lift(&transfer, &basis)?;
        let b = lift_permanent(&transfer, &basis)?;
        random_worst = random_worst.max(a.max_entry_difference(&b)?);
    }
    rows.push((
        format!("random unitaries ({samples} samples, seed {})", args.seed),
        random_worst,
    ));

    let overall = rows.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    let pass = overall < tolerance;
    match args.format {
        Format::Text => {
            for (name, discrepancy) in &rows {
                println!("{name}: max discrepancy {discrepancy:.3e}");
            }
            println!(
                "overall max discrepancy {:.3e} (tolerance {:e}): {}",
                overall,
                tolerance,
                if pass { "pass" } else { "FAIL" }
            );
        }
        Format::Csv => {
            println!("source,max_discrepancy");
            for (name, discrepancy) in &rows {
                println!("{name},{discrepancy:.3e}");
            }
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Parse the input mini-language against an operator's state list: either one
/// polarization letter per qubit (H, V, R, L, +, -) or a raw occupation.
fn parse_input_state(
    text: &str,
    op: &EffectiveOperator,
    encoding: Option<&gates::PolarizationEncoding>,
) -> Result<DVector<Complex64>> {
    let tokens: Vec<&str> = text.split(',').map(str::trim).collect();
    let letters: Option<Vec<char>> = tokens
        .iter()
        .map(|t| {
            let mut chars = t.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if matches!(c, 'H' | 'V' | 'R' | 'L' | '+' | '-') => Some(c),
                _ => None,
            }
        })
        .collect();
    if let Some(letters) = letters {
        let encoding = encoding.ok_or_else(|| {
            Error::Usage("polarization letters need a qubit-encoded builtin".into())
        })?;
        return encoding.amplitudes_from_labels(&letters);
    }
    let counts: Vec<u32> = tokens
        .iter()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Error::BadInputState(text.to_string()))
        })
        .collect::<Result<_>>()?;
    let occ = OccupationVector::new(counts);
    let index = op
        .index_of(&occ)
        .ok_or_else(|| Error::UnknownState(occ.to_string()))?;
    let mut amps = DVector::zeros(op.dim());
    amps[index] = Complex64::new(1.0, 0.0);
    Ok(amps)
}

fn cmd_prob(args: &CommonArgs) -> Result<i32> {
    let target = args.required_target()?;
    let (op, labels) = target_operator(args, &target)?;

    let encoding = match &target {
        Target::Builtin(b) => b.encoding(),
        Target::File(_) => None,
    };
    let amplitudes = match &args.input {
        Some(text) => parse_input_state(text, &op, encoding.as_ref())?,
        None => match &target {
            Target::File(circuit) if !circuit.declared_inputs().is_empty() => {
                let occ = &circuit.declared_inputs()[0];
                let index = op
                    .index_of(occ)
                    .ok_or_else(|| Error::UnknownState(occ.to_string()))?;
                let mut amps = DVector::zeros(op.dim());
                amps[index] = Complex64::new(1.0, 0.0);
                amps
            }
            _ => {
                return Err(Error::Usage(
                    "expected --input STR (or a circuit file with an `input` line)".into(),
                ))
            }
        },
    };

    let tolerance = args.tolerance()?;
    let probability = op.success_probability(&amplitudes)?;
    let output = op.apply(&amplitudes)?;
    // Treat post-selected amplitudes below the tolerance as an exact zero
    // branch; "normalizing" numerical noise would print garbage.
    let succeeds = probability > tolerance * tolerance;
    match args.format {
        Format::Text => {
            println!("success probability: {}", format_real(probability));
            if succeeds {
                println!("output state (normalized):");
                let norm = Complex64::new(output.norm(), 0.0);
                let width = labels.iter().map(String::len).max().unwrap_or(0);
                for (i, label) in labels.iter().enumerate() {
                    println!("{label:>width$}  {}", format_complex(output[i] / norm));
                }
            } else {
                println!("output state: none (post-selection never succeeds on this input)");
            }
        }
        Format::Csv => {
            println!("quantity,value");
            println!("success_probability,{probability:.12e}");
            if succeeds {
                let norm = Complex64::new(output.norm(), 0.0);
                for (i, label) in labels.iter().enumerate() {
                    let z = output[i] / norm;
                    println!("amp[{label}],{:.12e}{:+.12e}i", z.re, z.im);
                }
            }
        }
    }
    Ok(EXIT_OK)
}
