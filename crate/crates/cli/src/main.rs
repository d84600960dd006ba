use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qamin::automaton::{is_finite_automaton, FinitenessVerdict};
use qamin::io::{self, InstanceKind};
use qamin::minimizer::{self, MinimizationOptions};
use qamin::opbasis::comp_op_basis;
use qamin::oracle::{self, OracleConfig};
use qamin::superop::conj_superop;
use qamin::{QuantumAutomaton, Result, Strategy, Tolerance, Word};

/// Simulate quantum automata and minimize their qubit count.
#[derive(Parser, Debug)]
#[command(name = "qamin", version)]
struct Cli {
    /// Disable data-parallel kernels.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the output distribution after reading a word.
    Run {
        file: PathBuf,
        /// Symbols separated by commas or spaces, or concatenated when
        /// unambiguous. An empty string is the empty word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Search for an equivalent automaton on fewer qubits.
    Minimize {
        file: PathBuf,
        /// Where to write the reduced automaton.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        /// Compare behaviors up to this word length; 0 skips the check.
        #[arg(long, default_value_t = 4)]
        verify_len: usize,
        /// Skip the product-factorization shortcut.
        #[arg(long)]
        no_sober: bool,
    },
    /// Report letter periods and a finiteness verdict.
    CheckFinite {
        file: PathBuf,
        /// Largest period searched [default: max(4^n, 1024)].
        #[arg(long)]
        max_period: Option<usize>,
        /// Report "infinite" when some letter has no period up to 4^n.
        #[arg(long)]
        trust_period_bound: bool,
    },
    /// Compare two automata on every word up to a length.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Generate a seeded random instance.
    Gen {
        /// product, entangling or random
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        seed: u64,
        /// Alphabet size.
        #[arg(long, default_value_t = 2)]
        letters: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force reference computations.
    #[command(hide = true)]
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

fn tolerance(tol: Option<f64>) -> Result<Tolerance> {
    match tol {
        Some(t) => Tolerance::new(t, t),
        None => Ok(Tolerance::default()),
    }
}

fn run_word(m: &QuantumAutomaton, word: &str, out: &mut String) -> Result<()> {
    let w = Word::parse(word, m.alphabet())?;
    let dist = m.output_dist(&m.run_word(&w)?)?;
    let _ = writeln!(out, "word: {w}");
    for (lambda, p) in dist.entries() {
        let _ = writeln!(out, "P({lambda}) = {p:.12}");
    }
    Ok(())
}

fn check_finite(
    m: &QuantumAutomaton,
    max_period: Option<usize>,
    trust: bool,
    out: &mut String,
) -> Result<()> {
    let max_p = max_period.unwrap_or_else(|| (1usize << (2 * m.n())).max(1024));
    let report = is_finite_automaton(m, Some(max_p), trust, Tolerance::default())?;
    for (symbol, period) in &report.periods {
        match period {
            Some(p) => writeln!(out, "letter {symbol}: period {p}"),
            None => writeln!(
                out,
                "letter {symbol}: no period up to {}",
                report.max_period
            ),
        }
        .expect("write to String");
    }
    for (a, b, c) in &report.noncommuting {
        let _ = writeln!(
            out,
            "letters {a} and {b} do not commute (max commutator entry {c:.3e})"
        );
    }
    let verdict = match report.verdict {
        FinitenessVerdict::Finite => "finite",
        FinitenessVerdict::Infinite => "infinite",
        FinitenessVerdict::Unknown => "unknown",
    };
    let _ = writeln!(out, "verdict: {verdict}");
    Ok(())
}

fn oracle_report(m: &QuantumAutomaton, depth: usize, out: &mut String) -> Result<()> {
    let table = oracle::behavior_table(m, depth, &OracleConfig::default())?;
    out.push_str(&table.to_text());
    let fast = m.behavior(depth)?;
    let mut worst: f64 = 0.0;
    for (row, (_, dist)) in table.rows.iter().zip(&fast) {
        for ((_, p), (_, q)) in row.probabilities.iter().zip(dist.entries()) {
            worst = worst.max((p - q).abs());
        }
    }
    let _ = writeln!(out, "behavior fast-path deviation: {worst:.3e}");
    let basis = comp_op_basis(m.n());
    for (symbol, u) in m.letters() {
        let d = conj_superop(u, &basis)?
            .matrix
            .max_abs_diff(&oracle::superop_elementwise(u, &basis));
        let _ = writeln!(out, "superop {symbol} fast-path deviation: {d:.3e}");
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<String> {
    let strategy = if cli.sequential {
        Strategy::Sequential
    } else {
        Strategy::default()
    };
    let mut out = String::new();
    match cli.command {
        Command::Run { file, word, tol } => {
            run_word(&io::load_with(file, tolerance(tol)?)?, &word, &mut out)?;
        }
        Command::Minimize {
            file,
            output,
            tol,
            verify_len,
            no_sober,
        } => {
            let tol = tolerance(tol)?;
            let m = io::load_with(file, tol)?;
            let opts = MinimizationOptions {
                tol,
                verify_len,
                try_sober_first: !no_sober,
                strategy,
                ..Default::default()
            };
            let report = minimizer::minimize(&m, &opts)?;
            out.push_str(&report.to_string());
            out.push('\n');
            if let (Some(path), Some(reduced)) = (output, report.reduced()) {
                io::save(reduced, &path)?;
                let _ = writeln!(out, "wrote {}", path.display());
            }
        }
        Command::CheckFinite {
            file,
            max_period,
            trust_period_bound,
        } => check_finite(&io::load(file)?, max_period, trust_period_bound, &mut out)?,
        Command::Equiv {
            file1,
            file2,
            max_len,
            tol,
        } => {
            let tol = tolerance(tol)?;
            let (a, b) = (io::load_with(file1, tol)?, io::load_with(file2, tol)?);
            let eq = minimizer::verify_equivalence_with(
                &a,
                &b,
                max_len,
                tol,
                qamin::automaton::DEFAULT_WORD_CAP,
                strategy,
            )?;
            let _ = writeln!(out, "{}", if eq.equal { "equal" } else { "not equal" });
            let _ = writeln!(out, "max deviation: {:.3e}", eq.max_deviation);
            let _ = writeln!(out, "depth: {}", eq.depth);
        }
        Command::Gen {
            kind,
            n,
            n1,
            seed,
            letters,
            output,
        } => {
            let kind: InstanceKind = kind.parse()?;
            let m = io::gen_instance(kind, n, n1, letters, seed)?;
            match output {
                Some(path) => {
                    io::save(&m, &path)?;
                    let _ = writeln!(out, "wrote {}", path.display());
                }
                None => out.push_str(&io::to_json_string(&m)),
            }
        }
        Command::Oracle { file, depth } => oracle_report(&io::load(file)?, depth, &mut out)?,
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
