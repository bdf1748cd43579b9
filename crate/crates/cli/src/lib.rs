//! Argument handling and dispatch for the `oca` binary.
//!
//! Results go to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 1 on usage errors and 2 on domain errors (e.g. a non-bipermutive rule).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use oca::ca::{classify_linearity, is_bipermutive, poly_to_rule, rule_to_poly, LocalRule};
use oca::dynsys::{self, Extraction, SystemState};
use oca::enumeration::{self, RunOptions};
use oca::gf2::{poly_gcd, BinPoly};
use oca::squares;

#[derive(Debug, Parser)]
#[command(name = "oca", version, about = "Maximal-period sequences from orthogonal cellular automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a local rule.
    RuleInfo(RuleArgs),
    /// Dump the Latin square generated by a rule.
    Square(SquareArgs),
    /// Test whether two rules generate orthogonal Latin squares.
    Orthogonal(PairArgs),
    /// Cycle decomposition of the system driven by a rule pair.
    Cycles(PairArgs),
    /// Emit the keystream of a rule pair from a seed state.
    Keystream(KeystreamArgs),
    /// Exhaustive search over bipermutive rule pairs.
    Search(SearchArgs),
    /// Enumerate maximal-period linear OCA pairs.
    EnumerateLinear(LinearArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Bits,
    Bytes,
}

#[derive(Debug, Args)]
struct RuleArgs {
    #[arg(long)]
    diameter: u32,
    /// Wolfram code (decimal).
    #[arg(long, conflicts_with = "poly_f")]
    rule_f: Option<String>,
    /// Rule polynomial, hex mask (0x5) or sum (X^2+1).
    #[arg(long)]
    poly_f: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct SquareArgs {
    #[command(flatten)]
    rule: RuleArgs,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long)]
    diameter: u32,
    #[arg(long, conflicts_with = "poly_f")]
    rule_f: Option<String>,
    #[arg(long, conflicts_with = "poly_g")]
    rule_g: Option<String>,
    #[arg(long)]
    poly_f: Option<String>,
    #[arg(long)]
    poly_g: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct KeystreamArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Seed state as a hexadecimal 2n-bit value, or `random`.
    #[arg(long)]
    seed: String,
    /// RNG seed used with `--seed random`.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Number of iterations.
    #[arg(long)]
    len: usize,
    /// Emit only the left half of each state.
    #[arg(long)]
    left_half: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 64)]
    shards: usize,
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            threads: self.threads,
            shards: self.shards,
            checkpoint_dir: self.checkpoint_dir.clone(),
            ..RunOptions::default()
        }
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    diameter: u32,
    /// Permit the d = 6 search (billions of pairs).
    #[arg(long)]
    allow_long: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct LinearArgs {
    #[arg(long)]
    diameter: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(oca::Error),
    Io(std::io::Error),
}

impl From<oca::Error> for CliError {
    fn from(e: oca::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::RuleInfo(a) => rule_info(&a, out),
        Command::Square(a) => square(&a, out),
        Command::Orthogonal(a) => orthogonal(&a, out),
        Command::Cycles(a) => cycles(&a, out),
        Command::Keystream(a) => keystream(&a, out),
        Command::Search(a) => search(&a, out, err),
        Command::EnumerateLinear(a) => enumerate_linear(&a, out, err),
    }
}

fn require_format(format: Format, allowed: &[Format]) -> CliResult<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(usage(format!(
            "format {format:?} not supported here (allowed: {allowed:?})"
        )))
    }
}

fn parse_rule(code: Option<&str>, poly: Option<&str>, d: u32, which: char) -> CliResult<LocalRule> {
    match (code, poly) {
        (Some(code), None) => {
            let code: BigUint = code
                .parse()
                .map_err(|_| usage(format!("--rule-{which}: not a decimal Wolfram code: {code:?}")))?;
            LocalRule::from_wolfram_big(&code, d).map_err(|e| usage(e.to_string()))
        }
        (None, Some(poly)) => {
            let p: BinPoly = poly.parse().map_err(|e: oca::Error| usage(e.to_string()))?;
            Ok(poly_to_rule(p, d)?)
        }
        _ => Err(usage(format!("exactly one of --rule-{which} or --poly-{which} is required"))),
    }
}

fn pair_rules(a: &PairArgs) -> CliResult<(LocalRule, LocalRule)> {
    Ok((
        parse_rule(a.rule_f.as_deref(), a.poly_f.as_deref(), a.diameter, 'f')?,
        parse_rule(a.rule_g.as_deref(), a.poly_g.as_deref(), a.diameter, 'g')?,
    ))
}

fn code_value(rule: &LocalRule) -> Value {
    match rule.code_u64() {
        Some(c) => json!(c),
        None => json!(rule.wolfram_code().to_string()),
    }
}

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value).map_err(|e| CliError::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn rule_info(a: &RuleArgs, out: &mut dyn Write) -> CliResult<()> {
    require_format(a.format, &[Format::Json])?;
    let rule = parse_rule(a.rule_f.as_deref(), a.poly_f.as_deref(), a.diameter, 'f')?;
    let poly = rule_to_poly(&rule).ok().map(|p| p.to_string());
    emit_json(
        out,
        &json!({
            "diameter": rule.diameter(),
            "wolfram_code": code_value(&rule),
            "bipermutive": is_bipermutive(&rule),
            "linearity": classify_linearity(&rule),
            "polynomial": poly,
        }),
    )
}

fn square(a: &SquareArgs, out: &mut dyn Write) -> CliResult<()> {
    let a = &a.rule;
    require_format(a.format, &[Format::Json, Format::Csv])?;
    let rule = parse_rule(a.rule_f.as_deref(), a.poly_f.as_deref(), a.diameter, 'f')?;
    let sq = squares::square_from_rule(&rule)?;
    match a.format {
        Format::Csv => out.write_all(sq.to_csv().as_bytes())?,
        _ => {
            let rows: Vec<&[u32]> = sq.rows().collect();
            emit_json(out, &json!({ "order": sq.order(), "entries": rows }))?;
        }
    }
    Ok(())
}

/// Squares when small enough, else coprimality (linear rules) or bijectivity.
fn decide_orthogonal(f: &LocalRule, g: &LocalRule) -> CliResult<bool> {
    if !is_bipermutive(f) || !is_bipermutive(g) {
        return Err(oca::Error::NotBipermutive.into());
    }
    let n = f.block_len();
    if n <= squares::MAX_SQUARE_BLOCK {
        let (sf, sg) = (squares::square_from_rule(f)?, squares::square_from_rule(g)?);
        return Ok(squares::are_orthogonal(&sf, &sg)?);
    }
    if let (Ok(p), Ok(q)) = (rule_to_poly(f), rule_to_poly(g)) {
        return Ok(poly_gcd(p, q)? == BinPoly::ONE);
    }
    match dynsys::cycle_decomposition(f, g) {
        Ok(_) => Ok(true),
        Err(oca::Error::NotOcaPair) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

fn orthogonal(a: &PairArgs, out: &mut dyn Write) -> CliResult<()> {
    require_format(a.format, &[Format::Json])?;
    let (f, g) = pair_rules(a)?;
    emit_json(out, &json!({ "orthogonal": decide_orthogonal(&f, &g)? }))
}

fn cycles(a: &PairArgs, out: &mut dyn Write) -> CliResult<()> {
    require_format(a.format, &[Format::Json])?;
    let (f, g) = pair_rules(a)?;
    emit_json(out, &dynsys::cycle_decomposition(&f, &g)?)
}

fn parse_seed(a: &KeystreamArgs, n: u32) -> CliResult<SystemState> {
    let bits = if a.seed == "random" {
        let rng_seed = a
            .rng_seed
            .ok_or_else(|| usage("--seed random requires --rng-seed"))?;
        let mask = if 2 * n >= 64 { u64::MAX } else { (1u64 << (2 * n)) - 1 };
        StdRng::seed_from_u64(rng_seed).gen::<u64>() & mask
    } else {
        let hex = a.seed.trim_start_matches("0x").trim_start_matches("0X");
        u64::from_str_radix(hex, 16)
            .map_err(|_| usage(format!("--seed: not a hexadecimal value: {:?}", a.seed)))?
    };
    SystemState::new(n, bits).map_err(|e| usage(format!("--seed: {e}")))
}

fn keystream(a: &KeystreamArgs, out: &mut dyn Write) -> CliResult<()> {
    let format = a.pair.format;
    let format = if format == Format::Json { Format::Bits } else { format };
    require_format(format, &[Format::Bits, Format::Bytes])?;
    let (f, g) = pair_rules(&a.pair)?;
    let seed = parse_seed(a, f.block_len())?;
    if !decide_orthogonal(&f, &g)? {
        return Err(oca::Error::NotOcaPair.into());
    }
    let extraction = if a.left_half {
        Extraction::LeftHalf
    } else {
        Extraction::FullState
    };
    let bits = dynsys::keystream_with(&f, &g, &seed, a.len, extraction)?;
    match format {
        Format::Bytes => out.write_all(&dynsys::pack_bits(&bits))?,
        _ => writeln!(out, "{}", dynsys::bits_to_string(&bits))?,
    }
    Ok(())
}

fn search(a: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    require_format(a.format, &[Format::Json, Format::Csv])?;
    if a.diameter == 6 && !a.allow_long {
        return Err(usage("diameter 6 runs for hours; pass --allow-long"));
    }
    let started = std::time::Instant::now();
    let report = enumeration::search_bipermutive_with(a.diameter, a.allow_long, &a.run.options())?;
    match a.format {
        Format::Csv => out.write_all(report.to_csv().as_bytes())?,
        _ => emit_json(out, &report)?,
    }
    writeln!(
        err,
        "search d={}: {} pairs, {} OCA, {} maximal, elapsed {:.3?}",
        report.diameter,
        report.total_pairs,
        report.oca_pairs,
        report.maximal_pairs.len(),
        started.elapsed()
    )?;
    Ok(())
}

fn enumerate_linear(a: &LinearArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    require_format(a.format, &[Format::Json, Format::Csv])?;
    let report = enumeration::enumerate_maximal_linear_with(a.diameter, &a.run.options())?;
    match a.format {
        Format::Csv => out.write_all(report.to_csv().as_bytes())?,
        _ => emit_json(out, &report)?,
    }
    writeln!(
        err,
        "enumerate-linear d={}: LOCA {} ({} ordered), mLOCA {} ({} ordered), elapsed {:.3?}",
        report.diameter,
        report.loca_unordered,
        report.loca_ordered,
        report.mloca_unordered,
        report.mloca_ordered,
        report.elapsed
    )?;
    Ok(())
}
