//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//! 0 success, 1 error, 2 rejection (⊥), 3 bound violation.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::amd::{self, AmdCodeword, AmdError, AmdParams};
use crate::games::adversaries::{self, blind_shift};
use crate::games::reduction::{couple_forge, couple_ind, CouplingReport};
use crate::games::stats::binomial_sigma;
use crate::games::{
    delta_estimate, run_forge_relay, run_ind_relay, run_ind_sss, run_shift_robust, run_trials,
    CorruptionMode, DeltaEstimate, GameReport, RelayContext, RunConfig, SssContext, FORGE_RELAY,
    IND_RELAY, IND_SSS, SHIFT_ROBUST,
};
use crate::gf::{self, FieldElement, FieldSpec, GfError};
use crate::relay::{
    read_trace, replay_trace, run_protocol, sample_keys, write_trace, RelayError, RelayNetwork,
    RelaySession, Tamper, TraceEvent,
};
use crate::rng::{trial_rng, Stream, SEED_ENV};
use crate::secoqc::{self, AttackSummary, PathVerdict, SecoqcError, SecoqcParams};
use crate::sss::{
    self, AccessStructure, LinearScheme, RobustScheme, ShareVector, ShareVectorJson, SharingScheme,
    SssError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BOT: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Named field presets.
pub const PRESETS: &[&str] = &[
    "gf7", "gf8", "gf16", "gf2_8", "gf2_16", "gf2_32", "gf2_64", "gf2_86",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Amd(#[from] AmdError),
    #[error(transparent)]
    Sss(#[from] SssError),
    #[error(transparent)]
    Relay(#[from] RelayError),
    #[error(transparent)]
    Secoqc(#[from] SecoqcError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "amd-relay",
    version,
    about = "AMD-coded robust secret sharing over trusted-repeater relays"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Additive,
    Shamir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Static,
    Dynamic,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field preset (gf7, gf8, gf16, gf2_8, gf2_16, gf2_32, gf2_64, gf2_86) or gf<p>, gf2_<m>.
    #[arg(long, default_value = "gf2_86")]
    pub field: String,
    /// AMD message length in field elements.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value = "additive")]
    pub scheme: SchemeArg,
    /// Number of shares (paths).
    #[arg(long)]
    pub n: Option<usize>,
    /// Shamir threshold; defaults to a majority.
    #[arg(long)]
    pub threshold: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct NetArgs {
    /// Edges per path, comma separated; defaults to 2 for every path.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Vec<usize>,
    /// Key privacy parameter.
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores). Never changes the output.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// AMD-encode a message of d hex elements.
    Encode {
        #[command(flatten)]
        field: FieldArgs,
        /// Message elements, comma or space separated.
        message: String,
        /// Fix the encoding randomness instead of drawing it from the seed.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Decode a codeword of d+2 hex elements; prints BOT on rejection.
    Decode {
        #[command(flatten)]
        field: FieldArgs,
        codeword: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Share a secret (AMD-coded unless --plain); prints share JSON.
    Share {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        secret: String,
        #[arg(long)]
        plain: bool,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Recover from share JSON (inline, a file path, or - for stdin).
    Recover {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        shares: String,
        #[arg(long)]
        plain: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Simulate the relay protocol end to end.
    RelaySim {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Secret elements; random per trial when omitted.
        #[arg(long)]
        secret: Option<String>,
        /// Add an offset on edge j of path i (1-based): i:j:HEX[,HEX...].
        #[arg(long)]
        tamper: Vec<String>,
        /// Paths (1-based) that deliver nothing.
        #[arg(long, value_delimiter = ',')]
        drop: Vec<usize>,
        /// Write the JSON-lines trace of the first trial here (- for stdout).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a security game against a built-in adversary (or "all").
    Game {
        game: String,
        adversary: String,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "dynamic")]
        mode: ModeArg,
        /// Shares or paths the built-in adversaries may corrupt.
        #[arg(long)]
        budget: Option<usize>,
        /// Drop the unqualified-set check (sanity variant).
        #[arg(long)]
        ungated: bool,
        /// Blind-shift parameters i:j:HEX[,HEX...] (1-based).
        #[arg(long)]
        tamper: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare a relay game with its reduction trial by trial.
    Couple {
        game: String,
        adversary: String,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "dynamic")]
        mode: ModeArg,
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Key-shift attack on the SECOQC parity-check protocol.
    Attack {
        /// Shift applied to Bob's pad share and to the tag.
        #[arg(long, default_value = "1")]
        delta2: String,
        /// Paths.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Tag width in bits.
        #[arg(long, default_value_t = 64)]
        m: u32,
        /// Parity rows.
        #[arg(long, default_value_t = 32)]
        m_pc: usize,
        /// Secret bits.
        #[arg(long, default_value_t = 128)]
        n_s: usize,
        /// Run the protocol without the adversary.
        #[arg(long)]
        honest: bool,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Recompute per-path offsets from a JSON-lines trace.
    Replay {
        trace: PathBuf,
        #[arg(long, default_value = "gf2_86")]
        field: String,
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact worst-case undetected-shift probability by enumeration.
    DeltaOracle {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Codeword size and overhead of every preset.
    Presets {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_ERROR
                }
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Encode {
            field,
            message,
            x,
            seed,
            out: fmt,
        } => cmd_encode(&field, &message, x.as_deref(), seed, fmt.format, out),
        Command::Decode {
            field,
            codeword,
            out: fmt,
        } => cmd_decode(&field, &codeword, fmt.format, out),
        Command::Share {
            field,
            scheme,
            secret,
            plain,
            seed,
            out: fmt,
        } => cmd_share(&field, &scheme, &secret, plain, seed, fmt.format, out),
        Command::Recover {
            field,
            scheme,
            shares,
            plain,
            out: fmt,
        } => cmd_recover(&field, &scheme, &shares, plain, fmt.format, out),
        Command::RelaySim {
            field,
            scheme,
            net,
            run,
            secret,
            tamper,
            drop,
            trace,
            out: fmt,
        } => {
            let opts = RelaySimOptions {
                secret,
                tamper,
                drop,
                trace,
            };
            cmd_relay_sim(&field, &scheme, &net, &run, &opts, fmt.format, out)
        }
        Command::Game {
            game,
            adversary,
            field,
            scheme,
            net,
            run,
            mode,
            budget,
            ungated,
            tamper,
            out: fmt,
        } => {
            let setup = GameSetup::new(&field, &scheme, &net, mode, budget)?;
            cmd_game(
                &setup,
                &game,
                &adversary,
                &run,
                ungated,
                tamper.as_deref(),
                fmt.format,
                out,
            )
        }
        Command::Couple {
            game,
            adversary,
            field,
            scheme,
            net,
            run,
            mode,
            budget,
            out: fmt,
        } => {
            let setup = GameSetup::new(&field, &scheme, &net, mode, budget)?;
            cmd_couple(&setup, &game, &adversary, &run, fmt.format, out)
        }
        Command::Attack {
            delta2,
            n,
            m,
            m_pc,
            n_s,
            honest,
            run,
            out: fmt,
        } => {
            let params = SecoqcParams {
                m,
                m_pc,
                n_s,
                paths: n,
                ..SecoqcParams::default()
            };
            cmd_attack(&params, &delta2, honest, &run, fmt.format, out)
        }
        Command::Replay {
            trace,
            field,
            lengths,
            out: fmt,
        } => cmd_replay(&trace, &field, &lengths, fmt.format, out),
        Command::DeltaOracle { field, out: fmt } => cmd_delta_oracle(&field, fmt.format, out),
        Command::Presets { d, out: fmt } => cmd_presets(d, fmt.format, out),
    }
}

// ------------------------------------------------------------ parsing

/// `gf7`, `gf8` (= GF(2^3)), `gf2_86`, or any `gf<p>` / `gf<2^m>` / `gf2_<m>`.
pub fn parse_field(name: &str) -> Result<FieldSpec, CliError> {
    let lower = name.trim().to_ascii_lowercase();
    let body = lower.strip_prefix("gf").ok_or_else(|| {
        usage(format!(
            "unknown field {name:?}; presets: {}",
            PRESETS.join(", ")
        ))
    })?;
    if let Some(m) = body.strip_prefix("2_").or_else(|| body.strip_prefix("2^")) {
        let m: u32 = m
            .parse()
            .map_err(|_| usage(format!("bad extension degree in {name:?}")))?;
        return Ok(FieldSpec::binary(m)?);
    }
    let q: u64 = body.parse().map_err(|_| {
        usage(format!(
            "unknown field {name:?}; presets: {}",
            PRESETS.join(", ")
        ))
    })?;
    if q > 2 && q.is_power_of_two() {
        Ok(FieldSpec::binary(q.trailing_zeros())?)
    } else {
        Ok(FieldSpec::prime(q)?)
    }
}

/// One hex element; leading zeros and a `0x` prefix are optional.
pub fn parse_element(spec: &FieldSpec, token: &str) -> Result<FieldElement, CliError> {
    let t = token.trim();
    let t = t.strip_prefix("0x").unwrap_or(t);
    if t.is_empty() || t.len() > 32 || !t.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(usage(format!("{token:?} is not a hex field element")));
    }
    let v = u128::from_str_radix(t, 16).map_err(|e| usage(e.to_string()))?;
    Ok(spec.element(v)?)
}

pub fn parse_elements(spec: &FieldSpec, list: &str) -> Result<Vec<FieldElement>, CliError> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_element(spec, t))
        .collect()
}

/// `i:j:HEX[,HEX...]`, 1-based; a single element is repeated `share_len` times.
pub fn parse_tamper(spec: &FieldSpec, share_len: usize, text: &str) -> Result<Tamper, CliError> {
    let bad = || usage(format!("tamper {text:?} is not i:j:HEX[,HEX...]"));
    let mut parts = text.splitn(3, ':');
    let (Some(i), Some(j), Some(hex)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 {
        return Err(usage("tamper indices are 1-based"));
    }
    let mut delta = parse_elements(spec, hex)?;
    if delta.len() == 1 {
        delta = vec![delta[0]; share_len];
    }
    if delta.len() != share_len {
        return Err(usage(format!(
            "tamper needs 1 or {share_len} elements, got {}",
            delta.len()
        )));
    }
    Ok(Tamper {
        path: i - 1,
        edge: j - 1,
        delta,
    })
}

fn amd_params(field: &FieldArgs) -> Result<AmdParams, CliError> {
    Ok(AmdParams::new(parse_field(&field.field)?, field.d)?)
}

fn structure(scheme: &SchemeArgs, n: usize) -> Result<AccessStructure, CliError> {
    match scheme.scheme {
        SchemeArg::Additive => {
            if scheme.threshold.is_some_and(|t| t != n) {
                return Err(usage(
                    "additive sharing is n-of-n; drop --threshold or use --scheme shamir",
                ));
            }
            Ok(AccessStructure::additive(n)?)
        }
        SchemeArg::Shamir => Ok(AccessStructure::threshold(
            scheme.threshold.unwrap_or(n / 2 + 1),
            n,
        )?),
    }
}

/// `n` and per-path lengths from `--n` and `--lengths`.
fn topology(scheme: &SchemeArgs, net: &NetArgs) -> Result<(usize, Vec<usize>), CliError> {
    match (scheme.n, net.lengths.is_empty()) {
        (Some(n), true) => Ok((n, vec![2; n])),
        (None, true) => Ok((3, vec![2; 3])),
        (n, false) => {
            let k = net.lengths.len();
            if n.is_some_and(|n| n != k) {
                return Err(usage(format!(
                    "--n {} disagrees with {k} --lengths",
                    n.unwrap_or(0)
                )));
            }
            Ok((k, net.lengths.clone()))
        }
    }
}

fn check_format(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(usage(
            format!("--format {format:?} is not available for {command}").to_lowercase(),
        ))
    }
}

fn read_input(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(arg.to_string());
    }
    let mut text = String::new();
    if arg == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        BufReader::new(File::open(arg)?).read_to_string(&mut text)?;
    }
    Ok(text)
}

// ------------------------------------------------------------ output

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_table(out: &mut dyn Write, rows: &[(&str, String)]) -> Result<(), CliError> {
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    Ok(())
}

fn hex_list(v: &[FieldElement]) -> String {
    gf::vec_to_hex(v).join(" ")
}

fn fmt_f64(x: f64) -> String {
    crate::games::stats::fmt_prob(x)
}

// ------------------------------------------------------------ encode / decode

#[derive(Debug, Serialize)]
struct DecodeOutput {
    accepted: bool,
    message: Option<Vec<String>>,
}

pub fn cmd_encode(
    field: &FieldArgs,
    message: &str,
    x: Option<&str>,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    check_format(format, &[Format::Json, Format::Table], "encode")?;
    let params = amd_params(field)?;
    let spec = params.spec();
    let s = parse_elements(&spec, message)?;
    let codeword = match x {
        Some(x) => amd::encode_with_x(&params, &s, parse_element(&spec, x)?)?,
        None => amd::amd_encode(&params, &s, &mut trial_rng(seed, 0, Stream::Encode))?,
    };
    match format {
        Format::Json => write_json(out, &codeword.to_json())?,
        _ => writeln!(out, "{codeword}")?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_decode(
    field: &FieldArgs,
    codeword: &str,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    check_format(format, &[Format::Json, Format::Table], "decode")?;
    let params = amd_params(field)?;
    let v = parse_elements(&params.spec(), codeword)?;
    let c = AmdCodeword::from_slice(&params, &v)?;
    let decoded = amd::amd_decode(&params, &c)?;
    match format {
        Format::Json => write_json(
            out,
            &DecodeOutput {
                accepted: decoded.is_some(),
                message: decoded.as_deref().map(gf::vec_to_hex),
            },
        )?,
        _ => match &decoded {
            Some(s) => writeln!(out, "{}", hex_list(s))?,
            None => writeln!(out, "BOT")?,
        },
    }
    Ok(if decoded.is_some() { EXIT_OK } else { EXIT_BOT })
}

// ------------------------------------------------------------ share / recover

fn sharing(
    field: &FieldArgs,
    scheme: &SchemeArgs,
    plain: bool,
    secret_len: usize,
) -> Result<Box<dyn SharingScheme>, CliError> {
    let n = scheme.n.unwrap_or(3);
    let structure = structure(scheme, n)?;
    if plain {
        let spec = parse_field(&field.field)?;
        structure.check_field(&spec)?;
        Ok(Box::new(LinearScheme {
            structure,
            spec,
            secret_len,
        }))
    } else {
        Ok(Box::new(RobustScheme::new(structure, amd_params(field)?)?))
    }
}

fn write_shares(out: &mut dyn Write, shares: &ShareVector, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(out, &shares.to_json()),
        _ => {
            for (i, e) in shares.entries.iter().enumerate() {
                match e {
                    Some(v) => writeln!(out, "{}: {}", i + 1, hex_list(v))?,
                    None => writeln!(out, "{}: BOT", i + 1)?,
                }
            }
            Ok(())
        }
    }
}

pub fn cmd_share(
    field: &FieldArgs,
    scheme: &SchemeArgs,
    secret: &str,
    plain: bool,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    check_format(format, &[Format::Json, Format::Table], "share")?;
    let spec = parse_field(&field.field)?;
    let s = parse_elements(&spec, secret)?;
    let scheme = sharing(field, scheme, plain, s.len())?;
    if s.len() != scheme.secret_len() {
        return Err(usage(format!(
            "secret has {} elements, the scheme takes {}",
            s.len(),
            scheme.secret_len()
        )));
    }
    let shares = scheme.share(&s, &mut trial_rng(seed, 0, Stream::Game))?;
    write_shares(out, &shares, format)?;
    Ok(EXIT_OK)
}

pub fn cmd_recover(
    field: &FieldArgs,
    scheme: &SchemeArgs,
    shares: &str,
    plain: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    check_format(format, &[Format::Json, Format::Table], "recover")?;
    let spec = parse_field(&field.field)?;
    let json: ShareVectorJson = serde_json::from_str(&read_input(shares)?)?;
    let vector = ShareVector::from_json(&spec, &json)?;
    let share_len = vector.entry_len()?.unwrap_or(0);
    let args = SchemeArgs {
        n: Some(scheme.n.unwrap_or(vector.len())),
        ..scheme.clone()
    };
    let scheme = sharing(field, &args, plain, share_len)?;
    let recovered = if plain {
        sss::recover(scheme.structure(), &vector)?
    } else {
        scheme.recover(&vector)?
    };
    match format {
        Format::Json => write_json(
            out,
            &DecodeOutput {
                accepted: recovered.is_some(),
                message: recovered.as_deref().map(gf::vec_to_hex),
            },
        )?,
        _ => match &recovered {
            Some(s) => writeln!(out, "{}", hex_list(s))?,
            None => writeln!(out, "BOT")?,
        },
    }
    Ok(if recovered.is_some() {
        EXIT_OK
    } else {
        EXIT_BOT
    })
}

// ------------------------------------------------------------ relay-sim

#[derive(Debug, Clone, Default)]
pub struct RelaySimOptions {
    pub secret: Option<String>,
    pub tamper: Vec<String>,
    pub drop: Vec<usize>,
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Bob recovered Alice's secret.
    Match,
    /// Bob output ⊥.
    Reject,
    /// Bob accepted a different secret.
    Mismatch,
}

impl Outcome {
    fn as_str(self) -> &'static str {
        match self {
            Outcome::Match => "match",
            Outcome::Reject => "reject",
            Outcome::Mismatch => "mismatch",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelaySimReport {
    pub field: String,
    pub d: usize,
    pub n: usize,
    pub lengths: Vec<usize>,
    pub scheme: String,
    pub threshold: usize,
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
    pub tampers: Vec<String>,
    pub dropped: Vec<usize>,
    /// First trial.
    pub outcome: Outcome,
    pub secret: Vec<String>,
    pub recovered: Option<Vec<String>>,
    /// End-to-end offset per path in the first trial (sum of per-edge differences).
    pub path_shifts: Vec<Option<Vec<String>>>,
    pub matches: u64,
    pub rejects: u64,
    pub mismatches: u64,
    pub reject_rate: f64,
    pub mismatch_rate: f64,
    pub delta: DeltaEstimate,
    /// `n·ℓ·ε + δ` with `ℓ` the longest path.
    pub bound: f64,
    pub bound_formula: String,
    pub sigma: f64,
    pub threshold_rate: f64,
    pub violation: bool,
}

struct RelayTrial {
    outcome: Outcome,
    secret: Vec<FieldElement>,
    recovered: Option<Vec<FieldElement>>,
    shifts: Vec<Option<Vec<String>>>,
    events: Vec<TraceEvent>,
}

pub fn cmd_relay_sim(
    field: &FieldArgs,
    scheme_args: &SchemeArgs,
    net_args: &NetArgs,
    run: &RunArgs,
    opts: &RelaySimOptions,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    check_format(format, &[Format::Json, Format::Table], "relay-sim")?;
    let params = amd_params(field)?;
    let spec = params.spec();
    let (n, lengths) = topology(scheme_args, net_args)?;
    let scheme = RobustScheme::new(structure(scheme_args, n)?, params)?;
    let net = RelayNetwork::new(lengths.clone(), spec, scheme.share_len(), net_args.epsilon)?;
    let tampers = opts
        .tamper
        .iter()
        .map(|t| parse_tamper(&spec, scheme.share_len(), t))
        .collect::<Result<Vec<_>, _>>()?;
    for t in &tampers {
        let len = net
            .length(t.path)
            .map_err(|_| usage(format!("tamper path {} does not exist", t.path + 1)))?;
        if t.edge >= len {
            return Err(usage(format!("path {} has {len} edges", t.path + 1)));
        }
    }
    let mut drop = BTreeSet::new();
    for &i in &opts.drop {
        if i == 0 || i > n {
            return Err(usage(format!("drop path {i} is not in 1..={n}")));
        }
        drop.insert(i - 1);
    }
    let fixed_secret = opts
        .secret
        .as_deref()
        .map(|s| parse_elements(&spec, s))
        .transpose()?;
    if let Some(s) = &fixed_secret {
        if s.len() != params.d() {
            return Err(usage(format!(
                "secret has {} elements, d = {}",
                s.len(),
                params.d()
            )));
        }
    }
    let trials = run.trials.unwrap_or(1);
    if trials == 0 {
        return Err(usage("--trials must be positive"));
    }

    let results = run_trials(trials, run.jobs, |t| -> Result<RelayTrial, CliError> {
        let mut game = trial_rng(run.seed, t, Stream::Game);
        let mut keys = trial_rng(run.seed, t, Stream::Keys);
        let secret = match &fixed_secret {
            Some(s) => s.clone(),
            None => gf::vec_random(&spec, params.d(), &mut game),
        };
        let mut session = RelaySession::new(net.clone(), sample_keys(&net, &mut keys));
        let recovered = run_protocol(&mut session, &scheme, &secret, &tampers, &drop, &mut game)?;
        let outcome = match &recovered {
            None => Outcome::Reject,
            Some(r) if *r == secret => Outcome::Match,
            Some(_) => Outcome::Mismatch,
        };
        let shifts = lengths
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                session
                    .ledger
                    .total_shift(i, len)
                    .transpose()
                    .map(|s| s.map(|v| gf::vec_to_hex(&v)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let events = if t == 0 {
            session.ledger.events().to_vec()
        } else {
            Vec::new()
        };
        Ok(RelayTrial {
            outcome,
            secret,
            recovered,
            shifts,
            events,
        })
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let count = |o: Outcome| results.iter().filter(|r| r.outcome == o).count() as u64;
    let (matches, rejects, mismatches) = (
        count(Outcome::Match),
        count(Outcome::Reject),
        count(Outcome::Mismatch),
    );
    let delta = delta_estimate(&params);
    let bound = net.integrity_bound(delta.value);
    let sigma = binomial_sigma(bound.min(1.0), trials);
    let mismatch_rate = mismatches as f64 / trials as f64;
    let first = &results[0];

    if let Some(path) = &opts.trace {
        if path.as_os_str() == "-" {
            write_trace(&first.events, &mut *out)?;
        } else {
            write_trace(&first.events, io::BufWriter::new(File::create(path)?))?;
        }
    }

    let report = RelaySimReport {
        field: spec.to_string(),
        d: params.d(),
        n,
        lengths: lengths.clone(),
        scheme: format!("{:?}", scheme_args.scheme).to_lowercase(),
        threshold: scheme.structure.t(),
        epsilon: net.epsilon(),
        trials,
        seed: run.seed,
        tampers: opts.tamper.clone(),
        dropped: opts.drop.clone(),
        outcome: first.outcome,
        secret: gf::vec_to_hex(&first.secret),
        recovered: first.recovered.as_deref().map(gf::vec_to_hex),
        path_shifts: first.shifts.clone(),
        matches,
        rejects,
        mismatches,
        reject_rate: rejects as f64 / trials as f64,
        mismatch_rate,
        delta,
        bound,
        bound_formula: format!(
            "n·ℓ·ε + δ = {}·{}·{} + {} = {}",
            n,
            net.max_length(),
            net.epsilon(),
            fmt_f64(delta.value),
            fmt_f64(bound)
        ),
        sigma,
        threshold_rate: bound + 3.0 * sigma,
        violation: mismatch_rate > bound + 3.0 * sigma,
    };
    match format {
        Format::Json => write_json(out, &report)?,
        _ => {
            let shifts: Vec<String> = report
                .path_shifts
                .iter()
                .map(|s| {
                    s.as_ref()
                        .map(|v| v.join(" "))
                        .unwrap_or_else(|| "BOT".into())
                })
                .collect();
            write_table(
                out,
                &[
                    ("outcome", report.outcome.as_str().into()),
                    ("secret", report.secret.join(" ")),
                    (
                        "recovered",
                        report
                            .recovered
                            .as_ref()
                            .map(|v| v.join(" "))
                            .unwrap_or_else(|| "BOT".into()),
                    ),
                    ("path shifts", shifts.join(" | ")),
                    ("trials", trials.to_string()),
                    (
                        "match/reject/mismatch",
                        format!("{matches}/{rejects}/{mismatches}"),
                    ),
                    ("bound", report.bound_formula.clone()),
                    ("threshold", fmt_f64(report.threshold_rate)),
                ],
            )?;
        }
    }
    Ok(if report.violation {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

// ------------------------------------------------------------ games

/// Scheme and topology shared by `game` and `couple`.
pub struct GameSetup {
    pub scheme: RobustScheme,
    pub relay: RelayContext,
}

impl GameSetup {
    pub fn new(
        field: &FieldArgs,
        scheme: &SchemeArgs,
        net: &NetArgs,
        mode: ModeArg,
        budget: Option<usize>,
    ) -> Result<Self, CliError> {
        let params = amd_params(field)?;
        let (n, lengths) = topology(scheme, net)?;
        let robust = RobustScheme::new(structure(scheme, n)?, params)?;
        let mut sss = SssContext::robust(&robust);
        if let Some(k) = budget {
            if k > n {
                return Err(usage(format!("--budget {k} exceeds n = {n}")));
            }
            sss = sss.with_budget(k);
        }
        let mode = match mode {
            ModeArg::Static => CorruptionMode::Static,
            ModeArg::Dynamic => CorruptionMode::Dynamic,
        };
        let relay = RelayContext::new(sss, lengths, net.epsilon, mode)?;
        Ok(Self {
            scheme: robust,
            relay,
        })
    }
}

const GAMES: &[&str] = &[IND_SSS, SHIFT_ROBUST, IND_RELAY, FORGE_RELAY];

fn adversary_names(game: &str) -> Result<&'static [&'static str], CliError> {
    Ok(match game {
        IND_SSS => adversaries::IND_SSS_NAMES,
        SHIFT_ROBUST => adversaries::SHIFT_NAMES,
        IND_RELAY => adversaries::IND_RELAY_NAMES,
        FORGE_RELAY => adversaries::FORGE_NAMES,
        _ => {
            return Err(usage(format!(
                "unknown game {game:?}; options: {}",
                GAMES.join(", ")
            )))
        }
    })
}

fn selected<'a>(game: &str, adversary: &'a str) -> Result<Vec<&'a str>, CliError> {
    let names = adversary_names(game)?;
    if adversary == "all" {
        return Ok(names.to_vec());
    }
    if !names.contains(&adversary) {
        return Err(usage(format!(
            "unknown adversary {adversary:?} for {game}; options: {}, all",
            names.join(", ")
        )));
    }
    Ok(vec![adversary])
}

/// One game run against a named adversary.
pub fn play(
    setup: &GameSetup,
    game: &str,
    adversary: &str,
    cfg: &RunConfig,
    blind: Option<&Tamper>,
) -> Result<GameReport, CliError> {
    let unknown = || usage(format!("unknown adversary {adversary:?} for {game}"));
    let custom = blind
        .filter(|_| adversary == "blind-shift")
        .map(|t| blind_shift(Some(t.path), Some(t.edge), Some(t.delta.clone())));
    let sss = &setup.relay.sss;
    Ok(match game {
        IND_SSS => run_ind_sss(
            &setup.scheme,
            sss,
            &*adversaries::ind_sss(adversary).ok_or_else(unknown)?,
            cfg,
        ),
        IND_RELAY => run_ind_relay(
            &setup.scheme,
            &setup.relay,
            &*adversaries::ind_relay(adversary).ok_or_else(unknown)?,
            cfg,
        ),
        SHIFT_ROBUST => match custom {
            Some(b) => run_shift_robust(&setup.scheme, sss, &b, cfg),
            None => run_shift_robust(
                &setup.scheme,
                sss,
                &*adversaries::shift(adversary).ok_or_else(unknown)?,
                cfg,
            ),
        },
        FORGE_RELAY => match custom {
            Some(b) => run_forge_relay(&setup.scheme, &setup.relay, &b, cfg),
            None => run_forge_relay(
                &setup.scheme,
                &setup.relay,
                &*adversaries::forge(adversary).ok_or_else(unknown)?,
                cfg,
            ),
        },
        _ => {
            return Err(usage(format!(
                "unknown game {game:?}; options: {}",
                GAMES.join(", ")
            )))
        }
    })
}

/// Flat CSV row of a report.
#[derive(Debug, Serialize)]
struct GameRow<'a> {
    game: &'a str,
    adversary: &'a str,
    trials: u64,
    wins: u64,
    flagged: u64,
    rate: f64,
    wilson_low: f64,
    wilson_high: f64,
    bound: f64,
    sigma: f64,
    threshold: f64,
    violation: bool,
    delta: Option<f64>,
    field: &'a str,
    d: Option<usize>,
    n: usize,
    scheme: &'a str,
    t: usize,
    lengths: String,
    epsilon: Option<f64>,
    mode: String,
    budget: usize,
    gated: bool,
    seed: u64,
}

impl<'a> From<&'a GameReport> for GameRow<'a> {
    fn from(r: &'a GameReport) -> Self {
        Self {
            game: &r.game,
            adversary: &r.adversary,
            trials: r.trials,
            wins: r.wins,
            flagged: r.flagged,
            rate: r.rate,
            wilson_low: r.wilson_low,
            wilson_high: r.wilson_high,
            bound: r.bound,
            sigma: r.sigma,
            threshold: r.threshold,
            violation: r.violation,
            delta: r.delta.map(|d| d.value),
            field: &r.params.field,
            d: r.params.d,
            n: r.params.n,
            scheme: &r.params.scheme,
            t: r.params.threshold,
            lengths: r
                .params
                .lengths
                .as_ref()
                .map(|l| l.iter().map(usize::to_string).collect::<Vec<_>>().join(";"))
                .unwrap_or_default(),
            epsilon: r.params.epsilon,
            mode: r.params.mode.map(|m| m.to_string()).unwrap_or_default(),
            budget: r.params.budget,
            gated: r.params.gated,
            seed: r.seed,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_game(
    setup: &GameSetup,
    game: &str,
    adversary: &str,
    run: &RunArgs,
    ungated: bool,
    tamper: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let names = selected(game, adversary)?;
    let blind = tamper
        .map(|t| parse_tamper(&setup.relay.sss.spec, setup.relay.sss.share_len, t))
        .transpose()?;
    if let Some(t) = &blind {
        if t.path >= setup.relay.n() || t.edge >= setup.relay.lengths()[t.path] {
            return Err(usage(format!(
                "tamper {}:{} is outside the network",
                t.path + 1,
                t.edge + 1
            )));
        }
    }
    let trials = run.trials.unwrap_or(1000);
    let mut cfg = RunConfig::new(trials, run.seed).jobs(run.jobs);
    if ungated {
        cfg = cfg.ungated();
    }
    let reports = names
        .iter()
        .map(|a| play(setup, game, a, &cfg, blind.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Json if reports.len() == 1 => write_json(out, &reports[0])?,
        Format::Json => write_json(out, &reports)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &reports {
                w.serialize(GameRow::from(r))?;
            }
            w.flush()?;
        }
        Format::Table => {
            for r in &reports {
                writeln!(out, "{}", r.summary_line())?;
            }
        }
    }
    Ok(if reports.iter().any(|r| r.violation) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

pub fn cmd_couple(
    setup: &GameSetup,
    game: &str,
    adversary: &str,
    run: &RunArgs,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if game != IND_RELAY && game != FORGE_RELAY {
        return Err(usage(format!("couple takes {IND_RELAY} or {FORGE_RELAY}")));
    }
    let trials = run.trials.unwrap_or(1000);
    let mut reports: Vec<CouplingReport> = Vec::new();
    for name in selected(game, adversary)? {
        reports.push(if game == IND_RELAY {
            let adv = adversaries::ind_relay(name).expect("registered");
            couple_ind(
                &setup.scheme,
                &setup.relay,
                &*adv,
                trials,
                run.seed,
                run.jobs,
            )
        } else {
            let adv = adversaries::forge(name).expect("registered");
            couple_forge(
                &setup.scheme,
                &setup.relay,
                &*adv,
                trials,
                run.seed,
                run.jobs,
            )
        });
    }
    match format {
        Format::Json if reports.len() == 1 => write_json(out, &reports[0])?,
        Format::Json => write_json(out, &reports)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "game",
                "adversary",
                "trials",
                "direct_wins",
                "reduced_wins",
                "flagged",
                "mismatches",
            ])?;
            for r in &reports {
                w.write_record([
                    r.game.clone(),
                    r.adversary.clone(),
                    r.trials.to_string(),
                    r.direct_wins.to_string(),
                    r.reduced_wins.to_string(),
                    r.flagged.to_string(),
                    r.mismatches.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Table => {
            for r in &reports {
                writeln!(
                    out,
                    "{} {}: direct {} reduced {} of {} trials, mismatches {}",
                    r.game, r.adversary, r.direct_wins, r.reduced_wins, r.trials, r.mismatches
                )?;
            }
        }
    }
    Ok(if reports.iter().any(|r| r.mismatches > 0) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

// ------------------------------------------------------------ attack

#[derive(Debug, Clone, Serialize)]
pub struct HonestSummary {
    pub trials: u64,
    pub seed: u64,
    pub accepted: u64,
    pub all_paths_valid: u64,
    /// Verdicts of trial 0.
    pub verdicts: Vec<PathVerdict>,
}

fn verdict_rows(verdicts: &[PathVerdict]) -> Vec<String> {
    verdicts
        .iter()
        .map(|v| {
            format!(
                "path {}: parity {} tag {} -> {} (T = {})",
                v.path,
                if v.parity_ok { "ok" } else { "fail" },
                if v.tag_ok { "ok" } else { "fail" },
                if v.valid { "valid" } else { "flagged" },
                v.tag
            )
        })
        .collect()
}

pub fn cmd_attack(
    params: &SecoqcParams,
    delta2: &str,
    honest: bool,
    run: &RunArgs,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    check_format(format, &[Format::Json, Format::Table], "attack")?;
    params.validate()?;
    let trials = run.trials.unwrap_or(1000);
    if trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    if honest {
        let runs = run_trials(trials, run.jobs, |t| {
            secoqc::secoqc_honest_run(params, &mut trial_rng(run.seed, t, Stream::Game))
        });
        let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
        let summary = HonestSummary {
            trials,
            seed: run.seed,
            accepted: runs.iter().filter(|r| r.accept).count() as u64,
            all_paths_valid: runs
                .iter()
                .filter(|r| r.verdicts.iter().all(|v| v.valid))
                .count() as u64,
            verdicts: runs[0].verdicts.clone(),
        };
        match format {
            Format::Json => write_json(out, &summary)?,
            _ => {
                let mut rows = vec![
                    ("mode", "honest".to_string()),
                    ("trials", trials.to_string()),
                    ("accepted", summary.accepted.to_string()),
                    ("all paths valid", summary.all_paths_valid.to_string()),
                ];
                rows.extend(
                    verdict_rows(&summary.verdicts)
                        .into_iter()
                        .map(|v| ("verdict", v)),
                );
                write_table(out, &rows)?;
            }
        }
        let ok = summary.accepted == trials && summary.all_paths_valid == trials;
        return Ok(if ok { EXIT_OK } else { EXIT_VIOLATION });
    }
    let spec = params.tag_field()?;
    let delta = parse_element(&spec, delta2)?;
    if delta.is_zero() {
        return Err(usage(
            "--delta2 must be non-zero: a zero shift changes nothing, so every path verifies and no path is misidentified",
        ));
    }
    let summary: AttackSummary = secoqc::attack_batch(params, &delta, trials, run.seed, run.jobs)?;
    match format {
        Format::Json => write_json(out, &summary)?,
        _ => {
            let r = &summary.first;
            let mut rows = vec![
                ("mode", "attack".to_string()),
                ("delta2", summary.delta2.clone()),
                ("corrupted path", r.corrupted_path.to_string()),
                ("trials", trials.to_string()),
                ("successes", summary.successes.to_string()),
                ("success rate", fmt_f64(summary.success_rate)),
                ("identity failures", summary.identity_failures.to_string()),
                ("alice tag", r.alice_tag.clone()),
                ("bob expects", r.bob_expected_tag.clone()),
                ("bob accepts", r.accept.to_string()),
            ];
            rows.extend(
                verdict_rows(&r.verdicts)
                    .into_iter()
                    .map(|v| ("verdict", v)),
            );
            rows.extend(r.tag_differences.iter().map(|d| {
                (
                    "T_i xor T_n",
                    format!("path {}: {} (= delta2: {})", d.path, d.xor, d.equals_delta2),
                )
            }));
            write_table(out, &rows)?;
        }
    }
    Ok(if summary.successes == trials {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

// ------------------------------------------------------------ replay / oracle / presets

pub fn cmd_replay(
    trace: &PathBuf,
    field: &str,
    lengths: &[usize],
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    check_format(format, &[Format::Json, Format::Table], "replay")?;
    let spec = parse_field(field)?;
    let events = read_trace(BufReader::new(File::open(trace)?))?;
    let paths = replay_trace(&events, &spec, lengths)?;
    match format {
        Format::Json => write_json(out, &paths)?,
        _ => {
            for p in &paths {
                writeln!(
                    out,
                    "path {}: edges {} corrupted {} dropped {} tampered {} shift {}",
                    p.path,
                    p.edges_seen,
                    p.corrupted,
                    p.dropped,
                    p.tampered
                        .map(|b| b.to_string())
                        .unwrap_or_else(|| "unknown".into()),
                    p.total_shift.clone().unwrap_or_else(|| "BOT".into()),
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    field: String,
    d: usize,
    delta: String,
    value: f64,
    conjectured: f64,
    conjecture_upper_bounds: bool,
}

pub fn cmd_delta_oracle(
    field: &FieldArgs,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    check_format(format, &[Format::Json, Format::Table], "delta-oracle")?;
    let params = amd_params(field)?;
    let exact = amd::delta_oracle(&params)?;
    let conjectured = amd::conjectured_delta(&params);
    let q = params.spec().order();
    let result = OracleOutput {
        field: params.spec().to_string(),
        d: params.d(),
        delta: format!("{}/{}", exact.num, exact.den),
        value: exact.to_f64(),
        conjectured,
        conjecture_upper_bounds: exact.le(&amd::Ratio::new(params.d() as u128 + 1, q)),
    };
    match format {
        Format::Json => write_json(out, &result)?,
        _ => write_table(
            out,
            &[
                ("field", result.field.clone()),
                ("d", result.d.to_string()),
                (
                    "delta",
                    format!("{} = {}", result.delta, fmt_f64(result.value)),
                ),
                ("(d+1)/q", fmt_f64(conjectured)),
                (
                    "(d+1)/q >= delta",
                    result.conjecture_upper_bounds.to_string(),
                ),
            ],
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct PresetInfo {
    pub name: String,
    pub field: String,
    pub d: usize,
    pub valid: bool,
    pub codeword_len: Option<usize>,
    pub overhead_elements: Option<usize>,
    pub overhead_bits: Option<f64>,
}

/// Codeword geometry for every preset at message length `d`.
pub fn preset_table(d: usize) -> Vec<PresetInfo> {
    PRESETS
        .iter()
        .map(|&name| {
            let spec = parse_field(name).expect("preset");
            let params = AmdParams::new(spec, d).ok();
            PresetInfo {
                name: name.into(),
                field: spec.to_string(),
                d,
                valid: params.is_some(),
                codeword_len: params.map(|p| p.encoded_len()),
                overhead_elements: params.map(|p| p.encoded_len() - p.d()),
                overhead_bits: params.map(|p| p.overhead_bits()),
            }
        })
        .collect()
}

pub fn cmd_presets(d: usize, format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let table = preset_table(d);
    match format {
        Format::Json => write_json(out, &table)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for p in &table {
                w.serialize(p)?;
            }
            w.flush()?;
        }
        Format::Table => {
            for p in &table {
                match p.codeword_len {
                    Some(len) => writeln!(
                        out,
                        "{:<7} {:<10} d={} codeword={} overhead={} elements ({:.0} bits)",
                        p.name,
                        p.field,
                        d,
                        len,
                        p.overhead_elements.unwrap_or(0),
                        p.overhead_bits.unwrap_or(0.0)
                    )?,
                    None => writeln!(
                        out,
                        "{:<7} {:<10} d={} invalid (p | d+2)",
                        p.name, p.field, d
                    )?,
                }
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("amd-relay").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn field_names() {
        assert_eq!(parse_field("gf7").unwrap(), FieldSpec::prime(7).unwrap());
        assert_eq!(parse_field("gf8").unwrap(), FieldSpec::binary(3).unwrap());
        assert_eq!(
            parse_field("GF2_86").unwrap(),
            FieldSpec::binary(86).unwrap()
        );
        assert_eq!(
            parse_field("gf2^16").unwrap(),
            FieldSpec::binary(16).unwrap()
        );
        assert_eq!(parse_field("gf2").unwrap(), FieldSpec::prime(2).unwrap());
        assert!(parse_field("gf9").is_err());
        assert!(parse_field("foo").is_err());
        for p in PRESETS {
            parse_field(p).unwrap();
        }
    }

    #[test]
    fn tamper_syntax() {
        let spec = FieldSpec::prime(7).unwrap();
        let t = parse_tamper(&spec, 3, "2:1:5").unwrap();
        assert_eq!((t.path, t.edge), (1, 0));
        assert_eq!(t.delta, vec![spec.element(5).unwrap(); 3]);
        let t = parse_tamper(&spec, 3, "1:2:1,2,3").unwrap();
        assert_eq!(t.delta[2], spec.element(3).unwrap());
        assert!(parse_tamper(&spec, 3, "0:1:1").is_err());
        assert!(parse_tamper(&spec, 3, "1:1:1,2").is_err());
        assert!(parse_tamper(&spec, 3, "1:1").is_err());
        assert!(parse_tamper(&spec, 3, "1:1:9").is_err());
    }

    #[test]
    fn encode_decode_exit_codes() {
        let (code, out, _) = call(&["encode", "--field", "gf7", "--x", "2", "1,2,3"]);
        assert_eq!(code, EXIT_OK);
        let cw = out.trim().to_string();
        assert_eq!(cw.split(' ').count(), 5);
        let (code, out, _) = call(&["decode", "--field", "gf7", &cw]);
        assert_eq!((code, out.trim()), (EXIT_OK, "01 02 03"));
        // x = 2: 2^5 + 1*2 + 2*4 + 3*8 = 66 = 3 mod 7.
        assert_eq!(cw, "01 02 03 02 03");
        let mut parts: Vec<String> = cw.split(' ').map(String::from).collect();
        parts[4] = "04".into();
        let (code, out, _) = call(&["decode", "--field", "gf7", &parts.join(" ")]);
        assert_eq!((code, out.trim()), (EXIT_BOT, "BOT"));
    }

    #[test]
    fn errors_exit_one() {
        assert_eq!(call(&["encode", "--field", "gf7", "zz"]).0, EXIT_ERROR);
        assert_eq!(
            call(&["encode", "--field", "gf2_8", "--d", "2", "1,2"]).0,
            EXIT_ERROR
        );
        assert_eq!(call(&["bogus"]).0, EXIT_ERROR);
        let (code, _, err) = call(&["game", "forge-relay", "nobody", "--field", "gf2_16"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("root-planting"), "{err}");
        let (code, _, err) = call(&["attack", "--delta2", "0"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("non-zero"));
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }
}
