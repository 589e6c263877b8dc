//! `latches`: solve latch systems, run device models, check traces and fuzz
//! the property suite on text waveform documents.
//!
//! Exit codes: 0 success, 1 a check or property failed (details on stdout),
//! 2 bad usage or input (diagnostic on stderr).

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use ideal_latches::devices::{run_device, DeviceKind, InertialParams};
use ideal_latches::fuzz::{run_fuzz, FuzzConfig};
use ideal_latches::solver::{holds_equation5, holds_system, solve};
use ideal_latches::waveform::{emit_vcd, format_waveforms, parse_waveforms, WaveformDoc};
use ideal_latches::{Bit, Signal, Time};

const DEVICE_HELP: &str = "\
Input signal names per device:
  c       u, v, u1, u2, ...   (every such entry, in document order)
  rs      R, S
  crs     R, S, C
  dlatch  D, C
  edgers  R, S, C
  dff     D, C
  jk      J, K, C
  jk3     J, K, C
  tff     C
  irs     R, S   (with --dr/--df inertial windows)
Outputs P (flip-flops only) and Q are added to the document; other entries pass through.";

#[derive(Parser)]
#[command(name = "latches", version, about = "Ideal latch and flip-flop equations on waveform documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Vcd,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the latch system for `u`, `v` and append the solution `x`.
    Solve {
        /// Input document (`-` for stdin).
        #[arg(long, default_value = "-")]
        input: PathBuf,
        /// Initial state x(0-0).
        #[arg(long, value_parser = parse_bit)]
        init: Bit,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Output file (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a device model on named inputs.
    #[command(after_help = DEVICE_HELP)]
    Device {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(DeviceKind::TOKENS))]
        kind: String,
        #[arg(long, default_value = "-")]
        input: PathBuf,
        /// Initial state Q(0-0).
        #[arg(long, value_parser = parse_bit)]
        init_q: Option<Bit>,
        /// Initial next state P(0-0), required by flip-flops.
        #[arg(long, value_parser = parse_bit)]
        init_p: Option<Bit>,
        /// Rise inertia for `irs`, in ticks.
        #[arg(long, default_value_t = 0)]
        dr: u64,
        /// Fall inertia for `irs`, in ticks.
        #[arg(long, default_value_t = 0)]
        df: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check `x` against the latch system and its single-equation form.
    Check {
        #[arg(long, default_value = "-")]
        input: PathBuf,
    },
    /// Run the randomized property suite.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_toggles: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        horizon: u64,
    },
}

fn parse_bit(s: &str) -> Result<Bit, String> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(format!("expected 0 or 1, found {s:?}")),
    }
}

enum Failure {
    /// A check or property failed; the report is already on stdout.
    Check,
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn read_doc(path: &PathBuf) -> anyhow::Result<WaveformDoc> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        buf
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_waveforms(&text).with_context(|| format!("parsing {}", path.display()))
}

fn require<'a>(doc: &'a WaveformDoc, name: &str) -> anyhow::Result<&'a Signal> {
    doc.get(name).ok_or_else(|| anyhow!("input document has no signal named {name:?}"))
}

fn write_doc(doc: &WaveformDoc, format: Format, output: Option<&PathBuf>) -> anyhow::Result<()> {
    let text = match format {
        Format::Text => format_waveforms(doc),
        Format::Vcd => emit_vcd(doc)?,
    };
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn is_c_element_input(name: &str) -> bool {
    name == "u"
        || name == "v"
        || name.strip_prefix('u').is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { input, init, format, output } => {
            let mut doc = read_doc(&input)?;
            let (u, v) = (require(&doc, "u")?, require(&doc, "v")?);
            let solution = solve(u, v, init).context("solve")?;
            doc.set("x", solution.x).map_err(anyhow::Error::from)?;
            write_doc(&doc, format, output.as_ref())?;
        }
        Command::Device { kind, input, init_q, init_p, dr, df, format, output } => {
            let params = InertialParams { d_r: Time(dr), d_f: Time(df) };
            let kind = DeviceKind::from_token(&kind, params).expect("validated by clap");
            let init_q = init_q.ok_or_else(|| anyhow!("device {kind} needs --init-q"))?;
            if kind.has_next_state() && init_p.is_none() {
                return Err(anyhow!("device {kind} needs --init-p").into());
            }
            let mut doc = read_doc(&input)?;
            let inputs: Vec<(String, Signal)> = match kind {
                DeviceKind::CElement => doc.entries().iter().filter(|(n, _)| is_c_element_input(n)).cloned().collect(),
                _ => kind
                    .input_names()
                    .iter()
                    .map(|&n| require(&doc, n).map(|s| (n.to_owned(), s.clone())))
                    .collect::<anyhow::Result<_>>()?,
            };
            let trace = run_device(kind, &inputs, init_p, init_q).with_context(|| format!("device {kind}"))?;
            if let Some(p) = trace.p {
                doc.set("P", p).map_err(anyhow::Error::from)?;
            }
            doc.set("Q", trace.q).map_err(anyhow::Error::from)?;
            write_doc(&doc, format, output.as_ref())?;
        }
        Command::Check { input } => {
            let doc = read_doc(&input)?;
            let (u, v, x) = (require(&doc, "u")?, require(&doc, "v")?, require(&doc, "x")?);
            let sys = holds_system(u, v, x).context("check")?;
            let eq5 = holds_equation5(u, v, x).context("check")?;
            println!("system: {sys}, eq5: {eq5}");
            if sys.holds() != eq5.holds() {
                println!("verdicts disagree");
            }
            if !(sys.holds() && eq5.holds()) {
                return Err(Failure::Check);
            }
        }
        Command::Fuzz { seed, cases, max_toggles, horizon } => {
            let config = FuzzConfig { seed, cases, max_toggles: max_toggles as usize, horizon: Time(horizon) };
            let report = run_fuzz(&config);
            match report.failure {
                None => println!(
                    "fuzz: {cases} cases (seed {seed}, horizon {horizon}, max toggles {max_toggles}): all properties hold"
                ),
                Some(cx) => {
                    println!("# property {} failed on case {}: {}", cx.property, cx.case, cx.message);
                    print!("{}", format_waveforms(&cx.doc));
                    return Err(Failure::Check);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
