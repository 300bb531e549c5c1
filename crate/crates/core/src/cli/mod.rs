//! The `lattes-pillow` command line.

mod output;
pub mod svg;

use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::budget::Budget;
use crate::classify::lattes_verdict;
use crate::error::{Error, Result};
use crate::exact::IntMat2;
use crate::expansion::{dn_report, lambda0_estimate, menger_verify, DnMethod};
use crate::metrics::{default_pairs, visual_report, DEFAULT_LEVEL_CAP, DEFAULT_PAIRS, DEFAULT_WINDOW};
use crate::orbifold::{nu_minimal, Portrait};
use crate::pillow::{cell_counts, make_map, LattesTypeMap, PillowPoint};

use self::output::{Document, Format};

#[derive(Parser, Debug)]
#[command(name = "lattes-pillow", version, about = "Combinatorial invariants of Lattès-type maps on the pillow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Row-major integer matrix `a,b,c,d`.
    #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
    matrix: IntMat2,
}

#[derive(Args, Debug)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Planar,
    Folded,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vertex, edge and tile counts with the Euler check.
    Cells {
        #[command(flatten)]
        map: MapArgs,
        /// A level `n` or an inclusive range `a..b`.
        #[arg(long, value_parser = parse_levels, default_value = "0..3")]
        levels: RangeInclusive<u32>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// D_n with its operator-norm bounds.
    Dn {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = parse_levels, default_value = "1..6")]
        levels: RangeInclusive<u32>,
        #[arg(long, value_enum, default_value_t = MethodArg::Planar)]
        method: MethodArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// D_n^(1/n) against the smallest eigenvalue modulus.
    Lambda0 {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Disjoint-path bound inside one 0-tile.
    Menger {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = parse_levels, default_value = "1..2")]
        levels: RangeInclusive<u32>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimal orbifold function of a portrait JSON file (`-` for stdin).
    Orbifold {
        #[arg(long)]
        portrait: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Separation levels and d_n over sample pairs.
    Metric {
        #[command(flatten)]
        map: MapArgs,
        /// JSON list of `{"p": {"x": "1/3", "y": "1/5"}, "q": {...}}`; default is a Halton grid.
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_PAIRS)]
        pairs: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: u32,
        #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
        level_cap: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lattès or not, with the D_n growth witness.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// SVG of the level-n tiles over the window [0,2] x [0,1].
    Render {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = parse_levels, default_value = "1")]
        levels: RangeInclusive<u32>,
        #[arg(long, value_enum, default_value_t = FormatArg::Svg)]
        format: FormatArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_matrix(s: &str) -> std::result::Result<IntMat2, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated integers, got {s:?}"));
    }
    let mut v = Vec::new();
    for p in parts {
        v.push(p.parse::<BigInt>().map_err(|_| format!("not an integer: {p:?}"))?);
    }
    let [a, b, c, d]: [BigInt; 4] = v.try_into().unwrap();
    Ok(IntMat2 { a, b, c, d })
}

fn parse_levels(s: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("not a level: {t:?}"));
    let range = match s.split_once("..") {
        None => num(s).map(|n| n..=n)?,
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
    };
    if range.is_empty() {
        return Err(format!("empty level range {s:?}"));
    }
    Ok(range)
}

#[derive(serde::Deserialize)]
struct SamplePair {
    p: PillowPoint,
    q: PillowPoint,
}

/// Runs the command line, writing to the process streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Exit status 0 on success, 1 on invalid input, 2 when a budget ran out.
pub fn run_with<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return 1;
        }
    };
    match execute(cli).and_then(|(text, path)| emit(&text, path.as_ref(), stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.to_string().replace('\n', " "));
            if e.is_budget() {
                2
            } else {
                1
            }
        }
    }
}

fn emit(text: &str, path: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    let io_err = |e: io::Error| Error::InvalidInput(e.to_string());
    match path {
        Some(p) => fs::write(p, text).map_err(io_err),
        None => stdout.write_all(text.as_bytes()).map_err(io_err),
    }
}

fn load_map(args: &MapArgs) -> Result<LattesTypeMap> {
    make_map(args.matrix.clone())
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn format_of(f: FormatArg) -> Result<Format> {
    match f {
        FormatArg::Json => Ok(Format::Json),
        FormatArg::Csv => Ok(Format::Csv),
        FormatArg::Text => Ok(Format::Text),
        FormatArg::Svg => Err(Error::InvalidInput("svg output is only available for render".into())),
    }
}

fn execute(cli: Cli) -> Result<(String, Option<PathBuf>)> {
    let budget = Budget::from_env().map_err(Error::InvalidInput)?;
    let (doc, out) = match cli.command {
        Command::Cells { map, levels, out } => {
            let m = load_map(&map)?;
            let rows = levels
                .map(|n| cell_counts(&m, n, &budget).map(|c| output::CellsRow::new(n, c)))
                .collect::<Result<Vec<_>>>()?;
            (Document::Cells(rows), out)
        }
        Command::Dn { map, levels, method, out } => {
            let m = load_map(&map)?;
            let method = match method {
                MethodArg::Planar => DnMethod::Planar,
                MethodArg::Folded => DnMethod::Folded,
                MethodArg::Both => DnMethod::Both,
            };
            let rows = levels.map(|n| dn_report(&m, n, method, &budget)).collect::<Result<Vec<_>>>()?;
            (Document::Dn(rows), out)
        }
        Command::Lambda0 { map, n_max, out } => {
            let m = load_map(&map)?;
            (Document::Lambda0(lambda0_estimate(&m, n_max, &budget)?), out)
        }
        Command::Menger { map, levels, out } => {
            let m = load_map(&map)?;
            let rows = levels.map(|n| menger_verify(&m, n, &budget)).collect::<Result<Vec<_>>>()?;
            (Document::Menger(rows), out)
        }
        Command::Orbifold { portrait, out } => {
            let p = Portrait::from_json(&read_input(&portrait)?)?;
            (Document::Orbifold(nu_minimal(&p)?), out)
        }
        Command::Metric { map, samples, pairs, window, level_cap, out } => {
            let m = load_map(&map)?;
            let pairs = match samples {
                Some(path) => {
                    let raw: Vec<SamplePair> = serde_json::from_str(&read_input(&path)?)
                        .map_err(|e| Error::InvalidInput(format!("sample file: {e}")))?;
                    raw.into_iter()
                        .map(|s| (PillowPoint::new(s.p.x, s.p.y), PillowPoint::new(s.q.x, s.q.y)))
                        .collect()
                }
                None => default_pairs(pairs),
            };
            (Document::Metric(visual_report(&m, &pairs, window, level_cap, &budget)?), out)
        }
        Command::Classify { map, n_max, out } => {
            let m = load_map(&map)?;
            (Document::Classify(lattes_verdict(&m, n_max, &budget)?), out)
        }
        Command::Render { map, levels, format, output } => {
            let m = load_map(&map)?;
            if format != FormatArg::Svg {
                return Err(Error::InvalidInput("render only writes svg".into()));
            }
            if levels.start() != levels.end() {
                return Err(Error::InvalidInput("render takes a single level".into()));
            }
            return Ok((svg::render_svg(&m, *levels.start(), &budget)?, output));
        }
    };
    Ok((doc.render(format_of(out.format)?)?, out.output))
}
