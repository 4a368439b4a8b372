//! Command-line front end. [`run`] parses arguments, writes results to `out`
//! (or the `--out` file) and diagnostics to `err`, and returns the exit code:
//! 0 on success, 1 when a verdict fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::divisors::{self, Mode};
use crate::error::{Error, Result};
use crate::factor;
use crate::mersenne::{self, MersennePrime};
use crate::poly::Poly;
use crate::search::{self, Family, SearchConfig};
use crate::verify::{self, Verdict, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gf2perfect", version, about = "Perfect and unitary perfect polynomials over GF(2)")]
struct Cli {
    /// Seed for the randomized factorization step.
    #[arg(long, global = true, env = "GF2PERFECT_SEED", default_value_t = factor::DEFAULT_SEED)]
    seed: u64,
    /// Write results to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Worker threads for verify and search (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Perfect,
    Unitary,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Perfect => Mode::Perfect,
            ModeArg::Unitary => Mode::Unitary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Mersenne,
    All,
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factor a polynomial into irreducibles.
    Factor {
        #[arg(required = true)]
        polys: Vec<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Print sigma(A), or sigma*(A) with --unitary.
    Sigma {
        #[arg(required = true)]
        polys: Vec<String>,
        #[arg(long)]
        unitary: bool,
        /// Print the sum in factored form.
        #[arg(long)]
        factored: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Test whether polynomials are perfect or unitary perfect.
    Check {
        #[arg(long, value_enum, default_value_t = ModeArg::Perfect)]
        mode: ModeArg,
        #[arg(required = true)]
        polys: Vec<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// List Mersenne primes 1 + x^a (x+1)^b up to a degree.
    Mersenne {
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the claim checkers over Mersenne primes and exponents.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[arg(long, default_value_t = 30)]
        max_h: u32,
        /// Restrict to one claim id.
        #[arg(long)]
        claim: Option<String>,
        /// List the claim ids and exit.
        #[arg(long)]
        list_claims: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Search for perfect or unitary perfect polynomials.
    Search {
        #[arg(long, value_enum, default_value_t = ModeArg::Perfect)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = FamilyArg::Mersenne)]
        family: FamilyArg,
        #[arg(long)]
        max_degree: usize,
        /// Keep unitary hits that are squares of smaller hits.
        #[arg(long)]
        all_powers: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Coefficients of sigma(sigma(M^6)) for a Mersenne prime M.
    #[command(name = "explore-p7")]
    ExploreP7 {
        mersenne: String,
        #[command(flatten)]
        format: FormatArg,
    },
}

fn parse_poly(s: &str) -> Result<Poly> {
    let p: Poly = s.parse()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(p)
}

fn line(out: &mut dyn Write, s: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{s}").map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut file;
    let sink: &mut dyn Write = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = io::BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(err, "error: cannot create {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => out,
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(&cli, &mut buf));
                match sink.write_all(&buf) {
                    Ok(()) => r,
                    Err(e) => Err(Error::InvalidArgument(format!("write failed: {e}"))),
                }
            }
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
        None => dispatch(&cli, sink),
    };
    let flushed = sink.flush();
    match result {
        Ok(code) => {
            if let Err(e) = flushed {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Factor { polys, format } => cmd_factor(polys, format.format, cli.seed, out),
        Command::Sigma { polys, unitary, factored, format } => {
            let mode = if *unitary { Mode::Unitary } else { Mode::Perfect };
            cmd_sigma(polys, mode, *factored, format.format, cli.seed, out)
        }
        Command::Check { mode, polys, format } => cmd_check(polys, (*mode).into(), format.format, out),
        Command::Mersenne { max_degree, format } => cmd_mersenne(*max_degree, *format, out),
        Command::Verify { max_degree, max_h, claim, list_claims, format } => {
            if *list_claims {
                for c in verify::claims::ALL {
                    line(out, c)?;
                }
                return Ok(EXIT_OK);
            }
            let cfg = VerifyConfig {
                claim: claim.clone(),
                ..VerifyConfig::new(*max_degree, *max_h)
            };
            cmd_verify(&cfg, format.format, out)
        }
        Command::Search { mode, family, max_degree, all_powers, format } => {
            let cfg = SearchConfig {
                seed: cli.seed,
                all_powers: *all_powers,
                ..SearchConfig::new(
                    *max_degree,
                    (*mode).into(),
                    match family {
                        FamilyArg::Mersenne => Family::MersenneRestricted,
                        FamilyArg::All => Family::All,
                    },
                )
            };
            cmd_search(&cfg, format.format, out)
        }
        Command::ExploreP7 { mersenne, format } => cmd_explore(mersenne, format.format, out),
    }
}

fn cmd_factor(polys: &[String], format: Format, seed: u64, out: &mut dyn Write) -> Result<i32> {
    for s in polys {
        let p = parse_poly(s)?;
        let f = factor::factorize_seeded(&p, seed)?;
        match format {
            Format::Text => line(out, &f)?,
            Format::Json => line(out, json!({ "poly": p, "factors": f }))?,
        }
    }
    Ok(EXIT_OK)
}

fn cmd_sigma(
    polys: &[String],
    mode: Mode,
    factored: bool,
    format: Format,
    seed: u64,
    out: &mut dyn Write,
) -> Result<i32> {
    for s in polys {
        let p = parse_poly(s)?;
        let sum = mode.divisor_sum(&p)?;
        match format {
            Format::Text if factored => line(out, factor::factorize_seeded(&sum, seed)?)?,
            Format::Text => line(out, &sum)?,
            Format::Json => line(
                out,
                json!({
                    "poly": p,
                    "mode": mode,
                    "sum": sum,
                    "factored": factor::factorize_seeded(&sum, seed)?.to_string(),
                }),
            )?,
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(polys: &[String], mode: Mode, format: Format, out: &mut dyn Write) -> Result<i32> {
    let mut code = EXIT_OK;
    for s in polys {
        let p = parse_poly(s)?;
        let report = divisors::check(&p, mode)?;
        if !report.verdict {
            code = EXIT_FAIL;
        }
        match format {
            Format::Json => line(out, serde_json::to_string(&report).expect("reports serialize"))?,
            Format::Text => match &report.witness {
                None => line(out, format!("{s}: {}", report.verdict))?,
                Some(w) => line(out, format!("{s}: false witness=({}, {}, {})", w.prime, w.m1, w.m2))?,
            },
        }
    }
    Ok(code)
}

fn cmd_mersenne(max_degree: u32, format: Format, out: &mut dyn Write) -> Result<i32> {
    for m in mersenne::enumerate_mersenne_primes(max_degree) {
        match format {
            Format::Json => line(out, serde_json::to_string(&m).expect("primes serialize"))?,
            Format::Text => line(out, format!("{:<8} {:>3}  {}", m.label(), m.degree(), m.poly))?,
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(cfg: &VerifyConfig, format: Format, out: &mut dyn Write) -> Result<i32> {
    let reports = verify::run(cfg)?;
    let mut counts = [0usize; 3];
    for r in &reports {
        counts[match r.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::OutOfScope => 2,
        }] += 1;
        match format {
            Format::Json => line(out, r.to_json_line())?,
            Format::Text => line(out, r)?,
        }
    }
    if format == Format::Text {
        line(
            out,
            format!("{} pass, {} fail, {} out of scope", counts[0], counts[1], counts[2]),
        )?;
    }
    Ok(if counts[1] > 0 { EXIT_FAIL } else { EXIT_OK })
}

fn cmd_search(cfg: &SearchConfig, format: Format, out: &mut dyn Write) -> Result<i32> {
    let mut hits = match cfg.family {
        Family::MersenneRestricted => search::search_structured(cfg)?
            .into_iter()
            .map(|(p, _)| p)
            .collect(),
        Family::All => search::search_bruteforce(cfg)?,
    };
    if cfg.family == Family::All && cfg.mode == Mode::Unitary && !cfg.all_powers {
        hits.retain(|p| !p.is_square());
    }
    let report = search::classify_hits(&hits, cfg.mode)?;
    for class in &report.classes {
        for hit in &class.members {
            let factored = factor::factorize_seeded(hit, cfg.seed)?.to_string();
            let rep = divisors::canonical_class_rep(hit)?;
            match format {
                Format::Json => line(
                    out,
                    json!({
                        "poly": hit,
                        "factored": factored,
                        "degree": hit.deg(),
                        "class_rep": rep,
                        "label": class.label,
                        "mersenne_only": class.mersenne_only,
                        "decomposable": class.decomposable,
                    }),
                )?,
                Format::Text => {
                    let mut flags = String::new();
                    if !class.mersenne_only {
                        flags.push_str("  [outside Mersenne family]");
                    }
                    if class.decomposable {
                        flags.push_str("  [decomposable]");
                    }
                    let label = class.label.as_deref().unwrap_or("-");
                    line(out, format!("{:>3}  {:<8} {factored}{flags}", hit.deg(), label))?
                }
            }
        }
    }
    if format == Format::Text {
        line(
            out,
            format!("{} hits in {} classes", hits.len(), report.classes.len()),
        )?;
    }
    // structured hits outside the catalog would contradict the classification
    let contradicted = cfg.family == Family::MersenneRestricted
        && (!report.outside_catalog.is_empty() || !report.decomposable.is_empty());
    Ok(if contradicted { EXIT_FAIL } else { EXIT_OK })
}

fn cmd_explore(name: &str, format: Format, out: &mut dyn Write) -> Result<i32> {
    let m = MersennePrime::from_poly(&parse_poly(name)?)?;
    let e = verify::explore_p7(&m)?;
    match format {
        Format::Json => line(out, serde_json::to_string(&e).expect("exploration serializes"))?,
        Format::Text => {
            line(out, format!("M      {}", e.mersenne))?;
            line(out, format!("U_6    {}", e.factored))?;
            let alphas: String = e.alphas.iter().map(|a| char::from(b'0' + a)).collect();
            line(out, format!("alpha  {alphas}"))?;
            let zeros: Vec<String> = e.odd_zeros.iter().map(ToString::to_string).collect();
            line(out, format!("odd l with alpha_l = 0: {}", zeros.join(" ")))?;
        }
    }
    Ok(EXIT_OK)
}
