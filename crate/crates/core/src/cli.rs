use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ar_quiver::ARQuiver;
use crate::orders::{canonical_reading, classify_all, ConvexOrder, Strategy, Verdict};
use crate::qaffine::{denom, dorey, zero_multiplicity, Family, HomTriple, SpectralParam};
use crate::quiver::{parse_anchor, DynkinQuiver};
use crate::root_system::{CartanDatum, DiagramType};
use crate::verify::{run_suite, Status, Suite, SuiteOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Dot,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "arq", version, about = "AR quivers, convex orders and Dorey-rule checks for types A and D")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct QuiverArgs {
    #[arg(long = "type", default_value = "D")]
    pub ty: DiagramType,
    #[arg(long)]
    pub rank: usize,
    /// Arrows such as "2>1,3>2,2>4".
    #[arg(long, conflicts_with = "mask")]
    pub arrows: Option<String>,
    /// Orientation bitmask (bit e reverses edge e).
    #[arg(long)]
    pub mask: Option<u64>,
    /// Height anchor such as "3=0"; defaults to vertex n at 0.
    #[arg(long)]
    pub xi: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the positive roots.
    Roots {
        #[arg(long = "type", default_value = "D")]
        ty: DiagramType,
        #[arg(long)]
        rank: usize,
    },
    /// Build and render the AR quiver.
    Build(QuiverArgs),
    /// Print a convex order from a canonical reading or a reduced word.
    Order {
        #[command(flatten)]
        q: QuiverArgs,
        #[arg(long, default_value = "u1")]
        strategy: String,
        /// Comma separated reduced word; overrides the strategy.
        #[arg(long)]
        word: Option<String>,
    },
    /// Classify the pairs of a root.
    Pairs {
        #[command(flatten)]
        q: QuiverArgs,
        /// Root as "e1+e2", "<1,-3>" or "[1,1,0,0]".
        #[arg(long)]
        gamma: String,
    },
    /// Denominator zeros.
    Denom {
        #[arg(long, default_value = "D1")]
        family: Family,
        #[arg(long)]
        rank: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'l')]
        l: usize,
        /// Report the multiplicity at this parameter, e.g. "(-q)^4".
        #[arg(long)]
        at: Option<String>,
    },
    /// Dorey-rule verdict for a triple "(i,x);(j,y);(k,z)".
    Dorey {
        #[arg(long, default_value = "D1")]
        family: Family,
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        triple: String,
    },
    /// Run the exhaustive checks.
    Verify {
        #[arg(long = "rank-max")]
        rank_max: usize,
        #[arg(long = "rank-min", default_value_t = 4)]
        rank_min: usize,
        /// structure, orders, qaffine or all; may repeat.
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
        /// Restrict to these check ids.
        #[arg(long)]
        check: Vec<String>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also write the report as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record per-check wall time.
        #[arg(long)]
        timing: bool,
    },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

fn usage(msg: impl ToString) -> CliError {
    CliError { code: 2, message: msg.to_string() }
}

pub fn load_quiver(a: &QuiverArgs) -> Result<ARQuiver, CliError> {
    let datum = CartanDatum::new(a.ty, a.rank).map_err(usage)?;
    let q = match (&a.arrows, a.mask) {
        (Some(s), _) => DynkinQuiver::parse(&datum, s).map_err(usage)?,
        (None, m) => DynkinQuiver::from_mask(&datum, m.unwrap_or(0)).map_err(usage)?,
    };
    let xi = match &a.xi {
        Some(s) => {
            let (v, x) = parse_anchor(s).map_err(usage)?;
            q.height_function(v, x).map_err(usage)?
        }
        None => q.default_heights(),
    };
    ARQuiver::build(&q, &xi).map_err(|e| CliError { code: 1, message: e.to_string() })
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes") + "\n"
}

#[derive(Serialize)]
struct RootRow {
    coeffs: Vec<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<[i32; 2]>,
    height: i32,
}

#[derive(Serialize)]
struct OrderJson {
    word: Vec<usize>,
    roots: Vec<String>,
}

#[derive(Serialize)]
struct PairJson {
    gamma: String,
    alpha: String,
    beta: String,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimal_in: Option<Strategy>,
    validated: bool,
}

#[derive(Serialize)]
struct DenomJson {
    factors: Vec<SpectralParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicity: Option<usize>,
}

#[derive(Serialize)]
struct DoreyJson {
    family: Family,
    triple: HomTriple,
    yes: bool,
    case: Option<String>,
    iff: bool,
}

fn render_order(datum: &CartanDatum, o: &ConvexOrder, format: Format) -> String {
    let labels: Vec<String> = o.roots().iter().map(|r| datum.format_root(r)).collect();
    match format {
        Format::Json => json(&OrderJson { word: o.word().to_vec(), roots: labels }),
        _ => {
            let w: Vec<String> = o.word().iter().map(|i| i.to_string()).collect();
            format!("word {}\n{}\n", w.join(","), labels.join(" "))
        }
    }
}

/// Runs one parsed command and returns its text output plus the exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let format = cli.format;
    let mut out = String::new();
    let mut code = 0;
    match &cli.command {
        Command::Roots { ty, rank } => {
            let d = CartanDatum::new(*ty, *rank).map_err(usage)?;
            let rows: Vec<RootRow> = d
                .positive_roots()
                .iter()
                .map(|r| RootRow {
                    coeffs: r.coeffs().to_vec(),
                    eps: d.epsilon_form(r).ok().map(|e| [e.a as i32, e.b]),
                    height: r.height(),
                })
                .collect();
            match format {
                Format::Json => out = json(&rows),
                _ => {
                    for r in &rows {
                        let coeffs: Vec<String> = r.coeffs.iter().map(|c| c.to_string()).collect();
                        let _ = write!(out, "[{}]", coeffs.join(","));
                        if let Some([a, b]) = r.eps {
                            let _ = write!(out, "  <{a},{b}>");
                        }
                        out.push('\n');
                    }
                }
            }
        }
        Command::Build(a) => {
            let ar = load_quiver(a)?;
            out = match format {
                Format::Ascii => ar.to_ascii(),
                Format::Dot => ar.to_dot(),
                Format::Json => ar.to_json() + "\n",
            };
        }
        Command::Order { q, strategy, word } => {
            let ar = load_quiver(q)?;
            match word {
                Some(w) => {
                    let w: Vec<usize> = w
                        .split(',')
                        .map(|x| x.trim().parse().map_err(|_| usage(format!("bad word {w:?}"))))
                        .collect::<Result<_, _>>()?;
                    let o = ConvexOrder::from_word(ar.datum(), &w).map_err(usage)?;
                    out = render_order(ar.datum(), &o, format);
                }
                None => {
                    let strategies: Vec<Strategy> = if strategy == "all" {
                        Strategy::ALL.to_vec()
                    } else {
                        vec![strategy.parse().map_err(usage)?]
                    };
                    for s in strategies {
                        let o = canonical_reading(&ar, s).map_err(|e| CliError { code: 1, message: e.to_string() })?;
                        if format != Format::Json {
                            let _ = writeln!(out, "{s}:");
                        }
                        out.push_str(&render_order(ar.datum(), &o, format));
                    }
                }
            }
        }
        Command::Pairs { q, gamma } => {
            let ar = load_quiver(q)?;
            let d = ar.datum().clone();
            let g = d.parse_root(gamma).map_err(usage)?;
            let vs = classify_all(&ar, &g).map_err(usage)?;
            let f = |r| d.format_root(r);
            match format {
                Format::Json => {
                    let rows: Vec<PairJson> = vs
                        .iter()
                        .map(|v| PairJson {
                            gamma: f(&v.gamma),
                            alpha: f(&v.alpha),
                            beta: f(&v.beta),
                            verdict: v.verdict,
                            witness: v.witness.as_ref().map(|(a, b)| [f(a), f(b)]),
                            minimal_in: v.minimal_in,
                            validated: v.validated,
                        })
                        .collect();
                    out = json(&rows);
                }
                _ => {
                    for v in &vs {
                        let tag = match (&v.verdict, &v.witness, v.minimal_in) {
                            (Verdict::NonMinimal, Some((a, b)), _) => format!("non-minimal  (dominated by {} + {})", f(a), f(b)),
                            (_, _, Some(s)) => format!("minimal      (in {s})"),
                            _ => "minimal".to_string(),
                        };
                        let _ = write!(out, "{} = {} + {}  {tag}", f(&v.gamma), f(&v.alpha), f(&v.beta));
                        if !v.validated {
                            out.push_str("  [unvalidated]");
                        }
                        out.push('\n');
                    }
                }
            }
        }
        Command::Denom { family, rank, k, l, at } => {
            let d = denom(*family, *rank, *k, *l).map_err(usage)?;
            let at = at.as_deref().map(SpectralParam::parse).transpose().map_err(usage)?;
            let mult = at.map(|a| zero_multiplicity(&d, a));
            match format {
                Format::Json => out = json(&DenomJson { factors: d.roots.clone(), multiplicity: mult }),
                _ => {
                    let _ = writeln!(out, "d_{{{k},{l}}}(z), {family} rank {rank}, degree {}", d.degree());
                    for r in &d.roots {
                        let _ = writeln!(out, "  (z - {r})");
                    }
                    if let (Some(a), Some(m)) = (at, mult) {
                        let _ = writeln!(out, "multiplicity at {a}: {m}");
                    }
                }
            }
        }
        Command::Dorey { family, rank, triple } => {
            let t = HomTriple::parse(triple).map_err(usage)?;
            let v = dorey(*family, *rank, &t).map_err(usage)?;
            match format {
                Format::Json => {
                    out = json(&DoreyJson {
                        family: *family,
                        triple: t,
                        yes: v.is_yes(),
                        case: v.case.map(|c| c.to_string()),
                        iff: v.iff,
                    })
                }
                _ => {
                    out = match (v.case, v.iff) {
                        (Some(c), _) => format!("yes ({c})\n"),
                        (None, true) => "no\n".to_string(),
                        (None, false) => "no matching case (the rule is only sufficient)\n".to_string(),
                    }
                }
            }
        }
        Command::Verify { rank_max, rank_min, suite, check, jobs, json: json_path, timing } => {
            if *rank_max < 4 {
                return Err(usage("--rank-max must be at least 4"));
            }
            let mut suites = BTreeSet::new();
            for s in suite {
                if s == "all" {
                    suites.extend(Suite::ALL);
                } else {
                    suites.insert(s.parse::<Suite>().map_err(usage)?);
                }
            }
            let mut opts = SuiteOptions::new(*rank_max, suites);
            opts.rank_min = *rank_min;
            opts.jobs = *jobs;
            opts.timing = *timing;
            opts.only = check.iter().cloned().collect();
            let report = run_suite(&opts);
            if let Some(p) = json_path {
                std::fs::write(p, report.to_json() + "\n").map_err(|e| CliError { code: 1, message: e.to_string() })?;
            }
            match format {
                Format::Json => out = report.to_json() + "\n",
                _ => {
                    for r in report.failures() {
                        let _ = writeln!(
                            out,
                            "FAIL {} n={} {}: {}",
                            r.check_id,
                            r.n,
                            r.orientation.as_deref().unwrap_or("-"),
                            r.counterexample.as_deref().unwrap_or("")
                        );
                    }
                    let _ = writeln!(
                        out,
                        "{} passed, {} failed, {} skipped",
                        report.count(Status::Pass),
                        report.count(Status::Fail),
                        report.count(Status::Skip)
                    );
                }
            }
            if !report.all_pass() {
                code = 1;
            }
        }
    }
    Ok((out, code))
}

/// Parses `args`, runs the command and writes its output; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &text),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            if e.code == 2 {
                let _ = writeln!(stderr, "\nFor more information, try '--help'.");
            }
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("arq").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn build_ascii_example1() {
        let (code, out, _) = call(&["build", "--type", "D", "--rank", "4", "--arrows", "2>1,3>2,2>4", "--xi", "3=0"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("(i,p)"));
        let row3 = out.lines().find(|l| l.trim_start().starts_with("3 ")).unwrap();
        assert!(row3.ends_with("<3,-4>"));
    }

    #[test]
    fn pairs_example1() {
        let (code, out, _) = call(&["pairs", "--rank", "4", "--arrows", "2>1,3>2,2>4", "--xi", "3=0", "--gamma", "e1+e2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.contains(" minimal")).count(), 3);
        assert_eq!(out.lines().filter(|l| l.contains("non-minimal")).count(), 1);
    }

    #[test]
    fn roots_a1() {
        let (code, out, _) = call(&["roots", "--type", "A", "--rank", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "[1]");
    }

    #[test]
    fn parse_errors_exit_2() {
        assert_eq!(call(&["build", "--rank", "4", "--arrows", "2>9"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["denom", "--rank", "4", "-k", "0", "-l", "1"]).0, 2);
        assert_eq!(call(&["--version"]).0, 0);
    }

    #[test]
    fn denom_and_dorey() {
        let (code, out, _) = call(&["--format", "json", "denom", "--rank", "4", "-k", "2", "-l", "2", "--at", "(-q)^4"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["multiplicity"], 2);
        assert_eq!(v["factors"].as_array().unwrap().len(), 4);
        let (code, out, _) = call(&["dorey", "--rank", "4", "--triple", "(3,-4);(3,-2);(2,-3)"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "yes (iii)");
    }

    #[test]
    fn json_round_trip() {
        let (_, out, _) = call(&["--format", "json", "build", "--rank", "5", "--mask", "9"]);
        let ar = ARQuiver::from_json(&out).unwrap();
        let (_, again, _) = call(&["--format", "json", "build", "--rank", "5", "--mask", "9"]);
        assert_eq!(ar.to_json() + "\n", again);
    }

    #[test]
    fn verify_rank4() {
        let (code, out, _) = call(&["verify", "--rank-max", "4", "--suite", "structure"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("0 failed"));
    }
}
