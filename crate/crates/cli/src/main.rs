//! hypdiv: exact certificates for divisor computations on hyperelliptic moduli.
//!
//! Exit codes: 0 success, 1 certificate failure, 2 usage or invalid parameters.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use hypdiv::curves_genus0::{all_pairings, kodaira_report, pair, BCurve, Bound, KodSpace};
use hypdiv::exact::Rat;
use hypdiv::hyp_pic::{cone_report, extremality_system, logan_decomposition};
use hypdiv::pic_genus0::{effective_decomposition, k_plus_half_branch, Variant};
use hypdiv::reidtai::{classify, cover_age, Case, CoverAutGraph, CyclicAction};
use hypdiv::Error;

#[derive(Parser)]
#[command(name = "hypdiv", version, about = "Exact divisor-class certificates on moduli of hyperelliptic curves")]
struct Cli {
    /// Write the report to FILE instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (csv only for scan)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Unordered,
    /// the ordered branch divisor composed down to the symmetrized space
    Ordered,
}

impl VariantArg {
    fn variant(self) -> Variant {
        match self {
            VariantArg::Unordered => Variant::Unordered,
            VariantArg::Ordered => Variant::OrderedComposed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    #[value(name = "Hbar", alias = "unordered")]
    Hbar,
    #[value(name = "Hhat", alias = "ordered")]
    Hhat,
}

impl SpaceArg {
    fn space(self) -> KodSpace {
        match self {
            SpaceArg::Hbar => KodSpace::Unordered,
            SpaceArg::Hhat => KodSpace::Ordered,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Boundary decomposition of K + Br/2 after the Keel substitution
    Decompose {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "unordered")]
        variant: VariantArg,
        /// substitution parameter; overrides the default and allows any n >= 2
        #[arg(long, allow_hyphen_values = true)]
        t: Option<Rat>,
    },
    /// Kodaira dimension with bound certificates
    Kodaira {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "Hbar")]
        space: SpaceArg,
    },
    /// Pairings of K + Br/2 with the B curves
    Intersect {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "unordered")]
        variant: VariantArg,
        /// a single curve "i:S", e.g. "3:1,2" or "0:"
        #[arg(long)]
        curve: Option<String>,
    },
    /// F^t pairings with the D_k and E_k divisors on the two-pointed space
    Cone {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        t: Rat,
    },
    /// Linear system forcing a nef summand of F to be a multiple of F
    Extremality {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
    /// Reid–Tai age of a cyclic action on a pointed rational curve
    Age {
        #[arg(long)]
        case: Case,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        ell: u32,
        /// number of fixed unordered points
        #[arg(long, default_value_t = 0)]
        fixed: u32,
    },
    /// Age of a cover automorphism given as a JSON graph
    CoverAge {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Kodaira regimes over a (g, n) grid, one row per cell
    Scan {
        #[arg(long, value_parser = parse_range)]
        g_range: (u32, u32),
        #[arg(long, value_parser = parse_range)]
        n_range: (u32, u32),
        #[arg(long, value_enum, default_value = "Hbar")]
        space: SpaceArg,
    },
    /// e_irr in K = eps·Σψ + (1-eps)·D_n + E
    Logan {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "0")]
        eps: Rat,
    },
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    if b - a > 10_000 {
        return Err(format!("range {s} too large"));
    }
    Ok((a, b))
}

/// Failure carrying its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::Hypothesis(_) | Error::IterationCap(_) | Error::Singular => 1,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

struct Output {
    body: String,
    ok: bool,
}

fn json_out(v: &Value, ok: bool) -> Output {
    let mut body = serde_json::to_string_pretty(v).expect("serializable");
    body.push('\n');
    Output { body, ok }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn parse_curve(g: u32, n: u32, s: &str) -> Result<BCurve, Fail> {
    let (i, set) = s.split_once(':').ok_or_else(|| Fail(2, format!("curve {s:?} is not i:S")))?;
    let i: u32 = i.trim().parse().map_err(|_| Fail(2, format!("bad index in {s:?}")))?;
    let mut pts = Vec::new();
    for p in set.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        pts.push(p.parse::<u32>().map_err(|_| Fail(2, format!("bad point {p:?} in {s:?}")))?);
    }
    Ok(BCurve::new(g, n, i, &pts)?)
}

fn zero_set(zeros: &[(u32, u32)]) -> String {
    zeros.iter().map(|(i, j)| format!("[{i}]+{j}")).collect::<Vec<_>>().join(";")
}

struct Row {
    g: u32,
    n: u32,
    pairing: Rat,
    regime: String,
    zeros: String,
    error: Option<String>,
}

fn scan_cell(g: u32, n: u32, space: KodSpace) -> Row {
    let cell = || -> Result<Row, Error> {
        let cert = kodaira_report(g, n, space)?;
        let cls = k_plus_half_branch(g, n, space.variant())?;
        let pairing = pair(&BCurve::b0(g, n)?, &cls)?;
        let zeros = if cert.bound == Bound::NegInf {
            String::new()
        } else {
            match effective_decomposition(g, n, space.variant(), None) {
                Ok(d) => zero_set(&d.zeros),
                Err(Error::NoDefaultParameter(_)) => String::new(),
                Err(e) => return Err(e),
            }
        };
        Ok(Row { g, n, pairing, regime: cert.bound.to_string(), zeros, error: None })
    };
    cell().unwrap_or_else(|e| Row { g, n, pairing: Rat::zero(), regime: String::new(), zeros: String::new(), error: Some(e.to_string()) })
}

fn run(cli: &Cli) -> Result<Output, Fail> {
    let format = cli.format.unwrap_or(Format::Json);
    if format == Format::Csv && !matches!(cli.cmd, Cmd::Scan { .. }) {
        return Err(Fail(2, "csv output is only available for scan".into()));
    }
    match &cli.cmd {
        Cmd::Decompose { g, n, variant, t } => {
            let dec = effective_decomposition(*g, *n, variant.variant(), t.clone())?;
            let claim = dec.matches_claim();
            if claim.is_none() && t.is_none() {
                return Err(Fail(2, format!("(g, n) = ({g}, {n}) is outside the claimed range for {}", variant.variant().name())));
            }
            Ok(json_out(&to_value(&dec), claim.unwrap_or(true)))
        }
        Cmd::Kodaira { g, n, space } => {
            let cert = kodaira_report(*g, *n, space.space())?;
            let v = json!({
                "g": g, "n": n, "space": space.space().name(),
                "regime": cert.bound.to_string(),
                "certificate": to_value(&cert),
            });
            Ok(json_out(&v, true))
        }
        Cmd::Intersect { g, n, variant, curve } => {
            let cls = k_plus_half_branch(*g, *n, variant.variant())?;
            let pairs: Vec<Value> = match curve {
                Some(c) => {
                    let b = parse_curve(*g, *n, c)?;
                    vec![json!({"curve": b.to_string(), "value": pair(&b, &cls)?.to_string()})]
                }
                None => all_pairings(&cls)?.iter().map(|(b, v)| json!({"curve": b.to_string(), "value": v.to_string()})).collect(),
            };
            let v = json!({"g": g, "n": n, "variant": variant.variant().name(), "class": to_value(&cls), "pairings": pairs});
            Ok(json_out(&v, true))
        }
        Cmd::Cone { g, k, t } => {
            let rep = cone_report(*g, *k, t)?;
            let ok = rep.report.passed();
            Ok(json_out(&to_value(&rep), ok))
        }
        Cmd::Extremality { g, n } => {
            let e = extremality_system(*g, *n)?;
            let ok = !e.determinant.is_zero() && e.solution.iter().all(|x| x.is_zero());
            Ok(json_out(&to_value(&e), ok))
        }
        Cmd::Age { case, r, s, ell, fixed } => {
            let act = CyclicAction::new(*case, *r, s.unwrap_or(case.s()), *ell, *fixed)?;
            let res = classify(&act);
            let mut v = to_value(&res);
            v["age"] = Value::String(res.age.to_string());
            v["qr"] = Value::Bool(res.is_quasi_reflection);
            Ok(json_out(&v, true))
        }
        Cmd::CoverAge { graph } => {
            let text = std::fs::read_to_string(graph).map_err(|e| Fail(2, format!("{}: {e}", graph.display())))?;
            let gph = CoverAutGraph::from_json(&text)?;
            Ok(json_out(&to_value(&cover_age(&gph)?), true))
        }
        Cmd::Scan { g_range, n_range, space } => {
            let cells: Vec<(u32, u32)> =
                (g_range.0..=g_range.1).flat_map(|g| (n_range.0..=n_range.1).map(move |n| (g, n))).collect();
            let sp = space.space();
            let rows: Vec<Row> = cells.par_iter().map(|&(g, n)| scan_cell(g, n, sp)).collect();
            let ok = rows.iter().all(|r| r.error.is_none());
            match format {
                Format::Csv => {
                    let mut body = String::from("g,n,space,pairing,regime,zero_set\n");
                    for r in &rows {
                        let regime = r.error.as_ref().map(|_| "error").unwrap_or(&r.regime);
                        let _ = writeln!(body, "{},{},{},{},{},{}", r.g, r.n, sp.name(), r.pairing, regime, r.zeros);
                    }
                    Ok(Output { body, ok })
                }
                Format::Json => {
                    let v: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            let mut o = json!({"g": r.g, "n": r.n, "space": sp.name(), "pairing": r.pairing.to_string(), "regime": r.regime, "zero_set": r.zeros});
                            if let Some(e) = &r.error {
                                o["error"] = Value::String(e.clone());
                            }
                            o
                        })
                        .collect();
                    Ok(json_out(&Value::Array(v), ok))
                }
            }
        }
        Cmd::Logan { g, n, eps } => {
            let res = logan_decomposition(*g, *n, eps)?;
            let ok = res.report.passed();
            Ok(json_out(&to_value(&res), ok))
        }
    }
}

fn init_threads() -> Result<(), Fail> {
    if let Ok(v) = std::env::var("HYPDIV_THREADS") {
        let k: usize = v.trim().parse().map_err(|_| Fail(2, format!("HYPDIV_THREADS={v:?} is not a positive integer")))?;
        if k == 0 {
            return Err(Fail(2, "HYPDIV_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| Fail(2, e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| run(&cli));
    match result {
        Ok(out) => {
            match &cli.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &out.body) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", out.body),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: certificate check failed");
                ExitCode::from(1)
            }
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
