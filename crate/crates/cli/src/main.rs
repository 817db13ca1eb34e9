//! `ffchar` — batch front end: build fields, run verification sweeps,
//! compute k-normality censuses, and evaluate individual character sums.
//!
//! Exit codes: 0 success (all identities hold), 1 an identity check
//! failed, 2 usage/configuration/parse errors.
//!
//! Polynomials use the grammar `x^3 + x + 1`, with F_q coefficients as
//! plain residues when e = 1 and bracketed base-p digit tuples such as
//! `[0,1]x + [1,1]` when e > 1.  Elements are named by enumeration index
//! (the base-q digits of the index are the coordinates) or by the same
//! polynomial grammar in x; they are echoed in coefficient form.  In
//! `order` output, `{i}` denotes the top-field element with index i.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ffchar::fields::{build_field, DEFAULT_LIMIT};
use ffchar::linearized::{fq_order, g_alpha, k_normality};
use ffchar::polyring::{factor_divisor, factor_xm_minus_1};
use ffchar::sweep::{census, census_csv, reports_to_json, run_verify, SweepConfig};
use ffchar::sums;
use ffchar::textio::{format_element, format_factored, format_poly, parse_element, parse_poly};

#[derive(Parser)]
#[command(
    name = "ffchar",
    about = "Exact verification of character-sum identities over small finite fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification sweeps and write a JSON report.
    Verify(VerifyArgs),
    /// Classify every element of one field by k-normality (CSV).
    Census(CensusArgs),
    /// Evaluate one character sum, printing oracle and formula values.
    Sum(SumArgs),
    /// Print the F_q-order, k-normality and conjugate polynomial of an element.
    Order(OrderArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON config file (fields: cells, auto_cells, checks, limit,
    /// quadratic_limit, workers, out); flags below override it.
    #[arg(long)]
    config: Option<String>,
    /// Report output path (default: the config's `out`, else stdout).
    #[arg(long)]
    out: Option<String>,
    /// Worker threads; 0 = all cores, 1 = strictly serial.
    #[arg(long)]
    workers: Option<usize>,
    /// Full-sweep cap on q^m.
    #[arg(long)]
    limit: Option<u64>,
    /// Cap for the quadratic-cost checks.
    #[arg(long = "quadratic-limit")]
    quadratic_limit: Option<u64>,
}

#[derive(Args)]
struct CensusArgs {
    p: u64,
    e: u32,
    m: u32,
    /// CSV output path (default stdout).
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SumKind {
    Additive,
    Multiplicative,
    Composed,
}

#[derive(Args)]
struct SumArgs {
    p: u64,
    e: u32,
    m: u32,
    kind: SumKind,
    /// Divisor g of x^m - 1 (additive, composed).
    #[arg(long)]
    g: Option<String>,
    /// Polynomial f acting on the normal element (composed).
    #[arg(long)]
    f: Option<String>,
    /// Element: enumeration index or polynomial in x (additive, composed).
    #[arg(long)]
    alpha: Option<String>,
    /// Character order d | q^m - 1 (multiplicative).
    #[arg(long)]
    d: Option<u64>,
    /// Exponent r (multiplicative).
    #[arg(long)]
    r: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: u64,
}

#[derive(Args)]
struct OrderArgs {
    p: u64,
    e: u32,
    m: u32,
    /// Element: enumeration index or polynomial in x.
    element: String,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: u64,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify(args) => cmd_verify(args),
        Command::Census(args) => cmd_census(args),
        Command::Sum(args) => cmd_sum(args),
        Command::Order(args) => cmd_order(args),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn write_or_print(path: &Option<String>, content: &str) -> Result<(), ExitCode> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| usage_error(format!("writing {p}: {e}"))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return usage_error(format!("reading {path}: {e}")),
            };
            match serde_json::from_str::<SweepConfig>(&text) {
                Ok(c) => c,
                Err(e) => return usage_error(format!("parsing {path}: {e}")),
            }
        }
        None => SweepConfig::default(),
    };
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if let Some(l) = args.limit {
        cfg.limit = l;
    }
    if let Some(l) = args.quadratic_limit {
        cfg.quadratic_limit = l;
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    if cfg.checks.is_empty() {
        return usage_error("config selects no checks");
    }

    let reports = match run_verify(&cfg) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let json = reports_to_json(&reports);
    if write_or_print(&cfg.out, &json).is_err() {
        return ExitCode::from(2);
    }
    let mut all_pass = true;
    for r in &reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        eprintln!(
            "{} ({},{},{}): {}/{} {status}",
            r.check, r.cell.p, r.cell.e, r.cell.m, r.cases_passed, r.cases_run
        );
        all_pass &= r.passed();
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_census(args: CensusArgs) -> ExitCode {
    let rows = match census(args.p, args.e, args.m, args.limit) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let csv = census_csv(&rows);
    match write_or_print(&args.out, &csv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn print_comparison(oracle: i64, formula: i64) -> ExitCode {
    println!("oracle = {oracle}");
    println!("formula = {formula}");
    println!("agree = {}", oracle == formula);
    ExitCode::SUCCESS
}

fn cmd_sum(args: SumArgs) -> ExitCode {
    let ctx = match build_field(args.p, args.e, args.m, args.limit) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    match args.kind {
        SumKind::Additive => {
            let (Some(g_text), Some(alpha_text)) = (&args.g, &args.alpha) else {
                return usage_error("additive sums need --g and --alpha");
            };
            let g = match parse_poly(ctx.fq(), g_text) {
                Ok(g) => g,
                Err(e) => return usage_error(e),
            };
            let alpha = match parse_element(&ctx, alpha_text) {
                Ok(a) => a,
                Err(e) => return usage_error(e),
            };
            println!(
                "alpha = {} (index {})",
                format_element(&ctx, &alpha),
                ctx.index_of(&alpha)
            );
            let oracle = match sums::additive_sum_oracle(&ctx, &g, &alpha) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let f1 = match fq_order(&ctx, &alpha) {
                Ok(f) => f,
                Err(e) => return usage_error(e),
            };
            let formula = match sums::additive_sum_formula(&ctx, &g, &f1) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            print_comparison(oracle, formula)
        }
        SumKind::Multiplicative => {
            let (Some(d), Some(r)) = (args.d, args.r) else {
                return usage_error("multiplicative sums need --d and --r");
            };
            let oracle = match sums::mult_sum_oracle(&ctx, d, r) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            print_comparison(oracle, sums::mult_sum_formula(d, r))
        }
        SumKind::Composed => {
            let (Some(g_text), Some(f_text), Some(alpha_text)) = (&args.g, &args.f, &args.alpha)
            else {
                return usage_error("composed sums need --g, --f and --alpha");
            };
            let g = match parse_poly(ctx.fq(), g_text) {
                Ok(g) => g,
                Err(e) => return usage_error(e),
            };
            let f = match parse_poly(ctx.fq(), f_text) {
                Ok(f) => f,
                Err(e) => return usage_error(e),
            };
            let alpha = match parse_element(&ctx, alpha_text) {
                Ok(a) => a,
                Err(e) => return usage_error(e),
            };
            match sums::additive_composed_sum(&ctx, &g, &f, &alpha) {
                Ok((oracle, formula)) => print_comparison(oracle, formula),
                Err(e) => usage_error(e),
            }
        }
    }
}

fn cmd_order(args: OrderArgs) -> ExitCode {
    let ctx = match build_field(args.p, args.e, args.m, args.limit) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let alpha = match parse_element(&ctx, &args.element) {
        Ok(a) => a,
        Err(e) => return usage_error(e),
    };
    let order = match fq_order(&ctx, &alpha) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let fact = match factor_xm_minus_1(&ctx)
        .and_then(|f| factor_divisor(ctx.fq(), &f, &order))
    {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    println!(
        "element {} = {}",
        ctx.index_of(&alpha),
        format_element(&ctx, &alpha)
    );
    println!(
        "order = {} = {}",
        format_poly(ctx.fq(), &order),
        format_factored(ctx.fq(), &fact)
    );
    println!("k = {}", k_normality(&ctx, &alpha));
    let ga = g_alpha(&ctx, &alpha);
    let ga_text = if ga.is_empty() {
        "0".to_string()
    } else {
        ga.iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let var = match i {
                    0 => String::new(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                };
                format!("{{{}}}{var}", ctx.index_of(c))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    println!("g_alpha = {ga_text}");
    ExitCode::SUCCESS
}
