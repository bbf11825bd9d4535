//! `goppa-orbits`: census, oracle verification, conjugacy tables and Goppa
//! code checks from the command line.
//!
//! Exit status: 0 pass, 1 discrepancy, 2 usage, 3 capacity, 4 internal.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use goppa_orbits::census::{Census, CensusReport, Hypotheses};
use goppa_orbits::goppa::{self, GoppaSpec, DEFAULT_WEIGHT_CAP};
use goppa_orbits::oracle::{self, Adjudication, Group, Limits, Verdict};
use goppa_orbits::pgl::conjugacy_audit;
use goppa_orbits::{Error, FieldCtx, IrreducibleSet, Pgl, Poly};

#[derive(Parser)]
#[command(
    name = "goppa-orbits",
    version,
    about = "Orbit census of PΓL2(F_q) on irreducible polynomials, with brute-force checks"
)]
struct Cli {
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form orbit counts and consistency flags.
    Census(CensusArgs),
    /// Census against brute-force oracles.
    Verify(VerifyArgs),
    /// Conjugacy classes of PGL2(F_q).
    Conjugacy(ConjugacyArgs),
    /// Orbit partition of I_r.
    OracleOrbits(OrbitArgs),
    /// Build an irreducible binary Goppa code.
    Goppa(GoppaArgs),
}

#[derive(Args)]
struct CensusArgs {
    /// Values of n: `5`, `5,7`, or `5..13`.
    #[arg(long, value_parser = parse_list)]
    n: Vals,
    /// Values of r, same syntax.
    #[arg(long, value_parser = parse_list)]
    r: Vals,
    /// Report even when the standing hypotheses fail.
    #[arg(long)]
    force_hypotheses: bool,
    /// Exit 1 when a consistency flag fires.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_list)]
    n: Vals,
    #[arg(long, value_parser = parse_list)]
    r: Vals,
    #[arg(long)]
    force_hypotheses: bool,
    /// Lift the default size limits (memory cap still applies).
    #[arg(long)]
    heavy: bool,
}

#[derive(Args)]
struct ConjugacyArgs {
    #[arg(long)]
    n: u32,
    /// Also check the class partition by brute-force conjugation.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: usize,
    /// `pgl` or `pgammal`.
    #[arg(long, default_value = "pgammal")]
    group: Group,
    #[arg(long)]
    heavy: bool,
}

#[derive(Args)]
struct GoppaArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: usize,
    /// Goppa polynomial as coefficients `a_0,...,a_r`; default is the
    /// least monic irreducible of degree r.
    #[arg(long)]
    g: Option<String>,
    /// Append the overall parity bit.
    #[arg(long)]
    extended: bool,
    /// Exhaustive weight enumerator.
    #[arg(long)]
    weights: bool,
    /// Also compare extended-code enumerators across this many random
    /// PΓL transports of α.
    #[arg(long, default_value_t = 0)]
    trials: usize,
}

#[derive(Clone, Debug)]
struct Vals(Vec<u64>);

fn parse_list(s: &str) -> Result<Vals, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {part}"));
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(Vals(out))
}

fn pairs(n: &Vals, r: &Vals) -> Vec<(u64, u64)> {
    n.0.iter()
        .flat_map(|&n| r.0.iter().map(move |&r| (n, r)))
        .collect()
}

// In a sweep, pairs outside the hypotheses are skipped with a note; a single
// pair is reported as an error.
fn sweep(n: &Vals, r: &Vals, force: bool) -> Vec<(u64, u64)> {
    let all = pairs(n, r);
    if all.len() == 1 || force {
        return all;
    }
    all.into_iter()
        .filter(|&(n, r)| {
            let ok = Hypotheses::check(n, r).all();
            if !ok {
                eprintln!("note: skipping n = {n}, r = {r} (outside hypotheses)");
            }
            ok
        })
        .collect()
}

/// Rendered output with its exit status.
struct Outcome {
    text: String,
    code: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. } => 3,
        Error::Structural(_) => 1,
        Error::Internal(_) => 4,
        _ => 2,
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Internal(e.to_string()))
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let internal = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(header).map_err(internal)?;
    for row in rows {
        w.write_record(&row).map_err(internal)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

fn one_or_many<T: Serialize>(items: &[T]) -> Result<String, Error> {
    match items {
        [one] => json(one),
        many => json(&many),
    }
}

const CENSUS_HEADER: [&str; 22] = [
    "n",
    "r",
    "q",
    "n0",
    "n1",
    "n2",
    "n2_printed",
    "n3",
    "n3_printed",
    "pgl_orbits",
    "pgl_orbits_printed",
    "x_count",
    "delta2",
    "delta5",
    "delta5_printed",
    "s0",
    "s0_printed",
    "s",
    "s_printed",
    "bound",
    "consistent",
    "failed_flags",
];

fn census_row(rep: &CensusReport) -> Vec<String> {
    let mut row = vec![rep.n.to_string(), rep.r.to_string(), rep.q.to_string()];
    row.extend(
        [
            &rep.n0,
            &rep.n1,
            &rep.n2,
            &rep.n2_printed,
            &rep.n3,
            &rep.n3_printed,
            &rep.pgl_orbits,
            &rep.pgl_orbits_printed,
            &rep.x_count,
            &rep.delta2,
            &rep.delta5,
            &rep.delta5_printed,
            &rep.s0,
            &rep.s0_printed,
            &rep.s,
            &rep.s_printed,
            &rep.bound,
        ]
        .iter()
        .map(|v| v.to_string()),
    );
    row.push(rep.consistent().to_string());
    row.push(rep.failed_flags().join(";"));
    row
}

fn cmd_census(args: &CensusArgs, format: Format) -> Result<Outcome, Error> {
    let mut reports = Vec::new();
    for (n, r) in sweep(&args.n, &args.r, args.force_hypotheses) {
        reports.push(Census::new(n)?.report(r, args.force_hypotheses)?);
    }
    let text = match format {
        Format::Json => one_or_many(&reports)?,
        Format::Csv => csv_text(&CENSUS_HEADER, reports.iter().map(census_row).collect())?,
    };
    let code = if args.strict && reports.iter().any(|r| !r.consistent()) {
        1
    } else {
        0
    };
    Ok(Outcome { text, code })
}

fn cmd_verify(args: &VerifyArgs, format: Format) -> Result<Outcome, Error> {
    let limits = if args.heavy {
        Limits::heavy()
    } else {
        Limits::default()
    };
    let mut reports: Vec<Adjudication> = Vec::new();
    for (n, r) in sweep(&args.n, &args.r, args.force_hypotheses) {
        let n = u32::try_from(n).map_err(|_| Error::Domain(format!("n = {n} too large")))?;
        reports.push(oracle::adjudicate(
            n,
            r as usize,
            args.force_hypotheses,
            &limits,
        )?);
    }
    let code = if reports.iter().any(|a| a.verdict == Verdict::Discrepancy) {
        1
    } else {
        0
    };
    let text = match format {
        Format::Json => one_or_many(&reports)?,
        Format::Csv => {
            let show = |v: &Option<_>| v.as_ref().map(ToString::to_string).unwrap_or_default();
            let flag = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
            let rows = reports
                .iter()
                .flat_map(|a| {
                    a.comparisons.iter().map(move |c| {
                        vec![
                            a.n.to_string(),
                            a.r.to_string(),
                            c.quantity.clone(),
                            show(&c.printed),
                            show(&c.census),
                            show(&c.oracle),
                            flag(c.printed_agrees),
                            flag(c.census_agrees),
                        ]
                    })
                })
                .collect();
            csv_text(
                &[
                    "n",
                    "r",
                    "quantity",
                    "printed",
                    "census",
                    "oracle",
                    "printed_agrees",
                    "census_agrees",
                ],
                rows,
            )?
        }
    };
    Ok(Outcome { text, code })
}

#[derive(Serialize)]
struct ClassRow {
    family: String,
    representative: String,
    size: u64,
    order_in_pgl: u64,
}

#[derive(Serialize)]
struct ConjugacyOut {
    q: u64,
    group_order: u64,
    classes: Vec<ClassRow>,
    audit: goppa_orbits::pgl::ConjugacyAudit,
}

fn cmd_conjugacy(args: &ConjugacyArgs, format: Format) -> Result<Outcome, Error> {
    let ctx = FieldCtx::new(args.n)?;
    let pgl = Pgl::new(&ctx);
    let classes: Vec<ClassRow> = pgl
        .conjugacy_classes()?
        .into_iter()
        .map(|c| ClassRow {
            family: c.family.to_string(),
            representative: c.representative.to_string(),
            size: c.size,
            order_in_pgl: c.order_in_pgl,
        })
        .collect();
    let audit = conjugacy_audit(&pgl, args.exhaustive)?;
    let code = if audit.passed() { 0 } else { 1 };
    let text = match format {
        Format::Json => json(&ConjugacyOut {
            q: pgl.q(),
            group_order: pgl.order(),
            classes,
            audit,
        })?,
        Format::Csv => csv_text(
            &["family", "representative", "size", "order_in_pgl"],
            classes
                .into_iter()
                .map(|c| {
                    vec![
                        c.family,
                        c.representative,
                        c.size.to_string(),
                        c.order_in_pgl.to_string(),
                    ]
                })
                .collect(),
        )?,
    };
    Ok(Outcome { text, code })
}

#[derive(Serialize)]
struct OrbitRow {
    representative: String,
    key: u64,
    size: u64,
    divisor_flag: bool,
}

#[derive(Serialize)]
struct OrbitsOut {
    group: Group,
    n: u32,
    r: usize,
    orbit_count: usize,
    total: u64,
    orbits: Vec<OrbitRow>,
}

fn cmd_orbits(args: &OrbitArgs, format: Format) -> Result<Outcome, Error> {
    let limits = if args.heavy {
        Limits::heavy()
    } else {
        Limits::default()
    };
    let part = oracle::enumerate_orbits(args.group, args.n, args.r, &limits)?;
    let rows: Vec<OrbitRow> = part
        .orbits
        .iter()
        .map(|o| OrbitRow {
            representative: Poly::from_key(o.representative, args.n, args.r).to_string(),
            key: o.representative,
            size: o.size,
            divisor_flag: o.divisor_flag,
        })
        .collect();
    let text = match format {
        Format::Json => json(&OrbitsOut {
            group: part.group,
            n: part.n,
            r: part.r,
            orbit_count: part.len(),
            total: part.set.len(),
            orbits: rows,
        })?,
        Format::Csv => csv_text(
            &["representative", "size", "divisor_flag"],
            rows.into_iter()
                .map(|o| {
                    vec![
                        o.representative,
                        o.size.to_string(),
                        o.divisor_flag.to_string(),
                    ]
                })
                .collect(),
        )?,
    };
    Ok(Outcome { text, code: 0 })
}

#[derive(Serialize)]
struct GoppaOut {
    n: u32,
    r: usize,
    g: String,
    alpha: u64,
    length: usize,
    dimension: usize,
    extended: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<(usize, u64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimum_distance: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariance: Option<goppa::InvarianceReport>,
}

fn cmd_goppa(args: &GoppaArgs, format: Format, seed: u64) -> Result<Outcome, Error> {
    let ctx = FieldCtx::new(args.n)?;
    let g = match &args.g {
        Some(text) => Poly::parse(text)?,
        None => {
            if args.n as usize * args.r >= 64 {
                return Err(Error::Capacity {
                    resource: "extension degree n*r".into(),
                    required: (args.n as usize * args.r) as u128,
                    limit: 63,
                });
            }
            let key = IrreducibleSet::sieve(&ctx, args.r)
                .keys()
                .next()
                .ok_or_else(|| Error::Internal("no irreducible".into()))?;
            Poly::from_key(key, args.n, args.r)
        }
    };
    if g.degree() != Some(args.r) {
        return Err(Error::Domain(format!(
            "g = {g} does not have degree {}",
            args.r
        )));
    }
    let spec = GoppaSpec::new(args.n, &g)?;
    let mut code = goppa::build_goppa(&spec)?;
    if args.extended {
        code = goppa::extend(&code);
    }
    let weights = if args.weights {
        Some(goppa::weight_enumerator(&code, DEFAULT_WEIGHT_CAP)?)
    } else {
        None
    };
    let invariance = if args.trials > 0 {
        Some(goppa::equivalence_invariant_check(
            args.n,
            args.r,
            args.trials,
            seed,
        )?)
    } else {
        None
    };
    let out = GoppaOut {
        n: args.n,
        r: args.r,
        g: g.to_string(),
        alpha: spec.alpha,
        length: code.length,
        dimension: code.dimension(),
        extended: args.extended,
        minimum_distance: weights.as_deref().and_then(goppa::minimum_distance),
        weights,
        invariance,
    };
    let text = match format {
        Format::Json => json(&out)?,
        Format::Csv => match &out.weights {
            Some(w) => csv_text(
                &["weight", "count"],
                w.iter()
                    .map(|(a, b)| vec![a.to_string(), b.to_string()])
                    .collect(),
            )?,
            None => csv_text(
                &["n", "r", "g", "alpha", "length", "dimension", "extended"],
                vec![vec![
                    out.n.to_string(),
                    out.r.to_string(),
                    out.g.clone(),
                    out.alpha.to_string(),
                    out.length.to_string(),
                    out.dimension.to_string(),
                    out.extended.to_string(),
                ]],
            )?,
        },
    };
    Ok(Outcome { text, code: 0 })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Census(a) => cmd_census(a, cli.format),
        Cmd::Verify(a) => cmd_verify(a, cli.format),
        Cmd::Conjugacy(a) => cmd_conjugacy(a, cli.format),
        Cmd::OracleOrbits(a) => cmd_orbits(a, cli.format),
        Cmd::Goppa(a) => cmd_goppa(a, cli.format, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers as usize)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(4);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Structural(v) = &e {
                for line in v {
                    eprintln!("  {line}");
                }
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
