//! `newred`: iterate, factor and test polynomials for newly reducible
//! iterates, generate the explicit families, run searches and replay the
//! claim suite.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a
//! verification (family check, characteristic-2 third iterates, claim
//! replay) fails.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use newred::arith::{format_rational, parse_rational};
use newred::claims::{run_claims, ClaimResult, CLAIM_IDS};
use newred::criteria::{newly_reducible_via, Route};
use newred::families::{generate, genbigd_k_stream, verify_member, FamilyMember, Verification, FAMILY_NAMES};
use newred::ffexplore::{classify_membership_with, verify_ahmadi, CSV_HEADER};
use newred::field::AnyField;
use newred::parse::parse_poly_in;
use newred::search::{
    box_search, surface_search_with, write_csv, write_jsonl, HitRecord, RunSummary, SearchBox, SearchOptions,
};
use newred::{Error, Factorize, Field, FieldCtx, Rational};

#[derive(Parser, Debug)]
#[command(name = "newred", version, about = "Newly reducible iterates of polynomials")]
struct Cli {
    /// Emit JSON instead of a human-readable table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the n-th iterate of a polynomial.
    Iterate {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        n: u32,
    },
    /// Factor a polynomial into monic irreducibles.
    Factor {
        #[command(flatten)]
        input: PolyInput,
    },
    /// Decide whether the n-th iterate is newly reducible.
    Check {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        n: u32,
        /// Decide irreducibility by full factorization only.
        #[arg(long)]
        factor_only: bool,
    },
    /// Generate family members and verify them against their predictions.
    Family(FamilyArgs),
    /// Search for quadratics with newly reducible iterates.
    Search {
        #[command(subcommand)]
        kind: SearchKind,
    },
    /// Exhaustive scans over small finite fields.
    Ff {
        #[command(subcommand)]
        kind: FfKind,
    },
    /// Replay the claim suite and print one PASS/FAIL line per claim.
    VerifyPaper {
        /// Claim numbers to run (default: all).
        #[arg(long, value_delimiter = ',')]
        claims: Vec<u8>,
    },
}

#[derive(Args, Debug)]
struct PolyInput {
    /// Polynomial in x, e.g. "x^2-x-1" or "(x-1/2)^2-9/4".
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Q, p=<prime>, q=<prime power> or q=<prime power>:<modulus in g>.
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Family name, or "genbigd" for the valuation-driven stream of the
    /// degree d == 2 mod 4 family.
    name: String,
    /// Comma-separated parameters of one member; repeat for more members.
    #[arg(long, allow_hyphen_values = true)]
    params: Vec<String>,
    /// genbigd: the degree d.
    #[arg(long)]
    d: Option<usize>,
    /// genbigd: the prime whose powers form the stream.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// genbigd: number of members.
    #[arg(long, default_value_t = 3)]
    count: u64,
    /// genbigd: stream position of the first member.
    #[arg(long, default_value_t = 0)]
    start: u64,
    /// Skip verification and only print the members.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Subcommand, Debug)]
enum SearchKind {
    /// Brute force over monic x^2 + a x + b with integer a, b in a box.
    Box {
        #[command(flatten)]
        bounds: BoxBounds,
        #[command(flatten)]
        out: SearchOutput,
        /// Checkpoint file; an existing checkpoint for the same box is resumed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Width of an a-strip per chunk.
        #[arg(long, default_value_t = 4)]
        chunk: usize,
        /// Stop after this many chunks (resume later from the checkpoint).
        #[arg(long)]
        stop_after: Option<usize>,
        /// Permit boxes above the candidate limit.
        #[arg(long)]
        allow_large: bool,
        /// Decide irreducibility by full factorization only.
        #[arg(long)]
        factor_only: bool,
    },
    /// Walk the two-parameter surface by height of (r, s).
    Surface {
        #[arg(long)]
        height: u64,
        /// Flag hits inside this box (n is ignored).
        #[command(flatten)]
        reference: OptionalBox,
        #[command(flatten)]
        out: SearchOutput,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct BoxBounds {
    /// Symmetric bound |a| <= A (overridden by --a-min/--a-max).
    #[arg(long)]
    a: Option<i64>,
    /// Symmetric bound |b| <= B (overridden by --b-min/--b-max).
    #[arg(long)]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    a_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    a_max: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b_max: Option<i64>,
    /// Iterate to test.
    #[arg(long, default_value_t = 3)]
    n: u32,
}

#[derive(Args, Debug)]
struct OptionalBox {
    /// Reference box |a| <= A.
    #[arg(long = "box-a")]
    a: Option<i64>,
    /// Reference box |b| <= B.
    #[arg(long = "box-b")]
    b: Option<i64>,
}

#[derive(Args, Debug)]
struct SearchOutput {
    /// Write hits as JSON lines.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write hits as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum FfKind {
    /// Whether F_q admits a monic degree-d polynomial with newly reducible
    /// n-th iterate.
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        workers: Option<usize>,
        /// Print the witnesses, not only their count.
        #[arg(long)]
        witnesses: bool,
        /// Print a CSV row instead of the table.
        #[arg(long)]
        csv: bool,
    },
    /// Whether every quadratic over F_q, q = 2^n, has reducible third iterate.
    Ahmadi {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        monic_only: bool,
    },
}

#[derive(Clone, Copy, Debug)]
enum Status {
    Ok,
    Failed,
}

/// Runs a block with `$k` bound to the concrete field.
macro_rules! with_field {
    ($any:expr, $k:ident => $body:expr) => {
        match $any {
            AnyField::Rational($k) => $body,
            AnyField::Prime($k) => $body,
            AnyField::Extension($k) => $body,
        }
    };
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Status, Error> {
    match &cli.command {
        Command::Iterate { input, n } => iterate(cli.json, input, *n),
        Command::Factor { input } => factor(cli.json, input),
        Command::Check { input, n, factor_only } => check(cli.json, input, *n, *factor_only),
        Command::Family(args) => family(cli.json, args),
        Command::Search { kind } => search(cli.json, kind),
        Command::Ff { kind } => ff(cli.json, kind),
        Command::VerifyPaper { claims } => verify_paper(cli.json, claims),
    }
}

fn emit(v: &Value) {
    println!("{v}");
}

fn field_of(input: &PolyInput) -> Result<(FieldCtx, AnyField), Error> {
    let ctx = FieldCtx::parse(&input.field)?;
    let field = ctx.build()?;
    Ok((ctx, field))
}

fn iterate(as_json: bool, input: &PolyInput, n: u32) -> Result<Status, Error> {
    let (ctx, field) = field_of(input)?;
    with_field!(field, k => {
        let f = parse_poly_in(&k, &input.poly)?;
        let fnn = f.iterate(n);
        if as_json {
            emit(&json!({"field": ctx.to_string(), "f": f.to_string(), "n": n, "iterate": fnn.to_string(), "coeffs": fnn.to_json()}));
        } else {
            println!("{fnn}");
        }
    });
    Ok(Status::Ok)
}

fn factor(as_json: bool, input: &PolyInput) -> Result<Status, Error> {
    let (ctx, field) = field_of(input)?;
    with_field!(field, k => {
        let f = parse_poly_in(&k, &input.poly)?;
        let fac = k.factor(&f)?;
        if as_json {
            emit(&json!({"field": ctx.to_string(), "poly": f.to_string(), "factorization": fac.to_wire(&k)}));
        } else {
            println!("unit {}", k.format_elem(&fac.unit));
            println!("mult  deg  factor");
            for (p, m) in &fac.factors {
                println!("{m:>4}  {:>3}  {p}", p.deg());
            }
        }
    });
    Ok(Status::Ok)
}

fn check(as_json: bool, input: &PolyInput, n: u32, factor_only: bool) -> Result<Status, Error> {
    let (ctx, field) = field_of(input)?;
    let route = if factor_only { Route::FactorOnly } else { Route::Criteria };
    with_field!(field, k => {
        let f = parse_poly_in(&k, &input.poly)?;
        let w = newly_reducible_via(&f, n, route)?;
        match (&w, as_json) {
            (Some(w), true) => emit(&json!({"field": ctx.to_string(), "poly": f.to_string(), "newly_reducible": true, "witness": w.to_wire(&k)})),
            (None, true) => emit(&json!({"field": ctx.to_string(), "poly": f.to_string(), "n": n, "newly_reducible": false})),
            (Some(w), false) => {
                println!("f^{n} is newly reducible for f = {f}");
                for (p, m) in &w.factors.factors {
                    let power = if *m > 1 { format!("^{m}") } else { String::new() };
                    println!("  ({p}){power}");
                }
                if !w.complete {
                    println!("  (split by the binomial criterion; factors need not be irreducible)");
                }
            }
            (None, false) => println!("not newly reducible"),
        }
    });
    Ok(Status::Ok)
}

fn parse_params(list: &str) -> Result<Vec<Rational>, Error> {
    list.split(',').map(|s| parse_rational(s.trim())).collect()
}

fn family(as_json: bool, args: &FamilyArgs) -> Result<Status, Error> {
    let members: Vec<FamilyMember> = if args.name == "genbigd" {
        let d = args.d.ok_or_else(|| Error::Precondition("genbigd needs --d".into()))?;
        let mut stream = genbigd_k_stream(d, args.p)?;
        stream.seek(args.start);
        stream
            .take(args.count as usize)
            .map(|k| generate("highdeg_family", &[Rational::from_integer(d.into()), Rational::from_integer(k)]))
            .collect::<Result<_, _>>()?
    } else {
        if args.params.is_empty() {
            return Err(Error::Precondition(format!(
                "--params is required; families: {}, genbigd",
                FAMILY_NAMES.join(", ")
            )));
        }
        args.params
            .iter()
            .map(|p| generate(&args.name, &parse_params(p)?))
            .collect::<Result<_, _>>()?
    };
    let mut status = Status::Ok;
    for m in &members {
        let v = if args.no_verify { None } else { Some(verify_member(m)?) };
        if v.as_ref().is_some_and(|v| !v.ok()) {
            status = Status::Failed;
        }
        if as_json {
            emit(&json!({"member": m.to_wire(), "verification": v.as_ref().map(verification_json)}));
        } else {
            print_member(m, v.as_ref());
        }
    }
    Ok(status)
}

fn verification_json(v: &Verification) -> Value {
    json!({
        "ok": v.ok(),
        "newly_reducible": v.newly_reducible,
        "verdict_matches": v.verdict_matches,
        "factor_identity": v.factor_identity,
        "factors_match": v.factors_match,
        "pattern_matches": v.pattern_matches,
        "deglem": v.deglem,
        "symmetric_split": v.symmetric_split,
        "witness": v.witness_wire(),
    })
}

fn print_member(m: &FamilyMember, v: Option<&Verification>) {
    let params: Vec<String> = m.params.iter().map(format_rational).collect();
    println!("{}({})", m.name, params.join(", "));
    println!("  f = {}", m.f);
    let p = &m.predicted;
    println!("  predicted: n = {}, newly reducible = {}", p.n, p.newly_reducible);
    for c in &p.side_conditions {
        println!("  [{}] {}", if c.holds { "x" } else { " " }, c.name);
    }
    if let Some(v) = v {
        let show = |o: Option<bool>| o.map_or("-", |b| if b { "yes" } else { "NO" });
        println!(
            "  verified: {}  (newly reducible {}, identity {}, factors {}, pattern {}, deglem {}, split {})",
            if v.ok() { "ok" } else { "FAILED" },
            v.newly_reducible,
            show(v.factor_identity),
            show(v.factors_match),
            show(v.pattern_matches),
            show(v.deglem),
            show(v.symmetric_split),
        );
    }
}

fn build_box(b: &BoxBounds) -> Result<SearchBox, Error> {
    let pick = |lo: Option<i64>, hi: Option<i64>, sym: Option<i64>, what: &str| -> Result<(i64, i64), Error> {
        match (lo.or(sym.map(|s| -s)), hi.or(sym)) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(Error::Precondition(format!("give --{what} or both --{what}-min and --{what}-max"))),
        }
    };
    let (a_min, a_max) = pick(b.a_min, b.a_max, b.a, "a")?;
    let (b_min, b_max) = pick(b.b_min, b.b_max, b.b, "b")?;
    SearchBox::new(a_min, a_max, b_min, b_max, b.n)
}

fn write_outputs(hits: &[HitRecord], out: &SearchOutput) -> Result<(), Error> {
    if let Some(path) = &out.out {
        write_jsonl(hits, path)?;
    }
    if let Some(path) = &out.csv {
        write_csv(hits, path)?;
    }
    Ok(())
}

fn print_hits(hits: &[HitRecord]) {
    println!("{:>8} {:>12} {:>12} {:>14} {:>10}  provenance", "a", "b", "gamma", "m", "pattern");
    for h in hits {
        let w = &h.witness;
        let pattern: Vec<String> = w
            .factors
            .factors
            .iter()
            .flat_map(|f| std::iter::repeat_n((f.poly.len() - 1).to_string(), f.mult as usize))
            .collect();
        let prov = serde_json::to_value(&h.provenance).map(|v| v["kind"].as_str().unwrap_or("").to_string()).unwrap_or_default();
        println!(
            "{:>8} {:>12} {:>12} {:>14} {:>10}  {prov}",
            format_rational(&h.a),
            format_rational(&h.b),
            format_rational(&h.gamma),
            format_rational(&h.m),
            pattern.join(" "),
        );
    }
}

fn print_summary(s: &RunSummary) {
    println!(
        "candidates {}  hits {}  criteria-rejected {}  sieve-rejected {}  factored {}",
        s.candidates, s.hits, s.criteria_rejected, s.sieve_rejected, s.factored
    );
    println!(
        "chunks {}/{}  complete {}  {} ms  {:.2} us/candidate",
        s.chunks_done, s.chunks_total, s.complete, s.elapsed_ms, s.micros_per_candidate
    );
}

fn search(as_json: bool, kind: &SearchKind) -> Result<Status, Error> {
    match kind {
        SearchKind::Box { bounds, out, checkpoint, workers, chunk, stop_after, allow_large, factor_only } => {
            let sb = build_box(bounds)?;
            let opts = SearchOptions {
                workers: *workers,
                chunk: *chunk,
                route: if *factor_only { Route::FactorOnly } else { Route::Criteria },
                checkpoint: checkpoint.clone(),
                stop_after: *stop_after,
                allow_large: *allow_large,
            };
            let res = box_search(&sb, &opts)?;
            write_outputs(&res.hits, out)?;
            if as_json {
                emit(&json!({"box": sb, "summary": res.summary, "hits": res.hits}));
            } else {
                print_hits(&res.hits);
                print_summary(&res.summary);
            }
        }
        SearchKind::Surface { height, reference, out, workers } => {
            let reference = match (reference.a, reference.b) {
                (Some(a), Some(b)) => Some(SearchBox::symmetric(a, b, 3)?),
                (None, None) => None,
                _ => return Err(Error::Precondition("give both --box-a and --box-b".into())),
            };
            let hits = surface_search_with(*height, reference.as_ref(), *workers)?;
            write_outputs(&hits, out)?;
            if as_json {
                emit(&json!({"height": height, "hits": hits}));
            } else {
                print_hits(&hits);
                println!("{} distinct quadratics", hits.len());
            }
        }
    }
    Ok(Status::Ok)
}

fn ff(as_json: bool, kind: &FfKind) -> Result<Status, Error> {
    match kind {
        FfKind::Classify { q, d, n, workers, witnesses, csv } => {
            let m = classify_membership_with(*q, *d, *n, *workers)?;
            if as_json {
                emit(&serde_json::to_value(&m)?);
            } else if *csv {
                println!("{CSV_HEADER}");
                println!("{}", m.csv_row());
            } else {
                println!(
                    "F_{q} {} N({d},{n}): {} witnesses among {} monic polynomials",
                    if m.member { "is in" } else { "is not in" },
                    m.witnesses.len(),
                    m.scanned
                );
                if *witnesses {
                    for w in &m.witnesses {
                        println!("  {}  pattern {:?}", w.poly, w.degree_pattern);
                    }
                }
            }
            Ok(Status::Ok)
        }
        FfKind::Ahmadi { q, monic_only } => {
            let r = verify_ahmadi(*q, *monic_only)?;
            if as_json {
                emit(&serde_json::to_value(&r)?);
            } else {
                println!(
                    "F_{q}: {} quadratics checked, third iterate always reducible: {}",
                    r.checked, r.holds
                );
                for e in &r.exceptions {
                    println!("  exception {e:?}");
                }
            }
            Ok(if r.holds { Status::Ok } else { Status::Failed })
        }
    }
}

fn verify_paper(as_json: bool, claims: &[u8]) -> Result<Status, Error> {
    let ids: Vec<u8> = if claims.is_empty() { CLAIM_IDS.collect() } else { claims.to_vec() };
    let results = run_claims(&ids)?;
    if as_json {
        for r in &results {
            emit(&serde_json::to_value(r)?);
        }
    } else {
        print_claims(&results);
    }
    Ok(if results.iter().all(|r| r.pass) { Status::Ok } else { Status::Failed })
}

fn print_claims(results: &[ClaimResult]) {
    let mut out = std::io::stdout().lock();
    for r in results {
        let limit = r.limit_ms.map_or("-".to_string(), |l| format!("{l}"));
        let _ = writeln!(
            out,
            "{} {:>2}  {:<66} {:>7} ms / {:>6}  {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.title,
            r.elapsed_ms,
            limit,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    let _ = writeln!(out, "{} of {} claims pass", results.len() - failed, results.len());
}
