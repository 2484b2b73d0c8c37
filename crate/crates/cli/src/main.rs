//! Command-line interface to the trace-calculus toolkit. One verb per
//! capability, deterministic scriptable output, seeded randomness.
//!
//! Exit codes: 0 success, 1 verification or domain failure, 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sl2trace::count::{
    count_all_fibers, count_commuting_pairs, count_fiber, fit_count_polynomial, CountMethod,
    CSV_HEADER,
};
use sl2trace::field::{format_rational, parse_rational, PrimeField};
use sl2trace::geometry::{
    discriminant_f3, eliminate_tcd_at_point, epoly, epoly_consistency, f3_equation,
    genus2_relations, hessian_classify, jacobian_rank, projective_checks, reducible_locus_f3,
    singular_points, torus_fiber, transcendental_basis, AffinePoint3, EPolyClass, SingularKind,
    TcdInput,
};
use sl2trace::poly::Poly;
use sl2trace::sl2::{
    check_matrix_identity, enumerate_sl2, random_sl2, sample_genus2_tuple, trace_assignment,
    word_eval, MatrixIdentity,
};
use sl2trace::trace::TraceReducer;
use sl2trace::word::{parse_word, Word};
use std::collections::BTreeMap;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sl2trace", version, about = "Exact SL2 trace calculus and character-variety toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce the trace of a word to a polynomial in trace coordinates
    Reduce(ReduceArgs),
    /// Verify matrix identities or the reduction engine against the matrix oracle
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Print named equations (f3 | torus | discriminant | reducible)
    #[command(subcommand)]
    Equation(EquationCmd),
    /// Singular points of the commutator fiber at t
    Singular(SingularArgs),
    /// Hessian classification of a singular point
    Hessian(HessianArgs),
    /// Projective-closure checks over F_p
    Projective(ProjectiveArgs),
    /// Point counting (fiber | all | fit | commuting-pairs)
    #[command(subcommand)]
    Count(CountCmd),
    /// E-polynomial table and consistency check
    #[command(subcommand)]
    Epoly(EpolyCmd),
    /// Transcendence basis of the k-generator coordinate ring
    Basis(BasisArgs),
    /// Numeric rank of the basis trace map differential
    JacobianRank(JacobianArgs),
    /// Univariate eliminant for the dependent pair trace t[3,4]
    EliminateTcd(EliminateArgs),
    /// Genus-2 trace relations (relations | check)
    #[command(subcommand)]
    Genus2(Genus2Cmd),
}

#[derive(Args)]
struct ReduceArgs {
    /// Word, e.g. "a b^2 c^-1" or "[a,b] c"
    word: String,
    /// Number of generators
    #[arg(long, default_value_t = 4)]
    gens: u32,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Also report rewrite steps and memo size
    #[arg(long)]
    stats: bool,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check the named matrix identities on random tuples (and exhaustively
    /// over SL2(F3))
    Identity(VerifyIdentityArgs),
    /// Check reduce(word) against the matrix oracle on random words
    Engine(VerifyEngineArgs),
}

#[derive(Args)]
struct VerifyIdentityArgs {
    /// qp | square | inverse | ttt | all
    #[arg(long, default_value = "all")]
    name: String,
    #[arg(long, default_value_t = 500)]
    count: u32,
    #[arg(long, default_value_t = 10007)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also sweep every element/pair of SL2(F3)
    #[arg(long)]
    exhaustive_f3: bool,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct VerifyEngineArgs {
    #[arg(long, default_value_t = 500)]
    words: u32,
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    #[arg(long, default_value_t = 4)]
    gens: u32,
    #[arg(long, default_value_t = 10007)]
    prime: u64,
    /// Matrix assignments tested per word
    #[arg(long, default_value_t = 20)]
    checks: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Subcommand)]
enum EquationCmd {
    /// The seven-coordinate hypersurface equation
    F3(FormatArgs),
    /// The fiber x^2+y^2+z^2-xyz-2-t
    Torus(TorusArgs),
    /// The sextic discriminant X^2+4Y
    Discriminant(FormatArgs),
    /// The four equations of the pairwise-commuting locus
    Reducible(FormatArgs),
}

#[derive(Args)]
struct FormatArgs {
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct TorusArgs {
    /// Fiber parameter, a rational like "2" or "-1/2"
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    t: String,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct SingularArgs {
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct HessianArgs {
    /// Point as "x,y,z" with rational entries
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct ProjectiveArgs {
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long)]
    prime: u64,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Subcommand)]
enum CountCmd {
    /// Count one fiber
    Fiber(CountFiberArgs),
    /// Count every fiber of F_p
    All(CountAllArgs),
    /// Fit counts at several primes against an integer quadratic in q
    Fit(CountFitArgs),
    /// Count commuting pairs in SL2(F_p), p <= 7
    CommutingPairs(CommutingArgs),
}

#[derive(Args)]
struct CountFiberArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long, allow_hyphen_values = true)]
    t: i64,
    #[arg(long, default_value = "fast")]
    method: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct CountAllArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value = "fast")]
    method: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct CountFitArgs {
    #[arg(long, allow_hyphen_values = true)]
    t: i64,
    /// Comma-separated primes, e.g. "3,5,7,11"
    #[arg(long, default_value = "3,5,7,11")]
    primes: String,
    #[arg(long, default_value = "fast")]
    method: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct CommutingArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Subcommand)]
enum EpolyCmd {
    /// Print the ten-entry table
    Table(FormatArgs),
    /// Check the additive identities of the table
    Check(FormatArgs),
}

#[derive(Args)]
struct BasisArgs {
    #[arg(long)]
    gens: u32,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct JacobianArgs {
    #[arg(long)]
    gens: u32,
    #[arg(long, default_value_t = 10007)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    samples: u32,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args)]
struct EliminateArgs {
    /// Nine comma-separated rationals for
    /// t[1],t[2],t[1,2],t[3],t[1,3],t[2,3],t[4],t[1,4],t[2,4]
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Work over F_p instead of Q
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Subcommand)]
enum Genus2Cmd {
    /// Print the four relations
    Relations(FormatArgs),
    /// Verify the relations on sampled genus-2 tuples
    Check(Genus2CheckArgs),
}

#[derive(Args)]
struct Genus2CheckArgs {
    /// Comma-separated primes
    #[arg(long, default_value = "5,7,11")]
    primes: String,
    #[arg(long, default_value_t = 200)]
    samples: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn verification(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    // die quietly when the consumer closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn poly_output(poly: &Poly, format: Format) -> String {
    match format {
        Format::Json => poly.to_json().to_string(),
        _ => poly.to_string(),
    }
}

fn parse_rational_arg(s: &str) -> Result<BigRational, Failure> {
    parse_rational(s).ok_or_else(|| Failure {
        code: 2,
        message: format!("cannot parse rational {s:?}"),
    })
}

fn parse_prime_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(|part| {
            part.trim().parse::<u64>().map_err(|_| Failure {
                code: 2,
                message: format!("cannot parse prime {part:?}"),
            })
        })
        .collect()
}

fn parse_method(s: &str) -> Result<CountMethod, Failure> {
    CountMethod::from_name(s).ok_or_else(|| Failure {
        code: 2,
        message: format!("unknown method {s:?}, expected fast or brute"),
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Reduce(args) => {
            let word = parse_word(&args.word, args.gens)?;
            let mut reducer = TraceReducer::new();
            let poly = reducer.reduce(&word, args.gens)?;
            println!("{}", poly_output(&poly, args.format));
            if args.stats {
                eprintln!("steps: {}, memo entries: {}", reducer.steps(), reducer.memo_len());
            }
            Ok(())
        }
        Command::Verify(cmd) => match cmd {
            VerifyCmd::Identity(args) => verify_identity(args),
            VerifyCmd::Engine(args) => verify_engine(args),
        },
        Command::Equation(cmd) => {
            match cmd {
                EquationCmd::F3(f) => println!("{}", poly_output(&f3_equation(), f.format)),
                EquationCmd::Discriminant(f) => {
                    println!("{}", poly_output(&discriminant_f3(), f.format))
                }
                EquationCmd::Torus(args) => {
                    let t = parse_rational_arg(&args.t)?;
                    println!("{}", poly_output(&torus_fiber(&t), args.format));
                }
                EquationCmd::Reducible(f) => {
                    let eqs = reducible_locus_f3();
                    match f.format {
                        Format::Json => {
                            let arr: Vec<_> = eqs.iter().map(Poly::to_json).collect();
                            println!("{}", serde_json::Value::Array(arr));
                        }
                        _ => {
                            for eq in &eqs {
                                println!("{eq}");
                            }
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Singular(args) => {
            let t = parse_rational_arg(&args.t)?;
            let points = singular_points(&t);
            match args.format {
                Format::Json => {
                    let arr: Vec<_> = points
                        .iter()
                        .map(|p| {
                            json!([
                                format_rational(&p.x),
                                format_rational(&p.y),
                                format_rational(&p.z)
                            ])
                        })
                        .collect();
                    println!("{}", json!({ "t": args.t.trim(), "points": arr }));
                }
                _ => {
                    if points.is_empty() {
                        println!("no singular points");
                    } else {
                        for p in &points {
                            println!("{p}");
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Hessian(args) => {
            let t = parse_rational_arg(&args.t)?;
            let coords: Vec<BigRational> = args
                .point
                .split(',')
                .map(|s| parse_rational_arg(s.trim()))
                .collect::<Result<_, _>>()?;
            if coords.len() != 3 {
                return Err(Failure { code: 2, message: "point needs exactly 3 coordinates".into() });
            }
            let pt = AffinePoint3 {
                x: coords[0].clone(),
                y: coords[1].clone(),
                z: coords[2].clone(),
            };
            let report = hessian_classify(&pt, &t)?;
            let kind = match report.kind {
                SingularKind::Odp => "ODP",
                SingularKind::Degenerate => "degenerate",
            };
            match args.format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "point": [
                            format_rational(&report.point.x),
                            format_rational(&report.point.y),
                            format_rational(&report.point.z)
                        ],
                        "hessian_det": format_rational(&report.hessian_det),
                        "kind": kind,
                    })
                ),
                _ => println!(
                    "{}: hessian det {} -> {kind}",
                    report.point,
                    format_rational(&report.hessian_det)
                ),
            }
            Ok(())
        }
        Command::Projective(args) => {
            let t = parse_rational_arg(&args.t)?;
            let report = projective_checks(&t, args.prime)?;
            match args.format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "p": report.p,
                        "smooth_at_infinity": report.smooth_at_infinity,
                        "infinity_count": report.infinity_count,
                        "expected_infinity_count": report.expected_infinity_count,
                        "infinity_is_three_lines": report.infinity_is_three_lines,
                        "affine_singular": report.affine_singular,
                        "expected_affine_singular": report.expected_affine_singular,
                        "passed": report.passed(),
                    })
                ),
                _ => {
                    println!(
                        "p = {}: smooth at infinity: {}; infinity locus: {} points (expected {}), three coordinate lines: {}",
                        report.p,
                        report.smooth_at_infinity,
                        report.infinity_count,
                        report.expected_infinity_count,
                        report.infinity_is_three_lines
                    );
                    println!(
                        "affine singular points: {:?} (expected {:?})",
                        report.affine_singular, report.expected_affine_singular
                    );
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::verification("projective checks failed"))
            }
        }
        Command::Count(cmd) => run_count(cmd),
        Command::Epoly(cmd) => match cmd {
            EpolyCmd::Table(f) => {
                match f.format {
                    Format::Json => {
                        let obj: serde_json::Map<String, serde_json::Value> = EPolyClass::ALL
                            .iter()
                            .map(|c| (c.name().to_string(), json!(epoly(*c).to_string())))
                            .collect();
                        println!("{}", serde_json::Value::Object(obj));
                    }
                    _ => {
                        for class in EPolyClass::ALL {
                            println!("{}: {}", class.name(), epoly(class));
                        }
                    }
                }
                Ok(())
            }
            EpolyCmd::Check(f) => {
                let ok = epoly_consistency();
                match f.format {
                    Format::Json => println!("{}", json!({ "consistent": ok })),
                    _ => println!("{}", if ok { "ok" } else { "FAIL" }),
                }
                if ok {
                    Ok(())
                } else {
                    Err(Failure::verification("e-polynomial identities failed"))
                }
            }
        },
        Command::Basis(args) => {
            let basis = transcendental_basis(args.gens)?;
            match args.format {
                Format::Json => {
                    let arr: Vec<_> = basis.iter().map(|v| json!(v.to_string())).collect();
                    println!("{}", serde_json::Value::Array(arr));
                }
                _ => {
                    let names: Vec<String> = basis.iter().map(|v| v.to_string()).collect();
                    println!("{}", names.join(" "));
                }
            }
            Ok(())
        }
        Command::JacobianRank(args) => {
            let rank = jacobian_rank(args.gens, args.prime, args.seed, args.samples)?;
            let expected = 3 * (args.gens as usize - 1);
            match args.format {
                Format::Json => println!(
                    "{}",
                    json!({ "k": args.gens, "rank": rank, "expected": expected })
                ),
                _ => println!("k = {}: rank {} (expected {})", args.gens, rank, expected),
            }
            if rank == expected {
                Ok(())
            } else {
                Err(Failure::verification(format!("rank {rank} != expected {expected}")))
            }
        }
        Command::EliminateTcd(args) => {
            let parts: Vec<BigRational> = args
                .values
                .split(',')
                .map(|s| parse_rational_arg(s.trim()))
                .collect::<Result<_, _>>()?;
            if parts.len() != 9 {
                return Err(Failure {
                    code: 2,
                    message: format!("need 9 values for the transcendence basis, got {}", parts.len()),
                });
            }
            let values: TcdInput = std::array::from_fn(|i| parts[i].clone());
            let modulus = match args.prime {
                Some(p) => Some(PrimeField::new_odd(p)?),
                None => None,
            };
            let poly = eliminate_tcd_at_point(&values, modulus)?;
            println!("{}", poly_output(&poly, args.format));
            Ok(())
        }
        Command::Genus2(cmd) => match cmd {
            Genus2Cmd::Relations(f) => {
                let rels = genus2_relations();
                match f.format {
                    Format::Json => {
                        let arr: Vec<_> = rels.iter().map(Poly::to_json).collect();
                        println!("{}", serde_json::Value::Array(arr));
                    }
                    _ => {
                        for (i, r) in rels.iter().enumerate() {
                            println!("R{}: {r}", i + 1);
                        }
                    }
                }
                Ok(())
            }
            Genus2Cmd::Check(args) => genus2_check(args),
        },
    }
}

fn run_count(cmd: CountCmd) -> Result<(), Failure> {
    match cmd {
        CountCmd::Fiber(args) => {
            let method = parse_method(&args.method)?;
            let record = count_fiber(args.prime, args.t, method, args.workers)?;
            match args.format {
                Format::Csv => println!("{}", record.csv_row()),
                Format::Json => println!(
                    "{}",
                    json!({ "p": record.p, "t": record.t, "n": record.n, "method": record.method.to_string() })
                ),
                Format::Pretty => println!(
                    "p = {}, t = {}: {} points ({})",
                    record.p, record.t, record.n, record.method
                ),
            }
            Ok(())
        }
        CountCmd::All(args) => {
            let method = parse_method(&args.method)?;
            let records = count_all_fibers(args.prime, method, args.workers)?;
            match args.format {
                Format::Json => {
                    let arr: Vec<_> = records
                        .iter()
                        .map(|r| json!({ "p": r.p, "t": r.t, "n": r.n, "method": r.method.to_string() }))
                        .collect();
                    println!("{}", serde_json::Value::Array(arr));
                }
                _ => {
                    println!("{CSV_HEADER}");
                    for r in &records {
                        println!("{}", r.csv_row());
                    }
                }
            }
            Ok(())
        }
        CountCmd::Fit(args) => {
            let method = parse_method(&args.method)?;
            let primes = parse_prime_list(&args.primes)?;
            let mut records = Vec::with_capacity(primes.len());
            for p in primes {
                records.push((p, count_fiber(p, args.t, method, args.workers)?.n));
            }
            let fit = fit_count_polynomial(&records)?;
            match args.format {
                Format::Json => {
                    let residuals: Vec<_> = fit
                        .residuals
                        .iter()
                        .map(|(p, r)| json!([p, format_rational(r)]))
                        .collect();
                    let interpolant: Vec<_> =
                        fit.interpolant.iter().map(format_rational).collect();
                    println!(
                        "{}",
                        json!({
                            "records": records,
                            "poly": fit.poly.as_ref().map(|e| e.to_string()),
                            "interpolant": interpolant,
                            "residuals": residuals,
                        })
                    );
                }
                _ => match &fit.poly {
                    Some(poly) => println!("fit: {poly}"),
                    None => {
                        println!("no polynomial fit");
                        let [c0, c1, c2] = &fit.interpolant;
                        println!(
                            "  interpolant through first three: ({})q^2 + ({})q + ({})",
                            format_rational(c2),
                            format_rational(c1),
                            format_rational(c0)
                        );
                        for (p, r) in &fit.residuals {
                            println!("  p = {p}: residual {}", format_rational(r));
                        }
                    }
                },
            }
            Ok(())
        }
        CountCmd::CommutingPairs(args) => {
            let n = count_commuting_pairs(args.prime)?;
            match args.format {
                Format::Json => println!("{}", json!({ "p": args.prime, "pairs": n })),
                _ => println!("{n}"),
            }
            Ok(())
        }
    }
}

fn verify_identity(args: VerifyIdentityArgs) -> Result<(), Failure> {
    let identities: Vec<MatrixIdentity> = if args.name == "all" {
        vec![
            MatrixIdentity::Qp,
            MatrixIdentity::Square,
            MatrixIdentity::Inverse,
            MatrixIdentity::Ttt,
        ]
    } else {
        vec![MatrixIdentity::from_name(&args.name).ok_or(Failure {
            code: 2,
            message: format!("unknown identity {:?}", args.name),
        })?]
    };
    let field = PrimeField::new(args.prime)?;
    let mut failures = 0u64;
    let mut lines = Vec::new();
    for identity in &identities {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let mut ok = 0u64;
        for _ in 0..args.count {
            let mats: Vec<_> = (0..identity.arity()).map(|_| random_sl2(field, &mut rng)).collect();
            if check_matrix_identity(*identity, &mats)? {
                ok += 1;
            } else {
                failures += 1;
            }
        }
        lines.push((identity.name().to_string(), ok, args.count as u64));
    }
    if args.exhaustive_f3 {
        let f3 = PrimeField::new(3)?;
        let all = enumerate_sl2(f3);
        let mut ok = 0u64;
        let mut total = 0u64;
        for identity in &identities {
            match identity.arity() {
                1 => {
                    for a in &all {
                        total += 1;
                        if check_matrix_identity(*identity, &[a.clone()])? {
                            ok += 1;
                        } else {
                            failures += 1;
                        }
                    }
                }
                _ => {
                    for a in &all {
                        for b in &all {
                            total += 1;
                            if check_matrix_identity(*identity, &[a.clone(), b.clone()])? {
                                ok += 1;
                            } else {
                                failures += 1;
                            }
                        }
                    }
                }
            }
        }
        lines.push(("exhaustive-f3".into(), ok, total));
    }
    match args.format {
        Format::Json => {
            let arr: Vec<_> = lines.iter().map(|(n, ok, t)| json!({ "name": n, "ok": ok, "total": t })).collect();
            println!("{}", serde_json::Value::Array(arr));
        }
        _ => {
            for (name, ok, total) in &lines {
                println!("{name}: {ok}/{total} ok");
            }
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::verification(format!("{failures} identity checks failed")))
    }
}

fn verify_engine(args: VerifyEngineArgs) -> Result<(), Failure> {
    let field = PrimeField::new(args.prime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut reducer = TraceReducer::new();
    let mut ok = 0u64;
    for _ in 0..args.words {
        let len = 1 + (rng.next_u64() as usize) % args.max_len;
        let word = Word::from_pairs((0..len).map(|_| {
            let g = 1 + (rng.next_u64() % args.gens as u64) as u32;
            let exps = [-3i32, -2, -1, 1, 2, 3];
            (g, exps[(rng.next_u64() % 6) as usize])
        }));
        let poly = reducer.reduce(&word, args.gens)?;
        let mut word_ok = true;
        for _ in 0..args.checks {
            let mats: BTreeMap<u32, _> =
                (1..=args.gens).map(|g| (g, random_sl2(field, &mut rng))).collect();
            let truth = word_eval(&word, &mats, field)?.trace();
            let asg = trace_assignment(&poly, &mats, field)?;
            if poly.evaluate(&field, &asg)? != truth {
                word_ok = false;
            }
        }
        if word_ok {
            ok += 1;
        }
    }
    match args.format {
        Format::Json => println!(
            "{}",
            json!({ "ok": ok, "total": args.words, "checks_per_word": args.checks })
        ),
        _ => println!("{ok}/{} ok", args.words),
    }
    if ok == args.words as u64 {
        Ok(())
    } else {
        Err(Failure::verification(format!("{} words failed", args.words as u64 - ok)))
    }
}

fn genus2_check(args: Genus2CheckArgs) -> Result<(), Failure> {
    let primes = parse_prime_list(&args.primes)?;
    let rels = genus2_relations();
    let mut lines = Vec::new();
    let mut failures = 0u64;
    for p in primes {
        let field = PrimeField::new_odd(p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let mut ok = 0u64;
        for _ in 0..args.samples {
            let tuple = sample_genus2_tuple(field, &mut rng)?;
            let mats: BTreeMap<u32, _> =
                (1..=4u32).map(|g| (g, tuple[(g - 1) as usize].clone())).collect();
            let mut sample_ok = true;
            for r in &rels {
                let asg = trace_assignment(r, &mats, field)?;
                if r.evaluate(&field, &asg)? != 0 {
                    sample_ok = false;
                }
            }
            if sample_ok {
                ok += 1;
            } else {
                failures += 1;
            }
        }
        lines.push((p, ok, args.samples as u64));
    }
    match args.format {
        Format::Json => {
            let arr: Vec<_> = lines.iter().map(|(p, ok, t)| json!({ "p": p, "ok": ok, "total": t })).collect();
            println!("{}", serde_json::Value::Array(arr));
        }
        _ => {
            for (p, ok, total) in &lines {
                println!("p = {p}: {ok}/{total} ok");
            }
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::verification(format!("{failures} samples failed")))
    }
}
