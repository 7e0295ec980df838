//! Command-line front end: run the theorem checkers and searches, inspect
//! codes, tensors and q-matroids, and emit versioned JSON or Markdown
//! reports.
//!
//! Exit codes: 0 confirmed/pass, 1 refuted/fail, 2 inconclusive or budget,
//! 3 usage error.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmatroids::error::Error;
use qmatroids::fixtures;
use qmatroids::gf::Field;
use qmatroids::qmatroid::QMatroid;
use qmatroids::rmcode::MatrixCode;
use qmatroids::subspace::Subspace;
use qmatroids::tensor::Tensor3;
use qmatroids::verify::{self, Census, SearchParams, Status, Verdict};

const REPORT_SCHEMA: &str = "report_v1";
const WORKERS_ENV: &str = "QMATROIDS_WORKERS";

#[derive(Parser)]
#[command(
    name = "qmatroids",
    version,
    about = "q-matroid representability checkers, searches and code tools"
)]
struct Cli {
    #[command(flatten)]
    run: RunOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: QMATROIDS_WORKERS or all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed recorded in the report and used by sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Candidate cap for searches.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget: u64,
    /// Wall-clock cap in seconds for searches; exceeding it is inconclusive.
    #[arg(long, global = true)]
    time_cap_secs: Option<u64>,
    /// Checkpoint file for resumable searches.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Write the report here as well as to standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Theorem checkers producing certificates.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Exhaustive searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Aggregate classification report for F_2^3 or F_2^4.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Run the 4 x 2 census and feed it to the per-class checkers.
        #[arg(long)]
        with_census: bool,
    },
    /// Code file operations.
    #[command(subcommand)]
    Code(CodeCmd),
    /// q-matroid operations.
    #[command(subcommand)]
    Qm(QmCmd),
    /// Tensor operations.
    #[command(subcommand)]
    Tensor(TensorCmd),
    /// Fixture self-checks.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Uniform q-matroids admit no n x m representation with m < n.
    Uniform {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        m: usize,
        /// Also search exhaustively when the candidate count fits.
        #[arg(long, default_value_t = 10_000_000)]
        search_budget: u64,
    },
    /// Parameter forcing for almost uniform q-matroids.
    AlmostUniform {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Non-Pappus exclusion (m <= 8) or forced distribution (m >= 9).
    Nonpappus {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        m: usize,
    },
    /// Rank-one q-matroids are never purely multilinear.
    Rank1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 10_000_000)]
        search_budget: u64,
    },
    /// Rank-two class checker on F_2^4 (classes 1..=10 of the fixture table).
    Class {
        #[arg(long)]
        class: u32,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Run the 4 x 2 census for the m = 2 closure.
        #[arg(long)]
        with_census: bool,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Census of k-dimensional subcodes of F_q^{n x m} filtered by
    /// almost affinity and an optional target rank function.
    Divisible {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Target q-matroid: uniform:K | rank1:T | almost-uniform:K |
        /// nonpappus | code:FILE.
        #[arg(long)]
        target: Option<String>,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Parameters, distance and idealizer of a code file.
    Info { file: PathBuf },
    /// Trace-form dual, written in the same text format.
    Dual { file: PathBuf },
    /// Exact rank distribution.
    Distribution { file: PathBuf },
}

#[derive(Subcommand)]
enum QmCmd {
    /// Full-lattice JSON dump of a q-matroid (n <= 4).
    Dump {
        /// uniform:K,N | almost-uniform:K,N | rank1:N,T | nonpappus | code:FILE
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// GL(n, q) isomorphism test between two q-matroids.
    Iso {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
}

#[derive(Subcommand)]
enum TensorCmd {
    /// Tensor rank function at a subspace.
    Rho {
        /// Tensor file (`q k n m` header, axis-1 slices).
        #[arg(long)]
        tensor: PathBuf,
        /// Subspace basis rows, comma separated digit strings.
        #[arg(long)]
        rows: String,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// Verify checksums and the embedded-matrix properties.
    Check,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version print normally; anything else is usage error 3
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(w) = cli
        .run
        .workers
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()))
    {
        init_workers(w);
    }
    let started = Instant::now();
    match run(&cli, started) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BudgetExceeded(_) => 2,
                Error::Parse(_) | Error::BadParams(_) => 3,
                _ => 3,
            };
            std::process::exit(code);
        }
    }
}

#[cfg(feature = "parallel")]
fn init_workers(w: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
}

#[cfg(not(feature = "parallel"))]
fn init_workers(_w: usize) {}

fn run(cli: &Cli, started: Instant) -> Result<i32, Error> {
    let opts = &cli.run;
    match &cli.command {
        Command::Verify(v) => {
            let verdict = run_verify(v, opts)?;
            emit_verdict(opts, command_echo(cli), &verdict, started)
        }
        Command::Search(SearchCmd::Divisible { n, m, k, q, target }) => {
            let mut params = SearchParams::new(*n, *m, *k, *q).with_budget(opts.budget);
            if let Some(t) = target {
                let (label, qm) = parse_qm_spec(t, *q, *n)?;
                params = params.with_target(label, qm);
            }
            if let Some(path) = &opts.checkpoint {
                params = params.with_checkpoint(path);
            }
            if let Some(secs) = opts.time_cap_secs {
                params = params.with_time_cap(Duration::from_secs(secs));
            }
            let census = verify::divisible_code_search(&params)?;
            let verdict = verify::census_verdict(&params, &census, started);
            emit_verdict(opts, command_echo(cli), &verdict, started)
        }
        Command::Classify { n, q, with_census } => {
            let census: Option<Census> = if *with_census {
                let mut params = SearchParams::new(4, 2, 4, 2).with_budget(opts.budget);
                if let Some(path) = &opts.checkpoint {
                    params = params.with_checkpoint(path);
                }
                Some(verify::divisible_code_search(&params)?)
            } else {
                None
            };
            let verdict = verify::classification_report(*n, *q, census.as_ref())?;
            emit_verdict(opts, command_echo(cli), &verdict, started)
        }
        Command::Code(c) => run_code(c, opts, cli, started),
        Command::Qm(c) => run_qm(c, opts, cli, started),
        Command::Tensor(TensorCmd::Rho { tensor, rows }) => {
            let text = std::fs::read_to_string(tensor)?;
            let t = Tensor3::parse(&text)?;
            let field = t.field().clone();
            let (_, n, _) = t.dims();
            let basis_rows: Vec<Vec<u16>> = rows
                .split(',')
                .map(|r| {
                    r.trim()
                        .chars()
                        .map(|ch| {
                            ch.to_digit(10)
                                .map(|d| d as u16)
                                .ok_or_else(|| Error::Parse(format!("bad digit {ch:?}")))
                        })
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            let u = Subspace::from_rows(&field, n, &basis_rows);
            let rho = t.rho(&u)?;
            let payload = json!({
                "subspace": u.to_text(),
                "dim": u.dim(),
                "rho": [*rho.numer(), *rho.denom()],
            });
            emit_payload(opts, command_echo(cli), "tensor rho", payload, started)?;
            Ok(0)
        }
        Command::Fixtures(FixturesCmd::Check) => {
            let report = fixtures::check_fixtures()?;
            let ok = report.all_ok();
            let payload = json!({
                "checksums_ok": report.checksums_ok,
                "non_pappus_almost_affine": report.non_pappus_almost_affine,
                "non_pappus_matroid_matches": report.non_pappus_matroid_matches,
                "non_pappus_line_count": report.non_pappus_line_count,
                "u24_block_almost_affine": report.u24_block_almost_affine,
                "u24_block_matroid_is_u24": report.u24_block_matroid_is_u24,
                "u24_matrix_code_dim": report.u24_matrix_code_dim,
                "u24_matrix_almost_affine": report.u24_matrix_almost_affine,
                "u24_right_idealizer_f4": report.u24_right_idealizer_f4,
                "all_ok": ok,
            });
            emit_payload(opts, command_echo(cli), "fixtures check", payload, started)?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn run_verify(cmd: &VerifyCmd, opts: &RunOpts) -> Result<Verdict, Error> {
    match cmd {
        VerifyCmd::Uniform {
            k,
            n,
            q,
            m,
            search_budget,
        } => verify::uniform_obstruction(*k, *n, *q, *m, (*search_budget).min(opts.budget)),
        VerifyCmd::AlmostUniform { k, n, q } => verify::almost_uniform_params(*k, *n, *q),
        VerifyCmd::Nonpappus { q, m } => {
            if *m >= 9 {
                verify::nonpappus_distribution_verdict(*q, *m)
            } else {
                verify::nonpappus_exclusion(*q, *m)
            }
        }
        VerifyCmd::Rank1 {
            n,
            t,
            q,
            search_budget,
        } => verify::rank1_exclusion(*n, *t, *q, (*search_budget).min(opts.budget)),
        VerifyCmd::Class { class, q, with_census } => {
            let census = if *with_census {
                Some(verify::divisible_code_search(
                    &SearchParams::new(4, 2, 4, 2).with_budget(opts.budget),
                )?)
            } else {
                None
            };
            verify::class_checker(*class, *q, census.as_ref())
        }
    }
}

fn run_code(cmd: &CodeCmd, opts: &RunOpts, cli: &Cli, started: Instant) -> Result<i32, Error> {
    match cmd {
        CodeCmd::Info { file } => {
            let code = MatrixCode::parse(&std::fs::read_to_string(file)?)?;
            let dist = code.rank_distribution(opts.budget);
            let ideal = code.right_idealizer();
            let payload = json!({
                "q": code.field().q(),
                "n": code.n(),
                "m": code.m(),
                "k": code.dim(),
                "min_distance": dist.as_ref().ok().and_then(|d| d.min_positive_rank()),
                "rank_distribution": dist.ok().map(|d| {
                    d.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>()
                }),
                "right_idealizer_dim": ideal.as_ref().ok().map(|r| r.dim()),
                "right_idealizer_subfields": ideal.ok().map(|r| r.subfield_flags),
                "code": code.to_json(),
            });
            emit_payload(opts, command_echo(cli), "code info", payload, started)?;
            Ok(0)
        }
        CodeCmd::Dual { file } => {
            let code = MatrixCode::parse(&std::fs::read_to_string(file)?)?;
            let dual = code.dual();
            print_or_write(opts, &dual.to_text())?;
            Ok(0)
        }
        CodeCmd::Distribution { file } => {
            let code = MatrixCode::parse(&std::fs::read_to_string(file)?)?;
            let dist = code.rank_distribution(opts.budget)?;
            if opts.format == Format::Csv && !opts.json {
                let mut s = String::from("rank,count\n");
                for (i, c) in dist.counts.iter().enumerate() {
                    s.push_str(&format!("{i},{c}\n"));
                }
                print_or_write(opts, &s)?;
                return Ok(0);
            }
            let payload = json!({
                "counts": dist.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "total": dist.total().to_string(),
            });
            emit_payload(opts, command_echo(cli), "code distribution", payload, started)?;
            Ok(0)
        }
    }
}

fn run_qm(cmd: &QmCmd, opts: &RunOpts, cli: &Cli, started: Instant) -> Result<i32, Error> {
    match cmd {
        QmCmd::Dump { spec, q } => {
            let (label, qm) = parse_qm_spec(spec, *q, 0)?;
            let dump = qm.dump(1 << 20)?;
            let payload = json!({ "spec": label, "dump": dump });
            emit_payload(opts, command_echo(cli), "qm dump", payload, started)?;
            Ok(0)
        }
        QmCmd::Iso { a, b, q } => {
            let (la, qa) = parse_qm_spec(a, *q, 0)?;
            let (lb, qb) = parse_qm_spec(b, *q, 0)?;
            let witness = qa.isomorphic(&qb, opts.budget)?;
            let payload = json!({
                "a": la,
                "b": lb,
                "isomorphic": witness.is_some(),
                "witness": witness.map(|w| w.to_text()),
            });
            let found = payload["isomorphic"].as_bool().unwrap();
            emit_payload(opts, command_echo(cli), "qm iso", payload, started)?;
            Ok(if found { 0 } else { 1 })
        }
    }
}

/// Grammar: uniform:K,N | almost-uniform:K,N | rank1:N,T | nonpappus |
/// code:FILE. The ambient hint resolves shapes when a search provides one.
fn parse_qm_spec(spec: &str, q: u32, ambient_hint: usize) -> Result<(String, QMatroid), Error> {
    let field = Field::of_order(q)?;
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let nums = |s: &str| -> Result<Vec<usize>, Error> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number in spec {spec:?}")))
            })
            .collect()
    };
    match head {
        "uniform" => {
            let v = nums(rest)?;
            let (k, n) = match v[..] {
                [k, n] => (k, n),
                [k] if ambient_hint > 0 => (k, ambient_hint),
                _ => return Err(Error::Parse(format!("uniform needs K,N in {spec:?}"))),
            };
            Ok((
                format!("U_{{{k},{n}}}({q})"),
                QMatroid::uniform(k, n, &field)?,
            ))
        }
        "almost-uniform" => {
            let v = nums(rest)?;
            let (k, n) = match v[..] {
                [k, n] => (k, n),
                [k] if ambient_hint > 0 => (k, ambient_hint),
                _ => {
                    return Err(Error::Parse(format!(
                        "almost-uniform needs K,N in {spec:?}"
                    )))
                }
            };
            // canonical circuit-hyperplane: the first k coordinates
            let rows: Vec<Vec<u16>> = (0..k)
                .map(|i| {
                    let mut r = vec![0u16; n];
                    r[i] = 1;
                    r
                })
                .collect();
            let x = Subspace::from_rows(&field, n, &rows);
            Ok((
                format!("AU_{{{k},{n}}}({q}, <e1..e{k}>)"),
                QMatroid::almost_uniform(k, n, &field, &x)?,
            ))
        }
        "rank1" => {
            let v = nums(rest)?;
            let (n, t) = match v[..] {
                [n, t] => (n, t),
                [t] if ambient_hint > 0 => (ambient_hint, t),
                _ => return Err(Error::Parse(format!("rank1 needs N,T in {spec:?}"))),
            };
            Ok((
                format!("rank-one(n={n}, t={t}, q={q})"),
                QMatroid::rank_one(n, t, &field)?,
            ))
        }
        "nonpappus" => Ok((format!("NP({q})"), QMatroid::non_pappus(&field))),
        "code" => {
            let code = MatrixCode::parse(&std::fs::read_to_string(rest)?)?;
            Ok((
                format!("M[code {}]", rest),
                QMatroid::from_matrix_code(&code),
            ))
        }
        _ => Err(Error::Parse(format!("unknown q-matroid spec {spec:?}"))),
    }
}

fn command_echo(cli: &Cli) -> serde_json::Value {
    let args: Vec<String> = std::env::args().skip(1).collect();
    json!({
        "args": args,
        "seed": cli.run.seed,
        "budget": cli.run.budget,
        "workers": qmatroids::par::workers(),
    })
}

fn emit_verdict(
    opts: &RunOpts,
    config: serde_json::Value,
    verdict: &Verdict,
    started: Instant,
) -> Result<i32, Error> {
    let report = json!({
        "schema": REPORT_SCHEMA,
        "config": config,
        "wall_ms": started.elapsed().as_millis() as u64,
        "claim": verdict.claim,
        "status": verdict.status,
        "certificate": verdict.certificate,
        "stats": verdict.stats,
    });
    if opts.json || opts.format == Format::Json {
        print_or_write(opts, &serde_json::to_string_pretty(&report).unwrap())?;
    } else {
        let mut md = String::new();
        md.push_str(&format!("# {}\n\n", verdict.claim));
        md.push_str(&format!(
            "status: **{}**  \nwall time: {} ms, workers: {}\n\n",
            match verdict.status {
                Status::Confirmed => "confirmed",
                Status::Refuted => "refuted",
                Status::Inconclusive => "inconclusive",
            },
            started.elapsed().as_millis(),
            verdict.stats.workers,
        ));
        md.push_str("```json\n");
        md.push_str(&serde_json::to_string_pretty(&verdict.certificate).unwrap());
        md.push_str("\n```\n");
        print_or_write(opts, &md)?;
    }
    Ok(verdict.status.exit_code())
}

fn emit_payload(
    opts: &RunOpts,
    config: serde_json::Value,
    title: &str,
    payload: serde_json::Value,
    started: Instant,
) -> Result<(), Error> {
    let report = json!({
        "schema": REPORT_SCHEMA,
        "config": config,
        "wall_ms": started.elapsed().as_millis() as u64,
        "result": payload,
    });
    if opts.json || opts.format == Format::Json {
        print_or_write(opts, &serde_json::to_string_pretty(&report).unwrap())?;
    } else {
        let mut md = format!("# {title}\n\n```json\n");
        md.push_str(&serde_json::to_string_pretty(&payload).unwrap());
        md.push_str("\n```\n");
        print_or_write(opts, &md)?;
    }
    Ok(())
}

fn print_or_write(opts: &RunOpts, text: &str) -> Result<(), Error> {
    println!("{text}");
    if let Some(path) = &opts.output {
        std::fs::write(path, text)?;
    }
    Ok(())
}
