//! Command-line front end: reproducible experiments over edge-list files
//! with machine-readable JSON (or CSV) output. Every output embeds the run
//! manifest; identical manifests produce byte-identical output regardless of
//! the worker-thread count.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::estimator::{self, EstimateReport, LogNumber};
use crate::exact::{self, DEFAULT_EDGE_CAP, DEFAULT_FRONTIER_CAP};
use crate::graph::{self, Graph};
use crate::lemmas::{self, Suite};
use crate::montecarlo::{self, DEFAULT_EPSILON};
use crate::schema;
use crate::spectral;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

const REJECTION_CAP: usize = 1000;

#[derive(Parser)]
#[command(
    name = "euler-orient",
    version,
    about = "Count, bound, and estimate Eulerian orientations of even-degree graphs"
)]
struct Args {
    /// Worker threads (default: EULER_ORIENT_THREADS, else all cores).
    /// Output bytes never depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge-list file.
    Gen {
        /// complete:N | bipartite:A,B | cycle:N | circulant:N:S1,S2,... |
        /// random:N:TOGGLES[:GAMMA_MIN]
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact Eulerian-orientation count by two independent algorithms.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Edge cap for the backtracker (loud warning when raised).
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        edge_cap: usize,
        /// Frontier-width cap for the dynamic program.
        #[arg(long, default_value_t = DEFAULT_FRONTIER_CAP)]
        frontier_cap: usize,
    },
    /// Closed-form estimates and bounds for EO(G).
    Estimate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated subset of theta,mckay_kn,isaev_knn,bounds.
        #[arg(long, default_value = "theta")]
        methods: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// json or csv
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        edge_cap: usize,
    },
    /// Monte Carlo estimates of EO(G).
    Mc {
        #[arg(long = "in")]
        input: PathBuf,
        /// uniform_S or gaussian_Int
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Box exponent for gaussian_Int (must lie in (0, 1/6)).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run lemma-verification suites; nonzero exit on any violation.
    Verify {
        /// fiedler|condition|invnorm|detdrop|layering|cosbound|gaussbound|all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Edge-list files or generator specs; default: the built-in corpus.
        #[arg(long)]
        corpus: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// json or csv
        #[arg(long, default_value = "json")]
        format: String,
    },
}

/// The reproducibility record embedded in every output.
#[derive(Clone, Debug, Serialize)]
struct Manifest {
    subcommand: String,
    input: Option<String>,
    seed: Option<u64>,
    samples: Option<u64>,
    epsilon: Option<f64>,
    out: Option<String>,
    version: String,
}

impl Manifest {
    fn new(subcommand: &str) -> Self {
        Manifest {
            subcommand: subcommand.to_string(),
            input: None,
            seed: None,
            samples: None,
            epsilon: None,
            out: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

pub fn run() -> i32 {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // clap exits 2 by default; keep 2 reserved for violations
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { EXIT_OK } else { EXIT_USAGE };
        }
    };

    let threads = args.threads.or_else(|| {
        std::env::var("EULER_ORIENT_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });

    let body = || match dispatch(args.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };

    match threads {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool");
            pool.install(body)
        }
        _ => body(),
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::EdgeCapExceeded { .. }
        | Error::FrontierCapExceeded { .. }
        | Error::RejectionCapExceeded { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Gen { spec, seed, out } => cmd_gen(&spec, seed, &out),
        Command::Count {
            input,
            out,
            edge_cap,
            frontier_cap,
        } => cmd_count(&input, out.as_deref(), edge_cap, frontier_cap),
        Command::Estimate {
            input,
            methods,
            out,
            format,
            edge_cap,
        } => cmd_estimate(&input, &methods, out.as_deref(), &format, edge_cap),
        Command::Mc {
            input,
            method,
            samples,
            seed,
            epsilon,
            out,
        } => cmd_mc(&input, &method, samples, seed, epsilon, out.as_deref()),
        Command::Verify {
            suite,
            corpus,
            seed,
            out,
            format,
        } => cmd_verify(&suite, &corpus, seed, out.as_deref(), &format),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    graph::parse_edge_list(&text)
}

fn emit(doc: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ----------------------------------------------------------------------------
// gen
// ----------------------------------------------------------------------------

/// Builds a graph from a generator spec; returns the graph and whether the
/// spec was a seeded random family (whose spectrum we then report).
pub fn graph_from_spec(spec: &str, seed: u64) -> Result<(Graph, bool)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::InvalidInput(format!("bad generator spec {spec:?}"));
    let parse_num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    match parts.as_slice() {
        ["complete", n] => Ok((graph::complete(parse_num(n)?)?, false)),
        ["bipartite", ab] => {
            let nums: Vec<&str> = ab.split(',').collect();
            if nums.len() != 2 {
                return Err(bad());
            }
            Ok((
                graph::complete_bipartite(parse_num(nums[0])?, parse_num(nums[1])?)?,
                false,
            ))
        }
        ["cycle", n] => Ok((graph::cycle(parse_num(n)?)?, false)),
        ["circulant", n, offsets] => {
            let offs: Vec<usize> = offsets
                .split(',')
                .map(parse_num)
                .collect::<Result<Vec<_>>>()?;
            Ok((graph::circulant(parse_num(n)?, &offs)?, false))
        }
        ["random", n, toggles] => Ok((
            graph::random_even_graph(parse_num(n)?, parse_num(toggles)?, seed)?,
            true,
        )),
        ["random", n, toggles, gamma_min] => {
            let n = parse_num(n)?;
            let toggles = parse_num(toggles)?;
            let gamma_min: f64 = gamma_min.parse().map_err(|_| bad())?;
            for attempt in 0..REJECTION_CAP {
                let g =
                    graph::random_even_graph(n, toggles, seed.wrapping_add(attempt as u64))?;
                if !g.is_connected() {
                    continue;
                }
                if spectral::spectral_summary(&g)?.gamma >= gamma_min {
                    return Ok((g, true));
                }
            }
            Err(Error::RejectionCapExceeded {
                attempts: REJECTION_CAP,
            })
        }
        _ => Err(bad()),
    }
}

fn cmd_gen(spec: &str, seed: u64, out: &Path) -> Result<i32> {
    let (g, random) = graph_from_spec(spec, seed)?;
    std::fs::write(out, g.to_edge_list())
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", out.display())))?;

    let (lambda2, gamma) = if random {
        let s = spectral::spectral_summary(&g)?;
        (Some(s.lambda2), Some(s.gamma))
    } else {
        (None, None)
    };
    let mut manifest = Manifest::new("gen");
    manifest.input = Some(spec.to_string());
    manifest.seed = Some(seed);
    manifest.out = Some(out.display().to_string());
    let doc = json!({
        "schema_version": schema::SCHEMA_VERSION,
        "manifest": manifest,
        "n": g.n(),
        "m": g.edge_count(),
        "lambda2": lambda2,
        "gamma": gamma,
        "path": out.display().to_string(),
    });
    debug_assert!(schema::validate(schema::Kind::Gen, &doc).is_ok());
    emit(&doc, None)?;
    Ok(EXIT_OK)
}

// ----------------------------------------------------------------------------
// count
// ----------------------------------------------------------------------------

fn cmd_count(
    input: &Path,
    out: Option<&Path>,
    edge_cap: usize,
    frontier_cap: usize,
) -> Result<i32> {
    if edge_cap > DEFAULT_EDGE_CAP {
        eprintln!(
            "warning: raising the edge cap to {edge_cap}; exact counting is exponential in m"
        );
    }
    if frontier_cap > DEFAULT_FRONTIER_CAP {
        eprintln!(
            "warning: raising the frontier cap to {frontier_cap}; DP state space may be huge"
        );
    }
    let g = read_graph(input)?;
    let back = exact::eo_count_backtrack(&g, edge_cap)?;
    let dp = exact::eo_count_dp(&g, frontier_cap)?;
    let agree = back == dp;

    let mut manifest = Manifest::new("count");
    manifest.input = Some(input.display().to_string());
    manifest.out = out.map(|p| p.display().to_string());
    let doc = json!({
        "schema_version": schema::SCHEMA_VERSION,
        "manifest": manifest,
        "eo_backtrack": back.to_string(),
        "eo_dp": dp.to_string(),
        "agree": agree,
    });
    debug_assert!(schema::validate(schema::Kind::Count, &doc).is_ok());
    emit(&doc, out)?;
    if !agree {
        eprintln!("error: the two exact counters disagree; this is a bug worth reporting");
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_OK)
}

// ----------------------------------------------------------------------------
// estimate
// ----------------------------------------------------------------------------

fn bipartition_sizes(g: &Graph) -> Option<(usize, usize)> {
    // 2-color by BFS; None when an odd cycle or disconnection breaks it
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    color[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut seen = 1usize;
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if color[w] == u8::MAX {
                color[w] = 1 - color[v];
                seen += 1;
                queue.push_back(w);
            } else if color[w] == color[v] {
                return None;
            }
        }
    }
    if seen != n {
        return None;
    }
    let a = color.iter().filter(|&&c| c == 0).count();
    Some((a, n - a))
}

fn is_complete_bipartite_balanced(g: &Graph) -> Option<usize> {
    let (a, b) = bipartition_sizes(g)?;
    if a == b && g.edge_count() == a * b {
        Some(a)
    } else {
        None
    }
}

fn is_complete(g: &Graph) -> bool {
    g.edge_count() == g.n() * (g.n() - 1) / 2
}

fn regular_degree(g: &Graph) -> Option<usize> {
    let ds = g.degree_sequence().degrees;
    let d = *ds.first()?;
    ds.iter().all(|&x| x == d).then_some(d)
}

fn make_report(
    g: &Graph,
    id: &str,
    method: &str,
    estimate: &LogNumber,
    ln_t: Option<f64>,
    exact: Option<&spectral::BigCount>,
    note: Option<String>,
) -> Result<EstimateReport> {
    let s = spectral::spectral_summary(g)?;
    let ratio = match exact {
        Some(x) => Some(estimator::ratio_exact_over_estimate(x, estimate)?),
        None => None,
    };
    Ok(EstimateReport {
        graph_id: id.to_string(),
        n: g.n(),
        m: g.edge_count(),
        lambda2: s.lambda2,
        gamma: s.gamma,
        ln_t,
        ln_estimate: estimate.ln(),
        method: method.to_string(),
        exact: exact.map(|x| x.to_string()),
        ratio,
        note,
    })
}

fn cmd_estimate(
    input: &Path,
    methods: &str,
    out: Option<&Path>,
    format: &str,
    edge_cap: usize,
) -> Result<i32> {
    let g = read_graph(input)?;
    let id = input
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "graph".to_string());

    // attach the exact count whenever the backtracker can afford it
    let exact = if g.edge_count() <= edge_cap {
        Some(exact::eo_count_backtrack(&g, edge_cap)?)
    } else {
        None
    };

    let mut reports: Vec<EstimateReport> = Vec::new();
    for method in methods.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match method {
            "theta" => {
                let est = estimator::theta_estimate(&g)?;
                let ln_t = spectral::ln_bigcount(&spectral::spanning_tree_count(&g));
                reports.push(make_report(&g, &id, "theta", &est, Some(ln_t), exact.as_ref(), None)?);
            }
            "mckay_kn" => {
                if !is_complete(&g) {
                    return Err(Error::InvalidInput(
                        "mckay_kn applies to complete graphs only".into(),
                    ));
                }
                let est = estimator::mckay_kn(g.n())?;
                reports.push(make_report(
                    &g,
                    &id,
                    "mckay_kn",
                    &est,
                    None,
                    exact.as_ref(),
                    Some(
                        "closed form stated in the literature for even n; K_n is even-degree \
                         only for odd n, so odd n is required here"
                            .to_string(),
                    ),
                )?);
            }
            "isaev_knn" => {
                let half = is_complete_bipartite_balanced(&g).ok_or_else(|| {
                    Error::InvalidInput("isaev_knn applies to balanced complete bipartite graphs".into())
                })?;
                let est = estimator::isaev_knn(half)?;
                reports.push(make_report(&g, &id, "isaev_knn", &est, None, exact.as_ref(), None)?);
            }
            "bounds" => {
                let deg = regular_degree(&g).ok_or_else(|| {
                    Error::InvalidInput("bounds apply to regular graphs only".into())
                })?;
                if deg % 2 != 0 || deg == 0 {
                    return Err(Error::InvalidInput(format!(
                        "bounds need a 2d-regular graph; degree {deg} is odd or zero"
                    )));
                }
                let (lo, hi) = estimator::regular_bounds(g.n(), deg / 2)?;
                reports.push(make_report(&g, &id, "bounds_lower", &lo, None, exact.as_ref(), None)?);
                reports.push(make_report(&g, &id, "bounds_upper", &hi, None, exact.as_ref(), None)?);
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown method {other:?}; expected theta,mckay_kn,isaev_knn,bounds"
                )))
            }
        }
    }

    let mut manifest = Manifest::new("estimate");
    manifest.input = Some(input.display().to_string());
    manifest.out = out.map(|p| p.display().to_string());

    match format {
        "json" => {
            let doc = json!({
                "schema_version": schema::SCHEMA_VERSION,
                "manifest": manifest,
                "reports": reports,
            });
            debug_assert!(schema::validate(schema::Kind::Estimate, &doc).is_ok());
            emit(&doc, out)?;
        }
        "csv" => {
            let mut text = String::from(
                "graph_id,n,m,lambda2,gamma,ln_t,ln_estimate,approx,method,exact,ratio\n",
            );
            for r in &reports {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.graph_id,
                    r.n,
                    r.m,
                    r.lambda2,
                    r.gamma,
                    r.ln_t.map_or(String::new(), |x| x.to_string()),
                    r.ln_estimate,
                    LogNumber::from_ln(r.ln_estimate).approx_string(),
                    r.method,
                    r.exact.clone().unwrap_or_default(),
                    r.ratio.map_or(String::new(), |x| x.to_string()),
                );
            }
            emit_text(&text, out)?;
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown format {other:?}; expected json or csv"
            )))
        }
    }
    Ok(EXIT_OK)
}

// ----------------------------------------------------------------------------
// mc
// ----------------------------------------------------------------------------

fn cmd_mc(
    input: &Path,
    method: &str,
    samples: u64,
    seed: u64,
    epsilon: Option<f64>,
    out: Option<&Path>,
) -> Result<i32> {
    let g = read_graph(input)?;
    let result = match method {
        "uniform_S" => {
            if epsilon.is_some() {
                return Err(Error::InvalidInput("epsilon only applies to gaussian_Int".into()));
            }
            montecarlo::mc_s_uniform(&g, samples, seed)?
        }
        "gaussian_Int" => {
            montecarlo::mc_int_gaussian(&g, samples, seed, epsilon.unwrap_or(DEFAULT_EPSILON))?
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown method {other:?}; expected uniform_S or gaussian_Int"
            )))
        }
    };

    let mut manifest = Manifest::new("mc");
    manifest.input = Some(input.display().to_string());
    manifest.seed = Some(seed);
    manifest.samples = Some(samples);
    manifest.epsilon = result.epsilon;
    manifest.out = out.map(|p| p.display().to_string());
    let doc = json!({
        "schema_version": schema::SCHEMA_VERSION,
        "manifest": manifest,
        "result": result,
    });
    debug_assert!(schema::validate(schema::Kind::Mc, &doc).is_ok());
    emit(&doc, out)?;
    Ok(EXIT_OK)
}

// ----------------------------------------------------------------------------
// verify
// ----------------------------------------------------------------------------

fn load_corpus(entries: &[String], seed: u64) -> Result<Vec<(String, Graph)>> {
    if entries.is_empty() {
        return Ok(lemmas::built_in_corpus(seed));
    }
    let mut corpus = Vec::new();
    for entry in entries {
        let path = Path::new(entry);
        if path.exists() {
            corpus.push((
                path.file_stem()
                    .map(|s| s.to_string_lossy().to_string())
                    .unwrap_or_else(|| entry.clone()),
                read_graph(path)?,
            ));
        } else {
            let (g, _) = graph_from_spec(entry, seed)?;
            corpus.push((entry.clone(), g));
        }
    }
    Ok(corpus)
}

fn cmd_verify(
    suite: &str,
    corpus_args: &[String],
    seed: u64,
    out: Option<&Path>,
    format: &str,
) -> Result<i32> {
    let suite = Suite::from_str(suite)?;
    let corpus = load_corpus(corpus_args, seed)?;
    let reports = lemmas::run_suite(suite, &corpus, seed)?;
    let violations: usize = reports.iter().map(|r| r.violations).sum();

    let mut manifest = Manifest::new("verify");
    manifest.seed = Some(seed);
    manifest.input = if corpus_args.is_empty() {
        Some("built-in".to_string())
    } else {
        Some(corpus_args.join(";"))
    };
    manifest.out = out.map(|p| p.display().to_string());

    match format {
        "json" => {
            let doc = json!({
                "schema_version": schema::SCHEMA_VERSION,
                "manifest": manifest,
                "violations": violations,
                "reports": reports,
            });
            debug_assert!(schema::validate(schema::Kind::Verify, &doc).is_ok());
            emit(&doc, out)?;
        }
        "csv" => {
            let mut text = String::from("lemma,instances,violations,skipped,observed_constant\n");
            for r in &reports {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{}",
                    r.lemma,
                    r.instances,
                    r.violations,
                    r.skipped,
                    r.observed_constant.map_or(String::new(), |x| x.to_string()),
                );
            }
            emit_text(&text, out)?;
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown format {other:?}; expected json or csv"
            )))
        }
    }

    if violations > 0 {
        // write replayable counterexamples next to the output (or cwd)
        let dir = out
            .and_then(|p| p.parent())
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or_else(|| Path::new("."));
        let mut k = 0usize;
        for report in &reports {
            for cx in &report.counterexamples {
                let path = dir.join(format!("counterexample_{}_{k}.txt", report.lemma));
                let mut body = format!("# lemma: {}\n# instance: {}\n# {}\n", report.lemma, cx.instance, cx.detail);
                if let Some(edges) = &cx.edge_list {
                    body.push_str(edges);
                }
                let _ = std::fs::write(&path, body);
                eprintln!("counterexample written to {}", path.display());
                k += 1;
            }
        }
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_OK)
}
