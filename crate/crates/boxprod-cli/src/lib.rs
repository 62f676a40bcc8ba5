//! Command-line front end: Cartesian products of graphs with loops, prime
//! factorization, verification, instance generation and scaling benchmarks
//! over the LGR file format.

pub mod lgr;

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use boxprod::{
    cartesian_product, factor_loops_from_base, factor_loops_linear, factor_loops_subset_scan,
    factor_simple, random_instance, verify_factorization, with_random_loops, Coordinatization,
    Factorization, Graph, InstanceSpec,
};
use lgr::{parse_lgr, serialize_lgr, LgrError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

#[derive(Parser)]
#[command(
    name = "boxprod",
    version,
    about = "Cartesian products of graphs with loops and their prime factorization"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Cartesian product of the given graphs.
    Product {
        /// Input LGR files; '-' reads standard input.
        #[arg(required = true)]
        files: Vec<String>,
        /// Write the product here instead of standard output.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Compute the prime factorization of a graph.
    Factor {
        /// Input LGR file; '-' reads standard input.
        file: String,
        /// Algorithm to run.
        #[arg(long, value_enum, default_value_t = Algorithm::Linear)]
        algorithm: Algorithm,
        /// Emit JSON instead of LGR blocks.
        #[arg(long)]
        json: bool,
        /// Write `<base>.factor<i>.lgr` and `<base>.coords.tsv` instead of
        /// printing to standard output.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Remove all loops and print the skeleton.
    Strip {
        /// Input LGR file; '-' reads standard input.
        file: String,
    },
    /// Check a factorization: graph, factor files, then a coordinate table.
    Verify {
        /// Graph LGR file.
        graph: String,
        /// One or more factor LGR files followed by the coords TSV file.
        #[arg(required = true, num_args = 2..)]
        rest: Vec<String>,
    },
    /// Generate a random product instance with known ground truth.
    Gen {
        /// Number of generator factors.
        #[arg(long)]
        factors: usize,
        /// Smallest factor size.
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        /// Largest factor size.
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        /// Per-vertex loop probability.
        #[arg(long, default_value_t = 0.3)]
        loop_prob: f64,
        /// RNG seed; the instance is a pure function of the flags.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write `<base>.lgr`, `<base>.factor<i>.lgr`, `<base>.coords.tsv`.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Time the factorization pipeline across instance sizes.
    Bench {
        /// Benchmark family.
        #[arg(long, default_value = "hypercube-loops")]
        family: String,
        /// Smallest hypercube dimension.
        #[arg(long)]
        from: u32,
        /// Largest hypercube dimension.
        #[arg(long)]
        to: u32,
        /// Emit CSV (n, m, stage, milliseconds).
        #[arg(long)]
        csv: bool,
        /// Per-vertex loop probability.
        #[arg(long, default_value_t = 0.3)]
        loop_prob: f64,
        /// RNG seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// BFS merge scan.
    Linear,
    /// Subset scan over the base factors.
    Subset,
    /// Brute-force ground truth (small graphs only).
    Oracle,
}

enum CliError {
    /// Unreadable or unparsable input.
    Input(String),
    /// The operation rejected the graph.
    Domain(boxprod::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_PARSE,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Input(m) => m.clone(),
            CliError::Domain(e) => e.to_string(),
        }
    }
}

impl From<boxprod::Error> for CliError {
    fn from(e: boxprod::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<LgrError> for CliError {
    fn from(e: LgrError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Product { files, output } => cmd_product(&files, output.as_deref()),
        Command::Factor {
            file,
            algorithm,
            json,
            output,
        } => cmd_factor(&file, algorithm, json, output.as_deref()),
        Command::Strip { file } => cmd_strip(&file),
        Command::Verify { graph, rest } => cmd_verify(&graph, &rest),
        Command::Gen {
            factors,
            min_size,
            max_size,
            loop_prob,
            seed,
            output,
        } => cmd_gen(factors, min_size, max_size, loop_prob, seed, output.as_deref()),
        Command::Bench {
            family,
            from,
            to,
            csv,
            loop_prob,
            seed,
        } => cmd_bench(&family, from, to, csv, loop_prob, seed),
    }
}

fn read_graph(path: &str) -> Result<Graph, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
        buf
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
    };
    Ok(parse_lgr(&text)?)
}

fn write_text(path: &str, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {path}: {e}")))
}

fn cmd_product(files: &[String], output: Option<&str>) -> Result<i32, CliError> {
    let graphs = files.iter().map(|f| read_graph(f)).collect::<Result<Vec<_>, _>>()?;
    let (product, _) = cartesian_product(&graphs)?;
    let text = serialize_lgr(&product);
    match output {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn cmd_strip(file: &str) -> Result<i32, CliError> {
    let g = read_graph(file)?;
    print!("{}", serialize_lgr(&g.strip_loops()));
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    loops: Vec<usize>,
}

impl JsonGraph {
    fn of(g: &Graph) -> JsonGraph {
        JsonGraph {
            n: g.vertex_count(),
            edges: g.two_edges(),
            loops: g.loop_vertices(),
        }
    }
}

#[derive(Serialize)]
struct JsonFactorization {
    algorithm: String,
    prime_count: usize,
    primes: Vec<JsonGraph>,
    coordinates: Vec<Vec<usize>>,
}

fn coords_tsv(f: &Factorization, n: usize) -> String {
    let mut out = String::new();
    for v in 0..n {
        write!(out, "{v}").unwrap();
        for &c in f.coord.coords(v) {
            write!(out, "\t{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn factor_blocks(f: &Factorization, n: usize) -> String {
    let mut out = String::new();
    let k = f.primes.len();
    for (i, prime) in f.primes.iter().enumerate() {
        writeln!(out, "# prime {}/{}", i + 1, k).unwrap();
        out.push_str(&serialize_lgr(prime));
    }
    out.push_str("# coordinates\n");
    out.push_str(&coords_tsv(f, n));
    out
}

fn write_factor_files(base: &str, f: &Factorization, n: usize) -> Result<(), CliError> {
    for (i, prime) in f.primes.iter().enumerate() {
        write_text(&format!("{base}.factor{}.lgr", i + 1), &serialize_lgr(prime))?;
    }
    write_text(&format!("{base}.coords.tsv"), &coords_tsv(f, n))?;
    Ok(())
}

fn cmd_factor(
    file: &str,
    algorithm: Algorithm,
    json: bool,
    output: Option<&str>,
) -> Result<i32, CliError> {
    let g = read_graph(file)?;
    let f = match algorithm {
        Algorithm::Linear => factor_loops_linear(&g)?,
        Algorithm::Subset => factor_loops_subset_scan(&g)?,
        Algorithm::Oracle => boxprod::brute_force_factor(&g)?,
    };
    debug_assert!(verify_factorization(&g, &f));
    if json {
        let doc = JsonFactorization {
            algorithm: match algorithm {
                Algorithm::Linear => "linear",
                Algorithm::Subset => "subset",
                Algorithm::Oracle => "oracle",
            }
            .to_string(),
            prime_count: f.primes.len(),
            primes: f.primes.iter().map(JsonGraph::of).collect(),
            coordinates: (0..g.vertex_count())
                .map(|v| f.coord.coords(v).to_vec())
                .collect(),
        };
        let text = serde_json::to_string_pretty(&doc).expect("serializable");
        match output {
            Some(base) => write_text(&format!("{base}.json"), &text)?,
            None => println!("{text}"),
        }
    } else {
        match output {
            Some(base) => write_factor_files(base, &f, g.vertex_count())?,
            None => print!("{}", factor_blocks(&f, g.vertex_count())),
        }
    }
    Ok(EXIT_OK)
}

fn parse_coords_tsv(path: &str, n: usize) -> Result<Option<Vec<Vec<usize>>>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
    let mut rows: Vec<Option<Vec<usize>>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace().map(|t| {
            t.parse::<usize>().map_err(|_| {
                CliError::Input(format!(
                    "SyntaxError: {path} line {}: expected an integer, found {t:?}",
                    idx + 1
                ))
            })
        });
        let Some(v) = fields.next().transpose()? else {
            continue;
        };
        let tuple = fields.collect::<Result<Vec<_>, _>>()?;
        if v >= n || rows[v].is_some() {
            return Ok(None); // not a bijection; verification fails
        }
        rows[v] = Some(tuple);
    }
    Ok(rows.into_iter().collect())
}

fn cmd_verify(graph: &str, rest: &[String]) -> Result<i32, CliError> {
    let g = read_graph(graph)?;
    let (coords_path, factor_paths) = rest.split_last().expect("clap enforces two args");
    let primes = factor_paths
        .iter()
        .map(|f| read_graph(f))
        .collect::<Result<Vec<_>, _>>()?;
    let verified = match parse_coords_tsv(coords_path, g.vertex_count())? {
        None => false,
        Some(coords) => {
            let sizes: Vec<usize> = primes.iter().map(Graph::vertex_count).collect();
            match Coordinatization::try_new(sizes, coords) {
                Err(_) => false,
                Ok(coord) => verify_factorization(&g, &Factorization { primes, coord }),
            }
        }
    };
    if verified {
        println!("OK");
        Ok(EXIT_OK)
    } else {
        println!("MISMATCH");
        Ok(EXIT_VERIFY_FAILED)
    }
}

fn cmd_gen(
    factors: usize,
    min_size: usize,
    max_size: usize,
    loop_prob: f64,
    seed: u64,
    output: Option<&str>,
) -> Result<i32, CliError> {
    if factors == 0 || min_size == 0 || min_size > max_size || !(0.0..=1.0).contains(&loop_prob) {
        eprintln!("error: invalid instance parameters");
        return Ok(EXIT_USAGE);
    }
    let spec = InstanceSpec {
        factor_count: factors,
        min_size,
        max_size,
        loop_probability: loop_prob,
        seed,
    };
    let (product, generators, coord) = random_instance(&spec);
    let truth = Factorization {
        primes: generators,
        coord,
    };
    match output {
        Some(base) => {
            write_text(&format!("{base}.lgr"), &serialize_lgr(&product))?;
            write_factor_files(base, &truth, product.vertex_count())?;
        }
        None => {
            print!("{}", serialize_lgr(&product));
            print!("{}", factor_blocks(&truth, product.vertex_count()));
        }
    }
    Ok(EXIT_OK)
}

/// Runs `f` often enough for a stable per-iteration time, in milliseconds.
fn time_adaptive(mut f: impl FnMut()) -> f64 {
    let start = Instant::now();
    f();
    let once = start.elapsed().as_secs_f64();
    let reps = (0.15 / once.max(1e-9)).ceil().clamp(1.0, 4000.0) as usize;
    if reps <= 1 {
        return once * 1e3;
    }
    let start = Instant::now();
    for _ in 0..reps {
        f();
    }
    start.elapsed().as_secs_f64() * 1e3 / reps as f64
}

fn cmd_bench(
    family: &str,
    from: u32,
    to: u32,
    csv: bool,
    loop_prob: f64,
    seed: u64,
) -> Result<i32, CliError> {
    if family != "hypercube-loops" {
        eprintln!("error: unknown family {family:?} (supported: hypercube-loops)");
        return Ok(EXIT_USAGE);
    }
    if from > to || !(0.0..=1.0).contains(&loop_prob) {
        eprintln!("error: invalid benchmark parameters");
        return Ok(EXIT_USAGE);
    }
    if csv {
        println!("n,m,stage,milliseconds");
    } else {
        println!("{:>10} {:>10} {:>12} {:>14}", "n", "m", "stage", "milliseconds");
    }
    for d in from..=to {
        let skeleton = Graph::hypercube(d);
        let g = with_random_loops(&skeleton, loop_prob, seed.wrapping_add(d as u64));
        let n = g.vertex_count();
        let m = g.two_edge_count();

        let pipeline_ms = time_adaptive(|| {
            std::hint::black_box(factor_loops_linear(&g).expect("valid instance"));
        });
        let base = factor_simple(&g.strip_loops())?;
        let loop_ms = time_adaptive(|| {
            std::hint::black_box(factor_loops_from_base(&g, &base).expect("valid instance"));
        });

        for (stage, ms) in [("pipeline", pipeline_ms), ("loop-merge", loop_ms)] {
            if csv {
                println!("{n},{m},{stage},{ms:.4}");
            } else {
                println!("{n:>10} {m:>10} {stage:>12} {ms:>14.4}");
            }
        }
    }
    Ok(EXIT_OK)
}
