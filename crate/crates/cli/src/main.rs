mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use report::{digest, read_matrix, Format, RunReport};
use uom_core::catalog::{census_8x5, entry};
use uom_core::equivalence::{are_equivalent_with, EquivalenceOptions, Route};
use uom_core::format::Block;
use uom_core::{
    apply_swap, canonical_form, check_sequences, enumerate_uoms, find_extension, find_swap_sites, is_uom,
    known_uoms, min_size, partner, EnumerationOptions, Existence, FeatureCandidate, Status, Uom,
};

const AFFIRMATIVE: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "uom", version, about = "Unextendible orthogonal matrices: verify, compare, enumerate, mutate")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Stop enumeration after this many search nodes.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    /// Stop enumeration after this many seconds.
    #[arg(long, global = true)]
    max_seconds: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Use the brute-force checks instead of the fast paths.
    #[arg(long, global = true)]
    oracle: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Is the matrix in PATH a UOM?
    Verify { path: PathBuf },
    /// Print the canonical representative of a matrix.
    Canon { path: PathBuf },
    /// Are two matrices equivalent?
    Equiv { a: PathBuf, b: PathBuf },
    /// All UOM classes of size M x N.
    Enumerate { m: usize, n: usize },
    /// Swap sites of a UOM and the matrices they produce.
    Mutate { path: PathBuf },
    /// Queries on the embedded tables and matrices.
    Catalog {
        #[command(subcommand)]
        query: Query,
    },
}

#[derive(Subcommand, Debug)]
enum Query {
    /// Tabulated status of M-row UOMs on N qubits.
    Existence { m: usize, n: usize },
    /// Smallest size of an N-qubit UOM.
    Minsize { n: usize },
    /// Embedded matrices of size M x N.
    Dump { m: usize, n: usize },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { AFFIRMATIVE };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("uom: {e}");
            return ExitCode::from(USAGE);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok((mut report, code)) => {
            report.wall_seconds = start.elapsed().as_secs_f64();
            print!("{}", report.render(cli.format));
            if cli.format == Format::Text {
                eprintln!("uom: {:.3}s", report.wall_seconds);
            }
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("uom: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn args_digest(cli: &Cli, files: &[&[u8]]) -> String {
    let line = format!("{:?} oracle={}", cli.command, cli.oracle);
    let mut parts: Vec<&[u8]> = vec![line.as_bytes()];
    parts.extend_from_slice(files);
    digest(&parts)
}

fn equivalence_options(cli: &Cli) -> EquivalenceOptions {
    EquivalenceOptions {
        force_oracle: cli.oracle,
        ..Default::default()
    }
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::ShapeMismatch => "shape",
        Route::FeatureFilter => "column features",
        Route::CandidateLists => "candidate lists",
        Route::CanonicalForm => "canonical form",
    }
}

fn block(header: Vec<String>, matrix: Uom) -> Block {
    Block { header, matrix }
}

fn run(cli: &Cli) -> Result<(RunReport, u8), String> {
    match &cli.command {
        Command::Verify { path } => verify(cli, path),
        Command::Canon { path } => {
            let input = read_matrix(path)?;
            let mut r = RunReport::new("canon", args_digest(cli, &[&input.bytes]));
            let (m, n) = input.matrix.shape();
            let c = canonical_form(&input.matrix);
            r.blocks.push(block(vec![format!("{m}x{n} canonical form")], c));
            Ok((r, AFFIRMATIVE))
        }
        Command::Equiv { a, b } => {
            let (ia, ib) = (read_matrix(a)?, read_matrix(b)?);
            let mut r = RunReport::new("equiv", args_digest(cli, &[&ia.bytes, &ib.bytes]));
            let v = are_equivalent_with(&ia.matrix, &ib.matrix, equivalence_options(cli));
            r.verdict("equivalent", yes(v.equivalent));
            r.verdict("decided by", route_name(v.route));
            if let Some(w) = v.witness {
                r.blocks.push(block(vec!["common matrix".into()], w));
            }
            Ok((r, if v.equivalent { AFFIRMATIVE } else { NEGATIVE }))
        }
        Command::Enumerate { m, n } => enumerate(cli, *m, *n),
        Command::Mutate { path } => mutate(cli, path),
        Command::Catalog { query } => catalog(cli, query),
    }
}

fn verify(cli: &Cli, path: &std::path::Path) -> Result<(RunReport, u8), String> {
    let input = read_matrix(path)?;
    let u = &input.matrix;
    let mut r = RunReport::new("verify", args_digest(cli, &[&input.bytes]));
    let (m, n) = u.shape();
    r.verdict("size", format!("{m}x{n}"));
    r.verdict("input", input.path.display());
    let orthogonal = u.is_pairwise_orthogonal();
    r.verdict("orthogonal", yes(orthogonal));
    let below_full = n >= 64 || (m as u128) < (1u128 << n);
    let witness = find_extension(u);
    let uom = if cli.oracle {
        orthogonal && below_full && witness.is_none()
    } else {
        is_uom(u)
    };
    r.verdict("UOM", yes(uom));
    if orthogonal && !below_full {
        r.verdict("note", "a complete basis; nothing is missing");
    }
    if let Some(w) = witness.filter(|_| orthogonal) {
        let row: Vec<String> = w
            .choices
            .iter()
            .map(|c| c.map_or("*".to_string(), |v| partner(v).to_string()))
            .collect();
        r.verdict("extension", row.join(" "));
    } else if orthogonal && !cli.oracle {
        r.verdict("sequence criterion", yes(check_sequences(u)));
    }
    Ok((r, if uom { AFFIRMATIVE } else { NEGATIVE }))
}

fn enumerate(cli: &Cli, m: usize, n: usize) -> Result<(RunReport, u8), String> {
    let opts = EnumerationOptions {
        max_nodes: cli.max_nodes,
        max_time: match cli.max_seconds {
            Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => return Err(format!("--max-seconds {s} is not a duration")),
            None => None,
        },
        use_filter: !cli.oracle,
        prune_extendible: !cli.oracle,
    };
    let rep = enumerate_uoms(m, n, &opts).map_err(|e| e.to_string())?;
    let line = format!("m={m} n={n} max_nodes={:?} max_seconds={:?}", cli.max_nodes, cli.max_seconds);
    let mut r = RunReport::new("enumerate", args_digest(cli, &[line.as_bytes()]));
    r.count("classes", rep.classes.len())
        .count("candidates", rep.stats.candidates as usize)
        .count("passed filter", rep.stats.passed_filter as usize)
        .count("search nodes", rep.stats.nodes as usize)
        .count("assembled", rep.stats.assembled as usize)
        .count("unextendible", rep.stats.verified as usize);
    for (i, u) in rep.classes.iter().enumerate() {
        let header = format!("{m}x{n} class {} features {}", i + 1, FeatureCandidate::of_matrix(u));
        r.blocks.push(block(vec![header], u.clone()));
    }
    let code = match &rep.status {
        Status::Complete => {
            if rep.classes.is_empty() {
                NEGATIVE
            } else {
                AFFIRMATIVE
            }
        }
        Status::Inconclusive { reason } => {
            r.limit_status = format!("inconclusive: {reason}");
            INCONCLUSIVE
        }
    };
    Ok((r, code))
}

fn mutate(cli: &Cli, path: &std::path::Path) -> Result<(RunReport, u8), String> {
    let input = read_matrix(path)?;
    let u = &input.matrix;
    let mut r = RunReport::new("mutate", args_digest(cli, &[&input.bytes]));
    let valid = is_uom(u);
    r.verdict("input UOM", yes(valid));
    if !valid {
        return Ok((r, NEGATIVE));
    }
    let sites = find_swap_sites(u);
    let mut fresh = 0;
    for s in &sites {
        let v = apply_swap(u, s).map_err(|e| e.to_string())?;
        let eq = are_equivalent_with(u, &v, equivalence_options(cli)).equivalent;
        fresh += usize::from(!eq);
        let header = vec![
            format!("swap {s}"),
            format!("UOM: {}; equivalent to input: {}", yes(is_uom(&v)), yes(eq)),
        ];
        r.blocks.push(block(header, v));
    }
    r.count("sites", sites.len()).count("new classes", fresh);
    Ok((r, if sites.is_empty() { NEGATIVE } else { AFFIRMATIVE }))
}

fn catalog(cli: &Cli, query: &Query) -> Result<(RunReport, u8), String> {
    let d = args_digest(cli, &[]);
    let mut r = RunReport::new("catalog", d);
    let code = match *query {
        Query::Existence { m, n } => {
            let e = entry(m, n);
            r.verdict("size", format!("{m}x{n}"))
                .verdict("existence", e.status)
                .verdict("source", &e.source)
                .count("embedded", e.representatives.len());
            if e.status == Existence::Exists {
                AFFIRMATIVE
            } else {
                NEGATIVE
            }
        }
        Query::Minsize { n } => {
            let f = min_size(n).map_err(|e| e.to_string())?;
            r.verdict("qubits", n).count("minimum size", f);
            AFFIRMATIVE
        }
        Query::Dump { m, n } => {
            let blocks: Vec<Block> = if (m, n) == (8, 5) {
                census_8x5().to_vec()
            } else {
                known_uoms(m, n)
                    .into_iter()
                    .map(|u| block(vec![format!("{m}x{n} uom")], u))
                    .collect()
            };
            r.count("matrices", blocks.len());
            let code = if blocks.is_empty() { NEGATIVE } else { AFFIRMATIVE };
            r.blocks = blocks;
            code
        }
    };
    Ok((r, code))
}
