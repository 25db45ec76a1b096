use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use awci::assemble::AssembleOptions;
use awci::bench::{bacterial_like, run_bench, BenchSpec, GridPoint};
use awci::io::{self as aio, HomologyTable, SetRecord};
use awci::pipeline::{with_threads, Prepared, RunOptions};
use awci::planted::{generate_planted, PlantedSpec};
use awci::{AwciPair, Dataset, Error, SearchParams};

#[derive(Parser)]
#[command(name = "awci", version, about = "Approximate weak common intervals of indeterminate strings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a homology table and gene orders into an IST dataset
    Ingest(IngestArgs),
    /// Enumerate interval pairs
    Pairs(PairsArgs),
    /// Enumerate maximal closed sets
    Sets(SetsArgs),
    /// Generate a dataset with planted blocks
    Gen(GenArgs),
    /// Run the benchmark grid
    Bench(BenchArgs),
    /// Compare against the brute-force oracle on random instances
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct SearchArgs {
    /// IST input file
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    delta: usize,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    quorum: u64,
    #[arg(long, default_value_t = 1)]
    min_size: usize,
    /// worker threads (default: all cores)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// disable the bit-vector filter and right-bound refinement
    #[arg(long)]
    no_filter: bool,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    refine_iters: u64,
    /// accepted for uniformity; the search is deterministic
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    /// binary cache of the pair index, rebuilt when the dataset changes
    #[arg(long)]
    index_cache: Option<PathBuf>,
}

#[derive(Args)]
struct PairsArgs {
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct SetsArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// keep dominated vertices
    #[arg(long)]
    no_prune: bool,
    /// sub-cliques of open maximal cliques are searched up to this many missing members
    #[arg(long, default_value_t = 2)]
    descent_budget: usize,
    /// per-component step limit of the set search
    #[arg(long, default_value_t = 50_000_000)]
    step_limit: u64,
}

#[derive(Args)]
struct IngestArgs {
    /// tab separated genomeA geneA genomeB geneB score
    #[arg(long)]
    homology: PathBuf,
    /// gene order files, one per genome, named by genome
    #[arg(long, num_args = 1.., required = true)]
    genes: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// where to write the planted sets
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    genomes: usize,
    #[arg(long, default_value_t = 200)]
    length: usize,
    #[arg(long, default_value_t = 64)]
    alphabet: usize,
    #[arg(long, default_value_t = 3)]
    blocks: usize,
    #[arg(long, default_value_t = 8)]
    block_length: usize,
    #[arg(long, default_value_t = 0)]
    planted_delta: usize,
    #[arg(long, default_value_t = 0.05)]
    sharing: f64,
    #[arg(long, default_value_t = 1)]
    contigs: usize,
    /// keep blocks in the same order in every genome
    #[arg(long)]
    no_shuffle: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// genome counts
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0,2")]
    delta: Vec<usize>,
    /// quorum values; `m` stands for the genome count of the point
    #[arg(long, value_delimiter = ',', default_value = "m")]
    quorum: Vec<String>,
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// genomes in the sampled pool (default: twice the largest m)
    #[arg(long)]
    pool: Option<usize>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 10)]
    min_size: usize,
    /// also assemble sets
    #[arg(long)]
    sets: bool,
    /// worker threads; timing defaults to one
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    /// first seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(Error::Io(e))
    }
}

type Outcome = Result<(), Failure>;

fn sink(path: Option<&Path>) -> Result<BufWriter<Box<dyn Write + Send>>, Failure> {
    let w: Box<dyn Write + Send> = match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout()),
    };
    Ok(BufWriter::new(w))
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::Run(Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))))
}

fn read_ist(path: &Path) -> Result<Dataset, Failure> {
    Ok(aio::parse_ist(open(path)?)?)
}

fn params_of(a: &SearchArgs, m: usize) -> Result<SearchParams, Failure> {
    let params = SearchParams::new(a.delta, a.quorum as usize, a.min_size)?.with_refine_iters(a.refine_iters as usize)?;
    if params.quorum > m {
        return Err(Failure::Usage(format!(
            "quorum {} exceeds the number of strings ({m})",
            params.quorum
        )));
    }
    Ok(params)
}

fn threads(t: Option<u64>) -> Option<usize> {
    t.map(|t| t as usize)
}

fn prepare<'a>(ds: &'a Dataset, a: &SearchArgs, params: &SearchParams) -> Result<Prepared<'a>, Error> {
    match &a.index_cache {
        Some(p) => Prepared::with_cache(ds, p, params.delta, !a.no_filter),
        None => Ok(Prepared::new(ds, params.delta, !a.no_filter)),
    }
}

fn pair_json(ds: &Dataset, p: &AwciPair) -> serde_json::Value {
    json!({
        "stringA": ds.string(p.left.string).id(),
        "iA": p.left.start,
        "jA": p.left.end,
        "stringB": ds.string(p.right.string).id(),
        "kB": p.right.start,
        "lB": p.right.end,
        "indels": p.indel_total,
        "sizeA": p.size_left,
        "sizeB": p.size_right,
        "common": p.common.iter().map(|c| ds.alphabet().label(*c)).collect::<Vec<_>>(),
    })
}

fn cmd_pairs(a: PairsArgs) -> Outcome {
    let a = a.search;
    let ds = read_ist(&a.input)?;
    let params = params_of(&a, ds.len())?;
    let opts = RunOptions {
        filter: !a.no_filter,
        ..RunOptions::default()
    };
    let mut out = sink(a.output.as_deref())?;
    let format = a.format;
    let mut failed: Option<Error> = None;
    let stats = with_threads(threads(a.threads), || -> Result<_, Error> {
        let prep = prepare(&ds, &a, &params)?;
        if let Format::Tsv = format {
            out.write_all(format!("{}\n{}\n", aio::PAIRS_HEADER, aio::PAIRS_COLUMNS).as_bytes())?;
        }
        prep.stream_pairs(&params, &opts, |g| {
            if failed.is_some() {
                return;
            }
            for p in &g.pairs {
                let r = match format {
                    Format::Tsv => aio::write_pair_row(&ds, p, &mut out).map(|_| ()),
                    Format::Json => writeln!(out, "{}", pair_json(&ds, p)).map_err(Error::from),
                };
                if let Err(e) = r {
                    failed = Some(e);
                    return;
                }
            }
        })
    })??;
    if let Some(e) = failed {
        return Err(e.into());
    }
    out.flush()?;
    log::info!(
        "{} pairs from {} reference intervals ({} left bounds, {} filter calls)",
        stats.pairs,
        stats.groups,
        stats.left_bounds,
        stats.filter_calls
    );
    Ok(())
}

fn cmd_sets(a: SetsArgs) -> Outcome {
    let s = &a.search;
    let ds = read_ist(&s.input)?;
    let params = params_of(s, ds.len())?;
    let opts = RunOptions {
        filter: !s.no_filter,
        prune: !a.no_prune,
        assemble: AssembleOptions {
            descent_budget: a.descent_budget,
            step_limit: a.step_limit,
        },
        ..RunOptions::default()
    };
    let assembly = with_threads(threads(s.threads), || prepare(&ds, s, &params)?.sets(&params, &opts))??;
    let mut out = sink(s.output.as_deref())?;
    match s.format {
        Format::Tsv => {
            aio::write_sets(&ds, &assembly.sets, &params, &mut out)?;
        }
        Format::Json => {
            let records: Vec<SetRecord> = assembly
                .sets
                .iter()
                .map(|x| SetRecord::from_set(&ds, x, &params))
                .collect();
            let doc = json!({"format": "awci-sets", "version": 1, "sets": records});
            writeln!(out, "{doc}")?;
        }
    }
    out.flush()?;
    log::info!(
        "{} closed sets from {} maximal cliques",
        assembly.sets.len(),
        assembly.maximal_cliques
    );
    Ok(())
}

fn cmd_ingest(a: IngestArgs) -> Outcome {
    let records = aio::parse_homology_records(open(&a.homology)?)?;
    let genomes = aio::read_gene_orders(&a.genes)?;
    let ds = aio::homology_to_strings(&HomologyTable { records, genomes }, a.threshold)?;
    let mut out = sink(a.output.as_deref())?;
    aio::write_ist(&ds, &mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let spec = PlantedSpec {
        m: a.genomes,
        n: a.length,
        alphabet: a.alphabet,
        block_count: a.blocks,
        block_length: a.block_length,
        planted_delta: a.planted_delta,
        background_sharing: a.sharing,
        contigs: a.contigs,
        shuffle_blocks: !a.no_shuffle,
        seed: a.seed,
    };
    let planted = generate_planted(&spec)?;
    let mut out = sink(a.output.as_deref())?;
    aio::write_ist(&planted.dataset, &mut out)?;
    out.flush()?;
    if let Some(path) = &a.truth {
        let params = SearchParams {
            delta: spec.planted_delta,
            quorum: spec.m,
            ..SearchParams::default()
        };
        aio::write_sets(&planted.dataset, &planted.truth, &params, BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Outcome {
    let mut points = Vec::new();
    for &m in &a.m {
        for &delta in &a.delta {
            for q in &a.quorum {
                let quorum = if q == "m" {
                    m
                } else {
                    q.parse()
                        .map_err(|_| Failure::Usage(format!("bad quorum `{q}`, expected a number or `m`")))?
                };
                if quorum > m {
                    return Err(Failure::Usage(format!("quorum {quorum} exceeds genome count {m}")));
                }
                points.push(GridPoint { m, delta, quorum });
            }
        }
    }
    let max_m = a.m.iter().copied().max().unwrap_or(2);
    let spec = BenchSpec {
        points,
        profile: bacterial_like(a.pool.unwrap_or(2 * max_m), a.n, a.seed),
        reps: a.reps,
        min_size: a.min_size,
        sets: a.sets,
        threads: threads(a.threads),
        seed: a.seed,
    };
    let report = run_bench(&spec)?;
    let mut out = sink(a.output.as_deref())?;
    match a.format {
        Format::Tsv => {
            report.write_tsv(&mut out)?;
        }
        Format::Json => {
            let doc = serde_json::to_string(&report).map_err(|e| Error::Validation(e.to_string()))?;
            writeln!(out, "{doc}")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let end = a.seed.saturating_add(a.seeds);
    let report = with_threads(threads(a.threads), || awci::random::verify_seeds(a.seed..end))??;
    for m in &report.mismatches {
        eprintln!("seed {}: {}", m.seed, m.what);
    }
    println!("{}/{} oracle matches", report.matched(), report.checked);
    if report.mismatches.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(format!("{} mismatches", report.mismatches.len())).into())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let r = match cli.command {
        Command::Ingest(a) => cmd_ingest(a),
        Command::Pairs(a) => cmd_pairs(a),
        Command::Sets(a) => cmd_sets(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
