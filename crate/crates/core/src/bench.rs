//! Benchmark harness: repeated sampling of genome subsets from a generated
//! pool, timing index construction and the sweep separately.

use std::io::Write;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assemble::{build_graph, maximal_closed_sets, prune_dominated_vertices, AssembleOptions};
use crate::enumerate::{EnumOptions, Enumerator};
use crate::error::{Error, Result};
use crate::filter::RidgeTables;
use crate::index::PairIndex;
use crate::model::{Dataset, SearchParams};
use crate::pipeline::with_threads;
use crate::planted::{generate_planted, PlantedSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPoint {
    pub m: usize,
    pub delta: usize,
    pub quorum: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub points: Vec<GridPoint>,
    /// generator of the genome pool; `profile.m` is the pool size
    pub profile: PlantedSpec,
    pub reps: usize,
    pub min_size: usize,
    /// also assemble sets (timed separately)
    pub sets: bool,
    /// worker threads; `None` times on a single thread
    pub threads: Option<usize>,
    pub seed: u64,
}

/// Genome profile loosely shaped like gene-order data: many short
/// conserved blocks with occasional indels, contig breaks, and frequent
/// spurious similarity between unrelated genes.
pub fn bacterial_like(pool: usize, n: usize, seed: u64) -> PlantedSpec {
    PlantedSpec {
        m: pool,
        n,
        alphabet: (n / 4).max(8),
        block_count: (n / 40).max(1),
        block_length: 16,
        planted_delta: 1,
        background_sharing: 0.3,
        contigs: 2,
        shuffle_blocks: true,
        seed,
    }
}

/// Median, minimum and maximum of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "empty sample");
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 };
        Self {
            median,
            min: v[0],
            max: v[n - 1],
        }
    }
}

/// Measurements of one repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSample {
    pub genomes: Vec<usize>,
    pub index_secs: f64,
    pub sweep_secs: f64,
    pub sets_secs: Option<f64>,
    pub pairs: usize,
    pub sets: Option<usize>,
    pub width_max: usize,
    pub width_mean: f64,
    /// ordered pairs whose width exceeds `(delta + 1) * ||S_y||`
    pub bound_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub point: GridPoint,
    pub index_secs: Spread,
    pub sweep_secs: Spread,
    pub sets_secs: Option<Spread>,
    pub pairs: Spread,
    pub sets: Option<Spread>,
    pub width_max: usize,
    pub width_mean: f64,
    pub bound_violations: usize,
    pub samples: Vec<RunSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub spec: BenchSpec,
    pub rows: Vec<BenchRow>,
}

pub const BENCH_COLUMNS: &str = "#m\tdelta\tquorum\tn\treps\tindex_med\tindex_min\tindex_max\tsweep_med\tsweep_min\tsweep_max\tpairs_med\tsets_med\tsets_time_med\twidth_max\twidth_mean\twidth_bound_violations";

impl BenchReport {
    pub fn row(&self, p: GridPoint) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.point == p)
    }

    /// Tab separated table, one line per grid point, times in seconds.
    pub fn write_tsv(&self, mut out: impl Write) -> Result<usize> {
        let mut buf = String::from("#awci-bench v1\n");
        buf.push_str(BENCH_COLUMNS);
        buf.push('\n');
        let opt = |s: Option<Spread>| s.map_or("-".to_string(), |s| format!("{}", s.median));
        for r in &self.rows {
            buf.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}\t{:.2}\t{}\n",
                r.point.m,
                r.point.delta,
                r.point.quorum,
                self.spec.profile.n,
                self.spec.reps,
                r.index_secs.median,
                r.index_secs.min,
                r.index_secs.max,
                r.sweep_secs.median,
                r.sweep_secs.min,
                r.sweep_secs.max,
                r.pairs.median,
                opt(r.sets),
                r.sets_secs.map_or("-".to_string(), |s| format!("{:.6}", s.median)),
                r.width_max,
                r.width_mean,
                r.bound_violations,
            ));
        }
        out.write_all(buf.as_bytes())?;
        Ok(buf.len())
    }
}

/// Largest and mean `Ridge^t` width, and the number of ordered pairs over
/// the structural bound `(delta + 1) * ||S_y||`.
pub fn width_profile(ds: &Dataset, tables: &RidgeTables) -> (usize, f64, usize) {
    let widths = tables.widths();
    let delta = tables.delta();
    let max = widths.iter().map(|w| w.2).max().unwrap_or(0);
    let mean = if widths.is_empty() {
        0.0
    } else {
        widths.iter().map(|w| w.2 as f64).sum::<f64>() / widths.len() as f64
    };
    let over = widths
        .iter()
        .filter(|&&(_, y, w)| w > (delta + 1) * ds.string(y).cardinality())
        .count();
    (max, mean, over)
}

fn measure(ds: &Dataset, params: SearchParams, sets: bool) -> Result<RunSample> {
    let t = Instant::now();
    let index = PairIndex::build(ds);
    let tables = RidgeTables::build(ds, &index, params.delta);
    let index_secs = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let e = Enumerator::new(ds, &index, Some(&tables), params, EnumOptions::default());
    let pairs = e.enumerate_pairs()?;
    let sweep_secs = t.elapsed().as_secs_f64();

    let (sets_secs, set_count) = if sets {
        let t = Instant::now();
        let g = prune_dominated_vertices(build_graph(&pairs, &params), ds, &params);
        let a = maximal_closed_sets(&g, ds, &params, &AssembleOptions::default())?;
        (Some(t.elapsed().as_secs_f64()), Some(a.sets.len()))
    } else {
        (None, None)
    };
    let (width_max, width_mean, bound_violations) = width_profile(ds, &tables);
    Ok(RunSample {
        genomes: Vec::new(),
        index_secs,
        sweep_secs,
        sets_secs,
        pairs: pairs.len(),
        sets: set_count,
        width_max,
        width_mean,
        bound_violations,
    })
}

/// Runs every grid point `spec.reps` times on random genome subsets of the
/// pool. Subsets depend only on the seed, the point and the repetition.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport> {
    if spec.points.is_empty() {
        return Err(Error::Validation("empty benchmark grid".into()));
    }
    if spec.reps == 0 {
        return Err(Error::Validation("need at least one repetition".into()));
    }
    let pool = generate_planted(&spec.profile)?.dataset;
    for p in &spec.points {
        if p.m > pool.len() || p.m < 2 {
            return Err(Error::Validation(format!(
                "cannot sample {} genomes from a pool of {}",
                p.m,
                pool.len()
            )));
        }
        SearchParams::new(p.delta, p.quorum, spec.min_size)?;
    }
    let threads = Some(spec.threads.unwrap_or(1));
    let mut rows = Vec::with_capacity(spec.points.len());
    for (k, p) in spec.points.iter().enumerate() {
        let params = SearchParams::new(p.delta, p.quorum, spec.min_size)?;
        let mut samples = Vec::with_capacity(spec.reps);
        for rep in 0..spec.reps {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ ((k as u64) << 32) ^ rep as u64);
            let mut genomes = sample(&mut rng, pool.len(), p.m).into_vec();
            genomes.sort_unstable();
            let ds = pool.select(&genomes)?;
            let mut s = with_threads(threads, || measure(&ds, params, spec.sets))??;
            s.genomes = genomes;
            samples.push(s);
        }
        let col = |f: &dyn Fn(&RunSample) -> f64| -> Vec<f64> { samples.iter().map(f).collect() };
        rows.push(BenchRow {
            point: *p,
            index_secs: Spread::of(&col(&|s| s.index_secs)),
            sweep_secs: Spread::of(&col(&|s| s.sweep_secs)),
            sets_secs: spec.sets.then(|| Spread::of(&col(&|s| s.sets_secs.unwrap_or(0.0)))),
            pairs: Spread::of(&col(&|s| s.pairs as f64)),
            sets: spec.sets.then(|| Spread::of(&col(&|s| s.sets.unwrap_or(0) as f64))),
            width_max: samples.iter().map(|s| s.width_max).max().unwrap_or(0),
            width_mean: samples.iter().map(|s| s.width_mean).sum::<f64>() / samples.len() as f64,
            bound_violations: samples.iter().map(|s| s.bound_violations).sum(),
            samples,
        });
    }
    Ok(BenchReport {
        spec: spec.clone(),
        rows,
    })
}
