//! End-to-end runs: index, enumeration, graph, sets.

use std::path::Path;

use crate::assemble::{build_graph, maximal_closed_sets, prune_dominated_vertices, AssembleOptions, Assembly};
use crate::enumerate::{AwciPair, EnumOptions, EnumStats, Enumerator, PairGroup};
use crate::error::{Error, Result};
use crate::filter::RidgeTables;
use crate::index::{load_or_build, PairIndex};
use crate::model::{Dataset, SearchParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub filter: bool,
    pub prune: bool,
    pub quorum_grouping: bool,
    /// worker threads; `None` uses the global pool
    pub threads: Option<usize>,
    pub assemble: AssembleOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            filter: true,
            prune: true,
            quorum_grouping: true,
            threads: None,
            assemble: AssembleOptions::default(),
        }
    }
}

/// Runs `f` on a pool with the requested number of workers.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Validation("thread count must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Resource(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Prebuilt tables for repeated runs over one dataset.
pub struct Prepared<'a> {
    pub ds: &'a Dataset,
    pub index: PairIndex,
    pub tables: Option<RidgeTables>,
}

impl<'a> Prepared<'a> {
    /// Builds the pair index, and the filter tables at `delta` if `filter`.
    pub fn new(ds: &'a Dataset, delta: usize, filter: bool) -> Self {
        Self::with_index(ds, PairIndex::build(ds), delta, filter)
    }

    /// Like [`Prepared::new`], reading and refreshing an index cache file.
    pub fn with_cache(ds: &'a Dataset, cache: &Path, delta: usize, filter: bool) -> Result<Self> {
        Ok(Self::with_index(ds, load_or_build(cache, ds)?, delta, filter))
    }

    pub fn with_index(ds: &'a Dataset, index: PairIndex, delta: usize, filter: bool) -> Self {
        let tables = filter.then(|| RidgeTables::build(ds, &index, delta));
        Self { ds, index, tables }
    }

    pub fn enumerator(&self, params: SearchParams, opts: &RunOptions) -> Result<Enumerator<'_>> {
        let params = params.validated()?;
        if let Some(t) = &self.tables {
            if t.delta() != params.delta {
                return Err(Error::Contract(format!(
                    "filter tables built for delta {} used with delta {}",
                    t.delta(),
                    params.delta
                )));
            }
        }
        Ok(Enumerator::new(
            self.ds,
            &self.index,
            self.tables.as_ref(),
            params,
            EnumOptions {
                filter: opts.filter && self.tables.is_some(),
                quorum_grouping: opts.quorum_grouping,
                ..EnumOptions::default()
            },
        ))
    }

    /// Streams pair groups in output order.
    pub fn stream_pairs(
        &self,
        params: &SearchParams,
        opts: &RunOptions,
        sink: impl FnMut(PairGroup),
    ) -> Result<EnumStats> {
        self.enumerator(*params, opts)?.for_each_group(sink)
    }

    pub fn pairs(&self, params: &SearchParams, opts: &RunOptions) -> Result<Vec<AwciPair>> {
        self.enumerator(*params, opts)?.enumerate_pairs()
    }

    /// Maximal closed sets; quorum grouping is always on here.
    pub fn sets(&self, params: &SearchParams, opts: &RunOptions) -> Result<Assembly> {
        let params = params.validated()?;
        if params.quorum > self.ds.len() {
            return Ok(Assembly::default());
        }
        let opts = RunOptions {
            quorum_grouping: true,
            ..*opts
        };
        let pairs = self.pairs(&params, &opts)?;
        let mut graph = build_graph(&pairs, &params);
        drop(pairs);
        if opts.prune {
            graph = prune_dominated_vertices(graph, self.ds, &params);
        }
        maximal_closed_sets(&graph, self.ds, &params, &opts.assemble)
    }
}

/// All reported pairs in `(x, i, j, y, k, l)` order.
pub fn find_pairs(ds: &Dataset, params: &SearchParams, opts: &RunOptions) -> Result<Vec<AwciPair>> {
    with_threads(opts.threads, || Prepared::new(ds, params.delta, opts.filter).pairs(params, opts))?
}

/// Maximal closed sets spanning at least `params.quorum` strings.
pub fn find_sets(ds: &Dataset, params: &SearchParams, opts: &RunOptions) -> Result<Assembly> {
    with_threads(opts.threads, || Prepared::new(ds, params.delta, opts.filter).sets(params, opts))?
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Interval;

    #[test]
    fn three_genomes_closed_set() {
        let ds = fixtures::three_genomes();
        let params = SearchParams::new(1, 3, 6).unwrap();
        let a = find_sets(&ds, &params, &RunOptions::default()).unwrap();
        let want = vec![Interval::new(0, 1, 8), Interval::new(1, 2, 7), Interval::new(2, 1, 8)];
        let s = a.sets.iter().find(|s| s.members == want).expect("block reported");
        assert!(s.closed);
    }

    #[test]
    fn thread_counts_agree() {
        let ds = fixtures::three_genomes();
        let params = SearchParams::new(2, 2, 1).unwrap();
        let one = find_pairs(&ds, &params, &RunOptions { threads: Some(1), ..RunOptions::default() }).unwrap();
        let three = find_pairs(&ds, &params, &RunOptions { threads: Some(3), ..RunOptions::default() }).unwrap();
        assert_eq!(one, three);
        assert!(with_threads(Some(0), || ()).is_err());
    }
}
