//! Assembly of enumerated pairs into maximal closed sets.
//!
//! Vertices are intervals, edges are reported pairs. Closed sets are
//! cliques, but closedness is not inherited by sub-cliques, so maximal
//! cliques that are not closed are searched for closed sub-cliques.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::AwciPair;
use crate::error::{Error, Result};
use crate::model::{intersection, intersects, CharId, Dataset, Interval, SearchParams};

/// A set of intervals, one per string, that pairwise form reported pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AwciSet {
    /// sorted by string
    pub members: Vec<Interval>,
    pub closed: bool,
    /// common character sets of member pairs `(a, b)`, `a < b`, in
    /// lexicographic pair order
    pub common_sets: Vec<Vec<CharId>>,
}

impl AwciSet {
    pub fn new(ds: &Dataset, mut members: Vec<Interval>, closed: bool) -> Self {
        members.sort();
        let sets: Vec<Vec<CharId>> = members.iter().map(|iv| ds.char_set_of(iv)).collect();
        let mut common_sets = Vec::new();
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                common_sets.push(intersection(&sets[a], &sets[b]));
            }
        }
        Self {
            members,
            closed,
            common_sets,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Undirected graph on intervals. Vertices are sorted by `(string, start,
/// end)`; adjacency lists are sorted vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AwciGraph {
    vertices: Vec<Interval>,
    adj: Vec<Vec<u32>>,
}

impl AwciGraph {
    /// Graph on the given edges, without any filtering.
    pub fn from_edges(edges: impl IntoIterator<Item = (Interval, Interval)>) -> Self {
        let edges: Vec<(Interval, Interval)> = edges.into_iter().collect();
        let mut vertices: Vec<Interval> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let id = |iv: &Interval| vertices.binary_search(iv).expect("vertex present") as u32;
        let mut adj = vec![Vec::new(); vertices.len()];
        for (a, b) in &edges {
            assert_ne!(a.string, b.string, "edge within one string");
            let (a, b) = (id(a), id(b));
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { vertices, adj }
    }

    pub fn vertices(&self) -> &[Interval] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn vertex_id(&self, iv: &Interval) -> Option<usize> {
        self.vertices.binary_search(iv).ok()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    pub fn has_edge(&self, a: &Interval, b: &Interval) -> bool {
        match (self.vertex_id(a), self.vertex_id(b)) {
            (Some(a), Some(b)) => self.adjacent(a, b),
            _ => false,
        }
    }

    /// Number of distinct strings among the neighbours of `v`.
    fn neighbour_strings(&self, v: usize) -> usize {
        let mut n = 0;
        let mut last = usize::MAX;
        // neighbours are sorted by vertex id, hence by string
        for &u in &self.adj[v] {
            let s = self.vertices[u as usize].string;
            if s != last {
                n += 1;
                last = s;
            }
        }
        n
    }

    /// Subgraph induced by the vertices with `keep[v]`.
    fn induced(&self, keep: &[bool]) -> Self {
        let mut new_id = vec![u32::MAX; self.len()];
        let mut vertices = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                new_id[v] = vertices.len() as u32;
                vertices.push(self.vertices[v]);
            }
        }
        let adj = (0..self.len())
            .filter(|&v| keep[v])
            .map(|v| {
                self.adj[v]
                    .iter()
                    .filter(|&&u| keep[u as usize])
                    .map(|&u| new_id[u as usize])
                    .collect()
            })
            .collect();
        Self { vertices, adj }
    }

    /// Repeatedly drops vertices whose neighbours span fewer than
    /// `quorum - 1` strings.
    fn drop_weak(self, quorum: usize) -> Self {
        let need = quorum.saturating_sub(1);
        let mut g = self;
        loop {
            let keep: Vec<bool> = (0..g.len())
                .map(|v| !g.adj[v].is_empty() && g.neighbour_strings(v) >= need)
                .collect();
            if keep.iter().all(|&k| k) {
                return g;
            }
            g = g.induced(&keep);
        }
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s as u32];
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head] as usize;
                head += 1;
                for &u in &self.adj[v] {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Graph of the given pairs, minus vertices that cannot be part of a set
/// spanning `params.quorum` strings.
pub fn build_graph<'p>(pairs: impl IntoIterator<Item = &'p AwciPair>, params: &SearchParams) -> AwciGraph {
    AwciGraph::from_edges(pairs.into_iter().map(|p| (p.left, p.right))).drop_weak(params.quorum)
}

fn char_sets(ds: &Dataset, g: &AwciGraph) -> Vec<Vec<CharId>> {
    g.vertices.par_iter().map(|iv| ds.char_set_of(iv)).collect()
}

/// Removes dominated vertices. `v` is dropped when some `u` on the same
/// string has `I_v` as a proper subinterval, every neighbour of `v` is a
/// neighbour of `u`, `I_u \ I_v` holds at most one position on each side
/// sharing characters with all neighbours of `v`, and one of those shared
/// positions is adjacent to `I_v`. The last condition means `v` can be
/// extended within every clique it belongs to, so it is in no closed set.
///
/// All decisions are taken on the input graph and applied together.
pub fn prune_dominated_vertices(graph: AwciGraph, ds: &Dataset, params: &SearchParams) -> AwciGraph {
    if graph.is_empty() {
        return graph;
    }
    let sets = char_sets(ds, &graph);
    let g = &graph;
    let drop: Vec<bool> = (0..g.len())
        .into_par_iter()
        .map(|v| is_dominated(ds, g, &sets, v))
        .collect();
    if !drop.iter().any(|&d| d) {
        return graph;
    }
    let keep: Vec<bool> = drop.iter().map(|&d| !d).collect();
    graph.induced(&keep).drop_weak(params.quorum)
}

fn is_dominated(ds: &Dataset, g: &AwciGraph, sets: &[Vec<CharId>], v: usize) -> bool {
    let nv = &g.adj[v];
    let Some(&pivot) = nv.iter().min_by_key(|&&w| g.adj[w as usize].len()) else {
        return false;
    };
    let iv = g.vertices[v];
    let s = ds.string(iv.string);
    let shared = |p: usize| nv.iter().all(|&w| intersects(s.at(p), &sets[w as usize]));

    for &u in &g.adj[pivot as usize] {
        let iu = g.vertices[u as usize];
        if iu.string != iv.string || !iv.is_proper_subinterval_of(&iu) {
            continue;
        }
        if !nv.iter().all(|&w| g.adjacent(u as usize, w as usize)) {
            continue;
        }
        let left = (iu.start..iv.start).filter(|&p| shared(p)).take(2).count();
        let right = (iv.end + 1..=iu.end).filter(|&p| shared(p)).take(2).count();
        if left > 1 || right > 1 {
            continue;
        }
        let touches = (iu.start < iv.start && shared(iv.start - 1)) || (iu.end > iv.end && shared(iv.end + 1));
        if touches {
            return true;
        }
    }
    false
}

/// Limits for the set search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssembleOptions {
    /// a non-closed maximal clique is searched for closed sub-cliques
    /// missing at most this many members
    pub descent_budget: usize,
    /// per-component cap on search steps before a resource error
    pub step_limit: u64,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        Self {
            descent_budget: 2,
            step_limit: 50_000_000,
        }
    }
}

/// Result of [`maximal_closed_sets`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assembly {
    pub sets: Vec<AwciSet>,
    pub maximal_cliques: usize,
    /// non-closed maximal cliques whose sub-cliques were not all explored
    pub truncated: usize,
}

struct Component<'a> {
    ds: &'a Dataset,
    g: &'a AwciGraph,
    sets: &'a [Vec<CharId>],
    quorum: usize,
    steps: u64,
    limit: u64,
    label: String,
}

impl Component<'_> {
    fn step(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limit {
            return Err(Error::Resource(format!(
                "set search in the component of {} exceeded {} steps",
                self.label, self.limit
            )));
        }
        Ok(())
    }

    fn closed(&self, members: &[u32]) -> bool {
        for &v in members {
            let iv = self.g.vertices[v as usize];
            let s = self.ds.string(iv.string);
            let (lo, hi) = s.contig_bounds(iv.start);
            let sides = [
                (iv.start > lo).then(|| iv.start - 1),
                (iv.end < hi).then(|| iv.end + 1),
            ];
            for p in sides.into_iter().flatten() {
                let extends = members
                    .iter()
                    .filter(|&&w| w != v)
                    .all(|&w| intersects(s.at(p), &self.sets[w as usize]));
                if extends {
                    return false;
                }
            }
        }
        true
    }

    /// Bron–Kerbosch with pivoting; cliques below the quorum are cut.
    fn cliques(&mut self, r: &mut Vec<u32>, p: Vec<u32>, x: Vec<u32>, out: &mut Vec<Vec<u32>>) -> Result<()> {
        self.step()?;
        if r.len() + p.len() < self.quorum {
            return Ok(());
        }
        if p.is_empty() {
            if x.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return Ok(());
        }
        let adj = &self.g.adj;
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| (count_common(&adj[u as usize], &p), std::cmp::Reverse(u)))
            .expect("p is non-empty");
        let branch: Vec<u32> = p
            .iter()
            .copied()
            .filter(|&v| adj[pivot as usize].binary_search(&v).is_err())
            .collect();
        let mut p = p;
        let mut x = x;
        for v in branch {
            let nv = &adj[v as usize];
            let p2 = sorted_intersection(&p, nv);
            let x2 = sorted_intersection(&x, nv);
            r.push(v);
            self.cliques(r, p2, x2, out)?;
            r.pop();
            p.retain(|&u| u != v);
            let at = x.partition_point(|&u| u < v);
            x.insert(at, v);
        }
        Ok(())
    }

    /// Whether a closed set strictly contains `s`.
    fn extendable(&mut self, s: &[u32]) -> Result<bool> {
        let adj = &self.g.adj;
        let mut cn: Vec<u32> = adj[s[0] as usize].clone();
        for &v in &s[1..] {
            cn = sorted_intersection(&cn, &adj[v as usize]);
        }
        let mut chosen = s.to_vec();
        self.extend_search(&cn, &mut chosen, s.len())
    }

    fn extend_search(&mut self, cand: &[u32], chosen: &mut Vec<u32>, base: usize) -> Result<bool> {
        self.step()?;
        if chosen.len() > base && self.closed(chosen) {
            return Ok(true);
        }
        for (n, &v) in cand.iter().enumerate() {
            let rest = sorted_intersection(&cand[n + 1..], &self.g.adj[v as usize]);
            chosen.push(v);
            let found = self.extend_search(&rest, chosen, base)?;
            chosen.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn closed_in_clique(&mut self, k: &[u32], budget: usize, found: &mut BTreeSet<Vec<u32>>) -> Result<bool> {
        if self.closed(k) {
            found.insert(k.to_vec());
            return Ok(false);
        }
        let depth = budget.min(k.len().saturating_sub(self.quorum));
        let truncated = k.len().saturating_sub(budget) > self.quorum;
        let mut local: Vec<Vec<u32>> = Vec::new();
        for missing in 1..=depth {
            let mut drop: Vec<usize> = (0..missing).collect();
            loop {
                self.step()?;
                let sub: Vec<u32> = k
                    .iter()
                    .enumerate()
                    .filter(|(n, _)| !drop.contains(n))
                    .map(|(_, &v)| v)
                    .collect();
                let covered = local.iter().any(|c| sub.iter().all(|v| c.contains(v)));
                if !covered && self.closed(&sub) {
                    local.push(sub.clone());
                    if !self.extendable(&sub)? {
                        found.insert(sub);
                    }
                }
                if !next_combination(&mut drop, k.len()) {
                    break;
                }
            }
        }
        Ok(truncated)
    }
}

fn count_common(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Advances a sorted `k`-combination of `0..n`; false after the last one.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for pos in (0..k).rev() {
        if c[pos] < n - k + pos {
            c[pos] += 1;
            for q in pos + 1..k {
                c[q] = c[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Closed sets spanning at least `params.quorum` strings that no other
/// closed set contains. Closed maximal cliques are reported directly; other
/// maximal cliques are searched for closed sub-cliques within the descent
/// budget, each checked against every closed superset in the graph.
pub fn maximal_closed_sets(
    graph: &AwciGraph,
    ds: &Dataset,
    params: &SearchParams,
    opts: &AssembleOptions,
) -> Result<Assembly> {
    if graph.is_empty() || params.quorum > ds.len() {
        return Ok(Assembly::default());
    }
    let sets = char_sets(ds, graph);
    let comps = graph.components();
    let results: Vec<Result<(BTreeSet<Vec<u32>>, usize, usize)>> = comps
        .par_iter()
        .map(|comp| {
            let mut c = Component {
                ds,
                g: graph,
                sets: &sets,
                quorum: params.quorum,
                steps: 0,
                limit: opts.step_limit,
                label: ds.display_interval(&graph.vertices[comp[0] as usize]),
            };
            let mut cliques = Vec::new();
            c.cliques(&mut Vec::new(), comp.clone(), Vec::new(), &mut cliques)?;
            let mut found = BTreeSet::new();
            let mut truncated = 0;
            for k in &cliques {
                if c.closed_in_clique(k, opts.descent_budget, &mut found)? {
                    truncated += 1;
                }
            }
            Ok((found, cliques.len(), truncated))
        })
        .collect();

    let mut out = Assembly::default();
    let mut all = BTreeSet::new();
    for r in results {
        let (found, cliques, truncated) = r?;
        out.maximal_cliques += cliques;
        out.truncated += truncated;
        for s in found {
            let members = s.iter().map(|&v| graph.vertices[v as usize]).collect();
            all.insert(AwciSet::new(ds, members, true));
        }
    }
    if out.truncated > 0 {
        log::warn!(
            "{} non-closed maximal cliques exceed the descent budget of {}; deeper sub-cliques were not searched",
            out.truncated,
            opts.descent_budget
        );
    }
    out.sets = all.into_iter().collect();
    if cfg!(debug_assertions) {
        for s in &out.sets {
            debug_assert!(crate::oracle::is_closed_set(ds, &s.members).unwrap_or(false));
            debug_assert!(crate::oracle::is_awci_set(ds, &s.members, params.delta).unwrap_or(false));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle;

    fn iv(s: usize, a: usize, b: usize) -> Interval {
        Interval::new(s, a, b)
    }

    #[test]
    fn empty_pairs_give_empty_graph() {
        let g = build_graph(&[], &SearchParams::default());
        assert!(g.is_empty());
    }

    #[test]
    fn weak_vertices_are_dropped() {
        // a0 - b0 - c0 triangle plus a1 only adjacent to b0
        let edges = [
            (iv(0, 1, 2), iv(1, 1, 2)),
            (iv(1, 1, 2), iv(2, 1, 2)),
            (iv(0, 1, 2), iv(2, 1, 2)),
            (iv(0, 3, 4), iv(1, 1, 2)),
        ];
        let g = AwciGraph::from_edges(edges).drop_weak(3);
        assert_eq!(g.len(), 3);
        assert!(g.vertex_id(&iv(0, 3, 4)).is_none());
    }

    #[test]
    fn single_edge_has_no_triple() {
        let ds = fixtures::three_genomes();
        let g = AwciGraph::from_edges([(iv(0, 1, 8), iv(1, 2, 7))]);
        let params = SearchParams::new(1, 3, 6).unwrap();
        let a = maximal_closed_sets(&g, &ds, &params, &AssembleOptions::default()).unwrap();
        assert!(a.sets.is_empty());
    }

    #[test]
    fn three_genomes_triangle() {
        let ds = fixtures::three_genomes();
        let params = SearchParams::new(1, 3, 6).unwrap();
        let pairs = oracle::brute_force_pairs(&ds, &params);
        let g = build_graph(&pairs, &params);
        assert!(g.has_edge(&iv(0, 1, 8), &iv(1, 2, 7)));
        assert!(g.has_edge(&iv(0, 1, 8), &iv(2, 1, 8)));
        assert!(g.has_edge(&iv(1, 2, 7), &iv(2, 1, 8)));
        let a = maximal_closed_sets(&g, &ds, &params, &AssembleOptions::default()).unwrap();
        let want = vec![iv(0, 1, 8), iv(1, 2, 7), iv(2, 1, 8)];
        assert!(a.sets.iter().any(|s| s.members == want && s.closed));
    }

    fn dataset(strings: &[(&str, &[&str])]) -> Dataset {
        let owned: Vec<(&str, Vec<Vec<String>>, Vec<usize>)> = strings
            .iter()
            .map(|(id, pos)| {
                let sets = pos
                    .iter()
                    .map(|p| p.split_whitespace().map(str::to_string).collect())
                    .collect();
                (*id, sets, vec![])
            })
            .collect();
        Dataset::from_labels(&owned).unwrap()
    }

    #[test]
    fn superinterval_with_one_shared_extension_dominates() {
        // position 9 of A shares `i` with B, so [1,8] always extends
        let a: Vec<String> = (1..=9).map(|c| format!("c{c}")).collect();
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let mut b = a.clone();
        b[8] = "c9 z";
        let ds = dataset(&[("A", &a), ("B", &b)]);
        let g = AwciGraph::from_edges([(iv(0, 1, 9), iv(1, 1, 9)), (iv(0, 1, 8), iv(1, 1, 9))]);
        let params = SearchParams::new(1, 2, 1).unwrap();
        let p = prune_dominated_vertices(g, &ds, &params);
        assert!(p.vertex_id(&iv(0, 1, 8)).is_none());
        assert!(p.vertex_id(&iv(0, 1, 9)).is_some());
    }

    #[test]
    fn two_shared_extension_positions_keep_vertex() {
        let a: Vec<String> = (1..=10).map(|c| format!("c{c}")).collect();
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let ds = dataset(&[("A", &a), ("B", &a)]);
        let g = AwciGraph::from_edges([(iv(0, 1, 10), iv(1, 1, 10)), (iv(0, 1, 8), iv(1, 1, 10))]);
        let params = SearchParams::new(2, 2, 1).unwrap();
        let p = prune_dominated_vertices(g, &ds, &params);
        assert!(p.vertex_id(&iv(0, 1, 8)).is_some());
    }

    #[test]
    fn private_neighbour_keeps_vertex() {
        let a: Vec<String> = (1..=9).map(|c| format!("c{c}")).collect();
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let ds = dataset(&[("A", &a), ("B", &a), ("C", &a)]);
        let g = AwciGraph::from_edges([
            (iv(0, 1, 9), iv(1, 1, 9)),
            (iv(0, 1, 8), iv(1, 1, 9)),
            (iv(0, 1, 8), iv(2, 1, 8)),
        ]);
        let params = SearchParams::new(1, 2, 1).unwrap();
        let p = prune_dominated_vertices(g, &ds, &params);
        assert!(p.vertex_id(&iv(0, 1, 8)).is_some());
    }

    /// D's block `[1,2]` can grow onto the `a` at position 3, so the
    /// 4-clique on the blocks is open while A, B, C alone are closed.
    pub(crate) fn open_clique() -> Dataset {
        dataset(&[
            ("A", &["p", "a", "b", "q"]),
            ("B", &["r", "a", "b", "s"]),
            ("C", &["t", "a", "b", "u"]),
            ("D", &["a", "b", "a", "v"]),
        ])
    }

    #[test]
    fn closed_subclique_of_open_clique_is_not_maximal() {
        let ds = open_clique();
        let params = SearchParams::new(0, 3, 2).unwrap();
        let four = vec![iv(0, 2, 3), iv(1, 2, 3), iv(2, 2, 3), iv(3, 1, 2)];
        assert!(oracle::is_awci_set(&ds, &four, 0).unwrap());
        assert!(!oracle::is_closed_set(&ds, &four).unwrap());
        assert!(oracle::is_closed_set(&ds, &four[..3]).unwrap());

        let expect = oracle::brute_force_maximal_closed_sets(&ds, &params, 1_000_000).unwrap();
        let pairs = oracle::brute_force_pairs(&ds, &SearchParams { quorum: 2, ..params });
        let g = build_graph(&pairs, &params);
        let a = maximal_closed_sets(&g, &ds, &params, &AssembleOptions::default()).unwrap();
        assert_eq!(a.sets, expect);
        // the grown clique supersedes the closed triple
        let grown = vec![iv(0, 2, 3), iv(1, 2, 3), iv(2, 2, 3), iv(3, 1, 3)];
        assert!(a.sets.iter().any(|s| s.members == grown));
        assert!(!a.sets.iter().any(|s| s.members == four[..3]));
    }

    #[test]
    fn combinations_cover_all_subsets() {
        let mut c = vec![0, 1];
        let mut n = 1;
        while next_combination(&mut c, 4) {
            n += 1;
        }
        assert_eq!(n, 6);
    }
}
