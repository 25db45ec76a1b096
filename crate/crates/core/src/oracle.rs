//! Literal, unoptimised evaluation of the interval definitions.
//!
//! Nothing in here touches the precomputed tables; these functions are the
//! reference the fast path is checked against and may be exponential.

use crate::assemble::AwciSet;
use crate::enumerate::AwciPair;
use crate::error::{Error, Result};
use crate::model::{intersection, intersects, Dataset, Interval, SearchParams};
use crate::CharId;

/// Outcome of comparing two intervals of distinct strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVerdict {
    pub is_wci: bool,
    pub is_awci: bool,
    pub common: Vec<CharId>,
    pub indels_left: Vec<usize>,
    pub indels_right: Vec<usize>,
    pub indel_total: usize,
}

impl PairVerdict {
    pub fn size_left(&self, a: &Interval) -> usize {
        a.len() - self.indels_left.len()
    }

    pub fn size_right(&self, b: &Interval) -> usize {
        b.len() - self.indels_right.len()
    }
}

fn check_interval(ds: &Dataset, iv: &Interval) -> Result<()> {
    let s = ds
        .strings()
        .get(iv.string)
        .ok_or_else(|| Error::Validation(format!("no string with index {}", iv.string)))?;
    if !s.is_valid_interval(iv.start, iv.end) {
        return Err(Error::Range {
            start: iv.start,
            end: iv.end,
            len: s.len(),
        });
    }
    Ok(())
}

/// Computes the common character set and the indel positions of `a`, `b`.
pub fn judge_pair(ds: &Dataset, a: &Interval, b: &Interval, delta: usize) -> Result<PairVerdict> {
    check_interval(ds, a)?;
    check_interval(ds, b)?;
    if a.string == b.string {
        return Err(Error::Unsupported(
            "intervals of the same string are never compared".into(),
        ));
    }
    let common = intersection(&ds.char_set_of(a), &ds.char_set_of(b));
    let indels = |iv: &Interval| -> Vec<usize> {
        let s = ds.string(iv.string);
        (iv.start..=iv.end)
            .filter(|&p| !intersects(s.at(p), &common))
            .collect()
    };
    let indels_left = indels(a);
    let indels_right = indels(b);
    let indel_total = indels_left.len() + indels_right.len();
    Ok(PairVerdict {
        is_wci: indel_total == 0,
        is_awci: indel_total <= delta,
        common,
        indels_left,
        indels_right,
        indel_total,
    })
}

fn check_distinct_strings(intervals: &[Interval]) -> Result<()> {
    for (n, a) in intervals.iter().enumerate() {
        if intervals[n + 1..].iter().any(|b| b.string == a.string) {
            return Err(Error::Unsupported(format!(
                "two intervals on string #{}",
                a.string
            )));
        }
    }
    Ok(())
}

/// Every unordered pair of members is a `delta`-approximate weak common interval pair.
pub fn is_awci_set(ds: &Dataset, intervals: &[Interval], delta: usize) -> Result<bool> {
    check_distinct_strings(intervals)?;
    for (n, a) in intervals.iter().enumerate() {
        for b in &intervals[n + 1..] {
            if !judge_pair(ds, a, b, delta)?.is_awci {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// No member has an adjacent position (same contig) whose set meets the
/// character set of every other member.
pub fn is_closed_set(ds: &Dataset, intervals: &[Interval]) -> Result<bool> {
    check_distinct_strings(intervals)?;
    for iv in intervals {
        check_interval(ds, iv)?;
    }
    let char_sets: Vec<Vec<CharId>> = intervals.iter().map(|iv| ds.char_set_of(iv)).collect();
    for (n, iv) in intervals.iter().enumerate() {
        let s = ds.string(iv.string);
        let (lo, hi) = s.contig_bounds(iv.start);
        let neighbours = [
            (iv.start > lo).then(|| iv.start - 1),
            (iv.end < hi).then(|| iv.end + 1),
        ];
        for p in neighbours.into_iter().flatten() {
            let extends = char_sets
                .iter()
                .enumerate()
                .filter(|&(o, _)| o != n)
                .all(|(_, c)| intersects(s.at(p), c));
            if extends {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A pair as reported by the enumerator: an AWCI pair whose four end
/// positions all meet the common set and whose larger side has at least
/// `min_size` positions sharing characters.
pub fn reportable_pair(
    ds: &Dataset,
    a: &Interval,
    b: &Interval,
    params: &SearchParams,
) -> Result<Option<AwciPair>> {
    let v = judge_pair(ds, a, b, params.delta)?;
    if !v.is_awci {
        return Ok(None);
    }
    let anchored = |iv: &Interval, indels: &[usize]| {
        !indels.contains(&iv.start) && !indels.contains(&iv.end)
    };
    if !anchored(a, &v.indels_left) || !anchored(b, &v.indels_right) {
        return Ok(None);
    }
    let (size_left, size_right) = (v.size_left(a), v.size_right(b));
    if size_left.max(size_right) < params.min_size {
        return Ok(None);
    }
    Ok(Some(AwciPair {
        left: *a,
        right: *b,
        common: v.common,
        indel_total: v.indel_total,
        size_left,
        size_right,
    }))
}

/// All valid intervals of string `x`.
pub fn all_intervals(ds: &Dataset, x: usize) -> Vec<Interval> {
    let s = ds.string(x);
    let mut out = Vec::new();
    for i in 1..=s.len() {
        let (_, hi) = s.contig_bounds(i);
        for j in i..=hi {
            out.push(Interval::new(x, i, j));
        }
    }
    out
}

/// Exhaustive enumeration of reportable pairs over all interval pairs of
/// distinct strings, in canonical `(x, i, j, y, k, l)` order.
pub fn brute_force_pairs(ds: &Dataset, params: &SearchParams) -> Vec<AwciPair> {
    let per_string: Vec<Vec<Interval>> = (0..ds.len()).map(|x| all_intervals(ds, x)).collect();
    let mut out = Vec::new();
    for x in 0..ds.len() {
        for a in &per_string[x] {
            for ys in &per_string[x + 1..] {
                for b in ys {
                    if let Some(p) = reportable_pair(ds, a, b, params).expect("valid intervals") {
                        out.push(p);
                    }
                }
            }
        }
    }
    out.sort_by_key(|p| (p.left, p.right));
    out
}

/// Exhaustive answer to the maximal closed set problem: sets with at most
/// one interval per string, members in at least `quorum` strings, every
/// pair reportable, closed, and not contained in another such closed set.
///
/// Fails with a resource error once more than `cutoff` cliques are visited.
pub fn brute_force_maximal_closed_sets(
    ds: &Dataset,
    params: &SearchParams,
    cutoff: usize,
) -> Result<Vec<AwciSet>> {
    let m = ds.len();
    if m < params.quorum {
        return Ok(Vec::new());
    }
    let vertices: Vec<Interval> = (0..m).flat_map(|x| all_intervals(ds, x)).collect();
    let nv = vertices.len();
    let mut adjacent = vec![false; nv * nv];
    for a in 0..nv {
        for b in a + 1..nv {
            if vertices[a].string == vertices[b].string {
                continue;
            }
            if reportable_pair(ds, &vertices[a], &vertices[b], params)?.is_some() {
                adjacent[a * nv + b] = true;
                adjacent[b * nv + a] = true;
            }
        }
    }
    let by_string: Vec<Vec<usize>> = (0..m)
        .map(|x| (0..nv).filter(|&v| vertices[v].string == x).collect())
        .collect();

    struct Search<'a> {
        ds: &'a Dataset,
        vertices: &'a [Interval],
        adjacent: &'a [bool],
        by_string: &'a [Vec<usize>],
        quorum: usize,
        cutoff: usize,
        visited: usize,
        chosen: Vec<usize>,
        closed: Vec<Vec<Interval>>,
    }

    impl Search<'_> {
        fn run(&mut self, x: usize) -> Result<()> {
            let m = self.by_string.len();
            if self.chosen.len() + (m - x) < self.quorum {
                return Ok(());
            }
            if x == m {
                self.visited += 1;
                if self.visited > self.cutoff {
                    return Err(Error::Resource(format!(
                        "brute-force set enumeration exceeded {} cliques",
                        self.cutoff
                    )));
                }
                let members: Vec<Interval> = self.chosen.iter().map(|&v| self.vertices[v]).collect();
                if is_closed_set(self.ds, &members)? {
                    self.closed.push(members);
                }
                return Ok(());
            }
            self.run(x + 1)?;
            let nv = self.vertices.len();
            for &v in &self.by_string[x] {
                if self.chosen.iter().all(|&u| self.adjacent[u * nv + v]) {
                    self.chosen.push(v);
                    self.run(x + 1)?;
                    self.chosen.pop();
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        ds,
        vertices: &vertices,
        adjacent: &adjacent,
        by_string: &by_string,
        quorum: params.quorum,
        cutoff,
        visited: 0,
        chosen: Vec::new(),
        closed: Vec::new(),
    };
    search.run(0)?;

    let closed = search.closed;
    let is_subset = |a: &[Interval], b: &[Interval]| a.iter().all(|iv| b.contains(iv));
    let mut out: Vec<AwciSet> = closed
        .iter()
        .filter(|s| {
            !closed
                .iter()
                .any(|t| t.len() > s.len() && is_subset(s, t))
        })
        .map(|s| AwciSet::new(ds, s.clone(), true))
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn iv(ds: &Dataset, id: &str, i: usize, j: usize) -> Interval {
        ds.interval(ds.index_of(id).unwrap(), i, j).unwrap()
    }

    fn labels(ds: &Dataset, set: &[CharId]) -> Vec<String> {
        let mut l: Vec<String> = set.iter().map(|&c| ds.alphabet().label(c).to_owned()).collect();
        l.sort();
        l
    }

    fn sorted(v: &[&str]) -> Vec<String> {
        let mut l: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        l.sort();
        l
    }

    #[test]
    fn three_genomes_pair_verdict() {
        let ds = fixtures::three_genomes();
        let a = iv(&ds, "S1", 1, 8);
        let b = iv(&ds, "S3", 1, 8);
        let v = judge_pair(&ds, &a, &b, 1).unwrap();
        assert!(v.is_awci);
        assert!(!v.is_wci);
        assert_eq!(
            labels(&ds, &v.common),
            sorted(&["g", "b", "p", "n", "d", "s", "a", "e", "w", "f"])
        );
        assert_eq!(v.indels_left, vec![3]);
        assert!(v.indels_right.is_empty());
        assert_eq!(v.indel_total, 1);

        let v0 = judge_pair(&ds, &a, &b, 0).unwrap();
        assert!(!v0.is_awci && !v0.is_wci);
    }

    #[test]
    fn identical_content_is_wci() {
        let ds = Dataset::from_labels(&[
            ("S", vec![vec!["a"], vec!["b"]], vec![]),
            ("T", vec![vec!["a"], vec!["b"]], vec![]),
        ])
        .unwrap();
        let v = judge_pair(&ds, &iv(&ds, "S", 1, 2), &iv(&ds, "T", 1, 2), 0).unwrap();
        assert!(v.is_wci);
        assert_eq!(v.indel_total, 0);
    }

    #[test]
    fn same_string_is_unsupported() {
        let ds = fixtures::three_genomes();
        let r = judge_pair(&ds, &iv(&ds, "S1", 1, 2), &iv(&ds, "S1", 3, 4), 0);
        assert!(matches!(r, Err(Error::Unsupported(_))));
        let r = is_awci_set(&ds, &[iv(&ds, "S1", 1, 2), iv(&ds, "S1", 3, 4)], 0);
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn three_genomes_set_is_awci_and_closed() {
        let ds = fixtures::three_genomes();
        let set = [iv(&ds, "S1", 1, 8), iv(&ds, "S2", 2, 7), iv(&ds, "S3", 1, 8)];
        assert!(is_awci_set(&ds, &set, 1).unwrap());
        assert!(!is_awci_set(&ds, &set, 0).unwrap());
        for (n, a) in set.iter().enumerate() {
            for b in &set[n + 1..] {
                assert_eq!(judge_pair(&ds, a, b, 1).unwrap().indel_total, 1);
            }
        }
        assert!(is_closed_set(&ds, &set).unwrap());

        let shorter = [iv(&ds, "S1", 1, 7), iv(&ds, "S2", 2, 7), iv(&ds, "S3", 1, 8)];
        assert!(!is_closed_set(&ds, &shorter).unwrap());
    }

    #[test]
    fn closedness_is_not_hereditary() {
        let ds = fixtures::three_genomes();
        let set = [iv(&ds, "S1", 1, 8), iv(&ds, "S2", 2, 7), iv(&ds, "S3", 1, 8)];
        assert!(is_closed_set(&ds, &set).unwrap());
        // S1[9] = {v,l} meets C(S2[2,7]) through l once S3 is gone
        assert!(!is_closed_set(&ds, &set[..2]).unwrap());
    }

    #[test]
    fn left_boundary_has_no_neighbour() {
        let ds = Dataset::from_labels(&[
            ("S", vec![vec!["a"], vec!["b"], vec!["c"]], vec![]),
            ("T", vec![vec!["a"], vec!["b"]], vec![]),
        ])
        .unwrap();
        // S[1,2] vs T[1,2]: right neighbour {c} is foreign, no left neighbour
        assert!(is_closed_set(&ds, &[iv(&ds, "S", 1, 2), iv(&ds, "T", 1, 2)]).unwrap());
        let ds = Dataset::from_labels(&[
            ("S", vec![vec!["a"], vec!["b"], vec!["a"]], vec![]),
            ("T", vec![vec!["a"], vec!["b"]], vec![]),
        ])
        .unwrap();
        assert!(!is_closed_set(&ds, &[iv(&ds, "S", 1, 2), iv(&ds, "T", 1, 2)]).unwrap());
        // a contig break hides the neighbour
        let ds = Dataset::from_labels(&[
            ("S", vec![vec!["a"], vec!["b"], vec!["a"]], vec![2]),
            ("T", vec![vec!["a"], vec!["b"]], vec![]),
        ])
        .unwrap();
        assert!(is_closed_set(&ds, &[iv(&ds, "S", 1, 2), iv(&ds, "T", 1, 2)]).unwrap());
    }

    #[test]
    fn brute_force_pairs_small() {
        let ds = Dataset::from_labels(&[
            ("S", vec![vec!["1"], vec!["2"], vec!["3"]], vec![]),
            ("T", vec![vec!["2"], vec!["3"], vec!["4"]], vec![]),
        ])
        .unwrap();
        let params = SearchParams::new(0, 2, 2).unwrap();
        let pairs = brute_force_pairs(&ds, &params);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].left, Interval::new(0, 2, 3));
        assert_eq!(pairs[0].right, Interval::new(1, 1, 2));

        let one = Dataset::from_labels(&[("S", vec![vec!["1"]], vec![])]).unwrap();
        assert!(brute_force_pairs(&one, &params).is_empty());
    }

    #[test]
    fn brute_force_pairs_three_genomes() {
        let ds = fixtures::three_genomes();
        let params = SearchParams::new(1, 3, 6).unwrap();
        let pairs = brute_force_pairs(&ds, &params);
        let has = |a: Interval, b: Interval| pairs.iter().any(|p| p.left == a && p.right == b);
        assert!(has(iv(&ds, "S1", 1, 8), iv(&ds, "S2", 2, 7)));
        assert!(has(iv(&ds, "S1", 1, 8), iv(&ds, "S3", 1, 8)));
        assert!(has(iv(&ds, "S2", 2, 7), iv(&ds, "S3", 1, 8)));
    }

    #[test]
    fn brute_force_sets() {
        let ds = fixtures::three_genomes();
        let params = SearchParams::new(1, 3, 6).unwrap();
        let sets = brute_force_maximal_closed_sets(&ds, &params, 1_000_000).unwrap();
        let target = vec![iv(&ds, "S1", 1, 8), iv(&ds, "S2", 2, 7), iv(&ds, "S3", 1, 8)];
        assert!(sets.iter().any(|s| s.members == target && s.closed));

        let disjoint = Dataset::from_labels(&[
            ("S", vec![vec!["a"], vec!["b"]], vec![]),
            ("T", vec![vec!["c"], vec!["d"]], vec![]),
        ])
        .unwrap();
        let p = SearchParams::new(0, 2, 0).unwrap();
        assert!(brute_force_maximal_closed_sets(&disjoint, &p, 1000).unwrap().is_empty());

        let twins = Dataset::from_labels(&[
            ("S", vec![vec!["a"], vec!["b"]], vec![]),
            ("T", vec![vec!["a"], vec!["b"]], vec![]),
        ])
        .unwrap();
        let p = SearchParams::new(0, 2, 2).unwrap();
        let sets = brute_force_maximal_closed_sets(&twins, &p, 1000).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].members, vec![Interval::new(0, 1, 2), Interval::new(1, 1, 2)]);
    }

    #[test]
    fn cutoff_is_a_resource_error() {
        let ds = fixtures::three_genomes();
        let params = SearchParams::new(2, 2, 0).unwrap();
        let r = brute_force_maximal_closed_sets(&ds, &params, 3);
        assert!(matches!(r, Err(Error::Resource(_))));
    }
}
