//! Enumeration of approximate weak common interval pairs.
//!
//! Every string acts as reference `S_x`; for each left bound `i` the
//! candidate right bounds `J` are grown with the ridge filter, narrowed by
//! anchor-neighbourhood refinement, and each `[i, j]`, `j ∈ J`, is matched
//! against every trans string `S_y` by sweeping intervals around the anchor
//! positions `P_y`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::filter::{FilterState, RidgeTables};
use crate::index::PairIndex;
use crate::model::{CharId, Dataset, Interval, SearchParams};

/// A reported pair of approximate weak common intervals, `left` on the
/// lower-indexed string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AwciPair {
    pub left: Interval,
    pub right: Interval,
    pub common: Vec<CharId>,
    pub indel_total: usize,
    /// positions of `left` sharing characters with the common set
    pub size_left: usize,
    /// positions of `right` sharing characters with the common set
    pub size_right: usize,
}

/// All pairs reported for one reference interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairGroup {
    pub reference: Interval,
    /// number of distinct other strings holding a partner, lower-indexed ones included
    pub partner_strings: usize,
    pub pairs: Vec<AwciPair>,
}

/// Incremental acceptance test for a fixed reference interval `[i, j]`
/// against a growing or shrinking trans interval.
///
/// Positions of the trans string are fed as their `Pos_yx` rows. `covered`
/// counts reference positions in `[i, j]` hit by some fed row (`|C_kl|`),
/// `misses` counts fed positions hitting nothing in `[i, j]` (`d_kl`).
#[derive(Debug, Clone, Default)]
pub struct SweepState {
    i: usize,
    j: usize,
    counts: Vec<u32>,
    covered: usize,
    misses: usize,
    fed: usize,
}

impl SweepState {
    pub fn new(i: usize, j: usize) -> Self {
        let mut s = Self::default();
        s.reset(i, j);
        s
    }

    pub fn reset(&mut self, i: usize, j: usize) {
        debug_assert!(1 <= i && i <= j);
        self.i = i;
        self.j = j;
        self.counts.clear();
        self.counts.resize(j - i + 1, 0);
        self.covered = 0;
        self.misses = 0;
        self.fed = 0;
    }

    #[inline]
    fn restrict<'r>(&self, row: &'r [u32]) -> &'r [u32] {
        let a = row.partition_point(|&p| (p as usize) < self.i);
        let b = row.partition_point(|&p| (p as usize) <= self.j);
        &row[a..b]
    }

    /// Feeds one trans position; returns whether it meets `[i, j]`.
    #[inline]
    pub fn add(&mut self, row: &[u32]) -> bool {
        let hits = self.restrict(row);
        self.fed += 1;
        if hits.is_empty() {
            self.misses += 1;
            return false;
        }
        for &p in hits {
            let c = &mut self.counts[p as usize - self.i];
            if *c == 0 {
                self.covered += 1;
            }
            *c += 1;
        }
        true
    }

    /// Withdraws a previously fed trans position.
    #[inline]
    pub fn remove(&mut self, row: &[u32]) {
        let hits = self.restrict(row);
        self.fed -= 1;
        if hits.is_empty() {
            self.misses -= 1;
            return;
        }
        for &p in hits {
            let c = &mut self.counts[p as usize - self.i];
            *c -= 1;
            if *c == 0 {
                self.covered -= 1;
            }
        }
    }

    /// `|C_kl|`
    pub fn covered(&self) -> usize {
        self.covered
    }

    /// `d_kl`
    pub fn misses(&self) -> usize {
        self.misses
    }

    pub fn fed(&self) -> usize {
        self.fed
    }

    /// Reference position `p` is hit by the fed trans positions.
    #[inline]
    pub fn hits(&self, p: usize) -> bool {
        self.counts[p - self.i] > 0
    }

    /// `j - i + 1 - |C_kl| + d_kl`
    #[inline]
    pub fn indels(&self) -> usize {
        self.j - self.i + 1 - self.covered + self.misses
    }

    #[inline]
    pub fn accepts(&self, delta: usize) -> bool {
        self.indels() <= delta
    }
}

/// Switches for the optional stages of the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// ridge filter and right-bound refinement
    pub filter: bool,
    /// report a reference interval only when partners cover `quorum - 1`
    /// other strings; when off every pair is reported (quorum 2)
    pub quorum_grouping: bool,
    /// left bounds processed per parallel batch
    pub batch: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            filter: true,
            quorum_grouping: true,
            batch: 256,
        }
    }
}

/// Outcome of right-bound refinement for one left bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refined {
    /// largest surviving right bound; `< i` when the left bound is abandoned
    pub right: usize,
    /// per string, the largest right bound it can still pair with (`i - 1` if none)
    pub per_string: Vec<usize>,
    pub rounds: usize,
}

/// `(q - 1)`-th largest value, i.e. the best bound that at least `q - 1`
/// strings reach. `None` when fewer than `q - 1` values exist.
pub fn quorum_bound(values: &[usize], quorum: usize) -> Option<usize> {
    let need = quorum.checked_sub(1)?;
    if need == 0 || values.len() < need {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    Some(v[need - 1])
}

/// Counters gathered while enumerating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub left_bounds: u64,
    pub right_bounds: u64,
    pub filter_calls: u64,
    pub groups: u64,
    pub pairs: u64,
}

impl std::ops::AddAssign for EnumStats {
    fn add_assign(&mut self, o: Self) {
        self.left_bounds += o.left_bounds;
        self.right_bounds += o.right_bounds;
        self.filter_calls += o.filter_calls;
        self.groups += o.groups;
        self.pairs += o.pairs;
    }
}

struct Scratch<'a> {
    filter: Option<FilterState<'a>>,
    sweep: SweepState,
    marks: Vec<u32>,
    stamp: u32,
    cover: Vec<bool>,
    stats: EnumStats,
}

/// Enumerates pairs over a dataset with prebuilt tables.
pub struct Enumerator<'a> {
    ds: &'a Dataset,
    index: &'a PairIndex,
    tables: Option<&'a RidgeTables>,
    params: SearchParams,
    opts: EnumOptions,
}

impl<'a> Enumerator<'a> {
    /// `tables` must be built at `params.delta`; it is ignored when the
    /// filter is switched off.
    pub fn new(
        ds: &'a Dataset,
        index: &'a PairIndex,
        tables: Option<&'a RidgeTables>,
        params: SearchParams,
        opts: EnumOptions,
    ) -> Self {
        if let Some(t) = tables {
            assert_eq!(t.delta(), params.delta, "ridge tables built for another delta");
        }
        let tables = if opts.filter { tables } else { None };
        Self {
            ds,
            index,
            tables,
            params,
            opts,
        }
    }

    /// Quorum actually applied: the configured one, or 2 without grouping.
    pub fn quorum(&self) -> usize {
        if self.opts.quorum_grouping {
            self.params.quorum
        } else {
            2
        }
    }

    fn filter_params(&self) -> SearchParams {
        SearchParams {
            quorum: self.quorum(),
            ..self.params
        }
    }

    /// A fresh filter sweep state for reference `x`, if filtering is on.
    pub fn filter_state(&self, x: usize) -> Option<FilterState<'a>> {
        self.tables
            .map(|t| FilterState::new(self.ds, self.index, t, self.filter_params(), x))
    }

    /// Strings whose partners matter for reference `x`.
    fn partner_strings(&self, x: usize) -> Vec<usize> {
        let m = self.ds.len();
        if self.quorum() <= 2 {
            (x + 1..m).collect()
        } else {
            (0..m).filter(|&y| y != x).collect()
        }
    }

    /// Largest `r` such that `[i, r]` is the candidate right-bound range for
    /// left bound `i` of `S_x`: the contig suffix, cut at the first position
    /// the filter rejects. Returns `i - 1` for an empty range.
    pub fn candidate_right_bounds(
        &self,
        x: usize,
        i: usize,
        filter: Option<&mut FilterState<'a>>,
    ) -> Result<usize> {
        let sx = self.ds.string(x);
        let (_, end) = sx.contig_bounds(i);
        if self.quorum() > self.ds.len() {
            return Ok(i - 1);
        }
        let Some(f) = filter else {
            return Ok(end);
        };
        f.reset(i);
        let mut right = i - 1;
        for j in i..=end {
            if !f.filter_position(j)? {
                break;
            }
            right = j;
        }
        Ok(right)
    }

    /// `P_y`: sorted union of `Pos_xy[i..=i+delta]`, clamped to the contig of `i`.
    pub fn collect_anchors(&self, x: usize, y: usize, i: usize) -> Vec<u32> {
        let (_, end) = self.ds.string(x).contig_bounds(i);
        let pos = self.index.pos(x, y);
        let mut out: Vec<u32> = (i..=(i + self.params.delta).min(end))
            .flat_map(|p| pos.row(p).iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Intervals `[k, l]` of `S_y` with `k <= p <= l` for some anchor `p`
    /// forming a reportable pair with `[i, j]` of `S_x`, in the order found.
    /// Stops after `limit` hits when given.
    pub fn enumerate_trans_intervals(
        &self,
        x: usize,
        i: usize,
        j: usize,
        y: usize,
        anchors: &[u32],
        limit: Option<usize>,
    ) -> Vec<Interval> {
        let mut sweep = SweepState::new(i, j);
        let mut out = Vec::new();
        self.sweep_trans(x, i, j, y, anchors, limit, &mut sweep, |k, l, _| {
            out.push(Interval::new(y, k, l))
        });
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn sweep_trans(
        &self,
        _x: usize,
        i: usize,
        j: usize,
        y: usize,
        anchors: &[u32],
        limit: Option<usize>,
        sweep: &mut SweepState,
        mut emit: impl FnMut(usize, usize, &SweepState),
    ) -> usize {
        let delta = self.params.delta;
        let min_size = self.params.min_size;
        let sy = self.ds.string(y);
        let rows = self.index.pos(y, _x);
        let limit = limit.unwrap_or(usize::MAX);
        let mut found = 0;
        let mut prev = 0usize;

        let accept = |sweep: &SweepState| {
            sweep.accepts(delta)
                && sweep.hits(i)
                && sweep.hits(j)
                && sweep.covered().max(sweep.fed() - sweep.misses()) >= min_size
        };

        sweep.reset(i, j);
        for &p in anchors {
            let p = p as usize;
            let (start, end) = sy.contig_bounds(p);
            let lo = (prev + 1).max(start);
            prev = p;

            let hit_p = sweep.add(rows.row(p));
            let mut lowest = p;
            if sweep.misses() <= delta {
                let mut k = p;
                loop {
                    let hit_k = if k == p { hit_p } else { sweep.add(rows.row(k)) };
                    lowest = k;
                    if sweep.misses() > delta {
                        break;
                    }
                    if hit_k {
                        if hit_p && accept(sweep) {
                            emit(k, p, sweep);
                            found += 1;
                        }
                        let mut l = p;
                        while l < end && found < limit {
                            l += 1;
                            let hit_l = sweep.add(rows.row(l));
                            if sweep.misses() > delta {
                                sweep.remove(rows.row(l));
                                l -= 1;
                                break;
                            }
                            if hit_l && accept(sweep) {
                                emit(k, l, sweep);
                                found += 1;
                            }
                        }
                        for q in (p + 1..=l).rev() {
                            sweep.remove(rows.row(q));
                        }
                    }
                    if found >= limit || k == lo {
                        break;
                    }
                    k -= 1;
                }
            }
            for q in lowest..=p {
                sweep.remove(rows.row(q));
            }
            if found >= limit {
                break;
            }
        }
        found
    }

    /// Narrows the right-bound range `[i, right]` of left bound `i` using,
    /// per trans string and anchor, the reference positions reachable from
    /// the anchor's neighbourhood in `S_y`.
    pub fn refine_bounds(
        &self,
        x: usize,
        i: usize,
        right: usize,
        anchors: &[(usize, Vec<u32>)],
    ) -> Refined {
        let mut cover = Vec::new();
        self.refine_with(x, i, right, anchors, &mut cover)
    }

    fn refine_with(
        &self,
        x: usize,
        i: usize,
        mut right: usize,
        anchors: &[(usize, Vec<u32>)],
        cover: &mut Vec<bool>,
    ) -> Refined {
        let m = self.ds.len();
        let mut per_string = vec![i - 1; m];
        let mut rounds = 0;
        while right >= i && rounds < self.params.refine_iters {
            rounds += 1;
            let mut reach = Vec::with_capacity(anchors.len());
            for (y, ps) in anchors {
                let best = ps
                    .iter()
                    .map(|&p| self.anchor_reach(x, i, right, *y, p as usize, cover))
                    .max()
                    .unwrap_or(i - 1);
                per_string[*y] = best;
                reach.push(best);
            }
            let bound = quorum_bound(&reach, self.quorum()).unwrap_or(i - 1);
            let next = right.min(bound);
            if next == right {
                break;
            }
            right = next;
        }
        for v in &mut per_string {
            *v = (*v).min(right.max(i - 1));
        }
        Refined {
            right,
            per_string,
            rounds,
        }
    }

    /// Largest `r` in `[i, right]` hit from the neighbourhood of anchor `p`
    /// such that `[i, r]` misses the neighbourhood at most `delta` times.
    fn anchor_reach(
        &self,
        x: usize,
        i: usize,
        right: usize,
        y: usize,
        p: usize,
        cover: &mut Vec<bool>,
    ) -> usize {
        let delta = self.params.delta;
        let sy = self.ds.string(y);
        let rows = self.index.pos(y, x);
        let (start, end) = sy.contig_bounds(p);
        cover.clear();
        cover.resize(right - i + 1, false);

        let mark = |k: usize, cover: &mut Vec<bool>| -> bool {
            let hits = rows.row_in(k, i, right);
            for &r in hits {
                cover[r as usize - i] = true;
            }
            !hits.is_empty()
        };

        let mut misses = 0;
        let mut k = p;
        loop {
            if !mark(k, cover) {
                misses += 1;
                if misses > delta {
                    break;
                }
            }
            if k == start {
                break;
            }
            k -= 1;
        }
        let mut misses = usize::from(rows.row_in(p, i, right).is_empty());
        let mut l = p;
        while l < end && misses <= delta {
            l += 1;
            if !mark(l, cover) {
                misses += 1;
            }
        }

        let mut best = i - 1;
        let mut missed = 0;
        for (off, &c) in cover.iter().enumerate() {
            if c {
                best = i + off;
            } else {
                missed += 1;
                if missed > delta {
                    break;
                }
            }
        }
        best
    }

    fn common_set(&self, scratch: &mut Scratch, a: &Interval, b: &Interval) -> Vec<CharId> {
        scratch.stamp = scratch.stamp.wrapping_add(1);
        if scratch.stamp == 0 {
            scratch.marks.iter_mut().for_each(|v| *v = 0);
            scratch.stamp = 1;
        }
        let stamp = scratch.stamp;
        let sa = self.ds.string(a.string);
        for p in a.start..=a.end {
            for c in sa.at(p) {
                scratch.marks[c.index()] = stamp;
            }
        }
        let sb = self.ds.string(b.string);
        let mut out = Vec::new();
        for p in b.start..=b.end {
            for &c in sb.at(p) {
                if scratch.marks[c.index()] == stamp {
                    out.push(c);
                    scratch.marks[c.index()] = stamp.wrapping_sub(1);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn process_left_bound(&self, x: usize, i: usize, scratch: &mut Scratch<'a>) -> Result<Vec<PairGroup>> {
        scratch.stats.left_bounds += 1;
        let before = scratch.filter.as_ref().map_or(0, |f| f.calls());
        let mut right = self.candidate_right_bounds(x, i, scratch.filter.as_mut())?;
        scratch.stats.filter_calls += scratch.filter.as_ref().map_or(0, |f| f.calls()) - before;
        if right < i {
            return Ok(Vec::new());
        }
        let need = self.quorum() - 1;
        let ys = self.partner_strings(x);
        let anchors: Vec<(usize, Vec<u32>)> = ys
            .iter()
            .map(|&y| (y, self.collect_anchors(x, y, i)))
            .filter(|(_, a)| !a.is_empty())
            .collect();
        if anchors.len() < need {
            return Ok(Vec::new());
        }
        let mut reach = vec![right; self.ds.len()];
        if self.tables.is_some() {
            let refined = self.refine_with(x, i, right, &anchors, &mut scratch.cover);
            right = refined.right;
            reach = refined.per_string;
            if right < i {
                return Ok(Vec::new());
            }
        }

        let mut groups = Vec::new();
        for j in i..=right {
            scratch.stats.right_bounds += 1;
            let reference = Interval::new(x, i, j);
            let mut partners = 0;
            let mut found: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
            for (y, ps) in anchors.iter().filter(|(y, _)| *y > x) {
                if j > reach[*y] {
                    continue;
                }
                let before = found.len();
                self.sweep_trans(x, i, j, *y, ps, None, &mut scratch.sweep, |k, l, s| {
                    found.push((*y, k, l, s.indels(), s.covered()));
                });
                if found.len() > before {
                    partners += 1;
                }
            }
            if found.is_empty() {
                continue;
            }
            if partners < need {
                for (y, ps) in anchors.iter().filter(|(y, _)| *y < x) {
                    if j > reach[*y] {
                        continue;
                    }
                    if self.sweep_trans(x, i, j, *y, ps, Some(1), &mut scratch.sweep, |_, _, _| {}) > 0 {
                        partners += 1;
                        if partners >= need {
                            break;
                        }
                    }
                }
            }
            if partners < need {
                continue;
            }
            found.sort_unstable();
            let mut pairs = Vec::with_capacity(found.len());
            for (y, k, l, indels, covered) in found {
                let right_iv = Interval::new(y, k, l);
                let common = self.common_set(scratch, &reference, &right_iv);
                // trans size = positions of [k, l] meeting the common set
                let size_right = right_iv.len() - (indels - (j - i + 1 - covered));
                pairs.push(AwciPair {
                    left: reference,
                    right: right_iv,
                    common,
                    indel_total: indels,
                    size_left: covered,
                    size_right,
                });
            }
            scratch.stats.groups += 1;
            scratch.stats.pairs += pairs.len() as u64;
            groups.push(PairGroup {
                reference,
                partner_strings: partners,
                pairs,
            });
        }
        Ok(groups)
    }

    fn scratch(&self, x: usize) -> Scratch<'a> {
        Scratch {
            filter: self.filter_state(x),
            sweep: SweepState::default(),
            marks: vec![0; self.ds.alphabet().len()],
            stamp: 0,
            cover: Vec::new(),
            stats: EnumStats::default(),
        }
    }

    /// Streams every reported group to `sink` in `(x, i, j)` order; pairs
    /// inside a group are ordered by `(y, k, l)`. Left bounds are processed
    /// in parallel batches on the current rayon pool; the output order does
    /// not depend on the number of threads.
    pub fn for_each_group(&self, mut sink: impl FnMut(PairGroup)) -> Result<EnumStats> {
        let mut stats = EnumStats::default();
        if self.quorum() > self.ds.len() {
            return Ok(stats);
        }
        let batch = self.opts.batch.max(1);
        for x in 0..self.ds.len() {
            let n = self.ds.string(x).len();
            let mut start = 1;
            while start <= n {
                let stop = (start + batch - 1).min(n);
                let results: Vec<(Result<Vec<PairGroup>>, EnumStats)> = (start..=stop)
                    .into_par_iter()
                    .map_init(
                        || self.scratch(x),
                        |scratch, i| {
                            scratch.stats = EnumStats::default();
                            let r = self.process_left_bound(x, i, scratch);
                            (r, scratch.stats)
                        },
                    )
                    .collect();
                for (r, s) in results {
                    stats += s;
                    for g in r? {
                        sink(g);
                    }
                }
                start = stop + 1;
            }
        }
        Ok(stats)
    }

    /// All reported pairs in `(x, i, j, y, k, l)` order.
    pub fn enumerate_pairs(&self) -> Result<Vec<AwciPair>> {
        let mut out = Vec::new();
        self.for_each_group(|g| out.extend(g.pairs))?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle;

    fn enumerator<'a>(
        ds: &'a Dataset,
        idx: &'a PairIndex,
        t: Option<&'a RidgeTables>,
        params: SearchParams,
        filter: bool,
        grouping: bool,
    ) -> Enumerator<'a> {
        Enumerator::new(
            ds,
            idx,
            t,
            params,
            EnumOptions {
                filter,
                quorum_grouping: grouping,
                ..EnumOptions::default()
            },
        )
    }

    #[test]
    fn quorum_bound_picks_q_minus_one_largest() {
        assert_eq!(quorum_bound(&[9, 7], 3), Some(7));
        assert_eq!(quorum_bound(&[9, 7], 2), Some(9));
        assert_eq!(quorum_bound(&[9], 3), None);
    }

    #[test]
    fn pass_through_bounds_clamp_at_break() {
        let ds = Dataset::from_labels(&[
            ("a", (0..8).map(|_| vec!["c"]).collect(), vec![5]),
            ("b", vec![vec!["c"]], vec![]),
        ])
        .unwrap();
        let idx = PairIndex::build(&ds);
        let e = enumerator(&ds, &idx, None, SearchParams::default(), false, true);
        assert_eq!(e.candidate_right_bounds(0, 3, None).unwrap(), 5);
        assert_eq!(e.candidate_right_bounds(0, 6, None).unwrap(), 8);
    }

    #[test]
    fn filtered_bounds_keep_three_genomes_block() {
        let ds = fixtures::three_genomes();
        let idx = PairIndex::build(&ds);
        let t = RidgeTables::build(&ds, &idx, 1);
        let params = SearchParams::new(1, 3, 6).unwrap();
        let e = enumerator(&ds, &idx, Some(&t), params, true, true);
        let mut f = e.filter_state(0);
        assert!(e.candidate_right_bounds(0, 1, f.as_mut()).unwrap() >= 8);
    }

    #[test]
    fn unsatisfiable_quorum_gives_empty_bounds() {
        let ds = fixtures::three_genomes();
        let idx = PairIndex::build(&ds);
        let t = RidgeTables::build(&ds, &idx, 0);
        let params = SearchParams::new(0, 4, 0).unwrap();
        let e = enumerator(&ds, &idx, Some(&t), params, true, true);
        let mut f = e.filter_state(0);
        assert_eq!(e.candidate_right_bounds(0, 1, f.as_mut()).unwrap(), 0);
        assert!(e.enumerate_pairs().unwrap().is_empty());
    }

    #[test]
    fn anchors_of_three_genomes() {
        let ds = fixtures::three_genomes();
        let idx = PairIndex::build(&ds);
        let p0 = SearchParams::new(0, 2, 0).unwrap();
        let e = enumerator(&ds, &idx, None, p0, false, true);
        assert_eq!(e.collect_anchors(0, 2, 1), vec![2]);
        assert!(e.collect_anchors(0, 2, 3).is_empty());
        let p1 = SearchParams::new(1, 2, 0).unwrap();
        let e = enumerator(&ds, &idx, None, p1, false, true);
        assert_eq!(e.collect_anchors(0, 2, 1), vec![2, 4, 6]);
    }

    #[test]
    fn trans_intervals_of_three_genomes() {
        let ds = fixtures::three_genomes();
        let idx = PairIndex::build(&ds);
        let params = SearchParams::new(1, 3, 6).unwrap();
        let e = enumerator(&ds, &idx, None, params, false, true);
        let a = e.collect_anchors(0, 2, 1);
        let ints = e.enumerate_trans_intervals(0, 1, 8, 2, &a, None);
        assert!(ints.contains(&Interval::new(2, 1, 8)));
        let a = e.collect_anchors(0, 1, 1);
        let ints = e.enumerate_trans_intervals(0, 1, 8, 1, &a, None);
        assert!(ints.contains(&Interval::new(1, 2, 7)));
    }

    #[test]
    fn disjoint_alphabets_give_nothing() {
        let ds = Dataset::from_labels(&[
            ("a", vec![vec!["p"], vec!["q"]], vec![]),
            ("b", vec![vec!["u"], vec!["v"]], vec![]),
        ])
        .unwrap();
        let idx = PairIndex::build(&ds);
        let e = enumerator(&ds, &idx, None, SearchParams::new(2, 2, 0).unwrap(), false, true);
        assert!(e.collect_anchors(0, 1, 1).is_empty());
        assert!(e.enumerate_pairs().unwrap().is_empty());
    }

    #[test]
    fn identical_strings_full_length_pair() {
        let labels: Vec<Vec<String>> = (0..6).map(|c| vec![format!("c{c}")]).collect();
        let ds = Dataset::from_labels(&[
            ("a", labels.clone(), vec![]),
            ("b", labels, vec![]),
        ])
        .unwrap();
        let idx = PairIndex::build(&ds);
        let t = RidgeTables::build(&ds, &idx, 0);
        let params = SearchParams::new(0, 2, 0).unwrap();
        let pairs = enumerator(&ds, &idx, Some(&t), params, true, true)
            .enumerate_pairs()
            .unwrap();
        assert!(pairs
            .iter()
            .any(|p| p.left == Interval::new(0, 1, 6) && p.right == Interval::new(1, 1, 6)));
    }

    #[test]
    fn three_genomes_groups_hold_the_block() {
        let ds = fixtures::three_genomes();
        let idx = PairIndex::build(&ds);
        let t = RidgeTables::build(&ds, &idx, 1);
        let params = SearchParams::new(1, 3, 6).unwrap();
        let pairs = enumerator(&ds, &idx, Some(&t), params, true, true)
            .enumerate_pairs()
            .unwrap();
        let has = |a: Interval, b: Interval| pairs.iter().any(|p| p.left == a && p.right == b);
        assert!(has(Interval::new(0, 1, 8), Interval::new(1, 2, 7)));
        assert!(has(Interval::new(0, 1, 8), Interval::new(2, 1, 8)));
        assert!(has(Interval::new(1, 2, 7), Interval::new(2, 1, 8)));
        for p in &pairs {
            let o = oracle::reportable_pair(&ds, &p.left, &p.right, &params).unwrap();
            assert_eq!(o.as_ref(), Some(p));
        }
    }

    #[test]
    fn ungrouped_matches_brute_force_on_three_genomes() {
        let ds = fixtures::three_genomes();
        let idx = PairIndex::build(&ds);
        for delta in 0..3 {
            let t = RidgeTables::build(&ds, &idx, delta);
            for min_size in [0, 1, 3, 6] {
                let params = SearchParams::new(delta, 2, min_size).unwrap();
                let expect = oracle::brute_force_pairs(&ds, &params);
                for filter in [false, true] {
                    let got = enumerator(&ds, &idx, Some(&t), params, filter, false)
                        .enumerate_pairs()
                        .unwrap();
                    assert_eq!(got, expect, "delta={delta} min_size={min_size} filter={filter}");
                }
            }
        }
    }

    #[test]
    fn sweep_state_counts() {
        // reference [2, 4]; rows of three trans positions
        let mut s = SweepState::new(2, 4);
        assert!(s.add(&[1, 2]));
        assert!(!s.add(&[5, 7]));
        assert!(s.add(&[3, 4]));
        assert_eq!(s.covered(), 3);
        assert_eq!(s.misses(), 1);
        assert_eq!(s.indels(), 1);
        assert!(s.accepts(1) && !s.accepts(0));
        s.remove(&[5, 7]);
        assert!(s.accepts(0));
        s.remove(&[3, 4]);
        assert!(!s.hits(3) && s.hits(2));
    }

    #[test]
    fn refinement_examples() {
        let ds = fixtures::three_genomes();
        let idx = PairIndex::build(&ds);
        let t = RidgeTables::build(&ds, &idx, 1);
        let params = SearchParams::new(1, 3, 6).unwrap();
        let e = enumerator(&ds, &idx, Some(&t), params, true, true);
        let anchors: Vec<(usize, Vec<u32>)> =
            [1, 2].iter().map(|&y| (y, e.collect_anchors(0, y, 1))).collect();
        let r = e.refine_bounds(0, 1, 12, &anchors);
        assert!(r.right >= 8);
        assert!(r.rounds >= 1 && r.rounds <= params.refine_iters);

        // no anchors anywhere: the left bound is abandoned
        let r = e.refine_bounds(0, 3, 12, &[(1, vec![]), (2, vec![])]);
        assert!(r.right < 3);
    }
}
