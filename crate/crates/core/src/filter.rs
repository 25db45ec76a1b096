//! Bit-vector filter deciding whether a reference prefix `[i, j]` can still
//! take part in a quorum of approximate weak common intervals.
//!
//! A *ridge* of `S_y` (relative to `S_x`) is a maximal run of positions
//! between trivial indels; ridge ids are the `Ridge^c_yx` levels, pushed
//! apart by `delta + 1` at every contig break of `S_y`. An interval of `S_y`
//! with at most `delta` trivial indels lies in a *window* of `delta + 1`
//! consecutive ridges starting at its own first ridge. Every bit of a
//! `RidgeT` row names one such window; position `j` of `S_x` sets the bit
//! of every window containing a position of `Pos_xy[j]`.
//!
//! Bits are slots, not window ids: a slot is handed to a new window once the
//! window it held was last seen more than `delta` trivial indels (or a
//! contig break) ago, since no filter sweep can reach back that far.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::{PairIndex, RidgeC};
use crate::model::{Dataset, SearchParams};

/// `Ridge^t_xy`: one fixed-width bit vector per position of `S_x`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RidgeT {
    width: usize,
    words: usize,
    bits: Vec<u64>,
}

/// One slot assignment made while building a [`RidgeT`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotEvent {
    pub position: usize,
    pub window: u32,
    pub slot: u32,
}

impl RidgeT {
    /// Number of slots, i.e. the vector width in bits.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> usize {
        self.words
    }

    /// Bit vector of 1-based position `j`.
    #[inline]
    pub fn row(&self, j: usize) -> &[u64] {
        &self.bits[(j - 1) * self.words..j * self.words]
    }

    pub fn is_set(&self, j: usize, slot: usize) -> bool {
        self.row(j)
            .get(slot / 64)
            .is_some_and(|w| w >> (slot % 64) & 1 == 1)
    }

    /// Builds `Ridge^t_xy`; also returns every slot assignment in build order.
    pub fn build_logged(
        ds: &Dataset,
        index: &PairIndex,
        x: usize,
        y: usize,
        delta: usize,
    ) -> (Self, Vec<SlotEvent>) {
        let sx = ds.string(x);
        let sy = ds.string(y);
        let pos_xy = index.pos(x, y);
        let rc_xy = index.ridge_c(x, y);
        let rc_yx = index.ridge_c(y, x);
        let spread = delta as u32 + 1;

        let ridge_id = |k: usize| rc_yx.at(k) + spread * sy.contig_of(k);
        let max_id = if sy.is_empty() { 0 } else { ridge_id(sy.len()) } as usize;
        let mut real = vec![false; max_id + 1];
        for k in 1..=sy.len() {
            if !rc_yx.is_trivial(k) {
                real[ridge_id(k) as usize] = true;
            }
        }

        let mut slot_of: HashMap<u32, u32> = HashMap::new();
        let mut slot_window: Vec<u32> = Vec::new();
        let mut slot_last: Vec<usize> = Vec::new();
        let mut by_last: BTreeSet<(usize, u32)> = BTreeSet::new();
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); sx.len()];
        let mut log = Vec::new();
        let mut windows: Vec<u32> = Vec::new();

        let reachable = |p: usize, j: usize| {
            sx.contig_of(p) == sx.contig_of(j) && rc_xy.count(p, j) <= delta
        };

        for j in 1..=sx.len() {
            windows.clear();
            for &k in pos_xy.row(j) {
                let id = ridge_id(k as usize);
                let lo = id.saturating_sub(delta as u32);
                windows.extend((lo..=id).filter(|&s| real[s as usize]));
            }
            windows.sort_unstable();
            windows.dedup();

            for &w in &windows {
                let slot = match slot_of.get(&w) {
                    Some(&sl) if slot_window[sl as usize] == w => sl,
                    _ => {
                        let free = by_last
                            .first()
                            .copied()
                            .filter(|&(last, _)| !reachable(last, j));
                        let sl = match free {
                            Some((last, sl)) => {
                                by_last.remove(&(last, sl));
                                slot_of.remove(&slot_window[sl as usize]);
                                slot_window[sl as usize] = w;
                                sl
                            }
                            None => {
                                slot_window.push(w);
                                slot_last.push(0);
                                slot_window.len() as u32 - 1
                            }
                        };
                        slot_of.insert(w, sl);
                        sl
                    }
                };
                let last = &mut slot_last[slot as usize];
                if *last != 0 {
                    by_last.remove(&(*last, slot));
                }
                *last = j;
                by_last.insert((j, slot));
                rows[j - 1].push(slot);
                log.push(SlotEvent {
                    position: j,
                    window: w,
                    slot,
                });
            }
        }

        let width = slot_window.len();
        let words = width.div_ceil(64).max(1);
        let mut bits = vec![0u64; sx.len() * words];
        for (p, slots) in rows.iter().enumerate() {
            for &sl in slots {
                bits[p * words + sl as usize / 64] |= 1 << (sl % 64);
            }
        }
        (Self { width, words, bits }, log)
    }

    pub fn build(ds: &Dataset, index: &PairIndex, x: usize, y: usize, delta: usize) -> Self {
        Self::build_logged(ds, index, x, y, delta).0
    }
}

/// `Ridge^t` for every ordered pair at one indel budget.
#[derive(Debug, Clone)]
pub struct RidgeTables {
    m: usize,
    delta: usize,
    tables: Vec<RidgeT>,
}

impl RidgeTables {
    pub fn build(ds: &Dataset, index: &PairIndex, delta: usize) -> Self {
        let m = ds.len();
        let tables = (0..m * m)
            .into_par_iter()
            .map(|cell| {
                let (x, y) = (cell / m, cell % m);
                if x == y {
                    RidgeT::default()
                } else {
                    RidgeT::build(ds, index, x, y, delta)
                }
            })
            .collect();
        Self { m, delta, tables }
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &RidgeT {
        &self.tables[x * self.m + y]
    }

    /// `(x, y, width)` for every ordered pair.
    pub fn widths(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.m {
            for y in 0..self.m {
                if x != y {
                    out.push((x, y, self.get(x, y).width()));
                }
            }
        }
        out
    }
}

/// Per-trans-string scratch vectors: `Active^t[y]` and the saturating
/// counters `Delta^t[y][0..=delta]`, where bit `r` of `Delta[t]` means
/// window `r` has accumulated more than `t` indels.
#[derive(Debug, Clone)]
struct TransState {
    active: Vec<u64>,
    levels: Vec<Vec<u64>>,
    dead: bool,
}

/// Sweep state for one reference string and one left bound.
///
/// Owned by a single worker; reset whenever the left bound moves.
#[derive(Debug)]
pub struct FilterState<'a> {
    ds: &'a Dataset,
    index: &'a PairIndex,
    tables: &'a RidgeTables,
    params: SearchParams,
    x: usize,
    left: usize,
    next: usize,
    exhausted: bool,
    trans: Vec<TransState>,
    calls: u64,
}

impl<'a> FilterState<'a> {
    pub fn new(
        ds: &'a Dataset,
        index: &'a PairIndex,
        tables: &'a RidgeTables,
        params: SearchParams,
        x: usize,
    ) -> Self {
        let delta = tables.delta();
        let trans = (0..ds.len())
            .map(|y| {
                let words = if y == x { 0 } else { tables.get(x, y).words() };
                TransState {
                    active: vec![0; words],
                    levels: vec![vec![0; words]; delta + 1],
                    dead: y == x,
                }
            })
            .collect();
        Self {
            ds,
            index,
            tables,
            params,
            x,
            left: 0,
            next: 0,
            exhausted: true,
            trans,
            calls: 0,
        }
    }

    /// Clears every vector and starts a sweep at left bound `i`.
    pub fn reset(&mut self, i: usize) {
        let x = self.x;
        self.left = i;
        self.next = i;
        self.exhausted = false;
        for (y, t) in self.trans.iter_mut().enumerate() {
            t.active.iter_mut().for_each(|w| *w = 0);
            for level in &mut t.levels {
                level.iter_mut().for_each(|w| *w = 0);
            }
            // an anchored interval starting at i must meet S_y at i
            t.dead = y == x || self.index.ridge_c(x, y).is_trivial(i);
        }
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    /// Feeds position `j` (must be the successor of the previous call, or
    /// the left bound right after a reset) and reports whether `[i, j]` can
    /// still meet the quorum.
    pub fn filter_position(&mut self, j: usize) -> Result<bool> {
        if self.next == 0 || j != self.next {
            return Err(Error::Contract(format!(
                "filter expected position {} after left bound {}, got {j}",
                self.next, self.left
            )));
        }
        self.next += 1;
        self.calls += 1;
        if self.exhausted {
            return Ok(false);
        }
        let need = self.params.quorum - 1;
        let i = self.left;
        let x = self.x;
        let sx = self.ds.string(x);
        if j > sx.len() || sx.contig_of(j) != sx.contig_of(i) {
            self.exhausted = true;
            return Ok(false);
        }
        let delta = self.tables.delta();

        let mut candidates = 0;
        for y in 0..self.trans.len() {
            if self.trans[y].dead {
                continue;
            }
            let rc: &RidgeC = self.index.ridge_c(x, y);
            let trivial_ref = rc.count(i, j);
            if trivial_ref > delta {
                self.trans[y].dead = true;
                continue;
            }
            // levels index d - 1 for d = delta + 1 - trivial_ref
            let mask = delta - trivial_ref;
            let state = &mut self.trans[y];
            if !rc.is_trivial(j) {
                let row = self.tables.get(x, y).row(j);
                let charge = if j > i { (j - i) - rc.count(i, j - 1) } else { 0 };
                let charged_levels = charge.min(delta + 1);
                for (w, &present) in row.iter().enumerate() {
                    let active = state.active[w];
                    let mut off = active & !present & !state.levels[delta][w];
                    let new = present & !active;
                    for level in state.levels.iter_mut() {
                        let carry = level[w] & off;
                        level[w] |= off;
                        off = carry;
                    }
                    for level in state.levels.iter_mut().take(charged_levels) {
                        level[w] |= new;
                    }
                    state.active[w] = active | present;
                }
            }
            let alive = state
                .active
                .iter()
                .zip(&state.levels[mask])
                .any(|(a, over)| a & !over != 0);
            if alive {
                candidates += 1;
            }
        }
        let pass = candidates >= need;
        if !pass {
            self.exhausted = true;
        }
        Ok(pass)
    }

    /// Active and counter bits of trans string `y`, for inspection.
    pub fn snapshot(&self, y: usize) -> (Vec<u64>, Vec<Vec<u64>>) {
        (self.trans[y].active.clone(), self.trans[y].levels.clone())
    }
}
