//! Per ordered string pair tables: intersection positions and cumulative
//! trivial-indel counts.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::Dataset;

/// `row(i)` lists, in increasing order, the positions `k` of the second
/// string whose set meets position `i` of the first string.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosTable {
    offsets: Vec<u32>,
    data: Vec<u32>,
}

impl PosTable {
    /// Row of 1-based position `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[self.offsets[i - 1] as usize..self.offsets[i] as usize]
    }

    /// Row of `i` restricted to positions in `[lo, hi]`.
    #[inline]
    pub fn row_in(&self, i: usize, lo: usize, hi: usize) -> &[u32] {
        let row = self.row(i);
        let a = row.partition_point(|&k| (k as usize) < lo);
        let b = row.partition_point(|&k| (k as usize) <= hi);
        &row[a..b]
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total number of listed positions.
    pub fn entries(&self) -> usize {
        self.data.len()
    }
}

/// Prefix counts of trivial indels: `prefix[p]` is the number of positions
/// `p' <= p` of the first string whose set misses the whole second string.
/// `prefix[0] == 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RidgeC {
    prefix: Vec<u32>,
    /// contig index per position, slot 0 unused
    contig: Vec<u32>,
}

impl RidgeC {
    #[inline]
    pub fn at(&self, p: usize) -> u32 {
        self.prefix[p]
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position `p` misses the other string entirely.
    #[inline]
    pub fn is_trivial(&self, p: usize) -> bool {
        self.prefix[p] != self.prefix[p - 1]
    }

    /// Number of trivial indels in `[i, j]`.
    #[inline]
    pub fn count(&self, i: usize, j: usize) -> usize {
        (self.prefix[j] - self.prefix[i - 1]) as usize
    }

    /// `[i, j]` holds at most `delta` trivial indels and no contig barrier.
    pub fn same_ridge(&self, i: usize, j: usize, delta: usize) -> Result<bool> {
        if i < 1 || i > j || j > self.len() {
            return Err(Error::Range {
                start: i,
                end: j,
                len: self.len(),
            });
        }
        if self.contig[i] != self.contig[j] {
            return Ok(false);
        }
        Ok(self.count(i, j) <= delta)
    }
}

/// Intersection and trivial-indel tables for every ordered pair of strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairIndex {
    m: usize,
    pos: Vec<PosTable>,
    ridge_c: Vec<RidgeC>,
}

/// Positions of every character in one string, bucketed by character.
struct Occurrences {
    offsets: Vec<u32>,
    data: Vec<u32>,
}

impl Occurrences {
    fn build(ds: &Dataset, y: usize) -> Self {
        let s = ds.string(y);
        let sigma = ds.alphabet().len();
        let mut counts = vec![0u32; sigma + 1];
        for set in s.positions() {
            for c in set {
                counts[c.index() + 1] += 1;
            }
        }
        for c in 0..sigma {
            counts[c + 1] += counts[c];
        }
        let mut fill = counts.clone();
        let mut data = vec![0u32; s.cardinality()];
        for (p, set) in s.positions().iter().enumerate() {
            for c in set {
                data[fill[c.index()] as usize] = p as u32 + 1;
                fill[c.index()] += 1;
            }
        }
        Self {
            offsets: counts,
            data,
        }
    }

    fn of(&self, c: usize) -> &[u32] {
        &self.data[self.offsets[c] as usize..self.offsets[c + 1] as usize]
    }
}

fn build_pos_table(ds: &Dataset, x: usize, occ: &Occurrences, stamp: &mut Vec<u32>) -> PosTable {
    let sx = ds.string(x);
    let mut offsets = Vec::with_capacity(sx.len() + 1);
    offsets.push(0u32);
    let mut data = Vec::new();
    for (p, set) in sx.positions().iter().enumerate() {
        let start = data.len();
        let tag = p as u32 + 1;
        for c in set {
            for &k in occ.of(c.index()) {
                let slot = &mut stamp[k as usize];
                if *slot != tag {
                    *slot = tag;
                    data.push(k);
                }
            }
        }
        data[start..].sort_unstable();
        offsets.push(data.len() as u32);
    }
    PosTable { offsets, data }
}

fn build_ridge_c(ds: &Dataset, x: usize, pos: &PosTable) -> RidgeC {
    let sx = ds.string(x);
    let mut prefix = Vec::with_capacity(sx.len() + 1);
    let mut contig = Vec::with_capacity(sx.len() + 1);
    prefix.push(0u32);
    contig.push(0u32);
    let mut acc = 0u32;
    for p in 1..=sx.len() {
        if pos.row(p).is_empty() {
            acc += 1;
        }
        prefix.push(acc);
        contig.push(sx.contig_of(p));
    }
    RidgeC { prefix, contig }
}

impl PairIndex {
    /// Builds Pos and RidgeC tables for all ordered pairs; pairs are built
    /// concurrently on the current rayon pool.
    pub fn build(ds: &Dataset) -> Self {
        let m = ds.len();
        let occ: Vec<Occurrences> = (0..m).into_par_iter().map(|y| Occurrences::build(ds, y)).collect();
        let cells: Vec<(PosTable, RidgeC)> = (0..m * m)
            .into_par_iter()
            .map_init(Vec::new, |stamp, cell| {
                let (x, y) = (cell / m, cell % m);
                if x == y {
                    return (PosTable::default(), RidgeC::default());
                }
                stamp.clear();
                stamp.resize(ds.string(y).len() + 1, 0);
                let pos = build_pos_table(ds, x, &occ[y], stamp);
                let rc = build_ridge_c(ds, x, &pos);
                (pos, rc)
            })
            .collect();
        let (pos, ridge_c) = cells.into_iter().unzip();
        Self { m, pos, ridge_c }
    }

    pub fn num_strings(&self) -> usize {
        self.m
    }

    /// `Pos_xy`.
    #[inline]
    pub fn pos(&self, x: usize, y: usize) -> &PosTable {
        debug_assert_ne!(x, y);
        &self.pos[x * self.m + y]
    }

    /// `Ridge^c_xy`.
    #[inline]
    pub fn ridge_c(&self, x: usize, y: usize) -> &RidgeC {
        debug_assert_ne!(x, y);
        &self.ridge_c[x * self.m + y]
    }
}

const CACHE_MAGIC: &[u8; 8] = b"AWCIIDX\0";
const CACHE_VERSION: u32 = 1;

/// SHA-256 over a canonical encoding of the dataset (ids, sets, breaks).
pub fn dataset_digest(ds: &Dataset) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update((ds.len() as u64).to_le_bytes());
    for s in ds.strings() {
        h.update((s.id().len() as u64).to_le_bytes());
        h.update(s.id().as_bytes());
        h.update((s.len() as u64).to_le_bytes());
        for set in s.positions() {
            h.update((set.len() as u64).to_le_bytes());
            for c in set {
                h.update(ds.alphabet().label(*c).as_bytes());
                h.update([0u8]);
            }
        }
        h.update((s.breaks().len() as u64).to_le_bytes());
        for b in s.breaks() {
            h.update((*b as u64).to_le_bytes());
        }
    }
    h.finalize().into()
}

/// Writes `index` to `path` behind a versioned header keyed by the dataset digest.
pub fn save_cache(path: &Path, ds: &Dataset, index: &PairIndex) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&dataset_digest(ds))?;
    bincode::serialize_into(&mut w, index)
        .map_err(|e| Error::Validation(format!("cannot encode index cache: {e}")))?;
    w.flush()?;
    Ok(())
}

/// Loads a cached index; `Ok(None)` when the file is missing, from another
/// version, or built for different dataset content.
pub fn load_cache(path: &Path, ds: &Dataset) -> Result<Option<PairIndex>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut r = BufReader::new(file);
    let mut header = [0u8; 8 + 4 + 32];
    if r.read_exact(&mut header).is_err() {
        return Ok(None);
    }
    if &header[..8] != CACHE_MAGIC
        || header[8..12] != CACHE_VERSION.to_le_bytes()
        || header[12..] != dataset_digest(ds)
    {
        return Ok(None);
    }
    match bincode::deserialize_from::<_, PairIndex>(&mut r) {
        Ok(index) if index.m == ds.len() => Ok(Some(index)),
        _ => Ok(None),
    }
}

/// Loads the cache at `path` or builds the index and refreshes the cache.
pub fn load_or_build(path: &Path, ds: &Dataset) -> Result<PairIndex> {
    if let Some(index) = load_cache(path, ds)? {
        return Ok(index);
    }
    let index = PairIndex::build(ds);
    save_cache(path, ds, &index)?;
    Ok(index)
}
