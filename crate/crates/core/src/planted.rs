//! Synthetic genomes with planted conserved blocks.
//!
//! Block `b` has `block_length` slots; slot `t` carries the character
//! `b<b>.<t>` in every genome. In one genome per block, `planted_delta`
//! positions without block characters are inserted strictly inside the
//! block. Every position also carries a private character, and background
//! positions draw a shared pool character with probability
//! `background_sharing`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assemble::AwciSet;
use crate::error::{Error, Result};
use crate::model::{Alphabet, Dataset, IndeterminateString, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    /// genomes
    pub m: usize,
    /// positions per genome
    pub n: usize,
    /// size of the shared background pool
    pub alphabet: usize,
    pub block_count: usize,
    pub block_length: usize,
    pub planted_delta: usize,
    pub background_sharing: f64,
    /// contigs per genome
    pub contigs: usize,
    /// place blocks in a random order per genome
    pub shuffle_blocks: bool,
    pub seed: u64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        Self {
            m: 3,
            n: 200,
            alphabet: 64,
            block_count: 3,
            block_length: 8,
            planted_delta: 0,
            background_sharing: 0.05,
            contigs: 1,
            shuffle_blocks: true,
            seed: 0,
        }
    }
}

impl PlantedSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Validation(msg));
        if self.m < 2 {
            return bad(format!("need at least 2 genomes, got {}", self.m));
        }
        if self.block_count > 0 && self.block_length == 0 {
            return bad("blocks need a positive length".into());
        }
        if self.planted_delta > 0 && self.block_length < 2 {
            return bad("indels go strictly inside a block, which needs 2 slots".into());
        }
        if !(0.0..=1.0).contains(&self.background_sharing) {
            return bad(format!("background sharing {} is not a probability", self.background_sharing));
        }
        if self.background_sharing > 0.0 && self.alphabet == 0 {
            return bad("background sharing needs a non-empty pool".into());
        }
        if self.contigs == 0 {
            return bad("need at least one contig".into());
        }
        // one background position between neighbouring blocks
        let need = self.block_count * (self.block_length + self.planted_delta)
            + self.block_count.saturating_sub(1);
        if need > self.n {
            return bad(format!(
                "{} blocks of length {} (+{} indels) need {need} positions, genomes have {}",
                self.block_count, self.block_length, self.planted_delta, self.n
            ));
        }
        let cuttable = self.n - 1 - self.block_count * (self.block_length + self.planted_delta - 1);
        if self.contigs - 1 > cuttable {
            return bad(format!("cannot place {} contig breaks outside blocks", self.contigs - 1));
        }
        Ok(())
    }
}

/// A generated dataset and the intervals of its planted blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Planted {
    pub dataset: Dataset,
    /// one closed set per block, members in every genome
    pub truth: Vec<AwciSet>,
}

pub fn generate_planted(spec: &PlantedSpec) -> Result<Planted> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut alphabet = Alphabet::new();
    let gapped: Vec<usize> = (0..spec.block_count).map(|_| rng.gen_range(0..spec.m)).collect();
    let mut spans = vec![Vec::new(); spec.block_count];
    let mut strings = Vec::with_capacity(spec.m);

    for x in 0..spec.m {
        let lens: Vec<usize> = (0..spec.block_count)
            .map(|b| spec.block_length + if gapped[b] == x { spec.planted_delta } else { 0 })
            .collect();
        let mut order: Vec<usize> = (0..spec.block_count).collect();
        if spec.shuffle_blocks {
            order.shuffle(&mut rng);
        }
        // background positions split into block_count + 1 gaps, inner gaps non-empty
        let background = spec.n - lens.iter().sum::<usize>();
        let inner = spec.block_count.saturating_sub(1);
        let mut gaps = vec![0usize; spec.block_count + 1];
        for g in gaps.iter_mut().take(spec.block_count).skip(1) {
            *g = 1;
        }
        for _ in 0..background - inner {
            let g = rng.gen_range(0..gaps.len());
            gaps[g] += 1;
        }

        let mut sets: Vec<Vec<String>> = Vec::with_capacity(spec.n);
        let mut in_block = vec![false; spec.n + 1];
        let background_pos = |sets: &mut Vec<Vec<String>>, rng: &mut ChaCha8Rng| {
            let mut s = vec![format!("p{}.{}", x, sets.len() + 1)];
            if spec.background_sharing > 0.0 && rng.gen_bool(spec.background_sharing) {
                s.push(format!("s{}", rng.gen_range(0..spec.alphabet)));
            }
            sets.push(s);
        };
        for (slot, &b) in order.iter().enumerate() {
            for _ in 0..gaps[slot] {
                background_pos(&mut sets, &mut rng);
            }
            let start = sets.len() + 1;
            let mut inserts = vec![0usize; spec.block_length];
            if gapped[b] == x {
                for _ in 0..spec.planted_delta {
                    // after slot t, t < block_length - 1
                    inserts[rng.gen_range(0..spec.block_length - 1)] += 1;
                }
            }
            for t in 0..spec.block_length {
                sets.push(vec![format!("b{b}.{t}"), format!("p{}.{}", x, sets.len() + 1)]);
                for _ in 0..inserts[t] {
                    sets.push(vec![format!("p{}.{}", x, sets.len() + 1)]);
                }
            }
            let end = sets.len();
            for p in start..end {
                in_block[p] = true;
            }
            spans[b].push(Interval::new(x, start, end));
        }
        for _ in 0..gaps[spec.block_count] {
            background_pos(&mut sets, &mut rng);
        }
        debug_assert_eq!(sets.len(), spec.n);

        // a break after p must not split a block
        let mut cuts: Vec<usize> = (1..spec.n).filter(|&p| !in_block[p]).collect();
        cuts.shuffle(&mut rng);
        let mut breaks: Vec<usize> = cuts.into_iter().take(spec.contigs - 1).collect();
        breaks.sort_unstable();
        strings.push(IndeterminateString::from_labels(
            &mut alphabet,
            format!("G{}", x + 1),
            &sets,
            breaks,
        )?);
    }
    let mut dataset = Dataset::new(alphabet);
    for s in strings {
        dataset.push(s)?;
    }
    let mut truth: Vec<AwciSet> = spans
        .into_iter()
        .map(|members| AwciSet::new(&dataset, members, true))
        .collect();
    truth.sort();
    Ok(Planted { dataset, truth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn blocks_are_closed_sets_with_planted_indels() {
        for seed in 0..20 {
            let spec = PlantedSpec {
                m: 4,
                n: 80,
                planted_delta: 2,
                contigs: 3,
                seed,
                ..PlantedSpec::default()
            };
            let p = generate_planted(&spec).unwrap();
            assert_eq!(p.truth.len(), 3);
            for set in &p.truth {
                assert_eq!(set.len(), 4);
                assert!(oracle::is_closed_set(&p.dataset, &set.members).unwrap());
                assert!(oracle::is_awci_set(&p.dataset, &set.members, 2).unwrap());
                assert!(!oracle::is_awci_set(&p.dataset, &set.members, 1).unwrap());
                for iv in &set.members {
                    let s = p.dataset.string(iv.string);
                    assert_eq!(s.contig_of(iv.start), s.contig_of(iv.end));
                }
            }
        }
    }

    #[test]
    fn generation_is_seeded() {
        let spec = PlantedSpec::default();
        assert_eq!(generate_planted(&spec).unwrap(), generate_planted(&spec).unwrap());
        let other = PlantedSpec { seed: 1, ..spec };
        assert_ne!(generate_planted(&spec).unwrap().dataset, generate_planted(&other).unwrap().dataset);
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        let spec = PlantedSpec {
            n: 10,
            block_count: 3,
            block_length: 4,
            ..PlantedSpec::default()
        };
        assert!(matches!(generate_planted(&spec), Err(Error::Validation(_))));
    }

    #[test]
    fn no_blocks_no_sharing_no_pairs() {
        let spec = PlantedSpec {
            block_count: 0,
            background_sharing: 0.0,
            ..PlantedSpec::default()
        };
        let p = generate_planted(&spec).unwrap();
        let params = crate::model::SearchParams::new(1, 2, 1).unwrap();
        let pairs = crate::pipeline::find_pairs(&p.dataset, &params, &Default::default()).unwrap();
        assert!(pairs.is_empty());
    }
}
