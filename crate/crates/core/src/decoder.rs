//! Interpreting physical measurement results.
//!
//! A minimal readout set is built by walking the plaquette adjacency
//! graph (plaquettes sharing a qubit are adjacent): each visited plaquette
//! sends all but one of its unmarked qubits to the readout set and deduces
//! the last one from the plaquette parity. Majority voting over several
//! such sets gives simple error correction before the decode matrix is
//! applied.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::ParityCode;
use crate::layout::Layout;

/// A partition of the placed qubits into directly-measured and deduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadoutSet {
    /// Qubits whose values are taken from the measurement.
    pub read_out: Vec<usize>,
    /// Deduced qubits in deduction order, each with the plaquette used.
    pub determined: Vec<(usize, usize)>,
}

/// Result of majority-vote decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub logical: Vec<u8>,
    /// Logical bits whose vote was an exact tie (resolved to 0).
    pub ties: Vec<usize>,
    /// Number of plaquettes violated by the raw word.
    pub syndrome_weight: usize,
}

/// Walk the plaquette graph from `start` and partition the qubits.
///
/// Among the unvisited neighbors the one with the fewest (but nonzero)
/// unmarked qubits is visited first — plaquettes close to fully marked
/// starve otherwise; ties are broken by the seeded generator. The deduced
/// qubit of a visited plaquette is its highest-index unmarked member. A
/// plaquette whose qubits are all marked at visit time deduces nothing.
/// Disconnected components are entered at their lowest-index plaquette.
pub fn build_readout_set(layout: &Layout, start: usize, seed: u64) -> ReadoutSet {
    let plaquettes = &layout.plaquettes;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut marked = vec![false; layout.num_physical];
    for &q in &layout.fixed {
        marked[q] = true; // pinned qubits are known constants
    }
    let mut visited = vec![false; plaquettes.len()];
    let mut read_out = Vec::new();
    let mut determined = Vec::new();

    let visit = |pi: usize,
                     marked: &mut Vec<bool>,
                     read_out: &mut Vec<usize>,
                     determined: &mut Vec<(usize, usize)>| {
        let unmarked: Vec<usize> = plaquettes[pi]
            .qubits
            .iter()
            .copied()
            .filter(|&q| !marked[q])
            .collect();
        if let Some((&last, rest)) = unmarked.split_last() {
            for &q in rest {
                marked[q] = true;
                read_out.push(q);
            }
            marked[last] = true;
            determined.push((last, pi));
        }
    };

    if !plaquettes.is_empty() {
        let start = start % plaquettes.len();
        visited[start] = true;
        visit(start, &mut marked, &mut read_out, &mut determined);
        loop {
            // neighbors of the visited region
            let mut candidates: Vec<(usize, usize)> = (0..plaquettes.len())
                .filter(|&pi| !visited[pi])
                .filter(|&pi| {
                    plaquettes[pi].qubits.iter().any(|q| {
                        plaquettes
                            .iter()
                            .enumerate()
                            .any(|(pj, p)| visited[pj] && p.qubits.contains(q))
                    })
                })
                .map(|pi| {
                    let unmarked = plaquettes[pi]
                        .qubits
                        .iter()
                        .filter(|&&q| !marked[q])
                        .count();
                    (pi, unmarked)
                })
                .collect();
            if candidates.is_empty() {
                // next connected component, if any
                match (0..plaquettes.len()).find(|&pi| !visited[pi]) {
                    Some(pi) => {
                        visited[pi] = true;
                        visit(pi, &mut marked, &mut read_out, &mut determined);
                        continue;
                    }
                    None => break,
                }
            }
            let positive_min = candidates
                .iter()
                .map(|&(_, u)| u)
                .filter(|&u| u > 0)
                .min();
            let target = positive_min.unwrap_or(0);
            candidates.retain(|&(_, u)| u == target);
            let pick = candidates[rng.gen_range(0..candidates.len())].0;
            visited[pick] = true;
            visit(pick, &mut marked, &mut read_out, &mut determined);
        }
    }

    // qubits in no plaquette are always read out
    for q in 0..layout.num_physical {
        if !marked[q] {
            read_out.push(q);
            marked[q] = true;
        }
    }
    ReadoutSet { read_out, determined }
}

/// Rebuild a full physical word from the readout bits of `w`, deducing
/// the determined qubits from their plaquette parities. Pinned qubits are
/// zero. For clean codewords this reproduces `w` exactly.
pub fn reconstruct(layout: &Layout, set: &ReadoutSet, w: &[u8]) -> Vec<u8> {
    assert_eq!(w.len(), layout.num_physical, "word length");
    let mut out = vec![0u8; layout.num_physical];
    for &q in &set.read_out {
        out[q] = w[q] & 1;
    }
    for &(q, pi) in &set.determined {
        let parity: u8 = layout.plaquettes[pi]
            .qubits
            .iter()
            .filter(|&&m| m != q)
            .fold(0, |acc, &m| acc ^ out[m]);
        out[q] = parity;
    }
    out
}

/// Decode `w` through `num_sets` sampled readout sets (uniformly random
/// start plaquette, seeded neighbor shuffles), one logical assignment per
/// set.
pub fn sample_decodes(
    code: &ParityCode,
    layout: &Layout,
    w: &[u8],
    num_sets: usize,
    seed: u64,
) -> Vec<Vec<u8>> {
    assert_eq!(w.len(), layout.num_physical, "word length");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_sets)
        .map(|_| {
            let start = if layout.plaquettes.is_empty() {
                0
            } else {
                rng.gen_range(0..layout.plaquettes.len())
            };
            let set_seed: u64 = rng.gen();
            let set = build_readout_set(layout, start, set_seed);
            let word = reconstruct(layout, &set, w);
            code.decode_word(&word)
        })
        .collect()
}

/// Per-bit majority over [`sample_decodes`]. Ties resolve to 0 and are
/// flagged. Total for any input word; on clean codewords every set agrees
/// with the plain decode.
pub fn correct_and_decode(
    code: &ParityCode,
    layout: &Layout,
    w: &[u8],
    num_sets: usize,
    seed: u64,
) -> DecodeOutcome {
    assert!(num_sets >= 1, "at least one readout set");
    let syndrome_weight = layout
        .plaquettes
        .iter()
        .filter(|p| p.qubits.iter().fold(0u8, |acc, &q| acc ^ (w[q] & 1)) == 1)
        .count();
    let n = code.num_logical();
    let mut ones = vec![0usize; n];
    for v in sample_decodes(code, layout, w, num_sets, seed) {
        for (i, &b) in v.iter().enumerate() {
            ones[i] += b as usize;
        }
    }
    let mut logical = vec![0u8; n];
    let mut ties = Vec::new();
    for i in 0..n {
        let zeros = num_sets - ones[i];
        if ones[i] > zeros {
            logical[i] = 1;
        } else if ones[i] == zeros {
            ties.push(i);
        }
    }
    DecodeOutcome {
        logical,
        ties,
        syndrome_weight,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{lay_out, LayoutOptions};
    use crate::problem::five_qubit_example;
    use crate::projector::{build_projector_set, ProjectorMode, ProjectorSet};

    fn example() -> (crate::problem::LogicalProblem, ParityCode, Layout) {
        let problem = five_qubit_example();
        let code = ParityCode::from_problem(&problem).unwrap();
        let set = build_projector_set(code.check(), ProjectorMode::Plaquette);
        let layout = lay_out(&set, &LayoutOptions::default()).unwrap();
        (problem, code, layout)
    }

    #[test]
    fn readout_sizes_for_example_layout() {
        let (_, _, layout) = example();
        for seed in 0..8u64 {
            for start in 0..2usize {
                let set = build_readout_set(&layout, start, seed);
                assert_eq!(set.read_out.len(), 4, "6 qubits minus 2 plaquettes");
                assert_eq!(set.determined.len(), 2);
                let mut all: Vec<usize> = set.read_out.clone();
                all.extend(set.determined.iter().map(|&(q, _)| q));
                all.sort_unstable();
                assert_eq!(all, (0..6).collect::<Vec<_>>(), "partition covers all qubits");
            }
        }
    }

    #[test]
    fn single_triangle_readout() {
        let set = ProjectorSet {
            projectors: vec![vec![0, 1, 2]],
            ancillas: vec![],
            fixed: vec![],
            check_cols: 3,
            num_physical: 3,
        };
        let layout = lay_out(&set, &LayoutOptions::default()).unwrap();
        let rs = build_readout_set(&layout, 0, 0);
        assert_eq!(rs.read_out.len(), 2);
        assert_eq!(rs.determined.len(), 1);
    }

    #[test]
    fn reconstruction_reproduces_clean_codewords() {
        let (_, code, layout) = example();
        for v_bits in 0u32..32 {
            let v: Vec<u8> = (0..5).map(|q| (v_bits >> q & 1) as u8).collect();
            let w = code.encode(&v);
            for seed in 0..5u64 {
                let set = build_readout_set(&layout, (seed % 2) as usize, seed);
                assert_eq!(reconstruct(&layout, &set, &w), w);
            }
        }
    }

    #[test]
    fn clean_codeword_decodes_unanimously() {
        let (_, code, layout) = example();
        let v = vec![1u8, 0, 1, 0, 0];
        let w = code.encode(&v);
        let plain = code.decode_word(&w);
        for num_sets in [1, 3, 7] {
            let out = correct_and_decode(&code, &layout, &w, num_sets, 42);
            assert_eq!(out.logical, plain);
            assert_eq!(out.syndrome_weight, 0);
            assert!(out.ties.is_empty());
        }
    }

    #[test]
    fn garbage_input_still_decodes() {
        let (_, code, layout) = example();
        // violate every plaquette by flipping one qubit per plaquette
        let mut w = vec![0u8; 6];
        for p in &layout.plaquettes {
            w[p.qubits[0]] ^= 1;
        }
        let out = correct_and_decode(&code, &layout, &w, 5, 0);
        assert_eq!(out.logical.len(), 5);
        assert!(out.syndrome_weight > 0);
    }

    #[test]
    fn qubits_outside_plaquettes_are_read_out() {
        let set = ProjectorSet {
            projectors: vec![vec![0, 1, 2]],
            ancillas: vec![],
            fixed: vec![],
            check_cols: 5,
            num_physical: 5,
        };
        let layout = lay_out(&set, &LayoutOptions::default()).unwrap();
        let rs = build_readout_set(&layout, 0, 7);
        assert!(rs.read_out.contains(&3));
        assert!(rs.read_out.contains(&4));
    }

    #[test]
    fn single_bit_flips_heal_when_flipped_qubit_is_determined() {
        // a readout set that deduces the flipped qubit rebuilds the clean
        // word from the plaquette parity instead of reading the flip
        let (_, code, layout) = example();
        let v = vec![0u8, 1, 0, 0, 1];
        let clean = code.encode(&v);
        for flip in 0..6usize {
            let mut w = clean.clone();
            w[flip] ^= 1;
            for seed in 0..6u64 {
                let set = build_readout_set(&layout, (seed % 2) as usize, seed);
                if set.determined.iter().any(|&(q, _)| q == flip) {
                    assert_eq!(reconstruct(&layout, &set, &w), clean);
                }
            }
        }
    }

    #[test]
    fn majority_vote_equals_per_bit_majority_of_samples() {
        // the full enumeration of single-bit corruptions, checked against
        // the exposed per-set decodes; the recovery rate against ground
        // truth is reported
        let (_, code, layout) = example();
        let v = vec![0u8, 1, 0, 0, 1];
        let clean = code.encode(&v);
        let truth = code.decode_word(&clean);
        let num_sets = 7;
        let mut recovered = 0usize;
        for flip in 0..6usize {
            let mut w = clean.clone();
            w[flip] ^= 1;
            let out = correct_and_decode(&code, &layout, &w, num_sets, 123);
            let samples = sample_decodes(&code, &layout, &w, num_sets, 123);
            for bit in 0..truth.len() {
                let ones = samples.iter().filter(|s| s[bit] == 1).count();
                let expected = match ones.cmp(&(num_sets - ones)) {
                    std::cmp::Ordering::Greater => 1,
                    _ => 0,
                };
                assert_eq!(out.logical[bit], expected);
            }
            assert!(out.syndrome_weight > 0, "flips must show up in the syndrome");
            if out.logical == truth {
                recovered += 1;
            }
        }
        // this layout has two plaquettes, so exactly the two deduced
        // qubits can heal; flips there recover, the read-out ones cannot
        println!("single-flip recovery rate: {recovered}/6");
        assert_eq!(recovered, 2);
    }
}
