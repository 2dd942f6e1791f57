//! Reshaping the check matrix into physically realizable projectors.
//!
//! Plaquette hardware constrains 3 or 4 spins per grid cell, so check rows
//! must be brought to Hamming weight 3 or 4 by row operations; failing
//! that, long rows are split with ancilla qubits, each split adding one
//! projector row. Weight-1 rows pin a parity qubit to a constant and
//! weight-2 rows are kept as two-body couplings.

use crate::gf2::BitMatrix;

/// Candidate-evaluation budget for the row-combination search.
const REDUCE_BUDGET: usize = 100_000;

/// An extra physical qubit standing in for the product of other qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncillaRecord {
    /// Column index of the ancilla, `≥ K`.
    pub physical_index: usize,
    /// Physical qubits whose product the ancilla represents.
    pub definition: Vec<usize>,
}

/// Target weight bounds per device type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorMode {
    /// Square/triangle couplers: weights 3–4, with 2 admitted as an
    /// edge coupling.
    Plaquette,
    /// CNOT chains: any weight up to `max_len`.
    Cnot { max_len: usize },
}

impl ProjectorMode {
    fn weight_ranges(self) -> Vec<(usize, usize)> {
        match self {
            ProjectorMode::Plaquette => vec![(3, 4), (2, 4)],
            ProjectorMode::Cnot { max_len } => vec![(2, max_len)],
        }
    }

    fn max_weight(self) -> usize {
        match self {
            ProjectorMode::Plaquette => 4,
            ProjectorMode::Cnot { max_len } => max_len,
        }
    }
}

/// The physically realizable constraint system derived from a check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorSet {
    /// Sorted parity-qubit index sets, one per projector row.
    pub projectors: Vec<Vec<usize>>,
    pub ancillas: Vec<AncillaRecord>,
    /// Parity qubits pinned to bit 0 by weight-1 check rows. They drop out
    /// of the layout; their fields fold into a constant energy offset.
    pub fixed: Vec<usize>,
    /// Original check width K.
    pub check_cols: usize,
    /// Total physical columns: K plus the ancilla count.
    pub num_physical: usize,
}

impl ProjectorSet {
    /// Projector rows plus pinned-qubit rows as a matrix over all
    /// physical columns.
    pub fn as_check_matrix(&self) -> BitMatrix {
        let mut rows: Vec<Vec<usize>> = self.projectors.clone();
        rows.extend(self.fixed.iter().map(|&q| vec![q]));
        BitMatrix::from_supports(&rows, self.num_physical)
    }

    /// True iff the projector rows, after eliminating ancilla columns,
    /// span the original check row space restricted to the first K
    /// columns.
    pub fn covers(&self, check: &BitMatrix) -> bool {
        assert_eq!(check.cols(), self.check_cols);
        let m = self.as_check_matrix();
        // reorder columns ancilla-first so RREF isolates ancilla-free rows
        let k = self.check_cols;
        let a = self.num_physical - k;
        let mut permuted = BitMatrix::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..k {
                if m.get(r, c) {
                    permuted.set(r, a + c, true);
                }
            }
            for c in 0..a {
                if m.get(r, k + c) {
                    permuted.set(r, c, true);
                }
            }
        }
        let (rref, pivots) = permuted.rref();
        let free_rows: Vec<usize> = (0..pivots.len()).filter(|&i| pivots[i] >= a).collect();
        let restricted = rref.select_rows(&free_rows).col_slice(a, a + k);
        let base_rank = restricted.rank();
        restricted.vstack(check).rank() == base_rank
    }

    pub fn histogram(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for p in &self.projectors {
            *counts.entry(p.len()).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }
}

/// Extend a K-column codeword with ancilla values computed from their
/// definitions. Records must be ordered so definitions only reference
/// earlier columns, which construction guarantees.
pub fn extend_word(w: &[u8], ancillas: &[AncillaRecord], num_physical: usize) -> Vec<u8> {
    let mut out = w.to_vec();
    out.resize(num_physical, 0);
    for rec in ancillas {
        out[rec.physical_index] = rec.definition.iter().fold(0, |acc, &q| acc ^ (out[q] & 1));
    }
    out
}

/// Search for a row-space-equal matrix whose rows all have weight in
/// `[min_w, max_w]`.
///
/// Candidates are XORs of one, two, then three input rows, generated in a
/// fixed order and capped by the evaluation budget; a backtracking pass
/// picks an independent spanning subset preferring earlier candidates, so
/// an input already within bounds is returned unchanged.
pub fn reduce_weights(check: &BitMatrix, min_w: usize, max_w: usize) -> Option<BitMatrix> {
    let m = check.rows();
    let need = check.rank();
    if need == 0 {
        return Some(BitMatrix::zeros(0, check.cols()));
    }
    let mut budget = REDUCE_BUDGET;
    let mut candidates: Vec<Vec<u8>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut push = |row: Vec<u8>, budget: &mut usize| -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let w = row.iter().filter(|&&b| b == 1).count();
        if w >= min_w && w <= max_w && seen.insert(row.clone()) {
            candidates.push(row);
        }
        true
    };
    'gen: {
        for i in 0..m {
            if !push(check.row_bits(i), &mut budget) {
                break 'gen;
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let row = crate::gf2::xor_bits(&check.row_bits(i), &check.row_bits(j));
                if !push(row, &mut budget) {
                    break 'gen;
                }
            }
        }
        for i in 0..m {
            let ri = check.row_bits(i);
            for j in (i + 1)..m {
                let rij = crate::gf2::xor_bits(&ri, &check.row_bits(j));
                for k in (j + 1)..m {
                    let row = crate::gf2::xor_bits(&rij, &check.row_bits(k));
                    if !push(row, &mut budget) {
                        break 'gen;
                    }
                }
            }
        }
    }
    if candidates.len() < need {
        return None;
    }
    let chosen = select_spanning(&candidates, need, &mut budget)?;
    Some(BitMatrix::from_rows(
        &chosen.iter().map(|&i| candidates[i].clone()).collect::<Vec<_>>(),
    ))
}

/// Backtracking selection of `need` linearly independent candidates,
/// earliest-first.
fn select_spanning(candidates: &[Vec<u8>], need: usize, budget: &mut usize) -> Option<Vec<usize>> {
    // basis rows keep pairwise-distinct leading indices, so a row is
    // dependent iff it reduces to zero; insertion order makes backtracking
    // pops exact
    fn reduce(row: &[u8], basis: &[Vec<u8>]) -> Vec<u8> {
        let mut r = row.to_vec();
        loop {
            let Some(lead_r) = r.iter().position(|&x| x == 1) else {
                return r;
            };
            let hit = basis
                .iter()
                .find(|b| b.iter().position(|&x| x == 1) == Some(lead_r));
            match hit {
                Some(b) => r = crate::gf2::xor_bits(&r, b),
                None => return r,
            }
        }
    }
    fn dfs(
        candidates: &[Vec<u8>],
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        basis: &mut Vec<Vec<u8>>,
        budget: &mut usize,
    ) -> bool {
        if chosen.len() == need {
            return true;
        }
        for idx in start..candidates.len() {
            if candidates.len() - idx < need - chosen.len() {
                return false;
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let reduced = reduce(&candidates[idx], basis);
            if reduced.iter().all(|&b| b == 0) {
                continue;
            }
            chosen.push(idx);
            basis.push(reduced);
            if dfs(candidates, idx + 1, need, chosen, basis, budget) {
                return true;
            }
            chosen.pop();
            basis.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    let mut basis = Vec::new();
    dfs(candidates, 0, need, &mut chosen, &mut basis, budget).then_some(chosen)
}

/// Split a long projector in two with a fresh ancilla: `{a, b, x}` and
/// `{rest…, x}`. Returns `None` when the row already fits in weight 4.
///
/// The pair split off is the one co-occurring most often in the other
/// projectors, so the shared structure stays adjacent in later layout.
pub fn split_with_ancilla(
    row: &[usize],
    others: &[Vec<usize>],
    next_index: usize,
) -> Option<(Vec<usize>, Vec<usize>, AncillaRecord)> {
    if row.len() <= 4 {
        return None;
    }
    let mut best: Option<(usize, (usize, usize))> = None;
    for (i, &a) in row.iter().enumerate() {
        for &b in &row[i + 1..] {
            let score = others
                .iter()
                .filter(|o| o.contains(&a) && o.contains(&b))
                .count();
            let better = match best {
                None => true,
                Some((s, pair)) => score > s || (score == s && (a, b) < pair),
            };
            if better {
                best = Some((score, (a, b)));
            }
        }
    }
    let (_, (a, b)) = best.expect("row of weight ≥ 5 has pairs");
    let short = vec![a, b, next_index];
    let mut rest: Vec<usize> = row.iter().copied().filter(|&q| q != a && q != b).collect();
    rest.push(next_index);
    let record = AncillaRecord {
        physical_index: next_index,
        definition: vec![a, b],
    };
    Some((short, rest, record))
}

/// Transform a check matrix into a projector set meeting the mode's
/// weight bounds, inserting ancillas where row operations cannot reach
/// the bounds.
pub fn build_projector_set(check: &BitMatrix, mode: ProjectorMode) -> ProjectorSet {
    let k = check.cols();
    let nonzero: Vec<usize> = (0..check.rows()).filter(|&r| !check.row_is_zero(r)).collect();
    let rows = check.select_rows(&nonzero);
    let (working, mut fixed) = extract_fixed(rows_to_supports(&rows), k);

    let mut projectors: Vec<Vec<usize>> = Vec::new();
    let mut ancillas: Vec<AncillaRecord> = Vec::new();

    if !working.is_empty() {
        let matrix = BitMatrix::from_supports(&working, k);
        let reduced = mode
            .weight_ranges()
            .into_iter()
            .find_map(|(lo, hi)| reduce_weights(&matrix, lo, hi));
        match reduced {
            Some(r) => {
                projectors = rows_to_supports(&r);
            }
            None => {
                // fall back to a canonical basis and split what is too long
                let base = matrix.rref_nonzero();
                let (base_rows, more_fixed) = extract_fixed(rows_to_supports(&base), k);
                fixed.extend(more_fixed);
                let max_w = mode.max_weight();
                let mut next_index = k;
                for row in base_rows {
                    if row.len() <= max_w {
                        projectors.push(row);
                        continue;
                    }
                    let mut pending = row;
                    while pending.len() > max_w {
                        let (short, rest, record) =
                            split_with_ancilla(&pending, &projectors, next_index)
                                .expect("row longer than max weight splits");
                        next_index += 1;
                        projectors.push(short);
                        ancillas.push(record);
                        pending = rest;
                    }
                    projectors.push(pending);
                }
            }
        }
    }

    for p in &mut projectors {
        p.sort_unstable();
    }
    fixed.sort_unstable();
    fixed.dedup();
    let num_physical = k + ancillas.len();
    ProjectorSet {
        projectors,
        ancillas,
        fixed,
        check_cols: k,
        num_physical,
    }
}

fn rows_to_supports(m: &BitMatrix) -> Vec<Vec<usize>> {
    (0..m.rows()).map(|r| m.row_support(r)).collect()
}

/// Pull weight-1 rows out as pinned qubits and erase their columns from
/// the remaining rows, repeating until stable.
fn extract_fixed(mut rows: Vec<Vec<usize>>, _cols: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut fixed = Vec::new();
    loop {
        let Some(pos) = rows.iter().position(|r| r.len() == 1) else {
            break;
        };
        let q = rows.remove(pos)[0];
        fixed.push(q);
        for row in &mut rows {
            row.retain(|&c| c != q);
        }
        rows.retain(|r| !r.is_empty());
        // identical rows collapse after the erasure
        rows.sort();
        rows.dedup();
    }
    (rows, fixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn paper_check() -> BitMatrix {
        m(&[&[1, 1, 1, 1, 0, 0], &[1, 0, 0, 1, 1, 1]])
    }

    #[test]
    fn reduce_keeps_conforming_rows_unchanged() {
        let p = paper_check();
        let r = reduce_weights(&p, 3, 4).unwrap();
        assert_eq!(r, p);
    }

    #[test]
    fn reduce_reports_absent_for_lone_heavy_row() {
        let p = m(&[&[1, 1, 1, 1, 1, 0]]);
        assert!(reduce_weights(&p, 3, 4).is_none());
    }

    #[test]
    fn reduce_with_weight_two_admission() {
        let p = m(&[&[1, 1, 1, 1, 1, 0], &[0, 0, 0, 0, 1, 1]]);
        // strict 3..4 cannot span: the only rows touching columns 4/5
        // weigh 5, 2 and 5
        assert!(reduce_weights(&p, 3, 4).is_none());
        assert!(reduce_weights(&p, 2, 4).is_none());
        // the projector build falls back to ancilla splitting
        let set = build_projector_set(&p, ProjectorMode::Plaquette);
        assert_eq!(set.ancillas.len(), 1);
        assert!(set.projectors.iter().all(|r| (2..=4).contains(&r.len())));
        assert!(set.covers(&p));
    }

    #[test]
    fn reduce_preserves_row_space() {
        let p = m(&[
            &[1, 1, 0, 0, 1, 1, 0],
            &[0, 1, 1, 1, 0, 1, 0],
            &[1, 0, 1, 0, 1, 0, 1],
        ]);
        if let Some(r) = reduce_weights(&p, 3, 4) {
            assert!(r.row_space_equal(&p));
            for i in 0..r.rows() {
                assert!((3..=4).contains(&r.row_weight(i)));
            }
        }
    }

    #[test]
    fn split_examples() {
        let (short, rest, rec) = split_with_ancilla(&[0, 1, 2, 3, 4], &[], 5).unwrap();
        assert_eq!(short, vec![0, 1, 5]);
        assert_eq!(rest, vec![2, 3, 4, 5]);
        assert_eq!(rec.physical_index, 5);
        assert_eq!(rec.definition, vec![0, 1]);

        // weight-4 rows pass through untouched
        assert!(split_with_ancilla(&[0, 1, 2, 3], &[], 9).is_none());
    }

    #[test]
    fn split_recursion_reaches_three_three_four() {
        let row: Vec<usize> = (0..6).collect();
        let mut projectors: Vec<Vec<usize>> = Vec::new();
        let mut next = 6;
        let mut pending = row;
        while pending.len() > 4 {
            let (short, rest, _) = split_with_ancilla(&pending, &projectors, next).unwrap();
            next += 1;
            projectors.push(short);
            pending = rest;
        }
        projectors.push(pending);
        let mut weights: Vec<usize> = projectors.iter().map(|p| p.len()).collect();
        weights.sort_unstable();
        assert_eq!(weights, vec![3, 3, 4]);
    }

    #[test]
    fn split_prefers_cooccurring_pair() {
        let others = vec![vec![2, 3, 9], vec![2, 3, 7]];
        let (short, _, _) = split_with_ancilla(&[0, 1, 2, 3, 4], &others, 10).unwrap();
        assert_eq!(short, vec![2, 3, 10]);
    }

    #[test]
    fn build_for_paper_check() {
        let set = build_projector_set(&paper_check(), ProjectorMode::Plaquette);
        assert_eq!(set.projectors.len(), 2);
        assert!(set.projectors.iter().all(|p| p.len() == 4));
        assert!(set.ancillas.is_empty());
        assert!(set.covers(&paper_check()));
    }

    #[test]
    fn build_splits_irreducible_heavy_row() {
        let p = m(&[&[1, 1, 1, 1, 1, 0]]);
        let set = build_projector_set(&p, ProjectorMode::Plaquette);
        assert_eq!(set.ancillas.len(), 1);
        let mut sizes: Vec<usize> = set.projectors.iter().map(|r| r.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 4]);
        assert_eq!(set.num_physical, 7);
        assert!(set.covers(&p));
    }

    #[test]
    fn build_cnot_mode_within_bound_is_unchanged() {
        let set = build_projector_set(&paper_check(), ProjectorMode::Cnot { max_len: 6 });
        assert_eq!(
            set.projectors,
            vec![vec![0, 1, 2, 3], vec![0, 3, 4, 5]]
        );
        assert!(set.ancillas.is_empty());
    }

    #[test]
    fn weight_one_rows_become_fixed_qubits() {
        let p = m(&[&[0, 1, 0, 0], &[1, 1, 1, 1]]);
        let set = build_projector_set(&p, ProjectorMode::Plaquette);
        assert_eq!(set.fixed, vec![1]);
        assert_eq!(set.projectors, vec![vec![0, 2, 3]]);
        assert!(set.covers(&p));
    }

    #[test]
    fn projector_count_grows_one_per_ancilla() {
        let p = m(&[&[1, 1, 1, 1, 1, 1, 1, 0], &[0, 0, 0, 0, 0, 1, 1, 1]]);
        let set = build_projector_set(&p, ProjectorMode::Plaquette);
        let base_rank = p.rank();
        assert_eq!(set.projectors.len(), base_rank + set.ancillas.len());
        assert!(set.covers(&p));
    }

    #[test]
    fn split_constrains_exactly_original_parity() {
        // brute force: words over 6 columns satisfying both split rows
        // restrict to even-parity words over the original 5 columns
        let row = vec![0usize, 1, 2, 3, 4];
        let (short, rest, _) = split_with_ancilla(&row, &[], 5).unwrap();
        let satisfies = |w: u32, support: &[usize]| -> bool {
            support.iter().fold(0u32, |acc, &q| acc ^ (w >> q & 1)) == 0
        };
        let mut restricted: Vec<u32> = Vec::new();
        for w in 0u32..64 {
            if satisfies(w, &short) && satisfies(w, &rest) {
                restricted.push(w & 0b11111);
            }
        }
        restricted.sort_unstable();
        restricted.dedup();
        let expected: Vec<u32> = (0u32..32).filter(|&w| satisfies(w, &row)).collect();
        assert_eq!(restricted, expected);
        // and each original-word solution extends uniquely in the ancilla
        assert_eq!(
            (0u32..64)
                .filter(|&w| satisfies(w, &short) && satisfies(w, &rest))
                .count(),
            expected.len()
        );
    }
}
