//! Layout and circuit emission for digital devices.
//!
//! Each projector's qubits must be contiguous on the grid; its parity
//! phase is then realized by a tree of CNOTs running from the leaves to a
//! root, a local Z rotation by the projector angle on the root, and the
//! mirrored CNOTs uncomputing, implementing
//! `exp(−i α/2 Z⊗…⊗Z)` on the projector support.

use std::sync::OnceLock;

use crate::circuit::{Circuit, Gate};
use crate::layout::{LayoutFailure, LayoutOptions};
use crate::projector::ProjectorSet;

/// A spanning tree over one projector's qubits along grid edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorTree {
    /// Index into the projector set.
    pub projector: usize,
    /// Qubit carrying the Z rotation.
    pub root: usize,
    /// (child, parent) pairs ordered leaves-first, so iterating them
    /// accumulates subtree parities before each parent edge fires.
    pub edges: Vec<(usize, usize)>,
}

/// Grid placement for CNOT compilation: no plaquettes, one spanning tree
/// per projector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnotLayout {
    pub positions: Vec<Option<(usize, usize)>>,
    pub grid_bounds: (usize, usize),
    pub fixed: Vec<usize>,
    pub num_physical: usize,
    pub trees: Vec<ProjectorTree>,
}

/// Fixed polyominoes (translations only) of the given size, each a sorted
/// list of (row, col) offsets normalized to start at (0, 0).
pub fn shapes(size: usize) -> &'static [Vec<(usize, usize)>] {
    static TABLES: OnceLock<Vec<Vec<Vec<(usize, usize)>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        let mut by_size: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![], vec![vec![(0, 0)]]];
        for size in 2..=4 {
            let mut next: Vec<Vec<(usize, usize)>> = Vec::new();
            for shape in &by_size[size - 1] {
                for &(r, c) in shape {
                    for (dr, dc) in [(0i64, 1i64), (1, 0), (0, -1), (-1, 0)] {
                        let cand = (r as i64 + dr, c as i64 + dc);
                        if shape.iter().any(|&(sr, sc)| (sr as i64, sc as i64) == cand) {
                            continue;
                        }
                        let mut cells: Vec<(i64, i64)> =
                            shape.iter().map(|&(a, b)| (a as i64, b as i64)).collect();
                        cells.push(cand);
                        let min_r = cells.iter().map(|&(a, _)| a).min().unwrap();
                        let min_c = cells.iter().map(|&(_, b)| b).min().unwrap();
                        let mut norm: Vec<(usize, usize)> = cells
                            .iter()
                            .map(|&(a, b)| ((a - min_r) as usize, (b - min_c) as usize))
                            .collect();
                        norm.sort_unstable();
                        if !next.contains(&norm) {
                            next.push(norm);
                        }
                    }
                }
            }
            next.sort();
            by_size.push(next);
        }
        by_size
    });
    &tables[size]
}

/// Place every projector as a connected set of grid sites and pick a
/// spanning tree per projector. Grows the grid on failure like the
/// plaquette search; there are no dynamical ancillas on the digital path.
pub fn lay_out_contiguous(
    projectors: &ProjectorSet,
    options: &LayoutOptions,
) -> Result<CnotLayout, LayoutFailure> {
    let placed_count = projectors.num_physical - projectors.fixed.len();
    let side = ((placed_count as f64).sqrt().ceil() as usize + 1).max(2);
    let mut bounds = (side, side);
    let mut growths = 0usize;
    let mut nodes_used = 0usize;
    loop {
        let mut search = ContiguousSearcher::new(
            projectors,
            bounds,
            options.budget.saturating_sub(nodes_used),
        );
        let found = search.run();
        nodes_used += search.nodes;
        match found {
            Some(layout) => return Ok(layout),
            None => {
                let failed = search.deepest_projector.map(|i| projectors.projectors[i].clone());
                if nodes_used < options.budget && growths < options.max_growths {
                    if growths % 2 == 0 {
                        bounds.0 += 1;
                    } else {
                        bounds.1 += 1;
                    }
                    growths += 1;
                    continue;
                }
                return Err(LayoutFailure {
                    failed_projector: failed,
                    nodes: nodes_used,
                    height: bounds.0,
                    width: bounds.1,
                    growths,
                    dynamical_ancillas: 0,
                });
            }
        }
    }
}

/// CNOT cascade per projector tree, rotation at the root, mirrored
/// uncompute. The gate sequence is palindromic around each rotation.
pub fn emit_circuit(trees: &[ProjectorTree], angles: &[f64], num_qubits: usize) -> Circuit {
    assert_eq!(trees.len(), angles.len(), "one angle per projector");
    let mut circuit = Circuit::new(num_qubits);
    for (tree, &angle) in trees.iter().zip(angles) {
        for &(child, parent) in &tree.edges {
            circuit.push(Gate::Cnot { control: child, target: parent });
        }
        circuit.push(Gate::Rz { qubit: tree.root, angle });
        for &(child, parent) in tree.edges.iter().rev() {
            circuit.push(Gate::Cnot { control: child, target: parent });
        }
    }
    circuit
}

struct ContiguousSearcher<'a> {
    set: &'a ProjectorSet,
    bounds: (usize, usize),
    budget: usize,
    nodes: usize,
    site_occ: Vec<Option<usize>>,
    positions: Vec<Option<(usize, usize)>>,
    placed: Vec<bool>,
    deepest: usize,
    deepest_projector: Option<usize>,
}

impl<'a> ContiguousSearcher<'a> {
    fn new(set: &'a ProjectorSet, bounds: (usize, usize), budget: usize) -> Self {
        ContiguousSearcher {
            set,
            bounds,
            budget,
            nodes: 0,
            site_occ: vec![None; bounds.0 * bounds.1],
            positions: vec![None; set.num_physical],
            placed: vec![false; set.projectors.len()],
            deepest: 0,
            deepest_projector: None,
        }
    }

    fn site_index(&self, r: usize, c: usize) -> usize {
        r * self.bounds.1 + c
    }

    fn run(&mut self) -> Option<CnotLayout> {
        if !self.dfs(0) {
            return None;
        }
        let (h, w) = self.bounds;
        let mut free_sites = (0..h).flat_map(|r| (0..w).map(move |c| (r, c)));
        for q in 0..self.set.num_physical {
            if self.positions[q].is_some() || self.set.fixed.contains(&q) {
                continue;
            }
            let site = loop {
                let (r, c) = free_sites.next()?;
                if self.site_occ[r * w + c].is_none() {
                    break (r, c);
                }
            };
            let idx = self.site_index(site.0, site.1);
            self.site_occ[idx] = Some(q);
            self.positions[q] = Some(site);
        }
        let trees = (0..self.set.projectors.len())
            .map(|pi| self.spanning_tree(pi))
            .collect();
        Some(CnotLayout {
            positions: self.positions.clone(),
            grid_bounds: self.bounds,
            fixed: self.set.fixed.to_vec(),
            num_physical: self.set.num_physical,
            trees,
        })
    }

    /// Root at the member with the highest degree in the induced grid
    /// subgraph (shortest critical path), then BFS edges ordered
    /// leaves-first.
    fn spanning_tree(&self, pi: usize) -> ProjectorTree {
        let members = &self.set.projectors[pi];
        let adjacent = |a: usize, b: usize| -> bool {
            let (ra, ca) = self.positions[a].unwrap();
            let (rb, cb) = self.positions[b].unwrap();
            ra.abs_diff(rb) + ca.abs_diff(cb) == 1
        };
        let degree = |q: usize| members.iter().filter(|&&m| m != q && adjacent(m, q)).count();
        let root = *members
            .iter()
            .max_by_key(|&&q| (degree(q), std::cmp::Reverse(q)))
            .expect("projector nonempty");
        let mut depth = vec![None; self.set.num_physical];
        depth[root] = Some(0usize);
        let mut parent = vec![None; self.set.num_physical];
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let mut next: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&m| depth[m].is_none() && adjacent(u, m))
                .collect();
            next.sort_unstable();
            for m in next {
                depth[m] = Some(depth[u].unwrap() + 1);
                parent[m] = Some(u);
                queue.push_back(m);
            }
        }
        let mut edges: Vec<(usize, usize)> = members
            .iter()
            .copied()
            .filter(|&m| m != root)
            .map(|m| (m, parent[m].expect("projector is contiguous")))
            .collect();
        edges.sort_by_key(|&(child, _)| (std::cmp::Reverse(depth[child].unwrap()), child));
        ProjectorTree {
            projector: pi,
            root,
            edges,
        }
    }

    fn next_projector(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (i, p) in self.set.projectors.iter().enumerate() {
            if self.placed[i] {
                continue;
            }
            let count = p.iter().filter(|&&q| self.positions[q].is_some()).count();
            if best.is_none_or(|(c, _)| count > c) {
                best = Some((count, i));
            }
        }
        best.map(|(_, i)| i)
    }

    fn dfs(&mut self, depth: usize) -> bool {
        let Some(pi) = self.next_projector() else {
            return true;
        };
        if depth >= self.deepest {
            self.deepest = depth;
            self.deepest_projector = Some(pi);
        }
        let candidates = self.candidates(pi);
        for cand in candidates {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            for &(q, (r, c)) in &cand {
                self.positions[q] = Some((r, c));
                let idx = self.site_index(r, c);
                self.site_occ[idx] = Some(q);
            }
            self.placed[pi] = true;
            if self.dfs(depth + 1) {
                return true;
            }
            self.placed[pi] = false;
            for &(q, (r, c)) in &cand {
                self.positions[q] = None;
                let idx = self.site_index(r, c);
                self.site_occ[idx] = None;
            }
        }
        false
    }

    /// All placements of the projector's unplaced members that leave the
    /// full member set connected, as (qubit, site) assignments.
    fn candidates(&self, pi: usize) -> Vec<Vec<(usize, (usize, usize))>> {
        let members = &self.set.projectors[pi];
        let placed: Vec<(usize, usize)> = members
            .iter()
            .filter_map(|&q| self.positions[q])
            .collect();
        let unplaced: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&q| self.positions[q].is_none())
            .collect();
        let (h, w) = self.bounds;
        let mut out = Vec::new();
        if placed.is_empty() && members.len() <= 4 {
            // anchor the precomputed shapes at every position
            for shape in shapes(members.len()) {
                let max_r = shape.iter().map(|&(r, _)| r).max().unwrap();
                let max_c = shape.iter().map(|&(_, c)| c).max().unwrap();
                for r0 in 0..h.saturating_sub(max_r) {
                    for c0 in 0..w.saturating_sub(max_c) {
                        let sites: Vec<(usize, usize)> =
                            shape.iter().map(|&(r, c)| (r0 + r, c0 + c)).collect();
                        if sites.iter().any(|&(r, c)| self.site_occ[r * w + c].is_some()) {
                            continue;
                        }
                        for perm in crate::layout::permutations(unplaced.len()) {
                            out.push(
                                unplaced
                                    .iter()
                                    .enumerate()
                                    .map(|(i, &q)| (q, sites[perm[i]]))
                                    .collect(),
                            );
                        }
                    }
                }
            }
            return out;
        }
        // incremental growth: add free sites adjacent to the current
        // member region, any unplaced qubit on each, connectivity checked
        // on completion
        let mut assignment: Vec<(usize, (usize, usize))> = Vec::new();
        self.grow(&placed, &unplaced, &mut assignment, &mut out);
        out
    }

    fn grow(
        &self,
        placed: &[(usize, usize)],
        remaining: &[usize],
        assignment: &mut Vec<(usize, (usize, usize))>,
        out: &mut Vec<Vec<(usize, (usize, usize))>>,
    ) {
        let (h, w) = self.bounds;
        let region: Vec<(usize, usize)> = placed
            .iter()
            .copied()
            .chain(assignment.iter().map(|&(_, s)| s))
            .collect();
        if remaining.is_empty() {
            if connected(&region) {
                out.push(assignment.clone());
            }
            return;
        }
        let mut frontier: Vec<(usize, usize)> = Vec::new();
        if region.is_empty() {
            frontier = (0..h).flat_map(|r| (0..w).map(move |c| (r, c))).collect();
        } else {
            for &(r, c) in &region {
                for (dr, dc) in [(0i64, 1i64), (1, 0), (0, -1), (-1, 0)] {
                    let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                    if nr < 0 || nc < 0 || nr as usize >= h || nc as usize >= w {
                        continue;
                    }
                    let site = (nr as usize, nc as usize);
                    if !frontier.contains(&site) {
                        frontier.push(site);
                    }
                }
            }
            frontier.sort_unstable();
        }
        for site in frontier {
            if self.site_occ[site.0 * w + site.1].is_some()
                || assignment.iter().any(|&(_, s)| s == site)
            {
                continue;
            }
            for (i, &q) in remaining.iter().enumerate() {
                let rest: Vec<usize> = remaining
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &m)| m)
                    .collect();
                assignment.push((q, site));
                self.grow(placed, &rest, assignment, out);
                assignment.pop();
            }
        }
    }
}

fn connected(sites: &[(usize, usize)]) -> bool {
    if sites.is_empty() {
        return true;
    }
    let mut seen = vec![false; sites.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for (j, other) in sites.iter().enumerate() {
            if !seen[j]
                && sites[i].0.abs_diff(other.0) + sites[i].1.abs_diff(other.1) == 1
            {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ParityCode;
    use crate::problem::five_qubit_example;
    use crate::projector::{build_projector_set, ProjectorMode};

    fn single_projector_set(size: usize) -> ProjectorSet {
        ProjectorSet {
            projectors: vec![(0..size).collect()],
            ancillas: vec![],
            fixed: vec![],
            check_cols: size,
            num_physical: size,
        }
    }

    #[test]
    fn shape_tables_have_known_counts() {
        assert_eq!(shapes(2).len(), 2, "dominoes");
        assert_eq!(shapes(3).len(), 6, "triominoes");
        assert_eq!(shapes(4).len(), 19, "tetrominoes");
    }

    #[test]
    fn size_four_projector_lands_on_a_tetromino() {
        let set = single_projector_set(4);
        let layout = lay_out_contiguous(&set, &LayoutOptions::default()).unwrap();
        let sites: Vec<(usize, usize)> = (0..4).map(|q| layout.positions[q].unwrap()).collect();
        assert!(connected(&sites));
        let min_r = sites.iter().map(|&(r, _)| r).min().unwrap();
        let min_c = sites.iter().map(|&(_, c)| c).min().unwrap();
        let mut norm: Vec<(usize, usize)> =
            sites.iter().map(|&(r, c)| (r - min_r, c - min_c)).collect();
        norm.sort_unstable();
        assert!(shapes(4).contains(&norm), "placement is one of the tetromino shapes");
    }

    #[test]
    fn size_two_projector_is_a_domino() {
        let set = single_projector_set(2);
        let layout = lay_out_contiguous(&set, &LayoutOptions::default()).unwrap();
        let a = layout.positions[0].unwrap();
        let b = layout.positions[1].unwrap();
        assert_eq!(a.0.abs_diff(b.0) + a.1.abs_diff(b.1), 1);
    }

    #[test]
    fn example_check_lays_out_contiguously() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        let set = build_projector_set(code.check(), ProjectorMode::Cnot { max_len: 6 });
        let layout = lay_out_contiguous(&set, &LayoutOptions::default()).unwrap();
        for p in &set.projectors {
            let sites: Vec<(usize, usize)> =
                p.iter().map(|&q| layout.positions[q].unwrap()).collect();
            assert!(connected(&sites), "projector {p:?} must be contiguous");
        }
        assert_eq!(layout.trees.len(), set.projectors.len());
        for tree in &layout.trees {
            let members = &set.projectors[tree.projector];
            assert_eq!(tree.edges.len() + 1, members.len(), "spanning tree size");
            for &(child, parent) in &tree.edges {
                let (ra, ca) = layout.positions[child].unwrap();
                let (rb, cb) = layout.positions[parent].unwrap();
                assert_eq!(ra.abs_diff(rb) + ca.abs_diff(cb), 1, "tree edges are grid edges");
            }
        }
    }

    #[test]
    fn emitted_chain_matches_leaf_to_root_order() {
        // a path q0−q1−q2−q3 rooted at q3
        let tree = ProjectorTree {
            projector: 0,
            root: 3,
            edges: vec![(0, 1), (1, 2), (2, 3)],
        };
        let c = emit_circuit(&[tree], &[0.7], 4);
        let expected = vec![
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cnot { control: 1, target: 2 },
            Gate::Cnot { control: 2, target: 3 },
            Gate::Rz { qubit: 3, angle: 0.7 },
            Gate::Cnot { control: 2, target: 3 },
            Gate::Cnot { control: 1, target: 2 },
            Gate::Cnot { control: 0, target: 1 },
        ];
        assert_eq!(c.gates, expected);
    }

    #[test]
    fn singleton_projector_is_just_a_rotation() {
        let tree = ProjectorTree {
            projector: 0,
            root: 2,
            edges: vec![],
        };
        let c = emit_circuit(&[tree], &[1.5], 3);
        assert_eq!(c.gates, vec![Gate::Rz { qubit: 2, angle: 1.5 }]);
    }

    #[test]
    fn gate_sequence_is_palindromic_around_each_rotation() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        let set = build_projector_set(code.check(), ProjectorMode::Cnot { max_len: 6 });
        let layout = lay_out_contiguous(&set, &LayoutOptions::default()).unwrap();
        let angles = vec![1.0; layout.trees.len()];
        let c = emit_circuit(&layout.trees, &angles, layout.num_physical);
        let mut cursor = 0;
        for tree in &layout.trees {
            let n = tree.edges.len();
            let block = &c.gates[cursor..cursor + 2 * n + 1];
            assert!(matches!(block[n], Gate::Rz { .. }));
            for i in 0..n {
                assert_eq!(block[i], block[2 * n - i]);
            }
            cursor += 2 * n + 1;
        }
        assert_eq!(cursor, c.gates.len());
    }
}
