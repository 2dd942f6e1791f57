//! Placement of parity qubits on a square lattice so that every projector
//! occupies one grid cell as a square (4 corners), triangle (3 corners) or
//! edge (2 adjacent corners) plaquette.
//!
//! The placement search is depth-first backtracking over projectors in
//! most-constrained-first order. On exhaustion it escalates per failing
//! projector: split a length-4 projector with a dynamical ancilla so its
//! qubits no longer have to be adjacent, then enlarge the grid, then fail
//! with diagnostics. All tie-breaking is lexicographic, so a layout is a
//! pure function of its inputs.

use thiserror::Error;

use crate::code::ParityCode;
use crate::gf2::BitMatrix;
use crate::projector::{AncillaRecord, ProjectorSet};

/// Knobs for the placement search.
#[derive(Debug, Clone)]
pub struct LayoutOptions {
    /// Backtrack-node budget across all escalation attempts.
    pub budget: usize,
    /// Maximum number of grid enlargements.
    pub max_growths: usize,
    /// Allow splitting stuck length-4 projectors with dynamical ancillas.
    pub allow_dynamic_split: bool,
    /// Recorded for provenance; the search itself is deterministic.
    pub seed: u64,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        LayoutOptions {
            budget: 1_000_000,
            max_growths: 8,
            allow_dynamic_split: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaquetteKind {
    Square,
    Triangle,
    Edge,
}

/// One constraint coupler on one grid cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaquette {
    /// Cell coordinates: the unit square with corners (r,c)…(r+1,c+1).
    pub cell: (usize, usize),
    /// Physical qubits on the used corners, sorted.
    pub qubits: Vec<usize>,
    pub kind: PlaquetteKind,
}

/// A finished placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    /// Site per physical qubit; `None` for pinned (fixed) qubits, which
    /// are not placed.
    pub positions: Vec<Option<(usize, usize)>>,
    pub plaquettes: Vec<Plaquette>,
    /// Site grid (height, width).
    pub grid_bounds: (usize, usize),
    pub dynamical_ancillas: Vec<AncillaRecord>,
    /// Parity qubits pinned to bit 0, copied from the projector set.
    pub fixed: Vec<usize>,
    pub num_physical: usize,
}

#[derive(Debug, Error)]
#[error(
    "layout search failed after {nodes} nodes: projector {failed_projector:?} could not be \
     placed on a {height}x{width} grid ({growths} growths, {dynamical_ancillas} dynamical \
     ancillas tried)"
)]
pub struct LayoutFailure {
    pub failed_projector: Option<Vec<usize>>,
    pub nodes: usize,
    pub height: usize,
    pub width: usize,
    pub growths: usize,
    pub dynamical_ancillas: usize,
}

/// Fields plus plaquette couplings of the physical device Hamiltonian.
///
/// Energy of a physical bit-string `w`:
/// `offset + Σ_a fields[a]·(−1)^{w_a} − strength·Σ_plaq (−1)^{parity}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalHamiltonian {
    pub num_qubits: usize,
    /// Local field per physical qubit; zero on ancillas and pinned qubits.
    pub fields: Vec<f64>,
    /// Constant from pinned qubits (their spin is +1 in the code frame).
    pub offset: f64,
    /// Plaquette supports; each contributes `−strength · Π σ`.
    pub plaquettes: Vec<Vec<usize>>,
    pub strength: f64,
    /// Qubits pinned to bit 0 (not realized on the device).
    pub pinned: Vec<usize>,
}

impl PhysicalHamiltonian {
    pub fn energy(&self, w: &[u8]) -> f64 {
        assert_eq!(w.len(), self.num_qubits, "bit-string length");
        let mut e = self.offset;
        for (a, &j) in self.fields.iter().enumerate() {
            if j != 0.0 {
                e += if w[a] & 1 == 0 { j } else { -j };
            }
        }
        for p in &self.plaquettes {
            let parity: u8 = p.iter().fold(0, |acc, &q| acc ^ (w[q] & 1));
            e += if parity == 0 { -self.strength } else { self.strength };
        }
        e
    }

    /// Number of plaquettes violated by `w`.
    pub fn violation_count(&self, w: &[u8]) -> usize {
        self.plaquettes
            .iter()
            .filter(|p| p.iter().fold(0u8, |acc, &q| acc ^ (w[q] & 1)) == 1)
            .count()
    }
}

/// Split a length-4 projector into two triangles joined by a fresh
/// ancilla, freeing its qubits from having to share a cell.
pub fn split_dynamically(
    projector: &[usize],
    others: &[Vec<usize>],
    next_index: usize,
) -> (Vec<usize>, Vec<usize>, AncillaRecord) {
    assert_eq!(projector.len(), 4, "only length-4 projectors split dynamically");
    let mut best: Option<(usize, (usize, usize))> = None;
    for (i, &a) in projector.iter().enumerate() {
        for &b in &projector[i + 1..] {
            let score = others.iter().filter(|o| o.contains(&a) && o.contains(&b)).count();
            let better = match best {
                None => true,
                Some((s, pair)) => score > s || (score == s && (a, b) < pair),
            };
            if better {
                best = Some((score, (a, b)));
            }
        }
    }
    let (_, (a, b)) = best.expect("length-4 projector has pairs");
    let rest: Vec<usize> = projector.iter().copied().filter(|&q| q != a && q != b).collect();
    (
        vec![a, b, next_index],
        vec![rest[0], rest[1], next_index],
        AncillaRecord {
            physical_index: next_index,
            definition: vec![a, b],
        },
    )
}

/// Place a projector set on the smallest grid the escalation policy
/// reaches. See the module docs for the search and escalation order.
pub fn lay_out(projectors: &ProjectorSet, options: &LayoutOptions) -> Result<Layout, LayoutFailure> {
    assert!(
        projectors.projectors.iter().all(|p| (2..=4).contains(&p.len())),
        "plaquette layout requires projector sizes 2..=4"
    );
    let mut working: Vec<Vec<usize>> = projectors.projectors.clone();
    let mut num_physical = projectors.num_physical;
    let mut dynamical: Vec<AncillaRecord> = Vec::new();
    let placed_count = num_physical - projectors.fixed.len();
    let side = ((placed_count as f64).sqrt().ceil() as usize + 1).max(2);
    let mut bounds = (side, side);
    let mut growths = 0usize;
    let mut nodes_used = 0usize;
    let max_splits = working.iter().filter(|p| p.len() == 4).count();
    let mut splits_done = 0usize;

    loop {
        let mut search = Searcher::new(
            &working,
            &projectors.fixed,
            num_physical,
            bounds,
            options.budget.saturating_sub(nodes_used),
        );
        let found = search.run();
        nodes_used += search.nodes;
        let deepest = search.deepest_projector;
        match found {
            Some(mut layout) => {
                layout.dynamical_ancillas = dynamical;
                return Ok(layout);
            }
            None => {
                let failed = deepest.map(|i| working[i].clone());
                if nodes_used >= options.budget {
                    return Err(LayoutFailure {
                        failed_projector: failed,
                        nodes: nodes_used,
                        height: bounds.0,
                        width: bounds.1,
                        growths,
                        dynamical_ancillas: dynamical.len(),
                    });
                }
                if options.allow_dynamic_split && splits_done < max_splits {
                    if let Some(idx) = deepest.filter(|&i| working[i].len() == 4) {
                        let others: Vec<Vec<usize>> = working
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != idx)
                            .map(|(_, p)| p.clone())
                            .collect();
                        let victim = working.remove(idx);
                        let (first, second, record) = split_dynamically(&victim, &others, num_physical);
                        num_physical += 1;
                        working.push(first);
                        working.push(second);
                        dynamical.push(record);
                        splits_done += 1;
                        continue;
                    }
                }
                if growths < options.max_growths {
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
                    dynamical_ancillas: dynamical.len(),
                });
            }
        }
    }
}

/// Re-check every layout invariant from scratch.
pub fn verify_layout(layout: &Layout, projectors: &ProjectorSet) -> bool {
    let (h, w) = layout.grid_bounds;
    // injectivity and bounds
    let mut seen_sites = std::collections::BTreeSet::new();
    for (q, pos) in layout.positions.iter().enumerate() {
        match pos {
            Some((r, c)) => {
                if layout.fixed.contains(&q) || *r >= h || *c >= w || !seen_sites.insert((*r, *c)) {
                    return false;
                }
            }
            None => {
                if !layout.fixed.contains(&q) {
                    return false;
                }
            }
        }
    }
    // plaquette geometry and cell exclusivity
    let mut used_cells = std::collections::BTreeSet::new();
    for p in &layout.plaquettes {
        let (r, c) = p.cell;
        if r + 1 >= h || c + 1 >= w || !used_cells.insert((r, c)) {
            return false;
        }
        let corners = [(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)];
        let mut deduped = p.qubits.clone();
        deduped.dedup();
        if deduped.len() != p.qubits.len() {
            return false;
        }
        let expected = match p.kind {
            PlaquetteKind::Square => 4,
            PlaquetteKind::Triangle => 3,
            PlaquetteKind::Edge => 2,
        };
        if p.qubits.len() != expected {
            return false;
        }
        let mut sites = Vec::new();
        for &q in &p.qubits {
            match layout.positions.get(q).copied().flatten() {
                Some(site) if corners.contains(&site) => sites.push(site),
                _ => return false,
            }
        }
        if p.kind == PlaquetteKind::Edge {
            let (a, b) = (sites[0], sites[1]);
            let adjacent =
                (a.0 == b.0 && a.1.abs_diff(b.1) == 1) || (a.1 == b.1 && a.0.abs_diff(b.0) == 1);
            if !adjacent {
                return false;
            }
        }
    }
    // plaquette rows must span the projector rows
    let plaq_rows: Vec<Vec<usize>> = layout.plaquettes.iter().map(|p| p.qubits.clone()).collect();
    let plaq_matrix = BitMatrix::from_supports(&plaq_rows, layout.num_physical);
    let proj_matrix = BitMatrix::from_supports(&projectors.projectors, layout.num_physical);
    let base = plaq_matrix.rank();
    plaq_matrix.vstack(&proj_matrix).rank() == base
}

/// Local fields from the term coefficients (sign-adjusted by the gauge
/// word so the physical code space keeps all plaquette products +1) plus
/// one `−strength·Πσ` term per plaquette.
pub fn emit_physical_hamiltonian(
    layout: &Layout,
    code: &ParityCode,
    strength: f64,
) -> PhysicalHamiltonian {
    assert!(strength.is_finite(), "coupling strength must be finite");
    let k = code.num_parity();
    let mut fields = vec![0.0; layout.num_physical];
    let mut offset = 0.0;
    for a in 0..k {
        let sign = if code.gauge_word()[a] == 1 { -1.0 } else { 1.0 };
        let j = sign * code.coefficients()[a];
        if layout.fixed.contains(&a) {
            offset += j; // pinned to bit 0: spin +1
        } else {
            fields[a] = j;
        }
    }
    PhysicalHamiltonian {
        num_qubits: layout.num_physical,
        fields,
        offset,
        plaquettes: layout.plaquettes.iter().map(|p| p.qubits.clone()).collect(),
        strength,
        pinned: layout.fixed.clone(),
    }
}

/// The default "sufficiently large" plaquette strength: flipping any
/// single plaquette then costs more than any achievable field gain.
pub fn sufficient_strength(total_abs_coefficient: f64) -> f64 {
    1.0 + 2.0 * total_abs_coefficient
}

struct Searcher<'a> {
    projectors: &'a [Vec<usize>],
    fixed: &'a [usize],
    num_physical: usize,
    bounds: (usize, usize),
    budget: usize,
    nodes: usize,
    site_occ: Vec<Option<usize>>,
    cell_used: Vec<bool>,
    positions: Vec<Option<(usize, usize)>>,
    placed: Vec<bool>,
    plaquettes: Vec<Plaquette>,
    deepest: usize,
    deepest_projector: Option<usize>,
}

impl<'a> Searcher<'a> {
    fn new(
        projectors: &'a [Vec<usize>],
        fixed: &'a [usize],
        num_physical: usize,
        bounds: (usize, usize),
        budget: usize,
    ) -> Self {
        let (h, w) = bounds;
        Searcher {
            projectors,
            fixed,
            num_physical,
            bounds,
            budget,
            nodes: 0,
            site_occ: vec![None; h * w],
            cell_used: vec![false; (h - 1) * (w - 1)],
            positions: vec![None; num_physical],
            placed: vec![false; projectors.len()],
            plaquettes: Vec::new(),
            deepest: 0,
            deepest_projector: None,
        }
    }

    fn site_index(&self, r: usize, c: usize) -> usize {
        r * self.bounds.1 + c
    }

    fn cell_index(&self, r: usize, c: usize) -> usize {
        r * (self.bounds.1 - 1) + c
    }

    fn run(&mut self) -> Option<Layout> {
        if !self.dfs(0) {
            return None;
        }
        // leftover qubits carry only local fields; first free site wins
        let (h, w) = self.bounds;
        let mut free_sites = (0..h).flat_map(|r| (0..w).map(move |c| (r, c)));
        for q in 0..self.num_physical {
            if self.positions[q].is_some() || self.fixed.contains(&q) {
                continue;
            }
            let site = loop {
                let (r, c) = free_sites.next()?;
                if self.site_occ[r * self.bounds.1 + c].is_none() {
                    break (r, c);
                }
            };
            let idx = self.site_index(site.0, site.1);
            self.site_occ[idx] = Some(q);
            self.positions[q] = Some(site);
        }
        Some(Layout {
            positions: self.positions.clone(),
            plaquettes: self.plaquettes.clone(),
            grid_bounds: self.bounds,
            dynamical_ancillas: Vec::new(),
            fixed: self.fixed.to_vec(),
            num_physical: self.num_physical,
        })
    }

    /// Most-constrained-first: the unplaced projector sharing the most
    /// qubits with already-placed ones, ties to the lowest index.
    fn next_projector(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (i, p) in self.projectors.iter().enumerate() {
            if self.placed[i] {
                continue;
            }
            let count = p.iter().filter(|&&q| self.positions[q].is_some()).count();
            let better = match best {
                None => true,
                Some((c, _)) => count > c,
            };
            if better {
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
            self.apply(pi, &cand);
            if self.dfs(depth + 1) {
                return true;
            }
            self.undo(pi, &cand);
        }
        false
    }

    fn candidates(&self, pi: usize) -> Vec<Candidate> {
        let members = &self.projectors[pi];
        let placed_members: Vec<(usize, (usize, usize))> = members
            .iter()
            .filter_map(|&q| self.positions[q].map(|s| (q, s)))
            .collect();
        let unplaced: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&q| self.positions[q].is_none())
            .collect();
        let (h, w) = self.bounds;
        let cells: Vec<(usize, usize)> = if placed_members.is_empty() {
            (0..h - 1).flat_map(|r| (0..w - 1).map(move |c| (r, c))).collect()
        } else {
            // a member at (r,c) is a corner of up to four cells; the
            // plaquette cell must be incident to every placed member
            let mut common: Option<Vec<(usize, usize)>> = None;
            for &(_, (r, c)) in &placed_members {
                let mut incident = Vec::with_capacity(4);
                for (dr, dc) in [(1usize, 1usize), (1, 0), (0, 1), (0, 0)] {
                    let (cr, cc) = (r.wrapping_sub(dr), c.wrapping_sub(dc));
                    if cr < h - 1 && cc < w - 1 {
                        incident.push((cr, cc));
                    }
                }
                common = Some(match common {
                    None => incident,
                    Some(prev) => prev.into_iter().filter(|cell| incident.contains(cell)).collect(),
                });
            }
            let mut cells = common.unwrap_or_default();
            cells.sort_unstable();
            cells
        };

        let mut out = Vec::new();
        for (r, c) in cells {
            if self.cell_used[self.cell_index(r, c)] {
                continue;
            }
            let corners = [(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)];
            let corner_subsets: Vec<Vec<(usize, usize)>> = match members.len() {
                4 => vec![corners.to_vec()],
                3 => (0..4)
                    .map(|skip| {
                        corners
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &s)| s)
                            .collect()
                    })
                    .collect(),
                2 => vec![
                    vec![corners[0], corners[1]],
                    vec![corners[0], corners[2]],
                    vec![corners[1], corners[3]],
                    vec![corners[2], corners[3]],
                ],
                _ => unreachable!("projector sizes checked at entry"),
            };
            for subset in corner_subsets {
                // every placed member must sit on a chosen corner
                if !placed_members.iter().all(|(_, s)| subset.contains(s)) {
                    continue;
                }
                let free_corners: Vec<(usize, usize)> = subset
                    .iter()
                    .copied()
                    .filter(|&(sr, sc)| self.site_occ[self.site_index(sr, sc)].is_none())
                    .collect();
                if free_corners.len() != unplaced.len() {
                    continue;
                }
                for perm in permutations(free_corners.len()) {
                    let assignment: Vec<(usize, (usize, usize))> = unplaced
                        .iter()
                        .enumerate()
                        .map(|(i, &q)| (q, free_corners[perm[i]]))
                        .collect();
                    out.push(Candidate { cell: (r, c), assignment });
                }
            }
        }
        out
    }

    fn apply(&mut self, pi: usize, cand: &Candidate) {
        for &(q, (r, c)) in &cand.assignment {
            self.positions[q] = Some((r, c));
            let idx = self.site_index(r, c);
            self.site_occ[idx] = Some(q);
        }
        let cell = self.cell_index(cand.cell.0, cand.cell.1);
        self.cell_used[cell] = true;
        self.placed[pi] = true;
        let kind = match self.projectors[pi].len() {
            4 => PlaquetteKind::Square,
            3 => PlaquetteKind::Triangle,
            _ => PlaquetteKind::Edge,
        };
        self.plaquettes.push(Plaquette {
            cell: cand.cell,
            qubits: self.projectors[pi].clone(),
            kind,
        });
    }

    fn undo(&mut self, pi: usize, cand: &Candidate) {
        self.plaquettes.pop();
        self.placed[pi] = false;
        let cell = self.cell_index(cand.cell.0, cand.cell.1);
        self.cell_used[cell] = false;
        for &(q, (r, c)) in &cand.assignment {
            self.positions[q] = None;
            let idx = self.site_index(r, c);
            self.site_occ[idx] = None;
        }
    }
}

struct Candidate {
    cell: (usize, usize),
    assignment: Vec<(usize, (usize, usize))>,
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    loop {
        out.push(items.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| items[i] < items[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| items[j] > items[i]).unwrap();
        items.swap(i, j);
        items[i + 1..].reverse();
    }
    out
}
