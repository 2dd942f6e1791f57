//! The embedding map from logical problems to parity space.
//!
//! Every interaction term becomes one parity qubit whose Z-value carries
//! the product of the logical spins in the term. The map is packaged as a
//! classical linear code over GF(2):
//!
//! * generator `G` (N×K): column `a` marks the logical qubits of term `a`;
//!   encoding is `w = v·G`.
//! * check `P`: a basis of projection conditions; codewords satisfy
//!   `w·Pᵀ = 0`.
//! * decode `D` (N×K): a right-pseudoinverse of `G` on the code subspace,
//!   so `w·Dᵀ` recovers a logical assignment up to degeneracy flips.
//! * constraint `C`: rows mark logical qubits appearing in product side
//!   conditions; it restricts the logical space before `P` and `D` are
//!   derived.
//!
//! Product constraints with required value −1 are handled by carrying an
//! affine bit per constraint row. The GF(2) machinery operates on the
//! homogeneous part; a particular feasible assignment (the gauge) shifts
//! fields and decoded assignments so that the physical code space stays
//! the homogeneous one with all plaquette products +1.

use thiserror::Error;

use crate::gf2::{xor_bits, BitMatrix};
use crate::problem::LogicalProblem;

#[derive(Debug, Error, PartialEq)]
pub enum CodeError {
    #[error("product constraints are contradictory (no feasible assignment)")]
    InfeasibleConstraints,
    #[error("internal solve failed: {0}")]
    Solve(&'static str),
}

/// The compiled linear code for one logical problem.
#[derive(Debug, Clone)]
pub struct ParityCode {
    generator: BitMatrix,
    check: BitMatrix,
    decode: BitMatrix,
    constraint: BitMatrix,
    constraint_offsets: Vec<u8>,
    term_labels: Vec<Vec<usize>>,
    coefficients: Vec<f64>,
    degeneracy: usize,
    /// A particular constraint-satisfying logical assignment; all-zero
    /// unless some constraint requires product −1.
    gauge: Vec<u8>,
    /// `gauge · G`: the physical-frame shift of encoded words.
    gauge_word: Vec<u8>,
}

impl ParityCode {
    /// Build generator, check, decode and constraint matrices for a problem.
    pub fn from_problem(problem: &LogicalProblem) -> Result<Self, CodeError> {
        let n = problem.num_qubits;
        let (generator, term_labels) = build_generator(problem);
        let (constraint, constraint_offsets) = canonical_constraints(problem)?;
        let degeneracy = degeneracy_count(&generator, &constraint);
        let check = build_check(&generator, &constraint);
        let decode = build_decode(&generator, &check, &constraint)?;
        let gauge = if constraint_offsets.iter().any(|&b| b == 1) {
            let beta = BitMatrix::from_rows(
                &constraint_offsets.iter().map(|&b| vec![b]).collect::<Vec<_>>(),
            );
            let sol = constraint
                .solve_right(&beta)
                .ok_or(CodeError::InfeasibleConstraints)?;
            (0..n).map(|i| sol.get(i, 0) as u8).collect()
        } else {
            vec![0u8; n]
        };
        let gauge_word = generator.act_on_left(&gauge);
        Ok(ParityCode {
            generator,
            check,
            decode,
            constraint,
            constraint_offsets,
            term_labels,
            coefficients: problem.terms.iter().map(|t| t.coefficient).collect(),
            degeneracy,
            gauge,
            gauge_word,
        })
    }

    /// Reassemble a code from serialized matrices (layout artifacts). The
    /// gauge word is recomputed; matrix consistency is the caller's
    /// responsibility.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw_parts(
        generator: BitMatrix,
        check: BitMatrix,
        decode: BitMatrix,
        constraint: BitMatrix,
        constraint_offsets: Vec<u8>,
        term_labels: Vec<Vec<usize>>,
        coefficients: Vec<f64>,
        degeneracy: usize,
        gauge: Vec<u8>,
    ) -> Self {
        let gauge_word = generator.act_on_left(&gauge);
        ParityCode {
            generator,
            check,
            decode,
            constraint,
            constraint_offsets,
            term_labels,
            coefficients,
            degeneracy,
            gauge,
            gauge_word,
        }
    }

    pub fn num_logical(&self) -> usize {
        self.generator.rows()
    }

    /// Number of parity qubits (interaction terms).
    pub fn num_parity(&self) -> usize {
        self.generator.cols()
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn check(&self) -> &BitMatrix {
        &self.check
    }

    pub fn decode_matrix(&self) -> &BitMatrix {
        &self.decode
    }

    pub fn constraint_matrix(&self) -> &BitMatrix {
        &self.constraint
    }

    pub fn constraint_offsets(&self) -> &[u8] {
        &self.constraint_offsets
    }

    /// Logical-qubit sets, one per parity qubit, in term order.
    pub fn term_labels(&self) -> &[Vec<usize>] {
        &self.term_labels
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Dimension of the logical spin-flip symmetry group (flips leaving
    /// every term and constraint invariant).
    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    pub fn gauge(&self) -> &[u8] {
        &self.gauge
    }

    pub fn gauge_word(&self) -> &[u8] {
        &self.gauge_word
    }

    /// `w = v·G`.
    pub fn encode(&self, v: &[u8]) -> Vec<u8> {
        self.generator.act_on_left(v)
    }

    /// Physical-frame word of a logical assignment: `(v ⊕ gauge)·G`.
    /// Identical to `encode` when no −1 constraints are present.
    pub fn encode_physical(&self, v: &[u8]) -> Vec<u8> {
        self.generator.act_on_left(&xor_bits(v, &self.gauge))
    }

    /// Decode a physical-frame word: `w·Dᵀ ⊕ gauge`. Only the first K
    /// columns of `w` participate; ancilla columns are ignored.
    pub fn decode_word(&self, w: &[u8]) -> Vec<u8> {
        let k = self.num_parity();
        assert!(w.len() >= k, "word shorter than parity qubit count");
        let v = self.decode.transpose().act_on_left(&w[..k]);
        xor_bits(&v, &self.gauge)
    }

    /// `w·Pᵀ` against this code's check matrix. Zero iff `w` is a codeword.
    pub fn syndrome(&self, w: &[u8]) -> Vec<u8> {
        syndrome(&self.check, w)
    }

    /// Basis of the degeneracy group: logical flip vectors `s` with
    /// `s·G = 0` and `C·sᵀ = 0`.
    pub fn degeneracy_basis(&self) -> BitMatrix {
        stacked_relations(&self.generator, &self.constraint).null_space()
    }

    /// Accept any decoding matrix in the valid equivalence class: the
    /// candidate must invert the (constrained) encoding on a basis of the
    /// code subspace and decode into the constrained logical space.
    pub fn validate_decode(&self, candidate: &BitMatrix) -> bool {
        if candidate.rows() != self.num_logical() || candidate.cols() != self.num_parity() {
            return false;
        }
        let basis = codeword_basis(&self.generator, &self.constraint);
        let dt = candidate.transpose();
        for i in 0..basis.rows() {
            let w = basis.row_bits(i);
            let v = dt.act_on_left(&w);
            if self.generator.act_on_left(&v) != w {
                return false;
            }
            if !self.constraint.is_empty() {
                let residual = self.constraint.transpose().act_on_left(&v);
                if residual.iter().any(|&b| b == 1) {
                    return false;
                }
            }
        }
        true
    }

    /// Express a product constraint as a set of parity qubits whose
    /// logical pre-image equals the constraint support — an open cycle
    /// through the terms. Returns term/column indices, or `None` when no
    /// combination of existing terms produces the support.
    ///
    /// Among the solution coset the minimum-weight representative found by
    /// greedy descent over check-space basis vectors is returned.
    pub fn lift_constraint(&self, support: &[usize]) -> Option<Vec<usize>> {
        let n = self.num_logical();
        let mut target = BitMatrix::zeros(n, 1);
        for &q in support {
            assert!(q < n, "constraint index out of range");
            target.set(q, 0, true);
        }
        let x = self.generator.solve_right(&target)?;
        let mut lift: Vec<u8> = (0..self.num_parity()).map(|a| x.get(a, 0) as u8).collect();
        // the solution coset is lift + row space of the unconstrained
        // check; descend while any basis vector lowers the weight
        let kernel = self.generator.null_space();
        let weight = |v: &[u8]| v.iter().filter(|&&b| b == 1).count();
        let mut improved = true;
        while improved {
            improved = false;
            for r in 0..kernel.rows() {
                let cand = xor_bits(&lift, &kernel.row_bits(r));
                if weight(&cand) < weight(&lift) {
                    lift = cand;
                    improved = true;
                }
            }
        }
        Some(
            lift.iter()
                .enumerate()
                .filter_map(|(a, &b)| (b == 1).then_some(a))
                .collect(),
        )
    }

    /// Check a proposed lift: do the G-columns of `terms` sum to the
    /// indicator vector of `support`?
    pub fn is_valid_lift(&self, terms: &[usize], support: &[usize]) -> bool {
        let n = self.num_logical();
        let mut acc = vec![0u8; n];
        for &a in terms {
            for q in 0..n {
                acc[q] ^= self.generator.get(q, a) as u8;
            }
        }
        let mut target = vec![0u8; n];
        for &q in support {
            target[q] = 1;
        }
        acc == target
    }
}

/// N×K generator: column `a` has 1s at the qubits of term `a`, preserving
/// the problem's term order.
pub fn build_generator(problem: &LogicalProblem) -> (BitMatrix, Vec<Vec<usize>>) {
    let n = problem.num_qubits;
    let k = problem.terms.len();
    let mut g = BitMatrix::zeros(n, k);
    let mut labels = Vec::with_capacity(k);
    for (a, term) in problem.terms.iter().enumerate() {
        for &q in &term.support {
            g.set(q, a, true);
        }
        labels.push(term.support.clone());
    }
    (g, labels)
}

/// Maximal-rank matrix `P` with `v·G·Pᵀ = 0` for every `v` in the
/// constrained logical space. Unconstrained this is a null-space basis of
/// `G`; with constraints the null space is taken against the restricted
/// row space.
pub fn build_check(generator: &BitMatrix, constraint: &BitMatrix) -> BitMatrix {
    if constraint.is_empty() {
        generator.null_space()
    } else {
        let feasible = constraint.null_space();
        feasible.mul(generator).null_space()
    }
}

/// Any decode matrix solving the constrained pseudoinverse equations.
/// Deterministic: the particular solution with free variables zero.
pub fn build_decode(
    generator: &BitMatrix,
    check: &BitMatrix,
    constraint: &BitMatrix,
) -> Result<BitMatrix, CodeError> {
    let _ = check; // codeword basis is recomputed from G and C directly
    let n = generator.rows();
    let basis = codeword_basis(generator, constraint);
    let b = basis.rows();
    if b == 0 {
        return Ok(BitMatrix::zeros(n, generator.cols()));
    }
    // preimages: for each basis codeword w_i find u_i with u_i·G = w_i and
    // C·u_iᵀ = 0, solved jointly as [Gᵀ; C]·u_iᵀ = [w_iᵀ; 0]
    let relations = stacked_relations(generator, constraint);
    let mut targets = basis.transpose();
    if !constraint.is_empty() {
        targets = targets.vstack(&BitMatrix::zeros(constraint.rows(), b));
    }
    let preimages_t = relations
        .solve_right(&targets)
        .ok_or(CodeError::Solve("codeword preimage system inconsistent"))?;
    // D is defined by w_i·Dᵀ = u_i on the basis: solve B·Dᵀ = U
    let decode_t = basis
        .solve_right(&preimages_t.transpose())
        .ok_or(CodeError::Solve("decode system inconsistent"))?;
    Ok(decode_t.transpose())
}

/// Dimension of the spin-flip symmetry group: `N − rank` of the stacked
/// term/constraint relations.
pub fn degeneracy_count(generator: &BitMatrix, constraint: &BitMatrix) -> usize {
    generator.rows() - stacked_relations(generator, constraint).rank()
}

/// `w·Pᵀ` for an arbitrary check matrix; ancilla columns beyond the check
/// width are ignored.
pub fn syndrome(check: &BitMatrix, w: &[u8]) -> Vec<u8> {
    assert!(w.len() >= check.cols(), "word shorter than check width");
    (0..check.rows())
        .map(|r| check.row_dot(r, &w[..check.cols()]))
        .collect()
}

/// G-columns-as-rows stacked over the constraint rows: the relations every
/// degeneracy flip must annihilate.
fn stacked_relations(generator: &BitMatrix, constraint: &BitMatrix) -> BitMatrix {
    let gt = generator.transpose();
    if constraint.is_empty() {
        gt
    } else {
        gt.vstack(constraint)
    }
}

/// Row basis of the code subspace: images of the constrained logical space
/// under G, in RREF form.
fn codeword_basis(generator: &BitMatrix, constraint: &BitMatrix) -> BitMatrix {
    let image = if constraint.is_empty() {
        generator.clone()
    } else {
        constraint.null_space().mul(generator)
    };
    image.rref_nonzero()
}

/// Canonical constraint matrix: RREF of the raw rows with the affine bits
/// carried through; detects contradictory systems.
fn canonical_constraints(problem: &LogicalProblem) -> Result<(BitMatrix, Vec<u8>), CodeError> {
    let n = problem.num_qubits;
    if problem.constraints.is_empty() {
        return Ok((BitMatrix::zeros(0, n), Vec::new()));
    }
    let mut aug = BitMatrix::zeros(problem.constraints.len(), n + 1);
    for (i, c) in problem.constraints.iter().enumerate() {
        for &q in &c.support {
            aug.set(i, q, true);
        }
        if c.parity < 0 {
            aug.set(i, n, true);
        }
    }
    let (r, pivots) = aug.rref();
    if pivots.contains(&n) {
        return Err(CodeError::InfeasibleConstraints);
    }
    let rows: Vec<usize> = (0..pivots.len()).collect();
    let canon = r.select_rows(&rows);
    let offsets: Vec<u8> = rows.iter().map(|&i| canon.get(i, n) as u8).collect();
    Ok((canon.col_slice(0, n), offsets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{five_qubit_example, LogicalProblem, ProductConstraint, Term};

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn example_generator_matrix() -> BitMatrix {
        m(&[
            &[1, 1, 0, 0, 1, 0],
            &[1, 0, 1, 0, 1, 0],
            &[0, 0, 0, 0, 1, 1],
            &[0, 0, 1, 1, 0, 1],
            &[0, 1, 0, 1, 0, 1],
        ])
    }

    fn example_check_matrix() -> BitMatrix {
        m(&[&[1, 1, 1, 1, 0, 0], &[1, 0, 0, 1, 1, 1]])
    }

    fn example_decode_matrix() -> BitMatrix {
        m(&[
            &[1, 0, 1, 1, 0, 0],
            &[0, 0, 1, 1, 0, 0],
            &[0, 0, 0, 1, 0, 1],
            &[0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 0, 0],
        ])
    }

    fn constrained_example() -> LogicalProblem {
        let mut p = five_qubit_example();
        p.constraints.push(ProductConstraint {
            support: vec![0, 1, 3],
            parity: 1,
        });
        p
    }

    #[test]
    fn generator_matches_worked_example() {
        let (g, labels) = build_generator(&five_qubit_example());
        assert_eq!(g, example_generator_matrix());
        assert_eq!(labels[4], vec![0, 1, 2]);
    }

    #[test]
    fn generator_single_term() {
        let p = LogicalProblem::new(
            1,
            vec![Term {
                support: vec![0],
                coefficient: 1.0,
            }],
            vec![],
        )
        .unwrap();
        let (g, _) = build_generator(&p);
        assert_eq!(g, m(&[&[1]]));
    }

    #[test]
    fn generator_disjoint_pairs() {
        let p = LogicalProblem::new(
            4,
            vec![
                Term { support: vec![0, 1], coefficient: 1.0 },
                Term { support: vec![2, 3], coefficient: 1.0 },
            ],
            vec![],
        )
        .unwrap();
        let (g, _) = build_generator(&p);
        assert_eq!(g, m(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]));
    }

    #[test]
    fn check_matrix_matches_example_row_space() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        assert_eq!(code.check().rows(), 2);
        assert!(code.check().row_space_equal(&example_check_matrix()));
    }

    #[test]
    fn check_matrix_unchanged_by_degeneracy_fixing_constraint() {
        let code = ParityCode::from_problem(&constrained_example()).unwrap();
        assert!(code.check().row_space_equal(&example_check_matrix()));
        assert_eq!(code.degeneracy(), 0);
    }

    #[test]
    fn check_of_injective_encoding_is_empty() {
        let p = LogicalProblem::new(
            3,
            (0..3)
                .map(|q| Term { support: vec![q], coefficient: 1.0 })
                .collect(),
            vec![],
        )
        .unwrap();
        let code = ParityCode::from_problem(&p).unwrap();
        assert_eq!(code.check().rows(), 0);
        assert_eq!(code.decode_matrix(), &BitMatrix::identity(3));
    }

    #[test]
    fn degeneracy_counts() {
        let g = example_generator_matrix();
        let none = BitMatrix::zeros(0, 5);
        assert_eq!(degeneracy_count(&g, &none), 1);
        let c = m(&[&[1, 1, 0, 1, 0]]);
        assert_eq!(degeneracy_count(&g, &c), 0);
        assert_eq!(degeneracy_count(&BitMatrix::identity(4), &BitMatrix::zeros(0, 4)), 0);
    }

    #[test]
    fn computed_decode_validates() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        assert!(code.validate_decode(code.decode_matrix()));
    }

    #[test]
    fn paper_decode_matrices_validate() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        assert!(code.validate_decode(&example_decode_matrix()));
        // the printed variant: first row plus the second check row
        let variant = m(&[
            &[0, 0, 1, 0, 1, 1],
            &[0, 0, 1, 1, 0, 0],
            &[0, 0, 0, 1, 0, 1],
            &[0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 0, 0],
        ]);
        assert!(code.validate_decode(&variant));
        // one arbitrary extra bit flip breaks it
        let mut broken = example_decode_matrix();
        broken.set(1, 2, !broken.get(1, 2));
        assert!(!code.validate_decode(&broken));
    }

    #[test]
    fn constrained_paper_decode_validates() {
        let code = ParityCode::from_problem(&constrained_example()).unwrap();
        let d = m(&[
            &[0, 0, 1, 0, 0, 0],
            &[1, 0, 1, 0, 0, 0],
            &[0, 0, 0, 1, 0, 1],
            &[1, 0, 0, 0, 0, 0],
            &[1, 0, 0, 1, 0, 0],
        ]);
        assert!(code.validate_decode(&d));
        assert!(code.validate_decode(code.decode_matrix()));
    }

    #[test]
    fn adding_check_rows_to_decode_rows_stays_valid() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        let base = example_decode_matrix();
        for pr in 0..code.check().rows() {
            let check_row = code.check().row_bits(pr);
            for dr in 0..base.rows() {
                let mut d = base.clone();
                for (c, &bit) in check_row.iter().enumerate() {
                    if bit == 1 {
                        d.set(dr, c, !d.get(dr, c));
                    }
                }
                assert!(code.validate_decode(&d), "check row {pr} into decode row {dr}");
            }
        }
    }

    #[test]
    fn encode_examples() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        assert_eq!(code.encode(&[0, 0, 0, 0, 0]), vec![0, 0, 0, 0, 0, 0]);
        assert_eq!(code.encode(&[1, 0, 0, 0, 0]), vec![1, 1, 0, 0, 1, 0]);
        // degenerate flip of qubits 1, 2, 4, 5 encodes to zero
        assert_eq!(code.encode(&[1, 1, 0, 1, 1]), vec![0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn encode_lands_in_code_space_and_round_trips() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        let deg = code.degeneracy_basis();
        for v_bits in 0u32..32 {
            let v: Vec<u8> = (0..5).map(|q| (v_bits >> q & 1) as u8).collect();
            let w = code.encode(&v);
            assert!(code.syndrome(&w).iter().all(|&b| b == 0));
            let back = code.decode_word(&w);
            assert_eq!(code.encode(&back), w, "encode∘decode∘encode fixed point");
            // decoded assignment differs from v by a degeneracy flip
            let diff = xor_bits(&back, &v);
            let span = deg.vstack(&BitMatrix::from_rows(&[diff.clone()]));
            assert_eq!(span.rank(), deg.rank(), "difference {diff:?} outside degeneracy group");
        }
    }

    #[test]
    fn syndrome_of_single_flip() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        // against the paper-form check matrix both conditions fire
        assert_eq!(syndrome(&example_check_matrix(), &[1, 0, 0, 0, 0, 0]), vec![1, 1]);
        // against the computed check the syndrome is just nonzero
        assert!(code.syndrome(&[1, 0, 0, 0, 0, 0]).iter().any(|&b| b == 1));
    }

    #[test]
    fn infeasible_constraints_detected() {
        let p = LogicalProblem::new(
            2,
            vec![Term { support: vec![0, 1], coefficient: 1.0 }],
            vec![
                ProductConstraint { support: vec![0], parity: 1 },
                ProductConstraint { support: vec![0], parity: -1 },
            ],
        )
        .unwrap();
        assert!(matches!(
            ParityCode::from_problem(&p),
            Err(CodeError::InfeasibleConstraints)
        ));
        // an odd cycle of −1 pair constraints is also contradictory
        let q = LogicalProblem::new(
            3,
            vec![Term { support: vec![0, 1], coefficient: 1.0 }],
            vec![
                ProductConstraint { support: vec![0, 1], parity: -1 },
                ProductConstraint { support: vec![1, 2], parity: -1 },
                ProductConstraint { support: vec![0, 2], parity: -1 },
            ],
        )
        .unwrap();
        assert!(matches!(
            ParityCode::from_problem(&q),
            Err(CodeError::InfeasibleConstraints)
        ));
    }

    #[test]
    fn negative_parity_gauge() {
        // σ_1 = −1 forced: gauge must satisfy it and decode must land on
        // feasible assignments
        let p = LogicalProblem::new(
            2,
            vec![
                Term { support: vec![0], coefficient: 1.0 },
                Term { support: vec![0, 1], coefficient: 0.5 },
            ],
            vec![ProductConstraint { support: vec![0], parity: -1 }],
        )
        .unwrap();
        let code = ParityCode::from_problem(&p).unwrap();
        assert_eq!(code.gauge()[0], 1);
        // a feasible v: bit 0 set
        let v = vec![1u8, 0];
        let w_phys = code.encode_physical(&v);
        assert!(code.syndrome(&w_phys).iter().all(|&b| b == 0));
        let back = code.decode_word(&w_phys);
        assert!(p.check_constraints(&back));
        assert_eq!(p.logical_energy(&back), p.logical_energy(&v));
    }

    #[test]
    fn lift_constraint_examples() {
        // terms (3,4), (3,5), (4,9) on ten qubits lift the (5,9) condition
        let p = LogicalProblem::new(
            10,
            vec![
                Term { support: vec![2, 3], coefficient: 1.0 },
                Term { support: vec![2, 4], coefficient: 1.0 },
                Term { support: vec![3, 8], coefficient: 1.0 },
            ],
            vec![],
        )
        .unwrap();
        let code = ParityCode::from_problem(&p).unwrap();
        let lift = code.lift_constraint(&[4, 8]).unwrap();
        assert_eq!(lift, vec![0, 1, 2]);
        assert!(code.is_valid_lift(&lift, &[4, 8]));
        assert!(code.is_valid_lift(&[0, 1, 2], &[4, 8]));
    }

    #[test]
    fn lift_prefers_existing_term() {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        assert_eq!(code.lift_constraint(&[0, 1]), Some(vec![0]));
    }

    #[test]
    fn lift_through_open_loop_of_length_four() {
        // no direct (2,3) edge; the condition lifts through a 3-term path
        let p = LogicalProblem::new(
            4,
            vec![
                Term { support: vec![0, 1], coefficient: 1.0 },
                Term { support: vec![0, 3], coefficient: 1.0 },
                Term { support: vec![2, 3], coefficient: 1.0 },
            ],
            vec![],
        )
        .unwrap();
        let code = ParityCode::from_problem(&p).unwrap();
        let lift = code.lift_constraint(&[1, 2]).unwrap();
        assert_eq!(lift.len(), 3);
        assert!(code.is_valid_lift(&lift, &[1, 2]));
    }

    #[test]
    fn lift_absent_when_unreachable() {
        let p = LogicalProblem::new(
            4,
            vec![Term { support: vec![0, 1], coefficient: 1.0 }],
            vec![],
        )
        .unwrap();
        let code = ParityCode::from_problem(&p).unwrap();
        assert_eq!(code.lift_constraint(&[2, 3]), None);
    }

    #[test]
    fn check_row_count_identity() {
        // rows(P) = K − N + rank(C) + degeneracy
        for problem in [five_qubit_example(), constrained_example()] {
            let code = ParityCode::from_problem(&problem).unwrap();
            let expected = code.num_parity() + code.constraint_matrix().rank() + code.degeneracy()
                - code.num_logical();
            assert_eq!(code.check().rows(), expected);
        }
    }
}
