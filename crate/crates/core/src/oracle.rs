//! Brute-force verification at desk scale.
//!
//! Exhaustively enumerates logical assignments and physical bit-strings
//! (caps at 2^20 states), checks that the compiled device ground states
//! decode to exactly the constrained logical optima, and that the energy
//! bookkeeping of the parity map holds to the last bit.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::ParityCode;
use crate::gf2::xor_bits;
use crate::layout::{Layout, PhysicalHamiltonian};
use crate::problem::LogicalProblem;

/// Largest enumerable qubit count.
pub const ENUMERATION_CAP: usize = 20;

/// Size the global worker pool used by the enumerations. Results do not
/// depend on the pool size; has no effect after the pool exists.
pub fn configure_threads(threads: usize) {
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{what} has {actual} qubits, above the exhaustive cap of {cap}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
    #[error("no assignment satisfies the product constraints")]
    EmptyFeasibleSet,
    #[error("degeneracy dimension {0} too large to expand orbits")]
    DegeneracyTooLarge(usize),
}

/// Exhaustive minimum with all witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub min_energy: f64,
    /// All minimizers, sorted; bit q of a state is `(index >> q) & 1`.
    pub optima: Vec<Vec<u8>>,
}

/// End-to-end comparison of the logical and physical ground spaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub logical_optimum: OptimumReport,
    pub physical_optimum: OptimumReport,
    /// True iff decoded physical ground states equal the logical optima
    /// modulo degeneracy flips and the energies match the plaquette
    /// bookkeeping.
    pub decoded_match: bool,
    /// Physical ground states violating at least one plaquette.
    pub constraint_violations_in_gs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimumReport {
    pub energy: f64,
    pub states: Vec<String>,
}

fn bits_of(index: u64, len: usize) -> Vec<u8> {
    (0..len).map(|q| ((index >> q) & 1) as u8).collect()
}

fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Minimum energy over all constraint-satisfying assignments.
pub fn logical_spectrum(problem: &LogicalProblem) -> Result<Spectrum, OracleError> {
    let n = problem.num_qubits;
    if n > ENUMERATION_CAP {
        return Err(OracleError::CapExceeded {
            what: "logical problem",
            actual: n,
            cap: ENUMERATION_CAP,
        });
    }
    let total: u64 = 1 << n;
    let result = (0..total)
        .into_par_iter()
        .fold(
            || (f64::INFINITY, Vec::new()),
            |(mut best, mut states), index| {
                let bits = bits_of(index, n);
                if !problem.check_constraints(&bits) {
                    return (best, states);
                }
                let e = problem.logical_energy(&bits);
                if e < best {
                    best = e;
                    states.clear();
                    states.push(bits);
                } else if e == best {
                    states.push(bits);
                }
                (best, states)
            },
        )
        .reduce(
            || (f64::INFINITY, Vec::new()),
            |(ea, mut sa), (eb, mut sb)| {
                if ea < eb {
                    (ea, sa)
                } else if eb < ea {
                    (eb, sb)
                } else {
                    sa.append(&mut sb);
                    (ea, sa)
                }
            },
        );
    let (min_energy, mut optima) = result;
    if optima.is_empty() {
        return Err(OracleError::EmptyFeasibleSet);
    }
    optima.sort_unstable();
    Ok(Spectrum { min_energy, optima })
}

/// Minimum energy over all physical bit-strings, with pinned qubits held
/// at bit 0. Also reports how many minimizers violate a plaquette.
pub fn physical_spectrum(ham: &PhysicalHamiltonian) -> Result<(Spectrum, usize), OracleError> {
    let pinned = &ham.pinned;
    let free: Vec<usize> = (0..ham.num_qubits).filter(|q| !pinned.contains(q)).collect();
    if free.len() > ENUMERATION_CAP {
        return Err(OracleError::CapExceeded {
            what: "physical system",
            actual: free.len(),
            cap: ENUMERATION_CAP,
        });
    }
    let total: u64 = 1 << free.len();
    let expand = |index: u64| -> Vec<u8> {
        let mut w = vec![0u8; ham.num_qubits];
        for (i, &q) in free.iter().enumerate() {
            w[q] = ((index >> i) & 1) as u8;
        }
        w
    };
    let result = (0..total)
        .into_par_iter()
        .fold(
            || (f64::INFINITY, Vec::new()),
            |(mut best, mut states), index| {
                let w = expand(index);
                let e = ham.energy(&w);
                if e < best {
                    best = e;
                    states.clear();
                    states.push(w);
                } else if e == best {
                    states.push(w);
                }
                (best, states)
            },
        )
        .reduce(
            || (f64::INFINITY, Vec::new()),
            |(ea, mut sa), (eb, mut sb)| {
                if ea < eb {
                    (ea, sa)
                } else if eb < ea {
                    (eb, sb)
                } else {
                    sa.append(&mut sb);
                    (ea, sa)
                }
            },
        );
    let (min_energy, mut optima) = result;
    optima.sort_unstable();
    let violations = optima.iter().filter(|w| ham.violation_count(w) > 0).count();
    Ok((Spectrum { min_energy, optima }, violations))
}

/// Field energy of a word under the raw term coefficients:
/// `Σ_a J_a·(−1)^{w_a}`. For every logical assignment `v`,
/// `field_energy(code, encode(v)) == logical_energy(v)` exactly — the
/// semantic theorem of the parity map.
pub fn field_energy(code: &ParityCode, w: &[u8]) -> f64 {
    assert!(w.len() >= code.num_parity(), "word length");
    code.coefficients()
        .iter()
        .enumerate()
        .map(|(a, &j)| if w[a] & 1 == 0 { j } else { -j })
        .sum()
}

/// Compare the brute-forced logical and physical ground spaces of a
/// compiled problem.
pub fn verify_pipeline(
    problem: &LogicalProblem,
    code: &ParityCode,
    layout: &Layout,
    strength: f64,
) -> Result<SpectrumReport, OracleError> {
    let logical = logical_spectrum(problem)?;
    let ham = crate::layout::emit_physical_hamiltonian(layout, code, strength);
    let (physical, violations) = physical_spectrum(&ham)?;

    // decoded ground states, expanded by the degeneracy orbit
    let basis = code.degeneracy_basis();
    if basis.rows() > 16 {
        return Err(OracleError::DegeneracyTooLarge(basis.rows()));
    }
    let mut orbit_vectors = vec![vec![0u8; code.num_logical()]];
    for r in 0..basis.rows() {
        let row = basis.row_bits(r);
        let mut extended: Vec<Vec<u8>> = orbit_vectors
            .iter()
            .map(|v| xor_bits(v, &row))
            .collect();
        orbit_vectors.append(&mut extended);
    }
    let mut decoded: Vec<Vec<u8>> = Vec::new();
    for w in &physical.optima {
        let v = code.decode_word(w);
        for flip in &orbit_vectors {
            decoded.push(xor_bits(&v, flip));
        }
    }
    decoded.sort_unstable();
    decoded.dedup();

    let sets_match = decoded == logical.optima;
    let expected_physical = logical.min_energy - strength * layout.plaquettes.len() as f64;
    let energy_match = physical.min_energy == expected_physical;

    Ok(SpectrumReport {
        logical_optimum: OptimumReport {
            energy: logical.min_energy,
            states: logical.optima.iter().map(|b| bits_to_string(b)).collect(),
        },
        physical_optimum: OptimumReport {
            energy: physical.min_energy,
            states: physical.optima.iter().map(|b| bits_to_string(b)).collect(),
        },
        decoded_match: sets_match && energy_match,
        constraint_violations_in_gs: violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{emit_physical_hamiltonian, lay_out, sufficient_strength, LayoutOptions};
    use crate::problem::{five_qubit_example, ProductConstraint, Term};
    use crate::projector::{build_projector_set, ProjectorMode};

    #[test]
    fn logical_spectrum_of_example() {
        // frozen from the first exhaustive run over all 32 states: both
        // minimizers set every one of the six products to −1
        let s = logical_spectrum(&five_qubit_example()).unwrap();
        assert_eq!(s.min_energy, -6.0);
        assert_eq!(s.optima.len(), 2);
        assert_eq!(s.optima[0], vec![0, 1, 0, 0, 1]);
        assert_eq!(s.optima[1], vec![1, 0, 0, 1, 0]);
    }

    #[test]
    fn logical_spectrum_single_spin() {
        let p = LogicalProblem::new(
            1,
            vec![Term { support: vec![0], coefficient: -1.0 }],
            vec![],
        )
        .unwrap();
        let s = logical_spectrum(&p).unwrap();
        assert_eq!(s.min_energy, -1.0);
        assert_eq!(s.optima, vec![vec![0]]);
    }

    #[test]
    fn logical_spectrum_empty_feasible_set() {
        let p = LogicalProblem::new(
            1,
            vec![Term { support: vec![0], coefficient: 1.0 }],
            vec![
                ProductConstraint { support: vec![0], parity: 1 },
                ProductConstraint { support: vec![0], parity: -1 },
            ],
        )
        .unwrap();
        assert_eq!(logical_spectrum(&p), Err(OracleError::EmptyFeasibleSet));
    }

    #[test]
    fn cap_is_enforced() {
        let p = LogicalProblem::new(
            25,
            vec![Term { support: vec![0], coefficient: 1.0 }],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            logical_spectrum(&p),
            Err(OracleError::CapExceeded { .. })
        ));
    }

    fn compile_example() -> (LogicalProblem, ParityCode, Layout) {
        let problem = five_qubit_example();
        let code = ParityCode::from_problem(&problem).unwrap();
        let set = build_projector_set(code.check(), ProjectorMode::Plaquette);
        let layout = lay_out(&set, &LayoutOptions::default()).unwrap();
        (problem, code, layout)
    }

    #[test]
    fn physical_ground_states_are_codewords_at_sufficient_strength() {
        let (problem, code, layout) = compile_example();
        let strength = sufficient_strength(problem.total_abs_coefficient());
        let ham = emit_physical_hamiltonian(&layout, &code, strength);
        let (spectrum, violations) = physical_spectrum(&ham).unwrap();
        assert_eq!(violations, 0);
        for w in &spectrum.optima {
            assert!(code.syndrome(w).iter().all(|&b| b == 0));
        }
    }

    /// Frustrated triangle: three antiferromagnetic pair terms on three
    /// qubits. The bare field optimum (all parity spins −1) violates the
    /// single weight-3 check row, so it needs the plaquette coupling.
    fn frustrated_triangle() -> (LogicalProblem, ParityCode, Layout) {
        let problem = LogicalProblem::new(
            3,
            vec![
                Term { support: vec![0, 1], coefficient: 1.0 },
                Term { support: vec![1, 2], coefficient: 1.0 },
                Term { support: vec![0, 2], coefficient: 1.0 },
            ],
            vec![],
        )
        .unwrap();
        let code = ParityCode::from_problem(&problem).unwrap();
        let set = build_projector_set(code.check(), ProjectorMode::Plaquette);
        let layout = lay_out(&set, &LayoutOptions::default()).unwrap();
        (problem, code, layout)
    }

    #[test]
    fn zero_strength_ground_states_violate_plaquettes() {
        let (_, code, layout) = frustrated_triangle();
        let ham = emit_physical_hamiltonian(&layout, &code, 0.0);
        let (_, violations) = physical_spectrum(&ham).unwrap();
        assert!(violations > 0);
    }

    #[test]
    fn empty_hamiltonian_is_flat() {
        let ham = PhysicalHamiltonian {
            num_qubits: 2,
            fields: vec![0.0, 0.0],
            offset: 0.0,
            plaquettes: vec![],
            strength: 1.0,
            pinned: vec![],
        };
        let (s, violations) = physical_spectrum(&ham).unwrap();
        assert_eq!(s.min_energy, 0.0);
        assert_eq!(s.optima.len(), 4);
        assert_eq!(violations, 0);
    }

    #[test]
    fn end_to_end_example_matches() {
        let (problem, code, layout) = compile_example();
        let strength = sufficient_strength(problem.total_abs_coefficient());
        let report = verify_pipeline(&problem, &code, &layout, strength).unwrap();
        assert!(report.decoded_match);
        assert_eq!(report.constraint_violations_in_gs, 0);
        assert_eq!(report.physical_optimum.energy, -6.0 - 2.0 * strength);
    }

    #[test]
    fn end_to_end_fails_at_zero_strength() {
        let (problem, code, layout) = frustrated_triangle();
        let report = verify_pipeline(&problem, &code, &layout, 0.0).unwrap();
        assert!(!report.decoded_match);
        let strength = sufficient_strength(problem.total_abs_coefficient());
        let good = verify_pipeline(&problem, &code, &layout, strength).unwrap();
        assert!(good.decoded_match);
    }

    #[test]
    fn constrained_fragment_respects_side_condition() {
        // terms (3,4), (3,5), (4,9) with the product of spins 5 and 9
        // constrained to +1
        let problem = LogicalProblem::new(
            9,
            vec![
                Term { support: vec![2, 3], coefficient: 1.0 },
                Term { support: vec![2, 4], coefficient: 1.0 },
                Term { support: vec![3, 8], coefficient: 1.0 },
            ],
            vec![ProductConstraint { support: vec![4, 8], parity: 1 }],
        )
        .unwrap();
        let code = ParityCode::from_problem(&problem).unwrap();
        let set = build_projector_set(code.check(), ProjectorMode::Plaquette);
        let layout = lay_out(&set, &LayoutOptions::default()).unwrap();
        let strength = sufficient_strength(problem.total_abs_coefficient());
        let ham = emit_physical_hamiltonian(&layout, &code, strength);
        let (spectrum, _) = physical_spectrum(&ham).unwrap();
        for w in &spectrum.optima {
            let v = code.decode_word(w);
            assert!(problem.check_constraints(&v), "decoded state violates the side condition");
        }
        let report = verify_pipeline(&problem, &code, &layout, strength).unwrap();
        assert!(report.decoded_match);
    }

    #[test]
    fn semantic_theorem_on_example() {
        let (problem, code, _) = compile_example();
        for v_bits in 0u32..32 {
            let v: Vec<u8> = (0..5).map(|q| (v_bits >> q & 1) as u8).collect();
            assert_eq!(field_energy(&code, &code.encode(&v)), problem.logical_energy(&v));
        }
    }
}
