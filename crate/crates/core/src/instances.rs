//! Seeded random problem generation for tests and benchmarks.
//!
//! Coefficients are nonzero multiples of 1/4 with small magnitude, so all
//! downstream energy sums are exact in double precision and equality
//! checks against the brute-force oracle need no tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problem::{LogicalProblem, ProductConstraint, Term};

#[derive(Debug, Clone)]
pub struct InstanceParams {
    /// Logical qubit count range (inclusive).
    pub qubits: (usize, usize),
    /// Term count range (inclusive); capped by the number of distinct
    /// supports available.
    pub terms: (usize, usize),
    /// Largest interaction order k.
    pub max_order: usize,
    /// Probability of attaching product constraints.
    pub constraint_probability: f64,
    /// Permit −1 parities on generated constraints.
    pub allow_negative_parity: bool,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            qubits: (2, 6),
            terms: (1, 10),
            max_order: 3,
            constraint_probability: 0.3,
            allow_negative_parity: false,
        }
    }
}

/// Generate a validated random problem. The same seed and parameters
/// always produce the same problem.
pub fn random_problem(seed: u64, params: &InstanceParams) -> LogicalProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(params.qubits.0..=params.qubits.1);
    let want_terms = rng.gen_range(params.terms.0..=params.terms.1);
    let mut supports = std::collections::BTreeSet::new();
    let mut attempts = 0;
    while supports.len() < want_terms && attempts < want_terms * 20 {
        attempts += 1;
        let order = rng.gen_range(1..=params.max_order.min(n));
        let mut support = std::collections::BTreeSet::new();
        while support.len() < order {
            support.insert(rng.gen_range(0..n));
        }
        supports.insert(support.into_iter().collect::<Vec<usize>>());
    }
    let terms: Vec<Term> = supports
        .into_iter()
        .map(|support| Term {
            support,
            coefficient: dyadic_coefficient(&mut rng),
        })
        .collect();
    let mut constraints = Vec::new();
    if rng.gen_bool(params.constraint_probability) {
        let count = rng.gen_range(1..=2);
        for _ in 0..count {
            let order = rng.gen_range(1..=3.min(n));
            let mut support = std::collections::BTreeSet::new();
            while support.len() < order {
                support.insert(rng.gen_range(0..n));
            }
            let parity = if params.allow_negative_parity && rng.gen_bool(0.5) {
                -1
            } else {
                1
            };
            constraints.push(ProductConstraint {
                support: support.into_iter().collect(),
                parity,
            });
        }
    }
    LogicalProblem::new(n, terms, constraints).expect("generated problems are valid")
}

/// Nonzero multiple of 1/4 in [−4, 4].
fn dyadic_coefficient(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let quarters: i32 = rng.gen_range(-16..=16);
        if quarters != 0 {
            return f64::from(quarters) * 0.25;
        }
    }
}
