//! Logical optimization problems: weighted k-body spin terms plus product
//! side conditions.
//!
//! Spin convention throughout: bit 0 is the +1 eigenstate, bit 1 is −1.
//! Qubit indices are 1-based in files and 0-based everywhere else; the
//! conversion happens only in this module's parser and serializer.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A weighted k-body interaction: `coefficient · σ_{i1} … σ_{ik}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    /// Strictly ascending 0-based qubit indices.
    pub support: Vec<usize>,
    pub coefficient: f64,
}

/// A required spin-product value over a set of qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductConstraint {
    /// Strictly ascending 0-based qubit indices.
    pub support: Vec<usize>,
    /// Required product: +1 or −1.
    pub parity: i8,
}

/// A validated logical problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalProblem {
    pub num_qubits: usize,
    pub terms: Vec<Term>,
    pub constraints: Vec<ProductConstraint>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: qubit index {index} out of range 1..={num_qubits}")]
    IndexOutOfRange { line: usize, index: usize, num_qubits: usize },
    #[error("line {line}: duplicate term support {support:?}")]
    DuplicateTerm { line: usize, support: Vec<usize> },
    #[error("line {line}: zero coefficient (a zero-weight term still becomes a parity qubit; drop the line instead)")]
    ZeroCoefficient { line: usize },
    #[error("line {line}: coefficient is not finite")]
    NonFiniteCoefficient { line: usize },
    #[error("qubit count must be at least 1")]
    NoQubits,
    #[error("problem has no terms")]
    NoTerms,
    #[error("invalid problem json: {0}")]
    Json(String),
}

impl LogicalProblem {
    /// Construct and validate. Supports are sorted here; duplicate indices
    /// within a support or duplicate supports across terms are rejected.
    pub fn new(
        num_qubits: usize,
        terms: Vec<Term>,
        constraints: Vec<ProductConstraint>,
    ) -> Result<Self, ProblemError> {
        if num_qubits == 0 {
            return Err(ProblemError::NoQubits);
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut norm_terms = Vec::with_capacity(terms.len());
        for (i, mut t) in terms.into_iter().enumerate() {
            let line = i + 1;
            t.support.sort_unstable();
            if t.support.is_empty() {
                return Err(ProblemError::Syntax {
                    line,
                    col: 0,
                    msg: "empty term support".into(),
                });
            }
            if t.support.windows(2).any(|w| w[0] == w[1]) {
                return Err(ProblemError::Syntax {
                    line,
                    col: 0,
                    msg: "repeated qubit index within a term".into(),
                });
            }
            if let Some(&ix) = t.support.iter().find(|&&q| q >= num_qubits) {
                return Err(ProblemError::IndexOutOfRange {
                    line,
                    index: ix + 1,
                    num_qubits,
                });
            }
            if !t.coefficient.is_finite() {
                return Err(ProblemError::NonFiniteCoefficient { line });
            }
            if t.coefficient == 0.0 {
                return Err(ProblemError::ZeroCoefficient { line });
            }
            if !seen.insert(t.support.clone()) {
                return Err(ProblemError::DuplicateTerm {
                    line,
                    support: t.support.iter().map(|q| q + 1).collect(),
                });
            }
            norm_terms.push(t);
        }
        let mut norm_cons = Vec::with_capacity(constraints.len());
        for (i, mut c) in constraints.into_iter().enumerate() {
            let line = i + 1;
            c.support.sort_unstable();
            if c.support.is_empty() {
                return Err(ProblemError::Syntax {
                    line,
                    col: 0,
                    msg: "empty constraint support".into(),
                });
            }
            if c.support.windows(2).any(|w| w[0] == w[1]) {
                return Err(ProblemError::Syntax {
                    line,
                    col: 0,
                    msg: "repeated qubit index within a constraint".into(),
                });
            }
            if let Some(&ix) = c.support.iter().find(|&&q| q >= num_qubits) {
                return Err(ProblemError::IndexOutOfRange {
                    line,
                    index: ix + 1,
                    num_qubits,
                });
            }
            if c.parity != 1 && c.parity != -1 {
                return Err(ProblemError::Syntax {
                    line,
                    col: 0,
                    msg: "constraint parity must be +1 or -1".into(),
                });
            }
            norm_cons.push(c);
        }
        Ok(LogicalProblem {
            num_qubits,
            terms: norm_terms,
            constraints: norm_cons,
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Hamiltonian value of an assignment: Σ coefficient · Π spins.
    pub fn logical_energy(&self, assignment: &[u8]) -> f64 {
        assert_eq!(assignment.len(), self.num_qubits, "assignment length");
        self.terms
            .iter()
            .map(|t| {
                let parity: u8 = t.support.iter().fold(0, |p, &q| p ^ (assignment[q] & 1));
                if parity == 0 {
                    t.coefficient
                } else {
                    -t.coefficient
                }
            })
            .sum()
    }

    /// True iff every product constraint holds for the assignment.
    pub fn check_constraints(&self, assignment: &[u8]) -> bool {
        assert_eq!(assignment.len(), self.num_qubits, "assignment length");
        self.constraints.iter().all(|c| {
            let parity: u8 = c.support.iter().fold(0, |p, &q| p ^ (assignment[q] & 1));
            let product = if parity == 0 { 1 } else { -1 };
            product == c.parity
        })
    }

    /// Sum of |coefficient| over all terms.
    pub fn total_abs_coefficient(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Canonical text form; `parse_problem` of the output is the identity.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "qubits {}", self.num_qubits);
        for t in &self.terms {
            let sup: Vec<String> = t.support.iter().map(|q| (q + 1).to_string()).collect();
            let _ = writeln!(s, "term {} : {}", sup.join(" "), t.coefficient);
        }
        for c in &self.constraints {
            let sup: Vec<String> = c.support.iter().map(|q| (q + 1).to_string()).collect();
            let sign = if c.parity > 0 { "+1" } else { "-1" };
            let _ = writeln!(s, "constraint {} : {}", sup.join(" "), sign);
        }
        s
    }
}

/// Parse the line-oriented problem format.
///
/// ```text
/// # comment
/// qubits 5
/// term 1 2 : 1.0
/// constraint 1 2 4 : +1
/// ```
pub fn parse_problem(text: &str) -> Result<LogicalProblem, ProblemError> {
    let mut num_qubits: Option<usize> = None;
    let mut terms: Vec<(usize, Term)> = Vec::new();
    let mut constraints: Vec<(usize, ProductConstraint)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let keyword = parts.next().unwrap();
        match keyword {
            "qubits" => {
                let val = parts.next().ok_or_else(|| ProblemError::Syntax {
                    line,
                    col: keyword.len() + 1,
                    msg: "expected qubit count after `qubits`".into(),
                })?;
                let n: usize = val.parse().map_err(|_| ProblemError::Syntax {
                    line,
                    col: keyword.len() + 2,
                    msg: format!("invalid qubit count `{val}`"),
                })?;
                if num_qubits.replace(n).is_some() {
                    return Err(ProblemError::Syntax {
                        line,
                        col: 0,
                        msg: "duplicate `qubits` line".into(),
                    });
                }
            }
            "term" | "constraint" => {
                let rest: Vec<&str> = parts.collect();
                let sep = rest.iter().position(|&s| s == ":").ok_or_else(|| {
                    ProblemError::Syntax {
                        line,
                        col: content.len(),
                        msg: format!("missing `:` in `{keyword}` line"),
                    }
                })?;
                let (idx_part, val_part) = rest.split_at(sep);
                let val_part = &val_part[1..];
                if idx_part.is_empty() {
                    return Err(ProblemError::Syntax {
                        line,
                        col: keyword.len() + 1,
                        msg: "expected at least one qubit index".into(),
                    });
                }
                let mut support = Vec::with_capacity(idx_part.len());
                for tok in idx_part {
                    let q: usize = tok.parse().map_err(|_| ProblemError::Syntax {
                        line,
                        col: content.find(tok).unwrap_or(0) + 1,
                        msg: format!("invalid qubit index `{tok}`"),
                    })?;
                    if q == 0 {
                        return Err(ProblemError::Syntax {
                            line,
                            col: content.find(tok).unwrap_or(0) + 1,
                            msg: "qubit indices are 1-based".into(),
                        });
                    }
                    support.push(q - 1);
                }
                let [val] = val_part else {
                    return Err(ProblemError::Syntax {
                        line,
                        col: content.len(),
                        msg: format!("expected exactly one value after `:`, got {}", val_part.len()),
                    });
                };
                if keyword == "term" {
                    let coefficient: f64 = val.parse().map_err(|_| ProblemError::Syntax {
                        line,
                        col: content.rfind(val).unwrap_or(0) + 1,
                        msg: format!("invalid coefficient `{val}`"),
                    })?;
                    terms.push((line, Term { support, coefficient }));
                } else {
                    let parity = match *val {
                        "+1" | "1" => 1,
                        "-1" => -1,
                        other => {
                            return Err(ProblemError::Syntax {
                                line,
                                col: content.rfind(other).unwrap_or(0) + 1,
                                msg: format!("constraint parity must be +1 or -1, got `{other}`"),
                            })
                        }
                    };
                    constraints.push((line, ProductConstraint { support, parity }));
                }
            }
            other => {
                return Err(ProblemError::Syntax {
                    line,
                    col: 1,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }

    let num_qubits = num_qubits.ok_or(ProblemError::NoQubits)?;
    if terms.is_empty() {
        return Err(ProblemError::NoTerms);
    }
    build_with_lines(num_qubits, terms, constraints)
}

/// JSON form: `{num_qubits, terms: [{support, coefficient}], constraints:
/// [{support, parity}]}` with 1-based supports.
pub fn parse_problem_json(text: &str) -> Result<LogicalProblem, ProblemError> {
    #[derive(Deserialize)]
    struct JsonTerm {
        support: Vec<usize>,
        coefficient: f64,
    }
    #[derive(Deserialize)]
    struct JsonConstraint {
        support: Vec<usize>,
        parity: i8,
    }
    #[derive(Deserialize)]
    struct JsonProblem {
        num_qubits: usize,
        terms: Vec<JsonTerm>,
        #[serde(default)]
        constraints: Vec<JsonConstraint>,
    }
    let p: JsonProblem =
        serde_json::from_str(text).map_err(|e| ProblemError::Json(e.to_string()))?;
    if p.terms.is_empty() {
        return Err(ProblemError::NoTerms);
    }
    let to_zero_based = |sup: Vec<usize>, line: usize| -> Result<Vec<usize>, ProblemError> {
        sup.into_iter()
            .map(|q| {
                if q == 0 {
                    Err(ProblemError::Syntax {
                        line,
                        col: 0,
                        msg: "qubit indices are 1-based".into(),
                    })
                } else {
                    Ok(q - 1)
                }
            })
            .collect()
    };
    let terms = p
        .terms
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            Ok((
                i + 1,
                Term {
                    support: to_zero_based(t.support, i + 1)?,
                    coefficient: t.coefficient,
                },
            ))
        })
        .collect::<Result<Vec<_>, ProblemError>>()?;
    let constraints = p
        .constraints
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            Ok((
                i + 1,
                ProductConstraint {
                    support: to_zero_based(c.support, i + 1)?,
                    parity: c.parity,
                },
            ))
        })
        .collect::<Result<Vec<_>, ProblemError>>()?;
    build_with_lines(p.num_qubits, terms, constraints)
}

fn build_with_lines(
    num_qubits: usize,
    terms: Vec<(usize, Term)>,
    constraints: Vec<(usize, ProductConstraint)>,
) -> Result<LogicalProblem, ProblemError> {
    // run full validation, then remap error line numbers from positional
    // indices back to source lines
    let term_lines: Vec<usize> = terms.iter().map(|(l, _)| *l).collect();
    let con_lines: Vec<usize> = constraints.iter().map(|(l, _)| *l).collect();
    LogicalProblem::new(
        num_qubits,
        terms.into_iter().map(|(_, t)| t).collect(),
        constraints.into_iter().map(|(_, c)| c).collect(),
    )
    .map_err(|e| remap_line(e, &term_lines, &con_lines))
}

fn remap_line(e: ProblemError, term_lines: &[usize], con_lines: &[usize]) -> ProblemError {
    let pick = |line: usize| -> usize {
        term_lines
            .get(line - 1)
            .or_else(|| con_lines.get(line.saturating_sub(1)))
            .copied()
            .unwrap_or(line)
    };
    match e {
        ProblemError::Syntax { line, col, msg } => ProblemError::Syntax {
            line: pick(line),
            col,
            msg,
        },
        ProblemError::IndexOutOfRange { line, index, num_qubits } => {
            ProblemError::IndexOutOfRange { line: pick(line), index, num_qubits }
        }
        ProblemError::DuplicateTerm { line, support } => {
            ProblemError::DuplicateTerm { line: pick(line), support }
        }
        ProblemError::ZeroCoefficient { line } => ProblemError::ZeroCoefficient { line: pick(line) },
        ProblemError::NonFiniteCoefficient { line } => {
            ProblemError::NonFiniteCoefficient { line: pick(line) }
        }
        other => other,
    }
}

/// The five-qubit worked example used across the test suite: four pair
/// terms and two three-body terms, unit coefficients.
pub fn five_qubit_example() -> LogicalProblem {
    let supports: &[&[usize]] = &[&[0, 1], &[0, 4], &[1, 3], &[3, 4], &[0, 1, 2], &[2, 3, 4]];
    LogicalProblem::new(
        5,
        supports
            .iter()
            .map(|s| Term {
                support: s.to_vec(),
                coefficient: 1.0,
            })
            .collect(),
        vec![],
    )
    .unwrap()
}
