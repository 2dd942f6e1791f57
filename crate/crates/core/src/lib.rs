//! Compiler core for parity-encoded optimization problems.
//!
//! Pipelines a logical problem (arbitrary k-body Ising terms plus product
//! side conditions) through the parity transformation onto 2D square
//! lattices:
//!
//! 1. [`problem`] — parse and validate the logical problem.
//! 2. [`code`] — derive the GF(2) generator/check/decode/constraint
//!    matrices of the parity code.
//! 3. [`projector`] — reshape check rows to hardware weights, adding
//!    ancillas where needed.
//! 4. [`layout`] — place parity qubits so each projector is a square or
//!    triangle plaquette (analog devices).
//! 5. [`cnot`] / [`circuit`] — place projectors contiguously and emit
//!    CNOT-tree + Rz circuits (digital devices).
//! 6. [`decoder`] — minimal readout sets, majority-vote correction and
//!    decoding back to logical assignments.
//! 7. [`oracle`] — exhaustive desk-scale verification of the whole chain.

pub mod artifact;
pub mod circuit;
pub mod cnot;
pub mod code;
pub mod decoder;
pub mod gf2;
pub mod instances;
pub mod layout;
pub mod oracle;
pub mod problem;
pub mod projector;
pub mod render;

pub use circuit::{schedule, Circuit, Gate};
pub use cnot::{emit_circuit, lay_out_contiguous, CnotLayout, ProjectorTree};
pub use code::{CodeError, ParityCode};
pub use decoder::{build_readout_set, correct_and_decode, DecodeOutcome, ReadoutSet};
pub use gf2::BitMatrix;
pub use layout::{lay_out, Layout, LayoutOptions, PhysicalHamiltonian, Plaquette, PlaquetteKind};
pub use oracle::{verify_pipeline, SpectrumReport};
pub use problem::{parse_problem, parse_problem_json, LogicalProblem, ProductConstraint, Term};
pub use projector::{build_projector_set, AncillaRecord, ProjectorMode, ProjectorSet};
