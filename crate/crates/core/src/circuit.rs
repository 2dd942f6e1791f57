//! Gate-level circuit representation with parallel moment scheduling.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// A primitive gate. CNOT endpoints are grid-adjacent physical qubits by
/// construction of the projector trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Gate {
    #[serde(rename = "cx")]
    Cnot { control: usize, target: usize },
    #[serde(rename = "rz")]
    Rz { qubit: usize, angle: f64 },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Rz { qubit, .. } => vec![qubit],
        }
    }
}

/// An ordered gate list plus a partition into parallel layers. The gate
/// sequence is always a linearization of the moment partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    /// Gate indices per layer; within a layer no qubit appears twice.
    pub moments: Vec<Vec<usize>>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            moments: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        let idx = self.gates.len();
        self.gates.push(gate);
        self.moments.push(vec![idx]);
    }

    pub fn depth(&self) -> usize {
        self.moments.len()
    }

    /// True iff no qubit appears twice within any moment and the gate
    /// order is consistent with the moment order.
    pub fn moments_valid(&self) -> bool {
        let mut seen_idx = vec![None; self.gates.len()];
        for (m, layer) in self.moments.iter().enumerate() {
            let mut used = std::collections::BTreeSet::new();
            for &gi in layer {
                if gi >= self.gates.len() || seen_idx[gi].replace(m).is_some() {
                    return false;
                }
                for q in self.gates[gi].qubits() {
                    if !used.insert(q) {
                        return false;
                    }
                }
            }
        }
        if seen_idx.iter().any(|m| m.is_none()) {
            return false;
        }
        // linearization: moment indices are non-decreasing along the list
        seen_idx.windows(2).all(|w| w[0] <= w[1])
    }

    /// Minimal text form, one gate per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "// qubits {}", self.num_qubits);
        for gate in &self.gates {
            match *gate {
                Gate::Cnot { control, target } => {
                    let _ = writeln!(s, "cx {control} {target};");
                }
                Gate::Rz { qubit, angle } => {
                    let _ = writeln!(s, "rz({angle}) {qubit};");
                }
            }
        }
        s
    }
}

/// Greedy as-soon-as-possible scheduling: each gate lands in the earliest
/// moment after every gate it shares a qubit with. Shared-qubit order is
/// preserved; the gate list is stably reordered so it linearizes the new
/// partition.
pub fn schedule(circuit: &Circuit) -> Circuit {
    let mut next_free = vec![0usize; circuit.num_qubits];
    let mut assigned: Vec<(usize, Gate)> = Vec::with_capacity(circuit.gates.len());
    for gate in &circuit.gates {
        let moment = gate
            .qubits()
            .iter()
            .map(|&q| next_free[q])
            .max()
            .unwrap_or(0);
        for q in gate.qubits() {
            next_free[q] = moment + 1;
        }
        assigned.push((moment, gate.clone()));
    }
    let depth = assigned.iter().map(|&(m, _)| m + 1).max().unwrap_or(0);
    // stable by moment: shared-qubit gates have strictly increasing
    // moments, so their relative order survives
    let mut order: Vec<usize> = (0..assigned.len()).collect();
    order.sort_by_key(|&i| assigned[i].0);
    let mut gates = Vec::with_capacity(assigned.len());
    let mut moments = vec![Vec::new(); depth];
    for &i in &order {
        let (m, ref g) = assigned[i];
        moments[m].push(gates.len());
        gates.push(g.clone());
    }
    Circuit {
        num_qubits: circuit.num_qubits,
        gates,
        moments,
    }
}
