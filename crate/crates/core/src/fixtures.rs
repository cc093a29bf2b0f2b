//! Reference networks and states used throughout the crate, its tests and
//! the guide.
//!
//! Polarisation letters map to computational basis states as `h = |0⟩`,
//! `v = |1⟩`.

use num_complex::Complex64;

use crate::clifford::{LocalClifford, Mat2};
use crate::dense::DenseState;
use crate::error::Result;
use crate::graph::Graph;
use crate::pauli::Pauli;
use crate::state::GraphState;

/// Edges of the six-user network graph, 1-based.
pub const NETWORK_EDGES: [(usize, usize); 5] = [(1, 2), (2, 4), (3, 4), (4, 6), (5, 6)];

/// The six-user network graph.
pub fn network_graph() -> Graph {
    Graph::from_labeled_edges(6, &NETWORK_EDGES).expect("valid fixture")
}

/// Per-qubit rotations relating the fusion-circuit output to the network
/// graph state. Each is self-inverse.
pub fn network_rotations() -> Vec<LocalClifford> {
    let h = LocalClifford::hadamard();
    let z = LocalClifford::pauli(Pauli::Z);
    vec![h, z, h, z, h, z]
}

/// The state actually shared by the six users: the network graph state with
/// the rotation layer still applied.
pub fn network_state() -> GraphState {
    GraphState::with_frame(network_graph(), network_rotations()).expect("valid fixture")
}

/// Six-vertex ring, used for the every-round Bell multicast scenario.
pub fn ring6() -> Graph {
    Graph::ring(6).expect("valid fixture")
}

/// Signed terms of the post-fusion superposition (normalised by `1/√8`).
pub const FUSION_OUTPUT_TERMS: [(&str, i8); 8] = [
    ("hhhhhh", 1),
    ("hhhhvv", -1),
    ("hhvvhh", -1),
    ("hhvvvv", -1),
    ("vvhhhh", -1),
    ("vvhhvv", 1),
    ("vvvvhh", -1),
    ("vvvvvv", -1),
];

/// Dense form of [`FUSION_OUTPUT_TERMS`].
pub fn fusion_output_state() -> DenseState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 64];
    let a = 1.0 / 8f64.sqrt();
    for (word, sign) in FUSION_OUTPUT_TERMS {
        let idx = word
            .chars()
            .fold(0usize, |acc, ch| (acc << 1) | (ch == 'v') as usize);
        amps[idx] = Complex64::new(a * f64::from(sign), 0.0);
    }
    DenseState::from_amplitudes(6, amps).expect("normalised")
}

/// Output of the qubit-level fusion circuit and its heralding probability.
///
/// Inputs `|Φ+⟩_{12} |+⟩_3 |+⟩_4 |Φ+⟩_{56}`; fusions act as parity
/// projectors on modes (2,3) and (4,5), then on (3,4) after a Hadamard on
/// both; Pauli `Z` on modes 2, 4 and 6 completes the local phase correction.
pub fn fusion_circuit() -> Result<(DenseState, f64)> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 64];
    for i in 0..64usize {
        let bit = |q: usize| (i >> (5 - q)) & 1;
        if bit(0) == bit(1) && bit(4) == bit(5) {
            amps[i] = Complex64::new(0.5 * 0.5, 0.0);
        }
    }
    let mut s = DenseState::from_amplitudes(6, amps)?;
    let parity = |p: usize, q: usize| move |i: usize| ((i >> (5 - p)) & 1) == ((i >> (5 - q)) & 1);
    let mut prob = s.postselect(parity(1, 2))?;
    prob *= s.postselect(parity(3, 4))?;
    let h: Mat2 = LocalClifford::hadamard().matrix();
    s.apply_single(2, &h);
    s.apply_single(3, &h);
    prob *= s.postselect(parity(2, 3))?;
    for q in [1, 3, 5] {
        s.apply_pauli(q, Pauli::Z);
    }
    Ok((s, prob))
}
