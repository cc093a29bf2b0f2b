//! Graph states carrying a local-Clifford frame.
//!
//! A [`GraphState`] represents `ω^k · (⊗_v C_v) |G⟩` with `ω = exp(iπ/4)`,
//! where `|G⟩ = ∏_{(u,v)∈E} CZ_uv |+⟩^{⊗n}` and `C_v` is the frame Clifford of
//! vertex `v`. The exponent `k` is only kept when phase tracking is enabled.
//!
//! Frames are stored in a canonical form: every frame maps `Z` to a positively
//! signed Pauli. Any frame can be brought there by multiplying with a
//! stabilizer generator `K_v = X_v ∏_{u∈N(v)} Z_u`, which leaves the state
//! untouched, and the canonical choice is unique. Consequently two
//! [`GraphState`] values with equal graphs represent the same state (up to
//! phase) iff their frames are equal, and local complementation applied twice
//! at the same vertex restores both graph and frame exactly.
//!
//! Measured vertices keep their index. They become isolated and inactive, and
//! their frame records the post-measurement single-qubit state, so
//! [`GraphState::to_dense`] still describes all `n` qubits.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::clifford::{omega, sqrt_pauli, LocalClifford, Mat2};
use crate::dense::{DenseState, DENSE_CAP};
use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Vertex};
use crate::pauli::{Basis, Pauli, SignedPauli};

const EQ_TOL: f64 = 1e-10;

/// A Clifford together with the phase of a specific matrix representative:
/// `matrix = ω^phase · M(clifford)`.
#[derive(Clone, Copy, Debug)]
struct PhasedClifford {
    clifford: LocalClifford,
    phase: u8,
}

impl PhasedClifford {
    fn of(m: &Mat2) -> Self {
        let (clifford, phase) = LocalClifford::from_matrix(m).expect("Clifford matrix");
        PhasedClifford { clifford, phase }
    }
}

struct Gates {
    /// `√(+iX)`, the inverse of the target rotation of local complementation.
    t_dag: PhasedClifford,
    /// `√(-iZ)`, the inverse of the neighbour rotation.
    n_dag: PhasedClifford,
    x: PhasedClifford,
    z: PhasedClifford,
}

fn gates() -> &'static Gates {
    static GATES: OnceLock<Gates> = OnceLock::new();
    GATES.get_or_init(|| Gates {
        t_dag: PhasedClifford::of(&sqrt_pauli(Pauli::X, true)),
        n_dag: PhasedClifford::of(&sqrt_pauli(Pauli::Z, false)),
        x: PhasedClifford::of(&crate::clifford::pauli_matrix(Pauli::X)),
        z: PhasedClifford::of(&crate::clifford::pauli_matrix(Pauli::Z)),
    })
}

/// Outcome of a single-vertex Pauli measurement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub vertex: Vertex,
    pub basis: Basis,
    pub outcome: u8,
    /// Paulis `R_u` with `branch(outcome) = ⊗ R_u · branch(0)` on the remaining
    /// vertices, up to global phase. Empty for outcome 0.
    pub byproduct: Vec<(Vertex, Pauli)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphState {
    graph: Graph,
    frame: Vec<LocalClifford>,
    active: u32,
    phase: Option<u8>,
}

/// Graph state with identity frame on `n` vertices and the given 0-based edges.
pub fn build_graph_state(n: usize, edges: &[(Vertex, Vertex)]) -> Result<GraphState> {
    Ok(GraphState::new(Graph::from_edges(n, edges)?))
}

impl GraphState {
    pub fn new(graph: Graph) -> Self {
        let n = graph.n();
        let active = graph.all_mask();
        GraphState {
            graph,
            frame: vec![LocalClifford::identity(); n],
            active,
            phase: None,
        }
    }

    /// `(⊗ frame[v]) |G⟩`; the frame is canonicalized.
    pub fn with_frame(graph: Graph, frame: Vec<LocalClifford>) -> Result<Self> {
        if frame.len() != graph.n() {
            return Err(Error::ArityMismatch {
                expected: graph.n(),
                found: frame.len(),
            });
        }
        let mut gs = GraphState::new(graph);
        gs.frame = frame;
        gs.canonicalize();
        Ok(gs)
    }

    /// Enables global phase tracking, taking the current representative as
    /// phase 0.
    pub fn with_phase_tracking(mut self) -> Self {
        self.phase = Some(0);
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn frame(&self) -> &[LocalClifford] {
        &self.frame
    }

    pub fn active_mask(&self) -> u32 {
        self.active
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        v < self.n() && self.active & (1 << v) != 0
    }

    pub fn phase(&self) -> Option<u8> {
        self.phase
    }

    pub fn phase_tracked(&self) -> bool {
        self.phase.is_some()
    }

    fn add_phase(&mut self, k: u8) {
        if let Some(p) = &mut self.phase {
            *p = (*p + k) % 8;
        }
    }

    /// `frame[v] ← frame[v] · g` (right multiplication).
    fn right_mul(&mut self, v: Vertex, g: PhasedClifford) {
        let (c, k) = self.frame[v].compose_with_phase(g.clifford);
        self.frame[v] = c;
        self.add_phase((k + g.phase) % 8);
    }

    fn canonicalize(&mut self) {
        let g = gates();
        for v in 0..self.n() {
            if self.frame[v].conjugate(Pauli::Z).negative {
                self.right_mul(v, g.x);
                for u in bits(self.graph.neighbors(v)) {
                    self.right_mul(u, g.z);
                }
            }
        }
    }

    /// Applies the physical single-qubit Clifford `c` (canonical matrix) to
    /// vertex `v`.
    pub fn apply_local_clifford(&mut self, v: Vertex, c: LocalClifford) -> Result<()> {
        self.graph.check(v)?;
        let (r, k) = c.compose_with_phase(self.frame[v]);
        self.frame[v] = r;
        self.add_phase(k);
        self.canonicalize();
        Ok(())
    }

    /// Applies a Pauli byproduct (for instance to undo one).
    pub fn apply_byproduct(&mut self, byproduct: &[(Vertex, Pauli)]) -> Result<()> {
        for &(v, p) in byproduct {
            let m = crate::clifford::pauli_matrix(p);
            let pc = PhasedClifford::of(&m);
            self.graph.check(v)?;
            let (r, k) = pc.clifford.compose_with_phase(self.frame[v]);
            self.frame[v] = r;
            self.add_phase((k + pc.phase) % 8);
        }
        self.canonicalize();
        Ok(())
    }

    /// Local complementation at `v` with the frame absorbing the local
    /// Cliffords, so the represented state is unchanged.
    pub fn local_complement(&self, v: Vertex) -> Result<GraphState> {
        self.graph.check(v)?;
        let mut out = self.clone();
        let g = gates();
        let deg = self.graph.degree(v) as u8;
        // U|G⟩ = ω^(deg-1) |τ_v G⟩ with U = √(-iX_v) ∏ √(iZ_u)
        out.add_phase((deg + 7) % 8);
        out.right_mul(v, g.t_dag);
        for u in bits(self.graph.neighbors(v)) {
            out.right_mul(u, g.n_dag);
        }
        out.graph.local_complement(v);
        out.canonicalize();
        Ok(out)
    }

    /// The bare Pauli (with sign) measured on the underlying graph state when
    /// `basis` is measured physically on `v`.
    pub fn bare_observable(&self, v: Vertex, basis: Basis) -> SignedPauli {
        self.frame[v].inverse().conjugate(basis.pauli())
    }

    /// Physical outcome probabilities `[p(0), p(1)]`.
    pub fn outcome_probabilities(&self, v: Vertex, basis: Basis) -> Result<[f64; 2]> {
        self.graph.check(v)?;
        if !self.is_active(v) {
            return Err(Error::VertexNotPresent(v));
        }
        let bare = self.bare_observable(v, basis);
        if self.graph.neighbors(v) == 0 && bare.pauli == Pauli::X {
            let mut p = [0.0; 2];
            p[bare.negative as usize] = 1.0;
            Ok(p)
        } else {
            Ok([0.5, 0.5])
        }
    }

    /// Measures `v` in `basis`, post-selecting on `outcome`.
    pub fn measure_vertex(
        &self,
        basis: Basis,
        v: Vertex,
        outcome: u8,
    ) -> Result<(GraphState, MeasurementRecord)> {
        let probs = self.outcome_probabilities(v, basis)?;
        if outcome > 1 || probs[outcome as usize] == 0.0 {
            return Err(Error::ZeroProbabilityOutcome {
                vertex: v,
                basis: basis.to_char(),
                outcome,
            });
        }
        let bare = self.bare_observable(v, basis);
        let bare_outcome = outcome ^ bare.negative as u8;
        let (graph, rotations) = bare_rule(&self.graph, v, bare.pauli, bare_outcome);

        let mut out = self.clone();
        out.phase = None;
        for &(u, ref m) in &rotations {
            let c = LocalClifford::from_matrix(m).expect("Clifford").0;
            out.frame[u] = out.frame[u].compose(c);
        }
        // |+⟩ mapped to the (-1)^bare_outcome eigenstate of the bare Pauli
        let target = SignedPauli {
            negative: bare_outcome == 1,
            pauli: bare.pauli,
        };
        let w = LocalClifford::all()
            .find(|w| w.conjugate(Pauli::X) == target)
            .expect("some Clifford maps X to any Pauli");
        out.frame[v] = self.frame[v].compose(w);
        out.graph = graph;
        out.active &= !(1 << v);
        out.canonicalize();

        let mut byproduct = Vec::new();
        if outcome == 1 {
            let (_, reference) = bare_rule(&self.graph, v, bare.pauli, bare.negative as u8);
            let support = rotations
                .iter()
                .chain(&reference)
                .map(|&(u, _)| u)
                .fold(0u32, |m, u| m | (1 << u));
            for u in bits(support) {
                let lookup = |rs: &[(Vertex, Mat2)]| {
                    rs.iter()
                        .find(|(w, _)| *w == u)
                        .map(|(_, m)| LocalClifford::from_matrix(m).expect("Clifford").0)
                        .unwrap_or_default()
                };
                let rel = lookup(&rotations).compose(lookup(&reference).inverse());
                let r = self.frame[u].compose(rel).compose(self.frame[u].inverse());
                let p = r.as_pauli().expect("branches differ by a Pauli");
                if p != Pauli::I {
                    byproduct.push((u, p));
                }
            }
        }
        let record = MeasurementRecord {
            vertex: v,
            basis,
            outcome,
            byproduct,
        };
        Ok((out, record))
    }

    /// Dense amplitudes over all `n` qubits, including measured ones.
    pub fn to_dense(&self) -> Result<DenseState> {
        let n = self.n();
        if n > DENSE_CAP {
            return Err(Error::DenseCapExceeded { n, cap: DENSE_CAP });
        }
        let mut s = DenseState::plus(n)?;
        for (u, v) in self.graph.edges() {
            s.apply_cz(u, v);
        }
        for (v, c) in self.frame.iter().enumerate() {
            if *c != LocalClifford::identity() {
                s.apply_single(v, &c.matrix());
            }
        }
        if let Some(k) = self.phase {
            s.scale(omega(k));
        }
        Ok(s)
    }

    /// Dense state of the vertices in `subset` (ascending order), which must
    /// share no edge with the rest of the graph. The global phase is dropped.
    pub fn to_dense_subset(&self, subset: u32) -> Result<DenseState> {
        let vs: Vec<Vertex> = bits(subset).collect();
        if vs.len() > DENSE_CAP {
            return Err(Error::DenseCapExceeded {
                n: vs.len(),
                cap: DENSE_CAP,
            });
        }
        if vs.iter().any(|&v| self.graph.neighbors(v) & !subset != 0) {
            return Err(Error::InvalidArgument(
                "subset is entangled with the remaining vertices".into(),
            ));
        }
        let mut s = DenseState::plus(vs.len())?;
        for (u, v) in self.graph.edges() {
            if subset & (1 << u) != 0 {
                let iu = vs.iter().position(|&x| x == u).expect("in subset");
                let iv = vs.iter().position(|&x| x == v).expect("in subset");
                s.apply_cz(iu, iv);
            }
        }
        for (i, &v) in vs.iter().enumerate() {
            s.apply_single(i, &self.frame[v].matrix());
        }
        Ok(s)
    }

    /// Dense comparison. With `up_to_global_phase == false` and both phases
    /// tracked, the amplitudes themselves must agree.
    pub fn states_equal(&self, other: &GraphState, up_to_global_phase: bool) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::ArityMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        let a = self.to_dense()?;
        let b = other.to_dense()?;
        let ip = a.inner(&b)?;
        if !up_to_global_phase && self.phase.is_some() && other.phase.is_some() {
            Ok((ip.re - 1.0).abs() < EQ_TOL && ip.im.abs() < EQ_TOL)
        } else {
            Ok((ip.norm_sqr() - 1.0).abs() < EQ_TOL)
        }
    }
}

/// Graph-rule measurement of the bare Pauli `p` on `v` of `|G⟩` with bare
/// outcome `outcome`. Returns the graph with `v` isolated and the rotations
/// `U_u` such that the post-measurement state is `|p,outcome⟩_v ⊗ ∏ U_u |G'⟩`.
pub(crate) fn bare_rule(g: &Graph, v: Vertex, p: Pauli, outcome: u8) -> (Graph, Vec<(Vertex, Mat2)>) {
    let nv = g.neighbors(v);
    let mut out = g.clone();
    if nv == 0 {
        return (out, Vec::new());
    }
    let z = crate::clifford::pauli_matrix(Pauli::Z);
    let mut rot = Vec::new();
    match p {
        Pauli::Z => {
            if outcome == 1 {
                rot.extend(bits(nv).map(|u| (u, z)));
            }
        }
        Pauli::Y => {
            out.local_complement(v);
            rot.extend(bits(nv).map(|u| (u, sqrt_pauli(Pauli::Z, outcome == 1))));
        }
        Pauli::X => {
            let b0 = nv.trailing_zeros() as usize;
            let nb = g.neighbors(b0);
            out.local_complement(b0);
            out.local_complement(v);
            out.local_complement(b0);
            rot.push((b0, sqrt_pauli(Pauli::Y, outcome == 0)));
            let zs = if outcome == 0 {
                nv & !nb & !(1 << b0)
            } else {
                nb & !nv & !(1 << v)
            };
            rot.extend(bits(zs).map(|u| (u, z)));
        }
        Pauli::I => unreachable!("measurement of the identity"),
    }
    out.isolate(v);
    (out, rot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::LocalClifford as LC;

    fn path3() -> GraphState {
        build_graph_state(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn single_vertex_is_plus() {
        let gs = build_graph_state(1, &[]).unwrap();
        let d = gs.to_dense().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((d.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((d.amplitudes()[1].re - r).abs() < 1e-15);
    }

    #[test]
    fn lc_preserves_state_with_phase() {
        let gs = path3().with_phase_tracking();
        for v in 0..3 {
            let lc = gs.local_complement(v).unwrap();
            assert!(gs.states_equal(&lc, false).unwrap(), "vertex {v}");
            assert_eq!(lc.local_complement(v).unwrap(), gs);
        }
    }

    #[test]
    fn lc_on_path_center_gives_triangle() {
        let lc = path3().local_complement(1).unwrap();
        assert_eq!(lc.graph().edges(), vec![(0, 1), (0, 2), (1, 2)]);
        let triangle = build_graph_state(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(!path3().states_equal(&triangle, true).unwrap());
    }

    #[test]
    fn leaf_z_measurement_of_k2() {
        let gs = build_graph_state(2, &[(0, 1)]).unwrap();
        assert_eq!(gs.outcome_probabilities(1, Basis::Z).unwrap(), [0.5, 0.5]);
        let (after, rec) = gs.measure_vertex(Basis::Z, 1, 1).unwrap();
        assert_eq!(after.graph().edge_count(), 0);
        assert_eq!(rec.byproduct, vec![(0, Pauli::Z)]);
    }

    #[test]
    fn y_on_path_center_leaves_bell_pair() {
        let (after, _) = path3().measure_vertex(Basis::Y, 1, 0).unwrap();
        assert_eq!(after.graph().edges(), vec![(0, 2)]);
        assert!(!after.is_active(1));
    }

    #[test]
    fn isolated_x_is_deterministic() {
        let gs = build_graph_state(2, &[]).unwrap();
        assert_eq!(gs.outcome_probabilities(0, Basis::X).unwrap(), [1.0, 0.0]);
        assert!(matches!(
            gs.measure_vertex(Basis::X, 0, 1),
            Err(Error::ZeroProbabilityOutcome { .. })
        ));
        let (after, _) = gs.measure_vertex(Basis::X, 0, 0).unwrap();
        assert!(matches!(
            after.measure_vertex(Basis::Z, 0, 0),
            Err(Error::VertexNotPresent(0))
        ));
    }

    #[test]
    fn measurement_matches_dense_projection_with_frames() {
        let frames = [LC::hadamard(), LC::phase(), LC::from_name("HS").unwrap()];
        let gs = GraphState::with_frame(
            Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(),
            frames.to_vec(),
        )
        .unwrap();
        for v in 0..3 {
            for b in Basis::ALL {
                for o in 0..2u8 {
                    let mut d = gs.to_dense().unwrap();
                    let p = d.project(v, b, o).unwrap();
                    let probs = gs.outcome_probabilities(v, b).unwrap();
                    assert!((p - probs[o as usize]).abs() < 1e-10);
                    let (after, _) = gs.measure_vertex(b, v, o).unwrap();
                    let f = after.to_dense().unwrap().fidelity(&d).unwrap();
                    assert!((f - 1.0).abs() < 1e-10, "v={v} b={b} o={o} f={f}");
                }
            }
        }
    }
}
