//! Extraction plans: which local complementations and nonparticipant
//! measurements turn the network state into a GHZ state or a set of Bell
//! pairs, and how the remaining users fold the leftover local Cliffords and
//! Pauli byproducts into their own measurements.
//!
//! Local complementation only changes frames, so the physical state reached by
//! measuring nonparticipants in fixed physical Pauli bases does not depend on
//! the LC sequence. The search therefore first finds every physical basis
//! assignment that leaves the requested resource, then picks the orbit member
//! in which that assignment reads most simply (all `Z` if possible).
//!
//! Plans are ranked by, in order: number of nonparticipants not measured in
//! logical `Z`, LC sequence length, number of measured (not discarded)
//! nonparticipants, the LC sequence itself, then the logical bases.

use serde::{Deserialize, Serialize};

use crate::clifford::{sqrt_pauli, LocalClifford};
use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::graph::{bits, mask_of, Graph, Vertex};
use crate::pauli::{Basis, Pauli, SignedPauli};
use crate::router::orbit::{lc_orbit_with_paths, ORBIT_CAP};
use crate::state::{bare_rule, GraphState};

/// Largest number of nonparticipants the basis search enumerates.
pub const NONPARTICIPANT_CAP: usize = 6;

/// Plans are checked against the dense oracle up to this many qubits.
pub const VERIFY_CAP: usize = 10;

const FID_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskKind {
    Ghz,
    BellMulticast(Vec<(Vertex, Vertex)>),
}

/// What to extract and who takes part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionTask {
    pub kind: TaskKind,
    pub participants: Vec<Vertex>,
    pub nonparticipants: Vec<Vertex>,
}

impl ExtractionTask {
    pub fn ghz(n: usize, targets: &[Vertex]) -> Result<Self> {
        let mask = Self::check_vertices(n, targets)?;
        if mask.count_ones() < 2 {
            return Err(Error::InvalidTask("a GHZ state needs at least two users".into()));
        }
        Ok(ExtractionTask {
            kind: TaskKind::Ghz,
            participants: bits(mask).collect(),
            nonparticipants: (0..n).filter(|&v| mask & (1 << v) == 0).collect(),
        })
    }

    pub fn bell_multicast(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidTask("no pairs requested".into()));
        }
        let flat: Vec<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mask = Self::check_vertices(n, &flat)?;
        if mask.count_ones() as usize != flat.len() {
            return Err(Error::InvalidTask("pairs must be disjoint".into()));
        }
        let mut pairs: Vec<_> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        Ok(ExtractionTask {
            kind: TaskKind::BellMulticast(pairs),
            participants: bits(mask).collect(),
            nonparticipants: (0..n).filter(|&v| mask & (1 << v) == 0).collect(),
        })
    }

    fn check_vertices(n: usize, vs: &[Vertex]) -> Result<u32> {
        let mut mask = 0u32;
        for &v in vs {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            mask |= 1 << v;
        }
        Ok(mask)
    }

    pub fn participant_mask(&self) -> u32 {
        mask_of(&self.participants)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanOptions {
    /// Allow nonparticipants to be left unmeasured (lost) when the remaining
    /// resource still factorizes from them.
    pub loss_tolerant: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonparticipantMeasurement {
    pub vertex: Vertex,
    /// Basis in the frame of the LC-transformed graph.
    pub logical: Basis,
    /// Observable measured on the network state. A raw detector bit `b` for
    /// the letter reads as logical bit `b ^ physical.negative`.
    pub physical: SignedPauli,
}

/// Correction for one combination of raw nonparticipant outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ByproductEntry {
    /// Raw letter outcomes, in the order of [`ExtractionPlan::measurements`].
    pub outcomes: Vec<u8>,
    /// Pauli `R` on participants with `state(outcomes) = R · state(0...0)`.
    pub correction: Vec<(Vertex, Pauli)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionPlan {
    pub network: GraphState,
    pub kind: TaskKind,
    pub participants: Vec<Vertex>,
    pub lc_sequence: Vec<Vertex>,
    pub measurements: Vec<NonparticipantMeasurement>,
    pub discarded: Vec<Vertex>,
    /// `D_v` with reference-branch participant state `(⊗ D_v) |resource⟩`,
    /// where the resource is `(|0..0⟩+|1..1⟩)/√2` (GHZ) or a product of
    /// `(|00⟩+|11⟩)/√2` over the pairs.
    pub participant_frame: Vec<(Vertex, LocalClifford)>,
    pub byproduct_rule: Vec<ByproductEntry>,
    pub copies_required: usize,
}

impl ExtractionPlan {
    pub fn n(&self) -> usize {
        self.network.n()
    }

    pub fn participant_mask(&self) -> u32 {
        mask_of(&self.participants)
    }

    pub fn pairs(&self) -> Option<&[(Vertex, Vertex)]> {
        match &self.kind {
            TaskKind::BellMulticast(p) => Some(p),
            TaskKind::Ghz => None,
        }
    }

    pub fn frame_of(&self, v: Vertex) -> Option<LocalClifford> {
        self.participant_frame
            .iter()
            .find(|(u, _)| *u == v)
            .map(|&(_, c)| c)
    }

    /// Correction for the given raw nonparticipant outcomes.
    pub fn correction_for(&self, outcomes: &[u8]) -> Result<&[(Vertex, Pauli)]> {
        if outcomes.len() != self.measurements.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} nonparticipant outcomes, got {}",
                self.measurements.len(),
                outcomes.len()
            )));
        }
        let idx = outcomes
            .iter()
            .fold(0usize, |acc, &o| (acc << 1) | (o & 1) as usize);
        Ok(&self.byproduct_rule[idx].correction)
    }

    /// Dense check of every outcome branch against the ideal resource.
    pub fn verify(&self) -> Result<bool> {
        let ideal = ideal_resource(&self.kind, &self.participants)?;
        let mut expected_ref = ideal;
        for (i, &v) in self.participants.iter().enumerate() {
            let d = self.frame_of(v).expect("frame for every participant");
            expected_ref.apply_single(i, &d.matrix());
        }
        let dense = self.network.to_dense()?;
        let pmask = self.participant_mask();
        for entry in &self.byproduct_rule {
            let mut s = dense.clone();
            for (m, &o) in self.measurements.iter().zip(&entry.outcomes) {
                let basis = Basis::from_pauli(m.physical.pauli).expect("non-identity");
                if s.project(m.vertex, basis, o).is_err() {
                    return Ok(false);
                }
            }
            let mut expected = expected_ref.clone();
            for &(v, p) in &entry.correction {
                let i = self.participants.iter().position(|&u| u == v).expect("participant");
                expected.apply_pauli(i, p);
            }
            if (s.subsystem_fidelity(pmask, &expected)? - 1.0).abs() > FID_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Ideal resource on `participants` (ascending order).
pub fn ideal_resource(kind: &TaskKind, participants: &[Vertex]) -> Result<DenseState> {
    let k = participants.len();
    match kind {
        TaskKind::Ghz => DenseState::ghz(k),
        TaskKind::BellMulticast(pairs) => {
            let pos = |v: Vertex| participants.iter().position(|&u| u == v).expect("paired");
            let idx: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (pos(a), pos(b))).collect();
            let amps = (0..1usize << k)
                .map(|i| {
                    let bit = |q: usize| (i >> (k - 1 - q)) & 1;
                    let ok = idx.iter().all(|&(a, b)| bit(a) == bit(b));
                    num_complex::Complex64::new(if ok { 1.0 } else { 0.0 }, 0.0)
                })
                .collect();
            DenseState::normalized(k, amps)
        }
    }
}

/// Participant frames `D_v` if the graph state `(⊗ frames) |g⟩` holds the
/// requested resource on the task's participants.
fn residual_frames(
    g: &Graph,
    frames: &[LocalClifford],
    task: &ExtractionTask,
) -> Option<Vec<(Vertex, LocalClifford)>> {
    let pmask = task.participant_mask();
    if task.participants.iter().any(|&v| g.neighbors(v) & !pmask != 0) {
        return None;
    }
    let h = LocalClifford::hadamard();
    match &task.kind {
        TaskKind::Ghz => {
            let mut g = g.clone();
            let mut frames = frames.to_vec();
            let center = match g.star_center(pmask) {
                Some(c) => c,
                None if g.is_complete_on(pmask) => {
                    let low = task.participants[0];
                    absorb_local_complement(&mut g, &mut frames, low);
                    low
                }
                None => return None,
            };
            Some(
                task.participants
                    .iter()
                    .map(|&v| (v, if v == center { frames[v] } else { frames[v].compose(h) }))
                    .collect(),
            )
        }
        TaskKind::BellMulticast(pairs) => {
            let mut out = Vec::new();
            for &(a, b) in pairs {
                if g.neighbors(a) != 1 << b || g.neighbors(b) != 1 << a {
                    return None;
                }
                out.push((a, frames[a]));
                out.push((b, frames[b].compose(h)));
            }
            out.sort_by_key(|&(v, _)| v);
            Some(out)
        }
    }
}

/// Local complementation at `v` with the inverse LC rotations absorbed into
/// `frames`, without stabilizer canonicalization.
fn absorb_local_complement(g: &mut Graph, frames: &mut [LocalClifford], v: Vertex) {
    let t_dag = LocalClifford::from_matrix(&sqrt_pauli(Pauli::X, true)).expect("Clifford").0;
    let n_dag = LocalClifford::from_matrix(&sqrt_pauli(Pauli::Z, false)).expect("Clifford").0;
    frames[v] = frames[v].compose(t_dag);
    for u in bits(g.neighbors(v)) {
        frames[u] = frames[u].compose(n_dag);
    }
    g.local_complement(v);
}

/// Participant frames obtained by following the LC sequence and the
/// reference-branch measurements gate by gate from the network frames.
fn tracked_frames(
    state: &GraphState,
    lc_sequence: &[Vertex],
    measurements: &[NonparticipantMeasurement],
    task: &ExtractionTask,
) -> Option<Vec<(Vertex, LocalClifford)>> {
    let mut g = state.graph().clone();
    let mut frames = state.frame().to_vec();
    for &v in lc_sequence {
        absorb_local_complement(&mut g, &mut frames, v);
    }
    for m in measurements {
        let bare = frames[m.vertex].inverse().conjugate(m.physical.pauli);
        let (next, rotations) = bare_rule(&g, m.vertex, bare.pauli, bare.negative as u8);
        for (u, r) in rotations {
            frames[u] = frames[u].compose(LocalClifford::from_matrix(&r).expect("Clifford").0);
        }
        g = next;
    }
    residual_frames(&g, &frames, task)
}

/// Measures each `(vertex, letter)` with the given raw outcomes. `None` if
/// some measurement is deterministic or an outcome is impossible.
fn measure_all(
    state: &GraphState,
    letters: &[(Vertex, Basis)],
    outcomes: &[u8],
) -> Option<GraphState> {
    let mut st = state.clone();
    for (&(v, b), &o) in letters.iter().zip(outcomes) {
        let p = st.outcome_probabilities(v, b).ok()?;
        if p[0] == 0.0 || p[1] == 0.0 {
            return None;
        }
        st = st.measure_vertex(b, v, o).ok()?.0;
    }
    Some(st)
}

#[derive(Clone, Debug)]
struct Candidate {
    /// Per nonparticipant: measured letter, or `None` when discarded.
    letters: Vec<Option<Basis>>,
}

type RankKey = (usize, usize, usize, Vec<Vertex>, Vec<u8>);

/// Searches for a plan extracting `task` from `state`.
pub fn find_plan(
    state: &GraphState,
    task: &ExtractionTask,
    options: PlanOptions,
) -> Result<Option<ExtractionPlan>> {
    let n = state.n();
    if n > ORBIT_CAP {
        return Err(Error::OrbitCapExceeded { n, cap: ORBIT_CAP });
    }
    let k = task.nonparticipants.len();
    if k > NONPARTICIPANT_CAP {
        return Err(Error::NonparticipantCapExceeded {
            k,
            cap: NONPARTICIPANT_CAP,
        });
    }
    if task.participants.iter().chain(&task.nonparticipants).any(|&v| v >= n) {
        return Err(Error::InvalidTask("vertex outside the network".into()));
    }

    let choices: Vec<Option<Basis>> = {
        let mut c = vec![Some(Basis::Z), Some(Basis::Y), Some(Basis::X)];
        if options.loss_tolerant {
            c.push(None);
        }
        c
    };
    let mut candidates = Vec::new();
    for code in 0..choices.len().pow(k as u32) {
        let mut rest = code;
        let letters: Vec<Option<Basis>> = (0..k)
            .map(|_| {
                let c = choices[rest % choices.len()];
                rest /= choices.len();
                c
            })
            .collect();
        let measured: Vec<(Vertex, Basis)> = task
            .nonparticipants
            .iter()
            .zip(&letters)
            .filter_map(|(&v, l)| l.map(|b| (v, b)))
            .collect();
        let Some(residual) = measure_all(state, &measured, &vec![0; measured.len()]) else {
            continue;
        };
        if residual_frames(residual.graph(), residual.frame(), task).is_some() {
            candidates.push(Candidate { letters });
        }
    }
    if candidates.is_empty() {
        return Ok(None);
    }

    let orbit = lc_orbit_with_paths(state.graph(), ORBIT_CAP)?;
    let mut best: Option<(RankKey, usize, GraphState)> = None;
    for member in orbit {
        let mut transformed = state.clone();
        for &v in &member.path {
            transformed = transformed.local_complement(v)?;
        }
        for (ci, cand) in candidates.iter().enumerate() {
            let logical: Vec<u8> = task
                .nonparticipants
                .iter()
                .zip(&cand.letters)
                .map(|(&v, l)| match l {
                    Some(b) => logical_basis(&transformed, v, *b).to_char() as u8,
                    None => b'-',
                })
                .collect();
            let non_z = logical.iter().filter(|&&c| c != b'Z' && c != b'-').count();
            let measured = cand.letters.iter().filter(|l| l.is_some()).count();
            let key = (non_z, member.path.len(), measured, member.path.clone(), logical);
            if best.as_ref().is_none_or(|(b, _, _)| key < *b) {
                best = Some((key, ci, transformed.clone()));
            }
        }
    }
    let (key, ci, transformed) = best.expect("nonempty candidates");
    let cand = &candidates[ci];

    let mut measurements = Vec::new();
    let mut discarded = Vec::new();
    for (&v, l) in task.nonparticipants.iter().zip(&cand.letters) {
        match l {
            Some(b) => {
                let bare = transformed.bare_observable(v, *b);
                let logical = Basis::from_pauli(bare.pauli).expect("non-identity");
                let physical = transformed.frame()[v].conjugate(logical.pauli());
                measurements.push(NonparticipantMeasurement {
                    vertex: v,
                    logical,
                    physical,
                });
            }
            None => discarded.push(v),
        }
    }

    let letters: Vec<(Vertex, Basis)> = measurements
        .iter()
        .map(|m| (m.vertex, Basis::from_pauli(m.physical.pauli).expect("non-identity")))
        .collect();
    let reference = measure_all(state, &letters, &vec![0; letters.len()]).expect("candidate");
    let mut byproduct_rule = Vec::with_capacity(1 << letters.len());
    for idx in 0..1usize << letters.len() {
        let outcomes: Vec<u8> = (0..letters.len())
            .map(|i| ((idx >> (letters.len() - 1 - i)) & 1) as u8)
            .collect();
        let branch = measure_all(state, &letters, &outcomes)
            .ok_or_else(|| Error::NoPlan("nonparticipant outcome unreachable".into()))?;
        let mut correction = Vec::new();
        for &v in &task.participants {
            let r = branch.frame()[v].compose(reference.frame()[v].inverse());
            let p = r
                .as_pauli()
                .ok_or_else(|| Error::NoPlan("branches differ by a non-Pauli".into()))?;
            if p != Pauli::I {
                correction.push((v, p));
            }
        }
        byproduct_rule.push(ByproductEntry {
            outcomes,
            correction,
        });
    }

    let participant_frame = tracked_frames(state, &key.3, &measurements, task)
        .ok_or_else(|| Error::NoPlan("LC-transformed residual is not the resource".into()))?;
    let plan = ExtractionPlan {
        network: state.clone(),
        kind: task.kind.clone(),
        participants: task.participants.clone(),
        lc_sequence: key.3,
        measurements,
        discarded,
        participant_frame,
        byproduct_rule,
        copies_required: 1,
    };
    if n <= VERIFY_CAP && !plan.verify()? {
        return Err(Error::NoPlan("plan failed dense verification".into()));
    }
    Ok(Some(plan))
}

/// Basis, in the frame of `state`, that a physical measurement of `letter`
/// on `v` corresponds to.
fn logical_basis(state: &GraphState, v: Vertex, letter: Basis) -> Basis {
    Basis::from_pauli(state.bare_observable(v, letter).pauli).expect("non-identity")
}

/// GHZ extraction on `targets` from the identity-frame graph state of `g`.
pub fn find_ghz_plan(g: &Graph, targets: &[Vertex]) -> Result<Option<ExtractionPlan>> {
    find_ghz_plan_for(&GraphState::new(g.clone()), targets, PlanOptions::default())
}

pub fn find_ghz_plan_for(
    state: &GraphState,
    targets: &[Vertex],
    options: PlanOptions,
) -> Result<Option<ExtractionPlan>> {
    let task = ExtractionTask::ghz(state.n(), targets)?;
    find_plan(state, &task, options)
}

/// Bell-pair multicast from the identity-frame graph state of `g`.
pub fn find_bell_multicast_plan(
    g: &Graph,
    pairs: &[(Vertex, Vertex)],
) -> Result<Option<ExtractionPlan>> {
    find_bell_multicast_plan_for(&GraphState::new(g.clone()), pairs, PlanOptions::default())
}

pub fn find_bell_multicast_plan_for(
    state: &GraphState,
    pairs: &[(Vertex, Vertex)],
    options: PlanOptions,
) -> Result<Option<ExtractionPlan>> {
    let task = ExtractionTask::bell_multicast(state.n(), pairs)?;
    find_plan(state, &task, options)
}
