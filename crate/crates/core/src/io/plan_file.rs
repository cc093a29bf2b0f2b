//! Plan JSON with 1-based labels and named Cliffords.

use serde::{Deserialize, Serialize};

use crate::clifford::LocalClifford;
use crate::error::{Error, Result};
use crate::graph::{label, Graph, Vertex};
use crate::pauli::{Basis, Pauli, SignedPauli};
use crate::router::{
    compile_round_settings, ByproductEntry, ExtractionPlan, NonparticipantMeasurement, RoundType,
    TaskKind,
};
use crate::state::GraphState;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// Local Clifford on each vertex, in label order.
    pub frame: Vec<LocalClifford>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementFile {
    pub vertex: usize,
    pub logical: Basis,
    /// Signed observable, e.g. `-Y`.
    pub physical: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFile {
    pub vertex: usize,
    pub clifford: LocalClifford,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ByproductFile {
    pub outcomes: Vec<u8>,
    /// Pauli then label, e.g. `Z5`.
    pub correction: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundBases {
    pub type1: String,
    pub type2: String,
    pub type1_signed: String,
    pub type2_signed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    /// `ghz` or `bell`.
    pub kind: String,
    pub pairs: Vec<(usize, usize)>,
    pub participants: Vec<usize>,
    pub network: NetworkFile,
    pub lc_sequence: Vec<usize>,
    pub measurements: Vec<MeasurementFile>,
    pub discarded: Vec<usize>,
    pub participant_frame: Vec<FrameFile>,
    /// Settings compiled from the plan; informational, ignored on load.
    pub bases: RoundBases,
    pub byproduct_rule: Vec<ByproductFile>,
    pub copies_required: usize,
}

fn labels(vs: &[Vertex]) -> Vec<usize> {
    vs.iter().map(|&v| label(v)).collect()
}

fn unlabel(l: usize, n: usize) -> Result<Vertex> {
    if l == 0 || l > n {
        return Err(Error::InvalidArgument(format!(
            "label {l} out of range 1..={n}"
        )));
    }
    Ok(l - 1)
}

fn unlabels(ls: &[usize], n: usize) -> Result<Vec<Vertex>> {
    ls.iter().map(|&l| unlabel(l, n)).collect()
}

fn parse_signed(s: &str) -> Result<SignedPauli> {
    let mut c = s.chars();
    let negative = match c.next() {
        Some('+') => false,
        Some('-') => true,
        _ => return Err(Error::InvalidArgument(format!("bad signed Pauli '{s}'"))),
    };
    let p = c
        .next()
        .and_then(Pauli::from_char)
        .filter(|_| c.next().is_none())
        .ok_or_else(|| Error::InvalidArgument(format!("bad signed Pauli '{s}'")))?;
    Ok(SignedPauli { pauli: p, negative })
}

impl PlanFile {
    pub fn from_plan(plan: &ExtractionPlan) -> PlanFile {
        let net = &plan.network;
        let s1 = compile_round_settings(plan, RoundType::Type1);
        let s2 = compile_round_settings(plan, RoundType::Type2);
        let (kind, pairs) = match &plan.kind {
            TaskKind::Ghz => ("ghz", vec![]),
            TaskKind::BellMulticast(p) => (
                "bell",
                p.iter().map(|&(a, b)| (label(a), label(b))).collect(),
            ),
        };
        PlanFile {
            kind: kind.into(),
            pairs,
            participants: labels(&plan.participants),
            network: NetworkFile {
                n: net.n(),
                edges: net.graph().labeled_edges(),
                frame: net.frame().to_vec(),
            },
            lc_sequence: labels(&plan.lc_sequence),
            measurements: plan
                .measurements
                .iter()
                .map(|m| MeasurementFile {
                    vertex: label(m.vertex),
                    logical: m.logical,
                    physical: m.physical.to_string(),
                })
                .collect(),
            discarded: labels(&plan.discarded),
            participant_frame: plan
                .participant_frame
                .iter()
                .map(|&(v, c)| FrameFile {
                    vertex: label(v),
                    clifford: c,
                })
                .collect(),
            bases: RoundBases {
                type1: s1.basis_string(),
                type2: s2.basis_string(),
                type1_signed: s1.signed_string(),
                type2_signed: s2.signed_string(),
            },
            byproduct_rule: plan
                .byproduct_rule
                .iter()
                .map(|e| ByproductFile {
                    outcomes: e.outcomes.clone(),
                    correction: e
                        .correction
                        .iter()
                        .map(|&(v, p)| format!("{p}{}", label(v)))
                        .collect(),
                })
                .collect(),
            copies_required: plan.copies_required,
        }
    }

    pub fn to_plan(&self) -> Result<ExtractionPlan> {
        let n = self.network.n;
        let graph = Graph::from_labeled_edges(n, &self.network.edges)?;
        let network = GraphState::with_frame(graph, self.network.frame.clone())?;
        let kind = match self.kind.as_str() {
            "ghz" => TaskKind::Ghz,
            "bell" => TaskKind::BellMulticast(
                self.pairs
                    .iter()
                    .map(|&(a, b)| Ok((unlabel(a, n)?, unlabel(b, n)?)))
                    .collect::<Result<_>>()?,
            ),
            other => return Err(Error::InvalidArgument(format!("unknown plan kind '{other}'"))),
        };
        let measurements = self
            .measurements
            .iter()
            .map(|m| {
                Ok(NonparticipantMeasurement {
                    vertex: unlabel(m.vertex, n)?,
                    logical: m.logical,
                    physical: parse_signed(&m.physical)?,
                })
            })
            .collect::<Result<_>>()?;
        let participant_frame = self
            .participant_frame
            .iter()
            .map(|f| Ok((unlabel(f.vertex, n)?, f.clifford)))
            .collect::<Result<_>>()?;
        let byproduct_rule = self
            .byproduct_rule
            .iter()
            .map(|e| {
                let correction = e
                    .correction
                    .iter()
                    .map(|c| {
                        let mut ch = c.chars();
                        let p = ch.next().and_then(Pauli::from_char).ok_or_else(|| {
                            Error::InvalidArgument(format!("bad correction '{c}'"))
                        })?;
                        let l = ch.as_str().parse().map_err(|_| {
                            Error::InvalidArgument(format!("bad correction '{c}'"))
                        })?;
                        Ok((unlabel(l, n)?, p))
                    })
                    .collect::<Result<_>>()?;
                Ok(ByproductEntry {
                    outcomes: e.outcomes.clone(),
                    correction,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ExtractionPlan {
            network,
            kind,
            participants: unlabels(&self.participants, n)?,
            lc_sequence: unlabels(&self.lc_sequence, n)?,
            measurements,
            discarded: unlabels(&self.discarded, n)?,
            participant_frame,
            byproduct_rule,
            copies_required: self.copies_required,
        })
    }
}
