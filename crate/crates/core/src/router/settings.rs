//! Per-round measurement settings compiled from an extraction plan.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::pauli::{Pauli, SignedPauli};
use crate::router::plan::ExtractionPlan;

/// Key-generation rounds measure the resource in `Z`, parameter-estimation
/// rounds in `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoundType {
    #[serde(rename = "type-1")]
    Type1,
    #[serde(rename = "type-2")]
    Type2,
}

impl RoundType {
    pub fn resource_pauli(self) -> Pauli {
        match self {
            RoundType::Type1 => Pauli::Z,
            RoundType::Type2 => Pauli::X,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "type-1" | "1" => Some(RoundType::Type1),
            "type-2" | "2" => Some(RoundType::Type2),
            _ => None,
        }
    }
}

impl fmt::Display for RoundType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoundType::Type1 => "type-1",
            RoundType::Type2 => "type-2",
        })
    }
}

/// Physical observable for every vertex in one round type. Discarded
/// vertices have no observable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSetting {
    pub round_type: RoundType,
    pub bases: Vec<Option<SignedPauli>>,
    pub participants: Vec<Vertex>,
}

impl RoundSetting {
    /// Letters in vertex order, `-` for discarded vertices (e.g. `ZZXXZZ`).
    pub fn basis_string(&self) -> String {
        self.bases
            .iter()
            .map(|b| b.map_or('-', |p| p.pauli.to_char()))
            .collect()
    }

    /// Signed form, e.g. `-Z -Z +X +X +Z +Z`.
    pub fn signed_string(&self) -> String {
        self.bases
            .iter()
            .map(|b| b.map_or("-".to_string(), |p| p.to_string()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Bases for `round_type`: participants measure `D Z D†` or `D X D†`,
/// nonparticipants their plan observable.
pub fn compile_round_settings(plan: &ExtractionPlan, round_type: RoundType) -> RoundSetting {
    let mut bases = vec![None; plan.n()];
    for &(v, d) in &plan.participant_frame {
        bases[v] = Some(d.conjugate(round_type.resource_pauli()));
    }
    for m in &plan.measurements {
        bases[m.vertex] = Some(m.physical);
    }
    RoundSetting {
        round_type,
        bases,
        participants: plan.participants.clone(),
    }
}

/// Per-participant flips (in participant order) undoing the byproduct for
/// the raw nonparticipant `outcomes` (plan measurement order).
pub fn byproduct_correction(
    plan: &ExtractionPlan,
    round_type: RoundType,
    outcomes: &[u8],
) -> Result<Vec<bool>> {
    let correction = plan.correction_for(outcomes)?;
    let setting = compile_round_settings(plan, round_type);
    Ok(plan
        .participants
        .iter()
        .map(|&v| {
            let basis = setting.bases[v].expect("participant basis").pauli;
            correction
                .iter()
                .any(|&(u, p)| u == v && !p.commutes_with(basis))
        })
        .collect())
}

/// Precomputed decoder from raw detector bits to corrected participant bits.
#[derive(Clone, Debug)]
pub struct RoundDecoder {
    n: usize,
    participant_signs: Vec<(Vertex, bool)>,
    measured: Vec<Vertex>,
    flips: Vec<u32>,
}

impl RoundDecoder {
    pub fn new(plan: &ExtractionPlan, round_type: RoundType) -> Result<Self> {
        let setting = compile_round_settings(plan, round_type);
        let participant_signs = plan
            .participants
            .iter()
            .map(|&v| {
                let b = setting.bases[v].ok_or_else(|| {
                    Error::MissingSetting(format!("no basis for participant {}", v + 1))
                })?;
                Ok((v, b.negative))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = plan.measurements.len();
        let mut flips = Vec::with_capacity(1 << m);
        for idx in 0..1usize << m {
            let outcomes: Vec<u8> = (0..m).map(|i| ((idx >> (m - 1 - i)) & 1) as u8).collect();
            let f = byproduct_correction(plan, round_type, &outcomes)?;
            flips.push(
                f.iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &b)| acc | ((b as u32) << (f.len() - 1 - i))),
            );
        }
        Ok(RoundDecoder {
            n: plan.n(),
            participant_signs,
            measured: plan.measurements.iter().map(|m| m.vertex).collect(),
            flips,
        })
    }

    pub fn participant_count(&self) -> usize {
        self.participant_signs.len()
    }

    /// `raw` holds one bit per vertex (vertex 0 most significant). Returns the
    /// corrected participant bits, first participant most significant.
    pub fn decode(&self, raw: usize) -> u32 {
        let bit = |v: Vertex| ((raw >> (self.n - 1 - v)) & 1) as u32;
        let k = self.participant_signs.len();
        let mut out = 0u32;
        for (i, &(v, neg)) in self.participant_signs.iter().enumerate() {
            out |= (bit(v) ^ neg as u32) << (k - 1 - i);
        }
        let idx = self
            .measured
            .iter()
            .fold(0usize, |acc, &v| (acc << 1) | bit(v) as usize);
        out ^ self.flips[idx]
    }
}
