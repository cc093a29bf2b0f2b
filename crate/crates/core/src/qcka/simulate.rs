//! Seeded sampling of protocol rounds from the exact outcome distribution of
//! the compiled measurement settings.
//!
//! Round `r` draws from its own ChaCha stream `(seed, r)`, so any subset of
//! rounds can be regenerated independently and in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::pauli::Basis;
use crate::qcka::batch::{RoundBatch, Tally};
use crate::router::{compile_round_settings, ExtractionPlan, RoundDecoder, RoundType};

/// Anything that can report the joint distribution of single-qubit Pauli
/// measurements on the network qubits (vertex 0 most significant).
pub trait OutcomeSource {
    fn qubits(&self) -> usize;
    fn outcome_distribution(&self, bases: &[Basis]) -> Result<Vec<f64>>;
}

impl OutcomeSource for DenseState {
    fn qubits(&self) -> usize {
        self.n()
    }

    fn outcome_distribution(&self, bases: &[Basis]) -> Result<Vec<f64>> {
        self.distribution(bases)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub rounds: u64,
    /// Probability that a round is a parameter-estimation (type-2) round.
    pub type2_fraction: f64,
    /// Probability that a key-generation round is disclosed for error
    /// estimation. Only disclosed rounds enter the type-1 batch.
    pub disclosed_fraction: f64,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            rounds: 10_000,
            type2_fraction: 0.5,
            disclosed_fraction: 1.0,
        }
    }
}

impl SimulationOptions {
    fn check(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidArgument("at least one round is required".into()));
        }
        if !(self.type2_fraction > 0.0 && self.type2_fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "type-2 fraction {} must lie strictly between 0 and 1",
                self.type2_fraction
            )));
        }
        if !(self.disclosed_fraction > 0.0 && self.disclosed_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "disclosed fraction {} must lie in (0, 1]",
                self.disclosed_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulatedRounds {
    pub type1: RoundBatch,
    pub type2: RoundBatch,
    /// Key-generation rounds kept secret (not in `type1`).
    pub withheld: u64,
}

struct Sampler {
    cdf: Vec<f64>,
    decoder: RoundDecoder,
    batch: RoundBatch,
}

impl Sampler {
    fn new(source: &dyn OutcomeSource, plan: &ExtractionPlan, rt: RoundType) -> Result<Self> {
        let (dist, decoder, batch) = setting_distribution(source, plan, rt)?;
        let mut acc = 0.0;
        let cdf = dist
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Sampler {
            cdf,
            decoder,
            batch,
        })
    }

    fn draw(&self, u: f64) -> u32 {
        let x = u * self.cdf[self.cdf.len() - 1];
        let idx = self.cdf.partition_point(|&c| c <= x).min(self.cdf.len() - 1);
        self.decoder.decode(idx)
    }
}

fn setting_distribution(
    source: &dyn OutcomeSource,
    plan: &ExtractionPlan,
    rt: RoundType,
) -> Result<(Vec<f64>, RoundDecoder, RoundBatch)> {
    if source.qubits() != plan.n() {
        return Err(Error::ArityMismatch {
            expected: plan.n(),
            found: source.qubits(),
        });
    }
    let setting = compile_round_settings(plan, rt);
    // Discarded qubits are read in Z and ignored by the decoder.
    let bases: Vec<Basis> = setting
        .bases
        .iter()
        .map(|b| b.map_or(Basis::Z, |p| Basis::from_pauli(p.pauli).expect("letter")))
        .collect();
    let dist = source.outcome_distribution(&bases)?;
    let batch = RoundBatch::new(rt, setting.basis_string(), plan.participants.clone());
    Ok((dist, RoundDecoder::new(plan, rt)?, batch))
}

/// Exact probabilities of the corrected participant outcomes.
pub fn exact_tally(source: &dyn OutcomeSource, plan: &ExtractionPlan, rt: RoundType) -> Result<Tally> {
    let (dist, decoder, _) = setting_distribution(source, plan, rt)?;
    let mut weights = vec![0.0; 1 << plan.participants.len()];
    for (raw, p) in dist.into_iter().enumerate() {
        if p > 0.0 {
            weights[decoder.decode(raw) as usize] += p;
        }
    }
    Ok(Tally {
        participants: plan.participants.clone(),
        weights: weights
            .into_iter()
            .enumerate()
            .filter(|&(_, w)| w > 0.0)
            .map(|(b, w)| (b as u32, w))
            .collect(),
    })
}

/// Samples `options.rounds` rounds of the conference protocol on `plan`.
pub fn simulate_protocol(
    source: &dyn OutcomeSource,
    plan: &ExtractionPlan,
    options: &SimulationOptions,
    seed: u64,
) -> Result<SimulatedRounds> {
    options.check()?;
    let mut t1 = Sampler::new(source, plan, RoundType::Type1)?;
    let mut t2 = Sampler::new(source, plan, RoundType::Type2)?;
    let mut withheld = 0;
    for r in 0..options.rounds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r);
        let kind: f64 = rng.random();
        let outcome: f64 = rng.random();
        if kind < options.type2_fraction {
            let bits = t2.draw(outcome);
            t2.batch.add(bits, 1)?;
        } else {
            let disclose: f64 = rng.random();
            if disclose < options.disclosed_fraction {
                let bits = t1.draw(outcome);
                t1.batch.add(bits, 1)?;
            } else {
                withheld += 1;
            }
        }
    }
    Ok(SimulatedRounds {
        type1: t1.batch,
        type2: t2.batch,
        withheld,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::router::find_ghz_plan;
    use crate::state::GraphState;

    #[test]
    fn ideal_k2_is_perfectly_correlated() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let plan = find_ghz_plan(&g, &[0, 1]).unwrap().unwrap();
        let src = GraphState::new(g).to_dense().unwrap();
        let sim = simulate_protocol(&src, &plan, &SimulationOptions::default(), 3).unwrap();
        assert!(sim.type1.counts().all(|(b, _)| b == 0b00 || b == 0b11));
        assert!(sim.type2.counts().all(|(b, _)| b.count_ones() % 2 == 0));
        assert_eq!(sim.type1.total() + sim.type2.total(), 10_000);
        assert_eq!(sim.withheld, 0);
    }

    #[test]
    fn options_are_checked() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let plan = find_ghz_plan(&g, &[0, 1]).unwrap().unwrap();
        let src = GraphState::new(g).to_dense().unwrap();
        for opts in [
            SimulationOptions { rounds: 0, ..Default::default() },
            SimulationOptions { type2_fraction: 1.0, ..Default::default() },
            SimulationOptions { type2_fraction: 0.0, ..Default::default() },
            SimulationOptions { disclosed_fraction: 0.0, ..Default::default() },
        ] {
            assert!(simulate_protocol(&src, &plan, &opts, 1).is_err());
        }
        let wrong = DenseState::plus(3).unwrap();
        assert!(simulate_protocol(&wrong, &plan, &SimulationOptions::default(), 1).is_err());
    }

    #[test]
    fn withheld_rounds_are_counted() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let plan = find_ghz_plan(&g, &[0, 1]).unwrap().unwrap();
        let src = GraphState::new(g).to_dense().unwrap();
        let opts = SimulationOptions {
            rounds: 4000,
            disclosed_fraction: 0.25,
            ..Default::default()
        };
        let sim = simulate_protocol(&src, &plan, &opts, 9).unwrap();
        assert_eq!(sim.type1.total() + sim.type2.total() + sim.withheld, 4000);
        assert!(sim.withheld > sim.type1.total());
    }
}
