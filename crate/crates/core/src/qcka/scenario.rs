//! The plans a conference round uses under each protocol, evaluated against
//! one shared network source.

use serde::{Deserialize, Serialize};

use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::qcka::report::{analyze, KeyRateReport, Resource, ResourceCounts, ResourceTallies};
use crate::qcka::simulate::{exact_tally, simulate_protocol, OutcomeSource, SimulationOptions};
use crate::router::{ExtractionPlan, RoundType};

/// One GHZ plan for the multipartite protocol and one Bell plan per network
/// copy for the pairwise protocol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSet {
    pub ghz: Option<ExtractionPlan>,
    /// `bell[i]` runs on copy `i` of the network state.
    pub bell: Vec<ExtractionPlan>,
}

impl PlanSet {
    /// Every plan with the network copy it consumes.
    pub fn plans(&self) -> impl Iterator<Item = (usize, &ExtractionPlan)> {
        self.ghz.iter().map(|p| (0, p)).chain(self.bell.iter().enumerate())
    }

    /// Noiseless dense state shared by all plans.
    pub fn network_state(&self) -> Result<DenseState> {
        let (_, first) = self
            .plans()
            .next()
            .ok_or_else(|| Error::MissingSetting("plan set is empty".into()))?;
        if self.plans().any(|(_, p)| p.network != first.network) {
            return Err(Error::InvalidArgument("plans refer to different networks".into()));
        }
        first.network.to_dense()
    }

    pub fn exact_tallies(&self, source: &dyn OutcomeSource) -> Result<Vec<ResourceTallies>> {
        self.plans()
            .map(|(copy, plan)| {
                Ok(Resource {
                    kind: plan.kind.clone(),
                    copy,
                    type1: exact_tally(source, plan, RoundType::Type1)?,
                    type2: exact_tally(source, plan, RoundType::Type2)?,
                })
            })
            .collect()
    }

    /// Rates in the limit of infinitely many rounds.
    pub fn exact_report(&self, source: &dyn OutcomeSource) -> Result<KeyRateReport> {
        analyze(&self.exact_tallies(source)?)
    }

    /// Samples every resource; resource `i` uses its own seed derived from
    /// `seed`.
    pub fn simulate(
        &self,
        source: &dyn OutcomeSource,
        options: &SimulationOptions,
        seed: u64,
    ) -> Result<Vec<ResourceCounts>> {
        self.plans()
            .enumerate()
            .map(|(i, (copy, plan))| {
                let sim = simulate_protocol(source, plan, options, resource_seed(seed, i))?;
                Ok(Resource {
                    kind: plan.kind.clone(),
                    copy,
                    type1: sim.type1,
                    type2: sim.type2,
                })
            })
            .collect()
    }
}

fn resource_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}
