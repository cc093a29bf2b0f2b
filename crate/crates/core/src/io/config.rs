//! Run configuration (TOML) and the plans and source it resolves to.
//!
//! ```toml
//! graph = "six_user.graph"
//! frame = ["H", "Z", "H", "Z", "H", "Z"]
//! protocol = "both"
//! rounds = 20000
//! seed = 42
//! output = "out"
//!
//! [roles]
//! alice = 1
//! bobs = [2, 5, 6]
//! ```
//!
//! Labels are 1-based. Relative paths resolve against the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clifford::LocalClifford;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::io::graph_file::parse_graph;
use crate::noise::{
    apply_noise, calibrate_to_targets, linear_grid, CalibrationTarget, NoiseModel, TargetResource,
};
use crate::qcka::{OutcomeSource, PlanSet, SimulationOptions};
use crate::router::{
    find_bell_multicast_plan_for, find_ghz_plan_for, plan_pairwise, PlanOptions,
};
use crate::state::GraphState;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProtocolChoice {
    #[serde(rename = "nqkd")]
    Nqkd,
    #[serde(rename = "2qkd")]
    TwoQkd,
    #[default]
    #[serde(rename = "both")]
    Both,
}

impl ProtocolChoice {
    pub fn nqkd(self) -> bool {
        self != ProtocolChoice::TwoQkd
    }

    pub fn two_qkd(self) -> bool {
        self != ProtocolChoice::Nqkd
    }
}

impl std::str::FromStr for ProtocolChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nqkd" => Ok(ProtocolChoice::Nqkd),
            "2qkd" => Ok(ProtocolChoice::TwoQkd),
            "both" => Ok(ProtocolChoice::Both),
            other => Err(Error::Config(format!("unknown protocol '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Roles {
    pub alice: usize,
    pub bobs: Vec<usize>,
    /// Defaults to every other vertex.
    #[serde(default)]
    pub nonparticipants: Vec<usize>,
}

/// Error rates a calibrated noise model must reproduce. Without `link` the
/// target is the GHZ resource.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    #[serde(default)]
    pub link: Option<(usize, usize)>,
    pub qber: f64,
    pub qx: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_sweep_max")]
    pub max_mw: f64,
    #[serde(default = "default_sweep_step")]
    pub step_mw: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_mw: default_sweep_max(),
            step_mw: default_sweep_step(),
        }
    }
}

fn default_sweep_max() -> f64 {
    200.0
}
fn default_sweep_step() -> f64 {
    5.0
}
fn default_rounds() -> u64 {
    SimulationOptions::default().rounds
}
fn default_type2() -> f64 {
    SimulationOptions::default().type2_fraction
}
fn default_disclosed() -> f64 {
    SimulationOptions::default().disclosed_fraction
}
fn default_mc() -> usize {
    1000
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub graph: PathBuf,
    /// Named local Clifford per vertex; empty means identity everywhere.
    #[serde(default)]
    pub frame: Vec<LocalClifford>,
    pub roles: Roles,
    #[serde(default)]
    pub protocol: ProtocolChoice,
    #[serde(default = "default_rounds")]
    pub rounds: u64,
    #[serde(default = "default_type2")]
    pub type2_fraction: f64,
    #[serde(default = "default_disclosed")]
    pub disclosed_fraction: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub noise: NoiseModel,
    /// Pump power (mW) at which the pump contamination is applied.
    #[serde(default)]
    pub pump_power_mw: Option<f64>,
    /// When present, the simulated noise is fitted to these error rates.
    #[serde(default)]
    pub calibration: Vec<TargetConfig>,
    /// Bell pairs carried by each network copy. Searched for when empty.
    #[serde(default)]
    pub pairwise_copies: Vec<Vec<(usize, usize)>>,
    #[serde(default)]
    pub loss_tolerant: bool,
    #[serde(default = "default_mc")]
    pub mc_samples: usize,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl RunConfig {
    pub fn parse_str(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads `path`, resolving relative paths against its directory.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let mut cfg = RunConfig::parse_str(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        if cfg.graph.is_relative() {
            cfg.graph = base.join(&cfg.graph);
        }
        if cfg.output.is_relative() {
            cfg.output = base.join(&cfg.output);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn simulation_options(&self) -> SimulationOptions {
        SimulationOptions {
            rounds: self.rounds,
            type2_fraction: self.type2_fraction,
            disclosed_fraction: self.disclosed_fraction,
        }
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("a seed is required for simulation".into()))
    }

    pub fn sweep_grid(&self) -> Vec<f64> {
        if !(self.sweep.step_mw > 0.0) || !(self.sweep.max_mw >= 0.0) {
            return Vec::new();
        }
        linear_grid(self.sweep.max_mw, self.sweep.step_mw)
    }
}

/// Everything a command needs once the config has been checked.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub config: RunConfig,
    pub graph: Graph,
    pub state: GraphState,
    /// Participants, ascending.
    pub users: Vec<Vertex>,
    pub plans: PlanSet,
}

fn vertex(l: usize, n: usize, what: &str) -> Result<Vertex> {
    if l == 0 || l > n {
        return Err(Error::Config(format!(
            "{what} label {l} is not a vertex of the {n}-vertex graph"
        )));
    }
    Ok(l - 1)
}

impl Pipeline {
    /// Checks roles and finds the plans for the configured protocols.
    pub fn resolve(config: &RunConfig) -> Result<Pipeline> {
        let graph = parse_graph(&config.graph)?;
        let n = graph.n();
        let state = if config.frame.is_empty() {
            GraphState::new(graph.clone())
        } else {
            GraphState::with_frame(graph.clone(), config.frame.clone())
                .map_err(|e| Error::Config(format!("frame: {e}")))?
        };
        let mut users = vec![vertex(config.roles.alice, n, "alice")?];
        for &b in &config.roles.bobs {
            users.push(vertex(b, n, "bob")?);
        }
        users.sort_unstable();
        if users.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("a user appears twice in the roles".into()));
        }
        if users.len() < 2 {
            return Err(Error::Config("at least one bob is required".into()));
        }
        if !config.roles.nonparticipants.is_empty() {
            let mut np = config
                .roles
                .nonparticipants
                .iter()
                .map(|&l| vertex(l, n, "nonparticipant"))
                .collect::<Result<Vec<_>>>()?;
            np.sort_unstable();
            let rest: Vec<Vertex> = (0..n).filter(|v| !users.contains(v)).collect();
            if np != rest {
                return Err(Error::Config(
                    "nonparticipants must be exactly the vertices that are not users".into(),
                ));
            }
        }
        let options = PlanOptions {
            loss_tolerant: config.loss_tolerant,
        };
        let mut plans = PlanSet::default();
        if config.protocol.nqkd() {
            plans.ghz = Some(find_ghz_plan_for(&state, &users, options)?.ok_or_else(|| {
                Error::NoPlan("no GHZ state can be extracted for these users".into())
            })?);
        }
        if config.protocol.two_qkd() {
            plans.bell = if config.pairwise_copies.is_empty() {
                plan_pairwise(&state, &users, options)?.ok_or_else(|| {
                    Error::NoPlan("no Bell pairs can connect these users".into())
                })?
            } else {
                let mut out = Vec::new();
                for copy in &config.pairwise_copies {
                    let pairs = copy
                        .iter()
                        .map(|&(a, b)| Ok((vertex(a, n, "pair")?, vertex(b, n, "pair")?)))
                        .collect::<Result<Vec<_>>>()?;
                    out.push(find_bell_multicast_plan_for(&state, &pairs, options)?.ok_or_else(
                        || Error::NoPlan(format!("pairs {copy:?} cannot share one copy")),
                    )?);
                }
                out
            };
        }
        Ok(Pipeline {
            config: config.clone(),
            graph,
            state,
            users,
            plans,
        })
    }

    pub fn calibration_targets(&self) -> Result<Vec<CalibrationTarget>> {
        let n = self.graph.n();
        self.config
            .calibration
            .iter()
            .map(|t| {
                let resource = match t.link {
                    None => TargetResource::Ghz,
                    Some((a, b)) => TargetResource::Link(vertex(a, n, "link")?, vertex(b, n, "link")?),
                };
                Ok(CalibrationTarget {
                    resource,
                    qber: t.qber,
                    qx: t.qx,
                })
            })
            .collect()
    }

    /// The calibrated model when targets are given, else the configured one;
    /// pump parameters are kept but not applied.
    pub fn base_noise_model(&self) -> Result<NoiseModel> {
        Ok(if self.config.calibration.is_empty() {
            self.config.noise.clone()
        } else {
            if !self.config.noise.is_noiseless() {
                return Err(Error::Config(
                    "give either explicit noise or calibration targets, not both".into(),
                ));
            }
            let c = calibrate_to_targets(&self.plans, &self.calibration_targets()?)?;
            if !c.converged {
                return Err(Error::InvalidArgument(format!(
                    "calibration did not reach the targets (residual {:e})",
                    c.residual
                )));
            }
            NoiseModel {
                pump: self.config.noise.pump,
                ..c.model
            }
        })
    }

    /// Static noise the simulation runs under: the base model with the pump
    /// contamination folded in at the configured pump power.
    pub fn noise_model(&self) -> Result<NoiseModel> {
        let base = self.base_noise_model()?;
        match self.config.pump_power_mw {
            Some(p) => base.at_pump_power(p),
            None => Ok(base),
        }
    }

    /// Outcome source for simulation: the pure network state when noiseless.
    pub fn source(&self) -> Result<Box<dyn OutcomeSource>> {
        let pure = self.plans.network_state()?;
        let model = self.noise_model()?;
        if model.is_noiseless() {
            Ok(Box::new(pure))
        } else {
            Ok(Box::new(apply_noise(&pure, &model)?))
        }
    }

    /// Plans keyed by the resource name used in counts file names.
    pub fn named_plans(&self) -> BTreeMap<String, (usize, &crate::router::ExtractionPlan)> {
        self.plans
            .plans()
            .enumerate()
            .map(|(i, (copy, p))| {
                let name = if i == 0 && self.plans.ghz.is_some() {
                    "ghz".to_string()
                } else {
                    format!("bell-copy{copy}")
                };
                (name, (copy, p))
            })
            .collect()
    }
}
