//! Fitting per-qubit channel strengths to target error rates.
//!
//! Channels are switched on one at a time: each round tries every unused
//! (qubit, channel) parameter, fits the enlarged set by damped Gauss-Newton
//! inside the parameter box, and keeps the one that lowers the residual
//! most. This prefers few, localized noise sources over spreading small
//! amounts of noise over every qubit.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{label, Vertex};
use crate::noise::model::{apply_noise, NoiseModel};
use crate::qcka::{KeyRateReport, PlanSet};

/// Largest tolerated deviation from any target.
pub const CALIBRATION_TOL: f64 = 1e-6;

const MAX_ITER: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetResource {
    Ghz,
    /// Bell link between two users (0-based).
    Link(Vertex, Vertex),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTarget {
    pub resource: TargetResource,
    pub qber: f64,
    pub qx: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Depolarizing,
    Dephasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedParameter {
    pub qubit: Vertex,
    pub channel: Channel,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub model: NoiseModel,
    /// Nonzero parameters in the order they were switched on.
    pub parameters: Vec<FittedParameter>,
    /// Largest absolute deviation from a target.
    pub residual: f64,
    /// `residual <= CALIBRATION_TOL`. When false, `model` is the best fit.
    pub converged: bool,
}

fn read_target(report: &KeyRateReport, t: &CalibrationTarget) -> Result<[f64; 2]> {
    match t.resource {
        TargetResource::Ghz => report
            .nqkd
            .as_ref()
            .map(|n| [n.estimates.qber, n.estimates.qx])
            .ok_or_else(|| Error::MissingSetting("no GHZ plan for a GHZ target".into())),
        TargetResource::Link(a, b) => {
            let want = (label(a.min(b)), label(a.max(b)));
            report
                .two_qkd
                .as_ref()
                .and_then(|t| t.links.iter().find(|l| l.pair == want))
                .map(|l| [l.qber, l.qx])
                .ok_or_else(|| {
                    Error::MissingSetting(format!("no Bell plan for link {}-{}", want.0, want.1))
                })
        }
    }
}

struct Problem<'a> {
    plans: &'a PlanSet,
    network: crate::dense::DenseState,
    targets: &'a [CalibrationTarget],
    n: usize,
}

impl Problem<'_> {
    fn model(&self, theta: &[f64]) -> NoiseModel {
        NoiseModel {
            depolarizing: theta[..self.n].to_vec(),
            dephasing: theta[self.n..].to_vec(),
            ..Default::default()
        }
    }

    fn residuals(&self, theta: &[f64]) -> Result<DVector<f64>> {
        let rho = apply_noise(&self.network, &self.model(theta))?;
        let report = self.plans.exact_report(&rho)?;
        let mut r = Vec::with_capacity(2 * self.targets.len());
        for t in self.targets {
            let [q, x] = read_target(&report, t)?;
            r.push(q - t.qber);
            r.push(x - t.qx);
        }
        Ok(DVector::from_vec(r))
    }

    fn upper(&self, j: usize) -> f64 {
        if j < self.n {
            1.0
        } else {
            0.5
        }
    }

    /// Damped Gauss-Newton over the parameters in `free`, clamped to the box.
    fn fit(&self, mut theta: Vec<f64>, free: &[usize]) -> Result<(Vec<f64>, f64)> {
        let mut r = self.residuals(&theta)?;
        let mut cost = r.norm_squared();
        let mut damping = 1e-3;
        for _ in 0..MAX_ITER {
            if r.amax() < CALIBRATION_TOL * 1e-3 {
                break;
            }
            let h = 1e-7;
            let mut jac = DMatrix::zeros(r.len(), free.len());
            for (c, &j) in free.iter().enumerate() {
                let mut t = theta.clone();
                let step = if theta[j] + h <= self.upper(j) { h } else { -h };
                t[j] += step;
                jac.set_column(c, &((self.residuals(&t)? - &r) / step));
            }
            let a = jac.transpose() * &jac;
            let g = jac.transpose() * &r;
            let mut improved = false;
            while damping < 1e12 {
                let mut lhs = a.clone();
                for d in 0..free.len() {
                    lhs[(d, d)] += damping * (a[(d, d)] + 1e-12);
                }
                let Some(delta) = lhs.lu().solve(&(-&g)) else {
                    damping *= 10.0;
                    continue;
                };
                let mut t = theta.clone();
                for (c, &j) in free.iter().enumerate() {
                    t[j] = (theta[j] + delta[c]).clamp(0.0, self.upper(j));
                }
                let rt = self.residuals(&t)?;
                let ct = rt.norm_squared();
                if ct < cost {
                    theta = t;
                    r = rt;
                    cost = ct;
                    damping = (damping * 0.3).max(1e-12);
                    improved = true;
                    break;
                }
                damping *= 10.0;
            }
            if !improved {
                break;
            }
        }
        Ok((theta, r.amax()))
    }
}

/// Per-qubit depolarizing and dephasing strengths reproducing the targets'
/// QBER and Q_X under the plans' exact outcome statistics.
pub fn calibrate_to_targets(plans: &PlanSet, targets: &[CalibrationTarget]) -> Result<Calibration> {
    for t in targets {
        for v in [t.qber, t.qx] {
            if !(0.0..0.5).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "target error rate {v} outside [0, 0.5)"
                )));
            }
        }
    }
    let network = plans.network_state()?;
    let n = network.n();
    let problem = Problem {
        plans,
        network,
        targets,
        n,
    };
    let mut theta = vec![0.0; 2 * n];
    let mut active: Vec<usize> = Vec::new();
    let mut residual = problem.residuals(&theta)?.amax();
    while residual > CALIBRATION_TOL && active.len() < theta.len() {
        let mut best: Option<(Vec<f64>, f64, usize)> = None;
        for j in 0..theta.len() {
            if active.contains(&j) {
                continue;
            }
            let mut free = active.clone();
            free.push(j);
            let (t, res) = problem.fit(theta.clone(), &free)?;
            if best.as_ref().is_none_or(|b| res < b.1) {
                best = Some((t, res, j));
            }
        }
        let Some((t, res, j)) = best else { break };
        if res >= residual {
            break;
        }
        theta = t;
        residual = res;
        active.push(j);
    }
    let parameters = active
        .iter()
        .map(|&j| FittedParameter {
            qubit: j % n,
            channel: if j < n {
                Channel::Depolarizing
            } else {
                Channel::Dephasing
            },
            value: theta[j],
        })
        .filter(|p| p.value > 0.0)
        .collect();
    Ok(Calibration {
        model: problem.model(&theta),
        parameters,
        residual,
        converged: residual <= CALIBRATION_TOL,
    })
}
