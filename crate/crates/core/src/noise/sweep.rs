//! Key rate against pump power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::model::{apply_noise, NoiseModel};
use crate::qcka::{KeyRateReport, PlanSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p_mw: f64,
    pub akr: f64,
    pub rate_hz: f64,
    pub keyrate_hz: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PumpSweepResult {
    pub points: Vec<SweepPoint>,
    /// Pump power with the largest key rate (lowest one on ties).
    pub argmax_p: f64,
}

impl PumpSweepResult {
    pub fn argmax_index(&self) -> usize {
        self.points
            .iter()
            .position(|pt| pt.p_mw == self.argmax_p)
            .expect("argmax is a grid point")
    }

    /// Whether the best key rate lies strictly inside the grid.
    pub fn interior_optimum(&self) -> bool {
        let i = self.argmax_index();
        i > 0 && i + 1 < self.points.len()
    }
}

/// Rate the sweep optimizes: multipartite when the plan set has a GHZ plan,
/// pairwise otherwise.
fn headline_rate(report: &KeyRateReport) -> Result<f64> {
    if let Some(n) = &report.nqkd {
        Ok(n.akr_n)
    } else if let Some(t) = &report.two_qkd {
        Ok(t.akr_2)
    } else {
        Err(Error::MissingSetting("plan set yields no rate".into()))
    }
}

pub fn pump_sweep(model: &NoiseModel, grid: &[f64], plans: &PlanSet) -> Result<PumpSweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty pump-power grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || !(grid[0] >= 0.0) {
        return Err(Error::InvalidArgument(
            "pump powers must be nonnegative and increasing".into(),
        ));
    }
    let pump = model
        .pump
        .ok_or_else(|| Error::Config("noise model has no pump parameters".into()))?;
    let network = plans.network_state()?;
    let mut points = Vec::with_capacity(grid.len());
    for &p in grid {
        let rho = apply_noise(&network, &model.at_pump_power(p)?)?;
        let akr = headline_rate(&plans.exact_report(&rho)?)?;
        let rate_hz = pump.rate(p);
        points.push(SweepPoint {
            p_mw: p,
            akr,
            rate_hz,
            keyrate_hz: akr.max(0.0) * rate_hz,
        });
    }
    let best = points
        .iter()
        .enumerate()
        .fold(0, |b, (i, pt)| if pt.keyrate_hz > points[b].keyrate_hz { i } else { b });
    Ok(PumpSweepResult {
        argmax_p: points[best].p_mw,
        points,
    })
}

/// Least-squares slope of `ln rate` against `ln p` over points with `p > 0`.
pub fn log_log_slope(points: &[SweepPoint]) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|pt| pt.p_mw > 0.0 && pt.rate_hz > 0.0)
        .map(|pt| (pt.p_mw.ln(), pt.rate_hz.ln()))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let n = xy.len() as f64;
    let (mx, my) = xy
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = xy.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    Some(sxy / sxx)
}

/// `0, step, 2 step, ..., max` (inclusive when `max` is a multiple).
pub fn linear_grid(max: f64, step: f64) -> Vec<f64> {
    let n = (max / step + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * step).collect()
}
