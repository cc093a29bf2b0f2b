//! Mixed-state noise, the pump-power model, Poissonian Monte Carlo and
//! calibration of per-qubit channels to measured error rates.

pub mod calibrate;
pub mod density;
pub mod mc;
pub mod model;
pub mod sweep;

pub use calibrate::{
    calibrate_to_targets, Calibration, CalibrationTarget, Channel, FittedParameter,
    TargetResource, CALIBRATION_TOL,
};
pub use density::{
    expectation_mixed, kraus_dephasing, kraus_depolarizing, DensityOperator, DENSITY_CAP,
    PSD_FLOOR,
};
pub use mc::{poisson_mc, resample, MonteCarloResult, MIN_SAMPLES};
pub use model::{apply_noise, NoiseModel, PumpModel};
pub use sweep::{linear_grid, log_log_slope, pump_sweep, PumpSweepResult, SweepPoint};
