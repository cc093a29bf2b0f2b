//! Effective qubit-level noise: per-qubit channels, global white noise, and a
//! pump-power model for multi-pair contamination.

use serde::{Deserialize, Serialize};

use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::noise::density::{kraus_dephasing, kraus_depolarizing, DensityOperator, DENSITY_CAP};

/// Source brightness and contamination as functions of pump power `p` (mW).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PumpModel {
    /// Sixfold events per second per mW³.
    pub rate_coefficient: f64,
    /// Contamination growth per mW.
    pub contamination: f64,
}

impl Default for PumpModel {
    /// Puts the sixfold rate at 0.0141 Hz for 100 mW. With the default
    /// contamination the multipartite rate turns negative near 141 mW, so the
    /// key rate peaks inside a 0 to 200 mW sweep.
    fn default() -> Self {
        PumpModel {
            rate_coefficient: 1.41e-8,
            contamination: 0.002,
        }
    }
}

impl PumpModel {
    /// `c p³`.
    pub fn rate(&self, p: f64) -> f64 {
        self.rate_coefficient * p.powi(3)
    }

    /// White-noise weight `κp / (1 + κp)`.
    pub fn white_noise(&self, p: f64) -> f64 {
        let kp = self.contamination * p;
        kp / (1.0 + kp)
    }

    fn check(&self) -> Result<()> {
        if !(self.rate_coefficient > 0.0) || !(self.contamination >= 0.0) {
            return Err(Error::InvalidArgument(
                "pump coefficients must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Per-qubit depolarizing probability; missing entries are 0.
    #[serde(default)]
    pub depolarizing: Vec<f64>,
    /// Per-qubit dephasing probability; missing entries are 0.
    #[serde(default)]
    pub dephasing: Vec<f64>,
    #[serde(default)]
    pub white_noise: f64,
    #[serde(default)]
    pub pump: Option<PumpModel>,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel::default()
    }

    pub fn with_pump(pump: PumpModel) -> Self {
        NoiseModel {
            pump: Some(pump),
            ..Default::default()
        }
    }

    pub fn depolarizing_on(&self, q: usize) -> f64 {
        self.depolarizing.get(q).copied().unwrap_or(0.0)
    }

    pub fn dephasing_on(&self, q: usize) -> f64 {
        self.dephasing.get(q).copied().unwrap_or(0.0)
    }

    pub fn is_noiseless(&self) -> bool {
        self.white_noise == 0.0
            && self.depolarizing.iter().chain(&self.dephasing).all(|&p| p == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for &p in self.depolarizing.iter().chain(&self.dephasing).chain([&self.white_noise]) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        if let Some(pump) = &self.pump {
            pump.check()?;
        }
        Ok(())
    }

    /// Static model with the pump contamination at power `p` folded into the
    /// white-noise weight.
    pub fn at_pump_power(&self, p: f64) -> Result<NoiseModel> {
        let pump = self
            .pump
            .ok_or_else(|| Error::Config("noise model has no pump parameters".into()))?;
        let w = 1.0 - (1.0 - self.white_noise) * (1.0 - pump.white_noise(p));
        Ok(NoiseModel {
            white_noise: w,
            pump: None,
            ..self.clone()
        })
    }
}

/// `(1-w) · Channels(|ψ⟩⟨ψ|) + w I/2^n`, channels applied qubit by qubit.
pub fn apply_noise(pure: &DenseState, model: &NoiseModel) -> Result<DensityOperator> {
    model.validate()?;
    let n = pure.n();
    if n > DENSITY_CAP {
        return Err(Error::DenseCapExceeded {
            n,
            cap: DENSITY_CAP,
        });
    }
    if model.depolarizing.len() > n || model.dephasing.len() > n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: model.depolarizing.len().max(model.dephasing.len()),
        });
    }
    let mut rho = DensityOperator::from_pure(pure)?;
    for q in 0..n {
        let lambda = model.depolarizing_on(q);
        if lambda > 0.0 {
            rho.apply_kraus(q, &kraus_depolarizing(lambda)?)?;
        }
        let mu = model.dephasing_on(q);
        if mu > 0.0 {
            rho.apply_kraus(q, &kraus_dephasing(mu)?)?;
        }
    }
    if model.white_noise > 0.0 {
        rho.mix_white(model.white_noise)?;
    }
    Ok(rho)
}
