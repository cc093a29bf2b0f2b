//! Asymptotic key rates of the multipartite and the pairwise protocol.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_probability(x: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::InvalidProbability(x))
    }
}

/// Binary entropy in bits. Both endpoints are exactly 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let x = check_probability(x)?;
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    // ln(1-x) via ln_1p keeps precision for small x.
    let nats = -x * x.ln() - (1.0 - x) * (-x).ln_1p();
    Ok(nats / std::f64::consts::LN_2)
}

/// Raw asymptotic rate `1 - H(qber) - H(qx)`; negative values are kept.
pub fn akr_n(qber: f64, qx: f64) -> Result<f64> {
    Ok(1.0 - binary_entropy(qber)? - binary_entropy(qx)?)
}

/// Rate a protocol can actually extract: never below zero.
pub fn secure_rate(raw: f64) -> f64 {
    raw.max(0.0)
}

/// Conference rate of the pairwise protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConferenceRate {
    pub value: f64,
    /// Set when some link had rate `<= 0`, which forces `value = 0`.
    pub dead_link: bool,
}

/// Pairwise conference rate for the two-copy schedule: links `ab1` and
/// `b2b3` share one copy, the bridging link `ab2` uses the other.
pub fn akr_2(r_ab1: f64, r_b2b3: f64, r_ab2: f64) -> ConferenceRate {
    akr_2_schedule(&[vec![r_ab1, r_b2b3], vec![r_ab2]])
}

/// Conference rate when copy `i` of the network carries the links with
/// rates `copies[i]`. A copy is only as fast as its slowest link, and the
/// copies are consumed in sequence.
pub fn akr_2_schedule(copies: &[Vec<f64>]) -> ConferenceRate {
    let rates = copies.iter().flatten();
    if copies.is_empty() || copies.iter().any(Vec::is_empty) || rates.clone().any(|&r| !(r > 0.0)) {
        return ConferenceRate {
            value: 0.0,
            dead_link: true,
        };
    }
    let time: f64 = copies
        .iter()
        .map(|c| c.iter().map(|r| 1.0 / r).fold(f64::MIN, f64::max))
        .sum();
    ConferenceRate {
        value: 1.0 / time,
        dead_link: false,
    }
}
