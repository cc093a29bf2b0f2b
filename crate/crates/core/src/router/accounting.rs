//! Network-state copies per conference round and circuit success odds.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::router::plan::{ExtractionPlan, TaskKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "nqkd")]
    Nqkd,
    #[serde(rename = "2qkd")]
    TwoQkd,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Nqkd => "nqkd",
            Protocol::TwoQkd => "2qkd",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nqkd" => Ok(Protocol::Nqkd),
            "2qkd" => Ok(Protocol::TwoQkd),
            other => Err(Error::InvalidArgument(format!("unknown protocol '{other}'"))),
        }
    }
}

/// Links carried by each copy of the network state, one entry per copy.
pub fn link_schedule(plans: &[ExtractionPlan]) -> Vec<Vec<(Vertex, Vertex)>> {
    plans
        .iter()
        .flat_map(|p| {
            let links = p.pairs().map(<[_]>::to_vec).unwrap_or_default();
            std::iter::repeat_n(links, p.copies_required)
        })
        .collect()
}

/// Whether `links` connect every vertex in `users`.
pub fn links_span(users: u32, links: &[(Vertex, Vertex)]) -> bool {
    let Some(start) = (0..32).find(|&v| users & (1 << v) != 0) else {
        return false;
    };
    let mut seen = 1u32 << start;
    loop {
        let before = seen;
        for &(a, b) in links {
            if seen & (1 << a) != 0 || seen & (1 << b) != 0 {
                seen |= (1 << a) | (1 << b);
            }
        }
        if seen == before {
            break;
        }
    }
    seen & users == users
}

/// Copies of the network state consumed per conference round.
pub fn network_use_accounting(plans: &[ExtractionPlan], protocol: Protocol) -> Result<usize> {
    match protocol {
        Protocol::Nqkd => {
            let ghz: Vec<_> = plans.iter().filter(|p| p.kind == TaskKind::Ghz).collect();
            if ghz.is_empty() {
                return Err(Error::InsufficientCoverage("no GHZ plan".into()));
            }
            Ok(ghz.iter().map(|p| p.copies_required).sum())
        }
        Protocol::TwoQkd => {
            if plans.is_empty() || plans.iter().any(|p| p.pairs().is_none()) {
                return Err(Error::InsufficientCoverage(
                    "2QKD needs Bell multicast plans only".into(),
                ));
            }
            let links: Vec<_> = link_schedule(plans).concat();
            let users = links.iter().fold(0u32, |m, &(a, b)| m | (1 << a) | (1 << b));
            if !links_span(users, &links) {
                return Err(Error::InsufficientCoverage(
                    "pairwise links do not connect all users".into(),
                ));
            }
            Ok(plans.iter().map(|p| p.copies_required).sum())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    Fusion,
    Cz,
}

/// Success probability of a heralded circuit: 1/2 per fusion, 1/9 per
/// linear-optical CZ.
pub fn circuit_success_probability(gates: &[Gate]) -> Result<Ratio<u64>> {
    if gates.is_empty() {
        return Err(Error::InvalidArgument("empty gate list".into()));
    }
    Ok(gates.iter().fold(Ratio::from_integer(1), |acc, g| {
        acc * match g {
            Gate::Fusion => Ratio::new(1, 2),
            Gate::Cz => Ratio::new(1, 9),
        }
    }))
}
