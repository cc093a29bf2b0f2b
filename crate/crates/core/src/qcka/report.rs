//! From per-resource tallies to conference key rates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{label, Vertex};
use crate::noise::MonteCarloResult;
use crate::qcka::batch::{estimate_errors, ErrorEstimates, RoundBatch, Tally};
use crate::qcka::rates::{akr_2_schedule, akr_n, secure_rate};
use crate::router::TaskKind;

/// Both round types of one extracted resource, with the network copy it
/// was extracted from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resource<T> {
    pub kind: TaskKind,
    pub copy: usize,
    pub type1: T,
    pub type2: T,
}

pub type ResourceCounts = Resource<RoundBatch>;
pub type ResourceTallies = Resource<Tally>;

impl ResourceCounts {
    pub fn tallies(&self) -> ResourceTallies {
        Resource {
            kind: self.kind.clone(),
            copy: self.copy,
            type1: self.type1.tally(),
            type2: self.type2.tally(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NqkdRates {
    pub estimates: ErrorEstimates,
    pub akr_n: f64,
    pub secure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkRate {
    /// 1-based user labels.
    pub pair: (usize, usize),
    pub copy: usize,
    pub qber: f64,
    pub qx: f64,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseRates {
    pub links: Vec<LinkRate>,
    pub akr_2: f64,
    pub dead_link: bool,
    pub secure: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopiesPerBit {
    pub nqkd: Option<usize>,
    #[serde(rename = "2qkd")]
    pub two_qkd: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyRateReport {
    pub nqkd: Option<NqkdRates>,
    #[serde(rename = "2qkd")]
    pub two_qkd: Option<PairwiseRates>,
    /// `akr_n / akr_2`, present when both are available and `akr_2 > 0`.
    pub ratio: Option<f64>,
    pub copies_per_bit: CopiesPerBit,
    /// Monte Carlo spread keyed by statistic name.
    pub uncertainties: BTreeMap<String, MonteCarloResult>,
}

fn nqkd_rates(r: &ResourceTallies) -> Result<NqkdRates> {
    let estimates = estimate_errors(&r.type1, &r.type2)?;
    let raw = akr_n(estimates.qber, estimates.qx)?;
    Ok(NqkdRates {
        estimates,
        akr_n: raw,
        secure: secure_rate(raw),
    })
}

fn link_rate(r: &ResourceTallies, (a, b): (Vertex, Vertex)) -> Result<LinkRate> {
    let pos = |v: Vertex| {
        r.type1
            .participants
            .iter()
            .position(|&u| u == v)
            .ok_or_else(|| Error::MissingSetting(format!("no outcomes for user {}", label(v))))
    };
    let keep = [pos(a)?, pos(b)?];
    let qber = r.type1.restrict(&keep).disagreement(0, 1)?;
    let qx = r.type2.restrict(&keep).odd_parity()?;
    Ok(LinkRate {
        pair: (label(a), label(b)),
        copy: r.copy,
        qber,
        qx,
        rate: akr_n(qber, qx)?,
    })
}

fn pairwise_rates(resources: &[&ResourceTallies]) -> Result<PairwiseRates> {
    let mut links = Vec::new();
    for r in resources {
        if let TaskKind::BellMulticast(pairs) = &r.kind {
            for &p in pairs {
                links.push(link_rate(r, p)?);
            }
        }
    }
    let mut copies: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for l in &links {
        copies.entry(l.copy).or_default().push(l.rate);
    }
    let rate = akr_2_schedule(&copies.into_values().collect::<Vec<_>>());
    Ok(PairwiseRates {
        links,
        akr_2: rate.value,
        dead_link: rate.dead_link,
        secure: secure_rate(rate.value),
    })
}

fn distinct_copies<'a>(rs: impl Iterator<Item = &'a ResourceTallies>) -> usize {
    let mut c: Vec<usize> = rs.map(|r| r.copy).collect();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Key rates of every protocol the resources support.
pub fn analyze(resources: &[ResourceTallies]) -> Result<KeyRateReport> {
    let ghz: Vec<_> = resources.iter().filter(|r| r.kind == TaskKind::Ghz).collect();
    let bell: Vec<_> = resources.iter().filter(|r| r.kind != TaskKind::Ghz).collect();
    if ghz.is_empty() && bell.is_empty() {
        return Err(Error::MissingSetting("no resources to analyze".into()));
    }
    if ghz.len() > 1 {
        return Err(Error::InvalidArgument("expected at most one GHZ resource".into()));
    }
    let nqkd = ghz.first().map(|r| nqkd_rates(r)).transpose()?;
    let two_qkd = if bell.is_empty() {
        None
    } else {
        Some(pairwise_rates(&bell)?)
    };
    let ratio = match (&nqkd, &two_qkd) {
        (Some(n), Some(t)) if t.akr_2 > 0.0 => Some(n.akr_n / t.akr_2),
        _ => None,
    };
    Ok(KeyRateReport {
        copies_per_bit: CopiesPerBit {
            nqkd: nqkd.as_ref().map(|_| distinct_copies(ghz.iter().copied())),
            two_qkd: two_qkd.as_ref().map(|_| distinct_copies(bell.iter().copied())),
        },
        nqkd,
        two_qkd,
        ratio,
        uncertainties: BTreeMap::new(),
    })
}

pub fn analyze_counts(resources: &[ResourceCounts]) -> Result<KeyRateReport> {
    analyze(&resources.iter().map(ResourceCounts::tallies).collect::<Vec<_>>())
}

/// Report quantity the Monte Carlo can propagate uncertainty to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Qber,
    Qx,
    AkrN,
    Akr2,
    Ratio,
}

impl Statistic {
    pub const ALL: [Statistic; 5] = [
        Statistic::Qber,
        Statistic::Qx,
        Statistic::AkrN,
        Statistic::Akr2,
        Statistic::Ratio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Qber => "qber",
            Statistic::Qx => "qx",
            Statistic::AkrN => "akr_n",
            Statistic::Akr2 => "akr_2",
            Statistic::Ratio => "ratio",
        }
    }

    /// Value of the statistic on `report`, `None` if the report lacks it.
    pub fn read(self, report: &KeyRateReport) -> Option<f64> {
        match self {
            Statistic::Qber => report.nqkd.as_ref().map(|n| n.estimates.qber),
            Statistic::Qx => report.nqkd.as_ref().map(|n| n.estimates.qx),
            Statistic::AkrN => report.nqkd.as_ref().map(|n| n.akr_n),
            Statistic::Akr2 => report.two_qkd.as_ref().map(|t| t.akr_2),
            Statistic::Ratio => report.ratio,
        }
    }

    pub fn evaluate(self, resources: &[ResourceTallies]) -> Option<f64> {
        self.read(&analyze(resources).ok()?)
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown statistic '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::router::RoundType;

    fn perfect(kind: TaskKind, participants: Vec<Vertex>, copy: usize) -> ResourceCounts {
        let k = participants.len();
        let mut t1 = RoundBatch::new(RoundType::Type1, "", participants.clone());
        let mut t2 = RoundBatch::new(RoundType::Type2, "", participants);
        let pairs = match &kind {
            TaskKind::BellMulticast(p) => p.len(),
            TaskKind::Ghz => 0,
        };
        if pairs == 2 {
            for b in [0b0000, 0b1100, 0b0011, 0b1111] {
                t1.add(b, 25).unwrap();
                t2.add(b, 25).unwrap();
            }
        } else {
            t1.add(0, 50).unwrap();
            t1.add((1 << k) - 1, 50).unwrap();
            t2.add(0, 100).unwrap();
        }
        Resource {
            kind,
            copy,
            type1: t1,
            type2: t2,
        }
    }

    #[test]
    fn ideal_ratio_is_two() {
        let res = [
            perfect(TaskKind::Ghz, vec![0, 1, 4, 5], 0),
            perfect(TaskKind::BellMulticast(vec![(0, 1), (4, 5)]), vec![0, 1, 4, 5], 0),
            perfect(TaskKind::BellMulticast(vec![(1, 4)]), vec![1, 4], 1),
        ];
        let r = analyze_counts(&res).unwrap();
        assert_eq!(r.nqkd.as_ref().unwrap().akr_n, 1.0);
        assert_eq!(r.two_qkd.as_ref().unwrap().akr_2, 0.5);
        assert_eq!(r.ratio, Some(2.0));
        assert_eq!(r.copies_per_bit.nqkd, Some(1));
        assert_eq!(r.copies_per_bit.two_qkd, Some(2));
        let labels: Vec<_> = r.two_qkd.unwrap().links.iter().map(|l| l.pair).collect();
        assert_eq!(labels, [(1, 2), (5, 6), (2, 5)]);
    }

    #[test]
    fn statistic_names_round_trip() {
        for s in Statistic::ALL {
            assert_eq!(s.name().parse::<Statistic>().unwrap(), s);
        }
        assert!("bogus".parse::<Statistic>().is_err());
    }

    #[test]
    fn nothing_to_analyze() {
        assert!(matches!(analyze(&[]), Err(Error::MissingSetting(_))));
    }
}
