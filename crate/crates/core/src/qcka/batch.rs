//! Outcome tallies for one round type, and the error estimators over them.
//!
//! Participant bits are packed into a `u32` with the first participant in the
//! most significant position, so `0b0011` over participants `[1, 2, 5, 6]`
//! means users 5 and 6 read 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{label, Vertex};
use crate::router::RoundType;

/// Corrected participant outcomes of many rounds in one setting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundBatch {
    pub round_type: RoundType,
    /// Physical basis letters for every vertex, `-` for discarded ones.
    pub basis: String,
    pub participants: Vec<Vertex>,
    counts: BTreeMap<u32, u64>,
    total: u64,
}

impl RoundBatch {
    pub fn new(round_type: RoundType, basis: impl Into<String>, participants: Vec<Vertex>) -> Self {
        RoundBatch {
            round_type,
            basis: basis.into(),
            participants,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.participants.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn add(&mut self, bits: u32, count: u64) -> Result<()> {
        if self.width() < 32 && bits >> self.width() != 0 {
            return Err(Error::LengthMismatch(format!(
                "outcome {bits:b} wider than {} participants",
                self.width()
            )));
        }
        if count > 0 {
            *self.counts.entry(bits).or_default() += count;
            self.total += count;
        }
        Ok(())
    }

    pub fn count(&self, bits: u32) -> u64 {
        self.counts.get(&bits).copied().unwrap_or(0)
    }

    /// Nonzero rows in ascending outcome order.
    pub fn counts(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&b, &c)| (b, c))
    }

    /// Same batch with every count replaced by `f(count)`.
    pub fn map_counts(&self, mut f: impl FnMut(u64) -> u64) -> RoundBatch {
        let mut out = RoundBatch::new(self.round_type, self.basis.clone(), self.participants.clone());
        for (b, c) in self.counts() {
            out.add(b, f(c)).expect("same width");
        }
        out
    }

    /// Outcome string over participants, e.g. `0110`.
    pub fn bitstring(&self, bits: u32) -> String {
        let k = self.width();
        (0..k)
            .map(|i| if (bits >> (k - 1 - i)) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn parse_bitstring(&self, s: &str) -> Result<u32> {
        if s.len() != self.width() {
            return Err(Error::LengthMismatch(format!(
                "outcome '{s}' has {} bits, expected {}",
                s.len(),
                self.width()
            )));
        }
        s.chars().try_fold(0u32, |acc, c| match c {
            '0' => Ok(acc << 1),
            '1' => Ok((acc << 1) | 1),
            _ => Err(Error::InvalidArgument(format!("bad outcome character '{c}'"))),
        })
    }

    /// Batch restricted to the listed participants.
    pub fn marginal(&self, keep: &[Vertex]) -> Result<RoundBatch> {
        let pos = keep
            .iter()
            .map(|&v| self.position(v))
            .collect::<Result<Vec<_>>>()?;
        let mut out = RoundBatch::new(self.round_type, self.basis.clone(), keep.to_vec());
        for (b, c) in self.counts() {
            out.add(extract_bits(b, self.width(), &pos), c)?;
        }
        Ok(out)
    }

    fn position(&self, v: Vertex) -> Result<usize> {
        self.participants
            .iter()
            .position(|&u| u == v)
            .ok_or_else(|| Error::InvalidArgument(format!("user {} is not a participant", label(v))))
    }

    pub fn tally(&self) -> Tally {
        Tally {
            participants: self.participants.clone(),
            weights: self.counts().map(|(b, c)| (b, c as f64)).collect(),
        }
    }
}

fn extract_bits(bits: u32, width: usize, positions: &[usize]) -> u32 {
    positions
        .iter()
        .fold(0, |acc, &p| (acc << 1) | ((bits >> (width - 1 - p)) & 1))
}

/// Nonnegative weights over participant outcomes: counts, or exact
/// probabilities when evaluating a model instead of data.
#[derive(Clone, Debug, PartialEq)]
pub struct Tally {
    pub participants: Vec<Vertex>,
    pub weights: Vec<(u32, f64)>,
}

impl Tally {
    pub fn width(&self) -> usize {
        self.participants.len()
    }

    fn total(&self) -> Result<f64> {
        let t: f64 = self.weights.iter().map(|&(_, w)| w).sum();
        if t > 0.0 {
            Ok(t)
        } else {
            Err(Error::EmptyBatch)
        }
    }

    /// Fraction of weight where positions `i` and `j` disagree.
    pub fn disagreement(&self, i: usize, j: usize) -> Result<f64> {
        let total = self.total()?;
        let k = self.width();
        let (si, sj) = (k - 1 - i, k - 1 - j);
        let d: f64 = self
            .weights
            .iter()
            .filter(|&&(b, _)| ((b >> si) ^ (b >> sj)) & 1 == 1)
            .map(|&(_, w)| w)
            .fold(0.0, |a, w| a + w);
        Ok(d / total)
    }

    /// Fraction of weight on outcomes with odd bit sum.
    pub fn odd_parity(&self) -> Result<f64> {
        let total = self.total()?;
        let odd: f64 = self
            .weights
            .iter()
            .filter(|&&(b, _)| b.count_ones() % 2 == 1)
            .map(|&(_, w)| w)
            .fold(0.0, |a, w| a + w);
        Ok(odd / total)
    }

    /// Pairwise disagreement matrix over participant positions.
    pub fn pairwise(&self) -> Result<Vec<Vec<f64>>> {
        let k = self.width();
        let mut q = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let d = self.disagreement(i, j)?;
                q[i][j] = d;
                q[j][i] = d;
            }
        }
        Ok(q)
    }

    pub fn qber(&self) -> Result<QberEstimate> {
        let k = self.width();
        if k < 2 {
            return Err(Error::InvalidArgument("QBER needs at least two participants".into()));
        }
        let pairwise_q = self.pairwise()?;
        let (alice, qber) = choose_alice(&pairwise_q);
        Ok(QberEstimate {
            qber,
            roles: RoleAssignment {
                alice: self.participants[alice],
                bobs: (0..k).filter(|&b| b != alice).map(|b| self.participants[b]).collect(),
            },
            pairwise_q,
        })
    }

    pub fn restrict(&self, keep: &[usize]) -> Tally {
        let k = self.width();
        let mut merged: BTreeMap<u32, f64> = BTreeMap::new();
        for &(b, w) in &self.weights {
            *merged.entry(extract_bits(b, k, keep)).or_default() += w;
        }
        Tally {
            participants: keep.iter().map(|&p| self.participants[p]).collect(),
            weights: merged.into_iter().collect(),
        }
    }
}

/// Position minimizing the worst pairwise error, and that error. Ties go to
/// the lowest position.
pub fn choose_alice(pairwise_q: &[Vec<f64>]) -> (usize, f64) {
    let k = pairwise_q.len();
    let worst = |a: usize| {
        (0..k)
            .filter(|&b| b != a)
            .map(|b| pairwise_q[a][b])
            .fold(0.0, f64::max)
    };
    let mut alice = 0;
    for a in 1..k {
        if worst(a) < worst(alice) {
            alice = a;
        }
    }
    (alice, worst(alice))
}

/// Who acts as Alice when turning the conference outcomes into a key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleAssignment {
    pub alice: Vertex,
    pub bobs: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QberEstimate {
    /// `Q[i][j]` over participant positions.
    pub pairwise_q: Vec<Vec<f64>>,
    pub qber: f64,
    pub roles: RoleAssignment,
}

/// `Pr(bit_a != bit_b)` over a key-generation batch; `a`, `b` are vertices.
pub fn pairwise_error(batch: &RoundBatch, a: Vertex, b: Vertex) -> Result<f64> {
    if a == b {
        return Err(Error::InvalidArgument("pairwise error needs two distinct users".into()));
    }
    let (i, j) = (batch.position(a)?, batch.position(b)?);
    batch.tally().disagreement(i, j)
}

/// Picks the Alice whose worst pairwise error is smallest.
pub fn estimate_qber(batch: &RoundBatch) -> Result<QberEstimate> {
    batch.tally().qber()
}

/// Phase error `(1 - ⟨X...X⟩)/2` from a parameter-estimation batch.
pub fn estimate_qx(batch: &RoundBatch) -> Result<f64> {
    batch.tally().odd_parity()
}

/// Both error rates of one resource.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimates {
    pub pairwise_q: Vec<Vec<f64>>,
    pub qber: f64,
    pub qx: f64,
    pub alice_choice: Vertex,
}

pub fn estimate_errors(type1: &Tally, type2: &Tally) -> Result<ErrorEstimates> {
    let q = type1.qber()?;
    Ok(ErrorEstimates {
        pairwise_q: q.pairwise_q,
        qber: q.qber,
        qx: type2.odd_parity()?,
        alice_choice: q.roles.alice,
    })
}
