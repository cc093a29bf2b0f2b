//! Counts files: corrected participant outcomes for one round type of one
//! extracted resource.
//!
//! ```text
//! # qnetkey counts v1
//! round_type: type-1
//! basis: ZZXXZZ
//! participants: 1 2 5 6
//! resource: ghz
//! copy: 0
//! seed: 42
//! rounds: 20000
//! outcome count
//! 0000 5021
//! 0001 0
//! ```
//!
//! Header keys appear in exactly this order; `seed` and `rounds` are
//! optional but come together. Bell resources read `resource: bell 1-2 5-6`.
//! Outcome bits follow the participant order, first participant leftmost.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{label, Vertex};
use crate::qcka::RoundBatch;
use crate::router::{compile_round_settings, ExtractionPlan, RoundType, TaskKind};

const MAGIC: &str = "# qnetkey counts v1";

/// Seed and round budget of the simulation that produced the file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountsMeta {
    pub seed: u64,
    pub rounds: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountsFile {
    pub resource: TaskKind,
    pub copy: usize,
    pub batch: RoundBatch,
    pub meta: Option<CountsMeta>,
}

fn resource_string(kind: &TaskKind) -> String {
    match kind {
        TaskKind::Ghz => "ghz".into(),
        TaskKind::BellMulticast(pairs) => {
            let p: Vec<String> = pairs
                .iter()
                .map(|&(a, b)| format!("{}-{}", label(a), label(b)))
                .collect();
            format!("bell {}", p.join(" "))
        }
    }
}

fn parse_label(s: &str, line: usize) -> Result<Vertex> {
    match s.parse::<usize>() {
        Ok(l) if l >= 1 => Ok(l - 1),
        _ => Err(Error::parse(line, format!("bad user label '{s}'"))),
    }
}

fn parse_resource(s: &str, line: usize) -> Result<TaskKind> {
    let mut it = s.split_whitespace();
    match it.next() {
        Some("ghz") if it.next().is_none() => Ok(TaskKind::Ghz),
        Some("bell") => {
            let pairs = it
                .map(|p| {
                    let (a, b) = p
                        .split_once('-')
                        .ok_or_else(|| Error::parse(line, format!("bad pair '{p}'")))?;
                    Ok((parse_label(a, line)?, parse_label(b, line)?))
                })
                .collect::<Result<Vec<_>>>()?;
            if pairs.is_empty() {
                return Err(Error::parse(line, "bell resource without pairs"));
            }
            Ok(TaskKind::BellMulticast(pairs))
        }
        _ => Err(Error::parse(line, format!("unknown resource '{s}'"))),
    }
}

impl CountsFile {
    /// Every outcome row, zeros included, in ascending bit order.
    pub fn to_text(&self) -> String {
        let b = &self.batch;
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        out.push_str(&format!("round_type: {}\n", b.round_type));
        out.push_str(&format!("basis: {}\n", b.basis));
        let parts: Vec<String> = b.participants.iter().map(|&v| label(v).to_string()).collect();
        out.push_str(&format!("participants: {}\n", parts.join(" ")));
        out.push_str(&format!("resource: {}\n", resource_string(&self.resource)));
        out.push_str(&format!("copy: {}\n", self.copy));
        if let Some(m) = self.meta {
            out.push_str(&format!("seed: {}\nrounds: {}\n", m.seed, m.rounds));
        }
        out.push_str("outcome count\n");
        for bits in 0..(1u32 << b.width()) {
            out.push_str(&format!("{} {}\n", b.bitstring(bits), b.count(bits)));
        }
        out
    }

    pub fn parse_str(text: &str) -> Result<CountsFile> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .peekable();
        let last_line = text.lines().count().max(1);
        let mut field = |key: &str| -> Result<(usize, String)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(last_line, format!("missing '{key}'")))?;
            let (k, v) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(no, format!("expected '{key}: ...'")))?;
            if k.trim() != key {
                return Err(Error::parse(no, format!("expected '{key}', found '{}'", k.trim())));
            }
            Ok((no, v.trim().to_string()))
        };
        let (no, rt) = field("round_type")?;
        let round_type = RoundType::parse(&rt)
            .ok_or_else(|| Error::parse(no, format!("unknown round type '{rt}'")))?;
        let (_, basis) = field("basis")?;
        let (no, parts) = field("participants")?;
        let participants = parts
            .split_whitespace()
            .map(|p| parse_label(p, no))
            .collect::<Result<Vec<_>>>()?;
        if participants.is_empty() || participants.len() > 24 {
            return Err(Error::parse(no, "participant list must hold 1 to 24 users"));
        }
        let (no, res) = field("resource")?;
        let resource = parse_resource(&res, no)?;
        let (no, copy) = field("copy")?;
        let copy = copy
            .parse()
            .map_err(|_| Error::parse(no, format!("bad copy index '{copy}'")))?;
        drop(field);
        let mut lines = lines;
        let meta = match lines.peek() {
            Some((_, l)) if l.starts_with("seed:") => {
                let (no, l) = lines.next().expect("peeked");
                let seed = l["seed:".len()..]
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(no, "bad seed"))?;
                let (no, l) = lines
                    .next()
                    .ok_or_else(|| Error::parse(no, "seed without rounds"))?;
                let rounds = l
                    .strip_prefix("rounds:")
                    .and_then(|r| r.trim().parse().ok())
                    .ok_or_else(|| Error::parse(no, "expected 'rounds: N' after the seed"))?;
                Some(CountsMeta { seed, rounds })
            }
            _ => None,
        };
        match lines.next() {
            Some((_, "outcome count")) => {}
            Some((no, _)) => return Err(Error::parse(no, "expected the 'outcome count' header")),
            None => return Err(Error::parse(last_line, "missing the 'outcome count' header")),
        }
        let mut batch = RoundBatch::new(round_type, basis, participants);
        let mut seen = BTreeSet::new();
        for (no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [outcome, count] = fields[..] else {
                return Err(Error::parse(no, "expected 'outcome count'"));
            };
            let bits = batch
                .parse_bitstring(outcome)
                .map_err(|e| Error::parse(no, e.to_string()))?;
            if count.starts_with('-') {
                return Err(Error::parse(no, format!("negative count {count}")));
            }
            let c: u64 = count
                .parse()
                .map_err(|_| Error::parse(no, format!("bad count '{count}'")))?;
            if !seen.insert(bits) {
                return Err(Error::parse(no, format!("duplicate outcome {outcome}")));
            }
            batch.add(bits, c)?;
        }
        Ok(CountsFile {
            resource,
            copy,
            batch,
            meta,
        })
    }

    pub fn read(path: &Path) -> Result<CountsFile> {
        CountsFile::parse_str(&std::fs::read_to_string(path)?)
    }

    /// Checks that the recorded setting is the one `plan` prescribes.
    pub fn validate_against(&self, plan: &ExtractionPlan) -> Result<()> {
        let want = compile_round_settings(plan, self.batch.round_type);
        if self.batch.basis.len() != plan.n() {
            return Err(Error::LengthMismatch(format!(
                "basis '{}' covers {} vertices, the network has {}",
                self.batch.basis,
                self.batch.basis.len(),
                plan.n()
            )));
        }
        if self.batch.basis != want.basis_string() {
            return Err(Error::MissingSetting(format!(
                "{} counts measured in '{}', the plan needs '{}'",
                self.batch.round_type,
                self.batch.basis,
                want.basis_string()
            )));
        }
        if self.batch.participants != plan.participants || self.resource != plan.kind {
            return Err(Error::InvalidArgument(
                "counts were taken for a different participant set".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::network_state;
    use crate::router::{find_ghz_plan_for, PlanOptions};

    fn ghz_plan() -> ExtractionPlan {
        find_ghz_plan_for(&network_state(), &[0, 1, 4, 5], PlanOptions::default())
            .unwrap()
            .unwrap()
    }

    fn sample(basis: &str) -> String {
        let mut s = format!(
            "round_type: type-1\nbasis: {basis}\nparticipants: 1 2 5 6\nresource: ghz\ncopy: 0\noutcome count\n"
        );
        for b in 0..16 {
            s.push_str(&format!("{b:04b} {}\n", b + 1));
        }
        s
    }

    #[test]
    fn sixteen_rows() {
        let f = CountsFile::parse_str(&sample("ZZXXZZ")).unwrap();
        assert_eq!(f.batch.total(), (1..=16).sum::<u64>());
        assert_eq!(f.batch.count(0b0011), 4);
        assert_eq!(f.meta, None);
    }

    #[test]
    fn round_trip_with_meta() {
        let mut f = CountsFile::parse_str(&sample("ZZXXZZ")).unwrap();
        f.meta = Some(CountsMeta {
            seed: 42,
            rounds: 136,
        });
        f.resource = TaskKind::BellMulticast(vec![(0, 1), (4, 5)]);
        let text = f.to_text();
        assert!(text.contains("resource: bell 1-2 5-6\n"));
        assert_eq!(CountsFile::parse_str(&text).unwrap(), f);
    }

    #[test]
    fn basis_checked_against_plan() {
        let plan = ghz_plan();
        CountsFile::parse_str(&sample("ZZXXZZ"))
            .unwrap()
            .validate_against(&plan)
            .unwrap();
        let err = CountsFile::parse_str(&sample("ZZZZZZ"))
            .unwrap()
            .validate_against(&plan)
            .unwrap_err();
        assert!(matches!(err, Error::MissingSetting(_)), "{err}");
        let err = CountsFile::parse_str(&sample("ZZXXZ"))
            .unwrap()
            .validate_against(&plan)
            .unwrap_err();
        assert!(matches!(err, Error::LengthMismatch(_)), "{err}");
    }

    fn parse_line(text: &str) -> usize {
        match CountsFile::parse_str(text).unwrap_err() {
            Error::Parse { line, .. } => line,
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn malformed_rows() {
        let head = "round_type: type-2\nbasis: XX\nparticipants: 1 2\nresource: ghz\ncopy: 0\noutcome count\n";
        assert_eq!(parse_line(&format!("{head}00 1\n00 2\n")), 8);
        assert_eq!(parse_line(&format!("{head}00 -1\n")), 7);
        assert_eq!(parse_line(&format!("{head}000 1\n")), 7);
        assert_eq!(parse_line(&format!("{head}0x 1\n")), 7);
        assert_eq!(parse_line("basis: XX\n"), 1);
        assert_eq!(
            parse_line("round_type: type-2\nbasis: XX\nparticipants: 1 2\nresource: ghz\ncopy: 0\nseed: 1\n"),
            6
        );
    }
}
