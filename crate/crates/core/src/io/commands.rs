//! The pipeline steps behind each command-line subcommand. Every command
//! writes into the configured output directory and is deterministic given
//! its inputs and seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{label, Graph};
use crate::io::config::Pipeline;
use crate::io::counts::{CountsFile, CountsMeta};
use crate::io::plan_file::PlanFile;
use crate::io::report::{hash_input, sweep_csv, to_json_rounded, Report, SweepSummary, ToolInfo};
use crate::noise::{poisson_mc, pump_sweep, PumpSweepResult};
use crate::qcka::{analyze_counts, Resource, ResourceCounts, Statistic};
use crate::router::{
    compile_round_settings, lc_orbit_with_paths, network_use_accounting, ExtractionPlan, Protocol,
    RoundType, TaskKind,
};

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitListing {
    pub count: usize,
    /// 1-based edge lists with the LC path reaching each member.
    pub members: Vec<(Vec<(usize, usize)>, Vec<usize>)>,
}

impl OrbitListing {
    pub fn to_text(&self) -> String {
        let mut out = format!("orbit size {}\n", self.count);
        for (i, (edges, path)) in self.members.iter().enumerate() {
            let e: Vec<String> = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
            let p: Vec<String> = path.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{i}: [{}] via [{}]", e.join(" "), p.join(" "));
        }
        out
    }
}

pub fn cmd_orbit(graph: &Graph, cap: usize) -> Result<OrbitListing> {
    let members = lc_orbit_with_paths(graph, cap)?;
    Ok(OrbitListing {
        count: members.len(),
        members: members
            .into_iter()
            .map(|m| {
                (
                    m.graph.labeled_edges(),
                    m.path.iter().map(|&v| label(v)).collect(),
                )
            })
            .collect(),
    })
}

#[derive(Clone, Debug)]
pub struct ExtractOutput {
    pub ghz: Option<ExtractionPlan>,
    pub pairwise: Vec<ExtractionPlan>,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

fn labels(vs: impl IntoIterator<Item = usize>) -> String {
    vs.into_iter()
        .map(|v| label(v).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn describe(out: &mut String, plan: &ExtractionPlan) {
    let _ = writeln!(out, "  LC sequence: [{}]", labels(plan.lc_sequence.iter().copied()));
    let meas: Vec<String> = plan
        .measurements
        .iter()
        .map(|m| format!("{}:{}", label(m.vertex), m.logical))
        .collect();
    let _ = writeln!(out, "  measured (logical basis): [{}]", meas.join(" "));
    if !plan.discarded.is_empty() {
        let _ = writeln!(out, "  discarded: [{}]", labels(plan.discarded.iter().copied()));
    }
    for rt in [RoundType::Type1, RoundType::Type2] {
        let s = compile_round_settings(plan, rt);
        let _ = writeln!(out, "  {rt}: {} ({})", s.basis_string(), s.signed_string());
    }
}

pub fn cmd_extract(p: &Pipeline) -> Result<ExtractOutput> {
    let dir = &p.config.output;
    let mut summary = String::new();
    let mut files = Vec::new();
    if let Some(ghz) = &p.plans.ghz {
        let copies = network_use_accounting(std::slice::from_ref(ghz), Protocol::Nqkd)?;
        let _ = writeln!(summary, "nqkd: GHZ on [{}], {copies} copy per round", labels(ghz.participants.iter().copied()));
        describe(&mut summary, ghz);
        let path = dir.join("plan_nqkd.json");
        write(&path, &to_json_rounded(&PlanFile::from_plan(ghz))?)?;
        files.push(path);
    }
    if !p.plans.bell.is_empty() {
        let copies = network_use_accounting(&p.plans.bell, Protocol::TwoQkd)?;
        let _ = writeln!(summary, "2qkd: {copies} copies per round");
        for (i, plan) in p.plans.bell.iter().enumerate() {
            let pairs: Vec<String> = plan
                .pairs()
                .unwrap_or_default()
                .iter()
                .map(|&(a, b)| format!("{}-{}", label(a), label(b)))
                .collect();
            let _ = writeln!(summary, " copy {i}: Bell pairs {}", pairs.join(" "));
            describe(&mut summary, plan);
        }
        let file: Vec<PlanFile> = p.plans.bell.iter().map(PlanFile::from_plan).collect();
        let path = dir.join("plans_2qkd.json");
        write(&path, &to_json_rounded(&file)?)?;
        files.push(path);
    }
    let path = dir.join("summary.txt");
    write(&path, &summary)?;
    files.push(path);
    Ok(ExtractOutput {
        ghz: p.plans.ghz.clone(),
        pairwise: p.plans.bell.clone(),
        summary,
        files,
    })
}

/// File stem for a resource: `ghz` or `bell-copy<i>`.
pub fn resource_name(kind: &TaskKind, copy: usize) -> String {
    match kind {
        TaskKind::Ghz => "ghz".into(),
        TaskKind::BellMulticast(_) => format!("bell-copy{copy}"),
    }
}

fn round_tag(rt: RoundType) -> &'static str {
    match rt {
        RoundType::Type1 => "type1",
        RoundType::Type2 => "type2",
    }
}

/// Simulated counts for every plan, one file per resource and round type,
/// in `<output>/counts/`.
pub fn cmd_simulate(p: &Pipeline) -> Result<Vec<PathBuf>> {
    let seed = p.config.require_seed()?;
    let source = p.source()?;
    let counts = p
        .plans
        .simulate(source.as_ref(), &p.config.simulation_options(), seed)?;
    let meta = Some(CountsMeta {
        seed,
        rounds: p.config.rounds,
    });
    let mut paths = Vec::new();
    for r in counts {
        for batch in [r.type1, r.type2] {
            let path = p.config.output.join("counts").join(format!(
                "{}.{}.counts",
                resource_name(&r.kind, r.copy),
                round_tag(batch.round_type)
            ));
            let file = CountsFile {
                resource: r.kind.clone(),
                copy: r.copy,
                batch,
                meta,
            };
            write(&path, &file.to_text())?;
            paths.push(path);
        }
    }
    Ok(paths)
}

/// Groups counts files into resources and checks them against the plans.
pub fn load_counts(p: &Pipeline, paths: &[PathBuf]) -> Result<Vec<ResourceCounts>> {
    let mut by_resource: BTreeMap<(bool, usize), [Option<CountsFile>; 2]> = BTreeMap::new();
    for path in paths {
        let f = CountsFile::read(path)?;
        let plan = p
            .plans
            .plans()
            .find(|(copy, plan)| *copy == f.copy && plan.kind == f.resource)
            .map(|(_, plan)| plan)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{}: no configured plan extracts {} from copy {}",
                    path.display(),
                    resource_name(&f.resource, f.copy),
                    f.copy
                ))
            })?;
        f.validate_against(plan)?;
        let key = (f.resource != TaskKind::Ghz, f.copy);
        let slot = match f.batch.round_type {
            RoundType::Type1 => 0,
            RoundType::Type2 => 1,
        };
        let entry = by_resource.entry(key).or_default();
        if entry[slot].is_some() {
            return Err(Error::InvalidArgument(format!(
                "{}: second {} file for {}",
                path.display(),
                f.batch.round_type,
                resource_name(&f.resource, f.copy)
            )));
        }
        entry[slot] = Some(f);
    }
    for (copy, plan) in p.plans.plans() {
        if !by_resource.contains_key(&(plan.kind != TaskKind::Ghz, copy)) {
            return Err(Error::MissingSetting(format!(
                "no counts for {}",
                resource_name(&plan.kind, copy)
            )));
        }
    }
    by_resource
        .into_values()
        .map(|[t1, t2]| {
            let name = |f: &CountsFile| resource_name(&f.resource, f.copy);
            match (t1, t2) {
                (Some(a), Some(b)) => Ok(Resource {
                    kind: a.resource,
                    copy: a.copy,
                    type1: a.batch,
                    type2: b.batch,
                }),
                (Some(f), None) => Err(Error::MissingSetting(format!("no type-2 counts for {}", name(&f)))),
                (None, Some(f)) => Err(Error::MissingSetting(format!("no type-1 counts for {}", name(&f)))),
                (None, None) => unreachable!("entry holds at least one file"),
            }
        })
        .collect()
}

/// Key-rate report with Monte Carlo uncertainties for every defined
/// statistic, written to `<output>/report.json`.
pub fn cmd_analyze(p: &Pipeline, counts: &[PathBuf]) -> Result<Report> {
    let resources = load_counts(p, counts)?;
    let mut report = analyze_counts(&resources)?;
    let seed = p.config.seed.unwrap_or(0);
    for stat in Statistic::ALL {
        if stat.read(&report).is_some() {
            let mc = poisson_mc(&resources, stat, p.config.mc_samples, seed)?;
            report.uncertainties.insert(stat.name().to_string(), mc);
        }
    }
    let mut inputs = BTreeMap::new();
    hash_input(&mut inputs, &p.config.graph)?;
    for path in counts {
        hash_input(&mut inputs, path)?;
    }
    let out = Report {
        tool: ToolInfo::default(),
        inputs,
        config: p.config.clone(),
        report,
    };
    write(&p.config.output.join("report.json"), &out.to_json()?)?;
    Ok(out)
}

/// Key rate over the configured pump-power grid, written to
/// `<output>/sweep.csv` with the argmax summary in `<output>/sweep.json`.
pub fn cmd_sweep(p: &Pipeline) -> Result<(PumpSweepResult, SweepSummary)> {
    let model = p.base_noise_model()?;
    if model.pump.is_none() {
        return Err(Error::Config("sweep needs [noise.pump] parameters".into()));
    }
    let sweep = pump_sweep(&model, &p.config.sweep_grid(), &p.plans)?;
    let summary = SweepSummary::of(&sweep);
    write(&p.config.output.join("sweep.csv"), &sweep_csv(&sweep.points)?)?;
    write(&p.config.output.join("sweep.json"), &to_json_rounded(&summary)?)?;
    Ok((sweep, summary))
}
