mod common;

use std::path::{Path, PathBuf};

use qnetkey::error::{exit_code, Error};
use qnetkey::io::*;
use qnetkey::qcka::analyze_counts;
use qnetkey::router::TaskKind;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn config(name: &str, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::load(&data(name)).unwrap();
    cfg.output = out.to_path_buf();
    cfg
}

#[test]
fn extract_six_user_plans() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("six_user.toml", dir.path());
    cfg.pairwise_copies.clear();
    let out = cmd_extract(&Pipeline::resolve(&cfg).unwrap()).unwrap();
    let ghz = out.ghz.unwrap();
    let measured: Vec<usize> = ghz.measurements.iter().map(|m| m.vertex).collect();
    assert_eq!(measured, vec![2, 3]);
    assert_eq!(out.pairwise.len(), 2);
    assert!(out.summary.contains("2qkd: 2 copies per round"));
    assert_eq!(out.files.len(), 3);
    let text = std::fs::read_to_string(dir.path().join("plan_nqkd.json")).unwrap();
    let file: PlanFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file.to_plan().unwrap(), ghz);
    assert_eq!(file.bases.type1, "ZZXXZZ");
}

#[test]
fn extract_two_vertex_graph_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k2.graph");
    std::fs::write(&graph, "2\n1 2\n").unwrap();
    let cfg = RunConfig::parse_str(&format!(
        "graph = {:?}\nprotocol = \"nqkd\"\noutput = {:?}\n[roles]\nalice = 1\nbobs = [2]\n",
        graph,
        dir.path()
    ))
    .unwrap();
    let out = cmd_extract(&Pipeline::resolve(&cfg).unwrap()).unwrap();
    let plan = out.ghz.unwrap();
    assert!(plan.lc_sequence.is_empty() && plan.measurements.is_empty());
    assert!(out.pairwise.is_empty());
}

#[test]
fn extract_ring_pairs_every_copy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("ring6.toml", dir.path());
    let out = cmd_extract(&Pipeline::resolve(&cfg).unwrap()).unwrap();
    assert_eq!(out.pairwise.len(), 2);
    let links: usize = out.pairwise.iter().map(|p| p.pairs().unwrap().len()).sum();
    assert_eq!(links, 3);
    assert!(out.pairwise.iter().any(|p| p.pairs().unwrap().len() == 2));
}

#[test]
fn unreachable_users_have_no_plan() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("split.graph");
    std::fs::write(&graph, "4\n1 2\n3 4\n").unwrap();
    let cfg = RunConfig::parse_str(&format!(
        "graph = {:?}\noutput = {:?}\n[roles]\nalice = 1\nbobs = [3]\n",
        graph,
        dir.path()
    ))
    .unwrap();
    let err = Pipeline::resolve(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), exit_code::NO_PLAN, "{err}");
}

#[test]
fn role_errors() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("six_user.toml", dir.path());
    cfg.roles.bobs = vec![2, 9];
    assert!(matches!(Pipeline::resolve(&cfg), Err(Error::Config(_))));
    cfg.roles.bobs = vec![2, 5, 6];
    cfg.roles.nonparticipants = vec![3];
    assert!(matches!(Pipeline::resolve(&cfg), Err(Error::Config(_))));
}

#[test]
fn simulate_then_parse_matches_memory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("six_user.toml", dir.path());
    let p = Pipeline::resolve(&cfg).unwrap();
    let paths = cmd_simulate(&p).unwrap();
    assert_eq!(paths.len(), 6);
    let source = p.source().unwrap();
    let memory = p
        .plans
        .simulate(source.as_ref(), &cfg.simulation_options(), cfg.seed.unwrap())
        .unwrap();
    let parsed = load_counts(&p, &paths).unwrap();
    assert_eq!(parsed, memory);
    let report = cmd_analyze(&p, &paths).unwrap();
    let direct = analyze_counts(&memory).unwrap();
    assert_eq!(report.report.ratio, direct.ratio);
    assert_eq!(report.report.nqkd, direct.nqkd);
    let f = CountsFile::read(&paths[0]).unwrap();
    assert_eq!(f.meta, Some(CountsMeta { seed: 42, rounds: 20_000 }));
    assert_eq!(f.resource, TaskKind::Ghz);
}

#[test]
fn noiseless_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("six_user.toml", dir.path());
    cfg.noise = Default::default();
    cfg.mc_samples = 200;
    let p = Pipeline::resolve(&cfg).unwrap();
    let r = cmd_analyze(&p, &cmd_simulate(&p).unwrap()).unwrap().report;
    let n = r.nqkd.unwrap();
    assert_eq!((n.estimates.qber, n.estimates.qx, n.akr_n), (0.0, 0.0, 1.0));
    assert_eq!(r.two_qkd.unwrap().akr_2, 0.5);
    assert_eq!(r.ratio, Some(2.0));
    assert!(r.uncertainties.contains_key("ratio"));
}

#[test]
fn calibrated_counts_beat_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("calibrated.toml", dir.path());
    let p = Pipeline::resolve(&cfg).unwrap();
    let report = cmd_analyze(&p, &cmd_simulate(&p).unwrap()).unwrap();
    let ratio = report.report.ratio.unwrap();
    let mc = &report.report.uncertainties["ratio"];
    assert!(ratio > 2.0);
    assert!(mc.std > 0.0 && (ratio - 2.0) / mc.std > 1.0);
    for key in ["qber", "qx", "akr_n", "akr_2", "ratio"] {
        assert!(report.report.uncertainties.contains_key(key), "{key}");
    }
}

#[test]
fn report_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("six_user.toml", dir.path());
    let p = Pipeline::resolve(&cfg).unwrap();
    let report = cmd_analyze(&p, &cmd_simulate(&p).unwrap()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert_eq!(text, report.to_json().unwrap());
    let back = Report::from_json(&text).unwrap();
    assert_eq!(back.to_json().unwrap(), text);
    assert_eq!(back.config, cfg);
    assert_eq!(back.inputs.len(), 7);
    assert!(back.inputs.values().all(|h| h.len() == 64));
    let ratio = back.report.ratio.unwrap();
    assert_eq!(ratio, round_significant(report.report.ratio.unwrap()));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let read_all = |dir: &Path| -> Vec<(String, Vec<u8>)> {
        let cfg = config("six_user.toml", dir);
        let p = Pipeline::resolve(&cfg).unwrap();
        let paths = cmd_simulate(&p).unwrap();
        cmd_analyze(&p, &paths).unwrap();
        let mut files: Vec<PathBuf> = paths;
        files.push(dir.join("report.json"));
        files
            .iter()
            .map(|f| {
                (
                    f.strip_prefix(dir).unwrap().display().to_string(),
                    std::fs::read(f).unwrap(),
                )
            })
            .collect()
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ra, rb) = (read_all(a.path()), read_all(b.path()));
    // Reports echo the output directory, so only counts compare across dirs.
    assert_eq!(ra[..6], rb[..6]);
    assert_eq!(ra, read_all(a.path()));
}

#[test]
fn missing_round_type_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("six_user.toml", dir.path());
    let p = Pipeline::resolve(&cfg).unwrap();
    let mut paths = cmd_simulate(&p).unwrap();
    paths.retain(|f| !f.ends_with("ghz.type2.counts"));
    let err = cmd_analyze(&p, &paths).unwrap_err();
    assert_eq!(err.exit_code(), exit_code::MISSING_SETTING, "{err}");
    paths.retain(|f| !f.display().to_string().contains("ghz"));
    let err = cmd_analyze(&p, &paths).unwrap_err();
    assert_eq!(err.exit_code(), exit_code::MISSING_SETTING, "{err}");
}

#[test]
fn simulate_requires_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("six_user.toml", dir.path());
    cfg.seed = None;
    let err = cmd_simulate(&Pipeline::resolve(&cfg).unwrap()).unwrap_err();
    assert_eq!(err.exit_code(), exit_code::PARSE);
}

#[test]
fn sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("six_user.toml", dir.path());
    let (sweep, summary) = cmd_sweep(&Pipeline::resolve(&cfg).unwrap()).unwrap();
    assert!(summary.interior_optimum);
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p_mW,akr,rate_hz,keyrate_hz");
    assert_eq!(lines.len() - 1, sweep.points.len());
    assert_eq!(sweep.points.len(), cfg.sweep_grid().len());
    assert!(lines.iter().all(|l| l.split(',').count() == 4));
}

#[test]
fn sweep_needs_pump_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("six_user.toml", dir.path());
    cfg.sweep.step_mw = 0.0;
    assert!(cmd_sweep(&Pipeline::resolve(&cfg).unwrap()).is_err());
    cfg.sweep.step_mw = 5.0;
    cfg.noise.pump = None;
    let err = cmd_sweep(&Pipeline::resolve(&cfg).unwrap()).unwrap_err();
    assert_eq!(err.exit_code(), exit_code::PARSE);
}

#[test]
fn orbit_of_network_graph() {
    let g = parse_graph(&data("six_user.graph")).unwrap();
    assert_eq!(cmd_orbit(&g, 12).unwrap().count, 39);
    let err = cmd_orbit(&g, 5).unwrap_err();
    assert_eq!(err.exit_code(), exit_code::CAP_EXCEEDED);
}
