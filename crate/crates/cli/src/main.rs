use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qnetkey::error::{Error, Result};
use qnetkey::io::{
    cmd_analyze, cmd_extract, cmd_orbit, cmd_simulate, cmd_sweep, parse_graph, Pipeline,
    ProtocolChoice, RunConfig,
};
use qnetkey::router::ORBIT_CAP;

/// Graph-state network simulator and conference key-rate analyzer.
///
/// Exit codes: 0 success, 1 I/O error, 2 parse or config error, 3 no plan
/// found, 4 missing measurement setting, 5 size cap exceeded, 6 other
/// invalid input.
#[derive(Parser, Debug)]
#[command(name = "qnetkey", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Network graph file; overrides the config's `graph`.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config's `output`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// nqkd, 2qkd or both.
    #[arg(long, global = true)]
    protocol: Option<ProtocolChoice>,
    #[arg(long, global = true)]
    rounds: Option<u64>,
    /// Largest graph the orbit enumeration accepts.
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the local-complementation orbit of the graph.
    Orbit,
    /// Find extraction plans and write them as JSON.
    Extract,
    /// Simulate protocol rounds and write counts files.
    Simulate,
    /// Turn counts files into a key-rate report.
    Analyze {
        /// Counts files; defaults to every `*.counts` in `<out>/counts`.
        counts: Vec<PathBuf>,
    },
    /// Key rate against pump power.
    Sweep,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required for this command".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(g) = &cli.graph {
        cfg.graph = g.clone();
    }
    if let Some(o) = &cli.out {
        cfg.output = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = Some(s);
    }
    if let Some(p) = cli.protocol {
        cfg.protocol = p;
    }
    if let Some(r) = cli.rounds {
        cfg.rounds = r;
    }
    Ok(cfg)
}

fn counts_in(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "counts"));
    files.sort();
    Ok(files)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Orbit => {
            let path = match (&cli.graph, &cli.config) {
                (Some(g), _) => g.clone(),
                (None, Some(_)) => load_config(cli)?.graph,
                (None, None) => return Err(Error::Config("--graph is required".into())),
            };
            let listing = cmd_orbit(&parse_graph(&path)?, cli.cap.unwrap_or(ORBIT_CAP))?;
            print!("{}", listing.to_text());
        }
        Command::Extract => {
            let out = cmd_extract(&Pipeline::resolve(&load_config(cli)?)?)?;
            print!("{}", out.summary);
            for f in out.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Simulate => {
            for f in cmd_simulate(&Pipeline::resolve(&load_config(cli)?)?)? {
                println!("wrote {}", f.display());
            }
        }
        Command::Analyze { counts } => {
            let p = Pipeline::resolve(&load_config(cli)?)?;
            let files = if counts.is_empty() {
                counts_in(&p.config.output.join("counts"))?
            } else {
                counts.clone()
            };
            let report = cmd_analyze(&p, &files)?;
            let r = &report.report;
            if let Some(n) = &r.nqkd {
                println!(
                    "nqkd: qber {:.6} qx {:.6} akr_n {:.6}",
                    n.estimates.qber, n.estimates.qx, n.akr_n
                );
            }
            if let Some(t) = &r.two_qkd {
                println!("2qkd: akr_2 {:.6}", t.akr_2);
            }
            if let Some(ratio) = r.ratio {
                let std = r.uncertainties.get("ratio").map_or(f64::NAN, |m| m.std);
                println!("ratio: {ratio:.6} +- {std:.6}");
            }
            println!("wrote {}", p.config.output.join("report.json").display());
        }
        Command::Sweep => {
            let p = Pipeline::resolve(&load_config(cli)?)?;
            let (_, s) = cmd_sweep(&p)?;
            println!(
                "argmax {} mW, key rate {:.6e} Hz, interior {}",
                s.argmax_p_mw, s.max_keyrate_hz, s.interior_optimum
            );
            println!("wrote {}", p.config.output.join("sweep.csv").display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
