//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_criteria, resolve, Overrides, Restriction, Study};
use crate::studies::run_study;
use crate::HarnessError;

#[derive(Debug, Parser)]
#[command(name = "doe", version, about = "Optimal design-of-experiments studies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize with every criterion, evaluate with every criterion.
    Tournament(CommonArgs),
    /// Redundant points after projecting optimal designs onto one dimension.
    Projection(CommonArgs),
    /// Grow designs batch by batch with old points fixed.
    Sequential(CommonArgs),
    /// Spearman sensitivity errors on the analytical model suite.
    SaAnalytical(CommonArgs),
    /// Spearman sensitivity errors on the truss models.
    SaTruss(CommonArgs),
    /// One free point swept over a grid with corners fixed.
    Landscape(CommonArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// TOML or JSON config, or a manifest.json from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Output directory (default out/<study>).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use the full budgets and replicate counts.
    #[arg(long)]
    pub paper_scale: bool,
    /// Comma-separated criteria, or `all`.
    #[arg(long)]
    pub criteria: Option<String>,
    /// free, lh or mixed.
    #[arg(long)]
    pub restriction: Option<String>,
    /// Run replicates on one thread.
    #[arg(long)]
    pub serial: bool,
}

impl Command {
    pub fn study(&self) -> Study {
        match self {
            Command::Tournament(_) => Study::Tournament,
            Command::Projection(_) => Study::Projection,
            Command::Sequential(_) => Study::Sequential,
            Command::SaAnalytical(_) => Study::SaAnalytical,
            Command::SaTruss(_) => Study::SaTruss,
            Command::Landscape(_) => Study::Landscape,
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Tournament(a)
            | Command::Projection(a)
            | Command::Sequential(a)
            | Command::SaAnalytical(a)
            | Command::SaTruss(a)
            | Command::Landscape(a) => a,
        }
    }
}

fn execute(cmd: &Command) -> Result<PathBuf, HarnessError> {
    let study = cmd.study();
    let a = cmd.args();
    let ov = Overrides {
        config: a.config.clone(),
        seed: a.seed,
        replicates: a.replicates,
        paper_scale: a.paper_scale,
        criteria: a.criteria.as_deref().map(parse_criteria).transpose()?,
        restriction: a.restriction.as_deref().map(str::parse::<Restriction>).transpose()?,
    };
    let mut cfg = resolve(study, &ov)?;
    if a.serial {
        cfg.parallel = false;
    }
    let out = a.out.clone().unwrap_or_else(|| PathBuf::from("out").join(study.name()));
    let manifest = run_study(&cfg, &out)?;
    log::info!("{} wrote {} files to {}", study.name(), manifest.files.len(), out.display());
    Ok(out)
}

/// Parse `args` (program name first), run the study and return the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            println!("{}", out.display());
            0
        }
        Err(e) => {
            eprintln!("doe: {e}");
            e.exit_code()
        }
    }
}
