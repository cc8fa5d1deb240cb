//! Experiment configuration: study defaults, file loading and validation.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use optdoe::criteria::{CnScaling, CriterionId, DoptConfig, Evaluator};
use optdoe::design::{DistanceScale, DomainSpec};
use optdoe::SaConfig;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    Tournament,
    Projection,
    Sequential,
    SaAnalytical,
    SaTruss,
    Landscape,
}

impl Study {
    pub fn name(self) -> &'static str {
        match self {
            Study::Tournament => "tournament",
            Study::Projection => "projection",
            Study::Sequential => "sequential",
            Study::SaAnalytical => "sa-analytical",
            Study::SaTruss => "sa-truss",
            Study::Landscape => "landscape",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Restriction {
    Free,
    Lh,
    Mixed,
}

impl Restriction {
    pub fn name(self) -> &'static str {
        match self {
            Restriction::Free => "free",
            Restriction::Lh => "lh",
            Restriction::Mixed => "mixed",
        }
    }

    pub(crate) fn tag(self) -> u64 {
        match self {
            Restriction::Free => 0,
            Restriction::Lh => 1,
            Restriction::Mixed => 2,
        }
    }
}

impl FromStr for Restriction {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "free" => Ok(Restriction::Free),
            "lh" => Ok(Restriction::Lh),
            "mixed" | "mixed-lh" => Ok(Restriction::Mixed),
            other => Err(HarnessError::Config(format!("unknown restriction '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrussId {
    TenBar,
    TwentyFiveBar,
}

impl TrussId {
    pub fn name(self) -> &'static str {
        match self {
            TrussId::TenBar => "ten_bar",
            TrussId::TwentyFiveBar => "twenty_five_bar",
        }
    }

    pub fn model(self) -> optdoe::TrussModel64 {
        match self {
            TrussId::TenBar => optdoe::ten_bar(),
            TrussId::TwentyFiveBar => optdoe::twenty_five_bar(),
        }
    }
}

/// Everything a study run depends on. Runs are a deterministic function of this value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub study: Study,
    pub criteria: Vec<CriterionId>,
    /// Level count of the first dimension of 2-D studies.
    pub first_levels: usize,
    /// Level counts of the second dimension; the design size equals each.
    pub sizes: Vec<usize>,
    pub restriction: Restriction,
    pub replicates: usize,
    pub seed: u64,
    pub n_max: usize,
    pub t_max: f64,
    pub t_final: f64,
    pub n_reductions: usize,
    /// Sequential batches added after the initial design.
    pub iterations: usize,
    pub mc_samples: usize,
    pub trusses: Vec<TrussId>,
    /// Landscape grid points per side.
    pub grid: usize,
    pub distance_scale: DistanceScale,
    pub cn_scaling: CnScaling,
    pub dopt_base_degree: Option<usize>,
    pub dopt_bayes_terms: usize,
    pub dopt_tau: f64,
    pub parallel: bool,
}

impl ExperimentConfig {
    /// Desk-scale defaults for `study`.
    pub fn defaults(study: Study) -> Self {
        let mut c = ExperimentConfig {
            study,
            criteria: CriterionId::ALL.to_vec(),
            first_levels: 10,
            sizes: vec![7, 10, 13],
            restriction: Restriction::Free,
            replicates: 20,
            seed: 1,
            n_max: 100_000,
            t_max: 1e-3,
            t_final: 1e-6,
            n_reductions: 100,
            iterations: 0,
            mc_samples: 1_000_000,
            trusses: vec![TrussId::TenBar, TrussId::TwentyFiveBar],
            grid: 21,
            distance_scale: DistanceScale::default(),
            cn_scaling: CnScaling::default(),
            dopt_base_degree: None,
            dopt_bayes_terms: 1,
            dopt_tau: 1.0,
            parallel: true,
        };
        match study {
            Study::Sequential => {
                c.sizes = vec![10];
                c.restriction = Restriction::Lh;
                c.iterations = 3;
            }
            Study::SaAnalytical => {
                c.restriction = Restriction::Lh;
                c.iterations = 3;
            }
            Study::SaTruss => {
                c.restriction = Restriction::Lh;
                c.iterations = 1;
            }
            _ => {}
        }
        c
    }

    /// Budgets of the original studies.
    pub fn apply_paper_scale(&mut self) {
        if self.study == Study::SaTruss {
            self.n_max = 10_000_000;
            self.replicates = 20;
        } else {
            self.n_max = 1_000_000;
            self.replicates = 100;
        }
        self.mc_samples = 20_000_000;
    }

    pub fn sa_config(&self) -> SaConfig<f64> {
        SaConfig {
            t_max: self.t_max,
            t_final: self.t_final,
            n_reductions: self.n_reductions,
            n_max: self.n_max,
            accepted_quota: None,
            stage_length: None,
        }
    }

    pub fn dopt(&self) -> DoptConfig<f64> {
        DoptConfig { base_degree: self.dopt_base_degree, bayes_terms: self.dopt_bayes_terms, tau: self.dopt_tau }
    }

    pub fn evaluator(&self, domain: DomainSpec) -> Evaluator<f64> {
        let mut ev = Evaluator::new(domain).with_dopt(self.dopt());
        ev.distance_scale = self.distance_scale;
        ev.cn_scaling = self.cn_scaling;
        ev
    }

    /// Domain `[first_levels, m]` of the 2-D studies.
    pub fn planar_domain(&self, m: usize) -> Result<DomainSpec, HarnessError> {
        DomainSpec::new(vec![self.first_levels, m]).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if self.criteria.is_empty() {
            return bad("at least one criterion is required".into());
        }
        if self.study == Study::Tournament && self.criteria.len() < 2 {
            return bad("a tournament needs at least two criteria".into());
        }
        self.sa_config().validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        self.dopt().validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        if self.first_levels < 2 {
            return bad("first_levels must be at least 2".into());
        }
        let planar = matches!(self.study, Study::Tournament | Study::Projection | Study::SaAnalytical | Study::Sequential);
        if planar && (self.sizes.is_empty() || self.sizes.iter().any(|&m| m < 2)) {
            return bad("sizes must be non-empty and each at least 2".into());
        }
        if self.study == Study::Sequential && self.sizes.iter().any(|&m| m != self.first_levels) {
            return bad("sequential extension runs on square grids: sizes must equal first_levels".into());
        }
        if self.study == Study::SaTruss {
            if self.trusses.is_empty() {
                return bad("sa-truss needs at least one truss".into());
            }
            if self.restriction != Restriction::Lh {
                return bad("truss studies use LH designs only".into());
            }
        }
        if matches!(self.study, Study::SaTruss) && self.mc_samples < 1000 {
            return bad("mc_samples must be at least 1000".into());
        }
        if self.study == Study::Landscape && self.grid < 3 {
            return bad("grid must be at least 3".into());
        }
        Ok(())
    }
}

/// Contents of `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub study: Study,
    pub config: ExperimentConfig,
    pub files: Vec<String>,
}

/// Overrides collected from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub paper_scale: bool,
    pub criteria: Option<Vec<CriterionId>>,
    pub restriction: Option<Restriction>,
}

pub fn parse_criteria(list: &str) -> Result<Vec<CriterionId>, HarnessError> {
    let mut out = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        if item.trim().eq_ignore_ascii_case("all") {
            out.extend(CriterionId::ALL);
            continue;
        }
        out.push(CriterionId::from_str(item).map_err(|e| HarnessError::Config(e.to_string()))?);
    }
    let mut seen = Vec::new();
    out.retain(|c| {
        let fresh = !seen.contains(c);
        seen.push(*c);
        fresh
    });
    Ok(out)
}

/// Parse a TOML document, a JSON config or a JSON manifest into a key-value object.
fn parse_document(text: &str, path: &Path) -> Result<serde_json::Map<String, serde_json::Value>, HarnessError> {
    let err = |e: String| HarnessError::Config(format!("{}: {e}", path.display()));
    let value: serde_json::Value = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| err(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| err(e.to_string()))?
    };
    let serde_json::Value::Object(mut map) = value else {
        return Err(err("expected a key-value document".into()));
    };
    if map.contains_key("tool") && map.contains_key("files") {
        match map.remove("config") {
            Some(serde_json::Value::Object(c)) => return Ok(c),
            _ => return Err(err("manifest without a config object".into())),
        }
    }
    Ok(map)
}

/// Defaults for `study`, then the `--paper-scale` budgets, then the config file, then command-line flags.
pub fn resolve(study: Study, ov: &Overrides) -> Result<ExperimentConfig, HarnessError> {
    let mut base = ExperimentConfig::defaults(study);
    if ov.paper_scale {
        base.apply_paper_scale();
    }
    let mut cfg = match &ov.config {
        None => base,
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
            let file = parse_document(&text, path)?;
            if let Some(s) = file.get("study") {
                if s.as_str() != Some(study.name()) {
                    return Err(HarnessError::Config(format!("config is for study {s}, not {}", study.name())));
                }
            }
            let serde_json::Value::Object(mut merged) =
                serde_json::to_value(&base).map_err(|e| HarnessError::Config(e.to_string()))?
            else {
                unreachable!("config serializes to an object");
            };
            for (k, v) in file {
                merged.insert(k, v);
            }
            serde_json::from_value(serde_json::Value::Object(merged))
                .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?
        }
    };
    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    if let Some(r) = ov.replicates {
        cfg.replicates = r;
    }
    if let Some(c) = &ov.criteria {
        cfg.criteria = c.clone();
    }
    if let Some(r) = ov.restriction {
        cfg.restriction = r;
    }
    cfg.validate()?;
    Ok(cfg)
}
