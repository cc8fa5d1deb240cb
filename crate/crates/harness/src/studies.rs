//! The six studies: design generation, evaluation and their file outputs.

use std::collections::BTreeMap;
use std::path::Path;

use optdoe::criteria::{landscape_scan, CriterionId, DoptConfig, LandscapeScan};
use optdoe::design::{project, redundant_count, Design, DomainSpec};
use optdoe::models::{analytical_suite, Model};
use optdoe::sampling::{master_for, mixed_lh, random_free, random_lh, RngSeed, SeededRng};
use optdoe::sensitivity::{analyze, full_design_reference, monte_carlo_reference, DEFAULT_FULL_GRID_LIMIT};
use optdoe::sequential::{extend, ExtendedDesign, ExtensionPlan, ExtensionStrategy};
use optdoe::{anneal, OptResult64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Manifest, Restriction, Study, TrussId};
use crate::render::{boxplot_svg, heatmap_svg, num, OutputDir, Panel};
use crate::stats::{boxplot_stats, mean, BoxplotStats};
use crate::HarnessError;

fn runtime<E: std::fmt::Display>(e: E) -> HarnessError {
    HarnessError::Runtime(e.to_string())
}

fn criterion_index(id: CriterionId) -> u64 {
    CriterionId::ALL.iter().position(|&c| c == id).unwrap() as u64
}

/// Stream id of one replicate; independent of which other jobs are in the run.
fn stream(restriction: Restriction, size: usize, id: CriterionId, replicate: usize) -> u64 {
    (restriction.tag() << 56) | ((size as u64 & 0xFFFF) << 40) | (criterion_index(id) << 32) | replicate as u64
}

/// Map over jobs, in parallel or not; results keep the job order either way.
fn run_jobs<J, R, F>(parallel: bool, jobs: &[J], f: F) -> Result<Vec<R>, HarnessError>
where
    J: Sync,
    R: Send,
    F: Fn(&J) -> Result<R, HarnessError> + Sync + Send,
{
    if parallel {
        jobs.par_iter().map(&f).collect()
    } else {
        jobs.iter().map(f).collect()
    }
}

/// Starting design for `restriction`: free, square LH, or rounded LH with `n` points.
pub fn start_design(
    domain: &DomainSpec,
    restriction: Restriction,
    n: usize,
    rng: &mut SeededRng,
) -> Result<Design, HarnessError> {
    let square = domain.levels().iter().all(|&m| m == n);
    match restriction {
        Restriction::Free => random_free(domain, n, rng).map_err(runtime),
        Restriction::Lh if square => random_lh(domain, rng).map_err(runtime),
        Restriction::Lh | Restriction::Mixed => {
            let master = master_for(domain, n).map_err(runtime)?;
            mixed_lh(domain, master, rng).map_err(runtime)
        }
    }
}

/// One annealed design of `n` points for criterion `id`.
pub fn optimal_design(
    cfg: &ExperimentConfig,
    domain: &DomainSpec,
    id: CriterionId,
    n: usize,
    replicate: usize,
) -> Result<OptResult64, HarnessError> {
    let seed = RngSeed::new(cfg.seed, stream(cfg.restriction, n, id, replicate));
    let mut rng = seed.rng();
    let start = start_design(domain, cfg.restriction, n, &mut rng)?;
    let ev = cfg.evaluator(domain.clone());
    let mut r = anneal(&start, id, &ev, &cfg.sa_config(), &mut rng).map_err(runtime)?;
    r.seed = Some(seed);
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRecord {
    pub size: usize,
    pub criterion: CriterionId,
    pub replicate: usize,
    pub value: f64,
    pub seed: RngSeed,
    pub design: Design,
}

/// Sum over points of the distance to the nearest other point (index scale).
pub fn nearest_neighbour_sum(design: &Design) -> f64 {
    (0..design.n())
        .map(|i| {
            (0..design.n())
                .filter(|&j| j != i)
                .map(|j| {
                    let d2: f64 = design.row(i).iter().zip(design.row(j)).map(|(&a, &b)| (a as f64 - b as f64).powi(2)).sum();
                    d2.sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Annealed designs for every (size, criterion, replicate) of a 2-D study.
pub fn planar_designs(cfg: &ExperimentConfig) -> Result<Vec<DesignRecord>, HarnessError> {
    let mut jobs = Vec::new();
    for &m in &cfg.sizes {
        for &id in &cfg.criteria {
            for r in 0..cfg.replicates {
                jobs.push((m, id, r));
            }
        }
    }
    let domains: BTreeMap<usize, DomainSpec> =
        cfg.sizes.iter().map(|&m| cfg.planar_domain(m).map(|d| (m, d))).collect::<Result<_, _>>()?;
    run_jobs(cfg.parallel, &jobs, |&(m, id, r)| {
        let res = optimal_design(cfg, &domains[&m], id, m, r)?;
        Ok(DesignRecord {
            size: m,
            criterion: id,
            replicate: r,
            value: res.best_value,
            seed: res.seed.unwrap(),
            design: res.best,
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValue {
    pub size: usize,
    pub optimizer: CriterionId,
    pub replicate: usize,
    pub evaluator: CriterionId,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TournamentResult {
    pub designs: Vec<DesignRecord>,
    pub values: Vec<CrossValue>,
}

impl TournamentResult {
    /// Box-plot statistics keyed by (size, optimizer, evaluator).
    pub fn summary(&self) -> Result<BTreeMap<(usize, CriterionId, CriterionId), BoxplotStats>, HarnessError> {
        let mut groups: BTreeMap<(usize, CriterionId, CriterionId), Vec<f64>> = BTreeMap::new();
        for v in &self.values {
            groups.entry((v.size, v.optimizer, v.evaluator)).or_default().push(v.value);
        }
        groups.into_iter().map(|(k, v)| boxplot_stats(&v).map(|s| (k, s))).collect()
    }
}

pub fn run_tournament(cfg: &ExperimentConfig) -> Result<TournamentResult, HarnessError> {
    let designs = planar_designs(cfg)?;
    let mut values = Vec::with_capacity(designs.len() * cfg.criteria.len());
    for d in &designs {
        let ev = cfg.evaluator(cfg.planar_domain(d.size)?);
        for &e in &cfg.criteria {
            values.push(CrossValue {
                size: d.size,
                optimizer: d.criterion,
                replicate: d.replicate,
                evaluator: e,
                value: ev.evaluate_or_worst(e, &d.design),
            });
        }
    }
    Ok(TournamentResult { designs, values })
}

fn write_designs(out: &mut OutputDir, designs: &[DesignRecord]) -> Result<(), HarnessError> {
    out.write("designs.json", &serde_json::to_string_pretty(designs).map_err(runtime)?)?;
    // per (size, criterion): smallest nearest-neighbour sum
    let mut worst: BTreeMap<(usize, CriterionId), (f64, &DesignRecord)> = BTreeMap::new();
    for d in designs {
        let s = nearest_neighbour_sum(&d.design);
        let e = worst.entry((d.size, d.criterion)).or_insert((s, d));
        if s < e.0 {
            *e = (s, d);
        }
    }
    let picks: Vec<serde_json::Value> = worst
        .values()
        .map(|(s, d)| serde_json::json!({"size": d.size, "criterion": d.criterion, "replicate": d.replicate, "nearest_neighbour_sum": s, "design": d.design}))
        .collect();
    out.write("worst_designs.json", &serde_json::to_string_pretty(&picks).map_err(runtime)?)
}

fn write_tournament(cfg: &ExperimentConfig, res: &TournamentResult, out: &mut OutputDir) -> Result<(), HarnessError> {
    let rows: Vec<Vec<String>> = res
        .values
        .iter()
        .map(|v| vec![v.size.to_string(), v.optimizer.to_string(), v.replicate.to_string(), v.evaluator.to_string(), num(v.value)])
        .collect();
    out.write_csv("tournament_values.csv", &["size", "optimizer", "replicate", "evaluator", "value"], &rows)?;
    let summary = res.summary()?;
    let rows: Vec<Vec<String>> = summary
        .iter()
        .map(|((m, o, e), s)| {
            vec![m.to_string(), o.to_string(), e.to_string(), num(s.min), num(s.q1), num(s.median), num(s.q3), num(s.max), s.count.to_string()]
        })
        .collect();
    out.write_csv(
        "tournament_summary.csv",
        &["size", "optimizer", "evaluator", "min", "q1", "median", "q3", "max", "count"],
        &rows,
    )?;
    write_designs(out, &res.designs)?;

    for &m in &cfg.sizes {
        let by_eval: Vec<Panel> = cfg
            .criteria
            .iter()
            .map(|&e| Panel {
                title: format!("evaluated by {e}"),
                boxes: cfg.criteria.iter().map(|&o| (o.to_string(), summary[&(m, o, e)])).collect(),
            })
            .collect();
        out.write(&format!("tournament_{m}_by_evaluator.svg"), &boxplot_svg(&format!("{} x {m}", cfg.first_levels), &by_eval, 4))?;

        // scale each evaluator to [0, 1] over all optimizers so boxes share an axis
        let mut range: BTreeMap<CriterionId, (f64, f64)> = BTreeMap::new();
        for v in res.values.iter().filter(|v| v.size == m && v.value.is_finite()) {
            let r = range.entry(v.evaluator).or_insert((f64::INFINITY, f64::NEG_INFINITY));
            r.0 = r.0.min(v.value);
            r.1 = r.1.max(v.value);
        }
        let mut by_opt = Vec::new();
        for &o in &cfg.criteria {
            let mut boxes = Vec::new();
            for &e in &cfg.criteria {
                let (lo, hi) = range.get(&e).copied().unwrap_or((0.0, 1.0));
                let span = if hi > lo { hi - lo } else { 1.0 };
                let vals: Vec<f64> = res
                    .values
                    .iter()
                    .filter(|v| v.size == m && v.optimizer == o && v.evaluator == e)
                    .map(|v| if v.value.is_finite() { (v.value - lo) / span } else { 1.0 })
                    .collect();
                boxes.push((e.to_string(), boxplot_stats(&vals)?));
            }
            by_opt.push(Panel { title: format!("optimized by {o}"), boxes });
        }
        out.write(&format!("tournament_{m}_by_optimizer.svg"), &boxplot_svg(&format!("{} x {m}, scaled", cfg.first_levels), &by_opt, 4))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCount {
    pub size: usize,
    pub criterion: CriterionId,
    pub replicate: usize,
    pub redundant: usize,
}

/// Redundant points after projecting every planar design onto dimension 0.
pub fn run_projection(cfg: &ExperimentConfig) -> Result<Vec<ProjectionCount>, HarnessError> {
    planar_designs(cfg)?
        .iter()
        .map(|d| {
            let p = project(&d.design, &[0]).map_err(runtime)?;
            Ok(ProjectionCount { size: d.size, criterion: d.criterion, replicate: d.replicate, redundant: redundant_count(&p) })
        })
        .collect()
}

/// Mean redundant count per (size, criterion).
pub fn projection_means(counts: &[ProjectionCount]) -> BTreeMap<(usize, CriterionId), f64> {
    let mut g: BTreeMap<(usize, CriterionId), Vec<f64>> = BTreeMap::new();
    for c in counts {
        g.entry((c.size, c.criterion)).or_default().push(c.redundant as f64);
    }
    g.into_iter().map(|(k, v)| (k, mean(&v))).collect()
}

/// Histogram per (size, criterion): redundant count -> number of designs.
pub fn projection_histograms(counts: &[ProjectionCount]) -> BTreeMap<(usize, CriterionId), BTreeMap<usize, usize>> {
    let mut h: BTreeMap<(usize, CriterionId), BTreeMap<usize, usize>> = BTreeMap::new();
    for c in counts {
        *h.entry((c.size, c.criterion)).or_default().entry(c.redundant).or_default() += 1;
    }
    h
}

fn write_projection(counts: &[ProjectionCount], out: &mut OutputDir) -> Result<(), HarnessError> {
    let rows: Vec<Vec<String>> = counts
        .iter()
        .map(|c| vec![c.size.to_string(), c.criterion.to_string(), c.replicate.to_string(), c.redundant.to_string()])
        .collect();
    out.write_csv("projection_counts.csv", &["size", "criterion", "replicate", "redundant"], &rows)?;
    let mut rows = Vec::new();
    for ((m, id), h) in projection_histograms(counts) {
        for (r, n) in h {
            rows.push(vec![m.to_string(), id.to_string(), r.to_string(), n.to_string()]);
        }
    }
    out.write_csv("projection_histogram.csv", &["size", "criterion", "redundant", "designs"], &rows)?;
    let rows: Vec<Vec<String>> =
        projection_means(counts).iter().map(|((m, id), v)| vec![m.to_string(), id.to_string(), num(*v)]).collect();
    out.write_csv("projection_means.csv", &["size", "criterion", "mean_redundant"], &rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequentialRecord {
    pub criterion: CriterionId,
    pub replicate: usize,
    pub extended: ExtendedDesign<f64>,
}

fn extension_plan(cfg: &ExperimentConfig, batch: usize) -> ExtensionPlan {
    let strategy = match cfg.restriction {
        Restriction::Free => ExtensionStrategy::Free,
        _ => ExtensionStrategy::LhPreserving,
    };
    ExtensionPlan { batch_size: batch, iterations: cfg.iterations, strategy }
}

fn extend_design(
    cfg: &ExperimentConfig,
    domain: &DomainSpec,
    start: &Design,
    id: CriterionId,
    seed: RngSeed,
) -> Result<ExtendedDesign<f64>, HarnessError> {
    let plan = extension_plan(cfg, start.n());
    let ev = cfg.evaluator(domain.clone());
    let mut rng = RngSeed::new(seed.seed, seed.stream ^ (1 << 62)).rng();
    extend(start, &ev, &plan, id, &cfg.sa_config(), &mut rng).map_err(runtime)
}

/// Square-grid seed designs extended by `cfg.iterations` batches.
pub fn run_sequential(cfg: &ExperimentConfig) -> Result<Vec<SequentialRecord>, HarnessError> {
    let m = cfg.first_levels;
    let domain = cfg.planar_domain(m)?;
    let jobs: Vec<(CriterionId, usize)> =
        cfg.criteria.iter().flat_map(|&id| (0..cfg.replicates).map(move |r| (id, r))).collect();
    run_jobs(cfg.parallel, &jobs, |&(id, r)| {
        let seed = optimal_design(cfg, &domain, id, m, r)?;
        let extended = extend_design(cfg, &domain, &seed.best, id, seed.seed.unwrap())?;
        Ok(SequentialRecord { criterion: id, replicate: r, extended })
    })
}

fn write_sequential(recs: &[SequentialRecord], out: &mut OutputDir) -> Result<(), HarnessError> {
    let mut pts = Vec::new();
    let mut vals = Vec::new();
    for rec in recs {
        let d = &rec.extended.design;
        for (i, (row, it)) in d.rows().zip(&rec.extended.iteration).enumerate() {
            let mut line = vec![rec.criterion.to_string(), rec.replicate.to_string(), i.to_string()];
            line.extend(row.iter().map(|v| v.to_string()));
            line.push(it.to_string());
            pts.push(line);
        }
        let batch = rec.extended.iteration.iter().filter(|&&t| t == 0).count();
        for (j, v) in rec.extended.values.iter().enumerate() {
            vals.push(vec![rec.criterion.to_string(), rec.replicate.to_string(), (j + 1).to_string(), (batch * (j + 2)).to_string(), num(*v)]);
        }
    }
    out.write_csv("sequential_points.csv", &["criterion", "replicate", "point", "x0", "x1", "iteration"], &pts)?;
    out.write_csv("sequential_values.csv", &["criterion", "replicate", "iteration", "n", "value"], &vals)?;
    out.write("sequential_designs.json", &serde_json::to_string_pretty(recs).map_err(runtime)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    /// `oneshot`, `sequential`, or the truss name.
    pub kind: String,
    pub size: usize,
    pub n: usize,
    pub criterion: CriterionId,
    pub replicate: usize,
    pub model: String,
    pub response: String,
    pub epsilon: f64,
}

fn prefix(design: &Design, n: usize) -> Design {
    Design::from_flat(n, design.k(), design.flat()[..n * design.k()].to_vec(), design.lh_constrained())
}

#[allow(clippy::too_many_arguments)]
fn errors_for<M: Model<f64>>(
    design: &Design,
    domain: &DomainSpec,
    models: &[M],
    references: &[Vec<Vec<f64>>],
    kind: &str,
    size: usize,
    id: CriterionId,
    replicate: usize,
) -> Result<Vec<ErrorRecord>, HarnessError> {
    let mut out = Vec::new();
    for (m, r) in models.iter().zip(references) {
        let rep = analyze(design, domain, m, r, kind, id.name(), replicate).map_err(runtime)?;
        for (resp, e) in rep.response_names.iter().zip(&rep.errors) {
            out.push(ErrorRecord {
                kind: kind.to_string(),
                size,
                n: design.n(),
                criterion: id,
                replicate,
                model: rep.model_id.clone(),
                response: resp.clone(),
                epsilon: *e,
            });
        }
    }
    Ok(out)
}

/// Correlation errors of annealed designs on the analytical suite: one-shot
/// designs for every size, then sequential extensions on the square grid.
pub fn run_sa_analytical(cfg: &ExperimentConfig) -> Result<Vec<ErrorRecord>, HarnessError> {
    let suite = analytical_suite::<f64>();
    let mut sizes = cfg.sizes.clone();
    if cfg.iterations > 0 && !sizes.contains(&cfg.first_levels) {
        sizes.push(cfg.first_levels);
    }
    let mut refs: BTreeMap<usize, Vec<Vec<Vec<f64>>>> = BTreeMap::new();
    for &m in &sizes {
        let dom = cfg.planar_domain(m)?;
        let r = suite
            .iter()
            .map(|f| full_design_reference(&dom, f, DEFAULT_FULL_GRID_LIMIT).map_err(runtime))
            .collect::<Result<Vec<_>, _>>()?;
        refs.insert(m, r);
    }

    let one_shot: Vec<(usize, CriterionId, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&m| cfg.criteria.iter().flat_map(move |&id| (0..cfg.replicates).map(move |r| (m, id, r))))
        .collect();
    let mut out: Vec<ErrorRecord> = run_jobs(cfg.parallel, &one_shot, |&(m, id, r)| {
        let dom = cfg.planar_domain(m)?;
        let d = optimal_design(cfg, &dom, id, m, r)?;
        errors_for(&d.best, &dom, &suite, &refs[&m], "oneshot", m, id, r)
    })?
    .into_iter()
    .flatten()
    .collect();

    if cfg.iterations > 0 {
        let m = cfg.first_levels;
        let seq: Vec<(CriterionId, usize)> =
            cfg.criteria.iter().flat_map(|&id| (0..cfg.replicates).map(move |r| (id, r))).collect();
        let more: Vec<Vec<ErrorRecord>> = run_jobs(cfg.parallel, &seq, |&(id, r)| {
            let dom = cfg.planar_domain(m)?;
            let seed = optimal_design(cfg, &dom, id, m, r)?;
            let ext = extend_design(cfg, &dom, &seed.best, id, seed.seed.unwrap())?;
            let mut recs = Vec::new();
            for j in 0..=cfg.iterations {
                let d = prefix(&ext.design, m * (j + 1));
                recs.extend(errors_for(&d, &dom, &suite, &refs[&m], "sequential", m, id, r)?);
            }
            Ok(recs)
        })?;
        out.extend(more.into_iter().flatten());
    }
    Ok(out)
}

/// 100 × mean and 100 × max of epsilon per group key.
pub fn error_table<K: Ord + Clone>(records: &[ErrorRecord], key: impl Fn(&ErrorRecord) -> K) -> BTreeMap<K, (f64, f64)> {
    let mut g: BTreeMap<K, Vec<f64>> = BTreeMap::new();
    for r in records {
        g.entry(key(r)).or_default().push(r.epsilon);
    }
    g.into_iter()
        .map(|(k, v)| {
            let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (k, (100.0 * mean(&v), 100.0 * max))
        })
        .collect()
}

fn error_rows(records: &[ErrorRecord]) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| {
            vec![
                r.kind.clone(),
                r.size.to_string(),
                r.n.to_string(),
                r.criterion.to_string(),
                r.replicate.to_string(),
                r.model.clone(),
                r.response.clone(),
                num(r.epsilon),
            ]
        })
        .collect()
}

const ERROR_HEADER: [&str; 8] = ["kind", "size", "n", "criterion", "replicate", "model", "response", "epsilon"];

fn error_panels(cfg: &ExperimentConfig, records: &[ErrorRecord], series: &[String]) -> Result<Vec<Panel>, HarnessError> {
    let mut panels = Vec::new();
    for &id in &cfg.criteria {
        for s in series {
            let vals: Vec<f64> = records
                .iter()
                .filter(|r| r.criterion == id && (&r.model == s || &r.response == s))
                .map(|r| r.epsilon)
                .collect();
            if vals.is_empty() {
                continue;
            }
            panels.push(Panel { title: format!("{id} {s}"), boxes: vec![(s.clone(), boxplot_stats(&vals)?)] });
        }
    }
    Ok(panels)
}

fn write_sa_analytical(cfg: &ExperimentConfig, recs: &[ErrorRecord], out: &mut OutputDir) -> Result<(), HarnessError> {
    let restriction = cfg.restriction.name();
    out.write_csv(&format!("sa_analytical_{restriction}_errors.csv"), &ERROR_HEADER, &error_rows(recs))?;
    let mut rows = Vec::new();
    for ((kind, size, n, id), (m, x)) in error_table(recs, |r| (r.kind.clone(), r.size, r.n, r.criterion)) {
        rows.push(vec![kind, restriction.to_string(), size.to_string(), n.to_string(), id.to_string(), num(m), num(x)]);
    }
    for ((kind, id), (m, x)) in error_table(recs, |r| (r.kind.clone(), r.criterion)) {
        rows.push(vec![kind, restriction.to_string(), "overall".into(), "overall".into(), id.to_string(), num(m), num(x)]);
    }
    out.write_csv(
        &format!("sa_analytical_{restriction}_table.csv"),
        &["kind", "restriction", "size", "n", "criterion", "mean_x100", "max_x100"],
        &rows,
    )?;
    let models: Vec<String> = analytical_suite::<f64>().iter().map(|m| m.name.to_string()).collect();
    let mut groups: BTreeMap<(String, usize, usize), Vec<ErrorRecord>> = BTreeMap::new();
    for r in recs {
        groups.entry((r.kind.clone(), r.size, r.n)).or_default().push(r.clone());
    }
    for ((kind, size, n), g) in groups {
        let panels = error_panels(cfg, &g, &models)?;
        let name = format!("sa_analytical_{restriction}_{kind}_{}x{size}_n{n}.svg", cfg.first_levels);
        out.write(&name, &boxplot_svg(&format!("{kind} {restriction} n={n}"), &panels, models.len()))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCache {
    pub truss: TrussId,
    pub mc_samples: usize,
    pub seed: u64,
    /// `[response][variable]`.
    pub reference: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrussResult {
    pub references: Vec<ReferenceCache>,
    pub errors: Vec<ErrorRecord>,
}

fn reference_file(t: TrussId) -> String {
    format!("reference_{}.json", t.name())
}

/// Monte-Carlo reference for `t`, reused from `cache_dir` when a matching file exists.
pub fn truss_reference(cfg: &ExperimentConfig, t: TrussId, cache_dir: Option<&Path>) -> Result<ReferenceCache, HarnessError> {
    if let Some(dir) = cache_dir {
        if let Ok(text) = std::fs::read_to_string(dir.join(reference_file(t))) {
            if let Ok(c) = serde_json::from_str::<ReferenceCache>(&text) {
                if c.truss == t && c.mc_samples == cfg.mc_samples && c.seed == cfg.seed {
                    log::info!("reusing cached reference for {}", t.name());
                    return Ok(c);
                }
            }
        }
    }
    let model = t.model();
    let dom = model.domain().map_err(runtime)?;
    let tag = match t {
        TrussId::TenBar => 10,
        TrussId::TwentyFiveBar => 25,
    };
    let mut rng = RngSeed::new(cfg.seed, (3 << 60) | tag).rng();
    let reference = monte_carlo_reference(&dom, &model, cfg.mc_samples, &mut rng).map_err(runtime)?;
    Ok(ReferenceCache { truss: t, mc_samples: cfg.mc_samples, seed: cfg.seed, reference })
}

/// LH designs of n = level count (and its multiples) scored against the Monte-Carlo reference.
pub fn run_sa_truss(cfg: &ExperimentConfig, cache_dir: Option<&Path>) -> Result<TrussResult, HarnessError> {
    let mut references = Vec::new();
    let mut errors = Vec::new();
    for &t in &cfg.trusses {
        let reference = truss_reference(cfg, t, cache_dir)?;
        let model = t.model();
        let dom = model.domain().map_err(runtime)?;
        let n = dom.level_count(0);
        let jobs: Vec<(CriterionId, usize)> =
            cfg.criteria.iter().flat_map(|&id| (0..cfg.replicates).map(move |r| (id, r))).collect();
        let recs: Vec<Vec<ErrorRecord>> = run_jobs(cfg.parallel, &jobs, |&(id, r)| {
            let d = optimal_design(cfg, &dom, id, n, r)?;
            let ext = extend_design(cfg, &dom, &d.best, id, d.seed.unwrap())?;
            let mut out = Vec::new();
            for j in 0..=cfg.iterations {
                let p = prefix(&ext.design, n * (j + 1));
                out.extend(errors_for(&p, &dom, std::slice::from_ref(&model), std::slice::from_ref(&reference.reference), t.name(), n, id, r)?);
            }
            Ok(out)
        })?;
        errors.extend(recs.into_iter().flatten());
        references.push(reference);
    }
    Ok(TrussResult { references, errors })
}

fn write_sa_truss(cfg: &ExperimentConfig, res: &TrussResult, out: &mut OutputDir) -> Result<(), HarnessError> {
    for r in &res.references {
        out.write(&reference_file(r.truss), &serde_json::to_string_pretty(r).map_err(runtime)?)?;
    }
    out.write_csv("sa_truss_errors.csv", &ERROR_HEADER, &error_rows(&res.errors))?;
    let mut rows = Vec::new();
    for ((kind, n, id, resp), (m, x)) in error_table(&res.errors, |r| (r.kind.clone(), r.n, r.criterion, r.response.clone())) {
        rows.push(vec![kind, n.to_string(), id.to_string(), resp, num(m), num(x)]);
    }
    // overall: mean over responses per replicate
    let mut per_rep: BTreeMap<(String, usize, CriterionId, usize), Vec<f64>> = BTreeMap::new();
    for r in &res.errors {
        per_rep.entry((r.kind.clone(), r.n, r.criterion, r.replicate)).or_default().push(r.epsilon);
    }
    let overall: Vec<ErrorRecord> = per_rep
        .into_iter()
        .map(|((kind, n, criterion, replicate), v)| ErrorRecord {
            kind,
            size: 0,
            n,
            criterion,
            replicate,
            model: String::new(),
            response: "overall".into(),
            epsilon: mean(&v),
        })
        .collect();
    for ((kind, n, id), (m, x)) in error_table(&overall, |r| (r.kind.clone(), r.n, r.criterion)) {
        rows.push(vec![kind, n.to_string(), id.to_string(), "overall".into(), num(m), num(x)]);
    }
    out.write_csv("sa_truss_table.csv", &["truss", "n", "criterion", "response", "mean_x100", "max_x100"], &rows)?;
    let responses: Vec<String> = ["w", "d", "s"].map(String::from).to_vec();
    let mut groups: BTreeMap<(String, usize), Vec<ErrorRecord>> = BTreeMap::new();
    for r in &res.errors {
        groups.entry((r.kind.clone(), r.n)).or_default().push(r.clone());
    }
    for ((kind, n), g) in groups {
        let panels = error_panels(cfg, &g, &responses)?;
        out.write(&format!("sa_truss_{kind}_n{n}.svg"), &boxplot_svg(&format!("{kind} n={n}"), &panels, 3))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeRecord {
    pub name: String,
    pub scan: LandscapeScan<f64>,
}

/// Criterion values for one free point swept over the grid, with three or four
/// corners fixed, plus the linear and Bayesian D-optimality scans.
pub fn run_landscape(cfg: &ExperimentConfig) -> Result<Vec<LandscapeRecord>, HarnessError> {
    let g = cfg.grid - 1;
    let dom = DomainSpec::uniform(2, cfg.grid).map_err(|e| HarnessError::Config(e.to_string()))?;
    let pts = |p: &[[usize; 2]]| Design::new(p.iter().map(|r| r.to_vec()).collect(), false).map_err(runtime);
    let three = pts(&[[0, 0], [g, 0], [0, g]])?;
    let four = pts(&[[0, 0], [g, 0], [0, g], [g, g]])?;
    let ev = cfg.evaluator(dom.clone());
    let mut jobs: Vec<(String, CriterionId, Design, DoptConfig<f64>)> = Vec::new();
    for &id in &cfg.criteria {
        jobs.push((format!("three_corners_{}", id.name().to_lowercase()), id, three.clone(), cfg.dopt()));
        jobs.push((format!("four_corners_{}", id.name().to_lowercase()), id, four.clone(), cfg.dopt()));
    }
    jobs.push(("dopt_linear".into(), CriterionId::Dopt, four.clone(), DoptConfig::linear()));
    jobs.push(("dopt_bayes".into(), CriterionId::Dopt, four, DoptConfig { base_degree: Some(1), bayes_terms: 1, tau: cfg.dopt_tau }));
    jobs.iter()
        .map(|(name, id, fixed, dopt)| {
            let e = ev.clone().with_dopt(*dopt);
            let scan = landscape_scan(*id, fixed, &e).map_err(runtime)?;
            Ok(LandscapeRecord { name: name.clone(), scan })
        })
        .collect()
}

fn write_landscape(recs: &[LandscapeRecord], out: &mut OutputDir) -> Result<(), HarnessError> {
    let mut rows = Vec::new();
    for r in recs {
        out.write(&format!("landscape_{}.csv", r.name), &r.scan.to_csv())?;
        out.write(
            &format!("landscape_{}.svg", r.name),
            &heatmap_svg(&format!("{} ({})", r.name, r.scan.criterion), r.scan.width, r.scan.height, &r.scan.values),
        )?;
        let arg: Vec<String> = r.scan.argmin(1e-12).iter().map(|(x, y)| format!("{x} {y}")).collect();
        rows.push(vec![r.name.clone(), r.scan.criterion.to_string(), num(r.scan.min_value()), arg.join(";")]);
    }
    out.write_csv("landscape_summary.csv", &["scan", "criterion", "min", "argmin"], &rows)
}

/// Run the configured study and write every output plus `manifest.json` into `out_dir`.
pub fn run_study(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Manifest, HarnessError> {
    cfg.validate()?;
    let mut out = OutputDir::create(out_dir)?;
    match cfg.study {
        Study::Tournament => write_tournament(cfg, &run_tournament(cfg)?, &mut out)?,
        Study::Projection => write_projection(&run_projection(cfg)?, &mut out)?,
        Study::Sequential => write_sequential(&run_sequential(cfg)?, &mut out)?,
        Study::SaAnalytical => write_sa_analytical(cfg, &run_sa_analytical(cfg)?, &mut out)?,
        Study::SaTruss => {
            let res = run_sa_truss(cfg, Some(out_dir))?;
            write_sa_truss(cfg, &res, &mut out)?
        }
        Study::Landscape => write_landscape(&run_landscape(cfg)?, &mut out)?,
    }
    let mut files = out.files().to_vec();
    files.push("manifest.json".into());
    let manifest = Manifest {
        tool: "doe".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        study: cfg.study,
        config: cfg.clone(),
        files,
    };
    out.write("manifest.json", &serde_json::to_string_pretty(&manifest).map_err(runtime)?)?;
    Ok(manifest)
}
