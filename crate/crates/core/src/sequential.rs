//! Batch extension of an existing design with the old points held fixed.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annealer::{anneal_rows, AnnealError, SaConfig};
use crate::criteria::{CriterionId, Evaluator};
use crate::design::{Design, DesignError};
use crate::sampling::{random_lh, SamplingError, MIXED_LH_RETRIES};
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequentialError {
    #[error("grid exhausted: {have} points plus a batch of {batch} exceed {cells} cells")]
    GridExhausted { have: usize, batch: usize, cells: u128 },
    #[error("seed design violates the extension constraint: {0}")]
    Constraint(String),
    #[error("invalid extension plan: {0}")]
    Plan(String),
    #[error("no duplicate-free LH batch found in {0} draws")]
    Collisions(usize),
    #[error(transparent)]
    Anneal(#[from] AnnealError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionStrategy {
    Free,
    LhPreserving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionPlan {
    pub batch_size: usize,
    pub iterations: usize,
    pub strategy: ExtensionStrategy,
}

impl ExtensionPlan {
    pub fn validate(&self, seed: &Design) -> Result<(), SequentialError> {
        if self.batch_size == 0 {
            return Err(SequentialError::Plan("batch_size must be at least 1".into()));
        }
        let lh = self.strategy == ExtensionStrategy::LhPreserving;
        if lh != seed.lh_constrained() {
            return Err(SequentialError::Plan(format!(
                "{:?} strategy does not match a seed with lh_constrained = {}",
                self.strategy,
                seed.lh_constrained()
            )));
        }
        Ok(())
    }
}

/// An extended design; `iteration[i]` is 0 for seed rows and `j` for rows added in batch `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedDesign<T> {
    pub design: Design,
    pub iteration: Vec<usize>,
    /// Whole-design criterion value after each batch.
    pub values: Vec<T>,
}

impl<T> ExtendedDesign<T> {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let k = self.design.k();
        for d in 0..k {
            s.push_str(&format!("x{d},"));
        }
        s.push_str("iteration\n");
        for (row, it) in self.design.rows().zip(&self.iteration) {
            for v in row {
                s.push_str(&format!("{v},"));
            }
            s.push_str(&format!("{it}\n"));
        }
        s
    }
}

fn random_unoccupied_batch<R: Rng + ?Sized>(current: &Design, evaluator_levels: &[usize], batch: usize, rng: &mut R) -> Design {
    let k = current.k();
    let mut out = Design::from_flat(0, k, Vec::new(), false);
    let mut cell = vec![0usize; k];
    while out.n() < batch {
        for (c, &m) in cell.iter_mut().zip(evaluator_levels) {
            *c = rng.gen_range(0..m);
        }
        if !current.contains_row(&cell) && !out.contains_row(&cell) {
            out.push_row(&cell);
        }
    }
    out
}

/// Add `plan.iterations` batches of freely placed points, annealing only the new rows.
pub fn extend_free<T: Scalar, R: Rng + ?Sized>(
    seed: &Design,
    evaluator: &Evaluator<T>,
    plan: &ExtensionPlan,
    id: CriterionId,
    cfg: &SaConfig<T>,
    rng: &mut R,
) -> Result<ExtendedDesign<T>, SequentialError> {
    plan.validate(seed)?;
    seed.validate(&evaluator.domain)?;
    if seed.has_duplicates() {
        return Err(SequentialError::Constraint("seed contains duplicate points".into()));
    }
    let cells = evaluator.domain.cell_count();
    let mut current = seed.clone();
    let mut iteration = vec![0; seed.n()];
    let mut values = Vec::with_capacity(plan.iterations);
    for j in 1..=plan.iterations {
        let have = current.n();
        if (have + plan.batch_size) as u128 > cells {
            return Err(SequentialError::GridExhausted { have, batch: plan.batch_size, cells });
        }
        let batch = random_unoccupied_batch(&current, evaluator.domain.levels(), plan.batch_size, rng);
        let mut start = current.clone();
        start.append(&batch);
        let r = anneal_rows(&start, have..start.n(), id, evaluator, cfg, rng)?;
        current = r.best;
        iteration.extend(std::iter::repeat_n(j, plan.batch_size));
        values.push(r.best_value);
    }
    Ok(ExtendedDesign { design: current, iteration, values })
}

/// Add `plan.iterations` LH batches so every level of every dimension gains one point
/// per batch. Swaps are confined to the new batch, so old rows never move.
pub fn extend_lh<T: Scalar, R: Rng + ?Sized>(
    seed: &Design,
    evaluator: &Evaluator<T>,
    plan: &ExtensionPlan,
    id: CriterionId,
    cfg: &SaConfig<T>,
    rng: &mut R,
) -> Result<ExtendedDesign<T>, SequentialError> {
    plan.validate(seed)?;
    let domain = &evaluator.domain;
    seed.validate(domain)?;
    let m = domain.level_count(0);
    if domain.levels().iter().any(|&l| l != m) {
        return Err(SequentialError::Constraint(format!(
            "LH extension needs equal level counts, got {:?} (mixed extension is unsupported)",
            domain.levels()
        )));
    }
    if plan.batch_size != m {
        return Err(SequentialError::Plan(format!("batch_size {} must equal the level count {m}", plan.batch_size)));
    }
    if !seed.is_latin_hypercube(domain) || seed.has_duplicates() {
        return Err(SequentialError::Constraint("seed is not a duplicate-free (stacked) Latin hypercube".into()));
    }
    let cells = domain.cell_count();
    let mut current = seed.clone();
    let mut iteration = vec![0; seed.n()];
    let mut values = Vec::with_capacity(plan.iterations);
    for j in 1..=plan.iterations {
        let have = current.n();
        if (have + m) as u128 > cells {
            return Err(SequentialError::GridExhausted { have, batch: m, cells });
        }
        let mut start = None;
        for _ in 0..MIXED_LH_RETRIES {
            let batch = random_lh(domain, rng)?;
            if batch.rows().all(|r| !current.contains_row(r)) {
                let mut s = current.clone();
                s.append(&batch);
                s.set_lh_constrained(true);
                start = Some(s);
                break;
            }
        }
        let start = start.ok_or(SequentialError::Collisions(MIXED_LH_RETRIES))?;
        let r = anneal_rows(&start, have..start.n(), id, evaluator, cfg, rng)?;
        current = r.best;
        iteration.extend(std::iter::repeat_n(j, m));
        values.push(r.best_value);
    }
    Ok(ExtendedDesign { design: current, iteration, values })
}

/// Dispatch on `plan.strategy`.
pub fn extend<T: Scalar, R: Rng + ?Sized>(
    seed: &Design,
    evaluator: &Evaluator<T>,
    plan: &ExtensionPlan,
    id: CriterionId,
    cfg: &SaConfig<T>,
    rng: &mut R,
) -> Result<ExtendedDesign<T>, SequentialError> {
    match plan.strategy {
        ExtensionStrategy::Free => extend_free(seed, evaluator, plan, id, cfg, rng),
        ExtensionStrategy::LhPreserving => extend_lh(seed, evaluator, plan, id, cfg, rng),
    }
}
