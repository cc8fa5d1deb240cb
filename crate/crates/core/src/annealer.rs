//! Simulated annealing over free or Latin-hypercube-constrained discrete designs.
//!
//! Free designs move one point at a time (cycling through the rows) to a
//! uniformly chosen unoccupied cell. LH designs swap one randomly chosen
//! coordinate between two random rows, which keeps every column's level
//! multiset intact. Acceptance follows the Metropolis rule; the temperature
//! is divided by `(t_max / t_final)^(1 / n_reductions)` at the end of every
//! stage, a stage ending after `stage_length` evaluations or as soon as
//! `accepted_quota` moves have been accepted in it.

use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::{CriterionId, Evaluator};
use crate::design::{Design, DesignError, DomainSpec};
use crate::sampling::RngSeed;
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnealError {
    #[error("every grid cell is occupied, no free move exists")]
    FullGrid,
    #[error("LH swaps need an LH-constrained design with at least two movable rows")]
    NotLh,
    #[error("invalid annealing schedule: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaConfig<T> {
    pub t_max: T,
    pub t_final: T,
    pub n_reductions: usize,
    /// Objective evaluations for the whole run.
    pub n_max: usize,
    /// Accepted moves that end a stage early; defaults to `n_max / 100`.
    #[serde(default)]
    pub accepted_quota: Option<usize>,
    /// Evaluations per stage; defaults to `n_max / 10`.
    #[serde(default)]
    pub stage_length: Option<usize>,
}

impl<T: Scalar> Default for SaConfig<T> {
    fn default() -> Self {
        Self {
            t_max: T::of(1e-3),
            t_final: T::of(1e-6),
            n_reductions: 100,
            n_max: 1_000_000,
            accepted_quota: None,
            stage_length: None,
        }
    }
}

impl<T: Scalar> SaConfig<T> {
    pub fn with_budget(n_max: usize) -> Self {
        Self { n_max, ..Self::default() }
    }

    pub fn accepted_quota(&self) -> usize {
        self.accepted_quota.unwrap_or(self.n_max / 100).max(1)
    }

    pub fn stage_length(&self) -> usize {
        self.stage_length.unwrap_or(self.n_max / 10).max(1)
    }

    /// Divisor applied to the temperature after each stage.
    pub fn cooling_factor(&self) -> T {
        (self.t_max / self.t_final).powf(T::one() / T::of_usize(self.n_reductions.max(1)))
    }

    pub fn validate(&self) -> Result<(), AnnealError> {
        if !(self.t_final > T::zero()) || !(self.t_max >= self.t_final) {
            return Err(AnnealError::InvalidConfig(format!(
                "need t_max >= t_final > 0, got {} and {}",
                self.t_max, self.t_final
            )));
        }
        if self.n_reductions == 0 || self.n_max < self.n_reductions {
            return Err(AnnealError::InvalidConfig(format!(
                "need n_max >= n_reductions >= 1, got {} and {}",
                self.n_max, self.n_reductions
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageLog<T> {
    pub stage: usize,
    /// Cumulative evaluations at the end of the stage.
    pub evaluations: usize,
    pub temperature: T,
    pub accepted: usize,
    pub current_value: T,
    pub best_value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult<T> {
    pub criterion: CriterionId,
    pub best: Design,
    pub best_value: T,
    pub history: Vec<StageLog<T>>,
    pub evaluations: usize,
    pub accepted: usize,
    pub seed: Option<RngSeed>,
    pub config: SaConfig<T>,
}

impl<T: Scalar> OptResult<T> {
    pub fn history_csv(&self) -> String {
        let mut s = String::from("stage,evaluations,temperature,accepted,current,best\n");
        for h in &self.history {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                h.stage, h.evaluations, h.temperature, h.accepted, h.current_value, h.best_value
            ));
        }
        s
    }
}

/// Metropolis acceptance: `exp((f_old - f_new) / t) >= u`.
///
/// Non-finite proposals are never accepted; improvements and ties always are.
pub fn metropolis_accept<T: Scalar>(f_old: T, f_new: T, t: T, u: T) -> bool {
    if !f_new.is_finite() {
        return false;
    }
    if f_new <= f_old {
        return true;
    }
    ((f_old - f_new) / t).exp() >= u
}

/// A reversible in-place modification.
#[derive(Debug, Clone, PartialEq)]
pub enum Move {
    Relocate { row: usize, old: Vec<usize> },
    Swap { a: usize, b: usize, dim: usize },
}

impl Move {
    pub fn undo(&self, design: &mut Design) {
        match self {
            Move::Relocate { row, old } => design.row_mut(*row).copy_from_slice(old),
            Move::Swap { a, b, dim } => swap_coord(design, *a, *b, *dim),
        }
    }

    /// True when the move made a touched row coincide with another row.
    pub fn created_duplicate(&self, design: &Design) -> bool {
        let clash = |r: usize| (0..design.n()).any(|o| o != r && design.row(o) == design.row(r));
        match self {
            Move::Relocate { row, .. } => clash(*row),
            Move::Swap { a, b, .. } => clash(*a) || clash(*b),
        }
    }
}

fn swap_coord(design: &mut Design, a: usize, b: usize, dim: usize) {
    let va = design.get(a, dim);
    let vb = design.get(b, dim);
    design.set(a, dim, vb);
    design.set(b, dim, va);
}

/// Relocate row `rows.start + step % rows.len()` to a random unoccupied cell, in place.
pub fn free_move_in_place<R: Rng + ?Sized>(
    design: &mut Design,
    domain: &DomainSpec,
    rows: Range<usize>,
    step: usize,
    rng: &mut R,
) -> Result<Move, AnnealError> {
    if (design.n() as u128) >= domain.cell_count() {
        return Err(AnnealError::FullGrid);
    }
    if rows.is_empty() {
        return Err(AnnealError::FullGrid);
    }
    let row = rows.start + step % rows.len();
    let k = domain.k();
    let mut cell = vec![0usize; k];
    loop {
        for (dim, c) in cell.iter_mut().enumerate() {
            *c = rng.gen_range(0..domain.level_count(dim));
        }
        if !design.contains_row(&cell) {
            break;
        }
    }
    let old = design.row(row).to_vec();
    design.row_mut(row).copy_from_slice(&cell);
    Ok(Move::Relocate { row, old })
}

/// Swap one random coordinate between two distinct random rows of `rows`, in place.
pub fn lh_swap_in_place<R: Rng + ?Sized>(
    design: &mut Design,
    rows: Range<usize>,
    rng: &mut R,
) -> Result<Move, AnnealError> {
    if !design.lh_constrained() || rows.len() < 2 || design.k() == 0 {
        return Err(AnnealError::NotLh);
    }
    let a = rng.gen_range(rows.clone());
    let mut b = rng.gen_range(rows.start..rows.end - 1);
    if b >= a {
        b += 1;
    }
    let dim = rng.gen_range(0..design.k());
    swap_coord(design, a, b, dim);
    Ok(Move::Swap { a, b, dim })
}

/// One free move; returns the modified copy.
pub fn propose_free_move<R: Rng + ?Sized>(
    design: &Design,
    domain: &DomainSpec,
    step: usize,
    rng: &mut R,
) -> Result<Design, AnnealError> {
    let mut d = design.clone();
    free_move_in_place(&mut d, domain, 0..design.n(), step, rng)?;
    Ok(d)
}

/// One LH coordinate swap; returns the modified copy.
pub fn propose_lh_swap<R: Rng + ?Sized>(design: &Design, rng: &mut R) -> Result<Design, AnnealError> {
    let mut d = design.clone();
    lh_swap_in_place(&mut d, 0..design.n(), rng)?;
    Ok(d)
}

/// Minimise `id` starting from `start`. The neighbourhood follows `start.lh_constrained()`.
pub fn anneal<T: Scalar, R: Rng + ?Sized>(
    start: &Design,
    id: CriterionId,
    evaluator: &Evaluator<T>,
    cfg: &SaConfig<T>,
    rng: &mut R,
) -> Result<OptResult<T>, AnnealError> {
    anneal_rows(start, 0..start.n(), id, evaluator, cfg, rng)
}

/// As [`anneal`], with the random sequence taken from `seed` and recorded in the result.
pub fn anneal_seeded<T: Scalar>(
    start: &Design,
    id: CriterionId,
    evaluator: &Evaluator<T>,
    cfg: &SaConfig<T>,
    seed: RngSeed,
) -> Result<OptResult<T>, AnnealError> {
    let mut rng = seed.rng();
    let mut r = anneal(start, id, evaluator, cfg, &mut rng)?;
    r.seed = Some(seed);
    Ok(r)
}

/// Anneal with only the rows in `movable` allowed to change. Proposals that
/// would duplicate an existing row are rejected without evaluation but count
/// against the budget.
pub fn anneal_rows<T: Scalar, R: Rng + ?Sized>(
    start: &Design,
    movable: Range<usize>,
    id: CriterionId,
    evaluator: &Evaluator<T>,
    cfg: &SaConfig<T>,
    rng: &mut R,
) -> Result<OptResult<T>, AnnealError> {
    cfg.validate()?;
    start.validate(&evaluator.domain)?;
    assert!(movable.end <= start.n(), "movable rows out of range");
    let lh = start.lh_constrained();
    if lh && movable.len() < 2 {
        return Err(AnnealError::NotLh);
    }

    let mut current = start.clone();
    let mut f_cur = evaluator.evaluate_or_worst(id, &current);
    let mut best = current.clone();
    let mut f_best = f_cur;
    let mut history = Vec::new();

    let full_grid = !lh && (start.n() as u128) >= evaluator.domain.cell_count();
    let stage_length = cfg.stage_length();
    let quota = cfg.accepted_quota();
    let mlt = cfg.cooling_factor();
    let mut t = cfg.t_max;
    let (mut stage_evals, mut stage_acc, mut reductions) = (0usize, 0usize, 0usize);
    let (mut evaluations, mut accepted_total) = (0usize, 0usize);

    if !full_grid && !movable.is_empty() {
        for step in 0..cfg.n_max {
            let mv = if lh {
                lh_swap_in_place(&mut current, movable.clone(), rng)?
            } else {
                free_move_in_place(&mut current, &evaluator.domain, movable.clone(), step, rng)?
            };
            let f_new = if lh && mv.created_duplicate(&current) {
                T::infinity()
            } else {
                evaluator.evaluate_or_worst(id, &current)
            };
            evaluations += 1;
            stage_evals += 1;
            let u = T::of(1.0 - rng.gen::<f64>());
            if metropolis_accept(f_cur, f_new, t, u) {
                f_cur = f_new;
                stage_acc += 1;
                accepted_total += 1;
                if f_cur < f_best {
                    f_best = f_cur;
                    best.clone_from(&current);
                }
            } else {
                mv.undo(&mut current);
            }
            if stage_evals >= stage_length || stage_acc >= quota {
                history.push(StageLog {
                    stage: history.len(),
                    evaluations,
                    temperature: t,
                    accepted: stage_acc,
                    current_value: f_cur,
                    best_value: f_best,
                });
                if reductions < cfg.n_reductions {
                    t = t / mlt;
                    reductions += 1;
                }
                stage_evals = 0;
                stage_acc = 0;
            }
        }
    }
    if stage_evals > 0 || history.is_empty() {
        history.push(StageLog {
            stage: history.len(),
            evaluations,
            temperature: t,
            accepted: stage_acc,
            current_value: f_cur,
            best_value: f_best,
        });
    }
    Ok(OptResult {
        criterion: id,
        best,
        best_value: f_best,
        history,
        evaluations,
        accepted: accepted_total,
        seed: None,
        config: *cfg,
    })
}
