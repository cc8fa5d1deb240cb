//! Rank-correlation sensitivity estimates and their error against a reference.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlation::spearman;
use crate::design::{ranks, Design, DesignError, DomainSpec, RealMatrix};
use crate::models::{Model, ModelError};
use crate::Scalar;

/// Largest grid `full_design_reference` enumerates by default.
pub const DEFAULT_FULL_GRID_LIMIT: u128 = 1 << 22;

const MC_CHUNK: usize = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensitivityError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("grid of {cells} cells exceeds the enumeration limit {limit}")]
    GridTooLarge { cells: u128, limit: u128 },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("model takes {model} inputs but the domain has {domain} dimensions")]
    Arity { model: usize, domain: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// Spearman coefficient of every input column against `response`.
///
/// A constant response or column has no defined rank correlation; it is
/// reported as 0 and logged.
pub fn param_response_srcc<T: Scalar>(inputs: &RealMatrix<T>, response: &[T]) -> Result<Vec<T>, SensitivityError> {
    if inputs.rows != response.len() {
        return Err(SensitivityError::LengthMismatch(inputs.rows, response.len()));
    }
    if inputs.rows < 3 {
        return Err(SensitivityError::TooFewSamples { needed: 3, got: inputs.rows });
    }
    Ok((0..inputs.cols)
        .map(|c| {
            spearman(&inputs.column(c), response).unwrap_or_else(|| {
                log::warn!("input {c} or the response is constant; correlation set to 0");
                T::zero()
            })
        })
        .collect())
}

/// Physical inputs and model responses at every design point; `responses[r][i]`
/// is response `r` at point `i`.
pub fn evaluate_design<T: Scalar, M: Model<T> + ?Sized>(
    design: &Design,
    domain: &DomainSpec,
    model: &M,
) -> Result<(RealMatrix<T>, Vec<Vec<T>>), SensitivityError> {
    design.validate(domain)?;
    if model.input_count() != domain.k() {
        return Err(SensitivityError::Arity { model: model.input_count(), domain: domain.k() });
    }
    let k = domain.k();
    let data: Vec<T> = design
        .rows()
        .flat_map(|r| r.iter().enumerate().map(|(d, &i)| T::of(domain.physical(d, i))))
        .collect();
    let outputs: Vec<Vec<T>> = (0..design.n())
        .into_par_iter()
        .map(|i| model.evaluate(&data[i * k..(i + 1) * k]))
        .collect::<Result<_, _>>()?;
    let nr = model.response_names().len();
    let responses = (0..nr).map(|r| outputs.iter().map(|o| o[r]).collect()).collect();
    Ok((RealMatrix { rows: design.n(), cols: k, data }, responses))
}

/// `[response][input]` Spearman estimates from the model evaluated on `design`.
pub fn design_srcc<T: Scalar, M: Model<T> + ?Sized>(
    design: &Design,
    domain: &DomainSpec,
    model: &M,
) -> Result<Vec<Vec<T>>, SensitivityError> {
    let (x, ys) = evaluate_design(design, domain, model)?;
    ys.iter().map(|y| param_response_srcc(&x, y)).collect()
}

/// Reference correlations from the exhaustive grid.
pub fn full_design_reference<T: Scalar, M: Model<T> + ?Sized>(
    domain: &DomainSpec,
    model: &M,
    limit: u128,
) -> Result<Vec<Vec<T>>, SensitivityError> {
    let cells = domain.cell_count();
    if cells > limit {
        return Err(SensitivityError::GridTooLarge { cells, limit });
    }
    let k = domain.k();
    let data: Vec<usize> = domain.enumerate_cells().flatten().collect();
    let full = Design::from_flat(cells as usize, k, data, false);
    design_srcc(&full, domain, model)
}

/// Reference correlations from `sample_count` level combinations drawn
/// uniformly with replacement.
///
/// Samples are generated in fixed-size chunks, each from its own stream of a
/// seed drawn from `rng`, and regenerated in a second pass, so memory holds only
/// the responses and the result does not depend on the thread count.
pub fn monte_carlo_reference<T: Scalar, M: Model<T> + ?Sized, R: Rng + ?Sized>(
    domain: &DomainSpec,
    model: &M,
    sample_count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<T>>, SensitivityError> {
    if sample_count < 1000 {
        return Err(SensitivityError::TooFewSamples { needed: 1000, got: sample_count });
    }
    let k = domain.k();
    if model.input_count() != k {
        return Err(SensitivityError::Arity { model: model.input_count(), domain: k });
    }
    let master: u64 = rng.gen();
    let chunks = sample_count.div_ceil(MC_CHUNK);
    let chunk_len = |c: usize| MC_CHUNK.min(sample_count - c * MC_CHUNK);
    let physical: Vec<Vec<T>> = (0..k)
        .map(|d| (0..domain.level_count(d)).map(|i| T::of(domain.physical(d, i))).collect())
        .collect();
    let draw = |c: usize| {
        let mut r = ChaCha8Rng::seed_from_u64(master);
        r.set_stream(c as u64);
        let levels: Vec<usize> = (0..chunk_len(c) * k).map(|j| r.gen_range(0..domain.level_count(j % k))).collect();
        levels
    };

    let nr = model.response_names().len();
    let per_chunk: Vec<(Vec<T>, Vec<Vec<u64>>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let levels = draw(c);
            let mut x = vec![T::zero(); k];
            let mut out = Vec::with_capacity(chunk_len(c) * nr);
            let mut counts: Vec<Vec<u64>> = (0..k).map(|d| vec![0; domain.level_count(d)]).collect();
            for row in levels.chunks_exact(k) {
                for (d, &l) in row.iter().enumerate() {
                    x[d] = physical[d][l];
                    counts[d][l] += 1;
                }
                out.extend(model.evaluate(&x)?);
            }
            Ok((out, counts))
        })
        .collect::<Result<_, ModelError>>()?;

    let mut counts: Vec<Vec<u64>> = (0..k).map(|d| vec![0; domain.level_count(d)]).collect();
    let mut responses: Vec<Vec<f64>> = vec![Vec::with_capacity(sample_count); nr];
    for (out, cnt) in &per_chunk {
        for (acc, c) in counts.iter_mut().zip(cnt) {
            for (a, b) in acc.iter_mut().zip(c) {
                *a += b;
            }
        }
        for o in out.chunks_exact(nr) {
            for (r, v) in o.iter().enumerate() {
                responses[r].push(v.to_f64_lossy());
            }
        }
    }
    drop(per_chunk);

    // mid-rank of each level, centred on the common mean rank (N + 1) / 2
    let n = sample_count as f64;
    let mean_rank = (n + 1.0) / 2.0;
    let level_rank: Vec<Vec<f64>> = counts
        .iter()
        .map(|c| {
            let mut below = 0u64;
            c.iter()
                .map(|&m| {
                    let r = below as f64 + (m as f64 + 1.0) / 2.0 - mean_rank;
                    below += m;
                    r
                })
                .collect()
        })
        .collect();
    let sxx: Vec<f64> = counts
        .iter()
        .zip(&level_rank)
        .map(|(c, r)| c.iter().zip(r).map(|(&m, &v)| m as f64 * v * v).sum())
        .collect();
    let resp_rank: Vec<Vec<f64>> = responses.iter().map(|y| ranks(y).into_iter().map(|v| v - mean_rank).collect()).collect();
    drop(responses);
    let szz: Vec<f64> = resp_rank.iter().map(|r| r.iter().map(|v| v * v).sum()).collect();

    let sxz_chunks: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let levels = draw(c);
            let base = c * MC_CHUNK;
            let mut acc = vec![0.0; nr * k];
            for (i, row) in levels.chunks_exact(k).enumerate() {
                for r in 0..nr {
                    let z = resp_rank[r][base + i];
                    for (d, &l) in row.iter().enumerate() {
                        acc[r * k + d] += level_rank[d][l] * z;
                    }
                }
            }
            acc
        })
        .collect();
    let mut sxz = vec![0.0; nr * k];
    for c in &sxz_chunks {
        for (a, b) in sxz.iter_mut().zip(c) {
            *a += b;
        }
    }

    Ok((0..nr)
        .map(|r| {
            (0..k)
                .map(|d| {
                    let den = (sxx[d] * szz[r]).sqrt();
                    if den == 0.0 {
                        log::warn!("input {d} or response {r} constant over the sample; correlation set to 0");
                        T::zero()
                    } else {
                        T::of((sxz[r * k + d] / den).clamp(-1.0, 1.0))
                    }
                })
                .collect()
        })
        .collect())
}

/// Mean absolute difference between estimated and reference correlations.
pub fn correlation_error<T: Scalar>(estimated: &[T], reference: &[T]) -> Result<T, SensitivityError> {
    if estimated.len() != reference.len() {
        return Err(SensitivityError::LengthMismatch(estimated.len(), reference.len()));
    }
    if estimated.is_empty() {
        return Ok(T::zero());
    }
    let s: T = estimated.iter().zip(reference).map(|(&a, &b)| (a - b).abs()).sum();
    Ok(s / T::of_usize(estimated.len()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport<T> {
    pub design_id: String,
    pub criterion: String,
    pub replicate: usize,
    pub model_id: String,
    pub n: usize,
    pub response_names: Vec<String>,
    /// `[response][input]`.
    pub estimated: Vec<Vec<T>>,
    pub reference: Vec<Vec<T>>,
    /// Error per response.
    pub errors: Vec<T>,
    pub mean_error: T,
}

impl<T: Scalar> SensitivityReport<T> {
    pub const CSV_HEADER: &'static str = "design,criterion,replicate,model,response,epsilon";

    pub fn csv_rows(&self) -> String {
        let mut s = String::new();
        for (name, e) in self.response_names.iter().zip(&self.errors) {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.design_id, self.criterion, self.replicate, self.model_id, name, e
            ));
        }
        s
    }
}

/// Estimate correlations on `design` and score them against `reference`.
pub fn analyze<T: Scalar, M: Model<T> + ?Sized>(
    design: &Design,
    domain: &DomainSpec,
    model: &M,
    reference: &[Vec<T>],
    design_id: &str,
    criterion: &str,
    replicate: usize,
) -> Result<SensitivityReport<T>, SensitivityError> {
    let estimated = design_srcc(design, domain, model)?;
    if estimated.len() != reference.len() {
        return Err(SensitivityError::LengthMismatch(estimated.len(), reference.len()));
    }
    let errors: Vec<T> =
        estimated.iter().zip(reference).map(|(e, r)| correlation_error(e, r)).collect::<Result<_, _>>()?;
    let mean_error = errors.iter().copied().sum::<T>() / T::of_usize(errors.len().max(1));
    Ok(SensitivityReport {
        design_id: design_id.to_string(),
        criterion: criterion.to_string(),
        replicate,
        model_id: model.id(),
        n: design.n(),
        response_names: model.response_names(),
        estimated,
        reference: reference.to_vec(),
        errors,
        mean_error,
    })
}
