//! The eight design-quality functionals, all oriented so that smaller is better,
//! and the single-point landscape scan.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlation::{kendall_tau_a, pearson, spearman};
use crate::design::{
    center_scale, index_sq_distance, normalize_symmetric, normalize_unit, pairwise_sq_distances_scaled,
    Design, DesignError, DistanceScale, DomainSpec, RealMatrix,
};
use crate::linalg;
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriterionError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("duplicate points give infinite potential energy")]
    InfiniteEnergy,
    #[error("column {0} is constant, correlation undefined")]
    ConstantColumn(usize),
    #[error("degenerate design: XᵀX is singular")]
    Singular,
    #[error("regression basis has {columns} columns but the design only {points} points")]
    BasisTooWide { columns: usize, points: usize },
    #[error("tau must lie in (0, 1], got {0}")]
    InvalidTau(f64),
    #[error("landscape scans need a 2-D domain")]
    NotPlanar,
    #[error("unknown criterion `{0}`")]
    Unknown(String),
}

/// The eight criteria, in the order used for every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionId {
    Ae,
    Emm,
    Ml2,
    Dopt,
    Pmcc,
    Srcc,
    Krcc,
    Cn,
}

impl CriterionId {
    pub const ALL: [CriterionId; 8] = [
        CriterionId::Ae,
        CriterionId::Emm,
        CriterionId::Ml2,
        CriterionId::Dopt,
        CriterionId::Pmcc,
        CriterionId::Srcc,
        CriterionId::Krcc,
        CriterionId::Cn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CriterionId::Ae => "AE",
            CriterionId::Emm => "EMM",
            CriterionId::Ml2 => "ML2",
            CriterionId::Dopt => "Dopt",
            CriterionId::Pmcc => "PMCC",
            CriterionId::Srcc => "SRCC",
            CriterionId::Krcc => "KRCC",
            CriterionId::Cn => "CN",
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CriterionId {
    type Err = CriterionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CriterionId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CriterionError::Unknown(s.to_string()))
    }
}

/// Regression basis for D-optimality plus its Bayesian augmentation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoptConfig<T> {
    /// Degree of the full polynomial basis; `None` picks the largest basis
    /// with no more columns than points.
    pub base_degree: Option<usize>,
    /// Extra pure powers `x_i^(p+1) ..= x_i^(p+b)` appended for every coordinate.
    pub bayes_terms: usize,
    /// Constant added to the diagonal of the information matrix for appended columns.
    pub tau: T,
}

impl<T: Scalar> Default for DoptConfig<T> {
    fn default() -> Self {
        Self { base_degree: None, bayes_terms: 1, tau: T::one() }
    }
}

impl<T: Scalar> DoptConfig<T> {
    pub fn linear() -> Self {
        Self { base_degree: Some(1), bayes_terms: 0, tau: T::one() }
    }

    pub fn validate(&self) -> Result<(), CriterionError> {
        if !(self.tau > T::zero() && self.tau <= T::one()) {
            return Err(CriterionError::InvalidTau(self.tau.to_f64_lossy()));
        }
        Ok(())
    }
}

/// Preprocessing of design columns before the condition number.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CnScaling {
    /// Grid range mapped onto [-1, 1]; centred on the domain.
    #[default]
    DomainRange,
    /// Column mean removed, then divided by the largest absolute deviation.
    ColumnMean,
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Columns of the full polynomial basis of `degree` in `k` variables.
pub fn basis_size(k: usize, degree: usize) -> usize {
    binomial(k + degree, degree)
}

/// Largest degree whose full basis fits in `n` rows.
pub fn auto_degree(k: usize, n: usize) -> usize {
    let mut p = 0;
    while basis_size(k, p + 1) <= n {
        p += 1;
    }
    p
}

/// Exponent vectors of the basis, ordered by total degree; within a degree
/// pure powers come first, then mixed terms.
pub fn basis_exponents(k: usize, degree: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; k]];
    for d in 1..=degree as u32 {
        for i in 0..k {
            let mut e = vec![0; k];
            e[i] = d;
            out.push(e);
        }
        if d >= 2 {
            let mut mixed = Vec::new();
            compositions(k, d, &mut vec![0; k], 0, &mut mixed);
            mixed.retain(|e: &Vec<u32>| e.iter().filter(|&&v| v > 0).count() > 1);
            out.extend(mixed);
        }
    }
    out
}

fn compositions(k: usize, left: u32, cur: &mut Vec<u32>, pos: usize, out: &mut Vec<Vec<u32>>) {
    if pos == k - 1 {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for v in (0..=left).rev() {
        cur[pos] = v;
        compositions(k, left - v, cur, pos + 1, out);
    }
}

/// Evaluated regression terms and the indices of augmented columns.
#[derive(Debug, Clone)]
pub struct RegressionMatrix<T> {
    pub z: RealMatrix<T>,
    pub exponents: Vec<Vec<u32>>,
    pub augmented: Vec<usize>,
}

/// Regression matrix over coordinates mapped to [-1, 1].
pub fn build_regression_matrix<T: Scalar>(
    design: &Design,
    domain: &DomainSpec,
    cfg: &DoptConfig<T>,
) -> Result<RegressionMatrix<T>, CriterionError> {
    let k = design.k();
    let n = design.n();
    let degree = cfg.base_degree.unwrap_or_else(|| auto_degree(k, n));
    let base = basis_size(k, degree);
    if base > n {
        return Err(CriterionError::BasisTooWide { columns: base, points: n });
    }
    let mut exponents = basis_exponents(k, degree);
    let mut augmented = Vec::new();
    for extra in 1..=cfg.bayes_terms as u32 {
        for i in 0..k {
            let mut e = vec![0; k];
            e[i] = degree as u32 + extra;
            augmented.push(exponents.len());
            exponents.push(e);
        }
    }
    let x = normalize_symmetric::<T>(design, domain)?;
    let cols = exponents.len();
    let mut data = Vec::with_capacity(n * cols);
    for r in 0..n {
        let row = x.row(r);
        for e in &exponents {
            let v = row.iter().zip(e).fold(T::one(), |acc, (&xv, &p)| {
                if p == 0 {
                    acc
                } else {
                    acc * xv.powi(p as i32)
                }
            });
            data.push(v);
        }
    }
    Ok(RegressionMatrix { z: RealMatrix { rows: n, cols, data }, exponents, augmented })
}

fn require_points(design: &Design, needed: usize) -> Result<(), CriterionError> {
    if design.n() < needed {
        return Err(DesignError::TooFewPoints { needed, got: design.n() }.into());
    }
    Ok(())
}

/// Audze-Eglais potential energy over level indices.
pub fn eval_ae<T: Scalar>(design: &Design) -> Result<T, CriterionError> {
    require_points(design, 2)?;
    let n = design.n();
    let mut e = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            let d2 = index_sq_distance(design.row(i), design.row(j));
            if d2 == 0 {
                return Err(CriterionError::InfiniteEnergy);
            }
            e = e + T::one() / T::from_u64(d2).unwrap();
        }
    }
    Ok(e)
}

pub fn eval_ae_scaled<T: Scalar>(
    design: &Design,
    domain: &DomainSpec,
    scale: DistanceScale,
) -> Result<T, CriterionError> {
    if scale == DistanceScale::Index {
        return eval_ae(design);
    }
    let d = pairwise_sq_distances_scaled::<T>(design, domain, scale)?;
    let mut e = T::zero();
    for v in d {
        if v == T::zero() {
            return Err(CriterionError::InfiniteEnergy);
        }
        e = e + T::one() / v;
    }
    Ok(e)
}

/// Negated minimum pairwise distance over level indices.
pub fn eval_emm<T: Scalar>(design: &Design) -> Result<T, CriterionError> {
    require_points(design, 2)?;
    let n = design.n();
    let mut best = u64::MAX;
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(index_sq_distance(design.row(i), design.row(j)));
        }
    }
    Ok(-T::from_u64(best).unwrap().sqrt())
}

pub fn eval_emm_scaled<T: Scalar>(
    design: &Design,
    domain: &DomainSpec,
    scale: DistanceScale,
) -> Result<T, CriterionError> {
    if scale == DistanceScale::Index {
        return eval_emm(design);
    }
    let d = pairwise_sq_distances_scaled::<T>(design, domain, scale)?;
    let m = d.into_iter().fold(T::infinity(), T::min);
    Ok(-m.sqrt())
}

/// Modified L2 discrepancy of the design normalised to the unit cube.
pub fn eval_ml2<T: Scalar>(design: &Design, domain: &DomainSpec) -> Result<T, CriterionError> {
    let x = normalize_unit::<T>(design, domain)?;
    let (n, k) = (x.rows, x.cols);
    if n == 0 {
        return Err(DesignError::TooFewPoints { needed: 1, got: 0 }.into());
    }
    let nn = T::of_usize(n);
    let three = T::of(3.0);
    let two = T::two();
    let first = (T::of(4.0) / three).powi(k as i32);
    let mut second = T::zero();
    for d in 0..n {
        second = second + x.row(d).iter().fold(T::one(), |acc, &v| acc * (three - v * v));
    }
    second = second * two.powi(1 - k as i32) / nn;
    let mut third = T::zero();
    for d in 0..n {
        let rd = x.row(d);
        // symmetric: diagonal once, off-diagonal twice
        third = third + rd.iter().fold(T::one(), |acc, &v| acc * (two - v));
        for j in d + 1..n {
            let p = rd.iter().zip(x.row(j)).fold(T::one(), |acc, (&a, &b)| acc * (two - a.max(b)));
            third = third + two * p;
        }
    }
    third = third / (nn * nn);
    Ok(first - second + third)
}

/// Negated determinant of the (Bayesian-augmented) information matrix.
pub fn eval_dopt<T: Scalar>(
    design: &Design,
    domain: &DomainSpec,
    cfg: &DoptConfig<T>,
) -> Result<T, CriterionError> {
    cfg.validate()?;
    let reg = build_regression_matrix(design, domain, cfg)?;
    let c = reg.z.cols;
    let mut info = linalg::gram(&reg.z.data, reg.z.rows, c);
    for &a in &reg.augmented {
        info[a * c + a] = info[a * c + a] + cfg.tau;
    }
    Ok(-linalg::determinant(&info, c))
}

/// Condition number of XᵀX with the default domain-range scaling.
pub fn eval_cn<T: Scalar>(design: &Design, domain: &DomainSpec) -> Result<T, CriterionError> {
    eval_cn_with(design, domain, CnScaling::DomainRange)
}

pub fn eval_cn_with<T: Scalar>(
    design: &Design,
    domain: &DomainSpec,
    scaling: CnScaling,
) -> Result<T, CriterionError> {
    require_points(design, 1)?;
    let x = match scaling {
        CnScaling::DomainRange => normalize_symmetric::<T>(design, domain)?,
        CnScaling::ColumnMean => center_scale::<T>(design, domain)?,
    };
    let k = x.cols;
    let g = linalg::gram(&x.data, x.rows, k);
    let eig = linalg::symmetric_eigenvalues(&g, k);
    let lo = eig[0];
    let hi = eig[k - 1];
    if !(lo > hi * T::epsilon() * T::of(64.0)) {
        return Err(CriterionError::Singular);
    }
    Ok(hi / lo)
}

fn columns<T: Scalar>(design: &Design) -> Vec<Vec<T>> {
    (0..design.k()).map(|d| design.column(d).map(T::of_usize).collect()).collect()
}

fn check_constant(design: &Design) -> Result<(), CriterionError> {
    for dim in 0..design.k() {
        let first = design.get(0, dim);
        if design.column(dim).all(|v| v == first) {
            return Err(CriterionError::ConstantColumn(dim));
        }
    }
    Ok(())
}

fn aggregate<T: Scalar>(
    design: &Design,
    coef: impl Fn(&[T], &[T]) -> Option<T>,
) -> Result<T, CriterionError> {
    require_points(design, 2)?;
    check_constant(design)?;
    let cols = columns::<T>(design);
    let k = cols.len();
    let mut s = T::zero();
    for i in 0..k {
        for j in i + 1..k {
            let c = coef(&cols[i], &cols[j]).ok_or(CriterionError::ConstantColumn(i))?;
            s = s + c * c;
        }
    }
    Ok(s.sqrt())
}

/// Root sum of squared Pearson correlations above the diagonal.
pub fn eval_pmcc<T: Scalar>(design: &Design) -> Result<T, CriterionError> {
    aggregate(design, pearson)
}

/// Root sum of squared Spearman correlations above the diagonal.
pub fn eval_srcc<T: Scalar>(design: &Design) -> Result<T, CriterionError> {
    aggregate(design, spearman)
}

/// Root sum of squared Kendall tau-a coefficients above the diagonal.
pub fn eval_krcc<T: Scalar>(design: &Design) -> Result<T, CriterionError> {
    aggregate(design, kendall_tau_a)
}

/// Everything a criterion may need besides the design itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluator<T> {
    pub domain: DomainSpec,
    pub dopt: DoptConfig<T>,
    #[serde(default)]
    pub distance_scale: DistanceScale,
    #[serde(default)]
    pub cn_scaling: CnScaling,
}

impl<T: Scalar> Evaluator<T> {
    pub fn new(domain: DomainSpec) -> Self {
        Self { domain, dopt: DoptConfig::default(), distance_scale: DistanceScale::Index, cn_scaling: CnScaling::default() }
    }

    pub fn with_dopt(mut self, dopt: DoptConfig<T>) -> Self {
        self.dopt = dopt;
        self
    }

    pub fn evaluate(&self, id: CriterionId, design: &Design) -> Result<T, CriterionError> {
        design.validate(&self.domain)?;
        match id {
            CriterionId::Ae => eval_ae_scaled(design, &self.domain, self.distance_scale),
            CriterionId::Emm => eval_emm_scaled(design, &self.domain, self.distance_scale),
            CriterionId::Ml2 => eval_ml2(design, &self.domain),
            CriterionId::Dopt => eval_dopt(design, &self.domain, &self.dopt),
            CriterionId::Pmcc => eval_pmcc(design),
            CriterionId::Srcc => eval_srcc(design),
            CriterionId::Krcc => eval_krcc(design),
            CriterionId::Cn => eval_cn_with(design, &self.domain, self.cn_scaling),
        }
    }

    /// Errors collapse to `+∞`, the worst value, for use inside optimisers.
    pub fn evaluate_or_worst(&self, id: CriterionId, design: &Design) -> T {
        self.evaluate(id, design).unwrap_or_else(|_| T::infinity())
    }
}

/// Dispatch with index-scale distances and default CN scaling.
pub fn evaluate<T: Scalar>(
    id: CriterionId,
    design: &Design,
    domain: &DomainSpec,
    dopt_cfg: &DoptConfig<T>,
) -> Result<T, CriterionError> {
    Evaluator { domain: domain.clone(), dopt: *dopt_cfg, distance_scale: DistanceScale::Index, cn_scaling: CnScaling::default() }
        .evaluate(id, design)
}

/// Criterion values for one free point swept over a 2-D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeScan<T> {
    pub criterion: CriterionId,
    /// Cells along dimension 0 (columns).
    pub width: usize,
    /// Cells along dimension 1 (rows).
    pub height: usize,
    /// Row-major by dimension 1; non-evaluable cells hold `+∞`.
    pub values: Vec<T>,
    pub occupied: Vec<bool>,
}

impl<T: Scalar> LandscapeScan<T> {
    #[inline]
    pub fn value(&self, x: usize, y: usize) -> T {
        self.values[y * self.width + x]
    }

    pub fn is_occupied(&self, x: usize, y: usize) -> bool {
        self.occupied[y * self.width + x]
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    /// Cells within `rel_tol` of the minimum, as (x, y).
    pub fn argmin(&self, rel_tol: T) -> Vec<(usize, usize)> {
        let m = self.min_value();
        let tol = rel_tol * m.abs().max(T::one());
        (0..self.values.len())
            .filter(|&i| self.values[i] - m <= tol)
            .map(|i| (i % self.width, i / self.width))
            .collect()
    }

    /// CSV with one line per grid row (dimension 1), one field per column.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for y in 0..self.height {
            let line: Vec<String> = (0..self.width).map(|x| self.value(x, y).to_string()).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

/// Evaluate the criterion with the last point placed at every cell of a 2-D grid.
pub fn landscape_scan<T: Scalar>(
    id: CriterionId,
    fixed: &Design,
    evaluator: &Evaluator<T>,
) -> Result<LandscapeScan<T>, CriterionError> {
    let domain = &evaluator.domain;
    if domain.k() != 2 || (fixed.n() > 0 && fixed.k() != 2) {
        return Err(CriterionError::NotPlanar);
    }
    fixed.validate(domain).or_else(|e| if fixed.n() == 0 { Ok(()) } else { Err(e) })?;
    let (w, h) = (domain.level_count(0), domain.level_count(1));
    let cells: Vec<(usize, usize)> = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect();
    let results: Vec<(T, bool)> = cells
        .par_iter()
        .map(|&(x, y)| {
            let mut d = fixed.clone();
            let occupied = d.contains_row(&[x, y]);
            d.push_row(&[x, y]);
            (evaluator.evaluate_or_worst(id, &d), occupied)
        })
        .collect();
    let (values, occupied) = results.into_iter().unzip();
    Ok(LandscapeScan { criterion: id, width: w, height: h, values, occupied })
}
