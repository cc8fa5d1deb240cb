//! Discrete domains, designs, and the coordinate utilities every criterion
//! shares: normalisations, ranks, distances and projections.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DesignError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("row {row}, dimension {dim}: level index {index} outside 0..{levels}")]
    LevelOutOfRange { row: usize, dim: usize, index: usize, levels: usize },
    #[error("dimension {dim} has {levels} levels, at least 2 are required")]
    TooFewLevels { dim: usize, levels: usize },
    #[error("dimension {dim}: {reason}")]
    InvalidValues { dim: usize, reason: String },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("projection must keep at least one dimension")]
    EmptyProjection,
    #[error("projection dimension {0} does not exist")]
    InvalidProjection(usize),
    #[error("column {0} is constant")]
    DegenerateColumn(usize),
    #[error("a domain needs at least one dimension")]
    EmptyDomain,
    #[error("failed to parse domain: {0}")]
    Parse(String),
}

/// Per-dimension level structure of the search grid.
///
/// `values`, when present, holds the physical value of every level; models
/// see these, criteria only see level indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub struct DomainSpec {
    levels: Vec<usize>,
    values: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct DomainRepr {
    levels: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<Vec<f64>>>,
}

impl TryFrom<DomainRepr> for DomainSpec {
    type Error = DesignError;
    fn try_from(r: DomainRepr) -> Result<Self, Self::Error> {
        match r.values {
            Some(v) => DomainSpec::with_values(v).and_then(|d| {
                if d.levels == r.levels {
                    Ok(d)
                } else {
                    Err(DesignError::InvalidValues {
                        dim: 0,
                        reason: "value list lengths disagree with level counts".into(),
                    })
                }
            }),
            None => DomainSpec::new(r.levels),
        }
    }
}

impl From<DomainSpec> for DomainRepr {
    fn from(d: DomainSpec) -> Self {
        DomainRepr { levels: d.levels, values: d.values }
    }
}

impl DomainSpec {
    pub fn new(levels: Vec<usize>) -> Result<Self, DesignError> {
        if levels.is_empty() {
            return Err(DesignError::EmptyDomain);
        }
        for (dim, &m) in levels.iter().enumerate() {
            if m < 2 {
                return Err(DesignError::TooFewLevels { dim, levels: m });
            }
        }
        Ok(Self { levels, values: None })
    }

    /// Domain whose level counts come from per-dimension physical value lists.
    pub fn with_values(values: Vec<Vec<f64>>) -> Result<Self, DesignError> {
        let levels: Vec<usize> = values.iter().map(Vec::len).collect();
        let mut d = Self::new(levels)?;
        for (dim, v) in values.iter().enumerate() {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(DesignError::InvalidValues { dim, reason: "non-finite value".into() });
            }
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(DesignError::InvalidValues {
                    dim,
                    reason: "values must be strictly increasing".into(),
                });
            }
        }
        d.values = Some(values);
        Ok(d)
    }

    /// Square domain: `k` dimensions with `m` levels each.
    pub fn uniform(k: usize, m: usize) -> Result<Self, DesignError> {
        Self::new(vec![m; k])
    }

    pub fn from_toml_str(s: &str) -> Result<Self, DesignError> {
        toml::from_str(s).map_err(|e| DesignError::Parse(e.to_string()))
    }

    pub fn from_json_str(s: &str) -> Result<Self, DesignError> {
        serde_json::from_str(s).map_err(|e| DesignError::Parse(e.to_string()))
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    #[inline]
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    #[inline]
    pub fn level_count(&self, dim: usize) -> usize {
        self.levels[dim]
    }

    pub fn values(&self) -> Option<&[Vec<f64>]> {
        self.values.as_deref()
    }

    /// Physical value of `index` in `dim`; the unit coordinate when the domain has no values.
    pub fn physical(&self, dim: usize, index: usize) -> f64 {
        match &self.values {
            Some(v) => v[dim][index],
            None => index as f64 / (self.levels[dim] - 1) as f64,
        }
    }

    /// Number of grid cells, saturating at `u128::MAX`.
    pub fn cell_count(&self) -> u128 {
        self.levels
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
            .unwrap_or(u128::MAX)
    }

    /// Mixed-radix decoding of a cell number into level indices (dimension 0 fastest).
    pub fn decode_cell(&self, mut cell: u128, out: &mut [usize]) {
        for (dim, &m) in self.levels.iter().enumerate() {
            out[dim] = (cell % m as u128) as usize;
            cell /= m as u128;
        }
    }

    /// Every grid cell in mixed-radix order.
    pub fn enumerate_cells(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let total = self.cell_count();
        (0..total).map(move |c| {
            let mut row = vec![0; self.k()];
            self.decode_cell(c, &mut row);
            row
        })
    }
}

/// An n×k matrix of level indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DesignRepr", into = "DesignRepr")]
pub struct Design {
    n: usize,
    k: usize,
    data: Vec<usize>,
    lh_constrained: bool,
}

#[derive(Serialize, Deserialize)]
struct DesignRepr {
    points: Vec<Vec<usize>>,
    #[serde(default)]
    lh_constrained: bool,
}

impl TryFrom<DesignRepr> for Design {
    type Error = DesignError;
    fn try_from(r: DesignRepr) -> Result<Self, Self::Error> {
        Design::new(r.points, r.lh_constrained)
    }
}

impl From<Design> for DesignRepr {
    fn from(d: Design) -> Self {
        DesignRepr { points: d.rows().map(<[usize]>::to_vec).collect(), lh_constrained: d.lh_constrained }
    }
}

impl Design {
    pub fn new(points: Vec<Vec<usize>>, lh_constrained: bool) -> Result<Self, DesignError> {
        let k = points.first().map_or(0, Vec::len);
        let n = points.len();
        let mut data = Vec::with_capacity(n * k);
        for p in &points {
            if p.len() != k {
                return Err(DesignError::DimensionMismatch { expected: k, got: p.len() });
            }
            data.extend_from_slice(p);
        }
        Ok(Self { n, k, data, lh_constrained })
    }

    pub fn from_flat(n: usize, k: usize, data: Vec<usize>, lh_constrained: bool) -> Self {
        assert_eq!(data.len(), n * k, "flat data length must be n*k");
        Self { n, k, data, lh_constrained }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn lh_constrained(&self) -> bool {
        self.lh_constrained
    }

    pub fn set_lh_constrained(&mut self, flag: bool) {
        self.lh_constrained = flag;
    }

    #[inline]
    pub fn get(&self, row: usize, dim: usize) -> usize {
        self.data[row * self.k + dim]
    }

    #[inline]
    pub fn set(&mut self, row: usize, dim: usize, value: usize) {
        self.data[row * self.k + dim] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[usize] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [usize] {
        &mut self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        // chunks_exact panics on zero, k is zero only for empty designs
        let k = self.k.max(1);
        self.data.chunks_exact(k).take(self.n)
    }

    pub fn column(&self, dim: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).map(move |i| self.get(i, dim))
    }

    pub fn flat(&self) -> &[usize] {
        &self.data
    }

    /// Append rows, keeping the constraint flag of `self`.
    pub fn append(&mut self, other: &Design) {
        assert!(self.n == 0 || other.k == self.k, "appended design has a different dimension");
        if self.n == 0 {
            self.k = other.k;
        }
        self.data.extend_from_slice(&other.data);
        self.n += other.n;
    }

    pub fn push_row(&mut self, row: &[usize]) {
        if self.n == 0 && self.k == 0 {
            self.k = row.len();
        }
        assert_eq!(row.len(), self.k);
        self.data.extend_from_slice(row);
        self.n += 1;
    }

    pub fn validate(&self, domain: &DomainSpec) -> Result<(), DesignError> {
        if self.k != domain.k() {
            return Err(DesignError::DimensionMismatch { expected: domain.k(), got: self.k });
        }
        for (row, p) in self.rows().enumerate() {
            for (dim, (&index, &levels)) in p.iter().zip(domain.levels()).enumerate() {
                if index >= levels {
                    return Err(DesignError::LevelOutOfRange { row, dim, index, levels });
                }
            }
        }
        Ok(())
    }

    pub fn has_duplicates(&self) -> bool {
        redundant_count(self) > 0
    }

    pub fn contains_row(&self, row: &[usize]) -> bool {
        self.rows().any(|r| r == row)
    }

    /// Every level of every dimension occupied equally often (`n / levels` times).
    ///
    /// This is the Latin hypercube property, generalised to the stacked
    /// designs produced by sequential LH extension.
    pub fn is_latin_hypercube(&self, domain: &DomainSpec) -> bool {
        if self.validate(domain).is_err() || self.n == 0 {
            return false;
        }
        domain.levels().iter().enumerate().all(|(dim, &m)| {
            if !self.n.is_multiple_of(m) {
                return false;
            }
            let per = self.n / m;
            let mut counts = vec![0usize; m];
            for v in self.column(dim) {
                counts[v] += 1;
            }
            counts.iter().all(|&c| c == per)
        })
    }
}

/// Row-major real matrix returned by the coordinate transforms.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> RealMatrix<T> {
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

/// How point-to-point distances are measured for AE and EMM.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceScale {
    /// Raw level indices, one unit per grid step in every dimension.
    #[default]
    Index,
    /// Coordinates normalised to [0, 1] per dimension.
    Unit,
}

fn check_dims(design: &Design, domain: &DomainSpec) -> Result<(), DesignError> {
    if design.k() != domain.k() {
        return Err(DesignError::DimensionMismatch { expected: domain.k(), got: design.k() });
    }
    Ok(())
}

/// Level index mapped to `index / (levels - 1)` per dimension.
pub fn normalize_unit<T: Scalar>(design: &Design, domain: &DomainSpec) -> Result<RealMatrix<T>, DesignError> {
    check_dims(design, domain)?;
    let scales: Vec<T> = domain.levels().iter().map(|&m| T::of_usize(m - 1)).collect();
    let data = design
        .rows()
        .flat_map(|r| r.iter().zip(&scales).map(|(&i, &s)| T::of_usize(i) / s))
        .collect();
    Ok(RealMatrix { rows: design.n(), cols: design.k(), data })
}

/// Level index mapped affinely from the grid range onto [-1, 1].
pub fn normalize_symmetric<T: Scalar>(design: &Design, domain: &DomainSpec) -> Result<RealMatrix<T>, DesignError> {
    let mut m = normalize_unit::<T>(design, domain)?;
    for v in &mut m.data {
        *v = T::two() * *v - T::one();
    }
    Ok(m)
}

/// Subtract each column's mean and divide by its largest absolute deviation.
pub fn center_scale<T: Scalar>(design: &Design, domain: &DomainSpec) -> Result<RealMatrix<T>, DesignError> {
    check_dims(design, domain)?;
    let (n, k) = (design.n(), design.k());
    let mut data = vec![T::zero(); n * k];
    for dim in 0..k {
        let col: Vec<T> = design.column(dim).map(T::of_usize).collect();
        let mean = col.iter().copied().sum::<T>() / T::of_usize(n.max(1));
        let dev: Vec<T> = col.iter().map(|&x| x - mean).collect();
        let scale = dev.iter().fold(T::zero(), |a, &d| a.max(d.abs()));
        if scale == T::zero() {
            return Err(DesignError::DegenerateColumn(dim));
        }
        for (r, d) in dev.into_iter().enumerate() {
            data[r * k + dim] = d / scale;
        }
    }
    Ok(RealMatrix { rows: n, cols: k, data })
}

/// Ranks starting at 1, ties resolved to the mean of the ranks they span.
pub fn ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![T::zero(); n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let mid = T::of_usize(start + 1 + end) / T::two();
        for &idx in &order[start..end] {
            out[idx] = mid;
        }
        start = end;
    }
    out
}

/// True when any value repeats.
pub fn has_ties<T: Scalar>(values: &[T]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    sorted.windows(2).any(|w| w[0] == w[1])
}

#[inline]
pub(crate) fn index_sq_distance(a: &[usize], b: &[usize]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum()
}

/// Squared Euclidean distances over level indices, pairs (i<j) in lexicographic order.
pub fn pairwise_sq_distances<T: Scalar>(design: &Design) -> Result<Vec<T>, DesignError> {
    if design.n() < 2 {
        return Err(DesignError::TooFewPoints { needed: 2, got: design.n() });
    }
    let n = design.n();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(T::from_u64(index_sq_distance(design.row(i), design.row(j))).unwrap());
        }
    }
    Ok(out)
}

/// Squared distances under the chosen scale; `Unit` needs the domain.
pub fn pairwise_sq_distances_scaled<T: Scalar>(
    design: &Design,
    domain: &DomainSpec,
    scale: DistanceScale,
) -> Result<Vec<T>, DesignError> {
    match scale {
        DistanceScale::Index => pairwise_sq_distances(design),
        DistanceScale::Unit => {
            if design.n() < 2 {
                return Err(DesignError::TooFewPoints { needed: 2, got: design.n() });
            }
            let x = normalize_unit::<T>(design, domain)?;
            let n = design.n();
            let mut out = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    let d = x.row(i).iter().zip(x.row(j)).map(|(&a, &b)| (a - b) * (a - b)).sum();
                    out.push(d);
                }
            }
            Ok(out)
        }
    }
}

/// Restrict to the columns in `keep_dims`; duplicates may appear.
pub fn project(design: &Design, keep_dims: &[usize]) -> Result<Design, DesignError> {
    if keep_dims.is_empty() {
        return Err(DesignError::EmptyProjection);
    }
    if let Some(&bad) = keep_dims.iter().find(|&&d| d >= design.k()) {
        return Err(DesignError::InvalidProjection(bad));
    }
    let data = design
        .rows()
        .flat_map(|r| keep_dims.iter().map(move |&d| r[d]))
        .collect();
    Ok(Design::from_flat(design.n(), keep_dims.len(), data, design.lh_constrained()))
}

/// Points minus distinct points.
pub fn redundant_count(design: &Design) -> usize {
    let distinct: HashSet<&[usize]> = design.rows().collect();
    design.n() - distinct.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(points: &[&[usize]]) -> Design {
        Design::new(points.iter().map(|p| p.to_vec()).collect(), false).unwrap()
    }

    #[test]
    fn normalize_unit_endpoints_and_midpoint() {
        let dom = DomainSpec::new(vec![10, 7]).unwrap();
        let x = normalize_unit::<f64>(&d(&[&[0, 3], &[9, 0]]), &dom).unwrap();
        assert_eq!(x.get(0, 0), 0.0);
        assert_eq!(x.get(1, 0), 1.0);
        assert_eq!(x.get(0, 1), 0.5);
    }

    #[test]
    fn normalize_unit_rejects_dimension_mismatch() {
        let dom = DomainSpec::new(vec![10, 7, 3]).unwrap();
        assert!(matches!(
            normalize_unit::<f64>(&d(&[&[0, 3]]), &dom),
            Err(DesignError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn center_scale_examples() {
        let dom = DomainSpec::new(vec![4]).unwrap();
        let c = center_scale::<f64>(&d(&[&[0], &[1], &[0], &[1]]), &dom).unwrap();
        assert_eq!(c.column(0), vec![-1.0, 1.0, -1.0, 1.0]);
        let c = center_scale::<f64>(&d(&[&[0], &[1], &[2]]), &dom).unwrap();
        assert_eq!(c.column(0), vec![-1.0, 0.0, 1.0]);
        let c = center_scale::<f64>(&d(&[&[0], &[0], &[3]]), &dom).unwrap();
        assert_eq!(c.column(0), vec![-0.5, -0.5, 1.0]);
        assert_eq!(
            center_scale::<f64>(&d(&[&[2], &[2]]), &dom),
            Err(DesignError::DegenerateColumn(0))
        );
    }

    #[test]
    fn ranks_examples() {
        assert_eq!(ranks(&[5.0, 1.0, 3.0]), vec![3.0, 1.0, 2.0]);
        assert_eq!(ranks(&[10.0, 20.0, 20.0, 30.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(ranks(&[7.0, 7.0, 7.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn distances_examples() {
        assert_eq!(pairwise_sq_distances::<f64>(&d(&[&[0, 0], &[1, 0]])).unwrap(), vec![1.0]);
        assert_eq!(pairwise_sq_distances::<f64>(&d(&[&[0, 0], &[3, 4]])).unwrap(), vec![25.0]);
        let sq = d(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(pairwise_sq_distances::<f64>(&sq).unwrap(), vec![1.0, 1.0, 2.0, 2.0, 1.0, 1.0]);
        assert!(pairwise_sq_distances::<f64>(&d(&[&[0, 0]])).is_err());
    }

    #[test]
    fn unit_scale_distances() {
        let dom = DomainSpec::new(vec![11, 3]).unwrap();
        let v = pairwise_sq_distances_scaled::<f64>(&d(&[&[0, 0], &[10, 2]]), &dom, DistanceScale::Unit).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn project_examples() {
        assert_eq!(project(&d(&[&[0, 0], &[0, 1]]), &[0]).unwrap(), d(&[&[0], &[0]]));
        let x = d(&[&[1, 2], &[3, 2]]);
        assert_eq!(project(&x, &[0, 1]).unwrap(), x);
        assert_eq!(project(&x, &[1]).unwrap(), d(&[&[2], &[2]]));
        assert_eq!(project(&x, &[]), Err(DesignError::EmptyProjection));
        assert_eq!(project(&x, &[2]), Err(DesignError::InvalidProjection(2)));
    }

    #[test]
    fn redundant_examples() {
        assert_eq!(redundant_count(&d(&[&[0], &[0], &[1]])), 1);
        assert_eq!(redundant_count(&d(&[&[2], &[2], &[2]])), 2);
        let lh = d(&[&[0, 2], &[1, 0], &[2, 1]]);
        assert_eq!(redundant_count(&project(&lh, &[0]).unwrap()), 0);
        assert_eq!(redundant_count(&project(&lh, &[1]).unwrap()), 0);
    }

    #[test]
    fn domain_invariants() {
        assert!(DomainSpec::new(vec![1, 3]).is_err());
        assert!(DomainSpec::with_values(vec![vec![1.0, 1.0]]).is_err());
        let dom = DomainSpec::from_toml_str("levels = [3, 2]\nvalues = [[0.1, 0.2, 0.5], [1.0, 2.0]]").unwrap();
        assert_eq!(dom.levels(), &[3, 2]);
        assert_eq!(dom.physical(0, 2), 0.5);
        assert!(DomainSpec::from_toml_str("levels = [3, 3]\nvalues = [[0.1, 0.2, 0.5], [1.0, 2.0]]").is_err());
        let dom = DomainSpec::from_json_str(r#"{"levels":[4,5]}"#).unwrap();
        assert_eq!(dom.cell_count(), 20);
        assert_eq!(dom.physical(1, 2), 0.5);
    }

    #[test]
    fn design_json_roundtrip() {
        let x = Design::new(vec![vec![0, 1], vec![1, 0]], true).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"points":[[0,1],[1,0]],"lh_constrained":true}"#);
        assert_eq!(serde_json::from_str::<Design>(&s).unwrap(), x);
    }

    proptest! {
        #[test]
        fn ranks_are_permutation_equivariant(
            v in proptest::collection::vec(0u8..6, 1..30),
            seed in any::<u64>()
        ) {
            use rand::{seq::SliceRandom, SeedableRng};
            let vals: Vec<f64> = v.iter().map(|&x| x as f64).collect();
            let mut perm: Vec<usize> = (0..vals.len()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let permuted: Vec<f64> = perm.iter().map(|&i| vals[i]).collect();
            let r = ranks(&vals);
            let rp = ranks(&permuted);
            for (j, &i) in perm.iter().enumerate() {
                prop_assert_eq!(rp[j], r[i]);
            }
            let n = vals.len() as f64;
            prop_assert!((r.iter().sum::<f64>() - n * (n + 1.0) / 2.0).abs() < 1e-9);
        }

        #[test]
        fn center_scale_columns_sum_to_zero(col in proptest::collection::vec(0usize..9, 2..40)) {
            prop_assume!(col.iter().any(|&c| c != col[0]));
            let dom = DomainSpec::new(vec![9]).unwrap();
            let x = Design::from_flat(col.len(), 1, col, false);
            let c = center_scale::<f64>(&x, &dom).unwrap();
            let s: f64 = c.data.iter().sum();
            let m = c.data.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            prop_assert!(s.abs() < 1e-12);
            prop_assert!((m - 1.0).abs() < 1e-12);
        }

        #[test]
        fn normalize_unit_is_monotone(a in 0usize..13, b in 0usize..13) {
            let dom = DomainSpec::new(vec![13]).unwrap();
            let x = normalize_unit::<f64>(&Design::from_flat(2, 1, vec![a, b], false), &dom).unwrap();
            prop_assert_eq!(a.cmp(&b), x.get(0, 0).partial_cmp(&x.get(1, 0)).unwrap());
        }

        #[test]
        fn full_projection_of_distinct_rows_has_no_redundancy(
            rows in proptest::collection::hash_set((0usize..5, 0usize..5, 0usize..5), 1..40)
        ) {
            let pts: Vec<Vec<usize>> = rows.into_iter().map(|(a, b, c)| vec![a, b, c]).collect();
            let x = Design::new(pts, false).unwrap();
            prop_assert_eq!(redundant_count(&project(&x, &[0, 1, 2]).unwrap()), 0);
        }
    }
}
