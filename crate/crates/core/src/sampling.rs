//! Random start designs: free, Latin hypercube and rounded mixed-level LH.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::{Design, DomainSpec};

/// Mixed-level designs retry this many times before giving up on a
/// duplicate-free rounding.
pub const MIXED_LH_RETRIES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("requested {requested} points but the grid has only {cells} cells")]
    TooManyPoints { requested: usize, cells: u128 },
    #[error("a square Latin hypercube needs equal level counts, got {0:?}")]
    UnequalLevels(Vec<usize>),
    #[error("no dimension with {0} levels can act as the master of a mixed design")]
    NoMaster(usize),
    #[error("could not draw a duplicate-free mixed design in {0} attempts")]
    Collisions(usize),
}

/// Generator behind every seeded draw in the crate.
pub type SeededRng = ChaCha8Rng;

/// Seed plus stream id; equal pairs reproduce equal random sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }
}

/// `n` distinct grid cells drawn uniformly without replacement.
pub fn random_free<R: Rng + ?Sized>(domain: &DomainSpec, n: usize, rng: &mut R) -> Result<Design, SamplingError> {
    let cells = domain.cell_count();
    if n as u128 > cells {
        return Err(SamplingError::TooManyPoints { requested: n, cells });
    }
    let k = domain.k();
    let mut data = vec![0usize; n * k];
    if cells <= 1 << 24 {
        let picked = rand::seq::index::sample(rng, cells as usize, n);
        for (row, cell) in picked.into_iter().enumerate() {
            domain.decode_cell(cell as u128, &mut data[row * k..(row + 1) * k]);
        }
    } else {
        let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(n);
        let mut row = 0;
        while row < n {
            let p: Vec<usize> = domain.levels().iter().map(|&m| rng.gen_range(0..m)).collect();
            if seen.insert(p.clone()) {
                data[row * k..(row + 1) * k].copy_from_slice(&p);
                row += 1;
            }
        }
    }
    Ok(Design::from_flat(n, k, data, false))
}

fn lh_columns<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    (0..k)
        .map(|_| {
            let mut col: Vec<usize> = (0..n).collect();
            col.shuffle(rng);
            col
        })
        .collect()
}

fn from_columns(cols: &[Vec<usize>], lh: bool) -> Design {
    let k = cols.len();
    let n = cols.first().map_or(0, Vec::len);
    let mut data = vec![0; n * k];
    for (dim, col) in cols.iter().enumerate() {
        for (row, &v) in col.iter().enumerate() {
            data[row * k + dim] = v;
        }
    }
    Design::from_flat(n, k, data, lh)
}

/// Latin hypercube on a square domain: every column a uniform permutation of `0..n`.
pub fn random_lh<R: Rng + ?Sized>(domain: &DomainSpec, rng: &mut R) -> Result<Design, SamplingError> {
    let n = domain.level_count(0);
    if domain.levels().iter().any(|&m| m != n) {
        return Err(SamplingError::UnequalLevels(domain.levels().to_vec()));
    }
    Ok(from_columns(&lh_columns(n, domain.k(), rng), true))
}

/// Index `i` of an `n`-level LH column rounded onto `m` levels.
pub fn round_level(i: usize, n: usize, m: usize) -> usize {
    if n == m {
        return i;
    }
    (i as f64 * (m - 1) as f64 / (n - 1) as f64).round() as usize
}

/// First dimension whose level count equals `n`.
pub fn master_for(domain: &DomainSpec, n: usize) -> Result<usize, SamplingError> {
    domain.levels().iter().position(|&m| m == n).ok_or(SamplingError::NoMaster(n))
}

/// LH with `n = levels[master]` points whose other columns are rounded onto
/// their own level counts. Roundings that collide are redrawn.
pub fn mixed_lh<R: Rng + ?Sized>(domain: &DomainSpec, master: usize, rng: &mut R) -> Result<Design, SamplingError> {
    if master >= domain.k() {
        return Err(SamplingError::NoMaster(0));
    }
    let n = domain.level_count(master);
    for _ in 0..MIXED_LH_RETRIES {
        let mut cols = lh_columns(n, domain.k(), rng);
        for (dim, col) in cols.iter_mut().enumerate() {
            let m = domain.level_count(dim);
            for v in col.iter_mut() {
                *v = round_level(*v, n, m);
            }
        }
        let d = from_columns(&cols, true);
        if !d.has_duplicates() {
            return Ok(d);
        }
    }
    Err(SamplingError::Collisions(MIXED_LH_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{project, redundant_count};

    #[test]
    fn free_full_grid_and_single() {
        let dom = DomainSpec::new(vec![3, 4]).unwrap();
        let mut rng = RngSeed::new(1, 0).rng();
        let full = random_free(&dom, 12, &mut rng).unwrap();
        assert_eq!(full.n(), 12);
        assert!(!full.has_duplicates());
        full.validate(&dom).unwrap();
        let one = random_free(&dom, 1, &mut rng).unwrap();
        one.validate(&dom).unwrap();
        assert!(matches!(random_free(&dom, 13, &mut rng), Err(SamplingError::TooManyPoints { .. })));
    }

    #[test]
    fn free_is_deterministic_per_seed() {
        let dom = DomainSpec::new(vec![10, 10]).unwrap();
        let a = random_free(&dom, 10, &mut RngSeed::new(7, 3).rng()).unwrap();
        let b = random_free(&dom, 10, &mut RngSeed::new(7, 3).rng()).unwrap();
        let c = random_free(&dom, 10, &mut RngSeed::new(7, 4).rng()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn free_on_huge_grid_uses_rejection() {
        let dom = DomainSpec::new(vec![42; 10]).unwrap();
        let d = random_free(&dom, 50, &mut RngSeed::new(1, 1).rng()).unwrap();
        assert!(!d.has_duplicates());
        d.validate(&dom).unwrap();
    }

    #[test]
    fn lh_basic_properties() {
        let dom = DomainSpec::uniform(2, 2).unwrap();
        let d = random_lh(&dom, &mut RngSeed::new(5, 0).rng()).unwrap();
        let diag = Design::new(vec![vec![0, 0], vec![1, 1]], true).unwrap();
        let anti = Design::new(vec![vec![0, 1], vec![1, 0]], true).unwrap();
        let mut sorted = d.clone();
        if sorted.get(0, 0) == 1 {
            sorted = Design::new(vec![d.row(1).to_vec(), d.row(0).to_vec()], true).unwrap();
        }
        assert!(sorted == diag || sorted == anti);

        let dom = DomainSpec::uniform(3, 9).unwrap();
        let d = random_lh(&dom, &mut RngSeed::new(5, 1).rng()).unwrap();
        assert!(d.lh_constrained());
        for dim in 0..3 {
            assert_eq!(d.column(dim).sum::<usize>(), 9 * 8 / 2);
            assert_eq!(redundant_count(&project(&d, &[dim]).unwrap()), 0);
        }
        assert!(random_lh(&DomainSpec::new(vec![3, 4]).unwrap(), &mut RngSeed::new(0, 0).rng()).is_err());
    }

    #[test]
    fn lh_is_uniform_over_permutation_pairs() {
        let dom = DomainSpec::uniform(2, 3).unwrap();
        let mut rng = RngSeed::new(11, 0).rng();
        let mut seen = std::collections::HashMap::new();
        for _ in 0..10_000 {
            let d = random_lh(&dom, &mut rng).unwrap();
            // canonical: second column reordered by first
            let mut key = [0usize; 3];
            for r in 0..3 {
                key[d.get(r, 0)] = d.get(r, 1);
            }
            *seen.entry(key).or_insert(0usize) += 1;
        }
        // 6 distinct designs as sets of points, each ~1/6
        assert_eq!(seen.len(), 6);
        assert!(seen.values().all(|&c| c > 1400 && c < 1950), "{seen:?}");
    }

    #[test]
    fn rounding_map_examples() {
        assert_eq!(round_level(0, 10, 7), 0);
        assert_eq!(round_level(9, 10, 7), 6);
        assert_eq!(round_level(5, 10, 7), 3);
        for i in 0..10 {
            assert_eq!(round_level(i, 10, 10), i);
        }
    }

    #[test]
    fn mixed_lh_properties() {
        let dom = DomainSpec::new(vec![10, 7]).unwrap();
        let master = master_for(&dom, 7).unwrap();
        assert_eq!(master, 1);
        let d = mixed_lh(&dom, master, &mut RngSeed::new(3, 0).rng()).unwrap();
        assert_eq!(d.n(), 7);
        d.validate(&dom).unwrap();
        assert!(!d.has_duplicates());
        let mut col: Vec<usize> = d.column(0).collect();
        col.sort();
        assert_eq!(col, vec![0, 2, 3, 5, 6, 8, 9]);
        assert!(master_for(&dom, 8).is_err());
    }

    #[test]
    fn mixed_lh_multiple_levels_occupancy() {
        // n = 12 master, m = 4: each rounded level holds at least ceil(12/4)-1 points
        let dom = DomainSpec::new(vec![12, 4]).unwrap();
        let d = mixed_lh(&dom, 0, &mut RngSeed::new(2, 0).rng()).unwrap();
        let mut counts = [0usize; 4];
        for v in d.column(1) {
            counts[v] += 1;
        }
        assert!(counts.iter().all(|&c| c >= 2), "{counts:?}");
        assert_eq!(counts.iter().sum::<usize>(), 12);
    }
}
