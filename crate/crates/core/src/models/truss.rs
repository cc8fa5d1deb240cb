//! Pin-jointed linear-elastic trusses solved by the direct stiffness method.
//!
//! Units are lb, in and psi. Responses are the total weight, the largest
//! absolute nodal displacement component and the largest absolute axial stress.

use serde::{Deserialize, Serialize};

use super::{Model, ModelError};
use crate::design::{DesignError, DomainSpec};
use crate::linalg::{cholesky, cholesky_solve};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub node: usize,
    /// Restrained directions x, y, z.
    pub fixed: [bool; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalLoad<T> {
    pub node: usize,
    /// Force components in lb.
    pub force: [T; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrussModel<T> {
    pub name: String,
    /// 2 for plane trusses, 3 for space trusses.
    pub dim: usize,
    pub nodes: Vec<[T; 3]>,
    /// Zero-based node pairs.
    pub elements: Vec<[usize; 2]>,
    pub supports: Vec<Support>,
    pub loads: Vec<NodalLoad<T>>,
    pub youngs_modulus: T,
    pub specific_weight: T,
    /// Design variable driving each element's area.
    pub groups: Vec<usize>,
    /// Admissible areas per design variable (in²), ascending.
    pub levels: Vec<Vec<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrussResponse<T> {
    pub w: T,
    pub d: T,
    pub s: T,
}

/// Constrained stiffness system for one set of areas.
#[derive(Debug, Clone)]
pub struct StiffnessSystem<T> {
    /// Global DOF index of each unknown.
    pub free: Vec<usize>,
    /// Row-major `free.len()²` stiffness matrix.
    pub k: Vec<T>,
    pub f: Vec<T>,
}

impl<T: Scalar> TrussModel<T> {
    pub fn variable_count(&self) -> usize {
        self.levels.len()
    }

    pub fn dof_count(&self) -> usize {
        self.nodes.len() * self.dim
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::Invalid(m));
        if self.dim != 2 && self.dim != 3 {
            return bad(format!("dim must be 2 or 3, got {}", self.dim));
        }
        if self.groups.len() != self.elements.len() {
            return bad("group map must cover every element".into());
        }
        if self.groups.iter().any(|&g| g >= self.levels.len()) {
            return bad("group index out of range".into());
        }
        let nn = self.nodes.len();
        if self.elements.iter().any(|e| e[0] >= nn || e[1] >= nn || e[0] == e[1]) {
            return bad("element references an invalid node pair".into());
        }
        if self.supports.iter().any(|s| s.node >= nn) || self.loads.iter().any(|l| l.node >= nn) {
            return bad("support or load on a missing node".into());
        }
        if self.levels.iter().any(|l| l.is_empty() || l.iter().any(|&a| !(a > T::zero()))) {
            return bad("every variable needs positive area levels".into());
        }
        Ok(())
    }

    /// Domain whose physical values are the admissible areas.
    pub fn domain(&self) -> Result<DomainSpec, DesignError> {
        DomainSpec::with_values(self.levels.iter().map(|l| l.iter().map(|v| v.to_f64_lossy()).collect()).collect())
    }

    pub fn element_areas(&self, areas: &[T]) -> Result<Vec<T>, ModelError> {
        if areas.len() != self.levels.len() {
            return Err(ModelError::Arity { expected: self.levels.len(), got: areas.len() });
        }
        if let Some((index, &a)) = areas.iter().enumerate().find(|(_, &a)| !(a > T::zero())) {
            return Err(ModelError::NonPositive { index, value: a.to_f64_lossy() });
        }
        Ok(self.groups.iter().map(|&g| areas[g]).collect())
    }

    /// Length and unit direction of element `e`.
    pub fn geometry(&self, e: usize) -> (T, [T; 3]) {
        let [i, j] = self.elements[e];
        let mut d = [T::zero(); 3];
        for (c, dc) in d.iter_mut().enumerate().take(self.dim) {
            *dc = self.nodes[j][c] - self.nodes[i][c];
        }
        let len = d.iter().map(|&v| v * v).sum::<T>().sqrt();
        for v in &mut d {
            *v = *v / len;
        }
        (len, d)
    }

    pub fn weight(&self, areas: &[T]) -> Result<T, ModelError> {
        let a = self.element_areas(areas)?;
        Ok((0..self.elements.len()).map(|e| self.specific_weight * a[e] * self.geometry(e).0).sum())
    }

    fn restrained(&self) -> Vec<bool> {
        let mut r = vec![false; self.dof_count()];
        for s in &self.supports {
            for c in 0..self.dim {
                if s.fixed[c] {
                    r[s.node * self.dim + c] = true;
                }
            }
        }
        r
    }

    /// Assemble the stiffness matrix and load vector with restrained DOFs removed.
    pub fn assemble_stiffness(&self, areas: &[T]) -> Result<StiffnessSystem<T>, ModelError> {
        let a = self.element_areas(areas)?;
        let dim = self.dim;
        let restrained = self.restrained();
        let mut map = vec![usize::MAX; self.dof_count()];
        let mut free = Vec::new();
        for (g, &r) in restrained.iter().enumerate() {
            if !r {
                map[g] = free.len();
                free.push(g);
            }
        }
        let nf = free.len();
        let mut k = vec![T::zero(); nf * nf];
        for (e, &[i, j]) in self.elements.iter().enumerate() {
            let (len, c) = self.geometry(e);
            let ea_l = self.youngs_modulus * a[e] / len;
            let dofs: Vec<(usize, T)> = (0..dim)
                .map(|p| (i * dim + p, c[p]))
                .chain((0..dim).map(|p| (j * dim + p, -c[p])))
                .collect();
            for &(gr, cr) in &dofs {
                let r = map[gr];
                if r == usize::MAX {
                    continue;
                }
                for &(gc, cc) in &dofs {
                    let col = map[gc];
                    if col != usize::MAX {
                        k[r * nf + col] = k[r * nf + col] + ea_l * cr * cc;
                    }
                }
            }
        }
        let mut f = vec![T::zero(); nf];
        for l in &self.loads {
            for c in 0..dim {
                let m = map[l.node * dim + c];
                if m != usize::MAX {
                    f[m] = f[m] + l.force[c];
                }
            }
        }
        Ok(StiffnessSystem { free, k, f })
    }

    /// Full nodal displacement vector (restrained DOFs are zero).
    pub fn displacements(&self, areas: &[T]) -> Result<Vec<T>, ModelError> {
        let sys = self.assemble_stiffness(areas)?;
        let nf = sys.free.len();
        let l = cholesky(&sys.k, nf).ok_or(ModelError::Mechanism)?;
        let u = cholesky_solve(&l, nf, &sys.f);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Mechanism);
        }
        let mut full = vec![T::zero(); self.dof_count()];
        for (&g, &v) in sys.free.iter().zip(&u) {
            full[g] = v;
        }
        Ok(full)
    }

    /// Axial stress of every element, tension positive.
    pub fn element_stresses(&self, u: &[T]) -> Vec<T> {
        let dim = self.dim;
        (0..self.elements.len())
            .map(|e| {
                let [i, j] = self.elements[e];
                let (len, c) = self.geometry(e);
                let elong: T = (0..dim).map(|p| c[p] * (u[j * dim + p] - u[i * dim + p])).sum();
                self.youngs_modulus * elong / len
            })
            .collect()
    }

    pub fn solve(&self, areas: &[T]) -> Result<TrussResponse<T>, ModelError> {
        let u = self.displacements(areas)?;
        let d = u.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let s = self.element_stresses(&u).iter().fold(T::zero(), |m, v| m.max(v.abs()));
        Ok(TrussResponse { w: self.weight(areas)?, d, s })
    }
}

impl<T: Scalar> Model<T> for TrussModel<T> {
    fn id(&self) -> String {
        self.name.clone()
    }

    fn input_count(&self) -> usize {
        self.variable_count()
    }

    fn response_names(&self) -> Vec<String> {
        vec!["w".into(), "d".into(), "s".into()]
    }

    fn evaluate(&self, x: &[T]) -> Result<Vec<T>, ModelError> {
        let r = self.solve(x)?;
        Ok(vec![r.w, r.d, r.s])
    }
}

const KIP: f64 = 1000.0;

const TEN_BAR_AREAS: [f64; 42] = [
    1.62, 1.80, 1.99, 2.13, 2.38, 2.62, 2.63, 2.83, 2.88, 3.09, 3.13, 3.38, 3.47, 3.55, 3.63, 3.84, 3.87, 3.88, 4.18,
    4.22, 4.49, 4.59, 4.80, 4.97, 5.12, 5.74, 7.22, 7.97, 11.50, 13.50, 13.90, 14.20, 15.50, 16.00, 16.90, 18.80,
    19.90, 22.00, 22.90, 26.50, 30.00, 33.50,
];

fn node<T: Scalar>(x: f64, y: f64, z: f64) -> [T; 3] {
    [T::of(x), T::of(y), T::of(z)]
}

fn pinned(node: usize) -> Support {
    Support { node, fixed: [true; 3] }
}

/// Six-node, ten-bar plane cantilever with 360 in bays, pinned at the left wall
/// and loaded by 100 kips downward at both free lower nodes.
pub fn ten_bar<T: Scalar>() -> TrussModel<T> {
    let nodes = vec![
        node(720.0, 360.0, 0.0),
        node(720.0, 0.0, 0.0),
        node(360.0, 360.0, 0.0),
        node(360.0, 0.0, 0.0),
        node(0.0, 360.0, 0.0),
        node(0.0, 0.0, 0.0),
    ];
    let one_based = [[5, 3], [3, 1], [6, 4], [4, 2], [3, 4], [1, 2], [5, 4], [6, 3], [3, 2], [4, 1]];
    let elements = one_based.iter().map(|&[a, b]| [a - 1, b - 1]).collect();
    let p = -100.0 * KIP;
    TrussModel {
        name: "ten_bar".into(),
        dim: 2,
        nodes,
        elements,
        supports: vec![pinned(4), pinned(5)],
        loads: vec![
            NodalLoad { node: 1, force: node(0.0, p, 0.0) },
            NodalLoad { node: 3, force: node(0.0, p, 0.0) },
        ],
        youngs_modulus: T::of(1e7),
        specific_weight: T::of(0.1),
        groups: (0..10).collect(),
        levels: vec![TEN_BAR_AREAS.iter().map(|&a| T::of(a)).collect(); 10],
    }
}

/// Ten-node, 25-bar transmission tower with eight symmetric member groups.
pub fn twenty_five_bar<T: Scalar>() -> TrussModel<T> {
    let nodes = vec![
        node(-37.5, 0.0, 200.0),
        node(37.5, 0.0, 200.0),
        node(-37.5, 37.5, 100.0),
        node(37.5, 37.5, 100.0),
        node(37.5, -37.5, 100.0),
        node(-37.5, -37.5, 100.0),
        node(-100.0, 100.0, 0.0),
        node(100.0, 100.0, 0.0),
        node(100.0, -100.0, 0.0),
        node(-100.0, -100.0, 0.0),
    ];
    let grouped: [&[[usize; 2]]; 8] = [
        &[[1, 2]],
        &[[1, 4], [2, 3], [1, 5], [2, 6]],
        &[[2, 5], [2, 4], [1, 3], [1, 6]],
        &[[3, 6], [4, 5]],
        &[[3, 4], [5, 6]],
        &[[3, 10], [6, 7], [4, 9], [5, 8]],
        &[[3, 8], [4, 7], [6, 9], [5, 10]],
        &[[3, 7], [4, 8], [5, 9], [6, 10]],
    ];
    let mut elements = Vec::new();
    let mut groups = Vec::new();
    for (g, members) in grouped.iter().enumerate() {
        for &[a, b] in *members {
            elements.push([a - 1, b - 1]);
            groups.push(g);
        }
    }
    let areas: Vec<T> = (1..=26).map(|i| T::of(i as f64 / 10.0)).chain([2.8, 3.0, 3.2, 3.4].map(T::of)).collect();
    let load = |n: usize, fx: f64, fy: f64, fz: f64| NodalLoad { node: n - 1, force: node(fx * KIP, fy * KIP, fz * KIP) };
    TrussModel {
        name: "twenty_five_bar".into(),
        dim: 3,
        nodes,
        elements,
        supports: (6..10).map(pinned).collect(),
        loads: vec![load(1, 1.0, -10.0, -10.0), load(2, 0.0, -10.0, -10.0), load(3, 0.5, 0.0, 0.0), load(6, 0.6, 0.0, 0.0)],
        youngs_modulus: T::of(1e7),
        specific_weight: T::of(0.1),
        groups,
        levels: vec![areas; 8],
    }
}
