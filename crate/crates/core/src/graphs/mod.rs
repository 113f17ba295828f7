//! Exact weighted graphs and the composition operators used to build state-transfer graphs.
//!
//! A [`WeightedGraph`] stores a symmetric rational weight matrix with zero diagonal; a zero
//! entry means "no edge". Vertices are 0-based here and 1-based in every file format.

mod format;
mod ops;

use std::collections::VecDeque;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{QMatrix, Rational};

pub use format::{EdgeJson, GraphJson, WeightText};
pub use ops::{
    add, cartesian_product, complement, disjoint_union, double_cover, edge_sets_disjoint, join,
    merge, merge_with_loops, scale, MergeWeights,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    weights: QMatrix,
}

/// Weighted vertex degrees, collapsed to one value when they all agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeProfile {
    Regular(Rational),
    Irregular(Vec<Rational>),
}

impl DegreeProfile {
    pub fn is_regular(&self) -> bool {
        matches!(self, DegreeProfile::Regular(_))
    }

    pub fn degree(&self) -> Option<&Rational> {
        match self {
            DegreeProfile::Regular(d) => Some(d),
            DegreeProfile::Irregular(_) => None,
        }
    }
}

impl WeightedGraph {
    pub fn empty(n: usize) -> Self {
        WeightedGraph {
            weights: QMatrix::zeros(n),
        }
    }

    pub fn complete(n: usize) -> Self {
        WeightedGraph {
            weights: QMatrix::from_fn(n, |i, j| if i == j { Rational::zero() } else { Rational::one() }),
        }
    }

    /// Path `0 – 1 – … – (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_unit_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Cycle `0 – 1 – … – (n-1) – 0`; needs `n ≥ 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("a cycle needs at least 3 vertices"));
        }
        Ok(Self::from_unit_edges(n, (0..n).map(|i| (i, (i + 1) % n))))
    }

    /// Edges `(2i, 2i+1)`; `n` must be even.
    pub fn perfect_matching(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::domain("a perfect matching needs an even vertex count"));
        }
        Ok(Self::from_unit_edges(n, (0..n / 2).map(|i| (2 * i, 2 * i + 1))))
    }

    fn from_unit_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut w = QMatrix::zeros(n);
        for (i, j) in edges {
            w.set(i, j, Rational::one());
            w.set(j, i, Rational::one());
        }
        WeightedGraph { weights: w }
    }

    /// Builds a graph from 0-based weighted edges. Loops, out-of-range endpoints, and
    /// repeated edges are rejected; zero weights are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, Rational)>) -> Result<Self> {
        let mut w = QMatrix::zeros(n);
        let mut seen = std::collections::HashSet::new();
        for (i, j, wt) in edges {
            if i >= n || j >= n {
                return Err(Error::domain(format!("edge ({i}, {j}) out of range for {n} vertices")));
            }
            if i == j {
                return Err(Error::domain(format!("loop at vertex {i}")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::domain(format!("repeated edge ({i}, {j})")));
            }
            w.set(i, j, wt.clone());
            w.set(j, i, wt);
        }
        Ok(WeightedGraph { weights: w })
    }

    pub fn from_adjacency(a: &QMatrix) -> Result<Self> {
        if !a.is_symmetric() {
            return Err(Error::domain("adjacency matrix is not symmetric"));
        }
        if a.diagonal().iter().any(|x| !x.is_zero()) {
            return Err(Error::domain("adjacency matrix has a nonzero diagonal"));
        }
        Ok(WeightedGraph { weights: a.clone() })
    }

    /// Recovers the graph from `L = D - A`; `L` must be symmetric with zero row sums.
    pub fn from_laplacian(l: &QMatrix) -> Result<Self> {
        if !l.is_symmetric() {
            return Err(Error::domain("Laplacian is not symmetric"));
        }
        if l.row_sums().iter().any(|s| !s.is_zero()) {
            return Err(Error::domain("Laplacian row sums are not all zero"));
        }
        let n = l.n();
        let weights = QMatrix::from_fn(n, |i, j| if i == j { Rational::zero() } else { -l.get(i, j) });
        Ok(WeightedGraph { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        self.weights.get(i, j)
    }

    pub fn adjacency(&self) -> &QMatrix {
        &self.weights
    }

    pub fn degrees(&self) -> Vec<Rational> {
        self.weights.row_sums()
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> QMatrix {
        let deg = self.degrees();
        let n = self.n();
        QMatrix::from_fn(n, |i, j| if i == j { deg[i].clone() } else { -self.weights.get(i, j) })
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let deg = self.degrees();
        match deg.first() {
            Some(d0) if deg.iter().all(|d| d == d0) => DegreeProfile::Regular(d0.clone()),
            None => DegreeProfile::Regular(Rational::zero()),
            _ => DegreeProfile::Irregular(deg),
        }
    }

    /// Edges `(i, j, w)` with `i < j` in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, Rational)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = self.weights.get(i, j);
                if !w.is_zero() {
                    out.push((i, j, w.clone()));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.weights.row(i).iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(j, _)| j)
    }

    /// Every weight is 0 or 1.
    pub fn is_unweighted(&self) -> bool {
        self.edges().iter().all(|(_, _, w)| w.is_one())
    }

    pub fn is_integer_weighted(&self) -> bool {
        self.weights.is_integral()
    }

    fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if comp[u] == usize::MAX {
                        comp[u] = next;
                        queue.push_back(u);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Breadth-first 2-colouring over nonzero-weight edges.
    pub fn is_bipartite(&self) -> bool {
        let n = self.n();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let cv = colour[v].unwrap_or(false);
                for u in self.neighbors(v) {
                    match colour[u] {
                        None => {
                            colour[u] = Some(!cv);
                            queue.push_back(u);
                        }
                        Some(cu) if cu == cv => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }
}
