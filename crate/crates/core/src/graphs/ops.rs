use num_traits::{One, Zero};

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::matrix::{QMatrix, Rational};

/// Weights `(w₁, w₂)` of a merge: `w₁` scales the in-block copies of G₁, `w₂` the cross edges from G₂.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MergeWeights {
    pub w1: Rational,
    pub w2: Rational,
}

impl MergeWeights {
    pub fn new(w1: Rational, w2: Rational) -> Self {
        MergeWeights { w1, w2 }
    }

    pub fn unit() -> Self {
        MergeWeights::new(Rational::one(), Rational::one())
    }
}

fn require_unweighted(g: &WeightedGraph, op: &str) -> Result<()> {
    if g.is_unweighted() {
        Ok(())
    } else {
        Err(Error::domain(format!("{op} is defined for unweighted graphs only")))
    }
}

fn require_same_order(g1: &WeightedGraph, g2: &WeightedGraph, op: &str) -> Result<()> {
    if g1.n() == g2.n() {
        Ok(())
    } else {
        Err(Error::domain(format!("{op} needs graphs of equal order, got {} and {}", g1.n(), g2.n())))
    }
}

pub fn complement(g: &WeightedGraph) -> Result<WeightedGraph> {
    require_unweighted(g, "complement")?;
    let w = QMatrix::from_fn(g.n(), |i, j| {
        if i != j && g.weight(i, j).is_zero() {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    Ok(WeightedGraph { weights: w })
}

/// Block-diagonal union; vertices of `g2` follow those of `g1`.
pub fn disjoint_union(g1: &WeightedGraph, g2: &WeightedGraph) -> WeightedGraph {
    let n1 = g1.n();
    let n = n1 + g2.n();
    let w = QMatrix::from_fn(n, |i, j| match (i < n1, j < n1) {
        (true, true) => g1.weight(i, j).clone(),
        (false, false) => g2.weight(i - n1, j - n1).clone(),
        _ => Rational::zero(),
    });
    WeightedGraph { weights: w }
}

/// `G₁ ∨ G₂`: the union plus every edge between the two parts.
pub fn join(g1: &WeightedGraph, g2: &WeightedGraph) -> Result<WeightedGraph> {
    require_unweighted(g1, "join")?;
    require_unweighted(g2, "join")?;
    let n1 = g1.n();
    let mut u = disjoint_union(g1, g2);
    for i in 0..n1 {
        for j in n1..u.n() {
            u.weights.set(i, j, Rational::one());
            u.weights.set(j, i, Rational::one());
        }
    }
    Ok(u)
}

/// `G₁ □ G₂` on `V₁ × V₂`, vertex `(a, b)` at index `a·n₂ + b`.
pub fn cartesian_product(g1: &WeightedGraph, g2: &WeightedGraph) -> WeightedGraph {
    let n2 = g2.n();
    let n = g1.n() * n2;
    let w = QMatrix::from_fn(n, |i, j| {
        let (a1, b1) = (i / n2, i % n2);
        let (a2, b2) = (j / n2, j % n2);
        if b1 == b2 {
            g1.weight(a1, a2).clone()
        } else if a1 == a2 {
            g2.weight(b1, b2).clone()
        } else {
            Rational::zero()
        }
    });
    WeightedGraph { weights: w }
}

/// Adjacency `[[w₁A₁, w₂A₂], [w₂A₂, w₁A₁]]`, whose Laplacian is
/// `[[w₁L₁ + w₂D₂, −w₂A₂], [−w₂A₂, w₁L₁ + w₂D₂]]`.
pub fn merge(g1: &WeightedGraph, g2: &WeightedGraph, w: &MergeWeights) -> Result<WeightedGraph> {
    require_same_order(g1, g2, "merge")?;
    let a1 = g1.adjacency().scale(&w.w1);
    let a2 = g2.adjacency().scale(&w.w2);
    let weights = QMatrix::block2(&a1, &a2, &a2, &a1)?;
    Ok(WeightedGraph { weights })
}

/// Merge where G₂ additionally carries a loop of weight `loops[j]` at each vertex `j`.
///
/// A loop counts once towards the degree, so it turns into a cross edge `(j, n+j)` of weight
/// `w₂·loops[j]` and the result is again loopless. With `G₂` empty and all loops 1 this is
/// `(w₂K₂) □ (w₁G₁)`, the new coordinate being the most significant one.
pub fn merge_with_loops(
    g1: &WeightedGraph,
    g2: &WeightedGraph,
    loops: &[Rational],
    w: &MergeWeights,
) -> Result<WeightedGraph> {
    require_same_order(g1, g2, "merge")?;
    if loops.len() != g1.n() {
        return Err(Error::domain("one loop weight per vertex is required"));
    }
    let n = g1.n();
    let mut a2 = g2.adjacency().clone();
    for (j, l) in loops.iter().enumerate() {
        a2.set(j, j, l.clone());
    }
    let a1 = g1.adjacency().scale(&w.w1);
    let a2 = a2.scale(&w.w2);
    let weights = QMatrix::block2(&a1, &a2, &a2, &a1)?;
    debug_assert!((0..2 * n).all(|i| weights.get(i, i).is_zero()));
    Ok(WeightedGraph { weights })
}

/// `G₁ ⋉ G₂` with adjacency `[[A₁, A₂], [A₂, A₁]]`.
pub fn double_cover(g1: &WeightedGraph, g2: &WeightedGraph) -> Result<WeightedGraph> {
    require_same_order(g1, g2, "double cover")?;
    let weights = QMatrix::block2(g1.adjacency(), g2.adjacency(), g2.adjacency(), g1.adjacency())?;
    Ok(WeightedGraph { weights })
}

pub fn edge_sets_disjoint(g1: &WeightedGraph, g2: &WeightedGraph) -> bool {
    g1.n() == g2.n()
        && (0..g1.n()).all(|i| (i + 1..g1.n()).all(|j| g1.weight(i, j).is_zero() || g2.weight(i, j).is_zero()))
}

pub fn scale(g: &WeightedGraph, c: &Rational) -> Result<WeightedGraph> {
    if c.is_zero() {
        return Err(Error::domain("scale factor must be nonzero"));
    }
    Ok(WeightedGraph {
        weights: g.adjacency().scale(c),
    })
}

/// Graph whose Laplacian is `L₁ + L₂`.
pub fn add(g1: &WeightedGraph, g2: &WeightedGraph) -> Result<WeightedGraph> {
    require_same_order(g1, g2, "add")?;
    Ok(WeightedGraph {
        weights: g1.adjacency() + g2.adjacency(),
    })
}
