//! Constructions that produce new Hadamard-diagonalizable graphs with PST at π/2.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cubelike::ConnectionSet;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graphs::{cartesian_product, complement, disjoint_union, join, merge, MergeWeights, WeightedGraph};
use crate::hadamard::{catalog, sylvester};
use crate::matrix::{rational, Rational};
use crate::pst::{merge_pst, pst_pairs, PstReport, Verdict};
use crate::spectral::{certify, SpectralCertificate};

/// Largest hypercube dimension and family dimension accepted.
pub const MAX_FAMILY_DIMENSION: u32 = 7;

/// A graph with its certificate and the transfer report for it.
#[derive(Clone, Debug)]
pub struct Construction {
    pub graph: WeightedGraph,
    pub certificate: SpectralCertificate,
    pub report: PstReport,
}

fn require_pst(cert: &SpectralCertificate) -> Result<PstReport> {
    if cert.n() < 4 {
        return Err(Error::Hypothesis(format!("order {} < 4", cert.n())));
    }
    if !cert.graph().is_unweighted() {
        return Err(Error::domain("complement and join need an unweighted graph"));
    }
    let report = pst_pairs(cert)?;
    if report.verdict != Verdict::Pst {
        return Err(Error::Hypothesis("the graph has no PST at π/2".into()));
    }
    Ok(report)
}

/// `G^c` under the same Hadamard matrix, with the same PST pairs.
pub fn pst_complement(cert: &SpectralCertificate) -> Result<Construction> {
    let original = require_pst(cert)?;
    let graph = complement(&cert.graph())?;
    let certificate = certify(&graph, cert.hadamard())?;
    if certificate.hadamard() != cert.hadamard() {
        return Err(Error::Internal("complement certificate changed the column order".into()));
    }
    let n = rational(cert.n() as i64);
    let related = cert
        .eigenvalues()
        .iter()
        .zip(certificate.eigenvalues())
        .skip(1)
        .all(|(l, lc)| *lc == &n - l);
    if !related || !certificate.eigenvalues()[0].is_zero() {
        return Err(Error::Internal("complement spectrum is not n − λ".into()));
    }
    let report = pst_pairs(&certificate)?;
    if report.pairs != original.pairs {
        return Err(Error::Internal("complement changed the PST pairs".into()));
    }
    Ok(Construction { graph, certificate, report })
}

/// `G ∨ G` on `2n` vertices, diagonalized by `[[H, H], [H, −H]]`; the pairs of `G` persist.
pub fn pst_self_join(cert: &SpectralCertificate) -> Result<Construction> {
    let original = require_pst(cert)?;
    let g = cert.graph();
    let graph = join(&g, &g)?;
    let certificate = certify(&graph, &cert.hadamard().doubled())?;
    let report = pst_pairs(&certificate)?;
    if !original.pairs.iter().all(|p| report.pairs.contains(p)) {
        return Err(Error::Internal("self-join lost a PST pair".into()));
    }
    Ok(Construction { graph, certificate, report })
}

/// `(w₁K₂) □ ⋯ □ (w_nK₂)` with coordinate `i` on bit `n − i` of the vertex index.
#[derive(Clone, Debug)]
pub struct WeightedHypercube {
    pub construction: Construction,
    /// XOR mask taking each vertex to its PST partner; zero when every weight is even.
    pub partner_mask: usize,
}

impl WeightedHypercube {
    /// Number of coordinates flipped between partners.
    pub fn distance(&self) -> u32 {
        self.partner_mask.count_ones()
    }
}

pub fn weighted_hypercube(weights: &[BigInt]) -> Result<WeightedHypercube> {
    if weights.is_empty() {
        return Err(Error::domain("at least one weight is required"));
    }
    if weights.len() > MAX_FAMILY_DIMENSION as usize {
        return Err(Error::Capacity(format!("{} coordinates", weights.len())));
    }
    if weights.iter().any(Zero::is_zero) {
        return Err(Error::domain("hypercube weights must be nonzero"));
    }
    let n = weights.len();
    let factor = |w: &BigInt| {
        WeightedGraph::from_edges(2, [(0, 1, Rational::from_integer(w.clone()))]).expect("single edge")
    };
    let mut graph = factor(&weights[0]);
    for w in &weights[1..] {
        graph = cartesian_product(&graph, &factor(w));
    }
    let partner_mask = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| w.bit(0))
        .fold(0usize, |m, (i, _)| m | 1 << (n - 1 - i));
    let certificate = certify(&graph, &sylvester(n as u32)?)?;
    let report = pst_pairs(&certificate)?;
    let expected: Vec<(usize, usize)> =
        (0..1usize << n).filter(|&u| u < u ^ partner_mask).map(|u| (u, u ^ partner_mask)).collect();
    let consistent = match report.verdict {
        Verdict::Pst => partner_mask != 0 && report.pairs == expected,
        Verdict::Periodic => partner_mask == 0,
        _ => false,
    };
    if !consistent {
        return Err(Error::Internal(format!("hypercube report {} disagrees with mask {partner_mask:b}", report.verdict)));
    }
    Ok(WeightedHypercube { construction: Construction { graph, certificate, report }, partner_mask })
}

/// How a member of the regular family was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recipe {
    /// One of the three hand-checked graphs on 8 vertices.
    Base,
    /// Complement of a perfect matching, degree `2^k − 2`.
    MatchingComplement,
    /// `K₂ □ G(k−1, deg−1)`.
    Product,
    /// `G_r ⊙ G(k−1, deg − 2^r + 1)` with `G_r` a union of `K_{2^r}`.
    Merge { r: u32 },
    /// `G ∨ G` with `G` of degree `deg − 2^{k−1}` on `2^{k−1}` vertices.
    Join,
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Base => f.write_str("base"),
            Recipe::MatchingComplement => f.write_str("matching-complement"),
            Recipe::Product => f.write_str("product"),
            Recipe::Merge { r } => write!(f, "merge-r{r}"),
            Recipe::Join => f.write_str("join"),
        }
    }
}

/// Member of the regular family with the recipe that built it.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub k: u32,
    pub degree: usize,
    pub recipe: Recipe,
    pub construction: Construction,
}

fn check_range(k: u32, deg: usize) -> Result<()> {
    if !(3..=MAX_FAMILY_DIMENSION).contains(&k) {
        return Err(Error::domain(format!("k = {k} outside 3..={MAX_FAMILY_DIMENSION}")));
    }
    let max = (1usize << k) - 2;
    if deg < k as usize + 1 || deg > max {
        return Err(Error::domain(format!("degree {deg} outside [{}, {max}] for k = {k}", k + 1)));
    }
    Ok(())
}

/// Every recipe that applies to `(k, deg)`, in priority order.
pub fn applicable_recipes(k: u32, deg: usize) -> Result<Vec<Recipe>> {
    check_range(k, deg)?;
    let mut out = Vec::new();
    if k == 3 {
        out.push(Recipe::Base);
    }
    if deg == (1 << k) - 2 {
        out.push(Recipe::MatchingComplement);
    }
    if k > 3 {
        let kp = k - 1;
        let half = 1usize << kp;
        if deg > kp as usize + 1 && deg < half {
            out.push(Recipe::Product);
        }
        for r in 2..=kp {
            let shift = (1usize << r) - 1;
            if deg > shift && deg - shift > kp as usize && deg - shift <= half - 2 {
                out.push(Recipe::Merge { r });
            }
        }
        if deg > half {
            out.push(Recipe::Join);
        }
    }
    Ok(out)
}

/// Connected, non-bipartite, `deg`-regular unweighted graph on `2^k` vertices, diagonalized by
/// the Sylvester matrix, with PST at π/2. The first applicable recipe wins.
pub fn regular_family(k: u32, deg: usize) -> Result<FamilyMember> {
    let recipe = *applicable_recipes(k, deg)?
        .first()
        .ok_or_else(|| Error::Internal(format!("no recipe covers ({k}, {deg})")))?;
    regular_family_with(k, deg, recipe)
}

/// As [`regular_family`], forcing a particular recipe.
pub fn regular_family_with(k: u32, deg: usize, recipe: Recipe) -> Result<FamilyMember> {
    if !applicable_recipes(k, deg)?.contains(&recipe) {
        return Err(Error::domain(format!("recipe {recipe} does not apply to ({k}, {deg})")));
    }
    let n = 1usize << k;
    let graph = match recipe {
        Recipe::Base => base_graph(deg)?,
        Recipe::MatchingComplement => complement(&WeightedGraph::perfect_matching(n)?)?,
        Recipe::Product => {
            let inner = regular_family(k - 1, deg - 1)?;
            cartesian_product(&WeightedGraph::complete(2), &inner.construction.graph)
        }
        Recipe::Merge { r } => {
            let inner = regular_family(k - 1, deg - ((1 << r) - 1))?;
            let block = WeightedGraph::complete(1 << r);
            let copies = (n / 2) >> r;
            let mut gr = block.clone();
            for _ in 1..copies {
                gr = disjoint_union(&gr, &block);
            }
            merge(&gr, &inner.construction.graph, &MergeWeights::unit())?
        }
        Recipe::Join => {
            let half = n / 2;
            let e = deg - half;
            let base = if e > k as usize - 1 && e < half - 1 {
                regular_family(k - 1, e)?.construction.graph
            } else {
                let inner = regular_family(k - 1, half - 1 - e)?;
                pst_complement(&inner.construction.certificate)?.graph
            };
            join(&base, &base)?
        }
    };
    let construction = verify_member(&graph, k, deg)?;
    Ok(FamilyMember { k, degree: deg, recipe, construction })
}

/// `(K_{2,2} □ K₂)^c`, `(K_{2,2} + K_{2,2})^c`, `(4K₂)^c` on 8 vertices.
fn base_graph(deg: usize) -> Result<WeightedGraph> {
    let k22 = ConnectionSet::basis(2)?.build()?;
    match deg {
        4 => complement(&cartesian_product(&WeightedGraph::complete(2), &k22)),
        5 => complement(&disjoint_union(&k22, &k22)),
        6 => complement(&WeightedGraph::perfect_matching(8)?),
        _ => Err(Error::domain(format!("no base graph of degree {deg}"))),
    }
}

/// The four family properties, each checked directly.
fn verify_member(graph: &WeightedGraph, k: u32, deg: usize) -> Result<Construction> {
    let fail = |what: &str| Err(Error::Internal(format!("family member ({k}, {deg}) is not {what}")));
    if !graph.is_unweighted() {
        return fail("unweighted");
    }
    if !graph.is_connected() {
        return fail("connected");
    }
    if graph.is_bipartite() {
        return fail("non-bipartite");
    }
    if graph.degree_profile().degree() != Some(&rational(deg as i64)) {
        return fail("regular of the requested degree");
    }
    let certificate = certify(graph, &sylvester(k)?)?;
    if certificate.hadamard() != &sylvester(k)? {
        return fail("diagonalized by the Sylvester matrix in its natural order");
    }
    let report = pst_pairs(&certificate)?;
    if report.verdict != Verdict::Pst {
        return fail("PST at π/2");
    }
    Ok(Construction { graph: graph.clone(), certificate, report })
}

/// Degrees on `2^{k+1}` vertices reached from the family on `2^k` vertices: the product case,
/// the merge cases for `2 ≤ r ≤ k`, the join path, and the matching complement.
pub fn degree_intervals(k: u32) -> Vec<(usize, usize)> {
    let big = 1usize << k;
    let k = k as usize;
    let mut out = vec![(k + 2, big - 1)];
    for r in 2..=k {
        out.push((k + (1 << r), big + (1 << r) - 3));
    }
    out.push((big + 1, 2 * big - 2));
    out.push((2 * big - 2, 2 * big - 2));
    out
}

pub fn covered_degrees(k: u32) -> BTreeSet<usize> {
    degree_intervals(k).into_iter().flat_map(|(a, b)| a..=b).collect()
}

/// First missing degree in `[k+2, 2^{k+1} − 2]`, if any.
pub fn coverage_gap(k: u32) -> Option<usize> {
    let covered = covered_degrees(k);
    (k as usize + 2..=(1usize << (k + 1)) - 2).find(|d| !covered.contains(d))
}

/// The order-12 graph with weights in thirds merged with `K₁₂` at weights (5, 2), certified
/// by the doubled order-12 Hadamard matrix; PST from vertex 1 to 2 at π/2.
pub fn order12_merge() -> Result<Construction> {
    let g1 = fixtures::order12_graph()?;
    let g2 = WeightedGraph::complete(12);
    let h = catalog(12)?;
    let cert1 = certify(&g1, &h)?;
    let cert2 = certify(&g2, &h)?;
    let report = merge_pst(&cert1, &cert2, &BigInt::from(5), &BigInt::from(2))?;
    let graph = merge(&g1, &g2, &MergeWeights::new(rational(5), rational(2)))?;
    let certificate = certify(&graph, &catalog(24)?)?;
    if report.verdict != Verdict::Pst || !report.pairs.contains(&(0, 1)) {
        return Err(Error::Internal("order-12 merge lost the (1, 2) transfer".into()));
    }
    debug_assert!(certificate.eigenvalues()[0].is_zero());
    Ok(Construction { graph, certificate, report })
}
