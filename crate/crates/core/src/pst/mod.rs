//! Exact perfect-state-transfer decisions at time π/2, rescaling, merges, and pretty good
//! state transfer through rational approximation of an irrational merge weight.

mod merge;
mod pgst;
mod quadratic;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{scale, WeightedGraph};
use crate::hadamard::HadamardMatrix;
use crate::spectral::{Dynamics, Propagator, SpectralCertificate, PST_TOLERANCE};
use crate::time::PiMultiple;
use crate::matrix::Rational;

pub use merge::{common_hadamard, merge_pst, MergeCase, MergeSpectra};
pub use pgst::{pgst_sequence, MergeWeight, PgstPoint};
pub use quadratic::{pgst_approximants, pgst_approximants_within, ContinuedFraction, ParityClass, QuadraticIrrational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pst,
    Periodic,
    None,
    Pgst,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pst => "PST",
            Verdict::Periodic => "PERIODIC",
            Verdict::None => "NONE",
            Verdict::Pgst => "PGST",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "PST" => Ok(Verdict::Pst),
            "PERIODIC" => Ok(Verdict::Periodic),
            "NONE" => Ok(Verdict::None),
            "PGST" => Ok(Verdict::Pgst),
            _ => Err(Error::parse(format!("unknown verdict {s:?}"))),
        }
    }
}

/// Outcome of a transfer decision. Pairs are 0-based here and 1-based in JSON.
#[derive(Clone, Debug, PartialEq)]
pub struct PstReport {
    pub verdict: Verdict,
    pub pairs: Vec<(usize, usize)>,
    pub time: PiMultiple,
    /// Which rule decided the verdict, e.g. `mod4`, `sigma`, `merge-3b`.
    pub rule: String,
    /// Smallest oracle fidelity over the reported pairs, when the oracle ran.
    pub fidelity: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    verdict: String,
    pairs: Vec<[usize; 2]>,
    time: String,
    rule: String,
    fidelity: Option<f64>,
}

impl PstReport {
    pub fn to_json(&self) -> String {
        let j = ReportJson {
            verdict: self.verdict.to_string(),
            pairs: self.pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            time: self.time.to_string(),
            rule: self.rule.clone(),
            fidelity: self.fidelity,
        };
        serde_json::to_string(&j).expect("report JSON serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: ReportJson = serde_json::from_str(s).map_err(|e| Error::parse(format!("report JSON: {e}")))?;
        let pairs = j
            .pairs
            .iter()
            .map(|&[a, b]| {
                if a == 0 || b == 0 {
                    Err(Error::parse("report pairs are 1-based"))
                } else {
                    Ok((a - 1, b - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PstReport {
            verdict: j.verdict.parse()?,
            pairs,
            time: j.time.parse()?,
            rule: j.rule,
            fidelity: j.fidelity,
        })
    }

    /// 1-based pairs, for display.
    pub fn pairs_one_based(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&(a, b)| (a + 1, b + 1)).collect()
    }
}

/// Eigenvalues reduced mod 4, in Hadamard-column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Mod4Spectrum {
    residues: Vec<u8>,
}

impl Mod4Spectrum {
    pub(crate) fn new(eigenvalues: &[BigInt]) -> Self {
        let four = BigInt::from(4);
        let residues = eigenvalues
            .iter()
            .map(|l| {
                let r = l.mod_floor(&four);
                // 0 ≤ r < 4
                r.to_u32_digits().1.first().copied().unwrap_or(0) as u8
            })
            .collect();
        Mod4Spectrum { residues }
    }

    /// `λ_ℓ ≡ 1 − h_{jℓ}h_{kℓ} (mod 4)` for every ℓ; `j == k` asks for a return to `j`.
    pub(crate) fn transfers(&self, h: &HadamardMatrix, j: usize, k: usize) -> bool {
        self.residues
            .iter()
            .enumerate()
            .all(|(l, &r)| r == if h.get(j, l) == h.get(k, l) { 0 } else { 2 })
    }

    pub(crate) fn all_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

fn check_vertex(n: usize, j: usize) -> Result<()> {
    if j < n {
        Ok(())
    } else {
        Err(Error::domain(format!("vertex {} out of range 1..={n}", j + 1)))
    }
}

/// Exact PST test between distinct vertices `j`, `k` (0-based) at time π/2.
pub fn pst_mod4(cert: &SpectralCertificate, j: usize, k: usize) -> Result<bool> {
    check_vertex(cert.n(), j)?;
    check_vertex(cert.n(), k)?;
    if j == k {
        return Err(Error::domain("PST needs two distinct vertices"));
    }
    let spec = Mod4Spectrum::new(&cert.integer_eigenvalues()?);
    Ok(spec.transfers(cert.hadamard(), j, k))
}

/// Every pair passing the mod-4 test, each confirmed by the generic eigensolver at π/2.
pub fn pst_pairs(cert: &SpectralCertificate) -> Result<PstReport> {
    let n = cert.n();
    let spec = Mod4Spectrum::new(&cert.integer_eigenvalues()?);
    let h = cert.hadamard();
    let mut pairs = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            if spec.transfers(h, j, k) {
                pairs.push((j, k));
            }
        }
    }
    let mut seen = vec![false; n];
    for &(j, k) in &pairs {
        if seen[j] || seen[k] {
            return Err(Error::Internal(format!("vertex in two PST pairs near ({}, {})", j + 1, k + 1)));
        }
        seen[j] = true;
        seen[k] = true;
    }
    let has_edges = cert.laplacian().diagonal().iter().any(|d| !d.is_zero());
    let half = PiMultiple::half();
    if !pairs.is_empty() {
        let fidelity = oracle_min_fidelity(cert, &pairs)?;
        return Ok(PstReport {
            verdict: Verdict::Pst,
            pairs,
            time: half,
            rule: "mod4".into(),
            fidelity: Some(fidelity),
        });
    }
    if has_edges && spec.all_zero() {
        let returns: Vec<_> = (0..n).map(|j| (j, j)).collect();
        let fidelity = oracle_min_fidelity(cert, &returns)?;
        return Ok(PstReport {
            verdict: Verdict::Periodic,
            pairs: Vec::new(),
            time: half,
            rule: "mod4-periodic".into(),
            fidelity: Some(fidelity),
        });
    }
    Ok(PstReport {
        verdict: Verdict::None,
        pairs: Vec::new(),
        time: half,
        rule: "mod4".into(),
        fidelity: None,
    })
}

fn oracle_min_fidelity(cert: &SpectralCertificate, pairs: &[(usize, usize)]) -> Result<f64> {
    let prop = Propagator::for_graph(&cert.graph(), Dynamics::Laplacian)?;
    let t = PiMultiple::half().to_f64();
    let mut min = f64::INFINITY;
    for &(j, k) in pairs {
        let p = prop.fidelity(t, j, k);
        if 1.0 - p > PST_TOLERANCE {
            return Err(Error::Numeric(format!(
                "oracle fidelity {p} at ({}, {}) contradicts the exact decision",
                j + 1,
                k + 1
            )));
        }
        min = min.min(p);
    }
    Ok(min)
}

fn require_edges(g: &WeightedGraph) -> Result<()> {
    if g.edge_count() == 0 {
        Err(Error::domain("graph has no edges"))
    } else {
        Ok(())
    }
}

/// Divides integer weights by their gcd `a`; PST at π/(2a) for `g` is PST at π/2 for the result.
pub fn gcd_rescale(g: &WeightedGraph) -> Result<(WeightedGraph, BigInt)> {
    require_edges(g)?;
    if !g.is_integer_weighted() {
        return Err(Error::domain("gcd rescaling needs integer weights"));
    }
    let a = g.edges().iter().fold(BigInt::zero(), |acc, (_, _, w)| acc.gcd(&w.to_integer()));
    let inv = Rational::new(BigInt::one(), a.clone());
    Ok((scale(g, &inv)?, a))
}

/// Integer-weighted multiple of a rational-weighted graph.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalRescale {
    pub graph: WeightedGraph,
    /// `lcm/gcd`, the factor applied to every weight.
    pub factor: Rational,
    /// Time at which the original graph matches the rescaled one at π/2.
    pub time: PiMultiple,
}

/// Multiplies by `lcm/gcd` (lcm of the denominators, gcd of the cleared weights).
pub fn rational_rescale(g: &WeightedGraph) -> Result<RationalRescale> {
    require_edges(g)?;
    let edges = g.edges();
    let lcm = edges.iter().fold(BigInt::one(), |acc, (_, _, w)| acc.lcm(w.denom()));
    let gcd = edges
        .iter()
        .fold(BigInt::zero(), |acc, (_, _, w)| acc.gcd(&(w * Rational::from_integer(lcm.clone())).to_integer()));
    let factor = Rational::new(lcm, gcd.abs());
    let graph = scale(g, &factor)?;
    let time = PiMultiple::half().scaled(&factor);
    Ok(RationalRescale { graph, factor, time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graphs::{add, cartesian_product};
    use crate::hadamard::{catalog, sylvester};
    use crate::matrix::{ratio, rational};
    use crate::spectral::{certify, evolve_fidelity};
    use std::f64::consts::PI;

    fn cube() -> WeightedGraph {
        let k2 = WeightedGraph::complete(2);
        cartesian_product(&cartesian_product(&k2, &k2), &k2)
    }

    fn pairs1(r: &PstReport) -> Vec<(usize, usize)> {
        r.pairs_one_based()
    }

    #[test]
    fn mod4_examples() {
        let k2 = certify(&WeightedGraph::complete(2), &sylvester(1).unwrap()).unwrap();
        assert!(pst_mod4(&k2, 0, 1).unwrap());
        let g1 = certify(&fixtures::routing_first_graph().unwrap(), &sylvester(3).unwrap()).unwrap();
        for (j, k) in [(0, 7), (1, 6), (2, 5), (3, 4)] {
            assert!(pst_mod4(&g1, j, k).unwrap());
        }
        let c4 = certify(&fixtures::square_graph().unwrap(), &sylvester(2).unwrap()).unwrap();
        assert!(!pst_mod4(&c4, 0, 1).unwrap());
        assert!(evolve_fidelity(&fixtures::square_graph().unwrap(), PI / 2.0, 0, 1).unwrap() < 0.5);
        assert!(pst_mod4(&c4, 0, 0).is_err());
    }

    #[test]
    fn fractional_spectrum_rejected() {
        let g = scale(&cube(), &ratio(1, 3)).unwrap();
        let cert = certify(&g, &sylvester(3).unwrap()).unwrap();
        assert!(matches!(pst_mod4(&cert, 0, 7), Err(Error::Domain(_))));
    }

    #[test]
    fn sweep_examples() {
        let cert = certify(&cube(), &sylvester(3).unwrap()).unwrap();
        let r = pst_pairs(&cert).unwrap();
        assert_eq!(r.verdict, Verdict::Pst);
        assert_eq!(pairs1(&r), vec![(1, 8), (2, 7), (3, 6), (4, 5)]);
        assert!(r.fidelity.unwrap() > 1.0 - 1e-9);

        let k4 = certify(&WeightedGraph::complete(4), &sylvester(2).unwrap()).unwrap();
        assert_eq!(pst_pairs(&k4).unwrap().verdict, Verdict::Periodic);

        let e = certify(&WeightedGraph::empty(4), &sylvester(2).unwrap()).unwrap();
        assert_eq!(pst_pairs(&e).unwrap().verdict, Verdict::None);
    }

    #[test]
    fn routing_triple() {
        let h = sylvester(3).unwrap();
        let g1 = fixtures::routing_first_graph().unwrap();
        let g2 = fixtures::routing_second_graph().unwrap();
        let sum = add(&g1, &g2).unwrap();
        let p = |g: &WeightedGraph| pairs1(&pst_pairs(&certify(g, &h).unwrap()).unwrap());
        assert_eq!(p(&g1), vec![(1, 8), (2, 7), (3, 6), (4, 5)]);
        assert_eq!(p(&g2), vec![(1, 6), (2, 5), (3, 8), (4, 7)]);
        assert_eq!(p(&sum), vec![(1, 3), (2, 4), (5, 7), (6, 8)]);
    }

    #[test]
    fn order12_example_has_pst_between_first_two() {
        let g = fixtures::order12_graph().unwrap();
        let rs = rational_rescale(&g).unwrap();
        assert!(rs.graph.is_integer_weighted());
        let cert = certify(&rs.graph, &catalog(12).unwrap()).unwrap();
        let r = pst_pairs(&cert).unwrap();
        assert!(r.pairs.contains(&(0, 1)));
        // the original thirds-weighted graph transfers at factor·π/2
        let p = evolve_fidelity(&g, rs.time.to_f64(), 0, 1).unwrap();
        assert!(1.0 - p < 1e-9);
    }

    #[test]
    fn report_json_round_trip() {
        let cert = certify(&cube(), &sylvester(3).unwrap()).unwrap();
        let r = pst_pairs(&cert).unwrap();
        let s = r.to_json();
        assert!(s.contains(r#""pairs":[[1,8],[2,7],[3,6],[4,5]]"#));
        assert!(s.contains(r#""time":"1/2 * pi""#));
        assert_eq!(PstReport::from_json(&s).unwrap(), r);
    }

    #[test]
    fn gcd_examples() {
        let k2 = WeightedGraph::complete(2);
        let (g, a) = gcd_rescale(&scale(&k2, &rational(2)).unwrap()).unwrap();
        assert_eq!((g, a.clone()), (k2.clone(), BigInt::from(2)));
        // PST of 2·K2 happens at π/(2a) = π/4
        let p = evolve_fidelity(&scale(&k2, &rational(2)).unwrap(), PI / (2.0 * 2.0), 0, 1).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert_eq!(gcd_rescale(&k2).unwrap().1, BigInt::from(1));
        let path = WeightedGraph::from_edges(3, [(0, 1, rational(6)), (1, 2, rational(10))]).unwrap();
        assert_eq!(gcd_rescale(&path).unwrap().1, BigInt::from(2));
        assert!(gcd_rescale(&WeightedGraph::empty(3)).is_err());
        assert!(gcd_rescale(&scale(&k2, &ratio(1, 2)).unwrap()).is_err());
    }

    #[test]
    fn rational_rescale_examples() {
        let path = WeightedGraph::from_edges(3, [(0, 1, ratio(1, 2)), (1, 2, ratio(3, 2))]).unwrap();
        let rs = rational_rescale(&path).unwrap();
        assert_eq!(rs.factor, rational(2));
        assert_eq!(rs.time, PiMultiple::new(rational(1)));
        let rs = rational_rescale(&cube()).unwrap();
        assert_eq!(rs.factor, rational(1));
        assert_eq!(rs.time, PiMultiple::half());
        assert_eq!(rs.graph, cube());
        let g = fixtures::order12_graph().unwrap();
        let lcm = g.edges().iter().fold(BigInt::one(), |acc, (_, _, w)| acc.lcm(w.denom()));
        assert_eq!(lcm, BigInt::from(3));
    }
}
