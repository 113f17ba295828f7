use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Mod4Spectrum, PstReport, Verdict};
use crate::error::{Error, Result};
use crate::graphs::{merge, MergeWeights, WeightedGraph};
use crate::hadamard::HadamardMatrix;
use crate::matrix::Rational;
use crate::spectral::{certify, Dynamics, Propagator, SpectralCertificate, PST_TOLERANCE};
use crate::time::PiMultiple;

/// Row of the merge decision table that certified a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MergeCase {
    C1a,
    C1b,
    C1c,
    C2a,
    C2b,
    C2c,
    C3a,
    C3b,
}

impl fmt::Display for MergeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MergeCase::C1a => "1a",
            MergeCase::C1b => "1b",
            MergeCase::C1c => "1c",
            MergeCase::C2a => "2a",
            MergeCase::C2b => "2b",
            MergeCase::C2c => "2c",
            MergeCase::C3a => "3a",
            MergeCase::C3b => "3b",
        })
    }
}

/// Mod-4 data of two graphs certified by one Hadamard matrix: G₁, G₂, the graph with
/// Laplacian `L₁ + L₂`, and the parity of G₂'s degree.
#[derive(Clone, Debug)]
pub struct MergeSpectra {
    hadamard: HadamardMatrix,
    n: usize,
    lam1: Vec<BigInt>,
    lam2: Vec<BigInt>,
    d2: BigInt,
    g1: Mod4Spectrum,
    g2: Mod4Spectrum,
    sum: Mod4Spectrum,
}

impl MergeSpectra {
    pub fn new(cert1: &SpectralCertificate, cert2: &SpectralCertificate) -> Result<Self> {
        if cert1.hadamard() != cert2.hadamard() {
            return Err(Error::domain("the two certificates use different Hadamard matrices"));
        }
        let lam1 = cert1.integer_eigenvalues()?;
        let lam2 = cert2.integer_eigenvalues()?;
        let d2 = cert2.degree();
        if !d2.is_integer() {
            return Err(Error::domain("degree of the second graph is not an integer"));
        }
        let sum: Vec<BigInt> = lam1.iter().zip(&lam2).map(|(a, b)| a + b).collect();
        Ok(MergeSpectra {
            hadamard: cert1.hadamard().clone(),
            n: cert1.n(),
            g1: Mod4Spectrum::new(&lam1),
            g2: Mod4Spectrum::new(&lam2),
            sum: Mod4Spectrum::new(&sum),
            lam1,
            lam2,
            d2: d2.to_integer(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d2_is_odd(&self) -> bool {
        self.d2.is_odd()
    }

    /// Table lookup for the pair `p < q` of the `2n`-vertex merge with weights of the given
    /// parities (not both even).
    pub fn case_for(&self, w1_odd: bool, w2_odd: bool, p: usize, q: usize) -> Option<MergeCase> {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        let n = self.n;
        let d2_odd = self.d2_is_odd();
        let h = &self.hadamard;
        if q < n || p >= n {
            let first = q < n;
            let (a, b) = if first { (p, q) } else { (p - n, q - n) };
            if a == b {
                return None;
            }
            let (case, spec) = match (w1_odd, w2_odd, d2_odd) {
                (true, false, _) => (if first { MergeCase::C1a } else { MergeCase::C2a }, &self.g1),
                (false, true, false) => (if first { MergeCase::C1b } else { MergeCase::C2b }, &self.g2),
                (true, true, false) => (if first { MergeCase::C1c } else { MergeCase::C2c }, &self.sum),
                _ => return None,
            };
            spec.transfers(h, a, b).then_some(case)
        } else {
            let b = q - n;
            let (case, spec) = match (w1_odd, w2_odd, d2_odd) {
                (false, true, true) => (MergeCase::C3a, &self.g2),
                (true, true, true) => (MergeCase::C3b, &self.sum),
                _ => return None,
            };
            spec.transfers(h, p, b).then_some(case)
        }
    }

    /// Merged eigenvalues `w₁λ¹ + w₂λ²` and `w₁λ¹ − w₂λ² + 2w₂d₂`.
    pub fn merged_eigenvalues(&self, w1: &BigInt, w2: &BigInt) -> Vec<BigInt> {
        let top = self.lam1.iter().zip(&self.lam2).map(|(a, b)| w1 * a + w2 * b);
        let shift = BigInt::from(2) * w2 * &self.d2;
        let bottom = self.lam1.iter().zip(&self.lam2).map(|(a, b)| w1 * a - w2 * b + &shift);
        top.chain(bottom).collect()
    }
}

/// First candidate that certifies both graphs, with the two certificates.
pub fn common_hadamard(
    g1: &WeightedGraph,
    g2: &WeightedGraph,
    candidates: &[HadamardMatrix],
) -> Result<(SpectralCertificate, SpectralCertificate)> {
    for h in candidates {
        if let (Ok(c1), Ok(c2)) = (certify(g1, h), certify(g2, h)) {
            return Ok((c1, c2));
        }
    }
    Err(Error::Hypothesis("no candidate Hadamard matrix diagonalizes both graphs".into()))
}

fn two_adic(w: &BigInt) -> Option<u64> {
    w.trailing_zeros()
}

/// Decides PST in `G₁ ⊙ G₂` for integer weights. A common factor `2^r` of the weights is
/// divided out first, which moves the transfer time to `π/2^{r+1}`.
pub fn merge_pst(cert1: &SpectralCertificate, cert2: &SpectralCertificate, w1: &BigInt, w2: &BigInt) -> Result<PstReport> {
    let spectra = MergeSpectra::new(cert1, cert2)?;
    let r = match (two_adic(w1), two_adic(w2)) {
        (None, None) => return Err(Error::domain("both merge weights are zero")),
        (Some(a), None) | (None, Some(a)) => a,
        (Some(a), Some(b)) => a.min(b),
    };
    let r32 = u32::try_from(r).map_err(|_| Error::Capacity("weight 2-adic valuation too large".into()))?;
    let red1 = w1 >> r32;
    let red2 = w2 >> r32;
    let time = PiMultiple::new(Rational::new(BigInt::one(), BigInt::one() << (r32 + 1)));
    let n = spectra.n();
    let (o1, o2) = (red1.is_odd(), red2.is_odd());
    let mut pairs = Vec::new();
    let mut cases = Vec::new();
    for p in 0..2 * n {
        for q in p + 1..2 * n {
            if let Some(c) = spectra.case_for(o1, o2, p, q) {
                pairs.push((p, q));
                if !cases.contains(&c) {
                    cases.push(c);
                }
            }
        }
    }
    let merged = merge(
        &cert1.graph(),
        &cert2.graph(),
        &MergeWeights::new(Rational::from_integer(w1.clone()), Rational::from_integer(w2.clone())),
    )?;
    let t = time.to_f64();
    if !pairs.is_empty() {
        cases.sort();
        let rule = format!("merge-{}", cases.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
        let fidelity = oracle_min(&merged, t, &pairs)?;
        return Ok(PstReport {
            verdict: Verdict::Pst,
            pairs,
            time,
            rule,
            fidelity: Some(fidelity),
        });
    }
    let four = BigInt::from(4);
    let periodic = merged.edge_count() > 0
        && spectra.merged_eigenvalues(&red1, &red2).iter().all(|m| m.mod_floor(&four).is_zero());
    if periodic {
        let returns: Vec<_> = (0..2 * n).map(|j| (j, j)).collect();
        let fidelity = oracle_min(&merged, t, &returns)?;
        return Ok(PstReport {
            verdict: Verdict::Periodic,
            pairs: Vec::new(),
            time,
            rule: "merge-periodic".into(),
            fidelity: Some(fidelity),
        });
    }
    Ok(PstReport {
        verdict: Verdict::None,
        pairs,
        time,
        rule: "merge".into(),
        fidelity: None,
    })
}

fn oracle_min(g: &WeightedGraph, t: f64, pairs: &[(usize, usize)]) -> Result<f64> {
    let prop = Propagator::for_graph(g, Dynamics::Laplacian)?;
    let mut min = f64::INFINITY;
    for &(j, k) in pairs {
        let p = prop.fidelity(t, j, k);
        if 1.0 - p > PST_TOLERANCE {
            return Err(Error::Numeric(format!("oracle fidelity {p} at ({}, {}) contradicts the merge table", j + 1, k + 1)));
        }
        min = min.min(p);
    }
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graphs::disjoint_union;
    use crate::hadamard::{catalog, sylvester};
    use crate::matrix::rational;
    use crate::spectral::evolve_fidelity;

    fn k8_minus_k3() -> WeightedGraph {
        let edges = (0..8)
            .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
            .filter(|&(i, j)| !(i < 3 && j < 3))
            .map(|(i, j)| (i, j, rational(1)));
        WeightedGraph::from_edges(8, edges).unwrap()
    }

    #[test]
    fn order12_merge_is_case_1a() {
        // weights are thirds but the spectrum is integral, which is all the table needs
        let g1 = fixtures::order12_graph().unwrap();
        let (c1, c2) = common_hadamard(&g1, &WeightedGraph::complete(12), &[catalog(12).unwrap()]).unwrap();
        let r = merge_pst(&c1, &c2, &BigInt::from(5), &BigInt::from(2)).unwrap();
        assert_eq!(r.verdict, Verdict::Pst);
        assert!(r.pairs.contains(&(0, 1)));
        assert_eq!(r.rule, "merge-1a,2a");
        assert_eq!(r.time, PiMultiple::half());
    }

    #[test]
    fn periodic_partner_gives_cross_pair() {
        let h = sylvester(3).unwrap();
        let cube = fixtures::routing_first_graph().unwrap();
        let two_k4 = disjoint_union(&WeightedGraph::complete(4), &WeightedGraph::complete(4));
        let (c1, c2) = common_hadamard(&cube, &two_k4, &[h]).unwrap();
        let r = merge_pst(&c1, &c2, &BigInt::from(1), &BigInt::from(1)).unwrap();
        assert_eq!(r.rule, "merge-3b");
        assert!(r.pairs.contains(&(0, 7 + 8)));
    }

    #[test]
    fn cycle_square_merge_matches_oracle() {
        let c4 = fixtures::square_graph().unwrap();
        let h = sylvester(2).unwrap();
        let c = certify(&c4, &h).unwrap();
        let r = merge_pst(&c, &c, &BigInt::from(1), &BigInt::from(1)).unwrap();
        let m = merge(&c4, &c4, &MergeWeights::unit()).unwrap();
        for p in 0..8 {
            for q in p + 1..8 {
                let f = evolve_fidelity(&m, std::f64::consts::FRAC_PI_2, p, q).unwrap();
                assert_eq!(r.pairs.contains(&(p, q)), 1.0 - f <= PST_TOLERANCE, "pair ({p},{q})");
            }
        }
    }

    #[test]
    fn even_weights_shift_time() {
        let k2 = WeightedGraph::complete(2);
        let h = sylvester(1).unwrap();
        let c = certify(&k2, &h).unwrap();
        let e = certify(&WeightedGraph::empty(2), &h).unwrap();
        let r = merge_pst(&c, &e, &BigInt::from(4), &BigInt::from(0)).unwrap();
        assert_eq!(r.time, PiMultiple::new(Rational::new(1.into(), 8.into())));
        assert_eq!(r.pairs, vec![(0, 1), (2, 3)]);
        assert!(merge_pst(&c, &e, &BigInt::from(0), &BigInt::from(0)).is_err());
    }

    #[test]
    fn counterexample_fails_common_hadamard() {
        let g1 = k8_minus_k3();
        let cube = fixtures::routing_first_graph().unwrap();
        let m = merge(&g1, &cube, &MergeWeights::new(rational(2), rational(1))).unwrap();
        assert_eq!(m.laplacian(), fixtures::counterexample_merge_laplacian().unwrap());
        let err = common_hadamard(&g1, &cube, &[sylvester(3).unwrap()]).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn mismatched_hadamards_rejected() {
        let h = sylvester(2).unwrap();
        let other = h.recolumned(&[0, 2, 1, 3], &[1, 1, 1, 1]);
        let c4 = fixtures::square_graph().unwrap();
        let a = certify(&c4, &h).unwrap();
        let b = certify(&c4, &other).unwrap();
        assert!(MergeSpectra::new(&a, &b).is_err());
    }
}
