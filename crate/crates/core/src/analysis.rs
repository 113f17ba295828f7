//! Sensitivity to readout-time errors and the eigenvalue-count argument bounding the order of
//! sparse regular graphs with PST.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cubelike::{enumerate, enumerate_parallel, ConnectionSet, Filter};
use crate::error::{Error, Result};
use crate::hadamard::sylvester;
use crate::matrix::{rational, to_f64, Rational};
use crate::pst::{pst_pairs, Verdict};
use crate::spectral::{certify, spectral_radius, Propagator, SpectralCertificate};
use crate::time::PiMultiple;

/// `2x + x² − x³`, the bound on `1 − p` after a perturbation with `‖t₀L₀‖ ≤ x`.
pub fn fidelity_perturbation_bound(x: f64) -> f64 {
    2.0 * x + x * x - x * x * x
}

/// Fidelity loss from reading out at `t₀ + h` instead of `t₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingDrop {
    /// `p(t₀) − p(t₀ + h)` from the eigensolver.
    pub drop: f64,
    /// `(1/n)|Σ e^{ihλ}|` from the exact eigenvalues.
    pub ring_sum: f64,
}

impl TimingDrop {
    /// `1 − ring_sum²`, which equals `drop` when the pair has PST at `t₀`.
    pub fn ring_drop(&self) -> f64 {
        1.0 - self.ring_sum * self.ring_sum
    }
}

/// `(1/n)|Σ_j e^{ihλ_j}|` over the certificate's eigenvalues.
pub fn ring_sum(cert: &SpectralCertificate, h: f64) -> f64 {
    let n = cert.n() as f64;
    let s: Complex<f64> = cert
        .eigenvalues()
        .iter()
        .map(|l| Complex::from_polar(1.0, h * to_f64(l)))
        .sum();
    s.norm() / n
}

/// `|q₁ᵀ M q₁|` with `Q = H/√n`, `q₁` the row of `Q` for vertex `j`, and `M` built from the
/// diagonal of `QᵀLQ` in floating point.
pub fn ring_sum_matrix(cert: &SpectralCertificate, j: usize, h: f64) -> f64 {
    let n = cert.n();
    let q = cert.hadamard().to_qmatrix().to_f64() / (n as f64).sqrt();
    let l = cert.laplacian().to_f64();
    let lambda = (q.transpose() * &l * &q).diagonal();
    let q1: DVector<Complex<f64>> = q.row(j).transpose().map(|x| Complex::new(x, 0.0));
    let m = DMatrix::from_diagonal(&lambda.map(|x| Complex::from_polar(1.0, h * x)));
    (q1.transpose() * m * &q1)[(0, 0)].norm()
}

/// Drop in fidelity for the pair (`j`, `k`) when reading out at `t₀ + h`, with `|h| < π/λ_max`.
pub fn timing_drop(cert: &SpectralCertificate, j: usize, k: usize, t0: &PiMultiple, h: f64) -> Result<TimingDrop> {
    let n = cert.n();
    if j >= n || k >= n {
        return Err(Error::domain("vertex out of range"));
    }
    let lmax = to_f64(&spectral_radius(cert));
    if lmax > 0.0 && h.abs() >= std::f64::consts::PI / lmax {
        return Err(Error::domain(format!("|h| = {} outside the window π/λ_max = {}", h.abs(), std::f64::consts::PI / lmax)));
    }
    let prop = Propagator::from_certificate(cert);
    let t = t0.to_f64();
    let drop = prop.fidelity(t, j, k) - prop.fidelity(t + h, j, k);
    Ok(TimingDrop { drop, ring_sum: ring_sum(cert, h) })
}

/// A count expressed as `constant + per_n·n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub constant: Rational,
    pub per_n: Rational,
}

impl Affine {
    pub fn at(&self, n: &Rational) -> Rational {
        &self.constant + &self.per_n * n
    }
}

/// Constraint on the order `n` left by the count system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderConstraint {
    Exact(BigInt),
    AtMost(BigInt),
}

/// Solution of the eigenvalue-count system for an `r`-regular unweighted graph with PST at π/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigencountSystem {
    pub r: usize,
    /// `counts[i]` is the multiplicity of eigenvalue `2(i+1)`.
    pub counts: Vec<Affine>,
    pub order: OrderConstraint,
}

impl EigencountSystem {
    pub fn max_order(&self) -> &BigInt {
        match &self.order {
            OrderConstraint::Exact(n) | OrderConstraint::AtMost(n) => n,
        }
    }

    /// Whether a spectrum on `n` vertices matches the solved counts.
    pub fn admits(&self, eigenvalues: &[BigInt]) -> bool {
        let n = BigInt::from(eigenvalues.len());
        let fits = match &self.order {
            OrderConstraint::Exact(m) => &n == m,
            OrderConstraint::AtMost(m) => &n <= m,
        };
        if !fits {
            return false;
        }
        let nq = Rational::from_integer(n);
        self.counts.iter().enumerate().all(|(i, c)| {
            let lam = BigInt::from(2 * (i + 1));
            let have = eigenvalues.iter().filter(|e| **e == lam).count();
            c.at(&nq) == rational(have as i64)
        })
    }
}

/// Solves the count system `Σc = n−1`, `Σλc = rn`, `Σλ²c = rn(r+1)` with the mod-4 split
/// `Σ_{λ≡2} c = Σ_{λ≡0, λ>0} c + 1`; for `r = 4` the cubic trace inequality bounds `n`.
pub fn eigencount_solve(r: usize) -> Result<EigencountSystem> {
    if r == 0 {
        return Err(Error::domain("degree must be at least 1"));
    }
    if r > 4 {
        return Err(Error::Unsupported(format!("degree {r}: the count system does not close past 4")));
    }
    // columns: c_2, …, c_{2r}, n, right-hand side; n comes last so it is the free one
    let nc = r;
    let cols = r + 2;
    let rr = rational(r as i64);
    let eig = |i: usize| rational(2 * (i as i64 + 1));
    let equation = |coef: &dyn Fn(usize) -> Rational, n_coef: Rational, rhs: Rational| {
        let mut row: Vec<Rational> = (0..r).map(coef).collect();
        row.push(n_coef);
        row.push(rhs);
        row
    };
    let mut rows = vec![
        equation(&|_| Rational::one(), rational(-1), rational(-1)),
        equation(&eig, -rr.clone(), Rational::zero()),
        equation(&|i| eig(i) * eig(i), -(&rr * (&rr + Rational::one())), Rational::zero()),
        // eigenvalue 2(i+1) is ≡ 2 mod 4 when i is even
        equation(&|i| if i % 2 == 0 { Rational::one() } else { rational(-1) }, Rational::zero(), Rational::one()),
    ];

    let pivots = rref(&mut rows);
    if pivots.contains(&(cols - 1)) {
        return Err(Error::Internal("eigencount system is inconsistent".into()));
    }
    let free: Vec<usize> = (0..cols - 1).filter(|c| !pivots.contains(c)).collect();
    if free.iter().any(|&c| c != nc) {
        return Err(Error::Internal(format!("eigencount system leaves counts free: {free:?}")));
    }
    // each pivot row reads x_p + a·n = b
    let mut n_exact = None;
    let mut counts = vec![Affine { constant: Rational::zero(), per_n: Rational::zero() }; r];
    for (row, &p) in rows.iter().zip(&pivots) {
        let constant = row[cols - 1].clone();
        if p == nc {
            n_exact = Some(constant);
        } else {
            counts[p] = Affine { constant, per_n: -row[nc].clone() };
        }
    }
    let order = match n_exact {
        Some(n) => {
            if !n.is_integer() {
                return Err(Error::Internal(format!("non-integral order {n}")));
            }
            for c in &mut counts {
                c.constant = c.at(&n);
                c.per_n = Rational::zero();
            }
            OrderConstraint::Exact(n.to_integer())
        }
        None => {
            // Σ λ³ c ≤ r²n(r+3)
            let mut constant = Rational::zero();
            let mut per_n = -(&rr * &rr * (&rr + rational(3)));
            for (i, c) in counts.iter().enumerate() {
                let cube = eig(i) * eig(i) * eig(i);
                constant += &cube * &c.constant;
                per_n += &cube * &c.per_n;
            }
            // constant + per_n·n ≤ 0
            if !per_n.is_positive() {
                return Err(Error::Internal("cubic trace inequality does not bound n".into()));
            }
            OrderConstraint::AtMost((-constant / per_n).floor().to_integer())
        }
    };
    Ok(EigencountSystem { r, counts, order })
}

/// Reduced row echelon form in place; returns pivot columns of the nonzero rows, which are
/// moved to the front.
fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Trace identities for an unweighted `r`-regular graph: `Tr L = rn`, `Tr L² = rn(r+1)`,
/// `Tr L³ = r³n + 3r²n − Tr A³` with `Tr A³ ≥ 0`, and every eigenvalue in `[0, 2r]`.
pub fn trace_identities_hold(cert: &SpectralCertificate) -> bool {
    let g = cert.graph();
    if !g.is_unweighted() {
        return false;
    }
    let r = cert.degree();
    let n = rational(cert.n() as i64);
    let eigs = cert.eigenvalues();
    let power_sum = |k: u32| eigs.iter().fold(Rational::zero(), |acc, l| acc + num_traits::pow(l.clone(), k as usize));
    let l = cert.laplacian();
    let l2 = l * l;
    let l3 = &l2 * l;
    let a = g.adjacency();
    let a3 = &(a * a) * a;
    let window = eigs.iter().all(|x| !x.is_negative() && *x <= &r * rational(2));
    power_sum(1) == &r * &n
        && l.trace() == &r * &n
        && power_sum(2) == &r * &n * (&r + Rational::one())
        && l2.trace() == power_sum(2)
        && l3.trace() == power_sum(3)
        && power_sum(3) == &r * &r * &r * &n + rational(3) * &r * &r * &n - a3.trace()
        && !a3.trace().is_negative()
        && window
}

/// One qualifying graph of the sparsity corpus.
#[derive(Clone, Debug, Serialize)]
pub struct SparsityHit {
    pub k: u32,
    pub n: usize,
    pub connection_set: Vec<String>,
    /// Eigenvalue → multiplicity.
    pub eigencounts: BTreeMap<u64, usize>,
    pub counts_admitted: bool,
}

/// Exhaustive check, over cubelike graphs, that an `r`-regular connected unweighted graph with
/// PST at π/2 has at most `2^r` vertices.
#[derive(Clone, Debug, Serialize)]
pub struct SparsityReport {
    pub r: usize,
    pub max_k: u32,
    pub scope: String,
    pub corpus_size: usize,
    pub qualifying: Vec<SparsityHit>,
    pub max_n: usize,
    pub bound: usize,
    pub violations: usize,
}

impl SparsityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.qualifying.iter().all(|h| h.counts_admitted)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sparsity report serialization")
    }
}

/// Enumerates connected `r`-regular cubelike graphs on `2^k` vertices, `k ≤ max_k`, keeps those
/// with PST at π/2, and compares each against `2^r` and the solved count system.
pub fn verify_sparsity_corpus(r: usize, max_k: u32, parallel: bool) -> Result<SparsityReport> {
    if max_k > 5 {
        return Err(Error::Capacity(format!("max_k = {max_k} > 5")));
    }
    let system = eigencount_solve(r)?;
    let filter = Filter { connected: Some(true), degree: Some(r), ..Filter::default() };
    let mut corpus: Vec<ConnectionSet> = Vec::new();
    for k in 1..=max_k {
        if parallel {
            corpus.extend(enumerate_parallel(k, &filter)?);
        } else {
            corpus.extend(enumerate(k, filter.clone())?);
        }
    }
    let check = |c: &ConnectionSet| -> Result<Option<SparsityHit>> {
        // PST at π/2 from vertex 0 in Sylvester coordinates: λ_x ≡ 1 − (−1)^{x·t} (mod 4)
        let eigs = c.eigenvalues();
        let n = eigs.len();
        let target = (1..n).find(|&t| {
            eigs.iter()
                .enumerate()
                .all(|(x, &l)| l % 4 == if (x & t).count_ones() % 2 == 0 { 0 } else { 2 })
        });
        if target.is_none() {
            return Ok(None);
        }
        let cert = certify(&c.build()?, &sylvester(c.d())?)?;
        if pst_pairs(&cert)?.verdict != Verdict::Pst {
            return Err(Error::Internal(format!("{c}: spectral shortcut and certificate disagree")));
        }
        let mut eigencounts = BTreeMap::new();
        for &l in &eigs {
            *eigencounts.entry(l).or_insert(0) += 1;
        }
        let exact = cert.integer_eigenvalues()?;
        Ok(Some(SparsityHit {
            k: c.d(),
            n,
            connection_set: c.bitstrings(),
            eigencounts,
            counts_admitted: system.admits(&exact),
        }))
    };
    let results: Vec<Result<Option<SparsityHit>>> = if parallel {
        corpus.par_iter().map(check).collect()
    } else {
        corpus.iter().map(check).collect()
    };
    let mut qualifying = Vec::new();
    for res in results {
        if let Some(hit) = res? {
            qualifying.push(hit);
        }
    }
    let bound = 1usize << r;
    let max_n = qualifying.iter().map(|h| h.n).max().unwrap_or(0);
    let violations = qualifying.iter().filter(|h| h.n > bound).count();
    Ok(SparsityReport {
        r,
        max_k,
        scope: format!("connected {r}-regular cubelike graphs on Z_2^k, 1 <= k <= {max_k}"),
        corpus_size: corpus.len(),
        qualifying,
        max_n,
        bound,
        violations,
    })
}

/// Largest `|q₁ᵀ M q₁|` deviation from `ring_sum` over all vertices; handy in tests.
pub fn ring_sum_gap(cert: &SpectralCertificate, h: f64) -> f64 {
    let rs = ring_sum(cert, h);
    (0..cert.n()).map(|j| (ring_sum_matrix(cert, j, h) - rs).abs()).fold(0.0, f64::max)
}
