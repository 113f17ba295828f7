//! Hadamard diagonalization, certificates, and the floating-point evolution oracle.

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::hadamard::HadamardMatrix;
use crate::matrix::{parse_rational, rational, to_f64, QMatrix, Rational};

/// Numeric PST threshold: a pair counts as transferred when `1 − p ≤ PST_TOLERANCE`.
pub const PST_TOLERANCE: f64 = 1e-9;

/// Relative residual accepted from the generic eigensolver.
pub const EIGEN_RESIDUAL: f64 = 1e-10;

static CERTIFICATES_CHECKED: AtomicUsize = AtomicUsize::new(0);

/// Number of certificates that have passed the even-eigenvalue/regularity check in this process.
pub fn certificates_checked() -> usize {
    CERTIFICATES_CHECKED.load(Ordering::Relaxed)
}

/// `λ` with `L·h_j = λ·h_j`, compared entry by entry, or `None` when `h_j` is not an eigenvector.
pub fn column_eigenvalue(l: &QMatrix, h: &HadamardMatrix, j: usize) -> Option<Rational> {
    let n = l.n();
    let col = h.column(j);
    let mut lambda: Option<Rational> = None;
    for i in 0..n {
        let mut acc = Rational::zero();
        for (k, &s) in col.iter().enumerate() {
            let x = l.get(i, k);
            if x.is_zero() {
                continue;
            }
            if s > 0 {
                acc += x;
            } else {
                acc -= x;
            }
        }
        // h_ij = ±1, so (L h_j)_i / h_ij is a sign flip
        let ratio = if col[i] > 0 { acc } else { -acc };
        match &lambda {
            None => lambda = Some(ratio),
            Some(l0) if *l0 != ratio => return None,
            Some(_) => {}
        }
    }
    Some(lambda.unwrap_or_else(Rational::zero))
}

/// Whether `Hᵀ L H` is diagonal, i.e. every column of `H` is an eigenvector of `L`.
pub fn diagonalizes(l: &QMatrix, h: &HadamardMatrix) -> Result<bool> {
    if l.n() != h.order() {
        return Err(Error::domain(format!("matrix order {} differs from Hadamard order {}", l.n(), h.order())));
    }
    Ok((0..h.order()).all(|j| column_eigenvalue(l, h, j).is_some()))
}

/// `H` with columns signed by its first row and the all-ones column moved to the front.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub hadamard: HadamardMatrix,
    /// Sign applied to each original column.
    pub column_signs: Vec<i8>,
    /// Column `i` of the aligned matrix is original column `permutation[i]`.
    pub permutation: Vec<usize>,
}

pub fn align(h: &HadamardMatrix) -> Result<Alignment> {
    let n = h.order();
    let column_signs: Vec<i8> = (0..n).map(|j| h.get(0, j)).collect();
    let ones = (0..n)
        .find(|&j| (0..n).all(|i| h.get(i, j) * column_signs[j] == 1))
        .ok_or_else(|| Error::Alignment("no column becomes all-ones after signing by the first row".into()))?;
    let permutation: Vec<usize> = std::iter::once(ones).chain((0..n).filter(|&j| j != ones)).collect();
    let signs: Vec<i8> = permutation.iter().map(|&j| column_signs[j]).collect();
    Ok(Alignment {
        hadamard: h.recolumned(&permutation, &signs),
        column_signs,
        permutation,
    })
}

/// Eigenvalues of `L` in the column order of a normalized Hadamard matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralCertificate {
    hadamard: HadamardMatrix,
    eigenvalues: Vec<Rational>,
    laplacian: QMatrix,
    column_signs: Vec<i8>,
    permutation: Vec<usize>,
}

impl SpectralCertificate {
    pub fn n(&self) -> usize {
        self.hadamard.order()
    }

    pub fn hadamard(&self) -> &HadamardMatrix {
        &self.hadamard
    }

    pub fn eigenvalues(&self) -> &[Rational] {
        &self.eigenvalues
    }

    pub fn laplacian(&self) -> &QMatrix {
        &self.laplacian
    }

    pub fn column_signature(&self) -> &[i8] {
        &self.column_signs
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn graph(&self) -> WeightedGraph {
        WeightedGraph::from_laplacian(&self.laplacian).expect("certified Laplacian is valid")
    }

    /// Common weighted degree, `Σλ / n`.
    pub fn degree(&self) -> Rational {
        let n = rational(self.n() as i64);
        self.eigenvalues.iter().sum::<Rational>() / n
    }

    /// Eigenvalues as integers, or a domain error naming the first fractional one.
    pub fn integer_eigenvalues(&self) -> Result<Vec<BigInt>> {
        self.eigenvalues
            .iter()
            .map(|l| {
                if l.is_integer() {
                    Ok(l.to_integer())
                } else {
                    Err(Error::domain(format!("eigenvalue {l} is not an integer; rescale the graph first")))
                }
            })
            .collect()
    }

    /// `(1/n)·H·diag(λ)·Hᵀ`.
    pub fn reconstruct(&self) -> QMatrix {
        reconstruct(&self.hadamard, &self.eigenvalues)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CertificateJson::from(self)).expect("certificate JSON serialization")
    }

    /// Reads a certificate and re-derives its Laplacian from `H` and `λ`.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: CertificateJson = serde_json::from_str(s).map_err(|e| Error::parse(format!("certificate JSON: {e}")))?;
        let h = HadamardMatrix::from_rows(&j.hadamard)?;
        let eigenvalues = j.eigenvalues.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        if eigenvalues.len() != h.order() {
            return Err(Error::parse("eigenvalue count differs from Hadamard order"));
        }
        let l = reconstruct(&h, &eigenvalues);
        let g = WeightedGraph::from_laplacian(&l)?;
        let cert = certify(&g, &h)?;
        if cert.eigenvalues != eigenvalues {
            return Err(Error::parse("certificate Hadamard matrix is not aligned"));
        }
        Ok(cert)
    }
}

fn reconstruct(h: &HadamardMatrix, eigenvalues: &[Rational]) -> QMatrix {
    let n = h.order();
    let inv_n = Rational::new(1.into(), BigInt::from(n));
    QMatrix::from_fn(n, |i, k| {
        let mut acc = Rational::zero();
        for (l, lam) in eigenvalues.iter().enumerate() {
            if h.get(i, l) == h.get(k, l) {
                acc += lam;
            } else {
                acc -= lam;
            }
        }
        acc * &inv_n
    })
}

/// Serialized form; vertex-like indices in `permutation` are 1-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub order: usize,
    pub eigenvalues: Vec<String>,
    pub hadamard: Vec<Vec<i64>>,
    pub column_signature: Vec<i8>,
    pub permutation: Vec<usize>,
}

impl From<&SpectralCertificate> for CertificateJson {
    fn from(c: &SpectralCertificate) -> Self {
        CertificateJson {
            order: c.n(),
            eigenvalues: c.eigenvalues.iter().map(ToString::to_string).collect(),
            hadamard: c.hadamard.rows(),
            column_signature: c.column_signs.clone(),
            permutation: c.permutation.iter().map(|p| p + 1).collect(),
        }
    }
}

/// Aligns `H`, extracts each eigenvalue exactly, and checks that integer weights give even
/// integer eigenvalues on a regular graph.
pub fn certify(g: &WeightedGraph, h: &HadamardMatrix) -> Result<SpectralCertificate> {
    let l = g.laplacian();
    if l.n() != h.order() {
        return Err(Error::domain(format!("graph order {} differs from Hadamard order {}", l.n(), h.order())));
    }
    let aligned = align(h)?;
    let mut eigenvalues = Vec::with_capacity(h.order());
    for j in 0..h.order() {
        let lam = column_eigenvalue(&l, &aligned.hadamard, j).ok_or_else(|| {
            Error::Certification(format!("column {} of the Hadamard matrix is not an eigenvector", aligned.permutation[j] + 1))
        })?;
        eigenvalues.push(lam);
    }
    let cert = SpectralCertificate {
        hadamard: aligned.hadamard,
        eigenvalues,
        laplacian: l,
        column_signs: aligned.column_signs,
        permutation: aligned.permutation,
    };
    check_even_regular(&cert, g)?;
    Ok(cert)
}

fn check_even_regular(cert: &SpectralCertificate, g: &WeightedGraph) -> Result<()> {
    if !cert.eigenvalues[0].is_zero() {
        return Err(Error::Internal("eigenvalue of the all-ones column is nonzero".into()));
    }
    if !g.degree_profile().is_regular() {
        return Err(Error::Internal("Hadamard-diagonalizable graph is not regular".into()));
    }
    if g.is_integer_weighted() {
        let two = BigInt::from(2);
        for lam in &cert.eigenvalues {
            if !lam.is_integer() || !lam.to_integer().is_multiple_of(&two) {
                return Err(Error::Internal(format!("integer-weighted graph has eigenvalue {lam}, not an even integer")));
            }
        }
    }
    CERTIFICATES_CHECKED.fetch_add(1, Ordering::Relaxed);
    Ok(())
}

/// Graph with Laplacian `(1/n)·H·diag(λ)·Hᵀ`; `H` must be normalized and `λ₁ = 0`.
pub fn graph_from_spectrum(h: &HadamardMatrix, eigenvalues: &[Rational]) -> Result<WeightedGraph> {
    if eigenvalues.len() != h.order() {
        return Err(Error::domain("one eigenvalue per Hadamard column is required"));
    }
    if !h.is_normalized() {
        return Err(Error::domain("Hadamard matrix must be normalized"));
    }
    if !eigenvalues[0].is_zero() {
        return Err(Error::domain("the all-ones column must carry eigenvalue 0"));
    }
    WeightedGraph::from_laplacian(&reconstruct(h, eigenvalues))
}

/// Generator of the walk: `e^{itL}` or, for the XX model, `e^{itA}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Dynamics {
    #[default]
    Laplacian,
    Adjacency,
}

/// `e^{itM} = V·diag(e^{itμ})·Vᵀ` for a real symmetric `M` with orthonormal eigenvectors `V`.
#[derive(Clone, Debug)]
pub struct Propagator {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Propagator {
    /// Uses the exact eigenpairs: eigenvectors `H/√n`, eigenvalues from the certificate.
    pub fn from_certificate(cert: &SpectralCertificate) -> Self {
        let n = cert.n();
        let s = 1.0 / (n as f64).sqrt();
        let h = cert.hadamard();
        Propagator {
            values: cert.eigenvalues().iter().map(to_f64).collect(),
            vectors: DMatrix::from_fn(n, n, |i, j| f64::from(h.get(i, j)) * s),
        }
    }

    /// Symmetric eigensolver, rejected if `‖MV − VΛ‖_F > 1e−10·‖M‖_F`.
    pub fn from_symmetric(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if n != m.ncols() {
            return Err(Error::domain("matrix is not square"));
        }
        let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
        let vectors = eig.eigenvectors;
        let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let lambda = DMatrix::from_diagonal(&eig.eigenvalues);
        let residual = (m * &vectors - &vectors * lambda).norm();
        let scale = m.norm();
        if !(residual <= EIGEN_RESIDUAL * scale) {
            return Err(Error::Numeric(format!("eigensolver residual {residual:e} exceeds {EIGEN_RESIDUAL:e}·{scale:e}")));
        }
        Ok(Propagator { values, vectors })
    }

    pub fn for_graph(g: &WeightedGraph, dynamics: Dynamics) -> Result<Self> {
        let m = match dynamics {
            Dynamics::Laplacian => g.laplacian().to_f64(),
            Dynamics::Adjacency => g.adjacency().to_f64(),
        };
        Self::from_symmetric(&m)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(e^{itM})_{jk}`, 0-based.
    pub fn amplitude(&self, t: f64, j: usize, k: usize) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (l, &mu) in self.values.iter().enumerate() {
            let c = self.vectors[(j, l)] * self.vectors[(k, l)];
            if c != 0.0 {
                acc += Complex::from_polar(c, t * mu);
            }
        }
        acc
    }

    pub fn fidelity(&self, t: f64, j: usize, k: usize) -> f64 {
        self.amplitude(t, j, k).norm_sqr()
    }

    pub fn unitary(&self, t: f64) -> DMatrix<Complex<f64>> {
        let n = self.n();
        let v = self.vectors.map(|x| Complex::new(x, 0.0));
        let phases = DMatrix::from_fn(n, n, |i, j| if i == j { Complex::from_polar(1.0, t * self.values[i]) } else { Complex::new(0.0, 0.0) });
        &v * phases * v.transpose()
    }

    fn check_vertex(&self, j: usize) -> Result<()> {
        if j < self.n() {
            Ok(())
        } else {
            Err(Error::domain(format!("vertex {} out of range 1..={}", j + 1, self.n())))
        }
    }
}

/// `|e_jᵀ e^{itL} e_k|²` through the generic eigensolver; `j`, `k` are 0-based.
pub fn evolve_fidelity(g: &WeightedGraph, t: f64, j: usize, k: usize) -> Result<f64> {
    evolve_fidelity_with(g, t, j, k, Dynamics::Laplacian)
}

pub fn evolve_fidelity_with(g: &WeightedGraph, t: f64, j: usize, k: usize, dynamics: Dynamics) -> Result<f64> {
    let p = Propagator::for_graph(g, dynamics)?;
    p.check_vertex(j)?;
    p.check_vertex(k)?;
    Ok(p.fidelity(t, j, k))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    pub t: f64,
    pub p: f64,
}

/// `steps` equally spaced samples of `p(t)` on `[0, t_max]`.
pub fn fidelity_curve(prop: &Propagator, j: usize, k: usize, t_max: f64, steps: usize) -> Result<Vec<FidelityPoint>> {
    if steps < 2 {
        return Err(Error::domain("a fidelity curve needs at least 2 steps"));
    }
    prop.check_vertex(j)?;
    prop.check_vertex(k)?;
    let dt = t_max / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let t = if i + 1 == steps { t_max } else { dt * i as f64 };
            FidelityPoint { t, p: prop.fidelity(t, j, k) }
        })
        .collect())
}

pub fn fidelity_csv(points: &[FidelityPoint]) -> String {
    let mut out = String::from("t,p\n");
    for pt in points {
        out.push_str(&format!("{:.16e},{:.16e}\n", pt.t, pt.p));
    }
    out
}

/// Largest `|λ|` among the certificate's eigenvalues.
pub fn spectral_radius(cert: &SpectralCertificate) -> Rational {
    cert.eigenvalues().iter().map(|l| l.abs()).max().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graphs::{cartesian_product, merge, MergeWeights};
    use crate::hadamard::{catalog, sylvester};
    use crate::matrix::ratio;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cube() -> WeightedGraph {
        let k2 = WeightedGraph::complete(2);
        cartesian_product(&cartesian_product(&k2, &k2), &k2)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rational(x)).collect()
    }

    /// `Hᵀ L H` computed literally.
    fn conjugated_is_diagonal(l: &QMatrix, h: &HadamardMatrix) -> bool {
        let hq = h.to_qmatrix();
        (&(&hq.transpose() * l) * &hq).is_diagonal()
    }

    #[test]
    fn diagonalization_examples() {
        let c4 = fixtures::square_graph().unwrap().laplacian();
        assert!(diagonalizes(&c4, &sylvester(2).unwrap()).unwrap());
        let l1 = fixtures::order12_graph().unwrap().laplacian();
        assert!(diagonalizes(&l1, &catalog(12).unwrap()).unwrap());
        let p4 = WeightedGraph::path(4).laplacian();
        assert!(!diagonalizes(&p4, &sylvester(2).unwrap()).unwrap());
        assert!(diagonalizes(&p4, &sylvester(3).unwrap()).is_err());
        for (l, h) in [(c4, sylvester(2).unwrap()), (l1, catalog(12).unwrap()), (p4, sylvester(2).unwrap())] {
            assert_eq!(diagonalizes(&l, &h).unwrap(), conjugated_is_diagonal(&l, &h));
        }
    }

    #[test]
    fn cube_eigenvalues_in_sylvester_order() {
        let cert = certify(&cube(), &sylvester(3).unwrap()).unwrap();
        assert_eq!(cert.eigenvalues(), ints(&[0, 2, 2, 4, 2, 4, 4, 6]).as_slice());
        assert_eq!(cert.reconstruct(), cert.laplacian().clone());
    }

    #[test]
    fn order12_merge_eigenvalues() {
        let g1 = fixtures::order12_graph().unwrap();
        let m = merge(&g1, &WeightedGraph::complete(12), &MergeWeights::new(rational(5), rational(2))).unwrap();
        let cert = certify(&m, &catalog(24).unwrap()).unwrap();
        let printed = ints(&[
            0, 54, 64, 54, 64, 64, 64, 54, 54, 54, 44, 54, 44, 50, 60, 50, 60, 60, 60, 50, 50, 50, 40, 50,
        ]);
        assert_eq!(cert.eigenvalues(), printed.as_slice());
    }

    #[test]
    fn empty_graph_has_zero_spectrum() {
        let cert = certify(&WeightedGraph::empty(4), &sylvester(2).unwrap()).unwrap();
        assert!(cert.eigenvalues().iter().all(Zero::is_zero));
    }

    #[test]
    fn certify_rejects_non_eigenvector_columns() {
        let err = certify(&WeightedGraph::path(4), &sylvester(2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Certification(_)));
    }

    #[test]
    fn align_moves_ones_column_first() {
        let h = sylvester(2).unwrap();
        let shuffled = h.recolumned(&[2, 0, 3, 1], &[-1, 1, 1, -1]);
        let a = align(&shuffled).unwrap();
        assert!(a.hadamard.is_normalized());
        assert_eq!(a.permutation[0], 1);
        let c4 = fixtures::square_graph().unwrap();
        let cert = certify(&c4, &shuffled).unwrap();
        assert_eq!(cert.eigenvalues()[0], rational(0));
        assert_eq!(cert.reconstruct(), c4.laplacian());
    }

    #[test]
    fn align_fails_without_constant_column() {
        // second row of the standard order-4 matrix negated: no column is ±(all-ones)
        let h = HadamardMatrix::from_rows(&[vec![1, 1, 1, 1], vec![-1, 1, -1, 1], vec![1, 1, -1, -1], vec![1, -1, -1, 1]]).unwrap();
        assert!(matches!(align(&h), Err(Error::Alignment(_))));
    }

    #[test]
    fn spectrum_round_trip() {
        let h = sylvester(3).unwrap();
        let lams = ints(&[0, 2, 2, 4, 2, 4, 4, 6]);
        let g = graph_from_spectrum(&h, &lams).unwrap();
        assert_eq!(g, cube());
        assert!(graph_from_spectrum(&h, &ints(&[1, 2, 2, 4, 2, 4, 4, 6])).is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = certify(&cube(), &sylvester(3).unwrap()).unwrap();
        let back = SpectralCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back.eigenvalues(), cert.eigenvalues());
        assert_eq!(back.laplacian(), cert.laplacian());
    }

    #[test]
    fn fractional_weights_give_fractional_eigenvalues() {
        let g = crate::graphs::scale(&cube(), &ratio(1, 3)).unwrap();
        let cert = certify(&g, &sylvester(3).unwrap()).unwrap();
        assert_eq!(cert.eigenvalues()[7], rational(2));
        assert_eq!(cert.eigenvalues()[1], ratio(2, 3));
        assert!(cert.integer_eigenvalues().is_err());
    }

    #[test]
    fn fidelity_examples() {
        let k2 = WeightedGraph::complete(2);
        assert!((evolve_fidelity(&k2, PI / 2.0, 0, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((evolve_fidelity(&cube(), 0.0, 3, 3).unwrap() - 1.0).abs() < 1e-12);
        assert!((evolve_fidelity(&cube(), PI / 2.0, 0, 7).unwrap() - 1.0).abs() < 1e-12);
        assert!(evolve_fidelity(&k2, 1.0, 0, 2).is_err());
    }

    #[test]
    fn curve_examples() {
        let k2 = Propagator::for_graph(&WeightedGraph::complete(2), Dynamics::Laplacian).unwrap();
        let c = fidelity_curve(&k2, 0, 1, PI, 5).unwrap();
        assert!(c[0].p.abs() < 1e-12);
        assert!((c[2].p - 1.0).abs() < 1e-12);
        assert!(c[4].p.abs() < 1e-12);
        let e2 = Propagator::for_graph(&WeightedGraph::empty(2), Dynamics::Laplacian).unwrap();
        assert!(fidelity_curve(&e2, 0, 1, PI, 3).unwrap().iter().all(|pt| pt.p.abs() < 1e-15));
        let cube = Propagator::for_graph(&cube(), Dynamics::Laplacian).unwrap();
        let c = fidelity_curve(&cube, 0, 7, PI, 9).unwrap();
        let best = c.iter().max_by(|a, b| a.p.total_cmp(&b.p)).unwrap();
        assert!((best.t - PI / 2.0).abs() < 1e-12 && (best.p - 1.0).abs() < 1e-12);
        assert!(fidelity_curve(&cube, 0, 7, PI, 1).is_err());
    }

    #[test]
    fn csv_has_header_and_full_precision() {
        let csv = fidelity_csv(&[FidelityPoint { t: 0.0, p: 1.0 / 3.0 }]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,p"));
        let row = lines.next().unwrap();
        let p: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(p, 1.0 / 3.0);
    }

    #[test]
    fn adjacency_dynamics_on_k2() {
        // e^{itA} on K2 has |(1,2)|² = sin²t
        let p = evolve_fidelity_with(&WeightedGraph::complete(2), 0.3, 0, 1, Dynamics::Adjacency).unwrap();
        assert!((p - 0.3f64.sin().powi(2)).abs() < 1e-12);
    }

    fn random_integer_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
        (2..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(0i64..=3, n * (n - 1) / 2).prop_map(move |ws| {
                let mut it = ws.into_iter();
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let w = it.next().unwrap_or(0);
                        if w != 0 {
                            edges.push((i, j, rational(w)));
                        }
                    }
                }
                WeightedGraph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn propagator_is_unitary(g in random_integer_graph(8), t in -5.0f64..5.0) {
            let u = Propagator::for_graph(&g, Dynamics::Laplacian).unwrap().unitary(t);
            let id = &u * u.adjoint();
            let n = g.n();
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((id[(i, j)] - Complex::new(expect, 0.0)).norm() < 1e-9);
                }
            }
        }

        #[test]
        fn exact_and_generic_paths_agree(k in 1u32..=4, seed in proptest::collection::vec(0i64..=4, 16), t in 0.0f64..4.0) {
            let h = sylvester(k).unwrap();
            let n = h.order();
            let mut lams: Vec<Rational> = seed.iter().take(n).map(|&x| rational(2 * x)).collect();
            lams[0] = rational(0);
            let g = graph_from_spectrum(&h, &lams).unwrap();
            let cert = certify(&g, &h).unwrap();
            prop_assert_eq!(cert.reconstruct(), g.laplacian());
            let exact = Propagator::from_certificate(&cert);
            let generic = Propagator::for_graph(&g, Dynamics::Laplacian).unwrap();
            for j in 0..n {
                for l in 0..n {
                    prop_assert!((exact.fidelity(t, j, l) - generic.fidelity(t, j, l)).abs() < 1e-8);
                }
            }
        }
    }
}
