use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::merge::{MergeCase, MergeSpectra};
use super::quadratic::{pgst_approximants, ParityClass, QuadraticIrrational};
use crate::analysis::fidelity_perturbation_bound;
use crate::error::{Error, Result};
use crate::graphs::{merge, MergeWeights};
use crate::matrix::{parse_rational, to_f64, Rational};
use crate::spectral::{Propagator, SpectralCertificate};
use crate::time::PiMultiple;

/// A merge weight: an exact rational or a quadratic irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MergeWeight {
    Rational(Rational),
    Quadratic(QuadraticIrrational),
}

impl MergeWeight {
    pub fn to_f64(&self) -> f64 {
        match self {
            MergeWeight::Rational(r) => to_f64(r),
            MergeWeight::Quadratic(q) => q.to_f64(),
        }
    }
}

impl FromStr for MergeWeight {
    type Err = Error;

    /// `sqrt`/`√` forms are quadratic; anything else is read as a rational `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        if s.contains("sqrt") || s.contains('√') {
            let q: QuadraticIrrational = s.parse()?;
            if q.is_rational() {
                let (a, _, c, _) = q.parts();
                return Ok(MergeWeight::Rational(Rational::new(a.clone(), c.clone())));
            }
            Ok(MergeWeight::Quadratic(q))
        } else {
            Ok(MergeWeight::Rational(parse_rational(s)?))
        }
    }
}

/// One approximant `u/v` and the transfer quality it predicts.
#[derive(Clone, Debug, PartialEq)]
pub struct PgstPoint {
    pub u: BigInt,
    pub v: BigInt,
    pub class: ParityClass,
    pub case: MergeCase,
    /// Evaluation time for the original weights.
    pub time: PiMultiple,
    pub fidelity: f64,
    /// Upper estimate `x` of `‖t₀L₅‖` through the maximum absolute row sum.
    pub perturbation_norm: f64,
    /// `1 − (2x + x² − x³)`.
    pub lower_bound: f64,
}

impl PgstPoint {
    /// The cubic is only increasing for small `x`; past `x = 1` the value says nothing.
    pub fn bound_is_informative(&self) -> bool {
        self.perturbation_norm < 1.0 && self.lower_bound > 0.0
    }
}

/// Splits a nonzero rational `a/b` with `a = 2^e·k`, `k` odd, into `(k, b/2^e)`.
fn odd_part(r: &Rational) -> Result<(BigInt, Rational)> {
    if r.is_zero() {
        return Err(Error::domain("the rational merge weight must be nonzero"));
    }
    let a = r.numer();
    let e = a.trailing_zeros().unwrap_or(0);
    let e32 = u32::try_from(e).map_err(|_| Error::Capacity("weight too large".into()))?;
    let k = a >> e32;
    let s = Rational::new(r.denom().clone(), BigInt::one() << e32);
    Ok((k, s))
}

/// Approximants of the irrational weight that drive `G₁ ⊙ G₂` towards PST between `p` and `q`
/// (0-based on the `2n` merged vertices), with oracle fidelities on the true irrational weights.
pub fn pgst_sequence(
    cert1: &SpectralCertificate,
    cert2: &SpectralCertificate,
    w1: &MergeWeight,
    w2: &MergeWeight,
    p: usize,
    q: usize,
    count: usize,
) -> Result<Vec<PgstPoint>> {
    let spectra = MergeSpectra::new(cert1, cert2)?;
    let n = spectra.n();
    if p >= 2 * n || q >= 2 * n || p == q {
        return Err(Error::domain("target pair must be two distinct merged vertices"));
    }
    let (rational, irrational, irrational_second) = match (w1, w2) {
        (MergeWeight::Rational(_), MergeWeight::Rational(_)) => {
            return Err(Error::domain("both weights are rational; use the exact merge decision instead"))
        }
        (MergeWeight::Quadratic(_), MergeWeight::Quadratic(_)) => {
            return Err(Error::Unsupported("both merge weights irrational".into()))
        }
        (MergeWeight::Rational(r), MergeWeight::Quadratic(x)) => (r, x, true),
        (MergeWeight::Quadratic(x), MergeWeight::Rational(r)) => (r, x, false),
    };
    // w_rational = k/s with k odd, so v·k has the parity of v; the scaled irrational weight is x·s
    let (_, s) = odd_part(rational)?;
    let x = irrational.scaled(&s);

    // merged integer weights are (v·k, u) or (u, v·k)
    let parities = |cls: ParityClass| {
        if irrational_second {
            (cls.v_odd(), cls.u_odd())
        } else {
            (cls.u_odd(), cls.v_odd())
        }
    };
    let (class, case) = ParityClass::ALL
        .iter()
        .find_map(|&cls| {
            let (o1, o2) = parities(cls);
            spectra.case_for(o1, o2, p, q).map(|c| (cls, c))
        })
        .ok_or_else(|| Error::Hypothesis(format!("no parity class makes ({}, {}) a transfer pair of the merge", p + 1, q + 1)))?;

    let g1 = cert1.graph();
    let g2 = cert2.graph();
    let part1 = merge(&g1, &g2, &MergeWeights::new(Rational::one(), Rational::zero()))?.laplacian();
    let part2 = merge(&g1, &g2, &MergeWeights::new(Rational::zero(), Rational::one()))?.laplacian();
    let true_laplacian = part1.to_f64() * w1.to_f64() + part2.to_f64() * w2.to_f64();
    let prop = Propagator::from_symmetric(&true_laplacian)?;
    let perturbed_norm = to_f64(&if irrational_second { part2 } else { part1 }.max_abs_row_sum());
    let xf = x.to_f64();

    let mut out = Vec::with_capacity(count);
    for (u, v) in pgst_approximants(&x, class, count)? {
        let vf = v.to_f64().unwrap_or(f64::INFINITY);
        let uf = u.to_f64().unwrap_or(f64::INFINITY);
        let t0 = vf * std::f64::consts::FRAC_PI_2;
        let norm = t0 * (xf - uf / vf).abs() * perturbed_norm;
        let time = PiMultiple::new(Rational::new(v.clone(), BigInt::from(2)) * &s);
        let fidelity = prop.fidelity(time.to_f64(), p, q);
        out.push(PgstPoint {
            u,
            v,
            class,
            case,
            time,
            fidelity,
            perturbation_norm: norm,
            lower_bound: 1.0 - fidelity_perturbation_bound(norm),
        });
    }
    Ok(out)
}
