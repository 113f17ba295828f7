use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Rational;

/// Default number of convergents and semiconvergents examined before giving up.
pub const DEFAULT_SCAN: usize = 1_000_000;

/// `(a + b√d)/c` with `c > 0`, `d` squarefree, and `gcd(a, b, c) = 1`. Rational values are
/// stored with `b = 0`, `d = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticIrrational {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        if !d.is_positive() {
            return Err(Error::domain("radicand must be positive"));
        }
        let (s, core) = square_split(&d);
        let (mut a, mut b, mut c, mut d) = (a, b * s, c, core);
        if d.is_one() || b.is_zero() {
            a += &b;
            b = BigInt::zero();
            d = BigInt::one();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(QuadraticIrrational { a, b, c, d })
    }

    pub fn sqrt(d: u64) -> Result<Self> {
        Self::new(BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::from(d))
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        (f(&self.a) + f(&self.b) * f(&self.d).sqrt()) / f(&self.c)
    }

    /// `self · r`.
    pub fn scaled(&self, r: &Rational) -> Self {
        Self::new(&self.a * r.numer(), &self.b * r.numer(), &self.c * r.denom(), self.d.clone())
            .expect("nonzero denominators")
    }

    /// `|self − u/v| < 1/v²`, decided with integers only.
    pub fn within_inverse_square(&self, u: &BigInt, v: &BigInt) -> bool {
        if !v.is_positive() || self.is_rational() {
            return false;
        }
        // |(a v − c u)·v + b v²·√d| < c
        let x = (&self.a * v - &self.c * u) * v;
        let y = &self.b * v * v;
        let upper = &self.c - &x;
        let lower = -&self.c - &x;
        sqrt_lt(&y, &self.d, &upper) && !sqrt_lt(&y, &self.d, &lower)
    }

    pub fn continued_fraction(&self) -> Result<ContinuedFraction> {
        ContinuedFraction::new(self)
    }
}

/// `y·√d < z` for non-square `d` and `y ≠ 0`.
fn sqrt_lt(y: &BigInt, d: &BigInt, z: &BigInt) -> bool {
    let lhs = y * y * d;
    let rhs = z * z;
    match (y.is_positive(), z.is_positive()) {
        (true, true) => lhs < rhs,
        (true, false) => false,
        (false, true) => true,
        (false, false) => lhs > rhs,
    }
}

/// `d = s²·core` with `core` squarefree.
fn square_split(d: &BigInt) -> (BigInt, BigInt) {
    let mut core = d.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= core {
        let pp = &p * &p;
        while (&core % &pp).is_zero() {
            core /= &pp;
            s *= &p;
        }
        p += 1;
    }
    (s, core)
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = String::new();
        if !self.a.is_zero() || self.b.is_zero() {
            num.push_str(&self.a.to_string());
        }
        if !self.b.is_zero() {
            let mag = self.b.abs();
            if self.b.is_negative() {
                num.push('-');
            } else if !num.is_empty() {
                num.push('+');
            }
            if !mag.is_one() {
                num.push_str(&format!("{mag}*"));
            }
            num.push_str(&format!("sqrt({})", self.d));
        }
        if self.c.is_one() {
            f.write_str(&num)
        } else if self.b.is_zero() || self.a.is_zero() && !self.b.is_negative() {
            write!(f, "{num}/{}", self.c)
        } else {
            write!(f, "({num})/{}", self.c)
        }
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse().map_err(|_| Error::parse(format!("not an integer: {s:?}")))
}

fn strip_outer_parens(s: &str) -> &str {
    if !(s.starts_with('(') && s.ends_with(')')) {
        return s;
    }
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 != s.len() {
                    return s;
                }
            }
            _ => {}
        }
    }
    &s[1..s.len() - 1]
}

impl FromStr for QuadraticIrrational {
    type Err = Error;

    /// Accepts `sqrt(2)`, `√2`, `-3*sqrt(7)`, `1+sqrt5`, `(1+sqrt(5))/2`, and plain integers.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.replace('√', "sqrt");
        let (num, den) = match t.rfind('/') {
            Some(i) if t[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < t.len() => (&t[..i], parse_int(&t[i + 1..])?),
            _ => (t.as_str(), BigInt::one()),
        };
        let num = strip_outer_parens(num);
        let Some(pos) = num.find("sqrt") else {
            return Self::new(parse_int(num)?, BigInt::zero(), den, BigInt::one());
        };
        let radicand = num[pos + 4..].trim_start_matches('(').trim_end_matches(')');
        let d = parse_int(radicand)?;
        let prefix = num[..pos].trim_end_matches('*');
        let split = prefix.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (a_text, coeff) = match split {
            Some(i) => (&prefix[..i], &prefix[i..]),
            None => ("", prefix),
        };
        let a = if a_text.is_empty() { BigInt::zero() } else { parse_int(a_text)? };
        let b = match coeff {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            c => parse_int(c.trim_start_matches('+'))?,
        };
        Self::new(a, b, den, d)
    }
}

/// Partial quotients of `(P + √D)/Q`, produced with integer arithmetic only.
#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    root: BigInt,
}

impl ContinuedFraction {
    fn new(x: &QuadraticIrrational) -> Result<Self> {
        if x.is_rational() {
            return Err(Error::domain("continued fraction of a rational value is finite; an irrational weight is required"));
        }
        let (a, b, c, d) = x.parts();
        let mut dd = b * b * d;
        let (mut p, mut q) = if b.is_positive() { (a.clone(), c.clone()) } else { (-a, -c) };
        if !((&dd - &p * &p) % &q).is_zero() {
            let qa = q.abs();
            p *= &qa;
            dd *= &q * &q;
            q *= &qa;
        }
        let root = dd.sqrt();
        Ok(ContinuedFraction { p, q, d: dd, root })
    }
}

impl Iterator for ContinuedFraction {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let top = if self.q.is_positive() { &self.p + &self.root } else { &self.p + &self.root + 1 };
        let a = top.div_floor(&self.q);
        let p_next = &a * &self.q - &self.p;
        let q_next = (&self.d - &p_next * &p_next) / &self.q;
        self.p = p_next;
        self.q = q_next;
        Some(a)
    }
}

/// Parities of `(u, v)` in an approximant `u/v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParityClass {
    OddEven,
    EvenOdd,
    OddOdd,
}

impl ParityClass {
    pub const ALL: [ParityClass; 3] = [ParityClass::EvenOdd, ParityClass::OddOdd, ParityClass::OddEven];

    pub fn of(u: &BigInt, v: &BigInt) -> Option<Self> {
        match (u.is_odd(), v.is_odd()) {
            (true, false) => Some(ParityClass::OddEven),
            (false, true) => Some(ParityClass::EvenOdd),
            (true, true) => Some(ParityClass::OddOdd),
            (false, false) => None,
        }
    }

    pub fn u_odd(self) -> bool {
        !matches!(self, ParityClass::EvenOdd)
    }

    pub fn v_odd(self) -> bool {
        !matches!(self, ParityClass::OddEven)
    }
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityClass::OddEven => "[o,e]",
            ParityClass::EvenOdd => "[e,o]",
            ParityClass::OddOdd => "[o,o]",
        })
    }
}

impl FromStr for ParityClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| c.is_ascii_alphabetic()).collect::<String>().to_ascii_lowercase();
        match t.as_str() {
            "oe" => Ok(ParityClass::OddEven),
            "eo" => Ok(ParityClass::EvenOdd),
            "oo" => Ok(ParityClass::OddOdd),
            _ => Err(Error::parse(format!("parity class must be [o,e], [e,o] or [o,o], got {s:?}"))),
        }
    }
}

/// Convergents and semiconvergents of `x` in increasing denominator order.
struct Semiconvergents {
    cf: ContinuedFraction,
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
    pending: Option<(BigInt, BigInt)>,
    next_a: BigInt,
    m: BigInt,
}

impl Semiconvergents {
    fn new(x: &QuadraticIrrational) -> Result<Self> {
        let mut cf = x.continued_fraction()?;
        let a0 = cf.next().expect("infinite expansion");
        let a1 = cf.next().expect("infinite expansion");
        Ok(Semiconvergents {
            cf,
            prev: (BigInt::one(), BigInt::zero()),
            cur: (a0.clone(), BigInt::one()),
            pending: Some((a0, BigInt::one())),
            next_a: a1,
            m: BigInt::one(),
        })
    }
}

impl Iterator for Semiconvergents {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<(BigInt, BigInt)> {
        if let Some(first) = self.pending.take() {
            return Some(first);
        }
        let u = &self.prev.0 + &self.m * &self.cur.0;
        let v = &self.prev.1 + &self.m * &self.cur.1;
        if self.m == self.next_a {
            self.prev = std::mem::replace(&mut self.cur, (u.clone(), v.clone()));
            self.next_a = self.cf.next().expect("infinite expansion");
            self.m = BigInt::one();
        } else {
            self.m += 1;
        }
        Some((u, v))
    }
}

/// `count` coprime approximants `u/v` of class `cls` with `|w − u/v| < 1/v²`, `v` increasing.
pub fn pgst_approximants(w: &QuadraticIrrational, cls: ParityClass, count: usize) -> Result<Vec<(BigInt, BigInt)>> {
    pgst_approximants_within(w, cls, count, DEFAULT_SCAN)
}

/// As [`pgst_approximants`], examining at most `max_scanned` candidates.
pub fn pgst_approximants_within(
    w: &QuadraticIrrational,
    cls: ParityClass,
    count: usize,
    max_scanned: usize,
) -> Result<Vec<(BigInt, BigInt)>> {
    let mut found = Vec::with_capacity(count);
    if count == 0 {
        return Ok(found);
    }
    let mut scanned = 0;
    for (u, v) in Semiconvergents::new(w)? {
        if scanned >= max_scanned {
            return Err(Error::Horizon {
                found,
                wanted: count,
                scanned,
            });
        }
        scanned += 1;
        if ParityClass::of(&u, &v) != Some(cls) || !u.gcd(&v).is_one() || !w.within_inverse_square(&u, &v) {
            continue;
        }
        found.push((u, v));
        if found.len() == count {
            break;
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(a, b)| (BigInt::from(a), BigInt::from(b))).collect()
    }

    fn terms(x: &QuadraticIrrational, k: usize) -> Vec<i64> {
        x.continued_fraction().unwrap().take(k).map(|a| a.to_i64().unwrap()).collect()
    }

    #[test]
    fn parse_and_display() {
        let phi: QuadraticIrrational = "(1+sqrt(5))/2".parse().unwrap();
        assert_eq!(phi.to_string(), "(1+sqrt(5))/2");
        assert_eq!(phi.to_string().parse::<QuadraticIrrational>().unwrap(), phi);
        assert_eq!("√2".parse::<QuadraticIrrational>().unwrap(), QuadraticIrrational::sqrt(2).unwrap());
        assert_eq!("sqrt(8)".parse::<QuadraticIrrational>().unwrap().to_string(), "2*sqrt(2)");
        assert_eq!("3-2*sqrt(7)".parse::<QuadraticIrrational>().unwrap().to_string(), "3-2*sqrt(7)");
        assert_eq!("-sqrt(3)".parse::<QuadraticIrrational>().unwrap().to_string(), "-sqrt(3)");
        assert_eq!("sqrt(3)/3".parse::<QuadraticIrrational>().unwrap().to_string(), "sqrt(3)/3");
        assert!("sqrt(9)".parse::<QuadraticIrrational>().unwrap().is_rational());
        assert!("sqrt(x)".parse::<QuadraticIrrational>().is_err());
    }

    #[test]
    fn known_expansions() {
        assert_eq!(terms(&QuadraticIrrational::sqrt(2).unwrap(), 6), vec![1, 2, 2, 2, 2, 2]);
        assert_eq!(terms(&"(1+sqrt(5))/2".parse().unwrap(), 6), vec![1, 1, 1, 1, 1, 1]);
        assert_eq!(terms(&QuadraticIrrational::sqrt(7).unwrap(), 9), vec![2, 1, 1, 1, 4, 1, 1, 1, 4]);
        assert_eq!(terms(&"-sqrt(2)".parse().unwrap(), 4), vec![-2, 1, 1, 2]);
        assert_eq!(terms(&"(3+sqrt(2))/7".parse().unwrap(), 1), vec![0]);
    }

    #[test]
    fn sqrt2_classes() {
        let r2 = QuadraticIrrational::sqrt(2).unwrap();
        assert_eq!(pgst_approximants(&r2, ParityClass::EvenOdd, 4).unwrap(), pairs(&[(2, 1), (4, 3), (10, 7), (24, 17)]));
        assert_eq!(pgst_approximants(&r2, ParityClass::OddEven, 3).unwrap(), pairs(&[(3, 2), (17, 12), (99, 70)]));
        assert_eq!(pgst_approximants(&r2, ParityClass::OddOdd, 3).unwrap(), pairs(&[(1, 1), (7, 5), (41, 29)]));
    }

    #[test]
    fn golden_ratio_odd_odd() {
        let phi: QuadraticIrrational = "(1+sqrt(5))/2".parse().unwrap();
        let got = pgst_approximants(&phi, ParityClass::OddOdd, 3).unwrap();
        assert!(got.contains(&(BigInt::from(5), BigInt::from(3))));
        assert!(!got.contains(&(BigInt::from(13), BigInt::from(8))));
    }

    #[test]
    fn rational_weight_rejected() {
        let r: QuadraticIrrational = "3/2".parse().unwrap();
        assert!(matches!(pgst_approximants(&r, ParityClass::OddOdd, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn horizon_reports_partial_results() {
        let r2 = QuadraticIrrational::sqrt(2).unwrap();
        match pgst_approximants_within(&r2, ParityClass::EvenOdd, 100, 10) {
            Err(Error::Horizon { found, wanted, scanned }) => {
                assert_eq!(wanted, 100);
                assert_eq!(scanned, 10);
                assert!(!found.is_empty());
            }
            other => panic!("expected horizon error, got {other:?}"),
        }
    }

    /// Brute-force oracle: every u/v with v ≤ 60 satisfying the bound, filtered by class.
    fn brute_force(w: f64, x: &QuadraticIrrational, cls: ParityClass, vmax: i64) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::new();
        for v in 1..=vmax {
            let centre = (w * v as f64).round() as i64;
            for u in centre - 2..=centre + 2 {
                let (bu, bv) = (BigInt::from(u), BigInt::from(v));
                if bu.gcd(&bv).is_one() && ParityClass::of(&bu, &bv) == Some(cls) && x.within_inverse_square(&bu, &bv) {
                    out.push((bu, bv));
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn scan_matches_brute_force(a in -5i64..=5, b in 1i64..=3, c in 1i64..=4, d in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 11, 13])) {
            let x = QuadraticIrrational::new(a.into(), b.into(), c.into(), d.into()).unwrap();
            for cls in ParityClass::ALL {
                let brute = brute_force(x.to_f64(), &x, cls, 60);
                let scan: Vec<_> = pgst_approximants_within(&x, cls, brute.len() + 1, 2_000)
                    .unwrap_or_else(|e| match e { Error::Horizon { found, .. } => found, e => panic!("{e}") })
                    .into_iter()
                    .filter(|(_, v)| *v <= BigInt::from(60))
                    .collect();
                prop_assert_eq!(scan, brute);
            }
        }

        #[test]
        fn approximants_satisfy_float_bound(d in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
            let x = QuadraticIrrational::sqrt(d).unwrap();
            for cls in ParityClass::ALL {
                for (u, v) in pgst_approximants(&x, cls, 4).unwrap() {
                    let (uf, vf) = (u.to_f64().unwrap(), v.to_f64().unwrap());
                    prop_assert!((x.to_f64() - uf / vf).abs() < 1.0 / (vf * vf) + 1e-12);
                }
            }
        }
    }
}
