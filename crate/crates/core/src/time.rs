//! Evolution times held exactly as rational multiples of π.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{parse_rational, ratio, to_f64, Rational};

/// `coefficient · π`. Floating π is introduced only by [`PiMultiple::to_f64`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiMultiple(pub Rational);

impl PiMultiple {
    pub fn new(coefficient: Rational) -> Self {
        PiMultiple(coefficient)
    }

    /// π/2, the time at which every mod-4 criterion is stated.
    pub fn half() -> Self {
        PiMultiple(ratio(1, 2))
    }

    pub fn coefficient(&self) -> &Rational {
        &self.0
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        PiMultiple(&self.0 * c)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0) * std::f64::consts::PI
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * pi", self.0)
    }
}

impl FromStr for PiMultiple {
    type Err = Error;

    /// Accepts `1/2pi`, `1/2 * pi`, `3pi`, `pi`, and `pi/4`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("pi") {
            if rest.is_empty() {
                return Ok(PiMultiple(Rational::one()));
            }
            if let Some(den) = rest.strip_prefix('/') {
                let d = parse_rational(den)?;
                if d == Rational::from_integer(0.into()) {
                    return Err(Error::parse("zero denominator in time"));
                }
                return Ok(PiMultiple(Rational::one() / d));
            }
            return Err(Error::parse(format!("cannot read time {s:?}")));
        }
        let coeff = lower
            .strip_suffix("*pi")
            .or_else(|| lower.strip_suffix("pi"))
            .ok_or_else(|| Error::parse(format!("time {s:?} must be a rational multiple of pi, e.g. 1/2pi")))?;
        let c = if coeff.is_empty() {
            Rational::one()
        } else if coeff == "-" {
            -Rational::one()
        } else {
            parse_rational(coeff)?
        };
        Ok(PiMultiple(c))
    }
}

impl Serialize for PiMultiple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PiMultiple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flag_forms() {
        assert_eq!("1/2pi".parse::<PiMultiple>().unwrap(), PiMultiple::half());
        assert_eq!("1/2 * pi".parse::<PiMultiple>().unwrap(), PiMultiple::half());
        assert_eq!("pi/2".parse::<PiMultiple>().unwrap(), PiMultiple::half());
        assert_eq!("pi".parse::<PiMultiple>().unwrap().0, Rational::one());
        assert_eq!("3pi".parse::<PiMultiple>().unwrap().0, ratio(3, 1));
        assert!("0.5".parse::<PiMultiple>().is_err());
    }

    #[test]
    fn display_round_trips() {
        let t = PiMultiple(ratio(3, 8));
        assert_eq!(t.to_string(), "3/8 * pi");
        assert_eq!(t.to_string().parse::<PiMultiple>().unwrap(), t);
    }
}
