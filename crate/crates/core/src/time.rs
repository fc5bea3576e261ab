//! Times written as multiples of `2π`, and parsing of user time expressions.

use std::fmt;
use std::f64::consts::TAU;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `t = 2π·turns / √radicand`; `radicand = 1` for rational multiples of `2π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicTime {
    pub turns: Ratio<i64>,
    pub radicand: u64,
}

impl SymbolicTime {
    pub fn turns(turns: Ratio<i64>) -> Self {
        SymbolicTime { turns, radicand: 1 }
    }

    /// `π / 2^k`
    pub fn pi_over_pow2(k: u32) -> Self {
        Self::turns(Ratio::new(1, 1i64 << (k + 1)))
    }

    pub fn value(&self) -> f64 {
        TAU * (*self.turns.numer() as f64) / (*self.turns.denom() as f64) / (self.radicand as f64).sqrt()
    }
}

impl fmt::Display for SymbolicTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // t = π·(2·turns)·√r / r
        let coef = self.turns * 2 / Ratio::from_integer(self.radicand as i64);
        if coef.is_zero() {
            return write!(f, "0");
        }
        let n = *coef.numer();
        let d = *coef.denom();
        match n {
            1 => write!(f, "pi")?,
            -1 => write!(f, "-pi")?,
            _ => write!(f, "{n}pi")?,
        }
        if self.radicand != 1 {
            write!(f, "*sqrt({})", self.radicand)?;
        }
        if d != 1 {
            write!(f, "/{d}")?;
        }
        Ok(())
    }
}

impl Serialize for SymbolicTime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SymbolicTime", 4)?;
        st.serialize_field("turns", &[*self.turns.numer(), *self.turns.denom()])?;
        st.serialize_field("radicand", &self.radicand)?;
        st.serialize_field("expr", &self.to_string())?;
        st.serialize_field("value", &self.value())?;
        st.end()
    }
}

/// A parsed `--time` argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeExpr {
    pub value: f64,
    pub exact: Option<SymbolicTime>,
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.parse().map_err(|_| bad())?;
            let d: i64 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(n, d))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Accepts `pi/2`, `3pi/4`, `3/4 pi`, `2*pi/3`, `π`, and plain floats.
pub fn parse_time(input: &str) -> Result<TimeExpr> {
    let cleaned: String = input
        .trim()
        .to_lowercase()
        .replace('π', "pi")
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*')
        .collect();
    let t = if let Some((left, right)) = cleaned.split_once("pi") {
        let mut coef = match left {
            "" => Ratio::one(),
            "-" => -Ratio::<i64>::one(),
            _ => parse_ratio(left)?,
        };
        if !right.is_empty() {
            let d = right
                .strip_prefix('/')
                .ok_or_else(|| Error::Parse(format!("invalid time '{input}'")))?;
            let d = parse_ratio(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("invalid time '{input}'")));
            }
            coef /= d;
        }
        let exact = SymbolicTime::turns(coef / 2);
        TimeExpr {
            value: exact.value(),
            exact: Some(exact),
        }
    } else {
        let value: f64 = cleaned
            .parse()
            .map_err(|_| Error::Parse(format!("invalid time '{input}'")))?;
        TimeExpr { value, exact: None }
    };
    if !t.value.is_finite() || t.value < 0.0 {
        return Err(Error::Precondition(format!("time must be finite and non-negative, got '{input}'")));
    }
    Ok(t)
}
