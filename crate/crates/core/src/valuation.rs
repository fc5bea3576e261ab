//! The 2-adic valuation `ν₂(2^l·a/b) = l` for odd `a`, `b`, with `ν₂(0) = ∞`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoAdicVal {
    Finite(i64),
    Infinite,
}

impl TwoAdicVal {
    pub fn finite(self) -> Option<i64> {
        match self {
            TwoAdicVal::Finite(k) => Some(k),
            TwoAdicVal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == TwoAdicVal::Infinite
    }
}

impl Ord for TwoAdicVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TwoAdicVal::Finite(a), TwoAdicVal::Finite(b)) => a.cmp(b),
            (TwoAdicVal::Finite(_), TwoAdicVal::Infinite) => Ordering::Less,
            (TwoAdicVal::Infinite, TwoAdicVal::Finite(_)) => Ordering::Greater,
            (TwoAdicVal::Infinite, TwoAdicVal::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for TwoAdicVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for TwoAdicVal {
    type Output = TwoAdicVal;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (TwoAdicVal::Finite(a), TwoAdicVal::Finite(b)) => TwoAdicVal::Finite(a + b),
            _ => TwoAdicVal::Infinite,
        }
    }
}

impl fmt::Display for TwoAdicVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoAdicVal::Finite(k) => write!(f, "{k}"),
            TwoAdicVal::Infinite => write!(f, "inf"),
        }
    }
}

/// `null` for `∞`, otherwise the integer.
impl Serialize for TwoAdicVal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.finite().serialize(s)
    }
}

pub fn nu2_int(n: i64) -> TwoAdicVal {
    if n == 0 {
        TwoAdicVal::Infinite
    } else {
        TwoAdicVal::Finite(n.trailing_zeros() as i64)
    }
}

pub fn nu2(q: Ratio<i64>) -> TwoAdicVal {
    if *q.numer() == 0 {
        return TwoAdicVal::Infinite;
    }
    TwoAdicVal::Finite(q.numer().trailing_zeros() as i64 - q.denom().trailing_zeros() as i64)
}

/// The odd part of `|n|`.
pub fn odd_part(n: i64) -> i64 {
    if n == 0 {
        0
    } else {
        (n >> n.trailing_zeros()).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(nu2(Ratio::from_integer(12)), TwoAdicVal::Finite(2));
        assert_eq!(nu2(Ratio::from_integer(0)), TwoAdicVal::Infinite);
        assert_eq!(nu2(Ratio::new(3, 8)), TwoAdicVal::Finite(-3));
        assert_eq!(nu2(Ratio::new(-20, 3)), TwoAdicVal::Finite(2));
        assert_eq!(nu2_int(-48), TwoAdicVal::Finite(4));
        assert_eq!(odd_part(-48), 3);
        assert!(TwoAdicVal::Finite(100) < TwoAdicVal::Infinite);
    }

    fn rational() -> impl Strategy<Value = Ratio<i64>> {
        (-5000i64..5000, 1i64..5000).prop_map(|(n, d)| Ratio::new(n, d))
    }

    proptest! {
        #[test]
        fn product_rule(a in rational(), b in rational()) {
            prop_assert_eq!(nu2(a * b), nu2(a) + nu2(b));
        }

        #[test]
        fn ultrametric(a in rational(), b in rational()) {
            let (va, vb) = (nu2(a), nu2(b));
            let vs = nu2(a + b);
            prop_assert!(vs >= va.min(vb));
            if va != vb {
                prop_assert_eq!(vs, va.min(vb));
            }
        }
    }
}
