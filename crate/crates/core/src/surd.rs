//! Exact real numbers of the form `Σ c_Δ·√Δ` with rational `c_Δ` and
//! squarefree `Δ`, enough to hold differences of quadratic integers.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// `Σ c_Δ·√Δ`; the key `1` holds the rational part. No zero coefficients
/// are stored, so equal numbers have equal maps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Surd(BTreeMap<u64, Ratio<i64>>);

impl Surd {
    pub fn zero() -> Self {
        Surd(BTreeMap::new())
    }

    pub fn rational(r: Ratio<i64>) -> Self {
        Surd::term(1, r)
    }

    /// `c·√Δ` for squarefree `Δ`.
    pub fn term(radicand: u64, c: Ratio<i64>) -> Self {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(radicand, c);
        }
        Surd(map)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Ratio<i64>)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn value(&self) -> f64 {
        self.terms()
            .map(|(k, c)| (*c.numer() as f64 / *c.denom() as f64) * (k as f64).sqrt())
            .sum()
    }

    /// `r` with `self = r·other`, if such a rational exists.
    pub fn ratio_to(&self, other: &Surd) -> Option<Ratio<i64>> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Ratio::zero());
        }
        if self.0.len() != other.0.len() || self.0.keys().ne(other.0.keys()) {
            return None;
        }
        let mut ratios = self.0.values().zip(other.0.values()).map(|(a, b)| a / b);
        let first = ratios.next()?;
        ratios.all(|r| r == first).then_some(first)
    }

    /// `(Δ, c)` when the number is `c·√Δ`.
    pub fn single_term(&self) -> Option<(u64, Ratio<i64>)> {
        if self.0.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }
}

impl std::ops::Add<&Surd> for &Surd {
    type Output = Surd;

    fn add(self, rhs: &Surd) -> Surd {
        let mut map = self.0.clone();
        for (&k, &v) in &rhs.0 {
            let entry = map.entry(k).or_insert_with(Ratio::zero);
            *entry += v;
            if entry.is_zero() {
                map.remove(&k);
            }
        }
        Surd(map)
    }
}

impl std::ops::Neg for &Surd {
    type Output = Surd;

    fn neg(self) -> Surd {
        Surd(self.0.iter().map(|(&k, &v)| (k, -v)).collect())
    }
}

impl std::ops::Sub<&Surd> for &Surd {
    type Output = Surd;

    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.abs();
            write!(f, "{sign}")?;
            match (k, mag == Ratio::from_integer(1)) {
                (1, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "sqrt({k})")?,
                (_, false) => write!(f, "{mag}*sqrt({k})")?,
            }
        }
        Ok(())
    }
}

/// `d = f²·Δ` with `Δ` squarefree; returns `(f, Δ)`.
pub fn squarefree_decompose(mut d: u64) -> (u64, u64) {
    if d == 0 {
        return (0, 1);
    }
    let mut f = 1;
    let mut core = 1;
    let mut p = 2;
    while p * p <= d {
        let mut e = 0;
        while d % p == 0 {
            d /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    (f, core * d)
}

/// A real root of `z² - trace·z + norm` with integer coefficients:
/// `(trace + sign·√(trace² - 4·norm)) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticInteger {
    pub trace: i64,
    pub norm: i64,
    /// `+1` or `-1`; `0` when the discriminant vanishes.
    pub sign: i8,
}

impl QuadraticInteger {
    pub fn integer(n: i64) -> Self {
        QuadraticInteger {
            trace: 2 * n,
            norm: n * n,
            sign: 0,
        }
    }

    pub fn discriminant(&self) -> i64 {
        self.trace * self.trace - 4 * self.norm
    }

    pub fn to_surd(&self) -> Surd {
        let half = Ratio::new(self.trace, 2);
        let (f, core) = squarefree_decompose(self.discriminant() as u64);
        let root = Surd::term(core, Ratio::new(self.sign as i64 * f as i64, 2));
        &Surd::rational(half) + &root
    }

    pub fn value(&self) -> f64 {
        (self.trace as f64 + self.sign as f64 * (self.discriminant() as f64).sqrt()) / 2.0
    }

    /// The root of `z² - trace·z + norm` nearest to `approx`, if the
    /// discriminant is non-negative.
    pub fn nearest_root(trace: i64, norm: i64, approx: f64) -> Option<Self> {
        let d = trace.checked_mul(trace)?.checked_sub(norm.checked_mul(4)?)?;
        if d < 0 {
            return None;
        }
        let sign = if d == 0 {
            0
        } else if 2.0 * approx >= trace as f64 {
            1
        } else {
            -1
        };
        Some(QuadraticInteger { trace, norm, sign })
    }
}

/// Recognises `value` as an algebraic integer of degree at most two whose
/// conjugate is also in `spectrum`. Candidates for the conjugate are the
/// spectrum itself, so the search is finite.
pub fn recognize(value: f64, spectrum: &[f64], tol: f64) -> Option<QuadraticInteger> {
    let nearest = value.round();
    if (value - nearest).abs() < tol {
        return Some(QuadraticInteger::integer(nearest as i64));
    }
    for &other in spectrum {
        let trace = (value + other).round();
        let norm = (value * other).round();
        if (value + other - trace).abs() >= tol || (value * other - norm).abs() >= tol * norm.abs().max(1.0) {
            continue;
        }
        let q = QuadraticInteger::nearest_root(trace as i64, norm as i64, value)?;
        if q.sign != 0 && (q.value() - value).abs() < tol {
            return Some(q);
        }
    }
    None
}
