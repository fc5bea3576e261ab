//! Finite abelian groups presented as products of cyclic groups.
//!
//! A group is stored as its list of cyclic factor sizes `(n_1, ..., n_k)` in
//! the order the caller gave them; no normal form is imposed. Elements are
//! exponent vectors reduced componentwise, and the group operation is written
//! multiplicatively in the API even though it is addition of exponents.
//!
//! Elements are enumerated lexicographically on their exponent vectors (the
//! first factor is the most significant digit). That order is part of the
//! public contract: it fixes the row order of every adjacency and transfer
//! matrix built on top of the group.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: usize,
    exponent: u64,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    factors: Vec<u64>,
}

impl TryFrom<GroupRepr> for AbelianGroup {
    type Error = Error;

    fn try_from(repr: GroupRepr) -> Result<Self> {
        AbelianGroup::new(repr.factors)
    }
}

impl From<AbelianGroup> for GroupRepr {
    fn from(group: AbelianGroup) -> Self {
        GroupRepr {
            factors: group.factors,
        }
    }
}

/// Exponent vector `(i_1, ..., i_k)` with `0 <= i_l < n_l`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn exponents(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// A duplicate-free set of elements of one group, kept in enumeration order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupSubset(BTreeSet<GroupElement>);

impl GroupSubset {
    pub fn empty() -> Self {
        GroupSubset(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, element: &GroupElement) -> bool {
        self.0.contains(element)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> + '_ {
        self.0.iter()
    }
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidFactors(factors));
        }
        let order = factors.iter().map(|&n| n as usize).product();
        let exponent = factors.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        Ok(AbelianGroup {
            factors,
            order,
            exponent,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The one-element group, presented as `Z_1`.
    pub fn trivial() -> Self {
        Self::new(vec![1]).expect("Z_1 is valid")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Number of elements `n`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple `N` of the factor sizes.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Builds an element from arbitrary integers, reducing each modulo its factor.
    pub fn reduce(&self, exponents: &[i64]) -> Result<GroupElement> {
        self.check_len(exponents.len())?;
        Ok(GroupElement(
            exponents
                .iter()
                .zip(&self.factors)
                .map(|(&e, &n)| e.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    /// Builds an element from already-reduced exponents, rejecting anything out of range.
    pub fn element(&self, exponents: &[u64]) -> Result<GroupElement> {
        let candidate = GroupElement(exponents.to_vec());
        self.validate(&candidate)?;
        Ok(candidate)
    }

    pub fn validate(&self, element: &GroupElement) -> Result<()> {
        self.check_len(element.0.len())?;
        for (&e, &n) in element.0.iter().zip(&self.factors) {
            if e >= n {
                return Err(Error::ExponentOutOfRange {
                    value: e as i64,
                    modulus: n,
                });
            }
        }
        Ok(())
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found,
            });
        }
        Ok(())
    }

    /// Element at position `index` of the lexicographic enumeration.
    pub fn element_at(&self, mut index: usize) -> GroupElement {
        assert!(index < self.order, "index {index} out of range");
        let mut exps = vec![0u64; self.rank()];
        for (slot, &n) in exps.iter_mut().zip(&self.factors).rev() {
            *slot = (index % n as usize) as u64;
            index /= n as usize;
        }
        GroupElement(exps)
    }

    /// Position of `element` in the lexicographic enumeration.
    pub fn index_of(&self, element: &GroupElement) -> usize {
        element
            .0
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&e, &n)| acc * n as usize + e as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.validate(a)?;
        Ok(self.inverse_unchecked(a))
    }

    pub(crate) fn inverse_unchecked(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        )
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: &GroupElement, k: i64) -> Result<GroupElement> {
        self.validate(a)?;
        let scaled: Vec<i64> =
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| ((x as i128 * k as i128).rem_euclid(n as i128)) as i64)
                .collect();
        self.reduce(&scaled)
    }

    /// Least `m >= 1` with `a^m = e`: the lcm of the component orders.
    pub fn order_of(&self, a: &GroupElement) -> Result<u64> {
        self.validate(a)?;
        Ok(a.0
            .iter()
            .zip(&self.factors)
            .fold(1u64, |acc, (&x, &n)| acc.lcm(&(n / n.gcd(&x)))))
    }

    /// Validates and deduplicates a list of elements.
    pub fn subset<I>(&self, elements: I) -> Result<GroupSubset>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let mut set = BTreeSet::new();
        for el in elements {
            self.validate(&el)?;
            set.insert(el);
        }
        Ok(GroupSubset(set))
    }

    /// Convenience: a subset from raw exponent vectors, reduced modulo the factors.
    pub fn subset_from(&self, elements: &[&[i64]]) -> Result<GroupSubset> {
        let reduced = elements
            .iter()
            .map(|e| self.reduce(e))
            .collect::<Result<Vec<_>>>()?;
        self.subset(reduced)
    }

    pub fn full_subset(&self) -> GroupSubset {
        GroupSubset(self.elements().collect())
    }

    pub fn subset_inverse(&self, set: &GroupSubset) -> GroupSubset {
        GroupSubset(set.iter().map(|x| self.inverse_unchecked(x)).collect())
    }

    pub fn is_inverse_closed(&self, set: &GroupSubset) -> bool {
        set.iter().all(|x| set.contains(&self.inverse_unchecked(x)))
    }

    /// `a·X`
    pub fn translate(&self, a: &GroupElement, set: &GroupSubset) -> GroupSubset {
        GroupSubset(set.iter().map(|x| self.mul_unchecked(a, x)).collect())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "×")?;
            }
            write!(f, "Z_{n}")?;
        }
        Ok(())
    }
}
