//! Irreducible characters of finite abelian groups and exact character sums.
//!
//! Every character value of a group with exponent `N` is an `N`-th root of
//! unity, so character sums live in `Z[ζ_N]`. [`CycloValue`] stores such a
//! sum as an integer coefficient vector modulo `x^N - 1` next to a cached
//! complex approximation. Equality with an integer is decided exactly by
//! reducing modulo the cyclotomic polynomial `Φ_N`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement, GroupSubset};

/// Index `(j_1, ..., j_k)` of the character `χ_{j_1..j_k}`; all zeros is the
/// trivial character. Characters are enumerated in the same lexicographic
/// order as group elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacterIndex(Vec<u64>);

impl CharacterIndex {
    pub fn new(indices: Vec<u64>) -> Self {
        CharacterIndex(indices)
    }

    pub fn indices(&self) -> &[u64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&j| j == 0)
    }
}

impl From<GroupElement> for CharacterIndex {
    fn from(e: GroupElement) -> Self {
        CharacterIndex(e.exponents().to_vec())
    }
}

impl fmt::Display for CharacterIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}

/// All `n` characters of `group`, trivial first.
pub fn characters(group: &AbelianGroup) -> impl Iterator<Item = CharacterIndex> + '_ {
    group.elements().map(CharacterIndex::from)
}

pub fn character_at(group: &AbelianGroup, index: usize) -> CharacterIndex {
    CharacterIndex::from(group.element_at(index))
}

pub fn validate_character(group: &AbelianGroup, chi: &CharacterIndex) -> Result<()> {
    group.element(&chi.0).map(|_| ())
}

/// `exp(2πi·numerator/N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub numerator: u64,
    #[serde(rename = "N")]
    pub modulus: u64,
}

impl RootOfUnity {
    pub fn value(&self) -> Complex64 {
        root_value(self.numerator as usize, self.modulus as usize)
    }

    pub fn to_cyclo(&self) -> CycloValue {
        CycloValue::root(self.modulus as usize, self.numerator as usize)
    }
}

fn root_value(r: usize, n: usize) -> Complex64 {
    let theta = TAU * (r % n) as f64 / n as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// Exponent `r` with `χ(g) = ζ_N^r`, where `r ≡ Σ j_l·i_l·(N/n_l) (mod N)`.
pub(crate) fn character_exponent(group: &AbelianGroup, chi: &[u64], g: &[u64]) -> u64 {
    let big_n = group.exponent() as u128;
    let mut r: u128 = 0;
    for ((&j, &i), &n) in chi.iter().zip(g).zip(group.factors()) {
        r += (j as u128 * i as u128 % n as u128) * (big_n / n as u128);
    }
    (r % big_n) as u64
}

pub fn eval_character(
    group: &AbelianGroup,
    chi: &CharacterIndex,
    g: &GroupElement,
) -> Result<RootOfUnity> {
    validate_character(group, chi)?;
    group.validate(g)?;
    Ok(RootOfUnity {
        numerator: character_exponent(group, &chi.0, g.exponents()),
        modulus: group.exponent(),
    })
}

/// `χ(X) = Σ_{x∈X} χ(x)`, exactly; `χ(∅) = 0`.
pub fn char_sum(group: &AbelianGroup, chi: &CharacterIndex, set: &GroupSubset) -> Result<CycloValue> {
    validate_character(group, chi)?;
    let n = group.exponent() as usize;
    let mut coeffs = vec![0i64; n];
    for x in set.iter() {
        group.validate(x)?;
        coeffs[character_exponent(group, &chi.0, x.exponents()) as usize] += 1;
    }
    Ok(CycloValue::from_coeffs(coeffs))
}

/// An element of `Z[ζ_N]`: `Σ_j coeffs[j]·ζ_N^j`, with a cached float value.
#[derive(Clone, Debug)]
pub struct CycloValue {
    coeffs: Vec<i64>,
    approx: Complex64,
}

impl PartialEq for CycloValue {
    /// Representation equality: identical coefficient vectors. Use
    /// [`CycloValue::exact_eq`] for equality as complex numbers.
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl CycloValue {
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "N must be at least 1");
        let n = coeffs.len();
        let approx = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| root_value(j, n) * c as f64)
            .sum();
        CycloValue { coeffs, approx }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_coeffs(vec![0; n])
    }

    pub fn from_int(n: usize, value: i64) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[0] = value;
        Self::from_coeffs(coeffs)
    }

    /// `ζ_N^r`
    pub fn root(n: usize, r: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[r % n] = 1;
        Self::from_coeffs(coeffs)
    }

    pub fn modulus(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn approx(&self) -> Complex64 {
        self.approx
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.modulus(),
                right: other.modulus(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_coeffs(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_coeffs(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Cyclic convolution of the coefficient vectors (product modulo `x^N - 1`).
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.modulus();
        let mut out = vec![0i64; n];
        let rhs: Vec<(usize, i64)> = nonzero(&other.coeffs).collect();
        for (i, a) in nonzero(&self.coeffs) {
            for &(j, b) in &rhs {
                out[(i + j) % n] += a * b;
            }
        }
        Ok(Self::from_coeffs(out))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Complex conjugate: `ζ^j ↦ ζ^{-j}`.
    pub fn conj(&self) -> Self {
        let n = self.modulus();
        let mut out = vec![0i64; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[(n - j) % n] = c;
        }
        Self::from_coeffs(out)
    }

    /// `v·conj(v)`, exactly.
    pub fn abs_squared(&self) -> Self {
        self.checked_mul(&self.conj()).expect("same modulus")
    }

    /// Remainder of the coefficient polynomial modulo `Φ_N`; two values are
    /// equal as complex numbers iff their reductions coincide.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.modulus());
        let deg = phi.len() - 1;
        let mut rem: Vec<i128> = self.coeffs.iter().map(|&c| c as i128).collect();
        for top in (deg..rem.len()).rev() {
            let lead = rem[top];
            if lead == 0 {
                continue;
            }
            // Φ_N is monic.
            for (k, &p) in phi.iter().enumerate() {
                rem[top - deg + k] -= lead * p as i128;
            }
        }
        rem.truncate(deg.max(1));
        rem.into_iter()
            .map(|c| i64::try_from(c).expect("cyclotomic reduction overflowed i64"))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0) || self.reduced().iter().all(|&c| c == 0)
    }

    pub fn exact_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.checked_sub(other)?.is_zero())
    }

    /// The integer this value equals, if it is rational at all.
    pub fn as_integer(&self) -> Option<i64> {
        let rem = self.reduced();
        if rem[1..].iter().all(|&c| c == 0) {
            Some(rem[0])
        } else {
            None
        }
    }

    /// `|v|` when it is an integer.
    pub fn abs_as_integer(&self) -> Option<i64> {
        let m = self.abs_squared().as_integer()?;
        exact_sqrt(m)
    }
}

fn nonzero(coeffs: &[i64]) -> impl Iterator<Item = (usize, i64)> + '_ {
    coeffs.iter().copied().enumerate().filter(|&(_, c)| c != 0)
}

/// Integer square root of a perfect square, `None` otherwise.
pub fn exact_sqrt(m: i64) -> Option<i64> {
    if m < 0 {
        return None;
    }
    let r = m.sqrt();
    (r * r == m).then_some(r)
}

impl std::ops::Add for &CycloValue {
    type Output = CycloValue;

    fn add(self, rhs: &CycloValue) -> CycloValue {
        self.checked_add(rhs).expect("cyclotomic moduli differ")
    }
}

impl std::ops::Sub for &CycloValue {
    type Output = CycloValue;

    fn sub(self, rhs: &CycloValue) -> CycloValue {
        self.checked_sub(rhs).expect("cyclotomic moduli differ")
    }
}

impl std::ops::Mul for &CycloValue {
    type Output = CycloValue;

    fn mul(self, rhs: &CycloValue) -> CycloValue {
        self.checked_mul(rhs).expect("cyclotomic moduli differ")
    }
}

impl std::ops::Neg for &CycloValue {
    type Output = CycloValue;

    fn neg(self) -> CycloValue {
        self.scale(-1)
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    #[serde(rename = "N")]
    n: usize,
    coeffs: Vec<i64>,
    #[serde(default, skip_deserializing)]
    re: f64,
    #[serde(default, skip_deserializing)]
    im: f64,
}

impl Serialize for CycloValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr {
            n: self.modulus(),
            coeffs: self.coeffs.clone(),
            re: self.approx.re,
            im: self.approx.im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        if repr.n == 0 || repr.coeffs.len() != repr.n {
            return Err(serde::de::Error::custom("coeffs must have length N >= 1"));
        }
        Ok(CycloValue::from_coeffs(repr.coeffs))
    }
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    assert!(n >= 1);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 = Π_{d | n} Φ_d
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        poly = exact_divide(&poly, &cyclotomic_polynomial(d));
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division by a monic divisor.
fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chi(v: &[u64]) -> CharacterIndex {
        CharacterIndex::new(v.to_vec())
    }

    fn cyclo(n: usize, terms: &[(usize, i64)]) -> CycloValue {
        let mut c = vec![0; n];
        for &(j, k) in terms {
            c[j] += k;
        }
        CycloValue::from_coeffs(c)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient outside {-1,0,1}.
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn character_evaluation() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        let r = eval_character(&z4, &chi(&[2]), &z4.reduce(&[1]).unwrap()).unwrap();
        assert_eq!(r.numerator, 2);
        assert!((r.value() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        let z2z3 = AbelianGroup::new(vec![2, 3]).unwrap();
        for g in z2z3.elements() {
            assert_eq!(eval_character(&z2z3, &chi(&[0, 0]), &g).unwrap().numerator, 0);
        }
        let v = eval_character(&z2z3, &chi(&[1, 1]), &z2z3.reduce(&[1, 1]).unwrap()).unwrap();
        // exp(πi)·exp(2πi/3)
        let direct = Complex64::from_polar(1.0, std::f64::consts::PI)
            * Complex64::from_polar(1.0, TAU / 3.0);
        assert!((v.value() - direct).norm() < 1e-12);
        assert!((v.value() - Complex64::from_polar(1.0, TAU * 5.0 / 6.0)).norm() < 1e-12);
    }

    #[test]
    fn character_sums() {
        let z4 = AbelianGroup::cyclic(4).unwrap();
        let x = z4.subset_from(&[&[1], &[3]]).unwrap();
        let s = char_sum(&z4, &chi(&[2]), &x).unwrap();
        assert_eq!(s.as_integer(), Some(-2));
        assert!((s.approx() - Complex64::new(-2.0, 0.0)).norm() < 1e-12);

        let g = AbelianGroup::new(vec![2, 3]).unwrap();
        let all = g.full_subset();
        for c in characters(&g).skip(1) {
            assert_eq!(char_sum(&g, &c, &all).unwrap().as_integer(), Some(0));
        }
        let some = g.subset_from(&[&[1, 0], &[0, 2], &[1, 1]]).unwrap();
        assert_eq!(char_sum(&g, &chi(&[0, 0]), &some).unwrap().as_integer(), Some(3));
        assert!(char_sum(&g, &chi(&[1, 2]), &GroupSubset::empty()).unwrap().is_zero());
    }

    #[test]
    fn conjugation_and_modulus() {
        let i = CycloValue::root(4, 1);
        assert_eq!(i.conj(), CycloValue::root(4, 3));
        assert_eq!(i.abs_squared().as_integer(), Some(1));
        assert_eq!(CycloValue::zero(4).abs_squared().as_integer(), Some(0));

        let z4 = AbelianGroup::cyclic(4).unwrap();
        let s = char_sum(&z4, &chi(&[1]), &z4.subset_from(&[&[1]]).unwrap()).unwrap();
        assert_eq!(s.abs_squared().as_integer(), Some(1));

        assert_eq!(
            CycloValue::zero(4).checked_mul(&CycloValue::zero(6)),
            Err(Error::ModulusMismatch { left: 4, right: 6 })
        );
    }

    #[test]
    fn integrality_decisions() {
        let v = cyclo(5, &[(1, 1), (4, 1)]);
        assert_eq!(v.as_integer(), None);
        assert!((v.approx().re - 2.0 * (TAU / 5.0).cos()).abs() < 1e-12);

        assert_eq!(cyclo(4, &[(1, 1), (3, 1)]).as_integer(), Some(0));
        assert_eq!(cyclo(6, &[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1)]).as_integer(), Some(0));

        let z2 = AbelianGroup::cyclic(2).unwrap();
        let single = char_sum(&z2, &chi(&[1]), &z2.subset_from(&[&[0]]).unwrap()).unwrap();
        assert_eq!(single.abs_as_integer(), Some(1));
        // 1 + i has |.|^2 = 2
        assert_eq!(cyclo(4, &[(0, 1), (1, 1)]).abs_as_integer(), None);
        assert_eq!(CycloValue::zero(3).abs_as_integer(), Some(0));
        // 1 + ζ_3 = -ζ_3^2, modulus 1 but not rational
        let w = cyclo(3, &[(0, 1), (1, 1)]);
        assert_eq!(w.as_integer(), None);
        assert_eq!(w.abs_as_integer(), Some(1));
    }

    #[test]
    fn json_round_trip() {
        let v = cyclo(4, &[(1, 2), (2, -1)]);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains(r#""N":4"#) && text.contains(r#""re""#));
        let back: CycloValue = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }

    fn group_strategy() -> impl Strategy<Value = AbelianGroup> {
        prop::collection::vec(1u64..7, 1..3).prop_map(|f| AbelianGroup::new(f).unwrap())
    }

    proptest! {
        #[test]
        fn characters_are_unimodular(g in group_strategy()) {
            for c in characters(&g) {
                for x in g.elements() {
                    prop_assert!((eval_character(&g, &c, &x).unwrap().value().norm() - 1.0).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn conj_of_sum_is_sum_of_inverses(
            (g, mask, ci) in group_strategy().prop_flat_map(|g| {
                let n = g.order();
                (Just(g), prop::collection::vec(any::<bool>(), n), 0..n)
            })
        ) {
            let set = g.subset(g.elements().zip(&mask).filter(|(_, &m)| m).map(|(e, _)| e)).unwrap();
            let c = character_at(&g, ci);
            let lhs = char_sum(&g, &c, &set).unwrap().conj();
            let rhs = char_sum(&g, &c, &g.subset_inverse(&set)).unwrap();
            prop_assert_eq!(lhs, rhs);
            if g.is_inverse_closed(&set) {
                let v = char_sum(&g, &c, &set).unwrap();
                prop_assert!(v.exact_eq(&v.conj()).unwrap());
            }
        }

        #[test]
        fn approx_tracks_exact_arithmetic(
            a in prop::collection::vec(-3i64..4, 12),
            b in prop::collection::vec(-3i64..4, 12),
        ) {
            let x = CycloValue::from_coeffs(a);
            let y = CycloValue::from_coeffs(b);
            let prod = &x * &y;
            prop_assert!((prod.approx() - x.approx() * y.approx()).norm() < 1e-9);
            prop_assert!((x.conj().approx() - x.approx().conj()).norm() < 1e-12);
            if let Some(r) = prod.as_integer() {
                prop_assert!((prod.approx() - Complex64::new(r as f64, 0.0)).norm() < 1e-9);
            }
        }
    }
}
