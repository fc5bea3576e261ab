//! Closed-form spectra of `SC(G, R, L, S)`.
//!
//! For each character `χ` the vectors `(a·χ(g⁻¹))_g ⊕ (b·χ(g⁻¹))_g` span an
//! invariant plane on which the adjacency matrix acts as
//!
//! ```text
//! M_χ = [ χ(R)        conj(χ(S)) ]
//!       [ χ(S)        χ(L)       ]
//! ```
//!
//! so the `2n` eigenvalues are `λ± = (χ(R) + χ(L) ± √(x² + 4|χ(S)|²)) / 2`
//! with `x = χ(R) - χ(L)`. When `χ(S) = 0` the pair is kept unsorted as
//! `(λ+, λ-) = (χ(R), χ(L))` with eigenvectors `(1,0)` and `(0,1)`.
//!
//! Eigenvectors use `a = x + √(x² + 4|χ(S)|²)` (real, non-negative) and
//! `b = 2χ(S)` for `λ+`, and the orthogonal `(-2·conj(χ(S)), a)` for `λ-`.
//! The spoke coefficient is then `e+ = a·conj(b) / (|a|² + |b|²)`, which is
//! proportional to `conj(χ(S))`, and `e- = -e+`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::character::{char_sum, character_exponent, characters, exact_sqrt, CharacterIndex, CycloValue};
use crate::error::{Error, Result};
use crate::graph::SemiCayleySpec;
use crate::group::AbelianGroup;

/// Weights of one eigenpair in the four layer blocks of the transfer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectorCoefficients {
    pub c_plus: f64,
    pub c_minus: f64,
    pub d_plus: f64,
    pub d_minus: f64,
    #[serde(with = "complex_json")]
    pub e_plus: Complex64,
    #[serde(with = "complex_json")]
    pub e_minus: Complex64,
}

impl ProjectorCoefficients {
    /// Coefficients when `χ(S) = 0`.
    pub const DECOUPLED: ProjectorCoefficients = ProjectorCoefficients {
        c_plus: 1.0,
        c_minus: 0.0,
        d_plus: 0.0,
        d_minus: 1.0,
        e_plus: Complex64::new(0.0, 0.0),
        e_minus: Complex64::new(0.0, 0.0),
    };

    /// From `x = χ(R) - χ(L)` and `χ(S) ≠ 0`.
    pub fn coupled(x: f64, chi_s: Complex64) -> Self {
        let m = chi_s.norm_sqr();
        let a = plus_component(x, m);
        let norm = a * a + 4.0 * m;
        let c = a * a / norm;
        let d = 4.0 * m / norm;
        let e = chi_s.conj() * (2.0 * a / norm);
        ProjectorCoefficients {
            c_plus: c,
            c_minus: d,
            d_plus: d,
            d_minus: c,
            e_plus: e,
            e_minus: -e,
        }
    }

    /// `(c, d, e)` for the `+` or `-` member of the pair.
    pub fn for_sign(&self, sign: Sign) -> (f64, f64, Complex64) {
        match sign {
            Sign::Plus => (self.c_plus, self.d_plus, self.e_plus),
            Sign::Minus => (self.c_minus, self.d_minus, self.e_minus),
        }
    }
}

/// `x + √(x² + 4m)` without cancellation for negative `x`.
fn plus_component(x: f64, m: f64) -> f64 {
    let root = (x * x + 4.0 * m).sqrt();
    if x >= 0.0 {
        x + root
    } else {
        4.0 * m / (root - x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// The two eigenvalues attached to one character.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub index: CharacterIndex,
    pub chi_r: CycloValue,
    pub chi_l: CycloValue,
    pub chi_s: CycloValue,
    /// `χ(S) = 0`, decided exactly.
    pub spoke_vanishes: bool,
    /// `χ(R) - χ(L)`
    pub x: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// `(λ+, λ-)` when both are integers.
    pub exact: Option<(i64, i64)>,
    pub coefficients: ProjectorCoefficients,
}

impl EigenPair {
    fn new(spec: &SemiCayleySpec, index: CharacterIndex) -> Self {
        let g = spec.group();
        let chi_r = char_sum(g, &index, spec.right()).expect("validated spec");
        let chi_l = char_sum(g, &index, spec.left()).expect("validated spec");
        let chi_s = char_sum(g, &index, spec.spoke()).expect("validated spec");
        let spoke_vanishes = chi_s.is_zero();
        let r = chi_r.approx().re;
        let l = chi_l.approx().re;
        let x = r - l;
        let exact = exact_pair(&chi_r, &chi_l, &chi_s, spoke_vanishes);

        let (lambda_plus, lambda_minus, coefficients) = if spoke_vanishes {
            (r, l, ProjectorCoefficients::DECOUPLED)
        } else {
            let root = (x * x + 4.0 * chi_s.approx().norm_sqr()).sqrt();
            (
                0.5 * (r + l + root),
                0.5 * (r + l - root),
                ProjectorCoefficients::coupled(x, chi_s.approx()),
            )
        };
        let (lambda_plus, lambda_minus) = match exact {
            Some((p, m)) => (p as f64, m as f64),
            None => (lambda_plus, lambda_minus),
        };
        EigenPair {
            index,
            chi_r,
            chi_l,
            chi_s,
            spoke_vanishes,
            x,
            lambda_plus,
            lambda_minus,
            exact,
            coefficients,
        }
    }

    pub fn lambda(&self, sign: Sign) -> f64 {
        match sign {
            Sign::Plus => self.lambda_plus,
            Sign::Minus => self.lambda_minus,
        }
    }

    pub fn exact_lambda(&self, sign: Sign) -> Option<i64> {
        self.exact.map(|(p, m)| match sign {
            Sign::Plus => p,
            Sign::Minus => m,
        })
    }

    /// `(a, b)` before normalisation.
    pub fn block_vector(&self, sign: Sign) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        if self.spoke_vanishes {
            return match sign {
                Sign::Plus => (one, zero),
                Sign::Minus => (zero, one),
            };
        }
        let s = self.chi_s.approx();
        let a = Complex64::new(plus_component(self.x, s.norm_sqr()), 0.0);
        match sign {
            Sign::Plus => (a, s * 2.0),
            Sign::Minus => (-s.conj() * 2.0, a),
        }
    }

    /// Unit eigenvector of length `2n` in vertex order.
    pub fn eigenvector(&self, group: &AbelianGroup, sign: Sign) -> Vec<Complex64> {
        let (a, b) = self.block_vector(sign);
        let n = group.order();
        let scale = 1.0 / (n as f64 * (a.norm_sqr() + b.norm_sqr())).sqrt();
        let phases: Vec<Complex64> = group
            .elements()
            .map(|g| inverse_character_value(group, &self.index, g.exponents()))
            .collect();
        phases
            .iter()
            .map(|&p| a * p * scale)
            .chain(phases.iter().map(|&p| b * p * scale))
            .collect()
    }
}

fn inverse_character_value(group: &AbelianGroup, chi: &CharacterIndex, g: &[u64]) -> Complex64 {
    let r = character_exponent(group, chi.indices(), g);
    let big_n = group.exponent();
    let theta = -std::f64::consts::TAU * r as f64 / big_n as f64;
    Complex64::from_polar(1.0, theta)
}

/// Exact integer eigenvalues of one block, if both are integers.
fn exact_pair(
    chi_r: &CycloValue,
    chi_l: &CycloValue,
    chi_s: &CycloValue,
    spoke_vanishes: bool,
) -> Option<(i64, i64)> {
    if spoke_vanishes {
        return Some((chi_r.as_integer()?, chi_l.as_integer()?));
    }
    // λ± are the roots of z² - tr·z + det of the block.
    let trace = (chi_r + chi_l).as_integer()?;
    let det = (&(chi_r * chi_l) - &chi_s.abs_squared()).as_integer()?;
    let root = exact_sqrt(trace * trace - 4 * det)?;
    debug_assert!((trace + root).is_even());
    Some(((trace + root) / 2, (trace - root) / 2))
}

/// All `n` eigenpairs, trivial character first.
#[derive(Clone, Debug)]
pub struct Spectrum {
    group: AbelianGroup,
    pairs: Vec<EigenPair>,
}

impl Spectrum {
    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Characters with `χ(S) = 0`, as positions in the character enumeration.
    pub fn vanishing_set(&self) -> Vec<usize> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.spoke_vanishes)
            .map(|(i, _)| i)
            .collect()
    }

    /// `λ_1^+` of the trivial character.
    pub fn lambda1_plus(&self) -> f64 {
        self.pairs[0].lambda_plus
    }

    /// All `2n` eigenvalues in ascending order.
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .pairs
            .iter()
            .flat_map(|p| [p.lambda_plus, p.lambda_minus])
            .collect();
        all.sort_by(f64::total_cmp);
        all
    }

    pub fn is_integral(&self) -> bool {
        self.pairs.iter().all(|p| p.exact.is_some())
    }

    /// All `2n` eigenvalues as integers, `λ+` and `λ-` interleaved per character.
    pub fn exact_eigenvalues(&self) -> Option<Vec<i64>> {
        self.pairs
            .iter()
            .map(|p| p.exact.map(|(a, b)| [a, b]))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().flatten().collect())
    }

    /// `gcd{λ - λ_1^+ : λ ≠ λ_1^+}`; zero when the spectrum is a single value.
    pub fn eigen_gcd(&self) -> Result<u64> {
        let exact = self.exact_eigenvalues().ok_or(Error::SpectrumNotIntegral)?;
        let top = exact[0];
        Ok(exact
            .iter()
            .map(|&l| (l - top).unsigned_abs())
            .fold(0u64, |acc, d| acc.gcd(&d)))
    }

    pub fn report(&self) -> SpectrumReport {
        SpectrumReport {
            integral: self.is_integral(),
            eigen_gcd: self.eigen_gcd().ok(),
            vanishing_set: self.vanishing_set(),
            characters: self
                .pairs
                .iter()
                .map(|p| CharacterReport {
                    index: p.index.clone(),
                    lambda_plus: p.lambda_plus,
                    lambda_minus: p.lambda_minus,
                    exact: p.exact.is_some(),
                    exact_plus: p.exact.map(|e| e.0),
                    exact_minus: p.exact.map(|e| e.1),
                    chi_r: p.chi_r.clone(),
                    chi_l: p.chi_l.clone(),
                    chi_s: p.chi_s.clone(),
                    coefficients: p.coefficients,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub integral: bool,
    pub eigen_gcd: Option<u64>,
    pub vanishing_set: Vec<usize>,
    pub characters: Vec<CharacterReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterReport {
    pub index: CharacterIndex,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub exact: bool,
    pub exact_plus: Option<i64>,
    pub exact_minus: Option<i64>,
    pub chi_r: CycloValue,
    pub chi_l: CycloValue,
    pub chi_s: CycloValue,
    #[serde(flatten)]
    pub coefficients: ProjectorCoefficients,
}

pub fn eigenvalues(spec: &SemiCayleySpec) -> Spectrum {
    let group = spec.group().clone();
    let pairs = characters(&group).map(|c| EigenPair::new(spec, c)).collect();
    Spectrum { group, pairs }
}

pub fn projector_coefficients(spec: &SemiCayleySpec, index: &CharacterIndex) -> Result<ProjectorCoefficients> {
    crate::character::validate_character(spec.group(), index)?;
    Ok(EigenPair::new(spec, index.clone()).coefficients)
}

pub fn is_integral(spec: &SemiCayleySpec) -> bool {
    eigenvalues(spec).is_integral()
}

pub fn eigen_gcd(spec: &SemiCayleySpec) -> Result<u64> {
    eigenvalues(spec).eigen_gcd()
}

/// A spectral projector `E = v·v*` with its eigenvalue.
#[derive(Clone, Debug)]
pub struct Projector {
    pub character: usize,
    pub sign: Sign,
    pub eigenvalue: f64,
    pub matrix: DMatrix<Complex64>,
}

/// The `2n` rank-one projectors, built blockwise from the character Gram
/// block `B = [χ(g_r⁻¹ g_s)]`.
pub fn projectors(spec: &SemiCayleySpec) -> Vec<Projector> {
    let spectrum = eigenvalues(spec);
    let g = spec.group();
    let n = g.order();
    let elements: Vec<_> = g.elements().collect();
    let mut out = Vec::with_capacity(2 * n);
    for (ci, pair) in spectrum.pairs.iter().enumerate() {
        let gram = DMatrix::from_fn(n, n, |r, s| {
            // χ(g_s - g_r) = conj(χ(g_r - g_s))
            let diff = g.mul_unchecked(&g.inverse_unchecked(&elements[r]), &elements[s]);
            inverse_character_value(g, &pair.index, diff.exponents()).conj()
        });
        for sign in [Sign::Plus, Sign::Minus] {
            let (a, b) = pair.block_vector(sign);
            let norm = n as f64 * (a.norm_sqr() + b.norm_sqr());
            let weights = [
                [a * a.conj() / norm, a * b.conj() / norm],
                [b * a.conj() / norm, b * b.conj() / norm],
            ];
            let matrix = DMatrix::from_fn(2 * n, 2 * n, |i, j| weights[i / n][j / n] * gram[(i % n, j % n)]);
            out.push(Projector {
                character: ci,
                sign,
                eigenvalue: pair.lambda(sign),
                matrix,
            });
        }
    }
    out
}

pub(crate) mod complex_json {
    use num_complex::Complex64;
    use serde::{Serialize, Serializer};

    #[derive(Serialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Parts { re: z.re, im: z.im }.serialize(s)
    }
}
