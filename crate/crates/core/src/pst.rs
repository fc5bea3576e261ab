//! Perfect state transfer and periodicity.
//!
//! Pairs are handled through their offset `a = g⁻¹h`: the transfer amplitude
//! between `(g,r)` and `(h,s)` depends only on `(a, r, s)`.
//!
//! * Same layer, `R = L`: PST needs `a` of order 2, an integral spectrum, and
//!   a common 2-adic valuation `k` of `λ_1^+ - λ_i^±` over the characters
//!   with `χ_i(a) = -1`, with strictly larger valuations elsewhere. The
//!   witness is `t = π/2^k`.
//! * Across layers: PST needs `R = L`, `χ_j(S) ≠ 0` for every `j`, an
//!   integral spectrum, `ν₂(|χ_j(S)|) = ν₂(|S|) = k` for every `j`, and signs
//!   `s_j = χ_j(a)·conj(χ_j(S))/|χ_j(S)| ∈ {±1}` compatible with
//!   `ν₂(λ_1^+ - λ_j^+)`. The witness is `t = π/2^{k+1}`.
//! * Same layer, `R ≠ L`: the eigenvalue support of the start vertex is
//!   examined directly. A periodic vertex only has integer or quadratic
//!   integer eigenvalues in its support, and PST at time `t` means
//!   `(θ_ref - θ)·t/2π ∈ ℤ + ε/2` for every support eigenvalue `θ`, where
//!   `ε = 1` exactly when `χ(a) = -1`. With every eigenvalue written exactly
//!   as a quadratic surd, this system is solved in rationals.
//!
//! Every positive verdict is re-checked by both the spectral formula and the
//! dense matrix exponential before it is returned.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::character::{character_exponent, CharacterIndex};
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, SemiCayleySpec, Vertex};
use crate::group::GroupElement;
use crate::spectral::{eigenvalues, EigenPair, Sign, Spectrum};
use crate::surd::{recognize, QuadraticInteger, Surd};
use crate::time::SymbolicTime;
use crate::transfer::oracle_expm;
use crate::valuation::{nu2, nu2_int, odd_part, TwoAdicVal};

/// Magnitude a positive verdict must reach on both transfer paths.
pub const CONFIRM_TOL: f64 = 1e-8;
/// Largest allowed disagreement between the spectral and oracle entries.
pub const AGREEMENT_TOL: f64 = 1e-8;
/// Samples in a numeric scan.
pub const SCAN_SAMPLES: usize = 10_000;
/// Tolerance for recognising quadratic integers from floating-point eigenvalues.
const RECOGNITION_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
    Undecided,
}

/// Which decision procedure produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    SameLayerBalanced,
    CrossLayer,
    Support,
}

/// The condition that settled a verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Same-layer pair in a group of odd order.
    OddOrder,
    /// Same-layer pair whose offset does not have order 2.
    OrderNotTwo { order: u64 },
    /// Cross-layer pair with `S = S⁻¹` whose offset has order above 2.
    CrossOrder { order: u64 },
    /// Cross-layer pair with `R ≠ L`: the two vertices are not strongly cospectral.
    Unbalanced,
    SpokeVanishes { character: CharacterIndex },
    NonIntegral,
    SpokeValuation {
        character: CharacterIndex,
        expected: TwoAdicVal,
        found: TwoAdicVal,
    },
    /// `χ_j(a)·conj(χ_j(S))` is not a real integer.
    SignNotReal { character: CharacterIndex },
    Valuation {
        character: CharacterIndex,
        sign: Sign,
        required: String,
        found: TwoAdicVal,
    },
    /// `χ(a) ∉ {±1}` for a character in the support.
    NotCospectral { character: CharacterIndex },
    /// A support eigenvalue that is not a quadratic integer.
    NotQuadratic {
        character: CharacterIndex,
        sign: Sign,
        eigenvalue: f64,
    },
    /// Two eigenvalue gaps with an irrational ratio.
    IrrationalRatio { character: CharacterIndex, sign: Sign },
    /// An eigenvalue equal to the reference that would need the opposite phase.
    PhaseConflict { character: CharacterIndex, sign: Sign },
    PhaseSystemSolved { route: Route, k: i64 },
    /// Integral spectrum with eigenvalue gap gcd `M`.
    Integral { eigen_gcd: u64 },
    /// A single distinct eigenvalue per vertex support: `H(t)` is diagonal for all `t`.
    Constant,
    /// Every support gap is a rational multiple of `√radicand`.
    RatioCondition { gcd: [i64; 2], radicand: u64 },
    NumericScan {
        max_magnitude: f64,
        at: f64,
        horizon: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PstVerdict {
    pub status: Status,
    pub from: Vertex,
    pub to: Vertex,
    /// Exact witnessing time, when it has a closed form.
    pub time: Option<SymbolicTime>,
    pub time_value: Option<f64>,
    /// `|H_{u,v}(t)|` at the witness (both paths agree), or the scan maximum.
    pub magnitude: Option<f64>,
    pub certificate: Certificate,
}

impl PstVerdict {
    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::No
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodReport {
    pub periodic: bool,
    /// `false` when only numeric evidence is available.
    pub decided: bool,
    pub min_period: Option<SymbolicTime>,
    /// Smallest `|H_{u,u}|` over all vertices at the minimum period.
    pub magnitude: Option<f64>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Necessary {
    Pass,
    Fail(Certificate),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub spectral: f64,
    pub oracle: f64,
    pub magnitude: f64,
    pub pass: bool,
}

enum Decision {
    Yes { time: SymbolicTime, route: Route, k: i64 },
    No(Certificate),
    Undecided,
}

/// One support eigenvalue: `(character position, sign)`, whether it needs
/// the opposite phase, and its gap to the reference.
struct PhaseItem {
    character: usize,
    sign: Sign,
    flip: bool,
    gap: Surd,
}

enum PhaseOutcome {
    /// Every gap is `q_μ·√radicand`.
    Commensurable { radicand: u64, coefficients: Vec<Ratio<i64>> },
    Fail(Certificate),
    Unsupported,
}

/// Analysis context for one graph: the spectrum and adjacency matrix are
/// computed once and shared by all pairs.
pub struct Analyzer<'a> {
    spec: &'a SemiCayleySpec,
    spectrum: Spectrum,
    adjacency: AdjacencyMatrix,
    sorted: Vec<f64>,
    tol: f64,
}

impl<'a> Analyzer<'a> {
    pub fn new(spec: &'a SemiCayleySpec) -> Self {
        let spectrum = eigenvalues(spec);
        let sorted = spectrum.sorted_eigenvalues();
        Analyzer {
            spec,
            spectrum,
            adjacency: spec.build(),
            sorted,
            tol: CONFIRM_TOL,
        }
    }

    /// Magnitude tolerance for confirmations (default `1e-8`).
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    fn index(&self, i: usize) -> CharacterIndex {
        self.spectrum.pairs()[i].index.clone()
    }

    fn check_pair(&self, u: &Vertex, v: &Vertex) -> Result<GroupElement> {
        self.spec.vertex_index(u)?;
        self.spec.vertex_index(v)?;
        if u == v {
            return Err(Error::Precondition(
                "u = v; use the periodicity analysis for a single vertex".into(),
            ));
        }
        let g = self.spec.group();
        Ok(g.mul_unchecked(&g.inverse_unchecked(&u.element), &v.element))
    }

    /// `χ_i(a)` when it is `±1`.
    fn real_character(&self, pair: &EigenPair, a: &GroupElement) -> Option<i64> {
        let g = self.spec.group();
        let r = character_exponent(g, pair.index.indices(), a.exponents());
        if r == 0 {
            Some(1)
        } else if 2 * r == g.exponent() {
            Some(-1)
        } else {
            None
        }
    }

    /// `H_{(g,r),(ga,s)}(t)` from the spectral decomposition.
    pub fn entry(&self, r: u8, s: u8, a: &GroupElement, t: f64) -> Complex64 {
        self.amplitude_terms(r, s, a)
            .iter()
            .map(|(cp, cm, lp, lm)| cp * Complex64::from_polar(1.0, -lp * t) + cm * Complex64::from_polar(1.0, -lm * t))
            .sum::<Complex64>()
            / self.spec.group().order() as f64
    }

    /// Per character: `(coef⁺·χ(a), coef⁻·χ(a), λ⁺, λ⁻)`.
    fn amplitude_terms(&self, r: u8, s: u8, a: &GroupElement) -> Vec<(Complex64, Complex64, f64, f64)> {
        let g = self.spec.group();
        let big_n = g.exponent();
        self.spectrum
            .pairs()
            .iter()
            .map(|p| {
                let k = p.coefficients;
                let (plus, minus) = match (r, s) {
                    (0, 0) => (Complex64::from(k.c_plus), Complex64::from(k.c_minus)),
                    (1, 1) => (Complex64::from(k.d_plus), Complex64::from(k.d_minus)),
                    (0, 1) => (k.e_plus, k.e_minus),
                    _ => (k.e_plus.conj(), k.e_minus.conj()),
                };
                let e = character_exponent(g, p.index.indices(), a.exponents());
                let chi = Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / big_n as f64);
                (plus * chi, minus * chi, p.lambda_plus, p.lambda_minus)
            })
            .collect()
    }

    /// `|H_{u,v}(t)|` on both paths; fails if they disagree.
    pub fn verify(&self, u: &Vertex, v: &Vertex, t: f64) -> Result<Verification> {
        self.spec.vertex_index(u)?;
        self.spec.vertex_index(v)?;
        if t.is_nan() || t < 0.0 {
            return Err(Error::Precondition(format!("time must be non-negative, got {t}")));
        }
        let g = self.spec.group();
        let a = g.mul_unchecked(&g.inverse_unchecked(&u.element), &v.element);
        let spectral = self.entry(u.layer, v.layer, &a, t);
        let oracle = oracle_expm(&self.adjacency, t).get(
            self.spec.vertex_index(u)?,
            self.spec.vertex_index(v)?,
        );
        if (spectral - oracle).norm() > AGREEMENT_TOL {
            return Err(Error::InternalConsistency {
                spectral: spectral.norm(),
                oracle: oracle.norm(),
            });
        }
        let magnitude = spectral.norm().min(oracle.norm());
        Ok(Verification {
            spectral: spectral.norm(),
            oracle: oracle.norm(),
            magnitude,
            pass: magnitude >= 1.0 - self.tol,
        })
    }

    pub fn necessary(&self, u: &Vertex, v: &Vertex) -> Result<Necessary> {
        let a = self.check_pair(u, v)?;
        let g = self.spec.group();
        let order = g.order_of(&a)?;
        if u.layer == v.layer {
            if g.order() % 2 == 1 {
                return Ok(Necessary::Fail(Certificate::OddOrder));
            }
            if order != 2 {
                return Ok(Necessary::Fail(Certificate::OrderNotTwo { order }));
            }
        } else if g.is_inverse_closed(self.spec.spoke()) && order > 2 {
            return Ok(Necessary::Fail(Certificate::CrossOrder { order }));
        }
        Ok(Necessary::Pass)
    }

    fn decide_same_layer_balanced(&self, u: &Vertex, v: &Vertex) -> Result<Decision> {
        let a = self.check_pair(u, v)?;
        if u.layer != v.layer {
            return Err(Error::Precondition("pair is not in one layer".into()));
        }
        if !self.spec.is_balanced() {
            return Err(Error::Precondition("R ≠ L; use the support analysis".into()));
        }
        if let Necessary::Fail(c) = self.necessary(u, v)? {
            return Ok(Decision::No(c));
        }
        let Some(exact) = self.spectrum.exact_eigenvalues() else {
            return Ok(Decision::No(Certificate::NonIntegral));
        };
        let top = exact[0];
        let mut flipped = Vec::new();
        let mut fixed = Vec::new();
        for (i, pair) in self.spectrum.pairs().iter().enumerate() {
            let chi = self.real_character(pair, &a).expect("offset has order 2");
            for (sign, lambda) in [(Sign::Plus, exact[2 * i]), (Sign::Minus, exact[2 * i + 1])] {
                let item = (i, sign, nu2_int(top - lambda));
                if chi == -1 {
                    flipped.push(item);
                } else {
                    fixed.push(item);
                }
            }
        }
        let k = flipped[0].2;
        let Some(k_val) = k.finite() else {
            let (i, sign, found) = flipped[0];
            return Ok(Decision::No(Certificate::Valuation {
                character: self.index(i),
                sign,
                required: "finite".into(),
                found,
            }));
        };
        for &(i, sign, found) in &flipped {
            if found != k {
                return Ok(Decision::No(Certificate::Valuation {
                    character: self.index(i),
                    sign,
                    required: format!("= {k_val}"),
                    found,
                }));
            }
        }
        for &(i, sign, found) in &fixed {
            if found <= k {
                return Ok(Decision::No(Certificate::Valuation {
                    character: self.index(i),
                    sign,
                    required: format!(">= {}", k_val + 1),
                    found,
                }));
            }
        }
        Ok(Decision::Yes {
            time: SymbolicTime::pi_over_pow2(k_val as u32),
            route: Route::SameLayerBalanced,
            k: k_val,
        })
    }

    fn decide_cross_layer(&self, u: &Vertex, v: &Vertex) -> Result<Decision> {
        self.check_pair(u, v)?;
        if u.layer == v.layer {
            return Err(Error::Precondition("pair is not across layers".into()));
        }
        // H is symmetric, so (h,1) → (g,0) is decided as (g,0) → (h,1).
        let (u, v) = if u.layer == 0 { (u, v) } else { (v, u) };
        let g = self.spec.group();
        let a = g.mul_unchecked(&g.inverse_unchecked(&u.element), &v.element);
        if let Necessary::Fail(c) = self.necessary(u, v)? {
            return Ok(Decision::No(c));
        }
        if !self.spec.is_balanced() {
            return Ok(Decision::No(Certificate::Unbalanced));
        }
        if let Some(i) = self.spectrum.vanishing_set().first() {
            return Ok(Decision::No(Certificate::SpokeVanishes {
                character: self.index(*i),
            }));
        }
        let Some(exact) = self.spectrum.exact_eigenvalues() else {
            return Ok(Decision::No(Certificate::NonIntegral));
        };
        let k = nu2_int(self.spec.spoke().len() as i64);
        let k_val = k.finite().expect("S is non-empty");
        let top = exact[0];
        let big_n = g.exponent() as usize;
        for (j, pair) in self.spectrum.pairs().iter().enumerate() {
            let modulus = pair
                .chi_s
                .abs_as_integer()
                .expect("|χ(S)| is an integer on an integral spectrum with R = L");
            let found = nu2_int(modulus);
            if found != k {
                return Ok(Decision::No(Certificate::SpokeValuation {
                    character: self.index(j),
                    expected: k,
                    found,
                }));
            }
            let r = character_exponent(g, pair.index.indices(), a.exponents()) as usize;
            let chi_a = crate::character::CycloValue::root(big_n, r);
            let Some(product) = (&chi_a * &pair.chi_s.conj()).as_integer() else {
                return Ok(Decision::No(Certificate::SignNotReal {
                    character: self.index(j),
                }));
            };
            let gap = top - exact[2 * j];
            let found = nu2_int(gap);
            let ok = if product < 0 {
                found == TwoAdicVal::Finite(k_val + 1)
            } else {
                found >= TwoAdicVal::Finite(k_val + 2)
            };
            if !ok {
                return Ok(Decision::No(Certificate::Valuation {
                    character: self.index(j),
                    sign: Sign::Plus,
                    required: if product < 0 {
                        format!("= {}", k_val + 1)
                    } else {
                        format!(">= {}", k_val + 2)
                    },
                    found,
                }));
            }
        }
        Ok(Decision::Yes {
            time: SymbolicTime::pi_over_pow2(k_val as u32 + 1),
            route: Route::CrossLayer,
            k: k_val,
        })
    }

    /// Eigenvalues seen from a vertex in `layer`, reference first.
    fn support(&self, layer: u8) -> Vec<(usize, Sign)> {
        let (own, other) = if layer == 0 {
            (Sign::Plus, Sign::Minus)
        } else {
            (Sign::Minus, Sign::Plus)
        };
        let mut out = Vec::new();
        for (i, p) in self.spectrum.pairs().iter().enumerate() {
            out.push((i, own));
            if !p.spoke_vanishes {
                out.push((i, other));
            }
        }
        out
    }

    /// An eigenvalue as an exact quadratic integer, if it is one.
    fn quadratic(&self, i: usize, sign: Sign) -> Option<QuadraticInteger> {
        let pair = &self.spectrum.pairs()[i];
        if let Some(n) = pair.exact_lambda(sign) {
            return Some(QuadraticInteger::integer(n));
        }
        let lambda = pair.lambda(sign);
        if !pair.spoke_vanishes {
            let trace = (&pair.chi_r + &pair.chi_l).as_integer();
            let det = (&(&pair.chi_r * &pair.chi_l) - &pair.chi_s.abs_squared()).as_integer();
            if let (Some(trace), Some(det)) = (trace, det) {
                return QuadraticInteger::nearest_root(trace, det, lambda);
            }
        }
        recognize(lambda, &self.sorted, RECOGNITION_TOL)
    }

    /// Gaps `θ_ref - θ` over a support; the first entry is the reference.
    fn phase_items(
        &self,
        support: &[(usize, Sign)],
        flip: impl Fn(usize) -> bool,
    ) -> std::result::Result<Vec<PhaseItem>, Certificate> {
        let mut forms = Vec::with_capacity(support.len());
        for &(i, sign) in support {
            match self.quadratic(i, sign) {
                Some(q) => forms.push(q.to_surd()),
                None => {
                    return Err(Certificate::NotQuadratic {
                        character: self.index(i),
                        sign,
                        eigenvalue: self.spectrum.pairs()[i].lambda(sign),
                    })
                }
            }
        }
        let reference = forms[0].clone();
        Ok(support
            .iter()
            .zip(forms)
            .map(|(&(character, sign), form)| PhaseItem {
                character,
                sign,
                flip: flip(character),
                gap: &reference - &form,
            })
            .collect())
    }

    /// Writes every gap as `q·√Δ` for one squarefree `Δ`, or explains why not.
    fn commensurate(&self, items: &[PhaseItem]) -> PhaseOutcome {
        for item in items {
            if item.flip && item.gap.is_zero() {
                return PhaseOutcome::Fail(Certificate::PhaseConflict {
                    character: self.index(item.character),
                    sign: item.sign,
                });
            }
        }
        let Some(base) = items.iter().find(|i| !i.gap.is_zero()) else {
            return PhaseOutcome::Commensurable {
                radicand: 1,
                coefficients: vec![Ratio::from_integer(0); items.len()],
            };
        };
        let mut ratios = Vec::with_capacity(items.len());
        for item in items {
            match item.gap.ratio_to(&base.gap) {
                Some(r) => ratios.push(r),
                None => {
                    return PhaseOutcome::Fail(Certificate::IrrationalRatio {
                        character: self.index(item.character),
                        sign: item.sign,
                    })
                }
            }
        }
        let Some((radicand, scale)) = base.gap.single_term() else {
            return PhaseOutcome::Unsupported;
        };
        PhaseOutcome::Commensurable {
            radicand,
            coefficients: ratios.into_iter().map(|r| r * scale).collect(),
        }
    }

    fn decide_support(&self, u: &Vertex, v: &Vertex) -> Result<Decision> {
        let a = self.check_pair(u, v)?;
        if u.layer != v.layer {
            return Err(Error::Precondition("support analysis is for same-layer pairs".into()));
        }
        if let Necessary::Fail(c) = self.necessary(u, v)? {
            return Ok(Decision::No(c));
        }
        let mut signs = Vec::with_capacity(self.spectrum.pairs().len());
        for pair in self.spectrum.pairs() {
            match self.real_character(pair, &a) {
                Some(s) => signs.push(s),
                None => {
                    return Ok(Decision::No(Certificate::NotCospectral {
                        character: pair.index.clone(),
                    }))
                }
            }
        }
        let items = match self.phase_items(&self.support(u.layer), |i| signs[i] == -1) {
            Ok(items) => items,
            Err(c) => return Ok(Decision::No(c)),
        };
        let (radicand, q) = match self.commensurate(&items) {
            PhaseOutcome::Commensurable { radicand, coefficients } => (radicand, coefficients),
            PhaseOutcome::Fail(c) => return Ok(Decision::No(c)),
            PhaseOutcome::Unsupported => return Ok(Decision::Undecided),
        };
        // q_μ·x ∈ ℤ + ε_μ/2 is solvable iff the flipped q share one valuation
        // k and the others sit strictly above it.
        let flipped: Vec<usize> = (0..items.len()).filter(|&m| items[m].flip).collect();
        let Some(&first) = flipped.first() else {
            return Ok(Decision::No(Certificate::PhaseConflict {
                character: self.index(items[0].character),
                sign: items[0].sign,
            }));
        };
        let k = nu2(q[first]).finite().expect("flipped gaps are non-zero");
        for (m, item) in items.iter().enumerate() {
            let found = nu2(q[m]);
            let ok = if item.flip {
                found == TwoAdicVal::Finite(k)
            } else {
                found > TwoAdicVal::Finite(k)
            };
            if !ok {
                return Ok(Decision::No(Certificate::Valuation {
                    character: self.index(item.character),
                    sign: item.sign,
                    required: if item.flip { format!("= {k}") } else { format!(">= {}", k + 1) },
                    found,
                }));
            }
        }
        let odd_lcm = q
            .iter()
            .filter(|r| *r.numer() != 0)
            .fold(1i64, |acc, r| acc.lcm(&odd_part(*r.denom())));
        let x = Ratio::from_integer(odd_lcm) * pow2(-(k + 1));
        Ok(Decision::Yes {
            time: SymbolicTime { turns: x, radicand },
            route: Route::Support,
            k,
        })
    }

    fn finish(&self, u: &Vertex, v: &Vertex, decision: Decision) -> Result<PstVerdict> {
        match decision {
            Decision::Yes { time, route, k } => {
                let check = self.verify(u, v, time.value())?;
                if !check.pass {
                    return Err(Error::UnconfirmedWitness {
                        magnitude: check.magnitude,
                    });
                }
                Ok(PstVerdict {
                    status: Status::Yes,
                    from: u.clone(),
                    to: v.clone(),
                    time: Some(time),
                    time_value: Some(time.value()),
                    magnitude: Some(check.magnitude),
                    certificate: Certificate::PhaseSystemSolved { route, k },
                })
            }
            Decision::No(certificate) => Ok(PstVerdict {
                status: Status::No,
                from: u.clone(),
                to: v.clone(),
                time: None,
                time_value: None,
                magnitude: None,
                certificate,
            }),
            Decision::Undecided => {
                let (max_magnitude, at, horizon) = self.scan(u, v);
                Ok(PstVerdict {
                    status: Status::Undecided,
                    from: u.clone(),
                    to: v.clone(),
                    time: None,
                    time_value: None,
                    magnitude: Some(max_magnitude),
                    certificate: Certificate::NumericScan {
                        max_magnitude,
                        at,
                        horizon,
                    },
                })
            }
        }
    }

    /// Scan horizon: one period `2π/M` on integral spectra, else `2π`.
    pub fn horizon(&self) -> f64 {
        match self.spectrum.eigen_gcd() {
            Ok(m) if m > 0 => std::f64::consts::TAU / m as f64,
            _ => std::f64::consts::TAU,
        }
    }

    /// Largest `|H_{u,v}(t)|` over `SCAN_SAMPLES` equally spaced `t ∈ (0, horizon]`.
    pub fn scan(&self, u: &Vertex, v: &Vertex) -> (f64, f64, f64) {
        let g = self.spec.group();
        let a = g.mul_unchecked(&g.inverse_unchecked(&u.element), &v.element);
        let terms = self.amplitude_terms(u.layer, v.layer, &a);
        let n = g.order() as f64;
        let horizon = self.horizon();
        let mut best = (0.0, 0.0);
        for step in 1..=SCAN_SAMPLES {
            let t = horizon * step as f64 / SCAN_SAMPLES as f64;
            let z: Complex64 = terms
                .iter()
                .map(|(cp, cm, lp, lm)| cp * Complex64::from_polar(1.0, -lp * t) + cm * Complex64::from_polar(1.0, -lm * t))
                .sum();
            let m = z.norm() / n;
            if m > best.0 {
                best = (m, t);
            }
        }
        (best.0, best.1, horizon)
    }

    pub fn same_layer_balanced(&self, u: &Vertex, v: &Vertex) -> Result<PstVerdict> {
        let d = self.decide_same_layer_balanced(u, v)?;
        self.finish(u, v, d)
    }

    pub fn cross_layer(&self, u: &Vertex, v: &Vertex) -> Result<PstVerdict> {
        let d = self.decide_cross_layer(u, v)?;
        self.finish(u, v, d)
    }

    /// Same-layer decision from the support eigenvalues; valid for any `R`, `L`.
    pub fn support_analysis(&self, u: &Vertex, v: &Vertex) -> Result<PstVerdict> {
        let d = self.decide_support(u, v)?;
        self.finish(u, v, d)
    }

    pub fn decide(&self, u: &Vertex, v: &Vertex) -> Result<PstVerdict> {
        self.check_pair(u, v)?;
        let d = if u.layer != v.layer {
            self.decide_cross_layer(u, v)?
        } else if self.spec.is_balanced() {
            self.decide_same_layer_balanced(u, v)?
        } else {
            self.decide_support(u, v)?
        };
        self.finish(u, v, d)
    }

    /// Representative pairs `((e,r),(a,s))` ordered by layer pair, then by the
    /// enumeration index of `a`.
    pub fn canonical_pairs(&self) -> Vec<(Vertex, Vertex)> {
        let g = self.spec.group();
        let mut out = Vec::new();
        for (r, s) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            for a in g.elements() {
                if r == s && a == g.identity() {
                    continue;
                }
                out.push((Vertex::new(g.identity(), r), Vertex::new(a, s)));
            }
        }
        out
    }

    pub fn find(&self) -> Result<Vec<PstVerdict>> {
        self.canonical_pairs()
            .iter()
            .map(|(u, v)| self.decide(u, v))
            .collect()
    }

    pub fn periodicity(&self) -> Result<PeriodReport> {
        let (periodic, min_period, certificate) = if self.spec.is_balanced() {
            match self.spectrum.eigen_gcd() {
                Err(_) => (false, None, Certificate::NonIntegral),
                Ok(0) => (true, None, Certificate::Constant),
                Ok(m) => (
                    true,
                    Some(SymbolicTime::turns(Ratio::new(1, m as i64))),
                    Certificate::Integral { eigen_gcd: m },
                ),
            }
        } else {
            match self.periodicity_support() {
                Some(result) => result,
                None => return Ok(self.periodicity_scan()),
            }
        };
        let magnitude = match min_period {
            Some(t) if periodic => {
                let m = self.diagonal_magnitude(t.value())?;
                if m < 1.0 - self.tol {
                    return Err(Error::UnconfirmedWitness { magnitude: m });
                }
                Some(m)
            }
            _ => None,
        };
        Ok(PeriodReport {
            periodic,
            decided: true,
            min_period,
            magnitude,
            certificate,
        })
    }

    /// Both layers' supports, each against its own reference eigenvalue.
    fn periodicity_support(&self) -> Option<(bool, Option<SymbolicTime>, Certificate)> {
        let mut items = Vec::new();
        for layer in [0u8, 1] {
            match self.phase_items(&self.support(layer), |_| false) {
                Ok(mut part) => items.append(&mut part),
                Err(c) => return Some((false, None, c)),
            }
        }
        match self.commensurate(&items) {
            PhaseOutcome::Fail(c) => Some((false, None, c)),
            PhaseOutcome::Unsupported => None,
            PhaseOutcome::Commensurable { radicand, coefficients } => {
                let nonzero: Vec<_> = coefficients.into_iter().filter(|r| *r.numer() != 0).collect();
                if nonzero.is_empty() {
                    return Some((true, None, Certificate::Constant));
                }
                let num = nonzero.iter().fold(0i64, |acc, r| acc.gcd(r.numer()));
                let den = nonzero.iter().fold(1i64, |acc, r| acc.lcm(r.denom()));
                let gcd = Ratio::new(num, den);
                Some((
                    true,
                    Some(SymbolicTime {
                        turns: gcd.recip(),
                        radicand,
                    }),
                    Certificate::RatioCondition {
                        gcd: [*gcd.numer(), *gcd.denom()],
                        radicand,
                    },
                ))
            }
        }
    }

    fn periodicity_scan(&self) -> PeriodReport {
        let n = self.spec.vertex_count();
        let horizon = std::f64::consts::TAU;
        let mut best = (0.0, 0.0);
        let identity = self.spec.group().identity();
        let layers: Vec<_> = [0u8, 1]
            .iter()
            .map(|&r| self.amplitude_terms(r, r, &identity))
            .collect();
        for step in 1..=SCAN_SAMPLES {
            let t = horizon * step as f64 / SCAN_SAMPLES as f64;
            let worst = layers
                .iter()
                .map(|terms| {
                    terms
                        .iter()
                        .map(|(cp, cm, lp, lm)| cp * Complex64::from_polar(1.0, -lp * t) + cm * Complex64::from_polar(1.0, -lm * t))
                        .sum::<Complex64>()
                        .norm()
                        / (n / 2) as f64
                })
                .fold(f64::INFINITY, f64::min);
            if worst > best.0 {
                best = (worst, t);
            }
        }
        PeriodReport {
            periodic: false,
            decided: false,
            min_period: None,
            magnitude: Some(best.0),
            certificate: Certificate::NumericScan {
                max_magnitude: best.0,
                at: best.1,
                horizon,
            },
        }
    }

    /// `min_u |H_{u,u}(t)|` over both paths; fails if the paths disagree.
    fn diagonal_magnitude(&self, t: f64) -> Result<f64> {
        let oracle = oracle_expm(&self.adjacency, t);
        let g = self.spec.group();
        let e = g.identity();
        let mut worst = f64::INFINITY;
        for u in 0..self.spec.vertex_count() {
            let vertex = self.spec.vertex_at(u);
            let spectral = self.entry(vertex.layer, vertex.layer, &e, t);
            let o = oracle.get(u, u);
            if (spectral - o).norm() > AGREEMENT_TOL {
                return Err(Error::InternalConsistency {
                    spectral: spectral.norm(),
                    oracle: o.norm(),
                });
            }
            worst = worst.min(spectral.norm()).min(o.norm());
        }
        Ok(worst)
    }
}

fn pow2(e: i64) -> Ratio<i64> {
    if e >= 0 {
        Ratio::from_integer(1i64 << e)
    } else {
        Ratio::new(1, 1i64 << (-e))
    }
}

pub fn necessary_conditions(spec: &SemiCayleySpec, u: &Vertex, v: &Vertex) -> Result<Necessary> {
    Analyzer::new(spec).necessary(u, v)
}

/// Same-layer pair with `R = L`.
pub fn decide_same_layer_rl(spec: &SemiCayleySpec, u: &Vertex, v: &Vertex) -> Result<PstVerdict> {
    Analyzer::new(spec).same_layer_balanced(u, v)
}

pub fn decide_cross_layer(spec: &SemiCayleySpec, u: &Vertex, v: &Vertex) -> Result<PstVerdict> {
    Analyzer::new(spec).cross_layer(u, v)
}

pub fn decide_support(spec: &SemiCayleySpec, u: &Vertex, v: &Vertex) -> Result<PstVerdict> {
    Analyzer::new(spec).support_analysis(u, v)
}

/// Any pair, routed to the matching procedure.
pub fn decide_pair(spec: &SemiCayleySpec, u: &Vertex, v: &Vertex) -> Result<PstVerdict> {
    Analyzer::new(spec).decide(u, v)
}

pub fn verify_at_time(spec: &SemiCayleySpec, u: &Vertex, v: &Vertex, t: f64, tol: f64) -> Result<Verification> {
    Analyzer::new(spec).with_tolerance(tol).verify(u, v, t)
}

pub fn periodicity(spec: &SemiCayleySpec) -> Result<PeriodReport> {
    Analyzer::new(spec).periodicity()
}

/// Verdicts for every pair up to translation.
pub fn find_pst(spec: &SemiCayleySpec) -> Result<Vec<PstVerdict>> {
    Analyzer::new(spec).find()
}
