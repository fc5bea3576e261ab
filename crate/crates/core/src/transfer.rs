//! Transfer matrices `H(t) = exp(-itA)` of the continuous-time quantum walk.
//!
//! Three independent routes are provided:
//!
//! * [`transfer_matrix`] sums the closed-form spectral decomposition. Every
//!   entry depends only on the two layers and on `h - g`, so one kernel of
//!   `4n` values per time is enough.
//! * [`oracle_expm`] exponentiates the dense adjacency matrix by scaling and
//!   squaring a truncated Taylor series. It uses nothing from the character
//!   machinery and serves as ground truth.
//! * [`block_transfer_rl`] uses the `2×2` block structure available when
//!   `R = L`: with `B = Cay(G, R)` and `C` the spoke matrix,
//!   `H = [[H_B·D1, H_B·C·D2], [H_B·Cᵀ·D2, H_B·D1]]` where
//!   `D1 = cos(t·√(CCᵀ))` and `D2 = -i·sin(t·√(CCᵀ))/√(CCᵀ)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::character::character_exponent;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, SemiCayleySpec, Vertex};
use crate::spectral::{eigenvalues, Spectrum};

/// How a transfer matrix is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Spectral,
    Oracle,
    Block,
}

/// `H(t)` in vertex order together with its time.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    pub time: f64,
    pub matrix: DMatrix<Complex64>,
}

impl TransferMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    /// Largest entrywise deviation of `H·H*` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.matrix * self.matrix.adjoint();
        max_abs_diff(&prod, &DMatrix::identity(self.dim(), self.dim()))
    }
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `K[r][s][a] = H_{(0,r),(a,s)}`, indexed by the position of `a` in the
/// element enumeration.
struct Kernel {
    blocks: [[Vec<Complex64>; 2]; 2],
}

fn root_table(n: u64) -> Vec<Complex64> {
    (0..n)
        .map(|r| Complex64::from_polar(1.0, std::f64::consts::TAU * r as f64 / n as f64))
        .collect()
}

fn kernel(spectrum: &Spectrum, t: f64) -> Kernel {
    let g = spectrum.group();
    let n = g.order();
    let roots = root_table(g.exponent());
    let elements: Vec<_> = g.elements().collect();
    let zero = Complex64::new(0.0, 0.0);
    let mut blocks = [[vec![zero; n], vec![zero; n]], [vec![zero; n], vec![zero; n]]];
    for pair in spectrum.pairs() {
        let k = pair.coefficients;
        let up = Complex64::from_polar(1.0, -pair.lambda_plus * t);
        let down = Complex64::from_polar(1.0, -pair.lambda_minus * t);
        let weights = [
            [k.c_plus * up + k.c_minus * down, k.e_plus * up + k.e_minus * down],
            [k.e_plus.conj() * up + k.e_minus.conj() * down, k.d_plus * up + k.d_minus * down],
        ];
        for (ai, a) in elements.iter().enumerate() {
            let chi = roots[character_exponent(g, pair.index.indices(), a.exponents()) as usize];
            for r in 0..2 {
                for s in 0..2 {
                    blocks[r][s][ai] += weights[r][s] * chi;
                }
            }
        }
    }
    let scale = 1.0 / n as f64;
    for row in blocks.iter_mut() {
        for block in row.iter_mut() {
            block.iter_mut().for_each(|z| *z *= scale);
        }
    }
    Kernel { blocks }
}

/// One entry `H_{u,v}(t)` from the spectral decomposition.
pub fn transfer_entry(spec: &SemiCayleySpec, u: &Vertex, v: &Vertex, t: f64) -> Result<Complex64> {
    spec.vertex_index(u)?;
    spec.vertex_index(v)?;
    let g = spec.group();
    let spectrum = eigenvalues(spec);
    let diff = g.mul_unchecked(&g.inverse_unchecked(&u.element), &v.element);
    let roots = root_table(g.exponent());
    let mut sum = Complex64::new(0.0, 0.0);
    for pair in spectrum.pairs() {
        let k = pair.coefficients;
        let (plus, minus) = match (u.layer, v.layer) {
            (0, 0) => (Complex64::from(k.c_plus), Complex64::from(k.c_minus)),
            (1, 1) => (Complex64::from(k.d_plus), Complex64::from(k.d_minus)),
            (0, 1) => (k.e_plus, k.e_minus),
            _ => (k.e_plus.conj(), k.e_minus.conj()),
        };
        let chi = roots[character_exponent(g, pair.index.indices(), diff.exponents()) as usize];
        sum += (plus * Complex64::from_polar(1.0, -pair.lambda_plus * t)
            + minus * Complex64::from_polar(1.0, -pair.lambda_minus * t))
            * chi;
    }
    Ok(sum / g.order() as f64)
}

/// The full `2n × 2n` matrix from the spectral decomposition.
pub fn transfer_matrix(spec: &SemiCayleySpec, t: f64) -> TransferMatrix {
    transfer_matrix_from(&eigenvalues(spec), t)
}

/// As [`transfer_matrix`], reusing an already computed spectrum.
pub fn transfer_matrix_from(spectrum: &Spectrum, t: f64) -> TransferMatrix {
    let g = spectrum.group();
    let n = g.order();
    let k = kernel(spectrum, t);
    let elements: Vec<_> = g.elements().collect();
    let mut diff = vec![0usize; n * n];
    for (i, x) in elements.iter().enumerate() {
        let inv = g.inverse_unchecked(x);
        for (j, y) in elements.iter().enumerate() {
            diff[i * n + j] = g.index_of(&g.mul_unchecked(&inv, y));
        }
    }
    let matrix = DMatrix::from_fn(2 * n, 2 * n, |i, j| k.blocks[i / n][j / n][diff[(i % n) * n + j % n]]);
    TransferMatrix { time: t, matrix }
}

/// `exp(-itA)` by scaling and squaring of a Taylor series.
pub fn oracle_expm(adjacency: &AdjacencyMatrix, t: f64) -> TransferMatrix {
    let factor = Complex64::new(0.0, -t);
    let m = adjacency.to_dmatrix().map(|x| factor * x);
    TransferMatrix {
        time: t,
        matrix: expm(&m),
    }
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = m.nrows();
    let norm = one_norm(m);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m / Complex64::from(2f64.powi(squarings));
    let mut result = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &scaled / Complex64::from(k as f64);
        result += &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Applies `f` to the spectrum of a real symmetric matrix.
fn symmetric_function(m: DMatrix<f64>, f: impl Fn(f64) -> Complex64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(m);
    let v = eig.eigenvectors.map(Complex64::from);
    let diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
    &v * diag * v.transpose()
}

/// `H(t)` from the block formula; only for `R = L`.
pub fn block_transfer_rl(spec: &SemiCayleySpec, t: f64) -> Result<TransferMatrix> {
    if !spec.is_balanced() {
        return Err(Error::Precondition("block formula requires R = L".into()));
    }
    let g = spec.group();
    let n = g.order();
    let elements: Vec<_> = g.elements().collect();
    let relation = |set: &crate::group::GroupSubset| {
        DMatrix::from_fn(n, n, |x, y| {
            let d = g.mul_unchecked(&g.inverse_unchecked(&elements[x]), &elements[y]);
            if set.contains(&d) {
                1.0
            } else {
                0.0
            }
        })
    };
    let b = relation(spec.right());
    let c = relation(spec.spoke());
    let cct = &c * c.transpose();

    let h_b = symmetric_function(b, |mu| Complex64::from_polar(1.0, -mu * t));
    let d1 = symmetric_function(cct.clone(), |e| Complex64::from((t * e.max(0.0).sqrt()).cos()));
    let d2 = symmetric_function(cct, |e| {
        let sigma = e.max(0.0).sqrt();
        if sigma < 1e-12 {
            Complex64::new(0.0, -t)
        } else {
            Complex64::new(0.0, -(t * sigma).sin() / sigma)
        }
    });
    let cc = c.map(Complex64::from);
    let diag = &h_b * &d1;
    let upper = &h_b * &cc * &d2;
    let lower = &h_b * cc.transpose() * &d2;
    let mut matrix = DMatrix::zeros(2 * n, 2 * n);
    matrix.view_mut((0, 0), (n, n)).copy_from(&diag);
    matrix.view_mut((n, n), (n, n)).copy_from(&diag);
    matrix.view_mut((0, n), (n, n)).copy_from(&upper);
    matrix.view_mut((n, 0), (n, n)).copy_from(&lower);
    Ok(TransferMatrix { time: t, matrix })
}

pub fn evolve(spec: &SemiCayleySpec, t: f64, method: Method) -> Result<TransferMatrix> {
    match method {
        Method::Spectral => Ok(transfer_matrix(spec, t)),
        Method::Oracle => Ok(oracle_expm(&spec.build(), t)),
        Method::Block => block_transfer_rl(spec, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::group::AbelianGroup;
    use std::f64::consts::PI;

    fn four_cycle() -> SemiCayleySpec {
        SemiCayleySpec::from_lists(&[2], &[&[1]], &[&[1]], &[&[0]]).unwrap()
    }

    #[test]
    fn four_cycle_antipodal_at_half_pi() {
        let spec = four_cycle();
        let h = transfer_matrix(&spec, PI / 2.0);
        // vertex (0,0) is opposite (1,1) on the 4-cycle (0,0)-(1,0)-(1,1)-(0,1)
        let u = spec.vertex_index(&Vertex::new(spec.group().identity(), 0)).unwrap();
        let v = spec
            .vertex_index(&Vertex::new(spec.group().element(&[1]).unwrap(), 1))
            .unwrap();
        assert!((h.get(u, v).norm() - 1.0).abs() < 1e-12);
        let o = oracle_expm(&spec.build(), PI / 2.0);
        assert!(h.max_abs_diff(&o) < 1e-12);
    }

    #[test]
    fn entry_matches_matrix() {
        let spec = families::cone(5).unwrap();
        let h = transfer_matrix(&spec, 0.7);
        for i in 0..spec.vertex_count() {
            for j in 0..spec.vertex_count() {
                let e = transfer_entry(&spec, &spec.vertex_at(i), &spec.vertex_at(j), 0.7).unwrap();
                assert!((e - h.get(i, j)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn three_routes_agree() {
        let g = AbelianGroup::new(vec![2, 3]).unwrap();
        let r = g.subset_from(&[&[1, 0], &[0, 1], &[0, 2]]).unwrap();
        let s = g.subset_from(&[&[0, 0], &[1, 1]]).unwrap();
        let spec = SemiCayleySpec::new(g, r.clone(), r, s).unwrap();
        for &t in &[0.0, 0.3, 1.7, 5.0, 12.5] {
            let a = transfer_matrix(&spec, t);
            let b = oracle_expm(&spec.build(), t);
            let c = block_transfer_rl(&spec, t).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-10, "t={t}");
            assert!(a.max_abs_diff(&c) < 1e-10, "t={t}");
            assert!(a.unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn unbalanced_routes_agree() {
        for spec in [families::sunlet(7).unwrap(), families::cone(6).unwrap()] {
            for &t in &[0.4, 3.3, 9.1] {
                let a = transfer_matrix(&spec, t);
                let b = oracle_expm(&spec.build(), t);
                assert!(a.max_abs_diff(&b) < 1e-10);
            }
            assert!(matches!(block_transfer_rl(&spec, 1.0), Err(Error::Precondition(_))));
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let spec = families::sunlet(4).unwrap();
        let h = transfer_matrix(&spec, 0.0);
        assert!(max_abs_diff(&h.matrix, &DMatrix::identity(8, 8)) < 1e-14);
    }

    #[test]
    fn method_json() {
        assert_eq!(serde_json::to_string(&Method::Block).unwrap(), "\"block\"");
    }
}
