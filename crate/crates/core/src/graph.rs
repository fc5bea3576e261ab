//! Semi-Cayley graphs `SC(G, R, L, S)` over finite abelian groups.
//!
//! The vertex set is `G × {0, 1}`. With the group written additively:
//!
//! * `(x,0) ~ (y,0)` when `y - x ∈ R` (right edges),
//! * `(x,1) ~ (y,1)` when `y - x ∈ L` (left edges),
//! * `(x,0) ~ (y,1)` when `y - x ∈ S` (spoke edges).
//!
//! Rows of the adjacency matrix list every layer-0 vertex in group
//! enumeration order followed by every layer-1 vertex.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement, GroupSubset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct SemiCayleySpec {
    group: AbelianGroup,
    right: GroupSubset,
    left: GroupSubset,
    spoke: GroupSubset,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    group: AbelianGroup,
    #[serde(rename = "R")]
    right: Vec<GroupElement>,
    #[serde(rename = "L")]
    left: Vec<GroupElement>,
    #[serde(rename = "S")]
    spoke: Vec<GroupElement>,
}

impl TryFrom<SpecRepr> for SemiCayleySpec {
    type Error = Error;

    fn try_from(repr: SpecRepr) -> Result<Self> {
        let g = repr.group;
        let right = g.subset(repr.right)?;
        let left = g.subset(repr.left)?;
        let spoke = g.subset(repr.spoke)?;
        SemiCayleySpec::new(g, right, left, spoke)
    }
}

impl From<SemiCayleySpec> for SpecRepr {
    fn from(spec: SemiCayleySpec) -> Self {
        SpecRepr {
            right: spec.right.iter().cloned().collect(),
            left: spec.left.iter().cloned().collect(),
            spoke: spec.spoke.iter().cloned().collect(),
            group: spec.group,
        }
    }
}

impl SemiCayleySpec {
    /// Validates `R = R⁻¹`, `L = L⁻¹` and that neither contains the identity.
    /// `S` is unconstrained.
    pub fn new(
        group: AbelianGroup,
        right: GroupSubset,
        left: GroupSubset,
        spoke: GroupSubset,
    ) -> Result<Self> {
        for (name, set) in [("R", &right), ("L", &left), ("S", &spoke)] {
            for x in set.iter() {
                group.validate(x)?;
            }
            if name == "S" {
                continue;
            }
            if set.contains(&group.identity()) {
                return Err(Error::ContainsIdentity(name));
            }
            if !group.is_inverse_closed(set) {
                return Err(Error::NotInverseClosed(name));
            }
        }
        Ok(SemiCayleySpec {
            group,
            right,
            left,
            spoke,
        })
    }

    /// Shorthand taking raw exponent vectors.
    pub fn from_lists(
        factors: &[u64],
        right: &[&[i64]],
        left: &[&[i64]],
        spoke: &[&[i64]],
    ) -> Result<Self> {
        let g = AbelianGroup::new(factors.to_vec())?;
        let r = g.subset_from(right)?;
        let l = g.subset_from(left)?;
        let s = g.subset_from(spoke)?;
        Self::new(g, r, l, s)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn right(&self) -> &GroupSubset {
        &self.right
    }

    pub fn left(&self) -> &GroupSubset {
        &self.left
    }

    pub fn spoke(&self) -> &GroupSubset {
        &self.spoke
    }

    /// `R = L` as sets.
    pub fn is_balanced(&self) -> bool {
        self.right == self.left
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.group.order()
    }

    pub fn vertex_index(&self, v: &Vertex) -> Result<usize> {
        self.group.validate(&v.element)?;
        if v.layer > 1 {
            return Err(Error::Precondition(format!("layer {} is not 0 or 1", v.layer)));
        }
        Ok(v.layer as usize * self.group.order() + self.group.index_of(&v.element))
    }

    pub fn vertex_at(&self, index: usize) -> Vertex {
        let n = self.group.order();
        Vertex {
            element: self.group.element_at(index % n),
            layer: (index / n) as u8,
        }
    }

    /// Adjacency matrix built straight from the three edge rules.
    pub fn build(&self) -> AdjacencyMatrix {
        let g = &self.group;
        let n = g.order();
        let mut adj = AdjacencyMatrix::zeros(2 * n);
        let elements: Vec<GroupElement> = g.elements().collect();
        for (i, x) in elements.iter().enumerate() {
            for (set, row_layer, col_layer) in
                [(&self.right, 0, 0), (&self.left, 1, 1), (&self.spoke, 0, 1)]
            {
                for s in set.iter() {
                    // y = s·x
                    let j = g.index_of(&g.mul_unchecked(s, x));
                    let a = row_layer * n + i;
                    let b = col_layer * n + j;
                    adj.set(a, b);
                    adj.set(b, a);
                }
            }
        }
        adj
    }
}

impl fmt::Display for SemiCayleySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &GroupSubset| {
            s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(
            f,
            "SC({}, {{{}}}, {{{}}}, {{{}}})",
            self.group,
            list(&self.right),
            list(&self.left),
            list(&self.spoke)
        )
    }
}

/// A vertex `(g, layer)`. Serializes as `[[exponents], layer]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(GroupElement, u8)", into = "(GroupElement, u8)")]
pub struct Vertex {
    pub element: GroupElement,
    pub layer: u8,
}

impl Vertex {
    pub fn new(element: GroupElement, layer: u8) -> Self {
        Vertex { element, layer }
    }
}

impl From<(GroupElement, u8)> for Vertex {
    fn from((element, layer): (GroupElement, u8)) -> Self {
        Vertex { element, layer }
    }
}

impl From<Vertex> for (GroupElement, u8) {
    fn from(v: Vertex) -> Self {
        (v.element, v.layer)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.element, self.layer)
    }
}

/// Dense symmetric 0/1 matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    dim: usize,
    entries: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn zeros(dim: usize) -> Self {
        AdjacencyMatrix {
            dim,
            entries: vec![0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.entries[i * self.dim + j] = 1;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn edge_count(&self) -> usize {
        let ones: usize = self.entries.iter().map(|&e| e as usize).sum();
        let loops: usize = (0..self.dim).map(|i| self.get(i, i) as usize).sum();
        (ones - loops) / 2 + loops
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) as usize).sum())
            .collect()
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j) as f64)
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.entries.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }
}

/// A group `G = H ∪ xH` containing the abelian group `H` with index two.
///
/// The extension is described by the automorphism `σ(h) = x h x⁻¹` of `H`
/// (given by the images of the generators) and by `x² ∈ H`. Elements are
/// written `x^e·h`, so `h·x = x·σ(h)` and products reduce with `x² = z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexTwoExtension {
    base: AbelianGroup,
    generator_images: Vec<GroupElement>,
    x_square: GroupElement,
}

/// `x^coset · element` in an [`IndexTwoExtension`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtElement {
    pub coset: u8,
    pub element: GroupElement,
}

/// How `x` acts on `H` by conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Action {
    Named(NamedAction),
    /// Images of the cyclic generators of `H`.
    Images(Vec<GroupElement>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedAction {
    Identity,
    Inversion,
}

impl IndexTwoExtension {
    pub fn new(base: AbelianGroup, action: &Action, x_square: GroupElement) -> Result<Self> {
        base.validate(&x_square)?;
        let k = base.rank();
        let unit = |l: usize| {
            let mut e = vec![0i64; k];
            e[l] = 1;
            base.reduce(&e).expect("rank matches")
        };
        let generator_images: Vec<GroupElement> = match action {
            Action::Named(NamedAction::Identity) => (0..k).map(unit).collect(),
            Action::Named(NamedAction::Inversion) => {
                (0..k).map(|l| base.inverse_unchecked(&unit(l))).collect()
            }
            Action::Images(images) => {
                if images.len() != k {
                    return Err(Error::NotAnAutomorphism(format!(
                        "expected {k} generator images, got {}",
                        images.len()
                    )));
                }
                for im in images {
                    base.validate(im)?;
                }
                images.clone()
            }
        };
        let ext = IndexTwoExtension {
            base,
            generator_images,
            x_square,
        };
        ext.check_action()?;
        Ok(ext)
    }

    /// `Dih(A, x)`: `x` inverts `A` and `x² = e`.
    pub fn dihedral(base: AbelianGroup) -> Self {
        let e = base.identity();
        Self::new(base, &Action::Named(NamedAction::Inversion), e).expect("inversion is valid")
    }

    /// `Dic(A, y, x)`: `x` inverts `A` and `x² = y`, an involution of `A`.
    pub fn dicyclic(base: AbelianGroup, y: GroupElement) -> Result<Self> {
        if base.order_of(&y)? != 2 {
            return Err(Error::Family(format!("y = {y} must have order 2")));
        }
        if base.exponent() <= 2 {
            return Err(Error::Family("Dic(A,y,x) needs A of exponent greater than 2".into()));
        }
        Self::new(base, &Action::Named(NamedAction::Inversion), y)
    }

    fn check_action(&self) -> Result<()> {
        let g = &self.base;
        for (im, &n) in self.generator_images.iter().zip(g.factors()) {
            if g.pow(im, n as i64)? != g.identity() {
                return Err(Error::NotAnAutomorphism(format!(
                    "image {im} of a generator of order {n} does not have order dividing {n}"
                )));
            }
        }
        let images: GroupSubset = g.subset(g.elements().map(|h| self.sigma(&h)))?;
        if images.len() != g.order() {
            return Err(Error::NotAnAutomorphism("map is not bijective".into()));
        }
        // H is abelian, so conjugation by x² is trivial.
        if g.elements().any(|h| self.sigma(&self.sigma(&h)) != h) {
            return Err(Error::NotAnAutomorphism("σ² must be the identity".into()));
        }
        if self.sigma(&self.x_square) != self.x_square {
            return Err(Error::NotAnAutomorphism("σ must fix x²".into()));
        }
        Ok(())
    }

    pub fn base(&self) -> &AbelianGroup {
        &self.base
    }

    /// `σ(h) = x h x⁻¹`
    pub fn sigma(&self, h: &GroupElement) -> GroupElement {
        let g = &self.base;
        let mut acc = g.identity();
        for (&e, im) in h.exponents().iter().zip(&self.generator_images) {
            acc = g.mul_unchecked(&acc, &g.pow(im, e as i64).expect("valid"));
        }
        acc
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let g = &self.base;
        // x^a h1 · x^b h2 = x^(a+b) σ^b(h1) h2
        let moved = if b.coset == 1 {
            self.sigma(&a.element)
        } else {
            a.element.clone()
        };
        let mut element = g.mul_unchecked(&moved, &b.element);
        let mut coset = a.coset + b.coset;
        if coset == 2 {
            element = g.mul_unchecked(&self.x_square, &element);
            coset = 0;
        }
        ExtElement { coset, element }
    }

    pub fn inverse(&self, a: &ExtElement) -> ExtElement {
        let g = &self.base;
        if a.coset == 0 {
            return ExtElement {
                coset: 0,
                element: g.inverse_unchecked(&a.element),
            };
        }
        // (x h)(x k) = z σ(h) k = e  ⇒  k = (z σ(h))⁻¹
        let k = g.inverse_unchecked(&g.mul_unchecked(&self.x_square, &self.sigma(&a.element)));
        ExtElement { coset: 1, element: k }
    }

    pub fn identity(&self) -> ExtElement {
        ExtElement {
            coset: 0,
            element: self.base.identity(),
        }
    }

    /// The `2n` elements in vertex order: `H` first, then `xH`.
    pub fn elements(&self) -> Vec<ExtElement> {
        (0..2u8)
            .flat_map(|coset| {
                self.base
                    .elements()
                    .map(move |element| ExtElement { coset, element })
            })
            .collect()
    }

    /// `T = T1 ∪ x·T2`, checked to be an undirected Cayley set.
    pub fn cayley_set(&self, t1: &GroupSubset, t2: &GroupSubset) -> Result<Vec<ExtElement>> {
        let mut t: Vec<ExtElement> = t1
            .iter()
            .map(|h| ExtElement { coset: 0, element: h.clone() })
            .chain(t2.iter().map(|h| ExtElement { coset: 1, element: h.clone() }))
            .collect();
        t.sort();
        if t.contains(&self.identity()) {
            return Err(Error::ContainsIdentity("T"));
        }
        if t.iter().any(|s| t.binary_search(&self.inverse(s)).is_err()) {
            return Err(Error::NotInverseClosed("T"));
        }
        Ok(t)
    }

    /// Adjacency of `Cay(G, T)` (edges `{g, s·g}`) in the order of [`Self::elements`].
    pub fn cayley_adjacency(&self, t: &[ExtElement]) -> AdjacencyMatrix {
        let elements = self.elements();
        let n = self.base.order();
        let index = |e: &ExtElement| e.coset as usize * n + self.base.index_of(&e.element);
        let mut adj = AdjacencyMatrix::zeros(2 * n);
        for (i, g) in elements.iter().enumerate() {
            for s in t {
                let j = index(&self.mul(s, g));
                adj.set(i, j);
                adj.set(j, i);
            }
        }
        adj
    }

    /// `Cay(G, T1 ∪ x·T2)` as a semi-Cayley graph over `H`.
    ///
    /// Under the bijection `(h,0) ↦ h`, `(h,1) ↦ x·h` the sets are read off
    /// by membership: `R = {h : h ∈ T}`, `L = {h : x h x⁻¹ ∈ T}` and
    /// `S = {h : x h ∈ T}`.
    pub fn to_semi_cayley(&self, t1: &GroupSubset, t2: &GroupSubset) -> Result<SemiCayleySpec> {
        let t = self.cayley_set(t1, t2)?;
        let member = |e: ExtElement| t.binary_search(&e).is_ok();
        let x = ExtElement {
            coset: 1,
            element: self.base.identity(),
        };
        let x_inv = self.inverse(&x);
        let g = &self.base;
        let mut right = Vec::new();
        let mut left = Vec::new();
        let mut spoke = Vec::new();
        for h in g.elements() {
            let as_ext = ExtElement { coset: 0, element: h.clone() };
            if member(as_ext.clone()) {
                right.push(h.clone());
            }
            if member(self.mul(&self.mul(&x, &as_ext), &x_inv)) {
                left.push(h.clone());
            }
            if member(self.mul(&x, &as_ext)) {
                spoke.push(h);
            }
        }
        SemiCayleySpec::new(g.clone(), g.subset(right)?, g.subset(left)?, g.subset(spoke)?)
    }
}

/// `Cay(G, T1 ∪ x·T2)` over an index-two extension, as `SC(H, R, L, S)`.
pub fn from_cayley_index2(
    base: AbelianGroup,
    action: &Action,
    x_square: GroupElement,
    t1: &GroupSubset,
    t2: &GroupSubset,
) -> Result<SemiCayleySpec> {
    IndexTwoExtension::new(base, action, x_square)?.to_semi_cayley(t1, t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_cycle() {
        let spec = SemiCayleySpec::from_lists(&[2], &[&[1]], &[&[1]], &[&[0]]).unwrap();
        let adj = spec.build();
        assert_eq!(adj.dim(), 4);
        assert_eq!(adj.edge_count(), 4);
        assert!(adj.degrees().iter().all(|&d| d == 2));
        // (0,0) and (1,1) are the only non-adjacent distinct pair through the centre
        assert_eq!(adj.get(0, 3), 0);
        assert_eq!(adj.get(1, 2), 0);
        assert_eq!(adj.get(0, 1), 1);
        assert_eq!(adj.get(0, 2), 1);
    }

    #[test]
    fn validation() {
        assert_eq!(
            SemiCayleySpec::from_lists(&[5], &[&[1]], &[], &[]),
            Err(Error::NotInverseClosed("R"))
        );
        assert_eq!(
            SemiCayleySpec::from_lists(&[5], &[], &[&[0]], &[]),
            Err(Error::ContainsIdentity("L"))
        );
        // S may hold the identity and need not be inverse-closed
        assert!(SemiCayleySpec::from_lists(&[5], &[], &[], &[&[0], &[1]]).is_ok());
    }

    #[test]
    fn empty_spoke_is_block_diagonal() {
        let spec =
            SemiCayleySpec::from_lists(&[6], &[&[1], &[5]], &[&[2], &[4], &[3]], &[]).unwrap();
        let adj = spec.build();
        for i in 0..6 {
            for j in 6..12 {
                assert_eq!(adj.get(i, j), 0);
            }
        }
        let d = adj.degrees();
        assert!(d[..6].iter().all(|&x| x == 2));
        assert!(d[6..].iter().all(|&x| x == 3));
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"group":{"factors":[2]},"R":[[1]],"L":[[1]],"S":[[0]]}"#;
        let spec: SemiCayleySpec = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&spec).unwrap(), text);
        let bad = r#"{"group":{"factors":[5]},"R":[[1]],"L":[],"S":[]}"#;
        assert!(serde_json::from_str::<SemiCayleySpec>(bad).is_err());
        let v: Vertex = serde_json::from_str("[[1],1]").unwrap();
        assert_eq!(spec.vertex_index(&v).unwrap(), 3);
    }

    #[test]
    fn dihedral_reduction_matches_direct_cayley_graph() {
        let a = AbelianGroup::cyclic(5).unwrap();
        let ext = IndexTwoExtension::dihedral(a.clone());
        let t1 = a.subset_from(&[&[1], &[4]]).unwrap();
        let t2 = a.subset_from(&[&[0], &[2]]).unwrap();
        let spec = ext.to_semi_cayley(&t1, &t2).unwrap();
        assert_eq!(spec.right(), &t1);
        assert_eq!(spec.left(), &t1);
        assert_eq!(spec.spoke(), &t2);
        let t = ext.cayley_set(&t1, &t2).unwrap();
        assert_eq!(ext.cayley_adjacency(&t), spec.build());
    }

    #[test]
    fn dicyclic_requires_closed_coset_part() {
        let a = AbelianGroup::cyclic(4).unwrap();
        let y = a.reduce(&[2]).unwrap();
        let ext = IndexTwoExtension::dicyclic(a.clone(), y).unwrap();
        // (x t)⁻¹ = x t y here, so {x} alone is not inverse-closed.
        let lone = a.subset_from(&[&[0]]).unwrap();
        assert_eq!(
            ext.to_semi_cayley(&GroupSubset::empty(), &lone),
            Err(Error::NotInverseClosed("T"))
        );
        let pair = a.subset_from(&[&[0], &[2]]).unwrap();
        let spec = ext.to_semi_cayley(&GroupSubset::empty(), &pair).unwrap();
        let t = ext.cayley_set(&GroupSubset::empty(), &pair).unwrap();
        assert_eq!(ext.cayley_adjacency(&t), spec.build());
    }

    #[test]
    fn abelian_extension_with_identity_action() {
        // Z_4 ⊃ 2Z_4 ≅ Z_2 with x = 1, x² = 2 ↦ [1] in Z_2
        let h = AbelianGroup::cyclic(2).unwrap();
        let z = h.reduce(&[1]).unwrap();
        let ext = IndexTwoExtension::new(h.clone(), &Action::Named(NamedAction::Identity), z).unwrap();
        // T = {x, x³} = {x·[0], x·[1]} is Cay(Z_4, {±1}) = C_4
        let t2 = h.full_subset();
        let spec = ext.to_semi_cayley(&GroupSubset::empty(), &t2).unwrap();
        assert_eq!(spec.build().edge_count(), 4);
        let t = ext.cayley_set(&GroupSubset::empty(), &t2).unwrap();
        assert_eq!(ext.cayley_adjacency(&t), spec.build());
    }

    #[test]
    fn rejects_non_automorphisms() {
        let h = AbelianGroup::cyclic(4).unwrap();
        // g ↦ 2g is not injective
        let doubling = Action::Images(vec![h.reduce(&[2]).unwrap()]);
        assert!(matches!(
            IndexTwoExtension::new(h.clone(), &doubling, h.identity()),
            Err(Error::NotAnAutomorphism(_))
        ));
        // inversion does not fix x² = 1 in Z_4
        let inv = Action::Named(NamedAction::Inversion);
        assert!(IndexTwoExtension::new(h.clone(), &inv, h.reduce(&[1]).unwrap()).is_err());
    }
}
