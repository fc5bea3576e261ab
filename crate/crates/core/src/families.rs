//! Named graph families and the JSON graph-source format.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{Action, IndexTwoExtension, SemiCayleySpec};
use crate::group::{AbelianGroup, GroupElement, GroupSubset};

fn check_cycle_length(n: u64) -> Result<AbelianGroup> {
    if n < 3 {
        return Err(Error::Family(format!("n must be at least 3, got {n}")));
    }
    AbelianGroup::cyclic(n)
}

fn plus_minus_one(g: &AbelianGroup) -> GroupSubset {
    g.subset_from(&[&[1], &[-1]]).expect("cyclic group")
}

/// The `n`-cycle with a pendant edge at every vertex: `SC(Z_n, {±1}, ∅, {0})`.
pub fn sunlet(n: u64) -> Result<SemiCayleySpec> {
    let g = check_cycle_length(n)?;
    let r = plus_minus_one(&g);
    let s = g.subset([g.identity()])?;
    SemiCayleySpec::new(g, r, GroupSubset::empty(), s)
}

/// The `n`-cycle joined to `n` independent vertices: `SC(Z_n, {±1}, ∅, Z_n)`.
pub fn cone(n: u64) -> Result<SemiCayleySpec> {
    let g = check_cycle_length(n)?;
    let r = plus_minus_one(&g);
    let s = g.full_subset();
    SemiCayleySpec::new(g, r, GroupSubset::empty(), s)
}

/// Join of `Cay(G,R)` and `Cay(G,L)`: `SC(G, R, L, G)`.
pub fn join_spec(group: AbelianGroup, right: GroupSubset, left: GroupSubset) -> Result<SemiCayleySpec> {
    let s = group.full_subset();
    SemiCayleySpec::new(group, right, left, s)
}

fn involutions(a: &AbelianGroup) -> GroupSubset {
    a.subset(a.elements().filter(|x| a.order_of(x).unwrap() == 2))
        .expect("elements of a")
}

/// `Cay(Dih(A,x), xA)`.
pub fn dihedral_full_coset(a: AbelianGroup) -> Result<SemiCayleySpec> {
    let all = a.full_subset();
    IndexTwoExtension::dihedral(a).to_semi_cayley(&GroupSubset::empty(), &all)
}

/// `Cay(Dih(A,x), xA ∪ {a ∈ A : o(a) = 2})`.
pub fn dihedral_involutions(a: AbelianGroup) -> Result<SemiCayleySpec> {
    let all = a.full_subset();
    let t1 = involutions(&a);
    IndexTwoExtension::dihedral(a).to_semi_cayley(&t1, &all)
}

/// `Cay(Dic(A,y,x), xA)`.
pub fn dicyclic_full_coset(a: AbelianGroup, y: GroupElement) -> Result<SemiCayleySpec> {
    let all = a.full_subset();
    IndexTwoExtension::dicyclic(a, y)?.to_semi_cayley(&GroupSubset::empty(), &all)
}

/// `Cay(Dic(A,y,x), xA ∪ {a ∈ A : o(a) = 2})`.
pub fn dicyclic_involutions(a: AbelianGroup, y: GroupElement) -> Result<SemiCayleySpec> {
    let all = a.full_subset();
    let t1 = involutions(&a);
    IndexTwoExtension::dicyclic(a, y)?.to_semi_cayley(&t1, &all)
}

/// The `d`-cube `Q_d = Q_{d-1} □ K_2` as `SC(Z_2^{d-1}, E, E, {0})` with `E`
/// the unit vectors. `Q_1 = K_2` lives over the trivial group.
pub fn hypercube(d: u32) -> Result<SemiCayleySpec> {
    if d == 0 {
        return Err(Error::Family("hypercube dimension must be at least 1".into()));
    }
    let g = if d == 1 {
        AbelianGroup::trivial()
    } else {
        AbelianGroup::new(vec![2; d as usize - 1])?
    };
    let units: Vec<GroupElement> = if d == 1 {
        Vec::new()
    } else {
        (0..d as usize - 1)
            .map(|l| {
                let mut e = vec![0i64; d as usize - 1];
                e[l] = 1;
                g.reduce(&e).unwrap()
            })
            .collect()
    };
    let e = g.subset(units)?;
    let s = g.subset([g.identity()])?;
    SemiCayleySpec::new(g, e.clone(), e, s)
}

/// A graph given by a named family and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    Sunlet {
        n: u64,
    },
    Cone {
        n: u64,
    },
    Join {
        group: AbelianGroup,
        #[serde(rename = "R")]
        right: Vec<GroupElement>,
        #[serde(rename = "L")]
        left: Vec<GroupElement>,
    },
    DihedralFullCoset {
        #[serde(rename = "A")]
        base: Vec<u64>,
    },
    DihedralInvolutions {
        #[serde(rename = "A")]
        base: Vec<u64>,
    },
    DicyclicFullCoset {
        #[serde(rename = "A")]
        base: Vec<u64>,
        y: GroupElement,
    },
    DicyclicInvolutions {
        #[serde(rename = "A")]
        base: Vec<u64>,
        y: GroupElement,
    },
    Hypercube {
        d: u32,
    },
    /// `Cay(G, T1 ∪ x·T2)` for `G = H ∪ xH`.
    CayleyIndex2 {
        #[serde(rename = "H")]
        base: AbelianGroup,
        action: Action,
        x_square: GroupElement,
        #[serde(rename = "T1")]
        t1: Vec<GroupElement>,
        #[serde(rename = "T2")]
        t2: Vec<GroupElement>,
    },
}

impl Family {
    pub fn build(&self) -> Result<SemiCayleySpec> {
        match self {
            Family::Sunlet { n } => sunlet(*n),
            Family::Cone { n } => cone(*n),
            Family::Join { group, right, left } => {
                let r = group.subset(right.iter().cloned())?;
                let l = group.subset(left.iter().cloned())?;
                join_spec(group.clone(), r, l)
            }
            Family::DihedralFullCoset { base } => dihedral_full_coset(AbelianGroup::new(base.clone())?),
            Family::DihedralInvolutions { base } => {
                dihedral_involutions(AbelianGroup::new(base.clone())?)
            }
            Family::DicyclicFullCoset { base, y } => {
                let a = AbelianGroup::new(base.clone())?;
                a.validate(y)?;
                dicyclic_full_coset(a, y.clone())
            }
            Family::DicyclicInvolutions { base, y } => {
                let a = AbelianGroup::new(base.clone())?;
                a.validate(y)?;
                dicyclic_involutions(a, y.clone())
            }
            Family::Hypercube { d } => hypercube(*d),
            Family::CayleyIndex2 {
                base,
                action,
                x_square,
                t1,
                t2,
            } => {
                let t1 = base.subset(t1.iter().cloned())?;
                let t2 = base.subset(t2.iter().cloned())?;
                IndexTwoExtension::new(base.clone(), action, x_square.clone())?.to_semi_cayley(&t1, &t2)
            }
        }
    }
}

/// Where a graph comes from: an inline `{"group","R","L","S"}` object or a
/// `{"family": ...}` object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Value", untagged)]
pub enum GraphSource {
    Family(Family),
    Inline(SemiCayleySpec),
}

impl TryFrom<Value> for GraphSource {
    type Error = Error;

    fn try_from(value: Value) -> Result<Self> {
        let is_family = value.get("family").is_some();
        if is_family {
            serde_json::from_value(value)
                .map(GraphSource::Family)
                .map_err(|e| Error::Parse(e.to_string()))
        } else {
            serde_json::from_value(value)
                .map(GraphSource::Inline)
                .map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

impl GraphSource {
    pub fn build(&self) -> Result<SemiCayleySpec> {
        match self {
            GraphSource::Family(f) => f.build(),
            GraphSource::Inline(spec) => Ok(spec.clone()),
        }
    }
}
