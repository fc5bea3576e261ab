//! Semi-Cayley graphs over finite abelian groups: closed-form spectra from
//! group characters, continuous-time quantum walk transfer matrices, and
//! exact decisions for perfect state transfer and periodicity.
//!
//! A semi-Cayley graph `SC(G, R, L, S)` has two copies of an abelian group
//! `G` as its vertex set. Its adjacency matrix splits into `n = |G|` blocks
//! of size two, one per irreducible character, which gives every eigenvalue,
//! eigenvector and spectral projector in closed form. Integrality and the
//! conditions for perfect state transfer are then decided in exact
//! cyclotomic arithmetic, and every positive answer is re-checked against a
//! matrix exponential computed without using the spectral formulas.
//!
//! ```
//! use semicayley::{families, pst};
//!
//! // the 4-cycle as SC(Z_2, {1}, {1}, {0})
//! let c4 = semicayley::SemiCayleySpec::from_lists(&[2], &[&[1]], &[&[1]], &[&[0]]).unwrap();
//! let verdicts = pst::find_pst(&c4).unwrap();
//! assert!(verdicts.iter().any(|v| v.is_yes()));
//!
//! let sunlet = families::sunlet(6).unwrap();
//! assert!(pst::find_pst(&sunlet).unwrap().iter().all(|v| v.is_no()));
//! ```

pub mod character;
pub mod error;
pub mod families;
pub mod graph;
pub mod group;
pub mod pst;
pub mod spectral;
pub mod surd;
pub mod time;
pub mod transfer;
pub mod valuation;

pub use character::{CharacterIndex, CycloValue, RootOfUnity};
pub use error::{Error, Result};
pub use graph::{AdjacencyMatrix, SemiCayleySpec, Vertex};
pub use group::{AbelianGroup, GroupElement, GroupSubset};
pub use pst::{PeriodReport, PstVerdict, Status};
pub use spectral::{ProjectorCoefficients, Spectrum};
pub use time::SymbolicTime;
pub use transfer::TransferMatrix;
pub use valuation::TwoAdicVal;
