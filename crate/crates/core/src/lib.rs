//! Construction, verification and exact search of B_h[g] sets in products
//! of abelian groups.
//!
//! A set A in an abelian group is B_h[g] when every group element is the sum
//! of h members of A (repetition allowed, order ignored) in at most g ways.
//!
//! - [`finite_field`]: GF(p^n) arithmetic, primitive elements, discrete logs.
//! - [`groups`]: product groups Z_{m_1} x ... x Z_{m_d} and boxes in Z^d.
//! - [`symmetric`]: power sums, Newton's identities, root recovery.
//! - [`constructions`]: moment curve, base-N lifting, translate unions,
//!   modular reduction, Golomb sets.
//! - [`verifier`]: brute-force representation counting.
//! - [`search`]: exact extremal sizes and the greedy sequence.
//! - [`setfile`] and [`cli`]: the text format and command line.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod finite_field;
pub mod groups;
pub mod multiset;
pub mod search;
pub mod setfile;
pub mod symmetric;
pub mod verifier;

pub use error::{Error, Result};
pub use finite_field::{FieldElement, FieldSpec};
pub use groups::{BhgSet, GroupElement, GroupSpec};
