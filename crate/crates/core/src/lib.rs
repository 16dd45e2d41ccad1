//! Exact verification of Hecke lifting congruences for framed torus knots
//! and framed unknots.
//!
//! The crate is organized bottom-up:
//!
//! - [`combinatorics`]: partitions, z_μ, κ_λ, symmetric-group characters.
//! - [`exactring`]: sparse Laurent polynomials in q, a over ℚ, fractions
//!   with q-only denominators, numeric evaluation oracles.
//! - [`zbasis`]: membership and division in ℤ[z², a^{±1}], z = q − q^{-1}.
//! - [`torus`]: colored HOMFLY-PT values of torus knots and the unknot.
//! - [`hecke`]: the g_p / F_{p,d,m} congruence pipeline and its lemmas.
//! - [`alexlimit`]: a → 1 limits, colored Alexander checks for hooks.
//! - [`lmov`]: truncated framed LMOV integrality.

pub mod alexlimit;
pub mod combinatorics;
pub mod error;
pub mod exactring;
pub mod hecke;
pub mod lmov;
pub mod torus;
pub mod zbasis;

pub use combinatorics::{chi, partitions_of, CharacterTable, HookShape, Partition};
pub use error::{Error, Result};
pub use exactring::{LaurentQA, QExp, QPoly, RingFraction};
pub use hecke::{verify_hecke, CongruenceReport};
pub use torus::TorusKnot;
pub use zbasis::ZAPoly;
