//! Cubic residuosity over the rational integers.
//!
//! The crate decides whether `x^3 ≡ c (mod m)` is solvable. For a prime
//! `p ≡ 1 (mod 3)` with `4p = L^2 + 27M^2` it offers two independent
//! routes to the cubic character of an integer:
//!
//! * [`character`]: direct exponentiation with the primary Eisenstein prime
//!   over `p`;
//! * [`ratchar`]: a purely rational character that only looks at the slope
//!   `M/L` modulo each prime factor of `c`, using Lehmer's criterion for
//!   residues and the `g_γ` slope families for the two kinds of
//!   non-residue.
//!
//! Supporting modules cover `Z[w]` arithmetic ([`eisenstein`]), the
//! `(L, M)` decomposition ([`decompose`]), slope enumeration ([`slopes`]),
//! residue tables ([`tables`]) and composite moduli ([`solver`]).

pub mod arith;
pub mod character;
pub mod cli;
pub mod decompose;
pub mod eisenstein;
pub mod factor;
pub mod ratchar;
pub mod selftest;
pub mod slopes;
pub mod solver;
pub mod tables;

pub use character::{CharValue, CharacterContext};
pub use decompose::{decompose_prime, Decomposition};
pub use eisenstein::{CubeRoot, EisensteinInt};
pub use ratchar::RationalCharacter;
pub use slopes::{GammaParams, Slope, SlopeSet};
