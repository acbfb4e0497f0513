//! Rateless erasure codes with doped peeling decoders.
//!
//! The crate is organized bottom-up:
//!
//! * [`bitlinalg`] — bit-packed GF(2) vectors, a sparse column-major
//!   incidence structure, and a dense eliminator with deficiency reporting.
//! * [`degree`] — output-degree distributions (soliton, the fixed raptor
//!   table) and per-column sampling with optional dense reserved rows.
//! * [`codec`] — encoder, the two-phase decoder (peeling plus inactivation
//!   and final dense elimination), byte-exact wire formats.
//! * [`model`] — closed-form predictions: degree evolution, ripple and
//!   interdoping-yield laws, rank and coverage probabilities, repair cost.
//! * [`sim`] — Monte Carlo trial runner, experiment presets, CSV/JSON output.
//!
//! Everything is deterministic under a caller-supplied 64-bit seed; see
//! [`seeding`] for how independent streams are derived from it.

pub mod bitlinalg;
pub mod codec;
pub mod degree;
pub mod model;
pub mod seeding;
pub mod sim;
