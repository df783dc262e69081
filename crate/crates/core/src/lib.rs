//! Finite multisets over supernatural denominators, finite MV-algebras, and
//! the contravariant equivalence between them.
//!
//! The library has three layers:
//!
//! * algebra of [`supernat::SupernaturalNumber`]s (the divisibility lattice
//!   extended with infinite exponents) and the point-set side built on it:
//!   [`multiset::FiniteMultiset`] and denominator-decreasing arrows;
//! * categorical machinery for those multisets: finite (co)limits with their
//!   explicit denominator formulas ([`mscat`]), quotient/co-relation calculus
//!   ([`corel`]), and finite MV-algebras with brute-force homomorphism
//!   search as an independent oracle ([`mv`], [`duality`]);
//! * an executable catalog of structural checks ([`verify`]) that the acceptance
//!   suite and the CLI both run.

pub mod corel;
pub mod dot;
pub mod duality;
pub mod mscat;
pub mod multiset;
pub mod mv;
pub mod supernat;
pub mod verify;
