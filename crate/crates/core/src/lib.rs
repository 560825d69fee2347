//! Exhaustive computer algebra for finite Γ-rings.
//!
//! Every structure here is finite and every property is decided by complete
//! enumeration: groups and semigroups ([`group`], [`semigroup`]), Γ-rings and
//! their constructions ([`ring`]), gradings by finite semigroups ([`grading`]),
//! ascending filtrations and associated graded rings ([`filtration`]),
//! Γ-modules ([`module`]) and their homomorphisms ([`hom`]).
//!
//! Elements are addressed by index; index order is the lexicographic order of
//! element tuples, which makes "first violating instance" well defined.

pub mod error;
pub mod filtration;
pub mod grading;
pub mod group;
pub mod hom;
pub mod module;
pub mod ring;
pub mod semigroup;
pub mod verdict;

pub use error::{Error, Result};
pub use group::{Elem, FiniteAbelianGroup, QuotientGroup, Subgroup, Tuple};
pub use ring::GammaRing;
pub use semigroup::{FiniteSemigroup, SemigroupMap};
pub use verdict::{Budget, Datum, Verdict, Witness};
