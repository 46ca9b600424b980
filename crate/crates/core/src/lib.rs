//! Signed free monoids with the reversal-flip involution, signed pairing
//! trees, abelian quotients onto integer lattices, and an exact
//! punctured-plane oracle for flagged loops.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is `Send + Sync`.

pub mod error;
pub mod plane;
pub mod shell;
pub mod suites;
pub mod tower;
pub mod tree;
pub mod word;

pub use error::{Error, ParseError, Result};
pub use plane::{FlaggedLoop, FreeWord, Point, PuncturedPlane, Traversal};
pub use shell::{Outcome, Session};
pub use tower::{AbelianVector, HomologyClass, RelationLattice, SignedMultiset};
pub use tree::{PairingTree, RootedPresentation};
pub use word::{CanonicalPolicy, GeneratorSet, PresentationClass, Sign, SignedLetter, SignedWord};
