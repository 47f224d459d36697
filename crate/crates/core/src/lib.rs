//! Molecule parsing, canonical SMILES and derived graph properties.

pub mod element;
pub mod error;
mod graph;
pub mod mol;
pub mod molgraph;
mod perceive;
pub mod reaction;
pub mod smiles;

pub use element::Element;
pub use error::{MoleculeError, ReactionError, SmilesError};
pub use mol::{Atom, Bond, BondOrder, BondStereo, Molecule, TetraStereo, IMPLICIT};
pub use reaction::{parse_reaction, Reaction};
pub use smiles::{canonical_ranks, canonicalize, parse, write_canonical, write_random};
