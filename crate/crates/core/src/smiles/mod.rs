//! SMILES reading and writing.

mod canon;
mod parse;
mod write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use canon::{canonical_ranks, write_canonical};
pub use parse::parse;

use crate::mol::Molecule;

/// A valid SMILES for `mol` with root atom, branch order and component
/// order drawn from a generator seeded by `seed`.
pub fn write_random(mol: &Molecule, seed: u64) -> String {
    if mol.atom_count() <= 1 {
        return write_canonical(mol);
    }
    let mut ranks: Vec<usize> = (0..mol.atom_count()).collect();
    ranks.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    write::write_ranked(mol, &ranks).0
}

/// Canonical SMILES of the parsed input.
pub fn canonicalize(text: &str) -> Result<String, crate::error::SmilesError> {
    Ok(write_canonical(&parse(text)?))
}
