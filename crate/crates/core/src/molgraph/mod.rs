//! Properties derived from a molecule's graph.

pub mod filter;
pub mod fingerprint;
pub mod formula;
pub mod pattern;
pub mod rings;
pub mod scaffold;

pub use filter::{carbon_fraction, dataset_filter, heavy_atom_count, FilterVerdict, NoHeavyAtoms};
pub use fingerprint::{
    atom_environments, environment_layers, fingerprint, tanimoto, Fingerprint, WidthMismatch,
    DEFAULT_NBITS, DEFAULT_RADIUS,
};
pub use formula::{molecular_formula, Formula, FormulaError};
pub use pattern::{match_pattern, Pattern, PatternError, PatternLibrary};
pub use rings::{perceive_rings, ring_systems};
pub use scaffold::{murcko_scaffold, ring_cut_fragments};
