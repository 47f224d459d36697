use thiserror::Error;

/// Structural faults detected while assembling a molecule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoleculeError {
    #[error("atom {0} is bonded to itself")]
    SelfBond(usize),
    #[error("bond {0} references a missing atom")]
    DanglingBond(usize),
    #[error("duplicate bond between atoms {0} and {1}")]
    DuplicateBond(usize, usize),
    #[error("valence violation on atom {atom} ({element})")]
    Valence { atom: usize, element: String },
    #[error("cannot kekulize the aromatic system containing atom {atom}")]
    Kekulize { atom: usize },
}

/// Errors raised while reading SMILES text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesError {
    #[error("empty SMILES")]
    Empty,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unmatched ring closure {label} opened at position {pos}")]
    UnmatchedRing { label: u16, pos: usize },
    #[error("unknown element '{symbol}' at position {pos}")]
    UnknownElement { symbol: String, pos: usize },
    #[error("unsupported SMILES feature at position {pos}: {what}")]
    Unsupported { pos: usize, what: String },
    #[error(transparent)]
    Structure(#[from] MoleculeError),
}

impl SmilesError {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        SmilesError::Syntax { pos, msg: msg.into() }
    }

    /// Short stable code used in reward reasons and logs.
    pub fn code(&self) -> &'static str {
        match self {
            SmilesError::Empty => "empty",
            SmilesError::Syntax { .. } => "syntax",
            SmilesError::UnmatchedRing { .. } => "unmatched_ring",
            SmilesError::UnknownElement { .. } => "unknown_element",
            SmilesError::Unsupported { .. } => "unsupported",
            SmilesError::Structure(MoleculeError::Valence { .. }) => "valence",
            SmilesError::Structure(MoleculeError::Kekulize { .. }) => "kekulize",
            SmilesError::Structure(_) => "structure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReactionError {
    #[error("reaction SMILES needs exactly two '>' separators, found {0}")]
    SeparatorCount(usize),
    #[error("reaction has no reactants")]
    NoReactants,
    #[error("reaction has no products")]
    NoProducts,
    #[error("{section} component {index}: {source}")]
    Component {
        section: &'static str,
        index: usize,
        #[source]
        source: SmilesError,
    },
}
