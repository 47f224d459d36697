use crate::error::ReactionError;
use crate::mol::Molecule;
use crate::smiles::parse;

/// Reactants, agents and products of a `reactants>agents>products` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reaction {
    pub reactants: Vec<Molecule>,
    pub agents: Vec<Molecule>,
    pub products: Vec<Molecule>,
}

fn section(text: &str, name: &'static str) -> Result<Vec<Molecule>, ReactionError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split('.')
        .enumerate()
        .map(|(index, part)| {
            parse(part).map_err(|source| ReactionError::Component { section: name, index, source })
        })
        .collect()
}

pub fn parse_reaction(text: &str) -> Result<Reaction, ReactionError> {
    let parts: Vec<&str> = text.split('>').collect();
    if parts.len() != 3 {
        return Err(ReactionError::SeparatorCount(parts.len() - 1));
    }
    let reactants = section(parts[0], "reactant")?;
    if reactants.is_empty() {
        return Err(ReactionError::NoReactants);
    }
    let agents = section(parts[1], "agent")?;
    let products = section(parts[2], "product")?;
    if products.is_empty() {
        return Err(ReactionError::NoProducts);
    }
    Ok(Reaction { reactants, agents, products })
}
