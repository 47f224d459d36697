//! Heavy-atom statistics and the dataset admission filter.

use thiserror::Error;

use crate::element::Element;
use crate::mol::Molecule;

pub const MIN_HEAVY_ATOMS: usize = 4;
pub const MAX_HEAVY_ATOMS: usize = 100;
pub const MIN_CARBON_FRACTION: f64 = 0.20;

pub fn heavy_atom_count(mol: &Molecule) -> usize {
    mol.atoms().iter().filter(|a| !a.element.is_hydrogen()).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("carbon fraction is undefined for a molecule without heavy atoms")]
pub struct NoHeavyAtoms;

/// Carbons divided by heavy atoms.
pub fn carbon_fraction(mol: &Molecule) -> Result<f64, NoHeavyAtoms> {
    let heavy = heavy_atom_count(mol);
    if heavy == 0 {
        return Err(NoHeavyAtoms);
    }
    let carbons = mol.atoms().iter().filter(|a| a.element == Element::C).count();
    Ok(carbons as f64 / heavy as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterVerdict {
    Accept,
    TooFewAtoms(usize),
    TooManyAtoms(usize),
    LowCarbonFraction,
}

impl FilterVerdict {
    pub fn accepted(self) -> bool {
        self == FilterVerdict::Accept
    }

    pub fn reason(self) -> &'static str {
        match self {
            FilterVerdict::Accept => "accepted",
            FilterVerdict::TooFewAtoms(_) => "too few heavy atoms",
            FilterVerdict::TooManyAtoms(_) => "too many heavy atoms",
            FilterVerdict::LowCarbonFraction => "carbon fraction below threshold",
        }
    }
}

pub fn dataset_filter(mol: &Molecule) -> FilterVerdict {
    let heavy = heavy_atom_count(mol);
    if heavy < MIN_HEAVY_ATOMS {
        return FilterVerdict::TooFewAtoms(heavy);
    }
    if heavy > MAX_HEAVY_ATOMS {
        return FilterVerdict::TooManyAtoms(heavy);
    }
    match carbon_fraction(mol) {
        Ok(f) if f >= MIN_CARBON_FRACTION => FilterVerdict::Accept,
        _ => FilterVerdict::LowCarbonFraction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    #[test]
    fn counts_and_fraction() {
        let m = parse("CCO").unwrap();
        assert_eq!(heavy_atom_count(&m), 3);
        assert!((carbon_fraction(&m).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(carbon_fraction(&parse("C").unwrap()), Ok(1.0));
        let h2 = parse("[H][H]").unwrap();
        assert_eq!(heavy_atom_count(&h2), 0);
        assert_eq!(carbon_fraction(&h2), Err(NoHeavyAtoms));
    }

    #[test]
    fn filter_thresholds() {
        assert_eq!(dataset_filter(&parse("CCO").unwrap()), FilterVerdict::TooFewAtoms(3));
        assert!(dataset_filter(&parse("CCCO").unwrap()).accepted());
        assert_eq!(dataset_filter(&parse("OOOOO").unwrap()), FilterVerdict::LowCarbonFraction);
        let big = "C".repeat(101);
        assert_eq!(dataset_filter(&parse(&big).unwrap()), FilterVerdict::TooManyAtoms(101));
        assert!(dataset_filter(&parse(&"C".repeat(100)).unwrap()).accepted());
        // 1 carbon in 5 heavy atoms sits exactly on the threshold.
        assert!(dataset_filter(&parse("COOOO").unwrap()).accepted());
    }
}
