//! Periodic table symbols and the valence model used for hydrogen perception.

use std::fmt;

const SYMBOLS: [&str; 119] = [
    "*", "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S",
    "Cl", "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge",
    "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
    "In", "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd",
    "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm",
    "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn",
    "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
];

/// A chemical element identified by atomic number (1..=118).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u8);

impl Element {
    pub const H: Element = Element(1);
    pub const B: Element = Element(5);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);
    pub const F: Element = Element(9);
    pub const P: Element = Element(15);
    pub const S: Element = Element(16);
    pub const CL: Element = Element(17);
    pub const BR: Element = Element(35);
    pub const I: Element = Element(53);

    pub fn from_atomic_number(z: u8) -> Option<Element> {
        (1..=118).contains(&z).then_some(Element(z))
    }

    /// Looks up a symbol with exact capitalisation ("Cl", not "CL").
    pub fn from_symbol(symbol: &str) -> Option<Element> {
        SYMBOLS[1..]
            .iter()
            .position(|s| *s == symbol)
            .map(|i| Element(i as u8 + 1))
    }

    pub fn atomic_number(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        SYMBOLS[self.0 as usize]
    }

    pub fn is_hydrogen(self) -> bool {
        self.0 == 1
    }

    /// Members of the unbracketed SMILES subset.
    pub fn is_organic_subset(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 9 | 15 | 16 | 17 | 35 | 53)
    }

    /// Elements that may be written in lowercase aromatic form.
    pub fn can_be_aromatic(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 15 | 16 | 33 | 34 | 52)
    }

    /// Allowed valences of the neutral element, or `None` when the element is
    /// outside the valence model (metals, noble gases).
    fn neutral_valences(z: i32) -> Option<&'static [u8]> {
        Some(match z {
            1 => &[1],
            5 => &[3],
            6 | 14 | 32 => &[4],
            7 => &[3, 5],
            8 => &[2],
            9 | 17 | 35 | 53 | 85 => &[1],
            15 | 33 => &[3, 5],
            16 | 34 | 52 => &[2, 4, 6],
            _ => return None,
        })
    }

    /// Allowed valences for this element carrying `charge`, using the
    /// isoelectronic neighbour (N+ behaves like C, O- like F, ...).
    pub fn valences(self, charge: i8) -> Option<&'static [u8]> {
        if charge == 0 {
            return Self::neutral_valences(self.0 as i32);
        }
        // Only shift within the p-block rows where the rule is meaningful.
        if !matches!(self.0, 5..=9 | 13..=17 | 31..=35 | 49..=53) {
            return None;
        }
        let iso = self.0 as i32 - charge as i32;
        let same_row = |a: i32, b: i32| row(a) == row(b);
        if !same_row(self.0 as i32, iso) {
            return None;
        }
        Self::neutral_valences(iso)
    }

    /// Smallest allowed valence that is at least `used`.
    pub fn target_valence(self, charge: i8, used: u32) -> Option<u32> {
        self.valences(charge)?
            .iter()
            .map(|&v| v as u32)
            .find(|&v| v >= used)
    }

    pub fn max_valence(self, charge: i8) -> Option<u32> {
        self.valences(charge)
            .and_then(|v| v.iter().copied().max())
            .map(u32::from)
    }
}

fn row(z: i32) -> u8 {
    match z {
        1..=2 => 1,
        3..=10 => 2,
        11..=18 => 3,
        19..=36 => 4,
        37..=54 => 5,
        _ => 6,
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
