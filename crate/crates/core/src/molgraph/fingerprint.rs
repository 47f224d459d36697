//! Circular atom-environment codes, bit fingerprints and Tanimoto
//! similarity.
//!
//! Codes are FNV-1a 64 hashes. The radius-0 code of an atom hashes the
//! bytes `[Z, charge as i8, degree, hydrogens, aromatic]`, where degree counts
//! every graph neighbour and hydrogens counts attached plus explicit H. Each
//! further iteration `r` hashes `[r]`, the previous own code (8 bytes LE),
//! then every neighbour as `[bond code]` + neighbour code (8 bytes LE),
//! neighbours sorted by (bond code, code). Bond codes: single 1, double 2,
//! triple 3, aromatic 4.

use thiserror::Error;

use crate::mol::Molecule;

pub const DEFAULT_NBITS: usize = 2048;
pub const DEFAULT_RADIUS: usize = 2;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// Codes for every atom at radii `0..=radius`; entry `r` holds one code per
/// atom.
pub fn environment_layers(mol: &Molecule, radius: usize) -> Vec<Vec<u64>> {
    let n = mol.atom_count();
    let mut layers = Vec::with_capacity(radius + 1);
    let base: Vec<u64> = (0..n)
        .map(|i| {
            let a = mol.atom(i);
            fnv1a64(&[
                a.element.atomic_number(),
                a.charge as u8,
                mol.degree(i).min(255) as u8,
                mol.total_hydrogens(i).min(255) as u8,
                u8::from(a.aromatic),
            ])
        })
        .collect();
    layers.push(base);
    for r in 1..=radius {
        let prev = &layers[r - 1];
        let next: Vec<u64> = (0..n)
            .map(|i| {
                let mut nb: Vec<(u8, u64)> = mol
                    .neighbors(i)
                    .iter()
                    .map(|&(w, b)| (mol.bond(b).order.code(), prev[w]))
                    .collect();
                nb.sort_unstable();
                let mut bytes = Vec::with_capacity(9 + 9 * nb.len());
                bytes.push(r as u8);
                bytes.extend_from_slice(&prev[i].to_le_bytes());
                for (code, h) in nb {
                    bytes.push(code);
                    bytes.extend_from_slice(&h.to_le_bytes());
                }
                fnv1a64(&bytes)
            })
            .collect();
        layers.push(next);
    }
    layers
}

/// One code per atom describing its environment out to `radius` bonds.
pub fn atom_environments(mol: &Molecule, radius: usize) -> Vec<u64> {
    environment_layers(mol, radius).pop().unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    bits: Vec<u64>,
    nbits: usize,
    radius: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fingerprint widths differ ({0} vs {1} bits)")]
pub struct WidthMismatch(pub usize, pub usize);

impl Fingerprint {
    pub fn empty(nbits: usize, radius: usize) -> Fingerprint {
        assert!(nbits > 0, "fingerprint width must be positive");
        Fingerprint { bits: vec![0; nbits.div_ceil(64)], nbits, radius }
    }

    pub fn from_bits(nbits: usize, on: impl IntoIterator<Item = usize>) -> Fingerprint {
        let mut fp = Fingerprint::empty(nbits, 0);
        for b in on {
            fp.set(b % nbits);
        }
        fp
    }

    pub fn set(&mut self, bit: usize) {
        self.bits[bit / 64] |= 1 << (bit % 64);
    }

    pub fn get(&self, bit: usize) -> bool {
        self.bits[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn nbits(&self) -> usize {
        self.nbits
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nbits).filter(|&b| self.get(b))
    }
}

pub fn fingerprint(mol: &Molecule, nbits: usize, radius: usize) -> Fingerprint {
    let mut fp = Fingerprint::empty(nbits, radius);
    for layer in environment_layers(mol, radius) {
        for code in layer {
            fp.set((code % nbits as u64) as usize);
        }
    }
    fp
}

/// |a ∧ b| / |a ∨ b|, with two empty fingerprints scoring 1.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, WidthMismatch> {
    if a.nbits != b.nbits {
        return Err(WidthMismatch(a.nbits, b.nbits));
    }
    let (mut both, mut either) = (0u32, 0u32);
    for (x, y) in a.bits.iter().zip(&b.bits) {
        both += (x & y).count_ones();
        either += (x | y).count_ones();
    }
    Ok(if either == 0 { 1.0 } else { f64::from(both) / f64::from(either) })
}
