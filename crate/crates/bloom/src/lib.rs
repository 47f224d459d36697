//! Bloom filter for set membership with a portable on-disk format.
//!
//! Index derivation: `d = SHA-256(salt as u64 LE ‖ item)`; `h1` and `h2`
//! are the first and second little-endian u64 of `d`; probe `i` is
//! `(h1 + i·h2) mod m` with wrapping u64 arithmetic.
//!
//! File layout, all integers little-endian:
//!
//! | field    | type          |
//! |----------|---------------|
//! | magic    | `b"MRBF"`     |
//! | version  | u16 (1)       |
//! | m        | u64           |
//! | k        | u32           |
//! | salt     | u64           |
//! | inserted | u64           |
//! | bits     | ceil(m/8) bytes, bit `j` at byte `j/8`, mask `1 << (j%8)` |
//! | crc32    | u32 over every preceding byte |

use std::io::{Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"MRBF";
pub const FORMAT_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 8 + 4 + 8 + 8;

#[derive(Debug, Error)]
pub enum BloomError {
    #[error("capacity must be at least 1")]
    Capacity,
    #[error("false-positive rate must lie strictly between 0 and 1, got {0}")]
    Probability(f64),
    #[error("corrupt header: {0}")]
    Header(String),
    #[error("unsupported file version or magic: {0}")]
    Version(String),
    #[error("checksum mismatch (file truncated or corrupted)")]
    Checksum,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BloomFilter {
    m: u64,
    k: u32,
    salt: u64,
    inserted: u64,
    bits: Vec<u8>,
}

/// Optimal `(m, k)` for `n` items at false-positive rate `p`.
pub fn optimal_parameters(n: u64, p: f64) -> Result<(u64, u32), BloomError> {
    if n == 0 {
        return Err(BloomError::Capacity);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(BloomError::Probability(p));
    }
    let ln2 = std::f64::consts::LN_2;
    let m = (-(n as f64) * p.ln() / (ln2 * ln2)).ceil().max(1.0) as u64;
    let k = ((m as f64 / n as f64) * ln2).round().max(1.0) as u32;
    Ok((m, k))
}

impl BloomFilter {
    /// Filter sized for `capacity` items at false-positive rate `fp_rate`.
    pub fn new(capacity: u64, fp_rate: f64) -> Result<BloomFilter, BloomError> {
        Self::with_salt(capacity, fp_rate, 0)
    }

    pub fn with_salt(capacity: u64, fp_rate: f64, salt: u64) -> Result<BloomFilter, BloomError> {
        let (m, k) = optimal_parameters(capacity, fp_rate)?;
        Ok(Self::with_parameters(m, k, salt))
    }

    pub fn with_parameters(m: u64, k: u32, salt: u64) -> BloomFilter {
        assert!(m > 0 && k > 0, "m and k must be positive");
        BloomFilter { m, k, salt, inserted: 0, bits: vec![0; m.div_ceil(8) as usize] }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn salt(&self) -> u64 {
        self.salt
    }

    /// Number of `insert` calls made so far.
    pub fn inserted(&self) -> u64 {
        self.inserted
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|b| u64::from(b.count_ones())).sum()
    }

    fn hashes(&self, item: &[u8]) -> (u64, u64) {
        let mut h = Sha256::new();
        h.update(self.salt.to_le_bytes());
        h.update(item);
        let d = h.finalize();
        let h1 = u64::from_le_bytes(d[0..8].try_into().expect("8 bytes"));
        let h2 = u64::from_le_bytes(d[8..16].try_into().expect("8 bytes"));
        (h1, h2)
    }

    fn indices(&self, item: &[u8]) -> impl Iterator<Item = u64> {
        let (h1, h2) = self.hashes(item);
        let m = self.m;
        (0..u64::from(self.k)).map(move |i| h1.wrapping_add(i.wrapping_mul(h2)) % m)
    }

    pub fn insert(&mut self, item: impl AsRef<[u8]>) {
        let idx: Vec<u64> = self.indices(item.as_ref()).collect();
        for j in idx {
            self.bits[(j / 8) as usize] |= 1 << (j % 8);
        }
        self.inserted += 1;
    }

    pub fn contains(&self, item: impl AsRef<[u8]>) -> bool {
        self.indices(item.as_ref())
            .all(|j| self.bits[(j / 8) as usize] >> (j % 8) & 1 == 1)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.bits.len() + 4);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&self.m.to_le_bytes());
        out.extend_from_slice(&self.k.to_le_bytes());
        out.extend_from_slice(&self.salt.to_le_bytes());
        out.extend_from_slice(&self.inserted.to_le_bytes());
        out.extend_from_slice(&self.bits);
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn from_bytes(data: &[u8]) -> Result<BloomFilter, BloomError> {
        if data.len() < 4 || &data[..4] != MAGIC {
            return Err(BloomError::Version("bad magic".into()));
        }
        if data.len() < 6 {
            return Err(BloomError::Checksum);
        }
        let version = u16::from_le_bytes([data[4], data[5]]);
        if version != FORMAT_VERSION {
            return Err(BloomError::Version(format!("version {version}")));
        }
        if data.len() < HEADER_LEN + 4 {
            return Err(BloomError::Checksum);
        }
        let (body, tail) = data.split_at(data.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
        if crc32fast::hash(body) != stored {
            return Err(BloomError::Checksum);
        }
        let u64_at = |o: usize| u64::from_le_bytes(body[o..o + 8].try_into().expect("8 bytes"));
        let m = u64_at(6);
        let k = u32::from_le_bytes(body[14..18].try_into().expect("4 bytes"));
        let salt = u64_at(18);
        let inserted = u64_at(26);
        if m == 0 || k == 0 {
            return Err(BloomError::Header(format!("m={m}, k={k}")));
        }
        let bits = &body[HEADER_LEN..];
        if bits.len() as u64 != m.div_ceil(8) {
            return Err(BloomError::Header(format!(
                "bit array holds {} bytes, expected {}",
                bits.len(),
                m.div_ceil(8)
            )));
        }
        Ok(BloomFilter { m, k, salt, inserted, bits: bits.to_vec() })
    }

    pub fn save(&self, path: &Path) -> Result<(), BloomError> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        f.sync_all()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<BloomFilter, BloomError> {
        let mut data = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut data)?;
        Self::from_bytes(&data)
    }
}
