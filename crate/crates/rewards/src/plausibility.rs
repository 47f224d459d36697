//! The reference-catalog plausibility check: a molecule is reasonable when
//! every ring system and every radius-2 atom environment it contains was
//! seen in a catalog of known compounds.
//!
//! A reference is stored as a directory holding `ring.bloom`,
//! `fragment.bloom` and `manifest.json`. Ring entries are canonical SMILES
//! of ring-cut fragments; fragment entries are environment codes as 8
//! little-endian bytes.

use std::collections::BTreeSet;
use std::path::Path;

use molreward_bloom::{BloomError, BloomFilter};
use molreward_core::molgraph::{atom_environments, ring_cut_fragments};
use molreward_core::{parse, Molecule};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const REFERENCE_FORMAT_VERSION: u32 = 1;
pub const FRAGMENT_RADIUS: usize = 2;
const RING_FILE: &str = "ring.bloom";
const FRAGMENT_FILE: &str = "fragment.bloom";
const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum ReferenceError {
    #[error("catalog contains no parseable molecules")]
    EmptyCatalog,
    #[error("bloom filter: {0}")]
    Bloom(#[from] BloomError),
    #[error("manifest: {0}")]
    Manifest(#[from] serde_json::Error),
    #[error("reference format version {found} is not supported (expected {REFERENCE_FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterInfo {
    pub m: u64,
    pub k: u32,
    pub capacity: u64,
    pub fp_rate: f64,
    pub inserted: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub bloom_format_version: u16,
    pub source: String,
    pub build_date: String,
    pub lines_read: u64,
    pub molecules_parsed: u64,
    pub lines_skipped: u64,
    pub distinct_rings: u64,
    pub distinct_fragments: u64,
    pub fragment_radius: usize,
    pub ring_filter: FilterInfo,
    pub fragment_filter: FilterInfo,
}

impl Manifest {
    /// Short identifier reported by health checks.
    pub fn version_string(&self) -> String {
        format!(
            "ref-v{}/bloom-v{}/{}",
            self.format_version, self.bloom_format_version, self.build_date
        )
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Capacity of each filter. Fixed sizing keeps membership monotone as
    /// catalogs grow.
    pub capacity: u64,
    pub fp_rate: f64,
    pub source: String,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { capacity: 1_000_000, fp_rate: 0.001, source: "unspecified".into() }
    }
}

#[derive(Clone, Debug)]
pub struct PlausibilityReference {
    ring_filter: BloomFilter,
    fragment_filter: BloomFilter,
    manifest: Manifest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plausibility {
    Reasonable,
    UnknownRing(String),
    UnknownFragment { atom: usize, code: u64 },
}

impl Plausibility {
    pub fn is_reasonable(&self) -> bool {
        *self == Plausibility::Reasonable
    }

    pub fn describe(&self) -> String {
        match self {
            Plausibility::Reasonable => "all rings and fragments are known".into(),
            Plausibility::UnknownRing(r) => format!("ring system {r} is not in the reference"),
            Plausibility::UnknownFragment { atom, code } => {
                format!("environment of atom {atom} ({code:016x}) is not in the reference")
            }
        }
    }
}

fn fragment_key(code: u64) -> [u8; 8] {
    code.to_le_bytes()
}

impl PlausibilityReference {
    /// Builds a reference from SMILES lines (first whitespace-separated
    /// field of each non-empty line). Unparseable lines are counted.
    pub fn build<I, S>(lines: I, options: &BuildOptions) -> Result<PlausibilityReference, ReferenceError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut rings = BTreeSet::new();
        let mut fragments = BTreeSet::new();
        let (mut read, mut parsed, mut skipped) = (0u64, 0u64, 0u64);
        for line in lines {
            let Some(smiles) = line.as_ref().split_whitespace().next() else { continue };
            read += 1;
            match parse(smiles) {
                Ok(mol) => {
                    parsed += 1;
                    rings.extend(ring_cut_fragments(&mol));
                    fragments.extend(atom_environments(&mol, FRAGMENT_RADIUS));
                }
                Err(_) => skipped += 1,
            }
        }
        if parsed == 0 {
            return Err(ReferenceError::EmptyCatalog);
        }
        let mut ring_filter = BloomFilter::with_salt(options.capacity, options.fp_rate, 0x5249_4e47)?;
        for r in &rings {
            ring_filter.insert(r.as_bytes());
        }
        let mut fragment_filter = BloomFilter::with_salt(options.capacity, options.fp_rate, 0x4652_4147)?;
        for &c in &fragments {
            fragment_filter.insert(fragment_key(c));
        }
        let info = |f: &BloomFilter| FilterInfo {
            m: f.m(),
            k: f.k(),
            capacity: options.capacity,
            fp_rate: options.fp_rate,
            inserted: f.inserted(),
        };
        let manifest = Manifest {
            format_version: REFERENCE_FORMAT_VERSION,
            bloom_format_version: molreward_bloom::FORMAT_VERSION,
            source: options.source.clone(),
            build_date: chrono::Utc::now().format("%Y-%m-%d").to_string(),
            lines_read: read,
            molecules_parsed: parsed,
            lines_skipped: skipped,
            distinct_rings: rings.len() as u64,
            distinct_fragments: fragments.len() as u64,
            fragment_radius: FRAGMENT_RADIUS,
            ring_filter: info(&ring_filter),
            fragment_filter: info(&fragment_filter),
        };
        Ok(PlausibilityReference { ring_filter, fragment_filter, manifest })
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    /// Whether the ring-system filter holds `canonical_ring`.
    pub fn has_ring(&self, canonical_ring: &str) -> bool {
        self.ring_filter.contains(canonical_ring.as_bytes())
    }

    pub fn check(&self, mol: &Molecule) -> Plausibility {
        for ring in ring_cut_fragments(mol) {
            if !self.ring_filter.contains(ring.as_bytes()) {
                return Plausibility::UnknownRing(ring);
            }
        }
        for (atom, code) in atom_environments(mol, FRAGMENT_RADIUS).into_iter().enumerate() {
            if !self.fragment_filter.contains(fragment_key(code)) {
                return Plausibility::UnknownFragment { atom, code };
            }
        }
        Plausibility::Reasonable
    }

    pub fn is_reasonable(&self, mol: &Molecule) -> bool {
        self.check(mol).is_reasonable()
    }

    pub fn save(&self, dir: &Path) -> Result<(), ReferenceError> {
        std::fs::create_dir_all(dir)?;
        self.ring_filter.save(&dir.join(RING_FILE))?;
        self.fragment_filter.save(&dir.join(FRAGMENT_FILE))?;
        let json = serde_json::to_string_pretty(&self.manifest)?;
        std::fs::write(dir.join(MANIFEST_FILE), json + "\n")?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<PlausibilityReference, ReferenceError> {
        let manifest: Manifest = serde_json::from_slice(&std::fs::read(dir.join(MANIFEST_FILE))?)?;
        if manifest.format_version != REFERENCE_FORMAT_VERSION {
            return Err(ReferenceError::Version { found: manifest.format_version });
        }
        if manifest.bloom_format_version != molreward_bloom::FORMAT_VERSION {
            return Err(ReferenceError::Mismatch(format!(
                "manifest declares bloom format {}, this build reads {}",
                manifest.bloom_format_version,
                molreward_bloom::FORMAT_VERSION
            )));
        }
        let ring_filter = BloomFilter::load(&dir.join(RING_FILE))?;
        let fragment_filter = BloomFilter::load(&dir.join(FRAGMENT_FILE))?;
        for (name, f, info) in [
            ("ring", &ring_filter, &manifest.ring_filter),
            ("fragment", &fragment_filter, &manifest.fragment_filter),
        ] {
            if f.m() != info.m || f.k() != info.k || f.inserted() != info.inserted {
                return Err(ReferenceError::Mismatch(format!(
                    "{name} filter does not match the manifest"
                )));
            }
        }
        Ok(PlausibilityReference { ring_filter, fragment_filter, manifest })
    }
}
