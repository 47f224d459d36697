//! Artifact builders behind `bloom-build`, `ref-build`, `mcq-gen` and `simulate`.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use molreward_bloom::BloomFilter;
use molreward_core::canonicalize;
use molreward_grpo::{simulate, write_csv, SimConfig};
use molreward_mcq::generate::generate_set;
use molreward_mcq::{read_table, Mcq, SetConfig, TemplateLibrary};
use molreward_rewards::{BuildOptions, Manifest, PlausibilityReference};
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BloomReport {
    pub parsed: u64,
    pub skipped: u64,
    pub inserted: u64,
    pub capacity: u64,
}

impl BloomReport {
    pub fn over_capacity(&self) -> bool {
        self.inserted > self.capacity
    }
}

/// Builds a catalog filter from newline-delimited SMILES. Every line is
/// canonicalized before insertion; unparseable lines are counted and skipped.
pub fn bloom_from_lines<'a>(
    lines: impl IntoIterator<Item = &'a str>,
    capacity: u64,
    fp_rate: f64,
) -> anyhow::Result<(BloomFilter, BloomReport)> {
    let mut filter = BloomFilter::new(capacity, fp_rate)?;
    let mut report = BloomReport { capacity, ..Default::default() };
    for line in lines {
        let s = line.split_whitespace().next().unwrap_or("");
        if s.is_empty() {
            continue;
        }
        match canonicalize(s) {
            Ok(c) => {
                report.parsed += 1;
                if !filter.contains(&c) {
                    report.inserted += 1;
                }
                filter.insert(&c);
            }
            Err(_) => report.skipped += 1,
        }
    }
    Ok((filter, report))
}

pub fn bloom_build(input: &Path, capacity: u64, fp_rate: f64, out: &Path) -> anyhow::Result<BloomReport> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let (filter, report) = bloom_from_lines(text.lines(), capacity, fp_rate)?;
    filter.save(out).with_context(|| format!("writing {}", out.display()))?;
    Ok(report)
}

pub fn ref_build(catalog: &Path, out_dir: &Path, options: &BuildOptions) -> anyhow::Result<Manifest> {
    let text = fs::read_to_string(catalog).with_context(|| format!("reading {}", catalog.display()))?;
    let reference = PlausibilityReference::build(text.lines(), options)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    reference.save(out_dir)?;
    Ok(reference.manifest().clone())
}

pub fn mcq_gen(table: &Path, config: &SetConfig, out: &Path) -> anyhow::Result<Vec<Mcq>> {
    let text = fs::read_to_string(table).with_context(|| format!("reading {}", table.display()))?;
    let records = read_table(&text)?;
    let mcqs = generate_set(&records, config, TemplateLibrary::builtin())?;
    let mut w = std::io::BufWriter::new(fs::File::create(out).with_context(|| format!("creating {}", out.display()))?);
    for q in &mcqs {
        serde_json::to_writer(&mut w, q)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(mcqs)
}

pub fn run_simulation(config: &SimConfig, out: &Path) -> anyhow::Result<usize> {
    let metrics = simulate(config)?;
    let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = std::io::BufWriter::new(file);
    write_csv(&metrics, &mut w)?;
    w.flush()?;
    Ok(metrics.len())
}
