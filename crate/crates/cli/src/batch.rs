//! Order-preserving parallel grading of JSON Lines.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::engine::{Engine, Fault, Graded};

/// Lines per parallel chunk when streaming.
pub const CHUNK_LINES: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub records: usize,
    pub graded: usize,
    pub record_faults: usize,
    pub config_faults: usize,
    pub unavailable: usize,
}

impl BatchSummary {
    fn add(&mut self, g: &Graded) {
        self.records += 1;
        match g.fault {
            None => self.graded += 1,
            Some(Fault::Record) => self.record_faults += 1,
            Some(Fault::Config) => self.config_faults += 1,
            Some(Fault::Unavailable) => self.unavailable += 1,
        }
    }
}

pub fn thread_pool(parallelism: usize) -> anyhow::Result<ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(parallelism).build()?)
}

/// Grades `lines` on `pool`; output position `i` belongs to input line `i`.
pub fn grade_lines(engine: &Engine, lines: &[String], pool: &ThreadPool) -> Vec<Graded> {
    pool.install(|| lines.par_iter().map(|l| engine.grade_line(l)).collect())
}

/// Reads JSONL from `input` and writes one result line per non-blank input line.
pub fn grade_stream<R: BufRead, W: Write>(
    engine: &Engine,
    input: R,
    mut output: W,
    parallelism: usize,
) -> anyhow::Result<BatchSummary> {
    let pool = thread_pool(parallelism)?;
    let mut summary = BatchSummary::default();
    let mut lines = input.lines();
    loop {
        let mut chunk = Vec::with_capacity(CHUNK_LINES);
        for line in lines.by_ref() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            chunk.push(line);
            if chunk.len() == CHUNK_LINES {
                break;
            }
        }
        if chunk.is_empty() {
            break;
        }
        for g in grade_lines(engine, &chunk, &pool) {
            summary.add(&g);
            serde_json::to_writer(&mut output, &g.json)?;
            output.write_all(b"\n")?;
        }
    }
    output.flush()?;
    Ok(summary)
}
