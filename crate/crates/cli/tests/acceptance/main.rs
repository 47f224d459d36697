//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod oracles;
mod reward_cases;

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use molreward_bloom::BloomFilter;
use molreward_cli::{grade_stream, Engine, EngineConfig};
use molreward_core::{parse, write_canonical, write_random, Element, Molecule};
use molreward_grpo::{
    group_advantages, group_objective, max_eps_cur, mean_nontrivial, simulate, trivial_fractions, Difficulty,
    SimConfig, TokenProbs,
};
use molreward_mcq::generate::generate_set;
use molreward_mcq::{read_table, SetConfig, TemplateLibrary};
use molreward_rewards::{format_response, BuildOptions, PlausibilityReference};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn corpus() -> Vec<String> {
    std::fs::read_to_string(data("corpus.smi"))
        .expect("corpus")
        .lines()
        .filter_map(|l| l.split_whitespace().next().map(str::to_string))
        .collect()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Canonical form is independent of atom order; round trips are isomorphic.
fn canonicalization() -> Outcome {
    let start = Instant::now();
    let mols: Vec<Molecule> = corpus().iter().map(|s| parse(s).map_err(|e| format!("{s}: {e}"))).collect::<Result<_, _>>()?;
    if mols.len() != 1000 {
        return Err(format!("corpus has {} molecules", mols.len()));
    }
    let (mut mismatches, mut non_iso) = (0usize, 0usize);
    for (i, m) in mols.iter().enumerate() {
        let canonical = write_canonical(m);
        let back = parse(&canonical).map_err(|e| format!("{canonical}: {e}"))?;
        if !oracles::isomorphic(m, &back) {
            non_iso += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        for _ in 0..50 {
            let mut perm: Vec<usize> = (0..m.atom_count()).collect();
            perm.shuffle(&mut rng);
            let shuffled = m.permuted(&perm);
            if write_canonical(&shuffled) != canonical {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        mismatches == 0 && non_iso == 0 && elapsed < Duration::from_secs(60),
        format!("50000 permutations, {mismatches} mismatches, {non_iso} non-isomorphic round trips, {elapsed:.1?}"),
    )
}

/// Advantages against mean / pairwise population std on 10^4 groups.
fn advantages() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut trivial_ok, mut constant) = (0.0f64, true, 0usize);
    for i in 0..10_000 {
        let g = rng.random_range(2..=16);
        let rewards: Vec<f64> = match i % 4 {
            0 => vec![[0.0, 1.0, 2.0][rng.random_range(0..3)]; g],
            1 => (0..g).map(|_| [0.0, 0.5, 1.0, 2.0][rng.random_range(0..4)]).collect(),
            _ => (0..g).map(|_| rng.random_range(0.0..2.0)).collect(),
        };
        let group = group_advantages(&rewards).map_err(|e| e.to_string())?;
        let std = oracles::pairwise_std(&rewards);
        let mean = rewards.iter().sum::<f64>() / g as f64;
        if rewards.iter().all(|r| *r == rewards[0]) {
            constant += 1;
            trivial_ok &= group.trivial && group.advantages.iter().all(|a| *a == 0.0);
            continue;
        }
        for (a, r) in group.advantages.iter().zip(&rewards) {
            worst = worst.max((a - (r - mean) / std).abs());
        }
    }
    check(
        worst <= 1e-12 && trivial_ok && constant > 0,
        format!("10000 groups, max |diff| {worst:.2e}, {constant} zero-variance groups flagged trivial: {trivial_ok}"),
    )
}

/// Objective against a case-split brute force on 10^3 instances.
fn objective() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst, mut boundary, mut beta_zero) = (0.0f64, 0usize, 0usize);
    for i in 0..1000 {
        let g = rng.random_range(2..=6);
        let rewards: Vec<f64> = (0..g).map(|_| [0.0, 1.0][rng.random_range(0..2)]).collect();
        let group = group_advantages(&rewards).map_err(|e| e.to_string())?;
        let eps = [0.1, 0.2, 0.3][i % 3];
        let beta = if i % 5 == 0 { 0.0 } else { rng.random_range(0.0..0.1) };
        beta_zero += usize::from(beta == 0.0);
        let probs: Vec<TokenProbs> = (0..g)
            .map(|_| {
                let len = rng.random_range(1..=5);
                let old: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..0.95)).collect();
                let theta: Vec<f64> = old
                    .iter()
                    .map(|&o| match rng.random_range(0..4) {
                        0 => o * (1.0 + eps),
                        1 => o * (1.0 - eps),
                        _ => (o * rng.random_range(0.5..1.5)).min(1.0),
                    })
                    .map(|t: f64| t.min(1.0))
                    .collect();
                let reference = (0..len).map(|_| rng.random_range(0.05..1.0)).collect();
                TokenProbs { theta, old, reference }
            })
            .collect();
        boundary += probs
            .iter()
            .flat_map(|p| p.theta.iter().zip(&p.old))
            .filter(|(t, o)| ((*t / *o) - 1.0).abs() - eps <= 1e-12 && ((*t / *o) - 1.0).abs() - eps >= -1e-12)
            .count();
        let got = group_objective(&group, &probs, eps, beta).map_err(|e| e.to_string())?;
        let want = oracles::objective(&group.advantages, &probs, eps, beta);
        worst = worst.max((got - want).abs());
    }
    check(
        worst <= 1e-10 && boundary > 0 && beta_zero > 0,
        format!("1000 instances, max |diff| {worst:.2e}, {boundary} clip-boundary tokens, {beta_zero} with beta = 0"),
    )
}

fn mixture(parts: &[(f64, f64)]) -> Vec<Difficulty> {
    parts.iter().map(|&(fraction, success)| Difficulty { fraction, success }).collect()
}

/// Curriculum ablation on the toy policy.
fn curriculum_gain() -> Outcome {
    let start = Instant::now();
    let config = |eps: f64, seed: u64| SimConfig {
        seed,
        eps_cur: eps,
        steps: 200,
        problems: 1000,
        answers: 4,
        group_size: 4,
        batch_size: 32,
        learning_rate: 1.0,
        beta: 0.005,
        clip_eps: 0.2,
        ref_update_interval: 50,
        difficulty: mixture(&[(0.5, 0.02), (0.25, 0.5), (0.25, 0.9)]),
        ..SimConfig::default()
    };
    let (mut gain, mut start_nt) = (0.0, 0.0);
    for seed in 0..5 {
        let base = simulate(&config(0.0, seed)).map_err(|e| e.to_string())?;
        let cur = simulate(&config(0.5, seed)).map_err(|e| e.to_string())?;
        gain += mean_nontrivial(&cur, 50, 200) - mean_nontrivial(&base, 50, 200);
        start_nt += mean_nontrivial(&base, 1, 5);
    }
    gain /= 5.0;
    start_nt /= 5.0;
    let elapsed = start.elapsed();
    check(
        gain >= 0.10 && elapsed < Duration::from_secs(120),
        format!("eps_cur 0.5 vs 0 over steps 50-200: {:+.1} pp (start {:.0}%), {elapsed:.1?}", gain * 100.0, start_nt * 100.0),
    )
}

/// Buffer occupancy below and above the bound.
fn curriculum_bound() -> Outcome {
    let base = |eps: f64, seed: u64, steps: usize| SimConfig {
        seed,
        eps_cur: eps,
        steps,
        problems: 2000,
        batch_size: 16,
        learning_rate: 0.0,
        difficulty: mixture(&[(0.5, 0.03), (0.5, 0.06)]),
        ..SimConfig::default()
    };
    let pilot = simulate(&base(0.15, 99, 2000)).map_err(|e| e.to_string())?;
    let (f_td, f_tb) = trivial_fractions(&pilot);
    let bound = max_eps_cur(f_td, f_tb).map_err(|e| e.to_string())?;
    let seeded: Vec<usize> = (0..2000).step_by(20).collect();
    let run = |eps: f64, seed: u64| simulate(&SimConfig { seed_buffer: seeded.clone(), ..base(eps, seed, 500) });
    let (mut kept, mut drained) = (0, 0);
    let (mut final_low, mut first_empty) = (Vec::new(), Vec::new());
    for seed in 0..5 {
        let low = run(0.8 * bound, seed).map_err(|e| e.to_string())?;
        let last = low.last().map_or(0, |m| m.buffer_size);
        kept += usize::from(last > 0);
        final_low.push(last);
        let high = run(1.5 * bound, seed).map_err(|e| e.to_string())?;
        let empty = high.iter().find(|m| m.buffer_size == 0).map(|m| m.step);
        drained += usize::from(empty.is_some());
        first_empty.push(empty.map_or("never".to_string(), |s| s.to_string()));
    }
    check(
        kept >= 4 && drained >= 4,
        format!(
            "fTD {f_td:.3} fTB {f_tb:.3} bound {bound:.3}; 0.8x occupied at step 500 in {kept}/5 {final_low:?}; 1.5x drained in {drained}/5 (first empty at {})",
            first_empty.join(",")
        ),
    )
}

fn bloom() -> Outcome {
    let mut filter = BloomFilter::new(10_000, 0.01).map_err(|e| e.to_string())?;
    for i in 0..10_000 {
        filter.insert(format!("member-{i}"));
    }
    let negatives = (0..10_000).filter(|i| !filter.contains(format!("member-{i}"))).count();
    let fp = (0..100_000).filter(|i| filter.contains(format!("query-{i}"))).count();
    let rate = fp as f64 / 1e5;
    check(negatives == 0 && rate <= 0.02, format!("FP rate {rate:.4} on 100000 disjoint queries, {negatives} false negatives"))
}

fn reward_semantics() -> Outcome {
    let (total, failures) = reward_cases::run(&reward_cases::context());
    check(
        total >= 60 && failures.is_empty(),
        format!("{}/{total} cases{}", total - failures.len(), if failures.is_empty() { String::new() } else { format!(": {}", failures.join("; ")) }),
    )
}

/// Ring systems built on elements that never occur in a corpus ring.
const FOREIGN_RINGS: [&str; 20] = [
    "C1CC[SiH2]C1",
    "C1CC[SiH2]CC1",
    "[SiH2]1[SiH2][SiH2]1",
    "C1=C[Se]C=C1",
    "C1CC[Se]CC1",
    "C1CCPCC1",
    "C1=CC=PC=C1",
    "C1CC[GeH2]C1",
    "C1CC[Te]C1",
    "C1CC[AsH]CC1",
    "C1CC[SnH2]CC1",
    "C1C[Se][Se]C1",
    "C1CP1",
    "C1C[SiH2]1",
    "O1[SiH2]O[SiH2]O[SiH2]1",
    "O=P1(O)OCCCO1",
    "[SiH2]1CCCCCCC1",
    "C1CC2(C1)[SiH2]CC2",
    "c1ccc2c(c1)[SiH2]c1ccccc12",
    "CC1CC[PH]C1",
];

fn ring_elements(m: &Molecule) -> BTreeSet<Element> {
    let ring = oracles::ring_atoms(m);
    (0..m.atom_count()).filter(|&i| ring[i]).map(|i| m.atom(i).element).collect()
}

fn plausibility() -> Outcome {
    let smiles = corpus();
    let reference = PlausibilityReference::build(smiles.iter(), &BuildOptions::default()).map_err(|e| e.to_string())?;
    let mols: Vec<Molecule> = smiles.iter().map(|s| parse(s).expect("corpus parses")).collect();
    let unreasonable: Vec<&String> =
        smiles.iter().zip(&mols).filter(|(_, m)| !reference.is_reasonable(m)).map(|(s, _)| s).collect();
    let corpus_ring_elements: BTreeSet<Element> = mols.iter().flat_map(ring_elements).collect();
    let mut accepted = Vec::new();
    for s in FOREIGN_RINGS {
        let m = parse(s).map_err(|e| format!("{s}: {e}"))?;
        if ring_elements(&m).is_subset(&corpus_ring_elements) {
            return Err(format!("{s} is not out of catalog"));
        }
        if reference.is_reasonable(&m) {
            accepted.push(s);
        }
    }
    check(
        mols.len() == 1000 && unreasonable.is_empty() && accepted.is_empty(),
        format!(
            "{}/1000 catalog molecules reasonable, {}/20 foreign ring systems rejected{}",
            1000 - unreasonable.len(),
            20 - accepted.len(),
            if accepted.is_empty() { String::new() } else { format!(" (accepted {accepted:?})") }
        ),
    )
}

fn mcq_leakage() -> Outcome {
    let text = std::fs::read_to_string(data("properties.tsv")).map_err(|e| e.to_string())?;
    let records = read_table(&text).map_err(|e| e.to_string())?;
    let config = SetConfig { max_questions: 500, ..SetConfig::default() };
    let mcqs = generate_set(&records, &config, TemplateLibrary::builtin()).map_err(|e| e.to_string())?;
    let mut train = HashSet::new();
    let mut test = HashSet::new();
    let mut cross = 0usize;
    let side = |q: &molreward_mcq::Mcq| q.split.clone().unwrap_or_default();
    for q in &mcqs {
        match side(q).as_str() {
            "train" => train.extend(q.options.iter().cloned()),
            "test" => test.extend(q.options.iter().cloned()),
            other => return Err(format!("{} has split {other:?}", q.id)),
        }
    }
    // every co-occurrence edge joins two options of one question; an edge
    // crosses the split when its endpoints carry different labels anywhere
    for q in &mcqs {
        for (i, a) in q.options.iter().enumerate() {
            for b in &q.options[i + 1..] {
                let a_sides = (train.contains(a), test.contains(a));
                let b_sides = (train.contains(b), test.contains(b));
                if a_sides != b_sides || a_sides == (true, true) {
                    cross += 1;
                }
            }
        }
    }
    let overlap = train.intersection(&test).count();
    let n_test = mcqs.iter().filter(|q| side(q) == "test").count();
    check(
        mcqs.len() == 500 && cross == 0 && overlap == 0 && n_test > 0,
        format!("{} questions ({n_test} test), {cross} cross-split edges, train∩test = {overlap}", mcqs.len()),
    )
}

fn throughput() -> Outcome {
    let smiles = corpus();
    let engine = Engine::from_config(EngineConfig::default()).map_err(|e| e.to_string())?;
    let mut input = String::new();
    for i in 0..10_000 {
        let gold = &smiles[i % smiles.len()];
        let answer = if i % 3 == 0 { smiles[(i * 7 + 1) % smiles.len()].clone() } else { write_random(&parse(gold).unwrap(), i as u64) };
        let record = json!({"id": i, "task_kind": "reaction_prediction", "problem": "", "response": format_response("", &answer), "gold": {"smiles": gold}});
        input.push_str(&record.to_string());
        input.push('\n');
    }
    let start = Instant::now();
    let mut single = Vec::new();
    let summary = grade_stream(&engine, input.as_bytes(), &mut single, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut eight = Vec::new();
    grade_stream(&engine, input.as_bytes(), &mut eight, 8).map_err(|e| e.to_string())?;
    check(
        summary.graded == 10_000 && single == eight && elapsed < Duration::from_secs(10),
        format!("10000 records in {elapsed:.2?} single-threaded, parallelism 1 vs 8 identical: {}", single == eight),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("canonicalization", canonicalization),
        ("advantage oracle", advantages),
        ("objective oracle", objective),
        ("curriculum ablation", curriculum_gain),
        ("curriculum bound", curriculum_bound),
        ("bloom filter", bloom),
        ("reward semantics", reward_semantics),
        ("plausibility self-consistency", plausibility),
        ("mcq leakage", mcq_leakage),
        ("throughput", throughput),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == n.to_string()) {
            continue;
        }
        match run() {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
