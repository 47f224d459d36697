//! Algorithm-level simulation with a categorical toy policy: every problem
//! has its own logits over a small answer set, answer 0 is correct, and
//! each completion is a single token.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::advantage::group_advantages;
use crate::buffer::{sample_batch_with, CurriculumBuffer};
use crate::GrpoError;

/// Logit magnitude used for success probabilities of exactly 0 or 1.
const LOGIT_LIMIT: f64 = 60.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Difficulty {
    /// Share of the problems in this band.
    pub fraction: f64,
    /// Initial probability of answering correctly.
    pub success: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub seed: u64,
    pub steps: usize,
    pub problems: usize,
    pub answers: usize,
    pub group_size: usize,
    pub batch_size: usize,
    pub eps_cur: f64,
    pub learning_rate: f64,
    pub clip_eps: f64,
    pub beta: f64,
    /// Gradient steps per batch.
    pub inner_steps: usize,
    /// Steps between reference-policy refreshes; 0 keeps the initial policy.
    pub ref_update_interval: usize,
    pub temperature: f64,
    pub buffer_capacity: Option<usize>,
    /// Problem ids placed in the buffer before the first step.
    pub seed_buffer: Vec<usize>,
    pub difficulty: Vec<Difficulty>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            seed: 0,
            steps: 200,
            problems: 1000,
            answers: 4,
            group_size: 4,
            batch_size: 32,
            eps_cur: 0.0,
            learning_rate: 1.0,
            clip_eps: 0.2,
            beta: 0.005,
            inner_steps: 1,
            ref_update_interval: 50,
            temperature: 1.0,
            buffer_capacity: None,
            seed_buffer: Vec::new(),
            difficulty: vec![Difficulty { fraction: 1.0, success: 0.5 }],
        }
    }
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<SimConfig, GrpoError> {
        let config: SimConfig = toml::from_str(text).map_err(|e| GrpoError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), GrpoError> {
        let fail = |m: String| Err(GrpoError::Config(m));
        if self.group_size < 2 {
            return fail(format!("group_size must be at least 2, got {}", self.group_size));
        }
        if self.answers < 2 {
            return fail(format!("answers must be at least 2, got {}", self.answers));
        }
        if self.problems == 0 || self.batch_size == 0 {
            return fail("problems and batch_size must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.eps_cur) {
            return fail(format!("eps_cur {} outside [0, 1]", self.eps_cur));
        }
        if !(self.clip_eps > 0.0 && self.clip_eps < 1.0) {
            return fail(format!("clip_eps {} outside (0, 1)", self.clip_eps));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return fail(format!("temperature {} must be positive", self.temperature));
        }
        if !(self.learning_rate >= 0.0 && self.beta >= 0.0) {
            return fail("learning_rate and beta must be non-negative".into());
        }
        if self.difficulty.is_empty() {
            return fail("at least one difficulty band is required".into());
        }
        let total: f64 = self.difficulty.iter().map(|d| d.fraction).sum();
        if (total - 1.0).abs() > 1e-9 || self.difficulty.iter().any(|d| d.fraction < 0.0) {
            return fail(format!("difficulty fractions must be non-negative and sum to 1, got {total}"));
        }
        if let Some(d) = self.difficulty.iter().find(|d| !(0.0..=1.0).contains(&d.success)) {
            return fail(format!("success probability {} outside [0, 1]", d.success));
        }
        if let Some(id) = self.seed_buffer.iter().find(|&&id| id >= self.problems) {
            return fail(format!("seed_buffer id {id} out of range"));
        }
        Ok(())
    }

    /// Initial success probability of each problem, bands laid out in order.
    pub fn success_probabilities(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.problems);
        let mut cumulative = 0.0;
        for d in &self.difficulty {
            cumulative += d.fraction;
            let end = ((cumulative * self.problems as f64).round() as usize).min(self.problems);
            while out.len() < end {
                out.push(d.success);
            }
        }
        let last = self.difficulty.last().map_or(0.5, |d| d.success);
        out.resize(self.problems, last);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToyPolicy {
    pub logits: Vec<Vec<f64>>,
    pub temperature: f64,
}

impl ToyPolicy {
    /// Logits giving answer 0 probability `success[i]` and spreading the
    /// rest evenly over the other answers.
    pub fn from_success(success: &[f64], answers: usize, temperature: f64) -> ToyPolicy {
        let logits = success
            .iter()
            .map(|&p| {
                let z = if p <= 0.0 {
                    -LOGIT_LIMIT
                } else if p >= 1.0 {
                    LOGIT_LIMIT
                } else {
                    (temperature * (p * (answers - 1) as f64 / (1.0 - p)).ln()).clamp(-LOGIT_LIMIT, LOGIT_LIMIT)
                };
                let mut row = vec![0.0; answers];
                row[0] = z;
                row
            })
            .collect();
        ToyPolicy { logits, temperature }
    }

    pub fn probs(&self, problem: usize) -> Vec<f64> {
        let row = &self.logits[problem];
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = row.iter().map(|z| ((z - max) / self.temperature).exp()).collect();
        let total: f64 = exp.iter().sum();
        exp.into_iter().map(|e| e / total).collect()
    }

    pub fn sample<R: Rng>(&self, problem: usize, rng: &mut R) -> usize {
        let probs = self.probs(problem);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepMetrics {
    pub step: usize,
    pub nontrivial_fraction: f64,
    pub mean_reward: f64,
    pub buffer_size: usize,
    pub buffer_draws: usize,
    pub buffer_trivial: usize,
    pub dataset_draws: usize,
    pub dataset_trivial: usize,
}

struct Sampled {
    problem: usize,
    answers: Vec<usize>,
    advantages: Vec<f64>,
    old: Vec<f64>,
    reference: Vec<f64>,
}

fn clip_slope(ratio: f64, advantage: f64, eps: f64) -> f64 {
    let clamped = ratio.clamp(1.0 - eps, 1.0 + eps);
    if ratio == clamped || ratio * advantage < clamped * advantage {
        advantage
    } else {
        0.0
    }
}

/// One ascent step on the batch-averaged objective with analytic gradients
/// of the softmax policy.
fn ascend(policy: &mut ToyPolicy, groups: &[Sampled], config: &SimConfig) {
    let scale = config.learning_rate / groups.len() as f64;
    let t = policy.temperature;
    for g in groups {
        let probs = policy.probs(g.problem);
        let mut grad = vec![0.0; probs.len()];
        for (i, &a) in g.answers.iter().enumerate() {
            let p = probs[a];
            let ratio = p / g.old[a];
            let d_clip = clip_slope(ratio, g.advantages[i], config.clip_eps) / g.old[a];
            let d_kl = 1.0 / p - g.reference[a] / (p * p);
            let d_p = d_clip - config.beta * d_kl;
            for (j, gj) in grad.iter_mut().enumerate() {
                let delta = if j == a { 1.0 } else { 0.0 };
                *gj += d_p * p * (delta - probs[j]) / t;
            }
        }
        for (z, gz) in policy.logits[g.problem].iter_mut().zip(grad) {
            *z = (*z + scale * gz).clamp(-LOGIT_LIMIT, LOGIT_LIMIT);
        }
    }
}

/// Runs the training loop and returns one metrics row per step.
pub fn simulate(config: &SimConfig) -> Result<Vec<StepMetrics>, GrpoError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut policy = ToyPolicy::from_success(&config.success_probabilities(), config.answers, config.temperature);
    let mut reference = policy.clone();
    let dataset: Vec<usize> = (0..config.problems).collect();
    let mut buffer = CurriculumBuffer::new(config.buffer_capacity);
    for &id in &config.seed_buffer {
        buffer.insert(id);
    }
    let mut metrics = Vec::with_capacity(config.steps);
    for step in 1..=config.steps {
        if config.ref_update_interval > 0 && step % config.ref_update_interval == 0 {
            reference = policy.clone();
        }
        let old = policy.clone();
        let batch = sample_batch_with(&dataset, &buffer, config.batch_size, config.eps_cur, &mut rng);
        let n_buffer = batch.from_buffer.len();
        let mut groups = Vec::with_capacity(config.batch_size);
        let (mut nontrivial, mut reward_sum) = (0usize, 0.0);
        let (mut buffer_trivial, mut dataset_trivial) = (0usize, 0usize);
        let mut updates = Vec::with_capacity(config.batch_size);
        for (slot, problem) in batch.ids().into_iter().enumerate() {
            let answers: Vec<usize> = (0..config.group_size).map(|_| old.sample(problem, &mut rng)).collect();
            let rewards: Vec<f64> = answers.iter().map(|&a| if a == 0 { 1.0 } else { 0.0 }).collect();
            reward_sum += rewards.iter().sum::<f64>();
            let group = group_advantages(&rewards)?;
            if group.trivial {
                if slot < n_buffer {
                    buffer_trivial += 1;
                } else {
                    dataset_trivial += 1;
                }
            } else {
                nontrivial += 1;
            }
            groups.push(Sampled {
                problem,
                answers,
                advantages: group.advantages.clone(),
                old: old.probs(problem),
                reference: reference.probs(problem),
            });
            updates.push((problem, group));
        }
        for (problem, group) in &updates {
            buffer.update(*problem, group);
        }
        if config.learning_rate > 0.0 {
            for _ in 0..config.inner_steps {
                ascend(&mut policy, &groups, config);
            }
        }
        let b = groups.len();
        metrics.push(StepMetrics {
            step,
            nontrivial_fraction: nontrivial as f64 / b as f64,
            mean_reward: reward_sum / (b * config.group_size) as f64,
            buffer_size: buffer.len(),
            buffer_draws: n_buffer,
            buffer_trivial,
            dataset_draws: b - n_buffer,
            dataset_trivial,
        });
    }
    Ok(metrics)
}

/// Writes `step,nontrivial_fraction,mean_reward,buffer_size` rows.
pub fn write_csv<W: Write>(metrics: &[StepMetrics], mut out: W) -> std::io::Result<()> {
    writeln!(out, "step,nontrivial_fraction,mean_reward,buffer_size")?;
    for m in metrics {
        writeln!(out, "{},{},{},{}", m.step, m.nontrivial_fraction, m.mean_reward, m.buffer_size)?;
    }
    Ok(())
}

/// Pooled trivial fractions of dataset draws and buffer draws.
pub fn trivial_fractions(metrics: &[StepMetrics]) -> (f64, f64) {
    let sum = |f: fn(&StepMetrics) -> usize| metrics.iter().map(f).sum::<usize>() as f64;
    let f_td = sum(|m| m.dataset_trivial) / sum(|m| m.dataset_draws).max(1.0);
    let f_tb = sum(|m| m.buffer_trivial) / sum(|m| m.buffer_draws).max(1.0);
    (f_td, f_tb)
}

/// Mean non-trivial fraction over steps `from..=to` (1-based).
pub fn mean_nontrivial(metrics: &[StepMetrics], from: usize, to: usize) -> f64 {
    let rows: Vec<f64> = metrics
        .iter()
        .filter(|m| m.step >= from && m.step <= to)
        .map(|m| m.nontrivial_fraction)
        .collect();
    rows.iter().sum::<f64>() / rows.len().max(1) as f64
}
