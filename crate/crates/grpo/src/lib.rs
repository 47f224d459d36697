//! Group-relative policy optimisation arithmetic and an advantage-based
//! curriculum, with a categorical toy policy to exercise both end to end.

pub mod advantage;
pub mod buffer;
pub mod objective;
pub mod simulate;

pub use advantage::{group_advantages, Group, STD_FLOOR};
pub use buffer::{max_eps_cur, sample_batch, CurriculumBuffer};
pub use objective::{clip_term, group_objective, kl_estimate, TokenProbs};
pub use simulate::{mean_nontrivial, simulate, trivial_fractions, write_csv, Difficulty, SimConfig, StepMetrics, ToyPolicy};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrpoError {
    #[error("a group needs at least 2 rewards, got {0}")]
    GroupTooSmall(usize),
    #[error("reward {0} is not finite")]
    NonFiniteReward(f64),
    #[error("probability {0} must be in (0, 1]")]
    Probability(f64),
    #[error("completion {index}: {what}")]
    Misaligned { index: usize, what: String },
    #[error("ratio {0} must be positive and finite")]
    Ratio(f64),
    #[error("clip epsilon {0} must be in (0, 1)")]
    ClipEpsilon(f64),
    #[error("trivial fraction {0} must be in [0, 1]")]
    Fraction(f64),
    #[error("curriculum bound is undefined when every dataset group is trivial and no buffer group is")]
    UndefinedBound,
    #[error("invalid simulation config: {0}")]
    Config(String),
}
