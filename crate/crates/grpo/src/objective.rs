use crate::advantage::Group;
use crate::GrpoError;

/// `min(ratio * A, clamp(ratio, 1 - eps, 1 + eps) * A)`.
pub fn clip_term(ratio: f64, advantage: f64, eps: f64) -> f64 {
    (ratio * advantage).min(ratio.clamp(1.0 - eps, 1.0 + eps) * advantage)
}

fn check_probability(p: f64) -> Result<f64, GrpoError> {
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err(GrpoError::Probability(p))
    }
}

/// Per-token KL estimate `r - ln r - 1` with `r = p_ref / p_theta`.
pub fn kl_estimate(p_theta: f64, p_ref: f64) -> Result<f64, GrpoError> {
    let r = check_probability(p_ref)? / check_probability(p_theta)?;
    Ok(r - r.ln() - 1.0)
}

/// Per-token probabilities of one completion under the current, sampling
/// and reference policies.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenProbs {
    pub theta: Vec<f64>,
    pub old: Vec<f64>,
    pub reference: Vec<f64>,
}

/// `sum_i 1/|y_i| sum_t [clip(pi_theta/pi_old, A_i, eps) - beta * KL_t]`.
pub fn group_objective(group: &Group, completions: &[TokenProbs], eps: f64, beta: f64) -> Result<f64, GrpoError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GrpoError::ClipEpsilon(eps));
    }
    if completions.len() != group.advantages.len() {
        return Err(GrpoError::Misaligned {
            index: completions.len().min(group.advantages.len()),
            what: format!("{} completions for {} advantages", completions.len(), group.advantages.len()),
        });
    }
    let mut total = 0.0;
    for (index, (c, &adv)) in completions.iter().zip(&group.advantages).enumerate() {
        let len = c.theta.len();
        if len == 0 || c.old.len() != len || c.reference.len() != len {
            return Err(GrpoError::Misaligned {
                index,
                what: format!("token counts theta={} old={} ref={}", len, c.old.len(), c.reference.len()),
            });
        }
        let mut sum = 0.0;
        for t in 0..len {
            let ratio = check_probability(c.theta[t])? / check_probability(c.old[t])?;
            sum += clip_term(ratio, adv, eps) - beta * kl_estimate(c.theta[t], c.reference[t])?;
        }
        total += sum / len as f64;
    }
    Ok(total)
}
