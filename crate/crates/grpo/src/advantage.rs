use crate::GrpoError;

/// Standard deviations below this mark a group as trivial.
pub const STD_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub rewards: Vec<f64>,
    pub advantages: Vec<f64>,
    pub trivial: bool,
}

/// `A_i = (r_i - mean) / std` with the population standard deviation.
pub fn group_advantages(rewards: &[f64]) -> Result<Group, GrpoError> {
    if rewards.len() < 2 {
        return Err(GrpoError::GroupTooSmall(rewards.len()));
    }
    if let Some(&r) = rewards.iter().find(|r| !r.is_finite()) {
        return Err(GrpoError::NonFiniteReward(r));
    }
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    let var = rewards.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    let trivial = std < STD_FLOOR;
    let advantages = if trivial {
        vec![0.0; rewards.len()]
    } else {
        rewards.iter().map(|r| (r - mean) / std).collect()
    };
    Ok(Group { rewards: rewards.to_vec(), advantages, trivial })
}
