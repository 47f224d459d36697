use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generate::Mcq;
use crate::table::PropertyValue;
use crate::McqError;

/// Turns one distractor into a worked context line and drops it from the
/// options. The key is re-indexed; the id gains an `-icl` suffix.
pub fn make_icl_variant(mcq: &Mcq, seed: u64) -> Result<Mcq, McqError> {
    let n = mcq.options.len();
    if n < 3 {
        return Err(McqError::TooFewOptions { min: 3, got: n });
    }
    if mcq.values.len() != n {
        return Err(McqError::KindMismatch("option values are not attached".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = rng.random_range(0..n - 1);
    let drop = if pick >= mcq.key { pick + 1 } else { pick };

    let smiles = &mcq.options[drop];
    let context = match (&mcq.values[drop], &mcq.label) {
        (PropertyValue::Numeric(v), _) => format!("For reference, {smiles} has a {} of {v}.", mcq.property),
        (PropertyValue::Labels(_), Some(label)) => format!("For reference, {smiles} is not {label}."),
        (PropertyValue::Labels(l), None) => {
            let l: Vec<&str> = l.iter().map(String::as_str).collect();
            format!("For reference, {smiles} has {}: {}.", mcq.property, l.join("; "))
        }
    };
    let mut out = mcq.clone();
    out.id = format!("{}-icl", mcq.id);
    out.options.remove(drop);
    out.values.remove(drop);
    if drop < mcq.key {
        out.key -= 1;
    }
    out.context = Some(context);
    Ok(out)
}
