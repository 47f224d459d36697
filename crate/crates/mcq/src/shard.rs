//! Leader clustering of molecules by fingerprint similarity.

use molreward_core::molgraph::tanimoto;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::table::PropertyRecord;

/// Partitions `records` into shards of at most `cap` members.
///
/// Molecules are visited in a seeded order; each joins the most similar
/// leader whose shard has room and similarity at least `min_similarity`,
/// otherwise it leads a new shard. Shards left with a single member are
/// then folded into the most similar shard that still has room.
/// Returns indices into `records`.
pub fn similarity_shards(records: &[&PropertyRecord], cap: usize, min_similarity: f64, seed: u64) -> Vec<Vec<usize>> {
    let cap = cap.max(1);
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let sim = |a: usize, b: usize| tanimoto(&records[a].fingerprint, &records[b].fingerprint).unwrap_or(0.0);

    let mut shards: Vec<Vec<usize>> = Vec::new();
    for &m in &order {
        let best = shards
            .iter()
            .enumerate()
            .filter(|(_, s)| s.len() < cap)
            .map(|(i, s)| (i, sim(m, s[0])))
            .filter(|&(_, v)| v >= min_similarity)
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        match best {
            Some((i, _)) => shards[i].push(m),
            None => shards.push(vec![m]),
        }
    }

    let (singles, mut kept): (Vec<_>, Vec<_>) = shards.into_iter().partition(|s| s.len() == 1);
    for s in singles {
        let m = s[0];
        let best = kept
            .iter()
            .enumerate()
            .filter(|(_, k)| k.len() < cap)
            .map(|(i, k)| (i, sim(m, k[0])))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        match best {
            Some((i, _)) => kept[i].push(m),
            None => kept.push(vec![m]),
        }
    }
    kept
}
