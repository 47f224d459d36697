use std::collections::HashSet;
use std::hash::Hash;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::advantage::Group;
use crate::GrpoError;

/// Problems whose latest group was non-trivial, in insertion order.
#[derive(Clone, Debug)]
pub struct CurriculumBuffer<T> {
    order: Vec<T>,
    members: HashSet<T>,
    capacity: Option<usize>,
}

impl<T: Clone + Eq + Hash> Default for CurriculumBuffer<T> {
    fn default() -> Self {
        Self::new(None)
    }
}

impl<T: Clone + Eq + Hash> CurriculumBuffer<T> {
    /// A bounded buffer evicts its oldest entry when full.
    pub fn new(capacity: Option<usize>) -> Self {
        CurriculumBuffer { order: Vec::new(), members: HashSet::new(), capacity }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn contains(&self, id: &T) -> bool {
        self.members.contains(id)
    }

    pub fn ids(&self) -> &[T] {
        &self.order
    }

    /// Inserts unconditionally (used for seeding). Returns whether the id was new.
    pub fn insert(&mut self, id: T) -> bool {
        if self.capacity == Some(0) || self.members.contains(&id) {
            return false;
        }
        if self.capacity.is_some_and(|c| self.order.len() >= c) {
            let oldest = self.order.remove(0);
            self.members.remove(&oldest);
        }
        self.members.insert(id.clone());
        self.order.push(id);
        true
    }

    pub fn remove(&mut self, id: &T) -> bool {
        if !self.members.remove(id) {
            return false;
        }
        self.order.retain(|x| x != id);
        true
    }

    /// Adds `id` when its group is non-trivial.
    pub fn offer(&mut self, id: T, group: &Group) -> bool {
        !group.trivial && self.insert(id)
    }

    /// Removes `id` when it is buffered and its group is trivial.
    pub fn drop_if_trivial(&mut self, id: &T, group: &Group) -> bool {
        group.trivial && self.remove(id)
    }

    /// Applies both rules for a freshly graded group.
    pub fn update(&mut self, id: T, group: &Group) {
        if group.trivial {
            self.remove(&id);
        } else {
            self.insert(id);
        }
    }
}

/// A batch split by where each problem came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Batch<T> {
    pub from_buffer: Vec<T>,
    pub from_dataset: Vec<T>,
}

impl<T: Clone> Batch<T> {
    pub fn ids(&self) -> Vec<T> {
        self.from_buffer.iter().chain(&self.from_dataset).cloned().collect()
    }
}

/// Takes `round(eps_cur * batch_size)` distinct buffer entries (all of them
/// if the buffer is smaller) and fills the rest from the dataset, without
/// replacement while the dataset is large enough.
pub fn sample_batch_with<T: Clone + Eq + Hash, R: Rng>(
    dataset: &[T],
    buffer: &CurriculumBuffer<T>,
    batch_size: usize,
    eps_cur: f64,
    rng: &mut R,
) -> Batch<T> {
    assert!(!dataset.is_empty(), "dataset must not be empty");
    let want = (eps_cur.clamp(0.0, 1.0) * batch_size as f64).round() as usize;
    let take = want.min(buffer.len());
    let from_buffer: Vec<T> = sample(rng, buffer.len(), take).into_iter().map(|i| buffer.ids()[i].clone()).collect();
    let rest = batch_size - take;
    let from_dataset = if rest <= dataset.len() {
        sample(rng, dataset.len(), rest).into_iter().map(|i| dataset[i].clone()).collect()
    } else {
        (0..rest).map(|_| dataset[rng.random_range(0..dataset.len())].clone()).collect()
    };
    Batch { from_buffer, from_dataset }
}

pub fn sample_batch<T: Clone + Eq + Hash>(
    dataset: &[T],
    buffer: &CurriculumBuffer<T>,
    batch_size: usize,
    eps_cur: f64,
    seed: u64,
) -> Vec<T> {
    sample_batch_with(dataset, buffer, batch_size, eps_cur, &mut ChaCha8Rng::seed_from_u64(seed)).ids()
}

/// Largest buffer fraction that does not drain the buffer:
/// `(1 - fTD) / (1 - fTD + fTB)`.
pub fn max_eps_cur(f_td: f64, f_tb: f64) -> Result<f64, GrpoError> {
    for f in [f_td, f_tb] {
        if !(0.0..=1.0).contains(&f) {
            return Err(GrpoError::Fraction(f));
        }
    }
    let num = 1.0 - f_td;
    let den = num + f_tb;
    if den == 0.0 {
        return Err(GrpoError::UndefinedBound);
    }
    if f_tb == 0.0 {
        return Ok(1.0);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advantage::group_advantages;

    #[test]
    fn offer_and_drop() {
        let live = group_advantages(&[1.0, 0.0]).unwrap();
        let dead = group_advantages(&[1.0, 1.0]).unwrap();
        let mut b = CurriculumBuffer::new(None);
        assert!(b.offer(3, &live));
        assert!(b.contains(&3));
        assert!(!b.offer(3, &live));
        assert!(!b.offer(4, &dead));
        assert!(!b.drop_if_trivial(&9, &dead));
        assert!(!b.drop_if_trivial(&3, &live));
        assert!(b.drop_if_trivial(&3, &dead));
        assert!(b.is_empty());
    }

    #[test]
    fn bounded_eviction_is_oldest_first() {
        let mut b = CurriculumBuffer::new(Some(2));
        for id in [1, 2, 3] {
            b.insert(id);
        }
        assert_eq!(b.ids(), &[2, 3]);
    }

    #[test]
    fn bound_examples() {
        assert!((max_eps_cur(0.9, 0.5).unwrap() - 0.1 / 0.6).abs() < 1e-12);
        assert_eq!(max_eps_cur(0.3, 0.0).unwrap(), 1.0);
        assert_eq!(max_eps_cur(0.0, 1.0).unwrap(), 0.5);
        assert_eq!(max_eps_cur(1.0, 0.0), Err(GrpoError::UndefinedBound));
        assert_eq!(max_eps_cur(1.0, 0.5).unwrap(), 0.0);
        assert!(max_eps_cur(1.2, 0.5).is_err());
    }
}
