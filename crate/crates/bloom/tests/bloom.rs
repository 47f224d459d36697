use molreward_bloom::{BloomError, BloomFilter};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent evaluation of the sizing formulas with explicit rounding.
fn oracle_parameters(n: f64, p: f64) -> (u64, u32) {
    let m = (-n * p.ln() / 2f64.ln().powi(2)).ceil();
    let k = (m / n * 2f64.ln()).round().max(1.0);
    (m as u64, k as u32)
}

#[test]
fn sizing_matches_formula() {
    for &(n, p) in &[(1000u64, 0.01), (1, 0.5), (10_000, 0.001), (12345, 0.05), (7, 0.3)] {
        let f = BloomFilter::new(n, p).unwrap();
        assert_eq!((f.m(), f.k()), oracle_parameters(n as f64, p), "n={n} p={p}");
    }
    let f = BloomFilter::new(1000, 0.01).unwrap();
    assert_eq!((f.m(), f.k()), (9586, 7));
    assert!(BloomFilter::new(10, 0.0).is_err());
}

#[test]
fn false_positive_rate_at_capacity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut f = BloomFilter::new(10_000, 0.01).unwrap();
    let members: Vec<u64> = (0..10_000).map(|_| rng.random::<u64>() | 1).collect();
    for x in &members {
        f.insert(x.to_le_bytes());
    }
    assert!(members.iter().all(|x| f.contains(x.to_le_bytes())));
    // Even keys are disjoint from the odd members.
    let fp = (0..100_000)
        .filter(|_| f.contains((rng.random::<u64>() & !1).to_le_bytes()))
        .count();
    let rate = fp as f64 / 1e5;
    assert!(rate <= 0.02, "false-positive rate {rate}");
}

#[test]
fn save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.bloom");
    let mut f = BloomFilter::with_salt(500, 0.001, 0xdead_beef).unwrap();
    for i in 0..300 {
        f.insert(format!("item{i}"));
    }
    f.save(&path).unwrap();
    let g = BloomFilter::load(&path).unwrap();
    assert_eq!(f, g);
    assert_eq!(std::fs::read(&path).unwrap(), g.to_bytes());
}

#[test]
fn corrupt_files_are_rejected() {
    let mut f = BloomFilter::new(50, 0.01).unwrap();
    f.insert("x");
    let bytes = f.to_bytes();
    for cut in [bytes.len() - 1, bytes.len() - 5, 40, 10] {
        assert!(matches!(BloomFilter::from_bytes(&bytes[..cut]), Err(BloomError::Checksum)), "cut {cut}");
    }
    let mut wrong = bytes.clone();
    wrong[0] = b'X';
    assert!(matches!(BloomFilter::from_bytes(&wrong), Err(BloomError::Version(_))));
    let mut v2 = bytes.clone();
    v2[4] = 2;
    assert!(matches!(BloomFilter::from_bytes(&v2), Err(BloomError::Version(_))));
    let mut flipped = bytes;
    flipped[40] ^= 0xff;
    assert!(matches!(BloomFilter::from_bytes(&flipped), Err(BloomError::Checksum)));
}

proptest! {
    #[test]
    fn no_false_negatives(items in proptest::collection::vec(proptest::collection::vec(any::<u8>(), 0..24), 1..200), salt in any::<u64>()) {
        let mut f = BloomFilter::with_salt(items.len() as u64, 0.01, salt).unwrap();
        for x in &items {
            f.insert(x);
            prop_assert!(f.contains(x));
        }
        for x in &items {
            prop_assert!(f.contains(x));
        }
    }

    #[test]
    fn serialization_is_byte_identical(items in proptest::collection::vec(any::<u32>(), 0..100), salt in any::<u64>()) {
        let mut f = BloomFilter::with_salt(100, 0.05, salt).unwrap();
        for x in &items {
            f.insert(x.to_le_bytes());
        }
        let bytes = f.to_bytes();
        let g = BloomFilter::from_bytes(&bytes).unwrap();
        prop_assert_eq!(g.to_bytes(), bytes);
        prop_assert_eq!(g, f);
    }
}
