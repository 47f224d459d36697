/// Midrank percentile: `100 * (#below + 0.5 * #equal) / n`.
pub fn percentile_rank(pool: &[f64], x: f64) -> f64 {
    assert!(!pool.is_empty(), "percentile of an empty pool");
    let below = pool.iter().filter(|&&v| v < x).count() as f64;
    let equal = pool.iter().filter(|&&v| v == x).count() as f64;
    100.0 * (below + 0.5 * equal) / pool.len() as f64
}
