//! Replica farming with a deterministic, index-ordered reduction.

use crate::weights::Seed;
use crate::{Error, Result};
use rayon::prelude::*;

/// Runs `job` for replicas `0..n` in parallel and returns the results in
/// replica order. The first failing replica, by index, is reported.
pub(crate) fn replicate<T, F>(n: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> = (0..n as u64).into_par_iter().map(&job).collect();
    results
        .into_iter()
        .enumerate()
        .map(|(r, res)| res.map_err(|e| Error::Replica { replica: r as u64, source: Box::new(e) }))
        .collect()
}

/// Seed for one replica of one statistic. Distinct labels give independent
/// streams.
pub(crate) fn seed(root: u64, label: &str, replica: u64) -> Seed {
    Seed::new(root, label, replica)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_come_back_in_order() {
        let v = replicate(100, |r| Ok(r * r)).unwrap();
        assert_eq!(v, (0..100u64).map(|r| r * r).collect::<Vec<_>>());
    }

    #[test]
    fn errors_carry_the_lowest_failing_replica() {
        let e = replicate(50, |r| if r % 7 == 3 { Err(Error::Statistics("boom".into())) } else { Ok(r) }).unwrap_err();
        assert!(matches!(e, Error::Replica { replica: 3, .. }), "{e}");
    }
}
