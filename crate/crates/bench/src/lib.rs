//! Instances shared by the benchmarks.

use chebex::ProblemSpec;

/// Full first-kind index sets `{1..n}` at one `b` per phase regime.
pub fn full_range_instances() -> Vec<(String, ProblemSpec)> {
    [(4usize, 1.2), (8, 1.2), (8, 1.8), (16, 1.5), (16, 2.5)]
        .into_iter()
        .map(|(n, b)| (format!("n{n}_b{b}"), ProblemSpec::first(1..=n, b).unwrap()))
        .collect()
}

/// A small instance cheap enough for oracle runs.
pub fn oracle_instance() -> ProblemSpec {
    ProblemSpec::first([1, 2, 3], 1.6).unwrap()
}
