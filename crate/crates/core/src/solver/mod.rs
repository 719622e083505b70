//! The extremal problem: maximize the sum of squared leading coefficients of a
//! polynomial family `(P_j)_{j in I}`, `deg P_j = j`, subject to
//! `sup_{|x| <= b} W(x) sum_j P_j(x)^2 <= 1` with `W = 1` (first kind) or
//! `W = b^2 - x^2` (second kind).
//!
//! For the first kind the problem is dual to minimizing `max_{j in I} 1/k_j(xi)`
//! over probability measures on `[-b, b]`. The minimizing measure is given
//! explicitly through its canonical moments ([`dual_moments`]) and the optimal
//! family consists of rescaled monic orthogonal polynomials of that measure.

mod closed_form;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::canonical::{l2_norms, monic_orthopolys, CanonicalMomentSeq};
use crate::error::{invalid, Error, Result};
use crate::poly::{Polynomial, MAX_DEGREE};
use crate::supnorm::check_half_width;

pub use closed_form::{
    closed_form_first_at_phase, closed_form_first_full, closed_form_pair_first,
    closed_form_pair_second, closed_form_second_at_phase, closed_form_second_full, threshold_index,
    THRESHOLD_EPS,
};
pub use verify::{verify_solution, Tolerances, VerificationReport};

/// Relative tolerance on `k_j` when collecting the indices that attain the minimum.
pub const ACTIVE_SET_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Unweighted constraint `sum_j P_j^2 <= 1`.
    First,
    /// Weighted constraint `(b^2 - x^2) sum_j P_j^2 <= 1`.
    Second,
}

impl Kind {
    pub fn is_weighted(self) -> bool {
        self == Kind::Second
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::First => "first",
            Kind::Second => "second",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Kind::First),
            "second" => Ok(Kind::Second),
            other => invalid(format!("unknown problem kind '{other}'")),
        }
    }
}

/// Problem instance. `n` is always the largest index, so it belongs to the set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    kind: Kind,
    indices: Vec<usize>,
    b: f64,
}

impl ProblemSpec {
    pub fn new(kind: Kind, indices: impl IntoIterator<Item = usize>, b: f64) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        let Some(&n) = set.last() else {
            return invalid("index set must not be empty");
        };
        if n > MAX_DEGREE {
            return invalid(format!("largest index {n} exceeds {MAX_DEGREE}"));
        }
        if kind == Kind::First && set.contains(&0) {
            return invalid("first-kind index sets must not contain 0");
        }
        check_half_width(b)?;
        Ok(Self {
            kind,
            indices: set.into_iter().collect(),
            b,
        })
    }

    pub fn first(indices: impl IntoIterator<Item = usize>, b: f64) -> Result<Self> {
        Self::new(Kind::First, indices, b)
    }

    pub fn second(indices: impl IntoIterator<Item = usize>, b: f64) -> Result<Self> {
        Self::new(Kind::Second, indices, b)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Sorted, distinct indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        *self.indices.last().expect("index set is never empty")
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// True for `{1..n}` (first kind) or `{0..n}` (second kind).
    pub fn is_full_range(&self) -> bool {
        let start = match self.kind {
            Kind::First => 1,
            Kind::Second => 0,
        };
        self.indices.iter().copied().eq(start..=self.n())
    }

    /// True for `{n-1, n}`.
    pub fn is_pair(&self) -> bool {
        self.indices.len() == 2 && self.indices[0] + 1 == self.indices[1]
    }
}

/// An optimal polynomial family with the data that certifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSolution {
    /// Optimal polynomials keyed by degree; zero polynomials are kept.
    pub polys: BTreeMap<usize, Polynomial>,
    pub alphas: BTreeMap<usize, f64>,
    pub objective: f64,
    /// Index `k` of the closed-form phase, when one applies.
    pub phase_index: Option<usize>,
    /// Canonical moments of the dual measure (first kind only).
    pub dual_moments: Option<CanonicalMomentSeq>,
    pub active_set: BTreeSet<usize>,
}

impl ExtremalSolution {
    /// Sum of squared leading coefficients, recomputed from the polynomials.
    pub fn leading_objective(&self) -> f64 {
        self.polys
            .iter()
            .map(|(&j, p)| {
                let m = p.coeff(j);
                m * m
            })
            .sum()
    }

    /// Multiplies every polynomial by `t` (the objective scales by `t^2`).
    pub fn scaled(&self, t: f64) -> Self {
        let mut out = self.clone();
        for p in out.polys.values_mut() {
            *p = p.scale(t);
        }
        out.objective *= t * t;
        out
    }

    /// Polynomials in index order.
    pub fn poly_list(&self) -> Vec<Polynomial> {
        self.polys.values().cloned().collect()
    }

    /// Smallest index carrying a nonzero polynomial.
    pub fn leading_index(&self) -> Option<usize> {
        self.polys
            .iter()
            .find(|(_, p)| !p.is_zero())
            .map(|(&j, _)| j)
    }
}

/// Canonical moments of the measure solving the dual problem.
///
/// Odd moments are `1/2`, `p_{2n} = 1`, and the remaining even moments follow
/// from the descending recursion
/// `p_{2(n-j)} = max{ z_{n-j} [1 - b^{-2j} prod_{i=n-j+1}^{n-1} (q_{2i} p_{2i})^{-1}], 1/2 }`
/// where `z_m` indicates membership of `m` in the index set.
pub fn dual_moments(spec: &ProblemSpec) -> Result<CanonicalMomentSeq> {
    if spec.kind() != Kind::First {
        return invalid("dual canonical moments are only available for the first kind");
    }
    let n = spec.n();
    let b = spec.b();
    let mut p = vec![0.5; 2 * n];
    p[2 * n - 1] = 1.0;
    // Running prod_{i=n-j+1}^{n-1} (q_{2i} p_{2i})^{-1}.
    let mut prod = 1.0;
    for j in 1..n {
        let m = n - j;
        let gamma = 1.0 - b.powi(-2 * j as i32) * prod;
        let value = if spec.contains(m) {
            gamma.max(0.5)
        } else {
            0.5
        };
        p[2 * m - 1] = value;
        let qp = (1.0 - value) * value;
        assert!(qp > 0.0, "even canonical moment {value} left [1/2, 1)");
        prod /= qp;
    }
    CanonicalMomentSeq::new(b, p)
}

/// Indices whose norm `k_j` attains the minimum over the index set, up to
/// [`ACTIVE_SET_RTOL`]. Always contains `n`.
pub fn active_set(cm: &CanonicalMomentSeq, spec: &ProblemSpec) -> Result<BTreeSet<usize>> {
    let norms = l2_norms(cm, spec.n())?;
    let k = |j: usize| norms[j - 1];
    let min = spec
        .indices()
        .iter()
        .map(|&j| k(j))
        .fold(f64::INFINITY, f64::min);
    let mut set: BTreeSet<usize> = spec
        .indices()
        .iter()
        .copied()
        .filter(|&j| k(j) <= (1.0 + ACTIVE_SET_RTOL) * min)
        .collect();
    set.insert(spec.n());
    Ok(set)
}

/// Convex weights `alpha_j = prod_{i<j} (q_{2i}/p_{2i}) (1 - q_{2j}/p_{2j})`,
/// `j = 1..n`. They telescope to 1 because `p_{2n} = 1`.
pub fn alpha_weights(cm: &CanonicalMomentSeq, n: usize) -> Result<Vec<f64>> {
    if cm.len() < 2 * n {
        return Err(Error::InsufficientData {
            needed: 2 * n,
            available: cm.len(),
        });
    }
    let mut out = Vec::with_capacity(n);
    let mut prod = 1.0;
    for j in 1..=n {
        let p = cm.p()[2 * j - 1];
        let ratio = (1.0 - p) / p;
        out.push(prod * (1.0 - ratio));
        prod *= ratio;
    }
    Ok(out)
}

/// Solves the first-kind problem for an arbitrary index set through the dual
/// measure: `P_j* = sqrt(alpha_j / k_j) P_j(., xi*)`.
pub fn solve_first_kind(spec: &ProblemSpec) -> Result<ExtremalSolution> {
    if spec.kind() != Kind::First {
        return invalid("solve_first_kind called with a second-kind problem");
    }
    let n = spec.n();
    let cm = dual_moments(spec)?;
    let monic = monic_orthopolys(&cm, n)?;
    let norms = l2_norms(&cm, n)?;
    let alphas_all = alpha_weights(&cm, n)?;
    let active = active_set(&cm, spec)?;

    let mut polys = BTreeMap::new();
    let mut alphas = BTreeMap::new();
    for &j in spec.indices() {
        let alpha = alphas_all[j - 1];
        let poly = if alpha > 0.0 {
            monic[j].scale((alpha / norms[j - 1]).sqrt())
        } else {
            Polynomial::zero()
        };
        polys.insert(j, poly);
        alphas.insert(j, alpha);
    }
    let phase_index = spec
        .is_full_range()
        .then(|| threshold_index(n, spec.b(), Kind::First));
    Ok(ExtremalSolution {
        polys,
        alphas,
        objective: 1.0 / norms[n - 1],
        phase_index,
        dual_moments: Some(cm),
        active_set: active,
    })
}

/// Dispatches to the general first-kind solver or a second-kind closed form.
pub fn solve(spec: &ProblemSpec) -> Result<ExtremalSolution> {
    match spec.kind() {
        Kind::First => solve_first_kind(spec),
        Kind::Second if spec.is_full_range() => closed_form_second_full(spec.n(), spec.b()),
        Kind::Second if spec.is_pair() => closed_form_pair_second(spec.n(), spec.b()),
        Kind::Second => {
            invalid("second-kind problems are solved only for index sets {0..n} and {n-1, n}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn problem_spec_validation() {
        assert!(ProblemSpec::first([], 1.0).is_err());
        assert!(ProblemSpec::first([0, 1], 1.0).is_err());
        assert!(ProblemSpec::first([31], 1.0).is_err());
        assert!(ProblemSpec::first([3], 10.5).is_err());
        assert!(ProblemSpec::second([0, 1], 1.0).is_ok());
        let s = ProblemSpec::first([3, 1, 3, 2], 1.0).unwrap();
        assert_eq!(s.indices(), &[1, 2, 3]);
        assert_eq!(s.n(), 3);
        assert!(s.is_full_range());
        assert!(ProblemSpec::first([2, 3], 1.0).unwrap().is_pair());
    }

    #[test]
    fn dual_moments_examples() {
        let cm = dual_moments(&ProblemSpec::first([4], 7.0).unwrap()).unwrap();
        let mut expected = vec![0.5; 8];
        expected[7] = 1.0;
        assert_eq!(cm.p(), expected.as_slice());

        let cm = dual_moments(&ProblemSpec::first([1, 2, 3], 1.0).unwrap()).unwrap();
        assert_eq!(cm.p(), &[0.5, 0.5, 0.5, 0.5, 0.5, 1.0]);

        let cm = dual_moments(&ProblemSpec::first([1, 2], 2.0).unwrap()).unwrap();
        assert_eq!(cm.p(), &[0.5, 0.75, 0.5, 1.0]);

        let cm = dual_moments(&ProblemSpec::first([1, 2, 3], 2.0).unwrap()).unwrap();
        assert!((cm.p()[1] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(cm.p()[3], 0.75);
    }

    #[test]
    fn active_sets() {
        let cases: [(&[usize], f64, &[usize]); 3] = [
            (&[1, 2, 3], 1.0, &[3]),
            (&[1, 2, 3], 2.0, &[1, 2, 3]),
            (&[2, 3], 1.0, &[3]),
        ];
        for (idx, b, expected) in cases {
            let spec = ProblemSpec::first(idx.iter().copied(), b).unwrap();
            let cm = dual_moments(&spec).unwrap();
            let set: Vec<_> = active_set(&cm, &spec).unwrap().into_iter().collect();
            assert_eq!(set, expected, "I={idx:?} b={b}");
        }
    }

    #[test]
    fn alpha_examples() {
        let cm = dual_moments(&ProblemSpec::first([4], 1.3).unwrap()).unwrap();
        assert_eq!(alpha_weights(&cm, 4).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);

        let cm = dual_moments(&ProblemSpec::first([1, 2], 2.0).unwrap()).unwrap();
        let a = alpha_weights(&cm, 2).unwrap();
        assert!((a[0] - 2.0 / 3.0).abs() < 1e-15 && (a[1] - 1.0 / 3.0).abs() < 1e-15);
        // U_3(1) / (U_1(1) U_2(1)) = 4 / 6 and U_1(1) / 6 = 2 / 6
        assert!((a[0] - 4.0 / 6.0).abs() < 1e-15 && (a[1] - 2.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn first_kind_examples() {
        let sol = solve_first_kind(&ProblemSpec::first([3], 1.0).unwrap()).unwrap();
        assert!(rel(sol.objective, 16.0) < 1e-12);
        let t3 = [0.0, -3.0, 0.0, 4.0];
        assert!(sol.polys[&3].max_coeff_diff(&Polynomial::new(t3.to_vec())) < 1e-12);

        let sol = solve_first_kind(&ProblemSpec::first([1, 2, 3], 2.0).unwrap()).unwrap();
        assert!(rel(sol.objective, 0.375) < 1e-12);
        assert!(rel(sol.leading_objective(), sol.objective) < 1e-12);

        let sol = solve_first_kind(&ProblemSpec::first([2, 3], 2.0).unwrap()).unwrap();
        assert!(rel(sol.objective, 1.0 / 3.0) < 1e-12);
    }

    #[test]
    fn second_kind_requires_closed_form_sets() {
        assert!(solve(&ProblemSpec::second([0, 2], 1.0).unwrap()).is_err());
        assert!(solve(&ProblemSpec::second([0, 1, 2], 1.0).unwrap()).is_ok());
        assert!(solve(&ProblemSpec::second([2, 3], 1.0).unwrap()).is_ok());
        assert!(dual_moments(&ProblemSpec::second([0, 1], 1.0).unwrap()).is_err());
    }
}
