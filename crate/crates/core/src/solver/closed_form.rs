//! Explicit solutions for the index sets `{1..n}`, `{n-1, n}` (first kind) and
//! `{0..n}`, `{n-1, n}` (second kind).
//!
//! The structure of the solution depends on `b` through a phase index `k`:
//! all polynomials of degree below `k` (first kind) or `k - 1` (second kind)
//! vanish. `k` drops by one each time `b` crosses a largest zero of an odd
//! Chebyshev polynomial of the second kind evaluated at `b/2`.

use std::collections::{BTreeMap, BTreeSet};

use super::{active_set, dual_moments, ExtremalSolution, Kind, ProblemSpec};
use crate::canonical::CanonicalMomentSeq;
use crate::error::{invalid, Result};
use crate::poly::{cheb_first, cheb_second_signed, cheb_second_value, Polynomial};
use crate::supnorm::check_half_width;

/// A Chebyshev value counts as positive above this threshold.
pub const THRESHOLD_EPS: f64 = 1e-12;

fn u(m: i64, y: f64) -> f64 {
    cheb_second_value(m, y)
}

/// Phase index `k`.
///
/// First kind: the smallest `j` in `1..=n` with `U_{2n-2i+1}(b/2) > 0` for all
/// `i = j..n`. Second kind: the smallest `j` in `1..=n+1` with
/// `U_{2n-2i+3}(b/2) > 0` for all `i = j..n+1`.
pub fn threshold_index(n: usize, b: f64, kind: Kind) -> usize {
    let y = b / 2.0;
    let (top, offset) = match kind {
        Kind::First => (n, 1),
        Kind::Second => (n + 1, 3),
    };
    let mut k = top;
    while k > 1 {
        let i = (k - 1) as i64;
        if u(2 * n as i64 - 2 * i + offset, y) > THRESHOLD_EPS {
            k -= 1;
        } else {
            break;
        }
    }
    k
}

/// `T_m(x/b)`.
fn t_scaled(m: usize, b: f64) -> Result<Polynomial> {
    Ok(cheb_first(m)?.compose_scale(1.0 / b))
}

/// `U_m(x/s)`, with `U_{-1} = 0`.
fn u_scaled(m: i64, s: f64) -> Result<Polynomial> {
    Ok(cheb_second_signed(m)?.compose_scale(1.0 / s))
}

fn check_args(n: usize, b: f64, min_n: usize) -> Result<()> {
    check_half_width(b)?;
    if n < min_n || n > crate::poly::MAX_DEGREE {
        return invalid(format!("degree n = {n} outside the supported range"));
    }
    Ok(())
}

/// First-kind solution for `I = {1..n}` at the phase given by
/// [`threshold_index`].
pub fn closed_form_first_full(n: usize, b: f64) -> Result<ExtremalSolution> {
    check_args(n, b, 1)?;
    closed_form_first_at_phase(n, b, threshold_index(n, b, Kind::First))
}

/// First-kind closed form for `I = {1..n}` evaluated with an explicit phase
/// `k` (only optimal when `k` is the phase index of `b`, or at a boundary
/// between two phases).
pub fn closed_form_first_at_phase(n: usize, b: f64, k: usize) -> Result<ExtremalSolution> {
    check_args(n, b, 1)?;
    if !(1..=n).contains(&k) {
        return invalid(format!("phase {k} outside 1..={n}"));
    }
    let y = b / 2.0;
    let (ni, ki) = (n as i64, k as i64);
    let u_lo = u(ni - ki, y);
    let u_hi = u(ni - ki + 1, y);
    let ratio = u_hi / u_lo;
    let tk = t_scaled(k, b)?;
    let tk1 = t_scaled(k - 1, b)?;

    let mut polys = BTreeMap::new();
    let mut alphas = BTreeMap::new();
    for l in 1..=n {
        let li = l as i64;
        if l < k {
            polys.insert(l, Polynomial::zero());
            alphas.insert(l, 0.0);
            continue;
        }
        let weight = u(2 * ni - 2 * li + 1, y).max(0.0);
        let beta = (b * weight).sqrt() / u_hi.abs();
        let inner =
            &(&tk * &u_scaled(li - ki, 2.0)?) - &(&tk1 * &u_scaled(li - 1 - ki, 2.0)?).scale(ratio);
        polys.insert(l, inner.scale(beta).with_positive_leading());
        alphas.insert(l, weight / (u_lo * u_hi));
    }

    // Even canonical moments of the dual measure: 1/2 below the phase,
    // U_{n-j+1}(b/2) / (b U_{n-j}(b/2)) from the phase on.
    let mut p = vec![0.5; 2 * n];
    for j in k..n {
        let ji = j as i64;
        p[2 * j - 1] = u(ni - ji + 1, y) / (b * u(ni - ji, y));
    }
    p[2 * n - 1] = 1.0;
    let cm = CanonicalMomentSeq::new(b, p)?;
    let spec = ProblemSpec::first(1..=n, b)?;
    let active = active_set(&cm, &spec)?;

    let objective = 2f64.powi(2 * k as i32 - 2) / b.powi(2 * k as i32 - 1) * u_lo / u_hi;
    Ok(ExtremalSolution {
        polys,
        alphas,
        objective,
        phase_index: Some(k),
        dual_moments: Some(cm),
        active_set: active,
    })
}

/// First-kind solution for `I = {n-1, n}`, `n >= 2`.
pub fn closed_form_pair_first(n: usize, b: f64) -> Result<ExtremalSolution> {
    check_args(n, b, 2)?;
    let b2 = b * b;
    let (lower, upper, objective, phase) = if b2 <= 2.0 {
        let objective = 2f64.powi(2 * n as i32 - 2) / b.powi(2 * n as i32);
        (Polynomial::zero(), t_scaled(n, b)?, objective, n)
    } else {
        let lower = t_scaled(n - 1, b)?.scale(b * (b2 - 2.0).sqrt() / (b2 - 1.0));
        let upper = (&t_scaled(n, b)?.scale(b2) - &t_scaled(n - 2, b)?.scale(b2 - 2.0))
            .scale(1.0 / (2.0 * (b2 - 1.0)));
        let objective = 2f64.powi(2 * n as i32 - 4) / b.powi(2 * n as i32 - 4) / (b2 - 1.0);
        (lower, upper, objective, n - 1)
    };
    let spec = ProblemSpec::first([n - 1, n], b)?;
    let cm = dual_moments(&spec)?;
    let active = active_set(&cm, &spec)?;
    Ok(assemble_pair(
        n,
        lower,
        upper,
        objective,
        phase,
        Some(cm),
        active,
    ))
}

fn assemble_pair(
    n: usize,
    lower: Polynomial,
    upper: Polynomial,
    objective: f64,
    phase: usize,
    dual: Option<CanonicalMomentSeq>,
    active: BTreeSet<usize>,
) -> ExtremalSolution {
    let lower = lower.with_positive_leading();
    let upper = upper.with_positive_leading();
    let mut alphas = BTreeMap::new();
    alphas.insert(n - 1, lower.coeff(n - 1).powi(2) / objective);
    alphas.insert(n, upper.coeff(n).powi(2) / objective);
    let mut polys = BTreeMap::new();
    polys.insert(n - 1, lower);
    polys.insert(n, upper);
    ExtremalSolution {
        polys,
        alphas,
        objective,
        phase_index: Some(phase),
        dual_moments: dual,
        active_set: active,
    }
}

/// Second-kind solution for `I = {0..n}`.
pub fn closed_form_second_full(n: usize, b: f64) -> Result<ExtremalSolution> {
    check_args(n, b, 0)?;
    closed_form_second_at_phase(n, b, threshold_index(n, b, Kind::Second))
}

/// Second-kind closed form for `I = {0..n}` with an explicit phase `k` in
/// `1..=n+1`.
pub fn closed_form_second_at_phase(n: usize, b: f64, k: usize) -> Result<ExtremalSolution> {
    check_args(n, b, 0)?;
    if !(1..=n + 1).contains(&k) {
        return invalid(format!("phase {k} outside 1..={}", n + 1));
    }
    let y = b / 2.0;
    let (ni, ki) = (n as i64, k as i64);
    let u_lo = u(ni - ki + 1, y);
    let u_hi = u(ni - ki + 2, y);
    let ratio = u_hi / u_lo;
    let uk1 = u_scaled(ki - 1, b)?;
    let uk2 = u_scaled(ki - 2, b)?;

    let mut polys = BTreeMap::new();
    let mut alphas = BTreeMap::new();
    for l in 0..=n {
        let li = l as i64;
        if l + 2 <= k {
            polys.insert(l, Polynomial::zero());
            alphas.insert(l, 0.0);
            continue;
        }
        let weight = u(2 * ni - 2 * li + 1, y).max(0.0);
        let beta = weight.sqrt() / (b.sqrt() * u_hi.abs());
        let inner = &(&uk1 * &u_scaled(li - ki + 1, 2.0)?)
            - &(&uk2 * &u_scaled(li - ki, 2.0)?).scale(ratio);
        polys.insert(l, inner.scale(beta).with_positive_leading());
        alphas.insert(l, weight / (u_lo * u_hi));
    }
    let active = active_from_alphas(&alphas, n);
    let objective = 2f64.powi(2 * k as i32 - 2) / b.powi(2 * k as i32 - 1) * u_lo / u_hi;
    Ok(ExtremalSolution {
        polys,
        alphas,
        objective,
        phase_index: Some(k),
        dual_moments: None,
        active_set: active,
    })
}

fn active_from_alphas(alphas: &BTreeMap<usize, f64>, n: usize) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = alphas
        .iter()
        .filter(|(_, &a)| a > 0.0)
        .map(|(&j, _)| j)
        .collect();
    set.insert(n);
    set
}

/// Second-kind solution for `I = {n-1, n}`, `n >= 1`.
///
/// For `b <= sqrt(2)` the optimum is `(0, U_n(x/b)/b)` with value
/// `2^{2n} b^{-2n-2}`; above it both polynomials are active and the value is
/// `(2/b)^{2(n-1)} / (b^2 - 1)`.
pub fn closed_form_pair_second(n: usize, b: f64) -> Result<ExtremalSolution> {
    check_args(n, b, 1)?;
    let b2 = b * b;
    let ni = n as i64;
    let (lower, upper, objective, phase) = if b2 <= 2.0 {
        let upper = u_scaled(ni, b)?.scale(1.0 / b);
        let objective = 2f64.powi(2 * n as i32) / b.powi(2 * n as i32 + 2);
        (Polynomial::zero(), upper, objective, n + 1)
    } else {
        let lower = u_scaled(ni - 1, b)?.scale((b2 - 2.0).sqrt() / (b2 - 1.0));
        let upper = (&u_scaled(ni, b)? - &u_scaled(ni - 2, b)?.scale((b2 - 2.0) / b2))
            .scale(b / (2.0 * (b2 - 1.0)));
        let objective = (2.0 / b).powi(2 * (n as i32 - 1)) / (b2 - 1.0);
        (lower, upper, objective, n)
    };
    let mut sol = assemble_pair(n, lower, upper, objective, phase, None, BTreeSet::new());
    sol.active_set = active_from_alphas(&sol.alphas, n);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cheb_second;
    use crate::solver::solve_first_kind;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn first_kind_phase_examples() {
        assert_eq!(threshold_index(3, 1.0, Kind::First), 3);
        assert_eq!(threshold_index(3, 1.6, Kind::First), 2);
        assert_eq!(threshold_index(3, 2.0, Kind::First), 1);
        for n in 1..=12 {
            for b in [2.0, 2.5, 7.0] {
                assert_eq!(threshold_index(n, b, Kind::First), 1);
            }
        }
    }

    #[test]
    fn second_kind_phase_examples() {
        for n in 0..=10 {
            assert_eq!(threshold_index(n, 1.0, Kind::Second), n + 1);
            assert_eq!(threshold_index(n, 2.0, Kind::Second), 1);
        }
    }

    #[test]
    fn first_full_objectives() {
        let b: f64 = 1.6;
        let sol = closed_form_first_full(3, b).unwrap();
        let expected = 4.0 / (b * b) / (b * b - 1.0);
        assert!(rel(sol.objective, expected) < 1e-12);
        assert!((sol.objective - 1.001603).abs() < 1e-6);

        let b = 3f64.sqrt();
        let sol = closed_form_first_full(3, b).unwrap();
        let case_b = 4.0 / (b * b) / (b * b - 1.0);
        let case_c = (b * b - 1.0) / (b * b * (b * b - 2.0));
        assert!(rel(sol.objective, 2.0 / 3.0) < 1e-12);
        assert!(rel(case_b, case_c) < 1e-12);

        let sol = closed_form_first_full(2, 3.0).unwrap();
        assert_eq!(sol.phase_index, Some(1));
        assert!(rel(sol.objective, 1.0 / 8.0) < 1e-12);
    }

    #[test]
    fn first_full_example_polynomials() {
        // b in [sqrt 2, sqrt 3]: P_2 = b sqrt(b^2-2)/(b^2-1) T_2(x/b),
        // P_3 = [b^2 T_3(x/b) - (b^2-2) T_1(x/b)] / (2(b^2-1)).
        let b: f64 = 1.6;
        let b2 = b * b;
        let sol = closed_form_first_full(3, b).unwrap();
        assert!(sol.polys[&1].is_zero());
        let p2 = t_scaled(2, b)
            .unwrap()
            .scale(b * (b2 - 2.0).sqrt() / (b2 - 1.0));
        let p3 = (&t_scaled(3, b).unwrap().scale(b2) - &t_scaled(1, b).unwrap().scale(b2 - 2.0))
            .scale(1.0 / (2.0 * (b2 - 1.0)));
        assert!(sol.polys[&2].max_coeff_diff(&p2) < 1e-12);
        assert!(sol.polys[&3].max_coeff_diff(&p3) < 1e-12);
        // the recurrence form b/(b^2-1) [x T_2(x/b) - (b^2-1)/b T_1(x/b)]
        let rec = (&(&Polynomial::x() * &t_scaled(2, b).unwrap())
            - &t_scaled(1, b).unwrap().scale((b2 - 1.0) / b))
            .scale(b / (b2 - 1.0));
        assert!(rec.max_coeff_diff(&p3) < 1e-12);
    }

    #[test]
    fn pair_first_examples() {
        assert!(rel(closed_form_pair_first(3, 1.0).unwrap().objective, 16.0) < 1e-12);
        assert!(rel(closed_form_pair_first(2, 2.0).unwrap().objective, 1.0 / 3.0) < 1e-12);
        let b = 2f64.sqrt();
        for n in 2..=6 {
            let low = 2f64.powi(2 * n - 2) / b.powi(2 * n);
            let high = 2f64.powi(2 * n - 4) / b.powi(2 * n - 4) / (b * b - 1.0);
            assert!(rel(low, high) < 1e-12, "n={n}");
            let sol = closed_form_pair_first(n as usize, b).unwrap();
            assert!(rel(sol.objective, low) < 1e-12);
        }
    }

    #[test]
    fn pair_first_agrees_with_general_solver() {
        for n in 2..=6 {
            for b in [0.7, 1.2, 1.5, 2.0, 2.8] {
                let closed = closed_form_pair_first(n, b).unwrap();
                let general =
                    solve_first_kind(&ProblemSpec::first([n - 1, n], b).unwrap()).unwrap();
                assert!(
                    rel(closed.objective, general.objective) < 1e-10,
                    "n={n} b={b}"
                );
                for j in [n - 1, n] {
                    let d = closed.polys[&j].max_coeff_diff(&general.polys[&j]);
                    assert!(d < 1e-8, "n={n} b={b} j={j} diff={d}");
                }
            }
        }
    }

    #[test]
    fn second_full_examples() {
        let sol = closed_form_second_full(2, 1.0).unwrap();
        assert!(rel(sol.objective, 16.0) < 1e-12);
        assert!(rel(sol.leading_objective(), 16.0) < 1e-12);
        let sol = closed_form_second_full(2, 2.0).unwrap();
        assert!(rel(sol.objective, 3.0 / 8.0) < 1e-12);
        for b in [0.5, 1.0, 3.0] {
            let sol = closed_form_second_full(0, b).unwrap();
            assert!(sol.polys[&0].max_coeff_diff(&Polynomial::constant(1.0 / b)) < 1e-15);
            assert!(rel(sol.objective, 1.0 / (b * b)) < 1e-12);
        }
    }

    #[test]
    fn second_full_small_b_is_scaled_u() {
        for n in 1..=5 {
            let b = 1.2;
            let sol = closed_form_second_full(n, b).unwrap();
            let expected = cheb_second(n)
                .unwrap()
                .compose_scale(1.0 / b)
                .scale(1.0 / b);
            assert!(sol.polys[&n].max_coeff_diff(&expected) < 1e-12);
            assert!((0..n).all(|l| sol.polys[&l].is_zero()));
        }
    }

    #[test]
    fn second_full_large_b_is_proportional_to_u_half() {
        let (n, b) = (4usize, 2.5);
        let sol = closed_form_second_full(n, b).unwrap();
        let y = b / 2.0;
        for l in 0..=n {
            let c = u(2 * (n - l) as i64 + 1, y).sqrt() / (b.sqrt() * u(n as i64 + 1, y));
            let expected = u_scaled(l as i64, 2.0).unwrap().scale(c);
            assert!(sol.polys[&l].max_coeff_diff(&expected) < 1e-12, "l={l}");
        }
    }

    #[test]
    fn pair_second_examples() {
        assert!(rel(closed_form_pair_second(2, 1.0).unwrap().objective, 16.0) < 1e-12);
        assert!(
            rel(
                closed_form_pair_second(2, 2.0).unwrap().objective,
                1.0 / 3.0
            ) < 1e-12
        );
        // both branches meet at b = sqrt 2
        let b = 2f64.sqrt();
        for n in 1..=6 {
            let low = closed_form_pair_second(n, b).unwrap().objective;
            let high = (2.0 / b).powi(2 * (n as i32 - 1)) / (b * b - 1.0);
            assert!(rel(low, high) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn objectives_match_leading_coefficients() {
        for n in 1..=8 {
            for b in [0.6, 1.3, 1.5, 1.8, 2.2, 4.0] {
                for sol in [
                    closed_form_first_full(n, b).unwrap(),
                    closed_form_second_full(n, b).unwrap(),
                    closed_form_pair_second(n, b).unwrap(),
                ] {
                    assert!(
                        rel(sol.leading_objective(), sol.objective) < 1e-10,
                        "n={n} b={b}"
                    );
                    let total: f64 = sol.alphas.values().sum();
                    assert!((total - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(closed_form_first_full(0, 1.0).is_err());
        assert!(closed_form_pair_first(1, 1.0).is_err());
        assert!(closed_form_pair_second(0, 1.0).is_err());
        assert!(closed_form_first_at_phase(3, 1.0, 4).is_err());
        assert!(closed_form_second_at_phase(3, 1.0, 0).is_err());
        assert!(closed_form_first_full(3, -1.0).is_err());
    }
}
