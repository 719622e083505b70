//! Sup-norm of (weighted) sums of squared polynomials over `[-b, b]`.

use crate::error::{invalid, Result};
use crate::poly::{Polynomial, MAX_DEGREE};

/// Refinement tolerance in `x`.
pub const REFINE_TOL: f64 = 1e-12;

/// Grid points per unit of degree of the squared sum.
const GRID_DENSITY: usize = 64;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNormReport {
    pub sup: f64,
    pub argmax: f64,
    pub attained_tol: f64,
}

/// Validates the half-width of the interval.
pub fn check_half_width(b: f64) -> Result<()> {
    if !(b > 0.0 && b <= 10.0) {
        return invalid(format!("half-width b must lie in (0, 10], got {b}"));
    }
    Ok(())
}

/// The constraint function `W(x) * sum_j P_j(x)^2`, with `W = b^2 - x^2` when
/// `weighted` and `W = 1` otherwise.
pub fn constraint_value(polys: &[Polynomial], b: f64, weighted: bool, x: f64) -> f64 {
    let s: f64 = polys
        .iter()
        .map(|p| {
            let v = p.eval(x);
            v * v
        })
        .sum();
    if weighted {
        (b * b - x * x) * s
    } else {
        s
    }
}

/// Maximum of the constraint function over `[-b, b]`.
///
/// The function is sampled on a Chebyshev-distributed grid of at least
/// `64 * (d + 1)` points, `d` being the degree of the squared sum, and every
/// bracketing triple around a grid maximum is refined by golden-section
/// search.
pub fn sup_sum_squares(polys: &[Polynomial], b: f64, weighted: bool) -> Result<SupNormReport> {
    if polys.is_empty() {
        return invalid("sup_sum_squares needs at least one polynomial");
    }
    check_half_width(b)?;
    let max_poly_degree = polys
        .iter()
        .filter_map(Polynomial::degree)
        .max()
        .unwrap_or(0);
    if max_poly_degree > MAX_DEGREE {
        return invalid(format!(
            "polynomial degree {max_poly_degree} exceeds {MAX_DEGREE}"
        ));
    }
    let degree = 2 * max_poly_degree + if weighted { 2 } else { 0 };
    let f = |x: f64| constraint_value(polys, b, weighted, x);
    let (sup, argmax) = maximize(f, -b, b, GRID_DENSITY * (degree + 1));
    Ok(SupNormReport {
        sup,
        argmax,
        attained_tol: REFINE_TOL,
    })
}

/// Grid-plus-refinement maximizer of `f` on `[lo, hi]` using `npts` Chebyshev
/// extrema points (endpoints included).
pub(crate) fn maximize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, npts: usize) -> (f64, f64) {
    let npts = npts.max(3);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let last = (npts - 1) as f64;
    let xs: Vec<f64> = (0..npts)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == npts - 1 {
                hi
            } else {
                mid - half * (std::f64::consts::PI * i as f64 / last).cos()
            }
        })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let mut best = (ys[0], xs[0]);
    for (&x, &y) in xs.iter().zip(&ys) {
        if y > best.0 {
            best = (y, x);
        }
    }

    let mut consider = |lo: f64, hi: f64| {
        let (y, x) = golden_max(&f, lo, hi);
        if y > best.0 {
            best = (y, x);
        }
    };
    for i in 0..npts {
        let left = if i > 0 { ys[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < npts {
            ys[i + 1]
        } else {
            f64::NEG_INFINITY
        };
        if ys[i] >= left && ys[i] >= right {
            let a = xs[i.saturating_sub(1)];
            let c = xs[(i + 1).min(npts - 1)];
            consider(a, c);
        }
    }
    best
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut c: f64) -> (f64, f64) {
    let mut x1 = c - INV_PHI * (c - a);
    let mut x2 = a + INV_PHI * (c - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while c - a > REFINE_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (c - a);
            f2 = f(x2);
        } else {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - INV_PHI * (c - a);
            f1 = f(x1);
        }
        if x2 <= x1 {
            break;
        }
    }
    let x = 0.5 * (a + c);
    let candidates = [(f(x), x), (f1, x1), (f2, x2), (f(a), a), (f(c), c)];
    candidates
        .into_iter()
        .fold((f64::NEG_INFINITY, x), |best, cand| {
            if cand.0 > best.0 {
                cand
            } else {
                best
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{cheb_first, cheb_second};
    use proptest::prelude::*;

    #[test]
    fn chebyshev_t3_on_scaled_interval() {
        let b = 1.7;
        let p = cheb_first(3).unwrap().compose_scale(1.0 / b);
        let r = sup_sum_squares(&[p], b, false).unwrap();
        assert!((r.sup - 1.0).abs() < 1e-12);
        assert!((r.argmax.abs() - b).abs() < 1e-9 || (r.argmax.abs() - b / 2.0).abs() < 1e-6);
        assert!(r.argmax.abs() <= b);
    }

    #[test]
    fn identity_on_b_two() {
        let r = sup_sum_squares(&[Polynomial::x()], 2.0, false).unwrap();
        assert!((r.sup - 4.0).abs() < 1e-12);
        assert_eq!(r.argmax.abs(), 2.0);
    }

    #[test]
    fn weighted_second_kind_is_bounded_by_one() {
        for b in [0.5, 1.0, 1.7, 3.0] {
            for n in 0..=6 {
                let p = cheb_second(n)
                    .unwrap()
                    .compose_scale(1.0 / b)
                    .scale(1.0 / b);
                let r = sup_sum_squares(&[p], b, true).unwrap();
                assert!((r.sup - 1.0).abs() < 1e-10, "b={b} n={n} sup={}", r.sup);
            }
        }
    }

    #[test]
    fn empty_list_is_rejected() {
        assert!(sup_sum_squares(&[], 1.0, false).is_err());
        assert!(sup_sum_squares(&[Polynomial::x()], 0.0, false).is_err());
        assert!(sup_sum_squares(&[Polynomial::x()], 11.0, false).is_err());
    }

    #[test]
    fn report_is_consistent_with_argmax() {
        let polys = [
            Polynomial::new(vec![0.1, -0.4, 0.3]),
            Polynomial::new(vec![0.2, 0.5, -0.1, 0.2]),
        ];
        let r = sup_sum_squares(&polys, 1.3, true).unwrap();
        assert!(r.argmax.abs() <= 1.3);
        assert_eq!(r.sup, constraint_value(&polys, 1.3, true, r.argmax));
    }

    fn poly_strategy() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-2.0f64..2.0, 1..7).prop_map(Polynomial::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn homogeneity(polys in prop::collection::vec(poly_strategy(), 1..4), b in 0.3f64..3.0, weighted: bool) {
            let base = sup_sum_squares(&polys, b, weighted).unwrap().sup;
            prop_assume!(base > 1e-8);
            for t in [0.5, 2.0] {
                let scaled: Vec<_> = polys.iter().map(|p| p.scale(t)).collect();
                let s = sup_sum_squares(&scaled, b, weighted).unwrap().sup;
                prop_assert!((s - t * t * base).abs() <= 1e-10 * t * t * base);
            }
        }

        #[test]
        fn refinement_dominates_grid(polys in prop::collection::vec(poly_strategy(), 1..4), b in 0.3f64..3.0) {
            let r = sup_sum_squares(&polys, b, false).unwrap();
            let grid_max = (0..=200)
                .map(|i| -b + 2.0 * b * i as f64 / 200.0)
                .map(|x| constraint_value(&polys, b, false, x.clamp(-b, b)))
                .fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(r.sup >= grid_max);
        }

        #[test]
        fn symmetric_input_matches_half_interval(
            raw in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 1..4), 1..4),
            odd: bool,
            b in 0.3f64..3.0,
        ) {
            // Spread the coefficients onto a single parity.
            let polys: Vec<Polynomial> = raw
                .into_iter()
                .map(|cs| {
                    let mut full = vec![0.0; 2 * cs.len() + 1];
                    for (i, c) in cs.into_iter().enumerate() {
                        full[2 * i + usize::from(odd)] = c;
                    }
                    Polynomial::new(full)
                })
                .collect();
            let whole = sup_sum_squares(&polys, b, false).unwrap().sup;
            let (half, _) = maximize(|x| constraint_value(&polys, b, false, x), 0.0, b, 2000);
            prop_assert!((whole - half).abs() <= 1e-10 * whole.max(1e-12));
        }
    }
}
