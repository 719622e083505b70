//! Dense real polynomials in the monomial basis and the Chebyshev families.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest degree accepted by the Chebyshev constructors. Squared sums then
/// stay at degree 60 or below, which keeps the monomial basis usable for
/// `|x| <= 10`.
pub const MAX_DEGREE: usize = 30;

/// A real polynomial stored as ascending coefficients.
///
/// Trailing zeros are trimmed on construction, so a nonzero polynomial always
/// has a nonzero leading coefficient and the zero polynomial is the empty
/// coefficient list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `x + c`.
    pub fn linear(c: f64) -> Self {
        Self::new(vec![c, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^d`, zero when `d` exceeds the degree.
    pub fn coeff(&self, d: usize) -> f64 {
        self.coeffs.get(d).copied().unwrap_or(0.0)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn scale(&self, t: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * t).collect())
    }

    /// Returns `q(x) = p(s * x)`. Use `s = 1/b` to move a polynomial on
    /// `[-1, 1]` onto `[-b, b]`.
    pub fn compose_scale(&self, s: f64) -> Self {
        let mut pow = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * pow;
                pow *= s;
                v
            })
            .collect();
        Self::new(coeffs)
    }

    /// Flips the sign if needed so that the leading coefficient is positive.
    pub fn with_positive_leading(self) -> Self {
        if self.leading() < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Largest absolute coefficient difference, padding the shorter vector with zeros.
    pub fn max_coeff_diff(&self, other: &Polynomial) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|i| (self.coeff(i) - other.coeff(i)).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|&c| c == 0.0)
    }
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Self::new(coeffs)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

fn chebyshev(n: usize, first: Polynomial) -> Result<Polynomial> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeLimit {
            degree: n,
            max: MAX_DEGREE,
        });
    }
    let two_x = Polynomial::new(vec![0.0, 2.0]);
    let mut prev = Polynomial::constant(1.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = first;
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Chebyshev polynomial of the first kind `T_n` on `[-1, 1]`.
pub fn cheb_first(n: usize) -> Result<Polynomial> {
    chebyshev(n, Polynomial::x())
}

/// Chebyshev polynomial of the second kind `U_n` on `[-1, 1]`.
pub fn cheb_second(n: usize) -> Result<Polynomial> {
    chebyshev(n, Polynomial::new(vec![0.0, 2.0]))
}

/// `U_m(y)` by the three-term recurrence, with the convention `U_{-1} = 0`
/// and `U_{-2} = -1`.
pub fn cheb_second_value(m: i64, y: f64) -> f64 {
    match m {
        m if m < -2 => -cheb_second_value(-m - 2, y),
        -2 => -1.0,
        -1 => 0.0,
        _ => {
            let (mut prev, mut cur) = (0.0, 1.0);
            for _ in 0..m {
                let next = 2.0 * y * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `U_m` as a polynomial, with `U_{-1}` the zero polynomial.
pub(crate) fn cheb_second_signed(m: i64) -> Result<Polynomial> {
    if m == -1 {
        Ok(Polynomial::zero())
    } else if m < -1 {
        Err(Error::InvalidInput(format!("U_{m} is not used")))
    } else {
        cheb_second(m as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(coeffs: &[f64], x: f64) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * x.powi(i as i32))
            .sum()
    }

    #[test]
    fn eval_basics() {
        assert_eq!(Polynomial::constant(1.0).eval(7.3), 1.0);
        assert_eq!(Polynomial::new(vec![-1.0, 0.0, 1.0]).eval(2.0), 3.0);
        assert_eq!(Polynomial::zero().eval(3.0), 0.0);
    }

    #[test]
    fn eval_matches_power_sum_degree_8() {
        let p = Polynomial::new(vec![0.3, -1.2, 2.5, 0.7, -0.4, 1.1, -0.9, 0.05, 0.6]);
        for x in [-2.0, 0.5, 3.0] {
            let expected = naive(p.coeffs(), x);
            assert!((p.eval(x) - expected).abs() <= 1e-12 * expected.abs());
        }
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.leading(), 2.0);
        assert_eq!(Polynomial::new(vec![0.0, 0.0]).degree(), None);
        assert!(Polynomial::new(vec![0.0]).is_zero());
    }

    #[test]
    fn chebyshev_first_kind() {
        assert_eq!(cheb_first(1).unwrap().coeffs(), &[0.0, 1.0]);
        assert_eq!(cheb_first(3).unwrap().coeffs(), &[0.0, -3.0, 0.0, 4.0]);
        assert!((cheb_first(2).unwrap().eval(0.5) + 0.5).abs() < 1e-15);
        assert!(matches!(cheb_first(31), Err(Error::DegreeLimit { .. })));
    }

    #[test]
    fn chebyshev_second_kind() {
        assert_eq!(cheb_second(2).unwrap().eval(1.0), 3.0);
        let u3 = cheb_second(3).unwrap();
        assert_eq!(u3.coeffs(), &[0.0, -4.0, 0.0, 8.0]);
        assert!(u3.eval(std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        // 32x^5 - 32x^3 + 6x vanishes at x^2 = 3/4
        let u5 = cheb_second(5).unwrap();
        assert_eq!(u5.coeffs(), &[0.0, 6.0, 0.0, -32.0, 0.0, 32.0]);
        assert!(u5.eval(3f64.sqrt() / 2.0).abs() < 1e-13);
        assert!(cheb_second(31).is_err());
    }

    #[test]
    fn second_kind_values_match_polynomials() {
        for m in 0..12 {
            let u = cheb_second(m).unwrap();
            for y in [-1.3, -0.2, 0.5, 0.8, 1.5] {
                let v = cheb_second_value(m as i64, y);
                assert!((u.eval(y) - v).abs() <= 1e-12 * v.abs().max(1.0));
            }
        }
        assert_eq!(cheb_second_value(-1, 0.3), 0.0);
        assert_eq!(cheb_second_value(-2, 0.3), -1.0);
        // U_m(1) = m + 1
        assert_eq!(cheb_second_value(6, 1.0), 7.0);
    }

    #[test]
    fn cosine_identity_for_first_kind() {
        for n in 0..=30 {
            let t = cheb_first(n).unwrap();
            for theta in [0.1, 0.7, 1.3, 2.9] {
                let x = f64::cos(theta);
                // Horner error bound: a few ulps of sum |c_k| |x|^k
                let mass =
                    Polynomial::new(t.coeffs().iter().map(|c| c.abs()).collect()).eval(x.abs());
                let bound = 64.0 * f64::EPSILON * mass.max(1.0);
                assert!(
                    (t.eval(x) - (n as f64 * theta).cos()).abs() <= bound,
                    "n={n}"
                );
            }
        }
    }

    #[test]
    fn compose_scale_moves_interval() {
        let t3 = cheb_first(3).unwrap();
        let b = 1.7;
        let scaled = t3.compose_scale(1.0 / b);
        for x in [-1.7, -0.4, 0.9, 1.7] {
            assert!((scaled.eval(x) - t3.eval(x / b)).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn horner_agrees_with_power_sum(
            coeffs in prop::collection::vec(-10.0f64..10.0, 1..31),
            x in -10.0f64..10.0,
        ) {
            let p = Polynomial::new(coeffs.clone());
            let expected = naive(&coeffs, x);
            let scale: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (c * x.powi(i as i32)).abs())
                .sum();
            prop_assert!((p.eval(x) - expected).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn product_evaluates_pointwise(
            a in prop::collection::vec(-3.0f64..3.0, 1..8),
            b in prop::collection::vec(-3.0f64..3.0, 1..8),
            x in -2.0f64..2.0,
        ) {
            let (pa, pb) = (Polynomial::new(a), Polynomial::new(b));
            let prod = &pa * &pb;
            let expected = pa.eval(x) * pb.eval(x);
            prop_assert!((prod.eval(x) - expected).abs() <= 1e-9 * expected.abs().max(1.0));
        }
    }
}
