//! Canonical moments of probability measures on `[-b, b]`.
//!
//! A measure is parametrized by its canonical moments `p_1, p_2, ...` in
//! `[0, 1]`. The derived sequence `zeta_1 = p_1`, `zeta_j = (1 - p_{j-1}) p_j`
//! drives the three-term recurrence of the monic orthogonal polynomials
//!
//! ```text
//! P_0 = 1,  P_1 = x + b (1 - 2 zeta_1),
//! P_{j+1} = (x + b (1 - 2 zeta_{2j} - 2 zeta_{2j+1})) P_j - (2b)^2 zeta_{2j-1} zeta_{2j} P_{j-1},
//! ```
//!
//! and their squared norms `k_j = (2b)^{2j} prod_{i<=j} zeta_{2i-1} zeta_{2i}`.
//! When a canonical moment hits 0 or 1 the sequence terminates, every later
//! `zeta` is zero, and the measure has finite support, recovered here from
//! the Jacobi matrix of the recurrence.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::poly::Polynomial;

/// Largest Jacobi matrix handled by [`support_measure`].
pub const MAX_SUPPORT: usize = 31;

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalMomentSeq {
    b: f64,
    p: Vec<f64>,
}

impl CanonicalMomentSeq {
    /// Builds a sequence after checking that every entry lies in `[0, 1]` and
    /// that only the last entry may be 0 or 1.
    pub fn new(b: f64, p: Vec<f64>) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return invalid(format!("half-width b must be positive, got {b}"));
        }
        for (i, &pk) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&pk) {
                return invalid(format!(
                    "canonical moment p_{} = {pk} outside [0, 1]",
                    i + 1
                ));
            }
            if (pk == 0.0 || pk == 1.0) && i + 1 != p.len() {
                return invalid(format!(
                    "p_{} = {pk} terminates the sequence but is followed by more entries",
                    i + 1
                ));
            }
        }
        Ok(Self { b, p })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// True when the last entry is 0 or 1.
    pub fn terminating(&self) -> bool {
        matches!(self.p.last(), Some(&x) if x == 0.0 || x == 1.0)
    }

    /// `p_j` (1-based).
    pub fn get(&self, j: usize) -> Option<f64> {
        j.checked_sub(1).and_then(|i| self.p.get(i).copied())
    }

    pub fn zetas(&self) -> ZetaSeq {
        zetas(self)
    }

    /// `zeta_j` (1-based), zero past a terminating entry.
    fn zeta_at(&self, j: usize) -> Result<f64> {
        debug_assert!(j >= 1);
        match self.get(j) {
            Some(pj) if j == 1 => Ok(pj),
            Some(pj) => Ok((1.0 - self.p[j - 2]) * pj),
            None if self.terminating() => Ok(0.0),
            None => Err(Error::InsufficientData {
                needed: j,
                available: self.p.len(),
            }),
        }
    }

    /// Diagonal entry `a_j` of the Jacobi matrix: `P_{j+1} = (x - a_j) P_j - ...`.
    fn recurrence_shift(&self, j: usize) -> Result<f64> {
        let b = self.b;
        if j == 0 {
            Ok(b * (2.0 * self.zeta_at(1)? - 1.0))
        } else {
            Ok(b * (2.0 * self.zeta_at(2 * j)? + 2.0 * self.zeta_at(2 * j + 1)? - 1.0))
        }
    }

    /// Squared off-diagonal entry `(2b)^2 zeta_{2j-1} zeta_{2j}`, `j >= 1`.
    fn recurrence_weight(&self, j: usize) -> Result<f64> {
        let two_b = 2.0 * self.b;
        Ok(two_b * two_b * self.zeta_at(2 * j - 1)? * self.zeta_at(2 * j)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaSeq {
    pub zeta: Vec<f64>,
}

/// A finitely supported probability measure.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Raw moment `int x^k d xi`.
    pub fn moment(&self, k: usize) -> f64 {
        self.integrate(|x| x.powi(k as i32))
    }
}

/// `zeta_1 = p_1`, `zeta_j = (1 - p_{j-1}) p_j`.
pub fn zetas(cm: &CanonicalMomentSeq) -> ZetaSeq {
    let zeta =
        cm.p.iter()
            .enumerate()
            .map(|(i, &pj)| if i == 0 { pj } else { (1.0 - cm.p[i - 1]) * pj })
            .collect();
    ZetaSeq { zeta }
}

/// Monic orthogonal polynomials `P_0, ..., P_n` of the measure.
pub fn monic_orthopolys(cm: &CanonicalMomentSeq, n: usize) -> Result<Vec<Polynomial>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Polynomial::constant(1.0));
    if n == 0 {
        return Ok(out);
    }
    out.push(Polynomial::linear(-cm.recurrence_shift(0)?));
    for j in 1..n {
        let step = Polynomial::linear(-cm.recurrence_shift(j)?);
        let next = &(&step * &out[j]) - &out[j - 1].scale(cm.recurrence_weight(j)?);
        out.push(next);
    }
    Ok(out)
}

/// Squared norms `k_1, ..., k_n` of the monic orthogonal polynomials.
pub fn l2_norms(cm: &CanonicalMomentSeq, n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n);
    let mut k = 1.0;
    for j in 1..=n {
        k *= cm.recurrence_weight(j)?;
        out.push(k);
    }
    Ok(out)
}

/// Diagonal and off-diagonal of the `m x m` Jacobi matrix.
pub fn jacobi_matrix(cm: &CanonicalMomentSeq, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let diag = (0..m)
        .map(|j| cm.recurrence_shift(j))
        .collect::<Result<Vec<_>>>()?;
    let off = (1..m)
        .map(|j| cm.recurrence_weight(j).map(f64::sqrt))
        .collect::<Result<Vec<_>>>()?;
    Ok((diag, off))
}

/// Number of support points of the measure of a terminating sequence.
fn support_size(cm: &CanonicalMomentSeq) -> usize {
    // The first vanishing zeta has index L (p_L = 0) or L + 1 (p_L = 1).
    let first_zero = (1..=cm.len() + 1)
        .find(|&j| cm.zeta_at(j).map(|z| z == 0.0).unwrap_or(true))
        .unwrap_or(cm.len() + 1);
    first_zero.div_ceil(2)
}

/// Support points and weights of the finitely supported measure with the
/// given terminating canonical moments (Golub-Welsch).
pub fn support_measure(cm: &CanonicalMomentSeq) -> Result<DiscreteMeasure> {
    if !cm.terminating() {
        return invalid("support recovery needs a terminating canonical moment sequence");
    }
    let m = support_size(cm);
    if m > MAX_SUPPORT {
        return invalid(format!("support of {m} points exceeds {MAX_SUPPORT}"));
    }
    let (diag, off) = jacobi_matrix(cm, m)?;
    let mut jm = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    for (i, &o) in off.iter().enumerate() {
        jm[(i, i + 1)] = o;
        jm[(i + 1, i)] = o;
    }
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v = eig.eigenvectors.column(i);
            let w = v[0] * v[0] / v.norm_squared();
            (eig.eigenvalues[i], w)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    Ok(DiscreteMeasure {
        points: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    })
}

/// Largest violation of discrete orthogonality of `P_0, ..., P_n` under the
/// recovered support measure: `|<P_i, P_j> - delta_ij k_i| / max(k_i, k_j)`.
///
/// `n` must be below the support size, so that every `k_i` is positive.
pub fn orthogonality_residual(cm: &CanonicalMomentSeq, n: usize) -> Result<f64> {
    let mu = support_measure(cm)?;
    if n >= mu.points.len() {
        return invalid(format!(
            "degree {n} needs more than {} support points",
            mu.points.len()
        ));
    }
    let polys = monic_orthopolys(cm, n)?;
    let norms = l2_norms(cm, n)?;
    let k = |i: usize| if i == 0 { 1.0 } else { norms[i - 1] };
    let values: Vec<Vec<f64>> = polys
        .iter()
        .map(|p| mu.points.iter().map(|&x| p.eval(x)).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=i {
            let ip: f64 = mu
                .weights
                .iter()
                .zip(values[i].iter().zip(&values[j]))
                .map(|(w, (a, b))| w * a * b)
                .sum();
            let target = if i == j { k(i) } else { 0.0 };
            worst = worst.max((ip - target).abs() / k(i).max(k(j)));
        }
    }
    Ok(worst)
}
