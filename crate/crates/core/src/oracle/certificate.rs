//! Duality certificate built from moment matrices of the dual measure.
//!
//! For `j` in the index set let `M_j` be the Hankel moment matrix of the dual
//! measure up to order `2j`, `e_j` the last unit vector, and
//! `N_j = alpha_j a_j a_j'` with `a_j = sqrt(k_j) M_j^{-1} e_j`. Optimality of
//! the pair (polynomial family, measure) is equivalent to
//!
//! ```text
//! sum_j trace(M_j N_j) = 1
//! M_j N_j = e_j e_j' N_j / (e_j' M_j^{-1} e_j)
//! min_j (e_j' M_j^{-1} e_j)^{-1} sum_j e_j' N_j e_j = sum_j e_j' N_j e_j / (e_j' M_j^{-1} e_j) = 1
//! ```
//!
//! together with `k_j = 1 / (e_j' M_j^{-1} e_j)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::canonical::{l2_norms, support_measure, DiscreteMeasure};
use crate::error::{invalid, Result};
use crate::solver::{ExtremalSolution, ProblemSpec};

/// Hankel moment matrices `M_j = int f_j f_j' d xi`, `f_j = (1, x, ..., x^j)'`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrixSet {
    pub matrices: BTreeMap<usize, DMatrix<f64>>,
    measure: DiscreteMeasure,
    /// Column scale: powers of `x / scale` keep the factorization balanced.
    scale: f64,
}

impl MomentMatrixSet {
    pub fn new(measure: &DiscreteMeasure, indices: &[usize]) -> Self {
        let top = indices.iter().copied().max().unwrap_or(0);
        let moments: Vec<f64> = (0..=2 * top).map(|k| measure.moment(k)).collect();
        let matrices = indices
            .iter()
            .map(|&j| (j, DMatrix::from_fn(j + 1, j + 1, |r, s| moments[r + s])))
            .collect();
        let scale = measure.points.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
        Self {
            matrices,
            measure: measure.clone(),
            scale: if scale > 0.0 { scale } else { 1.0 },
        }
    }

    /// `M_j^{-1}`, or `None` when `M_j` is singular.
    ///
    /// With `V` the Vandermonde matrix of the support points in powers of
    /// `x / scale` and `W` the weights, `M_j = D (V'WV) D` for
    /// `D = diag(scale^r)`. The `R` factor of a QR decomposition of
    /// `W^{1/2} V` is the Cholesky factor of `V'WV`, obtained without
    /// squaring the condition number.
    pub fn inverse(&self, j: usize) -> Option<DMatrix<f64>> {
        let pts = &self.measure.points;
        if pts.len() < j + 1 {
            return None;
        }
        let a = DMatrix::from_fn(pts.len(), j + 1, |s, r| {
            self.measure.weights[s].sqrt() * (pts[s] / self.scale).powi(r as i32)
        });
        let r = a.qr().r();
        let largest = r.diagonal().iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        if r.diagonal().iter().any(|v| v.abs() <= 1e-14 * largest) {
            return None;
        }
        let r_inv = r.solve_upper_triangular(&DMatrix::identity(j + 1, j + 1))?;
        let inner = &r_inv * r_inv.transpose();
        let d = |k: usize| self.scale.powi(-(k as i32));
        Some(DMatrix::from_fn(j + 1, j + 1, |p, q| {
            d(p) * inner[(p, q)] * d(q)
        }))
    }
}

/// Residuals of the certificate conditions. All are `INFINITY` when some
/// moment matrix cannot be inverted; `singular_index` then names it.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    /// `|sum_j trace(M_j N_j) - 1|`.
    pub trace_residual: f64,
    /// Largest relative Frobenius residual of the matrix equation, over `j`.
    pub matrix_residual: f64,
    /// Largest deviation from 1 of the two sides of the min-equality.
    pub min_residual: f64,
    /// `max_j |k_j e_j' M_j^{-1} e_j - 1|`.
    pub identity_residual: f64,
    pub singular_index: Option<usize>,
}

impl CertificateReport {
    pub fn holds(&self, tol: f64, identity_tol: f64) -> bool {
        self.singular_index.is_none()
            && self.trace_residual <= tol
            && self.matrix_residual <= tol
            && self.min_residual <= tol
            && self.identity_residual <= identity_tol
    }

    fn singular(j: usize) -> Self {
        Self {
            trace_residual: f64::INFINITY,
            matrix_residual: f64::INFINITY,
            min_residual: f64::INFINITY,
            identity_residual: f64::INFINITY,
            singular_index: Some(j),
        }
    }
}

pub fn duality_certificate(
    sol: &ExtremalSolution,
    spec: &ProblemSpec,
) -> Result<CertificateReport> {
    let Some(cm) = &sol.dual_moments else {
        return invalid("the certificate needs the dual canonical moments");
    };
    if !cm.terminating() {
        return invalid("the dual canonical moments must terminate");
    }
    let measure = support_measure(cm)?;
    let norms = l2_norms(cm, spec.n())?;
    let set = MomentMatrixSet::new(&measure, spec.indices());

    let mut trace_sum = 0.0;
    let mut matrix_residual: f64 = 0.0;
    let mut identity_residual: f64 = 0.0;
    let mut n_diag = Vec::new();
    for (&j, m) in &set.matrices {
        let Some(inv) = set.inverse(j) else {
            return Ok(CertificateReport::singular(j));
        };
        let k = norms[j - 1];
        let alpha = sol.alphas.get(&j).copied().unwrap_or(0.0);
        let e_inv_e = inv[(j, j)];
        let a = inv.column(j) * k.sqrt();
        let n_mat = &a * a.transpose() * alpha;

        let mn = m * &n_mat;
        trace_sum += mn.trace();

        let mut rhs = DMatrix::zeros(j + 1, j + 1);
        rhs.row_mut(j).copy_from(&(n_mat.row(j) / e_inv_e));
        let size = mn.norm();
        if size > 0.0 {
            matrix_residual = matrix_residual.max((&mn - rhs).norm() / size);
        }

        identity_residual = identity_residual.max((k * e_inv_e - 1.0).abs());
        n_diag.push((n_mat[(j, j)], e_inv_e));
    }

    let min_k = n_diag
        .iter()
        .map(|&(_, e)| 1.0 / e)
        .fold(f64::INFINITY, f64::min);
    let total: f64 = n_diag.iter().map(|&(nj, _)| nj).sum();
    let weighted: f64 = n_diag.iter().map(|&(nj, e)| nj / e).sum();
    let min_residual = (min_k * total - 1.0).abs().max((weighted - 1.0).abs());

    Ok(CertificateReport {
        trace_residual: (trace_sum - 1.0).abs(),
        matrix_residual,
        min_residual,
        identity_residual,
        singular_index: None,
    })
}
