//! Adaptive Nelder-Mead simplex search (Gao-Han parameters).

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub step: f64,
    /// Stop when the spread of simplex values drops below this.
    pub ftol: f64,
    /// Stop when the simplex diameter drops below this.
    pub xtol: f64,
    pub max_evaluations: usize,
}

/// Minimizes `f` starting from `x0`.
pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: SimplexOptions,
) -> Minimum {
    let dim = x0.len();
    let d = dim as f64;
    let (reflect, expand, contract, shrink) = if dim >= 2 {
        (1.0, 1.0 + 2.0 / d, 0.75 - 1.0 / (2.0 * d), 1.0 - 1.0 / d)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(x0, &mut evaluations);
    simplex.push((x0.to_vec(), v0));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let v = eval(&x, &mut evaluations);
        simplex.push((x, v));
    }

    let mut centroid = vec![0.0; dim];
    let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(ci, wi)| ci + t * (wi - ci)).collect()
    };

    while evaluations < opts.max_evaluations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (worst - best).abs() <= opts.ftol * best.abs().max(1e-300) && diameter <= opts.xtol {
            break;
        }
        if diameter <= opts.xtol * 1e-3 {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / d;
            }
        }

        let xr = point(&centroid, &simplex[dim].0, -reflect);
        let fr = eval(&xr, &mut evaluations);
        if fr < simplex[0].1 {
            let xe = point(&centroid, &simplex[dim].0, -reflect * expand);
            let fe = eval(&xe, &mut evaluations);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[dim].1 {
                let xc = point(&centroid, &xr, contract);
                let fc = eval(&xc, &mut evaluations);
                (xc, fc)
            } else {
                let xc = point(&centroid, &simplex[dim].0, contract);
                let fc = eval(&xc, &mut evaluations);
                (xc, fc)
            };
            if fc < fr.min(simplex[dim].1) {
                simplex[dim] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    *x = point(&x_best, x, shrink);
                    *v = eval(x, &mut evaluations);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        evaluations,
    }
}
