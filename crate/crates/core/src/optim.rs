//! Derivative-free helpers for the BLP search: a bounded Nelder-Mead
//! simplex and golden-section extremum refinement on a bracketing triple.

/// Result of a Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize `f` over a box with a standard Nelder-Mead simplex
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5).
/// Points are clamped to the bounds before evaluation, which is adequate
/// for the smooth periodic angle landscapes this is used on.
pub fn nelder_mead<F>(
    f: F,
    x0: &[f64],
    initial_step: &[f64],
    lower: &[f64],
    upper: &[f64],
    max_iters: usize,
    f_tol: f64,
) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    assert!(dim > 0 && initial_step.len() == dim && lower.len() == dim && upper.len() == dim);
    let clamp = |x: &mut Vec<f64>| {
        for k in 0..dim {
            x[k] = x[k].clamp(lower[k], upper[k]);
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let mut base = x0.to_vec();
    clamp(&mut base);
    let fb = f(&base);
    simplex.push((base.clone(), fb));
    for k in 0..dim {
        let mut v = base.clone();
        v[k] += initial_step[k];
        clamp(&mut v);
        let fv = f(&v);
        simplex.push((v, fv));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        if spread.abs() <= f_tol {
            converged = true;
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; dim];
        for (v, _) in simplex.iter().take(dim) {
            for k in 0..dim {
                centroid[k] += v[k] / dim as f64;
            }
        }
        let worst = simplex[dim].clone();

        let mut reflected: Vec<f64> = (0..dim)
            .map(|k| centroid[k] + (centroid[k] - worst.0[k]))
            .collect();
        clamp(&mut reflected);
        let fr = f(&reflected);

        if fr < simplex[0].1 {
            let mut expanded: Vec<f64> = (0..dim)
                .map(|k| centroid[k] + 2.0 * (centroid[k] - worst.0[k]))
                .collect();
            clamp(&mut expanded);
            let fe = f(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let mut contracted: Vec<f64> = (0..dim)
                .map(|k| centroid[k] + 0.5 * (worst.0[k] - centroid[k]))
                .collect();
            clamp(&mut contracted);
            let fc = f(&contracted);
            if fc < worst.1 {
                simplex[dim] = (contracted, fc);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for k in 0..dim {
                        entry.0[k] = best[k] + 0.5 * (entry.0[k] - best[k]);
                    }
                    clamp(&mut entry.0);
                    entry.1 = f(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexResult {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        iterations,
        converged,
    }
}

/// Golden-section search for the minimum of `f` on [a, b].
/// Returns (argmin, min value).
pub fn golden_min<F>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    (xm, f(xm))
}

/// Golden-section search for the maximum of `f` on [a, b].
pub fn golden_max<F>(f: F, a: f64, b: f64, iters: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (x, v) = golden_min(|t| -f(t), a, b, iters);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let r = nelder_mead(
            f,
            &[0.0, 0.0],
            &[0.5, 0.5],
            &[-10.0, -10.0],
            &[10.0, 10.0],
            500,
            1e-14,
        );
        assert!((r.x[0] - 1.5).abs() < 1e-6, "x0 = {}", r.x[0]);
        assert!((r.x[1] + 0.5).abs() < 1e-6, "x1 = {}", r.x[1]);
        assert!(r.converged);
    }

    #[test]
    fn nelder_mead_respects_bounds() {
        // unconstrained minimum at x = -2, box keeps it at 0
        let f = |x: &[f64]| (x[0] + 2.0).powi(2);
        let r = nelder_mead(f, &[1.0], &[0.3], &[0.0], &[5.0], 300, 1e-14);
        assert!(r.x[0].abs() < 1e-6);
    }

    #[test]
    fn golden_section_extrema() {
        // location accuracy is sqrt(eps)-limited for value comparisons;
        // the extremum VALUE is what the revival sums consume and is exact
        let (x, v) = golden_min(|t: f64| (t - 0.3).powi(2) + 1.0, 0.0, 1.0, 80);
        assert!((x - 0.3).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
        let (x, v) = golden_max(|t: f64| -(t - 0.7).powi(2) + 2.0, 0.0, 1.0, 80);
        assert!((x - 0.7).abs() < 1e-6 && (v - 2.0).abs() < 1e-12);
    }
}
