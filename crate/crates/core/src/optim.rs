//! Derivative-free compass search shared by the bound minimizer and the
//! measurement optimizer.

/// Coordinate pattern search with halving steps. Returns (best value,
/// evaluations used, converged), where convergence means the step shrank to
/// `step_floor` within the evaluation budget.
pub(crate) fn compass_search(
    f: &(impl Fn(&[f64]) -> f64 + Sync),
    x: &mut [f64],
    budget: usize,
    step_floor: f64,
) -> (f64, usize, bool) {
    let n = x.len();
    let mut fx = f(x);
    let mut evals = 1usize;
    let mut step = 0.5f64;
    while step > step_floor {
        if evals + 2 * n > budget {
            return (fx, evals, false);
        }
        let mut improved = false;
        for i in 0..n {
            for sgn in [1.0f64, -1.0] {
                let old = x[i];
                x[i] = old + sgn * step;
                let fy = f(x);
                evals += 1;
                if fy < fx - 1e-15 {
                    fx = fy;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (fx, evals, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + (x[1] + 0.5).powi(2) + 3.0;
        let mut x = vec![0.0, 0.0];
        let (v, _, converged) = compass_search(&f, &mut x, 100_000, 1e-7);
        assert!(converged);
        assert!((v - 3.0).abs() < 1e-10);
        assert!((x[0] - 1.5).abs() < 1e-5 && (x[1] + 0.5).abs() < 1e-5);
    }

    #[test]
    fn reports_budget_exhaustion() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let mut x = vec![5.0; 4];
        let (_, evals, converged) = compass_search(&f, &mut x, 20, 1e-9);
        assert!(!converged);
        assert!(evals <= 20);
    }
}
