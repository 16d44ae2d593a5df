//! Damped Gauss–Newton for small polynomial systems.

use super::linalg::least_squares;

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOptions {
    pub starts: usize,
    pub max_iter: usize,
    /// Step shrink factor applied while the residual increases.
    pub damping: f64,
    /// Convergence threshold on the ∞-norm of the residual.
    pub tol: f64,
    pub seed: u64,
    /// Range for random start coordinates.
    pub start_range: (f64, f64),
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            starts: 16,
            max_iter: 100,
            damping: 0.5,
            tol: 1e-10,
            seed: 0,
            start_range: (0.0, 2.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Converged(Vec<f64>),
    /// The Jacobian vanished before the residual did.
    Singular,
    Failed,
}

const MAX_HALVINGS: usize = 40;
const POLISH_STEPS: usize = 4;

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Minimises `‖f(x)‖` from `x0` using minimum-norm Gauss–Newton steps, so
/// under- and over-determined systems are both accepted. After reaching
/// `tol`, a few extra steps are taken while they still reduce the residual.
pub fn gauss_newton(
    x0: Vec<f64>,
    f: impl Fn(&[f64]) -> Vec<f64>,
    jac: impl Fn(&[f64]) -> Vec<Vec<f64>>,
    opts: &NewtonOptions,
) -> Outcome {
    let n = x0.len();
    let mut x = x0;
    let mut fx = f(&x);
    if fx.iter().any(|v| !v.is_finite()) {
        return Outcome::Failed;
    }
    let mut polish = 0;
    for _ in 0..opts.max_iter {
        let converged = inf_norm(&fx) <= opts.tol;
        if converged {
            if polish == POLISH_STEPS || fx.iter().all(|v| *v == 0.0) {
                break;
            }
            polish += 1;
        }
        let j = jac(&x);
        let rhs: Vec<f64> = fx.iter().map(|v| -v).collect();
        let step = least_squares(&j, n, &rhs);
        if step.iter().all(|s| *s == 0.0) {
            if converged {
                break;
            }
            return Outcome::Singular;
        }
        let current = sq_norm(&fx);
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + alpha * s).collect();
            let ft = f(&trial);
            if ft.iter().all(|v| v.is_finite()) && sq_norm(&ft) < current {
                accepted = Some((trial, ft));
                break;
            }
            if converged {
                break;
            }
            alpha *= opts.damping;
        }
        match accepted {
            Some((xt, ft)) => {
                x = xt;
                fx = ft;
            }
            None if converged => break,
            None => return Outcome::Failed,
        }
    }
    if inf_norm(&fx) <= opts.tol {
        Outcome::Converged(x)
    } else {
        Outcome::Failed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_square_root() {
        let out = gauss_newton(
            vec![1.0],
            |x| vec![x[0] * x[0] - 2.0],
            |x| vec![vec![2.0 * x[0]]],
            &NewtonOptions::default(),
        );
        match out {
            Outcome::Converged(x) => assert!((x[0] - 2f64.sqrt()).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reports_singular_jacobian() {
        let out = gauss_newton(
            vec![0.0],
            |x| vec![x[0] * x[0] + 1.0],
            |x| vec![vec![2.0 * x[0]]],
            &NewtonOptions::default(),
        );
        assert_eq!(out, Outcome::Singular);
    }

    #[test]
    fn fails_without_root() {
        let out = gauss_newton(
            vec![2.0],
            |x| vec![x[0] * x[0] + 1.0],
            |x| vec![vec![2.0 * x[0]]],
            &NewtonOptions::default(),
        );
        assert!(!matches!(out, Outcome::Converged(_)));
    }

    #[test]
    fn underdetermined_lands_on_the_solution_set() {
        let out = gauss_newton(
            vec![3.0, -1.0],
            |x| vec![x[0] * x[1] - 1.0],
            |x| vec![vec![x[1], x[0]]],
            &NewtonOptions::default(),
        );
        let Outcome::Converged(x) = out else { panic!() };
        assert!((x[0] * x[1] - 1.0).abs() < 1e-10);
    }
}
