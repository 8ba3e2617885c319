//! Damped Newton iteration for small square systems with a finite-difference Jacobian.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SolError};

/// Stopping and damping parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the residual max-norm.
    pub tolerance: f64,
    /// Step halvings tried before the iteration is declared stalled.
    pub max_halvings: usize,
    /// Relative central-difference step.
    pub fd_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            tolerance: 1e-10,
            max_halvings: 30,
            fd_step: 1e-7,
        }
    }
}

/// Outcome of one iterative solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub residual: Vec<f64>,
    /// Max-norm of `residual`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the start that produced this report, when several were tried.
    pub start_index: usize,
}

impl SolveReport {
    fn failed(x0: &[f64], start_index: usize) -> Self {
        Self {
            solution: x0.to_vec(),
            residual: vec![f64::INFINITY; x0.len()],
            residual_norm: f64::INFINITY,
            iterations: 0,
            converged: false,
            start_index,
        }
    }
}

fn max_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn eval<const N: usize, F>(f: &F, x: &DVector<f64>) -> Option<DVector<f64>>
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let arr: [f64; N] = x.as_slice().try_into().ok()?;
    let r = f(&arr).ok()?;
    if r.iter().all(|v| v.is_finite()) {
        Some(DVector::from_row_slice(&r))
    } else {
        None
    }
}

fn jacobian<const N: usize, F>(
    f: &F,
    x: &DVector<f64>,
    r: &DVector<f64>,
    rel_step: f64,
) -> Option<DMatrix<f64>>
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let mut jac = DMatrix::<f64>::zeros(N, N);
    for j in 0..N {
        let h = rel_step * x[j].abs().max(1.0);
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        let col = match (eval(f, &xp), eval(f, &xm)) {
            (Some(fp), Some(fm)) => (fp - fm) / (2.0 * h),
            (Some(fp), None) => (fp - r) / h,
            (None, Some(fm)) => (r - &fm) / h,
            (None, None) => return None,
        };
        jac.set_column(j, &col);
    }
    Some(jac)
}

fn newton_step(jac: DMatrix<f64>, r: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(dx) = jac.clone().lu().solve(&(-r)) {
        if dx.iter().all(|v| v.is_finite()) {
            return Some(dx);
        }
    }
    // Rank-deficient Jacobian: least-squares step.
    let dx = jac.svd(true, true).solve(&(-r), 1e-14).ok()?;
    dx.iter().all(|v| v.is_finite()).then_some(dx)
}

/// Solves `f(x) = 0` from `x0` by Newton steps halved until the residual 2-norm decreases.
pub fn damped_newton<const N: usize, F>(f: F, x0: [f64; N], opts: &NewtonOptions) -> SolveReport
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let mut x = DVector::from_row_slice(&x0);
    let Some(mut r) = eval(&f, &x) else {
        return SolveReport::failed(&x0, 0);
    };
    let mut iterations = 0;
    while iterations < opts.max_iterations && max_norm(&r) > opts.tolerance {
        let Some(jac) = jacobian(&f, &x, &r, opts.fd_step) else {
            break;
        };
        let Some(dx) = newton_step(jac, &r) else {
            break;
        };
        iterations += 1;
        let merit = r.norm();
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let xn = &x + &dx * lambda;
            if let Some(rn) = eval(&f, &xn) {
                if rn.norm() < merit {
                    accepted = Some((xn, rn));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((xn, rn)) => {
                x = xn;
                r = rn;
            }
            None => break,
        }
    }
    let residual_norm = max_norm(&r);
    SolveReport {
        solution: x.iter().copied().collect(),
        residual: r.iter().copied().collect(),
        residual_norm,
        iterations,
        converged: residual_norm <= opts.tolerance,
        start_index: 0,
    }
}

/// Ratio of the smallest to the largest singular value of the finite-difference
/// Jacobian of `f` at `x`; 0 when it cannot be evaluated.
pub fn jacobian_conditioning<const N: usize, F>(f: F, x: [f64; N], fd_step: f64) -> f64
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let x = DVector::from_row_slice(&x);
    let Some(r) = eval(&f, &x) else {
        return 0.0;
    };
    let Some(jac) = jacobian(&f, &x, &r, fd_step) else {
        return 0.0;
    };
    let sv = jac.singular_values();
    let (lo, hi) = (sv.min(), sv.max());
    if hi > 0.0 {
        lo / hi
    } else {
        0.0
    }
}

/// Runs [`damped_newton`] from every start (in parallel) and keeps the converged
/// report with the lowest residual; ties go to the earliest start.
pub fn best_of_starts<const N: usize, F>(
    f: &F,
    starts: &[[f64; N]],
    opts: &NewtonOptions,
) -> Result<SolveReport>
where
    F: Fn(&[f64; N]) -> Result<[f64; N]> + Sync,
{
    let reports: Vec<SolveReport> = starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| SolveReport {
            start_index: i,
            ..damped_newton(f, *s, opts)
        })
        .collect();
    pick_best(reports, starts)
}

/// Tries the starts in order and returns the first converged report.
pub fn first_of_starts<const N: usize, F>(
    f: &F,
    starts: &[[f64; N]],
    opts: &NewtonOptions,
) -> Result<SolveReport>
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let mut best: Option<SolveReport> = None;
    for (i, s) in starts.iter().enumerate() {
        let rep = SolveReport {
            start_index: i,
            ..damped_newton(f, *s, opts)
        };
        if rep.converged {
            return Ok(rep);
        }
        if best
            .as_ref()
            .is_none_or(|b| rep.residual_norm < b.residual_norm)
        {
            best = Some(rep);
        }
    }
    Err(no_convergence(best.as_ref(), starts))
}

fn pick_best<const N: usize>(
    reports: Vec<SolveReport>,
    starts: &[[f64; N]],
) -> Result<SolveReport> {
    let mut best: Option<&SolveReport> = None;
    let mut best_failed: Option<&SolveReport> = None;
    for rep in &reports {
        let slot = if rep.converged {
            &mut best
        } else {
            &mut best_failed
        };
        if slot.is_none_or(|b| rep.residual_norm < b.residual_norm) {
            *slot = Some(rep);
        }
    }
    match best {
        Some(b) => Ok(b.clone()),
        None => Err(no_convergence(best_failed, starts)),
    }
}

fn no_convergence<const N: usize>(best: Option<&SolveReport>, starts: &[[f64; N]]) -> SolError {
    SolError::NoConvergence {
        attempts: starts.len(),
        best_residual: best.map_or(f64::INFINITY, |b| b.residual_norm),
        starts: starts.iter().map(|s| s.to_vec()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_circle_line_intersection() {
        let f = |x: &[f64; 2]| Ok([x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1]]);
        let rep = damped_newton(f, [1.0, 0.5], &NewtonOptions::default());
        assert!(rep.converged);
        let r = 2f64.sqrt();
        assert!((rep.solution[0] - r).abs() < 1e-10 && (rep.solution[1] - r).abs() < 1e-10);
        assert!(rep.iterations < 10);
    }

    #[test]
    fn damping_rescues_overshoot() {
        // Plain Newton on atan diverges from |x0| > 1.39.
        let f = |x: &[f64; 1]| Ok([x[0].atan()]);
        let rep = damped_newton(f, [3.0], &NewtonOptions::default());
        assert!(rep.converged, "{rep:?}");
        assert!(rep.solution[0].abs() < 1e-10);
    }

    #[test]
    fn reports_failure_without_root() {
        let f = |x: &[f64; 1]| Ok([x[0] * x[0] + 1.0]);
        let rep = damped_newton(f, [0.3], &NewtonOptions::default());
        assert!(!rep.converged);
        let err = first_of_starts(&f, &[[0.3], [2.0]], &NewtonOptions::default()).unwrap_err();
        assert!(matches!(err, SolError::NoConvergence { attempts: 2, .. }));
    }

    #[test]
    fn evaluation_errors_count_as_rejected_steps() {
        let f = |x: &[f64; 1]| {
            if x[0] < 0.0 {
                Err(SolError::Domain("negative".into()))
            } else {
                Ok([x[0] - 0.5])
            }
        };
        let rep = damped_newton(f, [0.0], &NewtonOptions::default());
        assert!(rep.converged);
    }

    #[test]
    fn best_of_prefers_lowest_residual_then_order() {
        let f = |x: &[f64; 1]| Ok([(x[0] - 1.0) * (x[0] + 1.0)]);
        let starts = [[5.0], [-5.0], [0.9]];
        let rep = best_of_starts(&f, &starts, &NewtonOptions::default()).unwrap();
        assert!(rep.converged);
        let again = best_of_starts(&f, &starts, &NewtonOptions::default()).unwrap();
        assert_eq!(rep, again);
    }
}
