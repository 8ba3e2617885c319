//! Globally adaptive Gauss–Kronrod (7/15 point) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Result, SolError};

/// Kronrod abscissae on `[0, 1]`, descending; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for `XGK[1]`, `XGK[3]`, `XGK[5]`, `XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value of an integral with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and work limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_intervals: 4000,
        }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    Piece {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest error
/// until the total error is below `max(abs_tol, rel_tol·|value|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(SolError::Domain(format!(
            "integration bounds {a}, {b} must be finite"
        )));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b);
    if !(first.value.is_finite() && first.error.is_finite()) {
        return Err(SolError::Domain("integrand is not finite".into()));
    }
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    let mut evaluations = 15;
    while error > opts.abs_tol.max(opts.rel_tol * value.abs()) {
        if heap.len() >= opts.max_intervals {
            return Err(SolError::NoConvergence {
                attempts: heap.len(),
                best_residual: error,
                starts: vec![vec![a, b]],
            });
        }
        let Some(worst) = heap.pop() else { break };
        let m = 0.5 * (worst.a + worst.b);
        let (l, r) = (gk15(&f, worst.a, m), gk15(&f, m, worst.b));
        evaluations += 30;
        value += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        if !(value.is_finite() && error.is_finite()) {
            return Err(SolError::Domain("integrand is not finite".into()));
        }
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(Quadrature {
        value,
        error,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(
            |x| x.powi(20) - 3.0 * x.powi(7),
            -1.0,
            2.0,
            &QuadOptions::default(),
        )
        .unwrap();
        let exact = (2f64.powi(21) + 1.0) / 21.0 - 3.0 * (2f64.powi(8) - 1.0) / 8.0;
        assert!((q.value - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn oscillatory_and_peaked() {
        let q = integrate(
            |x: f64| (20.0 * x).sin().powi(2),
            0.0,
            PI,
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((q.value - PI / 2.0).abs() < 1e-10);
        let q = integrate(
            |x: f64| 1.0 / (1e-4 + x * x),
            -1.0,
            1.0,
            &QuadOptions::default(),
        )
        .unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((q.value - exact).abs() < 1e-9 * exact);
        assert!(q.error <= 1e-10 * exact);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(
            integrate(|x| x, 1.0, 1.0, &QuadOptions::default())
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn work_limit_reports_failure() {
        let opts = QuadOptions {
            max_intervals: 4,
            rel_tol: 1e-14,
            ..QuadOptions::default()
        };
        let err = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, &opts).unwrap_err();
        assert!(matches!(err, SolError::NoConvergence { .. }));
        let err = integrate(|x: f64| x.abs().sqrt().recip(), -1.0, 1.0, &opts).unwrap_err();
        assert!(matches!(err, SolError::Domain(_)));
    }
}
