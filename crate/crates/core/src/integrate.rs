//! Composite trapezoid rule with step halving.

use crate::error::{Error, Result};

/// Stopping policy for [`trapezoid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Intervals on the first pass.
    pub initial_intervals: usize,
    /// Stop once `|I_k − I_{k−1}| ≤ rel_tol·|I_k| + abs_tol`.
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Halvings performed before the tolerance is consulted.
    pub min_levels: u32,
    pub max_levels: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            initial_intervals: 64,
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            min_levels: 4,
            max_levels: 18,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub intervals: usize,
    /// Relative change produced by the last halving.
    pub last_change: f64,
}

/// Integrates `f` over `[a, b]`, halving the step until the policy is met.
///
/// Each halving reuses the previous nodes, so only new midpoints are
/// evaluated.
pub fn trapezoid<F>(mut f: F, a: f64, b: f64, policy: &Quadrature) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(b > a) || policy.initial_intervals == 0 {
        return Err(Error::Numerical(format!("bad integration range [{a}, {b}]")));
    }
    let mut n = policy.initial_intervals;
    let mut h = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a)? + f(b)?);
    for k in 1..n {
        sum += f(a + k as f64 * h)?;
    }
    let mut value = sum * h;
    let mut last_change = f64::INFINITY;
    for level in 1..=policy.max_levels {
        for k in 0..n {
            sum += f(a + (k as f64 + 0.5) * h)?;
        }
        n *= 2;
        h *= 0.5;
        let next = sum * h;
        let change = (next - value).abs();
        last_change = if next != 0.0 { change / next.abs() } else { change };
        value = next;
        if level >= policy.min_levels && change <= policy.rel_tol * next.abs() + policy.abs_tol {
            return Ok(Integral {
                value,
                intervals: n,
                last_change,
            });
        }
    }
    Err(Error::Numerical(format!(
        "trapezoid rule did not converge after {n} intervals (last relative change {last_change:e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentzian_integral() {
        let out = trapezoid(|x| Ok(1.0 / (1.0 + x * x)), -50.0, 50.0, &Quadrature::default()).unwrap();
        let exact = 2.0 * 50f64.atan();
        assert!((out.value - exact).abs() / exact < 1e-6);
    }

    #[test]
    fn zero_integrand_stops() {
        let out = trapezoid(|_| Ok(0.0), 0.0, 1.0, &Quadrature::default()).unwrap();
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn bad_range() {
        assert!(trapezoid(|_| Ok(1.0), 1.0, 1.0, &Quadrature::default()).is_err());
    }
}
