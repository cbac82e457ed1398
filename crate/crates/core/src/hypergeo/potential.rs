//! The potential `V(z) = -Li₂(z) + Li₂(1/z)` and its critical points.
//!
//! `dV/dz = (log(1-z) + log(1-1/z)) / z` vanishes where `(1-z)(1-1/z) = 1`,
//! i.e. on `z² - z + 1 = 0`, at `exp(±πi/3)`. The state sum of the
//! figure-eight grows like `exp(N·V(z₀)/(2πi))`, so the root with the larger
//! `Re(V/(2πi))` controls growth.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hypergeo::dilog::dilog;
use crate::ComplexValue;

fn check_domain(z: Complex64) -> Result<()> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("potential undefined at {z}")));
    }
    Ok(())
}

pub fn potential(z: Complex64) -> Result<Complex64> {
    check_domain(z)?;
    Ok(-dilog(z) + dilog(z.inv()))
}

pub fn potential_derivative(z: Complex64) -> Result<Complex64> {
    check_domain(z)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(((one - z).ln() + (one - z.inv()).ln()) / z)
}

fn potential_second_derivative(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let logs = (one - z).ln() + (one - z.inv()).ln();
    let dlogs = -(one - z).inv() + (z * (z - one)).inv();
    dlogs / z - logs / (z * z)
}

/// `V(z) / (2πi)`.
pub fn growth_rate(z: Complex64) -> Result<Complex64> {
    Ok(potential(z)? / Complex64::new(0.0, 2.0 * PI))
}

/// The two roots `(1 ± i√3)/2` of `z² - z + 1`, upper one first.
pub fn saddle_roots() -> [Complex64; 2] {
    let h = 3f64.sqrt() / 2.0;
    [Complex64::new(0.5, h), Complex64::new(0.5, -h)]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaddleSolution {
    pub z: ComplexValue,
    pub iterations: usize,
    /// `|dV/dz|` at the returned point.
    pub residual: f64,
    /// `|z² - z + 1|` at the returned point.
    pub quadratic_residual: f64,
}

/// Damped Newton iteration on `dV/dz` from `initial`.
pub fn saddle_solve(initial: Complex64, tol: f64, max_iter: usize) -> Result<SaddleSolution> {
    let mut z = initial;
    let mut f = potential_derivative(z)?;
    let mut trace = Vec::new();
    for it in 0..=max_iter {
        trace.push(format!("iter {it}: z = {z}, |dV/dz| = {:e}", f.norm()));
        if f.norm() < tol {
            let one = Complex64::new(1.0, 0.0);
            return Ok(SaddleSolution {
                z: z.into(),
                iterations: it,
                residual: f.norm(),
                quadratic_residual: (z * z - z + one).norm(),
            });
        }
        if it == max_iter {
            break;
        }
        let step = f / potential_second_derivative(z);
        let mut t = 1.0;
        loop {
            let cand = z - step * t;
            if let Ok(fc) = potential_derivative(cand) {
                if fc.norm() < f.norm() {
                    z = cand;
                    f = fc;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-10 {
                return Err(Error::NonConvergence {
                    iterations: it,
                    residual: f.norm(),
                    trace,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: f.norm(),
        trace,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GrowthSaddle {
    pub z: ComplexValue,
    /// `Re(V(z)/(2πi))`.
    pub rate: f64,
}

/// The root of `z² - z + 1` that maximizes `Re(V/(2πi))`.
pub fn growth_saddle() -> GrowthSaddle {
    saddle_roots()
        .into_iter()
        .map(|z| GrowthSaddle {
            z: z.into(),
            rate: growth_rate(z).expect("roots avoid 0 and 1").re,
        })
        .max_by(|a, b| a.rate.total_cmp(&b.rate))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::dilog::bloch_wigner;
    use rand::{Rng, SeedableRng};

    #[test]
    fn value_at_lower_root() {
        let z = saddle_roots()[1];
        let v = potential(z).unwrap();
        let d = bloch_wigner(Complex64::from_polar(1.0, PI / 3.0)).unwrap();
        assert!((v - Complex64::new(0.0, 2.0 * d)).norm() < 1e-13);
        assert!((growth_rate(z).unwrap().re - 0.3230659472).abs() < 1e-9);
    }

    #[test]
    fn derivative_vanishes_at_roots() {
        for z in saddle_roots() {
            assert!(potential_derivative(z).unwrap().norm() < 1e-12);
            assert!((z * z - z + 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 40 {
            let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(0.2..2.0));
            let h = 1e-5;
            let fd = (potential(z + h).unwrap() - potential(z - h).unwrap()) / (2.0 * h);
            let an = potential_derivative(z).unwrap();
            assert!((fd - an).norm() <= 1e-6 * an.norm().max(1e-3), "{z}");
            checked += 1;
        }
    }

    #[test]
    fn second_derivative_matches_finite_differences() {
        let z = Complex64::new(0.3, 0.7);
        let h = 1e-6;
        let fd = (potential_derivative(z + h).unwrap() - potential_derivative(z - h).unwrap()) / (2.0 * h);
        assert!((fd - potential_second_derivative(z)).norm() < 1e-6);
    }

    #[test]
    fn newton_from_standard_start() {
        let s = saddle_solve(Complex64::new(0.5, 0.5), 1e-13, 100).unwrap();
        let z: Complex64 = s.z.into();
        assert!(s.residual < 1e-12);
        assert!(s.quadratic_residual < 1e-12);
        assert!(saddle_roots().iter().any(|r| (r - z).norm() < 1e-12));
    }

    #[test]
    fn growth_root_is_lower() {
        let g = growth_saddle();
        assert!((Complex64::from(g.z) - saddle_roots()[1]).norm() < 1e-15);
        assert!((g.rate - 0.3230659472).abs() < 1e-9);
        let other = growth_rate(saddle_roots()[0]).unwrap().re;
        assert!((other + g.rate).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(potential(Complex64::new(0.0, 0.0)).is_err());
        assert!(potential_derivative(Complex64::new(1.0, 0.0)).is_err());
        assert!(saddle_solve(Complex64::new(0.0, 0.0), 1e-12, 10).is_err());
    }
}
