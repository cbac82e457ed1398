//! Gluing equations of ideal triangulations and their Newton solver.
//!
//! An equation reads `sign · Π z_i^{a_i} (1 - z_i)^{b_i} = 1`. The three edge
//! parameters `z`, `1/(1-z)` and `1 - 1/z = -(1-z)/z` of a tetrahedron all fit
//! this form. The solver works with logarithms,
//! `Σ a_i log z_i + Σ b_i log(1 - z_i) + log(sign) - 2πi k = 0`, where the
//! integer `k` of each equation is fixed at the starting point.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hypergeo::dilog::bloch_wigner;
use crate::ComplexValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeExponent {
    pub z: i32,
    pub one_minus_z: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingEquation {
    pub sign: i32,
    pub exponents: Vec<ShapeExponent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSystem {
    pub equations: Vec<GluingEquation>,
    #[serde(default)]
    pub names: Vec<String>,
}

impl GluingEquation {
    fn new(sign: i32, exps: &[(i32, i32)]) -> Self {
        GluingEquation {
            sign,
            exponents: exps
                .iter()
                .map(|&(z, one_minus_z)| ShapeExponent { z, one_minus_z })
                .collect(),
        }
    }

    /// `sign · Π z^a (1-z)^b`.
    pub fn evaluate(&self, shapes: &[Complex64]) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        self.exponents
            .iter()
            .zip(shapes)
            .fold(Complex64::new(self.sign as f64, 0.0), |acc, (e, &z)| {
                acc * z.powi(e.z) * (one - z).powi(e.one_minus_z)
            })
    }

    /// Logarithm of the left side before any `2πi` correction.
    fn log_raw(&self, shapes: &[Complex64]) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let base = if self.sign < 0 {
            Complex64::new(0.0, PI)
        } else {
            Complex64::new(0.0, 0.0)
        };
        self.exponents.iter().zip(shapes).fold(base, |acc, (e, &z)| {
            acc + z.ln() * e.z as f64 + (one - z).ln() * e.one_minus_z as f64
        })
    }
}

impl GluingSystem {
    pub fn from_json(s: &str) -> Result<Self> {
        let sys: GluingSystem = serde_json::from_str(s)?;
        sys.validate()?;
        Ok(sys)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("system serializes")
    }

    pub fn shape_count(&self) -> usize {
        self.equations.first().map_or(0, |e| e.exponents.len())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.shape_count();
        if self.equations.is_empty() || n == 0 {
            return Err(Error::input(
                "gluing system needs at least one equation and one shape",
            ));
        }
        for (j, e) in self.equations.iter().enumerate() {
            if e.sign != 1 && e.sign != -1 {
                return Err(Error::input(format!("equation {j}: sign must be +1 or -1")));
            }
            if e.exponents.len() != n {
                return Err(Error::input(format!(
                    "equation {j} has {} shapes, expected {n}",
                    e.exponents.len()
                )));
            }
        }
        if !self.names.is_empty() && self.names.len() != self.equations.len() {
            return Err(Error::input("names must match the equations one to one"));
        }
        Ok(())
    }

    pub fn name(&self, j: usize) -> String {
        self.names
            .get(j)
            .cloned()
            .unwrap_or_else(|| format!("equation-{}", j + 1))
    }

    /// Left sides of all equations; each should equal 1 at a solution.
    pub fn evaluate(&self, shapes: &[Complex64]) -> Vec<Complex64> {
        self.equations.iter().map(|e| e.evaluate(shapes)).collect()
    }
}

/// Two tetrahedra with shapes `(b, d)`: two edge consistency equations and
/// the meridian and longitude of the cusp.
pub fn figure_eight_gluing_system() -> GluingSystem {
    GluingSystem {
        equations: vec![
            GluingEquation::new(-1, &[(1, 1), (-2, 1)]),
            GluingEquation::new(-1, &[(-1, -1), (2, -1)]),
            GluingEquation::new(1, &[(-1, 0), (1, 0)]),
            GluingEquation::new(1, &[(2, 0), (2, -2)]),
        ],
        names: ["consistency-1", "consistency-2", "meridian", "longitude"]
            .map(String::from)
            .to_vec(),
    }
}

/// Shapes `z_i`, one per ideal tetrahedron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeAssignment {
    pub shapes: Vec<ComplexValue>,
}

impl ShapeAssignment {
    pub fn new(shapes: &[Complex64]) -> Self {
        ShapeAssignment {
            shapes: shapes.iter().map(|&z| z.into()).collect(),
        }
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.shapes.iter().map(|&z| z.into()).collect()
    }

    /// Parses `"0.4+1.2i,0.7+0.8i"`.
    pub fn parse(s: &str) -> Result<Self> {
        let shapes = s
            .split(',')
            .map(|p| parse_complex(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ShapeAssignment::new(&shapes))
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    compact
        .replace('j', "i")
        .parse::<Complex64>()
        .map_err(|_| Error::input(format!("cannot parse complex number {s:?}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Shapes with `Im z` below this count as flat.
    pub min_imag: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-13,
            max_iter: 100,
            min_imag: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewtonSolution {
    pub shapes: ShapeAssignment,
    pub iterations: usize,
    /// Largest `|log residual|` at the returned shapes.
    pub residual: f64,
    /// `‖log residual‖₂` before the first and after every iteration.
    pub history: Vec<f64>,
    /// `2πi` multiples fixed at the start, one per equation.
    pub lifts: Vec<i64>,
    /// Shapes at the start and after every iteration.
    pub path: Vec<ShapeAssignment>,
}

/// Gauss-Newton with backtracking on the log residuals, staying in the
/// upper half plane.
pub fn newton_solve(
    system: &GluingSystem,
    initial: &ShapeAssignment,
    opts: &NewtonOptions,
) -> Result<NewtonSolution> {
    system.validate()?;
    let n = system.shape_count();
    let mut z = initial.values();
    if z.len() != n {
        return Err(Error::input(format!(
            "system has {n} shapes, initial assignment has {}",
            z.len()
        )));
    }
    if let Some(bad) = z.iter().find(|w| !w.is_finite() || w.im <= 0.0) {
        return Err(Error::input(format!(
            "initial shape {bad} must have positive imaginary part"
        )));
    }

    let lifts: Vec<i64> = system
        .equations
        .iter()
        .map(|e| (e.log_raw(&z).im / (2.0 * PI)).round() as i64)
        .collect();
    let residuals = |z: &[Complex64]| -> Vec<Complex64> {
        system
            .equations
            .iter()
            .zip(&lifts)
            .map(|(e, &k)| e.log_raw(z) - Complex64::new(0.0, 2.0 * PI * k as f64))
            .collect()
    };
    let norm = |r: &[Complex64]| r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let inf_norm = |r: &[Complex64]| r.iter().map(|x| x.norm()).fold(0.0, f64::max);

    let mut r = residuals(&z);
    let mut history = vec![norm(&r)];
    let mut path = vec![ShapeAssignment::new(&z)];
    let mut trace = vec![format!("start: shapes {z:?}, residual {:e}", history[0])];
    for it in 0..opts.max_iter {
        if inf_norm(&r) < opts.tol {
            return Ok(NewtonSolution {
                shapes: ShapeAssignment::new(&z),
                iterations: it,
                residual: inf_norm(&r),
                history,
                lifts,
                path,
            });
        }
        let one = Complex64::new(1.0, 0.0);
        let jac = DMatrix::from_fn(system.equations.len(), n, |j, i| {
            let e = system.equations[j].exponents[i];
            Complex64::new(e.z as f64, 0.0) / z[i] - Complex64::new(e.one_minus_z as f64, 0.0) / (one - z[i])
        });
        let rhs = DVector::from_iterator(r.len(), r.iter().map(|x| -x));
        let svd = jac.svd(true, true);
        let step = svd
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::RankDeficient(format!("Gauss-Newton step: {e}")))?;

        let current = norm(&r);
        let mut t = 1.0;
        loop {
            let cand: Vec<Complex64> = z.iter().zip(step.iter()).map(|(a, d)| a + d * t).collect();
            if cand.iter().all(|w| w.im > opts.min_imag) {
                let rc = residuals(&cand);
                if norm(&rc) < current {
                    z = cand;
                    r = rc;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-12 {
                if z.iter().any(|w| w.im < 1e-6) {
                    return Err(Error::DegenerateShape(format!(
                        "shapes {z:?} collapsed onto the real line"
                    )));
                }
                trace.push(format!("iter {it}: line search failed at residual {current:e}"));
                return Err(Error::NonConvergence {
                    iterations: it,
                    residual: inf_norm(&r),
                    trace,
                });
            }
        }
        history.push(norm(&r));
        path.push(ShapeAssignment::new(&z));
        trace.push(format!(
            "iter {it}: step {t}, shapes {z:?}, residual {:e}",
            norm(&r)
        ));
    }
    if inf_norm(&r) < opts.tol {
        return Ok(NewtonSolution {
            shapes: ShapeAssignment::new(&z),
            iterations: opts.max_iter,
            residual: inf_norm(&r),
            history,
            lifts,
            path,
        });
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual: inf_norm(&r),
        trace,
    })
}

/// Sum of Bloch-Wigner values of the shapes.
pub fn volume(shapes: &ShapeAssignment) -> Result<f64> {
    shapes.values().into_iter().map(bloch_wigner).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn omega() -> Complex64 {
        Complex64::from_polar(1.0, PI / 3.0)
    }

    /// The four equations as products of edge parameters, written out.
    fn literal_products(b: Complex64, d: Complex64) -> [Complex64; 4] {
        let one = Complex64::new(1.0, 0.0);
        let inv1m = |z: Complex64| (one - z).inv();
        let onem_inv = |z: Complex64| one - z.inv();
        [
            b * inv1m(d) * b * onem_inv(d) * onem_inv(b) * onem_inv(d),
            d * inv1m(b) * inv1m(d) * inv1m(b) * d * onem_inv(b),
            b.inv() * d,
            (inv1m(b).inv() * d * onem_inv(b).inv() * inv1m(d))
                * (inv1m(b).inv() * d * onem_inv(b).inv() * inv1m(d)),
        ]
    }

    #[test]
    fn exact_solution_satisfies_system() {
        let sys = figure_eight_gluing_system();
        for v in sys.evaluate(&[omega(), omega()]) {
            assert!((v - 1.0).norm() < 1e-12, "{v}");
        }
        let z = Complex64::new(0.3, 0.9);
        assert_eq!(sys.equations[2].evaluate(&[z, z]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn exponent_form_matches_products() {
        let sys = figure_eight_gluing_system();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let b = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0));
            let d = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0));
            let lit = literal_products(b, d);
            for (x, y) in sys.evaluate(&[b, d]).iter().zip(lit) {
                assert!((x - y).norm() < 1e-10 * y.norm().max(1.0));
            }
        }
    }

    #[test]
    fn newton_from_i() {
        let sys = figure_eight_gluing_system();
        let init = ShapeAssignment::parse("i,i").unwrap();
        let sol = newton_solve(&sys, &init, &NewtonOptions::default()).unwrap();
        assert!(sol.residual < 1e-12);
        for z in sol.shapes.values() {
            assert!((z - omega()).norm() < 1e-12);
            assert!((z * z - z + 1.0).norm() < 1e-12);
        }
        assert!((volume(&sol.shapes).unwrap() - 2.029883212819307).abs() < 1e-9);
        assert_eq!(sol.path.len(), sol.history.len());
        assert_eq!(sol.path[0], init);
    }

    #[test]
    fn newton_from_perturbed_start() {
        let sys = figure_eight_gluing_system();
        let init = ShapeAssignment::parse("0.4+1.2i, 0.7+0.8i").unwrap();
        let sol = newton_solve(&sys, &init, &NewtonOptions::default()).unwrap();
        for z in sol.shapes.values() {
            assert!((z - omega()).norm() < 1e-12);
        }
    }

    #[test]
    fn residual_decreases_from_random_starts() {
        let sys = figure_eight_gluing_system();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let mut converged = 0;
        for _ in 0..20 {
            let b = Complex64::new(rng.random_range(-1.5..2.5), rng.random_range(0.1..2.0));
            let d = Complex64::new(rng.random_range(-1.5..2.5), rng.random_range(0.1..2.0));
            if let Ok(sol) = newton_solve(&sys, &ShapeAssignment::new(&[b, d]), &NewtonOptions::default()) {
                converged += 1;
                for w in sol.history.windows(2).skip(3) {
                    assert!(w[1] <= w[0]);
                }
            }
        }
        assert!(converged > 0);
    }

    #[test]
    fn degenerate_and_bad_inputs() {
        let sys = figure_eight_gluing_system();
        assert!(newton_solve(
            &sys,
            &ShapeAssignment::parse("0.5,i").unwrap(),
            &NewtonOptions::default()
        )
        .is_err());
        assert!(newton_solve(
            &sys,
            &ShapeAssignment::parse("i").unwrap(),
            &NewtonOptions::default()
        )
        .is_err());
        assert!(ShapeAssignment::parse("x+y").is_err());
        assert!(GluingSystem::from_json(r#"{"equations":[]}"#).is_err());
        assert!(GluingSystem::from_json(
            r#"{"equations":[{"sign":2,"exponents":[{"z":1,"one_minus_z":0}]}]}"#
        )
        .is_err());
    }

    #[test]
    fn volume_of_shapes() {
        assert!(
            (volume(&ShapeAssignment::new(&[omega(), omega()])).unwrap() - 2.029883212819307).abs() < 1e-12
        );
        assert_eq!(
            volume(&ShapeAssignment::new(&[Complex64::new(0.5, 0.0)])).unwrap(),
            0.0
        );
    }

    #[test]
    fn json_round_trip() {
        let sys = figure_eight_gluing_system();
        let s = sys.to_json();
        assert!(s.contains(r#""one_minus_z""#));
        assert_eq!(GluingSystem::from_json(&s).unwrap(), sys);
    }
}
