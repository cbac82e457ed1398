//! The dilogarithm `Li₂(z) = -∫₀^z log(1-u)/u du` on its principal branch,
//! and the Bloch-Wigner function.
//!
//! Inside the unit disc with `Re z ≤ 1/2` the series in `u = -log(1-z)`,
//! `Li₂(z) = Σ B_k u^{k+1}/(k+1)!`, converges geometrically with ratio
//! `|u|/2π ≤ 1/6`. The rest of the disc is reached by the reflection
//! `Li₂(z) = π²/6 - log z log(1-z) - Li₂(1-z)` and the outside by the
//! inversion `Li₂(z) = -π²/6 - log²(-z)/2 - Li₂(1/z)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `B_k / (k+1)!` for `k = 1, 2, 4, 6, ..., 34`; the `k = 0` term is `u`.
#[allow(clippy::excessive_precision)]
const BERNOULLI: [f64; 18] = [
    -0.25,
    0.027777777777777777778,
    -0.00027777777777777777778,
    4.7241118669690098262e-6,
    -9.1857730746619635509e-8,
    1.8978869988970999072e-9,
    -4.0647616451442255268e-11,
    8.9216910204564525552e-13,
    -1.9939295860721075687e-14,
    4.5189800296199181917e-16,
    -1.0356517612181247014e-17,
    2.3952186210261867457e-19,
    -5.5817858743250093363e-21,
    1.3091507554183212858e-22,
    -3.0874198024267402932e-24,
    7.3159756527022034204e-26,
    -1.740845657234000741e-27,
    4.1576356446138997196e-29,
];

const PI2_6: f64 = PI * PI / 6.0;

/// Principal-branch `Li₂(z)`. On the cut `(1, ∞)` the value approached from
/// below is returned; see [`try_dilog`] for a checked variant.
pub fn dilog(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re == 1.0 {
            return Complex64::new(PI2_6, 0.0);
        }
        if z.re > 1.0 {
            // log(-z) must pick up +iπ, the side below the cut
            let lz = z.re.ln();
            let inner = dilog_in_disc(Complex64::new(1.0 / z.re, 0.0));
            return Complex64::new(2.0 * PI2_6 - 0.5 * lz * lz, -PI * lz) - inner;
        }
    }
    if z.norm_sqr() > 1.0 {
        let l = (-z).ln();
        Complex64::new(-PI2_6, 0.0) - 0.5 * l * l - dilog_in_disc(z.inv())
    } else {
        dilog_in_disc(z)
    }
}

/// Like [`dilog`] but rejects points on the open branch cut `(1, ∞)`.
pub fn try_dilog(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re > 1.0 {
        return Err(Error::domain(format!(
            "Li2 is discontinuous on the branch cut, got z = {}",
            z.re
        )));
    }
    Ok(dilog(z))
}

/// `|z| ≤ 1`.
fn dilog_in_disc(z: Complex64) -> Complex64 {
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new(PI2_6, 0.0);
    }
    if z.re > 0.5 {
        let w = Complex64::new(1.0, 0.0) - z;
        Complex64::new(PI2_6, 0.0) - z.ln() * w.ln() - bernoulli_series(w)
    } else {
        bernoulli_series(z)
    }
}

/// `|z| ≤ 1`, `Re z ≤ 1/2`.
fn bernoulli_series(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    // u - u²/4 + Σ_{j≥1} c_{2j} u^{2j+1}
    let mut sum = u + BERNOULLI[0] * u2;
    let mut p = u * u2;
    for &c in &BERNOULLI[1..] {
        let t = c * p;
        sum += t;
        if t.norm() < 1e-17 * sum.norm() {
            break;
        }
        p *= u2;
    }
    sum
}

/// `D(z) = Im Li₂(z) + arg(1-z) log|z|`, the volume of the ideal tetrahedron
/// with shape `z` when `Im z > 0` (negated below the real line, zero on it).
pub fn bloch_wigner(z: Complex64) -> Result<f64> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        return Err(Error::domain(format!("Bloch-Wigner function undefined at {z}")));
    }
    if z.im == 0.0 {
        return Ok(0.0);
    }
    Ok(dilog(z).im + (Complex64::new(1.0, 0.0) - z).arg() * z.norm().ln())
}

/// The Maclaurin series `Σ z^k / k²`, only meant as a reference for `|z| < 1`.
#[cfg(test)]
pub(crate) fn dilog_maclaurin(z: Complex64, terms: usize) -> Complex64 {
    let mut p = z;
    let mut s = Complex64::new(0.0, 0.0);
    for k in 1..=terms {
        s += p / (k * k) as f64;
        p *= z;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `-∫₀^z log(1-u)/u du` along the segment, Gauss-Legendre on 400 panels.
    fn dilog_quadrature(z: Complex64) -> Complex64 {
        let nodes = [
            (-0.906179845938664, 0.236926885056189),
            (-0.538469310105683, 0.478628670499366),
            (0.0, 0.568888888888889),
            (0.538469310105683, 0.478628670499366),
            (0.906179845938664, 0.236926885056189),
        ];
        let panels = 400;
        let mut s = c(0.0, 0.0);
        for p in 0..panels {
            let (a, b) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
            for &(x, w) in &nodes {
                let t = 0.5 * (a + b) + 0.5 * (b - a) * x;
                let u = z * t;
                // log(1-u)/u · du with du = z dt
                let f = if t == 0.0 {
                    -c(1.0, 0.0)
                } else {
                    (c(1.0, 0.0) - u).ln() / u
                };
                s -= f * z * (0.5 * (b - a) * w);
            }
        }
        s
    }

    #[test]
    fn special_values() {
        assert_eq!(dilog(c(0.0, 0.0)), c(0.0, 0.0));
        assert!((dilog(c(1.0, 0.0)).re - 1.6449340668482264).abs() < 1e-15);
        assert!((dilog(c(-1.0, 0.0)) - c(-PI * PI / 12.0, 0.0)).norm() < 1e-14);
        assert!((dilog(c(0.5, 0.0)).re - (PI2_6 / 2.0 - 0.5 * 2f64.ln().powi(2))).abs() < 1e-15);
    }

    #[test]
    fn special_values_by_series() {
        let zeta2: f64 = (1..200_000).map(|k| 1.0 / (k as f64 * k as f64)).sum::<f64>() + 1.0 / 200_000.0;
        assert!((dilog(c(1.0, 0.0)).re - zeta2).abs() < 1e-9);
        let alt: f64 = (1..200_001)
            .map(|k| if k % 2 == 1 { -1.0 } else { 1.0 } / (k as f64 * k as f64))
            .sum();
        assert!((dilog(c(-1.0, 0.0)).re - alt).abs() < 1e-10);
    }

    #[test]
    fn matches_maclaurin_inside_half_disc() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.random_range(0.0..0.5);
            let t = rng.random_range(0.0..2.0 * PI);
            let z = Complex64::from_polar(r, t);
            assert!((dilog(z) - dilog_maclaurin(z, 80)).norm() < 1e-15);
        }
    }

    #[test]
    fn matches_quadrature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let z = c(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            if z.im.abs() < 0.05 && z.re > 0.9 {
                continue;
            }
            let a = dilog(z);
            let b = dilog_quadrature(z);
            assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()), "{z}: {a} vs {b}");
        }
        let w = Complex64::from_polar(1.0, PI / 3.0);
        assert!((dilog(w) - dilog_quadrature(w)).norm() < 1e-12);
    }

    #[test]
    fn inversion_relation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let z = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let l = (-z).ln();
            let lhs = dilog(z) + dilog(z.inv());
            let rhs = c(-PI2_6, 0.0) - 0.5 * l * l;
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn reflection_relation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let z = c(rng.random_range(-3.0..3.0), rng.random_range(0.01..3.0));
            let w = c(1.0, 0.0) - z;
            let lhs = dilog(z) + dilog(w);
            let rhs = c(PI2_6, 0.0) - z.ln() * w.ln();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn cut_is_approached_from_below() {
        let x = 3.0;
        let on = dilog(c(x, 0.0));
        let below = dilog(c(x, -1e-9));
        let above = dilog(c(x, 1e-9));
        assert!((on - below).norm() < 1e-7);
        assert!((on - above).norm() > 1.0);
        assert!(try_dilog(c(x, 0.0)).is_err());
        assert!(try_dilog(c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn regular_tetrahedron() {
        let w = Complex64::from_polar(1.0, PI / 3.0);
        assert!((bloch_wigner(w).unwrap() - 1.0149416064096536).abs() < 1e-13);
    }

    #[test]
    fn bloch_wigner_symmetries() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(15);
        for _ in 0..50 {
            let z = c(rng.random_range(-3.0..3.0), rng.random_range(0.01..3.0));
            let d = bloch_wigner(z).unwrap();
            assert!((bloch_wigner(z.conj()).unwrap() + d).abs() < 1e-12);
            // D(z) = D(1 - 1/z) = D(1/(1-z))
            let one = c(1.0, 0.0);
            assert!((bloch_wigner(one - z.inv()).unwrap() - d).abs() < 1e-10);
            assert!((bloch_wigner((one - z).inv()).unwrap() - d).abs() < 1e-10);
        }
        assert_eq!(bloch_wigner(c(0.3, 0.0)).unwrap(), 0.0);
        assert_eq!(bloch_wigner(c(-2.0, 0.0)).unwrap(), 0.0);
        assert!(bloch_wigner(c(0.0, 0.0)).is_err());
        assert!(bloch_wigner(c(1.0, 0.0)).is_err());
    }
}
