//! Closed-form sums at roots of unity, volume sequences and growth fits.
//!
//! The figure-eight sum `Σ_{j<N} (q)_j (q⁻¹)_j` has terms as large as
//! `exp(0.32·N)`, which overflows a double past `N ≈ 2200`. Sums are therefore
//! accumulated as a mantissa times `exp(scale)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hypergeo::potential::growth_saddle;
use crate::qkernel::QContext;

/// `mantissa · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub log_scale: f64,
    /// `log` of the largest term modulus that went into the sum.
    pub max_term_log: f64,
}

impl ScaledComplex {
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    pub fn log_modulus(&self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }

    /// Decimal digits lost to cancellation between terms.
    pub fn lost_digits(&self) -> f64 {
        ((self.max_term_log - self.log_modulus()) / std::f64::consts::LN_10).max(0.0)
    }
}

/// Sums losing more digits than this are refused by [`volume_sequence`].
pub const MAX_LOST_DIGITS: f64 = 12.0;

/// `Σ_{j=0}^{N-1} Π_{k=1}^{j} factor(k)` in scaled form.
fn scaled_product_sum(n: usize, factor: impl Fn(usize) -> Complex64) -> ScaledComplex {
    let mut p = Complex64::new(1.0, 0.0);
    let mut lp = 0.0f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut la = 0.0f64;
    let mut max_term = 0.0f64;
    for j in 0..n {
        if j > 0 {
            p *= factor(j);
            let m = p.norm();
            if m > 1e100 || (m < 1e-100 && m > 0.0) {
                lp += m.ln();
                p /= m;
            }
        }
        max_term = max_term.max(p.norm().ln() + lp);
        if lp > la {
            acc = acc * (la - lp).exp() + p;
            la = lp;
        } else {
            acc += p * (lp - la).exp();
        }
    }
    ScaledComplex {
        mantissa: acc,
        log_scale: la,
        max_term_log: max_term,
    }
}

/// `Σ_{j=0}^{N-1} (q)_j (q⁻¹)_j` in scaled form.
pub fn kashaev_41_scaled(n: usize) -> Result<ScaledComplex> {
    let ctx = QContext::new(n)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(scaled_product_sum(n, |k| {
        (one - ctx.q_pow(k as i64)) * (one - ctx.q_pow(-(k as i64)))
    }))
}

/// `Σ_{j=0}^{N-1} (q)_j (q⁻¹)_j`. Overflows to infinity past `N ≈ 2200`;
/// use [`kashaev_41_scaled`] there.
pub fn kashaev_41(n: usize) -> Result<Complex64> {
    Ok(kashaev_41_scaled(n)?.value())
}

/// `Σ_{j=0}^{N-1} (q)_j`, the trefoil value up to a power of `q^{1/2}`.
/// Terms reach `exp(0.16·N)` while the sum stays polynomial in `N`, so double
/// precision gives out near `N ≈ 250`; see [`ScaledComplex::lost_digits`].
pub fn kashaev_31_scaled(n: usize) -> Result<ScaledComplex> {
    let ctx = QContext::new(n)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(scaled_product_sum(n, |k| one - ctx.q_pow(k as i64)))
}

pub fn kashaev_31(n: usize) -> Result<Complex64> {
    Ok(kashaev_31_scaled(n)?.value())
}

/// `2π log(modulus) / N`.
pub fn volume_point(n: usize, modulus: f64) -> Result<f64> {
    if modulus.is_nan() || modulus <= 0.0 || modulus.is_infinite() {
        return Err(Error::domain(format!(
            "volume point needs a positive finite modulus, got {modulus}"
        )));
    }
    volume_point_from_log(n, modulus.ln())
}

pub fn volume_point_from_log(n: usize, log_modulus: f64) -> Result<f64> {
    if n == 0 || !log_modulus.is_finite() {
        return Err(Error::domain(format!(
            "volume point undefined for N = {n}, log modulus {log_modulus}"
        )));
    }
    Ok(2.0 * PI * log_modulus / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedForm {
    FigureEight,
    Trefoil,
}

impl ClosedForm {
    pub fn scaled(self, n: usize) -> Result<ScaledComplex> {
        match self {
            ClosedForm::FigureEight => kashaev_41_scaled(n),
            ClosedForm::Trefoil => kashaev_31_scaled(n),
        }
    }

    /// Volume of the complement; zero for the torus knot.
    pub fn geometric_volume(self) -> f64 {
        match self {
            ClosedForm::FigureEight => crate::hypergeo::gluing::volume(
                &crate::hypergeo::gluing::ShapeAssignment::new(&[Complex64::from_polar(1.0, PI / 3.0); 2]),
            )
            .expect("regular shapes are nondegenerate"),
            ClosedForm::Trefoil => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeSample {
    #[serde(rename = "N")]
    pub n: usize,
    pub log_modulus: f64,
    pub volume_point: f64,
}

impl VolumeSample {
    pub fn from_log(n: usize, log_modulus: f64) -> Result<Self> {
        Ok(VolumeSample {
            n,
            log_modulus,
            volume_point: volume_point_from_log(n, log_modulus)?,
        })
    }
}

/// Samples for `N = n_min, n_min + step, ..., ≤ n_max`, evaluated in parallel.
pub fn volume_sequence(
    form: ClosedForm,
    n_min: usize,
    n_max: usize,
    step: usize,
) -> Result<Vec<VolumeSample>> {
    if n_min < 2 || n_max < n_min || step == 0 {
        return Err(Error::input(format!(
            "need 2 <= n_min <= n_max and step > 0, got {n_min}..{n_max} step {step}"
        )));
    }
    let ns: Vec<usize> = (n_min..=n_max).step_by(step).collect();
    ns.into_par_iter()
        .map(|n| {
            let s = form.scaled(n)?;
            if s.lost_digits() > MAX_LOST_DIGITS {
                return Err(Error::domain(format!(
                    "{form:?} sum at N = {n} cancels {:.1} digits; double precision is exhausted",
                    s.lost_digits()
                )));
            }
            VolumeSample::from_log(n, s.log_modulus())
        })
        .collect()
}

pub fn samples_to_csv(samples: &[VolumeSample]) -> String {
    let mut out = String::from("N,log_modulus,volume_point\n");
    for s in samples {
        out.push_str(&format!("{},{:e},{:e}\n", s.n, s.log_modulus, s.volume_point));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    /// `2π` times the fitted coefficient of `N`.
    pub vol_estimate: f64,
    /// Coefficient of `log N`; zero when the fit omits it.
    pub log_exponent: f64,
    pub constant: f64,
    /// `‖fitted - observed‖₂` over the samples.
    pub residual_norm: f64,
    #[serde(rename = "N_range")]
    pub n_range: [usize; 2],
    pub samples: usize,
    pub with_log_term: bool,
}

/// Least squares `log_modulus ≈ a·N + b·log N + c` (or without `b`).
pub fn fit_growth(samples: &[(usize, f64)], with_log_term: bool) -> Result<GrowthFit> {
    let mut s = samples.to_vec();
    s.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    if s.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::input("fit samples must have distinct N"));
    }
    if s.len() < 10 {
        return Err(Error::input(format!(
            "fit needs at least 10 samples, got {}",
            s.len()
        )));
    }
    if let Some(&(n, y)) = s.iter().find(|(n, y)| *n == 0 || !y.is_finite()) {
        return Err(Error::input(format!("bad sample N = {n}, log modulus {y}")));
    }
    let n_max = s.last().unwrap().0 as f64;
    let cols = if with_log_term { 3 } else { 2 };
    // columns scaled to comparable size
    let x = DMatrix::from_fn(s.len(), cols, |i, j| {
        let n = s[i].0 as f64;
        match (j, with_log_term) {
            (0, _) => n / n_max,
            (1, true) => n.ln() / n_max.ln().max(1.0),
            _ => 1.0,
        }
    });
    let y = DVector::from_iterator(s.len(), s.iter().map(|p| p.1));
    let svd = x.clone().svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-12 * sv.max() {
        return Err(Error::RankDeficient(format!(
            "growth design matrix has singular values {:?}",
            sv.as_slice()
        )));
    }
    let beta = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let residual_norm = (&x * &beta - &y).norm();
    let a = beta[0] / n_max;
    let (b, c) = if with_log_term {
        (beta[1] / n_max.ln().max(1.0), beta[2])
    } else {
        (0.0, beta[1])
    };
    Ok(GrowthFit {
        vol_estimate: 2.0 * PI * a,
        log_exponent: b,
        constant: c,
        residual_norm,
        n_range: [s[0].0, s.last().unwrap().0],
        samples: s.len(),
        with_log_term,
    })
}

pub fn fit_samples(samples: &[VolumeSample], with_log_term: bool) -> Result<GrowthFit> {
    let pairs: Vec<(usize, f64)> = samples.iter().map(|s| (s.n, s.log_modulus)).collect();
    fit_growth(&pairs, with_log_term)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub fit: GrowthFit,
    pub geometric_volume: f64,
    /// `2π · Re(V(z₀)/(2πi))` at the figure-eight growth saddle.
    pub saddle_prediction: f64,
    pub gap: f64,
    pub applicable: bool,
    pub note: String,
}

/// Compares a fit with a geometric volume. A zero volume marks a
/// non-hyperbolic knot.
pub fn conjecture_report(fit: &GrowthFit, geometric_vol: f64) -> ConjectureReport {
    let applicable = geometric_vol > 0.0;
    let note = if applicable {
        format!(
            "hyperbolic; fitted {:.7} vs volume {:.7} over N = {}..{}",
            fit.vol_estimate, geometric_vol, fit.n_range[0], fit.n_range[1]
        )
    } else {
        "non-hyperbolic, conjecture not applicable".to_string()
    };
    ConjectureReport {
        fit: fit.clone(),
        geometric_volume: geometric_vol,
        saddle_prediction: 2.0 * PI * growth_saddle().rate,
        gap: (fit.vol_estimate - geometric_vol).abs(),
        applicable,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn small_values() {
        for (n, v) in [(2, 5.0), (3, 13.0), (4, 27.0)] {
            let k = kashaev_41(n).unwrap();
            assert!((k.re - v).abs() < 1e-12 && k.im.abs() < 1e-12, "{n}: {k}");
        }
        assert!(kashaev_41(1).is_err());
    }

    #[test]
    fn matches_direct_pochhammer() {
        for n in 2..40 {
            let c = QContext::new(n).unwrap();
            let direct: Complex64 = (0..n).map(|j| c.poch_q(j) * c.poch_qinv(j)).sum();
            let k = kashaev_41(n).unwrap();
            assert!((k - direct).norm() < 1e-11 * direct.norm());
            let t: Complex64 = (0..n).map(|j| c.poch_q(j)).sum();
            assert!((kashaev_31(n).unwrap() - t).norm() < 1e-11 * t.norm().max(1.0));
        }
    }

    #[test]
    fn real_and_no_overflow() {
        for n in [500, 1000, 2000] {
            let s = kashaev_41_scaled(n).unwrap();
            assert!(s.mantissa.im.abs() < 1e-10 * s.mantissa.norm());
            assert!(s.mantissa.re > 0.0);
        }
        let big = kashaev_41_scaled(3000).unwrap();
        assert!(big.log_modulus().is_finite());
        assert!(kashaev_41(3000).unwrap().re.is_infinite());
    }

    #[test]
    fn cancellation_is_detected() {
        assert!(kashaev_41_scaled(1000).unwrap().lost_digits() < 1e-6);
        assert!(kashaev_31_scaled(100).unwrap().lost_digits() < 6.0);
        // 60-digit reference values
        let t = kashaev_31(100).unwrap().norm();
        assert!((t - 1000.97589503).abs() < 1e-6 * t);
        let t = kashaev_31(200).unwrap().norm();
        assert!((t - 2828.71472386).abs() < 1e-3 * t);
        assert!(kashaev_31_scaled(600).unwrap().lost_digits() > MAX_LOST_DIGITS);
        assert!(volume_sequence(ClosedForm::Trefoil, 100, 600, 100).is_err());
    }

    #[test]
    fn volume_point_values() {
        assert_eq!(volume_point(10, 1.0).unwrap(), 0.0);
        assert!(volume_point(10, 0.0).is_err());
        assert!(volume_point(10, f64::NAN).is_err());
        let v = volume_point(2, 5.0).unwrap();
        assert!((v - PI * 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sequence_increases_late() {
        let s = volume_sequence(ClosedForm::FigureEight, 100, 1000, 100).unwrap();
        assert_eq!(s.len(), 10);
        for w in s.windows(2) {
            assert!(w[1].volume_point < w[0].volume_point);
        }
        assert!(volume_sequence(ClosedForm::FigureEight, 10, 5, 1).is_err());
    }

    #[test]
    fn synthetic_recovery() {
        let (a, b, c) = (0.3230659, 1.5, 0.0);
        let samples: Vec<(usize, f64)> = (100..=1000)
            .step_by(20)
            .map(|n| (n, a * n as f64 + b * (n as f64).ln() + c))
            .collect();
        let f = fit_growth(&samples, true).unwrap();
        assert!((f.vol_estimate / (2.0 * PI) - a).abs() < 1e-12);
        assert!((f.log_exponent - b).abs() < 1e-9);
        assert!(f.residual_norm < 1e-9);
    }

    #[test]
    fn reordering_invariance() {
        let samples: Vec<(usize, f64)> = (100..=600)
            .step_by(25)
            .map(|n| (n, kashaev_41_scaled(n).unwrap().log_modulus()))
            .collect();
        let f = fit_growth(&samples, true).unwrap();
        let mut shuffled = samples.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(41));
        let g = fit_growth(&shuffled, true).unwrap();
        assert!((f.vol_estimate - g.vol_estimate).abs() < 1e-12);
        assert!((f.residual_norm - g.residual_norm).abs() < 1e-12);
    }

    #[test]
    fn fit_input_errors() {
        let few: Vec<(usize, f64)> = (10..15).map(|n| (n, n as f64)).collect();
        assert!(fit_growth(&few, true).is_err());
        let mut dup: Vec<(usize, f64)> = (10..30).map(|n| (n, n as f64)).collect();
        dup.push((10, 1.0));
        assert!(fit_growth(&dup, true).is_err());
    }

    #[test]
    fn log_term_lowers_residual() {
        let s = volume_sequence(ClosedForm::FigureEight, 100, 1000, 20).unwrap();
        let with = fit_samples(&s, true).unwrap();
        let without = fit_samples(&s, false).unwrap();
        assert!(with.residual_norm < without.residual_norm);
        assert_eq!(without.log_exponent, 0.0);
    }

    #[test]
    fn trefoil_report_not_applicable() {
        let s = volume_sequence(ClosedForm::Trefoil, 20, 200, 10).unwrap();
        assert!(s.last().unwrap().volume_point < 0.5);
        let f = fit_samples(&s, true).unwrap();
        assert!(f.vol_estimate.abs() < 0.05, "{}", f.vol_estimate);
        let r = conjecture_report(&f, ClosedForm::Trefoil.geometric_volume());
        assert!(!r.applicable);
        assert!(r.note.contains("non-hyperbolic"));
    }

    #[test]
    fn report_round_trips() {
        let s = volume_sequence(ClosedForm::FigureEight, 100, 400, 20).unwrap();
        let r = conjecture_report(
            &fit_samples(&s, true).unwrap(),
            ClosedForm::FigureEight.geometric_volume(),
        );
        let j = serde_json::to_string(&r).unwrap();
        let back: ConjectureReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
        assert!((r.saddle_prediction - r.geometric_volume).abs() < 1e-9);
    }

    #[test]
    fn csv_layout() {
        let s = volume_sequence(ClosedForm::FigureEight, 2, 4, 1).unwrap();
        let csv = samples_to_csv(&s);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "N,log_modulus,volume_point");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("2,"));
    }
}
