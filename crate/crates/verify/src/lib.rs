//! Acceptance checks for kashaev-core, one [`Line`] per criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use kashaev_core::asymptotics::{
    conjecture_report, fit_samples, kashaev_41, volume_point, volume_sequence, ClosedForm,
};
use kashaev_core::hypergeo::{
    bloch_wigner, figure_eight_gluing_system, growth_saddle, newton_solve, potential, potential_derivative,
    saddle_solve, volume, NewtonOptions, ShapeAssignment,
};
use kashaev_core::tangle::{
    brute_force_sum, pruned_sum, state_sum, InvariantRecord, Labeling, Skeleton, TangleDiagram,
    DEFAULT_BRUTE_FORCE_BUDGET,
};
use kashaev_core::yang_baxter::{check_ybe, DEFAULT_DENSE_BOUND};
use kashaev_core::{Complex64, QContext, Result};
use rand::{Rng, SeedableRng};

const VOLUME_41: f64 = 2.029883212819;

pub struct Line {
    pub pass: bool,
    pub detail: String,
}

fn line(pass: bool, detail: String) -> Line {
    Line { pass, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

// tolerances: residual 1e-9, runtime 30 s
pub fn criterion_1() -> Result<Line> {
    let (worst, t) = timed(|| -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 2..=5 {
            let r = check_ybe(&QContext::new(n)?, DEFAULT_DENSE_BOUND)?;
            worst = worst
                .max(r.braid)
                .max(r.mu_commutation)
                .max(r.trace_positive)
                .max(r.trace_negative);
        }
        Ok(worst)
    });
    let worst = worst?;
    Ok(line(
        worst < 1e-9 && t < Duration::from_secs(30),
        format!("enhanced Yang-Baxter identities N=2..5: max residual {worst:.2e}, {t:.2?}"),
    ))
}

// tolerances: relative 1e-9, spot values 1e-9, runtime 10 s
pub fn criterion_2() -> Result<Line> {
    let d = TangleDiagram::figure_eight();
    let (r, t) = timed(|| -> Result<(f64, Vec<f64>)> {
        let mut worst = 0.0f64;
        let mut spots = Vec::new();
        for n in 2..=50 {
            let ctx = QContext::new(n)?;
            let m = state_sum(&ctx, &d)?.norm();
            worst = worst.max(rel(m, kashaev_41(n)?.norm()));
            if n <= 4 {
                spots.push(m);
            }
        }
        Ok((worst, spots))
    });
    let (worst, spots) = r?;
    let spot_ok = spots
        .iter()
        .zip([5.0, 13.0, 27.0])
        .all(|(a, b)| rel(*a, b) < 1e-9);
    Ok(line(
        worst < 1e-9 && spot_ok && t < Duration::from_secs(10),
        format!(
            "|state sum| vs closed form N=2..50: max rel {worst:.2e}; N=2,3,4 moduli {spots:.9?}; {t:.2?}"
        ),
    ))
}

// tolerance: relative 1e-9
pub fn criterion_3() -> Result<Line> {
    let mut worst = 0.0f64;
    for (d, ns) in [
        (TangleDiagram::figure_eight(), 2..=3),
        (TangleDiagram::trefoil(), 2..=4),
    ] {
        for n in ns {
            let ctx = QContext::new(n)?;
            let a = brute_force_sum(&ctx, &d, DEFAULT_BRUTE_FORCE_BUDGET)?;
            let b = pruned_sum(&ctx, &d)?.value;
            let c = state_sum(&ctx, &d)?;
            let s = a.norm().max(1e-300);
            worst = worst.max((a - b).norm() / s).max((a - c).norm() / s);
        }
    }
    Ok(line(
        worst < 1e-9,
        format!("brute force = pruned = contraction on figure-eight N=2,3 and trefoil N=2,3,4: max rel {worst:.2e}"),
    ))
}

// threshold: |weight| > 1e-15
pub fn criterion_4() -> Result<Line> {
    let ctx = QContext::new(3)?;
    let s = Skeleton::new(&TangleDiagram::figure_eight());
    let free = s.free_edges();
    let mut lab = Labeling(vec![0; s.edge_count]);
    let (mut nonzero, mut violations, mut visited) = (0u64, 0u64, 0u64);
    'outer: loop {
        visited += 1;
        if s.weight(&ctx, &lab).norm() > 1e-15 {
            nonzero += 1;
            if !s.angle_conditions(&ctx, &lab).all() {
                violations += 1;
            }
        }
        for &e in free.iter().rev() {
            lab.0[e] += 1;
            if lab.0[e] < 3 {
                continue 'outer;
            }
            lab.0[e] = 0;
        }
        break;
    }
    Ok(line(
        violations == 0 && nonzero > 0,
        format!("figure-eight N=3: {visited} labelings, {nonzero} nonzero, {violations} violate the angle conditions"),
    ))
}

// tolerance: residual 1e-9
pub fn criterion_5() -> Result<Line> {
    let (mut lemma, mut mm) = (0.0f64, 0.0f64);
    for n in 2..=12 {
        let ctx = QContext::new(n)?;
        for l in 0..n {
            for m in 0..n {
                lemma = lemma.max((ctx.yokota_lemma_lhs(l, m) - ctx.yokota_lemma_rhs(l, m)).norm());
            }
        }
        for a in 0..n {
            mm = mm.max(ctx.mm_identity_check(a, -(a as i64))?);
        }
    }
    Ok(line(
        lemma < 1e-9 && mm < 1e-9,
        format!("reduction lemma all (l,m), N<=12: {lemma:.2e}; beta=-alpha summation identity: {mm:.2e}"),
    ))
}

fn solve_from_i() -> Result<ShapeAssignment> {
    let sol = newton_solve(
        &figure_eight_gluing_system(),
        &ShapeAssignment::parse("i,i")?,
        &NewtonOptions::default(),
    )?;
    Ok(sol.shapes)
}

// tolerances: residual 1e-12, shape 1e-12, volume 1e-9
pub fn criterion_6() -> Result<Line> {
    let sys = figure_eight_gluing_system();
    let shapes = solve_from_i()?;
    let z = shapes.values();
    let w = Complex64::from_polar(1.0, PI / 3.0);
    let residual = sys
        .evaluate(&z)
        .iter()
        .map(|v| (v - 1.0).norm())
        .fold(0.0, f64::max);
    let shape_err = z.iter().map(|s| (s - w).norm()).fold(0.0, f64::max);
    let vol = volume(&shapes)?;
    let twice_d = 2.0 * bloch_wigner(w)?;
    Ok(line(
        residual < 1e-12 && shape_err < 1e-12 && (vol - VOLUME_41).abs() < 1e-9 && (vol - twice_d).abs() < 1e-9,
        format!("gluing Newton from b=d=i: residual {residual:.2e}, |z - exp(pi i/3)| {shape_err:.2e}, volume {vol:.12}"),
    ))
}

// tolerance: 1e-12
pub fn criterion_7() -> Result<Line> {
    let worst = solve_from_i()?
        .values()
        .iter()
        .map(|z| (z * z - z + 1.0).norm())
        .fold(0.0, f64::max);
    Ok(line(
        worst < 1e-12,
        format!("gluing shapes satisfy z^2 - z + 1 = 0: max {worst:.2e}"),
    ))
}

// tolerances: fit gap 5e-3, runtime 10 s
pub fn criterion_8a() -> Result<Line> {
    let (fit, t) = timed(|| -> Result<_> {
        let s = volume_sequence(ClosedForm::FigureEight, 100, 1000, 20)?;
        fit_samples(&s, true)
    });
    let r = conjecture_report(&fit?, VOLUME_41);
    Ok(line(
        r.gap < 5e-3 && t < Duration::from_secs(10),
        format!(
            "fit over N=100..1000 step 20: vol_estimate {:.7}, gap {:.2e}, log coefficient {:.4}, {t:.2?}",
            r.fit.vol_estimate, r.gap, r.fit.log_exponent
        ),
    ))
}

// tolerance: 0.05
pub fn criterion_8b() -> Result<Line> {
    let v = volume_point(1000, kashaev_41(1000)?.norm())?;
    Ok(line(
        (v - VOLUME_41).abs() < 0.05,
        format!(
            "raw 2 pi log|<4_1>_N|/N at N=1000: {v:.7}, off by {:.4}",
            (v - VOLUME_41).abs()
        ),
    ))
}

// tolerances: derivative relative 1e-6, saddle residual 1e-12, rate 1e-6
pub fn criterion_9() -> Result<Line> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let mut fd_worst = 0.0f64;
    for _ in 0..20 {
        let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(0.2..2.0));
        let h = 1e-5;
        let fd = (potential(z + h)? - potential(z - h)?) / (2.0 * h);
        let an = potential_derivative(z)?;
        fd_worst = fd_worst.max((fd - an).norm() / an.norm());
    }
    let s = saddle_solve(Complex64::new(0.5, 0.5), 1e-13, 100)?;
    let g = growth_saddle();
    Ok(line(
        fd_worst < 1e-6 && s.residual < 1e-12 && (g.rate - 0.3230659).abs() < 1e-6,
        format!(
            "dV/dz vs central differences at 20 points: max rel {fd_worst:.2e}; saddle residual {:.2e}; growth rate {:.10}",
            s.residual, g.rate
        ),
    ))
}

fn deterministic_run(threads: usize) -> Result<(String, Vec<f64>)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        let d = TangleDiagram::figure_eight();
        let mut records = Vec::new();
        for n in [7, 16, 25, 33] {
            records.push(InvariantRecord::new(n, state_sum(&QContext::new(n)?, &d)?));
        }
        let s = volume_sequence(ClosedForm::FigureEight, 100, 600, 25)?;
        let fit = fit_samples(&s, true)?;
        let mut nums: Vec<f64> = records.iter().flat_map(|r| [r.value.re, r.value.im]).collect();
        nums.push(fit.vol_estimate);
        let json = serde_json::to_string(&(records, fit)).expect("serializable");
        Ok((json, nums))
    })
}

// tolerance: relative 1e-12 across thread counts, exact within one
pub fn criterion_10() -> Result<Line> {
    let (a, na) = deterministic_run(1)?;
    let (b, _) = deterministic_run(1)?;
    let (c, nc) = deterministic_run(4)?;
    let (d, _) = deterministic_run(4)?;
    let across = na
        .iter()
        .zip(&nc)
        .map(|(x, y)| (x - y).abs() / x.abs().max(1e-300))
        .fold(0.0, f64::max);
    Ok(line(
        a == b && c == d && across <= 1e-12,
        format!("1 thread repeat identical: {}; 4 threads repeat identical: {}; max rel across counts {across:.2e}", a == b, c == d),
    ))
}

pub type Check = fn() -> Result<Line>;

pub const CRITERIA: [(&str, Check); 11] = [
    ("1", criterion_1),
    ("2", criterion_2),
    ("3", criterion_3),
    ("4", criterion_4),
    ("5", criterion_5),
    ("6", criterion_6),
    ("7", criterion_7),
    ("8a", criterion_8a),
    ("8b", criterion_8b),
    ("9", criterion_9),
    ("10", criterion_10),
];
