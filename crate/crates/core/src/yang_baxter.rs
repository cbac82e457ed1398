//! Kashaev's `R`-matrix, the `μ` matrix, and a dense verification of the
//! enhanced Yang-Baxter identities.
//!
//! Crossing labels follow the picture of a crossing with both strands going
//! down: `k` top-left, `n` top-right, `l` bottom-left, `m` bottom-right. As a
//! linear map `R` sends the top pair `(k, n)` to the bottom pair `(l, m)`, so
//! the dense matrix has `R[(l,m),(k,n)] = R^{kn}_{lm}` with row index
//! `l·N + m`.
//!
//! The entry `R^{kn}_{lm}` is nonzero exactly when the four corner angles
//! `[n-m], [k-n], [l-k], [m-l-1]` add up to `N - 1`. This is the θ condition
//! together with the diagonal labeling `k = l = m = n`; see
//! [`crossing_support`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::QContext;

/// Sign of a crossing, selecting `R` or `R⁻¹` (and `μ` or `μ⁻¹`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn as_i32(self) -> i32 {
        match self {
            CrossingSign::Positive => 1,
            CrossingSign::Negative => -1,
        }
    }
}

/// The four corner angles of a labeled crossing, named by compass position
/// around the X: north between `k` and `n`, east between `n` and `m`, south
/// between `l` and `m`, west between `k` and `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingAngles {
    pub east: usize,
    pub north: usize,
    pub west: usize,
    pub south: usize,
}

impl CrossingAngles {
    pub fn sum(&self) -> usize {
        self.east + self.north + self.west + self.south
    }
}

pub fn crossing_angles(ctx: &QContext, k: usize, n: usize, l: usize, m: usize) -> CrossingAngles {
    let (k, n, l, m) = (k as i64, n as i64, l as i64, m as i64);
    CrossingAngles {
        east: ctx.residue(n - m),
        north: ctx.residue(k - n),
        west: ctx.residue(l - k),
        south: ctx.residue(m - l - 1),
    }
}

/// Whether `R^{kn}_{lm}` (equivalently `(R⁻¹)^{kn}_{lm}`) can be nonzero.
///
/// The angles always sum to `N - 1` modulo `N`; the entry survives when the
/// sum is exactly `N - 1`. This equals `θ(k,l,m,n)` except on the diagonal
/// labeling `k = l = m = n`, where θ vanishes (since `l = m`) but the
/// entry must not: without it `R` is singular and the braid relation fails.
pub fn crossing_support(ctx: &QContext, k: usize, n: usize, l: usize, m: usize) -> bool {
    crossing_angles(ctx, k, n, l, m).sum() == ctx.n() - 1
}

/// `R^{kn}_{lm}` for [`CrossingSign::Positive`], `(R⁻¹)^{kn}_{lm}` otherwise.
pub fn r_entry(ctx: &QContext, k: usize, n: usize, l: usize, m: usize, sign: CrossingSign) -> Complex64 {
    let a = crossing_angles(ctx, k, n, l, m);
    if a.sum() != ctx.n() - 1 {
        return Complex64::new(0.0, 0.0);
    }
    let nf = ctx.n() as f64;
    let (k, n, l, m) = (k as i64, n as i64, l as i64, m as i64);
    match sign {
        CrossingSign::Positive => {
            let num = ctx.q_pow(1 - (l - n + 1) * (m - k)) * nf;
            num * ctx.inv_poch_q(a.south)
                * ctx.inv_poch_qinv(a.east)
                * ctx.inv_poch_q(a.north)
                * ctx.inv_poch_qinv(a.west)
        }
        CrossingSign::Negative => {
            let num = ctx.q_pow(-1 + (m - k - 1) * (l - n)) * nf;
            num * ctx.inv_poch_qinv(a.south)
                * ctx.inv_poch_q(a.east)
                * ctx.inv_poch_qinv(a.north)
                * ctx.inv_poch_q(a.west)
        }
    }
}

/// `μ^k_l` for [`CrossingSign::Positive`] and `(μ⁻¹)^k_l` otherwise.
///
/// `μ^k_l = -q^{1/2}` when `l = [k+1]`, and `(μ⁻¹)^k_l = -q^{-1/2}` when
/// `k = [l+1]`; all other entries vanish.
pub fn mu_entry(ctx: &QContext, k: usize, l: usize, sign: CrossingSign) -> Complex64 {
    let nn = ctx.n();
    match sign {
        CrossingSign::Positive if l == (k + 1) % nn => -ctx.q_half(),
        CrossingSign::Negative if k == (l + 1) % nn => -ctx.q_half_pow(-1),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// For fixed `(l, n)` a crossing entry splits as `A(k) · B(m)`; this is the
/// `k`-dependent factor, support included (`k ∈ [n, l]`).
#[inline]
pub(crate) fn factor_a(ctx: &QContext, sign: CrossingSign, k: usize, l: usize, n: usize) -> Complex64 {
    let (ki, li, ni) = (k as i64, l as i64, n as i64);
    let kn = ctx.residue(ki - ni);
    let lk = ctx.residue(li - ki);
    if kn + lk != ctx.residue(li - ni) {
        return Complex64::new(0.0, 0.0);
    }
    match sign {
        CrossingSign::Positive => ctx.q_pow((li - ni + 1) * ki) * ctx.inv_poch_q(kn) * ctx.inv_poch_qinv(lk),
        CrossingSign::Negative => ctx.q_pow(-ki * (li - ni)) * ctx.inv_poch_qinv(kn) * ctx.inv_poch_q(lk),
    }
}

/// The `m`-dependent factor matching [`factor_a`], support included
/// (`m ∈ [l+1, n]`), carrying the constant `N q^{±1}`.
#[inline]
pub(crate) fn factor_b(ctx: &QContext, sign: CrossingSign, m: usize, l: usize, n: usize) -> Complex64 {
    let (mi, li, ni) = (m as i64, l as i64, n as i64);
    let ml = ctx.residue(mi - li - 1);
    let nm = ctx.residue(ni - mi);
    if ml + nm != ctx.residue(ni - li - 1) {
        return Complex64::new(0.0, 0.0);
    }
    let nf = ctx.n() as f64;
    match sign {
        CrossingSign::Positive => {
            ctx.q_pow(1 - (li - ni + 1) * mi) * nf * ctx.inv_poch_q(ml) * ctx.inv_poch_qinv(nm)
        }
        CrossingSign::Negative => {
            ctx.q_pow(-1 + (mi - 1) * (li - ni)) * nf * ctx.inv_poch_qinv(ml) * ctx.inv_poch_q(nm)
        }
    }
}

/// Dense `N² × N²` matrix of `R` or `R⁻¹`, row `l·N + m`, column `k·N + n`.
pub fn r_matrix(ctx: &QContext, sign: CrossingSign) -> DMatrix<Complex64> {
    let nn = ctx.n();
    DMatrix::from_fn(nn * nn, nn * nn, |row, col| {
        let (l, m) = (row / nn, row % nn);
        let (k, n) = (col / nn, col % nn);
        r_entry(ctx, k, n, l, m, sign)
    })
}

/// Dense `N × N` matrix with entry `[k][l] = μ^k_l` (or `(μ⁻¹)^k_l`).
pub fn mu_matrix(ctx: &QContext, sign: CrossingSign) -> DMatrix<Complex64> {
    let nn = ctx.n();
    DMatrix::from_fn(nn, nn, |k, l| mu_entry(ctx, k, l, sign))
}

/// Default largest `N` accepted by [`check_ybe`].
pub const DEFAULT_DENSE_BOUND: usize = 8;

/// Maximum absolute deviations of the enhanced Yang-Baxter identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YbeReport {
    #[serde(rename = "N")]
    pub n: usize,
    /// `R·R⁻¹ = I` on `N²` dimensions.
    pub inverse: f64,
    /// `(R⊗1)(1⊗R)(R⊗1) = (1⊗R)(R⊗1)(1⊗R)` on `N³` dimensions.
    pub braid: f64,
    /// `(μ⊗μ)R^{±1} = R^{±1}(μ⊗μ)`, worst of both signs.
    pub mu_commutation: f64,
    /// `Σ_m (R(1⊗μ))^{km}_{lm} = -q^{1/2} δ_{kl}`.
    pub trace_positive: f64,
    /// `Σ_m (R⁻¹(1⊗μ))^{km}_{lm} = (-q^{1/2})^{-1} δ_{kl}`.
    pub trace_negative: f64,
}

impl YbeReport {
    /// Worst residual among the identities of the enhanced operator.
    pub fn max_residual(&self) -> f64 {
        self.braid
            .max(self.mu_commutation)
            .max(self.trace_positive)
            .max(self.trace_negative)
            .max(self.inverse)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() < tol
    }
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `T[k][l] = Σ_m Σ_{n'} R[(l,m),(k,n')] μ[n'][m]`, the partial trace of
/// `R(1⊗μ)` over the right strand.
fn partial_trace(ctx: &QContext, r: &DMatrix<Complex64>, mu: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let nn = ctx.n();
    DMatrix::from_fn(nn, nn, |k, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..nn {
            for np in 0..nn {
                acc += r[(l * nn + m, k * nn + np)] * mu[(np, m)];
            }
        }
        acc
    })
}

/// Dense check of the enhanced Yang-Baxter identities, refusing `N > bound`.
pub fn check_ybe(ctx: &QContext, bound: usize) -> Result<YbeReport> {
    let nn = ctx.n();
    if nn > bound {
        return Err(Error::DenseBoundExceeded { n: nn, bound });
    }
    let r = r_matrix(ctx, CrossingSign::Positive);
    let ri = r_matrix(ctx, CrossingSign::Negative);
    let mu = mu_matrix(ctx, CrossingSign::Positive);
    let id = DMatrix::<Complex64>::identity(nn, nn);
    let id2 = DMatrix::<Complex64>::identity(nn * nn, nn * nn);

    let inverse = max_abs_diff(&(&r * &ri), &id2).max(max_abs_diff(&(&ri * &r), &id2));

    let r1 = r.kronecker(&id);
    let r2 = id.kronecker(&r);
    let braid = max_abs_diff(&(&r1 * &r2 * &r1), &(&r2 * &r1 * &r2));

    let mm = mu.kronecker(&mu);
    let mu_commutation = max_abs_diff(&(&mm * &r), &(&r * &mm)).max(max_abs_diff(&(&mm * &ri), &(&ri * &mm)));

    let target = |z: Complex64| DMatrix::<Complex64>::identity(nn, nn) * z;
    let trace_positive = max_abs_diff(&partial_trace(ctx, &r, &mu), &target(-ctx.q_half()));
    let trace_negative = max_abs_diff(&partial_trace(ctx, &ri, &mu), &target(-ctx.q_half_pow(-1)));

    Ok(YbeReport {
        n: nn,
        inverse,
        braid,
        mu_commutation,
        trace_positive,
        trace_negative,
    })
}
