//! Arithmetic at the root of unity `q = exp(2πi/N)`.
//!
//! [`QContext`] fixes `N` and precomputes the powers of `q`, the half powers
//! `q^{j/2}` (principal square root `exp(πi/N)`), and the Pochhammer tables
//! `(q)_n = Π_{k=1..n} (1 - q^k)` and `(q⁻¹)_n` for `n = 0..=N`. Everything
//! downstream reads these tables instead of recomputing products.
//!
//! Labels live in `Z/N`. [`QContext::residue`] is the canonical representative
//! in `0..N`, and [`QContext::in_cyclic_interval`] / [`QContext::theta`]
//! describe counterclockwise order of `N`-th roots of unity on the unit circle.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Which Pochhammer table to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QBase {
    /// `(q)_n`
    Q,
    /// `(q⁻¹)_n`
    QInv,
}

/// Fixed `N` with `q = exp(2πi/N)` and its precomputed tables.
#[derive(Debug, Clone)]
pub struct QContext {
    n: usize,
    q: Complex64,
    q_half: Complex64,
    /// `q^j` for `j = 0..N`.
    q_pow: Vec<Complex64>,
    /// `q^{j/2}` for `j = 0..2N`.
    q_half_pow: Vec<Complex64>,
    poch_q: Vec<Complex64>,
    poch_qinv: Vec<Complex64>,
    /// `1/(q)_j` and `1/(q⁻¹)_j` for `j = 0..N` (all nonzero there).
    inv_poch_q: Vec<Complex64>,
    inv_poch_qinv: Vec<Complex64>,
}

impl QContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("N must be at least 2, got {n}")));
        }
        let nf = n as f64;
        let q_pow: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nf))
            .collect();
        let q_half_pow: Vec<Complex64> = (0..2 * n)
            .map(|j| Complex64::from_polar(1.0, PI * j as f64 / nf))
            .collect();

        let mut poch_q = Vec::with_capacity(n + 1);
        let mut poch_qinv = Vec::with_capacity(n + 1);
        poch_q.push(Complex64::new(1.0, 0.0));
        poch_qinv.push(Complex64::new(1.0, 0.0));
        for k in 1..=n {
            let qk = q_pow[k % n];
            let a = poch_q[k - 1] * (Complex64::new(1.0, 0.0) - qk);
            // the q⁻¹ table is built from exact conjugates so it is exactly conj((q)_n)
            let b = poch_qinv[k - 1] * (Complex64::new(1.0, 0.0) - qk.conj());
            poch_q.push(a);
            poch_qinv.push(b);
        }
        // (q)_N contains the factor 1 - q^N = 0 exactly
        debug_assert_eq!(poch_q[n], Complex64::new(0.0, 0.0));

        let inv_poch_q = poch_q[..n].iter().map(|z| z.inv()).collect();
        let inv_poch_qinv = poch_qinv[..n].iter().map(|z| z.inv()).collect();

        Ok(QContext {
            n,
            q: q_pow[1 % n],
            q_half: q_half_pow[1],
            q_pow,
            q_half_pow,
            poch_q,
            poch_qinv,
            inv_poch_q,
            inv_poch_qinv,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn q(&self) -> Complex64 {
        self.q
    }

    #[inline]
    pub fn q_half(&self) -> Complex64 {
        self.q_half
    }

    /// `[x]`, the residue of `x` modulo `N` in `0..N`.
    #[inline]
    pub fn residue(&self, x: i64) -> usize {
        x.rem_euclid(self.n as i64) as usize
    }

    /// `q^e` for any integer exponent.
    #[inline]
    pub fn q_pow(&self, e: i64) -> Complex64 {
        self.q_pow[self.residue(e)]
    }

    /// `q^{e/2}`, i.e. `exp(πi e / N)`; `e` is the doubled exponent.
    #[inline]
    pub fn q_half_pow(&self, doubled: i64) -> Complex64 {
        self.q_half_pow[doubled.rem_euclid(2 * self.n as i64) as usize]
    }

    /// `a ∈ [b, c]`: `q^b, q^a, q^c` lie counterclockwise on the unit circle
    /// (coincidences allowed), i.e. `[a-b] + [c-a] = [c-b]`.
    pub fn in_cyclic_interval(&self, a: i64, b: i64, c: i64) -> bool {
        self.residue(a - b) + self.residue(c - a) == self.residue(c - b)
    }

    /// The θ symbol with arguments in counterclockwise order `(k, l, m, n)`:
    /// 1 iff `l ≠ m` and `q^k, q^l, q^m, q^n` run counterclockwise.
    ///
    /// In the crossing picture `k` is top-left, `l` bottom-left, `m`
    /// bottom-right and `n` top-right. Evaluated through the four ordered
    /// cases `k≤l<m≤n`, `n≤k≤l<m`, `m≤n≤k≤l (m<l)`, `l<m≤n≤k`.
    pub fn theta(&self, k: usize, l: usize, m: usize, n: usize) -> u8 {
        debug_assert!(k < self.n && l < self.n && m < self.n && n < self.n);
        let hit = (k <= l && l < m && m <= n)
            || (n <= k && k <= l && l < m)
            || (m <= n && n <= k && k <= l && m < l)
            || (l < m && m <= n && n <= k);
        hit as u8
    }

    pub fn pochhammer(&self, base: QBase, n: usize) -> Result<Complex64> {
        let table = match base {
            QBase::Q => &self.poch_q,
            QBase::QInv => &self.poch_qinv,
        };
        table
            .get(n)
            .copied()
            .ok_or_else(|| Error::input(format!("Pochhammer index {n} outside 0..={}", self.n)))
    }

    #[inline]
    pub fn poch_q(&self, n: usize) -> Complex64 {
        self.poch_q[n]
    }

    #[inline]
    pub fn poch_qinv(&self, n: usize) -> Complex64 {
        self.poch_qinv[n]
    }

    /// `1/(q)_j` for `j < N`.
    #[inline]
    pub(crate) fn inv_poch_q(&self, j: usize) -> Complex64 {
        self.inv_poch_q[j]
    }

    /// `1/(q⁻¹)_j` for `j < N`.
    #[inline]
    pub(crate) fn inv_poch_qinv(&self, j: usize) -> Complex64 {
        self.inv_poch_qinv[j]
    }

    /// Left side of the reduction lemma:
    /// `Σ_{k ∈ [l,m]} q^{-(m-l+1)k} / ((q)_{[m-k]} (q⁻¹)_{[k-l]})`.
    pub fn yokota_lemma_lhs(&self, l: usize, m: usize) -> Complex64 {
        let (l, m) = (l as i64, m as i64);
        (0..self.n as i64)
            .filter(|&k| self.in_cyclic_interval(k, l, m))
            .map(|k| {
                self.q_pow(-(m - l + 1) * k)
                    * self.inv_poch_q(self.residue(m - k))
                    * self.inv_poch_qinv(self.residue(k - l))
            })
            .sum()
    }

    /// Closed form of the reduction lemma:
    /// `(-1)^{[m-l]} q^{([m-l]+1)([m-l]-2m)/2}`.
    pub fn yokota_lemma_rhs(&self, l: usize, m: usize) -> Complex64 {
        let d = self.residue(m as i64 - l as i64) as i64;
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        self.q_half_pow((d + 1) * (d - 2 * m as i64)) * sign
    }

    /// Residual `|lhs - rhs|` of the summation identity
    ///
    /// `Σ_{i=0}^{N-1-α} q^{(β-α)i/2} / ((q)_i (q⁻¹)_{N-1-α-i})
    ///   = (-1)^{N-1-α} q^{-N(N-1)/2 - β(α+1)/2} / N · (q)_α (q)_{N-1-α+h} / (q)_h`
    ///
    /// with `h = [(α-β)/2]`. The identity is stated for `α ≡ β (mod 2)`;
    /// other parities are rejected.
    pub fn mm_identity_check(&self, alpha: usize, beta: i64) -> Result<f64> {
        let n = self.n as i64;
        if alpha >= self.n {
            return Err(Error::input(format!("alpha = {alpha} outside 0..{}", self.n)));
        }
        let a = alpha as i64;
        if (a - beta).rem_euclid(2) != 0 {
            return Err(Error::input(format!(
                "alpha - beta must be even (alpha = {alpha}, beta = {beta})"
            )));
        }
        let lhs: Complex64 = (0..=(n - 1 - a))
            .map(|i| {
                self.q_half_pow((beta - a) * i)
                    / (self.poch_q[i as usize] * self.poch_qinv[(n - 1 - a - i) as usize])
            })
            .sum();
        let h = self.residue((a - beta) / 2);
        let idx = (n - 1 - a) as usize + h;
        let upper = if idx <= self.n {
            self.poch_q[idx]
        } else {
            // (q)_j vanishes for j ≥ N
            Complex64::new(0.0, 0.0)
        };
        let sign = if (n - 1 - a) % 2 == 0 { 1.0 } else { -1.0 };
        let rhs =
            self.q_half_pow(-n * (n - 1) - beta * (a + 1)) * sign / n as f64 * self.poch_q[alpha] * upper
                / self.poch_q[h];
        Ok((lhs - rhs).norm())
    }
}
