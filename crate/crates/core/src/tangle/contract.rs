//! State-sum contraction.
//!
//! Two engines compute the same number:
//!
//! - [`Strategy::Sweep`] reads the diagram top to bottom keeping a sparse
//!   vector over the labels of the current strands. The key of a state is the
//!   mixed-radix number of its labels with strand 0 as the most significant
//!   digit. A crossing is applied as two single-strand passes using the
//!   split `R^{kn}_{lm} = A(k; l, n) · B(m; l, n)`.
//! - [`Strategy::Eliminate`] treats edges as variables and the split crossing
//!   factors and `μ` entries as small dense tables, then sums variables out
//!   one at a time, cheapest first. On the figure-eight no intermediate table
//!   has more than three free edges, so the cost is `O(N⁴)`, while the widest
//!   sweep state holds `O(N⁵)` entries.
//!
//! Both engines are deterministic: every output entry is accumulated by one
//! thread in a fixed order, so results do not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qkernel::QContext;
use crate::tangle::diagram::{Op, TangleDiagram};
use crate::tangle::skeleton::Skeleton;
use crate::yang_baxter::{factor_a, factor_b, mu_entry, CrossingSign};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Eliminate,
    Sweep,
}

#[derive(Debug, Clone)]
pub struct ContractionOptions {
    pub strategy: Strategy,
    /// Largest table (or sparse state) the engine may build.
    pub max_entries: usize,
}

impl Default for ContractionOptions {
    fn default() -> Self {
        ContractionOptions {
            strategy: Strategy::Eliminate,
            max_entries: 50_000_000,
        }
    }
}

/// `⟨K⟩_N` up to a power of `q`, with default options.
pub fn state_sum(ctx: &QContext, d: &TangleDiagram) -> Result<Complex64> {
    state_sum_with(ctx, d, &ContractionOptions::default())
}

pub fn state_sum_with(ctx: &QContext, d: &TangleDiagram, opts: &ContractionOptions) -> Result<Complex64> {
    d.validate()?;
    match opts.strategy {
        Strategy::Eliminate => {
            let net = Network::new(ctx, &Skeleton::new(d));
            let order = net.greedy_order();
            net.contract(&order, opts.max_entries)
        }
        Strategy::Sweep => sweep(ctx, d, opts.max_entries),
    }
}

/// Dense table over a set of edge variables, first variable most significant.
#[derive(Debug, Clone)]
struct Table {
    vars: Vec<usize>,
    data: Vec<Complex64>,
}

struct Network {
    dims: Vec<usize>,
    tables: Vec<Table>,
}

impl Network {
    fn new(ctx: &QContext, s: &Skeleton) -> Self {
        let n = ctx.n();
        // the open ends are pinned to label 0
        let dims: Vec<usize> = (0..s.edge_count)
            .map(|e| if e == s.top || e == s.bottom { 1 } else { n })
            .collect();
        let mut tables = Vec::new();
        for c in &s.crossings {
            let sign = c.sign;
            tables.push(Self::table(&dims, &[c.k, c.l, c.n], |x| {
                factor_a(ctx, sign, x[0], x[1], x[2])
            }));
            tables.push(Self::table(&dims, &[c.m, c.l, c.n], |x| {
                factor_b(ctx, sign, x[0], x[1], x[2])
            }));
        }
        for f in &s.mus {
            tables.push(Self::table(&dims, &[f.left, f.right], |x| {
                mu_entry(ctx, x[0], x[1], f.sign)
            }));
        }
        Network { dims, tables }
    }

    /// Tabulates `f` over the distinct variables among `roles`; `f` receives
    /// the label of each role, so repeated edges are read on the diagonal.
    fn table(dims: &[usize], roles: &[usize], f: impl Fn(&[usize]) -> Complex64) -> Table {
        let mut vars = roles.to_vec();
        vars.sort_unstable();
        vars.dedup();
        let size: usize = vars.iter().map(|&v| dims[v]).product();
        let pos: Vec<usize> = roles
            .iter()
            .map(|r| vars.iter().position(|v| v == r).unwrap())
            .collect();
        let mut digits = vec![0usize; vars.len()];
        let mut labels = vec![0usize; roles.len()];
        let mut data = Vec::with_capacity(size);
        for mut idx in 0..size {
            for j in (0..vars.len()).rev() {
                digits[j] = idx % dims[vars[j]];
                idx /= dims[vars[j]];
            }
            for (lab, &p) in labels.iter_mut().zip(&pos) {
                *lab = digits[p];
            }
            data.push(f(&labels));
        }
        Table { vars, data }
    }

    /// Repeatedly picks the variable whose elimination touches the smallest
    /// table, lowest id on ties.
    fn greedy_order(&self) -> Vec<usize> {
        let mut scopes: Vec<Vec<usize>> = self.tables.iter().map(|t| t.vars.clone()).collect();
        let mut alive: Vec<usize> = (0..self.dims.len()).collect();
        let mut order = Vec::with_capacity(alive.len());
        while !alive.is_empty() {
            let (best_i, _) = alive
                .iter()
                .enumerate()
                .map(|(i, &v)| (i, self.union_size(&scopes, v)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)))
                .unwrap();
            let v = alive.remove(best_i);
            let mut merged: Vec<usize> = scopes
                .iter()
                .filter(|s| s.contains(&v))
                .flatten()
                .copied()
                .collect();
            merged.sort_unstable();
            merged.dedup();
            merged.retain(|&x| x != v);
            scopes.retain(|s| !s.contains(&v));
            scopes.push(merged);
            order.push(v);
        }
        order
    }

    fn union_size(&self, scopes: &[Vec<usize>], v: usize) -> f64 {
        let mut u: Vec<usize> = scopes
            .iter()
            .filter(|s| s.contains(&v))
            .flatten()
            .copied()
            .collect();
        u.sort_unstable();
        u.dedup();
        u.iter().map(|&x| self.dims[x] as f64).product()
    }

    fn contract(&self, order: &[usize], max_entries: usize) -> Result<Complex64> {
        let mut pool = self.tables.clone();
        for &v in order {
            let (touching, rest): (Vec<Table>, Vec<Table>) =
                pool.into_iter().partition(|t| t.vars.contains(&v));
            pool = rest;
            if touching.is_empty() {
                // a variable on no factor contributes its domain size
                pool.push(Table {
                    vars: vec![],
                    data: vec![Complex64::new(self.dims[v] as f64, 0.0)],
                });
                continue;
            }
            pool.push(self.eliminate(v, &touching, max_entries)?);
        }
        Ok(pool.iter().fold(ONE, |acc, t| acc * t.data[0]))
    }

    /// `Σ_{x_v} Π_t t(...)` as a table over the other variables.
    fn eliminate(&self, v: usize, tables: &[Table], max_entries: usize) -> Result<Table> {
        let mut out_vars: Vec<usize> = tables.iter().flat_map(|t| t.vars.iter().copied()).collect();
        out_vars.sort_unstable();
        out_vars.dedup();
        out_vars.retain(|&x| x != v);
        let out_dims: Vec<usize> = out_vars.iter().map(|&x| self.dims[x]).collect();
        let out_len: usize = out_dims.iter().product();
        let dv = self.dims[v];
        let work = out_len as f64 * dv as f64;
        if work > max_entries as f64 {
            return Err(Error::BudgetExceeded {
                what: "elimination table",
                needed: work,
                budget: max_entries as f64,
            });
        }

        // strides of every table with respect to the output digits and to v
        let strides: Vec<(Vec<usize>, usize)> = tables
            .iter()
            .map(|t| {
                let mut s = vec![0usize; t.vars.len()];
                let mut acc = 1;
                for j in (0..t.vars.len()).rev() {
                    s[j] = acc;
                    acc *= self.dims[t.vars[j]];
                }
                let per_out = out_vars
                    .iter()
                    .map(|x| t.vars.iter().position(|y| y == x).map_or(0, |j| s[j]))
                    .collect();
                let sv = t.vars.iter().position(|&y| y == v).map_or(0, |j| s[j]);
                (per_out, sv)
            })
            .collect();

        let data: Vec<Complex64> = (0..out_len)
            .into_par_iter()
            .with_min_len(512)
            .map(|o| {
                let mut rem = o;
                let mut bases = vec![0usize; tables.len()];
                for j in (0..out_vars.len()).rev() {
                    let digit = rem % out_dims[j];
                    rem /= out_dims[j];
                    for (b, (per_out, _)) in bases.iter_mut().zip(&strides) {
                        *b += digit * per_out[j];
                    }
                }
                let mut acc = ZERO;
                'label: for x in 0..dv {
                    let mut p = ONE;
                    for ((t, (_, sv)), b) in tables.iter().zip(&strides).zip(&bases) {
                        let z = t.data[b + x * sv];
                        if z == ZERO {
                            continue 'label;
                        }
                        p *= z;
                    }
                    acc += p;
                }
                acc
            })
            .collect();
        Ok(Table { vars: out_vars, data })
    }
}

/// Sparse state over the strands of one level, sorted by key, no repeats.
struct State {
    width: usize,
    entries: Vec<(u64, Complex64)>,
}

fn sweep(ctx: &QContext, d: &TangleDiagram, max_entries: usize) -> Result<Complex64> {
    let n = ctx.n();
    let max_w = d.max_width();
    let pow: Vec<u64> = (0..=max_w as u32 + 2)
        .map(|j| (n as u64).checked_pow(j))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::BudgetExceeded {
            what: "state index",
            needed: (n as f64).powi(max_w as i32),
            budget: u64::MAX as f64,
        })?;
    let mut st = State {
        width: 1,
        entries: vec![(0, ONE)],
    };
    let budget = |len: usize| -> Result<()> {
        if len > max_entries {
            Err(Error::BudgetExceeded {
                what: "sweep state",
                needed: len as f64,
                budget: max_entries as f64,
            })
        } else {
            Ok(())
        }
    };
    for ev in &d.events {
        let i = ev.at;
        let w = st.width;
        match ev.op {
            Op::Xp | Op::Xn => {
                let sign = if ev.op == Op::Xp {
                    CrossingSign::Positive
                } else {
                    CrossingSign::Negative
                };
                // slot i: k -> l with l ∈ {k, .., n - 1} cyclically
                st = slot_pass(
                    ctx,
                    &pow,
                    st,
                    i,
                    i + 1,
                    max_entries,
                    |k, nb| {
                        let room = n - ctx.residue(k as i64 - nb as i64);
                        (k, room)
                    },
                    |k, l, nb| factor_a(ctx, sign, k, l, nb),
                )?;
                // slot i+1: n -> m with m ∈ {l + 1, .., n} cyclically
                st = slot_pass(
                    ctx,
                    &pow,
                    st,
                    i + 1,
                    i,
                    max_entries,
                    |nv, l| ((l + 1) % n, ctx.residue(nv as i64 - l as i64 - 1) + 1),
                    |nv, m, l| factor_b(ctx, sign, m, l, nv),
                )?;
            }
            Op::CupLr | Op::CupRl => {
                let p = pow[w - i];
                let mut out = Vec::with_capacity(st.entries.len() * n);
                for &(key, amp) in &st.entries {
                    let (hi, lo) = (key / p, key % p);
                    for a in 0..n {
                        let (b, wgt) = if ev.op == Op::CupLr {
                            ((a + 1) % n, mu_entry(ctx, a, (a + 1) % n, CrossingSign::Positive))
                        } else {
                            (a, ONE)
                        };
                        let nk = ((hi * n as u64 + a as u64) * n as u64 + b as u64) * p + lo;
                        out.push((nk, amp * wgt));
                    }
                }
                budget(out.len())?;
                st = State {
                    width: w + 2,
                    entries: canonical(out),
                };
            }
            Op::CapLr | Op::CapRl => {
                let p = pow[w - i - 2];
                let mut out = Vec::with_capacity(st.entries.len());
                for &(key, amp) in &st.entries {
                    let lo = key % p;
                    let mid = (key / p) % (n * n) as u64;
                    let hi = key / pow[w - i];
                    let (a, b) = ((mid / n as u64) as usize, (mid % n as u64) as usize);
                    let wgt = if ev.op == Op::CapLr {
                        mu_entry(ctx, a, b, CrossingSign::Negative)
                    } else if a == b {
                        ONE
                    } else {
                        ZERO
                    };
                    if wgt != ZERO {
                        out.push((hi * p + lo, amp * wgt));
                    }
                }
                st = State {
                    width: w - 2,
                    entries: canonical(out),
                };
            }
        }
    }
    Ok(st.entries.iter().find(|e| e.0 == 0).map_or(ZERO, |e| e.1))
}

/// Rewrites one strand `s` of every state through a kernel that may depend on
/// the label of the neighbouring strand `nb`:
/// `out(.., y, ..) = Σ_x K(x, y, c) in(.., x, ..)` where `c` is the label at
/// `nb`. `range(x, c)` gives the cyclic run `(start, len)` of labels `y` with
/// a possibly nonzero kernel.
#[allow(clippy::too_many_arguments)]
fn slot_pass(
    ctx: &QContext,
    pow: &[u64],
    st: State,
    s: usize,
    nb: usize,
    max_entries: usize,
    range: impl Fn(usize, usize) -> (usize, usize) + Sync,
    kernel: impl Fn(usize, usize, usize) -> Complex64 + Sync,
) -> Result<State> {
    let n = ctx.n();
    let w = st.width;
    let ps = pow[w - 1 - s];
    let pnb = pow[w - 1 - nb];
    let digit = |key: u64, p: u64| ((key / p) % n as u64) as usize;

    // group states that differ only at strand s
    let mut keyed: Vec<(u64, usize, Complex64)> = st
        .entries
        .into_iter()
        .map(|(k, a)| {
            let x = digit(k, ps);
            (k - x as u64 * ps, x, a)
        })
        .collect();
    keyed.sort_by_key(|e| (e.0, e.1));
    let mut bounds = vec![0];
    for j in 1..keyed.len() {
        if keyed[j].0 != keyed[j - 1].0 {
            bounds.push(j);
        }
    }
    bounds.push(keyed.len());

    let groups: Vec<Vec<(u64, Complex64)>> = bounds
        .par_windows(2)
        .with_min_len(64)
        .map(|wnd| {
            let grp = &keyed[wnd[0]..wnd[1]];
            let base = grp[0].0;
            let c = digit(base, pnb);
            let mut acc = vec![ZERO; n];
            for &(_, x, a) in grp {
                let (start, len) = range(x, c);
                for t in 0..len {
                    let y = (start + t) % n;
                    let k = kernel(x, y, c);
                    if k != ZERO {
                        acc[y] += a * k;
                    }
                }
            }
            acc.into_iter()
                .enumerate()
                .filter(|(_, z)| *z != ZERO)
                .map(|(y, z)| (base + y as u64 * ps, z))
                .collect()
        })
        .collect();
    let total: usize = groups.iter().map(Vec::len).sum();
    if total > max_entries {
        return Err(Error::BudgetExceeded {
            what: "sweep state",
            needed: total as f64,
            budget: max_entries as f64,
        });
    }
    let mut out: Vec<(u64, Complex64)> = groups.into_iter().flatten().collect();
    out.sort_by_key(|e| e.0);
    Ok(State {
        width: w,
        entries: out,
    })
}

/// Sorts by key and sums repeated keys in their original order.
fn canonical(mut v: Vec<(u64, Complex64)>) -> Vec<(u64, Complex64)> {
    v.sort_by_key(|e| e.0);
    let mut out: Vec<(u64, Complex64)> = Vec::with_capacity(v.len());
    for (k, a) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += a,
            _ => out.push((k, a)),
        }
    }
    out.retain(|e| e.1 != ZERO);
    out
}

#[cfg(test)]
pub(crate) fn eliminate_in_order(ctx: &QContext, d: &TangleDiagram, order: &[usize]) -> Result<Complex64> {
    let net = Network::new(ctx, &Skeleton::new(d));
    net.contract(order, usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::diagram::Op;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn closed_form(n: usize) -> f64 {
        let c = QContext::new(n).unwrap();
        (0..n).map(|j| c.poch_q(j).norm_sqr()).sum()
    }

    fn sweep_opts() -> ContractionOptions {
        ContractionOptions {
            strategy: Strategy::Sweep,
            ..Default::default()
        }
    }

    #[test]
    fn figure_eight_small_moduli() {
        let d = TangleDiagram::figure_eight();
        for (n, want) in [(2, 5.0), (3, 13.0), (4, 27.0)] {
            let c = QContext::new(n).unwrap();
            let a = state_sum(&c, &d).unwrap();
            let b = state_sum_with(&c, &d, &sweep_opts()).unwrap();
            assert!((a.norm() - want).abs() < 1e-10 * want, "N={n} {a}");
            assert!((a - b).norm() < 1e-10 * want, "N={n} {a} {b}");
        }
    }

    #[test]
    fn engines_agree() {
        for d in [
            TangleDiagram::figure_eight(),
            TangleDiagram::trefoil(),
            TangleDiagram::kink(Op::Xn),
        ] {
            for n in 2..=12 {
                let c = QContext::new(n).unwrap();
                let a = state_sum(&c, &d).unwrap();
                let b = state_sum_with(&c, &d, &sweep_opts()).unwrap();
                assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0), "{} N={n}", d.name);
            }
        }
    }

    #[test]
    fn figure_eight_matches_closed_form() {
        let d = TangleDiagram::figure_eight();
        for n in 2..=30 {
            let c = QContext::new(n).unwrap();
            let v = state_sum(&c, &d).unwrap();
            let cf = closed_form(n);
            assert!((v.norm() - cf).abs() <= 1e-9 * cf, "N={n}");
        }
    }

    #[test]
    fn trefoil_is_sum_of_pochhammers() {
        let d = TangleDiagram::trefoil();
        for n in 2..=15 {
            let c = QContext::new(n).unwrap();
            let want: Complex64 = (0..n).map(|j| c.poch_q(j)).sum();
            let v = state_sum(&c, &d).unwrap();
            assert!(
                (v.norm() - want.norm()).abs() < 1e-9 * want.norm(),
                "N={n} {v} {want}"
            );
            // the two agree up to a power of q^{1/2}
            let ratio = v / want;
            let hit = (0..2 * n as i64).any(|e| (ratio - c.q_half_pow(e)).norm() < 1e-9);
            assert!(hit, "N={n} ratio {ratio}");
        }
    }

    #[test]
    fn unknot_and_kinks_have_unit_modulus() {
        for n in 2..=9 {
            let c = QContext::new(n).unwrap();
            for d in [
                TangleDiagram::unknot(),
                TangleDiagram::kink(Op::Xp),
                TangleDiagram::kink(Op::Xn),
                TangleDiagram::new("line", vec![]).unwrap(),
            ] {
                for opts in [ContractionOptions::default(), sweep_opts()] {
                    let v = state_sum_with(&c, &d, &opts).unwrap();
                    assert!((v.norm() - 1.0).abs() < 1e-12, "{} N={n} {v}", d.name);
                }
            }
        }
    }

    #[test]
    fn elimination_order_does_not_matter() {
        let d = TangleDiagram::figure_eight();
        let s = Skeleton::new(&d);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [3, 5, 8] {
            let c = QContext::new(n).unwrap();
            let reference = state_sum(&c, &d).unwrap();
            for _ in 0..5 {
                let mut order: Vec<usize> = (0..s.edge_count).collect();
                order.shuffle(&mut rng);
                let v = eliminate_in_order(&c, &d, &order).unwrap();
                assert!((v - reference).norm() < 1e-10 * reference.norm());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = QContext::new(10).unwrap();
        let d = TangleDiagram::figure_eight();
        for strategy in [Strategy::Eliminate, Strategy::Sweep] {
            let opts = ContractionOptions {
                strategy,
                max_entries: 50,
            };
            assert!(matches!(
                state_sum_with(&c, &d, &opts),
                Err(Error::BudgetExceeded { .. })
            ));
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let d = TangleDiagram::figure_eight();
        let c = QContext::new(17).unwrap();
        let run = |t: usize, strategy: Strategy| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
            pool.install(|| {
                state_sum_with(
                    &c,
                    &d,
                    &ContractionOptions {
                        strategy,
                        ..Default::default()
                    },
                )
                .unwrap()
            })
        };
        for strategy in [Strategy::Eliminate, Strategy::Sweep] {
            let a = run(1, strategy.clone());
            for t in [2, 4] {
                let b = run(t, strategy.clone());
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
