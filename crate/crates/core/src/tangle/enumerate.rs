//! Literal sums over edge labelings.
//!
//! [`brute_force_sum`] visits every labeling. [`pruned_sum`] walks labelings
//! edge by edge and abandons a partial labeling as soon as one of the three
//! angle conditions is decided false; the surviving labelings are then
//! weighted exactly as in the brute-force sum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::QContext;
use crate::tangle::diagram::TangleDiagram;
use crate::tangle::skeleton::{AngleSlot, Labeling, Skeleton};

/// Default cap on the number of labelings [`brute_force_sum`] will visit.
pub const DEFAULT_BRUTE_FORCE_BUDGET: f64 = 5.0e7;

pub fn brute_force_sum(ctx: &QContext, d: &TangleDiagram, budget: f64) -> Result<Complex64> {
    let s = Skeleton::new(d);
    let free = s.free_edges();
    let total = (ctx.n() as f64).powi(free.len() as i32);
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "brute-force labelings",
            needed: total,
            budget,
        });
    }
    let n = ctx.n();
    let mut lab = Labeling(vec![0; s.edge_count]);
    let mut sum = Complex64::new(0.0, 0.0);
    loop {
        sum += s.weight(ctx, &lab);
        // odometer over the free edges, last edge fastest
        let mut j = free.len();
        loop {
            if j == 0 {
                return Ok(sum);
            }
            j -= 1;
            let e = free[j];
            lab.0[e] += 1;
            if lab.0[e] < n {
                break;
            }
            lab.0[e] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrunedSum {
    pub value: Complex64,
    /// Labelings that satisfy all three angle conditions.
    pub surviving: u64,
    /// `N^(free edges)`.
    pub total: f64,
}

impl PrunedSum {
    pub fn ratio(&self) -> f64 {
        self.surviving as f64 / self.total
    }
}

/// A condition that can be decided once all of its edges carry labels.
enum Check {
    Crossing(usize),
    ZeroCorner(usize, AngleSlot),
    RegionSum(usize),
}

pub fn pruned_sum(ctx: &QContext, d: &TangleDiagram) -> Result<PrunedSum> {
    let s = Skeleton::new(d);
    let free = s.free_edges();
    let n = ctx.n();
    let total = (n as f64).powi(free.len() as i32);

    // depth at which each edge gets its label; the open ends are known up front
    let mut depth = vec![0usize; s.edge_count];
    for (j, &e) in free.iter().enumerate() {
        depth[e] = j + 1;
    }
    let corner_edges = |c: usize, slot: AngleSlot| {
        let x = &s.crossings[c];
        match slot {
            AngleSlot::North => [x.k, x.n],
            AngleSlot::East => [x.n, x.m],
            AngleSlot::South => [x.l, x.m],
            AngleSlot::West => [x.k, x.l],
        }
    };
    let mut checks: Vec<Vec<Check>> = (0..=free.len()).map(|_| Vec::new()).collect();
    for (ci, x) in s.crossings.iter().enumerate() {
        let at = [x.k, x.n, x.l, x.m].iter().map(|&e| depth[e]).max().unwrap();
        checks[at].push(Check::Crossing(ci));
    }
    for (ri, r) in s.regions.regions.iter().enumerate() {
        if r.unbounded {
            for c in &r.corners {
                let at = corner_edges(c.crossing, c.slot)
                    .iter()
                    .map(|&e| depth[e])
                    .max()
                    .unwrap();
                checks[at].push(Check::ZeroCorner(c.crossing, c.slot));
            }
        } else if !r.corners.is_empty() {
            let at = r
                .corners
                .iter()
                .flat_map(|c| corner_edges(c.crossing, c.slot))
                .map(|e| depth[e])
                .max()
                .unwrap();
            checks[at].push(Check::RegionSum(ri));
        }
    }

    let angle = |lab: &[usize], c: usize, slot: AngleSlot| -> usize {
        let x = &s.crossings[c];
        let r = |v: i64| ctx.residue(v);
        let (k, nn, l, m) = (lab[x.k] as i64, lab[x.n] as i64, lab[x.l] as i64, lab[x.m] as i64);
        match slot {
            AngleSlot::North => r(k - nn),
            AngleSlot::East => r(nn - m),
            AngleSlot::South => r(m - l - 1),
            AngleSlot::West => r(l - k),
        }
    };
    let passes = |lab: &[usize], chk: &Check| -> bool {
        match *chk {
            Check::Crossing(c) => {
                [
                    AngleSlot::North,
                    AngleSlot::East,
                    AngleSlot::South,
                    AngleSlot::West,
                ]
                .iter()
                .map(|&sl| angle(lab, c, sl))
                .sum::<usize>()
                    == n - 1
            }
            Check::ZeroCorner(c, sl) => angle(lab, c, sl) == 0,
            Check::RegionSum(ri) => {
                s.regions.regions[ri]
                    .corners
                    .iter()
                    .map(|c| angle(lab, c.crossing, c.slot))
                    .sum::<usize>()
                    == n - 1
            }
        }
    };

    let mut lab = Labeling(vec![0; s.edge_count]);
    let mut out = PrunedSum {
        value: Complex64::new(0.0, 0.0),
        surviving: 0,
        total,
    };
    if !checks[0].iter().all(|c| passes(&lab.0, c)) {
        return Ok(out);
    }
    // iterative depth-first search; next[j] is the next label to try at depth j+1
    let mut next = vec![0usize; free.len()];
    let mut j = 0usize;
    if free.is_empty() {
        out.surviving = 1;
        out.value = s.weight(ctx, &lab);
        return Ok(out);
    }
    loop {
        if next[j] == n {
            next[j] = 0;
            if j == 0 {
                break;
            }
            j -= 1;
            continue;
        }
        lab.0[free[j]] = next[j];
        next[j] += 1;
        if !checks[j + 1].iter().all(|c| passes(&lab.0, c)) {
            continue;
        }
        if j + 1 == free.len() {
            out.surviving += 1;
            out.value += s.weight(ctx, &lab);
        } else {
            j += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::contract::state_sum;
    use crate::tangle::diagram::Op;

    #[test]
    fn brute_force_figure_eight_n2() {
        let c = QContext::new(2).unwrap();
        let v = brute_force_sum(&c, &TangleDiagram::figure_eight(), 1e6).unwrap();
        assert!((v.norm() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_budget() {
        let c = QContext::new(6).unwrap();
        let r = brute_force_sum(&c, &TangleDiagram::figure_eight(), 1e3);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn three_sums_agree() {
        for d in [
            TangleDiagram::figure_eight(),
            TangleDiagram::trefoil(),
            TangleDiagram::kink(Op::Xp),
        ] {
            for n in 2..=4 {
                let c = QContext::new(n).unwrap();
                let a = brute_force_sum(&c, &d, DEFAULT_BRUTE_FORCE_BUDGET).unwrap();
                let b = pruned_sum(&c, &d).unwrap();
                let e = state_sum(&c, &d).unwrap();
                let scale = a.norm().max(1.0);
                assert!((a - b.value).norm() < 1e-9 * scale);
                assert!((a - e).norm() < 1e-9 * scale);
                assert!(b.ratio() <= 1.0);
            }
        }
    }

    #[test]
    fn pruning_counts() {
        let c = QContext::new(5).unwrap();
        let p = pruned_sum(&c, &TangleDiagram::figure_eight()).unwrap();
        assert!(p.surviving > 0);
        assert!(p.ratio() < 1e-3, "{}", p.ratio());
        let e = state_sum(&c, &TangleDiagram::figure_eight()).unwrap();
        assert!((p.value - e).norm() < 1e-9 * e.norm());
    }

    #[test]
    fn unknot_without_free_edges() {
        let c = QContext::new(3).unwrap();
        let d = TangleDiagram::new("line", vec![]).unwrap();
        let p = pruned_sum(&c, &d).unwrap();
        assert_eq!(p.surviving, 1);
        assert_eq!(p.value, Complex64::new(1.0, 0.0));
    }
}
