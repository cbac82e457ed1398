//! Edges, weight factors and planar regions of a diagram.
//!
//! An edge is a maximal piece of the knot between crossings; identity
//! extrema (`cup_rl`, `cap_rl`) do not cut edges, `μ`-extrema do. Regions are
//! found by sweeping the gaps between strands: a crossing ends the gap
//! above it and starts a new one below, a cup splits a gap, and a cap joins
//! the two gaps beside it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::QContext;
use crate::tangle::diagram::{Op, TangleDiagram};
use crate::yang_baxter::{crossing_angles, mu_entry, r_entry, CrossingAngles, CrossingSign};

/// Corner of a crossing drawn as an X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngleSlot {
    /// Between `k` and `n`, above the crossing.
    North,
    /// Between `n` and `m`.
    East,
    /// Between `l` and `m`, below the crossing.
    South,
    /// Between `k` and `l`.
    West,
}

impl AngleSlot {
    pub fn of(self, a: &CrossingAngles) -> usize {
        match self {
            AngleSlot::North => a.north,
            AngleSlot::East => a.east,
            AngleSlot::South => a.south,
            AngleSlot::West => a.west,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    pub crossing: usize,
    pub slot: AngleSlot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub corners: Vec<Corner>,
    pub unbounded: bool,
}

/// Faces of the projection. The two unbounded faces are the ones to the
/// left and right of the open strand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionData {
    pub regions: Vec<Region>,
    pub unbounded: [usize; 2],
}

impl RegionData {
    pub fn bounded_count(&self) -> usize {
        self.regions.iter().filter(|r| !r.unbounded).count()
    }
}

/// Edge ids at one crossing, in the `R^{kn}_{lm}` layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingEdges {
    pub sign: CrossingSign,
    pub event: usize,
    pub k: usize,
    pub n: usize,
    pub l: usize,
    pub m: usize,
}

/// A `μ` (from `cup_lr`) or `μ⁻¹` (from `cap_lr`) factor on two edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuFactor {
    pub sign: CrossingSign,
    pub event: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone)]
pub struct Skeleton {
    pub edge_count: usize,
    pub top: usize,
    pub bottom: usize,
    pub crossings: Vec<CrossingEdges>,
    pub mus: Vec<MuFactor>,
    pub regions: RegionData,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn add(&mut self) -> usize {
        let id = self.0.len();
        self.0.push(id);
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }

    /// Maps each class to `0..classes` in order of first appearance.
    fn compress(&mut self) -> (Vec<usize>, usize) {
        let mut id = vec![usize::MAX; self.0.len()];
        let mut next = 0;
        let mut out = vec![0; self.0.len()];
        for (x, o) in out.iter_mut().enumerate() {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            *o = id[r];
        }
        (out, next)
    }
}

impl Skeleton {
    pub fn new(d: &TangleDiagram) -> Self {
        let mut edges = UnionFind(Vec::new());
        let mut gaps = UnionFind(Vec::new());
        let top = edges.add();
        let mut strands = vec![top];
        let mut open_gaps = vec![gaps.add(), gaps.add()];
        let mut crossings = Vec::new();
        let mut mus = Vec::new();
        let mut corners: Vec<(usize, Corner)> = Vec::new();

        for (t, ev) in d.events.iter().enumerate() {
            let i = ev.at;
            match ev.op {
                Op::Xp | Op::Xn => {
                    let sign = if ev.op == Op::Xp {
                        CrossingSign::Positive
                    } else {
                        CrossingSign::Negative
                    };
                    let (k, n) = (strands[i], strands[i + 1]);
                    let (l, m) = (edges.add(), edges.add());
                    let id = crossings.len();
                    crossings.push(CrossingEdges {
                        sign,
                        event: t,
                        k,
                        n,
                        l,
                        m,
                    });
                    let south = gaps.add();
                    let corner = |slot| Corner { crossing: id, slot };
                    corners.push((open_gaps[i + 1], corner(AngleSlot::North)));
                    corners.push((open_gaps[i], corner(AngleSlot::West)));
                    corners.push((open_gaps[i + 2], corner(AngleSlot::East)));
                    corners.push((south, corner(AngleSlot::South)));
                    strands[i] = l;
                    strands[i + 1] = m;
                    open_gaps[i + 1] = south;
                }
                Op::CupLr | Op::CupRl => {
                    let a = edges.add();
                    let b = if ev.op == Op::CupLr {
                        let b = edges.add();
                        mus.push(MuFactor {
                            sign: CrossingSign::Positive,
                            event: t,
                            left: a,
                            right: b,
                        });
                        b
                    } else {
                        a
                    };
                    strands.splice(i..i, [a, b]);
                    let g = open_gaps[i];
                    let inner = gaps.add();
                    open_gaps.splice(i..i + 1, [g, inner, g]);
                }
                Op::CapLr | Op::CapRl => {
                    let (a, b) = (strands[i], strands[i + 1]);
                    if ev.op == Op::CapLr {
                        mus.push(MuFactor {
                            sign: CrossingSign::Negative,
                            event: t,
                            left: a,
                            right: b,
                        });
                    } else {
                        edges.union(a, b);
                    }
                    strands.drain(i..i + 2);
                    gaps.union(open_gaps[i], open_gaps[i + 2]);
                    open_gaps.drain(i + 1..i + 3);
                }
            }
        }
        let bottom = strands[0];
        let (left_gap, right_gap) = (open_gaps[0], open_gaps[1]);

        let (edge_id, edge_count) = edges.compress();
        for c in &mut crossings {
            c.k = edge_id[c.k];
            c.n = edge_id[c.n];
            c.l = edge_id[c.l];
            c.m = edge_id[c.m];
        }
        for f in &mut mus {
            f.left = edge_id[f.left];
            f.right = edge_id[f.right];
        }

        let (gap_id, region_count) = gaps.compress();
        let unbounded = [gap_id[left_gap], gap_id[right_gap]];
        let mut regions: Vec<Region> = (0..region_count)
            .map(|r| Region {
                corners: Vec::new(),
                unbounded: unbounded.contains(&r),
            })
            .collect();
        for (g, c) in corners {
            regions[gap_id[g]].corners.push(c);
        }

        Skeleton {
            edge_count,
            top: edge_id[top],
            bottom: edge_id[bottom],
            crossings,
            mus,
            regions: RegionData { regions, unbounded },
        }
    }

    /// Edges whose label is summed over (all but the two open ends).
    pub fn free_edges(&self) -> Vec<usize> {
        (0..self.edge_count)
            .filter(|&e| e != self.top && e != self.bottom)
            .collect()
    }

    pub fn check_labeling(&self, ctx: &QContext, labeling: &Labeling) -> Result<()> {
        let lab = &labeling.0;
        if lab.len() != self.edge_count {
            return Err(Error::input(format!(
                "labeling has {} entries, diagram has {} edges",
                lab.len(),
                self.edge_count
            )));
        }
        if let Some(&x) = lab.iter().find(|&&x| x >= ctx.n()) {
            return Err(Error::input(format!("label {x} outside 0..{}", ctx.n())));
        }
        if lab[self.top] != 0 || lab[self.bottom] != 0 {
            return Err(Error::input("the open ends must carry label 0"));
        }
        Ok(())
    }

    /// Product of all `R^{±1}` and `μ^{±1}` entries for a labeling.
    pub fn weight(&self, ctx: &QContext, labeling: &Labeling) -> Complex64 {
        let lab = &labeling.0;
        let mut w = Complex64::new(1.0, 0.0);
        for f in &self.mus {
            w *= mu_entry(ctx, lab[f.left], lab[f.right], f.sign);
            if w == Complex64::new(0.0, 0.0) {
                return w;
            }
        }
        for c in &self.crossings {
            w *= r_entry(ctx, lab[c.k], lab[c.n], lab[c.l], lab[c.m], c.sign);
            if w == Complex64::new(0.0, 0.0) {
                return w;
            }
        }
        w
    }

    pub fn angles(&self, ctx: &QContext, labeling: &Labeling) -> Vec<CrossingAngles> {
        let lab = &labeling.0;
        self.crossings
            .iter()
            .map(|c| crossing_angles(ctx, lab[c.k], lab[c.n], lab[c.l], lab[c.m]))
            .collect()
    }

    pub fn angle_conditions(&self, ctx: &QContext, labeling: &Labeling) -> AngleConditions {
        let angles = self.angles(ctx, labeling);
        let top = ctx.n() - 1;
        let crossing_sums = angles.iter().all(|a| a.sum() == top);
        let mut bounded_sums = true;
        let mut unbounded_zero = true;
        for r in &self.regions.regions {
            let mut vals = r.corners.iter().map(|c| c.slot.of(&angles[c.crossing]));
            if r.unbounded {
                unbounded_zero &= vals.all(|v| v == 0);
            } else if !r.corners.is_empty() {
                bounded_sums &= vals.sum::<usize>() == top;
            }
        }
        AngleConditions {
            crossing_sums,
            bounded_sums,
            unbounded_zero,
        }
    }
}

/// Edge labels indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling(pub Vec<usize>);

/// The three necessary conditions for a labeling to carry nonzero weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleConditions {
    /// Every crossing has angle sum `N - 1`.
    pub crossing_sums: bool,
    /// Every bounded region has angle sum `N - 1`.
    pub bounded_sums: bool,
    /// Every angle in the two unbounded regions is zero.
    pub unbounded_zero: bool,
}

impl AngleConditions {
    pub fn all(&self) -> bool {
        self.crossing_sums && self.bounded_sums && self.unbounded_zero
    }
}

pub fn derive_regions(d: &TangleDiagram) -> RegionData {
    Skeleton::new(d).regions
}

pub fn check_angle_conditions(
    ctx: &QContext,
    d: &TangleDiagram,
    labeling: &Labeling,
) -> Result<AngleConditions> {
    let s = Skeleton::new(d);
    s.check_labeling(ctx, labeling)?;
    Ok(s.angle_conditions(ctx, labeling))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_eight_census() {
        let d = TangleDiagram::figure_eight();
        let s = Skeleton::new(&d);
        // four crossings, two μ-extrema, open ends, identities merged
        assert_eq!(s.crossings.len(), 4);
        assert_eq!(s.mus.len(), 2);
        assert_eq!(s.free_edges().len(), 9);
        let r = &s.regions;
        // V - E + F = 2 with V = 4, E = 8
        assert_eq!(r.regions.len(), 6);
        assert_eq!(r.bounded_count(), 4);
        let corner_total: usize = r.regions.iter().map(|x| x.corners.len()).sum();
        assert_eq!(corner_total, 16);
    }

    #[test]
    fn every_corner_in_exactly_one_region() {
        for d in [TangleDiagram::figure_eight(), TangleDiagram::trefoil()] {
            let s = Skeleton::new(&d);
            let mut seen = std::collections::HashSet::new();
            for r in &s.regions.regions {
                for c in &r.corners {
                    assert!(seen.insert((c.crossing, c.slot)));
                }
            }
            assert_eq!(seen.len(), 4 * s.crossings.len());
        }
    }

    #[test]
    fn trefoil_and_kink_census() {
        let t = derive_regions(&TangleDiagram::trefoil());
        assert_eq!(t.regions.len(), 3 + 2);
        assert_eq!(t.bounded_count(), 3);
        let k = derive_regions(&TangleDiagram::kink(Op::Xp));
        assert_eq!(k.bounded_count(), 1);
        let u = derive_regions(&TangleDiagram::unknot());
        assert_eq!(u.bounded_count(), 0);
    }

    #[test]
    fn kink_all_zero_labeling() {
        let d = TangleDiagram::kink(Op::Xp);
        let s = Skeleton::new(&d);
        for n in 2..6 {
            let ctx = QContext::new(n).unwrap();
            let lab = Labeling(vec![0; s.edge_count]);
            let cond = check_angle_conditions(&ctx, &d, &lab).unwrap();
            // angles at k=n=l=m=0 are 0,0,0,[−1]; their sum is N−1
            let direct = crossing_angles(&ctx, 0, 0, 0, 0).sum() == n - 1;
            assert_eq!(cond.crossing_sums, direct);
            assert!(cond.crossing_sums);
        }
    }

    #[test]
    fn rejects_bad_labelings() {
        let d = TangleDiagram::figure_eight();
        let s = Skeleton::new(&d);
        let ctx = QContext::new(3).unwrap();
        assert!(s.check_labeling(&ctx, &Labeling(vec![0; 3])).is_err());
        assert!(s.check_labeling(&ctx, &Labeling(vec![5; s.edge_count])).is_err());
        let mut lab = vec![0; s.edge_count];
        lab[s.top] = 1;
        assert!(s.check_labeling(&ctx, &Labeling(lab)).is_err());
    }
}
