//! Net verification and exact star discrepancy.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{cell_of_point, Composition, CompositionKey, Params, PointSet};

/// Why a point set failed the net test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The set does not have exactly `b^m` points.
    Size { expected: u64, found: usize },
    /// An elementary interval of volume `b^-m` holds `count != 1` points.
    Interval { composition: Composition, offsets: Vec<u64>, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetCheck {
    pub is_net: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

/// Compositions in the order witnesses are searched: reverse lexicographic,
/// so `(m, 0, .., 0)` (the finest split of the first axis) is tried first.
pub(crate) fn witness_order(params: &Params) -> Result<Vec<CompositionKey>> {
    let mut keys = CompositionKey::all(params)?;
    keys.reverse();
    Ok(keys)
}

/// Decides whether `points` is a (0,m,d)-net in base `b`.
///
/// Coincident points are counted separately, so any duplicate makes the
/// answer `false` once `m >= 1`.
pub fn is_net(points: &PointSet, params: &Params) -> Result<NetCheck> {
    if points.d != params.d {
        return Err(Error::InvalidInput(format!(
            "point set has dimension {}, expected {}",
            points.d, params.d
        )));
    }
    let n = params.cells_per_axis();
    if points.len() as u64 != n {
        return Ok(NetCheck {
            is_net: false,
            violation: Some(Violation::Size { expected: n, found: points.len() }),
        });
    }
    let cells = points
        .points
        .iter()
        .map(|p| cell_of_point(p, params))
        .collect::<Result<Vec<_>>>()?;

    let mut counts = vec![0usize; n as usize];
    for key in witness_order(params)? {
        counts.iter_mut().for_each(|c| *c = 0);
        for cell in &cells {
            counts[key.slot(&cell.0)] += 1;
        }
        if let Some(slot) = counts.iter().position(|&c| c != 1) {
            let count = counts[slot];
            let offsets = unflatten(slot as u64, &key.composition, params);
            return Ok(NetCheck {
                is_net: false,
                violation: Some(Violation::Interval {
                    composition: key.composition,
                    offsets,
                    count,
                }),
            });
        }
    }
    Ok(NetCheck { is_net: true, violation: None })
}

fn unflatten(mut slot: u64, c: &Composition, params: &Params) -> Vec<u64> {
    let mut offsets = vec![0; c.dim()];
    for (j, &cj) in c.0.iter().enumerate().rev() {
        let radix = params.pow(cj);
        offsets[j] = slot % radix;
        slot /= radix;
    }
    offsets
}

/// Largest `(n+1)^d` accepted by [`star_discrepancy`].
pub const DISCREPANCY_GRID_LIMIT: u64 = 1 << 25;

/// Exact star discrepancy over anchored half-open boxes `[0, y)`.
///
/// Evaluates every node of the critical grid (each axis: the point
/// coordinates and 1), using the strict count for the volume-excess side and
/// the inclusive count for the count-excess side.
pub fn star_discrepancy(points: &PointSet) -> Result<f64> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidInput("star discrepancy of an empty set".into()));
    }
    let d = points.d;
    let grid_nodes = (n as u64 + 1).checked_pow(d as u32);
    if !grid_nodes.is_some_and(|g| g <= DISCREPANCY_GRID_LIMIT) {
        return Err(Error::TooLarge(format!(
            "exact discrepancy of {n} points in dimension {d} exceeds the grid limit of {DISCREPANCY_GRID_LIMIT} nodes"
        )));
    }
    for p in &points.points {
        p.validate()?;
    }

    let axes: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut vals: Vec<f64> = points.points.iter().map(|p| p.coords[j]).collect();
            vals.push(1.0);
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            vals
        })
        .collect();

    // Sorted by the last coordinate so filtered sublists stay sorted.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points.points[a].coords[d - 1].total_cmp(&points.points[b].coords[d - 1]));

    let sweep = Sweep { points, axes: &axes, n: n as f64 };
    Ok(sweep.descend(0, &order, &order, 1.0).clamp(0.0, 1.0))
}

struct Sweep<'a> {
    points: &'a PointSet,
    axes: &'a [Vec<f64>],
    n: f64,
}

impl Sweep<'_> {
    fn coord(&self, i: usize, axis: usize) -> f64 {
        self.points.points[i].coords[axis]
    }

    fn descend(&self, axis: usize, open: &[usize], closed: &[usize], vol: f64) -> f64 {
        let last = self.axes.len() - 1;
        if axis == last {
            return self.last_axis(open, closed, vol);
        }
        let mut worst = 0.0f64;
        let mut open_next = Vec::with_capacity(open.len());
        let mut closed_next = Vec::with_capacity(closed.len());
        for &v in &self.axes[axis] {
            open_next.clear();
            closed_next.clear();
            open_next.extend(open.iter().copied().filter(|&i| self.coord(i, axis) < v));
            closed_next.extend(closed.iter().copied().filter(|&i| self.coord(i, axis) <= v));
            worst = worst.max(self.descend(axis + 1, &open_next, &closed_next, vol * v));
        }
        worst
    }

    fn last_axis(&self, open: &[usize], closed: &[usize], vol: f64) -> f64 {
        let axis = self.axes.len() - 1;
        let (mut o, mut c) = (0usize, 0usize);
        let mut worst = 0.0f64;
        for &v in &self.axes[axis] {
            while o < open.len() && self.coord(open[o], axis) < v {
                o += 1;
            }
            while c < closed.len() && self.coord(closed[c], axis) <= v {
                c += 1;
            }
            let box_vol = vol * v;
            worst = worst.max(box_vol - o as f64 / self.n).max(c as f64 / self.n - box_vol);
        }
        worst
    }
}
