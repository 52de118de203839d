//! Deciding whether a finite point set contains a (0,m,d)-net as a subset.
//!
//! A subset exists iff some admissible pattern has every cell occupied; one
//! point per cell then forms the net. Ties are broken deterministically: the
//! lexicographically first pattern, and the lowest-index point in each cell.

use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{cell_of_point, CellIndex, Params, PointSet};
use crate::patterns::{check_enumerable, enumerate_patterns, ColumnSearch, Pattern};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Scan the enumerated pattern family; only within the enumeration guard.
    Enumerate,
    /// Depth-first search over occupied cells.
    Backtrack,
    /// `Enumerate` within its guard, else `Backtrack`.
    #[default]
    Auto,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" => Ok(Self::Enumerate),
            "backtrack" => Ok(Self::Backtrack),
            "auto" => Ok(Self::Auto),
            other => Err(Error::InvalidInput(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Bucket each point into its resolution-m cell; lists keep input order.
pub fn occupied_cells(points: &PointSet, params: &Params) -> Result<BTreeMap<CellIndex, Vec<usize>>> {
    let mut map: BTreeMap<CellIndex, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.points.iter().enumerate() {
        map.entry(cell_of_point(p, params)?).or_default().push(i);
    }
    Ok(map)
}

/// A net found inside a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetSubset {
    pub pattern: Pattern,
    /// Lowest-index point of each pattern cell, in the pattern's cell order.
    pub point_indices: Vec<usize>,
}

/// `{"found":true,"pattern":[[...]],"point_indices":[...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResultJson {
    pub found: bool,
    pub pattern: Vec<Vec<u64>>,
    pub point_indices: Vec<usize>,
}

impl From<Option<&NetSubset>> for SearchResultJson {
    fn from(found: Option<&NetSubset>) -> Self {
        match found {
            Some(s) => Self {
                found: true,
                pattern: s.pattern.cells().iter().map(|c| c.0.clone()).collect(),
                point_indices: s.point_indices.clone(),
            },
            None => Self { found: false, pattern: Vec::new(), point_indices: Vec::new() },
        }
    }
}

/// Reusable searcher; the `Enumerate` strategy enumerates the pattern family
/// once up front.
#[derive(Clone, Debug)]
pub struct NetSearcher {
    params: Params,
    family: Option<Vec<Pattern>>,
}

impl NetSearcher {
    pub fn new(params: Params, strategy: Strategy) -> Result<Self> {
        let family = match strategy {
            Strategy::Backtrack => None,
            Strategy::Enumerate => Some(enumerate_patterns(&params)?),
            Strategy::Auto => match check_enumerable(&params) {
                Ok(()) => Some(enumerate_patterns(&params)?),
                Err(_) => None,
            },
        };
        Ok(Self { params, family })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// The strategy actually in use.
    pub fn strategy(&self) -> Strategy {
        if self.family.is_some() {
            Strategy::Enumerate
        } else {
            Strategy::Backtrack
        }
    }

    pub fn find(&self, points: &PointSet) -> Result<Option<NetSubset>> {
        if points.d != self.params.d {
            return Err(Error::InvalidInput(format!(
                "point set has dimension {}, expected {}",
                points.d, self.params.d
            )));
        }
        let occupied = occupied_cells(points, &self.params)?;
        if (occupied.len() as u64) < self.params.cells_per_axis() {
            return Ok(None);
        }
        let pattern = match &self.family {
            Some(family) => scan_family(family, &occupied),
            None => backtrack(&self.params, &occupied)?,
        };
        Ok(pattern.map(|pattern| {
            let point_indices = pattern.cells().iter().map(|c| occupied[c][0]).collect();
            NetSubset { pattern, point_indices }
        }))
    }
}

fn scan_family(family: &[Pattern], occupied: &BTreeMap<CellIndex, Vec<usize>>) -> Option<Pattern> {
    let keys: HashSet<&CellIndex> = occupied.keys().collect();
    family
        .iter()
        .find(|p| p.cells().iter().all(|c| keys.contains(c)))
        .cloned()
}

fn backtrack(params: &Params, occupied: &BTreeMap<CellIndex, Vec<usize>>) -> Result<Option<Pattern>> {
    let mut columns: Vec<Vec<Vec<u64>>> = vec![Vec::new(); params.cells_per_axis() as usize];
    // BTreeMap iteration is lexicographic, so each column stays sorted
    for cell in occupied.keys() {
        columns[cell.0[0] as usize].push(cell.0.clone());
    }
    let mut search = ColumnSearch::new(params, &columns)?;
    let mut found = None;
    let _ = search.run(&mut |cells| {
        found = Some(cells.iter().map(|c| CellIndex(c.to_vec())).collect::<Vec<_>>());
        ControlFlow::Break(())
    });
    found.map(|cells| Pattern::new(*params, cells)).transpose()
}

pub fn find_net_subset(points: &PointSet, params: &Params, strategy: Strategy) -> Result<Option<NetSubset>> {
    NetSearcher::new(*params, strategy)?.find(points)
}
