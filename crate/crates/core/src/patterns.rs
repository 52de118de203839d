//! Admissible patterns: sets of `b^m` resolution-m cells such that any
//! one-point-per-cell placement is a (0,m,d)-net.
//!
//! Includes the brute-force enumerator, the exact two-dimensional count with
//! its strip/permutation bijection, the general upper bound, and the pairwise
//! overlap census.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CellIndex, Composition, CompositionKey, Params};
use crate::logdomain::{ln_factorial, LogValue};
use crate::netcheck::witness_order;

/// A sorted set of `b^m` distinct cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    params: Params,
    cells: Vec<CellIndex>,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    b: u64,
    m: u32,
    d: usize,
    cells: Vec<Vec<u64>>,
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PatternJson {
            b: self.params.base,
            m: self.params.m,
            d: self.params.d,
            cells: self.cells.iter().map(|c| c.0.clone()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PatternJson::deserialize(d)?;
        let params = Params::new(raw.b, raw.m, raw.d).map_err(serde::de::Error::custom)?;
        Pattern::new(params, raw.cells.into_iter().map(CellIndex).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl Pattern {
    /// Sorts the cells and checks size, range and distinctness. Does not
    /// check admissibility; see [`is_admissible`].
    pub fn new(params: Params, mut cells: Vec<CellIndex>) -> Result<Self> {
        if cells.len() as u64 != params.cells_per_axis() {
            return Err(Error::InvalidInput(format!(
                "pattern needs {} cells, got {}",
                params.cells_per_axis(),
                cells.len()
            )));
        }
        for c in &cells {
            c.validate(&params)?;
        }
        cells.sort();
        if let Some(w) = cells.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("duplicate cell {:?}", w[0].0)));
        }
        Ok(Self { params, cells })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn cells(&self) -> &[CellIndex] {
        &self.cells
    }

    pub fn contains(&self, cell: &CellIndex) -> bool {
        self.cells.binary_search(cell).is_ok()
    }
}

/// Outcome of [`is_admissible`]; on failure names the composition and the
/// first pair of cells landing in the same elementary interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Collision>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub composition: Composition,
    pub first: CellIndex,
    pub second: CellIndex,
}

/// A pattern is admissible iff every composition maps its cells injectively
/// onto the `b^m` elementary intervals.
pub fn is_admissible(pat: &Pattern) -> Result<Admissibility> {
    let n = pat.params.cells_per_axis() as usize;
    for key in witness_order(&pat.params)? {
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (i, cell) in pat.cells.iter().enumerate() {
            let slot = key.slot(&cell.0);
            if let Some(j) = owner[slot] {
                return Ok(Admissibility {
                    admissible: false,
                    witness: Some(Collision {
                        composition: key.composition.clone(),
                        first: pat.cells[j].clone(),
                        second: cell.clone(),
                    }),
                });
            }
            owner[slot] = Some(i);
        }
    }
    Ok(Admissibility { admissible: true, witness: None })
}

/// Depth-first construction of admissible patterns, one cell per column of
/// the first axis, columns in increasing order and candidates within a
/// column in lexicographic order. Every admissible pattern has exactly one
/// cell per first-axis column, so visiting columns in order enumerates
/// patterns in lexicographic order of their sorted cell lists.
pub(crate) struct ColumnSearch<'a> {
    keys: Vec<CompositionKey>,
    columns: &'a [Vec<Vec<u64>>],
    used: Vec<Vec<bool>>,
    chosen: Vec<&'a [u64]>,
}

impl<'a> ColumnSearch<'a> {
    /// `columns[x]` lists the candidate cells whose first coordinate is `x`.
    pub fn new(params: &Params, columns: &'a [Vec<Vec<u64>>]) -> Result<Self> {
        debug_assert_eq!(columns.len() as u64, params.cells_per_axis());
        let keys = CompositionKey::all(params)?;
        let n = params.cells_per_axis() as usize;
        let used = vec![vec![false; n]; keys.len()];
        Ok(Self { keys, columns, used, chosen: Vec::with_capacity(n) })
    }

    /// Calls `visit` with each admissible selection until it breaks.
    pub fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[&[u64]]) -> ControlFlow<()>,
    {
        if self.columns.iter().any(Vec::is_empty) {
            return ControlFlow::Continue(());
        }
        self.step(0, visit)
    }

    fn step<F>(&mut self, column: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[&[u64]]) -> ControlFlow<()>,
    {
        if column == self.columns.len() {
            return visit(&self.chosen);
        }
        let columns = self.columns;
        let mut slots = vec![0usize; self.keys.len()];
        for cell in &columns[column] {
            let mut free = true;
            for (k, key) in self.keys.iter().enumerate() {
                slots[k] = key.slot(cell);
                if self.used[k][slots[k]] {
                    free = false;
                    break;
                }
            }
            if !free {
                continue;
            }
            for (k, &s) in slots.iter().enumerate() {
                self.used[k][s] = true;
            }
            self.chosen.push(cell);
            let flow = self.step(column + 1, visit);
            self.chosen.pop();
            for (k, &s) in slots.iter().enumerate() {
                self.used[k][s] = false;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Grid size limit for brute-force enumeration.
pub const ENUMERATION_MAX_CELLS: u64 = 4096;
/// Net-size limit for brute-force enumeration.
pub const ENUMERATION_MAX_NET_SIZE: u64 = 16;
/// Enumeration is refused when the counting bound exceeds this many patterns.
pub const ENUMERATION_MAX_PATTERNS: f64 = (1u64 << 20) as f64;

/// Checks the brute-force guard for `params`.
pub fn check_enumerable(params: &Params) -> Result<()> {
    if params.total_cells() > ENUMERATION_MAX_CELLS
        || params.cells_per_axis() > ENUMERATION_MAX_NET_SIZE
    {
        return Err(Error::TooLarge(format!(
            "enumeration needs b^(md) <= {ENUMERATION_MAX_CELLS} and b^m <= {ENUMERATION_MAX_NET_SIZE}; got b={}, m={}, d={}",
            params.base, params.m, params.d
        )));
    }
    let bound = count_patterns_upper(params);
    if bound.ln > ENUMERATION_MAX_PATTERNS.ln() + 1e-9 {
        return Err(Error::TooLarge(format!(
            "up to {:.3e} patterns at b={}, m={}, d={}; enumeration is capped at {ENUMERATION_MAX_PATTERNS}",
            bound.value(),
            params.base,
            params.m,
            params.d
        )));
    }
    Ok(())
}

/// Every cell of the grid, bucketed by first coordinate, each bucket in
/// lexicographic order.
pub(crate) fn full_columns(params: &Params) -> Vec<Vec<Vec<u64>>> {
    let side = params.cells_per_axis();
    let rest = params.total_cells() / side;
    (0..side)
        .map(|x| {
            (0..rest)
                .map(|mut code| {
                    let mut cell = vec![0u64; params.d];
                    cell[0] = x;
                    for j in (1..params.d).rev() {
                        cell[j] = code % side;
                        code /= side;
                    }
                    cell
                })
                .collect()
        })
        .collect()
}

/// All admissible patterns at `params`, lexicographically sorted.
pub fn enumerate_patterns(params: &Params) -> Result<Vec<Pattern>> {
    check_enumerable(params)?;
    let columns = full_columns(params);
    let mut search = ColumnSearch::new(params, &columns)?;
    let mut out = Vec::new();
    let _ = search.run(&mut |cells| {
        out.push(Pattern {
            params: *params,
            cells: cells.iter().map(|c| CellIndex(c.to_vec())).collect(),
        });
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// A pattern count, exact when it is cheap to materialize.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternCount {
    #[serde(serialize_with = "ser_big")]
    pub exact: Option<BigUint>,
    pub log: LogValue,
}

fn ser_big<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// Largest decimal length of an exact count.
pub const EXACT_COUNT_MAX_DIGITS: f64 = 1e6;

/// Exact number of admissible patterns for d = 2: `(b!)^(m b^(m-1))`.
pub fn count_patterns_exact_d2(base: u64, m: u32) -> Result<PatternCount> {
    if base < 2 {
        return Err(Error::InvalidParams(format!("base must be >= 2, got {base}")));
    }
    let exponent = if m == 0 { 0.0 } else { m as f64 * (base as f64).powi(m as i32 - 1) };
    let ln = exponent * ln_factorial(base);
    let digits = ln / std::f64::consts::LN_10;
    let exact = if digits <= EXACT_COUNT_MAX_DIGITS {
        let e = if m == 0 { 0 } else { m * (base.pow(m - 1) as u32) };
        let fact: BigUint = (1..=base).map(BigUint::from).product();
        Some(fact.pow(e))
    } else {
        None
    };
    Ok(PatternCount { exact, log: LogValue::from_ln(ln) })
}

/// Upper bound `(b!)^(m b^(m-1) (d-1))` on the number of admissible patterns,
/// in log domain. Zero for d = 1, where the unique pattern is every cell.
pub fn count_patterns_upper(params: &Params) -> LogValue {
    if params.m == 0 || params.d == 1 {
        return LogValue::ONE;
    }
    let exponent =
        params.m as f64 * (params.base as f64).powi(params.m as i32 - 1) * (params.d - 1) as f64;
    LogValue::from_ln(exponent * ln_factorial(params.base))
}

/// An order-m two-dimensional pattern split into `b` vertical strips (each an
/// order-(m-1) pattern after rescaling) and one permutation per row giving
/// the last y-digit of each strip's cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StripDecomposition {
    pub base: u64,
    /// Order of the composed pattern; the strips have order `m - 1`.
    pub m: u32,
    pub subpatterns: Vec<Pattern>,
    /// `perms[row][strip]` is the last y-digit of strip `strip` in `row`.
    pub perms: Vec<Vec<u64>>,
}

impl StripDecomposition {
    fn validate(&self) -> Result<Params> {
        if self.m == 0 {
            return Err(Error::InvalidInput("strip decomposition needs m >= 1".into()));
        }
        let sub_params = Params::new(self.base, self.m - 1, 2)?;
        let target = Params::new(self.base, self.m, 2)?;
        if self.subpatterns.len() as u64 != self.base {
            return Err(Error::InvalidInput(format!(
                "expected {} strips, got {}",
                self.base,
                self.subpatterns.len()
            )));
        }
        for (k, sub) in self.subpatterns.iter().enumerate() {
            if sub.params != sub_params {
                return Err(Error::InvalidInput(format!(
                    "strip {k} has order {} dimension {}, expected order {} dimension 2",
                    sub.params.m, sub.params.d, sub_params.m
                )));
            }
            if !is_admissible(sub)?.admissible {
                return Err(Error::InvalidInput(format!("strip {k} is not admissible")));
            }
        }
        if self.perms.len() as u64 != sub_params.cells_per_axis() {
            return Err(Error::InvalidInput(format!(
                "expected {} row permutations, got {}",
                sub_params.cells_per_axis(),
                self.perms.len()
            )));
        }
        for (r, perm) in self.perms.iter().enumerate() {
            let mut seen = vec![false; self.base as usize];
            let ok = perm.len() as u64 == self.base
                && perm.iter().all(|&v| {
                    v < self.base && !std::mem::replace(&mut seen[v as usize], true)
                });
            if !ok {
                return Err(Error::InvalidInput(format!("row {r} permutation {perm:?} is not a bijection")));
            }
        }
        Ok(target)
    }
}

/// Builds the order-m pattern from its strip decomposition: strip `k`'s cell
/// `(x, y)` becomes `(k b^(m-1) + x, y b + perms[y][k])`.
pub fn lps_compose(dec: &StripDecomposition) -> Result<Pattern> {
    let target = dec.validate()?;
    let width = target.pow(target.m - 1);
    let mut cells = Vec::with_capacity(target.cells_per_axis() as usize);
    for (k, sub) in dec.subpatterns.iter().enumerate() {
        for cell in &sub.cells {
            let (x, y) = (cell.0[0], cell.0[1]);
            cells.push(CellIndex(vec![
                k as u64 * width + x,
                y * dec.base + dec.perms[y as usize][k],
            ]));
        }
    }
    Pattern::new(target, cells)
}

/// Inverse of [`lps_compose`].
pub fn lps_decompose(pat: &Pattern) -> Result<StripDecomposition> {
    let params = pat.params;
    if params.d != 2 || params.m == 0 {
        return Err(Error::InvalidInput("strip decomposition needs d = 2 and m >= 1".into()));
    }
    if !is_admissible(pat)?.admissible {
        return Err(Error::InvalidInput("pattern is not admissible".into()));
    }
    let base = params.base;
    let sub_params = Params::new(base, params.m - 1, 2)?;
    let width = sub_params.cells_per_axis();
    let mut strips: Vec<Vec<CellIndex>> = vec![Vec::new(); base as usize];
    let mut perms = vec![vec![0u64; base as usize]; width as usize];
    for cell in &pat.cells {
        let (x, y) = (cell.0[0], cell.0[1]);
        let k = (x / width) as usize;
        strips[k].push(CellIndex(vec![x % width, y / base]));
        perms[(y / base) as usize][k] = y % base;
    }
    let subpatterns = strips
        .into_iter()
        .map(|cells| Pattern::new(sub_params, cells))
        .collect::<Result<Vec<_>>>()?;
    Ok(StripDecomposition { base, m: params.m, subpatterns, perms })
}

fn permutations(n: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Every strip decomposition at order `m >= 1`, built from the enumerated
/// order-(m-1) family and all row permutations.
pub fn strip_decompositions(base: u64, m: u32) -> Result<Vec<StripDecomposition>> {
    if m == 0 {
        return Err(Error::InvalidInput("strip decomposition needs m >= 1".into()));
    }
    let sub_params = Params::new(base, m - 1, 2)?;
    let family = enumerate_patterns(&sub_params)?;
    let perms = permutations(base);
    let rows = sub_params.cells_per_axis() as usize;
    let strips = base as usize;
    let total = (family.len() as f64).powi(strips as i32) * (perms.len() as f64).powi(rows as i32);
    if total > ENUMERATION_MAX_PATTERNS {
        return Err(Error::TooLarge(format!("{total:.3e} strip decompositions")));
    }
    let mut out = Vec::new();
    let mut sub_idx = vec![0usize; strips];
    loop {
        let mut perm_idx = vec![0usize; rows];
        loop {
            out.push(StripDecomposition {
                base,
                m,
                subpatterns: sub_idx.iter().map(|&i| family[i].clone()).collect(),
                perms: perm_idx.iter().map(|&i| perms[i].clone()).collect(),
            });
            if !odometer(&mut perm_idx, perms.len()) {
                break;
            }
        }
        if !odometer(&mut sub_idx, family.len()) {
            break;
        }
    }
    Ok(out)
}

fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Projects a pattern onto two coordinate axes.
pub fn project_pattern(pat: &Pattern, axes: (usize, usize)) -> Result<Pattern> {
    let (i, j) = axes;
    let d = pat.params.d;
    if d < 2 || i == j || i >= d || j >= d {
        return Err(Error::InvalidInput(format!("invalid projection axes {axes:?} for d = {d}")));
    }
    let params = Params::new(pat.params.base, pat.params.m, 2)?;
    let cells = pat.cells.iter().map(|c| CellIndex(vec![c.0[i], c.0[j]])).collect();
    Pattern::new(params, cells)
}

/// Pairwise overlap statistics of a pattern family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverlapCensus {
    pub b: u64,
    pub m: u32,
    pub d: usize,
    /// Number of patterns.
    pub a: u64,
    /// `n_ell[l]`: number of unordered pattern pairs sharing exactly `l` cells.
    pub n_ell: Vec<u64>,
    /// Smallest and largest number of patterns containing a given cell.
    pub multiplicity_min: u64,
    pub multiplicity_max: u64,
    pub multiplicity_constant: bool,
    /// `A b^m / b^(md)`, the multiplicity if every cell is equally covered.
    pub multiplicity_expected: f64,
    /// Sum over cells of `binomial(multiplicity, 2)`.
    pub q: u64,
    /// `A^2/2 (1 - b^(-m(d-2))) + A/2 (b^m - 1)`.
    pub n0_lower_bound: f64,
}

/// Largest family accepted by [`overlap_census`].
pub const CENSUS_MAX_PATTERNS: usize = 1 << 13;

/// Computes the overlap census of a pattern family sharing one `(b, m, d)`.
pub fn overlap_census(patterns: &[Pattern]) -> Result<OverlapCensus> {
    let first = patterns
        .first()
        .ok_or_else(|| Error::InvalidInput("empty pattern family".into()))?;
    let params = first.params;
    if patterns.iter().any(|p| p.params != params) {
        return Err(Error::InvalidInput("patterns have mixed parameters".into()));
    }
    check_enumerable(&params)?;
    if patterns.len() > CENSUS_MAX_PATTERNS {
        return Err(Error::TooLarge(format!(
            "census over {} patterns exceeds {CENSUS_MAX_PATTERNS}",
            patterns.len()
        )));
    }
    let side = params.cells_per_axis();
    let total = params.total_cells() as usize;
    let words = total.div_ceil(64);
    let flat = |c: &CellIndex| c.0.iter().fold(0u64, |acc, &a| acc * side + a) as usize;
    let bitsets: Vec<Vec<u64>> = patterns
        .iter()
        .map(|p| {
            let mut bits = vec![0u64; words];
            for c in &p.cells {
                let f = flat(c);
                bits[f / 64] |= 1 << (f % 64);
            }
            bits
        })
        .collect();

    let len = side as usize + 1;
    let n_ell = (0..bitsets.len())
        .into_par_iter()
        .map(|i| {
            let mut local = vec![0u64; len];
            for j in i + 1..bitsets.len() {
                let shared: u32 = bitsets[i]
                    .iter()
                    .zip(&bitsets[j])
                    .map(|(x, y)| (x & y).count_ones())
                    .sum();
                local[shared as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let mut per_cell = vec![0u64; total];
    for p in patterns {
        for c in &p.cells {
            per_cell[flat(c)] += 1;
        }
    }
    let multiplicity_min = per_cell.iter().copied().min().unwrap_or(0);
    let multiplicity_max = per_cell.iter().copied().max().unwrap_or(0);
    let q = per_cell.iter().map(|&k| k * k.saturating_sub(1) / 2).sum();

    let a = patterns.len() as u64;
    let af = a as f64;
    let net = side as f64;
    let shrink = (params.base as f64).powf(-(params.m as f64) * (params.d as f64 - 2.0));
    Ok(OverlapCensus {
        b: params.base,
        m: params.m,
        d: params.d,
        a,
        n_ell,
        multiplicity_min,
        multiplicity_max,
        multiplicity_constant: multiplicity_min == multiplicity_max,
        multiplicity_expected: af * net / params.total_cells() as f64,
        q,
        n0_lower_bound: af * af / 2.0 * (1.0 - shrink) + af / 2.0 * (net - 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(b: u64, m: u32, d: usize, cells: &[&[u64]]) -> Pattern {
        let params = Params::new(b, m, d).unwrap();
        Pattern::new(params, cells.iter().map(|c| CellIndex(c.to_vec())).collect()).unwrap()
    }

    fn cells_of(p: &Pattern) -> Vec<Vec<u64>> {
        p.cells().iter().map(|c| c.0.clone()).collect()
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&pat(2, 1, 2, &[&[0, 0], &[1, 1]])).unwrap().admissible);
        let bad = is_admissible(&pat(2, 1, 2, &[&[0, 0], &[0, 1]])).unwrap();
        assert!(!bad.admissible);
        assert_eq!(bad.witness.unwrap().composition, Composition(vec![1, 0]));
        assert!(is_admissible(&pat(2, 1, 3, &[&[0, 0, 0], &[1, 1, 1]])).unwrap().admissible);
    }

    #[test]
    fn pattern_rejects_bad_cells() {
        let params = Params::new(2, 1, 2).unwrap();
        assert!(Pattern::new(params, vec![CellIndex(vec![0, 0])]).is_err());
        assert!(Pattern::new(params, vec![CellIndex(vec![0, 0]), CellIndex(vec![0, 0])]).is_err());
        assert!(Pattern::new(params, vec![CellIndex(vec![0, 0]), CellIndex(vec![2, 0])]).is_err());
    }

    /// Independent oracle: test every b^m-subset of the grid for admissibility.
    fn brute_force_count(params: &Params) -> usize {
        let all: Vec<CellIndex> = full_columns(params).into_iter().flatten().map(CellIndex).collect();
        let k = params.cells_per_axis() as usize;
        let mut count = 0;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let p = Pattern::new(*params, idx.iter().map(|&i| all[i].clone()).collect()).unwrap();
            if is_admissible(&p).unwrap().admissible {
                count += 1;
            }
            // next k-combination
            let n = all.len();
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return count;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    #[test]
    fn enumeration_matches_subset_oracle() {
        for (b, m, d) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2), (2, 1, 1), (2, 2, 1)] {
            let params = Params::new(b, m, d).unwrap();
            let got = enumerate_patterns(&params).unwrap();
            assert_eq!(got.len(), brute_force_count(&params), "{b} {m} {d}");
            assert!(got.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn enumeration_examples() {
        let p = enumerate_patterns(&Params::new(2, 1, 2).unwrap()).unwrap();
        assert_eq!(
            p.iter().map(cells_of).collect::<Vec<_>>(),
            vec![vec![vec![0, 0], vec![1, 1]], vec![vec![0, 1], vec![1, 0]]]
        );
        assert_eq!(enumerate_patterns(&Params::new(2, 1, 3).unwrap()).unwrap().len(), 4);
        assert_eq!(enumerate_patterns(&Params::new(3, 1, 2).unwrap()).unwrap().len(), 6);
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(
            enumerate_patterns(&Params::new(2, 5, 2).unwrap()),
            Err(Error::TooLarge(_))
        ));
        assert!(matches!(
            enumerate_patterns(&Params::new(2, 4, 2).unwrap()),
            Err(Error::TooLarge(_))
        ));
        assert!(matches!(
            enumerate_patterns(&Params::new(2, 1, 13).unwrap()),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn exact_d2_counts() {
        let c = |b, m| count_patterns_exact_d2(b, m).unwrap().exact.unwrap();
        assert_eq!(c(2, 1), BigUint::from(2u32));
        assert_eq!(c(2, 2), BigUint::from(16u32));
        assert_eq!(c(2, 0), BigUint::from(1u32));
        assert_eq!(c(3, 1), BigUint::from(6u32));
        let big = count_patterns_exact_d2(5, 12).unwrap();
        assert!(big.exact.is_none());
        assert!(big.log.ln > 0.0);
        for (b, m) in [(2, 1), (2, 2), (3, 1), (2, 3)] {
            let n = enumerate_patterns(&Params::new(b, m, 2).unwrap()).unwrap().len();
            assert_eq!(c(b, m), BigUint::from(n));
        }
    }

    #[test]
    fn upper_bound_examples() {
        let ub = |b, m, d| count_patterns_upper(&Params::new(b, m, d).unwrap()).ln;
        assert!((ub(2, 1, 3) - 4f64.ln()).abs() < 1e-12);
        assert!((ub(2, 2, 2) - 16f64.ln()).abs() < 1e-12);
        assert_eq!(ub(3, 4, 1), 0.0);
    }

    #[test]
    fn compose_examples() {
        let unit = pat(2, 0, 2, &[&[0, 0]]);
        let dec = StripDecomposition { base: 2, m: 1, subpatterns: vec![unit.clone(), unit.clone()], perms: vec![vec![0, 1]] };
        assert_eq!(cells_of(&lps_compose(&dec).unwrap()), vec![vec![0, 0], vec![1, 1]]);
        let swapped = StripDecomposition { perms: vec![vec![1, 0]], ..dec.clone() };
        assert_eq!(cells_of(&lps_compose(&swapped).unwrap()), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(lps_decompose(&pat(2, 1, 2, &[&[0, 0], &[1, 1]])).unwrap(), dec);
        assert_eq!(lps_decompose(&pat(2, 1, 2, &[&[0, 1], &[1, 0]])).unwrap(), swapped);

        let bad = StripDecomposition { perms: vec![vec![0, 0]], ..dec.clone() };
        assert!(lps_compose(&bad).is_err());
        let short = StripDecomposition { subpatterns: vec![unit], ..dec };
        assert!(lps_compose(&short).is_err());
        assert!(lps_decompose(&pat(2, 1, 2, &[&[0, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn compose_regenerates_families() {
        for (b, m) in [(2, 1), (2, 2), (3, 1), (2, 3)] {
            let family = enumerate_patterns(&Params::new(b, m, 2).unwrap()).unwrap();
            let mut composed: Vec<Pattern> = strip_decompositions(b, m)
                .unwrap()
                .iter()
                .map(|dec| {
                    let p = lps_compose(dec).unwrap();
                    assert_eq!(&lps_decompose(&p).unwrap(), dec);
                    p
                })
                .collect();
            composed.sort();
            assert_eq!(composed, family, "b={b} m={m}");
        }
    }

    #[test]
    fn projection_examples() {
        let p = pat(2, 1, 3, &[&[0, 0, 0], &[1, 1, 1]]);
        assert_eq!(cells_of(&project_pattern(&p, (0, 1)).unwrap()), vec![vec![0, 0], vec![1, 1]]);
        let q = pat(2, 1, 3, &[&[0, 1, 0], &[1, 0, 1]]);
        assert_eq!(cells_of(&project_pattern(&q, (1, 2)).unwrap()), vec![vec![0, 1], vec![1, 0]]);
        assert!(project_pattern(&q, (1, 1)).is_err());
        for (b, m, d) in [(2, 1, 3), (2, 2, 3), (3, 1, 3)] {
            for p in enumerate_patterns(&Params::new(b, m, d).unwrap()).unwrap() {
                for axes in [(0, 1), (0, 2), (1, 2), (2, 0)] {
                    assert!(is_admissible(&project_pattern(&p, axes).unwrap()).unwrap().admissible);
                }
            }
        }
    }

    #[test]
    fn census_examples() {
        let c = overlap_census(&enumerate_patterns(&Params::new(2, 1, 2).unwrap()).unwrap()).unwrap();
        assert_eq!((c.a, c.n_ell.clone(), c.q), (2, vec![1, 0, 0], 0));
        assert!(c.multiplicity_constant && c.multiplicity_min == 1);
        assert!((c.n0_lower_bound - 1.0).abs() < 1e-12);

        let c = overlap_census(&enumerate_patterns(&Params::new(2, 1, 3).unwrap()).unwrap()).unwrap();
        assert_eq!((c.a, c.n_ell[0], c.q, c.multiplicity_min), (4, 6, 0, 1));
        assert!(overlap_census(&[]).is_err());
    }

    #[test]
    fn census_identities() {
        for (b, m, d) in [(2, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 2), (2, 2, 3), (3, 1, 3), (2, 3, 2)] {
            let params = Params::new(b, m, d).unwrap();
            let fam = enumerate_patterns(&params).unwrap();
            let c = overlap_census(&fam).unwrap();
            let a = c.a;
            assert_eq!(c.n_ell.iter().sum::<u64>(), a * (a - 1) / 2);
            let weighted: u64 = c.n_ell.iter().enumerate().map(|(l, &n)| l as u64 * n).sum();
            assert_eq!(c.q, weighted);
            assert!(c.multiplicity_constant, "{b} {m} {d}");
            assert_eq!(c.multiplicity_min as f64, c.multiplicity_expected);
            assert!(c.n_ell[0] as f64 >= c.n0_lower_bound - 1e-9);
        }
    }

    #[test]
    fn pattern_json() {
        let p = pat(2, 1, 2, &[&[1, 1], &[0, 0]]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"b":2,"m":1,"d":2,"cells":[[0,0],[1,1]]}"#);
        assert_eq!(serde_json::from_str::<Pattern>(&s).unwrap(), p);
        assert!(serde_json::from_str::<Pattern>(r#"{"b":2,"m":1,"d":2,"cells":[[0,0]]}"#).is_err());
    }
}
