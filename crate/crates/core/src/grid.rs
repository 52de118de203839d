//! b-adic grid arithmetic: compositions, elementary intervals, cell
//! indexing and point-to-cell mapping.
//!
//! All intervals are half-open, `[lo, hi)`. A coordinate equal to `1.0` is
//! rejected rather than clamped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base, order and dimension of a net problem.
///
/// The constructor guarantees that both `base^m` (cells per axis) and
/// `base^(m*d)` (total cells) fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    pub base: u64,
    pub m: u32,
    pub d: usize,
    #[serde(skip)]
    per_axis: u64,
    #[serde(skip)]
    total: u64,
}

impl Params {
    pub fn new(base: u64, m: u32, d: usize) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParams(format!("base must be >= 2, got {base}")));
        }
        if d == 0 {
            return Err(Error::InvalidParams("dimension must be >= 1".into()));
        }
        let per_axis = base.checked_pow(m).ok_or_else(|| {
            Error::InvalidParams(format!("{base}^{m} does not fit in 64 bits"))
        })?;
        let total = u32::try_from(d)
            .ok()
            .and_then(|d32| m.checked_mul(d32))
            .and_then(|e| base.checked_pow(e))
            .ok_or_else(|| {
                Error::InvalidParams(format!("{base}^({m}*{d}) does not fit in 64 bits"))
            })?;
        Ok(Self { base, m, d, per_axis, total })
    }

    /// `base^m`: number of grid cells along one axis, and the size of a net.
    pub fn cells_per_axis(&self) -> u64 {
        self.per_axis
    }

    /// `base^(m*d)`: number of resolution-m sub-cubes.
    pub fn total_cells(&self) -> u64 {
        self.total
    }

    /// `base^k` for `k <= m`.
    pub fn pow(&self, k: u32) -> u64 {
        debug_assert!(k <= self.m);
        self.base.pow(k)
    }
}

/// A d-vector of non-negative integers summing to `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `binomial(n, k)` with an overflow check.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// All compositions of `m` into `d` non-negative parts, in lexicographic order.
pub fn compositions(m: u32, d: usize) -> Result<Vec<Composition>> {
    if d == 0 {
        return Err(Error::InvalidParams("dimension must be >= 1".into()));
    }
    let count = binomial_u64(u64::from(m) + d as u64 - 1, d as u64 - 1).ok_or_else(|| {
        Error::TooLarge(format!("number of compositions of {m} into {d} parts overflows"))
    })?;
    let count = usize::try_from(count)
        .map_err(|_| Error::TooLarge("composition count exceeds address space".into()))?;
    let mut out = Vec::with_capacity(count);
    let mut current = vec![0u32; d];
    fill_compositions(m, 0, &mut current, &mut out);
    Ok(out)
}

fn fill_compositions(rest: u32, pos: usize, current: &mut [u32], out: &mut Vec<Composition>) {
    if pos + 1 == current.len() {
        current[pos] = rest;
        out.push(Composition(current.to_vec()));
        return;
    }
    for v in 0..=rest {
        current[pos] = v;
        fill_compositions(rest - v, pos + 1, current, out);
    }
}

/// A resolution-m sub-cube, given by its integer offsets along each axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellIndex(pub Vec<u64>);

impl CellIndex {
    pub fn validate(&self, params: &Params) -> Result<()> {
        if self.0.len() != params.d {
            return Err(Error::InvalidInput(format!(
                "cell has dimension {}, expected {}",
                self.0.len(),
                params.d
            )));
        }
        if let Some(a) = self.0.iter().find(|&&a| a >= params.cells_per_axis()) {
            return Err(Error::InvalidInput(format!(
                "cell offset {a} out of range [0, {})",
                params.cells_per_axis()
            )));
        }
        Ok(())
    }
}

/// The box `prod_j [a_j / b^c_j, (a_j + 1) / b^c_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementaryInterval {
    pub composition: Composition,
    pub offsets: Vec<u64>,
}

impl ElementaryInterval {
    /// Per-axis `(lo, hi)` bounds as floats.
    pub fn bounds(&self, base: u64) -> Vec<(f64, f64)> {
        self.composition
            .0
            .iter()
            .zip(&self.offsets)
            .map(|(&c, &a)| {
                let width = (base as f64).powi(-(c as i32));
                (a as f64 * width, (a + 1) as f64 * width)
            })
            .collect()
    }

    pub fn contains(&self, base: u64, x: &[f64]) -> bool {
        self.bounds(base)
            .iter()
            .zip(x)
            .all(|(&(lo, hi), &v)| lo <= v && v < hi)
    }
}

/// An exact b-adic coordinate `numerator / base^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BAdic {
    pub numerator: u64,
    pub exponent: u32,
}

impl BAdic {
    pub fn to_f64(self, base: u64) -> f64 {
        self.numerator as f64 / (base as f64).powi(self.exponent as i32)
    }

    /// `floor(value * base^m)` by integer digit arithmetic.
    pub fn floor_scaled(self, base: u64, m: u32) -> Option<u64> {
        if self.exponent <= m {
            base.checked_pow(m - self.exponent)?.checked_mul(self.numerator)
        } else {
            // the scale may not fit in u64 even though the quotient is small
            let scale = (base as u128).checked_pow(self.exponent - m)?;
            Some((u128::from(self.numerator) / scale) as u64)
        }
    }
}

/// Exact b-adic form of every coordinate of a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactCoords {
    pub base: u64,
    pub coords: Vec<BAdic>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub coords: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactCoords>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords, exact: None }
    }

    /// Builds a point from exact b-adic coordinates; the float form is derived.
    pub fn exact(base: u64, coords: Vec<BAdic>) -> Self {
        let floats = coords.iter().map(|c| c.to_f64(base)).collect();
        Self { coords: floats, exact: Some(ExactCoords { base, coords }) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(x) = self.coords.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::InvalidInput(format!("coordinate {x} outside [0,1)")));
        }
        if let Some(exact) = &self.exact {
            if exact.coords.len() != self.coords.len() {
                return Err(Error::InvalidInput("exact form has wrong dimension".into()));
            }
            for c in &exact.coords {
                let denom = exact.base.checked_pow(c.exponent);
                if !denom.is_some_and(|den| c.numerator < den) {
                    return Err(Error::InvalidInput(format!(
                        "exact coordinate {}/{}^{} outside [0,1)",
                        c.numerator, exact.base, c.exponent
                    )));
                }
            }
        }
        Ok(())
    }
}

/// An ordered list of points sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    pub d: usize,
    pub points: Vec<Point>,
}

impl PointSet {
    pub fn new(d: usize, points: Vec<Point>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.dim() != d {
                return Err(Error::InvalidInput(format!(
                    "point {i} has dimension {}, expected {d}",
                    p.dim()
                )));
            }
            p.validate()?;
        }
        Ok(Self { d, points })
    }

    /// Convenience constructor from raw float coordinates.
    pub fn from_coords(d: usize, coords: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(d, coords.into_iter().map(Point::new).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Maps a point to its resolution-m sub-cube.
///
/// Exact b-adic coordinates in the same base are mapped by integer
/// arithmetic; otherwise `floor(x * b^m)` clamped to `b^m - 1`.
pub fn cell_of_point(p: &Point, params: &Params) -> Result<CellIndex> {
    if p.dim() != params.d {
        return Err(Error::InvalidInput(format!(
            "point has dimension {}, expected {}",
            p.dim(),
            params.d
        )));
    }
    p.validate()?;
    let per_axis = params.cells_per_axis();
    if let Some(exact) = p.exact.as_ref().filter(|e| e.base == params.base) {
        let cell = exact
            .coords
            .iter()
            .map(|c| {
                c.floor_scaled(params.base, params.m)
                    .filter(|&a| a < per_axis)
                    .ok_or_else(|| Error::InvalidInput("exact coordinate out of range".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(CellIndex(cell));
    }
    let scale = per_axis as f64;
    Ok(CellIndex(
        p.coords
            .iter()
            .map(|&x| ((x * scale).floor() as u64).min(per_axis - 1))
            .collect(),
    ))
}

/// The elementary interval of composition `c` containing the given cell.
pub fn interval_of_cell(
    cell: &CellIndex,
    c: &Composition,
    params: &Params,
) -> Result<ElementaryInterval> {
    cell.validate(params)?;
    if c.dim() != params.d || c.order() != params.m {
        return Err(Error::InvalidInput(format!(
            "composition {:?} does not match m={}, d={}",
            c.0, params.m, params.d
        )));
    }
    let offsets = cell
        .0
        .iter()
        .zip(&c.0)
        .map(|(&a, &cj)| a / params.pow(params.m - cj))
        .collect();
    Ok(ElementaryInterval { composition: c.clone(), offsets })
}

/// Flattened index of the elementary interval of composition `c` that holds
/// `cell`, using precomputed divisors. Used by the hot loops in
/// [`crate::patterns`] and [`crate::search`].
#[derive(Clone, Debug)]
pub(crate) struct CompositionKey {
    pub composition: Composition,
    divisors: Vec<u64>,
    radices: Vec<u64>,
}

impl CompositionKey {
    pub fn new(c: &Composition, params: &Params) -> Self {
        let divisors = c.0.iter().map(|&cj| params.pow(params.m - cj)).collect();
        let radices = c.0.iter().map(|&cj| params.pow(cj)).collect();
        Self { composition: c.clone(), divisors, radices }
    }

    pub fn all(params: &Params) -> Result<Vec<Self>> {
        Ok(compositions(params.m, params.d)?
            .iter()
            .map(|c| Self::new(c, params))
            .collect())
    }

    /// Position in `[0, b^m)` of the interval containing `cell`.
    #[inline]
    pub fn slot(&self, cell: &[u64]) -> usize {
        let mut idx = 0u64;
        for ((&a, &div), &radix) in cell.iter().zip(&self.divisors).zip(&self.radices) {
            idx = idx * radix + a / div;
        }
        idx as usize
    }
}
