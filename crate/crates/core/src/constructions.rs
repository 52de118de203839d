//! Explicit (0,m,d)-nets with exact b-adic coordinates, uniform random
//! point sets, and the JSON point-set format.
//!
//! Nets use the Faure digit matrices: coordinate `j` of point `i` applies the
//! `j`-th power of the Pascal matrix mod `b` to the base-`b` digits of `i`
//! (coordinate 0 is the van der Corput radical inverse). The last coordinate
//! is `i / b^m`. With at most `b` Faure coordinates this yields a
//! (0,m,d)-net for every prime `b` and `d <= b + 1`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BAdic, Params, Point, PointSet};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// `pascal[c][r] = binomial(c, r) mod base`.
fn pascal_mod(rows: usize, base: u64) -> Vec<Vec<u64>> {
    let mut t: Vec<Vec<u64>> = Vec::with_capacity(rows);
    for c in 0..rows {
        let mut row = vec![0u64; c + 1];
        row[0] = 1;
        row[c] = 1;
        for r in 1..c {
            row[r] = (t[c - 1][r - 1] + t[c - 1][r]) % base;
        }
        t.push(row);
    }
    t
}

fn pow_mod(x: u64, e: usize, base: u64) -> u64 {
    (0..e).fold(1u64, |acc, _| (acc as u128 * x as u128 % base as u128) as u64)
}

/// Generates a (0,m,d)-net in prime base `b`.
pub fn generate_net(base: u64, m: u32, d: usize) -> Result<PointSet> {
    if m >= 2 && d as u64 >= base.saturating_add(2) {
        return Err(Error::NetCannotExist { base, m, d });
    }
    if !is_prime(base) {
        return Err(Error::UnsupportedBase(base));
    }
    let params = Params::new(base, m, d)?;
    let n = params.cells_per_axis();
    let digits = m as usize;
    let pascal = pascal_mod(digits, base);
    // generator[j][r][c]: entry of the j-th power of the Pascal matrix
    let generators: Vec<Vec<Vec<u64>>> = (0..d - 1)
        .map(|j| {
            let shift = j as u64 % base;
            (0..digits)
                .map(|r| {
                    (0..digits)
                        .map(|c| {
                            if c < r {
                                0
                            } else {
                                pascal[c][r] * pow_mod(shift, c - r, base) % base
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut points = Vec::with_capacity(n as usize);
    let mut index_digits = vec![0u64; digits];
    for i in 0..n {
        let mut rest = i;
        for digit in index_digits.iter_mut() {
            *digit = rest % base;
            rest /= base;
        }
        let mut coords: Vec<BAdic> = generators
            .iter()
            .map(|g| {
                let numerator = g.iter().fold(0u64, |acc, row| {
                    let y = row
                        .iter()
                        .zip(&index_digits)
                        .fold(0u64, |s, (&a, &x)| (s + a * x) % base);
                    acc * base + y
                });
                BAdic { numerator, exponent: m }
            })
            .collect();
        coords.push(BAdic { numerator: i, exponent: m });
        points.push(Point::exact(base, coords));
    }
    PointSet::new(d, points)
}

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

fn unit_float(word: u64) -> f64 {
    (word >> 11) as f64 * TWO_POW_MINUS_53
}

/// Point `index` of the stream defined by `seed`.
///
/// The ChaCha8 keystream is addressed by word position, so any point can be
/// produced without generating its predecessors.
pub fn sample_point(seed: u64, index: u64, d: usize) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * d as u128 * 2);
    Point::new((0..d).map(|_| unit_float(rng.next_u64())).collect())
}

/// `count` i.i.d. uniform points in `[0,1)^d`, determined by `seed` alone.
pub fn sample_uniform(d: usize, seed: u64, count: usize) -> Result<PointSet> {
    if d == 0 {
        return Err(Error::InvalidParams("dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count)
        .map(|_| Point::new((0..d).map(|_| unit_float(rng.next_u64())).collect()))
        .collect();
    Ok(PointSet { d, points })
}

/// Seed of substream `index` under `master`: word `index` of a dedicated
/// ChaCha8 stream keyed by `master`.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(1);
    rng.set_word_pos(u128::from(index) * 2);
    rng.next_u64()
}

/// JSON form of a point set:
/// `{"d":2,"b":2,"m":2,"points":[[0.0,0.0],...],"exact":[[[0,2],[0,2]],...]}`
/// where each exact entry is `[numerator, exponent]` in base `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetJson {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<Vec<(u64, u32)>>>,
}

impl PointSetJson {
    pub fn from_point_set(set: &PointSet, b: Option<u64>, m: Option<u32>) -> Self {
        let exact_base = b.or_else(|| set.points.first()?.exact.as_ref().map(|e| e.base));
        let exact = exact_base.and_then(|base| {
            set.points
                .iter()
                .map(|p| {
                    let e = p.exact.as_ref().filter(|e| e.base == base)?;
                    Some(e.coords.iter().map(|c| (c.numerator, c.exponent)).collect())
                })
                .collect::<Option<Vec<Vec<_>>>>()
                .filter(|v| !v.is_empty())
        });
        Self {
            d: set.d,
            b: if exact.is_some() { exact_base } else { b },
            m,
            points: set.points.iter().map(|p| p.coords.clone()).collect(),
            exact,
        }
    }

    pub fn into_point_set(self) -> Result<PointSet> {
        let points = match self.exact {
            Some(exact) => {
                let base = self.b.ok_or_else(|| {
                    Error::InvalidInput("exact coordinates need the base \"b\"".into())
                })?;
                if exact.len() != self.points.len() {
                    return Err(Error::InvalidInput("\"exact\" and \"points\" differ in length".into()));
                }
                exact
                    .into_iter()
                    .map(|coords| {
                        Point::exact(
                            base,
                            coords
                                .into_iter()
                                .map(|(numerator, exponent)| BAdic { numerator, exponent })
                                .collect(),
                        )
                    })
                    .collect()
            }
            None => self.points.into_iter().map(Point::new).collect(),
        };
        PointSet::new(self.d, points)
    }
}
