//! Occupancy probabilities and the two-sided bounds on the probability that
//! `N` uniform points contain a (0,m,d)-net.
//!
//! `p_N(k)` is the probability that `k` fixed cells out of `K` equal cells
//! all receive at least one of `N` uniform points. Quantities involving the
//! pattern count `A` are carried in log domain.

use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Params;
use crate::logdomain::{ln_factorial, LogValue};
use crate::patterns::{
    check_enumerable, count_patterns_exact_d2, count_patterns_upper, enumerate_patterns, Pattern,
};

/// Relative error tolerated in the floating-point inclusion–exclusion sum.
pub const CANCELLATION_TOLERANCE: f64 = 1e-8;
/// Largest `k` recomputed in exact rational arithmetic.
pub const RATIONAL_MAX_CELLS: u64 = 64;
/// Largest `N * k` for the positive-term recurrence used beyond that.
pub const RECURRENCE_MAX_WORK: u64 = 200_000_000;

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Neumaier-compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_occupancy_args(total: u64, k: u64) -> Result<()> {
    if k == 0 || k > total {
        return Err(Error::InvalidInput(format!("need 1 <= k <= K, got k={k}, K={total}")));
    }
    Ok(())
}

/// `p_N(k) = sum_i (-1)^i C(k,i) (1 - i/K)^N`.
///
/// The alternating sum is evaluated in floating point with compensated
/// summation. If its estimated relative error exceeds
/// [`CANCELLATION_TOLERANCE`] the value is recomputed exactly in rationals
/// (`k <= 64`) or with a positive-term recurrence over the number of filled
/// cells.
pub fn occupancy_exact(total: u64, k: u64, n: u64) -> Result<f64> {
    check_occupancy_args(total, k)?;
    if n < k {
        return Ok(0.0);
    }
    let mut acc = CompensatedSum::default();
    let mut error = 0.0f64;
    let kf = total as f64;
    let nf = n as f64;
    // binomial(k, i), exact while below 2^53
    let mut binom = 1.0f64;
    for i in 0..=k {
        if i > 0 {
            binom = binom * (k - i + 1) as f64 / i as f64;
        }
        if i == total {
            // (1 - K/K)^N with N >= k >= 1
            continue;
        }
        let ratio = (total - i) as f64 / kf;
        let magnitude = if binom.is_finite() && binom < 1e300 {
            binom * ratio.powf(nf)
        } else {
            (ln_binomial(k, i) + nf * (-(i as f64) / kf).ln_1p()).exp()
        };
        error += magnitude * (8.0 + nf) * f64::EPSILON;
        acc.add(if i % 2 == 0 { magnitude } else { -magnitude });
    }
    let value = acc.value();
    if error <= CANCELLATION_TOLERANCE * value.abs() {
        return Ok(value.clamp(0.0, 1.0));
    }
    if k <= RATIONAL_MAX_CELLS {
        return Ok(ratio_to_f64(&occupancy_rational(total, k, n)?).clamp(0.0, 1.0));
    }
    occupancy_recurrence(total, k, n)
}

fn occupancy_recurrence(total: u64, k: u64, n: u64) -> Result<f64> {
    if n.checked_mul(k).is_none_or(|w| w > RECURRENCE_MAX_WORK) {
        return Err(Error::Precision(format!(
            "inclusion–exclusion for K={total}, k={k}, N={n} cancels and the exact fallbacks are out of budget"
        )));
    }
    // dist[j]: probability that exactly j of the k target cells are filled
    let mut dist = vec![0.0f64; k as usize + 1];
    dist[0] = 1.0;
    let kf = total as f64;
    for step in 0..n {
        let top = (step + 1).min(k) as usize;
        for j in (0..=top).rev() {
            let stay = dist[j] * (kf - (k - j as u64) as f64) / kf;
            let arrive = if j > 0 { dist[j - 1] * (k - (j as u64 - 1)) as f64 / kf } else { 0.0 };
            dist[j] = stay + arrive;
        }
    }
    Ok(dist[k as usize].clamp(0.0, 1.0))
}

/// `p_N(k)` as an exact rational.
pub fn occupancy_rational(total: u64, k: u64, n: u64) -> Result<BigRational> {
    check_occupancy_args(total, k)?;
    let mut weights = vec![BigInt::zero(); k as usize + 1];
    weights[k as usize] = BigInt::one();
    Ok(inclusion_exclusion_rational(total, n, &weights))
}

/// `sum_s w[s] p_N(s) / 1` for integer weights `w[s]`, exactly:
/// `sum_i (-1)^i (K - i)^N sum_s w[s] C(s, i)  /  K^N`.
fn inclusion_exclusion_rational(total: u64, n: u64, weights: &[BigInt]) -> BigRational {
    let max_s = weights.len().saturating_sub(1);
    let mut numerator = BigInt::zero();
    let exponent = u32::try_from(n).expect("sample count exceeds u32 in exact arithmetic");
    for i in 0..=max_s {
        let mut coeff = BigInt::zero();
        let mut binom = BigInt::one(); // C(s, i) for s = i, i+1, ...
        for (s, w) in weights.iter().enumerate().skip(i) {
            if s > i {
                binom = binom * BigInt::from(s) / BigInt::from(s - i);
            }
            if !w.is_zero() {
                coeff += w * &binom;
            }
        }
        if coeff.is_zero() || (i as u64) > total {
            continue;
        }
        let power = BigInt::from(BigUint::from(total - i as u64).pow(exponent));
        let term = coeff * power;
        if i % 2 == 0 {
            numerator += term;
        } else {
            numerator -= term;
        }
    }
    let denominator = BigInt::from(BigUint::from(total).pow(exponent));
    BigRational::new(numerator, denominator)
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Closed-form bounds on `p_N(b^m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OccupancyBounds {
    /// `max(0, 1 - b^m exp(-N / b^(md)))` (union bound).
    pub lower: f64,
    /// `min((1 - (1 - b^(-md))^N)^(b^m), (N b^(-md))^(b^m))`, clamped to `[0,1]`.
    pub upper: f64,
}

pub fn na_bounds_p(params: &Params, n: u64) -> OccupancyBounds {
    let cells = params.total_cells() as f64;
    let target = params.cells_per_axis() as f64;
    let nf = n as f64;
    let lower = (1.0 - target * (-nf / cells).exp()).max(0.0);
    // 1 - (1 - 1/K)^N, evaluated without cancellation
    let single = -(nf * (-1.0 / cells).ln_1p()).exp_m1();
    let product = (target * single.ln()).exp();
    let crude = (target * (nf / cells).ln()).exp();
    let upper = product.min(crude).clamp(0.0, 1.0);
    OccupancyBounds { lower, upper }
}

/// Where the pattern count used by the sandwich comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    /// d = 1: the single pattern made of every cell.
    ExactD1,
    /// d = 2: `(b!)^(m b^(m-1))`.
    ExactD2,
    /// Counted by brute-force enumeration.
    ExactEnumerated,
    /// The general upper bound `(b!)^(m b^(m-1) (d-1))`.
    UpperBound,
}

/// Pattern count (log domain) and its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilySize {
    pub count: LogValue,
    /// The count itself when it is exact and below 2^53.
    pub exact: Option<f64>,
    pub mode: CountMode,
}

const EXACT_F64_LIMIT: f64 = 9_007_199_254_740_992.0;

/// Best available pattern count for `params`.
pub fn family_size(params: &Params) -> Result<FamilySize> {
    if params.d == 1 {
        return Ok(FamilySize { count: LogValue::ONE, exact: Some(1.0), mode: CountMode::ExactD1 });
    }
    if params.d == 2 {
        let c = count_patterns_exact_d2(params.base, params.m)?;
        let exact = c.exact.and_then(|a| a.to_f64()).filter(|&a| a < EXACT_F64_LIMIT);
        return Ok(FamilySize { count: c.log, exact, mode: CountMode::ExactD2 });
    }
    if check_enumerable(params).is_ok() {
        let a = enumerate_patterns(params)?.len();
        return Ok(FamilySize {
            count: LogValue::from_value(a as f64),
            exact: Some(a as f64),
            mode: CountMode::ExactEnumerated,
        });
    }
    Ok(FamilySize { count: count_patterns_upper(params), exact: None, mode: CountMode::UpperBound })
}

/// Lower (second moment) and upper (first moment) bounds on the containment
/// probability.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub b: u64,
    pub m: u32,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u64,
    /// `p_N(b^m)`.
    pub p_target: f64,
    pub pattern_count: LogValue,
    #[serde(rename = "A_mode")]
    pub a_mode: CountMode,
    /// `E[X] = A p_N(b^m)`.
    pub mean_count: LogValue,
    /// `b^(-m(d-2)) - (b^m - 1)/A`; absent on the d = 1 equality path.
    pub pz_factor: Option<f64>,
    /// Set when `pz_factor < 0`, in which case `pz_lower` is reported as 0.
    pub pz_factor_negative: bool,
    pub pz_lower: f64,
    pub markov_upper: f64,
    /// d = 1: both bounds equal `p_N(b^m)`.
    pub equality: bool,
}

pub fn pz_sandwich(params: &Params, n: u64) -> Result<SandwichReport> {
    let size = family_size(params)?;
    pz_sandwich_with(params, n, size)
}

/// [`pz_sandwich`] with a precomputed pattern count.
pub fn pz_sandwich_with(params: &Params, n: u64, size: FamilySize) -> Result<SandwichReport> {
    let p = occupancy_exact(params.total_cells(), params.cells_per_axis(), n)?;
    let mut report = SandwichReport {
        b: params.base,
        m: params.m,
        d: params.d,
        n,
        p_target: p,
        pattern_count: size.count,
        a_mode: size.mode,
        mean_count: LogValue::from_ln(size.count.ln + p.ln()),
        pz_factor: None,
        pz_factor_negative: false,
        pz_lower: 0.0,
        markov_upper: 0.0,
        equality: params.d == 1,
    };
    if params.d == 1 {
        report.pz_lower = p;
        report.markov_upper = p;
        return Ok(report);
    }
    let net = params.cells_per_axis() as f64;
    let shrink = (params.base as f64).powf(-(params.m as f64) * (params.d as f64 - 2.0));
    let correction = match size.exact {
        Some(a) => (net - 1.0) / a,
        None if net > 1.0 => ((net - 1.0).ln() - size.count.ln).exp(),
        None => 0.0,
    };
    let factor = shrink - correction;
    report.pz_factor = Some(factor);
    if p == 0.0 {
        return Ok(report);
    }
    report.markov_upper = match size.exact {
        Some(a) => a * p,
        None => (size.count.ln + p.ln()).exp(),
    }
    .min(1.0);
    if factor < 0.0 {
        report.pz_factor_negative = true;
    } else {
        report.pz_lower = 1.0 / (1.0 + (1.0 / p - 1.0) * factor);
    }
    Ok(report)
}

/// Largest family accepted by [`exact_containment_bruteforce`].
pub const BRUTEFORCE_MAX_PATTERNS: usize = 20;

/// Exact containment probability by inclusion–exclusion over the enumerated
/// pattern family.
pub fn exact_containment_bruteforce(params: &Params, n: u64) -> Result<f64> {
    let family = enumerate_patterns(params)?;
    exact_containment_for_family(params, &family, n)
}

/// Probability that at least one pattern of `family` has all its cells
/// occupied by `n` uniform points, exact up to the final rounding.
pub fn exact_containment_for_family(params: &Params, family: &[Pattern], n: u64) -> Result<f64> {
    if family.len() > BRUTEFORCE_MAX_PATTERNS {
        return Err(Error::TooLarge(format!(
            "inclusion–exclusion over {} patterns exceeds {BRUTEFORCE_MAX_PATTERNS}",
            family.len()
        )));
    }
    if family.is_empty() {
        return Ok(0.0);
    }
    let total = params.total_cells();
    let side = params.cells_per_axis();
    let words = (total as usize).div_ceil(64);
    let masks: Vec<Vec<u64>> = family
        .iter()
        .map(|p| {
            let mut bits = vec![0u64; words];
            for c in p.cells() {
                let f = c.0.iter().fold(0u64, |acc, &a| acc * side + a) as usize;
                bits[f / 64] |= 1 << (f % 64);
            }
            bits
        })
        .collect();

    // signed[s]: sum of (-1)^(|S|+1) over non-empty subsets S with union size s
    let mut signed = vec![0i64; total as usize + 1];
    let mut union = vec![0u64; words];
    let _ = subsets(&masks, 0, 0, &mut union, &mut signed);
    let weights: Vec<BigInt> = signed.iter().map(|&w| BigInt::from(w)).collect();
    let value = ratio_to_f64(&inclusion_exclusion_rational(total, n, &weights));
    Ok(value.clamp(0.0, 1.0))
}

fn subsets(
    masks: &[Vec<u64>],
    start: usize,
    depth: usize,
    union: &mut Vec<u64>,
    signed: &mut [i64],
) -> ControlFlow<()> {
    for i in start..masks.len() {
        let saved = union.clone();
        union.iter_mut().zip(&masks[i]).for_each(|(u, m)| *u |= m);
        let size: u32 = union.iter().map(|w| w.count_ones()).sum();
        signed[size as usize] += if depth.is_multiple_of(2) { 1 } else { -1 };
        subsets(masks, i + 1, depth + 1, union, signed)?;
        *union = saved;
    }
    ControlFlow::Continue(())
}

/// `ceil((1 + eps) b^(md) m ln b)`.
///
/// The limit statement needs `eps > 0`; `eps = 0` is accepted for
/// exploration.
pub fn sufficient_n(base: u64, d: usize, m: u32, eps: f64) -> Result<u64> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParams(format!("eps must be finite and >= 0, got {eps}")));
    }
    let params = Params::new(base, m, d)?;
    let raw = (1.0 + eps) * params.total_cells() as f64 * m as f64 * (base as f64).ln();
    let n = raw.ceil();
    if n > u64::MAX as f64 {
        return Err(Error::InvalidParams(format!("sufficient N = {raw:e} overflows u64")));
    }
    Ok(n as u64)
}

/// The necessary sample size and the closed form it is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NecessaryN {
    /// `b^(md) / (b!)^(m(d-1)/b)`.
    pub value: LogValue,
    /// b = 2: `2^(m + m(d-1)/2)`, equal to `value`; b >= 3: the lower
    /// bound `b^m exp((m(d-1)/b)(b - 2 - 2(ln b - ln 2)))`.
    pub closed_form: LogValue,
    pub closed_form_is_equality: bool,
}

impl NecessaryN {
    pub fn as_f64(&self) -> f64 {
        self.value.value()
    }
}

pub fn necessary_n(base: u64, d: usize, m: u32) -> Result<NecessaryN> {
    if base < 2 || d == 0 {
        return Err(Error::InvalidParams(format!("need b >= 2 and d >= 1, got b={base}, d={d}")));
    }
    let (bf, df, mf) = (base as f64, d as f64, m as f64);
    let ln = mf * df * bf.ln() - mf * (df - 1.0) / bf * ln_factorial(base);
    let value = LogValue::from_ln(ln);
    let tol = 1e-9 * ln.abs().max(1.0);
    if base == 2 {
        let closed = LogValue::from_ln((mf + mf * (df - 1.0) / 2.0) * 2f64.ln());
        if (closed.ln - ln).abs() > tol {
            return Err(Error::Precision(format!(
                "necessary N {ln} disagrees with 2^(m+m(d-1)/2) {}",
                closed.ln
            )));
        }
        return Ok(NecessaryN { value, closed_form: closed, closed_form_is_equality: true });
    }
    let exponent = (bf - 2.0 - 2.0 * (bf.ln() - 2f64.ln())) / bf;
    let closed = LogValue::from_ln(mf * bf.ln() + mf * (df - 1.0) * exponent);
    if closed.ln > ln + tol {
        return Err(Error::Precision(format!(
            "necessary N {ln} fell below its closed-form lower bound {}",
            closed.ln
        )));
    }
    Ok(NecessaryN { value, closed_form: closed, closed_form_is_equality: false })
}

/// `(b / (b!)^(1/b), exp((b - 2 - 2(ln b - ln 2)) / b))`; the first is never
/// smaller than the second.
pub fn factorial_ratio_bound(base: u64) -> Result<(f64, f64)> {
    if base < 3 {
        return Err(Error::InvalidParams(format!("factorial ratio bound needs b >= 3, got {base}")));
    }
    let bf = base as f64;
    let lhs = (bf.ln() - ln_factorial(base) / bf).exp();
    let rhs = ((bf - 2.0 - 2.0 * (bf.ln() - 2f64.ln())) / bf).exp();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(b: u64, m: u32, d: usize) -> Params {
        Params::new(b, m, d).unwrap()
    }

    #[test]
    fn occupancy_examples() {
        assert!((occupancy_exact(4, 2, 4).unwrap() - 0.4296875).abs() < 1e-12);
        assert!((occupancy_exact(2, 2, 2).unwrap() - 0.5).abs() < 1e-12);
        for (total, k) in [(4, 2), (16, 5), (100, 40)] {
            assert_eq!(occupancy_exact(total, k, k - 1).unwrap(), 0.0);
        }
        assert!(occupancy_exact(4, 0, 3).is_err());
        assert!(occupancy_exact(4, 5, 3).is_err());
        assert_eq!(occupancy_rational(4, 2, 4).unwrap(), BigRational::new(55.into(), 128.into()));
    }

    #[test]
    fn occupancy_fallbacks_agree() {
        // N = k: all terms of size ~1 cancel down to k!/K^k
        let exact = occupancy_exact(64, 32, 32).unwrap();
        let expected = (ln_factorial(32) - 32.0 * 64f64.ln()).exp();
        assert!((exact / expected - 1.0).abs() < 1e-10);
        let big = occupancy_exact(1024, 100, 100).unwrap();
        let expected = (ln_factorial(100) - 100.0 * 1024f64.ln()).exp();
        assert!((big / expected - 1.0).abs() < 1e-9, "{big} {expected}");
        let rec = occupancy_recurrence(16, 4, 30).unwrap();
        let rat = ratio_to_f64(&occupancy_rational(16, 4, 30).unwrap());
        assert!((rec - rat).abs() < 1e-14);
    }

    #[test]
    fn bounds_example() {
        let b = na_bounds_p(&params(2, 1, 2), 4);
        assert!((b.lower - (1.0 - 2.0 * (-1f64).exp())).abs() < 1e-12);
        assert!((b.upper - (1.0 - 0.75f64.powi(4)).powi(2)).abs() < 1e-12);
        let zero = na_bounds_p(&params(2, 1, 2), 0);
        assert_eq!((zero.lower, zero.upper), (0.0, 0.0));
        let many = na_bounds_p(&params(2, 1, 2), 1024);
        assert!(many.lower > 0.999 && many.upper > 0.999);
    }

    #[test]
    fn sandwich_example() {
        let r = pz_sandwich(&params(2, 1, 2), 4).unwrap();
        assert_eq!(r.a_mode, CountMode::ExactD2);
        assert!((r.pz_lower - 0.601093).abs() < 1e-6);
        assert_eq!(r.markov_upper, 0.859375);
        let one = pz_sandwich(&params(2, 1, 1), 2).unwrap();
        assert!(one.equality && one.pz_lower == 0.5 && one.markov_upper == 0.5);
        let none = pz_sandwich(&params(2, 1, 2), 1).unwrap();
        assert_eq!((none.pz_lower, none.markov_upper), (0.0, 0.0));
        let three = pz_sandwich(&params(2, 1, 3), 8).unwrap();
        assert_eq!(three.a_mode, CountMode::ExactEnumerated);
        assert!((three.pattern_count.value() - 4.0).abs() < 1e-9);
        let far = pz_sandwich(&params(2, 3, 4), 10_000).unwrap();
        assert_eq!(far.a_mode, CountMode::UpperBound);
    }

    #[test]
    fn bruteforce_examples() {
        let p = params(2, 1, 2);
        assert!((exact_containment_bruteforce(&p, 4).unwrap() - 0.765625).abs() < 1e-12);
        assert_eq!(exact_containment_bruteforce(&p, 1).unwrap(), 0.0);
        assert!((exact_containment_bruteforce(&params(2, 1, 1), 2).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            exact_containment_bruteforce(&params(3, 1, 3), 10),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn thresholds() {
        assert_eq!(sufficient_n(2, 2, 2, 0.1).unwrap(), 25);
        assert_eq!(sufficient_n(2, 1, 1, 0.0).unwrap(), 2);
        assert!(sufficient_n(2, 1, 1, -0.5).is_err());
        assert!((necessary_n(2, 2, 2).unwrap().as_f64() - 8.0).abs() < 1e-9);
        assert!((necessary_n(2, 3, 1).unwrap().as_f64() - 4.0).abs() < 1e-9);
        assert!((necessary_n(3, 2, 1).unwrap().as_f64() - 9.0 / 6f64.cbrt()).abs() < 1e-9);
        let (lhs, rhs) = factorial_ratio_bound(3).unwrap();
        assert!((lhs - 3.0 / 6f64.cbrt()).abs() < 1e-12);
        assert!((rhs - ((1.0 - 2.0 * 1.5f64.ln()) / 3.0).exp()).abs() < 1e-12);
        assert!(factorial_ratio_bound(2).is_err());
    }

    #[test]
    fn report_json_uses_log10() {
        let r = pz_sandwich(&params(2, 1, 2), 4).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert!((v["pattern_count"]["log10"].as_f64().unwrap() - 2f64.log10()).abs() < 1e-12);
        assert_eq!(v["A_mode"], "exact-d2");
        assert_eq!(v["N"], 4);
    }
}
