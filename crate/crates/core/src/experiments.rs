//! Seeded Monte Carlo estimation of the containment probability and the
//! N-sweep harness.
//!
//! Trial `i` draws its point set from the substream
//! `substream_seed(master_seed, i)`, so records do not depend on how trials
//! are scheduled across threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{sample_uniform, substream_seed};
use crate::error::{Error, Result};
use crate::grid::Params;
use crate::patterns::{check_enumerable, enumerate_patterns};
use crate::probability::{
    exact_containment_for_family, family_size, necessary_n, pz_sandwich_with, sufficient_n,
    FamilySize, BRUTEFORCE_MAX_PATTERNS,
};
use crate::search::{NetSearcher, Strategy};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub b: u64,
    pub m: u32,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub pz_lower: f64,
    pub markov_upper: f64,
    pub exact: Option<f64>,
    pub seed: u64,
}

/// Wilson score interval at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

/// Per-(b, m, d) state shared by every N of a sweep.
struct Harness {
    params: Params,
    searcher: NetSearcher,
    size: FamilySize,
    family: Option<Vec<crate::patterns::Pattern>>,
}

impl Harness {
    fn new(params: Params, strategy: Strategy) -> Result<Self> {
        let searcher = NetSearcher::new(params, strategy)?;
        let size = family_size(&params)?;
        let family = match check_enumerable(&params) {
            Ok(()) => Some(enumerate_patterns(&params)?).filter(|f| f.len() <= BRUTEFORCE_MAX_PATTERNS),
            Err(_) => None,
        };
        Ok(Self { params, searcher, size, family })
    }

    fn outcomes(&self, n: u64, trials: u64, master_seed: u64) -> Result<Vec<bool>> {
        let count = usize::try_from(n)
            .map_err(|_| Error::InvalidParams(format!("N = {n} exceeds the address space")))?;
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let points = sample_uniform(self.params.d, substream_seed(master_seed, i), count)?;
                Ok(self.searcher.find(&points)?.is_some())
            })
            .collect()
    }

    fn record(&self, n: u64, trials: u64, master_seed: u64) -> Result<ExperimentRecord> {
        if trials == 0 {
            return Err(Error::InvalidParams("trials must be >= 1".into()));
        }
        let outcomes = self.outcomes(n, trials, master_seed)?;
        let successes = aggregate(outcomes.iter().copied().enumerate());
        let p_hat = successes as f64 / trials as f64;
        let (ci_low, ci_high) = wilson_interval(successes, trials, Z_95);
        let sandwich = pz_sandwich_with(&self.params, n, self.size)?;
        let exact = self
            .family
            .as_ref()
            .map(|f| exact_containment_for_family(&self.params, f, n))
            .transpose()?;
        Ok(ExperimentRecord {
            b: self.params.base,
            m: self.params.m,
            d: self.params.d,
            n,
            trials,
            successes,
            p_hat,
            ci_low,
            ci_high,
            pz_lower: sandwich.pz_lower,
            markov_upper: sandwich.markov_upper,
            exact,
            seed: master_seed,
        })
    }
}

/// Number of successes among `(trial index, outcome)` pairs, in any order.
pub fn aggregate(outcomes: impl IntoIterator<Item = (usize, bool)>) -> u64 {
    let mut all: Vec<(usize, bool)> = outcomes.into_iter().collect();
    all.sort_unstable();
    all.iter().filter(|(_, hit)| *hit).count() as u64
}

/// Estimates `P[N uniform points contain a (0,m,d)-net]` from `trials`
/// independent trials.
pub fn estimate_containment(params: &Params, n: u64, trials: u64, master_seed: u64) -> Result<ExperimentRecord> {
    Harness::new(*params, Strategy::Auto)?.record(n, trials, master_seed)
}

/// [`estimate_containment`] with an explicit search strategy.
pub fn estimate_containment_with(
    params: &Params,
    n: u64,
    trials: u64,
    master_seed: u64,
    strategy: Strategy,
) -> Result<ExperimentRecord> {
    Harness::new(*params, strategy)?.record(n, trials, master_seed)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub records: Vec<ExperimentRecord>,
    /// `ceil((1 + eps) b^(md) m ln b)` for the sweep's `eps`.
    pub sufficient_n: u64,
    pub necessary_n: f64,
    /// Index of the row whose N is closest to `sufficient_n`.
    pub nearest_sufficient_row: Option<usize>,
    /// Index of the row whose N is closest to `necessary_n`.
    pub nearest_necessary_row: Option<usize>,
}

/// Runs one experiment per N. Every row uses the same master seed, so the
/// point set of trial `i` at a larger N extends the one at a smaller N.
pub fn sweep(params: &Params, n_list: &[u64], trials: u64, master_seed: u64, eps: f64) -> Result<SweepReport> {
    sweep_with(params, n_list, trials, master_seed, eps, Strategy::Auto)
}

pub fn sweep_with(
    params: &Params,
    n_list: &[u64],
    trials: u64,
    master_seed: u64,
    eps: f64,
    strategy: Strategy,
) -> Result<SweepReport> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!("N list must be strictly increasing: {n_list:?}")));
    }
    let sufficient = sufficient_n(params.base, params.d, params.m, eps)?;
    let necessary = necessary_n(params.base, params.d, params.m)?.as_f64();
    let records = if n_list.is_empty() {
        Vec::new()
    } else {
        let harness = Harness::new(*params, strategy)?;
        n_list
            .iter()
            .map(|&n| harness.record(n, trials, master_seed))
            .collect::<Result<Vec<_>>>()?
    };
    let nearest = |target: f64| {
        records
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let da = (a.1.n as f64 - target).abs();
                let db = (b.1.n as f64 - target).abs();
                da.total_cmp(&db)
            })
            .map(|(i, _)| i)
    };
    Ok(SweepReport {
        nearest_sufficient_row: nearest(sufficient as f64),
        nearest_necessary_row: nearest(necessary),
        sufficient_n: sufficient,
        necessary_n: necessary,
        records,
    })
}

pub const CSV_HEADER: &str = "b,m,d,N,trials,successes,p_hat,ci_low,ci_high,pz_lower,markov_upper,exact,seed";

/// `x` with 12 significant digits, in the style of C's `%.12g`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-5..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{x:.*}", (11 - exp) as usize))
    }
}

/// CSV rows, header first, newline-terminated.
pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields = [
            r.b.to_string(),
            r.m.to_string(),
            r.d.to_string(),
            r.n.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            format_float(r.p_hat),
            format_float(r.ci_low),
            format_float(r.ci_high),
            format_float(r.pz_lower),
            format_float(r.markov_upper),
            r.exact.map(format_float).unwrap_or_default(),
            r.seed.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.765625), "0.765625");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.6010928961748634), "0.601092896175");
        assert_eq!(format_float(1.5e-7), "1.5e-07");
        assert_eq!(format_float(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_float(0.0), "0");
    }

    #[test]
    fn wilson_contains_estimate() {
        for (s, n) in [(0, 10), (10, 10), (3, 7), (50_000, 100_000)] {
            let (lo, hi) = wilson_interval(s, n, Z_95);
            let p = s as f64 / n as f64;
            assert!(lo <= p && p <= hi && lo >= 0.0 && hi <= 1.0);
        }
        let (lo, hi) = wilson_interval(0, 10, Z_95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775327998628893).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_never_succeed() {
        let p = Params::new(2, 1, 2).unwrap();
        let r = estimate_containment(&p, 1, 500, 9).unwrap();
        assert_eq!(r.successes, 0);
        assert_eq!(r.exact, Some(0.0));
        assert!(estimate_containment(&p, 4, 0, 9).is_err());
    }

    #[test]
    fn deterministic_records() {
        let p = Params::new(2, 1, 2).unwrap();
        assert_eq!(
            estimate_containment(&p, 4, 2000, 5).unwrap(),
            estimate_containment(&p, 4, 2000, 5).unwrap()
        );
    }

    #[test]
    fn empty_sweep() {
        let p = Params::new(2, 1, 2).unwrap();
        let r = sweep(&p, &[], 10, 1, 0.1).unwrap();
        assert!(r.records.is_empty() && r.nearest_sufficient_row.is_none());
        assert_eq!(records_to_csv(&r.records), format!("{CSV_HEADER}\n"));
        assert!(sweep(&p, &[4, 4], 10, 1, 0.1).is_err());
    }

    #[test]
    fn csv_row_shape() {
        let p = Params::new(2, 1, 2).unwrap();
        let r = sweep(&p, &[2, 4], 100, 3, 0.1).unwrap();
        let csv = records_to_csv(&r.records);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("2,1,2,2,100,"));
        assert!(lines[2].split(',').nth(11).unwrap() == "0.765625");
        assert_eq!(r.nearest_sufficient_row, Some(1));
    }
}
