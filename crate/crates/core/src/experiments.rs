//! Sampling experiments on the normalized gap `max_c Gap_c(A) / (||A||^eps ||c||_1)`.
//!
//! The maximum over `c` is bracketed per instance:
//!
//! * below by the Frobenius cost `c = (a_1, ..., a_{n-1}, 0)`, whose gap is
//!   exactly `g(A) + a_n`, giving `(g + a_n) / (||A||^eps (a_1 + ... + a_{n-1}))`;
//! * above through `Gap_c(A) <= (g + ||A||) ||c||_1 / min(A)`, relaxed to
//!   `f(A) / (min(A) ||A||^eps)` with `f(A) = g(A) + a_1 + ... + a_n`.
//!
//! `||A||^eps` is irrational in general. It is rounded so that each bracket
//! only widens, and the ratios are then rounded outward onto a dyadic grid.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::frobenius;
use crate::instances::{draw_q, SamplerConfig};
use crate::model::KnapsackInstance;
use crate::rational::{self, Rational, DEFAULT_PRECISION_BITS};
use crate::serde_rational;

/// Tail points need at least this many survivors to enter the slope fit;
/// a tail experiment needs at least this many samples.
pub const MIN_SURVIVORS: usize = 100;

/// Tail exponent `alpha(eps, n) = (n - 2) / ((1 - eps) n)`.
pub fn alpha(epsilon: &Rational, n: usize) -> Result<Rational> {
    check_epsilon(epsilon)?;
    if n < 3 {
        return Err(Error::DimensionTooSmall { n });
    }
    let n = rational::uint(n as u64);
    Ok((&n - rational::int(2)) / ((rational::int(1) - epsilon) * n))
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if !epsilon.is_positive() || *epsilon >= rational::int(1) {
        Err(Error::BadEpsilon(epsilon.to_string()))
    } else {
        Ok(())
    }
}

/// Thresholds `t = 2^(k/4)` for `k = 0..=16`, i.e. `1 <= t <= 16`, rounded to
/// 1/1024.
pub fn default_thresholds() -> Vec<Rational> {
    (0..=16)
        .map(|k| {
            let t = 2f64.powf(f64::from(k) / 4.0);
            rational::frac((t * 1024.0).round() as i64, 1024)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Norm bound `T`.
    pub t: u64,
    pub count: usize,
    pub seed: u64,
    pub epsilon: Rational,
    pub thresholds: Vec<Rational>,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
    pub precision_bits: u32,
}

impl ExperimentConfig {
    pub fn new(n: usize, t: u64, count: usize, seed: u64, epsilon: Rational) -> Self {
        ExperimentConfig {
            n,
            t,
            count,
            seed,
            epsilon,
            thresholds: default_thresholds(),
            jobs: 1,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }

    pub fn sampler(&self) -> SamplerConfig {
        SamplerConfig {
            n: self.n,
            t: self.t,
            count: self.count,
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.sampler().validate()?;
        check_epsilon(&self.epsilon)?;
        if self.jobs == 0 {
            return Err(Error::InvalidParameter("jobs must be at least 1".into()));
        }
        if let Some(t) = self.thresholds.iter().find(|t| !t.is_positive()) {
            return Err(Error::InvalidParameter(format!(
                "threshold {t} is not positive"
            )));
        }
        Ok(())
    }

    /// `eps > 2/n`, the regime where the mean is bounded.
    pub fn epsilon_above_two_over_n(&self) -> bool {
        self.epsilon > rational::frac(2, self.n as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: u64,
    pub seed: u64,
    pub index: u64,
    pub a: KnapsackInstance,
    pub g: i64,
    /// `f(A) = g(A) + a_1 + ... + a_n`
    pub f: i128,
    #[serde(with = "serde_rational")]
    pub ratio_lower: Rational,
    #[serde(with = "serde_rational")]
    pub ratio_upper: Rational,
}

/// Both bracket ratios for one instance.
pub fn bracket(
    inst: &KnapsackInstance,
    epsilon: &Rational,
    bits: u32,
) -> Result<(i64, Rational, Rational)> {
    let g = frobenius(inst)?;
    let max = rational::uint(inst.max_norm());
    let head: u128 = inst.sum() - u128::from(inst.last());

    let pow_up = rational::ceil_pow(&max, epsilon, bits);
    let lower = rational::int(g + inst.last() as i64)
        / (pow_up * Rational::from_integer(BigInt::from(head)));

    let pow_down = rational::floor_pow(&max, epsilon, bits);
    let f = i128::from(g) + inst.sum() as i128;
    let upper =
        Rational::from_integer(BigInt::from(f)) / (rational::uint(inst.min_entry()) * pow_down);

    Ok((
        g,
        rational::floor_dyadic(&lower, bits),
        rational::ceil_dyadic(&upper, bits),
    ))
}

pub fn sample_record(config: &ExperimentConfig, index: u64) -> Result<SampleRecord> {
    let (a, _) = draw_q(config.n, config.t, config.seed, index);
    let (g, ratio_lower, ratio_upper) = bracket(&a, &config.epsilon, config.precision_bits)?;
    Ok(SampleRecord {
        n: config.n,
        t: config.t,
        seed: config.seed,
        index,
        f: i128::from(g) + a.sum() as i128,
        a,
        g,
        ratio_lower,
        ratio_upper,
    })
}

/// Records for draws `0..count`, in draw order whatever the thread count.
pub fn sample_records(config: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    pool.install(|| {
        (0..config.count as u64)
            .into_par_iter()
            .map(|i| sample_record(config, i))
            .collect()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailPoint {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub survivors_upper: usize,
    pub fraction_upper: f64,
    pub survivors_lower: usize,
    pub fraction_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: u64,
    pub count: usize,
    pub seed: u64,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    pub precision_bits: u32,
    pub tail: Vec<TailPoint>,
    /// Least-squares slope of `ln(survival)` against `ln(t)` for `ratio_upper`.
    pub fitted_slope: Option<f64>,
    pub fitted_slope_lower: Option<f64>,
    /// Thresholds that entered the upper fit.
    pub fit_points: usize,
    #[serde(with = "serde_rational")]
    pub mean_upper: Rational,
    pub mean_upper_decimal: String,
    #[serde(with = "serde_rational")]
    pub mean_lower: Rational,
    pub mean_lower_decimal: String,
    #[serde(with = "serde_rational::option")]
    pub alpha_theoretical: Option<Rational>,
    pub epsilon_above_two_over_n: bool,
    /// `T = 1`: every sample is `(1, ..., 1)`.
    pub degenerate: bool,
}

fn survivors(values: &[&Rational], t: &Rational) -> usize {
    values.iter().filter(|v| **v > t).count()
}

/// Least-squares slope of `ln(fraction)` against `ln(t)` over the points with
/// at least `MIN_SURVIVORS` survivors.
fn fit_slope(points: &[(Rational, usize)], count: usize) -> (Option<f64>, usize) {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, s)| *s >= MIN_SURVIVORS)
        .map(|(t, s)| (rational::to_f64(t).ln(), (*s as f64 / count as f64).ln()))
        .collect();
    let k = xy.len();
    if k < 2 {
        return (None, k);
    }
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k as f64;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k as f64;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (None, k);
    }
    (Some(sxy / sxx), k)
}

fn mean(values: &[&Rational]) -> Rational {
    if values.is_empty() {
        return Rational::zero();
    }
    let sum = values.iter().fold(Rational::zero(), |acc, v| acc + *v);
    sum / rational::uint(values.len() as u64)
}

pub fn summarize(config: &ExperimentConfig, records: &[SampleRecord]) -> ExperimentSummary {
    let uppers: Vec<&Rational> = records.iter().map(|r| &r.ratio_upper).collect();
    let lowers: Vec<&Rational> = records.iter().map(|r| &r.ratio_lower).collect();
    let count = records.len().max(1);

    let tail: Vec<TailPoint> = config
        .thresholds
        .iter()
        .map(|t| {
            let su = survivors(&uppers, t);
            let sl = survivors(&lowers, t);
            TailPoint {
                t: t.clone(),
                survivors_upper: su,
                fraction_upper: su as f64 / count as f64,
                survivors_lower: sl,
                fraction_lower: sl as f64 / count as f64,
            }
        })
        .collect();
    let upper_pts: Vec<(Rational, usize)> = tail
        .iter()
        .map(|p| (p.t.clone(), p.survivors_upper))
        .collect();
    let lower_pts: Vec<(Rational, usize)> = tail
        .iter()
        .map(|p| (p.t.clone(), p.survivors_lower))
        .collect();
    let (fitted_slope, fit_points) = fit_slope(&upper_pts, count);
    let (fitted_slope_lower, _) = fit_slope(&lower_pts, count);

    let mean_upper = mean(&uppers);
    let mean_lower = mean(&lowers);
    ExperimentSummary {
        n: config.n,
        t: config.t,
        count: records.len(),
        seed: config.seed,
        epsilon: config.epsilon.clone(),
        precision_bits: config.precision_bits,
        tail,
        fitted_slope,
        fitted_slope_lower,
        fit_points,
        mean_upper_decimal: rational::to_decimal(&mean_upper, 12),
        mean_upper,
        mean_lower_decimal: rational::to_decimal(&mean_lower, 12),
        mean_lower,
        alpha_theoretical: alpha(&config.epsilon, config.n).ok(),
        epsilon_above_two_over_n: config.epsilon_above_two_over_n(),
        degenerate: config.t == 1,
    }
}

/// Samples `Q(T)` and measures the survival function of `ratio_upper` (and of
/// `ratio_lower`) at the configured thresholds.
pub fn tail_experiment(
    config: &ExperimentConfig,
) -> Result<(Vec<SampleRecord>, ExperimentSummary)> {
    config.validate()?;
    if config.n < 3 {
        return Err(Error::DimensionTooSmall { n: config.n });
    }
    if config.count < MIN_SURVIVORS {
        return Err(Error::InsufficientSamples {
            got: config.count,
            needed: MIN_SURVIVORS,
        });
    }
    let records = sample_records(config)?;
    let summary = summarize(config, &records);
    Ok((records, summary))
}

/// One sampling run per configuration, typically a ladder of increasing `T`.
pub fn mean_experiment(
    configs: &[ExperimentConfig],
) -> Result<Vec<(Vec<SampleRecord>, ExperimentSummary)>> {
    configs
        .iter()
        .map(|config| {
            let records = sample_records(config)?;
            let summary = summarize(config, &records);
            Ok((records, summary))
        })
        .collect()
}
