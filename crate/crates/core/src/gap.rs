//! Exact IP values, per-`b` integrality gaps and the integer programming gap.
//!
//! `Gap_c(A)` is assembled from two exact pieces. Past the threshold `B*` every
//! group-relaxation minimizer lifts to a feasible knapsack solution, so
//! `IG_c(A, b) = m(Lambda, l, b mod a_tau)` there. Below `B*` one dynamic
//! programming sweep gives every `IG_c(A, b)` directly.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{group_minima_with, GroupTable};
use crate::limits::Limits;
use crate::model::{basis_reduction, CostVector, KnapsackInstance};
use crate::rational::{self, Rational};
use crate::serde_rational;

/// `IP_c(A, t)` for every `t` in `0..=b_max`; `None` where `t` is not representable.
pub fn ip_values_upto(
    inst: &KnapsackInstance,
    cost: &CostVector,
    b_max: u64,
    limits: &Limits,
) -> Result<Vec<Option<Rational>>> {
    cost.check_against(inst)?;
    limits.check("IP value sweep", u128::from(b_max) + 1)?;
    let len = b_max as usize + 1;
    let mut value: Vec<Option<Rational>> = vec![None; len];
    value[0] = Some(Rational::zero());
    for t in 1..len {
        let mut best: Option<Rational> = None;
        for (&a, c) in inst.entries().iter().zip(cost.values()) {
            let a = a as usize;
            if a > t {
                continue;
            }
            if let Some(prev) = &value[t - a] {
                let cand = prev + c;
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        value[t] = best;
    }
    Ok(value)
}

fn check_rhs(b: i64) -> Result<u64> {
    u64::try_from(b).map_err(|_| Error::NegativeRhs(b))
}

/// `IP_c(A, b)`, or `None` when `b` has no representation.
pub fn ip_value(inst: &KnapsackInstance, cost: &CostVector, b: i64) -> Result<Option<Rational>> {
    let b = check_rhs(b)?;
    let mut values = ip_values_upto(inst, cost, b, &Limits::default())?;
    Ok(values.pop().flatten())
}

/// `IG_c(A, b) = IP_c(A, b) - LP_c(A, b)`, or `None` when `b` is infeasible.
pub fn integrality_gap(
    inst: &KnapsackInstance,
    cost: &CostVector,
    b: i64,
) -> Result<Option<Rational>> {
    let slope = basis_reduction(inst, cost)?.slope;
    Ok(ip_value(inst, cost, b)?.map(|ip| ip - slope * rational::int(b)))
}

/// `B* = max_r A_{-tau} . x*(r)`. For `b >= B*` the witness of residue
/// `b mod a_tau` lifts to a nonnegative solution of `A x = b`.
pub fn tightness_threshold(table: &GroupTable) -> u64 {
    table.load().iter().copied().max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    /// `Gap_c(A)`
    #[serde(with = "serde_rational")]
    pub gap: Rational,
    /// Smallest feasible `b` with `IG_c(A, b) = gap`.
    pub witness_b: u64,
    /// `B*`
    pub threshold: u64,
    /// `max_r m(Lambda, l, r)`
    #[serde(with = "serde_rational")]
    pub tail_gap: Rational,
    /// Largest `IG_c(A, b)` over feasible `b < B*`, absent when `B* = 0`.
    #[serde(with = "serde_rational::option")]
    pub scan_gap: Option<Rational>,
    /// Zero-based basic index.
    pub tau: usize,
    pub modulus: u64,
    pub generic: bool,
}

/// Computes `Gap_c(A)` exactly.
pub fn gap_exact(inst: &KnapsackInstance, cost: &CostVector) -> Result<GapReport> {
    gap_exact_with(inst, cost, &Limits::default())
}

pub fn gap_exact_with(
    inst: &KnapsackInstance,
    cost: &CostVector,
    limits: &Limits,
) -> Result<GapReport> {
    let basis = basis_reduction(inst, cost)?;
    let table = group_minima_with(inst, basis.tau, &basis.l, limits)?;
    let threshold = tightness_threshold(&table);
    let modulus = table.modulus();

    let tail_gap = table.lattice_gap();
    let tail_witness = table
        .minima()
        .iter()
        .enumerate()
        .filter(|(_, m)| **m == tail_gap)
        .map(|(r, _)| threshold + (r as u64 + modulus - threshold % modulus) % modulus)
        .min()
        .expect("residue 0 always exists");

    let mut scan: Option<(Rational, u64)> = None;
    if threshold > 0 {
        let values = ip_values_upto(inst, cost, threshold - 1, limits)?;
        for (b, ip) in values.into_iter().enumerate() {
            if let Some(ip) = ip {
                let ig = ip - &basis.slope * rational::uint(b as u64);
                if scan.as_ref().is_none_or(|(best, _)| ig > *best) {
                    scan = Some((ig, b as u64));
                }
            }
        }
    }

    let (gap, witness_b) = match &scan {
        Some((s, b)) if *s >= tail_gap => (s.clone(), *b),
        _ => (tail_gap.clone(), tail_witness),
    };
    Ok(GapReport {
        gap,
        witness_b,
        threshold,
        tail_gap,
        scan_gap: scan.map(|(s, _)| s),
        tau: basis.tau,
        modulus,
        generic: basis.generic,
    })
}

/// `max IG_c(A, b)` over feasible `b` in `0..=b_max`, straight from the IP sweep.
pub fn gap_bruteforce(inst: &KnapsackInstance, cost: &CostVector, b_max: u64) -> Result<Rational> {
    let slope = basis_reduction(inst, cost)?.slope;
    let values = ip_values_upto(inst, cost, b_max, &Limits::default())?;
    Ok(values
        .into_iter()
        .enumerate()
        .filter_map(|(b, ip)| ip.map(|ip| ip - &slope * rational::uint(b as u64)))
        .max()
        .unwrap_or_else(Rational::zero))
}
