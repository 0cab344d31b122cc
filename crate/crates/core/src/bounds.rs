//! Closed-form bounds on `Gap_c(A)` and `g(A)`, and a checker that compares
//! them with an exactly computed gap.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::Result;
use crate::group::frobenius;
use crate::model::{basis_reduction, CostVector, KnapsackInstance};
use crate::rational::{self, Rational, DEFAULT_PRECISION_BITS};
use crate::serde_rational;

/// Schur's bound `g(A) <= min(A) ||A||_inf - min(A) - ||A||_inf`.
pub fn schur_bound(inst: &KnapsackInstance) -> i64 {
    let lo = inst.min_entry() as i128;
    let hi = inst.max_norm() as i128;
    i64::try_from(lo * hi - lo - hi).expect("Schur bound fits in i64")
}

/// `n ||A||_inf ||c||_1`
pub fn cook_gap_bound(inst: &KnapsackInstance, cost: &CostVector) -> Rational {
    rational::uint(inst.dim() as u64) * rational::uint(inst.max_norm()) * cost.l1_norm()
}

/// `(||A||_inf - 1) ||c||_1`, attained by `A = (k, ..., k, 1)`, `c = e_n`.
pub fn norm_gap_bound(inst: &KnapsackInstance, cost: &CostVector) -> Rational {
    rational::uint(inst.max_norm() - 1) * cost.l1_norm()
}

/// `2 (||A||_inf - 1) ||c||_inf`
pub fn infnorm_bound(inst: &KnapsackInstance, cost: &CostVector) -> Rational {
    rational::uint(2 * (inst.max_norm() - 1)) * cost.inf_norm()
}

/// `(g(A) + ||A||_inf) ||c||_1 / min(A)`
pub fn frobenius_gap_bound(inst: &KnapsackInstance, cost: &CostVector) -> Result<Rational> {
    let g = frobenius(inst)?;
    let numer = rational::int(g + inst.max_norm() as i64) * cost.l1_norm();
    Ok(numer / rational::uint(inst.min_entry()))
}

/// A certified lower estimate of the simplex covering constant `rho_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoEstimate {
    pub d: u32,
    pub value: Rational,
    /// The constant itself is known (`d` is 1 or 2); `value` is then exact or a
    /// rounded-down approximation of it.
    pub exact: bool,
}

pub fn rho_lower(d: u32) -> RhoEstimate {
    rho_lower_with(d, DEFAULT_PRECISION_BITS)
}

/// `rho_1 = 1`, `rho_2 = sqrt(3)`, and `rho_d > (d!)^(1/d)` otherwise.
/// Every value is rounded down.
pub fn rho_lower_with(d: u32, bits: u32) -> RhoEstimate {
    assert!(d >= 1, "rho_d needs d >= 1");
    match d {
        1 => RhoEstimate {
            d,
            value: Rational::one(),
            exact: true,
        },
        2 => RhoEstimate {
            d,
            value: rational::floor_root(&rational::int(3), 2, bits),
            exact: true,
        },
        _ => {
            let factorial: BigInt = (1..=d).map(BigInt::from).product();
            RhoEstimate {
                d,
                value: rational::floor_root(&Rational::from_integer(factorial), d, bits),
                exact: false,
            }
        }
    }
}

/// `rho_{n-1} (a_tau l_1 ... l_{n-1})^(1/(n-1)) - ||l||_1` for generic `(A, c)`,
/// `None` otherwise. Rounded down, so it stays a valid lower bound.
pub fn covering_lower_bound(
    inst: &KnapsackInstance,
    cost: &CostVector,
) -> Result<Option<Rational>> {
    covering_lower_bound_with(inst, cost, DEFAULT_PRECISION_BITS)
}

pub fn covering_lower_bound_with(
    inst: &KnapsackInstance,
    cost: &CostVector,
    bits: u32,
) -> Result<Option<Rational>> {
    let basis = basis_reduction(inst, cost)?;
    if !basis.generic {
        return Ok(None);
    }
    let d = (inst.dim() - 1) as u32;
    let product = basis
        .l
        .iter()
        .fold(rational::uint(inst.get(basis.tau)), |acc, l| acc * l);
    let root = rational::floor_root(&product, d, bits);
    let rho = rho_lower_with(d, bits).value;
    Ok(Some(rho * root - rational::l1_norm(&basis.l)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub schur: i64,
    #[serde(with = "serde_rational")]
    pub cook: Rational,
    #[serde(with = "serde_rational")]
    pub norm_upper: Rational,
    #[serde(with = "serde_rational")]
    pub infnorm_upper: Rational,
    #[serde(with = "serde_rational::option")]
    pub covering_lower: Option<Rational>,
    #[serde(with = "serde_rational")]
    pub frobenius_upper: Rational,
    #[serde(with = "serde_rational")]
    pub gap: Rational,
    pub all_satisfied: bool,
}

/// Evaluates every bound and checks `covering <= gap <= min(norm, infnorm, frobenius, cook)`.
pub fn check_bounds(
    inst: &KnapsackInstance,
    cost: &CostVector,
    gap: &Rational,
) -> Result<BoundReport> {
    let cook = cook_gap_bound(inst, cost);
    let norm_upper = norm_gap_bound(inst, cost);
    let infnorm_upper = infnorm_bound(inst, cost);
    let frobenius_upper = frobenius_gap_bound(inst, cost)?;
    let covering_lower = covering_lower_bound(inst, cost)?;
    let uppers_hold = [&cook, &norm_upper, &infnorm_upper, &frobenius_upper]
        .iter()
        .all(|u| gap <= *u);
    let lower_holds = covering_lower.as_ref().is_none_or(|lo| lo <= gap);
    Ok(BoundReport {
        schur: schur_bound(inst),
        cook,
        norm_upper,
        infnorm_upper,
        covering_lower,
        frobenius_upper,
        gap: gap.clone(),
        all_satisfied: uppers_hold && lower_holds,
    })
}
