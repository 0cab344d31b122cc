//! Lovász's bidiagonal example: a canonical-form program whose LP optimum is
//! far from the unique integer optimum `0`.
//!
//! ```text
//!  x_1                 <= beta
//! -x_{i-1} + x_i       <= beta      (i = 2..n-1)
//! -delta x_{n-1} + x_n <= beta
//! minimize -(x_1 + ... + x_n)
//! ```
//!
//! Everything is checked from closed forms: LP optimality through an explicit
//! dual certificate, integer optimality through row-by-row integer upper bounds.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::serde_rational;

/// Largest `n` for which the maximum subdeterminant is brute-forced.
pub const MAX_SUBDET_DIM: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LovaszExample {
    pub n: usize,
    pub delta: u64,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    pub matrix: Vec<Vec<i64>>,
    #[serde(with = "serde_rational::vec")]
    pub lp_solution: Vec<Rational>,
    pub ip_solution: Vec<i64>,
    /// `||lp - ip||_inf = (delta (n - 1) + 1) beta`
    #[serde(with = "serde_rational")]
    pub distance: Rational,
    /// Nonnegative `y` with `A^T y = 1`; certifies LP optimality, and strict
    /// positivity makes every row tight at any optimum.
    #[serde(with = "serde_rational::vec")]
    pub dual: Vec<Rational>,
    /// Upper bounds on each coordinate of an integer feasible point.
    pub integer_upper_bounds: Vec<i64>,
    /// Maximum absolute subdeterminant, when `n <= MAX_SUBDET_DIM`.
    pub max_subdeterminant: Option<i128>,
    pub lp_rows_tight: bool,
    pub dual_feasible: bool,
    pub ip_optimal: bool,
}

impl LovaszExample {
    pub fn verified(&self) -> bool {
        self.lp_rows_tight && self.dual_feasible && self.ip_optimal
    }
}

/// Coefficient of `x_{i-1}` in row `i` (rows `1..n`), negated.
fn link(n: usize, delta: u64, i: usize) -> i64 {
    if i == n - 1 {
        delta as i64
    } else {
        1
    }
}

pub fn lovasz_example(n: usize, delta: u64, beta: &Rational) -> Result<LovaszExample> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if delta < 1 {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} must be at least 1"
        )));
    }
    if !beta.is_positive() || *beta >= rational::int(1) {
        return Err(Error::BetaOutOfRange(beta.to_string()));
    }

    let mut matrix = vec![vec![0i64; n]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = 1;
        if i > 0 {
            row[i - 1] = -link(n, delta, i);
        }
    }

    let mut lp_solution: Vec<Rational> = (1..n).map(|i| rational::uint(i as u64) * beta).collect();
    lp_solution.push(rational::uint(delta * (n as u64 - 1) + 1) * beta);

    let lp_rows_tight = matrix.iter().all(|row| {
        let lhs = row
            .iter()
            .zip(&lp_solution)
            .fold(Rational::zero(), |acc, (&a, x)| acc + rational::int(a) * x);
        lhs == *beta
    });

    // A^T y = 1, solved from the last column backwards
    let mut dual = vec![Rational::zero(); n];
    dual[n - 1] = rational::int(1);
    for j in (0..n - 1).rev() {
        dual[j] = rational::int(1) + rational::int(link(n, delta, j + 1)) * &dual[j + 1];
    }
    let dual_feasible = dual.iter().all(|y| !y.is_negative())
        && (0..n).all(|j| {
            let col = (0..n).fold(Rational::zero(), |acc, i| {
                acc + rational::int(matrix[i][j]) * &dual[i]
            });
            col == rational::int(1)
        });

    // x_1 <= beta, x_i <= beta + link * x_{i-1}, with integrality
    let mut integer_upper_bounds = Vec::with_capacity(n);
    let mut prev = 0i64;
    for i in 0..n {
        let bound = if i == 0 {
            beta.clone()
        } else {
            beta + rational::int(link(n, delta, i) * prev)
        };
        let ub = bound.floor().to_integer();
        prev = i64::try_from(ub).expect("small bound");
        integer_upper_bounds.push(prev);
    }
    let ip_solution = vec![0i64; n];
    // 0 is feasible since beta > 0, and every feasible integer point is <= 0
    // coordinatewise, so the objective -sum(x) is minimized at 0 only.
    let ip_optimal = integer_upper_bounds.iter().all(|&u| u == 0);

    let distance = lp_solution.iter().map(Signed::abs).max().expect("n >= 2");

    let max_subdeterminant = (n <= MAX_SUBDET_DIM).then(|| max_subdeterminant(&matrix));

    Ok(LovaszExample {
        n,
        delta,
        beta: beta.clone(),
        matrix,
        lp_solution,
        ip_solution,
        distance,
        dual,
        integer_upper_bounds,
        max_subdeterminant,
        lp_rows_tight,
        dual_feasible,
        ip_optimal,
    })
}

/// Maximum `|det|` over all square submatrices, by enumeration.
pub fn max_subdeterminant(matrix: &[Vec<i64>]) -> i128 {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut best = 0i128;
    for k in 1..=rows.min(cols) {
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = r
                    .iter()
                    .map(|&i| c.iter().map(|&j| i128::from(matrix[i][j])).collect())
                    .collect();
                best = best.max(bareiss_det(sub).abs());
            }
        }
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}
