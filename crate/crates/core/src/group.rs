//! Group relaxation: minima of a nonnegative weight over residue classes.
//!
//! For a basic index `tau` the lattice `{x : A_{-tau} x = 0 mod a_tau}` has one
//! coset per residue `r mod a_tau`, so the group problem is a single-source
//! shortest path on the cycle `Z_{a_tau}` with an arc `r -> r + a_j` of weight
//! `w_j` for every non-basic generator `j`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Add;

use num_traits::{Signed, Zero};

use crate::bounds::schur_bound;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::KnapsackInstance;
use crate::rational::{self, Rational};

/// Per-residue minima `m(Lambda, w, r)` with one minimizer per residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    modulus: u64,
    tau: usize,
    generators: Vec<u64>,
    weights: Vec<Rational>,
    minima: Vec<Rational>,
    witness: Vec<Vec<u64>>,
    load: Vec<u64>,
}

impl GroupTable {
    /// `a_tau`, the number of residue classes.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// `a_j` for `j != tau`, in original order.
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn minima(&self) -> &[Rational] {
        &self.minima
    }

    /// `witness[r]` attains `minima[r]`.
    pub fn witness(&self) -> &[Vec<u64>] {
        &self.witness
    }

    /// `load[r] = A_{-tau} . witness[r]`
    pub fn load(&self) -> &[u64] {
        &self.load
    }

    /// The lattice programming gap `max_r m(Lambda, w, r)`.
    pub fn lattice_gap(&self) -> Rational {
        self.minima
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

pub fn lattice_gap(table: &GroupTable) -> Rational {
    table.lattice_gap()
}

struct ResiduePaths<W> {
    dist: Vec<W>,
    /// `(predecessor residue, generator index)`
    pred: Vec<Option<(usize, usize)>>,
    /// Residues in the order they were settled.
    order: Vec<usize>,
}

/// Dijkstra on `Z_modulus` from 0. Exact ties keep the smaller generator index.
fn residue_paths<W>(modulus: usize, steps: &[usize], weights: &[W], zero: W) -> ResiduePaths<W>
where
    W: Clone + Ord + Add<Output = W>,
{
    let mut dist: Vec<Option<W>> = vec![None; modulus];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; modulus];
    let mut settled = vec![false; modulus];
    let mut order = Vec::with_capacity(modulus);
    let mut heap = BinaryHeap::new();

    dist[0] = Some(zero.clone());
    heap.push(Reverse((zero, 0usize)));

    while let Some(Reverse((d, u))) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        order.push(u);
        for (j, (&step, w)) in steps.iter().zip(weights).enumerate() {
            let v = (u + step) % modulus;
            if settled[v] {
                continue;
            }
            let nd = d.clone() + w.clone();
            match &dist[v] {
                Some(cur) if nd > *cur => {}
                Some(cur) if nd == *cur => {
                    if pred[v].is_some_and(|(_, pj)| j < pj) {
                        pred[v] = Some((u, j));
                    }
                }
                _ => {
                    dist[v] = Some(nd.clone());
                    pred[v] = Some((u, j));
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }

    let dist = dist
        .into_iter()
        .map(|d| d.expect("every residue is reachable when gcd(A) = 1"))
        .collect();
    ResiduePaths { dist, pred, order }
}

fn check_table_args(
    inst: &KnapsackInstance,
    tau: usize,
    w: &[Rational],
    limits: &Limits,
) -> Result<()> {
    inst.check_index(tau)?;
    if w.len() != inst.dim() - 1 {
        return Err(Error::LengthMismatch {
            expected: inst.dim() - 1,
            got: w.len(),
        });
    }
    if let Some(index) = w.iter().position(Signed::is_negative) {
        return Err(Error::NegativeWeight { index: index + 1 });
    }
    limits.check("group table", u128::from(inst.get(tau)))
}

/// Solves the group problem for every residue class modulo `a_tau`.
///
/// `tau` is zero-based; `w` holds one weight per index `j != tau`, in order.
pub fn group_minima(inst: &KnapsackInstance, tau: usize, w: &[Rational]) -> Result<GroupTable> {
    group_minima_with(inst, tau, w, &Limits::default())
}

pub fn group_minima_with(
    inst: &KnapsackInstance,
    tau: usize,
    w: &[Rational],
    limits: &Limits,
) -> Result<GroupTable> {
    check_table_args(inst, tau, w, limits)?;
    let modulus = inst.get(tau);
    let m = modulus as usize;
    let generators = inst.without(tau);
    let steps: Vec<usize> = generators.iter().map(|&a| (a % modulus) as usize).collect();
    let paths = residue_paths(m, &steps, w, Rational::zero());

    let k = generators.len();
    let mut witness = vec![Vec::new(); m];
    let mut load = vec![0u64; m];
    witness[0] = vec![0u64; k];
    for &u in paths.order.iter().skip(1) {
        let (p, j) = paths.pred[u].expect("settled residue has a predecessor");
        let mut x = witness[p].clone();
        x[j] += 1;
        witness[u] = x;
        load[u] = load[p] + generators[j];
    }

    Ok(GroupTable {
        modulus,
        tau,
        generators,
        weights: w.to_vec(),
        minima: paths.dist,
        witness,
        load,
    })
}

/// Frobenius number `g(A)`, or `-1` when every `b >= 0` is representable.
///
/// With weights equal to the generators the residue minima are the smallest
/// representable numbers in each class modulo a minimal entry.
pub fn frobenius(inst: &KnapsackInstance) -> Result<i64> {
    frobenius_with(inst, &Limits::default())
}

pub fn frobenius_with(inst: &KnapsackInstance, limits: &Limits) -> Result<i64> {
    let tau = inst.argmin();
    let modulus = inst.get(tau);
    limits.check("group table", u128::from(modulus))?;
    let generators = inst.without(tau);
    let steps: Vec<usize> = generators.iter().map(|&a| (a % modulus) as usize).collect();
    let weights: Vec<u128> = generators.iter().map(|&a| u128::from(a)).collect();
    let paths = residue_paths(modulus as usize, &steps, &weights, 0u128);
    let max = paths.dist.into_iter().max().unwrap_or(0);
    Ok(i64::try_from(max).expect("Frobenius number fits in i64") - modulus as i64)
}

/// Independent check of [`frobenius`]: a representability sieve up to the
/// Schur bound, which every Frobenius number respects.
pub fn frobenius_sieve_oracle(inst: &KnapsackInstance) -> Result<i64> {
    frobenius_sieve_oracle_with(inst, &Limits::default())
}

pub fn frobenius_sieve_oracle_with(inst: &KnapsackInstance, limits: &Limits) -> Result<i64> {
    let bound = schur_bound(inst);
    if bound < 0 {
        return Ok(-1);
    }
    let len = bound as u128 + 1;
    limits.check("representability sieve", len)?;
    let len = len as usize;
    let mut representable = vec![false; len];
    representable[0] = true;
    for b in 1..len {
        representable[b] = inst
            .entries()
            .iter()
            .any(|&a| (a as usize) <= b && representable[b - a as usize]);
    }
    Ok(representable
        .iter()
        .rposition(|&r| !r)
        .map_or(-1, |b| b as i64))
}

/// Minimum of `w . x` over `x in [0, radius]^(n-1)` with `A_{-tau} x = r mod a_tau`,
/// by enumerating the box.
pub fn group_min_bruteforce(
    inst: &KnapsackInstance,
    tau: usize,
    w: &[Rational],
    r: u64,
    radius: u64,
) -> Result<Rational> {
    let limits = Limits::default();
    check_table_args(inst, tau, w, &limits)?;
    let k = inst.dim() - 1;
    let side = u128::from(radius) + 1;
    limits.check(
        "enumeration box",
        side.checked_pow(k as u32).unwrap_or(u128::MAX),
    )?;

    let modulus = inst.get(tau);
    let residue = r % modulus;
    let generators = inst.without(tau);
    let mut x = vec![0u64; k];
    let mut best: Option<Rational> = None;
    loop {
        let lhs: u128 = x
            .iter()
            .zip(&generators)
            .map(|(&xi, &a)| u128::from(xi) * u128::from(a))
            .sum();
        if lhs % u128::from(modulus) == u128::from(residue) {
            let value = x.iter().zip(w).fold(Rational::zero(), |acc, (&xi, wi)| {
                acc + rational::uint(xi) * wi
            });
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
        // odometer
        let mut i = 0;
        while i < k && x[i] == radius {
            x[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        x[i] += 1;
    }
    best.ok_or(Error::NoPointInBox { residue, radius })
}

/// `mu(S_A, Lambda_A) = g(A) + a_1 + ... + a_n`
pub fn covering_radius_simplex(inst: &KnapsackInstance) -> Result<i64> {
    Ok(frobenius(inst)? + inst.sum() as i64)
}

/// `mu(S_A, Lambda_A; Z^(n-1)) = g(A) + a_n`
pub fn covering_radius_integral(inst: &KnapsackInstance) -> Result<i64> {
    Ok(frobenius(inst)? + inst.last() as i64)
}

/// Group table with `tau = n` and `w = (a_1, ..., a_{n-1})`, whose lattice gap
/// is the integral covering radius.
pub fn kannan_table(inst: &KnapsackInstance) -> Result<GroupTable> {
    let tau = inst.dim() - 1;
    let w: Vec<Rational> = inst.without(tau).into_iter().map(rational::uint).collect();
    group_minima(inst, tau, &w)
}
