//! Knapsack instances, cost vectors and the closed-form LP relaxation.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A row `A = (a_1, ..., a_n)` with `n >= 2`, positive entries and `gcd(A) = 1`.
///
/// Entries are kept in the order given; nothing here sorts them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u64>")]
pub struct KnapsackInstance {
    a: Vec<u64>,
}

impl KnapsackInstance {
    pub fn new(raw: &[i64]) -> Result<Self> {
        validate_instance(raw)
    }

    pub fn from_entries(a: Vec<u64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::DimensionTooSmall { n: a.len() });
        }
        if let Some(index) = a.iter().position(|&v| v == 0) {
            return Err(Error::NonPositiveEntry {
                index: index + 1,
                value: 0,
            });
        }
        let gcd = a.iter().fold(0u64, |g, &v| g.gcd(&v));
        if gcd != 1 {
            return Err(Error::NotCoprime { gcd });
        }
        Ok(KnapsackInstance { a })
    }

    pub fn entries(&self) -> &[u64] {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn get(&self, i: usize) -> u64 {
        self.a[i]
    }

    /// The last coordinate `a_n` as given.
    pub fn last(&self) -> u64 {
        *self.a.last().expect("n >= 2")
    }

    /// `||A||_inf`
    pub fn max_norm(&self) -> u64 {
        *self.a.iter().max().expect("n >= 2")
    }

    pub fn min_entry(&self) -> u64 {
        *self.a.iter().min().expect("n >= 2")
    }

    /// Index of the first minimal entry.
    pub fn argmin(&self) -> usize {
        let m = self.min_entry();
        self.a.iter().position(|&v| v == m).unwrap()
    }

    pub fn sum(&self) -> u128 {
        self.a.iter().map(|&v| u128::from(v)).sum()
    }

    /// Entries with index `tau` removed, in original order.
    pub fn without(&self, tau: usize) -> Vec<u64> {
        self.a
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != tau)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.dim(),
            })
        }
    }
}

impl TryFrom<Vec<i64>> for KnapsackInstance {
    type Error = Error;

    fn try_from(raw: Vec<i64>) -> Result<Self> {
        validate_instance(&raw)
    }
}

impl From<KnapsackInstance> for Vec<u64> {
    fn from(inst: KnapsackInstance) -> Self {
        inst.a
    }
}

impl fmt::Display for KnapsackInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Checks the standing assumptions on `A` and builds the instance.
pub fn validate_instance(raw: &[i64]) -> Result<KnapsackInstance> {
    if raw.len() < 2 {
        return Err(Error::DimensionTooSmall { n: raw.len() });
    }
    if let Some((index, &value)) = raw.iter().enumerate().find(|(_, &v)| v < 1) {
        return Err(Error::NonPositiveEntry {
            index: index + 1,
            value,
        });
    }
    KnapsackInstance::from_entries(raw.iter().map(|&v| v as u64).collect())
}

/// Exact rational cost vector `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostVector {
    c: Vec<Rational>,
}

impl CostVector {
    pub fn new(c: Vec<Rational>) -> Self {
        CostVector { c }
    }

    pub fn from_integers(c: &[i64]) -> Self {
        CostVector {
            c: c.iter().map(|&v| rational::int(v)).collect(),
        }
    }

    /// The unit vector `e_i` (zero-based `i`) of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = vec![Rational::zero(); n];
        c[i] = rational::int(1);
        CostVector { c }
    }

    pub fn values(&self) -> &[Rational] {
        &self.c
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn l1_norm(&self) -> Rational {
        rational::l1_norm(&self.c)
    }

    pub fn inf_norm(&self) -> Rational {
        self.c
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn scaled(&self, lambda: &Rational) -> Self {
        CostVector {
            c: self.c.iter().map(|x| x * lambda).collect(),
        }
    }

    pub fn check_against(&self, inst: &KnapsackInstance) -> Result<()> {
        if self.c.len() == inst.dim() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: inst.dim(),
                got: self.c.len(),
            })
        }
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(Rational::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Basic variable of the LP relaxation and the reduced costs on the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisReduction {
    /// Zero-based index of the basic variable.
    pub tau: usize,
    /// `c_tau / a_tau = min_i c_i / a_i`
    pub slope: Rational,
    /// `l_j = c_j - slope * a_j` for `j != tau`, in original order.
    pub l: Vec<Rational>,
    /// The minimizer of `c_i / a_i` is unique.
    pub generic: bool,
}

/// Picks the basic variable (smallest index among minimizers of `c_i / a_i`)
/// and the reduced costs of the remaining variables.
pub fn basis_reduction(inst: &KnapsackInstance, cost: &CostVector) -> Result<BasisReduction> {
    cost.check_against(inst)?;
    let ratios: Vec<Rational> = cost
        .values()
        .iter()
        .zip(inst.entries())
        .map(|(c, &a)| c / rational::uint(a))
        .collect();
    let mut tau = 0;
    for (i, r) in ratios.iter().enumerate().skip(1) {
        if *r < ratios[tau] {
            tau = i;
        }
    }
    let slope = ratios[tau].clone();
    let generic = ratios.iter().filter(|r| **r == slope).count() == 1;
    let l = (0..inst.dim())
        .filter(|&j| j != tau)
        .map(|j| &cost.values()[j] - &slope * rational::uint(inst.get(j)))
        .collect();
    Ok(BasisReduction {
        tau,
        slope,
        l,
        generic,
    })
}

/// `LP_c(A, b) = b * min_i c_i / a_i`: the feasible region is the simplex
/// with vertices `(b / a_i) e_i`.
pub fn lp_value(inst: &KnapsackInstance, cost: &CostVector, b: i64) -> Result<Rational> {
    if b < 0 {
        return Err(Error::NegativeRhs(b));
    }
    let basis = basis_reduction(inst, cost)?;
    Ok(basis.slope * rational::int(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn validation() {
        assert_eq!(validate_instance(&[3, 5]).unwrap().entries(), &[3, 5]);
        assert!(matches!(
            validate_instance(&[2, 4]),
            Err(Error::NotCoprime { gcd: 2 })
        ));
        assert!(validate_instance(&[6, 9, 20]).is_ok());
        assert!(matches!(
            validate_instance(&[6, 9, 15]),
            Err(Error::NotCoprime { gcd: 3 })
        ));
        assert!(matches!(
            validate_instance(&[3, 0, 5]),
            Err(Error::NonPositiveEntry { index: 2, value: 0 })
        ));
        assert!(matches!(
            validate_instance(&[3, -5]),
            Err(Error::NonPositiveEntry {
                index: 2,
                value: -5
            })
        ));
        assert!(matches!(
            validate_instance(&[1]),
            Err(Error::DimensionTooSmall { n: 1 })
        ));
        // order is preserved
        assert_eq!(
            validate_instance(&[20, 6, 9]).unwrap().entries(),
            &[20, 6, 9]
        );
    }

    #[test]
    fn not_coprime_message_names_condition() {
        let msg = validate_instance(&[2, 4]).unwrap_err().to_string();
        assert!(msg.contains("gcd(a) != 1, condition (ii)"), "{msg}");
    }

    #[test]
    fn basis_examples() {
        let a = validate_instance(&[3, 5]).unwrap();
        let br = basis_reduction(&a, &CostVector::from_integers(&[3, 0])).unwrap();
        assert_eq!(br.tau, 1);
        assert_eq!(br.slope, int(0));
        assert_eq!(br.l, vec![int(3)]);
        assert!(br.generic);

        let br = basis_reduction(&a, &CostVector::from_integers(&[3, 5])).unwrap();
        assert_eq!(br.tau, 0);
        assert_eq!(br.slope, int(1));
        assert_eq!(br.l, vec![int(0)]);
        assert!(!br.generic);

        // A = (k,k,k,1), c = e_n
        let a = validate_instance(&[7, 7, 7, 1]).unwrap();
        let br = basis_reduction(&a, &CostVector::unit(4, 3)).unwrap();
        assert_eq!(br.tau, 0);
        assert_eq!(br.slope, int(0));
        assert_eq!(br.l, vec![int(0), int(0), int(1)]);
        assert!(!br.generic);
    }

    #[test]
    fn basis_rejects_length_mismatch() {
        let a = validate_instance(&[3, 5]).unwrap();
        assert!(matches!(
            basis_reduction(&a, &CostVector::from_integers(&[1, 2, 3])),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn lp_examples() {
        let a = validate_instance(&[3, 5]).unwrap();
        let c = CostVector::from_integers(&[3, 0]);
        assert_eq!(lp_value(&a, &c, 7).unwrap(), int(0));
        assert_eq!(lp_value(&a, &c, 0).unwrap(), int(0));
        assert!(matches!(lp_value(&a, &c, -1), Err(Error::NegativeRhs(-1))));

        let a = validate_instance(&[2, 3]).unwrap();
        assert_eq!(
            lp_value(&a, &CostVector::from_integers(&[1, 1]), 6).unwrap(),
            int(2)
        );
        assert_eq!(
            lp_value(&a, &CostVector::new(vec![frac(-1, 2), int(1)]), 4).unwrap(),
            int(-1)
        );
    }

    #[test]
    fn serde_validates() {
        let inst: KnapsackInstance = serde_json::from_str("[6,9,20]").unwrap();
        assert_eq!(inst.entries(), &[6, 9, 20]);
        assert!(serde_json::from_str::<KnapsackInstance>("[2,4]").is_err());
        assert_eq!(serde_json::to_string(&inst).unwrap(), "[6,9,20]");
    }

    fn instance_and_cost() -> impl Strategy<Value = (KnapsackInstance, CostVector)> {
        (2usize..6)
            .prop_flat_map(|n| {
                (
                    proptest::collection::vec(1i64..40, n),
                    proptest::collection::vec((-9i64..10, 1i64..5), n),
                )
            })
            .prop_filter_map("coprime", |(a, c)| {
                let inst = validate_instance(&a).ok()?;
                let c = CostVector::new(c.into_iter().map(|(p, q)| frac(p, q)).collect());
                Some((inst, c))
            })
    }

    proptest! {
        #[test]
        fn lp_is_linear_in_b((inst, c) in instance_and_cost(), b1 in 0i64..500, b2 in 0i64..500) {
            let sum = lp_value(&inst, &c, b1 + b2).unwrap();
            prop_assert_eq!(sum, lp_value(&inst, &c, b1).unwrap() + lp_value(&inst, &c, b2).unwrap());
        }

        #[test]
        fn reduced_costs_reconstruct_c((inst, c) in instance_and_cost()) {
            let br = basis_reduction(&inst, &c).unwrap();
            let others: Vec<usize> = (0..inst.dim()).filter(|&j| j != br.tau).collect();
            for (l, &j) in br.l.iter().zip(&others) {
                prop_assert!(*l >= int(0));
                prop_assert_eq!(&c.values()[j], &(&br.slope * rational::uint(inst.get(j)) + l));
            }
            prop_assert_eq!(br.generic, br.l.iter().all(|l| *l > int(0)));
        }

        #[test]
        fn positive_scaling((inst, c) in instance_and_cost(), p in 1i64..20, q in 1i64..20) {
            let lambda = frac(p, q);
            let br = basis_reduction(&inst, &c).unwrap();
            let scaled = basis_reduction(&inst, &c.scaled(&lambda)).unwrap();
            prop_assert_eq!(br.tau, scaled.tau);
            let expect: Vec<Rational> = br.l.iter().map(|l| l * &lambda).collect();
            prop_assert_eq!(scaled.l, expect);
        }

        #[test]
        fn permutation_moves_tau((inst, c) in instance_and_cost(), rot in 0usize..5) {
            // with ties the smallest-index rule depends on the order, so only generic costs
            let br = basis_reduction(&inst, &c).unwrap();
            prop_assume!(br.generic);
            let n = inst.dim();
            let k = rot % n;
            let perm: Vec<usize> = (0..n).map(|i| (i + k) % n).collect();
            let a2: Vec<u64> = perm.iter().map(|&i| inst.get(i)).collect();
            let c2: Vec<Rational> = perm.iter().map(|&i| c.values()[i].clone()).collect();
            let br2 = basis_reduction(
                &KnapsackInstance::from_entries(a2).unwrap(),
                &CostVector::new(c2),
            ).unwrap();
            prop_assert_eq!(perm[br2.tau], br.tau);
            let mut l_by_index = std::collections::BTreeMap::new();
            let others: Vec<usize> = (0..n).filter(|&j| j != br.tau).collect();
            for (l, &j) in br.l.iter().zip(&others) {
                l_by_index.insert(j, l.clone());
            }
            let others2: Vec<usize> = (0..n).filter(|&j| j != br2.tau).collect();
            for (l, &j) in br2.l.iter().zip(&others2) {
                prop_assert_eq!(&l_by_index[&perm[j]], l);
            }
        }
    }
}
