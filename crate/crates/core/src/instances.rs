//! Instance generators: the tight family, the Frobenius cost and uniform
//! sampling from `Q(T)`.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CostVector, KnapsackInstance};
use crate::rational;

/// `A = (k, ..., k, 1)` with `n` entries and `c = e_n`; `Gap_c(A) = k - 1`.
pub fn tightness_family(k: u64, n: usize) -> Result<(KnapsackInstance, CostVector)> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must be at least 1"
        )));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let mut a = vec![k; n - 1];
    a.push(1);
    Ok((
        KnapsackInstance::from_entries(a)?,
        CostVector::unit(n, n - 1),
    ))
}

/// `c = (a_1, ..., a_{n-1}, 0)`, for which `Gap_c(A) = g(A) + a_n`.
pub fn frobenius_cost(inst: &KnapsackInstance) -> CostVector {
    let n = inst.dim();
    CostVector::new(
        inst.entries()
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                if i + 1 == n {
                    rational::int(0)
                } else {
                    rational::uint(a)
                }
            })
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub n: usize,
    /// Norm bound `T`.
    #[serde(rename = "T")]
    pub t: u64,
    pub count: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::DimensionTooSmall { n: self.n });
        }
        if self.t < 1 {
            return Err(Error::InvalidParameter("T must be at least 1".into()));
        }
        if self.count < 1 {
            return Err(Error::InvalidParameter("count must be at least 1".into()));
        }
        Ok(())
    }
}

/// The generator for draw `index`: ChaCha8 keyed by `seed`, stream `index`.
/// Draws are independent of each other and of evaluation order.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draw `index` of a uniform sample from `Q(T)`: entries uniform on `1..=T`,
/// rejected until coprime. Also returns the number of attempts.
pub fn draw_q(n: usize, t: u64, seed: u64, index: u64) -> (KnapsackInstance, u64) {
    let mut rng = draw_rng(seed, index);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let a: Vec<u64> = (0..n).map(|_| rng.random_range(1..=t)).collect();
        if a.iter().fold(0u64, |g, &v| g.gcd(&v)) == 1 {
            let inst = KnapsackInstance::from_entries(a).expect("coprime by construction");
            return (inst, attempts);
        }
    }
}

/// I.i.d. uniform draws from `Q(T)`, reproducible from the seed.
pub fn sample_q(config: SamplerConfig) -> Result<impl Iterator<Item = KnapsackInstance>> {
    config.validate()?;
    Ok((0..config.count as u64).map(move |i| draw_q(config.n, config.t, config.seed, i).0))
}

/// `N(T) = #Q(T)` by full enumeration.
pub fn enumerate_q(n: usize, t: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    const MAX_TUPLES: u128 = 50_000_000;
    let total = u128::from(t).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > MAX_TUPLES {
        return Err(Error::BoundTooLarge {
            what: "enumeration of Q(T)",
            needed: total,
            limit: MAX_TUPLES as u64,
        });
    }
    if t == 0 {
        return Ok(0);
    }
    let mut a = vec![1u64; n];
    let mut count = 0;
    loop {
        if a.iter().fold(0u64, |g, &v| g.gcd(&v)) == 1 {
            count += 1;
        }
        let mut i = 0;
        while i < n && a[i] == t {
            a[i] = 1;
            i += 1;
        }
        if i == n {
            return Ok(count);
        }
        a[i] += 1;
    }
}
