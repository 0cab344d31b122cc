//! Acceptance suite. Prints one PASS/FAIL line per criterion to stderr
//! (uncaptured), then fails if any criterion failed.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use knapgap::bounds::{check_bounds, covering_lower_bound, norm_gap_bound};
use knapgap::experiments::{mean_experiment, tail_experiment, ExperimentConfig};
use knapgap::gap::{gap_bruteforce, gap_exact};
use knapgap::group::{frobenius, frobenius_sieve_oracle, kannan_table};
use knapgap::instances::{frobenius_cost, tightness_family};
use knapgap::lovasz::lovasz_example;
use knapgap::rational::{frac, int, to_f64, uint};
use knapgap::{CostVector, KnapsackInstance, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

const FROBENIUS_INSTANCES: usize = 500;
const FROBENIUS_BUDGET: Duration = Duration::from_secs(10);
const SYLVESTER_PAIRS: usize = 200;
const KANNAN_INSTANCES: usize = 200;
const GAP_INSTANCES: usize = 200;
const GAP_BUDGET: Duration = Duration::from_secs(60);
const FROBENIUS_COST_INSTANCES: usize = 100;
const TAIL_SAMPLES: usize = 10_000;
const TAIL_T: u64 = 2_000;
const TAIL_SLOPE_MAX: f64 = -1.0;
const TAIL_BUDGET: Duration = Duration::from_secs(300);
const MEAN_LADDER: [u64; 4] = [250, 500, 1_000, 2_000];
const MEAN_SAMPLES: usize = 5_000;
const MEAN_GROWTH_MAX: i64 = 2;
const MEAN_LOWER_MIN: (i64, i64) = (1, 20);
const EXPERIMENT_SEED: u64 = 1;

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: u32, name: &str, outcome: &Outcome) {
    let tag = if outcome.pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "{tag} [{id:>2}] {name}: {}",
        outcome.detail
    );
}

fn coprime(a: &[u64]) -> bool {
    a.iter().fold(0u64, |g, &v| num_gcd(g, v)) == 1
}

fn num_gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// `count` seeded coprime instances with `n` in `dims` and entries in `1..=max_a`.
fn random_instances(
    stream: u64,
    count: usize,
    dims: (usize, usize),
    max_a: u64,
) -> Vec<KnapsackInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    rng.set_stream(stream);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(dims.0..=dims.1);
        let a: Vec<u64> = (0..n).map(|_| rng.random_range(1..=max_a)).collect();
        if coprime(&a) {
            out.push(KnapsackInstance::from_entries(a).unwrap());
        }
    }
    out
}

/// Costs with numerators in `[-5, 5]` and denominators in `1..=4`.
fn random_cost(rng: &mut ChaCha8Rng, n: usize) -> CostVector {
    CostVector::new(
        (0..n)
            .map(|_| frac(rng.random_range(-5..=5), rng.random_range(1..=4)))
            .collect(),
    )
}

fn gap_cases() -> Vec<(KnapsackInstance, CostVector)> {
    let insts = random_instances(4, GAP_INSTANCES, (2, 4), 25);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    rng.set_stream(40);
    insts
        .into_iter()
        .map(|a| {
            let c = random_cost(&mut rng, a.dim());
            (a, c)
        })
        .collect()
}

fn frobenius_oracle() -> Outcome {
    let insts = random_instances(1, FROBENIUS_INSTANCES, (2, 5), 100);
    let start = Instant::now();
    let mismatches = insts
        .iter()
        .filter(|a| frobenius(a).unwrap() != frobenius_sieve_oracle(a).unwrap())
        .count();
    let elapsed = start.elapsed();
    Outcome {
        pass: mismatches == 0 && elapsed < FROBENIUS_BUDGET,
        detail: format!(
            "{}/{} agree, {:.2?} (budget {:?})",
            insts.len() - mismatches,
            insts.len(),
            elapsed,
            FROBENIUS_BUDGET
        ),
    }
}

fn sylvester() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    rng.set_stream(2);
    let mut bad = 0;
    let mut tested = 0;
    while tested < SYLVESTER_PAIRS {
        let (p, q) = (rng.random_range(1..=1000u64), rng.random_range(1..=1000u64));
        if num_gcd(p, q) != 1 {
            continue;
        }
        tested += 1;
        let a = KnapsackInstance::from_entries(vec![p, q]).unwrap();
        if frobenius(&a).unwrap() != (p * q) as i64 - p as i64 - q as i64 {
            bad += 1;
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{} of {tested} pairs match a1*a2 - a1 - a2", tested - bad),
    }
}

fn kannan() -> Outcome {
    let insts = random_instances(3, KANNAN_INSTANCES, (2, 4), 200);
    let bad = insts
        .iter()
        .filter(|a| {
            kannan_table(a).unwrap().lattice_gap() != int(frobenius(a).unwrap() + a.last() as i64)
        })
        .count();
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} of {} satisfy max group minimum = g + a_n",
            insts.len() - bad,
            insts.len()
        ),
    }
}

fn gap_oracle(cases: &[(KnapsackInstance, CostVector)]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (a, c) in cases {
        let r = gap_exact(a, c).unwrap();
        let brute = gap_bruteforce(a, c, r.threshold + 2 * r.modulus).unwrap();
        if r.gap != brute {
            bad.push(format!("{a} {c}"));
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: bad.is_empty() && elapsed < GAP_BUDGET,
        detail: format!(
            "{} of {} agree with the sweep to B* + 2 a_tau, {:.2?} (budget {:?}){}",
            cases.len() - bad.len(),
            cases.len(),
            elapsed,
            GAP_BUDGET,
            if bad.is_empty() {
                String::new()
            } else {
                format!("; first mismatch {}", bad[0])
            }
        ),
    }
}

fn tightness() -> Outcome {
    let mut bad = Vec::new();
    for k in 2..=64u64 {
        for n in 2..=4 {
            let (a, c) = tightness_family(k, n).unwrap();
            let gap = gap_exact(&a, &c).unwrap().gap;
            let expect = uint(k - 1);
            if gap != expect || norm_gap_bound(&a, &c) != expect {
                bad.push((k, n));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} of {} (k, n) give gap = k - 1 = norm bound",
            63 * 3 - bad.len(),
            63 * 3
        ),
    }
}

fn sandwich(cases: &[(KnapsackInstance, CostVector)]) -> Outcome {
    let mut violations = 0;
    let mut exact_checked = 0;
    let mut exact_failed = 0;
    for (a, c) in cases {
        let gap = gap_exact(a, c).unwrap().gap;
        if !check_bounds(a, c, &gap).unwrap().all_satisfied {
            violations += 1;
        }
        if a.dim() == 2 {
            if let Some(lo) = covering_lower_bound(a, c).unwrap() {
                exact_checked += 1;
                if lo != gap {
                    exact_failed += 1;
                }
            }
        }
    }
    Outcome {
        pass: violations == 0 && exact_failed == 0 && exact_checked > 0,
        detail: format!(
            "{violations} violations over {} cases; covering lower bound = gap on {} of {exact_checked} generic n = 2 cases",
            cases.len(),
            exact_checked - exact_failed
        ),
    }
}

fn frobenius_cost_link() -> Outcome {
    let insts = random_instances(7, FROBENIUS_COST_INSTANCES, (2, 4), 50);
    let bad = insts
        .iter()
        .filter(|a| {
            gap_exact(a, &frobenius_cost(a)).unwrap().gap
                != int(frobenius(a).unwrap() + a.last() as i64)
        })
        .count();
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} of {} have gap = g + a_n",
            insts.len() - bad,
            insts.len()
        ),
    }
}

fn lovasz() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (n, delta, beta) in [
        (2usize, 1u64, frac(1, 2)),
        (5, 3, frac(1, 2)),
        (8, 4, frac(3, 4)),
    ] {
        let ex = lovasz_example(n, delta, &beta).unwrap();
        let expect = uint(delta * (n as u64 - 1) + 1) * &beta;
        let ok = ex.lp_rows_tight
            && ex.dual_feasible
            && ex.ip_optimal
            && ex.ip_solution.iter().all(|&x| x == 0)
            && ex.distance == expect;
        pass &= ok;
        lines.push(format!("({n},{delta},{beta}) distance {}", ex.distance));
    }
    Outcome {
        pass,
        detail: lines.join("; "),
    }
}

fn tail() -> Outcome {
    let config = ExperimentConfig {
        jobs: 4,
        ..ExperimentConfig::new(3, TAIL_T, TAIL_SAMPLES, EXPERIMENT_SEED, frac(4, 5))
    };
    let start = Instant::now();
    let (_, summary) = tail_experiment(&config).unwrap();
    let elapsed = start.elapsed();
    let slope = summary.fitted_slope;
    Outcome {
        pass: slope.is_some_and(|s| s <= TAIL_SLOPE_MAX) && elapsed < TAIL_BUDGET,
        detail: format!(
            "fitted slope {} over {} thresholds (need <= {TAIL_SLOPE_MAX}), alpha = {}, {:.2?}",
            slope.map_or("none".into(), |s| format!("{s:.4}")),
            summary.fit_points,
            summary
                .alpha_theoretical
                .map_or("none".into(), |a| format!("{a} (slope -{:.4})", to_f64(&a))),
            elapsed
        ),
    }
}

fn ladder(epsilon: Rational) -> Vec<ExperimentConfig> {
    MEAN_LADDER
        .iter()
        .map(|&t| ExperimentConfig {
            jobs: 4,
            ..ExperimentConfig::new(3, t, MEAN_SAMPLES, EXPERIMENT_SEED, epsilon.clone())
        })
        .collect()
}

fn bounded_mean() -> Outcome {
    let upper = mean_experiment(&ladder(frac(4, 5))).unwrap();
    let first = &upper.first().unwrap().1.mean_upper;
    let last = &upper.last().unwrap().1.mean_upper;
    let growth_ok = *last <= int(MEAN_GROWTH_MAX) * first;

    let lower = mean_experiment(&ladder(frac(1, 2))).unwrap();
    let floor = frac(MEAN_LOWER_MIN.0, MEAN_LOWER_MIN.1);
    let lower_ok = lower.iter().all(|(_, s)| s.mean_lower >= floor);

    let ups: Vec<String> = upper
        .iter()
        .map(|(_, s)| format!("{:.4}", to_f64(&s.mean_upper)))
        .collect();
    let los: Vec<String> = lower
        .iter()
        .map(|(_, s)| format!("{:.4}", to_f64(&s.mean_lower)))
        .collect();
    Outcome {
        pass: growth_ok && lower_ok,
        detail: format!(
            "mean ratio_upper (eps 4/5) over T {:?}: [{}], need last <= {MEAN_GROWTH_MAX} x first; mean ratio_lower (eps 1/2): [{}], need >= {floor}",
            MEAN_LADDER,
            ups.join(", "),
            los.join(", ")
        ),
    }
}

fn run_csv(args: &[&str], jobs: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_knapgap"))
        .args(args)
        .args(["--format", "csv", "--jobs", jobs])
        .output()
        .expect("run knapgap");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn determinism() -> Outcome {
    let tail_t = TAIL_T.to_string();
    let tail_count = TAIL_SAMPLES.to_string();
    let ladder_t = MEAN_LADDER.map(|t| t.to_string()).join(",");
    let mean_count = MEAN_SAMPLES.to_string();
    let seed = EXPERIMENT_SEED.to_string();
    let runs: [Vec<&str>; 3] = [
        vec![
            "tail",
            "--n",
            "3",
            "--t",
            &tail_t,
            "--count",
            &tail_count,
            "--seed",
            &seed,
            "--epsilon",
            "4/5",
        ],
        vec![
            "mean",
            "--n",
            "3",
            "--t",
            &ladder_t,
            "--count",
            &mean_count,
            "--seed",
            &seed,
            "--epsilon",
            "4/5",
        ],
        vec![
            "mean",
            "--n",
            "3",
            "--t",
            &ladder_t,
            "--count",
            &mean_count,
            "--seed",
            &seed,
            "--epsilon",
            "1/2",
        ],
    ];
    let mut identical = 0;
    let mut rows = 0;
    for args in &runs {
        let single = run_csv(args, "1");
        let parallel = run_csv(args, "4");
        rows += single.iter().filter(|&&b| b == b'\n').count() - 1;
        if single == parallel && !single.is_empty() {
            identical += 1;
        }
    }
    Outcome {
        pass: identical == runs.len(),
        detail: format!(
            "{identical} of {} CSV outputs byte-identical for --jobs 1 vs 4 ({rows} rows)",
            runs.len()
        ),
    }
}

#[test]
fn acceptance() {
    let cases = gap_cases();
    let criteria: Vec<(u32, &str, Check<'_>)> = vec![
        (1, "frobenius vs sieve oracle", Box::new(frobenius_oracle)),
        (2, "two-generator closed form", Box::new(sylvester)),
        (3, "integral covering radius identity", Box::new(kannan)),
        (
            4,
            "exact gap vs brute force",
            Box::new(|| gap_oracle(&cases)),
        ),
        (5, "tight family (k,...,k,1)", Box::new(tightness)),
        (6, "bound sandwich", Box::new(|| sandwich(&cases))),
        (7, "frobenius cost gap", Box::new(frobenius_cost_link)),
        (8, "bidiagonal LP/IP distance", Box::new(lovasz)),
        (9, "tail slope of ratio_upper", Box::new(tail)),
        (10, "bounded means", Box::new(bounded_mean)),
        (11, "parallel determinism of CSV", Box::new(determinism)),
    ];
    let _ = writeln!(std::io::stderr());
    let mut failed = Vec::new();
    for (id, name, check) in &criteria {
        let outcome = check();
        report(*id, name, &outcome);
        if !outcome.pass {
            failed.push(*id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
