//! Monte Carlo check of the random `A`-friendly code argument.
//!
//! Each trial samples `M` words uniformly from `[m]^N`, counts the
//! `q`-subsets that are not `A`-friendly, and deletes every word lying in
//! one. The empirical mean is compared with the exact expectation
//! `C(M, q) (1 - q!|A|/m^q)^N` using the exact variance of the count.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::separation::{binomial, factorial};
use crate::Limits;

const MAX_SYMBOLS: usize = 64;
const DENSE_TABLE_SYMBOLS: usize = 20;
const MAX_VARIANCE_ASSIGNMENTS: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub m: usize,
    pub q: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.m == 0 || self.q == 0 || self.n == 0 || self.big_m == 0 || self.trials == 0 {
            return bad("m, q, N, M and trials must be positive".into());
        }
        if self.q > self.m {
            return bad(format!("q = {} exceeds m = {}", self.q, self.m));
        }
        if self.big_m < self.q {
            return bad(format!("M = {} is below q = {}", self.big_m, self.q));
        }
        if self.m > MAX_SYMBOLS {
            return Err(Error::Unsupported(format!("m above {MAX_SYMBOLS}")));
        }
        Ok(())
    }
}

/// A family of `q`-subsets of `[m]`, stored as symbol bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    m: usize,
    q: usize,
    masks: BTreeSet<u64>,
}

impl SubsetFamily {
    /// Zero-based member lists, each of exactly `q` distinct symbols below `m`.
    pub fn new<S: AsRef<[usize]>>(m: usize, q: usize, sets: &[S]) -> Result<Self> {
        if m > MAX_SYMBOLS {
            return Err(Error::Unsupported(format!("m above {MAX_SYMBOLS}")));
        }
        let mut masks = BTreeSet::new();
        for set in sets {
            let set = set.as_ref();
            let mut mask = 0u64;
            for &x in set {
                if x >= m {
                    return Err(Error::InvalidArgument(format!(
                        "symbol {x} out of range for m = {m}"
                    )));
                }
                mask |= 1 << x;
            }
            if set.len() != q || mask.count_ones() as usize != q {
                return Err(Error::InvalidArgument(format!(
                    "{set:?} is not a {q}-subset"
                )));
            }
            masks.insert(mask);
        }
        Ok(SubsetFamily { m, q, masks })
    }

    /// Every `q`-subset of `[m]`.
    pub fn all(m: usize, q: usize) -> Result<Self> {
        let mut sets = Vec::new();
        for_each_subset(m, q, |s| sets.push(s.to_vec()));
        SubsetFamily::new(m, q, &sets)
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }
}

enum Lookup {
    Dense(Vec<bool>),
    Sparse(HashSet<u64>),
}

impl Lookup {
    fn new(family: &SubsetFamily) -> Self {
        if family.m <= DENSE_TABLE_SYMBOLS {
            let mut t = vec![false; 1 << family.m];
            for &mask in &family.masks {
                t[mask as usize] = true;
            }
            Lookup::Dense(t)
        } else {
            Lookup::Sparse(family.masks.iter().copied().collect())
        }
    }

    fn contains(&self, mask: u64) -> bool {
        match self {
            Lookup::Dense(t) => t[mask as usize],
            Lookup::Sparse(s) => s.contains(&mask),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloReport {
    pub config: ExperimentConfig,
    pub rng: &'static str,
    pub family_size: usize,
    /// `C(M, q) (1 - q!|A|/m^q)^N`.
    pub expected: f64,
    pub variance: f64,
    pub standard_error: f64,
    pub empirical_mean: f64,
    pub within_three_se: bool,
    /// Whether the expectation is at most `M / (2q)`.
    pub condition_holds: bool,
    pub mean_surviving_words: f64,
    /// `ceil(M / 3)`.
    pub target_size: usize,
    pub trials_reaching_target: usize,
}

/// Calls `f` with each `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn unfriendly_probability(family: &SubsetFamily) -> BigRational {
    let q = family.q;
    let num = BigInt::from(factorial(q as u64)) * family.len();
    BigRational::one() - BigRational::new(num, BigInt::from(family.m).pow(q as u32))
}

/// Probability that two `q`-sets of words sharing `j` members both fail to
/// be friendly at a single coordinate, by enumerating the `2q - j` symbols.
fn joint_failure(family: &SubsetFamily, lookup: &Lookup, j: usize) -> Result<f64> {
    let (m, q) = (family.m, family.q);
    let free = 2 * q - j;
    let total = (m as u64)
        .checked_pow(free as u32)
        .filter(|&t| t <= MAX_VARIANCE_ASSIGNMENTS);
    let Some(total) = total else {
        return Err(Error::infeasible(
            "exact variance enumeration",
            format!("{m}^{free}"),
            MAX_VARIANCE_ASSIGNMENTS,
        ));
    };
    let friendly = |syms: &[usize]| {
        let mask = syms.iter().fold(0u64, |acc, &s| acc | 1 << s);
        mask.count_ones() as usize == q && lookup.contains(mask)
    };
    // Symbols 0..q belong to the first set; the second set is the first j of
    // those plus the remaining q - j.
    let fails: u64 = (0..total)
        .into_par_iter()
        .map(|mut code| {
            let mut syms = [0usize; 2 * MAX_SYMBOLS];
            for s in syms.iter_mut().take(free) {
                *s = (code % m as u64) as usize;
                code /= m as u64;
            }
            let mut second = [0usize; MAX_SYMBOLS];
            second[..j].copy_from_slice(&syms[..j]);
            second[j..q].copy_from_slice(&syms[q..free]);
            u64::from(!friendly(&syms[..q]) && !friendly(&second[..q]))
        })
        .sum();
    Ok(fails as f64 / total as f64)
}

fn variance(
    config: &ExperimentConfig,
    family: &SubsetFamily,
    lookup: &Lookup,
    u: f64,
) -> Result<f64> {
    let (q, big_m, n) = (config.q, config.big_m as u64, config.n as i32);
    let pairs_base = binomial(big_m, q as u64);
    let mut var = 0.0;
    for j in 1..=q {
        let pairs =
            &pairs_base * binomial(q as u64, j as u64) * binomial(big_m - q as u64, (q - j) as u64);
        let p = joint_failure(family, lookup, j)?;
        let cov = p.powi(n) - u.powi(2 * n);
        var += pairs.to_f64().unwrap_or(f64::INFINITY) * cov;
    }
    Ok(var.max(0.0))
}

struct Trial {
    unfriendly: u64,
    survivors: usize,
}

fn run_trial(config: &ExperimentConfig, lookup: &Lookup, trial: u64) -> Trial {
    let (m, q, n, big_m) = (config.m, config.q, config.n, config.big_m);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    // Column-major: words[coord * M + word].
    let words: Vec<u8> = (0..n * big_m).map(|_| rng.gen_range(0..m) as u8).collect();
    let mut unfriendly = 0;
    let mut removed = vec![false; big_m];
    for_each_subset(big_m, q, |set| {
        let friendly = (0..n).any(|c| {
            let col = &words[c * big_m..(c + 1) * big_m];
            let mask = set.iter().fold(0u64, |acc, &w| acc | 1 << col[w]);
            mask.count_ones() as usize == q && lookup.contains(mask)
        });
        if !friendly {
            unfriendly += 1;
            for &w in set {
                removed[w] = true;
            }
        }
    });
    // Repeated words always share an unfriendly set, so the survivors are distinct.
    let survivors = removed.iter().filter(|&&r| !r).count();
    Trial {
        unfriendly,
        survivors,
    }
}

pub fn mc_friendly_check(
    config: &ExperimentConfig,
    family: &SubsetFamily,
    limits: &Limits,
) -> Result<MonteCarloReport> {
    config.validate()?;
    if family.is_empty() {
        return Err(Error::InvalidArgument(
            "the allowed family A is empty".into(),
        ));
    }
    if family.m != config.m || family.q != config.q {
        return Err(Error::InvalidArgument(format!(
            "family is over ({}, {}) but the experiment is over (m, q) = ({}, {})",
            family.m, family.q, config.m, config.q
        )));
    }
    let subsets = binomial(config.big_m as u64, config.q as u64);
    if subsets > limits.max_mc_subsets.into() {
        return Err(Error::infeasible(
            "Monte Carlo enumeration of q-subsets",
            subsets,
            limits.max_mc_subsets,
        ));
    }
    let lookup = Lookup::new(family);
    let u_exact = unfriendly_probability(family);
    let expected_exact = BigRational::from_integer(subsets.clone().into())
        * num_traits::pow(u_exact.clone(), config.n);
    let expected = expected_exact.to_f64().unwrap_or(f64::NAN);
    let u = u_exact.to_f64().unwrap_or(f64::NAN);
    let var = variance(config, family, &lookup, u)?;
    let standard_error = (var / config.trials as f64).sqrt();

    let results: Vec<Trial> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, &lookup, t))
        .collect();
    let trials = config.trials as f64;
    let empirical_mean = results.iter().map(|t| t.unfriendly as f64).sum::<f64>() / trials;
    let mean_surviving_words = results.iter().map(|t| t.survivors as f64).sum::<f64>() / trials;
    let target_size = config.big_m.div_ceil(3);
    let trials_reaching_target = results
        .iter()
        .filter(|t| t.survivors >= target_size)
        .count();
    let bound = BigRational::new(BigInt::from(config.big_m), BigInt::from(2 * config.q));

    Ok(MonteCarloReport {
        config: config.clone(),
        rng: "chacha8",
        family_size: family.len(),
        expected,
        variance: var,
        standard_error,
        empirical_mean,
        within_three_se: (empirical_mean - expected).abs() <= 3.0 * standard_error,
        condition_holds: expected_exact <= bound,
        mean_surviving_words,
        target_size,
        trials_reaching_target,
    })
}
