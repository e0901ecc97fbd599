//! Exact counts of separated `q`-element subsets.
//!
//! A `q`-subset of codewords is separated when some coordinate carries `q`
//! pairwise distinct symbols. For a coordinate set `T`, `A_T` is the family
//! of `q`-subsets that carry the full alphabet at every coordinate of `T`;
//! the separated subsets are the union of the `A_{i}`.
//!
//! Three engines are provided and are expected to agree:
//!
//! * [`count_separated_bruteforce`] visits every `q`-subset.
//! * [`count_separated_ix`] runs inclusion-exclusion over all nonempty `T`,
//!   with [`count_at`] computing each `|A_T|`.
//! * the closed forms [`parity_closed_form`], [`shift_union_closed_form`]
//!   and the certified [`fourcol_lower_bound`].

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::is_prime;
use crate::codes::{Code, CodeSummary, Construction};
use crate::decimal;
use crate::error::{Error, Result};
use crate::Limits;

/// Bitmask engines keep one `u64` per coordinate.
pub const MAX_MASK_ALPHABET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteForce,
    InclusionExclusion,
    ClosedFormParity,
    ClosedFormShift,
    LowerBoundFourcol,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub code_summary: CodeSummary,
    /// `|A_i|` for every coordinate `i`.
    #[serde(serialize_with = "decimal::biguint_vec")]
    pub a_single: Vec<BigUint>,
    /// Zero-based coordinate subsets; serialized one-based.
    #[serde(rename = "a_by_T", serialize_with = "decimal::subset_map")]
    pub a_by_t: BTreeMap<Vec<usize>, BigUint>,
    #[serde(serialize_with = "decimal::biguint")]
    pub s_count: BigUint,
    pub method: Method,
    pub exact: bool,
}

impl SeparationReport {
    /// Re-check the report's internal invariants.
    pub fn verify(&self) -> Result<()> {
        let bound = binomial(self.code_summary.m as u64, self.code_summary.q as u64);
        if self.exact && self.s_count > bound {
            return Err(Error::Inconsistency(format!(
                "|S| = {} exceeds C(m, q) = {bound}",
                self.s_count
            )));
        }
        if self.method == Method::InclusionExclusion {
            let recomputed = inclusion_exclusion_sum(&self.a_by_t);
            if recomputed != BigInt::from(self.s_count.clone()) {
                return Err(Error::Inconsistency(
                    "inclusion-exclusion sum does not match |S|".into(),
                ));
            }
        }
        Ok(())
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return <BigUint as Zero>::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn check_alphabet(code: &Code) -> Result<()> {
    if code.q() > MAX_MASK_ALPHABET {
        return Err(Error::Unsupported(format!(
            "alphabets above {MAX_MASK_ALPHABET} symbols (q = {})",
            code.q()
        )));
    }
    Ok(())
}

/// Whether the given `q` codewords are separated.
pub fn is_separated(code: &Code, subset: &[usize]) -> Result<bool> {
    check_alphabet(code)?;
    let q = code.q();
    if subset.len() != q {
        return Err(Error::InvalidArgument(format!(
            "subset has {} members, expected {q}",
            subset.len()
        )));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != q || sorted.last().is_some_and(|&i| i >= code.len()) {
        return Err(Error::InvalidArgument(format!(
            "{subset:?} is not a set of codeword indices"
        )));
    }
    Ok((0..code.n()).any(|j| {
        let mask = subset
            .iter()
            .fold(0u64, |acc, &w| acc | 1u64 << code.symbol(w, j));
        mask.count_ones() as usize == q
    }))
}

/// `|A_i|` for each coordinate: pick one codeword per symbol.
fn single_coordinate_counts(code: &Code) -> Vec<BigUint> {
    (0..code.n())
        .map(|j| {
            let mut counts = vec![0u64; code.q()];
            for w in code.codewords() {
                counts[w[j] as usize] += 1;
            }
            counts.iter().fold(BigUint::one(), |acc, &c| acc * c)
        })
        .collect()
}

struct Enumerator<'a> {
    bits: &'a [u64],
    n: usize,
    m: usize,
    q: usize,
}

impl Enumerator<'_> {
    /// Separated completions of a partial subset of `chosen` members whose
    /// per-coordinate symbol masks are `cur`. `alive` marks the coordinates
    /// that are still collision free; `spare` holds the deeper levels.
    fn count(
        &self,
        chosen: usize,
        start: usize,
        alive: u64,
        cur: &[u64],
        spare: &mut [u64],
    ) -> u64 {
        if alive == 0 {
            return 0;
        }
        if chosen == self.q {
            return 1;
        }
        let n = self.n;
        let (next, deeper) = spare.split_at_mut(n);
        let mut total = 0;
        for i in start..=self.m - (self.q - chosen) {
            let word = &self.bits[i * n..(i + 1) * n];
            let mut next_alive = alive;
            let mut it = alive;
            while it != 0 {
                let j = it.trailing_zeros() as usize;
                it &= it - 1;
                if cur[j] & word[j] != 0 {
                    next_alive &= !(1u64 << j);
                } else {
                    next[j] = cur[j] | word[j];
                }
            }
            total += self.count(chosen + 1, i + 1, next_alive, next, deeper);
        }
        total
    }
}

/// Exhaustive count of separated `q`-subsets, partitioned on the smallest
/// member.
pub fn count_separated_bruteforce(code: &Code, limits: &Limits) -> Result<SeparationReport> {
    check_alphabet(code)?;
    let (q, n, m) = (code.q(), code.n(), code.len());
    if n > 64 {
        return Err(Error::Unsupported(format!(
            "brute force supports n <= 64, got {n}"
        )));
    }
    let work = binomial(m as u64, q as u64);
    if work > BigUint::from(limits.max_subsets) {
        return Err(Error::infeasible(
            format!("brute force over C({m}, {q}) subsets"),
            &work,
            limits.max_subsets,
        ));
    }
    let s_count = if m < q {
        0
    } else {
        let bits: Vec<u64> = code
            .codewords()
            .flat_map(|w| w.iter().map(|&s| 1u64 << s))
            .collect();
        let all: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let engine = Enumerator {
            bits: &bits,
            n,
            m,
            q,
        };
        (0..=m - q)
            .into_par_iter()
            .map(|first| {
                let mut spare = vec![0u64; q * n];
                engine.count(
                    1,
                    first + 1,
                    all,
                    &bits[first * n..(first + 1) * n],
                    &mut spare,
                )
            })
            .sum()
    };
    let report = SeparationReport {
        code_summary: code.summary(),
        a_single: single_coordinate_counts(code),
        a_by_t: BTreeMap::new(),
        s_count: BigUint::from(s_count),
        method: Method::BruteForce,
        exact: true,
    };
    report.verify()?;
    Ok(report)
}

/// Counter used by the `|A_T|` search; `None` signals overflow.
trait Tally: Clone + Send + Sync {
    fn empty() -> Self;
    fn from_u64(v: u64) -> Self;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul_u64(&self, v: u64) -> Option<Self>;
    fn into_biguint(self) -> BigUint;
}

impl Tally for u128 {
    fn empty() -> Self {
        0
    }
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn mul_u64(&self, v: u64) -> Option<Self> {
        self.checked_mul(v as u128)
    }
    fn into_biguint(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Tally for BigUint {
    fn empty() -> Self {
        <BigUint as Zero>::zero()
    }
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn mul_u64(&self, v: u64) -> Option<Self> {
        Some(self * v)
    }
    fn into_biguint(self) -> BigUint {
        self
    }
}

/// Codewords grouped by their symbol at the first coordinate of `T`, then by
/// their projection onto the remaining coordinates of `T` (as one-bit masks).
struct ProjectionClasses {
    width: usize,
    classes: Vec<Vec<(Vec<u64>, u64)>>,
}

impl ProjectionClasses {
    fn new(code: &Code, coords: &[usize]) -> Self {
        let (head, rest) = (coords[0], &coords[1..]);
        let mut by_symbol: Vec<HashMap<Vec<u64>, u64>> = vec![HashMap::new(); code.q()];
        for w in code.codewords() {
            let proj: Vec<u64> = rest.iter().map(|&j| 1u64 << w[j]).collect();
            *by_symbol[w[head] as usize].entry(proj).or_insert(0) += 1;
        }
        let classes = by_symbol
            .into_iter()
            .map(|h| {
                let mut v: Vec<(Vec<u64>, u64)> = h.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        ProjectionClasses {
            width: rest.len(),
            classes,
        }
    }

    /// Number of ways to give symbol `level..q` of the head coordinate one
    /// codeword each, keeping every other coordinate of `T` collision free.
    fn search<C: Tally>(
        &self,
        level: usize,
        used: &mut Vec<u64>,
        memo: &mut HashMap<Vec<u64>, C>,
    ) -> Option<C> {
        if level == self.classes.len() {
            return Some(C::from_u64(1));
        }
        if let Some(hit) = memo.get(used.as_slice()) {
            return Some(hit.clone());
        }
        let mut total = C::empty();
        for (proj, mult) in &self.classes[level] {
            if used.iter().zip(proj).any(|(u, p)| u & p != 0) {
                continue;
            }
            for (u, p) in used.iter_mut().zip(proj) {
                *u |= p;
            }
            let sub = self.search::<C>(level + 1, used, memo);
            for (u, p) in used.iter_mut().zip(proj) {
                *u &= !p;
            }
            total = total.add(&sub?.mul_u64(*mult)?)?;
        }
        memo.insert(used.clone(), total.clone());
        Some(total)
    }

    fn count<C: Tally>(&self) -> Option<C> {
        if self.classes.iter().any(Vec::is_empty) {
            return Some(C::empty());
        }
        if self.width == 0 {
            // Every class is a single empty projection.
            return self
                .classes
                .iter()
                .try_fold(C::from_u64(1), |acc, c| acc.mul_u64(c[0].1));
        }
        let mut used = vec![0u64; self.width];
        self.search(0, &mut used, &mut HashMap::new())
    }
}

fn normalized_subset(code: &Code, coords: &[usize]) -> Result<Vec<usize>> {
    if coords.is_empty() {
        return Err(Error::InvalidArgument(
            "coordinate subset must be nonempty".into(),
        ));
    }
    let mut t = coords.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.len() != coords.len() || t.last().is_some_and(|&j| j >= code.n()) {
        return Err(Error::InvalidArgument(format!(
            "{coords:?} is not a subset of 0..{}",
            code.n()
        )));
    }
    Ok(t)
}

/// `|A_T|` for a nonempty set of zero-based coordinates.
///
/// Each subset in `A_T` is listed exactly once by ordering its members by
/// their symbol at the first coordinate of `T`; the search memoizes on the
/// used-symbol masks of the other coordinates of `T`.
pub fn count_at(code: &Code, coords: &[usize]) -> Result<BigUint> {
    check_alphabet(code)?;
    let t = normalized_subset(code, coords)?;
    let classes = ProjectionClasses::new(code, &t);
    match classes.count::<u128>() {
        Some(v) => Ok(v.into_biguint()),
        None => classes
            .count::<BigUint>()
            .ok_or_else(|| Error::Inconsistency("big-integer count overflowed".into())),
    }
}

fn inclusion_exclusion_sum(a_by_t: &BTreeMap<Vec<usize>, BigUint>) -> BigInt {
    a_by_t.iter().fold(BigInt::zero(), |acc, (t, a)| {
        let a = BigInt::from(a.clone());
        if t.len() % 2 == 1 {
            acc + a
        } else {
            acc - a
        }
    })
}

/// `|S(C)| = sum over nonempty T of (-1)^{|T|-1} |A_T|`.
pub fn count_separated_ix(code: &Code, limits: &Limits) -> Result<SeparationReport> {
    check_alphabet(code)?;
    let n = code.n();
    if n > limits.max_ix_coords {
        return Err(Error::infeasible(
            format!("inclusion-exclusion over {n} coordinates"),
            format!("2^{n} - 1 subset counts"),
            format!("{} coordinates", limits.max_ix_coords),
        ));
    }
    let subsets: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect())
        .collect();
    let counts = subsets
        .par_iter()
        .map(|t| count_at(code, t).map(|c| (t.clone(), c)))
        .collect::<Result<Vec<_>>>()?;
    let a_by_t: BTreeMap<Vec<usize>, BigUint> = counts.into_iter().collect();
    let total = inclusion_exclusion_sum(&a_by_t);
    let s_count = total.to_biguint().ok_or_else(|| {
        Error::Inconsistency(format!("negative inclusion-exclusion total {total}"))
    })?;
    let a_single = (0..n).map(|j| a_by_t[&vec![j]].clone()).collect();
    let report = SeparationReport {
        code_summary: code.summary(),
        a_single,
        a_by_t,
        s_count,
        method: Method::InclusionExclusion,
        exact: true,
    };
    report.verify()?;
    Ok(report)
}

/// `|S(C)|` of the length-`n` parity code over a group of order `q`, given
/// `A_n`, the number of `q`-subsets carrying the full alphabet everywhere.
pub fn parity_closed_form(q: usize, n: usize, a_n: &BigInt) -> Result<BigInt> {
    if q < 2 || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need q >= 2 and n >= 2, got q = {q}, n = {n}"
        )));
    }
    let qf = BigInt::from(factorial(q as u64));
    let qq = BigInt::from(q).pow(q as u32);
    let t = BigRational::new(qf.clone(), qq.clone());
    let one = BigRational::one();
    let lead = BigRational::new(BigInt::from(q).pow((q * (n - 1)) as u32), qf.clone())
        * (&one - num_traits::pow(&one - &t, n));
    let sign = if (n - 1).is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let correction = BigRational::new(&sign * qf.pow((n - 1) as u32), qq);
    let value = lead - correction + BigRational::from_integer(&sign * a_n);
    if !value.is_integer() {
        return Err(Error::Inconsistency(format!(
            "closed form gives the non-integer {value}; A_{n} = {a_n} is wrong for q = {q}"
        )));
    }
    Ok(value.to_integer())
}

/// Certified lower bound `4 q^q - 6 q! + 3 cm` for the four-column code.
pub fn fourcol_lower_bound(q: usize, cm: &BigUint) -> BigInt {
    let qq = BigInt::from(q).pow(q as u32);
    let qf = BigInt::from(factorial(q as u64));
    4 * qq - 6 * qf + 3 * BigInt::from(cm.clone())
}

/// `2^q q - 2(q - 1)` for the shift-union code of prime length `q`.
pub fn shift_union_closed_form(q: usize) -> Result<BigUint> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    Ok((BigUint::one() << q) * q - 2 * (q - 1))
}

/// Closed-form count dispatched on the code's construction.
pub fn count_separated_closed(code: &Code) -> Result<SeparationReport> {
    check_alphabet(code)?;
    let q = code.q();
    let mut a_by_t = BTreeMap::new();
    let (s_count, method, exact) = match code.construction() {
        Construction::Parity { .. } | Construction::Sum { .. } => {
            let all: Vec<usize> = (0..code.n()).collect();
            let a_n = count_at(code, &all)?;
            let s = parity_closed_form(q, code.n(), &BigInt::from(a_n.clone()))?;
            a_by_t.insert(all, a_n);
            (s, Method::ClosedFormParity, true)
        }
        Construction::ShiftUnion { q } => (
            BigInt::from(shift_union_closed_form(*q)?),
            Method::ClosedFormShift,
            true,
        ),
        Construction::FourCol { .. } => {
            let t = vec![0, 1, 2];
            let cm = count_at(code, &t)?;
            let bound = fourcol_lower_bound(q, &cm);
            a_by_t.insert(t, cm);
            (bound, Method::LowerBoundFourcol, false)
        }
        other => {
            return Err(Error::Unsupported(format!(
                "no closed form for {} codes",
                other.tag()
            )));
        }
    };
    let s_count = s_count
        .to_biguint()
        .ok_or_else(|| Error::Inconsistency("negative closed-form count".into()))?;
    Ok(SeparationReport {
        code_summary: code.summary(),
        a_single: single_coordinate_counts(code),
        a_by_t,
        s_count,
        method,
        exact,
    })
}

/// `(q!)^{|T|-1} q^{q(k-|T|)}`, the value of `|A_T|` for a linear `[n, k]`
/// code when `|T|` is below the dual distance.
pub fn small_subset_law(q: usize, k: usize, t: usize) -> BigUint {
    assert!(t >= 1 && t <= k, "law needs 1 <= |T| <= k");
    factorial(q as u64).pow((t - 1) as u32) * BigUint::from(q).pow((q * (k - t)) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupSpec;
    use crate::codes::{
        four_col_code, mds52_f4, parity_code, shift_union_code, sum_code, Multiplier,
    };

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    /// Literal ordered-tuple backtracking, independent of the memoized
    /// engine: the returned value is the number of ordered `q`-tuples.
    fn ordered_tuple_count(code: &Code, t: &[usize]) -> u64 {
        fn rec(
            code: &Code,
            t: &[usize],
            depth: usize,
            used: &mut [u64],
            picked: &mut Vec<usize>,
        ) -> u64 {
            if depth == code.q() {
                return 1;
            }
            let mut total = 0;
            for w in 0..code.len() {
                if picked.contains(&w) {
                    continue;
                }
                if t.iter()
                    .zip(used.iter())
                    .any(|(&j, u)| u >> code.symbol(w, j) & 1 == 1)
                {
                    continue;
                }
                for (&j, u) in t.iter().zip(used.iter_mut()) {
                    *u |= 1 << code.symbol(w, j);
                }
                picked.push(w);
                total += rec(code, t, depth + 1, used, picked);
                picked.pop();
                for (&j, u) in t.iter().zip(used.iter_mut()) {
                    *u &= !(1 << code.symbol(w, j));
                }
            }
            total
        }
        rec(code, t, 0, &mut vec![0; t.len()], &mut Vec::new())
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn separated_predicate() {
        let c = sum_code(&g("z3")).unwrap();
        let idx = |w: [u8; 3]| c.codewords().position(|x| x == w).unwrap();
        let s = [idx([0, 0, 0]), idx([1, 1, 2]), idx([2, 2, 1])];
        assert!(is_separated(&c, &s).unwrap());
        let s = [idx([0, 0, 0]), idx([0, 1, 1]), idx([0, 2, 2])];
        assert!(is_separated(&c, &s).unwrap());

        let c = shift_union_code(3).unwrap();
        // (0,0,0), (1,1,1), (0,1,2): separated at the third coordinate.
        assert!(is_separated(&c, &[3, 4, 0]).unwrap());
        // Every 3-subset of the q = 3 shift-union code is separated.
        let c = sum_code(&g("z3")).unwrap();
        let idx = |w: [u8; 3]| c.codewords().position(|x| x == w).unwrap();
        let s = [idx([0, 0, 0]), idx([0, 1, 1]), idx([1, 0, 1])];
        assert!(!is_separated(&c, &s).unwrap());
    }

    #[test]
    fn separated_predicate_errors() {
        let c = sum_code(&g("z3")).unwrap();
        assert!(is_separated(&c, &[0, 1]).is_err());
        assert!(is_separated(&c, &[0, 1, 1]).is_err());
        assert!(is_separated(&c, &[0, 1, 9]).is_err());
    }

    #[test]
    fn brute_force_golden_values() {
        let lim = Limits::default();
        let c = four_col_code(&g("z3"), Multiplier::MinusOne).unwrap();
        assert_eq!(
            count_separated_bruteforce(&c, &lim).unwrap().s_count,
            big(84)
        );
        assert_eq!(
            count_separated_bruteforce(&mds52_f4(), &lim)
                .unwrap()
                .s_count,
            big(1100)
        );
        let c = shift_union_code(5).unwrap();
        assert_eq!(
            count_separated_bruteforce(&c, &lim).unwrap().s_count,
            big(152)
        );
    }

    #[test]
    fn brute_force_respects_cap() {
        let c = sum_code(&g("z9")).unwrap();
        let err = count_separated_bruteforce(&c, &Limits::default()).unwrap_err();
        assert!(err.is_feasibility());
        let lim = Limits {
            max_subsets: 20,
            ..Limits::default()
        };
        assert!(count_separated_bruteforce(&shift_union_code(3).unwrap(), &lim).is_ok());
        assert!(count_separated_bruteforce(&shift_union_code(5).unwrap(), &lim).is_err());
    }

    #[test]
    fn count_at_examples() {
        let z5 = sum_code(&g("z5")).unwrap();
        assert_eq!(count_at(&z5, &[0, 1, 2]).unwrap(), big(15));
        assert_eq!(count_at(&z5, &[0]).unwrap(), big(3125));
        let z3 = parity_code(&g("z3"), 3).unwrap();
        assert_eq!(count_at(&z3, &[0, 1]).unwrap(), big(6));
        assert!(count_at(&z3, &[]).is_err());
        assert!(count_at(&z3, &[0, 0]).is_err());
        assert!(count_at(&z3, &[3]).is_err());
    }

    #[test]
    fn count_at_matches_ordered_tuple_oracle() {
        let codes = [
            sum_code(&g("z3")).unwrap(),
            sum_code(&g("z4")).unwrap(),
            four_col_code(&g("z3"), Multiplier::MinusOne).unwrap(),
            shift_union_code(3).unwrap(),
            parity_code(&g("z2"), 4).unwrap(),
        ];
        for c in &codes {
            let q_fact = (1..=c.q() as u64).product::<u64>();
            for mask in 1u32..(1 << c.n()) {
                let t: Vec<usize> = (0..c.n()).filter(|j| mask >> j & 1 == 1).collect();
                let ordered = ordered_tuple_count(c, &t);
                assert_eq!(ordered % q_fact, 0, "{} T={t:?}", c.construction());
                assert_eq!(
                    count_at(c, &t).unwrap(),
                    big(ordered / q_fact),
                    "{} T={t:?}",
                    c.construction()
                );
            }
        }
    }

    #[test]
    fn ix_examples() {
        let lim = Limits::default();
        let r = count_separated_ix(&sum_code(&g("z5")).unwrap(), &lim).unwrap();
        assert_eq!(r.s_count, big(9030));
        assert_eq!(r.a_by_t.len(), 7);
        let r = count_separated_ix(
            &four_col_code(&g("z3"), Multiplier::MinusOne).unwrap(),
            &lim,
        )
        .unwrap();
        assert_eq!(r.s_count, big(84));
        let r = count_separated_ix(&parity_code(&g("z2"), 2).unwrap(), &lim).unwrap();
        assert_eq!(r.s_count, big(1));
    }

    #[test]
    fn ix_respects_coordinate_cap() {
        let lim = Limits {
            max_ix_coords: 4,
            ..Limits::default()
        };
        let c = shift_union_code(5).unwrap();
        assert!(count_separated_ix(&c, &lim).unwrap_err().is_feasibility());
    }

    #[test]
    fn brute_force_and_ix_agree_on_small_codes() {
        let lim = Limits::default();
        let codes = [
            sum_code(&g("z5")).unwrap(),
            sum_code(&g("gf4")).unwrap(),
            shift_union_code(5).unwrap(),
            mds52_f4(),
            four_col_code(&g("z5"), Multiplier::MinusOne).unwrap(),
        ];
        for c in &codes {
            let a = count_separated_bruteforce(c, &lim).unwrap();
            let b = count_separated_ix(c, &lim).unwrap();
            assert_eq!(a.s_count, b.s_count, "{}", c.construction());
            assert_eq!(a.a_single, b.a_single);
        }
    }

    #[test]
    fn parity_closed_form_examples() {
        assert_eq!(
            parity_closed_form(5, 3, &BigInt::from(15)).unwrap(),
            BigInt::from(9030)
        );
        let z9 = sum_code(&g("z9")).unwrap();
        let ix = count_separated_ix(&z9, &Limits::default()).unwrap();
        assert_eq!(ix.a_by_t[&vec![0, 1, 2]], big(2025));
        assert_eq!(
            parity_closed_form(9, 3, &BigInt::from(2025)).unwrap(),
            BigInt::from(ix.s_count.clone())
        );
        assert_eq!(
            parity_closed_form(8, 3, &BigInt::from(384)).unwrap(),
            BigInt::from(50211072u64)
        );
    }

    #[test]
    fn parity_closed_form_shifts_with_a_n() {
        let good = parity_closed_form(5, 3, &BigInt::from(15)).unwrap();
        let off = parity_closed_form(5, 3, &BigInt::from(16)).unwrap();
        assert_eq!(off - good, BigInt::from(1));
        assert!(parity_closed_form(1, 3, &BigInt::from(0)).is_err());
    }

    #[test]
    fn parity_closed_form_matches_ix_across_lengths() {
        let lim = Limits::default();
        for (s, n) in [
            ("z2", 2),
            ("z3", 2),
            ("z3", 3),
            ("z3", 4),
            ("z4", 3),
            ("z2", 5),
            ("gf4", 3),
            ("z5", 3),
        ] {
            let c = parity_code(&g(s), n).unwrap();
            let ix = count_separated_ix(&c, &lim).unwrap();
            let all: Vec<usize> = (0..n).collect();
            let a_n = BigInt::from(ix.a_by_t[&all].clone());
            assert_eq!(
                parity_closed_form(c.q(), n, &a_n).unwrap(),
                BigInt::from(ix.s_count),
                "{s} n={n}"
            );
        }
    }

    #[test]
    fn fourcol_bound_examples() {
        let lim = Limits::default();
        assert_eq!(fourcol_lower_bound(3, &big(3)), BigInt::from(81));
        assert_eq!(fourcol_lower_bound(5, &big(15)), BigInt::from(11825));
        for (s, cm) in [("z3", 3u64), ("z5", 15), ("z7", 133)] {
            let c = four_col_code(&g(s), Multiplier::MinusOne).unwrap();
            let exact = count_separated_ix(&c, &lim).unwrap().s_count;
            assert!(
                fourcol_lower_bound(c.q(), &big(cm)) <= BigInt::from(exact),
                "{s}"
            );
        }
    }

    #[test]
    fn shift_union_closed_form_values() {
        assert_eq!(shift_union_closed_form(3).unwrap(), big(20));
        assert_eq!(shift_union_closed_form(5).unwrap(), big(152));
        assert_eq!(shift_union_closed_form(7).unwrap(), big(884));
        assert!(shift_union_closed_form(9).is_err());
    }

    #[test]
    fn closed_dispatch() {
        let r = count_separated_closed(&sum_code(&g("z5")).unwrap()).unwrap();
        assert_eq!(
            (r.s_count.clone(), r.method, r.exact),
            (big(9030), Method::ClosedFormParity, true)
        );
        let r = count_separated_closed(&shift_union_code(7).unwrap()).unwrap();
        assert_eq!(r.s_count, big(884));
        let r = count_separated_closed(&four_col_code(&g("z3"), Multiplier::MinusOne).unwrap())
            .unwrap();
        assert_eq!((r.s_count.clone(), r.exact), (big(81), false));
        assert!(count_separated_closed(&mds52_f4()).is_err());
    }

    #[test]
    fn report_serializes_big_integers_as_strings() {
        let r = count_separated_ix(&sum_code(&g("z3")).unwrap(), &Limits::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["method"], "inclusion-exclusion");
        assert_eq!(v["a_by_T"]["1,2,3"], "3");
        assert!(v["s_count"].is_string());
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(9, 3), big(84));
        assert_eq!(binomial(16, 4), big(1820));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(factorial(5), big(120));
        assert_eq!(small_subset_law(5, 2, 1), big(3125));
        assert_eq!(small_subset_law(3, 2, 2), big(6));
    }
}
