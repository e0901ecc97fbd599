//! Table generation: complete-mapping counts against their threshold, and
//! the best rate bound per alphabet size against the probabilistic bound.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{cm_threshold, rate_from_inner, rate_probabilistic, Provenance, RateBound};
use crate::algebra::GroupSpec;
use crate::codes::{mds52_f4, shift_union_code};
use crate::decimal;
use crate::error::Result;
use crate::mappings::complete_mapping_count;
use crate::real::{Decimal, Rounding};
use crate::separation::{count_separated_bruteforce, parity_closed_form};
use crate::Limits;

/// `r` rounded half-up to `places` decimal places.
pub fn fixed_decimal(r: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = (r.abs() * &scale * BigInt::from(2) + BigRational::one()) / BigInt::from(2);
    let n = scaled.floor().to_integer();
    let (int, frac) = n.div_rem(&scale);
    let sign = if r.is_negative() && !n.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub q: usize,
    pub group: String,
    #[serde(serialize_with = "decimal::biguint")]
    pub cm: BigUint,
    /// `(q!)^2 / q^q` exactly.
    #[serde(serialize_with = "decimal::rational")]
    pub threshold: BigRational,
    /// The threshold to one decimal place.
    pub threshold_display: String,
    /// `cm` over the one-decimal threshold, to two decimal places.
    pub ratio_display: String,
    /// `cm` over the exact threshold.
    pub ratio: f64,
}

/// Rows for odd `q` from 5 up to `max_q`, limited by the complete-mapping
/// cap.
pub fn make_table1(max_q: usize, limits: &Limits) -> Result<Vec<Table1Row>> {
    let mut rows = Vec::new();
    for q in (5..=max_q).step_by(2) {
        let spec = GroupSpec::cyclic(q)?;
        let count = complete_mapping_count(&spec, limits)?;
        let threshold = cm_threshold(q);
        let threshold_display = fixed_decimal(&threshold, 1);
        let rounded = parse_fixed(&threshold_display);
        let cm_r = BigRational::from_integer(BigInt::from(count.cm.clone()));
        let ratio_display = fixed_decimal(&(&cm_r / &rounded), 2);
        let ratio = (&cm_r / &threshold).to_f64().unwrap_or(f64::NAN);
        rows.push(Table1Row {
            q,
            group: spec.to_string(),
            cm: count.cm,
            threshold,
            threshold_display,
            ratio_display,
            ratio,
        });
    }
    Ok(rows)
}

fn parse_fixed(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}")
        .parse()
        .expect("fixed decimal from fixed_decimal");
    BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub construction: String,
    #[serde(serialize_with = "decimal::biguint")]
    pub s_count: BigUint,
    pub bound: RateBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Row {
    pub q: usize,
    pub digits: usize,
    pub r_new: String,
    pub r_ran: String,
    pub winner: String,
    pub candidates: Vec<Candidate>,
    pub probabilistic: RateBound,
}

/// Significant digits shown per alphabet size.
pub fn table2_digits(q: usize) -> usize {
    match q {
        4 => 3,
        5 | 7 => 4,
        8 => 6,
        9 => 7,
        _ => 9,
    }
}

/// Positional for values of at least `10^-3`, scientific below.
pub fn display_rate(d: &Decimal) -> String {
    if d.exponent >= -3 {
        d.plain()
    } else {
        d.scientific()
    }
}

fn parity_candidate(spec: GroupSpec, limits: &Limits, bits: u32) -> Result<Candidate> {
    let q = spec.order();
    let cm = complete_mapping_count(&spec, limits)?.cm;
    let s = parity_closed_form(q, 3, &BigInt::from(cm))?
        .to_biguint()
        .expect("closed-form counts are non-negative");
    let construction = format!("parity:{spec}:3");
    let bound = rate_from_inner(
        q,
        3,
        &BigUint::from(q * q),
        &s,
        Provenance::new(construction.clone(), "closed-form-parity"),
        bits,
    )?;
    Ok(Candidate {
        construction,
        s_count: s,
        bound,
    })
}

fn brute_candidate(code: crate::codes::Code, limits: &Limits, bits: u32) -> Result<Candidate> {
    let report = count_separated_bruteforce(&code, limits)?;
    let construction = code.construction().to_string();
    let bound = rate_from_inner(
        code.q(),
        code.n(),
        &BigUint::from(code.len()),
        &report.s_count,
        Provenance::new(construction.clone(), "brute-force"),
        bits,
    )?;
    Ok(Candidate {
        construction,
        s_count: report.s_count,
        bound,
    })
}

fn candidates(q: usize, limits: &Limits, bits: u32) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    match q {
        4 => {
            out.push(brute_candidate(mds52_f4(), limits, bits)?);
            out.push(parity_candidate(GroupSpec::field(2, 2)?, limits, bits)?);
        }
        5 | 7 => {
            out.push(brute_candidate(shift_union_code(q)?, limits, bits)?);
            out.push(parity_candidate(GroupSpec::cyclic(q)?, limits, bits)?);
        }
        8 => out.push(parity_candidate(GroupSpec::field(2, 3)?, limits, bits)?),
        9 => {
            out.push(parity_candidate(GroupSpec::field(3, 2)?, limits, bits)?);
            out.push(parity_candidate(GroupSpec::cyclic(9)?, limits, bits)?);
        }
        _ => out.push(parity_candidate(GroupSpec::cyclic(q)?, limits, bits)?),
    }
    Ok(out)
}

/// The alphabet sizes tabulated.
pub const TABLE2_QS: [usize; 6] = [4, 5, 7, 8, 9, 11];

/// For each tabulated `q`, the best bound among the explicit constructions
/// and the probabilistic bound, truncated to the given number of
/// significant digits (the per-`q` default when `None`).
pub fn make_table2(digits: Option<usize>, limits: &Limits, bits: u32) -> Result<Vec<Table2Row>> {
    let mut rows = Vec::new();
    for q in TABLE2_QS {
        let sig = digits.unwrap_or_else(|| table2_digits(q));
        let cands = candidates(q, limits, bits)?;
        let best = cands
            .iter()
            .max_by(|a, b| a.bound.rate.cmp(&b.bound.rate))
            .expect("every q has a candidate");
        let r_new = display_rate(&best.bound.stable_decimal(sig, Rounding::Truncate)?);
        let probabilistic = rate_probabilistic(q, bits)?;
        let r_ran = display_rate(&probabilistic.stable_decimal(sig, Rounding::Truncate)?);
        rows.push(Table2Row {
            q,
            digits: sig,
            r_new,
            r_ran,
            winner: best.construction.clone(),
            candidates: cands.clone(),
            probabilistic,
        });
    }
    Ok(rows)
}
