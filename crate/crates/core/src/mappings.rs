//! Complete mappings of finite abelian groups.
//!
//! A complete mapping is a bijection `theta` of `G` such that
//! `x -> x + theta(x)` is also a bijection. Their number `cm(G)` equals the
//! count of `q`-subsets of the sum code `{(x, y, x + y)}` carrying the full
//! alphabet at all three coordinates, and `q! * cm(G)` counts the ordered
//! pairs of bijections `[q] -> G` whose pointwise sum is a bijection.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::GroupSpec;
use crate::decimal;
use crate::error::{Error, Result};
use crate::separation::factorial;
use crate::Limits;

/// Orders at which the search is expected to take minutes or more.
pub const LONG_RUNTIME_ORDER: usize = 15;

const MAX_BITMASK_ORDER: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MappingCount {
    pub group: GroupSpec,
    #[serde(serialize_with = "decimal::biguint")]
    pub cm: BigUint,
    #[serde(serialize_with = "decimal::biguint")]
    pub s_value: BigUint,
}

struct Search {
    q: usize,
    add: Vec<u8>,
    full: u64,
}

impl Search {
    fn new(spec: &GroupSpec) -> Self {
        let q = spec.order();
        let add = spec.addition_table().into_iter().map(|s| s as u8).collect();
        let full = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
        Search { q, add, full }
    }

    /// Completions once `theta(0..x)` is fixed.
    fn count(&self, x: usize, used_vals: u64, used_sums: u64) -> u64 {
        if x == self.q {
            return 1;
        }
        let row = &self.add[x * self.q..(x + 1) * self.q];
        let mut avail = !used_vals & self.full;
        let mut total = 0;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            let s = 1u64 << row[v];
            if used_sums & s == 0 {
                total += self.count(x + 1, used_vals | 1 << v, used_sums | s);
            }
        }
        total
    }

    /// All consistent assignments of `theta(0..depth)` extending the given
    /// prefix state, as `(used_vals, used_sums)`.
    fn prefixes(
        &self,
        x: usize,
        depth: usize,
        used_vals: u64,
        used_sums: u64,
        out: &mut Vec<(u64, u64)>,
    ) {
        if x == depth || x == self.q {
            out.push((used_vals, used_sums));
            return;
        }
        let row = &self.add[x * self.q..(x + 1) * self.q];
        for (v, &sum) in row.iter().enumerate() {
            let s = 1u64 << sum;
            if used_vals >> v & 1 == 0 && used_sums & s == 0 {
                self.prefixes(x + 1, depth, used_vals | 1 << v, used_sums | s, out);
            }
        }
    }
}

fn check_order(spec: &GroupSpec, cap: usize) -> Result<()> {
    let q = spec.order();
    if q > MAX_BITMASK_ORDER {
        return Err(Error::Unsupported(format!(
            "groups above order {MAX_BITMASK_ORDER}"
        )));
    }
    if q > cap {
        return Err(Error::infeasible(
            format!("complete-mapping search over {spec}"),
            format!("order {q}"),
            format!("order {cap}"),
        ));
    }
    Ok(())
}

/// Plain backtracking over every bijection, no symmetry reduction and no
/// parallelism.
pub fn complete_mapping_count_unreduced(spec: &GroupSpec, limits: &Limits) -> Result<u64> {
    check_order(spec, limits.max_cm_order)?;
    Ok(Search::new(spec).count(0, 0, 0))
}

/// Exact `cm(G)`.
///
/// Translating a complete mapping by a constant gives another one, so the
/// search fixes `theta(0) = 0` and multiplies by `q`. The remaining tree is
/// split on `theta(1), theta(2)` and the parts are counted in parallel.
pub fn complete_mapping_count(spec: &GroupSpec, limits: &Limits) -> Result<MappingCount> {
    check_order(spec, limits.max_cm_order)?;
    let search = Search::new(spec);
    let q = search.q;
    let zero_sum = 1u64 << search.add[0];
    let mut prefixes = Vec::new();
    search.prefixes(1, 3, 1, zero_sum, &mut prefixes);
    let depth = 3.min(q);
    let fixed: u64 = prefixes
        .par_iter()
        .map(|&(vals, sums)| search.count(depth, vals, sums))
        .sum();
    let cm = BigUint::from(fixed) * q;
    let s_value = &cm * factorial(q as u64);
    Ok(MappingCount {
        group: spec.clone(),
        cm,
        s_value,
    })
}

/// `exp(-1/2) (q!)^2 / q^(q-1)`, the leading-order size of `cm` for groups
/// whose elements sum to zero. The lower-order term is dropped, so this is a
/// heuristic only.
pub fn asymptotic_cm_estimate(q: usize) -> Result<f64> {
    if q < 3 {
        return Err(Error::InvalidArgument(format!(
            "estimate needs q >= 3, got {q}"
        )));
    }
    let ln_fact: f64 = (2..=q).map(|i| (i as f64).ln()).sum();
    let ln = -0.5 + 2.0 * ln_fact - (q as f64 - 1.0) * (q as f64).ln();
    let v = ln.exp();
    if !v.is_finite() {
        return Err(Error::Unsupported(format!(
            "estimate for q = {q} overflows f64"
        )));
    }
    Ok(v)
}
