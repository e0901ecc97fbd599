//! Rate bounds for concatenated perfect hash codes.
//!
//! Every defect is an exact rational. Logarithms only appear in the reported
//! rates, and every boolean comparison is made on the rationals.

mod friendly;
mod tables;

pub use friendly::{mc_friendly_check, ExperimentConfig, MonteCarloReport, SubsetFamily};
pub use tables::{make_table1, make_table2, Candidate, Table1Row, Table2Row};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::decimal;
use crate::error::{Error, Result};
use crate::real::{Decimal, Real, Rounding};
use crate::separation::{binomial, factorial};

/// Highest precision tried when looking for stable digits.
pub const MAX_PRECISION_BITS: u32 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub construction: String,
    pub method: String,
}

impl Provenance {
    pub fn new(construction: impl Into<String>, method: impl Into<String>) -> Self {
        Provenance {
            construction: construction.into(),
            method: method.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RateBound {
    pub q: usize,
    pub n: usize,
    #[serde(serialize_with = "decimal::biguint")]
    pub m: BigUint,
    #[serde(serialize_with = "decimal::rational")]
    pub defect: BigRational,
    pub rate: Real,
    pub precision_bits: u32,
    pub provenance: Provenance,
    /// Set when the defect comes from an asymptotic formula with its error
    /// term dropped.
    pub heuristic: bool,
}

impl RateBound {
    fn new(
        q: usize,
        n: usize,
        m: BigUint,
        defect: BigRational,
        bits: u32,
        provenance: Provenance,
    ) -> Result<Self> {
        let rate = rate_from_defect(q, n, &defect, bits)?;
        Ok(RateBound {
            q,
            n,
            m,
            defect,
            rate,
            precision_bits: bits,
            provenance,
            heuristic: false,
        })
    }

    /// The rate to `sig` significant digits, recomputed at doubled precision
    /// until two consecutive precisions agree on every printed digit.
    pub fn stable_decimal(&self, sig: usize, mode: Rounding) -> Result<Decimal> {
        let mut bits = self.precision_bits.max(32);
        let mut lo = rate_from_defect(self.q, self.n, &self.defect, bits)?.to_decimal(sig, mode);
        while bits < MAX_PRECISION_BITS {
            let hi =
                rate_from_defect(self.q, self.n, &self.defect, bits * 2)?.to_decimal(sig, mode);
            if hi == lo {
                return Ok(hi);
            }
            lo = hi;
            bits *= 2;
        }
        Err(Error::Inconsistency(format!(
            "rate digits still moving at {MAX_PRECISION_BITS} bits of precision"
        )))
    }
}

/// `t = q!/q^q`, the chance that `q` uniform symbols are pairwise distinct.
pub fn distinct_probability(q: usize) -> BigRational {
    BigRational::new(
        BigInt::from(factorial(q as u64)),
        BigInt::from(q).pow(q as u32),
    )
}

/// `1 - q!/q^q`.
pub fn probabilistic_defect(q: usize) -> BigRational {
    BigRational::one() - distinct_probability(q)
}

/// `-log2(defect) / ((q - 1) n)`.
pub fn rate_from_defect(q: usize, n: usize, defect: &BigRational, bits: u32) -> Result<Real> {
    if q < 2 || n < 1 {
        return Err(Error::InvalidArgument(format!(
            "need q >= 2 and n >= 1, got q = {q}, n = {n}"
        )));
    }
    if !defect.is_positive() {
        return Err(Error::InvalidCount(format!(
            "defect {defect} is not positive"
        )));
    }
    Ok(Real::log2(defect, bits)?
        .neg()
        .div_int(((q - 1) * n) as u64))
}

pub fn rate_probabilistic(q: usize, bits: u32) -> Result<RateBound> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("need q >= 2, got {q}")));
    }
    RateBound::new(
        q,
        1,
        BigUint::from(q),
        probabilistic_defect(q),
        bits,
        Provenance::new("random", "probabilistic"),
    )
}

/// `1 - q! S / m^q`, rejecting counts that make it non-positive or exceed
/// `C(m, q)`.
pub fn inner_defect(q: usize, m: &BigUint, s: &BigUint) -> Result<BigRational> {
    let m_u64 = u64::try_from(m).ok();
    if let Some(m64) = m_u64 {
        let cap = binomial(m64, q as u64);
        if s > &cap {
            return Err(Error::InvalidCount(format!(
                "S = {s} exceeds C({m}, {q}) = {cap}"
            )));
        }
    }
    let num = BigInt::from(factorial(q as u64) * s);
    let den = BigInt::from(m.pow(q as u32));
    let defect = BigRational::one() - BigRational::new(num, den);
    if !defect.is_positive() {
        return Err(Error::InvalidCount(format!(
            "S = {s} gives a non-positive defect {defect}"
        )));
    }
    Ok(defect)
}

/// Rate of the concatenation of a random outer code with an inner code of
/// length `n` and size `m` having `s` separated `q`-subsets.
pub fn rate_from_inner(
    q: usize,
    n: usize,
    m: &BigUint,
    s: &BigUint,
    provenance: Provenance,
    bits: u32,
) -> Result<RateBound> {
    if q < 2 || n < 1 {
        return Err(Error::InvalidArgument(format!(
            "need q >= 2 and n >= 1, got q = {q}, n = {n}"
        )));
    }
    let defect = inner_defect(q, m, s)?;
    RateBound::new(q, n, m.clone(), defect, bits, provenance)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeatsCertificate {
    pub q: usize,
    pub n: usize,
    #[serde(serialize_with = "decimal::rational")]
    pub code_defect: BigRational,
    /// `(1 - q!/q^q)^n`.
    #[serde(serialize_with = "decimal::rational")]
    pub probabilistic_defect_pow_n: BigRational,
    pub beats: bool,
}

/// The inner-code rate exceeds the probabilistic rate exactly when
/// `1 - q! S/m^q < (1 - q!/q^q)^n`.
pub fn beats_probabilistic(
    q: usize,
    n: usize,
    m: &BigUint,
    s: &BigUint,
) -> Result<BeatsCertificate> {
    let code_defect = inner_defect(q, m, s)?;
    let probabilistic_defect_pow_n = num_traits::pow(probabilistic_defect(q), n);
    let beats = code_defect < probabilistic_defect_pow_n;
    Ok(BeatsCertificate {
        q,
        n,
        code_defect,
        probabilistic_defect_pow_n,
        beats,
    })
}

/// For parity codes of length `n`:
/// `(-1)^(n-1) A_n > (-1)^(n-1) (q!)^(n-1) / q^q`.
pub fn parity_sign_condition(q: usize, n: usize, a_n: &BigInt) -> bool {
    let rhs = BigRational::new(
        BigInt::from(factorial(q as u64).pow((n - 1) as u32)),
        BigInt::from(q).pow(q as u32),
    );
    let lhs = BigRational::from_integer(a_n.clone());
    if (n - 1).is_multiple_of(2) {
        lhs > rhs
    } else {
        lhs < rhs
    }
}

/// `(q!)^2 / q^q`, the value `cm` must exceed for a length-3 parity code to
/// beat the probabilistic bound.
pub fn cm_threshold(q: usize) -> BigRational {
    let f = BigInt::from(factorial(q as u64));
    BigRational::new(&f * &f, BigInt::from(q).pow(q as u32))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    ThreeCol,
    FourCol,
}

/// `exp(-1/2)` to within `2^-bits`.
pub fn exp_neg_half(bits: u32) -> BigRational {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let half = BigRational::new(-BigInt::one(), BigInt::from(2));
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut k = 0u32;
    while term.abs() > eps {
        sum += &term;
        k += 1;
        term = term * &half / BigInt::from(k);
    }
    sum
}

/// Plug-in evaluation of the asymptotic three- and four-column bounds with
/// the lower-order term dropped. Flagged heuristic.
pub fn rate_asymptotic(q: usize, variant: Variant, bits: u32) -> Result<RateBound> {
    if q < 3 {
        return Err(Error::InvalidArgument(format!("need q >= 3, got {q}")));
    }
    if q % 4 == 2 {
        return Err(Error::Unsupported(format!(
            "q = {q}: no improving construction known for q = 2 mod 4"
        )));
    }
    let c = exp_neg_half(bits + 64);
    let t = distinct_probability(q);
    let one = BigRational::one();
    let qf = BigInt::from(factorial(q as u64));
    let (n, defect) = match variant {
        Variant::ThreeCol => {
            let tail = BigRational::new(qf.pow(3), BigInt::from(q).pow((3 * q - 1) as u32));
            (
                3,
                &one - &t * BigInt::from(3) + &t * &t * BigInt::from(3) - c * tail,
            )
        }
        Variant::FourCol => {
            let lead = num_traits::pow(&one - &t, 4);
            (4, lead - c * BigInt::from(3 * q) * num_traits::pow(t, 3))
        }
    };
    let tag = match variant {
        Variant::ThreeCol => "three-col",
        Variant::FourCol => "four-col",
    };
    let m = BigUint::from(q).pow(2);
    let mut r = RateBound::new(
        q,
        n,
        m,
        defect,
        bits,
        Provenance::new(tag, "asymptotic-plug-in"),
    )?;
    r.heuristic = true;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::{fourcol_lower_bound, parity_closed_form};

    const BITS: u32 = 128;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rate(q: usize, n: usize, m: u64, s: u64) -> RateBound {
        rate_from_inner(
            q,
            n,
            &big(m),
            &big(s),
            Provenance::new("test", "given"),
            BITS,
        )
        .unwrap()
    }

    fn digits(r: &RateBound, sig: usize) -> String {
        r.stable_decimal(sig, Rounding::Truncate).unwrap().plain()
    }

    #[test]
    fn probabilistic_rates() {
        assert_eq!(digits(&rate_probabilistic(4, BITS).unwrap(), 3), "0.0473");
        let r11 = rate_probabilistic(11, BITS).unwrap();
        assert_eq!(
            r11.stable_decimal(9, Rounding::Truncate)
                .unwrap()
                .scientific(),
            "2.01855739e-5"
        );
        let r2 = rate_probabilistic(2, BITS).unwrap();
        assert_eq!(r2.defect, BigRational::new(1.into(), 2.into()));
        assert_eq!(digits(&r2, 5), "1.0000");
        assert!(rate_probabilistic(1, BITS).is_err());
    }

    #[test]
    fn inner_code_rates() {
        assert_eq!(digits(&rate(4, 5, 16, 1100), 5), "0.049586");
        assert_eq!(digits(&rate(5, 5, 10, 152), 4), "0.01452");
        assert_eq!(digits(&rate(7, 7, 14, 884), 4), "0.001483");
    }

    #[test]
    fn ternary_length_four_rate_is_quarter_log_nine_fifths() {
        let r = rate(3, 4, 9, 84);
        assert_eq!(r.defect, BigRational::new(25.into(), 81.into()));
        let want = Real::log2(&BigRational::new(9.into(), 5.into()), BITS)
            .unwrap()
            .div_int(4);
        let diff = r.rate.sub(&want).mantissa().clone();
        assert!(diff.abs() <= BigInt::from(4), "{diff}");
        assert_eq!(digits(&r, 10), "0.2119992266");
    }

    #[test]
    fn invalid_counts_are_rejected() {
        assert!(matches!(
            rate_from_inner(3, 1, &big(3), &big(2), Provenance::new("x", "y"), BITS),
            Err(Error::InvalidCount(_))
        ));
        // Four symbols, q = 2: C(4, 2) = 6 subsets, 2 * 6 / 16 < 1, but 7 > C(4, 2).
        assert!(matches!(
            rate_from_inner(2, 1, &big(4), &big(7), Provenance::new("x", "y"), BITS),
            Err(Error::InvalidCount(_))
        ));
        // q = 2, m = 2: the single pair gives defect 1 - 2/4 > 0.
        assert!(rate_from_inner(2, 1, &big(2), &big(1), Provenance::new("x", "y"), BITS).is_ok());
    }

    #[test]
    fn larger_s_gives_larger_rate() {
        let mut prev = rate(4, 5, 16, 0).rate;
        for s in [1u64, 10, 100, 1000, 1100, 1500, 1800] {
            let r = rate(4, 5, 16, s).rate;
            assert!(r > prev, "S = {s}");
            prev = r;
        }
    }

    #[test]
    fn beats_examples() {
        // Length-3 parity code over Z_5 with cm = 15.
        let s = parity_closed_form(5, 3, &BigInt::from(15))
            .unwrap()
            .to_biguint()
            .unwrap();
        let c = beats_probabilistic(5, 3, &big(25), &s).unwrap();
        assert!(c.beats);
        assert!(BigRational::from_integer(15.into()) > cm_threshold(5));
        let s0 = parity_closed_form(4, 3, &BigInt::zero())
            .unwrap()
            .to_biguint()
            .unwrap();
        assert!(!beats_probabilistic(4, 3, &big(16), &s0).unwrap().beats);
        assert!(!parity_sign_condition(4, 3, &BigInt::zero()));
    }

    #[test]
    fn field_of_nine_beats_by_more_than_cyclic() {
        let sf = parity_closed_form(9, 3, &BigInt::from(2241))
            .unwrap()
            .to_biguint()
            .unwrap();
        let sz = parity_closed_form(9, 3, &BigInt::from(2025))
            .unwrap()
            .to_biguint()
            .unwrap();
        let cf = beats_probabilistic(9, 3, &big(81), &sf).unwrap();
        let cz = beats_probabilistic(9, 3, &big(81), &sz).unwrap();
        assert!(cf.beats && cz.beats);
        assert!(cf.code_defect < cz.code_defect);
    }

    #[test]
    fn sign_condition_matches_exact_comparison() {
        for (q, cm) in [
            (3u64, 3i64),
            (4, 0),
            (4, 8),
            (5, 15),
            (5, 4),
            (5, 5),
            (7, 133),
            (7, 30),
            (7, 31),
        ] {
            let q = q as usize;
            let s = parity_closed_form(q, 3, &BigInt::from(cm))
                .unwrap()
                .to_biguint()
                .unwrap();
            let m = big((q * q) as u64);
            let exact = beats_probabilistic(q, 3, &m, &s).unwrap().beats;
            assert_eq!(
                exact,
                parity_sign_condition(q, 3, &BigInt::from(cm)),
                "q = {q}, cm = {cm}"
            );
            assert_eq!(
                exact,
                BigRational::from_integer(cm.into()) > cm_threshold(q),
                "q = {q}, cm = {cm}"
            );
        }
    }

    #[test]
    fn parity_defect_expands_to_polynomial_in_t() {
        for (q, cm) in [(5usize, 15i64), (7, 133), (9, 2025), (9, 2241), (11, 37851)] {
            let s = parity_closed_form(q, 3, &BigInt::from(cm))
                .unwrap()
                .to_biguint()
                .unwrap();
            let defect = inner_defect(q, &big((q * q) as u64), &s).unwrap();
            let t = distinct_probability(q);
            let qf = BigInt::from(factorial(q as u64));
            let last = BigRational::new(qf * cm, BigInt::from(q).pow(2 * q as u32));
            let expanded =
                BigRational::one() - &t * BigInt::from(3) + &t * &t * BigInt::from(3) - last;
            assert_eq!(defect, expanded, "q = {q}");
        }
    }

    #[test]
    fn four_col_bound_beats_three_col_from_exact_counts() {
        for (q, cm) in [(5usize, 15u64), (7, 133), (9, 2025), (11, 37851)] {
            let s3 = parity_closed_form(q, 3, &BigInt::from(cm))
                .unwrap()
                .to_biguint()
                .unwrap();
            let s4 = fourcol_lower_bound(q, &big(cm)).to_biguint().unwrap();
            let m = big((q * q) as u64);
            let r3 = rate_from_inner(q, 3, &m, &s3, Provenance::new("a", "b"), BITS).unwrap();
            let r4 = rate_from_inner(q, 4, &m, &s4, Provenance::new("a", "b"), BITS).unwrap();
            assert!(r4.rate > r3.rate, "q = {q}");
        }
    }

    #[test]
    fn asymptotic_bounds() {
        assert!(matches!(
            rate_asymptotic(6, Variant::ThreeCol, BITS),
            Err(Error::Unsupported(_))
        ));
        let three = rate_asymptotic(13, Variant::ThreeCol, BITS).unwrap();
        let four = rate_asymptotic(13, Variant::FourCol, BITS).unwrap();
        assert!(three.heuristic && four.heuristic);
        assert!(four.rate > three.rate);
    }

    #[test]
    fn asymptotic_deviation_tracks_exact_at_eleven() {
        let q = 11;
        let p3 = num_traits::pow(probabilistic_defect(q), 3);
        let heur = rate_asymptotic(q, Variant::ThreeCol, BITS).unwrap();
        let s = parity_closed_form(q, 3, &BigInt::from(37851))
            .unwrap()
            .to_biguint()
            .unwrap();
        let exact = inner_defect(q, &big(121), &s).unwrap();
        let dh = Real::from_rational(&(&p3 - &heur.defect), 256).to_decimal(2, Rounding::Nearest);
        let de = Real::from_rational(&(&p3 - &exact), 256).to_decimal(2, Rounding::Nearest);
        assert_eq!(dh, de);
    }

    #[test]
    fn exp_neg_half_value() {
        let v = Real::from_rational(&exp_neg_half(200), 200).to_decimal(20, Rounding::Truncate);
        assert_eq!(v.plain(), "0.60653065971263342360");
    }
}
