//! Explicit inner codes.
//!
//! Codes are always materialized as a flat list of codewords over symbol
//! indices `0..q`. Linear constructions enumerate their messages
//! lexicographically, first message symbol slowest.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{is_prime, Element, GroupSpec};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_CODEWORDS: u64 = 1_000_000;

/// Symbols are stored as `u8`.
pub const MAX_ALPHABET: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplier {
    /// `(x, y, x + y, x - y)`; valid over any group of odd order.
    MinusOne,
    /// `(x, y, x + y, x + a*y)`; needs `a` and `a - 1` invertible.
    Element(Element),
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplier::MinusOne => f.write_str("minus-one"),
            Multiplier::Element(e) => write!(f, "{e}"),
        }
    }
}

impl Serialize for Multiplier {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Construction {
    Parity {
        group: GroupSpec,
        n: usize,
    },
    Sum {
        group: GroupSpec,
    },
    FourCol {
        group: GroupSpec,
        multiplier: Multiplier,
    },
    Mds52F4,
    ShiftUnion {
        q: usize,
    },
    GenericLinear {
        group: GroupSpec,
        k: usize,
    },
    Imported,
}

impl Construction {
    pub fn tag(&self) -> &'static str {
        match self {
            Construction::Parity { .. } => "parity",
            Construction::Sum { .. } => "sum",
            Construction::FourCol { .. } => "four-col",
            Construction::Mds52F4 => "mds52-f4",
            Construction::ShiftUnion { .. } => "shift-union",
            Construction::GenericLinear { .. } => "generic-linear",
            Construction::Imported => "imported",
        }
    }

    pub fn group(&self) -> Option<&GroupSpec> {
        match self {
            Construction::Parity { group, .. }
            | Construction::Sum { group }
            | Construction::FourCol { group, .. }
            | Construction::GenericLinear { group, .. } => Some(group),
            _ => None,
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Parity { group, n } => write!(f, "parity:{group}:{n}"),
            Construction::Sum { group } => write!(f, "sum:{group}"),
            Construction::FourCol {
                group,
                multiplier: Multiplier::MinusOne,
            } => {
                write!(f, "fourcol:{group}")
            }
            Construction::FourCol { group, multiplier } => {
                write!(f, "fourcol:{group}:{multiplier}")
            }
            Construction::Mds52F4 => f.write_str("mds52f4"),
            Construction::ShiftUnion { q } => write!(f, "shift:{q}"),
            Construction::GenericLinear { group, k } => write!(f, "generic-linear:{group}:k={k}"),
            Construction::Imported => f.write_str("imported"),
        }
    }
}

/// `(q, n, m, construction tag)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSummary {
    pub q: usize,
    pub n: usize,
    pub m: usize,
    pub construction: String,
}

#[derive(Clone, Debug)]
pub struct Code {
    q: usize,
    n: usize,
    symbols: Vec<u8>,
    construction: Construction,
    dimension: Option<usize>,
    dual_distance_hint: Option<usize>,
}

impl PartialEq for Code {
    /// Equal alphabet, length and codeword list; metadata is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.n == other.n && self.symbols == other.symbols
    }
}

impl Code {
    /// Validates lengths, symbol range and pairwise distinctness.
    pub fn from_rows<R: AsRef<[usize]>>(
        q: usize,
        n: usize,
        rows: &[R],
        construction: Construction,
    ) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(Error::InvalidCode(format!(
                "alphabet size {q} outside [2, {MAX_ALPHABET}]"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidCode("length must be positive".into()));
        }
        let mut symbols = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidCode(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for &s in row {
                if s >= q {
                    return Err(Error::InvalidCode(format!(
                        "row {i} has symbol {s} >= q = {q}"
                    )));
                }
                symbols.push(s as u8);
            }
        }
        let code = Code {
            q,
            n,
            symbols,
            construction,
            dimension: None,
            dual_distance_hint: None,
        };
        code.check_distinct()?;
        Ok(code)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut seen: HashMap<&[u8], usize> = HashMap::with_capacity(self.len());
        for (i, w) in self.codewords().enumerate() {
            if let Some(first) = seen.insert(w, i) {
                return Err(Error::DuplicateCodeword { first, second: i });
            }
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of codewords `m`.
    pub fn len(&self) -> usize {
        self.symbols.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn codeword(&self, i: usize) -> &[u8] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn codewords(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.symbols.chunks_exact(self.n)
    }

    pub fn symbol(&self, word: usize, coord: usize) -> usize {
        self.symbols[word * self.n + coord] as usize
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    /// Message length `k` for linear constructions.
    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    pub fn dual_distance_hint(&self) -> Option<usize> {
        self.dual_distance_hint
    }

    pub fn summary(&self) -> CodeSummary {
        CodeSummary {
            q: self.q,
            n: self.n,
            m: self.len(),
            construction: self.construction.to_string(),
        }
    }

    /// Largest number of coordinates on which two distinct codewords agree.
    pub fn max_agreement(&self) -> usize {
        let m = self.len();
        let mut best = 0;
        for i in 0..m {
            let a = self.codeword(i);
            for j in i + 1..m {
                let b = self.codeword(j);
                let agree = a.iter().zip(b).filter(|(x, y)| x == y).count();
                best = best.max(agree);
            }
        }
        best
    }

    /// Exhaustive MDS check: no two codewords agree on `k` or more
    /// coordinates. `None` when the dimension is unknown.
    pub fn is_mds(&self) -> Option<bool> {
        let k = self.dimension?;
        Some(self.len() == self.q.pow(k as u32) && self.max_agreement() < k)
    }

    /// Apply a symbol permutation to one coordinate of every codeword.
    pub fn relabel_coordinate(&self, coord: usize, perm: &[usize]) -> Result<Code> {
        if coord >= self.n || perm.len() != self.q {
            return Err(Error::InvalidArgument("bad relabeling".into()));
        }
        let mut seen = vec![false; self.q];
        for &p in perm {
            if p >= self.q || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(
                    "relabeling is not a permutation".into(),
                ));
            }
        }
        let mut out = self.clone();
        for w in out.symbols.chunks_exact_mut(self.n) {
            w[coord] = perm[w[coord] as usize] as u8;
        }
        Ok(out)
    }

    /// Reorder coordinates: new coordinate `j` is old coordinate `order[j]`.
    pub fn permute_coordinates(&self, order: &[usize]) -> Result<Code> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.n).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument(
                "not a coordinate permutation".into(),
            ));
        }
        let mut out = self.clone();
        for (dst, src) in out
            .symbols
            .chunks_exact_mut(self.n)
            .zip(self.symbols.chunks_exact(self.n))
        {
            for (j, &o) in order.iter().enumerate() {
                dst[j] = src[o];
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# {}\n{} {} {}\n",
            self.construction,
            self.q,
            self.n,
            self.len()
        );
        for w in self.codewords() {
            let row: Vec<String> = w.iter().map(|s| s.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the text format: a `q n m` header followed by `m` rows of `n`
    /// symbols; `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Code> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_nums = |line: usize, l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad integer {t:?}"),
                    })
                })
                .collect()
        };
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let h = parse_nums(hline, header)?;
        let [q, n, m] = h[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `q n m`".into(),
            });
        };
        if !(2..=MAX_ALPHABET).contains(&q) || n == 0 {
            return Err(Error::Parse {
                line: hline,
                msg: format!("unsupported q = {q}, n = {n}"),
            });
        }
        let mut rows = Vec::with_capacity(m);
        for (line, l) in lines {
            let row = parse_nums(line, l)?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {n} symbols, got {}", row.len()),
                });
            }
            if let Some(s) = row.iter().find(|&&s| s >= q) {
                return Err(Error::Parse {
                    line,
                    msg: format!("symbol {s} out of range for q = {q}"),
                });
            }
            rows.push(row);
        }
        if rows.len() != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header says {m} rows, found {}", rows.len()),
            });
        }
        Code::from_rows(q, n, &rows, Construction::Imported)
    }
}

pub fn import_code(path: impl AsRef<Path>) -> Result<Code> {
    Code::parse_text(&fs::read_to_string(path)?)
}

pub fn export_code(code: &Code, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, code.to_text())?;
    Ok(())
}

/// All `k`-tuples over `0..q`, lexicographic with the first entry slowest.
fn messages(q: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = q.pow(k as u32);
    (0..total).map(move |mut idx| {
        let mut msg = vec![0; k];
        for slot in msg.iter_mut().rev() {
            *slot = idx % q;
            idx /= q;
        }
        msg
    })
}

fn message_count(spec: &GroupSpec, k: usize, cap: u64) -> Result<usize> {
    let count = (spec.order() as u64)
        .checked_pow(k as u32)
        .unwrap_or(u64::MAX);
    if count > cap {
        return Err(Error::infeasible(
            format!("a code with {}^{k} codewords", spec.order()),
            count,
            cap,
        ));
    }
    Ok(count as usize)
}

fn alphabet_ok(spec: &GroupSpec) -> Result<()> {
    if spec.order() > MAX_ALPHABET {
        return Err(Error::Unsupported(format!(
            "alphabet of size {} exceeds {MAX_ALPHABET}",
            spec.order()
        )));
    }
    Ok(())
}

/// `{(x_1, .., x_{n-1}, x_1 + .. + x_{n-1})}` over the group.
pub fn parity_code(spec: &GroupSpec, n: usize) -> Result<Code> {
    parity_code_capped(spec, n, DEFAULT_MAX_CODEWORDS)
}

pub fn parity_code_capped(spec: &GroupSpec, n: usize, max_codewords: u64) -> Result<Code> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "parity code length must be >= 2, got {n}"
        )));
    }
    alphabet_ok(spec)?;
    message_count(spec, n - 1, max_codewords)?;
    let rows: Vec<Vec<usize>> = messages(spec.order(), n - 1)
        .map(|mut msg| {
            let s = msg.iter().fold(0, |acc, &x| spec.add_idx(acc, x));
            msg.push(s);
            msg
        })
        .collect();
    let construction = Construction::Parity {
        group: spec.clone(),
        n,
    };
    let mut code = Code::from_rows(spec.order(), n, &rows, construction)?;
    code.dimension = Some(n - 1);
    // The dual is spanned by (1, .., 1, -1).
    code.dual_distance_hint = Some(n);
    Ok(code)
}

/// `{(x, y, x + y)}`.
pub fn sum_code(spec: &GroupSpec) -> Result<Code> {
    let mut code = parity_code(spec, 3)?;
    code.construction = Construction::Sum {
        group: spec.clone(),
    };
    Ok(code)
}

/// `{(x, y, x + y, x + a*y)}`, a `[4, 2]` MDS code.
pub fn four_col_code(spec: &GroupSpec, multiplier: Multiplier) -> Result<Code> {
    alphabet_ok(spec)?;
    let fourth: Box<dyn Fn(usize, usize) -> usize> = match multiplier {
        Multiplier::MinusOne => {
            if !spec.doubling_is_bijective() {
                return Err(Error::MultiplierNotAdmissible(format!(
                    "-1 over {spec} (even order)"
                )));
            }
            Box::new(|x, y| spec.add_idx(x, spec.neg_idx(y)))
        }
        Multiplier::Element(a) => {
            let a_minus_one = spec.sub(a, spec.one())?;
            if !spec.is_invertible(a)? || !spec.is_invertible(a_minus_one)? {
                return Err(Error::MultiplierNotAdmissible(format!("{a} over {spec}")));
            }
            Box::new(move |x, y| spec.add_idx(x, spec.mul_idx(a.0, y)))
        }
    };
    let rows: Vec<Vec<usize>> = messages(spec.order(), 2)
        .map(|msg| {
            let (x, y) = (msg[0], msg[1]);
            vec![x, y, spec.add_idx(x, y), fourth(x, y)]
        })
        .collect();
    let construction = Construction::FourCol {
        group: spec.clone(),
        multiplier,
    };
    let mut code = Code::from_rows(spec.order(), 4, &rows, construction)?;
    code.dimension = Some(2);
    if code.is_mds() != Some(true) {
        return Err(Error::Inconsistency(format!(
            "four-column code over {spec} is not MDS"
        )));
    }
    code.dual_distance_hint = Some(3);
    Ok(code)
}

/// The `[5, 2]` MDS code `{(a, b, a + b, a*alpha + b, a*(alpha + 1) + b)}`
/// over GF(4) with the built-in modulus.
pub fn mds52_f4() -> Code {
    let gf4 = GroupSpec::field(2, 2).expect("GF(4) is built in");
    let alpha = Element(2);
    let alpha1 = Element(3);
    let forms = [
        vec![Element(1), Element(0)],
        vec![Element(0), Element(1)],
        vec![Element(1), Element(1)],
        vec![alpha, Element(1)],
        vec![alpha1, Element(1)],
    ];
    let mut code = generic_linear_code(&gf4, 2, &forms).expect("the [5,2] code is injective");
    code.construction = Construction::Mds52F4;
    debug_assert_eq!(code.is_mds(), Some(true));
    code
}

/// The `q` cyclic shifts of `(0, 1, .., q-1)` followed by the `q` constant
/// words.
pub fn shift_union_code(q: usize) -> Result<Code> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!(
            "shift-union code needs a prime q, got {q}"
        )));
    }
    if q > MAX_ALPHABET {
        return Err(Error::Unsupported(format!(
            "q = {q} exceeds {MAX_ALPHABET}"
        )));
    }
    let shifts = (0..q).map(|s| (0..q).map(|j| (j + s) % q).collect::<Vec<_>>());
    let constants = (0..q).map(|i| vec![i; q]);
    let rows: Vec<Vec<usize>> = shifts.chain(constants).collect();
    Code::from_rows(q, q, &rows, Construction::ShiftUnion { q })
}

/// Coordinate `j` of the codeword for message `x` is `sum_i forms[j][i] * x_i`.
pub fn generic_linear_code(spec: &GroupSpec, k: usize, forms: &[Vec<Element>]) -> Result<Code> {
    generic_linear_code_capped(spec, k, forms, DEFAULT_MAX_CODEWORDS)
}

pub fn generic_linear_code_capped(
    spec: &GroupSpec,
    k: usize,
    forms: &[Vec<Element>],
    max_codewords: u64,
) -> Result<Code> {
    let n = forms.len();
    if k == 0 || n < k {
        return Err(Error::InvalidArgument(format!(
            "need n >= k >= 1, got n = {n}, k = {k}"
        )));
    }
    alphabet_ok(spec)?;
    for f in forms {
        if f.len() != k {
            return Err(Error::InvalidArgument(format!(
                "linear form {f:?} must have {k} coefficients"
            )));
        }
        for &c in f {
            spec.element(c.0)?;
        }
    }
    message_count(spec, k, max_codewords)?;
    let rows: Vec<Vec<usize>> = messages(spec.order(), k)
        .map(|msg| {
            forms
                .iter()
                .map(|f| {
                    f.iter()
                        .zip(&msg)
                        .fold(0, |acc, (c, &x)| spec.add_idx(acc, spec.mul_idx(c.0, x)))
                })
                .collect()
        })
        .collect();
    let construction = Construction::GenericLinear {
        group: spec.clone(),
        k,
    };
    let mut code = Code::from_rows(spec.order(), n, &rows, construction).map_err(|e| match e {
        Error::DuplicateCodeword { first, second } => Error::InvalidCode(format!(
            "degenerate linear forms: messages {first} and {second} share a codeword"
        )),
        other => other,
    })?;
    code.dimension = Some(k);
    if code.is_mds() == Some(true) {
        code.dual_distance_hint = Some(k + 1);
    }
    Ok(code)
}

/// Command-line code syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeSpec {
    Parity(GroupSpec, usize),
    Sum(GroupSpec),
    FourCol(GroupSpec, Option<usize>),
    Mds52F4,
    Shift(usize),
    File(PathBuf),
}

impl CodeSpec {
    pub fn build(&self) -> Result<Code> {
        match self {
            CodeSpec::Parity(g, n) => parity_code(g, *n),
            CodeSpec::Sum(g) => sum_code(g),
            CodeSpec::FourCol(g, None) => four_col_code(g, Multiplier::MinusOne),
            CodeSpec::FourCol(g, Some(a)) => four_col_code(g, Multiplier::Element(g.element(*a)?)),
            CodeSpec::Mds52F4 => Ok(mds52_f4()),
            CodeSpec::Shift(q) => shift_union_code(*q),
            CodeSpec::File(p) => import_code(p),
        }
    }
}

impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unrecognised code spec {s:?}"));
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let group_and_number = |rest: &str| -> Option<(GroupSpec, usize)> {
            let (g, n) = rest.rsplit_once(':')?;
            Some((g.parse().ok()?, n.parse().ok()?))
        };
        match kind {
            "parity" => group_and_number(rest)
                .map(|(g, n)| CodeSpec::Parity(g, n))
                .ok_or_else(bad),
            "sum" => Ok(CodeSpec::Sum(rest.parse()?)),
            "fourcol" => match group_and_number(rest) {
                Some((g, a)) => Ok(CodeSpec::FourCol(g, Some(a))),
                None => Ok(CodeSpec::FourCol(rest.parse()?, None)),
            },
            "mds52f4" if rest.is_empty() => Ok(CodeSpec::Mds52F4),
            "shift" => rest.parse().map(CodeSpec::Shift).map_err(|_| bad()),
            "file" if !rest.is_empty() => Ok(CodeSpec::File(PathBuf::from(rest))),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn rows(code: &Code) -> Vec<Vec<usize>> {
        code.codewords()
            .map(|w| w.iter().map(|&s| s as usize).collect())
            .collect()
    }

    #[test]
    fn parity_small_cases() {
        let c = parity_code(&g("z3"), 3).unwrap();
        assert_eq!(c.len(), 9);
        assert!(rows(&c).contains(&vec![1, 2, 0]));
        let c = parity_code(&g("z2"), 2).unwrap();
        assert_eq!(rows(&c), vec![vec![0, 0], vec![1, 1]]);
        let c = parity_code(&g("gf4"), 3).unwrap();
        assert_eq!(c.len(), 16);
        assert_eq!(c.max_agreement(), 1);
        assert_eq!(c.is_mds(), Some(true));
    }

    #[test]
    fn parity_sizes_match_formula() {
        for (s, n) in [
            ("z3", 4),
            ("z5", 3),
            ("gf4", 4),
            ("prod(z2,z3)", 3),
            ("z2", 6),
        ] {
            let spec = g(s);
            let c = parity_code(&spec, n).unwrap();
            assert_eq!(c.len(), spec.order().pow(n as u32 - 1));
            assert_eq!(c.n(), n);
            assert_eq!(c.dual_distance_hint(), Some(n));
        }
        assert!(parity_code(&g("z3"), 1).is_err());
    }

    #[test]
    fn parity_refuses_oversized() {
        let err = parity_code(&g("z11"), 8).unwrap_err();
        assert!(err.is_feasibility());
        assert!(parity_code_capped(&g("z3"), 4, 26)
            .unwrap_err()
            .is_feasibility());
    }

    #[test]
    fn four_col_codes() {
        let c = four_col_code(&g("z3"), Multiplier::MinusOne).unwrap();
        assert_eq!(c.len(), 9);
        assert_eq!(c.is_mds(), Some(true));

        let gf4 = g("gf4");
        let c = four_col_code(&gf4, Multiplier::Element(Element(2))).unwrap();
        // (1, 1, 0, 1 + alpha)
        assert!(rows(&c).contains(&vec![1, 1, 0, 3]));

        let p = g("prod(gf4,z3)");
        let a = p.from_components(&[Element(2), Element(2)]).unwrap();
        let c = four_col_code(&p, Multiplier::Element(a)).unwrap();
        assert_eq!(c.len(), 144);
        assert_eq!(c.is_mds(), Some(true));
    }

    #[test]
    fn four_col_rejects_bad_multipliers() {
        let gf4 = g("gf4");
        for a in [0, 1] {
            assert!(matches!(
                four_col_code(&gf4, Multiplier::Element(Element(a))),
                Err(Error::MultiplierNotAdmissible(_))
            ));
        }
        assert!(matches!(
            four_col_code(&gf4, Multiplier::MinusOne),
            Err(Error::MultiplierNotAdmissible(_))
        ));
        assert!(four_col_code(&g("z4"), Multiplier::MinusOne).is_err());
        // 4 is invertible mod 9 but 4 - 1 = 3 is not.
        assert!(four_col_code(&g("z9"), Multiplier::Element(Element(4))).is_err());
    }

    #[test]
    fn four_col_minus_one_reparameterizes_through_last_two_coordinates() {
        for s in ["z3", "z5", "z7", "z9", "gf9"] {
            let c = four_col_code(&g(s), Multiplier::MinusOne).unwrap();
            let mut seen = std::collections::HashSet::new();
            for w in c.codewords() {
                assert!(seen.insert((w[2], w[3])), "{s}");
            }
            assert_eq!(seen.len(), c.len());
        }
    }

    #[test]
    fn mds52_contents() {
        let c = mds52_f4();
        assert_eq!((c.q(), c.n(), c.len()), (4, 5, 16));
        let r = rows(&c);
        assert!(r.contains(&vec![0, 0, 0, 0, 0]));
        assert!(r.contains(&vec![1, 0, 1, 2, 3]));
        assert_eq!(c.max_agreement(), 1);
        assert_eq!(c.dual_distance_hint(), Some(3));
        assert_eq!(c.construction().tag(), "mds52-f4");
    }

    #[test]
    fn shift_union_contents() {
        let c = shift_union_code(3).unwrap();
        assert_eq!(
            rows(&c),
            vec![
                vec![0, 1, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![0, 0, 0],
                vec![1, 1, 1],
                vec![2, 2, 2]
            ]
        );
        let c = shift_union_code(5).unwrap();
        assert_eq!((c.len(), c.n()), (10, 5));
        for i in 0..5 {
            for j in i + 1..5 {
                assert!(c.codeword(i).iter().zip(c.codeword(j)).all(|(a, b)| a != b));
            }
        }
        assert!(shift_union_code(4).is_err());
        assert!(shift_union_code(1).is_err());
    }

    #[test]
    fn generic_linear_matches_named_constructions() {
        let z5 = g("z5");
        let forms = [
            vec![Element(1), Element(0)],
            vec![Element(0), Element(1)],
            vec![Element(1), Element(1)],
        ];
        let c = generic_linear_code(&z5, 2, &forms).unwrap();
        assert_eq!(c, sum_code(&z5).unwrap());

        let c = generic_linear_code(&g("z4"), 1, &[vec![Element(1)], vec![Element(2)]]).unwrap();
        assert_eq!(c.len(), 4);

        let gf4 = g("gf4");
        let forms = [
            vec![Element(1), Element(0)],
            vec![Element(0), Element(1)],
            vec![Element(1), Element(1)],
            vec![Element(2), Element(1)],
            vec![Element(3), Element(1)],
        ];
        assert_eq!(generic_linear_code(&gf4, 2, &forms).unwrap(), mds52_f4());
    }

    #[test]
    fn generic_linear_rejects_degenerate_forms() {
        let z4 = g("z4");
        let err = generic_linear_code(&z4, 1, &[vec![Element(2)], vec![Element(2)]]).unwrap_err();
        assert!(matches!(err, Error::InvalidCode(_)));
        assert!(generic_linear_code(&z4, 2, &[vec![Element(1), Element(0)]]).is_err());
        assert!(generic_linear_code(&z4, 1, &[vec![Element(4)]]).is_err());
    }

    #[test]
    fn generic_mds_is_computed() {
        let z4 = g("z4");
        // 2 is a zero divisor, so (x, y, x + 2y) is not MDS over Z_4.
        let forms = [
            vec![Element(1), Element(0)],
            vec![Element(0), Element(1)],
            vec![Element(1), Element(2)],
        ];
        let c = generic_linear_code(&z4, 2, &forms).unwrap();
        assert_eq!(c.is_mds(), Some(false));
        assert_eq!(c.dual_distance_hint(), None);
    }

    #[test]
    fn text_round_trip() {
        let c = sum_code(&g("z5")).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sum.code");
        export_code(&c, &path).unwrap();
        assert_eq!(import_code(&path).unwrap(), c);
    }

    #[test]
    fn text_errors() {
        assert!(matches!(
            Code::parse_text("3 2 1\n0 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Code::parse_text("3 2 2\n0 1\n0 1\n"),
            Err(Error::DuplicateCodeword { .. })
        ));
        assert!(Code::parse_text("3 2\n0 1\n").is_err());
        assert!(Code::parse_text("3 2 2\n0 1\n").is_err());
        assert!(Code::parse_text("3 2 1\n0 1 2\n").is_err());
        let c = Code::parse_text("# comment\n2 2 2 # trailing\n0 0\n\n1 1\n").unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn code_spec_parsing() {
        assert_eq!(
            "parity:z5:4".parse::<CodeSpec>().unwrap(),
            CodeSpec::Parity(g("z5"), 4)
        );
        assert_eq!(
            "sum:gf9".parse::<CodeSpec>().unwrap(),
            CodeSpec::Sum(g("gf9"))
        );
        assert_eq!(
            "fourcol:z3".parse::<CodeSpec>().unwrap(),
            CodeSpec::FourCol(g("z3"), None)
        );
        assert_eq!(
            "fourcol:gf4:2".parse::<CodeSpec>().unwrap(),
            CodeSpec::FourCol(g("gf4"), Some(2))
        );
        assert_eq!(
            "fourcol:gf9:2,2,1".parse::<CodeSpec>().unwrap(),
            CodeSpec::FourCol(g("gf9:2,2,1"), None)
        );
        assert_eq!(
            "fourcol:prod(gf4,z3):11".parse::<CodeSpec>().unwrap(),
            CodeSpec::FourCol(g("prod(gf4,z3)"), Some(11))
        );
        assert_eq!("mds52f4".parse::<CodeSpec>().unwrap(), CodeSpec::Mds52F4);
        assert_eq!("shift:7".parse::<CodeSpec>().unwrap(), CodeSpec::Shift(7));
        for bad in ["parity:z5", "shift:x", "nope", "file:", "sum:z1"] {
            assert!(bad.parse::<CodeSpec>().is_err(), "{bad}");
        }
    }
}
