//! Finite abelian groups and the commutative rings built on them.
//!
//! Every group is presented with a canonical bijection between its elements
//! and the symbol indices `0..order`, index 0 being the additive identity:
//!
//! * `Cyclic(q)`: the residue itself.
//! * `Field(p, r)`: the polynomial coefficients read as base-`p` digits,
//!   constant term least significant.
//! * `Product(G_1, .., G_t)`: mixed radix over the components, the first
//!   component least significant.
//!
//! Multiplication is the ring structure of `Z_q`, of `GF(p^r)`, or
//! componentwise on products.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted anywhere in the crate.
pub const MAX_ORDER: usize = 1 << 20;

/// Largest `p^r` for which the irreducibility of a field modulus is checked.
pub const MAX_CHECKED_FIELD: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub usize);

impl Element {
    pub const ZERO: Element = Element(0);

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `GF(p^r)` presented as `Z_p[x] / (modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: usize,
    r: usize,
    /// Monic, `r + 1` coefficients, constant term first.
    modulus: Vec<usize>,
}

impl FieldSpec {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    pub fn order(&self) -> usize {
        self.p.pow(self.r as u32)
    }

    fn is_builtin(&self) -> bool {
        builtin_modulus(self.p, self.r).as_deref() == Some(&self.modulus[..])
    }

    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.r];
        for d in out.iter_mut() {
            *d = index % self.p;
            index /= self.p;
        }
        out
    }

    fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.index_of(&sum)
    }

    fn neg(&self, a: usize) -> usize {
        let d: Vec<usize> = self
            .digits(a)
            .iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.index_of(&d)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0usize; 2 * self.r];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce: x^r = -(m_0 + m_1 x + .. + m_{r-1} x^{r-1}).
        for deg in (self.r..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (k, m) in self.modulus[..self.r].iter().enumerate() {
                let idx = deg - self.r + k;
                prod[idx] = (prod[idx] + (self.p - m) * c) % self.p;
            }
        }
        self.index_of(&prod[..self.r])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic(usize),
    Field(FieldSpec),
    Product(Vec<GroupSpec>),
}

/// A validated finite abelian group (and ring) presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    kind: GroupKind,
    order: usize,
}

/// Built-in field moduli, constant term first.
pub fn builtin_modulus(p: usize, r: usize) -> Option<Vec<usize>> {
    match (p, r) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (p, 1) if is_prime(p) => Some(vec![0, 1]),
        _ => None,
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `num` modulo the monic `den` over `Z_p`; coefficient vectors
/// are constant term first.
fn poly_rem(num: &[usize], den: &[usize], p: usize) -> Vec<usize> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = rem.pop().unwrap_or(0);
        if lead == 0 {
            continue;
        }
        let shift = rem.len() - dd;
        for (k, c) in den[..dd].iter().enumerate() {
            rem[shift + k] = (rem[shift + k] + (p - c) * lead) % p;
        }
    }
    rem
}

/// Exhaustive search for a monic factor of degree `1..=r/2`.
pub fn is_irreducible(p: usize, modulus: &[usize]) -> bool {
    let r = modulus.len() - 1;
    for d in 1..=r / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                cand.push(x % p);
                x /= p;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GroupSpec {
    pub fn cyclic(q: usize) -> Result<Self> {
        if !(2..=MAX_ORDER).contains(&q) {
            return Err(Error::InvalidGroup(format!(
                "cyclic order {q} outside [2, {MAX_ORDER}]"
            )));
        }
        Ok(GroupSpec {
            kind: GroupKind::Cyclic(q),
            order: q,
        })
    }

    /// `GF(p^r)` with the built-in modulus.
    pub fn field(p: usize, r: usize) -> Result<Self> {
        let modulus = builtin_modulus(p, r).ok_or_else(|| {
            Error::InvalidGroup(format!("no built-in modulus for GF({p}^{r}); supply one"))
        })?;
        Self::field_with_modulus(p, r, modulus)
    }

    pub fn field_with_modulus(p: usize, r: usize, modulus: Vec<usize>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidGroup("field degree must be positive".into()));
        }
        let order = p
            .checked_pow(r as u32)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidGroup(format!("GF({p}^{r}) is too large")))?;
        if modulus.len() != r + 1 {
            return Err(Error::InvalidGroup(format!(
                "modulus must have {} coefficients (constant term first), got {}",
                r + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidGroup(format!(
                "modulus coefficients must lie in [0, {p})"
            )));
        }
        if modulus[r] != 1 {
            return Err(Error::InvalidGroup("modulus must be monic".into()));
        }
        if order > MAX_CHECKED_FIELD {
            return Err(Error::InvalidGroup(format!(
                "irreducibility is only checked for fields of order <= {MAX_CHECKED_FIELD}"
            )));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::NotIrreducible { p, modulus });
        }
        Ok(GroupSpec {
            kind: GroupKind::Field(FieldSpec { p, r, modulus }),
            order,
        })
    }

    pub fn product(components: Vec<GroupSpec>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidGroup("empty product".into()));
        }
        let mut order = 1usize;
        for c in &components {
            order = order
                .checked_mul(c.order)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| Error::InvalidGroup("product order too large".into()))?;
        }
        Ok(GroupSpec {
            kind: GroupKind::Product(components),
            order,
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Element {
        Element::ZERO
    }

    pub fn one(&self) -> Element {
        Element(self.one_idx())
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.order).map(Element)
    }

    pub fn element(&self, index: usize) -> Result<Element> {
        self.check(Element(index))?;
        Ok(Element(index))
    }

    fn check(&self, e: Element) -> Result<()> {
        if e.0 < self.order {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                index: e.0,
                order: self.order,
            })
        }
    }

    /// Mixed-radix split of a product element into its components.
    pub fn components(&self, e: Element) -> Result<Vec<Element>> {
        self.check(e)?;
        match &self.kind {
            GroupKind::Product(cs) => {
                let mut x = e.0;
                Ok(cs
                    .iter()
                    .map(|c| {
                        let d = x % c.order;
                        x /= c.order;
                        Element(d)
                    })
                    .collect())
            }
            _ => Ok(vec![e]),
        }
    }

    pub fn from_components(&self, parts: &[Element]) -> Result<Element> {
        match &self.kind {
            GroupKind::Product(cs) => {
                if parts.len() != cs.len() {
                    return Err(Error::InvalidArgument(format!(
                        "expected {} components, got {}",
                        cs.len(),
                        parts.len()
                    )));
                }
                let mut idx = 0;
                for (c, e) in cs.iter().zip(parts).rev() {
                    c.check(*e)?;
                    idx = idx * c.order + e.0;
                }
                Ok(Element(idx))
            }
            _ => match parts {
                [e] => self.element(e.0),
                _ => Err(Error::InvalidArgument(
                    "expected exactly one component".into(),
                )),
            },
        }
    }

    /// Polynomial coefficients of a field element, constant term first.
    pub fn field_digits(&self, e: Element) -> Result<Vec<usize>> {
        self.check(e)?;
        match &self.kind {
            GroupKind::Field(f) => Ok(f.digits(e.0)),
            _ => Err(Error::InvalidArgument("not a field".into())),
        }
    }

    pub fn field_element(&self, digits: &[usize]) -> Result<Element> {
        match &self.kind {
            GroupKind::Field(f) if digits.len() == f.r && digits.iter().all(|&d| d < f.p) => {
                Ok(Element(f.index_of(digits)))
            }
            _ => Err(Error::InvalidArgument(format!(
                "{digits:?} is not a digit vector of {self}"
            ))),
        }
    }

    pub fn add(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element(self.add_idx(a.0, b.0)))
    }

    pub fn neg(&self, a: Element) -> Result<Element> {
        self.check(a)?;
        Ok(Element(self.neg_idx(a.0)))
    }

    pub fn sub(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element(self.add_idx(a.0, self.neg_idx(b.0))))
    }

    pub fn mul(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element(self.mul_idx(a.0, b.0)))
    }

    pub fn is_invertible(&self, a: Element) -> Result<bool> {
        Ok(self.inverse(a)?.is_some())
    }

    pub fn inverse(&self, a: Element) -> Result<Option<Element>> {
        self.check(a)?;
        let one = self.one_idx();
        Ok((0..self.order)
            .find(|&b| self.mul_idx(a.0, b) == one)
            .map(Element))
    }

    pub fn sum_of_all_elements(&self) -> Element {
        Element((0..self.order).fold(0, |acc, x| self.add_idx(acc, x)))
    }

    /// `x -> x + x` is a bijection, i.e. the order is odd.
    pub fn doubling_is_bijective(&self) -> bool {
        let mut seen = vec![false; self.order];
        (0..self.order).all(|x| !std::mem::replace(&mut seen[self.add_idx(x, x)], true))
    }

    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic(q) => (a + b) % q,
            GroupKind::Field(f) => f.add(a, b),
            GroupKind::Product(cs) => self.componentwise(cs, a, b, GroupSpec::add_idx),
        }
    }

    pub(crate) fn neg_idx(&self, a: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic(q) => (q - a) % q,
            GroupKind::Field(f) => f.neg(a),
            GroupKind::Product(cs) => {
                let (mut x, mut idx, mut radix) = (a, 0, 1);
                for c in cs {
                    idx += c.neg_idx(x % c.order) * radix;
                    x /= c.order;
                    radix *= c.order;
                }
                idx
            }
        }
    }

    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic(q) => (a * b) % q,
            GroupKind::Field(f) => f.mul(a, b),
            GroupKind::Product(cs) => self.componentwise(cs, a, b, GroupSpec::mul_idx),
        }
    }

    fn one_idx(&self) -> usize {
        match &self.kind {
            GroupKind::Cyclic(_) | GroupKind::Field(_) => 1,
            GroupKind::Product(cs) => {
                let (mut idx, mut radix) = (0, 1);
                for c in cs {
                    idx += c.one_idx() * radix;
                    radix *= c.order;
                }
                idx
            }
        }
    }

    fn componentwise(
        &self,
        cs: &[GroupSpec],
        a: usize,
        b: usize,
        op: fn(&GroupSpec, usize, usize) -> usize,
    ) -> usize {
        let (mut x, mut y, mut idx, mut radix) = (a, b, 0, 1);
        for c in cs {
            idx += op(c, x % c.order, y % c.order) * radix;
            x /= c.order;
            y /= c.order;
            radix *= c.order;
        }
        idx
    }

    /// Row-major Cayley table of the addition, `table[a * order + b] = a + b`.
    pub fn addition_table(&self) -> Vec<usize> {
        let q = self.order;
        let mut t = Vec::with_capacity(q * q);
        for a in 0..q {
            for b in 0..q {
                t.push(self.add_idx(a, b));
            }
        }
        t
    }

    /// Exhaustive check of the abelian group and ring axioms together with
    /// the index round trip. Intended for small orders.
    pub fn verify_axioms(&self) -> Result<()> {
        let q = self.order;
        let fail = |what: String| Err(Error::Inconsistency(format!("{self}: {what}")));
        let one = self.one_idx();
        for a in 0..q {
            if self.add_idx(a, 0) != a {
                return fail(format!("{a} + 0 != {a}"));
            }
            if self.add_idx(a, self.neg_idx(a)) != 0 {
                return fail(format!("{a} + (-{a}) != 0"));
            }
            if self.mul_idx(one, a) != a {
                return fail(format!("1 * {a} != {a}"));
            }
            if let Ok(parts) = self.components(Element(a)) {
                if self.from_components(&parts)?.0 != a {
                    return fail(format!("index {a} does not round-trip"));
                }
            }
            for b in 0..q {
                if self.add_idx(a, b) != self.add_idx(b, a) {
                    return fail(format!("{a} + {b} not commutative"));
                }
                for c in 0..q {
                    if self.add_idx(self.add_idx(a, b), c) != self.add_idx(a, self.add_idx(b, c)) {
                        return fail(format!("({a} + {b}) + {c} not associative"));
                    }
                    let lhs = self.mul_idx(a, self.add_idx(b, c));
                    let rhs = self.add_idx(self.mul_idx(a, b), self.mul_idx(a, c));
                    if lhs != rhs {
                        return fail(format!("{a} * ({b} + {c}) not distributive"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Cyclic(q) => write!(f, "z{q}"),
            GroupKind::Field(fs) => {
                write!(f, "gf{}", fs.order())?;
                if !fs.is_builtin() {
                    let coeffs: Vec<String> = fs.modulus.iter().map(|c| c.to_string()).collect();
                    write!(f, ":{}", coeffs.join(","))?;
                }
                Ok(())
            }
            GroupKind::Product(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "prod({})", parts.join(","))
            }
        }
    }
}

/// Split `a,b(c,d),e` on top-level commas.
fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::InvalidGroup(format!(
                        "unbalanced parentheses in {s:?}"
                    )));
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::InvalidGroup(format!(
            "unbalanced parentheses in {s:?}"
        )));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_usize(s: &str, ctx: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidGroup(format!("expected an integer in {ctx:?}, got {s:?}")))
}

/// `(p, r)` with `p^r = n`, or `None` when `n` is not a prime power.
fn prime_power(n: usize) -> Option<(usize, usize)> {
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let (mut m, mut r) = (n, 0);
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `z<q>`, `gf<p^r>` or `gf<p>^<r>`, `gf<...>:<c0>,<c1>,..`, `prod(<spec>,..)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
            let comps = split_top_level(inner)?
                .into_iter()
                .map(str::parse)
                .collect::<Result<Vec<GroupSpec>>>()?;
            return GroupSpec::product(comps);
        }
        if let Some(q) = s.strip_prefix('z') {
            return GroupSpec::cyclic(parse_usize(q, s)?);
        }
        if let Some(rest) = s.strip_prefix("gf") {
            let (size, modulus) = match rest.split_once(':') {
                Some((a, b)) => (a, Some(b)),
                None => (rest, None),
            };
            let (p, r) = match size.split_once('^') {
                Some((p, r)) => (parse_usize(p, s)?, parse_usize(r, s)?),
                None => prime_power(parse_usize(size, s)?)
                    .ok_or_else(|| Error::InvalidGroup(format!("{size} is not a prime power")))?,
            };
            return match modulus {
                None => GroupSpec::field(p, r),
                Some(m) => {
                    let coeffs = m
                        .split(',')
                        .map(|c| parse_usize(c, s))
                        .collect::<Result<Vec<_>>>()?;
                    GroupSpec::field_with_modulus(p, r, coeffs)
                }
            };
        }
        Err(Error::InvalidGroup(format!(
            "unrecognised group spec {s:?}"
        )))
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
