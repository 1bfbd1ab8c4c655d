//! The metacyclic groups `Z_p ⋊_r Z_n` and their integral group rings.
//!
//! A group is presented as `X^p = Y^n = 1, Y X Y^{-1} = X^r` with
//! `ord_p(r) = n`. Every group element has a unique normal form `X^i Y^j`
//! with `0 <= i < p`, `0 <= j < n`, and the rewriting rule
//! `Y^j X^k = X^{k r^j} Y^j` is all that is needed to multiply.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime_u64, mult_order, pow_mod};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("{0} is not an odd prime")]
    NotPrime(usize),
    #[error("n = {n} does not divide p - 1 = {}", .p - 1)]
    NotDivisor { p: usize, n: usize },
    #[error("ord_{p}({r}) = {actual}, expected {expected}")]
    OrderMismatch { p: usize, r: usize, expected: usize, actual: usize },
    #[error("invalid group parameters: {0}")]
    InvalidParameter(String),
}

/// Which of the fully characterised groups a spec is, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Characterized {
    Ga5,
    Ga7,
    G21,
    G55,
    G78,
}

/// Coarse shape of the group: the size of `n` relative to `p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupShape {
    /// `n = p - 1`, the affine group `GA(1,p)`.
    Affine,
    /// `n = (p - 1)/2`; the B-blocks live in a quadratic field.
    Half,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    p: usize,
    r: usize,
    n: usize,
    t: usize,
    coset_reps: Vec<usize>,
    name: Option<String>,
}

/// Validates `(p, r, n)` and builds the group spec with canonical coset
/// representatives (smallest member of each coset of `<r>` in `Z_p^*`).
pub fn make_group(p: usize, r: usize, n: usize) -> Result<GroupSpec, GroupError> {
    if p < 3 || !is_prime_u64(p as u64) {
        return Err(GroupError::NotPrime(p));
    }
    if !(1 < r && r < p) {
        return Err(GroupError::InvalidParameter(format!("r = {r} must lie in (1, {p})")));
    }
    if n < 1 {
        return Err(GroupError::InvalidParameter("n must be positive".into()));
    }
    if (p - 1) % n != 0 {
        return Err(GroupError::NotDivisor { p, n });
    }
    let actual = mult_order(r, p).expect("r is a unit mod p");
    if actual != n {
        return Err(GroupError::OrderMismatch { p, r, expected: n, actual });
    }
    let t = (p - 1) / n;
    let mut covered = vec![false; p];
    let mut coset_reps = Vec::with_capacity(t);
    for j in 1..p {
        if covered[j] {
            continue;
        }
        coset_reps.push(j);
        let mut x = j;
        for _ in 0..n {
            covered[x] = true;
            x = x * r % p;
        }
    }
    debug_assert_eq!(coset_reps.len(), t);
    let name = default_name(p, n);
    Ok(GroupSpec { p, r, n, t, coset_reps, name })
}

fn default_name(p: usize, n: usize) -> Option<String> {
    match (p, n) {
        (7, 3) => Some("SmallGroup(21,1)".into()),
        (11, 5) => Some("SmallGroup(55,1)".into()),
        (13, 6) => Some("SmallGroup(78,1)".into()),
        _ if n == p - 1 => Some(format!("GA(1,{p})")),
        _ if n == 2 => Some(format!("D_{}", 2 * p)),
        _ => None,
    }
}

impl GroupSpec {
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// Number of degree-`n` irreducible representations, `(p - 1)/n`.
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }
    pub fn order(&self) -> usize {
        self.p * self.n
    }
    /// `r^k mod p`.
    pub fn r_pow(&self, k: usize) -> usize {
        pow_mod(self.r, k % self.n, self.p)
    }
    pub fn shape(&self) -> GroupShape {
        if self.n == self.p - 1 {
            GroupShape::Affine
        } else if 2 * self.n == self.p - 1 {
            GroupShape::Half
        } else {
            GroupShape::Other
        }
    }
    pub fn characterized(&self) -> Option<Characterized> {
        match (self.p, self.n) {
            (5, 4) => Some(Characterized::Ga5),
            (7, 6) => Some(Characterized::Ga7),
            (7, 3) => Some(Characterized::G21),
            (11, 5) => Some(Characterized::G55),
            (13, 6) => Some(Characterized::G78),
            _ => None,
        }
    }
    /// Label used in reports: the name when known, else `p,r,n`.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => format!("{n} [{},{},{}]", self.p, self.r, self.n),
            None => format!("[{},{},{}]", self.p, self.r, self.n),
        }
    }

    /// Index of `X^i Y^j` in the pinned element order (lexicographic in `(i, j)`).
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// `(X^a Y^b)(X^c Y^d)` in normal form.
    pub fn compose(&self, (a, b): (usize, usize), (c, d): (usize, usize)) -> (usize, usize) {
        ((a + c * self.r_pow(b)) % self.p, (b + d) % self.n)
    }

    /// `(X^a Y^b)^{-1} = X^{-a r^{-b}} Y^{-b}`.
    pub fn inverse(&self, (a, b): (usize, usize)) -> (usize, usize) {
        let nb = (self.n - b % self.n) % self.n;
        let i = (self.p - a % self.p) % self.p * self.r_pow(nb) % self.p;
        (i, nb)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `Σ a_{ij} X^i Y^j` with integer coefficients, stored densely in the
/// pinned `(i, j)` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    p: usize,
    n: usize,
    coeffs: Vec<BigInt>,
}

impl GroupRingElement {
    pub fn zero(g: &GroupSpec) -> Self {
        GroupRingElement { p: g.p, n: g.n, coeffs: vec![BigInt::zero(); g.order()] }
    }

    pub fn identity(g: &GroupSpec) -> Self {
        Self::monomial(g, 0, 0, BigInt::one())
    }

    /// `c · X^i Y^j`; exponents are reduced into the canonical ranges.
    pub fn monomial(g: &GroupSpec, i: usize, j: usize, c: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(g);
        e.coeffs[g.index(i % g.p, j % g.n)] = c.into();
        e
    }

    /// From a `p × n` table with `rows[i][j] = a_{ij}`.
    pub fn from_table(g: &GroupSpec, rows: &[Vec<BigInt>]) -> Self {
        assert_eq!(rows.len(), g.p, "expected p rows");
        let mut e = Self::zero(g);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), g.n, "expected n columns");
            for (j, c) in row.iter().enumerate() {
                e.coeffs[g.index(i, j)] = c.clone();
            }
        }
        e
    }

    /// From the flat coefficient vector in the pinned order.
    pub fn from_flat(g: &GroupSpec, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), g.order());
        GroupRingElement { p: g.p, n: g.n, coeffs }
    }

    /// Sum of terms `c X^i Y^j`; exponents are reduced mod `p` and `n`.
    pub fn from_terms<C: Into<BigInt> + Clone>(g: &GroupSpec, terms: &[(C, usize, usize)]) -> Self {
        let mut e = Self::zero(g);
        for (c, i, j) in terms {
            e.coeffs[g.index(i % g.p, j % g.n)] += c.clone().into();
        }
        e
    }

    pub fn p(&self) -> usize {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        &self.coeffs[i * self.n + j]
    }
    pub fn flat(&self) -> &[BigInt] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    pub fn support(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn check_shape(&self, other: &Self) {
        assert!(self.p == other.p && self.n == other.n, "elements of different groups");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_shape(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        GroupRingElement { p: self.p, n: self.n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        GroupRingElement { p: self.p, n: self.n, coeffs }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * k).collect();
        GroupRingElement { p: self.p, n: self.n, coeffs }
    }

    /// Product in `Z[G]`.
    pub fn mul(&self, other: &Self, g: &GroupSpec) -> Self {
        mul(self, other, g)
    }

    /// The column polynomials `f_j(x) = Σ_i a_{ij} x^i`, each of length `p`.
    pub fn f_components(&self) -> Vec<Vec<BigInt>> {
        f_components(self)
    }

    /// Parses the text form, e.g. `"2 + Y + Y^2 - 3*X^4*Y^3"`.
    pub fn parse(text: &str, g: &GroupSpec) -> Result<Self, ParseError> {
        parse_element(text, g)
    }

    /// Canonical text form; round-trips through [`GroupRingElement::parse`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// Exact product in `Z[G]` using `Y^b X^c = X^{c r^b} Y^b`.
pub fn mul(e1: &GroupRingElement, e2: &GroupRingElement, g: &GroupSpec) -> GroupRingElement {
    e1.check_shape(e2);
    assert!(e1.p == g.p && e1.n == g.n, "element does not belong to {g}");
    let nz2: Vec<(usize, usize, &BigInt)> = (0..g.p)
        .flat_map(|c| (0..g.n).map(move |d| (c, d)))
        .filter_map(|(c, d)| {
            let v = e2.coeff(c, d);
            (!v.is_zero()).then_some((c, d, v))
        })
        .collect();
    let mut out = GroupRingElement::zero(g);
    for a in 0..g.p {
        for b in 0..g.n {
            let x = e1.coeff(a, b);
            if x.is_zero() {
                continue;
            }
            let rb = g.r_pow(b);
            for &(c, d, y) in &nz2 {
                let i = (a + c * rb) % g.p;
                let j = (b + d) % g.n;
                out.coeffs[g.index(i, j)] += x * y;
            }
        }
    }
    out
}

pub fn f_components(e: &GroupRingElement) -> Vec<Vec<BigInt>> {
    (0..e.n).map(|j| (0..e.p).map(|i| e.coeff(i, j).clone()).collect()).collect()
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.p {
            for j in 0..self.n {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let mag = c.abs();
                if first {
                    if c.is_negative() {
                        f.write_str("-")?;
                    }
                } else {
                    f.write_str(if c.is_negative() { " - " } else { " + " })?;
                }
                first = false;
                let mut parts: Vec<String> = Vec::new();
                if !mag.is_one() || (i == 0 && j == 0) {
                    parts.push(mag.to_string());
                }
                match i {
                    0 => {}
                    1 => parts.push("X".into()),
                    _ => parts.push(format!("X^{i}")),
                }
                match j {
                    0 => {}
                    1 => parts.push("Y".into()),
                    _ => parts.push(format!("Y^{j}")),
                }
                f.write_str(&parts.join("*"))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse element at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

/// Grammar: `term (('+'|'-') term)*`, `term = ['-'] factor ('*' factor)*`,
/// `factor = integer | 'X' ['^' k] | 'Y' ['^' k]`. Within a term the factors
/// must appear as coefficient, then `X`, then `Y`, and exponents must already
/// be canonical. Whitespace is ignored.
fn parse_element(text: &str, g: &GroupSpec) -> Result<GroupRingElement, ParseError> {
    let toks: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    if toks.is_empty() {
        return perr(0, "empty element");
    }
    let mut pos = 0usize;
    let mut out = GroupRingElement::zero(g);
    let at = |k: usize| toks.get(k).map(|&(_, c)| c);
    let byte = |k: usize| toks.get(k).map_or(text.len(), |&(b, _)| b);

    let read_uint = |k: &mut usize| -> Option<BigInt> {
        let start = *k;
        let mut s = String::new();
        while let Some(c) = toks.get(*k).map(|&(_, c)| c).filter(char::is_ascii_digit) {
            s.push(c);
            *k += 1;
        }
        (*k > start).then(|| s.parse().expect("digits"))
    };

    let mut first_term = true;
    loop {
        let mut sign = BigInt::one();
        match at(pos) {
            Some('+') if !first_term => pos += 1,
            Some('-') => {
                sign = -sign;
                pos += 1;
            }
            Some(_) if first_term => {}
            Some(c) => return perr(byte(pos), format!("expected '+' or '-', found '{c}'")),
            None => return perr(byte(pos), "unexpected end"),
        }
        first_term = false;

        let mut coeff: Option<BigInt> = None;
        let mut xi: Option<usize> = None;
        let mut yj: Option<usize> = None;
        loop {
            let here = byte(pos);
            match at(pos) {
                Some(c) if c.is_ascii_digit() => {
                    if coeff.is_some() || xi.is_some() || yj.is_some() {
                        return perr(here, "coefficient must come first in a term");
                    }
                    coeff = read_uint(&mut pos);
                }
                Some(v @ ('X' | 'Y')) => {
                    pos += 1;
                    let exp = if at(pos) == Some('^') {
                        pos += 1;
                        let Some(k) = read_uint(&mut pos) else {
                            return perr(byte(pos), "expected exponent after '^'");
                        };
                        usize::try_from(k).map_err(|_| ParseError { pos: here, msg: "exponent too large".into() })?
                    } else {
                        1
                    };
                    if v == 'X' {
                        if xi.is_some() || yj.is_some() {
                            return perr(here, "X must precede Y and appear once");
                        }
                        if exp >= g.p() {
                            return perr(here, format!("X exponent {exp} not in [0, {})", g.p()));
                        }
                        xi = Some(exp);
                    } else {
                        if yj.is_some() {
                            return perr(here, "Y may appear once per term");
                        }
                        if exp >= g.n() {
                            return perr(here, format!("Y exponent {exp} not in [0, {})", g.n()));
                        }
                        yj = Some(exp);
                    }
                }
                Some(c) => return perr(here, format!("unexpected '{c}'")),
                None => return perr(here, "unexpected end of term"),
            }
            if at(pos) == Some('*') {
                pos += 1;
                continue;
            }
            break;
        }
        let c = sign * coeff.unwrap_or_else(BigInt::one);
        out.coeffs[g.index(xi.unwrap_or(0), yj.unwrap_or(0))] += c;
        if pos >= toks.len() {
            break;
        }
    }
    Ok(out)
}
