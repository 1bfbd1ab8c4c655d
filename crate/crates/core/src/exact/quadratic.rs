use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{CyclotomicInt, ExactError};
use crate::arith::{is_prime_u64, is_quadratic_residue};
use crate::groups::GroupSpec;

/// The quadratic subfield `Q(√(εp))` of `Q(ω)`, `ε = (-1)^{(p-1)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    p: usize,
    eps: i8,
}

impl QuadField {
    pub fn new(p: usize) -> Result<Self, ExactError> {
        if p < 3 || !is_prime_u64(p as u64) {
            return Err(ExactError::NotPrime(p));
        }
        let eps = if p % 4 == 1 { 1 } else { -1 };
        Ok(QuadField { p, eps })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn eps(&self) -> i8 {
        self.eps
    }

    /// `εp`, the radicand.
    pub fn radicand(&self) -> i64 {
        self.eps as i64 * self.p as i64
    }

    pub fn is_real(&self) -> bool {
        self.eps > 0
    }

    /// `θ₀² = θ₀ + k` with `k = (εp − 1)/4`.
    fn k(&self) -> BigInt {
        BigInt::from((self.radicand() - 1) / 4)
    }

    pub fn int(&self, a: impl Into<BigInt>) -> QuadInt {
        QuadInt::new(*self, a, 0)
    }

    pub fn theta0(&self) -> QuadInt {
        QuadInt::new(*self, 0, 1)
    }

    /// `√(εp) = 2θ₀ − 1`.
    pub fn sqrt_eps_p(&self) -> QuadInt {
        QuadInt::new(*self, -1, 2)
    }

    /// `θ_p = ½(p + √(εp)) = (p−1)/2 + θ₀`.
    pub fn theta_p(&self) -> QuadInt {
        QuadInt::new(*self, (self.p as i64 - 1) / 2, 1)
    }

    /// Fundamental unit `> 1` of a real field, read off the continued
    /// fraction of `θ₀`. `None` for imaginary fields.
    pub fn fundamental_unit(&self) -> Option<QuadInt> {
        if !self.is_real() {
            return None;
        }
        let d = self.radicand();
        let s = num_integer::sqrt(d);
        let (mut pp, mut qq) = (1i64, 2i64);
        // convergents h/k of θ₀; h_{-1}=1, h_{-2}=0
        let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
        let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
        for _ in 0..10_000 {
            let a = if qq > 0 { (pp + s).div_euclid(qq) } else { -((pp + s).div_euclid(-qq) + 1) };
            let h = BigInt::from(a) * &h1 + &h2;
            let k = BigInt::from(a) * &k1 + &k2;
            let cand = QuadInt { field: *self, a: h.clone(), b: -&k };
            if cand.norm().abs().is_one() {
                return Some(cand.normalize_unit());
            }
            h2 = std::mem::replace(&mut h1, h);
            k2 = std::mem::replace(&mut k1, k);
            pp = a * qq - pp;
            qq = (d - pp * pp) / qq;
        }
        None
    }
}

/// `a + b·θ₀` with `θ₀ = (1 + √(εp))/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    field: QuadField,
    a: BigInt,
    b: BigInt,
}

impl QuadInt {
    pub fn new(field: QuadField, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt { field, a: a.into(), b: b.into() }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.b.is_zero().then(|| self.a.clone())
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b - self.field.k() * &self.b * &self.b
    }

    pub fn trace(&self) -> BigInt {
        BigInt::from(2) * &self.a + &self.b
    }

    /// Image under `√(εp) ↦ −√(εp)`.
    pub fn conj(&self) -> Self {
        QuadInt { field: self.field, a: &self.a + &self.b, b: -&self.b }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same(o);
        QuadInt { field: self.field, a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same(o);
        QuadInt { field: self.field, a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn neg(&self) -> Self {
        QuadInt { field: self.field, a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same(o);
        let bd = &self.b * &o.b;
        QuadInt {
            field: self.field,
            a: &self.a * &o.a + &bd * self.field.k(),
            b: &self.a * &o.b + &self.b * &o.a + bd,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt { field: self.field, a: &self.a * k, b: &self.b * k }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact quotient by a unit (norm ±1).
    pub fn div_unit(&self, u: &Self) -> Self {
        let n = u.norm();
        assert!(n.abs().is_one(), "divisor is not a unit");
        self.mul(&u.conj()).scale(&n)
    }

    fn same(&self, o: &Self) {
        assert_eq!(self.field, o.field, "quadratic field mismatch");
    }

    /// Sign under the real embedding with `√(εp) > 0`. Real fields only.
    pub fn signum(&self) -> i8 {
        assert!(self.field.is_real(), "ordering needs a real field");
        // 2x = u + v·√d
        let u = self.trace();
        let v = self.b.clone();
        let d = BigInt::from(self.field.radicand());
        let sign = |x: &BigInt| -> i8 {
            if x.is_positive() {
                1
            } else if x.is_negative() {
                -1
            } else {
                0
            }
        };
        match (sign(&u), sign(&v)) {
            (0, s) | (s, 0) => s,
            (su, sv) if su == sv => su,
            (su, _) => {
                // opposite signs: compare u² with d·v²
                let lhs = &u * &u;
                let rhs = &d * &v * &v;
                match lhs.cmp(&rhs) {
                    std::cmp::Ordering::Greater => su,
                    std::cmp::Ordering::Less => -su,
                    std::cmp::Ordering::Equal => 0,
                }
            }
        }
    }

    /// Picks the representative of `±x^{±1}` that exceeds 1.
    fn normalize_unit(&self) -> Self {
        let one = self.field.int(1);
        let inv = self.conj().scale(&self.norm());
        [self.clone(), self.neg(), inv.clone(), inv.neg()]
            .into_iter()
            .find(|x| x.sub(&one).signum() > 0)
            .expect("a nontrivial unit has a representative above 1")
    }

    /// The element of `Z[ω]` with the same value, using `θ₀ = 1 + Σ_{q QR} ω^q`.
    pub fn to_cyclotomic(&self) -> CyclotomicInt {
        let p = self.field.p;
        let mut full = vec![BigInt::zero(); p];
        full[0] = &self.a + &self.b;
        for q in 1..p {
            if is_quadratic_residue(q, p) {
                full[q] += &self.b;
            }
        }
        CyclotomicInt::from_full(p, full)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.b.is_negative() { '-' } else { '+' };
        let eps = if self.field.eps > 0 { "+1" } else { "-1" };
        write!(f, "{} {} {}*θ0({},{})", self.a, op, self.b.abs(), self.field.p, eps)
    }
}

pub fn quad_add(x: &QuadInt, y: &QuadInt) -> QuadInt {
    x.add(y)
}

pub fn quad_mul(x: &QuadInt, y: &QuadInt) -> QuadInt {
    x.mul(y)
}

pub fn quad_norm(x: &QuadInt) -> BigInt {
    x.norm()
}

/// Identifies an element of `Z[ω]` fixed by the squares with a quadratic
/// integer.
pub fn quad_embed(x: &CyclotomicInt, f: QuadField) -> Result<QuadInt, ExactError> {
    if x.p() != f.p {
        return Err(ExactError::PrimeMismatch { left: x.p(), right: f.p });
    }
    let p = f.p;
    let c = x.full_coeffs();
    let nr = crate::arith::smallest_non_residue(p);
    let (u, v) = (&c[1], &c[nr]);
    for q in 1..p {
        let want = if is_quadratic_residue(q, p) { u } else { v };
        if &c[q] != want {
            return Err(ExactError::NotInSubfield);
        }
    }
    Ok(QuadInt { field: f, a: &c[0] - u, b: u - v })
}

/// `Σ_{i<n} ω^{r^i}` for a group with `n = (p−1)/2`, together with its value
/// `½(−1 + √(εp)) = θ₀ − 1` in the quadratic field.
pub fn gauss_sum(g: &GroupSpec) -> Result<(CyclotomicInt, QuadInt), ExactError> {
    let p = g.p();
    if 2 * g.n() != p - 1 {
        return Err(ExactError::WrongShape);
    }
    let f = QuadField::new(p)?;
    let terms: Vec<(i64, i64)> = (0..g.n()).map(|i| (g.r_pow(i) as i64, 1)).collect();
    let cyc = CyclotomicInt::from_terms(p, &terms);
    let quad = QuadInt::new(f, -1, 1);
    debug_assert_eq!(quad_embed(&cyc, f).as_ref(), Ok(&quad));
    Ok((cyc, quad))
}
