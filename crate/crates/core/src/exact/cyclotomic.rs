use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// An element `Σ c_k ω^k` of `Z[ω]`, `ω` a primitive `p`-th root of unity,
/// kept in the power basis `1, ω, …, ω^{p-2}`.
///
/// Reduction is eager: `ω^{p-1} = -(1 + ω + ⋯ + ω^{p-2})`, so two elements
/// are equal iff their coefficient vectors are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: usize,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(p: usize) -> Self {
        CyclotomicInt { p, coeffs: vec![BigInt::zero(); p - 1] }
    }

    pub fn from_int(p: usize, k: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = k.into();
        x
    }

    pub fn one(p: usize) -> Self {
        Self::from_int(p, 1)
    }

    /// `ω^e` for any integer exponent.
    pub fn omega_pow(p: usize, e: i64) -> Self {
        let mut full = vec![BigInt::zero(); p];
        full[e.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::from_full(p, full)
    }

    /// Reduces an arbitrary coefficient list (index = exponent) modulo
    /// `x^p - 1` and then modulo `Φ_p`.
    pub fn from_full(p: usize, coeffs: Vec<BigInt>) -> Self {
        let mut full = vec![BigInt::zero(); p];
        for (k, c) in coeffs.into_iter().enumerate() {
            full[k % p] += c;
        }
        Self::reduce_full(p, full)
    }

    pub fn from_terms(p: usize, terms: &[(i64, i64)]) -> Self {
        let mut full = vec![BigInt::zero(); p];
        for &(e, c) in terms {
            full[e.rem_euclid(p as i64) as usize] += c;
        }
        Self::reduce_full(p, full)
    }

    fn reduce_full(p: usize, mut full: Vec<BigInt>) -> Self {
        debug_assert_eq!(full.len(), p);
        let top = full.pop().expect("p >= 2");
        if !top.is_zero() {
            for c in &mut full {
                *c -= &top;
            }
        }
        CyclotomicInt { p, coeffs: full }
    }

    /// `f(ω^e)` for an integer polynomial `f` given by its coefficients.
    pub fn eval_poly(p: usize, f: &[BigInt], e: usize) -> Self {
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in f.iter().enumerate() {
            if !c.is_zero() {
                full[i * e % p] += c;
            }
        }
        Self::reduce_full(p, full)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Coefficients on `1, ω, …, ω^{p-2}`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Length-`p` representative with the `ω^{p-1}` coefficient zero.
    pub fn full_coeffs(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational_integer(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.is_rational_integer().then(|| self.coeffs[0].clone())
    }

    /// Image under the automorphism `ω ↦ ω^j`.
    pub fn conjugate(&self, j: usize) -> Result<Self, ExactError> {
        if j % self.p == 0 {
            return Err(ExactError::BadIndex { j, p: self.p });
        }
        Ok(self.conjugate_unchecked(j))
    }

    pub(crate) fn conjugate_unchecked(&self, j: usize) -> Self {
        let mut full = vec![BigInt::zero(); self.p];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[k * j % self.p] += c;
            }
        }
        Self::reduce_full(self.p, full)
    }

    /// Residue modulo the prime `(1 - ω)` above `p`, in `[0, p)`.
    pub fn residue_mod_one_minus_omega(&self) -> u64 {
        let s: BigInt = self.coeffs.iter().sum();
        crate::arith::big_mod(&s, self.p as u64)
    }

    /// Trace from `Q(ω)` down to the fixed field of `<r>`:
    /// `Σ_{i<n} σ_{r^i}(self)`.
    pub fn relative_trace(&self, r: usize, n: usize) -> Self {
        let mut acc = Self::zero(self.p);
        let mut e = 1usize;
        for _ in 0..n {
            acc = &acc + &self.conjugate_unchecked(e);
            e = e * r % self.p;
        }
        acc
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(ExactError::PrimeMismatch { left: self.p, right: other.p })
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.p;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Self::reduce_full(p, full)
    }

    /// Length-`p` representative with the fewest nonzero terms; used for
    /// display so that e.g. `2ω^6 + ω - ω^4` prints as written.
    fn sparse_representative(&self) -> Vec<BigInt> {
        let full = self.full_coeffs();
        let mut best_shift = BigInt::zero();
        let mut best_support = usize::MAX;
        for cand in &full {
            let support = full.iter().filter(|c| *c != cand).count();
            let better = support < best_support
                || (support == best_support
                    && (cand.abs() < best_shift.abs() || (cand.abs() == best_shift.abs() && *cand < best_shift)));
            if better {
                best_support = support;
                best_shift = cand.clone();
            }
        }
        full.iter().map(|c| c - &best_shift).collect()
    }
}

pub fn cyc_add(x: &CyclotomicInt, y: &CyclotomicInt) -> Result<CyclotomicInt, ExactError> {
    x.check(y)?;
    Ok(x + y)
}

pub fn cyc_mul(x: &CyclotomicInt, y: &CyclotomicInt) -> Result<CyclotomicInt, ExactError> {
    x.check(y)?;
    Ok(x.mul_unchecked(y))
}

pub fn cyc_neg(x: &CyclotomicInt) -> CyclotomicInt {
    -x
}

/// Division-free determinant over `Z[ω]`: Laplace expansion along rows with
/// every minor on the leading rows memoised by its column set.
pub fn cyc_det(m: &[Vec<CyclotomicInt>], p: usize) -> CyclotomicInt {
    let n = m.len();
    assert!(n <= 20, "cyc_det is meant for small blocks");
    assert!(m.iter().all(|r| r.len() == n));
    let mut minors: Vec<CyclotomicInt> = Vec::with_capacity(1 << n);
    minors.push(CyclotomicInt::one(p));
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = CyclotomicInt::zero(p);
        for col in 0..n {
            if mask & (1 << col) == 0 || m[row][col].is_zero() {
                continue;
            }
            let sub = &minors[mask ^ (1 << col)];
            if sub.is_zero() {
                continue;
            }
            let term = m[row][col].mul_unchecked(sub);
            // sign: columns of the mask to the right of `col`
            if (mask >> (col + 1)).count_ones() % 2 == 0 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
        minors.push(acc);
    }
    minors.pop().expect("nonempty")
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInt { p: self.p, coeffs }
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicInt { p: self.p, coeffs }
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rep = self.sparse_representative();
        let mut first = true;
        for (k, c) in rep.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let coeff = if mag.is_one() && k > 0 { String::new() } else { mag.to_string() };
            let sep = if coeff.is_empty() || k == 0 { "" } else { "*" };
            match k {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}{sep}ω")?,
                _ => write!(f, "{coeff}{sep}ω^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
