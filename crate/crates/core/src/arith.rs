//! Small-modulus helpers shared by the group and field code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn pow_mod(base: usize, mut exp: usize, modulus: usize) -> usize {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as usize
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Multiplicative order of `r` modulo `p`; `None` when `gcd(r, p) != 1`.
pub fn mult_order(r: usize, p: usize) -> Option<usize> {
    if num_integer::gcd(r, p) != 1 {
        return None;
    }
    let mut x = r % p;
    let mut k = 1;
    while x != 1 {
        x = x * r % p;
        k += 1;
    }
    Some(k)
}

/// Prime factorisation of a small positive integer by trial division.
pub fn small_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_quadratic_residue(x: usize, p: usize) -> bool {
    let x = x % p;
    x != 0 && pow_mod(x, (p - 1) / 2, p) == 1
}

pub fn smallest_non_residue(p: usize) -> usize {
    (2..p).find(|&v| !is_quadratic_residue(v, p)).expect("odd prime has a non-residue")
}

/// `x mod m` in `[0, m)` for a big integer and a word-sized modulus.
pub fn big_mod(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    u64::try_from(r).expect("residue fits")
}

/// Exact quotient `a / b`, or `None` if `b` does not divide `a`.
pub fn exact_div(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(b);
    r.is_zero().then_some(q)
}

pub fn divides(d: &BigInt, a: &BigInt) -> bool {
    if d.is_zero() {
        return a.is_zero();
    }
    (a % d).is_zero()
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b).abs()
}
