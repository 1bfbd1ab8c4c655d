use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ExactError;

const TRIAL_LIMIT: u32 = 1_000_000;

/// First 20 primes. The first 13 make Miller–Rabin deterministic below
/// 3.3·10²⁴; past that the test is probabilistic with these fixed bases.
const MR_BASES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub sign: i8,
    pub prime_powers: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (q, e) in &self.prime_powers {
            acc *= num_traits::pow(q.clone(), *e as usize);
        }
        acc
    }

    /// Every `c > 0` with `c^k` dividing the factored value, ascending.
    pub fn power_divisors(&self, k: u32) -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        for (q, e) in &self.prime_powers {
            let top = e / k;
            let mut next = Vec::with_capacity(out.len() * (top as usize + 1));
            for d in &out {
                let mut x = d.clone();
                for _ in 0..=top {
                    next.push(x.clone());
                    x *= q;
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn exponent_of(&self, q: u64) -> u32 {
        let q = BigInt::from(q);
        self.prime_powers.iter().find(|(p, _)| *p == q).map_or(0, |(_, e)| *e)
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

pub fn factorize(n: &BigInt) -> Result<Factorization, ExactError> {
    if n.is_zero() {
        return Err(ExactError::Zero);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut found: Vec<(BigUint, u32)> = Vec::new();

    for &q in small_primes() {
        let qb = BigUint::from(q);
        if &qb * &qb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (quot, rem) = m.div_rem(&qb);
            if !rem.is_zero() {
                break;
            }
            m = quot;
            e += 1;
        }
        if e > 0 {
            found.push((qb, e));
        }
    }

    if !m.is_one() {
        let mut stack = vec![m];
        let mut large = Vec::new();
        while let Some(x) = stack.pop() {
            if x.is_one() {
                continue;
            }
            if is_probable_prime_u(&x) {
                large.push(x);
                continue;
            }
            let d = split(&x);
            stack.push(&x / &d);
            stack.push(d);
        }
        large.sort();
        for q in large {
            match found.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => found.push((q, 1)),
            }
        }
    }
    found.sort();
    Ok(Factorization {
        sign,
        prime_powers: found.into_iter().map(|(q, e)| (BigInt::from(q), e)).collect(),
    })
}

pub fn is_probable_prime(n: &BigInt) -> bool {
    !n.is_negative() && is_probable_prime_u(n.magnitude())
}

fn is_probable_prime_u(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for &q in &MR_BASES {
            if small == q as u64 {
                return true;
            }
            if small % q as u64 == 0 {
                return false;
            }
        }
        return mr_u64(small);
    }
    for &q in &MR_BASES {
        if (n % q).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'base: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic for all 64-bit inputs with the first 12 prime bases.
fn mr_u64(n: u64) -> bool {
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for &a in &MR_BASES[..12] {
        let mut x = pow_mod_u64(a as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// A nontrivial divisor of a composite `n` with no factor below the trial
/// limit.
fn split(n: &BigUint) -> BigUint {
    if let Some(r) = exact_root(n) {
        return r;
    }
    if let Some(small) = n.to_u64() {
        for c in 1.. {
            if let Some(d) = brent_u64(small, c) {
                return BigUint::from(d);
            }
        }
    }
    for c in 1u32.. {
        if let Some(d) = brent_big(n, &BigUint::from(c)) {
            return d;
        }
    }
    unreachable!()
}

/// `r` with `r^k = n` for some `k ≥ 2`, if `n` is a perfect power.
fn exact_root(n: &BigUint) -> Option<BigUint> {
    let bits = n.bits() as u32;
    for k in 2..=bits.max(2) {
        let r = n.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some(r);
        }
    }
    None
}

fn brent_u64(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let m = 128;
    let mut g = 1;
    let (mut x, mut ys) = (0, 0);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = num_integer::gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = num_integer::gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: &BigUint) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let one = BigUint::one();
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let (mut y, mut r, mut q) = (BigUint::from(2u32), 1u64, BigUint::one());
    let m = 128u64;
    let mut g = BigUint::one();
    let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if g > one {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fac(n: i64) -> Vec<(i64, u32)> {
        factorize(&BigInt::from(n))
            .unwrap()
            .prime_powers
            .into_iter()
            .map(|(q, e)| (q.to_i64().unwrap(), e))
            .collect()
    }

    #[test]
    fn small_values() {
        assert_eq!(fac(3125), vec![(5, 5)]);
        assert_eq!(fac(50000), vec![(2, 4), (5, 5)]);
        let f = factorize(&BigInt::from(-85683)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(fac(-85683), vec![(3, 1), (13, 4)]);
        assert_eq!(fac(1), vec![]);
        assert_eq!(factorize(&BigInt::zero()), Err(ExactError::Zero));
    }

    #[test]
    fn large_values() {
        // two primes above the trial limit
        let p1 = BigInt::from(1_000_003u64);
        let p2 = BigInt::from(999_999_000_001u64);
        let n = &p1 * &p2 * &p2;
        let f = factorize(&n).unwrap();
        assert_eq!(f.prime_powers, vec![(p1.clone(), 1), (p2.clone(), 2)]);
        let m61 = (BigInt::one() << 61) - 1;
        let m31 = (BigInt::one() << 31) - 1;
        let big = &m31 * &m61 * &m61;
        let f = factorize(&big).unwrap();
        assert_eq!(f.prime_powers, vec![(m31, 1), (m61, 2)]);
        assert_eq!(f.reconstruct(), big);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigInt::from(2)));
        assert!(!is_probable_prime(&BigInt::from(1)));
        assert!(!is_probable_prime(&BigInt::from(3_215_031_751u64)));
        assert!(is_probable_prime(&((BigInt::one() << 127) - 1)));
        assert!(!is_probable_prime(&((BigInt::one() << 128) + 1)));
    }

    #[test]
    fn power_divisors() {
        let f = factorize(&BigInt::from(2i64.pow(9) * 3i64.pow(4) * 7)).unwrap();
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(f.power_divisors(2), ints(&[1, 2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 36, 48, 72, 144]));
        assert_eq!(f.power_divisors(4), ints(&[1, 2, 3, 4, 6, 12]));
        assert_eq!(f.power_divisors(10), ints(&[1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reconstructs(n in 1i64..=1_000_000_000_000, neg in any::<bool>()) {
            let n = BigInt::from(if neg { -n } else { n });
            let f = factorize(&n).unwrap();
            prop_assert_eq!(f.reconstruct(), n);
            for w in f.prime_powers.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            for (q, e) in &f.prime_powers {
                prop_assert!(*e >= 1);
                prop_assert!(is_probable_prime(q));
            }
        }
    }
}
