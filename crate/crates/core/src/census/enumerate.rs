//! Ranking of bounded coefficient vectors.
//!
//! Vectors have entries in `[−c, c]` and at most `s` nonzero entries. They
//! are ordered colexicographically: the last coordinate is the most
//! significant, and within one coordinate values run `0, 1, −1, 2, −2, …`.
//! With `s` at least the length this is ordinary base-`(2c+1)` counting.

use num_bigint::BigInt;

#[derive(Debug, Clone)]
pub struct Enumerator {
    len: usize,
    bound: u32,
    support: usize,
    /// `counts[i][b]`: vectors of length `i` with at most `b` nonzeros,
    /// saturating at `u64::MAX`.
    counts: Vec<Vec<u64>>,
}

pub fn digit_value(d: u32) -> i64 {
    if d % 2 == 1 { d.div_ceil(2) as i64 } else { -((d / 2) as i64) }
}

pub fn value_digit(v: i64) -> u32 {
    if v > 0 { 2 * v as u32 - 1 } else { 2 * v.unsigned_abs() as u32 }
}

impl Enumerator {
    pub fn new(len: usize, bound: u32, support: usize) -> Self {
        let support = support.min(len);
        let k = 2 * bound as u64;
        let mut counts = vec![vec![1u64; support + 1]; len + 1];
        for i in 1..=len {
            for b in 1..=support {
                counts[i][b] = counts[i - 1][b].saturating_add(k.saturating_mul(counts[i - 1][b - 1]));
            }
        }
        Enumerator { len, bound, support, counts }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Size of the space, saturating at `u64::MAX`.
    pub fn total(&self) -> u64 {
        self.counts[self.len][self.support]
    }

    pub fn unrank(&self, mut k: u64) -> Vec<i64> {
        assert!(k < self.total(), "cursor {k} out of range");
        let mut out = vec![0i64; self.len];
        let mut budget = self.support;
        for i in (0..self.len).rev() {
            for d in 0..=2 * self.bound {
                let nz = usize::from(d != 0);
                if nz > budget {
                    break;
                }
                let block = self.counts[i][budget - nz];
                if k < block {
                    out[i] = digit_value(d);
                    budget -= nz;
                    break;
                }
                k -= block;
            }
        }
        out
    }

    pub fn rank(&self, v: &[i64]) -> u64 {
        assert_eq!(v.len(), self.len);
        let mut k = 0u64;
        let mut budget = self.support;
        for i in (0..self.len).rev() {
            let top = value_digit(v[i]);
            for d in 0..top {
                let nz = usize::from(d != 0);
                if nz <= budget {
                    k = k.saturating_add(self.counts[i][budget - nz]);
                }
            }
            budget -= usize::from(top != 0);
        }
        k
    }
}

/// Colexicographic comparison in enumeration order.
pub fn colex_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        let o = value_digit(*x).cmp(&value_digit(*y));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Whether `v` (flat index `i·n + j`) is the first of its orbit under left
/// multiplication by powers of `X`, which permutes the `X` exponents
/// cyclically and fixes the determinant.
pub fn is_x_canonical(v: &[i64], p: usize, n: usize) -> bool {
    let mut shifted = vec![0i64; v.len()];
    for a in 1..p {
        for i in 0..p {
            let to = (i + a) % p;
            shifted[to * n..(to + 1) * n].copy_from_slice(&v[i * n..(i + 1) * n]);
        }
        if colex_cmp(&shifted, v).is_lt() {
            return false;
        }
    }
    true
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_round_trip() {
        assert_eq!((0..7).map(digit_value).collect::<Vec<_>>(), vec![0, 1, -1, 2, -2, 3, -3]);
        for v in -5..=5 {
            assert_eq!(digit_value(value_digit(v)), v);
        }
    }

    #[test]
    fn full_space_is_base_counting() {
        let e = Enumerator::new(3, 1, 3);
        assert_eq!(e.total(), 27);
        assert_eq!(e.unrank(0), vec![0, 0, 0]);
        assert_eq!(e.unrank(1), vec![1, 0, 0]);
        assert_eq!(e.unrank(2), vec![-1, 0, 0]);
        assert_eq!(e.unrank(3), vec![0, 1, 0]);
        assert_eq!(e.unrank(26), vec![-1, -1, -1]);
    }

    #[test]
    fn restricted_support_is_consistent() {
        for (len, c, s) in [(5, 1, 2), (6, 2, 3), (4, 3, 1), (7, 1, 7), (3, 2, 0)] {
            let e = Enumerator::new(len, c, s);
            let mut prev: Option<Vec<i64>> = None;
            let mut seen = 0u64;
            for k in 0..e.total() {
                let v = e.unrank(k);
                assert!(v.iter().filter(|&&x| x != 0).count() <= s);
                assert!(v.iter().all(|x| x.unsigned_abs() <= c as u64));
                assert_eq!(e.rank(&v), k);
                if let Some(p) = &prev {
                    assert!(colex_cmp(p, &v).is_lt());
                }
                prev = Some(v);
                seen += 1;
            }
            // brute-force count
            let base = (2 * c + 1) as u64;
            let full = base.pow(len as u32);
            let brute = (0..full)
                .filter(|&x| {
                    let mut x = x;
                    let mut nz = 0;
                    for _ in 0..len {
                        nz += usize::from(x % base != 0);
                        x /= base;
                    }
                    nz <= s
                })
                .count() as u64;
            assert_eq!(seen, brute);
        }
    }

    #[test]
    fn huge_spaces_saturate() {
        let e = Enumerator::new(78, 3, 78);
        assert_eq!(e.total(), u64::MAX);
        let v = e.unrank(123_456_789);
        assert_eq!(e.rank(&v), 123_456_789);
    }

    #[test]
    fn canonical_orbit_representatives() {
        // p = 3, n = 1: three rotations of each vector
        let e = Enumerator::new(3, 1, 3);
        let reps = (0..e.total()).filter(|&k| is_x_canonical(&e.unrank(k), 3, 1)).count();
        // Burnside: (27 + 3 + 3) / 3
        assert_eq!(reps, 11);
    }
}
