use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{bareiss_det, ExactError};

fn trim(f: &[BigInt]) -> &[BigInt] {
    let len = f.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    &f[..len]
}

/// Resultant of two integer polynomials (coefficients low to high) as the
/// determinant of their Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (f, g) = (trim(f), trim(g));
    if f.is_empty() || g.is_empty() {
        return BigInt::zero();
    }
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 {
        return num_traits::pow(f[0].clone(), n);
    }
    if n == 0 {
        return num_traits::pow(g[0].clone(), m);
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

/// `Res((x^s − 1)/(x − 1), (x^{n−s} − 1)/(x − 1))` for `1 ≤ s < n`.
pub fn cyclo_resultant(s: usize, n: usize) -> Result<BigInt, ExactError> {
    if s == 0 || s >= n {
        return Err(ExactError::OutOfRange(format!("need 1 <= s < n, got s = {s}, n = {n}")));
    }
    let ones = |k: usize| vec![BigInt::one(); k];
    Ok(resultant(&ones(s), &ones(n - s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn examples() {
        assert_eq!(cyclo_resultant(3, 4).unwrap(), BigInt::one());
        assert_eq!(cyclo_resultant(2, 4).unwrap(), BigInt::zero());
        assert_eq!(cyclo_resultant(5, 12).unwrap(), BigInt::one());
        assert!(cyclo_resultant(4, 4).is_err());
        assert!(cyclo_resultant(0, 4).is_err());
    }

    #[test]
    fn matches_gcd_rule() {
        for n in 2..=24usize {
            for s in 1..n {
                let want = num_integer::gcd(s, n) == 1;
                assert_eq!(cyclo_resultant(s, n).unwrap() == BigInt::one(), want, "s={s} n={n}");
            }
        }
    }

    /// Product of g over the roots of f, in floating point.
    fn root_product(s: usize, n: usize) -> f64 {
        let k = n - s;
        let (mut re, mut im) = (1.0f64, 0.0f64);
        for j in 1..s {
            let th = TAU * j as f64 / s as f64;
            // g(ζ) = Σ_{i<k} ζ^i
            let (mut gr, mut gi) = (0.0, 0.0);
            for i in 0..k {
                gr += (th * i as f64).cos();
                gi += (th * i as f64).sin();
            }
            let (nr, ni) = (re * gr - im * gi, re * gi + im * gr);
            re = nr;
            im = ni;
        }
        assert!(im.abs() < 1e-6);
        re
    }

    #[test]
    fn agrees_with_roots() {
        for n in 2..=16usize {
            for s in 1..n {
                let exact: f64 = cyclo_resultant(s, n).unwrap().to_string().parse().unwrap();
                assert!((root_product(s, n) - exact).abs() < 1e-6, "s={s} n={n}");
            }
        }
    }

    #[test]
    fn general_resultants() {
        let p = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        // monic linear factors: Res = 2 − 5
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-5, 1])), BigInt::from(-3));
        assert_eq!(resultant(&p(&[3]), &p(&[1, 0, 1])), BigInt::from(9));
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[1, 1])), BigInt::zero());
    }
}
