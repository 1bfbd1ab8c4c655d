use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Determinant of a square integer matrix by fraction-free Bareiss
/// elimination. Every division is exact.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Leibniz expansion; only for tiny matrices.
    fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
        fn rec(m: &[Vec<BigInt>], row: usize, used: &mut Vec<bool>, sign: i32) -> BigInt {
            let n = m.len();
            if row == n {
                return BigInt::from(sign);
            }
            let mut acc = BigInt::zero();
            let mut inversions_before = 0;
            for c in 0..n {
                if used[c] {
                    continue;
                }
                // sign of placing column c: number of unused columns to its left
                let s = if inversions_before % 2 == 0 { sign } else { -sign };
                used[c] = true;
                acc += &m[row][c] * rec(m, row + 1, used, s);
                used[c] = false;
                inversions_before += 1;
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.len()], 1)
    }

    #[test]
    fn small_cases() {
        assert_eq!(bareiss_det(vec![]), BigInt::one());
        assert_eq!(bareiss_det(mat(&[&[5]])), BigInt::from(5));
        assert_eq!(bareiss_det(mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss_det(mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(bareiss_det(mat(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])), BigInt::from(-1));
    }

    #[test]
    fn agrees_with_leibniz() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            for _ in 0..40 {
                let m: Vec<Vec<BigInt>> =
                    (0..n).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect()).collect();
                assert_eq!(bareiss_det(m.clone()), leibniz(&m));
            }
        }
    }
}
