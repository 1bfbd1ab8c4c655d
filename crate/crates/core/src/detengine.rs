//! Two independent evaluators of the group determinant.
//!
//! [`direct_determinant`] builds the full `|G| × |G|` matrix `(a_{gh⁻¹})` and
//! runs Bareiss elimination. [`factored_determinant`] uses the splitting
//! `D = A · B^n`, where `A` is the `Z_n` circulant determinant of the column
//! sums and each `B(ω^j)` is an `n × n` determinant over `Z[ω]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{bareiss_det, cyc_det, quad_embed, CyclotomicInt, QuadField, QuadInt};
use crate::groups::{GroupRingElement, GroupShape, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error("block index {j} is divisible by p = {p}")]
    BadIndex { j: usize, p: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// The factored determinant of one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetReport {
    pub group: GroupSpec,
    pub a: BigInt,
    /// `B(ω^j)` for each coset representative `j`, in ascending order.
    pub b_blocks: Vec<CyclotomicInt>,
    pub b: BigInt,
    pub d: BigInt,
}

/// Serialisable view of a [`DetReport`] with all integers as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetReportJson {
    pub group: [usize; 3],
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B_blocks")]
    pub b_blocks: Vec<String>,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "D")]
    pub d: String,
}

impl DetReport {
    pub fn to_json(&self) -> DetReportJson {
        let g = &self.group;
        DetReportJson {
            group: [g.p(), g.r(), g.n()],
            a: self.a.to_string(),
            b_blocks: self.b_blocks.iter().map(ToString::to_string).collect(),
            b: self.b.to_string(),
            d: self.d.to_string(),
        }
    }

    /// `B(ω)` as a quadratic integer, for groups with `n = (p − 1)/2`.
    pub fn quad_block(&self) -> Option<QuadInt> {
        if self.group.shape() != GroupShape::Half {
            return None;
        }
        let f = QuadField::new(self.group.p()).ok()?;
        quad_embed(&self.b_blocks[0], f).ok()
    }
}

/// `det(a_{gh⁻¹})` over the pinned element order.
pub fn direct_determinant(e: &GroupRingElement, g: &GroupSpec) -> BigInt {
    bareiss_det(group_matrix(e, g))
}

/// The `|G| × |G|` matrix with entry `a_{gh⁻¹}` at row `g`, column `h`.
pub fn group_matrix(e: &GroupRingElement, g: &GroupSpec) -> Vec<Vec<BigInt>> {
    let elems: Vec<(usize, usize)> = (0..g.p()).flat_map(|i| (0..g.n()).map(move |j| (i, j))).collect();
    let inv: Vec<(usize, usize)> = elems.iter().map(|&h| g.inverse(h)).collect();
    elems
        .iter()
        .map(|&x| {
            inv.iter()
                .map(|&hi| {
                    let (i, j) = g.compose(x, hi);
                    e.coeff(i, j).clone()
                })
                .collect()
        })
        .collect()
}

fn column_sums(e: &GroupRingElement) -> Vec<BigInt> {
    e.f_components().iter().map(|f| f.iter().sum()).collect()
}

fn circulant(vals: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = vals.len();
    (0..n).map(|i| (0..n).map(|k| vals[(k + n - i) % n].clone()).collect()).collect()
}

/// `A = ∏_{y^n = 1} F(1, y)`, evaluated as the circulant determinant of
/// `(f_0(1), …, f_{n−1}(1))`.
pub fn circulant_a(e: &GroupRingElement, g: &GroupSpec) -> BigInt {
    assert_eq!(e.n(), g.n());
    bareiss_det(circulant(&column_sums(e)))
}

fn block_matrix(e: &GroupRingElement, g: &GroupSpec, j: usize) -> Vec<Vec<CyclotomicInt>> {
    let (p, n) = (g.p(), g.n());
    let fs = e.f_components();
    (0..n)
        .map(|i| {
            let w = j * g.r_pow(i) % p;
            let vals: Vec<CyclotomicInt> = fs.iter().map(|f| CyclotomicInt::eval_poly(p, f, w)).collect();
            (0..n).map(|k| vals[(k + n - i) % n].clone()).collect()
        })
        .collect()
}

/// `B(ω^j)`: the determinant of the `n × n` matrix whose row `i` is the
/// `i`-place cyclic shift of `f_0, …, f_{n−1}` evaluated at `ω^{j r^i}`.
pub fn block_b(e: &GroupRingElement, g: &GroupSpec, j: usize) -> Result<CyclotomicInt, DetError> {
    if j % g.p() == 0 {
        return Err(DetError::BadIndex { j, p: g.p() });
    }
    Ok(cyc_det(&block_matrix(e, g, j % g.p()), g.p()))
}

/// [`block_b`] with its first row replaced by ones.
pub fn alpha_block(e: &GroupRingElement, g: &GroupSpec, j: usize) -> Result<CyclotomicInt, DetError> {
    if j % g.p() == 0 {
        return Err(DetError::BadIndex { j, p: g.p() });
    }
    let mut m = block_matrix(e, g, j % g.p());
    m[0] = vec![CyclotomicInt::one(g.p()); g.n()];
    Ok(cyc_det(&m, g.p()))
}

pub fn factored_determinant(e: &GroupRingElement, g: &GroupSpec) -> Result<DetReport, DetError> {
    let a = circulant_a(e, g);
    let b_blocks = g
        .coset_reps()
        .iter()
        .map(|&j| block_b(e, g, j))
        .collect::<Result<Vec<_>, _>>()?;
    let prod = b_blocks.iter().skip(1).fold(b_blocks[0].clone(), |acc, x| &acc * x);
    let b = prod
        .as_integer()
        .ok_or_else(|| DetError::InternalInconsistency(format!("block product {prod} is not rational")))?;
    let d = &a * num_traits::pow(b.clone(), g.n());
    Ok(DetReport { group: g.clone(), a, b_blocks, b, d })
}

/// `D` from the factored engine without keeping the report.
pub fn factored_d(e: &GroupRingElement, g: &GroupSpec) -> Result<BigInt, DetError> {
    factored_determinant(e, g).map(|r| r.d)
}

/// `true` when the value is `±1`.
pub fn is_unit(d: &BigInt) -> bool {
    d.abs().is_one()
}

/// `true` when the element is a zero divisor (its determinant vanishes).
pub fn is_singular(rep: &DetReport) -> bool {
    rep.d.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_group;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn parse(s: &str, g: &GroupSpec) -> GroupRingElement {
        GroupRingElement::parse(s, g).unwrap()
    }

    fn random_element(g: &GroupSpec, rng: &mut impl Rng, c: i64) -> GroupRingElement {
        let coeffs = (0..g.order()).map(|_| BigInt::from(rng.gen_range(-c..=c))).collect();
        GroupRingElement::from_flat(g, coeffs)
    }

    #[test]
    fn golden_values() {
        let ga5 = make_group(5, 2, 4).unwrap();
        assert_eq!(direct_determinant(&GroupRingElement::identity(&ga5), &ga5), BigInt::one());
        let e = parse("2 + Y + Y^2 + Y^3", &ga5);
        assert_eq!(direct_determinant(&e, &ga5), BigInt::from(3125));
        let rep = factored_determinant(&e, &ga5).unwrap();
        assert_eq!((rep.a.clone(), rep.b.clone(), rep.d.clone()), (5.into(), 5.into(), 3125.into()));
        for (p, r, n) in [(5, 2, 4), (7, 3, 6), (7, 2, 3), (11, 4, 5), (13, 4, 6), (7, 6, 2)] {
            let g = make_group(p, r, n).unwrap();
            let neg_y = parse("-Y", &g);
            assert_eq!(direct_determinant(&neg_y, &g), BigInt::from(-1));
            assert_eq!(factored_determinant(&neg_y, &g).unwrap().d, BigInt::from(-1));
        }
        let neg_y = parse("-Y", &ga5);
        assert_eq!(circulant_a(&neg_y, &ga5), BigInt::from(-1));
    }

    #[test]
    fn a_factor_with_h_added() {
        let g = make_group(5, 2, 4).unwrap();
        let mut e = parse("2 + Y + Y^2 + Y^3", &g);
        for i in 0..5 {
            for j in 0..4 {
                e = e.add(&GroupRingElement::monomial(&g, i, j, 1));
            }
        }
        assert_eq!(circulant_a(&e, &g), BigInt::from(25));
    }

    #[test]
    fn proof_blocks() {
        let g7 = make_group(7, 3, 6).unwrap();
        let e = parse("1 + Y - X*Y + Y^2", &g7);
        assert_eq!(block_b(&e, &g7, 1).unwrap(), CyclotomicInt::from_int(7, -3));

        let g21 = make_group(7, 2, 3).unwrap();
        let e = parse("-1 + X + X^2 - Y", &g21);
        let rep = factored_determinant(&e, &g21).unwrap();
        let f = QuadField::new(7).unwrap();
        assert_eq!(rep.quad_block().unwrap(), f.sqrt_eps_p().scale(&BigInt::from(2)));

        let g78 = make_group(13, 4, 6).unwrap();
        let e = parse("1 - Y - Y^3 + X^10*Y^3", &g78);
        let rep = factored_determinant(&e, &g78).unwrap();
        let f = QuadField::new(13).unwrap();
        // −13/2 + √13/2 = −7 + θ₀
        assert_eq!(rep.quad_block().unwrap(), QuadInt::new(f, -7, 1));
    }

    #[test]
    fn bad_index() {
        let g = make_group(7, 2, 3).unwrap();
        let e = GroupRingElement::identity(&g);
        assert_eq!(block_b(&e, &g, 14), Err(DetError::BadIndex { j: 14, p: 7 }));
        assert!(alpha_block(&e, &g, 0).is_err());
    }

    /// `A` is the product of `F(1, y)` over the `n`-th roots of unity.
    #[test]
    fn a_matches_root_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, r, n) in [(5, 2, 4), (7, 3, 6), (13, 4, 6)] {
            let g = make_group(p, r, n).unwrap();
            for _ in 0..20 {
                let e = random_element(&g, &mut rng, 2);
                let sums: Vec<f64> = column_sums(&e).iter().map(|c| c.to_string().parse().unwrap()).collect();
                let (mut re, mut im) = (1.0f64, 0.0f64);
                for k in 0..n {
                    let (mut fr, mut fi) = (0.0, 0.0);
                    for (j, s) in sums.iter().enumerate() {
                        let th = std::f64::consts::TAU * (j * k) as f64 / n as f64;
                        fr += s * th.cos();
                        fi += s * th.sin();
                    }
                    (re, im) = (re * fr - im * fi, re * fi + im * fr);
                }
                let exact: f64 = circulant_a(&e, &g).to_string().parse().unwrap();
                assert!((re - exact).abs() < 1e-6 * exact.abs().max(1.0) && im.abs() < 1e-6 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn oracle_equivalence_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, r, n) in [(5, 2, 4), (7, 3, 6), (7, 2, 3), (11, 4, 5), (13, 4, 6), (7, 6, 2)] {
            let g = make_group(p, r, n).unwrap();
            for _ in 0..10 {
                let e = random_element(&g, &mut rng, 3);
                assert_eq!(factored_determinant(&e, &g).unwrap().d, direct_determinant(&e, &g), "{g}");
            }
        }
    }

    #[test]
    fn blocks_are_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, r, n) in [(7, 2, 3), (13, 4, 6), (11, 4, 5), (7, 6, 2)] {
            let g = make_group(p, r, n).unwrap();
            for _ in 0..10 {
                let e = random_element(&g, &mut rng, 2);
                for &j in g.coset_reps() {
                    let b = block_b(&e, &g, j).unwrap();
                    assert_eq!(block_b(&e, &g, j * r % p).unwrap(), b.conjugate(r).unwrap());
                    assert_eq!(b.conjugate(r).unwrap(), b);
                }
            }
        }
    }

    fn small_elem(g: GroupSpec) -> impl Strategy<Value = GroupRingElement> {
        proptest::collection::vec(-2i64..=2, g.order())
            .prop_map(move |v| GroupRingElement::from_flat(&g, v.into_iter().map(BigInt::from).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn multiplicative(a in small_elem(make_group(5, 2, 4).unwrap()), b in small_elem(make_group(5, 2, 4).unwrap())) {
            let g = make_group(5, 2, 4).unwrap();
            let ab = a.mul(&b, &g);
            prop_assert_eq!(direct_determinant(&ab, &g), direct_determinant(&a, &g) * direct_determinant(&b, &g));
        }

        #[test]
        fn multiplicative_half(a in small_elem(make_group(7, 2, 3).unwrap()), b in small_elem(make_group(7, 2, 3).unwrap())) {
            let g = make_group(7, 2, 3).unwrap();
            let ab = a.mul(&b, &g);
            prop_assert_eq!(factored_d(&ab, &g).unwrap(), direct_determinant(&a, &g) * direct_determinant(&b, &g));
        }

        #[test]
        fn sign_flip(e in small_elem(make_group(7, 3, 6).unwrap())) {
            let g = make_group(7, 3, 6).unwrap();
            let neg_y = GroupRingElement::monomial(&g, 0, 1, -1);
            prop_assert_eq!(direct_determinant(&neg_y.mul(&e, &g), &g), -direct_determinant(&e, &g));
        }
    }
}
