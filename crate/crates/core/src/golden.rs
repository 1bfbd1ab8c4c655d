//! Reference values from the published constructions, run by `selftest`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::conditions::{member, member_ga5, MembershipStatus};
use crate::detengine::{alpha_block, block_b, direct_determinant, factored_determinant};
use crate::exact::{cyclo_resultant, gauss_sum, quad_embed, CyclotomicInt, QuadField};
use crate::groups::{make_group, GroupRingElement, GroupSpec};
use crate::realize::realize_value;

/// The six groups every check runs over.
pub const CONFIGURED_GROUPS: [(usize, usize, usize); 6] = [(5, 2, 4), (7, 3, 6), (7, 2, 3), (11, 4, 5), (13, 4, 6), (7, 6, 2)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(out: &mut Vec<GoldenCheck>, name: impl Into<String>, got: impl ToString, want: impl ToString) {
    let (got, want) = (got.to_string(), want.to_string());
    let passed = got == want;
    let detail = if passed { got } else { format!("got {got}, want {want}") };
    out.push(GoldenCheck { name: name.into(), passed, detail });
}

fn group(p: usize, r: usize, n: usize) -> GroupSpec {
    make_group(p, r, n).expect("configured groups are valid")
}

fn elem(text: &str, g: &GroupSpec) -> GroupRingElement {
    GroupRingElement::parse(text, g).expect("golden elements parse")
}

fn both_d(e: &GroupRingElement, g: &GroupSpec) -> String {
    let direct = direct_determinant(e, g);
    let factored = factored_determinant(e, g).map(|r| r.d.to_string()).unwrap_or_else(|x| x.to_string());
    if direct.to_string() == factored { factored } else { format!("direct {direct} / factored {factored}") }
}

fn p_power(g: &GroupSpec, m: i64) -> GroupRingElement {
    let mut terms: Vec<(i64, usize, usize)> = (0..g.p()).map(|k| (1, 0, k % g.n())).collect();
    for i in 0..g.p() {
        for j in 0..g.n() {
            terms.push((m, i, j));
        }
    }
    GroupRingElement::from_terms(g, &terms)
}

pub fn run_selftest() -> Vec<GoldenCheck> {
    let mut out = Vec::new();

    for (p, r, n) in CONFIGURED_GROUPS {
        let g = group(p, r, n);
        check(&mut out, format!("D(1) in {}", g.label()), both_d(&GroupRingElement::identity(&g), &g), 1);
        check(&mut out, format!("D(-Y) in {}", g.label()), both_d(&elem("-1*Y", &g), &g), -1);
    }
    for (p, r, n) in [(5, 2, 4), (7, 3, 6)] {
        let g = group(p, r, n);
        let pp = BigInt::from(p).pow(p as u32);
        check(&mut out, format!("p-power element m=0 in {}", g.label()), both_d(&p_power(&g, 0), &g), &pp);
        check(&mut out, format!("p-power element m=1 in {}", g.label()), both_d(&p_power(&g, 1), &g), (1 + n) * pp);
    }

    let g7 = group(7, 3, 6);
    let e = elem("1 + Y - X*Y + Y^2", &g7);
    check(&mut out, "B_G for 1+(1-X)Y+Y^2 in GA(1,7)", block_b(&e, &g7, 1).unwrap(), -3);
    check(&mut out, "alpha for 1+(1-X)Y+Y^2 in GA(1,7)", alpha_block(&e, &g7, 1).unwrap(), CyclotomicInt::from_terms(7, &[(1, 1), (4, -1), (6, 2)]));

    let g21 = group(7, 2, 3);
    let f7 = QuadField::new(7).unwrap();
    let e = elem("-1 + X + X^2 - Y", &g21);
    check(&mut out, "B_G in (21,1)", quad_embed(&block_b(&e, &g21, 1).unwrap(), f7).unwrap(), f7.sqrt_eps_p().scale(&BigInt::from(2)));
    check(&mut out, "alpha in (21,1)", alpha_block(&e, &g21, 1).unwrap(), CyclotomicInt::from_terms(7, &[(1, -1), (2, -1), (4, -2)]));

    let g55 = group(11, 4, 5);
    let f11 = QuadField::new(11).unwrap();
    let e = elem("X^5 - Y + X^3*Y - Y^2", &g55);
    check(&mut out, "B_G in (55,1)", quad_embed(&block_b(&e, &g55, 1).unwrap(), f11).unwrap(), f11.theta_p().sub(&f11.int(11)));

    let g78 = group(13, 4, 6);
    let f13 = QuadField::new(13).unwrap();
    let e = elem("1 - Y - Y^3 + X^10*Y^3", &g78);
    check(&mut out, "B_G in (78,1)", quad_embed(&block_b(&e, &g78, 1).unwrap(), f13).unwrap(), f13.theta_p().sub(&f13.int(13)));

    for (p, r, n) in [(7, 2, 3), (11, 4, 5), (13, 4, 6)] {
        let g = group(p, r, n);
        let (cyc, q) = gauss_sum(&g).unwrap();
        check(&mut out, format!("Gauss sum for p={p}"), quad_embed(&cyc, q.field()).unwrap(), q);
    }
    let rule = (2..=24usize).all(|n| (1..n).all(|s| cyclo_resultant(s, n).unwrap() == BigInt::from(u8::from(num_integer::gcd(s, n) == 1))));
    check(&mut out, "cyclotomic resultants for n <= 24", rule, true);

    let status = |d: i64, g: &GroupSpec| member(&BigInt::from(d), g).map(|m| format!("{:?}", m.status)).unwrap_or_else(|e| e.to_string());
    let g5 = group(5, 2, 4);
    check(&mut out, "GA(1,5) member 2", status(2, &g5), "NotAchievable");
    check(&mut out, "GA(1,5) member 3*13^4", status(3 * 13i64.pow(4), &g5), "Achievable");
    check(&mut out, "GA(1,5) member 2^4*5^5", status(16 * 3125, &g5), "Achievable");
    check(&mut out, "GA(1,7) member 4*3^6", status(4 * 729, &g7), "Achievable");
    check(&mut out, "(21,1) member 7^4*2", status(2 * 7i64.pow(4), &g21), "Achievable");
    check(&mut out, "(21,1) member 7", status(7, &g21), "NotAchievable");
    let ga5_units = (-50..=50i64).filter(|d| d % 2 != 0 && d % 5 != 0).all(|d| {
        let got = member_ga5(&BigInt::from(d)).is_ok_and(|m| m.status == MembershipStatus::Achievable);
        got == matches!(d.rem_euclid(10), 1 | 9)
    });
    check(&mut out, "GA(1,5) odd |D| <= 50 coprime to 5 are exactly ±1 mod 10", ga5_units, true);

    for (d, g) in [(85683i64, &g5), (4 * 729, &g7), (2 * 7i64.pow(4), &g21)] {
        let got = realize_value(g, &BigInt::from(d)).map(|r| r.direct_d.to_string()).unwrap_or_else(|e| e.to_string());
        check(&mut out, format!("realize {d} in {}", g.label()), got, d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_goldens_pass() {
        let checks = run_selftest();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(checks.len() > 25);
    }
}
