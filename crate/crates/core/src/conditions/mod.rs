//! Necessary conditions on `(A, B, D)` and achievability deciders.
//!
//! Every integer group determinant of `Z_p ⋊_r Z_n` factors as `D = A·B^n`
//! where `A` is a `Z_n` determinant, `B ≡ A^t (mod p)`, and `p | D` forces
//! `p^{n+1} | D`. For the five groups whose value sets are known exactly the
//! deciders below search the published normal forms directly.

mod norm;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

pub use norm::{in_lattice, lattice_coords, solve_norm, NormSearch, NormSolverConfig};

use crate::arith::{big_mod, small_factor};
use crate::detengine::DetReport;
use crate::exact::{factorize, QuadField, QuadInt};
use crate::groups::{Characterized, GroupShape, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub zn_divisibility_ok: bool,
    pub congruence_ok: bool,
    pub p_power_ok: bool,
    pub details: Vec<String>,
}

impl ConditionReport {
    pub fn all_ok(&self) -> bool {
        self.zn_divisibility_ok && self.congruence_ok && self.p_power_ok
    }
}

/// The `Z_n` divisibility rule applied to `a`: for every `q^k ∥ n`,
/// `q | a` forces `q^{k+1} | a`, strengthened to `2^{k+2}` when `q = 2`,
/// `k ≥ 2`.
pub fn zn_divisibility(a: &BigInt, n: usize) -> bool {
    zn_failure(a, n).is_none()
}

fn zn_failure(a: &BigInt, n: usize) -> Option<(u64, u32)> {
    if a.is_zero() {
        return None;
    }
    for (q, k) in small_factor(n as u64) {
        let need = if q == 2 && k >= 2 { k + 2 } else { k + 1 };
        let qb = BigInt::from(q);
        if (a % &qb).is_zero() && !(a % num_traits::pow(qb, need as usize)).is_zero() {
            return Some((q, need));
        }
    }
    None
}

/// Checks the integer conditions for a candidate `(A, B)` pair.
pub fn check_values(g: &GroupSpec, a: &BigInt, b: &BigInt) -> ConditionReport {
    let p = g.p() as u64;
    let mut details = Vec::new();
    let zn_ok = match zn_failure(a, g.n()) {
        None => true,
        Some((q, need)) => {
            details.push(format!("A = {a} is divisible by {q} but not by {q}^{need}"));
            false
        }
    };
    let at = big_mod(&a.modpow(&BigInt::from(g.t()), &BigInt::from(p)), p);
    let bm = big_mod(b, p);
    let cong_ok = at == bm;
    if !cong_ok {
        details.push(format!("B = {b} is {bm} mod {p} but A^{} is {at}", g.t()));
    }
    let d = a * num_traits::pow(b.clone(), g.n());
    let pb = BigInt::from(p);
    let pp_ok = d.is_zero() || !(&d % &pb).is_zero() || (&d % num_traits::pow(pb, g.n() + 1)).is_zero();
    if !pp_ok {
        details.push(format!("D = {d} is divisible by {p} but not by {p}^{}", g.n() + 1));
    }
    ConditionReport { zn_divisibility_ok: zn_ok, congruence_ok: cong_ok, p_power_ok: pp_ok, details }
}

/// All necessary conditions for a factored report, including the block
/// congruences `B(ω^j) ≡ A (mod 1 − ω)`.
pub fn check_necessary(rep: &DetReport) -> ConditionReport {
    let g = &rep.group;
    let mut out = check_values(g, &rep.a, &rep.b);
    let p = g.p() as u64;
    let a_mod = big_mod(&rep.a, p);
    for (blk, j) in rep.b_blocks.iter().zip(g.coset_reps()) {
        let res = blk.residue_mod_one_minus_omega();
        if res != a_mod {
            out.congruence_ok = false;
            out.details.push(format!("B(ω^{j}) is {res} mod (1-ω) but A is {a_mod}"));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MembershipStatus {
    Achievable,
    NotAchievable,
    Unknown,
}

impl MembershipStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            MembershipStatus::Achievable => 0,
            MembershipStatus::NotAchievable => 1,
            MembershipStatus::Unknown => 2,
        }
    }
}

/// Data certifying a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `D = m·b^n` with `b = m + ℓp`.
    Affine { m: BigInt, b: BigInt },
    /// `D = m·N(b)^n` with `b ∈ m + pZ + θ_p Z`.
    Quad { m: BigInt, b: QuadInt },
    /// `D = a·b^n`, certified by a known element rather than a normal form.
    General { a: BigInt, b: BigInt },
}

impl Witness {
    pub fn value(&self, n: usize) -> BigInt {
        match self {
            Witness::Affine { m, b } | Witness::General { a: m, b } => m * num_traits::pow(b.clone(), n),
            Witness::Quad { m, b } => m * num_traits::pow(b.norm(), n),
        }
    }

    pub fn m(&self) -> &BigInt {
        match self {
            Witness::Affine { m, .. } | Witness::Quad { m, .. } | Witness::General { a: m, .. } => m,
        }
    }

    pub fn to_json(&self, p: usize) -> Value {
        match self {
            Witness::Affine { m, b } => {
                let ell = (b - m) / BigInt::from(p);
                json!({"kind": "affine", "m": m.to_string(), "l": ell.to_string(), "B": b.to_string()})
            }
            Witness::Quad { m, b } => {
                let (alpha, beta) = lattice_coords(b, m).expect("witness lies in its lattice");
                json!({
                    "kind": "quadratic",
                    "m": m.to_string(),
                    "alpha": alpha.to_string(),
                    "beta": beta.to_string(),
                    "b": b.to_string(),
                    "N(b)": b.norm().to_string(),
                })
            }
            Witness::General { a, b } => json!({"kind": "general", "A": a.to_string(), "B": b.to_string()}),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipDecision {
    pub status: MembershipStatus,
    pub witness: Option<Witness>,
    pub reason: String,
}

impl MembershipDecision {
    fn yes(w: Witness, reason: impl Into<String>) -> Self {
        MembershipDecision { status: MembershipStatus::Achievable, witness: Some(w), reason: reason.into() }
    }
    fn no(reason: impl Into<String>) -> Self {
        MembershipDecision { status: MembershipStatus::NotAchievable, witness: None, reason: reason.into() }
    }
    fn unknown(reason: impl Into<String>) -> Self {
        MembershipDecision { status: MembershipStatus::Unknown, witness: None, reason: reason.into() }
    }

    pub fn to_json(&self, g: &GroupSpec) -> Value {
        json!({
            "group": [g.p(), g.r(), g.n()],
            "status": format!("{:?}", self.status),
            "witness": self.witness.as_ref().map(|w| w.to_json(g.p())),
            "reason": self.reason,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MemberError {
    #[error("zero is not a nonzero determinant value")]
    ZeroInput,
    #[error("no decider for {0}")]
    UnsupportedGroup(String),
}

/// Candidate splittings `D = m·c^n`, `c > 0`, in ascending `c`.
fn splittings(d: &BigInt, n: usize) -> Vec<(BigInt, BigInt)> {
    let f = factorize(d).expect("nonzero");
    f.power_divisors(n as u32)
        .into_iter()
        .map(|c| {
            let m = d / num_traits::pow(c.clone(), n);
            (m, c)
        })
        .collect()
}

fn coprime(m: &BigInt, n: usize) -> bool {
    m.gcd(&BigInt::from(n)).is_one()
}

/// Searches `D = m·b^n`, `b ≡ m (mod p)`, for `GA(1,p)`. With `exact`, the
/// `Z_n` rule on `m` is taken as sufficient; otherwise only the proven set
/// `gcd(m,n)=1 or n² | m` certifies a value.
fn member_affine(d: &BigInt, g: &GroupSpec, exact: bool) -> MembershipDecision {
    let (p, n) = (g.p(), g.n());
    let pb = BigInt::from(p);
    let n2 = BigInt::from(n * n);
    let mut plausible = None;
    for (m, c) in splittings(d, n) {
        for b in [c.clone(), -c] {
            if !(&m - &b).mod_floor(&pb).is_zero() || !zn_divisibility(&m, n) {
                continue;
            }
            let proven = coprime(&m, n) || (&m % &n2).is_zero();
            if exact || proven {
                let reason = format!("D = m·(m+{p}ℓ)^{n} with m = {m}, B = {b}");
                return MembershipDecision::yes(Witness::Affine { m, b }, reason);
            }
            plausible.get_or_insert((m.clone(), b.clone()));
        }
    }
    match plausible {
        Some((m, b)) => MembershipDecision::unknown(format!(
            "m = {m}, B = {b} meets the necessary conditions but is outside gcd(m,{n})=1 or {n}^2 | m"
        )),
        None => MembershipDecision::no(format!("no splitting D = m·B^{n} with B ≡ m mod {p} and m a Z_{n} value")),
    }
}

pub fn member_ga5(d: &BigInt) -> Result<MembershipDecision, MemberError> {
    if d.is_zero() {
        return Err(MemberError::ZeroInput);
    }
    let g = crate::groups::make_group(5, 2, 4).expect("valid");
    Ok(member_affine(d, &g, true))
}

pub fn member_ga7(d: &BigInt) -> Result<MembershipDecision, MemberError> {
    if d.is_zero() {
        return Err(MemberError::ZeroInput);
    }
    let g = crate::groups::make_group(7, 3, 6).expect("valid");
    Ok(member_affine(d, &g, true))
}

/// Decider for `n = (p−1)/2`. Exact for `SmallGroup(21,1)`, `(55,1)` and
/// `(78,1)`; other quadratic groups only certify `gcd(m, n) = 1`.
pub fn member_quad(d: &BigInt, g: &GroupSpec) -> Result<MembershipDecision, MemberError> {
    member_quad_with(d, g, &NormSolverConfig::default())
}

pub fn member_quad_with(d: &BigInt, g: &GroupSpec, cfg: &NormSolverConfig) -> Result<MembershipDecision, MemberError> {
    if d.is_zero() {
        return Err(MemberError::ZeroInput);
    }
    if g.shape() != GroupShape::Half {
        return Err(MemberError::UnsupportedGroup(g.label()));
    }
    let exact = matches!(g.characterized(), Some(Characterized::G21 | Characterized::G55 | Characterized::G78));
    let f = QuadField::new(g.p()).expect("prime");
    let n = g.n();
    let mut plausible = None;
    let mut exhausted = false;
    for (m, c) in splittings(d, n) {
        if !zn_divisibility(&m, n) {
            continue;
        }
        let norms = if f.is_real() { vec![c.clone(), -c.clone()] } else { vec![c.clone()] };
        match solve_norm(f, &norms, &m, cfg) {
            NormSearch::Found(b) => {
                if exact || coprime(&m, n) {
                    let reason = format!("D = m·N(b)^{n} with m = {m}, b = {b}");
                    return Ok(MembershipDecision::yes(Witness::Quad { m, b }, reason));
                }
                plausible.get_or_insert(m.clone());
            }
            NormSearch::None => {}
            NormSearch::Exhausted => exhausted = true,
        }
    }
    Ok(if let Some(m) = plausible {
        MembershipDecision::unknown(format!("m = {m} meets the necessary conditions but gcd(m,{n}) > 1"))
    } else if exhausted {
        MembershipDecision::unknown("norm search exceeded its scan bound")
    } else {
        MembershipDecision::no(format!(
            "no splitting D = m·N(b)^{n} with m a Z_{n} value and b ∈ m + {}Z + θ_pZ",
            g.p()
        ))
    })
}

/// Dispatches to the strongest decider available for `g`.
pub fn member(d: &BigInt, g: &GroupSpec) -> Result<MembershipDecision, MemberError> {
    member_with(d, g, &NormSolverConfig::default())
}

pub fn member_with(d: &BigInt, g: &GroupSpec, cfg: &NormSolverConfig) -> Result<MembershipDecision, MemberError> {
    if d.is_zero() {
        return Err(MemberError::ZeroInput);
    }
    match (g.characterized(), g.shape()) {
        (Some(Characterized::Ga5 | Characterized::Ga7), _) => Ok(member_affine(d, g, true)),
        (_, GroupShape::Affine) => Ok(member_affine(d, g, false)),
        (_, GroupShape::Half) => member_quad_with(d, g, cfg),
        _ => Ok(member_necessary(d, g)),
    }
}

/// For groups without a characterisation: `±1` is always achievable
/// (identity and `−Y`); otherwise only the necessary conditions are checked.
pub fn member_necessary(d: &BigInt, g: &GroupSpec) -> MembershipDecision {
    if d.abs().is_one() {
        return MembershipDecision::yes(Witness::General { a: d.clone(), b: BigInt::one() }, "±1 is attained by ±Y^0 or −Y");
    }
    let n = g.n();
    for (m, c) in splittings(d, n) {
        let signs: &[i64] = if n % 2 == 0 { &[1, -1] } else { &[1] };
        for &s in signs {
            let b = &c * s;
            if check_values(g, &m, &b).all_ok() {
                return MembershipDecision::unknown(format!(
                    "A = {m}, B = {b} meets the necessary conditions; no characterisation for {}",
                    g.label()
                ));
            }
        }
    }
    MembershipDecision::no(format!("no splitting D = A·B^{n} meets the necessary conditions"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detengine::factored_determinant;
    use crate::groups::{make_group, GroupRingElement};
    use crate::exact::CyclotomicInt;

    fn z(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn zn_rule() {
        assert!(zn_divisibility(&z(9), 6));
        assert!(!zn_divisibility(&z(2), 4));
        assert!(!zn_divisibility(&z(4), 4));
        assert!(!zn_divisibility(&z(8), 4));
        assert!(zn_divisibility(&z(16), 4));
        assert!(!zn_divisibility(&z(2), 6));
        assert!(zn_divisibility(&z(4), 6));
        assert!(!zn_divisibility(&z(-3), 3));
        assert!(zn_divisibility(&z(0), 5));
        for n in 1..30 {
            assert!(zn_divisibility(&z(1), n));
        }
    }

    #[test]
    fn necessary_examples() {
        let g = make_group(5, 2, 4).unwrap();
        let e = GroupRingElement::parse("2 + Y + Y^2 + Y^3", &g).unwrap();
        let rep = factored_determinant(&e, &g).unwrap();
        assert!(check_necessary(&rep).all_ok());

        let synth = |a: i64, b: i64| DetReport {
            group: g.clone(),
            a: z(a),
            b_blocks: vec![CyclotomicInt::from_int(5, b)],
            b: z(b),
            d: z(a) * z(b).pow(4),
        };
        let r = check_necessary(&synth(2, 1));
        assert!(!r.zn_divisibility_ok);
        let r = check_necessary(&synth(5, 6));
        assert!(r.zn_divisibility_ok && !r.congruence_ok);
        assert!(!r.details.is_empty());
        let r = check_values(&g, &z(5), &z(1));
        assert!(!r.p_power_ok);
    }

    #[test]
    fn ga5_examples() {
        let st = |d: i64| member_ga5(&z(d)).unwrap().status;
        assert_eq!(st(3125), MembershipStatus::Achievable);
        assert_eq!(st(7), MembershipStatus::NotAchievable);
        assert_eq!(st(2), MembershipStatus::NotAchievable);
        assert_eq!(st(-1), MembershipStatus::Achievable);
        assert_eq!(st(85683), MembershipStatus::Achievable);
        assert_eq!(st(4), MembershipStatus::NotAchievable);
        assert_eq!(st(48), MembershipStatus::Achievable);
        assert_eq!(member_ga5(&z(0)), Err(MemberError::ZeroInput));
        let w = member_ga5(&z(3125)).unwrap().witness.unwrap();
        assert_eq!(w.value(4), z(3125));
    }

    #[test]
    fn ga7_examples() {
        let st = |d: &BigInt| member_ga7(d).unwrap().status;
        assert_eq!(st(&z(7).pow(7)), MembershipStatus::Achievable);
        assert_eq!(st(&z(-1)), MembershipStatus::Achievable);
        assert_eq!(st(&z(12)), MembershipStatus::NotAchievable);
        assert_eq!(st(&(z(4) * z(3).pow(6))), MembershipStatus::Achievable);
    }

    #[test]
    fn quad_examples() {
        let g21 = make_group(7, 2, 3).unwrap();
        for m in [1i64, 2, 4, 5, 9, -2] {
            let d = z(7).pow(4) * z(m);
            assert_eq!(member_quad(&d, &g21).unwrap().status, MembershipStatus::Achievable, "m = {m}");
        }
        assert_eq!(member_quad(&(z(7).pow(4) * z(3)), &g21).unwrap().status, MembershipStatus::NotAchievable);
        let g55 = make_group(11, 4, 5).unwrap();
        assert_eq!(member_quad(&z(5), &g55).unwrap().status, MembershipStatus::NotAchievable);
        let g78 = make_group(13, 4, 6).unwrap();
        let dec = member_quad(&z(13).pow(7), &g78).unwrap();
        assert_eq!(dec.status, MembershipStatus::Achievable);
        assert_eq!(dec.witness.unwrap().value(6), z(13).pow(7));
        assert!(matches!(member_quad(&z(5), &make_group(5, 2, 4).unwrap()), Err(MemberError::UnsupportedGroup(_))));
    }

    #[test]
    fn sign_symmetry() {
        let groups = [(5, 2, 4), (7, 3, 6), (7, 2, 3), (11, 4, 5), (13, 4, 6)];
        for (p, r, n) in groups {
            let g = make_group(p, r, n).unwrap();
            for d in 1..400i64 {
                let a = member(&z(d), &g).unwrap().status;
                let b = member(&z(-d), &g).unwrap().status;
                assert_eq!(a, b, "{g} D = {d}");
            }
        }
    }

    #[test]
    fn general_groups() {
        let g11 = make_group(11, 2, 10).unwrap();
        // A = 1, B = ±1 is coprime to n
        assert_eq!(member(&z(1), &g11).unwrap().status, MembershipStatus::Achievable);
        assert_eq!(member(&z(2), &g11).unwrap().status, MembershipStatus::NotAchievable);
        let d14 = make_group(7, 6, 2).unwrap();
        assert_eq!(member(&z(-1), &d14).unwrap().status, MembershipStatus::Achievable);
        assert_eq!(member(&z(2), &d14).unwrap().status, MembershipStatus::NotAchievable);
        assert_eq!(member(&z(3), &d14).unwrap().status, MembershipStatus::Unknown);
    }
}
