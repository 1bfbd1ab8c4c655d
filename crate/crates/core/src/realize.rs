//! Explicit elements with prescribed determinant.
//!
//! Every construction is a shift `F = G + t(X)(1 + Y + ⋯ + Y^{n−1}) + m·h`
//! of a fixed base element `G`. The shift leaves `B_G(ω)` in place and adds
//! a term linear in the conjugates of `t(ω)`, so once `G` is fixed the pair
//! `(A, B(ω))` is an affine function of the coefficients of `t`. Each
//! construction is checked three ways before it is returned: against its
//! closed form, against the linear prediction from `B_G` and `α`, and by the
//! direct determinant.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{inv_mod, is_quadratic_residue, smallest_non_residue};
use crate::conditions::{member, MemberError, MembershipStatus, Witness};
use crate::detengine::{alpha_block, block_b, direct_determinant, factored_determinant, DetReport};
use crate::exact::{quad_embed, resultant, CyclotomicInt, QuadField, QuadInt};
use crate::groups::{Characterized, GroupRingElement, GroupShape, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("s = {s} must satisfy 1 <= s < n and gcd(s, n) = 1 for n = {n}")]
    BadS { s: usize, n: usize },
    #[error("u = {u} must be a quadratic residue and v = {v} a non-residue mod {p}")]
    BadResidue { u: usize, v: usize, p: usize },
    #[error("construction {tag} does not apply to {group}")]
    TagGroupMismatch { tag: ConstructionTag, group: String },
    #[error("prediction mismatch: {0}")]
    PredictionMismatch(String),
    #[error("not achievable: {0}")]
    NotAchievable(String),
    #[error("undecided: {0}")]
    Unknown(String),
    #[error(transparent)]
    Member(#[from] MemberError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstructionTag {
    LemmaEx,
    GaN2,
    Ga7Mult4,
    Ga7Mult9,
    G21Mult9,
    G55Mult25,
    G78Mult6,
    G78Mult4,
    G78Mult9,
    PPower,
    NegY,
}

impl ConstructionTag {
    pub const ALL: [ConstructionTag; 11] = [
        ConstructionTag::LemmaEx,
        ConstructionTag::GaN2,
        ConstructionTag::Ga7Mult4,
        ConstructionTag::Ga7Mult9,
        ConstructionTag::G21Mult9,
        ConstructionTag::G55Mult25,
        ConstructionTag::G78Mult6,
        ConstructionTag::G78Mult4,
        ConstructionTag::G78Mult9,
        ConstructionTag::PPower,
        ConstructionTag::NegY,
    ];

    pub fn applies_to(self, g: &GroupSpec) -> bool {
        use ConstructionTag::*;
        let ch = g.characterized();
        match self {
            LemmaEx => matches!(g.shape(), GroupShape::Affine | GroupShape::Half),
            GaN2 => g.shape() == GroupShape::Affine,
            Ga7Mult4 | Ga7Mult9 => ch == Some(Characterized::Ga7),
            G21Mult9 => ch == Some(Characterized::G21),
            G55Mult25 => ch == Some(Characterized::G55),
            G78Mult6 | G78Mult4 | G78Mult9 => ch == Some(Characterized::G78),
            PPower | NegY => true,
        }
    }
}

impl fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `F = G + t(X)(1 + ⋯ + Y^{n−1}) + m·h(X,Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSpec {
    pub g_base: GroupRingElement,
    /// Coefficients of `t`, low to high, at most `p` of them.
    pub t_poly: Vec<BigInt>,
    pub m: BigInt,
}

pub fn shift_construct(spec: &ShiftSpec, g: &GroupSpec) -> GroupRingElement {
    assert!(spec.t_poly.len() <= g.p(), "deg t must be below p");
    let mut e = spec.g_base.clone();
    let mut add = Vec::new();
    for i in 0..g.p() {
        let ti = spec.t_poly.get(i).cloned().unwrap_or_default();
        for j in 0..g.n() {
            add.push((&ti + &spec.m, i, j));
        }
    }
    e = e.add(&GroupRingElement::from_terms(g, &add));
    e
}

/// `(A, [B(ω^j)])` predicted from the shift structure alone:
/// `A = (G(1,1) + n·t(1) + mnp)·∏_{y≠1} G(1,y)` and
/// `B(ω^j) = B_G(ω^j) + Σ_i σ_{r^i}(α(ω^j) t(ω^j))`.
pub fn shift_prediction(spec: &ShiftSpec, g: &GroupSpec) -> (BigInt, Vec<CyclotomicInt>) {
    let (p, n) = (g.p(), g.n());
    let sums: Vec<BigInt> = spec.g_base.f_components().iter().map(|f| f.iter().sum()).collect();
    let g11: BigInt = sums.iter().sum();
    let t1: BigInt = spec.t_poly.iter().sum();
    let rest = resultant(&vec![BigInt::one(); n], &sums);
    let a = (g11 + BigInt::from(n) * t1 + &spec.m * BigInt::from(n * p)) * rest;
    let blocks = g
        .coset_reps()
        .iter()
        .map(|&j| {
            let bg = block_b(&spec.g_base, g, j).expect("coset reps are units");
            let alpha = alpha_block(&spec.g_base, g, j).expect("coset reps are units");
            let tj = CyclotomicInt::eval_poly(p, &spec.t_poly, j);
            &bg + &(&alpha * &tj).relative_trace(g.r(), n)
        })
        .collect();
    (a, blocks)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassParams {
    pub c: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub m: BigInt,
}

impl ClassParams {
    pub fn new(c: i64, a: i64, b: i64, m: i64) -> Self {
        ClassParams { c: c.into(), a: a.into(), b: b.into(), m: m.into() }
    }
}

/// Free parameters of the lemma construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaParams {
    Affine { c: BigInt, b: BigInt },
    Half { c: BigInt, a: BigInt, b: BigInt, u: usize, v: usize },
}

/// Closed-form value of `B(ω)`: a rational integer shared by all blocks,
/// or a quadratic integer whose conjugate is the other block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockValue {
    Int(BigInt),
    Quad(QuadInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub a: BigInt,
    pub block: BlockValue,
}

impl Prediction {
    pub fn b(&self, g: &GroupSpec) -> BigInt {
        match &self.block {
            BlockValue::Int(x) => num_traits::pow(x.clone(), g.t()),
            BlockValue::Quad(q) => q.norm(),
        }
    }

    pub fn d(&self, g: &GroupSpec) -> BigInt {
        &self.a * num_traits::pow(self.b(g), g.n())
    }

    fn block_text(&self) -> String {
        match &self.block {
            BlockValue::Int(x) => x.to_string(),
            BlockValue::Quad(q) => q.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Plan {
    tag: ConstructionTag,
    s: usize,
    u: usize,
    v: usize,
    params: ClassParams,
}

/// A verified construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub element: GroupRingElement,
    pub tag: ConstructionTag,
    pub s: usize,
    pub params: ClassParams,
    /// The construction was built for `−D` and multiplied on the left by `−Y`.
    pub negated: bool,
    pub predicted: Prediction,
    pub report: DetReport,
    pub direct_d: BigInt,
}

impl Realization {
    pub fn to_json(&self) -> Value {
        json!({
            "element": self.element.to_text(),
            "tag": self.tag.to_string(),
            "params": {
                "s": self.s,
                "c": self.params.c.to_string(),
                "a": self.params.a.to_string(),
                "b": self.params.b.to_string(),
                "m": self.params.m.to_string(),
            },
            "negated": self.negated,
            "predicted": {"A": self.predicted.a.to_string(), "B(omega)": self.predicted.block_text()},
            "report": self.report.to_json(),
            "direct_D": self.direct_d.to_string(),
        })
    }
}

fn poly(p: usize, terms: &[(usize, &BigInt)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p];
    for &(e, c) in terms {
        out[e % p] += c;
    }
    out
}

fn elem(g: &GroupSpec, terms: &[(i64, usize, usize)]) -> GroupRingElement {
    GroupRingElement::from_terms(g, terms)
}

fn shift_spec(plan: &Plan, g: &GroupSpec) -> ShiftSpec {
    use ConstructionTag::*;
    let p = g.p();
    let ClassParams { c, a, b, m } = &plan.params;
    let (na, nb) = (-a, -b);
    let zero = BigInt::zero();
    let (g_base, t_poly, m) = match plan.tag {
        LemmaEx => {
            let terms: Vec<(i64, usize, usize)> = (0..plan.s).map(|j| (1, 0, j)).collect();
            let t = match g.shape() {
                GroupShape::Affine => poly(p, &[(0, c), (0, b), (1, &nb)]),
                _ => poly(p, &[(0, c), (0, a), (plan.u, &na), (0, b), (plan.v, &nb)]),
            };
            (elem(g, &terms), t, m.clone())
        }
        GaN2 => {
            let k = inv_mod(g.r() as i64 - 1, p as i64).expect("r ≠ 1");
            let k = (p as i64 - k) as usize % p;
            (elem(g, &[(1, 0, 0), (-1, 1, 1)]), poly(p, &[(0, c), (0, a), (k, &na)]), m.clone())
        }
        Ga7Mult4 => (
            elem(g, &[(1, 0, 0), (1, 0, 1), (-1, 1, 1), (1, 0, 2)]),
            poly(p, &[(1, c), (1, b), (6, &nb)]),
            zero,
        ),
        Ga7Mult9 => (elem(g, &[(1, 0, 0), (1, 1, 2), (1, 0, 3)]), poly(p, &[(0, c), (0, b), (3, &nb)]), zero),
        G21Mult9 => (
            elem(g, &[(1, 1, 0), (1, 2, 0), (-1, 0, 0), (-1, 0, 1)]),
            poly(p, &[(0, c), (5, a), (3, &na), (6, b), (3, &nb)]),
            zero,
        ),
        G55Mult25 => (
            elem(g, &[(1, 5, 0), (1, 3, 1), (-1, 0, 1), (-1, 0, 2)]),
            poly(p, &[(0, c), (0, a), (5, &na), (2, b), (5, &nb)]),
            zero,
        ),
        G78Mult6 => (
            elem(g, &[(1, 0, 0), (-1, 0, 1), (1, 10, 3), (-1, 0, 3)]),
            poly(p, &[(0, c), (3, a), (10, &na), (1, b), (3, &nb)]),
            zero,
        ),
        G78Mult4 => (
            elem(g, &[(1, 0, 0), (1, 0, 1), (-1, 1, 1), (1, 0, 2)]),
            poly(p, &[(0, c), (11, a), (0, &na), (11, b), (4, &nb)]),
            zero,
        ),
        G78Mult9 => {
            let two_b = b * 2;
            (
                elem(g, &[(1, 0, 0), (1, 1, 2), (1, 0, 3)]),
                poly(p, &[(0, c), (0, a), (7, &na), (0, &two_b), (3, &nb), (7, &nb)]),
                zero,
            )
        }
        PPower => {
            let terms: Vec<(i64, usize, usize)> = (0..p).map(|k| (1, 0, k % g.n())).collect();
            (elem(g, &terms), vec![], m.clone())
        }
        NegY => (elem(g, &[(-1, 0, 1)]), vec![], zero),
    };
    ShiftSpec { g_base, t_poly, m }
}

/// The closed forms of each construction.
fn closed_form(plan: &Plan, g: &GroupSpec) -> Prediction {
    use ConstructionTag::*;
    let (p, n) = (BigInt::from(g.p()), BigInt::from(g.n()));
    let ClassParams { c, a, b, m } = &plan.params;
    let s = BigInt::from(plan.s);
    let f = QuadField::new(g.p()).expect("prime");
    let (sq, th) = (f.sqrt_eps_p(), f.theta_p());
    let int = |x: &BigInt| f.int(x.clone());
    let one = BigInt::one();
    let two = BigInt::from(2);
    let quad = |x: QuadInt| BlockValue::Quad(x);
    match plan.tag {
        LemmaEx => {
            let a_val = &s + c * &n + m * &n * &p;
            let base = &s + &n * c;
            let block = match g.shape() {
                GroupShape::Affine => BlockValue::Int(base + b * &p),
                _ => quad(int(&base).add(&int(&p).sub(&th).scale(a)).add(&th.scale(b))),
            };
            Prediction { a: a_val, block }
        }
        GaN2 => Prediction { a: &n * &n * (c + m * &p), block: BlockValue::Int(c + &p * a) },
        Ga7Mult4 => Prediction {
            a: BigInt::from(4) * (&one + BigInt::from(3) * c),
            block: BlockValue::Int(BigInt::from(-3) + BigInt::from(12) * c + BigInt::from(7) * b),
        },
        Ga7Mult9 => Prediction {
            a: BigInt::from(9) * (&one + &two * c),
            block: BlockValue::Int(&two + BigInt::from(4) * c + BigInt::from(7) * b),
        },
        G21Mult9 => {
            // 2c + 2(1−c)√−7 + ½(7−√−7)a + ½(7+√−7)b
            let v = int(&(&two * c))
                .add(&sq.scale(&(&two * (&one - c))))
                .add(&int(&p).sub(&th).scale(a))
                .add(&th.scale(b));
            Prediction { a: BigInt::from(9) * c, block: quad(v) }
        }
        G55Mult25 => {
            let v = int(&(BigInt::from(25) * c + BigInt::from(11) * (a - &one - &two * c))).add(&th.scale(&(b + c + &one)));
            Prediction { a: BigInt::from(25) * c, block: quad(v) }
        }
        G78Mult6 => {
            let v = int(&(BigInt::from(36) * c + BigInt::from(13) * (a + c - &one))).add(&th.scale(&(b - &two * c + &one)));
            Prediction { a: BigInt::from(36) * c, block: quad(v) }
        }
        G78Mult4 => {
            let a_val = BigInt::from(4) * (&one + BigInt::from(3) * c);
            let v = int(&a_val).add(&sq.scale(&(a - c))).add(&int(&p).sub(&th).scale(&(b - &one - &two * c)));
            Prediction { a: a_val, block: quad(v) }
        }
        G78Mult9 => {
            let a_val = BigInt::from(9) * (&one + &two * c);
            let v = int(&a_val)
                .add(&sq.scale(&(a - &one - &two * c)))
                .add(&int(&p).sub(&th).scale(&(b - &one - &two * c)));
            Prediction { a: a_val, block: quad(v) }
        }
        PPower => Prediction { a: &p * (&one + m * &n), block: BlockValue::Int(p.clone()) },
        NegY => Prediction { a: -one, block: BlockValue::Int(BigInt::from(-1)) },
    }
}

fn check_against(pred: &Prediction, rep: &DetReport, g: &GroupSpec) -> Result<(), String> {
    if pred.a != rep.a {
        return Err(format!("A: closed form {} but engine {}", pred.a, rep.a));
    }
    match &pred.block {
        BlockValue::Int(x) => {
            let want = CyclotomicInt::from_int(g.p(), x.clone());
            if let Some((j, blk)) = g.coset_reps().iter().zip(&rep.b_blocks).find(|(_, blk)| **blk != want) {
                return Err(format!("B(ω^{j}): closed form {x} but engine {blk}"));
            }
        }
        BlockValue::Quad(q) => {
            let f = q.field();
            let got = quad_embed(&rep.b_blocks[0], f).map_err(|e| e.to_string())?;
            if &got != q {
                return Err(format!("B(ω): closed form {q} but engine {got}"));
            }
            let other = quad_embed(&rep.b_blocks[1], f).map_err(|e| e.to_string())?;
            if other != q.conj() {
                return Err(format!("second block {other} is not the conjugate of {q}"));
            }
        }
    }
    if pred.d(g) != rep.d {
        return Err(format!("D: closed form {} but engine {}", pred.d(g), rep.d));
    }
    Ok(())
}

fn build(plan: Plan, g: &GroupSpec, negate: bool) -> Result<Realization, RealizeError> {
    if !plan.tag.applies_to(g) {
        return Err(RealizeError::TagGroupMismatch { tag: plan.tag, group: g.label() });
    }
    let spec = shift_spec(&plan, g);
    let e = shift_construct(&spec, g);
    let rep = factored_determinant(&e, g).map_err(|x| RealizeError::PredictionMismatch(x.to_string()))?;
    let predicted = closed_form(&plan, g);
    check_against(&predicted, &rep, g).map_err(RealizeError::PredictionMismatch)?;
    let (lin_a, lin_blocks) = shift_prediction(&spec, g);
    if lin_a != rep.a || lin_blocks != rep.b_blocks {
        return Err(RealizeError::PredictionMismatch(format!("{} disagrees with its shift prediction", plan.tag)));
    }
    let (element, report) = if negate {
        let e2 = GroupRingElement::monomial(g, 0, 1, -1).mul(&e, g);
        let rep2 = factored_determinant(&e2, g).map_err(|x| RealizeError::PredictionMismatch(x.to_string()))?;
        if rep2.d != -&rep.d {
            return Err(RealizeError::PredictionMismatch("left multiplication by −Y did not flip the sign".into()));
        }
        (e2, rep2)
    } else {
        (e, rep)
    };
    let direct_d = direct_determinant(&element, g);
    if direct_d != report.d {
        return Err(RealizeError::PredictionMismatch(format!("direct {direct_d} vs factored {}", report.d)));
    }
    Ok(Realization { element, tag: plan.tag, s: plan.s, params: plan.params, negated: negate, predicted, report, direct_d })
}

fn default_uv(g: &GroupSpec) -> (usize, usize) {
    (1, smallest_non_residue(g.p()))
}

/// The lemma construction with `G = 1 + Y + ⋯ + Y^{s−1}`.
pub fn realize_lemma_ex(g: &GroupSpec, s: usize, params: LemmaParams, m: BigInt) -> Result<Realization, RealizeError> {
    let n = g.n();
    if s == 0 || s >= n.max(2) || num_integer::gcd(s, n) != 1 {
        return Err(RealizeError::BadS { s, n });
    }
    let (u, v, params) = match (params, g.shape()) {
        (LemmaParams::Affine { c, b }, GroupShape::Affine) => (0, 0, ClassParams { c, a: BigInt::zero(), b, m }),
        (LemmaParams::Half { c, a, b, u, v }, GroupShape::Half) => {
            let p = g.p();
            if !is_quadratic_residue(u, p) || v % p == 0 || is_quadratic_residue(v, p) {
                return Err(RealizeError::BadResidue { u, v, p });
            }
            (u, v, ClassParams { c, a, b, m })
        }
        _ => return Err(RealizeError::TagGroupMismatch { tag: ConstructionTag::LemmaEx, group: g.label() }),
    };
    build(Plan { tag: ConstructionTag::LemmaEx, s, u, v, params }, g, false)
}

/// One named construction with the given parameters (`s = 1` and default
/// `u`, `v` for the lemma).
pub fn realize_class(g: &GroupSpec, tag: ConstructionTag, params: ClassParams) -> Result<Realization, RealizeError> {
    let (u, v) = default_uv(g);
    build(Plan { tag, s: 1, u, v, params }, g, false)
}

fn mismatch(msg: impl Into<String>) -> RealizeError {
    RealizeError::PredictionMismatch(msg.into())
}

fn exact_div(a: &BigInt, b: &BigInt) -> Result<BigInt, RealizeError> {
    let (q, r) = a.div_rem(b);
    if b.is_zero() || !r.is_zero() {
        return Err(mismatch(format!("{a} is not divisible by {b}")));
    }
    Ok(q)
}

/// Solves the closed form of `tag` for its free parameters, given `c`, so
/// that `B(ω)` equals `target`.
fn solve_free(tag: ConstructionTag, g: &GroupSpec, s: usize, c: &BigInt, target: &BlockValue) -> Result<Plan, RealizeError> {
    let (u, v) = default_uv(g);
    let mk = |a: i64, b: i64| Plan {
        tag,
        s,
        u,
        v,
        params: ClassParams { c: c.clone(), a: a.into(), b: b.into(), m: BigInt::zero() },
    };
    let at = |a: i64, b: i64| closed_form(&mk(a, b), g).block;
    let (base, da, db) = (at(0, 0), at(1, 0), at(0, 1));
    let mut plan = mk(0, 0);
    match (target, base, da, db) {
        (BlockValue::Int(t), BlockValue::Int(b0), BlockValue::Int(ba), BlockValue::Int(bb)) => {
            // exactly one of a, b moves B
            let (sa, sb) = (&ba - &b0, &bb - &b0);
            if !sa.is_zero() {
                plan.params.a = exact_div(&(t - &b0), &sa)?;
            } else {
                plan.params.b = exact_div(&(t - &b0), &sb)?;
            }
        }
        (BlockValue::Quad(t), BlockValue::Quad(b0), BlockValue::Quad(ba), BlockValue::Quad(bb)) => {
            let r = t.sub(&b0);
            let (va, vb) = (ba.sub(&b0), bb.sub(&b0));
            let det = va.a() * vb.b() - vb.a() * va.b();
            plan.params.a = exact_div(&(r.a() * vb.b() - vb.a() * r.b()), &det)?;
            plan.params.b = exact_div(&(va.a() * r.b() - r.a() * va.b()), &det)?;
        }
        _ => return Err(mismatch("closed form and target have different shapes")),
    }
    Ok(plan)
}

/// Chooses the construction for a witness `(m, B(ω))`; `None` when `m`
/// needs the sign flip to land in a covered residue class.
fn plan_for(g: &GroupSpec, m: &BigInt, target: &BlockValue) -> Result<Option<Plan>, RealizeError> {
    use ConstructionTag::*;
    let n = g.n();
    let nb = BigInt::from(n);
    let divides = |k: i64| (m % BigInt::from(k)).is_zero();
    if m.gcd(&nb).is_one() {
        let s = m.mod_floor(&nb).try_into().expect("small");
        let s: usize = if n == 1 { 1 } else { s };
        let c = exact_div(&(m - BigInt::from(s)), &nb)?;
        return solve_free(LemmaEx, g, s, &c, target).map(Some);
    }
    let (tag, c) = match (g.characterized(), g.shape()) {
        (_, GroupShape::Affine) if divides((n * n) as i64) => (GaN2, exact_div(m, &BigInt::from(n * n))?),
        (Some(Characterized::Ga7), _) | (Some(Characterized::G78), _) if divides(4) && !divides(3) => {
            let tag = if g.characterized() == Some(Characterized::Ga7) { Ga7Mult4 } else { G78Mult4 };
            let q: BigInt = exact_div(m, &BigInt::from(4))? - 1;
            if !q.mod_floor(&BigInt::from(3)).is_zero() {
                return Ok(None);
            }
            (tag, exact_div(&q, &BigInt::from(3))?)
        }
        (Some(Characterized::Ga7), _) | (Some(Characterized::G78), _) if divides(9) && m.is_odd() => {
            let tag = if g.characterized() == Some(Characterized::Ga7) { Ga7Mult9 } else { G78Mult9 };
            (tag, exact_div(&(exact_div(m, &BigInt::from(9))? - 1), &BigInt::from(2))?)
        }
        (Some(Characterized::G78), _) if divides(36) => (G78Mult6, exact_div(m, &BigInt::from(36))?),
        (Some(Characterized::G21), _) if divides(9) => (G21Mult9, exact_div(m, &BigInt::from(9))?),
        (Some(Characterized::G55), _) if divides(25) => (G55Mult25, exact_div(m, &BigInt::from(25))?),
        _ => return Err(RealizeError::Unknown(format!("no construction covers m = {m} in {}", g.label()))),
    };
    solve_free(tag, g, 1, &c, target).map(Some)
}

/// An element of `Z[G]` with determinant exactly `d`.
pub fn realize_value(g: &GroupSpec, d: &BigInt) -> Result<Realization, RealizeError> {
    if d.is_one() {
        let e = GroupRingElement::identity(g);
        let report = factored_determinant(&e, g).map_err(|x| mismatch(x.to_string()))?;
        let direct_d = direct_determinant(&e, g);
        let predicted = Prediction { a: BigInt::one(), block: BlockValue::Int(BigInt::one()) };
        check_against(&predicted, &report, g).map_err(RealizeError::PredictionMismatch)?;
        return Ok(Realization {
            element: e,
            tag: ConstructionTag::LemmaEx,
            s: 1,
            params: ClassParams::new(0, 0, 0, 0),
            negated: false,
            predicted,
            report,
            direct_d,
        });
    }
    if *d == BigInt::from(-1) {
        return realize_class(g, ConstructionTag::NegY, ClassParams::new(0, 0, 0, 0));
    }
    let dec = member(d, g)?;
    match dec.status {
        MembershipStatus::Achievable => {}
        MembershipStatus::NotAchievable => return Err(RealizeError::NotAchievable(dec.reason)),
        MembershipStatus::Unknown => return Err(RealizeError::Unknown(dec.reason)),
    }
    let witness = dec.witness.expect("achievable carries a witness");
    let (m, target) = match &witness {
        Witness::Affine { m, b } => (m.clone(), BlockValue::Int(b.clone())),
        Witness::Quad { m, b } => (m.clone(), BlockValue::Quad(b.clone())),
        Witness::General { .. } => return Err(RealizeError::Unknown("no explicit construction for this witness".into())),
    };
    if let Some(plan) = plan_for(g, &m, &target)? {
        return build(plan, g, false);
    }
    let neg_target = match &target {
        BlockValue::Int(x) => BlockValue::Int(-x),
        BlockValue::Quad(q) => BlockValue::Quad(q.neg()),
    };
    let plan = plan_for(g, &-&m, &neg_target)?.ok_or_else(|| mismatch("sign flip did not reach a covered class"))?;
    build(plan, g, true)
}
