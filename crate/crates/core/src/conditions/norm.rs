//! Elements of prescribed norm in `Z[θ₀]` subject to the congruence
//! `b ∈ m + pZ + θ_p Z`.
//!
//! Writing `b = x + yθ₀`, `u = 2x + y`, the norm form is
//! `4N(b) = u² − εp·y²` and the lattice condition reads `u ≡ 2m (mod p)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{QuadField, QuadInt};

/// Tuning for the real-field search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormSolverConfig {
    /// Largest number of `y` values examined before answering `Unknown`.
    pub scan_bound: u64,
}

impl Default for NormSolverConfig {
    fn default() -> Self {
        NormSolverConfig { scan_bound: 10_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormSearch {
    Found(QuadInt),
    None,
    /// The search region exceeded the configured bound.
    Exhausted,
}

/// `true` when `b` lies in `m + pZ + θ_p Z`.
pub fn in_lattice(b: &QuadInt, m: &BigInt) -> bool {
    let p = BigInt::from(b.field().p());
    (b.trace() - BigInt::from(2) * m).mod_floor(&p).is_zero()
}

/// The lattice coordinates `(α, β)` with `b = m + αp + βθ_p`.
pub fn lattice_coords(b: &QuadInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    if !in_lattice(b, m) {
        return None;
    }
    let p = b.field().p() as i64;
    let beta = b.b().clone();
    let rest = b.a() - m - &beta * BigInt::from((p - 1) / 2);
    let (alpha, r) = rest.div_rem(&BigInt::from(p));
    debug_assert!(r.is_zero());
    Some((alpha, beta))
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let s = x.sqrt();
    (&s * &s == *x).then_some(s)
}

/// Searches for `b` with `N(b) ∈ norms` and `b ∈ m + pZ + θ_p Z`.
pub fn solve_norm(f: QuadField, norms: &[BigInt], m: &BigInt, cfg: &NormSolverConfig) -> NormSearch {
    if f.is_real() {
        solve_real(f, norms, m, cfg)
    } else {
        solve_imaginary(f, norms, m)
    }
}

fn element(f: QuadField, u: &BigInt, y: &BigInt) -> Option<QuadInt> {
    let two = BigInt::from(2);
    let x2 = u - y;
    x2.is_even().then(|| QuadInt::new(f, x2 / &two, y.clone()))
}

fn solve_imaginary(f: QuadField, norms: &[BigInt], m: &BigInt) -> NormSearch {
    let p = BigInt::from(f.p());
    for c in norms {
        if c.is_negative() {
            continue;
        }
        let four_c = BigInt::from(4) * c;
        let ymax = (&four_c / &p).sqrt();
        let mut y = -ymax.clone();
        while y <= ymax {
            if let Some(u) = exact_sqrt(&(&four_c - &p * &y * &y)) {
                for u in [u.clone(), -u] {
                    if let Some(b) = element(f, &u, &y) {
                        if in_lattice(&b, m) {
                            return NormSearch::Found(b);
                        }
                    }
                }
            }
            y += 1;
        }
    }
    NormSearch::None
}

fn solve_real(f: QuadField, norms: &[BigInt], m: &BigInt, cfg: &NormSolverConfig) -> NormSearch {
    let unit = f.fundamental_unit().expect("real quadratic field has a unit");
    let d = BigInt::from(f.radicand());
    // every orbit under the units meets |y| <= sqrt|N|·(1+ε)/sqrt(d)
    let sqrt_d = (f.radicand() as f64).sqrt();
    let eps_f = unit.a().to_f64().unwrap_or(f64::MAX) + unit.b().to_f64().unwrap_or(f64::MAX) * (1.0 + sqrt_d) / 2.0;
    let k = ((1.0 + eps_f) / sqrt_d).ceil();
    if !k.is_finite() || k > cfg.scan_bound as f64 {
        return NormSearch::Exhausted;
    }
    let k = BigInt::from(k as u64);
    let orbit = unit_residue_orbit(&unit);
    for c in norms {
        let ymax = c.abs().sqrt() * &k + &k;
        if ymax > BigInt::from(cfg.scan_bound) {
            return NormSearch::Exhausted;
        }
        let four_c = BigInt::from(4) * c;
        let mut y = -ymax.clone();
        while y <= ymax {
            if let Some(u) = exact_sqrt(&(&four_c + &d * &y * &y)) {
                for u in [u.clone(), -u] {
                    let Some(b) = element(f, &u, &y) else { continue };
                    for s in &orbit {
                        let cand = b.mul(s);
                        if in_lattice(&cand, m) {
                            return NormSearch::Found(cand);
                        }
                    }
                }
            }
            y += 1;
        }
    }
    NormSearch::None
}

/// `±ε^k` for `k` up to the order of `ε` modulo the ramified prime; these
/// represent every unit residue class the orbit of a point can reach.
fn unit_residue_orbit(unit: &QuadInt) -> Vec<QuadInt> {
    let f = unit.field();
    let p = BigInt::from(f.p());
    let two_inv = BigInt::from((f.p() + 1) / 2);
    let residue = |x: &QuadInt| (x.trace() * &two_inv).mod_floor(&p);
    let one = BigInt::from(1);
    let mut out = Vec::new();
    let mut x = f.int(1);
    loop {
        out.push(x.clone());
        out.push(x.neg());
        x = x.mul(unit);
        if residue(&x) == one {
            break;
        }
    }
    out
}
