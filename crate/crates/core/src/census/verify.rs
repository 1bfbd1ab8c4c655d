//! Checks a store against the deciders.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{read_store, CensusError, CensusRecord};
use crate::conditions::{check_values, member_with, MembershipStatus, NormSolverConfig};
use crate::detengine::{direct_determinant, factored_determinant};
use crate::groups::{GroupRingElement, GroupShape, GroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recheck {
    /// Re-evaluate each record with the Bareiss determinant of the full
    /// group matrix.
    Direct,
    Factored,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyMode {
    /// Soundness against a complete characterisation.
    Theorem,
    /// Only the necessary conditions are available for the group.
    NecessaryOnly,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub recheck: Recheck,
    /// Report achievable `|D| ≤ gap_bound` missing from the store.
    pub gap_bound: u64,
    pub norm: NormSolverConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { recheck: Recheck::Direct, gap_bound: 50, norm: NormSolverConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group: [usize; 3],
    pub mode: VerifyMode,
    pub records: usize,
    pub distinct_nonzero: usize,
    pub zero_records: usize,
    /// Cursors whose stored values do not re-evaluate.
    pub recheck_failures: Vec<u64>,
    pub necessary_violations: Vec<String>,
    /// Values in the store that the decider calls not achievable.
    pub soundness_violations: Vec<String>,
    /// Values the decider could not settle.
    pub undecided: Vec<String>,
    pub gap_bound: u64,
    /// Achievable values within the gap bound that the store has not hit.
    pub gaps: Vec<String>,
    pub achievable_in_range: usize,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.recheck_failures.is_empty() && self.necessary_violations.is_empty() && self.soundness_violations.is_empty()
    }
}

pub fn census_verify(store_path: &Path, g: &GroupSpec) -> Result<VerifyReport, CensusError> {
    census_verify_with(store_path, g, &VerifyOptions::default())
}

fn recheck(rec: &CensusRecord, g: &GroupSpec, how: Recheck) -> bool {
    let Ok(e) = GroupRingElement::parse(&rec.element, g) else {
        return false;
    };
    match how {
        Recheck::None => true,
        Recheck::Factored => factored_determinant(&e, g).is_ok_and(|r| r.d == rec.d && r.a == rec.a && r.b == rec.b),
        Recheck::Direct => {
            direct_determinant(&e, g) == rec.d
                && factored_determinant(&e, g).is_ok_and(|r| r.a == rec.a && r.b == rec.b)
        }
    }
}

/// Groups whose decider is a theorem: the five characterised groups.
fn mode_for(g: &GroupSpec) -> VerifyMode {
    if g.characterized().is_some() { VerifyMode::Theorem } else { VerifyMode::NecessaryOnly }
}

pub fn census_verify_with(store_path: &Path, g: &GroupSpec, opts: &VerifyOptions) -> Result<VerifyReport, CensusError> {
    let records = read_store(store_path)?;
    let mode = mode_for(g);
    let mut report = VerifyReport {
        group: [g.p(), g.r(), g.n()],
        mode,
        records: records.len(),
        distinct_nonzero: 0,
        zero_records: 0,
        recheck_failures: vec![],
        necessary_violations: vec![],
        soundness_violations: vec![],
        undecided: vec![],
        gap_bound: opts.gap_bound,
        gaps: vec![],
        achievable_in_range: 0,
    };

    let mut seen = BTreeSet::new();
    for rec in &records {
        if !recheck(rec, g, opts.recheck) || rec.a.clone() * num_traits::pow(rec.b.clone(), g.n()) != rec.d {
            report.recheck_failures.push(rec.cursor);
        }
        if rec.d.is_zero() {
            report.zero_records += 1;
            continue;
        }
        if !check_values(g, &rec.a, &rec.b).all_ok() {
            report.necessary_violations.push(rec.d.to_string());
        }
        seen.insert(rec.d.clone());
    }
    report.distinct_nonzero = seen.len();

    // Uncharacterised half groups and GA(1,p) still get the partial deciders.
    let decide = mode == VerifyMode::Theorem || matches!(g.shape(), GroupShape::Affine | GroupShape::Half);
    if decide {
        for d in &seen {
            match member_with(d, g, &opts.norm).map(|m| m.status) {
                Ok(MembershipStatus::Achievable) => {}
                Ok(MembershipStatus::NotAchievable) => report.soundness_violations.push(d.to_string()),
                Ok(MembershipStatus::Unknown) | Err(_) => report.undecided.push(d.to_string()),
            }
        }
    }
    if mode == VerifyMode::Theorem {
        for k in 1..=opts.gap_bound as i64 {
            for d in [BigInt::from(k), BigInt::from(-k)] {
                let hit = matches!(member_with(&d, g, &opts.norm), Ok(m) if m.status == MembershipStatus::Achievable);
                if hit {
                    report.achievable_in_range += 1;
                    if !seen.contains(&d) {
                        report.gaps.push(d.to_string());
                    }
                }
            }
        }
        report.gaps.sort_by_key(|s| {
            let v: BigInt = s.parse().expect("decimal");
            (v.abs(), v.is_negative())
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{census_run, CensusConfig};
    use crate::groups::make_group;
    use std::io::Write;

    #[test]
    fn ga5_store_is_sound() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_group(5, 2, 4).unwrap();
        let mut cfg = CensusConfig::new(g.clone(), 1, 20, dir.path().join("s.jsonl"));
        cfg.limit = Some(3000);
        let sum = census_run(&cfg).unwrap();
        let rep = census_verify(&sum.compact_path.unwrap(), &g).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.mode, VerifyMode::Theorem);
        assert!(rep.undecided.is_empty());
        assert!(rep.distinct_nonzero > 5);
        assert!(rep.achievable_in_range > 0);
    }

    #[test]
    fn seven_divisible_values_are_seventh_power_multiples() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_group(7, 2, 3).unwrap();
        let mut cfg = CensusConfig::new(g.clone(), 1, 21, dir.path().join("s.jsonl"));
        cfg.limit = Some(3000);
        let sum = census_run(&cfg).unwrap();
        let path = sum.compact_path.unwrap();
        let rep = census_verify(&path, &g).unwrap();
        assert!(rep.ok(), "{rep:?}");
        let seven = BigInt::from(7);
        let seven4 = BigInt::from(7i64.pow(4));
        for r in read_store(&path).unwrap().iter().filter(|r| !r.d.is_zero()) {
            if (&r.d % &seven).is_zero() {
                assert!((&r.d % &seven4).is_zero(), "{}", r.d);
            }
        }
    }

    #[test]
    fn tampered_records_are_caught() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_group(5, 2, 4).unwrap();
        let path = dir.path().join("bad.jsonl");
        let mut f = std::fs::File::create(&path).unwrap();
        // 1 − Y has D = 0, claimed here as 2
        writeln!(f, r#"{{"cursor":7,"D":"2","A":"2","B":"1","element":"1 - Y","necessary_ok":true}}"#).unwrap();
        drop(f);
        let rep = census_verify(&path, &g).unwrap();
        assert_eq!(rep.recheck_failures, vec![7]);
        assert_eq!(rep.soundness_violations, vec!["2".to_string()]);
        assert!(!rep.ok());
    }

    #[test]
    fn other_groups_use_necessary_mode() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_group(7, 6, 2).unwrap();
        let mut cfg = CensusConfig::new(g.clone(), 1, 14, dir.path().join("s.jsonl"));
        cfg.limit = Some(500);
        let sum = census_run(&cfg).unwrap();
        let rep = census_verify(&sum.compact_path.unwrap(), &g).unwrap();
        assert_eq!(rep.mode, VerifyMode::NecessaryOnly);
        assert!(rep.ok());
        assert!(rep.gaps.is_empty());
    }
}
