//! `grpdet`: integer group determinants of `Z_p ⋊_r Z_n` from the command
//! line.
//!
//! Exit codes: 0 success, 1 a negative answer or a failed check, 2 an
//! undecided answer or an interrupted census, 64 a usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, OnceLock};

use clap::{Args, Parser, Subcommand, ValueEnum};
use grpdet::census::{self, CancelToken, CensusConfig, CensusError, Recheck, RunOptions, VerifyOptions};
use grpdet::conditions::{check_necessary, member_with, NormSolverConfig};
use grpdet::detengine::{direct_determinant, factored_determinant};
use grpdet::golden::run_selftest;
use grpdet::realize::{realize_value, RealizeError};
use grpdet::{make_group, GroupRingElement, GroupSpec};
use num_bigint::BigInt;
use serde_json::json;

const EXIT_NO: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const STORE_ENV: &str = "GRPDET_STORE";

#[derive(Parser)]
#[command(name = "grpdet", version, about = "Exact integer group determinants for Z_p x|_r Z_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArg {
    /// Group as `p,r,n`, e.g. `5,2,4` for GA(1,5).
    #[arg(long, short = 'g', value_parser = parse_group)]
    group: GroupSpec,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Factored determinant of one element.
    Det {
        #[command(flatten)]
        g: GroupArg,
        /// Element text such as `1 + Y - X*Y + Y^2`.
        #[arg(long, short = 'e', allow_hyphen_values = true)]
        element: String,
        /// Also compute the determinant of the full group matrix.
        #[arg(long)]
        direct: bool,
    },
    /// Decide whether a value is an integer group determinant.
    Member {
        #[command(flatten)]
        g: GroupArg,
        /// Nonzero integer to decide.
        #[arg(long, short = 'v', allow_hyphen_values = true, value_parser = parse_int)]
        value: BigInt,
        /// Largest coordinate the real norm search may scan.
        #[arg(long, default_value_t = NormSolverConfig::default().scan_bound)]
        scan_bound: u64,
    },
    /// Build an element with a prescribed determinant.
    Realize {
        #[command(flatten)]
        g: GroupArg,
        /// Target determinant.
        #[arg(long, short = 'v', allow_hyphen_values = true, value_parser = parse_int)]
        value: BigInt,
    },
    /// Enumerate small elements into a store (resumes from its checkpoint).
    Census(CensusArgs),
    /// Check a store against the deciders.
    Verify {
        #[command(flatten)]
        g: GroupArg,
        /// Store to read; defaults to the compacted store of the census.
        #[arg(long)]
        store: Option<PathBuf>,
        /// Report achievable values with |D| up to this that the store never hit.
        #[arg(long, default_value_t = 50)]
        gap_bound: u64,
        #[arg(long, value_enum, default_value_t = RecheckArg::Direct)]
        recheck: RecheckArg,
    },
    /// Run the built-in reference checks.
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    g: GroupArg,
    /// Largest absolute coefficient.
    #[arg(long, short = 'c', default_value_t = 1)]
    coeff_bound: u32,
    /// Largest number of nonzero coefficients (default: the group order).
    #[arg(long, short = 's')]
    support_bound: Option<usize>,
    /// Store only values with |D| at most this (0 stores everything).
    #[arg(long, default_value = "0", value_parser = parse_int)]
    det_bound: BigInt,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, short = 'w', default_value_t = 1)]
    workers: usize,
    /// Stop after this many enumerated elements.
    #[arg(long)]
    limit: Option<u64>,
    /// Elements per checkpointed chunk.
    #[arg(long, default_value_t = census::DEFAULT_CHUNK)]
    chunk: u64,
    /// Store path; falls back to $GRPDET_STORE, then a name built from the group.
    #[arg(long)]
    store: Option<PathBuf>,
    /// Checkpoint path (default: `<store>.ckpt.json`).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Ignore any checkpoint and start from the beginning.
    #[arg(long)]
    restart: bool,
    /// Keep one element per orbit of left multiplication by powers of X.
    #[arg(long)]
    canonical: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecheckArg {
    Direct,
    Factored,
    None,
}

fn parse_group(s: &str) -> Result<GroupSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [p, r, n] = parts.as_slice() else {
        return Err(format!("expected p,r,n but got {s:?}"));
    };
    let num = |x: &str| x.parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    make_group(num(p)?, num(r)?, num(n)?).map_err(|e| e.to_string())
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    s.trim().parse().map_err(|_| format!("not an integer: {s:?}"))
}

fn default_store(g: &GroupSpec) -> PathBuf {
    PathBuf::from(format!("grpdet-census-{}-{}-{}.jsonl", g.p(), g.r(), g.n()))
}

fn store_path(flag: Option<PathBuf>, g: &GroupSpec) -> PathBuf {
    flag.or_else(|| std::env::var_os(STORE_ENV).map(PathBuf::from)).unwrap_or_else(|| default_store(g))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("grpdet: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("grpdet: {msg}");
    ExitCode::from(EXIT_NO)
}

static INTERRUPT: OnceLock<Arc<AtomicBool>> = OnceLock::new();

extern "C" fn on_sigint(_: libc::c_int) {
    if let Some(flag) = INTERRUPT.get() {
        flag.store(true, Ordering::SeqCst);
    }
}

fn install_sigint(token: &CancelToken) {
    let _ = INTERRUPT.set(token.flag());
    // SAFETY: the handler only performs an atomic store.
    unsafe {
        libc::signal(libc::SIGINT, on_sigint as *const () as libc::sighandler_t);
    }
}

fn cmd_det(g: GroupArg, element: String, direct: bool) -> ExitCode {
    let grp = &g.group;
    let e = match GroupRingElement::parse(&element, grp) {
        Ok(e) => e,
        Err(err) => return usage(err),
    };
    let rep = match factored_determinant(&e, grp) {
        Ok(r) => r,
        Err(err) => return fail(err),
    };
    let direct_d = direct.then(|| direct_determinant(&e, grp));
    let cond = check_necessary(&rep);
    if g.json {
        let mut v = serde_json::to_value(rep.to_json()).expect("json");
        v["element"] = json!(e.to_text());
        v["necessary_conditions"] = json!(cond.all_ok());
        if let Some(d) = &direct_d {
            v["direct_D"] = json!(d.to_string());
        }
        if let Some(q) = rep.quad_block() {
            v["B_omega"] = json!(q.to_string());
        }
        print_json(&v);
    } else {
        println!("group    {}", grp.label());
        println!("element  {}", e.to_text());
        println!("A        {}", rep.a);
        for (j, b) in grp.coset_reps().iter().zip(&rep.b_blocks) {
            println!("B(w^{j})   {b}");
        }
        if let Some(q) = rep.quad_block() {
            println!("B(w)     {q}");
        }
        println!("B        {}", rep.b);
        println!("D        {}", rep.d);
        if let Some(d) = &direct_d {
            println!("direct D {d}");
        }
        println!("necessary conditions {}", if cond.all_ok() { "hold" } else { "VIOLATED" });
    }
    match direct_d {
        Some(d) if d != rep.d => fail(format!("direct determinant {d} disagrees with factored {}", rep.d)),
        _ => ExitCode::SUCCESS,
    }
}

fn cmd_member(g: GroupArg, value: BigInt, scan_bound: u64) -> ExitCode {
    let dec = match member_with(&value, &g.group, &NormSolverConfig { scan_bound }) {
        Ok(d) => d,
        Err(err) => return usage(err),
    };
    if g.json {
        let mut v = dec.to_json(&g.group);
        v["value"] = json!(value.to_string());
        print_json(&v);
    } else {
        println!("{value} in {}: {:?}", g.group.label(), dec.status);
        println!("{}", dec.reason);
    }
    ExitCode::from(dec.status.exit_code() as u8)
}

fn cmd_realize(g: GroupArg, value: BigInt) -> ExitCode {
    match realize_value(&g.group, &value) {
        Ok(r) => {
            if g.json {
                print_json(&r.to_json());
            } else {
                println!("element  {}", r.element.to_text());
                println!("tag      {}{}", r.tag, if r.negated { " (times -Y)" } else { "" });
                println!(
                    "params   s={} c={} a={} b={} m={}",
                    r.s, r.params.c, r.params.a, r.params.b, r.params.m
                );
                println!("A        {}", r.report.a);
                println!("B        {}", r.report.b);
                println!("D        {}", r.report.d);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = match &err {
                RealizeError::NotAchievable(_) => EXIT_NO,
                RealizeError::Unknown(_) => EXIT_UNDECIDED,
                RealizeError::Member(_) => EXIT_USAGE,
                _ => EXIT_NO,
            };
            if g.json {
                print_json(&json!({"error": err.to_string()}));
            }
            eprintln!("grpdet: {err}");
            ExitCode::from(code)
        }
    }
}

fn cmd_census(a: CensusArgs) -> ExitCode {
    let g = a.g.group.clone();
    let store = store_path(a.store, &g);
    let mut cfg = CensusConfig::new(g.clone(), a.coeff_bound, a.support_bound.unwrap_or(g.order()), store);
    if let Some(ck) = a.checkpoint {
        cfg.checkpoint_path = ck;
    }
    cfg.det_bound = a.det_bound;
    cfg.workers = a.workers;
    cfg.limit = a.limit;
    cfg.chunk_size = a.chunk;
    cfg.canonical_only = a.canonical;
    if let Err(err) = cfg.validate() {
        return usage(err);
    }
    let token = CancelToken::new();
    install_sigint(&token);
    let opts = RunOptions { restart: a.restart, cancel: Some(token), stop_after_chunks: None };
    match census::census_run_with(&cfg, &opts, |_| {}) {
        Ok(sum) => {
            if a.g.json {
                let mut v = serde_json::to_value(&sum).expect("json");
                v["store"] = json!(cfg.store_path);
                v["checkpoint"] = json!(cfg.checkpoint_path);
                print_json(&v);
            } else {
                println!("store       {}", cfg.store_path.display());
                println!("cursor      {} / {}", sum.next_cursor, sum.end_cursor);
                println!("records     {}", sum.records);
                println!("violations  {}", sum.violations);
                match &sum.compact_path {
                    Some(p) => println!("compacted   {}", p.display()),
                    None => println!("interrupted; rerun the same command to resume"),
                }
            }
            if sum.violations > 0 {
                ExitCode::from(EXIT_NO)
            } else if !sum.complete {
                ExitCode::from(EXIT_UNDECIDED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err @ CensusError::InvalidConfig(_)) => usage(err),
        Err(err) => fail(err),
    }
}

fn cmd_verify(g: GroupArg, store: Option<PathBuf>, gap_bound: u64, recheck: RecheckArg) -> ExitCode {
    let path = match store {
        Some(p) => p,
        None => census::compact_path(&store_path(None, &g.group)),
    };
    let recheck = match recheck {
        RecheckArg::Direct => Recheck::Direct,
        RecheckArg::Factored => Recheck::Factored,
        RecheckArg::None => Recheck::None,
    };
    let opts = VerifyOptions { recheck, gap_bound, ..Default::default() };
    let rep = match census::census_verify_with(&path, &g.group, &opts) {
        Ok(r) => r,
        Err(err) => return fail(err),
    };
    if g.json {
        let mut v = serde_json::to_value(&rep).expect("json");
        v["ok"] = json!(rep.ok());
        print_json(&v);
    } else {
        println!("store              {}", path.display());
        println!("mode               {:?}", rep.mode);
        println!("records            {} ({} zero)", rep.records, rep.zero_records);
        println!("distinct nonzero D {}", rep.distinct_nonzero);
        println!("recheck failures   {}", rep.recheck_failures.len());
        println!("necessary failures {}", rep.necessary_violations.len());
        println!("soundness failures {}", rep.soundness_violations.len());
        println!("undecided          {}", rep.undecided.len());
        if rep.achievable_in_range > 0 {
            println!(
                "coverage |D|<={}   {}/{} achievable values hit",
                rep.gap_bound,
                rep.achievable_in_range - rep.gaps.len(),
                rep.achievable_in_range
            );
            if !rep.gaps.is_empty() {
                println!("gaps               {}", rep.gaps.join(" "));
            }
        }
    }
    if rep.ok() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NO) }
}

fn cmd_selftest(json_out: bool) -> ExitCode {
    let checks = run_selftest();
    let ok = checks.iter().all(|c| c.passed);
    if json_out {
        print_json(&json!({"passed": ok, "checks": checks}));
    } else {
        for c in &checks {
            println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        println!("{} of {} checks passed", checks.iter().filter(|c| c.passed).count(), checks.len());
    }
    if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NO) }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match cli.command {
        Command::Det { g, element, direct } => cmd_det(g, element, direct),
        Command::Member { g, value, scan_bound } => cmd_member(g, value, scan_bound),
        Command::Realize { g, value } => cmd_realize(g, value),
        Command::Census(a) => cmd_census(a),
        Command::Verify { g, store, gap_bound, recheck } => cmd_verify(g, store, gap_bound, recheck),
        Command::Selftest { json } => cmd_selftest(json),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_arguments() {
        assert_eq!(parse_group("5,2,4").unwrap().order(), 20);
        assert_eq!(parse_group(" 13, 4, 6 ").unwrap().order(), 78);
        assert!(parse_group("5,2").is_err());
        assert!(parse_group("6,2,4").is_err());
        assert!(parse_int("-85683").is_ok());
        assert!(parse_int("1e3").is_err());
    }

    #[test]
    fn store_precedence() {
        let g = parse_group("5,2,4").unwrap();
        let flag = PathBuf::from("flag.jsonl");
        assert_eq!(store_path(Some(flag.clone()), &g), flag);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
