use std::process::{Command, Output};

fn grpdet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpdet"))
        .args(args)
        .env_remove("GRPDET_STORE")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn det_of_minus_y() {
    let out = grpdet(&["det", "--group", "7,3,6", "--element", "-1*Y", "--json", "--direct"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["D"], "-1");
    assert_eq!(v["direct_D"], "-1");
    assert_eq!(v["necessary_conditions"], true);
}

#[test]
fn det_text_output() {
    let out = grpdet(&["det", "-g", "13,4,6", "-e", "1 - Y - Y^3 + X^10*Y^3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("B(w)"), "{text}");
}

#[test]
fn member_exit_codes() {
    assert_eq!(grpdet(&["member", "--group", "5,2,4", "--value", "2"]).status.code(), Some(1));
    assert_eq!(grpdet(&["member", "--group", "5,2,4", "--value", "-1"]).status.code(), Some(0));
    let out = grpdet(&["member", "--group", "5,2,4", "--value", "85683", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["status"], "Achievable");
    // no characterisation: only the necessary conditions
    assert_eq!(grpdet(&["member", "--group", "7,6,2", "--value", "9"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(grpdet(&["det", "--group", "6,2,4", "--element", "1"]).status.code(), Some(64));
    assert_eq!(grpdet(&["det", "--group", "5,2,4", "--element", "Z"]).status.code(), Some(64));
    assert_eq!(grpdet(&["member", "--group", "5,2,4", "--value", "0"]).status.code(), Some(64));
    assert_eq!(grpdet(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(grpdet(&["--help"]).status.code(), Some(0));
}

#[test]
fn realize_round_trip() {
    let out = grpdet(&["realize", "--group", "13,4,6", "--value", "147456", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["direct_D"], "147456");
    assert_eq!(v["tag"], "G78Mult6");
    let element = v["element"].as_str().unwrap().to_string();
    let out = grpdet(&["det", "--group", "13,4,6", "--element", &element, "--json"]);
    assert_eq!(stdout_json(&out)["D"], "147456");
    assert_eq!(grpdet(&["realize", "--group", "5,2,4", "--value", "2"]).status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let out = grpdet(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    assert!(text.contains("checks passed"));
}

#[test]
fn census_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("ga5.jsonl");
    let store_s = store.to_str().unwrap();
    let out = grpdet(&["census", "-g", "5,2,4", "-c", "1", "--limit", "2000", "--workers", "2", "--store", store_s, "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["complete"], true);
    let compact = v["compact_path"].as_str().unwrap().to_string();
    let out = grpdet(&["verify", "-g", "5,2,4", "--store", &compact, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["mode"], "Theorem");
}

#[test]
fn store_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("env.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_grpdet"))
        .args(["census", "-g", "7,2,3", "--limit", "100"])
        .env("GRPDET_STORE", &store)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(store.exists());
    let out = Command::new(env!("CARGO_BIN_EXE_grpdet"))
        .args(["verify", "-g", "7,2,3"])
        .env("GRPDET_STORE", &store)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn corrupt_checkpoint_requires_restart() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.jsonl");
    let ck = dir.path().join("s.ckpt");
    let base = ["census", "-g", "5,2,4", "--limit", "300", "--store", store.to_str().unwrap(), "--checkpoint", ck.to_str().unwrap()];
    assert_eq!(grpdet(&base).status.code(), Some(0));
    std::fs::write(&ck, "garbage").unwrap();
    let out = grpdet(&base);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--restart"));
    let mut again = base.to_vec();
    again.push("--restart");
    assert_eq!(grpdet(&again).status.code(), Some(0));
}

#[cfg(unix)]
#[test]
fn sigint_leaves_a_resumable_checkpoint() {
    use std::time::Duration;
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.jsonl");
    let ck = dir.path().join("s.ckpt");
    let args = ["census", "-g", "13,4,6", "-c", "1", "--chunk", "16", "--store", store.to_str().unwrap(), "--checkpoint", ck.to_str().unwrap()];
    let mut child = Command::new(env!("CARGO_BIN_EXE_grpdet")).args(args).stdout(std::process::Stdio::null()).spawn().unwrap();
    // wait for the first checkpoint
    for _ in 0..600 {
        if ck.exists() {
            break;
        }
        std::thread::sleep(Duration::from_millis(50));
    }
    assert!(ck.exists());
    send_sigint(child.id());
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&ck).unwrap()).unwrap();
    assert_eq!(v["complete"], false);
    assert_eq!(v["store_bytes"].as_u64().unwrap(), std::fs::metadata(&store).unwrap().len());
}

#[cfg(unix)]
fn send_sigint(pid: u32) {
    Command::new("kill").args(["-INT", &pid.to_string()]).status().unwrap();
}
