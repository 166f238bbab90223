//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Each criterion runs at its stated tolerance and, where one is stated,
//! inside its runtime budget. Criterion 10 runs the built binary's `verify`
//! twice and compares the reports byte for byte.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use revivals::verify::{self, CriterionResult};

const SEED: u64 = 20_240_601;

fn budget(id: u32) -> Option<Duration> {
    let secs = match id {
        1 => 5,
        2 => 1,
        3 => 10,
        4 => 30,
        5 | 7 => 60,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn verify_twice() -> CriterionResult {
    let dir = tempfile::tempdir().expect("temp dir");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_revivals"))
            .args(["verify", "--seed", &SEED.to_string(), "--out"])
            .arg(&path)
            .status()
            .expect("run revivals");
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (code_a, a) = run("first.json");
    let (code_b, b) = run("second.json");
    let same = !a.is_empty() && a == b && code_a == code_b;
    CriterionResult {
        id: 10,
        name: "determinism",
        passed: same,
        metric: if same { 0.0 } else { 1.0 },
        limit: 0.0,
        detail: format!("two `verify` runs: {} bytes vs {} bytes, exit {:?} / {:?}", a.len(), b.len(), code_a, code_b),
    }
}

fn main() -> ExitCode {
    let mut failures = 0;
    for id in 1..=verify::CRITERIA {
        let start = Instant::now();
        let mut res = if id == 10 { verify_twice() } else { verify::criterion(id, SEED) };
        let elapsed = start.elapsed();
        let mut timing = format!("{:.2} s", elapsed.as_secs_f64());
        if let Some(limit) = budget(id) {
            timing.push_str(&format!(" of {} s", limit.as_secs()));
            if elapsed > limit {
                res.passed = false;
            }
        }
        if !res.passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {}: metric {:e} (limit {:e}) [{}] {}",
            id,
            if res.passed { "PASS" } else { "FAIL" },
            res.name,
            res.metric,
            res.limit,
            timing,
            res.detail
        );
    }
    println!("{} of {} criteria passed", verify::CRITERIA as usize - failures, verify::CRITERIA);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
