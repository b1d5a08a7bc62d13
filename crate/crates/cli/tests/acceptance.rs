//! One pass/fail line per acceptance criterion; fails if any criterion fails.

use std::path::PathBuf;

use ipsforge::suites::{SuiteContext, CRITERIA};

fn summary(detail: &serde_json::Value) -> String {
    let mut s = detail.to_string();
    if s.len() > 160 {
        let cut = (0..=160).rev().find(|&i| s.is_char_boundary(i)).unwrap_or(0);
        s.truncate(cut);
        s.push_str("...");
    }
    s
}

fn main() {
    let ctx = SuiteContext {
        seed: 0,
        binary: Some(PathBuf::from(env!("CARGO_BIN_EXE_ipsforge"))),
    };
    let mut failed = 0;
    for criterion in &CRITERIA {
        let r = criterion.run(&ctx);
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {} ({:.2}s) {}",
            r.id,
            r.name,
            r.elapsed.as_secs_f64(),
            summary(&r.detail)
        );
        failed += usize::from(!r.passed);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
