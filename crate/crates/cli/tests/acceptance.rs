//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are reported but do not fail the run. A
//! criterion lands there only when the computation disagrees with the
//! stated claim and the disagreement has been checked by hand.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fadcert_cli::{self as suites, RunReport};
use fadcert_core::automorphism::DEFAULT_ORDER_CUTOFF;
use fadcert_core::genset::{
    builtin_genset, certify_set_finite, FinitenessCertificate, GenSetName, Status,
    DEFAULT_CLOSURE_CAP, Y2_NIELSEN, Y4_NIELSEN,
};

const RELATIONS_LIMIT: Duration = Duration::from_secs(10);
const HOMOLOGY_LIMIT: Duration = Duration::from_secs(60);
const ALL_LIMIT: Duration = Duration::from_secs(300);
const SEED: u64 = 0;
const RANKS: [usize; 4] = [5, 6, 9, 10];

/// Criterion 3: the drawn Y4 graph omits one computed edge. Criterion 11
/// inherits that failing item through `all`.
const KNOWN_RED: [u32; 2] = [3, 11];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn failures(r: &RunReport, prefix: &str) -> Vec<String> {
    r.items
        .iter()
        .filter(|i| i.label.starts_with(prefix) && i.status != Status::Verified)
        .map(|i| format!("{}: {}", i.label, i.detail))
        .collect()
}

fn verified(r: &RunReport, label: &str) -> bool {
    r.item(label).is_some_and(|i| i.status == Status::Verified)
}

fn c1_relations() -> Outcome {
    let start = Instant::now();
    let r = suites::relations(&RANKS).expect("relations run");
    let took = start.elapsed();
    let bad = failures(&r, "");
    let parity = RANKS.iter().all(|n| {
        let branch = if n % 2 == 1 { "chain-odd" } else { "chain-even" };
        verified(&r, &format!("saut/n{n}/saut/{branch}"))
    });
    outcome(
        bad.is_empty() && parity && took < RELATIONS_LIMIT,
        format!(
            "{} relations, {} failures, parity chains {parity}, {:.2}s (limit {}s)",
            r.items.len(),
            bad.len(),
            took.as_secs_f64(),
            RELATIONS_LIMIT.as_secs()
        ),
    )
}

fn c2_orders() -> Outcome {
    let y4 = suites::pairs(GenSetName::Y4, 9, DEFAULT_ORDER_CUTOFF, DEFAULT_CLOSURE_CAP).unwrap();
    let claims = verified(&y4, "product/e2e4rho12*(x1,x2)e1e2e3") && verified(&y4, "product/e2e4rho12*(x2,x3)e1");
    let mut bad = failures(&y4, "order/");
    for n in RANKS {
        let y2 = suites::pairs(GenSetName::Y2, n, DEFAULT_ORDER_CUTOFF, DEFAULT_CLOSURE_CAP).unwrap();
        bad.extend(failures(&y2, "order/"));
        let y4 = suites::pairs(GenSetName::Y4, n, DEFAULT_ORDER_CUTOFF, DEFAULT_CLOSURE_CAP).unwrap();
        bad.extend(failures(&y4, "order/"));
    }
    outcome(
        claims && bad.is_empty(),
        format!("product claims 6 and 4: {claims}; element order failures: {bad:?}"),
    )
}

fn c3_figures() -> Outcome {
    let y2 = suites::pairs(GenSetName::Y2, 8, DEFAULT_ORDER_CUTOFF, DEFAULT_CLOSURE_CAP).unwrap();
    let y4 = suites::pairs(GenSetName::Y4, 9, DEFAULT_ORDER_CUTOFF, DEFAULT_CLOSURE_CAP).unwrap();
    let mut bad = failures(&y2, "figure/");
    bad.extend(failures(&y4, "figure/"));
    let gens = builtin_genset(GenSetName::Y2, 8).unwrap();
    let table = fadcert_core::genset::pair_order_table(&gens, DEFAULT_ORDER_CUTOFF).unwrap();
    let labels: Vec<_> = [
        ("e2rho12", "(x2,x3)e1"),
        ("(x1,x2)e1e2", "(x2,x3)e1"),
        ("(x2,x3)e1", "(x3,x4)"),
        ("(x7,x8)", "e8"),
    ]
    .iter()
    .map(|(a, b)| table.order_of(a, b).and_then(|o| o.finite()))
    .collect();
    let labels_ok = labels == [Some(4), Some(6), Some(6), Some(4)];
    outcome(
        bad.is_empty() && labels_ok,
        format!("labelled orders {labels:?}; figure mismatches: {bad:?}"),
    )
}

fn c4_finiteness() -> Outcome {
    let mut bad = Vec::new();
    for (set, n) in [(GenSetName::Y2, 8), (GenSetName::Y4, 9), (GenSetName::YPrime, 9)] {
        let r = suites::pairs(set, n, DEFAULT_ORDER_CUTOFF, DEFAULT_CLOSURE_CAP).unwrap();
        bad.extend(failures(&r, "pair/"));
        bad.extend(failures(&r, "finite/"));
    }
    // Small ranks, where exhaustive closure fits under the cap.
    let closures = [
        (GenSetName::Y2, 4, Y2_NIELSEN),
        (GenSetName::YPrime, 5, Y4_NIELSEN),
        (GenSetName::Y4, 5, Y4_NIELSEN),
    ]
    .map(|(set, n, drop)| {
        let rest = builtin_genset(set, n).unwrap().without(drop);
        certify_set_finite(&rest, DEFAULT_CLOSURE_CAP).unwrap()
    });
    let closed = closures
        .iter()
        .all(|c| matches!(c, FinitenessCertificate::SignedPermutation { order: Some(_) }));
    outcome(
        bad.is_empty() && closed,
        format!("closures {closures:?}; failures {bad:?}"),
    )
}

fn c5_generation() -> Outcome {
    let r = suites::generation(&RANKS).unwrap();
    let bad = failures(&r, "");
    outcome(
        bad.is_empty(),
        format!("{} items, failures {bad:?}", r.items.len()),
    )
}

fn c6_homology() -> Outcome {
    let start = Instant::now();
    let r = suites::homology_suite(6).unwrap();
    let took = start.elapsed();
    let bad = failures(&r, "");
    let tuples = r.items.iter().filter(|i| i.label.starts_with("join-spheres/")).count();
    outcome(
        bad.is_empty() && tuples == 63 && took < HOMOLOGY_LIMIT,
        format!("{tuples} tuples, failures {bad:?}, {:.2}s (limit {}s)", took.as_secs_f64(), HOMOLOGY_LIMIT.as_secs()),
    )
}

fn c7_nerve_join() -> Outcome {
    let r = suites::nerve_join_suite(SEED, 100).unwrap();
    let bad = failures(&r, "");
    outcome(bad.is_empty(), r.items[0].detail.clone())
}

fn c8_helly() -> Outcome {
    let r = suites::helly_suite(SEED, 500).unwrap();
    let bad = failures(&r, "");
    let details: Vec<_> = r.items.iter().map(|i| format!("{}: {}", i.label, i.detail)).collect();
    outcome(bad.is_empty() && r.items.len() == 4, details.join("; "))
}

fn c9_swelling() -> Outcome {
    let r = suites::swelling_suite(SEED, 200).unwrap();
    let bad = failures(&r, "");
    outcome(bad.is_empty(), r.item("swelling/random").map(|i| i.detail.clone()).unwrap_or_default())
}

fn c10_bounds() -> Outcome {
    let b = suites::bounds_suite(2000).unwrap();
    let f = suites::families(&(4..=12).collect::<Vec<_>>()).unwrap();
    let mut bad = failures(&b, "");
    bad.extend(failures(&f, "families/"));
    let families = f.items.iter().filter(|i| i.label.starts_with("families/")).count();
    outcome(
        bad.is_empty() && families > 0,
        format!("{} bound items, {families} family checks, failures {bad:?}", b.items.len()),
    )
}

fn c11_all() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fadcert"))
        .arg("all")
        .output()
        .expect("run fadcert all");
    let took = start.elapsed();
    let failed: Vec<String> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| l.trim_start().starts_with("[failed]"))
        .map(|l| l.trim().to_string())
        .collect();
    outcome(
        out.status.success() && took < ALL_LIMIT,
        format!(
            "exit {:?}, {:.2}s (limit {}s), failed items {failed:?}",
            out.status.code(),
            took.as_secs_f64(),
            ALL_LIMIT.as_secs()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "relation replay", c1_relations),
        (2, "order claims", c2_orders),
        (3, "figure reconstruction", c3_figures),
        (4, "finiteness certificates", c4_finiteness),
        (5, "generation certificates", c5_generation),
        (6, "sphere homology", c6_homology),
        (7, "join of nerves", c7_nerve_join),
        (8, "helly", c8_helly),
        (9, "swelling", c9_swelling),
        (10, "bounds", c10_bounds),
        (11, "full suite", c11_all),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let o = run();
        let known = KNOWN_RED.contains(&id);
        let tag = match (o.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL [known]",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("{tag} criterion {id} ({name}): {}", o.detail);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    }
}
