//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact. Runtime limits are pinned per criterion and
//! count as failures when exceeded. A criterion listed in `KNOWN_RED` is
//! expected to fail for the reason given; the run fails if any other
//! criterion fails or if a known-red one starts passing.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use delpezzo_core::oracle::{count_identity, run_twisted, DEFAULT_BUDGET};
use delpezzo_core::picard::{RootFamily, NUM_POSITIVE_ROOTS};
use delpezzo_core::weyl::{GROUP_ORDER, SP62_ORDER};
use delpezzo_core::{
    aggregation_check, count_by_trace, evaluate_class_count, named_classes,
    odd_prime_powers_up_to, surface_point_count, zero_sets, ClassData, ClassReport, ClassTable,
    CycleType, OddPrimePower, RootSystem, WeylGroup, POSSIBLE_TRACES,
};
use num_bigint::BigInt;

/// Criteria expected to fail, with the reason.
const KNOWN_RED: [(u32, &str); 1] = [(
    4,
    "the class row +-2C carries the factor (q - 3) and vanishes at q = 3, which the published \
     exception list omits; brute force over F_3 for the permutation (12)(34), which lies in 2C, \
     also finds 0 configurations, so the table is kept as printed",
)];

const SWEEP_LIMIT: u64 = 1000;
const IDENTITY_COUNTS: [(u64, u64); 6] =
    [(3, 0), (5, 0), (7, 0), (9, 240), (11, 8640), (13, 90720)];
const TWISTED_AT_3: [&str; 4] = ["7", "6,1", "3,3,1", "2,2,2,1"];
const PGL3_F3: u128 = 5616;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

struct Shared {
    data: ClassData,
    group: Option<(WeylGroup, ClassTable, ClassReport)>,
}

impl Shared {
    fn group(&mut self) -> &(WeylGroup, ClassTable, ClassReport) {
        if self.group.is_none() {
            let group = WeylGroup::enumerate().expect("group enumerates");
            let (table, _) = named_classes(&group, &self.data).expect("class names resolve");
            let report = table.report();
            self.group = Some((group, table, report));
        }
        self.group.as_ref().unwrap()
    }
}

fn data_integrity(s: &mut Shared) -> Outcome {
    let d = &s.data;
    if let Err(e) = d.validate() {
        return outcome(false, e.to_string());
    }
    let expanded_ok = d.classes.len() == 30
        && d.classes.iter().all(|c| c.table1_poly.factored.expand() == c.table1_poly.expanded);
    let row = |n: &str| d.class_record(n).unwrap().table1_poly.expanded.clone();
    let trace = |a: i64| d.trace_record(a).unwrap().table2_poly.expanded.clone();
    let checks = [
        ("30 class rows expand", expanded_ok),
        ("4C = 4E", row("4C") == row("4E")),
        ("trace 0 = trace 2", trace(0) == trace(2)),
        ("trace -6 = 1A", trace(-6) == row("1A")),
        ("trace 8 = 1A", trace(8) == row("1A")),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        if failed.is_empty() { checks.map(|c| c.0).join(", ") } else { format!("failed: {failed:?}") },
    )
}

fn group_construction(s: &mut Shared) -> Outcome {
    let roots = RootSystem::get();
    let mut families = [0usize; 3];
    for i in 0..NUM_POSITIVE_ROOTS {
        families[match roots.family(i) {
            RootFamily::Difference => 0,
            RootFamily::Line => 1,
            RootFamily::Conic => 2,
        }] += 1;
    }
    let (group, table, _) = s.group();
    let classes = table.classes();
    let paired = classes.iter().enumerate().all(|(i, c)| {
        let n = &classes[c.negated];
        c.negated != i && n.negated == i && n.size == c.size && n.trace_std == -c.trace_std
    });
    let total: usize = classes.iter().map(|c| c.size).sum();
    let det_one: usize = classes.iter().filter(|c| c.sign == 1).map(|c| c.size).sum();
    let passed = group.order() == GROUP_ORDER
        && roots.roots().len() == 126
        && families == [21, 35, 7]
        && classes.len() == 60
        && paired
        && total == GROUP_ORDER
        && det_one == SP62_ORDER;
    outcome(
        passed,
        format!(
            "{} elements, {} roots, positive families {families:?}, {} classes paired={paired}, \
             sizes sum {total}, det-one subgroup {det_one}",
            group.order(),
            roots.roots().len(),
            classes.len()
        ),
    )
}

fn aggregation_identity(s: &mut Shared) -> Outcome {
    let data = s.data.clone();
    let (_, _, report) = s.group();
    let agg = match aggregation_check(&data, report, &[]) {
        Ok(a) => a,
        Err(e) => return outcome(false, e.to_string()),
    };
    let contributors = |a: i64| -> Vec<(String, usize)> {
        agg.rows
            .iter()
            .find(|r| r.trace == a)
            .map(|r| r.contributors.iter().map(|c| (c.class.clone(), c.size)).collect())
            .unwrap_or_default()
    };
    let anchors = contributors(-6) == [("-1A".to_string(), 1)]
        && contributors(-4) == [("2A".to_string(), 63)]
        && contributors(-3) == [("-3A".to_string(), 672)];
    let identities = agg.rows.iter().filter(|r| r.polynomial_identity).count();
    outcome(
        identities == 13 && anchors,
        format!("{identities}/13 trace rows equal as polynomials; anchors 1A/2A/3A ok={anchors}"),
    )
}

fn existence_corollaries(s: &mut Shared) -> Outcome {
    let z = zero_sets(&s.data, &odd_prime_powers_up_to(SWEEP_LIMIT)).unwrap();
    let expect_classes: BTreeMap<String, Vec<u64>> = [
        ("1A", vec![3, 5, 7]),
        ("2A", vec![3]),
        ("2B", vec![3, 5]),
    ]
    .into_iter()
    .map(|(c, q)| (c.to_string(), q))
    .collect();
    let expect_traces: BTreeMap<i64, Vec<u64>> =
        [(-6, vec![3, 5, 7]), (-4, vec![3]), (6, vec![3]), (8, vec![3, 5, 7])].into();
    let classes_ok = z.classes == expect_classes;
    let traces_ok = z.traces == expect_traces;
    outcome(
        classes_ok && traces_ok,
        format!(
            "class zeros {:?} (match={classes_ok}), trace zeros match={traces_ok}",
            z.classes
        ),
    )
}

fn symmetry_positivity(s: &mut Shared) -> Outcome {
    let mut evaluations = 0usize;
    for q in odd_prime_powers_up_to(SWEEP_LIMIT) {
        for a in POSSIBLE_TRACES {
            // negative values are rejected by the evaluators
            let (Ok(x), Ok(y)) = (count_by_trace(&s.data, a, q), count_by_trace(&s.data, 2 - a, q))
            else {
                return outcome(false, format!("negative trace count at a={a}, q={q}"));
            };
            if x != y {
                return outcome(false, format!("trace {a} and {} differ at q={q}", 2 - a));
            }
            evaluations += 1;
        }
        for c in &s.data.classes {
            if evaluate_class_count(&s.data, &c.name, q).is_err() {
                return outcome(false, format!("negative count for {} at q={q}", c.name));
            }
            evaluations += 1;
        }
    }
    outcome(true, format!("{evaluations} evaluations nonnegative, trace table symmetric about 1"))
}

fn identity_oracle(s: &mut Shared) -> Outcome {
    let mut got = Vec::new();
    let mut passed = true;
    for (q, expected) in IDENTITY_COUNTS {
        let pq = OddPrimePower::new(q).unwrap();
        let n = match count_identity(pq, DEFAULT_BUDGET) {
            Ok(r) => r.orbit_count,
            Err(e) => return outcome(false, format!("q={q}: {e}")),
        };
        let table = evaluate_class_count(&s.data, "1A", pq).unwrap();
        passed &= n == expected && table == n.into();
        got.push(format!("q={q}: {n}"));
    }
    outcome(passed, got.join(", "))
}

fn twisted_oracle(s: &mut Shared) -> Outcome {
    let data = s.data.clone();
    let (group, table, _) = s.group();
    let q3 = OddPrimePower::new(3).unwrap();
    let mut got = Vec::new();
    let mut passed = true;
    for ct in TWISTED_AT_3 {
        let ct: CycleType = ct.parse().unwrap();
        let run = match run_twisted(&data, group, table, &ct, q3, DEFAULT_BUDGET) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("{ct}: {e}")),
        };
        let seven_ok = ct.parts() != [7] || (run.class_name.trim_start_matches('-') == "7A" && run.orbit_count == 756);
        passed &= run.pgl3_order == PGL3_F3 && run.raw_count % PGL3_F3 == 0 && run.matches && seven_ok;
        got.push(format!("{ct} -> {} {} (table {})", run.class_name, run.orbit_count, run.expected));
    }
    outcome(passed, got.join(", "))
}

fn point_counts(s: &mut Shared) -> Outcome {
    let spot = surface_point_count(8, 9) == BigInt::from(154) && surface_point_count(-6, 9) == BigInt::from(28);
    let data = s.data.clone();
    let (_, _, report) = s.group();
    let mut checked = 0usize;
    for q in odd_prime_powers_up_to(SWEEP_LIMIT) {
        for c in &report.classes {
            let n = evaluate_class_count(&data, &c.name, q).unwrap();
            if n > 0u32.into() {
                let pts = surface_point_count(c.trace_pic, q.q);
                if pts < BigInt::from(0) {
                    return outcome(false, format!("{} at q={q}: {pts} points", c.name));
                }
                checked += 1;
            }
        }
    }
    outcome(spot, format!("spot values 154 and 28; {checked} realized (class, q) pairs with nonnegative point count"))
}

fn golden_files(_: &mut Shared) -> Outcome {
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases = [
        (vec!["table", "--q", "9", "--by", "class", "--format", "json"], "table_q9_class.json"),
        (vec!["existence", "--q", "3", "--format", "json"], "existence_q3.json"),
    ];
    let mut details = Vec::new();
    let mut passed = true;
    for (args, file) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_delpezzo"))
            .args(&args)
            .arg("--no-cache")
            .output()
            .expect("binary runs");
        let expected = std::fs::read(golden.join(file)).expect("golden file");
        let same = out.status.success() && out.stdout == expected;
        passed &= same;
        details.push(format!("{file}: {}", if same { "identical" } else { "differs" }));
    }
    outcome(passed, details.join(", "))
}

type Check = fn(&mut Shared) -> Outcome;

fn main() -> ExitCode {
    // `cargo test -- <filter>` passes arguments through; this suite always
    // runs in full unless asked to list.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let criteria: [(u32, &str, Duration, Check); 9] = [
        (1, "data integrity", Duration::from_secs(1), data_integrity),
        (2, "group construction", Duration::from_secs(300), group_construction),
        (3, "aggregation identity", Duration::from_secs(1), aggregation_identity),
        (4, "existence corollaries", Duration::from_secs(1), existence_corollaries),
        (5, "symmetry and positivity", Duration::from_secs(1), symmetry_positivity),
        (6, "identity oracle", Duration::from_secs(600), identity_oracle),
        (7, "twisted oracle at q=3", Duration::from_secs(900), twisted_oracle),
        (8, "point counts", Duration::from_secs(1), point_counts),
        (9, "CLI golden files", Duration::from_secs(60), golden_files),
    ];
    let mut shared = Shared {
        data: ClassData::embedded().expect("embedded data parses"),
        group: None,
    };
    let mut unexpected = Vec::new();
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let mut o = check(&mut shared);
        let elapsed = start.elapsed();
        if elapsed > limit {
            o.passed = false;
            o.detail = format!("{} [over time limit {limit:?}]", o.detail);
        }
        let known = KNOWN_RED.iter().find(|k| k.0 == id);
        println!(
            "criterion {id} {} {name} ({:.2}s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            o.detail
        );
        match (o.passed, known) {
            (false, Some((_, why))) => println!("    known failure: {why}"),
            (false, None) => unexpected.push(format!("criterion {id} failed")),
            (true, Some(_)) => unexpected.push(format!("criterion {id} passed but is listed as known red")),
            (true, None) => {}
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: ok");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {}", unexpected.join("; "));
        ExitCode::FAILURE
    }
}
