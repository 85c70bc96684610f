//! Whole-group checks. The group and its named classes are built once and
//! shared by every test in this file.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use delpezzo_core::class_data::{ClassData, POSSIBLE_TRACES};
use delpezzo_core::counting::{
    aggregation_check, named_classes, odd_prime_powers_up_to, virtual_character_defects,
    NameResolution,
};
use delpezzo_core::weyl::{
    embed_permutation, sign_decompose, ClassTable, WeylElement, WeylGroup, GROUP_ORDER,
    SP62_ORDER,
};

struct Fixture {
    group: WeylGroup,
    table: ClassTable,
    resolution: NameResolution,
    data: ClassData,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let data = ClassData::embedded().unwrap();
        let group = WeylGroup::enumerate().unwrap();
        let (table, resolution) = named_classes(&group, &data).unwrap();
        Fixture { group, table, resolution, data }
    })
}

#[test]
fn group_order_and_center() {
    let f = fixture();
    assert_eq!(f.group.order(), GROUP_ORDER);
    assert!(f.group.contains(&WeylElement::negative_identity()));
    assert_eq!(WeylElement::identity().trace_pic(), 8);
}

#[test]
fn class_structure() {
    let f = fixture();
    let classes = f.table.classes();
    assert_eq!(classes.len(), 60);
    assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), GROUP_ORDER);
    let positive: usize = classes.iter().filter(|c| c.sign == 1).map(|c| c.size).sum();
    assert_eq!(positive, SP62_ORDER);
    for (i, c) in classes.iter().enumerate() {
        let n = &classes[c.negated];
        assert_ne!(c.negated, i);
        assert_eq!(n.negated, i);
        assert_eq!((n.size, n.trace_std, n.sign), (c.size, -c.trace_std, -c.sign));
        assert_eq!(GROUP_ORDER % c.size, 0);
    }
    let traces: BTreeSet<i64> = classes.iter().map(|c| c.trace_pic()).collect();
    assert_eq!(traces, POSSIBLE_TRACES.into_iter().collect());
}

#[test]
fn names_match_the_tables() {
    let f = fixture();
    assert!(f.table.names_resolved());
    assert_eq!(f.resolution.candidates, 32);
    assert_eq!(f.resolution.character_survivors, 1);
    let report = f.table.report();
    for rec in &f.data.classes {
        let c = report.by_name(&rec.name).unwrap();
        assert_eq!(c.order, rec.order, "{}", rec.name);
        assert!(report.by_name(&format!("-{}", rec.name)).is_some());
    }
    let expect = |name: &str, size: usize, trace: i64| {
        let c = report.by_name(name).unwrap();
        assert_eq!((c.size, c.trace_std), (size, trace), "{name}");
    };
    expect("1A", 1, 7);
    expect("2A", 63, -5);
    expect("2C", 945, 3);
    expect("4B", 7560, 1);
    expect("6A", 10080, -2);
    expect("6E", 40320, 1);
    expect("8A", 90720, -1);
    expect("12A", 60480, -2);
    expect("15A", 96768, -1);
}

#[test]
fn aggregation_identity_holds() {
    let f = fixture();
    let report = f.table.report();
    let agg = aggregation_check(&f.data, &report, &odd_prime_powers_up_to(1000)).unwrap();
    assert!(agg.passed());
    assert!(virtual_character_defects(&f.data, &report).unwrap().is_empty());
    let total: usize = agg.rows.iter().flat_map(|r| &r.contributors).map(|c| c.size).sum();
    assert_eq!(total, GROUP_ORDER);
}

#[test]
fn identification() {
    let f = fixture();
    let id = |w: &WeylElement| f.table.identify_class(&f.group, w).unwrap();
    assert_eq!(id(&WeylElement::identity()), "1A");
    assert_eq!(id(&WeylElement::negative_identity()), "-1A");
    assert_eq!(id(&embed_permutation(&[2, 3, 4, 5, 6, 7, 1]).unwrap()), "7A");
    assert_eq!(id(&embed_permutation(&[2, 1, 4, 3, 5, 6, 7]).unwrap()), "2C");
    assert_eq!(id(&embed_permutation(&[2, 3, 1, 5, 6, 4, 7]).unwrap()), "3C");
    let transposition = embed_permutation(&[2, 1, 3, 4, 5, 6, 7]).unwrap();
    assert_eq!(transposition.trace_pic(), 6);
    assert_eq!(id(&transposition), "-2A");
}

#[test]
fn sign_decomposition_on_classes() {
    let f = fixture();
    for c in f.table.classes() {
        let w = c.representative.to_element();
        let (pos, sign) = sign_decompose(&w);
        assert_eq!(sign, c.sign);
        assert_eq!(pos.sign(), 1);
        assert_eq!(sign_decompose(&w.negate()).0, pos);
        assert_eq!(f.table.identify_class(&f.group, &pos).unwrap(), c.unsigned_name());
    }
}

#[test]
fn twisted_oracle_small_cycle_types() {
    use delpezzo_core::counting::OddPrimePower;
    use delpezzo_core::oracle::{run_twisted, CycleType, DEFAULT_BUDGET};
    let f = fixture();
    let q3 = OddPrimePower::new(3).unwrap();
    for (ct, class, count) in [
        ("3,3,1", "3C", 60),
        ("3,2,1,1", "-6A", 120),
        ("6,1", "-6G", 676),
        ("2,2,1,1,1", "2C", 0),
    ] {
        let ct: CycleType = ct.parse().unwrap();
        let run = run_twisted(&f.data, &f.group, &f.table, &ct, q3, DEFAULT_BUDGET).unwrap();
        assert_eq!(run.class_name, class, "{ct}");
        assert_eq!(run.orbit_count, count, "{ct}");
        assert!(run.matches, "{ct}");
        assert_eq!(run.raw_count % 5616, 0);
    }
    let ct: CycleType = "2,2,2,1".parse().unwrap();
    let run = run_twisted(&f.data, &f.group, &f.table, &ct, q3, DEFAULT_BUDGET).unwrap();
    assert!(run.matches, "{run:?}");
    assert!(run.class_name.starts_with("-2"));
}

#[test]
fn report_identification_matches_group() {
    let f = fixture();
    let report = f.table.report();
    for sigma in [
        vec![2, 3, 4, 5, 6, 1, 7],
        vec![2, 1, 4, 3, 6, 5, 7],
        vec![2, 3, 1, 5, 4, 6, 7],
        vec![2, 3, 4, 1, 6, 5, 7],
        vec![2, 1, 3, 4, 5, 6, 7],
    ] {
        let w = embed_permutation(&sigma).unwrap();
        assert_eq!(report.identify(&w).unwrap().name, f.table.identify_class(&f.group, &w).unwrap());
    }
    for c in f.table.classes() {
        let w = c.representative.to_element();
        assert_eq!(report.identify(&w).unwrap().name, c.name);
    }
}
