//! Evaluating the class and trace tables, the aggregation identity linking
//! them, and the existence exceptions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::class_data::{ClassData, POSSIBLE_TRACES};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::poly::IntPoly;
use crate::weyl::{ClassReport, ClassTable, LetterAssignment, WeylGroup, SP62_ORDER};

/// `q = p^k` with `p` an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OddPrimePower {
    pub q: u64,
    pub p: u64,
    pub k: u32,
}

impl OddPrimePower {
    /// Deterministic trial factorization.
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q % 2 == 0 {
            return Err(Error::NotOddPrimePower(q));
        }
        let mut p = 3;
        while p * p <= q && q % p != 0 {
            p += 2;
        }
        if q % p != 0 {
            p = q;
        }
        debug_assert!(is_prime(p));
        let (mut rest, mut k) = (q, 0);
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::NotOddPrimePower(q));
        }
        Ok(OddPrimePower { q, p, k })
    }

    pub fn value(&self) -> u64 {
        self.q
    }
}

impl fmt::Display for OddPrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// All odd prime powers `<= limit`, increasing.
pub fn odd_prime_powers_up_to(limit: u64) -> Vec<OddPrimePower> {
    (3..=limit).filter_map(|q| OddPrimePower::new(q).ok()).collect()
}

fn to_count(v: BigInt, what: &str) -> Result<BigUint> {
    v.to_biguint()
        .ok_or_else(|| Error::Internal(format!("negative count for {what}")))
}

/// Number of marked surfaces over `F_q` whose Frobenius acts as an element
/// of the class `name`; the sign of the label does not matter.
pub fn evaluate_class_count(data: &ClassData, name: &str, q: OddPrimePower) -> Result<BigUint> {
    let rec = data.class_record(name)?;
    to_count(rec.table1_poly.expanded.eval(&BigInt::from(q.q)), name)
}

/// Number of surfaces over `F_q` whose Frobenius has trace `a` on `Pic`.
pub fn count_by_trace(data: &ClassData, a: i64, q: OddPrimePower) -> Result<BigUint> {
    let rec = data.trace_record(a)?;
    to_count(rec.table2_poly.expanded.eval(&BigInt::from(q.q)), &format!("trace {a}"))
}

/// `|X(F_q)| = q^2 + a q + 1`.
pub fn surface_point_count(a: i64, q: u64) -> BigInt {
    let q = BigInt::from(q);
    &q * &q + BigInt::from(a) * &q + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exceptions {
    pub q: u64,
    /// Signed labels with no surface over `F_q`.
    pub class_exceptions: Vec<String>,
    /// Traces with no surface over `F_q`.
    pub trace_exceptions: Vec<i64>,
}

pub fn existence_exceptions(data: &ClassData, q: OddPrimePower) -> Result<Exceptions> {
    let mut class_exceptions = Vec::new();
    for label in data.signed_labels() {
        if evaluate_class_count(data, &label, q)?.is_zero() {
            class_exceptions.push(label);
        }
    }
    let mut trace_exceptions = Vec::new();
    for a in POSSIBLE_TRACES {
        if count_by_trace(data, a, q)?.is_zero() {
            trace_exceptions.push(a);
        }
    }
    Ok(Exceptions {
        q: q.q,
        class_exceptions,
        trace_exceptions,
    })
}

/// Values of `q` at which each row vanishes; rows that never vanish are
/// omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ZeroSets {
    /// Keyed by unsigned label; `X` and `-X` share a row.
    pub classes: BTreeMap<String, Vec<u64>>,
    pub traces: BTreeMap<i64, Vec<u64>>,
}

pub fn zero_sets(data: &ClassData, qs: &[OddPrimePower]) -> Result<ZeroSets> {
    let mut out = ZeroSets::default();
    for &q in qs {
        for c in &data.classes {
            if evaluate_class_count(data, &c.name, q)?.is_zero() {
                out.classes.entry(c.name.clone()).or_default().push(q.q);
            }
        }
        for a in POSSIBLE_TRACES {
            if count_by_trace(data, a, q)?.is_zero() {
                out.traces.entry(a).or_default().push(q.q);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Contribution {
    pub class: String,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AggregationRow {
    pub trace: i64,
    pub contributors: Vec<Contribution>,
    /// `sum size * class polynomial`, low degree first.
    pub aggregated: IntPoly,
    pub expected: IntPoly,
    pub polynomial_identity: bool,
    /// Values of `q` in the sweep where the two sides differ.
    pub sweep_failures: Vec<u64>,
}

impl AggregationRow {
    pub fn passed(&self) -> bool {
        self.polynomial_identity && self.sweep_failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AggregationReport {
    pub rows: Vec<AggregationRow>,
    pub sweep_size: usize,
}

impl AggregationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(AggregationRow::passed)
    }
}

fn aggregate(data: &ClassData, report: &ClassReport) -> Result<BTreeMap<i64, (IntPoly, Vec<Contribution>)>> {
    let mut sums: BTreeMap<i64, (IntPoly, Vec<Contribution>)> = POSSIBLE_TRACES
        .iter()
        .map(|&a| (a, (IntPoly::zero(), Vec::new())))
        .collect();
    for c in &report.classes {
        let poly = &data.class_record(&c.name)?.table1_poly.expanded;
        let size = i64::try_from(c.size).map_err(|_| Error::Overflow("class size"))?;
        let entry = sums.get_mut(&c.trace_pic).ok_or(Error::UnknownTrace(c.trace_pic))?;
        entry.0 = &entry.0 + &poly.scale(size);
        entry.1.push(Contribution {
            class: c.name.clone(),
            size: c.size,
        });
    }
    Ok(sums)
}

/// For every trace `a`: the sum over signed classes of Picard trace `a` of
/// class size times class polynomial equals the trace polynomial, both as
/// polynomials and at every `q` of the sweep.
pub fn aggregation_check(
    data: &ClassData,
    report: &ClassReport,
    sweep: &[OddPrimePower],
) -> Result<AggregationReport> {
    let sums = aggregate(data, report)?;
    let mut rows = Vec::new();
    for (a, (aggregated, contributors)) in sums {
        let expected = data.trace_record(a)?.table2_poly.expanded.clone();
        let sweep_failures = sweep
            .iter()
            .filter(|q| {
                let q = BigInt::from(q.q);
                aggregated.eval(&q) != expected.eval(&q)
            })
            .map(|q| q.q)
            .collect();
        rows.push(AggregationRow {
            trace: a,
            polynomial_identity: aggregated == expected,
            contributors,
            aggregated,
            expected,
            sweep_failures,
        });
    }
    Ok(AggregationReport {
        rows,
        sweep_size: sweep.len(),
    })
}

/// Elementary symmetric functions `e_0..e_7` of the eigenvalues (traces
/// on exterior powers) and power sums `p_1..p_max` (Adams operations).
fn character_values(char_poly: &[i64], max_power: usize) -> (Vec<i64>, Vec<i64>) {
    let n = char_poly.len() - 1;
    let e: Vec<i64> = (0..=n)
        .map(|k| if k % 2 == 0 { 1 } else { -1 } * char_poly[n - k])
        .collect();
    let mut p = vec![n as i64];
    for m in 1..=max_power {
        let mut s = if m <= n {
            let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
            sign * m as i64 * e[m]
        } else {
            0
        };
        for i in 1..m.min(n + 1) {
            let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
            s += sign * e[i] * p[m - i];
        }
        p.push(s);
    }
    (e, p)
}

/// Checks that each `q^j` coefficient of the class table, read as a class
/// function on `Sp(6,2)`, has integral inner product with the exterior
/// powers and Adams operations of the standard character. Returns the
/// failing `(j, character)` pairs.
pub fn virtual_character_defects(data: &ClassData, report: &ClassReport) -> Result<Vec<(usize, String)>> {
    let positive: Vec<_> = report.classes.iter().filter(|c| c.sign == 1).collect();
    let mut tests: Vec<(String, Vec<i64>)> = Vec::new();
    let values: Vec<_> = positive
        .iter()
        .map(|c| character_values(&c.char_poly_std, 30))
        .collect();
    for k in 0..=7 {
        tests.push((format!("Λ^{k}"), values.iter().map(|(e, _)| e[k]).collect()));
    }
    for m in 1..=30 {
        tests.push((format!("ψ^{m}"), values.iter().map(|(_, p)| p[m]).collect()));
    }
    let polys = positive
        .iter()
        .map(|c| data.class_record(&c.name).map(|r| &r.table1_poly.expanded))
        .collect::<Result<Vec<_>>>()?;
    let mut defects = Vec::new();
    for j in 0..=6 {
        for (name, chi) in &tests {
            let sum: i128 = positive
                .iter()
                .zip(&polys)
                .zip(chi)
                .map(|((c, p), &x)| {
                    c.size as i128 * p.coeffs().get(j).copied().unwrap_or(0) as i128 * x as i128
                })
                .sum();
            if sum % SP62_ORDER as i128 != 0 {
                defects.push((j, name.clone()));
            }
        }
    }
    Ok(defects)
}

#[derive(Clone, Debug, Serialize)]
pub struct NameResolution {
    /// Groups of positive classes of equal order and size whose letters
    /// were permuted.
    pub tie_groups: Vec<Vec<String>>,
    pub candidates: usize,
    pub aggregation_survivors: usize,
    pub character_survivors: usize,
    /// Final unsigned names with class size and standard trace.
    pub assignment: Vec<(String, usize, i64)>,
}

/// Assigns letters: ascending class size within each element order, with
/// letters permuted inside groups of equal size until the aggregation
/// identity holds and every table coefficient is a virtual character.
/// Candidates giving identical polynomials to every class count as one.
pub fn resolve_class_names(table: &mut ClassTable, data: &ClassData) -> Result<NameResolution> {
    let default = table.default_letters();
    let classes = table.classes();
    // Default list is ordered by (order, size); split into tie runs.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (pos, (idx, _)) in default.iter().enumerate() {
        let c = &classes[*idx];
        match pos.checked_sub(1).map(|p| &classes[default[p].0]) {
            Some(prev) if prev.order == c.order && prev.size == c.size => {
                groups.last_mut().expect("nonempty").push(pos)
            }
            _ => groups.push(vec![pos]),
        }
    }
    let ties: Vec<Vec<usize>> = groups.into_iter().filter(|g| g.len() > 1).collect();
    let tie_groups = ties
        .iter()
        .map(|g| g.iter().map(|&p| default[p].1.clone()).collect())
        .collect();

    let per_group: Vec<Vec<Vec<usize>>> = ties.iter().map(|g| permutations(g)).collect();
    let mut candidates = 0;
    let mut aggregation_survivors = 0;
    let mut survivors: Vec<(LetterAssignment, Vec<IntPoly>)> = Vec::new();
    let mut choice = vec![0usize; per_group.len()];
    loop {
        candidates += 1;
        let mut assignment = default.clone();
        for (g, (&c, perms)) in ties.iter().zip(choice.iter().zip(&per_group)) {
            for (&slot, &from) in g.iter().zip(&perms[c]) {
                assignment[slot].1 = default[from].1.clone();
            }
        }
        table.apply_names(&assignment);
        let report = table.report();
        let agg = aggregation_check(data, &report, &[])?;
        if agg.passed() {
            aggregation_survivors += 1;
            if virtual_character_defects(data, &report)?.is_empty() {
                let polys = assignment
                    .iter()
                    .map(|(_, name)| data.class_record(name).map(|r| r.table1_poly.expanded.clone()))
                    .collect::<Result<Vec<_>>>()?;
                if !survivors.iter().any(|(_, p)| *p == polys) {
                    survivors.push((assignment, polys));
                }
            }
        }
        // odometer over the tie-group permutations
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < per_group[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    let character_survivors = survivors.len();
    match survivors.len() {
        1 => {
            let (assignment, _) = survivors.pop().expect("one survivor");
            table.apply_names(&assignment);
            table.set_names_resolved(true);
            let classes = table.classes();
            Ok(NameResolution {
                tie_groups,
                candidates,
                aggregation_survivors,
                character_survivors,
                assignment: assignment
                    .iter()
                    .map(|(i, n)| (n.clone(), classes[*i].size, classes[*i].trace_std))
                    .collect(),
            })
        }
        n => {
            table.apply_names(&default);
            table.set_names_resolved(false);
            Err(Error::LetterAssignment(format!(
                "{n} inequivalent assignments survive ({aggregation_survivors} of {candidates} \
                 pass the aggregation identity); tie groups: {tie_groups:?}"
            )))
        }
    }
}

/// Conjugacy classes of `group` with validated letters.
pub fn named_classes(group: &WeylGroup, data: &ClassData) -> Result<(ClassTable, NameResolution)> {
    let mut table = group.conjugacy_classes();
    let resolution = resolve_class_names(&mut table, data)?;
    Ok((table, resolution))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64) -> OddPrimePower {
        OddPrimePower::new(n).unwrap()
    }

    #[test]
    fn prime_powers() {
        assert_eq!(q(9), OddPrimePower { q: 9, p: 3, k: 2 });
        assert_eq!(q(3125), OddPrimePower { q: 3125, p: 5, k: 5 });
        assert_eq!(q(997).k, 1);
        for bad in [0, 1, 2, 4, 15, 45, 1000, 1 << 20] {
            assert!(matches!(OddPrimePower::new(bad), Err(Error::NotOddPrimePower(_))));
        }
        assert_eq!(odd_prime_powers_up_to(30).iter().map(|x| x.q).collect::<Vec<_>>(),
            vec![3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29]);
    }

    #[test]
    fn class_counts() {
        let data = ClassData::embedded().unwrap();
        let c = |name, n| evaluate_class_count(&data, name, q(n)).unwrap();
        assert_eq!(c("1A", 9), BigUint::from(240u32));
        assert_eq!(c("-1A", 9), BigUint::from(240u32));
        assert_eq!(c("1A", 3), BigUint::zero());
        assert_eq!(c("7A", 3), BigUint::from(756u32));
        assert_eq!(c("2A", 5), BigUint::from(240u32));
        assert!(evaluate_class_count(&data, "1A", OddPrimePower { q: 2, p: 2, k: 1 }).is_ok());
        assert!(evaluate_class_count(&data, "7B", q(3)).is_err());
    }

    #[test]
    fn trace_counts() {
        let data = ClassData::embedded().unwrap();
        assert_eq!(count_by_trace(&data, -4, q(5)).unwrap(), BigUint::from(15120u32));
        for n in [3, 5, 7, 9, 11, 13, 25, 27, 243] {
            assert_eq!(
                count_by_trace(&data, -6, q(n)).unwrap(),
                evaluate_class_count(&data, "-1A", q(n)).unwrap()
            );
            for a in POSSIBLE_TRACES {
                assert_eq!(
                    count_by_trace(&data, a, q(n)).unwrap(),
                    count_by_trace(&data, 2 - a, q(n)).unwrap()
                );
            }
        }
        assert!(matches!(count_by_trace(&data, 7, q(3)), Err(Error::UnknownTrace(7))));
    }

    #[test]
    fn point_counts() {
        assert_eq!(surface_point_count(8, 9), BigInt::from(154));
        assert_eq!(surface_point_count(-6, 9), BigInt::from(28));
        assert_eq!(surface_point_count(0, 11), BigInt::from(122));
    }

    #[test]
    fn exceptions() {
        let data = ClassData::embedded().unwrap();
        let e = existence_exceptions(&data, q(3)).unwrap();
        // The printed 2C row carries the factor q - 3.
        assert_eq!(e.class_exceptions, ["1A", "-1A", "2A", "-2A", "2B", "-2B", "2C", "-2C"]);
        assert_eq!(e.trace_exceptions, [-6, -4, 6, 8]);
        let e = existence_exceptions(&data, q(7)).unwrap();
        assert_eq!(e.class_exceptions, ["1A", "-1A"]);
        assert_eq!(e.trace_exceptions, [-6, 8]);
        let e = existence_exceptions(&data, q(9)).unwrap();
        assert!(e.class_exceptions.is_empty() && e.trace_exceptions.is_empty());
    }

    #[test]
    fn zero_sweep() {
        let data = ClassData::embedded().unwrap();
        let z = zero_sets(&data, &odd_prime_powers_up_to(1000)).unwrap();
        let classes: Vec<_> = z.classes.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        assert_eq!(
            classes,
            [("1A", vec![3, 5, 7]), ("2A", vec![3]), ("2B", vec![3, 5]), ("2C", vec![3])]
        );
        let traces: Vec<_> = z.traces.into_iter().collect();
        assert_eq!(
            traces,
            [(-6, vec![3, 5, 7]), (-4, vec![3]), (6, vec![3]), (8, vec![3, 5, 7])]
        );
    }

    #[test]
    fn character_values_of_identity() {
        // (t - 1)^7
        let cp = IntPoly::new(vec![-1, 1]).pow(7);
        let (e, p) = character_values(cp.coeffs(), 5);
        assert_eq!(e, vec![1, 7, 21, 35, 35, 21, 7, 1]);
        assert_eq!(p, vec![7; 6]);
        // (t + 1)^7: eigenvalue -1
        let cp = IntPoly::new(vec![1, 1]).pow(7);
        let (_, p) = character_values(cp.coeffs(), 4);
        assert_eq!(p, vec![7, -7, 7, -7, 7]);
    }

    #[test]
    fn permutation_helper() {
        assert_eq!(permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(permutations(&[4]), vec![vec![4]]);
    }
}
