//! Brute-force counts of 7-point configurations in general position in the
//! projective plane, with Frobenius permuting the points, modulo `PGL3(F_q)`.
//!
//! All points live in one field `F_{q^L}` with `L` the lcm of the cycle
//! lengths; the points of `P^2(F_{q^l})` are the ones fixed by the `l`-th
//! power of `x -> x^q`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::class_data::ClassData;
use crate::counting::{evaluate_class_count, OddPrimePower};
use crate::error::{Error, Result};
use crate::field::{FiniteField, Fe, DEFAULT_MAX_FIELD_SIZE};
use crate::weyl::{embed_permutation, ClassTable, WeylGroup};

/// Default limit on the number of enumerated candidate tuples.
pub const DEFAULT_BUDGET: u128 = 20_000_000;

/// A point of the projective plane with its first nonzero coordinate 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint(pub [Fe; 3]);

impl ProjectivePoint {
    /// Normalizes `c`; `None` if all coordinates vanish.
    pub fn new(f: &FiniteField, c: [Fe; 3]) -> Option<Self> {
        let lead = c.iter().copied().find(|x| x.0 != 0)?;
        let inv = f.inv(lead)?;
        Some(ProjectivePoint(c.map(|x| f.mul(x, inv))))
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.0
    }

    fn map(&self, table: &[Fe]) -> ProjectivePoint {
        ProjectivePoint(self.0.map(|x| table[x.0 as usize]))
    }
}

/// All points with coordinates in `sub` (which must contain 0 and 1), in
/// lexicographic order of normalized coordinates.
pub fn points_over(sub: &[Fe]) -> Vec<ProjectivePoint> {
    let (zero, one) = (Fe(0), Fe(1));
    let mut out = Vec::with_capacity(sub.len() * sub.len() + sub.len() + 1);
    out.push(ProjectivePoint([zero, zero, one]));
    for &a in sub {
        out.push(ProjectivePoint([zero, one, a]));
    }
    for &a in sub {
        for &b in sub {
            out.push(ProjectivePoint([one, a, b]));
        }
    }
    out.sort();
    out
}

/// All points of `P^2(F)`.
pub fn all_points(f: &FiniteField) -> Vec<ProjectivePoint> {
    points_over(&f.elements().collect::<Vec<_>>())
}

#[inline]
fn det3(f: &FiniteField, a: [Fe; 3], b: [Fe; 3], c: [Fe; 3]) -> Fe {
    let m = |x, y| f.mul(x, y);
    let minor = |i: usize, j: usize| f.sub(m(b[i], c[j]), m(b[j], c[i]));
    let t0 = m(a[0], minor(1, 2));
    let t1 = m(a[1], minor(0, 2));
    let t2 = m(a[2], minor(0, 1));
    f.add(f.sub(t0, t1), t2)
}

pub fn collinear(f: &FiniteField, p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> bool {
    det3(f, p.0, q.0, r.0).0 == 0
}

fn veronese(f: &FiniteField, p: &ProjectivePoint) -> [Fe; 6] {
    let [x, y, z] = p.0;
    [
        f.mul(x, x),
        f.mul(y, y),
        f.mul(z, z),
        f.mul(x, y),
        f.mul(x, z),
        f.mul(y, z),
    ]
}

/// Row reduces `rows` in place and returns the pivot column of each
/// pivot row.
fn row_reduce<const C: usize>(f: &FiniteField, rows: &mut [[Fe; C]]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..C {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col].0 != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            let factor = rows[i][col];
            if i != r && factor.0 != 0 {
                for j in 0..C {
                    let t = f.mul(factor, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Whether some nonzero conic passes through all six points.
pub fn six_on_conic(f: &FiniteField, pts: &[ProjectivePoint; 6]) -> bool {
    let mut rows = pts.map(|p| veronese(f, &p));
    row_reduce(f, &mut rows).len() < 6
}

/// Conic test for all seven 6-subsets at once: the 6x7 matrix of Veronese
/// columns must have rank 6 and a kernel vector without zero entries.
fn no_six_on_conic(f: &FiniteField, pts: &[ProjectivePoint; 7]) -> bool {
    let cols = pts.map(|p| veronese(f, &p));
    let mut rows = [[Fe(0); 7]; 6];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..6 {
            rows[i][j] = col[i];
        }
    }
    let pivots = row_reduce(f, &mut rows);
    if pivots.len() < 6 {
        return false;
    }
    let free = (0..7).find(|c| !pivots.contains(c)).expect("one free column");
    rows.iter().all(|row| row[free].0 != 0)
}

/// Pairwise distinct, no three collinear, no six on a conic.
pub fn in_general_position(f: &FiniteField, pts: &[ProjectivePoint; 7]) -> bool {
    no_three_collinear(f, pts) && no_six_on_conic(f, pts)
}

fn no_three_collinear(f: &FiniteField, pts: &[ProjectivePoint]) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return false;
            }
            for k in j + 1..pts.len() {
                if collinear(f, &pts[i], &pts[j], &pts[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Reference version of [`in_general_position`] testing each 6-subset
/// with its own determinant.
pub fn in_general_position_naive(f: &FiniteField, pts: &[ProjectivePoint; 7]) -> bool {
    no_three_collinear(f, pts)
        && (0..7).all(|skip| {
            let six: Vec<_> = (0..7).filter(|&i| i != skip).map(|i| pts[i]).collect();
            !six_on_conic(f, &six.try_into().expect("six points"))
        })
}

/// `|PGL3(F_q)| = q^3 (q^3 - 1)(q^2 - 1)`.
pub fn pgl3_order(q: u64) -> u128 {
    let q = q as u128;
    q.pow(3) * (q.pow(3) - 1) * (q * q - 1)
}

fn plane_size(q: u64, l: usize) -> u128 {
    let ql = (q as u128).pow(l as u32);
    ql * ql + ql + 1
}

/// A partition of 7, parts in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) || parts.iter().sum::<usize>() != 7 {
            return Err(Error::InvalidCycleType(parts));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType(parts))
    }

    pub fn identity() -> Self {
        CycleType(vec![1; 7])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Least common multiple of the parts.
    pub fn lcm(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        self.0.iter().fold(1, |l, &p| l / gcd(l, p) * p)
    }

    /// The representative permutation: cycles on consecutive indices in
    /// the order of the parts, as 1-based images.
    pub fn sigma(&self) -> Vec<usize> {
        let mut images = Vec::with_capacity(7);
        let mut start = 1;
        for &l in &self.0 {
            for i in 0..l {
                images.push(start + (i + 1) % l);
            }
            start += l;
        }
        images
    }

    fn fixed_points(&self) -> usize {
        self.0.iter().filter(|&&p| p == 1).count()
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Accepts `"6,1"`, `"(6,1)"`, `"3 3 1"` and `"1^7"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCycleType(Vec::new());
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for tok in body.split([',', ' ']).filter(|t| !t.is_empty()) {
            match tok.split_once('^') {
                Some((part, rep)) => {
                    let part: usize = part.parse().map_err(|_| bad())?;
                    let rep: usize = rep.parse().map_err(|_| bad())?;
                    parts.extend(std::iter::repeat(part).take(rep));
                }
                None => parts.push(tok.parse().map_err(|_| bad())?),
            }
        }
        CycleType::new(parts)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<CycleType> for String {
    fn from(c: CycleType) -> String {
        c.to_string()
    }
}

/// Size of the raw search space: the product of `|P^2(F_{q^l})|` over the
/// cycles.
pub fn feasibility(cycle_type: &CycleType, q: u64) -> u128 {
    cycle_type.parts().iter().map(|&l| plane_size(q, l)).product()
}

/// Number of tuples actually enumerated: up to three fixed points are
/// moved to coordinate points by `PGL3(F_q)`, the rest range over their
/// planes.
pub fn search_size(cycle_type: &CycleType, q: u64) -> u128 {
    let normalized = cycle_type.fixed_points().min(3);
    let free = cycle_type.parts().len() - normalized;
    cycle_type.parts()[..free].iter().map(|&l| plane_size(q, l)).product()
}

/// Number of ordered triples of `F_q`-points in general position for
/// `normalized` fixed points placed at `(1:0:0), (0:1:0), (0:0:1)`.
fn normalization_factor(q: u64, normalized: usize) -> u128 {
    let q = q as u128;
    [q * q + q + 1, q * q + q, q * q][..normalized].iter().product()
}

fn check_budget(estimate: u128, budget: u128) -> Result<()> {
    if estimate > budget {
        Err(Error::OverBudget { estimate, budget })
    } else {
        Ok(())
    }
}

fn base_field(q: OddPrimePower, extension: usize) -> Result<FiniteField> {
    let k = q.k * extension as u32;
    FiniteField::new(q.p as u32, k, DEFAULT_MAX_FIELD_SIZE)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCount {
    pub q: u64,
    pub search_size: u128,
    /// Ordered 7-tuples of `F_q`-points in general position with the first
    /// four on the standard frame, i.e. `PGL3(F_q)`-orbits.
    pub orbit_count: u64,
    pub wall_time: f64,
}

/// Orbit count for the trivial Frobenius action, with `P1..P4` fixed to
/// the standard frame and `(P5, P6, P7)` enumerated.
pub fn count_identity(q: OddPrimePower, budget: u128) -> Result<IdentityCount> {
    let start = Instant::now();
    let estimate = plane_size(q.q, 1).pow(3);
    check_budget(estimate, budget)?;
    let f = base_field(q, 1)?;
    let pts = all_points(&f);
    let (zero, one) = (Fe(0), Fe(1));
    let frame = [
        ProjectivePoint([one, zero, zero]),
        ProjectivePoint([zero, one, zero]),
        ProjectivePoint([zero, zero, one]),
        ProjectivePoint([one, one, one]),
    ];
    let ok_with = |placed: &[ProjectivePoint], p: &ProjectivePoint| {
        placed.iter().enumerate().all(|(i, a)| {
            a != p && placed[i + 1..].iter().all(|b| !collinear(&f, a, b, p))
        })
    };
    let candidates: Vec<ProjectivePoint> = pts.iter().copied().filter(|p| ok_with(&frame, p)).collect();
    let orbit_count: u64 = candidates
        .par_iter()
        .map(|p5| {
            let mut placed: Vec<ProjectivePoint> = frame.to_vec();
            placed.push(*p5);
            let mut n = 0u64;
            for p6 in &candidates {
                if !ok_with(&placed, p6) {
                    continue;
                }
                placed.push(*p6);
                for p7 in &candidates {
                    let tuple: [ProjectivePoint; 7] = [
                        placed[0], placed[1], placed[2], placed[3], placed[4], placed[5], *p7,
                    ];
                    if in_general_position(&f, &tuple) {
                        n += 1;
                    }
                }
                placed.pop();
            }
            n
        })
        .sum();
    Ok(IdentityCount {
        q: q.q,
        search_size: estimate,
        orbit_count,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedCount {
    pub cycle_type: CycleType,
    /// 1-based images of the representative permutation.
    pub sigma: Vec<usize>,
    pub q: u64,
    pub feasibility: u128,
    pub search_size: u128,
    /// Ordered 7-tuples in general position with `Frob(P_i) = P_sigma(i)`.
    pub raw_count: u128,
    pub pgl3_order: u128,
    pub orbit_count: u128,
    pub wall_time: f64,
}

struct Twisted<'a> {
    f: &'a FiniteField,
    /// `x -> x^q` on the big field.
    frob: Vec<Fe>,
    /// Cycles still to enumerate: length and candidate points.
    cycles: Vec<(usize, &'a [ProjectivePoint])>,
}

impl Twisted<'_> {
    /// Appends the orbit of `p` if it keeps the points distinct with no
    /// three collinear.
    fn push_orbit(&self, placed: &mut Vec<ProjectivePoint>, p: ProjectivePoint, len: usize) -> bool {
        let base = placed.len();
        let mut x = p;
        for _ in 0..len {
            let ok = placed.iter().enumerate().all(|(i, a)| {
                *a != x && placed[i + 1..].iter().all(|b| !collinear(self.f, a, b, &x))
            });
            if !ok {
                placed.truncate(base);
                return false;
            }
            placed.push(x);
            x = x.map(&self.frob);
        }
        if x != p {
            placed.truncate(base);
            return false;
        }
        true
    }

    fn count(&self, placed: &mut Vec<ProjectivePoint>, level: usize) -> u128 {
        if level == self.cycles.len() {
            // push_orbit already ruled out repeated points and collinear triples.
            let tuple: [ProjectivePoint; 7] = placed.as_slice().try_into().expect("seven points");
            return no_six_on_conic(self.f, &tuple) as u128;
        }
        let (len, candidates) = self.cycles[level];
        let mut n = 0;
        for &p in candidates {
            if self.push_orbit(placed, p, len) {
                n += self.count(placed, level + 1);
                placed.truncate(placed.len() - len);
            }
        }
        n
    }
}

/// Counts ordered 7-tuples in general position on which Frobenius acts as
/// the representative permutation of `cycle_type`, and divides by
/// `|PGL3(F_q)|`.
pub fn count_twisted(cycle_type: &CycleType, q: OddPrimePower, budget: u128) -> Result<TwistedCount> {
    let start = Instant::now();
    let search = search_size(cycle_type, q.q);
    check_budget(search, budget)?;
    let big = base_field(q, cycle_type.lcm())?;
    let frob: Vec<Fe> = big.elements().map(|x| big.frobenius(x, q.k)).collect();

    let lengths: Vec<usize> = {
        let mut v = cycle_type.parts().to_vec();
        v.dedup();
        v
    };
    let planes: Vec<(usize, Vec<ProjectivePoint>)> = lengths
        .iter()
        .map(|&l| Ok((l, points_over(&big.subfield_elements(q.k * l as u32)?))))
        .collect::<Result<_>>()?;
    let plane = |l: usize| -> &[ProjectivePoint] {
        &planes.iter().find(|(m, _)| *m == l).expect("plane built").1
    };

    let normalized = cycle_type.fixed_points().min(3);
    let free = cycle_type.parts().len() - normalized;
    let (zero, one) = (Fe(0), Fe(1));
    let coordinate_points = [
        ProjectivePoint([one, zero, zero]),
        ProjectivePoint([zero, one, zero]),
        ProjectivePoint([zero, zero, one]),
    ];
    let search = Twisted {
        f: &big,
        frob,
        cycles: cycle_type.parts()[..free].iter().map(|&l| (l, plane(l))).collect(),
    };
    // General position does not depend on the order of the points, so the
    // normalized fixed points are placed first.
    let fixed = &coordinate_points[..normalized];
    let enumerated: u128 = if free == 0 {
        search.count(&mut fixed.to_vec(), 0)
    } else {
        let (len, first) = search.cycles[0];
        first
            .par_iter()
            .map(|&p| {
                let mut placed = fixed.to_vec();
                if search.push_orbit(&mut placed, p, len) {
                    search.count(&mut placed, 1)
                } else {
                    0
                }
            })
            .sum()
    };
    let raw_count = enumerated * normalization_factor(q.q, normalized);
    let order = pgl3_order(q.q);
    if raw_count % order != 0 {
        return Err(Error::Internal(format!(
            "raw count {raw_count} for {cycle_type} over F_{} is not divisible by |PGL3| = {order}",
            q.q
        )));
    }
    Ok(TwistedCount {
        cycle_type: cycle_type.clone(),
        sigma: cycle_type.sigma(),
        q: q.q,
        feasibility: feasibility(cycle_type, q.q),
        search_size: search_size(cycle_type, q.q),
        raw_count,
        pgl3_order: order,
        orbit_count: raw_count / order,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// One oracle run compared against the class table.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRun {
    pub cycle_type: String,
    pub q: u64,
    pub class_name: String,
    pub raw_count: u128,
    pub pgl3_order: u128,
    pub orbit_count: u128,
    pub expected: u128,
    #[serde(rename = "match")]
    pub matches: bool,
    pub wall_time: f64,
}

fn expected_count(data: &ClassData, name: &str, q: OddPrimePower) -> Result<u128> {
    let v = evaluate_class_count(data, name, q)?;
    u128::try_from(v).map_err(|_| Error::Overflow("class count"))
}

/// Frame-normalized count for the trivial action against row 1A.
pub fn run_identity(data: &ClassData, q: OddPrimePower, budget: u128) -> Result<OracleRun> {
    let c = count_identity(q, budget)?;
    let expected = expected_count(data, "1A", q)?;
    let orbit_count = c.orbit_count as u128;
    Ok(OracleRun {
        cycle_type: CycleType::identity().to_string(),
        q: q.q,
        class_name: "1A".into(),
        raw_count: orbit_count * pgl3_order(q.q),
        pgl3_order: pgl3_order(q.q),
        orbit_count,
        expected,
        matches: orbit_count == expected,
        wall_time: c.wall_time,
    })
}

/// Twisted count against the row of the class containing the embedded
/// permutation.
pub fn run_twisted(
    data: &ClassData,
    group: &WeylGroup,
    classes: &ClassTable,
    cycle_type: &CycleType,
    q: OddPrimePower,
    budget: u128,
) -> Result<OracleRun> {
    let class_name = classes.identify_class(group, &embed_permutation(&cycle_type.sigma())?)?;
    run_twisted_as(data, class_name, cycle_type, q, budget)
}

/// Twisted count against the row of `class_name`, the class of the embedded
/// representative permutation.
pub fn run_twisted_as(
    data: &ClassData,
    class_name: String,
    cycle_type: &CycleType,
    q: OddPrimePower,
    budget: u128,
) -> Result<OracleRun> {
    let c = count_twisted(cycle_type, q, budget)?;
    let expected = expected_count(data, &class_name, q)?;
    Ok(OracleRun {
        cycle_type: cycle_type.to_string(),
        q: q.q,
        class_name,
        raw_count: c.raw_count,
        pgl3_order: c.pgl3_order,
        orbit_count: c.orbit_count,
        expected,
        matches: c.orbit_count == expected,
        wall_time: c.wall_time,
    })
}
