//! The Picard lattice `Z L + Z E1 + ... + Z E7` of a degree-2 Del Pezzo
//! surface, its intersection form, the canonical class and the 126 roots of
//! `E7` inside `K^perp`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Rank of the Picard lattice.
pub const RANK: usize = 8;
/// Number of roots of `E7`.
pub const NUM_ROOTS: usize = 126;
/// Number of positive roots.
pub const NUM_POSITIVE_ROOTS: usize = 63;

const SIGNATURE: [i64; RANK] = [1, -1, -1, -1, -1, -1, -1, -1];

/// An integral class, coefficients of `L, E1, ..., E7` in that order.
///
/// Arithmetic is checked; an overflow aborts instead of wrapping.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PicVector(pub [i64; RANK]);

impl PicVector {
    pub const ZERO: PicVector = PicVector([0; RANK]);

    /// The class `L` of a line.
    pub const fn line() -> Self {
        let mut c = [0; RANK];
        c[0] = 1;
        PicVector(c)
    }

    /// The exceptional class `E_i`, `1 <= i <= 7`.
    pub fn exceptional(i: usize) -> Self {
        assert!((1..=7).contains(&i), "exceptional class index {i} out of range");
        let mut c = [0; RANK];
        c[i] = 1;
        PicVector(c)
    }

    /// Unit vector for coordinate `i` (0 is `L`).
    pub fn basis(i: usize) -> Self {
        let mut c = [0; RANK];
        c[i] = 1;
        PicVector(c)
    }

    /// The canonical class `K = -3L + E1 + ... + E7`.
    pub const fn canonical() -> Self {
        PicVector([-3, 1, 1, 1, 1, 1, 1, 1])
    }

    pub fn coeffs(&self) -> &[i64; RANK] {
        &self.0
    }

    /// Intersection number under the form of signature `(1, -1, ..., -1)`.
    pub fn inner(&self, other: &PicVector) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .zip(SIGNATURE)
            .map(|((a, b), s)| checked_mul(checked_mul(*a, *b), s))
            .fold(0i64, checked_add)
    }

    pub fn self_inner(&self) -> i64 {
        self.inner(self)
    }

    pub fn is_root(&self) -> bool {
        self.self_inner() == -2 && self.inner(&Self::canonical()) == 0
    }
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Picard lattice coefficient overflow")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("Picard lattice coefficient overflow")
}

/// Intersection pairing of two classes.
pub fn inner(u: &PicVector, v: &PicVector) -> i64 {
    u.inner(v)
}

impl Add for PicVector {
    type Output = PicVector;
    fn add(self, rhs: PicVector) -> PicVector {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(rhs.0) {
            *x = checked_add(*x, y);
        }
        PicVector(c)
    }
}

impl Sub for PicVector {
    type Output = PicVector;
    fn sub(self, rhs: PicVector) -> PicVector {
        self + (-rhs)
    }
}

impl Neg for PicVector {
    type Output = PicVector;
    fn neg(self) -> PicVector {
        let mut c = self.0;
        for x in &mut c {
            *x = x.checked_neg().expect("Picard lattice coefficient overflow");
        }
        PicVector(c)
    }
}

impl Mul<PicVector> for i64 {
    type Output = PicVector;
    fn mul(self, rhs: PicVector) -> PicVector {
        let mut c = rhs.0;
        for x in &mut c {
            *x = checked_mul(*x, self);
        }
        PicVector(c)
    }
}

impl fmt::Debug for PicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if i == 0 { "L".to_string() } else { format!("E{i}") };
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Reflection in the root `r`: `v -> v + (v . r) r`.
pub fn reflect(r: &PicVector, v: &PicVector) -> Result<PicVector> {
    let rr = r.self_inner();
    if rr != -2 {
        return Err(Error::NotARoot(r.to_string(), rr));
    }
    Ok(*v + v.inner(r) * *r)
}

/// Which of the three printed families a positive root belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootFamily {
    /// `E_i - E_j`, `i < j`.
    Difference,
    /// `L - E_i - E_j - E_k`.
    Line,
    /// `2L - E_1 - ... - E_7 + E_i`.
    Conic,
}

/// The `E7` root system with lookup tables used by the compact group
/// representation.
///
/// Roots `0..63` are the positive roots in family order, root `i + 63` is
/// the negative of root `i`.
pub struct RootSystem {
    roots: Vec<PicVector>,
    families: Vec<RootFamily>,
    index: HashMap<PicVector, u8>,
    simple: [u8; 7],
    coords: Vec<[i64; 7]>,
    reflections: [[u8; NUM_ROOTS]; 7],
    sums: Vec<u8>,
    basis_to_simple2: [[i64; RANK]; RANK],
}

/// Marks a missing entry in the root sum table.
pub const NOT_A_ROOT: u8 = u8::MAX;

impl RootSystem {
    /// Shared instance; construction is deterministic and cheap.
    pub fn get() -> &'static RootSystem {
        static ROOTS: OnceLock<RootSystem> = OnceLock::new();
        ROOTS.get_or_init(RootSystem::build)
    }

    fn build() -> RootSystem {
        let l = PicVector::line();
        let e = |i| PicVector::exceptional(i);
        let mut positives = Vec::with_capacity(NUM_POSITIVE_ROOTS);
        for i in 1..=7 {
            for j in i + 1..=7 {
                positives.push((e(i) - e(j), RootFamily::Difference));
            }
        }
        for i in 1..=7 {
            for j in i + 1..=7 {
                for k in j + 1..=7 {
                    positives.push((l - e(i) - e(j) - e(k), RootFamily::Line));
                }
            }
        }
        let all_e = (1..=7).fold(PicVector::ZERO, |acc, i| acc + e(i));
        for i in 1..=7 {
            positives.push((2 * l - all_e + e(i), RootFamily::Conic));
        }
        assert_eq!(positives.len(), NUM_POSITIVE_ROOTS);

        let mut roots: Vec<PicVector> = positives.iter().map(|(r, _)| *r).collect();
        roots.extend(positives.iter().map(|(r, _)| -*r));
        let families = positives.iter().map(|(_, f)| *f).collect();
        let index: HashMap<PicVector, u8> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (*r, i as u8))
            .collect();

        let simple_vectors = simple_root_vectors();
        let simple = simple_vectors.map(|v| index[&v]);

        // Columns: alpha_1..alpha_7, K. The lattice they span has index 2 in
        // Pic, so twice the inverse is integral.
        let inverse = invert_basis(&simple_vectors);
        let mut basis_to_simple2 = [[0i64; RANK]; RANK];
        for (row, inv_row) in basis_to_simple2.iter_mut().zip(&inverse) {
            for (x, r) in row.iter_mut().zip(inv_row) {
                let doubled = *r * Ratio::from_integer(2);
                assert!(doubled.is_integer(), "basis change not half-integral");
                *x = doubled.to_integer();
            }
        }

        let coords = roots
            .iter()
            .map(|r| {
                let c2 = mat_vec(&basis_to_simple2, r);
                assert_eq!(c2[7], 0, "root not orthogonal to K");
                let mut c = [0i64; 7];
                for (x, y) in c.iter_mut().zip(&c2[..7]) {
                    assert_eq!(y % 2, 0, "root with fractional simple coordinates");
                    *x = y / 2;
                }
                c
            })
            .collect();

        let mut reflections = [[0u8; NUM_ROOTS]; 7];
        for (perm, &s) in reflections.iter_mut().zip(&simple) {
            let alpha = roots[s as usize];
            for (slot, r) in perm.iter_mut().zip(&roots) {
                *slot = index[&reflect(&alpha, r).expect("simple root")];
            }
        }

        let mut sums = vec![NOT_A_ROOT; NUM_ROOTS * NUM_ROOTS];
        for (i, a) in roots.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                if let Some(&k) = index.get(&(*a + *b)) {
                    sums[i * NUM_ROOTS + j] = k;
                }
            }
        }

        RootSystem {
            roots,
            families,
            index,
            simple,
            coords,
            reflections,
            sums,
            basis_to_simple2,
        }
    }

    pub fn roots(&self) -> &[PicVector] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[PicVector] {
        &self.roots[..NUM_POSITIVE_ROOTS]
    }

    /// Family of a positive root index.
    pub fn family(&self, positive_index: usize) -> RootFamily {
        self.families[positive_index]
    }

    pub fn root(&self, i: u8) -> PicVector {
        self.roots[i as usize]
    }

    pub fn index_of(&self, v: &PicVector) -> Option<u8> {
        self.index.get(v).copied()
    }

    /// Indices of the simple roots `E1-E2, ..., E6-E7, L-E1-E2-E3`.
    pub fn simple_roots(&self) -> [u8; 7] {
        self.simple
    }

    /// Coordinates of root `i` in the simple-root basis.
    pub fn simple_coords(&self, i: u8) -> &[i64; 7] {
        &self.coords[i as usize]
    }

    #[inline]
    pub fn negate(&self, i: u8) -> u8 {
        ((i as usize + NUM_POSITIVE_ROOTS) % NUM_ROOTS) as u8
    }

    /// Root index of `root(i) + root(j)`, or [`NOT_A_ROOT`].
    #[inline]
    pub fn sum(&self, i: u8, j: u8) -> u8 {
        self.sums[i as usize * NUM_ROOTS + j as usize]
    }

    /// Permutation of the roots induced by the `j`-th simple reflection.
    #[inline]
    pub fn simple_reflection_perm(&self, j: usize) -> &[u8; NUM_ROOTS] {
        &self.reflections[j]
    }

    /// Twice the change of basis from `(L, E1..E7)` to `(alpha_1..alpha_7, K)`.
    pub fn basis_to_simple2(&self) -> &[[i64; RANK]; RANK] {
        &self.basis_to_simple2
    }
}

pub(crate) fn simple_root_vectors() -> [PicVector; 7] {
    let e = |i| PicVector::exceptional(i);
    [
        e(1) - e(2),
        e(2) - e(3),
        e(3) - e(4),
        e(4) - e(5),
        e(5) - e(6),
        e(6) - e(7),
        PicVector::line() - e(1) - e(2) - e(3),
    ]
}

fn mat_vec(m: &[[i64; RANK]; RANK], v: &PicVector) -> [i64; RANK] {
    let mut out = [0i64; RANK];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(&v.0).map(|(a, b)| a * b).sum();
    }
    out
}

/// Inverse of the matrix whose columns are the simple roots followed by `K`.
fn invert_basis(simple: &[PicVector; 7]) -> [[Ratio<i64>; RANK]; RANK] {
    let mut cols: Vec<PicVector> = simple.to_vec();
    cols.push(PicVector::canonical());
    // Augmented [B | I], Gauss-Jordan over the rationals.
    let mut a: Vec<Vec<Ratio<i64>>> = (0..RANK)
        .map(|r| {
            let mut row: Vec<Ratio<i64>> =
                cols.iter().map(|c| Ratio::from_integer(c.0[r])).collect();
            row.extend((0..RANK).map(|k| if k == r { Ratio::one() } else { Ratio::zero() }));
            row
        })
        .collect();
    for col in 0..RANK {
        let pivot = (col..RANK)
            .find(|&r| !a[r][col].is_zero())
            .expect("simple roots and K are linearly independent");
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..RANK {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    let mut inv = [[Ratio::zero(); RANK]; RANK];
    for (r, row) in inv.iter_mut().enumerate() {
        row.copy_from_slice(&a[r][RANK..]);
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_rules() {
        let l = PicVector::line();
        let e1 = PicVector::exceptional(1);
        let e2 = PicVector::exceptional(2);
        assert_eq!(inner(&l, &l), 1);
        assert_eq!(inner(&e1, &e1), -1);
        assert_eq!(inner(&e1, &e2), 0);
        assert_eq!(inner(&l, &e1), 0);
        let k = PicVector::canonical();
        assert_eq!(inner(&k, &k), 2);
    }

    #[test]
    fn root_families() {
        let rs = RootSystem::get();
        assert_eq!(rs.roots().len(), 126);
        let count = |f| (0..63).filter(|&i| rs.family(i) == f).count();
        assert_eq!(count(RootFamily::Difference), 21);
        assert_eq!(count(RootFamily::Line), 35);
        assert_eq!(count(RootFamily::Conic), 7);
        for r in rs.roots() {
            assert!(r.is_root());
            assert!(rs.index_of(&-*r).is_some());
        }
    }

    #[test]
    fn roots_are_exactly_the_k_orthogonal_minus_two_classes() {
        // Brute force over a box that must contain every root: |L coeff| <= 3
        // and |E_i coeff| <= 2 follow from x0^2 - sum xi^2 = -2, sum xi = 3 x0.
        let k = PicVector::canonical();
        let mut found = Vec::new();
        for x0 in -3i64..=3 {
            let mut rest = [0i64; 7];
            fn rec(
                pos: usize,
                rest: &mut [i64; 7],
                x0: i64,
                k: &PicVector,
                found: &mut Vec<PicVector>,
            ) {
                if pos == 7 {
                    let mut c = [0; RANK];
                    c[0] = x0;
                    c[1..].copy_from_slice(rest);
                    let v = PicVector(c);
                    if v.self_inner() == -2 && v.inner(k) == 0 {
                        found.push(v);
                    }
                    return;
                }
                for x in -2..=2 {
                    rest[pos] = x;
                    rec(pos + 1, rest, x0, k, found);
                }
            }
            rec(0, &mut rest, x0, &k, &mut found);
        }
        found.sort();
        let mut ours = RootSystem::get().roots().to_vec();
        ours.sort();
        assert_eq!(found, ours);
    }

    #[test]
    fn reflection_examples() {
        let e1 = PicVector::exceptional(1);
        let e2 = PicVector::exceptional(2);
        assert_eq!(reflect(&(e1 - e2), &e1).unwrap(), e2);
        let k = PicVector::canonical();
        for r in RootSystem::get().roots() {
            assert_eq!(reflect(r, &k).unwrap(), k);
        }
        assert!(matches!(reflect(&e1, &e2), Err(Error::NotARoot(_, -1))));
    }

    #[test]
    fn simple_coordinates_reconstruct_roots() {
        let rs = RootSystem::get();
        let simple = simple_root_vectors();
        for i in 0..NUM_ROOTS as u8 {
            let c = rs.simple_coords(i);
            let v = c
                .iter()
                .zip(&simple)
                .fold(PicVector::ZERO, |acc, (x, a)| acc + *x * *a);
            assert_eq!(v, rs.root(i));
            // Positive roots have nonnegative coordinates.
            if (i as usize) < NUM_POSITIVE_ROOTS {
                assert!(c.iter().all(|&x| x >= 0));
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(PicVector::canonical().to_string(), "-3L+E1+E2+E3+E4+E5+E6+E7");
        assert_eq!(PicVector::ZERO.to_string(), "0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn vector() -> impl Strategy<Value = PicVector> {
            prop::array::uniform8(-50i64..50).prop_map(PicVector)
        }

        proptest! {
            #[test]
            fn inner_is_symmetric(u in vector(), v in vector()) {
                prop_assert_eq!(inner(&u, &v), inner(&v, &u));
            }

            #[test]
            fn reflections_are_isometric_involutions(r in 0usize..126, u in vector(), v in vector()) {
                let r = RootSystem::get().roots()[r];
                let ru = reflect(&r, &u).unwrap();
                let rv = reflect(&r, &v).unwrap();
                prop_assert_eq!(inner(&ru, &rv), inner(&u, &v));
                prop_assert_eq!(reflect(&r, &ru).unwrap(), u);
            }
        }
    }
}
