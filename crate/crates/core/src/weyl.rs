//! `W(E7)` as a concrete group of isometries of the Picard lattice.
//!
//! An element is stored compactly as an [`ElementKey`]: the indices of the
//! images of the seven simple roots. The images of the simple roots
//! determine the action on `K^perp` and `K` is fixed, so the key is an exact
//! (injective) encoding; no hashing or fingerprinting is involved in
//! deduplication.
//!
//! Multiplying a key by a simple reflection on either side only needs a
//! handful of table lookups, which is what makes the full enumeration and
//! the conjugacy class closures cheap.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{PicVector, RootSystem, NOT_A_ROOT, NUM_ROOTS, RANK};
use crate::poly::IntPoly;

/// Order of `W(E7)`.
pub const GROUP_ORDER: usize = 2_903_040;
/// Order of the determinant-one subgroup, isomorphic to `Sp(6,2)`.
pub const SP62_ORDER: usize = 1_451_520;
/// Default cap on the number of stored elements during enumeration.
pub const DEFAULT_ELEMENT_BUDGET: usize = 4_000_000;

const KEY_BITS: u32 = 7;
const KEY_MASK: u64 = (1 << KEY_BITS) - 1;

/// Images of the simple roots under a group element, packed 7 bits each
/// with the image of the first simple root in the most significant place.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementKey(pub u64);

impl ElementKey {
    pub fn from_images(images: [u8; 7]) -> Self {
        ElementKey(
            images
                .iter()
                .fold(0u64, |acc, &r| (acc << KEY_BITS) | r as u64),
        )
    }

    pub fn images(self) -> [u8; 7] {
        let mut out = [0u8; 7];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = ((self.0 >> (KEY_BITS * (6 - i as u32))) & KEY_MASK) as u8;
        }
        out
    }

    pub fn identity() -> Self {
        Self::from_images(RootSystem::get().simple_roots())
    }

    /// The central element acting as `-1` on `K^perp`.
    pub fn negative_identity() -> Self {
        let rs = RootSystem::get();
        Self::from_images(rs.simple_roots().map(|r| rs.negate(r)))
    }

    /// `s_j * self`.
    #[inline]
    pub fn left_mul_simple(self, j: usize) -> Self {
        let perm = RootSystem::get().simple_reflection_perm(j);
        Self::from_images(self.images().map(|r| perm[r as usize]))
    }

    /// `self * s_j`.
    #[inline]
    pub fn right_mul_simple(self, j: usize) -> Self {
        let rs = RootSystem::get();
        let img = self.images();
        let mut out = img;
        for (i, slot) in out.iter_mut().enumerate() {
            if i == j {
                *slot = rs.negate(img[j]);
            } else if SIMPLE_ADJACENT[i][j] {
                // s_j(alpha_i) = alpha_i + alpha_j for neighbours
                let s = rs.sum(img[i], img[j]);
                debug_assert_ne!(s, NOT_A_ROOT);
                *slot = s;
            }
        }
        Self::from_images(out)
    }

    /// `s_j * self * s_j`.
    #[inline]
    pub fn conjugate_by_simple(self, j: usize) -> Self {
        self.right_mul_simple(j).left_mul_simple(j)
    }

    /// `-self`, i.e. composition with the central element.
    pub fn negate(self) -> Self {
        let rs = RootSystem::get();
        Self::from_images(self.images().map(|r| rs.negate(r)))
    }

    /// Image of an arbitrary root.
    pub fn apply_root(self, root: u8) -> u8 {
        let rs = RootSystem::get();
        let img = self.images();
        let v = rs
            .simple_coords(root)
            .iter()
            .zip(img)
            .fold(PicVector::ZERO, |acc, (&c, r)| acc + c * rs.root(r));
        rs.index_of(&v).expect("group element maps roots to roots")
    }

    /// The induced permutation of all 126 roots.
    pub fn root_permutation(self) -> [u8; NUM_ROOTS] {
        let mut perm = [0u8; NUM_ROOTS];
        for (i, slot) in perm.iter_mut().enumerate() {
            *slot = self.apply_root(i as u8);
        }
        perm
    }

    /// `self * other` (apply `other` first).
    pub fn compose(self, other: ElementKey) -> Self {
        Self::from_images(other.images().map(|r| self.apply_root(r)))
    }

    /// Matrix of the action on `K^perp` in the simple-root basis;
    /// column `i` holds the coordinates of the image of `alpha_i`.
    pub fn std_matrix(self) -> [[i64; 7]; 7] {
        let rs = RootSystem::get();
        let mut m = [[0i64; 7]; 7];
        for (i, r) in self.images().into_iter().enumerate() {
            for (j, &c) in rs.simple_coords(r).iter().enumerate() {
                m[j][i] = c;
            }
        }
        m
    }

    /// Trace on `K^perp`.
    pub fn trace_std(self) -> i64 {
        let rs = RootSystem::get();
        self.images()
            .iter()
            .enumerate()
            .map(|(i, &r)| rs.simple_coords(r)[i])
            .sum()
    }

    pub fn to_element(self) -> WeylElement {
        WeylElement::from_key(self)
    }
}

impl fmt::Debug for ElementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElementKey({:?})", self.images())
    }
}

static SIMPLE_ADJACENT: std::sync::LazyLock<[[bool; 7]; 7]> = std::sync::LazyLock::new(|| {
    let rs = RootSystem::get();
    let s = rs.simple_roots();
    let mut adj = [[false; 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            adj[i][j] = i != j && rs.root(s[i]).inner(&rs.root(s[j])) == 1;
        }
    }
    adj
});

/// An element of `W(E7)` as an 8x8 integer matrix acting on coefficient
/// columns of [`PicVector`]s.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylElement {
    matrix: [[i64; RANK]; RANK],
}

impl WeylElement {
    pub fn identity() -> Self {
        let mut m = [[0; RANK]; RANK];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        WeylElement { matrix: m }
    }

    /// `-1` on `K^perp`, identity on `K`; the Geiser involution.
    pub fn negative_identity() -> Self {
        ElementKey::negative_identity().to_element()
    }

    /// Reflection in a root.
    pub fn reflection(root: &PicVector) -> Result<Self> {
        let mut m = [[0; RANK]; RANK];
        for col in 0..RANK {
            let image = crate::picard::reflect(root, &PicVector::basis(col))?;
            for (row, v) in m.iter_mut().zip(image.0) {
                row[col] = v;
            }
        }
        Ok(WeylElement { matrix: m })
    }

    /// Validates that `matrix` is an isometry of the Picard lattice fixing
    /// `K`; such a matrix lies in `W(E7)`.
    pub fn from_matrix(matrix: [[i64; RANK]; RANK]) -> Result<Self> {
        let w = WeylElement { matrix };
        let k = PicVector::canonical();
        if w.apply(&k) != k {
            return Err(Error::NotInGroup("does not fix the canonical class".into()));
        }
        for i in 0..RANK {
            for j in 0..RANK {
                let (u, v) = (PicVector::basis(i), PicVector::basis(j));
                if w.apply(&u).inner(&w.apply(&v)) != u.inner(&v) {
                    return Err(Error::NotInGroup(
                        "does not preserve the intersection form".into(),
                    ));
                }
            }
        }
        Ok(w)
    }

    pub fn from_key(key: ElementKey) -> Self {
        let rs = RootSystem::get();
        // columns of A: images of alpha_1..alpha_7 and K
        let mut cols = [PicVector::ZERO; RANK];
        for (c, r) in cols.iter_mut().zip(key.images()) {
            *c = rs.root(r);
        }
        cols[7] = PicVector::canonical();
        let inv2 = rs.basis_to_simple2();
        let mut m = [[0i64; RANK]; RANK];
        for (row, out_row) in m.iter_mut().enumerate() {
            for (col, out) in out_row.iter_mut().enumerate() {
                let twice: i64 = (0..RANK).map(|k| cols[k].0[row] * inv2[k][col]).sum();
                debug_assert_eq!(twice % 2, 0);
                *out = twice / 2;
            }
        }
        WeylElement { matrix: m }
    }

    pub fn key(&self) -> ElementKey {
        let rs = RootSystem::get();
        let images = rs.simple_roots().map(|s| {
            rs.index_of(&self.apply(&rs.root(s)))
                .expect("isometry fixing K maps roots to roots")
        });
        ElementKey::from_images(images)
    }

    pub fn matrix(&self) -> &[[i64; RANK]; RANK] {
        &self.matrix
    }

    pub fn apply(&self, v: &PicVector) -> PicVector {
        let mut out = [0i64; RANK];
        for (o, row) in out.iter_mut().zip(&self.matrix) {
            *o = row
                .iter()
                .zip(&v.0)
                .map(|(a, b)| a.checked_mul(*b).expect("overflow"))
                .fold(0i64, |s, t| s.checked_add(t).expect("overflow"));
        }
        PicVector(out)
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut m = [[0i64; RANK]; RANK];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..RANK).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        WeylElement { matrix: m }
    }

    pub fn negate(&self) -> WeylElement {
        WeylElement::negative_identity().compose(self)
    }

    /// Trace on the whole Picard lattice.
    pub fn trace_pic(&self) -> i64 {
        (0..RANK).map(|i| self.matrix[i][i]).sum()
    }

    pub fn trace_std(&self) -> i64 {
        self.trace_pic() - 1
    }

    pub fn order(&self) -> u32 {
        let id = WeylElement::identity();
        let mut p = *self;
        let mut n = 1;
        while p != id {
            p = p.compose(self);
            n += 1;
            assert!(n <= 64, "element order exceeds the exponent of W(E7)");
        }
        n
    }

    /// Characteristic polynomial `det(t - w)` on `K^perp`.
    pub fn char_poly_std(&self) -> IntPoly {
        char_poly(&self.key().std_matrix())
    }

    /// Determinant on `K^perp` (equal to the determinant of the matrix).
    pub fn sign(&self) -> i8 {
        std_sign(&self.char_poly_std())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "WeylElement [")?;
        for row in &self.matrix {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Reflections in `E1-E2, ..., E6-E7, L-E1-E2-E3`.
pub fn simple_reflections() -> [WeylElement; 7] {
    crate::picard::simple_root_vectors()
        .map(|r| WeylElement::reflection(&r).expect("simple roots are roots"))
}

/// Trace of `w` on `Pic`.
pub fn trace_pic(w: &WeylElement) -> i64 {
    w.trace_pic()
}

/// Splits `w = sign * positive_part` with `positive_part` of determinant one
/// on `K^perp`.
pub fn sign_decompose(w: &WeylElement) -> (WeylElement, i8) {
    let sign = w.sign();
    let positive = if sign == 1 { *w } else { w.negate() };
    (positive, sign)
}

/// The permutation matrix fixing `L` and sending `E_i` to `E_{sigma(i)}`.
/// `sigma[i - 1]` is the image of `i`.
pub fn embed_permutation(sigma: &[usize]) -> Result<WeylElement> {
    if sigma.len() != 7 {
        return Err(Error::InvalidPermutation(sigma.to_vec()));
    }
    let mut seen = [false; 7];
    for &s in sigma {
        if !(1..=7).contains(&s) || seen[s - 1] {
            return Err(Error::InvalidPermutation(sigma.to_vec()));
        }
        seen[s - 1] = true;
    }
    let mut m = [[0i64; RANK]; RANK];
    m[0][0] = 1;
    for (i, &s) in sigma.iter().enumerate() {
        m[s][i + 1] = 1;
    }
    WeylElement::from_matrix(m)
}

/// Characteristic polynomial `det(t I - A)` by Faddeev-LeVerrier; every
/// division is exact for integer matrices.
pub fn char_poly<const N: usize>(a: &[[i64; N]; N]) -> IntPoly {
    let mut coeffs = vec![0i64; N + 1];
    coeffs[N] = 1;
    let mut m = [[0i64; N]; N];
    for k in 1..=N {
        // M_k = A M_{k-1} + c_{N-k+1} I
        let mut next = [[0i64; N]; N];
        for i in 0..N {
            for j in 0..N {
                next[i][j] = (0..N).map(|l| a[i][l] * m[l][j]).sum();
            }
            next[i][i] += coeffs[N - k + 1];
        }
        m = next;
        let tr: i64 = (0..N)
            .map(|i| (0..N).map(|l| a[i][l] * m[l][i]).sum::<i64>())
            .sum();
        assert_eq!(tr % k as i64, 0, "inexact Faddeev-LeVerrier step");
        coeffs[N - k] = -tr / k as i64;
    }
    IntPoly::new(coeffs)
}

/// Determinant from `det(t - A)` of odd size 7: `det A = -p(0)`.
fn std_sign(char_poly: &IntPoly) -> i8 {
    let det = -char_poly.coeffs().first().copied().unwrap_or(0);
    match det {
        1 => 1,
        -1 => -1,
        d => panic!("element of W(E7) with determinant {d}"),
    }
}

fn std_order(key: ElementKey) -> u32 {
    let a = key.std_matrix();
    let mut p = a;
    let mut n = 1;
    let is_identity = |m: &[[i64; 7]; 7]| {
        (0..7).all(|i| (0..7).all(|j| m[i][j] == i64::from(i == j)))
    };
    while !is_identity(&p) {
        let mut next = [[0i64; 7]; 7];
        for i in 0..7 {
            for j in 0..7 {
                next[i][j] = (0..7).map(|l| p[i][l] * a[l][j]).sum();
            }
        }
        p = next;
        n += 1;
        assert!(n <= 64, "element order exceeds the exponent of W(E7)");
    }
    n
}

/// All of `W(E7)`, stored as a sorted list of keys.
pub struct WeylGroup {
    elements: Vec<ElementKey>,
}

impl WeylGroup {
    pub fn enumerate() -> Result<Self> {
        Self::enumerate_with_budget(DEFAULT_ELEMENT_BUDGET)
    }

    /// Breadth-first closure under the simple reflections, one Bruhat
    /// length at a time. In a Coxeter group `s w` has length `l(w) +- 1`, so
    /// a new layer only has to be deduplicated against itself and the
    /// previous layer.
    pub fn enumerate_with_budget(max_elements: usize) -> Result<Self> {
        let mut all = vec![ElementKey::identity()];
        let mut previous: Vec<ElementKey> = Vec::new();
        let mut layer = all.clone();
        while !layer.is_empty() {
            let mut next: Vec<ElementKey> = layer
                .par_iter()
                .flat_map_iter(|&g| (0..7).map(move |j| g.left_mul_simple(j)))
                .filter(|k| previous.binary_search(k).is_err())
                .collect();
            next.par_sort_unstable();
            next.dedup();
            if all.len() + next.len() > max_elements {
                return Err(Error::EnumerationBudget {
                    budget: max_elements,
                });
            }
            all.extend_from_slice(&next);
            previous = std::mem::replace(&mut layer, next);
        }
        all.par_sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Internal("duplicate element after enumeration".into()));
        }
        Ok(WeylGroup { elements: all })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn keys(&self) -> &[ElementKey] {
        &self.elements
    }

    pub fn index_of(&self, key: ElementKey) -> Option<usize> {
        self.elements.binary_search(&key).ok()
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.index_of(w.key()).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = WeylElement> + '_ {
        self.elements.iter().map(|k| k.to_element())
    }

    /// Partition into conjugacy classes by conjugation-orbit closure under
    /// the simple reflections.
    pub fn conjugacy_classes(&self) -> ClassTable {
        let n = self.elements.len();
        let mut class_of = vec![UNASSIGNED; n];
        let mut classes = Vec::new();
        let mut queue = Vec::new();
        for start in 0..n {
            if class_of[start] != UNASSIGNED {
                continue;
            }
            let id = classes.len() as u8;
            assert!(id < UNASSIGNED, "too many conjugacy classes");
            class_of[start] = id;
            queue.push(start);
            let mut size = 0usize;
            while let Some(x) = queue.pop() {
                size += 1;
                let key = self.elements[x];
                for j in 0..7 {
                    let y = self
                        .index_of(key.conjugate_by_simple(j))
                        .expect("group closed under conjugation");
                    if class_of[y] == UNASSIGNED {
                        class_of[y] = id;
                        queue.push(y);
                    }
                }
            }
            classes.push(ConjugacyClass::new(self.elements[start], size));
        }
        let mut table = ClassTable {
            classes,
            class_of,
            names_resolved: false,
        };
        table.link_pairs(self);
        table.apply_names(&table.default_letters());
        table.names_resolved = false;
        table
    }
}

const UNASSIGNED: u8 = u8::MAX;

/// One conjugacy class of `W(E7)` with its invariants.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    /// Smallest key in the class.
    pub representative: ElementKey,
    pub size: usize,
    pub order: u32,
    pub trace_std: i64,
    pub char_poly_std: IntPoly,
    /// Determinant on `K^perp`, the `Z/2` coordinate.
    pub sign: i8,
    /// Signed label such as `"-3B"`.
    pub name: String,
    /// Index of the class of `-g`.
    pub negated: usize,
}

impl ConjugacyClass {
    fn new(representative: ElementKey, size: usize) -> Self {
        let char_poly_std = char_poly(&representative.std_matrix());
        ConjugacyClass {
            representative,
            size,
            order: std_order(representative),
            trace_std: representative.trace_std(),
            sign: std_sign(&char_poly_std),
            char_poly_std,
            name: String::new(),
            negated: usize::MAX,
        }
    }

    pub fn trace_pic(&self) -> i64 {
        1 + self.trace_std
    }

    /// Label without the sign, i.e. the `Sp(6,2)` class of the positive part.
    pub fn unsigned_name(&self) -> &str {
        self.name.trim_start_matches('-')
    }

    pub fn centralizer_order(&self) -> usize {
        GROUP_ORDER / self.size
    }
}

/// The 60 conjugacy classes and the class of every element.
pub struct ClassTable {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u8>,
    names_resolved: bool,
}

/// Letter assignment: index of a positive class and its unsigned label.
pub type LetterAssignment = Vec<(usize, String)>;

impl ClassTable {
    fn link_pairs(&mut self, group: &WeylGroup) {
        for i in 0..self.classes.len() {
            let neg = self.classes[i].representative.negate();
            let idx = group.index_of(neg).expect("-1 is central");
            self.classes[i].negated = self.class_of[idx] as usize;
        }
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Indices of the determinant-one classes (the `Sp(6,2)` classes).
    pub fn positive_classes(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].sign == 1)
            .collect()
    }

    /// Provisional names: within each element order, positive classes by
    /// ascending size get letters A, B, C, ...; ties are broken by
    /// descending trace and then by characteristic polynomial.
    pub fn default_letters(&self) -> LetterAssignment {
        let mut by_order: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for i in self.positive_classes() {
            by_order.entry(self.classes[i].order).or_default().push(i);
        }
        let mut out = Vec::new();
        for (order, mut idx) in by_order {
            idx.sort_by(|&a, &b| {
                let (ca, cb) = (&self.classes[a], &self.classes[b]);
                ca.size
                    .cmp(&cb.size)
                    .then(cb.trace_std.cmp(&ca.trace_std))
                    .then(ca.char_poly_std.coeffs().cmp(cb.char_poly_std.coeffs()))
            });
            for (n, i) in idx.into_iter().enumerate() {
                out.push((i, format!("{order}{}", letter(n))));
            }
        }
        out
    }

    /// Positive class indices grouped by element order, with the letters
    /// currently used in that order.
    pub fn letters_by_order(&self) -> BTreeMap<u32, Vec<usize>> {
        let mut by_order: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for i in self.positive_classes() {
            by_order.entry(self.classes[i].order).or_default().push(i);
        }
        by_order
    }

    /// Names the positive classes as given and each negative class `-X`.
    pub fn apply_names(&mut self, assignment: &LetterAssignment) {
        for (i, name) in assignment {
            self.classes[*i].name = name.clone();
        }
        for i in 0..self.classes.len() {
            if self.classes[i].sign == -1 {
                let pos = self.classes[i].negated;
                self.classes[i].name = format!("-{}", self.classes[pos].name);
            }
        }
    }

    /// Marks the current names as validated.
    pub fn set_names_resolved(&mut self, resolved: bool) {
        self.names_resolved = resolved;
    }

    pub fn names_resolved(&self) -> bool {
        self.names_resolved
    }

    pub fn by_name(&self, name: &str) -> Option<&ConjugacyClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn class_index_of(&self, group: &WeylGroup, key: ElementKey) -> Option<usize> {
        group
            .index_of(key)
            .map(|i| self.class_of[i] as usize)
    }

    /// Class of `w`, by membership in the enumerated group.
    pub fn identify<'a>(
        &'a self,
        group: &WeylGroup,
        w: &WeylElement,
    ) -> Result<&'a ConjugacyClass> {
        let key = WeylElement::from_matrix(*w.matrix())?.key();
        let idx = self
            .class_index_of(group, key)
            .ok_or_else(|| Error::NotInGroup(format!("{key:?} not enumerated")))?;
        Ok(&self.classes[idx])
    }

    /// Signed label of the class containing `w`.
    pub fn identify_class(&self, group: &WeylGroup, w: &WeylElement) -> Result<String> {
        self.identify(group, w).map(|c| c.name.clone())
    }

    /// Classes in table order: by element order, then letter, `X` before `-X`.
    pub fn ordered(&self) -> Vec<&ConjugacyClass> {
        let mut v: Vec<&ConjugacyClass> = self.classes.iter().collect();
        v.sort_by(|a, b| {
            let (pa, pb) = (&self.classes[positive_of(a, &self.classes)], &self.classes[positive_of(b, &self.classes)]);
            pa.order
                .cmp(&pb.order)
                .then(a.unsigned_name().cmp(b.unsigned_name()))
                .then(b.sign.cmp(&a.sign))
        });
        v
    }

    pub fn report(&self) -> ClassReport {
        ClassReport {
            group_order: self.classes.iter().map(|c| c.size).sum(),
            names_resolved: self.names_resolved,
            classes: self
                .ordered()
                .into_iter()
                .map(|c| ClassReportEntry {
                    name: c.name.clone(),
                    order: c.order,
                    size: c.size,
                    sign: c.sign,
                    trace_std: c.trace_std,
                    trace_pic: c.trace_pic(),
                    char_poly_std: c.char_poly_std.coeffs().to_vec(),
                    representative: c.representative.images(),
                })
                .collect(),
        }
    }
}

fn positive_of(c: &ConjugacyClass, all: &[ConjugacyClass]) -> usize {
    if c.sign == 1 {
        all.iter()
            .position(|x| x.representative == c.representative)
            .expect("class is in table")
    } else {
        c.negated
    }
}

fn letter(n: usize) -> char {
    (b'A' + n as u8) as char
}

/// Serializable summary of the 60 classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub group_order: usize,
    /// Whether the letters were validated against the trace table.
    pub names_resolved: bool,
    pub classes: Vec<ClassReportEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReportEntry {
    pub name: String,
    pub order: u32,
    pub size: usize,
    pub sign: i8,
    pub trace_std: i64,
    pub trace_pic: i64,
    /// Coefficients of `det(t - w)` on `K^perp`, low degree first.
    pub char_poly_std: Vec<i64>,
    /// Root indices of the images of the simple roots.
    pub representative: [u8; 7],
}

/// Outcome of matching an element against a [`ClassReport`] by invariants.
#[derive(Debug, PartialEq)]
pub enum Fingerprint<'a> {
    Unique(&'a ClassReportEntry),
    /// Several classes share sign, order and characteristic polynomial;
    /// orbit membership must decide.
    Ambiguous(Vec<&'a ClassReportEntry>),
}

/// Whether `a` and `b` are conjugate, by closing the conjugation orbit of
/// `a` under the simple reflections.
pub fn conjugate(a: ElementKey, b: ElementKey) -> bool {
    let mut seen = HashSet::from([a]);
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        if x == b {
            return true;
        }
        for j in 0..7 {
            let y = x.conjugate_by_simple(j);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    false
}

impl ClassReport {
    /// The class of `w`: by invariants, falling back to orbit membership
    /// when several classes share them.
    pub fn identify(&self, w: &WeylElement) -> Result<&ClassReportEntry> {
        match self.fingerprint(w)? {
            Fingerprint::Unique(c) => Ok(c),
            Fingerprint::Ambiguous(candidates) => {
                let key = w.key();
                candidates
                    .into_iter()
                    .find(|c| conjugate(ElementKey::from_images(c.representative), key))
                    .ok_or_else(|| Error::NotInGroup("no class contains the element".into()))
            }
        }
    }

    pub fn by_name(&self, name: &str) -> Option<&ClassReportEntry> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Matches `w` by sign, order and characteristic polynomial on `K^perp`.
    pub fn fingerprint(&self, w: &WeylElement) -> Result<Fingerprint<'_>> {
        let w = WeylElement::from_matrix(*w.matrix())?;
        let cp = w.char_poly_std();
        let order = std_order(w.key());
        let sign = std_sign(&cp);
        let matches: Vec<_> = self
            .classes
            .iter()
            .filter(|c| c.sign == sign && c.order == order && c.char_poly_std == cp.coeffs())
            .collect();
        match matches.len() {
            0 => Err(Error::NotInGroup("no class with matching invariants".into())),
            1 => Ok(Fingerprint::Unique(matches[0])),
            _ => Ok(Fingerprint::Ambiguous(matches)),
        }
    }
}
