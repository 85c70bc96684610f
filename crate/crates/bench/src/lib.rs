//! Fixtures shared by the benchmarks.

use delpezzo_core::oracle::{all_points, in_general_position, ProjectivePoint};
use delpezzo_core::weyl::ElementKey;
use delpezzo_core::FiniteField;

/// Up to `n` 7-tuples over `f` extending the standard frame, a mix of
/// configurations in and out of general position.
pub fn frame_tuples(f: &FiniteField, n: usize) -> Vec<[ProjectivePoint; 7]> {
    let pts = all_points(f);
    let frame = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
        .map(|c| ProjectivePoint::new(f, c.map(|x| f.from_int(x))).expect("nonzero"));
    let m = pts.len();
    (0..n)
        .map(|i| {
            let pick = |k: usize| pts[(i * 7919 + k * 104_729) % m];
            [frame[0], frame[1], frame[2], frame[3], pick(1), pick(2), pick(3)]
        })
        .collect()
}

/// Fraction of `tuples` in general position.
pub fn general_position_rate(f: &FiniteField, tuples: &[[ProjectivePoint; 7]]) -> f64 {
    let n = tuples.iter().filter(|t| in_general_position(f, t)).count();
    n as f64 / tuples.len().max(1) as f64
}

/// A fixed element of `W(E7)` with a long reduced word.
pub fn long_element() -> ElementKey {
    [0usize, 6, 3, 2, 6, 5, 1, 4, 6, 0, 3, 2, 5, 4, 6, 1]
        .iter()
        .fold(ElementKey::identity(), |k, &j| k.left_mul_simple(j))
}
