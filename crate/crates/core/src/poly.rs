//! Dense univariate polynomials with integer coefficients.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Integer polynomial in `q`, coefficients low degree first, no trailing
/// zeros. Coefficient arithmetic is checked.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPoly(Vec<i64>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> i64 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    pub fn scale(&self, c: i64) -> IntPoly {
        IntPoly::new(
            self.0
                .iter()
                .map(|a| a.checked_mul(c).expect("polynomial coefficient overflow"))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::constant(1), |acc, _| &acc * self)
    }

    /// Exact value at an arbitrary integer.
    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * q + BigInt::from(c))
    }

    pub fn eval_i128(&self, q: i128) -> Option<i128> {
        self.0.iter().rev().try_fold(0i128, |acc, &c| {
            acc.checked_mul(q)?.checked_add(c as i128)
        })
    }
}

impl From<Vec<i64>> for IntPoly {
    fn from(v: Vec<i64>) -> Self {
        IntPoly::new(v)
    }
}

impl From<IntPoly> for Vec<i64> {
    fn from(p: IntPoly) -> Self {
        p.0
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        let c = (0..n)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or(0);
                let b = rhs.0.get(i).copied().unwrap_or(0);
                a.checked_add(b).expect("polynomial coefficient overflow")
            })
            .collect();
        IntPoly::new(c)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![0i64; self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in rhs.0.iter().enumerate() {
                let t = a.checked_mul(b).expect("polynomial coefficient overflow");
                c[i + j] = c[i + j].checked_add(t).expect("polynomial coefficient overflow");
            }
        }
        IntPoly::new(c)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints high degree first, e.g. `q^6 - 2q^5 + 21`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            match (first, c < 0) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if mag != 1 || deg == 0 {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{deg}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_eval() {
        let p = IntPoly::new(vec![-3, 0, 1, 0]);
        assert_eq!(p.to_string(), "q^2 - 3");
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&BigInt::from(5)), BigInt::from(22));
        assert_eq!(p.eval_i128(5), Some(22));
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(IntPoly::new(vec![0, -1]).to_string(), "-q");
    }

    #[test]
    fn products() {
        let a = IntPoly::new(vec![-1, 1]);
        let b = IntPoly::new(vec![1, 1]);
        assert_eq!(&a * &b, IntPoly::new(vec![-1, 0, 1]));
        assert_eq!(a.pow(2), IntPoly::new(vec![1, -2, 1]));
        assert_eq!(&a + &b, IntPoly::new(vec![0, 2]));
        assert_eq!(&a * &IntPoly::zero(), IntPoly::zero());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = IntPoly> {
            prop::collection::vec(-1000i64..1000, 0..6).prop_map(IntPoly::new)
        }

        proptest! {
            #[test]
            fn evaluation_is_a_ring_map(a in poly(), b in poly(), q in -50i64..50) {
                let q = BigInt::from(q);
                prop_assert_eq!((&a * &b).eval(&q), a.eval(&q) * b.eval(&q));
                prop_assert_eq!((&a + &b).eval(&q), a.eval(&q) + b.eval(&q));
            }
        }
    }
}
