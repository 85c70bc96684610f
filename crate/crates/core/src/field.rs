//! Finite fields `F_{p^k}` of odd characteristic in a polynomial basis.
//!
//! Elements are encoded as integers `sum c_i p^i` over their coefficient
//! vectors. Multiplication goes through discrete log tables, addition
//! through a full table for small fields and digitwise otherwise.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field the oracle is allowed to build by default.
pub const DEFAULT_MAX_FIELD_SIZE: u64 = 1 << 22;
const ADD_TABLE_LIMIT: u32 = 2500;

/// A field element; only meaningful together with its [`FiniteField`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u32);

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub struct FiniteField {
    p: u32,
    k: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u16>>,
    neg: Vec<u32>,
    frob: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds `F_{p^k}` with the default size limit.
pub fn make_field(p: u32, k: u32) -> Result<FiniteField> {
    FiniteField::new(p, k, DEFAULT_MAX_FIELD_SIZE)
}

impl FiniteField {
    /// The modulus is the lexicographically smallest monic irreducible of
    /// degree `k`, comparing coefficients from the constant term up.
    pub fn new(p: u32, k: u32, max_size: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidField("degree must be at least 1".into()));
        }
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        let size = (p as u64)
            .checked_pow(k)
            .filter(|&s| s <= max_size)
            .ok_or_else(|| {
                Error::InvalidField(format!("{p}^{k} exceeds the field size limit {max_size}"))
            })?;
        let size = size as u32;
        let modulus = smallest_irreducible(p, k);
        let mut field = FiniteField {
            p,
            k,
            size,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add: None,
            neg: Vec::new(),
            frob: Vec::new(),
        };
        field.build_tables()?;
        Ok(field)
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.size;
        self.neg = (0..q)
            .map(|x| {
                let c = self.digits(x);
                self.from_digits(&c.iter().map(|&d| (self.p - d) % self.p).collect::<Vec<_>>())
            })
            .collect();

        let n = q - 1;
        let generator = (1..q)
            .find(|&g| self.is_primitive_slow(g))
            .ok_or_else(|| Error::Internal("no primitive element".into()))?;
        let mut exp = Vec::with_capacity(2 * n as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp.push(x);
            log[x as usize] = i;
            x = self.mul_slow(x, generator);
        }
        if x != 1 || log[1..].contains(&u32::MAX) {
            return Err(Error::Internal("generator does not have full order".into()));
        }
        let dup: Vec<u32> = exp.clone();
        exp.extend(dup);
        self.exp = exp;
        self.log = log;

        if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = self.add_digits(a, b) as u16;
                }
            }
            self.add = Some(table);
        }

        let p = self.p;
        self.frob = (0..q)
            .map(|x| {
                if x == 0 {
                    0
                } else {
                    let l = (self.log[x as usize] as u64 * p as u64 % n as u64) as u32;
                    self.exp[l as usize]
                }
            })
            .collect();

        // Frobenius has order exactly k on the generator.
        let g = Fe(generator);
        for d in 1..self.k {
            if self.frobenius(g, d) == g {
                return Err(Error::Internal(format!("Frobenius has order {d} < {}", self.k)));
            }
        }
        if self.frobenius(g, self.k) != g {
            return Err(Error::Internal("Frobenius^k is not the identity".into()));
        }
        Ok(())
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            c.push(x % self.p);
            x /= self.p;
        }
        c
    }

    fn from_digits(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let prod = poly_mul(&x, &y, self.p);
        self.from_digits(&poly_rem(&prod, &self.modulus, self.p)[..self.k as usize])
    }

    fn is_primitive_slow(&self, g: u32) -> bool {
        let n = (self.size - 1) as u64;
        prime_factors(n).into_iter().all(|r| self.pow_slow(g, n / r) != 1)
    }

    fn pow_slow(&self, g: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (g, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Number of elements.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Modulus coefficients, constant term first, monic of degree `k`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        assert!(c.len() <= self.k as usize);
        let mut padded: Vec<u32> = c.iter().map(|x| x % self.p).collect();
        padded.resize(self.k as usize, 0);
        Fe(self.from_digits(&padded))
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficients in the polynomial basis, constant term first.
    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        self.digits(x.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.add {
            Some(t) => Fe(t[(a.0 * self.size + b.0) as usize] as u32),
            None => Fe(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            Fe(0)
        } else {
            Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            None
        } else {
            let n = self.size - 1;
            Some(Fe(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
        }
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe(1);
        }
        if a.0 == 0 {
            return Fe(0);
        }
        let n = (self.size - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        Fe(self.exp[l as usize])
    }

    /// `x^(p^times)`.
    #[inline]
    pub fn frobenius(&self, x: Fe, times: u32) -> Fe {
        let mut y = x;
        for _ in 0..times % self.k {
            y = Fe(self.frob[y.0 as usize]);
        }
        y
    }

    /// Membership test for the subfield `F_{p^d}`.
    pub fn subfield_fixed(&self, d: u32) -> Result<impl Fn(Fe) -> bool + '_> {
        if d == 0 || self.k % d != 0 {
            return Err(Error::InvalidField(format!(
                "{d} does not divide the degree {}",
                self.k
            )));
        }
        Ok(move |x: Fe| self.frobenius(x, d) == x)
    }

    /// Elements of `F_{p^d}`, in increasing encoding order.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<Fe>> {
        let fixed = self.subfield_fixed(d)?;
        Ok(self.elements().filter(|&x| fixed(x)).collect())
    }
}

/// Membership predicate for `F_{p^d}` inside `field`.
pub fn subfield_fixed(field: &FiniteField, d: u32) -> Result<impl Fn(Fe) -> bool + '_> {
    field.subfield_fixed(d)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut c = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] += x as u64 * y as u64;
        }
    }
    c.into_iter().map(|x| (x % p as u64) as u32).collect()
}

/// Remainder modulo a monic polynomial, padded to at least `deg(m)` terms.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let k = m.len() - 1;
    let mut r = a.to_vec();
    for top in (k..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = top - k + i;
            r[idx] = (r[idx] + (p - c) * mi % p) % p;
        }
    }
    r.resize(r.len().max(k), 0);
    r.truncate(k.max(1));
    r.resize(k, 0);
    r
}

/// Trial division by every monic polynomial of degree `1..=k/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().take(d).all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = (p as u64).pow(k);
    for code in 0..total {
        // c_0 is the most significant digit of `code`
        let mut c = vec![0u32; k as usize];
        let mut x = code;
        for slot in c.iter_mut().rev() {
            *slot = (x % p as u64) as u32;
            x /= p as u64;
        }
        c.push(1);
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
