//! Finite fields `F_{p^n}`.
//!
//! An element is stored as a single `u64`: the base-`p` integer whose
//! digits are its coordinates in the power basis `1, a, a^2, ...` of the
//! generator `a` (constant coordinate least significant). For prime fields
//! that is just the residue. `F_{p^n}` for `n > 1` is built as
//! `F_p[a]/(m(a))` where `m` is the canonical modulus: the monic irreducible
//! of degree `n` whose coefficient vector, read as a base-`p` integer, is
//! smallest.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::{factor_integer, is_prime, is_prime_power};

/// Fields with at most this many elements get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Debug)]
struct FieldInner {
    p: u64,
    n: u32,
    q: u64,
    /// Coefficients of the modulus, constant term first; empty when `n == 1`.
    modulus: Vec<u64>,
    /// For `p == 2`, the modulus as a bit mask.
    modulus_bits: u64,
    tables: Option<Tables>,
}

/// Descriptor of a finite field `GF(p^n)`. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.n == other.inner.n)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.n == 1 {
            write!(f, "GF({})", self.inner.p)
        } else {
            write!(f, "GF({}^{})", self.inner.p, self.inner.n)
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `GF(p)`, `GF(p^n)` and `GF(q)` for a prime power `q`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected GF(p) or GF(p^n), got {s:?}")))?;
        let num = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in field descriptor")))
        };
        match body.split_once('^') {
            Some((p, n)) => {
                let n = u32::try_from(num(n)?).map_err(|_| Error::OutOfRange("field degree".into()))?;
                FieldSpec::new(num(p)?, n)
            }
            None => {
                let q = num(body)?;
                let (p, n) = is_prime_power(q).ok_or(Error::NotPrimePower(q))?;
                FieldSpec::new(p, n)
            }
        }
    }
}

impl FieldSpec {
    /// `GF(p^n)` with its canonical modulus.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::OutOfRange("field degree must be positive".into()));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= 1 << 63)
            .ok_or_else(|| Error::OutOfRange(format!("{p}^{n} exceeds 2^63")))?;
        if n == 1 {
            return Ok(Self::build(p, 1, q, Vec::new()));
        }
        let prime = FieldSpec::new(p, 1)?;
        let modulus = canonical_modulus(&prime, n);
        Ok(Self::build(p, n, q, modulus))
    }

    /// The prime field `GF(p)`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    fn build(p: u64, n: u32, q: u64, modulus: Vec<u64>) -> Self {
        let modulus_bits = if p == 2 && n > 1 {
            modulus.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        let mut inner = FieldInner { p, n, q, modulus, modulus_bits, tables: None };
        if n > 1 && q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        FieldSpec { inner: Arc::new(inner) }
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.n
    }

    pub fn order(&self) -> u64 {
        self.inner.q
    }

    /// Coefficients of the defining modulus, constant term first. Empty for
    /// prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.n == 1
    }

    pub fn is_gf2(&self) -> bool {
        self.inner.q == 2
    }

    /// The prime subfield `GF(p)`.
    pub fn prime_subfield(&self) -> FieldSpec {
        if self.is_prime_field() {
            self.clone()
        } else {
            FieldSpec::build(self.inner.p, 1, self.inner.p, Vec::new())
        }
    }

    // ---- raw element arithmetic on encoded values ----

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// The generator `a` of `F_p[a]/(m)`; for prime fields this is `1`.
    pub fn generator(&self) -> u64 {
        if self.inner.n == 1 {
            1
        } else {
            self.inner.p
        }
    }

    /// Image of an integer under `Z -> F_p`.
    pub fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.inner.p as i64) as u64
    }

    /// Coordinates of `a` in the power basis, constant first, length `n`.
    pub fn digits(&self, mut a: u64) -> Vec<u64> {
        let p = self.inner.p;
        (0..self.inner.n)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        let p = self.inner.p;
        digits.iter().rev().fold(0u64, |acc, &d| acc * p + d % p)
    }

    pub fn is_valid(&self, a: u64) -> bool {
        a < self.inner.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let inner = &*self.inner;
        if inner.p == 2 {
            return a ^ b;
        }
        if inner.n == 1 {
            let s = a + b;
            return if s >= inner.p { s - inner.p } else { s };
        }
        let p = inner.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..inner.n {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            if i + 1 < inner.n {
                place *= p;
            }
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let inner = &*self.inner;
        if inner.p == 2 || a == 0 {
            return a;
        }
        if inner.n == 1 {
            return inner.p - a;
        }
        let p = inner.p;
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..inner.n {
            let d = a % p;
            out += ((p - d) % p) * place;
            a /= p;
            if i + 1 < inner.n {
                place *= p;
            }
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let inner = &*self.inner;
        if a == 0 || b == 0 {
            return 0;
        }
        if inner.n == 1 {
            return ((a as u128 * b as u128) % inner.p as u128) as u64;
        }
        if let Some(t) = &inner.tables {
            let l = t.log[a as usize] + t.log[b as usize];
            return t.exp[l as usize] as u64;
        }
        mul_slow(inner, a, b)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let inner = &*self.inner;
        if let Some(t) = &inner.tables {
            let order = (inner.q - 1) as u32;
            let l = t.log[a as usize];
            return Some(t.exp[((order - l) % order) as usize] as u64);
        }
        Some(self.pow(a, inner.q - 2))
    }

    /// The unique `p`-th root, i.e. the inverse of Frobenius.
    pub fn pth_root(&self, a: u64) -> u64 {
        let inner = &*self.inner;
        if inner.n == 1 {
            return a;
        }
        self.pow(a, inner.q / inner.p)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.inner.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.inner.q)
    }

    /// Wraps an encoded value.
    pub fn elem(&self, value: u64) -> FqElem {
        assert!(self.is_valid(value), "{value} is not an element of {self}");
        FqElem { field: self.clone(), value }
    }

    /// Renders an encoded value as a polynomial in the generator `a`.
    pub fn format_elem(&self, v: u64) -> String {
        if self.inner.n == 1 {
            return v.to_string();
        }
        let digits = self.digits(v);
        let mut terms = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mono,
                _ => format!("{d}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

fn mul_slow(inner: &FieldInner, a: u64, b: u64) -> u64 {
    let n = inner.n as usize;
    if inner.p == 2 {
        let mut prod: u128 = 0;
        for i in 0..n {
            if (b >> i) & 1 == 1 {
                prod ^= (a as u128) << i;
            }
        }
        let m = inner.modulus_bits as u128;
        for i in (n..2 * n).rev() {
            if (prod >> i) & 1 == 1 {
                prod ^= m << (i - n);
            }
        }
        return prod as u64;
    }
    let p = inner.p as u128;
    let digits = |mut v: u64| {
        let mut d = vec![0u128; n];
        for x in d.iter_mut() {
            *x = (v % inner.p) as u128;
            v /= inner.p;
        }
        d
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u128; 2 * n - 1];
    for i in 0..n {
        if da[i] == 0 {
            continue;
        }
        for j in 0..n {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for i in (n..2 * n - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        for (j, &m) in inner.modulus[..n].iter().enumerate() {
            let k = i - n + j;
            prod[k] = (prod[k] + (p - c) * m as u128) % p;
        }
        prod[i] = 0;
    }
    prod[..n].iter().rev().fold(0u64, |acc, &d| acc * inner.p + d as u64)
}

fn build_tables(inner: &FieldInner) -> Tables {
    let q = inner.q;
    let order = q - 1;
    let primes: Vec<u64> = factor_integer(order)
        .expect("q - 1 >= 1")
        .factors()
        .iter()
        .map(|&(r, _)| r)
        .collect();
    let pow_slow = |a: u64, mut e: u64| {
        let (mut base, mut acc) = (a, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_slow(inner, acc, base);
            }
            base = mul_slow(inner, base, base);
            e >>= 1;
        }
        acc
    };
    let g = (2..q)
        .find(|&g| primes.iter().all(|&r| pow_slow(g, order / r) != 1))
        .expect("a finite field has a primitive element");
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for i in 0..order as usize {
        exp[i] = x as u32;
        exp[i + order as usize] = x as u32;
        log[x as usize] = i as u32;
        x = mul_slow(inner, x, g);
    }
    Tables { exp, log }
}

/// Smallest monic irreducible of degree `n` over `GF(p)` in base-`p` order.
fn canonical_modulus(prime: &FieldSpec, n: u32) -> Vec<u64> {
    use super::poly::Poly;
    let p = prime.characteristic();
    let count = p.pow(n);
    (0..count)
        .map(|i| {
            let mut coeffs: Vec<u64> = (0..n).scan(i, |r, _| {
                let d = *r % p;
                *r /= p;
                Some(d)
            }).collect();
            coeffs.push(1);
            coeffs
        })
        .find(|c| {
            let f = Poly::from_raw(prime.clone(), 'a', c.clone());
            f.is_irreducible().unwrap_or(false)
        })
        .expect("irreducible polynomials exist in every degree")
}

/// An element of a finite field.
///
/// Arithmetic operators panic when the operands live in different fields;
/// use the `try_*` methods to get an error instead.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    field: FieldSpec,
    value: u64,
}

impl FqElem {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// The base-`p` encoded value.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Residues of the coordinates in the power basis, constant first.
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    fn check(&self, other: &FqElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Mismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(FqElem { field: self.field.clone(), value: self.field.add(self.value, other.value) })
    }

    pub fn try_sub(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(FqElem { field: self.field.clone(), value: self.field.sub(self.value, other.value) })
    }

    pub fn try_mul(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(FqElem { field: self.field.clone(), value: self.field.mul(self.value, other.value) })
    }

    pub fn inv(&self) -> Result<FqElem> {
        let value = self.field.inv(self.value).ok_or(Error::ZeroInput("inverse"))?;
        Ok(FqElem { field: self.field.clone(), value })
    }

    pub fn pow(&self, e: u64) -> FqElem {
        FqElem { field: self.field.clone(), value: self.field.pow(self.value, e) }
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_elem(self.value))
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

macro_rules! elem_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl std::ops::$tr<&FqElem> for &FqElem {
            type Output = FqElem;
            fn $m(self, rhs: &FqElem) -> FqElem {
                self.$try(rhs).expect("field mismatch")
            }
        }
        impl std::ops::$tr for FqElem {
            type Output = FqElem;
            fn $m(self, rhs: FqElem) -> FqElem {
                (&self).$try(&rhs).expect("field mismatch")
            }
        }
    };
}

elem_binop!(Add, add, try_add);
elem_binop!(Sub, sub, try_sub);
elem_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        FqElem { field: self.field.clone(), value: self.field.neg(self.value) }
    }
}
