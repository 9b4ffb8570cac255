//! Bit-packed polynomials over `F_2`.
//!
//! Coefficient `i` lives in bit `i % 64` of word `i / 64`. The word vector
//! never has trailing zero words, so the zero polynomial is the empty vector
//! and structural equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

/// Carry-less product of two words as `(low, high)`.
#[inline]
pub fn clmul(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { clmul_pclmul(a, b) };
        }
    }
    clmul_soft(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul_pclmul(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::*;
    let va = _mm_set_epi64x(0, a as i64);
    let vb = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(va, vb, 0);
    let lo = _mm_cvtsi128_si64(r) as u64;
    let hi = _mm_cvtsi128_si64(_mm_srli_si128(r, 8)) as u64;
    (lo, hi)
}

/// Portable 4-bit windowed carry-less multiply.
pub fn clmul_soft(a: u64, b: u64) -> (u64, u64) {
    let mut table = [0u128; 16];
    let a = a as u128;
    for i in 1..16usize {
        table[i] = if i & 1 == 1 { table[i - 1] ^ a } else { table[i >> 1] << 1 };
    }
    let mut r = 0u128;
    for k in (0..16).rev() {
        r = (r << 4) ^ table[((b >> (4 * k)) & 0xF) as usize];
    }
    (r as u64, (r >> 64) as u64)
}

#[inline]
fn spread32(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

#[inline]
fn compress_even(x: u64) -> u32 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    pub fn x() -> Self {
        Self { words: vec![2] }
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut words = vec![0u64; n / 64 + 1];
        words[n / 64] = 1 << (n % 64);
        Self { words }
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    /// From a coefficient slice (constant term first); nonzero entries count as 1.
    pub fn from_coeffs(coeffs: &[u64]) -> Self {
        let mut words = vec![0u64; coeffs.len().div_ceil(64)];
        for (i, &c) in coeffs.iter().enumerate() {
            if c & 1 == 1 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(words)
    }

    /// From the bits of an integer: bit `i` is the coefficient of `x^i`.
    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn coeffs(&self) -> Vec<u64> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| self.coeff(i) as u64).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    /// Degree with `deg 0 = -1` convention for loops.
    fn deg_i(&self) -> isize {
        self.degree().map_or(-1, |d| d as isize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// `self ^= other * x^shift`.
    fn xor_shifted(&mut self, other: &[u64], shift: usize) {
        if other.is_empty() {
            return;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let need = ws + other.len() + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        if bs == 0 {
            for (i, &w) in other.iter().enumerate() {
                self.words[ws + i] ^= w;
            }
        } else {
            for (i, &w) in other.iter().enumerate() {
                self.words[ws + i] ^= w << bs;
                self.words[ws + i + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, &s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Self::from_words(words)
    }

    pub fn shl(&self, n: usize) -> Self {
        let mut r = Self::zero();
        r.xor_shifted(&self.words, n);
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut r = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.words.iter().enumerate() {
                let (lo, hi) = clmul(a, b);
                r[i + j] ^= lo;
                r[i + j + 1] ^= hi;
            }
        }
        Self::from_words(r)
    }

    /// `self^2`, computed by spreading bits.
    pub fn square(&self) -> Self {
        let mut r = Vec::with_capacity(2 * self.words.len());
        for &w in &self.words {
            r.push(spread32(w as u32));
            r.push(spread32((w >> 32) as u32));
        }
        Self::from_words(r)
    }

    /// Square root when `self` is a square (only even exponents).
    pub fn sqrt(&self) -> Option<Self> {
        if self.words.iter().any(|w| w & 0xAAAA_AAAA_AAAA_AAAA != 0) {
            return None;
        }
        let mut r = vec![0u64; self.words.len().div_ceil(2)];
        for (i, &w) in self.words.iter().enumerate() {
            r[i / 2] |= (compress_even(w) as u64) << (32 * (i % 2));
        }
        Some(Self::from_words(r))
    }

    pub fn derivative(&self) -> Self {
        // d/dx x^i = i x^{i-1}: keep odd exponents, shift down by one
        let mut r = Vec::with_capacity(self.words.len());
        for &w in &self.words {
            r.push((w & 0xAAAA_AAAA_AAAA_AAAA) >> 1);
        }
        Self::from_words(r)
    }

    /// Quotient and remainder.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let mut qwords = vec![0u64; (self.deg_i() - db as isize).max(0) as usize / 64 + 1];
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            qwords[shift / 64] |= 1 << (shift % 64);
            rem.xor_shifted(&divisor.words, shift);
        }
        quot.words = qwords;
        quot.normalize();
        Ok((quot, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            rem.xor_shifted(&divisor.words, dr - db);
        }
        Ok(rem)
    }

    /// Exact division; panics in debug builds if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.divmod(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic gcd (every nonzero polynomial over `F_2` is monic).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    pub fn sqrmod(&self, m: &Self) -> Self {
        self.square().rem(m).expect("nonzero modulus")
    }

    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = Self::one().rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            base = base.sqrmod(m);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Substitutes `x -> x^(2^k)`, i.e. applies Frobenius `k` times.
    pub fn frobenius(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.square())
    }

    pub fn eval(&self, x: bool) -> bool {
        if x {
            self.weight() % 2 == 1
        } else {
            self.coeff(0)
        }
    }

    /// Uniform random polynomial of degree `< n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut words: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.gen()).collect();
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
        Self::from_words(words)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::Invalid("irreducibility of a constant".into())),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        if !self.coeff(0) {
            return Ok(false);
        }
        let x = Self::x();
        // x^(2^i) mod f for i = 0..=n
        let mut frob = Vec::with_capacity(n + 1);
        let mut h = x.rem(self)?;
        frob.push(h.clone());
        for _ in 0..n {
            h = h.sqrmod(self);
            frob.push(h.clone());
        }
        if frob[n] != x.rem(self)? {
            return Ok(false);
        }
        for (r, _) in crate::groups::factor_integer(n as u64)?.factors() {
            let k = n / *r as usize;
            let g = frob[k].add(&x).gcd(self);
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Squarefree decomposition: `(g_i, i)` with `self = prod g_i^i`, each `g_i`
    /// squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        self.sff_into(1, &mut out);
        out
    }

    fn sff_into(&self, mult: u32, out: &mut Vec<(Self, u32)>) {
        if self.degree().unwrap_or(0) == 0 {
            return;
        }
        let d = self.derivative();
        if d.is_zero() {
            let root = self.sqrt().expect("zero derivative means a square in characteristic 2");
            root.sff_into(mult * 2, out);
            return;
        }
        let mut c = self.gcd(&d);
        let mut w = self.div_exact(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y);
            if !fac.is_one() {
                out.push((fac, i * mult));
            }
            w = y;
            c = c.div_exact(&w);
            i += 1;
        }
        if !c.is_one() {
            let root = c.sqrt().expect("leftover cofactor is a square");
            root.sff_into(mult * 2, out);
        }
    }

    /// Distinct-degree factorization of a squarefree polynomial: `(g_d, d)`
    /// where `g_d` is the product of all irreducible factors of degree `d`.
    pub fn distinct_degree_factorization(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        let mut rest = self.clone();
        let x = Self::x();
        let mut h = x.clone();
        let mut d = 0;
        while let Some(deg) = rest.degree() {
            if deg < 2 * (d + 1) {
                break;
            }
            d += 1;
            h = h.sqrmod(&rest);
            let g = h.add(&x).gcd(&rest);
            if !g.is_one() {
                rest = rest.div_exact(&g);
                h = h.rem(&rest).expect("nonzero");
                out.push((g, d));
            }
        }
        if let Some(deg) = rest.degree() {
            if deg > 0 {
                out.push((rest, deg));
            }
        }
        out
    }

    /// Splits a squarefree product of irreducibles of degree `d` using the
    /// absolute trace `a + a^2 + ... + a^(2^(d-1))`.
    pub fn equal_degree_factorization<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Vec<Self> {
        let n = self.degree().expect("nonzero");
        if n == d {
            return vec![self.clone()];
        }
        loop {
            let a = Self::random(n, rng);
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let mut t = a.clone();
            let mut acc = a;
            for _ in 1..d {
                t = t.sqrmod(self);
                acc = acc.add(&t);
            }
            let g = acc.gcd(self);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let other = self.div_exact(&g);
                let mut v = g.equal_degree_factorization(d, rng);
                v.extend(other.equal_degree_factorization(d, rng));
                return v;
            }
        }
    }

    /// Complete factorization into sorted `(irreducible, multiplicity)` pairs.
    pub fn factor<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<(Self, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroInput("factorization"));
        }
        let mut out: Vec<(Self, u32)> = Vec::new();
        for (sqf, mult) in self.squarefree_decomposition() {
            for (block, d) in sqf.distinct_degree_factorization() {
                for f in block.equal_degree_factorization(d, rng) {
                    out.push((f, mult));
                }
            }
        }
        out.sort();
        // distinct squarefree layers are coprime, so no merging is needed
        Ok(out)
    }
}

impl Ord for Gf2Poly {
    /// Degree first, then the coefficient vector read as a binary integer.
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg_i()
            .cmp(&other.deg_i())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Gf2Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let terms: Vec<String> = (0..=d)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(bits: u64) -> Gf2Poly {
        Gf2Poly::from_u64(bits)
    }

    #[test]
    fn clmul_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let (a, b): (u64, u64) = (rng.gen(), rng.gen());
            let mut naive = 0u128;
            for i in 0..64 {
                if (b >> i) & 1 == 1 {
                    naive ^= (a as u128) << i;
                }
            }
            assert_eq!(clmul_soft(a, b), (naive as u64, (naive >> 64) as u64));
            assert_eq!(clmul(a, b), clmul_soft(a, b));
        }
    }

    #[test]
    fn small_identities() {
        // (x+1)^2 = x^2+1
        assert_eq!(p(0b11).square(), p(0b101));
        assert_eq!(p(0b11).mul(&p(0b11)), p(0b101));
        // x^3 = (x+1)(x^2+x+1) + 1
        let (q, r) = p(0b1000).divmod(&p(0b11)).unwrap();
        assert_eq!((q, r), (p(0b111), p(1)));
        assert_eq!(p(0b111).derivative(), p(1));
        assert_eq!(p(0b101).sqrt(), Some(p(0b11)));
        assert_eq!(p(0b111).sqrt(), None);
        assert!(p(0b1000).divmod(&Gf2Poly::zero()).is_err());
    }

    #[test]
    fn derivative_across_words() {
        let f = Gf2Poly::monomial(65).add(&Gf2Poly::monomial(64)).add(&Gf2Poly::monomial(63));
        assert_eq!(f.derivative(), Gf2Poly::monomial(64).add(&Gf2Poly::monomial(62)));
    }

    #[test]
    fn square_matches_mul_on_multiword() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 63, 64, 65, 200, 1000] {
            let a = Gf2Poly::random(n, &mut rng);
            assert_eq!(a.square(), a.mul(&a));
            assert_eq!(a.square().sqrt().unwrap(), a);
        }
    }

    #[test]
    fn divmod_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = Gf2Poly::random(300, &mut rng);
            let b = Gf2Poly::random(130, &mut rng);
            if b.is_zero() {
                continue;
            }
            let (q, r) = a.divmod(&b).unwrap();
            assert_eq!(q.mul(&b).add(&r), a);
            assert!(r.deg_i() < b.deg_i());
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert!(p(0b111).is_irreducible().unwrap());
        assert!(!p(0b101).is_irreducible().unwrap());
        assert!(p(0b10011).is_irreducible().unwrap());
        assert!(p(1).is_irreducible().is_err());
    }

    #[test]
    fn factor_example() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // x^5 + x + 1 = (x^2+x+1)(x^3+x^2+1)
        let f = p(0b100011).factor(&mut rng).unwrap();
        assert_eq!(f, vec![(p(0b111), 1), (p(0b1101), 1)]);
        // x^4 (x+1)^6
        let g = Gf2Poly::monomial(4).mul(&p(0b11).pow(6));
        assert_eq!(g.factor(&mut rng).unwrap(), vec![(p(0b10), 4), (p(0b11), 6)]);
    }
}
