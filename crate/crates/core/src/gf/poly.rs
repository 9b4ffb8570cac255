//! Dense univariate polynomials over `F_q`.
//!
//! Coefficients are stored as encoded field values (see [`FieldSpec`]),
//! constant term first, without trailing zeros. Over `GF(2)` the heavy
//! operations are routed through the bit-packed [`Gf2Poly`] kernels.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::field::{FieldSpec, FqElem};
use crate::gf::gf2::Gf2Poly;

/// Degree above which `GF(2)` products use the packed representation.
const GF2_PACK_THRESHOLD: usize = 24;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    var: char,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Builds from encoded coefficients (constant first), trimming zeros.
    /// Panics if a value is not a field element.
    pub fn from_raw(field: FieldSpec, var: char, mut coeffs: Vec<u64>) -> Self {
        assert!(coeffs.iter().all(|&c| field.is_valid(c)), "coefficient outside {field}");
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, var, coeffs }
    }

    pub fn from_elems(field: FieldSpec, var: char, coeffs: &[FqElem]) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| *c.field() != field) {
            return Err(Error::Mismatch(format!("{} coefficient in {field} polynomial", bad.field())));
        }
        Ok(Self::from_raw(field, var, coeffs.iter().map(FqElem::value).collect()))
    }

    pub fn zero(field: FieldSpec, var: char) -> Self {
        Self { field, var, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec, var: char) -> Self {
        Self { field, var, coeffs: vec![1] }
    }

    pub fn constant(field: FieldSpec, var: char, c: u64) -> Self {
        Self::from_raw(field, var, vec![c])
    }

    /// The variable itself.
    pub fn x(field: FieldSpec, var: char) -> Self {
        Self { field, var, coeffs: vec![0, 1] }
    }

    /// `c * var^e`.
    pub fn monomial(field: FieldSpec, var: char, c: u64, e: usize) -> Self {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Self::from_raw(field, var, coeffs)
    }

    pub fn from_gf2(g: &Gf2Poly, var: char) -> Self {
        let field = FieldSpec::prime(2).expect("2 is prime");
        Self { field, var, coeffs: g.coeffs() }
    }

    /// Packed copy; only meaningful over `GF(2)`.
    pub fn to_gf2(&self) -> Gf2Poly {
        debug_assert!(self.field.is_gf2());
        Gf2Poly::from_coeffs(&self.coeffs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn with_var(mut self, var: char) -> Self {
        self.var = var;
        self
    }

    /// Encoded coefficients, constant first.
    pub fn raw(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeff_elem(&self, i: usize) -> FqElem {
        self.field.elem(self.coeff(i))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Leading coefficient (0 for the zero polynomial).
    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.field != other.field || self.var != other.var {
            return Err(Error::Mismatch(format!(
                "{}[{}] vs {}[{}]",
                self.field, self.var, other.field, other.var
            )));
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> Self {
        Self::from_raw(self.field.clone(), self.var, coeffs)
    }

    fn gf2_binary(&self, other: &Self, op: impl Fn(&Gf2Poly, &Gf2Poly) -> Gf2Poly) -> Self {
        Self::from_gf2(&op(&self.to_gf2(), &other.to_gf2()), self.var)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.field.add(self.coeff(i), other.coeff(i))).collect();
        Ok(self.with_coeffs(c))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.field.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(self.with_coeffs(c))
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field.clone(), self.var));
        }
        if self.field.is_gf2() && self.coeffs.len().min(other.coeffs.len()) > GF2_PACK_THRESHOLD {
            return Ok(self.gf2_binary(other, Gf2Poly::mul));
        }
        let f = &self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(self.with_coeffs(out))
    }

    /// Multiplies every coefficient by the encoded scalar `c`.
    pub fn scale(&self, c: u64) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    /// `self * var^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.coeffs);
        self.with_coeffs(c)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field.clone(), self.var);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_ring(divisor)?;
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        if self.field.is_gf2() && db > GF2_PACK_THRESHOLD {
            let (q, r) = self.to_gf2().divmod(&divisor.to_gf2())?;
            return Ok((Self::from_gf2(&q, self.var), Self::from_gf2(&r, self.var)));
        }
        let f = &self.field;
        let inv_lead = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Self::zero(f.clone(), self.var), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, inv_lead);
            quot[i - db] = t;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - db + j;
                rem[k] = f.sub(rem[k], f.mul(t, d));
            }
        }
        rem.truncate(db);
        Ok((self.with_coeffs(quot), self.with_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Quotient of an exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divmod(divisor)?;
        if !r.is_zero() {
            return Err(Error::Invalid(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            Some(inv) if inv != 1 => self.scale(inv),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroInput("gcd with zero"));
        }
        if self.field.is_gf2() && self.coeffs.len().max(other.coeffs.len()) > GF2_PACK_THRESHOLD {
            return Ok(self.gf2_binary(other, Gf2Poly::gcd));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended gcd `(g, s, t)` with `g = s*self + t*other` monic.
    pub fn xgcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        self.same_ring(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroInput("gcd with zero"));
        }
        let zero = Self::zero(self.field.clone(), self.var);
        let one = Self::one(self.field.clone(), self.var);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        let inv = self.field.inv(r0.leading()).expect("nonzero gcd");
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int((i as u64 % f.characteristic()) as i64), c))
            .collect();
        self.with_coeffs(c)
    }

    /// `p`-th root of a polynomial whose only nonzero terms have exponents
    /// divisible by `p`.
    pub fn pth_root(&self) -> Option<Self> {
        let p = self.field.characteristic() as usize;
        if self.coeffs.iter().enumerate().any(|(i, &c)| c != 0 && i % p != 0) {
            return None;
        }
        let c = self.coeffs.iter().step_by(p).map(|&c| self.field.pth_root(c)).collect();
        Some(self.with_coeffs(c))
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Result<Self> {
        self.try_mul(other)?.rem(m)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Result<Self> {
        if self.field.is_gf2() {
            let r = self.to_gf2().powmod(e, &m.to_gf2());
            return Ok(Self::from_gf2(&r, self.var));
        }
        let mut base = self.rem(m)?;
        let mut acc = Self::one(self.field.clone(), self.var).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m)?;
            }
        }
        Ok(acc)
    }

    /// Rabin's test: `x^(q^n) = x mod f` and `gcd(x^(q^(n/r)) - x, f) = 1`
    /// for every prime `r | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::Invalid("irreducibility of a constant".into())),
            Some(n) => n,
        };
        if self.field.is_gf2() {
            return self.to_gf2().is_irreducible();
        }
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let q = self.field.order();
        let x = Self::x(self.field.clone(), self.var);
        let mut frob = vec![x.rem(&f)?];
        for i in 0..n {
            let next = frob[i].powmod(q, &f)?;
            frob.push(next);
        }
        if frob[n] != frob[0] {
            return Ok(false);
        }
        for &(r, _) in crate::groups::factor_integer(n as u64)?.factors() {
            let g = (&frob[n / r as usize] - &x).gcd(&f)?;
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Renders using the text grammar, e.g. `(a+1)*x^2+a`.
    fn format_terms(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mut s = self.field.format_elem(c);
            if s.contains('+') {
                s = format!("({s})");
            }
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{i}", self.var),
            };
            out.push(match (i, c) {
                (0, _) => s,
                (_, 1) => mono,
                _ => format!("{s}*{mono}"),
            });
        }
        out.join("+")
    }

    /// Parses the polynomial grammar over `field` in variable `var`.
    pub fn parse(s: &str, field: &FieldSpec, var: char) -> Result<Self> {
        crate::expr::parse_poly(s, field, var)
    }
}

impl Ord for Poly {
    /// Canonical order: degree, then coefficients compared from the top.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_terms())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl std::ops::$tr<&Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("polynomial ring mismatch")
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, n: u32) -> FieldSpec {
        FieldSpec::new(p, n).unwrap()
    }

    fn parse(s: &str, f: &FieldSpec) -> Poly {
        Poly::parse(s, f, 'x').unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = gf(2, 1);
        let a = parse("x+1", &f2);
        assert_eq!(&a * &a, parse("x^2+1", &f2));
        let (q, r) = parse("x^3", &f2).divmod(&a).unwrap();
        assert_eq!(q, parse("x^2+x+1", &f2));
        assert_eq!(r, parse("1", &f2));
        assert_eq!(parse("x^2+x+1", &f2).derivative(), parse("1", &f2));
        assert!(parse("x", &f2).divmod(&Poly::zero(f2.clone(), 'x')).is_err());
    }

    #[test]
    fn gcd_examples() {
        let f2 = gf(2, 1);
        assert_eq!(parse("x^2+x", &f2).gcd(&parse("x", &f2)).unwrap(), parse("x", &f2));
        assert_eq!(parse("x^2+1", &f2).gcd(&parse("x+1", &f2)).unwrap(), parse("x+1", &f2));
        assert!(parse("x^3+x+1", &f2).gcd(&parse("x^2+x+1", &f2)).unwrap().is_one());
        let z = Poly::zero(f2.clone(), 'x');
        assert!(z.gcd(&z).is_err());
        let f3 = gf(3, 1);
        assert_eq!(parse("2*x+2", &f3).gcd(&parse("x^2-1", &f3)).unwrap(), parse("x+1", &f3));
    }

    #[test]
    fn xgcd_bezout() {
        let f9 = gf(3, 2);
        let a = parse("(a+1)*x^3+x+a", &f9);
        let b = parse("x^2+2*a", &f9);
        let (g, s, t) = a.xgcd(&b).unwrap();
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        assert_eq!(g, a.gcd(&b).unwrap());
    }

    #[test]
    fn mismatched_rings() {
        let a = Poly::x(gf(2, 1), 'x');
        let b = Poly::x(gf(3, 1), 'x');
        assert!(matches!(a.try_add(&b), Err(Error::Mismatch(_))));
        let c = Poly::x(gf(2, 1), 't');
        assert!(a.try_mul(&c).is_err());
    }

    #[test]
    fn display_grammar() {
        let f9 = gf(3, 2);
        let p = parse("(a+1)*x^2 + a", &f9);
        assert_eq!(p.to_string(), "(a+1)*x^2+a");
        assert_eq!(parse(&p.to_string(), &f9), p);
        let f3 = gf(3, 1);
        assert_eq!(parse("2x^2+2x", &f3).to_string(), "2*x^2+2*x");
        assert_eq!(Poly::zero(f3, 'x').to_string(), "0");
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = gf(2, 1);
        assert!(parse("x^2+x+1", &f2).is_irreducible().unwrap());
        assert!(!parse("x^2+1", &f2).is_irreducible().unwrap());
        assert!(parse("x^4+x+1", &f2).is_irreducible().unwrap());
        assert!(parse("1", &f2).is_irreducible().is_err());
        let f3 = gf(3, 1);
        assert!(parse("x^2+1", &f3).is_irreducible().unwrap());
        assert!(!parse("x^2+2", &f3).is_irreducible().unwrap());
        // x^2 - a over F_9 where a generates F_9^x with a^2 = -1, so a is not a square
        let f9 = gf(3, 2);
        assert!(!parse("x^2+1", &f9).is_irreducible().unwrap());
    }

    #[test]
    fn packed_and_dense_paths_agree() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f2 = gf(2, 1);
        for _ in 0..20 {
            let a = Poly::from_gf2(&Gf2Poly::random(90, &mut rng), 'x');
            let b = Poly::from_gf2(&Gf2Poly::random(70, &mut rng), 'x');
            let mut dense = vec![0u64; a.raw().len() + b.raw().len()];
            for (i, &x) in a.raw().iter().enumerate() {
                for (j, &y) in b.raw().iter().enumerate() {
                    dense[i + j] ^= x & y;
                }
            }
            assert_eq!(&a * &b, Poly::from_raw(f2.clone(), 'x', dense));
        }
    }
}
