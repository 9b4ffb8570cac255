//! The rational function field `F_q(x)`.

mod decomp;
mod rank;

pub use decomp::{decompose, recompose, valuation_at, UnitDecomposition};
pub(crate) use decomp::multiplicity;
pub use rank::{exponent_matrix, integer_rank, multiplicative_rank, ExponentMatrix};

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::{generator_symbol, unknown_symbol, EvalContext, Exponent};
use crate::gf::{FieldSpec, Poly};

/// A reduced fraction `num / den` with `den` monic; zero is `0/1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Reduces `num / den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() || num.var() != den.var() {
            return Err(Error::Mismatch("numerator and denominator rings differ".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field().clone(), num.var()));
        }
        let g = num.gcd(&den)?;
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let field = den.field().clone();
        let inv = field.inv(den.leading()).expect("nonzero");
        if inv != 1 {
            num = num.scale(inv);
            den = den.scale(inv);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field().clone(), p.var());
        Self { num: p, den }
    }

    pub fn zero(field: FieldSpec, var: char) -> Self {
        Self::from_poly(Poly::zero(field, var))
    }

    pub fn one(field: FieldSpec, var: char) -> Self {
        Self::from_poly(Poly::one(field, var))
    }

    pub fn constant(field: FieldSpec, var: char, c: u64) -> Self {
        Self::from_poly(Poly::constant(field, var, c))
    }

    pub fn x(field: FieldSpec, var: char) -> Self {
        Self::from_poly(Poly::x(field, var))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &FieldSpec {
        self.num.field()
    }

    pub fn var(&self) -> char {
        self.num.var()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The encoded constant when `self` lies in `F_q`.
    pub fn as_constant(&self) -> Option<u64> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.den == other.den {
            return Self::new(self.num.try_add(&other.num)?, self.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(num, self.den.try_mul(&other.den)?)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        // cross-cancel first to keep the gcd small
        let g1 = if self.num.is_zero() || other.den.is_one() { None } else { Some(self.num.gcd(&other.den)?) };
        let g2 = if other.num.is_zero() || self.den.is_one() { None } else { Some(other.num.gcd(&self.den)?) };
        let cut = |p: &Poly, g: &Option<Poly>| -> Result<Poly> {
            match g {
                Some(g) if !g.is_one() => p.div_exact(g),
                _ => Ok(p.clone()),
            }
        };
        let a = cut(&self.num, &g1)?;
        let d2 = cut(&other.den, &g1)?;
        let b = cut(&other.num, &g2)?;
        let d1 = cut(&self.den, &g2)?;
        Self::new(a.try_mul(&b)?, d1.try_mul(&d2)?)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("inverse"));
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Self { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Uniform-ish random element with numerator and denominator of degree
    /// at most `max_deg`; never zero when `nonzero` is set.
    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, var: char, max_deg: usize, nonzero: bool, rng: &mut R) -> Self {
        loop {
            let dn = rng.gen_range(0..=max_deg);
            let dd = rng.gen_range(0..=max_deg);
            let num = Poly::from_raw(field.clone(), var, (0..=dn).map(|_| field.random(rng)).collect());
            let mut dc: Vec<u64> = (0..dd).map(|_| field.random(rng)).collect();
            dc.push(1);
            let den = Poly::from_raw(field.clone(), var, dc);
            if nonzero && num.is_zero() {
                continue;
            }
            return Self::new(num, den).expect("monic denominator");
        }
    }

    pub fn parse(s: &str, field: &FieldSpec, var: char) -> Result<Self> {
        RatFuncContext { field, var }.parse(s)
    }
}

fn wrap(p: &Poly) -> String {
    let s = p.to_string();
    if s.contains('+') || s.contains('*') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field())
    }
}

macro_rules! rf_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl std::ops::$tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                self.$try(rhs).expect("rational function operands incompatible")
            }
        }
    };
}

rf_binop!(Add, add, try_add);
rf_binop!(Sub, sub, try_sub);
rf_binop!(Mul, mul, try_mul);

/// Evaluates expressions as elements of `F_q(var)`.
pub struct RatFuncContext<'a> {
    pub field: &'a FieldSpec,
    pub var: char,
}

impl EvalContext for RatFuncContext<'_> {
    type Value = RatFunc;

    fn int(&self, n: u64) -> Result<RatFunc> {
        Ok(RatFunc::constant(self.field.clone(), self.var, n % self.field.characteristic()))
    }

    fn symbol(&self, c: char) -> Result<RatFunc> {
        if c == self.var {
            return Ok(RatFunc::x(self.field.clone(), self.var));
        }
        generator_symbol(self.field, c)
            .map(|g| RatFunc::constant(self.field.clone(), self.var, g))
            .ok_or_else(|| unknown_symbol(c))
    }

    fn add(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        a.try_add(&b)
    }

    fn sub(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        a.try_sub(&b)
    }

    fn neg(&self, a: RatFunc) -> Result<RatFunc> {
        Ok(a.neg())
    }

    fn mul(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        a.try_mul(&b)
    }

    fn div(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        a.try_div(&b)
    }

    fn pow(&self, a: RatFunc, e: Exponent) -> Result<RatFunc> {
        let k = e
            .integer()
            .ok_or_else(|| Error::Parse(format!("fractional exponent {}/{} in F_q(x)", e.num, e.den)))?;
        a.pow(k)
    }
}
