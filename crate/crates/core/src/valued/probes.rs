//! Concrete value maps: `p`-adic on `Q`, `v_f` on `F_q(x)`, and the degree
//! map on `F_q[x]` (which is *not* a valuation).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use super::{GroupKind, OrderedGroupElem, Value, ValuationProbe, ValuedField};
use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Poly};
use crate::groups::is_prime;
use crate::ratfunc::{multiplicity, RatFunc};

/// Parses `n` or `n/d` as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let int = |x: &str| x.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {x:?}")));
    match t.split_once('/') {
        None => Ok(BigRational::from_integer(int(&t)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(int(n)?, d))
        }
    }
}

/// `v_p(r)` for nonzero rational `r`.
pub fn padic_valuation(r: &BigRational, p: u64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r.is_zero() {
        return Err(Error::ZeroInput("p-adic valuation"));
    }
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0i64;
        loop {
            let (q, rem) = n.div_rem(&p);
            if !rem.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    };
    Ok(count(r.numer()) - count(r.denom()))
}

/// The `p`-adic valuation on nonzero rationals.
#[derive(Debug, Clone)]
pub struct PAdic {
    p: u64,
}

impl PAdic {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
}

impl ValuedField for PAdic {
    type Elem = BigRational;

    fn group(&self) -> GroupKind {
        GroupKind::Int
    }

    fn valuation(&self, x: &BigRational) -> Result<Value> {
        if x.is_zero() {
            return Ok(Value::Infinity);
        }
        padic_valuation(x, self.p).map(|n| Value::Finite(OrderedGroupElem::Int(n)))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        Ok(a + b)
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        Ok(a * b)
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::ZeroInput("inverse"));
        }
        Ok(a.recip())
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl ValuationProbe for PAdic {
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let num: i64 = rng.gen_range(1..=100_000) * if rng.gen() { 1 } else { -1 };
        let den: i64 = rng.gen_range(1..=100_000);
        let k: i32 = rng.gen_range(-6..=6);
        let pk = BigRational::from_integer(BigInt::from(self.p)).pow(k);
        BigRational::new(num.into(), den.into()) * pk
    }

    fn fixtures(&self) -> Vec<BigRational> {
        let p = BigRational::from_integer(BigInt::from(self.p));
        vec![BigRational::one(), p.clone(), p.recip(), &p - BigRational::one()]
    }
}

/// `v_f` on `F_q(x)` for a monic irreducible `f`.
#[derive(Debug, Clone)]
pub struct PolyValuation {
    f: Poly,
    max_deg: usize,
}

impl PolyValuation {
    pub fn new(f: Poly) -> Result<Self> {
        if !f.is_monic() {
            return Err(Error::NotMonic(f.to_string()));
        }
        if f.is_constant() || !f.is_irreducible()? {
            return Err(Error::Reducible(f.to_string()));
        }
        Ok(Self { f, max_deg: 6 })
    }

    pub fn at(&self) -> &Poly {
        &self.f
    }

    pub fn field(&self) -> &FieldSpec {
        self.f.field()
    }

    pub fn var(&self) -> char {
        self.f.var()
    }

    /// `f` itself, the canonical uniformizer.
    pub fn uniformizer(&self) -> RatFunc {
        RatFunc::from_poly(self.f.clone())
    }
}

impl ValuedField for PolyValuation {
    type Elem = RatFunc;

    fn group(&self) -> GroupKind {
        GroupKind::Int
    }

    fn valuation(&self, x: &RatFunc) -> Result<Value> {
        if x.is_zero() {
            return Ok(Value::Infinity);
        }
        if x.field() != self.f.field() || x.var() != self.f.var() {
            return Err(Error::Mismatch(format!("{x:?} vs {:?}", self.f)));
        }
        let n = multiplicity(x.num(), &self.f)? - multiplicity(x.den(), &self.f)?;
        Ok(Value::Finite(OrderedGroupElem::Int(n)))
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        a.try_add(b)
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        a.try_mul(b)
    }

    fn inv(&self, a: &RatFunc) -> Result<RatFunc> {
        a.inv()
    }

    fn zero(&self) -> RatFunc {
        RatFunc::zero(self.field().clone(), self.var())
    }

    fn one(&self) -> RatFunc {
        RatFunc::one(self.field().clone(), self.var())
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }

    fn pow(&self, a: &RatFunc, e: i64) -> Result<RatFunc> {
        a.pow(e)
    }
}

impl ValuationProbe for PolyValuation {
    fn sample(&self, rng: &mut dyn RngCore) -> RatFunc {
        let base = RatFunc::random(self.field(), self.var(), self.max_deg, true, rng);
        let k = rng.gen_range(-3..=3);
        base.try_mul(&self.uniformizer().pow(k).expect("nonzero")).expect("same ring")
    }

    fn fixtures(&self) -> Vec<RatFunc> {
        let one = self.one();
        let f = self.uniformizer();
        vec![one.clone(), f.clone(), f.inv().expect("nonzero"), f.try_add(&one).expect("same ring")]
    }
}

/// `deg` on `F_q[x] \ {0}`, a counterexample generator: multiplicative but
/// not ultrametric.
#[derive(Debug, Clone)]
pub struct DegreeMap {
    field: FieldSpec,
    var: char,
}

impl DegreeMap {
    pub fn new(field: FieldSpec, var: char) -> Self {
        Self { field, var }
    }
}

impl ValuedField for DegreeMap {
    type Elem = Poly;

    fn group(&self) -> GroupKind {
        GroupKind::Int
    }

    fn valuation(&self, x: &Poly) -> Result<Value> {
        Ok(match x.degree() {
            None => Value::Infinity,
            Some(d) => Value::Finite(OrderedGroupElem::Int(d as i64)),
        })
    }

    fn add(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        a.try_add(b)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        a.try_mul(b)
    }

    fn inv(&self, a: &Poly) -> Result<Poly> {
        match a.degree() {
            Some(0) => Ok(Poly::constant(self.field.clone(), self.var, self.field.inv(a.coeff(0)).expect("nonzero"))),
            _ => Err(Error::Invalid(format!("{a} is not a unit in F_q[{}]", self.var))),
        }
    }

    fn zero(&self) -> Poly {
        Poly::zero(self.field.clone(), self.var)
    }

    fn one(&self) -> Poly {
        Poly::one(self.field.clone(), self.var)
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
}

impl ValuationProbe for DegreeMap {
    fn sample(&self, rng: &mut dyn RngCore) -> Poly {
        loop {
            let d = rng.gen_range(0..=8);
            let p = Poly::from_raw(self.field.clone(), self.var, (0..=d).map(|_| self.field.random(rng)).collect());
            if !p.is_zero() {
                return p;
            }
        }
    }

    fn fixtures(&self) -> Vec<Poly> {
        let x = Poly::x(self.field.clone(), self.var);
        let x1 = &x + &self.one();
        vec![x, x1]
    }
}

#[cfg(test)]
mod tests {
    use super::super::{check_valuation_axioms, Axiom, AxiomReport};
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn padic_examples() {
        assert_eq!(padic_valuation(&q(12, 1), 2).unwrap(), 2);
        assert_eq!(padic_valuation(&q(1, 9), 3).unwrap(), -2);
        assert_eq!(padic_valuation(&q(7, 1), 5).unwrap(), 0);
        assert_eq!(padic_valuation(&q(-50, 3), 5).unwrap(), 2);
        assert!(padic_valuation(&q(0, 1), 5).is_err());
        assert_eq!(padic_valuation(&q(3, 1), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/9").unwrap(), q(1, 9));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("12").unwrap(), q(12, 1));
        assert_eq!(parse_rational("1/0"), Err(Error::DivisionByZero));
        assert!(parse_rational("1/x").unwrap_err().is_parse());
    }

    #[test]
    fn padic_against_trial_division() {
        for n in 1i64..400 {
            for p in [2u64, 3, 5, 7] {
                let mut m = n;
                let mut k = 0;
                while m % p as i64 == 0 {
                    m /= p as i64;
                    k += 1;
                }
                assert_eq!(padic_valuation(&q(n, 1), p).unwrap(), k);
                assert_eq!(padic_valuation(&q(1, n), p).unwrap(), -k);
            }
        }
    }

    #[test]
    fn probes_pass() {
        for p in [2, 3, 5] {
            assert!(check_valuation_axioms(&PAdic::new(p).unwrap(), 200, 1).unwrap().passed());
        }
        let f2 = FieldSpec::prime(2).unwrap();
        let v = PolyValuation::new(Poly::parse("x", &f2, 'x').unwrap()).unwrap();
        assert!(check_valuation_axioms(&v, 200, 1).unwrap().passed());
    }

    #[test]
    fn degree_is_not_a_valuation() {
        let f2 = FieldSpec::prime(2).unwrap();
        let r = check_valuation_axioms(&DegreeMap::new(f2.clone(), 'x'), 10, 0).unwrap();
        let x = Poly::parse("x", &f2, 'x').unwrap();
        let x1 = Poly::parse("x+1", &f2, 'x').unwrap();
        assert_eq!(r, AxiomReport::Counterexample { x, y: x1, axiom: Axiom::Ultrametric });
    }

    #[test]
    fn rejects_bad_centres() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(PolyValuation::new(Poly::parse("x^2+1", &f2, 'x').unwrap()).is_err());
        assert!(PolyValuation::new(Poly::parse("1", &f2, 'x').unwrap()).is_err());
        assert!(PAdic::new(1).is_err());
        assert!(check_valuation_axioms(&PAdic::new(2).unwrap(), 0, 0).is_err());
    }
}
