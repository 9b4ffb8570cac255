//! The perfect closure `⋃_k F_2(t^{1/2^k})` of `F_2(t)`.
//!
//! An element at level `k` is a reduced fraction of polynomials in
//! `s = t^{1/2^k}`, stored at the smallest level that can hold it.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::{EvalContext, Exponent};
use crate::gf::{FieldSpec, Gf2Poly, Poly};
use crate::hahn::HahnSeries;
use crate::valued::{Dyadic, OrderedGroupElem};

/// A polynomial in `t` with exponents in `Z[1/2]_{≥0}` over `F_2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicPoly {
    level: u32,
    poly: Gf2Poly,
}

impl DyadicPoly {
    /// `poly(t^{1/2^level})`.
    pub fn new(level: u32, poly: Gf2Poly) -> Self {
        let mut out = Self { level, poly };
        while out.level > 0 {
            match out.poly.sqrt() {
                Some(r) => {
                    out.poly = r;
                    out.level -= 1;
                }
                None => break,
            }
        }
        out
    }

    pub fn from_exponents(exps: &[Dyadic]) -> Result<Self> {
        let level = exps.iter().map(Dyadic::exp).max().unwrap_or(0);
        let mut p = Gf2Poly::zero();
        for e in exps {
            let i = e
                .scaled_integer(level)
                .filter(|&i| i >= 0)
                .ok_or_else(|| Error::Invalid(format!("negative exponent {e}")))?;
            p = p.add(&Gf2Poly::monomial(i as usize));
        }
        Ok(Self::new(level, p))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The underlying polynomial in `t^{1/2^level}`.
    pub fn poly(&self) -> &Gf2Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Support, increasing.
    pub fn exponents(&self) -> Vec<Dyadic> {
        (0..=self.poly.degree().unwrap_or(0))
            .filter(|&i| self.poly.coeff(i))
            .map(|i| Dyadic::new(i as i64, self.level))
            .collect()
    }

    /// The same element as a `Z[1/2]`-exponent Hahn series over `F_2`.
    pub fn to_hahn(&self) -> HahnSeries {
        let f2 = FieldSpec::prime(2).expect("2 is prime");
        let terms = self.exponents().into_iter().map(|e| (OrderedGroupElem::Dyadic(e), 1)).collect();
        HahnSeries::new(f2, crate::valued::GroupKind::Dyadic, terms, None).expect("dyadic exponents")
    }
}

fn fmt_dyadic_poly(level: u32, p: &Gf2Poly, var: char) -> String {
    let Some(deg) = p.degree() else {
        return "0".into();
    };
    let parts: Vec<String> = (0..=deg)
        .rev()
        .filter(|&i| p.coeff(i))
        .map(|i| {
            let e = Dyadic::new(i as i64, level);
            if e.is_zero() {
                "1".into()
            } else if e == Dyadic::integer(1) {
                var.to_string()
            } else if e.is_integer() {
                format!("{var}^{e}")
            } else {
                format!("{var}^({e})")
            }
        })
        .collect();
    parts.join("+")
}

impl fmt::Display for DyadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_dyadic_poly(self.level, &self.poly, 't'))
    }
}

impl fmt::Debug for DyadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element of the perfect closure of `F_2(t)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicRatFunc {
    level: u32,
    num: Gf2Poly,
    den: Gf2Poly,
}

impl DyadicRatFunc {
    /// `num(s)/den(s)` with `s = t^{1/2^level}`, reduced and normalized.
    pub fn new(level: u32, num: Gf2Poly, den: Gf2Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let mut level = level;
        while level > 0 {
            match (num.sqrt(), den.sqrt()) {
                (Some(a), Some(b)) => {
                    num = a;
                    den = b;
                    level -= 1;
                }
                _ => break,
            }
        }
        Ok(Self { level, num, den })
    }

    pub fn zero() -> Self {
        Self { level: 0, num: Gf2Poly::zero(), den: Gf2Poly::one() }
    }

    pub fn one() -> Self {
        Self { level: 0, num: Gf2Poly::one(), den: Gf2Poly::one() }
    }

    pub fn t() -> Self {
        Self { level: 0, num: Gf2Poly::x(), den: Gf2Poly::one() }
    }

    pub fn from_poly(p: &DyadicPoly) -> Self {
        Self { level: p.level, num: p.poly.clone(), den: Gf2Poly::one() }
    }

    /// An element of `F_2(t)`, which must be over `GF(2)`.
    pub fn from_ratfunc(q: &crate::ratfunc::RatFunc) -> Result<Self> {
        if !q.field().is_gf2() {
            return Err(Error::Mismatch(format!("{} is not GF(2)", q.field())));
        }
        Self::new(0, q.num().to_gf2(), q.den().to_gf2())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn num(&self) -> DyadicPoly {
        DyadicPoly { level: self.level, poly: self.num.clone() }
    }

    pub fn den(&self) -> DyadicPoly {
        DyadicPoly { level: self.level, poly: self.den.clone() }
    }

    /// Numerator and denominator in `t^{1/2^level}` for `level ≥ self.level`.
    pub fn at_level(&self, level: u32) -> (Gf2Poly, Gf2Poly) {
        assert!(level >= self.level, "cannot lower the level");
        let k = level - self.level;
        (self.num.frobenius(k), self.den.frobenius(k))
    }

    fn lift2(&self, other: &Self) -> (u32, (Gf2Poly, Gf2Poly), (Gf2Poly, Gf2Poly)) {
        let l = self.level.max(other.level);
        (l, self.at_level(l), other.at_level(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (l, (a, b), (c, d)) = self.lift2(other);
        Self::new(l, a.mul(&d).add(&c.mul(&b)), b.mul(&d)).expect("nonzero denominators")
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (l, (a, b), (c, d)) = self.lift2(other);
        Self::new(l, a.mul(&c), b.mul(&d)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("inverse"));
        }
        Self::new(self.level, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Self::new(base.level, base.num.pow(k), base.den.pow(k))
    }

    /// `Q ↦ Q^2`.
    pub fn frobenius(&self) -> Self {
        if self.level > 0 {
            Self { level: self.level - 1, num: self.num.clone(), den: self.den.clone() }
        } else {
            Self { level: 0, num: self.num.square(), den: self.den.square() }
        }
    }

    /// The unique square root.
    pub fn frobenius_inv(&self) -> Self {
        Self::new(self.level + 1, self.num.clone(), self.den.clone()).expect("nonzero denominator")
    }

    /// Smallest `k` with `Q ∈ F_2(t^{1/2^k})`.
    pub fn level(&self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroInput("level"));
        }
        Ok(self.level)
    }

    pub fn random<R: Rng + ?Sized>(max_level: u32, max_deg: usize, nonzero: bool, rng: &mut R) -> Self {
        loop {
            let level = rng.gen_range(0..=max_level);
            let num = Gf2Poly::random(rng.gen_range(0..=max_deg) + 1, rng);
            let mut den = Gf2Poly::random(rng.gen_range(0..=max_deg) + 1, rng);
            if den.is_zero() {
                den = Gf2Poly::one();
            }
            if nonzero && num.is_zero() {
                continue;
            }
            return Self::new(level, num, den).expect("nonzero denominator");
        }
    }

    /// Parses expressions in `t` whose exponents may be dyadic, e.g.
    /// `t^(1/2)+t^(3/2)` or `(t+1)^(-1/4)`.
    pub fn parse(s: &str) -> Result<Self> {
        PerfectContext.parse(s)
    }
}

/// `pc_level` as a free function.
pub fn pc_level(q: &DyadicRatFunc) -> Result<u32> {
    q.level()
}

impl fmt::Display for DyadicRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_dyadic_poly(self.level, &self.num, 't');
        if self.den.is_one() {
            return f.write_str(&n);
        }
        let d = fmt_dyadic_poly(self.level, &self.den, 't');
        let wrap = |s: String| if s.contains('+') || s.contains('^') { format!("({s})") } else { s };
        write!(f, "{}/{}", wrap(n), wrap(d))
    }
}

impl fmt::Debug for DyadicRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct PerfectContext;

impl EvalContext for PerfectContext {
    type Value = DyadicRatFunc;

    fn int(&self, n: u64) -> Result<DyadicRatFunc> {
        Ok(if n.is_multiple_of(2) { DyadicRatFunc::zero() } else { DyadicRatFunc::one() })
    }

    fn symbol(&self, c: char) -> Result<DyadicRatFunc> {
        if c == 't' {
            Ok(DyadicRatFunc::t())
        } else {
            Err(Error::Parse(format!("unknown symbol '{c}' (the variable is t)")))
        }
    }

    fn add(&self, a: DyadicRatFunc, b: DyadicRatFunc) -> Result<DyadicRatFunc> {
        Ok(a.add(&b))
    }

    fn sub(&self, a: DyadicRatFunc, b: DyadicRatFunc) -> Result<DyadicRatFunc> {
        Ok(a.add(&b))
    }

    fn neg(&self, a: DyadicRatFunc) -> Result<DyadicRatFunc> {
        Ok(a)
    }

    fn mul(&self, a: DyadicRatFunc, b: DyadicRatFunc) -> Result<DyadicRatFunc> {
        Ok(a.mul(&b))
    }

    fn div(&self, a: DyadicRatFunc, b: DyadicRatFunc) -> Result<DyadicRatFunc> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        a.div(&b)
    }

    fn pow(&self, a: DyadicRatFunc, e: Exponent) -> Result<DyadicRatFunc> {
        let d = Dyadic::from_fraction(e.num, e.den).map_err(|err| Error::Parse(err.to_string()))?;
        if d.num() < 0 && a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = a.pow(d.num())?;
        for _ in 0..d.exp() {
            r = r.frobenius_inv();
        }
        Ok(r)
    }
}

/// `Q = ∏ f^{e_f}` with `f` monic irreducible in `F_2[t]` and `e_f ∈ Z[1/2]`.
#[derive(Clone, PartialEq, Eq)]
pub struct PcDecomposition {
    factors: Vec<(Poly, Dyadic)>,
}

impl PcDecomposition {
    /// Validates, merges repeated factors and sorts.
    pub fn new(mut factors: Vec<(Poly, Dyadic)>) -> Result<Self> {
        for (f, _) in &factors {
            if !f.field().is_gf2() {
                return Err(Error::Mismatch(format!("{f} is not over GF(2)")));
            }
            if f.is_constant() || !f.is_irreducible()? {
                return Err(Error::Reducible(f.to_string()));
            }
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Poly, Dyadic)> = Vec::new();
        for (f, e) in factors {
            match out.last_mut() {
                Some((g, acc)) if *g == f => *acc = acc.add(&e),
                _ => out.push((f, e)),
            }
        }
        out.retain(|(_, e)| !e.is_zero());
        Ok(Self { factors: out })
    }

    pub fn one() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[(Poly, Dyadic)] {
        &self.factors
    }

    pub fn exponent_of(&self, f: &Poly) -> Dyadic {
        self.factors
            .iter()
            .find(|(g, _)| g == f)
            .map_or(Dyadic::ZERO, |(_, e)| *e)
    }

    pub fn combine(&self, other: &Self) -> Self {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        Self::new(all).expect("already validated")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.factors.iter().map(|(f, e)| json!({"poly": f.to_string(), "exp": e.to_string()})).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let f2 = FieldSpec::prime(2).expect("2 is prime");
        let items = v
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected an object with a \"factors\" array".into()))?;
        let factors = items
            .iter()
            .map(|item| {
                let p = item.get("poly").and_then(Value::as_str).ok_or_else(|| Error::Parse("factor without \"poly\"".into()))?;
                let e = match item.get("exp") {
                    Some(Value::String(s)) => OrderedGroupElem::parse(s, crate::valued::GroupKind::Dyadic)?,
                    Some(Value::Number(n)) => OrderedGroupElem::Dyadic(Dyadic::integer(
                        n.as_i64().ok_or_else(|| Error::Parse(format!("bad exponent {n}")))?,
                    )),
                    _ => return Err(Error::Parse("factor without \"exp\"".into())),
                };
                let OrderedGroupElem::Dyadic(e) = e else { unreachable!() };
                Ok((Poly::parse(p, &f2, 't')?, e))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }
}

impl Serialize for PcDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for PcDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                let base = if p.to_string().contains('+') { format!("({p})") } else { p.to_string() };
                if *e == Dyadic::integer(1) {
                    base
                } else if e.is_integer() && e.num() > 0 {
                    format!("{base}^{e}")
                } else {
                    format!("{base}^({e})")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for PcDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Factors `Q` as `∏ f^{e_f}` over monic irreducibles of `F_2[t]`.
pub fn pc_decompose(q: &DyadicRatFunc, seed: u64) -> Result<PcDecomposition> {
    if q.is_zero() {
        return Err(Error::ZeroInput("perfect-closure decomposition"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (p, sign) in [(&q.num, 1i64), (&q.den, -1i64)] {
        for (f, m) in p.factor(&mut rng)? {
            factors.push((Poly::from_gf2(&f, 't'), Dyadic::new(sign * m as i64, q.level)));
        }
    }
    PcDecomposition::new(factors)
}

/// Inverse of [`pc_decompose`].
pub fn pc_recompose(d: &PcDecomposition) -> DyadicRatFunc {
    let level = d.factors.iter().map(|(_, e)| e.exp()).max().unwrap_or(0);
    let mut num = Gf2Poly::one();
    let mut den = Gf2Poly::one();
    for (f, e) in &d.factors {
        let m = e.scaled_integer(level).expect("level covers every exponent");
        let fp = f.to_gf2().pow(m.unsigned_abs());
        if m > 0 {
            num = num.mul(&fp);
        } else {
            den = den.mul(&fp);
        }
    }
    DyadicRatFunc::new(level, num, den).expect("nonzero denominator")
}
