use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::Value;

use super::RatFunc;
use crate::error::{Error, Result};
use crate::gf::factor::factor_with_rng;
use crate::gf::{FieldSpec, FqElem, Poly};

/// An element of `F_q^× ⊕ (⊕_f Z)`: a nonzero constant together with
/// integer exponents on monic irreducible polynomials.
///
/// Factors are kept in canonical order (degree, then coefficients from the
/// top); the order is a storage convention only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDecomposition {
    constant: FqElem,
    var: char,
    factors: Vec<(Poly, i64)>,
}

impl UnitDecomposition {
    /// Validates and canonicalizes: factors must be monic irreducible over
    /// the constant's field, pairwise distinct, with nonzero exponents.
    pub fn new(constant: FqElem, var: char, mut factors: Vec<(Poly, i64)>) -> Result<Self> {
        if constant.is_zero() {
            return Err(Error::Invalid("constant part must be nonzero".into()));
        }
        for (f, e) in &factors {
            if f.field() != constant.field() || f.var() != var {
                return Err(Error::Mismatch(format!("factor {f} is not in {}[{var}]", constant.field())));
            }
            if *e == 0 {
                return Err(Error::Invalid(format!("zero exponent on {f}")));
            }
            if !f.is_monic() {
                return Err(Error::NotMonic(f.to_string()));
            }
            if f.is_constant() || !f.is_irreducible()? {
                return Err(Error::Reducible(f.to_string()));
            }
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Invalid("repeated factor".into()));
        }
        Ok(Self { constant, var, factors })
    }

    /// The identity element.
    pub fn one(field: &FieldSpec, var: char) -> Self {
        Self { constant: field.elem(1), var, factors: Vec::new() }
    }

    pub fn constant(&self) -> &FqElem {
        &self.constant
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn factors(&self) -> &[(Poly, i64)] {
        &self.factors
    }

    /// Exponent of `f` (0 when absent).
    pub fn exponent_of(&self, f: &Poly) -> i64 {
        self.factors
            .binary_search_by(|(g, _)| g.cmp(f))
            .map_or(0, |i| self.factors[i].1)
    }

    /// Group law: multiply constants, add exponents.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        let constant = self.constant.try_mul(&other.constant)?;
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            let ord = match (self.factors.get(i), other.factors.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    factors.push(self.factors[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    factors.push(other.factors[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = self.factors[i].1 + other.factors[j].1;
                    if e != 0 {
                        factors.push((self.factors[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self { constant, var: self.var, factors })
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Reads the `{"constant": ..., "factors": [{"poly": ..., "exp": ...}]}` form.
    pub fn from_json(v: &Value, field: &FieldSpec, var: char) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("unit decomposition JSON: {m}"));
        let c = v.get("constant").and_then(Value::as_str).ok_or_else(|| bad("missing constant"))?;
        let cpoly = Poly::parse(c, field, var)?;
        if !cpoly.is_constant() {
            return Err(bad("constant is not a field element"));
        }
        let constant = field.elem(cpoly.coeff(0));
        let arr = v.get("factors").and_then(Value::as_array).ok_or_else(|| bad("missing factors"))?;
        let factors = arr
            .iter()
            .map(|item| {
                let p = item.get("poly").and_then(Value::as_str).ok_or_else(|| bad("factor without poly"))?;
                let e = item.get("exp").and_then(Value::as_i64).ok_or_else(|| bad("factor without exp"))?;
                Ok((Poly::parse(p, field, var)?, e))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(constant, var, factors)
    }
}

struct FactorEntry<'a>(&'a Poly, i64);

impl Serialize for FactorEntry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("poly", &self.0.to_string())?;
        m.serialize_entry("exp", &self.1)?;
        m.end()
    }
}

struct FactorList<'a>(&'a [(Poly, i64)]);

impl Serialize for FactorList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (f, e) in self.0 {
            seq.serialize_element(&FactorEntry(f, *e))?;
        }
        seq.end()
    }
}

impl Serialize for UnitDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("constant", &self.constant.to_string())?;
        m.serialize_entry("factors", &FactorList(&self.factors))?;
        m.end()
    }
}

impl fmt::Display for UnitDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (p, e) in &self.factors {
            write!(f, " * ({p})^{e}")?;
        }
        Ok(())
    }
}

/// Writes a nonzero rational function as `constant * prod f^{e_f}`.
pub fn decompose(q: &RatFunc, seed: u64) -> Result<UnitDecomposition> {
    if q.is_zero() {
        return Err(Error::ZeroInput("unit decomposition"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num = factor_with_rng(q.num(), &mut rng)?;
    let den = factor_with_rng(q.den(), &mut rng)?;
    let mut factors: Vec<(Poly, i64)> = num
        .factors
        .into_iter()
        .map(|(f, e)| (f, e as i64))
        .chain(den.factors.into_iter().map(|(f, e)| (f, -(e as i64))))
        .collect();
    // numerator and denominator are coprime, so no factor repeats
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(UnitDecomposition { constant: num.unit, var: q.var(), factors })
}

/// Multiplies a decomposition back out.
pub fn recompose(d: &UnitDecomposition) -> RatFunc {
    let field = d.constant.field().clone();
    let mut num = Poly::constant(field.clone(), d.var, d.constant.value());
    let mut den = Poly::one(field, d.var);
    for (f, e) in &d.factors {
        let k = e.unsigned_abs();
        if *e > 0 {
            num = &num * &f.pow(k);
        } else {
            den = &den * &f.pow(k);
        }
    }
    RatFunc::new(num, den).expect("nonzero denominator")
}

pub(crate) fn multiplicity(p: &Poly, f: &Poly) -> Result<i64> {
    let mut n = 0;
    let mut cur = p.clone();
    loop {
        let (q, r) = cur.divmod(f)?;
        if !r.is_zero() {
            return Ok(n);
        }
        cur = q;
        n += 1;
    }
}

/// The discrete valuation `v_f` at a monic irreducible `f`: the `n` with
/// `q = f^n * a/b` and `f` dividing neither `a` nor `b`.
pub fn valuation_at(q: &RatFunc, f: &Poly) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroInput("finite valuation"));
    }
    if f.field() != q.field() || f.var() != q.var() {
        return Err(Error::Mismatch(format!("{f:?} vs {q:?}")));
    }
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    if f.is_constant() || !f.is_irreducible()? {
        return Err(Error::Reducible(f.to_string()));
    }
    Ok(multiplicity(q.num(), f)? - multiplicity(q.den(), f)?)
}
