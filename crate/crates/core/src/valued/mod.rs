//! Valued fields: value groups, valuation maps and their axioms, sections
//! of free value groups, and the splitting `K^× ≅ G × ker v`.

mod ordered;
mod probes;
mod section;

pub use ordered::{Dyadic, GroupKind, OrderedGroupElem};
pub use probes::{padic_valuation, parse_rational, DegreeMap, PAdic, PolyValuation};
pub use section::{recombine, section_free, split_unit, Section};

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;

/// A valuation value: a group element, or `∞` for the zero element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Finite(OrderedGroupElem),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&OrderedGroupElem> {
        match self {
            Value::Finite(g) => Some(g),
            Value::Infinity => None,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Ok(Value::Finite(a.try_add(b)?)),
            _ => Ok(Value::Infinity),
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => a.try_cmp(b),
            (Value::Infinity, Value::Infinity) => Ok(Ordering::Equal),
            (Value::Infinity, _) => Ok(Ordering::Greater),
            (_, Value::Infinity) => Ok(Ordering::Less),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(g) => write!(f, "{g}"),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A field (or ring) together with a candidate valuation map.
///
/// Implementors need not actually be valuations; [`check_valuation_axioms`]
/// is how that gets tested.
pub trait ValuedField {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn group(&self) -> GroupKind;

    /// `∞` exactly on zero.
    fn valuation(&self, x: &Self::Elem) -> Result<Value>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn zero(&self) -> Self::Elem;

    fn one(&self) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        let mut base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Finite valuation of a nonzero element.
    fn value_of(&self, x: &Self::Elem) -> Result<OrderedGroupElem> {
        match self.valuation(x)? {
            Value::Finite(g) => Ok(g),
            Value::Infinity => Err(crate::Error::ZeroInput("valuation")),
        }
    }
}

/// A value map plus a generator of nonzero sample elements.
pub trait ValuationProbe: ValuedField {
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Elements whose pairs are checked before any random sampling.
    fn fixtures(&self) -> Vec<Self::Elem> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `v(0) = ∞` and `v(x) < ∞` for `x ≠ 0`.
    Infinity,
    /// `v(xy) = v(x) + v(y)`.
    Multiplicative,
    /// `v(x + y) ≥ min(v(x), v(y))`.
    Ultrametric,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Infinity => "infinity",
            Axiom::Multiplicative => "multiplicative",
            Axiom::Ultrametric => "ultrametric",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxiomReport<E> {
    Pass { pairs: usize },
    Counterexample { x: E, y: E, axiom: Axiom },
}

impl<E> AxiomReport<E> {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomReport::Pass { .. })
    }
}

fn check_pair<K: ValuedField + ?Sized>(k: &K, x: &K::Elem, y: &K::Elem) -> Result<Option<Axiom>> {
    let vx = k.valuation(x)?;
    let vy = k.valuation(y)?;
    if vx == Value::Infinity || vy == Value::Infinity {
        return Ok(Some(Axiom::Infinity));
    }
    let vxy = k.valuation(&k.mul(x, y)?)?;
    if vxy != vx.try_add(&vy)? {
        return Ok(Some(Axiom::Multiplicative));
    }
    let s = k.add(x, y)?;
    if !k.is_zero(&s) {
        let lo = if vx.try_cmp(&vy)? == Ordering::Greater { &vy } else { &vx };
        if k.valuation(&s)?.try_cmp(lo)? == Ordering::Less {
            return Ok(Some(Axiom::Ultrametric));
        }
    }
    Ok(None)
}

/// Checks the valuation axioms on all fixture pairs and then on `trials`
/// seeded random pairs, stopping at the first violation.
pub fn check_valuation_axioms<K: ValuationProbe>(probe: &K, trials: usize, seed: u64) -> Result<AxiomReport<K::Elem>> {
    if trials == 0 {
        return Err(crate::Error::Invalid("at least one trial is required".into()));
    }
    let zero = probe.zero();
    if probe.valuation(&zero)? != Value::Infinity {
        return Ok(AxiomReport::Counterexample { x: zero.clone(), y: zero, axiom: Axiom::Infinity });
    }
    let fixtures = probe.fixtures();
    let mut pairs = 0;
    for (i, x) in fixtures.iter().enumerate() {
        for y in &fixtures[i..] {
            pairs += 1;
            if let Some(axiom) = check_pair(probe, x, y)? {
                return Ok(AxiomReport::Counterexample { x: x.clone(), y: y.clone(), axiom });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x = probe.sample(&mut rng);
        let y = if rng.gen_ratio(1, 8) { x.clone() } else { probe.sample(&mut rng) };
        pairs += 1;
        if let Some(axiom) = check_pair(probe, &x, &y)? {
            return Ok(AxiomReport::Counterexample { x, y, axiom });
        }
    }
    Ok(AxiomReport::Pass { pairs })
}
