//! Ordered abelian value groups: `Z`, `Z^k` under lexicographic order, and
//! the dyadic rationals `Z[1/2]`.
//!
//! Arithmetic on these is plain machine-integer arithmetic and panics on
//! overflow.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A dyadic rational `num / 2^exp`, reduced (`num` odd or `exp == 0`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };

    pub fn new(num: i64, exp: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros().min(exp);
        Self { num: num >> tz, exp: exp - tz }
    }

    pub fn integer(n: i64) -> Self {
        Self { num: n, exp: 0 }
    }

    /// From `num/den` where `den` must be a power of two.
    pub fn from_fraction(num: i64, den: u64) -> Result<Self> {
        if den == 0 || !den.is_power_of_two() {
            return Err(Error::Invalid(format!("{num}/{den} is not dyadic")));
        }
        Ok(Self::new(num, den.trailing_zeros()))
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    /// `k` in the denominator `2^k`.
    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    fn aligned(&self, other: &Self) -> (i128, i128, u32) {
        let e = self.exp.max(other.exp);
        let a = (self.num as i128) << (e - self.exp);
        let b = (other.num as i128) << (e - other.exp);
        (a, b, e)
    }

    fn from_i128(num: i128, exp: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros().min(exp);
        let n = i64::try_from(num >> tz).expect("dyadic numerator overflow");
        Self { num: n, exp: exp - tz }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Self::from_i128(a + b, e)
    }

    pub fn neg(&self) -> Self {
        Self { num: -self.num, exp: self.exp }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::from_i128(self.num as i128 * k as i128, self.exp)
    }

    /// `self / 2^k`.
    pub fn halve(&self, k: u32) -> Self {
        Self::new(self.num, self.exp + k)
    }

    /// `self * 2^k`.
    pub fn double(&self, k: u32) -> Self {
        if k <= self.exp {
            Self { num: self.num, exp: self.exp - k }
        } else {
            Self::from_i128((self.num as i128) << (k - self.exp), 0)
        }
    }

    /// `self * 2^k` as an integer when that is exact.
    pub fn scaled_integer(&self, k: u32) -> Option<i64> {
        (self.exp <= k).then(|| self.double(k).num)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which value group an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    Int,
    Lex(usize),
    Dyadic,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Int => write!(f, "Z"),
            GroupKind::Lex(k) => write!(f, "Z^{k} (lex)"),
            GroupKind::Dyadic => write!(f, "Z[1/2]"),
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;

    /// Accepts `Z`, `Z^k` (lexicographic) and `Z[1/2]`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.strip_suffix("(lex)").unwrap_or(&t);
        match t {
            "Z" => Ok(GroupKind::Int),
            "Z[1/2]" => Ok(GroupKind::Dyadic),
            _ => {
                let k = t
                    .strip_prefix("Z^")
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::Parse(format!("expected Z, Z^k or Z[1/2], got {s:?}")))?;
                Ok(GroupKind::Lex(k))
            }
        }
    }
}

/// An element of one of the supported ordered abelian groups.
///
/// `Ord` is total across variants (variants compare by kind first) so the
/// type can key ordered maps; use [`OrderedGroupElem::try_cmp`] when mixing
/// kinds should be an error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum OrderedGroupElem {
    Int(i64),
    Lex(Vec<i64>),
    Dyadic(Dyadic),
}

impl OrderedGroupElem {
    pub fn zero(kind: GroupKind) -> Self {
        match kind {
            GroupKind::Int => Self::Int(0),
            GroupKind::Lex(k) => Self::Lex(vec![0; k]),
            GroupKind::Dyadic => Self::Dyadic(Dyadic::ZERO),
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            Self::Int(_) => GroupKind::Int,
            Self::Lex(v) => GroupKind::Lex(v.len()),
            Self::Dyadic(_) => GroupKind::Dyadic,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Int(n) => *n == 0,
            Self::Lex(v) => v.iter().all(|&x| x == 0),
            Self::Dyadic(d) => d.is_zero(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.kind() != other.kind() {
            return Err(Error::Mismatch(format!("{} vs {}", self.kind(), other.kind())));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (self, other) {
            (Self::Int(a), Self::Int(b)) => Self::Int(a.checked_add(*b).expect("value overflow")),
            (Self::Lex(a), Self::Lex(b)) => Self::Lex(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            (Self::Dyadic(a), Self::Dyadic(b)) => Self::Dyadic(a.add(b)),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            Self::Int(a) => Self::Int(-a),
            Self::Lex(a) => Self::Lex(a.iter().map(|x| -x).collect()),
            Self::Dyadic(a) => Self::Dyadic(a.neg()),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// `k * self`.
    pub fn scale(&self, k: i64) -> Self {
        match self {
            Self::Int(a) => Self::Int(a * k),
            Self::Lex(a) => Self::Lex(a.iter().map(|x| x * k).collect()),
            Self::Dyadic(a) => Self::Dyadic(a.mul_int(k)),
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        self.check(other)?;
        Ok(self.cmp(other))
    }

    pub fn try_min(&self, other: &Self) -> Result<Self> {
        Ok(match self.try_cmp(other)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    pub fn is_positive(&self) -> bool {
        *self > Self::zero(self.kind())
    }

    /// Parses an integer, a tuple `(a,b,...)`, or a fraction `p/q` / `p/2^k`
    /// as an element of `kind`.
    pub fn parse(s: &str, kind: GroupKind) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let int = |x: &str| x.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {x:?}")));
        match kind {
            GroupKind::Int => Ok(Self::Int(int(&t)?)),
            GroupKind::Lex(k) => {
                let body = t
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("expected a tuple, got {s:?}")))?;
                let v = body.split(',').map(int).collect::<Result<Vec<_>>>()?;
                if v.len() != k {
                    return Err(Error::Parse(format!("expected {k} coordinates, got {}", v.len())));
                }
                Ok(Self::Lex(v))
            }
            GroupKind::Dyadic => {
                let (n, d) = match t.split_once('/') {
                    None => (int(&t)?, 1u64),
                    Some((n, d)) => {
                        let den = match d.split_once('^') {
                            Some(("2", k)) => {
                                let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad power {k:?}")))?;
                                1u64.checked_shl(k).filter(|_| k < 63).ok_or_else(|| Error::Parse("denominator too large".into()))?
                            }
                            Some(_) => return Err(Error::Parse(format!("bad dyadic denominator {d:?}"))),
                            None => d.parse().map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?,
                        };
                        (int(n)?, den)
                    }
                };
                Dyadic::from_fraction(n, d)
                    .map(Self::Dyadic)
                    .map_err(|e| Error::Parse(e.to_string()))
            }
        }
    }
}

impl Ord for OrderedGroupElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Int(a), Self::Int(b)) => a.cmp(b),
            (Self::Lex(a), Self::Lex(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Self::Dyadic(a), Self::Dyadic(b)) => a.cmp(b),
            _ => {
                let rank = |x: &Self| match x {
                    Self::Int(_) => 0,
                    Self::Lex(_) => 1,
                    Self::Dyadic(_) => 2,
                };
                rank(self).cmp(&rank(other))
            }
        }
    }
}

impl PartialOrd for OrderedGroupElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrderedGroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(a) => write!(f, "{a}"),
            Self::Lex(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Self::Dyadic(d) => write!(f, "{d}"),
        }
    }
}

impl fmt::Debug for OrderedGroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for OrderedGroupElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let a = OrderedGroupElem::Lex(vec![1, -5]);
        let b = OrderedGroupElem::Lex(vec![0, 100]);
        assert_eq!(a.try_cmp(&b).unwrap(), Ordering::Greater);
        let h = OrderedGroupElem::Dyadic(Dyadic::new(1, 1));
        let q = OrderedGroupElem::Dyadic(Dyadic::new(1, 2));
        assert_eq!(h.try_add(&q).unwrap(), OrderedGroupElem::Dyadic(Dyadic::new(3, 2)));
        let m = OrderedGroupElem::Int(-3).try_min(&OrderedGroupElem::Int(2)).unwrap();
        assert_eq!(m, OrderedGroupElem::Int(-3));
    }

    #[test]
    fn mixed_kinds_rejected() {
        let a = OrderedGroupElem::Int(1);
        let b = OrderedGroupElem::Dyadic(Dyadic::integer(1));
        assert!(a.try_add(&b).is_err());
        assert!(a.try_cmp(&b).is_err());
        let c = OrderedGroupElem::Lex(vec![1, 2]);
        let d = OrderedGroupElem::Lex(vec![1, 2, 3]);
        assert!(c.try_add(&d).is_err());
    }

    #[test]
    fn dyadic_reduction_and_parse() {
        assert_eq!(Dyadic::new(4, 3), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(4, 3).to_string(), "1/2");
        assert_eq!(Dyadic::new(6, 0).to_string(), "6");
        let p = |s| OrderedGroupElem::parse(s, GroupKind::Dyadic).unwrap();
        assert_eq!(p("3/2^2"), p("3/4"));
        assert_eq!(p("-6/4"), OrderedGroupElem::Dyadic(Dyadic::new(-3, 1)));
        assert!(OrderedGroupElem::parse("1/3", GroupKind::Dyadic).unwrap_err().is_parse());
        assert_eq!(
            OrderedGroupElem::parse("(1, -2)", GroupKind::Lex(2)).unwrap(),
            OrderedGroupElem::Lex(vec![1, -2])
        );
        assert!(OrderedGroupElem::parse("(1)", GroupKind::Lex(2)).is_err());
    }

    #[test]
    fn group_kind_parse() {
        for k in [GroupKind::Int, GroupKind::Lex(3), GroupKind::Dyadic] {
            assert_eq!(k.to_string().parse::<GroupKind>().unwrap(), k);
        }
        assert_eq!("Z^1".parse::<GroupKind>().unwrap(), GroupKind::Lex(1));
        assert!("Z^0".parse::<GroupKind>().is_err());
        assert!("Q".parse::<GroupKind>().is_err());
    }

    fn elem(kind: GroupKind) -> BoxedStrategy<OrderedGroupElem> {
        match kind {
            GroupKind::Int => (-1000i64..1000).prop_map(OrderedGroupElem::Int).boxed(),
            GroupKind::Lex(k) => proptest::collection::vec(-50i64..50, k).prop_map(OrderedGroupElem::Lex).boxed(),
            GroupKind::Dyadic => (-1000i64..1000, 0u32..8)
                .prop_map(|(n, e)| OrderedGroupElem::Dyadic(Dyadic::new(n, e)))
                .boxed(),
        }
    }

    fn triple() -> impl Strategy<Value = (OrderedGroupElem, OrderedGroupElem, OrderedGroupElem)> {
        prop_oneof![Just(GroupKind::Int), Just(GroupKind::Lex(3)), Just(GroupKind::Dyadic)]
            .prop_flat_map(|k| (elem(k), elem(k), elem(k)))
    }

    proptest! {
        #[test]
        fn order_is_total_and_translation_invariant((a, b, c) in triple()) {
            let lt = a < b;
            let eq = a == b;
            let gt = a > b;
            prop_assert_eq!(lt as u8 + eq as u8 + gt as u8, 1);
            if lt {
                prop_assert!(a.try_add(&c).unwrap() < b.try_add(&c).unwrap());
            }
        }

        #[test]
        fn group_axioms((a, b, c) in triple()) {
            let ab = a.try_add(&b).unwrap();
            prop_assert_eq!(&ab, &b.try_add(&a).unwrap());
            prop_assert_eq!(ab.try_add(&c).unwrap(), a.try_add(&b.try_add(&c).unwrap()).unwrap());
            prop_assert!(a.try_add(&a.neg()).unwrap().is_zero());
            prop_assert_eq!(OrderedGroupElem::parse(&a.to_string(), a.kind()).unwrap(), a);
        }
    }
}
