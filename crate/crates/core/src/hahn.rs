//! Finitely supported Hahn series `Σ c_g x^g` over `F_q` with exponents in
//! `Z`, `Z^k` (lex) or `Z[1/2]`, optionally truncated: a precision `c`
//! means every term with exponent `≥ c` is unknown.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};
use std::fmt;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Poly};
use crate::valued::{Dyadic, GroupKind, OrderedGroupElem, Value, ValuationProbe, ValuedField};

type Terms = Vec<(OrderedGroupElem, u64)>;

#[derive(Clone, PartialEq, Eq)]
pub struct HahnSeries {
    field: FieldSpec,
    group: GroupKind,
    terms: Terms,
    precision: Option<OrderedGroupElem>,
}

fn min_prec(a: Option<OrderedGroupElem>, b: Option<OrderedGroupElem>) -> Option<OrderedGroupElem> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn below(e: &OrderedGroupElem, prec: &Option<OrderedGroupElem>) -> bool {
    prec.as_ref().is_none_or(|p| e < p)
}

fn add_g(a: &OrderedGroupElem, b: &OrderedGroupElem) -> OrderedGroupElem {
    a.try_add(b).expect("checked group")
}

fn mul_terms(field: &FieldSpec, a: &Terms, b: &Terms, prec: &Option<OrderedGroupElem>) -> Terms {
    let mut acc: BTreeMap<OrderedGroupElem, u64> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = add_g(ea, eb);
            if !below(&e, prec) {
                // b is sorted, later exponents are larger still
                break;
            }
            let c = field.mul(*ca, *cb);
            let slot = acc.entry(e).or_insert(0);
            *slot = field.add(*slot, c);
        }
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

impl HahnSeries {
    /// Normalizes: merges equal exponents, drops zero coefficients and
    /// terms at or beyond the precision, sorts.
    pub fn new(field: FieldSpec, group: GroupKind, terms: Terms, precision: Option<OrderedGroupElem>) -> Result<Self> {
        if group == GroupKind::Lex(0) {
            return Err(Error::Invalid("Z^0 is not a supported value group".into()));
        }
        let mut acc: BTreeMap<OrderedGroupElem, u64> = BTreeMap::new();
        for (e, c) in terms {
            if e.kind() != group {
                return Err(Error::Mismatch(format!("exponent {e} is not in {group}")));
            }
            if !field.is_valid(c) {
                return Err(Error::Invalid(format!("{c} is not an element of {field}")));
            }
            let slot = acc.entry(e).or_insert(0);
            *slot = field.add(*slot, c);
        }
        if let Some(p) = &precision {
            if p.kind() != group {
                return Err(Error::Mismatch(format!("precision {p} is not in {group}")));
            }
        }
        let terms = acc.into_iter().filter(|(e, c)| *c != 0 && below(e, &precision)).collect();
        Ok(Self { field, group, terms, precision })
    }

    pub fn zero(field: FieldSpec, group: GroupKind) -> Self {
        Self { field, group, terms: Vec::new(), precision: None }
    }

    pub fn one(field: FieldSpec, group: GroupKind) -> Self {
        Self::monomial(field, 1, OrderedGroupElem::zero(group))
    }

    /// `c·x^g`; the group is taken from `g`.
    pub fn monomial(field: FieldSpec, c: u64, g: OrderedGroupElem) -> Self {
        let group = g.kind();
        let terms = if c == 0 { Vec::new() } else { vec![(g, c)] };
        Self { field, group, terms, precision: None }
    }

    /// The canonical section `g ↦ x^g`.
    pub fn section(field: FieldSpec, g: OrderedGroupElem) -> Self {
        Self::monomial(field, 1, g)
    }

    /// Embeds a polynomial as a `Z`-exponent series.
    pub fn from_poly(p: &Poly) -> Self {
        let terms = p
            .raw()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (OrderedGroupElem::Int(i as i64), *c))
            .collect();
        Self { field: p.field().clone(), group: GroupKind::Int, terms, precision: None }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn terms(&self) -> &[(OrderedGroupElem, u64)] {
        &self.terms
    }

    pub fn precision(&self) -> Option<&OrderedGroupElem> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// No known nonzero terms (an exact zero, or `O(x^c)`).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_exact() && self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1 == 1
    }

    pub fn coeff(&self, g: &OrderedGroupElem) -> u64 {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(g))
            .map_or(0, |i| self.terms[i].1)
    }

    pub fn with_precision(&self, precision: Option<OrderedGroupElem>) -> Result<Self> {
        Self::new(self.field.clone(), self.group, self.terms.clone(), min_prec(self.precision.clone(), precision))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Mismatch(format!("{} vs {}", self.field, other.field)));
        }
        if self.group != other.group {
            return Err(Error::Mismatch(format!("{} vs {}", self.group, other.group)));
        }
        Ok(())
    }

    pub fn valuation(&self) -> Result<OrderedGroupElem> {
        self.terms
            .first()
            .map(|(e, _)| e.clone())
            .ok_or(Error::ZeroInput("Hahn valuation"))
    }

    /// Lower bound on the support: `v(self)`, else the precision, else none
    /// (exact zero).
    fn lower_bound(&self) -> Option<OrderedGroupElem> {
        self.terms.first().map(|(e, _)| e.clone()).or_else(|| self.precision.clone())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(self.field.clone(), self.group, terms, min_prec(self.precision.clone(), other.precision.clone()))
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.field.neg(*c))).collect();
        Self { terms, ..self.clone() }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let shifted = |lb: Option<OrderedGroupElem>, p: &Option<OrderedGroupElem>| match (lb, p) {
            (Some(lb), Some(p)) => Some(add_g(&lb, p)),
            _ => None,
        };
        let (la, lb) = (self.lower_bound(), other.lower_bound());
        // an exact zero factor makes the product an exact zero
        if (la.is_none() && self.is_exact()) || (lb.is_none() && other.is_exact()) {
            return Ok(Self::zero(self.field.clone(), self.group));
        }
        let precision = min_prec(shifted(la, &other.precision), shifted(lb, &self.precision));
        let terms = mul_terms(&self.field, &self.terms, &other.terms, &precision);
        Ok(Self { field: self.field.clone(), group: self.group, terms, precision })
    }

    /// Multiplication by the exact monomial `x^h`.
    pub fn shift(&self, h: &OrderedGroupElem) -> Result<Self> {
        if h.kind() != self.group {
            return Err(Error::Mismatch(format!("{h} is not in {}", self.group)));
        }
        Ok(Self {
            field: self.field.clone(),
            group: self.group,
            terms: self.terms.iter().map(|(e, c)| (add_g(e, h), *c)).collect(),
            precision: self.precision.as_ref().map(|p| add_g(p, h)),
        })
    }

    pub fn scale(&self, c: u64) -> Self {
        if c == 0 {
            return Self { terms: Vec::new(), ..self.clone() };
        }
        let terms = self.terms.iter().map(|(e, a)| (e.clone(), self.field.mul(*a, c))).collect();
        Self { terms, ..self.clone() }
    }

    /// Inverse by geometric-series expansion.
    ///
    /// Writing `self = c x^g (1 + R)`, the result is exact below `x^{-g+m}`
    /// where `m` is the `(n_terms+1)`-th smallest element of the monoid
    /// generated by `supp R` (further capped by this series' own precision);
    /// that cutoff becomes the result's precision.
    pub fn inverse(&self, n_terms: usize) -> Result<Self> {
        if n_terms == 0 {
            return Err(Error::Invalid("term count must be positive".into()));
        }
        let (g, c) = self.terms.first().cloned().ok_or(Error::ZeroInput("Hahn inverse"))?;
        let cinv = self.field.inv(c).expect("nonzero coefficient");
        let neg_g = g.neg();
        // -R, normalized to valuation 0 and leading coefficient 1
        let neg_r: Terms = self.terms[1..]
            .iter()
            .map(|(e, a)| (add_g(e, &neg_g), self.field.neg(self.field.mul(*a, cinv))))
            .collect();
        let rel_prec = self.precision.as_ref().map(|p| add_g(p, &neg_g));
        let gens: Vec<OrderedGroupElem> = neg_r.iter().map(|(e, _)| e.clone()).collect();
        let cutoff = min_prec(nth_monoid_element(&gens, n_terms), rel_prec);
        let one: Terms = vec![(OrderedGroupElem::zero(self.group), 1)];
        let mut sum: BTreeMap<OrderedGroupElem, u64> = one.iter().cloned().collect();
        let mut power = one;
        for _ in 1..n_terms {
            power = mul_terms(&self.field, &power, &neg_r, &cutoff);
            if power.is_empty() {
                break;
            }
            for (e, a) in &power {
                let slot = sum.entry(e.clone()).or_insert(0);
                *slot = self.field.add(*slot, *a);
            }
        }
        let terms = sum
            .into_iter()
            .filter(|(_, a)| *a != 0)
            .map(|(e, a)| (add_g(&e, &neg_g), self.field.mul(a, cinv)))
            .collect();
        Ok(Self {
            field: self.field.clone(),
            group: self.group,
            terms,
            precision: cutoff.map(|p| add_g(&p, &neg_g)),
        })
    }

    /// `(v(A), A·x^{-v(A)})`.
    pub fn unit_split(&self) -> Result<(OrderedGroupElem, Self)> {
        let g = self.valuation()?;
        let u = self.shift(&g.neg())?;
        Ok((g, u))
    }

    /// Parses the text form, e.g. `1 + 2*x^(1/2) + O(x^(3/2))`.
    pub fn parse(s: &str, field: &FieldSpec, group: GroupKind) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty series".into()));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut negative = false;
        for (i, ch) in t.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return Err(Error::Parse("unbalanced parentheses".into()));
            }
            if depth == 0 && (ch == '+' || ch == '-') && !cur.ends_with('*') && !cur.ends_with('^') {
                if i > 0 {
                    if cur.is_empty() {
                        return Err(Error::Parse(format!("dangling sign in {s:?}")));
                    }
                    pieces.push((negative, std::mem::take(&mut cur)));
                }
                negative = ch == '-';
                continue;
            }
            cur.push(ch);
        }
        if depth != 0 {
            return Err(Error::Parse("unbalanced parentheses".into()));
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        pieces.push((negative, cur));

        let mut terms = Vec::new();
        let mut precision = None;
        let n = pieces.len();
        for (idx, (neg, piece)) in pieces.into_iter().enumerate() {
            if let Some(inner) = piece.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
                if idx + 1 != n || neg {
                    return Err(Error::Parse("O(...) must be the last, positive term".into()));
                }
                let (c, e) = parse_term(inner, field, group)?;
                if c != 1 {
                    return Err(Error::Parse(format!("bad precision marker O({inner})")));
                }
                precision = Some(e);
                continue;
            }
            let (c, e) = parse_term(&piece, field, group)?;
            terms.push((e, if neg { field.neg(c) } else { c }));
        }
        Self::new(field.clone(), group, terms, precision)
    }
}

fn nth_monoid_element(gens: &[OrderedGroupElem], n: usize) -> Option<OrderedGroupElem> {
    if gens.is_empty() {
        return None;
    }
    let zero = OrderedGroupElem::zero(gens[0].kind());
    let mut heap = BinaryHeap::from([Reverse(zero.clone())]);
    let mut seen = HashSet::from([zero]);
    let mut count = 0;
    while let Some(Reverse(m)) = heap.pop() {
        if count == n {
            return Some(m);
        }
        count += 1;
        for g in gens {
            let next = add_g(&m, g);
            if seen.insert(next.clone()) {
                heap.push(Reverse(next));
            }
        }
    }
    unreachable!("a monoid with a positive generator is infinite")
}

fn parse_exponent(s: &str, group: GroupKind) -> Result<OrderedGroupElem> {
    match group {
        GroupKind::Lex(_) => OrderedGroupElem::parse(s, group),
        _ => {
            let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
            OrderedGroupElem::parse(inner, group)
        }
    }
}

fn parse_term(t: &str, field: &FieldSpec, group: GroupKind) -> Result<(u64, OrderedGroupElem)> {
    let mut depth = 0;
    let mut xpos = None;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            'x' if depth == 0 => {
                xpos = Some(i);
                break;
            }
            _ => {}
        }
    }
    let (coeff, exp) = match xpos {
        None => (t, OrderedGroupElem::zero(group)),
        Some(i) => {
            let c = t[..i].strip_suffix('*').unwrap_or(&t[..i]);
            let rest = &t[i + 1..];
            let e = if rest.is_empty() {
                match group {
                    GroupKind::Int => OrderedGroupElem::Int(1),
                    GroupKind::Dyadic => OrderedGroupElem::Dyadic(Dyadic::integer(1)),
                    GroupKind::Lex(_) => return Err(Error::Parse("bare x needs a tuple exponent in Z^k".into())),
                }
            } else {
                let e = rest
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("unexpected {rest:?} after x")))?;
                parse_exponent(e, group)?
            };
            (c, e)
        }
    };
    let c = if coeff.is_empty() {
        1
    } else {
        let p = Poly::parse(coeff, field, 'x')?;
        if !p.is_constant() {
            return Err(Error::Parse(format!("coefficient {coeff:?} is not a constant")));
        }
        p.coeff(0)
    };
    Ok((c, exp))
}

fn fmt_exponent(e: &OrderedGroupElem) -> String {
    match e {
        OrderedGroupElem::Int(n) if *n >= 0 => format!("^{n}"),
        OrderedGroupElem::Dyadic(d) if d.is_integer() && d.num() >= 0 => format!("^{d}"),
        OrderedGroupElem::Lex(_) => format!("^{e}"),
        _ => format!("^({e})"),
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let cs = self.field.format_elem(*c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            let unit_exp = match e {
                OrderedGroupElem::Int(1) => true,
                OrderedGroupElem::Dyadic(d) => *d == Dyadic::integer(1),
                _ => false,
            };
            let xs = if e.is_zero() {
                String::new()
            } else if unit_exp {
                "x".into()
            } else {
                format!("x{}", fmt_exponent(e))
            };
            parts.push(match (xs.is_empty(), *c == 1) {
                (true, _) => cs,
                (false, true) => xs,
                (false, false) => format!("{cs}*{xs}"),
            });
        }
        if let Some(p) = &self.precision {
            parts.push(if p.is_zero() { "O(1)".into() } else { format!("O(x{})", fmt_exponent(p)) });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}(({}))", self, self.field, self.group)
    }
}

/// `F_q((G))` with its valuation `v(A) = min Supp A`, as a sampling probe.
///
/// Samples are exact; `inv` expands to `inv_terms` terms, which is exact on
/// monomials.
#[derive(Debug, Clone)]
pub struct HahnField {
    pub field: FieldSpec,
    pub group: GroupKind,
    pub inv_terms: usize,
    pub max_terms: usize,
}

impl HahnField {
    pub fn new(field: FieldSpec, group: GroupKind) -> Self {
        Self { field, group, inv_terms: 16, max_terms: 6 }
    }

    pub fn random_exponent(&self, rng: &mut dyn RngCore) -> OrderedGroupElem {
        match self.group {
            GroupKind::Int => OrderedGroupElem::Int(rng.gen_range(-12..=12)),
            GroupKind::Lex(k) => OrderedGroupElem::Lex((0..k).map(|_| rng.gen_range(-4..=4)).collect()),
            GroupKind::Dyadic => OrderedGroupElem::Dyadic(Dyadic::new(rng.gen_range(-48..=48), rng.gen_range(0..=3))),
        }
    }
}

impl ValuedField for HahnField {
    type Elem = HahnSeries;

    fn group(&self) -> GroupKind {
        self.group
    }

    fn valuation(&self, x: &HahnSeries) -> Result<Value> {
        if x.is_zero() {
            return Ok(Value::Infinity);
        }
        x.valuation().map(Value::Finite)
    }

    fn add(&self, a: &HahnSeries, b: &HahnSeries) -> Result<HahnSeries> {
        a.try_add(b)
    }

    fn mul(&self, a: &HahnSeries, b: &HahnSeries) -> Result<HahnSeries> {
        a.try_mul(b)
    }

    fn inv(&self, a: &HahnSeries) -> Result<HahnSeries> {
        a.inverse(self.inv_terms)
    }

    fn zero(&self) -> HahnSeries {
        HahnSeries::zero(self.field.clone(), self.group)
    }

    fn one(&self) -> HahnSeries {
        HahnSeries::one(self.field.clone(), self.group)
    }

    fn is_zero(&self, a: &HahnSeries) -> bool {
        a.is_zero()
    }
}

impl ValuationProbe for HahnField {
    fn sample(&self, rng: &mut dyn RngCore) -> HahnSeries {
        loop {
            let n = rng.gen_range(1..=self.max_terms);
            let terms = (0..n)
                .map(|_| (self.random_exponent(rng), self.field.random_nonzero(rng)))
                .collect();
            let s = HahnSeries::new(self.field.clone(), self.group, terms, None).expect("consistent group");
            if !s.is_zero() {
                return s;
            }
        }
    }
}
