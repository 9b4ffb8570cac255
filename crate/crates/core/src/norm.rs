//! Simple extensions `F_q(t)[y]/(m(y))` and the field norm down to `F_q(t)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{generator_symbol, unknown_symbol, EvalContext, Exponent};
use crate::gf::{FieldSpec, Poly};
use crate::ratfunc::RatFunc;

/// How irreducibility of the modulus was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ExtensionStatus {
    /// `m` specializes at `t = witness` to an irreducible of full degree.
    Verified { witness: u64 },
    /// Squarefree, but no irreducible specialization was found.
    AssumedSquarefree,
}

// Polynomials in y with F_q(t) coefficients, lowest degree first, trimmed.
type YPoly = Vec<RatFunc>;

fn trim(mut v: YPoly) -> YPoly {
    while v.last().is_some_and(RatFunc::is_zero) {
        v.pop();
    }
    v
}

fn ydeg(v: &[RatFunc]) -> Option<usize> {
    v.len().checked_sub(1)
}

fn yadd(a: &[RatFunc], b: &[RatFunc]) -> Result<YPoly> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = o.try_add(s)?;
    }
    Ok(trim(out))
}

fn yneg(a: &[RatFunc]) -> YPoly {
    a.iter().map(RatFunc::neg).collect()
}

fn ymul(a: &[RatFunc], b: &[RatFunc], zero: &RatFunc) -> Result<YPoly> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].try_add(&x.try_mul(y)?)?;
        }
    }
    Ok(trim(out))
}

fn yscale(a: &[RatFunc], c: &RatFunc) -> Result<YPoly> {
    Ok(trim(a.iter().map(|x| x.try_mul(c)).collect::<Result<_>>()?))
}

fn yrem(a: &[RatFunc], m: &[RatFunc]) -> Result<YPoly> {
    let dm = ydeg(m).ok_or(Error::DivisionByZero)?;
    let lead_inv = m[dm].inv()?;
    let mut r = a.to_vec();
    while let Some(dr) = ydeg(&r) {
        if dr < dm {
            break;
        }
        let c = r[dr].try_mul(&lead_inv)?;
        for i in 0..=dm {
            let sub = c.try_mul(&m[i])?;
            r[dr - dm + i] = r[dr - dm + i].try_sub(&sub)?;
        }
        r = trim(r);
    }
    Ok(r)
}

fn ygcd(a: &[RatFunc], b: &[RatFunc]) -> Result<YPoly> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = yrem(&a, &b)?;
        a = b;
        b = r;
    }
    Ok(a)
}

fn yderivative(a: &[RatFunc], field: &FieldSpec) -> YPoly {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let k = field.from_int((i as u64 % field.characteristic()) as i64);
            RatFunc::constant(field.clone(), c.var(), k).try_mul(c).expect("same ring")
        })
        .collect();
    trim(out)
}

fn fmt_ypoly(v: &[RatFunc], y: char) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (i, c) in v.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => y.to_string(),
            _ => format!("{y}^{i}"),
        };
        let cs = c.to_string();
        let cs = if cs.contains('+') || cs.contains('/') || (cs.contains('*') && i > 0) {
            format!("({cs})")
        } else {
            cs
        };
        parts.push(match (mono.is_empty(), c.is_one()) {
            (true, _) => cs,
            (false, true) => mono,
            (false, false) => format!("{cs}*{mono}"),
        });
    }
    parts.join("+")
}

struct ExtInner {
    field: FieldSpec,
    base_var: char,
    ext_var: char,
    modulus: YPoly,
    status: ExtensionStatus,
}

/// `F_q(t)[y]/(m)` for a monic squarefree `m` of degree at least 2.
#[derive(Clone)]
pub struct SimpleExtension {
    inner: Arc<ExtInner>,
}

impl PartialEq for SimpleExtension {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field
                && self.inner.base_var == other.inner.base_var
                && self.inner.ext_var == other.inner.ext_var
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for SimpleExtension {}

/// Upper bound on the number of specialization points tried.
pub const MAX_SPECIALIZATIONS: u64 = 1 << 12;

impl SimpleExtension {
    /// Validates `m` (coefficients lowest degree first) and tries to certify
    /// irreducibility by specialization.
    pub fn new(field: FieldSpec, base_var: char, ext_var: char, modulus: Vec<RatFunc>) -> Result<Self> {
        if base_var == ext_var {
            return Err(Error::Invalid("base and extension variables must differ".into()));
        }
        if modulus.iter().any(|c| c.field() != &field || c.var() != base_var) {
            return Err(Error::Mismatch(format!("modulus coefficients must lie in {field}({base_var})")));
        }
        let m = trim(modulus);
        let d = ydeg(&m).unwrap_or(0);
        let text = fmt_ypoly(&m, ext_var);
        if d < 2 {
            return Err(Error::Invalid(format!("modulus {text} must have degree at least 2")));
        }
        if !m[d].is_one() {
            return Err(Error::NotMonic(text));
        }
        let dm = yderivative(&m, &field);
        if dm.is_empty() || ydeg(&ygcd(&m, &dm)?) != Some(0) {
            return Err(Error::Reducible(format!("{text} is not squarefree")));
        }
        let status = Self::certify(&field, &m);
        Ok(Self { inner: Arc::new(ExtInner { field, base_var, ext_var, modulus: m, status }) })
    }

    fn certify(field: &FieldSpec, m: &[RatFunc]) -> ExtensionStatus {
        let d = m.len() - 1;
        'points: for a in 0..field.order().min(MAX_SPECIALIZATIONS) {
            let mut coeffs = Vec::with_capacity(d + 1);
            for c in m {
                let den = c.den().eval(a);
                let Some(inv) = field.inv(den) else {
                    continue 'points;
                };
                coeffs.push(field.mul(c.num().eval(a), inv));
            }
            let p = Poly::from_raw(field.clone(), 'y', coeffs);
            if p.degree() == Some(d) && p.is_irreducible().unwrap_or(false) {
                return ExtensionStatus::Verified { witness: a };
            }
        }
        ExtensionStatus::AssumedSquarefree
    }

    /// Parses a descriptor such as `GF(2)(t)[y]/(y^2+y+t)`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let s: String = descriptor.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("expected GF(q)(t)[y]/(m), got {descriptor:?}"));
        let close = s.find(')').ok_or_else(bad)?;
        let field: FieldSpec = s[..=close].parse()?;
        let rest = &s[close + 1..];
        let mut chars = rest.chars();
        let (Some('('), Some(t), Some(')'), Some('['), Some(y), Some(']'), Some('/')) =
            (chars.next(), chars.next(), chars.next(), chars.next(), chars.next(), chars.next(), chars.next())
        else {
            return Err(bad());
        };
        if !t.is_ascii_alphabetic() || !y.is_ascii_alphabetic() || generator_symbol(&field, t).is_some() || generator_symbol(&field, y).is_some() {
            return Err(Error::Parse(format!("bad variable names '{t}', '{y}'")));
        }
        let body: String = chars.collect();
        let poly = body.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let m = YContext { field: &field, t, y }.parse(poly)?;
        Self::new(field, t, y, m)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.inner.field
    }

    pub fn base_var(&self) -> char {
        self.inner.base_var
    }

    pub fn ext_var(&self) -> char {
        self.inner.ext_var
    }

    pub fn degree(&self) -> usize {
        self.inner.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[RatFunc] {
        &self.inner.modulus
    }

    pub fn status(&self) -> ExtensionStatus {
        self.inner.status
    }

    fn zero_base(&self) -> RatFunc {
        RatFunc::zero(self.inner.field.clone(), self.inner.base_var)
    }

    /// Reduces an arbitrary polynomial in `y` modulo `m`.
    pub fn elem(&self, coeffs: Vec<RatFunc>) -> Result<ExtElem> {
        if coeffs.iter().any(|c| c.field() != self.field() || c.var() != self.base_var()) {
            return Err(Error::Mismatch(format!("coefficients must lie in {}({})", self.field(), self.base_var())));
        }
        let coeffs = yrem(&trim(coeffs), self.modulus())?;
        Ok(ExtElem { ext: self.clone(), coeffs })
    }

    pub fn from_base(&self, c: RatFunc) -> Result<ExtElem> {
        self.elem(vec![c])
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem { ext: self.clone(), coeffs: Vec::new() }
    }

    pub fn one(&self) -> ExtElem {
        ExtElem { ext: self.clone(), coeffs: vec![RatFunc::one(self.field().clone(), self.base_var())] }
    }

    /// The class of `y`.
    pub fn gen(&self) -> ExtElem {
        let mut c = vec![self.zero_base(); 2];
        c[1] = RatFunc::one(self.field().clone(), self.base_var());
        ExtElem { ext: self.clone(), coeffs: c }
    }

    pub fn parse_elem(&self, s: &str) -> Result<ExtElem> {
        let v = YContext { field: self.field(), t: self.base_var(), y: self.ext_var() }.parse(s)?;
        self.elem(v)
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, max_deg: usize, nonzero: bool, rng: &mut R) -> ExtElem {
        loop {
            let coeffs = (0..self.degree())
                .map(|_| {
                    if rng.gen_ratio(1, 4) {
                        self.zero_base()
                    } else {
                        RatFunc::random(self.field(), self.base_var(), max_deg, false, rng)
                    }
                })
                .collect();
            let e = ExtElem { ext: self.clone(), coeffs: trim(coeffs) };
            if !(nonzero && e.is_zero()) {
                return e;
            }
        }
    }
}

impl fmt::Display for SimpleExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({})[{}]/({})",
            self.inner.field,
            self.inner.base_var,
            self.inner.ext_var,
            fmt_ypoly(&self.inner.modulus, self.inner.ext_var)
        )
    }
}

impl fmt::Debug for SimpleExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [{:?}]", self.inner.status)
    }
}

/// An element of a [`SimpleExtension`], reduced modulo `m`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElem {
    ext: SimpleExtension,
    coeffs: YPoly,
}

impl ExtElem {
    pub fn extension(&self) -> &SimpleExtension {
        &self.ext
    }

    /// Coefficients of `1, y, …, y^{d-1}` (trailing zeros omitted).
    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The element as a base-field element when it has no `y` part.
    pub fn as_base(&self) -> Option<RatFunc> {
        match self.coeffs.len() {
            0 => Some(self.ext.zero_base()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ext != other.ext {
            return Err(Error::Mismatch(format!("{} vs {}", self.ext, other.ext)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { ext: self.ext.clone(), coeffs: yadd(&self.coeffs, &other.coeffs)? })
    }

    pub fn neg(&self) -> Self {
        Self { ext: self.ext.clone(), coeffs: yneg(&self.coeffs) }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prod = ymul(&self.coeffs, &other.coeffs, &self.ext.zero_base())?;
        Ok(Self { ext: self.ext.clone(), coeffs: yrem(&prod, self.ext.modulus())? })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ext.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same extension");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same extension");
            }
        }
        acc
    }

    /// `N(u) = Res_y(m, u) = ∏ u(θ_i)`.
    ///
    /// Zero exactly when `u` is a zero divisor, which needs a reducible `m`.
    pub fn norm(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::ZeroInput("norm"));
        }
        let d = self.ext.degree();
        let e = self.coeffs.len() - 1;
        if e == 0 {
            return self.coeffs[0].pow(d as i64);
        }
        let (mm, lm) = clear_denominators(self.ext.modulus())?;
        let (gg, lg) = clear_denominators(&self.coeffs)?;
        let r = subresultant(&mm, &gg)?;
        // Res(M/lm, G/lg) = lm^{-e} lg^{-d} Res(M, G)
        let scale = lm.pow(e as u64).try_mul(&lg.pow(d as u64))?;
        RatFunc::new(r, scale)
    }
}

fn clear_denominators(v: &[RatFunc]) -> Result<(Vec<Poly>, Poly)> {
    let mut l = v[0].den().clone();
    for c in &v[1..] {
        let g = l.gcd(c.den())?;
        l = l.try_mul(&c.den().div_exact(&g)?)?;
    }
    let polys = v
        .iter()
        .map(|c| c.num().try_mul(&l.div_exact(c.den())?))
        .collect::<Result<Vec<_>>>()?;
    Ok((polys, l))
}

fn pdeg(v: &[Poly]) -> usize {
    v.len() - 1
}

fn ptrim(mut v: Vec<Poly>) -> Vec<Poly> {
    while v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
    v
}

/// Pseudo-remainder `lc(b)^{deg a - deg b + 1} a mod b` over `F_q[t]`.
fn prem(a: &[Poly], b: &[Poly]) -> Result<Vec<Poly>> {
    let (da, db) = (pdeg(a), pdeg(b));
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = da - db + 1;
    while !r.is_empty() && pdeg(&r) >= db {
        let dr = pdeg(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.try_mul(lb)?;
        }
        for (i, bc) in b.iter().enumerate() {
            let k = dr - db + i;
            r[k] = r[k].try_sub(&lr.try_mul(bc)?)?;
        }
        r = ptrim(r);
        e -= 1;
    }
    let f = lb.pow(e as u64);
    r.iter().map(|c| c.try_mul(&f)).collect()
}

/// Resultant over `F_q[t]` by the subresultant PRS; requires
/// `deg a ≥ deg b ≥ 1`.
fn subresultant(a: &[Poly], b: &[Poly]) -> Result<Poly> {
    let field = a[0].field().clone();
    let var = a[0].var();
    let one = Poly::one(field.clone(), var);
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    let (mut g, mut h) = (one.clone(), one);
    let mut sign = false;
    loop {
        let (da, db) = (pdeg(&a), pdeg(&b));
        let delta = (da - db) as u64;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = ptrim(prem(&a, &b)?);
        a = b;
        if r.is_empty() {
            return Ok(Poly::zero(field, var));
        }
        let div = g.try_mul(&h.pow(delta))?;
        b = r.iter().map(|c| c.div_exact(&div)).collect::<Result<_>>()?;
        g = a[pdeg(&a)].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).div_exact(&h.pow(delta - 1))?,
        };
        let (da, db) = (pdeg(&a), pdeg(&b));
        if db == 0 {
            // h^{1-da} lc(b)^{da}
            let num = b[0].pow(da as u64);
            let res = if da == 0 { num.try_mul(&h)? } else { num.div_exact(&h.pow(da as u64 - 1))? };
            return Ok(if sign { res.neg() } else { res });
        }
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_ypoly(&self.coeffs, self.ext.ext_var()))
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ext)
    }
}

/// Polynomials in `y` over `F_q(t)`; division only by elements of `F_q(t)`.
struct YContext<'a> {
    field: &'a FieldSpec,
    t: char,
    y: char,
}

impl YContext<'_> {
    fn base(&self, c: RatFunc) -> YPoly {
        trim(vec![c])
    }

    fn zero(&self) -> RatFunc {
        RatFunc::zero(self.field.clone(), self.t)
    }
}

impl EvalContext for YContext<'_> {
    type Value = YPoly;

    fn int(&self, n: u64) -> Result<YPoly> {
        Ok(self.base(RatFunc::constant(self.field.clone(), self.t, n % self.field.characteristic())))
    }

    fn symbol(&self, c: char) -> Result<YPoly> {
        if c == self.t {
            return Ok(self.base(RatFunc::x(self.field.clone(), self.t)));
        }
        if c == self.y {
            return Ok(vec![self.zero(), RatFunc::one(self.field.clone(), self.t)]);
        }
        generator_symbol(self.field, c)
            .map(|g| self.base(RatFunc::constant(self.field.clone(), self.t, g)))
            .ok_or_else(|| unknown_symbol(c))
    }

    fn add(&self, a: YPoly, b: YPoly) -> Result<YPoly> {
        yadd(&a, &b)
    }

    fn sub(&self, a: YPoly, b: YPoly) -> Result<YPoly> {
        yadd(&a, &yneg(&b))
    }

    fn neg(&self, a: YPoly) -> Result<YPoly> {
        Ok(yneg(&a))
    }

    fn mul(&self, a: YPoly, b: YPoly) -> Result<YPoly> {
        ymul(&a, &b, &self.zero())
    }

    fn div(&self, a: YPoly, b: YPoly) -> Result<YPoly> {
        match b.len() {
            0 => Err(Error::DivisionByZero),
            1 => yscale(&a, &b[0].inv()?),
            _ => Err(Error::Parse(format!("cannot divide by a polynomial in {}", self.y))),
        }
    }

    fn pow(&self, a: YPoly, e: Exponent) -> Result<YPoly> {
        let k = e
            .integer()
            .ok_or_else(|| Error::Parse(format!("fractional exponent {}/{}", e.num, e.den)))?;
        if a.len() <= 1 {
            let c = a.first().cloned().unwrap_or_else(|| self.zero());
            if k < 0 && c.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(self.base(c.pow(k)?));
        }
        if k < 0 {
            return Err(Error::Parse(format!("negative power of a polynomial in {}", self.y)));
        }
        let mut acc = self.base(RatFunc::one(self.field.clone(), self.t));
        for _ in 0..k {
            acc = ymul(&acc, &a, &self.zero())?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::decompose;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ext(s: &str) -> SimpleExtension {
        SimpleExtension::parse(s).unwrap()
    }

    fn rf(s: &str, f: &FieldSpec) -> RatFunc {
        RatFunc::parse(s, f, 't').unwrap()
    }

    /// det of the Sylvester matrix of (m, g) over F_q(t), by Gaussian elimination.
    fn sylvester_resultant(m: &[RatFunc], g: &[RatFunc]) -> RatFunc {
        let (d, e) = (m.len() - 1, g.len() - 1);
        let n = d + e;
        let zero = RatFunc::zero(m[0].field().clone(), m[0].var());
        let mut a = vec![vec![zero.clone(); n]; n];
        for i in 0..e {
            for (j, c) in m.iter().rev().enumerate() {
                a[i][i + j] = c.clone();
            }
        }
        for i in 0..d {
            for (j, c) in g.iter().rev().enumerate() {
                a[e + i][i + j] = c.clone();
            }
        }
        let mut det = RatFunc::one(zero.field().clone(), zero.var());
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return zero;
            };
            if p != col {
                a.swap(p, col);
                det = det.neg();
            }
            det = &det * &a[col][col];
            let inv = a[col][col].inv().unwrap();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let s = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &s;
                }
            }
        }
        det
    }

    #[test]
    fn make_examples() {
        let e = ext("GF(2)(t)[y]/(y^2+y+t)");
        assert_eq!(e.status(), ExtensionStatus::Verified { witness: 1 });
        assert_eq!(e.to_string(), "GF(2)(t)[y]/(y^2+y+t)");
        assert!(matches!(SimpleExtension::parse("GF(2)(t)[y]/(y^2+t^2)"), Err(Error::Reducible(_))));
        assert_eq!(ext("GF(2)(t)[y]/(y^2+y)").status(), ExtensionStatus::AssumedSquarefree);
        assert!(matches!(SimpleExtension::parse("GF(3)(t)[y]/(2y^2+1)"), Err(Error::NotMonic(_))));
        assert!(SimpleExtension::parse("GF(3)(t)[y]/(y+t)").is_err());
        assert!(SimpleExtension::parse("GF(3)(t)[y]/((y+t)^2)").is_err());
        assert!(SimpleExtension::parse("GF(3)(t)[y]/(y^2+1/y)").unwrap_err().is_parse());
        assert!(SimpleExtension::parse("GF(3)(t)[t]/(t^2+1)").is_err());
        assert!(SimpleExtension::parse("GF(3)[y]/(y^2+1)").unwrap_err().is_parse());
        let c = ext("GF(2)(t)[y]/(y^3+y+t)");
        assert!(matches!(c.status(), ExtensionStatus::Verified { .. }));
        let r = ext("GF(3)(t)[y]/(y^2+(t+1)/t*y+2/(t^2+1))");
        assert_eq!(SimpleExtension::parse(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn arithmetic_examples() {
        let e = ext("GF(2)(t)[y]/(y^2+y+t)");
        let y = e.gen();
        assert_eq!(y.try_mul(&y).unwrap(), e.parse_elem("y+t").unwrap());
        assert!(y.try_add(&y).unwrap().is_zero());
        assert_eq!(e.parse_elem("(y+1)*y").unwrap(), e.parse_elem("t").unwrap());
        let other = ext("GF(2)(t)[y]/(y^3+y+t)");
        assert!(y.try_mul(&other.gen()).is_err());
        assert_eq!(e.parse_elem("y^5").unwrap(), y.pow(5));
    }

    #[test]
    fn norm_examples() {
        let e = ext("GF(2)(t)[y]/(y^2+y+t)");
        let f2 = e.field().clone();
        assert_eq!(e.gen().norm().unwrap(), rf("t", &f2));
        assert_eq!(e.parse_elem("t+1").unwrap().norm().unwrap(), rf("t^2+1", &f2));
        assert_eq!(e.parse_elem("y+1").unwrap().norm().unwrap(), rf("t", &f2));
        assert!(e.zero().norm().is_err());
        // zero divisor in a reducible algebra
        let r = ext("GF(2)(t)[y]/(y^2+y)");
        assert!(r.gen().norm().unwrap().is_zero());
    }

    #[test]
    fn norm_matches_sylvester_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for desc in ["GF(2)(t)[y]/(y^3+y+t)", "GF(3)(t)[y]/(y^2+t)", "GF(5)(t)[y]/(y^4+t*y+1/(t+1))"] {
            let e = ext(desc);
            for _ in 0..20 {
                let u = e.random_elem(3, true, &mut rng);
                if u.coeffs().len() < 2 {
                    continue;
                }
                assert_eq!(u.norm().unwrap(), sylvester_resultant(e.modulus(), u.coeffs()), "{u:?}");
            }
        }
    }

    fn pair() -> impl Strategy<Value = (SimpleExtension, ExtElem, ExtElem)> {
        (0usize..3, any::<u64>()).prop_map(|(i, seed)| {
            let e = ext(["GF(2)(t)[y]/(y^2+y+t)", "GF(2)(t)[y]/(y^3+y+t)", "GF(3)(t)[y]/(y^3+t*y^2+2)"][i]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = e.random_elem(3, true, &mut rng);
            let v = e.random_elem(3, true, &mut rng);
            (e, u, v)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn norm_is_multiplicative((_e, u, v) in pair()) {
            let uv = u.try_mul(&v).unwrap();
            prop_assert_eq!(uv.norm().unwrap(), &u.norm().unwrap() * &v.norm().unwrap());
            prop_assert!(decompose(&uv.norm().unwrap(), 0).is_ok());
        }

        #[test]
        fn norm_restricts_to_power((e, _u, _v) in pair(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = RatFunc::random(e.field(), 't', 4, true, &mut rng);
            let n = e.from_base(c.clone()).unwrap().norm().unwrap();
            prop_assert_eq!(n, c.pow(e.degree() as i64).unwrap());
        }

        #[test]
        fn ring_laws((_e, u, v) in pair()) {
            prop_assert_eq!(u.try_mul(&v).unwrap(), v.try_mul(&u).unwrap());
            let w = u.try_add(&v).unwrap();
            prop_assert_eq!(w.try_mul(&u).unwrap(), u.try_mul(&u).unwrap().try_add(&v.try_mul(&u).unwrap()).unwrap());
            prop_assert_eq!(w.extension().parse_elem(&w.to_string()).unwrap(), w);
        }
    }
}
