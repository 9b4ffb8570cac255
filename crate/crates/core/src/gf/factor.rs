//! Factorization over `F_q`: squarefree decomposition, distinct-degree
//! splitting, then Cantor–Zassenhaus equal-degree splitting (the trace
//! variant in characteristic 2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::field::FqElem;
use crate::gf::poly::Poly;

/// `unit * prod f_i^{e_i}` with monic irreducible, pairwise distinct `f_i`
/// in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FqElem,
    pub var: char,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Multiplies everything back out.
    pub fn expand(&self) -> Poly {
        let field = self.unit.field().clone();
        let var = self.var;
        self.factors.iter().fold(
            Poly::constant(field, var, self.unit.value()),
            |acc, (f, e)| &acc * &f.pow(*e as u64),
        )
    }
}

/// Factors `f` with equal-degree splitting driven by `seed`.
pub fn factor_poly(f: &Poly, seed: u64) -> Result<Factorization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    factor_with_rng(f, &mut rng)
}

pub fn factor_with_rng<R: Rng + ?Sized>(f: &Poly, rng: &mut R) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroInput("factorization"));
    }
    let field = f.field().clone();
    let unit = field.elem(f.leading());
    if field.is_gf2() {
        let factors = f
            .to_gf2()
            .factor(rng)?
            .into_iter()
            .map(|(g, e)| (Poly::from_gf2(&g, f.var()), e))
            .collect();
        return Ok(Factorization { unit, var: f.var(), factors });
    }
    let monic = f.monic();
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree_decomposition(&monic)? {
        for (block, d) in distinct_degree(&sqf)? {
            for g in equal_degree(&block, d, rng)? {
                factors.push((g, mult));
            }
        }
    }
    factors.sort();
    Ok(Factorization { unit, var: f.var(), factors })
}

/// `(g_i, i)` with `f = prod g_i^i` for monic `f`; each `g_i` squarefree.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    sff_into(f, 1, &mut out)?;
    Ok(out)
}

fn sff_into(f: &Poly, mult: u32, out: &mut Vec<(Poly, u32)>) -> Result<()> {
    if f.is_constant() {
        return Ok(());
    }
    let p = f.field().characteristic() as u32;
    let d = f.derivative();
    if d.is_zero() {
        let root = f.pth_root().expect("zero derivative means a p-th power");
        return sff_into(&root, mult * p, out);
    }
    let mut c = f.gcd(&d)?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.div_exact(&y)?;
        if !fac.is_one() {
            out.push((fac, i * mult));
        }
        w = y;
        c = c.div_exact(&w)?;
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root().expect("cofactor is a p-th power");
        sff_into(&root, mult * p, out)?;
    }
    Ok(())
}

/// Splits a monic squarefree `f` into `(product of degree-d factors, d)`.
pub fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let q = f.field().order();
    let x = Poly::x(f.field().clone(), f.var());
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (d + 1) {
            break;
        }
        d += 1;
        h = h.powmod(q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    Ok(out)
}

fn random_poly<R: Rng + ?Sized>(f: &Poly, n: usize, rng: &mut R) -> Poly {
    let field = f.field();
    Poly::from_raw(field.clone(), f.var(), (0..n).map(|_| field.random(rng)).collect())
}

/// Cantor–Zassenhaus splitting of a monic squarefree product of
/// irreducibles of degree `d`.
pub fn equal_degree<R: Rng + ?Sized>(f: &Poly, d: usize, rng: &mut R) -> Result<Vec<Poly>> {
    let n = f.degree().ok_or(Error::ZeroInput("factorization"))?;
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field().clone();
    let q = field.order();
    let one = Poly::one(field.clone(), f.var());
    loop {
        let a = random_poly(f, n, rng);
        if a.is_constant() {
            continue;
        }
        let probe = if field.characteristic() == 2 {
            // absolute trace into F_2: a + a^2 + ... + a^(2^(k d - 1)), q = 2^k
            let steps = field.degree() as usize * d;
            let mut t = a.clone();
            let mut acc = a;
            for _ in 1..steps {
                t = t.mulmod(&t, f)?;
                acc = &acc + &t;
            }
            acc
        } else {
            // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q-1)/2)
            let mut t = a.clone();
            let mut acc = a;
            for _ in 1..d {
                t = t.powmod(q, f)?;
                acc = acc.mulmod(&t, f)?;
            }
            &acc.powmod((q - 1) / 2, f)? - &one
        };
        if probe.is_zero() {
            continue;
        }
        let g = probe.gcd(f)?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let other = f.div_exact(&g)?;
            let mut v = equal_degree(&g, d, rng)?;
            v.extend(equal_degree(&other, d, rng)?);
            return Ok(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field::FieldSpec;

    fn parse(s: &str, f: &FieldSpec) -> Poly {
        Poly::parse(s, f, 'x').unwrap()
    }

    #[test]
    fn examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let r = factor_poly(&parse("x^2+x", &f2), 0).unwrap();
        assert!(r.unit.is_one());
        assert_eq!(r.factors, vec![(parse("x", &f2), 1), (parse("x+1", &f2), 1)]);

        let r = factor_poly(&parse("x^5+x+1", &f2), 0).unwrap();
        assert_eq!(r.factors, vec![(parse("x^2+x+1", &f2), 1), (parse("x^3+x^2+1", &f2), 1)]);

        let f3 = FieldSpec::prime(3).unwrap();
        let r = factor_poly(&parse("2x^2+2x", &f3), 0).unwrap();
        assert_eq!(r.unit.value(), 2);
        assert_eq!(r.factors, vec![(parse("x", &f3), 1), (parse("x+1", &f3), 1)]);

        assert!(factor_poly(&Poly::zero(f3, 'x'), 0).is_err());
    }

    #[test]
    fn pth_power_parts() {
        let f3 = FieldSpec::prime(3).unwrap();
        // (x+1)^3 (x^2+1)^6 x^2
        let f = &(&parse("x+1", &f3).pow(3) * &parse("x^2+1", &f3).pow(6)) * &parse("x^2", &f3);
        let r = factor_poly(&f, 3).unwrap();
        assert_eq!(
            r.factors,
            vec![(parse("x", &f3), 2), (parse("x+1", &f3), 3), (parse("x^2+1", &f3), 6)]
        );
        let f9 = FieldSpec::new(3, 2).unwrap();
        // a x^9 + 1 is a cube: (a^{1/3} x^3 + 1)^3
        let g = parse("a*x^9+1", &f9);
        let r = factor_poly(&g, 1).unwrap();
        assert_eq!(r.expand(), g);
        assert!(r.factors.iter().all(|(_, e)| e % 3 == 0));
    }

    #[test]
    fn extension_field_char_two() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        // x^2+x+1 splits over F_4
        let r = factor_poly(&parse("x^2+x+1", &f4), 9).unwrap();
        assert_eq!(r.factors.len(), 2);
        assert!(r.factors.iter().all(|(g, e)| g.degree() == Some(1) && *e == 1));
        let f16 = FieldSpec::new(2, 4).unwrap();
        let g = parse("x^15+1", &f16);
        let r = factor_poly(&g, 2).unwrap();
        assert_eq!(r.factors.len(), 15);
        assert_eq!(r.expand(), g);
    }

    #[test]
    fn seeds_change_nothing() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let g = parse("x^12+(a+2)*x^7+2*x^3+a*x+1", &f9);
        let a = factor_poly(&g, 0).unwrap();
        assert_eq!(a, factor_poly(&g, 0).unwrap());
        for seed in 1..6 {
            assert_eq!(a, factor_poly(&g, seed).unwrap());
        }
        assert_eq!(a.expand(), g);
    }
}
