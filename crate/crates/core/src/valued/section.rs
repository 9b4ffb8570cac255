use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{GroupKind, OrderedGroupElem, ValuedField};
use crate::error::{Error, Result};

/// A homomorphic right inverse of a valuation with free value group,
/// stored as the images of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Section<E> {
    kind: GroupKind,
    basis: Vec<OrderedGroupElem>,
    images: Vec<E>,
    // rows of the inverse basis matrix: coords(g) = g · inverse
    inverse: Vec<Vec<i64>>,
}

fn coords_of(g: &OrderedGroupElem) -> Result<Vec<i64>> {
    match g {
        OrderedGroupElem::Int(n) => Ok(vec![*n]),
        OrderedGroupElem::Lex(v) => Ok(v.clone()),
        OrderedGroupElem::Dyadic(_) => Err(Error::Invalid("Z[1/2] has no finite free basis".into())),
    }
}

fn rank_of(kind: GroupKind) -> Result<usize> {
    match kind {
        GroupKind::Int => Ok(1),
        GroupKind::Lex(k) => Ok(k),
        GroupKind::Dyadic => Err(Error::Invalid("Z[1/2] has no finite free basis".into())),
    }
}

/// Integer inverse of a square integer matrix, if it is unimodular.
fn unimodular_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|v| if v.is_integer() { v.to_integer().to_i64() } else { None })
                .collect()
        })
        .collect()
}

/// Builds the section with `s(basis[i]) = images[i]`.
///
/// `basis` must be a free basis of the valuation's group (`Z` or `Z^k`),
/// and each image must have the matching valuation.
pub fn section_free<K: ValuedField>(field: &K, basis: &[OrderedGroupElem], images: &[K::Elem]) -> Result<Section<K::Elem>> {
    let kind = field.group();
    let rank = rank_of(kind)?;
    if basis.len() != rank || images.len() != rank {
        return Err(Error::Invalid(format!(
            "a basis of {kind} has {rank} elements; got {} generators and {} images",
            basis.len(),
            images.len()
        )));
    }
    let rows = basis
        .iter()
        .map(|b| {
            if b.kind() != kind {
                return Err(Error::Mismatch(format!("basis element {b} is not in {kind}")));
            }
            coords_of(b)
        })
        .collect::<Result<Vec<_>>>()?;
    let inverse = unimodular_inverse(&rows).ok_or_else(|| Error::Invalid(format!("{basis:?} is not a basis of {kind}")))?;
    for (b, img) in basis.iter().zip(images) {
        let v = field.value_of(img)?;
        if &v != b {
            return Err(Error::Invalid(format!("image {img:?} has valuation {v}, expected {b}")));
        }
    }
    Ok(Section { kind, basis: basis.to_vec(), images: images.to_vec(), inverse })
}

impl<E: Clone> Section<E> {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn basis(&self) -> &[OrderedGroupElem] {
        &self.basis
    }

    pub fn images(&self) -> &[E] {
        &self.images
    }

    /// Coordinates of `g` in the basis.
    pub fn coordinates(&self, g: &OrderedGroupElem) -> Result<Vec<i64>> {
        if g.kind() != self.kind {
            return Err(Error::Mismatch(format!("{g} is not in {}", self.kind)));
        }
        let v = coords_of(g)?;
        let n = v.len();
        Ok((0..n).map(|j| (0..n).map(|i| v[i] * self.inverse[i][j]).sum()).collect())
    }

    pub fn apply<K: ValuedField<Elem = E>>(&self, field: &K, g: &OrderedGroupElem) -> Result<E> {
        let c = self.coordinates(g)?;
        let mut acc = field.one();
        for (img, &e) in self.images.iter().zip(&c) {
            if e != 0 {
                acc = field.mul(&acc, &field.pow(img, e)?)?;
            }
        }
        Ok(acc)
    }
}

/// `u ↦ (v(u), u / s(v(u)))`.
pub fn split_unit<K: ValuedField>(field: &K, u: &K::Elem, s: &Section<K::Elem>) -> Result<(OrderedGroupElem, K::Elem)> {
    if field.is_zero(u) {
        return Err(Error::ZeroInput("split"));
    }
    let g = field.value_of(u)?;
    let w = field.mul(u, &field.inv(&s.apply(field, &g)?)?)?;
    Ok((g, w))
}

/// `(g, w) ↦ s(g)·w` for `w` in the kernel of the valuation.
pub fn recombine<K: ValuedField>(field: &K, g: &OrderedGroupElem, w: &K::Elem, s: &Section<K::Elem>) -> Result<K::Elem> {
    if field.is_zero(w) {
        return Err(Error::ZeroInput("recombine"));
    }
    let vw = field.value_of(w)?;
    if !vw.is_zero() {
        return Err(Error::Invalid(format!("{w:?} has valuation {vw}, not 0")));
    }
    field.mul(&s.apply(field, g)?, w)
}

#[cfg(test)]
mod tests {
    use super::super::{PAdic, PolyValuation, ValuationProbe};
    use super::*;
    use crate::gf::{FieldSpec, Poly};
    use crate::ratfunc::{valuation_at, RatFunc};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (FieldSpec, PolyValuation) {
        let f2 = FieldSpec::prime(2).unwrap();
        let v = PolyValuation::new(Poly::parse("x", &f2, 'x').unwrap()).unwrap();
        (f2, v)
    }

    fn rf(s: &str, f: &FieldSpec) -> RatFunc {
        RatFunc::parse(s, f, 'x').unwrap()
    }

    #[test]
    fn section_examples() {
        let (f2, v) = setup();
        let s = section_free(&v, &[OrderedGroupElem::Int(1)], &[rf("x", &f2)]).unwrap();
        assert_eq!(s.apply(&v, &OrderedGroupElem::Int(3)).unwrap(), rf("x^3", &f2));
        assert_eq!(s.apply(&v, &OrderedGroupElem::Int(-2)).unwrap(), rf("1/x^2", &f2));

        let s = section_free(&v, &[OrderedGroupElem::Int(1)], &[rf("x(x+1)", &f2)]).unwrap();
        let s2 = s.apply(&v, &OrderedGroupElem::Int(2)).unwrap();
        assert_eq!(s2, rf("x^2(x+1)^2", &f2));
        let x = Poly::parse("x", &f2, 'x').unwrap();
        assert_eq!(valuation_at(&s2, &x).unwrap(), 2);

        // basis -1 is also a basis of Z
        let s = section_free(&v, &[OrderedGroupElem::Int(-1)], &[rf("1/x", &f2)]).unwrap();
        assert_eq!(s.apply(&v, &OrderedGroupElem::Int(2)).unwrap(), rf("x^2", &f2));
    }

    #[test]
    fn section_rejections() {
        let (f2, v) = setup();
        assert!(section_free(&v, &[OrderedGroupElem::Int(1)], &[rf("x+1", &f2)]).is_err());
        assert!(section_free(&v, &[OrderedGroupElem::Int(2)], &[rf("x^2", &f2)]).is_err());
        assert!(section_free(&v, &[], &[]).is_err());
        assert!(section_free(&v, &[OrderedGroupElem::Lex(vec![1])], &[rf("x", &f2)]).is_err());
    }

    #[test]
    fn split_examples() {
        let (f2, v) = setup();
        let s = section_free(&v, &[OrderedGroupElem::Int(1)], &[rf("x", &f2)]).unwrap();
        let (g, w) = split_unit(&v, &rf("x^3/(x+1)", &f2), &s).unwrap();
        assert_eq!(g, OrderedGroupElem::Int(3));
        assert_eq!(w, rf("1/(x+1)", &f2));

        let u = rf("x^2+x+1", &f2);
        assert_eq!(split_unit(&v, &u, &s).unwrap(), (OrderedGroupElem::Int(0), u));

        let w1 = rf("x+1", &f2);
        assert_eq!(recombine(&v, &OrderedGroupElem::Int(0), &w1, &s).unwrap(), w1);
        assert_eq!(recombine(&v, &OrderedGroupElem::Int(2), &rf("1", &f2), &s).unwrap(), rf("x^2", &f2));
        assert_eq!(recombine(&v, &OrderedGroupElem::Int(-1), &w1, &s).unwrap(), rf("(x+1)/x", &f2));
        assert!(recombine(&v, &OrderedGroupElem::Int(1), &rf("x", &f2), &s).is_err());
        assert!(split_unit(&v, &rf("0", &f2), &s).is_err());

        let c = PolyValuation::new(Poly::parse("x^2+x+1", &f2, 'x').unwrap()).unwrap();
        let s = section_free(&c, &[OrderedGroupElem::Int(1)], &[rf("x^2+x+1", &f2)]).unwrap();
        let (g, w) = split_unit(&c, &rf("x^5+x+1", &f2), &s).unwrap();
        assert_eq!(g, OrderedGroupElem::Int(1));
        assert_eq!(w, rf("x^3+x^2+1", &f2));
    }

    #[test]
    fn padic_split_round_trip() {
        let v = PAdic::new(3).unwrap();
        let three = num_rational::BigRational::from_integer(3.into());
        let s = section_free(&v, &[OrderedGroupElem::Int(1)], &[three]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let u = v.sample(&mut rng);
            let (g, w) = split_unit(&v, &u, &s).unwrap();
            assert_eq!(recombine(&v, &g, &w, &s).unwrap(), u);
        }
    }

    #[test]
    fn unimodular_inverse_cases() {
        assert_eq!(unimodular_inverse(&[vec![1, 1], vec![0, 1]]), Some(vec![vec![1, -1], vec![0, 1]]));
        assert_eq!(unimodular_inverse(&[vec![2, 0], vec![0, 1]]), None);
        assert_eq!(unimodular_inverse(&[vec![1, 2], vec![2, 4]]), None);
    }

    /// `v(u) = 0` for every nonzero rational, as a `Z^0`-valued map.
    struct Trivial;

    impl ValuedField for Trivial {
        type Elem = BigRational;

        fn group(&self) -> GroupKind {
            GroupKind::Lex(0)
        }

        fn valuation(&self, x: &BigRational) -> Result<super::super::Value> {
            Ok(if x.is_zero() {
                super::super::Value::Infinity
            } else {
                super::super::Value::Finite(OrderedGroupElem::Lex(vec![]))
            })
        }

        fn add(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
            Ok(a + b)
        }

        fn mul(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
            Ok(a * b)
        }

        fn inv(&self, a: &BigRational) -> Result<BigRational> {
            if a.is_zero() {
                return Err(Error::ZeroInput("inv"));
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

    #[test]
    fn trivial_group_split_degenerates() {
        let s = section_free(&Trivial, &[], &[]).unwrap();
        let u = BigRational::new(BigInt::from(-7), BigInt::from(12));
        let (g, w) = split_unit(&Trivial, &u, &s).unwrap();
        assert!(g.is_zero());
        assert_eq!(w, u);
        assert_eq!(recombine(&Trivial, &g, &w, &s).unwrap(), u);
    }
}
