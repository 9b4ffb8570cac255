//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! report prints in order; the process exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use fieldunits::gf::{factor_poly, FieldSpec, Gf2Poly, Poly};
use fieldunits::groups::{classify_finite_field, classify_scan, Family};
use fieldunits::hahn::{HahnField, HahnSeries};
use fieldunits::norm::SimpleExtension;
use fieldunits::perfect::{pc_decompose, pc_recompose, DyadicRatFunc};
use fieldunits::ratfunc::{decompose, multiplicative_rank, recompose, RatFunc};
use fieldunits::valued::{
    check_valuation_axioms, recombine, section_free, split_unit, GroupKind, OrderedGroupElem, PAdic, PolyValuation,
    Section, ValuationProbe, ValuedField,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn field(s: &str) -> FieldSpec {
    s.parse().expect("valid field")
}

// ---- 1. classification ----------------------------------------------------

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

fn sieve_prime_power(spf: &[u32], mut n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = spf[n] as usize;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn classification() -> fieldunits::Result<Outcome> {
    const BOUND: usize = 1_000_000;
    let expected: [(u64, Family); 14] = [
        (2, Family::F2),
        (3, Family::FermatPrime),
        (4, Family::MersennePlusOne),
        (5, Family::FermatPrime),
        (8, Family::MersennePlusOne),
        (9, Family::F9),
        (17, Family::FermatPrime),
        (32, Family::MersennePlusOne),
        (128, Family::MersennePlusOne),
        (257, Family::FermatPrime),
        (8192, Family::MersennePlusOne),
        (65537, Family::FermatPrime),
        (131072, Family::MersennePlusOne),
        (524288, Family::MersennePlusOne),
    ];
    let scan: Vec<(u64, Family)> = classify_scan(BOUND as u64)?.iter().map(|e| (e.q, e.family)).collect();
    if scan != expected {
        return Ok(fail(format!("scan returned {scan:?}")));
    }
    let spf = smallest_prime_factors(BOUND);
    let mut checked = 0;
    let mut oracle_set = Vec::new();
    for q in 2..=BOUND {
        if !sieve_prime_power(&spf, q) {
            continue;
        }
        let oracle = q == 2 || sieve_prime_power(&spf, q - 1);
        let c = classify_finite_field(q as u64)?;
        if c.is_indecomposable() != oracle {
            return Ok(fail(format!("q = {q}: classifier {c:?}, oracle {oracle}")));
        }
        if oracle {
            oracle_set.push(q as u64);
        }
        checked += 1;
    }
    if oracle_set != expected.map(|e| e.0) {
        return Ok(fail(format!("oracle set {oracle_set:?}")));
    }
    Ok(pass(format!("14 fields, {checked} prime powers agree with the oracle")))
}

// ---- 2. rational function decomposition -----------------------------------

fn decomposition() -> fieldunits::Result<Outcome> {
    let mut r = rng(2);
    for fs in ["GF(2)", "GF(3)", "GF(3^2)"] {
        let f = field(fs);
        for i in 0..1000 {
            let q = RatFunc::random(&f, 'x', 30, true, &mut r);
            if recompose(&decompose(&q, i)?) != q {
                return Ok(fail(format!("round trip over {fs}: {q}")));
            }
        }
        for i in 0..500 {
            let a = RatFunc::random(&f, 'x', 30, true, &mut r);
            let b = RatFunc::random(&f, 'x', 30, true, &mut r);
            let lhs = decompose(&a.try_mul(&b)?, i)?;
            if lhs != decompose(&a, i)?.combine(&decompose(&b, i)?)? {
                return Ok(fail(format!("homomorphism over {fs}: {a}, {b}")));
            }
        }
    }
    Ok(pass("3 x 1000 round trips, 3 x 500 homomorphism pairs"))
}

// ---- 3. factorization vs trial division -----------------------------------

fn bit_degree(a: u64) -> u32 {
    63 - a.leading_zeros()
}

fn bit_rem(mut a: u64, b: u64) -> u64 {
    while a != 0 && bit_degree(a) >= bit_degree(b) {
        a ^= b << (bit_degree(a) - bit_degree(b));
    }
    a
}

fn bit_div(mut a: u64, b: u64) -> u64 {
    let mut q = 0;
    while a != 0 && bit_degree(a) >= bit_degree(b) {
        let s = bit_degree(a) - bit_degree(b);
        q |= 1 << s;
        a ^= b << s;
    }
    q
}

/// Factorization by repeated division by the smallest nonconstant divisor.
fn trial_factor(mut f: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut g = 2u64;
    while bit_degree(f) > 0 {
        if 2 * bit_degree(g) > bit_degree(f) {
            *out.entry(f).or_default() += 1;
            break;
        }
        if bit_rem(f, g) == 0 {
            *out.entry(g).or_default() += 1;
            f = bit_div(f, g);
        } else {
            g += 1;
        }
    }
    out
}

fn factorization() -> fieldunits::Result<Outcome> {
    let f2 = field("GF(2)");
    let mut count = 0;
    for bits in 1u64..1 << 13 {
        let f = Poly::from_gf2(&Gf2Poly::from_u64(bits), 'x');
        let fac = factor_poly(&f, bits)?;
        let mut got = BTreeMap::new();
        for (g, e) in &fac.factors {
            if !g.is_irreducible()? {
                return Ok(fail(format!("{f}: emitted factor {g} is reducible")));
            }
            let w = g.to_gf2().words().first().copied().unwrap_or(0);
            *got.entry(w).or_default() += e;
        }
        if got != trial_factor(bits) || fac.unit.value() != f2.one() {
            return Ok(fail(format!("{f}: factorization disagrees with trial division")));
        }
        count += 1;
    }
    Ok(pass(format!("{count} monic polynomials of degree <= 12")))
}

// ---- 4. valuation axioms --------------------------------------------------

fn axioms() -> fieldunits::Result<Outcome> {
    fn run<K: ValuationProbe>(k: &K, name: &str, seed: u64, out: &mut Vec<String>) -> fieldunits::Result<bool> {
        let r = check_valuation_axioms(k, 1000, seed)?;
        if !r.passed() {
            out.push(format!("{name}: {r:?}"));
        }
        Ok(r.passed())
    }
    let mut bad = Vec::new();
    let mut n = 0;
    for p in [2, 3, 5] {
        run(&PAdic::new(p)?, &format!("v_{p}"), SEED + p, &mut bad)?;
        n += 1;
    }
    let f2 = field("GF(2)");
    for f in ["x", "x+1", "x^2+x+1"] {
        run(&PolyValuation::new(Poly::parse(f, &f2, 'x')?)?, f, SEED, &mut bad)?;
        n += 1;
    }
    for g in [GroupKind::Int, GroupKind::Lex(2), GroupKind::Dyadic] {
        run(&HahnField::new(field("GF(3)"), g), &g.to_string(), SEED, &mut bad)?;
        n += 1;
    }
    Ok(if bad.is_empty() { pass(format!("{n} valuations x 1000 samples")) } else { fail(bad.join("; ")) })
}

// ---- 5. splitting ---------------------------------------------------------

fn check_split<K: ValuedField>(
    k: &K,
    sec: &Section<K::Elem>,
    samples: &[K::Elem],
) -> fieldunits::Result<Option<String>>
where
    K::Elem: std::fmt::Debug,
{
    let mut prev: Option<(K::Elem, OrderedGroupElem, K::Elem)> = None;
    for u in samples {
        let (g, w) = split_unit(k, u, sec)?;
        if !k.value_of(&w)?.is_zero() || recombine(k, &g, &w, sec)? != *u || split_unit(k, &recombine(k, &g, &w, sec)?, sec)? != (g.clone(), w.clone()) {
            return Ok(Some(format!("round trip at {u:?}")));
        }
        if let Some((u0, g0, w0)) = &prev {
            let (gp, wp) = split_unit(k, &k.mul(u0, u)?, sec)?;
            if gp != g0.try_add(&g)? || wp != k.mul(w0, &w)? {
                return Ok(Some(format!("product at {u0:?}, {u:?}")));
            }
        }
        prev = Some((u.clone(), g, w));
    }
    Ok(None)
}

fn splitting() -> fieldunits::Result<Outcome> {
    let mut r = rng(5);
    let mut bad = Vec::new();
    let mut fields = 0;

    for p in [2u64, 3, 5] {
        let k = PAdic::new(p)?;
        let sec = section_free(&k, &[OrderedGroupElem::Int(1)], &[BigRational::from_integer(BigInt::from(p))])?;
        let samples: Vec<_> = (0..500).map(|_| k.sample(&mut r)).collect();
        bad.extend(check_split(&k, &sec, &samples)?.map(|e| format!("v_{p}: {e}")));
        fields += 1;
    }
    let f2 = field("GF(2)");
    for f in ["x", "x+1", "x^2+x+1"] {
        let k = PolyValuation::new(Poly::parse(f, &f2, 'x')?)?;
        let sec = section_free(&k, &[OrderedGroupElem::Int(1)], &[k.uniformizer()])?;
        let samples: Vec<_> = (0..500).map(|_| k.sample(&mut r)).collect();
        bad.extend(check_split(&k, &sec, &samples)?.map(|e| format!("v_{f}: {e}")));
        fields += 1;
    }
    let f3 = field("GF(3)");
    for (g, basis) in [
        (GroupKind::Int, vec![OrderedGroupElem::Int(1)]),
        (GroupKind::Lex(2), vec![OrderedGroupElem::Lex(vec![1, 0]), OrderedGroupElem::Lex(vec![0, 1])]),
    ] {
        let k = HahnField::new(f3.clone(), g);
        let images: Vec<_> = basis.iter().map(|b| HahnSeries::section(f3.clone(), b.clone())).collect();
        let sec = section_free(&k, &basis, &images)?;
        let samples: Vec<_> = (0..500).map(|_| k.sample(&mut r)).collect();
        bad.extend(check_split(&k, &sec, &samples)?.map(|e| format!("Hahn {g}: {e}")));
        fields += 1;
    }

    // hs_section homomorphism, including the dyadic group (no finite basis)
    for g in [GroupKind::Int, GroupKind::Lex(2), GroupKind::Dyadic] {
        let k = HahnField::new(f3.clone(), g);
        for _ in 0..200 {
            let (a, b) = (k.random_exponent(&mut r), k.random_exponent(&mut r));
            let lhs = HahnSeries::section(f3.clone(), a.try_add(&b)?);
            let rhs = HahnSeries::section(f3.clone(), a.clone()).try_mul(&HahnSeries::section(f3.clone(), b.clone()))?;
            if lhs != rhs || lhs.valuation()? != a.try_add(&b)? {
                bad.push(format!("hs_section over {g} at {a}, {b}"));
                break;
            }
        }
        // split through the section x^g for the dyadic group too
        if g == GroupKind::Dyadic {
            for _ in 0..500 {
                let u = k.sample(&mut r);
                let (v, w) = u.unit_split()?;
                if !w.valuation()?.is_zero() || HahnSeries::section(f3.clone(), v.clone()).try_mul(&w)? != u {
                    bad.push(format!("Hahn Z[1/2] unit split at {u}"));
                    break;
                }
            }
            fields += 1;
        }
    }
    Ok(if bad.is_empty() {
        pass(format!("{fields} valued fields x 500 samples, hs_section on 3 x 200 pairs"))
    } else {
        fail(bad.join("; "))
    })
}

// ---- 6. perfect closure ---------------------------------------------------

fn perfect_closure() -> fieldunits::Result<Outcome> {
    let mut r = rng(6);
    for i in 0..200 {
        let q = DyadicRatFunc::random(3, 12, true, &mut r);
        if q.level()? > 3 || pc_recompose(&pc_decompose(&q, i)?) != q {
            return Ok(fail(format!("round trip at {q}")));
        }
    }
    for _ in 0..300 {
        let q = DyadicRatFunc::random(3, 12, false, &mut r);
        if q.frobenius().frobenius_inv() != q || q.frobenius_inv().frobenius() != q {
            return Ok(fail(format!("frobenius pair at {q}")));
        }
    }
    Ok(pass("200 round trips, 300 frobenius pairs"))
}

// ---- 7. norm --------------------------------------------------------------

fn norm() -> fieldunits::Result<Outcome> {
    let mut r = rng(7);
    let f2 = field("GF(2)");
    for desc in ["GF(2)(t)[y]/(y^2+y+t)", "GF(2)(t)[y]/(y^3+y+t)"] {
        let ext = SimpleExtension::parse(desc)?;
        for _ in 0..300 {
            let (a, b) = (ext.random_elem(4, true, &mut r), ext.random_elem(4, true, &mut r));
            if a.try_mul(&b)?.norm()? != a.norm()?.try_mul(&b.norm()?)? {
                return Ok(fail(format!("multiplicativity in {desc} at {a}, {b}")));
            }
        }
        for _ in 0..100 {
            let c = RatFunc::random(&f2, 't', 6, true, &mut r);
            let expect = c.pow(ext.degree() as i64)?;
            if ext.from_base(c.clone())?.norm()? != expect {
                return Ok(fail(format!("base element {c} in {desc}")));
            }
        }
    }
    Ok(pass("2 extensions x (300 pairs + 100 base elements)"))
}

// ---- 8. rank --------------------------------------------------------------

fn gaussian_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for k in c..cols {
                    row[k] = &row[k] - &f * &pivot[k];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The first `n` monic irreducibles over GF(2) in increasing bit order.
fn irreducibles(n: usize) -> fieldunits::Result<Vec<Poly>> {
    let mut out = Vec::new();
    let mut bits = 2u64;
    while out.len() < n {
        let g = Gf2Poly::from_u64(bits);
        if g.is_irreducible()? {
            out.push(Poly::from_gf2(&g, 'x'));
        }
        bits += 1;
    }
    Ok(out)
}

fn rank() -> fieldunits::Result<Outcome> {
    let mut r = rng(8);
    let primes = irreducibles(20)?;
    let f2 = field("GF(2)");
    for i in 0..100 {
        let (rows, cols) = (r.gen_range(1..=10), r.gen_range(1..=20));
        let low = r.gen_ratio(1, 3);
        let k = r.gen_range(1..=rows.min(cols));
        let mat: Vec<Vec<i64>> = if low {
            // combinations of k rows, entries clamped to [-5, 5]
            let basis: Vec<Vec<i64>> = (0..k).map(|_| (0..cols).map(|_| r.gen_range(-2..=2)).collect()).collect();
            (0..rows)
                .map(|_| {
                    let c: Vec<i64> = (0..k).map(|_| r.gen_range(-1..=1)).collect();
                    (0..cols).map(|j| (0..k).map(|t| c[t] * basis[t][j]).sum::<i64>().clamp(-5, 5)).collect()
                })
                .collect()
        } else {
            (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-5..=5)).collect()).collect()
        };
        let elems = mat
            .iter()
            .map(|row| {
                row.iter().zip(&primes).try_fold(RatFunc::one(f2.clone(), 'x'), |acc, (&e, p)| {
                    acc.try_mul(&RatFunc::from_poly(p.clone()).pow(e)?)
                })
            })
            .collect::<fieldunits::Result<Vec<_>>>()?;
        let got = multiplicative_rank(&elems, i)?;
        let want = gaussian_rank(&mat);
        if got != want {
            return Ok(fail(format!("matrix {mat:?}: rank {got}, oracle {want}")));
        }
    }
    Ok(pass("100 exponent matrices up to 10 x 20"))
}

// ---- 9. performance -------------------------------------------------------

fn performance() -> fieldunits::Result<Outcome> {
    let mut r = rng(9);
    let f = Gf2Poly::random(512, &mut r).add(&Gf2Poly::monomial(512));
    let t = Instant::now();
    let fac = f.factor(&mut r)?;
    let factor_time = t.elapsed();
    let back = fac.iter().fold(Gf2Poly::one(), |acc, (g, e)| acc.mul(&g.pow(*e as u64)));
    if back != f {
        return Ok(fail("degree-512 factorization does not multiply back"));
    }
    let a = Gf2Poly::random(10_000, &mut r).add(&Gf2Poly::monomial(10_000));
    let b = Gf2Poly::random(10_000, &mut r).add(&Gf2Poly::monomial(10_000));
    let t = Instant::now();
    let c = a.mul(&b);
    let mul_time = t.elapsed();
    if c.degree() != Some(20_000) {
        return Ok(fail("degree-10^4 product has the wrong degree"));
    }
    let detail = format!("factor deg 512: {factor_time:.2?} (< 1s), mul deg 10^4: {mul_time:.2?} (< 0.5s)");
    Ok(if factor_time < Duration::from_secs(1) && mul_time < Duration::from_millis(500) {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn main() {
    type Criterion = (&'static str, Option<Duration>, fn() -> fieldunits::Result<Outcome>);
    let criteria: [Criterion; 9] = [
        ("classification up to 10^6", Some(Duration::from_secs(10)), classification),
        ("rational function decomposition", Some(Duration::from_secs(30)), decomposition),
        ("GF(2) factorization vs trial division", Some(Duration::from_secs(60)), factorization),
        ("valuation axioms", None, axioms),
        ("unit splitting", None, splitting),
        ("perfect closure", None, perfect_closure),
        ("norm", None, norm),
        ("multiplicative rank", None, rank),
        ("performance", None, performance),
    ];
    let mut failures = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f().unwrap_or_else(|e| fail(format!("error: {e}")));
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let ok = outcome.ok && in_time;
        let budget = limit.map(|l| format!(" / {l:?}")).unwrap_or_default();
        println!(
            "criterion {}: {} {name} -- {} [{elapsed:.2?}{budget}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            outcome.detail
        );
        failures += usize::from(!ok);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
