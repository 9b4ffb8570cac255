//! Seeded cross-checks of the library against small independent oracles.
//!
//! The report depends only on the seed and scale, never on timing.

use fieldunits::gf::{factor_poly, FieldSpec, Gf2Poly, Poly};
use fieldunits::groups::classify_scan;
use fieldunits::hahn::{HahnField, HahnSeries};
use fieldunits::norm::{ExtElem, SimpleExtension};
use fieldunits::perfect::{pc_decompose, pc_recompose, DyadicRatFunc};
use fieldunits::ratfunc::{decompose, integer_rank, recompose, RatFunc};
use fieldunits::valued::{
    check_valuation_axioms, recombine, section_free, split_unit, GroupKind, OrderedGroupElem, PAdic, PolyValuation,
    ValuationProbe, ValuedField,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::Report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self { name, passed: 0, failed: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn check_result(&mut self, r: fieldunits::Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub scale: usize,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> usize {
        self.suites.iter().map(|s| s.passed).sum()
    }

    pub fn failed(&self) -> usize {
        self.suites.iter().map(|s| s.failed).sum()
    }

    pub fn into_report(self) -> Report {
        let suites: Vec<_> = self
            .suites
            .iter()
            .map(|s| json!({"name": s.name, "passed": s.passed, "failed": s.failed, "first_failure": s.first_failure}))
            .collect();
        let doc = json!({
            "seed": self.seed,
            "scale": self.scale,
            "suites": suites,
            "passed": self.passed(),
            "failed": self.failed(),
        });
        let mut text = String::new();
        for s in &self.suites {
            let status = if s.failed == 0 { "PASS" } else { "FAIL" };
            text.push_str(&format!("{status} {:<22} {:>6} passed {:>4} failed\n", s.name, s.passed, s.failed));
            if let Some(f) = &s.first_failure {
                text.push_str(&format!("     first failure: {f}\n"));
            }
        }
        text.push_str(&format!("total: {} passed, {} failed (seed {})", self.passed(), self.failed(), self.seed));
        let ok = self.failed() == 0;
        Report { command: "selftest", json: doc, text, ok }
    }
}

type Suite = fn(&mut ChaCha8Rng, usize) -> SuiteResult;

pub fn run(seed: u64, scale: usize) -> SelftestReport {
    let scale = scale.max(1);
    let suites: [Suite; 10] = [
        classify_suite,
        gf2_irreducibility_suite,
        factor_suite,
        decompose_suite,
        rank_suite,
        axioms_suite,
        split_suite,
        hahn_suite,
        perfect_suite,
        norm_suite,
    ];
    let suites = suites
        .iter()
        .enumerate()
        .map(|(i, suite)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            suite(&mut rng, scale)
        })
        .collect();
    SelftestReport { seed, scale, suites }
}

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn trial_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).expect("n >= 2");
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1 && trial_prime(p)
}

fn classify_suite(_: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("classify");
    let bound = 20_000 * scale as u64;
    let found: Vec<u64> = match classify_scan(bound) {
        Ok(v) => v.iter().map(|e| e.q).collect(),
        Err(e) => {
            s.check(false, || e.to_string());
            return s;
        }
    };
    for q in 2..=bound {
        let expect = trial_prime_power(q) && (q == 2 || trial_prime_power(q - 1));
        s.check(found.binary_search(&q).is_ok() == expect, || format!("q = {q}"));
    }
    s
}

/// Remainder of bit-packed GF(2) polynomials.
fn gf2_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= db {
        a ^= b << (63 - a.leading_zeros() - db);
    }
    a
}

fn gf2_trial_irreducible(f: u64) -> bool {
    let d = 63 - f.leading_zeros();
    d >= 1 && (2u64..1 << (d / 2 + 1)).all(|g| 63 - g.leading_zeros() > d / 2 || gf2_rem(f, g) != 0)
}

fn gf2_irreducibility_suite(_: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("gf2-irreducibility");
    let max_deg = (9 + scale).min(14);
    for f in 2u64..1 << (max_deg + 1) {
        let p = Gf2Poly::from_u64(f);
        s.check_result(p.is_irreducible().map(|r| r == gf2_trial_irreducible(f)), || format!("{p}"));
    }
    s
}

fn random_poly(field: &FieldSpec, max_deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let d = rng.gen_range(1..=max_deg);
        let p = Poly::from_raw(field.clone(), 'x', (0..=d).map(|_| field.random(rng)).collect());
        if !p.is_zero() {
            return p;
        }
    }
}

fn factor_suite(rng: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("factor-roundtrip");
    for (p, n) in [(2, 1), (3, 1), (3, 2)] {
        let field = FieldSpec::new(p, n).expect("valid field");
        for _ in 0..20 * scale {
            let f = random_poly(&field, 20, rng);
            let seed = rng.gen();
            let r = factor_poly(&f, seed).and_then(|fac| {
                let mut ok = fac.expand() == f;
                for (g, _) in &fac.factors {
                    ok &= g.is_monic() && g.is_irreducible()?;
                }
                Ok(ok)
            });
            s.check_result(r, || format!("{f} over {field}"));
        }
    }
    s
}

fn decompose_suite(rng: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("decompose-roundtrip");
    let field = FieldSpec::new(3, 1).expect("valid field");
    for _ in 0..40 * scale {
        let a = RatFunc::random(&field, 'x', 6, true, rng);
        let b = RatFunc::random(&field, 'x', 6, true, rng);
        let r = (|| {
            let da = decompose(&a, 0)?;
            let db = decompose(&b, 0)?;
            let dab = decompose(&a.try_mul(&b)?, 0)?;
            Ok(recompose(&da) == a && dab == da.combine(&db)?)
        })();
        s.check_result(r, || format!("{a}, {b}"));
    }
    s
}

fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..ncols {
                    let sub = &f * &m[rank][k];
                    m[r][k] = &m[r][k] - sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_suite(rng: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("rank");
    for _ in 0..40 * scale {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=12));
        // low-rank products show up often enough to exercise dependence
        let rows: Vec<Vec<i64>> = if rng.gen_ratio(1, 3) {
            let k = rng.gen_range(1..=r.min(c));
            let a: Vec<Vec<i64>> = (0..r).map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let b: Vec<Vec<i64>> = (0..k).map(|_| (0..c).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            a.iter()
                .map(|ar| (0..c).map(|j| (0..k).map(|t| ar[t] * b[t][j]).sum()).collect())
                .collect()
        } else {
            (0..r).map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect()).collect()
        };
        s.check(integer_rank(&rows) == rational_rank(&rows), || format!("{rows:?}"));
    }
    s
}

fn axioms_suite(rng: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("valuation-axioms");
    let trials = 200 * scale;
    for p in [2, 3, 5] {
        let r = PAdic::new(p).and_then(|k| check_valuation_axioms(&k, trials, rng.gen()));
        s.check_result(r.map(|r| r.passed()), || format!("v_{p}"));
    }
    let f2 = FieldSpec::prime(2).expect("2 is prime");
    for f in ["x", "x+1", "x^2+x+1"] {
        let r = Poly::parse(f, &f2, 'x')
            .and_then(PolyValuation::new)
            .and_then(|k| check_valuation_axioms(&k, trials, rng.gen()));
        s.check_result(r.map(|r| r.passed()), || format!("v_({f})"));
    }
    for g in [GroupKind::Int, GroupKind::Lex(2), GroupKind::Dyadic] {
        let k = HahnField::new(FieldSpec::prime(3).expect("3 is prime"), g);
        s.check_result(check_valuation_axioms(&k, trials, rng.gen()).map(|r| r.passed()), || format!("Hahn over {g}"));
    }
    s
}

fn split_suite(rng: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("split-recombine");
    let f2 = FieldSpec::prime(2).expect("2 is prime");
    let Ok(v) = Poly::parse("x", &f2, 'x').and_then(PolyValuation::new) else {
        s.check(false, || "v_x".into());
        return s;
    };
    let sec = match section_free(&v, &[OrderedGroupElem::Int(1)], &[v.uniformizer()]) {
        Ok(sec) => sec,
        Err(e) => {
            s.check(false, || e.to_string());
            return s;
        }
    };
    for _ in 0..100 * scale {
        let u = v.sample(rng);
        let r = split_unit(&v, &u, &sec).and_then(|(g, w)| {
            let kernel = v.value_of(&w)?.is_zero();
            Ok(kernel && recombine(&v, &g, &w, &sec)? == u)
        });
        s.check_result(r, || format!("{u}"));
    }
    s
}

fn hahn_suite(rng: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("hahn-inverse");
    let field = FieldSpec::new(3, 2).expect("valid field");
    for g in [GroupKind::Int, GroupKind::Lex(2), GroupKind::Dyadic] {
        let k = HahnField::new(field.clone(), g);
        for _ in 0..20 * scale {
            let a = k.sample(rng);
            let n = rng.gen_range(1..=10);
            let r = a.inverse(n).and_then(|inv| a.try_mul(&inv)).map(|prod| {
                prod.terms() == HahnSeries::one(field.clone(), g).terms()
            });
            s.check_result(r, || format!("{a}, {n} terms"));
        }
    }
    s
}

fn perfect_suite(rng: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("perfect-closure");
    for _ in 0..50 * scale {
        let q = DyadicRatFunc::random(3, 10, true, rng);
        let r = pc_decompose(&q, rng.gen()).map(|d| {
            pc_recompose(&d) == q && q.frobenius().frobenius_inv() == q && q.frobenius_inv().frobenius() == q
        });
        s.check_result(r, || format!("{q}"));
    }
    s
}

/// det of the Sylvester matrix of `(m, g)`, coefficients lowest first.
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
        let inv = a[col][col].inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] = &a[r][c] - &sub;
            }
        }
    }
    det
}

fn oracle_norm(u: &ExtElem) -> RatFunc {
    let ext = u.extension();
    match u.coeffs().len() {
        1 => u.coeffs()[0].pow(ext.degree() as i64).expect("nonzero"),
        _ => sylvester_resultant(ext.modulus(), u.coeffs()),
    }
}

fn norm_suite(rng: &mut ChaCha8Rng, scale: usize) -> SuiteResult {
    let mut s = SuiteResult::new("norm");
    for desc in ["GF(2)(t)[y]/(y^2+y+t)", "GF(2)(t)[y]/(y^3+y+t)"] {
        let ext = match SimpleExtension::parse(desc) {
            Ok(e) => e,
            Err(e) => {
                s.check(false, || format!("{desc}: {e}"));
                continue;
            }
        };
        for _ in 0..25 * scale {
            let u = ext.random_elem(3, true, rng);
            let v = ext.random_elem(3, true, rng);
            let r = (|| {
                let nu = u.norm()?;
                let nuv = u.try_mul(&v)?.norm()?;
                Ok(nu == oracle_norm(&u) && nuv == nu.try_mul(&v.norm()?)?)
            })();
            s.check_result(r, || format!("{u}, {v} in {desc}"));
        }
    }
    s
}
