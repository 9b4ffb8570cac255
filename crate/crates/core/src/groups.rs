//! Integer structure and finitely generated abelian groups.
//!
//! Everything here works on `u64` values. Primality is decided by a
//! Miller–Rabin test with a witness set that is deterministic for all
//! 64-bit inputs, and factoring combines trial division with Brent's
//! variant of Pollard's rho.
//!
//! The finite-field classifier answers whether `F_q^×` (which is cyclic of
//! order `q - 1`) is indecomposable, labelling every indecomposable case with
//! one of the four families `F_2`, `F_9`, Fermat prime, Mersenne prime plus
//! one.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest input accepted by [`factor_integer`] and [`classify_finite_field`].
pub const MAX_INPUT: u64 = 1 << 63;

/// Largest bound accepted by [`classify_scan`].
pub const MAX_SCAN_BOUND: u64 = 1 << 40;

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's cycle-finding rho. `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn collect_prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    collect_prime_factors(d, out);
    collect_prime_factors(n / d, out);
}

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Factors `1 <= n <= 2^63`.
pub fn factor_integer(n: u64) -> Result<FactoredInteger> {
    if n == 0 || n > MAX_INPUT {
        return Err(Error::OutOfRange(format!("factor_integer needs 1 <= n <= 2^63, got {n}")));
    }
    let mut rest = n;
    let mut primes = Vec::new();
    for p in [2u64, 3, 5] {
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    // wheel mod 30 up to a small bound, then rho
    let mut d = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while d <= 1 << 12 && d * d <= rest {
        while rest.is_multiple_of(d) {
            primes.push(d);
            rest /= d;
        }
        d += steps[i];
        i = (i + 1) % steps.len();
    }
    if rest > 1 {
        collect_prime_factors(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(FactoredInteger { value: n, factors })
}

/// Returns `(p, k)` with `p^k = n` when `n` is a prime power (`k >= 1`).
pub fn is_prime_power(n: u64) -> Option<(u64, u32)> {
    if !(2..=MAX_INPUT).contains(&n) {
        return None;
    }
    let f = factor_integer(n).ok()?;
    match f.factors() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Fermat/Mersenne membership flags of an integer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SpecialPrimeKind {
    pub fermat: bool,
    pub mersenne: bool,
}

impl SpecialPrimeKind {
    pub fn is_empty(&self) -> bool {
        !self.fermat && !self.mersenne
    }
}

/// `2^k` with `k >= 1`.
fn is_nontrivial_power_of_two(n: u64) -> bool {
    n >= 2 && n.is_power_of_two()
}

/// Classifies `n` as a Fermat prime (`2^k + 1`) and/or a Mersenne prime
/// (`2^k - 1`), with `k >= 1`.
pub fn special_prime_kind(n: u64) -> Result<SpecialPrimeKind> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("special_prime_kind needs n >= 2, got {n}")));
    }
    if !is_prime(n) {
        return Ok(SpecialPrimeKind::default());
    }
    Ok(SpecialPrimeKind {
        fermat: is_nontrivial_power_of_two(n - 1),
        mersenne: n.checked_add(1).is_some_and(is_nontrivial_power_of_two),
    })
}

/// Orders of the prime-power cyclic factors of `C_n`, ascending by prime.
pub fn primary_decomposition(n: u64) -> Result<Vec<u64>> {
    let f = factor_integer(n)?;
    Ok(f.factors().iter().map(|&(p, e)| p.pow(e)).collect())
}

/// A finitely generated abelian group `Z^r ⊕ C_{d_1} ⊕ ... ⊕ C_{d_k}` with
/// `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FgAbelianGroup {
    free_rank: u32,
    torsion: Vec<u64>,
}

impl FgAbelianGroup {
    /// Builds a group from invariant factors, validating the divisibility chain.
    pub fn new(free_rank: u32, torsion: Vec<u64>) -> Result<Self> {
        if torsion.iter().any(|&d| d < 2) {
            return Err(Error::Invalid("invariant factors must be >= 2".into()));
        }
        if torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Invalid(format!("{torsion:?} is not a divisibility chain")));
        }
        Ok(Self { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        Self { free_rank: 0, torsion: Vec::new() }
    }

    /// The cyclic group `C_n`; `C_1` is trivial.
    pub fn cyclic(n: u64) -> Result<Self> {
        match n {
            0 => Err(Error::Invalid("C_0 is not a finite cyclic group".into())),
            1 => Ok(Self::trivial()),
            _ => Ok(Self { free_rank: 0, torsion: vec![n] }),
        }
    }

    pub fn free(rank: u32) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    pub fn free_rank(&self) -> u32 {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("C_{d}")));
        if parts.is_empty() {
            write!(f, "C_1")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// True iff `G` is trivial, `Z`, or `C_{p^k}`.
pub fn is_indecomposable_fg(g: &FgAbelianGroup) -> bool {
    match (g.free_rank, g.torsion.as_slice()) {
        (0, []) | (1, []) => true,
        (0, [d]) => is_prime_power(*d).is_some(),
        _ => false,
    }
}

/// The family an indecomposable `F_q^×` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    F2,
    F9,
    FermatPrime,
    MersennePlusOne,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::F2 => "F2",
            Family::F9 => "F9",
            Family::FermatPrime => "FermatPrime",
            Family::MersennePlusOne => "MersennePlusOne",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Indecomposable { family: Family },
    /// `q - 1 = a * b` with `gcd(a, b) = 1` and `a, b >= 2`.
    Decomposable { a: u64, b: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub q: u64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl Classification {
    pub fn is_indecomposable(&self) -> bool {
        matches!(self.verdict, Verdict::Indecomposable { .. })
    }

    pub fn family(&self) -> Option<Family> {
        match self.verdict {
            Verdict::Indecomposable { family } => Some(family),
            Verdict::Decomposable { .. } => None,
        }
    }
}

/// Matches `q` against the four indecomposable families.
fn family_of(q: u64) -> Option<Family> {
    if q == 2 {
        return Some(Family::F2);
    }
    if q == 9 {
        return Some(Family::F9);
    }
    if special_prime_kind(q).ok()?.fermat {
        return Some(Family::FermatPrime);
    }
    if q >= 3 && special_prime_kind(q - 1).ok()?.mersenne {
        return Some(Family::MersennePlusOne);
    }
    None
}

/// Decides whether `F_q^×` is indecomposable.
///
/// The verdict is taken from the structure of `q - 1`; the family label is
/// then matched independently and a disagreement is reported as an error.
pub fn classify_finite_field(q: u64) -> Result<Classification> {
    if !(2..=MAX_INPUT).contains(&q) {
        return Err(Error::OutOfRange(format!("classify_finite_field needs 2 <= q <= 2^63, got {q}")));
    }
    if is_prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    let order = factor_integer(q - 1)?;
    let verdict = match order.factors() {
        [] | [_] => {
            let family = family_of(q).ok_or_else(|| {
                Error::Invalid(format!("q = {q}: q-1 is a prime power but no family matches"))
            })?;
            Verdict::Indecomposable { family }
        }
        [(p, e), ..] => {
            let a = p.pow(*e);
            Verdict::Decomposable { a, b: (q - 1) / a }
        }
    };
    Ok(Classification { q, verdict })
}

/// One row of a classification scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub q: u64,
    pub family: Family,
    /// Verdict of the independent check "`q - 1` is 1 or a prime power".
    pub oracle_indecomposable: bool,
}

fn oracle_indecomposable(q: u64) -> bool {
    q == 2 || is_prime_power(q - 1).is_some()
}

fn scan_entry(q: u64) -> Result<Option<ScanEntry>> {
    let c = classify_finite_field(q)?;
    Ok(c.family().map(|family| ScanEntry {
        q,
        family,
        oracle_indecomposable: oracle_indecomposable(q),
    }))
}

/// All prime powers `q <= bound` whose `F_q^×` is indecomposable.
///
/// For `q >= 3`, one of `q` and `q - 1` is even, so if both are prime
/// powers one of them is a power of two. Only those candidates are examined.
pub fn classify_scan(bound: u64) -> Result<Vec<ScanEntry>> {
    if !(2..=MAX_SCAN_BOUND).contains(&bound) {
        return Err(Error::OutOfRange(format!("scan bound must lie in [2, 2^40], got {bound}")));
    }
    let mut candidates = vec![2u64];
    let mut pow = 2u64;
    while pow <= bound {
        if pow > 2 {
            candidates.push(pow);
        }
        if pow < bound {
            candidates.push(pow + 1);
        }
        pow *= 2;
    }
    candidates.sort_unstable();
    candidates.dedup();
    let mut out = Vec::new();
    for q in candidates {
        if q <= bound && is_prime_power(q).is_some() {
            if let Some(entry) = scan_entry(q)? {
                out.push(entry);
            }
        }
    }
    Ok(out)
}

/// Classifies every prime power `q <= bound`, partitioned across worker
/// threads, and returns the indecomposable ones in ascending order.
pub fn classify_scan_exhaustive(bound: u64) -> Result<Vec<ScanEntry>> {
    if !(2..=1 << 32).contains(&bound) {
        return Err(Error::OutOfRange(format!("exhaustive scan bound must lie in [2, 2^32], got {bound}")));
    }
    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<u64> = (0..=bound / CHUNK).collect();
    let parts: Result<Vec<Vec<ScanEntry>>> = chunks
        .par_iter()
        .map(|&c| {
            let lo = (c * CHUNK).max(2);
            let hi = ((c + 1) * CHUNK - 1).min(bound);
            let mut v = Vec::new();
            for q in lo..=hi {
                if is_prime_power(q).is_some() {
                    if let Some(e) = scan_entry(q)? {
                        v.push(e);
                    }
                }
            }
            Ok(v)
        })
        .collect();
    Ok(parts?.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_integer(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert!(factor_integer(1).unwrap().is_one());
        assert_eq!(factor_integer(65537).unwrap().factors(), &[(65537, 1)]);
        assert!(factor_integer(0).is_err());
        assert!(factor_integer(u64::MAX).is_err());
    }

    #[test]
    fn factor_large_semiprime() {
        // 2^31 - 1 and 2^61 - 1 are prime; their product overflows 2^63, so use
        // 4294967291 * 2147483647 instead.
        let n = 4294967291u64 * 2147483647;
        assert_eq!(factor_integer(n).unwrap().factors(), &[(2147483647, 1), (4294967291, 1)]);
        let m = (1u64 << 61) - 1;
        assert_eq!(factor_integer(m).unwrap().factors(), &[(m, 1)]);
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division_is_prime(n), "n = {n}");
        }
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime(2152302898747));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(is_prime_power(8), Some((2, 3)));
        assert_eq!(is_prime_power(6), None);
        assert_eq!(is_prime_power(1), None);
        assert_eq!(is_prime_power(531441), Some((3, 12)));
    }

    #[test]
    fn special_prime_examples() {
        assert_eq!(special_prime_kind(5).unwrap(), SpecialPrimeKind { fermat: true, mersenne: false });
        assert_eq!(special_prime_kind(7).unwrap(), SpecialPrimeKind { fermat: false, mersenne: true });
        assert!(special_prime_kind(2047).unwrap().is_empty());
        assert_eq!(special_prime_kind(3).unwrap(), SpecialPrimeKind { fermat: true, mersenne: true });
        assert!(special_prime_kind(2).unwrap().is_empty());
        assert!(special_prime_kind(1).is_err());
    }

    #[test]
    fn special_kinds_never_both_above_three() {
        for n in 4..100_000u64 {
            let k = special_prime_kind(n).unwrap();
            assert!(!(k.fermat && k.mersenne), "n = {n}");
        }
    }

    #[test]
    fn primary_decomposition_examples() {
        assert_eq!(primary_decomposition(6).unwrap(), vec![2, 3]);
        assert_eq!(primary_decomposition(8).unwrap(), vec![8]);
        assert_eq!(primary_decomposition(360).unwrap(), vec![8, 9, 5]);
        assert!(primary_decomposition(1).unwrap().is_empty());
    }

    #[test]
    fn fg_group_validation() {
        assert!(FgAbelianGroup::new(0, vec![2, 4, 8]).is_ok());
        assert!(FgAbelianGroup::new(0, vec![2, 3]).is_err());
        assert!(FgAbelianGroup::new(0, vec![1]).is_err());
        assert!(FgAbelianGroup::free(2).is_torsion_free());
    }

    #[test]
    fn indecomposable_examples() {
        assert!(is_indecomposable_fg(&FgAbelianGroup::cyclic(8).unwrap()));
        assert!(!is_indecomposable_fg(&FgAbelianGroup::cyclic(6).unwrap()));
        assert!(!is_indecomposable_fg(&FgAbelianGroup::free(2)));
        assert!(is_indecomposable_fg(&FgAbelianGroup::free(1)));
        assert!(is_indecomposable_fg(&FgAbelianGroup::trivial()));
        assert!(!is_indecomposable_fg(&FgAbelianGroup::new(1, vec![2]).unwrap()));
        assert!(!is_indecomposable_fg(&FgAbelianGroup::new(0, vec![2, 2]).unwrap()));
    }

    #[test]
    fn cyclic_indecomposability_exhaustive() {
        for n in 1..=10_000u64 {
            let g = FgAbelianGroup::cyclic(n).unwrap();
            let single = primary_decomposition(n).unwrap().len() <= 1;
            assert_eq!(is_indecomposable_fg(&g), single, "n = {n}");
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_finite_field(9).unwrap().family(), Some(Family::F9));
        assert_eq!(classify_finite_field(8).unwrap().family(), Some(Family::MersennePlusOne));
        assert_eq!(classify_finite_field(2).unwrap().family(), Some(Family::F2));
        assert_eq!(classify_finite_field(3).unwrap().family(), Some(Family::FermatPrime));
        assert_eq!(
            classify_finite_field(7).unwrap().verdict,
            Verdict::Decomposable { a: 2, b: 3 }
        );
        assert_eq!(classify_finite_field(6), Err(Error::NotPrimePower(6)));
        assert!(classify_finite_field(1).is_err());
    }

    #[test]
    fn decomposable_witness_is_coprime() {
        for q in 2..5000u64 {
            if is_prime_power(q).is_none() {
                continue;
            }
            if let Verdict::Decomposable { a, b } = classify_finite_field(q).unwrap().verdict {
                assert!(a >= 2 && b >= 2);
                assert_eq!(gcd(a, b), 1);
                assert_eq!(a * b, q - 1);
            }
        }
    }

    #[test]
    fn scan_small_bounds() {
        let qs: Vec<u64> = classify_scan(10).unwrap().iter().map(|e| e.q).collect();
        assert_eq!(qs, vec![2, 3, 4, 5, 8, 9]);
        let qs: Vec<u64> = classify_scan(2).unwrap().iter().map(|e| e.q).collect();
        assert_eq!(qs, vec![2]);
        assert!(classify_scan(1).is_err());
        assert!(classify_scan(MAX_SCAN_BOUND + 1).is_err());
    }

    #[test]
    fn scan_strategies_agree() {
        assert_eq!(classify_scan(100_000).unwrap(), classify_scan_exhaustive(100_000).unwrap());
    }

    #[test]
    fn scan_to_two_pow_forty_is_fast() {
        let entries = classify_scan(MAX_SCAN_BOUND).unwrap();
        assert!(entries.iter().all(|e| e.oracle_indecomposable));
        // 2^31 is F_{p+1} for the Mersenne prime 2^31 - 1
        assert!(entries.iter().any(|e| e.q == 1 << 31 && e.family == Family::MersennePlusOne));
    }
}
