//! Arbitrary-precision integers and rationals, primality and integer factorization.
//!
//! Integers and rationals are `num-bigint` / `num-rational` values. Primality is
//! Miller-Rabin: deterministic for `n < 2^64` (first twelve prime bases), and for
//! larger `n` those twelve bases plus 40 pseudo-random bases drawn from a ChaCha
//! stream seeded with [`MILLER_RABIN_SEED`]. Factoring is trial division followed
//! by Pollard rho with Brent's cycle detection.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

/// Seed of the extra Miller-Rabin bases used above 2^64.
pub const MILLER_RABIN_SEED: u64 = 0x5eed_0f_4d_11e5;
/// Random Miller-Rabin rounds used above 2^64.
pub const MILLER_RABIN_ROUNDS: usize = 40;
/// Default Pollard rho iteration budget per cofactor.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 24;

const SMALL_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const TRIAL_LIMIT: u32 = 10_000;

pub fn gcd(a: &Integer, b: &Integer) -> Integer {
    a.gcd(b)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

pub fn small_primes(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn trial_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| small_primes(TRIAL_LIMIT))
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn mr_witness_u64(n: u64, d: u64, s: u32, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    SMALL_BASES.iter().all(|&a| mr_witness_u64(n, d, s, a))
}

fn mr_witness_big(n: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

fn is_prime_biguint(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in trial_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    if !SMALL_BASES
        .iter()
        .all(|&a| mr_witness_big(n, &d, s, &BigUint::from(a)))
    {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(MILLER_RABIN_SEED);
    let two = BigUint::from(2u32);
    (0..MILLER_RABIN_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &nm1);
        mr_witness_big(n, &d, s, &a)
    })
}

/// Primality of a non-negative integer. Negative inputs are reported composite.
pub fn is_prime(n: &Integer) -> bool {
    match n.to_biguint() {
        Some(u) => is_prime_biguint(&u),
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntFactorization {
    pub sign: i8,
    /// Strictly increasing primes with positive exponents.
    pub factors: Vec<(Integer, u32)>,
}

impl IntFactorization {
    pub fn product(&self) -> Integer {
        let mut acc = Integer::from(self.sign);
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }

    pub fn primes(&self) -> Vec<Integer> {
        self.factors.iter().map(|(p, _)| p.clone()).collect()
    }
}

fn rho_u64(n: u64, budget: &mut u64) -> Option<u64> {
    let mut c = 1u64;
    while *budget > 0 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        let mut g = 1u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += M;
                *budget = budget.saturating_sub(M.min(r));
                if *budget == 0 && g == 1 {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
        c += 1;
    }
    None
}

fn rho_big(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut c = BigUint::one();
    while *budget > 0 {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (BigUint::from(2u32), 1u64, BigUint::one());
        let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
        let mut g = BigUint::one();
        const M: u64 = 128;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += M;
                *budget = budget.saturating_sub(M.min(r));
                if *budget == 0 && g == one {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
        c += 1u32;
    }
    None
}

fn split_cofactor(n: BigUint, budget: u64, out: &mut Vec<BigUint>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_prime_biguint(&n) {
        out.push(n);
        return Ok(());
    }
    let s = n.sqrt();
    if &s * &s == n {
        split_cofactor(s.clone(), budget, out)?;
        return split_cofactor(s, budget, out);
    }
    let mut left = budget;
    let d = match n.to_u64() {
        Some(v) => rho_u64(v, &mut left).map(BigUint::from),
        None => rho_big(&n, &mut left),
    };
    match d {
        Some(d) => {
            let e = &n / &d;
            split_cofactor(d, budget, out)?;
            split_cofactor(e, budget, out)
        }
        None => Err(Error::ResourceLimit(format!(
            "Pollard rho budget of {budget} iterations exhausted on cofactor {n}"
        ))),
    }
}

/// Complete factorization with the default rho budget.
pub fn factor_int(n: &Integer) -> Result<IntFactorization> {
    factor_int_with_budget(n, DEFAULT_RHO_BUDGET)
}

pub fn factor_int_with_budget(n: &Integer, budget: u64) -> Result<IntFactorization> {
    let (primes, rest) = partial_factor(n, budget)?;
    if let Some(rest) = rest {
        return Err(Error::ResourceLimit(format!(
            "Pollard rho budget of {budget} iterations exhausted on cofactor {rest}"
        )));
    }
    Ok(primes)
}

/// Factors as far as the budget allows. Returns the factorization found and the
/// unfactored composite cofactor, if any (its primes are not in the list).
pub fn partial_factor(n: &Integer, budget: u64) -> Result<(IntFactorization, Option<Integer>)> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut found: Vec<BigUint> = Vec::new();
    for &p in trial_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        while (&m % p).is_zero() {
            m /= p;
            found.push(pb.clone());
        }
    }
    let mut rest = None;
    if !m.is_one() {
        let mut big = Vec::new();
        match split_cofactor(m.clone(), budget, &mut big) {
            Ok(()) => found.extend(big),
            Err(Error::ResourceLimit(_)) => {
                // keep whatever prime factors are cheap to certify
                let mut cof = m;
                for p in big {
                    if (&cof % &p).is_zero() {
                        while (&cof % &p).is_zero() {
                            cof /= &p;
                        }
                        found.push(p);
                    }
                }
                if !cof.is_one() {
                    if is_prime_biguint(&cof) {
                        found.push(cof);
                    } else {
                        rest = Some(Integer::from(cof));
                    }
                }
            }
            Err(e) => return Err(e),
        }
    }
    found.sort();
    let mut factors: Vec<(Integer, u32)> = Vec::new();
    for p in found {
        let p = Integer::from(p);
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok((IntFactorization { sign, factors }, rest))
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn sqrt_exact(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn nth_root_exact(n: &Integer, k: u32) -> Option<Integer> {
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return nth_root_exact(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = sqrt_exact(q.numer())?;
    let d = sqrt_exact(q.denom())?;
    Some(Rational::new(n, d))
}

pub fn rational_nth_root(q: &Rational, k: u32) -> Option<Rational> {
    let n = nth_root_exact(q.numer(), k)?;
    let d = nth_root_exact(q.denom(), k)?;
    Some(Rational::new(n, d))
}

/// Natural logarithm of a positive integer, usable far beyond f64 range.
pub fn ln_integer(n: &Integer) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).abs().ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(1.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &Integer, p: &Integer) -> u32 {
    let mut v = 0;
    let mut m = n.clone();
    while !m.is_zero() && (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

pub fn next_prime_u64(mut n: u64) -> u64 {
    loop {
        n += 1;
        if is_prime_u64(n) {
            return n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&int(12), &int(18)), int(6));
        assert_eq!(gcd(&int(0), &int(5)), int(5));
        assert_eq!(gcd(&int(129), &int(100)), int(1));
        assert_eq!(gcd(&int(0), &int(0)), int(0));
        assert_eq!(gcd(&int(-12), &int(18)), int(6));
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&int(163)));
        assert!(!is_prime(&int(1)));
        assert!(!is_prime(&int(129)));
        assert!(!is_prime(&int(0)));
        // strong pseudoprime to bases 2..37 is far above this; check a Carmichael number
        assert!(!is_prime(&int(561)));
        assert!(is_prime(&Integer::from(18446744073709551557u64))); // largest prime below 2^64
        let m61: Integer = (Integer::one() << 61) - 1;
        assert!(is_prime(&m61));
        let m89: Integer = (Integer::one() << 89) - 1;
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m61 * &m89)));
    }

    #[test]
    fn primality_matches_trial_division_below_a_million() {
        let sieve = small_primes(1_000_000);
        let mut is = vec![false; 1_000_001];
        for p in sieve {
            is[p as usize] = true;
        }
        for n in 0..=1_000_000u64 {
            assert_eq!(is_prime_u64(n), is[n as usize], "n = {n}");
        }
    }

    #[test]
    fn factor_examples() {
        let f = factor_int(&int(100)).unwrap();
        assert_eq!(f.factors, vec![(int(2), 2), (int(5), 2)]);
        let f = factor_int(&int(129)).unwrap();
        assert_eq!(f.factors, vec![(int(3), 1), (int(43), 1)]);
        let f = factor_int(&int(171)).unwrap();
        assert_eq!(f.factors, vec![(int(3), 2), (int(19), 1)]);
        let f = factor_int(&int(-1)).unwrap();
        assert_eq!((f.sign, f.factors.len()), (-1, 0));
        assert!(factor_int(&int(0)).is_err());
    }

    #[test]
    fn factor_big_semiprime_with_rho() {
        let p = Integer::from(1_000_000_007u64);
        let q = Integer::from(998_244_353u64);
        let r = (Integer::one() << 61) - 1;
        let n = &p * &q * &r * &p;
        let f = factor_int(&n).unwrap();
        assert_eq!(f.product(), n);
        assert_eq!(f.factors.len(), 3);
        assert!(f.factors.iter().all(|(p, _)| is_prime(p)));
    }

    #[test]
    fn exhausted_budget_is_an_error() {
        // product of two 40-bit primes needs ~2^20 rho steps
        let p = Integer::from(1_099_511_627_791u64);
        let q = Integer::from(1_099_511_627_803u64);
        let n = &p * &q;
        assert!(is_prime(&p) && is_prime(&q));
        let err = factor_int_with_budget(&n, 64).unwrap_err();
        assert!(err.is_resource_limit());
        let (partial, rest) = partial_factor(&n, 64).unwrap();
        assert!(partial.factors.is_empty());
        assert_eq!(rest, Some(n));
    }

    #[test]
    fn factor_reconstructs_thousand_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        use rand::Rng;
        for _ in 0..1000 {
            let n: u64 = rng.gen_range(1..1_000_000_000_000);
            let f = factor_int(&Integer::from(n)).unwrap();
            assert_eq!(f.product(), Integer::from(n));
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.factors.iter().all(|(p, e)| is_prime(p) && *e > 0));
        }
    }

    #[test]
    fn roots_and_logs() {
        assert_eq!(sqrt_exact(&int(100)), Some(int(10)));
        assert_eq!(sqrt_exact(&int(101)), None);
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_nth_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert!((ln_integer(&int(129)) - 129f64.ln()).abs() < 1e-12);
        let big = num_traits::pow(int(10), 400);
        assert!((ln_integer(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert_eq!(valuation(&int(96), &int(2)), 5);
    }

    proptest! {
        #[test]
        fn gcd_divides_and_is_greatest(a in -10_000i64..10_000, b in -10_000i64..10_000, c in 1i64..200) {
            let (a, b, c) = (int(a) * int(c), int(b) * int(c), int(c));
            let g = gcd(&a, &b);
            prop_assert!(!g.is_negative());
            if !g.is_zero() {
                prop_assert!((&a % &g).is_zero() && (&b % &g).is_zero());
                prop_assert!((&g % &c).is_zero());
            }
        }
    }
}
