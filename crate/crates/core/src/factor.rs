//! Factorization of univariate polynomials over finite fields and over Q.
//!
//! Finite fields: square-free split, distinct-degree factorization, then
//! Cantor-Zassenhaus equal-degree splitting with a seeded generator.
//!
//! Rationals: primitive part, square-free split, factorization modulo a good
//! prime, quadratic Hensel lifting past the Landau-Mignotte bound and
//! Zassenhaus recombination. Degree patterns modulo several primes are
//! intersected first, which settles most irreducibility questions outright.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exact::{self, Integer, Rational};
use crate::field::{ExtField, Field, FiniteField, Fp};
use crate::poly::{self, Poly};

/// `unit * prod factor^mult`, factors monic, irreducible and pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorList<F: Field> {
    pub unit: F,
    pub factors: Vec<(Poly<F>, u32)>,
}

impl<F: Field> FactorList<F> {
    pub fn expand(&self) -> Poly<F> {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }

    /// Number of distinct irreducible factors.
    pub fn distinct_count(&self) -> usize {
        self.factors.len()
    }

    pub fn count_with_multiplicity(&self) -> usize {
        self.factors.iter().map(|(_, m)| *m as usize).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Degrees of the distinct factors, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|(f, _)| f.deg()).collect()
    }

    fn sort(&mut self) {
        self.factors
            .sort_by_cached_key(|(f, m)| (f.deg(), f.to_string(), *m));
    }
}

impl<F: Field> std::fmt::Display for FactorList<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if !self.unit.is_one() || self.factors.is_empty() {
            parts.push(self.unit.to_string());
        }
        for (p, m) in &self.factors {
            let s = if p.coeffs().len() > 1 && p.deg() == 1 && p.coeffs()[0].is_zero() {
                p.to_string()
            } else {
                format!("({p})")
            };
            if *m > 1 {
                parts.push(format!("{s}^{m}"));
            } else {
                parts.push(s);
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Fields whose polynomials this crate can factor.
pub trait Factorable: Field {
    fn factor_poly(f: &Poly<Self>, cfg: &Config) -> Result<FactorList<Self>>;
    /// Distinct roots in the field.
    fn roots(f: &Poly<Self>, cfg: &Config) -> Result<Vec<Self>>;
}

impl Factorable for Rational {
    fn factor_poly(f: &Poly<Self>, cfg: &Config) -> Result<FactorList<Self>> {
        factor_q(f, cfg)
    }
    fn roots(f: &Poly<Self>, cfg: &Config) -> Result<Vec<Self>> {
        let mut r = rational_roots_with(f, cfg)?;
        r.dedup();
        Ok(r)
    }
}

impl Factorable for Fp {
    fn factor_poly(f: &Poly<Self>, cfg: &Config) -> Result<FactorList<Self>> {
        factor_finite(f, cfg.seed)
    }
    fn roots(f: &Poly<Self>, cfg: &Config) -> Result<Vec<Self>> {
        Ok(roots_finite(f, cfg.seed))
    }
}

impl Factorable for ExtField {
    fn factor_poly(f: &Poly<Self>, cfg: &Config) -> Result<FactorList<Self>> {
        factor_finite(f, cfg.seed)
    }
    fn roots(f: &Poly<Self>, cfg: &Config) -> Result<Vec<Self>> {
        Ok(roots_finite(f, cfg.seed))
    }
}

// ================================================================ finite fields

/// Factorization over F_p; alias of [`factor_finite`] for the prime field.
pub fn factor_mod_p(f: &Poly<Fp>, seed: u64) -> Result<FactorList<Fp>> {
    factor_finite(f, seed)
}

pub fn factor_finite<F: FiniteField>(f: &Poly<F>, seed: u64) -> Result<FactorList<F>> {
    let sq = f.squarefree()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (part, m) in &sq.parts {
        for (g, d) in ddf(part)? {
            for h in edf(&g, d, &mut rng)? {
                factors.push((h, *m));
            }
        }
    }
    let mut out = FactorList {
        unit: sq.unit,
        factors,
    };
    out.sort();
    Ok(out)
}

/// Distinct-degree factorization of a monic square-free polynomial: pairs
/// (product of all irreducible factors of degree d, d).
pub fn ddf<F: FiniteField>(f: &Poly<F>) -> Result<Vec<(Poly<F>, usize)>> {
    let mut out = Vec::new();
    let Some(one) = f.lc().map(|c| c.one_like()) else {
        return Ok(out);
    };
    let q = one.order();
    let x = Poly::x(&one);
    let mut rest = f.monic();
    let mut h = x.rem(&rest)?;
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&q, &rest)?;
        let g = rest.gcd(&(&h - &x));
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    Ok(out)
}

/// Degrees of the irreducible factors of a square-free polynomial, ascending.
pub fn degree_pattern<F: FiniteField>(f: &Poly<F>) -> Result<Vec<usize>> {
    let mut pat = Vec::new();
    for (g, d) in ddf(f)? {
        pat.extend(std::iter::repeat(d).take(g.deg() / d));
    }
    Ok(pat)
}

/// Splits a monic product of distinct irreducibles of degree `d`.
pub fn edf<F: FiniteField>(g: &Poly<F>, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly<F>>> {
    let n = g.deg();
    if n <= d {
        return Ok(vec![g.monic()]);
    }
    let one = g.lc().expect("nonzero").one_like();
    let q = one.order();
    let qd = num_traits::pow(q.clone(), d);
    loop {
        let a = Poly::new((0..n).map(|_| one.random_like(rng)).collect());
        if a.is_constant() {
            continue;
        }
        let b = if one.char_p() == 2 {
            // absolute trace from F_{q^d} to F_2
            let k = qd.bits() as usize - 1;
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..k {
                t = t.mulmod(&t, g)?;
                s = &s + &t;
            }
            s
        } else {
            let e: BigUint = (&qd - 1u32) >> 1;
            &a.powmod(&e, g)? - &Poly::constant(one.clone())
        };
        let h = g.gcd(&b);
        if h.deg() > 0 && h.deg() < n {
            let mut out = edf(&h, d, rng)?;
            out.extend(edf(&g.exact_div(&h)?, d, rng)?);
            return Ok(out);
        }
    }
}

/// Distinct roots in the field, sorted by their rendering.
pub fn roots_finite<F: FiniteField>(f: &Poly<F>, seed: u64) -> Vec<F> {
    let Some(one) = f.lc().map(|c| c.one_like()) else {
        return Vec::new();
    };
    let m = f.monic();
    if m.deg() == 0 {
        return Vec::new();
    }
    let x = Poly::x(&one);
    let xq = x.powmod(&one.order(), &m).expect("nonzero modulus");
    let g = m.gcd(&(&xq - &x));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots: Vec<F> = edf(&g, 1, &mut rng)
        .expect("linear split")
        .into_iter()
        .filter(|h| h.deg() == 1)
        .map(|h| -h.coeffs()[0].clone())
        .collect();
    roots.sort_by_cached_key(|r| r.to_string());
    roots
}

/// Rabin's irreducibility test.
pub fn is_irreducible_finite<F: FiniteField>(f: &Poly<F>) -> bool {
    let n = f.deg();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let m = f.monic();
    let one = m.coeffs()[0].one_like();
    let q = one.order();
    let x = Poly::x(&one);
    let nprimes: Vec<usize> = exact::factor_int(&Integer::from(n))
        .map(|fa| fa.primes().iter().map(|p| p.to_usize().unwrap()).collect())
        .unwrap_or_default();
    // x^(q^j) for j = 1..n, computed once
    let mut pows = Vec::with_capacity(n);
    let mut h = x.clone();
    for _ in 0..n {
        h = h.powmod(&q, &m).expect("nonzero modulus");
        pows.push(h.clone());
    }
    if pows[n - 1] != x.rem(&m).unwrap() {
        return false;
    }
    nprimes
        .iter()
        .all(|r| m.gcd(&(&pows[n / r - 1] - &x)).is_one())
}

/// Monic irreducible polynomial of degree `k` over F_p, found by seeded random
/// search with an exhaustive lexicographic fallback.
pub fn find_irreducible(p: u64, k: usize, seed: u64) -> Poly<Fp> {
    assert!(k >= 1, "degree must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1e2e_d00d);
    let zero = Fp::new(0, p);
    for _ in 0..64 * k {
        let mut c: Vec<Fp> = (0..k).map(|_| zero.random_like(&mut rng)).collect();
        c.push(Fp::new(1, p));
        let f = Poly::new(c);
        if is_irreducible_finite(&f) {
            return f;
        }
    }
    let mut digits = vec![0u64; k];
    loop {
        let mut c: Vec<Fp> = digits.iter().map(|&v| Fp::from_u64(v, p)).collect();
        c.push(Fp::new(1, p));
        let f = Poly::new(c);
        if is_irreducible_finite(&f) {
            return f;
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
}

// ================================================================ Z[x] mod p^a

type ZPoly = Vec<Integer>;

fn zp_trim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zp_reduce(v: &[Integer], m: &Integer) -> ZPoly {
    zp_trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zp_symmetric(v: &[Integer], m: &Integer) -> ZPoly {
    let half = m >> 1;
    zp_trim(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn zp_mul(a: &[Integer], b: &[Integer], m: &Integer) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Integer::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_reduce(&out, m)
}

fn zp_add(a: &[Integer], b: &[Integer], m: &Integer) -> ZPoly {
    let n = a.len().max(b.len());
    let v: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    zp_reduce(&v, m)
}

fn zp_sub(a: &[Integer], b: &[Integer], m: &Integer) -> ZPoly {
    let n = a.len().max(b.len());
    let v: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    zp_reduce(&v, m)
}

/// Division by a monic polynomial modulo m.
fn zp_divrem_monic(a: &[Integer], b: &[Integer], m: &Integer) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    let mut r = zp_reduce(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Integer::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].mod_floor(m);
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                r[i + j] -= &c * bc;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (zp_trim(q), zp_reduce(&r, m))
}

fn to_zp(f: &Poly<Fp>) -> ZPoly {
    f.coeffs()
        .iter()
        .map(|c| Integer::from(c.value()))
        .collect()
}

fn to_fp(v: &[Integer], p: u64) -> Poly<Fp> {
    Poly::new(v.iter().map(|c| Fp::from_integer(c, p)).collect())
}

/// Lifts f = g*h (mod p), h monic, gcd(g, h) = 1 mod p, to a factorization
/// modulo `target` (a power of p).
fn hensel_lift_pair(
    f: &[Integer],
    g: &Poly<Fp>,
    h: &Poly<Fp>,
    p: u64,
    target: &Integer,
) -> (ZPoly, ZPoly) {
    let (one, s, t) = g.xgcd(h);
    debug_assert!(one.is_one());
    let (mut g, mut h, mut s, mut t) = (to_zp(g), to_zp(h), to_zp(&s), to_zp(&t));
    let mut m = Integer::from(p);
    while &m < target {
        let m2 = (&m * &m).min(target.clone());
        let e = zp_sub(f, &zp_mul(&g, &h, &m2), &m2);
        let (q, r) = zp_divrem_monic(&zp_mul(&s, &e, &m2), &h, &m2);
        let g2 = zp_add(
            &g,
            &zp_add(&zp_mul(&t, &e, &m2), &zp_mul(&q, &g, &m2), &m2),
            &m2,
        );
        let h2 = zp_add(&h, &r, &m2);
        let b = zp_sub(
            &zp_add(&zp_mul(&s, &g2, &m2), &zp_mul(&t, &h2, &m2), &m2),
            &[Integer::one()],
            &m2,
        );
        let (c, d) = zp_divrem_monic(&zp_mul(&s, &b, &m2), &h2, &m2);
        s = zp_sub(&s, &d, &m2);
        t = zp_sub(
            &zp_sub(&t, &zp_mul(&t, &b, &m2), &m2),
            &zp_mul(&c, &g2, &m2),
            &m2,
        );
        g = g2;
        h = h2;
        m = m2;
    }
    (g, h)
}

/// Lifts a factorization f = lc * prod(factors) mod p, factors monic and
/// pairwise coprime, to monic factors mod `target`.
fn hensel_lift(f: &[Integer], factors: &[Poly<Fp>], p: u64, target: &Integer) -> Vec<ZPoly> {
    let mut out = Vec::with_capacity(factors.len());
    let mut rest = zp_reduce(f, target);
    let lc = Fp::from_integer(f.last().unwrap(), p);
    for (i, h) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            // rest = lc * h mod target; normalize to monic
            let lcz = rest.last().unwrap().clone();
            let inv = lcz
                .modinv(target)
                .expect("leading coefficient is a unit mod p");
            out.push(zp_reduce(
                &rest.iter().map(|c| c * &inv).collect::<Vec<_>>(),
                target,
            ));
            break;
        }
        let g = factors[i + 1..]
            .iter()
            .fold(Poly::constant(lc), |acc, x| &acc * x);
        let (g_l, h_l) = hensel_lift_pair(&rest, &g, h, p, target);
        out.push(h_l);
        rest = g_l;
    }
    out
}

// ================================================================ over Q

fn norm2_ceil(v: &[Integer]) -> Integer {
    let s: Integer = v.iter().map(|c| c * c).sum();
    s.sqrt() + 1
}

/// Bound on the coefficients of `lc * g` for any factor g of `f`.
fn landau_mignotte(f: &[Integer]) -> Integer {
    let n = f.len() - 1;
    let lc = f.last().unwrap().abs();
    lc * (Integer::one() << n) * norm2_ceil(f)
}

/// Whether a good prime for `f` is available: p does not divide the leading
/// coefficient and f stays square-free mod p.
fn reduce_if_good(f: &[Integer], p: u64) -> Option<Poly<Fp>> {
    if (f.last().unwrap() % p).is_zero() {
        return None;
    }
    let fb = to_fp(f, p);
    fb.gcd(&fb.derivative()).is_one().then_some(fb)
}

fn subset_sums(pattern: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0]);
    for &d in pattern {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums
}

/// Degrees of possible factors of a square-free primitive integer polynomial,
/// from degree patterns modulo several good primes, plus the good prime with
/// the fewest modular factors.
fn degree_analysis(f: &[Integer], primes_wanted: usize) -> (BTreeSet<usize>, u64) {
    let n = f.len() - 1;
    let mut allowed: BTreeSet<usize> = (0..=n).collect();
    let mut best: Option<(usize, u64)> = None;
    let mut found = 0;
    let mut p = 3u64;
    let mut tried = 0;
    while found < primes_wanted && tried < 2000 {
        p = exact::next_prime_u64(p);
        tried += 1;
        let Some(fb) = reduce_if_good(f, p) else {
            continue;
        };
        found += 1;
        let pat = degree_pattern(&fb.monic()).expect("nonzero");
        allowed = allowed.intersection(&subset_sums(&pat)).cloned().collect();
        if best.map_or(true, |(r, _)| pat.len() < r) {
            best = Some((pat.len(), p));
        }
        if allowed.len() <= 2 {
            break;
        }
    }
    (allowed, best.map(|b| b.1).unwrap_or(0))
}

/// Irreducible factors (primitive, positive leading coefficient) of a
/// square-free primitive integer polynomial of positive degree.
fn zassenhaus(f: &[Integer], cfg: &Config) -> Result<Vec<ZPoly>> {
    let n = f.len() - 1;
    if n <= 1 {
        return Ok(vec![f.to_vec()]);
    }
    if f[0].is_zero() {
        let mut out = vec![vec![Integer::zero(), Integer::one()]];
        out.extend(zassenhaus(&f[1..], cfg)?);
        return Ok(out);
    }
    let (allowed, p) = degree_analysis(f, 5);
    if allowed.len() <= 2 {
        return Ok(vec![f.to_vec()]);
    }
    if p == 0 {
        return Err(Error::ResourceLimit("no good prime found".into()));
    }
    let fb = to_fp(f, p);
    let modular = factor_finite(&fb, cfg.seed)?;
    let mod_factors: Vec<Poly<Fp>> = modular.factors.into_iter().map(|(g, _)| g).collect();
    if mod_factors.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }
    let bound = landau_mignotte(f) * 2 + 1;
    let pz = Integer::from(p);
    let mut target = pz.clone();
    while target < bound {
        target *= &pz;
    }
    let lifted = hensel_lift(f, &mod_factors, p, &target);
    recombine(f, lifted, &target, &allowed, cfg)
}

fn recombine(
    f: &[Integer],
    mut lifted: Vec<ZPoly>,
    modulus: &Integer,
    allowed: &BTreeSet<usize>,
    cfg: &Config,
) -> Result<Vec<ZPoly>> {
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut budget = cfg.subset_budget;
    let mut k = 1;
    while 2 * k <= lifted.len() {
        let mut found = None;
        for subset in (0..lifted.len()).combinations(k) {
            let deg: usize = subset.iter().map(|&i| lifted[i].len() - 1).sum();
            if !allowed.contains(&deg) {
                continue;
            }
            if budget == 0 {
                return Err(Error::ResourceLimit(format!(
                    "Zassenhaus recombination exceeded {} subsets",
                    cfg.subset_budget
                )));
            }
            budget -= 1;
            let lc = rest.last().unwrap().clone();
            // constant-term prefilter
            if !rest[0].is_zero() {
                let c0 = subset.iter().fold(lc.clone(), |acc, &i| {
                    (acc * &lifted[i][0]).mod_floor(modulus)
                });
                let c0 = zp_symmetric(&[c0], modulus);
                let c0 = c0.first().cloned().unwrap_or_default();
                if c0.is_zero() || !(&lc * &rest[0]).is_multiple_of(&c0) {
                    continue;
                }
            }
            let cand = subset.iter().fold(vec![lc.clone()], |acc, &i| {
                zp_mul(&acc, &lifted[i], modulus)
            });
            let cand = zp_symmetric(&cand, modulus);
            let cand = primitive(&cand);
            if let Some(q) = int_exact_div(&rest, &cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => k += 1,
        }
    }
    out.push(primitive(&rest));
    Ok(out)
}

fn primitive(v: &[Integer]) -> ZPoly {
    let mut c = poly::int_content(v);
    if v.last().is_some_and(|x| x.is_negative()) {
        c = -c;
    }
    v.iter().map(|x| x / &c).collect()
}

/// Exact quotient in Z[x], or None.
fn int_exact_div(a: &[Integer], b: &[Integer]) -> Option<ZPoly> {
    if b.len() > a.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut q = vec![Integer::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let (c, rem) = r[i + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                r[i + j] -= &c * bc;
            }
        }
        q[i] = c;
    }
    r[..db].iter().all(|c| c.is_zero()).then_some(q)
}

/// Factorization over Q with the default configuration.
pub fn factor_q(f: &Poly<Rational>, cfg: &Config) -> Result<FactorList<Rational>> {
    let sq = f.squarefree()?;
    let mut factors = Vec::new();
    for (part, m) in &sq.parts {
        let (_, prim) = poly::primitive_part(part);
        for g in zassenhaus(&prim, cfg)? {
            factors.push((poly::from_integers(&g).monic(), *m));
        }
    }
    let mut out = FactorList {
        unit: sq.unit,
        factors,
    };
    out.sort();
    Ok(out)
}

/// True iff `f` is irreducible over Q; cheaper than a full factorization when
/// degree patterns already decide.
pub fn is_irreducible_q(f: &Poly<Rational>, cfg: &Config) -> Result<bool> {
    if f.deg() == 0 {
        return Ok(false);
    }
    let sq = f.squarefree()?;
    if sq.parts.len() != 1 || sq.parts[0].1 != 1 {
        return Ok(false);
    }
    let (_, prim) = poly::primitive_part(f);
    if prim.len() == 2 {
        return Ok(true);
    }
    if prim[0].is_zero() {
        return Ok(false);
    }
    let (allowed, _) = degree_analysis(&prim, 5);
    if allowed.len() <= 2 {
        return Ok(true);
    }
    Ok(zassenhaus(&prim, cfg)?.len() == 1)
}

/// All rational roots, with multiplicity, ascending.
pub fn rational_roots(f: &Poly<Rational>) -> Vec<Rational> {
    rational_roots_with(f, &Config::default()).expect("root finding on nonzero polynomial")
}

pub fn rational_roots_with(f: &Poly<Rational>, cfg: &Config) -> Result<Vec<Rational>> {
    if f.is_zero() {
        return Err(Error::InvalidInput("roots of the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (part, m) in &f.squarefree()?.parts {
        let (_, prim) = poly::primitive_part(part);
        for r in squarefree_int_roots(&prim, cfg)? {
            out.extend(std::iter::repeat(r).take(*m as usize));
        }
    }
    out.sort();
    Ok(out)
}

fn eval_int(f: &[Integer], r: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in f.iter().rev() {
        acc = acc * r + Rational::from_integer(c.clone());
    }
    acc
}

const DIVISOR_LIMIT: usize = 4096;

fn squarefree_int_roots(f: &[Integer], cfg: &Config) -> Result<Vec<Rational>> {
    let mut roots = Vec::new();
    let mut f = f.to_vec();
    if f.len() <= 1 {
        return Ok(roots);
    }
    if f[0].is_zero() {
        roots.push(Rational::zero());
        f.remove(0);
    }
    if f.len() <= 1 {
        return Ok(roots);
    }
    if f.len() == 2 {
        roots.push(Rational::new(-f[0].clone(), f[1].clone()));
        return Ok(roots);
    }
    let cands = match divisor_candidates(&f, cfg) {
        Some(c) => c,
        None => padic_candidates(&f),
    };
    roots.extend(
        cands
            .into_iter()
            .filter(|r| Zero::is_zero(&eval_int(&f, r))),
    );
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn divisors_of(n: &Integer, budget: u64) -> Option<Vec<Integer>> {
    if n.bits() > 80 {
        return None;
    }
    let fa = exact::factor_int_with_budget(n, budget.min(1 << 16)).ok()?;
    let count: usize = fa.factors.iter().map(|(_, e)| *e as usize + 1).product();
    if count > DIVISOR_LIMIT {
        return None;
    }
    let mut divs = vec![Integer::one()];
    for (p, e) in &fa.factors {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut pe = Integer::one();
            for _ in 0..=*e {
                next.push(d * &pe);
                pe *= p;
            }
        }
        divs = next;
    }
    Some(divs)
}

/// Candidates a/b with a | f(0), b | lc(f), pruned by roots modulo small primes.
fn divisor_candidates(f: &[Integer], cfg: &Config) -> Option<Vec<Rational>> {
    let nums = divisors_of(&f[0].abs(), cfg.rho_budget)?;
    let dens = divisors_of(&f.last().unwrap().abs(), cfg.rho_budget)?;
    if nums.len() * dens.len() > DIVISOR_LIMIT * 4 {
        return None;
    }
    let filters: Vec<(u64, Vec<u64>)> = [7u64, 11, 13, 17]
        .iter()
        .filter_map(|&p| {
            let fb = to_fp(f, p);
            (fb.deg() == f.len() - 1).then(|| {
                let roots = roots_finite(&fb, 0).iter().map(|r| r.value()).collect();
                (p, roots)
            })
        })
        .collect();
    let mut out = Vec::new();
    for a in &nums {
        for b in &dens {
            for s in [1i32, -1] {
                let r = Rational::new(a * s, b.clone());
                let ok = filters.iter().all(|(p, roots)| {
                    Fp::from_rational(&r, *p).map_or(true, |v| roots.contains(&v.value()))
                });
                if ok {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// Roots modulo a good prime lifted p-adically; each rational root r = a/b
/// has b | lc, so lc*r is an integer bounded by Cauchy's bound.
fn padic_candidates(f: &[Integer]) -> Vec<Rational> {
    let mut p = 3u64;
    let fb = loop {
        p = exact::next_prime_u64(p);
        if let Some(fb) = reduce_if_good(f, p) {
            break fb;
        }
    };
    let lc = f.last().unwrap().clone();
    let maxc = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = (lc.abs() + maxc) * 2 + 1;
    let pz = Integer::from(p);
    let df: Vec<Integer> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Integer::from(i))
        .collect();
    let mut out = Vec::new();
    for r in roots_finite(&fb, 0) {
        let mut m = pz.clone();
        let mut x = Integer::from(r.value());
        while m < bound {
            m = &m * &m;
            let fx = eval_zp(f, &x, &m);
            let dfx = eval_zp(&df, &x, &m);
            let inv = dfx.modinv(&m).expect("simple root mod p");
            x = (x - fx * inv).mod_floor(&m);
        }
        let u = zp_symmetric(&[&lc * &x], &m);
        let u = u.first().cloned().unwrap_or_default();
        out.push(Rational::new(u, lc.clone()));
    }
    out
}

fn eval_zp(f: &[Integer], x: &Integer, m: &Integer) -> Integer {
    let mut acc = Integer::zero();
    for c in f.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}
