//! Coefficient fields.
//!
//! Elements carry whatever context they need (a prime modulus, an extension
//! modulus, a square class), so `zero_like`/`one_like` build constants from an
//! existing element rather than from a separate field object.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{self, Integer, Rational};
use crate::poly::Poly;

pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
    fn inv(&self) -> Option<Self>;
    fn from_i64_like(&self, v: i64) -> Self;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn sqrt(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * &i)
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    fn pow_big(&self, e: &BigUint) -> Self {
        let mut acc = self.one_like();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc *= self;
            }
        }
        acc
    }

    /// Product of two dense coefficient vectors (low degree first).
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![a[0].zero_like(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                out[i + j] += &(ai.clone() * bj);
            }
        }
        out
    }

    /// Monic gcd; the default is the Euclidean algorithm.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        crate::poly::euclid_gcd(a, b)
    }
}

// ---------------------------------------------------------------- rationals

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Rational::from_integer(Integer::from(v))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self) -> Option<Self> {
        exact::rational_sqrt(self)
    }

    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let (ia, da) = integerize(a);
        let (ib, db) = integerize(b);
        let mut out = vec![Integer::zero(); a.len() + b.len() - 1];
        for (i, x) in ia.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in ib.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let den = da * db;
        out.into_iter()
            .map(|c| Rational::new(c, den.clone()))
            .collect()
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        crate::poly::rational_gcd(a, b)
    }
}

/// Scales rational coefficients by the lcm of their denominators.
pub(crate) fn integerize(c: &[Rational]) -> (Vec<Integer>, Integer) {
    let mut den = Integer::one();
    for x in c {
        den = num_integer::Integer::lcm(&den, x.denom());
    }
    let ints = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (ints, den)
}

// ---------------------------------------------------------------- prime fields

/// Element of the prime field F_p, `p < 2^63`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp {
            v: v.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn from_u64(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn from_integer(v: &Integer, p: u64) -> Self {
        let r = v.mod_floor_u64(p);
        Fp { v: r, p }
    }

    /// Reduction of a rational with denominator prime to `p`.
    pub fn from_rational(q: &Rational, p: u64) -> Option<Self> {
        let d = Fp::from_integer(q.denom(), p);
        let n = Fp::from_integer(q.numer(), p);
        d.inv().map(|di| n * di)
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn signed_value(&self) -> i64 {
        if self.v > self.p / 2 {
            self.v as i64 - self.p as i64
        } else {
            self.v as i64
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for Integer {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let r = num_integer::Integer::mod_floor(self, &Integer::from(p));
        r.to_u64().expect("residue fits in u64")
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, o: Fp) -> Fp {
        let s = self.v + o.v;
        Fp {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, o: Fp) -> Fp {
        Fp {
            v: if self.v >= o.v {
                self.v - o.v
            } else {
                self.v + self.p - o.v
            },
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, o: Fp) -> Fp {
        Fp {
            v: exact::mul_mod(self.v, o.v, self.p),
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
}

macro_rules! forward_ref_ops {
    ($t:ty) => {
        impl<'a> Add<&'a $t> for $t {
            type Output = $t;
            fn add(self, o: &'a $t) -> $t {
                self + o.clone()
            }
        }
        impl<'a> Sub<&'a $t> for $t {
            type Output = $t;
            fn sub(self, o: &'a $t) -> $t {
                self - o.clone()
            }
        }
        impl<'a> Mul<&'a $t> for $t {
            type Output = $t;
            fn mul(self, o: &'a $t) -> $t {
                self * o.clone()
            }
        }
        impl<'a> AddAssign<&'a $t> for $t {
            fn add_assign(&mut self, o: &'a $t) {
                *self = self.clone() + o.clone();
            }
        }
        impl<'a> SubAssign<&'a $t> for $t {
            fn sub_assign(&mut self, o: &'a $t) {
                *self = self.clone() - o.clone();
            }
        }
        impl<'a> MulAssign<&'a $t> for $t {
            fn mul_assign(&mut self, o: &'a $t) {
                *self = self.clone() * o.clone();
            }
        }
    };
}

forward_ref_ops!(Fp);

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp {
            v: 1 % self.p,
            p: self.p,
        }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_one(&self) -> bool {
        self.v == 1
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        Some(Fp {
            v: exact::pow_mod(self.v, self.p - 2, self.p),
            p: self.p,
        })
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Fp::new(v, self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn pow_u64(&self, e: u64) -> Self {
        Fp {
            v: exact::pow_mod(self.v, e, self.p),
            p: self.p,
        }
    }

    /// Tonelli-Shanks.
    fn sqrt(&self) -> Option<Self> {
        let p = self.p;
        if self.v == 0 || p == 2 {
            return Some(*self);
        }
        if exact::pow_mod(self.v, (p - 1) / 2, p) != 1 {
            return None;
        }
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut z = 2;
        while exact::pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = exact::pow_mod(z, q, p);
        let mut t = exact::pow_mod(self.v, q, p);
        let mut r = exact::pow_mod(self.v, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = exact::mul_mod(tt, tt, p);
                i += 1;
            }
            let b = exact::pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = exact::mul_mod(b, b, p);
            t = exact::mul_mod(t, c, p);
            r = exact::mul_mod(r, b, p);
        }
        Some(Fp { v: r, p })
    }
}

pub trait FiniteField: Field {
    fn char_p(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> u32;
    fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.char_p()), self.degree() as usize)
    }
    fn random_like(&self, rng: &mut ChaCha8Rng) -> Self;
    /// Every element of the field; only sensible for small fields.
    fn elements_like(&self) -> Vec<Self>;
    /// The p-power Frobenius.
    fn frobenius(&self) -> Self {
        self.pow_u64(self.char_p())
    }
}

impl FiniteField for Fp {
    fn char_p(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> u32 {
        1
    }
    fn random_like(&self, rng: &mut ChaCha8Rng) -> Self {
        Fp {
            v: rng.gen_range(0..self.p),
            p: self.p,
        }
    }
    fn elements_like(&self) -> Vec<Self> {
        (0..self.p).map(|v| Fp { v, p: self.p }).collect()
    }
    fn frobenius(&self) -> Self {
        *self
    }
}

// ---------------------------------------------------------------- extensions of F_p

#[derive(Debug, PartialEq, Eq)]
pub struct ExtContext {
    p: u64,
    /// Monic irreducible modulus, low degree first, length `degree + 1`.
    modulus: Vec<u64>,
}

impl ExtContext {
    pub fn new(p: u64, modulus: &Poly<Fp>) -> Result<Arc<Self>> {
        if modulus.degree().unwrap_or(0) < 1 || !modulus.is_monic() {
            return Err(Error::InvalidInput(
                "extension modulus must be monic of positive degree".into(),
            ));
        }
        if !crate::factor::is_irreducible_finite(modulus) {
            return Err(Error::InvalidInput("extension modulus is reducible".into()));
        }
        Ok(Arc::new(ExtContext {
            p,
            modulus: modulus.coeffs().iter().map(|c| c.value()).collect(),
        }))
    }

    /// Degree-`k` extension of F_p with a modulus found by seeded random search.
    pub fn random(p: u64, k: u32, seed: u64) -> Arc<Self> {
        let m = crate::factor::find_irreducible(p, k as usize, seed);
        Arc::new(ExtContext {
            p,
            modulus: m.coeffs().iter().map(|c| c.value()).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> Poly<Fp> {
        Poly::new(
            self.modulus
                .iter()
                .map(|&c| Fp::from_u64(c, self.p))
                .collect(),
        )
    }

    pub fn zero(self: &Arc<Self>) -> ExtField {
        ExtField {
            c: vec![0; self.degree()],
            ctx: Arc::clone(self),
        }
    }

    pub fn embed(self: &Arc<Self>, a: Fp) -> ExtField {
        let mut e = self.zero();
        e.c[0] = a.value();
        e
    }

    /// The class of `t` in F_p[t]/(modulus).
    pub fn generator(self: &Arc<Self>) -> ExtField {
        let mut e = self.zero();
        if self.degree() == 1 {
            e.c[0] = (self.p - self.modulus[0]) % self.p;
        } else {
            e.c[1] = 1;
        }
        e
    }

    pub fn from_coeffs(self: &Arc<Self>, c: &[u64]) -> ExtField {
        let mut e = self.zero();
        for (i, v) in c.iter().enumerate().take(self.degree()) {
            e.c[i] = v % self.p;
        }
        e
    }
}

/// Element of F_p[t]/(g) for a monic irreducible `g`.
#[derive(Clone)]
pub struct ExtField {
    c: Vec<u64>,
    ctx: Arc<ExtContext>,
}

impl ExtField {
    pub fn context(&self) -> &Arc<ExtContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    /// Some(a) when the element lies in the prime field.
    pub fn to_prime_field(&self) -> Option<Fp> {
        self.c[1..]
            .iter()
            .all(|&v| v == 0)
            .then(|| Fp::from_u64(self.c[0], self.ctx.p))
    }
}

impl PartialEq for ExtField {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}
impl Eq for ExtField {}

impl Hash for ExtField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &v)| v != 0)
            .map(|(i, v)| match i {
                0 => format!("{v}"),
                1 => format!("{v}*t"),
                _ => format!("{v}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for ExtField {
    type Output = ExtField;
    fn add(mut self, o: ExtField) -> ExtField {
        let p = self.ctx.p;
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a = (*a + b) % p;
        }
        self
    }
}

impl Sub for ExtField {
    type Output = ExtField;
    fn sub(mut self, o: ExtField) -> ExtField {
        let p = self.ctx.p;
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a = (*a + p - b) % p;
        }
        self
    }
}

impl Neg for ExtField {
    type Output = ExtField;
    fn neg(mut self) -> ExtField {
        let p = self.ctx.p;
        for a in self.c.iter_mut() {
            *a = (p - *a) % p;
        }
        self
    }
}

impl Mul for ExtField {
    type Output = ExtField;
    fn mul(self, o: ExtField) -> ExtField {
        &self * &o
    }
}

impl<'a> Mul<&'a ExtField> for &'a ExtField {
    type Output = ExtField;
    fn mul(self, o: &'a ExtField) -> ExtField {
        let p = self.ctx.p;
        let k = self.c.len();
        let m = &self.ctx.modulus;
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u128 * b as u128) % p as u128;
            }
        }
        let mut prod: Vec<u64> = prod.into_iter().map(|v| v as u64).collect();
        for i in (k..prod.len()).rev() {
            let top = prod[i];
            if top == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let sub = exact::mul_mod(top, m[j], p);
                let idx = i - k + j;
                prod[idx] = (prod[idx] + p - sub) % p;
            }
        }
        prod.truncate(k);
        ExtField {
            c: prod,
            ctx: Arc::clone(&self.ctx),
        }
    }
}

impl<'a> Add<&'a ExtField> for ExtField {
    type Output = ExtField;
    fn add(mut self, o: &'a ExtField) -> ExtField {
        let p = self.ctx.p;
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a = (*a + b) % p;
        }
        self
    }
}

impl<'a> Sub<&'a ExtField> for ExtField {
    type Output = ExtField;
    fn sub(mut self, o: &'a ExtField) -> ExtField {
        let p = self.ctx.p;
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a = (*a + p - b) % p;
        }
        self
    }
}

impl<'a> Mul<&'a ExtField> for ExtField {
    type Output = ExtField;
    fn mul(self, o: &'a ExtField) -> ExtField {
        &self * o
    }
}

impl<'a> AddAssign<&'a ExtField> for ExtField {
    fn add_assign(&mut self, o: &'a ExtField) {
        let p = self.ctx.p;
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a = (*a + b) % p;
        }
    }
}

impl<'a> SubAssign<&'a ExtField> for ExtField {
    fn sub_assign(&mut self, o: &'a ExtField) {
        let p = self.ctx.p;
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a = (*a + p - b) % p;
        }
    }
}

impl<'a> MulAssign<&'a ExtField> for ExtField {
    fn mul_assign(&mut self, o: &'a ExtField) {
        *self = &*self * o;
    }
}

impl Field for ExtField {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        let mut e = self.ctx.zero();
        e.c[0] = 1;
        e
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let e = self.order() - BigUint::from(2u32);
        Some(self.pow_big(&e))
    }
    fn from_i64_like(&self, v: i64) -> Self {
        self.ctx.embed(Fp::new(v, self.ctx.p))
    }
    fn characteristic(&self) -> u64 {
        self.ctx.p
    }
    fn sqrt(&self) -> Option<Self> {
        tonelli_shanks(self)
    }
}

impl FiniteField for ExtField {
    fn char_p(&self) -> u64 {
        self.ctx.p
    }
    fn degree(&self) -> u32 {
        self.ctx.degree() as u32
    }
    fn random_like(&self, rng: &mut ChaCha8Rng) -> Self {
        let mut e = self.ctx.zero();
        for v in e.c.iter_mut() {
            *v = rng.gen_range(0..self.ctx.p);
        }
        e
    }
    fn elements_like(&self) -> Vec<Self> {
        let k = self.ctx.degree();
        let total = (self.ctx.p as usize).pow(k as u32);
        (0..total)
            .map(|mut i| {
                let mut e = self.ctx.zero();
                for v in e.c.iter_mut() {
                    *v = (i % self.ctx.p as usize) as u64;
                    i /= self.ctx.p as usize;
                }
                e
            })
            .collect()
    }
}

/// Square root in an odd-order finite field.
pub fn tonelli_shanks<F: FiniteField>(a: &F) -> Option<F> {
    if a.is_zero() {
        return Some(a.clone());
    }
    let q = a.order();
    let one = a.one_like();
    if a.char_p() == 2 {
        // squaring is a bijection; sqrt(a) = a^(q/2)
        return Some(a.pow_big(&(q >> 1)));
    }
    let qm1 = &q - 1u32;
    let half = &qm1 >> 1;
    if a.pow_big(&half) != one {
        return None;
    }
    let s = qm1.trailing_zeros().unwrap_or(0);
    let t = &qm1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7153);
    let minus_one = -one.clone();
    let z = loop {
        let z = a.random_like(&mut rng);
        if !z.is_zero() && z.pow_big(&half) == minus_one {
            break z;
        }
    };
    let mut m = s;
    let mut c = z.pow_big(&t);
    let mut tt = a.pow_big(&t);
    let mut r = a.pow_big(&((&t + 1u32) >> 1));
    while tt != one {
        let mut i = 0;
        let mut x = tt.clone();
        while x != one {
            x = x.square();
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = b.square();
        }
        m = i;
        c = b.square();
        tt *= &c;
        r *= &b;
    }
    Some(r)
}

// ---------------------------------------------------------------- Q(sqrt d)

/// Element `a + b*sqrt(d)` of a quadratic extension of Q.
#[derive(Clone)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: Arc<Rational>,
}

impl QuadExt {
    /// `d` must not be a rational square.
    pub fn field(d: Rational) -> Result<QuadExt> {
        if exact::rational_sqrt(&d).is_some() {
            return Err(Error::InvalidInput(format!("{d} is a rational square")));
        }
        Ok(QuadExt {
            a: Rational::zero(),
            b: Rational::zero(),
            d: Arc::new(d),
        })
    }

    pub fn new_like(&self, a: Rational, b: Rational) -> QuadExt {
        QuadExt {
            a,
            b,
            d: Arc::clone(&self.d),
        }
    }

    pub fn embed(&self, a: &Rational) -> QuadExt {
        self.new_like(a.clone(), Rational::zero())
    }

    /// `sqrt(d)` itself.
    pub fn root(&self) -> QuadExt {
        self.new_like(Rational::zero(), Rational::one())
    }

    pub fn parts(&self) -> (&Rational, &Rational) {
        (&self.a, &self.b)
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b
    }
}
impl Eq for QuadExt {}

impl Hash for QuadExt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        self + &o
    }
}
impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        self - &o
    }
}
impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        self * &o
    }
}
impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}
impl<'a> Add<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn add(self, o: &'a QuadExt) -> QuadExt {
        QuadExt {
            a: self.a + &o.a,
            b: self.b + &o.b,
            d: self.d,
        }
    }
}
impl<'a> Sub<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &'a QuadExt) -> QuadExt {
        QuadExt {
            a: self.a - &o.a,
            b: self.b - &o.b,
            d: self.d,
        }
    }
}
impl<'a> Mul<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &'a QuadExt) -> QuadExt {
        let a = &self.a * &o.a + &self.b * &o.b * &*self.d;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadExt { a, b, d: self.d }
    }
}
impl<'a> AddAssign<&'a QuadExt> for QuadExt {
    fn add_assign(&mut self, o: &'a QuadExt) {
        self.a += &o.a;
        self.b += &o.b;
    }
}
impl<'a> SubAssign<&'a QuadExt> for QuadExt {
    fn sub_assign(&mut self, o: &'a QuadExt) {
        self.a -= &o.a;
        self.b -= &o.b;
    }
}
impl<'a> MulAssign<&'a QuadExt> for QuadExt {
    fn mul_assign(&mut self, o: &'a QuadExt) {
        *self = self.clone() * o;
    }
}

impl Field for QuadExt {
    fn zero_like(&self) -> Self {
        self.new_like(Rational::zero(), Rational::zero())
    }
    fn one_like(&self) -> Self {
        self.new_like(Rational::one(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn inv(&self) -> Option<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * &*self.d;
        if Zero::is_zero(&norm) {
            return None;
        }
        Some(self.new_like(&self.a / &norm, -(&self.b / &norm)))
    }
    fn from_i64_like(&self, v: i64) -> Self {
        self.new_like(Rational::from_integer(Integer::from(v)), Rational::zero())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    /// Square roots that stay inside Q or land on a rational multiple of sqrt(d).
    fn sqrt(&self) -> Option<Self> {
        if !Zero::is_zero(&self.b) {
            return None;
        }
        if let Some(r) = exact::rational_sqrt(&self.a) {
            return Some(self.new_like(r, Rational::zero()));
        }
        let ratio = &self.a / &*self.d;
        if ratio.is_negative() {
            return None;
        }
        exact::rational_sqrt(&ratio).map(|r| self.new_like(Rational::zero(), r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn prime_field_arithmetic() {
        let a = Fp::new(3, 7);
        let b = Fp::new(-2, 7);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((a * b).value(), 1);
        assert_eq!(a.inv().unwrap() * a, a.one_like());
        assert_eq!(Fp::new(0, 7).inv(), None);
        assert_eq!(Fp::new(6, 7).signed_value(), -1);
        assert_eq!(Fp::from_rational(&rat(1, 2), 7).unwrap().value(), 4);
        assert_eq!(Fp::from_rational(&rat(1, 7), 7), None);
    }

    #[test]
    fn prime_field_sqrt() {
        for p in [3u64, 5, 7, 13, 17, 41, 97, 1_000_000_007] {
            let mut squares = std::collections::HashSet::new();
            for v in 0..p.min(500) {
                squares.insert(Fp::from_u64(v * v % p, p).value());
            }
            for v in 0..p.min(500) {
                let a = Fp::from_u64(v, p);
                match a.sqrt() {
                    Some(r) => assert_eq!(r * r, a),
                    None => assert!(p > 500 || !squares.contains(&v)),
                }
            }
        }
    }

    #[test]
    fn extension_field_is_a_field() {
        let ctx = ExtContext::random(5, 3, 1);
        assert_eq!(ctx.degree(), 3);
        let elems = ctx.zero().elements_like();
        assert_eq!(elems.len(), 125);
        for e in elems.iter().skip(1) {
            assert!((e.clone() * &e.inv().unwrap()).is_one());
            assert_eq!(e.pow_u64(124), e.one_like());
        }
        let squares: std::collections::HashSet<_> = elems.iter().map(|e| e.square()).collect();
        for e in &elems {
            match e.sqrt() {
                Some(r) => assert_eq!(r.square(), *e),
                None => assert!(!squares.contains(e)),
            }
        }
        let t = ctx.generator();
        assert_ne!(t.frobenius(), t);
        assert_eq!(t.frobenius().frobenius().frobenius(), t);
    }

    #[test]
    fn quadratic_extension_arithmetic() {
        let k = QuadExt::field(rat(2, 1)).unwrap();
        let s = k.root();
        assert_eq!(s.clone() * &s, k.embed(&rat(2, 1)));
        let x = k.new_like(rat(1, 1), rat(3, 2));
        assert!((x.clone() * &x.inv().unwrap()).is_one());
        assert_eq!(
            k.embed(&rat(8, 1)).sqrt().unwrap(),
            k.new_like(rat(0, 1), rat(2, 1))
        );
        assert!(QuadExt::field(rat(9, 4)).is_err());
    }
}
