//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Integer, Rational};
use crate::field::{Field, FiniteField, Fp};

/// Coefficients are stored low degree first; the zero polynomial is empty and
/// the last stored coefficient is never zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// `x`, with the field taken from `one`.
    pub fn x(one: &F) -> Self {
        Poly::new(vec![one.zero_like(), one.one_like()])
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k];
        v.push(c);
        Poly::new(v)
    }

    /// `x - r`.
    pub fn linear_root(r: &F) -> Self {
        Poly::new(vec![-r.clone(), r.one_like()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn lc(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| c.is_one())
    }

    /// A field element from this polynomial's field, if it has any coefficient.
    pub fn sample(&self) -> Option<&F> {
        self.coeffs.first()
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.from_i64_like(i as i64) * c)
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, v: &F) -> F {
        let mut acc = v.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c;
        }
        acc
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.lc().ok_or(Error::DivisionByZero)?;
        let dinv = dl.inv().ok_or(Error::DivisionByZero)?;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![dl.zero_like(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone() * &dinv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &(c.clone() * dc);
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = match self.sample() {
            Some(c) => Poly::constant(c.one_like()),
            None => {
                return if e == 0 {
                    panic!("0^0 without a field")
                } else {
                    Poly::zero()
                }
            }
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Result<Self> {
        (self * other).rem(m)
    }

    pub fn powmod(&self, e: &BigUint, m: &Self) -> Result<Self> {
        let one = m.lc().ok_or(Error::DivisionByZero)?.one_like();
        let base = self.rem(m)?;
        let mut acc = Poly::constant(one).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m)?;
            if e.bit(i) {
                acc = acc.mulmod(&base, m)?;
            }
        }
        Ok(acc)
    }

    /// Value of `self` at the residue class of `y` modulo `m` (composition mod m).
    pub fn compose_mod(&self, y: &Self, m: &Self) -> Result<Self> {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = (&acc.mulmod(y, m)? + &Poly::constant(c.clone())).rem(m)?;
        }
        Ok(acc)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        F::poly_gcd(self, other)
    }

    /// Monic g with s*self + t*other = g.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let one = match self.sample().or(other.sample()) {
            Some(c) => c.one_like(),
            None => return (Poly::zero(), Poly::zero(), Poly::zero()),
        };
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(one.clone()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(one));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let i = lc.inv().expect("nonzero");
                (r0.scale(&i), s0.scale(&i), t0.scale(&i))
            }
        }
    }

    /// Modular inverse of `self` modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.xgcd(m);
        g.is_one().then(|| s.rem(m).expect("nonzero modulus"))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Square-free decomposition: Yun's algorithm in characteristic zero, Musser's
    /// algorithm with p-th roots in characteristic p.
    pub fn squarefree(&self) -> Result<SquarefreeDecomposition<F>> {
        let unit = self
            .lc()
            .ok_or_else(|| Error::InvalidInput("square-free part of zero".into()))?
            .clone();
        let f = self.monic();
        let mut parts = Vec::new();
        if unit.characteristic() == 0 {
            yun(&f, &mut parts)?;
        } else {
            musser(&f, 1, &mut parts)?;
        }
        parts.sort_by_key(|(_, m)| *m);
        Ok(SquarefreeDecomposition { unit, parts })
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Result<Self> {
        let sq = self.squarefree()?;
        let one = self.lc().expect("nonzero").one_like();
        Ok(sq
            .parts
            .iter()
            .fold(Poly::constant(one), |acc, (p, _)| &acc * p))
    }
}

fn yun<F: Field>(f: &Poly<F>, out: &mut Vec<(Poly<F>, u32)>) -> Result<()> {
    if f.is_constant() {
        return Ok(());
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0)?;
    let c = df.exact_div(&a0)?;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.exact_div(&a)?;
        let c = d.exact_div(&a)?;
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    Ok(())
}

fn musser<F: Field>(f: &Poly<F>, mult: u32, out: &mut Vec<(Poly<F>, u32)>) -> Result<()> {
    if f.is_constant() {
        return Ok(());
    }
    let p = f.sample().expect("nonzero").characteristic();
    let df = f.derivative();
    if df.is_zero() {
        let root = pth_root_poly(f, p)?;
        return musser(&root, mult * p as u32, out);
    }
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y)?;
        if !fac.is_constant() {
            out.push((fac.monic(), i * mult));
        }
        w = y;
        c = c.exact_div(&w)?;
        i += 1;
    }
    if !c.is_constant() {
        let root = pth_root_poly(&c, p)?;
        musser(&root, mult * p as u32, out)?;
    }
    Ok(())
}

/// `g` with `g(x)^p = f(x)` for `f` a polynomial in `x^p` over a perfect field.
fn pth_root_poly<F: Field>(f: &Poly<F>, p: u64) -> Result<Poly<F>> {
    let p = p as usize;
    let mut out = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate() {
        if i % p == 0 {
            out.push(pth_root(c)?);
        } else if !c.is_zero() {
            return Err(Error::InvalidInput("not a p-th power".into()));
        }
    }
    Ok(Poly::new(out))
}

fn pth_root<F: Field>(c: &F) -> Result<F> {
    // In a finite field of order q = p^k, c^(q/p) is the p-th root. Reach the
    // order through the characteristic and the smallest k with c^(p^k) = c.
    let p = c.characteristic();
    let mut k = 1u32;
    let mut x = c.pow_u64(p);
    while x != *c {
        x = x.pow_u64(p);
        k += 1;
        if k > 4096 {
            return Err(Error::InvalidInput(
                "p-th root outside a finite field".into(),
            ));
        }
    }
    let mut r = c.clone();
    for _ in 0..k - 1 {
        r = r.pow_u64(p);
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition<F: Field> {
    pub unit: F,
    /// Monic, pairwise coprime, square-free factors with their multiplicities.
    pub parts: Vec<(Poly<F>, u32)>,
}

impl<F: Field> SquarefreeDecomposition<F> {
    pub fn expand(&self) -> Poly<F> {
        self.parts
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (p, m)| {
                &acc * &p.pow(*m)
            })
    }
}

pub(crate) fn euclid_gcd<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor");
        a = std::mem::replace(&mut b, r);
    }
    a.monic()
}

// ---------------------------------------------------------------- Z[x] helpers

/// Integer primitive part and rational content: `p = content * prim`, with
/// `prim` primitive and positive leading coefficient.
pub fn primitive_part(p: &Poly<Rational>) -> (Rational, Vec<Integer>) {
    if p.is_zero() {
        return (Rational::zero(), Vec::new());
    }
    let (ints, den) = crate::field::integerize(p.coeffs());
    let mut g = Integer::zero();
    for c in &ints {
        g = num_integer::Integer::gcd(&g, c);
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    let prim = ints.iter().map(|c| c / &g).collect();
    (Rational::new(g, den), prim)
}

pub fn from_integers(c: &[Integer]) -> Poly<Rational> {
    Poly::new(
        c.iter()
            .map(|v| Rational::from_integer(v.clone()))
            .collect(),
    )
}

pub(crate) fn int_content(c: &[Integer]) -> Integer {
    c.iter()
        .fold(Integer::zero(), |g, x| num_integer::Integer::gcd(&g, x))
}

fn int_trim(mut v: Vec<Integer>) -> Vec<Integer> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b.
fn int_prem(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    if r.len() < b.len() {
        return r;
    }
    let mut e = r.len() - b.len() + 1;
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        r = int_trim(r);
        e -= 1;
    }
    let f = num_traits::pow(lb.clone(), e);
    r.into_iter().map(|c| c * &f).collect()
}

/// Subresultant PRS gcd of integer polynomials, returned primitive.
pub(crate) fn int_subresultant_gcd(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let (mut a, mut b) = if a.len() >= b.len() {
        (a.to_vec(), b.to_vec())
    } else {
        (b.to_vec(), a.to_vec())
    };
    if b.is_empty() {
        return primitive_int(&a);
    }
    let ca = int_content(&a);
    let cb = int_content(&b);
    a = a.iter().map(|c| c / &ca).collect();
    b = b.iter().map(|c| c / &cb).collect();
    let mut g = Integer::one();
    let mut h = Integer::one();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = int_prem(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![Integer::one()];
        }
        let div = &g * num_traits::pow(h.clone(), delta as usize);
        a = b;
        b = r.into_iter().map(|c| c / &div).collect();
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            let num = num_traits::pow(g.clone(), delta as usize);
            let den = num_traits::pow(h.clone(), delta as usize - 1);
            num / den
        };
    }
    primitive_int(&b)
}

fn primitive_int(a: &[Integer]) -> Vec<Integer> {
    let mut c = int_content(a);
    if a.last().is_some_and(|x| x.is_negative()) {
        c = -c;
    }
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x / &c).collect()
}

pub(crate) fn rational_gcd(a: &Poly<Rational>, b: &Poly<Rational>) -> Poly<Rational> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let (_, pa) = primitive_part(a);
    let (_, pb) = primitive_part(b);
    from_integers(&int_subresultant_gcd(&pa, &pb)).monic()
}

// ---------------------------------------------------------------- operators

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &'a Poly<F>) -> Poly<F> {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut v = long.coeffs.clone();
        for (a, b) in v.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        Poly::new(v)
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &'a Poly<F>) -> Poly<F> {
        let mut v = self.coeffs.clone();
        for (i, b) in o.coeffs.iter().enumerate() {
            if i < v.len() {
                v[i] -= b;
            } else {
                v.push(-b.clone());
            }
        }
        Poly::new(v)
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &'a Poly<F>) -> Poly<F> {
        Poly::new(F::poly_mul(&self.coeffs, &o.coeffs))
    }
}

impl<'a, F: Field> Neg for &'a Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: Poly<F>) -> Poly<F> {
        &self + &o
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: Poly<F>) -> Poly<F> {
        &self - &o
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: Poly<F>) -> Poly<F> {
        &self * &o
    }
}

// ---------------------------------------------------------------- text

impl<F: Field> fmt::Display for Poly<F> {
    /// `c_k*x^k + ... + c_0`, coefficients of 1 omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_string();
            let neg = s.starts_with('-');
            if neg {
                s.remove(0);
            }
            if s.contains(' ') {
                s = format!("({s})");
            }
            let body = match (i, s.as_str()) {
                (0, _) => s.clone(),
                (1, "1") => "x".to_string(),
                (1, _) => format!("{s}*x"),
                (_, "1") => format!("x^{i}"),
                _ => format!("{s}*x^{i}"),
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
    offset: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::parse(self.offset + self.pos, msg)
    }

    fn number(&mut self) -> Result<Integer> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().expect("digits"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let n = self.number()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let d = self.number()?;
            if d.is_zero() {
                return Err(Error::parse(self.offset + at, "zero denominator"));
            }
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::from_integer(n))
    }
}

/// Parses an exact rational, e.g. `-129/100`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    parse_rational_at(s, 0)
}

pub(crate) fn parse_rational_at(s: &str, offset: usize) -> Result<Rational> {
    let mut lx = Lexer {
        s: s.as_bytes(),
        pos: 0,
        offset,
    };
    let neg = match lx.peek() {
        Some(b'-') => {
            lx.pos += 1;
            true
        }
        Some(b'+') => {
            lx.pos += 1;
            false
        }
        _ => false,
    };
    let q = lx.rational()?;
    if lx.peek().is_some() {
        return Err(lx.err("unexpected trailing input"));
    }
    Ok(if neg { -q } else { q })
}

impl std::str::FromStr for Poly<Rational> {
    type Err = Error;

    /// Accepts sums of terms `c*x^k`, `c*x`, `x^k`, `c`, with rational `c`.
    fn from_str(s: &str) -> Result<Self> {
        let mut lx = Lexer {
            s: s.as_bytes(),
            pos: 0,
            offset: 0,
        };
        let mut terms: Vec<(Rational, usize)> = Vec::new();
        let mut first = true;
        loop {
            let sign = match lx.peek() {
                None if first => return Err(lx.err("empty polynomial")),
                None => break,
                Some(b'+') => {
                    lx.pos += 1;
                    Rational::one()
                }
                Some(b'-') => {
                    lx.pos += 1;
                    -Rational::one()
                }
                Some(_) if first => Rational::one(),
                Some(_) => return Err(lx.err("expected '+' or '-'")),
            };
            first = false;
            let mut coef = Rational::one();
            let mut saw_coef = false;
            if lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                coef = lx.rational()?;
                saw_coef = true;
                if lx.peek() == Some(b'*') {
                    lx.pos += 1;
                    if lx.peek() != Some(b'x') {
                        return Err(lx.err("expected 'x' after '*'"));
                    }
                }
            }
            let mut deg = 0;
            if lx.peek() == Some(b'x') {
                lx.pos += 1;
                deg = 1;
                if lx.peek() == Some(b'^') {
                    lx.pos += 1;
                    let at = lx.pos;
                    let e = lx.number()?;
                    deg = e
                        .try_into()
                        .map_err(|_| Error::parse(at, "exponent too large"))?;
                }
            } else if !saw_coef {
                return Err(lx.err("expected a coefficient or 'x'"));
            }
            terms.push((sign * coef, deg));
        }
        let top = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut v = vec![Rational::zero(); top + 1];
        for (c, d) in terms {
            v[d] += c;
        }
        Ok(Poly::new(v))
    }
}

impl Poly<Rational> {
    /// Reduction modulo `p`; None if some denominator is divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Poly<Fp>> {
        let v: Option<Vec<Fp>> = self
            .coeffs
            .iter()
            .map(|c| Fp::from_rational(c, p))
            .collect();
        v.map(Poly::new)
    }
}

impl<F: FiniteField> Poly<F> {
    /// x^(q^k) mod m, by repeated q-th powering.
    pub fn frobenius_power_x(m: &Self, k: usize) -> Result<Self> {
        let one = m.lc().ok_or(Error::DivisionByZero)?.one_like();
        let q = one.order();
        let mut acc = Poly::x(&one).rem(m)?;
        for _ in 0..k {
            acc = acc.powmod(&q, m)?;
        }
        Ok(acc)
    }
}
