//! Long Weierstrass curves `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
//! and their group law.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Integer, Rational};
use crate::field::{Field, FiniteField, Fp};
use crate::poly::{self, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point<F> {
    Infinity,
    Affine { x: F, y: F },
}

impl<F: Field> Point<F> {
    pub fn new(x: F, y: F) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(y),
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Point<G> {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: f(x), y: f(y) },
        }
    }
}

impl<F: Field> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BInvariants<F> {
    pub b2: F,
    pub b4: F,
    pub b6: F,
    pub b8: F,
}

/// `x = A/B^2`, `y = C/B^3` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XCoordParts {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve<F> {
    pub a1: F,
    pub a2: F,
    pub a3: F,
    pub a4: F,
    pub a6: F,
}

impl<F: Field> Curve<F> {
    /// Rejects singular curves and characteristics 2 and 3.
    pub fn new(a: [F; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        let c = Curve { a1, a2, a3, a4, a6 };
        let ch = c.a1.characteristic();
        if ch == 2 || ch == 3 {
            return Err(Error::UnsupportedCharacteristic(ch));
        }
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// `y^2 = x^3 + a x + b`.
    pub fn short(a: F, b: F) -> Result<Self> {
        let z = a.zero_like();
        Curve::new([z.clone(), z.clone(), z, a, b])
    }

    pub fn a_invariants(&self) -> [F; 5] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ]
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Result<Curve<G>> {
        Curve::new(self.a_invariants().map(|c| f(&c)))
    }

    fn k(&self, v: i64) -> F {
        self.a1.from_i64_like(v)
    }

    pub fn zero(&self) -> F {
        self.a1.zero_like()
    }

    pub fn one(&self) -> F {
        self.a1.one_like()
    }

    pub fn b_invariants(&self) -> BInvariants<F> {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1.square() + self.k(4) * a2;
        let b4 = self.k(2) * a4 + a1.clone() * a3;
        let b6 = a3.square() + self.k(4) * a6;
        let b8 = a1.square() * a6 + self.k(4) * a2 * a6 - a1.clone() * a3 * a4
            + a2.clone() * &a3.square()
            - a4.square();
        BInvariants { b2, b4, b6, b8 }
    }

    pub fn c4(&self) -> F {
        let b = self.b_invariants();
        b.b2.square() - self.k(24) * &b.b4
    }

    pub fn c6(&self) -> F {
        let b = self.b_invariants();
        -(b.b2.square() * &b.b2) + self.k(36) * &b.b2 * &b.b4 - self.k(216) * &b.b6
    }

    pub fn discriminant(&self) -> F {
        let b = self.b_invariants();
        -(b.b2.square() * &b.b8) - self.k(8) * &b.b4.square() * &b.b4 - self.k(27) * &b.b6.square()
            + self.k(9) * &b.b2 * &b.b4 * &b.b6
    }

    pub fn j_invariant(&self) -> F {
        let c4 = self.c4();
        (c4.square() * &c4)
            .div(&self.discriminant())
            .expect("nonsingular curve")
    }

    /// `(B-invariants, discriminant, j)`.
    pub fn invariants(&self) -> (BInvariants<F>, F, F) {
        (self.b_invariants(), self.discriminant(), self.j_invariant())
    }

    /// `4x^3 + b2 x^2 + 2 b4 x + b6`, which equals `(2y + a1 x + a3)^2` on the curve.
    pub fn two_torsion_poly(&self) -> Poly<F> {
        let b = self.b_invariants();
        Poly::new(vec![b.b6, self.k(2) * &b.b4, b.b2, self.k(4)])
    }

    /// Right-hand side `x^3 + a2 x^2 + a4 x + a6` as a polynomial.
    pub fn rhs_poly(&self) -> Poly<F> {
        Poly::new(vec![
            self.a6.clone(),
            self.a4.clone(),
            self.a2.clone(),
            self.one(),
        ])
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let lhs = y.square() + self.a1.clone() * x * y + self.a3.clone() * y;
                let rhs =
                    x.square() * x + self.a2.clone() * &x.square() + self.a4.clone() * x + &self.a6;
                lhs == rhs
            }
        }
    }

    pub fn check(&self, p: &Point<F>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x: x.clone(),
                y: -y.clone() - self.a1.clone() * x - &self.a3,
            },
        }
    }

    /// True for O and the points with `2P = O`.
    pub fn is_two_torsion(&self, p: &Point<F>) -> bool {
        *p == self.neg(p)
    }

    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Result<Point<F>> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub(crate) fn add_unchecked(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            let den = self.k(2) * y1 + self.a1.clone() * x1 + &self.a3;
            if den.is_zero() || *y1 != *y2 {
                return Point::Infinity;
            }
            let num = self.k(3) * &x1.square() + self.k(2) * &self.a2 * x1 + &self.a4
                - self.a1.clone() * y1;
            num.div(&den).expect("nonzero")
        } else {
            (y2.clone() - y1)
                .div(&(x2.clone() - x1))
                .expect("distinct x")
        };
        let nu = y1.clone() - lambda.clone() * x1;
        let x3 = lambda.square() + self.a1.clone() * &lambda - &self.a2 - x1 - x2;
        let y3 = -(lambda + &self.a1) * &x3 - nu - &self.a3;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, p: &Point<F>) -> Point<F> {
        self.add_unchecked(p, p)
    }

    pub fn mul(&self, k: &Integer, p: &Point<F>) -> Result<Point<F>> {
        self.check(p)?;
        let base = if k.is_negative() {
            self.neg(p)
        } else {
            p.clone()
        };
        let k = k.abs();
        let mut acc = Point::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.double(&acc);
            if k.bit(i) {
                acc = self.add_unchecked(&acc, &base);
            }
        }
        Ok(acc)
    }

    pub fn mul_i64(&self, k: i64, p: &Point<F>) -> Result<Point<F>> {
        self.mul(&Integer::from(k), p)
    }

    /// The points with the given x-coordinate (zero, one or two of them).
    pub fn lift_x(&self, x: &F) -> Vec<Point<F>> {
        // y^2 + b y - c = 0
        let b = self.a1.clone() * x + &self.a3;
        let c = self.rhs_poly().eval(x);
        let disc = b.square() + self.k(4) * &c;
        let Some(r) = disc.sqrt() else {
            return Vec::new();
        };
        let half = self.k(2).inv().expect("odd characteristic");
        let y1 = (r.clone() - &b) * &half;
        let y2 = (-r.clone() - &b) * &half;
        if r.is_zero() {
            vec![Point::new(x.clone(), y1)]
        } else {
            vec![Point::new(x.clone(), y1), Point::new(x.clone(), y2)]
        }
    }
}

impl<F: FiniteField> Curve<F> {
    /// Every point, O first, then affine points in field-enumeration order.
    pub fn points(&self) -> Vec<Point<F>> {
        let mut out = vec![Point::Infinity];
        for x in self.a1.elements_like() {
            out.extend(self.lift_x(&x));
        }
        out
    }

    /// Trace of Frobenius `q + 1 - #E(F_q)`.
    pub fn frobenius_trace(&self) -> i64 {
        let q = self.a1.order().to_u64().expect("small field");
        q as i64 + 1 - self.count_points() as i64
    }

    /// `#E(F_q)` by a quadratic-character sum over x.
    pub fn count_points(&self) -> u64 {
        let f = self.two_torsion_poly();
        let one = self.one();
        let half: num_bigint::BigUint = (self.a1.order() - 1u32) >> 1;
        let mut n = 1u64;
        for x in self.a1.elements_like() {
            let v = f.eval(&x);
            if v.is_zero() {
                n += 1;
            } else if v.pow_big(&half) == one {
                n += 2;
            }
        }
        n
    }

    /// Order of a point by repeated addition; bounded by the Hasse interval.
    pub fn point_order(&self, p: &Point<F>) -> u64 {
        let mut acc = p.clone();
        let mut n = 1;
        while !acc.is_infinity() {
            acc = self.add_unchecked(&acc, p);
            n += 1;
        }
        n
    }
}

impl Curve<Fp> {
    /// `#E(F_p)` using a table of squares instead of one exponentiation per x.
    pub fn count_points_prime_field(&self) -> u64 {
        let p = self.a1.modulus();
        let mut square = vec![false; p as usize];
        for t in 0..p {
            square[((t as u128 * t as u128) % p as u128) as usize] = true;
        }
        let f = self.two_torsion_poly();
        let mut n = 1u64;
        for x in 0..p {
            let v = f.eval(&Fp::from_u64(x, p)).value();
            n += if v == 0 {
                1
            } else if square[v as usize] {
                2
            } else {
                0
            };
        }
        n
    }
}

impl Curve<Rational> {
    /// Reduction modulo p, None when p divides a denominator or the reduction is singular.
    pub fn reduce_mod(&self, p: u64) -> Option<Curve<Fp>> {
        let a: Option<Vec<Fp>> = self
            .a_invariants()
            .iter()
            .map(|c| Fp::from_rational(c, p))
            .collect();
        let a: [Fp; 5] = a?.try_into().ok()?;
        Curve::new(a).ok()
    }

    /// Order of a torsion point (at most 12 over Q), or None for infinite order.
    pub fn torsion_order(&self, p: &Point<Rational>) -> Option<u32> {
        let mut acc = p.clone();
        for n in 1..=12 {
            if acc.is_infinity() {
                return Some(n);
            }
            acc = self.add_unchecked(&acc, p);
        }
        None
    }

    pub fn is_torsion(&self, p: &Point<Rational>) -> bool {
        self.torsion_order(p).is_some()
    }

    /// Isomorphism over Q: `c4' = u^4 c4`, `c6' = u^6 c6` for some rational u.
    pub fn is_isomorphic(&self, other: &Curve<Rational>) -> bool {
        if self.j_invariant() != other.j_invariant() {
            return false;
        }
        let (c4, c6) = (self.c4(), self.c6());
        let (d4, d6) = (other.c4(), other.c6());
        match (Zero::is_zero(&c4), Zero::is_zero(&c6)) {
            // j = 0: need u^6 = d6/c6
            (true, _) => exact::rational_nth_root(&(d6 / c6), 6).is_some(),
            // j = 1728: need u^4 = d4/c4
            (_, true) => exact::rational_nth_root(&(d4 / c4), 4).is_some(),
            // u^2 = (d6 c4) / (c6 d4)
            _ => exact::rational_sqrt(&((d6 * &c4) / (c6 * &d4))).is_some(),
        }
    }

    pub fn discriminant_integer(&self) -> Integer {
        let d = self.discriminant();
        d.numer() * d.denom()
    }
}

impl Point<Rational> {
    /// Splits `x = A/B^2`, `y = C/B^3`.
    pub fn x_parts(&self) -> Result<XCoordParts> {
        let (x, y) = match self {
            Point::Infinity => {
                return Err(Error::InvalidInput(
                    "x_parts of the point at infinity".into(),
                ))
            }
            Point::Affine { x, y } => (x, y),
        };
        let b = exact::sqrt_exact(x.denom()).ok_or_else(|| {
            Error::NonStandardDenominator(format!(
                "denominator {} of x is not a square; scale the model by (u^4, u^6) to clear it",
                x.denom()
            ))
        })?;
        if *y.denom() != &b * &b * &b {
            return Err(Error::NonStandardDenominator(format!(
                "denominator {} of y is not {}^3",
                y.denom(),
                b
            )));
        }
        Ok(XCoordParts {
            a: x.numer().clone(),
            b,
            c: y.numer().clone(),
        })
    }

    /// `log max(|A|, B^2)`, with O at 0.
    pub fn naive_height(&self) -> f64 {
        match self {
            Point::Infinity => 0.0,
            Point::Affine { x, .. } => {
                let m = x.numer().abs().max(x.denom().clone());
                exact::ln_integer(&m)
            }
        }
    }
}

// ---------------------------------------------------------------- text

fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(',') {
        out.push(poly::parse_rational_at(part, offset)?);
        offset += part.len() + 1;
    }
    if out.len() != n {
        return Err(Error::parse(
            s.len(),
            format!(
                "expected {n} comma-separated values for {what}, found {}",
                out.len()
            ),
        ));
    }
    Ok(out)
}

/// Parses "a1,a2,a3,a4,a6", optionally in square brackets.
pub fn parse_curve(s: &str) -> Result<Curve<Rational>> {
    let v = parse_list(&unwrap_brackets(s, '[', ']'), 5, "a curve")?;
    let a: [Rational; 5] = v.try_into().expect("five values");
    Curve::new(a)
}

/// Blanks one pair of enclosing brackets, keeping character positions.
fn unwrap_brackets(s: &str, open: char, close: char) -> String {
    let t = s.trim();
    if t.starts_with(open) && t.ends_with(close) && t.len() >= 2 {
        let a = s.find(open).expect("present");
        let b = s.rfind(close).expect("present");
        let mut out = s.to_string();
        out.replace_range(b..b + 1, " ");
        out.replace_range(a..a + 1, " ");
        out
    } else {
        s.to_string()
    }
}

/// Parses "x,y" or "(x, y)", and "O" for the point at infinity.
pub fn parse_point(s: &str) -> Result<Point<Rational>> {
    if s.trim() == "O" {
        return Ok(Point::Infinity);
    }
    let v = parse_list(&unwrap_brackets(s, '(', ')'), 2, "a point")?;
    let [x, y]: [Rational; 2] = v.try_into().expect("two values");
    Ok(Point::new(x, y))
}

impl fmt::Display for Curve<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.a_invariants();
        write!(f, "[{},{},{},{},{}]", a[0], a[1], a[2], a[3], a[4])
    }
}

/// Renders a rational point as "x,y" for re-parsing.
pub fn format_point(p: &Point<Rational>) -> String {
    match p {
        Point::Infinity => "O".into(),
        Point::Affine { x, y } => format!("{x},{y}"),
    }
}

/// A rational point's coordinate pair as `f64`, for diagnostics only.
pub fn approx(p: &Point<Rational>) -> Option<(f64, f64)> {
    match p {
        Point::Infinity => None,
        Point::Affine { x, y } => Some((x.to_f64()?, y.to_f64()?)),
    }
}

impl<F: Field> Curve<F> {
    /// `(x, y)` as a point after checking it is on the curve.
    pub fn point(&self, x: F, y: F) -> Result<Point<F>> {
        let p = Point::new(x, y);
        self.check(&p)?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e() -> Curve<Rational> {
        parse_curve("0,0,0,0,-2").unwrap()
    }

    fn p() -> Point<Rational> {
        Point::new(rat_int(3), rat_int(5))
    }

    #[test]
    fn printed_forms_reparse() {
        let q = Point::new(rat(129, 100), rat(-383, 1000));
        assert_eq!(parse_point(&q.to_string()).unwrap(), q);
        assert_eq!(parse_point(&format_point(&q)).unwrap(), q);
        let c = parse_curve("1,-1,1,-626,6180").unwrap();
        assert_eq!(parse_curve(&c.to_string()).unwrap(), c);
        match parse_point("(3, x)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn group_law_examples() {
        let e = e();
        let two = e.add(&p(), &p()).unwrap();
        assert_eq!(two, Point::new(rat(129, 100), rat(-383, 1000)));
        // tangent slope 3x^2/(2y) = 27/10
        let l = rat(27, 10);
        let x3 = &l * &l - rat_int(6);
        assert_eq!(x3, rat(129, 100));
        assert_eq!(e.add(&p(), &Point::Infinity).unwrap(), p());
        let minus = Point::new(rat_int(3), rat_int(-5));
        assert_eq!(e.add(&p(), &minus).unwrap(), Point::Infinity);
        assert_eq!(e.neg(&p()), minus);
        assert_eq!(
            e.add(&p(), &Point::new(rat_int(1), rat_int(1))),
            Err(Error::NotOnCurve)
        );
    }

    #[test]
    fn scalar_multiples() {
        let e = e();
        assert_eq!(
            e.mul_i64(2, &p()).unwrap(),
            Point::new(rat(129, 100), rat(-383, 1000))
        );
        assert_eq!(e.mul_i64(1, &p()).unwrap(), p());
        assert_eq!(e.mul_i64(0, &p()).unwrap(), Point::Infinity);
        let three = e.mul_i64(3, &p()).unwrap();
        let by_adds = e.add(&e.add(&p(), &p()).unwrap(), &p()).unwrap();
        assert_eq!(three, by_adds);
        assert_eq!(three.x().unwrap(), &rat(164323, 29241));
        assert_eq!(e.mul_i64(-3, &p()).unwrap(), e.neg(&three));
    }

    #[test]
    fn invariant_examples() {
        let (b, d, _) = e().invariants();
        assert_eq!(
            (b.b2, b.b4, b.b6, b.b8, d),
            (
                rat_int(0),
                rat_int(0),
                rat_int(-8),
                rat_int(0),
                rat_int(-1728)
            )
        );
        let e2 = parse_curve("0,0,0,1,0").unwrap();
        let (b, d, j) = e2.invariants();
        assert_eq!(
            (b.b2, b.b4, b.b6, b.b8, d),
            (
                rat_int(0),
                rat_int(2),
                rat_int(0),
                rat_int(-1),
                rat_int(-64)
            )
        );
        assert_eq!(j, rat_int(1728));
        assert_eq!(parse_curve("0,0,0,0,0"), Err(Error::SingularCurve));
    }

    #[test]
    fn b8_identity_on_random_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a: [Rational; 5] =
                std::array::from_fn(|_| rat(rng.gen_range(-50..50), rng.gen_range(1..9)));
            let c = Curve {
                a1: a[0].clone(),
                a2: a[1].clone(),
                a3: a[2].clone(),
                a4: a[3].clone(),
                a6: a[4].clone(),
            };
            let b = c.b_invariants();
            assert_eq!(rat_int(4) * &b.b8, &b.b2 * &b.b6 - &b.b4 * &b.b4);
            // 1728 * Delta = c4^3 - c6^2
            assert_eq!(
                rat_int(1728) * c.discriminant(),
                c.c4() * c.c4() * c.c4() - c.c6() * c.c6()
            );
        }
    }

    #[test]
    fn coordinate_parts() {
        let two = Point::new(rat(129, 100), rat(-383, 1000));
        let parts = two.x_parts().unwrap();
        assert_eq!(
            (parts.a, parts.b, parts.c),
            (Integer::from(129), Integer::from(10), Integer::from(-383))
        );
        let parts = p().x_parts().unwrap();
        assert_eq!((parts.a, parts.b, parts.c), (3.into(), 1.into(), 5.into()));
        let q = Point::new(rat_int(8), rat_int(36));
        assert_eq!(q.x_parts().unwrap().a, Integer::from(8));
        assert!(matches!(
            Point::new(rat(1, 2), rat(1, 8)).x_parts(),
            Err(Error::NonStandardDenominator(_))
        ));
    }

    #[test]
    fn heights() {
        assert!((p().naive_height() - 3f64.ln()).abs() < 1e-12);
        let two = Point::new(rat(129, 100), rat(-383, 1000));
        assert!((two.naive_height() - 129f64.ln()).abs() < 1e-12);
        assert_eq!(Point::<Rational>::Infinity.naive_height(), 0.0);
    }

    #[test]
    fn multiples_keep_the_denominator_shape() {
        let e = e();
        let mut acc = Point::Infinity;
        for _ in 1..=8 {
            acc = e.add(&acc, &p()).unwrap();
            let parts = acc.x_parts().unwrap();
            assert_eq!(acc.x().unwrap().denom(), &(&parts.b * &parts.b));
            assert_eq!(acc.y().unwrap().denom(), &(&parts.b * &parts.b * &parts.b));
        }
    }

    #[test]
    fn parsing_reports_positions() {
        assert!(matches!(parse_curve("0,0,0,0"), Err(Error::Parse { .. })));
        match parse_curve("0,0,x,0,1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_point("129/100,-383/1000").unwrap(),
            Point::new(rat(129, 100), rat(-383, 1000))
        );
        assert_eq!(parse_point(&format_point(&p())).unwrap(), p());
    }

    #[test]
    fn isomorphism_over_q() {
        let c = parse_curve("0,0,0,1,0").unwrap();
        assert!(c.is_isomorphic(&parse_curve("0,0,0,16,0").unwrap()));
        assert!(!c.is_isomorphic(&parse_curve("0,0,0,2,0").unwrap()));
        assert!(!c.is_isomorphic(&parse_curve("0,0,0,-4,0").unwrap()));
        // a long model and its short form
        let long = parse_curve("1,-1,1,-626,6180").unwrap();
        let short = Curve::short(-long.c4() / rat_int(48), -long.c6() / rat_int(864)).unwrap();
        assert!(long.is_isomorphic(&short));
        // y^2 = x^3 - 2 scaled by u = 2, and its quadratic twist by -1
        assert!(e().is_isomorphic(&parse_curve("0,0,0,0,-128").unwrap()));
        assert!(!e().is_isomorphic(&parse_curve("0,0,0,0,2").unwrap()));
    }

    #[test]
    fn torsion_detection() {
        let e = parse_curve("0,0,0,1,0").unwrap();
        assert_eq!(
            e.torsion_order(&Point::new(rat_int(0), rat_int(0))),
            Some(2)
        );
        assert!(!self::e().is_torsion(&p()));
    }

    #[test]
    fn finite_field_rejections_and_points() {
        assert_eq!(
            Curve::short(Fp::new(1, 3), Fp::new(1, 3)),
            Err(Error::UnsupportedCharacteristic(3))
        );
        let c = Curve::short(Fp::new(0, 5), Fp::new(1, 5)).unwrap();
        // y^2 = x^3 + 1 over F_5 has 6 points
        assert_eq!(c.points().len(), 6);
    }

    fn arb_fp_curve() -> impl Strategy<Value = (Curve<Fp>, u64)> {
        (
            prop::sample::select(vec![5u64, 7, 11, 13, 101]),
            0i64..101,
            0i64..101,
        )
            .prop_filter_map("singular", |(p, a, b)| {
                Curve::short(Fp::new(a, p), Fp::new(b, p))
                    .ok()
                    .map(|c| (c, p))
            })
    }

    proptest! {
        #[test]
        fn group_axioms_mod_p((c, _) in arb_fp_curve(), i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
            let pts = c.points();
            let (p, q, r) = (&pts[i % pts.len()], &pts[j % pts.len()], &pts[k % pts.len()]);
            let pq = c.add(p, q).unwrap();
            prop_assert!(c.contains(&pq));
            prop_assert_eq!(pq.clone(), c.add(q, p).unwrap());
            prop_assert_eq!(c.add(&pq, r).unwrap(), c.add(p, &c.add(q, r).unwrap()).unwrap());
            prop_assert_eq!(c.add(p, &c.neg(p)).unwrap(), Point::Infinity);
            let n = pts.len() as i64;
            prop_assert_eq!(c.mul_i64(n, p).unwrap(), Point::Infinity);
        }

        #[test]
        fn long_form_group_law(a1 in -3i64..4, a2 in -3i64..4, a3 in -3i64..4, x in -20i64..20) {
            // pick a6 so that (x, 1) lies on the curve with a4 = 1
            let (xq, a1q, a2q, a3q) = (rat_int(x), rat_int(a1), rat_int(a2), rat_int(a3));
            let a6 = rat_int(1) + &a1q * &xq + &a3q - &xq * &xq * &xq - &a2q * &xq * &xq - &xq;
            let Ok(c) = Curve::new([a1q, a2q, a3q, rat_int(1), a6]) else { return Ok(()); };
            let p = Point::new(xq, rat_int(1));
            prop_assert!(c.contains(&p));
            let p2 = c.mul_i64(2, &p).unwrap();
            let p3 = c.mul_i64(3, &p).unwrap();
            prop_assert!(c.contains(&p2) && c.contains(&p3));
            prop_assert_eq!(c.add(&p2, &p).unwrap(), p3.clone());
            prop_assert_eq!(c.add(&p3, &c.neg(&p)).unwrap(), p2);
        }
    }
}
