//! Division polynomials and the pre-image polynomial.
//!
//! `psi_m` is kept as `f_m` (m odd) or `psi_2 * f_m` (m even) with
//! `psi_2 = 2y + a1 x + a3` and every `f_m` in K[x]. Since
//! `psi_2^2 = F(x) = 4x^3 + b2 x^2 + 2 b4 x + b6` on the curve, `psi_m^2` and
//! `theta_m` land in K[x] without ever carrying a y.

use std::sync::RwLock;

use crate::config::Config;
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::exact::Integer;
use crate::factor::{FactorList, Factorable};
use crate::field::Field;
use crate::poly::Poly;

/// Per-curve cache of the `f_m`, grown bottom-up on demand.
pub struct DivPolyCache<F: Field> {
    curve: Curve<F>,
    two_torsion: Poly<F>,
    f: RwLock<Vec<Poly<F>>>,
}

/// `psi_m` evaluated-form: `f(x)`, times `2y + a1 x + a3` when `y_factor` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Psi<F: Field> {
    pub f: Poly<F>,
    pub y_factor: bool,
}

impl<F: Field> Psi<F> {
    pub fn eval(&self, curve: &Curve<F>, p: &Point<F>) -> Option<F> {
        let (x, y) = (p.x()?, p.y()?);
        let v = self.f.eval(x);
        Some(if self.y_factor {
            v * &(curve.a1.from_i64_like(2) * y + curve.a1.clone() * x + &curve.a3)
        } else {
            v
        })
    }
}

impl<F: Field> DivPolyCache<F> {
    pub fn new(curve: &Curve<F>) -> Self {
        let one = curve.one();
        let b = curve.b_invariants();
        let k = |v: i64| one.from_i64_like(v);
        let f3 = Poly::new(vec![
            b.b8.clone(),
            k(3) * &b.b6,
            k(3) * &b.b4,
            b.b2.clone(),
            k(3),
        ]);
        let f4 = Poly::new(vec![
            b.b4.clone() * &b.b8 - b.b6.square(),
            b.b2.clone() * &b.b8 - b.b4.clone() * &b.b6,
            k(10) * &b.b8,
            k(10) * &b.b6,
            k(5) * &b.b4,
            b.b2.clone(),
            k(2),
        ]);
        let seeds = vec![
            Poly::zero(),
            Poly::constant(one.clone()),
            Poly::constant(one.clone()),
            f3,
            f4,
        ];
        DivPolyCache {
            curve: curve.clone(),
            two_torsion: curve.two_torsion_poly(),
            f: RwLock::new(seeds),
        }
    }

    pub fn curve(&self) -> &Curve<F> {
        &self.curve
    }

    /// `F(x) = psi_2^2`.
    pub fn two_torsion_poly(&self) -> &Poly<F> {
        &self.two_torsion
    }

    fn grow(&self, n: usize) {
        if self.f.read().expect("cache lock").len() > n {
            return;
        }
        let mut f = self.f.write().expect("cache lock");
        let ff = &self.two_torsion;
        let ff2 = ff * ff;
        while f.len() <= n {
            let m = f.len();
            let k = m / 2;
            let next = if m % 2 == 1 {
                let a = &f[k + 2] * &f[k].pow(3);
                let b = &f[k - 1] * &f[k + 1].pow(3);
                if k % 2 == 0 {
                    &(&ff2 * &a) - &b
                } else {
                    &a - &(&ff2 * &b)
                }
            } else {
                let a = &f[k + 2] * &f[k - 1].pow(2);
                let b = &f[k - 2] * &f[k + 1].pow(2);
                &f[k] * &(&a - &b)
            };
            f.push(next);
        }
    }

    /// The x-polynomial `f_m`.
    pub fn f(&self, m: usize) -> Poly<F> {
        self.grow(m);
        self.f.read().expect("cache lock")[m].clone()
    }

    pub fn psi(&self, m: usize) -> Psi<F> {
        Psi {
            f: self.f(m),
            y_factor: m % 2 == 0,
        }
    }

    pub fn psi_sq(&self, m: usize) -> Poly<F> {
        let f = self.f(m);
        let sq = &f * &f;
        if m % 2 == 0 {
            &sq * &self.two_torsion
        } else {
            sq
        }
    }

    /// `theta_m = x psi_m^2 - psi_{m+1} psi_{m-1}`.
    pub fn theta(&self, m: usize) -> Poly<F> {
        assert!(m >= 1, "theta_m needs m >= 1");
        let x = Poly::x(&self.curve.one());
        let prod = &self.f(m + 1) * &self.f(m - 1);
        let prod = if m % 2 == 1 {
            &prod * &self.two_torsion
        } else {
            prod
        };
        &(&x * &self.psi_sq(m)) - &prod
    }

    /// `delta_m^P = theta_m - x(P) psi_m^2`, or `psi_m^2` for P = O.
    pub fn delta_poly(&self, p: &Point<F>, m: usize) -> Poly<F> {
        match p.x() {
            None => self.psi_sq(m),
            Some(x0) => &self.theta(m) - &self.psi_sq(m).scale(x0),
        }
    }

    /// `x([m]P) = theta_m(x) / psi_m^2(x)` for x in K, None when `psi_m^2(x) = 0`.
    pub fn x_multiple(&self, x: &F, m: usize) -> Option<F> {
        self.theta(m).eval(x).div(&self.psi_sq(m).eval(x))
    }
}

#[derive(Clone, Debug)]
pub struct DeltaReport<F: Field> {
    pub m: usize,
    pub point: Point<F>,
    pub delta: Poly<F>,
    pub factors: FactorList<F>,
    /// Distinct irreducible factors.
    pub n: usize,
    pub n_with_multiplicity: usize,
}

impl<F: Field> DeltaReport<F> {
    pub fn is_irreducible(&self) -> bool {
        self.factors.is_irreducible()
    }
}

pub fn delta<F: Factorable>(
    curve: &Curve<F>,
    p: &Point<F>,
    m: usize,
    cfg: &Config,
) -> Result<DeltaReport<F>> {
    delta_cached(&DivPolyCache::new(curve), p, m, cfg)
}

pub fn delta_cached<F: Factorable>(
    cache: &DivPolyCache<F>,
    p: &Point<F>,
    m: usize,
    cfg: &Config,
) -> Result<DeltaReport<F>> {
    cache.curve().check(p)?;
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let d = cache.delta_poly(p, m);
    let factors = F::factor_poly(&d, cfg)?;
    Ok(DeltaReport {
        m,
        point: p.clone(),
        n: factors.distinct_count(),
        n_with_multiplicity: factors.count_with_multiplicity(),
        delta: d,
        factors,
    })
}

/// `D_m`: monic square-free polynomial whose roots are the x-coordinates of the
/// points of exact order m.
pub fn exact_order_poly<F: Field>(curve: &Curve<F>, m: usize) -> Result<Poly<F>> {
    exact_order_poly_cached(&DivPolyCache::new(curve), m)
}

pub fn exact_order_poly_cached<F: Field>(cache: &DivPolyCache<F>, m: usize) -> Result<Poly<F>> {
    if m < 2 {
        return Err(Error::InvalidInput("D_m needs m >= 2".into()));
    }
    let ch = cache.curve().one().characteristic();
    if ch != 0 && m as u64 % ch == 0 {
        return Err(Error::UnsupportedCharacteristic(ch));
    }
    let mut r = cache.psi_sq(m).radical()?;
    for q in prime_divisors(m) {
        let d = m / q;
        if d > 1 {
            let g = r.gcd(&cache.psi_sq(d));
            r = r.exact_div(&g)?;
        }
    }
    Ok(r.monic())
}

pub(crate) fn prime_divisors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Checks `x([m]P) = theta_m(x(P)) / psi_m^2(x(P))`, returning the common value.
pub fn check_mul_identity<F: Field>(curve: &Curve<F>, p: &Point<F>, m: usize) -> Result<(bool, F)> {
    check_mul_identity_cached(&DivPolyCache::new(curve), p, m)
}

pub fn check_mul_identity_cached<F: Field>(
    cache: &DivPolyCache<F>,
    p: &Point<F>,
    m: usize,
) -> Result<(bool, F)> {
    let curve = cache.curve();
    let mp = curve.mul(&Integer::from(m), p)?;
    let x = p
        .x()
        .ok_or_else(|| Error::InvalidInput("P must be affine".into()))?;
    let xm = mp.x().ok_or(Error::InfinityMultiple)?;
    let via_poly = cache
        .x_multiple(x, m)
        .ok_or_else(|| Error::InvalidInput("psi_m^2 vanishes at x(P)".into()))?;
    Ok((via_poly == *xm, xm.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parse_curve;
    use crate::exact::{rat, rat_int, Rational};
    use crate::field::Fp;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> Poly<Rational> {
        s.parse().unwrap()
    }

    fn e() -> Curve<Rational> {
        parse_curve("0,0,0,0,-2").unwrap()
    }

    fn p() -> Point<Rational> {
        Point::new(rat_int(3), rat_int(5))
    }

    #[test]
    fn small_division_polynomials() {
        let c = DivPolyCache::new(&e());
        assert_eq!(c.f(1), q("1"));
        assert_eq!(c.psi_sq(2), q("4*x^3 - 8"));
        assert_eq!(c.f(3), q("3*x^4 - 24*x"));
        assert_eq!(c.theta(2), q("x^4 + 16*x"));
        assert_eq!(c.theta(1), q("x"));
        assert_eq!(c.psi_sq(3), q("9*x^8 - 144*x^5 + 576*x^2"));
        // psi_2 = 2y at (3,5)
        assert_eq!(c.psi(2).eval(&e(), &p()), Some(rat_int(10)));
    }

    #[test]
    fn delta_examples() {
        let cfg = Config::default();
        let d = delta(&e(), &p(), 1, &cfg).unwrap();
        assert_eq!((d.delta, d.n), (q("x - 3"), 1));
        let d = delta(&e(), &p(), 2, &cfg).unwrap();
        assert_eq!((d.delta, d.n), (q("x^4 - 12*x^3 + 16*x + 24"), 1));
        let two = Point::new(rat(129, 100), rat(-383, 1000));
        let d = delta(&e(), &two, 2, &cfg).unwrap();
        assert_eq!(d.delta, q("x^4 - 129/25*x^3 + 16*x + 258/25"));
        assert_eq!(d.n, 2);
        assert_eq!(d.factors.factors[0].0, q("x - 3"));
        let d = delta(&e(), &Point::Infinity, 2, &cfg).unwrap();
        assert_eq!(d.delta, q("4*x^3 - 8"));
    }

    #[test]
    fn delta_three_of_p_splits_three_six() {
        // y^2 = x^3 - 2 has the rational 3-isogeny with kernel polynomial x
        let d = delta(&e(), &p(), 3, &Config::default()).unwrap();
        assert_eq!(d.factors.degrees(), vec![3, 6]);
    }

    #[test]
    fn exact_order_examples() {
        assert_eq!(exact_order_poly(&e(), 2).unwrap(), q("x^3 - 2"));
        assert_eq!(exact_order_poly(&e(), 3).unwrap(), q("x^4 - 8*x"));
        let g = parse_curve("1,2,3,5,7").unwrap();
        assert_eq!(exact_order_poly(&g, 4).unwrap().deg(), 6);
        assert_eq!(exact_order_poly(&g, 6).unwrap().deg(), (36 - 4 - 9 + 1) / 2);
        let x48 = q("x^4 - 8*x");
        assert!(x48.gcd(&x48.derivative()).is_one());
    }

    #[test]
    fn identity_examples() {
        assert_eq!(
            check_mul_identity(&e(), &p(), 2).unwrap(),
            (true, rat(129, 100))
        );
        assert_eq!(
            check_mul_identity(&e(), &p(), 1).unwrap(),
            (true, rat_int(3))
        );
        assert_eq!(
            check_mul_identity(&e(), &p(), 3).unwrap(),
            (true, rat(164323, 29241))
        );
        let c = parse_curve("0,0,0,1,0").unwrap();
        assert_eq!(
            check_mul_identity(&c, &Point::new(rat_int(0), rat_int(0)), 2),
            Err(Error::InfinityMultiple)
        );
    }

    #[test]
    fn identity_on_sample_grid() {
        let c = DivPolyCache::new(&e());
        for m in 1..=12 {
            assert!(check_mul_identity_cached(&c, &p(), m).unwrap().0, "m = {m}");
        }
        let g = parse_curve("1,-1,1,-626,6180").unwrap();
        let c = DivPolyCache::new(&g);
        let pt = Point::new(rat_int(8), rat_int(36));
        for m in 1..=8 {
            assert!(check_mul_identity_cached(&c, &pt, m).unwrap().0, "m = {m}");
        }
    }

    fn random_curve_q(rng: &mut ChaCha8Rng) -> Curve<Rational> {
        loop {
            let a: [Rational; 5] = std::array::from_fn(|_| rat_int(rng.gen_range(-9..10)));
            if let Ok(c) = Curve::new(a) {
                return c;
            }
        }
    }

    fn random_curve_fp(rng: &mut ChaCha8Rng, p: u64) -> Curve<Fp> {
        loop {
            let a: [Fp; 5] = std::array::from_fn(|_| Fp::from_u64(rng.gen_range(0..p), p));
            if let Ok(c) = Curve::new(a) {
                return c;
            }
        }
    }

    fn check_degrees<F: Field>(c: &DivPolyCache<F>, mmax: usize) {
        let ch = c.curve().one().characteristic() as usize;
        for m in 2..=mmax {
            if ch != 0 && m % ch == 0 {
                continue;
            }
            let t = c.theta(m);
            assert_eq!(c.psi_sq(m).deg(), m * m - 1);
            assert_eq!(t.deg(), m * m);
            assert!(t.is_monic());
        }
    }

    #[test]
    fn degree_invariants_on_random_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            check_degrees(&DivPolyCache::new(&random_curve_q(&mut rng)), 14);
            check_degrees(&DivPolyCache::new(&random_curve_fp(&mut rng, 10007)), 14);
        }
    }

    #[test]
    fn roots_of_delta_are_preimages_mod_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let cfg = Config::default();
        for _ in 0..20 {
            let p = [5u64, 7, 11, 13][rng.gen_range(0..4)];
            let c = random_curve_fp(&mut rng, p);
            let pts = c.points();
            let pt = &pts[rng.gen_range(0..pts.len())];
            let cache = DivPolyCache::new(&c);
            for m in 2..=4usize {
                if m as u64 % p == 0 {
                    continue;
                }
                let d = cache.delta_poly(pt, m);
                for x0 in Fp::roots(&d, &cfg).unwrap() {
                    let lifts = c.lift_x(&x0);
                    if lifts.is_empty() {
                        continue;
                    }
                    let images: Vec<_> = lifts
                        .iter()
                        .map(|r| c.mul_i64(m as i64, r).unwrap())
                        .collect();
                    assert!(images.iter().all(|q| *q == *pt || *q == c.neg(pt)));
                    assert!(images.contains(pt));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn delta_is_squarefree_off_two_torsion(seed in 0u64..10_000, m in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = 101;
            let c = random_curve_fp(&mut rng, p);
            let pts = c.points();
            let pt = &pts[rng.gen_range(0..pts.len())];
            prop_assume!(!c.is_two_torsion(pt));
            let d = DivPolyCache::new(&c).delta_poly(pt, m);
            prop_assert!(d.gcd(&d.derivative()).is_one());
            prop_assert_eq!(d.deg(), m * m);
        }

        #[test]
        fn identity_holds_mod_p(seed in 0u64..10_000, m in 1usize..11) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_curve_fp(&mut rng, 1009);
            let pts = c.points();
            let pt = &pts[1 + rng.gen_range(0..pts.len() - 1)];
            let mp = c.mul_i64(m as i64, pt).unwrap();
            let cache = DivPolyCache::new(&c);
            match mp.x() {
                None => prop_assert!(cache.psi_sq(m).eval(pt.x().unwrap()).is_zero()),
                Some(x) => {
                    let via = cache.x_multiple(pt.x().unwrap(), m);
                    prop_assert_eq!(via.as_ref(), Some(x));
                }
            }
        }
    }
}
