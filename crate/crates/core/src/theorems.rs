//! Decision procedures built on division polynomials: the prime-degree
//! trichotomy, the finer four-way split for l = 2, the composite-m classifier,
//! magnified points, the sweep over Mazur's primes, and elliptic divisibility
//! sequences with their prime censuses.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_integer::Integer as _;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::config::Config;
use crate::curve::{parse_curve, parse_point, Curve, Point};
use crate::divpoly::{prime_divisors, DivPolyCache};
use crate::error::{Error, Result};
use crate::exact::{self, Integer, Rational};
use crate::factor::Factorable;
use crate::field::{ExtField, Field, FiniteField, Fp};
use crate::isogeny::{
    divide_point_cached, division_query_with, isogeny_query_with, rational_l_isogenies_cached,
    KernelPolynomial, ReductionTable, Tri, ISOGENY_PRIMES,
};
use crate::poly::Poly;

/// Field-specific answers to the three questions every classifier asks.
/// Over finite fields everything is decided exactly; over Q the isogeny and
/// division questions go through good reduction first and may stay open.
pub trait Decide: Factorable {
    type Aux: Send + Sync;

    fn aux(curve: &Curve<Self>, cfg: &Config) -> Self::Aux;

    /// Irreducibility of `delta_m^P`, with the number of distinct factors when known.
    fn delta_irreducible(
        ctx: &Context<Self>,
        p: &Point<Self>,
        m: u64,
    ) -> Result<(Tri, Option<usize>)> {
        let d = ctx.cache.delta_poly(p, m as usize);
        let fl = Self::factor_poly(&d, &ctx.cfg)?;
        Ok((
            Tri::from_bool(fl.is_irreducible()),
            Some(fl.distinct_count()),
        ))
    }

    fn isogenies(ctx: &Context<Self>, l: u64) -> Result<(Tri, Vec<KernelPolynomial<Self>>)> {
        let ks = rational_l_isogenies_cached(&ctx.cache, l, &ctx.cfg)?;
        Ok((Tri::from_bool(!ks.is_empty()), ks))
    }

    fn division(ctx: &Context<Self>, p: &Point<Self>, l: u64) -> Result<(Tri, Vec<Point<Self>>)> {
        let qs = divide_point_cached(&ctx.cache, p, l, &ctx.cfg)?;
        Ok((Tri::from_bool(!qs.is_empty()), qs))
    }

    /// Whether `alpha_m`, the projection from the Galois image on `[m]^{-1}P`
    /// to the image on `E[m]`, is injective.
    fn alpha_is_isomorphism(ctx: &Context<Self>, p: &Point<Self>, m: u64) -> Result<Tri>;
}

/// A curve with its division-polynomial cache and per-field helpers.
pub struct Context<F: Decide> {
    pub cache: DivPolyCache<F>,
    pub aux: F::Aux,
    pub cfg: Config,
    isogeny_memo: Mutex<HashMap<u64, IsogenyAnswer<F>>>,
}

type IsogenyAnswer<F> = (Tri, Vec<KernelPolynomial<F>>);

impl<F: Decide> Context<F> {
    pub fn new(curve: &Curve<F>, cfg: &Config) -> Self {
        Context {
            cache: DivPolyCache::new(curve),
            aux: F::aux(curve, cfg),
            cfg: cfg.clone(),
            isogeny_memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn curve(&self) -> &Curve<F> {
        self.cache.curve()
    }

    /// `F::isogenies`, remembered per l since it does not depend on the point.
    pub fn isogenies(&self, l: u64) -> Result<IsogenyAnswer<F>> {
        if let Some(a) = self.isogeny_memo.lock().expect("poisoned").get(&l) {
            return Ok(a.clone());
        }
        let a = F::isogenies(self, l)?;
        self.isogeny_memo
            .lock()
            .expect("poisoned")
            .insert(l, a.clone());
        Ok(a)
    }
}

impl Decide for Rational {
    type Aux = ReductionTable;

    fn aux(curve: &Curve<Rational>, cfg: &Config) -> ReductionTable {
        ReductionTable::new(curve, cfg)
    }

    fn delta_irreducible(
        ctx: &Context<Self>,
        p: &Point<Self>,
        m: u64,
    ) -> Result<(Tri, Option<usize>)> {
        if m > ctx.cfg.exact_l_max {
            return Ok((Tri::Undetermined, None));
        }
        let d = ctx.cache.delta_poly(p, m as usize);
        let fl = Self::factor_poly(&d, &ctx.cfg)?;
        Ok((
            Tri::from_bool(fl.is_irreducible()),
            Some(fl.distinct_count()),
        ))
    }

    fn isogenies(ctx: &Context<Self>, l: u64) -> Result<(Tri, Vec<KernelPolynomial<Self>>)> {
        let q = isogeny_query_with(&ctx.aux, l, &ctx.cfg)?;
        Ok((q.status, q.kernels))
    }

    fn division(ctx: &Context<Self>, p: &Point<Self>, l: u64) -> Result<(Tri, Vec<Point<Self>>)> {
        let q = division_query_with(&ctx.aux, p, l, &ctx.cfg)?;
        Ok((q.status, q.points))
    }

    /// Deciding this over Q needs Galois groups of splitting fields.
    fn alpha_is_isomorphism(_: &Context<Self>, _: &Point<Self>, _: u64) -> Result<Tri> {
        Ok(Tri::Undetermined)
    }
}

impl Decide for Fp {
    type Aux = ();

    fn aux(_: &Curve<Fp>, _: &Config) {}

    fn alpha_is_isomorphism(ctx: &Context<Self>, p: &Point<Self>, m: u64) -> Result<Tri> {
        alpha_finite(ctx, p, m).map(Tri::from_bool)
    }
}

impl Decide for ExtField {
    type Aux = ();

    fn aux(_: &Curve<ExtField>, _: &Config) {}

    fn alpha_is_isomorphism(ctx: &Context<Self>, p: &Point<Self>, m: u64) -> Result<Tri> {
        alpha_finite(ctx, p, m).map(Tri::from_bool)
    }
}

// ---------------------------------------------------------------- Frobenius orbits

/// Orbit sizes of Frobenius on the points lying over the roots of the distinct
/// irreducible `factors`. With `paired`, both points `(x, +-y)` over a root are
/// in the set; otherwise exactly one is, and it is defined over `F_q(x)`.
pub fn frobenius_orbits<F: FiniteField>(
    factors: &[Poly<F>],
    rhs: &Poly<F>,
    paired: bool,
) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for g in factors {
        let d = g.deg() as u64;
        if !paired {
            out.push(d);
            continue;
        }
        let r = rhs.rem(g)?;
        if r.is_zero() {
            out.push(d);
            continue;
        }
        let q = g.lc().expect("nonzero").order();
        let e: BigUint = (num_traits::pow(q, d as usize) - 1u32) >> 1;
        if r.powmod(&e, g)?.is_one() {
            out.extend([d, d]);
        } else {
            out.push(2 * d);
        }
    }
    Ok(out)
}

fn lcm_all(v: &[u64]) -> u64 {
    v.iter().fold(1, |a, &b| a.lcm(&b))
}

fn distinct_factors<F: Factorable>(f: &Poly<F>, cfg: &Config) -> Result<Vec<Poly<F>>> {
    Ok(F::factor_poly(f, cfg)?
        .factors
        .into_iter()
        .map(|(g, _)| g)
        .collect())
}

/// Frobenius orbit sizes on `[m]^{-1}P`.
pub fn preimage_orbits<F: Factorable + FiniteField>(
    cache: &DivPolyCache<F>,
    p: &Point<F>,
    m: u64,
    cfg: &Config,
) -> Result<Vec<u64>> {
    let curve = cache.curve();
    let fs = distinct_factors(&cache.delta_poly(p, m as usize), cfg)?;
    let mut orbits = frobenius_orbits(&fs, &curve.two_torsion_poly(), curve.is_two_torsion(p))?;
    if p.is_infinity() {
        orbits.push(1);
    }
    Ok(orbits)
}

/// Frobenius orbit sizes on `E[m] \ {O}`.
pub fn torsion_orbits<F: Factorable + FiniteField>(
    cache: &DivPolyCache<F>,
    m: u64,
    cfg: &Config,
) -> Result<Vec<u64>> {
    let rad = cache.psi_sq(m as usize).radical()?;
    let fs = distinct_factors(&rad, cfg)?;
    frobenius_orbits(&fs, &cache.curve().two_torsion_poly(), true)
}

/// Over a finite field both Galois images are cyclic, generated by Frobenius,
/// and `alpha_m` is onto; it is an isomorphism iff Frobenius has the same order
/// on `[m]^{-1}P` as on `E[m]`.
fn alpha_finite<F: Decide + FiniteField>(ctx: &Context<F>, p: &Point<F>, m: u64) -> Result<bool> {
    let a = lcm_all(&preimage_orbits(&ctx.cache, p, m, &ctx.cfg)?);
    let b = lcm_all(&torsion_orbits(&ctx.cache, m, &ctx.cfg)?);
    Ok(a == b)
}

// ---------------------------------------------------------------- prime degree

/// `P = phi_hat(Q)` for a K-rational Q on the curve 2-isogenous to E through
/// the rational 2-torsion point `(x0, .)`.
#[derive(Clone, Debug)]
pub struct TwoIsogenyWitness<F: Field> {
    pub x0: F,
    /// The isogenous curve, `Y^2 = X^3 - 2a X^2 + (a^2 - 4b) X`.
    pub isogenous: Curve<F>,
    pub q: Point<F>,
}

#[derive(Clone, Debug)]
pub struct PrimeVerdict<F: Field> {
    pub l: u64,
    /// Case i.
    pub delta_irreducible: Tri,
    pub delta_factor_count: Option<usize>,
    /// Case ii.
    pub rational_isogeny: Tri,
    pub kernel: Option<KernelPolynomial<F>>,
    /// Case iii.
    pub rational_preimage: Tri,
    pub preimage: Option<Point<F>>,
    pub two_torsion: bool,
    /// For l = 2 only: P is the dual-isogeny image of a rational point.
    pub dual_image: Option<Tri>,
    pub dual_witness: Option<TwoIsogenyWitness<F>>,
}

fn any_of(flags: &[Tri]) -> Tri {
    if flags.contains(&Tri::True) {
        Tri::True
    } else if flags.contains(&Tri::Undetermined) {
        Tri::Undetermined
    } else {
        Tri::False
    }
}

impl<F: Field> PrimeVerdict<F> {
    /// The trichotomy: irreducible, or a rational l-isogeny, or a rational l-th part.
    pub fn trichotomy(&self) -> Tri {
        any_of(&[
            self.delta_irreducible,
            self.rational_isogeny,
            self.rational_preimage,
        ])
    }

    /// The four-way split for l = 2, with 2-torsion as its own case.
    pub fn two_isogeny_cases(&self) -> Option<Tri> {
        let iv = self.dual_image?;
        Some(any_of(&[
            self.delta_irreducible,
            Tri::from_bool(self.two_torsion),
            self.rational_preimage,
            iv,
        ]))
    }

    /// Roman numerals of the cases that hold.
    pub fn cases(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.delta_irreducible.is_true() {
            out.push("i");
        }
        if self.rational_isogeny.is_true() {
            out.push("ii");
        }
        if self.rational_preimage.is_true() {
            out.push("iii");
        }
        if self.dual_image == Some(Tri::True) {
            out.push("iv");
        }
        out
    }
}

fn check_char(one_char: u64, n: u64) -> Result<()> {
    if one_char != 0 && n % one_char == 0 {
        return Err(Error::UnsupportedCharacteristic(one_char));
    }
    Ok(())
}

pub fn classify_prime<F: Decide>(
    ctx: &Context<F>,
    p: &Point<F>,
    l: u64,
) -> Result<PrimeVerdict<F>> {
    let curve = ctx.curve();
    curve.check(p)?;
    if !exact::is_prime_u64(l) {
        return Err(Error::InvalidInput(format!("{l} is not prime")));
    }
    check_char(curve.one().characteristic(), l)?;
    let (delta_irreducible, delta_factor_count) = F::delta_irreducible(ctx, p, l)?;
    let (rational_isogeny, kernels) = ctx.isogenies(l)?;
    let (rational_preimage, preimages) = F::division(ctx, p, l)?;
    let (dual_image, dual_witness) = if l == 2 {
        let w = dual_two_isogeny_preimage(curve, p, &ctx.cfg)?;
        (Some(Tri::from_bool(w.is_some())), w)
    } else {
        (None, None)
    };
    Ok(PrimeVerdict {
        l,
        delta_irreducible,
        delta_factor_count,
        rational_isogeny,
        kernel: kernels.into_iter().next(),
        rational_preimage,
        preimage: preimages.into_iter().next(),
        two_torsion: curve.is_two_torsion(p),
        dual_image,
        dual_witness,
    })
}

/// Searches each rational 2-torsion point T for Q on `E/<T>` with `phi_hat(Q) = P`.
///
/// After completing the square and moving T to the origin the curve reads
/// `y^2 = x^3 + a x^2 + b x`, the isogenous curve is
/// `Y^2 = X^3 - 2a X^2 + (a^2 - 4b) X`, and
/// `phi_hat(X, Y) = (Y^2 / 4X^2, Y (a^2 - 4b - X^2) / 8X^2)`.
pub fn dual_two_isogeny_preimage<F: Factorable>(
    curve: &Curve<F>,
    p: &Point<F>,
    cfg: &Config,
) -> Result<Option<TwoIsogenyWitness<F>>> {
    let (px, py) = match p {
        Point::Infinity => return Ok(None),
        Point::Affine { x, y } => (x, y),
    };
    let one = curve.one();
    let k = |v: i64| one.from_i64_like(v);
    let half = k(2).inv().ok_or(Error::UnsupportedCharacteristic(2))?;
    let b = curve.b_invariants();
    let v = py.clone() + &((curve.a1.clone() * px + &curve.a3) * &half);
    for x0 in F::roots(&curve.two_torsion_poly(), cfg)? {
        let a = k(3) * &x0 + b.b2.clone() * &half * &half;
        let bb = k(3) * &x0.square() + b.b2.clone() * &half * &x0 + b.b4.clone() * &half;
        let u = px.clone() - &x0;
        let c = a.square() - k(4) * &bb;
        let s = k(2) * &a + k(4) * &u;
        let Some(r) = (s.square() - k(4) * &c).sqrt() else {
            continue;
        };
        let isogenous = Curve::new([
            one.zero_like(),
            -(k(2) * &a),
            one.zero_like(),
            c.clone(),
            one.zero_like(),
        ])?;
        for xx in [(s.clone() + &r) * &half, (s.clone() - &r) * &half] {
            if xx.is_zero() {
                continue;
            }
            let rhs = xx.square() * &xx - k(2) * &a * &xx.square() + c.clone() * &xx;
            let Some(yy) = rhs.sqrt() else { continue };
            for y in [yy.clone(), -yy] {
                let x2 = xx.square();
                let inv = x2.inv().expect("nonzero");
                let ix = y.square() * &inv * &half * &half;
                let iy = y.clone() * &(c.clone() - &x2) * &inv * &half * &half * &half;
                if ix == u && iy == v {
                    return Ok(Some(TwoIsogenyWitness {
                        x0,
                        isogenous,
                        q: Point::new(xx.clone(), y),
                    }));
                }
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------- composite m

#[derive(Clone, Debug)]
pub struct CompositeVerdict {
    pub m: u64,
    /// Case i.
    pub delta_irreducible: Tri,
    /// Case ii, with the first proper divisor whose delta factors.
    pub divisor_factors: Tri,
    pub divisor: Option<u64>,
    /// Case iii, with the prime.
    pub rational_isogeny: Tri,
    pub isogeny_prime: Option<u64>,
    /// Case iv.
    pub alpha_isomorphism: Tri,
    pub two_torsion: bool,
}

impl CompositeVerdict {
    pub fn holds(&self) -> Tri {
        any_of(&[
            self.delta_irreducible,
            self.divisor_factors,
            self.rational_isogeny,
            self.alpha_isomorphism,
        ])
    }

    pub fn flags(&self) -> [Tri; 4] {
        [
            self.delta_irreducible,
            self.divisor_factors,
            self.rational_isogeny,
            self.alpha_isomorphism,
        ]
    }
}

fn proper_divisors(m: u64) -> Vec<u64> {
    (2..m).filter(|d| m % d == 0).collect()
}

pub fn classify_composite<F: Decide>(
    ctx: &Context<F>,
    p: &Point<F>,
    m: u64,
) -> Result<CompositeVerdict> {
    let curve = ctx.curve();
    curve.check(p)?;
    if m < 4 || exact::is_prime_u64(m) {
        return Err(Error::InvalidInput(format!("{m} is not composite")));
    }
    for q in prime_divisors(m as usize) {
        check_char(curve.one().characteristic(), q as u64)?;
    }
    let (delta_irreducible, _) = F::delta_irreducible(ctx, p, m)?;
    let mut divisor_flags = Vec::new();
    let mut divisor = None;
    for d in proper_divisors(m) {
        let (irr, _) = F::delta_irreducible(ctx, p, d)?;
        let t = match irr {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Undetermined => Tri::Undetermined,
        };
        divisor_flags.push(t);
        if t == Tri::True {
            divisor = Some(d);
            break;
        }
    }
    let mut iso_flags = Vec::new();
    let mut isogeny_prime = None;
    for l in prime_divisors(m as usize) {
        let (t, _) = ctx.isogenies(l as u64)?;
        iso_flags.push(t);
        if t == Tri::True {
            isogeny_prime = Some(l as u64);
            break;
        }
    }
    Ok(CompositeVerdict {
        m,
        delta_irreducible,
        divisor_factors: any_of(&divisor_flags),
        divisor,
        rational_isogeny: any_of(&iso_flags),
        isogeny_prime,
        alpha_isomorphism: F::alpha_is_isomorphism(ctx, p, m)?,
        two_torsion: curve.is_two_torsion(p),
    })
}

/// Splits `m = d1 d2` into coprime proper factors, smallest d1 first.
pub fn coprime_splits(m: u64) -> Vec<(u64, u64)> {
    (2..m)
        .filter(|&d| m % d == 0 && d < m / d && d.gcd(&(m / d)) == 1)
        .map(|d| (d, m / d))
        .collect()
}

/// For coprime `m = d1 d2`: if `delta_m` factors then `delta_{d1}` or
/// `delta_{d2}` does. Returns the splits where the implication fails.
pub fn coprime_violations<F: Decide>(
    ctx: &Context<F>,
    p: &Point<F>,
    m: u64,
) -> Result<Vec<(u64, u64)>> {
    let (irr, _) = F::delta_irreducible(ctx, p, m)?;
    if irr != Tri::False {
        return Ok(Vec::new());
    }
    let mut bad = Vec::new();
    for (d1, d2) in coprime_splits(m) {
        let (a, _) = F::delta_irreducible(ctx, p, d1)?;
        let (b, _) = F::delta_irreducible(ctx, p, d2)?;
        if a == Tri::True && b == Tri::True {
            bad.push((d1, d2));
        }
    }
    Ok(bad)
}

// ---------------------------------------------------------------- over Q

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnifiedReport {
    pub magnified: bool,
    /// Smallest m with `delta_m^P` reducible.
    pub first_m: Option<u64>,
    /// m values the scan could not settle.
    pub undetermined: Vec<u64>,
    pub m_max: u64,
}

/// Scans `m = 2..=m_max` for a reducible `delta_m^P`. Primes beyond the exact
/// limit are settled by the prime-degree trichotomy and Mazur's list, and
/// products of coprime factors by the coprime-divisor theorem.
pub fn is_magnified(
    ctx: &Context<Rational>,
    p: &Point<Rational>,
    m_max: u64,
) -> Result<MagnifiedReport> {
    let curve = ctx.curve();
    curve.check(p)?;
    if m_max < 2 {
        return Err(Error::InvalidInput("m_max must be at least 2".into()));
    }
    let mut report = MagnifiedReport {
        magnified: false,
        first_m: None,
        undetermined: Vec::new(),
        m_max,
    };
    if curve.is_two_torsion(p) {
        // 3P = P
        report.magnified = true;
        report.first_m = Some(3);
        return Ok(report);
    }
    let mut irreducible = vec![false; m_max as usize + 1];
    for m in 2..=m_max {
        let reducible = if exact::is_prime_u64(m) {
            prime_delta_reducible(ctx, p, m)?
        } else if coprime_splits(m)
            .iter()
            .any(|&(a, b)| irreducible[a as usize] && irreducible[b as usize])
        {
            Tri::False
        } else {
            match Rational::delta_irreducible(ctx, p, m)?.0 {
                Tri::True => Tri::False,
                Tri::False => Tri::True,
                Tri::Undetermined => Tri::Undetermined,
            }
        };
        match reducible {
            Tri::True => {
                report.magnified = true;
                report.first_m = Some(m);
                return Ok(report);
            }
            Tri::False => irreducible[m as usize] = true,
            Tri::Undetermined => report.undetermined.push(m),
        }
    }
    Ok(report)
}

fn prime_delta_reducible(ctx: &Context<Rational>, p: &Point<Rational>, l: u64) -> Result<Tri> {
    if l <= ctx.cfg.exact_l_max {
        return Ok(match Rational::delta_irreducible(ctx, p, l)?.0 {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Undetermined => Tri::Undetermined,
        });
    }
    let (div, _) = Rational::division(ctx, p, l)?;
    if div == Tri::True {
        return Ok(Tri::True);
    }
    // no rational l-isogeny for l outside Mazur's list
    let iso = if ISOGENY_PRIMES.contains(&l) {
        ctx.isogenies(l)?.0
    } else {
        Tri::False
    };
    Ok(if div == Tri::False && iso == Tri::False {
        Tri::False
    } else {
        Tri::Undetermined
    })
}

#[derive(Clone, Debug)]
pub struct MazurEntry {
    pub l: u64,
    pub is_l_times_rational: Tri,
    pub division_witness: Option<Point<Rational>>,
    pub division_proof_prime: Option<u64>,
    pub rational_l_isogeny: Tri,
    pub isogeny_proof_prime: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MazurConclusion {
    /// No listed prime admits a rational division or a rational isogeny.
    AllIrreducible,
    /// Listed primes where `delta_l^P` may factor.
    Suspects(Vec<u64>),
}

impl fmt::Display for MazurConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MazurConclusion::AllIrreducible => {
                f.write_str("delta_l^P irreducible for all primes l")
            }
            MazurConclusion::Suspects(ls) => {
                let v: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                write!(f, "suspect l: {}", v.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct MazurReport {
    pub entries: Vec<MazurEntry>,
    pub torsion: bool,
    pub conclusion: MazurConclusion,
}

/// Division and isogeny status at every prime of Mazur's list. When all of them
/// are ruled out, `delta_l^P` is irreducible for every l in the list, and for a
/// prime outside it `delta_l^P` can only factor if P is l times a rational point.
pub fn mazur_sweep(ctx: &Context<Rational>, p: &Point<Rational>) -> Result<MazurReport> {
    let curve = ctx.curve();
    curve.check(p)?;
    let torsion = curve.is_torsion(p);
    let entries: Vec<MazurEntry> = ISOGENY_PRIMES
        .par_iter()
        .map(|&l| -> Result<MazurEntry> {
            let d = division_query_with(&ctx.aux, p, l, &ctx.cfg)?;
            let i = isogeny_query_with(&ctx.aux, l, &ctx.cfg)?;
            Ok(MazurEntry {
                l,
                is_l_times_rational: d.status,
                division_witness: d.points.into_iter().next(),
                division_proof_prime: d.proof_prime,
                rational_l_isogeny: i.status,
                isogeny_proof_prime: i.proof_prime,
            })
        })
        .collect::<Result<_>>()?;
    let suspects: Vec<u64> = entries
        .iter()
        .filter(|e| e.is_l_times_rational != Tri::False || e.rational_l_isogeny != Tri::False)
        .map(|e| e.l)
        .collect();
    let conclusion = if suspects.is_empty() {
        MazurConclusion::AllIrreducible
    } else {
        MazurConclusion::Suspects(suspects)
    };
    Ok(MazurReport {
        entries,
        torsion,
        conclusion,
    })
}

#[derive(Clone, Debug)]
pub struct EdsTerm {
    pub k: u64,
    pub point: Point<Rational>,
    /// `x(kP) = A_k / B_k^2`.
    pub b: Integer,
    /// Distinct primes of `B_k` outside S.
    pub primes: Vec<Integer>,
    /// Unfactored part when the factoring budget ran out.
    pub unfactored: Option<Integer>,
}

impl EdsTerm {
    pub fn count(&self) -> usize {
        self.primes.len()
    }

    pub fn complete(&self) -> bool {
        self.unfactored.is_none()
    }
}

fn census(
    b: &Integer,
    exclude: &[Integer],
    cfg: &Config,
) -> Result<(Vec<Integer>, Option<Integer>)> {
    let (f, rest) = exact::partial_factor(b, cfg.rho_budget)?;
    let primes = f
        .factors
        .into_iter()
        .map(|(q, _)| q)
        .filter(|q| !exclude.contains(q))
        .collect();
    Ok((primes, rest))
}

/// Terms `k = 1..=n` of the elliptic divisibility sequence of P.
pub fn eds(
    curve: &Curve<Rational>,
    p: &Point<Rational>,
    n: u64,
    exclude: &[Integer],
    cfg: &Config,
) -> Result<Vec<EdsTerm>> {
    curve.check(p)?;
    if curve.is_torsion(p) {
        return Err(Error::InvalidInput("the point is torsion".into()));
    }
    let mut points = Vec::with_capacity(n as usize);
    let mut acc = p.clone();
    for _ in 0..n {
        points.push(acc.clone());
        acc = curve.add(&acc, p)?;
    }
    points
        .into_par_iter()
        .enumerate()
        .map(|(i, pt)| {
            let parts = pt.x_parts()?;
            let g = (&parts.a * &parts.c).gcd(&parts.b);
            if !g.is_one() {
                return Err(Error::NonStandardDenominator(format!(
                    "B_{} shares a factor {g} with A*C",
                    i + 1
                )));
            }
            let (primes, unfactored) = census(&parts.b, exclude, cfg)?;
            Ok(EdsTerm {
                k: i as u64 + 1,
                point: pt,
                b: parts.b,
                primes,
                unfactored,
            })
        })
        .collect()
}

/// `B_1, ..., B_n` alone, without factoring.
pub fn eds_denominators(
    curve: &Curve<Rational>,
    p: &Point<Rational>,
    n: u64,
) -> Result<Vec<Integer>> {
    curve.check(p)?;
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = p.clone();
    for k in 1..=n {
        if acc.is_infinity() {
            return Err(Error::InvalidInput(format!(
                "{k}P is the point at infinity"
            )));
        }
        out.push(acc.x_parts()?.b);
        acc = curve.add(&acc, p)?;
    }
    Ok(out)
}

/// Pairs `(j, k)` with `j k <= n` and `B_j` not dividing `B_{jk}`.
pub fn divisibility_failures(b: &[Integer]) -> Vec<(u64, u64)> {
    let n = b.len() as u64;
    let mut bad = Vec::new();
    for j in 1..=n {
        for k in 1..=n / j {
            if !(&b[(j * k) as usize - 1] % &b[j as usize - 1]).is_zero() {
                bad.push((j, k));
            }
        }
    }
    bad
}

/// Pairs `(j, k)` with `j k <= n` and `B_j` not dividing `B_{jk}`.
pub fn eds_divisibility_failures(terms: &[EdsTerm]) -> Vec<(u64, u64)> {
    let b: Vec<Integer> = terms.iter().map(|t| t.b.clone()).collect();
    divisibility_failures(&b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusVerdict {
    Consistent,
    /// Fewer primes than factors: allowed for points of small height.
    ExceptionLowHeight,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub m: u64,
    pub point: Point<Rational>,
    /// Distinct irreducible factors of `delta_m^P`.
    pub n: usize,
    /// Primes outside S where x(P) has a pole.
    pub primes: Vec<Integer>,
    pub unfactored: Option<Integer>,
    pub naive_height: f64,
    pub verdict: CensusVerdict,
}

/// Compares the number of factors of `delta_m^P` with the number of primes in
/// the denominator of x(P).
pub fn prime_census(
    curve: &Curve<Rational>,
    p: &Point<Rational>,
    m: u64,
    exclude: &[Integer],
    cfg: &Config,
) -> Result<CensusReport> {
    curve.check(p)?;
    let rep = crate::divpoly::delta(curve, p, m as usize, cfg)?;
    let parts = p.x_parts()?;
    let (primes, unfactored) = census(&parts.b, exclude, cfg)?;
    let verdict = if primes.len() >= rep.n {
        CensusVerdict::Consistent
    } else {
        CensusVerdict::ExceptionLowHeight
    };
    Ok(CensusReport {
        m,
        point: p.clone(),
        n: rep.n,
        primes,
        unfactored,
        naive_height: p.naive_height(),
        verdict,
    })
}

/// `prime_census` on `P_k = [mult](k P)` for `k = 1..=count`, in index order.
pub fn census_sweep(
    curve: &Curve<Rational>,
    p: &Point<Rational>,
    mult: u64,
    m: u64,
    count: u64,
    exclude: &[Integer],
    cfg: &Config,
) -> Result<Vec<CensusReport>> {
    (1..=count)
        .into_par_iter()
        .map(|k| {
            let pk = curve.mul(&Integer::from(k * mult), p)?;
            prime_census(curve, &pk, m, exclude, cfg)
        })
        .collect()
}

// ---------------------------------------------------------------- fixtures

#[derive(Clone, Debug)]
pub struct Fixture {
    pub label: String,
    pub curve: Curve<Rational>,
    pub point: Point<Rational>,
}

/// Lines `label | a1,a2,a3,a4,a6 | x,y`; `#` starts a comment.
pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "fixture line {}: expected `label | curve | point`",
                i + 1
            )));
        }
        let wrap = |e: Error| Error::InvalidInput(format!("fixture line {}: {e}", i + 1));
        let curve = parse_curve(fields[1]).map_err(wrap)?;
        let point = parse_point(fields[2]).map_err(wrap)?;
        curve.check(&point).map_err(wrap)?;
        out.push(Fixture {
            label: fields[0].to_string(),
            curve,
            point,
        });
    }
    Ok(out)
}

pub fn load_fixtures(path: &Path) -> Result<Vec<Fixture>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    parse_fixtures(&text)
}

pub fn find_fixture<'a>(fixtures: &'a [Fixture], label: &str) -> Option<&'a Fixture> {
    fixtures.iter().find(|f| f.label == label)
}
