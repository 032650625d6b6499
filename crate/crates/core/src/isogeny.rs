//! Rational isogenies of prime degree: kernel polynomials, Velu's formulas,
//! isogeny classes, and division of a point by a prime.

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::config::Config;
use crate::curve::{Curve, Point};
use crate::divpoly::DivPolyCache;
use crate::error::{Error, Result};
use crate::exact::{self, Integer, Rational};
use crate::factor::Factorable;
use crate::field::{Field, Fp};
use crate::poly::Poly;

/// Primes that can be the degree of a rational isogeny of a curve over Q.
pub const ISOGENY_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 37, 43, 67, 163];

/// True, false, or not decided by the available checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Undetermined,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Tri::True
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Undetermined => "undetermined",
        })
    }
}

/// Monic polynomial whose roots are the x-coordinates of the nonzero points of
/// a cyclic subgroup of prime order `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPolynomial<F: Field> {
    pub f: Poly<F>,
    pub l: u64,
}

#[derive(Clone, Debug)]
pub struct Isogeny<F: Field> {
    pub domain: Curve<F>,
    pub codomain: Curve<F>,
    pub kernel: KernelPolynomial<F>,
    pub degree: u64,
    /// x-map numerator and denominator: `X = num(x) / den(x)`, `den = f^2`.
    pub x_num: Poly<F>,
    pub x_den: Poly<F>,
}

fn half_degree(l: u64) -> usize {
    if l == 2 {
        1
    } else {
        ((l - 1) / 2) as usize
    }
}

/// Checks that `f` is a kernel polynomial of degree `l` on `curve`: the right
/// degree, a divisor of the l-division polynomial, and closed under the
/// x-coordinate maps of `[k]` for `2 <= k <= (l-1)/2`.
pub fn check_kernel<F: Field>(cache: &DivPolyCache<F>, f: &Poly<F>, l: u64) -> Result<()> {
    let curve = cache.curve();
    if !f.is_monic() || f.deg() != half_degree(l) {
        return Err(Error::NotAKernel(format!(
            "expected a monic polynomial of degree {}",
            half_degree(l)
        )));
    }
    if !exact::is_prime_u64(l) {
        return Err(Error::InvalidInput(format!("{l} is not prime")));
    }
    let ch = curve.one().characteristic();
    if ch != 0 && l % ch == 0 {
        return Err(Error::UnsupportedCharacteristic(ch));
    }
    let host = if l == 2 {
        cache.two_torsion_poly().clone()
    } else {
        cache.f(l as usize)
    };
    if !f.divides(&host) {
        return Err(Error::NotAKernel(
            "does not divide the l-division polynomial".into(),
        ));
    }
    for k in 2..=half_degree(l) {
        let den = cache
            .psi_sq(k)
            .rem(f)?
            .inv_mod(f)
            .ok_or_else(|| Error::NotAKernel(format!("[{k}] sends a root to O")))?;
        let image = cache.theta(k).rem(f)?.mulmod(&den, f)?;
        if !f.compose_mod(&image, f)?.is_zero() {
            return Err(Error::NotAKernel(format!("roots not closed under [{k}]")));
        }
    }
    Ok(())
}

/// Velu's formulas from the power sums of the kernel roots.
pub fn velu<F: Field>(curve: &Curve<F>, kernel: &KernelPolynomial<F>) -> Result<Isogeny<F>> {
    let cache = DivPolyCache::new(curve);
    check_kernel(&cache, &kernel.f, kernel.l)?;
    let one = curve.one();
    let k = |v: i64| one.from_i64_like(v);
    let b = curve.b_invariants();
    let f = &kernel.f;
    let d = f.deg();
    let c = |i: usize| -> F {
        if i <= d {
            f.coeffs()[d - i].clone()
        } else {
            one.zero_like()
        }
    };
    // elementary symmetric functions and power sums of the roots
    let e1 = -c(1);
    let e2 = if d >= 2 { c(2) } else { one.zero_like() };
    let e3 = if d >= 3 { -c(3) } else { one.zero_like() };
    let p1 = e1.clone();
    let p2 = e1.square() - k(2) * &e2;
    let p3 = e1.square() * &e1 - k(3) * &e1 * &e2 + k(3) * &e3;
    let (v, w, g) = if kernel.l == 2 {
        let half = k(2).inv().expect("odd characteristic");
        let x0 = p1.clone();
        let v = (k(6) * &x0.square() + b.b2.clone() * &x0 + &b.b4) * &half;
        let w = x0 * &v;
        let g = Poly::new(vec![b.b4.clone() * &half, b.b2.clone() * &half, k(3)]);
        (v, w, g)
    } else {
        let dd = k(d as i64);
        let v = k(6) * &p2 + b.b2.clone() * &p1 + dd.clone() * &b.b4;
        let w = k(10) * &p3 + k(2) * &b.b2 * &p2 + k(3) * &b.b4 * &p1 + dd * &b.b6;
        let g = Poly::new(vec![b.b4.clone(), b.b2.clone(), k(6)]);
        (v, w, g)
    };
    let codomain = Curve::new([
        curve.a1.clone(),
        curve.a2.clone(),
        curve.a3.clone(),
        curve.a4.clone() - k(5) * &v,
        curve.a6.clone() - b.b2.clone() * &v - k(7) * &w,
    ])?;
    // X = x + N_v/f - (N_u/f)'
    let df = f.derivative();
    let nv = (&g * &df).rem(f)?;
    let nu = if kernel.l == 2 {
        Poly::zero()
    } else {
        (&curve.two_torsion_poly() * &df).rem(f)?
    };
    let x = Poly::x(&one);
    let ff = f * f;
    let num = &(&(&x * &ff) + &(&nv * f)) - &(&(&nu.derivative() * f) - &(&nu * &df));
    let iso = Isogeny {
        domain: curve.clone(),
        codomain,
        kernel: kernel.clone(),
        degree: kernel.l,
        x_num: num,
        x_den: ff,
    };
    if !iso.x_map_is_consistent() {
        return Err(Error::NotAKernel(
            "x-map does not land on the codomain".into(),
        ));
    }
    Ok(iso)
}

impl<F: Field> Isogeny<F> {
    /// `F(x) (N'D - ND')^2 = D (4N^3 + B2 N^2 D + 2 B4 N D^2 + B6 D^3)`, i.e. the
    /// x-map with its invariant-differential y-map lands on the codomain.
    pub fn x_map_is_consistent(&self) -> bool {
        let (n, d) = (&self.x_num, &self.x_den);
        let one = self.domain.one();
        let k = |v: i64| Poly::constant(one.from_i64_like(v));
        let b = self.codomain.b_invariants();
        let wr = &(&n.derivative() * d) - &(n * &d.derivative());
        let lhs = &self.domain.two_torsion_poly() * &(&wr * &wr);
        let d2 = d * d;
        let n2 = n * n;
        let cubic = &(&(&k(4) * &(&n2 * n)) + &(&n2 * d).scale(&b.b2))
            + &(&(&(n * &d2).scale(&b.b4) * &k(2)) + &(&d2 * d).scale(&b.b6));
        lhs == d * &cubic
    }

    /// Image of a point; the maps are evaluated in any field `G` the
    /// coefficients embed into.
    pub fn push_in<G: Field>(
        &self,
        embed: impl Fn(&F) -> G,
        codomain: &Curve<G>,
        q: &Point<G>,
    ) -> Point<G> {
        let (x, y) = match q {
            Point::Infinity => return Point::Infinity,
            Point::Affine { x, y } => (x, y),
        };
        let n = self.x_num.map(&embed);
        let d = self.x_den.map(&embed);
        let dv = d.eval(x);
        if dv.is_zero() {
            return Point::Infinity;
        }
        let dinv = dv.inv().expect("nonzero");
        let xx = n.eval(x) * &dinv;
        let dx =
            (n.derivative().eval(x) * &dv - n.eval(x) * &d.derivative().eval(x)) * &dinv * &dinv;
        let two = x.from_i64_like(2);
        let psi2 = two.clone() * y + codomain.a1.clone() * x + &codomain.a3;
        let yy = (psi2 * &dx - codomain.a1.clone() * &xx - &codomain.a3)
            * &two.inv().expect("odd characteristic");
        Point::new(xx, yy)
    }

    pub fn push(&self, q: &Point<F>) -> Point<F> {
        self.push_in(|c| c.clone(), &self.codomain, q)
    }
}

/// Kernel polynomials of all rational cyclic l-isogenies, by exact factoring.
/// Over Q this needs `l <= cfg.exact_l_max`; see [`isogeny_query_q`].
pub fn rational_l_isogenies<F: Factorable>(
    curve: &Curve<F>,
    l: u64,
    cfg: &Config,
) -> Result<Vec<KernelPolynomial<F>>> {
    rational_l_isogenies_cached(&DivPolyCache::new(curve), l, cfg)
}

pub fn rational_l_isogenies_cached<F: Factorable>(
    cache: &DivPolyCache<F>,
    l: u64,
    cfg: &Config,
) -> Result<Vec<KernelPolynomial<F>>> {
    let curve = cache.curve();
    if !exact::is_prime_u64(l) {
        return Err(Error::InvalidInput(format!("{l} is not prime")));
    }
    let ch = curve.one().characteristic();
    if ch != 0 && l % ch == 0 {
        return Err(Error::UnsupportedCharacteristic(ch));
    }
    if ch == 0 && l > cfg.exact_l_max {
        return Err(Error::Undetermined(format!(
            "factoring the {l}-division polynomial over Q exceeds the configured limit l <= {}",
            cfg.exact_l_max
        )));
    }
    if l == 2 {
        let roots = F::roots(cache.two_torsion_poly(), cfg)?;
        return Ok(roots
            .iter()
            .map(|r| KernelPolynomial {
                f: Poly::linear_root(r),
                l: 2,
            })
            .collect());
    }
    let d = half_degree(l);
    let fl = cache.f(l as usize);
    let factors = F::factor_poly(&fl, cfg)?;
    let mut out: Vec<KernelPolynomial<F>> = Vec::new();
    for (g, _) in &factors.factors {
        if g.deg() > d || out.iter().any(|k| g.divides(&k.f)) {
            continue;
        }
        if let Some(h) = subgroup_poly(cache, g, d)? {
            out.push(KernelPolynomial { f: h, l });
        }
    }
    out.sort_by_cached_key(|k| k.f.to_string());
    Ok(out)
}

/// For T a root of the irreducible `g`, the polynomial prod_{k=1..d} (X - x([k]T))
/// if its coefficients lie in K, i.e. if the subgroup generated by T is rational.
fn subgroup_poly<F: Field>(
    cache: &DivPolyCache<F>,
    g: &Poly<F>,
    d: usize,
) -> Result<Option<Poly<F>>> {
    let one = cache.curve().one();
    let xbar = Poly::x(&one).rem(g)?;
    let mut xs = vec![xbar];
    for k in 2..=d {
        let Some(den) = cache.psi_sq(k).rem(g)?.inv_mod(g) else {
            return Ok(None);
        };
        xs.push(cache.theta(k).rem(g)?.mulmod(&den, g)?);
    }
    // coefficients of prod (X - a_k) as residues mod g, low degree first
    let mut prod: Vec<Poly<F>> = vec![Poly::constant(one.clone())];
    for a in &xs {
        let mut next = vec![Poly::zero(); prod.len() + 1];
        for (i, c) in prod.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = (&next[i] - &c.mulmod(a, g)?).rem(g)?;
        }
        prod = next;
    }
    if prod.iter().any(|c| c.deg() > 0) {
        return Ok(None);
    }
    Ok(Some(Poly::new(
        prod.iter()
            .map(|c| {
                c.coeffs()
                    .first()
                    .cloned()
                    .unwrap_or_else(|| one.zero_like())
            })
            .collect(),
    )))
}

/// Whether some F_q-rational l-isogeny exists, from the characteristic polynomial
/// of Frobenius: it does iff `X^2 - a X + q` has a root modulo l.
pub fn frobenius_has_l_isogeny(trace: i64, q: u64, l: u64) -> bool {
    let li = l as i64;
    (0..li).any(|x| (x * x - trace * x + (q % l) as i64).rem_euclid(li) == 0)
}

/// Reduction of a curve over Q at a good prime, with its point count.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub p: u64,
    pub curve: Curve<Fp>,
    pub order: u64,
}

impl Reduction {
    pub fn trace(&self) -> i64 {
        self.p as i64 + 1 - self.order as i64
    }
}

/// Reductions of one curve at the primes `5 <= p <= cfg.reduction_prime_limit`,
/// computed on first use and shared between queries (and threads).
pub struct ReductionTable {
    curve: Curve<Rational>,
    primes: Vec<u64>,
    entries: Vec<OnceLock<Option<Reduction>>>,
}

impl ReductionTable {
    pub fn new(curve: &Curve<Rational>, cfg: &Config) -> Self {
        let primes: Vec<u64> = exact::small_primes(cfg.reduction_prime_limit as u32)
            .into_iter()
            .map(u64::from)
            .filter(|&p| p >= 5)
            .collect();
        let entries = primes.iter().map(|_| OnceLock::new()).collect();
        ReductionTable {
            curve: curve.clone(),
            primes,
            entries,
        }
    }

    pub fn curve(&self) -> &Curve<Rational> {
        &self.curve
    }

    /// Good reductions in increasing order of p.
    pub fn iter(&self) -> impl Iterator<Item = &Reduction> + '_ {
        (0..self.primes.len()).filter_map(move |i| {
            self.entries[i]
                .get_or_init(|| {
                    let p = self.primes[i];
                    self.curve.reduce_mod(p).map(|c| Reduction {
                        p,
                        order: c.count_points_prime_field(),
                        curve: c,
                    })
                })
                .as_ref()
        })
    }
}

#[derive(Clone, Debug)]
pub struct IsogenyQuery {
    pub l: u64,
    pub status: Tri,
    pub kernels: Vec<KernelPolynomial<Rational>>,
    /// A good prime whose reduction has no F_p-rational l-isogeny.
    pub proof_prime: Option<u64>,
}

/// Rational l-isogenies over Q. Tries the good-reduction contrapositive first
/// (a rational l-isogeny survives reduction at good p != l); otherwise factors
/// exactly when `l <= cfg.exact_l_max`, else reports `Undetermined`.
pub fn isogeny_query_q(curve: &Curve<Rational>, l: u64, cfg: &Config) -> Result<IsogenyQuery> {
    isogeny_query_with(&ReductionTable::new(curve, cfg), l, cfg)
}

pub fn isogeny_query_with(table: &ReductionTable, l: u64, cfg: &Config) -> Result<IsogenyQuery> {
    if !exact::is_prime_u64(l) {
        return Err(Error::InvalidInput(format!("{l} is not prime")));
    }
    let proof = table
        .iter()
        .filter(|r| r.p != l)
        .take(cfg.reduction_primes)
        .find(|r| !frobenius_has_l_isogeny(r.trace(), r.p, l));
    if let Some(r) = proof {
        return Ok(IsogenyQuery {
            l,
            status: Tri::False,
            kernels: Vec::new(),
            proof_prime: Some(r.p),
        });
    }
    if l > cfg.exact_l_max {
        return Ok(IsogenyQuery {
            l,
            status: Tri::Undetermined,
            kernels: Vec::new(),
            proof_prime: None,
        });
    }
    let kernels = rational_l_isogenies(table.curve(), l, cfg)?;
    Ok(IsogenyQuery {
        l,
        status: Tri::from_bool(!kernels.is_empty()),
        kernels,
        proof_prime: None,
    })
}

pub fn rational_l_isogenies_q(
    curve: &Curve<Rational>,
    l: u64,
    cfg: &Config,
) -> Result<Vec<KernelPolynomial<Rational>>> {
    let q = isogeny_query_q(curve, l, cfg)?;
    match q.status {
        Tri::Undetermined => Err(Error::Undetermined(format!(
            "no good prime up to {} rules out a rational {l}-isogeny",
            cfg.reduction_prime_limit
        ))),
        _ => Ok(q.kernels),
    }
}

/// Points Q with `[l]Q = P`, via the roots of `delta_l^P` in the field.
pub fn divide_point<F: Factorable>(
    curve: &Curve<F>,
    p: &Point<F>,
    l: u64,
    cfg: &Config,
) -> Result<Vec<Point<F>>> {
    divide_point_cached(&DivPolyCache::new(curve), p, l, cfg)
}

pub fn divide_point_cached<F: Factorable>(
    cache: &DivPolyCache<F>,
    p: &Point<F>,
    l: u64,
    cfg: &Config,
) -> Result<Vec<Point<F>>> {
    let curve = cache.curve();
    curve.check(p)?;
    let d = cache.delta_poly(p, l as usize);
    let mut out = Vec::new();
    if p.is_infinity() {
        out.push(Point::Infinity);
    }
    for x in F::roots(&d, cfg)? {
        for q in curve.lift_x(&x) {
            if curve.mul(&Integer::from(l), &q)? == *p {
                out.push(q);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DivisionQuery {
    pub l: u64,
    pub status: Tri,
    pub points: Vec<Point<Rational>>,
    /// A good prime with `P mod p` outside `l E(F_p)`.
    pub proof_prime: Option<u64>,
}

/// Largest prime for which `l E(F_p)` is enumerated point by point, used
/// when the l-part of `E(F_p)` is not cyclic of order l.
const DIVISION_ENUMERATION_LIMIT: u64 = 5_000;

/// Whether `pbar` is outside `l E(F_p)`; None when the check is too expensive.
fn outside_l_multiples(r: &Reduction, pbar: &Point<Fp>, l: u64) -> Option<bool> {
    if r.order % l != 0 {
        return Some(false);
    }
    let cof = r.order / l;
    if cof % l != 0 {
        // E(F_p) = Z/l x H with l not dividing #H, and lE(F_p) = H
        return Some(!r.curve.mul(&Integer::from(cof), pbar).ok()?.is_infinity());
    }
    if r.p > DIVISION_ENUMERATION_LIMIT {
        return None;
    }
    let lz = Integer::from(l);
    Some(
        !r.curve
            .points()
            .iter()
            .any(|q| r.curve.mul(&lz, q).map(|s| s == *pbar).unwrap_or(false)),
    )
}

/// Rational division of P by l. Tries the reduction contrapositive (P mod p not
/// in `l E(F_p)` proves there is no rational Q), then exact root finding when
/// `l <= cfg.exact_l_max`.
pub fn division_query_q(
    curve: &Curve<Rational>,
    p: &Point<Rational>,
    l: u64,
    cfg: &Config,
) -> Result<DivisionQuery> {
    division_query_with(&ReductionTable::new(curve, cfg), p, l, cfg)
}

pub fn division_query_with(
    table: &ReductionTable,
    p: &Point<Rational>,
    l: u64,
    cfg: &Config,
) -> Result<DivisionQuery> {
    let curve = table.curve();
    curve.check(p)?;
    if !exact::is_prime_u64(l) {
        return Err(Error::InvalidInput(format!("{l} is not prime")));
    }
    if p.is_infinity() {
        return Ok(DivisionQuery {
            l,
            status: Tri::True,
            points: vec![Point::Infinity],
            proof_prime: None,
        });
    }
    if let Point::Affine { x, y } = p {
        // small l is settled exactly anyway, so only look a little way
        let budget = if l <= cfg.exact_l_max {
            cfg.reduction_primes
        } else {
            usize::MAX
        };
        for r in table.iter().take(budget) {
            let (Some(xb), Some(yb)) = (Fp::from_rational(x, r.p), Fp::from_rational(y, r.p))
            else {
                continue;
            };
            if outside_l_multiples(r, &Point::new(xb, yb), l) == Some(true) {
                return Ok(DivisionQuery {
                    l,
                    status: Tri::False,
                    points: Vec::new(),
                    proof_prime: Some(r.p),
                });
            }
        }
    }
    if l > cfg.exact_l_max {
        return Ok(DivisionQuery {
            l,
            status: Tri::Undetermined,
            points: Vec::new(),
            proof_prime: None,
        });
    }
    let points = divide_point(curve, p, l, cfg)?;
    Ok(DivisionQuery {
        l,
        status: Tri::from_bool(!points.is_empty()),
        points,
        proof_prime: None,
    })
}

#[derive(Clone, Debug)]
pub struct IsogenyClass {
    pub curves: Vec<Curve<Rational>>,
    /// (from, to, degree)
    pub edges: Vec<(usize, usize, u64)>,
    /// (curve index, l) pairs whose isogenies could not be decided.
    pub undetermined: Vec<(usize, u64)>,
    /// Some curve at the depth limit was not expanded.
    pub truncated: bool,
}

/// Breadth-first closure under rational isogenies of the degrees in
/// [`ISOGENY_PRIMES`], deduplicated up to isomorphism over Q.
pub fn isogeny_class(curve: &Curve<Rational>, depth: usize, cfg: &Config) -> Result<IsogenyClass> {
    let mut class = IsogenyClass {
        curves: vec![curve.clone()],
        edges: Vec::new(),
        undetermined: Vec::new(),
        truncated: false,
    };
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((i, level)) = queue.pop_front() {
        if level >= depth {
            class.truncated = true;
            continue;
        }
        let e = class.curves[i].clone();
        let table = ReductionTable::new(&e, cfg);
        for l in ISOGENY_PRIMES {
            let q = isogeny_query_with(&table, l, cfg)?;
            if q.status == Tri::Undetermined {
                class.undetermined.push((i, l));
                continue;
            }
            for k in &q.kernels {
                let image = velu(&e, k)?.codomain;
                let j = match class.curves.iter().position(|c| c.is_isomorphic(&image)) {
                    Some(j) => j,
                    None => {
                        class.curves.push(image);
                        queue.push_back((class.curves.len() - 1, level + 1));
                        class.curves.len() - 1
                    }
                };
                if !class.edges.iter().any(|&(a, b, _)| (a, b) == (j, i)) {
                    class.edges.push((i, j, l));
                }
            }
        }
    }
    // a truncated frontier only matters if it still had unexplored curves
    if class.truncated {
        class.truncated = class.curves.len() > 1 || depth == 0;
    }
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parse_curve;
    use crate::exact::{rat, rat_int};
    use crate::field::QuadExt;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> Poly<Rational> {
        s.parse().unwrap()
    }

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn two_isogeny_examples() {
        let e = parse_curve("0,0,0,0,-2").unwrap();
        assert!(rational_l_isogenies(&e, 2, &cfg()).unwrap().is_empty());
        let e = parse_curve("0,0,0,1,0").unwrap();
        let ks = rational_l_isogenies(&e, 2, &cfg()).unwrap();
        assert_eq!(ks, vec![KernelPolynomial { f: q("x"), l: 2 }]);
    }

    #[test]
    fn two_isogenies_mod_5() {
        // x^3 + 1 = (x + 1)(x^2 - x + 1) over F_5, the quadratic is irreducible
        let c = Curve::short(Fp::new(0, 5), Fp::new(1, 5)).unwrap();
        let ks = rational_l_isogenies(&c, 2, &cfg()).unwrap();
        assert_eq!(ks.len(), 1);
        assert_eq!(ks[0].f, Poly::new(vec![Fp::new(1, 5), Fp::new(1, 5)]));
        // x^3 - 1 over F_7 splits completely
        let c = Curve::short(Fp::new(0, 7), Fp::new(-1, 7)).unwrap();
        let roots = (0..7i64)
            .filter(|x| (x * x * x - 1).rem_euclid(7) == 0)
            .count();
        assert_eq!(rational_l_isogenies(&c, 2, &cfg()).unwrap().len(), roots);
    }

    #[test]
    fn velu_two_isogeny_of_x3_plus_x() {
        let e = parse_curve("0,0,0,1,0").unwrap();
        let iso = velu(&e, &KernelPolynomial { f: q("x"), l: 2 }).unwrap();
        let target = parse_curve("0,0,0,-4,0").unwrap();
        assert!(iso.codomain.is_isomorphic(&target));
        assert_eq!(iso.degree, 2);
        // the codomain from Velu is y^2 = x^3 - 4x exactly here
        assert_eq!(iso.codomain, target);
    }

    #[test]
    fn velu_pushes_points_over_quadratic_fields() {
        let e = parse_curve("0,0,0,1,0").unwrap();
        let iso = velu(&e, &KernelPolynomial { f: q("x"), l: 2 }).unwrap();
        for x in 1..=5i64 {
            let rhs = rat_int(x * x * x + x);
            let Ok(y) = QuadExt::field(rhs.clone()) else {
                continue;
            };
            let one = y.one_like();
            let emb = |c: &Rational| one.embed(c);
            let dom = e.map(&emb).unwrap();
            let cod = iso.codomain.map(&emb).unwrap();
            let pt = Point::new(one.embed(&rat_int(x)), y.root());
            assert!(dom.contains(&pt));
            let img = iso.push_in(&emb, &cod, &pt);
            assert!(cod.contains(&img), "x = {x}");
        }
    }

    #[test]
    fn three_isogeny_of_x3_minus_2() {
        let e = parse_curve("0,0,0,0,-2").unwrap();
        let ks = rational_l_isogenies(&e, 3, &cfg()).unwrap();
        // f_3 = 3x(x - 2)(x^2 + 2x + 4): both x = 0 and x = 2 give stable subgroups
        assert_eq!(
            ks,
            vec![
                KernelPolynomial { f: q("x"), l: 3 },
                KernelPolynomial {
                    f: q("x - 2"),
                    l: 3
                }
            ]
        );
        for k in &ks {
            assert!(velu(&e, k).unwrap().x_map_is_consistent());
        }
        assert!(matches!(
            velu(
                &e,
                &KernelPolynomial {
                    f: q("x - 1"),
                    l: 3
                }
            ),
            Err(Error::NotAKernel(_))
        ));
    }

    #[test]
    fn division_examples() {
        let e = parse_curve("0,0,0,0,-2").unwrap();
        let two = Point::new(rat(129, 100), rat(-383, 1000));
        let pts = divide_point(&e, &two, 2, &cfg()).unwrap();
        assert_eq!(pts, vec![Point::new(rat_int(3), rat_int(5))]);
        let p = Point::new(rat_int(3), rat_int(5));
        assert!(divide_point(&e, &p, 2, &cfg()).unwrap().is_empty());
        let dq = division_query_q(&e, &p, 2, &cfg()).unwrap();
        assert_eq!(dq.status, Tri::False);
        let dq = division_query_q(&e, &two, 2, &cfg()).unwrap();
        assert_eq!(dq.status, Tri::True);
        for q in &dq.points {
            assert_eq!(e.mul_i64(2, q).unwrap(), two);
        }
    }

    #[test]
    fn reduction_shortcut_agrees_with_exact_search() {
        let e = parse_curve("0,0,0,0,-2").unwrap();
        for l in [2u64, 3, 5, 7] {
            let exact = !rational_l_isogenies(&e, l, &cfg()).unwrap().is_empty();
            let q = isogeny_query_q(&e, l, &cfg()).unwrap();
            assert_eq!(q.status, Tri::from_bool(exact), "l = {l}");
        }
        let q = isogeny_query_q(&e, 163, &cfg()).unwrap();
        assert_eq!(q.status, Tri::False);
        assert!(q.proof_prime.is_some());
    }

    #[test]
    fn classes() {
        let cfg = cfg();
        let e = parse_curve("0,0,0,1,0").unwrap();
        let c = isogeny_class(&e, 1, &cfg).unwrap();
        assert!(c
            .curves
            .iter()
            .any(|x| x.is_isomorphic(&parse_curve("0,0,0,-4,0").unwrap())));
        let e = parse_curve("0,0,1,-1,0").unwrap();
        let c = isogeny_class(&e, 3, &cfg).unwrap();
        assert_eq!(c.curves.len(), 1);
        assert!(c.undetermined.is_empty());
        let e = parse_curve("1,-1,1,-626,6180").unwrap();
        let c = isogeny_class(&e, 4, &cfg).unwrap();
        assert_eq!(c.curves.len(), 4);
    }

    #[test]
    fn kernels_divide_and_are_stable() {
        let e = parse_curve("1,-1,1,-626,6180").unwrap();
        let cache = DivPolyCache::new(&e);
        for l in [2u64, 3, 5] {
            for k in rational_l_isogenies_cached(&cache, l, &cfg()).unwrap() {
                check_kernel(&cache, &k.f, l).unwrap();
            }
        }
    }

    fn random_fp_curve(rng: &mut ChaCha8Rng, p: u64) -> Curve<Fp> {
        loop {
            if let Ok(c) = Curve::short(
                Fp::from_u64(rng.gen_range(0..p), p),
                Fp::from_u64(rng.gen_range(0..p), p),
            ) {
                return c;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn kernel_search_matches_frobenius_criterion(seed in 0u64..100_000, pi in 0usize..4, li in 0usize..4) {
            let p = [5u64, 7, 11, 13][pi];
            let l = [2u64, 3, 5, 7][li];
            prop_assume!(p != l);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_fp_curve(&mut rng, p);
            let ks = rational_l_isogenies(&c, l, &cfg()).unwrap();
            prop_assert_eq!(!ks.is_empty(), frobenius_has_l_isogeny(c.frobenius_trace(), p, l));
            for k in &ks {
                let iso = velu(&c, k).unwrap();
                // images of every point land on the codomain, kernel goes to O
                for pt in c.points() {
                    let img = iso.push(&pt);
                    prop_assert!(iso.codomain.contains(&img));
                }
                prop_assert_eq!(iso.codomain.count_points(), c.count_points());
            }
        }

        #[test]
        fn stability_is_checked_for_every_multiplier(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_fp_curve(&mut rng, 101);
            let cache = DivPolyCache::new(&c);
            for k in rational_l_isogenies_cached(&cache, 5, &cfg()).unwrap() {
                check_kernel(&cache, &k.f, 5).unwrap();
                let fl = cache.f(5);
                prop_assert!(k.f.divides(&fl));
            }
        }
    }

    #[test]
    fn division_shortcut_reaches_large_primes() {
        let e = parse_curve("0,0,0,0,-2").unwrap();
        let p = Point::new(rat_int(3), rat_int(5));
        let table = ReductionTable::new(&e, &cfg());
        for l in [17u64, 37, 163] {
            let q = division_query_with(&table, &p, l, &cfg()).unwrap();
            assert_eq!(q.status, Tri::False, "l = {l}");
            let r = table.iter().find(|r| Some(r.p) == q.proof_prime).unwrap();
            assert_eq!(r.order % l, 0);
        }
    }

    #[test]
    fn table_counts_match_character_sums() {
        let e = parse_curve("1,-1,1,-626,6180").unwrap();
        let table = ReductionTable::new(&e, &cfg());
        for r in table.iter().take(15) {
            assert_eq!(r.order, r.curve.count_points());
            assert_eq!(r.order as usize, r.curve.points().len());
        }
    }

    #[test]
    fn frobenius_criterion_examples() {
        // l = 2: an isogeny iff the trace is even (p odd)
        assert!(frobenius_has_l_isogeny(2, 7, 2));
        assert!(!frobenius_has_l_isogeny(1, 7, 2));
        let _ = rat(1, 1);
    }
}
