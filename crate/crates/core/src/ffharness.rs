//! Exhaustive checks over small prime fields, where Galois is generated by
//! Frobenius and every statement can be tested by enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_integer::Integer as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Config;
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::exact::{self, Integer};
use crate::factor::Factorable;
use crate::field::{ExtContext, ExtField, FiniteField, Fp};
use crate::isogeny::{frobenius_has_l_isogeny, Tri};
use crate::theorems::{
    classify_composite, classify_prime, coprime_splits, coprime_violations, Context,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCount {
    /// Distinct irreducible factors of `delta_m^P`.
    pub factors: usize,
    /// Frobenius orbits on the explicitly constructed `[m]^{-1}P`.
    pub orbits: usize,
    pub orbit_sizes: Vec<u64>,
    /// Degree of the extension that holds all of `[m]^{-1}P`.
    pub ext_degree: u32,
    /// P in E[2]: the x-coordinate no longer determines the pre-image, so the
    /// two counts need not agree.
    pub two_torsion: bool,
}

/// Counts Frobenius orbits on `[m]^{-1}P` by building every pre-image in
/// `F_{p^k}`, k the lcm of the factor degrees, and compares with the factor
/// count of `delta_m^P`.
pub fn orbit_count(curve: &Curve<Fp>, p: &Point<Fp>, m: u64, cfg: &Config) -> Result<OrbitCount> {
    curve.check(p)?;
    let q = curve.a1.modulus();
    if m < 2 || m % q == 0 {
        return Err(Error::InvalidInput(format!(
            "m = {m} must be at least 2 and prime to {q}"
        )));
    }
    let delta = crate::divpoly::DivPolyCache::new(curve).delta_poly(p, m as usize);
    let fl = Fp::factor_poly(&delta, cfg)?;
    let k = fl
        .factors
        .iter()
        .fold(1u64, |a, (g, _)| a.lcm(&(g.deg() as u64)));
    let two_torsion = curve.is_two_torsion(p);
    // the y-coordinates of 2-torsion pre-images may need one more quadratic step
    let k = if two_torsion { 2 * k } else { k };
    if k > cfg.ext_degree_budget as u64 {
        return Err(Error::ResourceLimit(format!(
            "pre-images need F_{q}^{k}, above the extension budget {}",
            cfg.ext_degree_budget
        )));
    }
    let ext = ExtContext::random(q, k as u32, cfg.seed);
    let emb = |c: &Fp| ext.embed(*c);
    let ec = curve.map(emb)?;
    let pe = p.map(emb);
    let mz = Integer::from(m);
    let mut pre: Vec<Point<ExtField>> = Vec::new();
    if p.is_infinity() {
        pre.push(Point::Infinity);
    }
    for x in ExtField::roots(&delta.map(emb), cfg)? {
        for r in ec.lift_x(&x) {
            if ec.mul(&mz, &r)? == pe && !pre.contains(&r) {
                pre.push(r);
            }
        }
    }
    if pre.len() as u64 != m * m {
        return Err(Error::InvalidInput(format!(
            "found {} pre-images instead of {}",
            pre.len(),
            m * m
        )));
    }
    let sizes = orbit_sizes(&pre, |r| r.map(|c| c.frobenius()));
    Ok(OrbitCount {
        factors: fl.distinct_count(),
        orbits: sizes.len(),
        orbit_sizes: sizes,
        ext_degree: k as u32,
        two_torsion,
    })
}

/// Cycle lengths of the permutation `step` restricted to `set`.
fn orbit_sizes<T: PartialEq + Clone>(set: &[T], step: impl Fn(&T) -> T) -> Vec<u64> {
    let mut seen = vec![false; set.len()];
    let mut out = Vec::new();
    for i in 0..set.len() {
        if seen[i] {
            continue;
        }
        let mut n = 0;
        let mut cur = set[i].clone();
        loop {
            let j = set
                .iter()
                .position(|s| *s == cur)
                .expect("set is Frobenius stable");
            if seen[j] {
                break;
            }
            seen[j] = true;
            n += 1;
            cur = step(&cur);
        }
        out.push(n);
    }
    out
}

/// Which statement a sweep checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepKind {
    /// Prime-degree trichotomy for each l.
    Trichotomy(Vec<u64>),
    /// The four cases for l = 2.
    TwoIsogeny,
    /// Composite-m classifier, plus the coprime-divisor implication when m has
    /// coprime proper factors.
    Composite(Vec<u64>),
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    pub kind: SweepKind,
    /// Only curves with `a4, a6 < coeff_limit` (all of F_p when None).
    pub coeff_limit: Option<u64>,
    /// Points per curve, sampled with the seed when the curve has more.
    pub max_points: Option<usize>,
    /// Keep one line per case in the report.
    pub records: bool,
    pub config: Config,
}

impl SweepConfig {
    pub fn new(primes: Vec<u64>, kind: SweepKind) -> Self {
        SweepConfig {
            primes,
            kind,
            coeff_limit: None,
            max_points: None,
            records: false,
            config: Config::default(),
        }
    }

    fn params(&self) -> Vec<u64> {
        match &self.kind {
            SweepKind::Trichotomy(ls) => ls.clone(),
            SweepKind::TwoIsogeny => vec![2],
            SweepKind::Composite(ms) => ms.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for &p in &self.primes {
            if p < 5 || !exact::is_prime_u64(p) {
                return Err(Error::InvalidInput(format!("{p} is not a prime >= 5")));
            }
        }
        for n in self.params() {
            match self.kind {
                SweepKind::Composite(_) if n < 4 || exact::is_prime_u64(n) => {
                    return Err(Error::InvalidInput(format!("{n} is not composite")));
                }
                SweepKind::Trichotomy(_) if !exact::is_prime_u64(n) => {
                    return Err(Error::InvalidInput(format!("{n} is not prime")));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CaseId {
    pub p: u64,
    pub a4: u64,
    pub a6: u64,
    /// `None` for the point at infinity.
    pub point: Option<(u64, u64)>,
    /// l or m.
    pub n: u64,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} a4={} a6={} P=", self.p, self.a4, self.a6)?;
        match self.point {
            None => write!(f, "O")?,
            Some((x, y)) => write!(f, "({x},{y})")?,
        }
        write!(f, " n={}", self.n)
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub case: CaseId,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub curves: u64,
    pub cases: u64,
    /// Verdict label -> count, e.g. "l=3 i" or "m=6 iii,iv".
    pub tallies: BTreeMap<String, u64>,
    pub counterexamples: Vec<Counterexample>,
    /// Cases skipped because a budget ran out.
    pub truncated: Vec<(CaseId, String)>,
    pub records: Vec<String>,
    pub elapsed: Duration,
}

impl SweepReport {
    /// Summary table; identical inputs give identical text (the runtime is
    /// left out).
    pub fn table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("curves {}\ncases {}\n", self.curves, self.cases));
        for (k, v) in &self.tallies {
            s.push_str(&format!("{k:<24} {v}\n"));
        }
        s.push_str(&format!("truncated {}\n", self.truncated.len()));
        s.push_str(&format!("counterexamples {}\n", self.counterexamples.len()));
        for c in &self.counterexamples {
            s.push_str(&format!("  {} {}\n", c.case, c.detail));
        }
        s
    }
}

fn id_point(p: &Point<Fp>) -> Option<(u64, u64)> {
    match p {
        Point::Infinity => None,
        Point::Affine { x, y } => Some((x.value(), y.value())),
    }
}

#[derive(Default)]
struct CurveResult {
    cases: u64,
    tallies: BTreeMap<String, u64>,
    counterexamples: Vec<Counterexample>,
    truncated: Vec<(CaseId, String)>,
    records: Vec<String>,
}

fn flag_label(flags: &[(Tri, &str)]) -> String {
    let on: Vec<&str> = flags
        .iter()
        .filter(|(t, _)| t.is_true())
        .map(|(_, s)| *s)
        .collect();
    if on.is_empty() {
        "none".into()
    } else {
        on.join(",")
    }
}

fn sweep_curve(cfg: &SweepConfig, p: u64, a4: u64, a6: u64) -> Option<CurveResult> {
    let curve = Curve::short(Fp::from_u64(a4, p), Fp::from_u64(a6, p)).ok()?;
    let mut points = curve.points();
    if let Some(k) = cfg.max_points {
        if points.len() > k {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.config.seed ^ (p << 40) ^ (a4 << 20) ^ a6);
            let mut chosen: Vec<usize> =
                rand::seq::index::sample(&mut rng, points.len(), k).into_vec();
            chosen.sort_unstable();
            points = chosen.into_iter().map(|i| points[i].clone()).collect();
        }
    }
    let ctx = Context::new(&curve, &cfg.config);
    let trace = p as i64 + 1 - curve.count_points_prime_field() as i64;
    let mut out = CurveResult::default();
    for pt in &points {
        for n in cfg.params() {
            if n % p == 0 {
                continue;
            }
            let case = CaseId {
                p,
                a4,
                a6,
                point: id_point(pt),
                n,
            };
            match check_case(&ctx, cfg, pt, n, trace) {
                Ok((label, problems)) => {
                    out.cases += 1;
                    *out.tallies.entry(label.clone()).or_default() += 1;
                    if cfg.records {
                        out.records.push(format!("{case} {label}"));
                    }
                    for detail in problems {
                        out.counterexamples.push(Counterexample {
                            case: case.clone(),
                            detail,
                        });
                    }
                }
                Err(e) if e.is_resource_limit() => out.truncated.push((case, e.to_string())),
                Err(e) => out.counterexamples.push(Counterexample {
                    case,
                    detail: format!("error: {e}"),
                }),
            }
        }
    }
    Some(out)
}

/// Returns the tally label and every failed assertion.
fn check_case(
    ctx: &Context<Fp>,
    cfg: &SweepConfig,
    pt: &Point<Fp>,
    n: u64,
    trace: i64,
) -> Result<(String, Vec<String>)> {
    let p = ctx.curve().a1.modulus();
    let mut problems = Vec::new();
    match &cfg.kind {
        SweepKind::Trichotomy(_) => {
            let v = classify_prime(ctx, pt, n)?;
            if v.trichotomy() != Tri::True {
                problems.push("no case of the trichotomy holds".into());
            }
            if v.rational_isogeny.is_true() != frobenius_has_l_isogeny(trace, p, n) {
                problems.push("kernel search disagrees with the Frobenius criterion".into());
            }
            let label = flag_label(&[
                (v.delta_irreducible, "i"),
                (v.rational_isogeny, "ii"),
                (v.rational_preimage, "iii"),
            ]);
            Ok((format!("l={n} {label}"), problems))
        }
        SweepKind::TwoIsogeny => {
            let v = classify_prime(ctx, pt, 2)?;
            if v.two_isogeny_cases() != Some(Tri::True) {
                problems.push("none of the four cases holds".into());
            }
            let label = flag_label(&[
                (v.delta_irreducible, "i"),
                (Tri::from_bool(v.two_torsion), "ii"),
                (v.rational_preimage, "iii"),
                (v.dual_image.unwrap_or(Tri::False), "iv"),
            ]);
            Ok((format!("l=2 {label}"), problems))
        }
        SweepKind::Composite(_) => {
            let v = classify_composite(ctx, pt, n)?;
            if v.holds() != Tri::True {
                problems.push("none of the four cases holds".into());
            }
            if v.flags().contains(&Tri::Undetermined) {
                problems.push("undetermined flag over a finite field".into());
            }
            if !coprime_splits(n).is_empty() {
                for (d1, d2) in coprime_violations(ctx, pt, n)? {
                    problems.push(format!(
                        "delta_{n} factors but delta_{d1} and delta_{d2} do not"
                    ));
                }
            }
            let [a, b, c, d] = v.flags();
            let label = flag_label(&[(a, "i"), (b, "ii"), (c, "iii"), (d, "iv")]);
            Ok((format!("m={n} {label}"), problems))
        }
    }
}

/// Runs the sweep over every short Weierstrass curve in range, in parallel per
/// curve, and merges in (p, a4, a6, point, n) order.
pub fn verify_theorems(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut work = Vec::new();
    for &p in &cfg.primes {
        let lim = cfg.coeff_limit.map_or(p, |c| c.min(p));
        for a4 in 0..lim {
            for a6 in 0..lim {
                work.push((p, a4, a6));
            }
        }
    }
    let results: Vec<Option<CurveResult>> = work
        .par_iter()
        .map(|&(p, a4, a6)| sweep_curve(cfg, p, a4, a6))
        .collect();
    let mut report = SweepReport::default();
    for r in results.into_iter().flatten() {
        report.curves += 1;
        report.cases += r.cases;
        for (k, v) in r.tallies {
            *report.tallies.entry(k).or_default() += v;
        }
        report.counterexamples.extend(r.counterexamples);
        report.truncated.extend(r.truncated);
        report.records.extend(r.records);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[derive(Clone, Debug, Default)]
pub struct OrbitSweepReport {
    pub cases: u64,
    pub mismatches: Vec<(CaseId, OrbitCount)>,
    pub skipped: u64,
}

/// Samples `(E, P, m)` with P outside E[2] and compares factor and orbit counts.
pub fn orbit_sweep(
    samples: usize,
    primes: &[u64],
    ms: &[u64],
    cfg: &Config,
) -> Result<OrbitSweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut jobs = Vec::with_capacity(samples);
    while jobs.len() < samples {
        let p = primes[rng.gen_range(0..primes.len())];
        let m = ms[rng.gen_range(0..ms.len())];
        if m % p == 0 {
            continue;
        }
        let (a4, a6) = (rng.gen_range(0..p), rng.gen_range(0..p));
        let Ok(c) = Curve::short(Fp::from_u64(a4, p), Fp::from_u64(a6, p)) else {
            continue;
        };
        let pts: Vec<Point<Fp>> = c
            .points()
            .into_iter()
            .filter(|q| !c.is_two_torsion(q))
            .collect();
        if pts.is_empty() {
            continue;
        }
        let pt = pts[rng.gen_range(0..pts.len())].clone();
        jobs.push((c, pt, m, a4, a6, p));
    }
    let results: Vec<(CaseId, Result<OrbitCount>)> = jobs
        .into_par_iter()
        .map(|(c, pt, m, a4, a6, p)| {
            let id = CaseId {
                p,
                a4,
                a6,
                point: id_point(&pt),
                n: m,
            };
            (id, orbit_count(&c, &pt, m, cfg))
        })
        .collect();
    let mut rep = OrbitSweepReport::default();
    for (id, r) in results {
        match r {
            Ok(oc) => {
                rep.cases += 1;
                if oc.factors != oc.orbits {
                    rep.mismatches.push((id, oc));
                }
            }
            Err(e) if e.is_resource_limit() => rep.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_count_small_cases() {
        let c = Curve::short(Fp::new(1, 7), Fp::new(3, 7)).unwrap();
        for pt in c.points() {
            if c.is_two_torsion(&pt) {
                continue;
            }
            let oc = orbit_count(&c, &pt, 3, &Config::default()).unwrap();
            assert_eq!(oc.factors, oc.orbits);
            assert_eq!(oc.orbit_sizes.iter().sum::<u64>(), 9);
            // one orbit exactly when delta is irreducible
            assert_eq!(oc.orbits == 1, oc.factors == 1);
        }
    }

    #[test]
    fn orbit_count_at_infinity_covers_torsion() {
        let c = Curve::short(Fp::new(2, 11), Fp::new(5, 11)).unwrap();
        let oc = orbit_count(&c, &Point::Infinity, 2, &Config::default()).unwrap();
        assert_eq!(oc.orbit_sizes.iter().sum::<u64>(), 4);
        assert!(oc.two_torsion);
    }

    #[test]
    fn orbit_sizes_of_a_cycle() {
        let set: Vec<u32> = (0..6).collect();
        let mut s = orbit_sizes(&set, |x| (x + 2) % 6);
        s.sort();
        assert_eq!(s, vec![3, 3]);
    }

    #[test]
    fn small_sweeps_have_no_counterexamples() {
        let mut cfg = SweepConfig::new(vec![5, 7], SweepKind::Trichotomy(vec![3]));
        cfg.records = true;
        let r = verify_theorems(&cfg).unwrap();
        assert!(r.counterexamples.is_empty(), "{}", r.table());
        assert_eq!(r.records.len() as u64, r.cases);
        let r2 = verify_theorems(&cfg).unwrap();
        assert_eq!(r.table(), r2.table());
        assert_eq!(r.records, r2.records);

        let cfg = SweepConfig::new(vec![7], SweepKind::TwoIsogeny);
        let r = verify_theorems(&cfg).unwrap();
        assert!(r.counterexamples.is_empty(), "{}", r.table());
        assert!(r.tallies.keys().any(|k| k.contains("iv")));

        let mut cfg = SweepConfig::new(vec![7], SweepKind::Composite(vec![4, 6]));
        cfg.coeff_limit = Some(4);
        let r = verify_theorems(&cfg).unwrap();
        assert!(r.counterexamples.is_empty(), "{}", r.table());
    }

    #[test]
    fn invalid_sweeps_are_rejected() {
        assert!(verify_theorems(&SweepConfig::new(vec![3], SweepKind::TwoIsogeny)).is_err());
        assert!(
            verify_theorems(&SweepConfig::new(vec![5], SweepKind::Composite(vec![5]))).is_err()
        );
        assert!(
            verify_theorems(&SweepConfig::new(vec![5], SweepKind::Trichotomy(vec![4]))).is_err()
        );
    }

    #[test]
    fn sampled_orbits_match_factors() {
        let r = orbit_sweep(40, &[5, 7, 11], &[2, 3, 4], &Config::default()).unwrap();
        assert!(r.mismatches.is_empty());
        assert_eq!(r.cases + r.skipped, 40);
    }
}
