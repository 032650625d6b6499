//! Acceptance checks 1-11. Each prints one PASS/FAIL line; the binary exits
//! non-zero if any check other than 11 fails. Check 11 asks for a conclusion
//! that does not hold for its curve (it has a rational 3-isogeny), so its
//! failure is reported but tolerated as long as it fails for exactly that reason.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use ecpre::curve::{parse_curve, Curve, Point};
use ecpre::divpoly::{check_mul_identity, DivPolyCache};
use ecpre::error::Error;
use ecpre::exact::{rat, rat_int};
use ecpre::ffharness::{orbit_sweep, verify_theorems, SweepConfig, SweepKind};
use ecpre::isogeny::{velu, KernelPolynomial, Tri};
use ecpre::theorems::{
    census_sweep, classify_composite, divisibility_failures, eds_denominators, find_fixture,
    load_fixtures, mazur_sweep, prime_census, CensusVerdict, Context, MazurConclusion,
};
use ecpre::{Config, Fp, Integer, QuadExt, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fixtures_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/curves.txt")
}

fn mordell() -> Curve<Rational> {
    parse_curve("0,0,0,0,-2").unwrap()
}

fn p35() -> Point<Rational> {
    Point::new(rat_int(3), rat_int(5))
}

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() < limit
}

/// Random curve over Q through a random point: choose a1..a4 and (x, y), solve for a6.
fn random_q_case(rng: &mut ChaCha8Rng) -> (Curve<Rational>, Point<Rational>) {
    loop {
        let a: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
        let (x, y) = (rat(rng.gen_range(-6..=6), 1), rat(rng.gen_range(-6..=6), 1));
        let a6 = y.clone() * &y + rat_int(a[0]) * &x * &y + rat_int(a[2]) * &y
            - x.clone() * &x * &x
            - rat_int(a[1]) * &x * &x
            - rat_int(a[3]) * &x;
        let Ok(c) = Curve::new([
            rat_int(a[0]),
            rat_int(a[1]),
            rat_int(a[2]),
            rat_int(a[3]),
            a6,
        ]) else {
            continue;
        };
        let p = Point::new(x, y);
        if c.is_torsion(&p) {
            continue;
        }
        return (c, p);
    }
}

fn random_fp_case(rng: &mut ChaCha8Rng) -> (Curve<Fp>, Point<Fp>) {
    let primes = [10007u64, 65537, 1_000_003];
    loop {
        let p = primes[rng.gen_range(0..primes.len())];
        let f = |v: u64| Fp::from_u64(v, p);
        let (a4, x, y) = (
            rng.gen_range(0..p),
            rng.gen_range(0..p),
            rng.gen_range(0..p),
        );
        let (fx, fy) = (f(x), f(y));
        let a6 = fy * fy - fx * fx * fx - f(a4) * fx;
        let Ok(c) = Curve::short(f(a4), a6) else {
            continue;
        };
        return (c, Point::new(fx, fy));
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    let mut bad = 0;
    while checked < 50 {
        let m = rng.gen_range(2..=10usize);
        let r = if checked % 2 == 0 {
            let (c, p) = random_q_case(&mut rng);
            check_mul_identity(&c, &p, m).map(|(ok, _)| ok)
        } else {
            let (c, p) = random_fp_case(&mut rng);
            check_mul_identity(&c, &p, m).map(|(ok, _)| ok)
        };
        match r {
            Ok(ok) => {
                checked += 1;
                bad += usize::from(!ok);
            }
            Err(Error::InfinityMultiple) => continue,
            Err(e) => return outcome(false, format!("error {e}")),
        }
    }
    let fast = within(start, Duration::from_secs(30));
    outcome(
        bad == 0 && fast,
        format!("{checked} cases, {bad} mismatches, {:.1?}", start.elapsed()),
    )
}

fn c2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = Vec::new();
    for _ in 0..20 {
        let (c, p) = random_q_case(&mut rng);
        let cache = DivPolyCache::new(&c);
        for m in 1..=14usize {
            let d = cache.delta_poly(&p, m);
            if !d.is_monic() || d.deg() != m * m {
                bad.push(format!("{c} m={m}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("20 curves, m <= 14, {} failures {:?}", bad.len(), bad),
    )
}

fn c3() -> Outcome {
    let start = Instant::now();
    let cfg = Config::default();
    let e = mordell();
    let two_p = Point::new(rat(129, 100), rat(-383, 1000));
    // the doubled point really is 2(3, 5)
    if e.double(&p35()) != two_p {
        return outcome(false, "x(2P) is not 129/100");
    }
    let r = match prime_census(&e, &two_p, 2, &[], &cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error {e}")),
    };
    let desk = r.n == 2 && r.primes == vec![Integer::from(2), Integer::from(5)];
    let sweep = match census_sweep(&e, &p35(), 2, 2, 6, &[], &cfg) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("error {e}")),
    };
    let h1 = sweep[0].naive_height;
    let exceptions: Vec<usize> = sweep
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            g.naive_height > h1 && (g.primes.len() < 2 || g.verdict != CensusVerdict::Consistent)
        })
        .map(|(i, _)| i + 1)
        .collect();
    let counts: Vec<usize> = sweep.iter().map(|g| g.primes.len()).collect();
    outcome(
        desk && exceptions.is_empty() && within(start, Duration::from_secs(120)),
        format!(
            "n = {}, primes of B(2P) = {:?}; sweep prime counts {:?}, exceptions {:?}, {:.1?}",
            r.n,
            r.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            counts,
            exceptions,
            start.elapsed()
        ),
    )
}

fn sweep(kind: SweepKind, limit: Duration) -> Outcome {
    let start = Instant::now();
    let cfg = SweepConfig::new(vec![5, 7, 11, 13], kind);
    match verify_theorems(&cfg) {
        Ok(r) => outcome(
            r.counterexamples.is_empty() && r.truncated.is_empty() && within(start, limit),
            format!(
                "{} curves, {} cases, {} counterexamples, {} truncated, {:.1?}",
                r.curves,
                r.cases,
                r.counterexamples.len(),
                r.truncated.len(),
                start.elapsed()
            ),
        ),
        Err(e) => outcome(false, format!("error {e}")),
    }
}

fn c4() -> Outcome {
    sweep(
        SweepKind::Trichotomy(vec![3, 5, 7]),
        Duration::from_secs(600),
    )
}

fn c5() -> Outcome {
    sweep(SweepKind::TwoIsogeny, Duration::from_secs(600))
}

fn c6() -> Outcome {
    sweep(SweepKind::Composite(vec![6]), Duration::from_secs(600))
}

fn c7() -> Outcome {
    match orbit_sweep(500, &[5, 7, 11, 13], &[2, 3, 4], &Config::default()) {
        Ok(r) => outcome(
            r.mismatches.is_empty() && r.cases == 500,
            format!(
                "{} cases, {} mismatches, {} over the extension budget",
                r.cases,
                r.mismatches.len(),
                r.skipped
            ),
        ),
        Err(e) => outcome(false, format!("error {e}")),
    }
}

fn c8() -> Outcome {
    let fx = match load_fixtures(&fixtures_path()) {
        Ok(f) => f,
        Err(e) => return outcome(false, format!("fixtures: {e}")),
    };
    let Some(f) = find_fixture(&fx, "117a4") else {
        return outcome(false, "117a4 missing from fixtures");
    };
    let ctx = Context::new(&f.curve, &Config::default());
    match classify_composite(&ctx, &f.point, 4) {
        Ok(v) => {
            let ok = v.delta_irreducible == Tri::False
                && v.divisor_factors == Tri::False
                && v.rational_isogeny == Tri::True
                && v.isogeny_prime == Some(2)
                && v.alpha_isomorphism == Tri::Undetermined;
            outcome(
                ok,
                format!(
                    "117a4 P = (8,36): i {} ii {} iii {} (l = {:?}) iv {}",
                    v.delta_irreducible,
                    v.divisor_factors,
                    v.rational_isogeny,
                    v.isogeny_prime,
                    v.alpha_isomorphism
                ),
            )
        }
        Err(e) => outcome(false, format!("error {e}")),
    }
}

fn c9() -> Outcome {
    match eds_denominators(&mordell(), &p35(), 20) {
        Ok(b) => {
            let first = b[..3] == [Integer::from(1), Integer::from(10), Integer::from(171)];
            let bad = divisibility_failures(&b);
            outcome(
                first && bad.is_empty(),
                format!(
                    "B_1..B_3 = {}, {}, {}; divisibility failures {:?}",
                    b[0], b[1], b[2], bad
                ),
            )
        }
        Err(e) => outcome(false, format!("error {e}")),
    }
}

fn c10() -> Outcome {
    let e = parse_curve("0,0,0,1,0").unwrap();
    let kernel = KernelPolynomial {
        f: "x".parse().unwrap(),
        l: 2,
    };
    let iso = match velu(&e, &kernel) {
        Ok(i) => i,
        Err(e) => return outcome(false, format!("error {e}")),
    };
    let target = parse_curve("0,0,0,-4,0").unwrap();
    let mut on_curve = 0;
    for x in 1..=5i64 {
        // (x, sqrt(x^3 + x)) lives over Q(sqrt(x^3 + x))
        let Ok(k) = QuadExt::field(rat_int(x * x * x + x)) else {
            continue;
        };
        let emb = |c: &Rational| k.embed(c);
        let (dom, cod) = (e.map(emb).unwrap(), iso.codomain.map(emb).unwrap());
        let pt = Point::new(k.embed(&rat_int(x)), k.root());
        let img = iso.push_in(emb, &cod, &pt);
        if dom.contains(&pt) && !img.is_infinity() && cod.contains(&img) {
            on_curve += 1;
        }
    }
    let ok = iso.codomain.is_isomorphic(&target) && on_curve == 5;
    outcome(
        ok,
        format!("codomain {}, {on_curve}/5 images on it", iso.codomain),
    )
}

fn c11() -> Outcome {
    let ctx = Context::new(&mordell(), &Config::default());
    match mazur_sweep(&ctx, &p35()) {
        Ok(r) => {
            let div: Vec<String> = r
                .entries
                .iter()
                .filter(|e| e.is_l_times_rational != Tri::False)
                .map(|e| format!("{}:{}", e.l, e.is_l_times_rational))
                .collect();
            let iso: Vec<String> = r
                .entries
                .iter()
                .filter(|e| e.rational_l_isogeny != Tri::False)
                .map(|e| format!("{}:{}", e.l, e.rational_l_isogeny))
                .collect();
            outcome(
                r.conclusion == MazurConclusion::AllIrreducible,
                format!(
                    "{}; divisions not ruled out {:?}; isogenies not ruled out {:?}",
                    r.conclusion, div, iso
                ),
            )
        }
        Err(e) => outcome(false, format!("error {e}")),
    }
}

/// Check 11 fails for the right reason: every division is ruled out, the only
/// open isogeny degree is 3, and delta_3^P really does factor.
fn c11_explained() -> bool {
    let ctx = Context::new(&mordell(), &Config::default());
    let Ok(r) = mazur_sweep(&ctx, &p35()) else {
        return false;
    };
    let d3 = ecpre::divpoly::delta(&mordell(), &p35(), 3, &Config::default());
    r.conclusion == MazurConclusion::Suspects(vec![3])
        && r.entries
            .iter()
            .all(|e| e.is_l_times_rational == Tri::False)
        && r.entries
            .iter()
            .all(|e| e.rational_l_isogeny != Tri::Undetermined)
        && d3.map(|d| !d.is_irreducible()).unwrap_or(false)
}

fn main() {
    let checks: Vec<(u32, fn() -> Outcome)> = vec![
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
    ];
    let mut failed = Vec::new();
    for (n, f) in checks {
        let o = f();
        println!(
            "acceptance {n:>2}: {} {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(n);
        }
    }
    let explained = c11_explained();
    if failed.contains(&11) {
        println!(
            "acceptance 11: failure {} (delta_3 of (3,5) factors through the rational 3-isogeny with kernel x = 0)",
            if explained { "confirmed" } else { "NOT explained" }
        );
    }
    let hard: Vec<u32> = failed
        .iter()
        .copied()
        .filter(|&n| n != 11 || !explained)
        .collect();
    if !hard.is_empty() {
        eprintln!("failed: {hard:?}");
        std::process::exit(1);
    }
}
