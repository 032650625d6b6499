use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ecpre::curve::{format_point, parse_curve, parse_point};
use ecpre::divpoly::{delta, DivPolyCache};
use ecpre::factor::Factorable;
use ecpre::ffharness::{verify_theorems, SweepConfig, SweepKind};
use ecpre::isogeny::{division_query_q, isogeny_class, isogeny_query_q, velu, Tri};
use ecpre::theorems::{
    classify_composite, classify_prime, eds, is_magnified, load_fixtures, mazur_sweep,
    prime_census, Context, Fixture,
};
use ecpre::{Config, Curve, Error, Fp, Integer, Point, Poly, Rational};

/// Exact division polynomials, pre-images of points and rational isogenies.
#[derive(Parser, Debug)]
#[command(name = "ecpre", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for randomized factoring and field construction.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    output: Output,
    /// Fixture file of "label | a1,a2,a3,a4,a6 | x,y" lines; enables curve labels.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// Pollard rho iterations per cofactor.
    #[arg(long, global = true, env = "ECPRE_RHO_BUDGET")]
    rho_budget: Option<u64>,
    /// Subsets tried in Zassenhaus recombination.
    #[arg(long, global = true, env = "ECPRE_SUBSET_BUDGET")]
    subset_budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Records,
}

#[derive(Args, Debug)]
struct CurveArg {
    /// a1,a2,a3,a4,a6 or a fixture label.
    #[arg(long)]
    curve: String,
}

#[derive(Args, Debug)]
struct CurvePointArgs {
    /// a1,a2,a3,a4,a6 or a fixture label.
    #[arg(long)]
    curve: String,
    /// x,y or O; defaults to the fixture's point for a label.
    #[arg(long)]
    point: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// psi_m, psi_m^2 and theta_m.
    Divpoly {
        #[command(flatten)]
        c: CurveArg,
        #[arg(long)]
        m: usize,
    },
    /// delta_m^P and its factorization.
    Delta {
        #[command(flatten)]
        c: CurvePointArgs,
        #[arg(long)]
        m: usize,
    },
    /// Factor a polynomial over Q, or over F_p with --mod.
    Factor {
        #[arg(long)]
        poly: String,
        #[arg(long = "mod", value_name = "P")]
        modulus: Option<u64>,
    },
    /// Classify P for a prime l (trichotomy) or a composite m.
    Classify {
        #[command(flatten)]
        c: CurvePointArgs,
        #[arg(long, conflicts_with = "m", required_unless_present = "m")]
        l: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Rational points Q with lQ = P.
    Divide {
        #[command(flatten)]
        c: CurvePointArgs,
        #[arg(long)]
        l: u64,
    },
    /// Rational l-isogenies, or the isogeny class with --class.
    Isogenies {
        #[command(flatten)]
        c: CurveArg,
        #[arg(long, conflicts_with = "class", required_unless_present = "class")]
        l: Option<u64>,
        #[arg(long)]
        class: bool,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Elliptic divisibility sequence B_1..B_n with prime censuses.
    Eds {
        #[command(flatten)]
        c: CurvePointArgs,
        #[arg(long)]
        n: u64,
        /// Primes left out of the census.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<u64>,
    },
    /// Factor count of delta_m^P against the primes in the denominator of x(P).
    Census {
        #[command(flatten)]
        c: CurvePointArgs,
        #[arg(long)]
        m: u64,
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<u64>,
    },
    /// Division and isogeny status at every prime of Mazur's list.
    Mazur {
        #[command(flatten)]
        c: CurvePointArgs,
    },
    /// Exhaustive verification over small prime fields.
    VerifyFf {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Primes for the trichotomy sweep.
        #[arg(long, value_delimiter = ',')]
        l: Vec<u64>,
        /// Composite m for the composite sweep.
        #[arg(long, value_delimiter = ',')]
        m: Vec<u64>,
        /// The four-case sweep for l = 2.
        #[arg(long)]
        two: bool,
        #[arg(long)]
        coeff_limit: Option<u64>,
        #[arg(long)]
        max_points: Option<usize>,
    },
    /// Smallest m <= mmax with delta_m^P reducible.
    Magnified {
        #[command(flatten)]
        c: CurvePointArgs,
        #[arg(long)]
        mmax: u64,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        msg: msg.into(),
    }
}

/// Parse error with the input echoed and a caret under the position.
fn annotate(flag: &str, input: &str, e: Error) -> Failure {
    match e {
        Error::Parse { pos, msg } => usage(format!(
            "--{flag}: {msg} (position {pos})\n  {input}\n  {}^",
            " ".repeat(pos)
        )),
        other => usage(format!("--{flag}: {other}")),
    }
}

/// One group of key/value pairs; tables print one pair per line, records one
/// group per line.
type Record = Vec<(String, String)>;

struct Report {
    records: Vec<Record>,
    code: u8,
}

impl Report {
    fn new() -> Self {
        Report {
            records: Vec::new(),
            code: 0,
        }
    }

    fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    fn render(&self, out: Output) -> String {
        let mut s = String::new();
        match out {
            Output::Table => {
                for (i, r) in self.records.iter().enumerate() {
                    if i > 0 {
                        s.push('\n');
                    }
                    let w = r.iter().map(|(k, _)| k.len() + 1).max().unwrap_or(0);
                    for (k, v) in r {
                        let k = format!("{k}:");
                        s.push_str(&format!("{k:<w$} {v}\n"));
                    }
                }
            }
            Output::Records => {
                for r in &self.records {
                    let line: Vec<String> = r.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    s.push_str(&line.join("\t"));
                    s.push('\n');
                }
            }
        }
        s
    }
}

macro_rules! rec {
    ($($k:expr => $v:expr),* $(,)?) => {
        vec![$(($k.to_string(), $v.to_string())),*]
    };
}

struct Env {
    cfg: Config,
    fixtures: Vec<Fixture>,
}

impl Env {
    fn new(g: &Global) -> Result<Self, Failure> {
        let mut cfg = Config {
            seed: g.seed,
            ..Config::default()
        };
        if let Some(b) = g.rho_budget {
            cfg.rho_budget = b;
        }
        if let Some(b) = g.subset_budget {
            cfg.subset_budget = b;
        }
        let fixtures = match &g.fixtures {
            Some(p) => load_fixtures(p)?,
            None => Vec::new(),
        };
        Ok(Env { cfg, fixtures })
    }

    fn fixture(&self, label: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.label == label)
    }

    fn curve(&self, s: &str) -> Result<Curve<Rational>, Failure> {
        if let Some(f) = self.fixture(s) {
            return Ok(f.curve.clone());
        }
        if !s.contains(',')
            && s.chars().any(|c| c.is_ascii_alphabetic())
            && self.fixtures.is_empty()
        {
            return Err(usage(format!(
                "--curve: `{s}` looks like a label; labels need --fixtures"
            )));
        }
        parse_curve(s).map_err(|e| annotate("curve", s, e))
    }

    fn curve_point(
        &self,
        a: &CurvePointArgs,
    ) -> Result<(Curve<Rational>, Point<Rational>), Failure> {
        let curve = self.curve(&a.curve)?;
        let point = match (&a.point, self.fixture(&a.curve)) {
            (Some(s), _) => parse_point(s).map_err(|e| annotate("point", s, e))?,
            (None, Some(f)) => f.point.clone(),
            (None, None) => {
                return Err(usage(
                    "--point is required unless --curve is a fixture label",
                ))
            }
        };
        curve
            .check(&point)
            .map_err(|e| usage(format!("--point: {e}")))?;
        Ok((curve, point))
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn primes_of(v: &[u64]) -> Vec<Integer> {
    v.iter().map(|&p| Integer::from(p)).collect()
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let env = Env::new(&cli.global)?;
    let cfg = &env.cfg;
    let mut rep = Report::new();
    match &cli.command {
        Command::Divpoly { c, m } => {
            let curve = env.curve(&c.curve)?;
            let cache = DivPolyCache::new(&curve);
            let psi = cache.psi(*m);
            let psi_s = if psi.y_factor {
                format!("(2y + a1*x + a3)*({})", psi.f)
            } else {
                psi.f.to_string()
            };
            rep.push(rec![
                "m" => m,
                "psi" => psi_s,
                "psi^2" => cache.psi_sq(*m),
                "theta" => cache.theta(*m),
            ]);
        }
        Command::Delta { c, m } => {
            let (curve, p) = env.curve_point(c)?;
            let d = delta(&curve, &p, *m, cfg)?;
            let mut r = rec![
                "m" => m,
                "point" => format_point(&p),
                "delta" => d.delta,
                "factors" => d.factors,
                "n" => d.n,
            ];
            for (i, (f, mult)) in d.factors.factors.iter().enumerate() {
                r.push((
                    format!("factor {}", i + 1),
                    format!("degree {} multiplicity {mult}: {f}", f.deg()),
                ));
            }
            rep.push(r);
        }
        Command::Factor { poly, modulus } => {
            let f: Poly<Rational> = poly.parse().map_err(|e| annotate("poly", poly, e))?;
            match modulus {
                None => {
                    let fl = Rational::factor_poly(&f, cfg)?;
                    rep.push(rec!["field" => "Q", "factors" => &fl, "n" => fl.distinct_count()]);
                }
                Some(p) => {
                    if *p < 2 || !ecpre::exact::is_prime_u64(*p) {
                        return Err(usage(format!("--mod: {p} is not prime")));
                    }
                    let g = f.reduce_mod(*p).ok_or_else(|| {
                        usage(format!("--poly: a denominator is divisible by {p}"))
                    })?;
                    let fl = Fp::factor_poly(&g, cfg)?;
                    rep.push(rec![
                        "field" => format!("F_{p}"),
                        "factors" => &fl,
                        "n" => fl.distinct_count(),
                    ]);
                }
            }
        }
        Command::Classify { c, l, m } => {
            let (curve, p) = env.curve_point(c)?;
            let ctx = Context::new(&curve, cfg);
            if let Some(l) = l {
                let v = classify_prime(&ctx, &p, *l)?;
                let mut r = rec![
                    "l" => l,
                    "i delta irreducible" => v.delta_irreducible,
                    "ii rational isogeny" => v.rational_isogeny,
                    "iii rational preimage" => v.rational_preimage,
                ];
                if let Some(iv) = v.dual_image {
                    r.push(("iv dual 2-isogeny image".into(), iv.to_string()));
                }
                r.push(("2-torsion".into(), v.two_torsion.to_string()));
                let mut summary = match v.cases().as_slice() {
                    [] => "no case decided".to_string(),
                    [one] => format!("case {one}"),
                    many => format!("cases {}", many.join(", ")),
                };
                if let Some(q) = &v.preimage {
                    summary.push_str(&format!("; witness {q}"));
                }
                if let Some(k) = &v.kernel {
                    summary.push_str(&format!("; kernel {}", k.f));
                }
                if let Some(w) = &v.dual_witness {
                    summary.push_str(&format!("; dual witness {} on {}", w.q, w.isogenous));
                }
                r.push(("verdict".into(), summary));
                if v.trichotomy() == Tri::False || v.two_isogeny_cases() == Some(Tri::False) {
                    rep.code = 3;
                }
                rep.push(r);
            } else if let Some(m) = m {
                let v = classify_composite(&ctx, &p, *m)?;
                let mut r = rec![
                    "m" => m,
                    "i delta irreducible" => v.delta_irreducible,
                    "ii divisor delta factors" => v.divisor_factors,
                    "iii rational isogeny" => v.rational_isogeny,
                    "iv alpha isomorphism" => v.alpha_isomorphism,
                ];
                if let Some(d) = v.divisor {
                    r.push(("divisor".into(), d.to_string()));
                }
                if let Some(l) = v.isogeny_prime {
                    r.push(("isogeny degree".into(), l.to_string()));
                }
                if v.holds() == Tri::False {
                    rep.code = 3;
                }
                rep.push(r);
            }
        }
        Command::Divide { c, l } => {
            let (curve, p) = env.curve_point(c)?;
            let q = division_query_q(&curve, &p, *l, cfg)?;
            let mut r = rec!["l" => l, "divisible" => q.status];
            if let Some(pp) = q.proof_prime {
                r.push(("ruled out mod".into(), pp.to_string()));
            }
            for (i, pt) in q.points.iter().enumerate() {
                r.push((format!("Q{}", i + 1), format_point(pt)));
            }
            rep.push(r);
        }
        Command::Isogenies { c, l, class, depth } => {
            let curve = env.curve(&c.curve)?;
            if *class {
                let cl = isogeny_class(&curve, *depth, cfg)?;
                for (i, e) in cl.curves.iter().enumerate() {
                    rep.push(rec!["index" => i, "curve" => e, "j" => e.j_invariant()]);
                }
                let edges: Vec<String> = cl
                    .edges
                    .iter()
                    .map(|(a, b, l)| format!("{a}-{b}:{l}"))
                    .collect();
                let und: Vec<String> = cl
                    .undetermined
                    .iter()
                    .map(|(i, l)| format!("{i}:{l}"))
                    .collect();
                rep.push(rec![
                    "size" => cl.curves.len(),
                    "edges" => edges.join(" "),
                    "undetermined" => und.join(" "),
                    "truncated" => cl.truncated,
                ]);
            } else if let Some(l) = l {
                let q = isogeny_query_q(&curve, *l, cfg)?;
                let mut r = rec!["l" => l, "rational isogeny" => q.status];
                if let Some(pp) = q.proof_prime {
                    r.push(("ruled out mod".into(), pp.to_string()));
                }
                rep.push(r);
                for k in &q.kernels {
                    let iso = velu(&curve, k)?;
                    rep.push(rec!["kernel" => &k.f, "codomain" => &iso.codomain]);
                }
            }
        }
        Command::Eds { c, n, exclude } => {
            let (curve, p) = env.curve_point(c)?;
            let terms = eds(&curve, &p, *n, &primes_of(exclude), cfg)?;
            let bs: Vec<String> = terms.iter().map(|t| t.b.to_string()).collect();
            rep.push(rec!["B" => bs.join(", ")]);
            for t in &terms {
                let mut r = rec![
                    "k" => t.k,
                    "B" => &t.b,
                    "primes" => join(&t.primes),
                    "count" => t.count(),
                ];
                if let Some(u) = &t.unfactored {
                    r.push(("incomplete census, unfactored".into(), u.to_string()));
                }
                rep.push(r);
            }
        }
        Command::Census { c, m, exclude } => {
            let (curve, p) = env.curve_point(c)?;
            let g = prime_census(&curve, &p, *m, &primes_of(exclude), cfg)?;
            let verdict = match g.verdict {
                ecpre::theorems::CensusVerdict::Consistent => "consistent",
                ecpre::theorems::CensusVerdict::ExceptionLowHeight => {
                    "exception (below-height point)"
                }
            };
            let mut r = rec![
                "m" => m,
                "n" => g.n,
                "primes" => join(&g.primes),
                "count" => g.primes.len(),
                "naive height (approx)" => format!("{:.6}", g.naive_height),
                "verdict" => verdict,
            ];
            if let Some(u) = &g.unfactored {
                r.push(("incomplete census, unfactored".into(), u.to_string()));
            }
            rep.push(r);
        }
        Command::Mazur { c } => {
            let (curve, p) = env.curve_point(c)?;
            let ctx = Context::new(&curve, cfg);
            let m = mazur_sweep(&ctx, &p)?;
            for e in &m.entries {
                let mut r = rec![
                    "l" => e.l,
                    "l times rational" => e.is_l_times_rational,
                    "rational isogeny" => e.rational_l_isogeny,
                ];
                if let Some(q) = e.division_proof_prime {
                    r.push(("division ruled out mod".into(), q.to_string()));
                }
                if let Some(q) = e.isogeny_proof_prime {
                    r.push(("isogeny ruled out mod".into(), q.to_string()));
                }
                rep.push(r);
            }
            rep.push(rec!["torsion" => m.torsion, "conclusion" => m.conclusion]);
        }
        Command::VerifyFf {
            primes,
            l,
            m,
            two,
            coeff_limit,
            max_points,
        } => {
            let kind = match (l.is_empty(), m.is_empty(), two) {
                (false, true, false) => SweepKind::Trichotomy(l.clone()),
                (true, false, false) => SweepKind::Composite(m.clone()),
                (true, true, true) => SweepKind::TwoIsogeny,
                _ => return Err(usage("give exactly one of --l, --m, --two")),
            };
            let mut sc = SweepConfig::new(primes.clone(), kind);
            sc.coeff_limit = *coeff_limit;
            sc.max_points = *max_points;
            sc.records = cli.global.output == Output::Records;
            sc.config = cfg.clone();
            let r = verify_theorems(&sc)?;
            if sc.records {
                for line in &r.records {
                    rep.push(rec!["case" => line]);
                }
            }
            let mut summary = rec!["curves" => r.curves, "cases" => r.cases];
            for (k, v) in &r.tallies {
                summary.push((k.clone(), v.to_string()));
            }
            summary.push(("truncated".into(), r.truncated.len().to_string()));
            summary.push((
                "counterexamples".into(),
                r.counterexamples.len().to_string(),
            ));
            rep.push(summary);
            for c in &r.counterexamples {
                rep.push(rec!["counterexample" => &c.case, "detail" => &c.detail]);
            }
            if !r.counterexamples.is_empty() {
                rep.code = 3;
            }
        }
        Command::Magnified { c, mmax } => {
            let (curve, p) = env.curve_point(c)?;
            let ctx = Context::new(&curve, cfg);
            let m = is_magnified(&ctx, &p, *mmax)?;
            rep.push(rec![
                "magnified" => if m.magnified { "true" } else { "false so far" },
                "first m" => m.first_m.map_or("none".to_string(), |v| v.to_string()),
                "undetermined m" => join(&m.undetermined),
            ]);
        }
    }
    Ok(rep)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(rep) => {
            print!("{}", rep.render(cli.global.output));
            ExitCode::from(rep.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
