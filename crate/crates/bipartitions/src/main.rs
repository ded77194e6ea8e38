//! Command-line front end: every subsystem as a scriptable, CI-friendly
//! subcommand. Machine-readable JSON lines go to stdout; `--format pretty`
//! additionally renders tables on stderr. Exit code 0 means every requested
//! verdict came back pass/proved.

use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use bipartitions::congruence::{
    self, density_hypothesis, density_scan, Family, FamilyReport, HeckeReport, NewmanKind,
    Verdict,
};
use bipartitions::eta::{self, EtaQuotient};
use bipartitions::partitions::bipartition_coeffs;
use bipartitions::radu::{
    search_families, verify_congruence, RSInput, SMode, Status, VerificationReport, VerifyOptions,
    DEFAULT_COEFF_CAP, DEFAULT_SAFETY_FACTOR,
};
use bipartitions::series::SeriesRing;
use bipartitions::{Error, Rational};

const CAP_ENV_VAR: &str = "BIPARTITIONS_MAX_COEFFS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Parser)]
#[command(
    name = "bipartitions",
    version,
    about = "l-regular bipartition coefficients, eta-quotient profiles, and congruence verifiers"
)]
struct Cli {
    /// Output format: json lines, csv summary, or json + tables on stderr.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Omit the generated_at field so runs are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Seed recorded in reports; reserved for randomized property sweeps
    /// (current subcommands are fully deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap on series coefficients per run (overrides BIPARTITIONS_MAX_COEFFS).
    #[arg(long, global = true)]
    max_coeffs: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print B_l(n) for n < T.
    Coeffs {
        /// Regularity parameter l >= 2.
        #[arg(long = "l")]
        ell: u64,
        /// Truncation order (number of coefficients).
        #[arg(long = "T", value_parser = clap::value_parser!(u64).range(1..))]
        t: u64,
        /// Coefficient modulus; 0 keeps exact integers.
        #[arg(long = "mod", default_value_t = 0)]
        modulus: u64,
    },
    /// Profile an eta-quotient: weight, character, cusp orders, holomorphy.
    Eta {
        /// Quotient spec `delta^r*delta^r*...`, e.g. "6^4" or "1^-2*5^2".
        #[arg(long)]
        spec: String,
        /// Level N; defaults to the smallest valid one.
        #[arg(long)]
        level: Option<u64>,
    },
    /// Finite verification of B_p(mn + t') = 0 mod u over the orbit of t.
    Radu {
        #[arg(long)]
        p: u64,
        /// Factored modulus, e.g. "5^2" or "5^2*7".
        #[arg(long)]
        m: String,
        /// Residue to verify, or "all" to sweep every orbit.
        #[arg(long)]
        t: String,
        #[arg(long)]
        u: u64,
        /// Multiplier for the post-success soundness re-scan.
        #[arg(long, default_value_t = DEFAULT_SAFETY_FACTOR)]
        safety: u64,
        /// Range s over all integral-shift units of Z_{24m}, not just squares.
        #[arg(long)]
        strict_s: bool,
    },
    /// Scan a congruence family (thm8, coro3, newmann1, thm9, coro4, thm10,
    /// coro5, newmann2, thm11, coro6).
    Families {
        #[arg(long)]
        id: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        j: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        /// Comma-separated primes for thm8/thm10.
        #[arg(long)]
        primes: Option<String>,
        #[arg(long, default_value_t = 200)]
        nmax: u64,
    },
    /// Hecke eigenform check on an eta stream.
    Hecke {
        /// Stream id: eta6_4 (weight 2) or eta3_8 (weight 4).
        #[arg(long)]
        series: String,
        /// Comma-separated primes to test.
        #[arg(long)]
        q: String,
        #[arg(long = "T", default_value_t = 10_000)]
        t: u64,
    },
    /// Newman recurrence check on f1*f3 or f1^3*f5.
    Newman {
        /// Which product: f1f3 or f1cubed_f5.
        #[arg(long)]
        kind: String,
        /// Prime p = 1 mod 6 to verify.
        #[arg(long)]
        p: Option<u64>,
        /// Instead of verifying, list primes below this bound satisfying the
        /// divisibility hypothesis.
        #[arg(long)]
        discover: Option<u64>,
        #[arg(long = "T", default_value_t = 10_000)]
        t: u64,
    },
    /// Fraction of n <= X with B_l(n) = 0 mod p^j.
    Density {
        #[arg(long = "l")]
        ell: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// Comma-separated checkpoints.
        #[arg(long = "X")]
        x: String,
        /// Extra checkpoints every `stride` up to the largest X.
        #[arg(long)]
        stride: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        format: cli.format,
        timestamp: if cli.no_timestamp {
            None
        } else {
            Some(SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
        },
        seed: cli.seed,
        coeff_cap: cli
            .max_coeffs
            .or_else(|| std::env::var(CAP_ENV_VAR).ok().and_then(|v| v.parse().ok()))
            .unwrap_or(DEFAULT_COEFF_CAP),
    };
    match run(&cli.command, &ctx) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::InvalidFactorization(_) => 2,
                _ => 1,
            })
        }
    }
}

struct Context {
    format: Format,
    timestamp: Option<u64>,
    seed: Option<u64>,
    coeff_cap: u64,
}

impl Context {
    /// Emit one report object, with csv/pretty side outputs.
    fn emit(&self, mut obj: Map<String, Value>, csv_row: String, pretty: String) {
        if let Some(ts) = self.timestamp {
            obj.insert("generated_at".into(), json!(ts));
        }
        if let Some(seed) = self.seed {
            obj.insert("seed".into(), json!(seed));
        }
        match self.format {
            Format::Json => println!("{}", Value::Object(obj)),
            Format::Csv => println!("{csv_row}"),
            Format::Pretty => {
                println!("{}", Value::Object(obj));
                eprintln!("{pretty}");
            }
        }
    }
}

fn big_number(v: &BigInt) -> Value {
    Value::Number(Number::from_string_unchecked(v.to_string()))
}

fn rational_string(r: &Rational) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_factored(text: &str) -> Result<Vec<(u64, u32)>, Error> {
    let mut out = Vec::new();
    for piece in text.split('*') {
        let (p, e) = match piece.split_once('^') {
            Some((p, e)) => (
                p.parse().map_err(|_| Error::Parse(format!("bad prime in `{piece}`")))?,
                e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{piece}`")))?,
            ),
            None => (
                piece.parse().map_err(|_| Error::Parse(format!("bad prime in `{piece}`")))?,
                1u32,
            ),
        };
        out.push((p, e));
    }
    Ok(out)
}

fn parse_list(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad integer `{s}`"))))
        .collect()
}

fn run(command: &Command, ctx: &Context) -> Result<bool, Error> {
    match command {
        Command::Coeffs { ell, t, modulus } => cmd_coeffs(ctx, *ell, *t, *modulus),
        Command::Eta { spec, level } => cmd_eta(ctx, spec, *level),
        Command::Radu { p, m, t, u, safety, strict_s } => {
            cmd_radu(ctx, *p, m, t, *u, *safety, *strict_s)
        }
        Command::Families { id, p, k, j, r, primes, nmax } => {
            cmd_families(ctx, id, *p, *k, *j, *r, primes.as_deref(), *nmax)
        }
        Command::Hecke { series, q, t } => cmd_hecke(ctx, series, q, *t),
        Command::Newman { kind, p, discover, t } => cmd_newman(ctx, kind, *p, *discover, *t),
        Command::Density { ell, p, j, x, stride } => cmd_density(ctx, *ell, *p, *j, x, *stride),
    }
}

fn cmd_coeffs(ctx: &Context, ell: u64, t: u64, modulus: u64) -> Result<bool, Error> {
    if ell < 2 {
        return Err(Error::InvalidFactorization("l must be at least 2".into()));
    }
    if t > ctx.coeff_cap {
        return Err(Error::ResourceCap { needed: t, cap: ctx.coeff_cap });
    }
    let ring = SeriesRing::modular(t as usize, modulus);
    let stream = bipartition_coeffs(ell, &ring);
    for n in 0..t as usize {
        let value = stream.series().coeff(n);
        let mut obj = Map::new();
        obj.insert("n".into(), json!(n));
        obj.insert("value".into(), big_number(&value));
        ctx.emit(obj, format!("{n},{value}"), format!("B_{ell}({n}) = {value}"));
    }
    Ok(true)
}

fn cmd_eta(ctx: &Context, spec: &str, level: Option<u64>) -> Result<bool, Error> {
    let terms = EtaQuotient::parse_terms(spec)?;
    let base = terms.iter().fold(1i128, |acc, &(d, _)| bipartitions::arith::lcm(acc, d as i128));
    let level = match level {
        Some(n) => n,
        None => eta::min_level(&terms, base as u64).unwrap_or(base as u64),
    };
    let eq = EtaQuotient::new(terms, level)?;
    let profile = eta::profile(&eq);
    let cusps = if profile.thm23_ok() { eta::holomorphy_report(&eq)? } else { Vec::new() };
    let all_holomorphic = profile.thm23_ok() && cusps.iter().all(|c| c.holomorphic);

    let cusp_rows: Vec<Value> = cusps
        .iter()
        .map(|c| {
            json!({
                "d": c.d,
                "order": rational_string(&c.order),
                "holomorphic": c.holomorphic,
            })
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("spec".into(), json!(spec));
    obj.insert("level".into(), json!(level));
    obj.insert("weight".into(), json!(rational_string(&profile.weight())));
    obj.insert("prefactor".into(), json!(rational_string(&profile.prefactor())));
    obj.insert(
        "s".into(),
        json!(format!("{}/{}", profile.s_numerator(), profile.s_denominator())),
    );
    obj.insert("thm23_ok".into(), json!(profile.thm23_ok()));
    obj.insert("holomorphic".into(), json!(all_holomorphic));
    obj.insert("cusps".into(), Value::Array(cusp_rows));

    let mut csv = String::from("d,order,holomorphic");
    let mut pretty = format!(
        "eta quotient {spec} at level {level}: weight {}, thm23_ok={}",
        rational_string(&profile.weight()),
        profile.thm23_ok()
    );
    for c in &cusps {
        csv.push_str(&format!("\n{},{},{}", c.d, rational_string(&c.order), c.holomorphic));
        pretty.push_str(&format!(
            "\n  cusp 1/{:<6} order {:>8}  {}",
            c.d,
            rational_string(&c.order),
            if c.holomorphic { "ok" } else { "NEGATIVE" }
        ));
    }
    ctx.emit(obj, csv, pretty);
    Ok(all_holomorphic)
}

fn report_to_json(report: &VerificationReport) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("p".into(), json!(report.input.p));
    obj.insert("m".into(), json!(report.context.m));
    obj.insert("t".into(), json!(report.input.t));
    obj.insert("u".into(), json!(report.input.u));
    obj.insert(
        "status".into(),
        json!(match report.status {
            Status::Proved => "proved",
            Status::Counterexample => "counterexample",
            Status::Inapplicable => "inapplicable",
        }),
    );
    obj.insert("kappa".into(), json!(report.context.kappa));
    obj.insert("A_t".into(), json!(report.context.a_t));
    obj.insert("epsilon_p".into(), json!(report.context.epsilon_p));
    obj.insert("N".into(), json!(report.context.n_level));
    obj.insert("P_t".into(), json!(report.context.p_t.iter().collect::<Vec<_>>()));
    obj.insert("nu".into(), json!(report.context.nu_floor));
    obj.insert("checked".into(), json!(report.checked_n_max));
    obj.insert("extended".into(), json!(report.extended_n_max));
    obj.insert(
        "witness".into(),
        match &report.witness {
            Some(w) => json!({"t_prime": w.t_prime, "n": w.n, "value": w.value}),
            None => Value::Null,
        },
    );
    if !report.warnings.is_empty() {
        obj.insert("warnings".into(), json!(report.warnings));
    }
    obj
}

fn cmd_radu(
    ctx: &Context,
    p: u64,
    m_spec: &str,
    t_spec: &str,
    u: u64,
    safety: u64,
    strict_s: bool,
) -> Result<bool, Error> {
    let m_factorization = parse_factored(m_spec)?;
    let m: u64 = m_factorization.iter().map(|&(q, e)| q.pow(e)).product();
    let opts = VerifyOptions {
        s_mode: if strict_s { SMode::AllUnits } else { SMode::Squares },
        safety_factor: safety,
        coeff_cap: ctx.coeff_cap,
    };
    let reports = if t_spec == "all" {
        search_families(p, m, u, &opts)?
    } else {
        let t: u64 = t_spec
            .parse()
            .map_err(|_| Error::Parse(format!("bad residue `{t_spec}` (want an integer or `all`)")))?;
        let input = RSInput { p, m_factorization, t, u };
        vec![verify_congruence(&input, &opts)?]
    };
    let mut all_proved = true;
    for report in &reports {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
        all_proved &= report.status == Status::Proved;
        let obj = report_to_json(report);
        let csv = format!(
            "{},{},{},{},{:?},{}",
            report.input.p,
            report.context.m,
            report.input.t,
            report.input.u,
            report.status,
            report.context.nu_floor
        );
        let pretty = format!(
            "B_{}({}n + t') mod {} for t' in {:?}: {:?} (nu = {}, checked {})",
            report.input.p,
            report.context.m,
            report.input.u,
            report.context.p_t,
            report.status,
            report.context.nu_floor,
            report.checked_n_max,
        );
        ctx.emit(obj, csv, pretty);
    }
    Ok(all_proved)
}

fn family_report_json(report: &FamilyReport) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("family".into(), json!(report.family));
    obj.insert("parameters".into(), json!(report.parameters));
    obj.insert("modulus".into(), json!(report.modulus));
    obj.insert("n_max".into(), json!(report.n_max));
    obj.insert(
        "verdict".into(),
        json!(match report.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
        }),
    );
    if let Some(note) = &report.note {
        obj.insert("note".into(), json!(note));
    }
    obj.insert(
        "counterexample".into(),
        match &report.counterexample {
            Some(w) => json!({
                "n": w.n,
                "index": w.index,
                "lhs": big_number(&w.lhs),
                "rhs": big_number(&w.rhs),
            }),
            None => Value::Null,
        },
    );
    obj
}

fn emit_family(ctx: &Context, report: &FamilyReport) -> bool {
    let obj = family_report_json(report);
    let csv = format!("{},{:?}", report.family, report.verdict);
    let pretty = format!(
        "{} [{}] n <= {}: {:?}{}",
        report.family,
        report.parameters,
        report.n_max,
        report.verdict,
        report.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
    );
    ctx.emit(obj, csv, pretty);
    report.verdict == Verdict::Pass
}

#[allow(clippy::too_many_arguments)]
fn cmd_families(
    ctx: &Context,
    id: &str,
    p: Option<u64>,
    k: Option<u32>,
    j: Option<u64>,
    r: Option<u64>,
    primes: Option<&str>,
    nmax: u64,
) -> Result<bool, Error> {
    let need = |name: &str, v: Option<u64>| {
        v.ok_or_else(|| Error::Parse(format!("family {id} needs --{name}")))
    };
    let family = match id {
        "thm8" | "thm10" => {
            let primes = parse_list(
                primes.ok_or_else(|| Error::Parse(format!("family {id} needs --primes")))?,
            )?;
            let j = need("j", j)?;
            if id == "thm8" {
                Family::Thm8 { primes, j }
            } else {
                Family::Thm10 { primes, j }
            }
        }
        "coro3" | "coro5" => {
            let (p, j) = (need("p", p)?, need("j", j)?);
            let k = k.unwrap_or(0);
            if id == "coro3" {
                Family::Coro3 { p, k, j }
            } else {
                Family::Coro5 { p, k, j }
            }
        }
        "newmann1" => Family::Newman1 { p: need("p", p)?, k: k.unwrap_or(0) },
        "newmann2" => Family::Newman2 { p: need("p", p)?, k: k.unwrap_or(0) },
        "thm9" => Family::Thm9 {
            p: need("p", p)?,
            k: k.unwrap_or(1),
            r: r.ok_or_else(|| Error::Parse("family thm9 needs --r".into()))?,
        },
        "thm11" => Family::Thm11 {
            p: need("p", p)?,
            k: k.unwrap_or(1),
            r: r.ok_or_else(|| Error::Parse("family thm11 needs --r".into()))?,
        },
        "coro4" => Family::Coro4 { p: need("p", p)?, k: k.unwrap_or(1) },
        "coro6" => Family::Coro6 { p: need("p", p)?, k: k.unwrap_or(1) },
        other => return Err(Error::Parse(format!("unknown family id `{other}`"))),
    };
    let report = congruence::verify_family(&family, nmax)?;
    Ok(emit_family(ctx, &report))
}

fn cmd_hecke(ctx: &Context, series: &str, q_list: &str, t: u64) -> Result<bool, Error> {
    if t > ctx.coeff_cap {
        return Err(Error::ResourceCap { needed: t, cap: ctx.coeff_cap });
    }
    let ring = SeriesRing::exact(t as usize);
    let (stream, weight) = match series {
        "eta6_4" => (congruence::eta4_of_6z(&ring), 2u32),
        "eta3_8" => (congruence::eta8_of_3z(&ring), 4),
        other => {
            return Err(Error::Parse(format!(
                "unknown series `{other}` (want eta6_4 or eta3_8)"
            )))
        }
    };
    let mut all_passed = true;
    for q in parse_list(q_list)? {
        if !bipartitions::arith::is_prime(q) {
            return Err(Error::Parse(format!("q = {q} is not prime")));
        }
        // chi(q) = 1 at primes coprime to the level: s is a perfect square
        // and the weight even for both streams.
        let report: HeckeReport = congruence::check_eigenform(series, &stream, q, weight, 1);
        all_passed &= report.passed();
        let mut obj = Map::new();
        obj.insert("series".into(), json!(report.series_id));
        obj.insert("q".into(), json!(report.q));
        obj.insert("weight".into(), json!(report.weight));
        obj.insert("chi".into(), json!(report.chi_q));
        obj.insert("lambda".into(), big_number(&report.lambda));
        obj.insert(
            "violation".into(),
            match &report.violation {
                Some(v) => json!({"n": v.n, "lhs": big_number(&v.lhs), "rhs": big_number(&v.rhs)}),
                None => Value::Null,
            },
        );
        let csv = format!("{series},{q},{},{}", report.lambda, report.passed());
        let pretty = format!(
            "{series} | T_{q}: lambda = {}{}",
            report.lambda,
            if report.passed() { ", eigenform relation holds" } else { ", VIOLATED" }
        );
        ctx.emit(obj, csv, pretty);
    }
    Ok(all_passed)
}

fn cmd_newman(
    ctx: &Context,
    kind: &str,
    p: Option<u64>,
    discover: Option<u64>,
    t: u64,
) -> Result<bool, Error> {
    let kind = match kind {
        "f1f3" => NewmanKind::F1F3,
        "f1cubed_f5" => NewmanKind::F1CubedF5,
        other => {
            return Err(Error::Parse(format!(
                "unknown newman kind `{other}` (want f1f3 or f1cubed_f5)"
            )))
        }
    };
    if let Some(bound) = discover {
        let primes = congruence::qualifying_newman_primes(kind, bound);
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(format!("{kind:?}")));
        obj.insert("bound".into(), json!(bound));
        obj.insert("qualifying_primes".into(), json!(primes));
        let csv = primes.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let pretty = format!("qualifying primes below {bound}: {primes:?}");
        ctx.emit(obj, csv, pretty);
        return Ok(true);
    }
    let p = p.ok_or_else(|| Error::Parse("newman needs --p or --discover".into()))?;
    if t > ctx.coeff_cap {
        return Err(Error::ResourceCap { needed: t, cap: ctx.coeff_cap });
    }
    let report = congruence::newman_check(kind, p, t as usize);
    Ok(emit_family(ctx, &report))
}

fn cmd_density(
    ctx: &Context,
    ell: u64,
    p: u64,
    j: u32,
    x_spec: &str,
    stride: Option<u64>,
) -> Result<bool, Error> {
    let xs = parse_list(x_spec)?;
    let points = density_scan(ell, p, j, &xs, stride, ctx.coeff_cap)?;
    let hypothesis = density_hypothesis(ell, p);
    for point in &points {
        let mut obj = Map::new();
        obj.insert("l".into(), json!(ell));
        obj.insert("p".into(), json!(p));
        obj.insert("j".into(), json!(j));
        obj.insert("X".into(), json!(point.x));
        obj.insert("divisible".into(), json!(point.divisible));
        obj.insert("fraction".into(), json!(rational_string(&point.fraction)));
        obj.insert("hypothesis_p2a".into(), json!(hypothesis));
        let frac = point.divisible as f64 / point.x as f64;
        ctx.emit(
            obj,
            format!("{},{},{}", point.x, point.divisible, rational_string(&point.fraction)),
            format!(
                "B_{ell} = 0 mod {p}^{j} for {} of the first {} indices ({frac:.4})",
                point.divisible, point.x
            ),
        );
    }
    Ok(true)
}
