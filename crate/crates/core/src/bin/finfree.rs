//! `finfree`: exact finite free probability from the command line.
//!
//! Exit status: 0 on success, 1 when a checked identity fails, 2 on usage
//! errors (bad flags, malformed rationals, exceeded caps).

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use finfree::asymptotics::{
    cauchy_from_moments, derivative_flow_trend, g_inf_from_cauchy, infinitesimal_three_paths, k_transform,
    markov_transform, r_inf_from_k, r_transform, MomentProfile,
};
use finfree::families::FamilyKind;
use finfree::ffpoly::{parse_poly_json, MonicPoly};
use finfree::identity::{genus_layer, genus_lhs, order_d_expansion, WeightSequences};
use finfree::limits::Limits;
use finfree::random::RationalRng;
use finfree::rational::{fmt_q, parse_q, Q};
use finfree::series::LaurentSeries;
use finfree::verify::{run_check, Check, CheckReport, VerifyOptions, Witness};
use finfree::{Error, Result};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "finfree", version, about = "Exact finite free probability")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Emit::Pretty)]
    emit: Emit,
    /// Include per-case witnesses in reports.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Additive or multiplicative convolution of two polynomials.
    Convolve(ConvolveArgs),
    /// Finite free cumulants of a polynomial.
    Cumulants(PolyArgs),
    /// Moments of the empirical root distribution.
    Moments(MomentArgs),
    /// Coefficients of a family member.
    Family(PolyArgs),
    /// Seeded identity checks.
    Verify(VerifyArgs),
    /// Genus layers of the pair expansion for random weights.
    GenusTable(GenusArgs),
    /// `m_n` of a family as an exact polynomial in `1/d`.
    Expand(ExpandArgs),
    /// Infinitesimal moments and cumulants of a family's limit law.
    Infinitesimal(InfinitesimalArgs),
    /// Finite-`d` trend of repeated differentiation.
    DerivativeFlow(FlowArgs),
    /// Series transforms of a moment sequence.
    Transform(TransformArgs),
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// `power`, `hermite` or `laguerre`.
    #[arg(long)]
    family: Option<String>,
    /// Root of the power family, as `num/den`.
    #[arg(long)]
    a: Option<String>,
    /// Laguerre rate, as `num/den`.
    #[arg(long)]
    lambda: Option<String>,
}

impl FamilyArgs {
    fn kind(&self) -> Result<FamilyKind> {
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| Error::Parse("--family is required".into()))?;
        let kind = FamilyKind::from_selector(name, self.a.as_deref(), self.lambda.as_deref())?;
        kind.validate()?;
        Ok(kind)
    }

    fn params(&self) -> Value {
        json!({ "family": self.family, "a": self.a, "lambda": self.lambda })
    }
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Polynomial as JSON (`{"a": [...]}` or `{"roots": [...]}`) or a path to such a file.
    #[arg(long, conflicts_with = "family")]
    poly: Option<String>,
    #[command(flatten)]
    fam: FamilyArgs,
    /// Degree for a family member.
    #[arg(long)]
    d: Option<usize>,
}

impl PolyArgs {
    fn resolve(&self) -> Result<MonicPoly> {
        match &self.poly {
            Some(src) => read_poly(src),
            None => {
                let d = self.d.ok_or_else(|| Error::Parse("--d is required with --family".into()))?;
                self.fam.kind()?.poly(d)
            }
        }
    }

    fn params(&self) -> Value {
        let mut p = self.fam.params();
        p["poly"] = json!(self.poly);
        p["d"] = json!(self.d);
        p
    }
}

#[derive(Args, Debug)]
struct MomentArgs {
    #[command(flatten)]
    poly: PolyArgs,
    /// Highest moment; defaults to the degree.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConvolveOp {
    Boxplus,
    Boxtimes,
}

#[derive(Args, Debug)]
struct ConvolveArgs {
    #[arg(long, value_enum)]
    op: ConvolveOp,
    /// First polynomial, JSON or path.
    #[arg(long)]
    p: String,
    /// Second polynomial, JSON or path.
    #[arg(long)]
    q: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Comma-separated identity names.
    #[arg(long, value_delimiter = ',', required = true)]
    identity: Vec<String>,
    /// Largest order checked.
    #[arg(long)]
    n: Option<usize>,
    /// Degree `D` or inclusive range `LO..HI`.
    #[arg(long)]
    d: Option<String>,
    /// Random cases per order or degree.
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GenusArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    n: usize,
    /// Emit every order from 1 to `n`.
    #[arg(long)]
    upto: bool,
}

#[derive(Args, Debug)]
struct InfinitesimalArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Highest order.
    #[arg(long, default_value_t = 8)]
    order: usize,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Fraction of roots kept, in (0, 1).
    #[arg(long, default_value = "1/2")]
    t: String,
    #[arg(long)]
    n: usize,
    /// Degrees, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    ds: Vec<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TransformOp {
    Cauchy,
    K,
    R,
    Markov,
    Ginf,
    Rinf,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Moments `m_1..m_N` as a JSON array or `{"m": [...]}`, inline or a path.
    #[arg(long = "in")]
    input: String,
    #[arg(long, value_enum)]
    op: TransformOp,
    /// Truncation order; defaults to the number of moments given.
    #[arg(long)]
    order: Option<usize>,
}

/// Rows with a fixed column order, plus the JSON envelope fields.
struct Output {
    subcommand: &'static str,
    params: Value,
    seed: u64,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    /// Overrides the row-derived `results` in JSON.
    results: Option<Vec<Value>>,
    /// Overrides the table in pretty mode.
    pretty: Option<String>,
    all_passed: bool,
}

impl Output {
    fn table(subcommand: &'static str, params: Value, columns: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Output {
            subcommand,
            params,
            seed: 0,
            columns,
            rows,
            results: None,
            pretty: None,
            all_passed: true,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool_version: &'static str,
    schema_version: u32,
    subcommand: &'a str,
    params: &'a Value,
    caps: Limits,
    seed: u64,
    results: Vec<Value>,
    all_passed: bool,
}

fn read_source(src: &str) -> Result<String> {
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(src.to_string());
    }
    std::fs::read_to_string(src).map_err(|e| Error::Parse(format!("cannot read {src}: {e}")))
}

fn read_poly(src: &str) -> Result<MonicPoly> {
    parse_poly_json(&read_source(src)?)
}

fn read_moments(src: &str) -> Result<Vec<Q>> {
    let text = read_source(src)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("moment JSON: {e}")))?;
    let arr = match &v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("m")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("moment JSON object needs an \"m\" array".into()))?,
        _ => return Err(Error::Parse("moment JSON must be an array or {\"m\": [...]}".into())),
    };
    arr.iter()
        .map(|x| match x {
            Value::String(s) => parse_q(s),
            Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().expect("checked").into())),
            other => Err(Error::Parse(format!("moment {other} is not a \"num/den\" string or integer"))),
        })
        .collect()
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("degree {t:?} is not an integer")))
    };
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b.trim_start_matches('='))?)),
        None => {
            let d = num(s)?;
            Ok((d, d))
        }
    }
}

fn at(w: &Witness) -> String {
    let mut s = String::new();
    if let Some(n) = w.n {
        let _ = write!(s, " n={n}");
    }
    if let Some(d) = w.d {
        let _ = write!(s, " d={d}");
    }
    s
}

fn qs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Family(args) => {
            let p = args.resolve()?;
            let rows = p.a().iter().enumerate().map(|(i, c)| vec![i.to_string(), fmt_q(c)]).collect();
            let mut out = Output::table("family", args.params(), vec!["i", "a_i"], rows);
            out.results = Some(vec![serde_json::to_value(p.to_json()).expect("plain data")]);
            out.pretty = Some(format!("{p}\n"));
            Ok(out)
        }
        Command::Cumulants(args) => {
            let p = args.resolve()?;
            let k = p.cumulants()?;
            let rows = k.values().iter().enumerate().map(|(i, c)| vec![(i + 1).to_string(), fmt_q(c)]).collect();
            Ok(Output::table("cumulants", args.params(), vec!["n", "kappa_n"], rows))
        }
        Command::Moments(args) => {
            let p = args.poly.resolve()?;
            let n = args.n.unwrap_or(p.d());
            let m = p.moments(n);
            let rows = m.values().iter().enumerate().map(|(i, c)| vec![(i + 1).to_string(), fmt_q(c)]).collect();
            let mut params = args.poly.params();
            params["n"] = json!(n);
            Ok(Output::table("moments", params, vec!["n", "m_n"], rows))
        }
        Command::Convolve(args) => {
            let p = read_poly(&args.p)?;
            let q = read_poly(&args.q)?;
            let r = match args.op {
                ConvolveOp::Boxplus => p.boxplus(&q)?,
                ConvolveOp::Boxtimes => p.boxtimes(&q)?,
            };
            let rows = r.a().iter().enumerate().map(|(i, c)| vec![i.to_string(), fmt_q(c)]).collect();
            let params = json!({ "op": format!("{:?}", args.op).to_lowercase(), "p": args.p, "q": args.q });
            let mut out = Output::table("convolve", params, vec!["i", "a_i"], rows);
            out.results = Some(vec![serde_json::to_value(r.to_json()).expect("plain data")]);
            out.pretty = Some(format!("{r}\n"));
            Ok(out)
        }
        Command::Expand(args) => {
            let kind = args.fam.kind()?;
            let k = kind.cumulant_profile(args.n);
            let from = if args.upto { 1 } else { args.n };
            let mut rows = Vec::new();
            for n in from..=args.n {
                rows.push(vec![n.to_string(), order_d_expansion(n, &k)?.to_string()]);
            }
            let pretty = if args.upto {
                rows.iter().map(|r| format!("m_{}: {}\n", r[0], r[1])).collect()
            } else {
                format!("{}\n", rows[0][1])
            };
            let mut params = args.fam.params();
            params["n"] = json!(args.n);
            params["upto"] = json!(args.upto);
            let mut out = Output::table("expand", params, vec!["n", "m_n"], rows);
            out.pretty = Some(pretty);
            Ok(out)
        }
        Command::Verify(args) => {
            let checks: Vec<Check> = args.identity.iter().map(|s| s.parse()).collect::<Result<_>>()?;
            let opts = VerifyOptions {
                n: args.n,
                d: args.d.as_deref().map(parse_range).transpose()?,
                cases: args.cases,
                seed: args.seed,
                verbose: cli.verbose,
            };
            let reports: Vec<CheckReport> = checks.iter().map(|c| run_check(*c, &opts)).collect::<Result<_>>()?;
            let mut rows = Vec::new();
            let mut pretty = String::new();
            for r in &reports {
                let f = r.first_failure.as_ref();
                rows.push(vec![
                    r.identity.clone(),
                    r.cases.to_string(),
                    r.all_passed.to_string(),
                    f.map(|w| w.label.clone()).unwrap_or_default(),
                    f.and_then(|w| w.n).map(|n| n.to_string()).unwrap_or_default(),
                    f.and_then(|w| w.d).map(|d| d.to_string()).unwrap_or_default(),
                    f.map(|w| w.lhs.clone()).unwrap_or_default(),
                    f.map(|w| w.rhs.clone()).unwrap_or_default(),
                ]);
                let verdict = if r.all_passed { "PASS" } else { "FAIL" };
                let _ = writeln!(pretty, "{verdict} {} ({} cases)", r.identity, r.cases);
                if let Some(w) = f {
                    let _ = writeln!(
                        pretty,
                        "  first failure: {}{}: {} != {}",
                        w.label,
                        at(w),
                        w.lhs,
                        w.rhs
                    );
                }
                for w in &r.witnesses {
                    let mark = if w.passed { "ok" } else { "FAIL" };
                    let _ = writeln!(pretty, "  {mark} {}{}: {} | {}", w.label, at(w), w.lhs, w.rhs);
                }
            }
            let params = json!({ "identity": args.identity, "n": args.n, "d": args.d, "cases": args.cases });
            let all = reports.iter().all(|r| r.all_passed);
            Ok(Output {
                subcommand: "verify",
                params,
                seed: args.seed,
                columns: vec!["identity", "cases", "all_passed", "failure_label", "n", "d", "lhs", "rhs"],
                rows,
                results: Some(reports.iter().map(|r| serde_json::to_value(r).expect("plain data")).collect()),
                pretty: Some(pretty),
                all_passed: all,
            })
        }
        Command::GenusTable(args) => {
            let n = args.n;
            let mut rng = RationalRng::new(args.seed);
            let w = WeightSequences::new(rng.vector(n), rng.vector(n));
            let mut rows = Vec::new();
            let mut all = true;
            for k in 0..n {
                let lhs = genus_lhs(n, k, &w)?;
                let mut total = Q::zero();
                for g in 0..=k / 2 {
                    let layer = genus_layer(n, k, g, &w)?;
                    total += &layer.value;
                    rows.push(vec![k.to_string(), g.to_string(), fmt_q(&layer.value), fmt_q(&lhs), String::new()]);
                }
                let signed = if k % 2 == 1 { -total } else { total };
                let ok = signed == lhs;
                all &= ok;
                if let Some(last) = rows.last_mut() {
                    last[4] = ok.to_string();
                }
            }
            let params = json!({ "n": n, "u": qs(&w.u), "v": qs(&w.v) });
            let mut out = Output::table("genus-table", params, vec!["k", "g", "layer", "lhs", "k_passed"], rows);
            out.seed = args.seed;
            out.all_passed = all;
            Ok(out)
        }
        Command::Infinitesimal(args) => {
            let kind = args.fam.kind()?;
            let rep = infinitesimal_three_paths(&kind.cumulant_profile(args.order), args.order)?;
            let rows = (0..args.order)
                .map(|i| {
                    vec![
                        (i + 1).to_string(),
                        fmt_q(&rep.profile.mp[i]),
                        fmt_q(&rep.profile.kp[i]),
                        (rep.annular[i] == rep.series[i] && rep.series[i] == rep.expansion[i]).to_string(),
                    ]
                })
                .collect();
            let mut params = args.fam.params();
            params["order"] = json!(args.order);
            let mut out = Output::table("infinitesimal", params, vec!["n", "m_prime", "kappa_prime", "paths_agree"], rows);
            out.all_passed = rep.agree;
            Ok(out)
        }
        Command::DerivativeFlow(args) => {
            let kind = args.fam.kind()?;
            let t = parse_q(&args.t)?;
            let rep = derivative_flow_trend(&kind, &t, args.n, &args.ds)?;
            let rows = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.d.to_string(),
                        r.value.clone(),
                        r.target.clone(),
                        r.gap.clone(),
                        r.ratio.map(|x| format!("{x:.6}")).unwrap_or_default(),
                    ]
                })
                .collect();
            let mut params = args.fam.params();
            params["t"] = json!(args.t);
            params["n"] = json!(args.n);
            params["ds"] = json!(args.ds);
            Ok(Output::table(
                "derivative-flow",
                params,
                vec!["d", "moment", "target", "gap", "ratio_to_double"],
                rows,
            ))
        }
        Command::Transform(args) => {
            let m = read_moments(&args.input)?;
            let order = args.order.unwrap_or(m.len());
            if order > m.len() {
                return Err(Error::Truncation {
                    requested: order as i64,
                    known: m.len() as i64,
                });
            }
            let g = cauchy_from_moments(&MomentProfile::new(m[..order].to_vec()));
            let (var, series): (&str, LaurentSeries) = match args.op {
                TransformOp::Cauchy => ("w", g),
                TransformOp::Markov => ("w", markov_transform(&g)?),
                TransformOp::Ginf => ("w", g_inf_from_cauchy(&g)?),
                TransformOp::K => ("z", k_transform(&g, order)?),
                TransformOp::R => ("z", LaurentSeries::from_power(&r_transform(&k_transform(&g, order)?)?)),
                TransformOp::Rinf => ("z", LaurentSeries::from_power(&r_inf_from_k(&k_transform(&g, order)?)?)),
            };
            let s = series;
            let rows = (s.val()..s.prec())
                .map(|e| Ok(vec![var.to_string(), e.to_string(), fmt_q(&s.coeff(e)?)]))
                .collect::<Result<_>>()?;
            let params = json!({ "in": args.input, "op": format!("{:?}", args.op).to_lowercase(), "order": order });
            Ok(Output::table("transform", params, vec!["variable", "exponent", "coefficient"], rows))
        }
    }
}

fn emit(out: &Output, how: Emit) -> Result<String> {
    match how {
        Emit::Json => {
            let results = out.results.clone().unwrap_or_else(|| {
                out.rows
                    .iter()
                    .map(|r| {
                        let obj: serde_json::Map<String, Value> = out
                            .columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.to_string(), Value::String(v.clone())))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect()
            });
            let env = Envelope {
                tool_version: env!("CARGO_PKG_VERSION"),
                schema_version: SCHEMA_VERSION,
                subcommand: out.subcommand,
                params: &out.params,
                caps: Limits::current(),
                seed: out.seed,
                results,
                all_passed: out.all_passed,
            };
            let mut s = serde_json::to_string_pretty(&env).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Emit::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
            w.write_record(&out.columns).map_err(io)?;
            for r in &out.rows {
                w.write_record(r).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
        }
        Emit::Pretty => {
            if let Some(p) = &out.pretty {
                return Ok(p.clone());
            }
            let widths: Vec<usize> = out
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| out.rows.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            let mut s = line(out.columns.clone());
            for r in &out.rows {
                s += &line(r.iter().map(String::as_str).collect());
            }
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Limits::from_env().and_then(|caps| {
        caps.install();
        let out = run(&cli)?;
        Ok((emit(&out, cli.emit)?, out.all_passed))
    });
    match result {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("finfree: {e}");
            ExitCode::from(2)
        }
    }
}
