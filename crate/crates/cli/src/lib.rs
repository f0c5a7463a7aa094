//! Command-line front end: argument parsing, dispatch, and the JSON report.

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use oddtors::elliptic::{parse_curve, CurvePoint, WeierstrassCurve};
use oddtors::growth::classify_growth;
use oddtors::isogeny::{cyclic_kernels, report as kernel_report};
use oddtors::jacobian::{summarize, HyperCurve};
use oddtors::modcurves::{self, search_points, verify_identity, verify_model};
use oddtors::poly::multi::parse_mpoly;
use oddtors::suite::{self, Outcome, DEFAULT_SEED};
use oddtors::torsion::{torsion_over_quadratic_ext, torsion_subgroup, GroupType, TorsionStructure};
use oddtors::{Error, NumberField, QuadElem, QuadField, Rationals};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Mismatch,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 2,
            Status::Error => 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifacts {
    pub seed: u64,
    pub primes_used: Vec<String>,
    pub heights: Vec<u64>,
}

/// Everything one invocation produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub inputs: Value,
    pub status: Status,
    pub results: Value,
    pub artifacts: Artifacts,
    pub wall_time_ms: u64,
}

#[derive(Parser, Debug)]
#[command(name = "oddtors", version, about = "Odd torsion growth, isogeny signatures and modular-curve checks")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Machine-readable JSON output (the default).
    #[arg(long, global = true, conflicts_with = "human")]
    pub json: bool,
    /// Plain-text rendering instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// Worker threads for parallel verification.
    #[arg(long, global = true, env = "ODDTORS_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// K = Q(sqrt(-D)).
    #[arg(short = 'd', long = "disc")]
    pub d: Option<u64>,
    /// Base field override; only `Q` is accepted.
    #[arg(long)]
    pub field: Option<String>,
    /// Weierstrass coefficients "[a1,a2,a3,a4,a6]" or "[a4,a6]"; w is the
    /// generator with w^2 = -D.
    #[arg(long)]
    pub curve: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Torsion subgroup over K, optionally over K(sqrt(d)).
    Torsion {
        #[command(flatten)]
        curve: CurveArgs,
        /// Twist parameter d in K (e.g. -3).
        #[arg(long, allow_hyphen_values = true)]
        extend: Option<String>,
        /// Expected group, e.g. "Z3" or "Z3+Z9" (over K(sqrt(d)) with --extend).
        #[arg(long)]
        expect: Option<String>,
    },
    /// Odd torsion growth in quadratic extensions.
    Classify {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Galois-stable cyclic kernels of order a*b and their signatures.
    Isogeny {
        #[command(flatten)]
        curve: CurveArgs,
        /// "a" or "a,b" with coprime odd prime powers.
        #[arg(long)]
        orders: String,
    },
    /// Point counts, L-polynomial and group structure of J(F_p).
    Jacobian {
        /// Registry name, "[f0,f1,...]" for y^2 = f, or "y^2 + h(x)y = f(x)".
        #[arg(long)]
        model: String,
        /// Odd prime of good reduction.
        #[arg(short = 'p', long)]
        prime: u64,
        /// Expected invariant factors, e.g. "2,52".
        #[arg(long)]
        expect: Option<String>,
    },
    /// Named verification suites.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Bounded-height point search on a registered model.
    Search {
        /// Registry name, e.g. "X0(77)+".
        #[arg(long)]
        model: String,
        /// Search over Q(sqrt(-D)); omit for Q.
        #[arg(short = 'd', long = "disc")]
        d: Option<u64>,
        /// Bound on max(|a|, b) for x = a/b.
        #[arg(long, default_value_t = 20)]
        height: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyWhat {
    /// Corpus growth against the theorem list.
    Table1,
    /// X0(21) points and 21-isogeny signatures.
    Table2,
    /// X0(33) exceptional points and 33-isogeny signatures.
    Table3,
    /// The two Z9 curves and their growth to Z3+Z9.
    Remark4,
    /// Registered points against a model's equations.
    Model { name: String },
    /// One of the polynomial identities i..v.
    Identity { name: String },
    /// One acceptance criterion, 1..13.
    Criterion { n: usize },
    /// Every acceptance criterion.
    All,
}

/// Outcome of a command before timing and echo are attached.
struct Done {
    inputs: Value,
    status: Status,
    results: Value,
    artifacts: Artifacts,
}

fn done(inputs: Value, ok: bool, results: Value, artifacts: Artifacts) -> Done {
    Done { inputs, status: if ok { Status::Ok } else { Status::Mismatch }, results, artifacts }
}

enum Field {
    Q,
    K(QuadField),
}

fn base_field(c: &CurveArgs) -> Result<Field, Error> {
    match (c.field.as_deref(), c.d) {
        (Some(f), _) if f.eq_ignore_ascii_case("q") => Ok(Field::Q),
        (Some(f), _) => Err(Error::InvalidInput(format!("unsupported --field {f}; only Q is accepted"))),
        (None, Some(d)) => Ok(Field::K(QuadField::imaginary(d)?)),
        (None, None) => Err(Error::InvalidInput("give -d <D> or --field Q".into())),
    }
}

fn parse_elem<K: NumberField>(k: &K, s: &str) -> Result<K::Elem, Error> {
    let q: QuadElem = s.parse()?;
    k.from_quad(&q).ok_or_else(|| Error::Parse(format!("{s} is not in {}", k.name())))
}

fn structure_json<K: NumberField>(e: &WeierstrassCurve<K>, t: &TorsionStructure<K::Elem>) -> Value {
    json!({
        "group": t.group.to_string(),
        "invariants": t.group.invariants(),
        "generators": t.generators.iter().map(|(p, n)| json!({ "point": e.fmt_point(p), "order": n })).collect::<Vec<_>>(),
    })
}

fn ext_point<K: NumberField>(k: &K, d: &K::Elem, p: &CurvePoint<(K::Elem, K::Elem)>) -> String {
    let f = |a: &(K::Elem, K::Elem)| format!("{} + ({})*sqrt({})", NumberField::fmt(k, &a.0), NumberField::fmt(k, &a.1), NumberField::fmt(k, d));
    match p {
        CurvePoint::Infinity => "O".into(),
        CurvePoint::Affine(x, y) => format!("({}, {})", f(x), f(y)),
    }
}

fn torsion_in<K: NumberField>(k: &K, curve: &str, extend: Option<&str>) -> Result<(Value, Vec<String>), Error> {
    let e = parse_curve(k, curve)?;
    let t = torsion_subgroup(&e)?;
    let bound = t.bound.clone();
    let primes: Vec<String> = bound.iter().flat_map(|b| b.primes.iter().map(|p| p.label.clone())).collect();
    let mut out = structure_json(&e, &t);
    out["field"] = json!(k.name());
    out["proof"] = json!({
        "primes_used": primes,
        "bound": bound.as_ref().map(|b| b.bound),
        "bound_structure": bound.as_ref().map(|b| b.structure.to_string()),
        "reductions": bound.as_ref().map(|b| &b.primes),
    });
    if let Some(ds) = extend {
        let d = parse_elem(k, ds)?;
        let ext = torsion_over_quadratic_ext(&e, &d)?;
        out["extension"] = json!({
            "field": ext.structure.field,
            "group": ext.structure.group.to_string(),
            "invariants": ext.structure.group.invariants(),
            "generators": ext.structure.generators.iter()
                .map(|(p, n)| json!({ "point": ext_point(k, &d, p), "order": n }))
                .collect::<Vec<_>>(),
            "twist": structure_json(&e.quadratic_twist(&d)?, &ext.twist),
        });
    }
    Ok((out, primes))
}

fn classify_in<K: NumberField>(k: &K, curve: &str) -> Result<(Value, bool), Error> {
    let e = parse_curve(k, curve)?;
    let rep = classify_growth(&e)?;
    let findings: Vec<Value> = rep
        .findings
        .iter()
        .map(|f| {
            json!({
                "class": NumberField::fmt(k, &f.class),
                "scan_orders": f.scan_orders,
                "twist_torsion": f.twist_torsion.group.to_string(),
                "extension": f.extension.to_string(),
            })
        })
        .collect();
    let v = &rep.verdict;
    let ok = v.in_theorem_list && v.in_table_row && v.twist_exclusions_hold;
    let out = json!({
        "field": rep.field,
        "base": structure_json(&e, &rep.base),
        "findings": findings,
        "verdict": {
            "in_theorem_list": v.in_theorem_list,
            "in_table_row": v.in_table_row,
            "twist_exclusions_hold": v.twist_exclusions_hold,
        },
    });
    Ok((out, ok))
}

fn isogeny_in<K: NumberField>(k: &K, curve: &str, a: u64, b: u64) -> Result<Value, Error> {
    let e = parse_curve(k, curve)?;
    let kernels = cyclic_kernels(&e, a, b)?;
    let reports = kernels.iter().map(|kp| kernel_report(k, kp)).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({ "field": k.name(), "order": a * b, "kernels": reports }))
}

fn parse_orders(s: &str) -> Result<(u64, u64), Error> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad order {t}"))))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [a] => Ok((*a, 1)),
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Parse("orders must be \"a\" or \"a,b\"".into())),
    }
}

/// Registry name, "[f0,...,fn]", or an equation y^2 + h(x)y = f(x).
pub fn parse_hyper(model: &str) -> Result<HyperCurve, Error> {
    if let Ok(entry) = modcurves::model(model) {
        return entry.curve();
    }
    let t = model.trim();
    if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        let f: Vec<i64> = inner
            .split(',')
            .map(|c| c.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {c}"))))
            .collect::<Result<_, _>>()?;
        return HyperCurve::from_i64s(&f, &[]);
    }
    let vars = vec!["x".to_string(), "y".to_string()];
    let p = parse_mpoly(t, &vars)?;
    let (mut f, mut h) = (Vec::new(), Vec::new());
    for (e, c) in &p.terms {
        if !c.is_integer() {
            return Err(Error::InvalidInput("coefficients must be integers".into()));
        }
        let slot = |v: &mut Vec<num_bigint::BigInt>, i: usize, c: num_bigint::BigInt| {
            if v.len() <= i {
                v.resize(i + 1, 0.into());
            }
            v[i] = c;
        };
        let (i, c) = (e[0] as usize, c.to_integer());
        match e[1] {
            2 if i == 0 && c == 1.into() => {}
            1 => slot(&mut h, i, c),
            0 => slot(&mut f, i, -c),
            _ => return Err(Error::InvalidInput(format!("{model} is not of the form y^2 + h(x)y = f(x)"))),
        }
    }
    let to_i64 = |v: Vec<num_bigint::BigInt>| -> Result<Vec<i64>, Error> {
        v.into_iter().map(|c| i64::try_from(c).map_err(|_| Error::InvalidInput("coefficient too large".into()))).collect()
    };
    HyperCurve::from_i64s(&to_i64(f)?, &to_i64(h)?)
}

fn outcome_status(items: &[Outcome]) -> bool {
    items.iter().all(|o| o.passed)
}

fn execute(cli: &Cli) -> Result<Done, Error> {
    let seed = cli.seed;
    let arts = |primes: Vec<String>, heights: Vec<u64>| Artifacts { seed, primes_used: primes, heights };
    match &cli.command {
        Command::Torsion { curve, extend, expect } => {
            let inputs = json!({ "curve": curve.curve, "d": curve.d, "field": curve.field, "extend": extend, "expect": expect });
            let want = expect.as_deref().map(str::parse::<GroupType>).transpose()?;
            let (mut out, primes) = match base_field(curve)? {
                Field::Q => torsion_in(&Rationals, &curve.curve, extend.as_deref())?,
                Field::K(k) => torsion_in(&k, &curve.curve, extend.as_deref())?,
            };
            let got = if extend.is_some() { &out["extension"]["group"] } else { &out["group"] };
            let ok = want.map_or(true, |w| got.as_str() == Some(w.to_string().as_str()));
            if let Some(w) = want {
                out["expected"] = json!(w.to_string());
            }
            Ok(done(inputs, ok, out, arts(primes, vec![])))
        }
        Command::Classify { curve } => {
            let inputs = json!({ "curve": curve.curve, "d": curve.d, "field": curve.field });
            let (out, ok) = match base_field(curve)? {
                Field::Q => classify_in(&Rationals, &curve.curve)?,
                Field::K(k) => classify_in(&k, &curve.curve)?,
            };
            Ok(done(inputs, ok, out, arts(vec![], vec![])))
        }
        Command::Isogeny { curve, orders } => {
            let (a, b) = parse_orders(orders)?;
            let inputs = json!({ "curve": curve.curve, "d": curve.d, "field": curve.field, "orders": [a, b] });
            let out = match base_field(curve)? {
                Field::Q => isogeny_in(&Rationals, &curve.curve, a, b)?,
                Field::K(k) => isogeny_in(&k, &curve.curve, a, b)?,
            };
            Ok(done(inputs, true, out, arts(vec![], vec![])))
        }
        Command::Jacobian { model, prime, expect } => {
            let want: Option<Vec<u64>> = expect
                .as_deref()
                .map(|e| e.split(',').map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad invariant {t}")))).collect())
                .transpose()?;
            let hc = parse_hyper(model)?;
            let s = summarize(&hc.reduce(*prime)?)?;
            let ok = s.extra_counts_agree != Some(false)
                && s.invariant_factors.iter().product::<u64>() == s.order
                && want.as_ref().map_or(true, |w| *w == s.invariant_factors);
            let out = json!({
                "p": s.p,
                "genus": s.genus,
                "counts": s.counts,
                "L_coeffs": s.l_coeffs,
                "order": s.order,
                "invariant_factors": s.invariant_factors,
                "generators": s.generators,
                "extra_counts_agree": s.extra_counts_agree,
            });
            Ok(done(json!({ "model": model, "p": prime, "expect": want }), ok, out, arts(vec![prime.to_string()], vec![])))
        }
        Command::Verify { what } => verify(what, seed),
        Command::Search { model, d, height } => {
            let entry = modcurves::model(model)?;
            let w2 = d.map(|d| -(d as i64));
            let res = search_points(entry, w2, *height)?;
            let out = serde_json::to_value(&res).map_err(|e| Error::Failed(e.to_string()))?;
            Ok(done(json!({ "model": model, "d": d, "height": height }), true, out, arts(vec![], vec![*height])))
        }
    }
}

fn verify(what: &VerifyWhat, seed: u64) -> Result<Done, Error> {
    let arts = Artifacts { seed, ..Default::default() };
    match what {
        VerifyWhat::Table1 | VerifyWhat::Table2 | VerifyWhat::Table3 | VerifyWhat::Remark4 => {
            let name = match what {
                VerifyWhat::Table1 => "table1",
                VerifyWhat::Table2 => "table2",
                VerifyWhat::Table3 => "table3",
                _ => "remark4",
            };
            let o = suite::verify_item(name, seed)?;
            Ok(done(json!({ "item": name }), o.passed, json!({ "items": [to_json(&o)] }), arts))
        }
        VerifyWhat::Criterion { n } => {
            let o = suite::criterion(*n, seed)?;
            Ok(done(json!({ "criterion": n }), o.passed, json!({ "items": [to_json(&o)] }), arts))
        }
        VerifyWhat::All => {
            let items = suite::all_criteria(seed);
            let ok = outcome_status(&items);
            Ok(done(json!({ "item": "all" }), ok, json!({ "items": items }), arts))
        }
        VerifyWhat::Model { name } => {
            let c = verify_model(name)?;
            let ok = c.all_on_model && c.equation_matches_curve;
            Ok(done(json!({ "model": name }), ok, to_json(&c), arts))
        }
        VerifyWhat::Identity { name } => {
            let c = verify_identity(name)?;
            Ok(done(json!({ "identity": name }), c.holds, to_json(&c), arts))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Parse `argv` (including the program name) and run. Usage errors give
/// exit code 1 and no report; the message goes in the returned string.
pub fn run<I, T>(argv: I) -> (i32, Result<Report, String>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, Err(e.to_string()));
        }
    };
    if let Some(n) = cli.workers {
        // ignore a pool that is already set up (repeated calls in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let command: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let done = execute(&cli);
    let wall_time_ms = start.elapsed().as_millis() as u64;
    let report = match done {
        Ok(d) => Report {
            schema_version: SCHEMA_VERSION,
            command,
            inputs: d.inputs,
            status: d.status,
            results: d.results,
            artifacts: d.artifacts,
            wall_time_ms,
        },
        Err(e) => Report {
            schema_version: SCHEMA_VERSION,
            command,
            inputs: Value::Null,
            status: Status::Error,
            results: json!({ "error": e.to_string() }),
            artifacts: Artifacts { seed: cli.seed, ..Default::default() },
            wall_time_ms,
        },
    };
    (report.status.exit_code(), Ok(report))
}

/// Whether `--human` was requested.
pub fn wants_human<T: AsRef<str>>(argv: &[T]) -> bool {
    argv.iter().any(|a| a.as_ref() == "--human")
}

/// Plain-text rendering of a report.
pub fn render_human(r: &Report) -> String {
    let mut s = format!("{}\nstatus: {:?}\n", r.command.join(" "), r.status);
    if let Some(items) = r.results.get("items").and_then(Value::as_array) {
        for it in items {
            let passed = it.get("passed").and_then(Value::as_bool).unwrap_or(false);
            let id = it.get("id").and_then(Value::as_str).unwrap_or("?");
            let title = it.get("title").and_then(Value::as_str).unwrap_or("");
            s.push_str(&format!("{} {id:<14} {title}\n", if passed { "PASS" } else { "FAIL" }));
            for d in it.get("details").and_then(Value::as_array).into_iter().flatten() {
                s.push_str(&format!("     {}\n", d.as_str().unwrap_or_default()));
            }
        }
    } else if let Some(obj) = r.results.as_object() {
        for (k, v) in obj {
            let text = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("{k}: {text}\n"));
        }
    }
    s.push_str(&format!("seed {}, {} ms\n", r.artifacts.seed, r.wall_time_ms));
    s
}
