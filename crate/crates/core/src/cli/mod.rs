//! Command-line front end. `dispatch` runs one subcommand and returns its exit
//! status with the text destined for stdout and stderr.

pub mod args;

use crate::arith::{FundamentalDiscriminant, Sign};
use crate::error::{Error, Result};
use crate::eta::{certificate_minpoly, eta_exact_quadratic, EtaOutcome, DEFAULT_BOUND_CAP};
use crate::exponents::{dihedral_exponents, evaluate, fmt_q, theorem_presets, Family, PresetParams, PresetRow, Q};
use crate::moments::{
    decompose_window, default_cache_dir, klueners_bound_sum, klueners_from_records, moment_series, scan_family,
    slope_fit, KluenersVariant, Mode, ScanOptions,
};
use crate::poly::ZPoly;
use crate::polycount::{count_by_group, galois_group_id, galois_resolvent, Endpoints, GaloisGroup, TargetGroup};
use crate::splitprimes::{bad_set_scan, split_count_poly, split_count_quadratic, BadSetFamily};
use args::{Cli, Command, Format};
use clap::Parser;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

/// Exit status and captured streams of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// The parameters that determine a run's output. Thread count and cache
/// location are left out on purpose: they never change the payload.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub params: Value,
    pub format: Format,
}

impl RunConfig {
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

struct Ctx {
    config: RunConfig,
    scan_opts: ScanOptions,
}

impl Ctx {
    fn csv_header(&self) -> String {
        format!(
            "# torsionlab {}\n# config {}\n# config-sha256 {}\n",
            self.config.subcommand,
            serde_json::to_string(&self.config.params).unwrap(),
            self.config.hash()
        )
    }

    /// `body` with the config and its hash in front.
    fn json(&self, body: Value) -> String {
        let mut out = serde_json::Map::new();
        out.insert("command".into(), json!(self.config.subcommand));
        out.insert("config".into(), self.config.params.clone());
        out.insert("config_sha256".into(), json!(self.config.hash()));
        match body {
            Value::Object(m) => out.extend(m),
            other => {
                out.insert("result".into(), other);
            }
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(out)).unwrap();
        s.push('\n');
        s
    }
}

/// `{num, den}` for an exact rational.
pub fn frac(x: &Q) -> Value {
    json!({ "num": x.numer().to_string(), "den": x.denom().to_string() })
}

/// A JSON number when it fits in 64 bits, otherwise a decimal string.
fn int(n: &BigInt) -> Value {
    match (n.to_i64(), n.to_u64()) {
        (Some(v), _) => json!(v),
        (_, Some(v)) => json!(v),
        _ => json!(n.to_string()),
    }
}

fn csv_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else {
        String::new()
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotFundamental(_) => "not-fundamental",
        Error::Unsupported(_) => "unsupported",
        Error::DiscriminantMismatch(..) => "discriminant-mismatch",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::Reducible(_) => "reducible",
        Error::Precision { .. } => "precision",
        Error::Overflow(_) => "overflow",
        Error::Cache(_) => "cache",
        Error::Coverage(_) => "coverage",
        Error::Parse(_) => "parse",
        Error::Internal(_) => "internal",
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let params = match serde_json::to_value(&cli.command) {
        Ok(Value::Object(m)) => m.into_iter().next().map(|(_, v)| v).unwrap_or(Value::Null),
        _ => Value::Null,
    };
    let config = RunConfig { subcommand: cli.command.name().to_string(), params, format };
    let cache = if cli.no_cache { None } else { Some(cli.cache.clone().unwrap_or_else(default_cache_dir)) };
    let ctx = Ctx { config, scan_opts: ScanOptions { cache } };
    let run = || run_command(&ctx, &cli.command, format);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Error::Internal(e.to_string())),
        },
        None => run(),
    };
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => {
            let msg = json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } });
            Outcome { code: 1, stdout: String::new(), stderr: format!("{msg}\n") }
        }
    }
}

fn run_command(ctx: &Ctx, cmd: &Command, format: Format) -> Result<String> {
    match cmd {
        Command::Scan(a) => scan(ctx, a, format),
        Command::Moments(a) => moments(ctx, a, format),
        Command::Eta(a) => eta(ctx, a),
        Command::Split(a) => split(ctx, a),
        Command::Badset(a) => badset(ctx, a, format),
        Command::Exponent(a) => exponent(ctx, a),
        Command::Presets(a) => presets(ctx, a, format),
        Command::Polycount(a) => polycount(ctx, a, format),
        Command::Resolvent(a) => resolvent(ctx, a),
        Command::Klueners(a) => klueners(ctx, a, format),
    }
}

fn scan(ctx: &Ctx, a: &args::ScanArgs, format: Format) -> Result<String> {
    let sign = Sign::parse(&a.sign)?;
    let s = scan_family(sign, a.xmax, &ctx.scan_opts)?;
    match format {
        Format::Csv => {
            let mut out = ctx.csv_header();
            out.push_str("D,h,divisors,unit_norm");
            for l in &a.ell {
                write!(out, ",cl{l}").unwrap();
            }
            out.push('\n');
            for r in &s.records {
                let divs: Vec<String> = r.divisors.iter().map(|d| d.to_string()).collect();
                let unit = r.unit_norm.map(|u| u.to_string()).unwrap_or_default();
                write!(out, "{},{},{},{}", r.d, r.h, divs.join(";"), unit).unwrap();
                for &l in &a.ell {
                    write!(out, ",{}", r.torsion(l)).unwrap();
                }
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let sums: serde_json::Map<String, Value> = a
                .ell
                .iter()
                .map(|&l| (l.to_string(), json!(s.records.iter().map(|r| r.torsion(l) as u128).sum::<u128>().to_string())))
                .collect();
            Ok(ctx.json(json!({
                "sign": sign.label(),
                "X_max": a.xmax,
                "fields": s.records.len(),
                "class_number_sum": s.records.iter().map(|r| r.h as u128).sum::<u128>().to_string(),
                "torsion_sums": sums,
            })))
        }
    }
}

fn parse_fit(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| Error::Parse(format!("fit range {s:?} must be lo:hi")))?;
    Ok((args::count(lo).map_err(Error::Parse)?, args::count(hi).map_err(Error::Parse)?))
}

fn moments(ctx: &Ctx, a: &args::MomentsArgs, format: Format) -> Result<String> {
    let sign = Sign::parse(&a.sign)?;
    let mode = Mode::parse(&a.mode)?;
    let ladder = &a.ladder.0;
    let top = mode.range(*ladder.last().unwrap()).1;
    let s = scan_family(sign, top.max(3), &ctx.scan_opts)?;
    let series = moment_series(&s, a.ell, &a.k, mode, ladder)?;
    let (lo, hi) = match &a.fit {
        Some(f) => parse_fit(f)?,
        None => (ladder[0], *ladder.last().unwrap()),
    };
    let slope = slope_fit(&series, lo, hi).ok();
    match format {
        Format::Csv => {
            let mut out = ctx.csv_header();
            if let Some(v) = slope {
                writeln!(out, "# slope {v:.6} over X in [{lo}, {hi}]").unwrap();
            }
            out.push_str("X,sum\n");
            for p in &series.points {
                writeln!(out, "{},{}", p.x, p.sum).unwrap();
            }
            Ok(out)
        }
        Format::Json => Ok(ctx.json(json!({
            "series": series,
            "slope": slope,
            "fit_range": [lo, hi],
        }))),
    }
}

fn eta(ctx: &Ctx, a: &args::EtaArgs) -> Result<String> {
    let d = FundamentalDiscriminant::new(a.d)?;
    let outcome = eta_exact_quadratic(d, a.ell, a.bound, a.cap.unwrap_or(DEFAULT_BOUND_CAP))?;
    let body = match &outcome {
        EtaOutcome::Found(c) => json!({
            "status": "found",
            "D": c.d,
            "ell": c.ell,
            "value": int(&c.value),
            "value_exact": c.value_exact,
            "p1": c.p1,
            "p2": c.p2,
            "ideal1": c.ideal1,
            "ideal2": c.ideal2,
            "witness": { "x": int(&c.witness.x), "y": int(&c.witness.y), "z": int(&c.witness.z) },
            "witness_text": c.witness.to_string(),
            "minimal_polynomial": certificate_minpoly(c)?.to_string(),
            "exhausted_bound": c.exhausted_bound,
            "exact": c.exact,
        }),
        EtaOutcome::Unresolved { d, ell, exhausted_bound, lower_bound } => json!({
            "status": "unresolved",
            "D": d,
            "ell": ell,
            "exhausted_bound": exhausted_bound,
            "lower_bound": int(lower_bound),
        }),
    };
    Ok(ctx.json(body))
}

fn split(ctx: &Ctx, a: &args::SplitArgs) -> Result<String> {
    let r = match (&a.d, &a.poly) {
        (Some(d), _) => split_count_quadratic(FundamentalDiscriminant::new(*d)?, a.y, a.primes),
        (None, Some(p)) => split_count_poly(&p.parse::<ZPoly>()?, a.y, a.primes)?,
        (None, None) => return Err(Error::InvalidArgument("give --D or --poly".into())),
    };
    Ok(ctx.json(serde_json::to_value(&r).unwrap()))
}

fn badset(ctx: &Ctx, a: &args::BadsetArgs, format: Format) -> Result<String> {
    let sign = Sign::parse(&a.sign)?;
    if a.decompose {
        let s = scan_family(sign, 2 * a.x - 1, &ctx.scan_opts)?;
        let r = decompose_window(&s, a.x, &a.delta, a.ell, &a.c, &a.eps)?;
        return match format {
            Format::Json => Ok(ctx.json(serde_json::to_value(&r).unwrap())),
            Format::Csv => {
                let mut out = ctx.csv_header();
                writeln!(out, "# X={} Y={} M_threshold={:.6} window={}", r.x, r.y, r.m_threshold, r.window_size).unwrap();
                out.push_str("part,size,torsion_sum\n");
                for (name, p) in [("M0", &r.m0), ("M1'", &r.m1_prime), ("M1''", &r.m1_double), ("unresolved", &r.unresolved)] {
                    writeln!(out, "{name},{},{}", p.size, p.torsion_sum).unwrap();
                }
                Ok(out)
            }
        };
    }
    let r = bad_set_scan(&BadSetFamily::Quadratic(sign), a.x, &a.delta, &a.c)?;
    match format {
        Format::Csv => {
            let mut out = ctx.csv_header();
            writeln!(out, "# X={} members={} of {}", r.x, r.members, r.total).unwrap();
            out.push_str("D,Y,M_threshold,count,in_bad_set\n");
            let mut rows: Vec<_> = r.rows.iter().collect();
            rows.sort_by_key(|row| (row.abs_disc, !row.field.starts_with('-')));
            for row in rows {
                writeln!(out, "{},{},{:.6},{},{}", row.field, r.y, r.m_threshold, row.count, row.member).unwrap();
            }
            Ok(out)
        }
        Format::Json => Ok(ctx.json(json!({
            "X": r.x,
            "Y": r.y,
            "M_threshold": r.m_threshold,
            "M_floor": r.m_floor,
            "total": r.total,
            "members": r.members,
            "member_fields": r.rows.iter().filter(|row| row.member).map(|row| row.field.clone()).collect::<Vec<_>>(),
        }))),
    }
}

fn preset_json(row: &PresetRow) -> Value {
    let q = &row.query;
    json!({
        "theorem": row.family.id(),
        "family": row.family.name(),
        "d": q.d,
        "ell": q.ell,
        "k": frac(&q.k),
        "theta": frac(&q.theta),
        "rho": frac(&q.rho),
        "tau": q.tau.as_ref().map(frac),
        "delta0": q.delta0.as_ref().map(frac),
        "exponent_num": row.result.exponent.numer().to_string(),
        "exponent_den": row.result.exponent.denom().to_string(),
        "exponent": fmt_q(&row.result.exponent),
        "branch": row.result.branch.to_string(),
        "formula": row.result.formula,
        "stated": frac(&row.stated),
        "theta_open": row.theta_open,
    })
}

fn exponent(ctx: &Ctx, a: &args::ExponentArgs) -> Result<String> {
    let family = Family::parse(&a.theorem)?;
    let params = PresetParams { d: a.d, ell: a.ell, k: a.k.clone(), rho: a.rho.clone(), tau: a.tau.clone() };
    let row = evaluate(family, &params)?;
    Ok(ctx.json(preset_json(&row)))
}

fn presets(ctx: &Ctx, a: &args::PresetsArgs, format: Format) -> Result<String> {
    let rows = theorem_presets();
    let dihedral: Vec<(u64, Q, Q)> = a
        .p
        .iter()
        .map(|&p| dihedral_exponents(p).map(|(x, y)| (p, x, y)))
        .collect::<Result<_>>()?;
    match format {
        Format::Csv => {
            let mut out = ctx.csv_header();
            out.push_str("theorem,family,d,ell,k,theta,rho,tau,exponent,branch\n");
            for r in &rows {
                let q = &r.query;
                let tau = q.tau.as_ref().map(fmt_q).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.family.id(),
                    r.family.name(),
                    q.d,
                    q.ell,
                    fmt_q(&q.k),
                    fmt_q(&q.theta),
                    fmt_q(&q.rho),
                    tau,
                    fmt_q(&r.result.exponent),
                    r.result.branch
                )
                .unwrap();
            }
            for (p, x, y) in &dihedral {
                writeln!(out, "dihedral,degree-p,{p},{p},1,,,,{},", fmt_q(x)).unwrap();
                writeln!(out, "dihedral,degree-2p,{},{p},1,,,,{},", 2 * p, fmt_q(y)).unwrap();
            }
            Ok(out)
        }
        Format::Json => Ok(ctx.json(json!({
            "presets": rows.iter().map(preset_json).collect::<Vec<_>>(),
            "dihedral": dihedral.iter().map(|(p, x, y)| json!({ "p": p, "degree_p": frac(x), "degree_2p": frac(y) })).collect::<Vec<_>>(),
        }))),
    }
}

fn polycount(ctx: &Ctx, a: &args::PolycountArgs, format: Format) -> Result<String> {
    let mode = Endpoints::parse(&a.endpoints)?;
    let group = a.group.as_deref().map(str::parse::<GaloisGroup>).transpose()?;
    let ladder: Vec<i64> = a
        .ladder
        .0
        .iter()
        .map(|&b| i64::try_from(b).map_err(|_| Error::Overflow("bound B")))
        .collect::<Result<_>>()?;
    let reports = a
        .ell
        .iter()
        .map(|&l| count_by_group(a.d, l, &ladder, group, mode))
        .collect::<Result<Vec<_>>>()?;
    match format {
        Format::Csv => {
            let mut out = ctx.csv_header();
            out.push_str("d,ell,B,total,irreducible,group,count,slope\n");
            for rep in &reports {
                let slope = rep.slope.map(csv_f64).unwrap_or_default();
                for r in &rep.rows {
                    writeln!(out, "{},{},{},{},{},{},{},{}", r.d, r.ell, r.b, r.total, r.irreducible, r.group, r.count, slope).unwrap();
                }
            }
            Ok(out)
        }
        Format::Json => Ok(ctx.json(json!({ "reports": reports }))),
    }
}

fn resolvent(ctx: &Ctx, a: &args::ResolventArgs) -> Result<String> {
    let f: ZPoly = a.poly.parse()?;
    let target = TargetGroup::parse(&a.group)?;
    let report = galois_resolvent(&f, target)?;
    let mut body = serde_json::to_value(&report).unwrap();
    if let (Value::Object(m), Ok(label)) = (&mut body, galois_group_id(&f)) {
        m.insert("galois_group".into(), json!(label));
    }
    Ok(ctx.json(body))
}

fn klueners(ctx: &Ctx, a: &args::KluenersArgs, format: Format) -> Result<String> {
    let variant = KluenersVariant::from_index(a.variant)?;
    let sign = Sign::parse(&a.sign)?;
    let xs = match (&a.ladder, a.x) {
        (Some(l), _) => l.0.clone(),
        (None, Some(x)) => vec![x],
        (None, None) => return Err(Error::InvalidArgument("give --x or --ladder".into())),
    };
    let results = if xs.len() == 1 {
        vec![klueners_bound_sum(a.p, xs[0], variant, sign, &ctx.scan_opts)?]
    } else {
        let top = *xs.last().unwrap();
        let s = scan_family(sign, variant.max_disc(a.p, top).max(3), &ctx.scan_opts)?;
        xs.iter().map(|&x| klueners_from_records(&s.records, a.p, x, variant, sign)).collect::<Result<_>>()?
    };
    let pts: Vec<(f64, f64)> = results
        .iter()
        .filter_map(|r| Some((r.x as f64, r.value.parse::<f64>().ok()?)))
        .collect();
    let slope = crate::fit::loglog_slope(&pts).ok();
    match format {
        Format::Csv => {
            let mut out = ctx.csv_header();
            if let Some(v) = slope {
                writeln!(out, "# slope {v:.6}").unwrap();
            }
            out.push_str("X,sum\n");
            for r in &results {
                writeln!(out, "{},{}", r.x, r.value).unwrap();
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "p": r.p,
                        "X": r.x,
                        "variant": a.variant,
                        "sign": r.sign,
                        "value": { "num": r.value, "den": "1" },
                        "nonzero_terms": r.nonzero_terms,
                    })
                })
                .collect();
            if rows.len() == 1 {
                Ok(ctx.json(rows.into_iter().next().unwrap()))
            } else {
                Ok(ctx.json(json!({ "points": rows, "slope": slope })))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        dispatch(std::iter::once("torsionlab").chain(args.iter().copied()))
    }

    fn json_of(o: &Outcome) -> Value {
        assert_eq!(o.code, 0, "{}", o.stderr);
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn exponent_theorem_one() {
        let v = json_of(&run(&["exponent", "--theorem", "1.1", "--ell", "3", "--k", "1"]));
        assert_eq!(v["exponent_num"], "13");
        assert_eq!(v["exponent_den"], "10");
        assert!(v["formula"].as_str().unwrap().contains("ε"));
    }

    #[test]
    fn eta_gaussian() {
        let v = json_of(&run(&["eta", "--D", "-4", "--ell", "1"]));
        assert_eq!(v["value"], 5);
        assert_eq!(v["exact"], true);
        assert_eq!(v["D"], -4);
    }

    #[test]
    fn help_and_usage_errors() {
        let h = run(&["--help"]);
        assert_eq!(h.code, 0);
        assert!(h.stdout.contains("Usage"));
        assert_eq!(run(&["exponent", "--bogus"]).code, 2);
        assert_eq!(run(&[]).code, 2);
        assert_eq!(run(&["scan", "--xmax", "lots"]).code, 2);
    }

    #[test]
    fn domain_errors_exit_one() {
        let o = run(&["eta", "--D", "-12", "--ell", "1"]);
        assert_eq!(o.code, 1);
        let v: Value = serde_json::from_str(&o.stderr).unwrap();
        assert_eq!(v["error"]["kind"], "not-fundamental");
        assert_eq!(run(&["exponent", "--theorem", "9.9", "--ell", "3", "--k", "1"]).code, 1);
    }

    #[test]
    fn csv_header_and_hash() {
        let o = run(&["--no-cache", "scan", "--xmax", "30", "--ell", "3"]);
        assert_eq!(o.code, 0);
        let lines: Vec<&str> = o.stdout.lines().collect();
        assert!(lines[0].starts_with("# torsionlab scan"));
        assert!(lines[2].starts_with("# config-sha256 "));
        assert_eq!(lines[3], "D,h,divisors,unit_norm,cl3");
        assert!(lines.contains(&"-23,3,3,,3"));
        let again = run(&["--no-cache", "--threads", "1", "scan", "--xmax", "30", "--ell", "3"]);
        assert_eq!(o.stdout, again.stdout);
        let other = run(&["--no-cache", "scan", "--xmax", "31", "--ell", "3"]);
        assert_ne!(lines[2], other.stdout.lines().nth(2).unwrap());
    }

    #[test]
    fn moments_csv() {
        let o = run(&["--no-cache", "moments", "--ell", "0", "--k", "1", "--ladder", "20"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.ends_with("X,sum\n20,10\n"));
    }

    #[test]
    fn klueners_values() {
        let v = json_of(&run(&["--no-cache", "klueners", "--p", "3", "--x", "23"]));
        assert_eq!(v["value"]["num"], "4");
        let o = run(&["--no-cache", "--format", "csv", "klueners", "--p", "3", "--ladder", "100,200,400"]);
        assert!(o.stdout.contains("# slope "));
    }

    #[test]
    fn resolvent_and_polycount() {
        let v = json_of(&run(&["resolvent", "--poly", "x^4 - 2", "--group", "D4"]));
        assert_eq!(v["galois_group"]["group"], "D4");
        assert!(!v["integer_roots"].as_array().unwrap().is_empty());
        let o = run(&["polycount", "--d", "2", "--ell", "1", "--ladder", "10,20,40"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("d,ell,B,total,irreducible,group,count,slope\n2,1,10,"));
    }

    #[test]
    fn remaining_subcommands_run() {
        for args in [
            vec!["presets"],
            vec!["--format", "csv", "presets"],
            vec!["split", "--D", "-23", "--y", "50", "--primes"],
            vec!["split", "--poly", "x^3 - x^2 - 2x + 1", "--y", "30"],
            vec!["--no-cache", "badset", "--x", "200"],
            vec!["--no-cache", "--format", "json", "badset", "--x", "200", "--decompose", "--ell", "1"],
        ] {
            let o = run(&args);
            assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
        }
    }
}
