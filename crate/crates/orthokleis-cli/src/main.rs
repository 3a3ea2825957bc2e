//! `orthokleis`: lattice reports, truncated series tables and the property suite.
//!
//! Output is one JSON document (`"schema": "1"`) or a CSV table on stdout or
//! in `--output`. Exit codes: 0 success, 1 failed property or evaluation
//! error, 2 input error.

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use orthokleis::eisenstein::{eisenstein_truncated, EisensteinOptions};
use orthokleis::lattice::{load, short_vectors, GramLattice};
use orthokleis::orthogonal::{OrthSpace, TubePoint};
use orthokleis::siegel::eisenstein::siegel_eisenstein_truncated;
use orthokleis::siegel::SiegelPoint;
use orthokleis::special::assembly::{
    completed_dirichlet, completed_e8_eisenstein, completed_e8_factors,
};
use orthokleis::theta::{scale_to_big, theta_truncated, ThetaOptions, ThetaQuery};
use orthokleis::verify::{self, Suite, VerifyConfig};
use orthokleis::Error;
use rand::SeedableRng;
use serde_json::{json, Map, Value};
use std::process::ExitCode;

const SCHEMA: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Report,
    Eisenstein,
    Theta,
    Siegel,
    Completed,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "orthokleis",
    version,
    about = "Orthogonal Eisenstein and theta series on lattice-bordered tube domains"
)]
struct Cli {
    /// Catalog name (A1, A2, A4, D4, E8) or path to a Gram matrix file.
    #[arg(long, default_value = "E8")]
    lattice: String,
    #[arg(long, value_enum, default_value = "report")]
    command: Command,
    /// Truncation level(s), comma separated.
    #[arg(long = "B", value_delimiter = ',')]
    b: Vec<f64>,
    /// Evaluation points "re,im[:re,im...]".
    #[arg(long)]
    s: Option<String>,
    /// Target tail bound for theta when no --B is given.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// #SO(S; Z) for the completed Dirichlet series.
    #[arg(long = "so-order")]
    so_order: Option<u64>,
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<String>,
    /// Dirichlet coefficients a(1), a(2), ...: a JSON array of [re, im] or a CSV file of index,re,im.
    #[arg(long)]
    coeffs: Option<String>,
    /// Weight k of the forms behind --coeffs.
    #[arg(long)]
    weight: Option<i64>,
    /// Siegel point "x1,y1;x2,y2;x3,y3" (diagonal entries first, then the off-diagonal one).
    #[arg(long)]
    z: Option<String>,
    /// Evaluate the tube-domain series at a seeded random point instead of I.
    #[arg(long)]
    random_point: bool,
    /// Verification suites to run, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    /// Evaluate below the convergence abscissa and label the value as formal.
    #[arg(long)]
    formal: bool,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::UnknownLattice(_)
            | Error::NotSquare
            | Error::NotSymmetric(..)
            | Error::NotEven { .. }
            | Error::NotPositiveDefinite(_)
            | Error::Invalid(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Output {
    meta: Map<String, Value>,
    rows: Vec<Map<String, Value>>,
    /// Single-record commands put their fields at the top level of the JSON document.
    flat: bool,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("orthokleis: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn precision() -> Result<usize, Failure> {
    match std::env::var("ORTHOKLEIS_PRECISION") {
        Err(_) => Ok(16),
        Ok(v) => {
            let p: usize = v.trim().parse().map_err(|_| {
                Failure::input(format!(
                    "ORTHOKLEIS_PRECISION must be a positive integer, got {v:?}"
                ))
            })?;
            if p == 0 {
                return Err(Failure::input("ORTHOKLEIS_PRECISION must be positive"));
            }
            if p > 17 {
                eprintln!(
                    "orthokleis: arithmetic is IEEE double; printing at most 17 significant digits"
                );
            }
            Ok(p.min(17))
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let digits = precision()?;
    if !(cli.tol > 0.0) {
        return Err(Failure::input("--tol must be positive"));
    }
    if cli.b.iter().any(|b| !(*b > 0.0)) {
        return Err(Failure::input("--B values must be positive"));
    }
    let lattice = load(&cli.lattice)?;
    let mut out = match cli.command {
        Command::Report => report(&lattice),
        Command::Eisenstein => eisenstein(cli, &lattice)?,
        Command::Theta => theta(cli, &lattice)?,
        Command::Siegel => siegel(cli)?,
        Command::Completed => completed(cli, &lattice)?,
        Command::Verify => verify_cmd(cli, &lattice)?,
    };
    let name = match cli.command {
        Command::Report => "report",
        Command::Eisenstein => "eisenstein",
        Command::Theta => "theta",
        Command::Siegel => "siegel",
        Command::Completed => "completed",
        Command::Verify => "verify",
    };
    let mut head = Map::new();
    head.insert("schema".into(), json!(SCHEMA));
    head.insert("command".into(), json!(name));
    head.insert("lattice".into(), json!(cli.lattice));
    head.insert("seed".into(), json!(cli.seed));
    head.insert("precision".into(), json!(digits));
    head.append(&mut out.meta);
    let text = match cli.format {
        Format::Json => {
            if !out.flat {
                head.insert(
                    "rows".into(),
                    Value::Array(out.rows.into_iter().map(Value::Object).collect()),
                );
            }
            serde_json::to_string_pretty(&Value::Object(head)).expect("serializable") + "\n"
        }
        Format::Csv => to_csv(&out.rows, digits)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("{path}: {e}"),
        })?,
        None => print!("{text}"),
    }
    Ok(if out.ok { 0 } else { 1 })
}

fn to_csv(rows: &[Map<String, Value>], digits: usize) -> Result<String, Failure> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure {
        code: 1,
        message: e.to_string(),
    };
    w.write_record(&cols).map_err(io)?;
    for r in rows {
        let rec: Vec<String> = cols
            .iter()
            .map(|c| r.get(c).map(|v| cell(v, digits)).unwrap_or_default())
            .collect();
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("utf8"))
}

fn cell(v: &Value, digits: usize) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format!(
            "{:.*e}",
            digits.saturating_sub(1),
            n.as_f64().unwrap_or(f64::NAN)
        ),
        other => other.to_string(),
    }
}

fn put_c(row: &mut Map<String, Value>, key: &str, z: Complex64) {
    row.insert(format!("{key}_re"), num(z.re));
    row.insert(format!("{key}_im"), num(z.im));
}

/// Non-finite values become null.
fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn parse_s(text: Option<&str>, default: Complex64) -> Result<Vec<Complex64>, Failure> {
    let Some(text) = text else {
        return Ok(vec![default]);
    };
    text.split(':')
        .map(|p| {
            let parts: Vec<&str> = p.split(',').map(str::trim).collect();
            let f = |t: &str| {
                t.parse::<f64>()
                    .map_err(|_| Failure::input(format!("bad number {t:?} in --s")))
            };
            match parts.as_slice() {
                [re] => Ok(Complex64::new(f(re)?, 0.0)),
                [re, im] => Ok(Complex64::new(f(re)?, f(im)?)),
                _ => Err(Failure::input(format!("--s entry {p:?} is not re,im"))),
            }
        })
        .collect()
}

fn parse_z(text: Option<&str>) -> Result<SiegelPoint, Failure> {
    let Some(text) = text else {
        return Ok(SiegelPoint::scalar(1.0));
    };
    let entries: Vec<Complex64> = text
        .split(';')
        .map(|p| {
            let v: Vec<f64> = p
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::input(format!("bad --z entry {p:?}")))?;
            match v.as_slice() {
                [x, y] => Ok(Complex64::new(*x, *y)),
                _ => Err(Failure::input(format!("--z entry {p:?} is not x,y"))),
            }
        })
        .collect::<Result<_, _>>()?;
    if entries.len() != 3 {
        return Err(Failure::input("--z needs three entries z11; z22; z12"));
    }
    Ok(SiegelPoint::new(entries[0], entries[1], entries[2])?)
}

fn parse_coeffs(spec: &str) -> Result<Vec<Complex64>, Failure> {
    let text = if std::path::Path::new(spec).exists() {
        std::fs::read_to_string(spec).map_err(|e| Failure::input(format!("{spec}: {e}")))?
    } else {
        spec.to_string()
    };
    let t = text.trim();
    if t.starts_with('[') {
        let v: Vec<Value> =
            serde_json::from_str(t).map_err(|e| Failure::input(format!("coefficients: {e}")))?;
        return v
            .iter()
            .map(|x| match x {
                Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
                Value::Array(p) if p.len() == 2 => {
                    let g = |i: usize| {
                        p[i].as_f64()
                            .ok_or_else(|| Failure::input("coefficient entries must be numbers"))
                    };
                    Ok(Complex64::new(g(0)?, g(1)?))
                }
                _ => Err(Failure::input(
                    "coefficients must be numbers or [re, im] pairs",
                )),
            })
            .collect();
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(t.as_bytes());
    let mut entries: Vec<(usize, Complex64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Failure::input(format!("coefficients: {e}")))?;
        if rec.get(0).is_some_and(|f| f.parse::<usize>().is_err()) {
            continue; // header line
        }
        let f = |i: usize| {
            rec.get(i)
                .and_then(|x| x.parse::<f64>().ok())
                .ok_or_else(|| Failure::input(format!("bad coefficient row {rec:?}")))
        };
        let idx = f(0)? as usize;
        if idx == 0 {
            return Err(Failure::input("coefficient indices start at 1"));
        }
        entries.push((
            idx,
            Complex64::new(f(1)?, rec.get(2).map(|_| f(2)).transpose()?.unwrap_or(0.0)),
        ));
    }
    let len = entries.iter().map(|e| e.0).max().unwrap_or(0);
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, c) in entries {
        out[i - 1] = c;
    }
    Ok(out)
}

fn report(l: &GramLattice) -> Output {
    let ((p0, n0), (p1, n1)) = l.bordered().signatures();
    let mut meta = Map::new();
    meta.insert("n".into(), json!(l.rank()));
    meta.insert("det".into(), json!(l.det().to_string().parse::<i64>().ok()));
    meta.insert("level".into(), json!(l.level()));
    meta.insert("roots".into(), json!(short_vectors(l, 2).count()));
    meta.insert("signature_s0".into(), json!([p0, n0]));
    meta.insert("signature_s1".into(), json!([p1, n1]));
    let row = meta.clone();
    Output {
        meta,
        rows: vec![row],
        flat: true,
        ok: true,
    }
}

fn tube_point(cli: &Cli, space: &OrthSpace) -> TubePoint {
    if cli.random_point {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
        space.random_point(&mut rng)
    } else {
        space.base_point()
    }
}

fn bounds(cli: &Cli, default: &[f64]) -> Vec<f64> {
    if cli.b.is_empty() {
        default.to_vec()
    } else {
        cli.b.clone()
    }
}

fn error_row(row: &mut Map<String, Value>, e: &Error) {
    row.insert("error".into(), json!(e.to_string()));
}

fn eisenstein(cli: &Cli, l: &GramLattice) -> Result<Output, Failure> {
    let space = OrthSpace::new(l.clone());
    let w = tube_point(cli, &space);
    let s_list = parse_s(cli.s.as_deref(), Complex64::new(l.rank() as f64 + 2.0, 0.0))?;
    let opts = EisensteinOptions {
        allow_formal: cli.formal,
        ..Default::default()
    };
    let mut rows = Vec::new();
    let mut ok = true;
    for s in s_list {
        let mut prev: Option<Complex64> = None;
        for b in bounds(cli, &[5.0, 10.0, 20.0]) {
            let mut row = Map::new();
            put_c(&mut row, "s", s);
            row.insert("B".into(), num(b));
            match eisenstein_truncated(&space, &w, s, b, opts) {
                Ok(v) => {
                    row.insert("classes".into(), json!(v.classes));
                    put_c(&mut row, "value", v.value);
                    // consecutive-level difference: the empirical truncation diagnostic
                    row.insert(
                        "increment".into(),
                        prev.map(|p| num((v.value - p).norm()))
                            .unwrap_or(Value::Null),
                    );
                    row.insert("exhaustive".into(), json!(v.exhaustive));
                    row.insert("formal".into(), json!(v.formal));
                    prev = Some(v.value);
                }
                Err(e) => {
                    ok = false;
                    error_row(&mut row, &e);
                }
            }
            rows.push(row);
        }
    }
    Ok(Output {
        meta: Map::new(),
        rows,
        flat: false,
        ok,
    })
}

fn theta(cli: &Cli, l: &GramLattice) -> Result<Output, Failure> {
    let space = OrthSpace::new(l.clone());
    let w = tube_point(cli, &space);
    let z = parse_z(cli.z.as_deref())?;
    let opts = ThetaOptions::default();
    let mut rows = Vec::new();
    let mut ok = true;
    let mut eval = |b: f64, rows: &mut Vec<Map<String, Value>>| -> Option<f64> {
        let mut row = Map::new();
        row.insert("B".into(), num(b));
        let q = ThetaQuery {
            z: z.clone(),
            w: w.clone(),
            b,
        };
        let res = theta_truncated(&space, &q, opts);
        let tail = match res {
            Ok(t) => {
                let big = scale_to_big(&space, &z, t.clone());
                row.insert("terms".into(), json!(t.terms));
                put_c(&mut row, "theta", t.value);
                put_c(&mut row, "big_theta", big.value);
                row.insert("tail_bound".into(), num(t.tail.bound));
                row.insert("big_tail_bound".into(), num(big.tail.bound));
                Some(t.tail.bound)
            }
            Err(e) => {
                ok = false;
                error_row(&mut row, &e);
                None
            }
        };
        rows.push(row);
        tail
    };
    if cli.b.is_empty() {
        // double B until the tail bound meets --tol
        let mut b = 2.0;
        while let Some(t) = eval(b, &mut rows) {
            if t <= cli.tol || b > 1e4 {
                break;
            }
            b *= 2.0;
        }
    } else {
        for &b in &cli.b {
            eval(b, &mut rows);
        }
    }
    Ok(Output {
        meta: Map::new(),
        rows,
        flat: false,
        ok,
    })
}

fn siegel(cli: &Cli) -> Result<Output, Failure> {
    let z = parse_z(cli.z.as_deref())?;
    let mut rows = Vec::new();
    let mut ok = true;
    for s in parse_s(cli.s.as_deref(), Complex64::new(3.0, 0.0))? {
        for b in bounds(cli, &[1.0, 2.0]) {
            let mut row = Map::new();
            put_c(&mut row, "s", s);
            row.insert("B".into(), num(b));
            if b.fract() != 0.0 {
                return Err(Failure::input(
                    "the Siegel series takes integral entry bounds",
                ));
            }
            match siegel_eisenstein_truncated(&z, s, b as i64) {
                Ok(v) => {
                    row.insert("classes".into(), json!(v.classes));
                    put_c(&mut row, "value", v.value);
                }
                Err(e) => {
                    ok = false;
                    error_row(&mut row, &e);
                }
            }
            rows.push(row);
        }
    }
    Ok(Output {
        meta: Map::new(),
        rows,
        flat: false,
        ok,
    })
}

fn completed(cli: &Cli, l: &GramLattice) -> Result<Output, Failure> {
    let n = l.rank() as u32;
    let coeffs = cli.coeffs.as_deref().map(parse_coeffs).transpose()?;
    let space = OrthSpace::new(l.clone());
    let w = tube_point(cli, &space);
    let mut rows = Vec::new();
    let mut ok = true;
    for s in parse_s(cli.s.as_deref(), Complex64::new(12.0, 0.0))? {
        let mut row = Map::new();
        put_c(&mut row, "s", s);
        let mut fail = |row: &mut Map<String, Value>, e: Error| {
            ok = false;
            error_row(row, &e);
        };
        if let Some(c) = &coeffs {
            let so = cli
                .so_order
                .ok_or_else(|| Failure::input("--so-order is required with --coeffs"))?;
            let k = cli
                .weight
                .ok_or_else(|| Failure::input("--weight is required with --coeffs"))?;
            match completed_dirichlet(c, s, k, n, so) {
                Ok(d) => {
                    for f in &d.factors {
                        put_c(&mut row, &f.label, f.value);
                    }
                    put_c(&mut row, "dirichlet", d.d);
                    put_c(&mut row, "completed", d.completed);
                    put_c(&mut row, "prefactor", d.prefactor);
                }
                Err(e) => fail(&mut row, e),
            }
        } else if n == 8 {
            let b = bounds(cli, &[10.0])[0];
            let opts = EisensteinOptions {
                allow_formal: cli.formal,
                ..Default::default()
            };
            match completed_e8_eisenstein(&space, &w, s, b, opts) {
                Ok(c) => {
                    for f in &c.factors.factors {
                        put_c(&mut row, &f.label, f.value);
                    }
                    row.insert("B".into(), num(b));
                    row.insert("classes".into(), json!(c.series.classes));
                    put_c(&mut row, "series", c.series.value);
                    put_c(&mut row, "completed", c.value);
                }
                Err(e) => {
                    // still list the factors when only the series failed
                    if let Ok(f) = completed_e8_factors(s) {
                        for f in &f.factors {
                            put_c(&mut row, &f.label, f.value);
                        }
                    }
                    fail(&mut row, e)
                }
            }
        } else {
            return Err(Failure::input("the completed Eisenstein series is available for rank 8; pass --coeffs for a Dirichlet series"));
        }
        rows.push(row);
    }
    Ok(Output {
        meta: Map::new(),
        rows,
        flat: false,
        ok,
    })
}

fn verify_cmd(cli: &Cli, l: &GramLattice) -> Result<Output, Failure> {
    let mut cfg = VerifyConfig {
        seed: cli.seed,
        ..Default::default()
    };
    if !cli.suite.is_empty() {
        cfg.suites = cli
            .suite
            .iter()
            .map(|s| Suite::parse(s).ok_or_else(|| Failure::input(format!("unknown suite {s:?}"))))
            .collect::<Result<_, _>>()?;
    }
    if !cli.b.is_empty() {
        cfg.eisenstein_bounds = cli.b.clone();
    }
    let report = verify::run(l, &cfg);
    let mut meta = Map::new();
    meta.insert("pass".into(), json!(report.all_pass()));
    meta.insert(
        "suites".into(),
        json!(cfg.suites.iter().map(|s| s.name()).collect::<Vec<_>>()),
    );
    let timing: Map<String, Value> = report
        .suite_seconds
        .iter()
        .map(|(s, t)| (s.name().to_string(), num(*t)))
        .collect();
    meta.insert("suite_seconds".into(), Value::Object(timing));
    let rows = report
        .lines
        .iter()
        .map(|line| {
            let v = serde_json::to_value(line).expect("serializable");
            let mut m = v.as_object().cloned().unwrap_or_default();
            // non-finite residuals serialize as null; keep them readable
            if !line.residual.is_finite() {
                m.insert("residual".into(), json!("inf"));
            }
            m
        })
        .collect();
    for line in &report.lines {
        eprintln!(
            "{:<5} {:<11} {:<40} {:>10.3e} <= {:<10.3e} ({:.1} s)",
            if line.pass { "PASS" } else { "FAIL" },
            line.suite.name(),
            line.name,
            line.residual,
            line.threshold,
            line.seconds
        );
    }
    Ok(Output {
        meta,
        rows,
        flat: false,
        ok: report.all_pass(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("orthokleis").chain(args.iter().copied())).unwrap()
    }

    fn run_to_json(args: &[&str], name: &str) -> (u8, Value) {
        let path = std::env::temp_dir().join(format!("orthokleis-unit-{}-{name}.json", std::process::id()));
        let mut a = args.to_vec();
        let p = path.to_string_lossy().into_owned();
        a.extend(["--output", &p]);
        let code = run(&cli(&a)).unwrap_or_else(|f| f.code);
        let doc = std::fs::read_to_string(&path).ok().and_then(|t| serde_json::from_str(&t).ok()).unwrap_or(Value::Null);
        let _ = std::fs::remove_file(&path);
        (code, doc)
    }

    #[test]
    fn s_grid_parsing() {
        let s = parse_s(Some("12,0:2.5,-1"), Complex64::default()).ok().unwrap();
        assert_eq!(s, vec![Complex64::new(12.0, 0.0), Complex64::new(2.5, -1.0)]);
        assert_eq!(parse_s(Some("3"), Complex64::default()).ok().unwrap(), vec![Complex64::new(3.0, 0.0)]);
        assert_eq!(parse_s(Some("1,2,3"), Complex64::default()).err().unwrap().code, 2);
        assert_eq!(parse_s(None, Complex64::new(9.0, 0.0)).ok().unwrap(), vec![Complex64::new(9.0, 0.0)]);
    }

    #[test]
    fn coefficient_formats_agree() {
        let json = parse_coeffs("[[1, 0], 0.5, [0, 2]]").ok().unwrap();
        let csv = parse_coeffs("index,re,im\n1,1,0\n2,0.5,0\n3,0,2\n").ok().unwrap();
        assert_eq!(json, csv);
        assert_eq!(parse_coeffs("0,1,0").err().unwrap().code, 2);
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::NotSquare).code, 2);
        assert_eq!(Failure::from(Error::UnknownLattice("Z".into())).code, 2);
        assert_eq!(Failure::from(Error::BudgetExceeded { needed: 2, budget: 1 }).code, 1);
        assert_eq!(Failure::from(Error::ConvergenceGuard { re: 1.0, bound: 3.0 }).code, 1);
        assert!(Cli::try_parse_from(["orthokleis", "--command", "nope"]).is_err());
    }

    #[test]
    fn report_and_guards() {
        let (code, doc) = run_to_json(&["--lattice", "A2"], "report");
        assert_eq!(code, 0);
        assert_eq!((doc["schema"].as_str(), doc["level"].as_i64(), doc["roots"].as_i64()), (Some("1"), Some(3), Some(6)));
        let (code, doc) = run_to_json(&["--lattice", "A2", "--command", "eisenstein", "--s", "2,0", "--B", "5"], "guard");
        assert_eq!(code, 1);
        assert!(doc["rows"][0]["error"].as_str().unwrap().contains("convergence"));
        assert_eq!(run(&cli(&["--command", "theta", "--tol", "0"])).err().map(|f| f.code), Some(2));
    }

    #[test]
    fn csv_cells() {
        let mut row = Map::new();
        row.insert("a".into(), json!(0.5));
        row.insert("b".into(), json!("x"));
        let mut other = Map::new();
        other.insert("c".into(), json!(3));
        let text = to_csv(&[row, other], 3).ok().unwrap();
        assert_eq!(text, "a,b,c\n5.00e-1,x,\n,,3\n");
    }
}
