//! Command-line front end. Every report is built as a JSON value first and
//! then rendered as JSON, CSV or an aligned table.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::{
    count_pcf_in_disk, ex72_report, ex73_report, gleason_factor, gleason_mod2_check, orbit_poly,
    stability_certificate, PcfTarget, UnicriticalFamily, EX72_MAX_N,
};
use crate::itlog::verdict;
use crate::lattes::{flexible_lattes, milnor_criterion, LattesSpec, LegendreCurve, Torsion};
use crate::newton::{newton_polygon, NewtonPolygon};
use crate::poly::ExactPoly;
use crate::ratmap::Mobius;
use crate::scalar::{check_prime, ExactScalar, Exponent, LogRadius};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

/// Largest `n` accepted by `gleason` (degree `2^{n-1}`).
pub const GLEASON_MAX_N: usize = 12;
/// Largest parameter degree accepted by `misiurewicz`.
pub const MISIUREWICZ_MAX_DEGREE: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "padic-dynamo", version, about = "Exact p-adic arithmetic dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub format: FormatArgs,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    #[arg(long, global = true, conflicts_with_all = ["csv", "table"])]
    pub json: bool,
    #[arg(long, global = true, conflicts_with = "table")]
    pub csv: bool,
    #[arg(long, global = true)]
    pub table: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl FormatArgs {
    pub fn format(&self) -> Format {
        if self.csv {
            Format::Csv
        } else if self.table {
            Format::Table
        } else {
            Format::Json
        }
    }
}

#[derive(Debug, Args, Clone)]
pub struct DiskArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub center: ExactScalar,
    /// Radius `p^{-e}` given by its exponent `e`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub radius_exp: ExactScalar,
    #[arg(long, conflicts_with = "closed")]
    pub open: bool,
    #[arg(long)]
    pub closed: bool,
}

impl DiskArgs {
    pub fn radius(&self) -> LogRadius {
        let e: Exponent = self.radius_exp.as_rational().clone();
        if self.closed {
            LogRadius::closed(e)
        } else {
            LogRadius::open(e)
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// `g_n(c) = f_c^n(0) + f_c^{n-1}(0)` for `z² + c`.
    Gleason {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        disk: DiskArgs,
    },
    /// `G_{m,n}(c) = f_c^n(0) - f_c^m(0)` for `z^d + c`.
    Misiurewicz {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        disk: DiskArgs,
    },
    /// Newton polygon of a polynomial given by comma-separated coefficients,
    /// constant term first.
    Newton {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[command(flatten)]
        disk: DiskArgs,
    },
    /// The polynomials `h_n` over the 3-adic integers.
    Ex72 {
        #[arg(long)]
        n: usize,
    },
    /// The repelling family `γ(c)(p z^{p+1} - (p+1) z^p + 1)`.
    Ex73 {
        #[arg(long)]
        p: u64,
    },
    /// Flexible Lattès map on `y² = x(x-1)(x-λ)` and its postcritical set.
    Lattes {
        #[arg(long, allow_hyphen_values = true)]
        lambda: ExactScalar,
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// One of `O`, `0`, `1`, `lambda`.
        #[arg(long, default_value = "O")]
        torsion: String,
        #[arg(long, default_value_t = 32)]
        budget: usize,
    },
    /// Escape, attracting or iterative-logarithm certificate for `z^d + c`.
    Verdict {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        c: ExactScalar,
        /// Largest `n` in the escalation `1..=max_n`.
        #[arg(long, default_value_t = 6)]
        max_n: u32,
    },
    /// Residue itineraries of the critical points of `z^d + center`.
    Stability {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        center: ExactScalar,
    },
}

/// A failure together with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) | Error::UnsupportedM(_) => EXIT_CAP,
            Error::CertificateFailure(_)
            | Error::Inconclusive(_)
            | Error::PrecisionExhausted(_)
            | Error::TailNotDominated => EXIT_CERTIFICATE,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn cap(msg: String) -> Failure {
    Failure {
        code: EXIT_CAP,
        message: msg,
    }
}

fn config(msg: String) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: msg,
    }
}

/// A rendered report: a JSON value, plus polygon rows for CSV output.
#[derive(Debug, Clone)]
pub struct Report {
    pub value: Value,
    pub polygon: Option<NewtonPolygon>,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn segments_value(np: &NewtonPolygon) -> Value {
    to_value(&np.segments)
}

fn polynomial_report(
    f: &ExactPoly,
    p: u64,
    disk: &DiskArgs,
    mut value: serde_json::Map<String, Value>,
) -> Result<Report> {
    let np = newton_polygon(&f.taylor_shift(&disk.center), p)?;
    let radius = disk.radius();
    value.insert("degree".into(), json!(f.deg()));
    value.insert("center".into(), to_value(&disk.center));
    value.insert(
        "radius".into(),
        json!({
            "exponent": crate::scalar::exponent_string(&radius.exponent),
            "polarity": radius.polarity,
        }),
    );
    value.insert("newton_segments".into(), segments_value(&np));
    value.insert("roots_in_disk".into(), json!(np.count_within(&radius)));
    if f.deg() <= 64 {
        let roots: Vec<String> = f.rational_roots()?.iter().map(ToString::to_string).collect();
        value.insert("rational_roots".into(), json!(roots));
    }
    Ok(Report {
        value: Value::Object(value),
        polygon: Some(np),
    })
}

fn parse_torsion(s: &str) -> std::result::Result<Torsion, Failure> {
    match s {
        "O" | "o" => Ok(Torsion::O),
        "0" => Ok(Torsion::Zero),
        "1" => Ok(Torsion::One),
        "lambda" | "λ" => Ok(Torsion::Lambda),
        _ => Err(config(format!("unknown torsion point {s:?}"))),
    }
}

pub fn execute(cmd: &Command) -> std::result::Result<Report, Failure> {
    let plain = |v: Value| Report {
        value: v,
        polygon: None,
    };
    match cmd {
        Command::Gleason { p, n, disk } => {
            check_prime(*p)?;
            if *n == 0 {
                return Err(config("n must be at least 1".into()));
            }
            if *n > GLEASON_MAX_N {
                return Err(cap(format!("n = {n} exceeds the cap {GLEASON_MAX_N}")));
            }
            let g = gleason_factor(*n)?;
            let mut m = serde_json::Map::new();
            m.insert("p".into(), json!(p));
            m.insert("n".into(), json!(n));
            if *p == 2 {
                m.insert("mod2_monomial".into(), json!(gleason_mod2_check(*n)?));
            }
            let rep = polynomial_report(&g, *p, disk, m)?;
            let direct = count_pcf_in_disk(PcfTarget::Gleason(*n), *p, &disk.center, &disk.radius())?;
            debug_assert_eq!(rep.value["roots_in_disk"], json!(direct));
            Ok(rep)
        }
        Command::Misiurewicz { p, d, m, n, disk } => {
            check_prime(*p)?;
            if *d >= 2 && *n >= 1 {
                let deg = (*d as f64).powi(*n as i32 - 1);
                if deg > MISIUREWICZ_MAX_DEGREE as f64 {
                    return Err(cap(format!("degree d^(n-1) exceeds {MISIUREWICZ_MAX_DEGREE}")));
                }
            }
            let g = orbit_poly(*d, *m, *n)?;
            let mut map = serde_json::Map::new();
            map.insert("p".into(), json!(p));
            map.insert("d".into(), json!(d));
            map.insert("m".into(), json!(m));
            map.insert("n".into(), json!(n));
            Ok(polynomial_report(&g, *p, disk, map)?)
        }
        Command::Newton { p, coeffs, disk } => {
            check_prime(*p)?;
            let cs = coeffs
                .split(',')
                .map(str::parse::<ExactScalar>)
                .collect::<Result<Vec<_>>>()?;
            let f = ExactPoly::new(cs);
            if f.is_zero() {
                return Err(Error::ZeroPolynomial.into());
            }
            let mut map = serde_json::Map::new();
            map.insert("p".into(), json!(p));
            map.insert("polynomial".into(), json!(f.to_string()));
            Ok(polynomial_report(&f, *p, disk, map)?)
        }
        Command::Ex72 { n } => {
            if *n > EX72_MAX_N {
                return Err(cap(format!("n = {n} exceeds the cap {EX72_MAX_N}")));
            }
            Ok(plain(to_value(&ex72_report(*n)?)))
        }
        Command::Ex73 { p } => Ok(plain(to_value(&ex73_report(*p)?))),
        Command::Lattes {
            lambda,
            m,
            torsion,
            budget,
        } => {
            let spec = LattesSpec {
                curve: LegendreCurve::new(lambda.clone())?,
                m: *m,
                torsion: parse_torsion(torsion)?,
                h: Mobius::identity(),
            };
            let f = flexible_lattes(&spec)?;
            let v = milnor_criterion(&f, *budget)?;
            Ok(plain(json!({
                "lambda": lambda,
                "m": m,
                "torsion": spec.torsion,
                "degree": f.degree(),
                "map": f,
                "milnor": v,
            })))
        }
        Command::Verdict { p, d, c, max_n } => {
            let schedule: Vec<u32> = (1..=*max_n).collect();
            Ok(plain(to_value(&verdict(*p, *d, c, &schedule)?)))
        }
        Command::Stability { p, d, center } => {
            let fam = UnicriticalFamily::new(*d, *p, center.clone())?;
            Ok(plain(to_value(&stability_certificate(&fam)?)))
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.value).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => match &report.polygon {
            Some(np) => np.to_csv(),
            None => {
                let mut s = String::from("key,value\n");
                if let Value::Object(m) = &report.value {
                    for (k, v) in m {
                        s.push_str(&format!("{},{}\n", k, csv_field(&scalar_text(v))));
                    }
                }
                s
            }
        },
        Format::Table => {
            let mut s = String::new();
            if let Value::Object(m) = &report.value {
                let w = m.keys().map(String::len).max().unwrap_or(0);
                for (k, v) in m {
                    s.push_str(&format!("{k:<w$}  {}\n", scalar_text(v)));
                }
            }
            s
        }
    }
}

/// Parse, run and render; returns `(exit code, stdout, stderr)`.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                (code, text, String::new())
            } else {
                (code, String::new(), text)
            };
        }
    };
    match execute(&cli.command) {
        Ok(rep) => {
            let text = render(&rep, cli.format.format());
            match &cli.output {
                Some(path) => match std::fs::File::create(path).and_then(|mut f| f.write_all(text.as_bytes())) {
                    Ok(()) => (EXIT_OK, String::new(), String::new()),
                    Err(e) => (EXIT_CONFIG, String::new(), format!("cannot write {}: {e}\n", path.display())),
                },
                None => (EXIT_OK, text, String::new()),
            }
        }
        Err(f) => (f.code, String::new(), format!("error: {}\n", f.message)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> (i32, Value) {
        let (code, out, _) = run(std::iter::once("padic-dynamo").chain(args.split_whitespace()));
        (code, serde_json::from_str(&out).unwrap_or(Value::Null))
    }

    #[test]
    fn gleason_reports() {
        let (c, v) = go("gleason --p 2 --n 8 --center 0 --radius-exp 0 --open");
        assert_eq!(c, 0);
        assert_eq!(v["roots_in_disk"], json!(128));
        assert_eq!(v["mod2_monomial"], json!(true));
        let (_, v) = go("gleason --p 2 --n 1");
        assert_eq!(v["degree"], json!(1));
        assert_eq!(v["rational_roots"], json!(["0"]));
        let (_, v) = go("gleason --p 5 --n 2 --open");
        assert_eq!(v["roots_in_disk"], json!(1));
        assert_eq!(go("gleason --p 4 --n 2").0, EXIT_CONFIG);
        assert_eq!(go("gleason --p 2 --n 13").0, EXIT_CAP);
    }

    #[test]
    fn verdict_reports() {
        let (c, v) = go("verdict --p 2 --d 2 --c 1/2");
        assert_eq!(c, 0);
        assert_eq!(v["verdict"], json!("Escapes"));
        assert_eq!(v["escape"]["valuations"], json!([-1, -2, -4, -8, -16, -32]));
        let (_, v) = go("verdict --p 3 --d 2 --c -1");
        assert_eq!(v["verdict"], json!("PossiblyZero"));
        let (_, v) = go("verdict --p 3 --d 2 --c 1");
        assert_eq!(v["verdict"], json!("NonzeroCertified"));
        assert_eq!(go("verdict --p 3 --d 2 --c x").0, EXIT_CONFIG);
    }

    #[test]
    fn caps_and_formats() {
        assert_eq!(go("ex72 --n 3").0, EXIT_CAP);
        assert_eq!(go("lattes --lambda 2 --m 4").0, EXIT_CAP);
        let (c, out, _) = run(["padic-dynamo", "newton", "--p", "3", "--coeffs", "3,-4,1", "--csv"]);
        assert_eq!(c, 0);
        assert_eq!(out, "i,valuation,on_hull\n0,1,1\n1,0,1\n2,0,1\n");
    }
}
