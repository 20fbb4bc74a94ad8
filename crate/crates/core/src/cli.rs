//! Command-line front end: `exact`, `compare`, `sweep`, `verify`.
//!
//! Exit codes: 0 success, 1 oracle mismatch or verification failure,
//! 2 usage, parse, or I/O errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::json;

use crate::error::Error;
use crate::exact::{bargmann_moment_3j, racah_3j, ExactValue};
use crate::format_sig;
use crate::geometry::classify_configuration;
use crate::halfint::{selection_rules, HalfInt, JmConfig, SelectionOutcome};
use crate::semiclassical::{
    asymptotic_3j, wrap_angle, AsymptoticResult, Convention, SignConvention,
};
use crate::verify::{run_all, Level};

#[derive(Parser)]
#[command(
    name = "w3j",
    about = "Wigner 3j symbols: exact dual-route evaluation and semiclassical asymptotics",
    version
)]
struct Cli {
    /// Optional key=value config file (keys: convention, sign); flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigArgs {
    /// j1 j2 j3 m1 m2 m3 as half-integers ("2", "3/2", "-1.5")
    #[arg(num_args = 6, allow_hyphen_values = true,
          value_names = ["J1", "J2", "J3", "M1", "M2", "M3"])]
    jm: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact value by the single-sum formula, optionally cross-checked
    /// against the moment-integral route.
    Exact {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// Also run the independent evaluator and report MATCH/MISMATCH.
        #[arg(long)]
        oracle: bool,
    },
    /// Exact vs asymptotic value for one configuration.
    Compare {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Sweep a family of configurations and write a CSV table.
    Sweep {
        #[arg(long, num_args = 3, value_names = ["J1", "J2", "J3"])]
        base_j: Vec<String>,
        #[arg(long, num_args = 3, allow_hyphen_values = true,
              value_names = ["M1", "M2", "M3"])]
        base_m: Vec<String>,
        #[arg(long, value_enum)]
        axis: AxisArg,
        /// Scale factors (scale-j) or m1 values (vary-m1), comma separated.
        #[arg(long, num_args = 1.., value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
    },
    /// Run the verification battery.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    HalfShift,
    PaperLiteral,
}

impl From<ConventionArg> for Convention {
    fn from(a: ConventionArg) -> Self {
        match a {
            ConventionArg::HalfShift => Convention::HalfShiftEverywhere,
            ConventionArg::PaperLiteral => Convention::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
    PonzanoRegge,
}

impl From<SignArg> for SignConvention {
    fn from(a: SignArg) -> Self {
        match a {
            SignArg::Plus => SignConvention::Plus,
            SignArg::Minus => SignConvention::Minus,
            SignArg::PonzanoRegge => SignConvention::PonzanoRegge,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    ScaleJ,
    VaryM1,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

/// Defaults loaded from the optional config file.
#[derive(Default)]
struct FileDefaults {
    convention: Option<Convention>,
    sign: Option<SignConvention>,
}

fn load_defaults(path: &Path) -> Result<FileDefaults, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = FileDefaults::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("{}:{}: expected key=value", path.display(), lineno + 1));
        };
        match (key.trim(), value.trim()) {
            ("convention", "half-shift") => out.convention = Some(Convention::HalfShiftEverywhere),
            ("convention", "paper-literal") => out.convention = Some(Convention::PaperLiteral),
            ("sign", "plus") => out.sign = Some(SignConvention::Plus),
            ("sign", "minus") => out.sign = Some(SignConvention::Minus),
            ("sign", "ponzano-regge") => out.sign = Some(SignConvention::PonzanoRegge),
            (k, v) => {
                return Err(format!("{}:{}: unknown setting {k}={v}", path.display(), lineno + 1))
            }
        }
    }
    Ok(out)
}

fn parse_config(jm: &[String]) -> Result<JmConfig, String> {
    let mut vals = [HalfInt::ZERO; 6];
    for (i, s) in jm.iter().enumerate() {
        vals[i] = s.parse().map_err(|e| format!("{e}"))?;
    }
    Ok(JmConfig::new(
        [vals[0], vals[1], vals[2]],
        [vals[3], vals[4], vals[5]],
    ))
}

/// Status string for a configuration: selection-rule reason, else the
/// geometric classification at quantum lengths.
fn status_of(c: &JmConfig) -> String {
    match selection_rules(c) {
        SelectionOutcome::Valid => match classify_configuration(c) {
            Ok(class) => class.to_string(),
            Err(e) => format!("error: {e}"),
        },
        reason => reason.to_string(),
    }
}

fn exact_display(v: &ExactValue) -> String {
    if v.value.is_zero() {
        match v.zero_reason {
            Some(reason) => format!("0 ({reason})"),
            None => "0".to_string(),
        }
    } else {
        format!("{} \u{2248} {}", v.value, format_sig(v.to_f64()))
    }
}

fn exact_json(v: &ExactValue) -> serde_json::Value {
    json!({
        "sign": v.value.sign(),
        "radicand": v.value.radicand().to_string(),
        "value": v.to_f64(),
        "zero_reason": v.zero_reason.map(|r| r.to_string()),
    })
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let defaults = match &cli.config {
        Some(path) => match load_defaults(path) {
            Ok(d) => d,
            Err(msg) => {
                eprintln!("error: {msg}");
                return 2;
            }
        },
        None => FileDefaults::default(),
    };
    match run_command(cli.cmd, &defaults) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn run_command(cmd: Cmd, defaults: &FileDefaults) -> Result<i32, String> {
    match cmd {
        Cmd::Exact { config, format, oracle } => {
            let c = parse_config(&config.jm)?;
            let racah = racah_3j(&c);
            let oracle_result = oracle.then(|| {
                let moment = bargmann_moment_3j(&c);
                let matched = moment.value == racah.value;
                (matched, moment)
            });
            match format {
                Format::Human => {
                    let mut line = format!("{c} = {}", exact_display(&racah));
                    if let Some((matched, _)) = &oracle_result {
                        let _ = write!(
                            line,
                            "  oracle: {}",
                            if *matched { "MATCH" } else { "MISMATCH" }
                        );
                    }
                    println!("{line}");
                }
                Format::Json => {
                    let mut obj = json!({
                        "twice_j": c.twice_j().to_vec(),
                        "twice_m": c.twice_m().to_vec(),
                        "exact": exact_json(&racah),
                    });
                    if let Some((matched, moment)) = &oracle_result {
                        obj["oracle"] = json!({
                            "match": matched,
                            "value": exact_json(moment),
                        });
                    }
                    println!("{obj}");
                }
            }
            Ok(match oracle_result {
                Some((false, _)) => 1,
                _ => 0,
            })
        }
        Cmd::Compare { config, convention, sign, format } => {
            let c = parse_config(&config.jm)?;
            let convention = convention
                .map(Convention::from)
                .or(defaults.convention)
                .unwrap_or_default();
            let sign = sign.map(SignConvention::from).or(defaults.sign).unwrap_or_default();
            let row = CompareRow::evaluate(&c, convention, sign);
            match format {
                Format::Human => print!("{}", row.human()),
                Format::Json => println!("{}", row.to_json()),
            }
            Ok(0)
        }
        Cmd::Sweep { base_j, base_m, axis, values, out, convention } => {
            let jm: Vec<String> = base_j.iter().chain(base_m.iter()).cloned().collect();
            let base = parse_config(&jm)?;
            let convention = convention
                .map(Convention::from)
                .or(defaults.convention)
                .unwrap_or_default();
            if values.is_empty() {
                return Err("at least one sweep value is required".to_string());
            }
            let configs = expand_sweep(&base, axis, &values)?;
            let mut csv = String::from(
                "twice_j1,twice_j2,twice_j3,twice_m1,twice_m2,twice_m3,exact,asymptotic,S,delta_z,abs_err,status\n",
            );
            for c in &configs {
                let row = CompareRow::evaluate(c, convention, SignConvention::Plus);
                csv.push_str(&row.csv_line());
                csv.push('\n');
            }
            fs::write(&out, csv).map_err(|e| format!("{}: {e}", out.display()))?;
            println!("wrote {} rows to {}", configs.len(), out.display());
            Ok(0)
        }
        Cmd::Verify { level, seed } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let outcomes = run_all(level, seed);
            let mut all_passed = true;
            println!("verification battery (seed {seed})");
            for o in &outcomes {
                println!("{}", o.status_line());
                all_passed &= o.passed;
            }
            println!("overall: {}", if all_passed { "PASS" } else { "FAIL" });
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

/// One exact-vs-asymptotic comparison.
struct CompareRow {
    config: JmConfig,
    exact: f64,
    asym: Result<AsymptoticResult, Error>,
    status: String,
    convention: Convention,
}

impl CompareRow {
    fn evaluate(c: &JmConfig, convention: Convention, sign: SignConvention) -> Self {
        CompareRow {
            config: *c,
            exact: racah_3j(c).to_f64(),
            asym: asymptotic_3j(c, convention, sign),
            status: status_of(c),
            convention,
        }
    }

    /// `||asym| - |exact||`, defined only when the asymptotics exist.
    fn abs_err(&self) -> Option<f64> {
        self.asym
            .as_ref()
            .ok()
            .map(|a| (a.value.abs() - self.exact.abs()).abs())
    }

    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "config: {}", self.config);
        let _ = writeln!(out, "status: {}", self.status);
        let _ = writeln!(out, "exact:  {}", format_sig(self.exact));
        match &self.asym {
            Ok(a) => {
                let _ = writeln!(
                    out,
                    "asymptotic ({}): {}",
                    self.convention.label(),
                    format_sig(a.value)
                );
                let _ = writeln!(
                    out,
                    "S = {} (reduced {}), delta_z = {}, amplitude = {}",
                    format_sig(a.s),
                    format_sig(wrap_angle(a.s)),
                    format_sig(a.delta_z),
                    format_sig(a.amplitude)
                );
                let _ = writeln!(out, "|error| = {}", format_sig(self.abs_err().unwrap()));
            }
            Err(e) => {
                let _ = writeln!(out, "asymptotic ({}): n/a ({e})", self.convention.label());
            }
        }
        out
    }

    fn to_json(&self) -> serde_json::Value {
        let mut obj = json!({
            "twice_j": self.config.twice_j().to_vec(),
            "twice_m": self.config.twice_m().to_vec(),
            "status": self.status,
            "exact": self.exact,
            "convention": self.convention.label(),
        });
        if let Ok(a) = &self.asym {
            obj["asymptotic"] = json!({
                "value": a.value,
                "S": a.s,
                "S_reduced": wrap_angle(a.s),
                "delta_z": a.delta_z,
                "amplitude": a.amplitude,
            });
            obj["abs_err"] = json!(self.abs_err().unwrap());
        }
        obj
    }

    fn csv_line(&self) -> String {
        let tj = self.config.twice_j();
        let tm = self.config.twice_m();
        let (asym, s, dz, err) = match &self.asym {
            Ok(a) => (
                format_sig(a.value),
                format_sig(wrap_angle(a.s)),
                format_sig(a.delta_z),
                format_sig(self.abs_err().unwrap()),
            ),
            Err(_) => (String::new(), String::new(), String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            tj[0], tj[1], tj[2], tm[0], tm[1], tm[2],
            format_sig(self.exact), asym, s, dz, err, self.status
        )
    }
}

fn expand_sweep(base: &JmConfig, axis: AxisArg, values: &[String]) -> Result<Vec<JmConfig>, String> {
    match axis {
        AxisArg::ScaleJ => {
            let mut out = Vec::with_capacity(values.len());
            for v in values {
                let lambda = parse_ratio(v)?;
                let scale = |h: HalfInt| -> Result<HalfInt, String> {
                    let t = Ratio::from_integer(h.twice()) * lambda;
                    if !t.is_integer() {
                        return Err(format!("scale {v} maps {h} off the half-integer lattice"));
                    }
                    Ok(HalfInt::from_twice(t.to_integer()))
                };
                let j = base.j();
                let m = base.m();
                out.push(JmConfig::new(
                    [scale(j[0])?, scale(j[1])?, scale(j[2])?],
                    [scale(m[0])?, scale(m[1])?, scale(m[2])?],
                ));
            }
            Ok(out)
        }
        AxisArg::VaryM1 => {
            let mut out = Vec::with_capacity(values.len());
            for v in values {
                let m1: HalfInt = v.parse().map_err(|e| format!("{e}"))?;
                // hold m2, rebalance m3 so the sum stays zero
                let m2 = base.m()[1];
                let m3 = -m1 - m2;
                out.push(JmConfig::new(base.j(), [m1, m2, m3]));
            }
            Ok(out)
        }
    }
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, String> {
    let bad = || format!("invalid scale factor `{s}`");
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let digits = frac.len() as u32;
        if digits == 0 || digits > 6 {
            return Err(bad());
        }
        let scale = 10i64.pow(digits);
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let fpart: i64 = frac.parse().map_err(|_| bad())?;
        let signed = if t.starts_with('-') {
            whole * scale - fpart
        } else {
            whole * scale + fpart
        };
        return Ok(Ratio::new(signed, scale));
    }
    t.parse::<i64>().map(Ratio::from_integer).map_err(|_| bad())
}
