//! Command-line driver: JSON in, JSON or markdown out, one manifest per run.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactcore::{parse_rational, AnyMap, CplxRat, RationalMap};
use crate::factory::{homogeneous_map, poly_k_fold, poly_k_fold_grid, rational_k_fold};
use crate::foldanalysis::{fold_profile, newton_expand_poly, newton_expand_rational, FoldData};
use crate::json::{
    from_json, map_from_json, map_to_json, parse_complex_list, parse_fold_list, parse_rational_list, to_json, CertificateDoc, HermDoc, NewtonDoc,
    NormalFormDoc, ProfileDoc, TraceDoc,
};
use crate::normalform::decompose_infty_fold;
use crate::verify::{
    check_ball_difference, check_complement_proper, check_outside, check_reflection, check_sphere_map, Ball,
    ComplementVerdict, SampleConfig, Verdict,
};

#[derive(Debug, Parser)]
#[command(name = "spheremap", version, about = "Exact analysis and construction of m-fold sphere maps")]
pub struct Cli {
    /// Write results here instead of stdout; the manifest goes to <out>.manifest.json.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fold profile of a map, optionally with a Newton expansion over given folds.
    Analyze {
        /// Map JSON path, or - for stdin.
        input: String,
        /// Claimed folds as t1:T1,t2:T2 (squared radii).
        #[arg(long)]
        folds: Option<String>,
    },
    /// Build one of the example families.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Normal form of a map taking every zero-centric sphere to one.
    Decompose {
        input: String,
    },
    /// Sphere, outside, reflection, ball-difference and complement checks.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Markdown summary of result files.
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Symmetrized homogeneous power with squared norm scale·‖z‖^{2d}.
    Homogeneous {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: u32,
        #[arg(long, default_value = "1")]
        scale_sq: String,
    },
    /// Degree-m monomial map with exactly the k given folds.
    PolyKFold {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        m: usize,
        /// Comma-separated squared radii.
        #[arg(long)]
        radii_sq: String,
        /// Write the construction trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Rational map p/q with q = 1 + a·z and exactly the k given folds.
    RationalKFold {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        m: usize,
        #[arg(long)]
        radii_sq: String,
        /// Coefficients of a as re or re:im, comma-separated.
        #[arg(long)]
        a: String,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Every poly-k-fold with k < m ≤ max-m, radii 1..k, with recomputed profiles.
    PolyGrid {
        /// Comma-separated source dimensions.
        #[arg(long, default_value = "2,3")]
        n: String,
        #[arg(long, default_value_t = 4)]
        max_m: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 3.0)]
    pub max_radius: f64,
}

impl SampleArgs {
    fn config(&self) -> SampleConfig {
        SampleConfig {
            count: self.samples,
            seed: self.seed,
            radius_range: (1.0, self.max_radius),
            tolerance: self.tolerance,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Exact test that ‖z‖² = t implies ‖f‖² = T.
    Sphere {
        input: String,
        #[arg(long)]
        t: String,
        #[arg(long = "T")]
        big_t: String,
    },
    /// Sampled ‖f(z)‖ > 1 outside the unit ball.
    Outside {
        input: String,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Sampled f(z)·conj(f(z/‖z‖²)) = 1.
    Reflection {
        input: String,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Exact test that f maps the source sphere into the target sphere.
    BallDifference {
        input: String,
        /// Center as re:im per coordinate, comma-separated; defaults to 0.
        #[arg(long)]
        source_center: Option<String>,
        #[arg(long)]
        source_radius_sq: String,
        #[arg(long)]
        target_center: Option<String>,
        #[arg(long)]
        target_radius_sq: String,
    },
    /// Containment and norm blow-up for the complement of the unit ball.
    Complement {
        input: String,
        #[command(flatten)]
        sample: SampleArgs,
    },
}

/// Provenance record written next to every result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub input_paths: Vec<String>,
    pub seed: u64,
    pub tool_version: String,
    pub timing_ms: f64,
}

/// Result body and exit code of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
    pub input_paths: Vec<String>,
    pub seed: u64,
}

impl Outcome {
    fn new(body: String, ok: bool, input_paths: Vec<String>) -> Self {
        Self {
            body,
            code: if ok { 0 } else { 1 },
            input_paths,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotAFoldDoc {
    pub step: usize,
    pub reason: String,
    pub witness: HermDoc,
}

/// Profile document, optionally carrying the Newton expansion or the failed fold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeDoc {
    #[serde(flatten)]
    pub profile: ProfileDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton: Option<NewtonDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_a_fold: Option<NotAFoldDoc>,
}

/// Emitted by decompose when the map is not ∞-fold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotInftyFoldDoc {
    pub error: String,
    pub profile: ProfileDoc,
}

/// 0 ok, 1 negative verdict, 2 usage or input error, 3 internal failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotAFold { .. } | Error::NotInftyFold => 1,
        Error::Internal(_) | Error::GramMismatch(_) | Error::ValidationFailed(_) | Error::RowsNotOrthonormal { .. } => 3,
        _ => 2,
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidParameter(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("cannot read {path}: {e}")))
    }
}

fn read_map(path: &str) -> Result<AnyMap> {
    map_from_json(&read_input(path)?).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{path}: {msg}")),
        other => other,
    })
}

fn ball(n: usize, center: Option<&str>, radius_sq: &str) -> Result<Ball> {
    let center = match center {
        Some(c) => parse_complex_list(c)?,
        None => vec![CplxRat::zero(); n],
    };
    Ball::new(center, parse_rational(radius_sq)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))
}

fn analyze(input: &str, folds: Option<&str>) -> Result<Outcome> {
    let map = read_map(input)?;
    let profile = ProfileDoc::from(&fold_profile(&map)?);
    let mut doc = AnalyzeDoc {
        profile,
        newton: None,
        not_a_fold: None,
    };
    if let Some(folds) = folds {
        let folds: FoldData = parse_fold_list(folds)?;
        let expansion = match &map {
            AnyMap::Poly(p) => newton_expand_poly(p, &folds),
            AnyMap::Weighted(w) => newton_expand_poly(w, &folds),
            AnyMap::Rational(r) => newton_expand_rational(r, &folds),
        };
        match expansion {
            Ok(e) => doc.newton = Some(NewtonDoc::from(&e)),
            Err(Error::NotAFold { step, reason, witness }) => {
                doc.not_a_fold = Some(NotAFoldDoc {
                    step,
                    reason,
                    witness: HermDoc::from(witness.as_ref()),
                })
            }
            Err(e) => return Err(e),
        }
    }
    let ok = doc.not_a_fold.is_none();
    Ok(Outcome::new(to_json(&doc), ok, vec![input.to_string()]))
}

fn construct(family: &Family) -> Result<Outcome> {
    let body = match family {
        Family::Homogeneous { n, d, scale_sq } => {
            map_to_json(&AnyMap::Weighted(homogeneous_map(*n, *d, &parse_rational(scale_sq)?)?))
        }
        Family::PolyKFold {
            n,
            k,
            m,
            radii_sq,
            trace,
        } => {
            let (w, t) = poly_k_fold(*n, *k, *m, &parse_rational_list(radii_sq)?)?;
            if let Some(path) = trace {
                write_file(path, &to_json(&TraceDoc::from(&t)))?;
            }
            map_to_json(&AnyMap::Weighted(w))
        }
        Family::RationalKFold {
            n,
            k,
            m,
            radii_sq,
            a,
            trace,
        } => {
            let (f, t) = rational_k_fold(*n, *k, *m, &parse_rational_list(radii_sq)?, &parse_complex_list(a)?)?;
            if let Some(path) = trace {
                write_file(path, &to_json(&TraceDoc::from(&t)))?;
            }
            map_to_json(&AnyMap::Rational(f))
        }
        Family::PolyGrid { n, max_m } => {
            let ns = n
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad dimension {s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            to_json(&poly_k_fold_grid(&ns, *max_m)?)
        }
    };
    Ok(Outcome::new(body, true, Vec::new()))
}

fn decompose(input: &str) -> Result<Outcome> {
    let map = read_map(input)?;
    let result = match &map {
        AnyMap::Poly(p) => decompose_infty_fold(p),
        AnyMap::Weighted(w) => decompose_infty_fold(w),
        AnyMap::Rational(_) => Err(Error::NotInftyFold),
    };
    match result {
        Ok(nf) => Ok(Outcome::new(
            to_json(&NormalFormDoc::new(map.n(), &nf)),
            true,
            vec![input.to_string()],
        )),
        Err(Error::NotInftyFold) => {
            let doc = NotInftyFoldDoc {
                error: "NotInftyFold".into(),
                profile: ProfileDoc::from(&fold_profile(&map)?),
            };
            Ok(Outcome::new(to_json(&doc), false, vec![input.to_string()]))
        }
        Err(e) => Err(e),
    }
}

fn rational(map: &AnyMap) -> RationalMap {
    map.to_rational().into_owned()
}

fn verify(check: &Check) -> Result<Outcome> {
    match check {
        Check::Sphere { input, t, big_t } => {
            let f = rational(&read_map(input)?);
            let c = check_sphere_map(&f, &parse_rational(t)?, &parse_rational(big_t)?)?;
            Ok(Outcome::new(to_json(&CertificateDoc::from(&c)), c.holds, vec![input.clone()]))
        }
        Check::Outside { input, sample } | Check::Reflection { input, sample } => {
            let f = rational(&read_map(input)?);
            let cfg = sample.config();
            let r = if matches!(check, Check::Outside { .. }) {
                check_outside(&f, &cfg)?
            } else {
                check_reflection(&f, &cfg)?
            };
            let mut out = Outcome::new(to_json(&r), r.verdict == Verdict::Pass, vec![input.clone()]);
            out.seed = sample.seed;
            Ok(out)
        }
        Check::BallDifference {
            input,
            source_center,
            source_radius_sq,
            target_center,
            target_radius_sq,
        } => {
            let map = read_map(input)?;
            let f = rational(&map);
            let n = map.n();
            let tgt_dim = f.target_dim();
            let source = ball(n, source_center.as_deref(), source_radius_sq)?;
            let target = ball(tgt_dim, target_center.as_deref(), target_radius_sq)?;
            let c = check_ball_difference(&f, &source, &target)?;
            Ok(Outcome::new(to_json(&CertificateDoc::from(&c)), c.holds, vec![input.clone()]))
        }
        Check::Complement { input, sample } => {
            let map = read_map(input)?;
            let r = match &map {
                AnyMap::Poly(p) => check_complement_proper(p, &sample.config())?,
                AnyMap::Weighted(w) => check_complement_proper(w, &sample.config())?,
                AnyMap::Rational(_) => {
                    return Err(Error::Precondition("complement check needs a polynomial map".into()))
                }
            };
            let mut out = Outcome::new(to_json(&r), r.verdict == ComplementVerdict::Proper, vec![input.clone()]);
            out.seed = sample.seed;
            Ok(out)
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Object(o) if o.contains_key("lo") => format!("[{}, {}]", cell(&o["lo"]), cell(&o["hi"])),
        other => other.to_string(),
    }
}

fn report_section(out: &mut String, v: &Value) {
    let obj = v.as_object();
    let has = |k: &str| obj.is_some_and(|o| o.contains_key(k));
    if let Some(rows) = v.as_array() {
        let _ = writeln!(out, "| n | k | m | degree | profile size | infinite |\n|---|---|---|---|---|---|");
        for r in rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                r["n"], r["k"], r["m"], r["degree"], r["profile_size"], r["infinite"]
            );
        }
    } else if has("error") {
        let _ = writeln!(out, "Not an ∞-fold map.\n");
        report_section(out, &v["profile"]);
    } else if has("kind") && has("components") {
        let _ = writeln!(
            out,
            "Map of kind `{}` from C^{} to C^{}.",
            cell(&v["kind"]),
            v["n"],
            v["N"]
        );
    } else if has("kind") {
        if v["kind"] == "infinite" {
            let c: Vec<String> = v["C"].as_array().into_iter().flatten().map(cell).collect();
            let _ = writeln!(out, "∞-fold with C = [{}].", c.join(", "));
        } else {
            let entries = v["entries"].as_array().cloned().unwrap_or_default();
            let _ = writeln!(out, "Finite profile with {} fold(s).\n\n| t | T |\n|---|---|", entries.len());
            for e in &entries {
                let _ = writeln!(out, "| {} | {} |", cell(&e["t"]), cell(&e["T"]));
            }
        }
        if has("newton") {
            let b: Vec<String> = v["newton"]["b"].as_array().into_iter().flatten().map(cell).collect();
            let _ = writeln!(out, "\nNewton expansion with b = [{}].", b.join(", "));
        }
        if has("not_a_fold") {
            let _ = writeln!(
                out,
                "\nClaimed fold {} fails: {}.",
                v["not_a_fold"]["step"],
                cell(&v["not_a_fold"]["reason"])
            );
        }
    } else if has("U") {
        let c: Vec<String> = v["C"].as_array().into_iter().flatten().map(cell).collect();
        let _ = writeln!(
            out,
            "| C | gram certificate | residual | unitarity defect |\n|---|---|---|---|\n| [{}] | {} | {:e} | {:e} |",
            c.join(", "),
            v["gram_certificate"],
            v["residual"].as_f64().unwrap_or(f64::NAN),
            v["unitarity_defect"].as_f64().unwrap_or(f64::NAN)
        );
    } else if has("blowup") {
        let _ = writeln!(
            out,
            "| verdict | outside | blow-up |\n|---|---|---|\n| {} | {} | {} |",
            cell(&v["verdict"]),
            cell(&v["outside"]["verdict"]),
            cell(&v["blowup"]["level"])
        );
    } else if has("max_residual") {
        let _ = writeln!(
            out,
            "| verdict | samples | violations | min ‖f‖ | max residual | seed |\n|---|---|---|---|---|---|\n| {} | {} | {} | {} | {} | {} |",
            cell(&v["verdict"]),
            v["samples"],
            v["violations"].as_array().map_or(0, Vec::len),
            cell(&v["min_norm"]),
            v["max_residual"],
            v["seed"]
        );
    } else if has("verdict") {
        let _ = writeln!(
            out,
            "Certificate: {}{}.",
            v["verdict"],
            if v["witness"].is_null() { "" } else { " (witness attached)" }
        );
    } else if has("Qpp") {
        let _ = writeln!(out, "Construction trace with slack c = {}.", cell(&v["c"]));
    } else {
        let _ = writeln!(out, "Unrecognized document.");
    }
}

fn report(inputs: &[PathBuf]) -> Result<Outcome> {
    if inputs.is_empty() {
        return Err(Error::InvalidParameter("report needs at least one input".into()));
    }
    let mut out = String::from("# spheremap report\n");
    let mut paths = Vec::new();
    for path in inputs {
        let shown = path.display().to_string();
        let text = read_input(&shown)?;
        let v: Value = from_json(&text).map_err(|e| Error::Parse(format!("{shown}: {e}")))?;
        let _ = writeln!(out, "\n## {shown}\n");
        let manifest = PathBuf::from(format!("{shown}.manifest.json"));
        if let Ok(m) = fs::read_to_string(&manifest) {
            if let Ok(m) = from_json::<RunManifest>(&m) {
                let _ = writeln!(
                    out,
                    "Produced by `spheremap {}` (version {}, seed {}).\n",
                    m.command, m.tool_version, m.seed
                );
            }
        }
        report_section(&mut out, &v);
        paths.push(shown);
    }
    Ok(Outcome::new(out, true, paths))
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { input, folds } => analyze(input, folds.as_deref()),
        Command::Construct { family } => construct(family),
        Command::Decompose { input } => decompose(input),
        Command::Verify { check } => verify(check),
        Command::Report { inputs } => report(inputs),
    }
}

/// Parses `args`, runs, writes results and the manifest, and returns the exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let manifest = RunManifest {
        command: args.iter().skip(1).cloned().collect::<Vec<_>>().join(" "),
        input_paths: outcome.input_paths.clone(),
        seed: outcome.seed,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let written = match &cli.out {
        Some(path) => write_file(path, &outcome.body)
            .and_then(|()| write_file(Path::new(&format!("{}.manifest.json", path.display())), &to_json(&manifest))),
        None => {
            print!("{}", outcome.body);
            eprintln!("{}", serde_json::to_string(&manifest).expect("manifest serializes"));
            Ok(())
        }
    };
    match written {
        Ok(()) => outcome.code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
