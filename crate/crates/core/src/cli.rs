//! Batch command-line interface.
//!
//! Every subcommand prints plain text by default and a single JSON document
//! with `--json`; the JSON shapes are described by the schemas shipped in
//! `schemas/`. Tuples are read from `--file` (or standard input when the flag
//! is absent or `-`) in the MatTuple JSON format.
//!
//! Exit codes: 0 success or passing check, 1 failing check (the report is
//! still printed), 2 usage or input error with a one-line diagnostic on
//! standard error.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::concomitants::{
    check_equivariance, compare_fiber_points, conditional_expectation, disc_samples,
    max_modulus_disc_check, nonextension_along, nonextension_base, reynolds_estimate, CheckReport,
    Group,
};
use crate::error::{Error, Result};
use crate::identities::{centrality_check, identity_check, partition_of_unity, rv_normalize_report, wagner_scalar};
use crate::invariants::{coords22, enumerate_trace_generators, quotient_coords, similarity_transport_report};
use crate::mattuple::{evaluate, matrix_to_repr, random_tuple_with, Ensemble, FiberPoint, MatTuple};
use crate::ncpoly::{format_expression, parse_expression, TracePoly};
use crate::rng::seeded;
use crate::structure::{find_invariant_subspace, invariance_defect, word_span_dimension, xk_dimension_estimate, xk_dimension_formula};

#[derive(Parser, Debug)]
#[command(name = "concomitant", version, about = "Matrix concomitants and trace polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random choice; defaults to $CONCOMITANT_SEED, then 0.
    #[arg(long, global = true, env = "CONCOMITANT_SEED")]
    seed: Option<u64>,
    /// Tolerance; each subcommand has its own default.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Number of generators.
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Matrix size.
    #[arg(long, global = true)]
    n: Option<usize>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum GroupArg {
    G,
    K,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Group {
        match g {
            GroupArg::G => Group::G,
            GroupArg::K => Group::K,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression and print its normal form.
    Parse {
        #[arg(long)]
        expr: String,
    },
    /// Evaluate an expression at a tuple.
    Eval {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Randomized check of f(s⁻¹zs) = s⁻¹f(z)s.
    Equivariance {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value = "g")]
        group: GroupArg,
    },
    /// Trace generators of the invariant ring.
    Generators,
    /// Invariant coordinates of a tuple.
    Coords {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// (tr Z1, tr Z2, det Z1, det Z2, tr Z1Z2) for a pair of 2x2 matrices.
    Coords22 {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Find S with S⁻¹ Z S = W.
    Similar {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        file2: PathBuf,
    },
    /// Whether a tuple generates the full matrix algebra.
    Irreducible {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Search for a common invariant subspace.
    Subspace {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Haar average of k f(k⁻¹zk) k⁻¹ over the unitary group.
    Reynolds {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Conditional expectation onto the center (words become ntr).
    Expect {
        #[arg(long)]
        expr: String,
    },
    /// Compare two points of the associated bundle.
    FiberEq {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        file2: PathBuf,
        #[arg(long, value_enum, default_value = "g")]
        group: GroupArg,
    },
    /// Maximum-modulus check on the disc λ ↦ center + λ·direction.
    ///
    /// CSV columns: re,im,modulus,boundary.
    Maxmod {
        #[arg(long)]
        expr: String,
        /// Center tuple; random when both files are absent.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Direction tuple.
        #[arg(long)]
        file2: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Boundary sample count.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 256)]
        interior: usize,
        #[arg(long)]
        csv: bool,
    },
    /// 1/|det[Z1, t·Z2]| for t = 1, 1/2, 1/4, ...
    ///
    /// CSV columns: t,inverse_det.
    Nonextension {
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Base pair; defaults to (diag(1,-1), swap).
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
    /// Numerical dimension of the stratum X_k.
    XkDim {
        #[arg(long)]
        k: usize,
    },
    /// Randomized polynomial identity test on n x n matrices.
    Pit {
        #[arg(long)]
        expr: String,
    },
    /// Randomized centrality test on n x n matrices.
    Central {
        #[arg(long)]
        expr: String,
    },
    /// c with [Zi, Zj]² = c·I for 2x2 matrices.
    Wagner {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 2)]
        j: usize,
    },
    /// Central polynomial with p(z) = I at an irreducible 2x2 tuple.
    RvNormalize {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_word_len: usize,
    },
    /// Greedy cover of samples by central polynomials.
    Cover {
        /// JSON array of tuples; random disc samples when absent and
        /// --samples is given.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_word_len: usize,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => {
                    let text = e.to_string();
                    let line = text.lines().next().unwrap_or("error: invalid arguments");
                    Output {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("{line}\n"),
                    }
                }
            };
        }
    };
    let mut ctx = Ctx { g: cli.global, stdin };
    match ctx.dispatch(cli.command) {
        Ok((code, mut stdout)) => {
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Output {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Output {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.to_string().replace('\n', " ")),
        },
    }
}

struct Ctx<'a> {
    g: Global,
    stdin: &'a mut dyn Read,
}

type Reply = (i32, String);

fn complex_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn complex_text(c: Complex64) -> String {
    let p = TracePoly::scalar(1, c);
    format_expression(&p)
}

fn matrix_text(m: &crate::linalg::CMat) -> String {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| complex_text(m[(i, j)]))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn report_text(r: &CheckReport) -> String {
    let mut s = format!(
        "verdict: {}\ntrials: {}\nseed: {}\nmax_defect: {:e}\ntolerance: {:e}",
        if r.passed() { "pass" } else { "fail" },
        r.trials,
        r.seed,
        r.max_defect,
        r.tolerance
    );
    for w in &r.witnesses {
        s.push_str(&format!("\nwitness: trial {} defect {:e}", w.trial, w.defect));
        if let Some([re, im]) = w.lambda {
            s.push_str(&format!(" at lambda {}", complex_text(Complex64::new(re, im))));
        }
    }
    s
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(v)?)
}

impl Ctx<'_> {
    fn seed(&self) -> u64 {
        self.g.seed.unwrap_or(0)
    }

    fn tol(&self, default: f64) -> Result<f64> {
        let t = self.g.tol.unwrap_or(default);
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("--tol must be finite and >= 0, got {t}")));
        }
        Ok(t)
    }

    fn trials(&self) -> Result<usize> {
        match self.g.trials.unwrap_or(100) {
            0 => Err(Error::InvalidParameter("--trials must be >= 1".into())),
            t => Ok(t),
        }
    }

    fn d(&self) -> Result<usize> {
        match self.g.d.unwrap_or(2) {
            0 => Err(Error::InvalidParameter("--d must be >= 1".into())),
            d => Ok(d),
        }
    }

    fn n(&self) -> Result<usize> {
        match self.g.n.unwrap_or(2) {
            0 => Err(Error::InvalidParameter("--n must be >= 1".into())),
            n => Ok(n),
        }
    }

    fn read_text(&mut self, path: Option<&PathBuf>) -> Result<String> {
        match path {
            Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|e| {
                Error::InvalidParameter(format!("cannot read {}: {e}", p.display()))
            }),
            _ => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s)?;
                Ok(s)
            }
        }
    }

    fn read_tuple(&mut self, path: Option<&PathBuf>) -> Result<MatTuple> {
        let z = MatTuple::from_json(&self.read_text(path)?)?;
        if let Some(d) = self.g.d {
            if d != z.d() {
                return Err(Error::DimensionMismatch(format!("--d {d} but the tuple has d = {}", z.d())));
            }
        }
        if let Some(n) = self.g.n {
            if n != z.n() {
                return Err(Error::DimensionMismatch(format!("--n {n} but the tuple has n = {}", z.n())));
            }
        }
        Ok(z)
    }

    fn dispatch(&mut self, cmd: Command) -> Result<Reply> {
        let json = self.g.json;
        match cmd {
            Command::Parse { expr } => {
                let p = parse_expression(&expr, self.d()?)?;
                let text = format_expression(&p);
                if json {
                    ok(to_json(&json!({
                        "d": p.d(),
                        "expr": text,
                        "terms": p.num_terms(),
                        "degree": p.degree(),
                        "pure_scalar": p.is_pure_scalar(),
                    }))?)
                } else {
                    ok(text)
                }
            }
            Command::Eval { expr, file } => {
                let z = self.read_tuple(file.as_ref())?;
                let p = parse_expression(&expr, z.d())?;
                let v = evaluate(&p, &z)?;
                if json {
                    ok(to_json(&json!({ "n": z.n(), "value": matrix_to_repr(&v) }))?)
                } else {
                    ok(matrix_text(&v))
                }
            }
            Command::Equivariance { expr, group } => {
                let d = self.d()?;
                let p = parse_expression(&expr, d)?;
                let r = check_equivariance(&p, d, self.n()?, group.into(), self.trials()?, self.tol(1e-8)?, self.seed())?;
                self.report(&r, r.passed())
            }
            Command::Generators => {
                let g = enumerate_trace_generators(self.d()?, self.n()?);
                if json {
                    ok(to_json(&json!({ "d": g.d(), "n": g.n(), "count": g.len(), "generators": g }))?)
                } else {
                    ok(g.to_strings().join("\n"))
                }
            }
            Command::Coords { file } => {
                let z = self.read_tuple(file.as_ref())?;
                let g = enumerate_trace_generators(z.d(), z.n());
                let c = quotient_coords(&z, &g)?;
                if json {
                    let coords: Vec<Value> = c.0.iter().map(|&x| complex_json(x)).collect();
                    ok(to_json(&json!({ "generators": g, "coords": coords }))?)
                } else {
                    ok(g.to_strings()
                        .iter()
                        .zip(&c.0)
                        .map(|(name, &x)| format!("{name} = {}", complex_text(x)))
                        .collect::<Vec<_>>()
                        .join("\n"))
                }
            }
            Command::Coords22 { file } => {
                let z = self.read_tuple(file.as_ref())?;
                let c = coords22(&z)?;
                if json {
                    ok(to_json(&c.iter().map(|&x| complex_json(x)).collect::<Vec<_>>())?)
                } else {
                    ok(c.iter().map(|&x| complex_text(x)).collect::<Vec<_>>().join(" "))
                }
            }
            Command::Similar { file, file2 } => {
                let z = self.read_tuple(file.as_ref())?;
                let w = self.read_tuple(Some(&file2))?;
                let t = similarity_transport_report(&z, &w, self.tol(1e-8)?)?;
                if json {
                    ok(to_json(&json!({
                        "similar": t.conjugator.is_some(),
                        "null_dim": t.null_dim,
                        "residual": t.residual,
                        "conjugator": t.conjugator.as_ref().map(matrix_to_repr),
                    }))?)
                } else {
                    match &t.conjugator {
                        Some(s) => ok(format!(
                            "similar: true\nresidual: {:e}\n{}",
                            t.residual.unwrap_or(0.0),
                            matrix_text(s)
                        )),
                        None => ok(format!("similar: false\nnull_dim: {}", t.null_dim)),
                    }
                }
            }
            Command::Irreducible { file } => {
                let z = self.read_tuple(file.as_ref())?;
                let span = word_span_dimension(&z);
                let full = z.n() * z.n();
                if json {
                    ok(to_json(&json!({ "irreducible": span == full, "span_dimension": span, "full": full }))?)
                } else {
                    ok(format!("irreducible: {}\nspan_dimension: {span} of {full}", span == full))
                }
            }
            Command::Subspace { file } => {
                let z = self.read_tuple(file.as_ref())?;
                let q = find_invariant_subspace(&z, self.tol(1e-8)?);
                if json {
                    ok(to_json(&json!({
                        "found": q.is_some(),
                        "dimension": q.as_ref().map(|q| q.ncols()),
                        "defect": q.as_ref().map(|q| invariance_defect(&z, q)),
                        "basis": q.as_ref().map(|q| q.column_iter()
                            .map(|c| c.iter().map(|&x| complex_json(x)).collect::<Vec<_>>())
                            .collect::<Vec<_>>()),
                    }))?)
                } else {
                    match q {
                        Some(q) => ok(format!(
                            "found: true\ndimension: {}\ndefect: {:e}\n{}",
                            q.ncols(),
                            invariance_defect(&z, &q),
                            matrix_text(&q)
                        )),
                        None => ok("found: false".to_string()),
                    }
                }
            }
            Command::Reynolds { expr, file, samples } => {
                let z = self.read_tuple(file.as_ref())?;
                let p = parse_expression(&expr, z.d())?;
                let est = reynolds_estimate(&p, &z, samples, self.seed())?;
                if json {
                    ok(to_json(&json!({
                        "samples": samples,
                        "seed": self.seed(),
                        "mean": matrix_to_repr(&est.mean),
                        "spread": est.spread,
                    }))?)
                } else {
                    ok(format!("spread: {:e}\n{}", est.spread, matrix_text(&est.mean)))
                }
            }
            Command::Expect { expr } => {
                let p = parse_expression(&expr, self.d()?)?;
                let e = format_expression(&conditional_expectation(&p));
                if json {
                    ok(to_json(&json!({ "expr": e }))?)
                } else {
                    ok(e)
                }
            }
            Command::FiberEq { file, file2, group } => {
                let a: FiberPoint = serde_json::from_str(&self.read_text(file.as_ref())?)?;
                let b: FiberPoint = serde_json::from_str(&self.read_text(Some(&file2))?)?;
                let c = compare_fiber_points(&a, &b, group.into(), self.tol(1e-7)?)?;
                if json {
                    ok(to_json(&json!({
                        "equivalent": c.equivalent,
                        "null_dim": c.null_dim,
                        "base_residual": c.base_residual,
                        "value_residual": c.value_residual,
                        "unitarity_defect": c.unitarity_defect,
                    }))?)
                } else {
                    ok(format!("equivalent: {}\nnull_dim: {}", c.equivalent, c.null_dim))
                }
            }
            Command::Maxmod {
                expr,
                file,
                file2,
                radius,
                samples,
                interior,
                csv,
            } => {
                let (center, direction) = match (file, file2) {
                    (None, None) => {
                        let (d, n) = (self.d()?, self.n()?);
                        let mut rng = seeded(self.seed());
                        let c = random_tuple_with(d, n, Ensemble::Disc, &mut rng)?;
                        let v = random_tuple_with(d, n, Ensemble::Ginibre, &mut rng)?;
                        let scale = 1.0 / v.max_norm().max(f64::MIN_POSITIVE);
                        (c, v.map(|m| m * Complex64::new(scale, 0.0)))
                    }
                    (Some(f), Some(f2)) => (self.read_tuple(Some(&f))?, self.read_tuple(Some(&f2))?),
                    _ => {
                        return Err(Error::InvalidParameter(
                            "maxmod needs both --file and --file2, or neither".into(),
                        ))
                    }
                };
                let p = parse_expression(&expr, center.d())?;
                if csv {
                    let pts = disc_samples(&p, &center, &direction, radius, samples, interior)?;
                    let mut out = String::from("re,im,modulus,boundary");
                    for s in pts {
                        out.push_str(&format!("\n{},{},{},{}", s.lambda.re, s.lambda.im, s.modulus, s.boundary));
                    }
                    return ok(out);
                }
                let r = max_modulus_disc_check(&p, &center, &direction, radius, samples, interior, self.tol(1e-9)?)?;
                self.report(&r, r.passed())
            }
            Command::Nonextension { steps, file, csv } => {
                let base = match file {
                    Some(f) => self.read_tuple(Some(&f))?,
                    None => nonextension_base(),
                };
                let pts = nonextension_along(&base, steps)?;
                if csv {
                    let mut out = String::from("t,inverse_det");
                    for (t, v) in &pts {
                        out.push_str(&format!("\n{t},{v}"));
                    }
                    ok(out)
                } else if json {
                    let points: Vec<Value> = pts.iter().map(|(t, v)| json!({ "t": t, "inverse_det": v })).collect();
                    ok(to_json(&json!({ "points": points }))?)
                } else {
                    ok(pts.iter().map(|(t, v)| format!("{t:e} {v:e}")).collect::<Vec<_>>().join("\n"))
                }
            }
            Command::XkDim { k } => {
                let (d, n) = (self.d()?, self.n()?);
                let est = xk_dimension_estimate(d, n, k, self.seed(), self.tol(1e-7)?)?;
                if json {
                    ok(to_json(&json!({
                        "d": d, "n": n, "k": k,
                        "estimate": est,
                        "formula": xk_dimension_formula(d, n, k),
                    }))?)
                } else {
                    ok(est.to_string())
                }
            }
            Command::Pit { expr } => {
                let p = parse_expression(&expr, self.d()?)?;
                let r = identity_check(&p, self.n()?, self.trials()?, self.seed(), self.tol(1e-10)?)?;
                self.report(&r, r.passed())
            }
            Command::Central { expr } => {
                let p = parse_expression(&expr, self.d()?)?;
                let r = centrality_check(&p, self.n()?, self.trials()?, self.seed(), self.tol(1e-10)?)?;
                let code = if r.central { 0 } else { 1 };
                if json {
                    Ok((code, to_json(&r)?))
                } else {
                    Ok((
                        code,
                        format!(
                            "central: {}\nidentity: {}\n{}",
                            r.central,
                            r.is_identity,
                            report_text(&r.scalar)
                        ),
                    ))
                }
            }
            Command::Wagner { file, i, j } => {
                let z = self.read_tuple(file.as_ref())?;
                let c = wagner_scalar(&z, i, j)?;
                if json {
                    ok(to_json(&json!({ "i": i, "j": j, "scalar": complex_json(c) }))?)
                } else {
                    ok(complex_text(c))
                }
            }
            Command::RvNormalize { file, max_word_len } => {
                let z = self.read_tuple(file.as_ref())?;
                let r = rv_normalize_report(&z, max_word_len)?;
                let poly = format_expression(&r.poly);
                if json {
                    ok(to_json(&json!({
                        "poly": poly,
                        "u": format_expression(&TracePoly::word(z.d(), r.u.clone())?),
                        "v": format_expression(&TracePoly::word(z.d(), r.v.clone())?),
                        "det": complex_json(r.det),
                        "residual": r.residual,
                    }))?)
                } else {
                    ok(poly)
                }
            }
            Command::Cover {
                file,
                samples,
                max_word_len,
                delta,
            } => {
                let tuples: Vec<MatTuple> = match (file, samples) {
                    (None, Some(count)) => {
                        let d = self.d()?;
                        let mut rng = seeded(self.seed());
                        (0..count)
                            .map(|_| random_tuple_with(d, 2, Ensemble::Disc, &mut rng))
                            .collect::<Result<_>>()?
                    }
                    (file, _) => serde_json::from_str(&self.read_text(file.as_ref())?)?,
                };
                let cover = partition_of_unity(&tuples, max_word_len, delta)?;
                let polys: Vec<String> = cover.polys.iter().map(format_expression).collect();
                if json {
                    ok(to_json(&json!({
                        "polys": polys,
                        "centers": cover.centers,
                        "min_max": cover.min_max,
                    }))?)
                } else {
                    ok(format!("min_max: {}\n{}", cover.min_max, polys.join("\n")))
                }
            }
        }
    }

    fn report(&self, r: &CheckReport, passed: bool) -> Result<Reply> {
        let code = if passed { 0 } else { 1 };
        let body = if self.g.json { to_json(r)? } else { report_text(r) };
        Ok((code, body))
    }
}

fn ok(s: String) -> Result<Reply> {
    Ok((0, s))
}
