//! Matrix concomitants: maps `f` with `f(s⁻¹zs) = s⁻¹f(z)s`.
//!
//! This module checks that identity numerically, projects arbitrary maps
//! onto concomitants by Haar averaging over the unitary group, takes the
//! normalized-trace conditional expectation onto the center, compares points
//! of the associated matrix bundle, and probes the function theory on
//! analytic discs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::similarity_transport_report;
use crate::linalg::{c64, commutator, det2, diag, identity, real_matrix, CMat, DEFAULT_COND_CAP};
use crate::mattuple::{
    conjugate, conjugate_with_inverse, evaluate_scalar, haar_unitary_with, matrix_to_repr,
    random_invertible, random_tuple_with, Ensemble, FiberPoint, MatTuple, MatrixMap, MatrixRepr,
};
use crate::ncpoly::TracePoly;
use crate::rng::stream;

/// Cap on the condition number of random conjugators drawn from `G`.
pub const SAMPLED_COND_CAP: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A failing input, kept for diagnosis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub defect: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tuple: Option<MatTuple>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conjugator: Option<MatrixRepr>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<[f64; 2]>,
}

impl Witness {
    pub fn new(trial: usize, defect: f64) -> Self {
        Witness {
            trial,
            defect,
            tuple: None,
            conjugator: None,
            lambda: None,
        }
    }
}

/// Outcome of a randomized property check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub trials: usize,
    pub seed: u64,
    pub max_defect: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub const MAX_WITNESSES: usize = 3;

/// Accumulates defects trial by trial; `verdict` is pass iff every defect
/// is at most the tolerance (NaN counts as a failure).
pub struct ReportBuilder {
    report: CheckReport,
}

impl ReportBuilder {
    pub fn new(seed: u64, tolerance: f64) -> Self {
        ReportBuilder {
            report: CheckReport {
                trials: 0,
                seed,
                max_defect: 0.0,
                tolerance,
                verdict: Verdict::Pass,
                witnesses: Vec::new(),
            },
        }
    }

    /// Records one trial; `witness` is only built for failures.
    pub fn record(&mut self, defect: f64, witness: impl FnOnce() -> Witness) {
        let r = &mut self.report;
        r.trials += 1;
        let defect = if defect.is_nan() { f64::INFINITY } else { defect };
        r.max_defect = r.max_defect.max(defect);
        if defect > r.tolerance {
            r.verdict = Verdict::Fail;
            if r.witnesses.len() < MAX_WITNESSES {
                r.witnesses.push(witness());
            }
        }
    }

    pub fn finish(self) -> CheckReport {
        self.report
    }
}

/// The conjugating group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    /// `GL_n(ℂ)`, sampled as well-conditioned Ginibre matrices.
    G,
    /// The unitary group, sampled from Haar measure.
    K,
}

/// `‖f(s⁻¹zs) − s⁻¹f(z)s‖ / (1 + ‖f(z)‖)` in the Frobenius norm.
pub fn equivariance_defect<F: MatrixMap + ?Sized>(f: &F, z: &MatTuple, s: &CMat) -> Result<f64> {
    let inv = crate::linalg::checked_inverse(s, DEFAULT_COND_CAP)?;
    let fz = f.apply(z)?;
    let lhs = f.apply(&conjugate_with_inverse(z, s, &inv))?;
    let rhs = &inv * &fz * s;
    Ok((lhs - rhs).norm() / (1.0 + fz.norm()))
}

/// Samples `(z, s)` with `z` Ginibre and `s` from the chosen group and
/// records the relative equivariance defect of `f`.
pub fn check_equivariance<F: MatrixMap + ?Sized>(
    f: &F,
    d: usize,
    n: usize,
    group: Group,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut report = ReportBuilder::new(seed, tol);
    for trial in 0..trials {
        let mut rng = stream(seed, trial as u64);
        let z = random_tuple_with(d, n, Ensemble::Ginibre, &mut rng)?;
        let s = match group {
            Group::G => random_invertible(n, &mut rng, SAMPLED_COND_CAP),
            Group::K => haar_unitary_with(n, &mut rng),
        };
        let defect = equivariance_defect(f, &z, &s)?;
        report.record(defect, || Witness {
            tuple: Some(z.clone()),
            conjugator: Some(matrix_to_repr(&s)),
            ..Witness::new(trial, defect)
        });
    }
    Ok(report.finish())
}

/// The Haar-averaged terms `k f(k⁻¹zk) k⁻¹`, one per unitary sample.
///
/// The sample set depends only on `(n, samples, seed)`, so calls at two base
/// points with the same seed share their random numbers.
pub fn reynolds_terms<F: MatrixMap + ?Sized>(
    f: &F,
    z: &MatTuple,
    samples: usize,
    seed: u64,
) -> Result<Vec<CMat>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let mut rng = crate::rng::seeded(seed);
    (0..samples)
        .map(|_| {
            let k = haar_unitary_with(z.n(), &mut rng);
            let k_inv = k.adjoint();
            let moved = conjugate_with_inverse(z, &k, &k_inv);
            Ok(&k * f.apply(&moved)? * &k_inv)
        })
        .collect()
}

/// Monte-Carlo estimate of `∫_K k f(k⁻¹zk) k⁻¹ dk`.
pub fn reynolds_average<F: MatrixMap + ?Sized>(
    f: &F,
    z: &MatTuple,
    samples: usize,
    seed: u64,
) -> Result<CMat> {
    Ok(reynolds_estimate(f, z, samples, seed)?.mean)
}

#[derive(Clone, Debug)]
pub struct ReynoldsEstimate {
    pub mean: CMat,
    /// `max_j ‖term_j − mean‖ / (1 + ‖mean‖)`; zero exactly when every
    /// sample agrees, i.e. when `f` is a unitary concomitant.
    pub spread: f64,
}

pub fn reynolds_estimate<F: MatrixMap + ?Sized>(
    f: &F,
    z: &MatTuple,
    samples: usize,
    seed: u64,
) -> Result<ReynoldsEstimate> {
    let terms = reynolds_terms(f, z, samples, seed)?;
    let n = z.n();
    // fixed summation order keeps the result bit-identical per seed
    let mut mean = CMat::zeros(n, n);
    for t in &terms {
        mean += t;
    }
    mean /= c64(terms.len() as f64, 0.0);
    let scale = 1.0 + mean.norm();
    let spread = terms.iter().map(|t| (t - &mean).norm() / scale).fold(0.0, f64::max);
    Ok(ReynoldsEstimate { mean, spread })
}

/// The conditional expectation onto the center: every plain word `w` is
/// replaced by the scalar `ntr(w)`, so the result is pure-scalar and
/// evaluates to `τ₀(p(z))·I`.
pub fn conditional_expectation(p: &TracePoly) -> TracePoly {
    p.normalized_trace()
}

/// Residuals behind a [`fiber_pair_equivalent`] verdict.
#[derive(Clone, Debug, Default)]
pub struct FiberComparison {
    pub null_dim: usize,
    pub base_residual: Option<f64>,
    pub value_residual: Option<f64>,
    pub unitarity_defect: Option<f64>,
    pub equivalent: bool,
}

/// Do `a` and `b` represent the same point of the associated bundle, i.e.
/// is there `s` (unitary up to scale for `Group::K`) with
/// `b = (s⁻¹ a.base s, s⁻¹ a.value s)`?
pub fn fiber_pair_equivalent(a: &FiberPoint, b: &FiberPoint, group: Group, tol: f64) -> Result<bool> {
    Ok(compare_fiber_points(a, b, group, tol)?.equivalent)
}

pub fn compare_fiber_points(
    a: &FiberPoint,
    b: &FiberPoint,
    group: Group,
    tol: f64,
) -> Result<FiberComparison> {
    a.base().check_shape(b.base())?;
    let t = similarity_transport_report(a.base(), b.base(), tol)?;
    let mut out = FiberComparison {
        null_dim: t.null_dim,
        ..Default::default()
    };
    let Some(s) = t.conjugator else {
        return Ok(out);
    };
    let moved = conjugate(a.base(), &s)?;
    let base_residual = moved.distance(b.base()) / (1.0 + b.base().max_norm());
    let inv = crate::linalg::checked_inverse(&s, DEFAULT_COND_CAP)?;
    let value_residual = (&inv * a.value() * &s - b.value()).norm() / (1.0 + b.value().norm());
    out.base_residual = Some(base_residual);
    out.value_residual = Some(value_residual);
    let mut ok = base_residual <= tol && value_residual <= tol;
    if group == Group::K {
        let n = s.nrows();
        let gram = s.adjoint() * &s;
        let defect = (&gram - identity(n) * (gram.trace() / c64(n as f64, 0.0))).norm();
        out.unitarity_defect = Some(defect);
        ok &= defect <= tol;
    }
    out.equivalent = ok;
    Ok(out)
}

/// One evaluation point of a disc check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscSample {
    pub lambda: Complex64,
    pub modulus: f64,
    pub boundary: bool,
}

/// Fraction of the radius that bounds the interior sample points.
pub const INTERIOR_RADIUS_FRACTION: f64 = 0.9;

/// `|f|` along the analytic disc `λ ↦ center + λ·direction`: equally spaced
/// points on `|λ| = radius`, then a sunflower pattern filling
/// `|λ| ≤ 0.9·radius`.
pub fn disc_samples(
    f: &TracePoly,
    center: &MatTuple,
    direction: &MatTuple,
    radius: f64,
    boundary_samples: usize,
    interior_samples: usize,
) -> Result<Vec<DiscSample>> {
    if !f.is_pure_scalar() {
        return Err(Error::NotPureScalar);
    }
    center.check_shape(direction)?;
    if !(radius > 0.0) || boundary_samples == 0 {
        return Err(Error::InvalidParameter("need radius > 0 and boundary samples >= 1".into()));
    }
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let boundary = (0..boundary_samples).map(|j| {
        let theta = std::f64::consts::TAU * j as f64 / boundary_samples as f64;
        (Complex64::from_polar(radius, theta), true)
    });
    let interior = (0..interior_samples).map(|j| {
        let rho = INTERIOR_RADIUS_FRACTION * radius * ((j as f64 + 0.5) / interior_samples as f64).sqrt();
        (Complex64::from_polar(rho, golden * j as f64), false)
    });
    boundary
        .chain(interior)
        .map(|(lambda, boundary)| {
            let z = center.add_scaled(direction, lambda)?;
            Ok(DiscSample {
                lambda,
                modulus: evaluate_scalar(f, &z)?.norm(),
                boundary,
            })
        })
        .collect()
}

/// Maximum principle on an analytic disc: passes iff the largest interior
/// modulus is at most the largest boundary modulus plus `tol`. The report's
/// defect is `max(0, interior max − boundary max)`.
pub fn max_modulus_disc_check(
    f: &TracePoly,
    center: &MatTuple,
    direction: &MatTuple,
    radius: f64,
    boundary_samples: usize,
    interior_samples: usize,
    tol: f64,
) -> Result<CheckReport> {
    let samples = disc_samples(f, center, direction, radius, boundary_samples, interior_samples)?;
    let boundary_max = samples
        .iter()
        .filter(|s| s.boundary)
        .map(|s| s.modulus)
        .fold(0.0, f64::max);
    let mut report = ReportBuilder::new(0, tol);
    for (i, s) in samples.iter().enumerate() {
        let defect = if s.boundary { 0.0 } else { (s.modulus - boundary_max).max(0.0) };
        report.record(defect, || Witness {
            lambda: Some([s.lambda.re, s.lambda.im]),
            ..Witness::new(i, defect)
        });
    }
    Ok(report.finish())
}

/// `(diag(1, −1), swap)`, the starting point of the default non-extension
/// path.
pub fn nonextension_base() -> MatTuple {
    MatTuple::new(vec![
        diag(&[c64(1.0, 0.0), c64(-1.0, 0.0)]),
        real_matrix(2, &[0.0, 1.0, 1.0, 0.0]),
    ])
    .expect("2x2 pair")
}

/// `1/|det[Z₁,Z₂]|` along `z_t = (Z₁, t·Z₂)` for `t = 1, ½, ¼, …`.
///
/// On the default base this is `1/(4t²)`: the inverse determinant of the
/// commutator is holomorphic on the irreducible pairs and blows up as they
/// approach the reducible ones.
pub fn nonextension_witness(steps: usize) -> Result<Vec<(f64, f64)>> {
    nonextension_along(&nonextension_base(), steps)
}

pub fn nonextension_along(base: &MatTuple, steps: usize) -> Result<Vec<(f64, f64)>> {
    if steps < 2 {
        return Err(Error::InvalidParameter("steps must be >= 2".into()));
    }
    if base.d() != 2 || base.n() != 2 {
        return Err(Error::DimensionMismatch("the path needs a pair of 2x2 matrices".into()));
    }
    Ok((0..steps)
        .map(|j| {
            let t = 0.5f64.powi(j as i32);
            let z2 = base.get(2) * c64(t, 0.0);
            (t, 1.0 / det2(&commutator(base.get(1), &z2)).norm())
        })
        .collect())
}
