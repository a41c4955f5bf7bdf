//! Polynomial identities and central polynomials of `M_n`.
//!
//! Identity testing is randomized: a `false` verdict comes with a witness
//! tuple, a `true` verdict means no sampled tuple violated the identity.
//! Central polynomials are constructed for `n = 2` only, from the Wagner
//! polynomial `[X, Y]² = −det([X, Y])·I`.

use num_complex::Complex64;
use serde::Serialize;

use crate::concomitants::{CheckReport, ReportBuilder, Witness};
use crate::error::{Error, Result};
use crate::linalg::{c64, commutator, det2, identity};
use crate::mattuple::{evaluate, evaluate_with_scale, random_tuple_with, word_value, Ensemble, MatTuple};
use crate::ncpoly::{all_words, TracePoly, Word};
use crate::rng::stream;
use crate::structure::{is_irreducible, word_span_dimension};

/// `‖p(z)‖ / (1 + scale)` with `scale` the largest term magnitude at `z`.
pub fn identity_defect(p: &TracePoly, z: &MatTuple) -> Result<f64> {
    let (v, scale) = evaluate_with_scale(p, z)?;
    Ok(v.norm() / (1.0 + scale))
}

/// `‖p(z) − (tr p(z)/n)·I‖ / scale`, zero when every term vanishes.
pub fn off_scalar_defect(p: &TracePoly, z: &MatTuple) -> Result<f64> {
    let (v, scale) = evaluate_with_scale(p, z)?;
    let n = z.n();
    let off = (&v - identity(n) * (v.trace() / c64(n as f64, 0.0))).norm();
    Ok(if scale > 0.0 { off / scale } else { off })
}

fn sampled_check(
    p: &TracePoly,
    n: usize,
    trials: usize,
    seed: u64,
    tol: f64,
    defect: fn(&TracePoly, &MatTuple) -> Result<f64>,
) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut report = ReportBuilder::new(seed, tol);
    for trial in 0..trials {
        let z = random_tuple_with(p.d(), n, Ensemble::Ginibre, &mut stream(seed, trial as u64))?;
        let e = defect(p, &z)?;
        report.record(e, || Witness {
            tuple: Some(z.clone()),
            ..Witness::new(trial, e)
        });
    }
    Ok(report.finish())
}

/// Randomized identity test on Ginibre tuples; the report's defect is
/// [`identity_defect`].
pub fn identity_check(p: &TracePoly, n: usize, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    sampled_check(p, n, trials, seed, tol, identity_defect)
}

pub fn is_identity(p: &TracePoly, n: usize, trials: usize, seed: u64, tol: f64) -> Result<bool> {
    Ok(identity_check(p, n, trials, seed, tol)?.passed())
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralityReport {
    /// Off-scalar defects of the sampled values.
    #[serde(flatten)]
    pub scalar: CheckReport,
    pub is_identity: bool,
    pub central: bool,
}

/// Scalar-valued on every sample, and not an identity.
pub fn centrality_check(p: &TracePoly, n: usize, trials: usize, seed: u64, tol: f64) -> Result<CentralityReport> {
    if p.has_constant_term() {
        return Err(Error::ConstantTerm);
    }
    let scalar = sampled_check(p, n, trials, seed, tol, off_scalar_defect)?;
    let is_identity = is_identity(p, n, trials, seed, tol)?;
    let central = scalar.passed() && !is_identity;
    Ok(CentralityReport {
        scalar,
        is_identity,
        central,
    })
}

pub fn is_central(p: &TracePoly, n: usize, trials: usize, seed: u64, tol: f64) -> Result<bool> {
    Ok(centrality_check(p, n, trials, seed, tol)?.central)
}

fn check_pair_indices(z: &MatTuple, i: usize, j: usize) -> Result<()> {
    if z.n() != 2 {
        return Err(Error::DimensionMismatch(format!("need 2x2 matrices, got n = {}", z.n())));
    }
    let d = z.d();
    if i == j || !(1..=d).contains(&i) || !(1..=d).contains(&j) {
        return Err(Error::InvalidParameter(format!(
            "need distinct indices in 1..={d}, got {i} and {j}"
        )));
    }
    Ok(())
}

/// `c` with `[Zᵢ, Zⱼ]² = c·I₂`, namely `c = −det[Zᵢ, Zⱼ]` (1-based indices).
pub fn wagner_scalar(z: &MatTuple, i: usize, j: usize) -> Result<Complex64> {
    check_pair_indices(z, i, j)?;
    Ok(-det2(&commutator(z.get(i), z.get(j))))
}

/// Tolerance of the `p(z) = I` self-check in [`rv_normalize`].
pub const RV_TOL: f64 = 1e-8;
/// Determinants at or below this are treated as zero by the search.
pub const RV_DET_FLOOR: f64 = 1e-10;

/// Result of [`rv_normalize_report`].
#[derive(Clone, Debug)]
pub struct Normalization {
    pub poly: TracePoly,
    pub u: Word,
    pub v: Word,
    pub det: Complex64,
    pub residual: f64,
}

/// A central polynomial with `p(z) = I` at an irreducible 2×2 tuple:
/// `p = (−1/det[u(z), v(z)])·[u, v]²` for the word pair maximizing
/// `|det[u(z), v(z)]|`.
pub fn rv_normalize(z: &MatTuple, max_word_len: usize) -> Result<TracePoly> {
    Ok(rv_normalize_report(z, max_word_len)?.poly)
}

/// Word pairs `u < v` are scanned by total length, then lexicographically;
/// a later pair replaces the current best only with a strictly larger
/// `|det|`.
pub fn rv_normalize_report(z: &MatTuple, max_word_len: usize) -> Result<Normalization> {
    if z.n() != 2 {
        return Err(Error::DimensionMismatch(format!("need 2x2 matrices, got n = {}", z.n())));
    }
    if max_word_len == 0 {
        return Err(Error::InvalidParameter("max_word_len must be >= 1".into()));
    }
    if !is_irreducible(z) {
        return Err(Error::Reducible {
            span: word_span_dimension(z),
            full: 4,
        });
    }
    let d = z.d();
    let words: Vec<(Word, _)> = (1..=max_word_len)
        .flat_map(|len| all_words(d, len))
        .map(|w| {
            let m = word_value(&w, z);
            (w, m)
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..words.len())
        .flat_map(|a| (a + 1..words.len()).map(move |b| (a, b)))
        .collect();
    pairs.sort_by(|&(a, b), &(c, e)| {
        let la = words[a].0.len() + words[b].0.len();
        let lc = words[c].0.len() + words[e].0.len();
        la.cmp(&lc)
            .then_with(|| words[a].0.letters().cmp(words[c].0.letters()))
            .then_with(|| words[b].0.letters().cmp(words[e].0.letters()))
    });
    let mut best: Option<(usize, usize, Complex64)> = None;
    for (a, b) in pairs {
        let det = det2(&commutator(&words[a].1, &words[b].1));
        if best.is_none_or(|(_, _, bd)| det.norm() > bd.norm()) {
            best = Some((a, b, det));
        }
    }
    let (a, b, det) = best.ok_or_else(|| Error::SearchFailed("no word pairs to search".into()))?;
    if det.norm() <= RV_DET_FLOOR {
        return Err(Error::SearchFailed(format!(
            "every commutator determinant over words of length <= {max_word_len} is at most {RV_DET_FLOOR:e}"
        )));
    }
    let (u, v) = (words[a].0.clone(), words[b].0.clone());
    let c = TracePoly::word(d, u.clone())?.try_commutator(&TracePoly::word(d, v.clone())?)?;
    let poly = c.pow(2).scale(-det.inv());
    let residual = (evaluate(&poly, z)? - identity(2)).norm();
    if residual > RV_TOL {
        return Err(Error::SearchFailed(format!(
            "normalized polynomial misses the identity by {residual:e}"
        )));
    }
    Ok(Normalization {
        poly,
        u,
        v,
        det,
        residual,
    })
}

/// Central polynomials with no common zero on a sample set.
#[derive(Clone, Debug)]
pub struct Cover {
    pub polys: Vec<TracePoly>,
    /// Sample index each polynomial was normalized at.
    pub centers: Vec<usize>,
    /// `min` over samples of `max` over polynomials of `|scalar value|`.
    pub min_max: f64,
}

/// Greedy cover: repeatedly normalize at the worst-covered sample until
/// every sample has some polynomial with `|scalar value| ≥ delta`.
pub fn partition_of_unity(samples: &[MatTuple], max_word_len: usize, delta: f64) -> Result<Cover> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    for (i, z) in samples.iter().enumerate() {
        if z.n() != 2 {
            return Err(Error::DimensionMismatch(format!("sample {i} is not a tuple of 2x2 matrices")));
        }
        if !is_irreducible(z) {
            return Err(Error::Reducible {
                span: word_span_dimension(z),
                full: 4,
            });
        }
    }
    let mut coverage = vec![0.0f64; samples.len()];
    let mut cover = Cover {
        polys: Vec::new(),
        centers: Vec::new(),
        min_max: 0.0,
    };
    for _ in 0..samples.len() {
        let (worst, &level) = coverage
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty");
        if level >= delta {
            cover.min_max = level;
            return Ok(cover);
        }
        let p = rv_normalize(&samples[worst], max_word_len)?;
        for (c, z) in coverage.iter_mut().zip(samples) {
            let v = evaluate(&p, z)?;
            *c = c.max((v.trace() / c64(2.0, 0.0)).norm());
        }
        cover.polys.push(p);
        cover.centers.push(worst);
    }
    let (worst, &level) = coverage
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    if level >= delta {
        cover.min_max = level;
        return Ok(cover);
    }
    Err(Error::SearchFailed(format!(
        "sample {worst} is covered only to {level:e} < {delta}"
    )))
}
